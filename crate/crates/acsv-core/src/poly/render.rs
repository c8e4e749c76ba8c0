//! Deterministic text rendering of polynomials.
//!
//! Terms print in descending grevlex order with explicit `*` between factors
//! and `^` for powers, e.g. `-x*y^2 - 2*x*y - x + y + 2`.  Rendering is the
//! inverse of the parser on canonical output: parse(render(p)) == p.

use alloc::string::String;
use core::fmt;

use num_traits::{One, Signed};

use crate::rat::{rat_to_string, Rat};

use super::{Monomial, Polynomial, Ring};

fn push_monomial(out: &mut String, m: &Monomial, ring: &Ring) {
    let mut first = true;
    for i in 0..ring.nvars() {
        let e = m.exp(i);
        if e == 0 {
            continue;
        }
        if !first {
            out.push('*');
        }
        first = false;
        out.push_str(ring.name(i));
        if e > 1 {
            out.push('^');
            out.push_str(itoa(e).as_str());
        }
    }
}

fn itoa(mut e: u16) -> String {
    if e == 0 {
        return String::from("0");
    }
    let mut buf = [0u8; 5];
    let mut i = buf.len();
    while e > 0 {
        i -= 1;
        buf[i] = b'0' + (e % 10) as u8;
        e /= 10;
    }
    String::from_utf8_lossy(&buf[i..]).into_owned()
}

fn push_term(out: &mut String, m: &Monomial, c: &Rat, ring: &Ring, leading: bool) {
    let neg = c.is_negative();
    let abs = c.abs();
    if leading {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if m.is_one() {
        out.push_str(&rat_to_string(&abs));
        return;
    }
    if !abs.is_one() {
        out.push_str(&rat_to_string(&abs));
        out.push('*');
    }
    push_monomial(out, m, ring);
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms().iter().enumerate() {
            push_term(&mut out, m, c, self.ring(), i == 0);
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_polynomial, Ring};
    use alloc::string::ToString;

    #[test]
    fn canonical_rendering_examples() {
        let r = Ring::new(&["x", "y"]).unwrap();
        let f = parse_polynomial("2 - x*y^2 - 2*x*y - x + y", &r).unwrap();
        assert_eq!(f.to_string(), "-x*y^2 - 2*x*y - x + y + 2");
        let g = parse_polynomial("y - x", &r).unwrap();
        assert_eq!(g.to_string(), "-x + y");
        let h = parse_polynomial("1/2*x^2 - 3/4", &r).unwrap();
        assert_eq!(h.to_string(), "1/2*x^2 - 3/4");
        let zero = parse_polynomial("x - x", &r).unwrap();
        assert_eq!(zero.to_string(), "0");
    }

    #[test]
    fn render_parse_fixpoint() {
        let r = Ring::new(&["w", "x", "y", "z"]).unwrap();
        for src in [
            "w^3*x - 2*y*z + 5",
            "-w + x - y + z - 1/7",
            "x^2*y^2*z^2 + x*y*z",
            "42",
            "-1/3",
        ] {
            let p = parse_polynomial(src, &r).unwrap();
            let rendered = p.to_string();
            let q = parse_polynomial(&rendered, &r).unwrap();
            assert_eq!(p, q);
            assert_eq!(rendered, q.to_string());
        }
    }
}
