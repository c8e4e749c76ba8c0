//! Content normalization, multivariate gcd, and squarefree parts.
//!
//! The gcd uses the least-common-multiple route: the intersection of two
//! principal ideals is generated by the lcm, and `gcd = f * g / lcm` with an
//! exact polynomial division.  This keeps everything inside the Groebner
//! machinery instead of requiring a separate factorization stack, and the
//! inputs this crate meets (denominators of generating functions and their
//! partial derivatives) stay small enough for that route.


use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::groebner::Ideal;
use crate::poly::{PolyError, Polynomial, TermOrder};
use crate::rat::Rat;

/// Scale to integer coefficients with content 1 and a positive leading
/// (grevlex) coefficient.  Zero stays zero.
pub(crate) fn primitive_part(p: &Polynomial) -> Polynomial {
    if p.is_zero() {
        return p.clone();
    }
    let mut denom_lcm = BigInt::one();
    let mut numer_gcd = BigInt::zero();
    for (_, c) in p.terms() {
        denom_lcm = denom_lcm.lcm(c.denom());
        numer_gcd = numer_gcd.gcd(c.numer());
    }
    let mut scale = Rat::new(denom_lcm, numer_gcd);
    if p.terms()[0].1.numer().sign() == num_bigint::Sign::Minus {
        scale = -scale;
    }
    p.scale(&scale)
}

/// Exact division: `Some(q)` with `q * d == n`, `None` if `d` does not
/// divide `n`.  Division by zero returns `None`.
pub(crate) fn divide_exact(n: &Polynomial, d: &Polynomial) -> Option<Polynomial> {
    if d.is_zero() {
        return None;
    }
    let ring = n.ring().clone();
    let (dm, dc) = {
        let t = d.terms().first()?;
        (t.0, t.1.clone())
    };
    let mut r = n.clone();
    let mut q = Polynomial::zero(&ring);
    while !r.is_zero() {
        let (rm, rc) = {
            let t = &r.terms()[0];
            (t.0, t.1.clone())
        };
        let m = rm.try_div(&dm)?;
        let c = rc / &dc;
        let step = Polynomial::from_terms(&ring, [(m, c)]);
        q = q.try_add(&step).ok()?;
        r = r.try_sub(&step.try_mul(d).ok()?).ok()?;
    }
    Some(q)
}

/// Greatest common divisor, primitive-normalized (so `gcd(f, f) = primitive
/// part of f` and the result of coprime inputs is `1`).
pub fn gcd(f: &Polynomial, g: &Polynomial) -> Result<Polynomial, PolyError> {
    if f.ring() != g.ring() {
        return Err(PolyError::RingMismatch);
    }
    if f.is_zero() {
        return Ok(primitive_part(g));
    }
    if g.is_zero() || f.is_constant() || g.is_constant() {
        if g.is_zero() {
            return Ok(primitive_part(f));
        }
        return Ok(Polynomial::one(f.ring()));
    }
    let ring = f.ring();
    let a = Ideal::new(ring, alloc::vec![f.clone()])?;
    let b = Ideal::new(ring, alloc::vec![g.clone()])?;
    let meet = a.intersect(&b)?;
    let basis = meet.groebner_basis(&TermOrder::grevlex());
    debug_assert_eq!(basis.len(), 1, "intersection of principal ideals is principal");
    let lcm = &basis[0];
    let prod = f.try_mul(g)?;
    let q = divide_exact(&prod, lcm).expect("lcm divides the product");
    Ok(primitive_part(&q))
}

/// The product of the distinct irreducible factors of `p`: `p` divided by
/// `gcd(p, dp/dx_1, ..., dp/dx_n)`, primitive-normalized.  Constants map to
/// `1`; zero stays zero.
pub fn squarefree_part(p: &Polynomial) -> Result<Polynomial, PolyError> {
    if p.is_zero() {
        return Ok(p.clone());
    }
    if p.is_constant() {
        return Ok(Polynomial::one(p.ring()));
    }
    let n = p.ring().nvars();
    let mut common = p.clone();
    for v in 0..n {
        if !p.involves(v) {
            continue;
        }
        common = gcd(&common, &p.partial(v)?)?;
        if common.is_constant() {
            return Ok(primitive_part(p));
        }
    }
    let q = divide_exact(p, &common).expect("gcd divides");
    Ok(primitive_part(&q))
}
