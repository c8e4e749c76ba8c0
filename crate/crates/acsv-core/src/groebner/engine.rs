//! Buchberger's algorithm over primitive integer term lists.
//!
//! Rational input is scaled to integer coefficients with content 1 and a
//! positive leading coefficient; all reductions are fraction-free
//! (pseudo-reductions by a gcd-adjusted scalar), which avoids the rational
//! gcd normalization that dominates naive implementations.  Pair management
//! uses the Gebauer-Moeller criteria and the sugar-degree selection
//! strategy.  Output bases are reduced: minimal lead terms, fully
//! tail-reduced, primitive.
//!
//! Degrees are capped by the u16 exponent range of [`Monomial`]; inputs whose
//! intermediate results exceed it abort with a clear panic message, which in
//! practice only adversarially huge degrees can trigger.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::{Monomial, Polynomial, Ring, TermOrder};
use crate::rat::Rat;

/// Integer term list, sorted descending under the engine's working order.
pub(crate) type ZTerms = Vec<(Monomial, BigInt)>;

pub(crate) struct Engine {
    order: TermOrder,
    nvars: usize,
}

impl Engine {
    pub fn new(order: TermOrder, nvars: usize) -> Engine {
        Engine { order, nvars }
    }

    #[inline]
    fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.cmp(a, b, self.nvars)
    }

    /// Convert from the rational world: sort by the working order, clear
    /// denominators, strip content, make the leading coefficient positive.
    pub fn from_poly(&self, p: &Polynomial) -> ZTerms {
        let mut denom_lcm = BigInt::one();
        for (_, c) in p.terms() {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let mut t: ZTerms = p
            .terms()
            .iter()
            .map(|(m, c)| (*m, c.numer() * (&denom_lcm / c.denom())))
            .collect();
        t.sort_by(|(a, _), (b, _)| self.cmp(b, a));
        make_primitive(&mut t);
        t
    }

    /// Convert to integer terms without content stripping or sign
    /// normalization; returns the positive scalar `s` with `terms = s * p`.
    pub fn from_poly_with_scale(&self, p: &Polynomial) -> (ZTerms, BigInt) {
        let mut denom_lcm = BigInt::one();
        for (_, c) in p.terms() {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let mut t: ZTerms = p
            .terms()
            .iter()
            .map(|(m, c)| (*m, c.numer() * (&denom_lcm / c.denom())))
            .collect();
        t.sort_by(|(a, _), (b, _)| self.cmp(b, a));
        (t, denom_lcm)
    }

    /// Convert back to a monic rational polynomial.
    pub fn to_poly(&self, t: &ZTerms, ring: &Ring) -> Polynomial {
        if t.is_empty() {
            return Polynomial::zero(ring);
        }
        let lc = t[0].1.clone();
        Polynomial::from_terms(
            ring,
            t.iter().map(|(m, c)| (*m, Rat::new(c.clone(), lc.clone()))),
        )
    }

    /// `ca * (sa . a) + cb * (sb . b)` where `.` is a monomial shift; the
    /// result is merged and zero-free but *not* content-normalized.
    fn combine(
        &self,
        a: &ZTerms,
        ca: &BigInt,
        sa: &Monomial,
        b: &ZTerms,
        cb: &BigInt,
        sb: &Monomial,
    ) -> ZTerms {
        let mut out: ZTerms = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let ma = a[i].0.mul(sa).expect("degree beyond supported range");
            let mb = b[j].0.mul(sb).expect("degree beyond supported range");
            match self.cmp(&ma, &mb) {
                Ordering::Greater => {
                    out.push((ma, ca * &a[i].1));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb, cb * &b[j].1));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = ca * &a[i].1 + cb * &b[j].1;
                    if !c.is_zero() {
                        out.push((ma, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        for (m, c) in &a[i..] {
            out.push((m.mul(sa).expect("degree beyond supported range"), ca * c));
        }
        for (m, c) in &b[j..] {
            out.push((m.mul(sb).expect("degree beyond supported range"), cb * c));
        }
        out
    }

    /// S-polynomial of `f` and `g` (leading terms cancel exactly).
    fn spoly(&self, f: &ZTerms, g: &ZTerms) -> ZTerms {
        let u = f[0].0.lcm(&g[0].0);
        let sf = u.try_div(&f[0].0).expect("lcm divisible");
        let sg = u.try_div(&g[0].0).expect("lcm divisible");
        let gamma = f[0].1.gcd(&g[0].1);
        let cf = &g[0].1 / &gamma;
        let cg = -(&f[0].1 / &gamma);
        self.combine(f, &cf, &sf, g, &cg, &sg)
    }

    /// Fully reduce `p` modulo `basis` (head and tail).  Returns the
    /// primitive normal form; a nonzero scalar multiple of the true rational
    /// normal form, which is all ideal-membership style callers need.
    pub fn normal_form(&self, p: ZTerms, basis: &[ZTerms]) -> ZTerms {
        let (mut r, _) = self.normal_form_inner(p, basis, true);
        make_primitive(&mut r);
        r
    }

    /// Like [`Engine::normal_form`] but tracks the accumulated multiplier
    /// `A` so the exact rational normal form `result / A` can be recovered.
    /// No intermediate content stripping, so `A` is exact.
    pub fn normal_form_scaled(&self, p: ZTerms, basis: &[ZTerms]) -> (ZTerms, BigInt) {
        self.normal_form_inner(p, basis, false)
    }

    fn normal_form_inner(
        &self,
        mut p: ZTerms,
        basis: &[ZTerms],
        strip: bool,
    ) -> (ZTerms, BigInt) {
        let mut scale = BigInt::one();
        let mut pos = 0;
        let mut steps_since_strip = 0usize;
        'scan: while pos < p.len() {
            let m = p[pos].0;
            // pick the dividing reducer with the fewest terms
            let mut best: Option<usize> = None;
            for (gi, g) in basis.iter().enumerate() {
                if !g.is_empty() && g[0].0.divides(&m) {
                    if best.map_or(true, |b| g.len() < basis[b].len()) {
                        best = Some(gi);
                    }
                }
            }
            let Some(gi) = best else {
                pos += 1;
                continue 'scan;
            };
            let g = &basis[gi];
            let shift = m.try_div(&g[0].0).expect("divides");
            let gamma = p[pos].1.gcd(&g[0].1);
            let a = &g[0].1 / &gamma; // positive: leading coeffs are positive
            let b = -(&p[pos].1 / &gamma);
            debug_assert!(a.is_positive());
            scale *= &a;
            // prefix keeps its monomials (only scaled); suffix is re-merged
            for (_, c) in p.iter_mut().take(pos) {
                *c *= &a;
            }
            let suffix = self.combine(
                &p[pos..].to_vec(),
                &a,
                &Monomial::one(),
                g,
                &b,
                &shift,
            );
            p.truncate(pos);
            p.extend(suffix);
            steps_since_strip += 1;
            if strip && steps_since_strip >= 16 {
                make_primitive(&mut p);
                steps_since_strip = 0;
                // scale is meaningless in strip mode; reset to keep it small
                scale = BigInt::one();
            }
        }
        (p, scale)
    }

    /// The reduced Groebner basis of the ideal generated by `gens`:
    /// pairwise non-divisible lead terms, fully tail-reduced, primitive,
    /// sorted descending by leading monomial.
    pub fn buchberger(&self, gens: Vec<ZTerms>) -> Vec<ZTerms> {
        let mut basis: Vec<ZTerms> = Vec::new();
        for g in gens {
            if g.is_empty() {
                continue;
            }
            if g[0].0.is_one() {
                return alloc::vec![alloc::vec![(Monomial::one(), BigInt::one())]];
            }
            if !basis.contains(&g) {
                basis.push(g);
            }
        }
        if basis.is_empty() {
            return Vec::new();
        }
        // deterministic start order: by lead monomial ascending, then length
        basis.sort_by(|a, b| self.cmp(&a[0].0, &b[0].0).then(a.len().cmp(&b.len())));

        let mut sugars: Vec<u32> = basis.iter().map(|g| degree_of(g)).collect();
        let mut pairs: Vec<Pair> = Vec::new();
        let n0 = basis.len();
        for t in 0..n0 {
            self.update_pairs(&mut pairs, &basis, &sugars, t);
        }

        while !pairs.is_empty() {
            // sugar selection: min (sugar, lcm degree, lcm order, i, j)
            let mut sel = 0;
            for k in 1..pairs.len() {
                if self.pair_less(&pairs[k], &pairs[sel]) {
                    sel = k;
                }
            }
            let pair = pairs.swap_remove(sel);
            let s = self.spoly(&basis[pair.i], &basis[pair.j]);
            let nf = self.normal_form(s, &basis);
            if nf.is_empty() {
                continue;
            }
            if nf[0].0.is_one() {
                return alloc::vec![alloc::vec![(Monomial::one(), BigInt::one())]];
            }
            basis.push(nf);
            sugars.push(pair.sugar.max(degree_of(basis.last().unwrap())));
            let t = basis.len() - 1;
            self.update_pairs(&mut pairs, &basis, &sugars, t);
        }

        self.reduce_basis(basis)
    }

    fn pair_less(&self, a: &Pair, b: &Pair) -> bool {
        (a.sugar, a.deg)
            .cmp(&(b.sugar, b.deg))
            .then_with(|| self.cmp(&a.lcm, &b.lcm))
            .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)))
            == Ordering::Less
    }

    /// Gebauer-Moeller update: add all pairs `(i, t)` for `i < t`, pruning
    /// with the chain criterion on old pairs and the divisibility / coprime
    /// criteria on new ones.
    fn update_pairs(&self, pairs: &mut Vec<Pair>, basis: &[ZTerms], sugars: &[u32], t: usize) {
        let lt_t = &basis[t][0].0;
        // chain criterion against existing pairs
        pairs.retain(|p| {
            let keep = !(lt_t.divides(&p.lcm)
                && basis[p.i][0].0.lcm(lt_t) != p.lcm
                && basis[p.j][0].0.lcm(lt_t) != p.lcm);
            keep
        });
        // candidate new pairs
        let cand: Vec<Pair> = (0..t)
            .map(|i| self.make_pair(basis, sugars, i, t))
            .collect();
        // drop candidates whose lcm is a proper multiple of another's
        let mut keep = alloc::vec![true; cand.len()];
        for a in 0..cand.len() {
            if !keep[a] {
                continue;
            }
            for b in 0..cand.len() {
                if a == b || !keep[a] {
                    continue;
                }
                if keep[b] && cand[b].lcm.divides(&cand[a].lcm) && cand[b].lcm != cand[a].lcm {
                    keep[a] = false;
                }
            }
        }
        // group equal lcms: if any member is coprime the whole class dies,
        // otherwise keep exactly one representative (smallest i)
        let mut result: Vec<Pair> = Vec::new();
        for a in 0..cand.len() {
            if !keep[a] {
                continue;
            }
            let mut class_has_coprime =
                basis[cand[a].i][0].0.coprime(lt_t);
            let mut representative = a;
            for b in (a + 1)..cand.len() {
                if keep[b] && cand[b].lcm == cand[a].lcm {
                    keep[b] = false;
                    if basis[cand[b].i][0].0.coprime(lt_t) {
                        class_has_coprime = true;
                    }
                    if cand[b].i < cand[representative].i {
                        representative = b;
                    }
                }
            }
            keep[a] = false;
            if !class_has_coprime {
                result.push(cand[representative].clone());
            }
        }
        pairs.extend(result);
    }

    fn make_pair(&self, basis: &[ZTerms], sugars: &[u32], i: usize, j: usize) -> Pair {
        let u = basis[i][0].0.lcm(&basis[j][0].0);
        let si = sugars[i] + (u.total_degree() - basis[i][0].0.total_degree());
        let sj = sugars[j] + (u.total_degree() - basis[j][0].0.total_degree());
        Pair { i, j, lcm: u, deg: u.total_degree(), sugar: si.max(sj) }
    }

    /// Minimalize and inter-reduce a Groebner basis.
    fn reduce_basis(&self, basis: Vec<ZTerms>) -> Vec<ZTerms> {
        // minimal: drop members whose lead is divisible by another lead
        let mut keep: Vec<bool> = alloc::vec![true; basis.len()];
        for a in 0..basis.len() {
            if !keep[a] {
                continue;
            }
            for b in 0..basis.len() {
                if a != b
                    && keep[b]
                    && basis[b][0].0.divides(&basis[a][0].0)
                    && (basis[b][0].0 != basis[a][0].0 || b < a)
                {
                    keep[a] = false;
                    break;
                }
            }
        }
        let minimal: Vec<ZTerms> = basis
            .into_iter()
            .zip(keep)
            .filter_map(|(g, k)| k.then_some(g))
            .collect();
        // tail-reduce each member against the others
        let mut out: Vec<ZTerms> = Vec::with_capacity(minimal.len());
        for i in 0..minimal.len() {
            let others: Vec<ZTerms> = minimal
                .iter()
                .enumerate()
                .filter_map(|(j, g)| (j != i).then(|| g.clone()))
                .collect();
            let r = self.normal_form(minimal[i].clone(), &others);
            debug_assert!(!r.is_empty(), "minimal basis member reduced to zero");
            out.push(r);
        }
        out.sort_by(|a, b| self.cmp(&b[0].0, &a[0].0));
        out
    }
}

#[derive(Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    deg: u32,
    sugar: u32,
}

fn degree_of(g: &ZTerms) -> u32 {
    g.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
}

/// Divide by the integer content and normalize the leading sign.
pub(crate) fn make_primitive(t: &mut ZTerms) {
    if t.is_empty() {
        return;
    }
    let mut content = BigInt::zero();
    for (_, c) in t.iter() {
        content = content.gcd(c);
        if content.is_one() {
            break;
        }
    }
    if t[0].1.is_negative() {
        content = -content;
    }
    if !content.is_one() {
        for (_, c) in t.iter_mut() {
            *c = &*c / &content;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn setup(vars: &[&str], order: TermOrder) -> (Ring, Engine) {
        let ring = Ring::new(vars).unwrap();
        let n = ring.nvars();
        (ring, Engine::new(order, n))
    }

    fn zp(e: &Engine, r: &Ring, s: &str) -> ZTerms {
        e.from_poly(&parse_polynomial(s, r).unwrap())
    }

    #[test]
    fn roundtrip_and_primitivity() {
        let (ring, e) = setup(&["x", "y"], TermOrder::grevlex());
        let t = zp(&e, &ring, "1/2*x^2 + 1/3*y");
        // cleared to 3x^2 + 2y
        assert_eq!(t[0].1, BigInt::from(3));
        assert_eq!(t[1].1, BigInt::from(2));
        let back = e.to_poly(&t, &ring);
        assert_eq!(back, parse_polynomial("x^2 + 2/3*y", &ring).unwrap());
    }

    #[test]
    fn normal_form_reduces_fully() {
        let (ring, e) = setup(&["x", "y"], TermOrder::grevlex());
        let basis = alloc::vec![zp(&e, &ring, "x^2 - y"), zp(&e, &ring, "y^2 - 1")];
        // x^4 -> y^2 -> 1
        let nf = e.normal_form(zp(&e, &ring, "x^4"), &basis);
        assert_eq!(e.to_poly(&nf, &ring), parse_polynomial("1", &ring).unwrap());
        // x^3 = x*(x^2 - y) + x*y, and x*y is irreducible
        let nf2 = e.normal_form(zp(&e, &ring, "x^3"), &basis);
        assert_eq!(
            e.to_poly(&nf2, &ring),
            parse_polynomial("x*y", &ring).unwrap()
        );
        // x^2*y - y^2 = y*(x^2 - y) lies in the ideal
        let nf3 = e.normal_form(zp(&e, &ring, "x^2*y - y^2"), &basis);
        assert!(nf3.is_empty());
    }

    #[test]
    fn buchberger_on_a_textbook_pair() {
        // <x^2 + y^2 - 1, x - y> has reduced grevlex basis {y^2 - 1/2, x - y},
        // listed descending by leading monomial
        let (ring, e) = setup(&["x", "y"], TermOrder::grevlex());
        let gens = alloc::vec![zp(&e, &ring, "x^2 + y^2 - 1"), zp(&e, &ring, "x - y")];
        let gb = e.buchberger(gens);
        let polys: Vec<Polynomial> = gb.iter().map(|g| e.to_poly(g, &ring).monic()).collect();
        assert_eq!(polys.len(), 2);
        assert_eq!(polys[0], parse_polynomial("y^2 - 1/2", &ring).unwrap());
        assert_eq!(polys[1], parse_polynomial("x - y", &ring).unwrap());
    }

    #[test]
    fn unit_ideal_detected() {
        let (ring, e) = setup(&["x"], TermOrder::grevlex());
        let gens = alloc::vec![zp(&e, &ring, "x"), zp(&e, &ring, "x - 1")];
        let gb = e.buchberger(gens);
        assert_eq!(gb.len(), 1);
        assert!(gb[0][0].0.is_one());
    }
}
