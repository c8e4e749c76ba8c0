//! Ideals and the operations the rest of the crate is built from: Groebner
//! bases under configurable term orders, normal forms, elimination,
//! saturation, intersection, radical membership, and Krull dimension.
//!
//! All computations are exact and deterministic: the same generators in any
//! order produce the identical reduced basis.

mod engine;

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_bigint::BigInt;
use once_cell::race::OnceBox;

use crate::poly::{PolyError, Polynomial, Ring, TermOrder};
use crate::rat::Rat;
use engine::Engine;

/// An ideal in a polynomial ring, with a lazily computed (and cached)
/// reduced grevlex Groebner basis.
pub struct Ideal {
    ring: Ring,
    gens: Vec<Polynomial>,
    grevlex: OnceBox<Vec<Polynomial>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Ideal {
        let cache = OnceBox::new();
        if let Some(b) = self.grevlex.get() {
            let _ = cache.set(Box::new(b.clone()));
        }
        Ideal { ring: self.ring.clone(), gens: self.gens.clone(), grevlex: cache }
    }
}

impl core::fmt::Debug for Ideal {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_list().entries(self.gens.iter()).finish()
    }
}

impl Ideal {
    /// Build an ideal from generators (zero generators are dropped).
    pub fn new(ring: &Ring, gens: Vec<Polynomial>) -> Result<Ideal, PolyError> {
        for g in &gens {
            if g.ring() != ring {
                return Err(PolyError::RingMismatch);
            }
        }
        let gens: Vec<Polynomial> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal { ring: ring.clone(), gens, grevlex: OnceBox::new() })
    }

    /// An ideal whose generators are already its reduced grevlex basis.
    fn seeded(ring: Ring, basis: Vec<Polynomial>) -> Ideal {
        let cache = OnceBox::new();
        let _ = cache.set(Box::new(basis.clone()));
        Ideal { ring, gens: basis, grevlex: cache }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    /// True for the zero ideal (no nonzero generators).
    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    /// The reduced, monic Groebner basis under `order`, sorted descending by
    /// leading monomial.  Grevlex results are cached on the ideal.
    pub fn groebner_basis(&self, order: &TermOrder) -> Vec<Polynomial> {
        if order.is_grevlex() {
            return self.grevlex_basis().clone();
        }
        self.compute_basis(order)
    }

    fn grevlex_basis(&self) -> &Vec<Polynomial> {
        self.grevlex
            .get_or_init(|| Box::new(self.compute_basis(&TermOrder::grevlex())))
    }

    fn compute_basis(&self, order: &TermOrder) -> Vec<Polynomial> {
        let eng = Engine::new(order.clone(), self.ring.nvars());
        let zgens = self.gens.iter().map(|g| eng.from_poly(g)).collect();
        eng.buchberger(zgens)
            .iter()
            .map(|g| eng.to_poly(g, &self.ring))
            .collect()
    }

    /// True if the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        let b = self.grevlex_basis();
        b.len() == 1 && b[0].is_constant() && !b[0].is_zero()
    }

    /// Exact normal form of `p` modulo the ideal: `p - reduce(p)` lies in
    /// the ideal and no term of the result is divisible by a basis lead.
    pub fn reduce(&self, p: &Polynomial) -> Result<Polynomial, PolyError> {
        if p.ring() != &self.ring {
            return Err(PolyError::RingMismatch);
        }
        let eng = Engine::new(TermOrder::grevlex(), self.ring.nvars());
        let basis: Vec<_> = self.grevlex_basis().iter().map(|g| eng.from_poly(g)).collect();
        // normal forms are linear, so computing on denom_lcm * p and
        // dividing back out by denom_lcm * multiplier stays exact
        let (zp, pre) = eng.from_poly_with_scale(p);
        let (r, scale) = eng.normal_form_scaled(zp, &basis);
        let denom: BigInt = &pre * &scale;
        Ok(Polynomial::from_terms(
            &self.ring,
            r.into_iter().map(|(m, c)| (m, Rat::new(c, denom.clone()))),
        ))
    }

    /// Ideal membership.
    pub fn member(&self, p: &Polynomial) -> Result<bool, PolyError> {
        if p.ring() != &self.ring {
            return Err(PolyError::RingMismatch);
        }
        if p.is_zero() {
            return Ok(true);
        }
        let eng = Engine::new(TermOrder::grevlex(), self.ring.nvars());
        let basis: Vec<_> = self.grevlex_basis().iter().map(|g| eng.from_poly(g)).collect();
        Ok(eng.normal_form(eng.from_poly(p), &basis).is_empty())
    }

    /// Radical membership: is some power of `p` in the ideal?
    pub fn radical_member(&self, p: &Polynomial) -> Result<bool, PolyError> {
        if p.ring() != &self.ring {
            return Err(PolyError::RingMismatch);
        }
        if p.is_zero() {
            return Ok(true);
        }
        let tname = self.ring.fresh_name("t");
        let ext = self.ring.extend(&[&tname])?;
        let t = Polynomial::variable(&ext, ext.nvars() - 1)?;
        let mut gens: Vec<Polynomial> = Vec::with_capacity(self.gens.len() + 1);
        for g in &self.gens {
            gens.push(g.lift_to(&ext)?);
        }
        let one = Polynomial::one(&ext);
        gens.push(one.try_sub(&t.try_mul(&p.lift_to(&ext)?)?)?);
        Ok(Ideal::new(&ext, gens)?.is_unit())
    }

    /// Elimination ideal `I ∩ k[keep]`: the ideal of all members involving
    /// only the listed variables, returned in the same ring with its grevlex
    /// basis pre-seeded.  The keep set must be nonempty.
    pub fn eliminate(&self, keep: &[usize]) -> Result<Ideal, PolyError> {
        let n = self.ring.nvars();
        if keep.is_empty() {
            return Err(PolyError::EmptyKeepSet);
        }
        for &v in keep {
            if v >= n {
                return Err(PolyError::BadVariableIndex(v));
            }
        }
        let eliminated: Vec<usize> = (0..n).filter(|v| !keep.contains(v)).collect();
        self.eliminate_vars(&eliminated)
    }

    /// Eliminate the listed variables (complement view of [`Ideal::eliminate`]).
    fn eliminate_vars(&self, eliminated: &[usize]) -> Result<Ideal, PolyError> {
        let n = self.ring.nvars();
        if eliminated.is_empty() {
            return Ok(self.clone());
        }
        let mut elim: Vec<usize> = eliminated.to_vec();
        elim.sort_unstable();
        elim.dedup();
        let order = TermOrder::eliminating(&elim, n);
        let gb = self.groebner_basis(&order);
        // Members free of the eliminated block form the elimination ideal's
        // reduced Groebner basis; restricted to the kept variables the
        // elimination order coincides with grevlex, so the cache can be
        // seeded directly.
        let kept: Vec<Polynomial> = gb
            .into_iter()
            .filter(|g| elim.iter().all(|&v| !g.involves(v)))
            .collect();
        Ok(Ideal::seeded(self.ring.clone(), kept))
    }

    /// Saturation `I : f^inf`.
    pub fn saturate(&self, f: &Polynomial) -> Result<Ideal, PolyError> {
        if f.ring() != &self.ring {
            return Err(PolyError::RingMismatch);
        }
        if f.is_zero() {
            return Err(PolyError::ZeroSaturant);
        }
        if f.is_constant() {
            return Ok(self.clone());
        }
        let tname = self.ring.fresh_name("t");
        let ext = self.ring.extend(&[&tname])?;
        let ti = ext.nvars() - 1;
        let t = Polynomial::variable(&ext, ti)?;
        let mut gens: Vec<Polynomial> = Vec::with_capacity(self.gens.len() + 1);
        for g in &self.gens {
            gens.push(g.lift_to(&ext)?);
        }
        gens.push(t.try_mul(&f.lift_to(&ext)?)?.try_sub(&Polynomial::one(&ext))?);
        let elim = Ideal::new(&ext, gens)?.eliminate_vars(&[ti])?;
        let back: Result<Vec<Polynomial>, PolyError> =
            elim.gens.iter().map(|g| g.project_to(&self.ring)).collect();
        Ok(Ideal::seeded(self.ring.clone(), back?))
    }

    /// Saturate successively by each polynomial in `fs`.
    pub fn saturate_all(&self, fs: &[Polynomial]) -> Result<Ideal, PolyError> {
        let mut acc = self.clone();
        for f in fs {
            acc = acc.saturate(f)?;
        }
        Ok(acc)
    }

    /// Saturation `I : J^inf`, computed as the intersection of the
    /// saturations by each generator of `J`.
    pub fn saturate_ideal(&self, other: &Ideal) -> Result<Ideal, PolyError> {
        if other.ring != self.ring {
            return Err(PolyError::RingMismatch);
        }
        if other.gens.is_empty() {
            return Err(PolyError::ZeroSaturant);
        }
        let mut acc: Option<Ideal> = None;
        for g in &other.gens {
            let s = self.saturate(g)?;
            acc = Some(match acc {
                None => s,
                Some(a) => a.intersect(&s)?,
            });
        }
        Ok(acc.expect("nonempty generators"))
    }

    /// Intersection of two ideals.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal, PolyError> {
        if other.ring != self.ring {
            return Err(PolyError::RingMismatch);
        }
        let tname = self.ring.fresh_name("t");
        let ext = self.ring.extend(&[&tname])?;
        let ti = ext.nvars() - 1;
        let t = Polynomial::variable(&ext, ti)?;
        let one_minus_t = Polynomial::one(&ext).try_sub(&t)?;
        let mut gens: Vec<Polynomial> = Vec::new();
        for g in &self.gens {
            gens.push(t.try_mul(&g.lift_to(&ext)?)?);
        }
        for g in &other.gens {
            gens.push(one_minus_t.try_mul(&g.lift_to(&ext)?)?);
        }
        let elim = Ideal::new(&ext, gens)?.eliminate_vars(&[ti])?;
        let back: Result<Vec<Polynomial>, PolyError> =
            elim.gens.iter().map(|g| g.project_to(&self.ring)).collect();
        Ok(Ideal::seeded(self.ring.clone(), back?))
    }

    /// Krull dimension of the quotient ring: the size of the largest set of
    /// variables independent modulo the lead-term ideal.  `-1` for the unit
    /// ideal; the ring dimension for the zero ideal.
    pub fn dimension(&self) -> Result<i64, PolyError> {
        let n = self.ring.nvars();
        if n > 24 {
            return Err(PolyError::TooManyVars(n));
        }
        if self.is_unit() {
            return Ok(-1);
        }
        let leads: Vec<u32> = self
            .grevlex_basis()
            .iter()
            .filter_map(|g| g.terms().first())
            .map(|(m, _)| {
                let mut mask = 0u32;
                for v in 0..n {
                    if m.exp(v) != 0 {
                        mask |= 1 << v;
                    }
                }
                mask
            })
            .collect();
        fn explore(leads: &[u32], n: usize, chosen: u32, from: usize) -> u32 {
            let mut best = chosen.count_ones();
            for v in from..n {
                let s = chosen | (1 << v);
                // independent iff no lead's support is contained in s
                if leads.iter().all(|l| l & !s != 0) {
                    best = best.max(explore(leads, n, s, v + 1));
                }
            }
            best
        }
        Ok(explore(&leads, n, 0, 0) as i64)
    }

    /// Ideal equality via canonical reduced bases.
    pub fn equals(&self, other: &Ideal) -> Result<bool, PolyError> {
        if other.ring != self.ring {
            return Err(PolyError::RingMismatch);
        }
        Ok(self.grevlex_basis() == other.grevlex_basis())
    }

    /// True if every generator of `other` lies in `self`.
    pub fn contains(&self, other: &Ideal) -> Result<bool, PolyError> {
        if other.ring != self.ring {
            return Err(PolyError::RingMismatch);
        }
        for g in &other.gens {
            if !self.member(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Normal form of `p` against an explicit basis under `order` (the basis
/// need not be a Groebner basis; the result is still a valid remainder).
pub fn reduce_by(
    p: &Polynomial,
    basis: &[Polynomial],
    order: &TermOrder,
) -> Result<Polynomial, PolyError> {
    for b in basis {
        if b.ring() != p.ring() {
            return Err(PolyError::RingMismatch);
        }
    }
    let ring = p.ring().clone();
    let eng = Engine::new(order.clone(), ring.nvars());
    let zb: Vec<_> = basis
        .iter()
        .filter(|b| !b.is_zero())
        .map(|b| eng.from_poly(b))
        .collect();
    let (zp, pre) = eng.from_poly_with_scale(p);
    let (r, scale) = eng.normal_form_scaled(zp, &zb);
    let denom: BigInt = &pre * &scale;
    Ok(Polynomial::from_terms(
        &ring,
        r.into_iter().map(|(m, c)| (m, Rat::new(c, denom.clone()))),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn ring_xy() -> Ring {
        Ring::new(&["x", "y"]).unwrap()
    }

    fn ideal(ring: &Ring, gens: &[&str]) -> Ideal {
        Ideal::new(
            ring,
            gens.iter().map(|s| parse_polynomial(s, ring).unwrap()).collect(),
        )
        .unwrap()
    }

    fn p(ring: &Ring, s: &str) -> Polynomial {
        parse_polynomial(s, ring).unwrap()
    }

    #[test]
    fn membership_and_reduce() {
        let r = ring_xy();
        let i = ideal(&r, &["x^2 - y", "y^2 - 1"]);
        assert!(i.member(&p(&r, "x^4 - 1")).unwrap());
        assert!(!i.member(&p(&r, "x")).unwrap());
        assert_eq!(i.reduce(&p(&r, "x^4")).unwrap(), p(&r, "1"));
        // exact rational scaling: reduce(3/2 x^2) = 3/2 y
        assert_eq!(i.reduce(&p(&r, "3/2*x^2")).unwrap(), p(&r, "3/2*y"));
    }

    #[test]
    fn elimination_keeps_the_requested_variables() {
        let r = ring_xy();
        let i = ideal(&r, &["x^2 + y^2 - 1", "x - y"]);
        // keep y (index 1): the circle/diagonal intersection projects to
        // y^2 = 1/2
        let e = i.eliminate(&[1]).unwrap();
        assert_eq!(e.generators().len(), 1);
        assert_eq!(e.generators()[0], p(&r, "y^2 - 1/2"));
        // the seeded cache agrees with a fresh computation
        let fresh = Ideal::new(&r, e.generators().to_vec()).unwrap();
        assert!(e.equals(&fresh).unwrap());
        // keeping everything is the identity; keeping nothing is an error
        let all = i.eliminate(&[0, 1]).unwrap();
        assert!(all.equals(&i).unwrap());
        assert_eq!(i.eliminate(&[]).unwrap_err(), PolyError::EmptyKeepSet);
    }

    #[test]
    fn saturation_removes_coordinate_components() {
        let r = ring_xy();
        let i = ideal(&r, &["x^2*y", "x*y^2"]);
        let s = i.saturate(&p(&r, "x")).unwrap();
        assert_eq!(s.groebner_basis(&TermOrder::grevlex()), alloc::vec![p(&r, "y")]);

        let j = ideal(&r, &["x^2 - x"]);
        let sj = j.saturate(&p(&r, "x")).unwrap();
        assert_eq!(sj.groebner_basis(&TermOrder::grevlex()), alloc::vec![p(&r, "x - 1")]);
    }

    #[test]
    fn intersection_of_coordinate_ideals() {
        let r = ring_xy();
        let a = ideal(&r, &["x"]);
        let b = ideal(&r, &["y"]);
        let c = a.intersect(&b).unwrap();
        assert_eq!(c.groebner_basis(&TermOrder::grevlex()), alloc::vec![p(&r, "x*y")]);
    }

    #[test]
    fn saturation_by_an_ideal() {
        let r = ring_xy();
        let i = ideal(&r, &["x^2", "x*y"]);
        let m = ideal(&r, &["x", "y"]);
        let s = i.saturate_ideal(&m).unwrap();
        assert_eq!(s.groebner_basis(&TermOrder::grevlex()), alloc::vec![p(&r, "x")]);
    }

    #[test]
    fn radical_membership() {
        let r = ring_xy();
        let i = ideal(&r, &["x^2"]);
        assert!(i.radical_member(&p(&r, "x")).unwrap());
        assert!(!i.member(&p(&r, "x")).unwrap());
        assert!(!i.radical_member(&p(&r, "y")).unwrap());
    }

    #[test]
    fn dimension_cases() {
        let r = ring_xy();
        assert_eq!(ideal(&r, &["x"]).dimension().unwrap(), 1);
        assert_eq!(ideal(&r, &["x", "y"]).dimension().unwrap(), 0);
        assert_eq!(ideal(&r, &["1"]).dimension().unwrap(), -1);
        assert_eq!(ideal(&r, &[]).dimension().unwrap(), 2);
    }

    #[test]
    fn generator_order_is_immaterial() {
        let r = ring_xy();
        let a = ideal(&r, &["x^2 + y^2 - 1", "x - y", "x*y - 1"]);
        let b = ideal(&r, &["x*y - 1", "x - y", "x^2 + y^2 - 1"]);
        assert_eq!(
            a.groebner_basis(&TermOrder::grevlex()),
            b.groebner_basis(&TermOrder::grevlex())
        );
    }
}
