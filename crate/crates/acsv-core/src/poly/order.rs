//! Monomial orders: graded reverse lexicographic (the default), pure
//! lexicographic, and block elimination orders, all optionally composed with
//! a variable permutation.
//!
//! The permutation makes elimination cheap to express: to eliminate an
//! arbitrary subset of variables we compare exponent vectors *as if* those
//! variables had been moved to the front, without rewriting any polynomials.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::Monomial;

/// The comparison rule used on monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderKind {
    /// Graded reverse lexicographic: higher total degree wins; ties broken by
    /// the *last* variable in which the exponents differ, smaller exponent
    /// winning.
    GrevLex,
    /// Pure lexicographic: the first variable in which the exponents differ
    /// decides, larger exponent winning.
    Lex,
    /// Two-block elimination order: the first `block` variables (after the
    /// permutation) are compared by grevlex first, so any monomial touching
    /// the block dominates every monomial that avoids it.  The remaining
    /// variables are compared by grevlex to break ties.
    Elim(usize),
}

/// A monomial order: a comparison kind plus an optional variable permutation.
///
/// With a permutation `perm`, position `i` of the comparison reads exponent
/// `perm[i]`.  `perm == None` means the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermOrder {
    kind: OrderKind,
    perm: Option<Box<[usize]>>,
}

impl TermOrder {
    /// Graded reverse lexicographic order on the ring's variables.
    pub fn grevlex() -> Self {
        TermOrder { kind: OrderKind::GrevLex, perm: None }
    }

    /// Pure lexicographic order on the ring's variables.
    pub fn lex() -> Self {
        TermOrder { kind: OrderKind::Lex, perm: None }
    }

    /// Elimination order whose first block is the first `block` variables.
    pub fn elim(block: usize) -> Self {
        TermOrder { kind: OrderKind::Elim(block), perm: None }
    }

    /// Attach a variable permutation: comparison position `i` will read
    /// exponent `perm[i]`.  `perm` must be a permutation of `0..perm.len()`.
    pub fn with_perm(mut self, perm: Vec<usize>) -> Self {
        debug_assert!(is_permutation(&perm));
        self.perm = Some(perm.into_boxed_slice());
        self
    }

    /// Elimination order for an arbitrary variable subset: compares the
    /// variables in `eliminated` (as a grevlex block) before everything else.
    /// `nvars` is the total number of ring variables.
    pub fn eliminating(eliminated: &[usize], nvars: usize) -> Self {
        let mut perm: Vec<usize> = eliminated.to_vec();
        for v in 0..nvars {
            if !eliminated.contains(&v) {
                perm.push(v);
            }
        }
        TermOrder::elim(eliminated.len()).with_perm(perm)
    }

    pub fn kind(&self) -> &OrderKind {
        &self.kind
    }

    /// True for plain (unpermuted) grevlex, the canonical cached order.
    pub fn is_grevlex(&self) -> bool {
        matches!(self.kind, OrderKind::GrevLex) && self.perm.is_none()
    }

    #[inline]
    fn exp_at(&self, m: &Monomial, pos: usize) -> u16 {
        match &self.perm {
            None => m.exp(pos),
            Some(p) => m.exp(p[pos]),
        }
    }

    /// Compare two monomials; `Greater` means `a` is larger in this order.
    pub fn cmp(&self, a: &Monomial, b: &Monomial, nvars: usize) -> Ordering {
        match self.kind {
            OrderKind::Lex => {
                for i in 0..nvars {
                    let (ea, eb) = (self.exp_at(a, i), self.exp_at(b, i));
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                }
                Ordering::Equal
            }
            OrderKind::GrevLex => self.cmp_grevlex_block(a, b, 0, nvars),
            OrderKind::Elim(k) => self
                .cmp_grevlex_block(a, b, 0, k)
                .then_with(|| self.cmp_grevlex_block(a, b, k, nvars)),
        }
    }

    /// Grevlex comparison restricted to comparison positions `lo..hi`.
    fn cmp_grevlex_block(&self, a: &Monomial, b: &Monomial, lo: usize, hi: usize) -> Ordering {
        let mut da: u64 = 0;
        let mut db: u64 = 0;
        for i in lo..hi {
            da += self.exp_at(a, i) as u64;
            db += self.exp_at(b, i) as u64;
        }
        if da != db {
            return da.cmp(&db);
        }
        // Equal degree: the last position where they differ decides, with the
        // *smaller* exponent belonging to the larger monomial.
        for i in (lo..hi).rev() {
            let (ea, eb) = (self.exp_at(a, i), self.exp_at(b, i));
            if ea != eb {
                return eb.cmp(&ea);
            }
        }
        Ordering::Equal
    }

    /// True if this order ranks every monomial containing one of the first
    /// `k` comparison positions above every monomial avoiding them, i.e. it
    /// is an elimination order for that block.
    pub fn eliminates_block(&self, k: usize) -> bool {
        match self.kind {
            OrderKind::Lex => true, // lex eliminates any prefix
            OrderKind::Elim(b) => k <= b,
            OrderKind::GrevLex => k == 0,
        }
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = alloc::vec![false; p.len()];
    for &i in p {
        if i >= p.len() || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(exps: &[u16]) -> Monomial {
        Monomial::from_exponents(exps)
    }

    #[test]
    fn grevlex_ranks_degree_first_then_reverse_lex() {
        let o = TermOrder::grevlex();
        // x*y^2 (deg 3) > x*y (deg 2)
        assert_eq!(o.cmp(&m(&[1, 2]), &m(&[1, 1]), 2), Ordering::Greater);
        // deg tie: x > y because y's exponent decides (smaller last entry wins)
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 1]), 2), Ordering::Greater);
        // classic grevlex vs grlex separator: x*z vs y^2 in x>y>z
        // deg tie, last difference at z: x*z has 1, y^2 has 0 -> y^2 bigger
        assert_eq!(o.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0]), 3), Ordering::Less);
    }

    #[test]
    fn lex_ignores_degree() {
        let o = TermOrder::lex();
        // x > y^5 under lex
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 5]), 2), Ordering::Greater);
    }

    #[test]
    fn elim_block_dominates() {
        // eliminate variable 2 of three: any monomial containing it is larger
        let o = TermOrder::eliminating(&[2], 3);
        assert_eq!(o.cmp(&m(&[0, 0, 1]), &m(&[7, 9, 0]), 3), Ordering::Greater);
        // within the non-block part, grevlex applies
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 1, 0]), 3), Ordering::Greater);
    }

    #[test]
    fn permutation_reindexes_comparisons() {
        // lex comparing variable 1 first, then variable 0
        let o = TermOrder::lex().with_perm(alloc::vec![1, 0]);
        assert_eq!(o.cmp(&m(&[5, 0]), &m(&[0, 1]), 2), Ordering::Less);
    }
}
