//! Sparse multivariate polynomials over the rationals.
//!
//! A [`Ring`] is a list of named variables (shared by handle); a
//! [`Polynomial`] is a term list kept sorted in descending grevlex order with
//! no zero coefficients, so structural equality is semantic equality and
//! rendering is deterministic.  [`Direction`] is the integer direction vector
//! along which coefficient arrays are read.
//!
//! The public constructor caps rings at 16 variables; internal pipelines
//! (homogenization, direction symbols, saturation tags) may extend rings up
//! to [`MAX_VARS`] total.

mod order;
mod parse;
mod render;
pub(crate) mod factor;

pub use factor::{gcd, squarefree_part};
pub use order::{OrderKind, TermOrder};
pub use parse::{parse_polynomial, ParseError};

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::Zero;

use crate::rat::{rat_one, rat_powi, Rat};

/// Hard capacity of exponent vectors (public rings are capped lower).
pub const MAX_VARS: usize = 40;

/// Maximum number of variables in a user-constructed ring.
pub const MAX_RING_VARS: usize = 16;

/// Errors from ring and polynomial construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyError {
    /// A ring needs at least one variable.
    EmptyRing,
    /// Too many variables for a user-constructed ring.
    TooManyVars(usize),
    /// Duplicate variable name in a ring.
    DuplicateVariable(String),
    /// Operands live in different rings.
    RingMismatch,
    /// Variable index out of range.
    BadVariableIndex(usize),
    /// A target ring is missing one of the source ring's variables.
    MissingVariable(String),
    /// A polynomial uses a variable that the target ring does not keep.
    NotInSubring(String),
    /// Direction vectors must have at least one nonzero entry.
    ZeroDirection,
    /// Direction length does not match the ring dimension.
    DirectionLength { expected: usize, got: usize },
    /// Exponent arithmetic exceeded the u16 range.
    ExponentOverflow,
    /// Saturation by zero (or by the zero ideal) is undefined here.
    ZeroSaturant,
    /// Elimination must keep at least one variable.
    EmptyKeepSet,
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::EmptyRing => write!(f, "a ring needs at least one variable"),
            PolyError::TooManyVars(n) => {
                write!(f, "{n} variables requested, at most {MAX_RING_VARS} supported")
            }
            PolyError::DuplicateVariable(v) => write!(f, "duplicate variable name '{v}'"),
            PolyError::RingMismatch => write!(f, "operands belong to different rings"),
            PolyError::BadVariableIndex(i) => write!(f, "variable index {i} out of range"),
            PolyError::MissingVariable(v) => {
                write!(f, "target ring does not contain variable '{v}'")
            }
            PolyError::NotInSubring(v) => {
                write!(f, "polynomial involves variable '{v}' not kept by the target ring")
            }
            PolyError::ZeroDirection => write!(f, "direction must have a nonzero entry"),
            PolyError::DirectionLength { expected, got } => {
                write!(f, "direction has {got} entries, ring has {expected} variables")
            }
            PolyError::ExponentOverflow => write!(f, "exponent exceeds the supported range"),
            PolyError::ZeroSaturant => write!(f, "cannot saturate by zero"),
            PolyError::EmptyKeepSet => {
                write!(f, "elimination must keep at least one variable")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for PolyError {}

// ---------------------------------------------------------------------------
// Monomial
// ---------------------------------------------------------------------------

/// An exponent vector.  Entries beyond the ring's variable count are zero, so
/// the derived equality and hash are semantic.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exp: [u16; MAX_VARS],
}

impl Monomial {
    /// The monomial `1`.
    pub fn one() -> Self {
        Monomial { exp: [0; MAX_VARS] }
    }

    /// The single variable `i`.
    pub fn variable(i: usize) -> Self {
        let mut m = Monomial::one();
        m.exp[i] = 1;
        m
    }

    /// Build from an explicit exponent slice (missing entries are zero).
    pub fn from_exponents(exps: &[u16]) -> Self {
        let mut m = Monomial::one();
        m.exp[..exps.len()].copy_from_slice(exps);
        m
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u16 {
        self.exp[i]
    }

    pub fn is_one(&self) -> bool {
        self.exp.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.exp.iter().map(|&e| e as u32).sum()
    }

    /// Product of monomials; errors on u16 overflow.
    pub fn mul(&self, other: &Monomial) -> Result<Monomial, PolyError> {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.exp[i] = m.exp[i]
                .checked_add(other.exp[i])
                .ok_or(PolyError::ExponentOverflow)?;
        }
        Ok(m)
    }

    /// `self / other` if `other` divides `self`.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.exp[i] = m.exp[i].checked_sub(other.exp[i])?;
        }
        Some(m)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exp.iter().zip(other.exp.iter()).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.exp[i] = m.exp[i].max(other.exp[i]);
        }
        m
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.exp[i] = m.exp[i].min(other.exp[i]);
        }
        m
    }

    /// True if the two monomials share no variable.
    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exp.iter().zip(other.exp.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Reindex exponents: new exponent at `map[i]` is the old exponent at `i`.
    fn reindex(&self, map: &[usize]) -> Monomial {
        let mut m = Monomial::one();
        for (i, &target) in map.iter().enumerate() {
            m.exp[target] = self.exp[i];
        }
        m
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = (0..MAX_VARS).rev().find(|&i| self.exp[i] != 0).map_or(0, |i| i + 1);
        write!(f, "Monomial{:?}", &self.exp[..n])
    }
}

/// The intrinsic ordering is grevlex ascending, which every ring shares; it
/// is what keeps term lists canonical independently of any working order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        TermOrder::grevlex().cmp(self, other, MAX_VARS)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// ---------------------------------------------------------------------------
// Ring
// ---------------------------------------------------------------------------

#[derive(Debug)]
struct RingInner {
    names: Vec<String>,
}

/// A polynomial ring: an ordered list of variable names, shared by handle.
/// Two rings are interchangeable exactly when their name lists are equal.
#[derive(Clone, Debug)]
pub struct Ring(Arc<RingInner>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.names == other.0.names
    }
}
impl Eq for Ring {}

impl Ring {
    /// A ring with the given variable names (1 to 16, all distinct).
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Ring, PolyError> {
        if names.len() > MAX_RING_VARS {
            return Err(PolyError::TooManyVars(names.len()));
        }
        Ring::new_internal(names)
    }

    /// Internal constructor without the user-facing cap (pipelines extend
    /// rings with homogenizing, direction, and tag variables).
    pub(crate) fn new_internal<S: AsRef<str>>(names: &[S]) -> Result<Ring, PolyError> {
        if names.is_empty() {
            return Err(PolyError::EmptyRing);
        }
        if names.len() > MAX_VARS {
            return Err(PolyError::TooManyVars(names.len()));
        }
        let mut seen: Vec<&str> = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            if seen.contains(&n) {
                return Err(PolyError::DuplicateVariable(n.to_string()));
            }
            seen.push(n);
        }
        Ok(Ring(Arc::new(RingInner {
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
        })))
    }

    pub fn nvars(&self) -> usize {
        self.0.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }

    /// Extended ring with `extra` names appended.
    pub(crate) fn extend<S: AsRef<str>>(&self, extra: &[S]) -> Result<Ring, PolyError> {
        let mut names: Vec<String> = self.0.names.clone();
        names.extend(extra.iter().map(|s| s.as_ref().to_string()));
        Ring::new_internal(&names)
    }

    /// A variable name not already used: `base`, then `base_`, `base__`, ...
    pub(crate) fn fresh_name(&self, base: &str) -> String {
        let mut candidate = String::from(base);
        while self.index_of(&candidate).is_some() {
            candidate.push('_');
        }
        candidate
    }
}

// ---------------------------------------------------------------------------
// Polynomial
// ---------------------------------------------------------------------------

/// Sparse polynomial with exact rational coefficients.
///
/// Invariants: terms are sorted descending in the intrinsic grevlex order,
/// monomials are distinct, and no coefficient is zero.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: Ring,
    terms: Vec<(Monomial, Rat)>,
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Polynomial {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &Ring) -> Polynomial {
        Polynomial::constant(ring, rat_one())
    }

    pub fn constant(ring: &Ring, c: Rat) -> Polynomial {
        let mut terms = Vec::new();
        if !c.is_zero() {
            terms.push((Monomial::one(), c));
        }
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn variable(ring: &Ring, i: usize) -> Result<Polynomial, PolyError> {
        if i >= ring.nvars() {
            return Err(PolyError::BadVariableIndex(i));
        }
        Ok(Polynomial {
            ring: ring.clone(),
            terms: alloc::vec![(Monomial::variable(i), rat_one())],
        })
    }

    /// Build from arbitrary terms: duplicates are accumulated, zeros dropped.
    pub fn from_terms<I>(ring: &Ring, terms: I) -> Polynomial
    where
        I: IntoIterator<Item = (Monomial, Rat)>,
    {
        let mut map: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            match map.entry(m) {
                alloc::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                alloc::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += c;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
        let mut terms: Vec<(Monomial, Rat)> = map.into_iter().collect();
        terms.reverse(); // BTreeMap iterates ascending; we store descending
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Terms in descending grevlex order.
    pub fn terms(&self) -> &[(Monomial, Rat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Total degree; zero polynomial reports 0.
    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }

    /// Degree in one variable; zero polynomial reports 0.
    pub fn degree_in(&self, i: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m.exp(i)).max().unwrap_or(0)
    }

    /// True if variable `i` occurs.
    pub fn involves(&self, i: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(i) != 0)
    }

    /// Leading term under an arbitrary order (linear scan; the stored order
    /// is grevlex so that case is the first term).
    pub fn leading_term(&self, order: &TermOrder) -> Option<(&Monomial, &Rat)> {
        let n = self.ring.nvars();
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| order.cmp(a, b, n))
            .map(|(m, c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> Rat {
        // terms are sorted descending by the intrinsic order
        match self.terms.binary_search_by(|(tm, _)| m.cmp(tm)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    pub fn constant_term(&self) -> Rat {
        self.coefficient(&Monomial::one())
    }

    fn check_ring(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    fn add_impl(&self, other: &Polynomial, negate: bool) -> Polynomial {
        debug_assert!(self.ring == other.ring);
        // merge two descending term lists
        let mut out: Vec<(Monomial, Rat)> =
            Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match mb.cmp(ma) {
                Ordering::Less => {
                    out.push((*ma, ca.clone()));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((*mb, if negate { -cb.clone() } else { cb.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { ca - cb } else { ca + cb };
                    if !c.is_zero() {
                        out.push((*ma, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| {
            (*m, if negate { -c.clone() } else { c.clone() })
        }));
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        Ok(self.add_impl(other, false))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        Ok(self.add_impl(other, true))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        // Exponents are u16; the degree pre-check makes every monomial
        // product below safe.
        if !self.is_zero()
            && !other.is_zero()
            && self.total_degree() as u64 + other.total_degree() as u64 > u16::MAX as u64
        {
            return Err(PolyError::ExponentOverflow);
        }
        let mut map: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb).expect("exponent overflow in multiplication");
                let c = ca * cb;
                match map.entry(m) {
                    alloc::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    alloc::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += c;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                }
            }
        }
        let mut terms: Vec<(Monomial, Rat)> = map.into_iter().collect();
        terms.reverse();
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, k)| (*m, k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(tm, tc)| (tm.mul(m).expect("exponent overflow"), tc * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Result<Polynomial, PolyError> {
        if self.total_degree() as u64 * e as u64 > u16::MAX as u64 {
            return Err(PolyError::ExponentOverflow);
        }
        let mut acc = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut n = e;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Result<Polynomial, PolyError> {
        if i >= self.ring.nvars() {
            return Err(PolyError::BadVariableIndex(i));
        }
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(i);
            if e == 0 {
                return None;
            }
            let mut m2 = *m;
            m2.exp[i] = e - 1;
            Some((m2, c * Rat::from_integer(e.into())))
        });
        Ok(Polynomial::from_terms(&self.ring, terms))
    }

    /// Substitute polynomial `value` for variable `i` (Horner in that
    /// variable).  `value` must live in the same ring.
    pub fn substitute(&self, i: usize, value: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(value)?;
        if i >= self.ring.nvars() {
            return Err(PolyError::BadVariableIndex(i));
        }
        // group terms by the exponent of variable i
        let mut layers: BTreeMap<u16, Vec<(Monomial, Rat)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(i);
            let mut m2 = *m;
            m2.exp[i] = 0;
            layers.entry(e).or_default().push((m2, c.clone()));
        }
        let mut acc = Polynomial::zero(&self.ring);
        let mut prev_exp: Option<u16> = None;
        // Horner from the highest layer down
        for (e, layer) in layers.into_iter().rev() {
            if let Some(pe) = prev_exp {
                for _ in 0..(pe - e) {
                    acc = acc.try_mul(value)?;
                }
            }
            acc = acc.try_add(&Polynomial::from_terms(&self.ring, layer))?;
            prev_exp = Some(e);
        }
        if let Some(pe) = prev_exp {
            for _ in 0..pe {
                acc = acc.try_mul(value)?;
            }
        }
        Ok(acc)
    }

    /// Substitute a rational constant for variable `i`.
    pub fn substitute_rat(&self, i: usize, value: &Rat) -> Result<Polynomial, PolyError> {
        if i >= self.ring.nvars() {
            return Err(PolyError::BadVariableIndex(i));
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let e = m.exp(i);
            let mut m2 = *m;
            m2.exp[i] = 0;
            (m2, c * rat_powi(value, e as i64))
        });
        Ok(Polynomial::from_terms(&self.ring, terms))
    }

    /// Evaluate at a rational point (one value per ring variable).
    pub fn evaluate(&self, point: &[Rat]) -> Result<Rat, PolyError> {
        if point.len() != self.ring.nvars() {
            return Err(PolyError::DirectionLength {
                expected: self.ring.nvars(),
                got: point.len(),
            });
        }
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, v) in point.iter().enumerate() {
                let e = m.exp(i);
                if e > 0 {
                    t *= rat_powi(v, e as i64);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Homogenize with a fresh variable appended to the ring: the result is
    /// homogeneous of degree `total_degree(self)` and restores `self` when
    /// the new variable is set to 1.
    pub fn homogenize(&self, newvar: &str) -> Result<Polynomial, PolyError> {
        let ext = self.ring.extend(&[newvar])?;
        let lifted = self.lift_to(&ext)?;
        Ok(lifted.homogenize_in_place(ext.nvars() - 1, &(0..self.ring.nvars()).collect::<Vec<_>>()))
    }

    /// Homogenize in place: pad each term with powers of variable `hvar` so
    /// the degree *in the listed variables plus hvar* is constant.  The
    /// polynomial must not already involve `hvar`.
    pub(crate) fn homogenize_in_place(&self, hvar: usize, vars: &[usize]) -> Polynomial {
        debug_assert!(!self.involves(hvar));
        let deg = |m: &Monomial| -> u32 { vars.iter().map(|&v| m.exp(v) as u32).sum() };
        let d = self.terms.iter().map(|(m, _)| deg(m)).max().unwrap_or(0);
        let terms = self.terms.iter().map(|(m, c)| {
            let mut m2 = *m;
            m2.exp[hvar] = (d - deg(m)) as u16;
            (m2, c.clone())
        });
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Reinterpret in a ring that contains (at least) all of this ring's
    /// variable names, matching variables by name.
    pub fn lift_to(&self, target: &Ring) -> Result<Polynomial, PolyError> {
        if &self.ring == target {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.ring.nvars());
        for name in self.ring.names() {
            match target.index_of(name) {
                Some(i) => map.push(i),
                None => return Err(PolyError::MissingVariable(name.clone())),
            }
        }
        let terms = self.terms.iter().map(|(m, c)| (m.reindex(&map), c.clone()));
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Project into a smaller ring (matching by name); errors if the
    /// polynomial involves a variable the target ring lacks.
    pub fn project_to(&self, target: &Ring) -> Result<Polynomial, PolyError> {
        if &self.ring == target {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.ring.nvars());
        for (i, name) in self.ring.names().iter().enumerate() {
            match target.index_of(name) {
                Some(j) => map.push(j),
                None => {
                    if self.involves(i) {
                        return Err(PolyError::NotInSubring(name.clone()));
                    }
                    map.push(usize::MAX); // unused slot
                }
            }
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut m2 = Monomial::one();
            for (i, &target_i) in map.iter().enumerate() {
                if target_i != usize::MAX {
                    m2.exp[target_i] = m.exp(i);
                }
            }
            (m2, c.clone())
        });
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Support: the set of variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.ring.nvars()).filter(|&i| self.involves(i)).collect()
    }

    /// Leading coefficient under grevlex (None for zero).
    pub fn leading_coefficient(&self) -> Option<&Rat> {
        self.terms.first().map(|(_, c)| c)
    }

    /// Divide by the grevlex leading coefficient (no-op on zero).
    pub fn monic(&self) -> Polynomial {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    /// Canonical integer-content normalization: primitive integer
    /// coefficients with positive leading coefficient.
    pub fn primitive(&self) -> Polynomial {
        factor::primitive_part(self)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// ---------------------------------------------------------------------------
// Direction
// ---------------------------------------------------------------------------

/// An integer direction vector `r`; coefficient arrays are read along `n*r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Direction(Vec<i64>);

impl Direction {
    pub fn new(entries: Vec<i64>) -> Result<Direction, PolyError> {
        if entries.is_empty() || entries.iter().all(|&e| e == 0) {
            return Err(PolyError::ZeroDirection);
        }
        Ok(Direction(entries))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// l1 norm `sum |r_j|`.
    pub fn l1_norm(&self) -> u64 {
        self.0.iter().map(|&e| e.unsigned_abs()).sum()
    }

    pub fn has_negative(&self) -> bool {
        self.0.iter().any(|&e| e < 0)
    }

    /// The direction scaled by a positive integer.
    pub fn scaled(&self, k: i64) -> Result<Direction, PolyError> {
        if k == 0 {
            return Err(PolyError::ZeroDirection);
        }
        Direction::new(self.0.iter().map(|&e| e * k).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat_frac, rat_int};

    fn ring2() -> Ring {
        Ring::new(&["x", "y"]).unwrap()
    }

    fn p(s: &str, r: &Ring) -> Polynomial {
        parse_polynomial(s, r).unwrap()
    }

    #[test]
    fn ring_construction_limits() {
        assert_eq!(Ring::new::<&str>(&[]), Err(PolyError::EmptyRing));
        assert_eq!(
            Ring::new(&["x", "x"]),
            Err(PolyError::DuplicateVariable("x".into()))
        );
        let many: Vec<String> = (0..17).map(|i| alloc::format!("v{i}")).collect();
        assert_eq!(Ring::new(&many), Err(PolyError::TooManyVars(17)));
        assert!(Ring::new(&many[..16]).is_ok());
    }

    #[test]
    fn arithmetic_basics() {
        let r = ring2();
        let a = p("x + y", &r);
        let b = p("x - y", &r);
        assert_eq!(a.try_mul(&b).unwrap(), p("x^2 - y^2", &r));
        assert_eq!(a.try_add(&b).unwrap(), p("2*x", &r));
        assert_eq!(a.try_sub(&a).unwrap(), Polynomial::zero(&r));
        assert_eq!(p("x + 1", &r).pow(3).unwrap(), p("x^3 + 3*x^2 + 3*x + 1", &r));
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let r = ring2();
        let s = Ring::new(&["u", "v"]).unwrap();
        let a = p("x", &r);
        let b = parse_polynomial("u", &s).unwrap();
        assert_eq!(a.try_add(&b), Err(PolyError::RingMismatch));
    }

    #[test]
    fn partial_derivative_product_rule() {
        let r = ring2();
        let f = p("x^2*y + x", &r);
        let g = p("y^2 - x", &r);
        let fg = f.try_mul(&g).unwrap();
        let lhs = fg.partial(0).unwrap();
        let rhs = f
            .partial(0)
            .unwrap()
            .try_mul(&g)
            .unwrap()
            .try_add(&f.try_mul(&g.partial(0).unwrap()).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        // d/dx(x^2 y + x) = 2xy + 1
        assert_eq!(f.partial(0).unwrap(), p("2*x*y + 1", &r));
    }

    #[test]
    fn substitution_and_evaluation() {
        let r = ring2();
        let f = p("x^2*y - 2*x + 1", &r);
        // x := y + 1
        let g = f.substitute(0, &p("y + 1", &r)).unwrap();
        assert_eq!(g, p("y^3 + 2*y^2 - y - 1", &r));
        let v = f.evaluate(&[rat_int(3), rat_frac(1, 2)]).unwrap();
        assert_eq!(v, rat_frac(-1, 2)); // 9/2 - 6 + 1
        let h = f.substitute_rat(0, &rat_int(2)).unwrap();
        assert_eq!(h, p("4*y - 3", &r));
    }

    #[test]
    fn homogenization_roundtrip_and_degree() {
        let r = ring2();
        let f = p("2 - x*y^2 - 2*x*y - x + y", &r);
        let h = f.homogenize("z0").unwrap();
        // every term has total degree 3
        assert!(h.terms().iter().all(|(m, _)| m.total_degree() == 3));
        // dehomogenize: set z0 = 1 and project back
        let back = h
            .substitute_rat(h.ring().index_of("z0").unwrap(), &rat_int(1))
            .unwrap()
            .project_to(&r)
            .unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn lift_and_project_between_rings() {
        let r = ring2();
        let big = Ring::new(&["z0", "x", "y"]).unwrap();
        let f = p("x*y - 2", &r);
        let lifted = f.lift_to(&big).unwrap();
        assert_eq!(lifted.to_string(), "x*y - 2");
        assert_eq!(lifted.project_to(&r).unwrap(), f);
        let g = parse_polynomial("z0*x", &big).unwrap();
        assert_eq!(g.project_to(&r), Err(PolyError::NotInSubring("z0".into())));
    }

    #[test]
    fn direction_validation_and_scaling() {
        assert!(Direction::new(alloc::vec![0, 0]).is_err());
        let d = Direction::new(alloc::vec![1, -2]).unwrap();
        assert_eq!(d.l1_norm(), 3);
        assert!(d.has_negative());
        assert_eq!(d.scaled(3).unwrap().entries(), &[3, -6]);
    }

    #[test]
    fn coefficient_lookup() {
        let r = ring2();
        let f = p("x^2*y - 2*x + 1/2", &r);
        let m = Monomial::from_exponents(&[2, 1]);
        assert_eq!(f.coefficient(&m), rat_int(1));
        assert_eq!(f.constant_term(), rat_frac(1, 2));
        assert_eq!(f.coefficient(&Monomial::from_exponents(&[5, 5])), rat_int(0));
    }
}
