//! Saddle-point leading terms at smooth critical points of `V(Q)`, and
//! selection of the contributing points by comparison against exact series
//! coefficients.
//!
//! For a simple pole the residue of the coefficient integral reduces, in a
//! chart where the distinguished variable is solved out, to a classical
//! saddle-point integral over the remaining `d - 1` angular variables.  Its
//! leading term at a nondegenerate smooth critical point `w` is
//!
//! ```text
//! a_{n r} ~ weight * (prod_j w_j^{-r_j})^n * n^{(1-d)/2}
//!           * (2 pi)^{(1-d)/2} * (-P(w) / (w_k Q_k(w))) * det(H)^{-1/2}
//! ```
//!
//! where `Q_k` is the distinguished partial and `H` the phase Hessian of the
//! log-parametrized residue integrand.  Everything except the integer
//! `weight` is computed here in certified disk arithmetic; the weight (an
//! intersection multiplicity the algebra alone does not reveal) is fixed by
//! a small exact search against series data from [`crate::oracle`].

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::critical::{affine_critical_points, AlgebraicPoint, CriticalError};
use crate::groebner::Ideal;
use crate::numeric::cbox::{eval_poly_box, CBox};
use crate::numeric::real::pi_bounds;
use crate::numeric::roots::UniPoly;
use crate::numeric::NumericError;
use crate::poly::factor::squarefree_part;
use crate::poly::{Direction, Monomial, PolyError, Polynomial};
use crate::rat::{rat_powi, rat_to_f64, Rat};

/// Finite-difference step for the phase-Hessian cross-check: `2^-13`, which
/// balances the `O(h^2)` truncation error of the central stencil against the
/// `O(eps / h^2)` rounding error of double-precision phase evaluations.
pub const FD_STEP: f64 = 1.0 / 8192.0;

/// Weight search space per conjugacy class of terms: `-4 ..= 4`.
pub const WEIGHT_RANGE: i64 = 4;

/// Largest number of weight classes the exact search will enumerate.
pub const MAX_WEIGHT_CLASSES: usize = 7;

/// Relative bound on the imaginary part of a selected weighted sum at each
/// window index (real data demands a real prediction).
pub const REALITY_REL_TOL: f64 = 1e-20;

/// Two weight assignments whose errors agree to this relative band are
/// treated as tied, and the structurally simpler one (fewer contributing
/// terms, then smaller total weight) wins.  Without the band, a term too
/// small to be resolved by the window would pick up an arbitrary weight
/// from noise-level error differences.
pub const TIE_BAND: f64 = 1e-2;

/// Errors from leading-term evaluation and contribution selection.
#[derive(Debug, Clone, PartialEq)]
pub enum AsymptError {
    /// Underlying polynomial failure.
    Poly(PolyError),
    /// Certified numerics failed.
    Numeric(NumericError),
    /// Critical-point machinery failed (dimension, solving).
    Critical(CriticalError),
    /// `Q` is not squarefree, so the pole along some component has order
    /// at least two; only simple poles are implemented.
    HigherOrderPole,
    /// The point could not be certified to lie on `V(Q)`.
    NotOnVariety,
    /// Every partial derivative of `Q` vanishes (numerically) at the point.
    NotSmooth,
    /// A coordinate of the point contains zero, so `z^{-r}` is undefined.
    ZeroCoordinate,
    /// No product `z_j dQ/dz_j` could be certified nonzero at the point.
    ZeroDistinguishedPartial,
    /// The phase Hessian is singular (degenerate saddle).
    SingularHessian,
    /// Selection was asked to explain a window with no candidate terms.
    NoCandidates,
    /// The comparison window is shorter than the method needs.
    WindowTooShort { needed: usize, got: usize },
    /// More weight classes than the exact search is willing to enumerate.
    TooManyCandidates { limit: usize, got: usize },
    /// A direction entry exceeds the exponent range of the monomial type.
    DirectionTooLarge,
}

impl core::fmt::Display for AsymptError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            AsymptError::Poly(e) => write!(f, "{e}"),
            AsymptError::Numeric(e) => write!(f, "{e}"),
            AsymptError::Critical(e) => write!(f, "{e}"),
            AsymptError::HigherOrderPole => write!(
                f,
                "denominator is not squarefree: higher-order poles are not implemented"
            ),
            AsymptError::NotOnVariety => {
                write!(f, "point is certifiably not on the zero set of the denominator")
            }
            AsymptError::NotSmooth => {
                write!(f, "gradient vanishes at the point: not a smooth point")
            }
            AsymptError::ZeroCoordinate => {
                write!(f, "point has a zero coordinate: it lies outside the torus")
            }
            AsymptError::ZeroDistinguishedPartial => {
                write!(f, "no coordinate-scaled partial is certifiably nonzero at the point")
            }
            AsymptError::SingularHessian => {
                write!(f, "phase Hessian is singular: degenerate saddle points are out of scope")
            }
            AsymptError::NoCandidates => write!(f, "no candidate terms"),
            AsymptError::WindowTooShort { needed, got } => {
                write!(f, "comparison window too short: need {needed} values, got {got}")
            }
            AsymptError::TooManyCandidates { limit, got } => write!(
                f,
                "too many weight classes for exact search: limit {limit}, got {got}"
            ),
            AsymptError::DirectionTooLarge => {
                write!(f, "direction entry exceeds the supported exponent range")
            }
        }
    }
}

impl From<PolyError> for AsymptError {
    fn from(e: PolyError) -> AsymptError {
        AsymptError::Poly(e)
    }
}

impl From<NumericError> for AsymptError {
    fn from(e: NumericError) -> AsymptError {
        AsymptError::Numeric(e)
    }
}

impl From<CriticalError> for AsymptError {
    fn from(e: CriticalError) -> AsymptError {
        AsymptError::Critical(e)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for AsymptError {}

/// The leading saddle-point contribution of one critical point:
/// `weight * constant * n^poly_order * base^n`.
#[derive(Debug, Clone)]
pub struct AsymptoticTerm {
    /// Per-`n` exponential factor `prod_j w_j^{-r_j}`; its modulus equals
    /// `exp(height)` of the source point.
    pub base: CBox,
    /// Squarefree defining polynomial of the base where one is known (the
    /// base is among its roots; not necessarily irreducible).
    pub base_min_poly: Option<UniPoly>,
    /// Exponent of the polynomial factor `n^alpha`; `(1-d)/2` for a
    /// nondegenerate smooth point in `d` variables.
    pub poly_order: Rat,
    /// The certified saddle-point constant.
    pub constant: CBox,
    /// Integer multiplicity of the point in the contour decomposition;
    /// `None` until a selection pass determines it.
    pub weight: Option<i64>,
    /// The critical point this term came from.
    pub source_point: AlgebraicPoint,
}

/// A window of exact series coefficients `a_{n * direction}` for
/// `n = start, start+1, ..., start + values.len() - 1`.
#[derive(Debug, Clone)]
pub struct SeriesWindow {
    pub direction: Direction,
    pub start: usize,
    pub values: Vec<Rat>,
}

/// Outcome of matching candidate terms against a series window.
#[derive(Debug, Clone)]
pub struct Selection {
    /// With `conclusive`: the nonzero-weight terms, weights filled in.
    /// Without: every candidate unchanged, weights left unknown.
    pub terms: Vec<AsymptoticTerm>,
    /// Aggregate relative error of the best weighted sum over the window
    /// tail: `sum |prediction - a_n| / sum |a_n|`.
    pub relative_error: f64,
    /// Whether the best assignment met the caller's tolerance.
    pub conclusive: bool,
}

/// Candidate terms at every affine critical point of `V(Q)` for a direction,
/// sorted by descending base modulus, together with the points where the
/// smooth-point formula did not apply (not smooth, degenerate saddle).
#[derive(Debug, Clone)]
pub struct CandidateReport {
    pub terms: Vec<AsymptoticTerm>,
    pub skipped: Vec<(AlgebraicPoint, AsymptError)>,
}

/// The coordinate maximizing `|z_j dQ/dz_j|` at the point (certified
/// nonzero), used as the solved-out variable of the residue chart.
pub fn distinguished_variable(
    q: &Polynomial,
    point: &[CBox],
    precision: u32,
) -> Result<usize, AsymptError> {
    let d = q.ring().nvars();
    if point.len() != d {
        return Err(AsymptError::Poly(PolyError::DirectionLength { expected: d, got: point.len() }));
    }
    let mut best: Option<(usize, Rat)> = None;
    for j in 0..d {
        let pj = eval_poly_box(&q.partial(j)?, point, precision);
        let zqj = point[j].mul(&pj, precision);
        if zqj.contains_zero() {
            continue;
        }
        let lower = zqj.mag_lower();
        match &best {
            Some((_, cur)) if *cur >= lower => {}
            _ => best = Some((j, lower)),
        }
    }
    best.map(|(j, _)| j).ok_or(AsymptError::ZeroDistinguishedPartial)
}

/// The `(d-1) x (d-1)` phase Hessian of the residue integrand at a smooth
/// point, in the angular parametrization `z_u = w_u exp(i theta_u)` with the
/// distinguished variable `k` solved out.  Rows and columns run over the
/// non-distinguished variables in ring order.
///
/// With `g` the implicit solution of `Q = 0` for `z_k` and `t_u = w_u g_u /
/// w_k`, the entries are
/// `H_uv = -r_k (w_u w_v g_uv / w_k - t_u t_v + [u = v] t_u)`.
pub fn phase_hessian(
    q: &Polynomial,
    point: &[CBox],
    r: &Direction,
    k: usize,
    precision: u32,
) -> Result<Vec<Vec<CBox>>, AsymptError> {
    let d = q.ring().nvars();
    let wp = precision + 32;
    let qk = q.partial(k)?;
    let pk = eval_poly_box(&qk, point, wp);
    if pk.contains_zero() {
        return Err(AsymptError::ZeroDistinguishedPartial);
    }
    let others: Vec<usize> = (0..d).filter(|&j| j != k).collect();
    let rk = Rat::from_integer(r.entries()[k].into());

    // first-order implicit derivatives g_u = -Q_u / Q_k and t_u = w_u g_u / w_k
    let mut g1: Vec<CBox> = Vec::with_capacity(others.len());
    let mut t: Vec<CBox> = Vec::with_capacity(others.len());
    for &u in &others {
        let pu = eval_poly_box(&q.partial(u)?, point, wp);
        let gu = pu.neg().div(&pk, wp)?;
        let tu = point[u].mul(&gu, wp).div(&point[k], wp)?;
        g1.push(gu);
        t.push(tu);
    }

    let qkk = eval_poly_box(&qk.partial(k)?, point, wp);
    let mut h = vec![vec![CBox::zero(); others.len()]; others.len()];
    for (a, &u) in others.iter().enumerate() {
        let qu = q.partial(u)?;
        let quk = eval_poly_box(&qu.partial(k)?, point, wp);
        for (b, &v) in others.iter().enumerate().skip(a) {
            let quv = eval_poly_box(&qu.partial(v)?, point, wp);
            let qvk = if u == v {
                quk.clone()
            } else {
                eval_poly_box(&q.partial(v)?.partial(k)?, point, wp)
            };
            // g_uv = -(Q_uv + Q_uk g_v + Q_vk g_u + Q_kk g_u g_v) / Q_k
            let mut num = quv;
            num = num.add(&quk.mul(&g1[b], wp), wp);
            num = num.add(&qvk.mul(&g1[a], wp), wp);
            num = num.add(&qkk.mul(&g1[a].mul(&g1[b], wp), wp), wp);
            let guv = num.neg().div(&pk, wp)?;
            // w_u w_v g_uv / w_k - t_u t_v (+ t_u on the diagonal)
            let mut e = point[u]
                .mul(&point[v], wp)
                .mul(&guv, wp)
                .div(&point[k], wp)?
                .sub(&t[a].mul(&t[b], wp), wp);
            if u == v {
                e = e.add(&t[a], wp);
            }
            let e = e.scale(&-rk.clone(), precision);
            h[a][b] = e.clone();
            h[b][a] = e;
        }
    }
    Ok(h)
}

/// Determinant of a square disk matrix by elimination with midpoint-modulus
/// pivoting.  The empty matrix has determinant one.
fn det_box(mut m: Vec<Vec<CBox>>, prec: u32) -> Result<CBox, AsymptError> {
    let n = m.len();
    let mut det = CBox::one();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| {
                let mi = m[i][col].re() * m[i][col].re() + m[i][col].im() * m[i][col].im();
                let mj = m[j][col].re() * m[j][col].re() + m[j][col].im() * m[j][col].im();
                mi.cmp(&mj)
            })
            .expect("nonempty pivot range");
        if m[piv][col].contains_zero() {
            return Err(AsymptError::SingularHessian);
        }
        if piv != col {
            m.swap(piv, col);
            det = det.neg();
        }
        det = det.mul(&m[col][col], prec);
        for row in col + 1..n {
            let f = m[row][col].div(&m[col][col], prec)?;
            for c in col..n {
                let s = f.mul(&m[col][c], prec);
                m[row][c] = m[row][c].sub(&s, prec);
            }
        }
    }
    Ok(det)
}

/// `1 / sqrt(z)` for a disk certified nonzero.  Principal branch; a disk on
/// the negative real axis takes the upper-half-plane limit `i sqrt(-z)`.
fn inv_sqrt(z: &CBox, prec: u32) -> Result<CBox, AsymptError> {
    let s = match z.sqrt(prec) {
        Ok(s) => s,
        Err(NumericError::BranchCut) => {
            let s = z.neg().sqrt(prec)?;
            // multiply by i: (a + bi) i = -b + ai, radius unchanged
            CBox::with_radius(-s.im().clone(), s.re().clone(), s.rad().clone())
        }
        Err(e) => return Err(e.into()),
    };
    Ok(s.recip(prec)?)
}

/// `(2 pi)^{(1-d)/2}` as a certified disk, via `sqrt(2 pi)^{1-d}`.
fn angular_prefactor(d: usize, prec: u32) -> Result<CBox, AsymptError> {
    let wp = prec + 16;
    let (lo, hi) = pi_bounds(wp);
    // center 2*(lo+hi)/2, radius 2*(hi-lo)/2
    let two_pi = CBox::with_radius(&lo + &hi, Rat::zero(), &hi - &lo);
    let root = two_pi.sqrt(wp)?;
    Ok(root.powi(1 - d as i64, prec)?)
}

/// `prod_j w_j^{-r_j}` over certified coordinate disks.
fn base_from_point(point: &[CBox], r: &Direction, prec: u32) -> Result<CBox, AsymptError> {
    let mut base = CBox::one();
    for (j, &rj) in r.entries().iter().enumerate() {
        base = base.mul(&point[j].powi(-rj, prec + 16)?, prec + 16);
    }
    Ok(base.rounded(prec))
}

/// The leading-term contribution of one smooth critical point `w` to the
/// coefficients of `F_num / Q` in direction `r`:
/// `constant * n^{(1-d)/2} * base^n` with `base = prod w_j^{-r_j}` and
/// `constant = (2 pi)^{(1-d)/2} (-F_num(w) / (w_k Q_k(w))) det(H)^{-1/2}`.
/// The weight is left undetermined.
pub fn smooth_leading_term(
    f_num: &Polynomial,
    q: &Polynomial,
    point: &AlgebraicPoint,
    r: &Direction,
    precision: u32,
) -> Result<AsymptoticTerm, AsymptError> {
    let ring = q.ring();
    let d = ring.nvars();
    if f_num.ring() != ring {
        return Err(AsymptError::Poly(PolyError::RingMismatch));
    }
    if r.entries().len() != d || point.coords.len() != d {
        return Err(AsymptError::Poly(PolyError::DirectionLength {
            expected: d,
            got: r.entries().len().max(point.coords.len()),
        }));
    }
    if r.entries().iter().any(|&e| e.unsigned_abs() > u16::MAX as u64) {
        return Err(AsymptError::DirectionTooLarge);
    }
    let wp = precision + 32;
    let w = &point.coords;

    // simple pole only: a repeated factor of Q makes the pole order >= 2
    let sf = squarefree_part(q)?;
    if sf.total_degree() < q.total_degree() {
        return Err(AsymptError::HigherOrderPole);
    }
    if w.iter().any(|c| c.contains_zero()) {
        return Err(AsymptError::ZeroCoordinate);
    }
    if !eval_poly_box(q, w, wp).contains_zero() {
        return Err(AsymptError::NotOnVariety);
    }
    let mut any_partial = false;
    for j in 0..d {
        if !eval_poly_box(&q.partial(j)?, w, wp).contains_zero() {
            any_partial = true;
            break;
        }
    }
    if !any_partial {
        return Err(AsymptError::NotSmooth);
    }

    let k = distinguished_variable(q, w, wp)?;
    let h = phase_hessian(q, w, r, k, wp)?;
    let det = det_box(h, wp)?;
    if det.contains_zero() {
        return Err(AsymptError::SingularHessian);
    }

    let residue = eval_poly_box(f_num, w, wp)
        .neg()
        .div(&w[k].mul(&eval_poly_box(&q.partial(k)?, w, wp), wp), wp)?;
    let constant = angular_prefactor(d, wp)?
        .mul(&residue, wp)
        .mul(&inv_sqrt(&det, wp)?, wp)
        .rounded(precision);
    let base = base_from_point(w, r, precision)?;

    // exact rational points carry an exact linear defining polynomial
    let base_min_poly = if w.iter().all(|c| c.is_exact() && c.im().is_zero()) {
        let mut b = Rat::from_integer(1.into());
        for (j, &rj) in r.entries().iter().enumerate() {
            b *= rat_powi(w[j].re(), -rj);
        }
        Some(UniPoly::new(vec![-b, Rat::from_integer(1.into())]))
    } else {
        None
    };

    Ok(AsymptoticTerm {
        base,
        base_min_poly,
        poly_order: Rat::new((1 - d as i64).into(), 2.into()),
        constant,
        weight: None,
        source_point: point.clone(),
    })
}

/// Squarefree annihilating polynomial of `z^{-r}` over the affine critical
/// points of `V(Q)`: adjoin `t z^{r_+} - z^{r_-}` to the critical system and
/// eliminate the ring variables.  `None` when the elimination ideal is zero
/// (positive-dimensional base locus).
pub fn base_annihilator(q: &Polynomial, r: &Direction) -> Result<Option<UniPoly>, AsymptError> {
    let ring = q.ring();
    let d = ring.nvars();
    if r.entries().len() != d {
        return Err(AsymptError::Poly(PolyError::DirectionLength {
            expected: d,
            got: r.entries().len(),
        }));
    }
    if r.entries().iter().any(|&e| e.unsigned_abs() > u16::MAX as u64) {
        return Err(AsymptError::DirectionTooLarge);
    }
    let system = crate::critical::critical_system(q, r)?;
    let tname = ring.fresh_name("t");
    let ext = ring.extend(&[&tname])?;
    let ti = ext.nvars() - 1;
    let mut gens: Vec<Polynomial> = Vec::with_capacity(system.generators().len() + 1);
    for g in system.generators() {
        gens.push(g.lift_to(&ext)?);
    }
    // t * prod_{r_j > 0} z_j^{r_j} - prod_{r_j < 0} z_j^{-r_j}
    let mut pos = vec![0u16; ti + 1];
    let mut neg = vec![0u16; ti + 1];
    for (j, &rj) in r.entries().iter().enumerate() {
        if rj > 0 {
            pos[j] = rj as u16;
        } else {
            neg[j] = (-rj) as u16;
        }
    }
    pos[ti] = 1;
    let one = Rat::from_integer(1.into());
    let relation = Polynomial::from_terms(
        &ext,
        vec![
            (Monomial::from_exponents(&pos), one.clone()),
            (Monomial::from_exponents(&neg), -one),
        ],
    );
    gens.push(relation);
    let ideal = Ideal::new(&ext, gens)?;
    let elim = ideal.eliminate(&[ti])?;
    for g in elim.generators() {
        if let Some(up) = UniPoly::from_multivariate(g, ti) {
            if !up.is_zero() && up.degree() >= 1 {
                return Ok(Some(up.squarefree_part()));
            }
        }
    }
    Ok(None)
}

/// Leading-term candidates at every affine critical point of `V(Q)` in
/// direction `r`.  Points where the smooth-point formula does not apply
/// (non-smooth points, degenerate saddles) are reported in `skipped` rather
/// than failing the whole computation; structural errors still abort.
pub fn candidate_terms(
    f_num: &Polynomial,
    q: &Polynomial,
    r: &Direction,
    precision: u32,
) -> Result<CandidateReport, AsymptError> {
    let points = affine_critical_points(q, r, precision)?;
    let mut terms: Vec<AsymptoticTerm> = Vec::new();
    let mut skipped: Vec<(AlgebraicPoint, AsymptError)> = Vec::new();
    for p in points {
        match smooth_leading_term(f_num, q, &p, r, precision) {
            Ok(t) => terms.push(t),
            Err(
                e @ (AsymptError::NotSmooth
                | AsymptError::SingularHessian
                | AsymptError::ZeroDistinguishedPartial),
            ) => skipped.push((p, e)),
            Err(other) => return Err(other),
        }
    }
    // descending base modulus; the source points arrive sorted by height,
    // which is log of the same quantity, so this is stable confirmation
    terms.sort_by(|a, b| {
        let ma = a.base.re() * a.base.re() + a.base.im() * a.base.im();
        let mb = b.base.re() * b.base.re() + b.base.im() * b.base.im();
        mb.cmp(&ma)
    });
    Ok(CandidateReport { terms, skipped })
}

/// Integer power of a complex number by repeated squaring (keeps real inputs
/// exactly real, unlike a log/exp-based power).
fn cpowi(z: Complex64, mut n: u64) -> Complex64 {
    let mut base = z;
    let mut acc = Complex64::new(1.0, 0.0);
    while n > 0 {
        if n & 1 == 1 {
            acc *= base;
        }
        n >>= 1;
        if n > 0 {
            base *= base;
        }
    }
    acc
}

fn cbox_mid(b: &CBox) -> Complex64 {
    let (re, im) = b.to_f64();
    Complex64::new(re, im)
}

/// One term's numeric value at integer `n >= 1`, from disk midpoints.
fn term_value(constant: Complex64, alpha: f64, base: Complex64, n: u64) -> Complex64 {
    constant * libm::pow(n as f64, alpha) * cpowi(base, n)
}

/// Determine integer weights for candidate terms by exact search against a
/// window of true series coefficients.
///
/// Terms are grouped into conjugate classes (a conjugate pair must share a
/// weight for the sum to be real, and its joint value is evaluated as twice
/// a real part, so predictions for real data are exactly real).  All weight
/// vectors in `[-4, 4]` per class are scored by the aggregate relative error
/// `sum |prediction - a_n| / sum |a_n|` over the tail half of the window;
/// ties prefer fewer contributing terms, then smaller total weight.  When
/// the best score is within `tolerance` the nonzero-weight terms are
/// returned with weights filled in; otherwise the outcome is marked
/// inconclusive and every weight is left unknown.
pub fn select_contributions(
    terms: &[AsymptoticTerm],
    window: &SeriesWindow,
    tolerance: f64,
) -> Result<Selection, AsymptError> {
    if terms.is_empty() {
        return Err(AsymptError::NoCandidates);
    }
    if window.values.len() < 8 {
        return Err(AsymptError::WindowTooShort { needed: 8, got: window.values.len() });
    }

    // midpoint data, in the caller's (descending-base) order
    let mids: Vec<(Complex64, Complex64, f64)> = terms
        .iter()
        .map(|t| (cbox_mid(&t.constant), cbox_mid(&t.base), rat_to_f64(&t.poly_order)))
        .collect();

    // conjugate classes: pair i with the first j > i whose base and constant
    // mirror i's across the real axis
    let near_conj = |a: Complex64, b: Complex64| -> bool {
        (a.conj() - b).norm() <= 1e-9 * (a.norm() + b.norm() + 1e-300)
    };
    let is_real = |z: Complex64| -> bool { z.im.abs() <= 1e-12 * (z.norm() + 1e-300) };
    let mut class_of: Vec<Option<usize>> = vec![None; terms.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..terms.len() {
        if class_of[i].is_some() {
            continue;
        }
        let mut members = vec![i];
        if !(is_real(mids[i].0) && is_real(mids[i].1)) {
            for j in i + 1..terms.len() {
                if class_of[j].is_none()
                    && near_conj(mids[i].1, mids[j].1)
                    && near_conj(mids[i].0, mids[j].0)
                {
                    members.push(j);
                    class_of[j] = Some(classes.len());
                    break;
                }
            }
        }
        class_of[i] = Some(classes.len());
        classes.push(members);
    }
    if classes.len() > MAX_WEIGHT_CLASSES {
        return Err(AsymptError::TooManyCandidates {
            limit: MAX_WEIGHT_CLASSES,
            got: classes.len(),
        });
    }

    // tail of the window: last half, indices with n >= 1
    let tail: Vec<(u64, f64)> = window
        .values
        .iter()
        .enumerate()
        .skip(window.values.len() / 2)
        .map(|(i, v)| ((window.start + i) as u64, rat_to_f64(v)))
        .filter(|&(n, _)| n >= 1)
        .collect();
    let scale: f64 = tail.iter().map(|&(_, a)| a.abs()).sum();

    // per-class joint values on the tail: a pair contributes twice the real
    // part of its representative (exactly real), a lone real term its own
    // (exactly real) value, and a lone complex term stays complex
    let class_values: Vec<Vec<Complex64>> = classes
        .iter()
        .map(|members| {
            tail.iter()
                .map(|&(n, _)| {
                    let i = members[0];
                    let v = term_value(mids[i].0, mids[i].2, mids[i].1, n);
                    if members.len() == 2 {
                        Complex64::new(2.0 * v.re, 0.0)
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();

    // exact search over weight vectors
    let span = 2 * WEIGHT_RANGE + 1;
    let total: u64 = (span as u64).pow(classes.len() as u32);
    let mut best: Option<(f64, u32, i64, Vec<i64>)> = None;
    for combo in 0..total {
        let mut ws = Vec::with_capacity(classes.len());
        let mut rem = combo;
        for _ in 0..classes.len() {
            ws.push((rem % span as u64) as i64 - WEIGHT_RANGE);
            rem /= span as u64;
        }
        let mut err_num = 0.0f64;
        let mut ok = true;
        for (ti, &(_, a)) in tail.iter().enumerate() {
            let mut p = Complex64::new(0.0, 0.0);
            for (ci, &w) in ws.iter().enumerate() {
                if w != 0 {
                    p += class_values[ci][ti] * w as f64;
                }
            }
            if p.im.abs() > REALITY_REL_TOL * p.norm() {
                ok = false; // real data cannot come from a complex prediction
                break;
            }
            err_num += (p - Complex64::new(a, 0.0)).norm();
        }
        if !ok {
            continue;
        }
        let err = if scale > 0.0 {
            err_num / scale
        } else if err_num > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        let nonzero = ws.iter().filter(|&&w| w != 0).count() as u32;
        let mass: i64 = ws.iter().map(|w| w.abs()).sum();
        let better = match &best {
            None => true,
            Some((be, bn, bm, _)) => {
                if err < be * (1.0 - TIE_BAND) {
                    true
                } else if err <= be * (1.0 + TIE_BAND) {
                    (nonzero, mass) < (*bn, *bm)
                } else {
                    false
                }
            }
        };
        if better {
            best = Some((err, nonzero, mass, ws));
        }
    }

    let (err, _, _, ws) = best.expect("weight search space is nonempty");
    if err <= tolerance {
        let mut out: Vec<AsymptoticTerm> = Vec::new();
        for (i, t) in terms.iter().enumerate() {
            let w = ws[class_of[i].expect("classified")];
            if w != 0 {
                let mut t = t.clone();
                t.weight = Some(w);
                out.push(t);
            }
        }
        Ok(Selection { terms: out, relative_error: err, conclusive: true })
    } else {
        let mut out = terms.to_vec();
        for t in &mut out {
            t.weight = None;
        }
        Ok(Selection { terms: out, relative_error: err, conclusive: false })
    }
}

fn eval_c64(p: &Polynomial, at: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, c) in p.terms() {
        let mut t = Complex64::new(rat_to_f64(c), 0.0);
        for (j, z) in at.iter().enumerate() {
            let e = m.exp(j);
            if e > 0 {
                t *= cpowi(*z, e as u64);
            }
        }
        acc += t;
    }
    acc
}

/// Solve `Q(.., z_k, ..) = 0` for `z_k` by Newton iteration from the given
/// start value, the other coordinates held fixed.
fn newton_solve_k(
    q: &Polynomial,
    qk: &Polynomial,
    at: &mut [Complex64],
    k: usize,
    start: Complex64,
) -> Result<Complex64, AsymptError> {
    let mut z = start;
    for _ in 0..64 {
        at[k] = z;
        let f = eval_c64(q, at);
        let df = eval_c64(qk, at);
        if df.norm() == 0.0 {
            return Err(AsymptError::Numeric(NumericError::UncertainZero));
        }
        let step = f / df;
        z -= step;
        if step.norm() <= 1e-15 * (z.norm() + 1e-300) {
            at[k] = z;
            return Ok(z);
        }
    }
    Err(AsymptError::Numeric(NumericError::PrecisionExceeded))
}

/// Central finite-difference Hessian of the log-parametrized phase
/// `psi(theta) = i sum_{u != k} r_u theta_u + r_k log(g(w e^{i theta}) / w_k)`
/// at `theta = 0`, step [`FD_STEP`], in `f64` complex arithmetic with the
/// implicit `g` recovered by Newton iteration at each stencil node.  Rows
/// and columns run over the non-distinguished variables in ring order —
/// the same layout as [`phase_hessian`], which this cross-checks.
pub fn phase_hessian_fd(
    q: &Polynomial,
    point: &[CBox],
    r: &Direction,
    k: usize,
) -> Result<Vec<Vec<Complex64>>, AsymptError> {
    let d = q.ring().nvars();
    if point.len() != d || r.entries().len() != d || k >= d {
        return Err(AsymptError::Poly(PolyError::DirectionLength {
            expected: d,
            got: point.len().max(r.entries().len()),
        }));
    }
    let qk = q.partial(k)?;
    let w: Vec<Complex64> = point.iter().map(cbox_mid).collect();
    let others: Vec<usize> = (0..d).filter(|&j| j != k).collect();
    let rk = r.entries()[k] as f64;

    // psi at a sparse angular offset; g is re-solved from scratch each time
    let mut psi = |offsets: &[(usize, f64)]| -> Result<Complex64, AsymptError> {
        let mut at = w.clone();
        let mut linear = Complex64::new(0.0, 0.0);
        for &(u, th) in offsets {
            let rot = Complex64::new(libm::cos(th), libm::sin(th));
            at[u] = w[u] * rot;
            linear += Complex64::new(0.0, r.entries()[u] as f64 * th);
        }
        let g = newton_solve_k(q, &qk, &mut at, k, w[k])?;
        Ok(linear + rk * (g / w[k]).ln())
    };

    let h = FD_STEP;
    let h2 = h * h;
    let psi0 = psi(&[])?;
    let m = others.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); m]; m];
    for a in 0..m {
        let u = others[a];
        let pp = psi(&[(u, h)])?;
        let pm = psi(&[(u, -h)])?;
        out[a][a] = (pp - 2.0 * psi0 + pm) / h2;
        for b in a + 1..m {
            let v = others[b];
            let hpp = psi(&[(u, h), (v, h)])?;
            let hpm = psi(&[(u, h), (v, -h)])?;
            let hmp = psi(&[(u, -h), (v, h)])?;
            let hmm = psi(&[(u, -h), (v, -h)])?;
            let e = (hpp - hpm - hmp + hmm) / (4.0 * h2);
            out[a][b] = e;
            out[b][a] = e;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{coefficients, SeriesRequest};
    use crate::poly::{parse_polynomial, Ring};
    use crate::rat::{rat_frac, rat_int};

    fn setup(qs: &str, vars: &[&str]) -> (Polynomial, Polynomial, Direction) {
        let ring = Ring::new(vars).unwrap();
        let q = parse_polynomial(qs, &ring).unwrap();
        let one = parse_polynomial("1", &ring).unwrap();
        let r = Direction::new(vec![1; vars.len()]).unwrap();
        (one, q, r)
    }

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn window_for(num: &Polynomial, den: &Polynomial, r: &Direction, count: usize) -> SeriesWindow {
        let req = SeriesRequest::new(num.clone(), den.clone(), r.clone(), count);
        SeriesWindow { direction: r.clone(), start: 0, values: coefficients(&req).unwrap() }
    }

    #[test]
    fn binomial_leading_term_is_four_to_n_over_sqrt_pi_n() {
        let (one, q, r) = setup("1 - x - y", &["x", "y"]);
        let report = candidate_terms(&one, &q, &r, 128).unwrap();
        assert!(report.skipped.is_empty());
        assert_eq!(report.terms.len(), 1);
        let t = &report.terms[0];
        let (b_re, b_im) = t.base.to_f64();
        assert!(rel_err(b_re, 4.0) < 1e-12 && b_im == 0.0);
        assert_eq!(t.poly_order, rat_frac(-1, 2));
        let (c_re, c_im) = t.constant.to_f64();
        let expect = 1.0 / libm::sqrt(core::f64::consts::PI);
        assert!(rel_err(c_re, expect) < 1e-12, "constant {c_re} vs {expect}");
        assert!(c_im.abs() < 1e-15);
        // the point is rational, so the base carries an exact defining poly
        let mp = t.base_min_poly.as_ref().unwrap();
        assert_eq!(mp.coeffs(), &[rat_int(-4), rat_int(1)]);
    }

    #[test]
    fn univariate_simple_pole_reduces_to_the_residue_formula() {
        let (one, q, r) = setup("1 - 2*x", &["x"]);
        let report = candidate_terms(&one, &q, &r, 128).unwrap();
        assert_eq!(report.terms.len(), 1);
        let t = &report.terms[0];
        let (b, _) = t.base.to_f64();
        let (c, _) = t.constant.to_f64();
        assert!(rel_err(b, 2.0) < 1e-12);
        assert!(rel_err(c, 1.0) < 1e-12);
        assert_eq!(t.poly_order, rat_int(0));
    }

    #[test]
    fn three_variable_positive_point_matches_algebraic_closed_forms() {
        let (one, q, r) = setup("1 - x - y - z - x*y", &["x", "y", "z"]);
        let report = candidate_terms(&one, &q, &r, 160).unwrap();
        assert_eq!(report.terms.len(), 2);
        assert!(report.skipped.is_empty());
        // dominant term first: its source point has positive coordinates
        let t = &report.terms[0];
        assert!(t.source_point.coords.iter().all(|c| c.re().is_positive()));
        let s17 = libm::sqrt(17.0);
        let (b, _) = t.base.to_f64();
        assert!(rel_err(b, (71.0 + 17.0 * s17) / 4.0) < 1e-11, "base {b}");
        let (c, ci) = t.constant.to_f64();
        let expect = 2.0 / (core::f64::consts::PI * libm::sqrt(26.0 * s17 - 102.0));
        assert!(rel_err(c, expect) < 1e-9, "constant {c} vs {expect}");
        assert!(ci.abs() < 1e-15);
        assert_eq!(t.poly_order, rat_int(-1));
    }

    #[test]
    fn alternating_three_variable_point_matches_closed_forms() {
        let (one, q, r) = setup("1 - x + y - z - 2*x*y^2*z", &["x", "y", "z"]);
        let report = candidate_terms(&one, &q, &r, 160).unwrap();
        assert_eq!(report.terms.len(), 2);
        let t = &report.terms[0];
        let s105 = libm::sqrt(105.0);
        let (b, _) = t.base.to_f64();
        assert!(rel_err(b, -(27.0 + 3.0 * s105) / 2.0) < 1e-11, "base {b}");
        let (c, _) = t.constant.to_f64();
        let expect = libm::sqrt(3.0) / (2.0 * core::f64::consts::PI);
        assert!(rel_err(c, expect) < 1e-9, "constant {c} vs {expect}");
    }

    #[test]
    fn base_modulus_equals_exp_height_on_every_term() {
        let (one, q, r) = setup("1 - x - y - z - x*y", &["x", "y", "z"]);
        let report = candidate_terms(&one, &q, &r, 128).unwrap();
        for t in &report.terms {
            let (lo, hi) = t.base.abs_bounds(128);
            let eh = libm::exp(t.source_point.height);
            assert!(rat_to_f64(&lo) <= eh * (1.0 + 1e-10));
            assert!(eh * (1.0 - 1e-10) <= rat_to_f64(&hi));
        }
    }

    #[test]
    fn analytic_hessian_agrees_with_finite_differences() {
        for (qs, vars) in [
            ("1 - x - y", vec!["x", "y"]),
            ("1 - x - y - z - x*y", vec!["x", "y", "z"]),
            ("1 - x + y - z - 2*x*y^2*z", vec!["x", "y", "z"]),
        ] {
            let (_, q, r) = setup(qs, &vars);
            let points = affine_critical_points(&q, &r, 128).unwrap();
            for p in &points {
                let k = distinguished_variable(&q, &p.coords, 128).unwrap();
                let ana = phase_hessian(&q, &p.coords, &r, k, 128).unwrap();
                let fd = phase_hessian_fd(&q, &p.coords, &r, k).unwrap();
                for (ra, rf) in ana.iter().zip(&fd) {
                    for (ea, ef) in ra.iter().zip(rf) {
                        let am = cbox_mid(ea);
                        let d = (am - ef).norm();
                        assert!(
                            d <= 1e-6 * am.norm().max(1e-9),
                            "{qs}: analytic {am} vs fd {ef}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn repeated_factor_is_a_higher_order_pole() {
        let ring = Ring::new(&["x", "y"]).unwrap();
        let q = parse_polynomial("(1 - x - y)^2", &ring).unwrap();
        let one = parse_polynomial("1", &ring).unwrap();
        let point = AlgebraicPoint {
            coords: vec![CBox::from_rat(rat_frac(1, 2)), CBox::from_rat(rat_frac(1, 2))],
            min_polys: vec![None, None],
            height: 0.0,
        };
        let r = Direction::new(vec![1, 1]).unwrap();
        assert!(matches!(
            smooth_leading_term(&one, &q, &point, &r, 128),
            Err(AsymptError::HigherOrderPole)
        ));
    }

    #[test]
    fn gradient_zero_is_not_smooth() {
        let ring = Ring::new(&["x", "y"]).unwrap();
        let q = parse_polynomial("(x - 1)^2 - (y - 1)^3", &ring).unwrap();
        let one = parse_polynomial("1", &ring).unwrap();
        let point = AlgebraicPoint {
            coords: vec![CBox::one(), CBox::one()],
            min_polys: vec![None, None],
            height: 0.0,
        };
        let r = Direction::new(vec![1, 1]).unwrap();
        assert!(matches!(
            smooth_leading_term(&one, &q, &point, &r, 128),
            Err(AsymptError::NotSmooth)
        ));
    }

    #[test]
    fn flat_phase_is_a_singular_hessian() {
        // every torus point of 1 - x*y is critical for the diagonal and the
        // saddle degenerates there
        let ring = Ring::new(&["x", "y"]).unwrap();
        let q = parse_polynomial("1 - x*y", &ring).unwrap();
        let one = parse_polynomial("1", &ring).unwrap();
        let point = AlgebraicPoint {
            coords: vec![CBox::one(), CBox::one()],
            min_polys: vec![None, None],
            height: 0.0,
        };
        let r = Direction::new(vec![1, 1]).unwrap();
        assert!(matches!(
            smooth_leading_term(&one, &q, &point, &r, 128),
            Err(AsymptError::SingularHessian)
        ));
    }

    #[test]
    fn zero_coordinate_is_rejected() {
        let ring = Ring::new(&["x", "y"]).unwrap();
        let q = parse_polynomial("1 - x - y", &ring).unwrap();
        let one = parse_polynomial("1", &ring).unwrap();
        let point = AlgebraicPoint {
            coords: vec![CBox::zero(), CBox::one()],
            min_polys: vec![None, None],
            height: 0.0,
        };
        let r = Direction::new(vec![1, 1]).unwrap();
        assert!(matches!(
            smooth_leading_term(&one, &q, &point, &r, 128),
            Err(AsymptError::ZeroCoordinate)
        ));
    }

    #[test]
    fn off_variety_point_is_rejected() {
        let ring = Ring::new(&["x", "y"]).unwrap();
        let q = parse_polynomial("1 - x - y", &ring).unwrap();
        let one = parse_polynomial("1", &ring).unwrap();
        let point = AlgebraicPoint {
            coords: vec![CBox::one(), CBox::one()],
            min_polys: vec![None, None],
            height: 0.0,
        };
        let r = Direction::new(vec![1, 1]).unwrap();
        assert!(matches!(
            smooth_leading_term(&one, &q, &point, &r, 128),
            Err(AsymptError::NotOnVariety)
        ));
    }

    #[test]
    fn selection_assigns_weight_one_on_central_binomials() {
        let (one, q, r) = setup("1 - x - y", &["x", "y"]);
        let report = candidate_terms(&one, &q, &r, 128).unwrap();
        let window = window_for(&one, &q, &r, 16);
        let sel = select_contributions(&report.terms, &window, 0.05).unwrap();
        assert!(sel.conclusive);
        assert_eq!(sel.terms.len(), 1);
        assert_eq!(sel.terms[0].weight, Some(1));
        assert!(sel.relative_error < 0.02, "err {}", sel.relative_error);
    }

    #[test]
    fn conjugate_pair_shares_a_weight_and_stays_real() {
        // critical points of 1 - x - y + x^2 on the diagonal form one
        // conjugate pair; the prediction must still match the (real,
        // oscillating) window
        let (one, q, r) = setup("1 - x - y + x^2", &["x", "y"]);
        let report = candidate_terms(&one, &q, &r, 128).unwrap();
        assert_eq!(report.terms.len(), 2);
        let window = window_for(&one, &q, &r, 24);
        let sel = select_contributions(&report.terms, &window, 0.2).unwrap();
        assert!(sel.conclusive, "err {}", sel.relative_error);
        assert_eq!(sel.terms.len(), 2);
        assert_eq!(sel.terms[0].weight, Some(1));
        assert_eq!(sel.terms[1].weight, Some(1));
    }

    #[test]
    fn subdominant_weight_stays_zero_when_it_cannot_be_seen() {
        let (one, q, r) = setup("1 - x + y - z - 2*x*y^2*z", &["x", "y", "z"]);
        let report = candidate_terms(&one, &q, &r, 160).unwrap();
        assert_eq!(report.terms.len(), 2);
        let window = window_for(&one, &q, &r, 12);
        let sel = select_contributions(&report.terms, &window, 0.05).unwrap();
        assert!(sel.conclusive, "err {}", sel.relative_error);
        // only the dominant point contributes a visible weight
        assert_eq!(sel.terms.len(), 1);
        assert_eq!(sel.terms[0].weight, Some(1));
        let (b, _) = sel.terms[0].base.to_f64();
        assert!(b < 0.0);
    }

    #[test]
    fn empty_candidate_list_is_an_error() {
        let ring = Ring::new(&["x", "y"]).unwrap();
        let r = Direction::new(vec![1, 1]).unwrap();
        let window = SeriesWindow {
            direction: r,
            start: 0,
            values: (0..10).map(rat_int).collect(),
        };
        assert!(matches!(
            select_contributions(&[], &window, 0.05),
            Err(AsymptError::NoCandidates)
        ));
        let _ = ring;
    }

    #[test]
    fn short_window_is_rejected() {
        let (one, q, r) = setup("1 - x - y", &["x", "y"]);
        let report = candidate_terms(&one, &q, &r, 128).unwrap();
        let window = window_for(&one, &q, &r, 5);
        assert!(matches!(
            select_contributions(&report.terms, &window, 0.05),
            Err(AsymptError::WindowTooShort { needed: 8, got: 6 })
        ));
    }

    #[test]
    fn inconclusive_when_nothing_fits() {
        let (one, q, r) = setup("1 - x - y", &["x", "y"]);
        let report = candidate_terms(&one, &q, &r, 128).unwrap();
        // a window from a different function cannot be explained by these
        // candidates at any tolerance this tight
        let ring = q.ring().clone();
        let other = parse_polynomial("1 - 6*x - 6*y", &ring).unwrap();
        let window = window_for(&one, &other, &r, 16);
        let sel = select_contributions(&report.terms, &window, 1e-6).unwrap();
        assert!(!sel.conclusive);
        assert!(sel.terms.iter().all(|t| t.weight.is_none()));
        assert!(sel.relative_error > 1e-6);
    }

    #[test]
    fn base_annihilator_vanishes_on_the_base() {
        let (_, q, r) = setup("1 - x - y", &["x", "y"]);
        let up = base_annihilator(&q, &r).unwrap().unwrap();
        assert!(up.eval(&rat_int(4)).is_zero());
        let (_, q44, r3) = setup("1 - x - y - z - x*y", &["x", "y", "z"]);
        let up = base_annihilator(&q44, &r3).unwrap().unwrap();
        // (71 + 17 sqrt 17)/4 is a root of 4 t^2 - 142 t + 32 up to scaling:
        // t^2 - (71/2) t + 8, from t = (71 +- 17 sqrt 17)/4
        let report = candidate_terms(
            &parse_polynomial("1", q44.ring()).unwrap(),
            &q44,
            &r3,
            128,
        )
        .unwrap();
        for t in &report.terms {
            let v = up.eval_box(&t.base, 160);
            assert!(v.contains_zero(), "annihilator must vanish on every base");
        }
    }

    #[test]
    fn prediction_error_decreases_along_the_tail() {
        let (one, q, r) = setup("1 - x - y - z - x*y", &["x", "y", "z"]);
        let report = candidate_terms(&one, &q, &r, 160).unwrap();
        let window = window_for(&one, &q, &r, 12);
        let sel = select_contributions(&report.terms, &window, 0.05).unwrap();
        assert!(sel.conclusive);
        let t = &sel.terms[0];
        let c = cbox_mid(&t.constant);
        let b = cbox_mid(&t.base);
        let alpha = rat_to_f64(&t.poly_order);
        let mut last = f64::INFINITY;
        for n in 6..=12u64 {
            let p = term_value(c, alpha, b, n);
            let a = rat_to_f64(&window.values[n as usize]);
            let rel = (p.re - a).abs() / a.abs();
            assert!(rel < last, "error must shrink: n={n} rel={rel} last={last}");
            last = rel;
        }
        // 3 percent agreement by n = 12
        assert!(last < 0.03, "rel err at n=12: {last}");
    }
}
