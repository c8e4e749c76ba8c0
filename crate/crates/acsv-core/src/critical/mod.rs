//! Affine critical points of a rational-function singular variety for a
//! lattice direction, with certified coordinates and exact heights, plus the
//! zero-dimensional polynomial-system solver behind them.
//!
//! The solver works over the rationals end to end: a lexicographic Groebner
//! basis is brought into shape position (directly, or after a deterministic
//! linear change of coordinates), the eliminant's roots are isolated with
//! certified disks, and the remaining coordinates are back-substituted in
//! disk arithmetic.  A Seidenberg-style radical step (adjoining the
//! squarefree part of each coordinate eliminant) guarantees multiplicity-free
//! output and makes shape position achievable.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::groebner::Ideal;
use crate::numeric::cbox::CBox;
use crate::numeric::roots::{isolate_roots, RootBox, UniPoly};
use crate::numeric::NumericError;
use crate::poly::TermOrder;
use crate::poly::{Direction, PolyError, Polynomial, Ring};
use crate::rat::{rat_ln_abs, rat_one, Rat};

/// Errors from critical-point computation and zero-dimensional solving.
#[derive(Debug, Clone, PartialEq)]
pub enum CriticalError {
    /// Underlying polynomial/ideal failure.
    Poly(PolyError),
    /// Certified numerics failed (see the inner error).
    Numeric(NumericError),
    /// The system is not zero-dimensional; carries the computed dimension
    /// (`-1` means the system is inconsistent, which callers may treat as an
    /// empty solution set).
    NotZeroDimensional { dimension: i64 },
    /// No linear change of coordinates in the search schedule produced a
    /// shape-position basis.
    ShapeNotFound,
    /// A height was requested at a point with a zero coordinate.
    ZeroCoordinate,
}

impl fmt::Display for CriticalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CriticalError::Poly(e) => write!(f, "{e}"),
            CriticalError::Numeric(e) => write!(f, "{e}"),
            CriticalError::NotZeroDimensional { dimension } => {
                write!(f, "critical system is not zero-dimensional (dimension {dimension})")
            }
            CriticalError::ShapeNotFound => {
                write!(f, "no shape-position basis found; system too degenerate")
            }
            CriticalError::ZeroCoordinate => {
                write!(f, "height undefined: a coordinate is zero")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CriticalError {}

impl From<PolyError> for CriticalError {
    fn from(e: PolyError) -> Self {
        CriticalError::Poly(e)
    }
}

impl From<NumericError> for CriticalError {
    fn from(e: NumericError) -> Self {
        CriticalError::Numeric(e)
    }
}

/// A certified solution of a polynomial system: one complex disk per ring
/// variable, a defining univariate polynomial per coordinate where one was
/// computed, and the direction height.
#[derive(Debug, Clone)]
pub struct AlgebraicPoint {
    /// One certified disk per ring variable, in ring order.
    pub coords: Vec<CBox>,
    /// Squarefree defining polynomial of each coordinate (the coordinate is
    /// among its roots; not necessarily irreducible).
    pub min_polys: Vec<Option<UniPoly>>,
    /// `-sum_j r_j log|z_j|` for the direction the point was computed for;
    /// `0.0` when no direction applies.
    pub height: f64,
}

impl AlgebraicPoint {
    /// Natural log of `|coordinate j|` from the box center; `None` when the
    /// box is centered at zero.
    fn ln_abs_coord(&self, j: usize) -> Option<f64> {
        let b = &self.coords[j];
        let modsq = b.re() * b.re() + b.im() * b.im();
        if modsq.is_zero() {
            None
        } else {
            Some(rat_ln_abs(&modsq) / 2.0)
        }
    }
}

/// `-sum_j r_j log|z_j|`, the direction height of a point, from its certified
/// coordinate boxes.  Errors when any coordinate box contains zero (the
/// height would be infinite).
pub fn height(point: &AlgebraicPoint, r: &Direction) -> Result<f64, CriticalError> {
    if point.coords.len() != r.entries().len() {
        return Err(CriticalError::Poly(PolyError::DirectionLength {
            expected: point.coords.len(),
            got: r.entries().len(),
        }));
    }
    let mut h = 0.0f64;
    for (j, &rj) in r.entries().iter().enumerate() {
        if point.coords[j].contains_zero() {
            return Err(CriticalError::ZeroCoordinate);
        }
        let l = point.ln_abs_coord(j).ok_or(CriticalError::ZeroCoordinate)?;
        h -= rj as f64 * l;
    }
    Ok(h)
}

/// Convert an exact univariate polynomial into a member of `ring` supported
/// on variable `var`.
fn unipoly_to_multivariate(up: &UniPoly, ring: &Ring, var: usize) -> Polynomial {
    let terms = up
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let mut exps = alloc::vec![0u16; var + 1];
            exps[var] = k as u16;
            (crate::poly::Monomial::from_exponents(&exps), c.clone())
        })
        .collect::<Vec<_>>();
    Polynomial::from_terms(ring, terms)
}

/// The squarefree univariate eliminant of `ideal` in variable `var`
/// (generator of `ideal ∩ k[var]` with squarefree part taken), or `None`
/// when the elimination ideal is zero.
fn coordinate_eliminant(ideal: &Ideal, var: usize) -> Result<Option<UniPoly>, CriticalError> {
    let elim = ideal.eliminate(&[var])?;
    for g in elim.generators() {
        if let Some(up) = UniPoly::from_multivariate(g, var) {
            if !up.is_zero() && up.degree() >= 1 {
                return Ok(Some(up.squarefree_part()));
            }
        }
    }
    Ok(None)
}

/// Shape-position data extracted from a reduced lexicographic basis: the
/// eliminant in `main` and, for every other solve variable, the expression
/// `h_i(main)` with `z_i = h_i` on the variety.
fn shape_from_basis(
    basis: &[Polynomial],
    main: usize,
    solve_vars: &[usize],
) -> Option<(UniPoly, Vec<UniPoly>)> {
    let mut eliminant: Option<UniPoly> = None;
    let mut h: Vec<Option<UniPoly>> = alloc::vec![None; solve_vars.len()];
    for g in basis {
        if let Some(up) = UniPoly::from_multivariate(g, main) {
            if up.degree() >= 1 && eliminant.replace(up).is_some() {
                return None; // two univariate members: not a reduced shape basis
            }
            continue;
        }
        // must be c*z_i + tail(main) for exactly one solve variable
        let mut var_hit: Option<usize> = None;
        for (k, &v) in solve_vars.iter().enumerate() {
            if g.involves(v) {
                if var_hit.is_some() {
                    return None;
                }
                var_hit = Some(k);
            }
        }
        let k = var_hit?;
        let v = solve_vars[k];
        if g.degree_in(v) != 1 {
            return None;
        }
        // split off the z_v part: g = c*z_v + t(main)
        let mut c: Option<Rat> = None;
        let mut tail: Vec<(usize, Rat)> = Vec::new();
        for (m, coef) in g.terms() {
            if m.exp(v) == 1 {
                if m.total_degree() != 1 {
                    return None; // mixed term like z_v * main
                }
                if c.replace(coef.clone()).is_some() {
                    return None;
                }
            } else {
                // must be supported on main only
                let deg_main = m.exp(main) as usize;
                if m.total_degree() != deg_main as u32 {
                    return None;
                }
                tail.push((deg_main, coef.clone()));
            }
        }
        let c = c?;
        let deg = tail.iter().map(|&(d, _)| d).max().unwrap_or(0);
        let mut coeffs = alloc::vec![Rat::zero(); deg + 1];
        for (d, coef) in tail {
            coeffs[d] = -coef / &c;
        }
        if h[k].replace(UniPoly::new(coeffs)).is_some() {
            return None;
        }
    }
    let eliminant = eliminant?;
    if h.iter().any(|x| x.is_none()) {
        return None;
    }
    Some((eliminant, h.into_iter().map(|x| x.unwrap()).collect()))
}

/// Solve a zero-dimensional ideal completely: every solution of the radical,
/// each coordinate certified by a disk.  Points come back unordered by
/// height (`height = 0`); callers attach heights and sort.
pub fn solve_zero_dim(ideal: &Ideal, precision: u32) -> Result<Vec<AlgebraicPoint>, CriticalError> {
    let dim = ideal.dimension()?;
    if dim != 0 {
        return Err(CriticalError::NotZeroDimensional { dimension: dim });
    }
    let ring = ideal.ring().clone();
    let n = ring.nvars();

    // coordinate eliminants: defining polynomials per coordinate, and the
    // radical ingredients
    let mut min_polys: Vec<Option<UniPoly>> = Vec::with_capacity(n);
    let mut radical_gens: Vec<Polynomial> = ideal.generators().to_vec();
    for v in 0..n {
        let e = coordinate_eliminant(ideal, v)?;
        if let Some(up) = &e {
            radical_gens.push(unipoly_to_multivariate(up, &ring, v));
        }
        min_polys.push(e);
    }
    if min_polys.iter().any(|m| m.is_none()) {
        // a zero-dimensional ideal has a nonzero eliminant in every variable
        return Err(CriticalError::ShapeNotFound);
    }
    let radical = Ideal::new(&ring, radical_gens)?;

    // single-variable systems solve directly from the eliminant
    if n == 1 {
        let up = min_polys[0].clone().expect("checked above");
        let roots = isolate_roots(&up, precision)?;
        return Ok(roots
            .into_iter()
            .map(|r| AlgebraicPoint {
                coords: alloc::vec![r.bx],
                min_polys: min_polys.clone(),
                height: 0.0,
            })
            .collect());
    }

    // try shape position directly: lex order, eliminant in the last variable
    let lex = TermOrder::lex();
    let basis = radical.groebner_basis(&lex);
    let solve_vars: Vec<usize> = (0..n - 1).collect();
    if let Some((elim, h)) = shape_from_basis(&basis, n - 1, &solve_vars) {
        return points_from_shape(&elim, &h, &solve_vars, Some(n - 1), n, &min_polys, precision);
    }

    // deterministic generic coordinate s = z_0 + k z_1 + ... + k^(n-1) z_(n-1)
    let sname = ring.fresh_name("s");
    let ext = ring.extend(&[&sname])?;
    let si = ext.nvars() - 1;
    for k in 1..=8i64 {
        let mut sgen = Polynomial::variable(&ext, si)?;
        let mut weight = Rat::from_integer(1.into());
        for v in 0..n {
            let term = Polynomial::variable(&ext, v)?.scale(&weight);
            sgen = sgen.try_sub(&term)?;
            weight *= Rat::from_integer(k.into());
        }
        let mut gens: Vec<Polynomial> = Vec::with_capacity(radical.generators().len() + 1);
        for g in radical.generators() {
            gens.push(g.lift_to(&ext)?);
        }
        gens.push(sgen);
        let extended = Ideal::new(&ext, gens)?;
        let basis = extended.groebner_basis(&lex);
        let solve_vars: Vec<usize> = (0..n).collect();
        if let Some((elim, h)) = shape_from_basis(&basis, si, &solve_vars) {
            return points_from_shape(&elim, &h, &solve_vars, None, n, &min_polys, precision);
        }
    }
    Err(CriticalError::ShapeNotFound)
}

/// Assemble certified points from shape-position data.  `main_coord` says
/// which output coordinate (if any) *is* the eliminant variable; all other
/// coordinates come from back-substituting the root into `h`.
fn points_from_shape(
    eliminant: &UniPoly,
    h: &[UniPoly],
    solve_vars: &[usize],
    main_coord: Option<usize>,
    n: usize,
    min_polys: &[Option<UniPoly>],
    precision: u32,
) -> Result<Vec<AlgebraicPoint>, CriticalError> {
    let roots = isolate_roots(eliminant, precision.max(64) + 32)?;
    let mut out = Vec::with_capacity(roots.len());
    for root in &roots {
        let mut coords: Vec<CBox> = alloc::vec![CBox::zero(); n];
        if let Some(mc) = main_coord {
            coords[mc] = root.bx.clone();
        }
        for (k, &v) in solve_vars.iter().enumerate() {
            coords[v] = eval_shape(&h[k], root, precision);
        }
        out.push(AlgebraicPoint {
            coords,
            min_polys: min_polys.to_vec(),
            height: 0.0,
        });
    }
    Ok(out)
}

/// Evaluate a back-substitution polynomial at a root, exactly when the root
/// is rational.
fn eval_shape(h: &UniPoly, root: &RootBox, precision: u32) -> CBox {
    if h.degree() == 1 && h.coeff(0).is_zero() && h.coeff(1) == rat_one() {
        // identity substitution: reuse the certified root box unchanged
        return root.bx.clone();
    }
    if let Some(r) = &root.rational {
        CBox::from_rat(h.eval(r))
    } else {
        h.eval_box(&root.bx, precision + 16)
    }
}

/// The affine critical-point system for a hypersurface `Q` and direction
/// `r`: `Q` together with all torus critical equations
/// `r_j z_i Q_i - r_i z_j Q_j`, saturated by every coordinate.
pub fn critical_system(q: &Polynomial, r: &Direction) -> Result<Ideal, CriticalError> {
    let ring = q.ring().clone();
    let d = ring.nvars();
    if r.entries().len() != d {
        return Err(CriticalError::Poly(PolyError::DirectionLength {
            expected: d,
            got: r.entries().len(),
        }));
    }
    let q = crate::poly::factor::squarefree_part(q)?;
    let mut gens: Vec<Polynomial> = alloc::vec![q.clone()];
    let partials: Result<Vec<Polynomial>, PolyError> = (0..d).map(|j| q.partial(j)).collect();
    let partials = partials?;
    // all pairwise rank-drop minors of [z_j dQ/dz_j ; r_j]; using all pairs
    // (not just those involving the first column) keeps the system correct
    // when some r_i = 0
    for i in 0..d {
        for j in (i + 1)..d {
            let zi = Polynomial::variable(&ring, i)?;
            let zj = Polynomial::variable(&ring, j)?;
            let a = zi
                .try_mul(&partials[i])?
                .scale(&Rat::from_integer(r.entries()[j].into()));
            let b = zj
                .try_mul(&partials[j])?
                .scale(&Rat::from_integer(r.entries()[i].into()));
            let m = a.try_sub(&b)?;
            if !m.is_zero() {
                gens.push(m);
            }
        }
    }
    let system = Ideal::new(&ring, gens)?;
    let vars: Result<Vec<Polynomial>, PolyError> =
        (0..d).map(|v| Polynomial::variable(&ring, v)).collect();
    Ok(system.saturate_all(&vars?)?)
}

/// All affine critical points of `V(Q)` in the torus for direction `r`,
/// certified to `precision` bits, sorted by descending height (ties broken
/// lexicographically on coordinate centers).
pub fn affine_critical_points(
    q: &Polynomial,
    r: &Direction,
    precision: u32,
) -> Result<Vec<AlgebraicPoint>, CriticalError> {
    let system = critical_system(q, r)?;
    if system.is_unit() {
        return Ok(Vec::new());
    }
    let dim = system.dimension()?;
    if dim != 0 {
        return Err(CriticalError::NotZeroDimensional { dimension: dim });
    }
    let mut points = solve_zero_dim(&system, precision)?;
    // saturation already removed coordinate-plane components; drop any
    // residual box not certified away from zero (defensive)
    points.retain(|p| p.coords.iter().all(|c| !c.contains_zero()));
    for p in &mut points {
        p.height = height(p, r)?;
    }
    sort_points_by_height(&mut points);
    Ok(points)
}

/// Order: descending height, then lexicographic on exact coordinate centers.
pub fn sort_points_by_height(points: &mut [AlgebraicPoint]) {
    points.sort_by(|a, b| {
        b.height
            .partial_cmp(&a.height)
            .unwrap_or(core::cmp::Ordering::Equal)
            .then_with(|| {
                for (ca, cb) in a.coords.iter().zip(&b.coords) {
                    let o = ca.re().cmp(cb.re()).then_with(|| ca.im().cmp(cb.im()));
                    if o != core::cmp::Ordering::Equal {
                        return o;
                    }
                }
                core::cmp::Ordering::Equal
            })
    });
}

/// Render a univariate polynomial in a printable variable name, for reports.
pub fn unipoly_to_string(up: &UniPoly, var: &str) -> String {
    use alloc::string::ToString;
    if up.is_zero() {
        return "0".into();
    }
    let mut parts: Vec<String> = Vec::new();
    for (k, c) in up.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let body = if k == 0 {
            crate::rat::rat_to_string(&mag)
        } else {
            let var_pow = if k == 1 {
                var.to_string()
            } else {
                alloc::format!("{var}^{k}")
            };
            if mag == Rat::from_integer(1.into()) {
                var_pow
            } else {
                alloc::format!("{}*{}", crate::rat::rat_to_string(&mag), var_pow)
            }
        };
        if parts.is_empty() {
            if c.is_negative() {
                parts.push(alloc::format!("-{body}"));
            } else {
                parts.push(body);
            }
        } else if c.is_negative() {
            parts.push(alloc::format!("- {body}"));
        } else {
            parts.push(alloc::format!("+ {body}"));
        }
    }
    parts.join(" ")
}
