//! Stationary points at infinity of a rational-function singular variety:
//! does the critical locus for a direction escape to infinity, where, and at
//! what heights?
//!
//! The pipeline works projectively: homogenize the (squarefree part of the)
//! denominator, form the critical equations with a symbolic direction, tie a
//! fresh height variable to the direction monomial, saturate away the
//! coordinate hyperplanes (and any excluded locus), substitute the concrete
//! direction, and slice at the hyperplane at infinity.  The result is an
//! exact ideal whose solutions are the stationary points at infinity;
//! existence, certified projective witnesses, and heights all read off it.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::critical::{solve_zero_dim, AlgebraicPoint, CriticalError};
use crate::groebner::Ideal;
use crate::numeric::cbox::CBox;
use crate::numeric::roots::{isolate_roots, UniPoly};
use crate::numeric::NumericError;
use crate::poly::{squarefree_part, Direction, Monomial, PolyError, Polynomial, Ring};
use crate::rat::{rat_ln_abs, Rat};

/// Errors from the stationary-points-at-infinity pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaiError {
    /// Underlying polynomial/ideal failure.
    Poly(PolyError),
    /// Certified numerics failed.
    Numeric(NumericError),
    /// Zero-dimensional solving failed while extracting witnesses.
    Solve(CriticalError),
    /// A stratum's generators do not cut out the declared codimension.
    BadStratum { index: usize, expected: i64, got: i64 },
    /// A stratum with no generators describes nothing.
    EmptyStratum { index: usize },
    /// The codimension leaves no minors to take (`c + 1` exceeds the number
    /// of variables).
    NoMinors { codimension: usize, nvars: usize },
    /// The excluded locus is empty (unit ideal) or undefined (no
    /// generators); nothing sensible can be saturated away.
    InconsistentExclusion,
    /// The denominator polynomial is zero.
    ZeroDenominator,
}

impl fmt::Display for SpaiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaiError::Poly(e) => write!(f, "{e}"),
            SpaiError::Numeric(e) => write!(f, "{e}"),
            SpaiError::Solve(e) => write!(f, "{e}"),
            SpaiError::BadStratum { index, expected, got } => write!(
                f,
                "stratum {index}: generators cut out dimension {got}, codimension says {expected}"
            ),
            SpaiError::EmptyStratum { index } => {
                write!(f, "stratum {index} has no generators")
            }
            SpaiError::NoMinors { codimension, nvars } => write!(
                f,
                "codimension {codimension} in {nvars} variables leaves no rank condition to impose"
            ),
            SpaiError::InconsistentExclusion => {
                write!(f, "the excluded locus is empty or undefined")
            }
            SpaiError::ZeroDenominator => write!(f, "the denominator polynomial is zero"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SpaiError {}

impl From<PolyError> for SpaiError {
    fn from(e: PolyError) -> Self {
        SpaiError::Poly(e)
    }
}

impl From<NumericError> for SpaiError {
    fn from(e: NumericError) -> Self {
        SpaiError::Numeric(e)
    }
}

impl From<CriticalError> for SpaiError {
    fn from(e: CriticalError) -> Self {
        SpaiError::Solve(e)
    }
}

/// One stratum of a singular-set stratification: prime-component generators
/// plus the codimension they are expected to cut out.
#[derive(Debug, Clone)]
pub struct StratumSpec {
    /// Generators of the stratum's ideal, in the user's affine ring.
    pub generators: Vec<Polynomial>,
    /// Declared codimension `c`, `1 <= c <= d`.
    pub codimension: usize,
}

impl StratumSpec {
    pub fn new(generators: Vec<Polynomial>, codimension: usize) -> StratumSpec {
        StratumSpec { generators, codimension }
    }

    /// Check that the generators cut out dimension `d - c`; `index` labels
    /// the stratum in error messages.
    pub fn validate(&self, index: usize) -> Result<(), SpaiError> {
        let ring = match self.generators.first() {
            Some(g) => g.ring().clone(),
            None => return Err(SpaiError::EmptyStratum { index }),
        };
        let d = ring.nvars();
        let expected = d as i64 - self.codimension as i64;
        if self.codimension == 0 || self.codimension > d {
            return Err(SpaiError::BadStratum { index, expected, got: d as i64 });
        }
        let got = Ideal::new(&ring, self.generators.clone())?.dimension()?;
        if got != expected {
            return Err(SpaiError::BadStratum { index, expected, got });
        }
        Ok(())
    }
}

/// Input to [`algorithm1`]: denominator, direction, optional locus to
/// exclude, and whether to leave the direction symbolic in the output ideal.
#[derive(Debug, Clone)]
pub struct SpaiProblem {
    pub q: Polynomial,
    pub direction: Direction,
    pub exclude: Option<Ideal>,
    pub symbolic_direction: bool,
}

impl SpaiProblem {
    pub fn new(q: Polynomial, direction: Direction) -> SpaiProblem {
        SpaiProblem { q, direction, exclude: None, symbolic_direction: false }
    }

    /// Saturate away (the projective closure of) this affine locus.
    pub fn with_exclusion(mut self, exclude: Ideal) -> SpaiProblem {
        self.exclude = Some(exclude);
        self
    }

    /// Keep the direction variables symbolic: the report then carries the
    /// sliced ideal only, with no existence flag, witnesses, or heights.
    pub fn with_symbolic_direction(mut self) -> SpaiProblem {
        self.symbolic_direction = true;
        self
    }
}

/// A certified projective witness: the index of the first nonzero
/// homogeneous coordinate (which the chart normalizes to 1) and the certified
/// point in homogeneous coordinates `(z0 : z1 : ... : zd)`.
#[derive(Debug, Clone)]
pub struct Witness {
    /// Chart index: coordinates `0..chart` are exactly zero and coordinate
    /// `chart` is exactly 1.
    pub chart: usize,
    /// The homogeneous coordinates, one certified disk per variable, with
    /// per-coordinate defining polynomials where available.
    pub point: AlgebraicPoint,
}

/// One height-variable value at infinity with its certified box, a defining
/// polynomial, and the height `-log|eta|`.
#[derive(Debug, Clone)]
pub struct EtaValue {
    pub eta: CBox,
    pub min_poly: UniPoly,
    pub height: f64,
}

/// What the height computation concluded.
#[derive(Debug, Clone)]
pub enum HeightsOutcome {
    /// The height-variable locus is finite; all nonzero values listed.
    Values(Vec<EtaValue>),
    /// The height variable remains free after elimination (its locus is
    /// positive-dimensional): heights are unconstrained.
    Unconstrained,
}

impl HeightsOutcome {
    /// The finite list of heights, if constrained.
    pub fn heights(&self) -> Option<Vec<f64>> {
        match self {
            HeightsOutcome::Values(vs) => Some(vs.iter().map(|v| v.height).collect()),
            HeightsOutcome::Unconstrained => None,
        }
    }
}

/// Everything the pipeline concluded for one stratum.
#[derive(Debug, Clone)]
pub struct SpaiReport {
    /// The saturated ideal sliced at the hyperplane at infinity.  Ring
    /// layout: homogenizing variable first, the user's variables, then the
    /// height variable last (plus the symbolic direction block in
    /// symbolic-direction mode).
    pub saturated_ideal: Ideal,
    /// Whether stationary points at infinity exist; `None` in
    /// symbolic-direction mode.
    pub exists: Option<bool>,
    /// Certified projective witnesses, grouped by chart cell.
    pub witnesses: Vec<Witness>,
    /// Height-variable values and heights; `None` in symbolic-direction
    /// mode.
    pub heights: Option<HeightsOutcome>,
}

// ---------------------------------------------------------------------------
// Ring plumbing
// ---------------------------------------------------------------------------

/// Variable layout for the projective pipeline: `[z0, user..., eta]` for
/// reports, extended by `[y1..yd]` while the direction is symbolic.
struct PipelineRings {
    /// `[z0, user..., eta]`
    report: Ring,
    /// `[z0, user..., eta, y1..yd]`
    big: Ring,
    /// Number of user variables.
    d: usize,
}

impl PipelineRings {
    fn build(user: &Ring) -> Result<PipelineRings, PolyError> {
        let d = user.nvars();
        let mut names: Vec<String> = Vec::with_capacity(2 * d + 2);
        names.push(fresh_against(user.names(), "z0"));
        names.extend(user.names().iter().cloned());
        names.push(fresh_against(&names, "eta"));
        let report = Ring::new_internal(&names)?;
        for j in 1..=d {
            let y = fresh_against(&names, &format!("y{j}"));
            names.push(y);
        }
        let big = Ring::new_internal(&names)?;
        Ok(PipelineRings { report, big, d })
    }

    /// Index of the homogenizing variable (in report and big rings).
    fn z0(&self) -> usize {
        0
    }

    /// Index of user variable `j` (1-based) in report and big rings.
    fn z(&self, j: usize) -> usize {
        j
    }

    /// Index of the height variable.
    fn eta(&self) -> usize {
        self.d + 1
    }

    /// Index of direction variable `j` (1-based) in the big ring.
    fn y(&self, j: usize) -> usize {
        self.d + 1 + j
    }

    /// Lift a user-ring polynomial into the big ring and homogenize it with
    /// the z0 variable over the user block.
    fn homogenize(&self, p: &Polynomial) -> Result<Polynomial, PolyError> {
        let zvars: Vec<usize> = (1..=self.d).collect();
        Ok(p.lift_to(&self.big)?.homogenize_in_place(self.z0(), &zvars))
    }
}

/// A name not in `names`: `base`, then `base_`, `base__`, ...
fn fresh_against(names: &[String], base: &str) -> String {
    let mut candidate = base.to_string();
    while names.iter().any(|n| n == &candidate) {
        candidate.push('_');
    }
    candidate
}

// ---------------------------------------------------------------------------
// Critical ideals
// ---------------------------------------------------------------------------

/// The affine critical ideal of a stratum: its generators plus all maximal
/// minors of the rank matrix whose rows are the scaled gradients
/// `(z_1 f_{z_1}, ..., z_d f_{z_d})` of the generators and, last, the
/// direction row.  With `direction = None` the direction row is a block of
/// fresh symbolic variables `y1..yd` appended to the ring; otherwise it is
/// the given integer vector.
pub fn critical_ideal(
    stratum: &StratumSpec,
    direction: Option<&Direction>,
) -> Result<Ideal, SpaiError> {
    let ring = match stratum.generators.first() {
        Some(g) => g.ring().clone(),
        None => return Err(SpaiError::EmptyStratum { index: 0 }),
    };
    let d = ring.nvars();
    let c = stratum.codimension;
    if c + 1 > d {
        return Err(SpaiError::NoMinors { codimension: c, nvars: d });
    }
    if let Some(r) = direction {
        if r.entries().len() != d {
            return Err(SpaiError::Poly(PolyError::DirectionLength {
                expected: d,
                got: r.entries().len(),
            }));
        }
    }

    // the working ring: extended by y1..yd when the direction is symbolic
    let (work, yrow): (Ring, Vec<Polynomial>) = match direction {
        None => {
            let mut names: Vec<String> = ring.names().to_vec();
            for j in 1..=d {
                let y = fresh_against(&names, &format!("y{j}"));
                names.push(y);
            }
            let work = Ring::new_internal(&names)?;
            let row: Result<Vec<Polynomial>, PolyError> =
                (0..d).map(|j| Polynomial::variable(&work, d + j)).collect();
            (work, row?)
        }
        Some(r) => {
            let row = r
                .entries()
                .iter()
                .map(|&e| Polynomial::constant(&ring, Rat::from_integer(e.into())))
                .collect();
            (ring.clone(), row)
        }
    };

    let mut gens: Vec<Polynomial> = Vec::new();
    let mut rows: Vec<Vec<Polynomial>> = Vec::with_capacity(c + 1);
    for f in &stratum.generators {
        let f = f.lift_to(&work)?;
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            let zj = Polynomial::variable(&work, j)?;
            row.push(zj.try_mul(&f.partial(j)?)?);
        }
        rows.push(row);
        gens.push(f);
    }
    rows.push(yrow);
    gens.extend(maximal_minors(&rows)?);
    Ok(Ideal::new(&work, gens)?)
}

/// All `k x k` minors of a `k x d` matrix of polynomials (`k = rows.len()`),
/// zero minors dropped.
fn maximal_minors(rows: &[Vec<Polynomial>]) -> Result<Vec<Polynomial>, SpaiError> {
    let k = rows.len();
    let d = rows.first().map(|r| r.len()).unwrap_or(0);
    debug_assert!(rows.iter().all(|r| r.len() == d));
    if k == 0 || k > d {
        return Ok(Vec::new());
    }
    let mut minors = Vec::new();
    let mut cols: Vec<usize> = (0..k).collect();
    loop {
        let det = determinant(rows, &cols)?;
        if !det.is_zero() {
            minors.push(det);
        }
        // next k-combination of 0..d in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(minors);
            }
            i -= 1;
            if cols[i] + (k - i) <= d - 1 {
                cols[i] += 1;
                for j in i + 1..k {
                    cols[j] = cols[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Determinant of the square submatrix of `rows` on the given columns, by
/// cofactor expansion along the last row (the direction row, whose entries
/// are the simplest).
fn determinant(rows: &[Vec<Polynomial>], cols: &[usize]) -> Result<Polynomial, SpaiError> {
    let n = cols.len();
    let ring = rows[0][cols[0]].ring().clone();
    if n == 1 {
        return Ok(rows[0][cols[0]].clone());
    }
    let mut acc = Polynomial::zero(&ring);
    for (pos, &col) in cols.iter().enumerate() {
        let entry = &rows[n - 1][col];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&c| c != col).collect();
        let minor = determinant(&rows[..n - 1], &rest)?;
        let signed = if (n - 1 + pos) % 2 == 0 { minor } else { minor.scale(&-Rat::one()) };
        acc = acc.try_add(&signed.try_mul(entry)?)?;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// The projective pipeline
// ---------------------------------------------------------------------------

/// Decide stationary points at infinity for a smooth denominator: homogenize
/// the squarefree part, impose criticality against a symbolic direction, tie
/// the height variable to the direction monomial, saturate away the
/// coordinate hyperplanes and any excluded locus, substitute the concrete
/// direction, and slice at infinity.
pub fn algorithm1(problem: &SpaiProblem, precision: u32) -> Result<SpaiReport, SpaiError> {
    if problem.q.is_zero() {
        return Err(SpaiError::ZeroDenominator);
    }
    let user = problem.q.ring().clone();
    let d = user.nvars();
    if problem.direction.entries().len() != d {
        return Err(SpaiError::Poly(PolyError::DirectionLength {
            expected: d,
            got: problem.direction.entries().len(),
        }));
    }
    let rings = PipelineRings::build(&user)?;
    let q = squarefree_part(&problem.q)?;
    let qh = rings.homogenize(&q)?;

    // criticality against the symbolic direction block: the first variable
    // anchors every row
    let mut gens: Vec<Polynomial> = Vec::with_capacity(d + 1);
    gens.push(qh.clone());
    if d >= 2 {
        let z1 = Polynomial::variable(&rings.big, rings.z(1))?;
        let q1 = z1.try_mul(&qh.partial(rings.z(1))?)?;
        let y1 = Polynomial::variable(&rings.big, rings.y(1))?;
        for j in 2..=d {
            let zj = Polynomial::variable(&rings.big, rings.z(j))?;
            let qj = zj.try_mul(&qh.partial(rings.z(j))?)?;
            let yj = Polynomial::variable(&rings.big, rings.y(j))?;
            gens.push(yj.try_mul(&q1)?.try_sub(&y1.try_mul(&qj)?)?);
        }
    }

    let exclusions = match &problem.exclude {
        None => Vec::new(),
        Some(ex) => {
            if ex.generators().is_empty() || ex.is_unit() {
                return Err(SpaiError::InconsistentExclusion);
            }
            let hom: Result<Vec<Polynomial>, PolyError> =
                ex.generators().iter().map(|g| rings.homogenize(g)).collect();
            alloc::vec![Ideal::new(&rings.big, hom?)?]
        }
    };

    run_pipeline(&rings, gens, &problem.direction, &exclusions, problem.symbolic_direction, precision)
}

/// Decide stationary points at infinity stratum by stratum: each stratum's
/// critical ideal (its generators plus all maximal rank minors) runs through
/// the same projective pipeline, additionally saturated by the homogenized
/// generators of every higher-codimension stratum.
pub fn algorithm2(
    strata: &[StratumSpec],
    direction: &Direction,
    precision: u32,
) -> Result<Vec<SpaiReport>, SpaiError> {
    for (i, s) in strata.iter().enumerate() {
        s.validate(i)?;
    }
    let Some(first) = strata.first() else {
        return Ok(Vec::new());
    };
    let user = first.generators[0].ring().clone();
    let d = user.nvars();
    if direction.entries().len() != d {
        return Err(SpaiError::Poly(PolyError::DirectionLength {
            expected: d,
            got: direction.entries().len(),
        }));
    }
    let rings = PipelineRings::build(&user)?;

    let mut reports = Vec::with_capacity(strata.len());
    for stratum in strata {
        let c = stratum.codimension;
        let homogenized: Result<Vec<Polynomial>, PolyError> =
            stratum.generators.iter().map(|g| rings.homogenize(g)).collect();
        let homogenized = homogenized?;

        let mut gens: Vec<Polynomial> = homogenized.clone();
        if c < d {
            // rank condition: all (c+1) x (c+1) minors of the scaled
            // gradients with the symbolic direction row appended
            let mut rows: Vec<Vec<Polynomial>> = Vec::with_capacity(c + 1);
            for f in &homogenized {
                let mut row = Vec::with_capacity(d);
                for j in 1..=d {
                    let zj = Polynomial::variable(&rings.big, rings.z(j))?;
                    row.push(zj.try_mul(&f.partial(rings.z(j))?)?);
                }
                rows.push(row);
            }
            let yrow: Result<Vec<Polynomial>, PolyError> =
                (1..=d).map(|j| Polynomial::variable(&rings.big, rings.y(j))).collect();
            rows.push(yrow?);
            gens.extend(maximal_minors(&rows)?);
        }
        // codimension d strata are points: every point is critical

        // saturate away every deeper stratum
        let mut exclusions: Vec<Ideal> = Vec::new();
        for other in strata {
            if other.codimension > c {
                let hom: Result<Vec<Polynomial>, PolyError> =
                    other.generators.iter().map(|g| rings.homogenize(g)).collect();
                exclusions.push(Ideal::new(&rings.big, hom?)?);
            }
        }
        reports.push(run_pipeline(&rings, gens, direction, &exclusions, false, precision)?);
    }
    Ok(reports)
}

/// Shared tail of both algorithms: adjoin the height relation, saturate,
/// substitute the direction, slice at infinity, and read off existence,
/// witnesses, and heights.
fn run_pipeline(
    rings: &PipelineRings,
    mut gens: Vec<Polynomial>,
    direction: &Direction,
    exclusions: &[Ideal],
    symbolic: bool,
    precision: u32,
) -> Result<SpaiReport, SpaiError> {
    let d = rings.d;
    gens.push(height_relation(rings, direction)?);

    let mut ideal = Ideal::new(&rings.big, gens)?;
    let coord_vars: Result<Vec<Polynomial>, PolyError> =
        (0..=d).map(|i| Polynomial::variable(&rings.big, i)).collect();
    ideal = ideal.saturate_all(&coord_vars?)?;
    for ex in exclusions {
        ideal = ideal.saturate_ideal(ex)?;
    }

    if symbolic {
        let slice = slice_at_infinity(rings, &ideal, &rings.big)?;
        return Ok(SpaiReport {
            saturated_ideal: slice,
            exists: None,
            witnesses: Vec::new(),
            heights: None,
        });
    }

    // pin the direction: y_j -> r_j, then drop the direction block
    let mut pinned: Vec<Polynomial> = Vec::with_capacity(ideal.generators().len());
    for g in ideal.generators() {
        let mut g = g.clone();
        for j in 1..=d {
            g = g.substitute_rat(rings.y(j), &Rat::from_integer(direction.entries()[j - 1].into()))?;
        }
        pinned.push(g.project_to(&rings.report)?);
    }
    let pinned = Ideal::new(&rings.report, pinned)?;

    let slice = slice_at_infinity(rings, &pinned, &rings.report)?;

    // existence: some projective coordinate escapes the radical
    let mut exists = false;
    for i in 0..=d {
        let zi = Polynomial::variable(&rings.report, i)?;
        if !slice.radical_member(&zi)? {
            exists = true;
            break;
        }
    }

    let witnesses = if exists { extract_witnesses(rings, &slice, precision)? } else { Vec::new() };
    let heights = heights_at_infinity(&slice, precision)?;

    Ok(SpaiReport {
        saturated_ideal: slice,
        exists: Some(exists),
        witnesses,
        heights: Some(heights),
    })
}

/// `eta * z0^{|r|} * z^{r-} - z^{r+}`: ties the height variable to the
/// direction monomial; reduces to `eta * z0^{|r|} - z^r` for nonnegative
/// directions.
fn height_relation(rings: &PipelineRings, r: &Direction) -> Result<Polynomial, SpaiError> {
    let total = r.l1_norm();
    if total > u16::MAX as u64 || r.entries().iter().any(|e| e.unsigned_abs() > u16::MAX as u64) {
        return Err(SpaiError::Poly(PolyError::ExponentOverflow));
    }
    let n = rings.big.nvars();
    let mut neg = alloc::vec![0u16; n];
    let mut pos = alloc::vec![0u16; n];
    neg[rings.z0()] = total as u16;
    neg[rings.eta()] = 1;
    for (j, &e) in r.entries().iter().enumerate() {
        if e >= 0 {
            pos[rings.z(j + 1)] = e as u16;
        } else {
            neg[rings.z(j + 1)] = (-e) as u16;
        }
    }
    Ok(Polynomial::from_terms(
        &rings.big,
        [
            (Monomial::from_exponents(&neg), Rat::one()),
            (Monomial::from_exponents(&pos), -Rat::one()),
        ],
    ))
}

/// Substitute the homogenizing variable to zero and adjoin it as a
/// generator, expressing the slice at the hyperplane at infinity in `target`
/// (the report ring, or the big ring in symbolic mode).
fn slice_at_infinity(
    rings: &PipelineRings,
    ideal: &Ideal,
    target: &Ring,
) -> Result<Ideal, SpaiError> {
    let mut gens: Vec<Polynomial> = Vec::with_capacity(ideal.generators().len() + 1);
    for g in ideal.generators() {
        let g = g.substitute_rat(rings.z0(), &Rat::zero())?;
        if !g.is_zero() {
            gens.push(g.lift_to(target)?);
        }
    }
    gens.push(Polynomial::variable(target, rings.z0())?);
    Ok(Ideal::new(target, gens)?)
}

/// Certified projective witnesses of the slice, one cell at a time: cell
/// `j` is where coordinates `0..j` vanish and coordinate `j` is scaled to 1.
/// Cells whose systems are not zero-dimensional are skipped (existence is
/// already decided); the cells partition projective space, so no
/// deduplication is needed.
fn extract_witnesses(
    rings: &PipelineRings,
    slice: &Ideal,
    precision: u32,
) -> Result<Vec<Witness>, SpaiError> {
    let d = rings.d;
    // the z-only ring drops the height variable
    let znames: Vec<String> = rings.report.names()[..=d].to_vec();
    let zring = Ring::new_internal(&znames)?;
    let keep: Vec<usize> = (0..=d).collect();

    let mut witnesses = Vec::new();
    for chart in 0..=d {
        let mut gens: Vec<Polynomial> = slice.generators().to_vec();
        let one = Polynomial::one(&rings.report);
        gens.push(Polynomial::variable(&rings.report, chart)?.try_sub(&one)?);
        for i in 0..chart {
            gens.push(Polynomial::variable(&rings.report, i)?);
        }
        let cell = Ideal::new(&rings.report, gens)?;
        if cell.is_unit() {
            continue;
        }
        let projected: Result<Vec<Polynomial>, PolyError> = cell
            .eliminate(&keep)?
            .generators()
            .iter()
            .map(|g| g.project_to(&zring))
            .collect();
        let zideal = Ideal::new(&zring, projected?)?;
        if zideal.is_unit() {
            continue;
        }
        match solve_zero_dim(&zideal, precision) {
            Ok(points) => {
                for point in points {
                    witnesses.push(Witness { chart, point });
                }
            }
            Err(CriticalError::NotZeroDimensional { .. }) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Ok(witnesses)
}

/// Heights of the stationary points at infinity from the sliced ideal:
/// saturate by the irrelevant ideal (every variable except the height
/// variable, which is last by construction), eliminate down to the height
/// variable alone, and isolate its nonzero roots; each contributes height
/// `-log|eta|`.
pub fn heights_at_infinity(slice: &Ideal, precision: u32) -> Result<HeightsOutcome, SpaiError> {
    let ring = slice.ring().clone();
    let n = ring.nvars();
    let eta = n - 1;
    let irrelevant: Result<Vec<Polynomial>, PolyError> =
        (0..eta).map(|i| Polynomial::variable(&ring, i)).collect();
    let pruned = slice.saturate_ideal(&Ideal::new(&ring, irrelevant?)?)?;
    let elim = pruned.eliminate(&[eta])?;

    let mut eliminant: Option<UniPoly> = None;
    for g in elim.generators() {
        if let Some(up) = UniPoly::from_multivariate(g, eta) {
            if !up.is_zero() {
                eliminant = Some(up);
                break;
            }
        }
    }
    let Some(p) = eliminant else {
        return Ok(HeightsOutcome::Unconstrained);
    };
    if p.degree() == 0 {
        // unit (or constant) eliminant: no values at all
        return Ok(HeightsOutcome::Values(Vec::new()));
    }

    // strip roots at zero (no height), then isolate what remains
    let mut coeffs = p.coeffs().to_vec();
    let zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
    coeffs.drain(..zeros);
    let p = UniPoly::new(coeffs).squarefree_part();
    if p.degree() == 0 {
        return Ok(HeightsOutcome::Values(Vec::new()));
    }
    let roots = isolate_roots(&p, precision)?;
    let mut values = Vec::with_capacity(roots.len());
    for root in roots {
        let min_poly = match &root.rational {
            Some(a) => UniPoly::new(alloc::vec![-a.clone(), Rat::one()]),
            None => p.clone(),
        };
        let b = &root.bx;
        let modsq = b.re() * b.re() + b.im() * b.im();
        debug_assert!(!modsq.is_zero(), "zero roots were stripped");
        // `+ 0.0` turns a negative zero (from `|eta| = 1`) into plain zero.
        let height = -rat_ln_abs(&modsq) / 2.0 + 0.0;
        values.push(EtaValue { eta: b.clone(), min_poly, height });
    }
    Ok(HeightsOutcome::Values(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::rat::{rat_frac, rat_int};

    fn ring2() -> Ring {
        Ring::new(&["x", "y"]).unwrap()
    }

    fn p(ring: &Ring, s: &str) -> Polynomial {
        parse_polynomial(s, ring).unwrap()
    }

    fn ideal_in(ring: &Ring, gens: &[&str]) -> Ideal {
        let gens: Vec<Polynomial> = gens.iter().map(|s| p(ring, s)).collect();
        Ideal::new(ring, gens).unwrap()
    }

    fn diag(d: usize) -> Direction {
        Direction::new(alloc::vec![1; d]).unwrap()
    }

    #[test]
    fn first_worked_example_full_report() {
        // Q = 2 - x y^2 - 2 x y - x + y, diagonal direction: the stationary
        // points at infinity form the double point (0 : 0 : 1) at height 0
        let r = ring2();
        let q = p(&r, "2 - x*y^2 - 2*x*y - x + y");
        let report = algorithm1(&SpaiProblem::new(q.clone(), diag(2)), 128).unwrap();

        let ring = report.saturated_ideal.ring().clone();
        assert_eq!(ring.names(), &["z0", "x", "y", "eta"]);
        let expected = ideal_in(&ring, &["(eta - 1)^2", "z0", "y*(eta - 1)", "x"]);
        assert!(report.saturated_ideal.equals(&expected).unwrap());
        assert_eq!(report.exists, Some(true));

        // the single witness is (z0 : x : y) = (0 : 0 : 1)
        assert_eq!(report.witnesses.len(), 1);
        let w = &report.witnesses[0];
        assert_eq!(w.chart, 2);
        let c = &w.point.coords;
        assert!(c[0].is_exact() && c[0].re().is_zero());
        assert!(c[1].is_exact() && c[1].re().is_zero());
        assert!(c[2].is_exact() && c[2].re() == &rat_int(1));

        // eta = 1 exactly: height 0
        match report.heights.as_ref().unwrap() {
            HeightsOutcome::Values(vs) => {
                assert_eq!(vs.len(), 1);
                assert!(vs[0].eta.is_exact() && vs[0].eta.re() == &rat_int(1));
                assert_eq!(vs[0].height, 0.0);
            }
            HeightsOutcome::Unconstrained => panic!("heights are constrained here"),
        }

        // conservativity: the sliced ideal contains the pinned critical
        // generators and the height relation
        let slice = &report.saturated_ideal;
        let qh = p(&ring, "2*z0^3 - x*y^2 - 2*x*y*z0 - x*z0^2 + y*z0^2");
        let row = p(&ring, "x*(-y^2 - 2*y*z0 - z0^2) - y*(-2*x*y - 2*x*z0 + z0^2)");
        let height_rel = p(&ring, "eta*z0^2 - x*y");
        for g in [&qh, &row, &height_rel] {
            assert!(slice.member(g).unwrap(), "missing {g}");
        }
    }

    #[test]
    fn second_worked_example_slice_and_pruned_heights() {
        // Q = 1 - x - y - x y^2: the eliminant keeps a quartic factor that
        // irrelevant-ideal pruning must discard, leaving eta = -1
        let r = ring2();
        let q = p(&r, "1 - x - y - x*y^2");
        let report = algorithm1(&SpaiProblem::new(q, diag(2)), 128).unwrap();

        let ring = report.saturated_ideal.ring().clone();
        let expected = ideal_in(
            &ring,
            &["(eta + 1)*(4*eta^2 + 4*eta - 1)", "z0", "y*(eta + 1)", "x"],
        );
        assert!(report.saturated_ideal.equals(&expected).unwrap());
        assert_eq!(report.exists, Some(true));

        match report.heights.as_ref().unwrap() {
            HeightsOutcome::Values(vs) => {
                assert_eq!(vs.len(), 1);
                assert!(vs[0].eta.is_exact() && vs[0].eta.re() == &rat_int(-1));
                assert_eq!(vs[0].height, 0.0);
            }
            HeightsOutcome::Unconstrained => panic!("heights are constrained here"),
        }
    }

    #[test]
    fn geometric_series_has_nothing_at_infinity() {
        // 1/(1 - 2x): the only singularity is affine
        let r = Ring::new(&["x"]).unwrap();
        let q = p(&r, "1 - 2*x");
        let report = algorithm1(&SpaiProblem::new(q, Direction::new(alloc::vec![1]).unwrap()), 96)
            .unwrap();
        assert_eq!(report.exists, Some(false));
        assert!(report.witnesses.is_empty());
        match report.heights.as_ref().unwrap() {
            HeightsOutcome::Values(vs) => assert!(vs.is_empty()),
            HeightsOutcome::Unconstrained => panic!("empty, not unconstrained"),
        }
    }

    #[test]
    fn squarefree_input_is_repaired() {
        let r = ring2();
        let q = p(&r, "2 - x*y^2 - 2*x*y - x + y");
        let qq = q.try_mul(&q).unwrap();
        let a = algorithm1(&SpaiProblem::new(q, diag(2)), 96).unwrap();
        let b = algorithm1(&SpaiProblem::new(qq, diag(2)), 96).unwrap();
        assert!(a.saturated_ideal.equals(&b.saturated_ideal).unwrap());
        assert_eq!(a.exists, b.exists);
    }

    #[test]
    fn symbolic_direction_keeps_the_direction_block() {
        let r = ring2();
        let q = p(&r, "2 - x*y^2 - 2*x*y - x + y");
        let problem = SpaiProblem::new(q, diag(2)).with_symbolic_direction();
        let report = algorithm1(&problem, 96).unwrap();
        assert_eq!(report.exists, None);
        assert!(report.heights.is_none());
        assert!(report.witnesses.is_empty());
        let names = report.saturated_ideal.ring().names();
        assert_eq!(names, &["z0", "x", "y", "eta", "y1", "y2"]);
        // the slice still pins the hyperplane at infinity
        let z0 = Polynomial::variable(report.saturated_ideal.ring(), 0).unwrap();
        assert!(report.saturated_ideal.member(&z0).unwrap());
    }

    #[test]
    fn empty_exclusion_is_rejected() {
        let r = ring2();
        let q = p(&r, "1 - x - y");
        let unit = ideal_in(&r, &["1"]);
        let problem = SpaiProblem::new(q, diag(2)).with_exclusion(unit);
        match algorithm1(&problem, 96) {
            Err(SpaiError::InconsistentExclusion) => {}
            other => panic!("expected exclusion error, got {other:?}"),
        }
    }

    #[test]
    fn affine_critical_ideal_matches_hand_expansion() {
        // the 2x2 determinant for a hypersurface in two variables
        let r = ring2();
        let q = p(&r, "1 - x - y - x*y^2");
        let stratum = StratumSpec::new(alloc::vec![q.clone()], 1);
        let ideal = critical_ideal(&stratum, Some(&diag(2))).unwrap();
        let expected = ideal_in(&r, &["1 - x - y - x*y^2", "x*(-1 - y^2) - y*(-1 - 2*x*y)"]);
        assert!(ideal.equals(&expected).unwrap());
    }

    #[test]
    fn binomial_critical_system_pins_the_half_point() {
        let r = ring2();
        let stratum = StratumSpec::new(alloc::vec![p(&r, "1 - x - y")], 1);
        let ideal = critical_ideal(&stratum, Some(&diag(2))).unwrap();
        let pts = solve_zero_dim(&ideal, 96).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].coords[0].re() == &rat_frac(1, 2));
        assert!(pts[0].coords[1].re() == &rat_frac(1, 2));
    }

    #[test]
    fn symbolic_critical_ideal_appends_direction_variables() {
        let r = ring2();
        let stratum = StratumSpec::new(alloc::vec![p(&r, "1 - x - y")], 1);
        let ideal = critical_ideal(&stratum, None).unwrap();
        assert_eq!(ideal.ring().names(), &["x", "y", "y1", "y2"]);
        let expected = ideal_in(ideal.ring(), &["1 - x - y", "-x*y2 + y*y1"]);
        assert!(ideal.equals(&expected).unwrap());
    }

    #[test]
    fn point_stratum_has_no_rank_condition_to_impose() {
        let r = ring2();
        let stratum =
            StratumSpec::new(alloc::vec![p(&r, "x - 1"), p(&r, "y - 2")], 2);
        match critical_ideal(&stratum, Some(&diag(2))) {
            Err(SpaiError::NoMinors { codimension: 2, nvars: 2 }) => {}
            other => panic!("expected a no-minors error, got {other:?}"),
        }
    }

    #[test]
    fn stratum_codimension_is_checked() {
        let r = ring2();
        let bad = StratumSpec::new(alloc::vec![p(&r, "x - y")], 2);
        match bad.validate(3) {
            Err(SpaiError::BadStratum { index: 3, expected: 0, got: 1 }) => {}
            other => panic!("expected a codimension error, got {other:?}"),
        }
        let good = StratumSpec::new(alloc::vec![p(&r, "x - y")], 1);
        good.validate(0).unwrap();
    }

    #[test]
    fn stratified_run_on_a_smooth_hypersurface_matches_the_direct_one() {
        let r = ring2();
        let q = p(&r, "2 - x*y^2 - 2*x*y - x + y");
        let direct = algorithm1(&SpaiProblem::new(q.clone(), diag(2)), 96).unwrap();
        let strata = alloc::vec![StratumSpec::new(alloc::vec![q], 1)];
        let reports = algorithm2(&strata, &diag(2), 96).unwrap();
        assert_eq!(reports.len(), 1);
        assert!(reports[0].saturated_ideal.equals(&direct.saturated_ideal).unwrap());
        assert_eq!(reports[0].exists, direct.exists);
        assert_eq!(reports[0].witnesses.len(), direct.witnesses.len());
    }

    #[test]
    fn no_strata_no_reports() {
        let reports = algorithm2(&[], &diag(2), 96).unwrap();
        assert!(reports.is_empty());
    }

    #[test]
    fn free_height_variable_reports_unconstrained() {
        let ring = Ring::new_internal(&["z0", "x", "eta"]).unwrap();
        let slice = ideal_in(&ring, &["z0", "x*eta - 1"]);
        match heights_at_infinity(&slice, 96).unwrap() {
            HeightsOutcome::Unconstrained => {}
            HeightsOutcome::Values(vs) => panic!("expected unconstrained, got {} values", vs.len()),
        }
    }
}
