//! Brute-force power-series coefficient extraction for `P/Q` along a lattice
//! direction, in exact rational arithmetic.
//!
//! This is the independent ground truth the asymptotic machinery is checked
//! against: coefficients come from nothing but truncated series inversion
//! (degree-by-degree convolution), so any agreement with a saddle-point
//! prediction is evidence, not circularity.  A least-squares growth fit over
//! the tail of a coefficient window estimates the exponential rate and the
//! polynomial order empirically.

use alloc::vec;
use alloc::vec::Vec;

use crate::poly::{Direction, PolyError, Polynomial};
use crate::rat::{rat_ln_abs, rat_zero, Rat};

use num_traits::Zero;

/// Per-axis degree cap: a request must satisfy `count * max(direction) <=
/// DEGREE_CAP`.
pub const DEGREE_CAP: u32 = 400;

/// Cap on dense-grid cells (`prod(count * r_j + 1)`), guarding memory.
pub const CELL_CAP: u64 = 1 << 22;

/// Errors from series extraction and growth estimation.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    /// Underlying polynomial failure (ring mismatch and the like).
    Poly(PolyError),
    /// The denominator vanishes at the origin: no power-series expansion
    /// there (Laurent re-centering is out of scope).
    DenominatorVanishesAtOrigin,
    /// The direction has a negative entry; series coefficients are indexed
    /// by nonnegative multiples only.
    NegativeDirection,
    /// The request exceeds the degree or grid-size cap.
    CapExceeded { degree: u64, cells: u64 },
    /// Growth estimation needs at least this many nonzero tail values.
    TooFewValues { needed: usize, got: usize },
}

impl core::fmt::Display for OracleError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            OracleError::Poly(e) => write!(f, "{e}"),
            OracleError::DenominatorVanishesAtOrigin => {
                write!(f, "denominator vanishes at the origin: no power series there")
            }
            OracleError::NegativeDirection => {
                write!(f, "series extraction needs a direction with nonnegative entries")
            }
            OracleError::CapExceeded { degree, cells } => write!(
                f,
                "series request too large (degree {degree} > {DEGREE_CAP} or {cells} grid \
                 cells > {CELL_CAP})"
            ),
            OracleError::TooFewValues { needed, got } => write!(
                f,
                "growth estimation needs at least {needed} nonzero tail values, got {got}"
            ),
        }
    }
}

impl From<PolyError> for OracleError {
    fn from(e: PolyError) -> OracleError {
        OracleError::Poly(e)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for OracleError {}

/// A coefficient-extraction request: the rational function `numerator /
/// denominator`, the lattice direction, and how many multiples to report.
#[derive(Debug, Clone)]
pub struct SeriesRequest {
    pub numerator: Polynomial,
    pub denominator: Polynomial,
    pub direction: Direction,
    /// Report `a_{n * direction}` for `n = 0..=count`.
    pub count: usize,
}

impl SeriesRequest {
    pub fn new(
        numerator: Polynomial,
        denominator: Polynomial,
        direction: Direction,
        count: usize,
    ) -> SeriesRequest {
        SeriesRequest { numerator, denominator, direction, count }
    }
}

/// The coefficients `a_{n*r}` of the power-series expansion of `P/Q` at the
/// origin, for `n = 0..=count`, computed exactly by degree-by-degree
/// inversion: `a = (P - (Q - Q(0)) * a) / Q(0)` on a dense exponent grid.
pub fn coefficients(req: &SeriesRequest) -> Result<Vec<Rat>, OracleError> {
    let ring = req.denominator.ring().clone();
    if req.numerator.ring() != &ring {
        return Err(OracleError::Poly(PolyError::RingMismatch));
    }
    let d = ring.nvars();
    if req.direction.entries().len() != d {
        return Err(OracleError::Poly(PolyError::DirectionLength {
            expected: d,
            got: req.direction.entries().len(),
        }));
    }
    if req.direction.has_negative() {
        return Err(OracleError::NegativeDirection);
    }
    let q0 = req.denominator.constant_term();
    if q0.is_zero() {
        return Err(OracleError::DenominatorVanishesAtOrigin);
    }

    // Grid bounds: axis j runs over exponents 0..=count*r_j.
    let n = req.count as u64;
    let mut dims: Vec<u64> = Vec::with_capacity(d);
    let mut cells: u64 = 1;
    let mut max_degree: u64 = 0;
    for &rj in req.direction.entries() {
        let m = n * rj as u64;
        max_degree = max_degree.max(m);
        dims.push(m + 1);
        cells = cells.saturating_mul(m + 1);
    }
    if max_degree > DEGREE_CAP as u64 || cells > CELL_CAP {
        return Err(OracleError::CapExceeded { degree: max_degree, cells });
    }

    // Row-major strides; row-major enumeration visits every componentwise-
    // smaller index first, which is exactly what the recurrence needs.
    let mut strides: Vec<u64> = vec![1; d];
    for j in (0..d.saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * dims[j + 1];
    }
    let offset_of = |exps: &[u64]| -> usize {
        exps.iter().zip(&strides).map(|(e, s)| e * s).sum::<u64>() as usize
    };

    // In-grid terms of P and of Q minus its constant term.
    let in_grid = |m: &crate::poly::Monomial| -> bool {
        (0..d).all(|j| (m.exp(j) as u64) < dims[j])
    };
    let p_terms: Vec<(Vec<u64>, Rat)> = req
        .numerator
        .terms()
        .iter()
        .filter(|(m, _)| in_grid(m))
        .map(|(m, c)| ((0..d).map(|j| m.exp(j) as u64).collect(), c.clone()))
        .collect();
    let q_terms: Vec<(Vec<u64>, Rat)> = req
        .denominator
        .terms()
        .iter()
        .filter(|(m, _)| !m.is_one() && in_grid(m))
        .map(|(m, c)| ((0..d).map(|j| m.exp(j) as u64).collect(), c.clone()))
        .collect();

    let mut grid: Vec<Rat> = vec![rat_zero(); cells as usize];
    let mut idx: Vec<u64> = vec![0; d];
    loop {
        let here = offset_of(&idx);
        let mut acc = rat_zero();
        for (e, c) in &p_terms {
            if e == &idx {
                acc += c;
            }
        }
        for (k, c) in &q_terms {
            if (0..d).all(|j| k[j] <= idx[j]) {
                let prev: Vec<u64> = (0..d).map(|j| idx[j] - k[j]).collect();
                acc -= c * &grid[offset_of(&prev)];
            }
        }
        grid[here] = acc / &q0;

        // Odometer step in row-major order.
        let mut j = d;
        loop {
            if j == 0 {
                // Grid complete: read the diagonal multiples off the grid.
                let out = (0..=req.count)
                    .map(|step| {
                        let e: Vec<u64> = req
                            .direction
                            .entries()
                            .iter()
                            .map(|&rj| step as u64 * rj as u64)
                            .collect();
                        grid[offset_of(&e)].clone()
                    })
                    .collect();
                return Ok(out);
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < dims[j] {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// What a least-squares growth fit concluded about a coefficient window.
#[derive(Debug, Clone, PartialEq)]
pub enum GrowthEstimate {
    /// The tail of the window is identically zero.
    Zero,
    /// `log|a_n| ~ n*log(rate) + poly_order*log(n) + const` over the tail.
    Fit { rate: f64, poly_order: f64 },
}

impl GrowthEstimate {
    pub fn rate(&self) -> Option<f64> {
        match self {
            GrowthEstimate::Zero => None,
            GrowthEstimate::Fit { rate, .. } => Some(*rate),
        }
    }

    pub fn poly_order(&self) -> Option<f64> {
        match self {
            GrowthEstimate::Zero => None,
            GrowthEstimate::Fit { poly_order, .. } => Some(*poly_order),
        }
    }
}

/// Empirical growth of a coefficient window `a_0..a_N`: least-squares fit of
/// `log|a_n|` against `(1, n, log n)` over the nonzero entries of the tail
/// half, returning `exp(slope)` and the `log n` coefficient.
pub fn growth_estimate(values: &[Rat]) -> Result<GrowthEstimate, OracleError> {
    let start = values.len() / 2;
    let tail: Vec<(f64, f64)> = values
        .iter()
        .enumerate()
        .skip(start.max(1))
        .filter(|(_, v)| !v.is_zero())
        .map(|(n, v)| (n as f64, rat_ln_abs(v)))
        .collect();
    if tail.is_empty() {
        return Ok(GrowthEstimate::Zero);
    }
    if tail.len() < 8 {
        return Err(OracleError::TooFewValues { needed: 8, got: tail.len() });
    }

    // Normal equations for log|a_n| = c0 + c1*n + c2*log(n).
    let mut ata = [[0.0f64; 3]; 3];
    let mut atb = [0.0f64; 3];
    for &(n, y) in &tail {
        let row = [1.0, n, libm::log(n)];
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * y;
        }
    }
    let sol = solve3(&mut ata, &mut atb);
    Ok(GrowthEstimate::Fit { rate: libm::exp(sol[1]), poly_order: sol[2] })
}

/// Gaussian elimination with partial pivoting on a 3x3 system.
fn solve3(a: &mut [[f64; 3]; 3], b: &mut [f64; 3]) -> [f64; 3] {
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0f64; 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for k in row + 1..3 {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, Ring};
    use crate::rat::rat_int;

    fn diag_request(num: &str, den: &str, vars: &[&str], count: usize) -> SeriesRequest {
        let ring = Ring::new(vars).unwrap();
        SeriesRequest::new(
            parse_polynomial(num, &ring).unwrap(),
            parse_polynomial(den, &ring).unwrap(),
            Direction::new(vec![1; vars.len()]).unwrap(),
            count,
        )
    }

    fn binomial(n: u64, k: u64) -> Rat {
        let mut acc = rat_int(1);
        for i in 0..k {
            acc = acc * rat_int((n - i) as i64) / rat_int((i + 1) as i64);
        }
        acc
    }

    #[test]
    fn central_binomials_exactly() {
        let req = diag_request("1", "1 - x - y", &["x", "y"], 20);
        let coeffs = coefficients(&req).unwrap();
        for (n, c) in coeffs.iter().enumerate() {
            assert_eq!(*c, binomial(2 * n as u64, n as u64), "n = {n}");
        }
    }

    #[test]
    fn first_central_binomials_list() {
        let req = diag_request("1", "1 - x - y", &["x", "y"], 4);
        let coeffs = coefficients(&req).unwrap();
        let expect: Vec<Rat> = [1, 2, 6, 20, 70].iter().map(|&v| rat_int(v)).collect();
        assert_eq!(coeffs, expect);
    }

    #[test]
    fn constant_term_is_ratio_of_constants() {
        let req = diag_request("3 - x", "2 - y - x*y", &["x", "y"], 0);
        let coeffs = coefficients(&req).unwrap();
        assert_eq!(coeffs, vec![crate::rat::rat_frac(3, 2)]);
    }

    #[test]
    fn rejects_denominator_vanishing_at_origin() {
        let req = diag_request("1", "x + y", &["x", "y"], 3);
        assert_eq!(coefficients(&req), Err(OracleError::DenominatorVanishesAtOrigin));
    }

    #[test]
    fn rejects_negative_directions() {
        let ring = Ring::new(&["x", "y"]).unwrap();
        let req = SeriesRequest::new(
            parse_polynomial("1", &ring).unwrap(),
            parse_polynomial("1 - x - y", &ring).unwrap(),
            Direction::new(vec![1, -1]).unwrap(),
            3,
        );
        assert_eq!(coefficients(&req), Err(OracleError::NegativeDirection));
    }

    #[test]
    fn rejects_oversized_requests() {
        let req = diag_request("1", "1 - x - y", &["x", "y"], 500);
        match coefficients(&req) {
            Err(OracleError::CapExceeded { .. }) => {}
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn nondiagonal_direction_reads_lattice_multiples() {
        // 1/(1 - x*y^2) = sum (x*y^2)^k: a_{n*(1,2)} = 1.
        let ring = Ring::new(&["x", "y"]).unwrap();
        let req = SeriesRequest::new(
            parse_polynomial("1", &ring).unwrap(),
            parse_polynomial("1 - x*y^2", &ring).unwrap(),
            Direction::new(vec![1, 2]).unwrap(),
            6,
        );
        let coeffs = coefficients(&req).unwrap();
        assert_eq!(coeffs, vec![rat_int(1); 7]);
    }

    #[test]
    fn multiplying_back_by_the_denominator_recovers_the_numerator() {
        // Consistency at the window level: Q * A = P forces the recurrence
        // at every grid point, which the recurrence construction guarantees;
        // spot-check a nontrivial diagonal against an independent closed
        // form: diag of 1/(1 - x - y - x*y) are the Delannoy numbers.
        let req = diag_request("1", "1 - x - y - x*y", &["x", "y"], 8);
        let coeffs = coefficients(&req).unwrap();
        let delannoy: Vec<Rat> =
            [1, 3, 13, 63, 321, 1683, 8989, 48639, 265729].iter().map(|&v| rat_int(v)).collect();
        assert_eq!(coeffs, delannoy);
    }

    #[test]
    fn growth_of_central_binomials() {
        let req = diag_request("1", "1 - x - y", &["x", "y"], 40);
        let coeffs = coefficients(&req).unwrap();
        let est = growth_estimate(&coeffs).unwrap();
        let rate = est.rate().unwrap();
        let order = est.poly_order().unwrap();
        assert!((rate - 4.0).abs() / 4.0 < 0.02, "rate {rate}");
        assert!((order + 0.5).abs() < 0.15, "poly order {order}");
    }

    #[test]
    fn growth_of_a_geometric_sequence() {
        let values: Vec<Rat> = (0..30).map(|n| crate::rat::rat_powi(&rat_int(3), n)).collect();
        let est = growth_estimate(&values).unwrap();
        assert!((est.rate().unwrap() - 3.0).abs() < 1e-6);
        assert!(est.poly_order().unwrap().abs() < 1e-6);
    }

    #[test]
    fn growth_of_zero_tail_is_marked() {
        let values = vec![rat_zero(); 24];
        assert_eq!(growth_estimate(&values).unwrap(), GrowthEstimate::Zero);
    }

    #[test]
    fn growth_needs_enough_nonzero_values() {
        let mut values = vec![rat_zero(); 24];
        values[20] = rat_int(5);
        assert_eq!(
            growth_estimate(&values),
            Err(OracleError::TooFewValues { needed: 8, got: 1 })
        );
    }
}
