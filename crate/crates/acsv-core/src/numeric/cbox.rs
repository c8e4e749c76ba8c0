//! Complex disk arithmetic with exact rational data.
//!
//! A [`CBox`] is the closed disk `{ z : |z - (re + i im)| <= rad }` with
//! rational `re`, `im`, `rad >= 0`.  Every operation returns a disk that
//! contains the image of every point of the operands, so enclosures stay
//! rigorous through arbitrarily long computations.  To keep the rationals
//! from growing without bound, results are rounded onto the dyadic grid
//! `m / 2^prec` — centers to nearest, with the rounding error added to the
//! radius, and the radius upward.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::numeric::real::sqrt_bounds;
use crate::numeric::NumericError;
use crate::poly::Polynomial;
use crate::rat::{pow2, rat_to_f64, round_nearest, round_up, Rat};

/// A closed complex disk with exact rational center and radius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CBox {
    re: Rat,
    im: Rat,
    rad: Rat,
}

impl CBox {
    /// Disk of radius zero around an exact rational point on the real axis.
    pub fn from_rat(re: Rat) -> Self {
        CBox { re, im: Rat::zero(), rad: Rat::zero() }
    }

    /// Disk of radius zero around an exact complex rational point.
    pub fn from_parts(re: Rat, im: Rat) -> Self {
        CBox { re, im, rad: Rat::zero() }
    }

    /// Disk with an explicit radius; panics on a negative radius.
    pub fn with_radius(re: Rat, im: Rat, rad: Rat) -> Self {
        assert!(!rad.is_negative(), "disk radius must be nonnegative");
        CBox { re, im, rad }
    }

    /// The exact zero.
    pub fn zero() -> Self {
        CBox::from_rat(Rat::zero())
    }

    /// The exact one.
    pub fn one() -> Self {
        CBox::from_rat(Rat::new(1.into(), 1.into()))
    }

    /// Real part of the center.
    pub fn re(&self) -> &Rat {
        &self.re
    }

    /// Imaginary part of the center.
    pub fn im(&self) -> &Rat {
        &self.im
    }

    /// Radius of the disk.
    pub fn rad(&self) -> &Rat {
        &self.rad
    }

    /// Whether the disk is a single exact point.
    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Whether the disk contains zero (so the value cannot be certified
    /// nonzero at this precision).
    pub fn contains_zero(&self) -> bool {
        &self.re * &self.re + &self.im * &self.im <= &self.rad * &self.rad
    }

    /// Whether the disk contains the exact point `re + i im`.
    pub fn contains_point(&self, re: &Rat, im: &Rat) -> bool {
        let dr = &self.re - re;
        let di = &self.im - im;
        &dr * &dr + &di * &di <= &self.rad * &self.rad
    }

    /// Whether two disks are certifiably disjoint.
    pub fn disjoint_from(&self, other: &CBox) -> bool {
        let dr = &self.re - &other.re;
        let di = &self.im - &other.im;
        let sum = &self.rad + &other.rad;
        &dr * &dr + &di * &di > &sum * &sum
    }

    /// Complex conjugate (exact).
    pub fn conj(&self) -> CBox {
        CBox { re: self.re.clone(), im: -self.im.clone(), rad: self.rad.clone() }
    }

    /// Negation (exact).
    pub fn neg(&self) -> CBox {
        CBox { re: -self.re.clone(), im: -self.im.clone(), rad: self.rad.clone() }
    }

    /// Center as a pair of `f64`s, for reporting only.
    pub fn to_f64(&self) -> (f64, f64) {
        (rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    /// Upper bound on `|z|` over the disk (l1 bound on the center modulus).
    pub fn mag_upper(&self) -> Rat {
        self.re.abs() + self.im.abs() + &self.rad
    }

    /// Lower bound on `|z|` over the disk (may be zero).
    pub fn mag_lower(&self) -> Rat {
        // max(|re|, |im|) <= |center|, so this underestimates safely
        let m = self.re.abs().max(self.im.abs());
        let lo = m - &self.rad;
        if lo.is_negative() {
            Rat::zero()
        } else {
            lo
        }
    }

    /// Round the box onto the dyadic grid `m / 2^prec`, folding all rounding
    /// error into the (upward-rounded) radius.
    pub fn rounded(&self, prec: u32) -> CBox {
        let re = round_nearest(&self.re, prec);
        let im = round_nearest(&self.im, prec);
        let slack = (&self.re - &re).abs() + (&self.im - &im).abs() + &self.rad;
        let rad = round_up(&slack, prec + 2);
        CBox { re, im, rad }
    }

    /// Sum of two disks.
    pub fn add(&self, other: &CBox, prec: u32) -> CBox {
        CBox {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
            rad: &self.rad + &other.rad,
        }
        .rounded(prec)
    }

    /// Difference of two disks.
    pub fn sub(&self, other: &CBox, prec: u32) -> CBox {
        self.add(&other.neg(), prec)
    }

    /// Scale by an exact rational.
    pub fn scale(&self, c: &Rat, prec: u32) -> CBox {
        CBox {
            re: &self.re * c,
            im: &self.im * c,
            rad: &self.rad * c.abs(),
        }
        .rounded(prec)
    }

    /// Product of two disks: centers multiply, radii propagate through
    /// `|c1| r2 + |c2| r1 + r1 r2` with l1 upper bounds for the moduli.
    pub fn mul(&self, other: &CBox, prec: u32) -> CBox {
        let re = &self.re * &other.re - &self.im * &other.im;
        let im = &self.re * &other.im + &self.im * &other.re;
        let m1 = self.re.abs() + self.im.abs();
        let m2 = other.re.abs() + other.im.abs();
        let rad = m1 * &other.rad + m2 * &self.rad + &self.rad * &other.rad;
        CBox { re, im, rad }.rounded(prec)
    }

    /// Reciprocal of a disk certified away from zero.  Uses the exact image
    /// formula: `1/D(c, r) = D(conj(c)/(|c|^2 - r^2), r/(|c|^2 - r^2))`.
    pub fn recip(&self, prec: u32) -> Result<CBox, NumericError> {
        let c2 = &self.re * &self.re + &self.im * &self.im;
        let r2 = &self.rad * &self.rad;
        if c2 <= r2 {
            return Err(NumericError::UncertainZero);
        }
        let denom = c2 - r2;
        Ok(CBox {
            re: &self.re / &denom,
            im: -&self.im / &denom,
            rad: &self.rad / &denom,
        }
        .rounded(prec))
    }

    /// Quotient of two disks.
    pub fn div(&self, other: &CBox, prec: u32) -> Result<CBox, NumericError> {
        Ok(self.mul(&other.recip(prec + 8)?, prec))
    }

    /// Integer power, with negative exponents via [`CBox::recip`].
    pub fn powi(&self, e: i64, prec: u32) -> Result<CBox, NumericError> {
        if e == 0 {
            return Ok(CBox::one());
        }
        let wp = prec + 16;
        let mut base = if e < 0 { self.recip(wp)? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = CBox::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, wp);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base, wp);
            }
        }
        Ok(acc.rounded(prec))
    }

    /// `(lo, hi)` rational bounds on `|z|` over the disk.
    pub fn abs_bounds(&self, prec: u32) -> (Rat, Rat) {
        let c2 = &self.re * &self.re + &self.im * &self.im;
        let (clo, chi) = sqrt_bounds(&c2, prec).expect("modulus squared is nonnegative");
        let lo = clo - &self.rad;
        let lo = if lo.is_negative() { Rat::zero() } else { lo };
        (lo, chi + &self.rad)
    }

    /// Principal square root of a disk that provably avoids the branch cut
    /// `(-inf, 0]`.  Errors with [`NumericError::BranchCut`] when avoidance
    /// cannot be certified at this precision.
    pub fn sqrt(&self, prec: u32) -> Result<CBox, NumericError> {
        // cut avoidance: entirely in the open right half plane, or entirely
        // above / below the real axis
        let right = self.re > self.rad;
        let off_axis = self.im.abs() > self.rad;
        if !right && !off_axis {
            return Err(NumericError::BranchCut);
        }
        let wp = prec + 16;
        // modulus of the center, bracketed
        let c2 = &self.re * &self.re + &self.im * &self.im;
        let (rho_lo, rho_hi) = sqrt_bounds(&c2, wp).expect("nonnegative");
        let half = pow2(-1);
        // sqrt(c) = a + i sign(im) b, a = sqrt((rho+re)/2), b = sqrt((rho-re)/2)
        let clamp = |x: Rat| if x.is_negative() { Rat::zero() } else { x };
        let (a_lo, _) = sqrt_bounds(&clamp((&rho_lo + &self.re) * &half), wp).expect("nonnegative");
        let (_, a_hi) = sqrt_bounds(&clamp((&rho_hi + &self.re) * &half), wp).expect("nonnegative");
        let (b_lo, _) = sqrt_bounds(&clamp((&rho_lo - &self.re) * &half), wp).expect("nonnegative");
        let (_, b_hi) = sqrt_bounds(&clamp((&rho_hi - &self.re) * &half), wp).expect("nonnegative");
        let b_sign = if self.im.is_negative() { -Rat::new(1.into(), 1.into()) } else { Rat::new(1.into(), 1.into()) };
        let re = (&a_lo + &a_hi) * &half;
        let im = (&b_lo + &b_hi) * &half * &b_sign;
        let center_err = (&a_hi - &a_lo) * &half + (&b_hi - &b_lo) * &half;
        // |sqrt z - sqrt c| <= rad / (sqrt 2 * sqrt(M - rad)), with
        // M = max(|re|, |im|) <= |c|; cut avoidance guarantees M > rad
        let m = self.re.abs().max(self.im.abs()) - &self.rad;
        debug_assert!(m.is_positive());
        let (inv_lo, _) = sqrt_bounds(&m, wp).expect("positive");
        if inv_lo.is_zero() {
            return Err(NumericError::UncertainZero);
        }
        let two = Rat::new(2.into(), 1.into());
        let (_, sqrt2_hi) = sqrt_bounds(&two, wp).expect("positive");
        // 1/(sqrt2 * sqrt(m)) <= sqrt2_hi / (2 * inv_lo)  since 1/sqrt2 <= sqrt2/2
        let spread = &self.rad * &sqrt2_hi / (&two * &inv_lo);
        let rad = center_err + spread;
        Ok(CBox { re, im, rad }.rounded(prec))
    }
}

/// Enclosure of `exp(i theta) = cos theta + i sin theta` for a rational angle
/// with `|theta| <= 1`, via the alternating Taylor series with the first
/// omitted term as the error bound.
pub fn cis_bounds(theta: &Rat, prec: u32) -> Result<CBox, NumericError> {
    if theta.abs() > Rat::new(1.into(), 1.into()) {
        return Err(NumericError::NotInDomain);
    }
    let theta2 = theta * theta;
    let tol = pow2(-((prec + 4) as i64));
    // cos: sum (-1)^k theta^(2k) / (2k)!
    let mut cos_sum = Rat::zero();
    let mut term = Rat::new(1.into(), 1.into()); // theta^(2k) / (2k)!
    let mut k: u64 = 0;
    let cos_err;
    loop {
        cos_sum += if k % 2 == 0 { term.clone() } else { -term.clone() };
        // next term: multiply by theta^2 / ((2k+1)(2k+2))
        term = &term * &theta2 / Rat::new(((2 * k + 1) * (2 * k + 2)).into(), 1.into());
        k += 1;
        if term <= tol {
            cos_err = term.clone();
            break;
        }
    }
    // sin: sum (-1)^k theta^(2k+1) / (2k+1)!
    let mut sin_sum = Rat::zero();
    let mut term = theta.clone();
    let mut k: u64 = 0;
    let sin_err;
    loop {
        sin_sum += if k % 2 == 0 { term.clone() } else { -term.clone() };
        term = &term * &theta2 / Rat::new(((2 * k + 2) * (2 * k + 3)).into(), 1.into());
        k += 1;
        if term.abs() <= tol {
            sin_err = term.abs();
            break;
        }
    }
    Ok(CBox { re: cos_sum, im: sin_sum, rad: cos_err + sin_err }.rounded(prec))
}

/// Enclosure of `log(1 + x)` for a disk with `|x| <= 1/2` everywhere
/// (principal branch; the domain bound keeps the series estimate valid).
pub fn log1p_box(x: &CBox, prec: u32) -> Result<CBox, NumericError> {
    let u = {
        let (_, hi) = x.abs_bounds(prec + 8);
        hi
    };
    if u > Rat::new(1.into(), 2.into()) {
        return Err(NumericError::NotInDomain);
    }
    let wp = prec + 16;
    // choose N with u^(N+1) * 2 / (N+1) below the tolerance
    let tol = pow2(-((prec + 4) as i64));
    let mut n_terms: usize = 1;
    if !u.is_zero() {
        let mut upow = u.clone();
        loop {
            let bound = Rat::new(2.into(), (n_terms as i64 + 1).into()) * &upow;
            if bound <= tol || n_terms > 4 * (prec as usize + 8) {
                break;
            }
            upow = upow * &u;
            n_terms += 1;
        }
    }
    // Horner: log(1+x) ~ x (1 - x (1/2 - x (1/3 - ...)))
    let mut acc = CBox::from_rat(Rat::new(1.into(), (n_terms as i64).into()));
    for k in (1..n_terms).rev() {
        acc = CBox::from_rat(Rat::new(1.into(), (k as i64).into())).sub(&x.mul(&acc, wp), wp);
    }
    let mut out = x.mul(&acc, wp);
    // remainder bound: u^(N+1) / ((N+1)(1-u)) <= 2 u^(N+1) / (N+1)
    let mut upow = u.clone();
    for _ in 0..n_terms {
        upow = upow * &u;
        upow = round_up(&upow, wp);
    }
    let rem = upow * Rat::new(2.into(), (n_terms as i64 + 1).into());
    out.rad += rem;
    Ok(out.rounded(prec))
}

/// Evaluate a multivariate polynomial at a vector of disks (one per ring
/// variable), returning a disk containing every possible value.
pub fn eval_poly_box(p: &Polynomial, at: &[CBox], prec: u32) -> CBox {
    assert_eq!(at.len(), p.ring().nvars(), "evaluation point arity mismatch");
    let wp = prec + 16;
    // precompute powers of each coordinate up to its maximum exponent
    let nv = at.len();
    let mut max_exp = alloc::vec![0u16; nv];
    for (m, _) in p.terms() {
        for i in 0..nv {
            max_exp[i] = max_exp[i].max(m.exp(i));
        }
    }
    let mut powers: Vec<Vec<CBox>> = Vec::with_capacity(nv);
    for i in 0..nv {
        let mut col = Vec::with_capacity(max_exp[i] as usize + 1);
        col.push(CBox::one());
        for e in 1..=max_exp[i] as usize {
            let next = col[e - 1].mul(&at[i], wp);
            col.push(next);
        }
        powers.push(col);
    }
    let mut acc = CBox::zero();
    for (m, c) in p.terms() {
        let mut term = CBox::from_rat(c.clone());
        for i in 0..nv {
            let e = m.exp(i) as usize;
            if e > 0 {
                term = term.mul(&powers[i][e], wp);
            }
        }
        acc = acc.add(&term, wp);
    }
    acc.rounded(prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Ring;
    use crate::rat::{rat_frac, rat_int};

    fn bx(re: i64, im: i64, den: i64) -> CBox {
        CBox::from_parts(rat_frac(re, den), rat_frac(im, den))
    }

    #[test]
    fn arithmetic_encloses_exact_values() {
        let a = bx(1, 2, 1);
        let b = bx(3, -1, 1);
        let p = a.mul(&b, 64);
        // (1+2i)(3-i) = 5 + 5i
        assert!(p.contains_point(&rat_int(5), &rat_int(5)));
        assert!(p.rad() <= &rat_frac(1, 1 << 50));
        let q = a.add(&b, 64).sub(&b, 64);
        assert!(q.contains_point(&rat_int(1), &rat_int(2)));
    }

    #[test]
    fn recip_is_exact_disk_inversion() {
        let a = CBox::with_radius(rat_int(2), rat_int(0), rat_frac(1, 4));
        let r = a.recip(96).unwrap();
        // 1/[1.75, 2.25] = [4/9, 4/7]
        assert!(r.contains_point(&rat_frac(4, 9), &rat_int(0)));
        assert!(r.contains_point(&rat_frac(4, 7), &rat_int(0)));
        assert!(r.contains_point(&rat_frac(1, 2), &rat_int(0)));
        // a disk containing zero cannot be inverted
        let z = CBox::with_radius(rat_frac(1, 8), rat_int(0), rat_int(1));
        assert_eq!(z.recip(64), Err(NumericError::UncertainZero));
    }

    #[test]
    fn division_and_powers_round_trip() {
        let a = bx(7, 3, 5);
        let b = bx(-2, 1, 3);
        let q = a.div(&b, 128).unwrap();
        let back = q.mul(&b, 128);
        assert!(back.contains_point(a.re(), a.im()));
        let p3 = a.powi(3, 128).unwrap();
        let m3 = a.mul(&a, 128).mul(&a, 128);
        assert!(p3.contains_point(m3.re(), m3.im()) || m3.contains_point(p3.re(), p3.im()));
        let pm2 = a.powi(-2, 128).unwrap();
        let unit = pm2.mul(&a.mul(&a, 160), 128);
        assert!(unit.contains_point(&rat_int(1), &rat_int(0)));
    }

    #[test]
    fn sqrt_principal_branch_and_cut_detection() {
        // sqrt(2i) = 1 + i
        let z = bx(0, 2, 1);
        let s = z.sqrt(100).unwrap();
        assert!(s.contains_point(&rat_int(1), &rat_int(1)));
        // sqrt of a positive real interval
        let four = CBox::with_radius(rat_int(4), rat_int(0), rat_frac(1, 100));
        let s = four.sqrt(100).unwrap();
        assert!(s.contains_point(&rat_int(2), &rat_int(0)));
        assert!(s.rad() < &rat_frac(1, 100));
        // lower half plane gets the negative imaginary branch
        let z = bx(0, -2, 1);
        let s = z.sqrt(100).unwrap();
        assert!(s.contains_point(&rat_int(1), &rat_int(-1)));
        // a disk straddling the negative real axis is rejected
        let bad = CBox::with_radius(rat_int(-4), rat_int(0), rat_frac(1, 10));
        assert_eq!(bad.sqrt(64), Err(NumericError::BranchCut));
    }

    #[test]
    fn sqrt_squares_back() {
        let z = bx(3, 4, 7);
        let s = z.sqrt(128).unwrap();
        let sq = s.mul(&s, 128);
        assert!(sq.contains_point(z.re(), z.im()));
    }

    #[test]
    fn cis_matches_f64_and_is_tight() {
        let theta = rat_frac(1, 3);
        let c = cis_bounds(&theta, 128).unwrap();
        let (re, im) = c.to_f64();
        assert!((re - (1.0f64 / 3.0).cos()).abs() < 1e-14);
        assert!((im - (1.0f64 / 3.0).sin()).abs() < 1e-14);
        assert!(c.rad() <= &pow2(-100));
        // |cis| = 1: the box must contain a point of modulus one
        let (lo, hi) = c.abs_bounds(128);
        assert!(lo <= rat_int(1) && rat_int(1) <= hi);
        assert!(cis_bounds(&rat_int(2), 64).is_err());
    }

    #[test]
    fn log1p_matches_f64() {
        let x = CBox::from_parts(rat_frac(1, 4), rat_frac(-1, 8));
        let l = log1p_box(&x, 128).unwrap();
        let (re, im) = l.to_f64();
        let expect = num_complex::Complex64::new(1.25, -0.125).ln();
        assert!((re - expect.re).abs() < 1e-14);
        assert!((im - expect.im).abs() < 1e-14);
        assert!(l.rad() <= &pow2(-100));
        let too_big = CBox::from_rat(rat_frac(3, 4));
        assert_eq!(log1p_box(&too_big, 64), Err(NumericError::NotInDomain));
    }

    #[test]
    fn poly_evaluation_on_boxes_contains_exact_value() {
        let ring = Ring::new(&["x", "y"]).unwrap();
        let p = crate::poly::parse_polynomial("x^2*y - 3*x + 7/2", &ring).unwrap();
        let at = [bx(1, 1, 2), bx(-3, 0, 4)];
        let v = eval_poly_box(&p, &at, 128);
        // exact: x = (1+i)/2, y = -3/4: x^2 = i/2, x^2 y = -3i/8
        // p = -3i/8 - 3(1+i)/2 + 7/2 = 2 - 15i/8
        assert!(v.contains_point(&rat_int(2), &rat_frac(-15, 8)));
        assert!(v.rad() <= &pow2(-90));
    }
}
