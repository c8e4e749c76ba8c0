//! Certified isolation of the roots of a univariate rational polynomial.
//!
//! Pipeline: take the squarefree part (so all roots are simple), approximate
//! all roots at once in `f64` with the Aberth–Ehrlich iteration, refine each
//! approximation by exact rational Newton steps (with dyadic rounding to keep
//! bit sizes bounded), then attach a residual-based certificate: a disk of
//! radius `n |p(z)/p'(z)|` around an approximation always contains a root,
//! and pairwise disjoint disks for all `n` approximations isolate one simple
//! root each.  Real roots are recognized by Sturm counts and snapped onto the
//! real axis; rational roots are recovered exactly and stored with radius
//! zero.  Everything is deterministic.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::numeric::cbox::CBox;
use crate::numeric::real::sqrt_bounds;
use crate::numeric::NumericError;
use crate::poly::Polynomial;
use crate::rat::{pow2, rat_to_f64, round_nearest, simplest_in_interval, Rat};

/// Dense univariate polynomial with exact rational coefficients, ascending
/// by degree, with no trailing zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    /// Build from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    /// Extract a univariate polynomial from a multivariate one that involves
    /// only the variable `var` (constants included).  `None` if any other
    /// variable appears.
    pub fn from_multivariate(p: &Polynomial, var: usize) -> Option<UniPoly> {
        let nv = p.ring().nvars();
        let mut coeffs = vec![Rat::zero(); p.degree_in(var) as usize + 1];
        for (m, c) in p.terms() {
            for i in 0..nv {
                if i != var && m.exp(i) != 0 {
                    return None;
                }
            }
            coeffs[m.exp(var) as usize] = c.clone();
        }
        Some(UniPoly::new(coeffs))
    }

    /// Whether this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Coefficient of `t^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    /// Ascending coefficient slice.
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Exact evaluation at a rational point (Horner).
    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Exact evaluation at a complex rational point.
    pub fn eval_complex(&self, re: &Rat, im: &Rat) -> (Rat, Rat) {
        let mut are = Rat::zero();
        let mut aim = Rat::zero();
        for c in self.coeffs.iter().rev() {
            let nre = &are * re - &aim * im + c;
            let nim = &are * im + &aim * re;
            are = nre;
            aim = nim;
        }
        (are, aim)
    }

    /// Evaluation on a complex disk.
    pub fn eval_box(&self, x: &CBox, prec: u32) -> CBox {
        let mut acc = CBox::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x, prec).add(&CBox::from_rat(c.clone()), prec);
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Rat::from_integer(BigInt::from(k as i64)))
            .collect();
        UniPoly::new(coeffs)
    }

    /// Monic rescaling; panics on the zero polynomial.
    pub fn monic(&self) -> UniPoly {
        let lead = self.coeffs.last().expect("monic of zero polynomial");
        UniPoly::new(self.coeffs.iter().map(|c| c / lead).collect())
    }

    /// Exact Euclidean remainder `self mod d` over the rationals.
    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        assert!(!d.is_zero(), "remainder by zero polynomial");
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        let dl = d.coeffs.last().unwrap();
        while r.len() > dd && r.len() >= 1 {
            let k = r.len() - 1;
            if k < dd {
                break;
            }
            let q = r[k].clone() / dl;
            if !q.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let idx = k - dd + j;
                    let sub = dc * &q;
                    r[idx] -= sub;
                }
            }
            r.pop();
        }
        UniPoly::new(r)
    }

    /// Exact quotient when division is exact; `None` otherwise.
    pub fn div_exact(&self, d: &UniPoly) -> Option<UniPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(UniPoly::zero());
        }
        if self.degree() < d.degree() {
            return None;
        }
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        let dl = d.coeffs.last().unwrap();
        let mut q = vec![Rat::zero(); self.degree() - dd + 1];
        for k in (dd..r.len()).rev() {
            let c = r[k].clone() / dl;
            q[k - dd] = c.clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let sub = dc * &c;
                    r[k - dd + j] -= sub;
                }
            }
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(UniPoly::new(q))
        } else {
            None
        }
    }

    /// Monic greatest common divisor over the rationals.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = normalize_for_chain(r);
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// The squarefree part `self / gcd(self, self')`, monic.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.degree() <= 1 {
            return if self.is_zero() { self.clone() } else { self.monic() };
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.monic();
        }
        self.div_exact(&g)
            .expect("gcd divides the polynomial")
            .monic()
    }
}

/// Rescale a remainder to keep Euclidean chains from exploding: divide by the
/// positive rational content (largest coefficient magnitude), preserving sign.
fn normalize_for_chain(p: UniPoly) -> UniPoly {
    if p.is_zero() {
        return p;
    }
    let max = p
        .coeffs
        .iter()
        .map(|c| c.abs())
        .max()
        .expect("nonzero polynomial has coefficients");
    UniPoly::new(p.coeffs.iter().map(|c| c / &max).collect())
}

/// A certified root of (the squarefree part of) a polynomial.
#[derive(Debug, Clone)]
pub struct RootBox {
    /// Isolating disk; radius zero when the root was recognized exactly.
    pub bx: CBox,
    /// Exact value when the root is rational.
    pub rational: Option<Rat>,
    /// Whether the root is certified real (then the center lies on the axis).
    pub real: bool,
}

/// Sturm chain of a squarefree polynomial (signs preserved up to positive
/// factors, which is all sign-variation counting needs).
fn sturm_chain(sf: &UniPoly) -> Vec<UniPoly> {
    let mut chain = vec![sf.clone(), sf.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            return chain;
        }
        let r = chain[n - 2].rem(&chain[n - 1]);
        if r.is_zero() {
            return chain;
        }
        let neg = UniPoly::new(r.coeffs.iter().map(|c| -c.clone()).collect());
        chain.push(normalize_for_chain(neg));
    }
}

fn sign_variations_at(chain: &[UniPoly], x: &Rat) -> usize {
    let mut last = 0i32;
    let mut count = 0usize;
    for p in chain {
        let v = p.eval(x);
        let s = if v.is_zero() {
            0
        } else if v.is_negative() {
            -1
        } else {
            1
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of real roots of the chain's squarefree polynomial in `(lo, hi]`.
fn sturm_count(chain: &[UniPoly], lo: &Rat, hi: &Rat) -> usize {
    sign_variations_at(chain, lo).saturating_sub(sign_variations_at(chain, hi))
}

/// All-roots `f64` approximation (Aberth–Ehrlich).  `offset` rotates the
/// initial configuration to break symmetries; the iteration itself is
/// deterministic.
fn aberth_f64(coeffs: &[f64], offset: f64) -> Option<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    if lead == 0.0 || !lead.is_finite() {
        return None;
    }
    let mut radius: f64 = 0.0;
    for c in &coeffs[..n] {
        if !c.is_finite() {
            return None;
        }
        radius = radius.max((c / lead).abs());
    }
    let radius = 1.0 + radius;
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| {
            let angle = 2.0 * core::f64::consts::PI * (j as f64) / (n as f64) + offset;
            // slightly spiral the moduli so no two seeds coincide
            let r = radius * (0.5 + 0.5 * (j as f64 + 1.0) / (n as f64));
            Complex64::new(r * angle.cos(), r * angle.sin())
        })
        .collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    };
    for _ in 0..600 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let w = if dp.norm() > 0.0 { p / dp } else { Complex64::new(1e-3, 1e-3) };
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() < 1e-300 {
                        return None;
                    }
                    s += d.inv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * s;
            let step = if denom.norm() > 1e-300 { w / denom } else { w };
            z[i] -= step;
            if !z[i].re.is_finite() || !z[i].im.is_finite() {
                return None;
            }
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step < 1e-14 {
            return Some(z);
        }
    }
    Some(z) // hand over whatever we have; exact refinement will judge it
}

/// Exact complex-rational Newton refinement with dyadic rounding.  Returns
/// the refined point together with the certified radius `n |p(z)/p'(z)|`
/// (an upper bound), or `None` when the iteration fails to contract.
fn refine_newton(
    sf: &UniPoly,
    dsf: &UniPoly,
    start: (Rat, Rat),
    wp: u32,
) -> Option<(Rat, Rat, Rat)> {
    let n = sf.degree();
    let (mut re, mut im) = start;
    let step_tol = pow2(-((wp + 8) as i64));
    let step_tol2 = &step_tol * &step_tol;
    let mut converged = false;
    for _ in 0..80 {
        let (pre, pim) = sf.eval_complex(&re, &im);
        if pre.is_zero() && pim.is_zero() {
            converged = true;
            break;
        }
        let (dre, dim) = dsf.eval_complex(&re, &im);
        let den = &dre * &dre + &dim * &dim;
        if den.is_zero() {
            return None;
        }
        // step = p / p'
        let sre = (&pre * &dre + &pim * &dim) / &den;
        let sim = (&pim * &dre - &pre * &dim) / &den;
        re = round_nearest(&(&re - &sre), wp + 32);
        im = round_nearest(&(&im - &sim), wp + 32);
        if &sre * &sre + &sim * &sim <= step_tol2 {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    // certificate: a disk of radius n |p/p'| around z contains a root
    let (pre, pim) = sf.eval_complex(&re, &im);
    let (dre, dim) = dsf.eval_complex(&re, &im);
    let pnorm = &pre * &pre + &pim * &pim;
    let dnorm = &dre * &dre + &dim * &dim;
    if dnorm.is_zero() {
        return None;
    }
    let ratio2 = pnorm / dnorm * Rat::from_integer(BigInt::from((n * n) as i64));
    let (_, rad) = sqrt_bounds(&ratio2, wp + 8)?;
    Some((re, im, rad))
}

/// Isolate all distinct roots of `p` with certified pairwise disjoint disks.
///
/// The returned roots are those of the squarefree part (each exactly once),
/// sorted by center (real part, then imaginary part).  `prec` controls the
/// certified radius: every non-exact disk has radius at most
/// `2^-prec * max(1, |center|)`.
pub fn isolate_roots(p: &UniPoly, prec: u32) -> Result<Vec<RootBox>, NumericError> {
    if p.is_zero() {
        return Err(NumericError::NotInDomain);
    }
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    let mut sf = p.squarefree_part();
    let mut out: Vec<RootBox> = Vec::new();
    // factor out roots at the origin exactly
    let zeros = sf.coeffs.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        sf = UniPoly::new(sf.coeffs[zeros..].to_vec());
        out.push(RootBox {
            bx: CBox::zero(),
            rational: Some(Rat::zero()),
            real: true,
        });
    }
    if sf.degree() == 0 {
        out.sort_by(root_order);
        return Ok(out);
    }
    if sf.degree() == 1 {
        // linear: the root is exactly rational
        let r = -sf.coeff(0) / sf.coeff(1);
        out.push(RootBox {
            bx: CBox::from_rat(r.clone()),
            rational: Some(r),
            real: true,
        });
        out.sort_by(root_order);
        return Ok(out);
    }
    let chain = sturm_chain(&sf);
    let scale: Rat = sf
        .coeffs
        .iter()
        .map(|c| c.abs())
        .max()
        .expect("nonzero");
    let fcoeffs: Vec<f64> = sf.coeffs.iter().map(|c| rat_to_f64(&(c / &scale))).collect();
    let mut wp = prec.max(64) + 16;
    let offsets = [0.39f64, 1.17, 2.71];
    let mut attempt = 0usize;
    loop {
        let offset = offsets[attempt % offsets.len()];
        if let Some(seeds) = aberth_f64(&fcoeffs, offset) {
            if let Some(mut boxes) = certify_attempt(&sf, &chain, &seeds, wp, prec) {
                out.append(&mut boxes);
                out.sort_by(root_order);
                return Ok(out);
            }
        }
        attempt += 1;
        if attempt % offsets.len() == 0 {
            wp = wp.saturating_mul(2);
        }
        if wp > 4096 || attempt > 12 {
            return Err(NumericError::PrecisionExceeded);
        }
    }
}

fn root_order(a: &RootBox, b: &RootBox) -> core::cmp::Ordering {
    a.bx.re()
        .cmp(b.bx.re())
        .then_with(|| a.bx.im().cmp(b.bx.im()))
}

/// One full certification attempt from a set of float seeds.  `None` means
/// "retry with different seeds or more precision".
fn certify_attempt(
    sf: &UniPoly,
    chain: &[UniPoly],
    seeds: &[Complex64],
    wp: u32,
    prec: u32,
) -> Option<Vec<RootBox>> {
    let dsf = sf.derivative();
    let mut refined: Vec<(Rat, Rat, Rat)> = Vec::with_capacity(seeds.len());
    for s in seeds {
        let re = Rat::from_float(s.re)?;
        let im = Rat::from_float(s.im)?;
        refined.push(refine_newton(sf, &dsf, (re, im), wp)?);
    }
    // radii must meet the requested precision
    for (re, im, rad) in &refined {
        let bound = pow2(-(prec as i64))
            * (Rat::one() + re.abs() + im.abs()).max(Rat::one());
        if rad > &bound {
            return None;
        }
    }
    // pairwise disjointness certifies one simple root per disk
    for i in 0..refined.len() {
        for j in (i + 1)..refined.len() {
            let (ri, ii, di) = &refined[i];
            let (rj, ij, dj) = &refined[j];
            let dr = ri - rj;
            let dim = ii - ij;
            let sum = di + dj;
            if &dr * &dr + &dim * &dim <= &sum * &sum {
                return None;
            }
        }
    }
    // realness detection via Sturm counts
    let mut boxes: Vec<RootBox> = Vec::with_capacity(refined.len());
    for (re, im, rad) in &refined {
        if im.abs() <= *rad {
            // candidate real root: count real roots in [re - rad, re + rad]
            let lo = re - rad;
            let hi = re + rad;
            if sf.eval(&lo).is_zero() || sf.eval(&hi).is_zero() {
                // an endpoint is itself a root: rare; resolve via recognition
                let r = if sf.eval(&lo).is_zero() { lo } else { hi };
                boxes.push(RootBox {
                    bx: CBox::from_rat(r.clone()),
                    rational: Some(r),
                    real: true,
                });
                continue;
            }
            match sturm_count(chain, &lo, &hi) {
                1 => {
                    // exactly one real root in the window; snap to the axis
                    let r = simplest_in_interval(&lo, &hi);
                    if sf.eval(&r).is_zero() {
                        boxes.push(RootBox {
                            bx: CBox::from_rat(r.clone()),
                            rational: Some(r),
                            real: true,
                        });
                    } else {
                        boxes.push(RootBox {
                            bx: CBox::with_radius(re.clone(), Rat::zero(), rad.clone()),
                            rational: None,
                            real: true,
                        });
                    }
                }
                0 => {
                    // the disk's root is certifiably non-real
                    boxes.push(RootBox {
                        bx: CBox::with_radius(re.clone(), im.clone(), rad.clone()),
                        rational: None,
                        real: false,
                    });
                }
                _ => return None, // ambiguous at this precision
            }
        } else {
            boxes.push(RootBox {
                bx: CBox::with_radius(re.clone(), im.clone(), rad.clone()),
                rational: None,
                real: false,
            });
        }
    }
    // snap conjugate pairs to exact symmetry: for real-coefficient input the
    // certificate is conjugation-invariant, so the mirrored box is also valid
    let snapshot = boxes.clone();
    for b in boxes.iter_mut() {
        if !b.real && b.bx.im().is_negative() {
            // find the box whose conjugate this approximates
            let target = snapshot.iter().find(|o| {
                !o.real && o.bx.im().is_positive() && o.bx.conj().disjoint_from(&b.bx) == false
            });
            if let Some(partner) = target {
                b.bx = partner.bx.conj();
            }
        }
    }
    // realification may have moved centers; re-verify pairwise disjointness
    for i in 0..boxes.len() {
        for j in (i + 1)..boxes.len() {
            if !boxes[i].bx.disjoint_from(&boxes[j].bx) {
                return None;
            }
        }
    }
    Some(boxes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat_frac, rat_int};

    fn upoly(cs: &[(i64, i64)]) -> UniPoly {
        UniPoly::new(cs.iter().map(|&(p, q)| rat_frac(p, q)).collect())
    }

    #[test]
    fn arithmetic_and_division() {
        // (t - 1)(t - 2) = t^2 - 3t + 2
        let p = upoly(&[(2, 1), (-3, 1), (1, 1)]);
        assert_eq!(p.eval(&rat_int(1)), rat_int(0));
        assert_eq!(p.eval(&rat_int(3)), rat_int(2));
        let d = upoly(&[(-1, 1), (1, 1)]);
        let q = p.div_exact(&d).unwrap();
        assert_eq!(q, upoly(&[(-2, 1), (1, 1)]));
        assert!(p.div_exact(&upoly(&[(1, 1), (1, 1)])).is_none());
        assert_eq!(p.rem(&d), UniPoly::zero());
    }

    #[test]
    fn gcd_and_squarefree() {
        // (t-1)^2 (t+2)
        let p = upoly(&[(2, 1), (-3, 1), (0, 1), (1, 1)]);
        let sf = p.squarefree_part();
        // (t-1)(t+2) = t^2 + t - 2
        assert_eq!(sf, upoly(&[(-2, 1), (1, 1), (1, 1)]));
        let g = p.gcd(&p.derivative());
        assert_eq!(g, upoly(&[(-1, 1), (1, 1)]));
    }

    #[test]
    fn sturm_counts_real_roots() {
        // t^3 - 2t: roots -sqrt2, 0, sqrt2
        let p = upoly(&[(0, 1), (-2, 1), (0, 1), (1, 1)]);
        let chain = sturm_chain(&p);
        assert_eq!(sturm_count(&chain, &rat_int(-3), &rat_int(3)), 3);
        assert_eq!(sturm_count(&chain, &rat_int(1), &rat_int(2)), 1);
        assert_eq!(sturm_count(&chain, &rat_frac(1, 2), &rat_int(1)), 0);
    }

    #[test]
    fn isolates_rational_and_irrational_roots() {
        // (t - 1/2)(t^2 - 2) = t^3 - t^2/2 - 2t + 1: roots 1/2, +-sqrt2
        let p = upoly(&[(1, 1), (-2, 1), (-1, 2), (1, 1)]);
        let roots = isolate_roots(&p, 100).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(roots.iter().all(|r| r.real));
        let rational: Vec<_> = roots.iter().filter_map(|r| r.rational.clone()).collect();
        assert_eq!(rational, vec![rat_frac(1, 2)]);
        // the irrational roots enclose +-sqrt2
        let two = rat_int(2);
        let (lo, hi) = sqrt_bounds(&two, 200).unwrap();
        let plus = roots.iter().find(|r| r.bx.re() > &rat_int(1)).unwrap();
        assert!(plus.bx.re() - plus.bx.rad() <= hi && lo <= plus.bx.re() + plus.bx.rad());
        let minus = roots.iter().find(|r| r.bx.re() < &rat_int(-1)).unwrap();
        assert!(minus.bx.re().abs() - minus.bx.rad() <= hi);
    }

    #[test]
    fn isolates_complex_conjugate_pairs_exactly() {
        // t^2 + t + 1: roots (-1 +- i sqrt3)/2
        let p = upoly(&[(1, 1), (1, 1), (1, 1)]);
        let roots = isolate_roots(&p, 120).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(|r| !r.real && r.rational.is_none()));
        // exact conjugate symmetry after snapping
        assert_eq!(roots[0].bx.re(), roots[1].bx.re());
        assert_eq!(&(roots[0].bx.im() + roots[1].bx.im()), &rat_int(0));
        assert!((roots[0].bx.re() - rat_frac(-1, 2)).abs() <= *roots[0].bx.rad());
    }

    #[test]
    fn multiple_roots_are_reported_once() {
        // (t-3)^4
        let p = upoly(&[(81, 1), (-108, 1), (54, 1), (-12, 1), (1, 1)]);
        let roots = isolate_roots(&p, 80).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].rational, Some(rat_int(3)));
    }

    #[test]
    fn root_at_origin_and_high_degree() {
        // t^2 (t^4 - 1): distinct roots 0, 1, -1, i, -i
        let p = upoly(&[(0, 1), (0, 1), (-1, 1), (0, 1), (0, 1), (0, 1), (1, 1)]);
        let roots = isolate_roots(&p, 100).unwrap();
        assert_eq!(roots.len(), 5);
        let rationals: Vec<_> = roots.iter().filter_map(|r| r.rational.clone()).collect();
        assert_eq!(rationals.len(), 3); // 0, 1, -1
        let complex_count = roots.iter().filter(|r| !r.real).count();
        assert_eq!(complex_count, 2);
        // certified radii are tiny and disks pairwise disjoint
        for i in 0..roots.len() {
            assert!(roots[i].bx.rad() <= &pow2(-100));
            for j in (i + 1)..roots.len() {
                assert!(roots[i].bx.disjoint_from(&roots[j].bx) || roots[i].bx.is_exact());
            }
        }
    }

    #[test]
    fn wilkinson_style_clustered_roots() {
        // (t-1)(t-2)...(t-8), expanded; classic ill-conditioned example
        let mut p = UniPoly::new(vec![rat_int(1)]);
        for k in 1..=8i64 {
            let lin = UniPoly::new(vec![rat_int(-k), rat_int(1)]);
            let mut next = vec![Rat::zero(); p.degree() + 2];
            for (i, c) in p.coeffs().iter().enumerate() {
                for (j, d) in lin.coeffs().iter().enumerate() {
                    let add = c * d;
                    next[i + j] += add;
                }
            }
            p = UniPoly::new(next);
        }
        let roots = isolate_roots(&p, 90).unwrap();
        assert_eq!(roots.len(), 8);
        for (i, r) in roots.iter().enumerate() {
            assert_eq!(r.rational, Some(rat_int(i as i64 + 1)));
        }
    }
}
