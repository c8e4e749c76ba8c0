//! Exact rational scalars and a few numeric helpers shared across the crate.
//!
//! Everything downstream (polynomial coefficients, box centers and radii,
//! certified root enclosures) is built on [`Rat`], an arbitrary-precision
//! rational.  The helpers here are the only places where rationals are
//! converted to floating point or deliberately rounded, so the rounding
//! conventions are centralized: `round_*` functions round to a dyadic grid
//! `m / 2^prec` and say in their name which way they err.

use alloc::string::String;
use alloc::string::ToString;
use core::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number, the coefficient type of the crate.
pub type Rat = BigRational;

/// `1` as a [`Rat`].
pub fn rat_one() -> Rat {
    Rat::one()
}

/// `0` as a [`Rat`].
pub fn rat_zero() -> Rat {
    Rat::zero()
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `p / q`; panics if `q == 0`.
pub fn rat_frac(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// `2^e` as a rational, for any sign of `e`.
pub fn pow2(e: i64) -> Rat {
    let one = BigInt::one();
    if e >= 0 {
        Rat::from_integer(one << (e as usize))
    } else {
        Rat::new(one.clone(), one << ((-e) as usize))
    }
}

/// Round `x` towards minus infinity onto the grid `m / 2^prec`.
pub fn round_down(x: &Rat, prec: u32) -> Rat {
    let scaled = x * pow2(prec as i64);
    Rat::new(scaled.floor().to_integer(), BigInt::one() << (prec as usize))
}

/// Round `x` towards plus infinity onto the grid `m / 2^prec`.
pub fn round_up(x: &Rat, prec: u32) -> Rat {
    let scaled = x * pow2(prec as i64);
    Rat::new(scaled.ceil().to_integer(), BigInt::one() << (prec as usize))
}

/// Round `x` to the nearest grid point `m / 2^prec` (half away from zero).
pub fn round_nearest(x: &Rat, prec: u32) -> Rat {
    let scaled = x * pow2(prec as i64);
    Rat::new(scaled.round().to_integer(), BigInt::one() << (prec as usize))
}

/// Number of bits of an integer (`0` for zero).
pub fn bigint_bits(n: &BigInt) -> u64 {
    n.magnitude().bits()
}

/// Lossless-ish conversion to `f64` that stays finite-aware for huge or tiny
/// rationals: the value is split as `m * 2^e` with `m` in a 64-bit window
/// before conversion, so overflow produces `±inf` and underflow `0.0` instead
/// of `NaN` noise.
pub fn rat_to_f64(x: &Rat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let nb = bigint_bits(x.numer()) as i64;
    let db = bigint_bits(x.denom()) as i64;
    // Shift so the quotient carries about 80 significant bits.
    let shift = 80 - (nb - db);
    let (num, den) = if shift >= 0 {
        (x.numer() << (shift as usize), x.denom().clone())
    } else {
        (x.numer().clone(), x.denom() << ((-shift) as usize))
    };
    let q = num.div_floor(&den);
    let mant = q.to_f64().unwrap_or(if q.is_negative() { f64::MIN } else { f64::MAX });
    libm::ldexp(mant, (-shift) as i32)
}

/// Natural logarithm of `|x|` for a nonzero rational, robust against huge
/// numerators/denominators (splits off the power of two first).
pub fn rat_ln_abs(x: &Rat) -> f64 {
    debug_assert!(!x.is_zero());
    let nb = bigint_bits(x.numer()) as i64;
    let db = bigint_bits(x.denom()) as i64;
    let e = nb - db;
    // |x| = m * 2^e with m in [2^-1, 2^1] roughly; ln m is safe in f64.
    let m = rat_to_f64(&(x.abs() * pow2(-e)));
    libm::log(m) + (e as f64) * core::f64::consts::LN_2
}

/// The simplest rational (smallest denominator, then smallest numerator) in
/// the closed interval `[lo, hi]`, via the Stern-Brocot walk.  Used to
/// recognize exact rational roots from tight isolating intervals.
pub fn simplest_in_interval(lo: &Rat, hi: &Rat) -> Rat {
    debug_assert!(lo <= hi);
    if lo <= &rat_zero() && &rat_zero() <= hi {
        return rat_zero();
    }
    if hi < &rat_zero() {
        return -simplest_in_interval(&-hi.clone(), &-lo.clone());
    }
    // Now 0 < lo <= hi.  Walk the continued-fraction expansion: either an
    // integer lies in the interval (then the smallest such is simplest), or
    // both endpoints share an integer part and we recurse on the inverted
    // fractional parts.  Terminates because the endpoints are rational.
    fn simplest_pos(lo: &Rat, hi: &Rat) -> Rat {
        let c = lo.ceil();
        if &c <= hi {
            return c;
        }
        let f = lo.floor();
        let inner = simplest_pos(&(hi - &f).recip(), &(lo - &f).recip());
        f + inner.recip()
    }
    simplest_pos(lo, hi)
}

/// Integer power with negative exponents allowed (`x` must be nonzero then).
pub fn rat_powi(x: &Rat, e: i64) -> Rat {
    if e == 0 {
        return rat_one();
    }
    let mut base = if e < 0 { x.recip() } else { x.clone() };
    let mut n = e.unsigned_abs();
    let mut acc = rat_one();
    while n > 0 {
        if n & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        n >>= 1;
    }
    acc
}

/// Compare two rationals by `(real, imag)` lexicographic convention helpers.
pub fn cmp_rat(a: &Rat, b: &Rat) -> Ordering {
    a.cmp(b)
}

/// Render a rational as `p` or `p/q` (canonical lowest terms).
pub fn rat_to_string(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        let mut s = x.numer().to_string();
        s.push('/');
        s.push_str(&x.denom().to_string());
        s
    }
}

/// Sign of a rational as -1, 0, or 1.
pub fn rat_sign(x: &Rat) -> i32 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_rounding_brackets() {
        let x = rat_frac(1, 3);
        let lo = round_down(&x, 16);
        let hi = round_up(&x, 16);
        assert!(lo <= x && x <= hi);
        assert!(&hi - &lo <= pow2(-16));
    }

    #[test]
    fn f64_conversion_handles_extremes() {
        let huge = rat_powi(&rat_int(10), 400);
        assert!(rat_to_f64(&huge).is_infinite());
        let tiny = rat_powi(&rat_int(10), -400);
        assert_eq!(rat_to_f64(&tiny), 0.0);
        let x = rat_frac(-355, 113);
        assert!((rat_to_f64(&x) + 3.14159292).abs() < 1e-7);
    }

    #[test]
    fn ln_abs_of_extreme_rationals() {
        let huge = rat_powi(&rat_int(2), 10_000);
        let l = rat_ln_abs(&huge);
        assert!((l - 10_000.0 * core::f64::consts::LN_2).abs() < 1e-6 * l);
        let x = rat_frac(-1, 8);
        assert!((rat_ln_abs(&x) + 3.0 * core::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn simplest_rational_recovers_roots() {
        // 1/3 is the simplest rational in [0.333, 0.334]
        let lo = rat_frac(333, 1000);
        let hi = rat_frac(334, 1000);
        assert_eq!(simplest_in_interval(&lo, &hi), rat_frac(1, 3));
        // negative intervals mirror
        assert_eq!(
            simplest_in_interval(&rat_frac(-334, 1000), &rat_frac(-333, 1000)),
            rat_frac(-1, 3)
        );
        // zero wins when the interval straddles it
        assert_eq!(
            simplest_in_interval(&rat_frac(-1, 7), &rat_frac(1, 9)),
            rat_zero()
        );
        assert_eq!(
            simplest_in_interval(&rat_frac(5, 2), &rat_frac(5, 2)),
            rat_frac(5, 2)
        );
    }
}
