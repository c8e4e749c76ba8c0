//! Rational enclosures of the real functions the crate needs: square roots
//! (via integer square roots of scaled values) and pi (via a Machin-style
//! alternating series).  Everything returns exact rational brackets.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rat::{bigint_bits, pow2, Rat};

/// `(lo, hi)` with `lo^2 <= x <= hi^2` and `hi - lo <= 2^-prec`, additionally
/// tightened for small `x` so the bracket stays relatively sharp.  `None`
/// for negative input.
pub fn sqrt_bounds(x: &Rat, prec: u32) -> Option<(Rat, Rat)> {
    if x.is_negative() {
        return None;
    }
    if x.is_zero() {
        return Some((Rat::zero(), Rat::zero()));
    }
    let n = x.numer();
    let d = x.denom();
    // for x << 1 the square root is near 2^((bits n - bits d)/2); push the
    // grid finer so the bracket keeps relative precision
    let deficit = bigint_bits(d).saturating_sub(bigint_bits(n)) / 2;
    let k = prec + deficit as u32 + 2;
    // floor(sqrt(floor(n * 4^k / d))) brackets sqrt(n/d) on the 2^-k grid
    let scaled: BigInt = (n << (2 * k as usize)) / d;
    let s = scaled.sqrt();
    let grid = BigInt::one() << (k as usize);
    let lo = Rat::new(s.clone(), grid.clone());
    let hi = Rat::new(s + BigInt::one(), grid);
    Some((lo, hi))
}

/// `(lo, hi)` enclosing pi with `hi - lo <= 2^-prec`.
pub fn pi_bounds(prec: u32) -> (Rat, Rat) {
    // pi = 16 arctan(1/5) - 4 arctan(1/239); each arctan series alternates,
    // so partial sums bracket the value with error below the next term
    let (a5_lo, a5_hi) = arctan_inv_bounds(5, prec + 6);
    let (a239_lo, a239_hi) = arctan_inv_bounds(239, prec + 6);
    let sixteen = Rat::from_integer(BigInt::from(16));
    let four = Rat::from_integer(BigInt::from(4));
    (
        &sixteen * &a5_lo - &four * &a239_hi,
        &sixteen * &a5_hi - &four * &a239_lo,
    )
}

/// Alternating-series bracket of arctan(1/x) for integer x >= 2.
fn arctan_inv_bounds(x: u64, prec: u32) -> (Rat, Rat) {
    let xi = BigInt::from(x);
    let x2 = &xi * &xi;
    let mut sum = Rat::zero();
    let mut power = xi.clone(); // x^(2k+1)
    let mut k: u64 = 0;
    loop {
        let term = Rat::new(BigInt::one(), &power * BigInt::from(2 * k + 1));
        let signed = if k % 2 == 0 { term.clone() } else { -term.clone() };
        sum += &signed;
        power *= &x2;
        k += 1;
        // next term bounds the truncation error
        let next = Rat::new(BigInt::one(), &power * BigInt::from(2 * k + 1));
        if next <= pow2(-(prec as i64)) {
            // sum and sum +/- next bracket the limit depending on parity
            return if k % 2 == 0 {
                // next term would be added: limit in [sum, sum + next]
                (sum.clone(), sum + next)
            } else {
                (sum.clone() - next, sum)
            };
        }
    }
}
