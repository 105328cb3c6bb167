use num_bigint::BigUint;

/// Top bits of `x` as `(mantissa, binary exponent)`, `x ~ m * 2^e`.
fn split(x: &BigUint) -> (f64, i64) {
    let bits = x.bits() as i64;
    let shift = (bits - 120).max(0);
    let top: BigUint = x >> shift as usize;
    let digits = top.to_u64_digits();
    let mut m = 0.0f64;
    for d in digits.iter().rev() {
        m = m * 18_446_744_073_709_551_616.0 + *d as f64;
    }
    (m, shift)
}

/// `ln(num / den)` for positive integers of any size, accurate to a few ulps
/// of the result's fractional magnitude.
pub(crate) fn ln_ratio(num: &BigUint, den: &BigUint) -> f64 {
    let (mn, en) = split(num);
    let (md, ed) = split(den);
    (mn / md).ln() + (en - ed) as f64 * std::f64::consts::LN_2
}

/// Ratio of positive integers as `f64` (may overflow to infinity).
pub(crate) fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    let (mn, en) = split(num);
    let (md, ed) = split(den);
    (mn / md) * 2f64.powi((en - ed) as i32)
}

/// Exact decomposition of a positive finite double as `p / 2^e` with `p` odd
/// or `e = 0`.
pub(crate) fn dyadic(x: f64) -> (BigUint, usize) {
    debug_assert!(x > 0.0 && x.is_finite());
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mut m, mut e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    while m % 2 == 0 && e < 0 {
        m /= 2;
        e += 1;
    }
    if e >= 0 {
        (BigUint::from(m) << e as usize, 0)
    } else {
        (BigUint::from(m), (-e) as usize)
    }
}
