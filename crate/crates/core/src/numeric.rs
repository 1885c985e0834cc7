//! Floating-point helpers for big integers and report formatting.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// Natural logarithm of a positive big integer, from its top 64 bits.
pub fn ln_big(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "logarithm of zero");
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_u64().expect("at most 64 bits remain");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln(num / den)` for `0 < num <= den`, accurate near 1.
pub fn ln_ratio(num: &BigUint, den: &BigUint) -> f64 {
    assert!(num <= den, "ratio above one");
    let gap = den - num;
    if gap.is_zero() {
        return 0.0;
    }
    if gap.bits() + 4 < den.bits() {
        // num/den = 1 - gap/den with gap/den < 1/16
        let small = (ln_big(&gap) - ln_big(den)).exp();
        (-small).ln_1p()
    } else {
        ln_big(num) - ln_big(den)
    }
}

/// Formats a float with `digits` significant digits, `%g` style.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if exponent < -5 || exponent >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exponent)
    } else {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
