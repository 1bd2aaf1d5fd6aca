//! Exact decimal rendering of rationals. Every printed decimal is derived
//! from an exact rational; rounding happens in integer arithmetic, never in
//! floating point.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::algebra::Rational;

/// Decimal string of `r` rounded to `places` digits, half away from zero.
pub fn decimal_string(r: &Rational, places: usize) -> String {
    let negative = r.is_negative();
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled_num = r.numer().abs() * &scale;
    let den = r.denom().abs();
    let (mut q, rem) = scaled_num.div_rem(&den);
    if BigInt::from(2) * rem >= den {
        q += 1;
    }
    format_scaled(&q, places, negative)
}

/// Decimal string of `sqrt(q)` (for `q >= 0`) rounded to `places` digits,
/// half away from zero; exact via integer square roots.
pub fn sqrt_decimal_string(q: &Rational, places: usize) -> String {
    assert!(!q.is_negative(), "radicand must be nonnegative");
    let scale = BigInt::from(10u32).pow(places as u32);
    // k = floor(sqrt(q * 10^2p)), then round up when (k + 1/2)^2 <= q * 10^2p
    let scaled_num = q.numer() * &scale * &scale;
    let den = q.denom();
    let floor_val = scaled_num.div_floor(den);
    let mut k = floor_val.sqrt();
    // round half up: k+1 is the answer iff (2k+1)^2 <= 4 * q * 10^2p
    let half_step: BigInt = BigInt::from(2) * &k + 1;
    let lhs = half_step.pow(2) * den;
    let rhs = BigInt::from(4) * &scaled_num;
    if lhs <= rhs {
        k += 1;
    }
    format_scaled(&k, places, false)
}

fn format_scaled(q: &BigInt, places: usize, negative: bool) -> String {
    let digits = q.magnitude().to_string();
    let padded = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int_part, frac_part) = padded.split_at(padded.len() - places);
    let sign = if negative && (q.sign() != Sign::NoSign || places > 0) && *q != BigInt::zero() {
        "-"
    } else {
        ""
    };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Parses a plain decimal string like `-41.469` into an exact rational.
pub fn parse_decimal(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits: String = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let num: BigInt = digits.parse().ok()?;
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    Some(Rational::new(BigInt::from(sign) * num, den))
}

/// Exact repeating-decimal expansion, with the periodic digits in
/// parentheses: `2737/66` renders as `41.4(69)`, `1/4` as `0.25`, `5` as
/// `5`. Long division with remainder-cycle detection.
pub fn repeating_decimal(r: &Rational) -> String {
    let negative = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().abs();
    let (int_part, mut rem) = num.div_rem(&den);
    let mut out = String::new();
    if negative && !r.is_zero() {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if rem.is_zero() {
        return out;
    }
    out.push('.');
    let mut digits = String::new();
    let mut seen: std::collections::HashMap<BigInt, usize> = std::collections::HashMap::new();
    loop {
        if rem.is_zero() {
            out.push_str(&digits);
            return out;
        }
        if let Some(&start) = seen.get(&rem) {
            out.push_str(&digits[..start]);
            out.push('(');
            out.push_str(&digits[start..]);
            out.push(')');
            return out;
        }
        seen.insert(rem.clone(), digits.len());
        rem *= 10;
        let (d, next) = rem.div_rem(&den);
        digits.push_str(&d.to_string());
        rem = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, ratio};

    #[test]
    fn rounding_half_away_from_zero() {
        assert_eq!(decimal_string(&ratio(1, 4), 3), "0.250");
        assert_eq!(decimal_string(&ratio(1, 3), 3), "0.333");
        assert_eq!(decimal_string(&ratio(2, 3), 2), "0.67");
        assert_eq!(decimal_string(&ratio(5, 1000), 2), "0.01"); // 0.005 rounds up
        assert_eq!(decimal_string(&ratio(-5, 1000), 2), "-0.01");
        assert_eq!(decimal_string(&int(7), 0), "7");
        assert_eq!(decimal_string(&ratio(-1, 8), 3), "-0.125");
    }

    #[test]
    fn sqrt_decimals() {
        assert_eq!(sqrt_decimal_string(&int(2), 3), "1.414");
        assert_eq!(sqrt_decimal_string(&int(8), 3), "2.828");
        assert_eq!(sqrt_decimal_string(&ratio(8, 3), 3), "1.633");
        assert_eq!(sqrt_decimal_string(&ratio(96, 5), 3), "4.382");
        assert_eq!(sqrt_decimal_string(&ratio(4096, 100), 3), "6.400");
        assert_eq!(sqrt_decimal_string(&int(0), 3), "0.000");
        // exactly representable roots round exactly
        assert_eq!(sqrt_decimal_string(&ratio(1, 4), 2), "0.50");
    }

    #[test]
    fn repeating_decimals() {
        assert_eq!(repeating_decimal(&ratio(2737, 66)), "41.4(69)");
        assert_eq!(repeating_decimal(&ratio(1, 4)), "0.25");
        assert_eq!(repeating_decimal(&ratio(1, 3)), "0.(3)");
        assert_eq!(repeating_decimal(&int(5)), "5");
        assert_eq!(repeating_decimal(&ratio(-1, 6)), "-0.1(6)");
        assert_eq!(repeating_decimal(&ratio(1175, 4)), "293.75");
    }
}
