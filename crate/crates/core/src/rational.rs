//! Helpers around exact rationals: parsing, rendering, and recovering small
//! fractions from floating point results.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parses `"p/q"`, `"p"`, or a finite decimal such as `"0.625"` exactly.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::input("empty rational"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::input(format!("bad numerator in {text:?}")))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::input(format!("bad denominator in {text:?}")))?;
        if den.is_zero() {
            return Err(Error::input(format!("zero denominator in {text:?}")));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if !frac_part.chars().all(|c| c.is_ascii_digit())
            || !int_digits.chars().all(|c| c.is_ascii_digit())
        {
            return Err(Error::input(format!("bad decimal {text:?}")));
        }
        let digits = format!("{}{}", if int_digits.is_empty() { "0" } else { int_digits }, frac_part);
        let mut num: BigInt = digits
            .parse()
            .map_err(|_| Error::input(format!("bad decimal {text:?}")))?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac_part.len());
        return Ok(BigRational::new(num, den));
    }
    let num: BigInt = s
        .parse()
        .map_err(|_| Error::input(format!("bad rational {text:?}")))?;
    Ok(BigRational::from_integer(num))
}

/// Renders as `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact conversion of a finite float.
pub fn from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Best rational approximation with denominator at most `max_den`
/// (continued-fraction convergents and semiconvergents).
pub fn best_rational(x: f64, max_den: u64) -> Option<(i64, u64)> {
    if !x.is_finite() {
        return None;
    }
    let negative = x < 0.0;
    let mut y = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    for _ in 0..64 {
        let a = y.floor();
        if a > 1e15 {
            break;
        }
        let a = a as u64;
        let q2 = a.checked_mul(q1)?.checked_add(q0)?;
        if q2 > max_den {
            let k = (max_den - q0) / q1.max(1);
            let (ps, qs) = (p0 + k * p1, q0 + k * q1);
            let best = if q1 > 0
                && (x.abs() - p1 as f64 / q1 as f64).abs() <= (x.abs() - ps as f64 / qs as f64).abs()
            {
                (p1, q1)
            } else {
                (ps, qs)
            };
            return Some((if negative { -(best.0 as i64) } else { best.0 as i64 }, best.1));
        }
        let p2 = a.checked_mul(p1)?.checked_add(p0)?;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = y - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        y = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    Some((if negative { -(p1 as i64) } else { p1 as i64 }, q1))
}

/// Rounds every component to a fraction with denominator `<= max_den`, provided
/// each lands within `tol` of its float and the fractions keep the float sum
/// when that sum is an integer.
pub fn round_vector(values: &[f64], max_den: u64, tol: f64) -> Option<Vec<BigRational>> {
    let mut out = Vec::with_capacity(values.len());
    for &v in values {
        let (p, q) = best_rational(v, max_den)?;
        if (v - p as f64 / q as f64).abs() > tol {
            return None;
        }
        out.push(ratio(p, q as i64));
    }
    let float_sum: f64 = values.iter().sum();
    let exact_sum: BigRational = out.iter().cloned().sum();
    if (float_sum - float_sum.round()).abs() < tol
        && exact_sum != BigRational::from_integer(BigInt::from(float_sum.round() as i64))
    {
        return None;
    }
    Some(out)
}

pub fn is_nonnegative(r: &BigRational) -> bool {
    !r.is_negative()
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    use num_integer::Integer;
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_three_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("7").unwrap(), ratio(7, 1));
        assert_eq!(parse_rational("0.625").unwrap(), ratio(5, 8));
        assert_eq!(parse_rational("-0.5").unwrap(), ratio(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn formats_integers_without_slash() {
        assert_eq!(format_rational(&ratio(4, 2)), "2");
        assert_eq!(format_rational(&ratio(22, 27)), "22/27");
    }

    #[test]
    fn recovers_small_fractions() {
        assert_eq!(best_rational(0.4, 10_000), Some((2, 5)));
        assert_eq!(best_rational(1.0 / 3.0 + 1e-12, 10_000), Some((1, 3)));
        assert_eq!(best_rational(22.0 / 27.0, 100), Some((22, 27)));
        let v = round_vector(&[0.4, 0.2, 0.2, 0.2], 10_000, 1e-9).unwrap();
        assert_eq!(v, vec![ratio(2, 5), ratio(1, 5), ratio(1, 5), ratio(1, 5)]);
    }
}
