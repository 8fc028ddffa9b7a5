//! Exact rational helpers shared by every module: canonical `p/q` strings,
//! decimal rendering, and rational bisection for real `p`-th roots.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::ParseError;

/// Renders a rational as `p/q`, always with an explicit denominator.
pub fn rational_to_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `p/q`, a bare integer, or a plain decimal such as `0.001` or `1e-9`.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::Rational(s.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(at) => {
            let e: i32 = s[at + 1..].parse().map_err(|_| bad())?;
            (&s[..at], e)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let negative = int_part.starts_with('-');
    let int_digits = int_part.trim_start_matches(['-', '+']);
    let digits = format!("{int_digits}{frac_part}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().map_err(|_| bad())?);
    let shift = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10u32));
    if shift >= 0 {
        value *= Pow::pow(&ten, shift as u32);
    } else {
        value /= Pow::pow(&ten, shift.unsigned_abs());
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

/// `10^k` as a rational.
fn pow10(k: i64) -> BigRational {
    let ten = BigRational::from_integer(BigInt::from(10u32));
    if k >= 0 {
        Pow::pow(&ten, k as u64)
    } else {
        Pow::pow(&ten, k.unsigned_abs()).recip()
    }
}

/// Rounds a nonnegative rational to `digits` significant decimal digits.
///
/// Plain positional notation is used; trailing zeros after the decimal
/// point are dropped.
pub fn to_significant(x: &BigRational, digits: usize) -> String {
    assert!(digits >= 1);
    if x.is_zero() {
        return "0".to_string();
    }
    let sign = if x.is_negative() { "-" } else { "" };
    let x = x.abs();

    let mut exp = x.numer().to_string().len() as i64 - x.denom().to_string().len() as i64;
    while x < pow10(exp) {
        exp -= 1;
    }
    while x >= pow10(exp + 1) {
        exp += 1;
    }

    let round = |e: i64| -> BigInt {
        let scaled = &x * pow10(digits as i64 - 1 - e);
        (scaled + BigRational::new(BigInt::one(), BigInt::from(2u32))).floor().to_integer()
    };
    let mut mantissa = round(exp);
    if mantissa.to_string().len() > digits {
        exp += 1;
        mantissa = round(exp);
    }
    let m = mantissa.to_string();

    let body = if exp >= digits as i64 - 1 {
        format!("{m}{}", "0".repeat((exp - (digits as i64 - 1)) as usize))
    } else if exp >= 0 {
        let (a, b) = m.split_at(exp as usize + 1);
        trim_fraction(format!("{a}.{b}"))
    } else {
        trim_fraction(format!("0.{}{m}", "0".repeat((-exp - 1) as usize)))
    };
    format!("{sign}{body}")
}

fn trim_fraction(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Encloses the real `p`-th root of a nonnegative rational.
///
/// Returns `(lo, hi)` with `lo^p <= x <= hi^p` and `hi - lo <= tol`.
pub fn root_bounds(x: &BigRational, p: u32, tol: &BigRational) -> (BigRational, BigRational) {
    assert!(p >= 1 && !x.is_negative() && tol.is_positive());
    if p == 1 {
        return (x.clone(), x.clone());
    }
    let mut lo = BigRational::zero();
    let mut hi = if x > &BigRational::one() { x.clone() } else { BigRational::one() };
    let half = BigRational::new(BigInt::one(), BigInt::from(2u32));
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) * &half;
        if Pow::pow(&mid, p) <= *x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// `floor(10^digits * 2^(1/d))`, the truncated decimal expansion of `2^(1/d)`.
pub fn root_of_two_scaled(d: u32, digits: u32) -> BigUint {
    assert!(d >= 1);
    let radicand = BigUint::from(2u32) * Pow::pow(BigUint::from(10u32), u64::from(digits) * u64::from(d));
    radicand.nth_root(d)
}

/// Formats the truncated `2^(1/d)` with `digits` fractional digits.
pub fn root_of_two_decimal(d: u32, digits: u32) -> String {
    let scaled = root_of_two_scaled(d, digits).to_string();
    if digits == 0 {
        return scaled;
    }
    let (a, b) = scaled.split_at(scaled.len() - digits as usize);
    format!("{a}.{b}")
}

/// Lossy conversion used only for human-facing output.
pub fn to_f64(x: &BigRational) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let (n, d) = (x.numer(), x.denom());
    let shift = n.bits().max(d.bits()).saturating_sub(1000);
    let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// `gcd` of a sequence of machine integers; zero for an empty sequence.
pub fn gcd_all(values: impl IntoIterator<Item = usize>) -> usize {
    values.into_iter().fold(0, |g, v| g.gcd(&v))
}
