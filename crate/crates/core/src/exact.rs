//! Rational helpers: parsing, formatting and exact float conversion.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact value of a finite float.
pub fn from_f64(v: f64) -> Result<Rational> {
    Rational::from_f64(v).ok_or_else(|| Error::Parse(format!("non-finite number {v}")))
}

pub fn to_f64(v: &Rational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// `"n"` for integers, `"n/d"` otherwise.
pub fn format(v: &Rational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Parses `"n"`, `"n/d"` or a plain decimal such as `"0.99"` or `"-1.5e-3"`
/// into an exact rational. Decimals are read digit by digit, so `"0.1"`
/// becomes exactly 1/10.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{whole}{frac}").parse().map_err(|_| bad())?;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(digits * num::pow(ten, scale as usize))
    } else {
        Rational::new(digits, num::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Exact square root when `v` is the square of a rational.
pub fn sqrt_exact(v: &Rational) -> Option<Rational> {
    if v.is_negative() {
        return None;
    }
    let n = v.numer().sqrt();
    let d = v.denom().sqrt();
    (&n * &n == *v.numer() && &d * &d == *v.denom()).then(|| Rational::new(n, d))
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse("-6/8").unwrap(), ratio(-3, 4));
        assert_eq!(parse("0.99").unwrap(), ratio(99, 100));
        assert_eq!(parse("5").unwrap(), int(5));
        assert_eq!(parse("1.5e-3").unwrap(), ratio(3, 2000));
        assert_eq!(parse("2E2").unwrap(), int(200));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse(".").is_err());
    }

    #[test]
    fn formats_round_trip() {
        for s in ["0", "7", "-3/5", "22/7"] {
            assert_eq!(format(&parse(s).unwrap()), s);
        }
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(sqrt_exact(&ratio(9, 4)), Some(ratio(3, 2)));
        assert_eq!(sqrt_exact(&int(2)), None);
        assert_eq!(sqrt_exact(&int(-4)), None);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(11, 3), 165);
        assert_eq!(binomial(3, 5), 0);
    }
}
