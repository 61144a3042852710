//! Variable labels and exact rational helpers.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{CtError, Result};

/// A label attached to a member of a variable. Numeric labels carry exact
/// rationals so that sum/product coarsenings and payoff arithmetic stay exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Num(BigRational),
    Sym(String),
}

impl Label {
    pub fn int(value: i64) -> Self {
        Label::Num(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Label::Num(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn sym(name: impl Into<String>) -> Self {
        Label::Sym(name.into())
    }

    pub fn as_rational(&self) -> Result<&BigRational> {
        match self {
            Label::Num(r) => Ok(r),
            Label::Sym(s) => Err(CtError::LabelArithmetic(s.clone())),
        }
    }

    pub fn as_f64(&self) -> Result<f64> {
        self.as_rational().map(rational_to_f64)
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Label::Num(_))
    }

    /// Parse `"3"`, `"-2"`, `"1/3"`, `"0.25"` as numbers, anything else as a symbol.
    pub fn parse(text: &str) -> Self {
        match parse_rational(text) {
            Ok(r) => Label::Num(r),
            Err(_) => Label::Sym(text.to_string()),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Num(r) => f.write_str(&render_rational(r)),
            Label::Sym(s) => f.write_str(s),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Parse an integer, a fraction `p/q` or a finite decimal into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || CtError::Domain(format!("not a rational number: `{text}`"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(idx) => {
            let exp: i32 = t[idx + 1..].parse().map_err(|_| bad())?;
            (&t[..idx], exp)
        }
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut r = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// Number of fractional decimal digits written in a decimal literal.
pub fn decimal_digits(text: &str) -> usize {
    let t = text.trim();
    let mantissa = t.split(['e', 'E']).next().unwrap_or(t);
    mantissa.split_once('.').map(|(_, f)| f.len()).unwrap_or(0)
}

/// Render a rational as an integer, a terminating decimal, or `p/q`.
pub fn render_rational(r: &BigRational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    match terminating_decimal(r) {
        Some(s) => s,
        None => format!("{}/{}", r.numer(), r.denom()),
    }
}

fn terminating_decimal(r: &BigRational) -> Option<String> {
    let mut den = r.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0usize, 0usize);
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scaled = r * BigRational::from_integer(num_traits::pow(BigInt::from(10), places));
    let n = scaled.to_integer();
    let neg = n.is_negative();
    let digits = n.abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (ip, fp) = digits.split_at(digits.len() - places);
    Some(format!("{}{}.{}", if neg { "-" } else { "" }, ip, fp))
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact rational value of a finite double.
pub fn f64_to_rational(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Simplest rational (smallest denominator) in the closed interval `[lo, hi]`, `0 <= lo <= hi`.
pub fn simplest_in_interval(lo: &BigRational, hi: &BigRational) -> BigRational {
    debug_assert!(lo <= hi);
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    if fl.clone() + BigRational::one() <= *hi {
        return fl + BigRational::one();
    }
    // lo and hi share integer part: recurse on reciprocals of the fractional parts.
    let lo_frac = lo - &fl;
    let hi_frac = hi - &fl;
    let inner = simplest_in_interval(&hi_frac.recip(), &lo_frac.recip());
    fl + inner.recip()
}

/// Snap a double to the simplest rational within `radius`, if its denominator is
/// at most `max_den`.
pub fn snap_rational(x: f64, radius: f64, max_den: u64) -> Option<BigRational> {
    if !x.is_finite() || x < 0.0 {
        return None;
    }
    let center = f64_to_rational(x)?;
    let rad = f64_to_rational(radius.max(0.0))?;
    let lo = (center.clone() - rad.clone()).max(BigRational::zero());
    let hi = center + rad;
    let r = simplest_in_interval(&lo, &hi);
    (r.denom() <= &BigInt::from(max_den)).then_some(r)
}

/// Least common multiple of the denominators of a list of rationals.
pub fn common_denominator(values: &[BigRational]) -> BigUint {
    values.iter().fold(BigUint::one(), |acc, v| {
        let d = v.denom().magnitude().clone();
        acc.lcm(&d)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(parse_rational("0.02").unwrap(), q(1, 50));
        assert_eq!(parse_rational("-2").unwrap(), q(-2, 1));
        assert_eq!(parse_rational("1/3").unwrap(), q(1, 3));
        assert_eq!(parse_rational("2.5e-1").unwrap(), q(1, 4));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn renders_terminating_decimals() {
        assert_eq!(render_rational(&q(1, 50)), "0.02");
        assert_eq!(render_rational(&q(-7, 4)), "-1.75");
        assert_eq!(render_rational(&q(2, 1)), "2");
        assert_eq!(render_rational(&q(1, 3)), "1/3");
        assert_eq!(render_rational(&q(11, 32)), "0.34375");
    }

    #[test]
    fn simplest_rational_search() {
        assert_eq!(simplest_in_interval(&q(49, 100), &q(51, 100)), q(1, 2));
        assert_eq!(simplest_in_interval(&q(3, 10), &q(34, 100)), q(1, 3));
        let half = 0.70710678_f64 * 0.70710678;
        assert_eq!(snap_rational(half, 1e-8, 10_000), Some(q(1, 2)));
        assert_eq!(snap_rational(0.123456789, 1e-12, 100), None);
    }

    #[test]
    fn label_parsing_and_order() {
        assert_eq!(Label::parse("10"), Label::int(10));
        assert_eq!(Label::parse("on"), Label::sym("on"));
        assert!(Label::int(-2) < Label::int(0));
        assert_eq!(Label::ratio(2, 3).to_string(), "2/3");
    }
}
