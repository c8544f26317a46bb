//! Exact rational scalars and the string forms used on the wire.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Exact = BigRational;

/// `num / den` as an exact rational. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Exact {
    Exact::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Exact {
    Exact::from_integer(BigInt::from(n))
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    BigInt::from(acc)
}

/// `C(n, k) / C(m, l)` as an exact rational.
pub fn binomial_ratio(n: u64, k: u64, m: u64, l: u64) -> Exact {
    Exact::new(binomial(n, k), binomial(m, l))
}

/// Nearest binary64 value; infinite only for astronomically large magnitudes.
pub fn to_f64(x: &Exact) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// Exact rational equal to a finite binary64 value.
pub fn from_f64(x: f64) -> Option<Exact> {
    Exact::from_float(x)
}

/// Renders as `"p/q"`; integers keep the `/1` so every value has one shape.
pub fn format_exact(x: &Exact) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Shortest decimal that round-trips through binary64.
pub fn format_decimal(x: &Exact) -> String {
    format!("{}", to_f64(x))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {input:?} as an exact rational: {reason}")]
pub struct ParseExactError {
    pub input: String,
    pub reason: &'static str,
}

/// Parses `"p/q"`, `"p"`, or a plain decimal such as `"-0.125"` exactly.
pub fn parse_exact(s: &str) -> Result<Exact, ParseExactError> {
    let input = s.trim();
    let fail = |reason| ParseExactError { input: input.to_owned(), reason };
    if input.is_empty() {
        return Err(fail("empty string"));
    }
    if let Some((p, q)) = input.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| fail("bad numerator"))?;
        let q: BigInt = q.trim().parse().map_err(|_| fail("bad denominator"))?;
        if q.is_zero() {
            return Err(fail("zero denominator"));
        }
        return Ok(Exact::new(p, q));
    }
    let (negative, body) = match input.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, input.strip_prefix('+').unwrap_or(input)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(fail("no digits"));
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(fail("unexpected character"));
    }
    let digits = format!("{whole}{frac}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| fail("bad digits"))? };
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let value = Exact::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Display adapter producing `p/q (decimal)`.
pub struct Both<'a>(pub &'a Exact);

impl fmt::Display for Both<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", format_exact(self.0), format_decimal(self.0))
    }
}
