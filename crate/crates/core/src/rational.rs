//! Exact rational numbers used for every distance in the crate.

use num_rational::Ratio;
use num_traits::{Signed, Zero};

/// Exact rational number, always kept in reduced form with a positive denominator.
pub type Rational = Ratio<i128>;

/// `numer / denom` in canonical form. Panics on a zero denominator.
pub fn rat(numer: i128, denom: i128) -> Rational {
    Ratio::new(numer, denom)
}

/// The integer `n` as a rational.
pub fn int(n: i128) -> Rational {
    Ratio::from_integer(n)
}

/// Parses `p/q` or a bare integer. Decimals are rejected so that files stay lossless.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: i128 = p
        .parse()
        .map_err(|_| format!("`{s}` is not a rational of the form p/q"))?;
    let q: i128 = q
        .parse()
        .map_err(|_| format!("`{s}` is not a rational of the form p/q"))?;
    if q == 0 {
        return Err(format!("`{s}` has a zero denominator"));
    }
    Ok(Ratio::new(p, q))
}

/// `|a - b|`
pub fn abs_diff(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}

/// `base^exp` for a non-negative exponent.
pub fn pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = int(1);
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

pub(crate) fn is_positive(r: &Rational) -> bool {
    !r.is_zero() && r.is_positive()
}
