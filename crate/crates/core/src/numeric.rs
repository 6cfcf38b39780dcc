//! Exact rationals, threshold parsing and number display.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<u64>;

/// Parses a decimal (`0.19`) or a fraction (`7/37`) exactly.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: u64 = n.trim().parse().ok()?;
        let d: u64 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 18 {
        return None;
    }
    let int: u64 = if int.is_empty() { 0 } else { int.parse().ok()? };
    let scale = 10u64.checked_pow(frac.len() as u32)?;
    let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
    let num = int.checked_mul(scale)?.checked_add(frac)?;
    Some(Rational::new(num, scale))
}

/// A similarity threshold in (0, 1].
pub fn parse_tau(text: &str) -> Result<Rational> {
    match parse_rational(text) {
        Some(t) if !t.is_zero() && t <= Rational::one() => Ok(t),
        _ => Err(Error::InvalidThreshold(text.to_string())),
    }
}

/// `start:stop:step` (inclusive) or a comma-separated list of thresholds.
pub fn parse_grid(text: &str) -> Result<Vec<Rational>> {
    let bad = || Error::InvalidThreshold(text.to_string());
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() == 3 {
        let start = parse_tau(parts[0])?;
        let stop = parse_tau(parts[1])?;
        let step = parse_rational(parts[2]).filter(|s| !s.is_zero()).ok_or_else(bad)?;
        let mut out = Vec::new();
        let mut t = start;
        while t <= stop {
            out.push(t);
            t += step;
        }
        return Ok(out);
    }
    if parts.len() != 1 {
        return Err(bad());
    }
    text.split(',').map(parse_tau).collect()
}

/// `n/d` in lowest terms, or `n` for integers.
pub fn format_exact(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering rounded half up to `places` digits.
pub fn format_decimal(r: &Rational, places: u32) -> String {
    let scale = 10u128.pow(places);
    let num = *r.numer() as u128 * scale;
    let den = *r.denom() as u128;
    let scaled = (2 * num + den) / (2 * den);
    let int = scaled / scale;
    if places == 0 {
        return int.to_string();
    }
    let frac = scaled % scale;
    format!("{int}.{frac:0width$}", width = places as usize)
}

/// Scientific notation with three significant digits, truncated:
/// `26794240` gives `2.67e7`.
pub fn format_scientific(n: &BigUint) -> String {
    let digits = n.to_string();
    if digits == "0" {
        return "0".to_string();
    }
    let exp = digits.len() - 1;
    let mut mantissa: Vec<char> = digits.chars().take(3).collect();
    while mantissa.len() < 3 {
        mantissa.push('0');
    }
    format!("{}.{}{}e{exp}", mantissa[0], mantissa[1], mantissa[2])
}
