//! Exact rational helpers shared by the LP, flow, and weighting code.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn half() -> Rational {
    ratio(1, 2)
}

/// A vector of `m` ones.
pub fn unit_weights(m: usize) -> Vec<Rational> {
    vec![Rational::one(); m]
}

/// Indicator vector of `edges` over ids `0..m`.
pub fn indicator(m: usize, edges: &crate::EdgeSet) -> Vec<Rational> {
    (0..m)
        .map(|e| {
            if edges.contains(e) {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect()
}

/// Formats `r` as `p` or `p/q`.
pub fn fmt_exact(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering with `places` digits after the point, rounded half away from zero.
pub fn fmt_decimal(r: &Rational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = (r * Rational::from_integer(scale.clone()))
        .round()
        .to_integer();
    let neg = scaled < BigInt::zero();
    let abs = if neg { -scaled } else { scaled };
    let whole = &abs / &scale;
    let frac = &abs % &scale;
    let sign = if neg { "-" } else { "" };
    if places == 0 {
        format!("{sign}{whole}")
    } else {
        format!(
            "{sign}{whole}.{:0>width$}",
            frac.to_string(),
            width = places as usize
        )
    }
}

/// Parses `p`, `p/q`, or a base-10 decimal such as `2.75` exactly.
pub fn parse_rational(text: &str) -> Option<Rational> {
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if (whole.is_empty() && frac.is_empty())
        || !whole.chars().all(|c| c.is_ascii_digit())
        || !frac.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let denom = BigInt::from(10u32).pow(frac.len() as u32);
    let value = Rational::new(numer, denom);
    Some(if neg { -value } else { value })
}
