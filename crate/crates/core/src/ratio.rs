//! Parsing and conversion helpers for exact rationals.

use crate::error::{invalid, Result};
use crate::Rational;

pub fn to_f64(q: Rational) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// Parses `a/b`, an integer, or a finite decimal such as `0.375`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || invalid(format!("cannot read `{text}` as a rational"));
    if let Some((a, b)) = s.split_once('/') {
        let (Ok(a), Ok(b)) = (a.trim().parse::<i64>(), b.trim().parse::<i64>()) else {
            return bad();
        };
        if b == 0 {
            return bad();
        }
        return Ok(Rational::new(a, b));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty()
        || frac.len() > 15
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return bad();
    }
    let denom = 10i64.pow(frac.len() as u32);
    let Ok(whole) = format!("{int}{frac}")
        .trim_start_matches('0')
        .parse::<i64>()
        .or_else(|e| {
            if int.chars().chain(frac.chars()).all(|c| c == '0') {
                Ok(0)
            } else {
                Err(e)
            }
        })
    else {
        return bad();
    };
    let q = Rational::new(whole, denom);
    Ok(if neg { -q } else { q })
}
