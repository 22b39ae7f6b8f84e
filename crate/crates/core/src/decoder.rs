//! Unique decoders for base codes.

use std::collections::HashMap;

use crate::codes::LinearCode;
use crate::error::{invalid, limit, Result};
use crate::words::BinaryWord;
use crate::Rational;

/// Largest syndrome table (number of error patterns) we are willing to build.
pub const SYNDROME_TABLE_CAP: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    BruteForce,
    SyndromeTable,
}

#[derive(Clone, Debug)]
pub struct UniqueDecoder {
    code: LinearCode,
    radius: Rational,
    max_errors: usize,
    strategy: Strategy,
    /// Coset label to its unique pattern within the radius, `None` when ambiguous.
    table: Option<HashMap<u64, Option<u64>>>,
}

fn binomial_sum(n: usize, r: usize) -> u64 {
    let mut total = 0u64;
    let mut c = 1u64;
    for i in 0..=r.min(n) {
        total = total.saturating_add(c);
        c = c.saturating_mul((n - i) as u64) / (i as u64 + 1);
    }
    total
}

/// Calls `f` on every mask of length `n` with weight at most `r`.
fn for_each_low_weight(n: usize, r: usize, f: &mut impl FnMut(u64)) {
    fn rec(start: usize, n: usize, left: usize, acc: u64, f: &mut impl FnMut(u64)) {
        f(acc);
        if left == 0 {
            return;
        }
        for i in start..n {
            rec(i + 1, n, left - 1, acc | (1u64 << i), f);
        }
    }
    rec(0, n, r, 0, f);
}

impl UniqueDecoder {
    pub fn new(code: LinearCode, radius: Rational, strategy: Strategy) -> Result<Self> {
        if radius < Rational::from_integer(0) || radius >= Rational::new(1, 2) {
            return invalid(format!("decoding radius {radius} outside [0, 1/2)"));
        }
        let n = code.len();
        let max_errors = (radius * Rational::from_integer(n as i64)).floor().to_integer() as usize;
        let table = match strategy {
            Strategy::BruteForce => {
                code.codewords()?;
                None
            }
            Strategy::SyndromeTable => {
                if binomial_sum(n, max_errors) > SYNDROME_TABLE_CAP {
                    return limit(format!("syndrome table for n={n}, {max_errors} errors exceeds the cap"));
                }
                let mut table: HashMap<u64, Option<u64>> = HashMap::new();
                for_each_low_weight(n, max_errors, &mut |e| {
                    table
                        .entry(code.coset_label(e))
                        .and_modify(|slot| *slot = None)
                        .or_insert(Some(e));
                });
                Some(table)
            }
        };
        Ok(Self {
            code,
            radius,
            max_errors,
            strategy,
            table,
        })
    }

    /// Decoder at the largest radius strictly below half the minimum distance.
    pub fn half_distance(code: LinearCode, strategy: Strategy) -> Result<Self> {
        let d = code.min_distance()?;
        let n = code.len() as i64;
        let radius = Rational::new((d.saturating_sub(1) / 2) as i64, n);
        Self::new(code, radius, strategy)
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn radius(&self) -> Rational {
        self.radius
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    /// The unique codeword within the radius, as a mask.
    pub fn decode_mask(&self, word: u64) -> Option<u64> {
        match &self.table {
            Some(table) => match table.get(&self.code.coset_label(word)) {
                Some(Some(e)) => Some(word ^ e),
                _ => None,
            },
            None => {
                let words = self.code.codewords().ok()?;
                let mut found = None;
                for &c in words {
                    if (c ^ word).count_ones() as usize <= self.max_errors {
                        if found.is_some() {
                            return None;
                        }
                        found = Some(c);
                    }
                }
                found
            }
        }
    }

    pub fn decode(&self, w: &BinaryWord) -> Option<BinaryWord> {
        if w.len() != self.code.len() {
            return None;
        }
        let mask = w.to_mask().ok()?;
        self.decode_mask(mask)
            .map(|c| BinaryWord::from_mask(self.code.len(), c))
    }
}
