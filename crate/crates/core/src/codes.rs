//! Binary linear codes given by generator matrices.
//!
//! Words of length `n <= 64` are packed into `u64` masks, coordinate `i` being
//! bit `i`. Codeword enumeration is cached up to a configurable cap.

use std::fmt::Write as _;

use rand::Rng as _;

use crate::error::{invalid, limit, Error, Result};
use crate::seed;
use crate::words::BinaryWord;
use crate::Rational;

pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 20;

#[derive(Clone, Debug)]
pub struct LinearCode {
    n: usize,
    rows: Vec<u64>,
    echelon: Vec<(usize, u64)>,
    codewords: Option<Vec<u64>>,
}

/// Reduced row echelon form as `(pivot column, row)` pairs; `None` if dependent.
fn echelon_form(rows: &[u64]) -> Option<Vec<(usize, u64)>> {
    let mut basis: Vec<(usize, u64)> = Vec::with_capacity(rows.len());
    for &r in rows {
        let mut v = r;
        for &(p, b) in &basis {
            if (v >> p) & 1 == 1 {
                v ^= b;
            }
        }
        if v == 0 {
            return None;
        }
        let p = v.trailing_zeros() as usize;
        for entry in basis.iter_mut() {
            if (entry.1 >> p) & 1 == 1 {
                entry.1 ^= v;
            }
        }
        basis.push((p, v));
    }
    Some(basis)
}

impl LinearCode {
    pub fn new(n: usize, rows: Vec<u64>) -> Result<Self> {
        Self::with_cap(n, rows, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(n: usize, rows: Vec<u64>, cap: u64) -> Result<Self> {
        if n == 0 || n > 64 {
            return invalid(format!("code length {n} outside 1..=64"));
        }
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        if rows.iter().any(|r| r & !full != 0) {
            return invalid("generator row has bits beyond the code length");
        }
        let echelon =
            echelon_form(&rows).ok_or_else(|| Error::InvalidInput("generator rows are linearly dependent".into()))?;
        let m = rows.len();
        let codewords = if m < 63 && (1u64 << m) <= cap {
            Some((0..(1u64 << m)).map(|msg| encode_mask(&rows, msg)).collect())
        } else {
            None
        };
        Ok(Self {
            n,
            rows,
            echelon,
            codewords,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn rate(&self) -> Rational {
        Rational::new(self.dimension() as i64, self.n as i64)
    }

    /// All `2^m` codewords as masks, in message order.
    pub fn codewords(&self) -> Result<&[u64]> {
        self.codewords
            .as_deref()
            .ok_or_else(|| Error::ResourceLimit(format!("2^{} codewords exceed the enumeration cap", self.dimension())))
    }

    pub fn codeword_words(&self) -> Result<Vec<BinaryWord>> {
        Ok(self
            .codewords()?
            .iter()
            .map(|&c| BinaryWord::from_mask(self.n, c))
            .collect())
    }

    pub fn encode(&self, message: u64) -> u64 {
        encode_mask(&self.rows, message)
    }

    /// Canonical coset representative of `word` modulo the code: pivot
    /// coordinates are cleared, so two words share a label iff they differ
    /// by a codeword.
    pub fn coset_label(&self, word: u64) -> u64 {
        let mut v = word;
        for &(p, b) in &self.echelon {
            if (v >> p) & 1 == 1 {
                v ^= b;
            }
        }
        v
    }

    pub fn contains(&self, word: u64) -> bool {
        self.coset_label(word) == 0
    }

    /// Minimum weight of a nonzero codeword, by enumeration.
    pub fn min_distance(&self) -> Result<usize> {
        let words = self.codewords()?;
        Ok(words
            .iter()
            .filter(|&&c| c != 0)
            .map(|c| c.count_ones() as usize)
            .min()
            .unwrap_or(self.n))
    }

    pub fn relative_distance(&self) -> Result<Rational> {
        Ok(Rational::new(self.min_distance()? as i64, self.n as i64))
    }

    /// Maximum bias over nonzero codewords.
    pub fn code_bias(&self) -> Result<Rational> {
        let words = self.codewords()?;
        let n = self.n as i64;
        Ok(words
            .iter()
            .filter(|&&c| c != 0)
            .map(|c| Rational::new((n - 2 * c.count_ones() as i64).abs(), n))
            .max()
            .unwrap_or_else(|| Rational::from_integer(0)))
    }

    /// Zero-padding projection: forces the last `⌊delta·n/2⌋` coordinates to 0.
    ///
    /// Requires relative distance at least `delta`, which makes the projection
    /// injective on the code so the dimension is preserved.
    pub fn project_phi(&self, delta: Rational) -> Result<Self> {
        if delta < Rational::from_integer(0) || delta > Rational::from_integer(1) {
            return invalid(format!("delta {delta} outside [0,1]"));
        }
        if self.relative_distance()? < delta {
            return invalid(format!(
                "code distance {} is below delta {delta}",
                self.relative_distance()?
            ));
        }
        let s = (delta * Rational::from_integer(self.n as i64) / 2).floor().to_integer() as usize;
        let keep = self.n - s;
        let mask = if keep == 64 { u64::MAX } else { (1u64 << keep) - 1 };
        let cap = self
            .codewords
            .as_ref()
            .map_or(DEFAULT_ENUMERATION_CAP, |c| c.len() as u64);
        Self::with_cap(self.n, self.rows.iter().map(|r| r & mask).collect(), cap.max(1))
    }

    /// Random `[n, m]` code whose measured relative distance is at least `target`.
    pub fn random_with_distance(n: usize, m: usize, target: Rational, seed: u64, max_attempts: usize) -> Result<Self> {
        if m == 0 || m > n || n > 64 {
            return invalid(format!("cannot build an [{n},{m}] code"));
        }
        if m > 20 {
            return limit(format!("dimension {m} exceeds the certification cap of 20"));
        }
        let mut rng = seed::stage_rng(seed, "random-code", 0);
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        for _ in 0..max_attempts {
            let rows: Vec<u64> = (0..m).map(|_| rng.gen::<u64>() & full).collect();
            let Ok(code) = Self::new(n, rows) else { continue };
            if code.relative_distance()? >= target {
                return Ok(code);
            }
        }
        limit(format!(
            "no [{n},{m}] code with relative distance >= {target} in {max_attempts} attempts"
        ))
    }

    /// Generator matrix file: header `n m`, then one row of `0`/`1` per line.
    pub fn to_generator_file(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.dimension());
        for &r in &self.rows {
            let _ = writeln!(out, "{}", BinaryWord::from_mask(self.n, r).to_bit_string());
        }
        out
    }

    pub fn parse_generator_file(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                line: hl + 1,
                msg: format!("bad header: {e}"),
            })?;
        let [n, m] = dims[..] else {
            return Err(Error::Parse {
                line: hl + 1,
                msg: "header must be `n m`".into(),
            });
        };
        let mut rows = Vec::with_capacity(m);
        for (ln, line) in lines {
            let w = BinaryWord::parse_bit_string(line).map_err(|e| Error::Parse {
                line: ln + 1,
                msg: e.to_string(),
            })?;
            if w.len() != n {
                return Err(Error::Parse {
                    line: ln + 1,
                    msg: format!("row has length {} but n = {n}", w.len()),
                });
            }
            rows.push(w.to_mask()?);
        }
        if rows.len() != m {
            return Err(Error::Parse {
                line: 0,
                msg: format!("expected {m} rows, found {}", rows.len()),
            });
        }
        Self::new(n, rows)
    }
}

fn encode_mask(rows: &[u64], message: u64) -> u64 {
    rows.iter()
        .enumerate()
        .filter(|(i, _)| (message >> i) & 1 == 1)
        .fold(0, |acc, (_, r)| acc ^ r)
}

/// Repetition code of length `n`.
pub fn repetition(n: usize) -> Result<LinearCode> {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    LinearCode::new(n, vec![full])
}

/// Even-weight code of length `n` (dimension `n - 1`).
pub fn even_weight(n: usize) -> Result<LinearCode> {
    LinearCode::new(n, (1..n).map(|i| 1u64 | (1u64 << i)).collect())
}
