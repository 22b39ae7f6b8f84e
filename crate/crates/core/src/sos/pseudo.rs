//! Pseudo-expectations over ±1 variables in the Fourier (symmetric difference) basis.
//!
//! Moments are stored densely as `y[S] = Ẽ[∏_{i∈S} Z_i]` for every mask `S`
//! of the ground set. Only masks of size at most `degree` carry meaning. The
//! moment matrix is indexed by masks of size at most `psd_level` with entry
//! `(A, B) = y[A ⊕ B]`. When both equal `n` the matrix covers every subset
//! and positive semidefiniteness is equivalent to being a true distribution.

use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::error::{invalid, limit, Error, Result};
use crate::spectral;

/// Largest ground set handled by the dense moment table.
pub const MAX_GROUND: usize = 20;
/// Events with probability below this are treated as impossible.
pub const CONDITION_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct PseudoExpectation {
    n: usize,
    degree: usize,
    psd_level: usize,
    y: Vec<f64>,
}

/// In-place Walsh–Hadamard transform: `v[a] <- Σ_b (-1)^{|a∩b|} v[b]`.
pub fn walsh_hadamard(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Sign `(-1)^{|a ∩ b|}`.
#[inline]
pub fn chi(a: u64, b: u64) -> f64 {
    if (a & b).count_ones() & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Vertices of a mask in increasing order.
pub fn mask_vertices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| (mask >> i) & 1 == 1).collect()
}

/// Global mask of the local subset `local` of the sorted vertex list `verts`.
#[inline]
pub fn scatter(verts: &[usize], local: u64) -> u64 {
    verts
        .iter()
        .enumerate()
        .filter(|(j, _)| (local >> j) & 1 == 1)
        .fold(0u64, |m, (_, &v)| m | (1u64 << v))
}

fn check_ground(n: usize) -> Result<()> {
    if n > MAX_GROUND {
        return limit(format!("ground size {n} exceeds the dense moment cap {MAX_GROUND}"));
    }
    Ok(())
}

impl PseudoExpectation {
    pub fn from_moments(n: usize, degree: usize, psd_level: usize, y: Vec<f64>) -> Result<Self> {
        check_ground(n)?;
        if y.len() != 1 << n {
            return invalid(format!("moment table has {} entries, expected 2^{n}", y.len()));
        }
        if (y[0] - 1.0).abs() > 1e-9 {
            return invalid(format!("normalization Ẽ[1] = {} instead of 1", y[0]));
        }
        let full = degree == n && psd_level == n;
        if degree > n || (!full && 2 * psd_level > degree) {
            return invalid(format!("degree {degree} / level {psd_level} inconsistent for n={n}"));
        }
        Ok(Self {
            n,
            degree,
            psd_level,
            y,
        })
    }

    /// The distribution with all mass on `z` (bit 1 means `Z_i = -1`).
    pub fn delta(n: usize, z: u64, degree: usize) -> Result<Self> {
        check_ground(n)?;
        let y = (0..1u64 << n).map(|s| chi(s, z)).collect();
        let degree = degree.min(n);
        Ok(Self {
            n,
            degree,
            psd_level: level_for(n, degree),
            y,
        })
    }

    /// Uniform distribution over `{±1}^n`.
    pub fn uniform(n: usize, degree: usize) -> Result<Self> {
        check_ground(n)?;
        let mut y = vec![0.0; 1 << n];
        y[0] = 1.0;
        let degree = degree.min(n);
        Ok(Self {
            n,
            degree,
            psd_level: level_for(n, degree),
            y,
        })
    }

    /// Moments of a probability vector over assignments (indexed by mask).
    pub fn from_distribution(n: usize, probs: &[f64], degree: usize) -> Result<Self> {
        check_ground(n)?;
        if probs.len() != 1 << n {
            return invalid("distribution length must be 2^n");
        }
        if probs.iter().any(|&p| p < -1e-12) {
            return invalid("negative probability");
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return invalid(format!("probabilities sum to {total}"));
        }
        let mut y = probs.to_vec();
        walsh_hadamard(&mut y);
        let degree = degree.min(n);
        Ok(Self {
            n,
            degree,
            psd_level: level_for(n, degree),
            y,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn psd_level(&self) -> usize {
        self.psd_level
    }

    /// Every subset is a valid moment and the moment matrix covers all subsets.
    pub fn is_full(&self) -> bool {
        self.degree == self.n && self.psd_level == self.n
    }

    pub fn moments(&self) -> &[f64] {
        &self.y
    }

    pub fn moment(&self, mask: u64) -> Result<f64> {
        if mask.count_ones() as usize > self.degree || (mask >> self.n) != 0 {
            return Err(Error::InvalidInput(format!(
                "moment of a set of size {} beyond degree {}",
                mask.count_ones(),
                self.degree
            )));
        }
        Ok(self.y[mask as usize])
    }

    /// `alpha·self + (1 - alpha)·other`, at the smaller degree of the two.
    pub fn mix(&self, other: &Self, alpha: f64) -> Result<Self> {
        if self.n != other.n {
            return invalid("mixing pseudo-expectations on different ground sets");
        }
        Ok(Self {
            n: self.n,
            degree: self.degree.min(other.degree),
            psd_level: self.psd_level.min(other.psd_level),
            y: self
                .y
                .iter()
                .zip(&other.y)
                .map(|(a, b)| alpha * a + (1.0 - alpha) * b)
                .collect(),
        })
    }

    /// Index masks of the moment matrix, ordered by size then value.
    pub fn matrix_index(&self) -> Vec<u64> {
        matrix_index(self.n, self.psd_level)
    }

    pub fn moment_matrix(&self) -> DMatrix<f64> {
        let idx = self.matrix_index();
        DMatrix::from_fn(idx.len(), idx.len(), |i, j| self.y[(idx[i] ^ idx[j]) as usize])
    }

    pub fn min_eigenvalue(&self) -> f64 {
        spectral::sym_eigenvalues(&self.moment_matrix())
            .last()
            .copied()
            .unwrap_or(0.0)
    }

    /// `Pr[Z_S = σ]` where `sigma ⊆ set` marks the coordinates equal to `-1`.
    pub fn probability(&self, set: u64, sigma: u64) -> Result<f64> {
        let k = set.count_ones() as usize;
        if k > self.degree {
            return invalid(format!("event on {k} variables beyond degree {}", self.degree));
        }
        let mut total = 0.0;
        let mut sub = set;
        loop {
            total += chi(sub, sigma) * self.y[sub as usize];
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & set;
        }
        Ok(total / (1u64 << k) as f64)
    }

    /// Pseudo-expectation conditioned on `Z_S = σ`.
    ///
    /// Moments are `Ẽ[1_{Z_S=σ} Z^T] / Pr[Z_S = σ]`; the valid degree and the
    /// moment-matrix level both drop by `|S|` unless every subset was covered.
    pub fn condition(&self, set: u64, sigma: u64) -> Result<Self> {
        if sigma & !set != 0 {
            return invalid("assignment has coordinates outside the conditioned set");
        }
        if set == 0 {
            return Ok(self.clone());
        }
        let k = set.count_ones() as usize;
        let p = self.probability(set, sigma)?;
        if p <= CONDITION_TOL {
            return Err(Error::InvalidCondition(format!("Pr[Z_S = σ] = {p:.3e}")));
        }
        let full = self.is_full();
        let (degree, psd_level) = if full {
            (self.n, self.n)
        } else {
            (self.degree - k, self.psd_level.saturating_sub(k))
        };
        let subs: Vec<(u64, f64)> = {
            let mut v = Vec::with_capacity(1 << k);
            let mut sub = set;
            loop {
                v.push((sub, chi(sub, sigma)));
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & set;
            }
            v
        };
        let norm = p * (1u64 << k) as f64;
        let mut y = vec![0.0; 1 << self.n];
        for (t, out) in y.iter_mut().enumerate() {
            let t = t as u64;
            if t.count_ones() as usize > degree {
                continue;
            }
            let acc: f64 = subs.iter().map(|&(u, s)| s * self.y[(u ^ t) as usize]).sum();
            *out = acc / norm;
        }
        y[0] = 1.0;
        Ok(Self {
            n: self.n,
            degree,
            psd_level,
            y,
        })
    }

    /// Distribution of `Z_S`, indexed by local masks over the sorted vertices of `S`.
    ///
    /// Tiny negative entries from numerical slack are clipped and the table renormalized.
    pub fn local_distribution(&self, set: u64) -> Result<Vec<f64>> {
        let verts = mask_vertices(set);
        let k = verts.len();
        if k > self.degree {
            return invalid(format!(
                "local distribution on {k} variables beyond degree {}",
                self.degree
            ));
        }
        let mut v: Vec<f64> = (0..1u64 << k)
            .map(|local| self.y[scatter(&verts, local) as usize])
            .collect();
        walsh_hadamard(&mut v);
        let scale = 1.0 / (1u64 << k) as f64;
        let mut total = 0.0;
        for p in v.iter_mut() {
            *p = (*p * scale).max(0.0);
            total += *p;
        }
        if total <= 0.0 {
            return Err(Error::InvalidCondition("local distribution has no mass".into()));
        }
        for p in v.iter_mut() {
            *p /= total;
        }
        Ok(v)
    }

    /// `Σ_α Pr[Z_S = α](1 - Pr[Z_S = α])`.
    pub fn variance(&self, set: u64) -> Result<f64> {
        Ok(self.local_distribution(set)?.iter().map(|p| p * (1.0 - p)).sum())
    }

    /// `Pr[Z_i = +1]`.
    pub fn plus_probability(&self, i: usize) -> f64 {
        if self.degree == 0 {
            return 0.5;
        }
        ((1.0 + self.y[1 << i]) / 2.0).clamp(0.0, 1.0)
    }

    /// Text dump: one `{v1,v2,...}:value` line per moment of size at most `degree`.
    pub fn to_dump(&self) -> String {
        let mut out = String::new();
        for s in matrix_index(self.n, self.degree) {
            let verts: Vec<String> = mask_vertices(s).iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{{{}}}:{:.12e}", verts.join(","), self.y[s as usize]);
        }
        out
    }

    pub fn parse_dump(n: usize, degree: usize, psd_level: usize, text: &str) -> Result<Self> {
        check_ground(n)?;
        let mut y = vec![0.0; 1 << n];
        for (ln, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let perr = |msg: String| Error::Parse { line: ln + 1, msg };
            let (set, val) = line.split_once(':').ok_or_else(|| perr("expected `S:value`".into()))?;
            let inner = set.trim().trim_start_matches('{').trim_end_matches('}');
            let mut mask = 0u64;
            for tok in inner.split(',').filter(|t| !t.is_empty()) {
                let v: usize = tok
                    .trim()
                    .parse()
                    .map_err(|e: std::num::ParseIntError| perr(e.to_string()))?;
                if v >= n {
                    return Err(perr(format!("vertex {v} outside the ground set")));
                }
                mask |= 1 << v;
            }
            y[mask as usize] = val
                .trim()
                .parse()
                .map_err(|e: std::num::ParseFloatError| perr(e.to_string()))?;
        }
        Self::from_moments(n, degree, psd_level, y)
    }
}

/// Moment-matrix level paired with a moment degree: half the degree, or
/// everything when the degree reaches `n`.
pub fn level_for(n: usize, degree: usize) -> usize {
    if degree >= n {
        n
    } else {
        degree / 2
    }
}

/// Masks of `[n]` with at most `level` elements, ordered by size then value.
pub fn matrix_index(n: usize, level: usize) -> Vec<u64> {
    let mut idx: Vec<u64> = (0..1u64 << n).filter(|m| m.count_ones() as usize <= level).collect();
    idx.sort_by_key(|&m| (m.count_ones(), m));
    idx
}
