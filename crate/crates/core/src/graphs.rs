//! Regular graphs and their spectra.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;

use crate::error::{invalid, limit, Error, Result};
use crate::seed;
use crate::spectral;

/// Largest graph accepted by the dense spectral routines.
pub const SPECTRAL_CAP: usize = 2000;

const EIGEN_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularGraph {
    n: usize,
    d: usize,
    adj: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Expansion {
    pub sigma2: f64,
    pub connected: bool,
}

impl RegularGraph {
    /// Builds a simple `d`-regular graph from an edge list.
    pub fn from_edges(n: usize, d: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut sets = vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return invalid(format!("edge ({u},{v}) out of range for n={n}"));
            }
            if u == v {
                return invalid(format!("self-loop at {u}"));
            }
            if !sets[u].insert(v) || !sets[v].insert(u) {
                return invalid(format!("repeated edge ({u},{v})"));
            }
        }
        if let Some(v) = (0..n).find(|&v| sets[v].len() != d) {
            return invalid(format!("vertex {v} has degree {} instead of {d}", sets[v].len()));
        }
        Ok(Self {
            n,
            d,
            adj: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::from_edges(n, n.saturating_sub(1), &edges)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return invalid("a cycle needs at least 3 vertices");
        }
        let edges: Vec<_> = (0..n).map(|u| (u, (u + 1) % n)).collect();
        Self::from_edges(n, 2, &edges)
    }

    /// Random simple `d`-regular graph from the pairing model with rejection.
    ///
    /// Dense targets (`d > (n-1)/2`) are built as complements of sparse ones,
    /// which keeps the rejection rate manageable.
    pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Self> {
        if d >= n || (n * d) % 2 == 1 {
            return invalid(format!("no simple {d}-regular graph on {n} vertices"));
        }
        if 2 * d > n - 1 {
            let sparse = Self::random_regular(n, n - 1 - d, seed)?;
            return Ok(sparse.complement());
        }
        let mut rng = seed::stage_rng(seed, "random-regular", 0);
        let mut points: Vec<usize> = (0..n * d).map(|p| p / d.max(1)).collect();
        'attempt: for _ in 0..100_000 {
            points.shuffle(&mut rng);
            let mut sets = vec![BTreeSet::new(); n];
            for pair in points.chunks(2) {
                let (u, v) = (pair[0], pair[1]);
                if u == v || !sets[u].insert(v) {
                    continue 'attempt;
                }
                sets[v].insert(u);
            }
            return Ok(Self {
                n,
                d,
                adj: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
            });
        }
        limit(format!("pairing model failed for n={n}, d={d}"))
    }

    fn complement(&self) -> Self {
        let adj: Vec<Vec<usize>> = (0..self.n)
            .map(|v| {
                (0..self.n)
                    .filter(|&u| u != v && self.adj[v].binary_search(&u).is_err())
                    .collect()
            })
            .collect();
        Self {
            n: self.n,
            d: self.n - 1 - self.d,
            adj,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn adjacency_lists(&self) -> &[Vec<usize>] {
        &self.adj
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| self.adj[u].iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        spectral::component_count(&self.adj) <= 1
    }

    /// Normalized random-walk matrix `A / d`.
    pub fn walk_matrix(&self) -> DMatrix<f64> {
        let inv = 1.0 / self.d as f64;
        let mut m = DMatrix::zeros(self.n, self.n);
        for u in 0..self.n {
            for &v in &self.adj[u] {
                m[(u, v)] = inv;
            }
        }
        m
    }

    /// Eigenvalues of the walk matrix, sorted descending.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        if self.n > SPECTRAL_CAP {
            return limit(format!("n={} exceeds the dense spectral cap", self.n));
        }
        Ok(spectral::sym_eigenvalues(&self.walk_matrix()))
    }

    /// Singular values of the walk matrix, sorted descending.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        if self.n > SPECTRAL_CAP {
            return limit(format!("n={} exceeds the dense spectral cap", self.n));
        }
        Ok(spectral::sym_singular_values(&self.walk_matrix()))
    }

    /// Second largest singular value of the walk matrix.
    ///
    /// Disconnected graphs report `sigma2 = 1` with the flag cleared.
    pub fn sigma2(&self) -> Result<Expansion> {
        let connected = self.is_connected();
        let sv = self.singular_values()?;
        let sigma2 = if connected {
            sv.get(1).copied().unwrap_or(0.0).min(1.0)
        } else {
            1.0
        };
        Ok(Expansion { sigma2, connected })
    }

    /// Number of walk-matrix eigenvalues at least `tau`.
    pub fn threshold_rank(&self, tau: f64) -> Result<usize> {
        Ok(self.spectrum()?.iter().filter(|&&e| e >= tau - EIGEN_TOL).count())
    }

    /// Edge-list file: header `n d`, then `u v` per line.
    pub fn to_edge_file(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.d);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn parse_edge_file(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let [n, d] = parse_pair(header, hl)?;
        let mut edges = Vec::new();
        for (ln, line) in lines {
            let [u, v] = parse_pair(line, ln)?;
            edges.push((u, v));
        }
        Self::from_edges(n, d, &edges)
    }
}

fn parse_pair(line: &str, idx: usize) -> Result<[usize; 2]> {
    let vals: Vec<usize> = line
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|e: std::num::ParseIntError| Error::Parse {
            line: idx + 1,
            msg: e.to_string(),
        })?;
    vals.try_into().map_err(|_| Error::Parse {
        line: idx + 1,
        msg: "expected two integers".into(),
    })
}
