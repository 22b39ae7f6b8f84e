//! Tensoriality statistics of conditioned pseudo-expectations.
//!
//! For a slice with conditioned ensemble `Z'`:
//! - `K`: `E_a ‖{Z'_a} - ∏_i {Z'_i}‖₁` over tuples `a`,
//! - `P`: `E_{s,t} ‖{Z'_s, Z'_t} - {Z'_s}{Z'_t}‖₁` over pairs of tuples.
//!
//! Repeated vertices inside a tuple are collapsed, and joint assignments that
//! disagree on shared vertices carry zero joint mass.

use crate::collection::{vertex_mask, Collection};
use crate::error::Result;
use crate::seed;
use crate::sos::pseudo::{mask_vertices, PseudoExpectation};
use rand::Rng as _;

/// Pair statistics are exhaustive up to this many pairs, sampled beyond.
pub const PAIR_SAMPLES: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SliceStats {
    pub k_distance: f64,
    pub p_distance: f64,
    pub in_k: bool,
    pub in_p: bool,
}

impl SliceStats {
    pub fn admissible(&self) -> bool {
        self.in_k && self.in_p
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TensorialityReport {
    pub mu: f64,
    pub threshold: f64,
    pub slices: usize,
    pub mean_k: f64,
    pub mean_p: f64,
    pub frac_k: f64,
    pub frac_p: f64,
    pub frac_both: f64,
}

/// Restriction of a local assignment over `from` (sorted) to the sorted subset `to`.
fn restrict(from: &[usize], to: &[usize], local: u64) -> u64 {
    let mut out = 0u64;
    for (j, v) in to.iter().enumerate() {
        let pos = from.binary_search(v).expect("subset");
        out |= ((local >> pos) & 1) << j;
    }
    out
}

fn singleton(pe: &PseudoExpectation, v: usize) -> [f64; 2] {
    let p = pe.plus_probability(v);
    [p, 1.0 - p]
}

/// `‖{Z_a} - ∏_i {Z_i}‖₁` for the distinct vertices of one tuple.
pub fn tuple_distance(pe: &PseudoExpectation, tuple: &[u32]) -> Result<f64> {
    let set = vertex_mask(tuple);
    let verts = mask_vertices(set);
    let joint = pe.local_distribution(set)?;
    let marg: Vec<[f64; 2]> = verts.iter().map(|&v| singleton(pe, v)).collect();
    Ok(joint
        .iter()
        .enumerate()
        .map(|(alpha, &p)| {
            let prod: f64 = marg.iter().enumerate().map(|(j, m)| m[(alpha >> j) & 1]).product();
            (p - prod).abs()
        })
        .sum())
}

/// `Σ_{α,β} |Pr[Z_s=α, Z_t=β] - Pr[Z_s=α]Pr[Z_t=β]|` over local assignments of `s` and `t`.
pub fn pair_distance(pe: &PseudoExpectation, s: &[u32], t: &[u32]) -> Result<f64> {
    let (ms, mt) = (vertex_mask(s), vertex_mask(t));
    let (vs, vt, vu) = (mask_vertices(ms), mask_vertices(mt), mask_vertices(ms | mt));
    let ps = pe.local_distribution(ms)?;
    let pt = pe.local_distribution(mt)?;
    let pu = pe.local_distribution(ms | mt)?;
    let mut total = 0.0;
    let mut consistent_product = 0.0;
    for (gamma, &p) in pu.iter().enumerate() {
        let g = gamma as u64;
        let prod = ps[restrict(&vu, &vs, g) as usize] * pt[restrict(&vu, &vt, g) as usize];
        consistent_product += prod;
        total += (p - prod).abs();
    }
    // Inconsistent pairs have zero joint mass.
    Ok(total + (1.0 - consistent_product).max(0.0))
}

pub fn mean_tuple_distance(pe: &PseudoExpectation, coll: &Collection) -> Result<f64> {
    let mut acc = 0.0;
    for t in coll.tuples() {
        acc += tuple_distance(pe, t)?;
    }
    Ok(acc / coll.len() as f64)
}

/// Pairs used for the `P` statistic: all of them when few, else a fixed sample.
pub fn pair_panel(coll: &Collection) -> Vec<(usize, usize)> {
    let n = coll.len();
    if n * n <= PAIR_SAMPLES {
        return (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    }
    let mut rng = seed::stage_rng(coll.fingerprint(), "pair-panel", 0);
    (0..PAIR_SAMPLES)
        .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
        .collect()
}

pub fn mean_pair_distance(pe: &PseudoExpectation, coll: &Collection, panel: &[(usize, usize)]) -> Result<f64> {
    let mut acc = 0.0;
    for &(a, b) in panel {
        acc += pair_distance(pe, coll.tuple(a), coll.tuple(b))?;
    }
    Ok(acc / panel.len().max(1) as f64)
}

/// Both statistics of one slice, classified against `μ²/2`.
pub fn classify(pe: &PseudoExpectation, coll: &Collection, panel: &[(usize, usize)], mu: f64) -> Result<SliceStats> {
    let threshold = mu * mu / 2.0;
    let k_distance = mean_tuple_distance(pe, coll)?;
    let p_distance = mean_pair_distance(pe, coll, panel)?;
    Ok(SliceStats {
        k_distance,
        p_distance,
        in_k: k_distance <= threshold,
        in_p: p_distance <= threshold,
    })
}

pub fn summarize(stats: &[SliceStats], mu: f64) -> TensorialityReport {
    let n = stats.len().max(1) as f64;
    let frac = |f: &dyn Fn(&SliceStats) -> bool| stats.iter().filter(|s| f(s)).count() as f64 / n;
    TensorialityReport {
        mu,
        threshold: mu * mu / 2.0,
        slices: stats.len(),
        mean_k: stats.iter().map(|s| s.k_distance).sum::<f64>() / n,
        mean_p: stats.iter().map(|s| s.p_distance).sum::<f64>() / n,
        frac_k: frac(&|s| s.in_k),
        frac_p: frac(&|s| s.in_p),
        frac_both: frac(&|s| s.admissible()),
    }
}
