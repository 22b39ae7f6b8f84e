//! Criteria 1, 2, 3 and 10: spectra, parity sampling, near-independence, rates.

use std::collections::{BTreeMap, HashSet};

use liftdec_core::lifting::{measure_parity_sampling, rate_report};
use liftdec_core::{
    seed, LiftSpec, LiftedCode, LinearCode, Rational, RegularGraph, SimplicialComplex, SwapOperator, WalkCollection,
};
use nalgebra::DMatrix;
use num_rational::Ratio;
use rand::Rng as _;

use crate::support::{parity_mask, walks, Verdict};

const SPECTRUM_TOL: f64 = 1e-9;
/// Singular values below this count as zero.
const ZERO_SV: f64 = 1e-7;
const PARITY_SLACK: f64 = 1e-9;

fn walk_matrix(g: &RegularGraph) -> DMatrix<f64> {
    let adj = g.adjacency_lists();
    let d = g.degree() as f64;
    DMatrix::from_fn(g.n(), g.n(), |r, c| if adj[r].contains(&c) { 1.0 / d } else { 0.0 })
}

fn nonzero_sorted(values: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.into_iter().filter(|&x| x > ZERO_SV).collect();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

/// Largest gap between two sorted spectra, infinite when their lengths differ.
fn spectrum_gap(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Swap operator rebuilt from scratch in the uniform `L²` normalization.
fn swap_from_walks(g: &RegularGraph, k1: usize, k2: usize) -> DMatrix<f64> {
    let adj = g.adjacency_lists();
    let (w1, w2) = (walks(adj, k1), walks(adj, k2));
    let entry = (g.degree() as f64).powi(-(k2 as i32));
    let scale = (w2.len() as f64 / w1.len() as f64).sqrt();
    DMatrix::from_fn(w1.len(), w2.len(), |r, c| {
        if adj[*w1[r].last().unwrap()].contains(&w2[c][0]) {
            entry * scale
        } else {
            0.0
        }
    })
}

fn graph_family() -> Vec<(usize, usize, u64)> {
    let shapes = [
        (6, 3),
        (8, 3),
        (10, 3),
        (12, 3),
        (6, 4),
        (8, 4),
        (10, 4),
        (12, 4),
        (9, 4),
        (7, 4),
        (11, 4),
    ];
    shapes
        .iter()
        .cycle()
        .take(24)
        .enumerate()
        .map(|(i, &(n, d))| (n, d, 100 + i as u64))
        .collect()
}

pub fn swap_spectrum() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut operators = 0;
    let mut bad = Vec::new();
    let family = graph_family();
    for &(n, d, s) in &family {
        let g = RegularGraph::random_regular(n, d, s).expect("graph");
        let reference = nonzero_sorted(walk_matrix(&g).singular_values().iter().copied());
        for k in 2..=4 {
            for k1 in 1..k {
                let k2 = k - k1;
                let core = nonzero_sorted(SwapOperator::new(&g, k1, k2).expect("swap").singular_values());
                let rebuilt = nonzero_sorted(swap_from_walks(&g, k1, k2).singular_values().iter().copied());
                let gap = spectrum_gap(&core, &reference).max(spectrum_gap(&rebuilt, &reference));
                worst = worst.max(gap);
                operators += 1;
                if gap > SPECTRUM_TOL {
                    bad.push(format!("n={n} d={d} seed={s} ({k1},{k2}) gap {gap:e}"));
                }
            }
        }
    }
    let v = Verdict::new(
        bad.is_empty(),
        format!(
            "{} graphs, {operators} operators, max singular-value gap {worst:.2e} (tol {SPECTRUM_TOL:e})",
            family.len()
        ),
    );
    bad.into_iter().take(5).fold(v, Verdict::note)
}

/// Second largest absolute eigenvalue of `A/d`.
fn lambda(g: &RegularGraph) -> f64 {
    let mut ev: Vec<f64> = walk_matrix(g).symmetric_eigenvalues().iter().map(|x| x.abs()).collect();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ev[1]
}

pub fn parity_sampling() -> Verdict {
    let mut graphs: Vec<(String, RegularGraph)> = Vec::new();
    for (i, &(n, d)) in [(8, 3), (10, 3), (12, 3), (8, 4), (10, 4), (12, 4)].iter().enumerate() {
        graphs.push((
            format!("random n={n} d={d}"),
            RegularGraph::random_regular(n, d, 200 + i as u64).unwrap(),
        ));
    }
    for n in [8, 10, 12] {
        graphs.push((format!("K{n}"), RegularGraph::complete(n).unwrap()));
    }
    let betas = [Rational::new(0, 1), Rational::new(1, 4), Rational::new(1, 2)];
    let (mut cases, mut nonvacuous, mut worst_margin) = (0, 0, f64::INFINITY);
    let mut bad = Vec::new();
    for (label, g) in &graphs {
        let n = g.n();
        let lam = lambda(g);
        for k in 2..=4 {
            let masks: Vec<u64> = walks(g.adjacency_lists(), k).iter().map(|w| parity_mask(w)).collect();
            let len = masks.len() as i64;
            // |Σ_s (-1)^{parity}| for every ground word.
            let sums: Vec<i64> = (0..1u64 << n)
                .map(|z| {
                    masks
                        .iter()
                        .map(|&m| 1 - 2 * ((z & m).count_ones() & 1) as i64)
                        .sum::<i64>()
                        .abs()
                })
                .collect();
            let spec = LiftSpec::xor(WalkCollection::enumerate(g, k).unwrap().collection().clone());
            for &b0 in &betas {
                let admissible = |z: u64| {
                    let w = z.count_ones() as i64;
                    (n as i64 - 2 * w).abs() * b0.denom() <= b0.numer() * n as i64
                };
                let Some(best) = (0..1u64 << n)
                    .filter(|&z| admissible(z))
                    .map(|z| sums[z as usize])
                    .max()
                else {
                    continue;
                };
                let brute = Rational::new(best, len);
                let core = measure_parity_sampling(&spec, b0, 1, 0, Some(lam)).unwrap();
                let bound = (*b0.numer() as f64 / *b0.denom() as f64 + 2.0 * lam).powi((k / 2) as i32);
                let measured = best as f64 / len as f64;
                cases += 1;
                if bound < 1.0 {
                    nonvacuous += 1;
                }
                worst_margin = worst_margin.min(bound - measured);
                if core.max_bias != brute || !core.exhaustive {
                    bad.push(format!(
                        "{label} k={k} β₀={b0}: core {} vs brute force {brute}",
                        core.max_bias
                    ));
                }
                if measured > bound + PARITY_SLACK {
                    bad.push(format!("{label} k={k} β₀={b0}: bias {measured} above bound {bound}"));
                }
            }
        }
    }
    let v = Verdict::new(
        bad.is_empty(),
        format!("{cases} exhaustive cases ({nonvacuous} with bound < 1), min bound - bias {worst_margin:.4}"),
    );
    bad.into_iter().take(5).fold(v, Verdict::note)
}

type Q = Ratio<i128>;

fn abs(x: Q) -> Q {
    if x < Q::from_integer(0) {
        -x
    } else {
        x
    }
}

fn k_subsets(t: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for last in (k - 1)..t {
        for mut s in k_subsets(last, k - 1) {
            s.push(last);
            out.push(s);
        }
    }
    out
}

pub fn near_independence() -> Verdict {
    let mut rng = seed::rng(3);
    let mut complexes: BTreeMap<(usize, usize), SimplicialComplex> = BTreeMap::new();
    let mut worst_ratio = 0.0f64;
    let mut bad = Vec::new();
    for trial in 0..100 {
        let t = rng.gen_range(6..=14);
        let k = rng.gen_range(1..=4usize);
        let f: Vec<Q> = (0..t)
            .map(|_| {
                if trial % 2 == 0 {
                    Q::from_integer(if rng.gen::<bool>() { 1 } else { -1 })
                } else {
                    Q::new(rng.gen_range(-7..=7), rng.gen_range(1..=7))
                }
            })
            .collect();
        let mu1 = f.iter().sum::<Q>() / Q::from_integer(t as i128);
        let faces = k_subsets(t, k);
        let prod = |s: &[usize]| s.iter().map(|&i| f[i]).product::<Q>();
        let muk = faces.iter().map(|s| prod(s)).sum::<Q>() / Q::from_integer(faces.len() as i128);
        // The same mean under the complex's own face measure.
        let cx = complexes
            .entry((t, k))
            .or_insert_with(|| SimplicialComplex::complete(t, k).unwrap());
        let (cfaces, weights) = cx.layer(k).unwrap();
        let mu_core: Q = cfaces
            .iter()
            .zip(weights)
            .map(|(s, w)| {
                let verts: Vec<usize> = s.iter().map(|&v| v as usize).collect();
                Q::new(*w.numer() as i128, *w.denom() as i128) * prod(&verts)
            })
            .sum();
        let norm = f.iter().map(|&x| abs(x)).max().unwrap();
        let lhs = abs(muk - mu1.pow(k as i32));
        let rhs = Q::new((k * k) as i128, t as i128) * norm.pow(k as i32);
        if mu_core != muk {
            bad.push(format!("trial {trial}: face-measure mean {mu_core} differs from {muk}"));
        }
        if lhs > rhs {
            bad.push(format!("trial {trial}: t={t} k={k} |μ_k - μ₁^k| = {lhs} > {rhs}"));
        }
        if rhs > Q::from_integer(0) {
            let r = lhs / rhs;
            worst_ratio = worst_ratio.max(*r.numer() as f64 / *r.denom() as f64);
        }
    }
    let v = Verdict::new(
        bad.is_empty(),
        format!("100 exact checks, max |μ_k - μ₁^k| / bound = {worst_ratio:.4}"),
    );
    bad.into_iter().take(5).fold(v, Verdict::note)
}

pub fn rates() -> Verdict {
    let mut checked = 0;
    let mut injective = 0;
    let mut bad = Vec::new();
    let mut audit = |label: String, code: &LinearCode, spec: LiftSpec, formula: Rational, count: usize| {
        let r1 = code.rate();
        let reported = rate_report(&spec, r1);
        let by_count = r1 * Rational::new(code.len() as i64, count as i64);
        checked += 1;
        if reported != formula || reported != by_count {
            bad.push(format!(
                "{label}: reported {reported}, formula {formula}, counted {by_count}"
            ));
        }
        // When the lift is injective the lifted code's rate is exactly m/|X(k)|.
        let lifted = LiftedCode::new(code.clone(), spec).unwrap();
        let distinct: HashSet<_> = lifted.codewords().unwrap().into_iter().map(|e| e.1).collect();
        if distinct.len() == 1 << code.dimension() {
            injective += 1;
            if reported != Rational::new(code.dimension() as i64, count as i64) {
                bad.push(format!(
                    "{label}: reported {reported} but the lifted code has rate {}/{count}",
                    code.dimension()
                ));
            }
        }
    };
    for (i, &(n, d, s)) in graph_family().iter().enumerate() {
        let g = RegularGraph::random_regular(n, d, s).unwrap();
        let code = LinearCode::random_with_distance(n, 2 + i % 3, Rational::new(1, n as i64), s, 1000).unwrap();
        for k in 1..=4 {
            let count = walks(g.adjacency_lists(), k).len();
            let spec = LiftSpec::xor(WalkCollection::enumerate(&g, k).unwrap().collection().clone());
            let formula = code.rate() / Rational::from_integer((d as i64).pow(k as u32 - 1));
            audit(format!("walks n={n} d={d} k={k}"), &code, spec, formula, count);
        }
    }
    for (i, &(t, top)) in [(5, 3), (6, 3), (7, 3), (8, 4), (6, 4), (7, 2)].iter().enumerate() {
        let code = LinearCode::random_with_distance(t, 2, Rational::new(1, t as i64), i as u64, 1000).unwrap();
        let cxs = [
            SimplicialComplex::complete(t, top).unwrap(),
            SimplicialComplex::noisy_complete(t, top, 0.6, i as u64).unwrap(),
        ];
        for cx in &cxs {
            for k in 1..=top {
                let flat = cx.flatten(k).unwrap();
                let count = flat.collection().tuples().count();
                let x1 = cx.flatten(1).unwrap();
                // |X(1)| as a set is the ground set.
                let ground = x1.collection().tuples().map(|s| s[0]).collect::<HashSet<_>>().len();
                let formula = code.rate() * Rational::new(ground as i64, count as i64);
                audit(
                    format!("faces t={t} top={top} k={k}"),
                    &code,
                    LiftSpec::xor(flat.collection().clone()),
                    formula,
                    count,
                );
            }
        }
    }
    let v = Verdict::new(
        bad.is_empty(),
        format!("{checked} instances exact, {injective} cross-checked against the lifted code's true rate"),
    );
    bad.into_iter().take(5).fold(v, Verdict::note)
}
