//! Criteria 7, 8 and 9: unique, list and direct-product decoding against brute force.

use std::collections::BTreeMap;

use liftdec_core::decode::{list_decode, product_list_decode, reduce_product_to_sum, unique_decode};
use liftdec_core::lifting::lift_dprod;
use liftdec_core::oracles::{oracle_list, oracle_ml, oracle_product_list};
use liftdec_core::{
    seed, words, BinaryWord, DecodeConfig, LiftSpec, LiftedCode, LinearCode, OracleBudget, ProductWord, Radius,
    Rational, RegularGraph, SimplicialComplex, WalkCollection,
};
use rand::seq::index::sample;
use rand::Rng as _;

use crate::support::{fmt_rate, record_solve, Verdict};

const UNIQUE_RATE: f64 = 0.95;
const LIST_RATE: f64 = 0.90;
const PRODUCT_RATE: f64 = 0.90;

struct Setup {
    label: String,
    code: LinearCode,
    spec: LiftSpec,
}

fn walk_setup(n: usize, k: usize, m: usize, dist: Rational, s: u64) -> Setup {
    let g = RegularGraph::random_regular(n, 3, s).unwrap();
    let spec = LiftSpec::xor(WalkCollection::enumerate(&g, k).unwrap().collection().clone());
    let code = LinearCode::random_with_distance(n, m, dist, s, 20_000).unwrap();
    Setup {
        label: format!("n={n} k={k} seed={s}"),
        code,
        spec,
    }
}

fn flip_random(y: &mut BinaryWord, count: usize, rng: &mut seed::Rng) {
    for i in sample(rng, y.len(), count) {
        y.flip(i);
    }
}

pub fn unique_decoding() -> Verdict {
    let mut plan = Vec::new();
    for i in 0..30 {
        plan.push(walk_setup(8, 2, 3, Rational::new(3, 8), 700 + i));
    }
    for i in 0..10 {
        plan.push(walk_setup(10, 2, 3, Rational::new(3, 10), 800 + i));
    }
    for i in 0..10 {
        plan.push(walk_setup(6, 3, 2, Rational::new(1, 3), 900 + i));
    }
    let cfg = DecodeConfig::default();
    let radius = cfg.unique_radius();
    let mut rng = seed::rng(7);
    let mut hits = 0;
    let mut wrong = 0;
    let mut bad = Vec::new();
    for setup in &plan {
        let lifted = LiftedCode::new(setup.code.clone(), setup.spec.clone()).unwrap();
        let len = setup.spec.len();
        // Largest flip count strictly inside the radius.
        let below = (radius * len as i64).ceil().to_integer() as usize - 1;
        let c = setup.code.encode(rng.gen_range(0..1u64 << setup.code.dimension()));
        let mut y = setup.spec.lift_mask(c);
        flip_random(&mut y, rng.gen_range(0..=below), &mut rng);
        let out = match unique_decode(&setup.code, &setup.spec, &y, &cfg) {
            Ok(o) => o,
            Err(e) => {
                bad.push(format!("{}: decoder error {e}", setup.label));
                continue;
            }
        };
        let (d, arg) = oracle_ml(&lifted, &y, &OracleBudget::default()).unwrap();
        let expected: Vec<&BinaryWord> = if d < radius {
            arg.iter().map(|e| &e.1).collect()
        } else {
            Vec::new()
        };
        let ok = match &out.codeword {
            Some((_, pair)) => {
                let got = words::distance(&pair.y, &y).unwrap();
                if got >= radius || got != d {
                    wrong += 1;
                    bad.push(format!(
                        "{}: returned a word at distance {got} (nearest {d})",
                        setup.label
                    ));
                }
                expected.contains(&&pair.y)
            }
            None => expected.is_empty(),
        };
        if ok {
            hits += 1;
        } else {
            bad.push(format!(
                "{}: oracle distance {d}, decoder best {:?}, {} candidates",
                setup.label, out.report.best_distance, out.report.candidates
            ));
        }
    }
    let rate = hits as f64 / plan.len() as f64;
    let v = Verdict::new(
        rate >= UNIQUE_RATE && wrong == 0,
        format!(
            "{} agree with maximum likelihood (need {:.0}%), {wrong} wrong codewords, radius {radius}",
            fmt_rate(hits, plan.len()),
            100.0 * UNIQUE_RATE
        ),
    );
    bad.into_iter().take(8).fold(v, Verdict::note)
}

/// A received word within `radius` of every planted lift, or `None` when the plants are too far apart.
fn plant(lifts: &[BinaryWord], radius: Radius, rng: &mut seed::Rng) -> Option<BinaryWord> {
    let len = lifts[0].len();
    let bits: Vec<u8> = (0..len)
        .map(|i| {
            let ones = lifts.iter().filter(|w| w.bit(i) == 1).count();
            match (2 * ones).cmp(&lifts.len()) {
                std::cmp::Ordering::Greater => 1,
                std::cmp::Ordering::Less => 0,
                std::cmp::Ordering::Equal => rng.gen_range(0..2),
            }
        })
        .collect();
    let mut y = BinaryWord::from_bits(bits).unwrap();
    let admitted = |y: &BinaryWord| lifts.iter().all(|w| radius.admits(words::distance(w, y).unwrap()));
    if !admitted(&y) {
        return None;
    }
    // Extra noise, kept only while every plant stays inside the radius.
    for _ in 0..rng.gen_range(0..len / 4) {
        let i = rng.gen_range(0..len);
        y.flip(i);
        if !admitted(&y) {
            y.flip(i);
        }
    }
    Some(y)
}

pub fn list_decoding() -> Verdict {
    let eps = Rational::new(1, 25);
    let radius = Radius::SqrtEps(eps);
    let mut plan = Vec::new();
    for i in 0..15 {
        plan.push(walk_setup(8, 2, 3, Rational::new(3, 8), 1000 + i));
    }
    // Distance 3 so that purification corrects one error.
    for i in 0..10 {
        plan.push(walk_setup(6, 3, 2, Rational::new(1, 2), 1100 + i));
    }
    let cfg = DecodeConfig::default();
    let mut rng = seed::rng(8);
    let (mut equal, mut subset, mut johnson_ok, mut johnson_applies) = (0, 0, 0, 0);
    let (mut fallback, mut admitted_any, mut cover_frac) = (0, 0, 0.0);
    let mut derand = (0, 0);
    let mut bad = Vec::new();
    for (idx, setup) in plan.iter().enumerate() {
        let lifted = LiftedCode::new(setup.code.clone(), setup.spec.clone()).unwrap();
        let dim = setup.code.dimension();
        let y = loop {
            let planted = 1 + rng.gen_range(0..3.min(1 << dim));
            let msgs = sample(&mut rng, 1 << dim, planted);
            let lifts: Vec<BinaryWord> = msgs
                .iter()
                .map(|m| setup.spec.lift_mask(setup.code.encode(m as u64)))
                .collect();
            if let Some(y) = plant(&lifts, radius, &mut rng) {
                break y;
            }
        };
        let oracle = oracle_list(&lifted, &y, radius, &OracleBudget::default()).unwrap();
        let out = match list_decode(&setup.code, &setup.spec, &y, radius, &cfg) {
            Ok(o) => o,
            Err(e) => {
                bad.push(format!("{}: decoder error {e}", setup.label));
                continue;
            }
        };
        if let Some(s) = &out.report.solve {
            record_solve(format!("criterion 8 {}", setup.label), s.psi, s.agreement);
        }
        let got = out.list.masks();
        let want = oracle.masks();
        if got == want {
            equal += 1;
        } else {
            bad.push(format!(
                "{}: list {got:?} vs oracle {want:?} (cover {}, purified {})",
                setup.label, out.report.cover, out.report.purified
            ));
        }
        if got.iter().all(|m| want.contains(m)) {
            subset += 1;
        }
        let j = oracle.johnson.as_ref().unwrap();
        johnson_applies += usize::from(j.applies);
        johnson_ok += usize::from(j.holds);
        fallback += usize::from(out.report.fallback);
        admitted_any += usize::from(out.report.admitted > 0);
        cover_frac += out.report.cover as f64 / (1u64 << setup.spec.ground_size()) as f64;
        if idx % 5 == 0 {
            let d_cfg = DecodeConfig {
                derandomize: true,
                ..cfg.clone()
            };
            if let Ok(o) = list_decode(&setup.code, &setup.spec, &y, radius, &d_cfg) {
                derand.0 += usize::from(o.list.masks() == want);
            }
            derand.1 += 1;
        }
    }
    let total = plan.len();
    let pass = equal as f64 >= LIST_RATE * total as f64 && subset == total && johnson_ok == total;
    let v = Verdict::new(
        pass,
        format!(
            "list = oracle {} (need {:.0}%), list ⊆ oracle {}, Johnson audit {} ({} applicable)",
            fmt_rate(equal, total),
            100.0 * LIST_RATE,
            fmt_rate(subset, total),
            fmt_rate(johnson_ok, total),
            johnson_applies
        ),
    )
    .note(format!(
        "slices admitted on {admitted_any}/{total} instances, fallback on {fallback}; mean cover {:.1}% of 2^n",
        100.0 * cover_frac / total as f64
    ))
    .note(format!(
        "derandomized retrieval matches the oracle on {}",
        fmt_rate(derand.0, derand.1)
    ));
    bad.into_iter().take(8).fold(v, Verdict::note)
}

fn combinations(ell: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    (k - 1..ell)
        .flat_map(|last| {
            combinations(last, k - 1).into_iter().map(move |mut c| {
                c.push(last);
                c
            })
        })
        .collect()
}

/// Multiset of (face, bit) entries of the reduction, computed from the top faces directly.
fn reduced_entries(faces: &[Vec<u32>], x: &ProductWord, k: usize) -> BTreeMap<(Vec<u32>, u8), usize> {
    let mut out = BTreeMap::new();
    for (face, &sym) in faces.iter().zip(&x.symbols) {
        for pos in combinations(face.len(), k) {
            let sub: Vec<u32> = pos.iter().map(|&p| face[p]).collect();
            let bit = pos.iter().map(|&p| (sym >> p) & 1).sum::<u64>() % 2;
            *out.entry((sub, bit as u8)).or_insert(0) += 1;
        }
    }
    out
}

pub fn product_reduction() -> Verdict {
    let mut rng = seed::rng(9);
    let mut bad = Vec::new();
    let mut checked = 0;
    for trial in 0..100 {
        let t = rng.gen_range(4..=8);
        let ell = rng.gen_range(2..=4.min(t));
        let cx = if trial % 2 == 0 {
            SimplicialComplex::complete(t, ell).unwrap()
        } else {
            match SimplicialComplex::noisy_complete(t, ell, 0.7, trial) {
                Ok(c) => c,
                Err(_) => SimplicialComplex::complete(t, ell).unwrap(),
            }
        };
        let top = cx.flatten(ell).unwrap();
        let faces: Vec<Vec<u32>> = top.collection().tuples().map(<[u32]>::to_vec).collect();
        let x = ProductWord {
            ell,
            symbols: (0..faces.len()).map(|_| rng.gen_range(0..1u64 << ell)).collect(),
        };
        let k = rng.gen_range(1..=ell);
        let reduced = top.product_reduction(k).unwrap();
        let y = reduce_product_to_sum(&x, reduced.collection()).unwrap();
        let mut core = BTreeMap::new();
        for (i, tuple) in reduced.collection().tuples().enumerate() {
            *core.entry((tuple.to_vec(), y.bit(i))).or_insert(0) += 1;
        }
        checked += 1;
        if core != reduced_entries(&faces, &x, k) {
            bad.push(format!("reduction mismatch at t={t} ℓ={ell} k={k}"));
        }
    }

    let product_eps = Rational::new(1, 2);
    let cfg = DecodeConfig {
        slices: 40,
        ..DecodeConfig::default()
    };
    let (mut equal, mut subset, mut total) = (0, 0, 0);
    // C′ = 1 puts the level radius above 1/2 (threshold 0); C′ = 6 gives radius 3/8.
    for i in 0..18u64 {
        let c_prime = if i < 12 { 1.0 } else { 6.0 };
        let t = 6 + (i % 3) as usize;
        let ell = 3 + (i % 2) as usize;
        let top = SimplicialComplex::complete(t, ell).unwrap().flatten(ell).unwrap();
        let code = LinearCode::random_with_distance(t, 2, Rational::new(1, 3), 1200 + i, 20_000).unwrap();
        let c = code.encode(rng.gen_range(1..4));
        let mut x = lift_dprod(top.collection(), &BinaryWord::from_mask(t, c)).unwrap();
        let corrupt = ((rng.gen_range(0.1..0.45)) * x.symbols.len() as f64) as usize;
        for p in sample(&mut rng, x.symbols.len(), corrupt) {
            x.symbols[p] ^= rng.gen_range(1..1u64 << ell);
        }
        let oracle: Vec<u64> = oracle_product_list(&code, top.collection(), &x, product_eps, &OracleBudget::default())
            .unwrap()
            .into_iter()
            .map(|e| e.0)
            .collect();
        total += 1;
        let out = match product_list_decode(&code, &top, &x, product_eps, c_prime, &cfg) {
            Ok(o) => o,
            Err(e) => {
                bad.push(format!("product t={t} ℓ={ell} C′={c_prime}: decoder error {e}"));
                continue;
            }
        };
        for (k, rep) in &out.levels {
            if let Some(s) = &rep.solve {
                record_solve(format!("criterion 9 t={t} ℓ={ell} level {k}"), s.psi, s.agreement);
            }
        }
        let got: Vec<u64> = out.words.iter().map(|e| e.0).collect();
        equal += usize::from(got == oracle);
        subset += usize::from(got.iter().all(|m| oracle.contains(m)));
        if got != oracle {
            bad.push(format!(
                "product t={t} ℓ={ell} C′={c_prime}: list {got:?} vs oracle {oracle:?}"
            ));
        }
    }
    let reduction_ok = !bad.iter().any(|b| b.starts_with("reduction"));
    let pass = reduction_ok && equal as f64 >= PRODUCT_RATE * total as f64 && subset == total;
    let v = Verdict::new(
        pass,
        format!(
            "{checked} reductions checked ({}), product list = oracle {} (need {:.0}%), ⊆ oracle {}",
            if reduction_ok { "all equal" } else { "mismatch" },
            fmt_rate(equal, total),
            100.0 * PRODUCT_RATE,
            fmt_rate(subset, total)
        ),
    );
    bad.into_iter().take(8).fold(v, Verdict::note)
}
