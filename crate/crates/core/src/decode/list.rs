//! List decoding: minimize `Ψ` under an agreement constraint, retrieve a cover
//! from sampled slices, purify it with the base decoder, and filter exactly.

use std::collections::{BTreeSet, HashSet};

use crate::codes::LinearCode;
use crate::decode::rounding::{majority_word, product_sample, sample_slice};
use crate::decode::{Admission, CoupledList, CoupledPair, DecodeConfig, Radius, Tag};
use crate::decoder::UniqueDecoder;
use crate::error::{invalid, Error, Result};
use crate::lifting::LiftSpec;
use crate::ratio::to_f64;
use crate::seed;
use crate::sos::tensorial::{classify, pair_panel, summarize, TensorialityReport};
use crate::sos::{default_degree, Objective, Program, PseudoExpectation, SolveReport};
use crate::words::{self, BinaryWord};

#[derive(Clone, Debug, Default)]
pub struct ListReport {
    pub threshold: f64,
    pub degree: usize,
    pub solve: Option<SolveReport>,
    pub infeasible: Option<String>,
    pub slices: usize,
    pub failed_slices: usize,
    pub admitted: usize,
    pub fallback: bool,
    pub tensoriality: Option<TensorialityReport>,
    pub cover: usize,
    pub purified: usize,
}

#[derive(Clone, Debug)]
pub struct ListOutcome {
    pub list: CoupledList,
    pub report: ListReport,
    /// Solved pseudo-expectation, absent when the program was infeasible.
    pub solution: Option<PseudoExpectation>,
}

struct Cover {
    list: CoupledList,
    slices: usize,
    failed: usize,
    admitted: usize,
    fallback: bool,
    tensoriality: TensorialityReport,
}

fn retrieve(pe: &PseudoExpectation, spec: &LiftSpec, cfg: &DecodeConfig) -> Result<Cover> {
    let coll = spec.collection();
    let l = cfg.rounding_depth(coll.k());
    let mu = to_f64(cfg.mu());
    let panel = pair_panel(coll);
    let mut sampled = Vec::new();
    let mut failed = 0;
    for i in 0..cfg.slices {
        let mut rng = seed::stage_rng(cfg.seed, "slice", i as u64);
        match sample_slice(pe, coll, l, &mut rng) {
            Ok((_, cond)) => {
                let stats = classify(&cond, coll, &panel, mu)?;
                sampled.push((i, cond, stats));
            }
            Err(Error::InvalidCondition(_)) => failed += 1,
            Err(e) => return Err(e),
        }
    }
    let stats: Vec<_> = sampled.iter().map(|s| s.2).collect();
    let admitted = stats.iter().filter(|s| s.admissible()).count();
    let fallback = admitted == 0 && cfg.admission == Admission::FallbackToAll;
    let mut list = CoupledList::default();
    let mut seen: HashSet<BinaryWord> = HashSet::new();
    for (i, cond, st) in &sampled {
        if !(st.admissible() || fallback) {
            continue;
        }
        let mut emit = |z: BinaryWord, round: usize| -> Result<()> {
            if seen.insert(z.clone()) {
                list.push(CoupledPair::new(spec, z)?, Tag { slice: *i, round });
            }
            Ok(())
        };
        if cfg.derandomize {
            emit(majority_word(cond), 0)?;
        } else {
            let mut rng = seed::stage_rng(cfg.seed, "retrieval", *i as u64);
            for round in 0..cfg.samples {
                emit(product_sample(cond, &mut rng), round)?;
            }
        }
    }
    Ok(Cover {
        list,
        slices: sampled.len(),
        failed,
        admitted,
        fallback,
        tensoriality: summarize(&stats, mu),
    })
}

/// Samples slices of `pe` and couples the rounded words with their lifts.
pub fn cover_retrieval(pe: &PseudoExpectation, spec: &LiftSpec, cfg: &DecodeConfig) -> Result<CoupledList> {
    Ok(retrieve(pe, spec, cfg)?.list)
}

/// Decodes every ground word of the cover and its complement; keeps each codeword once.
pub fn cover_purification(cover: &CoupledList, spec: &LiftSpec, base: &UniqueDecoder) -> Result<CoupledList> {
    let mut out = CoupledList::default();
    let mut seen = BTreeSet::new();
    for (pair, tag) in cover.pairs.iter().zip(&cover.tags) {
        for w in [pair.z.clone(), pair.z.negated()] {
            if let Some(c) = base.decode_mask(w.to_mask()?) {
                if seen.insert(c) {
                    out.push(
                        CoupledPair::new(spec, BinaryWord::from_mask(spec.ground_size(), c))?,
                        *tag,
                    );
                }
            }
        }
    }
    Ok(out)
}

pub fn list_decode(
    code: &LinearCode,
    spec: &LiftSpec,
    y: &BinaryWord,
    radius: Radius,
    cfg: &DecodeConfig,
) -> Result<ListOutcome> {
    cfg.validate()?;
    let n = spec.ground_size();
    if code.len() != n {
        return invalid(format!("base code length {} differs from ground size {n}", code.len()));
    }
    if y.len() != spec.len() {
        return invalid("received word length differs from |X(k)|");
    }
    let base = cfg.base_decoder(code)?;
    let k = spec.collection().k();
    let degree = cfg
        .degree
        .unwrap_or_else(|| default_degree(n, k, cfg.rounding_depth(k)));
    let threshold = (1.0 - 2.0 * radius.value()).max(0.0);
    let mut report = ListReport {
        threshold,
        degree,
        ..ListReport::default()
    };
    let program = Program::new(spec, y.clone(), degree, Objective::MinimizePsi { threshold })?;
    report.degree = program.degree();
    let pe = match program.solve(&cfg.solver) {
        Ok((pe, solve)) => {
            report.solve = Some(solve);
            pe
        }
        Err(Error::Infeasible(msg)) => {
            report.infeasible = Some(msg);
            return Ok(ListOutcome {
                list: CoupledList::default(),
                report,
                solution: None,
            });
        }
        Err(e) => return Err(e),
    };
    let cover = retrieve(&pe, spec, cfg)?;
    report.slices = cover.slices;
    report.failed_slices = cover.failed;
    report.admitted = cover.admitted;
    report.fallback = cover.fallback;
    report.tensoriality = Some(cover.tensoriality);
    report.cover = cover.list.len();
    let purified = cover_purification(&cover.list, spec, &base)?;
    report.purified = purified.len();

    Ok(ListOutcome {
        list: final_filter(purified, y, radius)?,
        report,
        solution: Some(pe),
    })
}

/// Pairs whose lift is within `radius` of `y` (exact distances), sorted by ground mask.
pub fn final_filter(list: CoupledList, y: &BinaryWord, radius: Radius) -> Result<CoupledList> {
    let mut kept: Vec<(u64, CoupledPair, Tag)> = Vec::new();
    for (pair, tag) in list.pairs.into_iter().zip(list.tags) {
        if radius.admits(words::distance(&pair.y, y)?) {
            kept.push((pair.z.to_mask()?, pair, tag));
        }
    }
    kept.sort_by_key(|e| e.0);
    let mut out = CoupledList::default();
    for (_, pair, tag) in kept {
        out.push(pair, tag);
    }
    Ok(out)
}
