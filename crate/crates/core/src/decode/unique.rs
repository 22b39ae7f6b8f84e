//! Unique decoding of lifted codes through the maximum-agreement program.

use std::collections::BTreeSet;

use crate::codes::LinearCode;
use crate::decode::rounding::{majority_word, propagation_rounding};
use crate::decode::{CoupledPair, DecodeConfig};
use crate::error::{invalid, Error, Result};
use crate::lifting::LiftSpec;
use crate::seed;
use crate::sos::{default_degree, Objective, Program, SolveReport};
use crate::words::{self, BinaryWord};
use crate::Rational;

#[derive(Clone, Debug)]
pub struct UniqueReport {
    pub radius: Rational,
    pub degree: usize,
    pub solve: SolveReport,
    pub rounding_failures: usize,
    /// Distinct base codewords reached by decoding rounded words and their complements.
    pub candidates: usize,
    pub best_distance: Option<Rational>,
}

#[derive(Clone, Debug)]
pub struct UniqueOutcome {
    pub codeword: Option<(u64, CoupledPair)>,
    pub report: UniqueReport,
}

pub fn unique_decode(code: &LinearCode, spec: &LiftSpec, y: &BinaryWord, cfg: &DecodeConfig) -> Result<UniqueOutcome> {
    cfg.validate()?;
    let n = spec.ground_size();
    if code.len() != n {
        return invalid(format!("base code length {} differs from ground size {n}", code.len()));
    }
    let radius = cfg.unique_radius();
    if radius <= Rational::from_integer(0) {
        return Err(Error::InvalidConfig(format!("unique radius {radius} is not positive")));
    }
    let base = cfg.base_decoder(code)?;
    let coll = spec.collection();
    let l = cfg.rounding_depth(coll.k());
    let degree = cfg.degree.unwrap_or_else(|| default_degree(n, coll.k(), l));
    let program = Program::new(spec, y.clone(), degree, Objective::MaximizeAgreement)?;
    let (pe, solve) = program.solve(&cfg.solver).map_err(|e| match e {
        Error::Infeasible(m) => Error::ResourceLimit(m),
        other => other,
    })?;

    let mut rounded: Vec<BinaryWord> = vec![majority_word(&pe)];
    let mut rounding_failures = 0;
    for attempt in 0..cfg.rounding_attempts {
        let mut rng = seed::stage_rng(cfg.seed, "unique-rounding", attempt as u64);
        match propagation_rounding(&pe, coll, l, &mut rng) {
            Ok(r) => {
                rounded.push(majority_word(&r.conditioned));
                rounded.push(r.assignment);
            }
            Err(Error::InvalidCondition(_)) => rounding_failures += 1,
            Err(e) => return Err(e),
        }
    }
    let mut found: BTreeSet<u64> = BTreeSet::new();
    for z in &rounded {
        for w in [z.clone(), z.negated()] {
            if let Some(c) = base.decode_mask(w.to_mask()?) {
                found.insert(c);
            }
        }
    }
    let mut best: Option<(Rational, u64)> = None;
    for &c in &found {
        let d = words::distance(&spec.lift_mask(c), y)?;
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, c));
        }
    }
    let codeword = match best {
        Some((d, c)) if d < radius => Some((c, CoupledPair::new(spec, BinaryWord::from_mask(n, c))?)),
        _ => None,
    };
    Ok(UniqueOutcome {
        codeword,
        report: UniqueReport {
            radius,
            degree: program.degree(),
            solve,
            rounding_failures,
            candidates: found.len(),
            best_distance: best.map(|b| b.0),
        },
    })
}
