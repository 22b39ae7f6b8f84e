//! Propagation rounding: condition on the values of a few random tuples, then
//! sample every coordinate independently from its conditioned marginal.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng as _;

use crate::collection::{vertex_mask, Collection};
use crate::error::{Error, Result};
use crate::seed::Rng;
use crate::sos::pseudo::{mask_vertices, scatter, PseudoExpectation};
use crate::words::BinaryWord;

/// Attempts at drawing a conditioning event of positive probability.
pub const MAX_RESAMPLES: usize = 64;

/// A conditioning event `Z_S = σ` built from `m` tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice {
    pub m: usize,
    pub tuples: Vec<usize>,
    pub set: u64,
    pub sigma: u64,
}

#[derive(Clone, Debug)]
pub struct Rounded {
    pub slice: Slice,
    pub conditioned: PseudoExpectation,
    pub assignment: BinaryWord,
}

fn check(pe: &PseudoExpectation, coll: &Collection, l: usize) -> Result<()> {
    let k = coll.k();
    if l < k {
        return Err(Error::InvalidConfig(format!("rounding depth L={l} is below k={k}")));
    }
    if coll.is_empty() {
        return Err(Error::InvalidInput("empty collection".into()));
    }
    if pe.n() != coll.ground_size() {
        return Err(Error::InvalidInput(
            "pseudo-expectation and collection have different ground sets".into(),
        ));
    }
    let needed = (l + 2 * k).min(pe.n());
    if pe.degree() < needed {
        return Err(Error::InvalidInput(format!(
            "degree {} is below L + 2k = {needed}",
            pe.degree()
        )));
    }
    Ok(())
}

/// Draws `m ∈ {1..L/k}`, `m` tuples, and `σ` from the local distribution on their union.
pub fn sample_slice(
    pe: &PseudoExpectation,
    coll: &Collection,
    l: usize,
    rng: &mut Rng,
) -> Result<(Slice, PseudoExpectation)> {
    check(pe, coll, l)?;
    let k = coll.k();
    for _ in 0..MAX_RESAMPLES {
        let m = rng.gen_range(1..=l / k);
        let tuples: Vec<usize> = (0..m).map(|_| rng.gen_range(0..coll.len())).collect();
        let set = tuples.iter().fold(0u64, |acc, &t| acc | vertex_mask(coll.tuple(t)));
        let dist = pe.local_distribution(set)?;
        let local = WeightedIndex::new(&dist)
            .map_err(|e| Error::InvalidCondition(e.to_string()))?
            .sample(rng) as u64;
        let sigma = scatter(&mask_vertices(set), local);
        match pe.condition(set, sigma) {
            Ok(cond) => return Ok((Slice { m, tuples, set, sigma }, cond)),
            Err(Error::InvalidCondition(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::InvalidCondition(format!(
        "no positive-probability slice in {MAX_RESAMPLES} draws"
    )))
}

/// One sample from `⊗_i {Z_i}`.
pub fn product_sample(pe: &PseudoExpectation, rng: &mut Rng) -> BinaryWord {
    BinaryWord::from_bools((0..pe.n()).map(|i| rng.gen::<f64>() >= pe.plus_probability(i)))
}

/// Most likely value of every coordinate; ties go to `+1`.
pub fn majority_word(pe: &PseudoExpectation) -> BinaryWord {
    BinaryWord::from_bools((0..pe.n()).map(|i| pe.plus_probability(i) < 0.5))
}

pub fn propagation_rounding(pe: &PseudoExpectation, coll: &Collection, l: usize, rng: &mut Rng) -> Result<Rounded> {
    let (slice, conditioned) = sample_slice(pe, coll, l, rng)?;
    let assignment = product_sample(&conditioned, rng);
    Ok(Rounded {
        slice,
        conditioned,
        assignment,
    })
}
