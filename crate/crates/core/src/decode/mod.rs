//! Decoding pipeline: propagation rounding, unique decoding, the list decoder
//! (SOS, cover retrieval, purification) and the direct-product reduction.

pub mod list;
pub mod product;
pub mod rounding;
pub mod unique;

use num_traits::Zero;

use crate::codes::LinearCode;
use crate::decoder::{Strategy, UniqueDecoder};
use crate::error::{Error, Result};
use crate::lifting::LiftSpec;
use crate::ratio::to_f64;
use crate::sos::SolverSettings;
use crate::words::BinaryWord;
use crate::Rational;

pub use list::{cover_purification, cover_retrieval, final_filter, list_decode, ListOutcome, ListReport};
pub use product::{product_interval, product_list_decode, reduce_product_to_sum, ProductOutcome};
pub use rounding::{majority_word, product_sample, propagation_rounding, sample_slice, Rounded, Slice};
pub use unique::{unique_decode, UniqueOutcome, UniqueReport};

/// What cover retrieval does with the sampled slices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Admission {
    /// Only slices in `K_μ ∩ P_μ`.
    Strict,
    /// Admitted slices if any, otherwise every sampled slice (flagged in the report).
    FallbackToAll,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeConfig {
    pub eps: Rational,
    pub eps0: Rational,
    pub theta: Rational,
    /// List-stage slack in the fractional-to-integral step.
    pub beta: Rational,
    pub kappa: Option<Rational>,
    pub mu: Option<Rational>,
    /// Unique decoding returns words strictly within `1/4 - ε/2 - ud_beta`.
    pub ud_beta: Rational,
    /// Product samples drawn per admitted slice.
    pub samples: usize,
    pub slices: usize,
    /// Rounding depth `L`; defaults to `k`.
    pub l: Option<usize>,
    /// SOS degree; defaults to `L + 2k` rounded up to even, capped at `n`.
    pub degree: Option<usize>,
    pub seed: u64,
    pub derandomize: bool,
    pub admission: Admission,
    /// Base decoder radius; defaults to the largest radius below half the distance.
    pub base_radius: Option<Rational>,
    pub rounding_attempts: usize,
    pub solver: SolverSettings,
}

impl Default for DecodeConfig {
    fn default() -> Self {
        Self {
            eps: Rational::new(1, 25),
            eps0: Rational::new(1, 5),
            theta: Rational::new(1, 2),
            beta: Rational::new(1, 4),
            kappa: None,
            mu: None,
            ud_beta: Rational::new(1, 50),
            samples: 64,
            slices: 200,
            l: None,
            degree: None,
            seed: 0,
            derandomize: false,
            admission: Admission::FallbackToAll,
            base_radius: None,
            rounding_attempts: 16,
            solver: SolverSettings::default(),
        }
    }
}

impl DecodeConfig {
    pub fn validate(&self) -> Result<()> {
        let zero = Rational::zero();
        let half = Rational::new(1, 2);
        let cfg = |m: String| Err(Error::InvalidConfig(m));
        if !(zero < self.eps && self.eps < self.eps0 && self.eps0 < half) {
            return cfg(format!("need 0 < ε < ε₀ < 1/2, got ε={} ε₀={}", self.eps, self.eps0));
        }
        if !(zero < self.theta && self.theta < Rational::from_integer(1)) {
            return cfg(format!("θ = {} outside (0, 1)", self.theta));
        }
        if self.beta < zero || self.ud_beta < zero {
            return cfg("β must be non-negative".into());
        }
        if self.kappa.is_some_and(|k| k <= zero) || self.mu.is_some_and(|m| m <= zero) {
            return cfg("κ and μ must be positive".into());
        }
        if self.l == Some(0) {
            return cfg("L must be positive".into());
        }
        Ok(())
    }

    pub fn kappa(&self) -> Rational {
        self.kappa
            .unwrap_or((Rational::from_integer(4) - self.theta) * self.eps)
    }

    pub fn mu(&self) -> Rational {
        self.mu.unwrap_or(self.kappa() * self.theta / 2)
    }

    pub fn rounding_depth(&self, k: usize) -> usize {
        self.l.unwrap_or(k)
    }

    /// `1/4 - ε/2 - ud_beta`.
    pub fn unique_radius(&self) -> Rational {
        Rational::new(1, 4) - self.eps / 2 - self.ud_beta
    }

    pub fn base_decoder(&self, code: &LinearCode) -> Result<UniqueDecoder> {
        let build = |strategy| match self.base_radius {
            Some(r) => UniqueDecoder::new(code.clone(), r, strategy),
            None => UniqueDecoder::half_distance(code.clone(), strategy),
        };
        match build(Strategy::SyndromeTable) {
            Err(Error::ResourceLimit(_)) => build(Strategy::BruteForce),
            other => other,
        }
    }
}

/// Decoding radius with the comparison it implies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Radius {
    /// `1/2 - √ε`, compared exactly.
    SqrtEps(Rational),
    Exact(Rational),
    /// An irrational radius; compared in floating point with `1e-12` slack.
    Float(f64),
}

impl Radius {
    pub fn value(&self) -> f64 {
        match *self {
            Radius::SqrtEps(eps) => 0.5 - to_f64(eps).sqrt(),
            Radius::Exact(r) => to_f64(r),
            Radius::Float(r) => r,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Radius::Float(_))
    }

    pub fn admits(&self, distance: Rational) -> bool {
        match *self {
            Radius::SqrtEps(eps) => {
                let gap = Rational::new(1, 2) - distance;
                gap >= Rational::zero() && gap * gap >= eps
            }
            Radius::Exact(r) => distance <= r,
            Radius::Float(r) => to_f64(distance) <= r + 1e-12,
        }
    }
}

/// A ground word with its lift.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoupledPair {
    pub z: BinaryWord,
    pub y: BinaryWord,
}

impl CoupledPair {
    pub fn new(spec: &LiftSpec, z: BinaryWord) -> Result<Self> {
        let y = spec.lift_word(&z)?;
        Ok(Self { z, y })
    }

    pub fn is_coupled(&self, spec: &LiftSpec) -> bool {
        spec.lift_word(&self.z).is_ok_and(|y| y == self.y)
    }
}

/// Where a pair of a coupled list came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Tag {
    pub slice: usize,
    pub round: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CoupledList {
    pub pairs: Vec<CoupledPair>,
    pub tags: Vec<Tag>,
}

impl CoupledList {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn push(&mut self, pair: CoupledPair, tag: Tag) {
        self.pairs.push(pair);
        self.tags.push(tag);
    }

    /// Ground words as masks, in list order.
    pub fn masks(&self) -> Vec<u64> {
        self.pairs.iter().filter_map(|p| p.z.to_mask().ok()).collect()
    }
}
