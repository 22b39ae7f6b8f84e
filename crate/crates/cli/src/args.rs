//! Shared argument groups.

use std::path::PathBuf;

use clap::Args;
use liftdec_core::decode::Admission;
use liftdec_core::ratio::parse_rational;
use liftdec_core::{DecodeConfig, Rational};

pub fn parse_q(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Index collection: walks of a graph file or a flattened level of a complex file.
#[derive(Args, Debug, Clone)]
pub struct CollArgs {
    #[arg(
        long,
        value_name = "FILE",
        conflicts_with = "complex",
        required_unless_present = "complex"
    )]
    pub graph: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub complex: Option<PathBuf>,
    /// Walk length (vertices) or face size.
    #[arg(long)]
    pub k: usize,
    /// Truth table of the local function, 2^k bits with input bit j at position j; XOR when absent.
    #[arg(long, value_name = "BITS")]
    pub g_table: Option<String>,
}

/// Numeric knobs of the decoding pipeline.
#[derive(Args, Debug, Clone, Default)]
pub struct Knobs {
    #[arg(long, value_parser = parse_q)]
    pub eps: Option<Rational>,
    #[arg(long, value_parser = parse_q)]
    pub eps0: Option<Rational>,
    #[arg(long, value_parser = parse_q)]
    pub theta: Option<Rational>,
    #[arg(long, value_parser = parse_q)]
    pub beta: Option<Rational>,
    #[arg(long, value_parser = parse_q)]
    pub ud_beta: Option<Rational>,
    #[arg(long, value_parser = parse_q)]
    pub kappa: Option<Rational>,
    #[arg(long, value_parser = parse_q)]
    pub mu: Option<Rational>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub slices: Option<usize>,
    /// Rounding depth L.
    #[arg(long = "l")]
    pub l: Option<usize>,
    #[arg(long)]
    pub degree: Option<usize>,
    /// Emit one majority word per slice instead of product samples.
    #[arg(long)]
    pub derandomize: bool,
    /// Use only slices passing both tensoriality tests, even when none do.
    #[arg(long)]
    pub strict: bool,
    #[arg(long, value_parser = parse_q)]
    pub base_radius: Option<Rational>,
    #[arg(long)]
    pub rounding_attempts: Option<usize>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
}

impl Knobs {
    pub fn config(&self, seed: u64) -> DecodeConfig {
        let d = DecodeConfig::default();
        let mut solver = d.solver.clone();
        solver.max_iterations = self.max_iterations.unwrap_or(solver.max_iterations);
        solver.abs_tol = self.abs_tol.unwrap_or(solver.abs_tol);
        solver.rel_tol = self.rel_tol.unwrap_or(solver.rel_tol);
        solver.rho = self.rho.unwrap_or(solver.rho);
        DecodeConfig {
            eps: self.eps.unwrap_or(d.eps),
            eps0: self.eps0.unwrap_or(d.eps0),
            theta: self.theta.unwrap_or(d.theta),
            beta: self.beta.unwrap_or(d.beta),
            kappa: self.kappa.or(d.kappa),
            mu: self.mu.or(d.mu),
            ud_beta: self.ud_beta.unwrap_or(d.ud_beta),
            samples: self.samples.unwrap_or(d.samples),
            slices: self.slices.unwrap_or(d.slices),
            l: self.l.or(d.l),
            degree: self.degree.or(d.degree),
            seed,
            derandomize: self.derandomize,
            admission: if self.strict {
                Admission::Strict
            } else {
                Admission::FallbackToAll
            },
            base_radius: self.base_radius.or(d.base_radius),
            rounding_attempts: self.rounding_attempts.unwrap_or(d.rounding_attempts),
            solver,
        }
    }
}
