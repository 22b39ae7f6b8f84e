//! Generators: graphs, complexes and codes.

use clap::{Args, ValueEnum};
use liftdec_core::{LinearCode, Rational, RegularGraph, SimplicialComplex};

use crate::args::parse_q;
use crate::report::Report;
use crate::{CliResult, Ctx, Output};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphKind {
    Random,
    Complete,
    Cycle,
}

#[derive(Args, Debug)]
pub struct GenGraph {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long, value_enum, default_value_t = GraphKind::Random)]
    pub kind: GraphKind,
}

pub fn gen_graph(a: &GenGraph, ctx: &Ctx) -> CliResult<Output> {
    let g = match a.kind {
        GraphKind::Random => RegularGraph::random_regular(a.n, a.d, ctx.seed)?,
        GraphKind::Complete if a.d + 1 == a.n => RegularGraph::complete(a.n)?,
        GraphKind::Cycle if a.d == 2 => RegularGraph::cycle(a.n)?,
        _ => return crate::usage(format!("no {:?} graph with n={} d={}", a.kind, a.n, a.d)),
    };
    let exp = g.sigma2()?;
    let mut r = Report::new("gen-graph");
    r.put("n", g.n());
    r.put("d", g.degree());
    r.put("seed", ctx.seed);
    r.float("sigma2", exp.sigma2);
    r.put("connected", exp.connected);
    Ok(Output::with_artifact(r, g.to_edge_file()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ComplexKind {
    Complete,
    Noisy,
}

#[derive(Args, Debug)]
pub struct GenComplex {
    #[arg(value_enum)]
    pub kind: ComplexKind,
    /// Ground set size.
    #[arg(long)]
    pub t: usize,
    /// Top face size.
    #[arg(long)]
    pub d: usize,
    /// Probability of keeping each top face (noisy only).
    #[arg(long, default_value_t = 0.8)]
    pub keep: f64,
}

pub fn gen_complex(a: &GenComplex, ctx: &Ctx) -> CliResult<Output> {
    let x = match a.kind {
        ComplexKind::Complete => SimplicialComplex::complete(a.t, a.d)?,
        ComplexKind::Noisy => {
            if !(0.0..=1.0).contains(&a.keep) {
                return crate::usage(format!("keep probability {} outside [0, 1]", a.keep));
            }
            SimplicialComplex::noisy_complete(a.t, a.d, a.keep, ctx.seed)?
        }
    };
    let mut r = Report::new("gen-complex");
    r.put("n", x.ground_size());
    r.put("d", x.dim());
    r.put("seed", ctx.seed);
    let sizes: Vec<usize> = (1..=x.dim()).map(|i| x.layer(i).map_or(0, |l| l.0.len())).collect();
    r.put("faces", sizes);
    r.float("gamma", x.gamma_hdx()?);
    if x.dim() >= 2 {
        let c = x.containment_graph()?;
        r.float("containment_sigma2", c.sigma2);
        r.float("containment_inv_d", c.inv_d);
    }
    Ok(Output::with_artifact(r, x.to_file()))
}

#[derive(Args, Debug)]
pub struct GenCode {
    #[arg(long)]
    pub n: usize,
    /// Dimension.
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_parser = parse_q, default_value = "0")]
    pub target_distance: Rational,
    #[arg(long, default_value_t = 10_000)]
    pub attempts: usize,
}

pub fn gen_code(a: &GenCode, ctx: &Ctx) -> CliResult<Output> {
    let code = LinearCode::random_with_distance(a.n, a.m, a.target_distance, ctx.seed, a.attempts)?;
    let mut r = Report::new("gen-code");
    r.put("n", code.len());
    r.put("m", code.dimension());
    r.put("seed", ctx.seed);
    r.put("min_distance", code.min_distance()?);
    r.rational("relative_distance", code.relative_distance()?);
    r.rational("rate", code.rate());
    Ok(Output::with_artifact(r, code.to_generator_file()))
}
