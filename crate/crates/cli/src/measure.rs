//! `measure expansion | parity | robustness | splittability | tensoriality | rate`.

use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use liftdec_core::decode::sample_slice;
use liftdec_core::lifting::{measure_parity_sampling, measure_robustness, rate_report};
use liftdec_core::ratio::to_f64;
use liftdec_core::sos::tensorial::{classify, pair_panel, summarize};
use liftdec_core::walks::splittability;
use liftdec_core::{seed, DecodeConfig, Error, LiftSpec, Rational, RegularGraph, SplittingTree, WalkCollection};
use serde_json::{json, Value};

use crate::args::{parse_q, CollArgs};
use crate::load::{self, Source};
use crate::report::{fixed, ratio, Report};
use crate::{usage, CliResult, Ctx, Output};

#[derive(Subcommand, Debug)]
pub enum MeasureCmd {
    /// σ₂ of a graph, or γ and the containment spectrum of a complex.
    Expansion(ExpansionArgs),
    /// Largest lifted bias over ground words of bias at most β₀.
    Parity(ParityArgs),
    /// Smallest lifted distance over ground pairs at distance at least δ₀.
    Robustness(RobustnessArgs),
    /// Threshold ranks of the swap operators along a splitting tree.
    Splittability(SplitArgs),
    /// Tensoriality statistics of sampled slices of a pseudo-expectation.
    Tensoriality(TensorialityArgs),
    /// Rate of the lifted code.
    Rate(RateArgs),
}

#[derive(Args, Debug)]
pub struct ExpansionArgs {
    #[arg(
        long,
        value_name = "FILE",
        conflicts_with = "complex",
        required_unless_present = "complex"
    )]
    pub graph: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub complex: Option<PathBuf>,
    /// Threshold for the reported threshold rank.
    #[arg(long, default_value_t = 0.5)]
    pub tau: f64,
}

#[derive(Args, Debug)]
pub struct ParityArgs {
    #[command(flatten)]
    pub coll: CollArgs,
    #[arg(long, value_parser = parse_q)]
    pub beta0: Rational,
    /// Random words tested when exhaustive enumeration is out of reach.
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    /// Expansion used in the bound; the measured σ₂ of the graph when absent.
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Args, Debug)]
pub struct RobustnessArgs {
    #[command(flatten)]
    pub coll: CollArgs,
    #[arg(long, value_parser = parse_q)]
    pub delta0: Rational,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TreeKind {
    Balanced,
    Comb,
}

#[derive(Args, Debug)]
pub struct SplitArgs {
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = TreeKind::Balanced)]
    pub tree: TreeKind,
    #[arg(long, default_value_t = 0.5)]
    pub tau: f64,
}

#[derive(Args, Debug)]
pub struct TensorialityArgs {
    #[command(flatten)]
    pub coll: CollArgs,
    /// Pseudo-expectation dump written by `decode --dump-pe`.
    #[arg(long, value_name = "FILE")]
    pub pe: PathBuf,
    #[arg(long, value_parser = parse_q)]
    pub mu: Option<Rational>,
    #[arg(long, default_value_t = 50)]
    pub slices: usize,
    /// Rounding depth L; defaults to k.
    #[arg(long = "l")]
    pub l: Option<usize>,
}

#[derive(Args, Debug)]
pub struct RateArgs {
    #[arg(long, value_name = "FILE", conflicts_with_all = ["complex", "d"])]
    pub graph: Option<PathBuf>,
    #[arg(long, value_name = "FILE", conflicts_with = "d")]
    pub complex: Option<PathBuf>,
    /// Degree of the walk graph, when no graph file is given.
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub k: usize,
    /// Rate of the base code.
    #[arg(long, value_parser = parse_q)]
    pub r1: Rational,
}

pub fn run(cmd: &MeasureCmd, ctx: &Ctx) -> CliResult<Output> {
    match cmd {
        MeasureCmd::Expansion(a) => expansion(a),
        MeasureCmd::Parity(a) => parity(a, ctx),
        MeasureCmd::Robustness(a) => robustness(a, ctx),
        MeasureCmd::Splittability(a) => split(a),
        MeasureCmd::Tensoriality(a) => tensoriality(a, ctx),
        MeasureCmd::Rate(a) => rate(a),
    }
}

fn expansion(a: &ExpansionArgs) -> CliResult<Output> {
    let mut r = Report::new("measure expansion");
    match (&a.graph, &a.complex) {
        (Some(g), None) => {
            let g = load::graph(g)?;
            let e = g.sigma2()?;
            r.put("n", g.n());
            r.put("d", g.degree());
            r.float("sigma2", e.sigma2);
            r.put("connected", e.connected);
            r.float("tau", a.tau);
            r.put("threshold_rank", g.threshold_rank(a.tau)?);
            r.put("spectrum", g.spectrum()?.into_iter().map(fixed).collect::<Vec<_>>());
        }
        (None, Some(c)) => {
            let x = load::complex(c)?;
            r.put("n", x.ground_size());
            r.put("d", x.dim());
            r.float("gamma", x.gamma_hdx()?);
            if x.dim() >= 2 {
                let c = x.containment_graph()?;
                r.float("containment_sigma2", c.sigma2);
                r.float("containment_inv_d", c.inv_d);
                r.put("fitted_constant", c.fitted_constant.map_or(Value::Null, fixed));
            }
        }
        _ => return usage("pass exactly one of --graph or --complex"),
    }
    Ok(Output::report(r))
}

fn graph_lambda(src: &Source) -> CliResult<Option<f64>> {
    match src {
        Source::Walks(w) => Ok(Some(w.graph().sigma2()?.sigma2)),
        Source::Faces(_) => Ok(None),
    }
}

fn parity(a: &ParityArgs, ctx: &Ctx) -> CliResult<Output> {
    let src = load::source(&a.coll)?;
    let spec = load::spec(&a.coll, &src)?;
    let lambda = match a.lambda {
        Some(l) => Some(l),
        None => graph_lambda(&src)?,
    };
    let rep = measure_parity_sampling(&spec, a.beta0, a.trials, ctx.seed, lambda)?;
    let mut r = Report::new("measure parity");
    r.rational("beta0", a.beta0);
    r.put("k", a.coll.k);
    r.put("lambda", lambda.map_or(Value::Null, fixed));
    r.rational("max_bias", rep.max_bias);
    r.float("max_bias_value", to_f64(rep.max_bias));
    r.put("bound", rep.bound.map_or(Value::Null, fixed));
    r.put("vacuous", rep.vacuous);
    r.put("within_bound", rep.within_bound.map_or(Value::Null, Value::from));
    r.put("words_tested", rep.words_tested);
    r.put("exhaustive", rep.exhaustive);
    r.put(
        "witness",
        rep.witness.map_or(Value::Null, |w| Value::from(w.to_bit_string())),
    );
    Ok(Output::report(r))
}

fn robustness(a: &RobustnessArgs, ctx: &Ctx) -> CliResult<Output> {
    let src = load::source(&a.coll)?;
    let spec = load::spec(&a.coll, &src)?;
    let rep = measure_robustness(&spec, a.delta0, a.trials, ctx.seed)?;
    let mut r = Report::new("measure robustness");
    r.rational("delta0", a.delta0);
    r.put("delta", rep.delta.map_or(Value::Null, ratio));
    r.put("pairs_tested", rep.pairs_tested);
    r.put("exhaustive", rep.exhaustive);
    r.put(
        "witness",
        rep.witness
            .map_or(Value::Null, |(u, v)| json!([u.to_bit_string(), v.to_bit_string()])),
    );
    Ok(Output::report(r))
}

fn split(a: &SplitArgs) -> CliResult<Output> {
    let g = load::graph(&a.graph)?;
    let wc = WalkCollection::enumerate(&g, a.k)?;
    let tree = match a.tree {
        TreeKind::Balanced => SplittingTree::balanced(a.k)?,
        TreeKind::Comb => SplittingTree::comb(a.k)?,
    };
    let rep = splittability(&wc, &tree, a.tau)?;
    let mut r = Report::new("measure splittability");
    r.put("k", a.k);
    r.float("tau", a.tau);
    r.put("max_rank", rep.max_rank);
    let nodes: Vec<Value> = rep
        .nodes
        .iter()
        .map(|n| json!({"k1": n.k1, "k2": n.k2, "rank": n.rank}))
        .collect();
    r.put("nodes", nodes);
    Ok(Output::report(r))
}

fn tensoriality(a: &TensorialityArgs, ctx: &Ctx) -> CliResult<Output> {
    let src = load::source(&a.coll)?;
    let coll = src.collection();
    let pe = load::pe(&a.pe)?;
    if pe.n() != coll.ground_size() {
        return usage(format!(
            "dump has n = {}, collection has {}",
            pe.n(),
            coll.ground_size()
        ));
    }
    let mu = to_f64(a.mu.unwrap_or_else(|| DecodeConfig::default().mu()));
    let l = a.l.unwrap_or(a.coll.k);
    let panel = pair_panel(coll);
    let mut stats = Vec::new();
    let mut failed = 0;
    for i in 0..a.slices {
        let mut rng = seed::stage_rng(ctx.seed, "slice", i as u64);
        match sample_slice(&pe, coll, l, &mut rng) {
            Ok((_, cond)) => stats.push(classify(&cond, coll, &panel, mu)?),
            Err(Error::InvalidCondition(_)) => failed += 1,
            Err(e) => return Err(e.into()),
        }
    }
    let t = summarize(&stats, mu);
    let mut r = Report::new("measure tensoriality");
    r.put("slices", t.slices);
    r.put("failed_slices", failed);
    r.float("mu", t.mu);
    r.float("threshold", t.threshold);
    r.float("mean_k", t.mean_k);
    r.float("mean_p", t.mean_p);
    r.float("frac_k", t.frac_k);
    r.float("frac_p", t.frac_p);
    r.float("frac_both", t.frac_both);
    Ok(Output::report(r))
}

fn rate(a: &RateArgs) -> CliResult<Output> {
    let coll = match (&a.graph, &a.complex, a.d) {
        (Some(g), None, None) => WalkCollection::enumerate(&load::graph(g)?, a.k)?.collection().clone(),
        (None, Some(c), None) => load::complex(c)?.flatten(a.k)?.collection().clone(),
        // The walk rate depends on the degree only; K_{d+1} stands in for any d-regular graph.
        (None, None, Some(d)) => WalkCollection::enumerate(&RegularGraph::complete(d + 1)?, a.k)?
            .collection()
            .clone(),
        _ => return usage("pass one of --graph, --complex or --d"),
    };
    let spec = LiftSpec::xor(coll);
    let mut r = Report::new("measure rate");
    r.put("k", a.k);
    r.rational("r1", a.r1);
    r.rational("rate", rate_report(&spec, a.r1));
    Ok(Output::report(r))
}
