//! `decode unique | list | product`.

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Args, Subcommand};
use liftdec_core::decode::{list_decode, product_list_decode, unique_decode, ListReport};
use liftdec_core::oracles::{oracle_list, oracle_ml, oracle_product_list};
use liftdec_core::sos::SolveReport;
use liftdec_core::{words, BinaryWord, CoupledList, LiftedCode, OracleBudget, Radius, Rational};
use serde_json::{json, Value};

use crate::args::{parse_q, CollArgs, Knobs};
use crate::load;
use crate::report::{fixed, ratio, Report};
use crate::{usage, CliResult, Ctx, Output};

#[derive(Subcommand, Debug)]
pub enum DecodeCmd {
    /// Nearest lifted codeword within the unique-decoding radius.
    Unique(UniqueArgs),
    /// Every lifted codeword within the list-decoding radius.
    List(ListArgs),
    /// Direct-product list decoding through direct-sum levels.
    Product(ProductArgs),
}

#[derive(Args, Debug)]
pub struct UniqueArgs {
    #[arg(long, value_name = "FILE")]
    pub code: PathBuf,
    #[command(flatten)]
    pub coll: CollArgs,
    /// Received lifted word.
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    #[command(flatten)]
    pub knobs: Knobs,
    /// Write the solved pseudo-expectation here.
    #[arg(long, value_name = "FILE")]
    pub dump_pe: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ListArgs {
    #[command(flatten)]
    pub base: UniqueArgs,
    /// Exact list radius; `1/2 - √ε` when absent.
    #[arg(long, value_parser = parse_q)]
    pub radius: Option<Rational>,
}

#[derive(Args, Debug)]
pub struct ProductArgs {
    #[arg(long, value_name = "FILE")]
    pub code: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub complex: PathBuf,
    /// Top face size ℓ.
    #[arg(long)]
    pub k: usize,
    /// Received product word.
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Agreement parameter: codewords within `1 - ε` are returned.
    #[arg(long, value_parser = parse_q)]
    pub product_eps: Rational,
    #[arg(long, default_value_t = 1.0)]
    pub c_prime: f64,
    #[command(flatten)]
    pub knobs: Knobs,
}

pub fn run(cmd: &DecodeCmd, ctx: &Ctx) -> CliResult<Output> {
    match cmd {
        DecodeCmd::Unique(a) => unique(a, ctx),
        DecodeCmd::List(a) => list(a, ctx),
        DecodeCmd::Product(a) => product(a, ctx),
    }
}

fn solve_fields(r: &mut Report, s: &SolveReport) {
    r.put("solver_iterations", s.iterations);
    r.put("solver_converged", s.converged);
    r.float("primal_residual", s.primal_residual);
    r.float("dual_residual", s.dual_residual);
    r.float("min_eigenvalue", s.min_eigenvalue);
    r.float("repair", s.repair);
    r.float("psi", s.psi);
    r.float("agreement", s.agreement);
}

/// One line per pair: ground bits, then the lifted `+`/`-` string.
fn list_artifact(list: &CoupledList) -> String {
    let mut out = String::from("# z y\n");
    for p in &list.pairs {
        out.push_str(&format!("{} {}\n", p.z.to_bit_string(), p.y.to_sign_string()));
    }
    out
}

fn list_entries(list: &CoupledList, y: &BinaryWord) -> CliResult<Value> {
    let mut entries = Vec::new();
    for p in &list.pairs {
        entries.push(json!({"z": p.z.to_bit_string(), "distance": ratio(words::distance(&p.y, y)?)}));
    }
    Ok(Value::from(entries))
}

fn bits(n: usize, masks: &[u64]) -> Vec<String> {
    masks
        .iter()
        .map(|&m| BinaryWord::from_mask(n, m).to_bit_string())
        .collect()
}

fn write_pe(path: &Option<PathBuf>, pe: Option<&liftdec_core::PseudoExpectation>) -> CliResult<()> {
    if let (Some(path), Some(pe)) = (path, pe) {
        std::fs::write(path, load::write_pe(pe))?;
    }
    Ok(())
}

fn unique(a: &UniqueArgs, ctx: &Ctx) -> CliResult<Output> {
    let code = load::code(&a.code)?;
    let src = load::source(&a.coll)?;
    let spec = load::spec(&a.coll, &src)?;
    let y = load::lifted_word(&a.input, spec.collection())?;
    let cfg = a.knobs.config(ctx.seed);
    let out = unique_decode(&code, &spec, &y, &cfg)?;
    let rep = &out.report;
    let mut r = Report::new("decode unique");
    r.put("seed", ctx.seed);
    r.rational("radius", rep.radius);
    r.put("degree", rep.degree);
    solve_fields(&mut r, &rep.solve);
    r.put("rounding_failures", rep.rounding_failures);
    r.put("candidates", rep.candidates);
    r.put("best_distance", rep.best_distance.map_or(Value::Null, ratio));
    let mut list = CoupledList::default();
    match &out.codeword {
        Some((_, pair)) => {
            r.put("codeword", pair.z.to_bit_string());
            r.rational("distance", words::distance(&pair.y, &y)?);
            list.push(pair.clone(), liftdec_core::decode::Tag { slice: 0, round: 0 });
        }
        None => r.put("codeword", Value::Null),
    }
    let mut mismatch = false;
    if ctx.oracle {
        let lifted = LiftedCode::new(code.clone(), spec.clone())?;
        let (d, arg) = oracle_ml(&lifted, &y, &OracleBudget::default())?;
        let expected: BTreeSet<BinaryWord> = if d < rep.radius {
            arg.into_iter().map(|e| e.1).collect()
        } else {
            BTreeSet::new()
        };
        mismatch = match &out.codeword {
            Some((_, pair)) => !expected.contains(&pair.y),
            None => !expected.is_empty(),
        };
        r.rational("oracle_distance", d);
        r.put("oracle_match", !mismatch);
    }
    let mut o = Output::with_artifact(r, list_artifact(&list));
    o.mismatch = mismatch;
    Ok(o)
}

fn list_report_fields(r: &mut Report, rep: &ListReport) {
    r.float("threshold", rep.threshold);
    r.put("degree", rep.degree);
    match &rep.solve {
        Some(s) => solve_fields(r, s),
        None => r.put("infeasible", rep.infeasible.clone().unwrap_or_default()),
    }
    r.put("slices", rep.slices);
    r.put("failed_slices", rep.failed_slices);
    r.put("admitted", rep.admitted);
    r.put("fallback", rep.fallback);
    if let Some(t) = &rep.tensoriality {
        r.put(
            "tensoriality",
            json!({
                "mu": fixed(t.mu),
                "threshold": fixed(t.threshold),
                "mean_k": fixed(t.mean_k),
                "mean_p": fixed(t.mean_p),
                "frac_k": fixed(t.frac_k),
                "frac_p": fixed(t.frac_p),
                "frac_both": fixed(t.frac_both),
            }),
        );
    }
    r.put("cover", rep.cover);
    r.put("purified", rep.purified);
}

fn list(a: &ListArgs, ctx: &Ctx) -> CliResult<Output> {
    let b = &a.base;
    let code = load::code(&b.code)?;
    let src = load::source(&b.coll)?;
    let spec = load::spec(&b.coll, &src)?;
    let y = load::lifted_word(&b.input, spec.collection())?;
    let cfg = b.knobs.config(ctx.seed);
    let radius = match a.radius {
        Some(q) => Radius::Exact(q),
        None => Radius::SqrtEps(cfg.eps),
    };
    let out = list_decode(&code, &spec, &y, radius, &cfg)?;
    write_pe(&b.dump_pe, out.solution.as_ref())?;
    let mut r = Report::new("decode list");
    r.put("seed", ctx.seed);
    r.float("radius", radius.value());
    list_report_fields(&mut r, &out.report);
    r.put("list_size", out.list.len());
    r.put("list", list_entries(&out.list, &y)?);
    if out.list.is_empty() {
        r.put(
            "diagnostic",
            "empty list: no codeword lift within the radius was recovered",
        );
    }
    let mut mismatch = false;
    if ctx.oracle {
        let lifted = LiftedCode::new(code.clone(), spec.clone())?;
        let oracle = oracle_list(&lifted, &y, radius, &OracleBudget::default())?;
        mismatch = oracle.masks() != out.list.masks();
        r.put("oracle_list", bits(code.len(), &oracle.masks()));
        r.put("oracle_match", !mismatch);
        if let Some(j) = &oracle.johnson {
            r.put(
                "johnson",
                json!({
                    "lifted_distance": ratio(j.lifted_distance),
                    "applies": j.applies,
                    "bound": ratio(j.bound),
                    "holds": j.holds,
                }),
            );
        }
    }
    let mut o = Output::with_artifact(r, list_artifact(&out.list));
    o.mismatch = mismatch;
    Ok(o)
}

fn product(a: &ProductArgs, ctx: &Ctx) -> CliResult<Output> {
    let code = load::code(&a.code)?;
    let top = load::complex(&a.complex)?.flatten(a.k)?;
    let x = load::product_word(&a.input, top.collection())?;
    let cfg = a.knobs.config(ctx.seed);
    if !(a.c_prime.is_finite() && a.c_prime >= 0.0) {
        return usage(format!("C′ = {} must be a non-negative number", a.c_prime));
    }
    let out = product_list_decode(&code, &top, &x, a.product_eps, a.c_prime, &cfg)?;
    let mut r = Report::new("decode product");
    r.put("seed", ctx.seed);
    r.rational("product_eps", a.product_eps);
    r.float("sum_radius", out.radius);
    r.put("levels", out.levels.iter().map(|l| l.0).collect::<Vec<_>>());
    for (k, rep) in &out.levels {
        let mut lr = Report::new("level");
        list_report_fields(&mut lr, rep);
        r.put(&format!("level_{k}"), lr.to_value());
    }
    let masks: Vec<u64> = out.words.iter().map(|w| w.0).collect();
    let mut entries = Vec::new();
    let coll = top.collection();
    for (_, z) in &out.words {
        let d = liftdec_core::lifting::lift_dprod(coll, z)?.distance(&x)?;
        entries.push(json!({"z": z.to_bit_string(), "distance": ratio(d)}));
    }
    r.put("list_size", out.words.len());
    r.put("list", entries);
    let mut mismatch = false;
    if ctx.oracle {
        let oracle = oracle_product_list(&code, coll, &x, a.product_eps, &OracleBudget::default())?;
        let expected: Vec<u64> = oracle.iter().map(|e| e.0).collect();
        mismatch = expected != masks;
        r.put("oracle_list", bits(code.len(), &expected));
        r.put("oracle_match", !mismatch);
    }
    let mut artifact = String::from("# z\n");
    for (_, z) in &out.words {
        artifact.push_str(&z.to_bit_string());
        artifact.push('\n');
    }
    let mut o = Output::with_artifact(r, artifact);
    o.mismatch = mismatch;
    Ok(o)
}
