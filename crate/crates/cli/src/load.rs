//! Reading artifacts from disk.

use std::path::Path;
use std::sync::Arc;

use liftdec_core::lifting::{parse_lifted_word, parse_product_word};
use liftdec_core::{
    BinaryWord, Collection, FaceCollection, LiftFn, LiftSpec, LinearCode, ProductWord, PseudoExpectation, RegularGraph,
    SimplicialComplex, WalkCollection,
};

use crate::args::CollArgs;
use crate::{usage, CliResult, Failure};

pub fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

pub fn graph(path: &Path) -> CliResult<RegularGraph> {
    Ok(RegularGraph::parse_edge_file(&read(path)?)?)
}

pub fn complex(path: &Path) -> CliResult<SimplicialComplex> {
    Ok(SimplicialComplex::parse_file(&read(path)?)?)
}

pub fn code(path: &Path) -> CliResult<LinearCode> {
    Ok(LinearCode::parse_generator_file(&read(path)?)?)
}

pub enum Source {
    Walks(WalkCollection),
    Faces(FaceCollection),
}

impl Source {
    pub fn collection(&self) -> &Arc<Collection> {
        match self {
            Source::Walks(w) => w.collection(),
            Source::Faces(f) => f.collection(),
        }
    }
}

pub fn source(args: &CollArgs) -> CliResult<Source> {
    match (&args.graph, &args.complex) {
        (Some(g), None) => Ok(Source::Walks(WalkCollection::enumerate(&graph(g)?, args.k)?)),
        (None, Some(c)) => Ok(Source::Faces(complex(c)?.flatten(args.k)?)),
        _ => usage("pass exactly one of --graph or --complex"),
    }
}

pub fn spec(args: &CollArgs, src: &Source) -> CliResult<LiftSpec> {
    let coll = src.collection().clone();
    match &args.g_table {
        None => Ok(LiftSpec::xor(coll)),
        Some(bits) => {
            let table = BinaryWord::parse_bit_string(bits)?;
            Ok(LiftSpec::new(coll, LiftFn::table(args.k, table.bits().to_vec())?)?)
        }
    }
}

fn check_fingerprint(found: u64, coll: &Collection, path: &Path) -> CliResult<()> {
    if found != coll.fingerprint() {
        return usage(format!(
            "{} was written for collection {found:016x}, not {:016x}",
            path.display(),
            coll.fingerprint()
        ));
    }
    Ok(())
}

pub fn lifted_word(path: &Path, coll: &Collection) -> CliResult<BinaryWord> {
    let (hash, w) = parse_lifted_word(&read(path)?)?;
    check_fingerprint(hash, coll, path)?;
    Ok(w)
}

pub fn product_word(path: &Path, coll: &Collection) -> CliResult<ProductWord> {
    let (hash, x) = parse_product_word(&read(path)?)?;
    check_fingerprint(hash, coll, path)?;
    Ok(x)
}

/// Pseudo-expectation dump with an `n degree psd_level` header line.
pub fn write_pe(pe: &PseudoExpectation) -> String {
    format!("{} {} {}\n{}", pe.n(), pe.degree(), pe.psd_level(), pe.to_dump())
}

pub fn pe(path: &Path) -> CliResult<PseudoExpectation> {
    let text = read(path)?;
    let (header, body) = text.split_once('\n').unwrap_or((&text, ""));
    let nums: Vec<usize> = header.split_whitespace().filter_map(|t| t.parse().ok()).collect();
    let [n, degree, level] = nums[..] else {
        return usage(format!("{}: header must be `n degree psd_level`", path.display()));
    };
    Ok(PseudoExpectation::parse_dump(n, degree, level, body)?)
}
