//! Encoding and corruption of lifted words.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use liftdec_core::lifting::{
    lift_dprod, lifted_word_text, parse_lifted_word, parse_product_word, product_word_text, write_lifted_word,
    write_product_word,
};
use liftdec_core::{seed, BinaryWord, Rational};
use rand::seq::index::sample;
use rand::Rng as _;

use crate::args::{parse_q, CollArgs};
use crate::load;
use crate::report::Report;
use crate::{usage, CliResult, Ctx, Output};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LiftKind {
    Dsum,
    Dprod,
}

#[derive(Args, Debug)]
pub struct Encode {
    #[arg(long, value_name = "FILE")]
    pub code: PathBuf,
    #[command(flatten)]
    pub coll: CollArgs,
    /// Message bits (one per generator row); the codeword is their combination.
    #[arg(
        long,
        value_name = "BITS",
        conflicts_with = "codeword",
        required_unless_present = "codeword"
    )]
    pub message: Option<String>,
    /// Ground codeword given directly.
    #[arg(long, value_name = "BITS")]
    pub codeword: Option<String>,
    #[arg(long, value_enum, default_value_t = LiftKind::Dsum)]
    pub lift: LiftKind,
}

pub fn encode(a: &Encode) -> CliResult<Output> {
    let code = load::code(&a.code)?;
    let src = load::source(&a.coll)?;
    let coll = src.collection();
    let z = match (&a.message, &a.codeword) {
        (Some(m), _) => {
            let msg = BinaryWord::parse_bit_string(m)?;
            if msg.len() != code.dimension() {
                return usage(format!(
                    "message has {} bits, code dimension is {}",
                    msg.len(),
                    code.dimension()
                ));
            }
            BinaryWord::from_mask(code.len(), code.encode(msg.to_mask()?))
        }
        (None, Some(c)) => {
            let z = BinaryWord::parse_bit_string(c)?;
            if z.len() != code.len() || !code.contains(z.to_mask()?) {
                return usage("--codeword is not a codeword of the base code");
            }
            z
        }
        (None, None) => return usage("pass --message or --codeword"),
    };
    let mut r = Report::new("encode");
    r.put("ground", z.to_bit_string());
    r.put("positions", coll.len());
    let artifact = match a.lift {
        LiftKind::Dsum => {
            let y = load::spec(&a.coll, &src)?.lift_word(&z)?;
            r.put("lift", "dsum");
            write_lifted_word(coll, &y)
        }
        LiftKind::Dprod => {
            r.put("lift", "dprod");
            write_product_word(coll, &lift_dprod(coll, &z)?)
        }
    };
    r.put("collection", format!("{:016x}", coll.fingerprint()));
    Ok(Output::with_artifact(r, artifact))
}

#[derive(Args, Debug)]
pub struct Corrupt {
    /// Lifted (dsum) or product (dprod) word file.
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Fraction of positions to change; exactly round(fraction·length) are changed.
    #[arg(long, value_parser = parse_q)]
    pub fraction: Rational,
}

/// `round(fraction·len)`, halves rounded up.
pub fn flip_count(fraction: Rational, len: usize) -> usize {
    (fraction * Rational::from_integer(len as i64)).round().to_integer() as usize
}

pub fn corrupt(a: &Corrupt, ctx: &Ctx) -> CliResult<Output> {
    if a.fraction < Rational::from_integer(0) || a.fraction > Rational::from_integer(1) {
        return usage(format!("fraction {} outside [0, 1]", a.fraction));
    }
    let text = load::read(&a.input)?;
    let header_fields = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .map_or(0, |l| l.split_whitespace().count());
    let mut rng = seed::stage_rng(ctx.seed, "corrupt", 0);
    let mut r = Report::new("corrupt");
    r.rational("fraction", a.fraction);
    r.put("seed", ctx.seed);
    let artifact = if header_fields == 3 {
        let (hash, mut x) = parse_product_word(&text)?;
        let count = flip_count(a.fraction, x.symbols.len());
        let mut positions = sample(&mut rng, x.symbols.len(), count).into_vec();
        positions.sort_unstable();
        let full = if x.ell == 64 { u64::MAX } else { (1u64 << x.ell) - 1 };
        for &p in &positions {
            x.symbols[p] ^= rng.gen_range(1..=full);
        }
        r.put("length", x.symbols.len());
        r.put("changed", count);
        r.put("positions", positions);
        product_word_text(hash, &x)
    } else {
        let (hash, mut w) = parse_lifted_word(&text)?;
        let count = flip_count(a.fraction, w.len());
        let mut positions = sample(&mut rng, w.len(), count).into_vec();
        positions.sort_unstable();
        for &p in &positions {
            w.flip(p);
        }
        r.put("length", w.len());
        r.put("changed", count);
        r.put("positions", positions);
        lifted_word_text(hash, &w)
    };
    Ok(Output::with_artifact(r, artifact))
}
