//! Direct-product decoding through direct-sum list decoding at several levels.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::codes::LinearCode;
use crate::collection::Collection;
use crate::complex::FaceCollection;
use crate::decode::list::{list_decode, ListReport};
use crate::decode::{DecodeConfig, Radius};
use crate::error::{invalid, Error, Result};
use crate::lifting::{lift_dprod, LiftSpec, ProductWord};
use crate::ratio::to_f64;
use crate::words::BinaryWord;
use crate::Rational;

#[derive(Clone, Debug)]
pub struct ProductOutcome {
    /// Ground codewords passing the final trim, sorted by mask.
    pub words: Vec<(u64, BinaryWord)>,
    pub levels: Vec<(usize, ListReport)>,
    pub radius: f64,
}

/// `ρ_k(x̃)_s`: parity of the parent symbol restricted to the positions of `s`.
pub fn reduce_product_to_sum(x: &ProductWord, reduced: &Collection) -> Result<BinaryWord> {
    let parents = reduced
        .parents()
        .ok_or_else(|| Error::InvalidInput("collection carries no parent assignment".into()))?;
    let mut bits = Vec::with_capacity(parents.len());
    for p in parents {
        let sym = *x
            .symbols
            .get(p.index)
            .ok_or_else(|| Error::InvalidInput(format!("parent {} outside the product word", p.index)))?;
        bits.push(((sym & p.positions).count_ones() & 1) as u8);
    }
    BinaryWord::from_bits(bits)
}

/// Levels `k ∈ {1..ℓ}` with `|k - ℓ/2| <= √(C′ℓ ln(1/ε))/2`.
pub fn product_interval(ell: usize, eps: f64, c_prime: f64) -> Result<Vec<usize>> {
    if !(eps > 0.0 && eps <= 1.0) || c_prime.is_nan() || c_prime < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "need 0 < ε <= 1 and C′ >= 0, got ε={eps} C′={c_prime}"
        )));
    }
    let half_width = (c_prime * ell as f64 * (1.0 / eps).ln()).sqrt() / 2.0;
    let centre = ell as f64 / 2.0;
    let levels: Vec<usize> = (1..=ell)
        .filter(|&k| (k as f64 - centre).abs() <= half_width + 1e-12)
        .collect();
    if levels.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "no level within {half_width:.4} of ℓ/2 = {centre}"
        )));
    }
    Ok(levels)
}

pub fn product_list_decode(
    code: &LinearCode,
    top: &FaceCollection,
    x: &ProductWord,
    eps: Rational,
    c_prime: f64,
    cfg: &DecodeConfig,
) -> Result<ProductOutcome> {
    let coll = top.collection();
    let n = coll.ground_size();
    if code.len() != n {
        return invalid(format!("base code length {} differs from ground size {n}", code.len()));
    }
    if x.ell != top.k() || x.symbols.len() != top.len() {
        return invalid("product word does not match the face collection");
    }
    if eps <= Rational::zero() || eps > Rational::one() {
        return Err(Error::InvalidConfig(format!("ε = {eps} outside (0, 1]")));
    }
    let e = to_f64(eps);
    let levels = product_interval(top.k(), e, c_prime)?;
    let radius = 0.5 - e / 2.0 + e.powf(c_prime / 2.0);
    let mut found = BTreeSet::new();
    let mut reports = Vec::new();
    for k in levels {
        let reduced = top.product_reduction(k)?;
        let spec = LiftSpec::xor(reduced.collection().clone());
        let y = reduce_product_to_sum(x, reduced.collection())?;
        let level_cfg = DecodeConfig {
            seed: crate::seed::derive(cfg.seed, "product-level", k as u64),
            ..cfg.clone()
        };
        let out = list_decode(code, &spec, &y, Radius::Float(radius), &level_cfg)?;
        found.extend(out.list.masks());
        reports.push((k, out.report));
    }
    let bound = Rational::one() - eps;
    let mut words = Vec::new();
    for c in found {
        let z = BinaryWord::from_mask(n, c);
        if lift_dprod(coll, &z)?.distance(x)? <= bound {
            words.push((c, z));
        }
    }
    Ok(ProductOutcome {
        words,
        levels: reports,
        radius,
    })
}
