//! Brute-force ground truth in exact arithmetic.

use std::time::{Duration, Instant};

use crate::codes::LinearCode;
use crate::collection::Collection;
use crate::decode::Radius;
use crate::error::{invalid, limit, Result};
use crate::lifting::{lift_dprod, LiftSpec, LiftedCode, ProductWord};
use crate::words::{self, BinaryWord};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_codewords: u64,
    pub max_assignments: u64,
    pub time_cap: Option<Duration>,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_codewords: 1 << 20,
            max_assignments: 1 << 24,
            time_cap: None,
        }
    }
}

struct Clock {
    start: Instant,
    cap: Option<Duration>,
}

impl Clock {
    fn new(b: &OracleBudget) -> Self {
        Self {
            start: Instant::now(),
            cap: b.time_cap,
        }
    }

    fn check(&self) -> Result<()> {
        match self.cap {
            Some(cap) if self.start.elapsed() > cap => limit(format!("oracle exceeded its {cap:?} time cap")),
            _ => Ok(()),
        }
    }
}

fn check_codewords(code: &LinearCode, b: &OracleBudget) -> Result<()> {
    let count = 1u64.checked_shl(code.dimension() as u32).unwrap_or(u64::MAX);
    if count > b.max_codewords {
        return limit(format!("2^{} codewords exceed the oracle budget", code.dimension()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct JohnsonAudit {
    /// Exact relative distance of the lifted code.
    pub lifted_distance: Rational,
    /// Whether `Δ(C_k) >= 1/2 - ε`, the hypothesis of the bound.
    pub applies: bool,
    /// `1/(2ε)`.
    pub bound: Rational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ListOracle {
    /// Ground codewords (mask) with their lifts, sorted by mask.
    pub list: Vec<(u64, BinaryWord)>,
    pub johnson: Option<JohnsonAudit>,
}

impl ListOracle {
    pub fn masks(&self) -> Vec<u64> {
        self.list.iter().map(|e| e.0).collect()
    }
}

/// Every lifted codeword within `radius` of `y`; a Johnson audit accompanies `1/2 - √ε` radii.
pub fn oracle_list(code: &LiftedCode, y: &BinaryWord, radius: Radius, budget: &OracleBudget) -> Result<ListOracle> {
    if !radius.is_exact() {
        return invalid("oracles compare distances exactly; use an exact radius");
    }
    check_codewords(code.base(), budget)?;
    let clock = Clock::new(budget);
    let mut list = Vec::new();
    for (c, w) in code.codewords()? {
        clock.check()?;
        if radius.admits(words::distance(&w, y)?) {
            list.push((c, w));
        }
    }
    list.sort_by_key(|e| e.0);
    let johnson = match radius {
        Radius::SqrtEps(eps) => {
            let lifted_distance = code.distance()?;
            let applies = lifted_distance >= Rational::new(1, 2) - eps;
            let bound = (eps * 2).recip();
            Some(JohnsonAudit {
                lifted_distance,
                applies,
                bound,
                holds: !applies || Rational::from_integer(list.len() as i64) <= bound,
            })
        }
        _ => None,
    };
    Ok(ListOracle { list, johnson })
}

/// All lifted codewords at minimum distance from `y`, with that distance.
pub fn oracle_ml(
    code: &LiftedCode,
    y: &BinaryWord,
    budget: &OracleBudget,
) -> Result<(Rational, Vec<(u64, BinaryWord)>)> {
    check_codewords(code.base(), budget)?;
    let clock = Clock::new(budget);
    let mut best: Option<Rational> = None;
    let mut arg = Vec::new();
    for (c, w) in code.codewords()? {
        clock.check()?;
        let d = words::distance(&w, y)?;
        if best.is_none_or(|b| d < b) {
            best = Some(d);
            arg.clear();
        }
        if best == Some(d) {
            arg.push((c, w));
        }
    }
    arg.sort_by_key(|e| e.0);
    match best {
        Some(d) => Ok((d, arg)),
        None => invalid("code has no codewords"),
    }
}

/// Word of bias at most `beta0` whose lift has the largest bias; `None` when no word qualifies.
pub fn oracle_parity_extremes(
    spec: &LiftSpec,
    beta0: Rational,
    budget: &OracleBudget,
) -> Result<Option<(BinaryWord, Rational)>> {
    let n = spec.ground_size();
    if n >= 64 || (1u64 << n) > budget.max_assignments {
        return limit(format!("2^{n} ground words exceed the oracle budget"));
    }
    let clock = Clock::new(budget);
    let mut best: Option<(BinaryWord, Rational)> = None;
    for z in 0..(1u64 << n) {
        let w = z.count_ones() as i64;
        if Rational::new((n as i64 - 2 * w).abs(), n as i64) > beta0 {
            continue;
        }
        if z & 0xffff == 0 {
            clock.check()?;
        }
        let b = words::bias(&spec.lift_mask(z))?;
        if best.as_ref().is_none_or(|(_, bb)| b > *bb) {
            best = Some((BinaryWord::from_mask(n, z), b));
        }
    }
    Ok(best)
}

/// Ground codewords whose direct-product lift is within `1 - eps` of `x`.
pub fn oracle_product_list(
    code: &LinearCode,
    coll: &Collection,
    x: &ProductWord,
    eps: Rational,
    budget: &OracleBudget,
) -> Result<Vec<(u64, BinaryWord)>> {
    check_codewords(code, budget)?;
    let clock = Clock::new(budget);
    let bound = Rational::from_integer(1) - eps;
    let mut out = Vec::new();
    for &c in code.codewords()? {
        clock.check()?;
        let z = BinaryWord::from_mask(code.len(), c);
        if lift_dprod(coll, &z)?.distance(x)? <= bound {
            out.push((c, z));
        }
    }
    out.sort_by_key(|e| e.0);
    Ok(out)
}
