//! Liftings `lift^g_{X(k)}`: direct sum, table-driven lifts and direct product.

use std::fmt::Write as _;
use std::sync::Arc;

use rand::Rng as _;

use crate::codes::LinearCode;
use crate::collection::{vertex_mask, Collection, CollectionKind};
use crate::error::{invalid, limit, Error, Result};
use crate::seed;
use crate::words::{self, BinaryWord};
use crate::Rational;

/// Largest number of ground words enumerated by the measurement routines.
pub const EXHAUSTIVE_CAP: u64 = 1 << 20;

/// Local function `g : {±1}^k → {±1}` in the F2 view.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftFn {
    /// Parity of the inputs; repeated vertices cancel.
    Xor,
    /// Output bit `table[x]` for the input bits packed as `x` (position `j` is bit `j`).
    Table { k: usize, table: Vec<u8> },
}

impl LiftFn {
    pub fn table(k: usize, table: Vec<u8>) -> Result<Self> {
        if k > 20 || table.len() != 1 << k {
            return invalid(format!("truth table of length {} does not match k={k}", table.len()));
        }
        if table.iter().any(|&b| b > 1) {
            return invalid("truth table entries must be bits");
        }
        Ok(Self::Table { k, table })
    }

    pub fn eval(&self, input: u64) -> u8 {
        match self {
            Self::Xor => (input.count_ones() & 1) as u8,
            Self::Table { table, .. } => table[input as usize],
        }
    }

    /// `g(-x) = -g(x)` for every input, checked exhaustively for tables.
    pub fn is_odd(&self, k: usize) -> bool {
        match self {
            Self::Xor => k % 2 == 1,
            Self::Table { k, table } => {
                let full = (1usize << k) - 1;
                (0..table.len()).all(|x| table[x] != table[x ^ full])
            }
        }
    }

    /// Fourier coefficients `ĝ(A)` over input positions, nonzero terms only.
    pub fn fourier(&self, k: usize) -> Vec<(u64, f64)> {
        match self {
            Self::Xor => vec![(((1u128 << k) - 1) as u64, 1.0)],
            Self::Table { table, .. } => {
                let mut f: Vec<f64> = table.iter().map(|&b| 1.0 - 2.0 * f64::from(b)).collect();
                let mut h = 1;
                while h < f.len() {
                    for i in (0..f.len()).step_by(2 * h) {
                        for j in i..i + h {
                            let (a, b) = (f[j], f[j + h]);
                            f[j] = a + b;
                            f[j + h] = a - b;
                        }
                    }
                    h *= 2;
                }
                let scale = 1.0 / f.len() as f64;
                f.iter()
                    .enumerate()
                    .filter(|(_, c)| c.abs() > 1e-12)
                    .map(|(a, c)| (a as u64, c * scale))
                    .collect()
            }
        }
    }

    /// Bias `|E g(x)|` under inputs with i.i.d. bits equal to 1 with probability `p`.
    pub fn bias_under_bernoulli(&self, k: usize, p: f64) -> f64 {
        let mut mean = 0.0;
        for x in 0..(1u64 << k) {
            let ones = x.count_ones() as i32;
            let pr = p.powi(ones) * (1.0 - p).powi(k as i32 - ones);
            mean += pr * (1.0 - 2.0 * f64::from(self.eval(x)));
        }
        mean.abs()
    }
}

/// Uniformly random odd function on `k` bits (requires `k` odd).
pub fn random_odd_g(k: usize, seed: u64) -> Result<LiftFn> {
    if k.is_multiple_of(2) {
        return invalid(format!("odd functions on k={k} bits need k odd"));
    }
    if k > 20 {
        return limit("truth tables are limited to k <= 20");
    }
    let mut rng = seed::stage_rng(seed, "random-odd-g", k as u64);
    let full = (1usize << k) - 1;
    let mut table = vec![0u8; 1 << k];
    for x in 0..(1usize << (k - 1)) {
        let b = u8::from(rng.gen::<bool>());
        table[x] = b;
        table[x ^ full] = b ^ 1;
    }
    LiftFn::table(k, table)
}

#[derive(Clone, Debug)]
pub struct LiftSpec {
    collection: Arc<Collection>,
    g: LiftFn,
}

impl LiftSpec {
    pub fn new(collection: Arc<Collection>, g: LiftFn) -> Result<Self> {
        if let LiftFn::Table { k, .. } = &g {
            if *k != collection.k() {
                return invalid(format!("table arity {k} differs from tuple size {}", collection.k()));
            }
        }
        Ok(Self { collection, g })
    }

    pub fn xor(collection: Arc<Collection>) -> Self {
        Self {
            collection,
            g: LiftFn::Xor,
        }
    }

    pub fn collection(&self) -> &Arc<Collection> {
        &self.collection
    }

    pub fn g(&self) -> &LiftFn {
        &self.g
    }

    pub fn is_xor(&self) -> bool {
        self.g == LiftFn::Xor
    }

    pub fn is_odd(&self) -> bool {
        self.g.is_odd(self.collection.k())
    }

    pub fn ground_size(&self) -> usize {
        self.collection.ground_size()
    }

    pub fn len(&self) -> usize {
        self.collection.len()
    }

    pub fn is_empty(&self) -> bool {
        self.collection.is_empty()
    }

    fn input(&self, i: usize, bit: impl Fn(usize) -> u8) -> u64 {
        self.collection
            .tuple(i)
            .iter()
            .enumerate()
            .fold(0u64, |m, (j, &v)| m | (u64::from(bit(v as usize)) << j))
    }

    pub fn lift_word(&self, z: &BinaryWord) -> Result<BinaryWord> {
        if z.len() != self.ground_size() {
            return invalid(format!(
                "word length {} differs from ground size {}",
                z.len(),
                self.ground_size()
            ));
        }
        Ok(BinaryWord::from_bits(
            (0..self.len())
                .map(|i| self.g.eval(self.input(i, |v| z.bit(v))))
                .collect(),
        )
        .expect("lift outputs are bits"))
    }

    /// Lift of the ground word packed in `z` (ground size at most 64).
    pub fn lift_mask(&self, z: u64) -> BinaryWord {
        BinaryWord::from_bits(
            (0..self.len())
                .map(|i| self.g.eval(self.input(i, |v| ((z >> v) & 1) as u8)))
                .collect(),
        )
        .expect("lift outputs are bits")
    }

    /// Number of lifted positions where the lift of `z` is 1.
    fn lifted_weight(&self, z: u64, xor_masks: Option<&[u64]>) -> usize {
        match xor_masks {
            Some(ms) => ms.iter().filter(|&&r| (r & z).count_ones() & 1 == 1).count(),
            None => (0..self.len())
                .filter(|&i| self.g.eval(self.input(i, |v| ((z >> v) & 1) as u8)) == 1)
                .count(),
        }
    }

    fn xor_masks(&self) -> Option<Vec<u64>> {
        self.is_xor().then(|| {
            (0..self.len())
                .map(|i| vertex_mask(&self.collection.reduced(i)))
                .collect()
        })
    }

    /// `Y_s` as a multilinear polynomial in the ground variables, per tuple.
    ///
    /// Monomials are vertex masks after cancelling repeated vertices.
    pub fn polynomial(&self, i: usize) -> Vec<(u64, f64)> {
        let t = self.collection.tuple(i);
        let mut terms: Vec<(u64, f64)> = Vec::new();
        for (a, c) in self.g.fourier(t.len()) {
            let mask = (0..t.len())
                .filter(|j| (a >> j) & 1 == 1)
                .fold(0u64, |m, j| m ^ (1u64 << t[j]));
            match terms.iter_mut().find(|(m, _)| *m == mask) {
                Some(e) => e.1 += c,
                None => terms.push((mask, c)),
            }
        }
        terms.retain(|(_, c)| c.abs() > 1e-12);
        terms.sort_by_key(|&(m, _)| m);
        terms
    }

    fn check_mask_size(&self) -> Result<()> {
        if self.ground_size() > 64 {
            return limit("ground sets above 64 vertices are not supported here");
        }
        Ok(())
    }
}

/// Direct product word: one `ℓ`-bit symbol per tuple, bit `j` the value at position `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductWord {
    pub ell: usize,
    pub symbols: Vec<u64>,
}

impl ProductWord {
    /// Fraction of positions with different symbols.
    pub fn distance(&self, other: &ProductWord) -> Result<Rational> {
        if self.ell != other.ell || self.symbols.len() != other.symbols.len() || self.symbols.is_empty() {
            return invalid("product words of different shapes");
        }
        let diff = self.symbols.iter().zip(&other.symbols).filter(|(a, b)| a != b).count();
        Ok(Rational::new(diff as i64, self.symbols.len() as i64))
    }
}

pub fn lift_dprod(collection: &Collection, z: &BinaryWord) -> Result<ProductWord> {
    if z.len() != collection.ground_size() {
        return invalid("word length differs from the ground size");
    }
    let ell = collection.k();
    Ok(ProductWord {
        ell,
        symbols: collection
            .tuples()
            .map(|t| {
                t.iter()
                    .enumerate()
                    .fold(0u64, |m, (j, &v)| m | (u64::from(z.bit(v as usize)) << j))
            })
            .collect(),
    })
}

#[derive(Clone, Debug)]
pub struct ParityReport {
    pub max_bias: Rational,
    pub witness: Option<BinaryWord>,
    pub words_tested: u64,
    pub exhaustive: bool,
    /// `(β₀ + 2λ)^⌊k/2⌋` when a walk expansion `λ` was supplied.
    pub bound: Option<f64>,
    pub vacuous: bool,
    pub within_bound: Option<bool>,
}

pub fn walk_parity_bound(beta0: f64, lambda: f64, k: usize) -> f64 {
    (beta0 + 2.0 * lambda).powi((k / 2) as i32)
}

fn word_bias_ok(n: usize, z: u64, beta0: Rational) -> bool {
    let w = z.count_ones() as i64;
    Rational::new((n as i64 - 2 * w).abs(), n as i64) <= beta0
}

/// Largest lifted bias over ground words of bias at most `beta0`.
///
/// Exhaustive when `2^n` is within [`EXHAUSTIVE_CAP`], otherwise over `trials`
/// random words of admissible weight (plus the constant words when admissible).
pub fn measure_parity_sampling(
    spec: &LiftSpec,
    beta0: Rational,
    trials: u64,
    seed: u64,
    lambda: Option<f64>,
) -> Result<ParityReport> {
    spec.check_mask_size()?;
    if trials == 0 {
        return invalid("parity sampling needs at least one trial");
    }
    let n = spec.ground_size();
    let total = spec.len() as i64;
    let xm = spec.xor_masks();
    let mut best: Option<(Rational, u64)> = None;
    let mut tested = 0u64;
    let mut consider = |z: u64| {
        let ones = spec.lifted_weight(z, xm.as_deref()) as i64;
        let b = Rational::new((total - 2 * ones).abs(), total);
        if best.is_none_or(|(cur, _)| b > cur) {
            best = Some((b, z));
        }
    };
    let exhaustive = n < 64 && (1u64 << n) <= EXHAUSTIVE_CAP;
    if exhaustive {
        for z in 0..(1u64 << n) {
            if word_bias_ok(n, z, beta0) {
                consider(z);
                tested += 1;
            }
        }
    } else {
        let weights: Vec<usize> = (0..=n).filter(|&w| word_bias_ok(n, w_mask(w), beta0)).collect();
        let mut rng = seed::stage_rng(seed, "parity-sampling", 0);
        if !weights.is_empty() {
            for w in [0, n] {
                if weights.contains(&w) {
                    consider(w_mask(w));
                    tested += 1;
                }
            }
            for _ in 0..trials {
                let w = weights[rng.gen_range(0..weights.len())];
                let pos = rand::seq::index::sample(&mut rng, n, w);
                consider(pos.iter().fold(0u64, |m, p| m | (1u64 << p)));
                tested += 1;
            }
        }
    }
    let bound = lambda.map(|l| {
        let b0 = *beta0.numer() as f64 / *beta0.denom() as f64;
        walk_parity_bound(b0, l, spec.collection().k())
    });
    let max_bias = best.map_or(Rational::from_integer(0), |(b, _)| b);
    Ok(ParityReport {
        max_bias,
        witness: best.map(|(_, z)| BinaryWord::from_mask(n, z)),
        words_tested: tested,
        exhaustive,
        bound,
        vacuous: bound.is_some_and(|b| b >= 1.0),
        within_bound: bound.map(|b| crate::ratio::to_f64(max_bias) <= b + 1e-9),
    })
}

fn w_mask(w: usize) -> u64 {
    if w >= 64 {
        u64::MAX
    } else {
        (1u64 << w) - 1
    }
}

#[derive(Clone, Debug)]
pub struct RobustnessReport {
    /// Smallest lifted distance over tested pairs; `None` when no pair qualifies.
    pub delta: Option<Rational>,
    pub witness: Option<(BinaryWord, BinaryWord)>,
    pub pairs_tested: u64,
    pub exhaustive: bool,
}

/// Smallest lifted distance among ground pairs at distance at least `delta0`.
pub fn measure_robustness(spec: &LiftSpec, delta0: Rational, trials: u64, seed: u64) -> Result<RobustnessReport> {
    spec.check_mask_size()?;
    let n = spec.ground_size();
    let total = spec.len() as i64;
    let min_flips = (delta0 * Rational::from_integer(n as i64)).ceil().to_integer().max(0) as u32;
    let mut best: Option<(Rational, u64, u64)> = None;
    let mut tested = 0u64;
    let mut consider = |a: u64, b: u64, dist: usize| {
        let d = Rational::new(dist as i64, total);
        if best.is_none_or(|(cur, _, _)| d < cur) {
            best = Some((d, a, b));
        }
    };
    let exhaustive;
    if let Some(xm) = spec.xor_masks() {
        // Linear lift: Δ(lift z, lift z') depends only on z ⊕ z'.
        exhaustive = n < 64 && (1u64 << n) <= EXHAUSTIVE_CAP;
        if exhaustive {
            for e in 0..(1u64 << n) {
                if e.count_ones() >= min_flips {
                    consider(0, e, spec.lifted_weight(e, Some(&xm)));
                    tested += 1;
                }
            }
        } else {
            let mut rng = seed::stage_rng(seed, "robustness", 0);
            for _ in 0..trials {
                let w = rng.gen_range(min_flips as usize..=n);
                let e = rand::seq::index::sample(&mut rng, n, w)
                    .iter()
                    .fold(0u64, |m, p| m | (1 << p));
                consider(0, e, spec.lifted_weight(e, Some(&xm)));
                tested += 1;
            }
        }
    } else {
        exhaustive = n < 32 && (1u64 << (2 * n)) <= EXHAUSTIVE_CAP;
        let lifted = |z: u64| spec.lift_mask(z);
        let dist = |a: &BinaryWord, b: &BinaryWord| a.bits().iter().zip(b.bits()).filter(|(x, y)| x != y).count();
        if exhaustive {
            let all: Vec<BinaryWord> = (0..(1u64 << n)).map(lifted).collect();
            for a in 0..(1u64 << n) {
                for b in 0..(1u64 << n) {
                    if (a ^ b).count_ones() >= min_flips {
                        consider(a, b, dist(&all[a as usize], &all[b as usize]));
                        tested += 1;
                    }
                }
            }
        } else {
            let mut rng = seed::stage_rng(seed, "robustness", 1);
            let full = w_mask(n);
            for _ in 0..trials {
                let a = rng.gen::<u64>() & full;
                let w = rng.gen_range(min_flips as usize..=n);
                let e = rand::seq::index::sample(&mut rng, n, w)
                    .iter()
                    .fold(0u64, |m, p| m | (1 << p));
                consider(a, a ^ e, dist(&lifted(a), &lifted(a ^ e)));
                tested += 1;
            }
        }
    }
    Ok(RobustnessReport {
        delta: best.map(|(d, _, _)| d),
        witness: best.map(|(_, a, b)| (BinaryWord::from_mask(n, a), BinaryWord::from_mask(n, b))),
        pairs_tested: tested,
        exhaustive,
    })
}

/// Rate of the lifted code: `r1 / d^{k-1}` on walks, `r1·|X(1)|/|X(k)|` on face multisets.
pub fn rate_report(spec: &LiftSpec, r1: Rational) -> Rational {
    let c = spec.collection();
    match c.kind() {
        CollectionKind::Walks { d } => r1 / Rational::from_integer((d as i64).pow(c.k() as u32 - 1)),
        CollectionKind::Faces { base_size } => r1 * Rational::new(base_size as i64, c.len() as i64),
    }
}

/// A base code together with its lifting.
#[derive(Clone, Debug)]
pub struct LiftedCode {
    base: LinearCode,
    spec: LiftSpec,
}

impl LiftedCode {
    pub fn new(base: LinearCode, spec: LiftSpec) -> Result<Self> {
        if base.len() != spec.ground_size() {
            return invalid(format!(
                "base code length {} differs from ground size {}",
                base.len(),
                spec.ground_size()
            ));
        }
        Ok(Self { base, spec })
    }

    pub fn base(&self) -> &LinearCode {
        &self.base
    }

    pub fn spec(&self) -> &LiftSpec {
        &self.spec
    }

    /// `(ground codeword mask, lifted codeword)` for every base codeword.
    pub fn codewords(&self) -> Result<Vec<(u64, BinaryWord)>> {
        Ok(self
            .base
            .codewords()?
            .iter()
            .map(|&z| (z, self.spec.lift_mask(z)))
            .collect())
    }

    /// Minimum relative distance between distinct lifted codewords.
    pub fn distance(&self) -> Result<Rational> {
        let words = self.codewords()?;
        let mut best: Option<Rational> = None;
        for (i, (_, a)) in words.iter().enumerate() {
            for (_, b) in &words[i + 1..] {
                let d = words::distance(a, b)?;
                best = Some(best.map_or(d, |x: Rational| x.min(d)));
            }
        }
        best.ok_or_else(|| Error::InvalidInput("distance of a code with one word".into()))
    }
}

/// Lifted word file: header `<collection fingerprint> <length>`, then the `+`/`-` string.
pub fn write_lifted_word(collection: &Collection, w: &BinaryWord) -> String {
    lifted_word_text(collection.fingerprint(), w)
}

/// [`write_lifted_word`] under an explicit fingerprint.
pub fn lifted_word_text(fingerprint: u64, w: &BinaryWord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{fingerprint:016x} {}", w.len());
    let _ = writeln!(out, "{}", w.to_sign_string());
    out
}

pub fn parse_lifted_word(text: &str) -> Result<(u64, BinaryWord)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let [hash, len] = parts[..] else {
        return Err(Error::Parse {
            line: 1,
            msg: "header must be `hash length`".into(),
        });
    };
    let perr = |msg: String| Error::Parse { line: 1, msg };
    let hash = u64::from_str_radix(hash, 16).map_err(|e| perr(e.to_string()))?;
    let len: usize = len.parse().map_err(|e: std::num::ParseIntError| perr(e.to_string()))?;
    let body: String = lines.collect();
    let w = BinaryWord::parse_sign_string(&body).map_err(|e| Error::Parse {
        line: 2,
        msg: e.to_string(),
    })?;
    if w.len() != len {
        return Err(Error::Parse {
            line: 2,
            msg: format!("word has length {} but header says {len}", w.len()),
        });
    }
    Ok((hash, w))
}

/// Product word file: header `fingerprint length ell`, then one bit string per symbol
/// (position 0 first).
pub fn write_product_word(collection: &Collection, x: &ProductWord) -> String {
    product_word_text(collection.fingerprint(), x)
}

/// [`write_product_word`] under an explicit fingerprint.
pub fn product_word_text(fingerprint: u64, x: &ProductWord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{fingerprint:016x} {} {}", x.symbols.len(), x.ell);
    for &s in &x.symbols {
        let _ = writeln!(out, "{}", BinaryWord::from_mask(x.ell, s).to_bit_string());
    }
    out
}

pub fn parse_product_word(text: &str) -> Result<(u64, ProductWord)> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let perr = |line: usize, msg: String| Error::Parse { line, msg };
    let parts: Vec<&str> = header.split_whitespace().collect();
    let [hash, len, ell] = parts[..] else {
        return Err(perr(1, "header must be `hash length ell`".into()));
    };
    let hash = u64::from_str_radix(hash, 16).map_err(|e| perr(1, e.to_string()))?;
    let len: usize = len
        .parse()
        .map_err(|e: std::num::ParseIntError| perr(1, e.to_string()))?;
    let ell: usize = ell
        .parse()
        .map_err(|e: std::num::ParseIntError| perr(1, e.to_string()))?;
    if ell == 0 || ell > 64 {
        return Err(perr(1, format!("symbol width {ell} outside 1..=64")));
    }
    let mut symbols = Vec::with_capacity(len);
    for (ln, line) in lines {
        let w = BinaryWord::parse_bit_string(line).map_err(|e| perr(ln + 1, e.to_string()))?;
        if w.len() != ell {
            return Err(perr(ln + 1, format!("symbol has {} bits, expected {ell}", w.len())));
        }
        symbols.push(w.to_mask()?);
    }
    if symbols.len() != len {
        return Err(perr(
            1,
            format!("found {} symbols but header says {len}", symbols.len()),
        ));
    }
    Ok((hash, ProductWord { ell, symbols }))
}
