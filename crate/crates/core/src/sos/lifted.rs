//! Lifted variables `Y_s = g(Z|_s)` as polynomials in the ground moments, and
//! the quantities built from them: agreement, the entropic proxy `Ψ`, and the
//! progress step.

use std::collections::HashMap;

use crate::error::{invalid, Result};
use crate::lifting::LiftSpec;
use crate::sos::pseudo::{PseudoExpectation, MAX_GROUND};
use crate::words::BinaryWord;

/// Polynomial of `Y_s`: `(monomial mask, coefficient)` terms.
pub type Poly = Vec<(u64, f64)>;

#[derive(Clone, Debug)]
pub struct LiftedMoments {
    n: usize,
    len: usize,
    /// Distinct polynomials with their multiplicity among the tuples.
    groups: Vec<(Poly, usize)>,
    tuple_group: Vec<usize>,
}

impl LiftedMoments {
    pub fn new(spec: &LiftSpec) -> Result<Self> {
        let n = spec.ground_size();
        if n > MAX_GROUND {
            return invalid(format!("ground size {n} exceeds the moment cap"));
        }
        let mut index: HashMap<Vec<(u64, u64)>, usize> = HashMap::new();
        let mut groups: Vec<(Poly, usize)> = Vec::new();
        let mut tuple_group = Vec::with_capacity(spec.len());
        for i in 0..spec.len() {
            let poly = spec.polynomial(i);
            let key: Vec<(u64, u64)> = poly.iter().map(|&(m, c)| (m, c.to_bits())).collect();
            let g = *index.entry(key).or_insert_with(|| {
                groups.push((poly, 0));
                groups.len() - 1
            });
            groups[g].1 += 1;
            tuple_group.push(g);
        }
        Ok(Self {
            n,
            len: spec.len(),
            groups,
            tuple_group,
        })
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn groups(&self) -> &[(Poly, usize)] {
        &self.groups
    }

    pub fn tuple_group(&self) -> &[usize] {
        &self.tuple_group
    }

    /// Largest monomial size appearing in some `Y_s Y_t`.
    pub fn pair_degree(&self) -> usize {
        let mut best = 0;
        for (a, _) in &self.groups {
            for (b, _) in &self.groups {
                for &(ma, _) in a {
                    for &(mb, _) in b {
                        best = best.max((ma ^ mb).count_ones() as usize);
                    }
                }
            }
        }
        best
    }

    /// Largest monomial size in some `Y_s`.
    pub fn single_degree(&self) -> usize {
        self.groups
            .iter()
            .flat_map(|(p, _)| p.iter().map(|(m, _)| m.count_ones() as usize))
            .max()
            .unwrap_or(0)
    }

    fn check(&self, pe: &PseudoExpectation, needed: usize) -> Result<()> {
        if pe.n() != self.n {
            return invalid("pseudo-expectation and lift have different ground sets");
        }
        if pe.degree() < needed {
            return invalid(format!("degree {} is below the required {needed}", pe.degree()));
        }
        Ok(())
    }

    fn first(y: &[f64], p: &Poly) -> f64 {
        p.iter().map(|&(m, c)| c * y[m as usize]).sum()
    }

    fn pair(y: &[f64], a: &Poly, b: &Poly) -> f64 {
        let mut acc = 0.0;
        for &(ma, ca) in a {
            for &(mb, cb) in b {
                acc += ca * cb * y[(ma ^ mb) as usize];
            }
        }
        acc
    }

    /// `Ẽ[Y_s]` for every tuple.
    pub fn first_moments(&self, pe: &PseudoExpectation) -> Result<Vec<f64>> {
        self.check(pe, self.single_degree())?;
        let per_group: Vec<f64> = self.groups.iter().map(|(p, _)| Self::first(pe.moments(), p)).collect();
        Ok(self.tuple_group.iter().map(|&g| per_group[g]).collect())
    }

    /// `E_s ỹ_s Ẽ[Y_s]` in the ±1 view.
    pub fn agreement(&self, pe: &PseudoExpectation, rhs: &BinaryWord) -> Result<f64> {
        if rhs.len() != self.len {
            return invalid("right-hand side length differs from |X(k)|");
        }
        let first = self.first_moments(pe)?;
        Ok(first
            .iter()
            .enumerate()
            .map(|(i, v)| f64::from(rhs.sign(i)) * v)
            .sum::<f64>()
            / self.len as f64)
    }

    /// Entropic proxy `Ψ = E_{s,t} (Ẽ[Y_s Y_t])²`.
    pub fn psi(&self, pe: &PseudoExpectation) -> Result<f64> {
        self.check(pe, self.pair_degree())?;
        let y = pe.moments();
        let mut total = 0.0;
        for (a, ca) in &self.groups {
            for (b, cb) in &self.groups {
                let v = Self::pair(y, a, b);
                total += (*ca * *cb) as f64 * v * v;
            }
        }
        Ok(total / (self.len * self.len) as f64)
    }

    /// `Ẽ[(E_s w_s Y_s)²]` for a ±1 word `w` on `X(k)`.
    pub fn correlation_square(&self, pe: &PseudoExpectation, w: &BinaryWord) -> Result<f64> {
        if w.len() != self.len {
            return invalid("word length differs from |X(k)|");
        }
        self.check(pe, self.pair_degree())?;
        // Collapse tuples onto groups with their summed signs.
        let mut weight = vec![0.0; self.groups.len()];
        for (i, &g) in self.tuple_group.iter().enumerate() {
            weight[g] += f64::from(w.sign(i));
        }
        let y = pe.moments();
        let mut total = 0.0;
        for (gi, (a, _)) in self.groups.iter().enumerate() {
            if weight[gi] == 0.0 {
                continue;
            }
            for (hi, (b, _)) in self.groups.iter().enumerate() {
                if weight[hi] != 0.0 {
                    total += weight[gi] * weight[hi] * Self::pair(y, a, b);
                }
            }
        }
        Ok(total / (self.len * self.len) as f64)
    }
}

#[derive(Clone, Debug)]
pub struct ProgressStep {
    pub alpha: f64,
    pub psi_before: f64,
    pub psi_after: f64,
    pub pe: PseudoExpectation,
}

/// Mixes `pe` toward the point mass on `z` with weight `α* = (Ψ-δ²)/(1+Ψ-2δ²)`.
///
/// Requires `Ẽ[(E_s y_s Y_s)²] <= δ²` for `y = lift(z)` and `Ψ >= δ²`.
pub fn progress_step(
    lm: &LiftedMoments,
    spec: &LiftSpec,
    pe: &PseudoExpectation,
    z: &BinaryWord,
    delta: f64,
) -> Result<ProgressStep> {
    let y = spec.lift_word(z)?;
    let d2 = delta * delta;
    let psi = lm.psi(pe)?;
    let corr = lm.correlation_square(pe, &y)?;
    if corr > d2 + 1e-12 {
        return invalid(format!("correlation {corr} exceeds δ² = {d2}"));
    }
    if psi < d2 - 1e-12 {
        return invalid(format!("Ψ = {psi} is below δ² = {d2}"));
    }
    let alpha = ((psi - d2) / (1.0 + psi - 2.0 * d2)).max(0.0);
    let point = PseudoExpectation::delta(pe.n(), z.to_mask()?, pe.degree())?;
    let mixed = point.mix(pe, alpha)?;
    let psi_after = lm.psi(&mixed)?;
    Ok(ProgressStep {
        alpha,
        psi_before: psi,
        psi_after,
        pe: mixed,
    })
}
