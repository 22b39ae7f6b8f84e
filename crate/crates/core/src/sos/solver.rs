//! ADMM on the moment matrix for the two decoding programs.
//!
//! Variables are the moments `y_S` with `1 <= |S| <= degree`; `y_∅ = 1` is
//! fixed. The splitting is `X = M(y)`, `X ⪰ 0`, with the objective and the
//! agreement halfspace handled in the `y` step and the cone in the `X` step.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{invalid, Error, Result};
use crate::lifting::LiftSpec;
use crate::sos::lifted::LiftedMoments;
use crate::sos::pseudo::{level_for, matrix_index, PseudoExpectation, MAX_GROUND};
use crate::words::BinaryWord;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Objective {
    /// Minimize `Ψ` subject to agreement `E_s ỹ_s Ẽ[Y_s] >= threshold`.
    MinimizePsi { threshold: f64 },
    /// Maximize agreement with `ỹ`.
    MaximizeAgreement,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverSettings {
    pub max_iterations: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub rho: f64,
    /// Extra agreement asked of the iterate so the final PSD repair stays above the threshold.
    pub agreement_margin: f64,
    pub trajectory_every: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            max_iterations: 2000,
            abs_tol: 1e-6,
            rel_tol: 1e-5,
            rho: 0.1,
            agreement_margin: 1e-4,
            trajectory_every: 50,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    pub converged: bool,
    pub primal_residual: f64,
    pub dual_residual: f64,
    /// Smallest moment-matrix eigenvalue before the repair.
    pub min_eigenvalue: f64,
    /// Weight moved onto the uniform distribution by the repair.
    pub repair: f64,
    pub psi: f64,
    pub agreement: f64,
    /// `(iteration, Ψ)` samples.
    pub trajectory: Vec<(usize, f64)>,
}

/// Even degree `L + 2k`, capped at `n`.
pub fn default_degree(n: usize, k: usize, l: usize) -> usize {
    let t = l + 2 * k;
    (t + t % 2).min(n)
}

#[derive(Clone, Debug)]
pub struct Program {
    lm: LiftedMoments,
    rhs: BinaryWord,
    degree: usize,
    psd_level: usize,
    objective: Objective,
}

impl Program {
    pub fn new(spec: &LiftSpec, rhs: BinaryWord, degree: usize, objective: Objective) -> Result<Self> {
        let n = spec.ground_size();
        if n > MAX_GROUND {
            return Err(Error::ResourceLimit(format!("ground size {n} exceeds {MAX_GROUND}")));
        }
        if rhs.len() != spec.len() {
            return invalid("right-hand side length differs from |X(k)|");
        }
        if let Objective::MinimizePsi { threshold } = objective {
            if !threshold.is_finite() {
                return invalid("agreement threshold must be finite");
            }
            if threshold > 1.0 + 1e-12 {
                return Err(Error::Infeasible(format!("agreement threshold {threshold} exceeds 1")));
            }
        }
        let mut degree = degree.min(n);
        if degree < n && degree % 2 == 1 {
            degree -= 1;
        }
        let psd_level = level_for(n, degree);
        let lm = LiftedMoments::new(spec)?;
        let needed = match objective {
            Objective::MinimizePsi { .. } => lm.pair_degree().max(2 * lm.single_degree().div_ceil(2)),
            Objective::MaximizeAgreement => 2 * lm.single_degree().div_ceil(2),
        };
        if degree < needed.min(n) {
            return Err(Error::InvalidConfig(format!(
                "degree {degree} is below the {needed} the objective needs"
            )));
        }
        Ok(Self {
            lm,
            rhs,
            degree,
            psd_level,
            objective,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn psd_level(&self) -> usize {
        self.psd_level
    }

    pub fn lifted(&self) -> &LiftedMoments {
        &self.lm
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    pub fn solve(&self, settings: &SolverSettings) -> Result<(PseudoExpectation, SolveReport)> {
        let n = self.lm.ground_size();
        let layout = Layout::new(n, self.degree, self.psd_level);
        let obj = ObjectiveData::new(&self.lm, &self.rhs, &layout, self.objective);
        let dim = layout.index.len();
        let nv = layout.masks.len();
        let quadratic = matches!(self.objective, Objective::MinimizePsi { .. });
        let threshold = match self.objective {
            Objective::MinimizePsi { threshold } => Some(threshold + settings.agreement_margin),
            Objective::MaximizeAgreement => None,
        };

        let mut rho = settings.rho;
        let mut system = LinearSystem::new(&obj, &layout, rho, quadratic)?;
        let mut y = vec![0.0; nv];
        let mut x = DMatrix::<f64>::identity(dim, dim);
        let mut u = DMatrix::<f64>::zeros(dim, dim);
        let mut trajectory = Vec::new();
        let (mut r, mut s) = (f64::INFINITY, f64::INFINITY);
        let mut converged = false;
        let mut iterations = 0;

        for it in 0..settings.max_iterations {
            iterations = it + 1;
            let target = layout.adjoint(&(&x - &u));
            let mut b: Vec<f64> = target.iter().map(|t| rho * t).collect();
            if quadratic {
                for (bi, qi) in b.iter_mut().zip(&obj.linear) {
                    *bi -= 2.0 * qi;
                }
            } else {
                for (bi, gi) in b.iter_mut().zip(&obj.agreement) {
                    *bi += gi;
                }
            }
            y = system.solve(&b);
            if let Some(c) = threshold {
                let current = obj.agreement_constant + dot(&obj.agreement, &y);
                if current < c && system.g_curvature > 1e-15 {
                    let lambda = (c - current) / system.g_curvature;
                    for (yi, hi) in y.iter_mut().zip(&system.h_inv_g) {
                        *yi += lambda * hi;
                    }
                }
            }
            let my = layout.matrix(&y);
            let x_prev = std::mem::replace(&mut x, project_psd(&(&my + &u)));
            u += &my - &x;
            r = (&my - &x).norm();
            s = rho * (&x - &x_prev).norm();
            if settings.trajectory_every > 0 && it % settings.trajectory_every == 0 && quadratic {
                trajectory.push((it, obj.psi(&y)));
            }
            let eps_pri = dim as f64 * settings.abs_tol + settings.rel_tol * my.norm().max(x.norm());
            let eps_dual = dim as f64 * settings.abs_tol + settings.rel_tol * rho * u.norm();
            if r <= eps_pri && s <= eps_dual {
                converged = true;
                break;
            }
            if it % 25 == 24 {
                let scale = if r > 10.0 * s {
                    2.0
                } else if s > 10.0 * r {
                    0.5
                } else {
                    1.0
                };
                if scale != 1.0 {
                    rho *= scale;
                    u /= scale;
                    system = LinearSystem::new(&obj, &layout, rho, quadratic)?;
                }
            }
        }

        let mut moments = vec![0.0; 1 << n];
        moments[0] = 1.0;
        for (v, &m) in layout.masks.iter().enumerate() {
            moments[m as usize] = y[v];
        }
        let raw = PseudoExpectation::from_moments(n, self.degree, self.psd_level, moments)?;
        let min_eigenvalue = raw.min_eigenvalue();
        let (pe, repair) = if min_eigenvalue < 0.0 {
            let tau = -min_eigenvalue / (1.0 - min_eigenvalue);
            let uniform = PseudoExpectation::uniform(n, self.degree)?;
            (uniform.mix(&raw, tau)?, tau)
        } else {
            (raw, 0.0)
        };
        let psi = if self.degree >= self.lm.pair_degree().min(n) {
            self.lm.psi(&pe)?
        } else {
            f64::NAN
        };
        let agreement = self.lm.agreement(&pe, &self.rhs)?;
        if quadratic {
            trajectory.push((iterations, psi));
        }
        let report = SolveReport {
            iterations,
            converged,
            primal_residual: r,
            dual_residual: s,
            min_eigenvalue,
            repair,
            psi,
            agreement,
            trajectory,
        };
        if let Objective::MinimizePsi { threshold } = self.objective {
            if agreement < threshold - 1e-3 {
                return Err(Error::Infeasible(format!(
                    "agreement {agreement:.6} below threshold {threshold:.6} after {iterations} iterations \
                     (primal residual {r:.3e})"
                )));
            }
        }
        Ok((pe, report))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn project_psd(m: &DMatrix<f64>) -> DMatrix<f64> {
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut v = eig.eigenvectors.clone();
    for (j, &l) in eig.eigenvalues.iter().enumerate() {
        let w = l.max(0.0);
        v.column_mut(j).scale_mut(w);
    }
    &v * eig.eigenvectors.transpose()
}

/// Variables and their positions in the moment matrix.
struct Layout {
    index: Vec<u64>,
    masks: Vec<u64>,
    /// Variable of each matrix entry (row-major); `None` for the constant `y_∅`.
    entry: Vec<Option<u32>>,
    counts: Vec<f64>,
    var_of: HashMap<u64, usize>,
}

impl Layout {
    fn new(n: usize, degree: usize, psd_level: usize) -> Self {
        let index = matrix_index(n, psd_level);
        let masks: Vec<u64> = matrix_index(n, degree).into_iter().filter(|&m| m != 0).collect();
        let var_of: HashMap<u64, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let dim = index.len();
        let mut entry = Vec::with_capacity(dim * dim);
        let mut counts = vec![0.0; masks.len()];
        for &a in &index {
            for &b in &index {
                let m = a ^ b;
                if m == 0 {
                    entry.push(None);
                } else {
                    let v = var_of[&m];
                    counts[v] += 1.0;
                    entry.push(Some(v as u32));
                }
            }
        }
        Self {
            index,
            masks,
            entry,
            counts,
            var_of,
        }
    }

    fn matrix(&self, y: &[f64]) -> DMatrix<f64> {
        let dim = self.index.len();
        DMatrix::from_fn(dim, dim, |i, j| match self.entry[i * dim + j] {
            None => 1.0,
            Some(v) => y[v as usize],
        })
    }

    /// `M*(Z)_v`: sum of the entries of `Z` that hold variable `v`.
    fn adjoint(&self, z: &DMatrix<f64>) -> Vec<f64> {
        let dim = self.index.len();
        let mut out = vec![0.0; self.masks.len()];
        for i in 0..dim {
            for j in 0..dim {
                if let Some(v) = self.entry[i * dim + j] {
                    out[v as usize] += z[(i, j)];
                }
            }
        }
        out
    }
}

/// Objective in variable coordinates: `Ψ = yᵀQy + 2qᵀy + c` and agreement `gᵀy + g₀`.
struct ObjectiveData {
    active: Vec<usize>,
    quad: DMatrix<f64>,
    linear: Vec<f64>,
    constant: f64,
    agreement: Vec<f64>,
    agreement_constant: f64,
}

impl ObjectiveData {
    fn new(lm: &LiftedMoments, rhs: &BinaryWord, layout: &Layout, objective: Objective) -> Self {
        let nv = layout.masks.len();
        let norm = lm.len() as f64;
        let mut agreement = vec![0.0; nv];
        let mut agreement_constant = 0.0;
        for (i, &g) in lm.tuple_group().iter().enumerate() {
            let sign = f64::from(rhs.sign(i)) / norm;
            for &(m, c) in &lm.groups()[g].0 {
                match layout.var_of.get(&m) {
                    Some(&v) => agreement[v] += sign * c,
                    None => agreement_constant += sign * c,
                }
            }
        }

        let mut terms: HashMap<(u64, u64), f64> = HashMap::new();
        if matches!(objective, Objective::MinimizePsi { .. }) {
            let groups = lm.groups();
            let mut v: Vec<(u64, f64)> = Vec::new();
            for (a, ca) in groups {
                for (b, cb) in groups {
                    let w = (*ca * *cb) as f64 / (norm * norm);
                    v.clear();
                    for &(ma, xa) in a {
                        for &(mb, xb) in b {
                            v.push((ma ^ mb, xa * xb));
                        }
                    }
                    v.sort_by_key(|t| t.0);
                    let mut merged: Vec<(u64, f64)> = Vec::with_capacity(v.len());
                    for &(m, c) in &v {
                        match merged.last_mut() {
                            Some(last) if last.0 == m => last.1 += c,
                            _ => merged.push((m, c)),
                        }
                    }
                    for &(m1, c1) in &merged {
                        for &(m2, c2) in &merged {
                            *terms.entry((m1, m2)).or_insert(0.0) += w * c1 * c2;
                        }
                    }
                }
            }
        }
        let mut active: Vec<usize> = terms
            .keys()
            .filter(|(m, _)| *m != 0)
            .map(|(m, _)| layout.var_of[m])
            .collect();
        active.sort_unstable();
        active.dedup();
        let pos: HashMap<usize, usize> = active.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut quad = DMatrix::zeros(active.len(), active.len());
        let mut linear = vec![0.0; nv];
        let mut constant = 0.0;
        for (&(m1, m2), &w) in &terms {
            match (m1, m2) {
                (0, 0) => constant += w,
                (0, m) => linear[layout.var_of[&m]] += w,
                (_, 0) => {}
                (a, b) => quad[(pos[&layout.var_of[&a]], pos[&layout.var_of[&b]])] += w,
            }
        }
        Self {
            active,
            quad,
            linear,
            constant,
            agreement,
            agreement_constant,
        }
    }

    fn psi(&self, y: &[f64]) -> f64 {
        let ya = DVector::from_iterator(self.active.len(), self.active.iter().map(|&v| y[v]));
        (ya.transpose() * &self.quad * &ya)[(0, 0)] + 2.0 * dot(&self.linear, y) + self.constant
    }
}

/// `H = 2Q + ρD`, dense on the active block and diagonal elsewhere.
struct LinearSystem {
    active: Vec<usize>,
    chol: Option<nalgebra::Cholesky<f64, nalgebra::Dyn>>,
    diag: Vec<f64>,
    h_inv_g: Vec<f64>,
    g_curvature: f64,
}

impl LinearSystem {
    fn new(obj: &ObjectiveData, layout: &Layout, rho: f64, quadratic: bool) -> Result<Self> {
        let diag: Vec<f64> = layout.counts.iter().map(|c| rho * c).collect();
        let (active, chol) = if quadratic && !obj.active.is_empty() {
            let mut h = &obj.quad * 2.0;
            for (i, &v) in obj.active.iter().enumerate() {
                h[(i, i)] += diag[v];
            }
            let chol = nalgebra::Cholesky::new(h)
                .ok_or_else(|| Error::InvalidConfig("ADMM system is not positive definite".into()))?;
            (obj.active.clone(), Some(chol))
        } else {
            (Vec::new(), None)
        };
        let mut sys = Self {
            active,
            chol,
            diag,
            h_inv_g: Vec::new(),
            g_curvature: 0.0,
        };
        sys.h_inv_g = sys.solve(&obj.agreement);
        sys.g_curvature = dot(&obj.agreement, &sys.h_inv_g);
        Ok(sys)
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = b.iter().zip(&self.diag).map(|(x, d)| x / d).collect();
        if let Some(chol) = &self.chol {
            let rhs = DVector::from_iterator(self.active.len(), self.active.iter().map(|&v| b[v]));
            let sol = chol.solve(&rhs);
            for (i, &v) in self.active.iter().enumerate() {
                out[v] = sol[i];
            }
        }
        out
    }
}
