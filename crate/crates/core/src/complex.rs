//! Pure simplicial complexes with exact layer measures.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_integer::Integer;
use rand::Rng as _;

use crate::collection::{Collection, CollectionKind, Parent};
use crate::error::{invalid, limit, Error, Result};
use crate::ratio::to_f64;
use crate::seed;
use crate::spectral;
use crate::Rational;

pub const FACE_CAP: usize = 1_000_000;
pub const FLAT_DENOMINATOR_CAP: i64 = 1_000_000;
/// Largest containment graph side handled by the dense SVD.
pub const CONTAINMENT_CAP: usize = 5000;

#[derive(Clone, Debug)]
struct Layer {
    faces: Vec<Vec<u32>>,
    weights: Vec<Rational>,
    index: HashMap<Vec<u32>, usize>,
}

impl Layer {
    fn from_map(map: BTreeMap<Vec<u32>, Rational>) -> Self {
        let (faces, weights): (Vec<_>, Vec<_>) = map.into_iter().unzip();
        let index = faces.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        Self { faces, weights, index }
    }
}

#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    n: usize,
    d: usize,
    /// `layers[i - 1]` holds `X(i)` with `Π_i`.
    layers: Vec<Layer>,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<u32>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v as u32);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

impl SimplicialComplex {
    /// Builds the complex from weighted top faces; repeated faces have their weights merged.
    pub fn new(n: usize, top: Vec<(Vec<u32>, Rational)>) -> Result<Self> {
        let Some(d) = top.first().map(|(f, _)| f.len()) else {
            return invalid("a complex needs at least one top face");
        };
        if d == 0 {
            return invalid("top faces must be nonempty");
        }
        if top.len() > FACE_CAP {
            return limit(format!("{} top faces exceed the cap", top.len()));
        }
        let zero = Rational::from_integer(0);
        let mut map: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (mut f, w) in top {
            f.sort_unstable();
            if f.len() != d || f.windows(2).any(|p| p[0] == p[1]) {
                return invalid(format!("face {f:?} is not a set of size {d}"));
            }
            if f.iter().any(|&v| v as usize >= n) {
                return invalid(format!("face {f:?} leaves the ground set of size {n}"));
            }
            if w <= zero {
                return invalid(format!("face {f:?} has nonpositive weight {w}"));
            }
            *map.entry(f).or_insert(zero) += w;
        }
        let total: Rational = map.values().sum();
        if total != Rational::from_integer(1) {
            return invalid(format!("top weights sum to {total}, not 1"));
        }
        let mut layers = vec![Layer::from_map(map)];
        for i in (2..=d).rev() {
            let upper = layers.last().unwrap();
            let mut lower: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
            let share = Rational::new(1, i as i64);
            for (f, &w) in upper.faces.iter().zip(&upper.weights) {
                for skip in 0..i {
                    let mut g = f.clone();
                    g.remove(skip);
                    *lower.entry(g).or_insert(zero) += w * share;
                }
            }
            layers.push(Layer::from_map(lower));
        }
        layers.reverse();
        Ok(Self { n, d, layers })
    }

    /// Uniform measure over the given top faces.
    pub fn uniform(n: usize, faces: Vec<Vec<u32>>) -> Result<Self> {
        let w = Rational::new(1, faces.len().max(1) as i64);
        Self::new(n, faces.into_iter().map(|f| (f, w)).collect())
    }

    /// All `d`-subsets of `[t]` with the uniform measure.
    pub fn complete(t: usize, d: usize) -> Result<Self> {
        if d == 0 || d > t {
            return invalid(format!("complete complex needs 1 <= d <= t, got t={t}, d={d}"));
        }
        if binomial(t, d) > FACE_CAP as u128 {
            return limit(format!("C({t},{d}) faces exceed the cap"));
        }
        Self::uniform(t, subsets(t, d))
    }

    /// Random subfamily of the complete complex: each top face kept with
    /// probability `keep`, uniform weights on the survivors.
    pub fn noisy_complete(t: usize, d: usize, keep: f64, seed: u64) -> Result<Self> {
        if !(keep > 0.0 && keep <= 1.0) {
            return invalid(format!("keep probability {keep} outside (0,1]"));
        }
        if d == 0 || d > t || binomial(t, d) > FACE_CAP as u128 {
            return invalid(format!("cannot sample faces for t={t}, d={d}"));
        }
        let mut rng = seed::stage_rng(seed, "noisy-complete", 0);
        let all = subsets(t, d);
        let mut kept: Vec<Vec<u32>> = all.iter().filter(|_| rng.gen::<f64>() < keep).cloned().collect();
        if kept.is_empty() {
            kept.push(all[rng.gen_range(0..all.len())].clone());
        }
        Self::uniform(t, kept)
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Faces of `X(i)` and their weights `Π_i`, faces sorted.
    pub fn layer(&self, i: usize) -> Result<(&[Vec<u32>], &[Rational])> {
        if i == 0 || i > self.d {
            return invalid(format!("level {i} outside 1..={}", self.d));
        }
        let l = &self.layers[i - 1];
        Ok((&l.faces, &l.weights))
    }

    pub fn weight(&self, face: &[u32]) -> Option<Rational> {
        let mut f = face.to_vec();
        f.sort_unstable();
        let l = self.layers.get(f.len().checked_sub(1)?)?;
        l.index.get(&f).map(|&i| l.weights[i])
    }

    pub fn contains(&self, face: &[u32]) -> bool {
        face.is_empty() || self.weight(face).is_some()
    }

    /// Skeleton of the link of `s`: vertices `X_s(1)`, edges `X_s(2)` weighted by `Π_{|s|+2}`.
    pub fn link_skeleton(&self, s: &[u32]) -> Result<WeightedGraph> {
        let mut s = s.to_vec();
        s.sort_unstable();
        if self.d < 2 || s.len() > self.d - 2 {
            return invalid(format!("link of a face of size {} in dimension {}", s.len(), self.d));
        }
        if !self.contains(&s) {
            return invalid(format!("face {s:?} is not in the complex"));
        }
        let (faces, weights) = self.layer(s.len() + 2)?;
        let mut vertices: Vec<u32> = Vec::new();
        let mut edges = Vec::new();
        for (f, &w) in faces.iter().zip(weights) {
            if !s.iter().all(|v| f.binary_search(v).is_ok()) {
                continue;
            }
            let rest: Vec<u32> = f.iter().copied().filter(|v| s.binary_search(v).is_err()).collect();
            vertices.extend_from_slice(&rest);
            edges.push((rest[0], rest[1], w));
        }
        vertices.sort_unstable();
        vertices.dedup();
        let pos = |v: u32| vertices.binary_search(&v).unwrap();
        let edges = edges.into_iter().map(|(a, b, w)| (pos(a), pos(b), w)).collect();
        Ok(WeightedGraph { vertices, edges })
    }

    /// `max_{|s| <= d-2} σ₂(G(X_s))`, including the empty face.
    pub fn gamma_hdx(&self) -> Result<f64> {
        if self.d < 2 {
            return invalid("links need dimension at least 2");
        }
        let mut gamma = self.link_skeleton(&[])?.sigma2()?;
        for level in 1..=self.d - 2 {
            for f in &self.layers[level - 1].faces {
                gamma = gamma.max(self.link_skeleton(f)?.sigma2()?);
            }
        }
        Ok(gamma)
    }

    /// Bipartite containment graph between `X(1)` and `X(d)`, in normalized form.
    pub fn containment_graph(&self) -> Result<ContainmentReport> {
        let (verts, pv) = self.layer(1)?;
        let (tops, pt) = self.layer(self.d)?;
        if verts.len() > CONTAINMENT_CAP || tops.len() > CONTAINMENT_CAP {
            return limit("containment graph exceeds the dense cap");
        }
        let vi: HashMap<u32, usize> = verts.iter().enumerate().map(|(i, f)| (f[0], i)).collect();
        let mut m = DMatrix::zeros(verts.len(), tops.len());
        let dinv = Rational::new(1, self.d as i64);
        for (j, t) in tops.iter().enumerate() {
            for v in t {
                let i = vi[v];
                let w = to_f64(pt[j] * dinv);
                m[(i, j)] = w / (to_f64(pv[i]) * to_f64(pt[j])).sqrt();
            }
        }
        let sv = spectral::singular_values(&m);
        let sigma2 = sv.get(1).copied().unwrap_or(0.0);
        let gamma = if self.d >= 2 { Some(self.gamma_hdx()?) } else { None };
        let inv_d = 1.0 / self.d as f64;
        let fitted_constant = gamma.and_then(|g| {
            let excess = sigma2 * sigma2 - inv_d;
            if excess <= 0.0 {
                Some(0.0)
            } else if g > 0.0 {
                Some(excess / (self.d as f64 * g))
            } else {
                None
            }
        });
        Ok(ContainmentReport {
            sigma2,
            inv_d,
            gamma,
            fitted_constant,
        })
    }

    /// Multiset realization of `Π_k`: each face repeated `Π_k(s)·N` times.
    pub fn flatten(&self, k: usize) -> Result<FaceCollection> {
        let base_size = self.layer(1)?.0.len();
        let (faces, weights) = self.layer(k)?;
        let big_n = self.flat_size(k)?;
        let mut data = Vec::new();
        let mut copies = Vec::with_capacity(faces.len());
        for (f, &w) in faces.iter().zip(weights) {
            let c = (w * Rational::from_integer(big_n)).to_integer() as usize;
            copies.push(c);
            for _ in 0..c {
                data.extend_from_slice(f);
            }
        }
        let coll = Collection::new(self.n, k, CollectionKind::Faces { base_size }, data)?;
        Ok(FaceCollection {
            inner: Arc::new(coll),
            copies,
        })
    }

    /// Common denominator `N` of `Π_k`.
    fn flat_size(&self, k: usize) -> Result<i64> {
        let (_, weights) = self.layer(k)?;
        let mut big_n = 1i64;
        for w in weights {
            big_n = big_n.lcm(w.denom());
            if big_n > FLAT_DENOMINATOR_CAP {
                return invalid(format!(
                    "level {k} is not flat below denominator {FLAT_DENOMINATOR_CAP}"
                ));
            }
        }
        Ok(big_n)
    }

    /// Complex file: header `n d`, then one face per line with an optional `w p/q` suffix.
    pub fn to_file(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.d);
        let (faces, weights) = (&self.layers[self.d - 1].faces, &self.layers[self.d - 1].weights);
        let uniform = weights.iter().all(|w| *w == weights[0]);
        for (f, w) in faces.iter().zip(weights) {
            let verts: Vec<String> = f.iter().map(u32::to_string).collect();
            out.push_str(&verts.join(" "));
            if !uniform {
                let _ = write!(out, " w {}/{}", w.numer(), w.denom());
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_file(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let perr = |line: usize, msg: String| Error::Parse { line: line + 1, msg };
        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let head: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|e| perr(hl, e.to_string())))
            .collect::<Result<_>>()?;
        let [n, d] = head[..] else {
            return Err(perr(hl, "header must be `n d`".into()));
        };
        let mut faces = Vec::new();
        let mut weighted = Vec::new();
        for (ln, line) in lines {
            let (verts, weight) = match line.split_once('w') {
                Some((v, w)) => (v, Some(w.trim())),
                None => (line, None),
            };
            let f: Vec<u32> = verts
                .split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|e| perr(ln, e.to_string())))
                .collect::<Result<_>>()?;
            if f.len() != d {
                return Err(perr(ln, format!("face has {} vertices, expected {d}", f.len())));
            }
            faces.push(f);
            weighted.push(match weight {
                Some(w) => Some(w.parse::<Rational>().map_err(|e| perr(ln, e.to_string()))?),
                None => None,
            });
        }
        if weighted.iter().all(Option::is_none) {
            Self::uniform(n, faces)
        } else if weighted.iter().all(Option::is_some) {
            Self::new(n, faces.into_iter().zip(weighted.into_iter().flatten()).collect())
        } else {
            Err(perr(0, "either all faces or none carry weights".into()))
        }
    }
}

/// Weighted undirected graph with rational edge weights.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    pub vertices: Vec<u32>,
    pub edges: Vec<(usize, usize, Rational)>,
}

impl WeightedGraph {
    pub fn weight_matrix(&self) -> DMatrix<f64> {
        let n = self.vertices.len();
        let mut w = DMatrix::zeros(n, n);
        for &(a, b, x) in &self.edges {
            w[(a, b)] += to_f64(x);
            w[(b, a)] += to_f64(x);
        }
        w
    }

    pub fn is_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b, _) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        spectral::component_count(&adj) <= 1
    }

    /// Second singular value of the random-walk operator `D⁻¹W`.
    pub fn sigma2(&self) -> Result<f64> {
        if self.vertices.len() > crate::graphs::SPECTRAL_CAP {
            return limit("skeleton exceeds the dense spectral cap");
        }
        if !self.is_connected() {
            return Ok(1.0);
        }
        let sv = spectral::sym_singular_values(&spectral::normalized_weight_matrix(&self.weight_matrix()));
        Ok(sv.get(1).copied().unwrap_or(0.0).min(1.0))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContainmentReport {
    pub sigma2: f64,
    /// The leading term `1/d` of the bound on `σ₂²`.
    pub inv_d: f64,
    pub gamma: Option<f64>,
    /// Smallest `c >= 0` with `σ₂² <= 1/d + c·d·γ`, when defined.
    pub fitted_constant: Option<f64>,
}

/// A flattened level: uniform multiset realizing `Π_k`.
#[derive(Clone, Debug)]
pub struct FaceCollection {
    inner: Arc<Collection>,
    /// Copies of each distinct face, in layer order.
    copies: Vec<usize>,
}

impl FaceCollection {
    pub fn collection(&self) -> &Arc<Collection> {
        &self.inner
    }

    pub fn copies(&self) -> &[usize] {
        &self.copies
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn k(&self) -> usize {
        self.inner.k()
    }

    /// Multiset `{(s, t) : t ∈ self, s ⊂ t, |s| = k}` with each copy remembering its parent `t`.
    ///
    /// Uniform sampling of a copy gives `Π_k` on `s` and `Π_ℓ` on the parent.
    pub fn product_reduction(&self, k: usize) -> Result<FaceCollection> {
        let ell = self.k();
        if k == 0 || k > ell {
            return invalid(format!("reduction level {k} outside 1..={ell}"));
        }
        let position_sets = subsets(ell, k);
        let mut data = Vec::with_capacity(self.len() * position_sets.len() * k);
        let mut parents = Vec::with_capacity(self.len() * position_sets.len());
        for (t_idx, t) in self.inner.tuples().enumerate() {
            for pos in &position_sets {
                let mut mask = 0u64;
                for &p in pos {
                    data.push(t[p as usize]);
                    mask |= 1 << p;
                }
                parents.push(Parent {
                    index: t_idx,
                    positions: mask,
                });
            }
        }
        let coll = Collection::new(self.inner.ground_size(), k, self.inner.kind(), data)?.with_parents(parents);
        Ok(FaceCollection {
            inner: Arc::new(coll),
            copies: Vec::new(),
        })
    }
}
