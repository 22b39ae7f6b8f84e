//! Walk collections `W_G(k)`, swap operators and splitting trees.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::collection::{Collection, CollectionKind};
use crate::error::{invalid, limit, Result};
use crate::graphs::RegularGraph;
use crate::spectral;
use crate::Rational;

pub const WALK_CAP: usize = 10_000_000;
/// Largest `|W(k1)| + |W(k2)|` for dense swap-operator spectra.
pub const SWAP_SPECTRAL_CAP: usize = 5000;

const EIGEN_TOL: f64 = 1e-9;

/// All walks with `k` vertices, in lexicographic order, under the uniform measure.
#[derive(Clone, Debug)]
pub struct WalkCollection {
    graph: RegularGraph,
    inner: Arc<Collection>,
}

impl WalkCollection {
    pub fn enumerate(graph: &RegularGraph, k: usize) -> Result<Self> {
        Self::enumerate_with_cap(graph, k, WALK_CAP)
    }

    pub fn enumerate_with_cap(graph: &RegularGraph, k: usize, cap: usize) -> Result<Self> {
        if k == 0 {
            return invalid("walks need at least one vertex");
        }
        let n = graph.n();
        let d = graph.degree();
        let count = (d as u128).pow(k as u32 - 1) * n as u128;
        if count > cap as u128 {
            return limit(format!("{count} walks exceed the cap {cap}"));
        }
        let mut data = Vec::with_capacity(count as usize * k);
        let mut walk = Vec::with_capacity(k);
        for v in 0..n {
            walk.push(v as u32);
            extend(graph, k, &mut walk, &mut data);
            walk.pop();
        }
        let inner = Collection::new(n, k, CollectionKind::Walks { d }, data)?;
        Ok(Self {
            graph: graph.clone(),
            inner: Arc::new(inner),
        })
    }

    pub fn graph(&self) -> &RegularGraph {
        &self.graph
    }

    pub fn k(&self) -> usize {
        self.inner.k()
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn walk(&self, i: usize) -> &[u32] {
        self.inner.tuple(i)
    }

    pub fn collection(&self) -> &Arc<Collection> {
        &self.inner
    }

    /// Position of `walk` in the enumeration, computed from neighbor ranks.
    pub fn index_of(&self, walk: &[u32]) -> Option<usize> {
        if walk.len() != self.k() {
            return None;
        }
        let d = self.graph.degree();
        let first = walk[0] as usize;
        if first >= self.graph.n() {
            return None;
        }
        let mut idx = first;
        for pair in walk.windows(2) {
            let nb = self.graph.neighbors(pair[0] as usize);
            let pos = nb.binary_search(&(pair[1] as usize)).ok()?;
            idx = idx * d + pos;
        }
        Some(idx)
    }

    /// Exact distribution of the window `start..start+len` under the uniform walk measure.
    pub fn window_marginal(&self, start: usize, len: usize) -> Result<BTreeMap<Vec<u32>, Rational>> {
        if len == 0 || start + len > self.k() {
            return invalid("window outside the walk");
        }
        let total = self.len() as i64;
        let mut counts: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        for w in self.inner.tuples() {
            *counts.entry(w[start..start + len].to_vec()).or_default() += 1;
        }
        Ok(counts.into_iter().map(|(w, c)| (w, Rational::new(c, total))).collect())
    }
}

fn extend(graph: &RegularGraph, k: usize, walk: &mut Vec<u32>, out: &mut Vec<u32>) {
    if walk.len() == k {
        out.extend_from_slice(walk);
        return;
    }
    let last = *walk.last().unwrap() as usize;
    for &u in graph.neighbors(last) {
        walk.push(u as u32);
        extend(graph, k, walk, out);
        walk.pop();
    }
}

/// The walk swap operator `S_{k1,k2}` from functions on `W(k2)` to functions on `W(k1)`.
#[derive(Clone, Debug)]
pub struct SwapOperator {
    pub k1: usize,
    pub k2: usize,
    /// Row-stochastic matrix, rows indexed by `W(k1)` and columns by `W(k2)`.
    pub matrix: DMatrix<f64>,
}

impl SwapOperator {
    pub fn new(graph: &RegularGraph, k1: usize, k2: usize) -> Result<Self> {
        if k1 == 0 || k2 == 0 {
            return invalid("swap operator needs k1, k2 >= 1");
        }
        let w1 = WalkCollection::enumerate(graph, k1)?;
        let w2 = WalkCollection::enumerate(graph, k2)?;
        if w1.len() + w2.len() > SWAP_SPECTRAL_CAP {
            return limit(format!(
                "swap operator of size {}x{} exceeds the dense cap",
                w1.len(),
                w2.len()
            ));
        }
        let entry = 1.0 / (graph.degree() as f64).powi(k2 as i32);
        let mut matrix = DMatrix::zeros(w1.len(), w2.len());
        for i in 0..w1.len() {
            let last = *w1.walk(i).last().unwrap() as usize;
            for j in 0..w2.len() {
                if graph.adjacent(last, w2.walk(j)[0] as usize) {
                    matrix[(i, j)] = entry;
                }
            }
        }
        Ok(Self { k1, k2, matrix })
    }

    /// The operator expressed in orthonormal bases of the two uniform `L²` spaces.
    pub fn normalized(&self) -> DMatrix<f64> {
        let scale = (self.matrix.ncols() as f64 / self.matrix.nrows() as f64).sqrt();
        &self.matrix * scale
    }

    /// Singular values of the operator between the uniform `L²` spaces, descending.
    pub fn singular_values(&self) -> Vec<f64> {
        spectral::singular_values(&self.normalized())
    }

    /// The bipartite symmetrization `[[0, S], [Sᵀ, 0]]`.
    pub fn symmetrized(&self) -> DMatrix<f64> {
        let s = self.normalized();
        let (r, c) = s.shape();
        let mut u = DMatrix::zeros(r + c, r + c);
        u.view_mut((0, r), (r, c)).copy_from(&s);
        u.view_mut((r, 0), (c, r)).copy_from(&s.transpose());
        u
    }

    /// Eigenvalues of the symmetrization at least `tau`.
    pub fn threshold_rank(&self, tau: f64) -> usize {
        spectral::sym_eigenvalues(&self.symmetrized())
            .iter()
            .filter(|&&e| e >= tau - EIGEN_TOL)
            .count()
    }
}

/// Binary tree whose leaves are labelled 1 and internal nodes carry the sum of their children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplittingTree {
    Leaf,
    Node(Box<SplittingTree>, Box<SplittingTree>),
}

impl SplittingTree {
    pub fn label(&self) -> usize {
        match self {
            Self::Leaf => 1,
            Self::Node(l, r) => l.label() + r.label(),
        }
    }

    /// Split as evenly as possible at every node, larger half on the left.
    pub fn balanced(k: usize) -> Result<Self> {
        match k {
            0 => invalid("a splitting tree needs k >= 1"),
            1 => Ok(Self::Leaf),
            _ => {
                let left = k.div_ceil(2);
                Ok(Self::Node(
                    Box::new(Self::balanced(left)?),
                    Box::new(Self::balanced(k - left)?),
                ))
            }
        }
    }

    /// Peel one leaf off the right at every level.
    pub fn comb(k: usize) -> Result<Self> {
        match k {
            0 => invalid("a splitting tree needs k >= 1"),
            1 => Ok(Self::Leaf),
            _ => Ok(Self::Node(Box::new(Self::comb(k - 1)?), Box::new(Self::Leaf))),
        }
    }

    /// `(k1, k2)` for every internal node, in pre-order.
    pub fn internal_splits(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<(usize, usize)>) {
        if let Self::Node(l, r) = self {
            out.push((l.label(), r.label()));
            l.collect(out);
            r.collect(out);
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NodeRank {
    pub k1: usize,
    pub k2: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplitReport {
    pub max_rank: usize,
    pub nodes: Vec<NodeRank>,
}

/// Threshold ranks of the symmetrized swap operators along `tree`.
pub fn splittability(wc: &WalkCollection, tree: &SplittingTree, tau: f64) -> Result<SplitReport> {
    if tree.label() != wc.k() {
        return invalid(format!(
            "tree has {} leaves but walks have {} vertices",
            tree.label(),
            wc.k()
        ));
    }
    let mut cache: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut nodes = Vec::new();
    for (k1, k2) in tree.internal_splits() {
        let rank = match cache.get(&(k1, k2)) {
            Some(&r) => r,
            None => {
                let r = SwapOperator::new(wc.graph(), k1, k2)?.threshold_rank(tau);
                cache.insert((k1, k2), r);
                r
            }
        };
        nodes.push(NodeRank { k1, k2, rank });
    }
    Ok(SplitReport {
        max_rank: nodes.iter().map(|n| n.rank).max().unwrap_or(0),
        nodes,
    })
}
