//! Index sets `X(k)` shared by walks and faces: a multiset of `k`-tuples over
//! a ground set `[n]` carrying the uniform measure.

use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CollectionKind {
    /// Walks on a `d`-regular graph.
    Walks { d: usize },
    /// Faces of a flattened complex; `base_size` is the number of vertices `|X(1)|`.
    Faces { base_size: usize },
}

/// Parent of a copy in a product-reduction multiset: the index of the parent
/// tuple at level `ℓ` and the positions of the child inside it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Parent {
    pub index: usize,
    pub positions: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collection {
    n: usize,
    k: usize,
    kind: CollectionKind,
    data: Vec<u32>,
    parents: Option<Vec<Parent>>,
}

impl Collection {
    pub fn new(n: usize, k: usize, kind: CollectionKind, data: Vec<u32>) -> Result<Self> {
        if k == 0 {
            return invalid("tuples must have at least one entry");
        }
        if !data.len().is_multiple_of(k) {
            return invalid("flat tuple storage is not a multiple of k");
        }
        if data.iter().any(|&v| v as usize >= n) {
            return invalid(format!("tuple entry out of range for ground size {n}"));
        }
        Ok(Self {
            n,
            k,
            kind,
            data,
            parents: None,
        })
    }

    pub(crate) fn with_parents(mut self, parents: Vec<Parent>) -> Self {
        debug_assert_eq!(parents.len(), self.len());
        self.parents = Some(parents);
        self
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> CollectionKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.k
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn tuple(&self, i: usize) -> &[u32] {
        &self.data[i * self.k..(i + 1) * self.k]
    }

    pub fn tuples(&self) -> impl Iterator<Item = &[u32]> {
        self.data.chunks(self.k)
    }

    pub fn parents(&self) -> Option<&[Parent]> {
        self.parents.as_deref()
    }

    /// Vertices of odd multiplicity in tuple `i`, sorted.
    pub fn reduced(&self, i: usize) -> Vec<u32> {
        let mut v = self.tuple(i).to_vec();
        v.sort_unstable();
        let mut out = Vec::with_capacity(v.len());
        let mut j = 0;
        while j < v.len() {
            let mut e = j;
            while e < v.len() && v[e] == v[j] {
                e += 1;
            }
            if (e - j) % 2 == 1 {
                out.push(v[j]);
            }
            j = e;
        }
        out
    }

    /// Distinct vertices of tuple `i`, sorted.
    pub fn distinct(&self, i: usize) -> Vec<u32> {
        let mut v = self.tuple(i).to_vec();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Stable FNV-1a fingerprint of the tuple multiset.
    pub fn fingerprint(&self) -> u64 {
        let mut h = 0xcbf2_9ce4_8422_2325u64;
        let mut mix = |x: u64| {
            for b in x.to_le_bytes() {
                h = (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01B3);
            }
        };
        mix(self.n as u64);
        mix(self.k as u64);
        for &v in &self.data {
            mix(u64::from(v));
        }
        h
    }
}

/// Bitmask of a vertex set; requires every vertex below 64.
pub fn vertex_mask(vs: &[u32]) -> u64 {
    vs.iter().fold(0u64, |m, &v| m ^ (1u64 << v))
}
