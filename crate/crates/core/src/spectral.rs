//! Dense spectral helpers on top of nalgebra.

use nalgebra::{DMatrix, SymmetricEigen};

/// Eigenvalues of a symmetric matrix, sorted descending.
pub fn sym_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Singular values sorted descending.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = if m.nrows() >= m.ncols() {
        m.clone().svd(false, false).singular_values.iter().copied().collect()
    } else {
        m.transpose()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .collect()
    };
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Absolute eigenvalues of a symmetric matrix, sorted descending.
pub fn sym_singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut sv: Vec<f64> = sym_eigenvalues(m).into_iter().map(f64::abs).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Number of connected components of an undirected graph given by adjacency lists.
pub fn component_count(adj: &[Vec<usize>]) -> usize {
    let mut seen = vec![false; adj.len()];
    let mut count = 0;
    for start in 0..adj.len() {
        if seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
    }
    count
}

/// Symmetric matrix `D^{-1/2} W D^{-1/2}` of a weighted graph with no isolated vertices.
pub fn normalized_weight_matrix(w: &DMatrix<f64>) -> DMatrix<f64> {
    let deg: Vec<f64> = (0..w.nrows()).map(|i| w.row(i).sum()).collect();
    DMatrix::from_fn(w.nrows(), w.ncols(), |i, j| {
        if w[(i, j)] == 0.0 {
            0.0
        } else {
            w[(i, j)] / (deg[i] * deg[j]).sqrt()
        }
    })
}
