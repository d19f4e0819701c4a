//! Document similarity: plain cosine and the word-similarity-aware variant
//!
//! ```text
//! similarity(A, B, sim) = (cos(A, sim·B) + cos(B, sim·A)) / 2
//! ```
//!
//! With `sim` the identity this is exactly the plain cosine, and it is
//! symmetric in `A` and `B` for any matrix.

use crate::error::{Error, Result};
use crate::vectorize::TfIdfVector;
use crate::wordsim::WordSimilarityMatrix;

/// Sparse vector as sorted `(index, value)` pairs.
pub type SparseEntries = Vec<(usize, f64)>;

fn sparse_cosine(a: &[(usize, f64)], b: &[(usize, f64)]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let norm = |v: &[(usize, f64)]| v.iter().map(|&(_, x)| x * x).sum::<f64>().sqrt();
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let (mut i, mut j, mut dot) = (0, 0, 0.0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                dot += a[i].1 * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    (dot / (na * nb)).clamp(0.0, 1.0)
}

/// Cosine of two TF-IDF vectors; 0 when either is all-zero.
pub fn cosine(a: &TfIdfVector, b: &TfIdfVector) -> f64 {
    sparse_cosine(a.entries(), b.entries())
}

fn check_dim(v: &TfIdfVector, m: &WordSimilarityMatrix) -> Result<()> {
    if v.dim() != m.n() {
        return Err(Error::DimensionMismatch {
            expected: m.n(),
            found: v.dim(),
            context: Some(format!("vector `{}` against word-similarity matrix", v.owner)),
        });
    }
    Ok(())
}

/// Sparse product `m · x`, where `(m·x)_i = sum_j m[i][j] x_j`.
pub fn mat_vec(m: &WordSimilarityMatrix, x: &TfIdfVector) -> Result<SparseEntries> {
    check_dim(x, m)?;
    let mut acc = vec![0.0; m.n()];
    let mut touched = Vec::new();
    for &(j, xj) in x.entries() {
        acc[j] += xj;
        touched.push(j);
        for &(i, v) in m.column(j) {
            acc[i] += v * xj;
            touched.push(i);
        }
    }
    touched.sort_unstable();
    touched.dedup();
    Ok(touched
        .into_iter()
        .map(|i| (i, acc[i]))
        .filter(|&(_, v)| v != 0.0)
        .collect())
}

/// Enhanced similarity from vectors and their precomputed products with the matrix.
///
/// `ma` and `mb` must be `mat_vec(m, a)` and `mat_vec(m, b)`.
pub fn enhanced_from_products(
    a: &TfIdfVector,
    ma: &[(usize, f64)],
    b: &TfIdfVector,
    mb: &[(usize, f64)],
) -> f64 {
    if a.is_zero() || b.is_zero() {
        return 0.0;
    }
    (sparse_cosine(a.entries(), mb) + sparse_cosine(b.entries(), ma)) / 2.0
}

pub fn enhanced_similarity(a: &TfIdfVector, b: &TfIdfVector, m: &WordSimilarityMatrix) -> Result<f64> {
    let ma = mat_vec(m, a)?;
    let mb = mat_vec(m, b)?;
    Ok(enhanced_from_products(a, &ma, b, &mb))
}

/// Reference implementation of [`enhanced_similarity`] over dense vectors and
/// a dense matrix with naive `O(n^2)` products. Meant for small `n`.
pub fn enhanced_similarity_dense_oracle(a: &TfIdfVector, b: &TfIdfVector, m: &WordSimilarityMatrix) -> f64 {
    let n = m.n();
    let dense_m: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j)).collect()).collect();
    let (da, db) = (a.to_dense(), b.to_dense());
    let product = |x: &[f64]| -> Vec<f64> {
        dense_m
            .iter()
            .map(|row| row.iter().zip(x).map(|(s, v)| s * v).sum())
            .collect()
    };
    let dense_cos = |x: &[f64], y: &[f64]| -> f64 {
        let dot: f64 = x.iter().zip(y).map(|(p, q)| p * q).sum();
        let nx = x.iter().map(|p| p * p).sum::<f64>().sqrt();
        let ny = y.iter().map(|q| q * q).sum::<f64>().sqrt();
        if nx == 0.0 || ny == 0.0 {
            0.0
        } else {
            dot / (nx * ny)
        }
    };
    let (ma, mb) = (product(&da), product(&db));
    (dense_cos(&da, &mb) + dense_cos(&db, &ma)) / 2.0
}
