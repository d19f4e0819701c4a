//! Word-similarity matrix over the corpus vocabulary.
//!
//! Each row `i` starts from the clamped embedding cosines between term `i`
//! and every other term. Entries below `similarity_threshold` are zeroed,
//! then if the remaining off-diagonal sum exceeds `synonym_threshold` the
//! whole row is rescaled:
//!
//! ```text
//! sim[i][j] <- synonym_threshold * sim[i][j] / sum_{k != i} sim[i][k]
//! ```
//!
//! The diagonal is always 1 and takes no part in either step. Rescaling is
//! per row, so the result can be asymmetric.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::embeddings::EmbeddingTable;
use crate::error::{Error, Result};
use crate::vectorize::Vocabulary;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WordSimConfig {
    similarity_threshold: f64,
    synonym_threshold: f64,
}

impl Default for WordSimConfig {
    fn default() -> Self {
        Self {
            similarity_threshold: 0.5,
            synonym_threshold: 1.0,
        }
    }
}

impl WordSimConfig {
    pub fn new(similarity_threshold: f64, synonym_threshold: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&similarity_threshold) {
            return Err(Error::InvalidConfig(format!(
                "similarity threshold must lie in [0, 1], got {similarity_threshold}"
            )));
        }
        if !(synonym_threshold.is_finite() && synonym_threshold > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "synonym threshold must be positive, got {synonym_threshold}"
            )));
        }
        Ok(Self {
            similarity_threshold,
            synonym_threshold,
        })
    }

    pub fn similarity_threshold(&self) -> f64 {
        self.similarity_threshold
    }

    pub fn synonym_threshold(&self) -> f64 {
        self.synonym_threshold
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
struct Row {
    cols: Vec<usize>,
    values: Vec<f64>,
    pre_cap: Vec<f64>,
}

/// One off-diagonal entry of a row, before and after the cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub col: usize,
    pub pre_cap: f64,
    pub value: f64,
}

/// Sparse `n x n` matrix with an implicit unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct WordSimilarityMatrix {
    n: usize,
    rows: Vec<Row>,
    // Transpose of the off-diagonal part: for each column, (row, value).
    columns: Vec<Vec<(usize, f64)>>,
}

impl WordSimilarityMatrix {
    pub fn identity(n: usize) -> Self {
        Self::from_row_data(n, vec![Row::default(); n])
    }

    /// Hand-built matrix from explicit off-diagonal rows. No floor or cap is applied.
    pub fn from_rows(n: usize, rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        if rows.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rows.len(),
                context: Some("row count".into()),
            });
        }
        let mut data = Vec::with_capacity(n);
        for (i, mut entries) in rows.into_iter().enumerate() {
            entries.sort_by_key(|&(j, _)| j);
            let mut row = Row::default();
            for (j, v) in entries {
                if j >= n {
                    return Err(Error::IndexOutOfRange { index: j, len: n });
                }
                if j == i || !(0.0..=1.0).contains(&v) || row.cols.last() == Some(&j) {
                    return Err(Error::InvalidConfig(format!(
                        "invalid off-diagonal entry ({i}, {j}) = {v}"
                    )));
                }
                if v > 0.0 {
                    row.cols.push(j);
                    row.values.push(v);
                    row.pre_cap.push(v);
                }
            }
            data.push(row);
        }
        Ok(Self::from_row_data(n, data))
    }

    /// Builds the matrix from a raw pairwise similarity function.
    ///
    /// `raw(i, j)` is called for every `j != i`; `None` means no similarity
    /// is known (out-of-vocabulary). Negative values are clamped to 0.
    pub fn build_from_raw<F>(n: usize, cfg: &WordSimConfig, raw: F) -> Self
    where
        F: Fn(usize, usize) -> Option<f64> + Sync,
    {
        let rows = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = Row::default();
                for j in (0..n).filter(|&j| j != i) {
                    let Some(s) = raw(i, j) else { continue };
                    let s = s.clamp(0.0, 1.0);
                    if s < cfg.similarity_threshold || s == 0.0 {
                        continue;
                    }
                    row.cols.push(j);
                    row.pre_cap.push(s);
                }
                let sum: f64 = row.pre_cap.iter().sum();
                row.values = if sum > cfg.synonym_threshold {
                    row.pre_cap
                        .iter()
                        .map(|&s| cfg.synonym_threshold * s / sum)
                        .collect()
                } else {
                    row.pre_cap.clone()
                };
                row
            })
            .collect();
        Self::from_row_data(n, rows)
    }

    fn from_row_data(n: usize, rows: Vec<Row>) -> Self {
        let mut columns = vec![Vec::new(); n];
        for (i, row) in rows.iter().enumerate() {
            for (&j, &v) in row.cols.iter().zip(&row.values) {
                columns[j].push((i, v));
            }
        }
        Self { n, rows, columns }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 1.0;
        }
        let row = &self.rows[i];
        row.cols
            .binary_search(&j)
            .map(|k| row.values[k])
            .unwrap_or(0.0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().all(|r| r.cols.is_empty())
    }

    /// Number of stored off-diagonal entries.
    pub fn nnz_offdiag(&self) -> usize {
        self.rows.iter().map(|r| r.cols.len()).sum()
    }

    /// Off-diagonal entries of row `i` after the cap, in column order.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = &self.rows[i];
        r.cols.iter().copied().zip(r.values.iter().copied())
    }

    /// Off-diagonal entries of column `j`, as `(row, value)` in row order.
    pub fn column(&self, j: usize) -> &[(usize, f64)] {
        &self.columns[j]
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, len: self.n });
        }
        Ok(())
    }

    pub fn row_offdiag_sum(&self, i: usize) -> Result<f64> {
        self.check_index(i)?;
        Ok(self.rows[i].values.iter().fold(0.0, |a, v| a + v))
    }

    pub fn row_pre_cap_sum(&self, i: usize) -> Result<f64> {
        self.check_index(i)?;
        Ok(self.rows[i].pre_cap.iter().fold(0.0, |a, v| a + v))
    }

    pub fn neighbors(&self, i: usize) -> Result<Vec<Neighbor>> {
        self.check_index(i)?;
        let r = &self.rows[i];
        Ok((0..r.cols.len())
            .map(|k| Neighbor {
                col: r.cols[k],
                pre_cap: r.pre_cap[k],
                value: r.values[k],
            })
            .collect())
    }

    /// The `k` largest off-diagonal entries of row `i`, ties broken by column.
    pub fn top_neighbors(&self, i: usize, k: usize) -> Result<Vec<Neighbor>> {
        let mut all = self.neighbors(i)?;
        all.sort_by(|a, b| b.value.total_cmp(&a.value).then(a.col.cmp(&b.col)));
        all.truncate(k);
        Ok(all)
    }

    /// Nonzero off-diagonal entries as CSV triples `term_i,term_j,value`.
    pub fn triples_csv(&self, vocab: &Vocabulary) -> String {
        let mut out = String::from("term_i,term_j,value\n");
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                let _ = writeln!(
                    out,
                    "{},{},{v}",
                    vocab.term(i).unwrap_or("?"),
                    vocab.term(j).unwrap_or("?")
                );
            }
        }
        out
    }
}

/// Builds the matrix for `vocab` from embedding cosines.
///
/// Terms without an embedding keep a unit row and column.
pub fn build_matrix(vocab: &Vocabulary, table: &EmbeddingTable, cfg: &WordSimConfig) -> WordSimilarityMatrix {
    let unit: Vec<Option<Vec<f64>>> = vocab
        .terms()
        .par_iter()
        .map(|t| {
            let v = table.lookup(t)?;
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            (norm > 0.0).then(|| v.iter().map(|x| x / norm).collect())
        })
        .collect();

    WordSimilarityMatrix::build_from_raw(vocab.len(), cfg, |i, j| {
        let (a, b) = (unit[i].as_ref()?, unit[j].as_ref()?);
        Some(a.iter().zip(b).map(|(x, y)| x * y).sum())
    })
}

/// Fraction of vocabulary terms with no embedding.
pub fn oov_rate(vocab: &Vocabulary, table: &EmbeddingTable) -> f64 {
    if vocab.is_empty() {
        return 0.0;
    }
    let missing = vocab.terms().iter().filter(|t| !table.contains(t)).count();
    missing as f64 / vocab.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vectorize::build_vocabulary;
    use proptest::prelude::*;

    fn vocab(words: &[&str]) -> Vocabulary {
        build_vocabulary(&[words.iter().map(|w| w.to_string()).collect::<Vec<_>>()]).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(WordSimConfig::new(0.5, 1.0).is_ok());
        assert!(WordSimConfig::new(-0.1, 1.0).is_err());
        assert!(WordSimConfig::new(1.1, 1.0).is_err());
        assert!(WordSimConfig::new(0.5, 0.0).is_err());
        assert!(WordSimConfig::new(0.5, f64::INFINITY).is_err());
    }

    #[test]
    fn oov_vocabulary_gives_identity() {
        let v = vocab(&["alpha", "beta", "gamma"]);
        let table = EmbeddingTable::from_vectors(2, [("other", vec![1.0, 0.0])]).unwrap();
        let m = build_matrix(&v, &table, &WordSimConfig::default());
        assert!(m.is_identity());
        for i in 0..3 {
            assert_eq!(m.row_offdiag_sum(i).unwrap(), 0.0);
            assert_eq!(m.get(i, i), 1.0);
        }
        assert_eq!(oov_rate(&v, &table), 1.0);
    }

    #[test]
    fn cap_rescales_row() {
        // Row 0 has raw entries {0.6, 0.6, 0.8}; other rows see nothing.
        let raw = |i: usize, j: usize| match (i, j) {
            (0, 1) | (0, 2) => Some(0.6),
            (0, 3) => Some(0.8),
            _ => Some(0.0),
        };
        let cfg = WordSimConfig::new(0.5, 1.0).unwrap();
        let m = WordSimilarityMatrix::build_from_raw(4, &cfg, raw);
        assert!((m.get(0, 1) - 0.3).abs() < 1e-15);
        assert!((m.get(0, 2) - 0.3).abs() < 1e-15);
        assert!((m.get(0, 3) - 0.4).abs() < 1e-15);
        assert!((m.row_offdiag_sum(0).unwrap() - 1.0).abs() < 1e-15);
        assert!((m.row_pre_cap_sum(0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(m.get(0, 0), 1.0);
        // Rescaled values below the floor are kept.
        assert!(m.get(0, 1) < cfg.similarity_threshold());
        // The matrix is asymmetric now.
        assert_eq!(m.get(1, 0), 0.0);
    }

    #[test]
    fn floor_zeroes_small_entries() {
        let cfg = WordSimConfig::new(0.3, 1.0).unwrap();
        let m = WordSimilarityMatrix::build_from_raw(2, &cfg, |_, _| Some(0.25));
        assert_eq!(m.get(0, 1), 0.0);
        let m = WordSimilarityMatrix::build_from_raw(2, &cfg, |_, _| Some(0.3));
        assert_eq!(m.get(0, 1), 0.3);
    }

    #[test]
    fn negative_cosines_are_clamped() {
        let cfg = WordSimConfig::new(0.0, 1.0).unwrap();
        let m = WordSimilarityMatrix::build_from_raw(2, &cfg, |_, _| Some(-0.9));
        assert!(m.is_identity());
    }

    #[test]
    fn row_sum_accessor() {
        let m = WordSimilarityMatrix::identity(3);
        assert_eq!(m.row_offdiag_sum(2).unwrap(), 0.0);
        assert!(matches!(m.row_offdiag_sum(3), Err(Error::IndexOutOfRange { index: 3, len: 3 })));
        let m = WordSimilarityMatrix::from_rows(2, vec![vec![(1, 0.4)], vec![]]).unwrap();
        assert_eq!(m.row_offdiag_sum(0).unwrap(), 0.4);
    }

    #[test]
    fn from_rows_validation() {
        assert!(WordSimilarityMatrix::from_rows(2, vec![vec![(0, 0.4)], vec![]]).is_err());
        assert!(WordSimilarityMatrix::from_rows(2, vec![vec![(1, 1.4)], vec![]]).is_err());
        assert!(WordSimilarityMatrix::from_rows(2, vec![vec![(2, 0.4)], vec![]]).is_err());
        assert!(WordSimilarityMatrix::from_rows(2, vec![vec![]]).is_err());
    }

    #[test]
    fn embedding_matrix() {
        let v = vocab(&["authentication", "login", "football"]);
        let table = EmbeddingTable::from_vectors(
            2,
            [
                ("authentication", vec![1.0, 0.1]),
                ("login", vec![1.0, 0.2]),
                ("football", vec![-1.0, 1.0]),
            ],
        )
        .unwrap();
        let cfg = WordSimConfig::new(0.5, 2.0).unwrap();
        let m = build_matrix(&v, &table, &cfg);
        let (a, l, f) = (
            v.index_of("authentication").unwrap(),
            v.index_of("login").unwrap(),
            v.index_of("football").unwrap(),
        );
        let expected = table.word_cosine("authentication", "login").unwrap();
        assert!((m.get(a, l) - expected).abs() < 1e-12);
        assert_eq!(m.get(a, l), m.get(l, a));
        assert_eq!(m.get(a, f), 0.0);
        assert_eq!(oov_rate(&v, &table), 0.0);
    }

    #[test]
    fn top_neighbors_and_csv() {
        let m = WordSimilarityMatrix::from_rows(3, vec![vec![(1, 0.4), (2, 0.7)], vec![], vec![]]).unwrap();
        let top = m.top_neighbors(0, 1).unwrap();
        assert_eq!(top.len(), 1);
        assert_eq!(top[0].col, 2);
        assert_eq!(m.top_neighbors(0, 10).unwrap().len(), 2);
        assert!(m.top_neighbors(1, 5).unwrap().is_empty());

        let v = vocab(&["a1", "b1", "c1"]);
        assert_eq!(m.triples_csv(&v), "term_i,term_j,value\na1,b1,0.4\na1,c1,0.7\n");
        assert_eq!(m.column(2), &[(0, 0.7)]);
    }

    proptest! {
        #[test]
        fn unit_threshold_gives_identity(
            vecs in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 3), 2..8)
        ) {
            let words: Vec<String> = (0..vecs.len()).map(|i| format!("w{i:02}")).collect();
            let v = build_vocabulary(std::slice::from_ref(&words)).unwrap();
            // Skip inputs where two words share a direction.
            let table = EmbeddingTable::from_vectors(3, words.iter().zip(vecs)
                .map(|(w, x)| (w.clone(), x))).unwrap();
            let dup = (0..words.len()).any(|i| (0..words.len()).any(|j| i != j
                && table.word_cosine(&words[i], &words[j]).unwrap() > 1.0 - 1e-12));
            prop_assume!(!dup);
            let m = build_matrix(&v, &table, &WordSimConfig::new(1.0, 1.0).unwrap());
            prop_assert!(m.is_identity());
        }
    }
}
