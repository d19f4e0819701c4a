//! Corpus vocabulary and sparse TF-IDF vectors.
//!
//! Weights are raw term count times `ln(N / df)`, with no smoothing and no
//! length normalization. A term that occurs in every document therefore gets
//! weight zero and is not stored.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::corpus::RequirementDoc;
use crate::error::{Error, Result};

/// Bijection between terms and `0..n`, ordered lexicographically by term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, index: usize) -> Option<&str> {
        self.terms.get(index).map(String::as_str)
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn contains(&self, term: &str) -> bool {
        self.index.contains_key(term)
    }
}

/// Builds the vocabulary over the union of all document tokens.
pub fn build_vocabulary<D: AsRef<[String]>>(docs: &[D]) -> Result<Vocabulary> {
    let mut terms: Vec<String> = docs
        .iter()
        .flat_map(|d| d.as_ref().iter().cloned())
        .collect();
    terms.sort_unstable();
    terms.dedup();
    if terms.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let index = terms
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    Ok(Vocabulary { terms, index })
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdfTable {
    pub idf: Vec<f64>,
    pub doc_freq: Vec<usize>,
    pub doc_count: usize,
}

impl IdfTable {
    pub fn get(&self, index: usize) -> f64 {
        self.idf[index]
    }
}

pub fn compute_idf<D: AsRef<[String]>>(docs: &[D], vocab: &Vocabulary) -> IdfTable {
    let mut doc_freq = vec![0usize; vocab.len()];
    let mut seen = vec![usize::MAX; vocab.len()];
    for (d, doc) in docs.iter().enumerate() {
        for t in doc.as_ref() {
            if let Some(i) = vocab.index_of(t) {
                if seen[i] != d {
                    seen[i] = d;
                    doc_freq[i] += 1;
                }
            }
        }
    }
    let n = docs.len() as f64;
    let idf = doc_freq
        .iter()
        .map(|&df| if df == 0 { 0.0 } else { (n / df as f64).ln() })
        .collect();
    IdfTable {
        idf,
        doc_freq,
        doc_count: docs.len(),
    }
}

/// Sparse nonnegative vector over a vocabulary of size `dim`.
///
/// Entries are sorted by index and every stored weight is strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct TfIdfVector {
    pub owner: String,
    dim: usize,
    entries: Vec<(usize, f64)>,
}

impl TfIdfVector {
    pub fn zero(owner: impl Into<String>, dim: usize) -> Self {
        Self {
            owner: owner.into(),
            dim,
            entries: Vec::new(),
        }
    }

    /// Builds a vector from `(index, weight)` pairs in any order.
    ///
    /// Zero weights are dropped and repeated indices are summed. Negative or
    /// non-finite weights and indices `>= dim` are rejected.
    pub fn from_entries(
        owner: impl Into<String>,
        dim: usize,
        entries: impl IntoIterator<Item = (usize, f64)>,
    ) -> Result<Self> {
        let mut entries: Vec<(usize, f64)> = entries.into_iter().collect();
        for &(i, w) in &entries {
            if i >= dim {
                return Err(Error::IndexOutOfRange { index: i, len: dim });
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "vector weight at index {i} must be finite and nonnegative, got {w}"
                )));
            }
        }
        entries.sort_by_key(|&(i, _)| i);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(entries.len());
        for (i, w) in entries {
            match merged.last_mut() {
                Some((j, acc)) if *j == i => *acc += w,
                _ => merged.push((i, w)),
            }
        }
        merged.retain(|&(_, w)| w > 0.0);
        Ok(Self {
            owner: owner.into(),
            dim,
            entries: merged,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> f64 {
        self.entries
            .binary_search_by_key(&index, |&(i, _)| i)
            .map(|k| self.entries[k].1)
            .unwrap_or(0.0)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            owner: self.owner.clone(),
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|&(i, w)| (i, w * factor))
                .filter(|&(_, w)| w > 0.0)
                .collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut dense = vec![0.0; self.dim];
        for &(i, w) in &self.entries {
            dense[i] = w;
        }
        dense
    }
}

/// TF-IDF vector of one token list. Tokens outside the vocabulary are ignored.
pub fn vectorize(tokens: &[String], vocab: &Vocabulary, idf: &IdfTable) -> TfIdfVector {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for t in tokens {
        if let Some(i) = vocab.index_of(t) {
            *counts.entry(i).or_default() += 1;
        }
    }
    let mut entries: Vec<(usize, f64)> = counts
        .into_iter()
        .map(|(i, tf)| (i, tf as f64 * idf.get(i)))
        .filter(|&(_, w)| w > 0.0)
        .collect();
    entries.sort_by_key(|&(i, _)| i);
    TfIdfVector {
        owner: String::new(),
        dim: vocab.len(),
        entries,
    }
}

pub fn vectorize_doc(doc: &RequirementDoc, vocab: &Vocabulary, idf: &IdfTable) -> TfIdfVector {
    let mut v = vectorize(&doc.tokens, vocab, idf);
    v.owner = doc.id.clone();
    v
}

/// Term-document matrix as CSV: one row per vector, one column per term.
pub fn term_document_csv(vocab: &Vocabulary, vectors: &[&TfIdfVector]) -> String {
    let mut out = String::from("doc");
    for t in vocab.terms() {
        out.push(',');
        out.push_str(t);
    }
    out.push('\n');
    for v in vectors {
        out.push_str(&v.owner);
        for w in v.to_dense() {
            let _ = write!(out, ",{w}");
        }
        out.push('\n');
    }
    out
}
