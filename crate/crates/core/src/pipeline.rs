//! Wires the stages together: preprocess, vocabulary, IDF, vectors.

use crate::corpus::{Level, ProjectBundle};
use crate::embeddings::EmbeddingTable;
use crate::error::{Error, Result};
use crate::linker::{best_f2, score_all, sweep, threshold_grid, DocVectors, LinkerConfig, Method, SweepRow};
use crate::preprocess::Preprocessor;
use crate::vectorize::{build_vocabulary, compute_idf, vectorize_doc, IdfTable, TfIdfVector, Vocabulary};
use crate::wordsim::{build_matrix, WordSimConfig};

/// A bundle with tokens filled in and every requirement vectorized over the
/// shared HLR ∪ LLR vocabulary.
#[derive(Debug, Clone)]
pub struct PreparedCorpus {
    pub bundle: ProjectBundle,
    pub vocab: Vocabulary,
    pub idf: IdfTable,
    pub vectors: DocVectors,
}

impl PreparedCorpus {
    pub fn prepare(mut bundle: ProjectBundle, preprocessor: &Preprocessor) -> Result<Self> {
        preprocessor.apply(&mut bundle);
        let token_lists: Vec<&[String]> = bundle.docs().map(|d| d.tokens.as_slice()).collect();
        let vocab = build_vocabulary(&token_lists)?;
        let idf = compute_idf(&token_lists, &vocab);

        let mut vectors = DocVectors::default();
        for doc in bundle.docs() {
            vectors.insert(doc.level, vectorize_doc(doc, &vocab, &idf));
        }
        Ok(Self {
            bundle,
            vocab,
            idf,
            vectors,
        })
    }

    /// Vectors in bundle order, HLRs first.
    pub fn ordered_vectors(&self) -> Vec<&TfIdfVector> {
        self.bundle
            .docs()
            .filter_map(|d| self.vectors.get(d.level, &d.id))
            .collect()
    }

    /// Number of requirements whose vector is all-zero after preprocessing.
    pub fn empty_docs(&self, level: Level) -> usize {
        let side = match level {
            Level::High => &self.vectors.high,
            Level::Low => &self.vectors.low,
        };
        side.values().filter(|v| v.is_zero()).count()
    }
}

/// Best sweep row for one word-similarity setting.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub similarity_threshold: f64,
    pub synonym_threshold: f64,
    pub best: SweepRow,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodComparison {
    pub plain: SweepRow,
    pub enhanced: Vec<GridPoint>,
}

impl MethodComparison {
    /// Highest-F2 enhanced setting; the first one wins ties.
    pub fn best_enhanced(&self) -> Option<&GridPoint> {
        self.enhanced
            .iter()
            .fold(None, |acc: Option<&GridPoint>, p| match acc {
                Some(a) if a.best.f2 >= p.best.f2 => Some(a),
                _ => Some(p),
            })
    }
}

/// Sweeps the link threshold for plain VSM and for the enhanced method at
/// every `(similarity, synonym)` threshold combination.
pub fn compare_methods(
    corpus: &PreparedCorpus,
    table: &EmbeddingTable,
    similarity_thresholds: &[f64],
    synonym_thresholds: &[f64],
    step: f64,
) -> Result<MethodComparison> {
    let answers = corpus
        .bundle
        .answers
        .as_ref()
        .ok_or_else(|| Error::InvalidConfig("method comparison needs an answer set".into()))?;
    let grid = threshold_grid(step)?;
    let best_of = |matrix: Option<&_>, method| -> Result<SweepRow> {
        let cfg = LinkerConfig::new(0.0, method)?;
        let scored = score_all(&corpus.bundle, &corpus.vectors, matrix, &cfg)?;
        let rows = sweep(&scored, answers, &grid)?;
        Ok(best_f2(&rows).cloned().expect("grid is never empty"))
    };

    let plain = best_of(None, Method::PlainVsm)?;
    let mut enhanced = Vec::new();
    for &sim in similarity_thresholds {
        for &syn in synonym_thresholds {
            let m = build_matrix(&corpus.vocab, table, &WordSimConfig::new(sim, syn)?);
            enhanced.push(GridPoint {
                similarity_threshold: sim,
                synonym_threshold: syn,
                best: best_of(Some(&m), Method::Enhanced)?,
            });
        }
    }
    Ok(MethodComparison { plain, enhanced })
}
