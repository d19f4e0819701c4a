//! Cross-level requirement trace-link recovery.
//!
//! Requirements are turned into TF-IDF bag-of-words vectors and compared
//! with a cosine that also credits related words, using a word-similarity
//! matrix derived from pretrained embeddings. Pairs above a threshold
//! become candidate trace links, which can be scored against a gold answer
//! set with precision, recall, F1/F2 and the Hayes acceptance levels.
//!
//! ```
//! use reqtrace::prelude::*;
//!
//! let docs = [vec!["use".to_string(), "authentication".to_string()],
//!             vec!["add".to_string(), "login".to_string()]];
//! let vocab = build_vocabulary(&docs).unwrap();
//! let idf = compute_idf(&docs, &vocab);
//! let a = vectorize(&docs[0], &vocab, &idf);
//! let b = vectorize(&docs[1], &vocab, &idf);
//! assert_eq!(cosine(&a, &b), 0.0);
//!
//! let (auth, login) = (vocab.index_of("authentication").unwrap(), vocab.index_of("login").unwrap());
//! let mut rows = vec![Vec::new(); vocab.len()];
//! rows[auth].push((login, 0.8));
//! rows[login].push((auth, 0.8));
//! let m = WordSimilarityMatrix::from_rows(vocab.len(), rows).unwrap();
//! assert!(enhanced_similarity(&a, &b, &m).unwrap() > 0.0);
//! ```
//!
//! The `examples/` directory has one runnable program per stage, and the
//! `reqtrace` binary exposes the whole pipeline on the command line.

pub mod cli;
pub mod corpus;
pub mod embeddings;
pub mod error;
pub mod evalkit;
pub mod linker;
pub mod pipeline;
pub mod preprocess;
pub mod simfunc;
pub mod vectorize;
pub mod wordsim;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::corpus::{
        load_answer_set, load_requirements, AnswerSet, Level, ProjectBundle, RequirementDoc,
    };
    pub use crate::embeddings::{load_embeddings, EmbeddingTable};
    pub use crate::error::{Error, Result};
    pub use crate::evalkit::{evaluate, f_beta, hayes_level, EvalReport, HayesLevel};
    pub use crate::linker::{
        best_f2, filter_links, score_all, sweep, threshold_grid, CandidateLink, DocVectors,
        LinkerConfig, Method, SweepRow,
    };
    pub use crate::pipeline::{compare_methods, MethodComparison, PreparedCorpus};
    pub use crate::preprocess::{Normalizer, Preprocessor, StopwordList};
    pub use crate::simfunc::{cosine, enhanced_similarity};
    pub use crate::vectorize::{build_vocabulary, compute_idf, vectorize, TfIdfVector, Vocabulary};
    pub use crate::wordsim::{build_matrix, WordSimConfig, WordSimilarityMatrix};
}
