//! Pretrained word vectors in the word2vec/GloVe text format.
//!
//! Each record is `token v1 v2 ... vd` on its own line. An optional first
//! line `<count> <dim>` (word2vec style) is recognised and checked.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};
use crate::vectorize::Vocabulary;

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    vectors: HashMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    /// Builds a table from in-memory vectors; tokens are lowercased and the
    /// first occurrence of a token wins.
    pub fn from_vectors<I, S>(dim: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: AsRef<str>,
    {
        if dim == 0 {
            return Err(Error::InvalidConfig("embedding dimension must be positive".into()));
        }
        let mut map = HashMap::new();
        for (token, v) in vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                    context: Some(format!("vector for `{}`", token.as_ref())),
                });
            }
            map.entry(token.as_ref().to_lowercase()).or_insert(v);
        }
        Ok(Self { dim, vectors: map })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn lookup(&self, token: &str) -> Option<&[f64]> {
        match self.vectors.get(token) {
            Some(v) => Some(v),
            None => self.vectors.get(&token.to_lowercase()).map(Vec::as_slice),
        }
    }

    pub fn contains(&self, token: &str) -> bool {
        self.lookup(token).is_some()
    }

    /// Cosine of the two embedding vectors, or `None` if either token is missing.
    ///
    /// A token compared with itself gives exactly 1; a zero vector gives 0.
    pub fn word_cosine(&self, t1: &str, t2: &str) -> Option<f64> {
        let a = self.lookup(t1)?;
        let b = self.lookup(t2)?;
        if t1.to_lowercase() == t2.to_lowercase() {
            return Some(1.0);
        }
        Some(vector_cosine(a, b))
    }

    /// Headered text serialization with tokens in sorted order.
    pub fn to_text(&self) -> String {
        let sorted: BTreeMap<_, _> = self.vectors.iter().collect();
        let mut out = format!("{} {}\n", sorted.len(), self.dim);
        for (token, v) in sorted {
            out.push_str(token);
            for x in v {
                let _ = write!(out, " {x}");
            }
            out.push('\n');
        }
        out
    }
}

/// Cosine of two dense vectors, clamped to `[-1, 1]`; 0 when either is zero.
pub fn vector_cosine(a: &[f64], b: &[f64]) -> f64 {
    let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0)
}

pub fn load_embeddings(path: &Path, filter: Option<&Vocabulary>) -> Result<EmbeddingTable> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_embeddings(BufReader::new(file), filter, &path.display().to_string()).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

/// Reads word vectors, keeping only tokens in `filter` when one is given.
///
/// The dimension comes from the header if present, else from the first
/// record, and every later record must match it, retained or not.
pub fn read_embeddings<R: BufRead>(
    reader: R,
    filter: Option<&Vocabulary>,
    origin: &str,
) -> Result<EmbeddingTable> {
    let mut dim: Option<usize> = None;
    let mut records = 0usize;
    let mut vectors = HashMap::new();

    for (n, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(origin, e))?;
        let line_no = n + 1;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let token = fields.next().unwrap_or_default();
        let malformed = |reason: String| Error::MalformedRecord {
            origin: origin.to_owned(),
            line: line_no,
            reason,
        };

        if records == 0 && dim.is_none() {
            let rest: Vec<&str> = line.split_whitespace().collect();
            if let [count, d] = rest.as_slice() {
                if let (Ok(_), Ok(d)) = (count.parse::<usize>(), d.parse::<usize>()) {
                    if d == 0 {
                        return Err(malformed("header declares dimension 0".into()));
                    }
                    dim = Some(d);
                    continue;
                }
            }
        }

        let token = token.to_lowercase();
        let keep = filter.is_none_or(|v| v.contains(&token)) && !vectors.contains_key(&token);
        let found = if keep {
            let values = fields
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|_| malformed(format!("`{f}` is not a number")))
                })
                .collect::<Result<Vec<f64>>>()?;
            let len = values.len();
            if len > 0 && dim.is_none_or(|d| d == len) {
                vectors.insert(token, values);
            }
            len
        } else {
            fields.count()
        };

        if found == 0 {
            return Err(malformed("record has a token but no vector components".into()));
        }
        match dim {
            None => dim = Some(found),
            Some(d) if d != found => {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found,
                    context: Some(format!("{origin}:{line_no}")),
                })
            }
            Some(_) => {}
        }
        records += 1;
    }

    if records == 0 {
        return Err(Error::EmptyInput(origin.to_owned()));
    }
    Ok(EmbeddingTable {
        dim: dim.expect("set by first record"),
        vectors,
    })
}
