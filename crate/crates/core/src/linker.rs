//! Pairwise scoring of high-level against low-level requirements, threshold
//! filtering and threshold sweeps.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;

use crate::corpus::{AnswerSet, Level, ProjectBundle};
use crate::error::{Error, Result};
use crate::evalkit::{evaluate, HayesLevel, hayes_level};
use crate::simfunc::{cosine, enhanced_from_products, mat_vec};
use crate::vectorize::TfIdfVector;
use crate::wordsim::WordSimilarityMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateLink {
    pub hlr_id: String,
    pub llr_id: String,
    pub score: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Method {
    /// Word-similarity-aware cosine.
    #[default]
    Enhanced,
    /// Plain cosine on TF-IDF vectors.
    PlainVsm,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "enhanced" => Ok(Method::Enhanced),
            "plain-vsm" | "vsm" => Ok(Method::PlainVsm),
            other => Err(Error::InvalidConfig(format!(
                "unknown method `{other}` (expected enhanced or plain-vsm)"
            ))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Enhanced => "enhanced",
            Method::PlainVsm => "plain-vsm",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkerConfig {
    link_threshold: f64,
    pub method: Method,
}

impl Default for LinkerConfig {
    fn default() -> Self {
        Self {
            link_threshold: 0.5,
            method: Method::Enhanced,
        }
    }
}

impl LinkerConfig {
    pub fn new(link_threshold: f64, method: Method) -> Result<Self> {
        if !(0.0..=1.0).contains(&link_threshold) {
            return Err(Error::InvalidConfig(format!(
                "link threshold must lie in [0, 1], got {link_threshold}"
            )));
        }
        Ok(Self {
            link_threshold,
            method,
        })
    }

    pub fn link_threshold(&self) -> f64 {
        self.link_threshold
    }
}

/// TF-IDF vectors of a bundle, keyed by requirement id within each level.
#[derive(Debug, Clone, Default)]
pub struct DocVectors {
    pub high: BTreeMap<String, TfIdfVector>,
    pub low: BTreeMap<String, TfIdfVector>,
}

impl DocVectors {
    pub fn insert(&mut self, level: Level, v: TfIdfVector) {
        match level {
            Level::High => self.high.insert(v.owner.clone(), v),
            Level::Low => self.low.insert(v.owner.clone(), v),
        };
    }

    pub fn get(&self, level: Level, id: &str) -> Option<&TfIdfVector> {
        match level {
            Level::High => self.high.get(id),
            Level::Low => self.low.get(id),
        }
    }
}

fn collect_side<'a>(
    bundle_docs: &'a [crate::corpus::RequirementDoc],
    level: Level,
    vectors: &'a DocVectors,
) -> Result<Vec<(&'a str, &'a TfIdfVector)>> {
    let mut side: Vec<(&str, &TfIdfVector)> = bundle_docs
        .iter()
        .map(|d| {
            vectors
                .get(level, &d.id)
                .map(|v| (d.id.as_str(), v))
                .ok_or_else(|| Error::MissingVector {
                    level: level.to_string(),
                    id: d.id.clone(),
                })
        })
        .collect::<Result<_>>()?;
    side.sort_by(|a, b| a.0.cmp(b.0));
    Ok(side)
}

/// Scores every HLR x LLR pair, sorted by `(hlr_id, llr_id)`.
///
/// `matrix` is required for [`Method::Enhanced`] and ignored otherwise.
pub fn score_all(
    bundle: &ProjectBundle,
    vectors: &DocVectors,
    matrix: Option<&WordSimilarityMatrix>,
    cfg: &LinkerConfig,
) -> Result<Vec<CandidateLink>> {
    let high = collect_side(&bundle.high, Level::High, vectors)?;
    let low = collect_side(&bundle.low, Level::Low, vectors)?;

    let pairs: Vec<(usize, usize)> = (0..high.len())
        .flat_map(|h| (0..low.len()).map(move |l| (h, l)))
        .collect();
    let link = |h: usize, l: usize, score: f64| CandidateLink {
        hlr_id: high[h].0.to_owned(),
        llr_id: low[l].0.to_owned(),
        score,
    };

    let links = match cfg.method {
        Method::PlainVsm => pairs
            .par_iter()
            .map(|&(h, l)| link(h, l, cosine(high[h].1, low[l].1)))
            .collect(),
        Method::Enhanced => {
            let m = matrix.ok_or_else(|| {
                Error::InvalidConfig("enhanced scoring needs a word-similarity matrix".into())
            })?;
            let products = |side: &[(&str, &TfIdfVector)]| -> Result<Vec<Vec<(usize, f64)>>> {
                side.par_iter().map(|(_, v)| mat_vec(m, v)).collect()
            };
            let (mh, ml) = (products(&high)?, products(&low)?);
            pairs
                .par_iter()
                .map(|&(h, l)| {
                    let s = enhanced_from_products(high[h].1, &mh[h], low[l].1, &ml[l]);
                    link(h, l, s)
                })
                .collect()
        }
    };
    Ok(links)
}

/// Links whose score is at least `threshold`, in input order.
pub fn filter_links(scored: &[CandidateLink], threshold: f64) -> Vec<CandidateLink> {
    scored
        .iter()
        .filter(|l| l.score >= threshold)
        .cloned()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub threshold: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub f2: f64,
}

impl SweepRow {
    pub fn hayes_level(&self) -> HayesLevel {
        hayes_level(self.recall, self.precision)
    }
}

pub fn sweep(scored: &[CandidateLink], answers: &AnswerSet, thresholds: &[f64]) -> Result<Vec<SweepRow>> {
    if answers.is_empty() {
        return Err(Error::EmptyAnswerSet);
    }
    thresholds
        .iter()
        .map(|&t| {
            let r = evaluate(&filter_links(scored, t), answers)?;
            Ok(SweepRow {
                threshold: t,
                precision: r.precision,
                recall: r.recall,
                f1: r.f1,
                f2: r.f2,
            })
        })
        .collect()
}

/// Evenly spaced thresholds `0, step, 2*step, ...` up to 1 inclusive.
///
/// Values are rounded to 10 decimals so a step of 0.01 yields 0.07 rather
/// than 0.07000000000000001.
pub fn threshold_grid(step: f64) -> Result<Vec<f64>> {
    if !(step.is_finite() && step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "sweep step must lie in (0, 1], got {step}"
        )));
    }
    let count = (1.0 / step + 1e-9).floor() as usize;
    Ok((0..=count)
        .map(|i| (i as f64 * step * 1e10).round() / 1e10)
        .collect())
}

/// Row with the highest F2; the lowest threshold wins ties.
pub fn best_f2(rows: &[SweepRow]) -> Option<&SweepRow> {
    rows.iter()
        .fold(None, |best: Option<&SweepRow>, r| match best {
            Some(b) if b.f2 >= r.f2 => Some(b),
            _ => Some(r),
        })
}

pub fn links_csv(links: &[CandidateLink]) -> String {
    let mut out = String::from("hlr_id,llr_id,score\n");
    for l in links {
        let _ = writeln!(out, "{},{},{}", l.hlr_id, l.llr_id, l.score);
    }
    out
}

/// Reads a links file: CSV `hlr_id,llr_id,score` (header optional) or
/// whitespace-separated id pairs as in answer files.
pub fn parse_links(text: &str, origin: &str) -> Result<Vec<CandidateLink>> {
    let mut links = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line == "hlr_id,llr_id,score" {
            continue;
        }
        let malformed = |reason: String| Error::MalformedLink {
            origin: origin.to_owned(),
            line: n + 1,
            reason,
        };
        let fields: Vec<&str> = if line.contains(',') {
            line.split(',').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        let score = match fields.get(2) {
            Some(s) => s
                .parse::<f64>()
                .map_err(|_| malformed(format!("score `{s}` is not a number")))?,
            None => 1.0,
        };
        match fields.as_slice() {
            [h, l, ..] if !h.is_empty() && !l.is_empty() => links.push(CandidateLink {
                hlr_id: (*h).to_owned(),
                llr_id: (*l).to_owned(),
                score,
            }),
            _ => return Err(malformed(format!("expected `hlr_id,llr_id,score`, got `{line}`"))),
        }
    }
    Ok(links)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("threshold,precision,recall,f1,f2\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{},{}", r.threshold, r.precision, r.recall, r.f1, r.f2);
    }
    out
}
