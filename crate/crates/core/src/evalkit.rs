//! Precision, recall, F-measures and the Hayes et al. acceptance levels for
//! candidate trace links.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::{AnswerSet, Level, ProjectBundle};
use crate::error::{Error, Result};
use crate::linker::CandidateLink;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
}

/// Confusion counts with set semantics on `(hlr_id, llr_id)` pairs.
pub fn confusion(links: &[CandidateLink], answers: &AnswerSet) -> Confusion {
    let retrieved: BTreeSet<(&str, &str)> = links
        .iter()
        .map(|l| (l.hlr_id.as_str(), l.llr_id.as_str()))
        .collect();
    let tp = retrieved
        .iter()
        .filter(|(h, l)| answers.contains(h, l))
        .count();
    Confusion {
        tp,
        fp: retrieved.len() - tp,
        fn_: answers.len() - tp,
    }
}

/// Weighted harmonic mean of precision and recall; 0 when both are 0.
pub fn f_beta(precision: f64, recall: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    let denom = b2 * precision + recall;
    if denom == 0.0 {
        return 0.0;
    }
    (1.0 + b2) * precision * recall / denom
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum HayesLevel {
    Unacceptable,
    Acceptable,
    Good,
    Excellent,
}

impl fmt::Display for HayesLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Minimum recall and precision for each level above `Unacceptable`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HayesBands {
    /// `(level, min_recall, min_precision)`, best level first.
    pub bands: [(HayesLevel, f64, f64); 3],
}

impl Default for HayesBands {
    fn default() -> Self {
        Self {
            bands: [
                (HayesLevel::Excellent, 0.8, 0.5),
                (HayesLevel::Good, 0.7, 0.3),
                (HayesLevel::Acceptable, 0.6, 0.2),
            ],
        }
    }
}

impl HayesBands {
    /// Highest level whose recall and precision minima are both met.
    pub fn classify(&self, recall: f64, precision: f64) -> HayesLevel {
        self.bands
            .iter()
            .find(|&&(_, r, p)| recall >= r && precision >= p)
            .map_or(HayesLevel::Unacceptable, |&(level, _, _)| level)
    }
}

pub fn hayes_level(recall: f64, precision: f64) -> HayesLevel {
    HayesBands::default().classify(recall, precision)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub f2: f64,
    pub hayes_level: HayesLevel,
}

impl EvalReport {
    pub fn from_confusion(c: Confusion) -> Self {
        let precision = if c.tp + c.fp == 0 {
            0.0
        } else {
            c.tp as f64 / (c.tp + c.fp) as f64
        };
        let recall = if c.tp + c.fn_ == 0 {
            0.0
        } else {
            c.tp as f64 / (c.tp + c.fn_) as f64
        };
        Self {
            tp: c.tp,
            fp: c.fp,
            fn_: c.fn_,
            precision,
            recall,
            f1: f_beta(precision, recall, 1.0),
            f2: f_beta(precision, recall, 2.0),
            hayes_level: hayes_level(recall, precision),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedRecord {
            origin: "report JSON".into(),
            line: e.line(),
            reason: e.to_string(),
        })
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "true positives:  {}", self.tp)?;
        writeln!(f, "false positives: {}", self.fp)?;
        writeln!(f, "false negatives: {}", self.fn_)?;
        writeln!(f, "precision:       {:.4}", self.precision)?;
        writeln!(f, "recall:          {:.4}", self.recall)?;
        writeln!(f, "F1:              {:.4}", self.f1)?;
        writeln!(f, "F2:              {:.4}", self.f2)?;
        write!(f, "Hayes level:     {}", self.hayes_level)
    }
}

pub fn evaluate(links: &[CandidateLink], answers: &AnswerSet) -> Result<EvalReport> {
    if answers.is_empty() {
        return Err(Error::EmptyAnswerSet);
    }
    Ok(EvalReport::from_confusion(confusion(links, answers)))
}

/// Checks that every id in the answer set names a loaded requirement.
pub fn check_answer_ids(answers: &AnswerSet, bundle: &ProjectBundle) -> Result<()> {
    let high: BTreeSet<&str> = bundle.high.iter().map(|d| d.id.as_str()).collect();
    let low: BTreeSet<&str> = bundle.low.iter().map(|d| d.id.as_str()).collect();
    for (h, l) in &answers.links {
        if !high.contains(h.as_str()) {
            return Err(Error::UnknownId {
                level: Level::High.to_string(),
                id: h.clone(),
            });
        }
        if !low.contains(l.as_str()) {
            return Err(Error::UnknownId {
                level: Level::Low.to_string(),
                id: l.clone(),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn link(h: &str, l: &str) -> CandidateLink {
        CandidateLink {
            hlr_id: h.into(),
            llr_id: l.into(),
            score: 1.0,
        }
    }

    fn answers(pairs: &[(&str, &str)]) -> AnswerSet {
        pairs.iter().copied().collect()
    }

    #[test]
    fn confusion_examples() {
        let gold = answers(&[("H1", "L1"), ("H2", "L2")]);
        let c = confusion(&[link("H1", "L1"), link("H2", "L2")], &gold);
        assert_eq!(c, Confusion { tp: 2, fp: 0, fn_: 0 });

        let gold41: AnswerSet = (0..41).map(|i| ("H".to_string(), format!("L{i}"))).collect();
        assert_eq!(confusion(&[], &gold41), Confusion { tp: 0, fp: 0, fn_: 41 });

        let c = confusion(&[link("x", "1"), link("y", "1")], &answers(&[("y", "1"), ("z", "1")]));
        assert_eq!(c, Confusion { tp: 1, fp: 1, fn_: 1 });
    }

    #[test]
    fn duplicate_links_count_once() {
        let c = confusion(&[link("a", "b"), link("a", "b")], &answers(&[("a", "b")]));
        assert_eq!(c, Confusion { tp: 1, fp: 0, fn_: 0 });
    }

    #[test]
    fn f_beta_examples() {
        for x in [0.1, 0.5, 0.9] {
            assert!((f_beta(x, x, 2.0) - x).abs() < 1e-15);
            assert!((f_beta(x, x, 0.5) - x).abs() < 1e-15);
        }
        assert!((f_beta(0.537, 0.759, 2.0) - 0.70).abs() < 0.005);
        assert!((f_beta(0.216, 0.732, 2.0) - 0.495).abs() < 0.005);
        assert_eq!(f_beta(0.0, 0.0, 2.0), 0.0);
    }

    #[test]
    fn hayes_examples() {
        assert_eq!(hayes_level(0.759, 0.537), HayesLevel::Good);
        assert_eq!(hayes_level(0.732, 0.216), HayesLevel::Acceptable);
        assert_eq!(hayes_level(1.0, 1.0), HayesLevel::Excellent);
        assert_eq!(hayes_level(0.7, 0.3), HayesLevel::Good);
        assert_eq!(hayes_level(0.95, 0.1), HayesLevel::Unacceptable);
        assert_eq!(hayes_level(0.5, 0.9), HayesLevel::Unacceptable);
    }

    #[test]
    fn bands_strictly_decreasing() {
        let b = HayesBands::default().bands;
        for w in b.windows(2) {
            assert!(w[0].0 > w[1].0 && w[0].1 > w[1].1 && w[0].2 > w[1].2);
        }
    }

    #[test]
    fn evaluate_examples() {
        let gold = answers(&[("H1", "L1"), ("H2", "L2")]);
        let r = evaluate(&[link("H1", "L1"), link("H2", "L2")], &gold).unwrap();
        assert_eq!((r.precision, r.recall, r.f1, r.f2), (1.0, 1.0, 1.0, 1.0));
        assert_eq!(r.hayes_level, HayesLevel::Excellent);

        let r = evaluate(&[], &gold).unwrap();
        assert_eq!((r.precision, r.recall), (0.0, 0.0));
        assert_eq!(r.hayes_level, HayesLevel::Unacceptable);

        assert!(matches!(evaluate(&[], &AnswerSet::default()), Err(Error::EmptyAnswerSet)));
    }

    #[test]
    fn counts_consistent_with_published_row() {
        // 44 of 58 gold links found among 82 candidates.
        let r = EvalReport::from_confusion(Confusion { tp: 44, fp: 38, fn_: 14 });
        assert!((r.precision - 0.537).abs() < 5e-4);
        assert!((r.recall - 0.759).abs() < 5e-4);
        assert!((r.f2 - 0.70).abs() < 0.005);
        assert_eq!(r.hayes_level, HayesLevel::Good);
    }

    #[test]
    fn json_schema() {
        let r = EvalReport::from_confusion(Confusion { tp: 3, fp: 1, fn_: 2 });
        let json = r.to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["f1", "f2", "fn", "fp", "hayes_level", "precision", "recall", "tp"]);
        assert_eq!(v["hayes_level"], "Acceptable");
        assert_eq!(EvalReport::from_json(&json).unwrap(), r);
    }

    #[test]
    fn answer_ids_resolve() {
        use crate::corpus::RequirementDoc;
        let bundle = ProjectBundle {
            high: vec![RequirementDoc::new("H1", Level::High, "a")],
            low: vec![RequirementDoc::new("L1", Level::Low, "b")],
            answers: None,
        };
        assert!(check_answer_ids(&answers(&[("H1", "L1")]), &bundle).is_ok());
        assert!(matches!(
            check_answer_ids(&answers(&[("H1", "L9")]), &bundle),
            Err(Error::UnknownId { .. })
        ));
    }

    proptest! {
        #[test]
        fn f1_matches_closed_form(p in 0.001f64..1.0, r in 0.001f64..1.0) {
            prop_assert!((f_beta(p, r, 1.0) - 2.0 * p * r / (p + r)).abs() < 1e-12);
        }

        #[test]
        fn f_beta_between_min_and_max(p in 0.001f64..1.0, r in 0.001f64..1.0, beta in 0.1f64..5.0) {
            let f = f_beta(p, r, beta);
            prop_assert!(f >= p.min(r) - 1e-12 && f <= p.max(r) + 1e-12);
        }

        #[test]
        fn f_beta_monotone(p in 0.0f64..1.0, r in 0.0f64..1.0, dp in 0.0f64..0.5, beta in 0.1f64..5.0) {
            let p2 = (p + dp).min(1.0);
            let r2 = (r + dp).min(1.0);
            prop_assert!(f_beta(p2, r, beta) >= f_beta(p, r, beta) - 1e-12);
            prop_assert!(f_beta(p, r2, beta) >= f_beta(p, r, beta) - 1e-12);
        }

        #[test]
        fn hayes_monotone(p in 0.0f64..1.0, r in 0.0f64..1.0, d in 0.0f64..0.5) {
            let base = hayes_level(r, p);
            prop_assert!(hayes_level((r + d).min(1.0), p) >= base);
            prop_assert!(hayes_level(r, (p + d).min(1.0)) >= base);
        }

        #[test]
        fn counts_permutation_invariant(
            retrieved in prop::collection::vec((0u8..5, 0u8..5), 0..20),
            gold in prop::collection::vec((0u8..5, 0u8..5), 1..20),
        ) {
            let links: Vec<_> = retrieved.iter().map(|(h, l)| link(&h.to_string(), &l.to_string())).collect();
            let gold: AnswerSet = gold.iter().map(|(h, l)| (h.to_string(), l.to_string())).collect();
            let mut reversed = links.clone();
            reversed.reverse();
            prop_assert_eq!(evaluate(&links, &gold).unwrap(), evaluate(&reversed, &gold).unwrap());
        }
    }
}
