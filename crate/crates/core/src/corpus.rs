//! Requirement sets and gold answer sets.
//!
//! Requirement files hold one record per line, `ID<TAB>text`. Answer files
//! hold one `HLR_ID LLR_ID` pair per line, whitespace separated. In both
//! formats blank lines and lines starting with `#` are skipped.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Abstraction level of a requirement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Level {
    High,
    Low,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::High => f.write_str("high-level"),
            Level::Low => f.write_str("low-level"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequirementDoc {
    pub id: String,
    pub level: Level,
    pub text: String,
    /// Normalized tokens; empty until the document has been preprocessed.
    pub tokens: Vec<String>,
}

impl RequirementDoc {
    pub fn new(id: impl Into<String>, level: Level, text: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            level,
            text: text.into(),
            tokens: Vec::new(),
        }
    }
}

/// Gold trace links as `(hlr_id, llr_id)` pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnswerSet {
    pub links: BTreeSet<(String, String)>,
}

impl AnswerSet {
    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn contains(&self, hlr_id: &str, llr_id: &str) -> bool {
        self.links
            .contains(&(hlr_id.to_owned(), llr_id.to_owned()))
    }

    /// Canonical text form, one link per line in sorted order.
    pub fn to_canonical(&self) -> String {
        let mut out = String::new();
        for (h, l) in &self.links {
            out.push_str(h);
            out.push(' ');
            out.push_str(l);
            out.push('\n');
        }
        out
    }
}

impl<S: Into<String>> FromIterator<(S, S)> for AnswerSet {
    fn from_iter<I: IntoIterator<Item = (S, S)>>(iter: I) -> Self {
        Self {
            links: iter.into_iter().map(|(h, l)| (h.into(), l.into())).collect(),
        }
    }
}

/// The two requirement sets of one project, plus its answer set when known.
#[derive(Debug, Clone, Default)]
pub struct ProjectBundle {
    pub high: Vec<RequirementDoc>,
    pub low: Vec<RequirementDoc>,
    pub answers: Option<AnswerSet>,
}

impl ProjectBundle {
    pub fn load(high: &Path, low: &Path, answers: Option<&Path>) -> Result<Self> {
        Ok(Self {
            high: load_requirements(high, Level::High)?,
            low: load_requirements(low, Level::Low)?,
            answers: answers.map(load_answer_set).transpose()?,
        })
    }

    pub fn docs(&self) -> impl Iterator<Item = &RequirementDoc> {
        self.high.iter().chain(self.low.iter())
    }

    pub fn docs_mut(&mut self) -> impl Iterator<Item = &mut RequirementDoc> {
        self.high.iter_mut().chain(self.low.iter_mut())
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn load_requirements(path: &Path, level: Level) -> Result<Vec<RequirementDoc>> {
    let text = read_text(path)?;
    parse_requirements(&text, level, &path.display().to_string())
}

/// Parses the canonical requirement format. `origin` only labels errors.
pub fn parse_requirements(input: &str, level: Level, origin: &str) -> Result<Vec<RequirementDoc>> {
    let mut docs = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();

    for (n, raw) in input.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = |reason: &str| Error::MalformedRecord {
            origin: origin.to_owned(),
            line: line_no,
            reason: reason.to_owned(),
        };
        let (id, text) = line
            .split_once('\t')
            .ok_or_else(|| malformed("missing tab separator between id and text"))?;
        let id = id.trim();
        if id.is_empty() {
            return Err(malformed("empty id"));
        }
        let text = text.trim();
        if text.is_empty() {
            return Err(malformed("empty requirement text"));
        }
        if seen.insert(id.to_owned(), line_no).is_some() {
            return Err(Error::DuplicateId {
                origin: origin.to_owned(),
                line: line_no,
                id: id.to_owned(),
            });
        }
        docs.push(RequirementDoc::new(id, level, text));
    }

    if docs.is_empty() {
        return Err(Error::EmptyInput(origin.to_owned()));
    }
    Ok(docs)
}

/// Canonical text form of a requirement list; [`parse_requirements`] reads it back.
pub fn write_requirements(docs: &[RequirementDoc]) -> String {
    let mut out = String::new();
    for d in docs {
        out.push_str(&d.id);
        out.push('\t');
        out.push_str(&d.text);
        out.push('\n');
    }
    out
}

pub fn load_answer_set(path: &Path) -> Result<AnswerSet> {
    let text = read_text(path)?;
    parse_answer_set(&text, &path.display().to_string())
}

/// Parses the canonical answer format. Extra columns after the two ids are ignored.
pub fn parse_answer_set(input: &str, origin: &str) -> Result<AnswerSet> {
    let mut links = BTreeSet::new();
    for (n, line) in input.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        match (fields.next(), fields.next()) {
            (Some(h), Some(l)) => {
                links.insert((h.to_owned(), l.to_owned()));
            }
            _ => {
                return Err(Error::MalformedLink {
                    origin: origin.to_owned(),
                    line: n + 1,
                    reason: format!("expected `HLR_ID LLR_ID`, got `{trimmed}`"),
                })
            }
        }
    }
    Ok(AnswerSet { links })
}
