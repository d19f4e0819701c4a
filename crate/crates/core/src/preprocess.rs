//! Text normalization: tokenization, stopword removal and lemmatization.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use rust_stemmers::{Algorithm, Stemmer};

use crate::corpus::ProjectBundle;
use crate::error::{Error, Result};

/// Tokens with fewer characters than this are dropped by [`tokenize`].
pub const MIN_TOKEN_CHARS: usize = 2;

const ENGLISH_STOPWORDS: &str = include_str!("../data/stopwords_en.txt");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopwordList {
    words: BTreeSet<String>,
}

impl StopwordList {
    /// The bundled English list (`data/stopwords_en.txt`).
    pub fn english() -> Self {
        Self::parse(ENGLISH_STOPWORDS, "bundled stopword list").expect("bundled stopword list is valid")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// One word per line; `#` lines and blanks are skipped, entries are lowercased.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let words: BTreeSet<String> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        if words.is_empty() {
            return Err(Error::EmptyInput(origin.to_owned()));
        }
        Ok(Self { words })
    }

    pub fn from_words<I, S>(words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let words: BTreeSet<String> = words.into_iter().map(|w| w.as_ref().to_lowercase()).collect();
        if words.is_empty() {
            return Err(Error::EmptyInput("stopword list".to_owned()));
        }
        Ok(Self { words })
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Lowercases `text` and splits it into maximal runs of alphabetic characters.
///
/// Digits, punctuation and whitespace all act as separators, as do
/// uppercase letters without a lowercase form. Runs shorter
/// than [`MIN_TOKEN_CHARS`] are dropped.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphabetic() || c.is_uppercase())
        .filter(|t| t.chars().count() >= MIN_TOKEN_CHARS)
        .map(str::to_owned)
        .collect()
}

pub fn remove_stopwords(tokens: &[String], stopwords: &StopwordList) -> Vec<String> {
    tokens
        .iter()
        .filter(|t| !stopwords.contains(t))
        .cloned()
        .collect()
}

/// Reduces each token to its base form with the default rule-based lemmatizer.
pub fn lemmatize(tokens: &[String]) -> Vec<String> {
    Normalizer::Lemma.normalize(tokens)
}

/// Which word normalizer the pipeline applies after stopword removal.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Normalizer {
    /// Suffix rules for plurals, `-ing` and `-ed`, with an exception list.
    #[default]
    Lemma,
    /// Snowball English (Porter2) stemmer.
    Porter,
}

impl Normalizer {
    pub fn normalize(self, tokens: &[String]) -> Vec<String> {
        match self {
            Normalizer::Lemma => tokens.iter().map(|t| base_form(t)).collect(),
            Normalizer::Porter => {
                let stemmer = Stemmer::create(Algorithm::English);
                tokens.iter().map(|t| porter_fixpoint(&stemmer, t)).collect()
            }
        }
    }
}

impl FromStr for Normalizer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemma" | "lemmatizer" => Ok(Normalizer::Lemma),
            "porter" | "stem" => Ok(Normalizer::Porter),
            other => Err(Error::InvalidConfig(format!(
                "unknown normalizer `{other}` (expected lemma or porter)"
            ))),
        }
    }
}

impl fmt::Display for Normalizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalizer::Lemma => "lemma",
            Normalizer::Porter => "porter",
        })
    }
}

// Snowball output is not always a fixed point of the stemmer, so iterate.
fn porter_fixpoint(stemmer: &Stemmer, token: &str) -> String {
    let mut current = token.to_owned();
    for _ in 0..16 {
        let next = stemmer.stem(&current).into_owned();
        if next == current {
            break;
        }
        current = next;
    }
    current
}

/// Words left untouched by the suffix rules.
const KEEP: &[&str] = &[
    "always", "analysis", "anything", "basis", "bring", "ceiling", "during", "everything",
    "hundred", "kind", "morning", "evening", "news", "nothing", "perhaps", "series", "something",
    "species", "spring", "string", "thing", "various", "wing", "yes",
];

/// Irregular forms. Every target must itself be a fixed point of the rules.
const IRREGULAR: &[(&str, &str)] = &[
    ("analyses", "analysis"),
    ("children", "child"),
    ("criteria", "criterion"),
    ("feet", "foot"),
    ("indices", "index"),
    ("matrices", "matrix"),
    ("men", "man"),
    ("mice", "mouse"),
    ("people", "person"),
    ("vertices", "vertex"),
    ("women", "woman"),
];

/// Rule-based base form of a single lowercase token.
///
/// Rules are applied until nothing changes, which makes the function idempotent.
pub fn base_form(token: &str) -> String {
    let mut word = token.to_owned();
    loop {
        if let Some(&(_, target)) = IRREGULAR.iter().find(|(from, _)| *from == word) {
            return target.to_owned();
        }
        match strip_once(&word) {
            Some(next) => word = next,
            None => return word,
        }
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn is_consonant(chars: &[char], i: usize) -> bool {
    match chars[i] {
        'a' | 'e' | 'i' | 'o' | 'u' => false,
        'y' => i == 0 || !is_consonant(chars, i - 1),
        c => c.is_alphabetic(),
    }
}

fn has_vowel(chars: &[char]) -> bool {
    (0..chars.len()).any(|i| !is_consonant(chars, i))
}

/// Number of vowel-consonant sequences, as in Porter's measure.
fn measure(chars: &[char]) -> usize {
    let mut m = 0;
    let mut prev_vowel = false;
    for i in 0..chars.len() {
        let vowel = !is_consonant(chars, i);
        if prev_vowel && !vowel {
            m += 1;
        }
        prev_vowel = vowel;
    }
    m
}

fn ends_cvc(chars: &[char]) -> bool {
    let n = chars.len();
    n >= 3
        && is_consonant(chars, n - 3)
        && !is_consonant(chars, n - 2)
        && is_consonant(chars, n - 1)
        && !matches!(chars[n - 1], 'w' | 'x' | 'y')
}

/// Repairs a stem left behind by removing `-ing` or `-ed`.
fn repair_stem(mut stem: Vec<char>) -> String {
    let n = stem.len();
    let last = stem[n - 1];
    let ends = |s: &str| stem.iter().collect::<String>().ends_with(s);
    if ends("at") || ends("bl") || ends("iz") || matches!(last, 'v' | 'c' | 'u') {
        stem.push('e');
    } else if n > 3 && last == stem[n - 2] && is_consonant(&stem, n - 1) && !matches!(last, 'l' | 's' | 'z') {
        stem.pop();
    } else if (measure(&stem) == 1 && ends_cvc(&stem)) || (n == 2 && is_vowel(stem[0]) && is_consonant(&stem, 1)) {
        stem.push('e');
    }
    stem.into_iter().collect()
}

/// One rewrite step, or `None` when no rule applies. Every step shortens the word.
fn strip_once(word: &str) -> Option<String> {
    let chars: Vec<char> = word.chars().collect();
    let n = chars.len();
    if n <= 3 || KEEP.contains(&word) {
        return None;
    }
    let head = |k: usize| chars[..n - k].iter().collect::<String>();

    if word.ends_with("sses") {
        return Some(head(2));
    }
    if word.ends_with("ies") && n > 4 {
        return Some(head(3) + "y");
    }
    if ["xes", "ches", "shes", "zzes"].iter().any(|s| word.ends_with(s)) {
        return Some(head(2));
    }
    if word.ends_with('s') && !["ss", "us", "is"].iter().any(|s| word.ends_with(s)) {
        return Some(head(1));
    }
    if word.ends_with("ied") && n > 4 {
        return Some(head(3) + "y");
    }
    if word.ends_with("ing") {
        let stem = &chars[..n - 3];
        if stem.len() >= 2 && has_vowel(stem) {
            return Some(repair_stem(stem.to_vec()));
        }
        return None;
    }
    if word.ends_with("ed") && !word.ends_with("eed") {
        let stem = &chars[..n - 2];
        if stem.len() >= 2 && has_vowel(stem) {
            return Some(repair_stem(stem.to_vec()));
        }
    }
    None
}

/// The full text-to-tokens pipeline: tokenize, drop stopwords, normalize.
#[derive(Debug, Clone)]
pub struct Preprocessor {
    pub stopwords: StopwordList,
    pub normalizer: Normalizer,
}

impl Default for Preprocessor {
    fn default() -> Self {
        Self {
            stopwords: StopwordList::english(),
            normalizer: Normalizer::default(),
        }
    }
}

impl Preprocessor {
    pub fn new(stopwords: StopwordList, normalizer: Normalizer) -> Self {
        Self {
            stopwords,
            normalizer,
        }
    }

    pub fn process(&self, text: &str) -> Vec<String> {
        let tokens = remove_stopwords(&tokenize(text), &self.stopwords);
        self.normalizer.normalize(&tokens)
    }

    /// Fills `tokens` on every requirement of the bundle.
    pub fn apply(&self, bundle: &mut ProjectBundle) {
        bundle
            .high
            .par_iter_mut()
            .chain(bundle.low.par_iter_mut())
            .for_each(|doc| doc.tokens = self.process(&doc.text));
    }
}
