//! Shows each preprocessing step on a few requirement sentences.
//!
//! ```text
//! cargo run --example preprocess_text -- "The system shall archive crawled pages"
//! ```

use std::env;

use reqtrace::preprocess::{remove_stopwords, tokenize};
use reqtrace::prelude::*;

fn main() {
    let mut texts: Vec<String> = env::args().skip(1).collect();
    if texts.is_empty() {
        texts = vec![
            "The user shall be able to log in using a password.".into(),
            "Archived pages are indexed by the crawler's scheduler.".into(),
            "WARC files must be validated before being stored.".into(),
        ];
    }
    let stopwords = StopwordList::english();
    for text in &texts {
        let tokens = tokenize(text);
        let kept = remove_stopwords(&tokens, &stopwords);
        println!("{text}");
        println!("  tokens:    {}", tokens.join(" "));
        println!("  content:   {}", kept.join(" "));
        println!("  lemma:     {}", Normalizer::Lemma.normalize(&kept).join(" "));
        println!("  porter:    {}", Normalizer::Porter.normalize(&kept).join(" "));
    }
}
