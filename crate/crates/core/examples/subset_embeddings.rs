//! Cuts a large embedding file down to the words a corpus actually uses.
//!
//! ```text
//! cargo run --example subset_embeddings -- FULL.txt OUT.txt REQS.tsv [REQS.tsv ...] [+word ...]
//! ```
//!
//! Every requirements file is preprocessed with both normalizers, and
//! arguments starting with `+` add single words.

use std::path::Path;
use std::{env, fs, process};

use reqtrace::prelude::*;

fn main() -> Result<()> {
    let args: Vec<String> = env::args().skip(1).collect();
    if args.len() < 3 {
        eprintln!("usage: subset_embeddings FULL.txt OUT.txt REQS.tsv... [+word...]");
        process::exit(1);
    }
    let (full, out) = (Path::new(&args[0]), Path::new(&args[1]));

    let preprocessors = [
        Preprocessor::new(StopwordList::english(), Normalizer::Lemma),
        Preprocessor::new(StopwordList::english(), Normalizer::Porter),
    ];
    let mut words: Vec<Vec<String>> = Vec::new();
    for arg in &args[2..] {
        if let Some(w) = arg.strip_prefix('+') {
            words.push(vec![w.to_lowercase()]);
            continue;
        }
        for doc in load_requirements(Path::new(arg), Level::High)? {
            for p in &preprocessors {
                words.push(p.process(&doc.text));
            }
        }
    }
    let vocab = build_vocabulary(&words)?;
    let table = load_embeddings(full, Some(&vocab))?;
    fs::write(out, table.to_text()).map_err(|e| Error::io(out, e))?;
    println!(
        "{} of {} terms found, written to {}",
        table.len(),
        vocab.len(),
        out.display()
    );
    Ok(())
}
