//! Grid search over the two word-similarity thresholds, comparing each
//! setting's best F2 with the plain VSM baseline.
//!
//! ```text
//! cargo run --release --example compare_vsm_enhanced -- [HIGH LOW ANSWERS EMBEDDINGS]
//! ```
//!
//! Without arguments it runs on the bundled sample project.

use std::env;
use std::path::{Path, PathBuf};

use reqtrace::prelude::*;

fn main() -> Result<()> {
    let args: Vec<PathBuf> = env::args_os().skip(1).map(PathBuf::from).collect();
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample");
    let [high, low, answers, embeddings] = match args.as_slice() {
        [h, l, a, e] => [h.clone(), l.clone(), a.clone(), e.clone()],
        [] => ["high.tsv", "low.tsv", "answers.txt", "glove-6b-100d-subset.txt"].map(|f| data.join(f)),
        _ => {
            eprintln!("usage: compare_vsm_enhanced [HIGH LOW ANSWERS EMBEDDINGS]");
            std::process::exit(1);
        }
    };

    let bundle = ProjectBundle::load(&high, &low, Some(&answers))?;
    let corpus = PreparedCorpus::prepare(bundle, &Preprocessor::default())?;
    let table = load_embeddings(&embeddings, Some(&corpus.vocab))?;
    let cmp = compare_methods(
        &corpus,
        &table,
        &[0.3, 0.4, 0.5, 0.6, 0.7, 0.8],
        &[0.5, 1.0, 2.0],
        0.01,
    )?;

    println!("sim  syn  best F2  at     P      R");
    for p in &cmp.enhanced {
        println!(
            "{:.1}  {:.1}  {:.4}   {:.2}   {:.3}  {:.3}",
            p.similarity_threshold, p.synonym_threshold, p.best.f2, p.best.threshold, p.best.precision, p.best.recall
        );
    }
    println!(
        "plain VSM  {:.4}   {:.2}   {:.3}  {:.3}",
        cmp.plain.f2, cmp.plain.threshold, cmp.plain.precision, cmp.plain.recall
    );
    if let Some(best) = cmp.best_enhanced() {
        let verdict = if best.best.f2 > cmp.plain.f2 { "beats" } else { "does not beat" };
        println!(
            "\nenhanced (sim {}, syn {}) {verdict} plain VSM: {:.4} vs {:.4}",
            best.similarity_threshold, best.synonym_threshold, best.best.f2, cmp.plain.f2
        );
    }
    Ok(())
}
