//! Sweeps the link threshold on the sample project and prints a
//! precision/recall table plus the best-F2 operating point.
//!
//! ```text
//! cargo run --example evaluate_and_sweep -- [STEP]
//! ```

use std::env;
use std::path::Path;

use reqtrace::prelude::*;

fn main() -> Result<()> {
    let step: f64 = env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.05);
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample");
    let bundle = ProjectBundle::load(
        &data.join("high.tsv"),
        &data.join("low.tsv"),
        Some(&data.join("answers.txt")),
    )?;
    let corpus = PreparedCorpus::prepare(bundle, &Preprocessor::default())?;
    let table = load_embeddings(&data.join("glove-6b-100d-subset.txt"), Some(&corpus.vocab))?;
    let matrix = build_matrix(&corpus.vocab, &table, &WordSimConfig::default());
    let answers = corpus.bundle.answers.as_ref().expect("loaded above");

    let scored = score_all(
        &corpus.bundle,
        &corpus.vectors,
        Some(&matrix),
        &LinkerConfig::new(0.0, Method::Enhanced)?,
    )?;
    let rows = sweep(&scored, answers, &threshold_grid(step)?)?;

    println!("threshold  precision  recall  F2     level");
    for r in &rows {
        println!(
            "{:>9.2}  {:>9.3}  {:>6.3}  {:.3}  {}",
            r.threshold,
            r.precision,
            r.recall,
            r.f2,
            r.hayes_level()
        );
    }
    if let Some(best) = best_f2(&rows) {
        println!("\nbest F2 {:.3} at {:.2}", best.f2, best.threshold);
        println!("{}", evaluate(&filter_links(&scored, best.threshold), answers)?);
    }
    Ok(())
}
