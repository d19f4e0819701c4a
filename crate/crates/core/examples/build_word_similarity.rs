//! Builds the word-similarity matrix for the bundled sample project and
//! shows how the two thresholds shape it.
//!
//! ```text
//! cargo run --example build_word_similarity -- [TERM]
//! ```

use std::env;
use std::path::Path;

use reqtrace::prelude::*;
use reqtrace::wordsim::oov_rate;

fn main() -> Result<()> {
    let term = env::args().nth(1).unwrap_or_else(|| "loan".into());
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample");
    let bundle = ProjectBundle::load(&data.join("high.tsv"), &data.join("low.tsv"), None)?;
    let corpus = PreparedCorpus::prepare(bundle, &Preprocessor::default())?;
    let table = load_embeddings(&data.join("glove-6b-100d-subset.txt"), Some(&corpus.vocab))?;
    println!(
        "{} terms, {} with vectors (OOV rate {:.3})",
        corpus.vocab.len(),
        table.len(),
        oov_rate(&corpus.vocab, &table)
    );

    let Some(i) = corpus.vocab.index_of(&term) else {
        eprintln!("`{term}` is not in the sample vocabulary");
        std::process::exit(1);
    };
    println!("\nsim  syn   nonzero  row sum  top neighbors of `{term}`");
    for sim in [0.3, 0.5, 0.7] {
        for syn in [0.5, 1.0, 2.0] {
            let m = build_matrix(&corpus.vocab, &table, &WordSimConfig::new(sim, syn)?);
            let top: Vec<String> = m
                .top_neighbors(i, 3)?
                .iter()
                .map(|n| format!("{} {:.2}", corpus.vocab.term(n.col).unwrap_or("?"), n.value))
                .collect();
            println!(
                "{sim:.1}  {syn:.1}   {:>7}  {:>7.3}  {}",
                m.nnz_offdiag(),
                m.row_offdiag_sum(i)?,
                top.join(", ")
            );
        }
    }
    Ok(())
}
