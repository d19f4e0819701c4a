//! Three tiny documents with no words in common: plain cosine sees no
//! similarity at all, while a word-similarity matrix that relates
//! "authentication" to "login" lets Doc1 and Doc2 match.
//!
//! ```text
//! cargo run --example table1_motivation
//! ```

use reqtrace::prelude::*;

fn main() -> Result<()> {
    let texts = ["Use authentication", "Add login", "Play football"];
    let pre = Preprocessor::default();
    let docs: Vec<Vec<String>> = texts.iter().map(|t| pre.process(t)).collect();
    let vocab = build_vocabulary(&docs)?;
    let idf = compute_idf(&docs, &vocab);
    let vectors: Vec<TfIdfVector> = docs.iter().map(|d| vectorize(d, &vocab, &idf)).collect();

    println!("{:<8}{}", "", vocab.terms().join("  "));
    for (i, v) in vectors.iter().enumerate() {
        let row: Vec<String> = v.to_dense().iter().map(|x| format!("{x:.3}")).collect();
        println!("Doc{:<5}{}", i + 1, row.join("  "));
    }

    let auth = vocab.index_of("authentication").expect("in vocabulary");
    let login = vocab.index_of("login").expect("in vocabulary");
    let mut rows = vec![Vec::new(); vocab.len()];
    rows[auth].push((login, 0.8));
    rows[login].push((auth, 0.8));
    let m = WordSimilarityMatrix::from_rows(vocab.len(), rows)?;

    println!("\npair        plain   enhanced");
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        println!(
            "Doc{}-Doc{}   {:.3}   {:.3}",
            a + 1,
            b + 1,
            cosine(&vectors[a], &vectors[b]),
            enhanced_similarity(&vectors[a], &vectors[b], &m)?
        );
    }
    Ok(())
}
