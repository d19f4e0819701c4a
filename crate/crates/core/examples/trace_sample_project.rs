//! Recovers trace links for the bundled sample project and prints the
//! strongest candidates for every high-level requirement.
//!
//! ```text
//! cargo run --example trace_sample_project
//! ```

use std::path::Path;

use reqtrace::prelude::*;

fn main() -> Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample");
    let bundle = ProjectBundle::load(
        &data.join("high.tsv"),
        &data.join("low.tsv"),
        Some(&data.join("answers.txt")),
    )?;
    let corpus = PreparedCorpus::prepare(bundle, &Preprocessor::default())?;
    let table = load_embeddings(&data.join("glove-6b-100d-subset.txt"), Some(&corpus.vocab))?;
    let matrix = build_matrix(&corpus.vocab, &table, &WordSimConfig::default());

    let cfg = LinkerConfig::new(0.1, Method::Enhanced)?;
    let scored = score_all(&corpus.bundle, &corpus.vectors, Some(&matrix), &cfg)?;
    let answers = corpus.bundle.answers.as_ref().expect("loaded above");

    for hlr in &corpus.bundle.high {
        println!("{}  {}", hlr.id, hlr.text);
        let mut mine: Vec<&CandidateLink> = scored.iter().filter(|l| l.hlr_id == hlr.id).collect();
        mine.sort_by(|a, b| b.score.total_cmp(&a.score));
        for link in mine.iter().take(3).filter(|l| l.score >= cfg.link_threshold()) {
            let mark = if answers.contains(&link.hlr_id, &link.llr_id) { "*" } else { " " };
            println!("   {mark} {:.3} {}", link.score, link.llr_id);
        }
    }
    println!("\n* = link in the answer set");

    let links = filter_links(&scored, cfg.link_threshold());
    println!("{}", evaluate(&links, answers)?);
    Ok(())
}
