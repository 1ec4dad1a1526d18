//! Regenerates `data/mini_corpus.tsv`.
//!
//! ```text
//! cargo run -p abba-core --example write_mini_corpus > crates/core/data/mini_corpus.tsv
//! ```

use abba::harness::{mini_corpus, write_ucr, MINI_CORPUS_SEED};

fn main() {
    print!("{}", write_ucr(&mini_corpus(MINI_CORPUS_SEED)));
}
