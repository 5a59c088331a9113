//! End-to-end tour: build a synthetic taxonomy, redact a query at a few
//! privacy levels, and print the resulting privacy statistics.
//!
//! Run: cargo run --release -p hyperdp --example taxonomy_walkthrough

use hyperdp::embeddings::generate_synthetic_taxonomy;
use hyperdp::mechanism::{redact_text, tokenize, MechanismConfig, Policy};
use hyperdp::stats::{estimate_stats, WordSample};

fn main() {
    let vocab = generate_synthetic_taxonomy::<f64>(3, 3, 2, 7).unwrap();
    println!(
        "taxonomy: {} words, {} dims (root `n`, leaves `n.i.j.k`)\n",
        vocab.len(),
        vocab.dim()
    );

    let query = "please send n.0.0.0 to n.2.1.2 today";
    let tokens = tokenize(query);
    println!("query: {query}");
    for eps in [0.125, 2.0, 1e6] {
        let mut config = MechanismConfig::new(eps);
        config.policy = Policy::NonStopwords;
        let result = redact_text(&tokens, &vocab, &config, 42).unwrap();
        println!("  eps={eps:>9}: {}", result.released_text());
    }

    println!("\nprivacy statistics over the whole vocabulary (1000 runs):");
    println!(
        "{:>8} {:>10} {:>10} {:>10} {:>8}",
        "eps", "avg n_w", "max n_w", "avg s_w", "min k_w"
    );
    for eps in [0.125, 0.5, 2.0, 8.0] {
        let config = MechanismConfig::new(eps);
        let stats = estimate_stats(&vocab, &config, 1000, &WordSample::All, 7).unwrap();
        println!(
            "{:>8} {:>10.2} {:>10} {:>10.2} {:>8}",
            eps,
            stats.aggregate.avg_n_w,
            stats.aggregate.max_n_w,
            stats.aggregate.avg_s_w,
            stats
                .aggregate
                .min_k_w
                .map(|k| k.to_string())
                .unwrap_or_else(|| "-".into())
        );
    }
}
