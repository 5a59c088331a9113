//! Privacy-calibration harness: per-word uncertainty statistics (`N_w`,
//! `S_w`), the hierarchy-based indistinguishability statistic (`K_w`),
//! entropy proxies, the hyperbolic-vs-Euclidean calibration protocol, and an
//! empirical verifier for the metric-privacy ratio bound.
//!
//! Everything here is deterministic under a master seed: each word's
//! perturbation stream is derived from `(master seed, word index)`, so a
//! parallel tally would produce byte-identical statistics to a serial one.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::embeddings::{EmbeddingError, Geometry, Vocabulary, WordId};
use crate::mechanism::{perturb_word, MechanismConfig, MechanismError, NoiseSource};
use crate::real::Real;
use crate::sampler::derive_rng;
use rand::Rng;

#[derive(Debug, thiserror::Error)]
pub enum StatsError {
    #[error(transparent)]
    Mechanism(#[from] MechanismError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error("word sample is empty")]
    EmptySample,
    #[error("epsilon grid is empty")]
    EmptyGrid,
    #[error("requested sample of {requested} from a vocabulary of {available}")]
    SampleTooLarge { requested: usize, available: usize },
}

/// Which words a statistics run covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordSample {
    /// The whole vocabulary.
    All,
    /// An explicit word list.
    Words(Vec<String>),
    /// `size` words drawn without replacement under `seed`.
    Random { size: usize, seed: u64 },
}

/// Two-sided 99% normal quantile used in ratio slacks.
pub const Z_99: f64 = 2.5758293035489004;

/// Default minimum per-side count for an output to enter ratio estimation.
pub const DEFAULT_SUPPORT_THRESHOLD: u64 = 50;

/// Per-word tallies of one statistics run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WordStats {
    pub word: String,
    /// Count of runs where the mechanism returned the word itself.
    pub n_w: u64,
    /// Count of distinct outputs.
    pub s_w: u64,
    /// Hierarchy indistinguishability count; absent for Euclidean runs.
    pub k_w: Option<u64>,
    /// Hartley-entropy proxy `log2(s_w)`.
    pub h0: f64,
    /// Min-entropy proxy `-log2(n_w / runs)`; `None` encodes +infinity
    /// (the mechanism never returned the word itself).
    pub h_inf: Option<f64>,
}

/// Aggregates over one statistics run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StatsAggregate {
    pub avg_n_w: f64,
    pub max_n_w: u64,
    pub avg_s_w: f64,
    pub min_k_w: Option<u64>,
}

/// The calibration artifact: per-word records plus aggregates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrivacyStats {
    pub epsilon: f64,
    pub geometry: Geometry,
    pub runs: u64,
    pub master_seed: u64,
    pub records: Vec<WordStats>,
    pub aggregate: StatsAggregate,
}

fn resolve_sample<T: Real>(
    vocab: &Vocabulary<T>,
    sample: &WordSample,
) -> Result<Vec<WordId>, StatsError> {
    let mut ids: Vec<WordId> = match sample {
        WordSample::All => vocab.ids().collect(),
        WordSample::Words(words) => {
            let mut ids = Vec::with_capacity(words.len());
            for w in words {
                ids.push(
                    vocab
                        .lookup(w)
                        .ok_or_else(|| EmbeddingError::UnknownWord(w.clone()))?,
                );
            }
            ids
        }
        WordSample::Random { size, seed } => {
            if *size > vocab.len() {
                return Err(StatsError::SampleTooLarge {
                    requested: *size,
                    available: vocab.len(),
                });
            }
            // Partial Fisher-Yates over the index range.
            let mut rng = derive_rng(*seed, u64::MAX);
            let mut indices: Vec<usize> = (0..vocab.len()).collect();
            for i in 0..*size {
                let j = rng.random_range(i..indices.len());
                indices.swap(i, j);
            }
            indices.truncate(*size);
            let words: Vec<String> = vocab.words().to_vec();
            indices
                .into_iter()
                .map(|i| vocab.lookup(&words[i]).expect("index comes from vocab"))
                .collect()
        }
    };
    if ids.is_empty() {
        return Err(StatsError::EmptySample);
    }
    ids.sort();
    ids.dedup();
    Ok(ids)
}

/// Run the mechanism `runs` times per sampled word and tally `n_w`, `s_w`,
/// `k_w`, and the entropy proxies.
pub fn estimate_stats<T: Real>(
    vocab: &Vocabulary<T>,
    config: &MechanismConfig<T>,
    runs: u64,
    sample: &WordSample,
    master_seed: u64,
) -> Result<PrivacyStats, StatsError> {
    let ids = resolve_sample(vocab, sample)?;
    let mut records = Vec::with_capacity(ids.len());

    for id in ids {
        let word = vocab.word(id).to_string();
        let outputs = tally_outputs(vocab, config, &word, runs, master_seed, id.index() as u64)?;
        let n_w = outputs.get(word.as_str()).copied().unwrap_or(0);
        let s_w = outputs.len() as u64;
        let k_w = match vocab.geometry() {
            Geometry::Hyperbolic => Some(compute_kw(&outputs, vocab)?),
            Geometry::Euclidean => None,
        };
        let (h0, h_inf) = entropy_proxies(n_w, s_w, runs);
        records.push(WordStats {
            word,
            n_w,
            s_w,
            k_w,
            h0,
            h_inf,
        });
    }

    let aggregate = aggregate(&records);
    Ok(PrivacyStats {
        epsilon: config.epsilon.to_f64().expect("finite epsilon"),
        geometry: vocab.geometry(),
        runs,
        master_seed,
        records,
        aggregate,
    })
}

/// Run the mechanism `runs` times on one word; counts keyed by output word.
fn tally_outputs<T: Real>(
    vocab: &Vocabulary<T>,
    config: &MechanismConfig<T>,
    word: &str,
    runs: u64,
    master_seed: u64,
    stream: u64,
) -> Result<BTreeMap<String, u64>, StatsError> {
    let mut noise = NoiseSource::for_vocabulary_stream(vocab, config, master_seed, stream)?;
    let mut outputs: BTreeMap<String, u64> = BTreeMap::new();
    for _ in 0..runs {
        let out = perturb_word(word, vocab, config, &mut noise)?;
        *outputs.entry(out).or_default() += 1;
    }
    Ok(outputs)
}

/// Entropy proxies from the tallies: `h0 = log2(s_w)` and
/// `h_inf = -log2(n_w / runs)` with `n_w = 0` reported as `None` (+infinity).
pub fn entropy_proxies(n_w: u64, s_w: u64, runs: u64) -> (f64, Option<f64>) {
    let h0 = (s_w as f64).log2();
    let h_inf = if n_w == 0 {
        None
    } else {
        // + 0.0 normalizes the -0.0 that -log2(1) produces.
        Some(-((n_w as f64 / runs as f64).log2()) + 0.0)
    };
    (h0, h_inf)
}

/// Hierarchy indistinguishability count for one word's observed outputs.
///
/// For each observed output `w_hat`, count the observed words lying strictly
/// below it in the embedding hierarchy; `k_w` is the smallest nonzero such
/// count (outputs with nothing below them carry no deniability information),
/// or 0 when no output has anything below it.
pub fn compute_kw<T: Real>(
    observed: &BTreeMap<String, u64>,
    vocab: &Vocabulary<T>,
) -> Result<u64, StatsError> {
    if vocab.geometry() != Geometry::Hyperbolic {
        return Err(StatsError::Embedding(EmbeddingError::NotHyperbolic));
    }
    let ids: Vec<WordId> = observed
        .keys()
        .map(|w| {
            vocab
                .lookup(w)
                .ok_or_else(|| EmbeddingError::UnknownWord(w.clone()))
        })
        .collect::<Result<_, _>>()?;
    let mut k_w: Option<u64> = None;
    for &w_hat in &ids {
        let mut below = 0_u64;
        for &v in &ids {
            if vocab.is_below(v, w_hat)? {
                below += 1;
            }
        }
        if below > 0 {
            k_w = Some(k_w.map_or(below, |k| k.min(below)));
        }
    }
    Ok(k_w.unwrap_or(0))
}

fn aggregate(records: &[WordStats]) -> StatsAggregate {
    let n = records.len().max(1) as f64;
    StatsAggregate {
        avg_n_w: records.iter().map(|r| r.n_w as f64).sum::<f64>() / n,
        max_n_w: records.iter().map(|r| r.n_w).max().unwrap_or(0),
        avg_s_w: records.iter().map(|r| r.s_w as f64).sum::<f64>() / n,
        min_k_w: records.iter().filter_map(|r| r.k_w).min(),
    }
}

/// One side of a calibration comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CalibrationSide {
    pub geometry: Geometry,
    pub epsilon: f64,
    /// Largest per-word self-return count (worst-case guarantee).
    pub worst_n_w: u64,
    /// Average per-word self-return count (expected guarantee).
    pub expected_n_w: f64,
}

/// Result of matching a Euclidean epsilon to a hyperbolic reference.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub hyperbolic: CalibrationSide,
    pub euclidean: CalibrationSide,
    pub grid: Vec<f64>,
    pub runs: u64,
    pub master_seed: u64,
    pub sample_words: Vec<String>,
}

/// Calibration protocol: compute the hyperbolic worst-case `N_w` at the
/// reference epsilon, grid-search the Euclidean epsilon whose worst-case
/// `N_w` is closest (ties to the smaller epsilon), and report the expected
/// `N_w` of both sides. Both sides use the same word sample, run count, and
/// seed derivation.
pub fn calibrate_euclidean<T: Real>(
    hyp_vocab: &Vocabulary<T>,
    euc_vocab: &Vocabulary<T>,
    hyp_config: &MechanismConfig<T>,
    runs: u64,
    sample: &WordSample,
    grid: &[T],
    master_seed: u64,
) -> Result<CalibrationReport, StatsError> {
    if grid.is_empty() {
        return Err(StatsError::EmptyGrid);
    }
    let hyp_ids = resolve_sample(hyp_vocab, sample)?;
    let words: Vec<String> = hyp_ids
        .iter()
        .map(|&id| hyp_vocab.word(id).to_string())
        .collect();
    let shared_sample = WordSample::Words(words.clone());

    let hyp_stats = estimate_stats(hyp_vocab, hyp_config, runs, &shared_sample, master_seed)?;

    let mut best: Option<(f64, f64, PrivacyStats)> = None; // (|diff|, eps, stats)
    for &eps in grid {
        let mut euc_config = hyp_config.clone();
        euc_config.epsilon = eps;
        let stats = estimate_stats(euc_vocab, &euc_config, runs, &shared_sample, master_seed)?;
        let diff = (stats.aggregate.max_n_w as f64 - hyp_stats.aggregate.max_n_w as f64).abs();
        let eps_f = eps.to_f64().expect("finite epsilon");
        let better = match &best {
            None => true,
            Some((best_diff, best_eps, _)) => {
                diff < *best_diff || (diff == *best_diff && eps_f < *best_eps)
            }
        };
        if better {
            best = Some((diff, eps_f, stats));
        }
    }
    let (_, _, euc_stats) = best.expect("grid is non-empty");

    Ok(CalibrationReport {
        hyperbolic: CalibrationSide {
            geometry: Geometry::Hyperbolic,
            epsilon: hyp_stats.epsilon,
            worst_n_w: hyp_stats.aggregate.max_n_w,
            expected_n_w: hyp_stats.aggregate.avg_n_w,
        },
        euclidean: CalibrationSide {
            geometry: Geometry::Euclidean,
            epsilon: euc_stats.epsilon,
            worst_n_w: euc_stats.aggregate.max_n_w,
            expected_n_w: euc_stats.aggregate.avg_n_w,
        },
        grid: grid
            .iter()
            .map(|e| e.to_f64().expect("finite epsilon"))
            .collect(),
        runs,
        master_seed,
        sample_words: words,
    })
}

/// One output row of a ratio verification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioRow {
    pub output: String,
    pub count_a: u64,
    pub count_b: u64,
    pub log_ratio: f64,
    pub slack: f64,
    pub within_bound: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DpVerdict {
    Pass,
    Fail,
    InsufficientSupport,
}

/// Empirical check of the metric-privacy ratio bound for one word pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DpRatioReport {
    pub word_a: String,
    pub word_b: String,
    pub epsilon: f64,
    pub distance: f64,
    /// `epsilon * distance`.
    pub bound: f64,
    pub runs: u64,
    pub support_threshold: u64,
    pub max_log_ratio: f64,
    pub verdict: DpVerdict,
    pub rows: Vec<RatioRow>,
}

/// Per-output 99% slack for a log-ratio of two empirical proportions.
fn log_ratio_slack(count_a: u64, count_b: u64, runs: u64) -> f64 {
    let n = runs as f64;
    let pa = count_a as f64 / n;
    let pb = count_b as f64 / n;
    Z_99 * ((1.0 - pa) / (n * pa) + (1.0 - pb) / (n * pb)).sqrt()
}

/// Run the mechanism `runs` times on each word and compare empirical output
/// probabilities against `exp(eps * d(a, b))`. Outputs below the support
/// threshold on either side are excluded; if none remain the verdict is
/// [`DpVerdict::InsufficientSupport`].
pub fn empirical_dp_ratio<T: Real>(
    word_a: &str,
    word_b: &str,
    vocab: &Vocabulary<T>,
    config: &MechanismConfig<T>,
    runs: u64,
    master_seed: u64,
    support_threshold: u64,
) -> Result<DpRatioReport, StatsError> {
    let id_a = vocab
        .lookup(word_a)
        .ok_or_else(|| EmbeddingError::UnknownWord(word_a.to_string()))?;
    let id_b = vocab
        .lookup(word_b)
        .ok_or_else(|| EmbeddingError::UnknownWord(word_b.to_string()))?;
    let distance = vocab.word_distance(id_a, id_b).to_f64().expect("finite");
    let epsilon = config.epsilon.to_f64().expect("finite epsilon");
    let bound = epsilon * distance;

    // Argument-position streams keep the two tallies independent even when
    // the pair is a single word compared with itself.
    let tally_a = tally_outputs(vocab, config, word_a, runs, master_seed, 0)?;
    let tally_b = tally_outputs(vocab, config, word_b, runs, master_seed, 1)?;

    let mut rows = Vec::new();
    let mut max_log_ratio = 0.0_f64;
    for (output, &count_a) in &tally_a {
        let Some(&count_b) = tally_b.get(output) else {
            continue;
        };
        if count_a < support_threshold || count_b < support_threshold {
            continue;
        }
        let log_ratio = (count_a as f64 / count_b as f64).ln();
        let slack = log_ratio_slack(count_a, count_b, runs);
        let within_bound = log_ratio.abs() <= bound + slack;
        max_log_ratio = max_log_ratio.max(log_ratio.abs());
        rows.push(RatioRow {
            output: output.clone(),
            count_a,
            count_b,
            log_ratio,
            slack,
            within_bound,
        });
    }

    let verdict = if rows.is_empty() {
        DpVerdict::InsufficientSupport
    } else if rows.iter().all(|r| r.within_bound) {
        DpVerdict::Pass
    } else {
        DpVerdict::Fail
    };

    Ok(DpRatioReport {
        word_a: word_a.to_string(),
        word_b: word_b.to_string(),
        epsilon,
        distance,
        bound,
        runs,
        support_threshold,
        max_log_ratio,
        verdict,
        rows,
    })
}

/// Metadata stamped on every machine-readable report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportMeta {
    pub tool_version: String,
    pub seed: u64,
    pub epsilon: f64,
    pub geometry: Geometry,
    pub embedding_checksum: Option<String>,
}

/// Wrapper serialized as the JSON stats report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StatsReport {
    pub meta: ReportMeta,
    pub stats: PrivacyStats,
}

/// Write the per-word statistics as TSV: `#`-prefixed metadata lines, a
/// header, and one row per word.
pub fn write_stats_tsv<W: Write>(
    out: &mut W,
    stats: &PrivacyStats,
    meta: &ReportMeta,
) -> std::io::Result<()> {
    writeln!(out, "# tool_version\t{}", meta.tool_version)?;
    writeln!(out, "# seed\t{}", meta.seed)?;
    writeln!(out, "# epsilon\t{}", meta.epsilon)?;
    writeln!(out, "# geometry\t{}", meta.geometry)?;
    if let Some(ck) = &meta.embedding_checksum {
        writeln!(out, "# embedding_checksum\t{ck}")?;
    }
    writeln!(out, "# runs\t{}", stats.runs)?;
    writeln!(out, "word\tn_w\ts_w\tk_w\th0\th_inf")?;
    for r in &stats.records {
        let k = r
            .k_w
            .map(|k| k.to_string())
            .unwrap_or_else(|| "NA".to_string());
        let h_inf = r
            .h_inf
            .map(|h| format!("{h}"))
            .unwrap_or_else(|| "inf".to_string());
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.word, r.n_w, r.s_w, k, r.h0, h_inf
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embeddings::generate_synthetic_taxonomy;
    use crate::sampler::ProposalKind;

    fn fixture() -> Vocabulary<f64> {
        generate_synthetic_taxonomy(3, 3, 2, 7).unwrap()
    }

    fn euclidean_twin(v: &Vocabulary<f64>) -> Vocabulary<f64> {
        let rows = v.ids().map(|id| v.row(id).to_vec()).collect();
        Vocabulary::from_rows(v.words().to_vec(), rows, Geometry::Euclidean).unwrap()
    }

    #[test]
    fn huge_epsilon_means_no_privacy() {
        let vocab = fixture();
        let config = MechanismConfig::new(1e6_f64);
        let stats = estimate_stats(&vocab, &config, 1000, &WordSample::All, 21).unwrap();
        for r in &stats.records {
            assert!(
                r.n_w as f64 / 1000.0 > 0.99,
                "{} flipped too often: {}",
                r.word,
                r.n_w
            );
            assert!(r.s_w <= 2);
        }
        assert_eq!(stats.aggregate.max_n_w, 1000);
    }

    #[test]
    fn n_w_and_s_w_trends_across_epsilon() {
        let vocab = fixture();
        let run = |eps: f64| {
            let config = MechanismConfig::new(eps);
            estimate_stats(&vocab, &config, 1000, &WordSample::All, 33).unwrap()
        };
        let low = run(0.125);
        let high = run(8.0);
        assert!(low.aggregate.avg_n_w < high.aggregate.avg_n_w);
        assert!(low.aggregate.avg_s_w > high.aggregate.avg_s_w);
    }

    #[test]
    fn sample_invariants_hold() {
        let vocab = fixture();
        let config = MechanismConfig::new(1.0_f64);
        let sample = WordSample::Random { size: 10, seed: 5 };
        let stats = estimate_stats(&vocab, &config, 200, &sample, 9).unwrap();
        assert_eq!(stats.records.len(), 10);
        for r in &stats.records {
            assert!(r.n_w <= 200);
            assert!(r.s_w >= 1 && r.s_w <= 200);
            if let Some(k) = r.k_w {
                assert!(k <= r.s_w, "{}: k_w {} > s_w {}", r.word, k, r.s_w);
            }
        }
    }

    #[test]
    fn estimates_are_deterministic() {
        let vocab = fixture();
        let config = MechanismConfig::new(0.5_f64);
        let sample = WordSample::Random { size: 8, seed: 3 };
        let a = estimate_stats(&vocab, &config, 300, &sample, 77).unwrap();
        let b = estimate_stats(&vocab, &config, 300, &sample, 77).unwrap();
        let render = |s: &PrivacyStats| serde_json::to_string(s).unwrap();
        assert_eq!(render(&a), render(&b));
    }

    #[test]
    fn per_word_tallies_are_independent_of_the_sample() {
        // Word streams derive from (master seed, vocab index), so a word's
        // record is the same whether it is tallied alone or within a larger
        // sample — the property that makes parallel tallies equal serial ones.
        let vocab = fixture();
        let config = MechanismConfig::new(0.5_f64);
        let pair = WordSample::Words(vec!["n.1.2.0".into(), "n.2.0.1".into()]);
        let solo = WordSample::Words(vec!["n.2.0.1".into()]);
        let both = estimate_stats(&vocab, &config, 200, &pair, 99).unwrap();
        let alone = estimate_stats(&vocab, &config, 200, &solo, 99).unwrap();
        let from_pair = both.records.iter().find(|r| r.word == "n.2.0.1").unwrap();
        let from_solo = &alone.records[0];
        assert_eq!(from_pair.n_w, from_solo.n_w);
        assert_eq!(from_pair.s_w, from_solo.s_w);
        assert_eq!(from_pair.k_w, from_solo.k_w);
    }

    #[test]
    fn entropy_proxy_edge_cases() {
        assert_eq!(entropy_proxies(0, 1, 100), ((1.0_f64).log2(), None));
        let (h0, h_inf) = entropy_proxies(100, 1, 100);
        assert_eq!(h0, 0.0);
        assert_eq!(h_inf, Some(0.0));
        let (h0, _) = entropy_proxies(5, 8, 100);
        assert_eq!(h0, 3.0);
    }

    #[test]
    fn kw_is_zero_when_outputs_are_only_the_word_itself() {
        let vocab = fixture();
        let mut observed = BTreeMap::new();
        observed.insert("n.0.0.0".to_string(), 100_u64);
        assert_eq!(compute_kw(&observed, &vocab).unwrap(), 0);
    }

    #[test]
    fn kw_counts_observed_words_below_an_ancestor_output() {
        let vocab = fixture();
        // Outputs: the word itself, two sibling leaves, and the parent.
        let mut observed = BTreeMap::new();
        observed.insert("n.1.1.0".to_string(), 50_u64);
        observed.insert("n.1.1.1".to_string(), 30_u64);
        observed.insert("n.1.1.2".to_string(), 10_u64);
        observed.insert("n.1.1".to_string(), 10_u64);
        // Leaves carry nothing below them (same level band), so the minimum
        // nonzero count is the parent's: the three observed leaves below it.
        assert_eq!(compute_kw(&observed, &vocab).unwrap(), 3);
    }

    #[test]
    fn kw_requires_hyperbolic_geometry() {
        let vocab = euclidean_twin(&fixture());
        let mut observed = BTreeMap::new();
        observed.insert("n.0.0.0".to_string(), 1_u64);
        assert!(compute_kw(&observed, &vocab).is_err());
    }

    #[test]
    fn kw_at_most_s_w_on_real_runs() {
        let vocab = fixture();
        let config = MechanismConfig::new(0.125_f64);
        let stats = estimate_stats(&vocab, &config, 500, &WordSample::All, 13).unwrap();
        for r in &stats.records {
            let k = r.k_w.expect("hyperbolic run has k_w");
            assert!(k <= r.s_w);
        }
    }

    #[test]
    fn calibration_direction_matches_reference_protocol() {
        let hyp = fixture();
        let euc = euclidean_twin(&hyp);
        let config = MechanismConfig::new(0.125_f64);
        let grid = [0.5_f64, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0];
        let report =
            calibrate_euclidean(&hyp, &euc, &config, 500, &WordSample::All, &grid, 55).unwrap();
        // Matched worst case, better expected case on the hyperbolic side.
        let rel = (report.hyperbolic.worst_n_w as f64 - report.euclidean.worst_n_w as f64).abs()
            / report.hyperbolic.worst_n_w as f64;
        assert!(rel <= 0.10, "worst-case mismatch {rel}");
        assert!(
            report.hyperbolic.expected_n_w < report.euclidean.expected_n_w,
            "expected {} !< {}",
            report.hyperbolic.expected_n_w,
            report.euclidean.expected_n_w
        );
    }

    #[test]
    fn degenerate_grid_passes_through() {
        let hyp = fixture();
        let euc = euclidean_twin(&hyp);
        let config = MechanismConfig::new(1.0_f64);
        let report =
            calibrate_euclidean(&hyp, &euc, &config, 100, &WordSample::All, &[3.0], 5).unwrap();
        assert_eq!(report.euclidean.epsilon, 3.0);
        assert_eq!(report.grid, vec![3.0]);
    }

    #[test]
    fn empty_grid_is_an_error() {
        let hyp = fixture();
        let euc = euclidean_twin(&hyp);
        let config = MechanismConfig::new(1.0_f64);
        let err = calibrate_euclidean(&hyp, &euc, &config, 10, &WordSample::All, &[], 5);
        assert!(matches!(err, Err(StatsError::EmptyGrid)));
    }

    #[test]
    fn dp_ratio_identical_words_pass() {
        let vocab = fixture();
        let config = MechanismConfig::new(2.0_f64);
        let report = empirical_dp_ratio(
            "n.1.1.1",
            "n.1.1.1",
            &vocab,
            &config,
            20_000,
            61,
            DEFAULT_SUPPORT_THRESHOLD,
        )
        .unwrap();
        assert_eq!(report.bound, 0.0);
        assert_eq!(report.verdict, DpVerdict::Pass);
    }

    #[test]
    fn dp_ratio_bound_grows_with_distance() {
        let vocab = fixture();
        let config = MechanismConfig::new(2.0_f64);
        let near = empirical_dp_ratio("n.2.2.1", "n.2.2.2", &vocab, &config, 100, 1, 1).unwrap();
        let far = empirical_dp_ratio("n.2.2.1", "n.0.1.0", &vocab, &config, 100, 1, 1).unwrap();
        assert!(far.bound > near.bound);
    }

    #[test]
    fn dp_ratio_insufficient_support_is_explicit() {
        let vocab = fixture();
        let mut config = MechanismConfig::new(1e6_f64);
        config.proposal = ProposalKind::DirectBall;
        // At enormous epsilon each word only ever maps to itself, so two
        // distinct words share no outputs at all.
        let report = empirical_dp_ratio(
            "n.0.0.0",
            "n.2.2.2",
            &vocab,
            &config,
            1000,
            3,
            DEFAULT_SUPPORT_THRESHOLD,
        )
        .unwrap();
        assert_eq!(report.verdict, DpVerdict::InsufficientSupport);
        assert!(report.rows.is_empty());
    }

    #[test]
    fn stats_tsv_has_metadata_and_rows() {
        let vocab = fixture();
        let config = MechanismConfig::new(1.0_f64);
        let stats = estimate_stats(
            &vocab,
            &config,
            50,
            &WordSample::Words(vec!["n.0.0.0".into(), "n.1".into()]),
            2,
        )
        .unwrap();
        let meta = ReportMeta {
            tool_version: "test".into(),
            seed: 2,
            epsilon: 1.0,
            geometry: Geometry::Hyperbolic,
            embedding_checksum: Some("fnv1a:00".into()),
        };
        let mut buf = Vec::new();
        write_stats_tsv(&mut buf, &stats, &meta).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("# seed\t2"));
        assert!(text.contains("word\tn_w\ts_w\tk_w\th0\th_inf"));
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 3);
    }
}
