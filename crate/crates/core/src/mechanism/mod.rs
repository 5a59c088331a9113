//! The end-to-end privacy mechanism: per-word perturbation and whole-text
//! redaction with a pluggable word-selection policy.
//!
//! For each selected word the embedding is perturbed with noise and the
//! result is discretized to the nearest vocabulary word. Hyperbolic
//! vocabularies draw noise from the Metropolis–Hastings walker and add it in
//! ambient coordinates followed by the ball retraction; Euclidean
//! vocabularies add exponential-norm noise directly.

mod stopwords;

use std::collections::{BTreeSet, HashSet};

pub use stopwords::{DEFAULT_STOPWORDS, STOPWORDS_VERSION};

use crate::embeddings::{EmbeddingError, Geometry, Vocabulary};
use crate::geometry::project_into_ball;
use crate::real::Real;
use crate::sampler::{
    derive_rng, sample_euclidean_laplace, MhChain, ProposalKind, SamplerConfig, SamplerError,
};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, thiserror::Error)]
pub enum MechanismError {
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error("invalid mechanism config: {0}")]
    InvalidConfig(String),
}

/// Which tokens of an input are eligible for perturbation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Policy {
    /// Every token is eligible.
    AllWords,
    /// Every token except bundled/overridden stopwords.
    #[default]
    NonStopwords,
    /// Only the tokens at these 0-based positions.
    SlotIndices(BTreeSet<usize>),
}

/// How hyperbolic noise is combined with the word embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseApplication {
    /// Ambient coordinate addition followed by the ball retraction.
    #[default]
    AmbientAdd,
    /// Möbius translation of the origin-centered noise to the word
    /// (experimental alternative; not used by the calibration defaults).
    MobiusTranslate,
}

/// Full configuration of the mechanism.
#[derive(Debug, Clone)]
pub struct MechanismConfig<T> {
    pub epsilon: T,
    pub burn_in: usize,
    pub proposal_scale: T,
    pub proposal: ProposalKind,
    pub noise_application: NoiseApplication,
    pub policy: Policy,
    /// `None` selects the bundled list.
    pub stopwords: Option<Vec<String>>,
    /// Ball-retraction margin.
    pub ball_margin: T,
}

impl<T: Real> MechanismConfig<T> {
    pub fn new(epsilon: T) -> Self {
        Self {
            epsilon,
            burn_in: crate::sampler::DEFAULT_BURN_IN,
            proposal_scale: T::from_f64_lossy(crate::sampler::DEFAULT_PROPOSAL_SCALE),
            proposal: ProposalKind::default(),
            noise_application: NoiseApplication::default(),
            policy: Policy::default(),
            stopwords: None,
            ball_margin: T::from_f64_lossy(crate::geometry::DEFAULT_BALL_MARGIN),
        }
    }

    pub fn validate(&self) -> Result<(), MechanismError> {
        if !(self.epsilon.is_finite() && self.epsilon > T::zero()) {
            return Err(MechanismError::InvalidConfig("epsilon must be > 0".into()));
        }
        if !(self.ball_margin > T::zero() && self.ball_margin < T::one()) {
            return Err(MechanismError::InvalidConfig(
                "ball_margin must be in (0, 1)".into(),
            ));
        }
        Ok(())
    }

    fn stopword_set(&self) -> HashSet<String> {
        match &self.stopwords {
            Some(list) => list.iter().map(|w| w.to_lowercase()).collect(),
            None => DEFAULT_STOPWORDS.iter().map(|w| w.to_string()).collect(),
        }
    }
}

/// Per-token outcome of a redaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TokenStatus {
    Perturbed,
    UnchangedByPolicy,
    UnchangedUnknownWord,
    UnchangedSelfSample,
}

impl TokenStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            TokenStatus::Perturbed => "perturbed",
            TokenStatus::UnchangedByPolicy => "unchanged-by-policy",
            TokenStatus::UnchangedUnknownWord => "unchanged-unknown-word",
            TokenStatus::UnchangedSelfSample => "unchanged-self-sample",
        }
    }
}

/// Output of [`redact_text`]: three aligned per-token sequences.
#[derive(Debug, Clone)]
pub struct RedactionResult {
    pub original_tokens: Vec<String>,
    pub released_tokens: Vec<String>,
    pub statuses: Vec<TokenStatus>,
}

impl RedactionResult {
    pub fn released_text(&self) -> String {
        self.released_tokens.join(" ")
    }
}

/// A per-call noise supply. Hyperbolic noise consumes successive post-burn-in
/// states of one seeded chain; Euclidean noise is drawn fresh per word.
#[derive(Debug)]
pub enum NoiseSource<T> {
    Hyperbolic(MhChain<T>),
    Euclidean {
        dim: usize,
        epsilon: T,
        rng: ChaCha8Rng,
    },
}

impl<T: Real> NoiseSource<T> {
    /// Build the matching noise source for a vocabulary. The seed fully
    /// determines the stream.
    pub fn for_vocabulary(
        vocab: &Vocabulary<T>,
        config: &MechanismConfig<T>,
        seed: u64,
    ) -> Result<Self, MechanismError> {
        Self::for_vocabulary_stream(vocab, config, seed, 0)
    }

    /// Noise source on a derived `(master seed, stream)` RNG, for harnesses
    /// that fan one seed out across many words.
    pub fn for_vocabulary_stream(
        vocab: &Vocabulary<T>,
        config: &MechanismConfig<T>,
        master_seed: u64,
        stream: u64,
    ) -> Result<Self, MechanismError> {
        config.validate()?;
        match vocab.geometry() {
            Geometry::Hyperbolic => {
                let sampler_config = SamplerConfig {
                    dim: vocab.dim(),
                    epsilon: config.epsilon,
                    burn_in: config.burn_in,
                    proposal_scale: config.proposal_scale,
                    seed: master_seed,
                    count: 1, // consumed incrementally
                    proposal: config.proposal,
                };
                Ok(NoiseSource::Hyperbolic(MhChain::with_stream(
                    &sampler_config,
                    stream,
                )?))
            }
            Geometry::Euclidean => Ok(NoiseSource::Euclidean {
                dim: vocab.dim(),
                epsilon: config.epsilon,
                rng: derive_rng(master_seed, stream),
            }),
        }
    }

    fn next_noise(&mut self) -> Vec<T> {
        match self {
            NoiseSource::Hyperbolic(chain) => chain.draw().coords().to_vec(),
            NoiseSource::Euclidean { dim, epsilon, rng } => {
                sample_euclidean_laplace(*dim, *epsilon, rng)
                    .coords()
                    .to_vec()
            }
        }
    }
}

/// Perturb one in-vocabulary word and discretize back to the vocabulary.
pub fn perturb_word<T: Real>(
    word: &str,
    vocab: &Vocabulary<T>,
    config: &MechanismConfig<T>,
    noise: &mut NoiseSource<T>,
) -> Result<String, MechanismError> {
    let id = vocab
        .lookup(word)
        .ok_or_else(|| EmbeddingError::UnknownWord(word.to_string()))?;
    let row = vocab.row(id);
    let z = noise.next_noise();

    let query: Vec<T> = match vocab.geometry() {
        Geometry::Hyperbolic => match config.noise_application {
            NoiseApplication::AmbientAdd => {
                let summed: Vec<T> = row.iter().zip(&z).map(|(&a, &b)| a + b).collect();
                project_into_ball(&summed, config.ball_margin)
                    .coords()
                    .to_vec()
            }
            NoiseApplication::MobiusTranslate => {
                let base = crate::geometry::PoincareVec::new(row.to_vec())
                    .expect("hyperbolic vocabulary rows are inside the ball");
                let noise_pt = crate::geometry::PoincareVec::new(z)
                    .expect("hyperbolic noise stays inside the ball");
                base.mobius_add(&noise_pt)
                    .expect("dimensions agree")
                    .coords()
                    .to_vec()
            }
        },
        Geometry::Euclidean => row.iter().zip(&z).map(|(&a, &b)| a + b).collect(),
    };

    let nearest = vocab.nearest_word(&query)?;
    Ok(vocab.word(nearest).to_string())
}

/// Redact a token sequence: tokens selected by the policy and present in the
/// vocabulary are perturbed; everything else passes through labeled. Token
/// count and order are always preserved.
pub fn redact_text<T: Real>(
    tokens: &[String],
    vocab: &Vocabulary<T>,
    config: &MechanismConfig<T>,
    seed: u64,
) -> Result<RedactionResult, MechanismError> {
    redact_text_stream(tokens, vocab, config, seed, 0)
}

/// [`redact_text`] on a derived `(master seed, stream)` RNG; batch callers
/// fan one seed across many lines this way.
pub fn redact_text_stream<T: Real>(
    tokens: &[String],
    vocab: &Vocabulary<T>,
    config: &MechanismConfig<T>,
    seed: u64,
    stream: u64,
) -> Result<RedactionResult, MechanismError> {
    config.validate()?;
    let stopwords = config.stopword_set();
    let mut noise = NoiseSource::for_vocabulary_stream(vocab, config, seed, stream)?;

    let mut released = Vec::with_capacity(tokens.len());
    let mut statuses = Vec::with_capacity(tokens.len());

    for (i, token) in tokens.iter().enumerate() {
        let (prefix, core, suffix) = split_token(token);
        let key = core.to_lowercase();

        let selected = match &config.policy {
            Policy::AllWords => true,
            Policy::NonStopwords => !key.is_empty() && !stopwords.contains(&key),
            Policy::SlotIndices(slots) => slots.contains(&i),
        };
        if !selected || key.is_empty() {
            released.push(token.clone());
            statuses.push(TokenStatus::UnchangedByPolicy);
            continue;
        }
        if vocab.lookup(&key).is_none() {
            released.push(token.clone());
            statuses.push(TokenStatus::UnchangedUnknownWord);
            continue;
        }
        let replacement = perturb_word(&key, vocab, config, &mut noise)?;
        if replacement == key {
            released.push(token.clone());
            statuses.push(TokenStatus::UnchangedSelfSample);
        } else {
            released.push(format!("{prefix}{replacement}{suffix}"));
            statuses.push(TokenStatus::Perturbed);
        }
    }

    Ok(RedactionResult {
        original_tokens: tokens.to_vec(),
        released_tokens: released,
        statuses,
    })
}

/// Whitespace tokenization of a line.
pub fn tokenize(line: &str) -> Vec<String> {
    line.split_whitespace().map(|t| t.to_string()).collect()
}

/// Strip leading/trailing non-alphanumeric characters, keeping them for
/// re-attachment: `"(london)."` -> `("(", "london", ").")`.
fn split_token(token: &str) -> (&str, &str, &str) {
    let start = token
        .char_indices()
        .find(|(_, c)| c.is_alphanumeric())
        .map(|(i, _)| i);
    let Some(start) = start else {
        return ("", "", token); // no word core at all
    };
    let end = token
        .char_indices()
        .rev()
        .find(|(_, c)| c.is_alphanumeric())
        .map(|(i, c)| i + c.len_utf8())
        .expect("a start implies an end");
    (&token[..start], &token[start..end], &token[end..])
}
