//! Noise generation: a Metropolis–Hastings walker over the hyperbolic noise
//! density, and the exponential-norm sampler used by the Euclidean baseline.
//!
//! Randomness comes from `ChaCha8Rng` (rand_chacha 0.9, stream layout pinned
//! by that release): streams are byte-reproducible across platforms for a
//! given seed, which the acceptance tests rely on.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::density::log_unnormalized_radial;
use crate::geometry::{project_into_ball, EuclideanVec, PoincareVec, DEFAULT_BALL_MARGIN};
use crate::real::Real;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SamplerError {
    #[error("invalid sampler config: {0}")]
    InvalidConfig(String),
}

/// How the walker proposes its next candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProposalKind {
    /// Gaussian step around the current ball point, then translated through
    /// the hyperboloid lift back into the ball. The translation contracts
    /// toward the origin, and no Hastings correction is applied, so the
    /// stationary law is more concentrated than the noise density itself.
    #[default]
    LiftTranslate,
    /// Gaussian step kept in ball coordinates; candidates falling outside the
    /// ball get density zero and are rejected. This is a symmetric-proposal
    /// walker whose stationary law is exactly the noise density — used to
    /// validate distributional correctness and quantify the bias of
    /// [`ProposalKind::LiftTranslate`].
    DirectBall,
}

/// Everything that determines a noise stream.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig<T> {
    pub dim: usize,
    pub epsilon: T,
    pub burn_in: usize,
    pub proposal_scale: T,
    pub seed: u64,
    pub count: usize,
    pub proposal: ProposalKind,
}

pub const DEFAULT_BURN_IN: usize = 1000;
pub const DEFAULT_PROPOSAL_SCALE: f64 = 0.1;

impl<T: Real> SamplerConfig<T> {
    pub fn new(dim: usize, epsilon: T, seed: u64, count: usize) -> Self {
        Self {
            dim,
            epsilon,
            burn_in: DEFAULT_BURN_IN,
            proposal_scale: T::from_f64_lossy(DEFAULT_PROPOSAL_SCALE),
            seed,
            count,
            proposal: ProposalKind::default(),
        }
    }

    pub fn validate(&self) -> Result<(), SamplerError> {
        if self.dim == 0 {
            return Err(SamplerError::InvalidConfig("dim must be >= 1".into()));
        }
        if !(self.epsilon.is_finite() && self.epsilon > T::zero()) {
            return Err(SamplerError::InvalidConfig("epsilon must be > 0".into()));
        }
        if !(self.proposal_scale.is_finite() && self.proposal_scale > T::zero()) {
            return Err(SamplerError::InvalidConfig(
                "proposal_scale must be > 0".into(),
            ));
        }
        if self.count == 0 {
            return Err(SamplerError::InvalidConfig("count must be >= 1".into()));
        }
        Ok(())
    }
}

/// A finished run of the walker.
#[derive(Debug, Clone)]
pub struct NoiseStream<T> {
    pub samples: Vec<PoincareVec<T>>,
    pub acceptance_rate: f64,
    pub clamp_count: u64,
    /// Lag-1 autocorrelation of the sample radii (no thinning is applied;
    /// this reports how correlated consecutive draws are). `None` when the
    /// radius series is constant.
    pub lag1_autocorr: Option<f64>,
}

/// The walker itself: owns the chain state so post-burn-in states can be
/// consumed one at a time (the mechanism draws noise this way).
#[derive(Debug, Clone)]
pub struct MhChain<T> {
    dim: usize,
    epsilon: T,
    proposal_scale: T,
    proposal: ProposalKind,
    rng: ChaCha8Rng,
    state: Vec<T>,
    accepted: u64,
    steps: u64,
    clamp_count: u64,
}

impl<T: Real> MhChain<T> {
    /// Build the walker and run its burn-in. The chain starts at the ball
    /// origin (the image of the hyperboloid north pole).
    pub fn new(config: &SamplerConfig<T>) -> Result<Self, SamplerError> {
        Self::with_stream(config, 0)
    }

    /// Like [`MhChain::new`], but on a derived RNG stream so many chains can
    /// fan out deterministically from one master seed.
    pub fn with_stream(config: &SamplerConfig<T>, stream: u64) -> Result<Self, SamplerError> {
        config.validate()?;
        let mut chain = Self {
            dim: config.dim,
            epsilon: config.epsilon,
            proposal_scale: config.proposal_scale,
            proposal: config.proposal,
            rng: derive_rng(config.seed, stream),
            state: vec![T::zero(); config.dim],
            accepted: 0,
            steps: 0,
            clamp_count: 0,
        };
        for _ in 0..config.burn_in {
            chain.step();
        }
        Ok(chain)
    }

    fn current_radius(&self) -> T {
        self.state
            .iter()
            .fold(T::zero(), |acc, &c| acc + c * c)
            .sqrt()
    }

    /// One MH iteration; the state after the call is the next chain sample.
    fn step(&mut self) {
        let sigma = self.proposal_scale;
        let mut candidate: Vec<T> = self
            .state
            .iter()
            .map(|&c| {
                let z: f64 = StandardNormal.sample(&mut self.rng);
                c + sigma * T::from_f64_lossy(z)
            })
            .collect();

        let cand_log_f = match self.proposal {
            ProposalKind::LiftTranslate => {
                // Translate through the hyperboloid into the ball.
                let lifted = EuclideanVec::new(candidate.clone())
                    .expect("chain coordinates stay finite")
                    .lift_to_lorentz();
                let ball = lifted.to_poincare();
                candidate = ball.coords().to_vec();
                let mut r = ball.norm();
                if r >= T::one() {
                    let projected =
                        project_into_ball(&candidate, T::from_f64_lossy(DEFAULT_BALL_MARGIN));
                    candidate = projected.coords().to_vec();
                    r = projected.norm();
                    self.clamp_count += 1;
                }
                log_unnormalized_radial(r, self.epsilon)
            }
            ProposalKind::DirectBall => {
                let r = candidate
                    .iter()
                    .fold(T::zero(), |acc, &c| acc + c * c)
                    .sqrt();
                if r >= T::one() {
                    T::neg_infinity() // outside the support: always rejected
                } else {
                    log_unnormalized_radial(r, self.epsilon)
                }
            }
        };

        let cur_log_f = log_unnormalized_radial(self.current_radius(), self.epsilon);
        let log_alpha = cand_log_f - cur_log_f;
        let u: f64 = self.rng.random();
        self.steps += 1;
        let accept = cand_log_f > T::neg_infinity()
            && (log_alpha >= T::zero() || T::from_f64_lossy(u.ln()) <= log_alpha);
        if accept {
            self.state = candidate;
            self.accepted += 1;
        }
    }

    /// Advance one iteration and return the resulting chain state.
    pub fn draw(&mut self) -> PoincareVec<T> {
        self.step();
        PoincareVec::new(self.state.clone()).expect("chain state stays inside the ball")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.accepted as f64 / self.steps as f64
        }
    }

    pub fn clamp_count(&self) -> u64 {
        self.clamp_count
    }
}

/// Run the walker to completion: burn-in, then `count` successive states.
pub fn mh_sample<T: Real>(config: &SamplerConfig<T>) -> Result<NoiseStream<T>, SamplerError> {
    let mut chain = MhChain::new(config)?;
    let samples: Vec<PoincareVec<T>> = (0..config.count).map(|_| chain.draw()).collect();
    let radii: Vec<f64> = samples
        .iter()
        .map(|p| p.norm().to_f64().expect("finite radius"))
        .collect();
    Ok(NoiseStream {
        samples,
        acceptance_rate: chain.acceptance_rate(),
        clamp_count: chain.clamp_count(),
        lag1_autocorr: lag1_autocorrelation(&radii),
    })
}

fn lag1_autocorrelation(series: &[f64]) -> Option<f64> {
    if series.len() < 2 {
        return None;
    }
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let var: f64 = series.iter().map(|x| (x - mean) * (x - mean)).sum();
    if var <= 0.0 {
        return None;
    }
    let cov: f64 = series
        .windows(2)
        .map(|w| (w[0] - mean) * (w[1] - mean))
        .sum();
    Some(cov / var)
}

/// One draw of Euclidean noise with density proportional to
/// `exp(-eps ||z||)`: a uniform direction on the unit sphere scaled by a
/// Gamma(dim, eps) magnitude.
pub fn sample_euclidean_laplace<T: Real, R: Rng>(
    dim: usize,
    eps: T,
    rng: &mut R,
) -> EuclideanVec<T> {
    assert!(dim >= 1, "dim must be >= 1");
    let eps_f = eps.to_f64().expect("finite epsilon");
    assert!(eps_f > 0.0 && eps_f.is_finite(), "eps must be > 0");
    let gamma = Gamma::new(dim as f64, 1.0 / eps_f).expect("valid gamma parameters");
    let magnitude = gamma.sample(rng);
    loop {
        let dir: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let norm = dir.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return EuclideanVec::new(
                dir.iter()
                    .map(|&c| T::from_f64_lossy(c / norm * magnitude))
                    .collect(),
            )
            .expect("finite noise coordinates");
        }
        // Degenerate direction draw; redrawing preserves uniformity.
    }
}

/// Deterministic per-stream RNG derivation: a master seed fans out into
/// independent ChaCha streams (used for per-word tallies so that parallel and
/// serial runs agree).
pub fn derive_rng(master_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}
