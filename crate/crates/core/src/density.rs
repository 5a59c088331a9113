//! The hyperbolic noise density and its normalization constant.
//!
//! The unnormalized density at a ball point `x` is
//! `f(x) = ((1 + ||x||) / (1 - ||x||))^(-eps)`, which equals
//! `exp(-eps * d(0, x))` for the ball-model distance `d`. The one-dimensional
//! normalizer is `Z(eps) = 2 * 2F1(1, eps; 2 + eps; -1) / (1 + eps)`; the
//! n-dimensional normalizer is never needed because the sampler only ever
//! consumes density ratios.

use crate::geometry::PoincareVec;
use crate::real::Real;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DensityError {
    #[error("epsilon must be positive and finite (got {0})")]
    InvalidEpsilon(f64),
    #[error("point lies outside the open interval (-1, 1)")]
    OutsideSupport,
    #[error("hypergeometric series did not converge within {terms} terms")]
    NonConvergence { terms: usize },
}

/// The noise density for one `(eps, dim)` pair, with the 1-d normalizer
/// computed once up front.
#[derive(Debug, Clone)]
pub struct HyperbolicDensity<T> {
    epsilon: T,
    dim: usize,
    z_1d: T,
}

impl<T: Real> HyperbolicDensity<T> {
    pub fn new(epsilon: T, dim: usize) -> Result<Self, DensityError> {
        if !(epsilon.is_finite() && epsilon > T::zero()) {
            return Err(DensityError::InvalidEpsilon(
                epsilon.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(Self {
            epsilon,
            dim,
            z_1d: normalization_z(epsilon)?,
        })
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Unnormalized density at `x`.
    pub fn unnormalized(&self, x: &PoincareVec<T>) -> T {
        unnormalized_density(x, self.epsilon)
    }

    /// Normalized one-dimensional pdf at scalar `x` in (-1, 1).
    pub fn pdf_1d(&self, x: T) -> Result<T, DensityError> {
        if !(x.is_finite() && x.abs() < T::one()) {
            return Err(DensityError::OutsideSupport);
        }
        Ok(unnormalized_radial(x.abs(), self.epsilon) / self.z_1d)
    }

    /// The 1-d normalization constant `Z(eps)`.
    pub fn z_1d(&self) -> T {
        self.z_1d
    }
}

/// Unnormalized density at a ball point: `(-2/(||x|| - 1) - 1)^(-eps)`.
pub fn unnormalized_density<T: Real>(x: &PoincareVec<T>, eps: T) -> T {
    unnormalized_radial(x.norm(), eps)
}

/// Radial form of the unnormalized density, `r = ||x|| in [0, 1)`.
pub fn unnormalized_radial<T: Real>(r: T, eps: T) -> T {
    let two = T::from_f64_lossy(2.0);
    let base = -two / (r - T::one()) - T::one();
    if !base.is_finite() {
        // r indistinguishable from 1: the density limit is 0.
        return T::zero();
    }
    base.powf(-eps)
}

/// Log of the unnormalized density; the sampler works with ratios in log space.
pub fn log_unnormalized_radial<T: Real>(r: T, eps: T) -> T {
    let two = T::from_f64_lossy(2.0);
    let base = -two / (r - T::one()) - T::one();
    if !base.is_finite() {
        return T::neg_infinity();
    }
    -eps * base.ln()
}

/// Plain-summation term budget before switching to Euler acceleration.
pub const PLAIN_TERM_BUDGET: usize = 100_000;
/// Absolute term tolerance for series convergence.
const SERIES_TOL: f64 = 1e-14;
/// Maximum order of the Euler transformation.
const EULER_MAX_ORDER: usize = 512;

/// `2F1(1, eps; 2 + eps; -1)` by alternating power series.
///
/// The terms reduce to `t_n = (-1)^n * eps (eps+1) / ((eps+n)(eps+n+1))`,
/// generated by the recurrence `t_{n+1} = -t_n (eps+n)/(eps+2+n)`. Plain
/// summation is tried first; past [`PLAIN_TERM_BUDGET`] terms the tail decays
/// too slowly (O(1/n^2)) and the sum is restarted under an Euler
/// transformation, which converges geometrically for this series.
pub fn hyp2f1_special<T: Real>(eps: T) -> Result<T, DensityError> {
    if !(eps.is_finite() && eps >= T::zero()) {
        return Err(DensityError::InvalidEpsilon(
            eps.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let eps = eps.to_f64().expect("finite scalar");
    let tol = SERIES_TOL;

    // Plain summation.
    let mut sum = 1.0_f64;
    let mut term = 1.0_f64;
    for n in 0..PLAIN_TERM_BUDGET {
        let nf = n as f64;
        term *= -(eps + nf) / (eps + 2.0 + nf);
        sum += term;
        if term.abs() < tol {
            return Ok(T::from_f64_lossy(sum));
        }
    }

    // Euler transformation of sum_{n>=0} (-1)^n a_n with
    // a_n = eps (eps+1) / ((eps+n)(eps+n+1)):
    //   S = sum_{k>=0} (-1)^k (Delta^k a_0) / 2^(k+1).
    // a_n is completely monotone, so (-1)^k Delta^k a_0 > 0 and the
    // difference table is numerically benign.
    let a = |n: usize| -> f64 {
        let nf = n as f64;
        eps * (eps + 1.0) / ((eps + nf) * (eps + nf + 1.0))
    };
    let mut diffs: Vec<f64> = (0..EULER_MAX_ORDER).map(a).collect();
    let mut sum = 0.0_f64;
    let mut weight = 0.5_f64;
    for k in 0..EULER_MAX_ORDER {
        let contrib = diffs[0] * weight;
        sum += contrib;
        if contrib.abs() < tol {
            return Ok(T::from_f64_lossy(sum));
        }
        // In-place forward difference: diffs[i] <- diffs[i] - diffs[i+1],
        // which carries (-1)^k Delta^k a_i with positive sign throughout.
        let len = EULER_MAX_ORDER - k - 1;
        for i in 0..len {
            diffs[i] -= diffs[i + 1];
        }
        weight *= 0.5;
    }
    Err(DensityError::NonConvergence {
        terms: PLAIN_TERM_BUDGET + EULER_MAX_ORDER,
    })
}

/// 1-d normalization constant `Z(eps) = 2 * 2F1(1, eps; 2+eps; -1) / (1+eps)`.
pub fn normalization_z<T: Real>(eps: T) -> Result<T, DensityError> {
    if !(eps.is_finite() && eps > T::zero()) {
        return Err(DensityError::InvalidEpsilon(
            eps.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let two = T::from_f64_lossy(2.0);
    Ok(two * hyp2f1_special(eps)? / (T::one() + eps))
}

/// Normalized 1-d pdf at `x` in (-1, 1).
pub fn pdf_1d<T: Real>(x: T, eps: T) -> Result<T, DensityError> {
    if !(x.is_finite() && x.abs() < T::one()) {
        return Err(DensityError::OutsideSupport);
    }
    Ok(unnormalized_radial(x.abs(), eps) / normalization_z(eps)?)
}
