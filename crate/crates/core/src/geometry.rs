//! Poincaré-ball and Lorentz (hyperboloid) models of hyperbolic space.
//!
//! Points in the ball model live in the open unit ball `B^n = { x : ||x|| < 1 }`;
//! points in the Lorentz model live on the upper sheet of the hyperboloid
//! `H^n = { x in R^(n+1) : <x,x>_L = -1, x_0 > 0 }` where
//! `<u,v>_L = -u_0 v_0 + sum_i u_i v_i` is the Minkowski bilinear form.
//!
//! The two models are isometric; [`LorentzVec::to_poincare`] and
//! [`PoincareVec::to_lorentz`] convert between them. Distances are
//! `d_B(u,v) = arcosh(1 + 2||u-v||^2 / ((1-||u||^2)(1-||v||^2)))` in the ball
//! and `d_L(u,v) = arcosh(-<u,v>_L)` on the hyperboloid.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::real::Real;

/// Errors from constructing or combining geometric values.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinates must be finite")]
    NotFinite,
    #[error("point lies outside the open unit ball (norm {norm})")]
    OutsideBall { norm: f64 },
    #[error("time coordinate must be positive (got {x0})")]
    NonPositiveTime { x0: f64 },
    #[error("hyperboloid constraint violated: <x,x>_L = {inner}")]
    OffHyperboloid { inner: f64 },
    #[error("empty coordinate vector")]
    Empty,
}

/// Count of arcosh arguments clamped up to 1 (floating-point noise near z = 1,
/// or numerical violations of the inner-product bound). Process-wide.
static ARCOSH_CLAMPS: AtomicU64 = AtomicU64::new(0);

/// Number of arcosh clamping events since the last reset.
pub fn arcosh_clamp_count() -> u64 {
    ARCOSH_CLAMPS.load(Ordering::Relaxed)
}

/// Reset the arcosh clamping diagnostic counter.
pub fn reset_arcosh_clamp_count() {
    ARCOSH_CLAMPS.store(0, Ordering::Relaxed);
}

/// arcosh via `ln(z + sqrt(z^2 - 1))`, clamping `z < 1` up to 1.
/// Clamping events are counted in a process-wide diagnostic.
fn stable_arcosh<T: Real>(z: T) -> T {
    let z = if z < T::one() {
        ARCOSH_CLAMPS.fetch_add(1, Ordering::Relaxed);
        T::one()
    } else {
        z
    };
    (z + (z * z - T::one()).sqrt()).ln()
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

fn norm_sq<T: Real>(a: &[T]) -> T {
    dot(a, a)
}

fn check_same_dim<T: Real>(a: &[T], b: &[T]) -> Result<(), GeometryError> {
    if a.len() != b.len() {
        return Err(GeometryError::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(())
}

/// A point in ordinary Euclidean space `R^n`. Carrier for raw embedding
/// coordinates and perturbed vectors before projection.
#[derive(Debug, Clone, PartialEq)]
pub struct EuclideanVec<T> {
    coords: Vec<T>,
}

impl<T: Real> EuclideanVec<T> {
    /// Validates that every entry is finite.
    pub fn new(coords: Vec<T>) -> Result<Self, GeometryError> {
        if coords.is_empty() {
            return Err(GeometryError::Empty);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::NotFinite);
        }
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn norm(&self) -> T {
        norm_sq(&self.coords).sqrt()
    }

    /// Lift onto the hyperboloid: `x -> (sqrt(1 + ||x||^2), x)`.
    pub fn lift_to_lorentz(&self) -> LorentzVec<T> {
        let x0 = (T::one() + norm_sq(&self.coords)).sqrt();
        let mut coords = Vec::with_capacity(self.coords.len() + 1);
        coords.push(x0);
        coords.extend_from_slice(&self.coords);
        LorentzVec { coords }
    }

    /// Retract into the open unit ball: points with `||x|| >= 1` are pulled
    /// back to radius `1 - lambda`; interior points pass through unchanged.
    pub fn project_into_ball(&self, lambda: T) -> PoincareVec<T> {
        project_into_ball(&self.coords, lambda)
    }
}

/// Default retraction margin for [`EuclideanVec::project_into_ball`].
pub const DEFAULT_BALL_MARGIN: f64 = 1e-5;

/// Retraction of raw coordinates into the open unit ball (see
/// [`EuclideanVec::project_into_ball`]). `lambda` must be in (0, 1).
pub fn project_into_ball<T: Real>(coords: &[T], lambda: T) -> PoincareVec<T> {
    assert!(
        lambda > T::zero() && lambda < T::one(),
        "retraction margin must be in (0, 1)"
    );
    let n = norm_sq(coords).sqrt();
    if n < T::one() {
        return PoincareVec {
            coords: coords.to_vec(),
        };
    }
    let scale = (T::one() - lambda) / n;
    PoincareVec {
        coords: coords.iter().map(|&c| c * scale).collect(),
    }
}

/// A point in the open unit ball `B^n` (the Poincaré model).
#[derive(Debug, Clone, PartialEq)]
pub struct PoincareVec<T> {
    coords: Vec<T>,
}

impl<T: Real> PoincareVec<T> {
    /// Validates finiteness and `||x|| < 1`.
    pub fn new(coords: Vec<T>) -> Result<Self, GeometryError> {
        if coords.is_empty() {
            return Err(GeometryError::Empty);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::NotFinite);
        }
        let n = norm_sq(&coords).sqrt();
        if n >= T::one() {
            return Err(GeometryError::OutsideBall {
                norm: n.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { coords })
    }

    /// The ball origin in `dim` dimensions.
    pub fn origin(dim: usize) -> Self {
        Self {
            coords: vec![T::zero(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn norm(&self) -> T {
        norm_sq(&self.coords).sqrt()
    }

    /// Hyperbolic distance in the ball model.
    pub fn distance(&self, other: &Self) -> Result<T, GeometryError> {
        check_same_dim(&self.coords, &other.coords)?;
        Ok(poincare_distance_raw(&self.coords, &other.coords))
    }

    /// Map into the Lorentz model: `x -> (1 + ||x||^2, 2x) / (1 - ||x||^2)`.
    pub fn to_lorentz(&self) -> LorentzVec<T> {
        let two = T::from_f64_lossy(2.0);
        let r2 = norm_sq(&self.coords);
        let denom = T::one() - r2;
        let mut coords = Vec::with_capacity(self.coords.len() + 1);
        coords.push((T::one() + r2) / denom);
        coords.extend(self.coords.iter().map(|&c| two * c / denom));
        LorentzVec { coords }
    }

    /// Möbius addition `self ⊕ other` (curvature -1). Used by the
    /// origin-centered noise-translation mode of the mechanism.
    pub fn mobius_add(&self, other: &Self) -> Result<Self, GeometryError> {
        check_same_dim(&self.coords, &other.coords)?;
        let two = T::from_f64_lossy(2.0);
        let x2 = norm_sq(&self.coords);
        let y2 = norm_sq(&other.coords);
        let xy = dot(&self.coords, &other.coords);
        let a = T::one() + two * xy + y2;
        let b = T::one() - x2;
        let denom = T::one() + two * xy + x2 * y2;
        let coords: Vec<T> = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&x, &y)| (a * x + b * y) / denom)
            .collect();
        // Guard against a round-off escape from the ball.
        Ok(project_into_ball(
            &coords,
            T::from_f64_lossy(DEFAULT_BALL_MARGIN),
        ))
    }
}

/// Distance in the ball model on raw coordinate slices.
///
/// Callers must guarantee both slices are inside the unit ball and of equal
/// length; the typed wrapper is [`PoincareVec::distance`].
pub fn poincare_distance_raw<T: Real>(u: &[T], v: &[T]) -> T {
    let two = T::from_f64_lossy(2.0);
    let mut diff_sq = T::zero();
    for (&a, &b) in u.iter().zip(v) {
        let d = a - b;
        diff_sq = diff_sq + d * d;
    }
    let denom = (T::one() - norm_sq(u)) * (T::one() - norm_sq(v));
    stable_arcosh(T::one() + two * diff_sq / denom)
}

/// A point on the upper hyperboloid sheet; `coords[0]` is the time coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct LorentzVec<T> {
    coords: Vec<T>,
}

/// Tolerance on `<x,x>_L + 1` accepted by [`LorentzVec::new`].
pub const HYPERBOLOID_TOL: f64 = 1e-9;

impl<T: Real> LorentzVec<T> {
    /// Validates `x_0 > 0` and `<x,x>_L = -1` within [`HYPERBOLOID_TOL`].
    pub fn new(coords: Vec<T>) -> Result<Self, GeometryError> {
        if coords.len() < 2 {
            return Err(GeometryError::Empty);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::NotFinite);
        }
        if coords[0] <= T::zero() {
            return Err(GeometryError::NonPositiveTime {
                x0: coords[0].to_f64().unwrap_or(f64::NAN),
            });
        }
        let v = Self { coords };
        let inner = v.inner_unchecked(&v);
        if (inner + T::one()).abs() > T::from_f64_lossy(HYPERBOLOID_TOL) {
            return Err(GeometryError::OffHyperboloid {
                inner: inner.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(v)
    }

    /// The hyperboloid "north pole" `(1, 0, ..., 0)` over an `ambient_dim`-dim base.
    pub fn origin(ambient_dim: usize) -> Self {
        let mut coords = vec![T::zero(); ambient_dim + 1];
        coords[0] = T::one();
        Self { coords }
    }

    /// Ambient (spatial) dimension n; the vector itself has n + 1 entries.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn time(&self) -> T {
        self.coords[0]
    }

    pub fn spatial(&self) -> &[T] {
        &self.coords[1..]
    }

    fn inner_unchecked(&self, other: &Self) -> T {
        -self.coords[0] * other.coords[0] + dot(&self.coords[1..], &other.coords[1..])
    }

    /// Minkowski bilinear form `<u,v>_L = -u_0 v_0 + sum_i u_i v_i`.
    pub fn inner(&self, other: &Self) -> Result<T, GeometryError> {
        check_same_dim(&self.coords, &other.coords)?;
        Ok(self.inner_unchecked(other))
    }

    /// Hyperbolic distance `arcosh(-<u,v>_L)`. Arguments below 1 (numerical
    /// violations of the inner-product bound) are clamped and counted.
    pub fn distance(&self, other: &Self) -> Result<T, GeometryError> {
        check_same_dim(&self.coords, &other.coords)?;
        Ok(stable_arcosh(-self.inner_unchecked(other)))
    }

    /// Project onto the ball model: `x -> x' / (1 + x_0)`.
    ///
    /// `x_0 >= 1` on the hyperboloid, so the denominator is at least 2 and the
    /// image lands strictly inside the unit ball.
    pub fn to_poincare(&self) -> PoincareVec<T> {
        let denom = T::one() + self.coords[0];
        PoincareVec {
            coords: self.coords[1..].iter().map(|&c| c / denom).collect(),
        }
    }
}

/// Convenience free function mirroring [`LorentzVec::inner`].
pub fn lorentz_inner<T: Real>(u: &LorentzVec<T>, v: &LorentzVec<T>) -> Result<T, GeometryError> {
    u.inner(v)
}
