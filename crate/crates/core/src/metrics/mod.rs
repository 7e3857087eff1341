//! The three Riemannian metrics and numeric path length.
//!
//! * Euclidean — the reference metric.
//! * Conformal — `⟨u, v⟩ = φ(τ(p))²·(u·v)` with a profile `φ` that blows up
//!   at the domain boundary, making the invariant-disc metrics complete.
//! * Frame — `⟨u, v⟩ = λ^{2x}(u·e_s)(v·e_s) + λ^{−2x}(u·e_u)(v·e_u)` over the
//!   rotating frame, making the unit translation hyperbolic.
//!
//! Path lengths are measured by a composite midpoint rule with dyadic
//! refinement and a relative-change stopping test; there is no per-interval
//! adaptivity. Boundary-approaching studies control their own endpoints and
//! never evaluate on the boundary.

mod theta;

pub use theta::{FramePair, ThetaProfile};

use serde::{Deserialize, Serialize};

use crate::domains::Domain;
use crate::plane::{tau, Curve, Point, TangentVector, Vec2};
use crate::scalar::{cst, Real};
use crate::{Error, Result};

/// Hard cap on dyadic refinement of the midpoint rule.
pub const MAX_REFINEMENT_LEVELS: u32 = 20;

/// Conformal scale `1/((t−1)(2−t))` for the band domain, diverging at both
/// ends of `(1, 2)` with minimum `φ(3/2) = 4`.
pub fn phi_band<T: Real>(t: T) -> Result<T> {
    let one = T::one();
    let two = cst::<T>(2.0);
    if !(t > one && t < two) {
        return Err(Error::OutsideProfile {
            value: t.to_f64().unwrap_or(f64::NAN),
            profile: "phi_band (domain (1, 2))",
        });
    }
    Ok(((t - one) * (two - t)).recip())
}

/// Conformal scale `2/(1−t²)` for the hyperbola domain, diverging at `±1`
/// with minimum `φ(0) = 2`.
pub fn phi_hyp<T: Real>(t: T) -> Result<T> {
    let one = T::one();
    if !(t.abs() < one) {
        return Err(Error::OutsideProfile {
            value: t.to_f64().unwrap_or(f64::NAN),
            profile: "phi_hyp (domain (−1, 1))",
        });
    }
    Ok(cst::<T>(2.0) / (one - t * t))
}

/// Which conformal profile scales the metric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConformalProfile {
    Band,
    Hyperbola,
}

impl ConformalProfile {
    pub fn eval<T: Real>(self, t: T) -> Result<T> {
        match self {
            ConformalProfile::Band => phi_band(t),
            ConformalProfile::Hyperbola => phi_hyp(t),
        }
    }

    /// Open interval on which the profile is defined.
    pub fn domain_interval<T: Real>(self) -> (T, T) {
        match self {
            ConformalProfile::Band => (T::one(), cst(2.0)),
            ConformalProfile::Hyperbola => (-T::one(), T::one()),
        }
    }

    /// Argument of the profile minimum (the profiles are unimodal).
    pub fn minimum_point<T: Real>(self) -> T {
        match self {
            ConformalProfile::Band => cst(1.5),
            ConformalProfile::Hyperbola => T::zero(),
        }
    }
}

/// A Riemannian metric in one of the three forms used here.
#[derive(Clone, Debug, PartialEq)]
pub enum MetricField<T> {
    Euclidean,
    Conformal {
        profile: ConformalProfile,
        domain: Domain<T>,
    },
    Frame {
        lambda: T,
        theta: ThetaProfile<T>,
    },
}

impl<T: Real> MetricField<T> {
    /// The band metric `φ_band(τ)²·(·)` on the band domain.
    pub fn conformal_band() -> Self {
        MetricField::Conformal {
            profile: ConformalProfile::Band,
            domain: Domain::Band,
        }
    }

    /// The hyperbola-disc metric `φ_hyp(τ)²·(·)`.
    pub fn conformal_hyperbola() -> Self {
        MetricField::Conformal {
            profile: ConformalProfile::Hyperbola,
            domain: Domain::Hyperbola,
        }
    }

    /// The rotating-frame metric with contraction factor `lambda ∈ (0, 1)`.
    pub fn frame(lambda: T) -> Result<Self> {
        if !(lambda > T::zero() && lambda < T::one()) {
            return Err(Error::MetricParameter(format!(
                "frame metric needs lambda in (0, 1), got {lambda}"
            )));
        }
        Ok(MetricField::Frame {
            lambda,
            theta: ThetaProfile::default(),
        })
    }

    /// Conformal scale factor at a point (1 for the other forms).
    pub fn scale_at(&self, p: Point<T>) -> Result<T> {
        match self {
            MetricField::Conformal { profile, domain } => {
                if !domain.contains(p) {
                    return Err(Error::outside(p.x, p.y, domain.name()));
                }
                profile.eval(tau(p))
            }
            _ => Ok(T::one()),
        }
    }

    /// Inner product of two vectors based at `p`.
    pub fn inner_product(&self, p: Point<T>, u: Vec2<T>, v: Vec2<T>) -> Result<T> {
        match self {
            MetricField::Euclidean => Ok(u.dot(v)),
            MetricField::Conformal { .. } => {
                let g = self.scale_at(p)?;
                Ok(g * g * u.dot(v))
            }
            MetricField::Frame { lambda, theta } => {
                let frame = theta.frame_at(p.x);
                let two_x = cst::<T>(2.0) * p.x;
                let contract = lambda.powf(two_x);
                let expand = lambda.powf(-two_x);
                Ok(contract * u.dot(frame.stable) * v.dot(frame.stable)
                    + expand * u.dot(frame.unstable) * v.dot(frame.unstable))
            }
        }
    }

    /// Length of a based tangent vector.
    pub fn norm(&self, v: &TangentVector<T>) -> Result<T> {
        let c = v.components();
        Ok(self.inner_product(v.base, c, c)?.sqrt())
    }

    /// Polyline length under the metric, by composite midpoint quadrature
    /// with dyadic refinement. Stops when two successive levels agree to
    /// `tol` relatively; flags truncation at [`MAX_REFINEMENT_LEVELS`].
    ///
    /// Every sample of the curve must lie strictly inside the metric's
    /// domain; quadrature nodes are segment-interior midpoints.
    pub fn path_length(&self, curve: &Curve<T>, tol: T) -> Result<LengthReport<T>> {
        if !(tol > T::zero()) {
            return Err(Error::MetricParameter(format!(
                "path_length tolerance must be positive, got {tol}"
            )));
        }
        if let MetricField::Conformal { domain, .. } = self {
            for &p in curve.points() {
                if !domain.contains(p) {
                    return Err(Error::outside(p.x, p.y, domain.name()));
                }
            }
        }
        let mut previous = self.level_sum(curve, 0)?;
        let mut last_delta = T::infinity();
        for level in 1..=MAX_REFINEMENT_LEVELS {
            let current = self.level_sum(curve, level)?;
            let scale = current.abs().max(T::min_positive_value());
            last_delta = (current - previous).abs() / scale;
            if last_delta < tol {
                return Ok(LengthReport {
                    value: current,
                    refinement_levels: level + 1,
                    last_delta,
                    truncated: false,
                });
            }
            previous = current;
        }
        Ok(LengthReport {
            value: previous,
            refinement_levels: MAX_REFINEMENT_LEVELS + 1,
            last_delta,
            truncated: true,
        })
    }

    fn level_sum(&self, curve: &Curve<T>, level: u32) -> Result<T> {
        let pieces = 1usize << level;
        let pieces_t = cst::<T>(pieces as f64);
        let half = cst::<T>(0.5);
        let mut total = T::zero();
        for (a, b) in curve.segments() {
            let d = a.vector_to(b);
            for j in 0..pieces {
                let t = (cst::<T>(j as f64) + half) / pieces_t;
                let mid = Point::new(a.x + d.x * t, a.y + d.y * t);
                let speed = self.inner_product(mid, d, d)?.sqrt();
                total = total + speed / pieces_t;
            }
        }
        Ok(total)
    }
}

/// Length measurement with refinement diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LengthReport<T> {
    pub value: T,
    pub refinement_levels: u32,
    /// Relative change between the last two refinement levels.
    pub last_delta: T,
    pub truncated: bool,
}

/// Left Riemann sum `C·Σ_{i=1}^{n} φ(α + (i−1)δ)·δ` with `δ = (β−α)/n`.
///
/// On a stretch where the profile is nondecreasing this is a certified
/// lower bound for `C·∫_α^β φ`.
pub fn lower_sum_bound<T: Real>(
    profile: ConformalProfile,
    alpha: T,
    beta: T,
    n: usize,
    c: T,
) -> Result<T> {
    if n == 0 {
        return Err(Error::MetricParameter("lower sum needs n ≥ 1".into()));
    }
    if !(c > T::zero()) {
        return Err(Error::MetricParameter(format!(
            "lower sum scale must be positive, got {c}"
        )));
    }
    let (lo, hi) = profile.domain_interval::<T>();
    if !(alpha >= lo && beta <= hi && alpha <= beta) {
        return Err(Error::OutsideProfile {
            value: alpha.to_f64().unwrap_or(f64::NAN),
            profile: "lower_sum_bound interval",
        });
    }
    let delta = (beta - alpha) / cst::<T>(n as f64);
    let mut sum = T::zero();
    for i in 0..n {
        let t = alpha + delta * cst::<T>(i as f64);
        sum = sum + profile.eval(t)? * delta;
    }
    Ok(sum * c)
}
