//! Explicit Anosov structures on planar invariant discs, and the numerics
//! that verify their defining properties.
//!
//! The library builds five structures for two diffeomorphism families — a
//! hyperbolic linear automorphism restricted to invariant open discs (a band
//! avoiding the fixed point, a hyperbola-bounded disc containing it, and
//! whiskered variants of the band), and a horizontal translation made
//! hyperbolic by a rotating-frame metric. On top of the structures sit
//! verification probes: metric completeness along boundary-approaching
//! fibers, uniform expansion/contraction rates, leaf accessibility searches,
//! Brouwer-line tests, prolongational limit sets, and the quasi-parallelism
//! obstruction for Reeb configurations.
//!
//! The geometric kernel ([`plane`], [`domains`], [`metrics`]) is generic over
//! the scalar type through the [`Real`] trait; concrete `f64`/`f32` aliases
//! live at the crate root. The probe and rendering layers work at `f64`,
//! where all documented tolerances are pinned.

pub mod analysis;
pub mod domains;
mod error;
pub mod foliations;
pub mod metrics;
pub mod plane;
pub mod render;
pub mod sampling;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type PointF64 = plane::Point<f64>;
pub type Vec2F64 = plane::Vec2<f64>;
pub type TangentF64 = plane::TangentVector<f64>;
pub type MapF64 = plane::PlaneMap<f64>;
pub type CurveF64 = plane::Curve<f64>;
pub type RectF64 = plane::Rect<f64>;
pub type DomainF64 = domains::Domain<f64>;
pub type WhiskerSpecF64 = domains::WhiskerSpec<f64>;
pub type MetricF64 = metrics::MetricField<f64>;
pub type ThetaProfileF64 = metrics::ThetaProfile<f64>;
pub type LengthReportF64 = metrics::LengthReport<f64>;

pub type PointF32 = plane::Point<f32>;
pub type Vec2F32 = plane::Vec2<f32>;
pub type TangentF32 = plane::TangentVector<f32>;
pub type MapF32 = plane::PlaneMap<f32>;
pub type CurveF32 = plane::Curve<f32>;
pub type RectF32 = plane::Rect<f32>;
pub type DomainF32 = domains::Domain<f32>;
pub type MetricF32 = metrics::MetricField<f32>;
