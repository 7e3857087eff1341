//! The frame angle profile and the orthonormal frame it generates.
//!
//! Within one period the angle sits on five plateaus (`0`, `π/2`, `π` at the
//! single point `x = 0.5`, `3π/2`, `2π`) joined by strictly increasing
//! monotone C¹ ramps on `[0.1, 0.2]`, `[0.4, 0.6]` and `[0.8, 0.9]`, and
//! advances by `2π` per unit of `x`. The frame is invariant under vertical
//! translations and under the horizontal translation by one unit.

use serde::{Deserialize, Serialize};

use crate::plane::Vec2;
use crate::scalar::{cst, Real};

/// One ramp of the angle profile inside the unit period.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
struct Ramp<T> {
    x_lo: T,
    x_hi: T,
    theta_lo: T,
    theta_hi: T,
}

/// Piecewise plateau/ramp angle with unit periodicity up to `2π`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaProfile<T> {
    ramps: [Ramp<T>; 3],
    top: T,
}

impl<T: Real> Default for ThetaProfile<T> {
    fn default() -> Self {
        let pi = T::from_f64(std::f64::consts::PI).expect("pi");
        let half = cst::<T>(0.5);
        ThetaProfile {
            ramps: [
                Ramp {
                    x_lo: cst(0.1),
                    x_hi: cst(0.2),
                    theta_lo: T::zero(),
                    theta_hi: pi * half,
                },
                Ramp {
                    x_lo: cst(0.4),
                    x_hi: cst(0.6),
                    theta_lo: pi * half,
                    theta_hi: pi * cst(1.5),
                },
                Ramp {
                    x_lo: cst(0.8),
                    x_hi: cst(0.9),
                    theta_lo: pi * cst(1.5),
                    theta_hi: pi * cst(2.0),
                },
            ],
            top: pi * cst(2.0),
        }
    }
}

/// C¹ smoothstep: zero slope at both ends, strictly positive inside.
fn smoothstep<T: Real>(s: T) -> T {
    s * s * (cst::<T>(3.0) - cst::<T>(2.0) * s)
}

impl<T: Real> ThetaProfile<T> {
    /// Angle at `x`, using `θ(x + 1) = θ(x) + 2π`.
    pub fn eval(&self, x: T) -> T {
        let k = x.floor();
        let u = x - k;
        self.eval_period(u) + self.top * k
    }

    fn eval_period(&self, u: T) -> T {
        for ramp in &self.ramps {
            if u < ramp.x_lo {
                return ramp.theta_lo;
            }
            if u <= ramp.x_hi {
                let s = (u - ramp.x_lo) / (ramp.x_hi - ramp.x_lo);
                return ramp.theta_lo + (ramp.theta_hi - ramp.theta_lo) * smoothstep(s);
            }
        }
        self.top
    }

    /// The orthonormal frame at abscissa `x`; independent of `y`.
    pub fn frame_at(&self, x: T) -> FramePair<T> {
        let theta = self.eval(x);
        let stable = Vec2::new(theta.cos(), theta.sin());
        FramePair {
            stable,
            unstable: stable.perp(),
        }
    }
}

/// The rotating orthonormal frame `(e_s, e_u)`; `e_u` is `e_s` turned by a
/// quarter turn, so the pair is orthonormal to machine precision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FramePair<T> {
    pub stable: Vec2<T>,
    pub unstable: Vec2<T>,
}
