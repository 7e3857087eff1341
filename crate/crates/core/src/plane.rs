//! Planar primitives: points, tangent vectors, the two map families, and
//! polyline curves.
//!
//! The two maps are the hyperbolic linear automorphism `(x, y) ↦ (k·x, y/k)`
//! (the classical example has `k = 2`) and the horizontal translation
//! `(x, y) ↦ (x + d, y)`. The product coordinate [`tau`]`(x, y) = x·y` is
//! invariant under the hyperbolic map and indexes its orbit hyperbolas.

use serde::{Deserialize, Serialize};

use crate::scalar::{cst, Real};
use crate::{Error, Result};

/// Iteration cap used by [`PlaneMap::iterate`]. Orbits of the doubling map
/// leave every window of interest long before 64 steps.
pub const DEFAULT_ITERATION_CAP: u32 = 64;

/// A point of the plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: Point<T>) -> T {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }

    pub fn vector_to(&self, other: Point<T>) -> Vec2<T> {
        Vec2::new(other.x - self.x, other.y - self.y)
    }

    pub fn offset(&self, v: Vec2<T>) -> Point<T> {
        Point::new(self.x + v.x, self.y + v.y)
    }

    pub fn midpoint(&self, other: Point<T>) -> Point<T> {
        let half = cst::<T>(0.5);
        Point::new((self.x + other.x) * half, (self.y + other.y) * half)
    }
}

/// The invariant product coordinate `τ(x, y) = x·y`.
///
/// `τ` is constant along orbits of the hyperbolic map: `τ(k·x, y/k) = x·y`.
/// In binary floating point the composition is bit-exact because scaling by
/// the expansion factor 2 is exact.
#[inline]
pub fn tau<T: Real>(p: Point<T>) -> T {
    p.x * p.y
}

/// A free planar vector (no base point).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vec2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Vec2<T> {
    pub fn new(x: T, y: T) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(&self, other: Vec2<T>) -> T {
        self.x * other.x + self.y * other.y
    }

    /// 2D cross product `self.x·other.y − self.y·other.x`.
    pub fn cross(&self, other: Vec2<T>) -> T {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(&self) -> T {
        self.dot(*self).sqrt()
    }

    pub fn scaled(&self, s: T) -> Vec2<T> {
        Vec2::new(self.x * s, self.y * s)
    }

    pub fn normalized(&self) -> Option<Vec2<T>> {
        let n = self.norm();
        if n > T::zero() && n.is_finite() {
            Some(self.scaled(n.recip()))
        } else {
            None
        }
    }

    /// Counterclockwise rotation by a quarter turn.
    pub fn perp(&self) -> Vec2<T> {
        Vec2::new(-self.y, self.x)
    }
}

/// A tangent vector based at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentVector<T> {
    pub base: Point<T>,
    pub dx: T,
    pub dy: T,
}

impl<T: Real> TangentVector<T> {
    pub fn new(base: Point<T>, dx: T, dy: T) -> Self {
        TangentVector { base, dx, dy }
    }

    pub fn components(&self) -> Vec2<T> {
        Vec2::new(self.dx, self.dy)
    }

    pub fn euclidean_norm(&self) -> T {
        self.components().norm()
    }
}

/// The two diffeomorphism families used throughout.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PlaneMap<T> {
    /// `(x, y) ↦ (k·x, y/k)` with expansion factor `k > 1`.
    LinearHyperbolic { expansion: T },
    /// `(x, y) ↦ (x + d, y)` with displacement `d ≠ 0`.
    Translation { displacement: T },
}

impl<T: Real> PlaneMap<T> {
    pub fn linear_hyperbolic(expansion: T) -> Result<Self> {
        if !(expansion > T::one()) || !expansion.is_finite() {
            return Err(Error::MapParameter(format!(
                "expansion factor must be a finite real > 1, got {expansion}"
            )));
        }
        Ok(PlaneMap::LinearHyperbolic { expansion })
    }

    /// The doubling map `(x, y) ↦ (2x, y/2)`.
    pub fn standard_hyperbolic() -> Self {
        PlaneMap::LinearHyperbolic {
            expansion: cst(2.0),
        }
    }

    pub fn translation(displacement: T) -> Result<Self> {
        if displacement == T::zero() || !displacement.is_finite() {
            return Err(Error::MapParameter(format!(
                "translation displacement must be finite and nonzero, got {displacement}"
            )));
        }
        Ok(PlaneMap::Translation { displacement })
    }

    pub fn unit_translation() -> Self {
        PlaneMap::Translation {
            displacement: T::one(),
        }
    }

    pub fn apply(&self, p: Point<T>) -> Point<T> {
        match *self {
            PlaneMap::LinearHyperbolic { expansion } => {
                Point::new(p.x * expansion, p.y / expansion)
            }
            PlaneMap::Translation { displacement } => Point::new(p.x + displacement, p.y),
        }
    }

    pub fn apply_inverse(&self, p: Point<T>) -> Point<T> {
        match *self {
            PlaneMap::LinearHyperbolic { expansion } => {
                Point::new(p.x / expansion, p.y * expansion)
            }
            PlaneMap::Translation { displacement } => Point::new(p.x - displacement, p.y),
        }
    }

    /// Pushforward of a tangent vector. Both families are affine, so the
    /// differential acts linearly on components and moves the base point by
    /// the map itself.
    pub fn differential(&self, v: TangentVector<T>) -> TangentVector<T> {
        match *self {
            PlaneMap::LinearHyperbolic { expansion } => TangentVector {
                base: self.apply(v.base),
                dx: v.dx * expansion,
                dy: v.dy / expansion,
            },
            PlaneMap::Translation { .. } => TangentVector {
                base: self.apply(v.base),
                dx: v.dx,
                dy: v.dy,
            },
        }
    }

    /// Pushforward by the n-th iterate; negative `n` uses the exact inverse.
    pub fn differential_n(&self, v: TangentVector<T>, n: i32) -> Result<TangentVector<T>> {
        check_cap(n, DEFAULT_ITERATION_CAP)?;
        let mut out = v;
        for _ in 0..n.unsigned_abs() {
            out = if n >= 0 {
                self.differential(out)
            } else {
                self.differential_inverse(out)
            };
        }
        Ok(out)
    }

    fn differential_inverse(&self, v: TangentVector<T>) -> TangentVector<T> {
        match *self {
            PlaneMap::LinearHyperbolic { expansion } => TangentVector {
                base: self.apply_inverse(v.base),
                dx: v.dx / expansion,
                dy: v.dy * expansion,
            },
            PlaneMap::Translation { .. } => TangentVector {
                base: self.apply_inverse(v.base),
                dx: v.dx,
                dy: v.dy,
            },
        }
    }

    /// n-fold composition. Negative `n` composes the exact inverse
    /// (`(x/k, k·y)` resp. `(x − d, y)`).
    ///
    /// Fails with [`Error::IterationCap`] when `|n|` exceeds
    /// [`DEFAULT_ITERATION_CAP`].
    pub fn iterate(&self, p: Point<T>, n: i32) -> Result<Point<T>> {
        self.iterate_capped(p, n, DEFAULT_ITERATION_CAP)
    }

    pub fn iterate_capped(&self, p: Point<T>, n: i32, cap: u32) -> Result<Point<T>> {
        check_cap(n, cap)?;
        let mut q = p;
        for _ in 0..n.unsigned_abs() {
            q = if n >= 0 {
                self.apply(q)
            } else {
                self.apply_inverse(q)
            };
        }
        Ok(q)
    }

    pub fn has_fixed_point(&self) -> bool {
        matches!(self, PlaneMap::LinearHyperbolic { .. })
    }
}

fn check_cap(n: i32, cap: u32) -> Result<()> {
    if i64::from(n.unsigned_abs()) > i64::from(cap) {
        return Err(Error::IterationCap {
            n: i64::from(n),
            cap,
        });
    }
    Ok(())
}

/// An open polyline with at least two samples and distinct consecutive
/// points. Smooth curves are always handled as adaptive polylines; a
/// refinement step inserts segment midpoints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Curve<T> {
    samples: Vec<Point<T>>,
}

impl<T: Real> Curve<T> {
    pub fn from_points(samples: Vec<Point<T>>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::DegenerateCurve);
        }
        for w in samples.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DegenerateCurve);
            }
        }
        if !samples.iter().all(Point::is_finite) {
            return Err(Error::DegenerateCurve);
        }
        Ok(Curve { samples })
    }

    /// Two-point segment.
    pub fn segment(a: Point<T>, b: Point<T>) -> Result<Self> {
        Curve::from_points(vec![a, b])
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.samples
    }

    pub fn first(&self) -> Point<T> {
        self.samples[0]
    }

    pub fn last(&self) -> Point<T> {
        *self.samples.last().expect("curve has samples")
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point<T>, Point<T>)> + '_ {
        self.samples.windows(2).map(|w| (w[0], w[1]))
    }

    /// Midpoint refinement: one new sample per segment.
    pub fn refined(&self) -> Curve<T> {
        let mut out = Vec::with_capacity(self.samples.len() * 2 - 1);
        for (a, b) in self.segments() {
            out.push(a);
            out.push(a.midpoint(b));
        }
        out.push(self.last());
        Curve { samples: out }
    }

    pub fn euclidean_length(&self) -> T {
        self.segments()
            .fold(T::zero(), |acc, (a, b)| acc + a.distance(b))
    }

    pub fn reversed(&self) -> Curve<T> {
        let mut samples = self.samples.clone();
        samples.reverse();
        Curve { samples }
    }

    /// Image curve under a pointwise map. The result must still be a valid
    /// polyline (both families here are injective, so it is).
    pub fn mapped(&self, f: impl Fn(Point<T>) -> Point<T>) -> Result<Curve<T>> {
        Curve::from_points(self.samples.iter().map(|&p| f(p)).collect())
    }
}

/// Axis-aligned window used for clipping, sampling and grid searches.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect<T> {
    pub x0: T,
    pub x1: T,
    pub y0: T,
    pub y1: T,
}

impl<T: Real> Rect<T> {
    /// Normalizing constructor: coordinates may come in any order.
    pub fn new(x0: T, x1: T, y0: T, y1: T) -> Self {
        Rect {
            x0: x0.min(x1),
            x1: x0.max(x1),
            y0: y0.min(y1),
            y1: y0.max(y1),
        }
    }

    pub fn contains(&self, p: Point<T>) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    pub fn width(&self) -> T {
        self.x1 - self.x0
    }

    pub fn height(&self) -> T {
        self.y1 - self.y0
    }

    pub fn diagonal(&self) -> T {
        (self.width().powi(2) + self.height().powi(2)).sqrt()
    }

    pub fn center(&self) -> Point<T> {
        Point::new(
            (self.x0 + self.x1) * cst(0.5),
            (self.y0 + self.y1) * cst(0.5),
        )
    }

    pub fn is_empty(&self) -> bool {
        !(self.x0 < self.x1 && self.y0 < self.y1)
    }
}

/// Liang–Barsky clip of the segment `a`–`b` to a window. Returns the clipped
/// endpoints, or `None` when the segment misses the window.
pub fn clip_segment<T: Real>(
    window: &Rect<T>,
    a: Point<T>,
    b: Point<T>,
) -> Option<(Point<T>, Point<T>)> {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let mut t0 = T::zero();
    let mut t1 = T::one();
    let checks = [
        (-dx, a.x - window.x0),
        (dx, window.x1 - a.x),
        (-dy, a.y - window.y0),
        (dy, window.y1 - a.y),
    ];
    for (p, q) in checks {
        if p == T::zero() {
            if q < T::zero() {
                return None;
            }
        } else {
            let r = q / p;
            if p < T::zero() {
                if r > t1 {
                    return None;
                }
                t0 = t0.max(r);
            } else {
                if r < t0 {
                    return None;
                }
                t1 = t1.min(r);
            }
        }
    }
    if t0 > t1 {
        return None;
    }
    let at = |t: T| Point::new(a.x + dx * t, a.y + dy * t);
    Some((at(t0), at(t1)))
}

/// Clip a polyline to a window, splitting it into the sub-polylines that
/// stay inside.
pub fn clip_polyline<T: Real>(window: &Rect<T>, curve: &Curve<T>) -> Vec<Curve<T>> {
    let mut pieces: Vec<Vec<Point<T>>> = Vec::new();
    let mut current: Vec<Point<T>> = Vec::new();
    for (a, b) in curve.segments() {
        match clip_segment(window, a, b) {
            Some((ca, cb)) => {
                if ca == cb {
                    continue;
                }
                match current.last() {
                    Some(&last) if last == ca => current.push(cb),
                    Some(_) => {
                        pieces.push(std::mem::take(&mut current));
                        current.push(ca);
                        current.push(cb);
                    }
                    None => {
                        current.push(ca);
                        current.push(cb);
                    }
                }
            }
            None => {
                if !current.is_empty() {
                    pieces.push(std::mem::take(&mut current));
                }
            }
        }
    }
    if !current.is_empty() {
        pieces.push(current);
    }
    pieces
        .into_iter()
        .filter_map(|pts| Curve::from_points(pts).ok())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn t_map() -> PlaneMap<f64> {
        PlaneMap::standard_hyperbolic()
    }

    #[test]
    fn apply_doubling_map() {
        let p = t_map().apply(Point::new(1.0, 1.0));
        assert_eq!(p, Point::new(2.0, 0.5));
        assert_eq!(t_map().apply(Point::new(0.0, 0.0)), Point::new(0.0, 0.0));
    }

    #[test]
    fn apply_translation() {
        let m = PlaneMap::translation(1.0).unwrap();
        assert_eq!(m.apply(Point::new(0.3, 7.0)), Point::new(1.3, 7.0));
    }

    #[test]
    fn map_parameter_validation() {
        assert!(PlaneMap::linear_hyperbolic(1.0).is_err());
        assert!(PlaneMap::linear_hyperbolic(0.5).is_err());
        assert!(PlaneMap::translation(0.0).is_err());
        assert!(PlaneMap::linear_hyperbolic(2.0).is_ok());
    }

    #[test]
    fn differential_of_linear_map() {
        let v = TangentVector::new(Point::new(1.0, 1.0), 1.0, 0.0);
        let dv = t_map().differential(v);
        assert_eq!(dv.base, Point::new(2.0, 0.5));
        assert_eq!((dv.dx, dv.dy), (2.0, 0.0));

        let w = TangentVector::new(Point::new(1.0, 1.0), 0.0, 1.0);
        let dw = t_map().differential(w);
        assert_eq!((dw.dx, dw.dy), (0.0, 0.5));
    }

    #[test]
    fn differential_of_translation_is_identity_on_components() {
        let m = PlaneMap::translation(2.5).unwrap();
        let v = TangentVector::new(Point::new(-1.0, 4.0), 3.0, 4.0);
        let dv = m.differential(v);
        assert_eq!((dv.dx, dv.dy), (3.0, 4.0));
        assert_eq!(dv.base, Point::new(1.5, 4.0));
    }

    #[test]
    fn iterate_forward_and_back() {
        let p = t_map().iterate(Point::new(1.0, 1.0), 2).unwrap();
        assert_eq!(p, Point::new(4.0, 0.25));
        let q = t_map().iterate(Point::new(4.0, 0.25), -2).unwrap();
        assert_eq!(q, Point::new(1.0, 1.0));

        let m = PlaneMap::translation(1.0).unwrap();
        assert_eq!(
            m.iterate(Point::new(0.0, 0.0), 5).unwrap(),
            Point::new(5.0, 0.0)
        );
    }

    #[test]
    fn iterate_cap_is_enforced() {
        let err = t_map().iterate_capped(Point::new(1.0, 1.0), 9, 8);
        assert!(matches!(err, Err(Error::IterationCap { n: 9, cap: 8 })));
        assert!(t_map().iterate(Point::new(1.0, 1.0), 64).is_ok());
        assert!(t_map().iterate(Point::new(1.0, 1.0), -65).is_err());
    }

    #[test]
    fn tau_values() {
        assert_eq!(tau(Point::new(1.0, 1.0)), 1.0);
        assert_eq!(tau(Point::new(2.0, 0.75)), 1.5);
        let p = Point::new(1.37, 0.9);
        assert_eq!(tau(t_map().apply(p)), tau(p));
    }

    #[test]
    fn tau_is_exactly_invariant_on_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let p = Point::new(rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0));
            assert_eq!(tau(t_map().apply(p)), tau(p));
            assert_eq!(tau(t_map().apply_inverse(p)), tau(p));
        }
    }

    #[test]
    fn tau_invariance_holds_in_f32_too() {
        let m: PlaneMap<f32> = PlaneMap::standard_hyperbolic();
        let p = Point::new(1.37f32, 0.9f32);
        assert_eq!(tau(m.apply(p)), tau(p));
    }

    proptest! {
        #[test]
        fn iterate_round_trip(x in -10.0f64..10.0, y in -10.0f64..10.0, n in -32i32..=32) {
            let p = Point::new(x, y);
            let fwd = t_map().iterate(p, n).unwrap();
            let back = t_map().iterate(fwd, -n).unwrap();
            prop_assert!((back.x - x).abs() <= 1e-12 * x.abs().max(1.0));
            prop_assert!((back.y - y).abs() <= 1e-12 * y.abs().max(1.0));
        }

        #[test]
        fn differential_is_linear(
            dx1 in -5.0f64..5.0, dy1 in -5.0f64..5.0,
            dx2 in -5.0f64..5.0, dy2 in -5.0f64..5.0,
            a in -3.0f64..3.0, b in -3.0f64..3.0,
        ) {
            let base = Point::new(1.0, 1.0);
            let u = TangentVector::new(base, dx1, dy1);
            let v = TangentVector::new(base, dx2, dy2);
            let comb = TangentVector::new(base, a * dx1 + b * dx2, a * dy1 + b * dy2);
            let d_comb = t_map().differential(comb);
            let du = t_map().differential(u);
            let dv = t_map().differential(v);
            // doubling and halving are exact, so linearity holds bit-for-bit
            prop_assert_eq!(d_comb.dx, a * du.dx + b * dv.dx);
            prop_assert_eq!(d_comb.dy, a * du.dy + b * dv.dy);
        }
    }

    #[test]
    fn curve_validation() {
        let a = Point::new(0.0, 0.0);
        let b = Point::new(1.0, 1.0);
        assert!(Curve::segment(a, b).is_ok());
        assert!(Curve::from_points(vec![a]).is_err());
        assert!(Curve::from_points(vec![a, a]).is_err());
    }

    #[test]
    fn curve_refinement_preserves_endpoints_and_length() {
        let c = Curve::from_points(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
        ])
        .unwrap();
        let r = c.refined();
        assert_eq!(r.points().len(), 5);
        assert_eq!(r.first(), c.first());
        assert_eq!(r.last(), c.last());
        assert_relative_eq!(r.euclidean_length(), c.euclidean_length());
    }

    #[test]
    fn clip_segment_basics() {
        let w = Rect::new(0.0, 1.0, 0.0, 1.0);
        let (a, b) =
            clip_segment(&w, Point::new(-1.0, 0.5), Point::new(2.0, 0.5)).expect("crosses");
        assert_eq!((a.x, b.x), (0.0, 1.0));
        assert!(clip_segment(&w, Point::new(-1.0, 2.0), Point::new(2.0, 2.0)).is_none());
    }

    #[test]
    fn clip_polyline_splits_at_exits() {
        let w = Rect::new(0.0, 1.0, 0.0, 1.0);
        let c = Curve::from_points(vec![
            Point::new(0.2, 0.5),
            Point::new(1.5, 0.5),
            Point::new(1.5, 0.8),
            Point::new(0.8, 0.8),
        ])
        .unwrap();
        let pieces = clip_polyline(&w, &c);
        assert_eq!(pieces.len(), 2);
        assert_eq!(pieces[0].first(), Point::new(0.2, 0.5));
        assert_eq!(pieces[1].last(), Point::new(0.8, 0.8));
    }
}
