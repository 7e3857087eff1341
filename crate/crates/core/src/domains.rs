//! Invariant open discs for the hyperbolic map, their fundamental cells, and
//! the whiskered domains used to raise the accessibility degree.
//!
//! * [`Domain::Band`] is `{x > 0, 1 < x·y < 2}`, an invariant open disc
//!   avoiding the fixed point at the origin.
//! * [`Domain::Hyperbola`] is `{|x·y| < 1}`, an invariant open disc containing
//!   the origin.
//! * [`Domain::Whiskered`] is the orbit of a fundamental band cell thickened
//!   by a tube around a "whisker" arc attached to the cell; see
//!   [`WhiskerSpec`].
//!
//! Membership tests evaluate the defining inequalities exactly; no sampling
//! is involved. Vertical and horizontal slices (the building blocks of leaf
//! traces) are returned as exact interval lists.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::plane::{tau, Curve, PlaneMap, Point, Rect};
use crate::scalar::{cst, Real};
use crate::{Error, Result};

/// An invariant open set or a fundamental cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Domain<T> {
    FullPlane,
    /// `{x > 0, 1 < τ < 2}`, invariant under the doubling map.
    Band,
    /// `{|τ| < 1}`, invariant and containing the origin.
    Hyperbola,
    /// Orbit of the whiskered cell under the doubling map.
    Whiskered(WhiskerSpec<T>),
    /// Closed cell `{a ≤ x ≤ 2a, 1 ≤ τ ≤ 2}` whose map images tile the band.
    BandCell { a: T },
    /// Closed cell `{a ≤ x ≤ 2a, −1 ≤ τ ≤ 1}` tiling the right half of the
    /// hyperbola disc.
    HyperbolaCell { a: T },
    /// The open whiskered cell: interior of (band cell ∪ whisker tube).
    WhiskerCell(WhiskerSpec<T>),
}

/// Sorted disjoint open intervals; endpoints may be infinite.
pub type Intervals<T> = Vec<(T, T)>;

impl<T: Real> Domain<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Domain::FullPlane => "full-plane",
            Domain::Band => "band",
            Domain::Hyperbola => "hyperbola",
            Domain::Whiskered(_) => "whiskered",
            Domain::BandCell { .. } => "band-cell",
            Domain::HyperbolaCell { .. } => "hyperbola-cell",
            Domain::WhiskerCell(_) => "whisker-cell",
        }
    }

    /// Exact membership from the defining inequalities.
    pub fn contains(&self, p: Point<T>) -> bool {
        let one = T::one();
        let two = cst::<T>(2.0);
        match self {
            Domain::FullPlane => p.is_finite(),
            Domain::Band => {
                let t = tau(p);
                p.x > T::zero() && t > one && t < two
            }
            Domain::Hyperbola => tau(p).abs() < one,
            Domain::Whiskered(spec) => {
                if Domain::<T>::Band.contains(p) {
                    return true;
                }
                if p.x <= T::zero() {
                    return false;
                }
                match spec.reduce_to_tube_band(p) {
                    Some(q) => spec.tube_contains(q),
                    None => false,
                }
            }
            Domain::BandCell { a } => {
                let t = tau(p);
                p.x >= *a && p.x <= two * *a && t >= one && t <= two
            }
            Domain::HyperbolaCell { a } => {
                let t = tau(p);
                p.x >= *a && p.x <= two * *a && t >= -one && t <= one
            }
            Domain::WhiskerCell(spec) => {
                let t = tau(p);
                let in_open_cell = p.x > one && p.x < two && t > one && t < two;
                in_open_cell || spec.tube_contains(p)
            }
        }
    }

    /// The fundamental cell whose map images tile this domain (`a = 1`).
    ///
    /// Only the three invariant open domains support this; cells are their
    /// own tiles.
    pub fn fundamental_cell(&self) -> Result<Domain<T>> {
        match self {
            Domain::Band => Ok(Domain::BandCell { a: T::one() }),
            Domain::Hyperbola => Ok(Domain::HyperbolaCell { a: T::one() }),
            Domain::Whiskered(spec) => Ok(Domain::WhiskerCell(spec.clone())),
            other => Err(Error::UnsupportedDomain(other.name())),
        }
    }

    /// Orbit coordinates: returns `(q, n)` with `q` in the fundamental cell
    /// and `Tⁿ(q) = p`. The representative is taken in the half-open band
    /// `x/2ⁿ ∈ [1, 2)`, which makes `n` unique.
    ///
    /// For the hyperbola disc only the half `x > 0` is tiled by the cell;
    /// points with `x ≤ 0` are rejected.
    pub fn reduce_to_cell(&self, p: Point<T>) -> Result<(Point<T>, i32)> {
        if !self.contains(p) {
            return Err(Error::outside(p.x, p.y, self.name()));
        }
        match self {
            Domain::Band | Domain::Hyperbola | Domain::Whiskered(_) => {
                if p.x <= T::zero() {
                    return Err(Error::NotReducible {
                        x: p.x.to_f64().unwrap_or(f64::NAN),
                        y: p.y.to_f64().unwrap_or(f64::NAN),
                        reason: "the fundamental cell tiles only the half-plane x > 0",
                    });
                }
                let n = p.x.log2().floor();
                let n_i32 = n.to_i32().ok_or(Error::NotReducible {
                    x: p.x.to_f64().unwrap_or(f64::NAN),
                    y: p.y.to_f64().unwrap_or(f64::NAN),
                    reason: "orbit index overflow",
                })?;
                let scale = cst::<T>(2.0).powi(n_i32);
                let q = Point::new(p.x / scale, p.y * scale);
                Ok((q, n_i32))
            }
            other => Err(Error::UnsupportedDomain(other.name())),
        }
    }

    /// Samples `n_samples` points of the domain and checks that the map and
    /// its inverse keep each of them inside. Sampling is rejection-based over
    /// [`Domain::sampling_window`].
    pub fn invariance_check<R: Rng + ?Sized>(
        &self,
        map: &PlaneMap<T>,
        n_samples: usize,
        rng: &mut R,
    ) -> bool {
        let window = self.sampling_window();
        let mut found = 0usize;
        let mut tries = 0usize;
        let max_tries = n_samples.saturating_mul(1000).max(1000);
        while found < n_samples && tries < max_tries {
            tries += 1;
            let x = cst::<T>(rng.gen_range(0.0..1.0));
            let y = cst::<T>(rng.gen_range(0.0..1.0));
            let p = Point::new(
                window.x0 + window.width() * x,
                window.y0 + window.height() * y,
            );
            if !self.contains(p) {
                continue;
            }
            found += 1;
            if !self.contains(map.apply(p)) || !self.contains(map.apply_inverse(p)) {
                return false;
            }
        }
        found > 0
    }

    /// A window that comfortably intersects the domain; used for rejection
    /// sampling and as a rendering default.
    pub fn sampling_window(&self) -> Rect<T> {
        let r = |x0: f64, x1: f64, y0: f64, y1: f64| {
            Rect::new(cst::<T>(x0), cst::<T>(x1), cst::<T>(y0), cst::<T>(y1))
        };
        match self {
            Domain::FullPlane => r(-4.0, 4.0, -4.0, 4.0),
            Domain::Band => r(0.25, 8.0, 0.0, 8.0),
            Domain::Hyperbola => r(-4.0, 4.0, -4.0, 4.0),
            Domain::Whiskered(_) => r(0.6, 4.0, 0.0, 4.0),
            Domain::BandCell { a } => {
                let a = a.to_f64().unwrap_or(1.0);
                r(a, 2.0 * a, 0.5 / a, 2.0 / a)
            }
            Domain::HyperbolaCell { a } => {
                let a = a.to_f64().unwrap_or(1.0);
                r(a, 2.0 * a, -1.0 / a, 1.0 / a)
            }
            Domain::WhiskerCell(_) => r(1.0, 2.0, 0.4, 3.4),
        }
    }

    /// Connected open intervals of `{x} × ℝ ∩ domain`, sorted by height.
    /// Unbounded ends are reported as infinities.
    pub fn vertical_slice(&self, x: T) -> Intervals<T> {
        let one = T::one();
        let two = cst::<T>(2.0);
        match self {
            Domain::FullPlane => vec![(T::neg_infinity(), T::infinity())],
            Domain::Band => {
                if x > T::zero() {
                    vec![(one / x, two / x)]
                } else {
                    vec![]
                }
            }
            Domain::Hyperbola => {
                if x == T::zero() {
                    vec![(T::neg_infinity(), T::infinity())]
                } else {
                    vec![(-one / x.abs(), one / x.abs())]
                }
            }
            Domain::Whiskered(spec) => {
                let mut intervals = Domain::<T>::Band.vertical_slice(x);
                if x > T::zero() {
                    let n = x.log2().floor();
                    if let Some(n) = n.to_i32() {
                        let scale = two.powi(n);
                        let xs = x / scale;
                        for (lo, hi) in spec.tube_vertical_chords(xs) {
                            intervals.push((lo / scale, hi / scale));
                        }
                    }
                }
                merge_intervals(intervals)
            }
            Domain::BandCell { a } => {
                if x >= *a && x <= two * *a {
                    vec![(one / x, two / x)]
                } else {
                    vec![]
                }
            }
            Domain::HyperbolaCell { a } => {
                if x >= *a && x <= two * *a {
                    vec![(-one / x, one / x)]
                } else {
                    vec![]
                }
            }
            Domain::WhiskerCell(spec) => {
                let mut intervals = Vec::new();
                if x > one && x < two {
                    intervals.push((one / x, two / x));
                }
                intervals.extend(spec.tube_vertical_chords(x));
                merge_intervals(intervals)
            }
        }
    }

    /// Connected open intervals of `ℝ × {y} ∩ domain`, sorted by abscissa.
    pub fn horizontal_slice(&self, y: T) -> Intervals<T> {
        let one = T::one();
        let two = cst::<T>(2.0);
        match self {
            Domain::FullPlane => vec![(T::neg_infinity(), T::infinity())],
            Domain::Band => {
                if y > T::zero() {
                    vec![(one / y, two / y)]
                } else {
                    vec![]
                }
            }
            Domain::Hyperbola => {
                if y == T::zero() {
                    vec![(T::neg_infinity(), T::infinity())]
                } else {
                    vec![(-one / y.abs(), one / y.abs())]
                }
            }
            Domain::Whiskered(spec) => {
                let mut intervals = Domain::<T>::Band.horizontal_slice(y);
                if y > T::zero() {
                    let (ys_lo, ys_hi) = spec.tube_y_extent();
                    // levels n with y·2ⁿ inside the tube's height range
                    let n_lo = (ys_lo / y).log2().ceil();
                    let n_hi = (ys_hi / y).log2().floor();
                    if let (Some(n_lo), Some(n_hi)) = (n_lo.to_i32(), n_hi.to_i32()) {
                        for n in n_lo..=n_hi {
                            let scale = two.powi(n);
                            let ys = y * scale;
                            for (lo, hi) in spec.tube_horizontal_chords(ys) {
                                intervals.push((lo * scale, hi * scale));
                            }
                        }
                    }
                }
                merge_intervals(intervals)
            }
            Domain::BandCell { a } => {
                let (lo, hi) = ((one / y).max(*a), (two / y).min(two * *a));
                if y > T::zero() && lo <= hi {
                    vec![(lo, hi)]
                } else {
                    vec![]
                }
            }
            Domain::HyperbolaCell { a } => {
                let (lo, mut hi) = (*a, two * *a);
                if y != T::zero() {
                    hi = hi.min(one / y.abs());
                }
                if lo <= hi {
                    vec![(lo, hi)]
                } else {
                    vec![]
                }
            }
            Domain::WhiskerCell(spec) => {
                let mut intervals = Vec::new();
                if y > T::zero() {
                    let (lo, hi) = ((one / y).max(one), (two / y).min(two));
                    if lo < hi {
                        intervals.push((lo, hi));
                    }
                }
                intervals.extend(spec.tube_horizontal_chords(y));
                merge_intervals(intervals)
            }
        }
    }

    /// Boundary curves for rendering and boundary-equation checks, clipped
    /// against `window` ranges.
    pub fn boundary_curves(&self, window: &Rect<T>, samples: usize) -> Vec<BoundaryCurve<T>> {
        let one = T::one();
        let two = cst::<T>(2.0);
        match self {
            Domain::FullPlane => vec![],
            Domain::Band => vec![
                hyperbola_branch(one, window, samples, true),
                hyperbola_branch(two, window, samples, true),
            ]
            .into_iter()
            .flatten()
            .collect(),
            Domain::Hyperbola => {
                let mut out = Vec::new();
                out.extend(hyperbola_branch(one, window, samples, true));
                out.extend(hyperbola_branch(one, window, samples, false));
                out.extend(hyperbola_branch(-one, window, samples, true));
                out.extend(hyperbola_branch(-one, window, samples, false));
                out
            }
            Domain::Whiskered(spec) => {
                let mut out = Domain::<T>::Band.boundary_curves(window, samples);
                for n in -4..=4 {
                    let scale = two.powi(n);
                    let (a, b) = (spec.a * scale, spec.b * scale);
                    if b < window.x0 || a > window.x1 {
                        continue;
                    }
                    let spine = spec.spine();
                    let scaled: Vec<Point<T>> = spine
                        .points()
                        .iter()
                        .map(|p| Point::new(p.x * scale, p.y / scale))
                        .collect();
                    if let Ok(curve) = Curve::from_points(scaled) {
                        out.push(BoundaryCurve {
                            kind: BoundaryKind::WhiskerTube,
                            curve,
                        });
                    }
                }
                out
            }
            Domain::BandCell { a } => {
                let mut out: Vec<BoundaryCurve<T>> =
                    vec![hyperbola_branch(one, window, samples, true), {
                        hyperbola_branch(two, window, samples, true)
                    }]
                    .into_iter()
                    .flatten()
                    .collect();
                for x in [*a, two * *a] {
                    if let Ok(curve) = Curve::segment(
                        Point::new(x, one / x),
                        Point::new(x, two / x),
                    ) {
                        out.push(BoundaryCurve {
                            kind: BoundaryKind::VerticalEdge(x),
                            curve,
                        });
                    }
                }
                out
            }
            Domain::HyperbolaCell { a } => {
                let mut out = Vec::new();
                out.extend(hyperbola_branch(one, window, samples, true));
                out.extend(hyperbola_branch(-one, window, samples, true));
                for x in [*a, two * *a] {
                    if let Ok(curve) =
                        Curve::segment(Point::new(x, -one / x), Point::new(x, one / x))
                    {
                        out.push(BoundaryCurve {
                            kind: BoundaryKind::VerticalEdge(x),
                            curve,
                        });
                    }
                }
                out
            }
            Domain::WhiskerCell(spec) => {
                let mut out = Domain::<T>::BandCell { a: one }.boundary_curves(window, samples);
                out.push(BoundaryCurve {
                    kind: BoundaryKind::WhiskerTube,
                    curve: spec.spine(),
                });
                out
            }
        }
    }
}

/// What a boundary curve traces.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryKind<T> {
    /// The hyperbola `x·y = level`.
    TauLevel(T),
    /// A vertical cell edge `x = const`.
    VerticalEdge(T),
    /// The spine of a whisker tube (to be stroked at the tube width).
    WhiskerTube,
}

/// A labelled boundary curve.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryCurve<T> {
    pub kind: BoundaryKind<T>,
    pub curve: Curve<T>,
}

impl<T: Real> BoundaryCurve<T> {
    /// Largest violation of the defining equation along the samples.
    /// Whisker tube spines have no level equation and report zero.
    pub fn max_equation_residual(&self) -> T {
        match self.kind {
            BoundaryKind::TauLevel(level) => self
                .curve
                .points()
                .iter()
                .map(|&p| (tau(p) - level).abs())
                .fold(T::zero(), T::max),
            BoundaryKind::VerticalEdge(x) => self
                .curve
                .points()
                .iter()
                .map(|p| (p.x - x).abs())
                .fold(T::zero(), T::max),
            BoundaryKind::WhiskerTube => T::zero(),
        }
    }
}

fn hyperbola_branch<T: Real>(
    level: T,
    window: &Rect<T>,
    samples: usize,
    positive_x: bool,
) -> Option<BoundaryCurve<T>> {
    let samples = samples.max(2);
    let (mut lo, mut hi) = if positive_x {
        (window.x0.max(cst(1e-3)), window.x1)
    } else {
        (window.x0, window.x1.min(cst(-1e-3)))
    };
    // keep y within the window where possible
    let bound = window.y0.abs().max(window.y1.abs()).max(T::one());
    let min_abs_x = level.abs() / bound;
    if positive_x {
        lo = lo.max(min_abs_x);
    } else {
        hi = hi.min(-min_abs_x);
    }
    if !(lo < hi) {
        return None;
    }
    let mut pts = Vec::with_capacity(samples);
    let n1 = cst::<T>((samples - 1) as f64);
    for i in 0..samples {
        let t = cst::<T>(i as f64) / n1;
        let x = lo + (hi - lo) * t;
        pts.push(Point::new(x, level / x));
    }
    Curve::from_points(pts).ok().map(|curve| BoundaryCurve {
        kind: BoundaryKind::TauLevel(level),
        curve,
    })
}

fn merge_intervals<T: Real>(mut intervals: Intervals<T>) -> Intervals<T> {
    intervals.retain(|(lo, hi)| lo < hi);
    intervals.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite interval order"));
    let mut out: Intervals<T> = Vec::with_capacity(intervals.len());
    for (lo, hi) in intervals {
        match out.last_mut() {
            Some(last) if lo < last.1 => {
                last.1 = last.1.max(hi);
            }
            _ => out.push((lo, hi)),
        }
    }
    out
}

/// Geometry of a whisker: a rectilinear arc attached to the band cell on the
/// curve `τ = 2`, rising into the exterior and oscillating over `N` plateaus
/// whose heights alternate above and below the marked level `c`.
///
/// The tube is the set of points within distance [`WhiskerSpec::width`] of
/// the spine polyline. Any spec passing [`WhiskerSpec::validate`] is
/// accepted; [`default_whisker`] builds the documented default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WhiskerSpec<T> {
    /// Attachment abscissa; the spine starts on `τ = 2` at `(a, 2/a)`.
    pub a: T,
    /// Abscissa of the free end.
    pub b: T,
    /// Positions of the plateau extrema, one per hump, strictly inside the
    /// corresponding plateau span.
    pub extrema_x: Vec<T>,
    /// Plateau heights; even indices are maxima (above `c`), odd indices are
    /// minima (below `c`). Maxima increase, minima decrease.
    pub extrema_y: Vec<T>,
    /// Marked intermediate level crossed exactly at the riser abscissas.
    pub c: T,
    /// Riser abscissas `a = x₀ < x₂ < … = b`; the spine height equals `c`
    /// exactly once on each riser.
    pub crossings_x: Vec<T>,
    /// Clearance: `c` stays at distance `> eps` from every plateau height.
    pub eps: T,
    /// Tube half-width around the spine.
    pub width: T,
}

impl<T: Real> WhiskerSpec<T> {
    /// Number of humps.
    pub fn hump_count(&self) -> usize {
        self.extrema_y.len()
    }

    /// Marked point `p_j = (x_{2j}, c)` on the j-th riser, `0 ≤ j ≤ N`.
    pub fn marked_point(&self, j: usize) -> Result<Point<T>> {
        self.crossings_x
            .get(j)
            .map(|&x| Point::new(x, self.c))
            .ok_or_else(|| {
                Error::WhiskerSpec(format!(
                    "marked point index {j} out of range (have {} risers)",
                    self.crossings_x.len()
                ))
            })
    }

    /// Point where the spine meets the band boundary.
    pub fn attachment(&self) -> Point<T> {
        Point::new(self.a, cst::<T>(2.0) / self.a)
    }

    /// The rectilinear spine: stem up from the attachment, then alternating
    /// plateaus and risers, ending at `(b, c)`.
    pub fn spine(&self) -> Curve<T> {
        let n = self.hump_count();
        let mut pts = Vec::with_capacity(2 * n + 3);
        pts.push(self.attachment());
        pts.push(Point::new(self.a, self.extrema_y[0]));
        for k in 1..n {
            let x = self.crossings_x[k];
            pts.push(Point::new(x, self.extrema_y[k - 1]));
            pts.push(Point::new(x, self.extrema_y[k]));
        }
        pts.push(Point::new(self.b, self.extrema_y[n - 1]));
        pts.push(Point::new(self.b, self.c));
        Curve::from_points(pts).expect("validated spine is a proper polyline")
    }

    /// Distance-to-spine membership for the open tube.
    pub fn tube_contains(&self, p: Point<T>) -> bool {
        let w2 = self.width * self.width;
        self.spine()
            .segments()
            .any(|(s0, s1)| segment_distance_sq(p, s0, s1) < w2)
    }

    /// `y`-intervals cut by the tube on the vertical line at `x`
    /// (cell coordinates).
    pub fn tube_vertical_chords(&self, x: T) -> Intervals<T> {
        let w = self.width;
        let mut out = Vec::new();
        for (s0, s1) in self.spine().segments() {
            if s0.x == s1.x {
                // vertical segment: rectangle plus end caps
                let d = (x - s0.x).abs();
                if d < w {
                    let h = (w * w - d * d).sqrt();
                    let (lo, hi) = (s0.y.min(s1.y), s0.y.max(s1.y));
                    out.push((lo - h, hi + h));
                }
            } else {
                // horizontal segment
                let (lo, hi) = (s0.x.min(s1.x), s0.x.max(s1.x));
                if x >= lo && x <= hi {
                    out.push((s0.y - w, s0.y + w));
                } else {
                    let d = if x < lo { lo - x } else { x - hi };
                    if d < w {
                        let h = (w * w - d * d).sqrt();
                        out.push((s0.y - h, s0.y + h));
                    }
                }
            }
        }
        merge_intervals(out)
    }

    /// `x`-intervals cut by the tube on the horizontal line at `y`
    /// (cell coordinates).
    pub fn tube_horizontal_chords(&self, y: T) -> Intervals<T> {
        let w = self.width;
        let mut out = Vec::new();
        for (s0, s1) in self.spine().segments() {
            if s0.y == s1.y {
                let d = (y - s0.y).abs();
                if d < w {
                    let h = (w * w - d * d).sqrt();
                    let (lo, hi) = (s0.x.min(s1.x), s0.x.max(s1.x));
                    out.push((lo - h, hi + h));
                }
            } else {
                let (lo, hi) = (s0.y.min(s1.y), s0.y.max(s1.y));
                if y >= lo && y <= hi {
                    out.push((s0.x - w, s0.x + w));
                } else {
                    let d = if y < lo { lo - y } else { y - hi };
                    if d < w {
                        let h = (w * w - d * d).sqrt();
                        out.push((s0.x - h, s0.x + h));
                    }
                }
            }
        }
        merge_intervals(out)
    }

    fn tube_y_extent(&self) -> (T, T) {
        let spine = self.spine();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for p in spine.points() {
            lo = lo.min(p.y);
            hi = hi.max(p.y);
        }
        (lo - self.width, hi + self.width)
    }

    /// Map a point into the cell band `x ∈ [1, 2)` along the orbit; `None`
    /// when the abscissa cannot index a tube copy.
    fn reduce_to_tube_band(&self, p: Point<T>) -> Option<Point<T>> {
        let n = p.x.log2().floor().to_i32()?;
        let scale = cst::<T>(2.0).powi(n);
        Some(Point::new(p.x / scale, p.y * scale))
    }

    /// Machine check of every geometric hypothesis the accessibility
    /// counting argument uses.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::WhiskerSpec(msg));
        let one = T::one();
        let two = cst::<T>(2.0);
        let n = self.hump_count();
        if n == 0 {
            return fail("at least one hump is required".into());
        }
        if !(self.width > T::zero()) || !(self.eps > T::zero()) {
            return fail("eps and width must be positive".into());
        }
        if !(self.width < self.eps) {
            return fail(format!(
                "tube half-width {} must stay below the clearance eps {}",
                self.width, self.eps
            ));
        }
        if !(self.a > one + self.width && self.b < two - self.width && self.a < self.b) {
            return fail(format!(
                "whisker must stay inside the band: need 1 + width < a < b < 2 − width, got a={}, b={}",
                self.a, self.b
            ));
        }
        if self.extrema_x.len() != n || self.crossings_x.len() != n + 1 {
            return fail(format!(
                "expected {n} extrema and {} crossings, got {} and {}",
                n + 1,
                self.extrema_x.len(),
                self.crossings_x.len()
            ));
        }
        if self.crossings_x[0] != self.a || self.crossings_x[n] != self.b {
            return fail("crossings must start at a and end at b".into());
        }
        for k in 0..n {
            if !(self.crossings_x[k] < self.extrema_x[k]
                && self.extrema_x[k] < self.crossings_x[k + 1])
            {
                return fail(format!(
                    "extremum {k} must lie strictly inside its plateau span"
                ));
            }
        }
        // alternation with clearance: maxima above c + eps, minima below c − eps
        for (k, &y) in self.extrema_y.iter().enumerate() {
            let ok = if k % 2 == 0 {
                y > self.c + self.eps
            } else {
                y < self.c - self.eps
            };
            if !ok {
                return fail(format!(
                    "plateau {k} violates the alternation/clearance rule around c = {}",
                    self.c
                ));
            }
        }
        for k in 2..n {
            if k % 2 == 0 && !(self.extrema_y[k] > self.extrema_y[k - 2]) {
                return fail("maxima must be strictly increasing along the whisker".into());
            }
            if k % 2 == 1 && !(self.extrema_y[k] < self.extrema_y[k - 2]) {
                return fail("minima must be strictly decreasing along the whisker".into());
            }
        }
        // separations that keep leaf chords from bridging two plateaus/risers
        let min_gap = self.width * two;
        for i in 0..n {
            for j in (i + 1)..n {
                if (self.extrema_y[i] - self.extrema_y[j]).abs() <= min_gap {
                    return fail(format!(
                        "plateau heights {i} and {j} are closer than one tube diameter"
                    ));
                }
            }
        }
        for k in 0..n {
            if self.crossings_x[k + 1] - self.crossings_x[k] <= min_gap {
                return fail(format!("risers {k} and {} are closer than one tube diameter", k + 1));
            }
        }
        // everything above the band: τ > 2 along plateaus and at the marked level
        for k in 0..n {
            let x_left = self.crossings_x[k];
            if !(x_left * (self.extrema_y[k] - self.width) > two) {
                return fail(format!("plateau {k} dips into the band closure"));
            }
        }
        if !(self.a * (self.c - self.width) > two) {
            return fail("marked level c sits too close to the band".into());
        }
        let all_finite = self.extrema_x.iter().chain(self.extrema_y.iter()).all(|v| v.is_finite())
            && self.crossings_x.iter().all(|v| v.is_finite())
            && self.a.is_finite()
            && self.b.is_finite()
            && self.c.is_finite();
        if !all_finite {
            return fail("whisker spec contains non-finite values".into());
        }
        Ok(())
    }
}

/// The documented default whisker with `n` humps: attached at `x = 1.3`,
/// plateau extrema at `1.4 + 0.4k/n`, maxima `2.5 + 0.5k/n`, minima
/// `2.2 − 0.1k/n`, marked level midway between the smallest maximum and the
/// largest minimum, `eps` a quarter of the smallest gap from `c` to any
/// plateau, tube half-width `0.02`.
pub fn default_whisker<T: Real>(n: usize) -> Result<WhiskerSpec<T>> {
    if n == 0 {
        return Err(Error::WhiskerSpec(
            "a whisker needs at least one hump".into(),
        ));
    }
    let nf = n as f64;
    let extrema_x: Vec<f64> = (0..n).map(|k| 1.4 + 0.4 * k as f64 / nf).collect();
    let extrema_y: Vec<f64> = (0..n)
        .map(|k| {
            if k % 2 == 0 {
                2.5 + 0.5 * k as f64 / nf
            } else {
                2.2 - 0.1 * k as f64 / nf
            }
        })
        .collect();
    let a = 1.3;
    let b = extrema_x[n - 1] + 0.2 / nf;
    let mut crossings = Vec::with_capacity(n + 1);
    crossings.push(a);
    for k in 1..n {
        crossings.push(0.5 * (extrema_x[k - 1] + extrema_x[k]));
    }
    crossings.push(b);
    let smallest_max = extrema_y
        .iter()
        .enumerate()
        .filter(|(k, _)| k % 2 == 0)
        .map(|(_, &v)| v)
        .fold(f64::INFINITY, f64::min);
    let largest_min = extrema_y
        .iter()
        .enumerate()
        .filter(|(k, _)| k % 2 == 1)
        .map(|(_, &v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let lower_ref = if largest_min.is_finite() { largest_min } else { 2.2 };
    let c = 0.5 * (smallest_max + lower_ref);
    let eps = 0.25
        * extrema_y
            .iter()
            .map(|&y| (y - c).abs())
            .fold(f64::INFINITY, f64::min);
    let spec = WhiskerSpec {
        a: cst(a),
        b: cst(b),
        extrema_x: extrema_x.into_iter().map(cst).collect(),
        extrema_y: extrema_y.into_iter().map(cst).collect(),
        c: cst(c),
        crossings_x: crossings.into_iter().map(cst).collect(),
        eps: cst(eps),
        width: cst(0.02),
    };
    spec.validate()?;
    Ok(spec)
}

fn segment_distance_sq<T: Real>(p: Point<T>, a: Point<T>, b: Point<T>) -> T {
    let ab = a.vector_to(b);
    let ap = a.vector_to(p);
    let len_sq = ab.dot(ab);
    let t = if len_sq > T::zero() {
        (ap.dot(ab) / len_sq).max(T::zero()).min(T::one())
    } else {
        T::zero()
    };
    let closest = Point::new(a.x + ab.x * t, a.y + ab.y * t);
    let d = closest.vector_to(p);
    d.dot(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::PlaneMap;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn band() -> Domain<f64> {
        Domain::Band
    }

    fn hyperbola() -> Domain<f64> {
        Domain::Hyperbola
    }

    #[test]
    fn band_membership() {
        assert!(band().contains(Point::new(1.0, 1.5)));
        assert!(!band().contains(Point::new(1.0, 1.0))); // boundary excluded
        assert!(!band().contains(Point::new(-1.0, -1.5))); // x > 0 required
    }

    #[test]
    fn hyperbola_contains_origin() {
        assert!(hyperbola().contains(Point::new(0.0, 0.0)));
        assert!(hyperbola().contains(Point::new(2.0, 0.4)));
        assert!(!hyperbola().contains(Point::new(2.0, 0.5)));
    }

    #[test]
    fn fundamental_cells() {
        assert_eq!(
            band().fundamental_cell().unwrap(),
            Domain::BandCell { a: 1.0 }
        );
        assert_eq!(
            hyperbola().fundamental_cell().unwrap(),
            Domain::HyperbolaCell { a: 1.0 }
        );
        assert!(Domain::<f64>::FullPlane.fundamental_cell().is_err());
        let spec = default_whisker::<f64>(2).unwrap();
        assert_eq!(
            Domain::Whiskered(spec.clone()).fundamental_cell().unwrap(),
            Domain::WhiskerCell(spec)
        );
    }

    #[test]
    fn reduce_to_cell_examples() {
        let (q, n) = band().reduce_to_cell(Point::new(4.0, 0.3)).unwrap();
        assert_eq!((q, n), (Point::new(1.0, 1.2), 2));

        let (q, n) = band().reduce_to_cell(Point::new(1.5, 1.0)).unwrap();
        assert_eq!((q, n), (Point::new(1.5, 1.0), 0));

        let (q, n) = band().reduce_to_cell(Point::new(0.5, 3.0)).unwrap();
        assert_eq!((q, n), (Point::new(1.0, 1.5), -1));

        assert!(band().reduce_to_cell(Point::new(0.5, 1.0)).is_err()); // outside
        assert!(hyperbola()
            .reduce_to_cell(Point::new(-2.0, 0.1))
            .is_err()); // left half not tiled
    }

    #[test]
    fn reduce_to_cell_tiles_the_band() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let map = PlaneMap::standard_hyperbolic();
        let cell = band().fundamental_cell().unwrap();
        for _ in 0..10_000 {
            let x: f64 = rng.gen_range(0.01..16.0);
            let t: f64 = rng.gen_range(1.0001..1.9999);
            let p = Point::new(x, t / x);
            assert!(band().contains(p));
            let (q, n) = band().reduce_to_cell(p).unwrap();
            assert!(cell.contains(q), "q = {q:?} outside cell");
            let back = map.iterate(q, n).unwrap();
            assert!((back.x - p.x).abs() <= 1e-12 * p.x.abs());
            assert!((back.y - p.y).abs() <= 1e-12 * p.y.abs().max(1e-3));
        }
    }

    #[test]
    fn invariance_checks() {
        let map = PlaneMap::standard_hyperbolic();
        let translation = PlaneMap::translation(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(band().invariance_check(&map, 1000, &mut rng));
        assert!(hyperbola().invariance_check(&map, 1000, &mut rng));
        assert!(!hyperbola().invariance_check(&translation, 1000, &mut rng));
        let whisk = Domain::Whiskered(default_whisker::<f64>(2).unwrap());
        assert!(whisk.invariance_check(&map, 500, &mut rng));
    }

    #[test]
    fn whisker_defaults_validate() {
        for n in 1..=5 {
            let spec = default_whisker::<f64>(n).unwrap();
            assert_eq!(spec.hump_count(), n);
            spec.validate().unwrap();
        }
        assert!(default_whisker::<f64>(0).is_err());
    }

    #[test]
    fn whisker_invalid_specs_are_rejected() {
        let mut spec = default_whisker::<f64>(2).unwrap();
        spec.extrema_y[0] = spec.c + spec.eps * 0.5; // clearance violated
        assert!(spec.validate().is_err());

        let mut spec = default_whisker::<f64>(3).unwrap();
        spec.extrema_y[2] = spec.extrema_y[0] - 0.01; // maxima no longer increasing
        assert!(spec.validate().is_err());

        let mut spec = default_whisker::<f64>(1).unwrap();
        spec.width = spec.eps * 2.0;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn whisker_marked_points_lie_in_the_cell() {
        let spec = default_whisker::<f64>(3).unwrap();
        let cell = Domain::WhiskerCell(spec.clone());
        let full = Domain::Whiskered(spec.clone());
        for j in 0..=3 {
            let p = spec.marked_point(j).unwrap();
            assert!(cell.contains(p), "marked point {j} = {p:?}");
            assert!(full.contains(p));
            // exterior to the band itself
            assert!(!Domain::<f64>::Band.contains(p));
        }
        assert!(spec.marked_point(4).is_err());
    }

    #[test]
    fn whiskered_membership_is_orbit_invariant() {
        let spec = default_whisker::<f64>(2).unwrap();
        let dom = Domain::Whiskered(spec.clone());
        let map = PlaneMap::standard_hyperbolic();
        let p = spec.marked_point(1).unwrap();
        let mut q = p;
        for _ in 0..4 {
            q = map.apply(q);
            assert!(dom.contains(q));
        }
        let mut q = p;
        for _ in 0..4 {
            q = map.apply_inverse(q);
            assert!(dom.contains(q));
        }
    }

    #[test]
    fn vertical_slices() {
        let iv = band().vertical_slice(1.0);
        assert_eq!(iv, vec![(1.0, 2.0)]);

        let iv = hyperbola().vertical_slice(2.0);
        assert_eq!(iv, vec![(-0.5, 0.5)]);

        let iv = hyperbola().vertical_slice(0.0);
        assert_eq!(iv.len(), 1);
        assert!(iv[0].0.is_infinite() && iv[0].1.is_infinite());
    }

    #[test]
    fn whisker_slices_have_tube_and_band_components() {
        let spec = default_whisker::<f64>(1).unwrap();
        let dom = Domain::Whiskered(spec.clone());
        // riser column away from the attachment: band fiber + tube chord
        let x = spec.b;
        let iv = dom.vertical_slice(x);
        assert_eq!(iv.len(), 2, "expected band fiber and separate tube chord");
        assert!(iv[0].0 < 2.0 / x && iv[0].1 <= 2.0 / x + 1e-12);
        assert!(iv[1].0 > 2.0 / x);
        // attachment column: one merged interval through the throat
        let iv = dom.vertical_slice(spec.a);
        assert_eq!(iv.len(), 1);
        assert!(iv[0].1 > spec.extrema_y[0]);
        // at the marked level the line meets the wide band component at small
        // x and, past x = 1, only narrow riser chords
        let iv = dom.horizontal_slice(spec.c);
        assert!(iv.len() >= 2);
        for (lo, hi) in iv.iter().filter(|(lo, _)| *lo > 1.0) {
            assert!(hi - lo < 3.0 * spec.width, "chord ({lo}, {hi}) too wide");
        }
    }

    #[test]
    fn slice_membership_agrees_with_contains() {
        let spec = default_whisker::<f64>(3).unwrap();
        let dom = Domain::Whiskered(spec);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2000 {
            let x: f64 = rng.gen_range(0.7..3.9);
            let y: f64 = rng.gen_range(0.0..3.5);
            let p = Point::new(x, y);
            let in_slice = dom
                .vertical_slice(x)
                .iter()
                .any(|&(lo, hi)| y > lo && y < hi);
            assert_eq!(in_slice, dom.contains(p), "mismatch at {p:?}");
            let in_h = dom
                .horizontal_slice(y)
                .iter()
                .any(|&(lo, hi)| x > lo && x < hi);
            assert_eq!(in_h, dom.contains(p), "horizontal mismatch at {p:?}");
        }
    }

    #[test]
    fn whisker_spec_round_trips_through_json() {
        let spec = default_whisker::<f64>(3).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        let back: WhiskerSpec<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        back.validate().unwrap();
    }

    #[test]
    fn boundary_curves_satisfy_their_equations() {
        let window = Rect::new(0.25, 4.0, 0.0, 4.0);
        for bc in band().boundary_curves(&window, 64) {
            assert!(bc.max_equation_residual() <= 1e-10);
        }
        let window = Rect::new(-3.0, 3.0, -3.0, 3.0);
        for bc in hyperbola().boundary_curves(&window, 64) {
            assert!(bc.max_equation_residual() <= 1e-10);
        }
    }
}
