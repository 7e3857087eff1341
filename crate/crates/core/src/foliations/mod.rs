//! Stable/unstable leaf charts, leaf traces and intersections, Brouwer-line
//! testing, and the conjugacy collapsing the hyperbola disc onto the plane.
//!
//! Line-based charts (vertical resp. horizontal lines intersected with an
//! invariant domain) have exact leaf identity: a leaf is pinned by its
//! coordinate and the connected component index of the line slice. Frame
//! charts trace integral curves of the rotating frame; their identity is
//! approximate, decided by tracing within [`LEAF_IDENTITY_TOL`].

mod structures;

pub use structures::{AnosovStructure, StructureKind};

use serde::{Deserialize, Serialize};

use crate::domains::Domain;
use crate::metrics::ThetaProfile;
use crate::plane::{tau, Curve, PlaneMap, Point, Rect, Vec2};
use crate::{Error, Result};

/// Distance at which a traced frame leaf is considered to pass through a
/// point.
pub const LEAF_IDENTITY_TOL: f64 = 1e-6;

/// Fixed integration step for frame-leaf tracing (4th order one-step
/// method on a unit direction field).
pub const FRAME_TRACE_STEP: f64 = 1e-3;

/// Which family of a transverse pair a chart describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeafKind {
    Stable,
    Unstable,
}

/// A foliation chart: how to produce the leaf through a point.
#[derive(Clone, Debug, PartialEq)]
pub enum LeafChart {
    /// Components of vertical lines intersected with a domain.
    VerticalIn(Domain<f64>),
    /// Components of horizontal lines intersected with a domain.
    HorizontalIn(Domain<f64>),
    /// Integral curves of the rotating frame field.
    FrameIntegral {
        theta: ThetaProfile<f64>,
        kind: LeafKind,
    },
}

/// Canonical leaf identity.
#[derive(Clone, Debug, PartialEq)]
pub enum LeafId {
    VerticalLine { x: f64, component: usize },
    HorizontalLine { y: f64, component: usize },
    FrameSeed { kind: LeafKind, seed: Point<f64> },
}

/// A leaf trace clipped to a query window.
#[derive(Clone, Debug, PartialEq)]
pub struct Leaf {
    pub trace: Curve<f64>,
    pub id: LeafId,
}

impl LeafChart {
    /// The leaf through `p`, clipped to `window`.
    ///
    /// For line-based charts this is the connected component of the line
    /// through `p` inside the chart's domain (trace endpoints sit on the
    /// closure). Frame leaves are traced both ways until they exit the
    /// window.
    pub fn leaf_through(&self, p: Point<f64>, window: &Rect<f64>) -> Result<Leaf> {
        if window.is_empty() {
            return Err(Error::Geometry("empty query window".into()));
        }
        match self {
            LeafChart::VerticalIn(domain) => {
                if !domain.contains(p) {
                    return Err(Error::outside(p.x, p.y, domain.name()));
                }
                let (component, (lo, hi)) = component_containing(domain.vertical_slice(p.x), p.y)
                    .ok_or_else(|| Error::outside(p.x, p.y, domain.name()))?;
                if p.x < window.x0 || p.x > window.x1 {
                    return Err(Error::EmptyTrace);
                }
                let (lo, hi) = (lo.max(window.y0), hi.min(window.y1));
                if !(lo < hi) {
                    return Err(Error::EmptyTrace);
                }
                Ok(Leaf {
                    trace: Curve::segment(Point::new(p.x, lo), Point::new(p.x, hi))?,
                    id: LeafId::VerticalLine {
                        x: p.x,
                        component,
                    },
                })
            }
            LeafChart::HorizontalIn(domain) => {
                if !domain.contains(p) {
                    return Err(Error::outside(p.x, p.y, domain.name()));
                }
                let (component, (lo, hi)) =
                    component_containing(domain.horizontal_slice(p.y), p.x)
                        .ok_or_else(|| Error::outside(p.x, p.y, domain.name()))?;
                if p.y < window.y0 || p.y > window.y1 {
                    return Err(Error::EmptyTrace);
                }
                let (lo, hi) = (lo.max(window.x0), hi.min(window.x1));
                if !(lo < hi) {
                    return Err(Error::EmptyTrace);
                }
                Ok(Leaf {
                    trace: Curve::segment(Point::new(lo, p.y), Point::new(hi, p.y))?,
                    id: LeafId::HorizontalLine {
                        y: p.y,
                        component,
                    },
                })
            }
            LeafChart::FrameIntegral { theta, kind } => {
                let trace = trace_frame_leaf(theta, *kind, p, window, FRAME_TRACE_STEP)?;
                Ok(Leaf {
                    trace,
                    id: LeafId::FrameSeed {
                        kind: *kind,
                        seed: p,
                    },
                })
            }
        }
    }

    /// Whether `p` and `q` lie on the same leaf.
    ///
    /// Exact for line-based charts (same coordinate, same component). For
    /// frame charts the leaf through `p` is traced and `q` must be passed
    /// within [`LEAF_IDENTITY_TOL`].
    pub fn same_leaf(&self, p: Point<f64>, q: Point<f64>) -> Result<bool> {
        match self {
            LeafChart::VerticalIn(domain) => {
                for r in [p, q] {
                    if !domain.contains(r) {
                        return Err(Error::outside(r.x, r.y, domain.name()));
                    }
                }
                if p.x != q.x {
                    return Ok(false);
                }
                let slices = domain.vertical_slice(p.x);
                Ok(match (
                    component_containing(slices.clone(), p.y),
                    component_containing(slices, q.y),
                ) {
                    (Some((i, _)), Some((j, _))) => i == j,
                    _ => false,
                })
            }
            LeafChart::HorizontalIn(domain) => {
                for r in [p, q] {
                    if !domain.contains(r) {
                        return Err(Error::outside(r.x, r.y, domain.name()));
                    }
                }
                if p.y != q.y {
                    return Ok(false);
                }
                let slices = domain.horizontal_slice(p.y);
                Ok(match (
                    component_containing(slices.clone(), p.x),
                    component_containing(slices, q.x),
                ) {
                    (Some((i, _)), Some((j, _))) => i == j,
                    _ => false,
                })
            }
            LeafChart::FrameIntegral { .. } => {
                let pad = 2.0 + p.distance(q);
                let window = Rect::new(
                    p.x.min(q.x) - pad,
                    p.x.max(q.x) + pad,
                    p.y.min(q.y) - pad,
                    p.y.max(q.y) + pad,
                );
                let leaf = self.leaf_through(p, &window)?;
                Ok(distance_to_polyline(q, &leaf.trace) < LEAF_IDENTITY_TOL)
            }
        }
    }
}

fn component_containing(
    slices: Vec<(f64, f64)>,
    v: f64,
) -> Option<(usize, (f64, f64))> {
    slices
        .into_iter()
        .enumerate()
        .find(|&(_, (lo, hi))| v >= lo && v <= hi)
}

/// Minimal Euclidean distance from a point to a polyline.
pub fn distance_to_polyline(p: Point<f64>, curve: &Curve<f64>) -> f64 {
    curve
        .segments()
        .map(|(a, b)| segment_distance(p, a, b))
        .fold(f64::INFINITY, f64::min)
}

fn segment_distance(p: Point<f64>, a: Point<f64>, b: Point<f64>) -> f64 {
    let ab = a.vector_to(b);
    let ap = a.vector_to(p);
    let len_sq = ab.dot(ab);
    let t = if len_sq > 0.0 {
        (ap.dot(ab) / len_sq).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Point::new(a.x + ab.x * t, a.y + ab.y * t).distance(p)
}

fn trace_frame_leaf(
    theta: &ThetaProfile<f64>,
    kind: LeafKind,
    p: Point<f64>,
    window: &Rect<f64>,
    step: f64,
) -> Result<Curve<f64>> {
    let field = |q: Point<f64>| -> Vec2<f64> {
        let frame = theta.frame_at(q.x);
        match kind {
            LeafKind::Stable => frame.stable,
            LeafKind::Unstable => frame.unstable,
        }
    };
    let cap = ((window.width() + window.height()) * 4.0 / step).ceil() as usize + 64;
    let mut forward = integrate_direction(&field, p, step, 1.0, window, cap);
    let backward = integrate_direction(&field, p, step, -1.0, window, cap);
    let mut pts: Vec<Point<f64>> = backward.into_iter().rev().collect();
    pts.push(p);
    pts.append(&mut forward);
    pts.dedup();
    Curve::from_points(pts)
}

fn integrate_direction(
    field: &impl Fn(Point<f64>) -> Vec2<f64>,
    start: Point<f64>,
    step: f64,
    sign: f64,
    window: &Rect<f64>,
    cap: usize,
) -> Vec<Point<f64>> {
    let mut out = Vec::new();
    let mut p = start;
    for _ in 0..cap {
        let h = step * sign;
        let k1 = field(p);
        let k2 = field(p.offset(k1.scaled(h * 0.5)));
        let k3 = field(p.offset(k2.scaled(h * 0.5)));
        let k4 = field(p.offset(k3.scaled(h)));
        let combined = Vec2::new(
            k1.x + 2.0 * (k2.x + k3.x) + k4.x,
            k1.y + 2.0 * (k2.y + k3.y) + k4.y,
        );
        // keep unit speed: renormalize the combined step direction
        let dir = match combined.normalized() {
            Some(d) => d,
            None => break,
        };
        p = p.offset(dir.scaled(h));
        out.push(p);
        if !window.contains(p) {
            break;
        }
    }
    out
}

/// Intersection point of two leaf traces, if the polylines cross.
pub fn leaves_intersect(a: &Leaf, b: &Leaf) -> Option<Point<f64>> {
    polylines_intersect(&a.trace, &b.trace)
}

/// First intersection of two polylines in trace order.
pub fn polylines_intersect(a: &Curve<f64>, b: &Curve<f64>) -> Option<Point<f64>> {
    for (a0, a1) in a.segments() {
        for (b0, b1) in b.segments() {
            if let Some(p) = segment_intersection(a0, a1, b0, b1) {
                return Some(p);
            }
        }
    }
    None
}

fn segment_intersection(
    a0: Point<f64>,
    a1: Point<f64>,
    b0: Point<f64>,
    b1: Point<f64>,
) -> Option<Point<f64>> {
    let r = a0.vector_to(a1);
    let s = b0.vector_to(b1);
    let denom = r.cross(s);
    let qp = a0.vector_to(b0);
    if denom == 0.0 {
        // parallel; overlapping collinear segments meet in their overlap
        if qp.cross(r) != 0.0 {
            return None;
        }
        let r_len_sq = r.dot(r);
        if r_len_sq == 0.0 {
            return None;
        }
        let t0 = qp.dot(r) / r_len_sq;
        let t1 = t0 + s.dot(r) / r_len_sq;
        let (lo, hi) = (t0.min(t1).max(0.0), t0.max(t1).min(1.0));
        if lo > hi {
            return None;
        }
        let t = 0.5 * (lo + hi);
        return Some(Point::new(a0.x + r.x * t, a0.y + r.y * t));
    }
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
        Some(Point::new(a0.x + r.x * t, a0.y + r.y * t))
    } else {
        None
    }
}

/// Side of a point relative to an oriented polyline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    On,
}

/// Side of `q` relative to the oriented polyline, by the signed area of the
/// triangle against the nearest segment; ties at shared vertices are decided
/// against the bisector of the adjacent directions.
pub fn side_of_polyline(q: Point<f64>, curve: &Curve<f64>, on_tol: f64) -> Side {
    let pts = curve.points();
    let mut best = f64::INFINITY;
    let mut best_idx = 0usize;
    for (i, w) in pts.windows(2).enumerate() {
        let d = segment_distance(q, w[0], w[1]);
        if d < best {
            best = d;
            best_idx = i;
        }
    }
    if best <= on_tol {
        return Side::On;
    }
    let (a, b) = (pts[best_idx], pts[best_idx + 1]);
    let ab = a.vector_to(b);
    let ap = a.vector_to(q);
    let len_sq = ab.dot(ab);
    let t = if len_sq > 0.0 { ap.dot(ab) / len_sq } else { 0.0 };
    let cross = if t > 0.0 && t < 1.0 {
        ab.cross(ap)
    } else {
        // nearest point is a vertex: use the bisector of adjacent directions
        let (vertex, mut dir) = if t <= 0.0 {
            (a, ab.normalized().unwrap_or(Vec2::new(1.0, 0.0)))
        } else {
            (b, ab.normalized().unwrap_or(Vec2::new(1.0, 0.0)))
        };
        let neighbor = if t <= 0.0 {
            best_idx.checked_sub(1).map(|i| (pts[i], pts[i + 1]))
        } else {
            pts.get(best_idx + 2).map(|&c| (b, c))
        };
        if let Some((na, nb)) = neighbor {
            if let Some(nd) = na.vector_to(nb).normalized() {
                dir = Vec2::new(dir.x + nd.x, dir.y + nd.y);
            }
        }
        dir.cross(vertex.vector_to(q))
    };
    if cross > 0.0 {
        Side::Left
    } else {
        Side::Right
    }
}

/// Whether `curve` behaves as a Brouwer line for `map` inside `window`: the
/// image curve and the preimage curve must lie strictly in different
/// complementary components of the curve.
///
/// The polyline is extended beyond its endpoints along its end directions so
/// that it separates the window even when the supplied arc stops on a domain
/// boundary inside the window; the verdict is window-relative.
pub fn is_brouwer_line(
    curve: &Curve<f64>,
    map: &PlaneMap<f64>,
    window: &Rect<f64>,
) -> Result<bool> {
    if curve.points().iter().all(|p| !window.contains(*p)) {
        return Err(Error::Geometry(
            "curve does not meet the test window".into(),
        ));
    }
    if let PlaneMap::LinearHyperbolic { .. } = map {
        if distance_to_polyline(Point::new(0.0, 0.0), curve) < 1e-9 {
            return Err(Error::Geometry(
                "map has a fixed point on the curve".into(),
            ));
        }
    }
    ensure_simple(curve)?;
    let separator = extend_with_end_rays(curve, 10.0 * window.diagonal().max(1.0))?;
    let image = curve.mapped(|p| map.apply(p))?;
    let preimage = curve.mapped(|p| map.apply_inverse(p))?;
    let on_tol = 1e-9 * window.diagonal().max(1.0);

    let side_set = |c: &Curve<f64>| -> Result<Option<Side>> {
        let mut seen: Option<Side> = None;
        let mut any = false;
        for &p in c.points().iter().filter(|p| window.contains(**p)) {
            any = true;
            let side = side_of_polyline(p, &separator, on_tol);
            if side == Side::On {
                return Ok(Some(Side::On));
            }
            match seen {
                None => seen = Some(side),
                Some(s) if s != side => return Ok(Some(Side::On)), // mixed sides
                _ => {}
            }
        }
        if !any {
            return Err(Error::Geometry(
                "image/preimage curve misses the window; enlarge it".into(),
            ));
        }
        Ok(seen)
    };

    let img_side = side_set(&image)?;
    let pre_side = side_set(&preimage)?;
    Ok(matches!(
        (img_side, pre_side),
        (Some(Side::Left), Some(Side::Right)) | (Some(Side::Right), Some(Side::Left))
    ))
}

fn ensure_simple(curve: &Curve<f64>) -> Result<()> {
    // stride the check so long traces stay affordable
    let pts = curve.points();
    let stride = (pts.len() / 512).max(1);
    let sampled: Vec<Point<f64>> = pts.iter().step_by(stride).copied().collect();
    let sampled = if sampled.last() == pts.last() {
        sampled
    } else {
        let mut s = sampled;
        s.push(*pts.last().unwrap());
        s
    };
    for i in 0..sampled.len().saturating_sub(1) {
        for j in (i + 2)..sampled.len().saturating_sub(1) {
            if segment_intersection(sampled[i], sampled[i + 1], sampled[j], sampled[j + 1])
                .is_some()
            {
                return Err(Error::Geometry("curve is not simple".into()));
            }
        }
    }
    Ok(())
}

fn extend_with_end_rays(curve: &Curve<f64>, ray_len: f64) -> Result<Curve<f64>> {
    let pts = curve.points();
    let first_dir = pts[1].vector_to(pts[0]).normalized().ok_or_else(|| {
        Error::Geometry("degenerate first segment".into())
    })?;
    let last_dir = pts[pts.len() - 2]
        .vector_to(pts[pts.len() - 1])
        .normalized()
        .ok_or_else(|| Error::Geometry("degenerate last segment".into()))?;
    let mut out = Vec::with_capacity(pts.len() + 2);
    out.push(pts[0].offset(first_dir.scaled(ray_len)));
    out.extend_from_slice(pts);
    out.push(pts[pts.len() - 1].offset(last_dir.scaled(ray_len)));
    Curve::from_points(out)
}

/// The conjugacy `h(x, y) = (x, ψ(x·y)·|y|)` from the hyperbola disc onto
/// the plane; `psi` must be strictly increasing on `(−1, 1)`, the identity
/// on `(−1/2, 1/2)`, and diverge at `±1`.
pub fn conjugacy_h(p: Point<f64>, psi: impl Fn(f64) -> Result<f64>) -> Result<Point<f64>> {
    if !(tau(p).abs() < 1.0) {
        return Err(Error::outside(p.x, p.y, "hyperbola"));
    }
    Ok(Point::new(p.x, psi(tau(p))? * p.y.abs()))
}

/// The documented default `ψ`: the identity on `|t| ≤ 1/2`, then
/// `sign(t)·(1/2 + (|t| − 1/2)/(1 − |t|))`, which is continuous, strictly
/// increasing and diverges as `|t| → 1`.
pub fn default_psi(t: f64) -> Result<f64> {
    if !(t.abs() < 1.0) {
        return Err(Error::OutsideProfile {
            value: t,
            profile: "default_psi (domain (−1, 1))",
        });
    }
    let a = t.abs();
    if a <= 0.5 {
        Ok(t)
    } else {
        Ok(t.signum() * (0.5 + (a - 0.5) / (1.0 - a)))
    }
}
