//! Prolongational limit sets of the built-in Reeb-figure flows.
//!
//! A point `q` is a forward prolongational limit of `p` when points `pᵢ → p`
//! and times `tᵢ → ∞` exist with `φ^{tᵢ}(pᵢ) → q`. Numerically, orbits are
//! launched from shrinking rings around the base point; a candidate must be
//! hit at late times (a per-ring time floor that grows as the ring shrinks)
//! for every ring to count as stable under refinement.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::plane::{Point, Rect, Vec2};
use crate::{Error, Result};

/// The built-in fixed-point-free flows.
///
/// `ReebSingle` is one Reeb component between vertical edge lines: interior
/// orbits ride secant-shaped curves from the lower left to the upper right;
/// the left edge flows down, the right edge up. The double variants place
/// two cosecant-shaped components on `(−1, 0)` and `(0, 1)` separated by the
/// vertical leaf `x = 0`; in the aligned variant both interiors feed the
/// separating leaf upward, in the opposed variant the right component is
/// reversed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlowField {
    ReebSingle,
    ReebDoubleAligned,
    ReebDoubleOpposed,
}

impl FlowField {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "reeb1" | "reeb-single" => Ok(FlowField::ReebSingle),
            "reeb2-same-orientation" | "reeb-double-aligned" => Ok(FlowField::ReebDoubleAligned),
            "reeb2-opposed" | "reeb-double-opposed" => Ok(FlowField::ReebDoubleOpposed),
            other => Err(Error::UnknownFlow(other.into())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FlowField::ReebSingle => "reeb1",
            FlowField::ReebDoubleAligned => "reeb2-same-orientation",
            FlowField::ReebDoubleOpposed => "reeb2-opposed",
        }
    }

    /// Unit velocity field.
    pub fn velocity(&self, p: Point<f64>) -> Vec2<f64> {
        match self {
            FlowField::ReebSingle => {
                let h = std::f64::consts::FRAC_PI_2;
                if p.x <= -h {
                    Vec2::new(0.0, -1.0)
                } else if p.x >= h {
                    Vec2::new(0.0, 1.0)
                } else {
                    // tangent of y = c + sec x, scaled by cos²x to stay finite
                    let (sin, cos) = p.x.sin_cos();
                    Vec2::new(cos * cos, sin)
                        .normalized()
                        .unwrap_or(Vec2::new(0.0, 1.0))
                }
            }
            FlowField::ReebDoubleAligned | FlowField::ReebDoubleOpposed => {
                let reversed_right = matches!(self, FlowField::ReebDoubleOpposed);
                if p.x <= -1.0 {
                    Vec2::new(0.0, -1.0)
                } else if p.x == 0.0 {
                    Vec2::new(0.0, 1.0)
                } else if p.x >= 1.0 {
                    if reversed_right {
                        Vec2::new(0.0, 1.0)
                    } else {
                        Vec2::new(0.0, -1.0)
                    }
                } else {
                    // strips carry y = c + csc(π·s) with s the strip coordinate
                    let s = if p.x < 0.0 { p.x + 1.0 } else { p.x };
                    let (sin, cos) = (std::f64::consts::PI * s).sin_cos();
                    let along = Vec2::new(sin * sin, -std::f64::consts::PI * cos)
                        .normalized()
                        .unwrap_or(Vec2::new(0.0, 1.0));
                    if p.x < 0.0 || reversed_right {
                        along
                    } else {
                        along.scaled(-1.0)
                    }
                }
            }
        }
    }

    /// Leaves of the flow as curves through a seed, for rendering.
    pub fn streamline(&self, seed: Point<f64>, window: &Rect<f64>, step: f64) -> Vec<Point<f64>> {
        let cap = ((window.width() + window.height()) * 6.0 / step).ceil() as usize;
        let mut back = integrate(self, seed, -1.0, step, cap, |p| !window.contains(p));
        back.reverse();
        back.push(seed);
        back.extend(integrate(self, seed, 1.0, step, cap, |p| !window.contains(p)));
        back
    }
}

/// Time direction of a prolongational limit query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeDirection {
    Forward,
    Backward,
}

/// One witness `(pᵢ, tᵢ, φ^{tᵢ}(pᵢ))` backing a limit sample.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Witness {
    pub start: Point<f64>,
    pub time: f64,
    pub arrived: Point<f64>,
}

/// A stable limit point with one witness per tested ring radius.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LimitSample {
    pub point: Point<f64>,
    pub witnesses: Vec<Witness>,
}

/// Approximation of a prolongational limit set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProlongationalSet {
    pub base: Point<f64>,
    pub direction: TimeDirection,
    pub deltas: Vec<f64>,
    pub samples: Vec<LimitSample>,
}

/// Tunables for [`prolongational_limit`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProlongationParams {
    /// Candidates are collected inside this window only.
    pub window: Rect<f64>,
    /// Snap size for clustering and the stability test.
    pub grid_tol: f64,
    /// Integration step.
    pub step: f64,
    /// Ring points per delta.
    pub net_points: usize,
    /// Samples count only past time `factor / δ`.
    pub time_floor_factor: f64,
}

impl Default for ProlongationParams {
    fn default() -> Self {
        ProlongationParams {
            window: Rect::new(-3.0, 3.0, -6.0, 6.0),
            grid_tol: 0.05,
            step: 0.01,
            net_points: 16,
            time_floor_factor: 0.5,
        }
    }
}

/// Default ring radii.
pub fn default_deltas() -> Vec<f64> {
    vec![0.08, 0.04, 0.02, 0.01]
}

/// Approximate `𝒥₊(p)` (or `𝒥₋(p)`) for one of the built-in flows.
///
/// For each ring radius `δ`, orbits start from `net_points` points at
/// distance `δ` around `p` (plus `p` itself) and are integrated up to
/// `t_max`; positions inside the window after the per-ring time floor are
/// snapped to a `grid_tol` grid. A candidate survives only if every ring
/// produced a hit within one grid cell of it.
pub fn prolongational_limit(
    flow: FlowField,
    p: Point<f64>,
    direction: TimeDirection,
    deltas: &[f64],
    t_max: f64,
    params: &ProlongationParams,
) -> Result<ProlongationalSet> {
    if deltas.is_empty() {
        return Err(Error::ProbeSetup("need at least one delta".into()));
    }
    if deltas.iter().any(|d| !(*d > 0.0)) {
        return Err(Error::ProbeSetup("deltas must be positive".into()));
    }
    let mut deltas: Vec<f64> = deltas.to_vec();
    deltas.sort_by(|a, b| b.partial_cmp(a).expect("finite deltas"));
    deltas.dedup();
    let floor_of = |d: f64| params.time_floor_factor / d;
    if floor_of(deltas[deltas.len() - 1]) >= t_max {
        return Err(Error::ProbeSetup(format!(
            "t_max = {t_max} is below the time floor of the smallest delta"
        )));
    }
    let sign = match direction {
        TimeDirection::Forward => 1.0,
        TimeDirection::Backward => -1.0,
    };
    let snap = |q: Point<f64>| -> (i64, i64) {
        (
            (q.x / params.grid_tol).floor() as i64,
            (q.y / params.grid_tol).floor() as i64,
        )
    };

    let mut rings: Vec<BTreeMap<(i64, i64), Witness>> = Vec::with_capacity(deltas.len());
    for &delta in &deltas {
        let floor = floor_of(delta);
        let mut hits: BTreeMap<(i64, i64), Witness> = BTreeMap::new();
        let mut starts = Vec::with_capacity(params.net_points + 1);
        starts.push(p);
        for i in 0..params.net_points {
            let angle = 2.0 * std::f64::consts::PI * i as f64 / params.net_points as f64;
            starts.push(Point::new(
                p.x + delta * angle.cos(),
                p.y + delta * angle.sin(),
            ));
        }
        for start in starts {
            let steps = (t_max / params.step).ceil() as usize;
            let mut q = start;
            for step_idx in 1..=steps {
                q = rk4_step(&flow, q, params.step * sign);
                let t = step_idx as f64 * params.step;
                if t >= floor && params.window.contains(q) {
                    hits.entry(snap(q)).or_insert(Witness {
                        start,
                        time: t * sign,
                        arrived: q,
                    });
                }
                if !q.is_finite() {
                    break;
                }
            }
        }
        rings.push(hits);
    }

    // a candidate from the coarsest ring survives when every ring hit the
    // same grid cell or one of its neighbors
    let near = |ring: &BTreeMap<(i64, i64), Witness>, key: (i64, i64)| -> Option<Witness> {
        for dy in -1..=1 {
            for dx in -1..=1 {
                if let Some(w) = ring.get(&(key.0 + dx, key.1 + dy)) {
                    return Some(*w);
                }
            }
        }
        None
    };
    let mut samples = Vec::new();
    for (&key, &coarse_witness) in &rings[0] {
        let mut witnesses = vec![coarse_witness];
        let mut ok = true;
        for ring in &rings[1..] {
            match near(ring, key) {
                Some(w) => witnesses.push(w),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            samples.push(LimitSample {
                point: witnesses.last().expect("nonempty").arrived,
                witnesses,
            });
        }
    }

    Ok(ProlongationalSet {
        base: p,
        direction,
        deltas,
        samples,
    })
}

fn rk4_step(flow: &FlowField, p: Point<f64>, h: f64) -> Point<f64> {
    let k1 = flow.velocity(p);
    let k2 = flow.velocity(p.offset(k1.scaled(h * 0.5)));
    let k3 = flow.velocity(p.offset(k2.scaled(h * 0.5)));
    let k4 = flow.velocity(p.offset(k3.scaled(h)));
    let combined = Vec2::new(
        (k1.x + 2.0 * (k2.x + k3.x) + k4.x) / 6.0,
        (k1.y + 2.0 * (k2.y + k3.y) + k4.y) / 6.0,
    );
    p.offset(combined.scaled(h))
}

fn integrate(
    flow: &FlowField,
    start: Point<f64>,
    sign: f64,
    step: f64,
    cap: usize,
    stop: impl Fn(Point<f64>) -> bool,
) -> Vec<Point<f64>> {
    let mut out = Vec::new();
    let mut p = start;
    for _ in 0..cap {
        p = rk4_step(flow, p, step * sign);
        out.push(p);
        if stop(p) || !p.is_finite() {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn quick_params() -> ProlongationParams {
        ProlongationParams {
            step: 0.02,
            ..ProlongationParams::default()
        }
    }

    #[test]
    fn flow_names_round_trip() {
        for f in [
            FlowField::ReebSingle,
            FlowField::ReebDoubleAligned,
            FlowField::ReebDoubleOpposed,
        ] {
            assert_eq!(FlowField::parse(f.name()).unwrap(), f);
        }
        assert!(FlowField::parse("spiral").is_err());
    }

    #[test]
    fn interior_orbit_monotonic_height_at_edges() {
        // near the right edge of the single Reeb component the flow climbs
        let f = FlowField::ReebSingle;
        let v = f.velocity(Point::new(FRAC_PI_2 - 1e-3, 0.0));
        assert!(v.y > 0.99);
        let v = f.velocity(Point::new(-FRAC_PI_2 + 1e-3, 0.0));
        assert!(v.y < -0.99);
    }

    #[test]
    fn left_edge_point_accumulates_on_the_right_edge() {
        let set = prolongational_limit(
            FlowField::ReebSingle,
            Point::new(-FRAC_PI_2, 0.0),
            TimeDirection::Forward,
            &[0.08, 0.04, 0.02],
            260.0,
            &quick_params(),
        )
        .unwrap();
        assert!(set.samples.len() >= 3, "expected a cluster, got {}", set.samples.len());
        for s in &set.samples {
            assert!(
                (s.point.x - FRAC_PI_2).abs() <= 0.06,
                "sample {:?} off the right edge",
                s.point
            );
        }
        // witnesses approach the base and escape in time
        for s in &set.samples {
            for (i, w) in s.witnesses.iter().enumerate() {
                assert!(w.start.distance(set.base) <= set.deltas[i] + 1e-12);
                assert!(w.time >= quick_params().time_floor_factor / set.deltas[i]);
            }
        }
    }

    #[test]
    fn interior_and_parallel_points_have_empty_limits() {
        for p in [Point::new(0.0, 1.5), Point::new(2.5, 0.0)] {
            let set = prolongational_limit(
                FlowField::ReebSingle,
                p,
                TimeDirection::Forward,
                &[0.08, 0.04, 0.02],
                260.0,
                &quick_params(),
            )
            .unwrap();
            assert!(
                set.samples.is_empty(),
                "expected empty limit at {p:?}, got {} samples",
                set.samples.len()
            );
        }
    }

    #[test]
    fn aligned_double_reeb_backward_limit_hits_both_far_edges() {
        let set = prolongational_limit(
            FlowField::ReebDoubleAligned,
            Point::new(0.0, 0.0),
            TimeDirection::Backward,
            &[0.08, 0.04, 0.02],
            260.0,
            &quick_params(),
        )
        .unwrap();
        let near_left = set.samples.iter().any(|s| (s.point.x + 1.0).abs() <= 0.06);
        let near_right = set.samples.iter().any(|s| (s.point.x - 1.0).abs() <= 0.06);
        assert!(near_left, "missing left-edge cluster");
        assert!(near_right, "missing right-edge cluster");
    }

    #[test]
    fn opposed_double_reeb_backward_limit_only_hits_the_left_far_edge() {
        let set = prolongational_limit(
            FlowField::ReebDoubleOpposed,
            Point::new(0.0, 0.0),
            TimeDirection::Backward,
            &[0.08, 0.04, 0.02],
            260.0,
            &quick_params(),
        )
        .unwrap();
        let near_left = set.samples.iter().any(|s| (s.point.x + 1.0).abs() <= 0.06);
        let near_right = set.samples.iter().any(|s| (s.point.x - 1.0).abs() <= 0.06);
        assert!(near_left, "missing left-edge cluster");
        assert!(!near_right, "right far edge should not appear");
    }

    #[test]
    fn setup_validation() {
        let params = quick_params();
        assert!(prolongational_limit(
            FlowField::ReebSingle,
            Point::new(0.0, 0.0),
            TimeDirection::Forward,
            &[],
            100.0,
            &params
        )
        .is_err());
        assert!(prolongational_limit(
            FlowField::ReebSingle,
            Point::new(0.0, 0.0),
            TimeDirection::Forward,
            &[0.001],
            100.0,
            &params
        )
        .is_err());
    }
}
