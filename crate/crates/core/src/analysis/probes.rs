//! Completeness and hyperbolicity probes.
//!
//! The completeness probe measures metric lengths along a vertical fiber up
//! to a shrinking offset `ε` from the domain boundary and pairs each
//! measurement with a certified Riemann lower bound; diverging lengths
//! witness that boundary points are at infinite distance. The hyperbolicity
//! probe pushes leaf-tangent vectors through iterates of the map and fits
//! the expansion constants.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::foliations::AnosovStructure;
use crate::metrics::{lower_sum_bound, ConformalProfile, MetricField};
use crate::plane::{Curve, Point, TangentVector};
use crate::sampling::sample_points_in;
use crate::{Error, Result};

/// Which boundary of the profile interval the fiber approaches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundarySide {
    Upper,
    Lower,
}

/// Outcome of a completeness probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivergenceVerdict {
    Diverges,
    Inconclusive,
}

/// Measured lengths toward the boundary, with certified lower bounds.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DivergenceReport {
    /// Boundary offsets, sorted decreasing (approach order).
    pub epsilons: Vec<f64>,
    /// Measured metric lengths from the start level to `boundary ∓ ε`.
    pub lengths: Vec<f64>,
    /// Riemann lower-sum certificates for the same intervals.
    pub certified_lower_bounds: Vec<f64>,
    /// Thresholds every length sequence must eventually exceed.
    pub thresholds: Vec<f64>,
    pub verdict: DivergenceVerdict,
    /// Set when any quadrature hit the refinement cap.
    pub truncated: bool,
}

/// Tunables for [`completeness_probe`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompletenessParams {
    /// Relative quadrature tolerance.
    pub path_tol: f64,
    /// Terms in the certified lower sums.
    pub lower_sum_terms: usize,
    /// Divergence is declared only past all of these.
    pub thresholds: Vec<f64>,
}

impl Default for CompletenessParams {
    fn default() -> Self {
        CompletenessParams {
            path_tol: 1e-6,
            lower_sum_terms: 4096,
            thresholds: vec![1.0, 2.0, 4.0],
        }
    }
}

/// Measure fiber lengths `τ = tau_start → boundary ∓ ε` along the vertical
/// line `x = x0` for every `ε`, certify each from below, and decide
/// divergence.
pub fn completeness_probe(
    metric: &MetricField<f64>,
    x0: f64,
    tau_start: f64,
    side: BoundarySide,
    epsilons: &[f64],
    params: &CompletenessParams,
) -> Result<DivergenceReport> {
    let MetricField::Conformal { profile, .. } = metric else {
        return Err(Error::ProbeSetup(
            "completeness probe needs a conformal metric".into(),
        ));
    };
    let profile = *profile;
    let (lo, hi) = profile.domain_interval::<f64>();
    let fiber_ok = match profile {
        ConformalProfile::Band => x0 > 0.0,
        ConformalProfile::Hyperbola => x0 != 0.0,
    };
    if !fiber_ok {
        return Err(Error::ProbeSetup(format!(
            "fiber x = {x0} does not cross the domain toward its boundary"
        )));
    }
    if !(tau_start > lo && tau_start < hi) {
        return Err(Error::ProbeSetup(format!(
            "tau_start = {tau_start} is not interior to ({lo}, {hi})"
        )));
    }
    if epsilons.is_empty() {
        return Err(Error::ProbeSetup("need at least one epsilon".into()));
    }
    let boundary = match side {
        BoundarySide::Upper => hi,
        BoundarySide::Lower => lo,
    };
    let mut eps_sorted: Vec<f64> = epsilons.to_vec();
    for &e in &eps_sorted {
        if !(e > 0.0) {
            return Err(Error::ProbeSetup(format!("epsilon {e} must be positive")));
        }
        let target = match side {
            BoundarySide::Upper => boundary - e,
            BoundarySide::Lower => boundary + e,
        };
        let reaches_past_start = match side {
            BoundarySide::Upper => target <= tau_start,
            BoundarySide::Lower => target >= tau_start,
        };
        if reaches_past_start || target <= lo || target >= hi {
            return Err(Error::ProbeSetup(format!(
                "epsilon {e} puts the target level outside ({lo}, {hi}) past tau_start"
            )));
        }
    }
    eps_sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite epsilons"));
    eps_sorted.dedup();

    let measurements: Result<Vec<(f64, f64, bool)>> = eps_sorted
        .par_iter()
        .map(|&eps| {
            let target = match side {
                BoundarySide::Upper => boundary - eps,
                BoundarySide::Lower => boundary + eps,
            };
            let a = Point::new(x0, tau_start / x0);
            let b = Point::new(x0, target / x0);
            let fiber = Curve::segment(a, b)?;
            let report = metric.path_length(&fiber, params.path_tol)?;
            let (t_lo, t_hi) = (tau_start.min(target), tau_start.max(target));
            let bound = certified_lower_bound(
                profile,
                t_lo,
                t_hi,
                params.lower_sum_terms,
                x0.abs().recip(),
            )?;
            Ok((report.value, bound, report.truncated))
        })
        .collect();
    let measurements = measurements?;

    let lengths: Vec<f64> = measurements.iter().map(|m| m.0).collect();
    let bounds: Vec<f64> = measurements.iter().map(|m| m.1).collect();
    let truncated = measurements.iter().any(|m| m.2);

    let monotone = lengths.windows(2).all(|w| w[1] > w[0]);
    let dominated = lengths.iter().zip(&bounds).all(|(l, b)| l + 1e-9 >= *b);
    let past_thresholds = params
        .thresholds
        .iter()
        .all(|t| lengths.last().copied().unwrap_or(0.0) > *t);
    let verdict = if eps_sorted.len() >= 2 && monotone && dominated && past_thresholds {
        DivergenceVerdict::Diverges
    } else {
        DivergenceVerdict::Inconclusive
    };

    Ok(DivergenceReport {
        epsilons: eps_sorted,
        lengths,
        certified_lower_bounds: bounds,
        thresholds: params.thresholds.clone(),
        verdict,
        truncated,
    })
}

/// Certified lower bound for `scale·∫_{lo}^{hi} φ`, splitting at the
/// profile's minimum and exploiting the exact symmetry of both profiles so
/// each piece is a left sum on a nondecreasing stretch.
pub fn certified_lower_bound(
    profile: ConformalProfile,
    lo: f64,
    hi: f64,
    terms: usize,
    scale: f64,
) -> Result<f64> {
    let m = profile.minimum_point::<f64>();
    let reflect = |a: f64, b: f64| (2.0 * m - b, 2.0 * m - a);
    if hi <= m {
        let (a, b) = reflect(lo, hi);
        lower_sum_bound(profile, a, b, terms, scale)
    } else if lo >= m {
        lower_sum_bound(profile, lo, hi, terms, scale)
    } else {
        let (a, b) = reflect(lo, m);
        Ok(lower_sum_bound(profile, a, b, terms, scale)?
            + lower_sum_bound(profile, m, hi, terms, scale)?)
    }
}

/// Probe verdicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeVerdict {
    Pass,
    Fail,
}

/// Per-iterate statistics of measured norm ratios.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RatioStats {
    pub n: u32,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

/// Measured expansion/contraction rates against the fitted bounds.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HyperbolicityReport {
    pub n_max: u32,
    pub sample_count: usize,
    pub unstable: Vec<RatioStats>,
    pub stable: Vec<RatioStats>,
    pub fitted_lambda: f64,
    pub fitted_c: f64,
    pub verdict: ProbeVerdict,
}

/// Push unit leaf-tangent vectors through `n ≤ n_max` iterates of the map at
/// `n_samples` random domain points, measure metric norm ratios, and fit the
/// constants `C` and `λ` by least squares on the log-ratios.
///
/// The verdict passes when `λ > 1` and every measured ratio satisfies the
/// two-sided bound with the fitted constants (up to 1e−9 slack).
pub fn hyperbolicity_probe<R: Rng + ?Sized>(
    structure: &AnosovStructure,
    n_max: u32,
    n_samples: usize,
    rng: &mut R,
) -> Result<HyperbolicityReport> {
    if n_max == 0 || n_samples == 0 {
        return Err(Error::ProbeSetup(
            "hyperbolicity probe needs n_max ≥ 1 and at least one sample".into(),
        ));
    }
    let domain = structure.metric_domain();
    let window = structure.probe_window();
    let points = sample_points_in(rng, &domain, &window, n_samples);

    let ratios: Result<Vec<(Vec<f64>, Vec<f64>)>> = points
        .par_iter()
        .map(|&p| {
            let (es, eu) = structure.chart_tangents(p);
            let mut per_point = (Vec::with_capacity(n_max as usize), Vec::with_capacity(n_max as usize));
            for (dir, out) in [(es, &mut per_point.0), (eu, &mut per_point.1)] {
                let v0 = TangentVector::new(p, dir.x, dir.y);
                let norm0 = structure.metric.norm(&v0).map_err(escape(p))?;
                let mut v = v0;
                for _ in 1..=n_max {
                    v = structure.map.differential(v);
                    let norm = structure.metric.norm(&v).map_err(escape(v.base))?;
                    out.push(norm / norm0);
                }
            }
            Ok((per_point.0, per_point.1))
        })
        .collect();
    let ratios = ratios?;

    let stats = |select: fn(&(Vec<f64>, Vec<f64>)) -> &Vec<f64>| -> Vec<RatioStats> {
        (0..n_max as usize)
            .map(|i| {
                let values = ratios.iter().map(|r| select(r)[i]);
                let mut min = f64::INFINITY;
                let mut max = f64::NEG_INFINITY;
                let mut sum = 0.0;
                let mut count = 0usize;
                for v in values {
                    min = min.min(v);
                    max = max.max(v);
                    sum += v;
                    count += 1;
                }
                RatioStats {
                    n: (i + 1) as u32,
                    min,
                    max,
                    mean: sum / count as f64,
                }
            })
            .collect()
    };
    let stable_stats = stats(|r| &r.0);
    let unstable_stats = stats(|r| &r.1);

    let fit = |select: fn(&(Vec<f64>, Vec<f64>)) -> &Vec<f64>| -> (f64, f64) {
        // least squares of ln r against n
        let mut sx = 0.0;
        let mut sy = 0.0;
        let mut sxx = 0.0;
        let mut sxy = 0.0;
        let mut count = 0.0;
        for r in &ratios {
            for (i, &v) in select(r).iter().enumerate() {
                let n = (i + 1) as f64;
                let y = v.ln();
                sx += n;
                sy += y;
                sxx += n * n;
                sxy += n * y;
                count += 1.0;
            }
        }
        let denom = count * sxx - sx * sx;
        if denom == 0.0 {
            // single iterate depth: read the rate off directly, C = 1
            return (sy / sx, 0.0);
        }
        let slope = (count * sxy - sx * sy) / denom;
        let intercept = (sy - slope * sx) / count;
        (slope, intercept)
    };
    let (slope_s, intercept_s) = fit(|r| &r.0);
    let (slope_u, intercept_u) = fit(|r| &r.1);
    let fitted_lambda = (0.5 * (slope_u - slope_s)).exp();
    let fitted_c = (0.5 * (intercept_u + intercept_s)).exp();

    let slack = 1e-9;
    let bounds_hold = ratios.iter().all(|r| {
        r.1.iter().enumerate().all(|(i, &v)| {
            v >= fitted_c * fitted_lambda.powi(i as i32 + 1) * (1.0 - slack)
        }) && r.0.iter().enumerate().all(|(i, &v)| {
            v <= fitted_c * fitted_lambda.powi(-(i as i32 + 1)) * (1.0 + slack)
        })
    });
    let verdict = if fitted_lambda > 1.0 && bounds_hold {
        ProbeVerdict::Pass
    } else {
        ProbeVerdict::Fail
    };

    Ok(HyperbolicityReport {
        n_max,
        sample_count: points.len(),
        unstable: unstable_stats,
        stable: stable_stats,
        fitted_lambda,
        fitted_c,
        verdict,
    })
}

fn escape(p: Point<f64>) -> impl Fn(Error) -> Error {
    move |err| match err {
        Error::OutsideDomain { .. } => Error::SampleEscaped { x: p.x, y: p.y },
        other => other,
    }
}
