//! Acceptance suite: one test per criterion, each printing a pass line.
//! Run with `cargo test -p anosov-cli --test acceptance -- --nocapture`.

use std::f64::consts::FRAC_PI_2;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use anosov::analysis::{
    accessibility, completeness_probe, degree_of_inaccessibility, hyperbolicity_probe,
    prolongational_limit, whisker_lower_bound, BoundarySide, CompletenessParams,
    DivergenceVerdict, FlowField, ProbeVerdict, ProlongationParams, ReebGraph, TimeDirection,
};
use anosov::domains::default_whisker;
use anosov::foliations::{
    is_brouwer_line, leaves_intersect, AnosovStructure, LeafChart, LeafKind,
};
use anosov::metrics::{phi_band, phi_hyp, MetricField, ThetaProfile};
use anosov::plane::{Point, Rect};

fn pass(name: &str) {
    println!("acceptance: {name} ... pass");
}

#[test]
fn profile_minimum_values_are_exact() {
    assert_eq!(phi_band(1.5f64).unwrap(), 4.0);
    assert_eq!(phi_hyp(0.0f64).unwrap(), 2.0);
    pass("conformal profile minima (band 4, hyperbola 2)");
}

#[test]
fn linear_structures_have_exact_expansion_rates() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for structure in [AnosovStructure::band_u(), AnosovStructure::hyperbola_v()] {
        let report = hyperbolicity_probe(&structure, 20, 1000, &mut rng).unwrap();
        assert_eq!(report.verdict, ProbeVerdict::Pass);
        for stats in &report.unstable {
            let expect = 2f64.powi(stats.n as i32);
            assert!(
                (stats.min - expect).abs() <= 1e-12 * expect
                    && (stats.max - expect).abs() <= 1e-12 * expect,
                "{:?} unstable n={} min={} max={}",
                structure.kind,
                stats.n,
                stats.min,
                stats.max
            );
        }
        for stats in &report.stable {
            let expect = 2f64.powi(-(stats.n as i32));
            assert!(
                (stats.min - expect).abs() <= 1e-12 * expect
                    && (stats.max - expect).abs() <= 1e-12 * expect,
                "{:?} stable n={}",
                structure.kind,
                stats.n
            );
        }
    }
    pass("band/hyperbola rates are 2^n and 2^-n to 1e-12");
}

#[test]
fn frame_structure_has_per_step_ratios_two_and_half() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let structure = AnosovStructure::frame(0.5).unwrap();
    let report = hyperbolicity_probe(&structure, 10, 1000, &mut rng).unwrap();
    assert_eq!(report.verdict, ProbeVerdict::Pass);
    for stats in &report.unstable {
        let expect = 2f64.powi(stats.n as i32);
        assert!(
            (stats.min - expect).abs() <= 1e-9 * expect
                && (stats.max - expect).abs() <= 1e-9 * expect,
            "frame unstable n={} min={} max={}",
            stats.n,
            stats.min,
            stats.max
        );
    }
    for stats in &report.stable {
        let expect = 2f64.powi(-(stats.n as i32));
        assert!(
            (stats.min - expect).abs() <= 1e-9 * expect
                && (stats.max - expect).abs() <= 1e-9 * expect
        );
    }
    pass("frame (lambda = 1/2) per-step ratios 2 and 1/2 to 1e-9");
}

#[test]
fn fiber_lengths_diverge_and_match_the_log_oracles() {
    let params = CompletenessParams::default();
    let epsilons: Vec<f64> = (2..=5).map(|k| 10f64.powi(-k)).collect();

    let band = completeness_probe(
        &MetricField::conformal_band(),
        1.0,
        1.5,
        BoundarySide::Upper,
        &epsilons,
        &params,
    )
    .unwrap();
    assert_eq!(band.verdict, DivergenceVerdict::Diverges);
    for (eps, len) in band.epsilons.iter().zip(&band.lengths) {
        let oracle = ((1.0 - eps) / eps).ln();
        assert!((len - oracle).abs() <= 0.01 * oracle, "band ε={eps}");
    }
    assert!(band.lengths.windows(2).all(|w| w[1] > w[0]), "monotone in ε");
    for (len, bound) in band.lengths.iter().zip(&band.certified_lower_bounds) {
        assert!(len + 1e-9 >= *bound, "lower-sum certificate violated");
    }

    let hyp = completeness_probe(
        &MetricField::conformal_hyperbola(),
        1.0,
        0.0,
        BoundarySide::Upper,
        &epsilons,
        &params,
    )
    .unwrap();
    assert_eq!(hyp.verdict, DivergenceVerdict::Diverges);
    for (eps, len) in hyp.epsilons.iter().zip(&hyp.lengths) {
        // ∫ 2/(1−t²) = ln((1+t)/(1−t)), evaluated from 0 to 1−ε
        let t = 1.0 - eps;
        let oracle = ((1.0 + t) / (1.0 - t)).ln();
        assert!((len - oracle).abs() <= 0.01 * oracle, "hyperbola ε={eps}");
    }
    for (len, bound) in hyp.lengths.iter().zip(&hyp.certified_lower_bounds) {
        assert!(len + 1e-9 >= *bound);
    }
    pass("completeness: fiber lengths track log((1-e)/e) within 1% and dominate certificates");
}

#[test]
fn leaf_intersection_dichotomy() {
    let window = Rect::new(-10.0, 10.0, -10.0, 10.0);
    let v = LeafChart::VerticalIn(anosov::domains::Domain::FullPlane);
    let h = LeafChart::HorizontalIn(anosov::domains::Domain::FullPlane);
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..1000 {
        let p = Point::new(rng.gen_range(-8.0..8.0), rng.gen_range(-8.0..8.0));
        let q = Point::new(rng.gen_range(-8.0..8.0), rng.gen_range(-8.0..8.0));
        let stable = v.leaf_through(p, &window).unwrap();
        let unstable = h.leaf_through(q, &window).unwrap();
        assert!(
            leaves_intersect(&stable, &unstable).is_some(),
            "full-plane leaves through {p:?}, {q:?} must cross"
        );
    }

    let v = LeafChart::VerticalIn(anosov::domains::Domain::Hyperbola);
    let h = LeafChart::HorizontalIn(anosov::domains::Domain::Hyperbola);
    let stable = v.leaf_through(Point::new(2.0, 0.4), &window).unwrap();
    let unstable = h.leaf_through(Point::new(0.2, 3.0), &window).unwrap();
    assert!(
        leaves_intersect(&stable, &unstable).is_none(),
        "off-axis leaf pair with |x| > 1/y must miss"
    );
    pass("leaf dichotomy: 1000 full-plane pairs cross, hyperbola witness pair misses");
}

#[test]
fn brouwer_lines_vertical_yes_u_leaf_no() {
    let map = anosov::plane::PlaneMap::standard_hyperbolic();
    let chart = LeafChart::VerticalIn(anosov::domains::Domain::Band);
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..20 {
        let x0: f64 = rng.gen_range(0.7..2.5);
        let t: f64 = rng.gen_range(1.1..1.9);
        let window = Rect::new(0.4 * x0, 2.2 * x0, 0.4 / x0, 4.4 / x0);
        let leaf = chart
            .leaf_through(Point::new(x0, t / x0), &window)
            .unwrap();
        assert!(
            is_brouwer_line(&leaf.trace, &map, &window).unwrap(),
            "vertical band leaf at x0={x0} must be a Brouwer line"
        );
    }

    let theta = ThetaProfile::default();
    let chart = LeafChart::FrameIntegral {
        theta,
        kind: LeafKind::Unstable,
    };
    let window = Rect::new(-1.5, 2.5, -1.0, 6.0);
    let u_leaf = chart.leaf_through(Point::new(0.3, 1.0), &window).unwrap();
    let translation = anosov::plane::PlaneMap::translation(1.0).unwrap();
    assert!(!is_brouwer_line(&u_leaf.trace, &translation, &window).unwrap());
    pass("Brouwer lines: 20 vertical band leaves pass, U-shaped frame leaf fails");
}

#[test]
fn accessibility_degree_and_whisker_chains() {
    let standard = AnosovStructure::standard_plane();
    let window = Rect::new(-2.0, 2.0, -2.0, 2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let (max, saturated) =
        degree_of_inaccessibility(&standard, 1000, window, 64, 8, &mut rng).unwrap();
    assert!(!saturated);
    assert_eq!(max, 2, "standard plane degree");

    for k in 1..=3usize {
        let spec = default_whisker(k).unwrap();
        let s = AnosovStructure::whisker(spec.clone()).unwrap();
        let window = Rect::new(1.02, 1.98, 0.45, 3.3);
        let p0 = spec.marked_point(0).unwrap();
        let pk = spec.marked_point(k).unwrap();
        let bound = whisker_lower_bound(&spec, k).unwrap();
        assert_eq!(bound, 2 * k as u32 + 1);
        let base = accessibility(&s, p0, pk, window, 320, 16)
            .unwrap()
            .unwrap_or_else(|| panic!("marked points not joined for k={k}"));
        assert_eq!(base.len() as u32, bound, "chain length for k={k}");
        assert!(base.verify(&s).unwrap(), "chain arcs must lie on leaves");
        let refined = accessibility(&s, p0, pk, window, 640, 16)
            .unwrap()
            .expect("refined grid still joins the marked points");
        assert_eq!(refined.len(), base.len(), "grid refinement changed k={k}");
    }
    pass("accessibility: degree 2 on the plane, whisker chains hit 2k+1 for k = 1..3");
}

#[test]
fn quasi_parallel_obstruction_matches_the_three_figures() {
    assert!(!ReebGraph::single_reeb().quasi_parallel_obstruction().unwrap());
    assert!(ReebGraph::double_reeb_aligned()
        .quasi_parallel_obstruction()
        .unwrap());
    assert!(!ReebGraph::double_reeb_opposed()
        .quasi_parallel_obstruction()
        .unwrap());
    pass("obstruction: single false, aligned double true, opposed double false");
}

#[test]
fn prolongational_limits_cluster_on_the_right_edge_only() {
    let params = ProlongationParams {
        step: 0.02,
        ..ProlongationParams::default()
    };
    let deltas = [0.08, 0.04, 0.02];
    let set = prolongational_limit(
        FlowField::ReebSingle,
        Point::new(-FRAC_PI_2, 0.0),
        TimeDirection::Forward,
        &deltas,
        260.0,
        &params,
    )
    .unwrap();
    assert!(set.samples.len() >= 3, "left-edge point must accumulate");
    for s in &set.samples {
        assert!(
            (s.point.x - FRAC_PI_2).abs() <= params.grid_tol + 0.01,
            "sample {:?} not on the right edge",
            s.point
        );
    }
    for p in [Point::new(0.0, 1.5), Point::new(2.5, 0.0)] {
        let set = prolongational_limit(
            FlowField::ReebSingle,
            p,
            TimeDirection::Forward,
            &deltas,
            260.0,
            &params,
        )
        .unwrap();
        assert!(set.samples.is_empty(), "interior point {p:?} must be empty");
    }
    pass("prolongational limits: right-edge cluster for edge points, empty interior");
}

#[test]
fn fixed_seed_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run_svg = |name: &str| {
        let path = dir.path().join(name);
        let out = Command::new(env!("CARGO_BIN_EXE_anosov"))
            .args([
                "render",
                "--structure",
                "band-u",
                "--window",
                "-0.5,4,-0.5,3.5",
                "--out",
                path.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        std::fs::read(path).unwrap()
    };
    assert_eq!(run_svg("a.svg"), run_svg("b.svg"), "SVG bytes must repeat");

    let run_report = || {
        let out = Command::new(env!("CARGO_BIN_EXE_anosov"))
            .args([
                "verify",
                "--structure",
                "hyperbola-v",
                "--samples",
                "60",
                "--iterates",
                "8",
                "--seed",
                "7",
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        let mut value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        value.as_object_mut().unwrap().remove("timings");
        serde_json::to_string_pretty(&value).unwrap()
    };
    assert_eq!(run_report(), run_report(), "reports must repeat modulo timings");
    pass("determinism: byte-identical SVG and timing-free identical reports");
}
