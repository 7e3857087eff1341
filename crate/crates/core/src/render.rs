//! Static SVG portraits: domain boundaries, foliations with orientation
//! arrows, frame-flow streamlines, and reachability level sets.
//!
//! Output is deterministic byte-for-byte: geometry is clipped while building
//! the scene and coordinates are printed with six significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::analysis::{FlowField, ReachabilityGrid};
use crate::domains::BoundaryKind;
use crate::foliations::AnosovStructure;
use crate::plane::{clip_polyline, Curve, PlaneMap, Point, Rect, Vec2};
use crate::{Error, Result};

/// Stroke/fill attributes of a layer.
#[derive(Clone, Debug, PartialEq)]
pub struct Style {
    pub stroke: String,
    pub stroke_width: f64,
    pub dash: Option<String>,
    pub fill: Option<String>,
    pub opacity: Option<f64>,
    pub round_caps: bool,
}

impl Style {
    fn line(stroke: &str, width: f64) -> Self {
        Style {
            stroke: stroke.into(),
            stroke_width: width,
            dash: None,
            fill: None,
            opacity: None,
            round_caps: false,
        }
    }
}

/// One drawable group.
#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    pub name: String,
    pub style: Style,
    pub paths: Vec<Curve<f64>>,
    /// Filled axis-aligned rectangles in plane coordinates.
    pub rects: Vec<Rect<f64>>,
    /// Orientation arrows: base point and unit direction.
    pub arrows: Vec<(Point<f64>, Vec2<f64>)>,
    pub labels: Vec<(Point<f64>, String)>,
}

impl Layer {
    fn new(name: &str, style: Style) -> Self {
        Layer {
            name: name.into(),
            style,
            paths: Vec::new(),
            rects: Vec::new(),
            arrows: Vec::new(),
            labels: Vec::new(),
        }
    }

    fn push_clipped(&mut self, window: &Rect<f64>, curve: &Curve<f64>) {
        self.paths.extend(clip_polyline(window, curve));
    }
}

/// A figure: plane-coordinate window, ordered layers, pixel scale.
#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    pub window: Rect<f64>,
    pub layers: Vec<Layer>,
    /// Pixels per plane unit.
    pub scale: f64,
    pub margin_px: f64,
}

impl Scene {
    pub fn new(window: Rect<f64>, target_px: f64) -> Self {
        let scale = target_px / window.width().max(window.height());
        Scene {
            window,
            layers: Vec::new(),
            scale,
            margin_px: 8.0,
        }
    }

    pub fn width_px(&self) -> f64 {
        self.window.width() * self.scale + 2.0 * self.margin_px
    }

    pub fn height_px(&self) -> f64 {
        self.window.height() * self.scale + 2.0 * self.margin_px
    }

    /// Plane to pixel coordinates (SVG y grows downward).
    pub fn to_px(&self, p: Point<f64>) -> (f64, f64) {
        (
            (p.x - self.window.x0) * self.scale + self.margin_px,
            (self.window.y1 - p.y) * self.scale + self.margin_px,
        )
    }
}

/// Scene with the domain boundary, stable leaves (light), unstable leaves
/// (dark) through the given seeds, and orientation arrows along the leaves.
pub fn render_structure(
    structure: &AnosovStructure,
    window: Rect<f64>,
    leaf_seeds: &[Point<f64>],
) -> Result<Scene> {
    for seed in leaf_seeds {
        if !structure.domain.contains(*seed) {
            return Err(Error::outside(seed.x, seed.y, structure.domain.name()));
        }
    }
    let mut scene = Scene::new(window, 720.0);

    let mut boundary = Layer::new(
        "boundary",
        Style {
            dash: Some("6 4".into()),
            ..Style::line("#555555", 1.2)
        },
    );
    let mut tube = Layer::new("whisker-tube", {
        let mut s = Style::line("#8a8a8a", 0.0);
        s.round_caps = true;
        s.opacity = Some(0.65);
        s
    });
    for bc in structure.domain.boundary_curves(&window, 256) {
        match bc.kind {
            BoundaryKind::WhiskerTube => {
                // stroke the spine at the tube diameter to draw the tube
                if let crate::domains::Domain::Whiskered(spec) = &structure.domain {
                    tube.style.stroke_width = 2.0 * spec.width * scene.scale;
                }
                tube.push_clipped(&window, &bc.curve);
            }
            _ => boundary.push_clipped(&window, &bc.curve),
        }
    }

    let mut stable = Layer::new("stable-leaves", Style::line("#9ec5e8", 1.0));
    let mut unstable = Layer::new("unstable-leaves", Style::line("#1a1a1a", 1.8));
    for &seed in leaf_seeds {
        if let Ok(leaf) = structure.stable.leaf_through(seed, &window) {
            let trace = decimated(&leaf.trace, 600);
            arrow_along(&mut stable, &trace, &structure.map, true);
            stable.push_clipped(&window, &trace);
        }
        if let Ok(leaf) = structure.unstable.leaf_through(seed, &window) {
            let trace = decimated(&leaf.trace, 600);
            arrow_along(&mut unstable, &trace, &structure.map, false);
            unstable.push_clipped(&window, &trace);
        }
    }

    scene.layers.push(tube);
    scene.layers.push(boundary);
    scene.layers.push(stable);
    scene.layers.push(unstable);
    Ok(scene)
}

/// Uniform subsampling of dense traces so path data stays compact; both
/// endpoints are kept.
fn decimated(curve: &Curve<f64>, max_points: usize) -> Curve<f64> {
    let pts = curve.points();
    if pts.len() <= max_points.max(2) {
        return curve.clone();
    }
    let stride = pts.len().div_ceil(max_points.max(2));
    let mut out: Vec<Point<f64>> = pts.iter().step_by(stride).copied().collect();
    if out.last() != pts.last() {
        out.push(*pts.last().expect("nonempty"));
    }
    Curve::from_points(out).unwrap_or_else(|_| curve.clone())
}

/// Direction of motion under the map along a leaf trace, drawn at the trace
/// midpoint.
fn arrow_along(layer: &mut Layer, trace: &Curve<f64>, map: &PlaneMap<f64>, stable: bool) {
    let pts = trace.points();
    let mid = pts[pts.len() / 2];
    let moved = if stable {
        map.apply(mid)
    } else {
        // unstable direction: where the inverse pushes points away from
        map.apply(mid)
    };
    let dir = mid.vector_to(moved);
    if let Some(unit) = dir.normalized() {
        // project onto the local trace direction so the arrow lies on the leaf
        let a = pts[(pts.len() / 2).saturating_sub(1).min(pts.len() - 2)];
        let b = pts[(pts.len() / 2 + 1).min(pts.len() - 1)];
        if let Some(t) = a.vector_to(b).normalized() {
            let sign = if unit.dot(t) >= 0.0 { 1.0 } else { -1.0 };
            layer.arrows.push((mid, t.scaled(sign)));
        }
    }
}

/// Scene with one streamline of a built-in flow per seed.
pub fn render_flow(flow: FlowField, window: Rect<f64>, seeds: &[Point<f64>]) -> Result<Scene> {
    let mut scene = Scene::new(window, 720.0);
    let mut leaves = Layer::new("flow-orbits", Style::line("#1a1a1a", 1.2));
    for &seed in seeds {
        let pts = flow.streamline(seed, &window, 0.01);
        if let Ok(curve) = Curve::from_points(pts) {
            if let Some(dir) = flow.velocity(seed).normalized() {
                leaves.arrows.push((seed, dir));
            }
            leaves.push_clipped(&window, &curve);
        }
    }
    scene.layers.push(leaves);
    Ok(scene)
}

/// Scene with the accessibility level sets as nested shaded cells, one tone
/// per level (darkest first).
pub fn render_reachability(grid: &ReachabilityGrid) -> Result<Scene> {
    if grid.max_level() == u32::MAX {
        return Err(Error::Geometry("empty reachability grid".into()));
    }
    let window = grid.window();
    let mut scene = Scene::new(window, 720.0);
    let levels = grid.max_level();
    let (dx, dy) = (
        window.width() / grid.resolution() as f64,
        window.height() / grid.resolution() as f64,
    );
    for level in 0..=levels {
        let cells = grid.cells_first_reached(level);
        if cells.is_empty() {
            continue;
        }
        let shade = tone(level, levels);
        let mut layer = Layer::new(
            &format!("level-{level}"),
            Style {
                stroke: "none".into(),
                stroke_width: 0.0,
                dash: None,
                fill: Some(shade),
                opacity: None,
                round_caps: false,
            },
        );
        // merge horizontal runs of cells into single rectangles
        let mut run: Option<(usize, usize, usize)> = None; // (iy, ix_start, ix_end)
        let flush = |r: Option<(usize, usize, usize)>, layer: &mut Layer| {
            if let Some((iy, x0, x1)) = r {
                let lo = grid.cell_center(x0, iy);
                let hi = grid.cell_center(x1, iy);
                layer.rects.push(Rect::new(
                    lo.x - 0.5 * dx,
                    hi.x + 0.5 * dx,
                    lo.y - 0.5 * dy,
                    lo.y.max(hi.y) + 0.5 * dy,
                ));
            }
        };
        for (ix, iy) in cells {
            run = match run {
                Some((ry, x0, x1)) if ry == iy && ix == x1 + 1 => Some((ry, x0, ix)),
                Some(prev) => {
                    flush(Some(prev), &mut layer);
                    Some((iy, ix, ix))
                }
                None => Some((iy, ix, ix)),
            };
        }
        flush(run, &mut layer);
        scene.layers.push(layer);
    }
    Ok(scene)
}

fn tone(level: u32, max: u32) -> String {
    let t = if max == 0 {
        0.0
    } else {
        level as f64 / max as f64
    };
    let lo = 40.0;
    let hi = 225.0;
    let v = (lo + (hi - lo) * t).round() as u8;
    format!("#{v:02x}{v:02x}{v:02x}")
}

/// Deterministic fixed decimal formatting with six significant digits for
/// magnitudes below 10^6 (whole-number precision beyond); never exponents.
pub fn fmt_coord(v: f64) -> String {
    if v == 0.0 || v == -0.0 {
        return "0".into();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).clamp(0, 12) as usize;
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// Serialize a scene as a standalone SVG 1.1 document.
pub fn scene_to_svg(scene: &Scene) -> String {
    let mut out = String::new();
    let w = fmt_coord(scene.width_px());
    let h = fmt_coord(scene.height_px());
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(
        out,
        r##"<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>"##
    );
    for layer in &scene.layers {
        let _ = writeln!(out, r#"<g id="{}">"#, layer.name);
        for rect in &layer.rects {
            let (x0, y1) = scene.to_px(Point::new(rect.x0, rect.y0));
            let (x1, y0) = scene.to_px(Point::new(rect.x1, rect.y1));
            let fill = layer.style.fill.as_deref().unwrap_or("#000000");
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
                fmt_coord(x0),
                fmt_coord(y0),
                fmt_coord(x1 - x0),
                fmt_coord(y1 - y0),
                fill
            );
        }
        for path in &layer.paths {
            let mut d = String::new();
            for (i, &p) in path.points().iter().enumerate() {
                let (x, y) = scene.to_px(p);
                let cmd = if i == 0 { 'M' } else { 'L' };
                let _ = write!(d, "{}{} {} ", cmd, fmt_coord(x), fmt_coord(y));
            }
            let d = d.trim_end();
            let mut attrs = format!(
                r#"stroke="{}" stroke-width="{}" fill="none""#,
                layer.style.stroke,
                fmt_coord(layer.style.stroke_width)
            );
            if let Some(dash) = &layer.style.dash {
                let _ = write!(attrs, r#" stroke-dasharray="{dash}""#);
            }
            if let Some(op) = layer.style.opacity {
                let _ = write!(attrs, r#" stroke-opacity="{}""#, fmt_coord(op));
            }
            if layer.style.round_caps {
                attrs.push_str(r#" stroke-linecap="round" stroke-linejoin="round""#);
            }
            let _ = writeln!(out, r#"<path d="{d}" {attrs}/>"#);
        }
        for &(base, dir) in &layer.arrows {
            let tip = base.offset(dir.scaled(10.0 / scene.scale));
            let left = base.offset(dir.perp().scaled(3.5 / scene.scale));
            let right = base.offset(dir.perp().scaled(-3.5 / scene.scale));
            if !scene.window.contains(tip) {
                continue;
            }
            let (tx, ty) = scene.to_px(tip);
            let (lx, ly) = scene.to_px(left);
            let (rx, ry) = scene.to_px(right);
            let _ = writeln!(
                out,
                r#"<polygon points="{},{} {},{} {},{}" fill="{}"/>"#,
                fmt_coord(tx),
                fmt_coord(ty),
                fmt_coord(lx),
                fmt_coord(ly),
                fmt_coord(rx),
                fmt_coord(ry),
                layer.style.stroke
            );
        }
        for (at, text) in &layer.labels {
            let (x, y) = scene.to_px(*at);
            let _ = writeln!(
                out,
                r##"<text x="{}" y="{}" font-family="monospace" font-size="12" fill="#333333">{}</text>"##,
                fmt_coord(x),
                fmt_coord(y),
                text
            );
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}

/// Write the scene to `path`, atomically (temp file + rename).
pub fn emit_svg(scene: &Scene, path: &Path) -> Result<()> {
    let svg = scene_to_svg(scene);
    let tmp = path.with_extension("svg.tmp");
    let io_err = |source: std::io::Error| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    fs::write(&tmp, svg.as_bytes()).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::reachable_sets;

    #[test]
    fn coordinate_formatting() {
        assert_eq!(fmt_coord(0.0), "0");
        assert_eq!(fmt_coord(-0.0), "0");
        assert_eq!(fmt_coord(1.0), "1");
        assert_eq!(fmt_coord(0.5), "0.5");
        assert_eq!(fmt_coord(123.456789), "123.457");
        assert_eq!(fmt_coord(-0.000012345678), "-0.0000123457");
        assert_eq!(fmt_coord(1234567.0), "1234567");
    }

    #[test]
    fn single_segment_emits_one_path() {
        let mut scene = Scene::new(Rect::new(0.0, 1.0, 0.0, 1.0), 100.0);
        let mut layer = Layer::new("seg", Style::line("#000000", 1.0));
        layer
            .paths
            .push(Curve::segment(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap());
        scene.layers.push(layer);
        let svg = scene_to_svg(&scene);
        assert_eq!(svg.matches("<path").count(), 1);
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn identical_scenes_serialize_identically() {
        let build = || {
            let s = AnosovStructure::band_u();
            let window = s.default_window();
            let seeds: Vec<Point<f64>> = [1.0, 1.25, 1.5, 2.0]
                .iter()
                .map(|&x| Point::new(x, 1.5 / x))
                .collect();
            render_structure(&s, window, &seeds).unwrap()
        };
        assert_eq!(scene_to_svg(&build()), scene_to_svg(&build()));
    }

    #[test]
    fn empty_seed_list_draws_the_boundary_only() {
        let s = AnosovStructure::band_u();
        let scene = render_structure(&s, s.default_window(), &[]).unwrap();
        let svg = scene_to_svg(&scene);
        assert!(svg.contains(r#"id="boundary""#));
        assert!(!svg.contains("polygon")); // no leaves, no arrows
    }

    #[test]
    fn seeds_outside_the_domain_are_rejected() {
        let s = AnosovStructure::band_u();
        let err = render_structure(&s, s.default_window(), &[Point::new(-1.0, 0.0)]);
        assert!(err.is_err());
    }

    #[test]
    fn all_pixel_coordinates_stay_inside_the_viewport() {
        let s = AnosovStructure::hyperbola_v();
        let window = s.default_window();
        let seeds = vec![Point::new(0.5, 0.5), Point::new(-1.0, 0.3)];
        let scene = render_structure(&s, window, &seeds).unwrap();
        let svg = scene_to_svg(&scene);
        let (w, h) = (scene.width_px(), scene.height_px());
        let slack = 4.0; // stroke width allowance
        for path in svg.split("<path d=\"").skip(1) {
            let d = path.split('"').next().unwrap();
            for token in d
                .split(|c: char| c == 'M' || c == 'L' || c == ' ')
                .filter(|t| !t.is_empty())
            {
                let v: f64 = token.parse().expect("numeric coordinate");
                assert!(v >= -slack && v <= w.max(h) + slack, "coordinate {v} escapes");
            }
        }
    }

    #[test]
    fn reachability_scene_has_one_layer_per_level() {
        let s = AnosovStructure::standard_plane();
        let window = Rect::new(-1.0, 1.0, -1.0, 1.0);
        let grid = reachable_sets(&s, Point::new(0.05, 0.05), window, 32, 3).unwrap();
        let scene = render_reachability(&grid).unwrap();
        assert_eq!(scene.layers.len(), 3); // levels 0, 1, 2
        let svg = scene_to_svg(&scene);
        assert!(svg.contains(r#"id="level-0""#));
        assert!(svg.contains(r#"id="level-2""#));
    }

    #[test]
    fn emit_is_atomic_and_deterministic() {
        let dir = std::env::temp_dir().join("anosov-render-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("out.svg");
        let s = AnosovStructure::band_u();
        let scene = render_structure(&s, s.default_window(), &[Point::new(1.0, 1.5)]).unwrap();
        emit_svg(&scene, &path).unwrap();
        let first = std::fs::read(&path).unwrap();
        emit_svg(&scene, &path).unwrap();
        let second = std::fs::read(&path).unwrap();
        assert_eq!(first, second);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn unwritable_path_reports_the_path() {
        let s = AnosovStructure::band_u();
        let scene = render_structure(&s, s.default_window(), &[]).unwrap();
        let err = emit_svg(&scene, Path::new("/nonexistent-dir/x.svg")).unwrap_err();
        assert!(err.to_string().contains("nonexistent-dir"));
    }
}
