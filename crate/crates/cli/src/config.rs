//! JSON run configuration. A config file supplies any subset of the fields;
//! command-line flags override file values; everything else falls back to
//! the documented defaults. `schema` is versioned and checked.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use anosov::domains::{default_whisker, WhiskerSpec};
use anosov::foliations::AnosovStructure;
use anosov::plane::{Point, Rect};

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Config schema version; must be 1.
    pub schema: u32,
    /// band-u | hyperbola-v | whisker | frame | standard-plane
    pub structure: Option<String>,
    /// Frame metric contraction factor, in (0, 1).
    pub lambda: f64,
    /// Hump count for the default whisker.
    pub humps: usize,
    /// Full whisker override; takes precedence over `humps`.
    pub whisker: Option<WhiskerSpec<f64>>,
    /// Query window `[x0, x1, y0, y1]`.
    pub window: Option<[f64; 4]>,
    /// Leaf seeds for rendering.
    pub seeds: Option<Vec<[f64; 2]>>,
    /// Grid cells per axis for accessibility searches.
    pub resolution: usize,
    /// Arc cap for accessibility searches.
    pub n_max: u32,
    /// Iterate depth for the hyperbolicity probe.
    pub iterates: u32,
    /// Sample count for the hyperbolicity probe.
    pub samples: usize,
    /// Sampled pairs for degree estimation.
    pub pairs: usize,
    /// Boundary offsets for the completeness probe (sorted internally).
    pub epsilons: Vec<f64>,
    /// Relative quadrature tolerance.
    pub path_tol: f64,
    /// Divergence thresholds.
    pub thresholds: Vec<f64>,
    /// RNG seed for all sampling.
    pub seed: u64,
    /// Ring radii for prolongational limits.
    pub deltas: Vec<f64>,
    /// Flow time horizon for prolongational limits.
    pub t_max: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            schema: CONFIG_SCHEMA_VERSION,
            structure: None,
            lambda: 0.5,
            humps: 3,
            whisker: None,
            window: None,
            seeds: None,
            resolution: 320,
            n_max: 24,
            iterates: 20,
            samples: 1000,
            pairs: 200,
            epsilons: vec![1e-2, 1e-3, 1e-4, 1e-5],
            path_tol: 1e-6,
            thresholds: vec![1.0, 2.0, 4.0],
            seed: 0,
            deltas: vec![0.08, 0.04, 0.02],
            t_max: 260.0,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .with_context(|| format!("invalid config in {}", path.display()))?;
        if cfg.schema != CONFIG_SCHEMA_VERSION {
            bail!(
                "config schema {} is not supported (expected {})",
                cfg.schema,
                CONFIG_SCHEMA_VERSION
            );
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            bail!("lambda: must lie in (0, 1), got {}", self.lambda);
        }
        if self.humps == 0 {
            bail!("humps: must be at least 1");
        }
        if self.resolution < 2 {
            bail!("resolution: must be at least 2");
        }
        if !(self.path_tol > 0.0) {
            bail!("path_tol: must be positive");
        }
        if self.epsilons.iter().any(|e| !(*e > 0.0)) {
            bail!("epsilons: all entries must be positive");
        }
        if self.deltas.iter().any(|d| !(*d > 0.0)) {
            bail!("deltas: all entries must be positive");
        }
        if let Some(w) = self.window {
            if !(w[0] < w[1] && w[2] < w[3]) {
                bail!("window: expected x0 < x1 and y0 < y1, got {w:?}");
            }
        }
        Ok(())
    }

    pub fn window_rect(&self) -> Option<Rect<f64>> {
        self.window.map(|w| Rect::new(w[0], w[1], w[2], w[3]))
    }

    /// Effective whisker spec: the override, or the default with `humps`.
    pub fn whisker_spec(&self) -> Result<WhiskerSpec<f64>> {
        match &self.whisker {
            Some(spec) => {
                spec.validate()?;
                Ok(spec.clone())
            }
            None => Ok(default_whisker(self.humps)?),
        }
    }

    /// Build the configured structure.
    pub fn structure(&self) -> Result<(String, AnosovStructure)> {
        let name = self
            .structure
            .clone()
            .ok_or_else(|| anyhow::anyhow!("structure: missing (set --structure or config)"))?;
        let s = match name.as_str() {
            "standard-plane" => AnosovStructure::standard_plane(),
            "band-u" => AnosovStructure::band_u(),
            "hyperbola-v" => AnosovStructure::hyperbola_v(),
            "whisker" => AnosovStructure::whisker(self.whisker_spec()?)?,
            "frame" => AnosovStructure::frame(self.lambda)?,
            other => bail!(
                "structure: unknown value {other:?} (expected band-u, hyperbola-v, whisker, frame or standard-plane)"
            ),
        };
        Ok((name, s))
    }

    /// Default rendering seeds per structure.
    pub fn default_seeds(&self, s: &AnosovStructure) -> Vec<Point<f64>> {
        use anosov::foliations::StructureKind::*;
        match s.kind {
            StandardPlane => vec![
                Point::new(0.0, 0.0),
                Point::new(1.0, 1.0),
                Point::new(-1.0, 0.5),
            ],
            BandU => [1.0, 1.25, 1.5, 2.0]
                .iter()
                .map(|&x| Point::new(x, 1.5 / x))
                .collect(),
            HyperbolaV => vec![
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.5),
                Point::new(-1.5, 0.3),
                Point::new(2.0, 0.4),
            ],
            Whisker => {
                let spec = self.whisker_spec().expect("validated earlier");
                (0..=spec.hump_count())
                    .filter_map(|j| spec.marked_point(j).ok())
                    .collect()
            }
            Frame => vec![
                Point::new(0.3, 1.0),
                Point::new(0.3, 2.0),
                Point::new(1.3, 1.0),
                Point::new(0.05, 0.5),
                Point::new(0.7, 0.5),
            ],
        }
    }
}

/// Parse `x0,x1,y0,y1`.
pub fn parse_window(s: &str) -> Result<[f64; 4]> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("window: cannot parse {s:?} as x0,x1,y0,y1"))?;
    if parts.len() != 4 {
        bail!("window: expected four comma-separated numbers, got {s:?}");
    }
    Ok([parts[0], parts[1], parts[2], parts[3]])
}

/// Parse a point `x,y`, or a whisker marker `p<j>` when a spec is supplied.
pub fn parse_point(s: &str, whisker: Option<&WhiskerSpec<f64>>) -> Result<Point<f64>> {
    if let Some(rest) = s.strip_prefix('p') {
        if let Ok(j) = rest.parse::<usize>() {
            let spec = whisker.ok_or_else(|| {
                anyhow::anyhow!("marker {s:?} needs the whisker structure")
            })?;
            return Ok(spec.marked_point(j)?);
        }
    }
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        bail!("point: expected x,y or a marker like p0, got {s:?}");
    }
    Ok(Point::new(
        parts[0]
            .parse()
            .with_context(|| format!("point: bad x in {s:?}"))?,
        parts[1]
            .parse()
            .with_context(|| format!("point: bad y in {s:?}"))?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn lambda_out_of_range_is_rejected() {
        let cfg = RunConfig {
            lambda: 1.5,
            ..RunConfig::default()
        };
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("lambda"));
    }

    #[test]
    fn window_parsing() {
        assert_eq!(
            parse_window("-0.5,4,-0.5,3.5").unwrap(),
            [-0.5, 4.0, -0.5, 3.5]
        );
        assert!(parse_window("1,2,3").is_err());
    }

    #[test]
    fn point_and_marker_parsing() {
        assert_eq!(
            parse_point("1.5,2", None).unwrap(),
            Point::new(1.5, 2.0)
        );
        let spec = default_whisker(2).unwrap();
        let p1 = parse_point("p1", Some(&spec)).unwrap();
        assert_eq!(p1, spec.marked_point(1).unwrap());
        assert!(parse_point("p1", None).is_err());
        assert!(parse_point("p9", Some(&spec)).is_err());
    }

    #[test]
    fn whisker_override_takes_precedence_over_humps() {
        let mut spec = default_whisker(2).unwrap();
        spec.width = 0.015;
        let cfg = RunConfig {
            structure: Some("whisker".into()),
            humps: 5,
            whisker: Some(spec.clone()),
            ..RunConfig::default()
        };
        assert_eq!(cfg.whisker_spec().unwrap(), spec);
        let (_, s) = cfg.structure().unwrap();
        assert!(matches!(
            s.domain,
            anosov::domains::Domain::Whiskered(w) if w.width == 0.015
        ));
    }

    #[test]
    fn unknown_config_fields_are_rejected() {
        let err = serde_json::from_str::<RunConfig>(r#"{"schema":1,"bogus":3}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("bogus"));
    }
}
