//! The five concrete Anosov structures this crate builds and probes.

use serde::{Deserialize, Serialize};

use crate::domains::{Domain, WhiskerSpec};
use crate::foliations::{LeafChart, LeafKind};
use crate::metrics::{MetricField, ThetaProfile};
use crate::plane::{PlaneMap, Point, Rect, Vec2};
use crate::Result;

/// Which of the built-in structures this is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureKind {
    StandardPlane,
    BandU,
    HyperbolaV,
    Whisker,
    Frame,
}

/// A map together with an invariant domain, a complete metric and the
/// transverse pair of foliation charts it respects, plus the constants of
/// the hyperbolicity bounds `‖Dfⁿv‖ ≥ C·λⁿ‖v‖` / `≤ C·λ⁻ⁿ‖v‖`.
#[derive(Clone, Debug)]
pub struct AnosovStructure {
    pub kind: StructureKind,
    pub map: PlaneMap<f64>,
    pub domain: Domain<f64>,
    pub metric: MetricField<f64>,
    pub stable: LeafChart,
    pub unstable: LeafChart,
    pub expansion_constant: f64,
    pub expansion_rate: f64,
}

impl AnosovStructure {
    /// The doubling map on the whole plane with the Euclidean metric and the
    /// vertical/horizontal foliations.
    pub fn standard_plane() -> Self {
        AnosovStructure {
            kind: StructureKind::StandardPlane,
            map: PlaneMap::standard_hyperbolic(),
            domain: Domain::FullPlane,
            metric: MetricField::Euclidean,
            stable: LeafChart::VerticalIn(Domain::FullPlane),
            unstable: LeafChart::HorizontalIn(Domain::FullPlane),
            expansion_constant: 1.0,
            expansion_rate: 2.0,
        }
    }

    /// The doubling map restricted to the invariant band, with the conformal
    /// metric that is complete on it.
    pub fn band_u() -> Self {
        AnosovStructure {
            kind: StructureKind::BandU,
            map: PlaneMap::standard_hyperbolic(),
            domain: Domain::Band,
            metric: MetricField::conformal_band(),
            stable: LeafChart::VerticalIn(Domain::Band),
            unstable: LeafChart::HorizontalIn(Domain::Band),
            expansion_constant: 1.0,
            expansion_rate: 2.0,
        }
    }

    /// The doubling map restricted to the hyperbola-bounded disc around the
    /// origin.
    pub fn hyperbola_v() -> Self {
        AnosovStructure {
            kind: StructureKind::HyperbolaV,
            map: PlaneMap::standard_hyperbolic(),
            domain: Domain::Hyperbola,
            metric: MetricField::conformal_hyperbola(),
            stable: LeafChart::VerticalIn(Domain::Hyperbola),
            unstable: LeafChart::HorizontalIn(Domain::Hyperbola),
            expansion_constant: 1.0,
            expansion_rate: 2.0,
        }
    }

    /// The doubling map on the whiskered band domain. The conformal band
    /// metric transports to the tube orbit only through a deformation that
    /// is never constructed here, so metric evaluations are restricted to
    /// the band portion of the domain; the foliation charts cover all of it.
    pub fn whisker(spec: WhiskerSpec<f64>) -> Result<Self> {
        spec.validate()?;
        let domain = Domain::Whiskered(spec);
        Ok(AnosovStructure {
            kind: StructureKind::Whisker,
            map: PlaneMap::standard_hyperbolic(),
            domain: domain.clone(),
            metric: MetricField::conformal_band(),
            stable: LeafChart::VerticalIn(domain.clone()),
            unstable: LeafChart::HorizontalIn(domain),
            expansion_constant: 1.0,
            expansion_rate: 2.0,
        })
    }

    /// The unit horizontal translation with the rotating-frame metric; the
    /// contraction factor `lambda ∈ (0, 1)` gives expansion rate `1/lambda`.
    pub fn frame(lambda: f64) -> Result<Self> {
        let metric = MetricField::frame(lambda)?;
        let theta = ThetaProfile::default();
        Ok(AnosovStructure {
            kind: StructureKind::Frame,
            map: PlaneMap::unit_translation(),
            domain: Domain::FullPlane,
            metric,
            stable: LeafChart::FrameIntegral {
                theta: theta.clone(),
                kind: LeafKind::Stable,
            },
            unstable: LeafChart::FrameIntegral {
                theta,
                kind: LeafKind::Unstable,
            },
            expansion_constant: 1.0,
            expansion_rate: 1.0 / lambda,
        })
    }

    /// Unit tangent directions of the stable and unstable leaves at `p`.
    pub fn chart_tangents(&self, p: Point<f64>) -> (Vec2<f64>, Vec2<f64>) {
        match (&self.stable, &self.unstable) {
            (LeafChart::FrameIntegral { theta, .. }, _) => {
                let f = theta.frame_at(p.x);
                (f.stable, f.unstable)
            }
            _ => (Vec2::new(0.0, 1.0), Vec2::new(1.0, 0.0)),
        }
    }

    /// Domain on which the structure's metric is evaluable; differs from the
    /// invariant domain only for the whisker structure.
    pub fn metric_domain(&self) -> Domain<f64> {
        match self.kind {
            StructureKind::Whisker => Domain::Band,
            _ => self.domain.clone(),
        }
    }

    /// Default window for sampling-based probes.
    pub fn probe_window(&self) -> Rect<f64> {
        match self.kind {
            StructureKind::Frame => Rect::new(-2.0, 3.0, -3.0, 3.0),
            _ => self.metric_domain().sampling_window(),
        }
    }

    /// Default window for figures and searches: tight around the cell for
    /// whiskered structures, a representative block otherwise.
    pub fn default_window(&self) -> Rect<f64> {
        match self.kind {
            StructureKind::StandardPlane => Rect::new(-2.0, 2.0, -2.0, 2.0),
            StructureKind::BandU => Rect::new(-0.5, 4.0, -0.5, 3.5),
            StructureKind::HyperbolaV => Rect::new(-3.0, 3.0, -3.0, 3.0),
            StructureKind::Whisker => Rect::new(1.02, 1.98, 0.45, 3.3),
            StructureKind::Frame => Rect::new(-0.5, 2.0, -0.5, 3.0),
        }
    }
}
