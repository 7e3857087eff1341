//! Combinatorial encodings of planar Reeb configurations and the
//! quasi-parallelism obstruction.
//!
//! A foliation is quasi-parallel when a homeomorphism carries it onto the
//! components of an open disc's intersection with a family of parallel
//! lines. A single Reeb component admits such a chart. The obstruction
//! pattern is a separatrix whose prolongational limit set (in one time
//! direction) contains the far edges of two distinct Reeb regions whose
//! orbits run along the separatrix in the same direction: both regions
//! would then have to occupy the same half plane over overlapping gaps of
//! the axis, which no embedding allows.
//!
//! # Encoding
//!
//! * Regions are either Reeb components or parallel(izable) strips.
//! * Each separatrix is an oriented boundary leaf with the regions on its
//!   two sides recorded in `adjacency`.
//! * A [`LimitRelation`] `{ of, contains, direction, via, approach }` states
//!   that the separatrix `contains` lies in the prolongational limit set
//!   `𝒥_direction(of)`, witnessed by the orbits of the adjacent Reeb region
//!   `via`, which run along `of` in the `approach` direction.
//!
//! This encoding is the operative definition used by the detector; the
//! numeric flows in [`crate::analysis::prolongation`] produce the same
//! relations for the built-in figures.

use serde::{Deserialize, Serialize};

use crate::analysis::prolongation::TimeDirection;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RegionId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SeparatrixId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionKind {
    Reeb,
    Parallel,
}

/// Direction of travel along a separatrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxisDirection {
    Up,
    Down,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Region {
    pub id: RegionId,
    pub kind: RegionKind,
    pub label: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Separatrix {
    pub id: SeparatrixId,
    pub label: String,
    /// Flow direction along the leaf.
    pub orientation: AxisDirection,
}

/// The two sides of a separatrix.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Adjacency {
    pub separatrix: SeparatrixId,
    pub left: RegionId,
    pub right: RegionId,
}

/// `contains ∈ 𝒥_direction(of)`, witnessed by the Reeb region `via`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LimitRelation {
    pub of: SeparatrixId,
    pub contains: SeparatrixId,
    pub direction: TimeDirection,
    pub via: RegionId,
    pub approach: AxisDirection,
}

/// A labelled Reeb configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReebGraph {
    pub regions: Vec<Region>,
    pub separatrices: Vec<Separatrix>,
    pub adjacency: Vec<Adjacency>,
    pub limit_relations: Vec<LimitRelation>,
}

impl ReebGraph {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::MalformedGraph(msg));
        let region = |id: RegionId| self.regions.iter().find(|r| r.id == id);
        let sep = |id: SeparatrixId| self.separatrices.iter().find(|s| s.id == id);
        for a in &self.adjacency {
            if sep(a.separatrix).is_none() {
                return fail(format!("adjacency references unknown separatrix {:?}", a.separatrix));
            }
            if region(a.left).is_none() || region(a.right).is_none() {
                return fail(format!("adjacency of {:?} references unknown regions", a.separatrix));
            }
            if a.left == a.right {
                return fail(format!(
                    "separatrix {:?} must bound two distinct regions",
                    a.separatrix
                ));
            }
        }
        for s in &self.separatrices {
            let count = self
                .adjacency
                .iter()
                .filter(|a| a.separatrix == s.id)
                .count();
            if count != 1 {
                return fail(format!(
                    "separatrix {:?} needs exactly one adjacency record, found {count}"
                , s.id));
            }
        }
        for rel in &self.limit_relations {
            let (Some(_), Some(_)) = (sep(rel.of), sep(rel.contains)) else {
                return fail("limit relation references an unknown separatrix".into());
            };
            let Some(r) = region(rel.via) else {
                return fail("limit relation references an unknown region".into());
            };
            if r.kind != RegionKind::Reeb {
                return fail(format!(
                    "limit relation witnessed by non-Reeb region {:?}",
                    rel.via
                ));
            }
            let adjacent = self.adjacency.iter().any(|a| {
                a.separatrix == rel.of && (a.left == rel.via || a.right == rel.via)
            });
            if !adjacent {
                return fail(format!(
                    "witness region {:?} is not adjacent to separatrix {:?}",
                    rel.via, rel.of
                ));
            }
        }
        Ok(())
    }

    /// True when some separatrix carries the obstruction pattern: in one
    /// time direction its limit relations name two distinct Reeb regions,
    /// through far edges other than the separatrix itself, approaching with
    /// the same orientation.
    pub fn quasi_parallel_obstruction(&self) -> Result<bool> {
        self.validate()?;
        for s in &self.separatrices {
            for direction in [TimeDirection::Forward, TimeDirection::Backward] {
                let relevant: Vec<&LimitRelation> = self
                    .limit_relations
                    .iter()
                    .filter(|r| r.of == s.id && r.direction == direction && r.contains != s.id)
                    .collect();
                for (i, a) in relevant.iter().enumerate() {
                    for b in &relevant[i + 1..] {
                        if a.via != b.via && a.approach == b.approach {
                            return Ok(true);
                        }
                    }
                }
            }
        }
        Ok(false)
    }

    /// One Reeb component between two parallel outer regions (the single
    /// Reeb figure): quasi-parallelizable.
    pub fn single_reeb() -> Self {
        let regions = vec![
            Region { id: RegionId(0), kind: RegionKind::Reeb, label: "reeb".into() },
            Region { id: RegionId(1), kind: RegionKind::Parallel, label: "outer-left".into() },
            Region { id: RegionId(2), kind: RegionKind::Parallel, label: "outer-right".into() },
        ];
        let separatrices = vec![
            Separatrix { id: SeparatrixId(0), label: "left-edge".into(), orientation: AxisDirection::Down },
            Separatrix { id: SeparatrixId(1), label: "right-edge".into(), orientation: AxisDirection::Up },
        ];
        let adjacency = vec![
            Adjacency { separatrix: SeparatrixId(0), left: RegionId(1), right: RegionId(0) },
            Adjacency { separatrix: SeparatrixId(1), left: RegionId(0), right: RegionId(2) },
        ];
        // forward limits of left-edge points cover the right edge
        let limit_relations = vec![LimitRelation {
            of: SeparatrixId(0),
            contains: SeparatrixId(1),
            direction: TimeDirection::Forward,
            via: RegionId(0),
            approach: AxisDirection::Up,
        }];
        ReebGraph { regions, separatrices, adjacency, limit_relations }
    }

    fn double_reeb(second_approach: AxisDirection) -> Self {
        let regions = vec![
            Region { id: RegionId(0), kind: RegionKind::Reeb, label: "left-component".into() },
            Region { id: RegionId(1), kind: RegionKind::Reeb, label: "right-component".into() },
            Region { id: RegionId(2), kind: RegionKind::Parallel, label: "outer-left".into() },
            Region { id: RegionId(3), kind: RegionKind::Parallel, label: "outer-right".into() },
        ];
        let separatrices = vec![
            Separatrix { id: SeparatrixId(0), label: "far-left-edge".into(), orientation: AxisDirection::Down },
            Separatrix { id: SeparatrixId(1), label: "separating-leaf".into(), orientation: AxisDirection::Up },
            Separatrix { id: SeparatrixId(2), label: "far-right-edge".into(), orientation: AxisDirection::Down },
        ];
        let adjacency = vec![
            Adjacency { separatrix: SeparatrixId(0), left: RegionId(2), right: RegionId(0) },
            Adjacency { separatrix: SeparatrixId(1), left: RegionId(0), right: RegionId(1) },
            Adjacency { separatrix: SeparatrixId(2), left: RegionId(1), right: RegionId(3) },
        ];
        let limit_relations = vec![
            // backward limits of the separating leaf reach both far edges
            LimitRelation {
                of: SeparatrixId(1),
                contains: SeparatrixId(0),
                direction: TimeDirection::Backward,
                via: RegionId(0),
                approach: AxisDirection::Up,
            },
            LimitRelation {
                of: SeparatrixId(1),
                contains: SeparatrixId(2),
                direction: TimeDirection::Backward,
                via: RegionId(1),
                approach: second_approach,
            },
        ];
        ReebGraph { regions, separatrices, adjacency, limit_relations }
    }

    /// Two Reeb components feeding the separating leaf in the same
    /// direction: the obstruction pattern.
    pub fn double_reeb_aligned() -> Self {
        ReebGraph::double_reeb(AxisDirection::Up)
    }

    /// Two Reeb components with opposed orientations around the separating
    /// leaf: the gap-spanning argument places their images in opposite half
    /// planes, so no obstruction.
    pub fn double_reeb_opposed() -> Self {
        ReebGraph::double_reeb(AxisDirection::Down)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_component_is_unobstructed() {
        let g = ReebGraph::single_reeb();
        assert!(!g.quasi_parallel_obstruction().unwrap());
    }

    #[test]
    fn aligned_double_component_is_obstructed() {
        let g = ReebGraph::double_reeb_aligned();
        assert!(g.quasi_parallel_obstruction().unwrap());
    }

    #[test]
    fn opposed_double_component_is_unobstructed() {
        let g = ReebGraph::double_reeb_opposed();
        assert!(!g.quasi_parallel_obstruction().unwrap());
    }

    #[test]
    fn malformed_graphs_are_rejected() {
        let mut g = ReebGraph::single_reeb();
        g.adjacency[0].right = g.adjacency[0].left;
        assert!(g.quasi_parallel_obstruction().is_err());

        let mut g = ReebGraph::single_reeb();
        g.limit_relations[0].via = RegionId(1); // parallel region as witness
        assert!(g.quasi_parallel_obstruction().is_err());

        let mut g = ReebGraph::single_reeb();
        g.adjacency.pop();
        assert!(g.validate().is_err());
    }

    #[test]
    fn self_relations_do_not_trigger_the_detector() {
        let mut g = ReebGraph::double_reeb_opposed();
        // orbits of both components accumulate on the separating leaf itself
        g.limit_relations.push(LimitRelation {
            of: SeparatrixId(1),
            contains: SeparatrixId(1),
            direction: TimeDirection::Backward,
            via: RegionId(0),
            approach: AxisDirection::Up,
        });
        g.limit_relations.push(LimitRelation {
            of: SeparatrixId(1),
            contains: SeparatrixId(1),
            direction: TimeDirection::Backward,
            via: RegionId(1),
            approach: AxisDirection::Up,
        });
        assert!(!g.quasi_parallel_obstruction().unwrap());
    }
}
