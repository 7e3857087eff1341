//! Verification suites: completeness and hyperbolicity probes, the
//! accessibility search and its whisker lower bound, prolongational limit
//! sets of the built-in flows, and the quasi-parallelism obstruction.

mod probes;
mod prolongation;
mod reach;
mod reeb;
mod whisker;

pub use probes::{
    certified_lower_bound, completeness_probe, hyperbolicity_probe, BoundarySide,
    CompletenessParams, DivergenceReport, DivergenceVerdict, HyperbolicityReport, ProbeVerdict,
    RatioStats,
};
pub use prolongation::{
    default_deltas, prolongational_limit, FlowField, LimitSample, ProlongationParams,
    ProlongationalSet, TimeDirection, Witness,
};
pub use reach::{
    accessibility, degree_of_inaccessibility, reachable_sets, AccessChain, ReachabilityGrid,
};
pub use reeb::{
    Adjacency, AxisDirection, LimitRelation, ReebGraph, Region, RegionId, RegionKind, Separatrix,
    SeparatrixId,
};
pub use whisker::whisker_lower_bound;
