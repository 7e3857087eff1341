//! Grid-based accessibility search.
//!
//! Points are `n`-accessible when a chain of `n` arcs, each inside a single
//! stable or unstable leaf, joins them. The search floods a cell grid: a
//! cell is in the domain when its center is, and one sweep floods the
//! maximal contiguous run of in-domain cells along the leaf through an
//! occupied cell. Levels count arcs; the returned chain length is an upper
//! bound for the true accessibility index that becomes exact for line-based
//! charts once the grid resolves the domain's features.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::foliations::{AnosovStructure, LeafChart, LeafKind};
use crate::plane::{Point, Rect};
use crate::{Error, Result};

const UNREACHED: u32 = u32::MAX;

/// Flood-fill state over the cell grid, one entry per cell.
#[derive(Clone, Debug)]
pub struct ReachabilityGrid {
    window: Rect<f64>,
    resolution: usize,
    level: Vec<u32>,
    parent: Vec<u32>,
    parent_arc: Vec<Option<LeafKind>>,
    in_domain: Vec<bool>,
    max_level: u32,
    seed: usize,
}

impl ReachabilityGrid {
    pub fn window(&self) -> Rect<f64> {
        self.window
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    fn cell_size(&self) -> (f64, f64) {
        (
            self.window.width() / self.resolution as f64,
            self.window.height() / self.resolution as f64,
        )
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> Point<f64> {
        let (dx, dy) = self.cell_size();
        Point::new(
            self.window.x0 + (ix as f64 + 0.5) * dx,
            self.window.y0 + (iy as f64 + 0.5) * dy,
        )
    }

    pub fn cell_of(&self, p: Point<f64>) -> Option<(usize, usize)> {
        if !self.window.contains(p) {
            return None;
        }
        let (dx, dy) = self.cell_size();
        let ix = (((p.x - self.window.x0) / dx) as usize).min(self.resolution - 1);
        let iy = (((p.y - self.window.y0) / dy) as usize).min(self.resolution - 1);
        Some((ix, iy))
    }

    fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.resolution + ix
    }

    /// First-reach level of the cell containing `p`.
    pub fn level_of_point(&self, p: Point<f64>) -> Option<u32> {
        let (ix, iy) = self.cell_of(p)?;
        let l = self.level[self.index(ix, iy)];
        (l != UNREACHED).then_some(l)
    }

    /// Cells first reached exactly at `level`.
    pub fn cells_first_reached(&self, level: u32) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for iy in 0..self.resolution {
            for ix in 0..self.resolution {
                if self.level[self.index(ix, iy)] == level {
                    out.push((ix, iy));
                }
            }
        }
        out
    }

    /// Number of occupied cells per cumulative level `0..=max_level`;
    /// nesting of the level sets is nondecreasing counts by construction.
    pub fn cumulative_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.max_level as usize + 1];
        for &l in &self.level {
            if l != UNREACHED {
                counts[l as usize] += 1;
            }
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        counts
    }

    pub fn in_domain_count(&self) -> usize {
        self.in_domain.iter().filter(|b| **b).count()
    }

    fn chain_to(&self, goal: usize) -> AccessChain {
        let mut cells = vec![goal];
        let mut arcs = Vec::new();
        let mut cur = goal;
        while self.level[cur] > 0 {
            arcs.push(self.parent_arc[cur].expect("reached cell has an arc"));
            cur = self.parent[cur] as usize;
            cells.push(cur);
        }
        cells.reverse();
        arcs.reverse();
        let points = cells
            .into_iter()
            .map(|c| self.cell_center(c % self.resolution, c / self.resolution))
            .collect();
        AccessChain { points, arcs }
    }
}

/// A witness chain of leaf arcs; `points` are grid cell centers and
/// consecutive points share the leaf named by the arc label between them.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AccessChain {
    pub points: Vec<Point<f64>>,
    pub arcs: Vec<LeafKind>,
}

impl AccessChain {
    /// Number of arcs.
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Re-checks every arc against the structure's charts.
    pub fn verify(&self, structure: &AnosovStructure) -> Result<bool> {
        for (i, arc) in self.arcs.iter().enumerate() {
            let chart = match arc {
                LeafKind::Stable => &structure.stable,
                LeafKind::Unstable => &structure.unstable,
            };
            if !chart.same_leaf(self.points[i], self.points[i + 1])? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

struct Search<'a> {
    structure: &'a AnosovStructure,
    grid: ReachabilityGrid,
    stable_swept: Vec<bool>,
    unstable_swept: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(
        structure: &'a AnosovStructure,
        seed: Point<f64>,
        window: Rect<f64>,
        resolution: usize,
    ) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::ProbeSetup("resolution must be at least 2".into()));
        }
        if window.is_empty() {
            return Err(Error::Geometry("empty search window".into()));
        }
        if !structure.domain.contains(seed) || !window.contains(seed) {
            return Err(Error::outside(seed.x, seed.y, structure.domain.name()));
        }
        let cells = resolution * resolution;
        let mut grid = ReachabilityGrid {
            window,
            resolution,
            level: vec![UNREACHED; cells],
            parent: vec![0; cells],
            parent_arc: vec![None; cells],
            in_domain: vec![false; cells],
            max_level: 0,
            seed: 0,
        };
        for iy in 0..resolution {
            for ix in 0..resolution {
                let idx = grid.index(ix, iy);
                grid.in_domain[idx] = structure.domain.contains(grid.cell_center(ix, iy));
            }
        }
        let seed_idx = Self::domain_cell_near(&grid, seed)?;
        grid.level[seed_idx] = 0;
        grid.seed = seed_idx;
        Ok(Search {
            structure,
            grid,
            stable_swept: vec![false; cells],
            unstable_swept: vec![false; cells],
        })
    }

    /// Cell of `p`, falling back to the nearest in-domain cell among its
    /// 3×3 neighborhood when the exact cell center falls outside.
    fn domain_cell_near(grid: &ReachabilityGrid, p: Point<f64>) -> Result<usize> {
        let (ix, iy) = grid
            .cell_of(p)
            .ok_or_else(|| Error::outside(p.x, p.y, "search window"))?;
        let idx = grid.index(ix, iy);
        if grid.in_domain[idx] {
            return Ok(idx);
        }
        let mut best: Option<(f64, usize)> = None;
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                let (jx, jy) = (ix as i64 + dx, iy as i64 + dy);
                if jx < 0 || jy < 0 || jx >= grid.resolution as i64 || jy >= grid.resolution as i64
                {
                    continue;
                }
                let j = grid.index(jx as usize, jy as usize);
                if grid.in_domain[j] {
                    let d = grid.cell_center(jx as usize, jy as usize).distance(p);
                    if best.map_or(true, |(bd, _)| d < bd) {
                        best = Some((d, j));
                    }
                }
            }
        }
        best.map(|(_, j)| j).ok_or_else(|| {
            Error::ProbeSetup(format!(
                "no in-domain cell near ({}, {}); raise the resolution",
                p.x, p.y
            ))
        })
    }

    fn run(&mut self, n_max: u32, goal: Option<usize>) {
        let mut frontier = vec![self.grid.seed];
        for level in 1..=n_max {
            let mut next = Vec::new();
            for &cell in &frontier {
                for kind in [LeafKind::Stable, LeafKind::Unstable] {
                    for target in self.sweep(cell, kind) {
                        if self.grid.level[target] == UNREACHED {
                            self.grid.level[target] = level;
                            self.grid.parent[target] = cell as u32;
                            self.grid.parent_arc[target] = Some(kind);
                            next.push(target);
                        }
                    }
                }
            }
            if next.is_empty() {
                return;
            }
            self.grid.max_level = level;
            if let Some(goal) = goal {
                if self.grid.level[goal] != UNREACHED {
                    return;
                }
            }
            frontier = next;
        }
    }

    fn sweep(&mut self, cell: usize, kind: LeafKind) -> Vec<usize> {
        let chart = match kind {
            LeafKind::Stable => &self.structure.stable,
            LeafKind::Unstable => &self.structure.unstable,
        };
        match chart {
            LeafChart::VerticalIn(_) => self.sweep_line(cell, kind, /*vertical=*/ true),
            LeafChart::HorizontalIn(_) => self.sweep_line(cell, kind, /*vertical=*/ false),
            LeafChart::FrameIntegral { .. } => self.sweep_trace(cell, kind),
        }
    }

    /// Contiguous run of in-domain cells through `cell` along a grid line.
    fn sweep_line(&mut self, cell: usize, kind: LeafKind, vertical: bool) -> Vec<usize> {
        let swept = match kind {
            LeafKind::Stable => &mut self.stable_swept,
            LeafKind::Unstable => &mut self.unstable_swept,
        };
        if swept[cell] {
            return Vec::new();
        }
        let res = self.grid.resolution;
        let (ix, iy) = (cell % res, cell / res);
        let (fixed, along) = if vertical { (ix, iy) } else { (iy, ix) };
        let at = |a: usize| -> usize {
            if vertical {
                self.grid.index(fixed, a)
            } else {
                self.grid.index(a, fixed)
            }
        };
        let mut lo = along;
        while lo > 0 && self.grid.in_domain[at(lo - 1)] {
            lo -= 1;
        }
        let mut hi = along;
        while hi + 1 < res && self.grid.in_domain[at(hi + 1)] {
            hi += 1;
        }
        let mut out = Vec::with_capacity(hi - lo + 1);
        for a in lo..=hi {
            let idx = at(a);
            swept[idx] = true;
            if idx != cell {
                out.push(idx);
            }
        }
        out
    }

    /// Cells visited by the traced leaf through the cell center.
    fn sweep_trace(&mut self, cell: usize, kind: LeafKind) -> Vec<usize> {
        let swept = match kind {
            LeafKind::Stable => &mut self.stable_swept,
            LeafKind::Unstable => &mut self.unstable_swept,
        };
        if swept[cell] {
            return Vec::new();
        }
        swept[cell] = true;
        let res = self.grid.resolution;
        let center = self.grid.cell_center(cell % res, cell / res);
        let chart = match kind {
            LeafKind::Stable => &self.structure.stable,
            LeafKind::Unstable => &self.structure.unstable,
        };
        let window = self.grid.window;
        let leaf = match chart.leaf_through(center, &window) {
            Ok(leaf) => leaf,
            Err(_) => return Vec::new(),
        };
        let mut out = Vec::new();
        for &p in leaf.trace.points() {
            if let Some((ix, iy)) = self.grid.cell_of(p) {
                let idx = self.grid.index(ix, iy);
                if self.grid.in_domain[idx] && idx != cell {
                    let sw = match kind {
                        LeafKind::Stable => &mut self.stable_swept,
                        LeafKind::Unstable => &mut self.unstable_swept,
                    };
                    if !sw[idx] {
                        sw[idx] = true;
                        out.push(idx);
                    }
                }
            }
        }
        out
    }
}

/// Flood the accessibility levels from `p` over `window` at the given grid
/// resolution, up to `n_max` arcs.
pub fn reachable_sets(
    structure: &AnosovStructure,
    p: Point<f64>,
    window: Rect<f64>,
    resolution: usize,
    n_max: u32,
) -> Result<ReachabilityGrid> {
    let mut search = Search::new(structure, p, window, resolution)?;
    search.run(n_max, None);
    Ok(search.grid)
}

/// Minimal-arc chain from `p` to `q` found by the grid search, or `None`
/// when `q` is not reached within `n_max` arcs.
pub fn accessibility(
    structure: &AnosovStructure,
    p: Point<f64>,
    q: Point<f64>,
    window: Rect<f64>,
    resolution: usize,
    n_max: u32,
) -> Result<Option<AccessChain>> {
    if !structure.domain.contains(q) || !window.contains(q) {
        return Err(Error::outside(q.x, q.y, structure.domain.name()));
    }
    let mut search = Search::new(structure, p, window, resolution)?;
    let goal = Search::domain_cell_near(&search.grid, q)?;
    search.run(n_max, Some(goal));
    if search.grid.level[goal] == UNREACHED {
        return Ok(None);
    }
    Ok(Some(search.grid.chain_to(goal)))
}

/// Largest chain length over randomly sampled in-domain cell pairs;
/// `saturated` reports whether some pair stayed unreached within `n_max`.
pub fn degree_of_inaccessibility<R: Rng + ?Sized>(
    structure: &AnosovStructure,
    sample_pairs: usize,
    window: Rect<f64>,
    resolution: usize,
    n_max: u32,
    rng: &mut R,
) -> Result<(u32, bool)> {
    if sample_pairs == 0 {
        return Err(Error::ProbeSetup("need at least one sample pair".into()));
    }
    let probe = Search::new(structure, window.center(), window, resolution).or_else(|_| {
        // center may be outside the domain; seed from any in-domain cell
        let mut fallback = None;
        'outer: for iy in 0..resolution {
            for ix in 0..resolution {
                let p = Point::new(
                    window.x0 + (ix as f64 + 0.5) * window.width() / resolution as f64,
                    window.y0 + (iy as f64 + 0.5) * window.height() / resolution as f64,
                );
                if structure.domain.contains(p) {
                    fallback = Some(p);
                    break 'outer;
                }
            }
        }
        match fallback {
            Some(p) => Search::new(structure, p, window, resolution),
            None => Err(Error::ProbeSetup(
                "window does not meet the domain".into(),
            )),
        }
    })?;
    let candidates: Vec<usize> = (0..probe.grid.level.len())
        .filter(|&i| probe.grid.in_domain[i])
        .collect();
    if candidates.len() < 2 {
        return Err(Error::ProbeSetup(
            "window resolves fewer than two domain cells".into(),
        ));
    }
    let res = resolution;
    let mut max_observed = 0u32;
    let mut saturated = false;
    for _ in 0..sample_pairs {
        let a = candidates[rng.gen_range(0..candidates.len())];
        let b = candidates[rng.gen_range(0..candidates.len())];
        if a == b {
            continue;
        }
        let pa = probe.grid.cell_center(a % res, a / res);
        let mut search = Search::new(structure, pa, window, resolution)?;
        search.run(n_max, Some(b));
        match search.grid.level[b] {
            UNREACHED => saturated = true,
            l => max_observed = max_observed.max(l),
        }
    }
    Ok((max_observed, saturated))
}
