// SPDX-License-Identifier: Apache-2.0

//! τ-extremal-optimization placement of components into a 3D cell grid.
//!
//! A component's fitness compares the Manhattan radius `r` that reaches all
//! of its neighbors with the smallest radius `r_min` whose von Neumann ball
//! could hold that many neighbors: `lambda = r_min / max(r, r_min)`. The
//! solution quality is the sum of lambdas, at most the component count.
//!
//! Each step ranks components from worst to best, draws rank `k` with
//! probability proportional to `k^-tau`, and swaps the chosen component with
//! a cell drawn from the `r_min` ball around its neighbors' centroid. Every
//! move is accepted; the best placement seen is kept separately.

use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{ComponentId, HypergraphError, LayoutHypergraph};
use crate::wirelength::grid_wirelength;

pub const DEFAULT_TAU: f64 = 1.5;

const FITNESS_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EoError {
    #[error("grid {shape} holds {cells} cells but {components} components must be placed")]
    GridTooSmall {
        shape: GridShape,
        cells: usize,
        components: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("invalid placement: {0}")]
    InvalidPlacement(String),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridShape {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
}

impl GridShape {
    pub fn new(nx: usize, ny: usize, nz: usize) -> Self {
        Self { nx, ny, nz }
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    fn index(&self, c: Cell) -> usize {
        (c.x * self.ny + c.y) * self.nz + c.z
    }

    fn cell(&self, index: usize) -> Cell {
        Cell {
            x: index / (self.ny * self.nz),
            y: index / self.nz % self.ny,
            z: index % self.nz,
        }
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.x < self.nx && c.y < self.ny && c.z < self.nz
    }
}

impl std::fmt::Display for GridShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}x{}", self.nx, self.ny, self.nz)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl Cell {
    pub fn new(x: usize, y: usize, z: usize) -> Self {
        Self { x, y, z }
    }

    pub fn manhattan(&self, other: &Cell) -> usize {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y) + self.z.abs_diff(other.z)
    }
}

/// Injective assignment of components to grid cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridPlacement {
    shape: GridShape,
    cell_of: Vec<Cell>,
    occupant: Vec<Option<ComponentId>>,
}

impl GridPlacement {
    /// Components fill cells in lexicographic `(x, y, z)` order.
    pub fn initial(shape: GridShape, components: usize) -> Result<Self, EoError> {
        if shape.nx == 0 || shape.ny == 0 || shape.nz == 0 || shape.cells() < components {
            return Err(EoError::GridTooSmall {
                shape,
                cells: shape.cells(),
                components,
            });
        }
        let mut occupant = vec![None; shape.cells()];
        let cell_of = (0..components)
            .map(|i| {
                occupant[i] = Some(ComponentId(i));
                shape.cell(i)
            })
            .collect();
        Ok(Self {
            shape,
            cell_of,
            occupant,
        })
    }

    pub fn from_cells(shape: GridShape, cells: Vec<Cell>) -> Result<Self, EoError> {
        let mut occupant = vec![None::<ComponentId>; shape.cells()];
        for (i, &c) in cells.iter().enumerate() {
            if !shape.contains(c) {
                return Err(EoError::InvalidPlacement(format!(
                    "cell {:?} outside grid {shape}",
                    (c.x, c.y, c.z)
                )));
            }
            let slot = &mut occupant[shape.index(c)];
            if let Some(other) = slot {
                return Err(EoError::InvalidPlacement(format!(
                    "components {} and {i} share cell {:?}",
                    other.0,
                    (c.x, c.y, c.z)
                )));
            }
            *slot = Some(ComponentId(i));
        }
        Ok(Self {
            shape,
            cell_of: cells,
            occupant,
        })
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.cell_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cell_of.is_empty()
    }

    pub fn cell_of(&self, c: ComponentId) -> Option<Cell> {
        self.cell_of.get(c.0).copied()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cell_of
    }

    pub fn occupant(&self, cell: Cell) -> Option<ComponentId> {
        if self.shape.contains(cell) {
            self.occupant[self.shape.index(cell)]
        } else {
            None
        }
    }

    /// Move `c` into `target`; whatever occupied `target` takes `c`'s cell.
    pub fn swap_into(&mut self, c: ComponentId, target: Cell) {
        let from = self.cell_of[c.0];
        let from_index = self.shape.index(from);
        let to_index = self.shape.index(target);
        let displaced = self.occupant[to_index];
        self.occupant[to_index] = Some(c);
        self.occupant[from_index] = displaced;
        self.cell_of[c.0] = target;
        if let Some(d) = displaced {
            self.cell_of[d.0] = from;
        }
    }

    /// Check injectivity, bounds and that `occupant` inverts `cell_of`.
    pub fn validate(&self) -> Result<(), String> {
        let mut seen = vec![None; self.shape.cells()];
        for (i, c) in self.cell_of.iter().enumerate() {
            if !self.shape.contains(*c) {
                return Err(format!("component {i} out of bounds"));
            }
            let idx = self.shape.index(*c);
            if seen[idx].replace(ComponentId(i)).is_some() {
                return Err(format!("cell of component {i} is shared"));
            }
        }
        if seen != self.occupant {
            return Err("occupant map is not the inverse of cell_of".into());
        }
        Ok(())
    }

    pub fn to_doc(&self, h: &LayoutHypergraph) -> GridPlacementDoc {
        GridPlacementDoc {
            shape: [self.shape.nx, self.shape.ny, self.shape.nz],
            cells: self
                .cell_of
                .iter()
                .enumerate()
                .map(|(i, c)| (h.components()[i].label.clone(), [c.x, c.y, c.z]))
                .collect(),
            fitness: total_fitness(h, self),
        }
    }

    pub fn from_doc(h: &LayoutHypergraph, doc: &GridPlacementDoc) -> Result<Self, EoError> {
        let shape = GridShape::new(doc.shape[0], doc.shape[1], doc.shape[2]);
        let mut cells = Vec::with_capacity(h.component_count());
        for c in h.components() {
            let [x, y, z] = *doc.cells.get(&c.label).ok_or_else(|| {
                EoError::InvalidPlacement(format!("component `{}` missing", c.label))
            })?;
            cells.push(Cell::new(x, y, z));
        }
        if doc.cells.len() != cells.len() {
            return Err(EoError::InvalidPlacement(
                "placement names components absent from the netlist".into(),
            ));
        }
        Self::from_cells(shape, cells)
    }
}

/// JSON form: `{"shape":[nx,ny,nz], "cells":{name:[x,y,z]}, "fitness":f}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPlacementDoc {
    pub shape: [usize; 3],
    pub cells: IndexMap<String, [usize; 3]>,
    pub fitness: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentFitness {
    pub component: ComponentId,
    pub actual_range: usize,
    pub min_range: usize,
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EoParams {
    pub tau: f64,
    pub max_iters: usize,
    pub seed: u64,
    pub shape: GridShape,
}

impl EoParams {
    pub fn default_iters(components: usize) -> usize {
        100 * components * components
    }

    pub fn validate(&self) -> Result<(), EoError> {
        if self.tau.is_nan() || self.tau <= 1.0 {
            return Err(EoError::InvalidParams(format!("tau must exceed 1, got {}", self.tau)));
        }
        Ok(())
    }
}

/// Cells of the 3D von Neumann ball of radius `r`, center included.
fn ball_size(r: usize) -> usize {
    (2 * r + 1) * (2 * r * r + 2 * r + 3) / 3
}

/// Smallest radius whose von Neumann ball has room for `neighbor_count`
/// cells besides its center.
pub fn min_range(neighbor_count: usize) -> usize {
    let mut r = 0;
    while ball_size(r) - 1 < neighbor_count {
        r += 1;
    }
    r
}

pub fn fitness(
    h: &LayoutHypergraph,
    p: &GridPlacement,
    c: ComponentId,
) -> Result<ComponentFitness, EoError> {
    let neighbors = h.neighbors(c)?;
    let here = p
        .cell_of(c)
        .ok_or(HypergraphError::UnknownComponent(c.0))?;
    let mut actual_range = 0;
    for n in neighbors {
        let there = p
            .cell_of(*n)
            .ok_or(HypergraphError::UnknownComponent(n.0))?;
        actual_range = actual_range.max(here.manhattan(&there));
    }
    let min_range = min_range(neighbors.len());
    let lambda = if neighbors.is_empty() {
        1.0
    } else {
        min_range as f64 / actual_range.max(min_range) as f64
    };
    Ok(ComponentFitness {
        component: c,
        actual_range,
        min_range,
        lambda,
    })
}

fn all_fitness(h: &LayoutHypergraph, p: &GridPlacement) -> Vec<ComponentFitness> {
    (0..h.component_count())
        .map(|i| fitness(h, p, ComponentId(i)).expect("placement covers every component"))
        .collect()
}

pub fn total_fitness(h: &LayoutHypergraph, p: &GridPlacement) -> f64 {
    all_fitness(h, p).iter().map(|f| f.lambda).sum()
}

/// Draws ranks `0..m` (0 = worst) with weight `(k + 1)^-tau`.
#[derive(Debug, Clone)]
pub struct RankSampler {
    cdf: Vec<f64>,
}

impl RankSampler {
    pub fn new(m: usize, tau: f64) -> Self {
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = (1..=m)
            .map(|k| {
                acc += (k as f64).powf(-tau);
                acc
            })
            .collect();
        for v in &mut cdf {
            *v /= acc;
        }
        Self { cdf }
    }

    pub fn probability(&self, rank: usize) -> f64 {
        let prev = if rank == 0 { 0.0 } else { self.cdf[rank - 1] };
        self.cdf[rank] - prev
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        self.cdf
            .partition_point(|&c| c <= u)
            .min(self.cdf.len() - 1)
    }
}

/// Components ordered worst first; ties keep declaration order.
pub fn rank_components(h: &LayoutHypergraph, p: &GridPlacement) -> Vec<ComponentFitness> {
    let mut ranked = all_fitness(h, p);
    ranked.sort_by(|a, b| {
        a.lambda
            .total_cmp(&b.lambda)
            .then(a.component.cmp(&b.component))
    });
    ranked
}

/// Cells within `min_range(c)` of the rounded centroid of `c`'s neighbors,
/// excluding `c`'s own cell.
pub fn swap_targets(h: &LayoutHypergraph, p: &GridPlacement, c: ComponentId) -> Vec<Cell> {
    let neighbors = h.neighbors(c).unwrap_or(&[]);
    if neighbors.is_empty() {
        return Vec::new();
    }
    let shape = p.shape();
    let mut sum = [0.0f64; 3];
    for n in neighbors {
        let cell = p.cell_of(*n).expect("placed");
        sum[0] += cell.x as f64;
        sum[1] += cell.y as f64;
        sum[2] += cell.z as f64;
    }
    let k = neighbors.len() as f64;
    let clamp = |v: f64, n: usize| (v / k).round().clamp(0.0, (n - 1) as f64) as i64;
    let center = [
        clamp(sum[0], shape.nx),
        clamp(sum[1], shape.ny),
        clamp(sum[2], shape.nz),
    ];
    let r = min_range(neighbors.len()) as i64;
    let own = p.cell_of(c).expect("placed");
    let mut out = Vec::new();
    for x in (center[0] - r).max(0)..=(center[0] + r).min(shape.nx as i64 - 1) {
        let rx = r - (x - center[0]).abs();
        for y in (center[1] - rx).max(0)..=(center[1] + rx).min(shape.ny as i64 - 1) {
            let ry = rx - (y - center[1]).abs();
            for z in (center[2] - ry).max(0)..=(center[2] + ry).min(shape.nz as i64 - 1) {
                let cell = Cell::new(x as usize, y as usize, z as usize);
                if cell != own {
                    out.push(cell);
                }
            }
        }
    }
    out
}

/// One τ-EO update. Returns the component that was moved, if any.
pub fn eo_step<R: Rng + ?Sized>(
    h: &LayoutHypergraph,
    p: &mut GridPlacement,
    sampler: &RankSampler,
    rng: &mut R,
) -> Option<ComponentId> {
    let ranked = rank_components(h, p);
    let chosen = ranked[sampler.sample(rng)].component;
    let targets = swap_targets(h, p, chosen);
    if targets.is_empty() {
        return None;
    }
    let target = targets[rng.gen_range(0..targets.len())];
    p.swap_into(chosen, target);
    Some(chosen)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub iter: usize,
    pub fitness: f64,
    pub best_fitness: f64,
}

#[derive(Debug, Clone)]
pub struct EoOutcome {
    pub best: GridPlacement,
    pub best_fitness: f64,
    pub best_wirelength: f64,
    pub trace: Vec<TracePoint>,
}

impl EoOutcome {
    /// Iterations actually performed.
    pub fn iterations(&self) -> usize {
        self.trace.last().map_or(0, |t| t.iter)
    }
}

pub fn run_eo(h: &LayoutHypergraph, params: &EoParams) -> Result<EoOutcome, EoError> {
    params.validate()?;
    let m = h.component_count();
    let mut current = GridPlacement::initial(params.shape, m)?;
    let sampler = RankSampler::new(m, params.tau);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let optimum = m as f64 - FITNESS_EPS;

    let mut fit = total_fitness(h, &current);
    let mut best = current.clone();
    let mut best_fitness = fit;
    let mut best_wirelength = grid_wirelength(h, &current).expect("all components placed");
    let mut trace = vec![TracePoint {
        iter: 0,
        fitness: fit,
        best_fitness,
    }];

    for iter in 1..=params.max_iters {
        if best_fitness >= optimum {
            break;
        }
        eo_step(h, &mut current, &sampler, &mut rng);
        fit = total_fitness(h, &current);
        if fit > best_fitness - FITNESS_EPS {
            let wl = grid_wirelength(h, &current).expect("all components placed");
            if fit > best_fitness + FITNESS_EPS || wl < best_wirelength {
                best = current.clone();
                best_fitness = best_fitness.max(fit);
                best_wirelength = wl;
            }
        }
        trace.push(TracePoint {
            iter,
            fitness: fit,
            best_fitness,
        });
    }

    Ok(EoOutcome {
        best,
        best_fitness,
        best_wirelength,
        trace,
    })
}
