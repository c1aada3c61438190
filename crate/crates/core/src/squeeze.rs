// SPDX-License-Identifier: Apache-2.0

//! Volume optimization by squeezing.
//!
//! A grid placement is first expanded to real block dimensions on a uniform
//! pitch. Components then slide toward a rallying point one axis at a time,
//! each move going as far as it can: until the component's near edge reaches
//! the rally coordinate or it touches another component on its layer.
//!
//! Moves are drawn from a shuffled queue of `(component, axis)` entries. An
//! entry is retired ("blocked") when the component is already aligned with
//! the rally on that axis, or when it is stuck against a component that is
//! blocked on both axes. Stuck against a still-mobile component, the entry
//! is skipped for the rest of the pass. Passes repeat until one makes no
//! move.
//!
//! Two same-layer components whose projections on one axis have ever
//! overlapped keep their order along the other axis for the rest of the run,
//! even after they no longer overlap. Without this a component could dodge
//! below another, pass it and come back, swapping their order.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eo::GridPlacement;
use crate::hypergraph::{BoxDims, ComponentId, LayoutHypergraph};

/// Geometric tolerance in μm. Touching within this distance is contact,
/// not overlap.
pub const GEOM_EPS: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SqueezeError {
    #[error("no usable dimensions for component {0}")]
    MissingDimensions(String),
    #[error("unknown component {0}")]
    UnknownComponent(String),
    #[error("components `{0}` and `{1}` overlap")]
    OverlappingInput(String, String),
    #[error("placement has no boxes")]
    EmptyPlacement,
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::X, Axis::Y];

    pub fn other(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlacedBox {
    pub component: ComponentId,
    pub name: String,
    /// Lower-left corner.
    pub x: f64,
    pub y: f64,
    pub layer: usize,
    pub width: f64,
    pub height: f64,
}

impl PlacedBox {
    pub fn lo(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
        }
    }

    pub fn size(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.width,
            Axis::Y => self.height,
        }
    }

    pub fn hi(&self, axis: Axis) -> f64 {
        self.lo(axis) + self.size(axis)
    }

    fn set_lo(&mut self, axis: Axis, v: f64) {
        match axis {
            Axis::X => self.x = v,
            Axis::Y => self.y = v,
        }
    }

    /// Open-interval overlap of the projections on `axis`.
    pub fn overlaps_on(&self, other: &PlacedBox, axis: Axis) -> bool {
        self.lo(axis) < other.hi(axis) - GEOM_EPS && other.lo(axis) < self.hi(axis) - GEOM_EPS
    }

    pub fn overlaps(&self, other: &PlacedBox) -> bool {
        self.layer == other.layer && self.overlaps_on(other, Axis::X) && self.overlaps_on(other, Axis::Y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RallyPoint {
    pub px: f64,
    pub py: f64,
}

impl RallyPoint {
    pub fn coord(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.px,
            Axis::Y => self.py,
        }
    }
}

/// Where the rallying point sits relative to the seeded layout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum RallyMode {
    /// Lower-left corner of the bounding box.
    #[default]
    Corner,
    Center,
    Explicit(RallyPoint),
}

impl RallyMode {
    pub fn resolve(self, boxes: &[PlacedBox]) -> RallyPoint {
        match self {
            RallyMode::Explicit(p) => p,
            RallyMode::Corner | RallyMode::Center => {
                let Some((x0, y0, x1, y1)) = extents(boxes) else {
                    return RallyPoint { px: 0.0, py: 0.0 };
                };
                if self == RallyMode::Corner {
                    RallyPoint { px: x0, py: y0 }
                } else {
                    RallyPoint {
                        px: (x0 + x1) / 2.0,
                        py: (y0 + y1) / 2.0,
                    }
                }
            }
        }
    }
}

impl std::str::FromStr for RallyMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "corner" => Ok(RallyMode::Corner),
            "center" => Ok(RallyMode::Center),
            other => {
                let (x, y) = other
                    .split_once(',')
                    .ok_or_else(|| format!("expected corner, center or X,Y; got `{other}`"))?;
                let px = x.trim().parse::<f64>().map_err(|e| e.to_string())?;
                let py = y.trim().parse::<f64>().map_err(|e| e.to_string())?;
                if !px.is_finite() || !py.is_finite() {
                    return Err("rally coordinates must be finite".into());
                }
                Ok(RallyMode::Explicit(RallyPoint { px, py }))
            }
        }
    }
}

fn extents(boxes: &[PlacedBox]) -> Option<(f64, f64, f64, f64)> {
    if boxes.is_empty() {
        return None;
    }
    let mut e = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for b in boxes {
        e.0 = e.0.min(b.x);
        e.1 = e.1.min(b.y);
        e.2 = e.2.max(b.x + b.width);
        e.3 = e.3.max(b.y + b.height);
    }
    Some(e)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometricPlacement {
    pub boxes: Vec<PlacedBox>,
    pub layers: usize,
    pub rally: RallyPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDoc {
    pub name: String,
    pub x: f64,
    pub y: f64,
    pub layer: usize,
    pub w: f64,
    pub h: f64,
}

/// JSON form of a [`GeometricPlacement`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometricPlacementDoc {
    pub layers: usize,
    pub rally: [f64; 2],
    pub boxes: Vec<BoxDoc>,
}

impl GeometricPlacement {
    pub fn index_of(&self, c: ComponentId) -> Option<usize> {
        self.boxes.iter().position(|b| b.component == c)
    }

    pub fn find(&self, c: ComponentId) -> Option<&PlacedBox> {
        self.boxes.iter().find(|b| b.component == c)
    }

    pub fn check_overlap_free(&self) -> Result<(), SqueezeError> {
        for (i, a) in self.boxes.iter().enumerate() {
            for b in &self.boxes[i + 1..] {
                if a.overlaps(b) {
                    return Err(SqueezeError::OverlappingInput(a.name.clone(), b.name.clone()));
                }
            }
        }
        Ok(())
    }

    pub fn to_doc(&self) -> GeometricPlacementDoc {
        GeometricPlacementDoc {
            layers: self.layers,
            rally: [self.rally.px, self.rally.py],
            boxes: self
                .boxes
                .iter()
                .map(|b| BoxDoc {
                    name: b.name.clone(),
                    x: b.x,
                    y: b.y,
                    layer: b.layer,
                    w: b.width,
                    h: b.height,
                })
                .collect(),
        }
    }

    /// Components are numbered in document order.
    pub fn from_doc(doc: &GeometricPlacementDoc) -> Self {
        Self {
            layers: doc.layers,
            rally: RallyPoint {
                px: doc.rally[0],
                py: doc.rally[1],
            },
            boxes: doc
                .boxes
                .iter()
                .enumerate()
                .map(|(i, b)| PlacedBox {
                    component: ComponentId(i),
                    name: b.name.clone(),
                    x: b.x,
                    y: b.y,
                    layer: b.layer,
                    width: b.w,
                    height: b.h,
                })
                .collect(),
        }
    }

    /// Like [`from_doc`](Self::from_doc) but numbering components as in `h`.
    pub fn from_doc_for(doc: &GeometricPlacementDoc, h: &LayoutHypergraph) -> Result<Self, SqueezeError> {
        let mut g = Self::from_doc(doc);
        for b in &mut g.boxes {
            b.component = h
                .component_by_label(&b.name)
                .ok_or_else(|| SqueezeError::UnknownComponent(b.name.clone()))?;
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Volume {
    pub vx: f64,
    pub vy: f64,
    pub layers: usize,
}

impl Volume {
    pub fn product(&self) -> f64 {
        self.vx * self.vy * self.layers as f64
    }
}

pub fn bounding_volume(g: &GeometricPlacement) -> Result<Volume, SqueezeError> {
    let (x0, y0, x1, y1) = extents(&g.boxes).ok_or(SqueezeError::EmptyPlacement)?;
    Ok(Volume {
        vx: x1 - x0,
        vy: y1 - y0,
        layers: g.layers,
    })
}

/// Expand a grid placement to real dimensions on a uniform pitch equal to
/// the largest component width and height.
pub fn seed_geometry(
    p: &GridPlacement,
    dims: &[BoxDims],
    rally: RallyMode,
) -> Result<GeometricPlacement, SqueezeError> {
    if dims.len() < p.len() {
        return Err(SqueezeError::MissingDimensions(format!("#{}", dims.len())));
    }
    for d in &dims[..p.len()] {
        if !(d.width.is_finite() && d.height.is_finite() && d.width > 0.0 && d.height > 0.0) {
            return Err(SqueezeError::MissingDimensions(d.name.clone()));
        }
    }
    let pitch_x = dims[..p.len()].iter().map(|d| d.width).fold(0.0, f64::max);
    let pitch_y = dims[..p.len()].iter().map(|d| d.height).fold(0.0, f64::max);
    let boxes: Vec<PlacedBox> = p
        .cells()
        .iter()
        .zip(dims)
        .enumerate()
        .map(|(i, (cell, d))| PlacedBox {
            component: ComponentId(i),
            name: d.name.clone(),
            x: cell.x as f64 * pitch_x,
            y: cell.y as f64 * pitch_y,
            layer: cell.z,
            width: d.width,
            height: d.height,
        })
        .collect();
    let rally = rally.resolve(&boxes);
    Ok(GeometricPlacement {
        boxes,
        layers: p.shape().nz,
        rally,
    })
}

/// Where a box would stop sliding toward the rally coordinate on `axis`:
/// the target lower coordinate and the direction of travel.
fn rally_target(b: &PlacedBox, axis: Axis, rally: &RallyPoint) -> Option<(f64, f64)> {
    let p = rally.coord(axis);
    let (lo, hi) = (b.lo(axis), b.hi(axis));
    if lo >= p - GEOM_EPS {
        (lo - p > GEOM_EPS).then_some((p, -1.0))
    } else if hi <= p + GEOM_EPS {
        (p - hi > GEOM_EPS).then_some((p - b.size(axis), 1.0))
    } else {
        None
    }
}

/// Gap between a box and the rally coordinate along `axis`.
pub fn rally_distance(b: &PlacedBox, axis: Axis, rally: &RallyPoint) -> f64 {
    let p = rally.coord(axis);
    (b.lo(axis) - p).max(p - b.hi(axis)).max(0.0)
}

/// Furthest lower coordinate box `i` can reach moving in direction `sign`,
/// starting from `target`, given the obstacles accepted by `is_obstacle`.
/// Returns it with the boxes touched there.
fn contact_limit(
    boxes: &[PlacedBox],
    i: usize,
    axis: Axis,
    sign: f64,
    target: f64,
    mut is_obstacle: impl FnMut(usize) -> bool,
) -> (f64, Vec<usize>) {
    let me = &boxes[i];
    let size = me.size(axis);
    let mut best = target;
    let mut contacts = Vec::new();
    for (j, other) in boxes.iter().enumerate() {
        if j == i || other.layer != me.layer || !is_obstacle(j) {
            continue;
        }
        let stop = if sign < 0.0 {
            if other.hi(axis) > me.lo(axis) + GEOM_EPS {
                continue;
            }
            other.hi(axis)
        } else {
            if other.lo(axis) < me.hi(axis) - GEOM_EPS {
                continue;
            }
            other.lo(axis) - size
        };
        let tighter = (stop - best) * -sign;
        if tighter > GEOM_EPS {
            best = stop;
            contacts.clear();
            contacts.push(j);
        } else if tighter.abs() <= GEOM_EPS {
            contacts.push(j);
        }
    }
    (best, contacts)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slide {
    pub distance: f64,
    pub blocker: Option<ComponentId>,
}

/// Longest collision-free slide of `c` toward the rally along `axis`.
pub fn max_slide(g: &GeometricPlacement, c: ComponentId, axis: Axis) -> Result<Slide, SqueezeError> {
    let i = g
        .index_of(c)
        .ok_or_else(|| SqueezeError::UnknownComponent(format!("#{}", c.0)))?;
    let me = &g.boxes[i];
    let Some((target, sign)) = rally_target(me, axis, &g.rally) else {
        return Ok(Slide {
            distance: 0.0,
            blocker: None,
        });
    };
    let (stop, contacts) = contact_limit(&g.boxes, i, axis, sign, target, |j| {
        g.boxes[j].overlaps_on(me, axis.other())
    });
    Ok(Slide {
        distance: (stop - me.lo(axis)).abs(),
        blocker: contacts.first().map(|&j| g.boxes[j].component),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParams {
    /// Probability of retrying a component that just moved immediately;
    /// otherwise it goes to the back of the queue.
    pub p1: f64,
    pub seed: u64,
    pub bundles: bool,
    /// Axes along which moves are considered. The other axis starts blocked.
    pub axes: AxisSet,
}

impl Default for SqueezeParams {
    fn default() -> Self {
        Self {
            p1: 0.5,
            seed: 0,
            bundles: false,
            axes: AxisSet::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum AxisSet {
    #[default]
    Both,
    XOnly,
    YOnly,
}

impl AxisSet {
    fn enabled(self, axis: Axis) -> bool {
        !matches!((self, axis), (AxisSet::XOnly, Axis::Y) | (AxisSet::YOnly, Axis::X))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MoveQueue {
    pub entries: Vec<(ComponentId, Axis)>,
    pub immobile_x: Vec<ComponentId>,
    pub immobile_y: Vec<ComponentId>,
}

/// One accepted translation. A bundle move lists all its members.
#[derive(Debug, Clone, PartialEq)]
pub struct MoveRecord {
    pub pass: usize,
    pub axis: Axis,
    /// Component, old and new lower coordinate along `axis`.
    pub moved: Vec<(ComponentId, f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct SqueezeOutcome {
    pub placement: GeometricPlacement,
    /// Accepted translations; a bundle move counts once.
    pub moves: usize,
    pub passes: usize,
    /// Queue state at termination.
    pub queue: MoveQueue,
    pub trace: Vec<MoveRecord>,
}

enum Step {
    Blocked,
    Deferred,
    Moved,
}

struct Squeezer {
    boxes: Vec<PlacedBox>,
    rally: RallyPoint,
    // locks[axis][i][j]: i and j constrain each other's moves along `axis`
    locks: [Vec<Vec<bool>>; 2],
    immobile: [Vec<bool>; 2],
    possible: Vec<(usize, Axis)>,
    rng: ChaCha8Rng,
    p1: f64,
    bundles: bool,
    moves: usize,
    passes: usize,
    trace: Vec<MoveRecord>,
}

impl Squeezer {
    fn new(g: &GeometricPlacement, params: &SqueezeParams) -> Self {
        let n = g.boxes.len();
        let locks = Axis::BOTH.map(|axis| {
            g.boxes
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    g.boxes
                        .iter()
                        .enumerate()
                        .map(|(j, b)| i != j && a.layer == b.layer && a.overlaps_on(b, axis.other()))
                        .collect()
                })
                .collect()
        });
        let immobile = Axis::BOTH.map(|axis| vec![!params.axes.enabled(axis); n]);
        let possible = (0..n)
            .flat_map(|i| Axis::BOTH.into_iter().map(move |axis| (i, axis)))
            .filter(|&(_, axis)| params.axes.enabled(axis))
            .collect();
        Self {
            boxes: g.boxes.clone(),
            rally: g.rally,
            locks,
            immobile,
            possible,
            rng: ChaCha8Rng::seed_from_u64(params.seed),
            p1: params.p1,
            bundles: params.bundles,
            moves: 0,
            passes: 0,
            trace: Vec::new(),
        }
    }

    fn fully_immobile(&self, i: usize) -> bool {
        self.immobile[0][i] && self.immobile[1][i]
    }

    fn obstructs(&self, i: usize, j: usize, axis: Axis) -> bool {
        self.locks[axis.index()][i][j] || self.boxes[i].overlaps_on(&self.boxes[j], axis.other())
    }

    fn block(&mut self, i: usize, axis: Axis) {
        self.immobile[axis.index()][i] = true;
        self.possible.retain(|&e| e != (i, axis));
    }

    fn relock(&mut self, i: usize, axis: Axis) {
        // i moved along `axis`: its overlaps on `axis` now constrain moves on the other one
        let other = axis.other().index();
        for j in 0..self.boxes.len() {
            if j != i
                && self.boxes[j].layer == self.boxes[i].layer
                && self.boxes[i].overlaps_on(&self.boxes[j], axis)
            {
                self.locks[other][i][j] = true;
                self.locks[other][j][i] = true;
            }
        }
    }

    fn debug_check(&self, moved: &[usize]) {
        if cfg!(debug_assertions) {
            for &i in moved {
                for (j, b) in self.boxes.iter().enumerate() {
                    assert!(
                        i == j || !self.boxes[i].overlaps(b),
                        "move produced overlap between {} and {}",
                        self.boxes[i].name,
                        b.name
                    );
                }
            }
        }
    }

    fn record(&mut self, axis: Axis, moves: &[(usize, f64)]) {
        let moved = moves
            .iter()
            .map(|&(i, to)| (self.boxes[i].component, self.boxes[i].lo(axis), to))
            .collect();
        self.trace.push(MoveRecord {
            pass: self.passes,
            axis,
            moved,
        });
    }

    fn try_single(&mut self, i: usize, axis: Axis) -> Step {
        let Some((target, sign)) = rally_target(&self.boxes[i], axis, &self.rally) else {
            return Step::Blocked;
        };
        let (stop, contacts) =
            contact_limit(&self.boxes, i, axis, sign, target, |j| self.obstructs(i, j, axis));
        if (stop - self.boxes[i].lo(axis)).abs() <= GEOM_EPS {
            if contacts.is_empty() || contacts.iter().any(|&j| self.fully_immobile(j)) {
                Step::Blocked
            } else {
                Step::Deferred
            }
        } else {
            self.record(axis, &[(i, stop)]);
            self.boxes[i].set_lo(axis, stop);
            self.relock(i, axis);
            self.debug_check(&[i]);
            Step::Moved
        }
    }

    #[allow(clippy::needless_range_loop)]
    fn try_bundle(&mut self, c: usize, axis: Axis) -> Step {
        let Some((_, sign)) = rally_target(&self.boxes[c], axis, &self.rally) else {
            return Step::Blocked;
        };
        let n = self.boxes.len();
        let mut member = vec![false; n];
        member[c] = true;
        let mut members = vec![c];
        let mut frontier = vec![c];
        while let Some(m) = frontier.pop() {
            for j in 0..n {
                if member[j]
                    || self.immobile[axis.index()][j]
                    || self.boxes[j].layer != self.boxes[c].layer
                    || !self.obstructs(m, j, axis)
                {
                    continue;
                }
                if rally_target(&self.boxes[j], axis, &self.rally).map(|(_, s)| s) == Some(sign) {
                    member[j] = true;
                    members.push(j);
                    frontier.push(j);
                }
            }
        }

        // drop members that cannot advance against non-members until stable
        let (step, limiting, limit_stop) = loop {
            let mut best: Option<(f64, usize, f64)> = None;
            let mut stuck = Vec::new();
            for &m in &members {
                let (target, _) =
                    rally_target(&self.boxes[m], axis, &self.rally).expect("members approach the rally");
                let (stop, _) = contact_limit(&self.boxes, m, axis, sign, target, |j| {
                    !member[j] && self.obstructs(m, j, axis)
                });
                let d = (stop - self.boxes[m].lo(axis)).abs();
                if d <= GEOM_EPS {
                    stuck.push(m);
                } else if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, m, stop));
                }
            }
            if stuck.is_empty() {
                let (d, m, stop) = best.expect("non-empty bundle");
                break (d, m, stop);
            }
            for m in stuck {
                member[m] = false;
            }
            if !member[c] {
                return self.try_single(c, axis);
            }
            members.retain(|&m| member[m]);
        };

        let targets: Vec<(usize, f64)> = members
            .iter()
            .map(|&m| {
                let to = if m == limiting {
                    limit_stop
                } else {
                    self.boxes[m].lo(axis) + sign * step
                };
                (m, to)
            })
            .collect();
        self.record(axis, &targets);
        for &(m, to) in &targets {
            self.boxes[m].set_lo(axis, to);
        }
        for &m in &members {
            self.relock(m, axis);
        }
        self.debug_check(&members);
        Step::Moved
    }

    fn run(&mut self) {
        loop {
            self.passes += 1;
            let mut possible = std::mem::take(&mut self.possible);
            possible.shuffle(&mut self.rng);
            self.possible = possible;
            let mut current: VecDeque<(usize, Axis)> = self.possible.iter().copied().collect();
            let mut moved = false;
            while let Some((i, axis)) = current.pop_front() {
                if self.immobile[axis.index()][i] {
                    continue;
                }
                let step = if self.bundles {
                    self.try_bundle(i, axis)
                } else {
                    self.try_single(i, axis)
                };
                match step {
                    Step::Blocked => self.block(i, axis),
                    Step::Deferred => {}
                    Step::Moved => {
                        moved = true;
                        self.moves += 1;
                        if self.rng.gen::<f64>() < self.p1 {
                            current.push_front((i, axis));
                        } else {
                            current.push_back((i, axis));
                        }
                    }
                }
            }
            if !moved {
                break;
            }
        }
    }
}

/// Run the squeezer and report move statistics and the final queue state.
pub fn squeeze_detailed(
    g: &GeometricPlacement,
    params: &SqueezeParams,
) -> Result<SqueezeOutcome, SqueezeError> {
    if !(0.0..=1.0).contains(&params.p1) {
        return Err(SqueezeError::InvalidParams(format!(
            "p1 must lie in [0, 1], got {}",
            params.p1
        )));
    }
    g.check_overlap_free()?;
    let mut s = Squeezer::new(g, params);
    s.run();
    let placement = GeometricPlacement {
        boxes: s.boxes.clone(),
        layers: g.layers,
        rally: g.rally,
    };
    placement.check_overlap_free()?;
    let ids = |axis: Axis| {
        (0..s.boxes.len())
            .filter(|&i| s.immobile[axis.index()][i])
            .map(|i| s.boxes[i].component)
            .collect()
    };
    let queue = MoveQueue {
        entries: s
            .possible
            .iter()
            .map(|&(i, a)| (s.boxes[i].component, a))
            .collect(),
        immobile_x: ids(Axis::X),
        immobile_y: ids(Axis::Y),
    };
    Ok(SqueezeOutcome {
        placement,
        moves: s.moves,
        passes: s.passes,
        queue,
        trace: s.trace,
    })
}

/// Single-component moves only.
pub fn squeeze(g: &GeometricPlacement, params: &SqueezeParams) -> Result<GeometricPlacement, SqueezeError> {
    let params = SqueezeParams {
        bundles: false,
        ..*params
    };
    squeeze_detailed(g, &params).map(|o| o.placement)
}

/// Moves groups of interacting components rigidly when all of them can advance.
pub fn squeeze_bundles(
    g: &GeometricPlacement,
    params: &SqueezeParams,
) -> Result<GeometricPlacement, SqueezeError> {
    let params = SqueezeParams {
        bundles: true,
        ..*params
    };
    squeeze_detailed(g, &params).map(|o| o.placement)
}
