// SPDX-License-Identifier: Apache-2.0

//! The three-step flow for one seed: grid placement, squeezing, wire-length.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eo::{run_eo, EoError, EoParams, GridShape, DEFAULT_TAU};
use crate::hypergraph::{HypergraphError, LayoutHypergraph};
use crate::squeeze::{
    bounding_volume, seed_geometry, squeeze_detailed, GeometricPlacementDoc, RallyMode,
    SqueezeError, SqueezeParams, Volume,
};
use crate::wirelength::{total_wirelength, WirelengthError, WirelengthReport, DEFAULT_DIE_HEIGHT};
use crate::yal::{parse_yal, Netlist, YalError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Yal(#[from] YalError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Eo(#[from] EoError),
    #[error(transparent)]
    Squeeze(#[from] SqueezeError),
    #[error(transparent)]
    Wirelength(#[from] WirelengthError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{instance}: {source}")]
    Instance {
        instance: String,
        #[source]
        source: Box<PipelineError>,
    },
}

impl PipelineError {
    pub fn in_instance(self, instance: impl Into<String>) -> Self {
        PipelineError::Instance {
            instance: instance.into(),
            source: Box::new(self),
        }
    }

    /// True when the failure lies in the input rather than in a run.
    pub fn is_input_error(&self) -> bool {
        match self {
            PipelineError::Io { .. }
            | PipelineError::Yal(_)
            | PipelineError::Hypergraph(_)
            | PipelineError::Config(_) => true,
            PipelineError::Instance { source, .. } => source.is_input_error(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetlistSource {
    Inline(String),
    Path(PathBuf),
}

impl NetlistSource {
    pub fn load(&self) -> Result<Netlist, PipelineError> {
        match self {
            NetlistSource::Inline(text) => Ok(parse_yal(text)?),
            NetlistSource::Path(path) => read_netlist(path),
        }
    }
}

pub fn read_netlist(path: &Path) -> Result<Netlist, PipelineError> {
    let text = std::fs::read_to_string(path).map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(parse_yal(&text)?)
}

pub fn load_hypergraph(path: &Path) -> Result<LayoutHypergraph, PipelineError> {
    Ok(LayoutHypergraph::from_netlist(&read_netlist(path)?)?)
}

/// One randomized run. Serialized as the payload of a distributed task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineJob {
    pub netlist: NetlistSource,
    /// Grid shape; the smallest fitting cuboid when absent.
    #[serde(default)]
    pub grid: Option<[usize; 3]>,
    pub tau: f64,
    /// EO iterations; `100·m²` when absent.
    #[serde(default)]
    pub max_iters: Option<usize>,
    pub rally: RallyMode,
    pub p1: f64,
    pub seed: u64,
    pub die_height: f64,
    #[serde(default)]
    pub bundles: bool,
}

impl PipelineJob {
    pub fn new(netlist: NetlistSource, seed: u64) -> Self {
        Self {
            netlist,
            grid: None,
            tau: DEFAULT_TAU,
            max_iters: None,
            rally: RallyMode::Corner,
            p1: 0.5,
            seed,
            die_height: DEFAULT_DIE_HEIGHT,
            bundles: false,
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if !(self.p1 >= 0.0 && self.p1 <= 1.0) {
            return Err(PipelineError::Config(format!("p1 must lie in [0, 1], got {}", self.p1)));
        }
        if !(self.die_height.is_finite() && self.die_height >= 0.0) {
            return Err(PipelineError::Config(format!(
                "die height must be finite and non-negative, got {}",
                self.die_height
            )));
        }
        if let Some(g) = self.grid {
            if g.contains(&0) {
                return Err(PipelineError::Config("grid dimensions must be positive".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub task_id: String,
    pub seed: u64,
    pub grid: [usize; 3],
    pub eo_fitness: f64,
    pub total_wirelength: f64,
    pub bounding_volume: Volume,
    pub squeeze_moves: usize,
    pub placement: GeometricPlacementDoc,
}

/// Smallest cuboid with `nx ≥ ny ≥ nz`, `nz ≤ 4` and room for `m` components.
/// Ties in volume go to the flatter, more balanced shape.
pub fn default_grid(m: usize) -> GridShape {
    let m = m.max(1);
    let mut best: Option<(usize, GridShape)> = None;
    for nz in 1..=4usize {
        for ny in nz..=m {
            let nx = m.div_ceil(ny * nz).max(ny);
            let shape = GridShape::new(nx, ny, nz);
            let better = match best {
                None => true,
                Some((v, b)) => shape.cells() < v || (shape.cells() == v && nx < b.nx),
            };
            if better {
                best = Some((shape.cells(), shape));
            }
        }
    }
    best.map(|(_, s)| s).expect("m ≥ 1 always fits")
}

pub fn run_prepared(
    h: &LayoutHypergraph,
    job: &PipelineJob,
    task_id: &str,
) -> Result<RunResult, PipelineError> {
    job.validate()?;
    let m = h.component_count();
    let shape = job
        .grid
        .map(|[x, y, z]| GridShape::new(x, y, z))
        .unwrap_or_else(|| default_grid(m));
    let eo = run_eo(
        h,
        &EoParams {
            tau: job.tau,
            max_iters: job.max_iters.unwrap_or_else(|| EoParams::default_iters(m)),
            seed: job.seed,
            shape,
        },
    )?;
    let seeded = seed_geometry(&eo.best, &h.box_dims(), job.rally)?;
    let squeezed = squeeze_detailed(
        &seeded,
        &SqueezeParams {
            p1: job.p1,
            seed: job.seed,
            bundles: job.bundles,
            ..Default::default()
        },
    )?;
    let report = total_wirelength(h, &squeezed.placement, job.die_height)?;
    Ok(RunResult {
        task_id: task_id.to_string(),
        seed: job.seed,
        grid: [shape.nx, shape.ny, shape.nz],
        eo_fitness: eo.best_fitness,
        total_wirelength: report.total,
        bounding_volume: bounding_volume(&squeezed.placement)?,
        squeeze_moves: squeezed.moves,
        placement: squeezed.placement.to_doc(),
    })
}

pub fn run_job(job: &PipelineJob, task_id: &str) -> Result<RunResult, PipelineError> {
    let h = LayoutHypergraph::from_netlist(&job.netlist.load()?)?;
    run_prepared(&h, job, task_id)
}

/// Recompute the full report for a result's layout.
pub fn report_for(
    h: &LayoutHypergraph,
    result: &RunResult,
    die_height: f64,
) -> Result<WirelengthReport, PipelineError> {
    let g = crate::squeeze::GeometricPlacement::from_doc_for(&result.placement, h)?;
    Ok(total_wirelength(h, &g, die_height)?)
}

/// Lowest wire-length, then smallest volume, then task id.
pub fn best_result<'a>(results: impl IntoIterator<Item = &'a RunResult>) -> Option<&'a RunResult> {
    results.into_iter().min_by(|a, b| {
        a.total_wirelength
            .total_cmp(&b.total_wirelength)
            .then(a.bounding_volume.product().total_cmp(&b.bounding_volume.product()))
            .then_with(|| a.task_id.cmp(&b.task_id))
    })
}

/// Seeds given as a count (`N` → 1..=N) or an explicit list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeedSpec {
    Count(u64),
    List(Vec<u64>),
}

impl SeedSpec {
    pub fn seeds(&self) -> Vec<u64> {
        match self {
            SeedSpec::Count(n) => (1..=*n).collect(),
            SeedSpec::List(v) => v.clone(),
        }
    }
}

impl Default for SeedSpec {
    fn default() -> Self {
        SeedSpec::Count(1)
    }
}

impl std::str::FromStr for SeedSpec {
    type Err = String;

    /// `8` is a count; `7,` or `[7]` or `3,5,9` are lists.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let spec = if s.contains(',') || s.starts_with('[') {
            let inner = s.trim_start_matches('[').trim_end_matches(']');
            let list = inner
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u64>().map_err(|e| format!("bad seed `{t}`: {e}")))
                .collect::<Result<Vec<_>, _>>()?;
            SeedSpec::List(list)
        } else {
            SeedSpec::Count(s.parse().map_err(|e| format!("bad seed count `{s}`: {e}"))?)
        };
        if spec.seeds().is_empty() {
            return Err("at least one seed is required".into());
        }
        Ok(spec)
    }
}

pub fn parse_grid(s: &str) -> Result<[usize; 3], String> {
    let parts: Vec<&str> = s.split([',', 'x', 'X']).map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("grid must be NX,NY,NZ, got `{s}`"));
    }
    let mut out = [0; 3];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = p.parse().map_err(|e| format!("bad grid dimension `{p}`: {e}"))?;
        if *o == 0 {
            return Err("grid dimensions must be positive".into());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE_BLOCK: &str = "MODULE b; TYPE GENERAL; DIMENSIONS 0 0 0 7 5 7 5 0; ENDMODULE;
        MODULE top; TYPE PARENT; NETWORK; only b s; ENDNETWORK; ENDMODULE;";

    #[test]
    fn default_grid_examples() {
        assert_eq!(default_grid(1), GridShape::new(1, 1, 1));
        assert_eq!(default_grid(4), GridShape::new(2, 2, 1));
        assert_eq!(default_grid(8), GridShape::new(2, 2, 2));
        for m in 1..120 {
            let g = default_grid(m);
            assert!(g.cells() >= m && g.nx >= g.ny && g.ny >= g.nz && g.nz <= 4, "{m}: {g}");
        }
    }

    #[test]
    fn single_block_pipeline() {
        let job = PipelineJob::new(NetlistSource::Inline(ONE_BLOCK.into()), 3);
        let r = run_job(&job, "t").unwrap();
        assert_eq!(r.total_wirelength, 0.0);
        assert_eq!((r.bounding_volume.vx, r.bounding_volume.vy), (5.0, 7.0));
    }

    #[test]
    fn seed_spec_parsing() {
        assert_eq!("3".parse::<SeedSpec>().unwrap().seeds(), vec![1, 2, 3]);
        assert_eq!("[7]".parse::<SeedSpec>().unwrap().seeds(), vec![7]);
        assert_eq!("7,".parse::<SeedSpec>().unwrap().seeds(), vec![7]);
        assert_eq!("4, 9".parse::<SeedSpec>().unwrap().seeds(), vec![4, 9]);
        assert!("0".parse::<SeedSpec>().is_err());
        assert!("x".parse::<SeedSpec>().is_err());
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("2,2,3"), Ok([2, 2, 3]));
        assert_eq!(parse_grid("4x4x4"), Ok([4, 4, 4]));
        assert!(parse_grid("2,2").is_err());
        assert!(parse_grid("0,1,1").is_err());
    }

    #[test]
    fn job_roundtrips_through_json() {
        let mut job = PipelineJob::new(NetlistSource::Path("a.yal".into()), 5);
        job.rally = "1,2".parse().unwrap();
        job.grid = Some([2, 2, 3]);
        let v = serde_json::to_value(&job).unwrap();
        assert_eq!(serde_json::from_value::<PipelineJob>(v).unwrap(), job);
    }
}
