// SPDX-License-Identifier: Apache-2.0

//! Wire-length driven 3D floorplanning.
//!
//! A YAL netlist becomes a layout hypergraph, components are placed on a 3D
//! grid by τ-extremal optimization, the grid is expanded to real block sizes
//! and squeezed toward a rallying point, and the result is scored with a
//! three-axis half-perimeter wire-length.
//!
//! ```
//! use floorplan3d::pipeline::{run_job, NetlistSource, PipelineJob};
//!
//! let yal = "MODULE b; TYPE GENERAL; DIMENSIONS 0 0 0 4 2 4 2 0; ENDMODULE;
//!            MODULE top; TYPE PARENT; NETWORK; u1 b s; u2 b s; ENDNETWORK; ENDMODULE;";
//! let result = run_job(&PipelineJob::new(NetlistSource::Inline(yal.into()), 1), "demo").unwrap();
//! assert!(result.total_wirelength > 0.0);
//! ```

pub mod bench;
pub mod dist;
pub mod eo;
pub mod hypergraph;
pub mod pipeline;
pub mod render;
pub mod squeeze;
pub mod wirelength;
pub mod yal;

pub use eo::{run_eo, Cell, EoParams, GridPlacement, GridShape};
pub use hypergraph::{ComponentId, LayoutHypergraph, NeighborStats};
pub use pipeline::{run_job, PipelineJob, RunResult};
pub use squeeze::{squeeze, squeeze_bundles, GeometricPlacement, PlacedBox, RallyPoint};
pub use wirelength::{net_hpwl, total_wirelength, WirelengthReport};
pub use yal::{parse_yal, Netlist};
