// SPDX-License-Identifier: Apache-2.0

//! C ABI over the floorplanning pipeline.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `*_free`. Every fallible call returns an [`FpStatus`]
//! and, on failure, leaves a message retrievable with [`fp_last_error`].
//! Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use floorplan3d::hypergraph::{ComponentId, LayoutHypergraph};
use floorplan3d::pipeline::{read_netlist, run_prepared, NetlistSource, PipelineError, PipelineJob, RunResult};
use floorplan3d::squeeze::{RallyMode, RallyPoint};
use floorplan3d::wirelength::{net_hpwl, NetEndpoint};
use floorplan3d::yal::parse_yal;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    RuntimeError = 5,
    Panic = 6,
}

/// Parsed netlist and its layout hypergraph.
pub struct FpNetlist {
    graph: LayoutHypergraph,
}

/// Outcome of one pipeline run.
pub struct FpResult {
    run: RunResult,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FpStats {
    pub blocks: usize,
    pub nets: usize,
    pub neighbor_min: usize,
    pub neighbor_max: usize,
    pub neighbor_avg: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FpRallyMode {
    Corner = 0,
    Center = 1,
    Explicit = 2,
}

/// Run parameters. Zero grid dimensions or zero iterations select defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FpJobOptions {
    pub grid_x: u32,
    pub grid_y: u32,
    pub grid_z: u32,
    pub tau: f64,
    pub max_iters: u64,
    pub rally_mode: FpRallyMode,
    pub rally_x: f64,
    pub rally_y: f64,
    pub p1: f64,
    pub seed: u64,
    pub die_height: f64,
    pub bundles: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FpVolume {
    pub vx: f64,
    pub vy: f64,
    pub layers: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("nul bytes removed"));
}

fn fail(status: FpStatus, msg: impl Into<String>) -> FpStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> FpStatus) -> FpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == FpStatus::Ok {
                set_error("");
            }
            s
        }
        Err(_) => fail(FpStatus::Panic, "internal panic"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, FpStatus> {
    if p.is_null() {
        return Err(fail(FpStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| fail(FpStatus::InvalidUtf8, e.to_string()))
}

fn pipeline_status(e: &PipelineError) -> FpStatus {
    match e {
        PipelineError::Yal(_) | PipelineError::Hypergraph(_) | PipelineError::Io { .. } => {
            FpStatus::ParseError
        }
        PipelineError::Config(_) => FpStatus::InvalidArgument,
        PipelineError::Eo(floorplan3d::eo::EoError::InvalidParams(_))
        | PipelineError::Eo(floorplan3d::eo::EoError::GridTooSmall { .. }) => FpStatus::InvalidArgument,
        _ => FpStatus::RuntimeError,
    }
}

fn store_netlist(graph: LayoutHypergraph, out: *mut *mut FpNetlist) -> FpStatus {
    unsafe { *out = Box::into_raw(Box::new(FpNetlist { graph })) };
    FpStatus::Ok
}

/// Parse YAL text. On success `*out` receives a handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fp_netlist_parse(text: *const c_char, out: *mut *mut FpNetlist) -> FpStatus {
    guard(|| {
        if out.is_null() {
            return fail(FpStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let text = match str_arg(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_yal(text)
            .map_err(PipelineError::from)
            .and_then(|n| LayoutHypergraph::from_netlist(&n).map_err(PipelineError::from))
        {
            Ok(g) => store_netlist(g, out),
            Err(e) => fail(pipeline_status(&e), e.to_string()),
        }
    })
}

/// Read and parse a YAL file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fp_netlist_load(path: *const c_char, out: *mut *mut FpNetlist) -> FpStatus {
    guard(|| {
        if out.is_null() {
            return fail(FpStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let path = match str_arg(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match read_netlist(Path::new(path))
            .and_then(|n| LayoutHypergraph::from_netlist(&n).map_err(PipelineError::from))
        {
            Ok(g) => store_netlist(g, out),
            Err(e) => fail(pipeline_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `netlist` must be null or a handle from `fp_netlist_parse`/`fp_netlist_load`
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fp_netlist_free(netlist: *mut FpNetlist) {
    if !netlist.is_null() {
        drop(Box::from_raw(netlist));
    }
}

/// # Safety
/// `netlist` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fp_netlist_stats(netlist: *const FpNetlist, out: *mut FpStats) -> FpStatus {
    guard(|| {
        let (Some(n), false) = (netlist.as_ref(), out.is_null()) else {
            return fail(FpStatus::NullPointer, "null argument");
        };
        let s = n.graph.stats();
        *out = FpStats {
            blocks: s.blocks,
            nets: s.nets,
            neighbor_min: s.neighbor_min,
            neighbor_max: s.neighbor_max,
            neighbor_avg: s.neighbor_avg,
        };
        FpStatus::Ok
    })
}

/// Number of components (placeable blocks).
///
/// # Safety
/// `netlist` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fp_netlist_component_count(netlist: *const FpNetlist) -> usize {
    netlist.as_ref().map_or(0, |n| n.graph.component_count())
}

#[no_mangle]
pub extern "C" fn fp_job_default() -> FpJobOptions {
    let d = PipelineJob::new(NetlistSource::Inline(String::new()), 1);
    FpJobOptions {
        grid_x: 0,
        grid_y: 0,
        grid_z: 0,
        tau: d.tau,
        max_iters: 0,
        rally_mode: FpRallyMode::Corner,
        rally_x: 0.0,
        rally_y: 0.0,
        p1: d.p1,
        seed: d.seed,
        die_height: d.die_height,
        bundles: d.bundles,
    }
}

fn job_from(o: &FpJobOptions) -> Result<PipelineJob, String> {
    let grid = match (o.grid_x, o.grid_y, o.grid_z) {
        (0, 0, 0) => None,
        (x, y, z) if x > 0 && y > 0 && z > 0 => Some([x as usize, y as usize, z as usize]),
        _ => return Err("grid dimensions must be all zero or all positive".into()),
    };
    let rally = match o.rally_mode {
        FpRallyMode::Corner => RallyMode::Corner,
        FpRallyMode::Center => RallyMode::Center,
        FpRallyMode::Explicit => {
            if !(o.rally_x.is_finite() && o.rally_y.is_finite()) {
                return Err("rally coordinates must be finite".into());
            }
            RallyMode::Explicit(RallyPoint {
                px: o.rally_x,
                py: o.rally_y,
            })
        }
    };
    Ok(PipelineJob {
        netlist: NetlistSource::Inline(String::new()),
        grid,
        tau: o.tau,
        max_iters: (o.max_iters > 0).then_some(o.max_iters as usize),
        rally,
        p1: o.p1,
        seed: o.seed,
        die_height: o.die_height,
        bundles: o.bundles,
    })
}

/// Place, squeeze and score one seed.
///
/// # Safety
/// `netlist` and `options` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fp_pipeline_run(
    netlist: *const FpNetlist,
    options: *const FpJobOptions,
    out: *mut *mut FpResult,
) -> FpStatus {
    guard(|| {
        if out.is_null() {
            return fail(FpStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let (Some(n), Some(o)) = (netlist.as_ref(), options.as_ref()) else {
            return fail(FpStatus::NullPointer, "null argument");
        };
        let job = match job_from(o) {
            Ok(j) => j,
            Err(e) => return fail(FpStatus::InvalidArgument, e),
        };
        match run_prepared(&n.graph, &job, &format!("seed-{}", job.seed)) {
            Ok(run) => {
                *out = Box::into_raw(Box::new(FpResult { run }));
                FpStatus::Ok
            }
            Err(e) => fail(pipeline_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `result` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fp_result_wirelength(result: *const FpResult, out: *mut f64) -> FpStatus {
    guard(|| {
        let (Some(r), false) = (result.as_ref(), out.is_null()) else {
            return fail(FpStatus::NullPointer, "null argument");
        };
        *out = r.run.total_wirelength;
        FpStatus::Ok
    })
}

/// # Safety
/// `result` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fp_result_volume(result: *const FpResult, out: *mut FpVolume) -> FpStatus {
    guard(|| {
        let (Some(r), false) = (result.as_ref(), out.is_null()) else {
            return fail(FpStatus::NullPointer, "null argument");
        };
        let v = r.run.bounding_volume;
        *out = FpVolume {
            vx: v.vx,
            vy: v.vy,
            layers: v.layers,
        };
        FpStatus::Ok
    })
}

/// Layout as JSON; release the string with `fp_string_free`.
///
/// # Safety
/// `result` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fp_result_layout_json(result: *const FpResult, out: *mut *mut c_char) -> FpStatus {
    guard(|| {
        let (Some(r), false) = (result.as_ref(), out.is_null()) else {
            return fail(FpStatus::NullPointer, "null argument");
        };
        *out = ptr::null_mut();
        match serde_json::to_string(&r.run.placement) {
            Ok(s) => {
                *out = CString::new(s).expect("JSON has no NUL").into_raw();
                FpStatus::Ok
            }
            Err(e) => fail(FpStatus::RuntimeError, e.to_string()),
        }
    })
}

/// # Safety
/// `result` must be null or a live handle from `fp_pipeline_run`.
#[no_mangle]
pub unsafe extern "C" fn fp_result_free(result: *mut FpResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn fp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn fp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Half-perimeter wire-length of `count` endpoints given as interleaved
/// `x, y, z` triples.
///
/// # Safety
/// `xyz` must point to `3 * count` doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fp_net_hpwl(xyz: *const f64, count: usize, out: *mut f64) -> FpStatus {
    guard(|| {
        if xyz.is_null() || out.is_null() {
            return fail(FpStatus::NullPointer, "null argument");
        }
        let coords = std::slice::from_raw_parts(xyz, count * 3);
        let endpoints: Vec<NetEndpoint> = coords
            .chunks_exact(3)
            .map(|c| NetEndpoint {
                component: ComponentId(0),
                cx: c[0],
                cy: c[1],
                cz: c[2],
            })
            .collect();
        match net_hpwl(&endpoints) {
            Ok(w) => {
                *out = w;
                FpStatus::Ok
            }
            Err(e) => fail(FpStatus::InvalidArgument, e.to_string()),
        }
    })
}
