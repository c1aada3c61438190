// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use floorplan3d::bench::{reference, BenchFailure, BenchReport, BenchRow};
use floorplan3d::dist::{self, pipeline_payload, Registry, Server, ServerConfig, WorkerConfig};
use floorplan3d::eo::{run_eo, EoParams, GridPlacement, GridPlacementDoc, GridShape, DEFAULT_TAU};
use floorplan3d::hypergraph::LayoutHypergraph;
use floorplan3d::pipeline::{
    default_grid, load_hypergraph, parse_grid, report_for, NetlistSource, PipelineError, PipelineJob,
    RunResult, SeedSpec,
};
use floorplan3d::render::render_svg;
use floorplan3d::squeeze::{
    bounding_volume, seed_geometry, squeeze_detailed, GeometricPlacement, GeometricPlacementDoc,
    RallyMode, SqueezeParams,
};
use floorplan3d::wirelength::{grid_wirelength, total_wirelength, DEFAULT_DIE_HEIGHT};

#[derive(Parser)]
#[command(name = "floorplan3d", version, about = "Wire-length driven 3D floorplanning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Block, net and neighbor statistics of a YAL netlist.
    Stats {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grid placement by extremal optimization.
    Place {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expand a grid placement to real geometry and squeeze it.
    Squeeze {
        input: PathBuf,
        /// Grid placement JSON from `place`, or a geometric layout.
        #[arg(long)]
        placement: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Total wire-length of a layout.
    Wirelength {
        input: PathBuf,
        /// Geometric layout JSON, or the output of `pipeline`.
        #[arg(long)]
        layout: PathBuf,
        #[arg(long)]
        die_height: Option<f64>,
        /// Include the per-net breakdown.
        #[arg(long)]
        per_net: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Place, squeeze and score for every seed; keep the best.
    Pipeline {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Threads for the seed runs.
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Pipeline over several instances, compared with published results.
    Bench {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SVG of a layout, one panel per layer.
    Render {
        #[arg(long)]
        layout: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Spool pipeline tasks to TCP workers.
    Serve {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value = "0.0.0.0")]
        host: String,
        #[arg(long, env = "FLOORPLAN3D_PORT")]
        port: Option<u16>,
        /// Seconds between worker hellos.
        #[arg(long, env = "FLOORPLAN3D_HELLO_PERIOD")]
        hello_period: Option<f64>,
        /// Seconds without a hello before a lease is requeued.
        #[arg(long, env = "FLOORPLAN3D_TIMEOUT")]
        timeout: Option<f64>,
        /// Also execute tasks inside the server process.
        #[arg(long)]
        local_worker: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fetch and execute tasks from a server.
    Work {
        #[arg(long, env = "FLOORPLAN3D_SERVER")]
        server: Option<String>,
        #[arg(long)]
        worker_id: Option<String>,
        #[arg(long, env = "FLOORPLAN3D_HELLO_PERIOD")]
        hello_period: Option<f64>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Default)]
struct RunArgs {
    /// JSON file with the same keys as the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_grid)]
    grid: Option<[usize; 3]>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    iters: Option<usize>,
    /// corner, center or X,Y
    #[arg(long)]
    rally: Option<RallyMode>,
    #[arg(long)]
    p1: Option<f64>,
    /// A count N (seeds 1..=N) or a list such as 3,5,9 or [7].
    #[arg(long)]
    seeds: Option<SeedSpec>,
    #[arg(long)]
    die_height: Option<f64>,
    #[arg(long)]
    bundles: bool,
}

/// Config file keys mirror the long flags, with `-` written as `_`.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    grid: Option<[usize; 3]>,
    tau: Option<f64>,
    iters: Option<usize>,
    rally: Option<String>,
    p1: Option<f64>,
    seeds: Option<SeedSpec>,
    die_height: Option<f64>,
    bundles: Option<bool>,
    port: Option<u16>,
    hello_period: Option<f64>,
    timeout: Option<f64>,
    server: Option<String>,
    workers: Option<usize>,
}

struct Settings {
    grid: Option<[usize; 3]>,
    tau: f64,
    iters: Option<usize>,
    rally: RallyMode,
    p1: f64,
    seeds: Vec<u64>,
    die_height: f64,
    bundles: bool,
    file: FileConfig,
}

enum CliError {
    Usage(String),
    Input(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Runtime(m) => m,
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn load_file_config(path: Option<&Path>) -> CliResult<FileConfig> {
    path.map_or_else(|| Ok(FileConfig::default()), read_json)
}

impl RunArgs {
    fn settings(&self) -> CliResult<Settings> {
        let file = load_file_config(self.config.as_deref())?;
        let rally = match (&self.rally, &file.rally) {
            (Some(r), _) => *r,
            (None, Some(s)) => s.parse().map_err(|e| input_err(format!("config rally: {e}")))?,
            (None, None) => RallyMode::Corner,
        };
        let seeds = self
            .seeds
            .clone()
            .or_else(|| file.seeds.clone())
            .unwrap_or_default()
            .seeds();
        if seeds.is_empty() {
            return Err(input_err("at least one seed is required"));
        }
        let s = Settings {
            grid: self.grid.or(file.grid),
            tau: self.tau.or(file.tau).unwrap_or(DEFAULT_TAU),
            iters: self.iters.or(file.iters),
            rally,
            p1: self.p1.or(file.p1).unwrap_or(0.5),
            seeds,
            die_height: self.die_height.or(file.die_height).unwrap_or(DEFAULT_DIE_HEIGHT),
            bundles: self.bundles || file.bundles.unwrap_or(false),
            file,
        };
        if s.grid.is_some_and(|g| g.contains(&0)) {
            return Err(CliError::Usage("grid dimensions must be positive".into()));
        }
        if s.tau.is_nan() || s.tau <= 1.0 {
            return Err(CliError::Usage(format!("tau must exceed 1, got {}", s.tau)));
        }
        if !(0.0..=1.0).contains(&s.p1) {
            return Err(CliError::Usage(format!("p1 must lie in [0, 1], got {}", s.p1)));
        }
        if !(s.die_height.is_finite() && s.die_height >= 0.0) {
            return Err(CliError::Usage(format!("bad die height {}", s.die_height)));
        }
        Ok(s)
    }
}

impl Settings {
    /// Explicit grid, else the published grid for a known instance, else the
    /// smallest fitting cuboid.
    fn grid_for(&self, input: &Path, m: usize) -> [usize; 3] {
        self.grid
            .or_else(|| reference(&input.to_string_lossy()).map(|r| r.grid))
            .unwrap_or_else(|| {
                let g = default_grid(m);
                [g.nx, g.ny, g.nz]
            })
    }

    fn jobs(&self, netlist: NetlistSource, grid: [usize; 3]) -> Vec<PipelineJob> {
        self.seeds
            .iter()
            .map(|&seed| PipelineJob {
                netlist: netlist.clone(),
                grid: Some(grid),
                tau: self.tau,
                max_iters: self.iters,
                rally: self.rally,
                p1: self.p1,
                seed,
                die_height: self.die_height,
                bundles: self.bundles,
            })
            .collect()
    }
}

fn emit(value: &Value, out: Option<&Path>) -> CliResult {
    let text = serde_json::to_string_pretty(value).map_err(runtime_err)?;
    match out {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| runtime_err(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn write_svg(g: &GeometricPlacement, path: &Path) -> CliResult {
    std::fs::write(path, render_svg(g)).map_err(|e| runtime_err(format!("{}: {e}", path.display())))
}

/// Accepts a layout document, a run result, or `pipeline` output.
fn load_layout(path: &Path) -> CliResult<GeometricPlacementDoc> {
    let v: Value = read_json(path)?;
    let doc = if v.get("boxes").is_some() {
        v
    } else if let Some(p) = v.get("best").and_then(|b| b.get("placement")) {
        p.clone()
    } else if let Some(p) = v.get("placement") {
        p.clone()
    } else {
        return Err(input_err(format!("{}: no layout found", path.display())));
    };
    serde_json::from_value(doc).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn workers_or_default(flag: Option<usize>, file: &FileConfig) -> usize {
    flag.or(file.workers)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1)
}

fn secs(v: f64, what: &str) -> CliResult<Duration> {
    Duration::try_from_secs_f64(v).map_err(|e| input_err(format!("{what}: {e}")))
}

fn cmd_stats(input: &Path, out: Option<&Path>) -> CliResult {
    let h = load_hypergraph(input)?;
    let s = h.stats();
    eprintln!(
        "{}: {} blocks, {} nets, neighbors min {} max {} avg {:.2}",
        input.display(),
        s.blocks,
        s.nets,
        s.neighbor_min,
        s.neighbor_max,
        s.neighbor_avg
    );
    emit(&s.to_json(), out)
}

fn cmd_place(input: &Path, run: &RunArgs, out: Option<&Path>) -> CliResult {
    let s = run.settings()?;
    let h = load_hypergraph(input)?;
    let m = h.component_count();
    let [nx, ny, nz] = s.grid_for(input, m);
    let mut best: Option<(f64, f64, GridPlacement, u64)> = None;
    for &seed in &s.seeds {
        let params = EoParams {
            tau: s.tau,
            max_iters: s.iters.unwrap_or_else(|| EoParams::default_iters(m)),
            seed,
            shape: GridShape::new(nx, ny, nz),
        };
        let o = run_eo(&h, &params).map_err(|e| CliError::from(PipelineError::from(e)))?;
        let better = best.as_ref().is_none_or(|(f, w, _, _)| {
            o.best_fitness > *f + 1e-9 || ((o.best_fitness - *f).abs() <= 1e-9 && o.best_wirelength < *w)
        });
        if better {
            best = Some((o.best_fitness, o.best_wirelength, o.best, seed));
        }
    }
    let (fitness, _, p, seed) = best.expect("seeds are non-empty");
    eprintln!(
        "grid {nx}x{ny}x{nz}: fitness {fitness:.3} of {m}, grid wire-length {} (seed {seed})",
        grid_wirelength(&h, &p).map_err(runtime_err)?
    );
    emit(&serde_json::to_value(p.to_doc(&h)).map_err(runtime_err)?, out)
}

fn cmd_squeeze(input: &Path, placement: &Path, run: &RunArgs, out: Option<&Path>, svg: Option<&Path>) -> CliResult {
    let s = run.settings()?;
    let h = load_hypergraph(input)?;
    let v: Value = read_json(placement)?;
    let seeded = if v.get("boxes").is_some() {
        let doc: GeometricPlacementDoc = serde_json::from_value(v).map_err(input_err)?;
        GeometricPlacement::from_doc_for(&doc, &h).map_err(input_err)?
    } else {
        let doc: GridPlacementDoc = serde_json::from_value(v).map_err(input_err)?;
        let p = GridPlacement::from_doc(&h, &doc).map_err(input_err)?;
        seed_geometry(&p, &h.box_dims(), s.rally).map_err(input_err)?
    };
    let mut best: Option<(f64, GeometricPlacement, u64, usize)> = None;
    for &seed in &s.seeds {
        let params = SqueezeParams {
            p1: s.p1,
            seed,
            bundles: s.bundles,
            ..Default::default()
        };
        let o = squeeze_detailed(&seeded, &params).map_err(input_err)?;
        let vol = bounding_volume(&o.placement).map_err(runtime_err)?.product();
        if best.as_ref().is_none_or(|(bv, ..)| vol < *bv) {
            best = Some((vol, o.placement, seed, o.moves));
        }
    }
    let (_, g, seed, moves) = best.expect("seeds are non-empty");
    let before = bounding_volume(&seeded).map_err(runtime_err)?;
    let after = bounding_volume(&g).map_err(runtime_err)?;
    eprintln!(
        "volume {:.0}x{:.0}x{} -> {:.0}x{:.0}x{} in {moves} moves (seed {seed})",
        before.vx, before.vy, before.layers, after.vx, after.vy, after.layers
    );
    if let Some(path) = svg {
        write_svg(&g, path)?;
    }
    emit(&serde_json::to_value(g.to_doc()).map_err(runtime_err)?, out)
}

fn cmd_wirelength(input: &Path, layout: &Path, die_height: Option<f64>, per_net: bool, out: Option<&Path>) -> CliResult {
    let h = load_hypergraph(input)?;
    let doc = load_layout(layout)?;
    let g = GeometricPlacement::from_doc_for(&doc, &h).map_err(input_err)?;
    let report = total_wirelength(&h, &g, die_height.unwrap_or(DEFAULT_DIE_HEIGHT)).map_err(input_err)?;
    eprintln!("total wire-length {:.1} over {} nets", report.total, report.per_net.len());
    let mut v = serde_json::to_value(&report).map_err(runtime_err)?;
    if !per_net {
        v.as_object_mut().expect("object").remove("per_net");
    }
    emit(&v, out)
}

fn run_seeds(jobs: &[PipelineJob], workers: usize) -> (Vec<RunResult>, Vec<String>) {
    let report = dist::run_parallel(jobs, workers);
    let mut ok = Vec::new();
    let mut failed = Vec::new();
    for r in report.results {
        match r {
            Ok(r) => ok.push(r),
            Err(e) => failed.push(e),
        }
    }
    (ok, failed)
}

fn cmd_pipeline(input: &Path, run: &RunArgs, workers: Option<usize>, out: Option<&Path>, svg: Option<&Path>) -> CliResult {
    let s = run.settings()?;
    let h = load_hypergraph(input).map_err(|e| e.in_instance(input.display().to_string()))?;
    let grid = s.grid_for(input, h.component_count());
    let jobs = s.jobs(NetlistSource::Path(input.to_path_buf()), grid);
    let (results, failures) = run_seeds(&jobs, workers_or_default(workers, &s.file));
    if let Some(e) = failures.first() {
        return Err(CliError::Runtime(format!("{}: {e}", input.display())));
    }
    let best = floorplan3d::pipeline::best_result(&results).expect("at least one run").clone();
    let report = report_for(&h, &best, s.die_height)?;
    let g = GeometricPlacement::from_doc_for(&best.placement, &h).map_err(runtime_err)?;
    if let Some(path) = svg {
        write_svg(&g, path)?;
    }
    let v = &best.bounding_volume;
    eprintln!(
        "{}: best wire-length {:.1} (seed {}), volume {:.0}x{:.0}x{}, grid {}x{}x{}, {} runs",
        input.display(),
        best.total_wirelength,
        best.seed,
        v.vx,
        v.vy,
        v.layers,
        grid[0],
        grid[1],
        grid[2],
        results.len()
    );
    let runs: Vec<Value> = results
        .iter()
        .map(|r| json!({"seed": r.seed, "total_wirelength": r.total_wirelength, "bounding_volume": r.bounding_volume}))
        .collect();
    emit(&json!({"best": best, "report": report, "runs": runs}), out)
}

fn cmd_bench(inputs: &[PathBuf], run: &RunArgs, workers: Option<usize>, out: Option<&Path>) -> CliResult {
    let s = run.settings()?;
    let workers = workers_or_default(workers, &s.file);
    let mut report = BenchReport::default();
    for input in inputs {
        let name = input
            .file_stem()
            .map_or_else(|| input.display().to_string(), |n| n.to_string_lossy().into_owned());
        let h = match load_hypergraph(input) {
            Ok(h) => h,
            Err(e) => {
                report.failures.push(BenchFailure { name, error: e.to_string() });
                continue;
            }
        };
        let grid = s.grid_for(input, h.component_count());
        let jobs = s.jobs(NetlistSource::Path(input.clone()), grid);
        let (results, failures) = run_seeds(&jobs, workers);
        if let Some(e) = failures.first() {
            report.failures.push(BenchFailure { name, error: e.clone() });
            continue;
        }
        let best = floorplan3d::pipeline::best_result(&results).expect("at least one run");
        let reference = reference(&name);
        report.rows.push(BenchRow {
            name,
            grid,
            runs: results.len(),
            volume: best.bounding_volume,
            wirelength_best: best.total_wirelength,
            wirelength_mean: results.iter().map(|r| r.total_wirelength).sum::<f64>() / results.len() as f64,
            reference_wirelength: reference.map(|r| r.wirelength_3d),
            reference_2d: reference.map(|r| r.wirelength_2d),
        });
    }
    eprint!("{}", report.table());
    emit(&serde_json::to_value(&report).map_err(runtime_err)?, out)?;
    if report.rows.is_empty() {
        return Err(CliError::Input("no instance completed".into()));
    }
    Ok(())
}

fn cmd_render(layout: &Path, svg: Option<&Path>) -> CliResult {
    let g = GeometricPlacement::from_doc(&load_layout(layout)?);
    match svg {
        Some(path) => write_svg(&g, path),
        None => {
            print!("{}", render_svg(&g));
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_serve(
    input: &Path,
    run: &RunArgs,
    host: &str,
    port: Option<u16>,
    hello_period: Option<f64>,
    timeout: Option<f64>,
    local_worker: bool,
    out: Option<&Path>,
) -> CliResult {
    let s = run.settings()?;
    let text = std::fs::read_to_string(input).map_err(|e| input_err(format!("{}: {e}", input.display())))?;
    let h = LayoutHypergraph::from_netlist(&floorplan3d::parse_yal(&text).map_err(input_err)?).map_err(input_err)?;
    let grid = s.grid_for(input, h.component_count());
    let tasks = s
        .jobs(NetlistSource::Inline(text), grid)
        .iter()
        .map(|j| (format!("seed-{}", j.seed), pipeline_payload(j)))
        .collect();
    let hello = secs(hello_period.or(s.file.hello_period).unwrap_or(5.0), "hello period")?;
    let config = ServerConfig {
        addr: format!("{host}:{}", port.or(s.file.port).unwrap_or(0)),
        hello_period: hello,
        timeout: secs(timeout.or(s.file.timeout).unwrap_or(3.0 * hello.as_secs_f64()), "timeout")?,
        local_worker,
        ..Default::default()
    };
    let server = Server::bind(config, tasks, Registry::with_pipeline()).map_err(|e| match e {
        dist::DistError::ConfigInvalid(_) => input_err(e),
        _ => runtime_err(e),
    })?;
    eprintln!("listening on {}", server.local_addr());
    let report = server.run().map_err(runtime_err)?;
    for (task, worker) in report.requeued() {
        eprintln!("requeued {task} after losing {worker}");
    }
    if let Some(b) = &report.best {
        eprintln!("best wire-length {:.1} (seed {})", b.total_wirelength, b.seed);
    }
    emit(&serde_json::to_value(&report).map_err(runtime_err)?, out)
}

fn cmd_work(
    server: Option<String>,
    worker_id: Option<String>,
    hello_period: Option<f64>,
    config: Option<&Path>,
    out: Option<&Path>,
) -> CliResult {
    let file = load_file_config(config)?;
    let server = server
        .or(file.server)
        .ok_or_else(|| CliError::Usage("--server HOST:PORT is required".into()))?;
    let cfg = WorkerConfig {
        hello_period: secs(hello_period.or(file.hello_period).unwrap_or(5.0), "hello period")?,
        ..WorkerConfig::new(server, worker_id.unwrap_or_else(|| format!("worker-{}", std::process::id())))
    };
    let summary = dist::work(&cfg, &Registry::with_pipeline()).map_err(runtime_err)?;
    eprintln!("{} completed {} tasks ({:?})", summary.worker_id, summary.completed.len(), summary.exit);
    emit(&serde_json::to_value(&summary).map_err(runtime_err)?, out)
}

fn dispatch(cli: Cli) -> CliResult {
    match cli.command {
        Command::Stats { input, out } => cmd_stats(&input, out.as_deref()),
        Command::Place { input, run, out } => cmd_place(&input, &run, out.as_deref()),
        Command::Squeeze { input, placement, run, out, svg } => {
            cmd_squeeze(&input, &placement, &run, out.as_deref(), svg.as_deref())
        }
        Command::Wirelength { input, layout, die_height, per_net, out } => {
            cmd_wirelength(&input, &layout, die_height, per_net, out.as_deref())
        }
        Command::Pipeline { input, run, workers, out, svg } => {
            cmd_pipeline(&input, &run, workers, out.as_deref(), svg.as_deref())
        }
        Command::Bench { inputs, run, workers, out } => cmd_bench(&inputs, &run, workers, out.as_deref()),
        Command::Render { layout, svg } => cmd_render(&layout, svg.as_deref()),
        Command::Serve { input, run, host, port, hello_period, timeout, local_worker, out } => cmd_serve(
            &input,
            &run,
            &host,
            port,
            hello_period,
            timeout,
            local_worker,
            out.as_deref(),
        ),
        Command::Work { server, worker_id, hello_period, config, out } => {
            cmd_work(server, worker_id, hello_period, config.as_deref(), out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
