//! Command-line interface.
//!
//! Exit codes: 0 success, 2 validation failure, 3 numerical split failure,
//! 4 I/O, configuration or input errors.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use log::info;
use serde_json::json;

use crate::apps::{
    finite_offset, input_diagonal, layered_offsets, manifold_extract, topological_offset,
};
use crate::error::{Error, Result};
use crate::expansion::{DistanceField, InputIndex};
use crate::io::{self, report, surface, ttm, RunConfig, Shape, Surface};
use crate::mesh::{surface_topology, validate, TetMesh, ValidateOptions, ValidationReport};
use crate::optimize::{quality_report, CoarsenRule, Distance, Side};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_SPLIT_FAILURE: u8 = 3;
pub const EXIT_ERROR: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "topoffset",
    version,
    about = "Topological offsets of simplicial complexes in tet meshes"
)]
pub struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic fixture: a lattice tet mesh with an embedded complex.
    Synth {
        #[arg(long)]
        shape: Shape,
        #[arg(long, default_value_t = 16)]
        res: usize,
        #[arg(short, long, default_value = "synth.ttm")]
        output: PathBuf,
    },
    /// Topological offset at a target distance.
    TopoOffset(Run),
    /// Offset at a prescribed distance; its topology may differ from the input's.
    FiniteOffset(Run),
    /// Nested offsets, one layer per distance.
    Layered(Run),
    /// Replace non-manifold parts of the input by pieces of their offset.
    Manifoldize(Run),
    /// Run the validity checks on a tagged mesh.
    Validate {
        #[arg(short, long)]
        input: PathBuf,
        /// Skip the brute-force intersection checks.
        #[arg(long)]
        fast: bool,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Quality of the offset surface of a tagged mesh against its input.
    Metrics {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        layer: u8,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Debug, Args)]
pub struct Run {
    #[arg(short, long, default_value = "synth.ttm")]
    pub input: PathBuf,
    /// `.ttm` for the tagged mesh, `.obj` or `.off` for the surface only.
    #[arg(short, long, default_value = "offset.ttm")]
    pub output: PathBuf,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Default, Args)]
pub struct Opts {
    /// Target distance, absolute or as a percentage of the input diagonal (`4%`).
    #[arg(long)]
    pub delta: Option<Distance>,
    /// Degrees.
    #[arg(long)]
    pub sigma_max: Option<f64>,
    /// Degrees.
    #[arg(long)]
    pub sigma_min: Option<f64>,
    #[arg(long)]
    pub lmin: Option<f64>,
    #[arg(long)]
    pub lmax: Option<f64>,
    /// outside, inside or both.
    #[arg(long)]
    pub side: Option<Side>,
    /// Comma-separated decreasing distances for `layered`.
    #[arg(long)]
    pub layers: Option<String>,
    /// Per-input-vertex distances, `vertex value` per line.
    #[arg(long)]
    pub distance_field: Option<PathBuf>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// paper_literal or flat_regions.
    #[arg(long)]
    pub coarsen_rule: Option<CoarsenRule>,
    /// JSON report path.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// With a surface output, also write the tagged mesh as `<stem>.background.ttm`.
    #[arg(long)]
    pub keep_background: bool,
    /// `key = value` file; command-line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl Opts {
    pub fn config(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let p = &mut c.params;
        if let Some(v) = self.delta {
            p.delta = v;
        }
        if let Some(v) = self.sigma_max {
            p.sigma_max = v;
        }
        if let Some(v) = self.sigma_min {
            p.sigma_min = v;
        }
        if self.lmin.is_some() {
            p.lmin = self.lmin;
        }
        if let Some(v) = self.lmax {
            p.lmax = v;
        }
        if let Some(v) = self.side {
            p.side = v;
        }
        if let Some(v) = self.max_iters {
            p.max_iterations = v;
        }
        if let Some(v) = self.coarsen_rule {
            p.coarsen_rule = v;
        }
        if let Some(l) = &self.layers {
            c.layers = io::config::parse_list(l)?;
        }
        if self.distance_field.is_some() {
            c.distance_field = self.distance_field.clone();
        }
        if self.report.is_some() {
            c.report = self.report.clone();
        }
        c.keep_background |= self.keep_background;
        Ok(c)
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NumericalSplitFailure { .. } => EXIT_SPLIT_FAILURE,
        _ => EXIT_ERROR,
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    match dispatch(cli.command) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_INVALID,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn print_validation(r: &ValidationReport) {
    for c in &r.checks {
        println!(
            "{:<28} {}  {}",
            c.name,
            if c.passed { "ok  " } else { "FAIL" },
            c.detail
        );
    }
}

fn fresh_input(path: &Path) -> Result<TetMesh> {
    let mut m = ttm::read(path)?;
    let tets: Vec<u32> = m.tet_ids().collect();
    for t in tets {
        m.set_region(t, 0);
    }
    Ok(m)
}

fn write_output(m: &TetMesh, path: &Path, faces: &[[u32; 3]], keep_background: bool) -> Result<()> {
    match surface::extension(path).as_deref() {
        Some("obj") | Some("off") => {
            Surface::extract(m.positions(), faces).write(path)?;
            if keep_background {
                ttm::write(m, &background_path(path))?;
            }
            Ok(())
        }
        _ => ttm::write(m, path),
    }
}

/// `out.obj` keeps its background mesh in `out.background.ttm`.
pub fn background_path(path: &Path) -> PathBuf {
    path.with_extension("background.ttm")
}

fn all_offset_faces(m: &TetMesh) -> Vec<[u32; 3]> {
    (1..=m.max_region())
        .flat_map(|l| m.offset_faces(l))
        .collect()
}

fn dispatch(cmd: Command) -> Result<bool> {
    let start = Instant::now();
    match cmd {
        Command::Synth { shape, res, output } => {
            let m = io::synth_grid_embedding(res, shape)?;
            ttm::write(&m, &output)?;
            println!(
                "{}: {} vertices, {} tets, {} input faces",
                output.display(),
                m.num_vertices(),
                m.num_tets(),
                m.input.faces.len()
            );
            Ok(true)
        }
        Command::Validate {
            input,
            fast,
            report: rp,
        } => {
            let m = ttm::read(&input)?;
            let r = validate(
                &m,
                ValidateOptions {
                    intersections: !fast,
                    ..Default::default()
                },
            );
            print_validation(&r);
            if let Some(p) = rp {
                report::write(
                    &p,
                    json!({"command": "validate", "input": input, "validation": r}),
                )?;
            }
            Ok(r.is_ok())
        }
        Command::Metrics { input, layer, opts } => {
            let c = opts.config()?;
            let m = ttm::read(&input)?;
            let faces = m.offset_faces(layer);
            let ii = InputIndex::build(&m)?;
            let delta = c.params.delta.resolve(input_diagonal(&m)?);
            let field = load_field(&c, &m, delta)?;
            let q = quality_report(&m, &faces, &ii, &field);
            println!("triangles                {}", q.triangles);
            println!(
                "shape regularity         mean {:.4}  min {:.4}",
                q.mean_shape_regularity, q.min_shape_regularity
            );
            println!(
                "normal deviation (deg)   mean {:.3}  max {:.3}",
                q.mean_normal_deviation, q.max_normal_deviation
            );
            println!(
                "distance error           mean {:.3e}  max {:.3e}",
                q.mean_distance_error, q.max_distance_error
            );
            println!(
                "relative error           mean {:.4}  max {:.4}",
                q.mean_relative_error, q.max_relative_error
            );
            if let Some(p) = &c.report {
                report::write(
                    p,
                    json!({
                        "command": "metrics",
                        "input": input,
                        "layer": layer,
                        "delta": delta,
                        "topology": surface_topology(&faces),
                        "quality": q,
                    }),
                )?;
            }
            Ok(true)
        }
        Command::TopoOffset(r) => offset_command("topo-offset", r, start),
        Command::FiniteOffset(r) => offset_command("finite-offset", r, start),
        Command::Layered(r) => offset_command("layered", r, start),
        Command::Manifoldize(r) => offset_command("manifoldize", r, start),
    }
}

fn load_field(c: &RunConfig, m: &TetMesh, delta: f64) -> Result<DistanceField> {
    let mut f = DistanceField::uniform(delta);
    if let Some(p) = &c.distance_field {
        f.values = io::field::read(p, m)?;
    }
    Ok(f)
}

fn offset_command(name: &str, r: Run, start: Instant) -> Result<bool> {
    let c = r.opts.config()?;
    let mut m = fresh_input(&r.input)?;
    info!(
        "{name}: {} vertices, {} tets",
        m.num_vertices(),
        m.num_tets()
    );
    let diag = input_diagonal(&m)?;
    let (result, surface) = match name {
        "topo-offset" => {
            let field = match &c.distance_field {
                Some(_) => Some(load_field(&c, &m, c.params.delta.resolve(diag))?),
                None => None,
            };
            let run = topological_offset(&mut m, &c.params, field.as_ref())?;
            let s = crate::optimize::active_faces(&m, 1);
            (serde_json::to_value(&run)?, s)
        }
        "finite-offset" => {
            let run = finite_offset(&mut m, &c.params)?;
            let s = crate::optimize::active_faces(&m, 1);
            (serde_json::to_value(&run)?, s)
        }
        "layered" => {
            if c.layers.is_empty() {
                return Err(Error::Config(
                    "layered needs --layers or a 'layers' key".into(),
                ));
            }
            let d: Vec<f64> = c.layers.iter().map(|l| l.resolve(diag)).collect();
            let runs = layered_offsets(&mut m, &c.params, &d)?;
            (serde_json::to_value(&runs)?, all_offset_faces(&m))
        }
        _ => {
            let push = c.params.delta.resolve(diag);
            let rep = manifold_extract(&mut m, push)?;
            let s = m.input.faces.iter().map(|f| f.0).collect();
            (serde_json::to_value(&rep)?, s)
        }
    };
    let topology = surface_topology(&surface);
    write_output(&m, &r.output, &surface, c.keep_background)?;
    let v = validate(&m, ValidateOptions::default());
    println!(
        "{}: {} surface triangles, {} components, euler {:?}",
        r.output.display(),
        surface.len(),
        topology.0,
        topology.1
    );
    print_validation(&v);
    if let Some(p) = &c.report {
        report::write(
            p,
            json!({
                "command": name,
                "input": r.input,
                "output": r.output,
                "config": c,
                "seconds": start.elapsed().as_secs_f64(),
                "parallel": crate::par::is_parallel(),
                "mesh": {"vertices": m.num_vertices(), "tets": m.num_tets()},
                "topology": topology,
                "result": result,
                "validation": v,
            }),
        )?;
    }
    Ok(v.is_ok())
}
