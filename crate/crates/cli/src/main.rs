//! `anosov` — build planar Anosov structures, verify their defining
//! properties, run accessibility searches and topology probes, and emit
//! SVG figures and JSON reports.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use commands::{cmd_access, cmd_render, cmd_topology, cmd_verify, finish};
use config::RunConfig;

#[derive(Parser)]
#[command(name = "anosov", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Structure: band-u | hyperbola-v | whisker | frame | standard-plane.
    #[arg(long)]
    structure: Option<String>,
    /// Frame contraction factor in (0, 1).
    #[arg(long)]
    lambda: Option<f64>,
    /// Hump count for the default whisker.
    #[arg(long)]
    humps: Option<usize>,
    /// Window x0,x1,y0,y1.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// Grid cells per axis.
    #[arg(long)]
    resolution: Option<usize>,
    /// Arc cap for searches.
    #[arg(long, value_name = "N")]
    n_max: Option<u32>,
    /// RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the JSON report here as well as to stdout.
    #[arg(long)]
    out_report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Emit an SVG portrait of a structure (or its reachability levels).
    Render {
        #[command(flatten)]
        common: Common,
        /// Output SVG path.
        #[arg(long, required = true)]
        out: PathBuf,
        /// Leaf seeds "x,y;x,y;...".
        #[arg(long, allow_hyphen_values = true)]
        seeds: Option<String>,
        /// Shade accessibility level sets instead of leaves.
        #[arg(long)]
        reachability: bool,
        /// Flood seed for --reachability (point or marker).
        #[arg(long, allow_hyphen_values = true)]
        from: Option<String>,
    },
    /// Run the completeness and hyperbolicity probes.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Boundary offsets "1e-2,1e-3,...".
        #[arg(long)]
        epsilons: Option<String>,
        /// Iterate depth for the hyperbolicity probe.
        #[arg(long)]
        iterates: Option<u32>,
        /// Sample count for the hyperbolicity probe.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Search leaf-arc chains between points, or estimate the degree.
    Access {
        #[command(flatten)]
        common: Common,
        /// Start point "x,y" or marker "p0".
        #[arg(long, allow_hyphen_values = true)]
        from: Option<String>,
        /// Target point "x,y" or marker "p3".
        #[arg(long, allow_hyphen_values = true)]
        to: Option<String>,
        /// Sample pairs and report the largest chain length.
        #[arg(long)]
        degree: bool,
        /// Pair count for --degree.
        #[arg(long)]
        pairs: Option<usize>,
    },
    /// Obstruction detection and prolongational limit sets for the built-in
    /// flows.
    Topology {
        #[command(flatten)]
        common: Common,
        /// reeb1 | reeb2-same-orientation | reeb2-opposed.
        #[arg(long, required = true)]
        flow: String,
        /// Decide quasi-parallelizability of the flow's encoding.
        #[arg(long)]
        obstruction: bool,
        /// Forward prolongational limit of this point.
        #[arg(long, allow_hyphen_values = true)]
        jplus: Option<String>,
        /// Backward prolongational limit of this point.
        #[arg(long, allow_hyphen_values = true)]
        jminus: Option<String>,
        /// Ring radii "0.08,0.04,...".
        #[arg(long)]
        deltas: Option<String>,
        /// Flow time horizon.
        #[arg(long)]
        t_max: Option<f64>,
    },
}

fn merge_common(common: &Common) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if common.structure.is_some() {
        cfg.structure = common.structure.clone();
    }
    if let Some(v) = common.lambda {
        cfg.lambda = v;
    }
    if let Some(v) = common.humps {
        cfg.humps = v;
    }
    if let Some(w) = &common.window {
        cfg.window = Some(config::parse_window(w)?);
    }
    if let Some(v) = common.resolution {
        cfg.resolution = v;
    }
    if let Some(v) = common.n_max {
        cfg.n_max = v;
    }
    if let Some(v) = common.seed {
        cfg.seed = v;
    }
    Ok(cfg)
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| anyhow::anyhow!("{what}: cannot parse {t:?}: {e}"))
        })
        .collect()
}

fn init_thread_pool() {
    if let Ok(threads) = std::env::var("ANOSOV_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

fn run() -> Result<i32> {
    let started = Instant::now();
    let cli = Cli::parse();
    init_thread_pool();
    match cli.command {
        Command::Render {
            common,
            out,
            seeds,
            reachability,
            from,
        } => {
            let mut cfg = merge_common(&common)?;
            if let Some(s) = seeds {
                let mut parsed = Vec::new();
                for part in s.split(';').filter(|p| !p.trim().is_empty()) {
                    let p = config::parse_point(part, None)?;
                    parsed.push([p.x, p.y]);
                }
                cfg.seeds = Some(parsed);
            }
            cfg.validate()?;
            let report = cmd_render(
                &cfg,
                &commands::RenderArgs {
                    out,
                    reachability,
                    from,
                },
            )?;
            finish(report, common.out_report.as_deref(), started)
        }
        Command::Verify {
            common,
            epsilons,
            iterates,
            samples,
        } => {
            let mut cfg = merge_common(&common)?;
            if let Some(e) = epsilons {
                cfg.epsilons = parse_list(&e, "epsilons")?;
            }
            if let Some(v) = iterates {
                cfg.iterates = v;
            }
            if let Some(v) = samples {
                cfg.samples = v;
            }
            cfg.validate()?;
            let report = cmd_verify(&cfg)?;
            finish(report, common.out_report.as_deref(), started)
        }
        Command::Access {
            common,
            from,
            to,
            degree,
            pairs,
        } => {
            let mut cfg = merge_common(&common)?;
            if let Some(v) = pairs {
                cfg.pairs = v;
            }
            cfg.validate()?;
            let report = cmd_access(&cfg, &commands::AccessArgs { from, to, degree })?;
            finish(report, common.out_report.as_deref(), started)
        }
        Command::Topology {
            common,
            flow,
            obstruction,
            jplus,
            jminus,
            deltas,
            t_max,
        } => {
            let mut cfg = merge_common(&common)?;
            if let Some(d) = deltas {
                cfg.deltas = parse_list(&d, "deltas")?;
            }
            if let Some(v) = t_max {
                cfg.t_max = v;
            }
            cfg.validate()?;
            let report = cmd_topology(
                &cfg,
                &commands::TopologyArgs {
                    flow,
                    obstruction,
                    jplus,
                    jminus,
                },
            )?;
            finish(report, common.out_report.as_deref(), started)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
