use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use weak_imcf::scenario::{run, Command, Scenario, EXIT_INVALID};

/// Weak inverse mean curvature flow on warped products.
#[derive(Parser)]
#[command(name = "imcf", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Exact symmetric solution, jump manifest and area-law check.
    Solve(Overrides),
    /// Strong profile, non-degeneracy and volume growth diagnostics.
    Profile(Overrides),
    /// Minimizing hull of the initial ball, by formula and by min-cut.
    Hull(Overrides),
    /// Radius bounds against the exact sublevel sets.
    Bounds(Overrides),
    /// Discrete weak-solution certification with negative control and oracle comparison.
    Certify(Overrides),
    /// Conic exhaustion: escape times, agreement and certification per cutoff.
    Exhaust(Overrides),
    /// Stitched exhaustion limit compared with the direct solution.
    Limit(Overrides),
}

#[derive(Args, Default)]
struct Overrides {
    /// JSON scenario; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for CSV/JSON artifacts.
    #[arg(long, default_value = "imcf-out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Rerun on the doubled grid and report sensitivity.
    #[arg(long)]
    refine: bool,
    /// euclidean, cylinder, log_cylinder, dip, two_dips or sampled.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r0: Option<f64>,
    #[arg(long)]
    r_max: Option<f64>,
    /// Cylinder cross-section radius.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    warp_csv: Option<PathBuf>,
    #[arg(long)]
    cells: Option<usize>,
    /// e.g. power:c=4.836,a=0.6667, piecewise:..., csv:PATH, euclidean, candidate.
    #[arg(long)]
    profile: Option<String>,
    #[arg(long, value_delimiter = ',')]
    times: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    klist: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    llist: Option<Vec<f64>>,
    /// Area cap A.
    #[arg(long)]
    area: Option<f64>,
}

impl Sub {
    fn split(self) -> (Command, Overrides) {
        match self {
            Sub::Solve(o) => (Command::Solve, o),
            Sub::Profile(o) => (Command::Profile, o),
            Sub::Hull(o) => (Command::Hull, o),
            Sub::Bounds(o) => (Command::Bounds, o),
            Sub::Certify(o) => (Command::Certify, o),
            Sub::Exhaust(o) => (Command::Exhaust, o),
            Sub::Limit(o) => (Command::Limit, o),
        }
    }
}

fn scenario(command: Command, o: &Overrides) -> weak_imcf::Result<Scenario> {
    let mut s = match &o.config {
        Some(path) => Scenario::load(path)?,
        None => Scenario::default(),
    };
    s.pipeline.command = command;
    if let Some(v) = &o.model {
        s.manifold.model = v.clone();
    }
    if let Some(v) = o.n {
        s.manifold.n = v;
    }
    if let Some(v) = o.r_max {
        s.manifold.r_max = v;
    }
    if let Some(v) = o.c {
        s.manifold.c = v;
    }
    if let Some(v) = &o.warp_csv {
        s.manifold.warp_csv = Some(v.clone());
    }
    if let Some(v) = o.cells {
        s.grid.cells = v;
    }
    if let Some(v) = o.r0 {
        s.pipeline.r0 = v;
    }
    if let Some(v) = &o.profile {
        s.profile = Some(v.clone());
    }
    if let Some(v) = &o.times {
        s.pipeline.times = v.clone();
    }
    if let Some(v) = &o.klist {
        s.pipeline.k_list = v.clone();
    }
    if let Some(v) = &o.llist {
        s.pipeline.l_list = v.clone();
    }
    if let Some(v) = o.area {
        s.pipeline.area_cap = Some(v);
    }
    if let Some(v) = o.seed {
        s.seed = v;
    }
    s.grid.refine |= o.refine;
    s.validate()?;
    Ok(s)
}

fn main() -> ExitCode {
    let (command, overrides) = Cli::parse().command.split();
    let s = match scenario(command, &overrides) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("invalid configuration: {e}");
            return ExitCode::from(EXIT_INVALID as u8);
        }
    };
    match run(&s, &overrides.out) {
        Ok(outcome) => {
            for line in &outcome.summary {
                println!("{line}");
            }
            println!("artifacts in {}", overrides.out.display());
            ExitCode::from(outcome.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(weak_imcf::scenario::exit_code(&e) as u8)
        }
    }
}
