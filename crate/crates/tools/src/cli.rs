//! Command-line definitions and dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::format::InputError;
use crate::report::RunReport;
use crate::{cech, lck, psh};

#[derive(Debug, Clone, Parser)]
#[command(name = "lckspace", version, about = "Closed 1-forms, coverings and psh gluing on finite models")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Print the machine JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance for pluriharmonicity of grid functions and overlap
    /// differences.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    /// Deck word-length radius for universal covers of infinite groups.
    #[arg(long, global = true, default_value_t = 3)]
    pub radius: usize,
    /// Read scalars as floats instead of exact values.
    #[arg(long, global = true)]
    pub float: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Closed 1-forms on covers.
    Cech {
        #[command(subcommand)]
        cmd: CechCmd,
    },
    /// Locally conformally Kähler data.
    Lck {
        #[command(subcommand)]
        cmd: LckCmd,
    },
    /// Plurisubharmonic grids, well-related specs and gluing.
    Psh {
        #[command(subcommand)]
        cmd: PshCmd,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum CechCmd {
    /// Integral along an edge path.
    Integrate {
        #[arg(long)]
        form: PathBuf,
        /// Vertices, e.g. "0,1,2,0".
        #[arg(long)]
        path: String,
    },
    /// Loop integrals over the generators of the edge-path group.
    Monodromy {
        #[arg(long)]
        form: PathBuf,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
    },
    /// Global primitive, or a loop with nonzero integral.
    Exact {
        #[arg(long)]
        form: PathBuf,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
    },
    /// Primitive on a simply connected complex.
    Primitive {
        #[arg(long)]
        form: PathBuf,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
    },
    /// Pullback to the universal cover.
    Pullback {
        #[arg(long)]
        form: PathBuf,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
        /// Random paths used to check naturality.
        #[arg(long, default_value_t = 16)]
        samples: usize,
        /// Write the pulled-back form here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum LckCmd {
    /// The Lee form and its periods.
    Lee {
        #[arg(long)]
        lck: PathBuf,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Whether the Lee form is exact.
    Gck {
        #[arg(long)]
        lck: PathBuf,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
    },
    /// Monodromy character of the Lee form.
    Character {
        #[arg(long)]
        lck: PathBuf,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
    },
    /// Kähler data on the universal cover.
    Lift {
        #[arg(long)]
        lck: PathBuf,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
    },
    /// Lift, then descend back along the deck homotheties.
    Descend {
        #[arg(long)]
        lck: PathBuf,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Universal cover, lift and descent with all checks.
    Roundtrip {
        #[arg(long)]
        lck: PathBuf,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum PshCmd {
    /// Complex Hessian at a point, or extremes over the grid.
    Hessian {
        #[arg(long)]
        grid: PathBuf,
        /// Point as "re1,im1[,re2,im2]".
        #[arg(long)]
        at: Option<String>,
    },
    /// Strong plurisubharmonicity (or pluriharmonicity) on a region.
    Check {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        margin: f64,
        #[arg(long)]
        pluriharmonic: bool,
        /// Box "re_min,re_max,im_min,im_max" per coordinate; defaults to
        /// the whole domain.
        #[arg(long)]
        region: Option<String>,
    },
    /// The four conditions of a well-related spec.
    Wellrelated {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        margin: f64,
    },
    /// Levi constants and the epsilon plan, re-verified.
    Plan {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Glued potentials for a plan or given epsilons.
    Glue {
        #[arg(long)]
        spec: PathBuf,
        /// Comma-separated epsilon per chart; defaults to the plan.
        #[arg(long)]
        epsilon: Option<String>,
        /// Write the glued correction term as a grid file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Levi eigenvalues of the glued potentials and their overlaps.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(long, default_value_t = 1e-6)]
        margin: f64,
    },
    /// Validation, plan, tuning and verification in one run.
    Pipeline {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        margin: f64,
    },
}

pub(crate) fn path_str(p: &std::path::Path) -> String {
    p.display().to_string()
}

/// Runs a parsed command line. `argv` is echoed into the report.
pub fn run(cli: &Cli, argv: Vec<String>) -> RunReport {
    let mut report = RunReport::new(argv);
    let g = &cli.global;
    let outcome: Result<(), InputError> = match &cli.command {
        Command::Cech { cmd } => cech::run(&mut report, g, cmd),
        Command::Lck { cmd } => lck::run(&mut report, g, cmd),
        Command::Psh { cmd } => psh::run(&mut report, g, cmd),
    };
    if let Err(e) = outcome {
        report.error = Some(e);
    }
    report
}

/// Parses `args` (without the program name) and runs them.
pub fn run_args<I, T>(args: I) -> Result<RunReport, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let mut argv: Vec<String> = vec!["lckspace".into()];
    argv.extend(args.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(&argv)?;
    Ok(run(&cli, argv))
}
