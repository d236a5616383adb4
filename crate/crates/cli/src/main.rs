//! `theta-local`: matching functions, sweeps, tables and tree utilities.

mod sweep;
mod table;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use theta_local::double_coset::{hx_generators_mod, CosetRep, MeasureSpec};
use theta_local::error::Error;
use theta_local::matching::{
    build_xi_closed_form, build_xi_general, MatchingDatum, MatchingDatumJson,
};
use theta_local::oracle::{bfs_ball, orbit_closure, MAX_RADIUS};
use theta_local::padic::{Prime, ValuedRational};
use theta_local::quadspace::{standard_rep, CaseClass, CaseKind};
use theta_local::tree::{canonicalize, distance, sphere_representatives, TreeVertex};
use theta_local::weil::WeilRequest;

use sweep::{render_markdown, run_sweep, summary_line, Emit, SweepConfig};

#[derive(Parser)]
#[command(name = "theta-local", version, about = "Local matching functions for PGL2 over Q_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CaseArgs {
    /// Odd prime p.
    #[arg(long)]
    p: u64,
    /// inert, ramified or split.
    #[arg(long)]
    case: CaseKind,
    /// Valuation of Q(x); even for inert and split, odd for ramified.
    #[arg(long)]
    alpha: u32,
    /// Unit part of Q(x); defaults to the canonical nonresidue (1 for split).
    #[arg(long)]
    epsilon: Option<ValuedRational>,
}

impl CaseArgs {
    fn case_class(&self) -> Result<(CaseClass, Prime), Error> {
        let p = Prime::new(self.p)?;
        let c = match &self.epsilon {
            Some(e) => CaseClass::new(self.case, self.alpha, e.clone(), p)?,
            None => CaseClass::with_default_unit(self.case, self.alpha, p)?,
        };
        Ok((c, p))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the matching datum of the normal form as JSON.
    Xi {
        #[command(flatten)]
        case: CaseArgs,
        /// Use the closed-form coefficients instead of the general recipe.
        #[arg(long)]
        closed_form: bool,
    },
    /// Check the matching identity at every vertex up to a distance.
    Verify(VerifyArgs),
    /// Markdown table of closed-form and general-recipe coefficients.
    Table {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 4)]
        max_alpha: u32,
    },
    /// Sphere sizes around K, optionally with the sphere's distance matrix.
    Tree {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        sphere: u32,
        #[arg(long)]
        json: bool,
    },
    /// Orbit of a coset representative under torus generators, as JSON.
    Oracle {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        case: CaseKind,
        /// Defaults to the smallest admissible valuation.
        #[arg(long)]
        alpha: Option<u32>,
        /// Index of the representative gamma_d or delta_d.
        #[arg(long)]
        d: u32,
        /// Radius of the ball the orbit is computed in.
        #[arg(long, default_value_t = 3)]
        ball: u32,
        /// Congruence level of the generators; defaults to the ball radius.
        #[arg(long)]
        level: Option<u32>,
    },
    /// Apply a word of Weil operators to a Schwartz function read as JSON.
    Weil {
        /// Path to the request, or - for standard input.
        #[arg(long)]
        input: String,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Sweep description as JSON.
    #[arg(long, conflicts_with_all = ["p", "from_file"])]
    config: Option<PathBuf>,
    /// Matching datum as printed by `xi`.
    #[arg(long, conflicts_with = "p")]
    from_file: Option<PathBuf>,
    #[arg(long, requires_all = ["case", "alpha"])]
    p: Option<u64>,
    #[arg(long)]
    case: Option<CaseKind>,
    #[arg(long)]
    alpha: Option<u32>,
    #[arg(long)]
    epsilon: Option<ValuedRational>,
    #[arg(long, default_value_t = 4)]
    max_distance: u32,
    /// Emit the report as JSON instead of Markdown.
    #[arg(long)]
    json: bool,
}

/// Exit status 2: bad input. Exit status 1: a check failed.
enum Failure {
    Usage(String),
    Checks(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(format!("invalid JSON: {e}"))
    }
}

fn pretty<T: Serialize>(v: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn xi(args: &CaseArgs, closed_form: bool) -> Result<String, Failure> {
    let (c, p) = args.case_class()?;
    let md = if closed_form {
        MatchingDatum {
            x: standard_rep(&c, p),
            xi: build_xi_closed_form(&c, p),
            case: c,
            measure: MeasureSpec::default(),
        }
    } else {
        build_xi_general(&standard_rep(&c, p), p)?
    };
    pretty(&md.to_json())
}

fn verify(args: &VerifyArgs) -> Result<String, Failure> {
    let (data, max_distance, emit) = if let Some(path) = &args.config {
        let cfg: SweepConfig = serde_json::from_str(&fs::read_to_string(path)?)?;
        cfg.validate()?;
        (cfg.data()?, cfg.max_vertex_distance, cfg.emit)
    } else {
        let md = if let Some(path) = &args.from_file {
            let j: MatchingDatumJson = serde_json::from_str(&fs::read_to_string(path)?)?;
            MatchingDatum::from_json(&j)?
        } else {
            let (Some(p), Some(case), Some(alpha)) = (args.p, args.case, args.alpha) else {
                return Err(Failure::Usage(
                    "verify needs --config, --from-file, or --p with --case and --alpha".into(),
                ));
            };
            let ca = CaseArgs {
                p,
                case,
                alpha,
                epsilon: args.epsilon.clone(),
            };
            let (c, p) = ca.case_class()?;
            build_xi_general(&standard_rep(&c, p), p)?
        };
        let emit = if args.json { Emit::Json } else { Emit::Markdown };
        (vec![md], args.max_distance, emit)
    };
    let report = run_sweep(&data, max_distance)?;
    let out = match emit {
        Emit::Json => pretty(&report)?,
        Emit::Markdown => render_markdown(&report),
    };
    if report.failures > 0 {
        print!("{out}");
        return Err(Failure::Checks(summary_line(&report)));
    }
    Ok(out)
}

#[derive(Serialize)]
struct TreeReport {
    p: u64,
    radius: u32,
    /// Vertex counts at distance 0..=radius from K.
    sphere_sizes: Vec<usize>,
    vertices: Vec<TreeVertex>,
    /// Pairwise distances between the vertices of the outer sphere.
    distance_matrix: Vec<Vec<u32>>,
}

fn tree(p: u64, radius: u32, json: bool) -> Result<String, Failure> {
    let p = Prime::allowing_two(p)?;
    if radius > MAX_RADIUS {
        return Err(Error::RadiusTooLarge(radius).into());
    }
    let mut sizes = vec![0; radius as usize + 1];
    for (_, d) in bfs_ball(p, radius)? {
        sizes[d as usize] += 1;
    }
    if !json {
        return Ok(format!(
            "p = {}, sphere of radius {radius} around K: {} vertices\n",
            p.get(),
            sizes[radius as usize]
        ));
    }
    let vertices = sphere_representatives(p, radius);
    let distance_matrix = vertices
        .iter()
        .map(|v| vertices.iter().map(|w| distance(v, w, p)).collect())
        .collect();
    pretty(&TreeReport {
        p: p.get(),
        radius,
        sphere_sizes: sizes,
        vertices,
        distance_matrix,
    })
}

fn oracle(
    p: u64,
    kind: CaseKind,
    alpha: Option<u32>,
    d: u32,
    ball: u32,
    level: Option<u32>,
) -> Result<String, Failure> {
    let p = Prime::new(p)?;
    if ball > MAX_RADIUS {
        return Err(Error::RadiusTooLarge(ball).into());
    }
    let alpha = alpha.unwrap_or(u32::from(kind == CaseKind::Ramified));
    let c = CaseClass::with_default_unit(kind, alpha, p)?;
    let gens = hx_generators_mod(&c, p, level.unwrap_or(ball));
    let start = canonicalize(CosetRep::new(kind, d, p)?.matrix(), p);
    pretty(&orbit_closure(&gens, &start, ball, p)?)
}

fn weil(input: &str) -> Result<String, Failure> {
    let text = if input == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(input)?
    };
    let req: WeilRequest = serde_json::from_str(&text)?;
    pretty(&req.run()?.to_json())
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Xi { case, closed_form } => xi(&case, closed_form),
        Command::Verify(args) => verify(&args),
        Command::Table { p, max_alpha } => {
            Ok(table::render(Prime::new(p)?, &CaseKind::ALL, max_alpha)?)
        }
        Command::Tree { p, sphere, json } => tree(p, sphere, json),
        Command::Oracle {
            p,
            case,
            alpha,
            d,
            ball,
            level,
        } => oracle(p, case, alpha, d, ball, level),
        Command::Weil { input } => weil(&input),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            io::stdout().flush().ok();
            ExitCode::SUCCESS
        }
        Err(Failure::Checks(msg)) => {
            io::stdout().flush().ok();
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
