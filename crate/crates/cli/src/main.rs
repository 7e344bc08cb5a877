mod commands;
mod report;

use std::io::{Read as _, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use deltahull::budget::Budgets;
use deltahull::generators::SuiteSpec;
use deltahull::instance::parse_instance;
use deltahull::Error;

use commands::{Loaded, Rendered};
use report::{sha256_hex, Timing};

#[derive(Parser)]
#[command(name = "deltahull", version, about = "Exact integer hulls and subdeterminant bounds")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Budget overrides, e.g. `minors=1e6,points=5000`.
    #[arg(long, global = true)]
    budget: Option<String>,
    /// Report elapsed wall time.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Δ_1, Δ and Δ_ext of an instance.
    Delta {
        file: PathBuf,
        /// Also report Δ_k (repeatable).
        #[arg(long)]
        k: Vec<usize>,
        /// Report Δ_k for every k.
        #[arg(long)]
        table: bool,
    },
    /// Lattice points, vertices and face counts of the integer hull.
    Hull { file: PathBuf },
    /// Vertices of the integer hull, optionally with those of P.
    Vertices {
        file: PathBuf,
        /// Also list the vertices of P, marking fractional ones.
        #[arg(long)]
        real: bool,
    },
    /// Every face of the integer hull with its certificate.
    Faces { file: PathBuf },
    /// Δ-deep bases (Δ defaults to Δ(A)).
    DeepBases {
        file: PathBuf,
        /// Depth parameter; defaults to Δ(A).
        #[arg(long)]
        delta: Option<BigInt>,
    },
    /// Exact γ(n, Δ) by brute force.
    Gamma { n: usize, delta: u64 },
    /// Closed-form bounds for given n, m, Δ.
    Bounds { n: usize, m: usize, delta: BigInt },
    /// Generate instances, e.g. `random:n=3,m=6,bound=3,seed=42`.
    Gen {
        spec: String,
        /// Replaces the seed given in the spec.
        #[arg(long)]
        seed: Option<u64>,
        /// Write one file per instance instead of printing.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Check the theorem, corollary and lemma on a file or generated suites.
    Verify {
        #[arg(required_unless_present = "suite", conflicts_with = "suite")]
        file: Option<PathBuf>,
        /// Suite spec, e.g. `random:n=2,m=6,bound=3,count=100` (repeatable).
        #[arg(long)]
        suite: Vec<String>,
        /// Base seed for every suite.
        #[arg(long)]
        seed: Option<u64>,
        /// Run every check with this Δ instead of Δ(A).
        #[arg(long)]
        delta: Option<BigInt>,
    },
}

enum Failure {
    Usage(String),
    Input(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Core(e) => match e {
                Error::Parse { .. } | Error::Rank { .. } | Error::Dimension(_) => 2,
                Error::Budget { .. } => 3,
                Error::Infeasible | Error::Unbounded(_) | Error::Empty => 4,
                _ => 1,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Input(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

fn load(path: &Path) -> Result<Loaded, Failure> {
    let shown = path.display().to_string();
    let bytes = if shown == "-" {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        buf
    } else {
        std::fs::read(path).map_err(|e| Failure::Input(format!("{shown}: {e}")))?
    };
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Failure::Input(format!("{shown}: not valid UTF-8")))?;
    let polyhedron = parse_instance(&text).map_err(|e| match e {
        Error::Parse { .. } => Failure::Input(format!("{shown}: {e}")),
        other => Failure::Core(other),
    })?;
    Ok(Loaded {
        path: shown,
        sha256: sha256_hex(&bytes),
        polyhedron,
    })
}

fn parse_suite(s: &str, seed: Option<u64>) -> Result<SuiteSpec, Failure> {
    let mut suite: SuiteSpec = s.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    if let Some(seed) = seed {
        suite.spec.seed = seed;
    }
    Ok(suite)
}

fn pick(r: Rendered, format: Format) -> String {
    match format {
        Format::Text => r.text,
        Format::Json => r.json,
        Format::Csv => r.csv,
    }
}

fn run(cli: &Cli, budgets: &Budgets, start: Instant) -> Result<String, Failure> {
    let format = cli.format;
    let out = match &cli.command {
        Command::Delta { file, k, table } => commands::delta_cmd(&load(file)?, k, *table, budgets)?,
        Command::Hull { file } => commands::hull_cmd(&load(file)?, budgets)?,
        Command::Vertices { file, real } => commands::vertices_cmd(&load(file)?, *real, budgets)?,
        Command::Faces { file } => commands::faces_cmd(&load(file)?, budgets)?,
        Command::DeepBases { file, delta } => {
            commands::deep_bases_cmd(&load(file)?, delta.clone(), budgets)?
        }
        Command::Gamma { n, delta } => commands::gamma_cmd(*n, *delta, budgets)?,
        Command::Bounds { n, m, delta } => commands::bounds_cmd(*n, *m, delta)?,
        Command::Gen { spec, seed, out_dir } => {
            let suite = parse_suite(spec, *seed)?;
            let (instances, rendered) = commands::gen_cmd(&suite, budgets)?;
            match out_dir {
                None => rendered,
                Some(dir) => {
                    std::fs::create_dir_all(dir)
                        .map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
                    let mut listing = String::new();
                    for (i, g) in instances.iter().enumerate() {
                        let path = dir.join(format!("{}-{i:04}.txt", g.spec.family));
                        std::fs::write(&path, commands::instance_text(g))
                            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                        listing.push_str(&format!("{}\n", path.display()));
                    }
                    return Ok(listing);
                }
            }
        }
        Command::Verify {
            file,
            suite,
            seed,
            delta,
        } => {
            let mut doc = match file {
                Some(f) => commands::verify_file(&load(f)?, delta.clone(), budgets)?,
                None => {
                    let suites = suite
                        .iter()
                        .map(|s| parse_suite(s, *seed))
                        .collect::<Result<Vec<_>, _>>()?;
                    commands::verify_suites(&suites, delta.clone(), budgets)?
                }
            };
            if cli.timing {
                doc.timing = Some(Timing {
                    elapsed_ms: start.elapsed().as_millis() as u64,
                });
            }
            return Ok(match format {
                Format::Text => doc.text(),
                Format::Csv => doc.csv(),
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
                    s.push('\n');
                    s
                }
            });
        }
    };
    Ok(pick(out, format))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let budgets = Budgets::from_env().and_then(|mut b| {
        if let Some(spec) = &cli.budget {
            b.apply(spec)?;
        }
        Ok(b)
    });
    let budgets = match budgets {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(&cli, &budgets, start)) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            if cli.timing && !matches!(cli.command, Command::Verify { .. }) {
                eprintln!("elapsed: {} ms", start.elapsed().as_millis());
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
