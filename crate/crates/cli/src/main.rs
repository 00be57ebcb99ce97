use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};

use bimatrix_core::bench::{run_bench, to_csv, BenchConfig, BenchMode};
use bimatrix_core::format::{format_profile, parse_game, parse_profile, serialize_game};
use bimatrix_core::{
    decompose_fully, generate, lambda_of, solve_until, verify_equilibrium, BimatrixGame, Deadline, GenSpec,
};

const EXIT_USAGE: u8 = 1;
const EXIT_UNVERIFIED: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;

/// Exact Nash equilibria of bimatrix games by sum/product decomposition.
#[derive(Parser)]
#[command(name = "bimatrix", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve a game file and print one equilibrium.
    Solve {
        path: PathBuf,
        /// Give up after this many milliseconds (no limit by default).
        #[arg(long)]
        timeout_ms: Option<u64>,
        /// Also write the equilibrium as a profile file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the decomposition tree of a game file.
    Decompose { path: PathBuf },
    /// Check a profile file against a game file; exit 0 iff it is an equilibrium.
    Verify { game: PathBuf, profile: PathBuf },
    /// Generate a random decomposable game.
    Generate {
        #[arg(long)]
        seed: u64,
        /// Game file destination (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the ground-truth decomposition tree here.
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(long, default_value_t = 0.4)]
        p_sum: f64,
        #[arg(long, default_value_t = 0.4)]
        p_product: f64,
        #[arg(long, default_value_t = 0.2)]
        p_elim: f64,
        #[arg(long, default_value_t = 80)]
        max_height: usize,
        #[arg(long, default_value_t = 6)]
        leaf_size: usize,
        #[arg(long, default_value_t = 95)]
        min_strategies: usize,
        #[arg(long, default_value_t = 105)]
        max_strategies: usize,
        #[arg(long, default_value_t = 50)]
        payoff_budget: u32,
    },
    /// Time decomposition against direct solving over a corpus, CSV out.
    Bench {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, default_value_t = 3000)]
        timeout_ms: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// decomp, direct or both
        #[arg(long, default_value = "both")]
        mode: BenchMode,
        /// CSV destination (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// External solver run as `<program> <game file>` for the direct column.
        #[arg(long)]
        external: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(EXIT_USAGE, format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| fail(EXIT_USAGE, format!("cannot write {}: {e}", path.display())))
}

fn load_game(path: &Path) -> Result<BimatrixGame, Failure> {
    parse_game(&read(path)?).map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn one_based(support: &[usize]) -> String {
    support
        .iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_solve(path: &Path, timeout_ms: Option<u64>, out: Option<&Path>) -> Result<(), Failure> {
    let game = load_game(path)?;
    let deadline = timeout_ms.map_or_else(Deadline::none, |ms| Deadline::after(Duration::from_millis(ms)));
    let report =
        solve_until(&game, &deadline).map_err(|_| fail(EXIT_TIMEOUT, format!("{}: timed out", path.display())))?;
    let eq = &report.equilibrium;
    if !verify_equilibrium(&game, eq).expect("solver keeps shapes") {
        return Err(fail(
            EXIT_UNVERIFIED,
            format!("{}: equilibrium failed verification", path.display()),
        ));
    }
    let profile = format_profile(eq);
    print!("{profile}");
    println!("support_x={}", one_based(&eq.x.support()));
    println!("support_y={}", one_based(&eq.y.support()));
    println!("lambda={}", report.lambda);
    println!("leaves={}", report.leaf_count);
    println!("tree={}", report.tree.summary());
    println!("elapsed_ms={:.3}", report.elapsed.as_secs_f64() * 1000.0);
    if let Some(out) = out {
        write(out, &profile)?;
    }
    Ok(())
}

fn cmd_decompose(path: &Path) -> Result<(), Failure> {
    let tree = decompose_fully(&load_game(path)?);
    print!("{tree}");
    println!("lambda={}", lambda_of(&tree));
    Ok(())
}

fn cmd_verify(game: &Path, profile: &Path) -> Result<(), Failure> {
    let g = load_game(game)?;
    let p = parse_profile(&read(profile)?).map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", profile.display())))?;
    match verify_equilibrium(&g, &p) {
        Ok(true) => {
            println!("equilibrium");
            Ok(())
        }
        Ok(false) => Err(fail(EXIT_UNVERIFIED, "not an equilibrium")),
        Err(e) => Err(fail(EXIT_USAGE, format!("{}: {e}", profile.display()))),
    }
}

fn cmd_bench(paths: &[PathBuf], cfg: &BenchConfig, out: Option<&Path>) -> Result<(), Failure> {
    let records = run_bench(paths, cfg).map_err(|e| fail(EXIT_UNVERIFIED, e.to_string()))?;
    for r in &records {
        if let Some(note) = &r.note {
            eprintln!("{}: {note}", r.game_id);
        }
    }
    let csv = to_csv(&records);
    match out {
        Some(out) => write(out, &csv),
        None => {
            let _ = io::stdout().write_all(csv.as_bytes());
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Cmd::Solve { path, timeout_ms, out } => cmd_solve(&path, timeout_ms, out.as_deref()),
        Cmd::Decompose { path } => cmd_decompose(&path),
        Cmd::Verify { game, profile } => cmd_verify(&game, &profile),
        Cmd::Generate {
            seed,
            out,
            tree,
            p_sum,
            p_product,
            p_elim,
            max_height,
            leaf_size,
            min_strategies,
            max_strategies,
            payoff_budget,
        } => {
            let spec = GenSpec {
                seed,
                p_sum,
                p_product,
                p_elim,
                max_height,
                leaf_size_threshold: leaf_size,
                min_strategies,
                max_strategies,
                payoff_budget,
            };
            let (game, truth) = generate(&spec).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
            let text = serialize_game(&game);
            match out {
                Some(out) => write(&out, &text)?,
                None => print!("{text}"),
            }
            if let Some(tree) = tree {
                write(&tree, &truth.to_string())?;
            }
            Ok(())
        }
        Cmd::Bench {
            paths,
            timeout_ms,
            jobs,
            mode,
            out,
            external,
        } => {
            let cfg = BenchConfig {
                timeout: Duration::from_millis(timeout_ms),
                mode,
                jobs,
                external,
            };
            cmd_bench(&paths, &cfg, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
