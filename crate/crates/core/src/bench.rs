//! Benchmark harness: decomposition-first solving against direct support
//! enumeration on a corpus of game files, one CSV row per game.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use web_time::Instant;

use crate::format::{format_profile, parse_game, serialize_game};
use crate::game::verify_equilibrium;
use crate::solver::solve_until;
use crate::support::{solve_leaf_until, Deadline};

pub const CSV_HEADER: &str = "game_id,n,m,S,lambda,t_decomp_ms,t_direct_ms,verified,timeout_ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchMode {
    Decomp,
    Direct,
    Both,
}

impl BenchMode {
    fn decomp(self) -> bool {
        matches!(self, BenchMode::Decomp | BenchMode::Both)
    }

    fn direct(self) -> bool {
        matches!(self, BenchMode::Direct | BenchMode::Both)
    }
}

impl std::str::FromStr for BenchMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "decomp" => Ok(BenchMode::Decomp),
            "direct" => Ok(BenchMode::Direct),
            "both" => Ok(BenchMode::Both),
            other => Err(format!("unknown mode `{other}` (expected decomp, direct or both)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub timeout: Duration,
    pub mode: BenchMode,
    pub jobs: usize,
    /// Program run as `<program> <game file>` in place of the internal
    /// direct solver. Its wall time is reported in `t_direct_ms`.
    pub external: Option<PathBuf>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            timeout: Duration::from_millis(3000),
            mode: BenchMode::Both,
            jobs: 1,
            external: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub game_id: String,
    /// `None` when the file could not be read or parsed.
    pub dims: Option<(usize, usize)>,
    pub lambda: Option<usize>,
    pub t_decomp: Option<Duration>,
    pub t_direct: Option<Duration>,
    pub verified: bool,
    pub timeout: Duration,
    /// Reason the row carries no decomposition result, if any.
    pub note: Option<String>,
}

fn millis(d: Option<Duration>) -> String {
    match d {
        Some(d) => format!("{:.3}", d.as_secs_f64() * 1000.0),
        None => "NA".to_string(),
    }
}

fn na<T: fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            csv_field(&self.game_id),
            na(self.dims.map(|d| d.0)),
            na(self.dims.map(|d| d.1)),
            na(self.dims.map(|d| d.0 * d.1)),
            na(self.lambda),
            millis(self.t_decomp),
            millis(self.t_direct),
            self.verified,
            self.timeout.as_millis()
        )
    }
}

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// A decomposition-path equilibrium failed exact verification.
#[derive(Debug, Clone, thiserror::Error)]
#[error("equilibrium for {game_id} failed verification\n{dump}")]
pub struct SoundnessFailure {
    pub game_id: String,
    pub dump: String,
}

fn game_id(path: &Path) -> String {
    path.file_stem()
        .or_else(|| path.file_name())
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn run_external(program: &Path, game: &Path, timeout: Duration) -> Option<Duration> {
    let start = Instant::now();
    let mut child = Command::new(program)
        .arg(game)
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .spawn()
        .ok()?;
    loop {
        match child.try_wait() {
            Ok(Some(status)) => return status.success().then(|| start.elapsed()),
            Ok(None) if start.elapsed() >= timeout => {
                let _ = child.kill();
                let _ = child.wait();
                return None;
            }
            Ok(None) => std::thread::sleep(Duration::from_millis(2)),
            Err(_) => return None,
        }
    }
}

/// Benchmarks one game file.
pub fn bench_one(path: &Path, cfg: &BenchConfig) -> Result<BenchRecord, SoundnessFailure> {
    let mut record = BenchRecord {
        game_id: game_id(path),
        dims: None,
        lambda: None,
        t_decomp: None,
        t_direct: None,
        verified: false,
        timeout: cfg.timeout,
        note: None,
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            record.note = Some(format!("cannot read {}: {e}", path.display()));
            return Ok(record);
        }
    };
    let game = match parse_game(&text) {
        Ok(g) => g,
        Err(e) => {
            record.note = Some(format!("cannot parse {}: {e}", path.display()));
            return Ok(record);
        }
    };
    record.dims = Some((game.rows(), game.cols()));

    if cfg.mode.decomp() {
        let start = Instant::now();
        match solve_until(&game, &Deadline::at(start + cfg.timeout)) {
            Ok(report) => {
                record.t_decomp = Some(start.elapsed());
                record.lambda = Some(report.lambda);
                let ok = verify_equilibrium(&game, &report.equilibrium).expect("solver keeps shapes");
                if !ok {
                    return Err(SoundnessFailure {
                        game_id: record.game_id,
                        dump: format!(
                            "{}\n{}tree: {}",
                            serialize_game(&game),
                            format_profile(&report.equilibrium),
                            report.tree.summary()
                        ),
                    });
                }
                record.verified = true;
            }
            Err(_) => record.note = Some("decomposition solve timed out".into()),
        }
    }
    if cfg.mode.direct() {
        record.t_direct = match &cfg.external {
            Some(program) => run_external(program, path, cfg.timeout),
            None => {
                let start = Instant::now();
                solve_leaf_until(&game, &Deadline::at(start + cfg.timeout))
                    .ok()
                    .map(|_| start.elapsed())
            }
        };
    }
    Ok(record)
}

/// Runs the corpus on `cfg.jobs` workers. Rows come back in corpus order.
pub fn run_bench(paths: &[PathBuf], cfg: &BenchConfig) -> Result<Vec<BenchRecord>, SoundnessFailure> {
    let jobs = cfg.jobs.max(1).min(paths.len().max(1));
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<BenchRecord, SoundnessFailure>>>> = Mutex::new(vec![None; paths.len()]);
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(path) = paths.get(i) else { break };
                let r = bench_one(path, cfg);
                let failed = r.is_err();
                results.lock().unwrap()[i] = Some(r);
                if failed {
                    // stop handing out work; already running games finish
                    next.store(paths.len(), Ordering::SeqCst);
                }
            });
        }
    });
    let mut out = Vec::with_capacity(paths.len());
    for r in results.into_inner().unwrap().into_iter().flatten() {
        out.push(r?);
    }
    Ok(out)
}
