//! `vandersparse` command-line tool.
//!
//! Every subcommand writes machine-readable output to stdout (or `--output`)
//! and echoes its fully resolved configuration: JSON documents carry a
//! `config` member, CSV files start with a `# config: {...}` comment line.
//! Exit status is 0 on success, 1 on domain errors and 2 on usage errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use vandersparse::bounds::{asymptotic_bound, distortion_lower_bound, kappa_0, BoundInput, BoundReport};
use vandersparse::decoder::{self, DecodeStatus, RoundtripTrial};
use vandersparse::empirical::{self, DistortionEstimate, EstimateOptions, Verdict};
use vandersparse::frame::DEFAULT_BUDGET;
use vandersparse::{rng, ComplexVector, Execution, Frame, SparseRep};

#[derive(Parser, Debug)]
#[command(name = "vandersparse", version, about = "Sparse representations over Vandermonde frames")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a frame and print it as JSON.
    Frame(FrameArgs),
    /// Synthesize a signal from a sparse representation.
    Encode(EncodeArgs),
    /// Recover the unique sparse representation of a signal.
    Decode(DecodeArgs),
    /// Synthesize random sparse signals and decode them again.
    Roundtrip(RoundtripArgs),
    /// Evaluate the average-distortion lower bound.
    Bound(BoundArgs),
    /// Monte-Carlo estimate of the average distortion against the bound.
    Simulate(SimulateArgs),
    /// Run `simulate` over an (N, M, L) grid, resumable from a checkpoint.
    Sweep(SweepArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Seed for all randomness; a random seed is chosen and reported if omitted.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the main output here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Run trials and samples on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args, Debug)]
struct FrameArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    /// `vandermonde` (roots of unity) or `gaussian` (i.i.d. complex normal rows).
    #[arg(long, default_value = "vandermonde")]
    kind: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct FrameSource {
    /// Frame file, or `vandermonde` / `gaussian` to build one from --n and --m.
    #[arg(long, default_value = "vandermonde")]
    frame: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Args, Debug)]
struct EncodeArgs {
    #[command(flatten)]
    source: FrameSource,
    /// Representation file `{"support": [1-based], "values": [[re, im], ...]}`.
    #[arg(long, conflicts_with = "weight")]
    rep: Option<PathBuf>,
    /// Draw a random representation of this weight instead.
    #[arg(long)]
    weight: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    #[command(flatten)]
    source: FrameSource,
    /// Signal file: `[[re, im], ...]` or an `encode` output; `-` reads stdin.
    #[arg(long)]
    signal: PathBuf,
    /// Relative residual accepted as a successful decode.
    #[arg(long, default_value_t = decoder::RESIDUAL_TOLERANCE)]
    tol: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct RoundtripArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    weight: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = decoder::RESIDUAL_TOLERANCE)]
    tol: f64,
    /// Largest relative value error counted as a success.
    #[arg(long, default_value_t = 1e-6)]
    value_tol: f64,
    /// Also write one CSV row per trial here.
    #[arg(long)]
    trials_csv: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct BoundArgs {
    /// Evaluate the large-N bound over --r and --eps instead.
    #[arg(long)]
    asymptotic: bool,
    #[arg(long, required_unless_present = "asymptotic")]
    n: Option<usize>,
    #[arg(long, required_unless_present = "asymptotic")]
    m: Option<usize>,
    /// Sparsity levels, comma separated; all of 0..=N if omitted.
    #[arg(long, value_delimiter = ',')]
    l: Vec<usize>,
    /// Redundancies M/N for --asymptotic, comma separated.
    #[arg(long, value_delimiter = ',', requires = "asymptotic")]
    r: Vec<f64>,
    /// Sparsity ratios L/N for --asymptotic, comma separated.
    #[arg(long, value_delimiter = ',', requires = "asymptotic")]
    eps: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    source: FrameSource,
    #[arg(long)]
    l: usize,
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    /// Largest number of supports searched exhaustively.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Fall back to greedy search over budget; such estimates get no verdict.
    #[arg(long)]
    greedy: bool,
    /// Also write one CSV row per sample here.
    #[arg(long)]
    samples_csv: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Dimensions, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Frame sizes, comma separated; pairs with M < N are skipped.
    #[arg(long, value_delimiter = ',', required = true)]
    m: Vec<usize>,
    /// Sparsity levels, comma separated; all of 0..=N if omitted.
    #[arg(long, value_delimiter = ',')]
    l: Vec<usize>,
    /// `vandermonde` or `gaussian`.
    #[arg(long, default_value = "vandermonde")]
    frame: String,
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Completed cells are recorded here and skipped on a rerun.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    common: Common,
}

/// Anything that ends the run with exit status 1.
#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Outcome<()> {
    match command {
        Command::Frame(a) => cmd_frame(a),
        Command::Encode(a) => cmd_encode(a),
        Command::Decode(a) => cmd_decode(a),
        Command::Roundtrip(a) => cmd_roundtrip(a),
        Command::Bound(a) => cmd_bound(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("seed: {s}");
        s
    })
}

fn exec(common: &Common) -> Execution {
    if common.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn emit(output: Option<&Path>, text: &str) -> Outcome<()> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_json(output: Option<&Path>, value: &Value) -> Outcome<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(output, &text)
}

fn csv_document(config: &Value, header: &str, rows: &[String]) -> String {
    let mut text = format!("# config: {config}\n{header}\n");
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    text
}

/// Shortest round-trip form, switching to exponent notation for very large
/// or small magnitudes.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn read_text(path: &Path) -> Outcome<String> {
    if path == Path::new("-") {
        return Ok(io::read_to_string(io::stdin())?);
    }
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

/// Builds a named frame or loads one from a file; a file may also be the
/// output of `frame`, which wraps the frame in a `frame` member.
fn build_frame(spec: &str, n: Option<usize>, m: Option<usize>, seed: u64) -> Outcome<Frame> {
    let dims = || -> Outcome<(usize, usize)> {
        match (n, m) {
            (Some(n), Some(m)) => Ok((n, m)),
            _ => Err(Failure(format!("--n and --m are required with --frame {spec}"))),
        }
    };
    match spec {
        "vandermonde" => {
            let (n, m) = dims()?;
            Ok(Frame::roots_of_unity(m, n)?)
        }
        "gaussian" => {
            let (n, m) = dims()?;
            Ok(Frame::gaussian(m, n, &mut rng::stream(seed, u64::MAX))?)
        }
        path => {
            let value: Value = serde_json::from_str(&read_text(Path::new(path))?)?;
            let value = value.get("frame").cloned().unwrap_or(value);
            let frame = Frame::from_json(&value.to_string())?;
            if n.is_some_and(|n| n != frame.n()) || m.is_some_and(|m| m != frame.m()) {
                return Err(Failure(format!(
                    "frame file has N = {}, M = {}, which contradicts --n/--m",
                    frame.n(),
                    frame.m()
                )));
            }
            Ok(frame)
        }
    }
}

fn frame_json(frame: &Frame) -> Value {
    serde_json::from_str(&frame.to_json()).expect("frame JSON is valid")
}

fn cmd_frame(a: FrameArgs) -> Outcome<()> {
    let seed = resolve_seed(a.common.seed);
    let frame = build_frame(&a.kind, Some(a.n), Some(a.m), seed)?;
    let config = json!({"subcommand": "frame", "n": a.n, "m": a.m, "kind": a.kind, "seed": seed});
    emit_json(
        a.common.output.as_deref(),
        &json!({"config": config, "frame_id": frame.id(), "frame": frame_json(&frame)}),
    )
}

#[derive(Deserialize)]
struct RepFile {
    /// 1-based
    support: Vec<usize>,
    values: Vec<Complex64>,
}

fn cmd_encode(a: EncodeArgs) -> Outcome<()> {
    let seed = resolve_seed(a.common.seed);
    let frame = build_frame(&a.source.frame, a.source.n, a.source.m, seed)?;
    let rep = match (&a.rep, a.weight) {
        (Some(path), _) => {
            let file: RepFile = serde_json::from_str(&read_text(path)?)?;
            if file.support.contains(&0) {
                return Err(Failure("support indices are 1-based".into()));
            }
            if file.support.len() != file.values.len() {
                return Err(Failure("support and values differ in length".into()));
            }
            let mut pairs: Vec<(usize, Complex64)> =
                file.support.iter().map(|j| j - 1).zip(file.values.iter().copied()).collect();
            pairs.sort_by_key(|p| p.0);
            let (support, values) = pairs.into_iter().unzip();
            SparseRep::new(frame.m(), support, values)?
        }
        (None, Some(w)) => {
            if w > frame.m() {
                return Err(Failure(format!("weight {w} exceeds M = {}", frame.m())));
            }
            SparseRep::random(frame.m(), w, 0.5, 2.0, &mut rng::stream(seed, 0))
        }
        (None, None) => return Err(Failure("one of --rep or --weight is required".into())),
    };
    let signal = frame.synthesize_sparse(&rep)?;
    let config = json!({
        "subcommand": "encode",
        "frame": a.source.frame,
        "frame_id": frame.id(),
        "n": frame.n(),
        "m": frame.m(),
        "rep": a.rep,
        "weight": rep.weight(),
        "seed": seed,
    });
    emit_json(
        a.common.output.as_deref(),
        &json!({
            "config": config,
            "rep": {"support": rep.support_one_based(), "values": rep.values()},
            "signal": signal.as_slice(),
        }),
    )
}

fn cmd_decode(a: DecodeArgs) -> Outcome<()> {
    let seed = resolve_seed(a.common.seed);
    let frame = build_frame(&a.source.frame, a.source.n, a.source.m, seed)?;
    let value: Value = serde_json::from_str(&read_text(&a.signal)?)?;
    let value = value.get("signal").cloned().unwrap_or(value);
    let signal: Vec<Complex64> = serde_json::from_value(value)?;
    let r = ComplexVector::new(signal)?;
    let out = decoder::decode(&frame, &r, a.tol)?;
    let mut doc = serde_json::to_value(out.to_wire())?;
    doc["config"] = json!({
        "subcommand": "decode",
        "frame": a.source.frame,
        "frame_id": frame.id(),
        "n": frame.n(),
        "m": frame.m(),
        "signal": a.signal,
        "tol": a.tol,
        "seed": seed,
    });
    emit_json(a.common.output.as_deref(), &doc)
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let k = v.len() / 2;
    if v.len() % 2 == 1 {
        v[k]
    } else {
        0.5 * (v[k - 1] + v[k])
    }
}

fn cmd_roundtrip(a: RoundtripArgs) -> Outcome<()> {
    let seed = resolve_seed(a.common.seed);
    let frame = Frame::roots_of_unity(a.m, a.n)?;
    let trials = decoder::roundtrip(&frame, a.weight, a.trials, seed, a.tol, exec(&a.common))?;
    let successes = trials.iter().filter(|t| t.success(a.value_tol)).count();
    let count = |s: DecodeStatus| trials.iter().filter(|t| t.status == s).count();
    let times: Vec<f64> = trials.iter().map(|t| t.elapsed_secs).collect();
    let max_time = times.iter().cloned().fold(0.0, f64::max);
    let config = json!({
        "subcommand": "roundtrip",
        "n": a.n,
        "m": a.m,
        "weight": a.weight,
        "trials": a.trials,
        "tol": a.tol,
        "value_tol": a.value_tol,
        "seed": seed,
    });
    if let Some(path) = &a.trials_csv {
        fs::write(path, trials_csv(&config, &trials))?;
    }
    emit_json(
        a.common.output.as_deref(),
        &json!({
            "config": config,
            "frame_id": frame.id(),
            "trials": trials.len(),
            "successes": successes,
            "success_rate": if trials.is_empty() { 0.0 } else { successes as f64 / trials.len() as f64 },
            "status_counts": {
                "ok": count(DecodeStatus::Ok),
                "weight_exceeds_half_n": count(DecodeStatus::WeightExceedsHalfN),
                "residual_too_large": count(DecodeStatus::ResidualTooLarge),
            },
            "median_decode_secs": median(times),
            "max_decode_secs": max_time,
        }),
    )
}

fn trials_csv(config: &Value, trials: &[RoundtripTrial]) -> String {
    let rows: Vec<String> = trials
        .iter()
        .map(|t| {
            format!(
                "{},{},{},{},{},{}",
                t.index,
                t.status.as_str(),
                t.support_exact,
                num(t.max_value_rel_error),
                num(t.residual),
                num(t.elapsed_secs)
            )
        })
        .collect();
    csv_document(config, "trial,status,support_exact,max_value_rel_error,residual,elapsed_secs", &rows)
}

fn bound_row(r: &BoundReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        r.input.n,
        r.input.m,
        r.input.l,
        num(r.input.log2_t()),
        opt(r.kappa_c),
        opt(r.rho_0),
        r.branch.as_str(),
        num(r.lower_bound)
    )
}

fn cmd_bound(a: BoundArgs) -> Outcome<()> {
    let output = a.output.as_deref();
    if a.asymptotic {
        if a.r.is_empty() || a.eps.is_empty() {
            return Err(Failure("--asymptotic needs --r and --eps".into()));
        }
        let config = json!({"subcommand": "bound", "asymptotic": true, "r": a.r, "eps": a.eps});
        let mut records = Vec::new();
        for &r in &a.r {
            for &eps in &a.eps {
                records.push((r, eps, kappa_0(r, eps)?, asymptotic_bound(r, eps)?));
            }
        }
        return match a.format {
            Format::Csv => {
                let rows: Vec<String> =
                    records.iter().map(|&(r, e, k, b)| [r, e, k, b].map(num).join(",")).collect();
                emit(output, &csv_document(&config, "r,eps,kappa0,bound", &rows))
            }
            Format::Json => {
                let rows: Vec<Value> = records
                    .iter()
                    .map(|(r, e, k, b)| json!({"r": r, "eps": e, "kappa0": k, "bound": b}))
                    .collect();
                emit_json(output, &json!({"config": config, "rows": rows}))
            }
        };
    }

    let (n, m) = (a.n.expect("required by clap"), a.m.expect("required by clap"));
    let ls: Vec<usize> = if a.l.is_empty() { (0..=n).collect() } else { a.l.clone() };
    let config = json!({"subcommand": "bound", "asymptotic": false, "n": n, "m": m, "l": ls});
    let reports = ls
        .iter()
        .map(|&l| distortion_lower_bound(&BoundInput::new(n, m, l)?))
        .collect::<vandersparse::Result<Vec<_>>>()?;
    match a.format {
        Format::Csv => {
            let rows: Vec<String> = reports.iter().map(bound_row).collect();
            emit(output, &csv_document(&config, "N,M,L,T_log2,kappa_c,rho_0,branch,lower_bound", &rows))
        }
        Format::Json => {
            let rows: Vec<Value> = reports.iter().map(bound_json).collect();
            emit_json(output, &json!({"config": config, "rows": rows}))
        }
    }
}

fn bound_json(r: &BoundReport) -> Value {
    json!({
        "N": r.input.n,
        "M": r.input.m,
        "L": r.input.l,
        "T_log2": r.input.log2_t(),
        "kappa_c": r.kappa_c,
        "rho_0": r.rho_0,
        "branch": r.branch.as_str(),
        "lower_bound": r.lower_bound,
    })
}

/// Estimate, bound and verdict for one cell.
struct Cell {
    estimate: DistortionEstimate,
    bound: BoundReport,
    verdict: Option<Verdict>,
}

fn simulate_cell(frame: &Frame, l: usize, samples: usize, seed: u64, opts: &EstimateOptions) -> Outcome<(Cell, Vec<empirical::DistortionSample>)> {
    let (records, approximate) = empirical::distortion_samples(frame, l, samples, seed, opts)?;
    let config = empirical::EstimateConfig { frame_id: frame.id(), n: frame.n(), m: frame.m(), l, seed };
    let estimate = empirical::summarize(&records, approximate, config);
    let bound = distortion_lower_bound(&BoundInput::new(frame.n(), frame.m(), l)?)?;
    let verdict = if approximate { None } else { Some(empirical::compare_to_bound(&estimate, &bound)?) };
    Ok((Cell { estimate, bound, verdict }, records))
}

fn cmd_simulate(a: SimulateArgs) -> Outcome<()> {
    let seed = resolve_seed(a.common.seed);
    let frame = build_frame(&a.source.frame, a.source.n, a.source.m, seed)?;
    let opts = EstimateOptions { budget: a.budget, exec: exec(&a.common), greedy_fallback: a.greedy };
    let (cell, records) = simulate_cell(&frame, a.l, a.samples, seed, &opts)?;
    let config = json!({
        "subcommand": "simulate",
        "frame": a.source.frame,
        "frame_id": frame.id(),
        "n": frame.n(),
        "m": frame.m(),
        "l": a.l,
        "samples": a.samples,
        "budget": a.budget,
        "greedy": a.greedy,
        "seed": seed,
    });
    if let Some(path) = &a.samples_csv {
        let rows: Vec<String> = records
            .iter()
            .map(|s| {
                let support: Vec<String> = s.support.iter().map(|j| (j + 1).to_string()).collect();
                format!("{},{},{},{}", s.index, num(s.distortion), support.join(" "), s.ties_broken)
            })
            .collect();
        fs::write(path, csv_document(&config, "sample,distortion,support,ties_broken", &rows))?;
    }
    emit_json(
        a.common.output.as_deref(),
        &json!({
            "config": config,
            "estimate": cell.estimate,
            "bound": bound_json(&cell.bound),
            "verdict": cell.verdict,
        }),
    )
}

/// One finished sweep cell, as stored in the checkpoint file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct SweepRow {
    n: usize,
    m: usize,
    l: usize,
    frame_id: String,
    seed: u64,
    mean: f64,
    stderr: f64,
    lower_bound: f64,
    branch: String,
    pass: Option<bool>,
    margin: Option<f64>,
}

impl SweepRow {
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.m,
            self.l,
            self.frame_id,
            self.seed,
            num(self.mean),
            num(self.stderr),
            num(self.lower_bound),
            self.branch,
            self.pass.map(|p| p.to_string()).unwrap_or_default(),
            opt(self.margin)
        )
    }
}

/// Checkpoint lines: first the sweep config, then one [`SweepRow`] per cell.
fn load_checkpoint(path: &Path, config: &Value) -> Outcome<Vec<SweepRow>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let Some(first) = lines.next() else { return Ok(Vec::new()) };
    let stored: Value = serde_json::from_str(first)?;
    if &stored != config {
        return Err(Failure(format!("checkpoint {} belongs to a different sweep", path.display())));
    }
    // A torn final line from an interrupted write is dropped.
    Ok(lines.filter_map(|l| serde_json::from_str(l).ok()).collect())
}

fn cmd_sweep(a: SweepArgs) -> Outcome<()> {
    let seed = resolve_seed(a.common.seed);
    if a.frame != "vandermonde" && a.frame != "gaussian" {
        return Err(Failure(format!("sweep --frame must be vandermonde or gaussian, got {}", a.frame)));
    }
    let mut cells = Vec::new();
    for &n in &a.n {
        for &m in &a.m {
            if m < n {
                continue;
            }
            let ls: Vec<usize> = if a.l.is_empty() { (0..=n).collect() } else { a.l.iter().copied().filter(|&l| l <= n).collect() };
            cells.extend(ls.into_iter().map(|l| (n, m, l)));
        }
    }
    let config = json!({
        "subcommand": "sweep",
        "n": a.n,
        "m": a.m,
        "l": a.l,
        "frame": a.frame,
        "samples": a.samples,
        "budget": a.budget,
        "seed": seed,
    });

    let mut done = match &a.checkpoint {
        Some(path) => load_checkpoint(path, &config)?,
        None => Vec::new(),
    };
    let mut log = match &a.checkpoint {
        Some(path) => {
            // Rewritten from the parsed rows so a torn tail never merges with new lines.
            let mut file = fs::File::create(path)?;
            writeln!(file, "{config}")?;
            for row in &done {
                writeln!(file, "{}", serde_json::to_string(row)?)?;
            }
            file.flush()?;
            Some(file)
        }
        None => None,
    };

    let opts = EstimateOptions { budget: a.budget, exec: exec(&a.common), greedy_fallback: false };
    for (index, &(n, m, l)) in cells.iter().enumerate() {
        if done.iter().any(|r| (r.n, r.m, r.l) == (n, m, l)) {
            continue;
        }
        // Frames and samples depend only on (seed, N, M), so resumed cells
        // reproduce what an uninterrupted run would have computed.
        let cell_seed = seed ^ ((n as u64) << 40 | (m as u64) << 20);
        let frame = build_frame(&a.frame, Some(n), Some(m), cell_seed)?;
        let (cell, _) = simulate_cell(&frame, l, a.samples, cell_seed, &opts)?;
        let row = SweepRow {
            n,
            m,
            l,
            frame_id: frame.id(),
            seed: cell_seed,
            mean: cell.estimate.mean,
            stderr: cell.estimate.stderr,
            lower_bound: cell.bound.lower_bound,
            branch: cell.bound.branch.as_str().to_string(),
            pass: cell.verdict.map(|v| v.pass),
            margin: cell.verdict.map(|v| v.margin),
        };
        if let Some(file) = log.as_mut() {
            writeln!(file, "{}", serde_json::to_string(&row)?)?;
            file.flush()?;
        }
        eprintln!("cell {}/{}: N={n} M={m} L={l}", index + 1, cells.len());
        done.push(row);
    }

    let ordered: Vec<&SweepRow> = cells
        .iter()
        .map(|&(n, m, l)| done.iter().find(|r| (r.n, r.m, r.l) == (n, m, l)).expect("every cell computed"))
        .collect();
    let output = a.common.output.as_deref();
    match a.format {
        Format::Csv => {
            let rows: Vec<String> = ordered.iter().map(|r| r.csv()).collect();
            emit(
                output,
                &csv_document(&config, "N,M,L,frame_id,seed,mean,stderr,lower_bound,branch,pass,margin", &rows),
            )
        }
        Format::Json => emit_json(output, &json!({"config": config, "rows": ordered})),
    }
}
