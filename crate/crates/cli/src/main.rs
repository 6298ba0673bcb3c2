use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use epicert_core::io::{parse_matrix, read_input};
use epicert_core::report::MatrixCheck;
use epicert_core::{run_classify, run_decide, verify_matrix, DecideOptions, InputDocument, InputFormat, Question, Report, Verdict};
use rayon::prelude::*;
use serde::Serialize;

const EXIT_EXISTS: u8 = 0;
const EXIT_NOT_EXISTS: u8 = 1;
const EXIT_UNDECIDED: u8 = 2;
const EXIT_INPUT: u8 = 64;
const EXIT_INTERNAL: u8 = 70;

#[derive(Parser)]
#[command(name = "epicert", version)]
#[command(about = "Decide whether point correspondences admit a fundamental or essential matrix")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Input format; guessed from the file extension when omitted.
    #[arg(long, global = true, value_enum)]
    input_format: Option<InputKind>,
    /// Residual bound for floating witnesses.
    #[arg(long, global = true, default_value_t = DecideOptions::default().tol_res)]
    tol_res: f64,
    /// Singular value ratio bound for floating witnesses.
    #[arg(long, global = true, default_value_t = DecideOptions::default().tol_rank)]
    tol_rank: f64,
    /// Radius of the integer grid used by point searches (at least 2).
    #[arg(long, global = true, default_value_t = DecideOptions::default().grid_radius)]
    grid_radius: u32,
    /// Include wall-clock timings in reports.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide existence; exit code follows the fundamental verdict for `both`.
    Decide {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Which::Both)]
        which: Which,
        /// Batch mode: also write one report per input file here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Decide whether a fundamental matrix exists.
    DecideF {
        input: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Decide whether an essential matrix exists.
    DecideE {
        input: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Geometric classifiers: collinearity, rank-one kernel, six and four point configurations.
    Classify { input: PathBuf },
    /// Check a 3x3 matrix against the correspondences.
    Verify {
        input: PathBuf,
        /// File holding the matrix as JSON rows or three text lines.
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Print only the witness matrix.
    Witness {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Which::Fundamental)]
        which: Which,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputKind {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Fundamental,
    Essential,
    Both,
}

impl From<Which> for Question {
    fn from(w: Which) -> Self {
        match w {
            Which::Fundamental => Question::Fundamental,
            Which::Essential => Question::Essential,
            Which::Both => Question::Both,
        }
    }
}

impl Common {
    fn options(&self) -> DecideOptions {
        DecideOptions { tol_res: self.tol_res, tol_rank: self.tol_rank, grid_radius: self.grid_radius }
    }

    fn input_format(&self) -> Option<InputFormat> {
        self.input_format.map(|k| match k {
            InputKind::Json => InputFormat::Json,
            InputKind::Csv => InputFormat::Csv,
        })
    }
}

fn verdict_code(v: Option<Verdict>) -> u8 {
    match v {
        Some(Verdict::Exists) => EXIT_EXISTS,
        Some(Verdict::NotExists) => EXIT_NOT_EXISTS,
        Some(Verdict::Undecided) | None => EXIT_UNDECIDED,
    }
}

/// Outcome of one input file.
enum Outcome {
    Report(Box<Report>),
    InputError(String),
    Internal(String),
}

impl Outcome {
    fn code(&self) -> u8 {
        match self {
            Outcome::Report(r) => verdict_code(r.primary_verdict()),
            Outcome::InputError(_) => EXIT_INPUT,
            Outcome::Internal(_) => EXIT_INTERNAL,
        }
    }
}

fn load(path: &Path, common: &Common) -> Result<InputDocument, String> {
    read_input(path, common.input_format()).map_err(|e| format!("{}: {e}", path.display()))
}

fn decide_one(path: &Path, question: Question, common: &Common) -> Outcome {
    let doc = match load(path, common) {
        Ok(d) => d,
        Err(e) => return Outcome::InputError(e),
    };
    match run_decide(&doc, question, &common.options(), common.timings) {
        Ok(r) => Outcome::Report(Box::new(r)),
        Err(e) => Outcome::Internal(format!("{}: {e}", path.display())),
    }
}

fn render(report: &Report, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => report.to_json(),
        OutputFormat::Text => report.to_text(),
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn input_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && matches!(p.extension().and_then(|e| e.to_str()), Some("csv" | "json" | "txt")))
        .collect();
    files.sort();
    Ok(files)
}

#[derive(Serialize)]
struct BatchEntry<'a> {
    file: String,
    exit_code: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
}

#[derive(Serialize)]
struct BatchSummary<'a> {
    schema: &'static str,
    files: Vec<BatchEntry<'a>>,
    counts: BTreeMap<&'static str, usize>,
}

fn decide_batch(dir: &Path, question: Question, out_dir: Option<&Path>, common: &Common) -> u8 {
    let files = match input_files(dir) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{}: {e}", dir.display());
            return EXIT_INPUT;
        }
    };
    let outcomes: Vec<Outcome> = files.par_iter().map(|p| decide_one(p, question, common)).collect();
    if let Some(out) = out_dir {
        if let Err(e) = fs::create_dir_all(out) {
            eprintln!("{}: {e}", out.display());
            return EXIT_INPUT;
        }
        for (path, outcome) in files.iter().zip(&outcomes) {
            if let Outcome::Report(r) = outcome {
                let ext = if common.format == OutputFormat::Json { "report.json" } else { "report.txt" };
                let target = out.join(format!("{}.{ext}", path.file_stem().unwrap_or_default().to_string_lossy()));
                if let Err(e) = fs::write(&target, render(r, common.format)) {
                    eprintln!("{}: {e}", target.display());
                }
            }
        }
    }
    let mut counts = BTreeMap::new();
    let mut entries = Vec::new();
    for (path, outcome) in files.iter().zip(&outcomes) {
        let (verdict, error) = match outcome {
            Outcome::Report(r) => (r.primary_verdict(), None),
            Outcome::InputError(e) | Outcome::Internal(e) => (None, Some(e.as_str())),
        };
        let key = match (outcome, verdict) {
            (Outcome::InputError(_), _) => "input_error",
            (Outcome::Internal(_), _) => "internal_error",
            (_, Some(Verdict::Exists)) => "exists",
            (_, Some(Verdict::NotExists)) => "not_exists",
            _ => "undecided",
        };
        *counts.entry(key).or_insert(0) += 1;
        let file = path.file_name().unwrap_or_default().to_string_lossy().into_owned();
        entries.push(BatchEntry { file, exit_code: outcome.code(), verdict, error });
    }
    match common.format {
        OutputFormat::Json => {
            print!("{}", json(&BatchSummary { schema: "epipolar-batch/1", files: entries, counts }));
        }
        OutputFormat::Text => {
            for (e, outcome) in entries.iter().zip(&outcomes) {
                println!("== {} (exit {})", e.file, e.exit_code);
                match outcome {
                    Outcome::Report(r) => print!("{}", r.to_text()),
                    Outcome::InputError(m) | Outcome::Internal(m) => println!("error: {m}"),
                }
            }
            let summary: Vec<String> = counts.iter().map(|(k, v)| format!("{k} {v}")).collect();
            println!("summary: {}", summary.join(", "));
        }
    }
    if outcomes.iter().any(|o| matches!(o, Outcome::InputError(_))) {
        EXIT_INPUT
    } else {
        EXIT_EXISTS
    }
}

fn decide(input: &Path, question: Question, out_dir: Option<&Path>, common: &Common) -> u8 {
    if input.is_dir() {
        return decide_batch(input, question, out_dir, common);
    }
    let outcome = decide_one(input, question, common);
    match &outcome {
        Outcome::Report(r) => print!("{}", render(r, common.format)),
        Outcome::InputError(e) | Outcome::Internal(e) => eprintln!("error: {e}"),
    }
    outcome.code()
}

fn classify(input: &Path, common: &Common) -> u8 {
    let doc = match load(input, common) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    match run_classify(&doc, common.timings) {
        Ok(r) => {
            print!("{}", render(&r, common.format));
            EXIT_EXISTS
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INTERNAL
        }
    }
}

fn verify(input: &Path, matrix: &Path, common: &Common) -> u8 {
    let doc = match load(input, common) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let m = match fs::read_to_string(matrix).map_err(|e| e.to_string()).and_then(|t| parse_matrix(&t).map_err(|e| e.to_string())) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {}: {e}", matrix.display());
            return EXIT_INPUT;
        }
    };
    let check: MatrixCheck = match verify_matrix(&doc.correspondences, &m, &common.options()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    match common.format {
        OutputFormat::Json => print!("{}", json(&check)),
        OutputFormat::Text => {
            println!("rank {}, constraints hold: {}", check.rank, check.satisfies);
            println!("sigma ratios {:.3e} {:.3e}, Demazure max {:.3e}", check.sigma_ratios[0], check.sigma_ratios[1], check.demazure_max);
            println!("fundamental: {}, essential: {}", check.fundamental, check.essential);
        }
    }
    if check.fundamental {
        EXIT_EXISTS
    } else {
        EXIT_NOT_EXISTS
    }
}

fn witness(input: &Path, which: Which, common: &Common) -> u8 {
    let question = if which == Which::Essential { Question::Essential } else { Question::Fundamental };
    let outcome = decide_one(input, question, common);
    let report = match &outcome {
        Outcome::Report(r) => r,
        Outcome::InputError(e) | Outcome::Internal(e) => {
            eprintln!("error: {e}");
            return outcome.code();
        }
    };
    let value = match question {
        Question::Essential => report.essential.as_ref().and_then(|d| d.witness.as_ref()).map(|w| serde_json::to_value(w).expect("serializable")),
        _ => report.fundamental.as_ref().and_then(|d| d.witness.as_ref()).map(|w| serde_json::to_value(w).expect("serializable")),
    };
    match value {
        Some(v) => print!("{}", json(&v)),
        None => eprintln!("no witness: verdict {:?}", report.primary_verdict()),
    }
    outcome.code()
}

fn main() -> ExitCode {
    // clap's own usage errors would exit with 2, which means UNDECIDED here
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { EXIT_EXISTS });
        }
    };
    let common = &cli.common;
    if let Err(e) = common.options().validate() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_INPUT);
    }
    let code = match &cli.command {
        Command::Decide { input, which, out_dir } => decide(input, (*which).into(), out_dir.as_deref(), common),
        Command::DecideF { input, out_dir } => decide(input, Question::Fundamental, out_dir.as_deref(), common),
        Command::DecideE { input, out_dir } => decide(input, Question::Essential, out_dir.as_deref(), common),
        Command::Classify { input } => classify(input, common),
        Command::Verify { input, matrix } => verify(input, matrix, common),
        Command::Witness { input, which } => witness(input, *which, common),
    };
    ExitCode::from(code)
}
