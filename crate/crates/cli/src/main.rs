//! Command-line driver: corpus runs, single-instance checks, corpus listing,
//! and one-shot identity residuals.
//!
//! Exit codes: 0 on success, 1 when a rigor gate fails (a chain-variant check
//! fails or an identity residual exceeds its tolerance), 2 on usage or
//! evaluation errors. Stated-variant failures are findings and do not affect
//! the exit code.

use clap::{Parser, Subcommand};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use fraclab_core::fracops::FracParams;
use fraclab_core::harness::{
    parse_config, render_report, to_json_17, OutputFormat, RunReport,
};
use fraclab_core::identities::{lemma1_residual, lemma2_residual};
use fraclab_core::ineqchecks::{
    run_check, CheckId, CheckInstance, CheckOutcome, CheckSettings, Status, Variant,
};
use fraclab_core::parallel::ExecMode;
use fraclab_core::testfuncs::{corpus_lookup, corpus_standard};

#[derive(Parser)]
#[command(name = "fraclab", version, about = "Fractional-operator laboratory: identity residuals and inequality margin checks over an m-convex test corpus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured corpus and emit a report
    Run {
        /// Path to the TOML configuration document
        #[arg(long)]
        config: PathBuf,
        /// Directory for the report file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report format: structured | tabular
        #[arg(long, default_value = "structured")]
        format: String,
        /// Evaluate instances sequentially instead of in parallel
        #[arg(long)]
        sequential: bool,
    },
    /// Evaluate one check on one instance and print the outcome rows
    Check {
        /// Check id: T1..T6, C1..C3, R1
        #[arg(long)]
        id: String,
        /// Corpus function label
        #[arg(long)]
        f: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        /// Evaluation point; defaults to a + 0.25(b-a)
        #[arg(long)]
        x: Option<f64>,
        /// Second point for one-sided checks; defaults to a + 0.75(b-a)
        #[arg(long)]
        y: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        /// Variant to evaluate: stated | chain; both when omitted
        #[arg(long)]
        variant: Option<String>,
    },
    /// Corpus utilities
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Evaluate one identity residual
    Residuals {
        /// Which identity: 1 (two-sided over [a,b]) or 2 (one-sided on [x,y])
        #[arg(long)]
        lemma: u8,
        /// Corpus function label
        #[arg(long)]
        f: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        x: Option<f64>,
        #[arg(long)]
        y: Option<f64>,
        /// Acceptance threshold on the residual
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// List the standard corpus labels
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> fraclab_core::Result<ExitCode> {
    match cli.command {
        Command::Run { config, out, format, sequential } => {
            let text = fs::read_to_string(&config)?;
            let cfg = parse_config(&text)?;
            let format = OutputFormat::from_str(&format)?;
            let mode = if sequential { ExecMode::Sequential } else { ExecMode::Parallel };
            let report = fraclab_core::harness::run_corpus_mode(&cfg, mode)?;
            let rendered = render_report(&report, format);
            match out {
                Some(dir) => {
                    fs::create_dir_all(&dir)?;
                    let name = match format {
                        OutputFormat::Structured => "report.json",
                        OutputFormat::Tabular => "report.tsv",
                    };
                    let path = dir.join(name);
                    fs::write(&path, rendered)?;
                    print_run_summary(&report);
                    println!("report written to {}", path.display());
                }
                None => {
                    print!("{rendered}");
                    print_run_summary(&report);
                }
            }
            Ok(gate_code(report.gate_passes()))
        }
        Command::Check { id, f, alpha, a, b, x, y, m, q, variant } => {
            let id = CheckId::from_str(&id)?;
            let spec = corpus_lookup(&f)?;
            let params = FracParams::new(alpha, a, b)?;
            let w = b - a;
            let x = x.unwrap_or(a + 0.25 * w);
            let y = y.unwrap_or(a + 0.75 * w);
            let inst = CheckInstance::new(spec, params, x, Some(y), m, Some(q))?;
            let variants = match variant {
                Some(v) => vec![Variant::from_str(&v)?],
                None => vec![Variant::Stated, Variant::Chain],
            };
            let settings = CheckSettings::default();
            let mut outcomes: Vec<CheckOutcome> = Vec::new();
            for v in variants {
                outcomes.push(run_check(id, &inst, v, &settings)?);
            }
            print!("{}", to_json_17(&outcomes));
            let chain_failure = outcomes
                .iter()
                .any(|o| o.variant == Variant::Chain && o.status == Status::Fails);
            Ok(gate_code(!chain_failure))
        }
        Command::Corpus { action } => match action {
            CorpusAction::List => {
                for f in corpus_standard() {
                    println!("{}\t{}", f.label(), f.describe());
                }
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Residuals { lemma, f, alpha, a, b, x, y, tol } => {
            let spec = corpus_lookup(&f)?;
            let params = FracParams::new(alpha, a, b)?;
            let w = b - a;
            let residual = match lemma {
                1 => lemma1_residual(&spec, &params, &Default::default())?,
                2 => {
                    let x = x.unwrap_or(a + 0.25 * w);
                    let y = y.unwrap_or(a + 0.75 * w);
                    lemma2_residual(&spec, &params, x, y, &Default::default())?
                }
                other => {
                    return Err(fraclab_core::Error::Domain(format!(
                        "lemma must be 1 or 2, got {other}"
                    )))
                }
            };
            print!("{}", to_json_17(&residual));
            Ok(gate_code(residual.residual <= tol))
        }
    }
}

fn gate_code(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_run_summary(report: &RunReport) {
    let s = &report.summary;
    println!(
        "rows: {} (chain failures: {}, stated failures: {}); residuals: {} (failures: {})",
        s.rows_total, s.chain_failures, s.stated_failures, s.residuals_total, s.residual_failures
    );
    println!(
        "max residual: lemma1 {:.3e}, lemma2 {:.3e}",
        s.max_residual_lemma1, s.max_residual_lemma2
    );
}
