//! `agc`: assume-guarantee contract operations on JSON contract files.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use agc_cli::{document, studies};
use agc_core::{ComposeTrace, IoContract, QuotientTrace};
use clap::{Parser, Subcommand, ValueEnum};

use document::{load_contract, DocumentError};

const EXIT_OK: u8 = 0;
const EXIT_REFINEMENT_FAILS: u8 = 1;
const EXIT_ALGEBRA: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(
    name = "agc",
    version,
    about = "Algebra of assume-guarantee contracts over linear inequalities",
    after_help = "Composition and merging of three or more contracts fold left to right:\n\
                  `agc compose a b c` computes `(a || b) || c`. Composition is not\n\
                  associative, so argument order matters.\n\n\
                  Exit codes: 0 success (refines: holds), 1 refinement does not hold,\n\
                  2 algebra error, 3 parse or schema error, 4 I/O error."
)]
struct Cli {
    /// Report each processed file on standard error
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum OutputFormat {
    /// Canonical contract JSON.
    #[default]
    Json,
    /// Human-readable interface and term lists.
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Compose contracts left to right into a system contract
    Compose {
        /// Contract files, composed in argument order
        #[arg(num_args = 2.., required = true)]
        files: Vec<PathBuf>,
        /// Write the result here instead of standard output
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Dump intermediate term lists to standard error
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Compute the specification of the component completing PART into TOP
    Quotient {
        top: PathBuf,
        part: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Strong-merge contracts with identical interfaces, left to right
    Merge {
        #[arg(num_args = 2.., required = true)]
        files: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Check whether the first contract refines the second
    Refines { left: PathBuf, right: PathBuf },
    /// Check that contract files are well-formed
    Validate {
        #[arg(num_args = 1.., required = true)]
        files: Vec<PathBuf>,
    },
    /// Run a bundled case study and print its pass/fail report
    Study {
        #[arg(value_enum)]
        name: StudyName,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StudyName {
    /// Perception bounds of a vehicle autonomy stack via merge and quotient
    Autonomy,
    /// Conflict-free single-step moves of grid robots via merge
    Multiagent,
    /// Biological NAND-gate sensor selection via compose and quotient
    Synbio,
    /// Fixed-point error bounds and word-length search via all operations
    Dsp,
    /// All of the above
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli.command, cli.verbose) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            exit_code_for(&e)
        }
    };
    ExitCode::from(code)
}

fn exit_code_for(e: &DocumentError) -> u8 {
    match e {
        DocumentError::Schema(_) | DocumentError::Term { .. } => EXIT_PARSE,
        DocumentError::Contract(_) => EXIT_ALGEBRA,
        DocumentError::Io(_) => EXIT_IO,
    }
}

fn run(command: Command, verbose: bool) -> Result<u8, DocumentError> {
    match command {
        Command::Compose {
            files,
            output,
            trace,
            format,
        } => {
            let mut contracts = load_all(&files, verbose)?;
            let mut system = contracts.remove(0);
            for (i, next) in contracts.into_iter().enumerate() {
                let (composed, step_trace) = system.compose_traced(&next)?;
                if trace {
                    dump_compose_trace(&files[i + 1], &step_trace);
                }
                if !step_trace.assumptions_feasible {
                    eprintln!(
                        "warning: composite assumptions are infeasible after {}",
                        files[i + 1].display()
                    );
                }
                system = composed;
            }
            emit(&system, output.as_deref(), format)?;
            Ok(EXIT_OK)
        }
        Command::Quotient {
            top,
            part,
            output,
            trace,
            format,
        } => {
            let top_contract = load_one(&top, verbose)?;
            let part_contract = load_one(&part, verbose)?;
            let (quotient, step_trace) = top_contract.quotient_traced(&part_contract)?;
            if trace {
                dump_quotient_trace(&step_trace);
            }
            emit(&quotient, output.as_deref(), format)?;
            Ok(EXIT_OK)
        }
        Command::Merge {
            files,
            output,
            format,
        } => {
            let mut contracts = load_all(&files, verbose)?;
            let mut merged = contracts.remove(0);
            for next in contracts {
                merged = merged.merge(&next)?;
            }
            emit(&merged, output.as_deref(), format)?;
            Ok(EXIT_OK)
        }
        Command::Refines { left, right } => {
            let holds = load_one(&left, verbose)?.refines(&load_one(&right, verbose)?)?;
            println!("{holds}");
            Ok(if holds {
                EXIT_OK
            } else {
                EXIT_REFINEMENT_FAILS
            })
        }
        Command::Validate { files } => {
            for file in &files {
                load_one(file, verbose)?;
            }
            Ok(EXIT_OK)
        }
        Command::Study { name } => {
            let report = match name {
                StudyName::Autonomy => studies::autonomy::run(),
                StudyName::Multiagent => studies::multiagent::run(),
                StudyName::Synbio => studies::synbio::run(),
                StudyName::Dsp => studies::dsp::run(),
                StudyName::All => {
                    let mut all = studies::autonomy::run();
                    all.extend(studies::multiagent::run());
                    all.extend(studies::synbio::run());
                    all.extend(studies::dsp::run());
                    all
                }
            };
            let mut ok = true;
            for line in &report {
                println!("{line}");
                ok &= !line.failed();
            }
            Ok(if ok { EXIT_OK } else { EXIT_ALGEBRA })
        }
    }
}

fn load_all(files: &[PathBuf], verbose: bool) -> Result<Vec<IoContract>, DocumentError> {
    files.iter().map(|f| load_one(f, verbose)).collect()
}

fn load_one(path: &Path, verbose: bool) -> Result<IoContract, DocumentError> {
    let contract = load_contract(path)?;
    if verbose {
        eprintln!(
            "loaded {} ({} inputs, {} outputs, {} assumptions, {} guarantees)",
            path.display(),
            contract.inputs().len(),
            contract.outputs().len(),
            contract.assumptions().len(),
            contract.guarantees().len(),
        );
    }
    Ok(contract)
}

fn emit(
    contract: &IoContract,
    output: Option<&Path>,
    format: OutputFormat,
) -> Result<(), DocumentError> {
    match (output, format) {
        (Some(path), OutputFormat::Json) => document::save_contract(contract, None, path),
        (Some(path), OutputFormat::Text) => Ok(std::fs::write(path, format!("{contract}\n"))?),
        (None, OutputFormat::Json) => {
            print!(
                "{}",
                document::ContractDocument::from_contract(contract, None).to_json()
            );
            Ok(())
        }
        (None, OutputFormat::Text) => {
            println!("{contract}");
            Ok(())
        }
    }
}

fn dump_compose_trace(with: &Path, trace: &ComposeTrace) {
    eprintln!("-- composing with {}", with.display());
    eprintln!("   connection: {:?}", trace.connection);
    if let Some(refined) = &trace.refined_assumptions {
        eprintln!("   driven assumptions after elimination: {refined}");
    }
    eprintln!("   composite assumptions: {}", trace.assumptions);
    eprintln!("   relaxed guarantees: {}", trace.relaxed_guarantees);
}

fn dump_quotient_trace(trace: &QuotientTrace) {
    eprintln!("-- quotient");
    eprintln!(
        "   assumptions augmented with divisor guarantees: {}",
        trace.assumptions_augmented
    );
    eprintln!(
        "   assumption stock before projection: {}",
        trace.assumptions_before_projection
    );
    eprintln!("   quotient assumptions: {}", trace.assumptions);
    eprintln!(
        "   strengthened guarantees: {}",
        trace.strengthened_guarantees
    );
    eprintln!(
        "   guarantees before final reduction: {}",
        trace.final_guarantees
    );
}
