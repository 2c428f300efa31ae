use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cmprep_cli::{replay, run_spec, selftest, CliError, RunOptions};
use cmprep_core::DEFAULT_MAX_QUBITS;

/// Compile a target state into a tagging-and-measurement circuit, simulate
/// it, and verify every stage.
///
/// Exit status: 0 on success, 1 if verification fails, 2 for malformed or
/// invalid input, 3 if the register would exceed the memory cap.
#[derive(Parser)]
#[command(name = "cmprep", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Prepare the state described by a spec file.
    Run {
        /// Spec file (`-` reads standard input).
        spec: PathBuf,
        /// Precision in bits; overrides the spec file.
        #[arg(long)]
        m: Option<u32>,
        /// Write the circuit export here.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Write the JSON run report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Cross-check every stage against an independent simulation.
        #[arg(long)]
        stage_check: bool,
        /// Largest register, in qubits, the simulator may allocate.
        #[arg(long, default_value_t = DEFAULT_MAX_QUBITS)]
        max_qubits: usize,
        /// Merge tagging gates into fewer, smaller multi-controlled gates.
        #[arg(long)]
        peephole: bool,
        /// Suppress the summary on standard output.
        #[arg(long, short)]
        quiet: bool,
    },
    /// Re-simulate an exported circuit and print the prepared state.
    Replay {
        circuit: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_QUBITS)]
        max_qubits: usize,
    },
    /// Verify the pipeline on random targets.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_QUBITS)]
        max_qubits: usize,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cmprep: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run { spec, m, export, report, stage_check, max_qubits, peephole, quiet } => {
            let input = read(&spec)?;
            let opts = RunOptions { m, max_qubits, peephole, stage_check };
            let artifacts = run_spec(&input, &opts)?;
            if let Some(path) = export {
                write(&path, &artifacts.circuit_text)?;
            }
            if let Some(path) = report {
                write(&path, &artifacts.report.to_json())?;
            }
            if !quiet {
                print!("{}", artifacts.report.summary());
            }
            match artifacts.report.first_failure() {
                None => Ok(()),
                Some(v) => Err(CliError::Verification { stage: v.stage.clone(), detail: v.detail.clone() }),
            }
        }
        Command::Replay { circuit, max_qubits } => {
            let text = String::from_utf8(read(&circuit)?).map_err(|_| CliError::Encoding)?;
            let r = replay(&text, max_qubits)?;
            println!("naive success probability = {:.6e}", r.naive_probability);
            for (j, a) in r.output.iter().enumerate() {
                println!("{j:>6}  {:+.12} {:+.12}i", a.re, a.im);
            }
            Ok(())
        }
        Command::Selftest { seed, count, max_qubits } => {
            let cases = selftest(seed, count, max_qubits)?;
            let mut first = None;
            for (i, case) in cases.iter().enumerate() {
                let verdict = match &case.failure {
                    None => "ok".to_string(),
                    Some(v) => format!("FAILED at {}: {}", v.stage, v.detail),
                };
                println!("case {i:>3}: n = {}, m = {}, peephole = {:<5} {verdict}", case.n, case.m, case.peephole);
                if first.is_none() {
                    first = case.failure.clone().map(|v| (i, v));
                }
            }
            let failed = cases.iter().filter(|c| c.failure.is_some()).count();
            println!("selftest seed {seed}: {} of {} cases passed", cases.len() - failed, cases.len());
            match first {
                None => Ok(()),
                Some((i, v)) => {
                    Err(CliError::Verification { stage: format!("case {i} {}", v.stage), detail: v.detail })
                }
            }
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    let result = if path == Path::new("-") {
        let mut buf = Vec::new();
        std::io::Read::read_to_end(&mut std::io::stdin(), &mut buf).map(|_| buf)
    } else {
        std::fs::read(path)
    };
    result.map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}
