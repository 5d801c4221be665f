use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mutdiff::constraint::{export_smtlib, ConstraintSystem};
use mutdiff::detect::{convert, DetectorConfig};
use mutdiff::lang::{parse, pretty_print};
use mutdiff::mutation::{generate_mutants, OperatorClass};
use mutdiff::report::{parse_suite, reports_to_json, run_pipeline, PipelineOptions, RunReport, Table};
use mutdiff::ssa::to_ssa;
use mutdiff::unroll::eliminate_loops;
use mutdiff::DomainConfig;

#[derive(Parser)]
#[command(name = "mutdiff", version, about = "Detect equivalent mutants by searching for distinguishing inputs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate mutants, classify each one and print a summary table.
    Check(CheckArgs),
    /// List the mutants of a program.
    Mutants {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "AOR,ROR,COR,UOI,UOD,CRP")]
        ops: Vec<OperatorClass>,
        /// Print JSON records instead of one line per mutant.
        #[arg(long)]
        json: bool,
    },
    /// Show a conversion stage for one program.
    Convert {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        nd: u32,
        #[arg(long, value_enum, default_value_t = Stage::Constraints)]
        stage: Stage,
        #[arg(long, value_parser = parse_domain, default_value = "-128:127")]
        domain: (i64, i64),
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Stage {
    Unrolled,
    Ssa,
    Constraints,
    Smt,
    Json,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Initial nesting depth for loop unrolling.
    #[arg(long, default_value_t = 2)]
    nd: u32,
    #[arg(long, default_value_t = 5)]
    nd_max: u32,
    /// Wall-clock budget per mutant, in seconds.
    #[arg(long, default_value_t = 300.0)]
    timeout: f64,
    /// Integer domain as MIN:MAX.
    #[arg(long, value_parser = parse_domain, default_value = "-128:127")]
    domain: (i64, i64),
    #[arg(long, value_delimiter = ',', default_value = "AOR,ROR,COR,UOI,UOD,CRP")]
    ops: Vec<OperatorClass>,
    /// Test suite: JSON list of {input, expected}.
    #[arg(long)]
    suite: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write every solved system as SMT-LIB into this directory.
    #[arg(long)]
    emit_smt: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = 1024)]
    max_rounds: usize,
    /// Leave per-mutant wall times out of the JSON report.
    #[arg(long)]
    no_timing: bool,
}

fn parse_domain(s: &str) -> Result<(i64, i64), String> {
    // Split at the first ':' that is not a leading sign of the minimum.
    let idx = s.char_indices().skip(1).find(|&(_, c)| c == ':').map(|(i, _)| i).ok_or("expected MIN:MAX")?;
    let lo = s[..idx].trim().parse().map_err(|e| format!("bad minimum: {e}"))?;
    let hi = s[idx + 1..].trim().parse().map_err(|e| format!("bad maximum: {e}"))?;
    DomainConfig::range(lo, hi).map_err(|e| e.to_string())?;
    Ok((lo, hi))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn check(args: CheckArgs) -> Result<ExitCode> {
    if !(args.timeout.is_finite() && args.timeout > 0.0) {
        bail!("--timeout must be a positive number of seconds");
    }
    let domain = DomainConfig::new(args.domain.0, args.domain.1, Duration::from_secs_f64(args.timeout))?;
    let detector = DetectorConfig {
        nd_initial: args.nd,
        nd_max: args.nd_max,
        domain,
        max_blocking_rounds: args.max_rounds,
        ..DetectorConfig::default()
    };
    detector.validate()?;
    let suite = match &args.suite {
        Some(path) => Some(parse_suite(&read(path)?).with_context(|| format!("bad suite {}", path.display()))?),
        None => None,
    };
    let opts = PipelineOptions {
        detector,
        operators: args.ops.clone(),
        suite,
        jobs: args.jobs.max(1),
        timing: !args.no_timing,
    };

    if let Some(dir) = &args.emit_smt {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    let smt_error: Mutex<Option<anyhow::Error>> = Mutex::new(None);

    let mut reports: Vec<RunReport> = Vec::new();
    let mut parse_failed = false;
    for path in &args.files {
        let source = match read(path) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e:#}");
                parse_failed = true;
                continue;
            }
        };
        let name = stem(path);
        let emit = |id: &str, nd: u32, cs: &ConstraintSystem| {
            if let Some(dir) = &args.emit_smt {
                let file = dir.join(format!("{id}.nd{nd}.smt2"));
                if let Err(e) = fs::write(&file, export_smtlib(cs)) {
                    smt_error.lock().expect("lock").get_or_insert(anyhow!("cannot write {}: {e}", file.display()));
                }
            }
        };
        match run_pipeline(&name, &source, &opts, Some(&emit)) {
            Ok(r) => reports.push(r),
            Err(e) => {
                eprintln!("{}: {e}", path.display());
                parse_failed = true;
            }
        }
    }
    if let Some(e) = smt_error.into_inner().expect("lock") {
        return Err(e);
    }

    if !reports.is_empty() {
        print!("{}", Table(&reports));
    }
    let mut witness_failures = 0;
    for r in &reports {
        witness_failures += r.witness_failures;
        for row in r.mutants.iter().filter(|m| m.error.is_some()) {
            eprintln!("{}: {}", row.id, row.error.as_deref().unwrap_or_default());
        }
        for id in &r.contradictions {
            eprintln!("warning: {id} is killed by the suite but was reported equivalent up to nd {}", r.config.nd_max);
        }
    }
    if let Some(path) = &args.json {
        fs::write(path, reports_to_json(&reports) + "\n")
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(if witness_failures > 0 {
        ExitCode::from(2)
    } else if parse_failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check(args) => check(args),
        Command::Mutants { file, ops, json } => {
            let p = parse(&read(&file)?).map_err(|e| anyhow!("{}: {e}", file.display()))?;
            let mutants = generate_mutants(&p, &ops);
            if json {
                let records: Vec<_> = mutants.iter().map(|m| m.record()).collect();
                println!("{}", serde_json::to_string_pretty(&records)?);
            } else {
                for m in &mutants {
                    let r = m.record();
                    println!("{}  {:<4} line {:<3} {}  =>  {}", r.id, r.operator_class, r.line, r.original, r.mutated);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Convert { file, nd, stage, domain } => {
            let p = parse(&read(&file)?).map_err(|e| anyhow!("{}: {e}", file.display()))?;
            let domain = DomainConfig::range(domain.0, domain.1)?;
            match stage {
                Stage::Unrolled => print!("{}", pretty_print(&eliminate_loops(&p, nd)?.program)),
                Stage::Ssa => print!("{}", to_ssa(&eliminate_loops(&p, nd)?)?),
                Stage::Constraints => print!("{}", convert(&p, nd, &domain)?),
                Stage::Smt => print!("{}", export_smtlib(&convert(&p, nd, &domain)?)),
                Stage::Json => println!("{}", convert(&p, nd, &domain)?.to_json()),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    // Exit code 2 is reserved for witness failures, so usage errors get 1.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
