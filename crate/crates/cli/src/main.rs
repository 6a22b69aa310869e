use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hrforms::hrform::{decompose, verify_hr};
use hrforms::io::{read_module, to_json, write_module, ModuleData};
use hrforms::oracle::freudenthal_character;
use hrforms::padic::{verify_padic_hr, verify_tilting, LatticeModule, TiltingVerdict};
use hrforms::paths::{standard_module, StandardOptions};
use hrforms::{HrError, Ring, RootSystem, UpSet, Weight};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "hrforms", version, about = "HR-forms, standard modules and p-adic tilting verdicts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the standard module V(λ) with its canonical form.
    Vlambda {
        #[command(flatten)]
        weight: WeightArgs,
        /// Q, F<q>, Z<p>, or Fq/Zp together with --p.
        #[arg(long, default_value = "Q")]
        ring: String,
        #[arg(long)]
        p: Option<u64>,
        /// Height bound on λ − μ; defaults to ht(λ − w0λ) for dominant λ.
        #[arg(long)]
        depth: Option<u32>,
        /// Compute Gram blocks of a level in parallel.
        #[arg(long)]
        parallel: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the HR axioms of the form in a module file (p-adic axioms for lattices).
    VerifyHr {
        input: PathBuf,
        /// Extra up-set to check, as generators separated by ';' (e.g. "1,0;0,1").
        #[arg(long = "upset")]
        upsets: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Split a module with an HR-form into F-cyclic summands.
    Decompose {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide the tilting criterion for a lattice with a form.
    VerifyTilting {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Weight multiplicities of the simple module of highest weight λ.
    Char {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct WeightArgs {
    /// Root system label such as A1, A2, B2, G2 or A1xA1.
    #[arg(long = "type")]
    type_label: String,
    /// Coordinates in fundamental weights, e.g. "3" or "1,1".
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
}

impl WeightArgs {
    fn parse(&self) -> Result<(RootSystem, Weight), Failure> {
        let rs = RootSystem::from_label(&self.type_label)?;
        let lambda = parse_weight(&self.lambda)?;
        if lambda.rank() != rs.rank() {
            return Err(Failure::usage(format!("λ = {lambda} does not have rank {}", rs.rank())));
        }
        Ok((rs, lambda))
    }
}

/// Why a command stopped: a usage/format problem (exit 2) or a mathematical
/// failure (exit 1).
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<HrError> for Failure {
    fn from(e: HrError) -> Self {
        let code = match e {
            HrError::SingularGram(_)
            | HrError::NotUnimodular { .. }
            | HrError::RelationViolation(_)
            | HrError::Decomposition(_)
            | HrError::SearchExhausted(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn parse_weight(text: &str) -> Result<Weight, Failure> {
    let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
    inner
        .split(',')
        .map(|c| c.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map(Weight)
        .map_err(|_| Failure::usage(format!("cannot parse weight '{text}'")))
}

fn parse_upset(text: &str) -> Result<UpSet, Failure> {
    text.split(';').map(parse_weight).collect::<Result<Vec<_>, _>>().map(UpSet::new)
}

fn load(path: &Path) -> Result<ModuleData, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Ok(read_module(&text)?)
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Writes a report and maps its verdict to the exit code.
fn report<T: Serialize>(value: &T, passed: bool, output: Option<&Path>) -> Result<u8, Failure> {
    emit(&to_json(value), output)?;
    Ok(if passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct TiltingOutput<'a> {
    first_failure: Option<String>,
    #[serde(flatten)]
    verdict: &'a TiltingVerdict,
}

fn lattice_of(data: ModuleData) -> Result<LatticeModule, Failure> {
    if data.p.is_none() && data.module.ring().prime().is_none() {
        return Err(Failure::usage("a lattice file needs a prime \"p\" and the ring Zp"));
    }
    Ok(LatticeModule::from_data(data)?)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Vlambda { weight, ring, p, depth, parallel, output } => {
            let (rs, lambda) = weight.parse()?;
            let ring = Ring::parse(&ring, p)?;
            let v = standard_module(&rs, ring, &lambda, StandardOptions { depth, parallel })?;
            emit(&write_module(&v.module, Some(&v.form)), output.as_deref())?;
            Ok(0)
        }
        Command::VerifyHr { input, upsets, output } => {
            let upsets = upsets.iter().map(|u| parse_upset(u)).collect::<Result<Vec<_>, _>>()?;
            let data = load(&input)?;
            let form = data.form.clone().ok_or_else(|| Failure::usage("input has no form"))?;
            if data.p.is_some() || matches!(data.module.ring(), Ring::PLocal(_)) {
                let lattice = lattice_of(data)?;
                let r = verify_padic_hr(&lattice, &form, &upsets)?;
                report(&r, r.overall, output.as_deref())
            } else {
                let r = verify_hr(&data.module, &form, &upsets)?;
                report(&r, r.overall, output.as_deref())
            }
        }
        Command::Decompose { input, output } => {
            let data = load(&input)?;
            let form = data.form.ok_or_else(|| Failure::usage("input has no form"))?;
            let d = decompose(&data.module, &form)?;
            report(&d, d.certified, output.as_deref())
        }
        Command::VerifyTilting { input, output } => {
            let data = load(&input)?;
            let form = data.form.clone().ok_or_else(|| Failure::usage("input has no form"))?;
            let lattice = lattice_of(data)?;
            let verdict = verify_tilting(&lattice, &form)?;
            let out = TiltingOutput { first_failure: verdict.first_failure(), verdict: &verdict };
            report(&out, verdict.overall, output.as_deref())
        }
        Command::Char { weight, output } => {
            let (rs, lambda) = weight.parse()?;
            let table = freudenthal_character(&rs, &lambda)?;
            emit(&to_json(&table), output.as_deref())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
