//! The `gapscope` command line.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 numerical
//! failure.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::census::{run_census, CensusConfig, InjectedWitness, KnownTable};
use crate::families::{analyze, double_construct, make_family, FamilyError, FamilyId, FamilyInstance, FamilySpec};
use crate::jacobi::{AnyVector, JacobiError, Model};
use crate::report::{self, Format};
use crate::scalar::{Backend, Rational, Scalar};
use crate::spectrum::{band_structure_with, SpectrumError, SpectrumOptions, SpectrumReport};
use crate::verify::{run_suite, SuiteConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "gapscope", version, about = "Band structure and closed spectral gaps of periodic Jacobi matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bands, gaps and closed-gap certificates of one vector.
    Spectrum {
        #[command(flatten)]
        input: VectorArgs,
        #[arg(long, default_value = "json")]
        format: Format,
        /// Also write an SVG band diagram here.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Only the certified closed gaps of one vector.
    ClosedGaps {
        #[command(flatten)]
        input: VectorArgs,
        #[arg(long, default_value = "json")]
        format: Format,
    },
    /// Instantiate a named family (use --list to see them).
    Family {
        #[arg(long, required_unless_present = "list")]
        name: Option<String>,
        /// Comma-separated `name=value` pairs; defaults fill the rest.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        params: String,
        /// Run the spectrum and check every predicted closed gap.
        #[arg(long)]
        analyze: bool,
        /// Require the exact backend (fails for irrational entries).
        #[arg(long, conflicts_with = "float")]
        exact: bool,
        /// Force the float backend.
        #[arg(long)]
        float: bool,
        #[arg(long)]
        list: bool,
    },
    /// Doubling construction `w = v^k cyc(v)^k` with predicted closed gaps.
    Double {
        #[command(flatten)]
        input: VectorArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        analyze: bool,
    },
    /// Seeded random census of closed-gap counts.
    Census {
        #[arg(long)]
        model: Model,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample small-denominator rationals and certify exactly.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Add the default instance of every family with this model and period.
        #[arg(long)]
        inject: bool,
        /// Write the JSON result here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "paper")]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Replace the known table (JSON as printed by --print-table).
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        print_table: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct VectorArgs {
    #[arg(long, default_value = "dso")]
    model: Model,
    /// Diagonal entries, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    v: Vec<String>,
    /// Off-diagonal entries, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    a: Vec<String>,
    /// Vector JSON file (`-` for stdin); a family JSON with a "vector" field also works.
    #[arg(long, conflicts_with_all = ["v", "a"])]
    input: Option<PathBuf>,
    /// Use exact rational arithmetic; entries must be integers or `num/den`.
    #[arg(long)]
    exact: bool,
    /// Float certification tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(m: impl std::fmt::Display) -> Self {
        Self { code: EXIT_USAGE, message: m.to_string() }
    }
    fn numeric(m: impl std::fmt::Display) -> Self {
        Self { code: EXIT_NUMERIC, message: m.to_string() }
    }
}

impl From<JacobiError> for Failure {
    fn from(e: JacobiError) -> Self {
        Failure::usage(e)
    }
}

impl From<SpectrumError> for Failure {
    fn from(e: SpectrumError) -> Self {
        match e {
            SpectrumError::Jacobi(j) => Failure::usage(j),
            SpectrumError::NotOdjm(_) | SpectrumError::Backend(_) => Failure::usage(e),
            other => Failure::numeric(other),
        }
    }
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::Spectrum(s) => s.into(),
            other => Failure::usage(other),
        }
    }
}

type Out = Result<(String, i32), Failure>;

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Output goes to stdout, diagnostics to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok((text, code)) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
            let _ = out.flush();
            code
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn execute(cmd: Command) -> Out {
    match cmd {
        Command::Spectrum { input, format, svg } => {
            let r = spectrum_of(&input)?;
            if let Some(path) = svg {
                std::fs::write(&path, report::to_svg(&r)).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            }
            Ok((with_newline(report::render(&r, format)), EXIT_OK))
        }
        Command::ClosedGaps { input, format } => {
            let mut r = spectrum_of(&input)?;
            r.bands.clear();
            r.gaps.clear();
            let text = match format {
                Format::Csv => report::to_csv(&r),
                Format::Json => pretty(&serde_json::json!({
                    "period": r.period,
                    "backend": r.backend,
                    "g": r.closed_gap_count,
                    "closed_gaps": r.closed_gaps,
                })),
            };
            Ok((with_newline(text), EXIT_OK))
        }
        Command::Family { name, params, analyze, exact, float, list } => {
            if list {
                let mut s = String::new();
                for id in FamilyId::ALL {
                    s.push_str(&format!("{:<20} {:<24} {}\n", id.name(), id.default_params(), id.description()));
                }
                return Ok((s, EXIT_OK));
            }
            let id: FamilyId = name.unwrap_or_default().parse()?;
            let spec = FamilySpec::parse(id, &params)?;
            if float {
                return family_output(&make_family::<f64>(&spec)?, analyze);
            }
            match make_family::<Rational>(&spec) {
                Ok(inst) => family_output(&inst, analyze),
                Err(FamilyError::Irrational(_)) if !exact => family_output(&make_family::<f64>(&spec)?, analyze),
                Err(e) => Err(e.into()),
            }
        }
        Command::Double { input, k, analyze } => match read_vector(&input)? {
            AnyVector::Exact(c) => family_output(&double_construct(&c, k)?, analyze),
            AnyVector::Float(c) => family_output(&double_construct(&c, k)?, analyze),
        },
        Command::Census { model, p, n, seed, exact, tol, inject, out } => {
            let backend = if exact { Backend::Exact } else { Backend::Float };
            let cfg = CensusConfig { tol, ..CensusConfig::new(model, p, n, seed, backend) };
            let mut result = run_census(&cfg).map_err(|e| match e {
                crate::census::CensusError::Spectrum { .. } => Failure::numeric(e),
                _ => Failure::usage(e),
            })?;
            if inject {
                for (label, w, json) in family_witnesses(model, p)? {
                    result.inject(&label, w.count, json);
                }
            }
            let text = pretty(&result.to_json());
            let code = if result.bound_check.passed { EXIT_OK } else { EXIT_VERIFY };
            match out {
                Some(path) => {
                    std::fs::write(&path, with_newline(text))
                        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
                    Ok((String::new(), code))
                }
                None => Ok((with_newline(text), code)),
            }
        }
        Command::Verify { suite, seed, table, print_table, json } => {
            if suite != "paper" {
                return Err(Failure::usage(format!("unknown suite {suite:?} (available: paper)")));
            }
            let mut cfg = SuiteConfig::new(seed);
            if print_table {
                return Ok((with_newline(pretty(&serde_json::to_value(&cfg.table).expect("serializable"))), EXIT_OK));
            }
            if let Some(path) = table {
                let text = std::fs::read_to_string(&path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
                cfg.table = serde_json::from_str::<KnownTable>(&text).map_err(Failure::usage)?;
            }
            let r = run_suite(&cfg);
            let text = if json { with_newline(pretty(&serde_json::to_value(&r).expect("serializable"))) } else { r.render() };
            Ok((text, if r.passed { EXIT_OK } else { EXIT_VERIFY }))
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn read_vector(args: &VectorArgs) -> Result<AnyVector, Failure> {
    if let Some(path) = &args.input {
        let mut text = String::new();
        if path.as_os_str() == "-" {
            std::io::stdin().read_to_string(&mut text).map_err(Failure::usage)?;
        } else {
            text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        }
        let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Failure::usage(format!("json: {e}")))?;
        let value = value.get("vector").cloned().unwrap_or(value);
        let v = AnyVector::from_json(&value)?;
        return match (args.exact, v) {
            (true, AnyVector::Float(_)) => {
                Err(Failure::usage("--exact needs rational entries (integers or \"num/den\" strings)"))
            }
            (_, v) => Ok(v),
        };
    }
    if args.v.is_empty() && args.a.is_empty() {
        return Err(Failure::usage("no vector given: use --v/--a or --input"));
    }
    let backend = if args.exact { Backend::Exact } else { Backend::Float };
    Ok(AnyVector::from_literals(args.model, &args.a, &args.v, backend)?)
}

fn spectrum_of(args: &VectorArgs) -> Result<SpectrumReport, Failure> {
    if !(args.tol > 0.0) {
        return Err(Failure::usage("--tol must be positive"));
    }
    let opts = SpectrumOptions { closed_tol: args.tol, ..SpectrumOptions::default() };
    Ok(match read_vector(args)? {
        AnyVector::Exact(c) => band_structure_with(&c, &opts)?,
        AnyVector::Float(c) => band_structure_with(&c, &opts)?,
    })
}

fn family_output<S: Scalar>(inst: &FamilyInstance<S>, with_analysis: bool) -> Out {
    let mut json = inst.to_json();
    let mut code = EXIT_OK;
    if with_analysis {
        let (report, check) = analyze(inst)?;
        if !check.all_certified {
            code = EXIT_VERIFY;
        }
        json["report"] = serde_json::to_value(&report).expect("serializable");
        json["certified"] = serde_json::to_value(&check).expect("serializable");
    }
    Ok((with_newline(pretty(&json)), code))
}

/// Default instances of every family with the given model and period.
fn family_witnesses(model: Model, p: usize) -> Result<Vec<(String, InjectedWitness, serde_json::Value)>, Failure> {
    let mut out = Vec::new();
    for id in FamilyId::ALL {
        let params = if id.params().contains(&"p") { format!("p={p}") } else { String::new() };
        let Ok(spec) = FamilySpec::parse(id, &params) else { continue };
        let label = spec.to_string();
        let witness = match make_family::<Rational>(&spec) {
            Ok(inst) => (inst.vector.model(), inst.vector.period(), InjectedWitness::from_instance(&label, &inst), inst.vector.to_json()),
            Err(FamilyError::Irrational(_)) => match make_family::<f64>(&spec) {
                Ok(inst) => (inst.vector.model(), inst.vector.period(), InjectedWitness::from_instance(&label, &inst), inst.vector.to_json()),
                Err(_) => continue,
            },
            Err(_) => continue,
        };
        let (m, period, w, json) = witness;
        if m == model && period == p {
            out.push((label, w?, json));
        }
    }
    Ok(out)
}
