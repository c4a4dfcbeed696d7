//! `spinorlab` — command-line front end for the verification workbench.
//!
//! Three subcommands share one configuration surface:
//!
//! * `verify`   — run a named check suite (or all of them) and print one
//!   pass/fail line per identity; exit 0 iff everything passed.
//! * `spectrum` — assemble the Dirac operator on the degree-bounded field
//!   space of one bundle and print its eigenvalue table.
//! * `report`   — bundle verification, spectrum tables, and the Killing
//!   families into a single JSON document.
//!
//! Output goes to stdout, to `--out <file>`, or — when `--out` is absent
//! and `SPINORLAB_OUT_DIR` is set — to `<dir>/<subcommand>.<ext>`.
//!
//! Exit codes: 0 success, 1 a check failed (or the computation itself
//! broke down), 2 configuration or I/O trouble.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use spinorlab_core::bundle::{BundleContext, BundleSelector};
use spinorlab_core::field::spinor_dim;
use spinorlab_core::report::{
    render_spectrum_text, render_verification_text, ConfigEcho, FullReport, VerificationReport,
    SCHEMA_VERSION, TOOL_VERSION,
};
use spinorlab_core::scalar::{Exact, Mode, Scalar, C64};
use spinorlab_core::spectrum::{
    killing_field, killing_verify, spectrum, KillingReport, KillingSign, SpectrumTable,
};
use spinorlab_core::suites::{run_suite, spectrum_tables, Suite};
use spinorlab_core::Error as CoreError;

#[derive(Parser)]
#[command(
    name = "spinorlab",
    version,
    about = "Verification and spectrum workbench for Clifford-algebra spinor bundles \
             over spheres and their antipodal quotients"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite; one pass/fail line per checked identity.
    Verify {
        #[command(flatten)]
        config: ToolConfig,

        /// Suite to run: clifford, bundle, curvature, lichnerowicz,
        /// killing, splitting, or all.
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
    },

    /// Compute the Dirac eigenvalue table for the bundle chosen by --space.
    Spectrum {
        #[command(flatten)]
        config: ToolConfig,
    },

    /// Emit one JSON document with verification results, spectrum tables,
    /// and the Killing-family reports. Always JSON, whatever --format says.
    Report {
        #[command(flatten)]
        config: ToolConfig,

        /// Include every section: full check battery plus the tables for
        /// all three bundles (implies --recompute).
        #[arg(long)]
        all: bool,

        /// Compute results now. Nothing is cached between runs, so the
        /// report subcommand refuses to run without this or --all.
        #[arg(long)]
        recompute: bool,
    },
}

/// Shared knobs. The semantic ones (everything except --format / --out)
/// are echoed verbatim into every report so runs can be reproduced.
#[derive(Args, Debug, Clone)]
struct ToolConfig {
    /// Sphere dimension n; the bundle lives over S^n inside R^{n+1}.
    #[arg(long, default_value_t = 2, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..=7))]
    n: usize,

    /// Polynomial degree bound m for field spaces and spectra.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(0..=6))]
    m: u32,

    /// Which bundle: sphere, rp_plus, or rp_minus.
    #[arg(long, default_value = "sphere", value_parser = parse_selector)]
    space: BundleSelector,

    /// Arithmetic mode: exact (rational coefficients) or float.
    #[arg(long, default_value = "exact", value_parser = parse_mode)]
    mode: Mode,

    /// Random samples per sampled check.
    #[arg(long, default_value_t = 25, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    samples: usize,

    /// RNG seed; identical seeds give byte-identical reports.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output format: json or text.
    #[arg(long, default_value = "text", value_parser = parse_format)]
    format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ToolConfig {
    fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            n: self.n,
            m: self.m,
            selector: self.space,
            mode: self.mode,
            sample_count: self.samples,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Text => "txt",
        }
    }
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::from_str(s).map_err(|e| e.to_string())
}

fn parse_selector(s: &str) -> Result<BundleSelector, String> {
    BundleSelector::from_str(s).map_err(|e| e.to_string())
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    Mode::from_str(s)
}

fn parse_format(s: &str) -> Result<Format, String> {
    match s {
        "json" => Ok(Format::Json),
        "text" => Ok(Format::Text),
        other => Err(format!("unknown format `{other}` (expected json|text)")),
    }
}

enum CliError {
    Core(CoreError),
    Write { path: PathBuf, source: std::io::Error },
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Write { path, source } => {
                write!(f, "cannot write {}: {source}", path.display())
            }
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    /// 2 for anything the caller can fix by changing the invocation,
    /// 1 for computations that genuinely broke down.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Write { .. } => 2,
            CliError::Core(e) => match e {
                CoreError::InvalidConfig(_)
                | CoreError::SizeOutOfRange { .. }
                | CoreError::DegreeBound { .. }
                | CoreError::CombinatorialOverflow { .. }
                | CoreError::Io { .. } => 2,
                _ => 1,
            },
        }
    }
}

/// Route finished output: explicit --out file, else the SPINORLAB_OUT_DIR
/// default location, else stdout.
fn emit(body: &str, out: Option<&Path>, default_name: &str) -> Result<(), CliError> {
    let target: Option<PathBuf> = match out {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os("SPINORLAB_OUT_DIR").map(|d| PathBuf::from(d).join(default_name)),
    };
    match target {
        Some(path) => {
            std::fs::write(&path, body).map_err(|source| CliError::Write {
                path: path.clone(),
                source,
            })?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

/// to_string_pretty on our plain report structs cannot fail.
macro_rules! to_json {
    ($value:expr) => {
        serde_json::to_string_pretty($value).expect("report serialization") + "\n"
    };
}

fn one_spectrum<S: Scalar>(n: usize, selector: BundleSelector, m: u32) -> Result<SpectrumTable, CoreError> {
    let ctx = BundleContext::<S>::new(n)?;
    spectrum(&ctx, selector, m)
}

/// Both Killing families generated from the first coordinate spinor.
fn killing_reports<S: Scalar>(n: usize) -> Result<Vec<KillingReport>, CoreError> {
    let ctx = BundleContext::<S>::new(n)?;
    let mut generator = vec![S::zero(); spinor_dim(n)];
    generator[0] = S::one();
    let mut out = Vec::new();
    for sign in [KillingSign::Minus, KillingSign::Plus] {
        let f = killing_field(&ctx, &generator, sign)?;
        out.push(killing_verify(&ctx, &f, &sign.lambda::<S>()));
    }
    Ok(out)
}

fn cmd_verify(config: &ToolConfig, suite: Suite) -> Result<bool, CliError> {
    let checks = run_suite(
        suite,
        config.n,
        config.m,
        config.mode,
        config.samples,
        config.seed,
    )?;
    let report = VerificationReport::new(config.echo(), checks);
    let body = match config.format {
        Format::Json => to_json!(&report),
        Format::Text => render_verification_text(&report),
    };
    let name = format!("verify.{}", config.format.extension());
    emit(&body, config.out.as_deref(), &name)?;
    Ok(report.pass)
}

fn cmd_spectrum(config: &ToolConfig) -> Result<(), CliError> {
    let table = match config.mode {
        Mode::Exact => one_spectrum::<Exact>(config.n, config.space, config.m),
        Mode::Float => one_spectrum::<C64>(config.n, config.space, config.m),
    }?;
    let body = match config.format {
        Format::Json => to_json!(&table),
        Format::Text => render_spectrum_text(&table),
    };
    let name = format!("spectrum.{}", config.format.extension());
    emit(&body, config.out.as_deref(), &name)?;
    Ok(())
}

fn cmd_report(config: &ToolConfig, all: bool, recompute: bool) -> Result<bool, CliError> {
    if !all && !recompute {
        return Err(CoreError::InvalidConfig(
            "report has no stored results to draw on; pass --recompute to compute them \
             now, or --all for the full document"
                .into(),
        )
        .into());
    }
    let checks = run_suite(
        Suite::All,
        config.n,
        config.m,
        config.mode,
        config.samples,
        config.seed,
    )?;
    let verification = VerificationReport::new(config.echo(), checks);
    let spectra = if all {
        match config.mode {
            Mode::Exact => spectrum_tables::<Exact>(config.n, config.m),
            Mode::Float => spectrum_tables::<C64>(config.n, config.m),
        }?
    } else {
        vec![match config.mode {
            Mode::Exact => one_spectrum::<Exact>(config.n, config.space, config.m),
            Mode::Float => one_spectrum::<C64>(config.n, config.space, config.m),
        }?]
    };
    let killing = match config.mode {
        Mode::Exact => killing_reports::<Exact>(config.n),
        Mode::Float => killing_reports::<C64>(config.n),
    }?;
    let pass = verification.pass;
    let full = FullReport {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION,
        config: config.echo(),
        verification,
        spectra,
        killing,
    };
    emit(&to_json!(&full), config.out.as_deref(), "report.json")?;
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Verify { config, suite } => cmd_verify(config, *suite),
        Cmd::Spectrum { config } => cmd_spectrum(config).map(|()| true),
        Cmd::Report {
            config,
            all,
            recompute,
        } => cmd_report(config, *all, *recompute),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Core(CoreError::DegreeBound { .. }) = &e {
                eprintln!("hint: raise --m so the operator closes on the truncation window");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
