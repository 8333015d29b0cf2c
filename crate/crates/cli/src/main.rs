use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nwave_cli::config::RawConfig;
use nwave_cli::csv::{fmt_f64, read_invariant_log};
use nwave_cli::error::{EXIT_CONFIG, EXIT_OK};
use nwave_cli::presets::PRESET_NAMES;
use nwave_cli::{execute, CliError, ExperimentPreset, Result, RunReport};
use nwave_core::invariants::{audit_log, AuditTolerances};
use nwave_core::Rule;

/// Environment variable naming the default output directory.
const OUT_DIR_VAR: &str = "NWAVE_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "nwave-out";

#[derive(Parser)]
#[command(name = "nwave", version, about = "Monotone schemes for Burgers' equation and their large-time behaviour")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Default)]
struct Overrides {
    /// lf, eo or godunov
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    dx: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    #[arg(long = "t-end")]
    t_end: Option<String>,
    /// Comma-separated output times t1,t2,...
    #[arg(long)]
    snapshots: Option<String>,
}

impl Overrides {
    fn pairs(&self) -> Vec<(String, String)> {
        [("scheme", &self.scheme), ("dx", &self.dx), ("dt", &self.dt), ("t_end", &self.t_end), ("snapshots", &self.snapshots)]
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect()
    }
}

#[derive(Args)]
struct SimilarityFlags {
    /// Integrate in similarity variables
    #[arg(long)]
    similarity: bool,
    #[arg(long)]
    dxi: Option<String>,
    #[arg(long)]
    ds: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the experiment described by a config file
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        #[command(flatten)]
        sim: SimilarityFlags,
        #[arg(long = "out-dir")]
        out_dir: Option<PathBuf>,
    },
    /// Run a named preset
    Preset {
        name: String,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long = "out-dir")]
        out_dir: Option<PathBuf>,
    },
    /// Run a preset or config and print its errors against the exact solution
    Compare {
        #[arg(required_unless_present = "config")]
        preset: Option<String>,
        #[arg(long, conflicts_with = "preset")]
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
        #[command(flatten)]
        sim: SimilarityFlags,
        /// Also write the run's CSV files
        #[arg(long = "out-dir")]
        out_dir: Option<PathBuf>,
    },
    /// Audit a logged invariant CSV; exits with 2 on a violation
    CheckInvariants {
        log: PathBuf,
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        dt: f64,
    },
    /// List the presets
    ListPresets,
}

fn out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_DIR_VAR).map(PathBuf::from)).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })
}

/// Config file plus flags. `--similarity` turns `dx`, `dt` into `dxi`, `ds`
/// unless those are given.
fn config_preset(path: &Path, overrides: &Overrides, sim: &SimilarityFlags) -> Result<ExperimentPreset> {
    let mut raw = RawConfig::parse(&read(path)?)?;
    for (k, v) in overrides.pairs() {
        raw.set(if k == "scheme" { "schemes" } else { &k }, &v)?;
    }
    if sim.similarity {
        raw.set("mode", "similarity")?;
        for (phys, simk) in [("dx", "dxi"), ("dt", "ds")] {
            if let Some(v) = raw.get(phys).map(str::to_string) {
                raw.remove(phys);
                if raw.get(simk).is_none() && !(simk == "dxi" && raw.get("nodes").is_some()) {
                    raw.set(simk, &v)?;
                }
            }
        }
    }
    if let Some(v) = &sim.dxi {
        raw.remove("nodes");
        raw.set("dxi", v)?;
    }
    if let Some(v) = &sim.ds {
        raw.set("ds", v)?;
    }
    Ok(ExperimentPreset::custom(raw.build()?))
}

fn print_report(report: &RunReport) {
    print!("{}", report.render());
    if let Some(p) = &report.report_path {
        println!("\nreport written to {}", p.display());
    }
}

fn print_errors(report: &RunReport) {
    println!("{:<16} {:<8} {:>8} {:>12} {:>12} {:>12} {:>8}", "run", "scheme", "t", "L1", "L2", "Linf", "steps");
    for sr in &report.specs {
        for r in &sr.runs {
            if let Some(e) = r.errors {
                println!(
                    "{:<16} {:<8} {:>8} {:>12.4e} {:>12.4e} {:>12.4e} {:>8}",
                    sr.spec.label, r.scheme, e.t, e.l1, e.l2, e.linf, r.steps
                );
            }
        }
    }
}

fn real_main(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::ListPresets => {
            for name in PRESET_NAMES {
                let description = match ExperimentPreset::named(name) {
                    Ok(p) => p.description,
                    Err(_) => "runs described by a config file (nwave run --config FILE)".to_string(),
                };
                println!("{name:<16} {description}");
            }
            Ok(EXIT_OK)
        }
        Cmd::Preset { name, overrides, out_dir: dir } => {
            let preset = ExperimentPreset::named(&name)?.with_overrides(&overrides.pairs())?;
            print_report(&execute(&preset, Some(&out_dir(dir)))?);
            Ok(EXIT_OK)
        }
        Cmd::Run { config, overrides, sim, out_dir: dir } => {
            let preset = config_preset(&config, &overrides, &sim)?;
            print_report(&execute(&preset, Some(&out_dir(dir)))?);
            Ok(EXIT_OK)
        }
        Cmd::Compare { preset, config, overrides, sim, out_dir: dir } => {
            let mut p = match (preset, config) {
                (_, Some(path)) => config_preset(&path, &overrides, &sim)?,
                (Some(name), None) => {
                    if sim.similarity || sim.dxi.is_some() || sim.ds.is_some() {
                        return Err(CliError::Config("--similarity, --dxi and --ds apply to config runs only".into()));
                    }
                    ExperimentPreset::named(&name)?.with_overrides(&overrides.pairs())?
                }
                (None, None) => unreachable!("clap requires a preset or --config"),
            };
            for r in &mut p.runs {
                if !r.initial.is_piecewise_constant() {
                    return Err(CliError::Config(format!("{}: the exact solution needs piecewise-constant data", r.label)));
                }
                r.compare_exact = true;
            }
            print_errors(&execute(&p, dir.as_deref())?);
            Ok(EXIT_OK)
        }
        Cmd::CheckInvariants { log, scheme, dt } => {
            let rule: Rule = scheme.parse().map_err(|_| CliError::Config(format!("unknown scheme '{scheme}'")))?;
            let records = read_invariant_log(&log)?;
            let audit = audit_log(&records, rule, dt, AuditTolerances::default());
            for c in &audit.checks {
                let verdict = if c.passed { "pass" } else { "FAIL" };
                println!("{:<14} {verdict}  worst {} at step {}, bound {}", c.name, fmt_f64(c.worst), c.at_step, c.bound);
            }
            if audit.passed() {
                Ok(EXIT_OK)
            } else {
                let failed: Vec<&str> = audit.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
                Err(CliError::Invariant(failed.join(", ")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match real_main(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
