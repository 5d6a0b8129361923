//! Command-line front end.
//!
//! Every subcommand reads a strict JSON config (`--config`), writes one
//! machine-readable document to `--out` (stdout when absent), and prints a
//! short human summary on stderr. Outputs are deterministic: identical
//! configs produce byte-identical artifacts.
//!
//! Exit codes: 0 success, 1 validation error, 2 when the verification
//! battery reports a genuine violation.

mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use config::RunConfig;
use walkmix::corpus::walk_label;
use walkmix::families::{self, default_t_cap, export_report, FamilyPreset, ReportFormat};
use walkmix::harness::{genuine_violations, verification_suite};
use walkmix::mixing::MixingAnalysis;
use walkmix::montecarlo::{empirical_check, SimConfig};
use walkmix::numeric::format_float17 as f17;

#[derive(Parser)]
#[command(name = "walkmix", version, about = "Spectra, mixing curves, and cutoff diagnostics for lazy walks on finite abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// All N eigenvalues of a walk ("k,lambda")
    Spectrum(CommonArgs),
    /// Distance-to-stationarity curve ("t,d_l1,d_tv")
    Mix(CommonArgs),
    /// Mixing thresholds at 1-eps, 1/2, eps ("d,t")
    Thresholds(CommonArgs),
    /// Run the inequality battery over the corpus ("check,instance,lhs,rhs,holds")
    BoundsCheck(CommonArgs),
    /// Profile a walk family's cutoff diagnostics
    Family(CommonArgs),
    /// Monte Carlo endpoint frequencies against the exact distribution
    Simulate(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON configuration file
    #[arg(long)]
    config: PathBuf,
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum OutFormat {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Spectrum(args) => spectrum(&args),
        Command::Mix(args) => mix(&args),
        Command::Thresholds(args) => thresholds(&args),
        Command::BoundsCheck(args) => bounds_check(&args),
        Command::Family(args) => family(&args),
        Command::Simulate(args) => simulate(&args),
    }
}

fn load(args: &CommonArgs) -> anyhow::Result<RunConfig> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("cannot read {}", args.config.display()))?;
    RunConfig::parse(&text)
}

fn emit(args: &CommonArgs, document: &str) -> anyhow::Result<()> {
    match &args.out {
        Some(path) => std::fs::write(path, document)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => std::io::stdout().write_all(document.as_bytes())?,
    }
    Ok(())
}

fn spectrum(args: &CommonArgs) -> anyhow::Result<ExitCode> {
    let cfg = load(args)?;
    let walk = cfg.build_walk()?;
    let spec = walk.spectrum();
    let document = match args.format {
        OutFormat::Csv => {
            let mut out = String::from("k,lambda\n");
            for (k, &v) in spec.values().iter().enumerate() {
                out.push_str(&format!("{k},{}\n", f17(v)));
            }
            out
        }
        OutFormat::Json => {
            #[derive(Serialize)]
            struct Row {
                k: usize,
                lambda: f64,
            }
            let rows: Vec<Row> = spec
                .values()
                .iter()
                .enumerate()
                .map(|(k, &lambda)| Row { k, lambda })
                .collect();
            to_json(&rows)?
        }
    };
    emit(args, &document)?;
    eprintln!(
        "{}: N={} lambda_m={:.6} at k={} gap={:.6}",
        walk_label(&walk),
        walk.group().order(),
        spec.dominant_value(),
        spec.dominant_index(),
        spec.gap()
    );
    Ok(ExitCode::SUCCESS)
}

fn mix(args: &CommonArgs) -> anyhow::Result<ExitCode> {
    let cfg = load(args)?;
    let walk = cfg.build_walk()?;
    let analysis = MixingAnalysis::new(&walk);
    // Unless capped explicitly, stop at 10^4 samples; curves decay
    // geometrically long before the generic 10 N^2 cap.
    let t_max = cfg.t_cap.unwrap_or_else(|| default_t_cap(&walk).min(10_000));
    let curve = analysis.mixing_curve(t_max, 0.0);
    let document = match args.format {
        OutFormat::Csv => {
            let mut out = String::from("t,d_l1,d_tv\n");
            for (t, &d) in curve.d_values().iter().enumerate() {
                out.push_str(&format!("{t},{},{}\n", f17(d), f17(d / 2.0)));
            }
            out
        }
        OutFormat::Json => {
            #[derive(Serialize)]
            struct Row {
                t: u64,
                d_l1: f64,
                d_tv: f64,
            }
            let rows: Vec<Row> = curve
                .d_values()
                .iter()
                .enumerate()
                .map(|(t, &d)| Row {
                    t: t as u64,
                    d_l1: d,
                    d_tv: d / 2.0,
                })
                .collect();
            to_json(&rows)?
        }
    };
    emit(args, &document)?;
    eprintln!(
        "{}: {} samples, d(0)={:.6}, final={:.3e}",
        walk_label(&walk),
        curve.d_values().len(),
        curve.d_values()[0],
        curve.d_values().last().unwrap()
    );
    Ok(ExitCode::SUCCESS)
}

fn thresholds(args: &CommonArgs) -> anyhow::Result<ExitCode> {
    let cfg = load(args)?;
    let walk = cfg.build_walk()?;
    let analysis = MixingAnalysis::new(&walk);
    let eps = cfg.epsilon_value();
    let cap = cfg.t_cap.unwrap_or_else(|| default_t_cap(&walk));
    let levels = [1.0 - eps, 0.5, eps];
    let mut rows = Vec::new();
    for level in levels {
        let t = analysis.threshold(level, cap)?;
        rows.push((level, t));
    }
    let document = match args.format {
        OutFormat::Csv => {
            let mut out = String::from("d,t\n");
            for (level, t) in &rows {
                out.push_str(&format!("{},{t}\n", f17(*level)));
            }
            out
        }
        OutFormat::Json => {
            #[derive(Serialize)]
            struct Row {
                d: f64,
                t: u64,
            }
            let rows: Vec<Row> = rows.iter().map(|&(d, t)| Row { d, t }).collect();
            to_json(&rows)?
        }
    };
    emit(args, &document)?;
    let ratio = if rows[0].1 >= 1 {
        format!("{:.4}", rows[2].1 as f64 / rows[0].1 as f64)
    } else {
        "undefined".into()
    };
    eprintln!(
        "{}: t({:.3})={} t(1/2)={} t({:.3e})={} ratio={}",
        walk_label(&walk),
        1.0 - eps,
        rows[0].1,
        rows[1].1,
        eps,
        rows[2].1,
        ratio
    );
    if let Some(kappa) = cfg.kappa {
        // The exponential epsilon form keeps -ln(eps) exact here.
        let floor =
            walkmix::bounds::ratio_floor_from_log(walk.rank(), kappa, cfg.epsilon_minus_ln())?;
        eprintln!(
            "  ratio floor at kappa={kappa}: {:.6} (applicable: {})",
            floor.floor, floor.applicable
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn bounds_check(args: &CommonArgs) -> anyhow::Result<ExitCode> {
    let cfg = load(args)?;
    let rows = verification_suite(cfg.kappa);
    let document = match args.format {
        OutFormat::Csv => {
            let mut out = String::from("check,instance,lhs,rhs,holds\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.check,
                    r.instance,
                    f17(r.lhs),
                    f17(r.rhs),
                    r.holds
                ));
            }
            out
        }
        OutFormat::Json => {
            #[derive(Serialize)]
            struct Row<'a> {
                check: &'a str,
                instance: &'a str,
                lhs: f64,
                rhs: f64,
                holds: bool,
                informational: bool,
            }
            let rows: Vec<Row> = rows
                .iter()
                .map(|r| Row {
                    check: &r.check,
                    instance: &r.instance,
                    lhs: r.lhs,
                    rhs: r.rhs,
                    holds: r.holds,
                    informational: r.informational,
                })
                .collect();
            to_json(&rows)?
        }
    };
    emit(args, &document)?;

    let violations = genuine_violations(&rows);
    let info = rows.iter().filter(|r| r.informational).count();
    eprintln!(
        "{} checks, {} informational, {} genuine violations",
        rows.len(),
        info,
        violations
    );
    for r in rows.iter().filter(|r| !r.holds) {
        eprintln!(
            "  {} {} on {}: lhs={:.6e} rhs={:.6e}",
            if r.informational { "info" } else { "FAIL" },
            r.check,
            r.instance,
            r.lhs,
            r.rhs
        );
    }
    Ok(if violations > 0 {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn family(args: &CommonArgs) -> anyhow::Result<ExitCode> {
    let cfg = load(args)?;
    let preset = cfg.build_family()?;
    let report = families::family_profile(&preset, cfg.epsilon_value(), cfg.t_cap, cfg.kappa)?;
    let format = match args.format {
        OutFormat::Csv => ReportFormat::Csv,
        OutFormat::Json => ReportFormat::Json,
    };
    emit(args, &export_report(&report, format))?;
    let note = if matches!(preset, FamilyPreset::Hypercube { .. }) {
        " (contrast-only: rank grows with dimension)"
    } else {
        ""
    };
    eprintln!(
        "{} family{}: {} instances, eps={}",
        report.kind,
        note,
        report.rows.len(),
        cfg.epsilon_value()
    );
    for row in &report.rows {
        let ratio = row
            .ratio
            .map(|r| format!("{r:.4}"))
            .unwrap_or_else(|| "undefined".into());
        eprintln!(
            "  N={:<6} r={:<2} t(eps)={:<9} t(1-eps)={:<7} ratio={}",
            row.n, row.r, row.t_eps, row.t_1meps, ratio
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn simulate(args: &CommonArgs) -> anyhow::Result<ExitCode> {
    let cfg = load(args)?;
    let walk = cfg.build_walk()?;
    let sim = cfg
        .simulate
        .context("this subcommand needs a \"simulate\" section")?;
    let check = empirical_check(
        &walk,
        &SimConfig {
            steps: sim.t,
            samples: sim.samples,
            seed: sim.seed,
        },
    )?;
    let document = match args.format {
        OutFormat::Csv => {
            let mut out = String::from("x,observed,expected,band,violation\n");
            for x in 0..check.observed.len() {
                let violation = (check.observed[x] - check.expected[x]).abs() > check.band[x];
                out.push_str(&format!(
                    "{x},{},{},{},{}\n",
                    f17(check.observed[x]),
                    f17(check.expected[x]),
                    f17(check.band[x]),
                    violation
                ));
            }
            out
        }
        OutFormat::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                violations: usize,
                max_abs_dev: f64,
                observed: &'a [f64],
                expected: &'a [f64],
                band: &'a [f64],
            }
            to_json(&Doc {
                violations: check.violations,
                max_abs_dev: check.max_abs_dev,
                observed: &check.observed,
                expected: &check.expected,
                band: &check.band,
            })?
        }
    };
    emit(args, &document)?;
    eprintln!(
        "{}: t={} samples={} seed={} -> violations={} max_abs_dev={:.3e}",
        walk_label(&walk),
        sim.t,
        sim.samples,
        sim.seed,
        check.violations,
        check.max_abs_dev
    );
    Ok(ExitCode::SUCCESS)
}

fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut out = serde_json::to_string_pretty(value)?;
    out.push('\n');
    Ok(out)
}
