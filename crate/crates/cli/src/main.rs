use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hecke_core::eisenstein::eisenstein;
use hecke_core::epstein::{epstein_afe, epstein_direct, GramMatrix};
use hecke_core::harness::acceptance::{run_criterion, write_report, SuiteContext, CRITERIA};
use hecke_core::harness::{
    find_peak_height, format_float, scan_expsum, scan_lemma21, scan_subconvexity, scan_supnorm, with_workers,
    write_csv, write_json, write_svg, Config, ScanKind, ScanRecord, SupnormGrid,
};
use hecke_core::lfunctions::{lk_direct, lk_hecke};
use hecke_core::quadforms::{load_or_build, Discriminant};
use hecke_core::HalfPlanePoint;
use num_complex::Complex64;

#[derive(Parser)]
#[command(name = "hecke", version, about = "Eisenstein series, Epstein zeta functions and class group L-functions")]
struct Cli {
    /// key=value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format for records
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads for scans (overrides the config; 0 = one per core)
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a single value
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Run a scan and write its records
    Scan(ScanArgs),
    /// Find the first peak height of the constant term above y_min
    Peak {
        #[arg(long)]
        t: f64,
        #[arg(long = "y-min")]
        y_min: f64,
    },
    /// Run the acceptance criteria and write a JSON report
    Verify {
        #[arg(long)]
        report: PathBuf,
        /// Criteria to run (default: all)
        ids: Vec<String>,
    },
}

#[derive(Subcommand)]
enum EvalCommand {
    /// E(z, sigma + it)
    Eisenstein {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 0.5)]
        sigma: f64,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Epstein zeta function of the form with Gram matrix ((a, b), (b, 1))
    Epstein {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        t: f64,
        /// Real part of s (the approximate functional equation needs 1/2)
        #[arg(long, default_value_t = 0.5)]
        sigma: f64,
        #[arg(long, value_enum)]
        method: EpsteinMethod,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// L-function of a class group character
    Lk {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long = "char")]
        char_index: usize,
        #[arg(long)]
        sigma: f64,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, value_enum)]
        method: LMethod,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EpsteinMethod {
    Direct,
    Afe,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LMethod {
    Hecke,
    Direct,
}

#[derive(Args)]
struct ScanArgs {
    #[command(subcommand)]
    kind: ScanCommand,
    /// Output file for the records
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write a log-log scatter of ratio against the scan variable
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ScanCommand {
    /// sup over the fundamental domain of |E(z, 1/2 + it)| / y^{1/2}
    Supnorm {
        #[arg(long = "t-min", default_value_t = 10.0)]
        t_min: f64,
        #[arg(long = "t-max", default_value_t = 100.0)]
        t_max: f64,
        #[arg(long = "t-steps", default_value_t = 8)]
        t_steps: usize,
        #[arg(long = "y-max", default_value_t = 20.0)]
        y_max: f64,
        #[arg(long = "grid-density", default_value_t = 1.0)]
        grid_density: f64,
    },
    /// Sums of heights over Heegner points or closed geodesics
    Lemma21 {
        #[arg(long = "d-min", allow_hyphen_values = true)]
        d_min: i64,
        #[arg(long = "d-max", allow_hyphen_values = true)]
        d_max: i64,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
    },
    /// Critical-line L-values and second moments
    Subconv {
        #[arg(long = "disc", value_delimiter = ',', allow_hyphen_values = true, required = true)]
        discs: Vec<i64>,
        #[arg(long = "t", value_delimiter = ',', allow_hyphen_values = true, required = true)]
        ts: Vec<f64>,
    },
    /// Normalized exponential sums over dyadic boxes
    Expsum {
        #[arg(long = "a", value_delimiter = ',', required = true)]
        a_list: Vec<f64>,
        #[arg(long = "b", value_delimiter = ',', allow_hyphen_values = true, required = true)]
        b_list: Vec<f64>,
        #[arg(long = "t", value_delimiter = ',', required = true)]
        t_list: Vec<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut cfg = Config::load(cli.config.as_deref()).context("loading configuration")?;
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Eval(cmd) => eval(cmd, &cfg, cli.format, &mut out)?,
        Command::Scan(args) => scan(args, &cfg, cli.format)?,
        Command::Peak { t, y_min } => {
            let p = find_peak_height(t, y_min)?;
            let fields = [
                ("t", t),
                ("y", p.y),
                ("e_ratio", p.e_ratio),
                ("phase_defect", p.phase_defect),
                ("residual", p.residual),
            ];
            write_fields(&mut out, cli.format, &fields)?;
        }
        Command::Verify { report, ids } => return verify(&report, &ids, &cfg, &mut out),
    }
    Ok(ExitCode::SUCCESS)
}

fn eval(cmd: EvalCommand, cfg: &Config, format: Format, out: &mut impl Write) -> Result<()> {
    let (s, value, extra): (Complex64, Complex64, Option<(&str, f64)>) = match cmd {
        EvalCommand::Eisenstein { x, y, t, sigma, tol } => {
            let s = Complex64::new(sigma, t);
            let e = eisenstein(HalfPlanePoint::new(x, y)?, s, tol.unwrap_or(cfg.tol))?;
            (s, e.value, Some(("tail_bound", e.tail_bound)))
        }
        EvalCommand::Epstein { a, b, t, sigma, method, tol } => {
            let z = GramMatrix::new(a, b)?;
            let s = Complex64::new(sigma, t);
            let tol = tol.unwrap_or(cfg.tol);
            let v = match method {
                EpsteinMethod::Direct => epstein_direct(&z, s, tol)?,
                EpsteinMethod::Afe => {
                    if sigma != 0.5 {
                        bail!("the approximate functional equation is evaluated on Re s = 1/2 only");
                    }
                    epstein_afe(&z, t, tol)?.total
                }
            };
            (s, v, None)
        }
        EvalCommand::Lk { disc, char_index, sigma, t, method, tol } => {
            let d = Discriminant::fundamental(disc)?;
            let (g, _) = load_or_build(d, &cfg.cache_dir)
                .with_context(|| format!("class group of {disc} (cache {})", cfg.cache_dir.display()))?;
            let s = Complex64::new(sigma, t);
            let tol = tol.unwrap_or(cfg.tol);
            let v = match method {
                LMethod::Hecke => lk_hecke(&g, char_index, s, tol)?,
                LMethod::Direct => lk_direct(&g, char_index, s, tol)?,
            };
            (s, v.value, Some(("h", g.h as f64)))
        }
    };
    let mut fields = vec![("sigma", s.re), ("t", s.im), ("re", value.re), ("im", value.im), ("abs", value.norm())];
    fields.extend(extra);
    write_fields(out, format, &fields)
}

/// One record with the given fields, as CSV (header + row) or a JSON object.
fn write_fields(out: &mut impl Write, format: Format, fields: &[(&str, f64)]) -> Result<()> {
    match format {
        Format::Csv => {
            let names: Vec<&str> = fields.iter().map(|f| f.0).collect();
            let values: Vec<String> = fields.iter().map(|f| format_float(f.1)).collect();
            writeln!(out, "{}", names.join(","))?;
            writeln!(out, "{}", values.join(","))?;
        }
        Format::Json => {
            let body: Vec<String> = fields
                .iter()
                .map(|(k, v)| format!("\"{k}\":{}", if v.is_finite() { format_float(*v) } else { "null".into() }))
                .collect();
            writeln!(out, "{{{}}}", body.join(","))?;
        }
    }
    Ok(())
}

fn scan(args: ScanArgs, cfg: &Config, format: Format) -> Result<()> {
    let cache = Some(cfg.cache_dir.as_path());
    let tol = cfg.scan_tol;
    let (kind, records): (ScanKind, Vec<ScanRecord>) = with_workers(cfg.workers, || -> Result<_> {
        Ok(match &args.kind {
            ScanCommand::Supnorm { t_min, t_max, t_steps, y_max, grid_density } => {
                let grid = SupnormGrid {
                    t_min: *t_min,
                    t_max: *t_max,
                    t_steps: *t_steps,
                    y_max: *y_max,
                    grid_density: *grid_density,
                };
                (ScanKind::Supnorm, scan_supnorm(grid, tol)?)
            }
            ScanCommand::Lemma21 { d_min, d_max, delta } => {
                (ScanKind::Lemma21, scan_lemma21(*d_min, *d_max, *delta, cache)?)
            }
            ScanCommand::Subconv { discs, ts } => (ScanKind::Subconv, scan_subconvexity(discs, ts, tol, cache)?),
            ScanCommand::Expsum { a_list, b_list, t_list } => {
                (ScanKind::Expsum, scan_expsum(a_list, b_list, t_list)?)
            }
        })
    })??;

    match &args.out {
        Some(path) => {
            let mut w = create(path)?;
            emit_records(&mut w, format, kind, &records)?;
            w.flush().with_context(|| format!("writing {}", path.display()))?;
        }
        None => emit_records(&mut io::stdout().lock(), format, kind, &records)?,
    }
    if let Some(path) = &args.svg {
        let mut w = create(path)?;
        write_svg(&mut w, kind, &records)?;
        w.flush().with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn emit_records(out: &mut impl Write, format: Format, kind: ScanKind, records: &[ScanRecord]) -> Result<()> {
    match format {
        Format::Csv => write_csv(out, kind, records)?,
        Format::Json => write_json(out, kind, records)?,
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn verify(report: &Path, ids: &[String], cfg: &Config, out: &mut impl Write) -> Result<ExitCode> {
    let selected: Vec<String> = if ids.is_empty() { CRITERIA.iter().map(|s| s.to_string()).collect() } else { ids.to_vec() };
    let ctx = SuiteContext { cache_dir: Some(cfg.cache_dir.clone()) };
    let mut reports = Vec::new();
    for id in &selected {
        let r = with_workers(cfg.workers, || run_criterion(id, &ctx))??;
        writeln!(out, "{}", r.summary_line())?;
        out.flush()?;
        reports.push(r);
    }
    write_report(report, &reports).with_context(|| format!("writing report {}", report.display()))?;
    let failed = reports.iter().filter(|r| !r.passed).count();
    writeln!(out, "{} of {} criteria passed", reports.len() - failed, reports.len())?;
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
