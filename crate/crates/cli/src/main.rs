mod expr;

use std::fs;
use std::io::{self, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use blendkit::spec::fmt_seq;
use blendkit::surface::fmt_real;
use blendkit::{
    convergence_study_with, dimension, elevate_to_divisible, lower_set, predicted_order,
    quasi_uniform_grid, BlendSpec, BlendedSurface, DenseMatrix, OrderFit, Rect,
    StudyOptions, SurfaceFile,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::expr::{parse_expression, Expr};

/// Bad input from the command line; exits with status 2.
#[derive(Debug, Error)]
#[error("{0}")]
struct UsageError(String);

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Parser)]
#[command(name = "blendkit", version, about = "Discretely blended Bernstein-Bezier surfaces")]
struct Cli {
    /// Reject degree sequences that break the divisibility chain instead of
    /// elevating them.
    #[arg(long, global = true)]
    strict: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SeqArgs {
    /// Degrees in x, e.g. 2,4
    #[arg(long, value_parser = parse_seq)]
    m: ::std::vec::Vec<usize>,
    /// Degrees in y, e.g. 2,4
    #[arg(long, value_parser = parse_seq)]
    n: ::std::vec::Vec<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GridFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FitMethod {
    Lsq,
    Endpoints,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension of the blended space and size of its monomial lower set.
    Dim(SeqArgs),
    /// Predicted approximation order.
    Order(SeqArgs),
    /// Quasi-uniform grid points and index maps.
    Grid {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: GridFormat,
    },
    /// Fit a surface and write its control net.
    Fit {
        #[command(flatten)]
        seq: SeqArgs,
        /// a,b,c,d for [a,b] x [c,d]
        #[arg(long, value_parser = parse_domain, default_value = "0,1,0,1", allow_hyphen_values = true)]
        domain: Rect,
        /// Function of x and y.
        #[arg(long = "fn", value_name = "EXPR", conflicts_with = "samples", required_unless_present = "samples")]
        function: Option<String>,
        /// CSV of values at the top-degree nodes: one line per x node, one
        /// column per y node.
        #[arg(long, value_name = "FILE")]
        samples: Option<PathBuf>,
        /// Control net CSV destination; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also store the surface as JSON for `eval`.
        #[arg(long, value_name = "FILE")]
        save: Option<PathBuf>,
    },
    /// Evaluate a stored surface.
    Eval {
        #[arg(long, value_name = "FILE")]
        surface: PathBuf,
        /// u,v
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        at: (f64, f64),
    },
    /// Sup-norm errors of piecewise fits and the fitted order.
    Converge {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, value_parser = parse_domain, default_value = "0,1,0,1", allow_hyphen_values = true)]
        domain: Rect,
        #[arg(long = "fn", value_name = "EXPR")]
        function: String,
        /// Cells per axis: a range `1..16` or a list `4,8,16`.
        #[arg(long, value_parser = parse_ks)]
        ks: ::std::vec::Vec<usize>,
        /// Fit the order from the last N rows only.
        #[arg(long, value_name = "N")]
        tail: Option<usize>,
        #[arg(long, value_enum, default_value = "lsq")]
        fit: FitMethod,
        #[arg(long, default_value_t = blendkit::piecewise::DEFAULT_SAMPLES_PER_CELL)]
        samples_per_cell: usize,
    },
    /// Dimensions and orders of the four serendipity-equivalent spaces.
    Serendipity,
}

fn parse_seq(s: &str) -> std::result::Result<Vec<usize>, String> {
    let v: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    if v.windows(2).any(|w| w[0] >= w[1]) {
        return Err(format!("degrees must be strictly ascending, got {s}"));
    }
    Ok(v)
}

fn parse_reals(s: &str, count: usize) -> std::result::Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    if v.len() != count {
        return Err(format!("expected {count} comma-separated numbers, got {}", v.len()));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err("values must be finite".into());
    }
    Ok(v)
}

fn parse_domain(s: &str) -> std::result::Result<Rect, String> {
    let v = parse_reals(s, 4)?;
    Rect::new(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

fn parse_point(s: &str) -> std::result::Result<(f64, f64), String> {
    let v = parse_reals(s, 2)?;
    Ok((v[0], v[1]))
}

fn parse_ks(s: &str) -> std::result::Result<Vec<usize>, String> {
    let ks: Vec<usize> = if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
        let hi: usize = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
        RangeInclusive::new(lo, hi).collect()
    } else {
        s.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}")))
            .collect::<std::result::Result<_, _>>()?
    };
    if ks.is_empty() || ks[0] == 0 || ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(format!("cell counts must be positive and strictly increasing, got {s}"));
    }
    Ok(ks)
}

/// Builds a spec, elevating non-divisible sequences unless `strict`.
fn build_spec(seq: &SeqArgs, strict: bool) -> Result<BlendSpec> {
    let (m, n) = (&seq.m, &seq.n);
    let em = elevate_to_divisible(m).map_err(|e| usage(e.to_string()))?;
    let en = elevate_to_divisible(n).map_err(|e| usage(e.to_string()))?;
    if (&em, &en) != (m, n) {
        if strict {
            return Err(usage(format!(
                "m={} n={} break the divisibility chain (nearest valid: m={} n={})",
                fmt_seq(m),
                fmt_seq(n),
                fmt_seq(&em),
                fmt_seq(&en)
            )));
        }
        eprintln!(
            "warning: m={} n={} break the divisibility chain; using m={} n={}",
            fmt_seq(m),
            fmt_seq(n),
            fmt_seq(&em),
            fmt_seq(&en)
        );
    }
    BlendSpec::new(em, en).map_err(|e| usage(e.to_string()))
}

fn parse_function(text: &str) -> Result<Expr> {
    parse_expression(text).map_err(|e| usage(format!("--fn {text:?}: {e}")))
}

/// Domain errors become NaN, which the fitting code rejects as a
/// non-finite sample.
fn as_closure(e: &Expr) -> impl Fn(f64, f64) -> f64 + Sync + '_ {
    move |x, y| e.eval(x, y).unwrap_or(f64::NAN)
}

fn read_samples(path: &PathBuf) -> Result<DenseMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut rows = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| usage(format!("{}:{}: {e}", path.display(), line_no + 1)))?;
        rows.push(row);
    }
    DenseMatrix::from_rows(&rows).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<()> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cli.command {
        Command::Dim(seq) => {
            let dim = dimension(&seq.m, &seq.n).map_err(|e| usage(e.to_string()))?;
            let lower = lower_set(&seq.m, &seq.n).map_err(|e| usage(e.to_string()))?;
            writeln!(out, "dim={dim}")?;
            writeln!(out, "lower_set={}", lower.len())?;
        }
        Command::Order(seq) => {
            let p = predicted_order(&seq.m, &seq.n).map_err(|e| usage(e.to_string()))?;
            writeln!(out, "p={p}")?;
        }
        Command::Grid { seq, format } => {
            let spec = build_spec(&seq, cli.strict)?;
            let grid = quasi_uniform_grid(&spec);
            match format {
                GridFormat::Csv => {
                    writeln!(out, "i,j,alpha_level,beta_level")?;
                    for &(i, j) in grid.points() {
                        let a = grid.alpha_level(i).expect("grid point has an x level");
                        let b = grid.beta_level(j).expect("grid point has a y level");
                        writeln!(out, "{i},{j},{a},{b}")?;
                    }
                }
                GridFormat::Json => {
                    let r = spec.r();
                    let doc = json!({
                        "spec": spec,
                        "dimension": spec.dimension(),
                        "points": grid.points(),
                        "alpha": grid.sequences().alpha,
                        "beta": grid.sequences().beta,
                        "alpha_inverse": (0..=r).map(|k| grid.inverse_alpha_table(k)).collect::<Vec<_>>(),
                        "beta_inverse": (0..=r).map(|k| grid.inverse_beta_table(k)).collect::<Vec<_>>(),
                    });
                    serde_json::to_writer_pretty(&mut out, &doc)?;
                    writeln!(out)?;
                }
            }
        }
        Command::Fit {
            seq,
            domain,
            function,
            samples,
            out: net_path,
            save,
        } => {
            let spec = build_spec(&seq, cli.strict)?;
            let surface = match (function, samples) {
                (Some(text), _) => {
                    let e = parse_function(&text)?;
                    BlendedSurface::fit(&spec, domain, as_closure(&e))?
                }
                (None, Some(path)) => {
                    let table = read_samples(&path)?;
                    BlendedSurface::fit_samples(&spec, domain, &table)?
                }
                (None, None) => return Err(usage("one of --fn or --samples is required")),
            };
            if let Some(path) = save {
                let text = serde_json::to_string(&surface.to_file())?;
                fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
            }
            match net_path {
                Some(path) => {
                    let file = fs::File::create(&path).with_context(|| format!("writing {}", path.display()))?;
                    let mut w = BufWriter::new(file);
                    surface.write_control_net_csv(&mut w)?;
                    w.flush()?;
                }
                None => surface.write_control_net_csv(&mut out)?,
            }
        }
        Command::Eval { surface, at } => {
            let text = fs::read_to_string(&surface).with_context(|| format!("reading {}", surface.display()))?;
            let file: SurfaceFile =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", surface.display()))?;
            let s = BlendedSurface::from_file(&file)?;
            writeln!(out, "{}", fmt_real(s.evaluate(at.0, at.1)))?;
        }
        Command::Converge {
            seq,
            domain,
            function,
            ks,
            tail,
            fit,
            samples_per_cell,
        } => {
            let spec = build_spec(&seq, cli.strict)?;
            let e = parse_function(&function)?;
            if samples_per_cell < 2 {
                return Err(usage("--samples-per-cell must be at least 2"));
            }
            if tail == Some(0) {
                return Err(usage("--tail must be positive"));
            }
            let options = StudyOptions {
                samples_per_cell,
                fit: match fit {
                    FitMethod::Lsq => OrderFit::LeastSquares,
                    FitMethod::Endpoints => OrderFit::Endpoints,
                },
                tail,
            };
            let table = convergence_study_with(&spec, domain, as_closure(&e), &ks, &options)?;
            table.write_csv(&mut out)?;
            writeln!(out, "order={}", table.fitted_order)?;
        }
        Command::Serendipity => {
            for m in [vec![1, 2], vec![1, 3], vec![1, 2, 4], vec![2, 4]] {
                let dim = dimension(&m, &m)?;
                let p = predicted_order(&m, &m)?;
                writeln!(out, "m={0} n={0} dim={dim} p={p}", fmt_seq(&m))?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("BLENDKIT_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| usage(format!("BLENDKIT_THREADS must be a non-negative integer, got {raw:?}")))?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match configure_threads().and_then(|()| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
