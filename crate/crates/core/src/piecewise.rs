//! Piecewise blended approximation on uniform subdivisions and empirical
//! convergence rates.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{BlendError, Result};
use crate::spec::BlendSpec;
use crate::surface::{fmt_real, BlendedSurface, Rect};

pub const DEFAULT_SAMPLES_PER_CELL: usize = 25;

/// Errors below this are treated as saturated at machine precision and left
/// out of order fits.
pub const SATURATION_FLOOR: f64 = 1e-13;

/// A study whose errors all stay below this (relative to the sampled
/// magnitude of `F`, floored at 1) is reported as exact reproduction.
pub const EXACT_TOLERANCE: f64 = 1e-10;

/// `kx x ky` independently fitted cells.
#[derive(Debug, Clone)]
pub struct PiecewiseSurface {
    spec: BlendSpec,
    rect: Rect,
    kx: usize,
    ky: usize,
    // column-major over cells: index p * ky + q
    cells: Vec<BlendedSurface>,
}

impl PiecewiseSurface {
    pub fn spec(&self) -> &BlendSpec {
        &self.spec
    }

    pub fn rect(&self) -> Rect {
        self.rect
    }

    pub fn cells_per_axis(&self) -> (usize, usize) {
        (self.kx, self.ky)
    }

    pub fn cell(&self, p: usize, q: usize) -> &BlendedSurface {
        &self.cells[p * self.ky + q]
    }

    pub fn cell_width(&self) -> (f64, f64) {
        (
            (self.rect.b - self.rect.a) / self.kx as f64,
            (self.rect.d - self.rect.c) / self.ky as f64,
        )
    }

    /// Subrectangle of cell `(p, q)`.
    pub fn cell_rect(&self, p: usize, q: usize) -> Rect {
        cell_rect(self.rect, self.kx, self.ky, p, q)
    }

    /// Cell containing `(u, v)`. Points on an interior boundary belong to the
    /// left/lower cell; points outside the domain go to the nearest cell.
    pub fn locate(&self, u: f64, v: f64) -> (usize, usize) {
        let (hx, hy) = self.cell_width();
        (
            locate_1d((u - self.rect.a) / hx, self.kx),
            locate_1d((v - self.rect.c) / hy, self.ky),
        )
    }

    pub fn evaluate(&self, u: f64, v: f64) -> f64 {
        let (p, q) = self.locate(u, v);
        self.cell(p, q).evaluate(u, v)
    }
}

fn locate_1d(t: f64, k: usize) -> usize {
    let idx = t.ceil() - 1.0;
    if idx.is_nan() || idx < 0.0 {
        0
    } else {
        (idx as usize).min(k - 1)
    }
}

fn cell_rect(rect: Rect, kx: usize, ky: usize, p: usize, q: usize) -> Rect {
    let hx = (rect.b - rect.a) / kx as f64;
    let hy = (rect.d - rect.c) / ky as f64;
    let right = if p + 1 == kx { rect.b } else { rect.a + (p + 1) as f64 * hx };
    let top = if q + 1 == ky { rect.d } else { rect.c + (q + 1) as f64 * hy };
    Rect {
        a: rect.a + p as f64 * hx,
        b: right,
        c: rect.c + q as f64 * hy,
        d: top,
    }
}

/// Fits one blended surface per cell of a uniform `kx x ky` subdivision.
pub fn fit_piecewise<F>(
    spec: &BlendSpec,
    rect: Rect,
    f: F,
    kx: usize,
    ky: usize,
) -> Result<PiecewiseSurface>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    if kx == 0 || ky == 0 {
        return Err(BlendError::InvalidArgument(
            "cell counts must be at least 1".into(),
        ));
    }
    let cells = (0..kx * ky)
        .into_par_iter()
        .map(|idx| {
            let (p, q) = (idx / ky, idx % ky);
            BlendedSurface::fit(spec, cell_rect(rect, kx, ky, p, q), &f).map_err(|e| {
                BlendError::Cell {
                    p,
                    q,
                    source: Box::new(e),
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PiecewiseSurface {
        spec: spec.clone(),
        rect,
        kx,
        ky,
        cells,
    })
}

/// Sup-norm error and sup-norm of `f` over the per-cell sample grids.
fn sup_error_and_scale<F>(ps: &PiecewiseSurface, f: F, samples_per_cell: usize) -> (f64, f64)
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let n = samples_per_cell.max(2);
    let steps: Vec<f64> = (0..n).map(|s| s as f64 / (n - 1) as f64).collect();
    (0..ps.kx * ps.ky)
        .into_par_iter()
        .map(|idx| {
            let cell = ps.cell_rect(idx / ps.ky, idx % ps.ky);
            let (hx, hy) = (cell.b - cell.a, cell.d - cell.c);
            let mut err: f64 = 0.0;
            let mut scale: f64 = 0.0;
            for &s in &steps {
                let u = cell.a + s * hx;
                for &t in &steps {
                    let v = cell.c + t * hy;
                    let fv = f(u, v);
                    err = err.max((ps.evaluate(u, v) - fv).abs());
                    scale = scale.max(fv.abs());
                }
            }
            (err, scale)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)))
}

/// Max of `|ps(u, v) - f(u, v)|` over a `samples_per_cell^2` uniform grid in
/// every cell, cell boundaries included.
pub fn sup_error<F>(ps: &PiecewiseSurface, f: F, samples_per_cell: usize) -> f64
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    sup_error_and_scale(ps, f, samples_per_cell).0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub k: usize,
    pub h: f64,
    pub error: f64,
}

/// How the exponent `p` in `e ~ K h^p` is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrderFit {
    /// Least-squares slope of `log e` against `log h`.
    #[default]
    LeastSquares,
    /// Slope through the first and last usable rows.
    Endpoints,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrderEstimate {
    Estimated(f64),
    /// Every error is at reproduction level.
    Exact,
    InsufficientData,
}

impl OrderEstimate {
    /// Numeric value; NaN unless estimated.
    pub fn value(&self) -> f64 {
        match self {
            OrderEstimate::Estimated(p) => *p,
            _ => f64::NAN,
        }
    }
}

impl std::fmt::Display for OrderEstimate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OrderEstimate::Estimated(p) => write!(f, "{}", fmt_real(*p)),
            OrderEstimate::Exact => write!(f, "exact"),
            OrderEstimate::InsufficientData => write!(f, "NaN"),
        }
    }
}

/// Empirical order of `rows` under the chosen estimator.
///
/// Rows with error below [`SATURATION_FLOOR`] are skipped. At least two
/// remaining rows with distinct `h` are required.
pub fn fit_order(rows: &[ConvergenceRow], method: OrderFit) -> Result<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.error.is_finite() && r.error >= SATURATION_FLOOR && r.h > 0.0)
        .map(|r| (r.h.ln(), r.error.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(BlendError::InsufficientData);
    }
    match method {
        OrderFit::Endpoints => {
            let (first, last) = (pts[0], pts[pts.len() - 1]);
            if first.0 == last.0 {
                return Err(BlendError::InsufficientData);
            }
            Ok((first.1 - last.1) / (first.0 - last.0))
        }
        OrderFit::LeastSquares => {
            let n = pts.len() as f64;
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
            if sxx == 0.0 {
                return Err(BlendError::InsufficientData);
            }
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            Ok(sxy / sxx)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyOptions {
    pub samples_per_cell: usize,
    pub fit: OrderFit,
    /// Fit only the last `tail` rows.
    pub tail: Option<usize>,
}

impl Default for StudyOptions {
    fn default() -> Self {
        Self {
            samples_per_cell: DEFAULT_SAMPLES_PER_CELL,
            fit: OrderFit::LeastSquares,
            tail: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    pub fitted_order: OrderEstimate,
}

impl ConvergenceTable {
    /// CSV with header `k,h,error`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "k,h,error")?;
        for r in &self.rows {
            writeln!(out, "{},{},{}", r.k, fmt_real(r.h), fmt_real(r.error))?;
        }
        Ok(())
    }
}

/// Order estimate for a finished table of rows.
fn estimate(rows: &[ConvergenceRow], f_scale: f64, options: &StudyOptions) -> OrderEstimate {
    let exact_level = EXACT_TOLERANCE * f_scale.max(1.0);
    if !rows.is_empty() && rows.iter().all(|r| r.error <= exact_level) {
        return OrderEstimate::Exact;
    }
    let used = match options.tail {
        Some(t) => &rows[rows.len().saturating_sub(t)..],
        None => rows,
    };
    match fit_order(used, options.fit) {
        Ok(p) => OrderEstimate::Estimated(p),
        Err(_) => OrderEstimate::InsufficientData,
    }
}

pub fn convergence_study<F>(spec: &BlendSpec, rect: Rect, f: F, ks: &[usize]) -> Result<ConvergenceTable>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    convergence_study_with(spec, rect, f, ks, &StudyOptions::default())
}

/// Errors of `k x k` piecewise fits for each `k`, with `h = (b - a) / k`.
pub fn convergence_study_with<F>(
    spec: &BlendSpec,
    rect: Rect,
    f: F,
    ks: &[usize],
    options: &StudyOptions,
) -> Result<ConvergenceTable>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    if ks.is_empty() || ks[0] == 0 || ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(BlendError::InvalidArgument(format!(
            "cell counts must be positive and strictly increasing, got {ks:?}"
        )));
    }
    if options.samples_per_cell < 2 {
        return Err(BlendError::InvalidArgument(
            "samples_per_cell must be at least 2".into(),
        ));
    }
    let mut rows = Vec::with_capacity(ks.len());
    let mut f_scale: f64 = 0.0;
    for &k in ks {
        let ps = fit_piecewise(spec, rect, &f, k, k)?;
        let (error, scale) = sup_error_and_scale(&ps, &f, options.samples_per_cell);
        f_scale = f_scale.max(scale);
        rows.push(ConvergenceRow {
            k,
            h: (rect.b - rect.a) / k as f64,
            error,
        });
    }
    let fitted_order = estimate(&rows, f_scale, options);
    Ok(ConvergenceTable { rows, fitted_order })
}
