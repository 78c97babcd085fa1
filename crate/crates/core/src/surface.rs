//! The discretely blended quasi-interpolant on a rectangle.
//!
//! Fitting applies the top-degree dual functionals in both directions to a
//! full tensor grid of samples and keeps the entries on the quasi-uniform
//! grid. Every tensor term of the blend reuses those coefficients, since the
//! functionals of a lower level are a subset of the top-degree ones.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{BlendError, Result};
use crate::numeric::DenseMatrix;
use crate::projector::{axis_projectors, LevelProjector};
use crate::spec::{Axis, BlendSpec, QuasiUniformGrid};

/// Axis-aligned domain `[a, b] x [c, d]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Rect {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(BlendError::InvalidInterval(a, b));
        }
        if !(c.is_finite() && d.is_finite() && d > c) {
            return Err(BlendError::InvalidInterval(c, d));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn unit() -> Self {
        Self {
            a: 0.0,
            b: 1.0,
            c: 0.0,
            d: 1.0,
        }
    }

    pub fn x_interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn y_interval(&self) -> (f64, f64) {
        (self.c, self.d)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

/// One `P_{m_k} Q_{n_l}` term of the two-sum representation.
#[derive(Debug, Clone)]
pub struct TensorTerm {
    pub x_level: usize,
    pub y_level: usize,
    pub sign: f64,
    /// `coeffs[(i, j)] = b_{alpha^k_i, beta^l_j}`
    pub coeffs: DenseMatrix,
}

/// Value of one tensor term at a point, before its sign is applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermValue {
    pub x_level: usize,
    pub y_level: usize,
    pub sign: f64,
    pub value: f64,
}

/// Coefficient `b_{i,j}` placed at its node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlPoint {
    pub i: usize,
    pub j: usize,
    pub x: f64,
    pub y: f64,
    pub b: f64,
}

/// Persisted form: enough to rebuild the surface without the function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceFile {
    pub spec: BlendSpec,
    pub domain: [f64; 4],
    pub coeffs: Vec<(usize, usize, f64)>,
}

#[derive(Debug, Clone)]
pub struct BlendedSurface {
    spec: BlendSpec,
    rect: Rect,
    grid: QuasiUniformGrid,
    coeffs: Vec<f64>,
    x_projectors: Vec<LevelProjector>,
    y_projectors: Vec<LevelProjector>,
    terms: Vec<TensorTerm>,
}

/// Full table `[(lambda_i x lambda_j) F]` over all top-degree index pairs,
/// from samples on the `(m_r + 1) x (n_r + 1)` node grid (row = x node).
fn functional_table(
    x_top: &LevelProjector,
    y_top: &LevelProjector,
    samples: &DenseMatrix,
) -> Result<DenseMatrix> {
    let (rows, cols) = (x_top.high().degree() + 1, y_top.high().degree() + 1);
    if samples.rows() != rows || samples.cols() != cols {
        return Err(BlendError::DimensionMismatch(format!(
            "expected {rows}x{cols} samples, got {}x{}",
            samples.rows(),
            samples.cols()
        )));
    }
    let mut partial = DenseMatrix::zeros(rows, cols);
    for j in 0..cols {
        let col = x_top.high().dual_apply(&samples.column(j))?;
        for (i, v) in col.into_iter().enumerate() {
            partial[(i, j)] = v;
        }
    }
    let mut table = DenseMatrix::zeros(rows, cols);
    for i in 0..rows {
        let row = y_top.high().dual_apply(partial.row(i))?;
        for (j, v) in row.into_iter().enumerate() {
            table[(i, j)] = v;
        }
    }
    Ok(table)
}

impl BlendedSurface {
    /// Fits the blended quasi-interpolant of `f` on `rect`.
    pub fn fit<F>(spec: &BlendSpec, rect: Rect, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64,
    {
        let x_projectors = axis_projectors(spec, Axis::First, rect.x_interval())?;
        let y_projectors = axis_projectors(spec, Axis::Second, rect.y_interval())?;
        let xs = x_projectors[0].high().nodes().to_vec();
        let ys = y_projectors[0].high().nodes().to_vec();
        let mut samples = DenseMatrix::zeros(xs.len(), ys.len());
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in ys.iter().enumerate() {
                let value = f(x, y);
                if !value.is_finite() {
                    return Err(BlendError::NonFiniteSample { x, y, value });
                }
                samples[(i, j)] = value;
            }
        }
        Self::from_table(spec, rect, x_projectors, y_projectors, &samples)
    }

    /// Fits from a precomputed sample grid at the top-degree nodes; the
    /// sample counts must match exactly.
    pub fn fit_samples(spec: &BlendSpec, rect: Rect, samples: &DenseMatrix) -> Result<Self> {
        let x_projectors = axis_projectors(spec, Axis::First, rect.x_interval())?;
        let y_projectors = axis_projectors(spec, Axis::Second, rect.y_interval())?;
        Self::from_table(spec, rect, x_projectors, y_projectors, samples)
    }

    fn from_table(
        spec: &BlendSpec,
        rect: Rect,
        x_projectors: Vec<LevelProjector>,
        y_projectors: Vec<LevelProjector>,
        samples: &DenseMatrix,
    ) -> Result<Self> {
        let r = spec.r();
        let table = functional_table(&x_projectors[r], &y_projectors[r], samples)?;
        let grid = QuasiUniformGrid::new(spec);
        let coeffs = grid.points().iter().map(|&(i, j)| table[(i, j)]).collect();
        Ok(Self::assemble(spec.clone(), rect, grid, coeffs, x_projectors, y_projectors))
    }

    /// Rebuilds a surface from stored coefficients, one per grid point.
    pub fn from_coeffs(spec: &BlendSpec, rect: Rect, entries: &[(usize, usize, f64)]) -> Result<Self> {
        let grid = QuasiUniformGrid::new(spec);
        let mut coeffs: Vec<Option<f64>> = vec![None; grid.len()];
        for &(i, j, b) in entries {
            let pos = grid.position(i, j).ok_or(BlendError::NotInGrid { i, j })?;
            if !b.is_finite() {
                return Err(BlendError::InvalidArgument(format!(
                    "coefficient at ({i}, {j}) is not finite"
                )));
            }
            if coeffs[pos].replace(b).is_some() {
                return Err(BlendError::InvalidArgument(format!(
                    "duplicate coefficient at ({i}, {j})"
                )));
            }
        }
        let coeffs = coeffs
            .into_iter()
            .zip(grid.points())
            .map(|(c, &(i, j))| {
                c.ok_or_else(|| {
                    BlendError::InvalidArgument(format!("missing coefficient at ({i}, {j})"))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        let x_projectors = axis_projectors(spec, Axis::First, rect.x_interval())?;
        let y_projectors = axis_projectors(spec, Axis::Second, rect.y_interval())?;
        Ok(Self::assemble(spec.clone(), rect, grid, coeffs, x_projectors, y_projectors))
    }

    pub fn from_file(file: &SurfaceFile) -> Result<Self> {
        let [a, b, c, d] = file.domain;
        Self::from_coeffs(&file.spec, Rect::new(a, b, c, d)?, &file.coeffs)
    }

    pub fn to_file(&self) -> SurfaceFile {
        SurfaceFile {
            spec: self.spec.clone(),
            domain: self.rect.as_array(),
            coeffs: self
                .grid
                .points()
                .iter()
                .zip(&self.coeffs)
                .map(|(&(i, j), &b)| (i, j, b))
                .collect(),
        }
    }

    fn assemble(
        spec: BlendSpec,
        rect: Rect,
        grid: QuasiUniformGrid,
        coeffs: Vec<f64>,
        x_projectors: Vec<LevelProjector>,
        y_projectors: Vec<LevelProjector>,
    ) -> Self {
        let r = spec.r();
        let mut levels: Vec<(usize, usize, f64)> = (0..=r).map(|k| (k, r - k, 1.0)).collect();
        levels.extend((0..r).map(|k| (k, r - k - 1, -1.0)));
        let seq = grid.sequences();
        let terms = levels
            .into_iter()
            .map(|(k, l, sign)| {
                let (alpha, beta) = (&seq.alpha[k], &seq.beta[l]);
                let block = DenseMatrix::from_fn(alpha.len(), beta.len(), |i, j| {
                    let pos = grid
                        .position(alpha[i], beta[j])
                        .expect("lower-level pairs lie on the grid");
                    coeffs[pos]
                });
                TensorTerm {
                    x_level: k,
                    y_level: l,
                    sign,
                    coeffs: block,
                }
            })
            .collect();
        Self {
            spec,
            rect,
            grid,
            coeffs,
            x_projectors,
            y_projectors,
            terms,
        }
    }

    pub fn spec(&self) -> &BlendSpec {
        &self.spec
    }

    pub fn rect(&self) -> Rect {
        self.rect
    }

    pub fn grid(&self) -> &QuasiUniformGrid {
        &self.grid
    }

    /// Coefficients aligned with `grid().points()`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, j: usize) -> Option<f64> {
        self.grid.position(i, j).map(|p| self.coeffs[p])
    }

    pub fn x_projectors(&self) -> &[LevelProjector] {
        &self.x_projectors
    }

    pub fn y_projectors(&self) -> &[LevelProjector] {
        &self.y_projectors
    }

    pub fn terms(&self) -> &[TensorTerm] {
        &self.terms
    }

    fn dual_values(&self, u: f64, v: f64) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        (
            self.x_projectors.iter().map(|p| p.eval_dual_basis(u)).collect(),
            self.y_projectors.iter().map(|p| p.eval_dual_basis(v)).collect(),
        )
    }

    /// Per-term values `D^{m_k}(u) C_{k,l} D^{n_l}(v)^T`, unsigned.
    pub fn term_values(&self, u: f64, v: f64) -> Vec<TermValue> {
        let (dx, dy) = self.dual_values(u, v);
        self.terms
            .iter()
            .map(|t| TermValue {
                x_level: t.x_level,
                y_level: t.y_level,
                sign: t.sign,
                value: dot(&t.coeffs.left_mul_vec(&dx[t.x_level]), &dy[t.y_level]),
            })
            .collect()
    }

    /// Surface value through the `2r + 1` signed tensor terms.
    pub fn evaluate(&self, u: f64, v: f64) -> f64 {
        self.term_values(u, v).iter().map(|t| t.sign * t.value).sum()
    }

    /// `Phi_{i,j}(u, v)`, the blended basis function dual to the functional
    /// pair at grid point `(i, j)`.
    pub fn dual_basis_eval(&self, i: usize, j: usize, u: f64, v: f64) -> Result<f64> {
        if !self.grid.contains(i, j) {
            return Err(BlendError::NotInGrid { i, j });
        }
        let (dx, dy) = self.dual_values(u, v);
        Ok(self.phi_from(&dx, &dy, i, j))
    }

    fn phi_from(&self, dx: &[Vec<f64>], dy: &[Vec<f64>], i: usize, j: usize) -> f64 {
        let r = self.spec.r();
        let factor = |k: usize, l: usize| -> f64 {
            match (self.grid.inverse_alpha(k, i), self.grid.inverse_beta(l, j)) {
                (Some(p), Some(q)) => dx[k][p] * dy[l][q],
                _ => 0.0,
            }
        };
        let plus: f64 = (0..=r).map(|k| factor(k, r - k)).sum();
        let minus: f64 = (0..r).map(|k| factor(k, r - k - 1)).sum();
        plus - minus
    }

    /// Surface value as `sum b_{i,j} Phi_{i,j}(u, v)`.
    pub fn evaluate_dual_form(&self, u: f64, v: f64) -> f64 {
        let (dx, dy) = self.dual_values(u, v);
        self.grid
            .points()
            .iter()
            .zip(&self.coeffs)
            .map(|(&(i, j), b)| b * self.phi_from(&dx, &dy, i, j))
            .sum()
    }

    /// Coefficients at their top-degree nodes, in lexicographic `(i, j)`.
    pub fn control_net(&self) -> Vec<ControlPoint> {
        let r = self.spec.r();
        let xs = self.x_projectors[r].high().nodes();
        let ys = self.y_projectors[r].high().nodes();
        self.grid
            .points()
            .iter()
            .zip(&self.coeffs)
            .map(|(&(i, j), &b)| ControlPoint {
                i,
                j,
                x: xs[i],
                y: ys[j],
                b,
            })
            .collect()
    }

    /// CSV with header `i,j,x,y,b`.
    pub fn write_control_net_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "i,j,x,y,b")?;
        for p in self.control_net() {
            writeln!(
                out,
                "{},{},{},{},{}",
                p.i,
                p.j,
                fmt_real(p.x),
                fmt_real(p.y),
                fmt_real(p.b)
            )?;
        }
        Ok(())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// 17 significant digits in scientific notation.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}
