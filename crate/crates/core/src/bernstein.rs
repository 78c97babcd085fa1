//! Univariate Bernstein bases on an interval, their uniform-node dual
//! functionals, and degree elevation.

use crate::error::{BlendError, Result};
use crate::numeric::{DenseMatrix, LuFactors};

/// Bernstein basis of one degree on `[a, b]`, with the collocation matrix at
/// the uniform nodes already factored.
///
/// Row `i` of the collocation matrix holds every basis function evaluated at
/// node `i`. The dual functionals are `lambda = T^{-1} (f(x_0), ..., f(x_n))`.
#[derive(Debug, Clone)]
pub struct BernsteinContext {
    degree: usize,
    a: f64,
    b: f64,
    nodes: Vec<f64>,
    binomials: Vec<f64>,
    collocation: DenseMatrix,
    factored: LuFactors,
}

impl BernsteinContext {
    pub fn new(degree: usize, a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(BlendError::InvalidInterval(a, b));
        }
        let nodes = uniform_nodes(degree, a, b);
        let binomials = binomial_row(degree);
        let mut ctx = Self {
            degree,
            a,
            b,
            nodes,
            binomials,
            collocation: DenseMatrix::identity(1),
            factored: LuFactors::factor(&DenseMatrix::identity(1))?,
        };
        let rows: Vec<Vec<f64>> = ctx.nodes.iter().map(|&x| ctx.eval(x)).collect();
        ctx.collocation = DenseMatrix::from_rows(&rows)?;
        ctx.factored = LuFactors::factor(&ctx.collocation)?;
        Ok(ctx)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn collocation(&self) -> &DenseMatrix {
        &self.collocation
    }

    /// All basis values `[B_0(x), ..., B_n(x)]`.
    ///
    /// Points outside `[a, b]` are allowed; the values then leave `[0, 1]`.
    pub fn eval(&self, x: f64) -> Vec<f64> {
        let n = self.degree;
        let h = self.b - self.a;
        let t = (x - self.a) / h;
        let s = (self.b - x) / h;
        let mut t_pow = vec![1.0; n + 1];
        let mut s_pow = vec![1.0; n + 1];
        for k in 1..=n {
            t_pow[k] = t_pow[k - 1] * t;
            s_pow[k] = s_pow[k - 1] * s;
        }
        (0..=n)
            .map(|i| self.binomials[i] * s_pow[n - i] * t_pow[i])
            .collect()
    }

    /// Polynomial `sum_i coeffs[i] B_i(x)`.
    pub fn eval_poly(&self, coeffs: &[f64], x: f64) -> f64 {
        debug_assert_eq!(coeffs.len(), self.degree + 1);
        self.eval(x).iter().zip(coeffs).map(|(b, c)| b * c).sum()
    }

    /// Applies the dual functionals to a function given by its values at the
    /// nodes. The result is `[lambda_0 f, ..., lambda_n f]`.
    pub fn dual_apply(&self, samples: &[f64]) -> Result<Vec<f64>> {
        if samples.len() != self.degree + 1 {
            return Err(BlendError::DimensionMismatch(format!(
                "{} samples for degree {}",
                samples.len(),
                self.degree
            )));
        }
        self.factored.solve_vec(samples)
    }

    /// Dual functionals of a callable.
    pub fn dual_apply_fn(&self, f: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
        let samples: Vec<f64> = self.nodes.iter().map(|&x| f(x)).collect();
        self.dual_apply(&samples)
    }

    /// `T^{-1}` as an explicit matrix.
    pub fn collocation_inverse(&self) -> Result<DenseMatrix> {
        self.factored.inverse()
    }
}

/// `x_i = a + (i / n)(b - a)`; a single node at `a` for degree zero.
pub fn uniform_nodes(degree: usize, a: f64, b: f64) -> Vec<f64> {
    if degree == 0 {
        return vec![a];
    }
    let n = degree as f64;
    (0..=degree)
        .map(|i| {
            if i == degree {
                b
            } else {
                a + (i as f64 / n) * (b - a)
            }
        })
        .collect()
}

fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = vec![1.0; n + 1];
    for k in 1..n {
        row[k] = row[k - 1] * (n - k + 1) as f64 / k as f64;
    }
    // products of exact small integers; round off the division residue
    row.iter().map(|v| v.round()).collect()
}

/// Degree elevation matrix `E` with `B^low(x) = B^high(x) E`.
///
/// Column `j` holds the dual functionals of the high-degree basis applied to
/// `B_j^low`, so `E` has `high + 1` rows and `low + 1` columns.
pub fn elevation_matrix(low: &BernsteinContext, high: &BernsteinContext) -> Result<DenseMatrix> {
    if low.degree > high.degree {
        return Err(BlendError::DegreeOrder {
            low: low.degree,
            high: high.degree,
        });
    }
    if low.a != high.a || low.b != high.b {
        return Err(BlendError::IntervalMismatch(low.a, low.b, high.a, high.b));
    }
    let basis_at_nodes: Vec<Vec<f64>> = high.nodes.iter().map(|&x| low.eval(x)).collect();
    let mut e = DenseMatrix::zeros(high.degree + 1, low.degree + 1);
    for j in 0..=low.degree {
        let samples: Vec<f64> = basis_at_nodes.iter().map(|row| row[j]).collect();
        for (i, v) in high.dual_apply(&samples)?.into_iter().enumerate() {
            e[(i, j)] = v;
        }
    }
    Ok(e)
}
