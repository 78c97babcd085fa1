//! Univariate quasi-interpolation projectors onto the levels of a blend.
//!
//! Level `k` of an axis projects onto polynomials of degree `d_k` using only
//! the top-degree dual functionals selected by the index sequence of that
//! level. The basis dual to those functionals is `D = B^{d_k} A` with
//! `A = E_{d_k}^{d_r}(alpha^k, :)^{-1}`.

use crate::bernstein::{elevation_matrix, BernsteinContext};
use crate::error::{BlendError, Result};
use crate::numeric::{inf_norm, inverse, DenseMatrix};
use crate::spec::{index_sequences, Axis, BlendSpec};

#[derive(Debug, Clone)]
pub struct LevelProjector {
    axis: Axis,
    level: usize,
    low: BernsteinContext,
    high: BernsteinContext,
    dual_coeff: DenseMatrix,
    selected: Vec<usize>,
}

impl LevelProjector {
    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.low.degree()
    }

    pub fn low(&self) -> &BernsteinContext {
        &self.low
    }

    pub fn high(&self) -> &BernsteinContext {
        &self.high
    }

    /// `A = E(alpha^k, :)^{-1}`.
    pub fn dual_coeff(&self) -> &DenseMatrix {
        &self.dual_coeff
    }

    /// Top-degree functional indices used by this level.
    pub fn selected_indices(&self) -> &[usize] {
        &self.selected
    }

    /// Coefficients of the projection in the dual basis `D`, from samples at
    /// the top-degree nodes.
    pub fn project(&self, high_samples: &[f64]) -> Result<Vec<f64>> {
        let lambda = self.high.dual_apply(high_samples)?;
        Ok(self.selected.iter().map(|&i| lambda[i]).collect())
    }

    pub fn project_fn(&self, f: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
        let samples: Vec<f64> = self.high.nodes().iter().map(|&x| f(x)).collect();
        self.project(&samples)
    }

    /// `[D_0(x), ..., D_{d_k}(x)]`.
    pub fn eval_dual_basis(&self, x: f64) -> Vec<f64> {
        self.dual_coeff.left_mul_vec(&self.low.eval(x))
    }

    /// `sum_i coeffs[i] D_i(x)`.
    pub fn eval_projection(&self, coeffs: &[f64], x: f64) -> f64 {
        self.eval_dual_basis(x)
            .iter()
            .zip(coeffs)
            .map(|(d, c)| d * c)
            .sum()
    }

    /// A fully computable bound on `||P f||_inf / ||f||_inf` over the
    /// interval: the top-degree functionals are bounded by the absolute row
    /// sums of `T^{-1}`, and `sum_i |D_i| <= (d_k + 1) ||A||_inf`.
    pub fn machine_bound(&self) -> Result<f64> {
        let t_inv = self.high.collocation_inverse()?;
        let functional_bound = inf_norm(&t_inv);
        Ok((self.degree() + 1) as f64 * inf_norm(&self.dual_coeff) * functional_bound)
    }
}

fn assemble(
    spec: &BlendSpec,
    axis: Axis,
    k: usize,
    high: &BernsteinContext,
    (a, b): (f64, f64),
) -> Result<LevelProjector> {
    let degrees = spec.degrees(axis);
    let low = BernsteinContext::new(degrees[k], a, b)?;
    let seq = index_sequences(spec);
    let selected = match axis {
        Axis::First => seq.alpha[k].clone(),
        Axis::Second => seq.beta[k].clone(),
    };
    let e = elevation_matrix(&low, high)?;
    let dual_coeff = inverse(&e.select_rows(&selected))?;
    Ok(LevelProjector {
        axis,
        level: k,
        low,
        high: high.clone(),
        dual_coeff,
        selected,
    })
}

pub fn build_projector(
    spec: &BlendSpec,
    axis: Axis,
    k: usize,
    interval: (f64, f64),
) -> Result<LevelProjector> {
    let degrees = spec.degrees(axis);
    if k >= degrees.len() {
        return Err(BlendError::InvalidArgument(format!(
            "level {k} out of range 0..={}",
            degrees.len() - 1
        )));
    }
    let high = BernsteinContext::new(*degrees.last().unwrap(), interval.0, interval.1)?;
    assemble(spec, axis, k, &high, interval)
}

/// Projectors of every level of one axis, sharing one top-degree context.
pub fn axis_projectors(
    spec: &BlendSpec,
    axis: Axis,
    interval: (f64, f64),
) -> Result<Vec<LevelProjector>> {
    let degrees = spec.degrees(axis);
    let high = BernsteinContext::new(*degrees.last().unwrap(), interval.0, interval.1)?;
    (0..degrees.len())
        .map(|k| assemble(spec, axis, k, &high, interval))
        .collect()
}
