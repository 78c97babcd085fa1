//! Discretely blended Bernstein-Bezier quasi-interpolants.
//!
//! The approximating space is a sum of tensor polynomial spaces
//! `Pi_{m_0} x Pi_{n_r} + ... + Pi_{m_r} x Pi_{n_0}`. A [`BlendedSurface`] is
//! fitted from dual functionals of the top-degree Bernstein bases, restricted
//! to a quasi-uniform grid whose size equals the dimension of that space, and
//! evaluated as a Boolean sum of tensor quasi-interpolants.
//!
//! ```
//! use blendkit::{BlendSpec, BlendedSurface, Rect};
//!
//! let spec = BlendSpec::new(vec![2, 4], vec![2, 4]).unwrap();
//! assert_eq!(spec.dimension(), 21);
//! assert_eq!(spec.predicted_order(), 5);
//!
//! let s = BlendedSurface::fit(&spec, Rect::unit(), |x, y| x * x * y).unwrap();
//! assert!((s.evaluate(0.5, 0.5) - 0.125).abs() < 1e-12);
//! ```

pub mod bernstein;
pub mod error;
pub mod numeric;
pub mod piecewise;
pub mod projector;
pub mod spec;
pub mod surface;

#[cfg(test)]
mod testutil;

pub use bernstein::{elevation_matrix, BernsteinContext};
pub use error::{BlendError, Result};
pub use numeric::{inf_norm, lu_solve, DenseMatrix, LuFactors};
pub use piecewise::{
    convergence_study, convergence_study_with, fit_order, fit_piecewise, sup_error,
    ConvergenceRow, ConvergenceTable, OrderEstimate, OrderFit, PiecewiseSurface, StudyOptions,
};
pub use projector::{axis_projectors, build_projector, LevelProjector};
pub use spec::{
    dimension, elevate_to_divisible, index_sequences, lower_set, normalize_sequences,
    permutation_check, predicted_order, quasi_uniform_grid, stability_factor, Axis, BlendSpec,
    IndexSequences, LowerSet, QuasiUniformGrid,
};
pub use surface::{BlendedSurface, ControlPoint, Rect, SurfaceFile, TensorTerm, TermValue};
