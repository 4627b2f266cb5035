//! Special functions and numerical kernels used throughout the crate:
//! Lambert W, the upper incomplete gamma function, adaptive quadrature,
//! bracketed root finding and central finite differences.
//!
//! Every routine is a pure function of its inputs.

mod diff;
mod gamma;
mod lambert;
mod quad;
mod roots;

pub use diff::{derivative, gradient, hessian, numeric_diff, Derivative, DiffOrder};
pub use gamma::{gamma, upper_gamma};
pub use lambert::{lambert_w, Branch};
pub use quad::{integrate, integrate_from_zero, integrate_to_infinity};
pub use roots::{find_root, find_root_newton};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Convergence targets for iterative kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_iter: usize,
}

impl<T: Real> Tolerance<T> {
    pub fn new(abs_tol: T, rel_tol: T, max_iter: usize) -> Result<Self> {
        if !(abs_tol > T::zero()) || !(rel_tol > T::zero()) || max_iter == 0 {
            return Err(Error::domain("tolerance needs abs_tol > 0, rel_tol > 0, max_iter >= 1"));
        }
        Ok(Self { abs_tol, rel_tol, max_iter })
    }

    /// Tight default: a few hundred ulps, 200 iterations.
    pub fn standard() -> Self {
        let t = T::epsilon() * lit(512.0);
        Self { abs_tol: t, rel_tol: t, max_iter: 200 }
    }

    /// Default for adaptive quadrature, where `max_iter` is the interval budget.
    pub fn quadrature() -> Self {
        let t = T::epsilon() * lit(512.0);
        Self { abs_tol: t, rel_tol: t, max_iter: 4000 }
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter.max(1);
        self
    }

    /// `true` when `err` meets either the absolute or the relative target at scale `value`.
    pub(crate) fn accepts(&self, err: T, value: T) -> bool {
        err <= self.abs_tol || err <= self.rel_tol * value.abs()
    }
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Self::standard()
    }
}
