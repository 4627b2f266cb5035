use crate::deform::{exp_of_log, Deformation, ProbVec};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::{integrate, Tolerance};

use super::metric::{metric_amari, metric_naudts};
use super::MetricMatrix;

/// Residuals between two computations of the same quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct DualityReport<T> {
    pub lhs_label: String,
    pub rhs_label: String,
    pub max_abs_residual: T,
    pub max_rel_residual: T,
    pub grid: Vec<Vec<T>>,
    pub conformal_factor: Option<Vec<T>>,
}

impl<T: Real> DualityReport<T> {
    /// Report for a single point comparing two matrices, relative to `rhs`.
    pub fn from_matrices(
        lhs_label: impl Into<String>,
        rhs_label: impl Into<String>,
        lhs: &MetricMatrix<T>,
        rhs: &MetricMatrix<T>,
        point: Vec<T>,
        factor: Option<T>,
    ) -> Result<Self> {
        Ok(Self {
            lhs_label: lhs_label.into(),
            rhs_label: rhs_label.into(),
            max_abs_residual: lhs.max_abs_diff(rhs)?,
            max_rel_residual: lhs.rel_diff(rhs)?,
            grid: vec![point],
            conformal_factor: factor.map(|f| vec![f]),
        })
    }

    /// Combines per-point reports: worst residuals, concatenated grids.
    pub fn merge(reports: impl IntoIterator<Item = Self>) -> Option<Self> {
        let mut iter = reports.into_iter();
        let mut acc = iter.next()?;
        for r in iter {
            acc.max_abs_residual = acc.max_abs_residual.max(r.max_abs_residual);
            acc.max_rel_residual = acc.max_rel_residual.max(r.max_rel_residual);
            acc.grid.extend(r.grid);
            acc.conformal_factor = match (acc.conformal_factor, r.conformal_factor) {
                (Some(mut a), Some(b)) => {
                    a.extend(b);
                    Some(a)
                }
                _ => None,
            };
        }
        Some(acc)
    }

    pub fn passes(&self, rel_tol: T) -> bool {
        self.max_rel_residual <= rel_tol
    }
}

/// `(g(pᵢ), 1 + ν∫₁^{pᵢ} g)` for `g = 1/φ`, integrated independently of `log_φ`.
fn ts_factors<T: Real>(d: &Deformation<T>, nu: T, p: &ProbVec<T>) -> Result<Vec<(T, T)>> {
    if !nu.is_finite() {
        return Err(Error::domain("ν must be finite"));
    }
    p.require_interior("ts_metric_transform")?;
    let tol = Tolerance::quadrature();
    p.probs()
        .iter()
        .map(|&x| {
            let g = d.phi(x).recip();
            if nu == T::zero() {
                return Ok((g, T::one()));
            }
            let integral = integrate(|y| Ok(d.phi(y).recip()), T::one(), x, &tol)?;
            let f = T::one() + nu * integral;
            if !(f > T::zero()) || !g.is_finite() {
                return Err(Error::Pole(format!("1 + ν∫₁ˣ 1/φ = {f:e} at x = {x:e}")));
            }
            Ok((g, f))
        })
        .collect()
}

/// `T_ν(g) = g/(1 + ν∫₁ˣ g)²` applied to `g = 1/φ`; this is the Naudts metric of
/// `ts_dual(d, ν)`.
pub fn ts_metric_transform<T: Real>(d: &Deformation<T>, nu: T, p: &ProbVec<T>) -> Result<MetricMatrix<T>> {
    let w: Vec<T> = ts_factors(d, nu, p)?.into_iter().map(|(g, f)| g / (f * f)).collect();
    Ok(MetricMatrix::from_weights(&w, p))
}

/// The transform in its printed form `g(1 + ν∫₁ˣ g)²`, kept for comparison.
pub fn ts_metric_transform_printed<T: Real>(d: &Deformation<T>, nu: T, p: &ProbVec<T>) -> Result<MetricMatrix<T>> {
    let w: Vec<T> = ts_factors(d, nu, p)?.into_iter().map(|(g, f)| g * f * f).collect();
    Ok(MetricMatrix::from_weights(&w, p))
}

/// Compares `g^N_χ` with `h_ξ g^A_ξ` for `ξ = exp ∘ log_χ`.
pub fn conformal_check<T: Real>(chi: &Deformation<T>, p: &ProbVec<T>) -> Result<DualityReport<T>> {
    let xi = exp_of_log(chi)?;
    let lhs = metric_naudts(chi, p)?;
    let omega = xi.h(p)?;
    let rhs = metric_amari(&xi, p)?.scale(omega);
    DualityReport::from_matrices("g^N[chi]", "h_xi * g^A[xi]", &lhs, &rhs, p.probs().to_vec(), Some(omega))
}
