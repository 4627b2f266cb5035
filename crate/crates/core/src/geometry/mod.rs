//! Entropies, divergences and the two Fisher metrics of a deformation, with the
//! dualities that connect them.

mod cd;
mod divergence;
mod duality;
mod entropy;
mod metric;

pub use cd::{cd_entropy_closed, cd_entropy_compare, cd_metrics_closed, CdEntropyComparison, CdMetrics};
pub use divergence::{
    divergence_amari, divergence_bregman, divergence_csiszar, divergence_naudts, naudts_bregman_generator,
};
pub use duality::{conformal_check, ts_metric_transform, ts_metric_transform_printed, DualityReport};
pub use entropy::{entropy_amari, entropy_from_phi_nu, entropy_naudts};
pub use metric::{fisher_metric, metric_amari, metric_fd_oracle, metric_naudts, t_operator};

use crate::deform::ProbVec;
use crate::error::Result;
use crate::linalg::Mat;
use crate::scalar::Real;

/// Coordinates a metric is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    /// Independent simplex coordinates `p₁ … p_{n−1}`, with p₀ dependent.
    SimplexInterior,
    /// Natural parameters θ of an exponential family.
    Theta,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BasePoint<T> {
    Simplex(ProbVec<T>),
    Theta(Vec<T>),
}

/// A symmetric matrix tagged with its chart and base point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrix<T> {
    entries: Mat<T>,
    chart: Chart,
    base: BasePoint<T>,
}

impl<T: Real> MetricMatrix<T> {
    /// Wraps a square matrix; the entries are symmetrized.
    pub fn new(mut entries: Mat<T>, chart: Chart, base: BasePoint<T>) -> Self {
        entries.symmetrize();
        Self { entries, chart, base }
    }

    pub(crate) fn simplex(entries: Mat<T>, p: &ProbVec<T>) -> Self {
        Self::new(entries, Chart::SimplexInterior, BasePoint::Simplex(p.clone()))
    }

    /// The diagonal-plus-rank-one form `dᵢ δᵢⱼ + d₀` shared by all simplex metrics.
    pub(crate) fn from_weights(weights: &[T], p: &ProbVec<T>) -> Self {
        let m = weights.len() - 1;
        let entries = Mat::from_fn(m, m, |i, j| {
            let diag = if i == j { weights[i + 1] } else { T::zero() };
            diag + weights[0]
        });
        Self::simplex(entries, p)
    }

    pub fn entries(&self) -> &Mat<T> {
        &self.entries
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn base_point(&self) -> &BasePoint<T> {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[(i, j)]
    }

    pub fn scale(&self, s: T) -> Self {
        Self { entries: self.entries.scale(s), chart: self.chart, base: self.base.clone() }
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        self.entries.symmetric_eigenvalues()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.eigenvalues().first().is_some_and(|&v| v > T::zero())
    }

    /// `‖self − other‖_∞`, entrywise.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        Ok(self.entries.sub(&other.entries)?.max_abs())
    }

    /// `‖self − reference‖_∞ / ‖reference‖_∞`.
    pub fn rel_diff(&self, reference: &Self) -> Result<T> {
        Ok(self.max_abs_diff(reference)? / reference.entries.max_abs())
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.entries.to_rows()
    }
}
