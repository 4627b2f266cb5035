use crate::deform::{Deformation, ProbVec};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::hessian;

use super::MetricMatrix;

fn finite_weights<T: Real>(weights: Vec<T>, what: &str) -> Result<Vec<T>> {
    match weights.iter().position(|w| !w.is_finite()) {
        Some(i) => Err(Error::Boundary(format!("{what}: non-finite weight at state {i}"))),
        None => Ok(weights),
    }
}

/// The classical Fisher metric `δᵢⱼ/pᵢ + 1/p₀`.
pub fn fisher_metric<T: Real>(p: &ProbVec<T>) -> Result<MetricMatrix<T>> {
    p.require_interior("fisher_metric")?;
    let w: Vec<T> = p.probs().iter().map(|&pi| pi.recip()).collect();
    Ok(MetricMatrix::from_weights(&w, p))
}

/// `g^N_ij = δᵢⱼ/φ(pᵢ) + 1/φ(p₀)`.
pub fn metric_naudts<T: Real>(d: &Deformation<T>, p: &ProbVec<T>) -> Result<MetricMatrix<T>> {
    p.require_interior("metric_naudts")?;
    let w = finite_weights(p.probs().iter().map(|&pi| d.phi(pi).recip()).collect(), "metric_naudts")?;
    Ok(MetricMatrix::from_weights(&w, p))
}

/// `g^A_ij = (1/h_φ)(φ′(pᵢ)/φ(pᵢ) δᵢⱼ + φ′(p₀)/φ(p₀))`.
pub fn metric_amari<T: Real>(d: &Deformation<T>, p: &ProbVec<T>) -> Result<MetricMatrix<T>> {
    p.require_interior("metric_amari")?;
    let h = d.h(p)?;
    let w = p.probs().iter().map(|&pi| d.phi_prime(pi) / d.phi(pi) / h).collect();
    Ok(MetricMatrix::from_weights(&finite_weights(w, "metric_amari")?, p))
}

/// Hessian of `q ↦ div(p, q)` at `q = p` in the coordinates `(q₁ … q_{n−1})`.
pub fn metric_fd_oracle<T: Real, F>(div: F, p: &ProbVec<T>) -> Result<MetricMatrix<T>>
where
    F: Fn(&ProbVec<T>, &ProbVec<T>) -> Result<T>,
{
    p.require_interior("metric_fd_oracle")?;
    let m = hessian(
        |x: &[T]| {
            let q = ProbVec::from_independent(x)?;
            q.require_interior("metric_fd_oracle stencil")?;
            div(p, &q)
        },
        p.independent(),
    )?;
    Ok(MetricMatrix::simplex(m, p))
}

/// `T(g) = −N_g (ln g)′` applied to the Naudts generator `g = 1/φ`, with
/// `N_g = 1/Σᵢ 1/g(pᵢ) = 1/h_φ(p)`.
pub fn t_operator<T: Real>(d: &Deformation<T>, p: &ProbVec<T>) -> Result<MetricMatrix<T>> {
    p.require_interior("t_operator")?;
    let g = |x: T| d.phi(x).recip();
    let g_prime = |x: T| {
        let f = d.phi(x);
        -d.phi_prime(x) / (f * f)
    };
    let n_g = p.probs().iter().map(|&pi| g(pi).recip()).sum::<T>().recip();
    let w = p.probs().iter().map(|&pi| -n_g * g_prime(pi) / g(pi)).collect();
    Ok(MetricMatrix::from_weights(&finite_weights(w, "t_operator")?, p))
}
