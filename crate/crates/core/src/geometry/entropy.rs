use crate::deform::{Deformation, ProbVec};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `S^N(p) = −Σⱼ ∫₀^{pⱼ} log_φ(x) dx`.
pub fn entropy_naudts<T: Real>(d: &Deformation<T>, p: &ProbVec<T>) -> Result<T> {
    let mut s = T::zero();
    for &pi in p.probs() {
        s -= d.log_integral_from_zero(pi)?;
    }
    Ok(s)
}

/// `S^A(p) = −(1/h_φ(p)) Σⱼ φ(pⱼ) log_φ(pⱼ)`, the escort average of `−log_φ`.
pub fn entropy_amari<T: Real>(d: &Deformation<T>, p: &ProbVec<T>) -> Result<T> {
    p.require_interior("entropy_amari")?;
    let h = d.h(p)?;
    let mut s = T::zero();
    for &pi in p.probs() {
        s -= d.phi(pi) * d.log(pi)?;
    }
    Ok(s / h)
}

/// `S_φ(p) = Σᵢ (φ(pᵢ) − pᵢ)/ν`.
pub fn entropy_from_phi_nu<T: Real>(d: &Deformation<T>, nu: T, p: &ProbVec<T>) -> Result<T> {
    if nu == T::zero() || !nu.is_finite() {
        return Err(Error::domain("entropy_from_phi_nu needs a finite ν != 0"));
    }
    p.require_interior("entropy_from_phi_nu")?;
    Ok(p.probs().iter().map(|&pi| (d.phi(pi) - pi) / nu).sum())
}
