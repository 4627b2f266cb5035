//! φ-exponential families `pᵢ(θ) = exp_φ(Ψ(θ) + θ·Eᵢ)` on finite configuration
//! sets: normalization, the Legendre pair and MaxEnt fitting.
//!
//! `Ψ` is the normalizer of the family. The Legendre potential whose gradient is
//! the escort moment vector η is `Ψ̃ = −Ψ`, so `φ(η) = η·θ − Ψ̃`.

mod fit;

pub use fit::{fit_escort_moments, fit_linear_moments, FitOptions};

use crate::deform::{Deformation, ProbVec};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::{lit, Real};
use crate::specfun::{find_root, Tolerance};

/// Configuration matrix: row `i` is the vector `Eᵢ` of state `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigMatrix<T> {
    e: Mat<T>,
}

impl<T: Real> ConfigMatrix<T> {
    /// Requires finite entries, at least two states and one constraint, and
    /// linearly independent columns together with the all-ones vector.
    pub fn new(rows: &[Vec<T>]) -> Result<Self> {
        let e = Mat::from_rows(rows)?;
        if e.rows() < 2 || e.cols() < 1 {
            return Err(Error::dim(format!(
                "need n >= 2 states and m >= 1 constraints, got {}x{}",
                e.rows(),
                e.cols()
            )));
        }
        if !e.is_finite() {
            return Err(Error::domain("configuration matrix has non-finite entries"));
        }
        let augmented = Mat::from_fn(e.rows(), e.cols() + 1, |i, j| if j == 0 { T::one() } else { e[(i, j - 1)] });
        if augmented.rank() != e.cols() + 1 {
            return Err(Error::DegenerateParameters("columns of E and the ones vector are linearly dependent".into()));
        }
        Ok(Self { e })
    }

    /// A single constraint with the given per-state values.
    pub fn column(values: &[T]) -> Result<Self> {
        Self::new(&values.iter().map(|&v| vec![v]).collect::<Vec<_>>())
    }

    pub fn states(&self) -> usize {
        self.e.rows()
    }

    pub fn constraints(&self) -> usize {
        self.e.cols()
    }

    pub fn row(&self, i: usize) -> &[T] {
        self.e.row(i)
    }

    pub fn matrix(&self) -> &Mat<T> {
        &self.e
    }

    /// `Eᵀ w`.
    pub fn moments(&self, w: &[T]) -> Result<Vec<T>> {
        if w.len() != self.states() {
            return Err(Error::dim(format!("{} weights for {} states", w.len(), self.states())));
        }
        Ok((0..self.constraints()).map(|j| (0..self.states()).map(|i| w[i] * self.e[(i, j)]).sum()).collect())
    }

    /// Moments under the uniform distribution.
    pub fn uniform_moments(&self) -> Vec<T> {
        let w = vec![T::one() / T::from_count(self.states()); self.states()];
        self.moments(&w).expect("length matches")
    }

    /// `θ·Eᵢ` for every state.
    pub fn scores(&self, theta: &[T]) -> Result<Vec<T>> {
        if theta.len() != self.constraints() {
            return Err(Error::dim(format!("θ has length {}, E has {} columns", theta.len(), self.constraints())));
        }
        Ok((0..self.states()).map(|i| self.row(i).iter().zip(theta).map(|(&e, &t)| e * t).sum()).collect())
    }
}

/// A normalized member of the φ-exponential family.
#[derive(Debug, Clone)]
pub struct PhiExpFamily<T: Real> {
    d: Deformation<T>,
    e: ConfigMatrix<T>,
    theta: Vec<T>,
    psi: T,
    pmf: ProbVec<T>,
}

impl<T: Real> PhiExpFamily<T> {
    pub fn deformation(&self) -> &Deformation<T> {
        &self.d
    }

    pub fn config(&self) -> &ConfigMatrix<T> {
        &self.e
    }

    pub fn theta(&self) -> &[T] {
        &self.theta
    }

    /// The normalizer Ψ found by root finding.
    pub fn psi(&self) -> T {
        self.psi
    }

    /// `Ψ̃ = −Ψ`, the potential with `∇Ψ̃ = η`.
    pub fn legendre_potential(&self) -> T {
        -self.psi
    }

    pub fn pmf(&self) -> &ProbVec<T> {
        &self.pmf
    }

    /// `Eᵀ p`.
    pub fn linear_moments(&self) -> Vec<T> {
        self.e.moments(self.pmf.probs()).expect("length matches")
    }

    /// Escort weights `φ(pᵢ)`, with cutoff states contributing 0.
    pub(crate) fn escort_weights(&self) -> Result<Vec<T>> {
        self.pmf
            .probs()
            .iter()
            .map(|&p| {
                if p == T::zero() {
                    return Ok(T::zero());
                }
                let w = self.d.phi(p);
                if w.is_finite() && w >= T::zero() {
                    Ok(w)
                } else {
                    Err(Error::Boundary(format!("φ({p:e}) = {w:e}")))
                }
            })
            .collect()
    }

    /// `Eᵀ P^φ`, allowing cutoff states.
    pub(crate) fn escort_moments(&self) -> Result<Vec<T>> {
        let w = self.escort_weights()?;
        let h: T = w.iter().copied().sum();
        let moments = self.e.moments(&w)?;
        Ok(moments.into_iter().map(|v| v / h).collect())
    }
}

/// Finds Ψ with `Σᵢ exp_φ(Ψ + θ·Eᵢ) = 1`.
///
/// The sum is increasing in Ψ, at most 1 at `log_φ(1/n) − max θ·E` and at least 1
/// at `−max θ·E`, so Brent's method on that bracket always applies; a few Newton
/// steps polish the root.
pub fn normalize<T: Real>(d: &Deformation<T>, e: &ConfigMatrix<T>, theta: &[T]) -> Result<PhiExpFamily<T>> {
    if theta.iter().any(|t| !t.is_finite()) {
        return Err(Error::domain("θ must be finite"));
    }
    let u = e.scores(theta)?;
    let n = e.states();
    let u_max = u.iter().copied().fold(-T::infinity(), T::max);
    let no_norm = |err: Error| Error::NoNormalization(format!("{} at θ = {theta:?}: {err}", d.name()));
    let total = |psi: T| -> Result<T> {
        let mut s = T::zero();
        for &ui in &u {
            s += d.exp(psi + ui)?;
        }
        Ok(s - T::one())
    };
    let lo = d.log(T::one() / T::from_count(n)).map_err(no_norm)? - u_max;
    let hi = -u_max;
    let mut psi = if total(lo).map_err(no_norm)? >= T::zero() {
        lo
    } else {
        find_root(total, lo, hi, &Tolerance::standard()).map_err(no_norm)?
    };
    for _ in 0..3 {
        let mut s = -T::one();
        let mut ds = T::zero();
        for &ui in &u {
            let p = d.exp(psi + ui).map_err(no_norm)?;
            s += p;
            if p > T::zero() {
                ds += d.phi(p);
            }
        }
        if s == T::zero() || !(ds > T::zero()) || !ds.is_finite() {
            break;
        }
        let next = psi - s / ds;
        if !(next >= lo && next <= hi) {
            break;
        }
        psi = next;
    }
    let probs: Vec<T> = u.iter().map(|&ui| d.exp(psi + ui)).collect::<Result<_>>().map_err(no_norm)?;
    let sum: T = probs.iter().copied().sum();
    if (sum - T::one()).abs() > lit::<T>(1e-10).max(T::epsilon() * lit(64.0 * n as f64)) {
        return Err(Error::NoNormalization(format!("Σ p = {sum:e} after root finding")));
    }
    let pmf = ProbVec::new(probs).map_err(no_norm)?;
    Ok(PhiExpFamily { d: d.clone(), e: e.clone(), theta: theta.to_vec(), psi, pmf })
}

/// Ψ computed three ways; the last field is the escort-constraint Lagrange
/// identity `−Σφ(pᵢ)`, a diagnostic that is not expected to match.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiForms<T> {
    pub psi_root: T,
    /// `⟨log_φ p⟩ − θ·⟨E⟩`.
    pub psi_linear: T,
    /// `⟨log_φ p⟩_φ − θ·⟨E⟩_φ`.
    pub psi_escort: T,
    pub psi_phi_sum: T,
}

impl<T: Real> PsiForms<T> {
    pub fn max_discrepancy(&self) -> T {
        (self.psi_linear - self.psi_root).abs().max((self.psi_escort - self.psi_root).abs())
    }
}

pub fn psi_forms<T: Real>(fam: &PhiExpFamily<T>) -> Result<PsiForms<T>> {
    fam.pmf.require_interior("psi_forms")?;
    let d = &fam.d;
    let probs = fam.pmf.probs();
    let logs: Vec<T> = probs.iter().map(|&p| d.log(p)).collect::<Result<_>>()?;
    let escort = d.escort(&fam.pmf)?;
    let dot = |a: &[T], b: &[T]| -> T { a.iter().zip(b).map(|(&x, &y)| x * y).sum() };
    let lin_e = fam.e.moments(probs)?;
    let esc_e = fam.e.moments(escort.probs())?;
    Ok(PsiForms {
        psi_root: fam.psi,
        psi_linear: dot(probs, &logs) - dot(&fam.theta, &lin_e),
        psi_escort: dot(escort.probs(), &logs) - dot(&fam.theta, &esc_e),
        psi_phi_sum: -probs.iter().map(|&p| d.phi(p)).sum::<T>(),
    })
}

/// Dual coordinates `η = Eᵀ P^φ`.
pub fn eta_coords<T: Real>(fam: &PhiExpFamily<T>) -> Result<Vec<T>> {
    fam.pmf.require_interior("eta_coords")?;
    let escort = fam.d.escort(&fam.pmf)?;
    fam.e.moments(escort.probs())
}

/// The two expressions of the Legendre dual `φ(η)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarphiDual<T> {
    /// `η·θ − Ψ̃`.
    pub legendre_value: T,
    /// `Σⱼ P^φⱼ log_φ(pⱼ)`, equal to `−S^A(p)`.
    pub escort_average_value: T,
}

pub fn varphi_dual<T: Real>(fam: &PhiExpFamily<T>) -> Result<VarphiDual<T>> {
    let eta = eta_coords(fam)?;
    let escort = fam.d.escort(&fam.pmf)?;
    let mut avg = T::zero();
    for (&w, &p) in escort.probs().iter().zip(fam.pmf.probs()) {
        avg += w * fam.d.log(p)?;
    }
    let eta_theta: T = eta.iter().zip(&fam.theta).map(|(&a, &b)| a * b).sum();
    Ok(VarphiDual { legendre_value: eta_theta - fam.legendre_potential(), escort_average_value: avg })
}
