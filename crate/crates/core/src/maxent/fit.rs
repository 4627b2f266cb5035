use crate::deform::Deformation;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::{lit, Real};

use super::{normalize, ConfigMatrix, PhiExpFamily};

/// Stopping rules for the damped Newton fits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions<T> {
    /// Stop once the max-norm moment residual is below this.
    pub tol: T,
    /// Residual still accepted when step halving stalls.
    pub accept_tol: T,
    pub max_iter: usize,
    pub max_halvings: usize,
}

impl<T: Real> Default for FitOptions<T> {
    fn default() -> Self {
        let eps = T::epsilon();
        Self {
            tol: lit::<T>(1e-13).max(eps * lit(64.0)),
            accept_tol: lit::<T>(1e-9).max(eps * lit(1024.0)),
            max_iter: 200,
            max_halvings: 60,
        }
    }
}

#[derive(Clone, Copy)]
enum Constraint {
    Linear,
    Escort,
}

/// θ whose family has linear moments `Eᵀp = targets`.
pub fn fit_linear_moments<T: Real>(d: &Deformation<T>, e: &ConfigMatrix<T>, targets: &[T]) -> Result<PhiExpFamily<T>> {
    fit(d, e, targets, Constraint::Linear, &FitOptions::default())
}

/// θ whose family has escort moments `Eᵀ P^φ = targets`.
pub fn fit_escort_moments<T: Real>(d: &Deformation<T>, e: &ConfigMatrix<T>, targets: &[T]) -> Result<PhiExpFamily<T>> {
    fit(d, e, targets, Constraint::Escort, &FitOptions::default())
}

impl<T: Real> PhiExpFamily<T> {
    /// Refits with explicit options; `escort` selects the constraint type.
    pub fn fit_with(
        d: &Deformation<T>,
        e: &ConfigMatrix<T>,
        targets: &[T],
        escort: bool,
        options: &FitOptions<T>,
    ) -> Result<Self> {
        let kind = if escort { Constraint::Escort } else { Constraint::Linear };
        fit(d, e, targets, kind, options)
    }
}

fn max_norm<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

/// Moments of the requested type and their Jacobian in θ.
///
/// With `wᵢ = φ(pᵢ)` and `∂pᵢ/∂θₖ = wᵢ(Eᵢₖ − ηₖ)`:
/// linear `J = Σ wᵢ Eᵢ (Eᵢ − η)ᵀ`, escort `J = Σ φ′(pᵢ) wᵢ (Eᵢ − η)(Eᵢ − η)ᵀ / h`.
fn moments_and_jacobian<T: Real>(fam: &PhiExpFamily<T>, kind: Constraint) -> Result<(Vec<T>, Mat<T>)> {
    let e = fam.config();
    let (n, m) = (e.states(), e.constraints());
    let w = fam.escort_weights()?;
    let h: T = w.iter().copied().sum();
    let eta: Vec<T> = e.moments(&w)?.into_iter().map(|v| v / h).collect();
    let probs = fam.pmf().probs();
    match kind {
        Constraint::Linear => {
            let jac = Mat::from_fn(m, m, |j, k| (0..n).map(|i| w[i] * e.row(i)[j] * (e.row(i)[k] - eta[k])).sum());
            Ok((fam.linear_moments(), jac))
        }
        Constraint::Escort => {
            let d = fam.deformation();
            let mut weights = vec![T::zero(); n];
            for i in 0..n {
                if probs[i] > T::zero() {
                    weights[i] = d.phi_prime(probs[i]) * w[i] / h;
                }
            }
            let jac = Mat::from_fn(m, m, |j, k| {
                (0..n).map(|i| weights[i] * (e.row(i)[j] - eta[j]) * (e.row(i)[k] - eta[k])).sum()
            });
            Ok((eta, jac))
        }
    }
}

fn residual<T: Real>(fam: &PhiExpFamily<T>, kind: Constraint, targets: &[T]) -> Result<Vec<T>> {
    let moments = match kind {
        Constraint::Linear => fam.linear_moments(),
        Constraint::Escort => fam.escort_moments()?,
    };
    Ok(moments.iter().zip(targets).map(|(&a, &b)| a - b).collect())
}

fn fit<T: Real>(
    d: &Deformation<T>,
    e: &ConfigMatrix<T>,
    targets: &[T],
    kind: Constraint,
    options: &FitOptions<T>,
) -> Result<PhiExpFamily<T>> {
    if targets.len() != e.constraints() {
        return Err(Error::dim(format!("{} targets for {} constraints", targets.len(), e.constraints())));
    }
    if targets.iter().any(|t| !t.is_finite()) {
        return Err(Error::domain("targets must be finite"));
    }
    check_feasible(e, targets)?;

    let mut fam = normalize(d, e, &vec![T::zero(); e.constraints()])?;
    let mut f = residual(&fam, kind, targets)?;
    let mut norm = max_norm(&f);
    for iter in 0..options.max_iter {
        if norm <= options.tol {
            return Ok(fam);
        }
        let (_, jac) = moments_and_jacobian(&fam, kind)?;
        let step = match jac.solve(&f) {
            Ok(s) if s.iter().all(|v| v.is_finite()) => s,
            _ => return stalled(fam, norm, options, iter),
        };
        let mut t = T::one();
        let mut accepted = None;
        for _ in 0..options.max_halvings {
            let theta: Vec<T> = fam.theta().iter().zip(&step).map(|(&a, &s)| a - t * s).collect();
            if let Ok(trial) = normalize(d, e, &theta) {
                if let Ok(r) = residual(&trial, kind, targets) {
                    let rn = max_norm(&r);
                    if rn < norm {
                        accepted = Some((trial, r, rn));
                        break;
                    }
                }
            }
            t *= lit(0.5);
        }
        match accepted {
            Some((trial, r, rn)) => {
                log::trace!("fit iteration {iter}: residual {rn:e}, step {t:e}");
                fam = trial;
                f = r;
                norm = rn;
            }
            None => return stalled(fam, norm, options, iter),
        }
    }
    if norm <= options.accept_tol {
        return Ok(fam);
    }
    Err(Error::NoConvergence { what: "moment fit", iterations: options.max_iter })
}

fn stalled<T: Real>(fam: PhiExpFamily<T>, norm: T, options: &FitOptions<T>, iter: usize) -> Result<PhiExpFamily<T>> {
    if norm <= options.accept_tol {
        Ok(fam)
    } else {
        Err(Error::NoConvergence { what: "moment fit", iterations: iter })
    }
}

/// Decides whether `t` lies in the interior of the convex hull of the rows of E.
///
/// Minimizes the convex dual `f(θ) = ln Σᵢ exp(θ·(Eᵢ − t))` by Newton's method.
/// For interior targets the minimum is the Shannon entropy of the classical
/// MaxEnt distribution, which lies in `(0, ln n]`; outside the hull `f` is
/// unbounded below.
pub(crate) fn check_feasible<T: Real>(e: &ConfigMatrix<T>, t: &[T]) -> Result<()> {
    let (n, m) = (e.states(), e.constraints());
    let to64 = |x: T| x.to_f64_lossy();
    let rows: Vec<Vec<f64>> = (0..n).map(|i| e.row(i).iter().zip(t).map(|(&a, &b)| to64(a - b)).collect()).collect();
    let eval = |theta: &[f64]| -> (f64, Vec<f64>, Vec<Vec<f64>>, f64) {
        let s: Vec<f64> = rows.iter().map(|r| r.iter().zip(theta).map(|(a, b)| a * b).sum()).collect();
        let smax = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = s.iter().map(|v| (v - smax).exp()).collect();
        let z: f64 = w.iter().sum();
        let q: Vec<f64> = w.iter().map(|v| v / z).collect();
        let mean: Vec<f64> = (0..m).map(|j| (0..n).map(|i| q[i] * rows[i][j]).sum()).collect();
        let cov = (0..m)
            .map(|j| {
                (0..m).map(|k| (0..n).map(|i| q[i] * (rows[i][j] - mean[j]) * (rows[i][k] - mean[k])).sum()).collect()
            })
            .collect();
        let q_min = q.iter().copied().fold(f64::INFINITY, f64::min);
        (smax + z.ln(), mean, cov, q_min)
    };
    let scale = rows.iter().flatten().fold(0.0f64, |a, b| a.max(b.abs())).max(1e-300);
    let mut theta = vec![0.0; m];
    let (mut f, mut g, mut hess, mut q_min) = eval(&theta);
    for _ in 0..500 {
        if f < -1e-9 {
            break;
        }
        if g.iter().fold(0.0f64, |a, b| a.max(b.abs())) <= 1e-13 * scale {
            break;
        }
        let hm = Mat::from_rows(&hess)?;
        let dir = match hm.solve(&g) {
            Ok(s) if s.iter().all(|v| v.is_finite()) => s.into_iter().map(|v| -v).collect::<Vec<_>>(),
            _ => g.iter().map(|v| -v).collect(),
        };
        let slope: f64 = dir.iter().zip(&g).map(|(a, b)| a * b).sum();
        let dir = if slope < 0.0 { dir } else { g.iter().map(|v| -v).collect() };
        let slope: f64 = dir.iter().zip(&g).map(|(a, b)| a * b).sum();
        let mut step = 1.0;
        let mut moved = false;
        for _ in 0..80 {
            let trial: Vec<f64> = theta.iter().zip(&dir).map(|(a, b)| a + step * b).collect();
            let (ft, gt, ht, qt) = eval(&trial);
            if ft.is_finite() && ft <= f + 1e-4 * step * slope {
                moved = ft < f;
                theta = trial;
                f = ft;
                g = gt;
                hess = ht;
                q_min = qt;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    if f < -1e-9 {
        return Err(Error::Infeasible(format!("targets {t:?} lie outside the convex hull of the configurations")));
    }
    // near a face of the hull the dual minimizer runs off to infinity and the
    // classical MaxEnt weights of the face's complement vanish
    if g.iter().fold(0.0f64, |a, b| a.max(b.abs())) <= 1e-8 * scale && q_min > 1e-10 {
        return Ok(());
    }
    Err(Error::Infeasible(format!("targets {t:?} are not in the interior of the convex hull of the configurations")))
}
