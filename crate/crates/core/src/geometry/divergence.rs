use crate::deform::{Deformation, ProbVec};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::specfun::{integrate, Tolerance};

fn same_length<T: Real>(p: &ProbVec<T>, q: &ProbVec<T>) -> Result<()> {
    if p.len() == q.len() {
        Ok(())
    } else {
        Err(Error::dim(format!("distributions of length {} and {}", p.len(), q.len())))
    }
}

/// `D^N(p‖q) = Σⱼ ∫_{qⱼ}^{pⱼ} (log_φ(x) − log_φ(qⱼ)) dx`.
///
/// Each term is integrated directly; the integrand vanishes at `qⱼ`, so the
/// result keeps full relative precision when p is close to q.
pub fn divergence_naudts<T: Real>(d: &Deformation<T>, p: &ProbVec<T>, q: &ProbVec<T>) -> Result<T> {
    same_length(p, q)?;
    p.require_interior("divergence_naudts")?;
    q.require_interior("divergence_naudts")?;
    let tol = Tolerance::quadrature();
    let mut total = T::zero();
    for (&pj, &qj) in p.probs().iter().zip(q.probs()) {
        if pj == qj {
            continue;
        }
        let lq = d.log(qj)?;
        total += integrate(|x| Ok(d.log(x)? - lq), qj, pj, &tol)?;
    }
    Ok(total)
}

/// `D^A(p‖q) = (1/h_φ(p)) Σⱼ φ(pⱼ)(log_φ(pⱼ) − log_φ(qⱼ))`.
pub fn divergence_amari<T: Real>(d: &Deformation<T>, p: &ProbVec<T>, q: &ProbVec<T>) -> Result<T> {
    same_length(p, q)?;
    p.require_interior("divergence_amari")?;
    q.require_interior("divergence_amari")?;
    let h = d.h(p)?;
    let mut total = T::zero();
    for (&pj, &qj) in p.probs().iter().zip(q.probs()) {
        if pj != qj {
            total += d.phi(pj) * (d.log(pj)? - d.log(qj)?);
        }
    }
    Ok(total / h)
}

/// `I_f(p‖q) = Σᵢ qᵢ f(pᵢ/qᵢ)` for convex f with f(1) = 0.
pub fn divergence_csiszar<T: Real, F: Fn(T) -> T>(f: F, p: &ProbVec<T>, q: &ProbVec<T>) -> Result<T> {
    same_length(p, q)?;
    q.require_interior("divergence_csiszar")?;
    let v: T = p.probs().iter().zip(q.probs()).map(|(&pi, &qi)| qi * f(pi / qi)).sum();
    if v.is_nan() {
        return Err(Error::Evaluation("csiszar divergence is NaN".into()));
    }
    Ok(v)
}

/// `D_F(p‖q) = F(p) − F(q) − ⟨∇F(q), p − q⟩`.
pub fn divergence_bregman<T: Real, F, G>(f: F, grad: G, p: &ProbVec<T>, q: &ProbVec<T>) -> Result<T>
where
    F: Fn(&ProbVec<T>) -> Result<T>,
    G: Fn(&ProbVec<T>) -> Result<Vec<T>>,
{
    same_length(p, q)?;
    let g = grad(q)?;
    if g.len() != q.len() {
        return Err(Error::dim("gradient length"));
    }
    let inner: T = g.iter().zip(p.probs().iter().zip(q.probs())).map(|(&gi, (&pi, &qi))| gi * (pi - qi)).sum();
    Ok(f(p)? - f(q)? - inner)
}

/// The convex generator `F(p) = Σᵢ (∫₁^{pᵢ} log_φ + 1 − pᵢ)` with gradient
/// `log_φ(pᵢ) − 1`, whose Bregman divergence is `D^N`.
#[allow(clippy::type_complexity)]
pub fn naudts_bregman_generator<T: Real>(
    d: &Deformation<T>,
) -> (impl Fn(&ProbVec<T>) -> Result<T> + '_, impl Fn(&ProbVec<T>) -> Result<Vec<T>> + '_) {
    let f = move |p: &ProbVec<T>| -> Result<T> {
        let mut s = T::zero();
        for &pi in p.probs() {
            s += d.log_integral(T::one(), pi)? + T::one() - pi;
        }
        Ok(s)
    };
    let grad = move |p: &ProbVec<T>| -> Result<Vec<T>> {
        p.probs().iter().map(|&pi| Ok(d.log(pi)? - lit::<T>(1.0))).collect()
    };
    (f, grad)
}
