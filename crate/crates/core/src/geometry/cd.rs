use crate::deform::ProbVec;
use crate::error::{Error, Result};
use crate::families::{cd_from_params, CdBranch, CdParams};
use crate::linalg::Mat;
use crate::scalar::{lit, Real};
use crate::specfun::{upper_gamma, Tolerance};

use super::entropy::entropy_naudts;
use super::metric::{metric_amari, metric_naudts};
use super::MetricMatrix;

/// `S_(c,d)(p) = r A^{−d} e^A Σᵢ Γ(1+d, A − c ln pᵢ) − rc` on the generic branch.
pub fn cd_entropy_closed<T: Real>(params: &CdParams<T>, p: &ProbVec<T>) -> Result<T> {
    let (Some(a), CdBranch::Generic) = (params.big_a, params.branch) else {
        return Err(Error::Branch(format!("closed (c,d)-entropy needs the generic branch, got {:?}", params.branch)));
    };
    if !(a > T::zero()) {
        return Err(Error::domain(format!("A = {a:e} must be positive")));
    }
    p.require_interior("cd_entropy_closed")?;
    let (c, d, r) = (params.c, params.d, params.r);
    let tol = Tolerance::standard();
    let mut sum = T::zero();
    for &pi in p.probs() {
        let arg = a - c * pi.ln();
        if !(arg > T::zero()) {
            return Err(Error::domain(format!("A − c ln p = {arg:e} at p = {pi:e}")));
        }
        sum += upper_gamma(T::one() + d, arg, &tol)?;
    }
    Ok(r * (a.ln() * -d + a).exp() * sum - r * c)
}

/// Closed (c,d)-entropy next to the quadrature Naudts entropy of the same family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdEntropyComparison<T> {
    pub closed: T,
    pub quadrature: T,
    /// `closed/quadrature` at the uniform distribution of the same length.
    pub scale: T,
    /// `|closed − scale·quadrature| / |closed|`.
    pub aligned_residual: T,
}

/// Aligns the closed form to `entropy_naudts` with one multiplicative constant
/// fixed at the uniform distribution; analytically the constant is `c`.
pub fn cd_entropy_compare<T: Real>(params: &CdParams<T>, p: &ProbVec<T>) -> Result<CdEntropyComparison<T>> {
    let d = cd_from_params(*params)?;
    let u = ProbVec::uniform(p.len())?;
    let scale = cd_entropy_closed(params, &u)? / entropy_naudts(&d, &u)?;
    let closed = cd_entropy_closed(params, p)?;
    let quadrature = entropy_naudts(&d, p)?;
    Ok(CdEntropyComparison {
        closed,
        quadrature,
        scale,
        aligned_residual: ((closed - scale * quadrature) / closed).abs(),
    })
}

/// The printed (c,d) metrics and their agreement with the generic-φ metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct CdMetrics<T> {
    /// Printed Naudts form with `ln p₀` in the p₀ term.
    pub naudts: MetricMatrix<T>,
    /// Printed Amari form divided by `h_φ(p)`.
    pub amari: MetricMatrix<T>,
    /// Printed Amari form as printed, without `1/h_φ`.
    pub amari_printed: MetricMatrix<T>,
    pub naudts_residual: T,
    pub amari_residual: T,
    /// Residual of the Naudts form read literally, with `ln pᵢ` in the p₀ term.
    pub naudts_literal_residual: T,
    /// `‖amari_printed − h_φ g^A‖/‖h_φ g^A‖`.
    pub amari_printed_residual: T,
}

/// `((c−1)k ln x + d)/(dr − k ln x)` with `k = (c−1)r + 1`, where `ln x` in the
/// numerator and denominator may come from different points.
fn naudts_ratio<T: Real>(params: &CdParams<T>, l_num: T, l_den: T) -> T {
    let (c, d, r) = (params.c, params.d, params.r);
    let k = (c - T::one()) * r + T::one();
    ((c - T::one()) * k * l_num + d) / (d * r - k * l_den)
}

fn naudts_weight<T: Real>(params: &CdParams<T>, x: T, l_num: T) -> T {
    let ratio = if params.branch == CdBranch::DZero {
        // the printed ratio equals 1 − c at d = 0, and is 0/0 when also (1−c)r = 1
        T::one() - params.c
    } else {
        naudts_ratio(params, l_num, x.ln())
    };
    (params.r - params.log(x)) / x * ratio
}

fn amari_weight<T: Real>(params: &CdParams<T>, x: T) -> T {
    let (c, d, r) = (params.c, params.d, params.r);
    let one = T::one();
    let two = lit::<T>(2.0);
    if params.branch == CdBranch::DZero {
        return (two - c) / x;
    }
    let k = (c - one) * r + one;
    let l = x.ln();
    let t1 = (d - one) * k / (k * l - d * r);
    let t2 = ((c - one) * (c - one) * r + c - one) / ((c - one) * d * r - c * d * r + (c - one) * k * l + d + d * r);
    (two - c - t1 - t2) / x
}

fn check_finite<T: Real>(w: &[T], what: &str) -> Result<()> {
    if w.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::DegenerateParameters(format!("printed {what} metric is degenerate at these parameters")))
    }
}

/// Evaluates the printed (c,d) metric expressions and cross-checks them against
/// `metric_naudts` / `metric_amari` of `cd_from_params(params)`.
///
/// On the d = 0 branch the Amari side uses the printed simplification
/// `(2−q)/pᵢ δᵢⱼ + (2−q)/p₀`.
pub fn cd_metrics_closed<T: Real>(params: &CdParams<T>, p: &ProbVec<T>) -> Result<CdMetrics<T>> {
    p.require_interior("cd_metrics_closed")?;
    let deformation = cd_from_params(*params)?;
    let probs = p.probs();
    let nw: Vec<T> = probs.iter().map(|&x| naudts_weight(params, x, x.ln())).collect();
    check_finite(&nw, "Naudts")?;
    let aw: Vec<T> = probs.iter().map(|&x| amari_weight(params, x)).collect();
    check_finite(&aw, "Amari")?;
    let h = deformation.h(p)?;

    let naudts = MetricMatrix::from_weights(&nw, p);
    let amari_printed = MetricMatrix::from_weights(&aw, p);
    let amari = amari_printed.scale(h.recip());

    let g_n = metric_naudts(&deformation, p)?;
    let g_a = metric_amari(&deformation, p)?;

    let m = probs.len() - 1;
    let p0 = probs[0];
    let literal = Mat::from_fn(m, m, |i, j| {
        let xi = probs[i + 1];
        let diag = if i == j { nw[i + 1] } else { T::zero() };
        diag + naudts_weight(params, p0, xi.ln())
    });
    let naudts_literal_residual = literal.sub(g_n.entries())?.max_abs() / g_n.entries().max_abs();

    Ok(CdMetrics {
        naudts_residual: naudts.rel_diff(&g_n)?,
        amari_residual: amari.rel_diff(&g_a)?,
        naudts_literal_residual,
        amari_printed_residual: amari_printed.rel_diff(&g_a.scale(h))?,
        naudts,
        amari,
        amari_printed,
    })
}
