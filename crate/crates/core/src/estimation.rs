//! Generalized Fisher information of a φ-exponential family against an arbitrary
//! reference distribution, the Cramér-Rao bound built on it, and its relation to
//! the Naudts and Amari metrics.

use crate::deform::{exp_of_log, ProbVec};
use crate::error::{Error, Result};
use crate::geometry::{metric_amari, metric_naudts, BasePoint, Chart, DualityReport, MetricMatrix};
use crate::linalg::Mat;
use crate::maxent::{eta_coords, ConfigMatrix, PhiExpFamily};
use crate::scalar::{lit, Real};

/// Estimator values `c_k` per state, an n × m matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimator<T> {
    c: Mat<T>,
}

impl<T: Real> Estimator<T> {
    pub fn new(rows: &[Vec<T>]) -> Result<Self> {
        let c = Mat::from_rows(rows)?;
        if !c.is_finite() {
            return Err(Error::domain("estimator has non-finite entries"));
        }
        Ok(Self { c })
    }

    /// `c = E`.
    pub fn from_config(e: &ConfigMatrix<T>) -> Self {
        Self { c: e.matrix().clone() }
    }

    pub fn states(&self) -> usize {
        self.c.rows()
    }

    pub fn components(&self) -> usize {
        self.c.cols()
    }

    pub fn value(&self, state: usize, k: usize) -> T {
        self.c[(state, k)]
    }
}

/// One entry of the Cramér-Rao inequality `Cov_P(c_k, c_l)/(f″)² ≥ 1/I_kl`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CRReport<T> {
    pub lhs: T,
    pub rhs: T,
    /// `lhs − rhs`.
    pub slack: T,
    pub equality: bool,
    /// `∂_{θ_l}⟨c_k⟩_{p(θ)}`.
    pub f_second: T,
}

/// Tolerance on |slack| for `CRReport::equality`.
pub const CR_EQUALITY_TOL: f64 = 1e-8;

/// `∂pᵢ/∂θⱼ = φ(pᵢ)(E_ij − ηⱼ)`.
pub fn dp_dtheta<T: Real>(fam: &PhiExpFamily<T>) -> Result<Mat<T>> {
    let eta = eta_coords(fam)?;
    let d = fam.deformation();
    let e = fam.config();
    let p = fam.pmf().probs();
    Ok(Mat::from_fn(e.states(), e.constraints(), |i, j| d.phi(p[i]) * (e.row(i)[j] - eta[j])))
}

fn check_reference<T: Real>(fam: &PhiExpFamily<T>, reference: &ProbVec<T>, what: &str) -> Result<()> {
    if reference.len() != fam.config().states() {
        return Err(Error::dim(format!(
            "reference distribution has {} states, family has {}",
            reference.len(),
            fam.config().states()
        )));
    }
    reference.require_interior(what)
}

fn fisher_from_jacobian<T: Real>(jac: &Mat<T>, reference: &ProbVec<T>, theta: &[T]) -> MetricMatrix<T> {
    let big_p = reference.probs();
    let m = jac.cols();
    let entries = Mat::from_fn(m, m, |k, l| (0..jac.rows()).map(|i| jac[(i, k)] * jac[(i, l)] / big_p[i]).sum());
    MetricMatrix::new(entries, Chart::Theta, BasePoint::Theta(theta.to_vec()))
}

/// `I_kl = Σᵢ (1/Pᵢ) ∂pᵢ/∂θ_k ∂pᵢ/∂θ_l`.
pub fn fisher_general<T: Real>(fam: &PhiExpFamily<T>, reference: &ProbVec<T>) -> Result<MetricMatrix<T>> {
    check_reference(fam, reference, "fisher_general")?;
    Ok(fisher_from_jacobian(&dp_dtheta(fam)?, reference, fam.theta()))
}

/// `max_k |Σᵢ ∂pᵢ/∂θ_k|`, the `P`-average of the score `(1/P) ∂p/∂θ_k`.
pub fn regularity_check<T: Real>(fam: &PhiExpFamily<T>, reference: &ProbVec<T>) -> Result<T> {
    check_reference(fam, reference, "regularity_check")?;
    let jac = dp_dtheta(fam)?;
    Ok((0..jac.cols()).map(|k| jac.column(k).into_iter().sum::<T>().abs()).fold(T::zero(), T::max))
}

/// Evaluates both sides of the Cramér-Rao inequality for the pair `(k, l)`.
///
/// `f″ = ∂_{θ_l}⟨c_k⟩_{p(θ)} = Σᵢ c_ik ∂pᵢ/∂θ_l` is taken from the analytic
/// Jacobian of the family.
pub fn cr_report<T: Real>(
    fam: &PhiExpFamily<T>,
    reference: &ProbVec<T>,
    est: &Estimator<T>,
    k: usize,
    l: usize,
) -> Result<CRReport<T>> {
    check_reference(fam, reference, "cr_report")?;
    let m = fam.config().constraints();
    if est.states() != fam.config().states() {
        return Err(Error::dim(format!("estimator has {} states, family has {}", est.states(), fam.config().states())));
    }
    if k >= est.components() || l >= m || l >= est.components() {
        return Err(Error::dim(format!("index pair ({k}, {l}) out of range")));
    }
    let gate = regularity_check(fam, reference)?;
    if gate > lit(1e-8) {
        return Err(Error::Evaluation(format!("regularity condition violated: {gate:e}")));
    }
    let jac = dp_dtheta(fam)?;
    let big_p = reference.probs();
    let n = big_p.len();
    let mean = |c: usize| -> T { (0..n).map(|i| big_p[i] * est.value(i, c)).sum() };
    let (mk, ml) = (mean(k), mean(l));
    let cov: T = (0..n).map(|i| big_p[i] * (est.value(i, k) - mk) * (est.value(i, l) - ml)).sum();
    let f_second: T = (0..n).map(|i| est.value(i, k) * jac[(i, l)]).sum();
    if f_second == T::zero() || !f_second.is_finite() {
        return Err(Error::ZeroDenominator(format!("∂²f/∂θ_{k}∂θ_{l} = {f_second:e}")));
    }
    let info = fisher_from_jacobian(&jac, reference, fam.theta()).get(k, l);
    if info == T::zero() {
        return Err(Error::ZeroDenominator(format!("I_{k}{l} = 0")));
    }
    let lhs = cov / (f_second * f_second);
    let rhs = info.recip();
    let slack = lhs - rhs;
    Ok(CRReport { lhs, rhs, slack, equality: slack.abs() < lit(CR_EQUALITY_TOL), f_second })
}

/// `Jᵀ g J` with J the rows 1..n of `dp_dtheta`.
fn pullback<T: Real>(g: &MetricMatrix<T>, jac: &Mat<T>, theta: &[T]) -> Result<MetricMatrix<T>> {
    let j = Mat::from_fn(jac.rows() - 1, jac.cols(), |i, k| jac[(i + 1, k)]);
    let entries = j.transpose().matmul(g.entries())?.matmul(&j)?;
    Ok(MetricMatrix::new(entries, Chart::Theta, BasePoint::Theta(theta.to_vec())))
}

/// Compares `I(P = escort)` with `h_φ · Jᵀ g^N J`.
pub fn naudts_identity_check<T: Real>(fam: &PhiExpFamily<T>) -> Result<DualityReport<T>> {
    let d = fam.deformation();
    let p = fam.pmf();
    p.require_interior("naudts_identity_check")?;
    let escort = d.escort(p)?;
    let lhs = fisher_general(fam, &escort)?;
    let h = d.h(p)?;
    let rhs = pullback(&metric_naudts(d, p)?, &dp_dtheta(fam)?, fam.theta())?.scale(h);
    DualityReport::from_matrices("I[P = escort]", "h_phi * J^T g^N J", &lhs, &rhs, fam.theta().to_vec(), Some(h))
}

/// Compares the Amari-type information `I^A = I(P = escort)/h_φ` with
/// `h_ξ · Jᵀ g^A_ξ J` for `ξ = exp ∘ log_φ`.
pub fn amari_identity_check<T: Real>(fam: &PhiExpFamily<T>) -> Result<DualityReport<T>> {
    let d = fam.deformation();
    let p = fam.pmf();
    p.require_interior("amari_identity_check")?;
    let xi = exp_of_log(d)?;
    let h_phi = d.h(p)?;
    let lhs = fisher_general(fam, &d.escort(p)?)?.scale(h_phi.recip());
    let h_xi = xi.h(p)?;
    let rhs = pullback(&metric_amari(&xi, p)?, &dp_dtheta(fam)?, fam.theta())?.scale(h_xi);
    DualityReport::from_matrices(
        "I[P = escort]/h_phi",
        "h_xi * J^T g^A_xi J",
        &lhs,
        &rhs,
        fam.theta().to_vec(),
        Some(h_xi),
    )
}

/// The Amari-side comparison with `P = escort_ξ(p)` taken literally, reported
/// for reference; it only holds when ξ is proportional to φ.
pub fn amari_identity_literal<T: Real>(fam: &PhiExpFamily<T>) -> Result<DualityReport<T>> {
    let d = fam.deformation();
    let p = fam.pmf();
    p.require_interior("amari_identity_literal")?;
    let xi = exp_of_log(d)?;
    let lhs = fisher_general(fam, &xi.escort(p)?)?;
    let h_xi = xi.h(p)?;
    let rhs = pullback(&metric_amari(&xi, p)?, &dp_dtheta(fam)?, fam.theta())?.scale(h_xi);
    DualityReport::from_matrices(
        "I[P = escort_xi]",
        "h_xi * J^T g^A_xi J",
        &lhs,
        &rhs,
        fam.theta().to_vec(),
        Some(h_xi),
    )
}
