//! Closed-form deformations: Shannon, Tsallis, stretched exponentials and the
//! two-exponent (c,d) family.

use crate::deform::{working_grid, Deformation};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::specfun::{lambert_w, upper_gamma, Branch, Tolerance};

/// φ(x) = x: the ordinary logarithm and exponential.
pub fn identity<T: Real>() -> Deformation<T> {
    shannon_like("shannon", Vec::new())
}

fn shannon_like<T: Real>(name: &str, params: Vec<T>) -> Deformation<T> {
    Deformation::builder(name, |x| x)
        .params(params)
        .phi_prime(|_| T::one())
        .log(|x: T| x.ln())
        .exp(|y: T| y.exp())
        .antiderivative(|x: T| x * x.ln() - x, Some(T::zero()))
        .log_limits(-T::infinity(), T::infinity())
        .build()
        .expect("the identity deformation is valid")
}

/// φ(x) = x^q.
pub fn tsallis<T: Real>(q: T) -> Result<Deformation<T>> {
    if !q.is_finite() || q == T::one() {
        return Err(Error::domain(format!("tsallis needs a finite q != 1, got {q}")));
    }
    let k = T::one() - q;
    let two = lit::<T>(2.0);
    let limits = if k > T::zero() { (-T::one() / k, T::infinity()) } else { (-T::infinity(), -T::one() / k) };
    let (antiderivative, at_zero): (Box<dyn Fn(T) -> T + Send + Sync>, Option<T>) = if q == two {
        (Box::new(|x: T| x - x.ln()), None)
    } else {
        let e = two - q;
        (Box::new(move |x: T| (x.powf(e) / e - x) / k), if q < two { Some(T::zero()) } else { None })
    };
    Deformation::builder(format!("tsallis({q})"), move |x: T| x.powf(q))
        .params(vec![q])
        .phi_prime(move |x: T| q * x.powf(q - T::one()))
        .log(move |x: T| (k * x.ln()).exp_m1() / k)
        .exp(move |y: T| {
            let base = k * y;
            if base <= -T::one() {
                if k > T::zero() {
                    T::zero()
                } else {
                    T::nan()
                }
            } else {
                (base.ln_1p() / k).exp()
            }
        })
        .antiderivative(antiderivative, at_zero)
        .log_limits(limits.0, limits.1)
        .build()
}

/// Stretched exponentials: `log_φ(x) = sgn(ln x)|ln x|^{1/η}`, `exp_φ(y) = exp(sgn(y)|y|^η)`.
///
/// The generator `φ(x) = xη|ln x|^{1−1/η}` vanishes (η > 1) or diverges
/// (η < 1) at x = 1, so φ is not monotone and `log_φ` is not concave there.
pub fn stretched<T: Real>(eta: T) -> Result<Deformation<T>> {
    if !(eta > T::zero()) || !eta.is_finite() || eta == T::one() {
        return Err(Error::domain(format!("stretched needs eta > 0, eta != 1, got {eta}")));
    }
    let inv = T::one() / eta;
    let signed_pow = |v: T, e: T| v.signum() * v.abs().powf(e);
    let s = T::one() + inv;
    Deformation::builder(format!("stretched({eta})"), move |x: T| x * eta * x.ln().abs().powf(T::one() - inv))
        .params(vec![eta])
        .phi_prime(move |x: T| {
            let l = x.ln();
            l.abs().powf(-inv) * (eta * l.abs() + (eta - T::one()) * l.signum())
        })
        .log(move |x: T| signed_pow(x.ln(), inv))
        .exp(move |y: T| signed_pow(y, eta).exp())
        .antiderivative(
            move |x: T| {
                if x <= T::one() {
                    -upper_gamma(s, -x.ln(), &Tolerance::standard()).unwrap_or(T::nan())
                } else {
                    T::nan()
                }
            },
            Some(T::zero()),
        )
        .log_limits(-T::infinity(), T::infinity())
        .build()
}

/// Degeneracy branch of the (c,d) family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdBranch {
    Generic,
    /// d = 0, c ≠ 1: pure power generator.
    DZero,
    /// c = 1, d ≠ 1: stretched-exponential type.
    COne,
    /// (c,d) = (1,1).
    Shannon,
}

/// Parameters `(c, d, r)` of the (c,d)-logarithm
/// `log(x) = r − r x^{c−1}(1 − a ln x)^d` with `a = (1 − (1−c)r)/(dr)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdParams<T> {
    pub c: T,
    pub d: T,
    pub r: T,
    /// `A = cdr/(1 − (1−c)r)`; `None` off the generic branch.
    pub big_a: Option<T>,
    /// `B = z e^z` with `z = (1−c)r/(1 − (1−c)r)`; `None` off the generic branch.
    pub big_b: Option<T>,
    pub branch: CdBranch,
    /// Lambert branch of the closed-form exponential, when one round-trips.
    pub lambert: Option<Branch>,
}

/// Scale parameter rule: `1/(1 − c + cd)` for d ≥ 0 and `e^{−d}/(1 − c)` for d < 0.
pub fn auto_r<T: Real>(c: T, d: T) -> Result<T> {
    let r = if d >= T::zero() {
        let den = T::one() - c + c * d;
        if den == T::zero() {
            return Err(Error::ZeroDenominator(format!("1 - c + cd = 0 at (c,d) = ({c}, {d})")));
        }
        T::one() / den
    } else {
        if c == T::one() {
            return Err(Error::ZeroDenominator("1 - c = 0 with d < 0".into()));
        }
        (-d).exp() / (T::one() - c)
    };
    if !(r > T::zero()) || !r.is_finite() {
        return Err(Error::domain(format!("scale parameter r = {r} is not positive at (c,d) = ({c}, {d})")));
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Bound {
    Open,
    Bracket,
    Pole,
}

impl<T: Real> CdParams<T> {
    /// Validates `(c, d)` and derives the constants; `r` defaults to [`auto_r`].
    pub fn new(c: T, d: T, r: Option<T>) -> Result<Self> {
        if !(c > T::zero() && c <= lit(1.5)) {
            return Err(Error::domain(format!("c = {c} outside (0, 1.5]")));
        }
        if !(d >= lit(-2.0) && d <= lit(3.0)) {
            return Err(Error::domain(format!("d = {d} outside [-2, 3]")));
        }
        if c > T::one() {
            log::warn!("(c,d) = ({c}, {d}): c > 1 is outside the usual admissible region");
        }
        let r = match r {
            Some(r) if r > T::zero() && r.is_finite() => r,
            Some(r) => return Err(Error::domain(format!("r = {r} must be positive"))),
            None => auto_r(c, d)?,
        };
        let one = T::one();
        let branch = match (c == one, d == T::zero(), d == one) {
            (true, _, true) => CdBranch::Shannon,
            (true, true, _) => {
                return Err(Error::DegenerateParameters("(c,d) = (1,0) is singular".into()));
            }
            (true, false, false) => CdBranch::COne,
            (false, true, _) => CdBranch::DZero,
            (false, false, _) => CdBranch::Generic,
        };
        let mut params = Self { c, d, r, big_a: None, big_b: None, branch, lambert: None };
        if branch == CdBranch::Generic {
            let den = one - (one - c) * r;
            if den == T::zero() {
                return Err(Error::DegenerateParameters(format!("1 - (1-c) r = 0 at (c,d,r) = ({c}, {d}, {r})")));
            }
            let z = (one - c) * r / den;
            params.big_a = Some(c * d * r / den);
            params.big_b = Some(z * z.exp());
            params.lambert = params.select_lambert_branch();
        }
        Ok(params)
    }

    fn select_lambert_branch(&self) -> Option<Branch> {
        let b = self.big_b?;
        let candidates: &[Branch] =
            if b >= T::zero() { &[Branch::Principal] } else { &[Branch::Principal, Branch::Lower] };
        let probe = lit::<T>(0.5);
        let y = self.log(probe);
        candidates
            .iter()
            .copied()
            .find(|&br| lambert_exp(self, br, y).is_ok_and(|x| ((x - probe) / probe).abs() < lit(1e-8)))
    }

    /// Coefficient `a` of the bracket `1 − a ln x`; `None` where it is undefined.
    pub fn bracket_coef(&self) -> Option<T> {
        match self.branch {
            CdBranch::Generic | CdBranch::COne => Some((T::one() - (T::one() - self.c) * self.r) / (self.d * self.r)),
            _ => None,
        }
    }

    /// `log_(c,d)(x)` from the closed form.
    pub fn log(&self, x: T) -> T {
        let (c, d, r) = (self.c, self.d, self.r);
        let l = x.ln();
        match self.branch {
            CdBranch::Shannon => l,
            CdBranch::DZero => -r * ((c - T::one()) * l).exp_m1(),
            CdBranch::Generic | CdBranch::COne => {
                let a = self.bracket_coef().unwrap();
                let bracket = T::one() - a * l;
                if !(bracket > T::zero()) {
                    return T::nan();
                }
                -r * ((c - T::one()) * l + d * (-a * l).ln_1p()).exp_m1()
            }
        }
    }

    /// `x φ′(x)/φ(x)`.
    pub fn elasticity(&self, x: T) -> T {
        let (c, d) = (self.c, self.d);
        let two = lit::<T>(2.0);
        match self.branch {
            CdBranch::Shannon => T::one(),
            CdBranch::DZero => two - c,
            CdBranch::Generic | CdBranch::COne => {
                let a = self.bracket_coef().unwrap();
                let b = T::one() - a * x.ln();
                let pole = (T::one() - c) * b + a * d;
                two - c - (T::one() - d) * a / b + (T::one() - c) * a / pole
            }
        }
    }

    /// φ = 1/log′ from the differentiated closed form.
    pub fn phi(&self, x: T) -> T {
        let (c, d, r) = (self.c, self.d, self.r);
        let two = lit::<T>(2.0);
        match self.branch {
            CdBranch::Shannon => x,
            CdBranch::DZero => x.powf(two - c) / (r * (T::one() - c)),
            CdBranch::Generic | CdBranch::COne => {
                let a = self.bracket_coef().unwrap();
                let b = T::one() - a * x.ln();
                if !(b > T::zero()) {
                    return T::nan();
                }
                x.powf(two - c) * b.powf(T::one() - d) / (r * ((T::one() - c) * b + a * d))
            }
        }
    }

    pub fn phi_prime(&self, x: T) -> T {
        match self.branch {
            CdBranch::Shannon => T::one(),
            _ => self.phi(x) * self.elasticity(x) / x,
        }
    }

    /// The generator as printed in closed form,
    /// `x/(r − log x) · ((−cr + r − 1) ln x + dr)/((c−1)((c−1)r + 1) ln x + d)`.
    pub fn phi_printed(&self, x: T) -> T {
        let (c, d, r) = (self.c, self.d, self.r);
        let l = x.ln();
        let one = T::one();
        let num = (-c * r + r - one) * l + d * r;
        let den = (c - one) * ((c - one) * r + one) * l + d;
        x / (r - self.log(x)) * (num / den)
    }

    /// Largest relative difference between [`phi_printed`](Self::phi_printed)
    /// and [`phi`](Self::phi) on the working grid inside the domain.
    pub fn phi_printed_discrepancy(&self) -> T {
        let (lo, hi) = self.domain().0;
        working_grid::<T>()
            .into_iter()
            .filter(|&x| x > lo && x < hi)
            .map(|x| {
                let exact = self.phi(x);
                let printed = self.phi_printed(x);
                if printed.is_nan() {
                    T::infinity()
                } else {
                    ((printed - exact) / exact).abs()
                }
            })
            .fold(T::zero(), |m, v| if v > m { v } else { m })
    }

    /// Domain `(lo, hi)` where the bracket `1 − a ln x` and the denominator of φ
    /// stay positive, together with which condition binds at each end.
    fn domain(&self) -> ((T, T), (Bound, Bound)) {
        let Some(a) = self.bracket_coef() else {
            return ((T::zero(), T::infinity()), (Bound::Open, Bound::Open));
        };
        let one = T::one();
        let (mut l_lo, mut l_hi) = (-T::infinity(), T::infinity());
        let (mut b_lo, mut b_hi) = (Bound::Open, Bound::Open);
        // each condition reads alpha − beta·ln x > 0 with alpha > 0
        let conditions = [(one, a, Bound::Bracket), (one / self.r, (one - self.c) * a, Bound::Pole)];
        for (alpha, beta, kind) in conditions {
            if beta > T::zero() && alpha / beta < l_hi {
                l_hi = alpha / beta;
                b_hi = kind;
            } else if beta < T::zero() && alpha / beta > l_lo {
                l_lo = alpha / beta;
                b_lo = kind;
            }
        }
        ((l_lo.exp(), l_hi.exp()), (b_lo, b_hi))
    }

    /// `exp_(c,d)` via the Lambert-W closed form, or the branch-specific closed
    /// forms of the degenerate cases.
    pub fn exp_closed(&self, y: T) -> Result<T> {
        let (c, d, r) = (self.c, self.d, self.r);
        match self.branch {
            CdBranch::Shannon => Ok(y.exp()),
            CdBranch::DZero => {
                let base = T::one() - y / r;
                if base > T::zero() {
                    Ok(base.powf(T::one() / (c - T::one())))
                } else {
                    Err(Error::Range(format!("exp_(c,d)({y:e}) needs y < r = {r:e}")))
                }
            }
            CdBranch::COne => {
                let base = T::one() - y / r;
                if base > T::zero() {
                    Ok((d * r * (T::one() - base.powf(T::one() / d))).exp())
                } else {
                    Err(Error::Range(format!("exp_(c,d)({y:e}) needs y < r = {r:e}")))
                }
            }
            CdBranch::Generic => {
                let branch = self
                    .lambert
                    .ok_or_else(|| Error::Branch("no Lambert branch round-trips for these parameters".into()))?;
                lambert_exp(self, branch, y)
            }
        }
    }
}

fn lambert_exp<T: Real>(p: &CdParams<T>, branch: Branch, y: T) -> Result<T> {
    let b = p.big_b.ok_or_else(|| Error::Branch("Lambert form needs the generic branch".into()))?;
    let base = T::one() - y / p.r;
    if !(base > T::zero()) {
        return Err(Error::Range(format!("exp_(c,d)({y:e}) needs y < r = {:e}", p.r)));
    }
    let tol = Tolerance::standard();
    let w = lambert_w(branch, b * base.powf(T::one() / p.d), &tol)?;
    let w0 = lambert_w(branch, b, &tol)?;
    let v = (-(p.d / (T::one() - p.c)) * (w - w0)).exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Evaluation(format!("exp_(c,d)({y:e}) overflows")))
    }
}

/// Lambert-W fast path for `exp_(c,d)`; see [`CdParams::exp_closed`].
pub fn cd_exp_closed<T: Real>(params: &CdParams<T>, x: T) -> Result<T> {
    params.exp_closed(x)
}

/// The (c,d) deformation with `r` defaulting to [`auto_r`].
pub fn cd_family<T: Real>(c: T, d: T, r: Option<T>) -> Result<Deformation<T>> {
    cd_from_params(CdParams::new(c, d, r)?)
}

pub fn cd_from_params<T: Real>(p: CdParams<T>) -> Result<Deformation<T>> {
    let name = format!("cd({}, {})", p.c, p.d);
    let params = vec![p.c, p.d, p.r];
    if p.branch == CdBranch::Shannon {
        return Ok(shannon_like(&name, params));
    }
    let ((lo, hi), (bound_lo, bound_hi)) = p.domain();
    if lo >= lit(1e-9) {
        let msg = format!("{name}: domain starts at x = {lo:e}, inside the working range [1e-9, 1]");
        return Err(if bound_lo == Bound::Bracket {
            Error::BracketNonpositive(msg)
        } else {
            Error::InvalidDeformation(msg)
        });
    }
    let lower = match bound_lo {
        Bound::Pole => p.log(lo),
        _ => -T::infinity(),
    };
    let upper = match bound_hi {
        Bound::Pole => p.log(hi),
        _ => p.r,
    };
    if !(lower < T::zero() && upper > T::zero()) {
        return Err(Error::InvalidDeformation(format!("{name}: log limits ({lower:e}, {upper:e}) do not bracket 0")));
    }
    let mut builder = Deformation::builder(name, move |x| p.phi(x))
        .params(params)
        .phi_prime(move |x| p.phi_prime(x))
        .log(move |x| p.log(x))
        .exp(move |y| p.exp_closed(y).unwrap_or(T::nan()))
        .domain(lo, hi)
        .log_limits(lower, upper)
        .check_tol(lit(1e-7));
    if p.branch == CdBranch::DZero {
        let (c, r) = (p.c, p.r);
        builder = builder.antiderivative(move |x: T| r * x - r * x.powf(c) / c, Some(T::zero()));
    }
    if p.branch == CdBranch::Generic {
        if p.lambert.is_none() {
            builder = builder.note("no Lambert branch round-trips; exp uses monotone inversion");
        }
        let gap = p.phi_printed_discrepancy();
        builder = builder.note(format!("printed generator differs from 1/log' by at most {gap:e} (relative)"));
    }
    builder.build()
}

/// The reference set used by the property sweeps: Shannon, Tsallis q ∈ {0.5, 2},
/// stretched η ∈ {0.5, 2} and (c,d) ∈ {(1,1), (1,1/2), (1/2,0), (0.7,0.4), (0.8,−0.5)}
/// with the automatic scale.
pub fn builtin_families<T: Real>() -> Result<Vec<Deformation<T>>> {
    let mut out = vec![identity(), tsallis(lit(0.5))?, tsallis(lit(2.0))?, stretched(lit(0.5))?, stretched(lit(2.0))?];
    for (c, d) in [(1.0, 1.0), (1.0, 0.5), (0.5, 0.0), (0.7, 0.4), (0.8, -0.5)] {
        out.push(cd_family(lit(c), lit(d), None)?);
    }
    Ok(out)
}
