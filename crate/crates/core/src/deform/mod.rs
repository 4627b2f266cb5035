//! Deformations: a positive increasing generator φ together with the deformed
//! logarithm `log_φ(x) = ∫₁ˣ dy/φ(y)`, its inverse `exp_φ`, and the escort map.

mod dual;
mod prob;

use std::fmt;
use std::sync::Arc;

pub use dual::{chi_dual, exp_of_log, ts_dual};
pub use prob::ProbVec;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::specfun::{self, Tolerance};

/// A real function stored inside a deformation.
pub type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Log-spaced grid over the working range `[1e-9, 1e3]`; no node sits on 1.
pub fn working_grid<T: Real>() -> Vec<T> {
    (-72..24).map(|k| lit::<T>(10f64.powf((k as f64 + 0.5) / 8.0))).collect()
}

#[derive(Clone)]
pub struct Deformation<T: Real> {
    inner: Arc<Inner<T>>,
}

struct Inner<T: Real> {
    name: String,
    params: Vec<T>,
    phi: ScalarFn<T>,
    phi_prime: Option<ScalarFn<T>>,
    log_closed: Option<ScalarFn<T>>,
    exp_closed: Option<ScalarFn<T>>,
    antiderivative: Option<ScalarFn<T>>,
    antiderivative_at_zero: Option<T>,
    domain: (T, T),
    limits: (T, T),
    // (x, log_φ(x)) ascending in both coordinates
    anchors: Vec<(T, T)>,
    increasing_phi: bool,
    notes: Vec<String>,
}

impl<T: Real> fmt::Debug for Deformation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Deformation")
            .field("name", &self.inner.name)
            .field("params", &self.inner.params)
            .field("domain", &self.inner.domain)
            .field("log_limits", &self.inner.limits)
            .finish()
    }
}

/// Builder for [`Deformation`]; `build` validates the generator on the working grid.
pub struct DeformationBuilder<T: Real> {
    name: String,
    params: Vec<T>,
    phi: ScalarFn<T>,
    phi_prime: Option<ScalarFn<T>>,
    log_closed: Option<ScalarFn<T>>,
    exp_closed: Option<ScalarFn<T>>,
    antiderivative: Option<ScalarFn<T>>,
    antiderivative_at_zero: Option<T>,
    domain: (T, T),
    limits: Option<(T, T)>,
    check_tol: T,
    notes: Vec<String>,
}

impl<T: Real> DeformationBuilder<T> {
    pub fn new(name: impl Into<String>, phi: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            params: Vec::new(),
            phi: Arc::new(phi),
            phi_prime: None,
            log_closed: None,
            exp_closed: None,
            antiderivative: None,
            antiderivative_at_zero: None,
            domain: (T::zero(), T::infinity()),
            limits: None,
            check_tol: lit(1e-6),
            notes: Vec::new(),
        }
    }

    pub fn params(mut self, params: Vec<T>) -> Self {
        self.params = params;
        self
    }

    pub fn phi_prime(mut self, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.phi_prime = Some(Arc::new(f));
        self
    }

    pub fn log(mut self, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.log_closed = Some(Arc::new(f));
        self
    }

    pub fn exp(mut self, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.exp_closed = Some(Arc::new(f));
        self
    }

    /// An antiderivative `F` of `log_φ` and, when finite, its limit `F(0⁺)`.
    /// `F` may return NaN where no closed form is available.
    pub fn antiderivative(mut self, f: impl Fn(T) -> T + Send + Sync + 'static, at_zero: Option<T>) -> Self {
        self.antiderivative = Some(Arc::new(f));
        self.antiderivative_at_zero = at_zero;
        self
    }

    /// Open interval of admissible arguments; defaults to (0, ∞).
    pub fn domain(mut self, lo: T, hi: T) -> Self {
        self.domain = (lo, hi);
        self
    }

    /// Infimum and supremum of `log_φ`; computed by quadrature when not given.
    pub fn log_limits(mut self, lower: T, upper: T) -> Self {
        self.limits = Some((lower, upper));
        self
    }

    /// Relative tolerance of the check `log_φ(b) − log_φ(a) = ∫ₐᵇ 1/φ` between
    /// adjacent nodes of the working grid, applied to closed-form logs.
    pub fn check_tol(mut self, tol: T) -> Self {
        self.check_tol = tol;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn build(self) -> Result<Deformation<T>> {
        let (lo, hi) = self.domain;
        if !(lo >= T::zero() && hi > lo && lo < T::one() && hi > T::one()) {
            return Err(Error::InvalidDeformation(format!(
                "{}: domain ({lo:e}, {hi:e}) must be inside (0, ∞) and contain 1",
                self.name
            )));
        }
        let mut inner = Inner {
            name: self.name,
            params: self.params,
            phi: self.phi,
            phi_prime: self.phi_prime,
            log_closed: self.log_closed,
            exp_closed: self.exp_closed,
            antiderivative: self.antiderivative,
            antiderivative_at_zero: self.antiderivative_at_zero,
            domain: self.domain,
            limits: (-T::infinity(), T::infinity()),
            anchors: Vec::new(),
            increasing_phi: true,
            notes: self.notes,
        };
        inner.validate(self.check_tol)?;
        inner.limits = match self.limits {
            Some(l) => l,
            None => inner.compute_limits(),
        };
        inner.anchors = inner.compute_anchors();
        if !inner.increasing_phi {
            log::warn!("{}: generator is not increasing on the working grid; log_φ is not concave", inner.name);
        }
        Ok(Deformation { inner: Arc::new(inner) })
    }
}

fn inside<T: Real>(x: T, (lo, hi): (T, T)) -> bool {
    // keep finite-difference stencils inside the domain
    let margin = lit::<T>(1e-3);
    x > lo * (T::one() + margin) && x < hi * (T::one() - margin)
}

impl<T: Real> Inner<T> {
    fn phi_prime_at(&self, x: T) -> T {
        match &self.phi_prime {
            Some(f) => f(x),
            None => specfun::derivative(|t| Ok((self.phi)(t)), x).unwrap_or(T::nan()),
        }
    }

    fn validate(&mut self, check_tol: T) -> Result<()> {
        let name = self.name.clone();
        let invalid = |msg: String| Error::InvalidDeformation(format!("{name}: {msg}"));
        let grid: Vec<T> = working_grid::<T>().into_iter().filter(|&x| inside(x, self.domain)).collect();
        for &x in &grid {
            let v = (self.phi)(x);
            if !(v > T::zero() && v.is_finite()) {
                return Err(invalid(format!("φ({x:e}) = {v:e} is not positive")));
            }
            let dv = self.phi_prime_at(x);
            if !(dv > T::zero()) {
                self.increasing_phi = false;
            }
        }
        if let Some(log) = self.log_closed.clone() {
            let at_one = log(T::one());
            if at_one.abs() > T::epsilon() * lit(16.0) {
                return Err(invalid(format!("log_φ(1) = {at_one:e}, expected 0")));
            }
            let mut nodes = grid.clone();
            let split = nodes.partition_point(|&x| x < T::one());
            let phi_one = (self.phi)(T::one());
            let regular_at_one = phi_one > T::zero() && phi_one.is_finite();
            if regular_at_one {
                nodes.insert(split, T::one());
            }
            let tol = Tolerance::quadrature().with_max_iter(400);
            for pair in nodes.windows(2) {
                let (a, b) = (pair[0], pair[1]);
                if a < T::one() && b > T::one() {
                    // φ vanishes or diverges at 1; only the monotonicity of the log is checked there
                    if !(log(b) > log(a)) {
                        return Err(invalid(format!("log_φ is not increasing on [{a:e}, {b:e}]")));
                    }
                    continue;
                }
                let (la, lb) = (log(a), log(b));
                if !(lb > la) {
                    return Err(invalid(format!("log_φ is not increasing on [{a:e}, {b:e}]")));
                }
                let quad = specfun::integrate(|t| self.inv_phi(t), a, b, &tol)
                    .map_err(|e| invalid(format!("∫ 1/φ over [{a:e}, {b:e}] failed: {e}")))?;
                let rel = ((lb - la - quad) / quad).abs();
                // the endpoint values themselves carry rounding error
                let rounding = lit::<T>(16.0) * T::epsilon() * (la.abs() + lb.abs()) / quad.abs();
                if !(rel <= check_tol + rounding) {
                    return Err(invalid(format!(
                        "log_φ increases by {:e} on [{a:e}, {b:e}] but ∫ 1/φ = {quad:e} (relative {rel:e})",
                        lb - la
                    )));
                }
            }
        }
        Ok(())
    }

    fn inv_phi(&self, x: T) -> Result<T> {
        let v = (self.phi)(x);
        if v > T::zero() {
            Ok(T::one() / v)
        } else {
            Err(Error::Evaluation(format!("{}: φ({x:e}) = {v:e}", self.name)))
        }
    }

    fn compute_limits(&self) -> (T, T) {
        let tol = Tolerance::quadrature().with_max_iter(800);
        let (lo, hi) = self.domain;
        let lower = if lo > T::zero() {
            specfun::integrate(|x| self.inv_phi(x), T::one(), lo, &tol)
        } else {
            specfun::integrate_from_zero(|x| self.inv_phi(x), T::one(), &tol).map(|v| -v)
        };
        let upper = specfun::integrate(|x| self.inv_phi(x), T::one(), hi, &tol);
        (lower.unwrap_or(-T::infinity()), upper.unwrap_or(T::infinity()))
    }

    fn compute_anchors(&self) -> Vec<(T, T)> {
        let xs: Vec<T> = (-64..=64)
            .map(|k| lit::<T>(10f64.powf(k as f64 / 4.0)))
            .filter(|&x| x > self.domain.0 && x < self.domain.1 && x.is_normal())
            .collect();
        let one = xs.iter().position(|&x| x == T::one()).expect("1 is on the anchor grid");
        let tol = Tolerance::quadrature();
        let mut up = vec![(T::one(), T::zero())];
        for &x in &xs[one + 1..] {
            let (px, pl) = *up.last().unwrap();
            let next = match &self.log_closed {
                Some(log) => Ok(log(x)),
                None => specfun::integrate(|t| self.inv_phi(t), px, x, &tol).map(|v| pl + v),
            };
            match next {
                Ok(l) if l.is_finite() && l > pl => up.push((x, l)),
                _ => break,
            }
        }
        let mut down = Vec::new();
        let mut prev = (T::one(), T::zero());
        for &x in xs[..one].iter().rev() {
            let next = match &self.log_closed {
                Some(log) => Ok(log(x)),
                None => specfun::integrate(|t| self.inv_phi(t), prev.0, x, &tol).map(|v| prev.1 + v),
            };
            match next {
                Ok(l) if l.is_finite() && l < prev.1 => {
                    prev = (x, l);
                    down.push(prev);
                }
                _ => break,
            }
        }
        down.reverse();
        down.extend(up);
        down
    }

    fn log(&self, x: T) -> Result<T> {
        let (lo, hi) = self.domain;
        if !(x > T::zero()) {
            return Err(Error::domain(format!("{}: log_φ needs x > 0, got {x:e}", self.name)));
        }
        if x <= lo || x > hi {
            return Err(Error::domain(format!(
                "{}: log_φ argument {x:e} outside the domain ({lo:e}, {hi:e})",
                self.name
            )));
        }
        if x == T::one() {
            return Ok(T::zero());
        }
        let v = match &self.log_closed {
            Some(log) => log(x),
            None => {
                let lx = x.ln();
                let (ax, al) = self
                    .anchors
                    .iter()
                    .copied()
                    .min_by(|a, b| (a.0.ln() - lx).abs().partial_cmp(&(b.0.ln() - lx).abs()).unwrap())
                    .expect("anchors contain 1");
                al + specfun::integrate(|t| self.inv_phi(t), ax, x, &Tolerance::quadrature())?
            }
        };
        if v.is_nan() {
            return Err(Error::Evaluation(format!("{}: log_φ({x:e}) is NaN", self.name)));
        }
        Ok(v)
    }

    fn exp(&self, y: T) -> Result<T> {
        if y.is_nan() {
            return Err(Error::domain("exp_φ argument is NaN"));
        }
        let (lower, upper) = self.limits;
        if y <= lower {
            return Ok(T::zero());
        }
        if y >= upper {
            return Err(Error::Range(format!(
                "{}: exp_φ({y:e}) is beyond the upper limit {upper:e} of log_φ",
                self.name
            )));
        }
        if y == T::zero() {
            return Ok(T::one());
        }
        if let Some(exp) = &self.exp_closed {
            let v = exp(y);
            if v.is_finite() && v >= T::zero() {
                return Ok(v);
            }
            log::debug!("{}: closed exp_φ failed at {y:e}, inverting numerically", self.name);
        }
        self.invert(y)
    }

    fn invert(&self, y: T) -> Result<T> {
        let (dlo, dhi) = self.domain;
        let idx = self.anchors.partition_point(|a| a.1 <= y);
        let lo = if idx > 0 {
            self.anchors[idx - 1].0
        } else {
            let mut x = self.anchors[0].0;
            loop {
                x = if dlo > T::zero() { (x + dlo) * lit(0.5) } else { x * lit(1.0 / 16.0) };
                if !(x > dlo) || x == T::zero() {
                    // below the smallest representable argument
                    return Ok(T::zero());
                }
                if self.log(x)? <= y {
                    break x;
                }
            }
        };
        let hi = if idx < self.anchors.len() {
            self.anchors[idx].0
        } else {
            let mut x = self.anchors[self.anchors.len() - 1].0;
            let mut steps = 0;
            loop {
                x = if dhi.is_finite() { (x + dhi) * lit(0.5) } else { x * lit(16.0) };
                steps += 1;
                if !x.is_finite() || steps > 200 {
                    return Err(Error::Range(format!("{}: exp_φ({y:e}) overflows", self.name)));
                }
                if self.log(x)? > y {
                    break x;
                }
            }
        };
        let tol = Tolerance { abs_tol: T::min_positive_value(), rel_tol: T::epsilon() * lit(64.0), max_iter: 200 };
        specfun::find_root_newton(|x| Ok(self.log(x)? - y), |x| self.inv_phi(x), lo, hi, &tol)
    }
}

impl<T: Real> Deformation<T> {
    pub fn builder(name: impl Into<String>, phi: impl Fn(T) -> T + Send + Sync + 'static) -> DeformationBuilder<T> {
        DeformationBuilder::new(name, phi)
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn params(&self) -> &[T] {
        &self.inner.params
    }

    /// The generator φ.
    pub fn phi(&self, x: T) -> T {
        (self.inner.phi)(x)
    }

    /// φ′, analytic when the deformation provides it and by central differences otherwise.
    pub fn phi_prime(&self, x: T) -> T {
        self.inner.phi_prime_at(x)
    }

    pub fn has_closed_phi_prime(&self) -> bool {
        self.inner.phi_prime.is_some()
    }

    pub fn has_closed_log(&self) -> bool {
        self.inner.log_closed.is_some()
    }

    pub fn has_closed_exp(&self) -> bool {
        self.inner.exp_closed.is_some()
    }

    pub fn log(&self, x: T) -> Result<T> {
        self.inner.log(x)
    }

    /// Inverse of `log_φ`, with `exp_φ(y) = 0` at or below the lower limit of `log_φ`.
    pub fn exp(&self, y: T) -> Result<T> {
        self.inner.exp(y)
    }

    /// `exp_φ` by monotone inversion of `log_φ`, bypassing any closed form.
    pub fn exp_by_inversion(&self, y: T) -> Result<T> {
        let (lower, upper) = self.inner.limits;
        if y <= lower {
            return Ok(T::zero());
        }
        if y >= upper {
            return Err(Error::Range(format!("{}: exp_φ({y:e}) beyond upper limit", self.name())));
        }
        self.inner.invert(y)
    }

    /// Limits of `log_φ` at the ends of the domain.
    pub fn log_limits(&self) -> (T, T) {
        self.inner.limits
    }

    pub fn domain(&self) -> (T, T) {
        self.inner.domain
    }

    /// Whether φ was found increasing on the working grid, i.e. `log_φ` is concave.
    pub fn is_concave(&self) -> bool {
        self.inner.increasing_phi
    }

    pub fn notes(&self) -> &[String] {
        &self.inner.notes
    }

    /// `∫₀ˣ log_φ`, from the closed antiderivative when available.
    pub fn log_integral_from_zero(&self, x: T) -> Result<T> {
        if x == T::zero() {
            return Ok(T::zero());
        }
        if let (Some(f), Some(f0)) = (&self.inner.antiderivative, self.inner.antiderivative_at_zero) {
            let v = f(x);
            if v.is_finite() {
                return Ok(v - f0);
            }
        } else if self.inner.antiderivative.is_some() {
            return Err(Error::DivergentIntegral(format!("{}: ∫₀ log_φ diverges", self.name())));
        }
        if self.inner.limits.0 == -T::infinity() {
            // log_φ is unbounded below; the integral converges only if the quadrature does
            let tol = Tolerance::quadrature();
            return specfun::integrate_from_zero(|t| self.log(t), x, &tol).map_err(|e| match e {
                Error::NoConvergence { .. } => {
                    Error::DivergentIntegral(format!("{}: ∫₀^{x:e} log_φ did not converge", self.name()))
                }
                other => other,
            });
        }
        specfun::integrate(|t| self.log(t), T::zero(), x, &Tolerance::quadrature())
    }

    /// `∫_a^b log_φ`.
    pub fn log_integral(&self, a: T, b: T) -> Result<T> {
        if let Some(f) = &self.inner.antiderivative {
            let (fa, fb) = (f(a), f(b));
            if fa.is_finite() && fb.is_finite() {
                return Ok(fb - fa);
            }
        }
        specfun::integrate(|t| self.log(t), a, b, &Tolerance::quadrature())
    }

    /// `h_φ(p) = Σᵢ φ(pᵢ)`.
    pub fn h(&self, p: &ProbVec<T>) -> Result<T> {
        let mut sum = T::zero();
        for &pi in p.probs() {
            let v = self.phi(pi);
            if !(v.is_finite() && v >= T::zero()) {
                return Err(Error::Boundary(format!("{}: φ({pi:e}) = {v:e}", self.name())));
            }
            sum += v;
        }
        if !(sum > T::zero()) {
            return Err(Error::Boundary(format!("{}: h_φ(p) = 0", self.name())));
        }
        Ok(sum)
    }

    /// The escort distribution `φ(pⱼ)/h_φ(p)`.
    pub fn escort(&self, p: &ProbVec<T>) -> Result<ProbVec<T>> {
        let h = self.h(p)?;
        ProbVec::new(p.probs().iter().map(|&pi| self.phi(pi) / h).collect())
    }
}

pub fn log_phi<T: Real>(d: &Deformation<T>, x: T) -> Result<T> {
    d.log(x)
}

pub fn exp_phi<T: Real>(d: &Deformation<T>, x: T) -> Result<T> {
    d.exp(x)
}

pub fn h_phi<T: Real>(d: &Deformation<T>, p: &ProbVec<T>) -> Result<T> {
    d.h(p)
}

pub fn escort<T: Real>(d: &Deformation<T>, p: &ProbVec<T>) -> Result<ProbVec<T>> {
    d.escort(p)
}
