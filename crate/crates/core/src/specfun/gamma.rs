use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

use super::Tolerance;

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Complete gamma function Γ(s) for s > 0.
pub fn gamma<T: Real>(s: T) -> Result<T> {
    if !(s > T::zero()) {
        return Err(Error::domain(format!("gamma needs s > 0, got {s:e}")));
    }
    if s < lit(0.5) {
        // reflection: Γ(s) Γ(1-s) = π / sin(πs)
        let pi = T::PI();
        return Ok(pi / ((pi * s).sin() * gamma(T::one() - s)?));
    }
    let z = s - T::one();
    let mut acc = lit::<T>(LANCZOS[0]);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += lit::<T>(c) / (z + T::from_count(k));
    }
    let t = z + lit(LANCZOS_G + 0.5);
    let sqrt_2pi = (lit::<T>(2.0) * T::PI()).sqrt();
    Ok(sqrt_2pi * t.powf(z + lit(0.5)) * (-t).exp() * acc)
}

/// Upper incomplete gamma Γ(s, x) = ∫ₓ^∞ t^{s−1} e^{−t} dt (not regularized).
///
/// Series for the lower part when `x < s + 1`, continued fraction otherwise,
/// and the downward recurrence `Γ(s,x) = (Γ(s+1,x) − xˢe^{−x})/s` for `s ≤ 0`.
pub fn upper_gamma<T: Real>(s: T, x: T, tol: &Tolerance<T>) -> Result<T> {
    if s.is_nan() || x.is_nan() {
        return Err(Error::domain("upper_gamma of NaN"));
    }
    if x < T::zero() {
        return Err(Error::domain(format!("upper_gamma needs x >= 0, got {x:e}")));
    }
    if x == T::zero() {
        return if s > T::zero() {
            gamma(s)
        } else {
            Err(Error::domain(format!("Γ(s, 0) diverges for s = {s:e} <= 0")))
        };
    }
    if x == T::infinity() {
        return Ok(T::zero());
    }
    let cf_threshold = (s + T::one()).max(lit(1.5));
    if x >= cf_threshold {
        return continued_fraction(s, x, tol);
    }
    if s > T::zero() {
        let lower = lower_series(s, x, tol)?;
        return Ok(gamma(s)? - lower);
    }
    if s == T::zero() {
        return exp_integral_e1(x, tol);
    }
    let next = upper_gamma(s + T::one(), x, tol)?;
    Ok((next - x.powf(s) * (-x).exp()) / s)
}

/// γ(s, x) = xˢ e^{−x} Σₙ xⁿ / (s (s+1) ⋯ (s+n)).
fn lower_series<T: Real>(s: T, x: T, tol: &Tolerance<T>) -> Result<T> {
    let mut term = T::one() / s;
    let mut sum = term;
    let mut a = s;
    for _ in 0..tol.max_iter.max(500) {
        a += T::one();
        term = term * x / a;
        sum += term;
        if term.abs() <= sum.abs() * T::epsilon() {
            return Ok(sum * (s * x.ln() - x).exp());
        }
    }
    Err(Error::NoConvergence { what: "incomplete gamma series", iterations: tol.max_iter.max(500) })
}

/// Modified Lentz evaluation of the Legendre continued fraction.
fn continued_fraction<T: Real>(s: T, x: T, tol: &Tolerance<T>) -> Result<T> {
    let tiny = T::min_positive_value() / T::epsilon();
    let mut b = x + T::one() - s;
    let mut c = T::one() / tiny;
    let mut d = T::one() / b;
    let mut h = d;
    let max_iter = tol.max_iter.max(500);
    for i in 1..=max_iter {
        let fi = T::from_count(i);
        let an = -fi * (fi - s);
        b += lit(2.0);
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = T::one() / d;
        let delta = d * c;
        h *= delta;
        if (delta - T::one()).abs() <= T::epsilon() {
            return Ok((s * x.ln() - x).exp() * h);
        }
    }
    Err(Error::NoConvergence { what: "incomplete gamma continued fraction", iterations: max_iter })
}

/// E₁(x) = Γ(0, x) for small x via its power series.
fn exp_integral_e1<T: Real>(x: T, tol: &Tolerance<T>) -> Result<T> {
    let mut sum = T::zero();
    let mut term = T::one();
    for k in 1..tol.max_iter.max(500) {
        let fk = T::from_count(k);
        term = -term * x / fk;
        let add = term / fk;
        sum += add;
        if add.abs() <= sum.abs().max(T::one()) * T::epsilon() {
            return Ok(-lit::<T>(EULER_GAMMA) - x.ln() - sum);
        }
    }
    Err(Error::NoConvergence { what: "E1 series", iterations: tol.max_iter.max(500) })
}
