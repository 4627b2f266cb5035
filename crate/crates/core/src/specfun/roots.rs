use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

use super::Tolerance;

fn check<T: Real>(v: T, x: T) -> Result<T> {
    if v.is_nan() {
        Err(Error::Evaluation(format!("root function is NaN at {x:e}")))
    } else {
        Ok(v)
    }
}

/// Brent's method on a sign-changing bracket: inverse quadratic or secant
/// steps, with bisection whenever those would leave the bracket or stall.
pub fn find_root<T: Real, F>(f: F, lo: T, hi: T, tol: &Tolerance<T>) -> Result<T>
where
    F: Fn(T) -> Result<T>,
{
    let (mut a, mut b) = (lo, hi);
    let mut fa = check(f(a)?, a)?;
    let mut fb = check(f(b)?, b)?;
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { lo: lo.to_f64_lossy(), hi: hi.to_f64_lossy() });
    }
    let two = lit::<T>(2.0);
    let half = lit::<T>(0.5);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..tol.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 =
            two * T::epsilon() * b.abs() + half * tol.abs_tol.min(tol.rel_tol * b.abs().max(T::min_positive_value()));
        let xm = half * (c - b);
        if xm.abs() <= tol1 || fb == T::zero() {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = lit::<T>(3.0) * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol1 { b + d } else { b + tol1 * xm.signum() };
        fb = check(f(b)?, b)?;
    }
    Err(Error::NoConvergence { what: "brent root finder", iterations: tol.max_iter })
}

/// Newton's method kept inside a shrinking sign-change bracket; any step that
/// leaves the bracket is replaced by bisection.
pub fn find_root_newton<T: Real, F, D>(f: F, df: D, lo: T, hi: T, tol: &Tolerance<T>) -> Result<T>
where
    F: Fn(T) -> Result<T>,
    D: Fn(T) -> Result<T>,
{
    let (mut lo, mut hi) = (lo, hi);
    let flo = check(f(lo)?, lo)?;
    let fhi = check(f(hi)?, hi)?;
    if flo == T::zero() {
        return Ok(lo);
    }
    if fhi == T::zero() {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoSignChange { lo: lo.to_f64_lossy(), hi: hi.to_f64_lossy() });
    }
    let increasing = fhi > T::zero();
    let half = lit::<T>(0.5);
    let mut x = (lo + hi) * half;
    for _ in 0..tol.max_iter {
        let fx = check(f(x)?, x)?;
        if fx == T::zero() {
            return Ok(x);
        }
        if (fx > T::zero()) == increasing {
            hi = x;
        } else {
            lo = x;
        }
        let slope = df(x)?;
        let mut next = x - fx / slope;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = (lo + hi) * half;
        }
        let step = (next - x).abs();
        x = next;
        if step <= tol.abs_tol.max(tol.rel_tol * x.abs()) || (hi - lo) <= tol.rel_tol * x.abs() {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence { what: "newton root finder", iterations: tol.max_iter })
}
