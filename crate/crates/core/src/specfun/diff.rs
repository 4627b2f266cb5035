use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::{lit, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffOrder {
    Gradient,
    Hessian,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Derivative<T> {
    Gradient(Vec<T>),
    Hessian(Mat<T>),
}

fn step<T: Real>(x: T, base: T) -> T {
    let h = x.abs().max(T::one()) * base;
    // make x + h exactly representable so the stencil width is what we divide by
    (x + h) - x
}

fn eval<T: Real, F: Fn(&[T]) -> Result<T>>(f: &F, x: &[T]) -> Result<T> {
    let v = f(x)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Evaluation(format!("non-finite value at finite-difference stencil point {x:?}")))
    }
}

/// Central-difference gradient with steps `max(|xᵢ|, 1)·ε^{1/3}`.
pub fn gradient<T: Real, F: Fn(&[T]) -> Result<T>>(f: F, x: &[T]) -> Result<Vec<T>> {
    let base = T::epsilon().cbrt();
    let mut xp = x.to_vec();
    let mut out = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let h = step(x[i], base);
        xp[i] = x[i] + h;
        let fp = eval(&f, &xp)?;
        xp[i] = x[i] - h;
        let fm = eval(&f, &xp)?;
        xp[i] = x[i];
        out.push((fp - fm) / (h + h));
    }
    Ok(out)
}

/// Central-difference Hessian with steps `max(|xᵢ|, 1)·ε^{1/4}`; the result is
/// symmetrized, so it is exactly symmetric.
pub fn hessian<T: Real, F: Fn(&[T]) -> Result<T>>(f: F, x: &[T]) -> Result<Mat<T>> {
    let n = x.len();
    let base = T::epsilon().sqrt().sqrt();
    let h: Vec<T> = x.iter().map(|&xi| step(xi, base)).collect();
    let f0 = eval(&f, x)?;
    let mut xp = x.to_vec();
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        xp[i] = x[i] + h[i];
        let fp = eval(&f, &xp)?;
        xp[i] = x[i] - h[i];
        let fm = eval(&f, &xp)?;
        xp[i] = x[i];
        m[(i, i)] = (fp - lit::<T>(2.0) * f0 + fm) / (h[i] * h[i]);
        for j in (i + 1)..n {
            let mut corner = |si: T, sj: T| -> Result<T> {
                xp[i] = x[i] + si * h[i];
                xp[j] = x[j] + sj * h[j];
                let v = eval(&f, &xp);
                xp[i] = x[i];
                xp[j] = x[j];
                v
            };
            let one = T::one();
            let fpp = corner(one, one)?;
            let fpm = corner(one, -one)?;
            let fmp = corner(-one, one)?;
            let fmm = corner(-one, -one)?;
            let v = (fpp - fpm - fmp + fmm) / (lit::<T>(4.0) * h[i] * h[j]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m.symmetrize();
    Ok(m)
}

/// Gradient or Hessian of `f` at `x` by central differences.
pub fn numeric_diff<T: Real, F: Fn(&[T]) -> Result<T>>(f: F, x: &[T], order: DiffOrder) -> Result<Derivative<T>> {
    match order {
        DiffOrder::Gradient => gradient(f, x).map(Derivative::Gradient),
        DiffOrder::Hessian => hessian(f, x).map(Derivative::Hessian),
    }
}

/// Derivative of a scalar function, with a step relative to `x` so that
/// points close to zero stay on their side of the origin.
pub fn derivative<T: Real, F: Fn(T) -> Result<T>>(f: F, x: T) -> Result<T> {
    let h = {
        let raw = x.abs().max(T::min_positive_value()) * T::epsilon().cbrt();
        (x + raw) - x
    };
    let fp = f(x + h)?;
    let fm = f(x - h)?;
    let d = (fp - fm) / (h + h);
    if d.is_finite() {
        Ok(d)
    } else {
        Err(Error::Evaluation(format!("non-finite derivative at {x:e}")))
    }
}
