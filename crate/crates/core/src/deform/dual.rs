use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

use super::{inside, working_grid, Deformation};

/// The deformation χ = φ/φ′, whose Naudts metric is conformal to the Amari
/// metric of φ. Fails when φ′ is not positive, since χ is then not a generator.
pub fn chi_dual<T: Real>(d: &Deformation<T>) -> Result<Deformation<T>> {
    let phi_one = d.phi(T::one());
    if !(phi_one > T::zero()) {
        return Err(Error::InvalidDeformation(format!("{}: φ(1) = {phi_one:e}", d.name())));
    }
    let gen = d.clone();
    let lg = d.clone();
    Deformation::builder(format!("chi[{}]", d.name()), move |x| gen.phi(x) / gen.phi_prime(x))
        .params(d.params().to_vec())
        .log(move |x| (lg.phi(x) / phi_one).ln())
        .domain(d.domain().0, d.domain().1)
        .build()
}

/// The deformation ξ = exp ∘ log_χ, with `log_ξ(x) = ∫₁ˣ exp(−log_χ(y)) dy`.
///
/// ξ is always increasing; the concavity condition `ξ″ ≤ ξ′²/ξ` (concavity of
/// `log_χ`) is checked on the working grid and recorded as a note when it fails.
pub fn exp_of_log<T: Real>(chi: &Deformation<T>) -> Result<Deformation<T>> {
    let gen = chi.clone();
    let xi = move |x: T| gen.log(x).map(|l| l.exp()).unwrap_or(T::nan());
    let lo = representable_lower_end(chi)?;
    let (xi_p, chi_p) = (xi.clone(), chi.clone());
    let mut violations = Vec::new();
    for x in working_grid::<T>().into_iter().filter(|&x| inside(x, (lo, chi.domain().1))) {
        let h = x * T::epsilon().sqrt().sqrt();
        let (xm, x0, xp) = (xi(x - h), xi(x), xi(x + h));
        let d1 = (xp - xm) / (h + h);
        let d2 = (xp - lit::<T>(2.0) * x0 + xm) / (h * h);
        let bound = d1 * d1 / x0;
        if d2 > bound + lit::<T>(1e-6) * (bound.abs() + d2.abs()) {
            violations.push(x);
        }
    }
    let mut builder = Deformation::builder(format!("exp-log[{}]", chi.name()), xi)
        .phi_prime(move |x| xi_p(x) / chi_p.phi(x))
        .params(chi.params().to_vec())
        .domain(lo, chi.domain().1);
    if lo > chi.domain().0 {
        builder = builder.note(format!("exp(log_χ) underflows below x = {lo:e}; the domain starts there"));
    }
    if let Some(&x) = violations.first() {
        let note = format!(
            "log_χ of {} is not concave: ξ″ > ξ′²/ξ at {} grid points, first at x = {x:e}",
            chi.name(),
            violations.len()
        );
        log::warn!("{note}");
        builder = builder.note(note);
    }
    builder.build()
}

/// Lower end of the range where `exp(log_χ(x))` is a normal float.
fn representable_lower_end<T: Real>(chi: &Deformation<T>) -> Result<T> {
    let floor = T::min_positive_value().ln() + lit(8.0);
    let (lo, _) = chi.domain();
    let probe = lo.max(lit(1e-12));
    if chi.log(probe).is_ok_and(|l| l > floor) {
        return Ok(lo);
    }
    let (mut a, mut b) = (probe, T::one());
    for _ in 0..200 {
        let mid = (a * b).sqrt();
        if chi.log(mid)? > floor {
            b = mid;
        } else {
            a = mid;
        }
        if b / a - T::one() < lit(1e-6) {
            break;
        }
    }
    Ok(b)
}

/// Tsallis–Souza dual of `d`: `log^TS = log/(1 + ν log)` with generator
/// `φ^TS = φ (1 + ν log_φ)²`.
pub fn ts_dual<T: Real>(d: &Deformation<T>, nu: T) -> Result<Deformation<T>> {
    if !nu.is_finite() {
        return Err(Error::domain("ν must be finite"));
    }
    if nu == T::zero() {
        return Ok(d.clone());
    }
    let name = format!("ts-dual[{}, {nu}]", d.name());
    let working_lo = lit::<T>(1e-9);
    let working_hi = lit::<T>(1e3);
    for x in working_grid::<T>().into_iter().filter(|&x| inside(x, d.domain())) {
        let l = d.log(x)?;
        if !(T::one() + nu * l > T::zero()) {
            return Err(Error::Pole(format!("{name}: 1 + ν log_φ({x:e}) = {:e}", T::one() + nu * l)));
        }
    }
    let (lower, upper) = d.log_limits();
    let (mut lo, mut hi) = d.domain();
    let at_pole = -T::one() / nu;
    let map = |l: T| {
        if l.is_infinite() {
            T::one() / nu
        } else {
            l / (T::one() + nu * l)
        }
    };
    let mut new_lower = map(lower);
    let mut new_upper = map(upper);
    if nu > T::zero() && at_pole >= lower {
        let x = d.exp(at_pole)?;
        if x >= working_lo {
            return Err(Error::Pole(format!("{name}: 1 + ν log_φ vanishes at x = {x:e}")));
        }
        lo = lo.max(x);
        new_lower = -T::infinity();
    }
    if nu < T::zero() && at_pole <= upper {
        if at_pole < upper {
            let x = d.exp(at_pole)?;
            if x <= working_hi {
                return Err(Error::Pole(format!("{name}: 1 + ν log_φ vanishes at x = {x:e}")));
            }
            hi = hi.min(x);
        }
        new_upper = T::infinity();
    }
    let (g, gp, lg, ex) = (d.clone(), d.clone(), d.clone(), d.clone());
    let factor = move |dd: &Deformation<T>, x: T| T::one() + nu * dd.log(x).unwrap_or(T::nan());
    let check = if d.has_closed_log() { lit(1e-8) } else { lit(1e-6) };
    Deformation::builder(name, move |x| {
        let f = factor(&g, x);
        g.phi(x) * f * f
    })
    .params({
        let mut p = d.params().to_vec();
        p.push(nu);
        p
    })
    .phi_prime(move |x| {
        let f = factor(&gp, x);
        gp.phi_prime(x) * f * f + lit::<T>(2.0) * nu * f
    })
    .log(move |x| {
        let l = lg.log(x).unwrap_or(T::nan());
        l / (T::one() + nu * l)
    })
    .exp(move |y| {
        let den = T::one() - nu * y;
        if den > T::zero() {
            ex.exp(y / den).unwrap_or(T::nan())
        } else {
            T::nan()
        }
    })
    .domain(lo, hi)
    .log_limits(new_lower, new_upper)
    .check_tol(check)
    .build()
}
