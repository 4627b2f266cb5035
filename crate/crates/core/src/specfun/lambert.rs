use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

use super::Tolerance;

/// Real branch of the Lambert W function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `W₀`, defined on `[-1/e, ∞)` with values `≥ -1`.
    Principal,
    /// `W₋₁`, defined on `[-1/e, 0)` with values `≤ -1`.
    Lower,
}

/// Solves `w·eʷ = x` on the requested branch.
///
/// Halley iteration from the usual branch-point / asymptotic seeds, falling
/// back to bisection when the iteration stalls near `-1/e`.
pub fn lambert_w<T: Real>(branch: Branch, x: T, tol: &Tolerance<T>) -> Result<T> {
    let inv_e = T::one() / T::E();
    if x.is_nan() {
        return Err(Error::domain("lambert_w of NaN"));
    }
    // Points a few ulps below -1/e are the branch point up to rounding.
    let slack = T::epsilon() * lit(8.0) * inv_e;
    if x < -inv_e - slack {
        return Err(Error::domain(format!("lambert_w needs x >= -1/e, got {x:e}")));
    }
    if x <= -inv_e {
        return Ok(-T::one());
    }
    match branch {
        Branch::Principal => {
            if x == T::zero() {
                return Ok(T::zero());
            }
            if x == T::infinity() {
                return Ok(T::infinity());
            }
        }
        Branch::Lower => {
            if x >= T::zero() {
                return Err(Error::domain(format!("lower lambert_w needs x < 0, got {x:e}")));
            }
        }
    }

    let mut w = initial_guess(branch, x);
    for _ in 0..tol.max_iter {
        // F(w) = w - x e^{-w}; same Halley step as for w e^w - x, without overflow.
        let xe = scaled(x, w);
        let f = w - xe;
        let wp1 = w + T::one();
        if wp1.abs() < T::epsilon().sqrt() {
            break;
        }
        let denom = wp1 - (w + lit(2.0)) * f / (lit::<T>(2.0) * wp1);
        let step = f / denom;
        if !step.is_finite() {
            break;
        }
        let next = match branch {
            Branch::Principal => (w - step).max(-T::one()),
            Branch::Lower => (w - step).min(-T::one()),
        };
        let done = (next - w).abs() <= tol.rel_tol * (T::one() + next.abs());
        w = next;
        if done {
            return Ok(w);
        }
    }
    bisect(branch, x, tol)
}

/// `x·e^{-w}` evaluated in log space when that avoids overflow.
fn scaled<T: Real>(x: T, w: T) -> T {
    if x > T::zero() {
        (x.ln() - w).exp()
    } else {
        -((-x).ln() - w).exp()
    }
}

fn initial_guess<T: Real>(branch: Branch, x: T) -> T {
    let e = T::E();
    let p2 = lit::<T>(2.0) * (e * x + T::one());
    let p = p2.max(T::zero()).sqrt();
    let c3 = lit::<T>(11.0 / 72.0);
    let third = lit::<T>(1.0 / 3.0);
    match branch {
        Branch::Principal => {
            if p < lit(0.5) {
                -T::one() + p - third * p * p + c3 * p * p * p
            } else if x < lit(3.0) {
                (T::one() + x).ln()
            } else {
                let l1 = x.ln();
                let l2 = l1.ln();
                l1 - l2 + l2 / l1
            }
        }
        Branch::Lower => {
            if p < lit(0.5) {
                -T::one() - p - third * p * p - c3 * p * p * p
            } else {
                let l1 = (-x).ln();
                let l2 = (-l1).ln();
                l1 - l2 + l2 / l1
            }
        }
    }
}

fn bisect<T: Real>(branch: Branch, x: T, tol: &Tolerance<T>) -> Result<T> {
    // g(w) = w e^w - x is increasing on [-1, ∞) and decreasing on (-∞, -1].
    let g = |w: T| w * w.exp() - x;
    let (mut lo, mut hi) = match branch {
        Branch::Principal => (-T::one(), x.max(T::one())),
        Branch::Lower => {
            let mut lo = lit::<T>(-2.0);
            while g(lo) < T::zero() {
                lo *= lit(2.0);
                if !lo.is_finite() {
                    return Err(Error::NoConvergence { what: "lambert_w bracket", iterations: 0 });
                }
            }
            (lo, -T::one())
        }
    };
    let sign_lo = g(lo) > T::zero();
    for i in 0..(tol.max_iter.max(200) * 2) {
        let mid = (lo + hi) * lit(0.5);
        if (hi - lo) <= tol.rel_tol * (T::one() + mid.abs()) {
            return Ok(mid);
        }
        if (g(mid) > T::zero()) == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        if i + 1 == tol.max_iter.max(200) * 2 {
            break;
        }
    }
    Err(Error::NoConvergence { what: "lambert_w", iterations: tol.max_iter })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance<f64> {
        Tolerance::standard()
    }

    #[test]
    fn trivial_values() {
        assert_eq!(lambert_w(Branch::Principal, 0.0, &tol()).unwrap(), 0.0);
        let w = lambert_w(Branch::Principal, std::f64::consts::E, &tol()).unwrap();
        assert!((w - 1.0).abs() < 1e-15);
        let w = lambert_w(Branch::Lower, -1.0 / std::f64::consts::E, &tol()).unwrap();
        assert!((w + 1.0).abs() < 1e-12);
    }

    #[test]
    fn omega_constant_matches_bisection() {
        // oracle: plain bisection of w e^w - 1 on [0, 1]
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.exp() < 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let w = lambert_w(Branch::Principal, 1.0, &tol()).unwrap();
        assert!((w - lo).abs() < 1e-15);
        assert!((w - 0.5671432904097838).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        assert!(lambert_w(Branch::Principal, -0.5, &tol()).is_err());
        assert!(lambert_w(Branch::Lower, 0.1, &tol()).is_err());
        assert!(lambert_w(Branch::Lower, 0.0, &tol()).is_err());
    }

    #[test]
    fn branches_near_branch_point() {
        let x = -1.0 / std::f64::consts::E + 1e-10;
        let w0 = lambert_w(Branch::Principal, x, &tol()).unwrap();
        let wm = lambert_w(Branch::Lower, x, &tol()).unwrap();
        assert!(w0 >= -1.0 && wm <= -1.0);
        assert!((w0 * w0.exp() - x).abs() < 1e-15);
        assert!((wm * wm.exp() - x).abs() < 1e-15);
    }

    #[test]
    fn works_in_single_precision() {
        let w = lambert_w(Branch::Principal, 1.0f32, &Tolerance::standard()).unwrap();
        assert!((w - 0.567_143_3).abs() < 1e-6);
    }
}
