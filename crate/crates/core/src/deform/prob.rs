use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// A point of the probability simplex. Entry 0 is the dependent coordinate
/// `p₀ = 1 − Σᵢ pᵢ` of the simplex chart used by the metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVec<T> {
    probs: Vec<T>,
    interior: bool,
}

/// Normalization slack: 1e-12 in double precision, a few ulps per entry otherwise.
pub(crate) fn sum_tolerance<T: Real>(n: usize) -> T {
    lit::<T>(1e-12).max(T::epsilon() * lit((64 * n.max(1)) as f64))
}

impl<T: Real> ProbVec<T> {
    pub fn new(probs: Vec<T>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::InvalidProbability(format!("need at least 2 states, got {}", probs.len())));
        }
        if let Some((i, p)) = probs.iter().enumerate().find(|(_, p)| !(p.is_finite() && **p >= T::zero())) {
            return Err(Error::InvalidProbability(format!("entry {i} = {p:e} is not a finite nonnegative number")));
        }
        let sum: T = probs.iter().copied().sum();
        if (sum - T::one()).abs() > sum_tolerance::<T>(probs.len()) {
            return Err(Error::InvalidProbability(format!("entries sum to {sum:e}, not 1")));
        }
        let interior = probs.iter().all(|&p| p > T::zero());
        Ok(Self { probs, interior })
    }

    /// Divides nonnegative weights by their sum.
    pub fn normalized(weights: Vec<T>) -> Result<Self> {
        let sum: T = weights.iter().copied().sum();
        if !(sum > T::zero()) || !sum.is_finite() {
            return Err(Error::InvalidProbability(format!("weights sum to {sum:e}")));
        }
        Self::new(weights.into_iter().map(|w| w / sum).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![T::one() / T::from_count(n); n])
    }

    /// Builds a point from its independent coordinates `p₁ … p_{n−1}`.
    pub fn from_independent(coords: &[T]) -> Result<Self> {
        let rest: T = coords.iter().copied().sum();
        let mut probs = Vec::with_capacity(coords.len() + 1);
        probs.push(T::one() - rest);
        probs.extend_from_slice(coords);
        Self::new(probs)
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn interior(&self) -> bool {
        self.interior
    }

    /// The dependent coordinate p₀.
    pub fn p0(&self) -> T {
        self.probs[0]
    }

    /// Independent coordinates `p₁ … p_{n−1}`.
    pub fn independent(&self) -> &[T] {
        &self.probs[1..]
    }

    pub fn require_interior(&self, what: &str) -> Result<()> {
        if self.interior {
            Ok(())
        } else {
            Err(Error::Boundary(format!("{what} needs an interior distribution")))
        }
    }

    pub fn into_inner(self) -> Vec<T> {
        self.probs
    }
}

impl<T> std::ops::Index<usize> for ProbVec<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.probs[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_entries() {
        assert!(ProbVec::new(vec![0.5, 0.5]).unwrap().interior());
        assert!(!ProbVec::new(vec![1.0, 0.0]).unwrap().interior());
        assert!(ProbVec::new(vec![1.0]).is_err());
        assert!(ProbVec::new(vec![0.7, 0.4]).is_err());
        assert!(ProbVec::new(vec![1.5, -0.5]).is_err());
        assert!(ProbVec::new(vec![f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn independent_chart_round_trip() {
        let p = ProbVec::from_independent(&[0.2, 0.3]).unwrap();
        assert_eq!(p.probs(), &[0.5, 0.2, 0.3]);
        assert_eq!(p.independent(), &[0.2, 0.3]);
        assert_eq!(p.p0(), 0.5);
    }
}
