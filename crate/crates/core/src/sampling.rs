//! Seeded random interior points of the simplex for the property sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::deform::ProbVec;
use crate::error::Result;
use crate::scalar::{lit, Real};

/// Weight of the uniform component mixed into every sample.
pub const UNIFORM_MIX: f64 = 0.3;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A flat-Dirichlet draw mixed with the uniform distribution, so every entry
/// is at least `UNIFORM_MIX / n`.
pub fn random_interior<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<ProbVec<T>> {
    let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = e.iter().sum();
    let floor = UNIFORM_MIX / n as f64;
    ProbVec::normalized(e.iter().map(|&x| lit((1.0 - UNIFORM_MIX) * x / total + floor)).collect())
}

pub fn random_points<T: Real>(seed: u64, n: usize, count: usize) -> Result<Vec<ProbVec<T>>> {
    let mut rng = seeded_rng(seed);
    (0..count).map(|_| random_interior(&mut rng, n)).collect()
}
