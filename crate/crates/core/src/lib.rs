//! φ-deformed logarithms and exponential families on finite state spaces, their
//! two information geometries (Naudts and Amari type), MaxEnt under linear and
//! escort constraints, and the generalized Cramér-Rao bound.
//!
//! Everything is generic over `f32`/`f64`; the aliases below fix the precision.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod deform;
pub mod error;
pub mod estimation;
pub mod families;
pub mod geometry;
pub mod linalg;
pub mod maxent;
pub mod sampling;
pub mod scalar;
pub mod specfun;

pub use deform::{Deformation, ProbVec};
pub use error::{Error, Result};
pub use scalar::Real;

pub type Deformation64 = Deformation<f64>;
pub type Deformation32 = Deformation<f32>;
pub type ProbVec64 = ProbVec<f64>;
pub type ProbVec32 = ProbVec<f32>;
pub type MetricMatrix64 = geometry::MetricMatrix<f64>;
pub type MetricMatrix32 = geometry::MetricMatrix<f32>;
pub type ConfigMatrix64 = maxent::ConfigMatrix<f64>;
pub type ConfigMatrix32 = maxent::ConfigMatrix<f32>;
pub type PhiExpFamily64 = maxent::PhiExpFamily<f64>;
pub type PhiExpFamily32 = maxent::PhiExpFamily<f32>;
