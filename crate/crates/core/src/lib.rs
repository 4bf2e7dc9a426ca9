//! Q-tensor (inertial Qian-Sheng) and director (inertial Ericksen-Leslie)
//! hydrodynamics on a periodic cell, the exact coefficient bridge between
//! them, and a harness that measures how the first approaches the second as
//! the bulk scale parameter eps goes to zero.

// Negated float comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bridge;
pub mod el;
pub mod error;
pub mod hilbert;
mod imex;
pub mod lab;
pub mod landau;
pub mod params;
pub mod qs;
pub mod spectral;
pub mod tensor;
pub mod tolerance;

pub use error::{Error, Result};
pub use params::MaterialParams;
pub use spectral::{DiffContext, Field, Mat3Field, PeriodicGrid, ScalarField, TensorField, VectorField};
pub use tensor::{Director, Mat3, QTensor, Vec3};
