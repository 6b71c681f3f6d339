//! Exact computations in the shuffle algebra of a doubled quiver: slope
//! subalgebras, the Hopf pairing, PBW factorization, R-matrix windows and the
//! Kac polynomial dimension check.

pub mod error;
pub mod field;
pub mod hopf;
pub mod kac;
pub mod laurent;
pub mod linalg;
pub mod params;
pub mod quiver;
pub mod report;
pub mod schur;
pub mod shuffle;
pub mod slope;

pub use error::{Error, Result};
