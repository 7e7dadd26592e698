//! Exact mod-p computations with parabolic induction for the pro-p
//! Iwahori-Hecke algebra of SL2(Qp) and its diagonal torus.

pub mod error;
pub mod ext;
pub mod field;
pub mod functors;
pub mod harness;
pub mod hecke;
pub mod linalg;

pub use error::{Error, Result};
pub use field::{Fp, Modulus};
pub use linalg::FpMatrix;
