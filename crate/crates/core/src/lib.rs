//! Bergman fans and Chow rings of matroids, with exact verification of
//! Poincaré duality, hard Lefschetz and the Hodge–Riemann relations.

pub mod chow;
pub mod concavity;
pub mod error;
pub mod fan;
pub mod flips;
pub mod hodge;
pub mod linalg;
pub mod lp;
pub mod matroid;
pub mod poly;
pub mod subset;

pub use error::{Error, Result};
pub use matroid::{Matroid, MatroidSpec};
pub use poly::IntPolynomial;
pub use subset::Subset;
