//! Twisted Wronskian determinants, QQ-systems and Bethe residuals, the four
//! many-body Lax matrices (tRS, tCM, rRS, rCM), Calogero-Moser space data,
//! and solvers for the canonical momentum equations, over the four
//! shift/derivative calculi (q-multiplicative, additive, rational
//! differential, trigonometric differential).

pub mod corner;
pub mod qq;
pub mod wronskian;
pub mod error;
pub mod lax;
pub mod matrix;
pub mod poly;
pub mod roots;
pub mod scalar;

pub use corner::Corner;
pub use wronskian::{Frame, PolyMatrix};
pub use error::{Error, Result};
pub use matrix::Mat;
pub use poly::Poly;
pub use scalar::{Scalar, C64, CQ};
