//! Exact and high-precision computations for p-adic self-similar fractal
//! strings: balls and Haar measure in `Z_p`, affine iterated function systems,
//! the rational geometric zeta function, complex dimensions, tube volumes and
//! Minkowski content.

pub mod dims;
pub mod error;
pub mod ifs;
pub mod minkowski;
pub mod num;
pub mod padic;
pub mod poly;
pub mod presets;
pub mod serde_integer;
pub mod tube;
pub mod zeta;

pub use error::{DimsError, Error, IfsError, PadicError, Result, ZetaError};
pub use ifs::{AffineContraction, LatticeData, SelfSimilarSystem};
pub use num::Complex;
pub use padic::{PAdicBall, Prime};
pub use poly::IntPolynomial;
