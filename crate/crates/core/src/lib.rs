//! Horizontal lifts and holonomy on the Stiefel bundle
//! U(n) → U(n+m)/U(m) → G_{n,m}.
//!
//! Layers, bottom-up:
//!
//! - [`cmat`]: dense complex matrices, skew-Hermitian exponentials, polar retraction.
//! - [`lie`]: the 𝔥 + 𝔪 split of 𝔲(n+m), brackets, the metric, double-bracket coefficients.
//! - [`grassmann`]: frames, projectors, geodesics and the 4×4 SU(2) model of ℂP¹.
//! - [`surfaces`]: the X*X = λI, X*Y = μI condition, classification of 2-planes, charts and areas.
//! - [`holonomy`]: RK4 horizontal lifts with polar retraction and holonomy extraction.
//! - [`cli`]: experiment drivers behind the `stiefel-holonomy` binary.

pub mod cli;
pub mod cmat;
pub mod error;
pub mod grassmann;
pub mod holonomy;
pub mod lie;
pub mod sample;
pub mod surfaces;
pub mod tolerance;

pub use error::{Error, Result};
