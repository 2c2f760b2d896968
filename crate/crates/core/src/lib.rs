//! Verified error bounds for Fourier-Chebyshev approximations of the
//! periodic advection equation `u_t + c(x) u_x = 0`.
//!
//! The pipeline is:
//!
//! 1. [`galerkin`] integrates the truncated Fourier system with an adaptive
//!    Dormand-Prince scheme and fits every mode with a Chebyshev series in
//!    time ([`chebyshev`]). This part uses plain floating point.
//! 2. [`semigroup`] certifies that `a -> -c * (B a)` generates a semigroup
//!    with `||S(t)|| <= exp(omega t)`, `omega = ||Bc||_1 / 2`.
//! 3. [`verifier`] bounds the initial error and the residual of the
//!    approximation in interval arithmetic ([`interval`], [`seq`]) and
//!    combines them into a sup-in-time l2 bound on the coefficient error.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`.

// `!(x > 0)` is how NaN gets rejected along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chebyshev;
pub mod error;
pub mod galerkin;
pub mod interval;
pub mod problems;
pub mod scalar;
pub mod semigroup;
pub mod seq;
pub mod verifier;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Interval = interval::Interval<f64>;
pub type ComplexInterval = interval::ComplexInterval<f64>;
pub type CoeffSeq = seq::CoeffSeq<f64>;
pub type ChebSeries = chebyshev::ChebSeries<f64>;
pub type ApproxSolution = galerkin::ApproxSolution<f64>;
pub type SemigroupCert = semigroup::SemigroupCert<f64>;
pub type ProblemSpec = problems::ProblemSpec<f64>;
pub type TailBound = verifier::TailBound<f64>;
pub type VerificationReport = verifier::VerificationReport<f64>;

pub use num_complex::Complex;
pub type Complex64 = Complex<f64>;
