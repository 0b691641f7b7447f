//! Low-energy spectral analysis of three-dimensional Schrödinger operators
//! with finitely many point interactions.
//!
//! The operator `-Δ_{α,Y}` is determined by a finite set of centers `Y` and
//! real coupling constants `α`. Everything in this crate is driven by the
//! `N×N` complex symmetric matrix `Γ_{α,Y}(z)`: its singularities on the
//! positive imaginary axis give the negative eigenvalues, its behaviour at
//! `z = 0` gives the zero-energy resonances and eigenvalues, and its inverse
//! is the coefficient matrix of the rank-`N` resolvent correction.

pub mod config;
mod error;
pub mod gamma;
pub mod laurent;
pub mod linalg;
pub mod quadform;
pub mod registry;
pub mod resolvent;
pub mod search;
pub mod spectrum;
pub mod zero_modes;

pub use config::Configuration;
pub use error::{Error, Result};

/// Complex scalar.
pub type C64 = nalgebra::Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;
/// A point in R³.
pub type Point = [f64; 3];

/// Default relative rank tolerance for kernel computations.
pub const DEFAULT_TOL: f64 = 1e-10;

pub(crate) fn distance(a: &Point, b: &Point) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}
