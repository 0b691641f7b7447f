//! Zero-energy classification.
//!
//! Zero-energy obstructions live in `Ker Γ₀`. A kernel vector `c` with
//! `Σ c_j = 0` (equivalently `Γ₁ c = 0`) gives an `L²` eigenfunction
//! `ψ = Σ c_j G_0^{y_j}`; the remaining directions of `Ker Γ₀` give
//! resonances, whose `ψ` decays only like `1/|x|`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::gamma::{gamma_imaginary_axis, gamma_taylor};
use crate::linalg::{complexify, nullspace, spectral_norm, split_kernel};
use crate::{distance, CVector, Point, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ZeroKind {
    Regular,
    ResonanceOnly,
    EigenvalueOnly,
    Mixed,
}

impl ZeroKind {
    pub fn from_counts(e: usize, r: usize) -> Self {
        match (e > 0, r > 0) {
            (false, false) => ZeroKind::Regular,
            (false, true) => ZeroKind::ResonanceOnly,
            (true, false) => ZeroKind::EigenvalueOnly,
            (true, true) => ZeroKind::Mixed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ZeroModeReport {
    /// Multiplicity of the zero eigenvalue, `dim(Ker Γ₀ ∩ Ker Γ₁)`.
    pub e: usize,
    /// Multiplicity of the zero-energy resonance,
    /// `dim Ker Γ₀ − dim(Ker Γ₀ ∩ Ker Γ₁)`.
    pub r: usize,
    /// Orthonormal basis of `Ker Γ₀ ∩ Ker Γ₁`.
    pub eigen_basis: Vec<CVector>,
    /// Orthonormal basis of the orthogonal complement of `eigen_basis`
    /// inside `Ker Γ₀`.
    pub resonance_basis: Vec<CVector>,
    pub kind: ZeroKind,
    /// Set when a singular value of `Γ₀` lies within a factor 100 of the
    /// tolerance, so the classification depends on the tolerance chosen.
    pub borderline: bool,
    /// Singular values of `Γ₀`, descending.
    pub gamma0_singular_values: Vec<f64>,
    pub tolerance: f64,
}

pub fn classify_zero_energy(config: &Configuration, tol: f64) -> ZeroModeReport {
    let taylor = gamma_taylor(config);
    let kernel0 = nullspace(&complexify(&taylor.gamma0), tol);
    let (eigen, resonance_basis) = split_kernel(&kernel0, &taylor.gamma1, tol);
    let sv = kernel0.singular_values.clone();
    let top = sv.first().copied().unwrap_or(0.0);
    let borderline = top > 0.0
        && sv
            .iter()
            .any(|&s| s / top >= tol / 100.0 && s / top <= tol * 100.0);
    let e = eigen.dim();
    let r = resonance_basis.len();
    ZeroModeReport {
        e,
        r,
        eigen_basis: eigen.basis,
        resonance_basis,
        kind: ZeroKind::from_counts(e, r),
        borderline,
        gamma0_singular_values: sv,
        tolerance: tol,
    }
}

/// `ψ(x) = Σ_j c_j / (4π|x − y_j|)`.
pub fn zero_mode_value(config: &Configuration, c: &CVector, x: &Point) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for (j, y) in config.centers.iter().enumerate() {
        let r = distance(x, y);
        if r == 0.0 {
            return Err(Error::CoincidentWithCenter(j));
        }
        acc += c[j] / (4.0 * PI * r);
    }
    Ok(acc)
}

/// Residuals of the boundary-condition identity `F_{iλ}(y_k) = (Γ(iλ)c)_k`.
#[derive(Debug, Clone, Serialize)]
pub struct ZeroModeResidual {
    pub lambdas: Vec<f64>,
    pub residuals: Vec<f64>,
}

impl ZeroModeResidual {
    pub fn max(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, &r| m.max(r))
    }
}

/// `G_0^y(x) − G_{iλ}^y(x) = (1 − e^{−λr}) / (4πr)`, continued to `λ/(4π)`
/// at `r = 0`.
fn green_difference(lambda: f64, r: f64) -> f64 {
    if r == 0.0 {
        lambda / (4.0 * PI)
    } else {
        -(-lambda * r).exp_m1() / (4.0 * PI * r)
    }
}

/// Sample λ values used when none are given.
pub const DEFAULT_CHECK_LAMBDAS: [f64; 2] = [0.1, 0.01];

/// Splits `ψ = Σ c_j G_0^{y_j}` as `F_{iλ} + Σ c_j G_{iλ}^{y_j}` and checks
/// that the regular part satisfies the boundary condition of the operator
/// domain at every center.
pub fn verify_zero_eigenfunction(
    config: &Configuration,
    c: &CVector,
    lambdas: &[f64],
) -> Result<ZeroModeResidual> {
    let n = config.len();
    if c.len() != n {
        return Err(Error::InvalidArgument(format!(
            "coefficient vector has length {}, expected {n}",
            c.len()
        )));
    }
    let taylor = gamma_taylor(config);
    let gamma0 = complexify(&taylor.gamma0);
    let c_norm = c.norm().max(f64::MIN_POSITIVE);
    let gamma0_residual = (&gamma0 * c).norm() / (spectral_norm(&gamma0).max(1e-300) * c_norm);
    let sum = c.sum().norm() / ((n as f64).sqrt() * c_norm);
    if gamma0_residual > 1e-8 || sum > 1e-8 {
        return Err(Error::NotAZeroMode {
            gamma0_residual,
            sum,
        });
    }
    let residuals = lambdas
        .iter()
        .map(|&lambda| {
            let gamma_c = complexify(&gamma_imaginary_axis(config, lambda)) * c;
            (0..n)
                .map(|k| {
                    let f_k: C64 = (0..n)
                        .map(|j| c[j] * green_difference(lambda, config.distance(j, k)))
                        .sum();
                    (f_k - gamma_c[k]).norm()
                })
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(ZeroModeResidual {
        lambdas: lambdas.to_vec(),
        residuals,
    })
}
