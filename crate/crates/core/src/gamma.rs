//! The free Green function and the matrix `Γ_{α,Y}(z)`.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::{distance, CMatrix, Point, C64};

const I: C64 = C64::new(0.0, 1.0);

/// `e^{izr} / (4πr)` for `r > 0`.
pub(crate) fn green_at_distance(z: C64, r: f64) -> C64 {
    (I * z * r).exp() / (4.0 * PI * r)
}

/// Free outgoing Green function `G_z^y(x) = e^{iz|x−y|} / (4π|x−y|)`.
pub fn green_free(z: C64, x: &Point, y: &Point) -> Result<C64> {
    let r = distance(x, y);
    if r == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    Ok(green_at_distance(z, r))
}

/// `Γ_{α,Y}(z)`, entry `(j,k) = (α_j − iz/(4π))δ_{jk} − G_z^{y_j y_k}` with the
/// diagonal Green term taken as zero. Symmetric (not Hermitian) by
/// construction.
pub fn gamma_matrix(config: &Configuration, z: C64) -> CMatrix {
    let n = config.len();
    let mut m = CMatrix::zeros(n, n);
    for j in 0..n {
        m[(j, j)] = C64::from(config.alphas[j]) - I * z / (4.0 * PI);
        for k in j + 1..n {
            let g = -green_at_distance(z, config.distance(j, k));
            m[(j, k)] = g;
            m[(k, j)] = g;
        }
    }
    m
}

/// `Γ(iλ)` for real `λ`, which is a real symmetric matrix.
pub fn gamma_imaginary_axis(config: &Configuration, lambda: f64) -> DMatrix<f64> {
    let n = config.len();
    DMatrix::from_fn(n, n, |j, k| {
        if j == k {
            config.alphas[j] + lambda / (4.0 * PI)
        } else {
            let r = config.distance(j, k);
            -(-lambda * r).exp() / (4.0 * PI * r)
        }
    })
}

/// `∂_λ Γ(iλ)`: `(1/4π)` times the matrix with entries `e^{−λ|y_j−y_k|}`
/// (ones on the diagonal), which is positive definite.
pub fn gamma_imaginary_axis_derivative(config: &Configuration, lambda: f64) -> DMatrix<f64> {
    let n = config.len();
    DMatrix::from_fn(n, n, |j, k| {
        if j == k {
            1.0 / (4.0 * PI)
        } else {
            (-lambda * config.distance(j, k)).exp() / (4.0 * PI)
        }
    })
}

/// The `n`-th Taylor coefficient of `Γ(z)` at `z = 0`.
///
/// Off the diagonal it is `−i^n |y_j − y_k|^{n−1} / (4π n!)`; on the diagonal
/// only orders 0 and 1 contribute.
pub fn gamma_taylor_coefficient(config: &Configuration, order: u32) -> CMatrix {
    let n = config.len();
    let i_pow = I.powu(order);
    let factorial: f64 = (1..=order).map(f64::from).product();
    CMatrix::from_fn(n, n, |j, k| {
        if j == k {
            match order {
                0 => C64::from(config.alphas[j]),
                1 => -I / (4.0 * PI),
                _ => C64::new(0.0, 0.0),
            }
        } else {
            let r = config.distance(j, k);
            -i_pow * r.powi(order as i32 - 1) / (4.0 * PI * factorial)
        }
    })
}

/// The first three Taylor coefficients of `Γ(z)` at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaTaylor {
    /// `α_j δ_{jk} − G_0^{y_j y_k}`, real symmetric.
    pub gamma0: DMatrix<f64>,
    /// Every entry `1/(4πi)`; skew-Hermitian.
    pub gamma1: CMatrix,
    /// `|y_j − y_k| / (8π)`, real symmetric with zero diagonal.
    pub gamma2: DMatrix<f64>,
}

impl GammaTaylor {
    pub fn gamma0_complex(&self) -> CMatrix {
        self.gamma0.map(C64::from)
    }

    pub fn gamma2_complex(&self) -> CMatrix {
        self.gamma2.map(C64::from)
    }

    /// `Γ₀ + zΓ₁ + z²Γ₂`.
    pub fn evaluate(&self, z: C64) -> CMatrix {
        self.gamma0_complex() + self.gamma1.clone() * z + self.gamma2_complex() * (z * z)
    }
}

pub fn gamma_taylor(config: &Configuration) -> GammaTaylor {
    let n = config.len();
    let gamma0 = DMatrix::from_fn(n, n, |j, k| {
        if j == k {
            config.alphas[j]
        } else {
            -1.0 / (4.0 * PI * config.distance(j, k))
        }
    });
    let gamma1 = CMatrix::from_element(n, n, C64::new(0.0, -1.0 / (4.0 * PI)));
    let gamma2 = DMatrix::from_fn(n, n, |j, k| {
        if j == k {
            0.0
        } else {
            config.distance(j, k) / (8.0 * PI)
        }
    });
    GammaTaylor {
        gamma0,
        gamma1,
        gamma2,
    }
}
