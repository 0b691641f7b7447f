//! Negative eigenvalues of `-Δ_{α,Y}`.
//!
//! A negative eigenvalue `−λ²` corresponds to a singular `Γ(iλ)`, `λ > 0`.
//! On the imaginary axis `Γ(iλ)` is real symmetric and its derivative in `λ`
//! is positive definite, so each sorted eigenvalue branch increases
//! monotonically. A branch that starts negative at `λ = 0` crosses zero
//! exactly once; that crossing is bracketed on a scan grid and bisected.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::gamma::{gamma_imaginary_axis, gamma_imaginary_axis_derivative};
use crate::linalg::{complexify, svd_sorted};
use crate::{distance, CVector, Point};

const SCAN_POINTS: usize = 256;
const BISECTION_WIDTH: f64 = 1e-12;
const MERGE_DISTANCE: f64 = 1e-8;

/// A negative eigenvalue `−λ²` with its eigenspace, given as coefficient
/// vectors `c` of `ψ = Σ c_j G_{iλ}^{y_j}`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundState {
    pub lambda: f64,
    pub energy: f64,
    pub multiplicity: usize,
    /// Orthonormal basis of `Ker Γ(iλ)`.
    #[serde(skip)]
    pub coefficient_basis: Vec<CVector>,
}

impl BoundState {
    pub fn eigenfunction(&self, config: &Configuration, index: usize) -> EigenfunctionRep {
        EigenfunctionRep {
            lambda: self.lambda,
            coefficients: self.coefficient_basis[index].clone(),
            centers: config.centers.clone(),
        }
    }
}

/// Result of a bound-state search.
#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    pub lambda_max: f64,
    /// Sorted by increasing `λ`.
    pub states: Vec<BoundState>,
    /// Non-fatal observations (monotonicity violations, multiplicity fixes).
    pub diagnostics: Vec<String>,
}

impl Spectrum {
    /// Number of negative eigenvalues counted with multiplicity.
    pub fn count(&self) -> usize {
        self.states.iter().map(|s| s.multiplicity).sum()
    }
}

/// `4π(max|α_j| + 1) + 4π·N·max_{j≠k} G_0^{y_j y_k}`, beyond which `Γ(iλ)`
/// is diagonally dominant with positive diagonal.
pub fn default_lambda_max(config: &Configuration) -> f64 {
    let n = config.len();
    let max_alpha = config.alphas.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let max_green = if n > 1 {
        1.0 / (4.0 * PI * config.min_separation())
    } else {
        0.0
    };
    4.0 * PI * (max_alpha + 1.0) + n as f64 * max_green * 4.0 * PI
}

fn sorted_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = order.len();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

fn branch_value(config: &Configuration, branch: usize, lambda: f64) -> f64 {
    sorted_eigen(gamma_imaginary_axis(config, lambda)).0[branch]
}

fn refine_root(config: &Configuration, branch: usize, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        if hi - lo <= BISECTION_WIDTH {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if branch_value(config, branch, mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    // one Newton step on the branch: μ'(λ) = vᵀ ∂_λΓ v
    let (values, vectors) = sorted_eigen(gamma_imaginary_axis(config, lambda));
    let v: DVector<f64> = vectors.column(branch).into_owned();
    let slope = v.dot(&(gamma_imaginary_axis_derivative(config, lambda) * &v));
    let newton = lambda - values[branch] / slope;
    if slope > 0.0 && newton.is_finite() && (newton - lambda).abs() <= hi - lo {
        newton
    } else {
        lambda
    }
}

/// Finds every `λ ∈ (0, lambda_max]` at which `Γ(iλ)` is singular.
///
/// `tol` is the relative singular-value tolerance used to decide which
/// branches start at zero (zero-energy modes, excluded) and to read off the
/// multiplicity at each root.
pub fn find_negative_eigenvalues(
    config: &Configuration,
    lambda_max: f64,
    tol: f64,
) -> Result<Spectrum> {
    if !(lambda_max > 0.0 && lambda_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "lambda_max must be positive, got {lambda_max}"
        )));
    }
    let n = config.len();
    let mut diagnostics = Vec::new();
    let grid: Vec<f64> = (0..=SCAN_POINTS)
        .map(|m| lambda_max * m as f64 / SCAN_POINTS as f64)
        .collect();
    let samples: Vec<Vec<f64>> = grid
        .iter()
        .map(|&l| sorted_eigen(gamma_imaginary_axis(config, l)).0)
        .collect();

    let scale0 = samples[0].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let zero_threshold = tol * scale0;

    let mut roots = Vec::new();
    for branch in 0..n {
        for m in 1..grid.len() {
            let (prev, next) = (samples[m - 1][branch], samples[m][branch]);
            let slack = 1e-13 * (1.0 + prev.abs().max(next.abs()));
            if next < prev - slack {
                diagnostics.push(format!(
                    "branch {branch} decreases between λ = {:.6} and λ = {:.6}",
                    grid[m - 1],
                    grid[m]
                ));
            }
        }
        if samples[0][branch] >= -zero_threshold {
            continue;
        }
        if samples[SCAN_POINTS][branch] <= 0.0 {
            return Err(Error::BranchNotBracketed { branch, lambda_max });
        }
        let m = (1..grid.len())
            .find(|&m| samples[m][branch] > 0.0)
            .expect("positive at lambda_max");
        roots.push(refine_root(config, branch, grid[m - 1], grid[m]));
    }
    roots.sort_by(f64::total_cmp);

    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for r in roots {
        match clusters.last_mut() {
            Some(c) if r - c[c.len() - 1] < MERGE_DISTANCE => c.push(r),
            _ => clusters.push(vec![r]),
        }
    }

    let mut states = Vec::with_capacity(clusters.len());
    for cluster in clusters {
        let lambda = cluster.iter().sum::<f64>() / cluster.len() as f64;
        let (values, vectors) = svd_sorted(&complexify(&gamma_imaginary_axis(config, lambda)));
        let counted = values.iter().filter(|&&s| s <= tol * values[0]).count();
        let multiplicity = if counted < cluster.len() {
            diagnostics.push(format!(
                "at λ = {lambda}: {} branches cross but only {counted} singular values fall below tolerance",
                cluster.len()
            ));
            cluster.len()
        } else {
            counted
        };
        let coefficient_basis = (n - multiplicity..n)
            .map(|i| crate::linalg::normalize_phase(vectors.column(i).into_owned()))
            .collect();
        states.push(BoundState {
            lambda,
            energy: -lambda * lambda,
            multiplicity,
            coefficient_basis,
        });
    }

    Ok(Spectrum {
        lambda_max,
        states,
        diagnostics,
    })
}

/// An eigenfunction `ψ = Σ c_j G_{iλ}^{y_j}` (`λ = 0` gives a zero mode).
#[derive(Debug, Clone)]
pub struct EigenfunctionRep {
    pub lambda: f64,
    pub coefficients: CVector,
    pub centers: Vec<Point>,
}

impl EigenfunctionRep {
    /// `‖ψ‖²` from the Gram matrix of the anchors; requires `λ > 0`.
    pub fn norm_squared(&self) -> f64 {
        let n = self.centers.len();
        let mut acc = 0.0;
        for j in 0..n {
            for k in 0..n {
                let g = gram_inner(self.lambda, &self.centers[j], &self.centers[k]);
                acc += (self.coefficients[j].conj() * self.coefficients[k]).re * g;
            }
        }
        acc
    }
}

/// `ψ(x) = Σ_j c_j e^{−λ|x−y_j|} / (4π|x−y_j|)`.
pub fn evaluate_bound_state(rep: &EigenfunctionRep, x: &Point) -> Result<crate::C64> {
    let mut acc = crate::C64::new(0.0, 0.0);
    for (j, (y, c)) in rep.centers.iter().zip(rep.coefficients.iter()).enumerate() {
        let r = distance(x, y);
        if r == 0.0 {
            return Err(Error::CoincidentWithCenter(j));
        }
        acc += c * ((-rep.lambda * r).exp() / (4.0 * PI * r));
    }
    Ok(acc)
}

/// `⟨G_{iλ}^a, G_{iλ}^b⟩_{L²} = e^{−λ|a−b|} / (8πλ)`.
pub fn gram_inner(lambda: f64, a: &Point, b: &Point) -> f64 {
    (-lambda * distance(a, b)).exp() / (8.0 * PI * lambda)
}
