//! Laurent expansion of `Γ(z)⁻¹` at `z = 0`:
//! `Γ(z)⁻¹ = A₋₂/z² + A₋₁/z + O(1)`.
//!
//! Two independent routes are provided. The closed form reduces the singular
//! part to inverses of `PΓ₁P` or `PΓ₂P` on the range of a kernel projection
//! `P`; the contour route integrates `Γ(z)⁻¹ z^{−k−1}` numerically around a
//! small circle.

use std::f64::consts::PI;

use serde::Serialize;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::gamma::{gamma_matrix, gamma_taylor, gamma_taylor_coefficient};
use crate::linalg::{complexify, max_abs, nullspace, singular_values, split_kernel, svd_sorted};
use crate::spectrum::{default_lambda_max, find_negative_eigenvalues};
use crate::{CMatrix, C64};

/// Condition number above which `A + P` counts as singular.
const MAX_CONDITION: f64 = 1e12;
const BLOCK_TOL: f64 = 1e-10;

/// Inverts `A` through the Jensen–Nenciu reduction
/// `A⁻¹ = (A+P)⁻¹ + (A+P)⁻¹ P (B↾PH)⁻¹ P (A+P)⁻¹`, `B = P − P(A+P)⁻¹P`,
/// where `P` is an orthogonal projection with `A + P` invertible.
pub fn jn_invert(a: &CMatrix, p: &CMatrix) -> Result<CMatrix> {
    let shifted = a + p;
    let sv = singular_values(&shifted);
    let (top, bottom) = (sv[0], sv[sv.len() - 1]);
    if bottom == 0.0 || top / bottom > MAX_CONDITION {
        return Err(Error::APlusPSingular(if bottom == 0.0 {
            f64::INFINITY
        } else {
            top / bottom
        }));
    }
    let shifted_inv = shifted
        .try_inverse()
        .ok_or(Error::APlusPSingular(f64::INFINITY))?;

    // orthonormal basis of range(P): right singular vectors with σ ≈ 1
    let (p_sv, p_vectors) = svd_sorted(p);
    let rank = p_sv.iter().filter(|&&s| s > 0.5).count();
    if rank == 0 {
        return Ok(shifted_inv);
    }
    let q = p_vectors.columns(0, rank).into_owned();
    let b_restricted = CMatrix::identity(rank, rank) - q.adjoint() * &shifted_inv * &q;
    let b_sv = singular_values(&b_restricted);
    if b_sv[rank - 1] <= BLOCK_TOL * b_sv[0].max(1.0) {
        return Err(Error::BSingular);
    }
    let b_inv = b_restricted.try_inverse().ok_or(Error::BSingular)?;
    Ok(&shifted_inv + &shifted_inv * &q * b_inv * q.adjoint() * &shifted_inv)
}

/// Which structure the singular part of `Γ(z)⁻¹` has.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SingularCase {
    /// `Γ₀` invertible.
    Regular,
    /// `Ker Γ₀ ≠ {0}`, `Ker Γ₀ ∩ Ker Γ₁ = {0}`: simple pole.
    SimplePole,
    /// `Ker Γ₀ ⊆ Ker Γ₁`, nontrivial: double pole, eigenvalue only.
    DoublePole,
    /// `Ker Γ₀ ∩ Ker Γ₁ ≠ {0}` and `Ker Γ₀ ⊄ Ker Γ₁`.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LaurentMethod {
    ClosedForm,
    Contour,
    Both,
}

impl std::str::FromStr for LaurentMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" | "closed_form" => Ok(LaurentMethod::ClosedForm),
            "contour" => Ok(LaurentMethod::Contour),
            "both" => Ok(LaurentMethod::Both),
            other => Err(Error::InvalidArgument(format!("unknown method `{other}`"))),
        }
    }
}

/// Largest entry differences between the closed form and the contour route.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Discrepancy {
    pub a_minus2: f64,
    /// `None` when the closed form does not provide `A₋₁`.
    pub a_minus1: Option<f64>,
}

impl Discrepancy {
    pub fn max(&self) -> f64 {
        self.a_minus2.max(self.a_minus1.unwrap_or(0.0))
    }
}

#[derive(Debug, Clone)]
pub struct LaurentExpansion {
    pub case: SingularCase,
    pub a_minus2: CMatrix,
    /// Missing only for the closed form in the mixed case.
    pub a_minus1: Option<CMatrix>,
    /// Samples of `Γ(z)⁻¹ − A₋₂/z² − A₋₁/z`.
    pub regular_sample: Vec<(C64, CMatrix)>,
    /// Contour radius, when the contour route ran.
    pub radius: Option<f64>,
    pub method: LaurentMethod,
    pub discrepancy: Option<Discrepancy>,
}

/// Determines the singular case at relative tolerance `tol`.
pub fn singular_case(config: &Configuration, tol: f64) -> SingularCase {
    let taylor = gamma_taylor(config);
    let kernel0 = nullspace(&complexify(&taylor.gamma0), tol);
    let (eigen, rest) = split_kernel(&kernel0, &taylor.gamma1, tol);
    match (eigen.dim() > 0, !rest.is_empty()) {
        (false, false) => SingularCase::Regular,
        (false, true) => SingularCase::SimplePole,
        (true, false) => SingularCase::DoublePole,
        (true, true) => SingularCase::Mixed,
    }
}

/// `Q (Q* M Q)⁻¹ Q*`: the inverse of `PMP` on `range P`, `P = QQ*`,
/// extended by zero.
fn restricted_inverse(q: &CMatrix, m: &CMatrix, order: usize) -> Result<CMatrix> {
    let block = q.adjoint() * m * q;
    let sv = singular_values(&block);
    if sv.is_empty() || sv[sv.len() - 1] <= BLOCK_TOL * sv[0] {
        return Err(Error::RestrictedBlockSingular { order });
    }
    let inv = block
        .try_inverse()
        .ok_or(Error::RestrictedBlockSingular { order })?;
    Ok(q * inv * q.adjoint())
}

/// `A₋₂` and, where available, `A₋₁` from the kernel structure of the
/// Taylor coefficients.
///
/// * simple pole: `A₋₁ = P(PΓ₁P)⁻¹P`, `P` onto `Ker Γ₀`;
/// * double pole: `A₋₂ = P(PΓ₂P)⁻¹P`, `P` onto `Ker Γ₀ ∩ Ker Γ₁`, and
///   `A₋₁ = −A₋₂ Γ₃ A₋₂`; the cubic Taylor term contributes at order `z⁻¹`
///   because the off-diagonal blocks of the Schur complement start at `z²`;
/// * mixed: `A₋₂` as above, `A₋₁` left to the contour route.
pub fn laurent_closed_form(config: &Configuration, tol: f64) -> Result<LaurentExpansion> {
    let n = config.len();
    let taylor = gamma_taylor(config);
    let kernel0 = nullspace(&complexify(&taylor.gamma0), tol);
    let (eigen, rest) = split_kernel(&kernel0, &taylor.gamma1, tol);
    let zero = CMatrix::zeros(n, n);
    let (case, a_minus2, a_minus1) = if kernel0.is_trivial() {
        (SingularCase::Regular, zero.clone(), Some(zero))
    } else if eigen.is_trivial() {
        let a1 = restricted_inverse(&kernel0.basis_matrix(), &taylor.gamma1, 1)?;
        (SingularCase::SimplePole, zero, Some(a1))
    } else {
        let a2 = restricted_inverse(&eigen.basis_matrix(), &taylor.gamma2_complex(), 2)?;
        if rest.is_empty() {
            let gamma3 = gamma_taylor_coefficient(config, 3);
            let a1 = -(&a2 * gamma3 * &a2);
            (SingularCase::DoublePole, a2, Some(a1))
        } else {
            (SingularCase::Mixed, a2, None)
        }
    };
    let radius = default_contour_radius(config);
    let regular_sample = match &a_minus1 {
        Some(a1) => sample_remainder(config, &a_minus2, a1, radius),
        None => Vec::new(),
    };
    Ok(LaurentExpansion {
        case,
        a_minus2,
        a_minus1,
        regular_sample,
        radius: None,
        method: LaurentMethod::ClosedForm,
        discrepancy: None,
    })
}

fn sample_remainder(config: &Configuration, a2: &CMatrix, a1: &CMatrix, radius: f64) -> Vec<(C64, CMatrix)> {
    [C64::new(0.5, 0.0), C64::new(0.0, 0.5), C64::new(-0.5, 0.0), C64::new(0.0, -0.5)]
        .iter()
        .filter_map(|&u| {
            let z = u * radius;
            let inv = gamma_matrix(config, z).try_inverse()?;
            Some((z, inv - a2 / (z * z) - a1 / z))
        })
        .collect()
}

/// Starting contour radius: half the distance to the nearest bound-state
/// pole `iλ`, capped at `0.5 / diameter` (or 0.5 for a single center).
pub fn default_contour_radius(config: &Configuration) -> f64 {
    let diameter = config.diameter();
    let cap = if diameter > 0.0 { 0.5 / diameter } else { 0.5 };
    match find_negative_eigenvalues(config, default_lambda_max(config), crate::DEFAULT_TOL) {
        Ok(s) => s
            .states
            .first()
            .map(|st| (0.5 * st.lambda).min(cap))
            .unwrap_or(cap),
        Err(_) => cap,
    }
}

struct ContourPass {
    coefficients: [CMatrix; 3],
    /// Winding number of `det Γ` around the circle: the number of zeros of
    /// `det Γ` inside it.
    winding: i64,
}

/// Trapezoidal approximations of `A₋₂, A₋₁, A₀` on the circle `|z| = radius`.
fn contour_pass(config: &Configuration, radius: f64, nodes: usize) -> Result<ContourPass> {
    let n = config.len();
    let mut acc = [CMatrix::zeros(n, n), CMatrix::zeros(n, n), CMatrix::zeros(n, n)];
    let mut phase = 0.0;
    let mut last_det: Option<C64> = None;
    let mut first_det = None;
    for m in 0..nodes {
        let theta = 2.0 * PI * (m as f64 + 0.5) / nodes as f64;
        let z = C64::from_polar(radius, theta);
        let gamma = gamma_matrix(config, z);
        let sv = singular_values(&gamma);
        if sv[sv.len() - 1] <= 1e-13 * sv[0] {
            return Err(Error::SingularOnContour(radius));
        }
        let det = gamma.determinant();
        if let Some(prev) = last_det {
            phase += (det / prev).arg();
        } else {
            first_det = Some(det);
        }
        last_det = Some(det);
        let inv = gamma
            .try_inverse()
            .ok_or(Error::SingularOnContour(radius))?;
        // A_k = (1/n) Σ Γ(z_m)⁻¹ z_m^{−k}
        acc[0] += &inv * (z * z);
        acc[1] += &inv * z;
        acc[2] += inv;
    }
    if let (Some(first), Some(last)) = (first_det, last_det) {
        phase += (first / last).arg();
    }
    let scale = 1.0 / nodes as f64;
    Ok(ContourPass {
        coefficients: acc.map(|a| a * C64::from(scale)),
        winding: (phase / (2.0 * PI)).round() as i64,
    })
}

const MAX_HALVINGS: usize = 8;
const AGREEMENT: f64 = 1e-9;
pub const DEFAULT_NODES: usize = 256;

/// Contour coefficients at an accepted radius.
#[derive(Debug, Clone)]
pub struct ContourCoefficients {
    pub radius: f64,
    pub a_minus2: CMatrix,
    pub a_minus1: CMatrix,
    pub a0: CMatrix,
    /// Zeros of `det Γ` enclosed by the accepted circle, with multiplicity.
    pub enclosed_zeros: i64,
}

impl ContourCoefficients {
    pub fn get(&self, k: i32) -> &CMatrix {
        match k {
            -2 => &self.a_minus2,
            -1 => &self.a_minus1,
            _ => &self.a0,
        }
    }
}

/// Runs the contour extraction, halving the radius until two successive
/// circles enclose the same zeros of `det Γ` and agree on `A₋₂` and `A₋₁`.
/// The larger of the two circles is reported.
pub fn contour_coefficients(config: &Configuration, radius: f64, nodes: usize) -> Result<ContourCoefficients> {
    if nodes < 64 {
        return Err(Error::InvalidArgument(format!("need at least 64 nodes, got {nodes}")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    let mut r = radius;
    let mut outer = contour_pass(config, r, nodes)?;
    for _ in 0..MAX_HALVINGS {
        let inner = contour_pass(config, 0.5 * r, nodes)?;
        let agree = inner.winding == outer.winding
            && (0..2).all(|i| {
                let scale = max_abs(&inner.coefficients[i]).max(1.0);
                max_abs(&(&inner.coefficients[i] - &outer.coefficients[i])) <= AGREEMENT * scale
            });
        if agree {
            let [a_minus2, a_minus1, a0] = outer.coefficients;
            return Ok(ContourCoefficients {
                radius: r,
                a_minus2,
                a_minus1,
                a0,
                enclosed_zeros: outer.winding,
            });
        }
        r *= 0.5;
        outer = inner;
    }
    Err(Error::NoConvergence(MAX_HALVINGS))
}

/// The Laurent coefficient `A_k`, `k ∈ {−2, −1, 0}`, by trapezoidal
/// quadrature of `(1/2πi)∮ Γ(z)⁻¹ z^{−k−1} dz`.
pub fn laurent_contour(config: &Configuration, k: i32, radius: f64, nodes: usize) -> Result<CMatrix> {
    if !(-2..=0).contains(&k) {
        return Err(Error::InvalidArgument(format!("k must be -2, -1 or 0, got {k}")));
    }
    Ok(contour_coefficients(config, radius, nodes)?.get(k).clone())
}

/// Expansion via the requested route(s).
pub fn laurent(config: &Configuration, method: LaurentMethod, tol: f64) -> Result<LaurentExpansion> {
    let contour = || contour_coefficients(config, default_contour_radius(config), DEFAULT_NODES);
    match method {
        LaurentMethod::ClosedForm => laurent_closed_form(config, tol),
        LaurentMethod::Contour => {
            let c = contour()?;
            let regular_sample = sample_remainder(config, &c.a_minus2, &c.a_minus1, c.radius);
            Ok(LaurentExpansion {
                case: singular_case(config, tol),
                a_minus2: c.a_minus2,
                a_minus1: Some(c.a_minus1),
                regular_sample,
                radius: Some(c.radius),
                method,
                discrepancy: None,
            })
        }
        LaurentMethod::Both => {
            let mut closed = laurent_closed_form(config, tol)?;
            let c = contour()?;
            let discrepancy = Discrepancy {
                a_minus2: max_abs(&(&closed.a_minus2 - &c.a_minus2)),
                a_minus1: closed.a_minus1.as_ref().map(|a| max_abs(&(a - &c.a_minus1))),
            };
            if closed.a_minus1.is_none() {
                closed.regular_sample = sample_remainder(config, &closed.a_minus2, &c.a_minus1, c.radius);
                closed.a_minus1 = Some(c.a_minus1);
            }
            closed.radius = Some(c.radius);
            closed.method = method;
            closed.discrepancy = Some(discrepancy);
            Ok(closed)
        }
    }
}

/// `sup_{|z| = radius} max_{jk} |Γ(z)⁻¹ − A₋₂/z² − A₋₁/z|`.
pub fn remainder_sup(config: &Configuration, a2: &CMatrix, a1: &CMatrix, radius: f64, nodes: usize) -> f64 {
    (0..nodes)
        .filter_map(|m| {
            let z = C64::from_polar(radius, 2.0 * PI * m as f64 / nodes as f64);
            let inv = gamma_matrix(config, z).try_inverse()?;
            Some(max_abs(&(inv - a2 / (z * z) - a1 / z)))
        })
        .fold(0.0, f64::max)
}
