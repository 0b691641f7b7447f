//! The resolvent `(−Δ_{α,Y} − z²)⁻¹` as a free kernel plus a rank-`N`
//! correction, and its singular coefficients at `z = 0`:
//! `(−Δ_{α,Y} − z²)⁻¹ = R₋₂/z² + R₋₁/z + R₀(z)`.

use std::f64::consts::PI;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::gamma::{gamma_matrix, green_at_distance};
use crate::laurent::LaurentExpansion;
use crate::linalg::{max_abs, singular_values};
use crate::{distance, CMatrix, CVector, Point, C64};

/// Functions spanning the range of a finite-rank kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Anchor {
    /// `e^{−λ|x−y|} / (4π|x−y|)`, i.e. `G_{iλ}^y`.
    Green { center: Point, lambda: f64 },
    Constant(C64),
}

impl Anchor {
    pub fn value(&self, x: &Point) -> Result<C64> {
        match *self {
            Anchor::Green { center, lambda } => {
                let r = distance(x, &center);
                if r == 0.0 {
                    return Err(Error::CoincidentPoints);
                }
                Ok(C64::from((-lambda * r).exp() / (4.0 * PI * r)))
            }
            Anchor::Constant(c) => Ok(c),
        }
    }
}

/// `Σ_{jk} M_{jk} |g_j⟩⟨conj g_k|`.
#[derive(Debug, Clone)]
pub struct RankNOperator {
    pub coefficient_matrix: CMatrix,
    pub left_anchors: Vec<Anchor>,
    pub right_anchors: Vec<Anchor>,
}

impl RankNOperator {
    pub fn new(coefficient_matrix: CMatrix, left_anchors: Vec<Anchor>, right_anchors: Vec<Anchor>) -> Result<Self> {
        if coefficient_matrix.nrows() != left_anchors.len() || coefficient_matrix.ncols() != right_anchors.len() {
            return Err(Error::InvalidArgument(format!(
                "{}×{} coefficient matrix with {} left and {} right anchors",
                coefficient_matrix.nrows(),
                coefficient_matrix.ncols(),
                left_anchors.len(),
                right_anchors.len()
            )));
        }
        Ok(Self { coefficient_matrix, left_anchors, right_anchors })
    }

    /// `Σ_{jk} M_{jk} g_j(x) g_k(x′)`.
    pub fn kernel(&self, x: &Point, xp: &Point) -> Result<C64> {
        let left: Vec<C64> = self.left_anchors.iter().map(|g| g.value(x)).collect::<Result<_>>()?;
        let right: Vec<C64> = self.right_anchors.iter().map(|g| g.value(xp)).collect::<Result<_>>()?;
        let mut sum = C64::from(0.0);
        for (j, lj) in left.iter().enumerate() {
            for (k, rk) in right.iter().enumerate() {
                sum += self.coefficient_matrix[(j, k)] * lj * rk;
            }
        }
        Ok(sum)
    }

    /// Coefficients, in the left-anchor basis, of the image of a function
    /// `f` given its pairings `p_k = ∫ g_k f`.
    pub fn act(&self, pairings: &CVector) -> Result<CVector> {
        if pairings.len() != self.right_anchors.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} pairings, got {}",
                self.right_anchors.len(),
                pairings.len()
            )));
        }
        Ok(&self.coefficient_matrix * pairings)
    }

    pub fn max_coefficient(&self) -> f64 {
        max_abs(&self.coefficient_matrix)
    }

    pub fn is_zero(&self, threshold: f64) -> bool {
        self.max_coefficient() <= threshold
    }
}

fn zero_energy_anchors(config: &Configuration) -> Vec<Anchor> {
    config
        .centers
        .iter()
        .map(|&center| Anchor::Green { center, lambda: 0.0 })
        .collect()
}

/// `R₋₂` and `R₋₁` from a Laurent expansion of `Γ(z)⁻¹`.
///
/// Expanding `G_z^y = G_0^y + iz/(4π) + O(z²)` in the rank-`N` correction,
/// `R₋₂` has coefficients `A₋₂` on the anchors `G_0^{y_j}`, and `R₋₁` lives on
/// the anchors `G_0^{y_1}, …, G_0^{y_N}, 1` with coefficient matrix
/// `[[A₋₁, κA₋₂𝟙], [κ𝟙ᵀA₋₂, 0]]`, `κ = i/(4π)`.
pub fn resolvent_coefficients(
    config: &Configuration,
    expansion: &LaurentExpansion,
) -> Result<(RankNOperator, RankNOperator)> {
    let n = config.len();
    let a2 = &expansion.a_minus2;
    let a1 = expansion
        .a_minus1
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("expansion lacks A₋₁; run the contour route".into()))?;
    if a2.nrows() != n || a1.nrows() != n {
        return Err(Error::InvalidArgument(format!("expansion is not {n}×{n}")));
    }
    let anchors = zero_energy_anchors(config);
    let r2 = RankNOperator::new(a2.clone(), anchors.clone(), anchors.clone())?;

    let kappa = C64::new(0.0, 1.0 / (4.0 * PI));
    let mut e = CMatrix::zeros(n + 1, n + 1);
    e.view_mut((0, 0), (n, n)).copy_from(a1);
    for j in 0..n {
        e[(j, n)] = kappa * a2.row(j).sum();
        e[(n, j)] = kappa * a2.column(j).sum();
    }
    let mut extended = anchors;
    extended.push(Anchor::Constant(C64::from(1.0)));
    let r1 = RankNOperator::new(e, extended.clone(), extended)?;
    Ok((r2, r1))
}

const SINGULAR_GAMMA: f64 = 1e-14;

/// Kernel of the resolvent, `G_z(x−x′) + Σ (Γ(z)⁻¹)_{jk} G_z^{y_j}(x) G_z^{y_k}(x′)`,
/// for `Im z > 0` or real `z ≠ 0`.
pub fn resolvent_kernel(config: &Configuration, z: C64, x: &Point, xp: &Point) -> Result<C64> {
    if z.im < 0.0 || z == C64::from(0.0) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::OutsideResolventDomain(z));
    }
    continued_kernel(config, z, x, xp)
}

/// The same formula evaluated for any `z` where `Γ(z)` is invertible: the
/// meromorphic continuation of the kernel.
pub(crate) fn continued_kernel(config: &Configuration, z: C64, x: &Point, xp: &Point) -> Result<C64> {
    for (j, y) in config.centers.iter().enumerate() {
        if x == y || xp == y {
            return Err(Error::CoincidentWithCenter(j));
        }
    }
    let r = distance(x, xp);
    if r == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let gamma = gamma_matrix(config, z);
    let sv = singular_values(&gamma);
    if sv[sv.len() - 1] <= SINGULAR_GAMMA * sv[0] {
        return Err(Error::GammaSingular(z));
    }
    let inv = gamma.try_inverse().ok_or(Error::GammaSingular(z))?;
    let inv = (&inv + inv.transpose()) * C64::from(0.5);
    let left = CVector::from_iterator(config.len(), config.centers.iter().map(|y| green_at_distance(z, distance(x, y))));
    let right = CVector::from_iterator(config.len(), config.centers.iter().map(|y| green_at_distance(z, distance(xp, y))));
    Ok(green_at_distance(z, r) + (left.transpose() * inv * right)[(0, 0)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{laurent, LaurentMethod};
    use crate::registry;
    use crate::zero_modes::classify_zero_energy;

    const X: Point = [0.7, -0.3, 0.4];
    const XP: Point = [-0.5, 0.9, 1.3];

    fn coefficients(c: &Configuration) -> (RankNOperator, RankNOperator) {
        let l = laurent(c, LaurentMethod::Both, 1e-10).unwrap();
        resolvent_coefficients(c, &l).unwrap()
    }

    #[test]
    fn single_zero_kernel_at_i() {
        let c = registry::get("single", &[0.0]).unwrap();
        let v = resolvent_kernel(&c, C64::new(0.0, 1.0), &[1.0, 0.0, 0.0], &[-1.0, 0.0, 0.0]).unwrap();
        let e1 = (-1.0f64).exp() / (4.0 * PI);
        let expected = (-2.0f64).exp() / (8.0 * PI) + 4.0 * PI * e1 * e1;
        assert!((v.re - expected).abs() < 1e-15 && v.im.abs() < 1e-15);
        assert!((v.re - 0.0161545).abs() < 1e-7);
    }

    #[test]
    fn kernel_is_symmetric() {
        for e in registry::entries() {
            let c = e.default_config();
            for z in [C64::new(0.3, 0.2), C64::new(1.7, 0.0), C64::new(0.0, 0.05)] {
                let a = resolvent_kernel(&c, z, &X, &XP).unwrap();
                let b = resolvent_kernel(&c, z, &XP, &X).unwrap();
                assert!((a - b).norm() <= 1e-13 * a.norm().max(1.0), "{} {z}: {a} {b}", e.name);
            }
        }
    }

    #[test]
    fn strong_coupling_decouples() {
        let c = registry::get("single", &[1e6]).unwrap();
        let z = C64::new(0.0, 1.0);
        let v = resolvent_kernel(&c, z, &X, &XP).unwrap();
        let free = green_at_distance(z, distance(&X, &XP));
        assert!((v - free).norm() < 1e-5);
    }

    #[test]
    fn domain_errors() {
        let c = registry::get("two_center", &[1.0]).unwrap();
        assert!(matches!(
            resolvent_kernel(&c, C64::new(0.1, -0.1), &X, &XP),
            Err(Error::OutsideResolventDomain(_))
        ));
        assert!(matches!(
            resolvent_kernel(&c, C64::new(0.0, 1.0), &c.centers[1], &XP),
            Err(Error::CoincidentWithCenter(1))
        ));
        assert!(matches!(
            resolvent_kernel(&c, C64::new(0.0, 1.0), &X, &X),
            Err(Error::CoincidentPoints)
        ));
        let single = registry::get("single", &[-1.0]).unwrap();
        assert!(matches!(
            resolvent_kernel(&single, C64::new(0.0, 4.0 * PI), &X, &XP),
            Err(Error::GammaSingular(_))
        ));
    }

    #[test]
    fn regular_point_has_no_singular_part() {
        let c = registry::get("single", &[0.5]).unwrap();
        let (r2, r1) = coefficients(&c);
        assert!(r2.is_zero(1e-9) && r1.is_zero(1e-9));
    }

    #[test]
    fn r_minus2_tracks_zero_eigenvalues() {
        for e in registry::entries() {
            let c = e.default_config();
            let (r2, _) = coefficients(&c);
            let report = classify_zero_energy(&c, 1e-10);
            assert_eq!(!r2.is_zero(1e-9), report.e > 0, "{}", e.name);
        }
    }

    #[test]
    fn resonance_gives_r_minus1() {
        let c = registry::get("single", &[0.0]).unwrap();
        let (r2, r1) = coefficients(&c);
        assert!(r2.is_zero(1e-9));
        assert!((r1.coefficient_matrix[(0, 0)] - C64::new(0.0, 4.0 * PI)).norm() < 1e-10);
        // 4πi · 1/(4π|x|) · 1/(4π|x′|)
        let expected = C64::new(0.0, 1.0 / (4.0 * PI * distance(&X, &[0.0; 3]) * distance(&XP, &[0.0; 3])));
        assert!((r1.kernel(&X, &XP).unwrap() - expected).norm() < 1e-12);
    }

    #[test]
    fn act_and_kernel_share_coefficients() {
        let c = registry::get("two_center", &[1.0]).unwrap();
        let (r2, _) = coefficients(&c);
        let p = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let image = r2.act(&p).unwrap();
        assert!((image - r2.coefficient_matrix.column(0)).norm() < 1e-15);
        assert!(r2.act(&CVector::zeros(3)).is_err());
    }

    /// `(1/2πi)∮ z^{−k−1} R(z) dz` on a circle, from the continued kernel.
    fn kernel_contour(c: &Configuration, k: i32, radius: f64) -> C64 {
        let nodes = 256;
        (0..nodes)
            .map(|m| {
                let z = C64::from_polar(radius, 2.0 * PI * (m as f64 + 0.5) / nodes as f64);
                continued_kernel(c, z, &X, &XP).unwrap() * z.powi(-k)
            })
            .sum::<C64>()
            / nodes as f64
    }

    #[test]
    fn singular_coefficients_match_kernel_contour() {
        for e in registry::entries() {
            let c = e.default_config();
            let l = laurent(&c, LaurentMethod::Both, 1e-10).unwrap();
            let (r2, r1) = resolvent_coefficients(&c, &l).unwrap();
            let radius = l.radius.unwrap();
            let k2 = kernel_contour(&c, -2, radius);
            let k1 = kernel_contour(&c, -1, radius);
            assert!((r2.kernel(&X, &XP).unwrap() - k2).norm() < 1e-9, "{}", e.name);
            assert!((r1.kernel(&X, &XP).unwrap() - k1).norm() < 1e-9, "{}", e.name);
        }
    }

    #[test]
    fn r_minus1_matches_symmetric_difference() {
        // S(h) = ¼ Σ_{z ∈ {±h, ±ih}} (z²R(z) − R₋₂)/z = R₋₁ + O(h⁴), then one Richardson step.
        for e in registry::entries() {
            let c = e.default_config();
            let (r2, r1) = coefficients(&c);
            let k2 = r2.kernel(&X, &XP).unwrap();
            let stencil = |h: f64| {
                [C64::new(h, 0.0), C64::new(0.0, h), C64::new(-h, 0.0), C64::new(0.0, -h)]
                    .iter()
                    .map(|&z| (z * z * continued_kernel(&c, z, &X, &XP).unwrap() - k2) / z)
                    .sum::<C64>()
                    / 4.0
            };
            let h = laurent(&c, LaurentMethod::Contour, 1e-10).unwrap().radius.unwrap().min(0.3) * 0.3;
            let estimate = (16.0 * stencil(h / 2.0) - stencil(h)) / 15.0;
            let exact = r1.kernel(&X, &XP).unwrap();
            assert!((estimate - exact).norm() < 1e-8 * exact.norm().max(1.0), "{}: {estimate} vs {exact}", e.name);
        }
    }

}
