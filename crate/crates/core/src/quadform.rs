//! The quadratic form of `Γ₂` on sum-zero vectors and its reduction to
//! one-dimensional projected forms averaged over the unit sphere.
//!
//! For `Σ v_j = 0`, `⟨Γ₂v, v⟩ = (8π)⁻¹ Σ |y_j − y_k| v_j v_k`, and
//! `∫_{S²} |⟨w, y⟩| dw = c|y|` turns the distance form into an average of
//! forms `Σ |ỹ_j − ỹ_k| v_j v_k` on lines, each of which is `≤ 0`.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};
use crate::{distance, Point};

const SUM_TOL: f64 = 1e-12;

fn check_lengths(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::InvalidArgument(format!("{expected} centers but {got} vector components")));
    }
    Ok(())
}

/// `(8π)⁻¹ Σ_{jk} |y_j − y_k| v_j v_k`.
pub fn gamma2_form(centers: &[Point], v: &[f64]) -> Result<f64> {
    check_lengths(centers.len(), v.len())?;
    let mut sum = 0.0;
    for j in 0..v.len() {
        for k in j + 1..v.len() {
            sum += 2.0 * distance(&centers[j], &centers[k]) * v[j] * v[k];
        }
    }
    Ok(sum / (8.0 * PI))
}

/// `Σ_{jk} |ỹ_j − ỹ_k| v_j v_k` for points `ỹ` on a line and `Σ v = 0`,
/// computed as `−2 Σ_gaps (gap length)·(sum of v above the gap)²`.
pub fn projected_form_oracle(projected: &[f64], v: &[f64]) -> Result<f64> {
    check_lengths(projected.len(), v.len())?;
    let total: f64 = v.iter().sum();
    let scale: f64 = v.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
    if total.abs() > SUM_TOL * scale {
        return Err(Error::SumNotZero(total));
    }
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| projected[a].total_cmp(&projected[b]));
    let mut above = total;
    let mut form = 0.0;
    for pair in order.windows(2) {
        above -= v[pair[0]];
        let gap = projected[pair[1]] - projected[pair[0]];
        form -= 2.0 * gap * above * above;
    }
    Ok(form)
}

/// A product rule on `S²`: Gauss–Legendre in `cos θ` on `[−1, 0]` and
/// `[0, 1]` separately, uniform in azimuth with `2·order` points.
#[derive(Debug, Clone)]
pub struct SphereRule {
    pub nodes: Vec<(Point, f64)>,
}

impl SphereRule {
    /// Rule with polar axis along `axis`.
    pub fn aligned(order: usize, axis: Point) -> Result<Self> {
        if order < 8 {
            return Err(Error::InvalidArgument(format!("quadrature order must be at least 8, got {order}")));
        }
        let (e3, e1, e2) = frame(axis)?;
        let half = NonZeroUsize::new(order / 2).expect("order ≥ 8");
        let gl = GaussLegendre::new(half);
        let azimuths = 2 * order;
        let dphi = 2.0 * PI / azimuths as f64;
        let mut nodes = Vec::with_capacity(order * azimuths);
        for &(x, w) in gl.as_node_weight_pairs() {
            // [−1, 1] → [−1, 0] and [0, 1]
            for t in [0.5 * (x - 1.0), 0.5 * (x + 1.0)] {
                let s = (1.0 - t * t).max(0.0).sqrt();
                for m in 0..azimuths {
                    let phi = (m as f64 + 0.5) * dphi;
                    let (sp, cp) = phi.sin_cos();
                    let w3 = std::array::from_fn(|i| t * e3[i] + s * (cp * e1[i] + sp * e2[i]));
                    nodes.push((w3, 0.5 * w * dphi));
                }
            }
        }
        Ok(Self { nodes })
    }

    /// Rule with polar axis along `e₃`.
    pub fn fixed(order: usize) -> Result<Self> {
        Self::aligned(order, [0.0, 0.0, 1.0])
    }

    pub fn integrate(&self, mut f: impl FnMut(&Point) -> f64) -> f64 {
        self.nodes.iter().map(|(w, weight)| weight * f(w)).sum()
    }
}

/// Orthonormal frame `(ŷ, e₁, e₂)`.
fn frame(axis: Point) -> Result<(Point, Point, Point)> {
    let norm = distance(&axis, &[0.0; 3]);
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::InvalidArgument("quadrature axis must be a nonzero vector".into()));
    }
    let e3 = axis.map(|a| a / norm);
    let helper = if e3[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = normalize(cross(helper, e3));
    let e2 = cross(e3, e1);
    Ok((e3, e1, e2))
}

fn cross(a: Point, b: Point) -> Point {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: &Point, b: &Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn normalize(a: Point) -> Point {
    let n = dot(&a, &a).sqrt();
    a.map(|x| x / n)
}

/// `∫_{S²} |⟨w, y⟩| dw` on a rule aligned with `y`, so that the kink of the
/// integrand falls on the split of the polar rule.
pub fn sphere_average(order: usize, y: Point) -> Result<f64> {
    let rule = SphereRule::aligned(order, y)?;
    Ok(rule.integrate(|w| dot(w, &y).abs()))
}

/// The constant `c` in `∫_{S²} |⟨w, y⟩| dw = c|y|`; exactly `2π`.
pub fn sphere_average_constant(order: usize) -> Result<f64> {
    sphere_average(order, [0.0, 0.0, 1.0])
}

/// `(8πc)⁻¹ ∫_{S²} Σ |⟨w, y_j − y_k⟩| v_j v_k dw` with the projected forms
/// evaluated by [`projected_form_oracle`] on a fixed rule.
pub fn averaged_projected_form(centers: &[Point], v: &[f64], order: usize) -> Result<f64> {
    check_lengths(centers.len(), v.len())?;
    let c = sphere_average_constant(order)?;
    let rule = SphereRule::fixed(order)?;
    let mut total = 0.0;
    for (w, weight) in &rule.nodes {
        let projected: Vec<f64> = centers.iter().map(|y| dot(w, y)).collect();
        total += weight * projected_form_oracle(&projected, v)?;
    }
    Ok(total / (8.0 * PI * c))
}
