//! Rank-revealing kernel computations on complex matrices.

use nalgebra::DMatrix;

use crate::{CMatrix, CVector, C64};

/// Orthonormal basis of a numerical kernel.
#[derive(Debug, Clone)]
pub struct Nullspace {
    /// Relative tolerance the kernel was computed at.
    pub tolerance: f64,
    /// Dimension of the ambient space.
    pub dim_ambient: usize,
    pub basis: Vec<CVector>,
    /// Singular values of the matrix the kernel was extracted from,
    /// descending.
    pub singular_values: Vec<f64>,
}

impl Nullspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    /// Basis vectors as the columns of an `N×k` matrix.
    pub fn basis_matrix(&self) -> CMatrix {
        let mut q = CMatrix::zeros(self.dim_ambient, self.dim());
        for (i, v) in self.basis.iter().enumerate() {
            q.set_column(i, v);
        }
        q
    }

    /// Orthogonal projection onto the kernel.
    pub fn projector(&self) -> CMatrix {
        let q = self.basis_matrix();
        &q * q.adjoint()
    }
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.norm()))
}

/// Complexifies a real matrix.
pub fn complexify(m: &DMatrix<f64>) -> CMatrix {
    m.map(C64::from)
}

/// Singular values sorted descending together with the matching right
/// singular vectors (as columns, in the same order).
pub fn svd_sorted(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let (rows, cols) = m.shape();
    // pad wide matrices so the decomposition returns a full right basis
    let padded;
    let m = if rows < cols {
        padded = m.clone().resize_vertically(cols, C64::new(0.0, 0.0));
        &padded
    } else {
        m
    };
    let svd = m.clone().svd(false, true);
    let v = svd.v_t.expect("requested V").adjoint();
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let values = order.iter().map(|&i| svd.singular_values[i]).collect();
    let mut vectors = CMatrix::zeros(cols, cols);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &v.column(src));
    }
    (values, vectors)
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Largest singular value (spectral norm).
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Rotates `v` so its largest-magnitude component is real and positive.
pub(crate) fn normalize_phase(mut v: CVector) -> CVector {
    if let Some(pivot) = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())) {
        if pivot.norm() > 0.0 {
            let phase = pivot.conj() / pivot.norm();
            v *= phase;
        }
    }
    v
}

/// Kernel of `m`: span of right singular vectors whose singular value is at
/// most `tol · σ_max`.
pub fn nullspace(m: &CMatrix, tol: f64) -> Nullspace {
    let n = m.ncols();
    if n == 0 {
        return Nullspace {
            tolerance: tol,
            dim_ambient: 0,
            basis: Vec::new(),
            singular_values: Vec::new(),
        };
    }
    let (values, vectors) = svd_sorted(m);
    let threshold = tol * values[0];
    let basis = (0..n)
        .filter(|&i| values[i] <= threshold)
        .map(|i| normalize_phase(vectors.column(i).into_owned()))
        .collect();
    Nullspace {
        tolerance: tol,
        dim_ambient: n,
        basis,
        singular_values: values,
    }
}

/// Splits `span(a)` into `{v : |Bv| ≤ tol·|B|}` and its orthogonal
/// complement within `span(a)`.
pub(crate) fn split_kernel(a: &Nullspace, b: &CMatrix, tol: f64) -> (Nullspace, Vec<CVector>) {
    let k = a.dim();
    if k == 0 {
        let empty = Nullspace {
            tolerance: tol,
            dim_ambient: a.dim_ambient,
            basis: Vec::new(),
            singular_values: Vec::new(),
        };
        return (empty, Vec::new());
    }
    let q = a.basis_matrix();
    let restricted = b * &q;
    let threshold = tol * spectral_norm(b);
    let (values, w) = svd_sorted(&restricted);
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for i in 0..k {
        let v = normalize_phase(&q * w.column(i));
        if values[i] <= threshold {
            inside.push(v);
        } else {
            outside.push(v);
        }
    }
    let kernel = Nullspace {
        tolerance: tol,
        dim_ambient: a.dim_ambient,
        basis: inside,
        singular_values: values,
    };
    (kernel, outside)
}

/// Orthonormal basis of `{v ∈ span(a) : |Bv| ≤ tol·|B|}`, obtained from the
/// singular value decomposition of `B` restricted to `span(a)`.
pub fn intersect_kernels(a: &Nullspace, b: &CMatrix, tol: f64) -> Nullspace {
    split_kernel(a, b, tol).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ones(n: usize, v: C64) -> CMatrix {
        CMatrix::from_element(n, n, v)
    }

    fn assert_orthonormal(ns: &Nullspace) {
        for (i, a) in ns.basis.iter().enumerate() {
            for (j, b) in ns.basis.iter().enumerate() {
                let ip = a.dotc(b);
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ip - C64::from(expect)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let ns = nullspace(&CMatrix::identity(4, 4), 1e-10);
        assert!(ns.is_trivial());
        assert_eq!(ns.singular_values, vec![1.0; 4]);
    }

    #[test]
    fn all_ones_kernel() {
        let m = ones(3, C64::from(-1.0 / (4.0 * PI)));
        let ns = nullspace(&m, 1e-10);
        assert_eq!(ns.dim(), 2);
        assert_orthonormal(&ns);
        for v in &ns.basis {
            assert!(v.sum().norm() < 1e-12);
            assert!((&m * v).norm() <= 10.0 * 1e-10 * ns.singular_values[0]);
        }
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        assert_eq!(nullspace(&CMatrix::zeros(2, 2), 1e-10).dim(), 2);
    }

    #[test]
    fn wide_matrix() {
        let m = CMatrix::from_row_slice(1, 3, &[C64::from(1.0), C64::from(1.0), C64::from(1.0)]);
        let ns = nullspace(&m, 1e-10);
        assert_eq!(ns.dim(), 2);
        assert_orthonormal(&ns);
    }

    #[test]
    fn intersection_with_gamma1() {
        let gamma1 = |n| ones(n, C64::new(0.0, -1.0 / (4.0 * PI)));
        let plane = nullspace(&ones(3, C64::from(1.0)), 1e-10);
        let inter = intersect_kernels(&plane, &gamma1(3), 1e-10);
        assert_eq!(inter.dim(), 2);
        assert_orthonormal(&inter);

        let s = 0.5f64.sqrt();
        let line = Nullspace {
            tolerance: 1e-10,
            dim_ambient: 2,
            basis: vec![CVector::from_vec(vec![C64::from(s), C64::from(s)])],
            singular_values: vec![],
        };
        let (inter, rest) = split_kernel(&line, &gamma1(2), 1e-10);
        assert_eq!(inter.dim(), 0);
        assert_eq!(rest.len(), 1);

        let empty = nullspace(&CMatrix::identity(3, 3), 1e-10);
        assert_eq!(intersect_kernels(&empty, &gamma1(3), 1e-10).dim(), 0);
    }

    #[test]
    fn gamma1_kernel_has_codimension_one() {
        for n in 1..7 {
            let ns = nullspace(&ones(n, C64::new(0.0, -1.0 / (4.0 * PI))), 1e-10);
            assert_eq!(ns.dim(), n - 1);
        }
    }

    #[test]
    fn phase_normalization() {
        let v = CVector::from_vec(vec![C64::new(0.0, 2.0), C64::new(0.0, -1.0)]);
        let n = normalize_phase(v);
        assert!((n[0] - C64::from(2.0)).norm() < 1e-15);
        assert!((n[1] - C64::from(-1.0)).norm() < 1e-15);
    }
}
