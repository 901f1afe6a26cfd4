//! Dense linear-algebra substrate: subspaces, orthonormalization, numeric
//! rank, matrix exponentials and seeded sampling helpers.
//!
//! Everything here is deterministic; the only randomness flows through an
//! explicitly seeded generator passed by the caller.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerances shared by rank and containment decisions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative singular-value cutoff for rank decisions.
    pub rank_rel: f64,
    /// Absolute residual bound for containment / zero tests.
    pub residual_abs: f64,
}

impl Tolerances {
    pub fn new(rank_rel: f64, residual_abs: f64) -> Self {
        assert!(rank_rel > 0.0 && rank_rel < 1.0, "rank_rel must be in (0, 1)");
        assert!(residual_abs > 0.0, "residual_abs must be positive");
        Self { rank_rel, residual_abs }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        // Catalog matrices have entries of magnitude <= 2; conditioning is benign.
        Self { rank_rel: 1e-9, residual_abs: 1e-10 }
    }
}

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
}

/// A linear subspace of R^ambient_dim held as an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<DVector<f64>>,
}

impl Subspace {
    /// Zero-dimensional subspace of the given ambient space.
    pub fn zero(ambient_dim: usize) -> Self {
        Self { ambient_dim, basis: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[DVector<f64>] {
        &self.basis
    }

    /// Orthogonal projection of `v` onto the subspace.
    pub fn project(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut p = DVector::zeros(self.ambient_dim);
        for b in &self.basis {
            p += b * b.dot(v);
        }
        p
    }

    /// Containment test with reported residual.
    ///
    /// True iff ||v - proj(v)|| <= residual_abs * max(1, ||v||).
    pub fn contains(&self, v: &DVector<f64>, tol: &Tolerances) -> (bool, f64) {
        let residual = (v - self.project(v)).norm();
        (residual <= tol.residual_abs * v.norm().max(1.0), residual)
    }

    /// Max orthonormality defect |<b_i, b_j> - delta_ij| over the basis.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, bi) in self.basis.iter().enumerate() {
            for (j, bj) in self.basis.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((bi.dot(bj) - target).abs());
            }
        }
        worst
    }

    /// True iff both subspaces contain each other's basis within tolerance.
    pub fn spans_same(&self, other: &Subspace, tol: &Tolerances) -> bool {
        if self.ambient_dim != other.ambient_dim || self.dim() != other.dim() {
            return false;
        }
        self.basis.iter().all(|b| other.contains(b, tol).0)
            && other.basis.iter().all(|b| self.contains(b, tol).0)
    }
}

/// Orthonormal basis of the span of `vectors` (modified Gram-Schmidt with
/// re-orthogonalization). Vectors whose residual after projection falls
/// below residual_abs * max(1, ||v||) are dropped.
pub fn orthonormalize(
    vectors: &[DVector<f64>],
    ambient_dim: usize,
    tol: &Tolerances,
) -> Result<Subspace, LinalgError> {
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for v in vectors {
        if v.len() != ambient_dim {
            return Err(LinalgError::DimensionMismatch { expected: ambient_dim, got: v.len() });
        }
        let mut r = v.clone();
        // Two passes keep the basis orthonormal to machine precision.
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&r);
                r -= b * c;
            }
        }
        let n = r.norm();
        if n > tol.residual_abs * v.norm().max(1.0) {
            basis.push(r / n);
        }
    }
    Ok(Subspace { ambient_dim, basis })
}

/// Orthogonal complement of `s` in its ambient space.
pub fn orthogonal_complement(s: &Subspace) -> Subspace {
    let n = s.ambient_dim;
    let want = n - s.dim();
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for i in 0..n {
        if basis.len() == want {
            break;
        }
        let mut r = DVector::zeros(n);
        r[i] = 1.0;
        for _ in 0..2 {
            r -= s.project(&r);
            for b in &basis {
                let c = b.dot(&r);
                r -= b * c;
            }
        }
        let norm = r.norm();
        // Against an orthonormal basis the surviving coordinate vectors keep
        // O(1) residual; 1e-6 separates them cleanly from span members.
        if norm > 1e-6 {
            basis.push(r / norm);
        }
    }
    debug_assert_eq!(basis.len(), want, "complement dimension defect");
    Subspace { ambient_dim: n, basis }
}

/// Number of singular values above rank_rel * sigma_max; 0 for a zero matrix.
pub fn numeric_rank(m: &DMatrix<f64>, tol: &Tolerances) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    let max = sv.max();
    if max <= 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol.rank_rel * max).count()
}

/// Matrix exponential by scaling-and-squaring with a Taylor series core.
///
/// exp(0) = I exactly; series terms vanish identically for the zero matrix.
pub fn matrix_exp(a: &DMatrix<f64>) -> Result<DMatrix<f64>, LinalgError> {
    if a.nrows() != a.ncols() {
        return Err(LinalgError::NotSquare { rows: a.nrows(), cols: a.ncols() });
    }
    let n = a.nrows();
    let norm = a.amax() * n as f64;
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a / 2f64.powi(squarings as i32);
    let mut result = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=24 {
        term = &term * &scaled / k as f64;
        result += &term;
        if term.amax() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

/// Unit vector with iid Gaussian coordinates, normalized.
pub fn random_unit_vector<R: Rng>(rng: &mut R, dim: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 1e-6 {
            return v / n;
        }
    }
}

/// Haar-ish random orthogonal matrix: QR of a Gaussian matrix with the R
/// diagonal signs folded into Q.
pub fn random_orthogonal<R: Rng>(rng: &mut R, dim: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            for i in 0..dim {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

/// Eigendecomposition m = q diag(w) q^T of a symmetric matrix by cyclic
/// Jacobi rotations. The library eigensolver returns eigenvectors with O(1)
/// residuals on nearly diagonal matrices with clustered eigenvalues (which
/// is exactly what curvature operators of symmetric spaces look like in an
/// adapted frame), so we keep our own: Jacobi sweeps converge immediately in
/// that regime and keep q orthogonal to machine precision.
pub fn sym_eigen(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "sym_eigen needs a square matrix");
    let mut a = (m + m.transpose()) * 0.5;
    let mut q = DMatrix::identity(n, n);
    let scale = a.amax().max(f64::MIN_POSITIVE);
    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off = off.max(a[(i, j)].abs());
            }
        }
        if off <= f64::EPSILON * scale {
            break;
        }
        for p in 0..n {
            for r in (p + 1)..n {
                let apr = a[(p, r)];
                if apr.abs() <= f64::EPSILON * scale * 1e-3 {
                    continue;
                }
                let theta = (a[(r, r)] - a[(p, p)]) / (2.0 * apr);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akr = a[(k, r)];
                    a[(k, p)] = c * akp - s * akr;
                    a[(k, r)] = s * akp + c * akr;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let ark = a[(r, k)];
                    a[(p, k)] = c * apk - s * ark;
                    a[(r, k)] = s * apk + c * ark;
                }
                for k in 0..n {
                    let qkp = q[(k, p)];
                    let qkr = q[(k, r)];
                    q[(k, p)] = c * qkp - s * qkr;
                    q[(k, r)] = s * qkp + c * qkr;
                }
            }
        }
    }
    (a.diagonal(), q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(entries: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(entries)
    }

    #[test]
    fn orthonormalize_drops_collinear() {
        let tol = Tolerances::default();
        let s = orthonormalize(&[v(&[1.0, 0.0]), v(&[2.0, 0.0])], 2, &tol).unwrap();
        assert_eq!(s.dim(), 1);
        assert!((s.basis()[0][0].abs() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn orthonormalize_orthogonal_pair() {
        let tol = Tolerances::default();
        let s =
            orthonormalize(&[v(&[1.0, 1.0, 0.0]), v(&[1.0, -1.0, 0.0])], 3, &tol).unwrap();
        assert_eq!(s.dim(), 2);
        let (inside, _) = s.contains(&v(&[0.3, -0.7, 0.0]), &tol);
        assert!(inside);
        let (outside, r) = s.contains(&v(&[0.0, 0.0, 1.0]), &tol);
        assert!(!outside);
        assert!((r - 1.0).abs() < 1e-14);
    }

    #[test]
    fn orthonormalize_empty() {
        let s = orthonormalize(&[], 4, &Tolerances::default()).unwrap();
        assert_eq!(s.dim(), 0);
        assert_eq!(s.ambient_dim(), 4);
    }

    #[test]
    fn orthonormalize_dimension_mismatch() {
        let err = orthonormalize(&[v(&[1.0, 0.0, 0.0])], 2, &Tolerances::default());
        assert!(matches!(err, Err(LinalgError::DimensionMismatch { .. })));
    }

    #[test]
    fn complement_of_line_in_r3() {
        let tol = Tolerances::default();
        let s = orthonormalize(&[v(&[1.0, 0.0, 0.0])], 3, &tol).unwrap();
        let c = orthogonal_complement(&s);
        assert_eq!(c.dim(), 2);
        assert!(c.contains(&v(&[0.0, 1.0, 0.0]), &tol).0);
        assert!(c.contains(&v(&[0.0, 0.0, 1.0]), &tol).0);
    }

    #[test]
    fn complement_of_full_space_is_zero() {
        let tol = Tolerances::default();
        let s = orthonormalize(&[v(&[1.0, 0.0]), v(&[0.0, 1.0])], 2, &tol).unwrap();
        assert_eq!(orthogonal_complement(&s).dim(), 0);
    }

    #[test]
    fn complement_of_diagonal_line() {
        let tol = Tolerances::default();
        let r = 1.0 / 2f64.sqrt();
        let s = orthonormalize(&[v(&[r, r])], 2, &tol).unwrap();
        let c = orthogonal_complement(&s);
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&v(&[r, -r]), &tol).0);
    }

    #[test]
    fn contains_sub_tolerance_perturbation() {
        let tol = Tolerances::default();
        let s = orthonormalize(&[v(&[1.0, 0.0])], 2, &tol).unwrap();
        let (yes, r) = s.contains(&v(&[1.0, 1e-14]), &tol);
        assert!(yes);
        assert!(r < 1e-10);
        let (no, r1) = s.contains(&v(&[0.0, 1.0]), &tol);
        assert!(!no);
        assert!((r1 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rank_basics() {
        let tol = Tolerances::default();
        assert_eq!(numeric_rank(&DMatrix::identity(3, 3), &tol), 3);
        assert_eq!(numeric_rank(&DMatrix::zeros(4, 4), &tol), 0);
        let u = v(&[1.0, 2.0, -1.0]);
        let outer = &u * u.transpose();
        assert_eq!(numeric_rank(&outer, &tol), 1);
    }

    #[test]
    fn exp_basics() {
        let z: DMatrix<f64> = DMatrix::zeros(3, 3);
        assert_eq!(matrix_exp(&z).unwrap(), DMatrix::identity(3, 3));

        let d = DMatrix::from_diagonal(&v(&[1.0, -2.0]));
        let e = matrix_exp(&d).unwrap();
        assert!((e[(0, 0)] - 1f64.exp()).abs() < 1e-12);
        assert!((e[(1, 1)] - (-2f64).exp()).abs() < 1e-12);

        // exp(pi J) = -I for the 2x2 rotation generator.
        let j = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let e = matrix_exp(&(j * std::f64::consts::PI)).unwrap();
        assert!((&e + DMatrix::identity(2, 2)).amax() < 1e-12);
    }

    #[test]
    fn exp_non_square_rejected() {
        let m = DMatrix::zeros(2, 3);
        assert!(matches!(matrix_exp(&m), Err(LinalgError::NotSquare { .. })));
    }

    #[test]
    fn rank_invariant_under_orthogonal_factors() {
        let tol = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = DMatrix::from_row_slice(
            4,
            4,
            &[
                1.0, 2.0, 3.0, 4.0, //
                2.0, 4.0, 6.0, 8.0, //
                0.0, 1.0, 0.0, 1.0, //
                0.0, 0.0, 0.0, 0.0,
            ],
        );
        let r0 = numeric_rank(&m, &tol);
        for _ in 0..5 {
            let q1 = random_orthogonal(&mut rng, 4);
            let q2 = random_orthogonal(&mut rng, 4);
            assert_eq!(numeric_rank(&(&q1 * &m * &q2), &tol), r0);
        }
    }

    proptest! {
        #[test]
        fn projection_is_idempotent(raw in proptest::collection::vec(
            proptest::collection::vec(-10.0f64..10.0, 5), 0..5),
            coords in proptest::collection::vec(-10.0f64..10.0, 5))
        {
            let tol = Tolerances::default();
            let vectors: Vec<DVector<f64>> =
                raw.iter().map(|r| DVector::from_row_slice(r)).collect();
            let s = orthonormalize(&vectors, 5, &tol).unwrap();
            let x = DVector::from_row_slice(&coords);
            let p = s.project(&x);
            prop_assert!((s.project(&p) - &p).norm() <= tol.residual_abs);
        }

        #[test]
        fn double_complement_spans_same(raw in proptest::collection::vec(
            proptest::collection::vec(-10.0f64..10.0, 6), 0..6))
        {
            let tol = Tolerances::default();
            let vectors: Vec<DVector<f64>> =
                raw.iter().map(|r| DVector::from_row_slice(r)).collect();
            let s = orthonormalize(&vectors, 6, &tol).unwrap();
            let cc = orthogonal_complement(&orthogonal_complement(&s));
            prop_assert!(cc.spans_same(&s, &tol));
        }
    }

    fn eigen_residual(m: &DMatrix<f64>) -> f64 {
        let (w, q) = sym_eigen(m);
        let recon = &q * DMatrix::from_diagonal(&w) * q.transpose();
        let orth = q.transpose() * &q - DMatrix::identity(m.nrows(), m.nrows());
        (recon - m).amax().max(orth.amax())
    }

    #[test]
    fn sym_eigen_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in [1usize, 2, 5, 16] {
            for _ in 0..5 {
                let g = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-2.0..2.0));
                let m = (&g + g.transpose()) * 0.5;
                assert!(eigen_residual(&m) < 1e-13);
            }
        }
    }

    #[test]
    fn sym_eigen_clustered_nearly_diagonal() {
        // Regression: diag(0, -1/2, -1/2, -2, -1/2, -1/2) plus off-diagonal
        // noise at 1e-17 — the profile of a curvature operator in an adapted
        // frame. The library eigensolver returns eigenvectors with O(0.1)
        // residuals on this input.
        let d = [0.0, -0.5, -0.5, -2.0, -0.5, -0.5];
        let mut m = DMatrix::from_fn(6, 6, |i, j| if i == j { d[i] } else { 0.0 });
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for i in 0..6 {
            for j in (i + 1)..6 {
                let e = rng.gen_range(-1.0e-17..1.0e-17);
                m[(i, j)] = e;
                m[(j, i)] = e;
            }
        }
        assert!(eigen_residual(&m) < 1e-15);
        let (w, _) = sym_eigen(&m);
        let mut vals: Vec<f64> = w.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] + 2.0).abs() < 1e-15);
        assert!((vals[5]).abs() < 1e-15);
        for v in &vals[1..5] {
            assert!((v + 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn sym_eigen_known_spectrum() {
        // [[2, 1], [1, 2]] has eigenvalues 1 and 3.
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let (w, _) = sym_eigen(&m);
        let mut vals: Vec<f64> = w.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 3.0).abs() < 1e-14);
    }
}
