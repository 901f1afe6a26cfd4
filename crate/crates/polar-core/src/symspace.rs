//! Symmetric-pair data: Cartan decompositions, curvature, Lie triple
//! systems, compact/noncompact duality and the Jacobi-field cross-validator.
//!
//! Pairs for the classical rank-one families are assembled inside an ambient
//! matrix algebra (so(n+1), su(n+1), sp(n+1)), which makes the Jacobi
//! identity of k (+) p automatic. The octonionic plane has no convenient
//! matrix ambient; its bracket p x p -> k is defined through the invariant
//! pairing and certified by an explicit Jacobi-identity check.
//!
//! Conventions: the basis of p is orthonormal, so the metric is the identity
//! in coordinates; the invariant form on k is -1/2 tr(xy). The curvature
//! sign is calibrated so that the sphere pair has sectional curvature +1 at
//! epsilon = +1.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::liealg::{
    bracket, spin_rep, su_basis_matrices_embedded, sp_basis_matrices_embedded, complex_diag,
    so_basis, LieAlgError, LieAlgebra, Representation,
};
use crate::linalg::{orthogonal_complement, Subspace, Tolerances};

#[derive(Debug, Error)]
pub enum SymSpaceError {
    #[error("invalid space parameters: {0}")]
    InvalidParams(String),
    #[error("algebra construction failed: {0}")]
    Algebra(#[from] LieAlgError),
    #[error("[p, p] leaves the k span (residual {0:.3e})")]
    BracketLeavesK(f64),
    #[error("[k, p] leaves the p span (residual {0:.3e})")]
    ActionLeavesP(f64),
    #[error("subspace is not a Lie triple system (residual {0:.3e})")]
    NotLieTriple(f64),
    #[error("vector does not lie in the designated block of the frame (residual {0:.3e})")]
    VectorOutsideBlock(f64),
    #[error("frame is not an orthonormal basis of p")]
    BadFrame,
    #[error("curvature calibration found no positive Jacobi eigenvalue")]
    CalibrationFailed,
}

/// Space families the engine knows how to assemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SpaceFamily {
    Sphere { n: usize },
    ComplexProjective { n: usize },
    QuaternionicProjective { n: usize },
    OctonionicPlane,
    Euclidean { n: usize },
    Product { factors: Vec<SpaceFamily> },
}

/// Per-factor layout of a product pair (trivial for a single factor).
#[derive(Debug, Clone)]
pub struct FactorLayout {
    pub p_offset: usize,
    pub p_dim: usize,
    /// Index range of the factor's k basis inside the product k basis.
    pub k_offset: usize,
    pub k_dim: usize,
    /// Block position of the factor's k realization in the product ambient.
    pub k_ambient_offset: usize,
    pub k_ambient_dim: usize,
}

/// Cartan data of a (locally) symmetric space G/K at the base point:
/// the isotropy algebra k, its representation on p = R^{p_dim}, the bracket
/// p x p -> k, and the duality sign epsilon.
#[derive(Debug, Clone)]
pub struct SymmetricPair {
    family: SpaceFamily,
    k_action: Representation,
    p_dim: usize,
    /// pp[a] is the p x p matrix with [x, y]_a = x^T pp[a] y (k coordinates).
    pp: Vec<DMatrix<f64>>,
    epsilon: f64,
    curvature_scale: f64,
    embedded_justified: bool,
    factors: Vec<FactorLayout>,
}

/// Constant-coefficient Jacobi equation f'' + a^T f = 0 along a geodesic,
/// in a parallel frame whose first `block_dim` vectors span the section.
#[derive(Debug, Clone)]
pub struct JacobiSystem {
    pub block_dim: usize,
    pub a: DMatrix<f64>,
}

impl SymmetricPair {
    pub fn family(&self) -> &SpaceFamily {
        &self.family
    }

    pub fn k_algebra(&self) -> &LieAlgebra {
        self.k_action.algebra()
    }

    pub fn k_action(&self) -> &Representation {
        &self.k_action
    }

    pub fn p_dim(&self) -> usize {
        self.p_dim
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn curvature_scale(&self) -> f64 {
        self.curvature_scale
    }

    pub fn embedded_justified(&self) -> bool {
        self.embedded_justified
    }

    pub fn factors(&self) -> &[FactorLayout] {
        &self.factors
    }

    /// [x, y] in k coordinates (unscaled structural bracket).
    pub fn pp_bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(self.k_algebra().dim(), |a, _| x.dot(&(&self.pp[a] * y)))
    }

    /// R(x, y)z = -epsilon * scale * rho([x, y]_k) z, calibrated so that the
    /// compact sphere has sectional curvature +1.
    pub fn curvature(&self, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>) -> DVector<f64> {
        let xi = self.pp_bracket(x, y);
        self.k_action.act(&xi, z) * (-self.epsilon * self.curvature_scale)
    }

    /// <R(x, y)y, x> for orthonormal x, y.
    pub fn sectional_curvature(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        self.curvature(x, y, y).dot(x)
    }

    /// Lie triple test: [[s, s], s] contained in s, with max residual.
    pub fn is_lie_triple(&self, s: &Subspace, tol: &Tolerances) -> (bool, f64) {
        let mut worst = 0.0f64;
        for si in s.basis() {
            for sj in s.basis() {
                let xi = self.pp_bracket(si, sj);
                for sk in s.basis() {
                    let v = self.k_action.act(&xi, sk);
                    let (_, r) = s.contains(&v, tol);
                    worst = worst.max(r);
                }
            }
        }
        (worst <= tol.residual_abs, worst)
    }

    /// Flatness (hyperpolarity) test: [s, s] = 0. Requires a Lie triple.
    pub fn is_flat_triple(
        &self,
        s: &Subspace,
        tol: &Tolerances,
    ) -> Result<(bool, f64), SymSpaceError> {
        let (lt, r) = self.is_lie_triple(s, tol);
        if !lt {
            return Err(SymSpaceError::NotLieTriple(r));
        }
        let mut worst = 0.0f64;
        for si in s.basis() {
            for sj in s.basis() {
                let xi = self.pp_bracket(si, sj);
                worst = worst.max(self.k_algebra().form_norm(&xi));
            }
        }
        Ok((worst <= tol.residual_abs, worst))
    }

    /// Compact/noncompact dual: identical data with epsilon negated.
    pub fn dualize(&self) -> SymmetricPair {
        let mut dual = self.clone();
        dual.epsilon = -self.epsilon;
        dual
    }

    /// Jacobi system along the geodesic with initial velocity `v`, in the
    /// orthonormal frame whose first `block_dim` vectors span the section.
    /// In a symmetric space curvature is parallel, so the coefficients are
    /// constant along the geodesic.
    pub fn jacobi_system(
        &self,
        v: &DVector<f64>,
        frame: &[DVector<f64>],
        block_dim: usize,
        tol: &Tolerances,
    ) -> Result<JacobiSystem, SymSpaceError> {
        if frame.len() != self.p_dim {
            return Err(SymSpaceError::BadFrame);
        }
        let n = self.p_dim;
        let mut defect = 0.0f64;
        for (i, ei) in frame.iter().enumerate() {
            for (j, ej) in frame.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                defect = defect.max((ei.dot(ej) - target).abs());
            }
        }
        if defect > 1e-8 {
            return Err(SymSpaceError::BadFrame);
        }
        // v must lie in the block spanned by the first block_dim vectors.
        let mut res = v.clone();
        for e in frame.iter().take(block_dim) {
            let c = e.dot(&res);
            res -= e * c;
        }
        if res.norm() > tol.residual_abs * v.norm().max(1.0) {
            return Err(SymSpaceError::VectorOutsideBlock(res.norm()));
        }
        let a = DMatrix::from_fn(n, n, |i, j| {
            self.curvature(&frame[i], v, v).dot(&frame[j])
        });
        Ok(JacobiSystem { block_dim, a })
    }

    /// Pairing compatibility <[x, y]_k, xi>_form = <rho(xi) x, y> over bases.
    /// Meaningful for semisimple pairs; the Euclidean bracket is zero and
    /// this identity does not apply there.
    pub fn compatibility_residual(&self) -> f64 {
        let kd = self.k_algebra().dim();
        let gram = self.k_algebra().gram();
        let mut worst = 0.0f64;
        for i in 0..self.p_dim {
            let ei = DVector::from_fn(self.p_dim, |r, _| if r == i { 1.0 } else { 0.0 });
            for j in 0..self.p_dim {
                let ej = DVector::from_fn(self.p_dim, |r, _| if r == j { 1.0 } else { 0.0 });
                let br = self.pp_bracket(&ei, &ej);
                for a in 0..kd {
                    let lhs = gram.row(a).transpose().dot(&br);
                    let rhs = self.k_action.action()[a].column(i).dot(&ej);
                    worst = worst.max((lhs - rhs).abs());
                }
            }
        }
        worst
    }

    /// Antisymmetry defect of the p x p bracket.
    pub fn antisymmetry_residual(&self) -> f64 {
        self.pp.iter().map(|c| (c.transpose() + c).amax()).fold(0.0, f64::max)
    }

    /// Full Jacobi identity of g = k (+) p over all basis triples, with the
    /// duality sign applied to the p x p bracket. This is the build-time
    /// oracle for the octonionic construction.
    pub fn jacobi_residual(&self) -> f64 {
        let kd = self.k_algebra().dim();
        let pd = self.p_dim;
        let ksc = self.k_algebra().structure_constants();
        let dim = kd + pd;

        // g-elements as (k coords, p coords).
        let basis: Vec<(DVector<f64>, DVector<f64>)> = (0..dim)
            .map(|t| {
                let mut a = DVector::zeros(kd);
                let mut x = DVector::zeros(pd);
                if t < kd {
                    a[t] = 1.0;
                } else {
                    x[t - kd] = 1.0;
                }
                (a, x)
            })
            .collect();

        let br = |u: &(DVector<f64>, DVector<f64>), v: &(DVector<f64>, DVector<f64>)| {
            let mut ck = DVector::zeros(kd);
            for c in 0..kd {
                ck[c] = u.0.dot(&(&ksc[c] * &v.0)) + self.epsilon * u.1.dot(&(&self.pp[c] * &v.1));
            }
            let cp = self.k_action.act(&u.0, &v.1) - self.k_action.act(&v.0, &u.1);
            (ck, cp)
        };

        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in (i + 1)..dim {
                let bij = br(&basis[i], &basis[j]);
                for l in (j + 1)..dim {
                    let bjl = br(&basis[j], &basis[l]);
                    let bli = br(&basis[l], &basis[i]);
                    let t1 = br(&bij, &basis[l]);
                    let t2 = br(&bjl, &basis[i]);
                    let t3 = br(&bli, &basis[j]);
                    let k_res = (&t1.0 + &t2.0 + &t3.0).amax();
                    let p_res = (&t1.1 + &t2.1 + &t3.1).amax();
                    worst = worst.max(k_res).max(p_res);
                }
            }
        }
        worst
    }
}

impl JacobiSystem {
    /// Max |a_ij| over the off-diagonal blocks i < block_dim <= j; vanishes
    /// when the block spans a Lie triple system containing the velocity.
    pub fn block_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.block_dim {
            for j in self.block_dim..self.a.nrows() {
                worst = worst.max(self.a[(i, j)].abs()).max(self.a[(j, i)].abs());
            }
        }
        worst
    }

    pub fn symmetry_residual(&self) -> f64 {
        (&self.a - self.a.transpose()).amax()
    }

    /// Closed-form solution of f'' + a^T f = 0 via the spectral decomposition
    /// of the (symmetric) coefficient matrix, sampled at `steps` + 1 points
    /// of [0, t_end].
    pub fn integrate(
        &self,
        f0: &DVector<f64>,
        f0_prime: &DVector<f64>,
        t_end: f64,
        steps: usize,
    ) -> Vec<(f64, DVector<f64>)> {
        let n = self.a.nrows();
        let (w, q) = crate::linalg::sym_eigen(&self.a);
        let g0 = q.transpose() * f0;
        let g0p = q.transpose() * f0_prime;
        let mut out = Vec::with_capacity(steps + 1);
        for s in 0..=steps {
            let t = t_end * s as f64 / steps.max(1) as f64;
            let mut g = DVector::zeros(n);
            for m in 0..n {
                let lam = w[m];
                g[m] = if lam > 1e-12 {
                    let om = lam.sqrt();
                    g0[m] * (om * t).cos() + g0p[m] * (om * t).sin() / om
                } else if lam < -1e-12 {
                    let om = (-lam).sqrt();
                    g0[m] * (om * t).cosh() + g0p[m] * (om * t).sinh() / om
                } else {
                    g0[m] + t * g0p[m]
                };
            }
            out.push((t, &q * g));
        }
        out
    }
}

/// Metric 1/2 tr(x^T y) used on ambient matrix realizations of p.
fn ambient_inner(x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
    0.5 * x.dot(y)
}

/// Assemble a pair from an ambient matrix algebra: k given by a basis of
/// ambient matrices, p by a spanning set (orthonormalized under 1/2 tr(x^T y)).
pub fn pair_from_ambient(
    family: SpaceFamily,
    k_basis: Vec<DMatrix<f64>>,
    p_span: Vec<DMatrix<f64>>,
    embedded_justified: bool,
) -> Result<SymmetricPair, SymSpaceError> {
    let k = LieAlgebra::from_basis(k_basis)?;
    // Gram-Schmidt on the p span under the ambient metric.
    let mut p_mats: Vec<DMatrix<f64>> = Vec::new();
    for raw in &p_span {
        let mut m = raw.clone();
        for _ in 0..2 {
            for b in &p_mats {
                let c = ambient_inner(b, &m);
                m -= b * c;
            }
        }
        let norm = ambient_inner(&m, &m).sqrt();
        if norm > 1e-10 {
            p_mats.push(m / norm);
        }
    }
    let p_dim = p_mats.len();

    // Isotropy action: rho(b_a)_{ij} = <P_i, [b_a, P_j]>.
    let mut action_leak = 0.0f64;
    let action: Vec<DMatrix<f64>> = k
        .basis()
        .iter()
        .map(|ba| {
            DMatrix::from_fn(p_dim, p_dim, |i, j| ambient_inner(&p_mats[i], &bracket(ba, &p_mats[j])))
        })
        .collect();
    for (ba, rho) in k.basis().iter().zip(&action) {
        for j in 0..p_dim {
            let mut rem = bracket(ba, &p_mats[j]);
            for i in 0..p_dim {
                rem -= &p_mats[i] * rho[(i, j)];
            }
            action_leak = action_leak.max(ambient_inner(&rem, &rem).sqrt());
        }
    }
    if action_leak > 1e-9 {
        return Err(SymSpaceError::ActionLeavesP(action_leak));
    }
    let k_action = Representation::new(k, action)?;

    // p x p bracket: ambient commutators expanded in the k basis.
    let kd = k_action.algebra().dim();
    let mut pp = vec![DMatrix::zeros(p_dim, p_dim); kd];
    let mut bracket_leak = 0.0f64;
    for i in 0..p_dim {
        for j in 0..p_dim {
            let (coords, r) = k_action.algebra().coords_of(&bracket(&p_mats[i], &p_mats[j]));
            bracket_leak = bracket_leak.max(r);
            for a in 0..kd {
                pp[a][(i, j)] = coords[a];
            }
        }
    }
    if bracket_leak > 1e-9 {
        return Err(SymSpaceError::BracketLeavesK(bracket_leak));
    }

    let factors = vec![FactorLayout {
        p_offset: 0,
        p_dim,
        k_offset: 0,
        k_dim: kd,
        k_ambient_offset: 0,
        k_ambient_dim: k_action.algebra().ambient_matrix_dim(),
    }];
    Ok(SymmetricPair {
        family,
        k_action,
        p_dim,
        pp,
        epsilon: 1.0,
        curvature_scale: 1.0,
        embedded_justified,
        factors,
    })
}

fn unit_mat(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m
}

fn sphere_pair(n: usize) -> Result<SymmetricPair, SymSpaceError> {
    if n < 2 {
        return Err(SymSpaceError::InvalidParams(format!("sphere({n}) needs n >= 2")));
    }
    // Ambient so(n+1); k = so(n) in the leading block, p = last row/column.
    let m = n + 1;
    let mut k_basis = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            k_basis.push(unit_mat(m, i, j) - unit_mat(m, j, i));
        }
    }
    let p_span: Vec<DMatrix<f64>> =
        (0..n).map(|a| unit_mat(m, a, n) - unit_mat(m, n, a)).collect();
    pair_from_ambient(SpaceFamily::Sphere { n }, k_basis, p_span, true)
}

fn complex_projective_pair(n: usize) -> Result<SymmetricPair, SymSpaceError> {
    if n < 1 {
        return Err(SymSpaceError::InvalidParams(format!("cp({n}) needs n >= 1")));
    }
    // Ambient su(n+1); k = s(u(n) x u(1)), p = off-diagonal column C^n.
    let m = n + 1;
    let mut k_basis = su_basis_matrices_embedded(m, 0, n);
    let mut central = vec![1.0; m];
    central[n] = -(n as f64);
    k_basis.push(complex_diag(m, &central));
    let z = DMatrix::zeros(m, m);
    let mut p_span = Vec::new();
    for a in 0..n {
        let re = unit_mat(m, a, n) - unit_mat(m, n, a);
        let im = unit_mat(m, a, n) + unit_mat(m, n, a);
        p_span.push(crate::liealg::realify_complex(&re, &z));
        p_span.push(crate::liealg::realify_complex(&z, &im));
    }
    pair_from_ambient(SpaceFamily::ComplexProjective { n }, k_basis, p_span, true)
}

fn quaternionic_projective_pair(n: usize) -> Result<SymmetricPair, SymSpaceError> {
    if n < 1 {
        return Err(SymSpaceError::InvalidParams(format!("hp({n}) needs n >= 1")));
    }
    // Ambient sp(n+1); k = sp(n) (+) sp(1), p = off-diagonal column H^n.
    let m = n + 1;
    let mut k_basis = sp_basis_matrices_embedded(m, 0, n);
    k_basis.extend(sp_basis_matrices_embedded(m, n, m));
    let mut p_span = Vec::new();
    for a in 0..n {
        for q in 0..4 {
            let mut parts = [
                DMatrix::zeros(m, m),
                DMatrix::zeros(m, m),
                DMatrix::zeros(m, m),
                DMatrix::zeros(m, m),
            ];
            parts[q] = if q == 0 {
                unit_mat(m, a, n) - unit_mat(m, n, a)
            } else {
                unit_mat(m, a, n) + unit_mat(m, n, a)
            };
            p_span.push(crate::liealg::realify_quaternion(&parts));
        }
    }
    pair_from_ambient(SpaceFamily::QuaternionicProjective { n }, k_basis, p_span, true)
}

fn euclidean_pair(n: usize) -> Result<SymmetricPair, SymSpaceError> {
    if n < 2 {
        return Err(SymSpaceError::InvalidParams(format!("euclidean({n}) needs n >= 2")));
    }
    let k = so_basis(n)?;
    let kd = k.dim();
    let k_action = Representation::standard(k);
    let factors = vec![FactorLayout {
        p_offset: 0,
        p_dim: n,
        k_offset: 0,
        k_dim: kd,
        k_ambient_offset: 0,
        k_ambient_dim: n,
    }];
    Ok(SymmetricPair {
        family: SpaceFamily::Euclidean { n },
        k_action,
        p_dim: n,
        pp: vec![DMatrix::zeros(n, n); kd],
        epsilon: 1.0,
        curvature_scale: 1.0,
        embedded_justified: true,
        factors,
    })
}

/// F4 = spin(9) (+) R^16, the Cayley plane model. The bracket
/// p x p -> k is the unique solution of <[x, y], xi>_form = <rho(xi) x, y>;
/// the Jacobi identity of the resulting 52-dimensional algebra is the
/// correctness oracle (see `jacobi_residual`). The curvature scale is then
/// calibrated to the quarter-pinched normalization: the nonzero eigenvalues
/// of the Jacobi operator R(., x)x become exactly {1, 4}.
pub fn f4_from_spin9() -> Result<SymmetricPair, SymSpaceError> {
    let k_action = spin_rep(9)?;
    let kd = k_action.algebra().dim();
    let p_dim = 16usize;

    let mut pp = vec![DMatrix::zeros(p_dim, p_dim); kd];
    for i in 0..p_dim {
        for j in 0..p_dim {
            // rhs_a = <rho(b_a) e_i, e_j> = (rho_a)_{j, i}
            let rhs = DVector::from_fn(kd, |a, _| k_action.action()[a][(j, i)]);
            let coords = k_action.algebra().solve_form(&rhs);
            for a in 0..kd {
                pp[a][(i, j)] = coords[a];
            }
        }
    }

    let mut pair = SymmetricPair {
        family: SpaceFamily::OctonionicPlane,
        k_action,
        p_dim,
        pp,
        epsilon: 1.0,
        curvature_scale: 1.0,
        embedded_justified: true,
        factors: vec![FactorLayout {
            p_offset: 0,
            p_dim,
            k_offset: 0,
            k_dim: kd,
            k_ambient_offset: 0,
            k_ambient_dim: 16,
        }],
    };

    // One-dimensional calibration: smallest positive eigenvalue of the
    // Jacobi operator becomes 1 (the largest is then 4).
    let x = DVector::from_fn(p_dim, |r, _| if r == 0 { 1.0 } else { 0.0 });
    let jac = DMatrix::from_fn(p_dim, p_dim, |i, j| {
        let ei = DVector::from_fn(p_dim, |r, _| if r == i { 1.0 } else { 0.0 });
        let ej = DVector::from_fn(p_dim, |r, _| if r == j { 1.0 } else { 0.0 });
        pair.curvature(&ei, &x, &x).dot(&ej)
    });
    let (evals, _) = crate::linalg::sym_eigen(&jac);
    let max = evals.amax();
    let min_pos = evals
        .iter()
        .filter(|&&l| l > 1e-8 * max)
        .fold(f64::INFINITY, |acc, &l| acc.min(l));
    if !min_pos.is_finite() || min_pos <= 0.0 {
        return Err(SymSpaceError::CalibrationFailed);
    }
    pair.curvature_scale = 1.0 / min_pos;
    Ok(pair)
}

/// Block direct sum of pairs: k realizations block-diagonal, p concatenated,
/// cross-factor brackets zero. All factors must share the duality sign.
pub fn product_pair(parts: &[SymmetricPair]) -> Result<SymmetricPair, SymSpaceError> {
    if parts.is_empty() {
        return Err(SymSpaceError::InvalidParams("empty product".into()));
    }
    if parts.len() == 1 {
        return Ok(parts[0].clone());
    }
    if parts.iter().any(|p| p.epsilon != parts[0].epsilon) {
        return Err(SymSpaceError::InvalidParams("mixed duality signs in product".into()));
    }
    let k = LieAlgebra::direct_sum(
        &parts.iter().map(|p| p.k_algebra().clone()).collect::<Vec<_>>(),
    )?;
    let p_dim: usize = parts.iter().map(|p| p.p_dim).sum();
    let kd = k.dim();

    let mut factors = Vec::new();
    let (mut po, mut ko, mut ao) = (0usize, 0usize, 0usize);
    for part in parts {
        factors.push(FactorLayout {
            p_offset: po,
            p_dim: part.p_dim,
            k_offset: ko,
            k_dim: part.k_algebra().dim(),
            k_ambient_offset: ao,
            k_ambient_dim: part.k_algebra().ambient_matrix_dim(),
        });
        po += part.p_dim;
        ko += part.k_algebra().dim();
        ao += part.k_algebra().ambient_matrix_dim();
    }

    let mut action = Vec::with_capacity(kd);
    for (fi, part) in parts.iter().enumerate() {
        let f = &factors[fi];
        for a in 0..part.k_algebra().dim() {
            let mut m = DMatrix::zeros(p_dim, p_dim);
            m.view_mut((f.p_offset, f.p_offset), (f.p_dim, f.p_dim))
                .copy_from(&part.k_action.action()[a]);
            action.push(m);
        }
    }
    let k_action = Representation::new(k, action)?;

    let mut pp = vec![DMatrix::zeros(p_dim, p_dim); kd];
    for (fi, part) in parts.iter().enumerate() {
        let f = &factors[fi];
        for a in 0..part.k_algebra().dim() {
            pp[f.k_offset + a]
                .view_mut((f.p_offset, f.p_offset), (f.p_dim, f.p_dim))
                .copy_from(&part.pp[a]);
        }
    }

    // Curvature scales must agree for the product's scalar convention.
    let scale = parts[0].curvature_scale;
    if parts.iter().any(|p| (p.curvature_scale - scale).abs() > 1e-12) {
        return Err(SymSpaceError::InvalidParams(
            "product factors with different curvature scales are not supported".into(),
        ));
    }

    Ok(SymmetricPair {
        family: SpaceFamily::Product {
            factors: parts.iter().map(|p| p.family.clone()).collect(),
        },
        k_action,
        p_dim,
        pp,
        epsilon: parts[0].epsilon,
        curvature_scale: scale,
        embedded_justified: parts.iter().all(|p| p.embedded_justified),
        factors,
    })
}

/// Assemble the pair for a space family; `compact` selects epsilon = +1,
/// otherwise the noncompact dual is returned.
pub fn make_pair(family: &SpaceFamily, compact: bool) -> Result<SymmetricPair, SymSpaceError> {
    let pair = match family {
        SpaceFamily::Sphere { n } => sphere_pair(*n)?,
        SpaceFamily::ComplexProjective { n } => complex_projective_pair(*n)?,
        SpaceFamily::QuaternionicProjective { n } => {
            if *n != 0 {
                quaternionic_projective_pair(*n)?
            } else {
                return Err(SymSpaceError::InvalidParams("hp(0)".into()));
            }
        }
        SpaceFamily::OctonionicPlane => f4_from_spin9()?,
        SpaceFamily::Euclidean { n } => euclidean_pair(*n)?,
        SpaceFamily::Product { factors } => {
            let parts = factors
                .iter()
                .map(|f| make_pair(f, true))
                .collect::<Result<Vec<_>, _>>()?;
            product_pair(&parts)?
        }
    };
    Ok(if compact { pair } else { pair.dualize() })
}

/// Orthonormal frame of p adapted to `s`: the basis of s followed by a basis
/// of its orthogonal complement.
pub fn adapted_frame(s: &Subspace) -> Vec<DVector<f64>> {
    let mut frame: Vec<DVector<f64>> = s.basis().to_vec();
    frame.extend(orthogonal_complement(s).basis().iter().cloned());
    frame
}
