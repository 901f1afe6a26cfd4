//! Matrix Lie algebras and orthogonal representations.
//!
//! Provides compact real realizations of so(n), su(n), sp(n), u(n), the
//! Clifford generators up to rank 9 and the spin representations built from
//! them, together with the split subalgebras spin(k).spin(9-k) of spin(9).
//!
//! Complex and quaternionic algebras are realized over the reals throughout;
//! the invariant form is -1/2 tr(xy) on every matrix realization (positive
//! definite on compact realizations since the basis matrices are skew).

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use thiserror::Error;

use crate::linalg::Tolerances;

#[derive(Debug, Error)]
pub enum LieAlgError {
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("basis is empty")]
    EmptyBasis,
    #[error("basis matrices have mismatched sizes")]
    SizeMismatch,
    #[error("invariant form is not positive definite")]
    DegenerateForm,
    #[error("algebra mismatch between representations")]
    AlgebraMismatch,
    #[error("element lies outside the algebra span (residual {0:.3e})")]
    NotInSpan(f64),
    #[error("not closed under bracket (residual {0:.3e})")]
    NotClosed(f64),
}

/// Finite-dimensional matrix Lie algebra with its invariant form.
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    ambient_matrix_dim: usize,
    basis: Vec<DMatrix<f64>>,
    gram: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
}

/// Invariant pairing -1/2 tr(xy); equals 1/2 <x, y>_F for skew matrices.
pub fn trace_form(x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
    -0.5 * (x * y).trace()
}

pub fn bracket(x: &DMatrix<f64>, y: &DMatrix<f64>) -> DMatrix<f64> {
    x * y - y * x
}

impl LieAlgebra {
    /// Build an algebra from a basis of square matrices. The Gram matrix of
    /// the trace form is computed and must be positive definite.
    pub fn from_basis(basis: Vec<DMatrix<f64>>) -> Result<Self, LieAlgError> {
        let first = basis.first().ok_or(LieAlgError::EmptyBasis)?;
        let n = first.nrows();
        if basis.iter().any(|m| m.nrows() != n || m.ncols() != n) {
            return Err(LieAlgError::SizeMismatch);
        }
        let dim = basis.len();
        let gram = DMatrix::from_fn(dim, dim, |i, j| trace_form(&basis[i], &basis[j]));
        let chol = gram.clone().cholesky().ok_or(LieAlgError::DegenerateForm)?;
        Ok(Self { ambient_matrix_dim: n, basis, gram, chol })
    }

    pub fn ambient_matrix_dim(&self) -> usize {
        self.ambient_matrix_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[DMatrix<f64>] {
        &self.basis
    }

    /// Gram matrix of the invariant form in this basis.
    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    /// Form applied to coordinate vectors.
    pub fn form_inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        x.dot(&(&self.gram * y))
    }

    pub fn form_norm(&self, x: &DVector<f64>) -> f64 {
        self.form_inner(x, x).max(0.0).sqrt()
    }

    /// Matrix realization of the coordinate vector.
    pub fn element(&self, coords: &DVector<f64>) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.ambient_matrix_dim, self.ambient_matrix_dim);
        for (c, b) in coords.iter().zip(&self.basis) {
            m += b * *c;
        }
        m
    }

    /// Solve the Gram system G c = rhs of the invariant form.
    pub fn solve_form(&self, rhs: &DVector<f64>) -> DVector<f64> {
        self.chol.solve(rhs)
    }

    /// Coordinates of `m` in the basis (via the form's Gram system), plus the
    /// Frobenius residual of the re-expansion.
    pub fn coords_of(&self, m: &DMatrix<f64>) -> (DVector<f64>, f64) {
        let rhs = DVector::from_fn(self.dim(), |a, _| trace_form(&self.basis[a], m));
        let coords = self.chol.solve(&rhs);
        let residual = (m - self.element(&coords)).norm();
        (coords, residual)
    }

    /// Bracket of two coordinate vectors, expanded back into coordinates.
    pub fn bracket_coords(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let (c, _) = self.coords_of(&bracket(&self.element(x), &self.element(y)));
        c
    }

    /// Max residual of [b_i, b_j] against the basis span.
    pub fn closure_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim() {
            for j in (i + 1)..self.dim() {
                let (_, r) = self.coords_of(&bracket(&self.basis[i], &self.basis[j]));
                worst = worst.max(r);
            }
        }
        worst
    }

    /// Max Ad-invariance defect |<[x,y],z> + <y,[x,z]>| over basis triples.
    pub fn ad_invariance_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for x in &self.basis {
            for y in &self.basis {
                let xy = bracket(x, y);
                for z in &self.basis {
                    let xz = bracket(x, z);
                    worst = worst.max((trace_form(&xy, z) + trace_form(y, &xz)).abs());
                }
            }
        }
        worst
    }

    /// Structure constants c_{ij}^k with [b_i, b_j] = sum_k c_{ij}^k b_k.
    pub fn structure_constants(&self) -> Vec<DMatrix<f64>> {
        let d = self.dim();
        let mut out = vec![DMatrix::zeros(d, d); d];
        for i in 0..d {
            for j in 0..d {
                let (c, _) = self.coords_of(&bracket(&self.basis[i], &self.basis[j]));
                for k in 0..d {
                    out[k][(i, j)] = c[k];
                }
            }
        }
        out
    }

    /// Verify that every basis element of `sub` lies in this algebra's span
    /// and that `sub` is bracket-closed; returns the worst residual.
    pub fn verify_subalgebra(&self, sub: &LieAlgebra, tol: &Tolerances) -> Result<f64, LieAlgError> {
        if sub.ambient_matrix_dim != self.ambient_matrix_dim {
            return Err(LieAlgError::SizeMismatch);
        }
        let mut worst = 0.0f64;
        for b in &sub.basis {
            let (_, r) = self.coords_of(b);
            if r > tol.residual_abs * b.norm().max(1.0) {
                return Err(LieAlgError::NotInSpan(r));
            }
            worst = worst.max(r);
        }
        let closure = sub.closure_residual();
        if closure > tol.residual_abs {
            return Err(LieAlgError::NotClosed(closure));
        }
        Ok(worst.max(closure))
    }

    /// Block-diagonal direct sum of algebras (basis = union of embedded bases).
    pub fn direct_sum(parts: &[LieAlgebra]) -> Result<Self, LieAlgError> {
        if parts.is_empty() {
            return Err(LieAlgError::EmptyBasis);
        }
        let total: usize = parts.iter().map(|a| a.ambient_matrix_dim).sum();
        let mut basis = Vec::new();
        let mut off = 0;
        for a in parts {
            for b in &a.basis {
                let mut m = DMatrix::zeros(total, total);
                m.view_mut((off, off), (a.ambient_matrix_dim, a.ambient_matrix_dim))
                    .copy_from(b);
                basis.push(m);
            }
            off += a.ambient_matrix_dim;
        }
        Self::from_basis(basis)
    }
}

/// A Lie algebra together with one action matrix per basis element on a real
/// representation space.
#[derive(Debug, Clone)]
pub struct Representation {
    algebra: LieAlgebra,
    space_dim: usize,
    action: Vec<DMatrix<f64>>,
}

impl Representation {
    pub fn new(
        algebra: LieAlgebra,
        action: Vec<DMatrix<f64>>,
    ) -> Result<Self, LieAlgError> {
        if action.len() != algebra.dim() {
            return Err(LieAlgError::SizeMismatch);
        }
        let first = action.first().ok_or(LieAlgError::EmptyBasis)?;
        let d = first.nrows();
        if action.iter().any(|m| m.nrows() != d || m.ncols() != d) {
            return Err(LieAlgError::SizeMismatch);
        }
        Ok(Self { algebra, space_dim: d, action })
    }

    /// Standard representation: each basis matrix acts on R^n by itself.
    pub fn standard(algebra: LieAlgebra) -> Self {
        let action = algebra.basis().to_vec();
        let space_dim = algebra.ambient_matrix_dim();
        Self { algebra, space_dim, action }
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn action(&self) -> &[DMatrix<f64>] {
        &self.action
    }

    /// Action matrix of a coordinate vector.
    pub fn rho(&self, coords: &DVector<f64>) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.space_dim, self.space_dim);
        for (c, a) in coords.iter().zip(&self.action) {
            m += a * *c;
        }
        m
    }

    pub fn act(&self, coords: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.space_dim);
        for (c, a) in coords.iter().zip(&self.action) {
            if *c != 0.0 {
                out += a * v * *c;
            }
        }
        out
    }

    /// Max defect of rho([b_i,b_j]) = [rho(b_i), rho(b_j)] over basis pairs.
    pub fn homomorphism_residual(&self) -> f64 {
        let d = self.algebra.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in (i + 1)..d {
                let (c, _) =
                    self.algebra.coords_of(&bracket(&self.algebra.basis()[i], &self.algebra.basis()[j]));
                let lhs = self.rho(&c);
                let rhs = bracket(&self.action[i], &self.action[j]);
                worst = worst.max((lhs - rhs).amax());
            }
        }
        worst
    }

    /// Max defect of rho(b_i)^T = -rho(b_i).
    pub fn skewness_residual(&self) -> f64 {
        self.action
            .iter()
            .map(|a| (a.transpose() + a).amax())
            .fold(0.0, f64::max)
    }

    /// Restriction to a subalgebra given in the same ambient realization.
    pub fn restrict_to(&self, sub: &LieAlgebra, tol: &Tolerances) -> Result<Representation, LieAlgError> {
        self.algebra.verify_subalgebra(sub, tol)?;
        let action = sub
            .basis()
            .iter()
            .map(|b| {
                let (c, _) = self.algebra.coords_of(b);
                self.rho(&c)
            })
            .collect();
        Representation::new(sub.clone(), action)
    }

    /// Same algebra, all action matrices scaled by lambda.
    pub fn scaled(&self, lambda: f64) -> Representation {
        Representation {
            algebra: self.algebra.clone(),
            space_dim: self.space_dim,
            action: self.action.iter().map(|a| a * lambda).collect(),
        }
    }

    /// Conjugation of the representation space by an orthogonal matrix.
    pub fn conjugated(&self, q: &DMatrix<f64>) -> Representation {
        let qt = q.transpose();
        Representation {
            algebra: self.algebra.clone(),
            space_dim: self.space_dim,
            action: self.action.iter().map(|a| q * a * &qt).collect(),
        }
    }

    /// Block-diagonal sum of representations of the same algebra.
    pub fn direct_sum(reps: &[Representation]) -> Result<Representation, LieAlgError> {
        let first = reps.first().ok_or(LieAlgError::EmptyBasis)?;
        for r in reps {
            if r.algebra.dim() != first.algebra.dim()
                || r.algebra.ambient_matrix_dim() != first.algebra.ambient_matrix_dim()
            {
                return Err(LieAlgError::AlgebraMismatch);
            }
            for (a, b) in r.algebra.basis().iter().zip(first.algebra.basis()) {
                if (a - b).amax() > 1e-12 {
                    return Err(LieAlgError::AlgebraMismatch);
                }
            }
        }
        let total: usize = reps.iter().map(|r| r.space_dim).sum();
        let action = (0..first.algebra.dim())
            .map(|a| {
                let mut m = DMatrix::zeros(total, total);
                let mut off = 0;
                for r in reps {
                    m.view_mut((off, off), (r.space_dim, r.space_dim)).copy_from(&r.action[a]);
                    off += r.space_dim;
                }
                m
            })
            .collect();
        Representation::new(first.algebra.clone(), action)
    }
}

fn unit(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m
}

/// so(n): skew-symmetric basis E_ij - E_ji, i < j, lexicographic.
pub fn so_basis(n: usize) -> Result<LieAlgebra, LieAlgError> {
    if n < 2 {
        return Err(LieAlgError::OutOfRange(format!("so({n}) needs n >= 2")));
    }
    let mut basis = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            basis.push(unit(n, i, j) - unit(n, j, i));
        }
    }
    LieAlgebra::from_basis(basis)
}

/// Realification of a complex n x n matrix A + iB as [[A, -B], [B, A]],
/// acting on R^2n = R^n (+) iR^n.
pub fn realify_complex(re: &DMatrix<f64>, im: &DMatrix<f64>) -> DMatrix<f64> {
    let n = re.nrows();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(re);
    m.view_mut((0, n), (n, n)).copy_from(&(-im));
    m.view_mut((n, 0), (n, n)).copy_from(im);
    m.view_mut((n, n), (n, n)).copy_from(re);
    m
}

/// su(hi - lo) generators embedded in the index block [lo, hi) of a complex
/// `total` x `total` matrix, realified. Empty when the block has size 1.
pub fn su_basis_matrices_embedded(total: usize, lo: usize, hi: usize) -> Vec<DMatrix<f64>> {
    let n = total;
    let mut basis = Vec::new();
    let z = DMatrix::zeros(n, n);
    for i in lo..hi {
        for j in (i + 1)..hi {
            // E_ij - E_ji and i(E_ij + E_ji)
            basis.push(realify_complex(&(unit(n, i, j) - unit(n, j, i)), &z));
            basis.push(realify_complex(&z, &(unit(n, i, j) + unit(n, j, i))));
        }
    }
    for k in lo..hi.saturating_sub(1) {
        basis.push(realify_complex(&z, &(unit(n, k, k) - unit(n, k + 1, k + 1))));
    }
    basis
}

/// Realification of the diagonal imaginary matrix i * diag(entries).
pub fn complex_diag(total: usize, entries: &[f64]) -> DMatrix<f64> {
    let mut im = DMatrix::zeros(total, total);
    for (a, e) in entries.iter().enumerate() {
        im[(a, a)] = *e;
    }
    realify_complex(&DMatrix::zeros(total, total), &im)
}

fn su_basis_matrices(n: usize) -> Vec<DMatrix<f64>> {
    su_basis_matrices_embedded(n, 0, n)
}

/// su(n) realized as real 2n x 2n skew-symmetric matrices; dim n^2 - 1.
pub fn su_basis(n: usize) -> Result<LieAlgebra, LieAlgError> {
    if n < 1 {
        return Err(LieAlgError::OutOfRange(format!("su({n}) needs n >= 1")));
    }
    if n == 1 {
        return Err(LieAlgError::OutOfRange("su(1) is trivial".into()));
    }
    LieAlgebra::from_basis(su_basis_matrices(n))
}

/// u(n) = su(n) plus the real matrix of i*I; dim n^2.
pub fn u_basis(n: usize) -> Result<LieAlgebra, LieAlgError> {
    if n < 1 {
        return Err(LieAlgError::OutOfRange(format!("u({n}) needs n >= 1")));
    }
    let mut basis = if n >= 2 { su_basis_matrices(n) } else { Vec::new() };
    basis.push(realify_complex(&DMatrix::zeros(n, n), &DMatrix::identity(n, n)));
    LieAlgebra::from_basis(basis)
}

/// Left-multiplication block of a quaternion a + bi + cj + dk on R^4
/// with basis order (1, i, j, k); extended entrywise to n x n matrices.
pub fn realify_quaternion(parts: &[DMatrix<f64>; 4]) -> DMatrix<f64> {
    let n = parts[0].nrows();
    let (a, b, c, d) = (&parts[0], &parts[1], &parts[2], &parts[3]);
    let blocks: [[DMatrix<f64>; 4]; 4] = [
        [a.clone(), -b, -c, -d],
        [b.clone(), a.clone(), -d, c.clone()],
        [c.clone(), d.clone(), a.clone(), -b],
        [d.clone(), -c, b.clone(), a.clone()],
    ];
    let mut m = DMatrix::zeros(4 * n, 4 * n);
    for (bi, row) in blocks.iter().enumerate() {
        for (bj, blk) in row.iter().enumerate() {
            m.view_mut((bi * n, bj * n), (n, n)).copy_from(blk);
        }
    }
    m
}

fn quat_mats(n: usize) -> impl Fn(usize, DMatrix<f64>) -> [DMatrix<f64>; 4] {
    move |unit_idx, m| {
        let mut parts = [
            DMatrix::zeros(n, n),
            DMatrix::zeros(n, n),
            DMatrix::zeros(n, n),
            DMatrix::zeros(n, n),
        ];
        parts[unit_idx] = m;
        parts
    }
}

/// sp(hi - lo) generators embedded in the index block [lo, hi) of a
/// quaternionic `total` x `total` matrix, realified.
pub fn sp_basis_matrices_embedded(total: usize, lo: usize, hi: usize) -> Vec<DMatrix<f64>> {
    let n = total;
    let put = quat_mats(n);
    let mut basis = Vec::new();
    // Diagonal: i, j, k at each diagonal entry.
    for a in lo..hi {
        for q in 1..4 {
            basis.push(realify_quaternion(&put(q, unit(n, a, a))));
        }
    }
    // Off-diagonal: E_ab - E_ba (real) and q(E_ab + E_ba) for q in {i,j,k}.
    for a in lo..hi {
        for b in (a + 1)..hi {
            basis.push(realify_quaternion(&put(0, unit(n, a, b) - unit(n, b, a))));
            for q in 1..4 {
                basis.push(realify_quaternion(&put(q, unit(n, a, b) + unit(n, b, a))));
            }
        }
    }
    basis
}

fn sp_basis_matrices(n: usize) -> Vec<DMatrix<f64>> {
    sp_basis_matrices_embedded(n, 0, n)
}

/// sp(n) realized as real 4n x 4n skew-symmetric matrices; dim n(2n+1).
pub fn sp_basis(n: usize) -> Result<LieAlgebra, LieAlgError> {
    if n < 1 {
        return Err(LieAlgError::OutOfRange(format!("sp({n}) needs n >= 1")));
    }
    LieAlgebra::from_basis(sp_basis_matrices(n))
}

// ---------------------------------------------------------------------------
// Division-algebra multiplication tables (Cayley-Dickson), used for the
// Clifford generators.
// ---------------------------------------------------------------------------

type Quat = [i64; 4];

fn quat_conj(q: Quat) -> Quat {
    [q[0], -q[1], -q[2], -q[3]]
}

fn quat_mul(p: Quat, q: Quat) -> Quat {
    [
        p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
        p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
        p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
        p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0],
    ]
}

type Oct = [i64; 8];

fn oct_mul(p: Oct, q: Oct) -> Oct {
    // (a, b)(c, d) = (ac - conj(d) b, d a + b conj(c))
    let (a, b): (Quat, Quat) = ([p[0], p[1], p[2], p[3]], [p[4], p[5], p[6], p[7]]);
    let (c, d): (Quat, Quat) = ([q[0], q[1], q[2], q[3]], [q[4], q[5], q[6], q[7]]);
    let mut out = [0i64; 8];
    let first = sub4(quat_mul(a, c), quat_mul(quat_conj(d), b));
    let second = add4(quat_mul(d, a), quat_mul(b, quat_conj(c)));
    out[..4].copy_from_slice(&first);
    out[4..].copy_from_slice(&second);
    out
}

fn add4(x: Quat, y: Quat) -> Quat {
    [x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]]
}

fn sub4(x: Quat, y: Quat) -> Quat {
    [x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3]]
}

/// Left-multiplication matrices of the unit basis of a division algebra of
/// dimension `dim` in {1, 2, 4, 8}; integer entries in {-1, 0, 1}.
fn left_mult_matrices(dim: usize) -> Vec<DMatrix<f64>> {
    (0..dim)
        .map(|a| {
            DMatrix::from_fn(dim, dim, |i, j| {
                let mut ea = [0i64; 8];
                let mut ej = [0i64; 8];
                ea[a] = 1;
                ej[j] = 1;
                let prod = oct_mul(ea, ej);
                prod[i] as f64
            })
        })
        .collect()
}

/// Spinor space dimension of the Clifford construction for rank n.
pub fn clifford_dim(n: usize) -> usize {
    match n {
        1 => 1,
        2 => 2,
        3 => 4,
        4 | 5 => 8,
        6..=9 => 16,
        _ => 0,
    }
}

/// Real symmetric gamma matrices with gamma_i gamma_j + gamma_j gamma_i =
/// 2 delta_ij I, integer entries in {-1, 0, 1}.
///
/// For n >= 3 the construction doubles a division algebra A of dimension
/// m = d/2: gamma_a = [[0, L_a^T], [L_a, 0]] over the unit basis of A, and
/// gamma_{m+1} = diag(I, -I). Composition (|xy| = |x||y|) gives the
/// anticommutation relations exactly.
pub fn clifford_generators(n: usize) -> Result<Vec<DMatrix<f64>>, LieAlgError> {
    if !(1..=9).contains(&n) {
        return Err(LieAlgError::OutOfRange(format!("clifford rank {n} not in 1..=9")));
    }
    match n {
        1 => Ok(vec![DMatrix::from_element(1, 1, 1.0)]),
        2 => Ok(vec![
            DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]),
            DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]),
        ]),
        _ => {
            let m = clifford_dim(n) / 2;
            let left = left_mult_matrices(m);
            let mut gammas = Vec::with_capacity(n);
            for l in left.iter().take(n.min(m)) {
                let mut g = DMatrix::zeros(2 * m, 2 * m);
                g.view_mut((0, m), (m, m)).copy_from(&l.transpose());
                g.view_mut((m, 0), (m, m)).copy_from(l);
                gammas.push(g);
            }
            if n > m {
                let mut g = DMatrix::<f64>::identity(2 * m, 2 * m);
                for i in m..2 * m {
                    g[(i, i)] = -1.0;
                }
                gammas.push(g);
            }
            Ok(gammas)
        }
    }
}

/// Max entry of |gamma_i gamma_j + gamma_j gamma_i - 2 delta_ij I|.
pub fn anticommutation_residual(gammas: &[DMatrix<f64>]) -> f64 {
    let d = gammas[0].nrows();
    let mut worst = 0.0f64;
    for (i, gi) in gammas.iter().enumerate() {
        for (j, gj) in gammas.iter().enumerate() {
            let mut anti = gi * gj + gj * gi;
            if i == j {
                anti -= DMatrix::identity(d, d) * 2.0;
            }
            worst = worst.max(anti.amax());
        }
    }
    worst
}

/// Spin representation: algebra spanned by {1/2 gamma_i gamma_j, i < j}
/// acting on the spinor space by the same matrices.
pub fn spin_rep(n: usize) -> Result<Representation, LieAlgError> {
    if !(2..=9).contains(&n) {
        return Err(LieAlgError::OutOfRange(format!("spin({n}) not in 2..=9")));
    }
    let gammas = clifford_generators(n)?;
    let mut basis = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            basis.push(&gammas[i] * &gammas[j] * 0.5);
        }
    }
    let algebra = LieAlgebra::from_basis(basis)?;
    Ok(Representation::standard(algebra))
}

/// Split subalgebra spin(k).spin(9-k) of spin(9):
/// span{1/2 g_i g_j : i < j <= k} (+) span{1/2 g_i g_j : k < i < j <= 9}.
pub fn spin_subalgebra(k_split: usize) -> Result<LieAlgebra, LieAlgError> {
    if !(6..=9).contains(&k_split) {
        return Err(LieAlgError::OutOfRange(format!("split {k_split} not in 6..=9")));
    }
    let gammas = clifford_generators(9)?;
    let mut basis = Vec::new();
    for i in 0..k_split {
        for j in (i + 1)..k_split {
            basis.push(&gammas[i] * &gammas[j] * 0.5);
        }
    }
    for i in k_split..9 {
        for j in (i + 1)..9 {
            basis.push(&gammas[i] * &gammas[j] * 0.5);
        }
    }
    LieAlgebra::from_basis(basis)
}

/// spin(7) in the split position, without the so(2) = span{1/2 g_8 g_9}
/// factor. Negative control for the octonionic catalog entries.
pub fn spin7_bare() -> Result<LieAlgebra, LieAlgError> {
    let gammas = clifford_generators(9)?;
    let mut basis = Vec::new();
    for i in 0..7 {
        for j in (i + 1)..7 {
            basis.push(&gammas[i] * &gammas[j] * 0.5);
        }
    }
    LieAlgebra::from_basis(basis)
}

/// The irreducible 5-dimensional representation of so(3) on symmetric
/// traceless 3x3 matrices, S -> [xi, S].
pub fn so3_irrep5() -> Result<Representation, LieAlgError> {
    let algebra = so_basis(3)?;
    let s2 = 1.0 / 2f64.sqrt();
    let s6 = 1.0 / 6f64.sqrt();
    let sym_basis: Vec<DMatrix<f64>> = vec![
        (unit(3, 0, 0) - unit(3, 1, 1)) * s2,
        (unit(3, 0, 0) + unit(3, 1, 1) - unit(3, 2, 2) * 2.0) * s6,
        (unit(3, 0, 1) + unit(3, 1, 0)) * s2,
        (unit(3, 0, 2) + unit(3, 2, 0)) * s2,
        (unit(3, 1, 2) + unit(3, 2, 1)) * s2,
    ];
    // sym_basis is orthonormal under <A, B> = tr(AB).
    let action = algebra
        .basis()
        .iter()
        .map(|xi| {
            DMatrix::from_fn(5, 5, |i, j| {
                (&sym_basis[i] * bracket(xi, &sym_basis[j])).trace()
            })
        })
        .collect();
    Representation::new(algebra, action)
}

/// u(1) acting on R^{2m} = C^m with the given integer weights: the single
/// generator acts as blockdiag(w_1 J, ..., w_m J).
pub fn weighted_u1(weights: &[i64]) -> Result<Representation, LieAlgError> {
    if weights.is_empty() {
        return Err(LieAlgError::EmptyBasis);
    }
    let j = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
    let algebra = LieAlgebra::from_basis(vec![j.clone()])?;
    let m = weights.len();
    let mut act = DMatrix::zeros(2 * m, 2 * m);
    for (t, w) in weights.iter().enumerate() {
        act.view_mut((2 * t, 2 * t), (2, 2)).copy_from(&(&j * *w as f64));
    }
    Representation::new(algebra, vec![act])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix_exp;

    #[test]
    fn so_dims() {
        assert_eq!(so_basis(3).unwrap().dim(), 3);
        assert_eq!(so_basis(9).unwrap().dim(), 36);
        assert!(so_basis(1).is_err());
    }

    #[test]
    fn so4_closure_near_exact() {
        let a = so_basis(4).unwrap();
        assert!(a.closure_residual() < 1e-12);
        assert!(a.ad_invariance_residual() < 1e-12);
    }

    #[test]
    fn su_sp_u_dims() {
        let su2 = su_basis(2).unwrap();
        assert_eq!(su2.dim(), 3);
        assert_eq!(su2.ambient_matrix_dim(), 4);
        let sp1 = sp_basis(1).unwrap();
        assert_eq!(sp1.dim(), 3);
        assert_eq!(sp1.ambient_matrix_dim(), 4);
        assert_eq!(u_basis(3).unwrap().dim(), 9);
        assert_eq!(sp_basis(2).unwrap().dim(), 10);
        assert_eq!(su_basis(4).unwrap().dim(), 15);
    }

    #[test]
    fn su_sp_closed_and_skew() {
        for alg in [su_basis(3).unwrap(), sp_basis(2).unwrap(), u_basis(2).unwrap()] {
            assert!(alg.closure_residual() < 1e-12);
            for b in alg.basis() {
                assert!((b.transpose() + b).amax() < 1e-15, "basis not skew");
            }
        }
    }

    #[test]
    fn clifford_sizes_and_anticommutation() {
        for n in 1..=9 {
            let g = clifford_generators(n).unwrap();
            assert_eq!(g.len(), n);
            assert_eq!(g[0].nrows(), clifford_dim(n));
            assert_eq!(anticommutation_residual(&g), 0.0, "rank {n}");
            for gi in &g {
                assert_eq!((gi.transpose() - gi).amax(), 0.0, "gamma not symmetric");
                for e in gi.iter() {
                    assert!(*e == 0.0 || *e == 1.0 || *e == -1.0);
                }
            }
        }
        assert!(clifford_generators(10).is_err());
    }

    #[test]
    fn clifford_volume_element_squares_to_identity() {
        // gamma_1 ... gamma_8 squares to +I in the rank-8 construction.
        let g = clifford_generators(8).unwrap();
        let mut vol = DMatrix::identity(16, 16);
        for gi in &g {
            vol = vol * gi;
        }
        assert!((&vol * &vol - DMatrix::identity(16, 16)).amax() == 0.0);
    }

    #[test]
    fn spin9_dim_and_residuals() {
        let rep = spin_rep(9).unwrap();
        assert_eq!(rep.algebra().dim(), 36);
        assert_eq!(rep.space_dim(), 16);
        assert!(rep.skewness_residual() < 1e-14);
        assert!(rep.homomorphism_residual() < 1e-12);
    }

    #[test]
    fn spin8_homomorphism_near_exact() {
        let rep = spin_rep(8).unwrap();
        assert!(rep.homomorphism_residual() < 1e-12);
        assert!(rep.algebra().closure_residual() < 1e-12);
    }

    #[test]
    fn spin_structure_constants_match_so() {
        for n in [3usize, 5, 8] {
            let spin = spin_rep(n).unwrap();
            let so = so_basis(n).unwrap();
            // Both bases are ordered by the same (i, j) pairs.
            let cs = spin.algebra().structure_constants();
            let cso = so.structure_constants();
            let worst = cs
                .iter()
                .zip(&cso)
                .map(|(a, b)| (a - b).amax())
                .fold(0.0, f64::max);
            assert!(worst < 1e-10, "spin({n}) structure constants differ by {worst}");
        }
    }

    #[test]
    fn spin2_double_cover_period() {
        // exp of the single spin(2) generator has period 4 pi on spinors.
        let rep = spin_rep(2).unwrap();
        let gen = &rep.action()[0];
        let two_pi = 2.0 * std::f64::consts::PI;
        let half_turn = matrix_exp(&(gen * two_pi)).unwrap();
        let full_turn = matrix_exp(&(gen * 2.0 * two_pi)).unwrap();
        let id = DMatrix::identity(rep.space_dim(), rep.space_dim());
        assert!((&half_turn + &id).amax() < 1e-12, "exp(2 pi x) should be -I");
        assert!((&full_turn - &id).amax() < 1e-12, "exp(4 pi x) should be I");
    }

    #[test]
    fn spin_subalgebra_dims() {
        assert_eq!(spin_subalgebra(9).unwrap().dim(), 36);
        assert_eq!(spin_subalgebra(8).unwrap().dim(), 28);
        assert_eq!(spin_subalgebra(7).unwrap().dim(), 22);
        assert_eq!(spin_subalgebra(6).unwrap().dim(), 18);
        assert!(spin_subalgebra(5).is_err());
    }

    #[test]
    fn spin_subalgebras_closed_inside_spin9() {
        let tol = Tolerances::default();
        let full = spin_rep(9).unwrap();
        for k in 6..=9 {
            let sub = spin_subalgebra(k).unwrap();
            full.algebra().verify_subalgebra(&sub, &tol).unwrap();
        }
        full.algebra().verify_subalgebra(&spin7_bare().unwrap(), &tol).unwrap();
    }

    #[test]
    fn direct_sum_blocks() {
        let so3 = so_basis(3).unwrap();
        let std = Representation::standard(so3);
        let sum = Representation::direct_sum(&[std.clone(), std.clone()]).unwrap();
        assert_eq!(sum.space_dim(), 6);
        assert!(sum.homomorphism_residual() < 1e-13);
        let single = Representation::direct_sum(&[std.clone()]).unwrap();
        assert_eq!(single.space_dim(), std.space_dim());
    }

    #[test]
    fn weighted_circle_blocks() {
        let rep = weighted_u1(&[1, 2]).unwrap();
        assert_eq!(rep.space_dim(), 4);
        let a = &rep.action()[0];
        assert_eq!(a[(1, 0)], 1.0);
        assert_eq!(a[(3, 2)], 2.0);
        assert!(rep.skewness_residual() == 0.0);
    }

    #[test]
    fn so3_irrep5_is_orthogonal_rep() {
        let rep = so3_irrep5().unwrap();
        assert_eq!(rep.space_dim(), 5);
        assert!(rep.skewness_residual() < 1e-14);
        assert!(rep.homomorphism_residual() < 1e-13);
    }

    #[test]
    fn killing_rotation_example() {
        // so(2) generator J on R^2 sends e1 to e2.
        let so2 = so_basis(2).unwrap();
        let rep = Representation::standard(so2);
        let v = DVector::from_row_slice(&[1.0, 0.0]);
        let coords = DVector::from_row_slice(&[1.0]);
        let out = rep.act(&coords, &v);
        assert!((out[0]).abs() < 1e-15 && out[1].abs() == 1.0);
    }
}
