//! The decision engine: polarity of orthogonal representations through the
//! orthogonality criterion at a regular point, the fixed-point test on a
//! symmetric pair (slice polarity + Lie triple section), product splitting,
//! and orbit-comparison utilities.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::liealg::{LieAlgError, LieAlgebra, Representation};
use crate::linalg::{
    numeric_rank, orthogonal_complement, orthonormalize, random_unit_vector, Subspace, Tolerances,
};
use crate::symspace::{SymSpaceError, SymmetricPair};

#[derive(Debug, Error)]
pub enum PolarityError {
    #[error("sample budget must be at least 1")]
    EmptySampleBudget,
    #[error("orbit rank unstable across samples: max dimension {max_dim} attained by only {hits} of {samples} samples")]
    RankInstability { max_dim: usize, hits: usize, samples: usize },
    #[error(transparent)]
    Subalgebra(#[from] LieAlgError),
    #[error(transparent)]
    SymSpace(#[from] SymSpaceError),
    #[error("pair is not a product (single factor)")]
    NotAProduct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Polar,
    NotPolar,
    /// Residuals in the gray zone between residual_abs and 100x residual_abs;
    /// never silently rounded to a verdict.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddedAssumption {
    /// Rank-one space or simply connected product of such; totally geodesic
    /// submanifolds are embedded there.
    Justified,
    Unverified,
}

/// Outcome of a polarity check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolarityReport {
    pub verdict: Verdict,
    pub cohomogeneity: usize,
    pub principal_orbit_dim: usize,
    /// Orthonormal basis of the candidate section (rows).
    pub section: Vec<Vec<f64>>,
    pub max_orthogonality_residual: f64,
    pub lie_triple_residual: Option<f64>,
    pub flat_section: Option<bool>,
    pub embedded_section_assumed: EmbeddedAssumption,
    pub regular_point: Vec<f64>,
    pub seed: u64,
}

impl PolarityReport {
    pub fn section_subspace(&self, tol: &Tolerances) -> Subspace {
        let dim = self.regular_point.len();
        let vectors: Vec<DVector<f64>> =
            self.section.iter().map(|r| DVector::from_row_slice(r)).collect();
        orthonormalize(&vectors, dim, tol).expect("stored section basis is well formed")
    }
}

/// Covariant derivative of the Killing field of `xi` at the origin of a
/// linear action: exactly rho(xi) v.
pub fn killing_derivative(
    rep: &Representation,
    xi: &DVector<f64>,
    v: &DVector<f64>,
) -> DVector<f64> {
    rep.act(xi, v)
}

/// Tangent space of the orbit through v: orthonormalized span of
/// {rho(b_a) v} over the algebra basis.
pub fn orbit_tangent(rep: &Representation, v: &DVector<f64>, tol: &Tolerances) -> Subspace {
    let vectors: Vec<DVector<f64>> = rep.action().iter().map(|a| a * v).collect();
    orthonormalize(&vectors, rep.space_dim(), tol).expect("action dims are consistent")
}

fn orbit_dim(rep: &Representation, v: &DVector<f64>, tol: &Tolerances) -> usize {
    let mut m = DMatrix::zeros(rep.space_dim(), rep.algebra().dim());
    for (a, act) in rep.action().iter().enumerate() {
        m.set_column(a, &(act * v));
    }
    numeric_rank(&m, tol)
}

/// A regular point and principal orbit data from seeded sampling.
#[derive(Debug, Clone)]
pub struct PrincipalOrbitData {
    pub point: DVector<f64>,
    pub orbit_dim: usize,
    /// All sampled points attaining the principal dimension.
    pub regular_points: Vec<DVector<f64>>,
}

/// Default sampling budget: regular points are generic, 32 samples are
/// plenty at catalog dimensions.
pub const DEFAULT_SAMPLES: usize = 32;

/// Minimum number of samples that must attain the max orbit dimension for
/// the rank to count as stable.
const RANK_STABILITY_HITS: usize = 3;

/// Draw `samples` unit vectors from the seeded generator and return one
/// attaining the maximal orbit dimension. Deterministic given the seed.
pub fn principal_orbit_data(
    rep: &Representation,
    seed: u64,
    samples: usize,
    tol: &Tolerances,
) -> Result<PrincipalOrbitData, PolarityError> {
    if samples == 0 {
        return Err(PolarityError::EmptySampleBudget);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<PrincipalOrbitData> = None;
    let mut all: Vec<(DVector<f64>, usize)> = Vec::with_capacity(samples);
    for _ in 0..samples {
        let v = random_unit_vector(&mut rng, rep.space_dim());
        let d = orbit_dim(rep, &v, tol);
        all.push((v.clone(), d));
        match &mut best {
            Some(b) if d <= b.orbit_dim => {}
            _ => {
                best = Some(PrincipalOrbitData { point: v, orbit_dim: d, regular_points: vec![] })
            }
        }
    }
    let mut best = best.expect("samples >= 1");
    best.regular_points = all
        .into_iter()
        .filter(|(_, d)| *d == best.orbit_dim)
        .map(|(v, _)| v)
        .collect();
    let hits = best.regular_points.len();
    if hits < RANK_STABILITY_HITS.min(samples) {
        return Err(PolarityError::RankInstability { max_dim: best.orbit_dim, hits, samples });
    }
    Ok(best)
}

/// Max |<rho(b_a) w, s>| over the algebra basis and the section basis pairs.
/// By bilinearity this bounds the criterion over the whole section.
pub fn orthogonality_residual(rep: &Representation, section: &Subspace) -> f64 {
    let mut worst = 0.0f64;
    for act in rep.action() {
        for w in section.basis() {
            let aw = act * w;
            for s in section.basis() {
                worst = worst.max(aw.dot(s).abs());
            }
        }
    }
    worst
}

/// Residual of the orthogonality criterion at a single point q of the
/// section: max |<rho(b_a) q, s>|.
pub fn orthogonality_residual_at(rep: &Representation, section: &Subspace, q: &DVector<f64>) -> f64 {
    let mut worst = 0.0f64;
    for act in rep.action() {
        let aq = act * q;
        for s in section.basis() {
            worst = worst.max(aq.dot(s).abs());
        }
    }
    worst
}

/// Multiplier separating structural failure from numerical noise: a
/// not_polar verdict requires residuals above 100x residual_abs at every
/// sampled regular point.
pub const NOT_POLAR_MARGIN: f64 = 100.0;

/// Polarity of an orthogonal representation at the origin: candidate section
/// = normal space of the orbit at a regular point; polar iff the Killing
/// directions of the section are orthogonal to the section.
pub fn is_polar_rep(
    rep: &Representation,
    seed: u64,
    samples: usize,
    tol: &Tolerances,
) -> Result<PolarityReport, PolarityError> {
    let pod = principal_orbit_data(rep, seed, samples, tol)?;
    let cohomogeneity = rep.space_dim() - pod.orbit_dim;

    let section_at = |v: &DVector<f64>| -> (Subspace, f64) {
        let tangent = orbit_tangent(rep, v, tol);
        let section = orthogonal_complement(&tangent);
        let res = orthogonality_residual(rep, &section);
        (section, res)
    };

    let (section, residual) = section_at(&pod.point);
    let verdict = if residual <= tol.residual_abs {
        Verdict::Polar
    } else {
        // Certify failure against every sampled regular point.
        let min_res = pod
            .regular_points
            .iter()
            .map(|v| section_at(v).1)
            .fold(f64::INFINITY, f64::min);
        if min_res > NOT_POLAR_MARGIN * tol.residual_abs {
            Verdict::NotPolar
        } else {
            Verdict::Inconclusive
        }
    };

    Ok(PolarityReport {
        verdict,
        cohomogeneity,
        principal_orbit_dim: pod.orbit_dim,
        section: section.basis().iter().map(|b| b.iter().copied().collect()).collect(),
        max_orthogonality_residual: residual,
        lie_triple_residual: None,
        flat_section: None,
        embedded_section_assumed: EmbeddedAssumption::Unverified,
        regular_point: pod.point.iter().copied().collect(),
        seed,
    })
}

/// Fixed-point polarity test on a symmetric pair: the slice representation
/// of h on p must be polar and the section must be a Lie triple system
/// (equivalently, tangent to a totally geodesic submanifold).
pub fn check_fixed_point_polar(
    pair: &SymmetricPair,
    h: &LieAlgebra,
    seed: u64,
    samples: usize,
    tol: &Tolerances,
) -> Result<PolarityReport, PolarityError> {
    let rep_h = pair.k_action().restrict_to(h, tol)?;
    let mut report = is_polar_rep(&rep_h, seed, samples, tol)?;
    report.embedded_section_assumed = if pair.embedded_justified() {
        EmbeddedAssumption::Justified
    } else {
        EmbeddedAssumption::Unverified
    };
    if report.verdict == Verdict::Polar {
        let section = report.section_subspace(tol);
        let (is_triple, lt_res) = pair.is_lie_triple(&section, tol);
        report.lie_triple_residual = Some(lt_res);
        if is_triple {
            let (flat, _) = pair
                .is_flat_triple(&section, tol)
                .expect("triple verified just above");
            report.flat_section = Some(flat);
        } else if lt_res > NOT_POLAR_MARGIN * tol.residual_abs {
            report.verdict = Verdict::NotPolar;
        } else {
            report.verdict = Verdict::Inconclusive;
        }
    }
    Ok(report)
}

/// Per-factor outcome of the product splitting check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorSplit {
    pub factor_index: usize,
    pub section_dim: usize,
    pub factor_cohomogeneity: usize,
    pub orthogonality_residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitReport {
    pub overall: PolarityReport,
    /// Max norm of a re-based section vector outside its own factor.
    pub max_cross_factor_leakage: f64,
    pub section_splits: bool,
    pub factors: Vec<FactorSplit>,
}

/// Splitting check for a product pair: the section must decompose as a
/// direct sum of per-factor sections, and each factor section must certify
/// polarity of the induced factor action.
pub fn check_product_splitting(
    pair: &SymmetricPair,
    h: &LieAlgebra,
    seed: u64,
    samples: usize,
    tol: &Tolerances,
) -> Result<SplitReport, PolarityError> {
    if pair.factors().len() < 2 {
        return Err(PolarityError::NotAProduct);
    }
    let overall = check_fixed_point_polar(pair, h, seed, samples, tol)?;
    if overall.verdict != Verdict::Polar {
        return Ok(SplitReport {
            overall,
            max_cross_factor_leakage: f64::NAN,
            section_splits: false,
            factors: vec![],
        });
    }
    let section = overall.section_subspace(tol);
    let rep_h = pair.k_action().restrict_to(h, tol)?;

    // Factor-aligned re-basis: per factor, orthonormalize the projections of
    // the section basis onto the factor's coordinate block. The section
    // splits iff the per-factor pieces exhaust its dimension and stay inside
    // the section.
    let p_dim = pair.p_dim();
    let mut rebased: Vec<(usize, DVector<f64>)> = Vec::new();
    for (fi, f) in pair.factors().iter().enumerate() {
        let projected: Vec<DVector<f64>> = section
            .basis()
            .iter()
            .map(|s| {
                let mut v = DVector::zeros(p_dim);
                for r in 0..f.p_dim {
                    v[f.p_offset + r] = s[f.p_offset + r];
                }
                v
            })
            .collect();
        let piece = orthonormalize(&projected, p_dim, tol).expect("dims fixed");
        for b in piece.basis() {
            rebased.push((fi, b.clone()));
        }
    }

    let mut leakage = 0.0f64;
    let mut splits = rebased.len() == section.dim();
    for (fi, v) in &rebased {
        let f = &pair.factors()[*fi];
        // Outside-own-factor mass (zero by construction of the projection;
        // reported for the record) and membership in the section.
        let mut outside = 0.0f64;
        for r in 0..p_dim {
            if r < f.p_offset || r >= f.p_offset + f.p_dim {
                outside += v[r] * v[r];
            }
        }
        leakage = leakage.max(outside.sqrt());
        let (inside, r) = section.contains(v, tol);
        if !inside {
            splits = false;
        }
        leakage = leakage.max(r);
    }
    if leakage > tol.residual_abs {
        splits = false;
    }

    // Factor-level certification: restrict the h-action to each block and
    // check the projected section against the factor criterion.
    let mut factor_reports = Vec::new();
    if splits {
        for (fi, f) in pair.factors().iter().enumerate() {
            let block_action: Vec<DMatrix<f64>> = rep_h
                .action()
                .iter()
                .map(|a| DMatrix::from_fn(f.p_dim, f.p_dim, |i, j| a[(f.p_offset + i, f.p_offset + j)]))
                .collect();
            let factor_rep = Representation::new(h.clone(), block_action)?;
            let factor_section_vecs: Vec<DVector<f64>> = rebased
                .iter()
                .filter(|(g, _)| *g == fi)
                .map(|(_, v)| {
                    DVector::from_fn(f.p_dim, |i, _| v[f.p_offset + i])
                })
                .collect();
            let factor_section =
                orthonormalize(&factor_section_vecs, f.p_dim, tol).expect("dims fixed");
            let pod = principal_orbit_data(&factor_rep, seed.wrapping_add(fi as u64 + 1), samples, tol)?;
            let factor_coh = f.p_dim - pod.orbit_dim;
            let res = orthogonality_residual(&factor_rep, &factor_section);
            if res > tol.residual_abs || factor_section.dim() != factor_coh {
                splits = false;
            }
            factor_reports.push(FactorSplit {
                factor_index: fi,
                section_dim: factor_section.dim(),
                factor_cohomogeneity: factor_coh,
                orthogonality_residual: res,
            });
        }
    }

    Ok(SplitReport {
        overall,
        max_cross_factor_leakage: leakage,
        section_splits: splits,
        factors: factor_reports,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum OrbitComparison {
    Equivalent,
    Differ { witness: Vec<f64>, dims: (usize, usize) },
}

/// Desk-scale surrogate for orbit equivalence: equality of orbit tangent
/// distributions at seeded sample points. Not a proof.
pub fn compare_orbits(
    rep1: &Representation,
    rep2: &Representation,
    seed: u64,
    samples: usize,
    tol: &Tolerances,
) -> Result<OrbitComparison, PolarityError> {
    if samples == 0 {
        return Err(PolarityError::EmptySampleBudget);
    }
    assert_eq!(rep1.space_dim(), rep2.space_dim(), "representation spaces differ");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let v = random_unit_vector(&mut rng, rep1.space_dim());
        let t1 = orbit_tangent(rep1, &v, tol);
        let t2 = orbit_tangent(rep2, &v, tol);
        if !t1.spans_same(&t2, tol) {
            return Ok(OrbitComparison::Differ {
                witness: v.iter().copied().collect(),
                dims: (t1.dim(), t2.dim()),
            });
        }
    }
    Ok(OrbitComparison::Equivalent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{so3_irrep5, so_basis, spin_rep, weighted_u1, Representation};
    use crate::linalg::Tolerances;
    use rand::Rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn killing_derivative_is_linear_action() {
        let rep = Representation::standard(so_basis(2).unwrap());
        let xi0 = DVector::from_row_slice(&[0.0]);
        let v = DVector::from_row_slice(&[1.0, 0.0]);
        assert_eq!(killing_derivative(&rep, &xi0, &v), DVector::zeros(2));
        let xi = DVector::from_row_slice(&[1.0]);
        let out = killing_derivative(&rep, &xi, &v);
        assert_eq!(out[0], 0.0);
        assert_eq!(out[1].abs(), 1.0);

        // Bilinearity on seeded random inputs.
        let rep3 = Representation::standard(so_basis(3).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let a = DVector::from_fn(3, |_, _| rng.gen_range(-1.0..1.0));
            let b = DVector::from_fn(3, |_, _| rng.gen_range(-1.0..1.0));
            let v = DVector::from_fn(3, |_, _| rng.gen_range(-1.0..1.0));
            let w = DVector::from_fn(3, |_, _| rng.gen_range(-1.0..1.0));
            let lhs = killing_derivative(&rep3, &(&a + &b), &(&v + &w));
            let rhs = killing_derivative(&rep3, &a, &v)
                + killing_derivative(&rep3, &a, &w)
                + killing_derivative(&rep3, &b, &v)
                + killing_derivative(&rep3, &b, &w);
            assert!((lhs - rhs).amax() < 1e-12);
        }
    }

    #[test]
    fn orbit_tangent_examples() {
        let rep = Representation::standard(so_basis(3).unwrap());
        let zero = DVector::zeros(3);
        assert_eq!(orbit_tangent(&rep, &zero, &tol()).dim(), 0);
        let e1 = DVector::from_row_slice(&[1.0, 0.0, 0.0]);
        let t = orbit_tangent(&rep, &e1, &tol());
        assert_eq!(t.dim(), 2);
        assert!(t.contains(&DVector::from_row_slice(&[0.0, 1.0, 0.0]), &tol()).0);
        assert!(t.contains(&DVector::from_row_slice(&[0.0, 0.0, 1.0]), &tol()).0);
    }

    #[test]
    fn spin9_transitive_on_sphere() {
        let rep = spin_rep(9).unwrap();
        let pod = principal_orbit_data(&rep, 42, 16, &tol()).unwrap();
        assert_eq!(pod.orbit_dim, 15);
    }

    #[test]
    fn principal_orbit_trivial_rep() {
        // All action matrices zero.
        let alg = so_basis(2).unwrap();
        let rep = Representation::new(alg, vec![DMatrix::zeros(3, 3)]).unwrap();
        let pod = principal_orbit_data(&rep, 1, 8, &tol()).unwrap();
        assert_eq!(pod.orbit_dim, 0);
    }

    #[test]
    fn so_n_standard_orbit_and_polarity() {
        for n in [3usize, 5] {
            let rep = Representation::standard(so_basis(n).unwrap());
            let pod = principal_orbit_data(&rep, 9, 16, &tol()).unwrap();
            assert_eq!(pod.orbit_dim, n - 1);
            let report = is_polar_rep(&rep, 9, 16, &tol()).unwrap();
            assert_eq!(report.verdict, Verdict::Polar);
            assert_eq!(report.cohomogeneity, 1);
        }
    }

    #[test]
    fn diagonal_sum_of_two_standards_coh3_not_polar() {
        // so(n) on R^n + R^n acting diagonally: cohomogeneity 3 with
        // principal orbit dimension 2n - 3 (principal isotropy so(n - 2)),
        // but the orthogonality criterion fails: with regular point
        // (e1, e2), the normal space contains (e2, e1)/sqrt(2), and
        // G12 (e2, e1)/sqrt(2) = (e1, -e2)/sqrt(2) has inner product
        // 1/sqrt(2) with the normal vector (e1, 0).
        for n in [3usize, 4] {
            let std = Representation::standard(so_basis(n).unwrap());
            let rep = Representation::direct_sum(&[std.clone(), std]).unwrap();
            let report = is_polar_rep(&rep, 42, 32, &tol()).unwrap();
            assert_eq!(report.verdict, Verdict::NotPolar, "n = {n}");
            assert_eq!(report.principal_orbit_dim, 2 * n - 3);
            assert_eq!(report.cohomogeneity, 3);
        }
    }

    #[test]
    fn weighted_circle_not_polar() {
        let rep = weighted_u1(&[1, 2]).unwrap();
        let report = is_polar_rep(&rep, 42, 32, &tol()).unwrap();
        assert_eq!(report.verdict, Verdict::NotPolar);
        assert!(report.max_orthogonality_residual > 100.0 * tol().residual_abs);
    }

    #[test]
    fn diagonal_torus_on_c2_polar() {
        // u(1)^2 acting with one circle per complex line.
        let u1a = weighted_u1(&[1, 0]).unwrap();
        let u1b = weighted_u1(&[0, 1]).unwrap();
        let alg = crate::liealg::LieAlgebra::direct_sum(&[
            u1a.algebra().clone(),
            u1b.algebra().clone(),
        ])
        .unwrap();
        let rep = Representation::new(
            alg,
            vec![u1a.action()[0].clone(), u1b.action()[0].clone()],
        )
        .unwrap();
        let report = is_polar_rep(&rep, 42, 32, &tol()).unwrap();
        assert_eq!(report.verdict, Verdict::Polar);
        assert_eq!(report.cohomogeneity, 2);
    }

    #[test]
    fn irrep5_restriction_not_polar_and_orbits_differ() {
        let full = so3_irrep5().unwrap();
        // so(2) = first basis element of so(3).
        let gen = full.algebra().basis()[0].clone();
        let sub = crate::liealg::LieAlgebra::from_basis(vec![gen]).unwrap();
        let restricted = full.restrict_to(&sub, &tol()).unwrap();
        let report = is_polar_rep(&restricted, 42, 32, &tol()).unwrap();
        assert_eq!(report.verdict, Verdict::NotPolar);

        match compare_orbits(&full, &restricted, 3, 8, &tol()).unwrap() {
            OrbitComparison::Differ { dims, .. } => {
                assert_eq!(dims, (3, 1));
            }
            OrbitComparison::Equivalent => panic!("orbits should differ"),
        }
    }

    #[test]
    fn compare_rep_with_itself() {
        let rep = Representation::standard(so_basis(4).unwrap());
        assert!(matches!(
            compare_orbits(&rep, &rep, 7, 8, &tol()).unwrap(),
            OrbitComparison::Equivalent
        ));
    }

    #[test]
    fn spin9_orbit_equivalent_to_so16() {
        let spin = spin_rep(9).unwrap();
        let so16 = Representation::standard(so_basis(16).unwrap());
        assert!(matches!(
            compare_orbits(&spin, &so16, 42, 6, &tol()).unwrap(),
            OrbitComparison::Equivalent
        ));
    }
}
