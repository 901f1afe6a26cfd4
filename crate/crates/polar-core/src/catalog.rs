//! Curated catalog of actions with frozen expected outcomes, used as a
//! regression corpus. Entries are stored in `data/catalog.json`; every
//! non-flat space automatically gets a noncompact dual twin with the same
//! expectations.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::liealg::{
    complex_diag, so3_irrep5, spin7_bare, spin_subalgebra, su_basis_matrices_embedded,
    sp_basis_matrices_embedded, weighted_u1, LieAlgError, LieAlgebra,
};
use crate::linalg::Tolerances;
use crate::polarity::{
    check_fixed_point_polar, PolarityError, PolarityReport, Verdict, DEFAULT_SAMPLES,
};
use crate::symspace::{make_pair, SpaceFamily, SymSpaceError, SymmetricPair};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog data is malformed: {0}")]
    BadData(#[from] serde_json::Error),
    #[error("subgroup spec {spec} is not defined on {family}")]
    SpecMismatch { spec: String, family: String },
    #[error(transparent)]
    SymSpace(#[from] SymSpaceError),
    #[error(transparent)]
    LieAlg(#[from] LieAlgError),
    #[error(transparent)]
    Polarity(#[from] PolarityError),
}

/// How to carve the acting subalgebra out of the isotropy algebra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubgroupSpec {
    /// The full isotropy algebra.
    FullIsotropy,
    /// so(k) in the leading block (spheres and euclidean spaces).
    SoBlock { k: usize },
    /// Diagonal so(n) across two congruent blocks: euclidean(2n), or a
    /// product of two spheres of equal dimension.
    DiagSo,
    /// One circle acting on C^m with the given integer weights
    /// (euclidean(2m)).
    U1Weights { weights: Vec<i64> },
    /// so(3) on the 5-dimensional space of symmetric traceless 3x3 matrices
    /// (euclidean(5)).
    So3Irrep5,
    /// A single circle inside the so(3) of `So3Irrep5` (euclidean(5)).
    So3Irrep5Circle,
    /// Maximal torus of the isotropy of cp(n).
    Torus,
    /// s(u(p) x u(q) x u(1)) inside the isotropy of cp(p + q).
    UBlocks { p: usize },
    /// sp(1)^(n+1) inside the isotropy of hp(n).
    SpBlocks,
    /// spin(k).spin(9-k) inside spin(9) (octonionic plane), k in 6..=8.
    SpinSplit { k: usize },
    /// Split spin(7) alone inside spin(9) (octonionic plane).
    Spin7Bare,
    /// Per-factor specs on a product space.
    PerFactor { parts: Vec<SubgroupSpec> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cohomogeneity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flat_section: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub space: SpaceFamily,
    /// Compact realization if true, the noncompact dual otherwise.
    #[serde(default = "default_true")]
    pub compact: bool,
    pub subgroup: SubgroupSpec,
    pub expected: Expected,
    /// Whether a dual twin should be generated (off for flat spaces, which
    /// are their own duals).
    #[serde(default = "default_true")]
    pub dual_twin: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

fn default_true() -> bool {
    true
}

const CATALOG_JSON: &str = include_str!("../data/catalog.json");

/// All catalog entries: the stored compact list plus generated dual twins.
pub fn catalog_entries() -> Result<Vec<CatalogEntry>, CatalogError> {
    let base: Vec<CatalogEntry> = serde_json::from_str(CATALOG_JSON)?;
    let mut out = Vec::with_capacity(2 * base.len());
    for entry in base {
        let twin = entry.dual_twin;
        let mut e = entry;
        out.push(e.clone());
        if twin {
            e.name = format!("{}_dual", e.name);
            e.compact = false;
            e.dual_twin = false;
            out.push(e);
        }
    }
    Ok(out)
}

fn unit(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m
}

fn so_block_basis(ambient: usize, lo: usize, hi: usize) -> Vec<DMatrix<f64>> {
    let mut basis = Vec::new();
    for i in lo..hi {
        for j in (i + 1)..hi {
            basis.push(unit(ambient, i, j) - unit(ambient, j, i));
        }
    }
    basis
}

fn spec_name(spec: &SubgroupSpec) -> String {
    format!("{spec:?}")
}

fn family_name(family: &SpaceFamily) -> String {
    format!("{family:?}")
}

fn mismatch(spec: &SubgroupSpec, family: &SpaceFamily) -> CatalogError {
    CatalogError::SpecMismatch { spec: spec_name(spec), family: family_name(family) }
}

/// Build the subalgebra matrices for `spec` in the ambient realization of
/// the pair's isotropy algebra.
pub fn build_subalgebra(
    pair: &SymmetricPair,
    spec: &SubgroupSpec,
) -> Result<LieAlgebra, CatalogError> {
    let family = pair.family();
    let ambient = pair.k_algebra().ambient_matrix_dim();
    let basis: Vec<DMatrix<f64>> = match (spec, family) {
        (SubgroupSpec::FullIsotropy, _) => pair.k_algebra().basis().to_vec(),
        (SubgroupSpec::SoBlock { k }, SpaceFamily::Sphere { n })
        | (SubgroupSpec::SoBlock { k }, SpaceFamily::Euclidean { n }) => {
            if *k > *n || *k < 2 {
                return Err(mismatch(spec, family));
            }
            so_block_basis(ambient, 0, *k)
        }
        (SubgroupSpec::DiagSo, SpaceFamily::Euclidean { n }) => {
            if n % 2 != 0 {
                return Err(mismatch(spec, family));
            }
            let half = n / 2;
            so_block_basis(ambient, 0, half)
                .into_iter()
                .zip(so_block_basis(ambient, half, *n))
                .map(|(a, b)| a + b)
                .collect()
        }
        (SubgroupSpec::DiagSo, SpaceFamily::Product { factors })
            if factors.len() == 2 && factors[0] == factors[1] =>
        {
            let layout = pair.factors();
            let inner = layout[0].k_ambient_dim - 1; // sphere factor: so(inner)
            let (o0, o1) = (layout[0].k_ambient_offset, layout[1].k_ambient_offset);
            let mut basis = Vec::new();
            for i in 0..inner {
                for j in (i + 1)..inner {
                    let m = unit(ambient, o0 + i, o0 + j) - unit(ambient, o0 + j, o0 + i)
                        + unit(ambient, o1 + i, o1 + j)
                        - unit(ambient, o1 + j, o1 + i);
                    basis.push(m);
                }
            }
            basis
        }
        (SubgroupSpec::U1Weights { weights }, SpaceFamily::Euclidean { n })
            if 2 * weights.len() == *n =>
        {
            weighted_u1(weights)?.action().to_vec()
        }
        (SubgroupSpec::So3Irrep5, SpaceFamily::Euclidean { n: 5 }) => {
            so3_irrep5()?.action().to_vec()
        }
        (SubgroupSpec::So3Irrep5Circle, SpaceFamily::Euclidean { n: 5 }) => {
            vec![so3_irrep5()?.action()[0].clone()]
        }
        (SubgroupSpec::Torus, SpaceFamily::ComplexProjective { n }) => {
            let m = n + 1;
            (0..*n)
                .map(|j| {
                    let mut d = vec![0.0; m];
                    d[j] = 1.0;
                    d[*n] = -1.0;
                    complex_diag(m, &d)
                })
                .collect()
        }
        (SubgroupSpec::UBlocks { p }, SpaceFamily::ComplexProjective { n }) => {
            if *p == 0 || *p >= *n {
                return Err(mismatch(spec, family));
            }
            let m = n + 1;
            let mut basis = su_basis_matrices_embedded(m, 0, *p);
            basis.extend(su_basis_matrices_embedded(m, *p, *n));
            // Compensated centers keep each u(1) inside s(u(n) x u(1)).
            let mut d1 = vec![0.0; m];
            for e in d1.iter_mut().take(*p) {
                *e = 1.0;
            }
            d1[*n] = -(*p as f64);
            basis.push(complex_diag(m, &d1));
            let mut d2 = vec![0.0; m];
            for e in d2.iter_mut().take(*n).skip(*p) {
                *e = 1.0;
            }
            d2[*n] = -((n - p) as f64);
            basis.push(complex_diag(m, &d2));
            basis
        }
        (SubgroupSpec::SpBlocks, SpaceFamily::QuaternionicProjective { n }) => {
            let m = n + 1;
            let mut basis = Vec::new();
            for a in 0..m {
                basis.extend(sp_basis_matrices_embedded(m, a, a + 1));
            }
            basis
        }
        (SubgroupSpec::SpinSplit { k }, SpaceFamily::OctonionicPlane) => {
            spin_subalgebra(*k)?.basis().to_vec()
        }
        (SubgroupSpec::Spin7Bare, SpaceFamily::OctonionicPlane) => spin7_bare()?.basis().to_vec(),
        (SubgroupSpec::PerFactor { parts }, SpaceFamily::Product { factors })
            if parts.len() == factors.len() =>
        {
            let mut basis = Vec::new();
            for ((part, fam), layout) in parts.iter().zip(factors).zip(pair.factors()) {
                let factor_pair = make_pair(fam, true)?;
                let sub = build_subalgebra(&factor_pair, part)?;
                for b in sub.basis() {
                    let mut m = DMatrix::zeros(ambient, ambient);
                    m.view_mut(
                        (layout.k_ambient_offset, layout.k_ambient_offset),
                        (layout.k_ambient_dim, layout.k_ambient_dim),
                    )
                    .copy_from(b);
                    basis.push(m);
                }
            }
            basis
        }
        _ => return Err(mismatch(spec, family)),
    };
    Ok(LieAlgebra::from_basis(basis)?)
}

/// FNV-1a over the entry name; xor'ed into the master seed so each entry
/// draws an independent, reproducible stream.
pub fn entry_seed(master: u64, name: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in name.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    master ^ h
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntryOutcome {
    pub name: String,
    pub seed: u64,
    pub compact: bool,
    pub expected: Expected,
    pub report: PolarityReport,
    pub matched: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogSummary {
    pub master_seed: u64,
    pub entries: Vec<EntryOutcome>,
    pub mismatches: usize,
}

fn matches_expected(expected: &Expected, report: &PolarityReport) -> bool {
    if report.verdict != expected.verdict {
        return false;
    }
    if let Some(coh) = expected.cohomogeneity {
        if report.cohomogeneity != coh {
            return false;
        }
    }
    if let Some(flat) = expected.flat_section {
        if report.flat_section != Some(flat) {
            return false;
        }
    }
    true
}

/// Run a single entry with its derived seed.
pub fn run_entry(
    entry: &CatalogEntry,
    master_seed: u64,
    tol: &Tolerances,
) -> Result<EntryOutcome, CatalogError> {
    let seed = entry_seed(master_seed, &entry.name);
    let pair = make_pair(&entry.space, entry.compact)?;
    let h = build_subalgebra(&pair, &entry.subgroup)?;
    let report = check_fixed_point_polar(&pair, &h, seed, DEFAULT_SAMPLES, tol)?;
    let matched = matches_expected(&entry.expected, &report);
    Ok(EntryOutcome {
        name: entry.name.clone(),
        seed,
        compact: entry.compact,
        expected: entry.expected.clone(),
        report,
        matched,
    })
}

/// Run the whole catalog. Any expectation mismatch is recorded in the
/// summary; callers treat `mismatches > 0` as a hard failure.
pub fn run_catalog(master_seed: u64, tol: &Tolerances) -> Result<CatalogSummary, CatalogError> {
    let mut entries = Vec::new();
    for entry in catalog_entries()? {
        entries.push(run_entry(&entry, master_seed, tol)?);
    }
    let mismatches = entries.iter().filter(|e| !e.matched).count();
    Ok(CatalogSummary { master_seed, entries, mismatches })
}
