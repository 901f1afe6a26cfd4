//! polarcheck: decide polarity of a compact-group action with a fixed point
//! on a symmetric space, or run the built-in regression catalog.
//!
//! Exit codes: 0 all requested checks conclusive (and expectations matched),
//! 1 expectation mismatch, 2 inconclusive numerics, 3 input error.

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use polar_core::nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use polar_core::catalog::{build_subalgebra, run_catalog, Expected, SubgroupSpec};
use polar_core::liealg::LieAlgebra;
use polar_core::linalg::Tolerances;
use polar_core::polarity::{
    check_fixed_point_polar, check_product_splitting, compare_orbits, OrbitComparison,
    PolarityReport, SplitReport, Verdict, DEFAULT_SAMPLES,
};
use polar_core::symspace::{adapted_frame, make_pair, SpaceFamily, SymmetricPair};

mod grammar;

#[derive(Parser, Debug)]
#[command(name = "polarcheck", version, about)]
struct Cli {
    /// Space, e.g. "sphere(4)", "cp(3)", "hp(2)", "op2", "euclidean(6)",
    /// "product(sphere(3),sphere(4))"; prefix "noncompact:" for the dual.
    #[arg(long)]
    space: Option<String>,

    /// Subgroup, e.g. "full", "so(3)", "torus", "u(2)+u(1)", "sp(1)^3",
    /// "spin(8)", "spin(7)bare", "diag_so", "u1(1,2)", "irrep5",
    /// "irrep5_circle", "factors(full|full)", or inline JSON.
    #[arg(long)]
    subgroup: Option<String>,

    /// Comma-separated subset of polar,lietriple,flat,dual,jacobi,
    /// product_split,compare (default: polar).
    #[arg(long)]
    checks: Option<String>,

    #[arg(long, default_value_t = 42)]
    seed: u64,

    #[arg(long, default_value_t = 1e-10)]
    tol_residual: f64,

    #[arg(long, default_value_t = 1e-9)]
    tol_rank: f64,

    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,

    /// Run the full regression catalog.
    #[arg(long, default_value_t = false)]
    catalog: bool,

    /// JSON run configuration file (overrides the flags above).
    #[arg(long)]
    config: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Check {
    Polar,
    Lietriple,
    Flat,
    Dual,
    Jacobi,
    ProductSplit,
    Compare,
}

/// Subgroup field of a config: a grammar string, a structured spec, or
/// inline generator matrices (closure-checked on load).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum SubgroupField {
    Named(String),
    Spec(SubgroupSpec),
    Inline { generators: Vec<Vec<Vec<f64>>> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TolConfig {
    #[serde(default = "default_rank_rel")]
    rank_rel: f64,
    #[serde(default = "default_residual_abs")]
    residual_abs: f64,
}

fn default_rank_rel() -> f64 {
    1e-9
}
fn default_residual_abs() -> f64 {
    1e-10
}
fn default_seed() -> u64 {
    42
}
fn default_compact() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RunConfig {
    space: SpaceFamily,
    #[serde(default = "default_compact")]
    compact: bool,
    subgroup: SubgroupField,
    checks: Vec<Check>,
    #[serde(default = "default_seed")]
    seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tolerances: Option<TolConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    output_path: Option<String>,
    /// Optional expectations; a mismatch drives exit code 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    expected: Option<Expected>,
}

#[derive(Debug, Serialize)]
struct SubalgebraInfo {
    dim: usize,
    closure_residual: f64,
    isotropy_embedding_residual: f64,
}

#[derive(Debug, Serialize)]
struct JacobiReport {
    section_dim: usize,
    block_residual: f64,
    symmetry_residual: f64,
    /// Max |f_i(t)|, i in the section block, over [0, 2*pi] for initial data
    /// vanishing tangentially.
    max_tangential_component: f64,
}

#[derive(Debug, Serialize)]
struct Report {
    space: SpaceFamily,
    compact: bool,
    subgroup: String,
    seed: u64,
    tolerances: Tolerances,
    subalgebra: SubalgebraInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    polar: Option<PolarityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dual: Option<PolarityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    jacobi: Option<JacobiReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    product_split: Option<SplitReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    compare: Option<OrbitComparison>,
    status: String,
}

fn parse_checks(s: &str) -> anyhow::Result<Vec<Check>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let c = serde_json::from_value(serde_json::Value::String(part.to_string()))
            .map_err(|_| anyhow::anyhow!("unknown check `{part}`"))?;
        out.push(c);
    }
    if out.is_empty() {
        anyhow::bail!("checks must be nonempty");
    }
    Ok(out)
}

fn config_from_flags(cli: &Cli) -> anyhow::Result<RunConfig> {
    let space_str = cli
        .space
        .as_deref()
        .ok_or_else(|| anyhow::anyhow!("--space is required (or use --config / --catalog)"))?;
    let (space, compact) = grammar::parse_space(space_str)?;
    let subgroup_str = cli
        .subgroup
        .as_deref()
        .ok_or_else(|| anyhow::anyhow!("--subgroup is required (or use --config / --catalog)"))?;
    let subgroup = if subgroup_str.trim_start().starts_with('{') {
        SubgroupField::Spec(serde_json::from_str(subgroup_str)?)
    } else {
        SubgroupField::Named(subgroup_str.to_string())
    };
    let checks = match &cli.checks {
        Some(s) => parse_checks(s)?,
        None => vec![Check::Polar],
    };
    Ok(RunConfig {
        space,
        compact,
        subgroup,
        checks,
        seed: cli.seed,
        tolerances: Some(TolConfig { rank_rel: cli.tol_rank, residual_abs: cli.tol_residual }),
        output_path: None,
        expected: None,
    })
}

fn resolve_subalgebra(
    pair: &SymmetricPair,
    field: &SubgroupField,
) -> anyhow::Result<(LieAlgebra, String)> {
    match field {
        SubgroupField::Named(name) => {
            let spec = grammar::parse_subgroup(name)?;
            let h = build_subalgebra(pair, &spec)?;
            Ok((h, name.clone()))
        }
        SubgroupField::Spec(spec) => {
            let h = build_subalgebra(pair, spec)?;
            Ok((h, serde_json::to_string(spec)?))
        }
        SubgroupField::Inline { generators } => {
            let ambient = pair.k_algebra().ambient_matrix_dim();
            let mut basis = Vec::new();
            for (gi, g) in generators.iter().enumerate() {
                if g.len() != ambient || g.iter().any(|row| row.len() != ambient) {
                    anyhow::bail!(
                        "generator {gi} is not a {ambient}x{ambient} matrix \
                         (the isotropy realization of this space)"
                    );
                }
                let m = DMatrix::from_fn(ambient, ambient, |i, j| g[i][j]);
                basis.push(m);
            }
            let h = LieAlgebra::from_basis(basis)?;
            let closure = h.closure_residual();
            if closure > 1e-8 {
                anyhow::bail!("generators are not closed under the bracket (residual {closure:.3e})");
            }
            Ok((h, format!("inline[{}]", generators.len())))
        }
    }
}

fn run_jacobi(
    pair: &SymmetricPair,
    report: &PolarityReport,
    tol: &Tolerances,
) -> anyhow::Result<JacobiReport> {
    let section = report.section_subspace(tol);
    if section.dim() == 0 {
        anyhow::bail!("jacobi check needs a nonzero section (polar verdict required)");
    }
    let frame = adapted_frame(&section);
    let v = section.basis()[0].clone();
    let sys = pair.jacobi_system(&v, &frame, section.dim(), tol)?;
    // Initial data vanishing tangentially: unit speed along each normal
    // frame direction at once.
    let n = frame.len();
    let k = section.dim();
    let mut f0p = DVector::zeros(n);
    for i in k..n {
        f0p[i] = 1.0;
    }
    if f0p.norm() > 0.0 {
        f0p /= f0p.norm();
    }
    let f0 = f0p.clone() * 0.0;
    let mut max_tan = 0.0f64;
    for (_, f) in sys.integrate(&f0, &f0p, 2.0 * std::f64::consts::PI, 256) {
        for i in 0..k {
            max_tan = max_tan.max(f[i].abs());
        }
    }
    Ok(JacobiReport {
        section_dim: k,
        block_residual: sys.block_residual(),
        symmetry_residual: sys.symmetry_residual(),
        max_tangential_component: max_tan,
    })
}

fn run_config(config: &RunConfig) -> anyhow::Result<(Report, ExitCode)> {
    let tol = match &config.tolerances {
        Some(t) => Tolerances { rank_rel: t.rank_rel, residual_abs: t.residual_abs },
        None => Tolerances::default(),
    };
    let pair = make_pair(&config.space, config.compact)?;
    let (h, subgroup_desc) = resolve_subalgebra(&pair, &config.subgroup)?;
    let embedding = pair.k_algebra().verify_subalgebra(&h, &tol)?;
    let info = SubalgebraInfo {
        dim: h.dim(),
        closure_residual: h.closure_residual(),
        isotropy_embedding_residual: embedding,
    };

    let wants = |c: Check| config.checks.contains(&c);
    let needs_polar = wants(Check::Polar)
        || wants(Check::Lietriple)
        || wants(Check::Flat)
        || wants(Check::Jacobi)
        || wants(Check::Dual);

    let mut report = Report {
        space: config.space.clone(),
        compact: config.compact,
        subgroup: subgroup_desc,
        seed: config.seed,
        tolerances: tol.clone(),
        subalgebra: info,
        polar: None,
        dual: None,
        jacobi: None,
        product_split: None,
        compare: None,
        status: String::new(),
    };

    if needs_polar {
        report.polar = Some(check_fixed_point_polar(&pair, &h, config.seed, DEFAULT_SAMPLES, &tol)?);
    }
    if wants(Check::Dual) {
        report.dual = Some(check_fixed_point_polar(
            &pair.dualize(),
            &h,
            config.seed,
            DEFAULT_SAMPLES,
            &tol,
        )?);
    }
    if wants(Check::Jacobi) {
        let polar = report.polar.as_ref().expect("needs_polar covers jacobi");
        if polar.verdict == Verdict::Polar {
            report.jacobi = Some(run_jacobi(&pair, polar, &tol)?);
        }
    }
    if wants(Check::ProductSplit) {
        report.product_split =
            Some(check_product_splitting(&pair, &h, config.seed, DEFAULT_SAMPLES, &tol)?);
    }
    if wants(Check::Compare) {
        let full = pair.k_action();
        let restricted = full.restrict_to(&h, &tol)?;
        report.compare = Some(compare_orbits(full, &restricted, config.seed, 8, &tol)?);
    }

    let inconclusive = report
        .polar
        .iter()
        .chain(report.dual.iter())
        .any(|r| r.verdict == Verdict::Inconclusive);
    let mismatch = match (&config.expected, &report.polar) {
        (Some(exp), Some(got)) => {
            got.verdict != exp.verdict
                || exp.cohomogeneity.is_some_and(|c| c != got.cohomogeneity)
                || exp.flat_section.is_some_and(|f| got.flat_section != Some(f))
        }
        _ => false,
    };
    let (status, code) = if inconclusive {
        ("inconclusive", ExitCode::from(2))
    } else if mismatch {
        ("mismatch", ExitCode::from(1))
    } else {
        ("ok", ExitCode::SUCCESS)
    };
    report.status = status.to_string();
    Ok((report, code))
}

fn emit(out: &Option<std::path::PathBuf>, json: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            f.write_all(json.as_bytes())?;
            f.write_all(b"\n")?;
        }
        None => println!("{json}"),
    }
    Ok(())
}

fn try_main() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    let started = Instant::now();

    if cli.catalog {
        let tol = Tolerances { rank_rel: cli.tol_rank, residual_abs: cli.tol_residual };
        let summary = run_catalog(cli.seed, &tol)?;
        let json = serde_json::to_string_pretty(&summary)?;
        emit(&cli.out, &json)?;
        eprintln!(
            "catalog: {} entries, {} mismatches, {:.2}s",
            summary.entries.len(),
            summary.mismatches,
            started.elapsed().as_secs_f64()
        );
        return Ok(if summary.mismatches == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) });
    }

    let config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str::<RunConfig>(&text)
                .map_err(|e| anyhow::anyhow!("config: {e}"))?
        }
        None => config_from_flags(&cli)?,
    };
    let out = match (&cli.out, &config.output_path) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(p)) => Some(std::path::PathBuf::from(p)),
        _ => None,
    };

    let (report, code) = run_config(&config)?;
    let json = serde_json::to_string_pretty(&report)?;
    emit(&out, &json)?;
    eprintln!("done in {:.2}s", started.elapsed().as_secs_f64());
    Ok(code)
}

fn main() -> ExitCode {
    match try_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
