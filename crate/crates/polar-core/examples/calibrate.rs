//! Prints the oracle outcome for every catalog entry (used to freeze
//! expectations).
use polar_core::catalog::{catalog_entries, run_entry};
use polar_core::linalg::Tolerances;

fn main() {
    let tol = Tolerances::default();
    for entry in catalog_entries().unwrap() {
        match run_entry(&entry, 42, &tol) {
            Ok(out) => println!(
                "{:<32} verdict={:?} coh={} orbit={} flat={:?} lt_res={:?} ortho_res={:.3e} matched={}",
                out.name,
                out.report.verdict,
                out.report.cohomogeneity,
                out.report.principal_orbit_dim,
                out.report.flat_section,
                out.report.lie_triple_residual,
                out.report.max_orthogonality_residual,
                out.matched
            ),
            Err(e) => println!("{:<32} ERROR {e}", entry.name),
        }
    }
}
