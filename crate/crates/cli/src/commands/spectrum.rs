//! `conformon spectrum`: discretize the induced potential over one period,
//! solve for the spectrum, and compare the band ground state against the
//! exact eigenpair. An infinite-period profile (`kappa = 1` or solitary)
//! falls back to the truncated sech-well domain with a warning.

use conformon::quantum::{self, SpectralResult};
use conformon::rod::CurvatureProfile;

use crate::config::Resolved;
use crate::output::{create_dir, csv_pairs, write_bytes, write_metadata, Metadata};
use crate::CliError;

pub fn run(resolved: &Resolved) -> Result<serde_json::Value, CliError> {
    let out_dir = resolved.require_output_dir()?.to_path_buf();
    let profile = &resolved.profile;

    let infinite_period = match profile {
        CurvatureProfile::ConformonLattice { kappa, .. } => kappa.is_unit(),
        CurvatureProfile::Solitary { .. } => true,
        CurvatureProfile::CircularRing { .. } => {
            return Err(CliError::Invalid(
                "kind: spectrum needs a conformon_lattice or solitary profile".into(),
            ))
        }
    };

    let (result, mode): (SpectralResult, &str) = if infinite_period {
        eprintln!(
            "warning: infinite curvature period (kappa = 1); \
             solving the truncated sech-well domain instead"
        );
        let r = quantum::solve_truncated_ground_state(profile, resolved.n_grid)
            .map_err(|e| CliError::Invalid(format!("n_grid: {e}")))?;
        (r, "truncated_sech_well")
    } else {
        let r = quantum::solve_band_ground_state(profile, resolved.n_grid)
            .map_err(|e| CliError::Invalid(format!("n_grid: {e}")))?;
        (r, "periodic_band")
    };

    let exact = quantum::exact_energy(profile);
    let lambda0 = result.ground_energy();
    let abs_error = (lambda0 - exact).abs();

    create_dir(&out_dir)?;
    write_bytes(
        &out_dir.join("potential.csv"),
        &csv_pairs(
            "s1,V",
            result.grid.iter().zip(&result.potential).map(|(a, b)| (*a, *b)),
        ),
    )?;
    write_bytes(
        &out_dir.join("eigenvalues.csv"),
        &csv_pairs(
            "index,eigenvalue",
            result
                .eigenvalues
                .iter()
                .enumerate()
                .map(|(i, ev)| (i as f64, *ev)),
        ),
    )?;
    write_bytes(
        &out_dir.join("ground_state.csv"),
        &csv_pairs(
            "s1,psi",
            result
                .grid
                .iter()
                .zip(result.ground_state())
                .map(|(a, b)| (*a, *b)),
        ),
    )?;

    let report = serde_json::json!({
        "mode": mode,
        "n_grid": result.grid.len(),
        "kappa": profile.kappa().map(|k| k.value()),
        "lambda0": lambda0,
        "exact_energy": exact,
        "abs_error": abs_error,
        "potential_minimum": quantum::potential_minimum(profile),
        "delocalization_ratio": quantum::delocalization_ratio(profile),
    });
    crate::output::write_json(&out_dir.join("report.json"), &report)?;
    write_metadata(
        &out_dir,
        &Metadata {
            command: "spectrum",
            config: &resolved.echo,
            derived: report.clone(),
        },
    )?;

    println!(
        "spectrum ({mode}): lambda0 = {lambda0:.12e}, exact = {exact:.12e}, |error| = {abs_error:.3e}"
    );
    Ok(report)
}
