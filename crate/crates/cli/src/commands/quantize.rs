//! `conformon quantize`: solve the closed-tube condition
//! `L sqrt((C2 - tau0^2)/(2 - kappa^2)) = 2 m K(kappa)` for the modulus.

use conformon::geometry::{self, GeometryError};

use crate::config::Resolved;
use crate::output::{create_dir, write_json, write_metadata, Metadata};
use crate::CliError;

pub fn run(resolved: &Resolved, length: f64, windings: u32) -> Result<serde_json::Value, CliError> {
    let c2 = resolved.profile.c2();
    let tau0 = resolved.profile.tau0();

    let kappa = match geometry::closed_tube_kappa(length, windings, c2, tau0) {
        Ok(kappa) => kappa,
        Err(GeometryError::TubeTooShort {
            length,
            windings,
            min_length,
        }) => {
            return Err(CliError::CheckFailed(format!(
                "no closed tube with {windings} winding(s) at length {length}; \
                 minimum feasible length is {min_length:.16e}"
            )))
        }
        Err(GeometryError::ModulusSaturated) => {
            return Err(CliError::CheckFailed(GeometryError::ModulusSaturated.to_string()))
        }
        Err(e) => return Err(CliError::Invalid(e.to_string())),
    };
    let residual = geometry::closed_tube_residual(kappa, length, windings, c2, tau0);

    println!("kappa = {:.16e}", kappa.value());
    println!("condition residual = {residual:.3e}");

    let report = serde_json::json!({
        "length": length,
        "windings": windings,
        "C2": c2,
        "tau0": tau0,
        "kappa": kappa.value(),
        "condition_residual": residual,
    });
    if let Some(out_dir) = resolved.output_dir.clone() {
        create_dir(&out_dir)?;
        write_json(&out_dir.join("quantize.json"), &report)?;
        write_metadata(
            &out_dir,
            &Metadata {
                command: "quantize",
                config: &resolved.echo,
                derived: report.clone(),
            },
        )?;
    }
    Ok(report)
}
