//! `conformon conformation`: integrate the tube axis and export geometry.

use conformon::geometry::{self, GeometryFormat};

use crate::config::Resolved;
use crate::output::{create_dir, write_bytes, write_metadata, Metadata};
use crate::CliError;

pub fn run(resolved: &Resolved) -> Result<serde_json::Value, CliError> {
    let out_dir = resolved.require_output_dir()?.to_path_buf();

    let conf = geometry::integrate_frame(
        &resolved.profile,
        resolved.s_range[0],
        resolved.s_range[1],
        resolved.step,
        resolved.snapshot_time,
    )
    .map_err(|e| CliError::Invalid(format!("integration: {e}")))?;

    let mut max_ode_residual: f64 = 0.0;
    for sample in conf.samples() {
        max_ode_residual = max_ode_residual.max(resolved.profile.ode_residual(sample.s).abs());
    }

    create_dir(&out_dir)?;
    for format in &resolved.formats {
        let (geometry_format, name) = match format.as_str() {
            "csv" => (GeometryFormat::Csv, "conformation.csv"),
            _ => (GeometryFormat::Ply, "conformation.ply"),
        };
        let bytes = geometry::export_geometry(
            &conf,
            geometry_format,
            resolved.tube_radius,
            resolved.ring_resolution,
        )
        .map_err(|e| CliError::Invalid(format!("export: {e}")))?;
        write_bytes(&out_dir.join(name), &bytes)?;
    }

    let derived = serde_json::json!({
        "samples": conf.samples().len(),
        "actual_step": conf.step(),
        "tau0": resolved.profile.tau0(),
        "tau0_source": serde_json::to_value(resolved.tau0_source).unwrap(),
        "tension_gap": resolved.profile.tension_gap(),
        "profile_scale": resolved.profile.scale(),
        "curvature_period": resolved.profile.curvature_period(),
        "max_ode_residual": max_ode_residual,
        "orthonormality_drift": conf.orthonormality_drift(),
    });
    write_metadata(
        &out_dir,
        &Metadata {
            command: "conformation",
            config: &resolved.echo,
            derived: derived.clone(),
        },
    )?;

    println!(
        "conformation: {} samples -> {}",
        conf.samples().len(),
        out_dir.display()
    );
    Ok(derived)
}
