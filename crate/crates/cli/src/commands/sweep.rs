//! `conformon sweep`: run a subcommand across a list of moduli, one worker
//! thread per modulus, each writing to its own subdirectory.

use std::path::PathBuf;

use crate::config::{resolve, RunConfig};
use crate::output::{create_dir, write_json};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepMode {
    Conformation,
    Residuals,
    Spectrum,
    All,
}

impl SweepMode {
    fn runs_conformation(self) -> bool {
        matches!(self, Self::Conformation | Self::All)
    }
    fn runs_residuals(self) -> bool {
        matches!(self, Self::Residuals | Self::All)
    }
    fn runs_spectrum(self) -> bool {
        matches!(self, Self::Spectrum | Self::All)
    }
}

fn status_of(result: &Result<serde_json::Value, CliError>) -> serde_json::Value {
    match result {
        Ok(_) => serde_json::json!("ok"),
        Err(CliError::CheckFailed(msg)) => serde_json::json!(format!("check failed: {msg}")),
        Err(CliError::Invalid(msg)) => serde_json::json!(format!("invalid: {msg}")),
    }
}

fn worse(a: Option<&CliError>, b: Option<CliError>) -> Option<CliError> {
    match (a, &b) {
        (Some(CliError::Invalid(_)), _) => a.cloned(),
        (_, Some(CliError::Invalid(_))) => b,
        (Some(CliError::CheckFailed(_)), _) => a.cloned(),
        _ => b,
    }
}

pub fn run(base: &RunConfig, kappas: &[f64], mode: SweepMode) -> Result<(), CliError> {
    if kappas.is_empty() {
        return Err(CliError::Invalid("kappas: need at least one value".into()));
    }
    let kind = base.kind.as_deref().unwrap_or("conformon_lattice");
    if kind != "conformon_lattice" {
        return Err(CliError::Invalid(format!(
            "kind: sweep varies kappa, which needs conformon_lattice, got \"{kind}\""
        )));
    }
    let base_out: PathBuf = base
        .output_dir
        .clone()
        .ok_or_else(|| CliError::Invalid("output_dir: missing required key (or pass --out)".into()))?;

    let tasks: Vec<RunConfig> = kappas
        .iter()
        .map(|kappa| {
            let mut config = base.clone();
            config.kappa = Some(*kappa);
            config.output_dir = Some(base_out.join(format!("kappa_{kappa}")));
            config
        })
        .collect();

    let mut rows: Vec<serde_json::Value> = Vec::with_capacity(tasks.len());
    let mut worst: Option<CliError> = None;
    std::thread::scope(|scope| {
        let handles: Vec<_> = tasks
            .iter()
            .map(|config| scope.spawn(move || run_one(config, mode)))
            .collect();
        for (handle, kappa) in handles.into_iter().zip(kappas) {
            let (row, error) = handle.join().expect("sweep worker panicked");
            let mut row = row;
            row["kappa"] = serde_json::json!(kappa);
            rows.push(row);
            worst = worse(worst.as_ref(), error);
        }
    });

    create_dir(&base_out)?;
    write_json(
        &base_out.join("sweep_summary.json"),
        &serde_json::json!({ "mode": format!("{mode:?}"), "rows": rows }),
    )?;
    crate::output::write_metadata(
        &base_out,
        &crate::output::Metadata {
            command: "sweep",
            config: base,
            derived: serde_json::json!({ "kappas": kappas, "mode": format!("{mode:?}") }),
        },
    )?;
    for row in &rows {
        println!(
            "kappa = {}: {}",
            row["kappa"],
            row["status"].as_str().unwrap_or("?")
        );
    }
    match worst {
        None => Ok(()),
        Some(e) => Err(e),
    }
}

fn run_one(config: &RunConfig, mode: SweepMode) -> (serde_json::Value, Option<CliError>) {
    let resolved = match resolve(config) {
        Ok(r) => r,
        Err(e) => {
            return (
                serde_json::json!({ "status": format!("invalid: {e}") }),
                Some(e),
            )
        }
    };
    let mut row = serde_json::Map::new();
    let mut worst: Option<CliError> = None;
    let mut statuses: Vec<serde_json::Value> = Vec::new();

    if mode.runs_conformation() {
        let result = super::conformation::run(&resolved);
        statuses.push(status_of(&result));
        row.insert("conformation".into(), status_of(&result));
        worst = worse(worst.as_ref(), result.err());
    }
    if mode.runs_residuals() {
        let result = super::residuals::run(&resolved);
        if let Ok(report) = &result {
            row.insert("residuals_all_passed".into(), report["all_passed"].clone());
        }
        statuses.push(status_of(&result));
        row.insert("residuals".into(), status_of(&result));
        worst = worse(worst.as_ref(), result.err());
    }
    if mode.runs_spectrum() {
        let result = super::spectrum::run(&resolved);
        if let Ok(report) = &result {
            row.insert("spectrum_abs_error".into(), report["abs_error"].clone());
        }
        statuses.push(status_of(&result));
        row.insert("spectrum".into(), status_of(&result));
        worst = worse(worst.as_ref(), result.err());
    }

    let overall = if statuses.iter().all(|s| s == "ok") {
        serde_json::json!("ok")
    } else {
        statuses
            .iter()
            .find(|s| *s != "ok")
            .cloned()
            .unwrap_or(serde_json::json!("ok"))
    };
    row.insert("status".into(), overall);
    (serde_json::Value::Object(row), worst)
}
