//! `conformon residuals`: scan the curvature-equation residual, the six
//! static balance residuals, and the stationary Schrödinger residual over
//! the arclength range; exit 1 when any maximum breaches its tolerance.

use std::io::Write as _;

use conformon::rod;

use crate::config::Resolved;
use crate::output::{create_dir, write_bytes, write_metadata, Metadata};
use crate::CliError;

const STATIC_FD_STEP: f64 = 1e-5;

struct Accumulator {
    name: &'static str,
    max: f64,
    sum: f64,
    count: usize,
    tolerance: f64,
}

impl Accumulator {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            max: 0.0,
            sum: 0.0,
            count: 0,
            tolerance,
        }
    }

    fn push(&mut self, value: f64) {
        let value = value.abs();
        self.max = self.max.max(value);
        self.sum += value;
        self.count += 1;
    }

    fn mean(&self) -> f64 {
        self.sum / self.count.max(1) as f64
    }

    fn passed(&self) -> bool {
        self.max <= self.tolerance
    }
}

pub fn run(resolved: &Resolved) -> Result<serde_json::Value, CliError> {
    let material = resolved.require_material()?;
    let case = resolved.require_case()?;
    let profile = &resolved.profile;
    let tol = resolved.tolerances;

    let mut rows = vec![
        Accumulator::new("curvature_ode", tol.ode),
        Accumulator::new("force_1", tol.statics),
        Accumulator::new("force_2", tol.statics),
        Accumulator::new("force_3", tol.statics),
        Accumulator::new("torque_1", tol.statics),
        Accumulator::new("torque_2", tol.statics),
        Accumulator::new("torque_3", tol.statics),
        Accumulator::new("schrodinger", tol.schrodinger),
    ];

    let [s_start, s_end] = resolved.s_range;
    let n_points = (((s_end - s_start) / resolved.step).round() as usize).clamp(2, 200_000);
    for i in 0..=n_points {
        let s = s_start + (s_end - s_start) * i as f64 / n_points as f64;
        rows[0].push(profile.ode_residual(s));
        let statics = rod::kirchhoff_static_residuals(material, case, profile, s, STATIC_FD_STEP)
            .map_err(|e| CliError::Invalid(format!("material: {e}")))?;
        for (row, value) in rows[1..7].iter_mut().zip(statics) {
            row.push(value);
        }
        rows[7].push(conformon::quantum::schrodinger_residual(profile, s));
    }

    let mut table = String::new();
    table.push_str(&format!(
        "{:<15} {:>13} {:>13} {:>10} {:>6}\n",
        "residual", "max", "mean", "tol", "pass"
    ));
    let mut all_passed = true;
    for row in &rows {
        all_passed &= row.passed();
        table.push_str(&format!(
            "{:<15} {:>13.3e} {:>13.3e} {:>10.1e} {:>6}\n",
            row.name,
            row.max,
            row.mean(),
            row.tolerance,
            if row.passed() { "yes" } else { "NO" }
        ));
    }
    print!("{table}");

    let report = serde_json::json!({
        "points": n_points + 1,
        "s_range": resolved.s_range,
        "fd_step": STATIC_FD_STEP,
        "rows": rows.iter().map(|r| serde_json::json!({
            "name": r.name,
            "max": r.max,
            "mean": r.mean(),
            "tolerance": r.tolerance,
            "passed": r.passed(),
        })).collect::<Vec<_>>(),
        "all_passed": all_passed,
    });

    if let Some(out_dir) = resolved.output_dir.clone() {
        create_dir(&out_dir)?;
        let mut csv = Vec::new();
        let _ = writeln!(csv, "name,max,mean,tolerance,passed");
        for r in &rows {
            let _ = writeln!(
                csv,
                "{},{:.16e},{:.16e},{:.16e},{}",
                r.name,
                r.max,
                r.mean(),
                r.tolerance,
                r.passed()
            );
        }
        write_bytes(&out_dir.join("residuals.csv"), &csv)?;
        write_metadata(
            &out_dir,
            &Metadata {
                command: "residuals",
                config: &resolved.echo,
                derived: report.clone(),
            },
        )?;
    }

    if all_passed {
        Ok(report)
    } else {
        Err(CliError::CheckFailed(
            "residual maxima exceed configured tolerances".into(),
        ))
    }
}
