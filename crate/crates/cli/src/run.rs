//! Maps a configuration onto the experiment routines.

use parastab::experiments::{
    flux_sweep, interaction_comparison, quantize_table, rates_table, spectroscopy_map, stabilization_sweep,
    vacuum_rabi_summary, Column, SpectroscopyOptions, SweepResult,
};
use parastab::hamiltonian::validity_warnings;
use parastab::ode::OdeOptions;
use parastab::Error;

use crate::config::{ExperimentKind, RunConfig};

fn section<'a, T>(v: &'a Option<T>, name: &'static str) -> Result<&'a T, Error> {
    v.as_ref().ok_or_else(|| Error::InvalidParameter {
        name,
        reason: "section missing".into(),
    })
}

fn grid(cfg: &RunConfig, name: &str) -> Result<Vec<f64>, Error> {
    cfg.grid(name).map(|g| g.values()).ok_or_else(|| Error::InvalidParameter {
        name: "grid",
        reason: format!("section [grid.{name}] missing"),
    })
}

/// Runs the configured experiment on the current rayon pool.
pub fn execute(cfg: &RunConfig) -> Result<SweepResult, Error> {
    let ode = OdeOptions {
        rtol: cfg.solver.rtol,
        atol: cfg.solver.atol,
        ..OdeOptions::default()
    };
    let mut table = match cfg.kind {
        ExperimentKind::Quantize => quantize_table(section(&cfg.circuit, "circuit")?)?,
        ExperimentKind::FluxSweep => flux_sweep(section(&cfg.circuit, "circuit")?, &grid(cfg, "flux")?)?,
        ExperimentKind::Stabilize => stabilization_sweep(
            section(&cfg.system, "system")?,
            section(&cfg.drive, "drive")?,
            &grid(cfg, "theta")?,
        )?,
        ExperimentKind::Compare => interaction_comparison(
            section(&cfg.system, "system")?,
            section(&cfg.drive, "drive")?,
            &grid(cfg, "theta")?,
            &cfg.interactions,
        )?,
        ExperimentKind::Spectroscopy => {
            let sys = section(&cfg.system, "system")?;
            let opts = SpectroscopyOptions {
                settle: cfg.solver.settle,
                rel_tol: cfg.solver.rel_tol,
                ode,
                ..SpectroscopyOptions::default()
            };
            // the modulation grid is an offset from the sideband resonance
            let modulation: Vec<f64> = grid(cfg, "modulation")?.iter().map(|m| m + sys.chi).collect();
            let map = spectroscopy_map(sys, section(&cfg.drive, "drive")?, &grid(cfg, "probe")?, &modulation, &opts)?;
            let mut t = map.to_sweep();
            t.columns[0] = Column::new("modulation_offset", "rad/s");
            for row in &mut t.rows {
                if let Some(Some(m)) = row.values.first_mut() {
                    *m -= sys.chi;
                }
            }
            t
        }
        ExperimentKind::VacuumRabi => {
            let sys = section(&cfg.system, "system")?;
            let drv = section(&cfg.drive, "drive")?;
            vacuum_rabi_summary(sys, drv.omega_r_sb, &grid(cfg, "time")?)?.2
        }
        ExperimentKind::Rates => {
            let sys = section(&cfg.system, "system")?;
            rates_table(sys.gamma, sys.gamma_phi, &grid(cfg, "theta")?)?
        }
    };
    if let (Some(sys), Some(drv)) = (&cfg.system, &cfg.drive) {
        if cfg.kind != ExperimentKind::VacuumRabi {
            for w in validity_warnings(sys, drv) {
                table.notes.push(format!("warning: {w}"));
            }
        }
    }
    mark_non_finite(&mut table);
    Ok(table)
}

/// Replaces NaN/inf cells by empty ones and records why in the row error.
fn mark_non_finite(table: &mut SweepResult) {
    for row in &mut table.rows {
        let mut bad = Vec::new();
        for (v, col) in row.values.iter_mut().zip(&table.columns) {
            if v.is_some_and(|x| !x.is_finite()) {
                *v = None;
                bad.push(col.name.as_str());
            }
        }
        if !bad.is_empty() {
            let msg = format!("non-finite value in {}", bad.join(", "));
            row.error = Some(match row.error.take() {
                Some(e) => format!("{e}; {msg}"),
                None => msg,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use parastab::experiments::Row;

    #[test]
    fn non_finite_cells_become_errors() {
        let mut t = SweepResult::new(vec![Column::new("a", ""), Column::new("b", "")]);
        t.rows.push(Row::ok(vec![1.0, f64::NAN]));
        t.rows.push(Row::ok(vec![2.0, 3.0]));
        mark_non_finite(&mut t);
        assert_eq!(t.rows[0].values, vec![Some(1.0), None]);
        assert_eq!(t.rows[0].error.as_deref(), Some("non-finite value in b"));
        assert!(t.rows[1].error.is_none());
        assert_eq!(t.failures(), 1);
    }
}
