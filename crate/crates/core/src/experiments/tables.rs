use rayon::prelude::*;

use super::{columns, Row, SweepResult};
use crate::circuit::{approximate_couplings, quantize, CircuitParams};
use crate::dressed::{baseline_population, dressed_rates};
use crate::error::Result;

/// Dressed rates and the uncoupled `|g~>` population per polar angle.
pub fn rates_table(gamma: f64, gamma_phi: f64, thetas: &[f64]) -> Result<SweepResult> {
    dressed_rates(gamma, gamma_phi, 0.0)?;
    let cols = [
        ("theta", "rad"),
        ("gamma_minus", "1/s"),
        ("gamma_plus", "1/s"),
        ("gamma_phi_tilde", "1/s"),
        ("P_baseline", ""),
    ];
    let mut out = SweepResult::new(columns(&cols));
    for &th in thetas {
        let row = dressed_rates(gamma, gamma_phi, th).and_then(|r| {
            Ok(Row::ok(vec![
                th,
                r.gamma_minus,
                r.gamma_plus,
                r.gamma_phi_tilde,
                baseline_population(&r)?,
            ]))
        });
        out.rows.push(row.unwrap_or_else(|e| Row::failed(&[th], cols.len(), e)));
    }
    Ok(out)
}

const MODEL_COLUMNS: [(&str, &str); 10] = [
    ("flux", "Phi0"),
    ("omega_q", "rad/s"),
    ("omega_r", "rad/s"),
    ("g_l", "rad/s"),
    ("g_c", "rad/s"),
    ("g_r", "rad/s"),
    ("g_b", "rad/s"),
    ("g_r_approx", "rad/s"),
    ("g_b_approx", "rad/s"),
    ("z_q", "ohm"),
];

fn model_row(p: &CircuitParams<f64>) -> Row {
    let run = || -> Result<Row> {
        let m = quantize(p)?;
        let (gr, gb) = approximate_couplings(p)?;
        Ok(Row::ok(vec![
            p.phi_ext, m.omega_q, m.omega_r, m.g_l, m.g_c, m.g_r, m.g_b, gr, gb, m.z1,
        ]))
    };
    run().unwrap_or_else(|e| Row::failed(&[p.phi_ext], MODEL_COLUMNS.len(), e))
}

/// Quantized model at the circuit's own flux.
pub fn quantize_table(p: &CircuitParams<f64>) -> Result<SweepResult> {
    p.validate()?;
    let mut out = SweepResult::new(columns(&MODEL_COLUMNS));
    out.rows.push(model_row(p));
    if p.coupler_too_large() {
        out.notes
            .push("warning: L_g0 >= 0.1 min(L_q, L_r); weak-coupler approximation is poor".into());
    }
    Ok(out)
}

/// Quantized model across external flux values. Fluxes where the coupler
/// inductance diverges become failed rows.
pub fn flux_sweep(p: &CircuitParams<f64>, fluxes: &[f64]) -> Result<SweepResult> {
    p.validate()?;
    let mut out = SweepResult::new(columns(&MODEL_COLUMNS));
    out.rows = fluxes.par_iter().map(|&f| model_row(&p.with_flux(f))).collect();
    if p.coupler_too_large() {
        out.notes
            .push("warning: L_g0 >= 0.1 min(L_q, L_r); weak-coupler approximation is poor".into());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::reference_device;
    use std::f64::consts::PI;

    #[test]
    fn unit_rates() {
        let t = rates_table(1.0, 1.0, &[0.0, PI / 2.0, PI]).unwrap();
        let gm = t.column_ok("gamma_minus");
        let gp = t.column_ok("gamma_plus");
        let gphi = t.column_ok("gamma_phi_tilde");
        let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
        assert!(close(gm[0], 1.0) && close(gp[0], 0.0) && close(gphi[0], 1.0));
        assert!(close(gm[1], 0.75) && close(gp[1], 0.75) && close(gphi[1], 0.5));
        assert!(close(gm[2], 0.0) && close(gp[2], 1.0) && close(gphi[2], 1.0));
        assert!(rates_table(-1.0, 0.0, &[0.0]).is_err());
    }

    #[test]
    fn divergent_flux_is_a_failed_row() {
        let t = flux_sweep(&reference_device(), &[0.0, 0.5, 0.1]).unwrap();
        assert_eq!(t.rows.len(), 3);
        assert!(t.rows[0].is_ok() && t.rows[2].is_ok());
        assert!(!t.rows[1].is_ok());
        let q = quantize_table(&reference_device()).unwrap();
        let wq = q.column_ok("omega_q")[0] / (2.0 * PI);
        assert!((wq - 4.343e9).abs() < 1e6);
    }
}
