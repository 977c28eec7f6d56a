use rayon::prelude::*;

use super::{columns, Row, SweepResult};
use crate::dressed::{
    baseline_population, corrected_angle, dressed_dissipators, dressed_qubit_states, dressed_rates, pop_main_text,
    pop_strong_coupling, pop_weak_coupling, StabilizationAxis,
};
use crate::error::{invalid, Error, Result};
use crate::hamiltonian::{h_rotating, optimal_detunings, DriveSettings, Interaction, SystemParams};
use crate::lindblad::{bloch_vector, build_liouvillian, qubit_reduced, steady_state};
use crate::qop::{expect, DensityMatrix};

/// Steady state of the dressed-frame master equation and its qubit
/// observables.
#[derive(Clone, Debug)]
pub struct StabilizedPoint {
    /// Population of `|g~>` along the drive axis.
    pub p_gtilde: f64,
    pub bloch: [f64; 3],
    /// Bloch-vector length `|<sigma>|`.
    pub purity: f64,
    /// `arccos(-<s_z> / |<sigma>|)`, the polar angle of the stabilized state.
    pub theta_measured: f64,
    pub n_bar: f64,
    pub state: DensityMatrix<f64>,
}

/// Solves the steady state with one interaction of the given strength.
pub fn stabilized_point(
    sys: &SystemParams<f64>,
    drv: &DriveSettings<f64>,
    kind: Interaction,
    strength: f64,
) -> Result<StabilizedPoint> {
    sys.validate()?;
    let space = sys.space()?;
    let axis = drv.axis()?;
    let h = h_rotating(&space, sys, drv, kind, strength)?;
    let c_ops = dressed_dissipators(&space, sys.kappa, sys.gamma, sys.gamma_phi, &axis)?;
    let l = build_liouvillian(&h, &c_ops)?;
    let rho = steady_state(&l)?;
    let (x, y, z, r) = bloch_vector(&space, &rho)?;
    if !(r > 1e-12) {
        return Err(Error::InvalidState("Bloch vector vanishes; polar angle undefined".into()));
    }
    let q = qubit_reduced(&space, &rho)?;
    let (g, _) = dressed_qubit_states(&axis);
    let mut p = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            p += (g[a].conj() * q[(a, b)] * g[b]).re;
        }
    }
    let n_bar = expect(&space.num(), &rho)?.re;
    Ok(StabilizedPoint {
        p_gtilde: p,
        bloch: [x, y, z],
        purity: r,
        theta_measured: (-z / r).clamp(-1.0, 1.0).acos(),
        n_bar,
        state: rho,
    })
}

const ENDPOINT: f64 = 1e-9;

/// Drive for one polar angle of the sweep. Interior angles keep
/// `omega_x` from `base` and set `omega_z = omega_x cot(theta)`. At
/// `theta = 0` the drive is a pure `+omega_x` detuning with the sideband
/// off; at `theta = pi` it is `-omega_x` with the sideband on. The cavity
/// detuning is the optimal one for the angle.
pub fn sweep_drive(sys: &SystemParams<f64>, base: &DriveSettings<f64>, theta: f64) -> Result<DriveSettings<f64>> {
    let reference = base.omega_x;
    if !(reference > 0.0 && reference.is_finite()) {
        return Err(invalid("omega_x", "sweep needs a positive reference Rabi strength"));
    }
    if !(-ENDPOINT..=std::f64::consts::PI + ENDPOINT).contains(&theta) {
        return Err(invalid("theta", "polar angle must lie in [0, pi]"));
    }
    let mut drv = *base;
    if theta.abs() < ENDPOINT {
        drv.omega_x = 0.0;
        drv.omega_z = reference;
        drv.omega_b = 0.0;
    } else if (theta - std::f64::consts::PI).abs() < ENDPOINT {
        drv.omega_x = 0.0;
        drv.omega_z = -reference;
    } else {
        drv.omega_x = reference;
        drv.omega_z = reference * theta.cos() / theta.sin();
    }
    let theta = theta.clamp(0.0, std::f64::consts::PI);
    drv.delta = optimal_detunings(sys, &drv, theta)?.delta;
    Ok(drv)
}

const SWEEP_COLUMNS: [(&str, &str); 16] = [
    ("theta", "rad"),
    ("omega_x", "rad/s"),
    ("omega_z", "rad/s"),
    ("delta", "rad/s"),
    ("P_gtilde_ME", ""),
    ("purity", ""),
    ("theta_measured", "rad"),
    ("theta_prime", "rad"),
    ("n_bar", ""),
    ("P_weak", ""),
    ("P_strong", ""),
    ("P_main", ""),
    ("purity_main", ""),
    ("bloch_x", ""),
    ("bloch_y", ""),
    ("bloch_z", ""),
];

fn sweep_row(sys: &SystemParams<f64>, base: &DriveSettings<f64>, theta: f64) -> Row {
    let run = || -> Result<Row> {
        let drv = sweep_drive(sys, base, theta)?;
        let pt = stabilized_point(sys, &drv, Interaction::Blue, drv.omega_b)?;
        let th = theta.clamp(0.0, std::f64::consts::PI);
        let rates = dressed_rates(sys.gamma, sys.gamma_phi, th)?;
        let g = drv.omega_b * (0.5 * th).sin().powi(2);
        let p_main = pop_main_text(&rates, g, sys.kappa)?;
        Ok(Row::ok(vec![
            theta,
            drv.omega_x,
            drv.omega_z,
            drv.delta,
            pt.p_gtilde,
            pt.purity,
            pt.theta_measured,
            corrected_angle(sys.chi, pt.n_bar, drv.omega_x, drv.omega_z)?,
            pt.n_bar,
            pop_weak_coupling(&rates, g, sys.kappa)?,
            pop_strong_coupling(&rates, sys.kappa)?,
            p_main,
            2.0 * p_main - 1.0,
            pt.bloch[0],
            pt.bloch[1],
            pt.bloch[2],
        ]))
    };
    run().unwrap_or_else(|e| Row::failed(&[theta], SWEEP_COLUMNS.len(), e))
}

/// Blue-sideband stabilization across polar angles, with the master
/// equation result next to the closed-form predictions.
pub fn stabilization_sweep(
    sys: &SystemParams<f64>,
    base: &DriveSettings<f64>,
    thetas: &[f64],
) -> Result<SweepResult> {
    sys.validate()?;
    let mut out = SweepResult::new(columns(&SWEEP_COLUMNS));
    out.rows = thetas.par_iter().map(|&th| sweep_row(sys, base, th)).collect();
    Ok(out)
}

/// `P(|g~>)` for each interaction at each polar angle, at fixed Rabi rate
/// `drv.omega_rabi()`, plus the uncoupled baseline `g~_- / (g~_- + g~_+)`.
/// All selected interactions must have the same strength.
pub fn interaction_comparison(
    sys: &SystemParams<f64>,
    drv: &DriveSettings<f64>,
    thetas: &[f64],
    interactions: &[Interaction],
) -> Result<SweepResult> {
    sys.validate()?;
    if interactions.is_empty() {
        return Err(invalid("interactions", "at least one interaction is required"));
    }
    let reference = interactions[0].strength(drv);
    for k in interactions {
        let s = k.strength(drv);
        if (s - reference).abs() > 1e-12 * reference.abs().max(s.abs()) {
            return Err(invalid(
                "interactions",
                format!("strengths differ: {} has {s:e}, {} has {reference:e}", k, interactions[0]),
            ));
        }
    }
    let omega_rabi = drv.omega_rabi();
    if !(omega_rabi > 0.0) {
        return Err(invalid("omega_R", "Rabi rate must be positive"));
    }

    let mut spec: Vec<(String, String)> = vec![("theta".into(), "rad".into())];
    spec.extend(interactions.iter().map(|k| (format!("P_{}", k.name()), String::new())));
    spec.push(("P_baseline".into(), String::new()));
    let width = spec.len();

    let jobs: Vec<(usize, Interaction)> = (0..thetas.len())
        .flat_map(|i| interactions.iter().map(move |&k| (i, k)))
        .collect();
    let solved: Vec<Result<f64>> = jobs
        .par_iter()
        .map(|&(i, k)| {
            let theta = thetas[i];
            let axis = StabilizationAxis::new(theta, drv.phase_phi)?;
            let mut d = drv.with_axis(omega_rabi, &axis);
            d.delta = omega_rabi + 2.0 * sys.chi * axis.theta.cos();
            stabilized_point(sys, &d, k, k.strength(drv)).map(|p| p.p_gtilde)
        })
        .collect();

    let mut out = SweepResult::new(spec.into_iter().map(|(n, u)| super::Column::new(n, u)).collect());
    for (i, &theta) in thetas.iter().enumerate() {
        let chunk = &solved[i * interactions.len()..(i + 1) * interactions.len()];
        let baseline = dressed_rates(sys.gamma, sys.gamma_phi, theta.clamp(0.0, std::f64::consts::PI))
            .and_then(|r| baseline_population(&r));
        let mut values = vec![theta];
        let mut error = None;
        for r in chunk.iter().map(|r| r.as_ref().copied()).chain(std::iter::once(baseline.as_ref().copied())) {
            match r {
                Ok(v) => values.push(v),
                Err(e) => {
                    error = Some(e.to_string());
                    break;
                }
            }
        }
        out.rows.push(match error {
            None => Row::ok(values),
            Some(e) => Row::failed(&[theta], width, e),
        });
    }
    Ok(out)
}

/// Comparison of a steady state at cutoff `N` and `N + 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutoffCheck {
    pub n_fock: usize,
    pub p_gtilde: f64,
    pub p_gtilde_larger: f64,
    pub n_bar: f64,
    pub n_bar_larger: f64,
    pub converged: bool,
}

/// Re-solves with two extra Fock levels; converged when `P(|g~>)` and the
/// photon number both agree to 1e-4.
pub fn cutoff_convergence(
    sys: &SystemParams<f64>,
    drv: &DriveSettings<f64>,
    kind: Interaction,
    strength: f64,
) -> Result<CutoffCheck> {
    let small = stabilized_point(sys, drv, kind, strength)?;
    let larger_sys = SystemParams {
        n_fock: sys.n_fock + 2,
        ..*sys
    };
    let large = stabilized_point(&larger_sys, drv, kind, strength)?;
    let tol = 1e-4;
    Ok(CutoffCheck {
        n_fock: sys.n_fock,
        p_gtilde: small.p_gtilde,
        p_gtilde_larger: large.p_gtilde,
        n_bar: small.n_bar,
        n_bar_larger: large.n_bar,
        converged: (small.p_gtilde - large.p_gtilde).abs() < tol && (small.n_bar - large.n_bar).abs() < tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{asymptote_drive, asymptote_system, stabilization_drive, stabilization_system};
    use std::f64::consts::PI;

    #[test]
    fn endpoints_of_the_sweep_drive() {
        let sys = stabilization_system();
        let base = stabilization_drive();
        let d0 = sweep_drive(&sys, &base, 0.0).unwrap();
        assert_eq!((d0.omega_x, d0.omega_b), (0.0, 0.0));
        assert_eq!(d0.omega_z, base.omega_x);
        assert!((d0.delta - (base.omega_x + 2.0 * sys.chi)).abs() < 1e-6);
        let dp = sweep_drive(&sys, &base, PI).unwrap();
        assert_eq!(dp.omega_x, 0.0);
        assert_eq!(dp.omega_z, -base.omega_x);
        assert_eq!(dp.omega_b, base.omega_b);
        assert!((dp.axis().unwrap().theta - PI).abs() < 1e-15);
        let dm = sweep_drive(&sys, &base, PI / 3.0).unwrap();
        assert!((dm.axis().unwrap().theta - PI / 3.0).abs() < 1e-12);
        assert!(sweep_drive(&sys, &base, 4.0).is_err());
        let mut no_rabi = base;
        no_rabi.omega_x = 0.0;
        assert!(sweep_drive(&sys, &no_rabi, 1.0).is_err());
    }

    #[test]
    fn ground_state_at_zero_angle() {
        let sys = stabilization_system();
        let d = sweep_drive(&sys, &stabilization_drive(), 0.0).unwrap();
        let p = stabilized_point(&sys, &d, Interaction::Blue, d.omega_b).unwrap();
        assert!((p.p_gtilde - 1.0).abs() < 1e-9);
        assert!((p.purity - 1.0).abs() < 1e-9);
        assert!(p.theta_measured.abs() < 1e-4);
    }

    #[test]
    fn measured_angle_is_the_axis_without_dispersion() {
        // chi = 0: the stabilized vector lies on the axis up to the small
        // pull of the off-resonant half of the blue coupling
        let sys = SystemParams {
            chi: 0.0,
            ..stabilization_system()
        };
        let d = sweep_drive(&sys, &stabilization_drive(), 2.0).unwrap();
        let p = stabilized_point(&sys, &d, Interaction::Blue, d.omega_b).unwrap();
        assert!((p.theta_measured - 2.0).abs() < 3e-3, "{}", p.theta_measured);
        // P(g~) and purity describe the same reduced state when it sits on the axis
        assert!((2.0 * p.p_gtilde - 1.0 - p.purity).abs() < 1e-3);
    }

    #[test]
    fn sweep_shape_and_failed_rows() {
        let sys = stabilization_system();
        let res = stabilization_sweep(&sys, &stabilization_drive(), &[0.0, 1.0, 7.0]).unwrap();
        assert_eq!(res.rows.len(), 3);
        assert_eq!(res.columns.len(), 16);
        assert!(res.rows[0].is_ok() && res.rows[1].is_ok());
        assert!(!res.rows[2].is_ok());
        assert_eq!(res.rows[2].values[0], Some(7.0));
        assert!(res.rows[2].values[1..].iter().all(|v| v.is_none()));
    }

    #[test]
    fn comparison_requires_equal_strengths() {
        let sys = asymptote_system();
        let mut d = asymptote_drive(1.0);
        d.omega_p_sb = 2.0;
        assert!(interaction_comparison(&sys, &d, &[1.0], &Interaction::ALL).is_err());
        assert!(interaction_comparison(&sys, &d, &[1.0], &[]).is_err());
        assert!(interaction_comparison(&sys, &d, &[1.0], &[Interaction::Blue]).is_ok());
    }

    #[test]
    fn zero_coupling_gives_baseline_for_every_interaction() {
        let sys = asymptote_system();
        let mut d = asymptote_drive(0.0);
        d.omega_z = -d.omega_z;
        let res = interaction_comparison(&sys, &d, &[0.0, 0.7, PI / 2.0, 2.5, PI], &Interaction::ALL).unwrap();
        let base = res.column_ok("P_baseline");
        for k in Interaction::ALL {
            let col = res.column_ok(&format!("P_{}", k.name()));
            for (a, b) in col.iter().zip(&base) {
                assert!((a - b).abs() < 1e-9, "{k}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn cutoff_check_converges_for_weak_coupling() {
        let sys = asymptote_system();
        let c = cutoff_convergence(&sys, &asymptote_drive(0.02 * sys.kappa), Interaction::Blue, 0.02 * sys.kappa).unwrap();
        assert!(c.converged, "{c:?}");
        assert_eq!(c.n_fock, 5);
    }
}
