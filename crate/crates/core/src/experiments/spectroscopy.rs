use num_complex::Complex;
use rayon::prelude::*;

use super::{columns, Row, SweepResult};
use crate::error::{invalid, Error, Result};
use crate::hamiltonian::{h_drive, interaction_operator, DriveSettings, Interaction, SystemParams};
use crate::lindblad::{build_liouvillian, propagate_time_dependent, steady_state, Liouvillian};
use crate::qop::{expect, CMatrix, DensityMatrix, Operator, Qubit, QubitCavity};
use crate::ode::OdeOptions;

/// Settings of the periodic-steady-state search used when the Rabi drive
/// is on.
#[derive(Clone, Copy, Debug)]
pub struct SpectroscopyOptions {
    /// Initial settling time in units of `1/kappa`.
    pub settle: f64,
    /// Relative change allowed between two successive probe-period averages.
    pub rel_tol: f64,
    /// Extra settling rounds before a cell is flagged.
    pub max_extensions: usize,
    pub samples_per_period: usize,
    /// Use the propagation path even when an exact frame exists.
    pub force_periodic: bool,
    pub ode: OdeOptions<f64>,
}

impl Default for SpectroscopyOptions {
    fn default() -> Self {
        Self {
            settle: 15.0,
            rel_tol: 1e-3,
            max_extensions: 3,
            samples_per_period: 64,
            force_periodic: false,
            ode: OdeOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectroscopyCell {
    /// `|<a>|`.
    pub amplitude: f64,
    /// `|<a>| kappa / (2 eps)`; 1 on an empty-cavity resonance.
    pub transmission: f64,
    /// False when the periodic search ran out of extensions.
    pub converged: bool,
}

/// Row-major grid: one row per modulation detuning, one column per probe
/// detuning.
#[derive(Clone, Debug)]
pub struct SpectroscopyMap {
    pub probe: Vec<f64>,
    pub modulation: Vec<f64>,
    pub cells: Vec<std::result::Result<SpectroscopyCell, String>>,
}

impl SpectroscopyMap {
    pub fn cell(&self, row: usize, col: usize) -> Option<&SpectroscopyCell> {
        self.cells[row * self.probe.len() + col].as_ref().ok()
    }

    /// Transmission along one modulation row (0 for failed cells).
    pub fn row(&self, row: usize) -> Vec<f64> {
        (0..self.probe.len())
            .map(|c| self.cell(row, c).map_or(0.0, |x| x.transmission))
            .collect()
    }

    pub fn to_sweep(&self) -> SweepResult {
        let cols = [
            ("modulation_detuning", "rad/s"),
            ("probe_detuning", "rad/s"),
            ("transmission", ""),
            ("amplitude", ""),
        ];
        let mut out = SweepResult::new(columns(&cols));
        for (i, &m) in self.modulation.iter().enumerate() {
            for (j, &p) in self.probe.iter().enumerate() {
                out.rows.push(match &self.cells[i * self.probe.len() + j] {
                    Ok(c) => {
                        let mut r = Row::ok(vec![m, p, c.transmission, c.amplitude]);
                        if !c.converged {
                            r.error = Some("periodic steady state not converged".into());
                        }
                        r
                    }
                    Err(e) => Row::failed(&[m, p], cols.len(), e),
                });
            }
        }
        out
    }
}

fn bare_dissipators(space: &QubitCavity, sys: &SystemParams<f64>) -> Vec<(f64, Operator<f64>)> {
    vec![
        (sys.kappa, space.a()),
        (sys.gamma, space.sm()),
        (0.5 * sys.gamma_phi, space.sz()),
    ]
}

/// `-i [A, .]` as a superoperator (column stacking); `A` need not be
/// Hermitian.
fn commutator_superop(a: &CMatrix<f64>) -> CMatrix<f64> {
    let n = a.nrows();
    let id = CMatrix::<f64>::identity(n, n);
    (id.kronecker(a) - a.transpose().kronecker(&id)) * Complex::new(0.0, -1.0)
}

/// Transmission at one probe detuning `probe` (from the cavity) and one
/// modulation detuning `modulation` (from `omega_q + omega_r`).
///
/// Without a Rabi drive the frame co-rotating with the probe makes the
/// problem static and the steady state is solved directly. With a Rabi
/// drive the probe term keeps a residual rotation and the state is
/// propagated until two successive probe-period averages of `|<a>|` agree.
pub fn spectroscopy_point(
    sys: &SystemParams<f64>,
    drv: &DriveSettings<f64>,
    probe: f64,
    modulation: f64,
    opts: &SpectroscopyOptions,
) -> Result<SpectroscopyCell> {
    sys.validate()?;
    if !(drv.probe_eps > 0.0) {
        return Err(invalid("probe_eps", "probe amplitude must be positive"));
    }
    if !(sys.kappa > 0.0) {
        return Err(invalid("kappa", "transmission needs a positive cavity linewidth"));
    }
    let space = sys.space()?;
    let eps = drv.probe_eps;
    let a = space.a::<f64>();
    let n = space.num::<f64>();
    let nz = &n * &space.sz();
    let blue = interaction_operator(&space, Interaction::Blue, drv.phase_phi)?.scale_real(drv.omega_b);
    let c_ops = bare_dissipators(&space, sys);
    let cell = |amplitude: f64, converged: bool| SpectroscopyCell {
        amplitude,
        transmission: amplitude * sys.kappa / (2.0 * eps),
        converged,
    };

    if drv.omega_x == 0.0 && !opts.force_periodic {
        let h = &(&(&space.sz::<f64>().scale_real(0.5 * (probe - modulation)) - &n.scale_real(probe))
            + &(&nz.scale_real(sys.chi) + &blue))
            + &(&a + &a.dag()).scale_real(eps);
        let l = build_liouvillian(&h.into_hermitian()?, &c_ops)?;
        let rho = steady_state(&l)?;
        return Ok(cell(expect(&a, &rho)?.norm(), true));
    }

    // Qubit frame at the Rabi drive, cavity frame at the modulation minus that.
    let h0 = &(&h_drive(&space, drv)? - &n.scale_real(modulation + drv.omega_z)) + &(&nz.scale_real(sys.chi) + &blue);
    let l0 = build_liouvillian(&h0.into_hermitian()?, &c_ops)?;
    let nu = probe - modulation - drv.omega_z;
    let dim = space.dim();
    let l_plus = Liouvillian::from_matrix(dim, commutator_superop(a.matrix()) * Complex::new(eps, 0.0))?;
    let l_minus = Liouvillian::from_matrix(dim, commutator_superop(a.dag().matrix()) * Complex::new(eps, 0.0))?;

    if nu.abs() <= 1e-9 * sys.kappa {
        let l = Liouvillian::from_matrix(dim, l0.matrix() + l_plus.matrix() + l_minus.matrix())?;
        let rho = steady_state(&l)?;
        return Ok(cell(expect(&a, &rho)?.norm(), true));
    }

    type Phase = Box<dyn Fn(f64) -> Complex<f64> + Sync>;
    let terms: Vec<(Phase, Liouvillian<f64>)> = vec![
        (Box::new(move |t: f64| Complex::from_polar(1.0, nu * t)), l_plus),
        (Box::new(move |t: f64| Complex::from_polar(1.0, -nu * t)), l_minus),
    ];
    let period = std::f64::consts::TAU / nu.abs();
    let settle = opts.settle / sys.kappa;
    let m = opts.samples_per_period.max(8);
    let mut rho = DensityMatrix::from_ket(&space.basis(Qubit::G, 0));
    let mut last = 0.0;
    for _round in 0..=opts.max_extensions {
        let t0 = rho.time();
        let start = t0 + settle;
        let times: Vec<f64> = (0..=2 * m).map(|k| start + period * k as f64 / m as f64).collect();
        let (states, _) = propagate_time_dependent(&l0, &terms, &rho, &times, &opts.ode)?;
        let amp: Vec<f64> = states
            .iter()
            .map(|s| expect(&a, s).map(|z| z.norm()))
            .collect::<Result<_>>()?;
        let first = amp[..m].iter().sum::<f64>() / m as f64;
        let second = amp[m..2 * m].iter().sum::<f64>() / m as f64;
        last = second;
        rho = states.into_iter().last().ok_or(Error::NoConvergence("spectroscopy propagation"))?;
        if (second - first).abs() <= opts.rel_tol * second.abs().max(f64::MIN_POSITIVE) {
            return Ok(cell(second, true));
        }
    }
    Ok(cell(last, false))
}

/// Transmission over a grid of probe and modulation detunings.
pub fn spectroscopy_map(
    sys: &SystemParams<f64>,
    drv: &DriveSettings<f64>,
    probe: &[f64],
    modulation: &[f64],
    opts: &SpectroscopyOptions,
) -> Result<SpectroscopyMap> {
    sys.validate()?;
    if !(drv.probe_eps > 0.0) {
        return Err(invalid("probe_eps", "probe amplitude must be positive"));
    }
    let jobs: Vec<(f64, f64)> = modulation
        .iter()
        .flat_map(|&m| probe.iter().map(move |&p| (m, p)))
        .collect();
    let cells = jobs
        .par_iter()
        .map(|&(m, p)| spectroscopy_point(sys, drv, p, m, opts).map_err(|e| e.to_string()))
        .collect();
    Ok(SpectroscopyMap {
        probe: probe.to_vec(),
        modulation: modulation.to_vec(),
        cells,
    })
}

/// Indices of local maxima that reach at least 25% of the row maximum.
/// Edge points count when they exceed their single neighbour.
pub fn row_peaks(values: &[f64]) -> Vec<usize> {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(max > 0.0) {
        return Vec::new();
    }
    (0..values.len())
        .filter(|&i| {
            let v = values[i];
            let left = i == 0 || v > values[i - 1];
            let right = i + 1 == values.len() || v > values[i + 1];
            left && right && values.len() > 1 && v >= 0.25 * max
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{spectroscopy_drive, spectroscopy_system};
    use crate::scalar::angular;

    #[test]
    fn peaks() {
        assert_eq!(row_peaks(&[0.0, 1.0, 0.0, 0.2, 0.1, 0.5]), vec![1, 5]);
        assert_eq!(row_peaks(&[3.0, 1.0, 2.0]), vec![0, 2]);
        assert!(row_peaks(&[0.0, 0.0]).is_empty());
        assert!(row_peaks(&[1.0]).is_empty());
    }

    #[test]
    fn empty_cavity_is_a_unit_lorentzian() {
        let sys = SystemParams {
            chi: 0.0,
            ..spectroscopy_system()
        };
        let drv = DriveSettings {
            omega_b: 0.0,
            ..spectroscopy_drive()
        };
        let o = SpectroscopyOptions::default();
        for dp in [0.0, 0.5 * sys.kappa, 2.0 * sys.kappa] {
            let c = spectroscopy_point(&sys, &drv, dp, angular(3e6), &o).unwrap();
            let expected = 1.0 / (1.0 + (2.0 * dp / sys.kappa).powi(2)).sqrt();
            assert!((c.transmission - expected).abs() < 1e-6, "{dp}: {}", c.transmission);
        }
    }

    #[test]
    fn periodic_path_matches_exact_frame() {
        let sys = spectroscopy_system();
        let drv = spectroscopy_drive();
        // the qubit relaxes on 1/gamma, much slower than 15/kappa
        let forced = SpectroscopyOptions {
            force_periodic: true,
            settle: 400.0,
            ..SpectroscopyOptions::default()
        };
        for (p, m) in [(angular(2e6), angular(-7e6)), (angular(-2.5e6), sys.chi)] {
            let exact = spectroscopy_point(&sys, &drv, p, m, &SpectroscopyOptions::default()).unwrap();
            let periodic = spectroscopy_point(&sys, &drv, p, m, &forced).unwrap();
            assert!(periodic.converged);
            assert!(
                (exact.transmission - periodic.transmission).abs() < 5e-3 * exact.transmission.max(0.05),
                "{} vs {}",
                exact.transmission,
                periodic.transmission
            );
        }
    }

    #[test]
    fn rejects_missing_probe() {
        let sys = spectroscopy_system();
        let drv = DriveSettings {
            probe_eps: 0.0,
            ..spectroscopy_drive()
        };
        assert!(spectroscopy_point(&sys, &drv, 0.0, 0.0, &SpectroscopyOptions::default()).is_err());
    }
}
