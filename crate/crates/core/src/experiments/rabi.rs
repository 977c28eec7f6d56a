use rustfft::{num_complex::Complex as FftComplex, FftPlanner};

use super::{columns, Row, SweepResult};
use crate::error::{invalid, Error, Result};
use crate::hamiltonian::{h_red_rotating, SystemParams};
use crate::lindblad::{build_liouvillian, propagate_with, EvolutionResult};
use crate::ode::OdeOptions;
use crate::qop::{DensityMatrix, Qubit};

/// Red-sideband swap starting from `|e0>`, with cavity decay, qubit decay
/// and dephasing on. `g_eff` is the sideband coupling; the populations
/// oscillate at `2 g_eff`.
pub fn vacuum_rabi_trace(sys: &SystemParams<f64>, g_eff: f64, times: &[f64]) -> Result<EvolutionResult<f64>> {
    sys.validate()?;
    let space = sys.space()?;
    let h = h_red_rotating(&space, sys, g_eff, 0.0)?;
    let c_ops = vec![
        (sys.kappa, space.a()),
        (sys.gamma, space.sm()),
        (0.5 * sys.gamma_phi, space.sz()),
    ];
    let l = build_liouvillian(&h, &c_ops)?;
    let rho0 = DensityMatrix::from_ket(&space.basis(Qubit::E, 0));
    let opts = OdeOptions {
        rtol: 1e-10,
        atol: 1e-12,
        ..OdeOptions::default()
    };
    propagate_with(&l, &rho0, times, &opts)
}

fn uniform_step(times: &[f64]) -> Result<f64> {
    if times.len() < 4 {
        return Err(invalid("times", "need at least four samples"));
    }
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    if !(dt > 0.0) {
        return Err(invalid("times", "must be increasing"));
    }
    for w in times.windows(2) {
        if ((w[1] - w[0]) - dt).abs() > 1e-6 * dt {
            return Err(invalid("times", "samples must be evenly spaced"));
        }
    }
    Ok(dt)
}

/// Dominant frequency (Hz) of an evenly sampled signal: FFT of the
/// mean-subtracted signal zero-padded to 8x its length, refined by a
/// parabola through the peak bin and its neighbours.
pub fn oscillation_frequency(times: &[f64], signal: &[f64]) -> Result<f64> {
    if times.len() != signal.len() {
        return Err(Error::DimensionMismatch {
            expected: times.len(),
            found: signal.len(),
        });
    }
    let dt = uniform_step(times)?;
    let mean = signal.iter().sum::<f64>() / signal.len() as f64;
    let n = 8 * signal.len();
    let mut buf: Vec<FftComplex<f64>> = signal.iter().map(|&s| FftComplex::new(s - mean, 0.0)).collect();
    buf.resize(n, FftComplex::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let mag: Vec<f64> = buf[..n / 2].iter().map(|z| z.norm()).collect();
    let k = (1..mag.len())
        .max_by(|&i, &j| mag[i].total_cmp(&mag[j]))
        .ok_or(Error::NoConvergence("frequency peak search"))?;
    let mut shift = 0.0;
    if k + 1 < mag.len() {
        let (l, c, r) = (mag[k - 1], mag[k], mag[k + 1]);
        let den = l - 2.0 * c + r;
        if den != 0.0 {
            shift = 0.5 * (l - r) / den;
        }
    }
    Ok((k as f64 + shift) / (n as f64 * dt))
}

/// Decay rate (1/s) of the envelope through the local maxima of `signal`:
/// least-squares line through `ln(peak)` versus time.
pub fn envelope_decay_rate(times: &[f64], signal: &[f64]) -> Result<f64> {
    let peaks: Vec<(f64, f64)> = (1..signal.len().saturating_sub(1))
        .filter(|&i| signal[i] > signal[i - 1] && signal[i] >= signal[i + 1] && signal[i] > 0.0)
        .map(|i| (times[i], signal[i].ln()))
        .collect();
    if peaks.len() < 3 {
        return Err(Error::RankDeficientFit);
    }
    let n = peaks.len() as f64;
    let mt = peaks.iter().map(|p| p.0).sum::<f64>() / n;
    let my = peaks.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = peaks.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let sxy: f64 = peaks.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::RankDeficientFit);
    }
    Ok(-sxy / sxx)
}

/// Figures of merit of a vacuum-Rabi trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RabiSummary {
    /// Oscillation frequency of the `|e0>` population, Hz.
    pub frequency_hz: f64,
    /// FFT bin width before zero padding, Hz.
    pub bin_hz: f64,
    /// Largest population reached by `|g1>` and when (first maximum).
    pub max_transfer: f64,
    pub t_max_transfer: f64,
    /// Fitted envelope decay rate of the `|e0>` population (1/s), when
    /// the trace is long and damped enough to fit.
    pub decay_rate: Option<f64>,
}

/// Trace plus summary, as a table with `time, P_e0, P_g1, n_bar` rows.
pub fn vacuum_rabi_summary(
    sys: &SystemParams<f64>,
    g_eff: f64,
    times: &[f64],
) -> Result<(EvolutionResult<f64>, RabiSummary, SweepResult)> {
    let dt = uniform_step(times)?;
    let res = vacuum_rabi_trace(sys, g_eff, times)?;
    let space = sys.space()?;
    let pe = res.population(&space, Qubit::E, 0);
    let pg1 = res.population(&space, Qubit::G, 1);
    let frequency_hz = oscillation_frequency(times, &pe)?;
    let first_max = (1..pg1.len().saturating_sub(1))
        .find(|&i| pg1[i] >= pg1[i - 1] && pg1[i] > pg1[i + 1])
        .unwrap_or_else(|| {
            (0..pg1.len())
                .max_by(|&i, &j| pg1[i].total_cmp(&pg1[j]))
                .unwrap_or(0)
        });
    let damped = sys.kappa + sys.gamma > 0.0;
    let summary = RabiSummary {
        frequency_hz,
        bin_hz: 1.0 / (times.len() as f64 * dt),
        max_transfer: pg1[first_max],
        t_max_transfer: times[first_max],
        decay_rate: if damped { envelope_decay_rate(times, &pe).ok() } else { None },
    };
    let mut table = SweepResult::new(columns(&[("time", "s"), ("P_e0", ""), ("P_g1", ""), ("n_bar", "")]));
    for i in 0..times.len() {
        table.rows.push(Row::ok(vec![times[i], pe[i], pg1[i], res.n_photon[i]]));
    }
    table.notes.push(format!("oscillation_frequency_hz = {:.16e}", summary.frequency_hz));
    table.notes.push(format!("fft_bin_hz = {:.16e}", summary.bin_hz));
    table.notes.push(format!("max_transfer = {:.16e}", summary.max_transfer));
    table.notes.push(format!("t_max_transfer_s = {:.16e}", summary.t_max_transfer));
    if let Some(r) = summary.decay_rate {
        table.notes.push(format!("envelope_decay_rate_per_s = {r:.16e}"));
    }
    Ok((res, summary, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::linspace;

    #[test]
    fn frequency_of_a_pure_tone() {
        let times = linspace(0.0, 1.0, 1001);
        for f in [3.0, 17.3, 101.7] {
            let s: Vec<f64> = times.iter().map(|t| (std::f64::consts::TAU * f * t).cos()).collect();
            let got = oscillation_frequency(&times, &s).unwrap();
            assert!((got - f).abs() < 0.05, "{f}: {got}");
        }
    }

    #[test]
    fn frequency_rejects_uneven_sampling() {
        assert!(oscillation_frequency(&[0.0, 1.0, 3.0, 4.0], &[0.0; 4]).is_err());
        assert!(oscillation_frequency(&[0.0, 1.0], &[0.0; 2]).is_err());
        assert!(oscillation_frequency(&[0.0, 1.0, 2.0, 3.0], &[0.0; 3]).is_err());
    }

    #[test]
    fn decay_of_a_damped_tone() {
        let times = linspace(0.0, 5.0, 5001);
        let s: Vec<f64> = times
            .iter()
            .map(|t| (-0.7 * t).exp() * (std::f64::consts::TAU * 4.0 * t).cos().powi(2))
            .collect();
        let rate = envelope_decay_rate(&times, &s).unwrap();
        assert!((rate - 0.7).abs() < 1e-3, "{rate}");
        assert_eq!(envelope_decay_rate(&times[..3], &s[..3]), Err(Error::RankDeficientFit));
    }
}
