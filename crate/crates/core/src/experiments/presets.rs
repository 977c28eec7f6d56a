//! Parameter sets for the standard runs.

use crate::hamiltonian::{DriveSettings, SystemParams};
use crate::scalar::angular;

fn mhz(x: f64) -> f64 {
    angular(x * 1e6)
}

/// Device of the stabilization sweep: 4.343 / 5.439 GHz, kappa 1.6 MHz,
/// gamma 7.6 kHz, gamma_phi 3 kHz, chi -0.2 MHz, five Fock levels.
pub fn stabilization_system() -> SystemParams<f64> {
    SystemParams {
        omega_q: angular(4.343e9),
        omega_r: angular(5.439e9),
        chi: mhz(-0.2),
        chi_prime: mhz(-0.2),
        alpha: mhz(-188.0),
        kappa: mhz(1.6),
        gamma: angular(7.6e3),
        gamma_phi: angular(3e3),
        n_fock: 5,
    }
}

/// Rabi drive 9 MHz, blue sideband 0.5 MHz.
pub fn stabilization_drive() -> DriveSettings<f64> {
    DriveSettings {
        omega_x: mhz(9.0),
        omega_b: mhz(0.5),
        ..DriveSettings::default()
    }
}

/// Model device for the coupling-strength asymptotes and the interaction
/// comparison: kappa 1 MHz, gamma = gamma_phi = 0.1 MHz, no dispersive
/// shift, five Fock levels.
pub fn asymptote_system() -> SystemParams<f64> {
    SystemParams {
        omega_q: angular(4.343e9),
        omega_r: angular(5.439e9),
        chi: 0.0,
        chi_prime: 0.0,
        alpha: mhz(-188.0),
        kappa: mhz(1.0),
        gamma: mhz(0.1),
        gamma_phi: mhz(0.1),
        n_fock: 5,
    }
}

/// Rabi rate 100 MHz along `theta = pi` with a blue coupling `g`; the cavity
/// detuning matches the dressed splitting.
pub fn asymptote_drive(g: f64) -> DriveSettings<f64> {
    let omega_rabi = mhz(100.0);
    DriveSettings {
        omega_z: -omega_rabi,
        omega_b: g,
        delta: omega_rabi,
        ..DriveSettings::default()
    }
}

/// All four couplings at 1 MHz with a 100 MHz Rabi rate.
pub fn comparison_drive() -> DriveSettings<f64> {
    let c = mhz(1.0);
    DriveSettings {
        omega_z: mhz(100.0),
        omega_b: c,
        omega_r_sb: c,
        omega_p_sb: c,
        omega_l: c,
        ..DriveSettings::default()
    }
}

/// Transmission spectroscopy device: kappa 0.5 MHz, gamma 20 kHz,
/// gamma_phi 3 kHz, chi -2 MHz, four Fock levels.
pub fn spectroscopy_system() -> SystemParams<f64> {
    SystemParams {
        omega_q: angular(4.343e9),
        omega_r: angular(5.439e9),
        chi: mhz(-2.0),
        chi_prime: mhz(-2.0),
        alpha: mhz(-188.0),
        kappa: mhz(0.5),
        gamma: angular(20e3),
        gamma_phi: angular(3e3),
        n_fock: 4,
    }
}

/// Blue sideband 0.5 MHz, probe amplitude 1% of kappa, no Rabi drive.
pub fn spectroscopy_drive() -> DriveSettings<f64> {
    DriveSettings {
        omega_b: mhz(0.5),
        probe_eps: 0.01 * mhz(0.5),
        ..DriveSettings::default()
    }
}

/// Probe detunings (-6..4 MHz) and modulation detunings (chi -10..+10 MHz),
/// 21 points each.
pub fn spectroscopy_grid(chi: f64) -> (Vec<f64>, Vec<f64>) {
    let probe = super::linspace(mhz(-6.0), mhz(4.0), 21);
    let modulation = super::linspace(-10.0, 10.0, 21).into_iter().map(|x| chi + mhz(x)).collect();
    (probe, modulation)
}

/// Red-sideband vacuum-Rabi device: kappa 1.6 MHz, gamma 7.6 kHz, three
/// Fock levels (one excitation never leaves the n <= 1 block).
pub fn vacuum_rabi_system() -> SystemParams<f64> {
    SystemParams {
        n_fock: 3,
        chi: 0.0,
        chi_prime: 0.0,
        ..stabilization_system()
    }
}
