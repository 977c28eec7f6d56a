//! Dressed-state frame: stabilization axis, rotating-frame dissipation
//! rates, the cavity-assisted transition rate and the closed-form
//! stabilized populations.

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::qop::{CMatrix, Operator, QubitCavity};
use crate::scalar::{cis, lit, real, tolerance, Real};

/// Polar and azimuthal angle of the stabilized Bloch vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilizationAxis<T> {
    pub theta: T,
    pub phi: T,
}

impl<T: Real> StabilizationAxis<T> {
    /// `theta` must lie in `[0, pi]`; `phi` is wrapped into `[0, 2 pi)`.
    pub fn new(theta: T, phi: T) -> Result<Self> {
        let slack = tolerance::<T>(1e-12);
        if !(theta >= -slack && theta <= T::pi() + slack) {
            return Err(invalid("theta", "polar angle must lie in [0, pi]"));
        }
        if !phi.is_finite() {
            return Err(invalid("phi", "azimuthal angle must be finite"));
        }
        let theta = theta.max(T::zero()).min(T::pi());
        let mut phi = phi % T::two_pi();
        if phi < T::zero() {
            phi += T::two_pi();
        }
        Ok(Self { theta, phi })
    }

    /// Axis defined by a Rabi drive of strength `omega_x` and detuning
    /// `omega_z`: `theta = arccos(omega_z / omega_R)`. A negative `omega_x`
    /// is the same axis with `phi + pi`.
    pub fn from_drive(omega_x: T, omega_z: T, phi: T) -> Result<Self> {
        if omega_x == T::zero() && omega_z == T::zero() {
            return Err(invalid("omega_R", "Rabi rate must be positive to define an axis"));
        }
        let theta = omega_x.abs().atan2(omega_z);
        let phi = if omega_x < T::zero() { phi + T::pi() } else { phi };
        Self::new(theta, phi)
    }

    /// `(x, y, z)` Bloch vector of `|g~>` under the `sigma_z = +1 on |e>`
    /// convention.
    pub fn ground_bloch(&self) -> [T; 3] {
        let (s, c) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [-s * cp, -s * sp, -c]
    }
}

/// `U = [[cos(theta/2), sin(theta/2)], [-sin(theta/2), cos(theta/2)]]`. Its
/// columns are `|g~>` and `|e~>` for `phi = 0`.
pub fn dressing_unitary<T: Real>(theta: T) -> CMatrix<T> {
    let half: T = theta * lit(0.5);
    let (s, c) = half.sin_cos();
    CMatrix::from_row_slice(2, 2, &[real(c), real(s), real(-s), real(c)])
}

/// Dressing unitary including the azimuthal phase: `diag(1, e^{i phi}) U`.
/// Columns: `|g~> = cos|g> - e^{i phi} sin|e>`, `|e~> = sin|g> + e^{i phi} cos|e>`.
pub fn dressing_unitary_phased<T: Real>(axis: &StabilizationAxis<T>) -> CMatrix<T> {
    let mut w = dressing_unitary(axis.theta);
    let p = cis(axis.phi);
    w[(1, 0)] *= p;
    w[(1, 1)] *= p;
    w
}

/// `(|g~>, |e~>)` as qubit amplitude pairs.
pub fn dressed_qubit_states<T: Real>(axis: &StabilizationAxis<T>) -> ([Complex<T>; 2], [Complex<T>; 2]) {
    let w = dressing_unitary_phased(axis);
    ([w[(0, 0)], w[(1, 0)]], [w[(0, 1)], w[(1, 1)]])
}

/// Conjugates a 2x2 operator written in the dressed basis into the bare
/// basis: `W op W^dag`.
pub fn to_bare_basis<T: Real>(axis: &StabilizationAxis<T>, op: &Operator<T>) -> Operator<T> {
    let w = dressing_unitary_phased(axis);
    let data = &w * op.matrix() * w.adjoint();
    let hermitian = op.is_hermitian();
    let out = Operator::from_matrix(data).expect("2x2 is square");
    if hermitian {
        out.into_hermitian().unwrap_or_else(|e| panic!("unitary conjugation broke Hermiticity: {e}"))
    } else {
        out
    }
}

/// Rotating-frame rates of dressed decay, excitation and dephasing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DressedRates<T> {
    pub gamma_minus: T,
    pub gamma_plus: T,
    pub gamma_phi_tilde: T,
}

fn check_rate<T: Real>(name: &'static str, value: T) -> Result<()> {
    if value >= T::zero() && value.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, "rate must be finite and non-negative"))
    }
}

/// `g~_- = g cos^4(th/2) + (g_phi/2) sin^2 th`,
/// `g~_+ = g sin^4(th/2) + (g_phi/2) sin^2 th`,
/// `g~_phi = (g/2) sin^2 th + g_phi cos^2 th`.
pub fn dressed_rates<T: Real>(gamma: T, gamma_phi: T, theta: T) -> Result<DressedRates<T>> {
    check_rate("gamma", gamma)?;
    check_rate("gamma_phi", gamma_phi)?;
    let half: T = lit(0.5);
    let (sh, ch) = (theta * half).sin_cos();
    let (s, c) = theta.sin_cos();
    let s2 = s * s;
    let ch2 = ch * ch;
    let sh2 = sh * sh;
    Ok(DressedRates {
        gamma_minus: gamma * ch2 * ch2 + gamma_phi * half * s2,
        gamma_plus: gamma * sh2 * sh2 + gamma_phi * half * s2,
        gamma_phi_tilde: gamma * half * s2 + gamma_phi * c * c,
    })
}

/// Population of `|g~>` with no cavity coupling: `g~_- / (g~_- + g~_+)`.
pub fn baseline_population<T: Real>(rates: &DressedRates<T>) -> Result<T> {
    let den = rates.gamma_minus + rates.gamma_plus;
    if den == T::zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(rates.gamma_minus / den)
}

/// Cavity-assisted transition rate in its two forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransitionRate<T> {
    /// Golden rule: `g^2 kappa / ((kappa/2)^2 + (delta - omega)^2)`.
    pub lorentzian: T,
    /// Saturating form: `4 g^2 kappa / (kappa^2 + 4 g^2)`.
    pub saturating: T,
}

pub fn golden_rule_rate<T: Real>(g: T, kappa: T, delta: T, omega: T) -> Result<TransitionRate<T>> {
    if !(kappa > T::zero()) {
        return Err(invalid("kappa", "cavity linewidth must be positive"));
    }
    let half: T = lit(0.5);
    let det = delta - omega;
    let lorentzian = g * g * kappa / ((kappa * half) * (kappa * half) + det * det);
    Ok(TransitionRate {
        lorentzian,
        saturating: saturating_rate(g, kappa),
    })
}

fn saturating_rate<T: Real>(g: T, kappa: T) -> T {
    let four: T = lit(4.0);
    let g2 = g * g;
    let den = kappa * kappa + four * g2;
    if den == T::zero() {
        T::zero()
    } else {
        four * g2 * kappa / den
    }
}

fn check_inputs<T: Real>(rates: &DressedRates<T>, g: T, kappa: T) -> Result<()> {
    check_rate("gamma_minus", rates.gamma_minus)?;
    check_rate("gamma_plus", rates.gamma_plus)?;
    check_rate("kappa", kappa)?;
    if !g.is_finite() {
        return Err(invalid("g", "coupling must be finite"));
    }
    Ok(())
}

/// Weak-coupling stabilized population of `|g~>` (full rational form).
pub fn pop_weak_coupling<T: Real>(rates: &DressedRates<T>, g: T, kappa: T) -> Result<T> {
    check_inputs(rates, g, kappa)?;
    let (gm, gp) = (rates.gamma_minus, rates.gamma_plus);
    let four: T = lit(4.0);
    let g2 = four * g * g;
    let k2 = kappa * kappa;
    let num = gm * (gm + gp + kappa) * k2 + g2 * (gm + kappa) * (gp + kappa);
    let den = (gm + gp) * (gm + gp + kappa) * k2 + g2 * ((gm + gp) * (gp + kappa) + k2);
    if den == T::zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(num / den)
}

/// Strong-coupling asymptote `(g~_- + kappa) / (g~_- + g~_+ + kappa)`.
pub fn pop_strong_coupling<T: Real>(rates: &DressedRates<T>, kappa: T) -> Result<T> {
    check_inputs(rates, T::zero(), kappa)?;
    let den = rates.gamma_minus + rates.gamma_plus + kappa;
    if den == T::zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok((rates.gamma_minus + kappa) / den)
}

/// `(g~_- + G) / (g~_- + g~_+ + G)` with the saturating rate `G`.
pub fn pop_main_text<T: Real>(rates: &DressedRates<T>, g: T, kappa: T) -> Result<T> {
    check_inputs(rates, g, kappa)?;
    let big = saturating_rate(g, kappa);
    let den = rates.gamma_minus + rates.gamma_plus + big;
    if den == T::zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok((rates.gamma_minus + big) / den)
}

/// Polar angle shifted by the mean-photon dispersive pull:
/// `arccos[(Oz + 2 chi n) / sqrt(Ox^2 + (Oz + 2 chi n)^2)]`.
pub fn corrected_angle<T: Real>(chi: T, n_bar: T, omega_x: T, omega_z: T) -> Result<T> {
    let two: T = lit(2.0);
    let z = omega_z + two * chi * n_bar;
    if omega_x == T::zero() && z == T::zero() {
        return Err(invalid("omega_R", "effective Rabi rate vanishes"));
    }
    Ok(omega_x.abs().atan2(z))
}

/// Saturated photon number `g~_+ / (g~_- + g~_+ + kappa)`.
pub fn nbar_max<T: Real>(rates: &DressedRates<T>, kappa: T) -> Result<T> {
    check_inputs(rates, T::zero(), kappa)?;
    let den = rates.gamma_minus + rates.gamma_plus + kappa;
    if den == T::zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(rates.gamma_plus / den)
}

/// Coupling regime by `g / kappa`, thresholds 0.1 and 10.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Weak,
    Intermediate,
    Strong,
}

pub fn regime<T: Real>(g: T, kappa: T) -> Regime {
    let r = g.abs() / kappa;
    if r < lit(0.1) {
        Regime::Weak
    } else if r > lit(10.0) {
        Regime::Strong
    } else {
        Regime::Intermediate
    }
}

/// Rotating-frame collapse operators `kappa D[a]`, `g~_- D[s~-]`,
/// `g~_+ D[s~+]` and `(g~_phi / 2) D[s~z]` on the composite space.
pub fn dressed_dissipators<T: Real>(
    space: &QubitCavity,
    kappa: T,
    gamma: T,
    gamma_phi: T,
    axis: &StabilizationAxis<T>,
) -> Result<Vec<(T, Operator<T>)>> {
    check_rate("kappa", kappa)?;
    let rates = dressed_rates(gamma, gamma_phi, axis.theta)?;
    let sm = space.qubit(&to_bare_basis(axis, &Operator::sigma_minus()));
    let sz = space.qubit(&to_bare_basis(axis, &Operator::sigma_z()));
    let half: T = lit(0.5);
    Ok(vec![
        (kappa, space.a()),
        (rates.gamma_minus, sm.clone()),
        (rates.gamma_plus, sm.dag()),
        (rates.gamma_phi_tilde * half, sz),
    ])
}
