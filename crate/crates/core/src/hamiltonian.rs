//! Lab-frame and rotating-frame Hamiltonians of the driven qubit–cavity
//! model. All energies are angular frequencies (rad/s, with hbar = 1).

use std::fmt;

use crate::dressed::StabilizationAxis;
use crate::error::{invalid, Result};
use crate::qop::{eig_hermitian, Operator, Qubit, QubitCavity};
use crate::scalar::{cis, hertz, lit, Real};

/// Two-mode model parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams<T> {
    pub omega_q: T,
    pub omega_r: T,
    /// Dispersive shift entering the dressed frame as `+chi a^dag a sigma_z`.
    pub chi: T,
    /// Dispersive shift used by the red-sideband frame (`-chi' sigma_z a^dag a`).
    pub chi_prime: T,
    /// Anharmonicity, used only for calibration formulas.
    pub alpha: T,
    pub kappa: T,
    pub gamma: T,
    pub gamma_phi: T,
    pub n_fock: usize,
}

impl<T: Real> SystemParams<T> {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("kappa", self.kappa),
            ("gamma", self.gamma),
            ("gamma_phi", self.gamma_phi),
        ] {
            if !(v >= T::zero() && v.is_finite()) {
                return Err(invalid(name, "rate must be finite and non-negative"));
            }
        }
        for (name, v) in [
            ("omega_q", self.omega_q),
            ("omega_r", self.omega_r),
            ("chi", self.chi),
            ("chi_prime", self.chi_prime),
            ("alpha", self.alpha),
        ] {
            if !v.is_finite() {
                return Err(invalid(name, "must be finite"));
            }
        }
        QubitCavity::new(self.n_fock)?;
        Ok(())
    }

    pub fn space(&self) -> Result<QubitCavity> {
        QubitCavity::new(self.n_fock)
    }
}

/// Drive configuration in the rotating frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveSettings<T> {
    /// Rabi drive strength.
    pub omega_x: T,
    /// Rabi drive detuning.
    pub omega_z: T,
    /// Azimuthal angle of the stabilization axis.
    pub phase_phi: T,
    pub omega_b: T,
    pub omega_r_sb: T,
    pub omega_p_sb: T,
    /// Longitudinal coupling strength.
    pub omega_l: T,
    /// Cavity detuning in the rotating frame.
    pub delta: T,
    pub probe_eps: T,
    pub probe_detuning: T,
}

impl<T: Real> Default for DriveSettings<T> {
    fn default() -> Self {
        Self {
            omega_x: T::zero(),
            omega_z: T::zero(),
            phase_phi: T::zero(),
            omega_b: T::zero(),
            omega_r_sb: T::zero(),
            omega_p_sb: T::zero(),
            omega_l: T::zero(),
            delta: T::zero(),
            probe_eps: T::zero(),
            probe_detuning: T::zero(),
        }
    }
}

impl<T: Real> DriveSettings<T> {
    pub fn omega_rabi(&self) -> T {
        (self.omega_x * self.omega_x + self.omega_z * self.omega_z).sqrt()
    }

    pub fn axis(&self) -> Result<StabilizationAxis<T>> {
        StabilizationAxis::from_drive(self.omega_x, self.omega_z, self.phase_phi)
    }

    /// Rabi drive along `(theta, phi)` with total rate `omega_rabi`.
    pub fn with_axis(mut self, omega_rabi: T, axis: &StabilizationAxis<T>) -> Self {
        let (s, c) = axis.theta.sin_cos();
        self.omega_x = omega_rabi * s;
        self.omega_z = omega_rabi * c;
        self.phase_phi = axis.phi;
        self
    }
}

/// Qubit–cavity interaction types in the dressed frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Interaction {
    /// `a^dag s+ + a s-`
    Blue,
    /// `a^dag s- + a s+`
    Red,
    /// `(a^dag + a) s_z`
    Longitudinal,
    /// `(a^dag + a) s_y`
    Purple,
}

impl Interaction {
    pub const ALL: [Interaction; 4] = [
        Interaction::Blue,
        Interaction::Red,
        Interaction::Longitudinal,
        Interaction::Purple,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Interaction::Blue => "blue",
            Interaction::Red => "red",
            Interaction::Longitudinal => "longitudinal",
            Interaction::Purple => "purple",
        }
    }

    /// Strength configured for this interaction in `drv`.
    pub fn strength<T: Real>(self, drv: &DriveSettings<T>) -> T {
        match self {
            Interaction::Blue => drv.omega_b,
            Interaction::Red => drv.omega_r_sb,
            Interaction::Longitudinal => drv.omega_l,
            Interaction::Purple => drv.omega_p_sb,
        }
    }
}

impl fmt::Display for Interaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Interaction {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "blue" => Ok(Interaction::Blue),
            "red" => Ok(Interaction::Red),
            "longitudinal" => Ok(Interaction::Longitudinal),
            "purple" => Ok(Interaction::Purple),
            other => Err(format!("unknown interaction `{other}`")),
        }
    }
}

/// `omega_r a^dag a + (omega_q/2) s_z - g_r (a^dag s- + a s+) - g_b (a^dag s+ + a s-)`.
pub fn h_static<T: Real>(space: &QubitCavity, sys: &SystemParams<T>, g_r: T, g_b: T) -> Result<Operator<T>> {
    let half: T = lit(0.5);
    let a = space.a::<T>();
    let ad = a.dag();
    let red = &(&ad * &space.sm()) + &(&a * &space.sp());
    let blue = &(&ad * &space.sp()) + &(&a * &space.sm());
    let h = &(&space.num::<T>().scale_real(sys.omega_r) + &space.sz::<T>().scale_real(sys.omega_q * half))
        - &(&red.scale_real(g_r) + &blue.scale_real(g_b));
    h.into_hermitian()
}

/// Red-sideband Hamiltonian in the frame co-rotating with the excitation
/// number: `-(detuning + chi' + chi' s_z) a^dag a - g (a^dag s- + a s+)`.
/// `|e0>` and `|g1>` are degenerate at zero detuning.
pub fn h_red_rotating<T: Real>(space: &QubitCavity, sys: &SystemParams<T>, g: T, detuning: T) -> Result<Operator<T>> {
    let a = space.a::<T>();
    let ad = a.dag();
    let n = space.num::<T>();
    let diag = &n.scale_real(detuning + sys.chi_prime) + &(&n * &space.sz()).scale_real(sys.chi_prime);
    let swap = &(&ad * &space.sm()) + &(&a * &space.sp());
    (&(-&diag) - &swap.scale_real(g)).into_hermitian()
}

/// Rabi drive in the qubit frame: `(Ox/2)(e^{i phi} s+ + h.c.) + (Oz/2) s_z`.
pub fn h_drive<T: Real>(space: &QubitCavity, drv: &DriveSettings<T>) -> Result<Operator<T>> {
    let half: T = lit(0.5);
    let sp = space.sp::<T>().scale(cis(drv.phase_phi));
    let x = &sp + &sp.dag();
    (&x.scale_real(drv.omega_x * half) + &space.sz::<T>().scale_real(drv.omega_z * half)).into_hermitian()
}

/// Unit-strength interaction operator with the azimuthal phase applied to
/// the qubit raising operator.
pub fn interaction_operator<T: Real>(space: &QubitCavity, kind: Interaction, phi: T) -> Result<Operator<T>> {
    let a = space.a::<T>();
    let ad = a.dag();
    let sp = space.sp::<T>().scale(cis(phi));
    let sm = sp.dag();
    let x = &ad + &a;
    let op = match kind {
        Interaction::Blue => &(&ad * &sp) + &(&a * &sm),
        Interaction::Red => &(&ad * &sm) + &(&a * &sp),
        Interaction::Longitudinal => &x * &space.sz(),
        Interaction::Purple => {
            let i = crate::scalar::cplx(T::zero(), T::one());
            let sy = &sp.scale(-i) + &sm.scale(i);
            &x * &sy
        }
    };
    op.into_hermitian()
}

/// Dressed-frame Hamiltonian with one interaction:
/// drive + `chi a^dag a s_z` + `delta a^dag a` + `strength * interaction`.
pub fn h_rotating<T: Real>(
    space: &QubitCavity,
    sys: &SystemParams<T>,
    drv: &DriveSettings<T>,
    kind: Interaction,
    strength: T,
) -> Result<Operator<T>> {
    let n = space.num::<T>();
    let static_part = &(&h_drive(space, drv)? + &(&n * &space.sz()).scale_real(sys.chi)) + &n.scale_real(drv.delta);
    let coupling = interaction_operator(space, kind, drv.phase_phi)?.scale_real(strength);
    (&static_part + &coupling).into_hermitian()
}

pub fn h_blue_rotating<T: Real>(space: &QubitCavity, sys: &SystemParams<T>, drv: &DriveSettings<T>) -> Result<Operator<T>> {
    h_rotating(space, sys, drv, Interaction::Blue, drv.omega_b)
}

pub fn h_red_sideband_rotating<T: Real>(
    space: &QubitCavity,
    sys: &SystemParams<T>,
    drv: &DriveSettings<T>,
) -> Result<Operator<T>> {
    h_rotating(space, sys, drv, Interaction::Red, drv.omega_r_sb)
}

pub fn h_purple_rotating<T: Real>(
    space: &QubitCavity,
    sys: &SystemParams<T>,
    drv: &DriveSettings<T>,
) -> Result<Operator<T>> {
    h_rotating(space, sys, drv, Interaction::Purple, drv.omega_p_sb)
}

pub fn h_longitudinal<T: Real>(
    space: &QubitCavity,
    sys: &SystemParams<T>,
    omega_l: T,
    drv: &DriveSettings<T>,
) -> Result<Operator<T>> {
    h_rotating(space, sys, drv, Interaction::Longitudinal, omega_l)
}

/// Rabi drive frequency, blue-sideband modulation frequency and the cavity
/// detuning that puts `|e~0>` on resonance with `|g~1>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Detunings<T> {
    pub omega_1: T,
    pub omega_2: T,
    pub delta: T,
}

pub fn optimal_detunings<T: Real>(sys: &SystemParams<T>, drv: &DriveSettings<T>, theta: T) -> Result<Detunings<T>> {
    let omega_rabi = drv.omega_rabi();
    if !(omega_rabi > T::zero()) {
        return Err(invalid("omega_R", "Rabi rate must be positive"));
    }
    let two: T = lit(2.0);
    Ok(Detunings {
        omega_1: sys.omega_q - drv.omega_z,
        omega_2: sys.omega_q + sys.omega_r - omega_rabi - drv.omega_z,
        delta: omega_rabi + two * sys.chi * theta.cos(),
    })
}

/// Transition frequencies of the coupled static Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DressedFrequencies<T> {
    /// `E(e0) - E(g0)`
    pub omega_q: T,
    /// `E(g1) - E(g0)`
    pub omega_r: T,
    /// Half the qubit-state dependence of the cavity frequency:
    /// `[(E(e1) - E(e0)) - (E(g1) - E(g0))] / 2`.
    pub chi: T,
}

/// Diagonalizes [`h_static`] and labels eigenstates by their largest bare
/// overlap.
pub fn dressed_frequencies<T: Real>(
    space: &QubitCavity,
    sys: &SystemParams<T>,
    g_r: T,
    g_b: T,
) -> Result<DressedFrequencies<T>> {
    let h = h_static(space, sys, g_r, g_b)?;
    let (vals, vecs) = eig_hermitian(&h)?;
    let energy = |q: Qubit, n: usize| {
        let idx = space.index(q, n);
        let mut best = 0;
        let mut best_w = T::zero();
        for k in 0..vals.len() {
            let w = vecs[(idx, k)].norm_sqr();
            if w > best_w {
                best_w = w;
                best = k;
            }
        }
        vals[best]
    };
    let g0 = energy(Qubit::G, 0);
    let e0 = energy(Qubit::E, 0);
    let g1 = energy(Qubit::G, 1);
    let e1 = energy(Qubit::E, 1);
    let half: T = lit(0.5);
    Ok(DressedFrequencies {
        omega_q: e0 - g0,
        omega_r: g1 - g0,
        chi: ((e1 - e0) - (g1 - g0)) * half,
    })
}

/// Model-validity warnings.
#[derive(Clone, Debug, PartialEq)]
pub enum Warning {
    /// A drive strength exceeds 5% of the smaller mode frequency.
    RotatingWave { name: &'static str, ratio: f64 },
    /// `Omega_R < 20 max(gamma, gamma_phi)`; dressed rates are unreliable.
    SlowDressing { omega_rabi_hz: f64, rate_hz: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::RotatingWave { name, ratio } => write!(
                f,
                "{name} is {ratio:.3} of the smaller mode frequency; rotating-wave terms may matter"
            ),
            Warning::SlowDressing { omega_rabi_hz, rate_hz } => write!(
                f,
                "Rabi rate {omega_rabi_hz:.4e} Hz is below 20x the qubit decoherence rate {rate_hz:.4e} Hz"
            ),
        }
    }
}

pub fn validity_warnings<T: Real>(sys: &SystemParams<T>, drv: &DriveSettings<T>) -> Vec<Warning> {
    let mut out = Vec::new();
    let scale = sys.omega_q.abs().min(sys.omega_r.abs());
    if scale > T::zero() {
        let limit: T = lit(0.05);
        for (name, v) in [
            ("omega_x", drv.omega_x),
            ("omega_b", drv.omega_b),
            ("omega_r_sb", drv.omega_r_sb),
            ("omega_p_sb", drv.omega_p_sb),
        ] {
            let ratio = v.abs() / scale;
            if ratio > limit {
                out.push(Warning::RotatingWave {
                    name,
                    ratio: crate::scalar::to_f64(ratio),
                });
            }
        }
    }
    let omega_rabi = drv.omega_rabi();
    let rate = sys.gamma.max(sys.gamma_phi);
    if omega_rabi > T::zero() && omega_rabi < rate * lit(20.0) {
        out.push(Warning::SlowDressing {
            omega_rabi_hz: hertz(omega_rabi),
            rate_hz: hertz(rate),
        });
    }
    out
}
