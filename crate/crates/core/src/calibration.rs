//! Calibration relations: dispersive shift versus coupling and the
//! Rabi-rate line used to convert flux-drive amplitude into coupling.

use crate::error::{invalid, Error, Result};
use crate::scalar::{lit, to_f64, Real};

/// `chi = g^2 alpha / (2 Delta (Delta + alpha))`.
pub fn chi_from_coupling<T: Real>(g: T, delta: T, alpha: T) -> Result<T> {
    let two: T = lit(2.0);
    let den = two * delta * (delta + alpha);
    if den == T::zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(g * g * alpha / den)
}

/// Inverse of [`chi_from_coupling`]: `|g| = sqrt(2 chi Delta (Delta + alpha) / alpha)`.
pub fn g_from_number_splitting<T: Real>(chi: T, delta: T, alpha: T) -> Result<T> {
    if alpha == T::zero() {
        return Err(invalid("alpha", "anharmonicity must be nonzero"));
    }
    let two: T = lit(2.0);
    let radicand = two * chi * delta * (delta + alpha) / alpha;
    if radicand < T::zero() {
        return Err(Error::InvalidDispersiveRegime {
            radicand: to_f64(radicand),
        });
    }
    Ok(radicand.sqrt())
}

/// Coupling at which `|chi|` reaches `chi_limit`.
pub fn coupling_threshold<T: Real>(chi_limit: T, delta: T, alpha: T) -> Result<T> {
    let sign = if chi_from_coupling(T::one(), delta, alpha)? < T::zero() {
        -T::one()
    } else {
        T::one()
    };
    g_from_number_splitting(sign * chi_limit.abs(), delta, alpha)
}

/// Fitted Rabi-rate line `Omega_R = 2 eps_d |g / Delta| + Omega_0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RabiLine<T> {
    pub eps_d: T,
    pub omega_0: T,
    pub residual_rms: T,
}

/// Least-squares line through `(|g/Delta|, Omega_R)` samples.
pub fn rabi_rate_calibration<T: Real>(samples: &[(T, T)]) -> Result<RabiLine<T>> {
    if samples.len() < 2 {
        return Err(Error::RankDeficientFit);
    }
    let n: T = lit(samples.len() as f64);
    let mean_x = samples.iter().fold(T::zero(), |a, s| a + s.0) / n;
    let mean_y = samples.iter().fold(T::zero(), |a, s| a + s.1) / n;
    let sxx = samples.iter().fold(T::zero(), |a, s| a + (s.0 - mean_x) * (s.0 - mean_x));
    let sxy = samples.iter().fold(T::zero(), |a, s| a + (s.0 - mean_x) * (s.1 - mean_y));
    let spread = samples.iter().fold(T::zero(), |a, s| a.max(s.0.abs()));
    if sxx <= T::default_epsilon() * spread * spread * n {
        return Err(Error::RankDeficientFit);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss = samples.iter().fold(T::zero(), |a, s| {
        let r = s.1 - (slope * s.0 + intercept);
        a + r * r
    });
    Ok(RabiLine {
        eps_d: slope * lit(0.5),
        omega_0: intercept,
        residual_rms: (ss / n).sqrt(),
    })
}
