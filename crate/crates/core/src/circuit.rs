//! Quantization of the linearized tunable-coupler circuit into a two-mode
//! model: qubit mode (node 1), resonator mode (node 2) and a coupler node
//! eliminated by minimizing the inductive energy.

use crate::error::{invalid, Error, Result};
use crate::scalar::{lit, to_f64, Real};

/// Lumped-element circuit (SI units); `phi_ext` in flux quanta.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircuitParams<T> {
    pub l_q: T,
    pub l_r: T,
    pub l_g0: T,
    pub c_q: T,
    pub c_r: T,
    pub c_g: T,
    pub phi_ext: T,
}

impl<T: Real> CircuitParams<T> {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("l_q", self.l_q),
            ("l_r", self.l_r),
            ("l_g0", self.l_g0),
            ("c_q", self.c_q),
            ("c_r", self.c_r),
        ] {
            if !(v > T::zero() && v.is_finite()) {
                return Err(invalid(name, "must be positive and finite"));
            }
        }
        if !(self.c_g >= T::zero() && self.c_g.is_finite()) {
            return Err(invalid("c_g", "must be non-negative and finite"));
        }
        if !self.phi_ext.is_finite() {
            return Err(invalid("phi_ext", "must be finite"));
        }
        Ok(())
    }

    /// True when `L_g0 >= 0.1 min(L_q, L_r)`, outside the weak-coupler regime.
    pub fn coupler_too_large(&self) -> bool {
        self.l_g0 >= lit::<T>(0.1) * self.l_q.min(self.l_r)
    }

    pub fn with_flux(mut self, phi_ext: T) -> Self {
        self.phi_ext = phi_ext;
        self
    }

    /// Swaps the qubit and resonator branches.
    pub fn swapped(&self) -> Self {
        Self {
            l_q: self.l_r,
            l_r: self.l_q,
            c_q: self.c_r,
            c_r: self.c_q,
            ..*self
        }
    }
}

/// Device with `omega_q/2pi = 4.343 GHz` and `omega_r/2pi = 5.439 GHz` at
/// zero flux.
pub fn reference_device() -> CircuitParams<f64> {
    CircuitParams {
        l_q: 10e-9,
        l_r: 2e-9,
        l_g0: 0.1e-9,
        c_q: 131.03810398e-15,
        c_r: 405.96195749e-15,
        c_g: 2e-15,
        phi_ext: 0.0,
    }
}

/// Same frequencies, but the capacitive coupling outweighs the inductive
/// one at zero flux, so `g_r` changes sign between 0 and 0.2 flux quanta
/// while `g_b` keeps its sign.
pub fn crossing_device() -> CircuitParams<f64> {
    CircuitParams {
        l_q: 10e-9,
        l_r: 2e-9,
        l_g0: 0.05e-9,
        c_q: 130.66485799e-15,
        c_r: 414.80245071e-15,
        c_g: 3e-15,
        phi_ext: 0.0,
    }
}

/// Quantized two-mode model; frequencies and couplings in rad/s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoModeModel<T> {
    pub omega_q: T,
    pub omega_r: T,
    pub g_l: T,
    pub g_c: T,
    pub g_r: T,
    pub g_b: T,
    pub z1: T,
    pub z2: T,
}

/// `L_g0 / |cos(pi phi_ext)|`.
pub fn coupler_inductance<T: Real>(l_g0: T, phi_ext: T) -> Result<T> {
    let c = (T::pi() * phi_ext).cos().abs();
    if c <= lit(1e-6) {
        return Err(Error::DivergentCoupler {
            phi_ext: to_f64(phi_ext),
            cos: to_f64(c),
        });
    }
    Ok(l_g0 / c)
}

/// Intermediate products of the quantization, exposed for cross-checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircuitProducts<T> {
    pub l_g: T,
    /// `L*^2 = L_r L_q + L_r L_g + L_q L_g`
    pub l_star2: T,
    /// `C*^2 = C_r C_q + C_r C_g + C_q C_g`
    pub c_star2: T,
}

pub fn products<T: Real>(p: &CircuitParams<T>) -> Result<CircuitProducts<T>> {
    p.validate()?;
    let l_g = coupler_inductance(p.l_g0, p.phi_ext)?;
    Ok(CircuitProducts {
        l_g,
        l_star2: p.l_r * p.l_q + p.l_r * l_g + p.l_q * l_g,
        c_star2: p.c_r * p.c_q + p.c_r * p.c_g + p.c_q * p.c_g,
    })
}

pub fn quantize<T: Real>(p: &CircuitParams<T>) -> Result<TwoModeModel<T>> {
    let CircuitProducts { l_g, l_star2, c_star2 } = products(p)?;
    let one = T::one();
    let two: T = lit(2.0);
    let red_q = one - p.l_r * l_g / l_star2;
    let red_r = one - p.l_q * l_g / l_star2;
    let omega_q = (red_q * (p.c_r + p.c_g) / (p.l_q * c_star2)).sqrt();
    let omega_r = (red_r * (p.c_q + p.c_g) / (p.l_r * c_star2)).sqrt();
    let z1 = (p.l_q * (p.c_r + p.c_g) / (c_star2 * red_q)).sqrt();
    let z2 = (p.l_r * (p.c_q + p.c_g) / (c_star2 * red_r)).sqrt();
    let zz = (z1 * z2).sqrt();
    let g_l = -(l_g / (two * l_star2)) * zz;
    let g_c = -(p.c_g / (two * c_star2)) / zz;
    Ok(TwoModeModel {
        omega_q,
        omega_r,
        g_l,
        g_c,
        g_r: -(g_l - g_c),
        g_b: -(g_l + g_c),
        z1,
        z2,
    })
}

/// Small-coupling approximation of the red/blue couplings:
/// `(L_g/2) sqrt(w_r w_q / (L_r L_q)) ∓ (C_g/2) sqrt(w_r w_q / (C_r C_q))`.
pub fn approximate_couplings<T: Real>(p: &CircuitParams<T>) -> Result<(T, T)> {
    let m = quantize(p)?;
    let l_g = coupler_inductance(p.l_g0, p.phi_ext)?;
    let half: T = lit(0.5);
    let w = m.omega_r * m.omega_q;
    let ind = half * l_g * (w / (p.l_r * p.l_q)).sqrt();
    let cap = half * p.c_g * (w / (p.c_r * p.c_q)).sqrt();
    Ok((ind - cap, ind + cap))
}

/// One row of a flux sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FluxPoint<T> {
    pub flux: T,
    pub g_r: T,
    pub g_b: T,
}

pub fn coupling_vs_flux<T: Real>(p: &CircuitParams<T>, flux_grid: &[T]) -> Result<Vec<FluxPoint<T>>> {
    flux_grid
        .iter()
        .map(|&flux| {
            let m = quantize(&p.with_flux(flux))?;
            Ok(FluxPoint {
                flux,
                g_r: m.g_r,
                g_b: m.g_b,
            })
        })
        .collect()
}

/// Locates a sign change of `g_r` on `[lo, hi]` by bisection.
pub fn g_r_zero_crossing<T: Real>(p: &CircuitParams<T>, lo: T, hi: T) -> Result<Option<T>> {
    let f = |x: T| quantize(&p.with_flux(x)).map(|m| m.g_r);
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (f(a)?, f(b)?);
    if fa == T::zero() {
        return Ok(Some(a));
    }
    if fa.signum() == fb.signum() {
        return Ok(None);
    }
    for _ in 0..200 {
        let mid = (a + b) * lit(0.5);
        let fm = f(mid)?;
        if fm == T::zero() || (b - a) <= T::default_epsilon() * mid.abs().max(T::one()) {
            return Ok(Some(mid));
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(Some((a + b) * lit(0.5)))
}

/// Fourier cosine coefficients of `g_r(t)` and `g_b(t)` under
/// `phi(t) = phi_dc + phi_ac cos(w t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Harmonics<T> {
    pub g_r: Vec<T>,
    pub g_b: Vec<T>,
}

pub fn modulation_harmonics<T: Real>(
    p: &CircuitParams<T>,
    phi_dc: T,
    phi_ac: T,
    n_harmonics: usize,
) -> Result<Harmonics<T>> {
    modulation_harmonics_with(p, phi_dc, phi_ac, n_harmonics, 4096)
}

/// [`modulation_harmonics`] with an explicit sample count (at least 4096).
pub fn modulation_harmonics_with<T: Real>(
    p: &CircuitParams<T>,
    phi_dc: T,
    phi_ac: T,
    n_harmonics: usize,
    samples: usize,
) -> Result<Harmonics<T>> {
    if phi_dc.abs() + phi_ac.abs() >= lit(0.5) {
        return Err(Error::DivergentCoupler {
            phi_ext: to_f64(phi_dc.abs() + phi_ac.abs()),
            cos: to_f64((T::pi() * (phi_dc.abs() + phi_ac.abs())).cos().abs()),
        });
    }
    if samples < 4096 {
        return Err(invalid("samples", "at least 4096 samples per period"));
    }
    let m = lit::<T>(samples as f64);
    let mut g_r = vec![T::zero(); n_harmonics + 1];
    let mut g_b = vec![T::zero(); n_harmonics + 1];
    // trapezoid on a periodic integrand: equal weights
    for s in 0..samples {
        let tau = T::two_pi() * lit(s as f64) / m;
        let q = quantize(&p.with_flux(phi_dc + phi_ac * tau.cos()))?;
        for k in 0..=n_harmonics {
            let w = (tau * lit(k as f64)).cos();
            g_r[k] += q.g_r * w;
            g_b[k] += q.g_b * w;
        }
    }
    let two: T = lit(2.0);
    for k in 0..=n_harmonics {
        let norm = if k == 0 { m } else { m / two };
        g_r[k] /= norm;
        g_b[k] /= norm;
    }
    Ok(Harmonics { g_r, g_b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Matrix2, Matrix3};
    use rand::{Rng, SeedableRng};
    use std::f64::consts::TAU;

    fn ghz(w: f64) -> f64 {
        w / TAU / 1e9
    }

    /// Normal modes from the node-flux equations: eliminate node 3 from the
    /// inductance matrix and diagonalize `C^-1 K`.
    fn circuit_normal_modes(p: &CircuitParams<f64>) -> (f64, f64) {
        let l_g = coupler_inductance(p.l_g0, p.phi_ext).unwrap();
        let (iq, ir, ig) = (1.0 / p.l_q, 1.0 / p.l_r, 1.0 / l_g);
        let k3 = Matrix3::new(iq, 0.0, -iq, 0.0, ir, -ir, -iq, -ir, iq + ir + ig);
        let k2 = Matrix2::new(k3[(0, 0)], k3[(0, 1)], k3[(1, 0)], k3[(1, 1)])
            - Matrix2::new(k3[(0, 2)] * k3[(2, 0)], k3[(0, 2)] * k3[(2, 1)], k3[(1, 2)] * k3[(2, 0)], k3[(1, 2)] * k3[(2, 1)])
                / k3[(2, 2)];
        let c2 = Matrix2::new(p.c_q + p.c_g, -p.c_g, -p.c_g, p.c_r + p.c_g);
        let dyn_m = c2.try_inverse().unwrap() * k2;
        sorted_sqrt_eigs(dyn_m)
    }

    /// Normal modes of `sum w_i a_i^dag a_i + g_L x1 x2 + g_C (a1^dag - a1)(a2^dag - a2)`.
    fn model_normal_modes(m: &TwoModeModel<f64>) -> (f64, f64) {
        let a = Matrix2::new(m.omega_q, 2.0 * m.g_l, 2.0 * m.g_l, m.omega_r);
        let b = Matrix2::new(m.omega_q, -2.0 * m.g_c, -2.0 * m.g_c, m.omega_r);
        sorted_sqrt_eigs(a * b)
    }

    fn sorted_sqrt_eigs(m: Matrix2<f64>) -> (f64, f64) {
        let tr = m.trace();
        let det = m.determinant();
        let disc = (tr * tr / 4.0 - det).sqrt();
        let (l1, l2) = (tr / 2.0 - disc, tr / 2.0 + disc);
        (l1.sqrt(), l2.sqrt())
    }

    #[test]
    fn coupler_inductance_examples() {
        assert_eq!(coupler_inductance(1e-9, 0.0).unwrap(), 1e-9);
        assert!((coupler_inductance(1e-9f64, 1.0 / 3.0).unwrap() - 2e-9).abs() < 1e-21);
        let direct = 1e-9 / (0.49 * std::f64::consts::PI).cos();
        assert!((coupler_inductance(1e-9, 0.49).unwrap() - direct).abs() < 1e-12 * direct);
        assert!(matches!(coupler_inductance(1e-9, 0.5), Err(Error::DivergentCoupler { .. })));
        assert!(matches!(coupler_inductance(1e-9, -1.5), Err(Error::DivergentCoupler { .. })));
    }

    #[test]
    fn reference_device_frequencies() {
        let m = quantize(&reference_device()).unwrap();
        assert!((ghz(m.omega_q) - 4.343).abs() < 1e-6);
        assert!((ghz(m.omega_r) - 5.439).abs() < 1e-6);
        let (lo, hi) = circuit_normal_modes(&reference_device());
        let (alo, ahi) = model_normal_modes(&m);
        assert!((lo - alo).abs() < 1e-9 * lo);
        assert!((hi - ahi).abs() < 1e-9 * hi);
        // coupling pushes the modes apart
        assert!(lo < m.omega_q && hi > m.omega_r);
    }

    #[test]
    fn decoupled_limit() {
        let p = CircuitParams::<f64> {
            l_q: 8e-9,
            l_r: 3e-9,
            l_g0: 1e-18,
            c_q: 100e-15,
            c_r: 300e-15,
            c_g: 0.0,
            phi_ext: 0.0,
        };
        let m = quantize(&p).unwrap();
        assert!(m.g_c == 0.0);
        assert!(m.g_l.abs() < 1e-6 * m.omega_q);
        assert!((m.omega_q - 1.0 / (p.l_q * p.c_q).sqrt()).abs() < 1e-8 * m.omega_q);
        assert!((m.omega_r - 1.0 / (p.l_r * p.c_r).sqrt()).abs() < 1e-8 * m.omega_r);
    }

    #[test]
    fn branch_swap_symmetry() {
        let p = reference_device().with_flux(0.21);
        let a = quantize(&p).unwrap();
        let b = quantize(&p.swapped()).unwrap();
        assert!((a.omega_q - b.omega_r).abs() < 1e-12 * a.omega_q);
        assert!((a.omega_r - b.omega_q).abs() < 1e-12 * a.omega_r);
        assert!((a.g_l - b.g_l).abs() < 1e-12 * a.g_l.abs());
        assert!((a.g_c - b.g_c).abs() < 1e-12 * a.g_c.abs());
    }

    #[test]
    fn regrouping_identities_and_back_substitution() {
        let p = reference_device().with_flux(0.17);
        let m = quantize(&p).unwrap();
        assert_eq!(m.g_r, -(m.g_l - m.g_c));
        assert_eq!(m.g_b, -(m.g_l + m.g_c));
        // omega = 1/sqrt(L_eff C_eff) and Z = sqrt(L_eff / C_eff) with the
        // effective branch values of the reduced Hamiltonian
        let pr = products(&p).unwrap();
        let l1 = p.l_q / (1.0 - p.l_r * pr.l_g / pr.l_star2);
        let c1 = pr.c_star2 / (p.c_r + p.c_g);
        assert!((m.omega_q * (l1 * c1).sqrt() - 1.0).abs() < 1e-12);
        assert!((m.z1 - (l1 / c1).sqrt()).abs() < 1e-12 * m.z1);
        let l2 = p.l_r / (1.0 - p.l_q * pr.l_g / pr.l_star2);
        let c2 = pr.c_star2 / (p.c_q + p.c_g);
        assert!((m.omega_r * (l2 * c2).sqrt() - 1.0).abs() < 1e-12);
        assert!((m.z2 - (l2 / c2).sqrt()).abs() < 1e-12 * m.z2);
    }

    #[test]
    fn normal_modes_random_sets() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(99);
        for _ in 0..50 {
            let l_q: f64 = rng.gen_range(5e-9..20e-9);
            let l_r: f64 = rng.gen_range(1e-9..5e-9);
            let p = CircuitParams {
                l_q,
                l_r,
                l_g0: rng.gen_range(0.001..0.099) * l_q.min(l_r),
                c_q: rng.gen_range(50e-15..200e-15),
                c_r: rng.gen_range(200e-15..600e-15),
                c_g: rng.gen_range(0.0..5e-15),
                phi_ext: rng.gen_range(-0.4..0.4),
            };
            let m = quantize(&p).unwrap();
            let (lo, hi) = circuit_normal_modes(&p);
            let (alo, ahi) = model_normal_modes(&m);
            assert!((lo - alo).abs() <= 1e-9 * lo);
            assert!((hi - ahi).abs() <= 1e-9 * hi);
        }
    }

    #[test]
    fn approximation_agrees_for_small_coupler() {
        let mut p = reference_device();
        p.l_g0 = 1e-12;
        p.c_g = 0.02e-15;
        let m = quantize(&p).unwrap();
        let (gr, gb) = approximate_couplings(&p).unwrap();
        assert!((gr - m.g_r).abs() < 1e-2 * m.g_r.abs());
        assert!((gb - m.g_b).abs() < 1e-2 * m.g_b.abs());
    }

    #[test]
    fn flux_dependence() {
        let p = reference_device();
        let grid: Vec<f64> = (-45..=45).map(|k| k as f64 * 0.01).collect();
        let pts = coupling_vs_flux(&p, &grid).unwrap();
        let min = pts.iter().min_by(|a, b| a.g_r.abs().partial_cmp(&b.g_r.abs()).unwrap()).unwrap();
        assert_eq!(min.flux, 0.0);
        for (a, b) in pts.iter().zip(pts.iter().rev()) {
            assert!((a.g_r - b.g_r).abs() < 1e-12 * a.g_r.abs());
        }
        let gl: Vec<f64> = (0..50).map(|k| quantize(&p.with_flux(k as f64 * 0.0099)).unwrap().g_l.abs()).collect();
        assert!(gl.windows(2).all(|w| w[1] > w[0]));
        assert!(pts.iter().all(|x| x.g_b > 0.0 && x.g_r > 0.0));
    }

    #[test]
    fn red_coupling_changes_sign() {
        let p = crossing_device();
        let root = g_r_zero_crossing(&p, 0.0, 0.45).unwrap().expect("sign change");
        let m = quantize(&p.with_flux(root)).unwrap();
        assert!(m.g_r.abs() < 1e-6 * m.g_b.abs());
        let grid: Vec<f64> = (0..45).map(|k| k as f64 * 0.01).collect();
        let pts = coupling_vs_flux(&p, &grid).unwrap();
        assert!(pts.iter().all(|x| x.g_b > 0.0));
        assert!(pts.first().unwrap().g_r < 0.0 && pts.last().unwrap().g_r > 0.0);
        assert!(g_r_zero_crossing(&reference_device(), 0.0, 0.45).unwrap().is_none());
    }

    #[test]
    fn harmonics_static_drive() {
        let p = reference_device();
        let h = modulation_harmonics(&p, 0.1, 0.0, 3).unwrap();
        let m = quantize(&p.with_flux(0.1)).unwrap();
        assert!((h.g_r[0] - m.g_r).abs() < 1e-12 * m.g_r.abs());
        for k in 1..=3 {
            assert!(h.g_r[k].abs() < 1e-9 * m.g_r.abs());
            assert!(h.g_b[k].abs() < 1e-9 * m.g_b.abs());
        }
    }

    #[test]
    fn harmonics_parity_at_zero_bias() {
        let p = reference_device();
        let h = modulation_harmonics(&p, 0.0, 0.2, 5).unwrap();
        for k in [1, 3, 5] {
            assert!(h.g_b[k].abs() < 1e-10 * h.g_b[0].abs(), "k={k}");
        }
        assert!(h.g_b[2].abs() > 1e-6 * h.g_b[0].abs());
    }

    #[test]
    fn harmonics_converged_and_leading_order() {
        let p = reference_device();
        let (dc, ac) = (0.25, 0.05);
        let coarse = modulation_harmonics(&p, dc, ac, 2).unwrap();
        let fine = modulation_harmonics_with(&p, dc, ac, 2, 40960).unwrap();
        for k in 0..=2 {
            assert!((coarse.g_r[k] - fine.g_r[k]).abs() < 1e-10 * fine.g_r[0].abs());
        }
        let h = 1e-6;
        let deriv = (quantize(&p.with_flux(dc + h)).unwrap().g_r - quantize(&p.with_flux(dc - h)).unwrap().g_r) / (2.0 * h);
        assert!((coarse.g_r[1] - deriv * ac).abs() < 0.05 * (deriv * ac).abs());
        assert!(modulation_harmonics(&p, 0.3, 0.2, 1).is_err());
    }

    #[test]
    fn shrinking_coupler_is_continuous() {
        let mut p = reference_device();
        let mut last: Option<(f64, f64)> = None;
        for k in 0..30 {
            p.l_g0 = 0.1e-9 * 0.5f64.powi(k);
            let m = quantize(&p).unwrap();
            if let Some((gl, gc)) = last {
                assert!((m.g_l - gl).abs() <= gl.abs() * 0.51 + 1e-6);
                assert!((m.g_c - gc).abs() <= 1e-2 * gc.abs());
            }
            last = Some((m.g_l, m.g_c));
        }
        let (gl, _) = last.unwrap();
        assert!(gl.abs() < 1e-6 * quantize(&p).unwrap().g_c.abs());
    }

    #[test]
    fn weak_coupler_flag() {
        assert!(!reference_device().coupler_too_large());
        let mut p = reference_device();
        p.l_g0 = 0.5e-9;
        assert!(p.coupler_too_large());
    }

    #[test]
    fn single_precision_quantization() {
        let p = reference_device();
        let p32 = CircuitParams {
            l_q: p.l_q as f32,
            l_r: p.l_r as f32,
            l_g0: p.l_g0 as f32,
            c_q: p.c_q as f32,
            c_r: p.c_r as f32,
            c_g: p.c_g as f32,
            phi_ext: 0.0f32,
        };
        let m = quantize(&p32).unwrap();
        assert!((m.omega_q as f64 / TAU / 1e9 - 4.343).abs() < 1e-4);
    }
}
