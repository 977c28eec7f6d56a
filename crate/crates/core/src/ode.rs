//! Adaptive Dormand–Prince 5(4) integrator for complex vector ODEs with
//! dense output at requested times.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qop::CVector;
use crate::scalar::{lit, to_f64, Real};

#[derive(Clone, Copy, Debug)]
pub struct OdeOptions<T> {
    pub rtol: T,
    pub atol: T,
    /// Initial step; chosen automatically when `None`.
    pub h_init: Option<T>,
    pub max_steps: usize,
}

impl<T: Real> Default for OdeOptions<T> {
    fn default() -> Self {
        Self {
            rtol: lit(1e-8),
            atol: lit(1e-10),
            h_init: None,
            max_steps: 10_000_000,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// Integrates `dy/dt = f(t, y)` from `t0` and returns `y` at each entry of
/// `t_out` (sorted, all `>= t0`).
pub fn integrate<T, F>(
    mut f: F,
    t0: T,
    y0: &CVector<T>,
    t_out: &[T],
    opts: &OdeOptions<T>,
) -> Result<(Vec<CVector<T>>, OdeStats)>
where
    T: Real,
    F: FnMut(T, &CVector<T>, &mut CVector<T>),
{
    if t_out.windows(2).any(|w| w[1] < w[0]) || t_out.first().is_some_and(|&t| t < t0) {
        return Err(Error::InvalidParameter {
            name: "times",
            reason: "output times must be sorted and not precede the start".into(),
        });
    }
    let n = y0.len();
    let mut out = Vec::with_capacity(t_out.len());
    let mut stats = OdeStats::default();
    let mut next = 0;
    while next < t_out.len() && t_out[next] == t0 {
        out.push(y0.clone());
        next += 1;
    }
    let Some(&t_end) = t_out.last() else {
        return Ok((out, stats));
    };
    if next == t_out.len() {
        return Ok((out, stats));
    }

    let mut t = t0;
    let mut y = y0.clone();
    let mut k: Vec<CVector<T>> = (0..7).map(|_| CVector::zeros(n)).collect();
    f(t, &y, &mut k[0]);
    stats.evaluations += 1;

    let span = t_end - t0;
    let mut h = match opts.h_init {
        Some(h) => h,
        None => initial_step(&mut f, t, &y, &k[0], span, opts, &mut stats),
    };
    h = h.min(span);

    let a: Vec<Vec<T>> = A.iter().map(|r| r.iter().map(|&v| lit(v)).collect()).collect();
    let c: Vec<T> = C.iter().map(|&v| lit(v)).collect();
    let e: Vec<T> = E.iter().map(|&v| lit(v)).collect();
    let d: Vec<T> = D.iter().map(|&v| lit(v)).collect();

    let safety: T = lit(0.9);
    let fac_min: T = lit(0.2);
    let fac_max: T = lit(10.0);
    let min_factor: T = T::default_epsilon() * lit(16.0);
    let mut y_stage = CVector::zeros(n);
    let mut y_new = CVector::zeros(n);
    let mut err_vec = CVector::zeros(n);
    let mut last_rejected = false;

    while next < t_out.len() {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(Error::NoConvergence("Dormand-Prince step budget"));
        }
        if h <= min_factor * t.abs().max(span) {
            return Err(Error::StepSizeUnderflow {
                t: to_f64(t),
                h: to_f64(h),
            });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }

        for s in 1..7 {
            y_stage.copy_from(&y);
            for (j, kj) in k.iter().enumerate().take(s) {
                let coef = a[s][j];
                if coef != T::zero() {
                    y_stage.axpy(Complex::new(h * coef, T::zero()), kj, Complex::new(T::one(), T::zero()));
                }
            }
            if s == 6 {
                y_new.copy_from(&y_stage);
            }
            f(t + c[s] * h, &y_stage, &mut k[s]);
            stats.evaluations += 1;
        }

        err_vec.fill(Complex::new(T::zero(), T::zero()));
        for (j, kj) in k.iter().enumerate() {
            if e[j] != T::zero() {
                err_vec.axpy(Complex::new(h * e[j], T::zero()), kj, Complex::new(T::one(), T::zero()));
            }
        }
        let mut acc = T::zero();
        for i in 0..n {
            let sc = opts.atol + opts.rtol * y[i].norm_sqr().sqrt().max(y_new[i].norm_sqr().sqrt());
            let r = err_vec[i].norm_sqr().sqrt() / sc;
            acc += r * r;
        }
        let err = (acc / lit(n.max(1) as f64)).sqrt();

        if err <= T::one() {
            stats.accepted += 1;
            let t_new = if last { t_end } else { t + h };
            // dense output coefficients
            let ydiff = &y_new - &y;
            let hc = Complex::new(h, T::zero());
            let c2 = &k[0] * hc - &ydiff;
            let c3 = &ydiff - &k[6] * hc - &c2;
            let mut c4 = CVector::zeros(n);
            for (j, kj) in k.iter().enumerate() {
                if d[j] != T::zero() {
                    c4.axpy(Complex::new(h * d[j], T::zero()), kj, Complex::new(T::one(), T::zero()));
                }
            }
            while next < t_out.len() && t_out[next] <= t_new {
                let s = (t_out[next] - t) / h;
                let s1 = T::one() - s;
                let cs = Complex::new(s, T::zero());
                let cs1 = Complex::new(s1, T::zero());
                let inner = (&c3 + &c4 * cs1) * cs;
                let inner = (&c2 + inner) * cs1;
                let val = &y + (&ydiff + inner) * cs;
                out.push(if t_out[next] == t_new { y_new.clone() } else { val });
                next += 1;
            }
            y.copy_from(&y_new);
            t = t_new;
            k.swap(0, 6);

            let mut fac = if err == T::zero() {
                fac_max
            } else {
                safety * err.powf(lit(-0.2))
            };
            fac = fac.min(fac_max).max(fac_min);
            if last_rejected {
                fac = fac.min(T::one());
            }
            h *= fac;
            last_rejected = false;
        } else {
            stats.rejected += 1;
            let fac = (safety * err.powf(lit(-0.2))).max(fac_min);
            h *= fac;
            last_rejected = true;
        }
    }
    Ok((out, stats))
}

fn initial_step<T, F>(
    f: &mut F,
    t: T,
    y: &CVector<T>,
    f0: &CVector<T>,
    span: T,
    opts: &OdeOptions<T>,
    stats: &mut OdeStats,
) -> T
where
    T: Real,
    F: FnMut(T, &CVector<T>, &mut CVector<T>),
{
    let n = y.len();
    let scaled_norm = |v: &CVector<T>| {
        let mut acc = T::zero();
        for i in 0..n {
            let sc = opts.atol + opts.rtol * y[i].norm_sqr().sqrt();
            let r = v[i].norm_sqr().sqrt() / sc;
            acc += r * r;
        }
        (acc / lit(n.max(1) as f64)).sqrt()
    };
    let d0 = scaled_norm(y);
    let d1 = scaled_norm(f0);
    let small: T = lit(1e-5);
    let mut h0 = if d0 < small || d1 < small {
        lit(1e-6)
    } else {
        lit::<T>(0.01) * d0 / d1
    };
    h0 = h0.min(span);
    let y1 = y + f0 * Complex::new(h0, T::zero());
    let mut f1 = CVector::zeros(n);
    f(t + h0, &y1, &mut f1);
    stats.evaluations += 1;
    let d2 = scaled_norm(&(&f1 - f0)) / h0;
    let h1 = if d1.max(d2) <= lit(1e-15) {
        (h0 * lit(1e-3)).max(lit(1e-6))
    } else {
        (lit::<T>(0.01) / d1.max(d2)).powf(lit(0.2))
    };
    (h0 * lit(100.0)).min(h1).min(span)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    #[test]
    fn exponential_decay_with_dense_output() {
        let y0 = CVector::from_vec(vec![cplx(1.0, 0.0)]);
        let times: Vec<f64> = (0..=20).map(|i| i as f64 * 0.25).collect();
        let (ys, stats) = integrate(
            |_, y: &CVector<f64>, dy: &mut CVector<f64>| dy[0] = -y[0],
            0.0,
            &y0,
            &times,
            &OdeOptions::default(),
        )
        .unwrap();
        for (t, y) in times.iter().zip(&ys) {
            assert!((y[0].re - (-t).exp()).abs() < 1e-8, "t={t}");
        }
        assert!(stats.accepted > 5);
    }

    #[test]
    fn complex_rotation_keeps_modulus() {
        let y0 = CVector::from_vec(vec![cplx(1.0, 0.0)]);
        let w = 7.3;
        let times: Vec<f64> = (0..=50).map(|i| i as f64 * 0.1).collect();
        let (ys, _) = integrate(
            |_, y: &CVector<f64>, dy: &mut CVector<f64>| dy[0] = cplx(0.0, -w) * y[0],
            0.0,
            &y0,
            &times,
            &OdeOptions::default(),
        )
        .unwrap();
        for (t, y) in times.iter().zip(&ys) {
            let exact = cplx(0.0, -w * t).exp();
            assert!((y[0] - exact).norm() < 1e-7);
        }
    }

    #[test]
    fn time_dependent_rhs() {
        // dy/dt = cos t  ->  y = sin t
        let y0 = CVector::from_vec(vec![cplx(0.0, 0.0)]);
        let times = [1.0, 2.0, 3.0];
        let (ys, _) = integrate(
            |t: f64, _: &CVector<f64>, dy: &mut CVector<f64>| dy[0] = cplx(t.cos(), 0.0),
            0.0,
            &y0,
            &times,
            &OdeOptions { rtol: 1e-10, atol: 1e-12, ..OdeOptions::default() },
        )
        .unwrap();
        for (t, y) in times.iter().zip(&ys) {
            assert!((y[0].re - t.sin()).abs() < 1e-8);
        }
    }

    #[test]
    fn unsorted_times_rejected() {
        let y0 = CVector::from_vec(vec![cplx(1.0, 0.0)]);
        let r = integrate(
            |_, _: &CVector<f64>, dy: &mut CVector<f64>| dy[0] = cplx(0.0, 0.0),
            0.0,
            &y0,
            &[2.0, 1.0],
            &OdeOptions::default(),
        );
        assert!(r.is_err());
    }

    #[test]
    fn step_budget_exhaustion_reports_error() {
        let y0 = CVector::from_vec(vec![cplx(1.0, 0.0)]);
        let opts = OdeOptions {
            max_steps: 3,
            ..OdeOptions::default()
        };
        let r = integrate(
            |_, y: &CVector<f64>, dy: &mut CVector<f64>| dy[0] = cplx(0.0, -1000.0) * y[0],
            0.0,
            &y0,
            &[100.0],
            &opts,
        );
        assert!(r.is_err());
    }

    #[test]
    fn order_five_convergence() {
        // tightening the tolerance 100x shrinks the error substantially
        let run = |rtol: f64| {
            let opts = OdeOptions {
                rtol,
                atol: rtol * 1e-2,
                ..OdeOptions::default()
            };
            let y0 = CVector::from_vec(vec![cplx(1.0, 0.0)]);
            let (ys, _) = integrate(
                |t: f64, y: &CVector<f64>, dy: &mut CVector<f64>| dy[0] = y[0] * cplx(-t, 0.0),
                0.0,
                &y0,
                &[2.0],
                &opts,
            )
            .unwrap();
            (ys[0][0].re - (-2.0f64).exp()).abs()
        };
        let coarse = run(1e-5);
        let fine = run(1e-7);
        assert!(fine < coarse);
        assert!(fine < 1e-7);
    }

    #[test]
    fn single_precision_integration() {
        let y0 = CVector::from_vec(vec![Complex::new(1.0f32, 0.0)]);
        let opts = OdeOptions {
            rtol: 1e-5f32,
            atol: 1e-7,
            ..OdeOptions::default()
        };
        let (ys, _) = integrate(
            |_, y: &CVector<f32>, dy: &mut CVector<f32>| dy[0] = -y[0],
            0.0f32,
            &y0,
            &[1.0],
            &opts,
        )
        .unwrap();
        assert!((ys[0][0].re - (-1.0f32).exp()).abs() < 1e-4);
    }
}
