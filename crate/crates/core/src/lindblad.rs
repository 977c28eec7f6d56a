//! Lindblad master equation on the vectorized density matrix.
//!
//! `vec` stacks columns, so `vec(A rho B) = (B^T ⊗ A) vec(rho)`. nalgebra
//! stores matrices column-major, which makes `vec` a plain reinterpretation.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::ode::{integrate, OdeOptions, OdeStats};
use crate::qop::{CMatrix, CVector, DensityMatrix, Operator, Qubit, QubitCavity};
use crate::scalar::{lit, real, to_f64, tolerance, Real};

/// Dense superoperator acting on column-stacked density matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct Liouvillian<T: Real> {
    hilbert_dim: usize,
    matrix: CMatrix<T>,
}

/// Collapse channel `rate * D[op]`.
pub type Collapse<T> = (T, Operator<T>);

pub fn build_liouvillian<T: Real>(h: &Operator<T>, collapse: &[Collapse<T>]) -> Result<Liouvillian<T>> {
    let n = h.dim();
    for (rate, op) in collapse {
        if op.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: op.dim(),
            });
        }
        if !(*rate >= T::zero() && rate.is_finite()) {
            return Err(crate::error::invalid("rate", "collapse rates must be finite and non-negative"));
        }
    }
    let id = CMatrix::<T>::identity(n, n);
    let minus_i = Complex::new(T::zero(), -T::one());
    let mut l = (id.kronecker(h.matrix()) - h.matrix().transpose().kronecker(&id)) * minus_i;
    let half: T = lit(0.5);
    for (rate, c) in collapse {
        if *rate == T::zero() {
            continue;
        }
        let cm = c.matrix();
        let cdc = cm.adjoint() * cm;
        let term = cm.conjugate().kronecker(cm)
            - (id.kronecker(&cdc) + cdc.transpose().kronecker(&id)) * real(half);
        l += term * real(*rate);
    }
    Ok(Liouvillian {
        hilbert_dim: n,
        matrix: l,
    })
}

impl<T: Real> Liouvillian<T> {
    /// Wraps an arbitrary superoperator (for time-dependent pieces).
    pub fn from_matrix(hilbert_dim: usize, matrix: CMatrix<T>) -> Result<Self> {
        let d = hilbert_dim * hilbert_dim;
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: matrix.nrows(),
            });
        }
        Ok(Self { hilbert_dim, matrix })
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    /// `(2N)^2`
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn norm(&self) -> T {
        self.matrix.iter().fold(T::zero(), |m, z| m.max(z.norm_sqr().sqrt()))
    }

    /// `L(rho)` as a matrix.
    pub fn apply(&self, rho: &CMatrix<T>) -> Result<CMatrix<T>> {
        let n = self.hilbert_dim;
        if rho.nrows() != n || rho.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rho.nrows(),
            });
        }
        let v = CVector::from_column_slice(rho.as_slice());
        let out = &self.matrix * v;
        Ok(CMatrix::from_column_slice(n, n, out.as_slice()))
    }

    /// `max_j |sum_i L[(i,i), j]|` relative to `max(1, ||L||)`: zero when
    /// `tr(L(rho)) = 0` for every `rho`.
    pub fn trace_residual(&self) -> T {
        let n = self.hilbert_dim;
        let mut worst = T::zero();
        for j in 0..self.dim() {
            let mut acc = Complex::new(T::zero(), T::zero());
            for i in 0..n {
                acc += self.matrix[(i + i * n, j)];
            }
            worst = worst.max(acc.norm_sqr().sqrt());
        }
        worst / self.norm().max(T::one())
    }

    /// Eigenvalues of the superoperator via the complex Schur form.
    pub fn eigenvalues(&self) -> Result<Vec<Complex<T>>> {
        let schur = Schur::try_new(self.matrix.clone(), T::default_epsilon(), 0)
            .ok_or(Error::NoConvergence("Schur decomposition"))?;
        let t = schur.unpack().1;
        Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
    }

    /// The two smallest `|Re lambda|` of the spectrum.
    pub fn slowest_rates(&self) -> Result<(T, T)> {
        let mut re: Vec<T> = self.eigenvalues()?.iter().map(|z| z.re.abs()).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        match re.as_slice() {
            [a, b, ..] => Ok((*a, *b)),
            [a] => Ok((*a, T::max_value().unwrap_or(*a))),
            [] => Err(Error::InvalidState("empty Liouvillian".into())),
        }
    }

    /// Slowest nonzero relaxation rate (second smallest `|Re lambda|`).
    pub fn spectral_gap(&self) -> Result<T> {
        Ok(self.slowest_rates()?.1)
    }

    /// Fails with `DegenerateSteadyState` unless the second smallest
    /// `|Re lambda|` exceeds the smallest by a factor 1e3.
    pub fn check_unique_steady_state(&self) -> Result<()> {
        let (a, b) = self.slowest_rates()?;
        let factor: T = lit(1e3);
        let floor = T::default_epsilon() * self.norm() * lit(10.0);
        if b > factor * a && b > floor {
            Ok(())
        } else {
            Err(Error::DegenerateSteadyState {
                smallest: to_f64(a),
                second: to_f64(b),
            })
        }
    }
}

/// Unique steady state of `L`. Solves the bordered least-squares system
/// `[L / ||L||; tr] x = [0; 1]` by Householder QR with one refinement step.
pub fn steady_state<T: Real>(l: &Liouvillian<T>) -> Result<DensityMatrix<T>> {
    l.check_unique_steady_state()?;
    steady_state_unchecked(l)
}

/// [`steady_state`] without the spectral uniqueness check; the residual
/// check still applies.
pub fn steady_state_unchecked<T: Real>(l: &Liouvillian<T>) -> Result<DensityMatrix<T>> {
    let n = l.hilbert_dim;
    let d = l.dim();
    let scale = l.norm();
    if scale == T::zero() {
        return Err(Error::DegenerateSteadyState {
            smallest: 0.0,
            second: 0.0,
        });
    }
    let mut m = DMatrix::<Complex<T>>::zeros(d + 1, d);
    m.view_mut((0, 0), (d, d)).copy_from(&(l.matrix() / real(scale)));
    for i in 0..n {
        m[(d, i + i * n)] = real(T::one());
    }
    let mut b = CVector::<T>::zeros(d + 1);
    b[d] = real(T::one());

    let qr = m.clone().qr();
    let q = qr.q();
    let r = qr.r();
    let solve = |rhs: &CVector<T>| -> Result<CVector<T>> {
        let qtb = q.adjoint() * rhs;
        r.solve_upper_triangular(&qtb)
            .ok_or(Error::NoConvergence("steady-state triangular solve"))
    };
    let mut x = solve(&b)?;
    let resid = &b - &m * &x;
    x += solve(&resid)?;

    let mut rho = CMatrix::from_column_slice(n, n, x.as_slice());
    rho = (&rho + rho.adjoint()) * real(lit::<T>(0.5));
    let tr = rho.trace();
    rho /= tr;

    let lr = l.apply(&rho)?;
    let residual = lr.iter().fold(T::zero(), |acc, z| acc.max(z.norm_sqr().sqrt()));
    let tol = tolerance::<T>(1e-10) * scale;
    if residual > tol {
        return Err(Error::SteadyStateResidual {
            residual: to_f64(residual),
            tolerance: to_f64(tol),
        });
    }
    let op = Operator::from_matrix(rho)?;
    let state = DensityMatrix::new_unchecked(op, T::zero());
    state.validate()?;
    Ok(state)
}

/// Time series of propagated states and the qubit/cavity observables.
#[derive(Clone, Debug)]
pub struct EvolutionResult<T: Real> {
    pub times: Vec<T>,
    pub states: Vec<DensityMatrix<T>>,
    /// `(<s_x>, <s_y>, <s_z>)` per sample.
    pub bloch: Vec<[T; 3]>,
    pub n_photon: Vec<T>,
    /// Diagonal of rho in the composite basis, index `q*N + n`.
    pub populations: Vec<Vec<T>>,
    /// Largest `|tr(rho) - 1|` over the run.
    pub trace_drift: T,
    pub stats: OdeStats,
}

impl<T: Real> EvolutionResult<T> {
    pub fn from_states(space: &QubitCavity, times: Vec<T>, states: Vec<DensityMatrix<T>>, stats: OdeStats) -> Result<Self> {
        let num = space.num::<T>();
        let mut bloch = Vec::with_capacity(states.len());
        let mut n_photon = Vec::with_capacity(states.len());
        let mut populations = Vec::with_capacity(states.len());
        let mut drift = T::zero();
        for rho in &states {
            let b = bloch_vector(space, rho)?;
            bloch.push([b.0, b.1, b.2]);
            n_photon.push(crate::qop::expect(&num, rho)?.re);
            populations.push((0..rho.dim()).map(|i| rho.matrix()[(i, i)].re).collect());
            drift = drift.max((rho.trace() - real(T::one())).norm_sqr().sqrt());
        }
        Ok(Self {
            times,
            states,
            bloch,
            n_photon,
            populations,
            trace_drift: drift,
            stats,
        })
    }

    /// Population of a bare composite basis state per sample.
    pub fn population(&self, space: &QubitCavity, q: Qubit, n: usize) -> Vec<T> {
        let idx = space.index(q, n);
        self.populations.iter().map(|p| p[idx]).collect()
    }
}

fn infer_space<T: Real>(l: &Liouvillian<T>) -> Result<QubitCavity> {
    let n = l.hilbert_dim;
    if n % 2 != 0 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            found: n,
        });
    }
    QubitCavity::new(n / 2)
}

/// Integrates `d rho/dt = L rho` and samples at `times`.
pub fn propagate<T: Real>(l: &Liouvillian<T>, rho0: &DensityMatrix<T>, times: &[T]) -> Result<EvolutionResult<T>> {
    propagate_with(l, rho0, times, &OdeOptions::default())
}

pub fn propagate_with<T: Real>(
    l: &Liouvillian<T>,
    rho0: &DensityMatrix<T>,
    times: &[T],
    opts: &OdeOptions<T>,
) -> Result<EvolutionResult<T>> {
    let space = infer_space(l)?;
    let (states, stats) = propagate_states(l, rho0, times, opts)?;
    EvolutionResult::from_states(&space, times.to_vec(), states, stats)
}

/// Raw propagation without observable extraction; works for any Hilbert
/// dimension.
pub fn propagate_states<T: Real>(
    l: &Liouvillian<T>,
    rho0: &DensityMatrix<T>,
    times: &[T],
    opts: &OdeOptions<T>,
) -> Result<(Vec<DensityMatrix<T>>, OdeStats)> {
    if rho0.dim() != l.hilbert_dim {
        return Err(Error::DimensionMismatch {
            expected: l.hilbert_dim,
            found: rho0.dim(),
        });
    }
    let m = l.matrix();
    let rhs = |_t: T, y: &CVector<T>, dy: &mut CVector<T>| {
        dy.gemv(real(T::one()), m, y, real(T::zero()));
    };
    run(rhs, rho0, times, opts, l.hilbert_dim)
}

/// Time-dependent generator `L(t) = L0 + sum_k f_k(t) L_k`.
pub fn propagate_time_dependent<T, F>(
    l0: &Liouvillian<T>,
    terms: &[(F, Liouvillian<T>)],
    rho0: &DensityMatrix<T>,
    times: &[T],
    opts: &OdeOptions<T>,
) -> Result<(Vec<DensityMatrix<T>>, OdeStats)>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    let n = l0.hilbert_dim;
    if rho0.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rho0.dim(),
        });
    }
    for (_, lk) in terms {
        if lk.hilbert_dim != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: lk.hilbert_dim,
            });
        }
    }
    let rhs = |t: T, y: &CVector<T>, dy: &mut CVector<T>| {
        dy.gemv(real(T::one()), l0.matrix(), y, real(T::zero()));
        for (f, lk) in terms {
            dy.gemv(f(t), lk.matrix(), y, real(T::one()));
        }
    };
    run(rhs, rho0, times, opts, n)
}

fn run<T: Real, F>(
    rhs: F,
    rho0: &DensityMatrix<T>,
    times: &[T],
    opts: &OdeOptions<T>,
    n: usize,
) -> Result<(Vec<DensityMatrix<T>>, OdeStats)>
where
    F: FnMut(T, &CVector<T>, &mut CVector<T>),
{
    let y0 = CVector::from_column_slice(rho0.matrix().as_slice());
    let t0 = rho0.time().min(times.first().copied().unwrap_or(rho0.time()));
    let (ys, stats) = integrate(rhs, t0, &y0, times, opts)?;
    let states = ys
        .into_iter()
        .zip(times)
        .map(|(y, &t)| {
            let m = CMatrix::from_column_slice(n, n, y.as_slice());
            DensityMatrix::new_unchecked(Operator::from_matrix(m).expect("square"), t)
        })
        .collect();
    Ok((states, stats))
}

/// Reduced qubit density matrix (trace over the cavity).
pub fn qubit_reduced<T: Real>(space: &QubitCavity, rho: &DensityMatrix<T>) -> Result<CMatrix<T>> {
    if rho.dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: rho.dim(),
        });
    }
    let nf = space.n_fock();
    let m = rho.matrix();
    Ok(CMatrix::from_fn(2, 2, |a, b| {
        (0..nf).fold(Complex::new(T::zero(), T::zero()), |acc, n| acc + m[(a * nf + n, b * nf + n)])
    }))
}

/// `(x, y, z, |r|)` of the reduced qubit state, `z = +1` for `|e>`.
pub fn bloch_vector<T: Real>(space: &QubitCavity, rho: &DensityMatrix<T>) -> Result<(T, T, T, T)> {
    let q = qubit_reduced(space, rho)?;
    let two: T = lit(2.0);
    // rho_q = (I + x sx + y sy + z sz)/2 with s+ = |e><g| at [1, 0]
    let x = two * q[(1, 0)].re;
    let y = -two * q[(1, 0)].im;
    let z = q[(1, 1)].re - q[(0, 0)].re;
    let r = (x * x + y * y + z * z).sqrt();
    Ok((x, y, z, r))
}
