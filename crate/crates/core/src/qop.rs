//! Dense complex operator algebra on the truncated space
//! `C^2 (qubit) ⊗ C^N (cavity Fock levels 0..N-1)`.
//!
//! Basis conventions: qubit index 0 is `|g>` and 1 is `|e>`, with
//! `sigma_z = diag(-1, +1)` so that `(w_q/2) sigma_z` puts `|e>` on top.
//! Composite states are ordered qubit-first, `|q> ⊗ |n>` at index `q*N + n`.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, real, to_f64, tolerance, Real};

pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type CVector<T> = DVector<Complex<T>>;

/// Square complex operator. Operators built as Hamiltonians or observables
/// carry a Hermitian flag that was verified at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator<T: Real> {
    data: CMatrix<T>,
    hermitian: bool,
}

impl<T: Real> Operator<T> {
    pub fn from_matrix(data: CMatrix<T>) -> Result<Self> {
        if !data.is_square() {
            return Err(Error::NotSquare {
                rows: data.nrows(),
                cols: data.ncols(),
            });
        }
        Ok(Self {
            data,
            hermitian: false,
        })
    }

    /// Wraps a matrix and flags it Hermitian after checking
    /// `max|A - A^dag| <= 1e-12 max|A|`.
    pub fn hermitian(data: CMatrix<T>) -> Result<Self> {
        Self::from_matrix(data)?.into_hermitian()
    }

    pub fn into_hermitian(mut self) -> Result<Self> {
        let deviation = self.hermiticity_error();
        let scale = self.max_abs();
        if deviation > tolerance::<T>(1e-12) * scale {
            return Err(Error::NotHermitian {
                deviation: to_f64(deviation),
            });
        }
        self.hermitian = true;
        Ok(self)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            data: CMatrix::identity(dim, dim),
            hermitian: true,
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: CMatrix::zeros(dim, dim),
            hermitian: true,
        }
    }

    /// Real diagonal operator.
    pub fn diagonal(values: &[T]) -> Self {
        let n = values.len();
        let mut data = CMatrix::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            data[(i, i)] = real(*v);
        }
        Self {
            data,
            hermitian: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.data
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn dag(&self) -> Self {
        Self {
            data: self.data.adjoint(),
            hermitian: self.hermitian,
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            data: self.data.kronecker(&other.data),
            hermitian: self.hermitian && other.hermitian,
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            data: &self.data * s,
            hermitian: self.hermitian && s.im == T::zero(),
        }
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(real(s))
    }

    pub fn trace(&self) -> Complex<T> {
        self.data.trace()
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |m, z| m.max(z.norm_sqr().sqrt()))
    }

    /// `max |A - A^dag|` over all entries.
    pub fn hermiticity_error(&self) -> T {
        let n = self.dim();
        let mut worst = T::zero();
        for i in 0..n {
            for j in i..n {
                let d = self.data[(i, j)] - self.data[(j, i)].conj();
                worst = worst.max(d.norm_sqr().sqrt());
            }
        }
        worst
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self {
            data: &self.data * &other.data - &other.data * &self.data,
            hermitian: false,
        }
    }

    /// Destruction operator on `n_fock` levels: `a[n-1, n] = sqrt(n)`.
    pub fn destroy(n_fock: usize) -> Result<Self> {
        if n_fock < 2 {
            return Err(Error::InvalidCutoff(n_fock));
        }
        let mut data = CMatrix::zeros(n_fock, n_fock);
        for n in 1..n_fock {
            data[(n - 1, n)] = real(lit::<T>(n as f64).sqrt());
        }
        Ok(Self {
            data,
            hermitian: false,
        })
    }

    pub fn create(n_fock: usize) -> Result<Self> {
        Ok(Self::destroy(n_fock)?.dag())
    }

    pub fn number(n_fock: usize) -> Result<Self> {
        if n_fock < 2 {
            return Err(Error::InvalidCutoff(n_fock));
        }
        let values: Vec<T> = (0..n_fock).map(|n| lit(n as f64)).collect();
        Ok(Self::diagonal(&values))
    }

    /// `sigma^- = |g><e|`.
    pub fn sigma_minus() -> Self {
        let mut data = CMatrix::zeros(2, 2);
        data[(0, 1)] = Complex::new(T::one(), T::zero());
        Self {
            data,
            hermitian: false,
        }
    }

    /// `sigma^+ = |e><g|`.
    pub fn sigma_plus() -> Self {
        Self::sigma_minus().dag()
    }

    pub fn sigma_x() -> Self {
        let data = Self::sigma_plus().data + Self::sigma_minus().data;
        Self {
            data,
            hermitian: true,
        }
    }

    /// `sigma_y = -i sigma^+ + i sigma^-`.
    pub fn sigma_y() -> Self {
        let i = Complex::new(T::zero(), T::one());
        let data = Self::sigma_plus().data * (-i) + Self::sigma_minus().data * i;
        Self {
            data,
            hermitian: true,
        }
    }

    pub fn sigma_z() -> Self {
        Self::diagonal(&[-T::one(), T::one()])
    }
}

impl<T: Real> Add for &Operator<T> {
    type Output = Operator<T>;
    fn add(self, rhs: Self) -> Operator<T> {
        Operator {
            data: &self.data + &rhs.data,
            hermitian: self.hermitian && rhs.hermitian,
        }
    }
}

impl<T: Real> Sub for &Operator<T> {
    type Output = Operator<T>;
    fn sub(self, rhs: Self) -> Operator<T> {
        Operator {
            data: &self.data - &rhs.data,
            hermitian: self.hermitian && rhs.hermitian,
        }
    }
}

impl<T: Real> Mul for &Operator<T> {
    type Output = Operator<T>;
    fn mul(self, rhs: Self) -> Operator<T> {
        Operator {
            data: &self.data * &rhs.data,
            hermitian: false,
        }
    }
}

impl<T: Real> Neg for &Operator<T> {
    type Output = Operator<T>;
    fn neg(self) -> Operator<T> {
        Operator {
            data: -self.data.clone(),
            hermitian: self.hermitian,
        }
    }
}

/// Kronecker product of two operators.
pub fn tensor<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Operator<T> {
    a.tensor(b)
}

pub fn destroy<T: Real>(n_fock: usize) -> Result<Operator<T>> {
    Operator::destroy(n_fock)
}

/// Qubit label in the computational basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Qubit {
    G,
    E,
}

impl Qubit {
    pub fn index(self) -> usize {
        match self {
            Qubit::G => 0,
            Qubit::E => 1,
        }
    }
}

/// Truncated qubit ⊗ cavity space with a fixed Fock cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QubitCavity {
    n_fock: usize,
}

impl QubitCavity {
    pub fn new(n_fock: usize) -> Result<Self> {
        if n_fock < 2 {
            return Err(Error::InvalidCutoff(n_fock));
        }
        Ok(Self { n_fock })
    }

    pub fn n_fock(&self) -> usize {
        self.n_fock
    }

    pub fn dim(&self) -> usize {
        2 * self.n_fock
    }

    pub fn index(&self, q: Qubit, n: usize) -> usize {
        q.index() * self.n_fock + n
    }

    pub fn identity<T: Real>(&self) -> Operator<T> {
        Operator::identity(self.dim())
    }

    /// Embeds a 2x2 qubit operator as `op ⊗ I_N`.
    pub fn qubit<T: Real>(&self, op: &Operator<T>) -> Operator<T> {
        op.tensor(&Operator::identity(self.n_fock))
    }

    /// Embeds an N x N cavity operator as `I_2 ⊗ op`.
    pub fn cavity<T: Real>(&self, op: &Operator<T>) -> Operator<T> {
        Operator::identity(2).tensor(op)
    }

    pub fn a<T: Real>(&self) -> Operator<T> {
        self.cavity(&Operator::destroy(self.n_fock).expect("cutoff validated"))
    }

    pub fn a_dag<T: Real>(&self) -> Operator<T> {
        self.a::<T>().dag()
    }

    pub fn num<T: Real>(&self) -> Operator<T> {
        self.cavity(&Operator::number(self.n_fock).expect("cutoff validated"))
    }

    pub fn sm<T: Real>(&self) -> Operator<T> {
        self.qubit(&Operator::sigma_minus())
    }

    pub fn sp<T: Real>(&self) -> Operator<T> {
        self.qubit(&Operator::sigma_plus())
    }

    pub fn sx<T: Real>(&self) -> Operator<T> {
        self.qubit(&Operator::sigma_x())
    }

    pub fn sy<T: Real>(&self) -> Operator<T> {
        self.qubit(&Operator::sigma_y())
    }

    pub fn sz<T: Real>(&self) -> Operator<T> {
        self.qubit(&Operator::sigma_z())
    }

    pub fn basis<T: Real>(&self, q: Qubit, n: usize) -> KetState<T> {
        KetState::basis(self.dim(), self.index(q, n))
    }

    /// Product state `|psi_q> ⊗ |n>`.
    pub fn product<T: Real>(&self, qubit: [Complex<T>; 2], n: usize) -> Result<KetState<T>> {
        let mut amps = CVector::zeros(self.dim());
        amps[self.index(Qubit::G, n)] = qubit[0];
        amps[self.index(Qubit::E, n)] = qubit[1];
        KetState::new(amps)
    }
}

/// Normalized pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct KetState<T: Real> {
    amplitudes: CVector<T>,
}

impl<T: Real> KetState<T> {
    /// Normalizes `amplitudes`; fails on a zero vector.
    pub fn new(amplitudes: CVector<T>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt();
        if norm <= T::default_epsilon() {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
        })
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = CVector::zeros(dim);
        amplitudes[index] = Complex::new(T::one(), T::zero());
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector<T> {
        &self.amplitudes
    }

    pub fn projector(&self) -> Operator<T> {
        Operator {
            data: &self.amplitudes * self.amplitudes.adjoint(),
            hermitian: true,
        }
    }

    /// `<self|op|other>`.
    pub fn matrix_element(&self, op: &Operator<T>, other: &Self) -> Complex<T> {
        self.amplitudes.dotc(&(op.matrix() * &other.amplitudes))
    }
}

/// Density matrix with the simulation time it refers to.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T: Real> {
    op: Operator<T>,
    time: T,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates trace (1e-9), Hermiticity (1e-10) and positivity (-1e-8).
    pub fn new(op: Operator<T>, time: T) -> Result<Self> {
        let rho = Self::new_unchecked(op, time);
        rho.validate()?;
        Ok(rho)
    }

    pub fn new_unchecked(op: Operator<T>, time: T) -> Self {
        let mut op = op;
        op.hermitian = true;
        Self { op, time }
    }

    pub fn from_ket(ket: &KetState<T>) -> Self {
        Self {
            op: ket.projector(),
            time: T::zero(),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let w: T = T::one() / lit(dim as f64);
        Self {
            op: Operator::diagonal(&vec![w; dim]),
            time: T::zero(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let tr = self.op.trace();
        if (tr - real(T::one())).norm_sqr().sqrt() > tolerance::<T>(1e-9) {
            return Err(Error::InvalidState(format!(
                "trace {} differs from 1",
                to_f64(tr.re)
            )));
        }
        let herm = self.op.hermiticity_error();
        if herm > tolerance::<T>(1e-10) {
            return Err(Error::InvalidState(format!(
                "density matrix not Hermitian (deviation {:e})",
                to_f64(herm)
            )));
        }
        let min_eig = self.min_eigenvalue()?;
        if min_eig < -tolerance::<T>(1e-8) {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:e}",
                to_f64(min_eig)
            )));
        }
        Ok(())
    }

    pub fn op(&self) -> &Operator<T> {
        &self.op
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        self.op.matrix()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn time(&self) -> T {
        self.time
    }

    pub fn with_time(mut self, time: T) -> Self {
        self.time = time;
        self
    }

    pub fn trace(&self) -> Complex<T> {
        self.op.trace()
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> Result<T> {
        let half: T = lit(0.5);
        let h = (self.op.matrix() + self.op.matrix().adjoint()) * real(half);
        let (values, _) = eig_hermitian(&Operator {
            data: h,
            hermitian: true,
        })?;
        Ok(values[0])
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> T {
        (self.op.matrix() * self.op.matrix()).trace().re
    }
}

/// `tr(obs rho)`.
pub fn expect<T: Real>(obs: &Operator<T>, rho: &DensityMatrix<T>) -> Result<Complex<T>> {
    if obs.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: obs.dim(),
        });
    }
    let a = obs.matrix();
    let r = rho.matrix();
    let n = obs.dim();
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * r[(j, i)];
        }
    }
    Ok(acc)
}

/// Eigen-decomposition of a Hermitian operator: eigenvalues ascending and
/// the matching unitary whose columns are the eigenvectors.
pub fn eig_hermitian<T: Real>(h: &Operator<T>) -> Result<(Vec<T>, CMatrix<T>)> {
    let deviation = h.hermiticity_error();
    if deviation > tolerance::<T>(1e-12) * h.max_abs().max(T::one()) {
        return Err(Error::NotHermitian {
            deviation: to_f64(deviation),
        });
    }
    let eig = SymmetricEigen::try_new(h.matrix().clone(), T::default_epsilon(), 0)
        .ok_or(Error::NoConvergence("Hermitian eigensolver"))?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let n = h.dim();
    let mut vectors = CMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (k, &src) in order.iter().enumerate() {
        values.push(eig.eigenvalues[src]);
        vectors.set_column(k, &eig.eigenvectors.column(src));
    }
    Ok((values, vectors))
}
