//! Scalar abstraction shared by the physics modules.
//!
//! Everything numeric in the crate is written against [`Real`], which is
//! implemented for `f32` and `f64`. Tolerances quoted for double precision
//! are widened automatically for single precision through [`tolerance`].

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

/// Floating point scalar usable by the simulator: `f32` or `f64`.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + std::fmt::LowerExp + Send + Sync
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Converts `T` back to `f64` (used for error payloads and reporting).
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub fn real<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// `e^{i phase}`.
#[inline]
pub fn cis<T: Real>(phase: T) -> Complex<T> {
    let (s, c) = phase.sin_cos();
    Complex::new(c, s)
}

/// A double-precision tolerance, floored at a small multiple of the
/// machine epsilon of `T` so the same check stays meaningful for `f32`.
#[inline]
pub fn tolerance<T: Real>(tol64: f64) -> T {
    let floor = T::default_epsilon() * lit(1.0e3);
    let tol = lit(tol64);
    if tol > floor {
        tol
    } else {
        floor
    }
}

/// Angular frequency from an ordinary frequency in Hz.
#[inline]
pub fn angular<T: Real>(hz: f64) -> T {
    T::two_pi() * lit(hz)
}

/// Ordinary frequency (Hz) from an angular frequency.
#[inline]
pub fn hertz<T: Real>(omega: T) -> f64 {
    to_f64(omega) / std::f64::consts::TAU
}
