//! Real and complexified spacetime points (c = 1 units).
//!
//! An emitter lives in the future tube `z_e = x_e + i y_e` and a receiver in
//! the past tube `z_r = x_r - i y_r`. Imaginary parts are [`ConeVector`]s,
//! which are either strictly inside the open future cone or exactly zero
//! (an idealized point endpoint).

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// A plain spacetime 4-vector `(space, time)` with no constraints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourVector {
    pub space: Vec3,
    pub time: f64,
}

impl FourVector {
    pub fn new(space: Vec3, time: f64) -> Self {
        Self { space, time }
    }

    pub fn zero() -> Self {
        Self::new(Vec3::zeros(), 0.0)
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        Self::new(Vec3::new(v[0], v[1], v[2]), v[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.space.x, self.space.y, self.space.z, self.time]
    }

    pub fn is_finite(&self) -> bool {
        self.space.iter().all(|c| c.is_finite()) && self.time.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.time == 0.0 && self.space.iter().all(|&c| c == 0.0)
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, rhs: FourVector) -> FourVector {
        FourVector::new(self.space + rhs.space, self.time + rhs.time)
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, rhs: FourVector) -> FourVector {
        FourVector::new(self.space - rhs.space, self.time - rhs.time)
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector::new(-self.space, -self.time)
    }
}

impl Mul<f64> for FourVector {
    type Output = FourVector;
    fn mul(self, k: f64) -> FourVector {
        FourVector::new(self.space * k, self.time * k)
    }
}

/// A point `x = (x⃗, t)` of real spacetime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealEvent {
    pub space: Vec3,
    pub time: f64,
}

impl RealEvent {
    pub fn new(space: Vec3, time: f64) -> Result<Self> {
        let ev = Self { space, time };
        if !ev.as_four().is_finite() {
            return Err(Error::NonFinite("real event"));
        }
        Ok(ev)
    }

    pub fn origin() -> Self {
        Self { space: Vec3::zeros(), time: 0.0 }
    }

    pub fn as_four(&self) -> FourVector {
        FourVector::new(self.space, self.time)
    }

    /// Spatial distance from the origin, `r = |x⃗|`.
    pub fn radius(&self) -> f64 {
        self.space.norm()
    }

    pub fn translated(&self, by: &FourVector) -> Result<Self> {
        Self::new(self.space + by.space, self.time + by.time)
    }
}

impl From<RealEvent> for FourVector {
    fn from(ev: RealEvent) -> FourVector {
        ev.as_four()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeStatus {
    /// `s > |y⃗|` strictly.
    Interior,
    /// The zero vector.
    NullEndpoint,
    Invalid,
}

/// Classifies a 4-vector against the open future cone.
///
/// The comparison is exact: vectors on the cone boundary are `Invalid`.
pub fn cone_status(v: &FourVector) -> Result<ConeStatus> {
    if !v.is_finite() {
        return Err(Error::NonFinite("cone vector"));
    }
    if v.is_zero() {
        return Ok(ConeStatus::NullEndpoint);
    }
    if v.time > v.space.norm() {
        Ok(ConeStatus::Interior)
    } else {
        Ok(ConeStatus::Invalid)
    }
}

/// An imaginary extension `y = (y⃗, s)`: interior of the future cone, or zero.
///
/// `y⃗` carries the antenna orientation and radius `a = |y⃗|`; `s` is the
/// internal propagation time between centre and rim.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeVector {
    v: FourVector,
}

impl ConeVector {
    pub fn new(v: FourVector) -> Result<Self> {
        match cone_status(&v)? {
            ConeStatus::Invalid => Err(Error::InvalidCone("extent")),
            _ => Ok(Self { v }),
        }
    }

    pub fn from_parts(space: Vec3, time: f64) -> Result<Self> {
        Self::new(FourVector::new(space, time))
    }

    pub fn zero() -> Self {
        Self { v: FourVector::zero() }
    }

    pub fn space(&self) -> Vec3 {
        self.v.space
    }

    pub fn time(&self) -> f64 {
        self.v.time
    }

    /// `a = |y⃗|`.
    pub fn aperture(&self) -> f64 {
        self.v.space.norm()
    }

    /// On-axis pulse duration `s - a`; zero for a null endpoint.
    pub fn duration(&self) -> f64 {
        self.v.time - self.aperture()
    }

    pub fn status(&self) -> ConeStatus {
        if self.v.is_zero() {
            ConeStatus::NullEndpoint
        } else {
            ConeStatus::Interior
        }
    }

    pub fn is_null(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_interior(&self) -> bool {
        !self.is_null()
    }

    pub fn as_four(&self) -> FourVector {
        self.v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tube {
    /// `x + i y`, parameterizes emitters.
    Future,
    /// `x - i y`, parameterizes receivers and the difference `z_r - z_e`.
    Past,
}

impl Tube {
    fn sign(self) -> f64 {
        match self {
            Tube::Future => 1.0,
            Tube::Past => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEvent {
    pub real: RealEvent,
    pub imag: ConeVector,
    pub tube: Tube,
}

impl ComplexEvent {
    /// An emitter `z_e = x_e + i y_e`.
    pub fn emitter(center: RealEvent, extent: ConeVector) -> Self {
        Self { real: center, imag: extent, tube: Tube::Future }
    }

    /// A receiver `z_r = x_r - i y_r`.
    pub fn receiver(center: RealEvent, extent: ConeVector) -> Self {
        Self { real: center, imag: extent, tube: Tube::Past }
    }

    /// The four complex coordinates `(z1, z2, z3, τ)`.
    pub fn coordinates(&self) -> [Complex64; 4] {
        let re = self.real.as_four().to_array();
        let im = self.imag.as_four().to_array();
        let k = self.tube.sign();
        std::array::from_fn(|i| Complex64::new(re[i], k * im[i]))
    }
}

/// `z = z_r - z_e = (x_r - x_e) - i (y_r + y_e)`, always in the past tube.
pub fn tube_difference(receiver: &ComplexEvent, emitter: &ComplexEvent) -> Result<ComplexEvent> {
    if receiver.tube != Tube::Past {
        return Err(Error::WrongTube("receiver must be in the past tube"));
    }
    if emitter.tube != Tube::Future {
        return Err(Error::WrongTube("emitter must be in the future tube"));
    }
    let sum = receiver.imag.as_four() + emitter.imag.as_four();
    if cone_status(&sum)? != ConeStatus::Interior {
        return Err(Error::CausalityViolation(sum.to_array()));
    }
    let real = RealEvent::new(
        receiver.real.space - emitter.real.space,
        receiver.real.time - emitter.real.time,
    )?;
    Ok(ComplexEvent { real, imag: ConeVector { v: sum }, tube: Tube::Past })
}
