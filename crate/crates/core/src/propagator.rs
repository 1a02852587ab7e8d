//! The extended propagator `P̃(z⃗, τ) = 1 / (8iπ² r̃ (τ - r̃))` and its far-zone
//! pulsed-beam form.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{complex_distance_or_real, ComplexDistance, GeometryConfig};
use crate::spacetime::Vec3;

const I: Complex64 = Complex64::new(0.0, 1.0);

pub(crate) fn guarded_distance(x: &Vec3, y: &Vec3, cfg: &GeometryConfig) -> Result<ComplexDistance> {
    let cd = complex_distance_or_real(x, y, cfg)?;
    if cd.near_circle {
        return Err(Error::NearBranchCircle { distance: cd.modulus() });
    }
    Ok(cd)
}

pub fn extended_propagator(x: &Vec3, y: &Vec3, t: f64, s: f64) -> Result<Complex64> {
    extended_propagator_with(x, y, t, s, &GeometryConfig::default())
}

/// Evaluates `P̃` at `z = (x⃗ - i y⃗, t - is)`.
///
/// Requires `s > |y⃗|`. A purely temporal extension (`y⃗ = 0`, `s > 0`) uses
/// the real distance.
pub fn extended_propagator_with(x: &Vec3, y: &Vec3, t: f64, s: f64, cfg: &GeometryConfig) -> Result<Complex64> {
    let a = y.norm();
    if !(s > a) {
        return Err(Error::OutsideCone { s, a });
    }
    if !t.is_finite() {
        return Err(Error::NonFinite("time"));
    }
    let rt = guarded_distance(x, y, cfg)?.value();
    let tau = Complex64::new(t, -s);
    Ok(1.0 / (8.0 * I * PI * PI * rt * (tau - rt)))
}

/// `1 / (8iπ² r {(t - r) - i(s - a cosθ)})`, valid for `r ≫ a`.
pub fn far_zone_propagator(r: f64, theta: f64, t: f64, s: f64, a: f64) -> Result<Complex64> {
    if !(r > 0.0) {
        return Err(Error::Domain("far-zone propagator needs r > 0"));
    }
    if !(a >= 0.0 && s > a) {
        return Err(Error::OutsideCone { s, a });
    }
    let denom = Complex64::new(t - r, -(s - a * theta.cos()));
    Ok(1.0 / (8.0 * I * PI * PI * r * denom))
}

/// Far-field beam of an extent with radius `a` and internal time `s > a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamProfile {
    s: f64,
    a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSample {
    pub theta: f64,
    /// `T(θ) = s - a cosθ`.
    pub duration: f64,
    /// `F(θ) = 1 / (8π² T(θ))`.
    pub pattern: f64,
    /// `F(θ) / r`; far-zone approximation.
    pub peak: f64,
}

impl BeamProfile {
    pub fn new(s: f64, a: f64) -> Result<Self> {
        if !(a >= 0.0 && s > a && s.is_finite()) {
            return Err(Error::OutsideCone { s, a });
        }
        Ok(Self { s, a })
    }

    pub fn duration(&self, theta: f64) -> f64 {
        self.s - self.a * theta.cos()
    }

    pub fn pattern(&self, theta: f64) -> f64 {
        1.0 / (8.0 * PI * PI * self.duration(theta))
    }

    pub fn peak(&self, r: f64, theta: f64) -> f64 {
        1.0 / (8.0 * PI * PI * r * self.duration(theta))
    }

    /// The pattern is a conic with one focus at the source and eccentricity `a/s`.
    pub fn eccentricity(&self) -> f64 {
        self.a / self.s
    }

    pub fn sample(&self, r: f64, theta: f64) -> BeamSample {
        BeamSample {
            theta,
            duration: self.duration(theta),
            pattern: self.pattern(theta),
            peak: self.peak(r, theta),
        }
    }
}

pub fn beam_profile(s: f64, a: f64, r: f64, theta_grid: &[f64]) -> Result<Vec<BeamSample>> {
    if !(r > 0.0) {
        return Err(Error::Domain("beam profile needs r > 0"));
    }
    let beam = BeamProfile::new(s, a)?;
    Ok(theta_grid.iter().map(|&th| beam.sample(r, th)).collect())
}
