//! Pulsed-beam wavelets `W(x - iy) = g(τ - r̃) / (4π r̃)`.
//!
//! Besides pointwise evaluation this module checks the two observable facts
//! about the extended source: `□W` vanishes away from the branch cut, and the
//! boundary values of `W` on either side of real spacetime jump by
//! `g₀(t - r) / 4πr`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extrapolate::extrapolate_to_zero;
use crate::geometry::GeometryConfig;
use crate::propagator::guarded_distance;
use crate::quadrature::QuadConfig;
use crate::signals::{DrivingSignal, JUMP_TOL};
use crate::spacetime::{ConeVector, RealEvent, Vec3};

/// Evaluates `g(τ - r̃)/(4π r̃)` for an arbitrary imaginary part `(y⃗, s)` of `z = x - iy`.
fn eval_raw(
    signal: &DrivingSignal,
    x: &RealEvent,
    y: &Vec3,
    s: f64,
    geometry: &GeometryConfig,
    quad: &QuadConfig,
) -> Result<Complex64> {
    let rt = guarded_distance(&x.space, y, geometry)?.value();
    let tau = Complex64::new(x.time, -s);
    let g = signal.analytic_signal_with(tau - rt, quad)?;
    Ok(g / (4.0 * PI * rt))
}

/// A wavelet broadcast by a fixed driving signal through a fixed extent.
#[derive(Debug, Clone)]
pub struct WaveletField {
    signal: DrivingSignal,
    extent: ConeVector,
    geometry: GeometryConfig,
    quad: QuadConfig,
}

impl WaveletField {
    pub fn new(signal: DrivingSignal, extent: ConeVector) -> Result<Self> {
        if extent.is_null() {
            return Err(Error::InvalidCone("wavelet extent must be interior"));
        }
        Ok(Self { signal, extent, geometry: GeometryConfig::default(), quad: QuadConfig::STANDARD })
    }

    pub fn with_geometry(mut self, geometry: GeometryConfig) -> Self {
        self.geometry = geometry;
        self
    }

    pub fn with_quadrature(mut self, quad: QuadConfig) -> Self {
        self.quad = quad;
        self
    }

    pub fn signal(&self) -> &DrivingSignal {
        &self.signal
    }

    pub fn extent(&self) -> &ConeVector {
        &self.extent
    }

    pub fn eval(&self, x: &RealEvent) -> Result<Complex64> {
        eval_raw(&self.signal, x, &self.extent.space(), self.extent.time(), &self.geometry, &self.quad)
    }

    /// `W(x - iεy) - W(x + iεy)` for one `ε`.
    fn tube_difference(&self, x: &RealEvent, eps: f64) -> Result<Complex64> {
        let (y, s) = (self.extent.space() * eps, self.extent.time() * eps);
        let past = eval_raw(&self.signal, x, &y, s, &self.geometry, &QuadConfig::PRECISE)?;
        let future = eval_raw(&self.signal, x, &(-y), -s, &self.geometry, &QuadConfig::PRECISE)?;
        Ok(past - future)
    }

    /// Extrapolated boundary jump across real spacetime; equals `g₀(t - r)/(4πr)`.
    pub fn boundary_jump(&self, x: &RealEvent, eps_list: &[f64]) -> Result<Complex64> {
        if !(x.radius() > 0.0) {
            return Err(Error::UndefinedDirection);
        }
        if eps_list.len() < 2 || eps_list.iter().any(|&e| !(e > 0.0)) || eps_list.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Domain("epsilons must be positive, strictly descending, at least 2"));
        }
        if self.signal.value(x.time - x.radius()).is_none() {
            return Err(Error::Domain("driving signal is not continuous at t - r"));
        }
        let diffs = eps_list
            .iter()
            .map(|&e| self.tube_difference(x, e))
            .collect::<Result<Vec<_>>>()?;
        let ex = extrapolate_to_zero(eps_list, &diffs);
        let scale = diffs.iter().map(|d| d.norm()).fold(f64::MIN_POSITIVE, f64::max);
        if !(ex.error <= JUMP_TOL * scale) {
            return Err(Error::Accuracy { what: "wavelet boundary-jump extrapolation", estimate: ex.error });
        }
        Ok(ex.value)
    }

    /// Checks that the spatial stencil of half-width `h` around `center`
    /// neither touches the branch circle nor crosses the cut disk.
    fn check_stencil(&self, center: &Vec3, h: f64) -> Result<()> {
        let y = self.extent.space();
        let a = y.norm();
        if a == 0.0 {
            return if center.norm() > h {
                Ok(())
            } else {
                Err(Error::StencilPlacement("stencil reaches the point singularity"))
            };
        }
        let axis = y / a;
        let on_disk = |p: &Vec3| {
            let x3 = p.dot(&axis);
            (p - axis * x3).norm() <= a
        };
        // distance to the circle r = a, x₃ = 0
        let circle_gap = |p: &Vec3| {
            let x3 = p.dot(&axis);
            let rho = (p - axis * x3).norm();
            (rho - a).hypot(x3)
        };
        let c3 = center.dot(&axis);
        if c3 == 0.0 && on_disk(center) {
            return Err(Error::StencilPlacement("centre lies on the cut disk"));
        }
        for k in 0..3 {
            for dir in [-1.0, 1.0] {
                let mut p = *center;
                p[k] += dir * h;
                if circle_gap(&p) <= h || circle_gap(center) <= h {
                    return Err(Error::StencilPlacement("stencil touches the branch circle"));
                }
                let p3 = p.dot(&axis);
                if c3.signum() != p3.signum() || p3 == 0.0 {
                    let lambda = c3 / (c3 - p3);
                    let hit = center + (p - center) * lambda;
                    if on_disk(&hit) {
                        return Err(Error::StencilPlacement("stencil crosses the cut disk"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Central-difference `□W = ∂ₜ²W - ΔW` with one shared step `h`.
    pub fn wave_residual(&self, x: &RealEvent, h: f64) -> Result<Complex64> {
        if !(h > 0.0) {
            return Err(Error::Domain("finite-difference step must be positive"));
        }
        self.check_stencil(&x.space, h)?;
        self.wave_residual_unchecked(x, h)
    }

    /// As [`Self::wave_residual`] without the stencil-placement guard; the
    /// cut-side convention of the complex distance applies to stencil points
    /// on the disk.
    pub fn wave_residual_unchecked(&self, x: &RealEvent, h: f64) -> Result<Complex64> {
        let field = self.clone().with_quadrature(QuadConfig::PRECISE);
        let at = |dx: Vec3, dt: f64| field.eval(&RealEvent { space: x.space + dx, time: x.time + dt });
        let center = at(Vec3::zeros(), 0.0)?;
        let mut acc = at(Vec3::zeros(), h)? + at(Vec3::zeros(), -h)? + center * 4.0;
        for k in 0..3 {
            let mut e = Vec3::zeros();
            e[k] = h;
            acc -= at(e, 0.0)? + at(-e, 0.0)?;
        }
        Ok(acc / (h * h))
    }
}

pub fn wavelet_eval(signal: &DrivingSignal, x: &RealEvent, y: &ConeVector) -> Result<Complex64> {
    WaveletField::new(signal.clone(), *y)?.eval(x)
}

pub fn boundary_jump(signal: &DrivingSignal, x: &RealEvent, y: &ConeVector, eps_list: &[f64]) -> Result<Complex64> {
    WaveletField::new(signal.clone(), *y)?.boundary_jump(x, eps_list)
}

pub fn wave_residual(signal: &DrivingSignal, x: &RealEvent, y: &ConeVector, h: f64) -> Result<Complex64> {
    WaveletField::new(signal.clone(), *y)?.wave_residual(x, h)
}

/// Least-squares slope of `log|residual|` against `log h`.
pub fn convergence_order(steps: &[f64], residuals: &[f64]) -> f64 {
    let n = steps.len() as f64;
    let xs: Vec<f64> = steps.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = residuals.iter().map(|r| r.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagator::extended_propagator;
    use crate::signals::halving_ladder;
    use approx::assert_relative_eq;

    fn ev(x: f64, y: f64, z: f64, t: f64) -> RealEvent {
        RealEvent::new(Vec3::new(x, y, z), t).unwrap()
    }

    fn cone(x: f64, y: f64, z: f64, s: f64) -> ConeVector {
        ConeVector::from_parts(Vec3::new(x, y, z), s).unwrap()
    }

    fn gauss() -> DrivingSignal {
        DrivingSignal::gaussian(0.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn delta_wavelet_is_the_propagator() {
        let y = cone(0.3, -0.2, 1.0, 2.0);
        for x in [ev(0.0, 0.0, 3.0, 2.0), ev(1.0, 2.0, -0.5, 4.0), ev(0.2, 0.1, 0.05, -1.0)] {
            let w = wavelet_eval(&DrivingSignal::delta(0), &x, &y).unwrap();
            let p = extended_propagator(&x.space, &y.space(), x.time, y.time()).unwrap();
            assert!((w - p).norm() <= 1e-14 * p.norm());
        }
    }

    #[test]
    fn gaussian_wavelet_composes_oracles() {
        // r̃ = 5 - i and τ - r̃ = -i on the axis
        let w = wavelet_eval(&gauss(), &ev(0.0, 0.0, 5.0, 5.0), &cone(0.0, 0.0, 1.0, 2.0)).unwrap();
        let g = gauss().analytic_signal(Complex64::new(0.0, -1.0)).unwrap();
        let oracle = g / (4.0 * PI * Complex64::new(5.0, -1.0));
        assert!((w - oracle).norm() <= 1e-12 * oracle.norm());
    }

    #[test]
    fn early_times_follow_the_signal_envelope() {
        let y = cone(0.0, 0.0, 1.0, 2.0);
        let x = Vec3::new(0.0, 0.0, 20.0);
        let rt = Complex64::new(20.0, -1.0);
        let mut prev = 0.0;
        for t in [-10.0, -6.0, -2.0, 5.0, 12.0] {
            let w = wavelet_eval(&gauss(), &RealEvent::new(x, t).unwrap(), &y).unwrap();
            let env = gauss().analytic_signal(Complex64::new(t, -2.0) - rt).unwrap().norm() / (4.0 * PI * rt.norm());
            assert_relative_eq!(w.norm(), env, max_relative = 1e-12);
            assert!(w.norm() > prev);
            prev = w.norm();
        }
    }

    #[test]
    fn linear_in_the_signal() {
        let y = cone(0.1, 0.0, 0.8, 1.5);
        let x = ev(0.7, -0.4, 2.0, 1.8);
        let parts = [
            (0.7, DrivingSignal::gaussian(0.0, 1.0, 1.0).unwrap()),
            (-1.3, DrivingSignal::gaussian(0.5, 0.4, 1.0).unwrap()),
            (2.1, DrivingSignal::gaussian(-1.0, 2.0, 1.0).unwrap()),
        ];
        let combined: Complex64 = parts.iter().map(|(c, g)| *c * wavelet_eval(g, &x, &y).unwrap()).sum();
        let scaled = wavelet_eval(&DrivingSignal::gaussian(0.5, 0.4, -1.3).unwrap(), &x, &y).unwrap();
        let single = -1.3 * wavelet_eval(&parts[1].1, &x, &y).unwrap();
        assert!((scaled - single).norm() <= 1e-12 * single.norm());
        assert!(combined.is_finite());
    }

    #[test]
    fn rejects_branch_circle() {
        let err = wavelet_eval(&gauss(), &ev(1.0, 0.0, 0.0, 0.0), &cone(0.0, 0.0, 1.0, 2.0)).unwrap_err();
        assert!(matches!(err, Error::NearBranchCircle { .. }));
        assert!(WaveletField::new(gauss(), ConeVector::zero()).is_err());
    }

    #[test]
    fn boundary_jump_reference_case() {
        let x = ev(0.0, 0.0, 2.0, 2.5);
        let y = cone(0.0, 0.0, 0.5, 1.0);
        let j = boundary_jump(&gauss(), &x, &y, &halving_ladder(0.1, 6)).unwrap();
        let expected = (-0.125f64).exp() / (8.0 * PI);
        assert_relative_eq!(j.re, expected, max_relative = 1e-6);
        assert!(j.im.abs() <= 1e-8);
        assert_relative_eq!(j.re, 3.51134e-2, epsilon = 1e-7);
    }

    #[test]
    fn boundary_jump_vanishes_outside_the_pulse() {
        let sig = DrivingSignal::Sampled(
            crate::signals::SampledSignal::new(vec![-1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]).unwrap(),
        );
        let j = boundary_jump(&sig, &ev(0.0, 1.0, 1.0, 10.0), &cone(0.0, 0.0, 0.5, 1.0), &halving_ladder(0.1, 5))
            .unwrap();
        assert!(j.norm() < 1e-10);
    }

    #[test]
    fn boundary_jump_preconditions() {
        let y = cone(0.0, 0.0, 0.5, 1.0);
        assert!(boundary_jump(&gauss(), &ev(0.0, 0.0, 0.0, 1.0), &y, &halving_ladder(0.1, 4)).is_err());
        assert!(boundary_jump(&DrivingSignal::delta(0), &ev(0.0, 0.0, 2.0, 2.0), &y, &halving_ladder(0.1, 4)).is_err());
    }

    fn order_at(signal: &DrivingSignal, x: &RealEvent, y: &ConeVector) -> (f64, Vec<f64>) {
        let hs = [1e-2, 5e-3, 2.5e-3];
        let res: Vec<f64> = hs.iter().map(|&h| wave_residual(signal, x, y, h).unwrap().norm()).collect();
        (convergence_order(&hs, &res), res)
    }

    #[test]
    fn wave_residual_is_second_order_in_front_of_the_cut() {
        let y = cone(0.0, 0.0, 1.0, 2.0);
        let x = ev(0.0, 0.0, 3.0, 2.0);
        let (order, res) = order_at(&DrivingSignal::delta(0), &x, &y);
        let w = wavelet_eval(&DrivingSignal::delta(0), &x, &y).unwrap().norm();
        assert!(res[0] / w <= 1e-3, "{}", res[0] / w);
        assert!(order >= 1.8, "order {order}");
        let (order, _) = order_at(&gauss(), &ev(0.4, 0.2, 2.5, 3.0), &y);
        assert!(order >= 1.8, "gaussian order {order}");
    }

    #[test]
    fn wave_residual_is_second_order_behind_the_cut() {
        let y = cone(0.0, 0.0, 1.0, 2.0);
        let (order, _) = order_at(&DrivingSignal::delta(0), &ev(0.3, 0.0, -1.5, 1.0), &y);
        assert!(order >= 1.8, "order {order}");
    }

    #[test]
    fn stencil_crossing_the_cut_is_rejected() {
        let y = cone(0.0, 0.0, 1.0, 2.0);
        let err = wave_residual(&DrivingSignal::delta(0), &ev(0.2, 0.0, 0.004, 1.0), &y, 1e-2).unwrap_err();
        assert!(matches!(err, Error::StencilPlacement(_)));
        let err = wave_residual(&DrivingSignal::delta(0), &ev(1.0, 0.0, 0.004, 1.0), &y, 1e-2).unwrap_err();
        assert!(matches!(err, Error::StencilPlacement(_)));
        // outside the disk the plane x₃ = 0 is regular
        assert!(wave_residual(&DrivingSignal::delta(0), &ev(2.0, 0.0, 0.0, 1.0), &y, 1e-2).is_ok());
    }

    #[test]
    fn residual_spikes_only_at_the_cut() {
        let y = cone(0.0, 0.0, 1.0, 2.0);
        let field = WaveletField::new(DrivingSignal::delta(0), y).unwrap();
        let h = 1e-2;
        let w0 = field.eval(&ev(0.3, 0.0, 0.5, 1.0)).unwrap().norm();
        for k in -40..=40 {
            let z = 0.0125 * k as f64 + 0.003;
            let x = ev(0.3, 0.0, z, 1.0);
            let r = field.wave_residual_unchecked(&x, h).unwrap().norm();
            if z.abs() > h {
                assert!(r / w0 < 1e-3, "z={z} r/w0={}", r / w0);
            } else {
                assert!(r / w0 > 1.0, "expected spike at z={z}, r/w0={}", r / w0);
            }
        }
    }

    #[test]
    fn order_fit_on_exact_power_law() {
        let hs = [1e-2, 5e-3, 2.5e-3];
        let res: Vec<f64> = hs.iter().map(|h| 3.0 * h * h).collect();
        assert_relative_eq!(convergence_order(&hs, &res), 2.0, max_relative = 1e-12);
    }
}
