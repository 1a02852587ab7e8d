//! Emitter/receiver channels `W(z_r - z_e)` with `z_e = x_e + i y_e` and
//! `z_r = x_r - i y_r`.
//!
//! Only the difference `z = (x_r - x_e) - i (y_e + y_r)` enters the amplitude,
//! so channels related by a complex translation `(ξ, η)` are equivalent.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signals::DrivingSignal;
use crate::spacetime::{cone_status, tube_difference, ComplexEvent, ConeStatus, ConeVector, FourVector, RealEvent, Vec3};
use crate::wavelet::WaveletField;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoint {
    pub center: RealEvent,
    pub extent: ConeVector,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    emitter: Endpoint,
    receiver: Endpoint,
    total: ConeVector,
}

/// Durations and bandwidths of a channel. Null endpoints have zero duration
/// and infinite bandwidth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelMetrics {
    /// `T_e = s_e - a_e`.
    pub emitter_duration: f64,
    /// `T_r = s_r - a_r`.
    pub receiver_duration: f64,
    /// `T = s - a` for the combined extent.
    pub duration: f64,
    pub emitter_bandwidth: f64,
    pub receiver_bandwidth: f64,
    pub bandwidth: f64,
    /// Effective aperture `a = |y⃗_e + y⃗_r|`.
    pub aperture: f64,
    pub emitter_aperture: f64,
    pub receiver_aperture: f64,
}

impl Channel {
    pub fn new(emitter: Endpoint, receiver: Endpoint) -> Result<Self> {
        let sum = emitter.extent.as_four() + receiver.extent.as_four();
        if cone_status(&sum)? != ConeStatus::Interior {
            return Err(Error::CausalityViolation(sum.to_array()));
        }
        let total = ConeVector::new(sum)?;
        Ok(Self { emitter, receiver, total })
    }

    pub fn emitter(&self) -> &Endpoint {
        &self.emitter
    }

    pub fn receiver(&self) -> &Endpoint {
        &self.receiver
    }

    /// `x = x_r - x_e`.
    pub fn separation(&self) -> RealEvent {
        RealEvent {
            space: self.receiver.center.space - self.emitter.center.space,
            time: self.receiver.center.time - self.emitter.center.time,
        }
    }

    /// `y = y_e + y_r`, always interior.
    pub fn total_extent(&self) -> ConeVector {
        self.total
    }

    pub fn aperture(&self) -> f64 {
        self.total.aperture()
    }

    /// `z_r - z_e` as a past-tube point.
    pub fn difference(&self) -> ComplexEvent {
        let e = ComplexEvent::emitter(self.emitter.center, self.emitter.extent);
        let r = ComplexEvent::receiver(self.receiver.center, self.receiver.extent);
        tube_difference(&r, &e).expect("channel invariant: combined extent is interior")
    }

    /// Transmission amplitude `W(z_r - z_e)`.
    pub fn amplitude(&self, signal: &DrivingSignal) -> Result<Complex64> {
        WaveletField::new(signal.clone(), self.total)?.eval(&self.separation())
    }

    /// Applies `z_e → z_e + ζ`, `z_r → z_r + ζ` with `ζ = ξ + iη`.
    pub fn translate(&self, xi: &FourVector, eta: &FourVector) -> Result<Channel> {
        let ye = self.emitter.extent.as_four() + *eta;
        let yr = self.receiver.extent.as_four() - *eta;
        let emitter = Endpoint {
            center: self.emitter.center.translated(xi)?,
            extent: ConeVector::new(ye).map_err(|_| Error::InvalidCone("translated emitter extent"))?,
        };
        let receiver = Endpoint {
            center: self.receiver.center.translated(xi)?,
            extent: ConeVector::new(yr).map_err(|_| Error::InvalidCone("translated receiver extent"))?,
        };
        Channel::new(emitter, receiver)
    }

    /// Equivalent channel with an idealized point receiver (`η = y_r`).
    pub fn with_point_receiver(&self) -> Result<Channel> {
        self.translate(&FourVector::zero(), &self.receiver.extent.as_four())
    }

    /// Equivalent channel with an idealized point emitter (`η = -y_e`).
    pub fn with_point_emitter(&self) -> Result<Channel> {
        self.translate(&FourVector::zero(), &(-self.emitter.extent.as_four()))
    }

    pub fn metrics(&self) -> ChannelMetrics {
        let te = self.emitter.extent.duration();
        let tr = self.receiver.extent.duration();
        let t = self.total.duration();
        let inv = |d: f64| if d == 0.0 { f64::INFINITY } else { 1.0 / d };
        ChannelMetrics {
            emitter_duration: te,
            receiver_duration: tr,
            duration: t,
            emitter_bandwidth: inv(te),
            receiver_bandwidth: inv(tr),
            bandwidth: 1.0 / t,
            aperture: self.total.aperture(),
            emitter_aperture: self.emitter.extent.aperture(),
            receiver_aperture: self.receiver.extent.aperture(),
        }
    }

    pub fn description(&self) -> ChannelDescription {
        let side = |e: &Endpoint| EndpointDescription {
            center: e.center.as_four().to_array(),
            extent: e.extent.as_four().to_array(),
        };
        ChannelDescription { emitter: side(&self.emitter), receiver: side(&self.receiver) }
    }

    pub fn from_json(text: &str) -> Result<Channel> {
        let desc: ChannelDescription =
            serde_json::from_str(text).map_err(|e| Error::InvalidSignal(format!("channel json: {e}")))?;
        desc.to_channel()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.description()).expect("channel description is plain data")
    }
}

/// Wire form: `{"emitter":{"center":[x,y,z,t],"extent":[yx,yy,yz,s]},"receiver":{…}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelDescription {
    pub emitter: EndpointDescription,
    pub receiver: EndpointDescription,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndpointDescription {
    pub center: [f64; 4],
    pub extent: [f64; 4],
}

impl EndpointDescription {
    fn to_endpoint(&self, what: &'static str) -> Result<Endpoint> {
        let c = FourVector::from_array(self.center);
        let center = RealEvent::new(c.space, c.time)?;
        let extent = ConeVector::new(FourVector::from_array(self.extent)).map_err(|e| match e {
            Error::InvalidCone(_) => Error::InvalidCone(what),
            other => other,
        })?;
        Ok(Endpoint { center, extent })
    }
}

impl ChannelDescription {
    pub fn to_channel(&self) -> Result<Channel> {
        Channel::new(self.emitter.to_endpoint("emitter extent")?, self.receiver.to_endpoint("receiver extent")?)
    }
}

pub fn make_channel(x_e: RealEvent, y_e: FourVector, x_r: RealEvent, y_r: FourVector) -> Result<Channel> {
    let emitter = Endpoint {
        center: x_e,
        extent: ConeVector::new(y_e).map_err(|_| Error::InvalidCone("emitter extent"))?,
    };
    let receiver = Endpoint {
        center: x_r,
        extent: ConeVector::new(y_r).map_err(|_| Error::InvalidCone("receiver extent"))?,
    };
    Channel::new(emitter, receiver)
}

pub fn channel_amplitude(ch: &Channel, signal: &DrivingSignal) -> Result<Complex64> {
    ch.amplitude(signal)
}

pub fn channel_translate(ch: &Channel, xi: &FourVector, eta: &FourVector) -> Result<Channel> {
    ch.translate(xi, eta)
}

pub fn channel_metrics(ch: &Channel) -> ChannelMetrics {
    ch.metrics()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainSample {
    /// Tilt of the receiver orientation away from the line of sight.
    pub theta: f64,
    /// `1 / (8π² r (s - a_e - a_r cosθ))`.
    pub far_zone_peak: f64,
    /// `|W(z_r - z_e)|` for the delta signal at `t = r`.
    pub amplitude: f64,
}

/// Peak transmission versus receiver tilt.
///
/// The emitter sits at the origin facing `+x₃`; the receiver sits at
/// `(0, 0, r)` and its orientation is tilted by `θ` in the `x₁x₃` plane.
pub fn gain_scan(a_e: f64, s_e: f64, a_r: f64, s_r: f64, r: f64, theta_grid: &[f64]) -> Result<Vec<GainSample>> {
    if !(r > 0.0) {
        return Err(Error::Domain("gain scan needs a positive separation"));
    }
    let ye = FourVector::new(Vec3::new(0.0, 0.0, a_e), s_e);
    if cone_status(&ye)? != ConeStatus::Interior {
        return Err(Error::InvalidCone("emitter extent"));
    }
    let x_e = RealEvent::origin();
    let x_r = RealEvent::new(Vec3::new(0.0, 0.0, r), r)?;
    let delta = DrivingSignal::delta(0);
    theta_grid
        .iter()
        .map(|&theta| {
            let yr = FourVector::new(Vec3::new(a_r * theta.sin(), 0.0, a_r * theta.cos()), s_r);
            if cone_status(&yr)? != ConeStatus::Interior {
                return Err(Error::InvalidCone("receiver extent"));
            }
            let ch = make_channel(x_e, ye, x_r, yr)?;
            Ok(GainSample {
                theta,
                far_zone_peak: 1.0 / (8.0 * PI * PI * r * (s_e + s_r - a_e - a_r * theta.cos())),
                amplitude: ch.amplitude(&delta)?.norm(),
            })
        })
        .collect()
}

/// `n` odd angles symmetric about zero spanning `[-π, π]`, with `θ(-k) = -θ(k)` exactly.
pub fn symmetric_theta_grid(n: usize) -> Vec<f64> {
    assert!(n >= 3 && n % 2 == 1, "symmetric grid needs an odd count >= 3");
    let m = (n - 1) / 2;
    let step = PI / m as f64;
    (0..n).map(|k| (k as f64 - m as f64) * step).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fv(x: f64, y: f64, z: f64, t: f64) -> FourVector {
        FourVector::new(Vec3::new(x, y, z), t)
    }

    fn ev(x: f64, y: f64, z: f64, t: f64) -> RealEvent {
        RealEvent::new(Vec3::new(x, y, z), t).unwrap()
    }

    fn channel_a() -> Channel {
        make_channel(ev(0.0, 0.0, 0.0, 0.0), fv(0.0, 0.1, 1.0, 2.0), ev(0.5, 0.0, 6.0, 6.5), fv(0.2, 0.0, 1.0, 1.8))
            .unwrap()
    }

    #[test]
    fn make_channel_examples() {
        let y = fv(0.0, 0.0, 1.0, 2.0);
        let ch = make_channel(RealEvent::origin(), y, RealEvent::origin(), y).unwrap();
        assert_eq!(ch.aperture(), 2.0);
        assert_eq!(ch.total_extent().time(), 4.0);

        let ch = make_channel(RealEvent::origin(), FourVector::zero(), ev(0.0, 0.0, 3.0, 3.0), y).unwrap();
        assert!(ch.emitter().extent.is_null());

        let err = make_channel(RealEvent::origin(), FourVector::zero(), RealEvent::origin(), FourVector::zero());
        assert!(matches!(err, Err(Error::CausalityViolation(_))));
        let err = make_channel(RealEvent::origin(), fv(0.0, 0.0, 2.0, 1.0), RealEvent::origin(), y);
        assert!(matches!(err, Err(Error::InvalidCone(_))));
    }

    #[test]
    fn point_emitter_reduces_to_single_extent_wavelet() {
        let y = fv(0.0, 0.3, 1.0, 2.0);
        let ch = make_channel(ev(1.0, 0.0, 0.0, 0.5), FourVector::zero(), ev(1.0, 0.5, 4.0, 4.0), y).unwrap();
        let sig = DrivingSignal::gaussian(0.0, 1.0, 1.0).unwrap();
        let direct = crate::wavelet::wavelet_eval(&sig, &ev(0.0, 0.5, 4.0, 3.5), &ConeVector::new(y).unwrap()).unwrap();
        assert_eq!(ch.amplitude(&sig).unwrap(), direct);
    }

    #[test]
    fn difference_matches_tube_algebra() {
        let ch = channel_a();
        let z = ch.difference();
        assert_eq!(z.real, ch.separation());
        assert_eq!(z.imag, ch.total_extent());
    }

    #[test]
    fn equivalent_trio_agrees_exactly() {
        let a = channel_a();
        let b = a.with_point_receiver().unwrap();
        let c = a.with_point_emitter().unwrap();
        assert!(b.receiver().extent.is_null());
        assert!(c.emitter().extent.is_null());
        assert_eq!(b.emitter().extent.as_four(), a.total_extent().as_four());
        assert_eq!(c.receiver().extent.as_four(), a.total_extent().as_four());
        for sig in [DrivingSignal::delta(0), DrivingSignal::delta(2), DrivingSignal::gaussian(0.3, 0.7, 1.0).unwrap()] {
            let amp = a.amplitude(&sig).unwrap();
            assert_eq!(b.amplitude(&sig).unwrap(), amp);
            assert_eq!(c.amplitude(&sig).unwrap(), amp);
        }
    }

    #[test]
    fn translation_keeps_amplitude() {
        let a = channel_a();
        let t = a.translate(&fv(1.5, -2.0, 0.25, 3.0), &fv(0.05, 0.0, 0.1, 0.3)).unwrap();
        let sig = DrivingSignal::delta(1);
        let (x, y) = (a.amplitude(&sig).unwrap(), t.amplitude(&sig).unwrap());
        assert!((x - y).norm() <= 1e-14 * x.norm());
        // too large an imaginary shift leaves the cone
        assert!(matches!(a.translate(&FourVector::zero(), &fv(0.0, 0.0, 0.0, 5.0)), Err(Error::InvalidCone(_))));
    }

    #[test]
    fn metrics_examples() {
        let y = fv(0.0, 0.0, 1.0, 2.0);
        let ch = make_channel(RealEvent::origin(), y, ev(0.0, 0.0, 5.0, 5.0), y).unwrap();
        let m = ch.metrics();
        assert_eq!(m.emitter_bandwidth, 1.0);
        assert_eq!(m.duration, 2.0);
        assert_eq!(m.emitter_duration + m.receiver_duration, 2.0);
        assert_eq!(m.bandwidth, 0.5);

        let ch = make_channel(RealEvent::origin(), y, ev(0.0, 0.0, 5.0, 5.0), fv(1.0, 0.0, 0.0, 2.0)).unwrap();
        let m = ch.metrics();
        assert_relative_eq!(m.aperture, 2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(m.duration, 4.0 - 2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(m.duration, 2.5858, epsilon = 1e-4);
        assert_relative_eq!(m.bandwidth, 0.3867, epsilon = 1e-4);
        assert!(m.bandwidth < 0.5);

        let ch = make_channel(RealEvent::origin(), FourVector::zero(), ev(0.0, 0.0, 5.0, 5.0), y).unwrap();
        assert_eq!(ch.metrics().emitter_bandwidth, f64::INFINITY);
        assert_eq!(ch.metrics().bandwidth, 1.0);
    }

    #[test]
    fn gain_scan_peaks_on_line_of_sight() {
        let grid = symmetric_theta_grid(721);
        assert_eq!(grid[360], 0.0);
        assert_eq!(grid[0], -PI);
        let scan = gain_scan(1.0, 2.0, 1.0, 2.0, 100.0, &grid).unwrap();
        let argmax = (0..scan.len()).max_by(|&i, &j| scan[i].amplitude.total_cmp(&scan[j].amplitude)).unwrap();
        assert_eq!(argmax, 360);
        for k in 0..=360 {
            assert_eq!(scan[360 + k].amplitude, scan[360 - k].amplitude);
        }
        for w in scan[360..].windows(2) {
            assert!(w[1].amplitude <= w[0].amplitude);
            assert!(w[1].far_zone_peak <= w[0].far_zone_peak);
        }
        // line of sight matches the parallel-channel prediction 1/(8π² r (s - a))
        let predicted = 1.0 / (8.0 * PI * PI * 100.0 * 2.0);
        assert_relative_eq!(scan[360].far_zone_peak, predicted, max_relative = 1e-14);
        assert_relative_eq!(scan[360].amplitude, predicted, max_relative = 0.03);
    }

    #[test]
    fn json_round_trip_and_golden_form() {
        let text = r#"{"emitter":{"center":[0.0,0.0,0.0,0.0],"extent":[0.0,0.0,1.0,2.0]},"receiver":{"center":[0.0,0.0,10.0,10.0],"extent":[0.0,0.0,1.0,2.0]}}"#;
        let ch = Channel::from_json(text).unwrap();
        assert_eq!(ch.aperture(), 2.0);
        assert_eq!(ch.to_json(), text);
        assert!(Channel::from_json(r#"{"emitter":{"center":[0,0,0,0],"extent":[0,0,0,0]},"receiver":{"center":[0,0,0,0],"extent":[0,0,0,0]}}"#).is_err());
        assert!(Channel::from_json(r#"{"emitter":{"center":[0,0,0],"extent":[0,0,1,2]},"receiver":{"center":[0,0,0,0],"extent":[0,0,1,2]}}"#).is_err());
    }
}
