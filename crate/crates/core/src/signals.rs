//! Driving signals `g₀(t)` and their analytic signals
//! `g(τ) = (1/2πi) ∫ g₀(t') / (τ - t') dt'` for complex time `τ = t - is`.
//!
//! The Fourier convention is `ĝ₀(ω) = ∫ g₀(t) e^{iωt} dt`. With it the
//! spectral representation reads
//! `g(t - is) = (sgn s / 2π) ∫ Θ(ωs) e^{-iωτ} ĝ₀(ω) dω`,
//! which reproduces the Cauchy kernel `1/(2πiτ)` for `g₀ = δ`.

use std::f64::consts::PI;
use std::io::Read;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extrapolate::extrapolate_to_zero;
use crate::quadrature::{integrate, QuadConfig};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Gaussian tails are dropped where `|g₀| < 1e-14 · max |g₀|`.
const GAUSSIAN_TAIL: f64 = 1e-14;
/// Spectral integrals stop once the envelope has fallen by `e^-40`.
const SPECTRAL_DECADES: f64 = 40.0;
/// Highest delta-derivative order the spectral path will integrate.
pub const MAX_SPECTRAL_ORDER: u32 = 60;
/// Relative tolerance on the extrapolated boundary jump.
pub const JUMP_TOL: f64 = 1e-6;

/// `A · exp(-(t - t₀)² / 2σ²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPulse {
    center: f64,
    width: f64,
    amplitude: f64,
}

impl GaussianPulse {
    pub fn new(center: f64, width: f64, amplitude: f64) -> Result<Self> {
        if !(center.is_finite() && width.is_finite() && amplitude.is_finite()) {
            return Err(Error::NonFinite("gaussian parameters"));
        }
        if width <= 0.0 {
            return Err(Error::InvalidSignal(format!("gaussian width must be positive, got {width}")));
        }
        Ok(Self { center, width, amplitude })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    fn value(&self, t: f64) -> f64 {
        let u = (t - self.center) / self.width;
        self.amplitude * (-0.5 * u * u).exp()
    }

    fn truncated_support(&self) -> (f64, f64) {
        let half = self.width * (-2.0 * GAUSSIAN_TAIL.ln()).sqrt();
        (self.center - half, self.center + half)
    }
}

/// Piecewise-linear interpolant of samples, zero outside `[t_first, t_last]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl SampledSignal {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidSignal(format!(
                "{} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if times.len() < 2 {
            return Err(Error::InvalidSignal("sampled signal needs at least 2 points".into()));
        }
        if times.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("sampled signal"));
        }
        if let Some(k) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSignal(format!(
                "sample times must be strictly increasing (row {})",
                k + 2
            )));
        }
        Ok(Self { times, values })
    }

    /// Reads `time,value` rows. A leading non-numeric row is taken as a header.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let (mut times, mut values) = (Vec::new(), Vec::new());
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::InvalidSignal(format!("csv: {e}")))?;
            if rec.len() != 2 {
                return Err(Error::InvalidSignal(format!(
                    "line {}: expected 2 columns, found {}",
                    line + 1,
                    rec.len()
                )));
            }
            let parsed = (rec[0].parse::<f64>(), rec[1].parse::<f64>());
            match parsed {
                (Ok(t), Ok(v)) => {
                    times.push(t);
                    values.push(v);
                }
                _ if line == 0 => continue,
                _ => {
                    return Err(Error::InvalidSignal(format!("line {}: not a number", line + 1)));
                }
            }
        }
        Self::new(times, values)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn support(&self) -> (f64, f64) {
        (self.times[0], self.times[self.times.len() - 1])
    }

    pub fn value(&self, t: f64) -> f64 {
        let (lo, hi) = self.support();
        if !(lo..=hi).contains(&t) {
            return 0.0;
        }
        let k = self.times.partition_point(|&x| x <= t).clamp(1, self.times.len() - 1);
        let (t0, t1) = (self.times[k - 1], self.times[k]);
        let (v0, v1) = (self.values[k - 1], self.values[k]);
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    /// Exact transform of the interpolant, segment by segment.
    fn spectrum(&self, omega: f64) -> Complex64 {
        self.times
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(t, v)| {
                let h = t[1] - t[0];
                let slope = (v[1] - v[0]) / h;
                let x = omega * h;
                let phase = Complex64::from_polar(1.0, omega * t[0]);
                phase * (v[0] * h * ramp_moment(x, 0) + slope * h * h * ramp_moment(x, 1))
            })
            .sum()
    }
}

/// `∫₀¹ vᵏ e^{ixv} dv` for `k ∈ {0, 1}`.
fn ramp_moment(x: f64, k: u32) -> Complex64 {
    if x.abs() < 0.1 {
        // Σ (ix)ⁿ / (n! (n + k + 1))
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::default();
        for n in 0..16 {
            sum += term / f64::from(n + k + 1);
            term *= I * x / f64::from(n + 1);
        }
        return sum;
    }
    let e = Complex64::from_polar(1.0, x);
    match k {
        0 => (e - 1.0) / (I * x),
        _ => e / (I * x) + (e - 1.0) / (x * x),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DrivingSignal {
    /// `g₀ = ∂ⁿδ`.
    DeltaDerivative { order: u32 },
    Gaussian(GaussianPulse),
    Sampled(SampledSignal),
}

/// Complex time `τ = t - is`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexTime {
    pub t: f64,
    pub s: f64,
}

impl ComplexTime {
    pub fn new(t: f64, s: f64) -> Self {
        Self { t, s }
    }

    pub fn tau(&self) -> Complex64 {
        Complex64::new(self.t, -self.s)
    }
}

impl From<Complex64> for ComplexTime {
    fn from(tau: Complex64) -> Self {
        Self { t: tau.re, s: -tau.im }
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

impl DrivingSignal {
    pub fn delta(order: u32) -> Self {
        DrivingSignal::DeltaDerivative { order }
    }

    pub fn gaussian(center: f64, width: f64, amplitude: f64) -> Result<Self> {
        GaussianPulse::new(center, width, amplitude).map(DrivingSignal::Gaussian)
    }

    /// Pointwise `g₀(t)`; `None` for distributions.
    pub fn value(&self, t: f64) -> Option<f64> {
        match self {
            DrivingSignal::DeltaDerivative { .. } => (t != 0.0).then_some(0.0),
            DrivingSignal::Gaussian(g) => Some(g.value(t)),
            DrivingSignal::Sampled(s) => Some(s.value(t)),
        }
    }

    /// `ĝ₀(ω) = ∫ g₀(t) e^{iωt} dt`.
    pub fn spectrum(&self, omega: f64) -> Complex64 {
        match self {
            DrivingSignal::DeltaDerivative { order } => (-I * omega).powu(*order),
            DrivingSignal::Gaussian(g) => {
                let w = g.width * omega;
                Complex64::from_polar(
                    g.amplitude * g.width * (2.0 * PI).sqrt() * (-0.5 * w * w).exp(),
                    omega * g.center,
                )
            }
            DrivingSignal::Sampled(s) => s.spectrum(omega),
        }
    }

    pub fn analytic_signal(&self, tau: Complex64) -> Result<Complex64> {
        self.analytic_signal_with(tau, &QuadConfig::STANDARD)
    }

    /// Evaluates the Cauchy integral of `g₀` at `τ`; closed form for delta
    /// derivatives, adaptive quadrature otherwise.
    pub fn analytic_signal_with(&self, tau: Complex64, cfg: &QuadConfig) -> Result<Complex64> {
        if !(tau.re.is_finite() && tau.im.is_finite()) {
            return Err(Error::NonFinite("complex time"));
        }
        let kernel = |t: f64, g0: f64| g0 / (2.0 * PI * I * (tau - t));
        match self {
            DrivingSignal::DeltaDerivative { order } => {
                if tau == Complex64::default() {
                    return Err(Error::NonAnalyticPoint { t: 0.0 });
                }
                let n = *order;
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                Ok(sign * factorial(n) / (2.0 * PI * I * tau.powu(n + 1)))
            }
            DrivingSignal::Gaussian(g) => {
                if tau.im == 0.0 {
                    return Err(Error::NonAnalyticPoint { t: tau.re });
                }
                let (lo, hi) = g.truncated_support();
                let mut points = vec![lo, g.center, hi];
                if tau.re > lo && tau.re < hi && tau.re != g.center {
                    points.push(tau.re);
                    points.sort_by(f64::total_cmp);
                }
                Ok(integrate(|t| kernel(t, g.value(t)), &points, cfg)?.value)
            }
            DrivingSignal::Sampled(s) => {
                let (lo, hi) = s.support();
                if tau.im == 0.0 && (lo..=hi).contains(&tau.re) {
                    return Err(Error::NonAnalyticPoint { t: tau.re });
                }
                let mut points = s.times.clone();
                if tau.re > lo && tau.re < hi {
                    let k = points.partition_point(|&x| x < tau.re);
                    if points[k] != tau.re {
                        points.insert(k, tau.re);
                    }
                }
                Ok(integrate(|t| kernel(t, s.value(t)), &points, cfg)?.value)
            }
        }
    }

    pub fn spectral_signal(&self, t: f64, s: f64) -> Result<Complex64> {
        self.spectral_signal_with(t, s, &QuadConfig::STANDARD)
    }

    /// Evaluates `g(t - is)` from the one-sided frequency integral.
    pub fn spectral_signal_with(&self, t: f64, s: f64, cfg: &QuadConfig) -> Result<Complex64> {
        if s == 0.0 {
            return Err(Error::Domain("spectral evaluation needs s != 0"));
        }
        if !(t.is_finite() && s.is_finite()) {
            return Err(Error::NonFinite("complex time"));
        }
        let cutoff = self.spectral_cutoff(s.abs())?;
        let tau = Complex64::new(t, -s);
        let sign = s.signum();
        const PANELS: usize = 16;
        let points: Vec<f64> = (0..=PANELS).map(|k| sign * cutoff * k as f64 / PANELS as f64).collect();
        let points = if sign < 0.0 { points.into_iter().rev().collect() } else { points };
        let integral = integrate(|w| (-I * w * tau).exp() * self.spectrum(w), &points, cfg)?;
        Ok(integral.value * sign / (2.0 * PI))
    }

    /// Frequency beyond which `|ĝ₀(ω)| e^{-|ω s|}` is negligible.
    fn spectral_cutoff(&self, s: f64) -> Result<f64> {
        match self {
            DrivingSignal::DeltaDerivative { order } => {
                if *order > MAX_SPECTRAL_ORDER {
                    return Err(Error::Accuracy {
                        what: "spectral evaluation of a high-order delta derivative",
                        estimate: f64::INFINITY,
                    });
                }
                // envelope ωⁿ e^{-ωs}, peak at n/s
                let n = f64::from(*order);
                let log_env = |w: f64| if n == 0.0 { -w * s } else { n * w.ln() - w * s };
                let peak = if n == 0.0 { 0.0 } else { log_env(n / s) };
                let mut w = (n + 1.0) / s;
                while log_env(w) > peak - SPECTRAL_DECADES {
                    w *= 1.25;
                }
                Ok(w)
            }
            DrivingSignal::Gaussian(g) => {
                // σ²ω²/2 + sω = 40
                let sig2 = g.width * g.width;
                Ok((-s + (s * s + 2.0 * sig2 * SPECTRAL_DECADES).sqrt()) / sig2)
            }
            DrivingSignal::Sampled(_) => Ok(SPECTRAL_DECADES / s),
        }
    }
}

pub fn analytic_signal(g0: &DrivingSignal, tau: ComplexTime) -> Result<Complex64> {
    g0.analytic_signal(tau.tau())
}

pub fn spectral_signal(g0: &DrivingSignal, t: f64, s: f64) -> Result<Complex64> {
    g0.spectral_signal(t, s)
}

/// Boundary jump `lim g(t - iε) - g(t + iε)`, which recovers `g₀(t)`.
///
/// Differences are formed at every `ε` in `eps_list` and extrapolated to
/// `ε → 0⁺`.
pub fn jump_of_signal(g0: &DrivingSignal, t: f64, eps_list: &[f64]) -> Result<f64> {
    if eps_list.len() < 3 {
        return Err(Error::Domain("jump extrapolation needs at least 3 epsilons"));
    }
    if eps_list.iter().any(|&e| !(e > 0.0)) || eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Domain("epsilons must be positive and strictly descending"));
    }
    if matches!(g0, DrivingSignal::DeltaDerivative { .. }) && t == 0.0 {
        return Err(Error::Domain("delta derivative is not continuous at t = 0"));
    }
    let diffs = eps_list
        .iter()
        .map(|&e| {
            let below = g0.analytic_signal_with(Complex64::new(t, -e), &QuadConfig::PRECISE)?;
            let above = g0.analytic_signal_with(Complex64::new(t, e), &QuadConfig::PRECISE)?;
            Ok(below - above)
        })
        .collect::<Result<Vec<_>>>()?;
    let ex = extrapolate_to_zero(eps_list, &diffs);
    let scale = diffs.iter().map(|d| d.norm()).fold(f64::MIN_POSITIVE, f64::max);
    if !(ex.error <= JUMP_TOL * scale) {
        return Err(Error::Accuracy { what: "boundary-jump extrapolation", estimate: ex.error });
    }
    Ok(ex.value.re)
}

/// Geometric ladder `first, first/2, first/4, …` with `count` entries.
pub fn halving_ladder(first: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| first / 2f64.powi(k as i32)).collect()
}
