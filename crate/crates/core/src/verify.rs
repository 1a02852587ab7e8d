//! Property checks over the whole library, run by `pulsebeam verify` and the
//! acceptance test target. Every check uses a fixed seed.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::channel::{gain_scan, make_channel, symmetric_theta_grid, Channel};
use crate::geometry::{complex_distance, spheroidal_coords};
use crate::propagator::{extended_propagator, far_zone_propagator, BeamProfile};
use crate::signals::{halving_ladder, DrivingSignal};
use crate::spacetime::{ConeVector, FourVector, RealEvent, Vec3};
use crate::wavelet::{convergence_order, WaveletField};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(id: u32, name: &'static str, passed: bool, detail: String) -> Self {
        Self { id, name, passed, detail }
    }
}

impl std::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2} {:<28} {}", self.id, self.name, self.detail)
    }
}

pub type Check = fn() -> CheckOutcome;

/// All library-level checks, in order.
pub const CHECKS: [Check; 11] = [
    check_distance_identities,
    check_distance_bounds,
    check_spheroidal_residuals,
    check_wave_residual_order,
    check_boundary_jump,
    check_translation_invariance,
    check_bandwidth_chain,
    check_line_of_sight,
    check_pattern,
    check_far_zone_convergence,
    check_dual_path_signal,
];

pub fn run_all() -> Vec<CheckOutcome> {
    CHECKS.iter().map(|c| c()).collect()
}

fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + stream)
}

fn unit_vector(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    10f64.powf(rng.random_range(lo.log10()..hi.log10()))
}

fn random_interior(rng: &mut ChaCha8Rng, max_aperture: f64) -> FourVector {
    let a = rng.random_range(0.0..max_aperture);
    let slack = log_uniform(rng, 1e-2, 2.0);
    FourVector::new(unit_vector(rng) * a, a + slack)
}

/// 1: `p² - q² = r² - a²` and `pq = a x₃` on 10⁵ random points.
pub fn check_distance_identities() -> CheckOutcome {
    let mut rng = rng(1);
    let mut worst = 0.0f64;
    for _ in 0..100_000 {
        let a = log_uniform(&mut rng, 0.1, 10.0);
        let y = unit_vector(&mut rng) * a;
        let x = unit_vector(&mut rng) * a * log_uniform(&mut rng, 1e-2, 1e2);
        let cd = complex_distance(&x, &y).expect("a > 0");
        let (r, x3) = (x.norm(), x.dot(&y) / a);
        let scale = r * r + a * a;
        let e1 = ((cd.p * cd.p - cd.q * cd.q) - (r * r - a * a)).abs() / scale;
        let e2 = (cd.p * cd.q - a * x3).abs() / scale;
        worst = worst.max(e1).max(e2);
    }
    CheckOutcome::new(1, "complex-distance identities", worst <= 1e-12, format!("max rel err {worst:.3e} (tol 1e-12)"))
}

/// 2: `|p| ≤ r`, `|q| ≤ a`, equality on the axis and strict slack off it.
pub fn check_distance_bounds() -> CheckOutcome {
    let mut rng = rng(2);
    let (mut violations, mut off_axis, mut not_strict) = (0usize, 0usize, 0usize);
    for _ in 0..100_000 {
        let a = log_uniform(&mut rng, 0.1, 10.0);
        let y = unit_vector(&mut rng) * a;
        let x = unit_vector(&mut rng) * a * log_uniform(&mut rng, 1e-2, 1e2);
        let cd = complex_distance(&x, &y).expect("a > 0");
        let r = x.norm();
        if cd.p.abs() > r || cd.q.abs() > a {
            violations += 1;
        }
        let sin = x.cross(&y).norm() / (r * a);
        if sin > 0.1 {
            off_axis += 1;
            if !(cd.p.abs() < r && cd.q.abs() < a) {
                not_strict += 1;
            }
        }
    }
    let mut worst_eq = 0.0f64;
    for _ in 0..10_000 {
        let a = log_uniform(&mut rng, 0.1, 10.0);
        let axis = unit_vector(&mut rng);
        let lambda = a * log_uniform(&mut rng, 1e-2, 1e2) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let (x, y) = (axis * lambda, axis * a);
        let cd = complex_distance(&x, &y).expect("a > 0");
        let r = x.norm();
        worst_eq = worst_eq.max((cd.p - r).abs() / r).max((cd.q.abs() - a).abs() / a);
    }
    let passed = violations == 0 && not_strict == 0 && worst_eq <= 1e-12;
    CheckOutcome::new(
        2,
        "complex-distance bounds",
        passed,
        format!(
            "{violations} bound violations; {not_strict}/{off_axis} off-axis without slack; on-axis equality err {worst_eq:.2e}"
        ),
    )
}

/// 3: spheroid and hyperboloid identities at 10⁴ regular points.
pub fn check_spheroidal_residuals() -> CheckOutcome {
    let mut rng = rng(3);
    let mut worst = 0.0f64;
    let mut n = 0;
    while n < 10_000 {
        let a = log_uniform(&mut rng, 0.1, 10.0);
        let y = unit_vector(&mut rng) * a;
        let dir = unit_vector(&mut rng);
        let cos = dir.dot(&y) / a;
        // off the axis and away from the plane of the cut
        if cos.abs() < 0.05 || cos.abs() > 0.95 {
            continue;
        }
        let x = dir * a * log_uniform(&mut rng, 0.1, 10.0);
        let sc = spheroidal_coords(&x, &y).expect("a > 0");
        let (Some(e), Some(h)) = (sc.spheroid_residual(), sc.hyperboloid_residual()) else {
            continue;
        };
        worst = worst.max(e.abs()).max(h.abs());
        n += 1;
    }
    CheckOutcome::new(3, "spheroid/hyperboloid residuals", worst <= 1e-10, format!("max residual {worst:.3e} (tol 1e-10)"))
}

/// 4: `□W → 0` at second order away from the cut, for two signals.
pub fn check_wave_residual_order() -> CheckOutcome {
    let mut rng = rng(4);
    let hs = [1e-2, 5e-3, 2.5e-3];
    let signals = [DrivingSignal::delta(0), DrivingSignal::gaussian(0.0, 1.0, 1.0).expect("valid")];
    let mut worst = f64::INFINITY;
    let mut failures = Vec::new();
    for sig in &signals {
        let mut n = 0;
        while n < 20 {
            let y = random_interior(&mut rng, 1.0);
            if y.space.norm() < 0.1 {
                continue;
            }
            let y = ConeVector::new(y).expect("interior");
            let field = WaveletField::new(sig.clone(), y).expect("interior");
            let dir = unit_vector(&mut rng);
            let cos = dir.dot(&y.space()) / y.aperture();
            if cos.abs() < 0.2 {
                continue;
            }
            let r = rng.random_range(1.5..5.0);
            let t = r + rng.random_range(-1.5..1.5);
            let x = RealEvent { space: dir * r, time: t };
            let res: Result<Vec<f64>, _> = hs.iter().map(|&h| field.wave_residual(&x, h).map(|c| c.norm())).collect();
            let res = match res {
                Ok(res) => res,
                Err(Error::StencilPlacement(_) | Error::NearBranchCircle { .. }) => continue,
                Err(e) => {
                    failures.push(format!("{sig:?} at {x:?}: {e}"));
                    n += 1;
                    continue;
                }
            };
            let order = convergence_order(&hs, &res);
            if !(order >= 1.8) {
                failures.push(format!("{sig:?} at {x:?}: order {order:.3}"));
            }
            worst = worst.min(order);
            n += 1;
        }
    }
    CheckOutcome::new(
        4,
        "wave-equation residual order",
        failures.is_empty(),
        if failures.is_empty() {
            format!("min order {worst:.3} over 40 points (need >= 1.8)")
        } else {
            failures.join("; ")
        },
    )
}

/// 5: extrapolated jump across real spacetime equals `g₀(t - r)/(4πr)`.
pub fn check_boundary_jump() -> CheckOutcome {
    let g0 = DrivingSignal::gaussian(0.0, 1.0, 1.0).expect("valid");
    let y = ConeVector::new(FourVector::new(Vec3::new(0.0, 0.0, 0.5), 1.0)).expect("interior");
    let field = WaveletField::new(g0.clone(), y).expect("interior");
    let eps = halving_ladder(0.1, 6);
    let dir = Vec3::new(0.6, 0.0, 0.8);
    let mut worst = 0.0f64;
    let mut errors = Vec::new();
    for r in [1.0, 1.5, 2.0, 2.5, 3.0] {
        for t in [1.5, 2.0, 2.5, 3.0, 3.5] {
            let x = RealEvent { space: dir * r, time: t };
            let expected = g0.value(t - r).expect("gaussian") / (4.0 * PI * r);
            match field.boundary_jump(&x, &eps) {
                Ok(j) => worst = worst.max((j - expected).norm() / expected),
                Err(e) => errors.push(format!("r={r} t={t}: {e}")),
            }
        }
    }
    let reference = (-0.125f64).exp() / (8.0 * PI);
    let x = RealEvent { space: Vec3::new(0.0, 0.0, 2.0), time: 2.5 };
    let ref_err = match field.boundary_jump(&x, &eps) {
        Ok(j) => (j - reference).norm() / reference,
        Err(e) => {
            errors.push(format!("reference case: {e}"));
            f64::INFINITY
        }
    };
    let passed = errors.is_empty() && worst <= 1e-6 && ref_err <= 1e-6;
    let detail = if errors.is_empty() {
        format!("max rel err {worst:.2e} on 5x5 grid; r=2,t=2.5 rel err {ref_err:.2e} vs {reference:.6e} (tol 1e-6)")
    } else {
        errors.join("; ")
    };
    CheckOutcome::new(5, "hyperfunction boundary jump", passed, detail)
}

fn random_channel(rng: &mut ChaCha8Rng) -> Channel {
    let center = |rng: &mut ChaCha8Rng| {
        RealEvent::new(unit_vector(rng) * rng.random_range(0.0..2.0), rng.random_range(-1.0..1.0)).expect("finite")
    };
    loop {
        let (xe, xr) = (center(rng), center(rng));
        let xr = RealEvent::new(xr.space + unit_vector(rng) * rng.random_range(3.0..6.0), xr.time + 4.0).expect("finite");
        let (ye, yr) = (random_interior(rng, 1.0), random_interior(rng, 1.0));
        if let Ok(ch) = make_channel(xe, ye, xr, yr) {
            return ch;
        }
    }
}

fn rel_change(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm()
}

/// 6: amplitudes are invariant under admissible complex translations.
pub fn check_translation_invariance() -> CheckOutcome {
    let mut rng = rng(6);
    let signals = [
        DrivingSignal::delta(0),
        DrivingSignal::delta(1),
        DrivingSignal::gaussian(0.0, 1.0, 1.0).expect("valid"),
    ];
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut base = random_channel(&mut rng);
    while count < 1000 {
        if count % 50 == 0 {
            base = random_channel(&mut rng);
        }
        let xi = FourVector::new(unit_vector(&mut rng) * rng.random_range(0.0..2.0), rng.random_range(-2.0..2.0));
        let eta = FourVector::new(unit_vector(&mut rng) * rng.random_range(0.0..0.5), rng.random_range(-0.5..0.5));
        let Ok(moved) = base.translate(&xi, &eta) else {
            continue;
        };
        let sig = &signals[count % signals.len()];
        let (a, b) = (base.amplitude(sig), moved.amplitude(sig));
        if let (Ok(a), Ok(b)) = (a, b) {
            worst = worst.max(rel_change(a, b));
            count += 1;
        }
    }
    let mut trio = 0.0f64;
    for _ in 0..20 {
        let a = random_channel(&mut rng);
        let b = a.with_point_receiver().expect("admissible");
        let c = a.with_point_emitter().expect("admissible");
        for sig in &signals {
            let amp = a.amplitude(sig).expect("regular");
            trio = trio.max(rel_change(amp, b.amplitude(sig).expect("regular")));
            trio = trio.max(rel_change(amp, c.amplitude(sig).expect("regular")));
        }
    }
    let passed = worst <= 1e-14 && trio <= 1e-14;
    CheckOutcome::new(
        6,
        "complex translation invariance",
        passed,
        format!("max rel change {worst:.2e} over 1000 shifts; A/B/C trio {trio:.2e} (tol 1e-14)"),
    )
}

/// 7: `T ≥ T_e + T_r` and `B ≤ 1/(T_e+T_r) < min(B_e, B_r)`.
pub fn check_bandwidth_chain() -> CheckOutcome {
    let mut rng = rng(7);
    let mut failures = 0usize;
    let mut min_slack = f64::INFINITY;
    for _ in 0..10_000 {
        let ch = random_channel(&mut rng);
        let m = ch.metrics();
        let sum = m.emitter_duration + m.receiver_duration;
        let slack = (m.duration - sum) / m.duration;
        min_slack = min_slack.min(slack);
        let chain = m.bandwidth <= (1.0 / sum) * (1.0 + 1e-12) && 1.0 / sum < m.emitter_bandwidth.min(m.receiver_bandwidth);
        if slack < -1e-12 || !chain {
            failures += 1;
        }
    }
    let mut worst_eq = 0.0f64;
    for _ in 0..1000 {
        let axis = unit_vector(&mut rng);
        let (ae, ar) = (rng.random_range(0.01..2.0), rng.random_range(0.01..2.0));
        let ye = FourVector::new(axis * ae, ae + rng.random_range(0.01..2.0));
        let yr = FourVector::new(axis * ar, ar + rng.random_range(0.01..2.0));
        let ch = make_channel(RealEvent::origin(), ye, RealEvent::new(axis * 5.0, 5.0).expect("finite"), yr).expect("valid");
        let m = ch.metrics();
        let sum = m.emitter_duration + m.receiver_duration;
        worst_eq = worst_eq.max((m.duration - sum).abs() / m.duration);
    }
    let passed = failures == 0 && worst_eq <= 1e-12;
    CheckOutcome::new(
        7,
        "triangle / bandwidth chain",
        passed,
        format!("{failures} failures in 10000; min rel slack {min_slack:.2e}; parallel equality err {worst_eq:.2e}"),
    )
}

/// 8: peak transmission is maximal for a line-of-sight receiver.
pub fn check_line_of_sight() -> CheckOutcome {
    let grid = symmetric_theta_grid(721);
    let mid = 360;
    let scan = match gain_scan(1.0, 2.0, 1.0, 2.0, 100.0, &grid) {
        Ok(s) => s,
        Err(e) => return CheckOutcome::new(8, "line-of-sight maximization", false, e.to_string()),
    };
    let amp: Vec<f64> = scan.iter().map(|g| g.amplitude).collect();
    let unique = amp.iter().enumerate().all(|(k, &v)| k == mid || v < amp[mid]);
    let right = amp[mid..].windows(2).all(|w| w[1] <= w[0]);
    let left = amp[..=mid].windows(2).all(|w| w[1] >= w[0]);
    let passed = unique && left && right;
    CheckOutcome::new(
        8,
        "line-of-sight maximization",
        passed,
        format!("argmax unique at theta=0: {unique}; monotone left {left}, right {right}; 721 points"),
    )
}

/// 9: no sidelobes and the focal-conic product `F(θ)(s - a cosθ)`.
pub fn check_pattern() -> CheckOutcome {
    let mut decreasing = true;
    let mut worst = 0.0f64;
    for (s, a) in [(2.0, 1.0), (1.01, 1.0), (5.0, 0.5), (1.5, 1.2)] {
        let beam = BeamProfile::new(s, a).expect("s > a");
        let n = 20_000;
        let f: Vec<f64> = (1..n).map(|k| beam.pattern(PI * k as f64 / n as f64)).collect();
        decreasing &= f.windows(2).all(|w| w[1] < w[0]);
        let c = 1.0 / (8.0 * PI * PI);
        for k in 0..=n {
            let th = PI * k as f64 / n as f64;
            worst = worst.max((beam.pattern(th) * (s - a * th.cos()) - c).abs() / c);
        }
    }
    CheckOutcome::new(
        9,
        "radiation pattern",
        decreasing && worst <= 1e-12,
        format!("strictly decreasing: {decreasing}; conic product rel err {worst:.2e} (tol 1e-12)"),
    )
}

/// 10: extended propagator approaches the far-zone beam at rate `O(a/r)`.
pub fn check_far_zone_convergence() -> CheckOutcome {
    let (a, s) = (1.0, 2.0);
    let y = Vec3::new(0.0, 0.0, a);
    let mut worst_err = 0.0f64;
    let mut ratios = Vec::new();
    for th in [0.0f64, 0.4, 0.9, 1.4, 2.0, 2.8] {
        let dir = Vec3::new(th.sin(), 0.0, th.cos());
        let rel = |r: f64| {
            let exact = extended_propagator(&(dir * r), &y, r, s).expect("regular");
            let far = far_zone_propagator(r, th, r, s, a).expect("valid");
            (exact - far).norm() / far.norm()
        };
        let (e1, e2) = (rel(100.0 * a), rel(200.0 * a));
        worst_err = worst_err.max(e1);
        ratios.push(e2 / e1);
    }
    let ratios_ok = ratios.iter().all(|r| (0.4..=0.6).contains(r));
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &r| (l.min(r), h.max(r)));
    CheckOutcome::new(
        10,
        "far-zone convergence",
        worst_err <= 0.02 && ratios_ok,
        format!("max rel err at r=100a {worst_err:.3e} (tol 2e-2); doubling ratio in [{lo:.3}, {hi:.3}] (need [0.4, 0.6])"),
    )
}

/// 11: Cauchy-integral and one-sided spectral evaluations agree.
pub fn check_dual_path_signal() -> CheckOutcome {
    let signals = [
        DrivingSignal::gaussian(0.0, 1.0, 1.0).expect("valid"),
        DrivingSignal::gaussian(0.5, 0.3, -2.0).expect("valid"),
    ];
    let mut worst = 0.0f64;
    let mut errors = Vec::new();
    for g0 in &signals {
        for i in 0..=12 {
            let t = -3.0 + 0.5 * i as f64;
            for s in [0.1, 0.2, 0.5, 1.0, 2.0, 3.5, 5.0] {
                match (g0.analytic_signal(Complex64::new(t, -s)), g0.spectral_signal(t, s)) {
                    (Ok(q), Ok(f)) => worst = worst.max((q - f).norm() / f.norm()),
                    (Err(e), _) | (_, Err(e)) => errors.push(format!("t={t} s={s}: {e}")),
                }
            }
        }
    }
    CheckOutcome::new(
        11,
        "analytic signal dual path",
        errors.is_empty() && worst <= 1e-6,
        if errors.is_empty() { format!("max rel diff {worst:.2e} (tol 1e-6)") } else { errors.join("; ") },
    )
}
