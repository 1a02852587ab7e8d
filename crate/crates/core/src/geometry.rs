//! Complex distance `r̃ = sqrt(z⃗·z⃗)` for `z⃗ = x⃗ - i y⃗` and its branch structure.
//!
//! With `a = |y⃗|` and `x₃ = x⃗·ŷ`, `r̃² = r² - a² - 2i a x₃`. Writing `r̃ = p - iq`,
//! level sets of `p` are oblate spheroids and level sets of `q` are one-sheeted
//! hyperboloids, both focused on the branch circle `r = a, x₃ = 0`. The branch
//! with `p ≥ 0` is used throughout; its cut is the flat disk `r ≤ a, x₃ = 0`,
//! on which the value is taken as the `x₃ → 0⁺` limit.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spacetime::Vec3;

/// Default guard radius for the branch circle, relative to `a`.
pub const DEFAULT_NEAR_CIRCLE_REL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryConfig {
    /// Points with `|r̃| < near_circle_rel · a` are flagged as near the branch circle.
    pub near_circle_rel: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self { near_circle_rel: DEFAULT_NEAR_CIRCLE_REL }
    }
}

/// `r̃ = p - iq` on the `p ≥ 0` branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexDistance {
    pub p: f64,
    pub q: f64,
    /// The point lies exactly on the cut disk; `q` is the `x₃ → 0⁺` limit.
    pub on_cut: bool,
    /// `|r̃|` is below the configured guard.
    pub near_circle: bool,
}

impl ComplexDistance {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.p, -self.q)
    }

    pub fn modulus(&self) -> f64 {
        self.p.hypot(self.q)
    }

    /// The real distance, used when the extension has no spatial part.
    fn real(r: f64) -> Self {
        Self { p: r, q: 0.0, on_cut: false, near_circle: r == 0.0 }
    }
}

/// Splits `x⃗` into `(r, a, x₃)` relative to `y⃗`.
fn decompose(x: &Vec3, y: &Vec3) -> (f64, f64, f64) {
    let r = x.norm();
    let a = y.norm();
    let x3 = if a > 0.0 { x.dot(y) / a } else { 0.0 };
    (r, a, x3)
}

fn principal_root(r: f64, a: f64, x3: f64, cfg: &GeometryConfig) -> ComplexDistance {
    // r̃² = w = (r - a)(r + a) - 2i a x₃; principal root with Re ≥ 0.
    let re_w = (r - a) * (r + a);
    let im_w = -2.0 * a * x3;
    let abs_w = re_w.hypot(im_w);
    let (mut p, mut q) = if re_w >= 0.0 {
        let p = ((abs_w + re_w) * 0.5).sqrt();
        let q = if p > 0.0 { a * x3 / p } else { 0.0 };
        (p, q)
    } else {
        let q_abs = ((abs_w - re_w) * 0.5).sqrt();
        // x₃ = ±0 lands on the cut; take the upper-side limit.
        let q = if x3 < 0.0 { -q_abs } else { q_abs };
        ((a * x3 / q).abs(), q)
    };
    // |p| ≤ r and |q| ≤ a hold exactly; remove rounding excursions.
    p = p.min(r);
    q = q.clamp(-a, a);
    ComplexDistance {
        p,
        q,
        on_cut: im_w == 0.0 && re_w < 0.0,
        near_circle: abs_w.sqrt() < cfg.near_circle_rel * a,
    }
}

pub fn complex_distance(x: &Vec3, y: &Vec3) -> Result<ComplexDistance> {
    complex_distance_with(x, y, &GeometryConfig::default())
}

pub fn complex_distance_with(x: &Vec3, y: &Vec3, cfg: &GeometryConfig) -> Result<ComplexDistance> {
    let (r, a, x3) = decompose(x, y);
    if !(r.is_finite() && a.is_finite()) {
        return Err(Error::NonFinite("complex distance input"));
    }
    if a == 0.0 {
        return Err(Error::DegenerateExtension);
    }
    Ok(principal_root(r, a, x3, cfg))
}

/// Like [`complex_distance_with`], but falls back to the real distance `r̃ = r`
/// when `y⃗ = 0`. `near_circle` then flags the origin.
pub fn complex_distance_or_real(x: &Vec3, y: &Vec3, cfg: &GeometryConfig) -> Result<ComplexDistance> {
    if y.iter().all(|&c| c == 0.0) {
        let r = x.norm();
        if !r.is_finite() {
            return Err(Error::NonFinite("complex distance input"));
        }
        return Ok(ComplexDistance::real(r));
    }
    complex_distance_with(x, y, cfg)
}

/// Oblate-spheroidal description of a point relative to `y⃗`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpheroidalCoords {
    pub p: f64,
    pub q: f64,
    /// Azimuth about `ŷ`, zero on the axis.
    pub phi: f64,
    /// Cylindrical radius orthogonal to `ŷ`.
    pub rho: f64,
    pub x3: f64,
    pub a: f64,
}

impl SpheroidalCoords {
    /// `ρ²/(a²+p²) + x₃²/p² - 1`, undefined on the cut (`p = 0`).
    pub fn spheroid_residual(&self) -> Option<f64> {
        if self.p == 0.0 {
            return None;
        }
        let (a2, p2) = (self.a * self.a, self.p * self.p);
        Some(self.rho * self.rho / (a2 + p2) + self.x3 * self.x3 / p2 - 1.0)
    }

    /// `ρ²/(a²-q²) - x₃²/q² - 1`, undefined on the axis and in the plane `x₃ = 0`.
    pub fn hyperboloid_residual(&self) -> Option<f64> {
        let gap = (self.a - self.q.abs()) * (self.a + self.q.abs());
        if self.q == 0.0 || gap == 0.0 {
            return None;
        }
        Some(self.rho * self.rho / gap - self.x3 * self.x3 / (self.q * self.q) - 1.0)
    }
}

/// Right-handed orthonormal pair spanning the plane orthogonal to the unit vector `n`.
fn orthonormal_pair(n: &Vec3) -> (Vec3, Vec3) {
    let sign = 1.0f64.copysign(n.z);
    let k = -1.0 / (sign + n.z);
    let b = n.x * n.y * k;
    (
        Vec3::new(1.0 + sign * n.x * n.x * k, sign * b, -sign * n.x),
        Vec3::new(b, sign + n.y * n.y * k, -n.y),
    )
}

pub fn spheroidal_coords(x: &Vec3, y: &Vec3) -> Result<SpheroidalCoords> {
    let cd = complex_distance(x, y)?;
    let a = y.norm();
    let axis = y / a;
    let (e1, e2) = orthonormal_pair(&axis);
    let (u, v) = (x.dot(&e1), x.dot(&e2));
    let rho = u.hypot(v);
    let phi = if rho == 0.0 { 0.0 } else { v.atan2(u) };
    Ok(SpheroidalCoords { p: cd.p, q: cd.q, phi, rho, x3: x.dot(&axis), a })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchClass {
    Regular,
    OnCut,
    OnCircle,
}

/// Locates `x⃗` relative to the branch circle and the cut disk of `y⃗`.
pub fn branch_classify(x: &Vec3, y: &Vec3, tol: f64) -> BranchClass {
    let (r, a, x3) = decompose(x, y);
    if a == 0.0 {
        return BranchClass::Regular;
    }
    let cd = principal_root(r, a, x3, &GeometryConfig::default());
    if cd.modulus() < tol {
        BranchClass::OnCircle
    } else if x3.abs() <= tol && r < a {
        BranchClass::OnCut
    } else {
        BranchClass::Regular
    }
}

/// Far-zone approximation `r̃ ≈ r - i a cosθ`, with `cosθ = x̂·ŷ`.
pub fn far_zone_distance(x: &Vec3, y: &Vec3) -> Result<Complex64> {
    let (r, a, x3) = decompose(x, y);
    if a == 0.0 {
        return Err(Error::DegenerateExtension);
    }
    if r == 0.0 {
        return Err(Error::UndefinedDirection);
    }
    Ok(Complex64::new(r, -a * x3 / r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn v(x: f64, y: f64, z: f64) -> Vec3 {
        Vec3::new(x, y, z)
    }

    /// Principal root by polar decomposition, independent of `principal_root`.
    fn polar_sqrt(re: f64, im: f64) -> (f64, f64) {
        let m = re.hypot(im).sqrt();
        let half = im.atan2(re) / 2.0;
        (m * half.cos(), m * half.sin())
    }

    #[test]
    fn on_axis_distance() {
        let cd = complex_distance(&v(0.0, 0.0, 3.0), &v(0.0, 0.0, 1.0)).unwrap();
        assert_relative_eq!(cd.p, 3.0, max_relative = 1e-15);
        assert_relative_eq!(cd.q, 1.0, max_relative = 1e-15);
        assert!(!cd.on_cut && !cd.near_circle);
    }

    #[test]
    fn disk_center_uses_upper_limit() {
        let cd = complex_distance(&v(0.0, 0.0, 0.0), &v(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(cd.p, 0.0);
        assert_eq!(cd.q, 1.0);
        assert!(cd.on_cut);
    }

    #[test]
    fn off_axis_matches_polar_oracle() {
        let cd = complex_distance(&v(1.0, 0.0, 1.0), &v(0.0, 0.0, 1.0)).unwrap();
        let (re, im) = polar_sqrt(1.0, -2.0);
        assert_relative_eq!(cd.p, re, max_relative = 1e-14);
        assert_relative_eq!(cd.q, -im, max_relative = 1e-14);
        assert_relative_eq!(cd.p, 1.27202, epsilon = 1e-5);
        assert_relative_eq!(cd.q, 0.78615, epsilon = 1e-5);
        assert_relative_eq!(cd.p * cd.p - cd.q * cd.q, 1.0, max_relative = 1e-14);
        assert_relative_eq!(cd.p * cd.q, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn zero_extension_is_rejected() {
        assert_eq!(complex_distance(&v(1.0, 0.0, 0.0), &Vec3::zeros()), Err(Error::DegenerateExtension));
        let cd = complex_distance_or_real(&v(3.0, 4.0, 0.0), &Vec3::zeros(), &GeometryConfig::default()).unwrap();
        assert_eq!((cd.p, cd.q), (5.0, 0.0));
    }

    #[test]
    fn branch_circle_is_flagged() {
        let cd = complex_distance(&v(1.0, 0.0, 0.0), &v(0.0, 0.0, 1.0)).unwrap();
        assert_eq!((cd.p, cd.q), (0.0, 0.0));
        assert!(cd.near_circle);
        assert!(!cd.on_cut);
    }

    #[test]
    fn spheroidal_examples() {
        let sc = spheroidal_coords(&v(0.0, 0.0, 3.0), &v(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(sc.rho, 0.0);
        assert_eq!(sc.x3, 3.0);
        assert_eq!(sc.phi, 0.0);

        let sc = spheroidal_coords(&v(1.0, 0.0, 0.0), &v(0.0, 0.0, 1.0)).unwrap();
        assert_eq!((sc.rho, sc.x3, sc.p, sc.q), (1.0, 0.0, 0.0, 0.0));

        let sc = spheroidal_coords(&v(1.0, 0.0, 1.0), &v(0.0, 0.0, 1.0)).unwrap();
        assert_eq!((sc.rho, sc.x3), (1.0, 1.0));
        assert!(sc.spheroid_residual().unwrap().abs() < 1e-10);
        assert!(sc.hyperboloid_residual().unwrap().abs() < 1e-10);
    }

    #[test]
    fn azimuth_about_tilted_axis() {
        let sc = spheroidal_coords(&v(0.0, 2.0, 0.0), &v(0.0, 0.0, 1.0)).unwrap();
        assert_relative_eq!(sc.phi, std::f64::consts::FRAC_PI_2);
        let y = v(1.0, 1.0, 1.0);
        let x = v(1.0, -1.0, 0.0);
        let sc = spheroidal_coords(&x, &y).unwrap();
        assert_relative_eq!(sc.rho, 2f64.sqrt(), max_relative = 1e-14);
        assert!(sc.x3.abs() < 1e-15);
    }

    #[test]
    fn branch_classify_examples() {
        let y = v(0.0, 0.0, 1.0);
        assert_eq!(branch_classify(&v(1.0, 0.0, 0.0), &y, 1e-9), BranchClass::OnCircle);
        assert_eq!(branch_classify(&v(0.5, 0.0, 0.0), &y, 1e-9), BranchClass::OnCut);
        assert_eq!(branch_classify(&v(0.0, 0.0, 5.0), &y, 1e-9), BranchClass::Regular);
        assert_eq!(branch_classify(&v(2.0, 0.0, 0.0), &y, 1e-9), BranchClass::Regular);
        assert_eq!(branch_classify(&v(0.5, 0.0, 1e-3), &y, 1e-9), BranchClass::Regular);
    }

    #[test]
    fn far_zone_examples() {
        let y = v(0.0, 0.0, 1.0);
        assert_eq!(far_zone_distance(&v(0.0, 0.0, 100.0), &y).unwrap(), Complex64::new(100.0, -1.0));
        assert_eq!(far_zone_distance(&v(100.0, 0.0, 0.0), &y).unwrap(), Complex64::new(100.0, 0.0));
        assert_eq!(far_zone_distance(&Vec3::zeros(), &y), Err(Error::UndefinedDirection));
    }

    #[test]
    fn far_zone_is_exact_on_axis() {
        // r̃ = sqrt((r - ia)²) = r - ia along ŷ
        let y = v(0.0, 0.0, 1.0);
        let x = v(0.0, 0.0, 10.0);
        let exact = complex_distance(&x, &y).unwrap().value();
        let far = far_zone_distance(&x, &y).unwrap();
        assert!((exact - far).norm() < 1e-14);
    }

    #[test]
    fn far_zone_error_halves_with_distance() {
        let y = v(0.0, 0.0, 1.0);
        let dir = v(0.6, 0.0, 0.8);
        let err = |r: f64| {
            let x = dir * r;
            (complex_distance(&x, &y).unwrap().value() - far_zone_distance(&x, &y).unwrap()).norm()
        };
        for r in [50.0, 100.0, 200.0, 400.0] {
            let ratio = err(2.0 * r) / err(r);
            assert!((0.4..=0.6).contains(&ratio), "r={r} ratio={ratio}");
            // leading term a² sin²θ / 2r
            assert_relative_eq!(err(r), 0.36 / (2.0 * r), max_relative = 1e-2);
        }
    }

    #[test]
    fn sign_flips_across_cut() {
        let y = v(0.0, 0.0, 1.0);
        for rho in [0.0, 0.3, 0.9] {
            let above = complex_distance(&v(rho, 0.0, 1e-12), &y).unwrap();
            let below = complex_distance(&v(rho, 0.0, -1e-12), &y).unwrap();
            let expected = (1.0 - rho * rho).sqrt();
            assert_relative_eq!(above.q, expected, max_relative = 1e-9);
            assert_relative_eq!(below.q, -expected, max_relative = 1e-9);
            assert!(above.p < 1e-11 && below.p < 1e-11);
        }
    }

    proptest! {
        #[test]
        fn identities_and_bounds(
            x in prop::array::uniform3(-10.0..10.0f64),
            y in prop::array::uniform3(-3.0..3.0f64),
        ) {
            let (x, y) = (Vec3::from(x), Vec3::from(y));
            let a = y.norm();
            prop_assume!(a > 1e-6);
            let cd = complex_distance(&x, &y).unwrap();
            let r = x.norm();
            let x3 = x.dot(&y) / a;
            let scale = r * r + a * a;
            prop_assert!(cd.p >= 0.0);
            prop_assert!(((cd.p * cd.p - cd.q * cd.q) - (r * r - a * a)).abs() <= 1e-12 * scale);
            prop_assert!((cd.p * cd.q - a * x3).abs() <= 1e-12 * scale);
            prop_assert!(cd.p <= r && cd.q.abs() <= a);
        }

        #[test]
        fn squares_back_to_dot_product(
            x in prop::array::uniform3(-10.0..10.0f64),
            y in prop::array::uniform3(-3.0..3.0f64),
        ) {
            let (x, y) = (Vec3::from(x), Vec3::from(y));
            prop_assume!(y.norm() > 1e-6);
            let rt = complex_distance(&x, &y).unwrap().value();
            let zz: Complex64 = (0..3).map(|i| Complex64::new(x[i], -y[i]).powi(2)).sum();
            prop_assert!((rt * rt - zz).norm() <= 1e-12 * (x.norm_squared() + y.norm_squared()));
        }
    }
}
