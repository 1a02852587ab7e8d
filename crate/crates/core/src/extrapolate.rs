//! Polynomial (repeated Richardson) extrapolation to a vanishing parameter.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolation {
    pub value: Complex64,
    /// Difference between the two highest-order estimates.
    pub error: f64,
}

/// Neville's table evaluated at `h = 0` for samples `values[i] = F(steps[i])`.
///
/// Assumes `F(h) = F(0) + c₁h + c₂h² + …`; the steps must be distinct.
pub fn extrapolate_to_zero(steps: &[f64], values: &[Complex64]) -> Extrapolation {
    assert_eq!(steps.len(), values.len());
    assert!(steps.len() >= 2, "need at least two samples");
    let n = steps.len();
    let mut table = values.to_vec();
    // After column k, table[i] holds the degree-k interpolant through i..=i+k.
    let mut previous_best = table[n - 1];
    for k in 1..n {
        previous_best = table[n - k];
        for i in 0..n - k {
            let (hi, hk) = (steps[i], steps[i + k]);
            table[i] = (table[i + 1] * hi - table[i] * hk) / (hi - hk);
        }
    }
    Extrapolation { value: table[0], error: (table[0] - previous_best).norm() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_polynomial_limit_exactly() {
        let steps = [0.1, 0.05, 0.025, 0.0125];
        let vals: Vec<Complex64> = steps
            .iter()
            .map(|&h| Complex64::new(2.0 + 3.0 * h - 7.0 * h * h + h * h * h, -1.0 + h))
            .collect();
        let ex = extrapolate_to_zero(&steps, &vals);
        assert!((ex.value - Complex64::new(2.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn smooth_function_converges() {
        let steps: Vec<f64> = (0..6).map(|k| 0.2 / 2f64.powi(k)).collect();
        let vals: Vec<Complex64> = steps.iter().map(|&h| Complex64::new((h.exp() - 1.0) / h, 0.0)).collect();
        let ex = extrapolate_to_zero(&steps, &vals);
        assert!((ex.value.re - 1.0).abs() < 1e-12);
        assert!(ex.error < 1e-9);
    }
}
