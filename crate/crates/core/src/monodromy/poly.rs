use num_complex::Complex64;

use crate::error::{Error, Result};

/// A complex polynomial, coefficients in ascending order of degree.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialMap {
    coeffs: Vec<Complex64>,
}

/// Tolerance for detecting a repeated point of a critical orbit.
pub const ORBIT_TOLERANCE: f64 = 1e-9;
/// Maximum length of a critical orbit before giving up on finiteness.
pub const ORBIT_MAX_ITER: usize = 200;

impl PolynomialMap {
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| c.norm() == 0.0) {
            coeffs.pop();
        }
        if coeffs.len() < 3 {
            return Err(Error::Geometry("polynomial degree must be at least 2".into()));
        }
        Ok(PolynomialMap { coeffs })
    }

    /// `z² + c`.
    pub fn quadratic(c: Complex64) -> Self {
        PolynomialMap {
            coeffs: vec![c, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `Some(c)` when the map is exactly `z² + c`.
    pub fn quadratic_parameter(&self) -> Option<Complex64> {
        (self.degree() == 2 && self.coeffs[1].norm() == 0.0 && self.coeffs[2] == Complex64::new(1.0, 0.0))
            .then_some(self.coeffs[0])
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, &c)| acc * z + c * k as f64)
    }

    fn derivative_coeffs(&self) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect()
    }

    /// Taylor coefficients of `f(r + u)` in `u`.
    fn taylor_at(&self, r: Complex64) -> Vec<Complex64> {
        let mut b = self.coeffs.clone();
        let n = b.len();
        for k in 0..n {
            for j in (k..n - 1).rev() {
                let t = b[j + 1] * r;
                b[j] += t;
            }
        }
        b
    }

    pub fn critical_points(&self) -> Vec<Complex64> {
        polynomial_roots(&self.derivative_coeffs())
    }

    /// All solutions of `f(z) = w`.
    pub fn preimages(&self, w: Complex64) -> Vec<Complex64> {
        if let Some(c) = self.quadratic_parameter() {
            let s = (w - c).sqrt();
            return vec![s, -s];
        }
        let mut shifted = self.coeffs.clone();
        shifted[0] -= w;
        polynomial_roots(&shifted)
    }

    /// Union of the forward orbits of the critical values, in orbit order.
    /// Errors if an orbit is not eventually periodic within the iteration
    /// budget.
    pub fn postcritical_set(&self) -> Result<Vec<Complex64>> {
        let mut set: Vec<Complex64> = Vec::new();
        for c in self.critical_points() {
            let mut z = self.eval(c);
            let mut closed = false;
            for _ in 0..ORBIT_MAX_ITER {
                if set.iter().any(|p| (p - z).norm() <= ORBIT_TOLERANCE) {
                    closed = true;
                    break;
                }
                if !z.norm().is_finite() || z.norm() > 1e8 {
                    break;
                }
                set.push(z);
                z = self.eval(z);
            }
            if !closed {
                return Err(Error::Geometry(format!(
                    "critical orbit of {c} is not finite within {ORBIT_MAX_ITER} iterations; supply the postcritical set"
                )));
            }
        }
        Ok(set)
    }

    /// Continues a solution of `f(z) = w` from a nearby point `prev`.
    /// Returns the new solution and a lower bound on its distance to the
    /// other solutions.
    pub(crate) fn continue_root(&self, prev: Complex64, w: Complex64) -> Option<(Complex64, f64)> {
        if let Some(c) = self.quadratic_parameter() {
            let s = (w - c).sqrt();
            let z = if (s - prev).norm() <= (s + prev).norm() { s } else { -s };
            return Some((z, 2.0 * s.norm()));
        }
        let mut z = prev;
        let mut converged = false;
        for _ in 0..60 {
            let d = self.eval_derivative(z);
            if d.norm() == 0.0 {
                return None;
            }
            let dz = (self.eval(z) - w) / d;
            z -= dz;
            if dz.norm() <= 1e-15 * (1.0 + z.norm()) {
                converged = true;
                break;
            }
        }
        if !converged {
            return None;
        }
        let b = self.taylor_at(z);
        let b1 = b[1].norm();
        let rest = b[2..].iter().map(|c| c.norm()).fold(0.0, f64::max);
        Some((z, b1 / (b1 + rest)))
    }
}

/// Roots of a polynomial with ascending coefficients (Aberth iteration).
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut a = coeffs.to_vec();
    while a.last().is_some_and(|c| c.norm() == 0.0) {
        a.pop();
    }
    let n = a.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = a[n];
    let a: Vec<Complex64> = a.iter().map(|c| c / lead).collect();
    if n == 1 {
        return vec![-a[0]];
    }
    let eval = |z: Complex64| a.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    let deriv = |z: Complex64| {
        a.iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, &c)| acc * z + c * k as f64)
    };
    let bound = 1.0 + a[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(bound * 0.5, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let p = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / deriv(z[i]);
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= step;
            moved = moved.max(step.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-16 {
            break;
        }
    }
    z
}
