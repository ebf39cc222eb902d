//! Univariate complex polynomials and simultaneous root finding.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::tolerance::ToleranceContext;
use crate::error::{Error, Result};

/// Polynomial with complex coefficients, stored lowest degree first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `z`.
    pub fn x() -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn roots(&self, tol: &ToleranceContext) -> Result<Vec<Complex64>> {
        poly_roots(&self.coeffs, tol)
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |p: &Poly, i: usize| p.coeffs.get(i).copied().unwrap_or_default();
        Poly::new((0..n).map(|i| get(self, i) + get(rhs, i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

/// All complex roots of `coeffs[0] + coeffs[1] z + ...`, with multiplicity.
///
/// Trailing exact-zero coefficients are trimmed first. Roots are found by
/// Aberth-Ehrlich iteration and then polished with a few Newton steps.
pub fn poly_roots(coeffs: &[Complex64], tol: &ToleranceContext) -> Result<Vec<Complex64>> {
    let p = Poly::new(coeffs.to_vec());
    let Some(n) = p.degree() else {
        return Err(Error::Domain("roots of the zero polynomial".into()));
    };
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain("non-finite polynomial coefficient".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    // Exact zero roots are split off so the iteration never starts at the origin.
    let zeros = p.coeffs.iter().take_while(|c| **c == Complex64::new(0.0, 0.0)).count();
    if zeros > 0 {
        let mut rest = poly_roots(&p.coeffs[zeros..], tol)?;
        rest.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), zeros));
        return Ok(rest);
    }
    let lead = p.coeffs[n];
    let monic = p.scale(lead.inv());
    let dp = monic.derivative();
    if n == 1 {
        return Ok(vec![-monic.coeffs[0]]);
    }

    // Start on a circle whose radius is the geometric mean of the root moduli.
    let start = monic.coeffs[0].norm().powf(1.0 / n as f64);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(start, theta)
        })
        .collect();

    let target = tol.root_tol;
    for _ in 0..1000 {
        let mut worst = 0.0f64;
        for i in 0..n {
            let zi = z[i];
            let pv = monic.eval(zi);
            if pv == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = pv / dp.eval(zi);
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = zi - z[j];
                    if d == Complex64::new(0.0, 0.0) {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
            let step = if denom.norm() > 0.0 && ratio.is_finite() {
                ratio / denom
            } else {
                Complex64::new(target, target)
            };
            if step.is_finite() {
                z[i] = zi - step;
                worst = worst.max(step.norm() / zi.norm().max(1.0));
            }
        }
        if worst <= target {
            break;
        }
    }

    for zi in z.iter_mut() {
        for _ in 0..3 {
            let d = dp.eval(*zi);
            if d.norm() == 0.0 {
                break;
            }
            let step = monic.eval(*zi) / d;
            if !step.is_finite() {
                break;
            }
            let candidate = *zi - step;
            if monic.eval(candidate).norm() <= monic.eval(*zi).norm() {
                *zi = candidate;
            } else {
                break;
            }
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn difference_of_squares() {
        let r = sorted(poly_roots(&[c(-1.0), c(0.0), c(1.0)], &ToleranceContext::default()).unwrap());
        assert!((r[0] - c(-1.0)).norm() < 1e-12);
        assert!((r[1] - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn meridian_quadratic() {
        let r = sorted(poly_roots(&[c(1.0), c(-3.0), c(1.0)], &ToleranceContext::default()).unwrap());
        let s5 = 5f64.sqrt();
        assert!((r[0] - c((3.0 - s5) / 2.0)).norm() < 1e-12);
        assert!((r[1] - c((3.0 + s5) / 2.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_polynomial_is_domain_error() {
        assert!(matches!(
            poly_roots(&[c(0.0), c(0.0)], &ToleranceContext::default()),
            Err(Error::Domain(_))
        ));
        assert!(poly_roots(&[c(4.0)], &ToleranceContext::default()).unwrap().is_empty());
    }

    #[test]
    fn trims_trailing_zeros_and_handles_zero_roots() {
        // z^2 (z - 2)
        let r = sorted(poly_roots(&[c(0.0), c(0.0), c(-2.0), c(1.0), c(0.0)], &ToleranceContext::default()).unwrap());
        assert_eq!(r.len(), 3);
        assert!(r[0].norm() < 1e-6 && r[1].norm() < 1e-6);
        assert!((r[2] - c(2.0)).norm() < 1e-12);
    }

    #[test]
    fn arithmetic() {
        let p = &Poly::x() - &Poly::constant(c(1.0));
        let q = &p * &p;
        assert_eq!(q.coeffs(), &[c(1.0), c(-2.0), c(1.0)]);
        assert_eq!(q.derivative().coeffs(), &[c(-2.0), c(2.0)]);
        assert_eq!(q.eval(c(3.0)), c(4.0));
    }
}
