use std::fmt;

use num_complex::Complex64;

use super::words::{fox_derivative, GroupRingElement};
use super::Presentation;
use crate::error::{Error, Result};

/// Integer polynomial in `t`, lowest degree first, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPoly {
    coeffs: Vec<i128>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<i128>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(vec![1])
    }

    /// `c t^k`.
    pub fn monomial(c: i128, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * t + c as f64)
    }

    pub fn eval_int(&self, t: i128) -> i128 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * t + c)
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let g = |p: &IntPoly, i| p.coeffs.get(i).copied().unwrap_or(0);
        IntPoly::new((0..n).map(|i| g(self, i) + g(o, i)).collect())
    }

    pub fn sub(&self, o: &IntPoly) -> IntPoly {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, k: i128) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![0i128; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPoly::new(v)
    }

    /// Exact quotient `self / d`; `None` unless `d` divides `self` in `Z[t]`.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let lead = d.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let n = self.degree()?;
        if n < dd {
            return None;
        }
        let mut q = vec![0i128; n - dd + 1];
        for k in (0..=n - dd).rev() {
            let c = rem[k + dd];
            if c % lead != 0 {
                return None;
            }
            let f = c / lead;
            q[k] = f;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= f * dc;
            }
        }
        if rem.iter().any(|&c| c != 0) {
            return None;
        }
        Some(IntPoly::new(q))
    }

    /// Removes powers of `t` and fixes the sign so the leading coefficient is positive.
    pub fn normalized(&self) -> IntPoly {
        let low = self.coeffs.iter().take_while(|&&c| c == 0).count();
        let p = IntPoly::new(self.coeffs[low.min(self.coeffs.len())..].to_vec());
        match p.coeffs.last() {
            Some(&c) if c < 0 => p.scale(-1),
            _ => p,
        }
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match (k, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{a}t")?,
                (_, 1) => write!(f, "t^{k}")?,
                _ => write!(f, "{a}t^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Image of a group-ring element under every generator `-> t`, as
/// `(lowest power, polynomial)`.
fn abelianize(x: &GroupRingElement) -> (i64, IntPoly) {
    let low = x.terms().map(|(w, _)| w.total_exponent()).min().unwrap_or(0);
    let mut p = IntPoly::zero();
    for (w, c) in x.terms() {
        let k = (w.total_exponent() - low) as usize;
        p = p.add(&IntPoly::monomial(c as i128, k));
    }
    (low, p)
}

/// Fraction-free determinant over `Z[t]`.
fn bareiss(mut m: Vec<Vec<IntPoly>>) -> Result<IntPoly> {
    let n = m.len();
    if n == 0 {
        return Ok(IntPoly::one());
    }
    let mut sign = 1i128;
    let mut prev = IntPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return Ok(IntPoly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num
                    .div_exact(&prev)
                    .ok_or_else(|| Error::Domain("inexact division in fraction-free elimination".into()))?;
            }
        }
        prev = m[k][k].clone();
    }
    Ok(m[n - 1][n - 1].scale(sign))
}

/// Alexander polynomial from the abelianized Fox matrix with the last
/// generator column deleted, normalized to lowest degree 0 and positive
/// leading coefficient.
pub fn alexander_polynomial(pres: &Presentation) -> Result<IntPoly> {
    alexander_polynomial_deleting(pres, pres.num_generators() - 1)
}

/// As [`alexander_polynomial`], deleting column `column` instead.
pub fn alexander_polynomial_deleting(pres: &Presentation, column: usize) -> Result<IntPoly> {
    if pres.deficiency() != 1 {
        return Err(Error::Domain(format!(
            "Alexander polynomial needs deficiency 1, got {}",
            pres.deficiency()
        )));
    }
    let g = pres.num_generators();
    if column >= g {
        return Err(Error::Domain(format!("no generator column {column}")));
    }
    let rows: Vec<Vec<IntPoly>> = pres
        .relators()
        .iter()
        .map(|r| {
            let entries: Vec<(i64, IntPoly)> = (0..g)
                .filter(|&i| i != column)
                .map(|i| abelianize(&fox_derivative(r, i)))
                .collect();
            // Multiply the row by a power of t so that every entry is a polynomial.
            let low = entries
                .iter()
                .filter(|(_, p)| !p.is_zero())
                .map(|(l, _)| *l)
                .min()
                .unwrap_or(0);
            entries
                .into_iter()
                .map(|(l, p)| p.mul(&IntPoly::monomial(1, (l - low) as usize)))
                .collect()
        })
        .collect();
    if rows.iter().flatten().all(IntPoly::is_zero) && !rows.is_empty() {
        return Err(Error::Domain("abelianized Fox matrix is zero".into()));
    }
    let d = bareiss(rows)?;
    if d.is_zero() {
        return Err(Error::Domain("Alexander matrix minor vanishes".into()));
    }
    Ok(d.normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    #[test]
    fn unknot_is_one() {
        let p = parse_presentation("a ; ; a").unwrap();
        assert_eq!(alexander_polynomial(&p).unwrap(), IntPoly::one());
    }

    #[test]
    fn trefoil_wirtinger() {
        // aba = bab
        let p = parse_presentation("a, b ; a b a B A B ; a").unwrap();
        assert_eq!(alexander_polynomial(&p).unwrap().coeffs(), &[1, -1, 1]);
        assert_eq!(alexander_polynomial_deleting(&p, 0).unwrap().coeffs(), &[1, -1, 1]);
    }

    #[test]
    fn exact_division() {
        let a = IntPoly::new(vec![-1, 0, 1]);
        let b = IntPoly::new(vec![-1, 1]);
        assert_eq!(a.div_exact(&b).unwrap().coeffs(), &[1, 1]);
        assert!(b.div_exact(&a).is_none());
        assert!(IntPoly::new(vec![1, 1]).div_exact(&IntPoly::new(vec![2])).is_none());
    }

    #[test]
    fn display() {
        assert_eq!(IntPoly::new(vec![1, -3, 1]).to_string(), "t^2 - 3t + 1");
    }
}
