//! `SL(2, C)`, its adjoint action on `sl2` and the Killing form.
//!
//! Lie algebra vectors are coordinates in the basis
//! `e1 = [[0,1],[0,0]]`, `e2 = [[1,0],[0,-1]]`, `e3 = [[0,0],[1,0]]`, so
//! `(a, b, c)` stands for `[[b, a], [c, -b]]`.

use std::ops::Mul;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::matrix::{CMatrix, C64, ONE, ZERO};
use crate::numeric::ToleranceContext;
use crate::presentation::{FreeWord, GroupRingElement};
use crate::representation::Representation;

/// Coordinates of an `sl2` element in `(e1, e2, e3)`.
pub type LieVector = [C64; 3];

/// A 2×2 complex matrix `[[a, b], [c, d]]` of determinant one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SL2Value {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl SL2Value {
    /// Checks `|ad - bc - 1| <= residual_tol`.
    pub fn new(a: C64, b: C64, c: C64, d: C64, tol: &ToleranceContext) -> Result<Self> {
        let g = Self { a, b, c, d };
        let r = (g.det() - ONE).norm();
        if !r.is_finite() || r > tol.residual_tol {
            return Err(Error::Domain(format!("determinant is off from 1 by {r:e}")));
        }
        Ok(g)
    }

    pub fn new_unchecked(a: C64, b: C64, c: C64, d: C64) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new_unchecked(ONE, ZERO, ZERO, ONE)
    }

    /// `diag(m, 1/m)`.
    pub fn diagonal(m: C64) -> Self {
        Self::new_unchecked(m, ZERO, ZERO, m.inv())
    }

    /// Rescales an invertible matrix to determinant one.
    pub fn normalized(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        let det = a * d - b * c;
        if det.norm() == 0.0 || !det.is_finite() {
            return Err(Error::Domain("singular matrix cannot be normalized".into()));
        }
        let s = det.sqrt().inv();
        Ok(Self::new_unchecked(a * s, b * s, c * s, d * s))
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> C64 {
        self.a + self.d
    }

    /// Inverse, using determinant one.
    pub fn inverse(&self) -> Self {
        Self::new_unchecked(self.d, -self.b, -self.c, self.a)
    }

    /// `h g h^-1`.
    pub fn conjugate_by(&self, h: &SL2Value) -> Self {
        *h * *self * h.inverse()
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.b.norm() <= tol && self.c.norm() <= tol
    }

    pub fn max_diff(&self, o: &SL2Value) -> f64 {
        [self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        [self.a, self.b, self.c, self.d]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn to_matrix(&self) -> CMatrix {
        CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => self.a,
            (0, 1) => self.b,
            (1, 0) => self.c,
            _ => self.d,
        })
    }

    /// `g - g^-1` as a Lie algebra vector.
    pub fn antisymmetric_part(&self) -> LieVector {
        let two = C64::new(2.0, 0.0);
        [self.b * two, self.a - self.d, self.c * two]
    }
}

impl Mul for SL2Value {
    type Output = SL2Value;

    fn mul(self, o: SL2Value) -> SL2Value {
        SL2Value::new_unchecked(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

/// Image of a free word under generator images.
pub fn word_image(w: &FreeWord, images: &[SL2Value]) -> Result<SL2Value> {
    let mut acc = SL2Value::identity();
    for l in w.letters() {
        let g = images
            .get(l.gen)
            .ok_or_else(|| Error::Domain(format!("generator {} has no image", l.gen)))?;
        acc = acc * if l.exp > 0 { *g } else { g.inverse() };
    }
    Ok(acc)
}

/// Matrix of `Ad g` in `(e1, e2, e3)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdMatrix(CMatrix);

impl AdMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn apply(&self, v: &LieVector) -> LieVector {
        let r = self.0.mul_vec(v).expect("3x3 times 3-vector");
        [r[0], r[1], r[2]]
    }
}

fn to_lie(m: [[C64; 2]; 2]) -> LieVector {
    [m[0][1], (m[0][0] - m[1][1]) * 0.5, m[1][0]]
}

fn from_lie(v: &LieVector) -> [[C64; 2]; 2] {
    [[v[1], v[0]], [v[2], -v[1]]]
}

/// Column `k` holds the coordinates of `g e_k g^-1`.
pub fn adjoint(g: &SL2Value) -> AdMatrix {
    let inv = g.inverse();
    let mut out = CMatrix::zeros(3, 3);
    for k in 0..3 {
        let mut e = [ZERO; 3];
        e[k] = ONE;
        let x = from_lie(&e);
        // g x g^-1
        let gx = [
            [g.a * x[0][0] + g.b * x[1][0], g.a * x[0][1] + g.b * x[1][1]],
            [g.c * x[0][0] + g.d * x[1][0], g.c * x[0][1] + g.d * x[1][1]],
        ];
        let y = [
            [gx[0][0] * inv.a + gx[0][1] * inv.c, gx[0][0] * inv.b + gx[0][1] * inv.d],
            [gx[1][0] * inv.a + gx[1][1] * inv.c, gx[1][0] * inv.b + gx[1][1] * inv.d],
        ];
        let col = to_lie(y);
        for (i, z) in col.into_iter().enumerate() {
            out[(i, k)] = z;
        }
    }
    AdMatrix(out)
}

/// Killing form `8 b b' + 4 a c' + 4 c a'`.
pub fn killing(v: &LieVector, w: &LieVector) -> C64 {
    v[1] * w[1] * 8.0 + v[0] * w[2] * 4.0 + v[2] * w[0] * 4.0
}

/// Gram matrix `K` of the Killing form, `<v, w> = v^T K w`.
pub fn killing_matrix() -> CMatrix {
    let f = C64::new(4.0, 0.0);
    let mut k = CMatrix::zeros(3, 3);
    k[(0, 2)] = f;
    k[(2, 0)] = f;
    k[(1, 1)] = C64::new(8.0, 0.0);
    k
}

/// `|<Ad g v, Ad g w> - <v, w>|`.
pub fn ad_invariance_check(g: &SL2Value, v: &LieVector, w: &LieVector) -> f64 {
    let ad = adjoint(g);
    (killing(&ad.apply(v), &ad.apply(w)) - killing(v, w)).norm()
}

/// `Φ(x) = Σ n_w Ad ρ(w)`.
pub fn fox_evaluate(x: &GroupRingElement, rep: &Representation) -> Result<CMatrix> {
    evaluate_with(x, rep.images())
}

/// [`fox_evaluate`] against bare generator images.
pub fn evaluate_with(x: &GroupRingElement, images: &[SL2Value]) -> Result<CMatrix> {
    let mut out = CMatrix::zeros(3, 3);
    for (w, n) in x.terms() {
        let ad = adjoint(&word_image(w, images)?);
        out = &out + &ad.matrix().scale(C64::new(n as f64, 0.0));
    }
    Ok(out)
}
