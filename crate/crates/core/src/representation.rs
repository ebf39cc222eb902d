//! `SL(2, C)` representations of knot groups: abelian representatives and
//! the irreducible level set of a two-bridge knot at a fixed meridian trace.

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::adjoint::{invariant_vector, psi_row_for_word, twisted_cochain_complex, TorsionOptions};
use crate::error::{Error, Result};
use crate::numeric::matrix::{C64, ONE, ZERO};
use crate::numeric::{Poly, ToleranceContext};
use crate::presentation::{alexander_polynomial, two_bridge_presentation, FreeWord, Presentation, TwoBridgeKnot};
use crate::sl2::{word_image, SL2Value};
use crate::torsion::kernel_basis;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RepKind {
    Abelian,
    Irreducible,
}

/// Generator images of a representation, with a chosen eigenvalue `m` of the
/// meridian image.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    images: Vec<SL2Value>,
    m: C64,
    kind: RepKind,
}

impl Representation {
    /// Checks that every relator maps to the identity and that the meridian
    /// has trace `m + 1/m`, both within `residual_tol` relative to the size of
    /// the images.
    pub fn new(
        pres: &Presentation,
        images: Vec<SL2Value>,
        m: C64,
        kind: RepKind,
        tol: &ToleranceContext,
    ) -> Result<Self> {
        if images.len() != pres.num_generators() {
            return Err(Error::Domain(format!(
                "{} images for {} generators",
                images.len(),
                pres.num_generators()
            )));
        }
        for g in &images {
            let r = (g.det() - ONE).norm();
            if !(r <= tol.residual_tol) {
                return Err(Error::Domain(format!("generator image has determinant off by {r:e}")));
            }
        }
        let rep = Self { images, m, kind };
        let res = rep.relator_residual(pres)?;
        if res > tol.residual_tol {
            return Err(Error::SolverInconsistency(format!(
                "relators evaluate to the identity only up to {res:e}"
            )));
        }
        let tr = rep.word_image(pres.meridian())?.trace();
        let expected = m + m.inv();
        if (tr - expected).norm() > tol.residual_tol * expected.norm().max(1.0) {
            return Err(Error::Domain(format!(
                "meridian trace {tr} differs from m + 1/m = {expected}"
            )));
        }
        Ok(rep)
    }

    pub fn images(&self) -> &[SL2Value] {
        &self.images
    }

    pub fn image(&self, gen: usize) -> &SL2Value {
        &self.images[gen]
    }

    pub fn m(&self) -> C64 {
        self.m
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn word_image(&self, w: &FreeWord) -> Result<SL2Value> {
        word_image(w, &self.images)
    }

    /// Largest entry of `ρ(r) - I` over relators, relative to the
    /// conditioning of evaluating `r` letter by letter: the largest
    /// `|prefix| |suffix|` over the splittings of `r`.
    pub fn relator_residual(&self, pres: &Presentation) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for r in pres.relators() {
            let letters: Vec<SL2Value> = r
                .letters()
                .iter()
                .map(|l| {
                    let g = self
                        .images
                        .get(l.gen)
                        .ok_or_else(|| Error::Domain(format!("generator {} has no image", l.gen)))?;
                    Ok(if l.exp > 0 { *g } else { g.inverse() })
                })
                .collect::<Result<_>>()?;
            let mut suffix = vec![SL2Value::identity(); letters.len() + 1];
            for k in (0..letters.len()).rev() {
                suffix[k] = letters[k] * suffix[k + 1];
            }
            let mut prefix = SL2Value::identity();
            let mut cond = suffix[0].max_abs().max(1.0);
            for (k, g) in letters.iter().enumerate() {
                prefix = prefix * *g;
                cond = cond.max(prefix.max_abs() * suffix[k + 1].max_abs());
            }
            worst = worst.max(prefix.max_diff(&SL2Value::identity()) / cond);
        }
        Ok(worst)
    }

    /// `h ρ h^-1`.
    pub fn conjugated(&self, h: &SL2Value) -> Self {
        Self {
            images: self.images.iter().map(|g| g.conjugate_by(h)).collect(),
            m: self.m,
            kind: self.kind,
        }
    }

    /// A well-scaled conjugate: the meridian image becomes `diag(m, 1/m)`
    /// (through unit eigenvectors) and a further `diag(s, 1/s)` equalizes the
    /// total size of the upper and lower off-diagonal entries. Torsions are
    /// conjugation invariant, but their floating-point accuracy is not.
    pub fn balanced(&self, pres: &Presentation) -> Result<Self> {
        let g = self.word_image(pres.meridian())?;
        let mut out = self.clone();
        let eigvec = |l: C64| {
            let (u, v) = ([g.b, l - g.a], [l - g.d, g.c]);
            let nu = (u[0].norm_sqr() + u[1].norm_sqr()).sqrt();
            let nv = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            if nu >= nv {
                (u, nu)
            } else {
                (v, nv)
            }
        };
        if !g.is_diagonal(0.0) || (g.a - self.m).norm() > (g.d - self.m).norm() {
            let ((v1, n1), (v2, n2)) = (eigvec(self.m), eigvec(self.m.inv()));
            if n1 > 0.0 && n2 > 0.0 {
                let (x1, y1) = (v1[0] / n1, v1[1] / n1);
                let (x2, y2) = (v2[0] / n2, v2[1] / n2);
                let det = x1 * y2 - x2 * y1;
                if det.norm() > 1e-8 {
                    // g = V diag(m, 1/m) V^-1, so conjugate by V^-1.
                    let v = SL2Value::normalized(x1, x2, y1, y2)?;
                    out = out.conjugated(&v.inverse());
                }
            }
        }
        let upper: f64 = out.images.iter().map(|h| h.b.norm_sqr()).sum();
        let lower: f64 = out.images.iter().map(|h| h.c.norm_sqr()).sum();
        if upper > 0.0 && lower > 0.0 {
            let s = (lower / upper).sqrt().sqrt().sqrt();
            out = out.conjugated(&SL2Value::diagonal(C64::new(s, 0.0)));
        }
        Ok(out)
    }

    /// Conjugation by `[[0,1],[-1,0]]`, relabelling the eigenvalue as `1/m`.
    pub fn weyl_flipped(&self) -> Self {
        let w = SL2Value::new_unchecked(ZERO, ONE, -ONE, ZERO);
        let mut out = self.conjugated(&w);
        out.m = self.m.inv();
        out
    }
}

/// The root of `z^2 - c z + 1` with `|z| >= 1`, ties broken towards
/// non-negative imaginary part.
pub fn meridian_eigenvalue(c: C64, tol: &ToleranceContext) -> Result<C64> {
    let g = tol.genericity_tol();
    if !c.is_finite() || (c - 2.0).norm() <= g || (c + 2.0).norm() <= g {
        return Err(Error::DegenerateTrace { re: c.re, im: c.im });
    }
    let s = (c * c - 4.0).sqrt();
    let (r1, r2) = ((c + s) * 0.5, (c - s) * 0.5);
    let (n1, n2) = (r1.norm(), r2.norm());
    let tie = 1e-12 * n1.max(n2);
    Ok(if (n1 - n2).abs() <= tie {
        if r1.im >= r2.im {
            r1
        } else {
            r2
        }
    } else if n1 > n2 {
        r1
    } else {
        r2
    })
}

/// Every generator to `diag(m, 1/m)` with `m = meridian_eigenvalue(c)`.
pub fn abelian_representation(pres: &Presentation, c: C64, tol: &ToleranceContext) -> Result<Representation> {
    let m = meridian_eigenvalue(c, tol)?;
    let d = SL2Value::diagonal(m);
    let sign = pres.meridian().total_exponent();
    // A meridian written as the inverse of a generator would see 1/m.
    let g = if sign < 0 { d.inverse() } else { d };
    Representation::new(pres, vec![g; pres.num_generators()], m, RepKind::Abelian, tol)
}

/// `μ`-regularity and genericity data of an irreducible representation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityReport {
    pub h1_dim: usize,
    pub mu_injective: bool,
    #[serde(serialize_with = "ser_complex")]
    pub longitude_trace: C64,
    #[serde(serialize_with = "ser_complex")]
    pub alexander_at_m2: C64,
    pub generic: bool,
}

pub(crate) fn ser_complex<S: Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &z.re)?;
    st.serialize_field("im", &z.im)?;
    st.end()
}

/// One irreducible character on the level set together with its
/// representative.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetPoint {
    pub rep: Representation,
    /// Riley coordinate before diagonalizing the meridian.
    pub u: C64,
    pub regularity: RegularityReport,
}

/// `ρ(a) = [[m,1],[0,1/m]]`, `ρ(b) = [[m,0],[u,1/m]]`.
pub fn riley_images(m: C64, u: C64) -> [SL2Value; 2] {
    [
        SL2Value::new_unchecked(m, ONE, ZERO, m.inv()),
        SL2Value::new_unchecked(m, ZERO, u, m.inv()),
    ]
}

type PolyMatrix = [[Poly; 2]; 2];

fn pm_mul(x: &PolyMatrix, y: &PolyMatrix) -> PolyMatrix {
    let e = |i: usize, j: usize| &(&x[i][0] * &y[0][j]) + &(&x[i][1] * &y[1][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Riley polynomial `W11 + (1/m - m) W12` in `u`, where `W` is the image of
/// the two-bridge word `w`. Its roots are exactly the `u` for which the
/// relator holds in the Riley normalization.
pub fn riley_polynomial(k: &TwoBridgeKnot, m: C64) -> Poly {
    let cst = Poly::constant;
    let mi = m.inv();
    let a = [[cst(m), cst(ONE)], [Poly::zero(), cst(mi)]];
    let a_inv = [[cst(mi), cst(-ONE)], [Poly::zero(), cst(m)]];
    let b = [[cst(m), Poly::zero()], [Poly::x(), cst(mi)]];
    let b_inv = [[cst(mi), Poly::zero()], [-&Poly::x(), cst(m)]];
    let mut w: PolyMatrix = [[cst(ONE), Poly::zero()], [Poly::zero(), cst(ONE)]];
    for l in k.word().letters() {
        let f = match (l.gen, l.exp > 0) {
            (0, true) => &a,
            (0, false) => &a_inv,
            (_, true) => &b,
            (_, false) => &b_inv,
        };
        w = pm_mul(&w, f);
    }
    &w[0][0] + &w[0][1].scale(mi - m)
}

/// Irreducible characters of `K(p, q)` with meridian trace `c`, one
/// representative each, conjugated so that `ρ(a) = diag(m, 1/m)`. Sorted by
/// the Riley coordinate `(Re u, Im u)`.
pub fn solve_level_set(k: &TwoBridgeKnot, c: C64, tol: &ToleranceContext) -> Result<Vec<LevelSetPoint>> {
    let pres = two_bridge_presentation(k);
    let m = meridian_eigenvalue(c, tol)?;
    let poly = riley_polynomial(k, m);
    let g = tol.genericity_tol();
    let mut roots: Vec<C64> = poly.roots(tol)?.into_iter().filter(|u| u.norm() > g).collect();
    roots.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    for (i, x) in roots.iter().enumerate() {
        for y in &roots[i + 1..] {
            if (x - y).norm() <= g * x.norm().max(1.0) {
                return Err(Error::non_generic(
                    c,
                    format!("Riley polynomial has a repeated root near u = {x}"),
                ));
            }
        }
    }
    // S has the eigenvectors of ρ(a) as columns.
    let s = SL2Value::normalized(ONE, ONE, ZERO, m.inv() - m)?;
    let s_inv = s.inverse();
    let mut points = Vec::with_capacity(roots.len());
    for u in roots {
        let images: Vec<SL2Value> = riley_images(m, u).iter().map(|x| x.conjugate_by(&s_inv)).collect();
        let rep = Representation::new(&pres, images, m, RepKind::Irreducible, tol)?;
        let regularity = check_mu_regular(&pres, &rep, tol)?;
        points.push(LevelSetPoint { rep, u, regularity });
    }
    Ok(points)
}

/// Genericity report for an irreducible representation: `dim H^1`,
/// injectivity of restriction to the meridian, longitude trace and `Δ(m²)`.
pub fn check_mu_regular(pres: &Presentation, rep: &Representation, tol: &ToleranceContext) -> Result<RegularityReport> {
    if rep.kind() != RepKind::Irreducible {
        return Err(Error::WrongKind(
            "μ-regularity is only defined for irreducible representations".into(),
        ));
    }
    let g = tol.genericity_tol();
    let m = rep.m();
    let m_ok = (m - ONE).norm() > g && (m + ONE).norm() > g;
    let complex = twisted_cochain_complex(pres, rep, tol)?;
    let h1_dim = complex.complex().homology_dims(tol)[1];
    let mu_injective = m_ok && {
        let p = invariant_vector(rep, pres, &TorsionOptions::default())?;
        let row = psi_row_for_word(pres, rep, pres.meridian(), &p)?;
        let z1 = kernel_basis(&complex.complex().maps()[1], tol);
        let values = row.try_mul(&z1)?;
        values.max_abs() > g * row.max_abs().max(1.0)
    };
    let longitude = pres
        .longitude()
        .ok_or_else(|| Error::Domain("regularity report needs a longitude".into()))?;
    let longitude_trace = rep.word_image(longitude)?.trace();
    let delta = alexander_polynomial(pres)?;
    let alexander_at_m2 = delta.eval(m * m);
    let coeff_scale = delta
        .coeffs()
        .iter()
        .map(|c| c.unsigned_abs() as f64)
        .fold(1.0, f64::max);
    let generic = h1_dim == 1
        && mu_injective
        && (longitude_trace - 2.0).norm() > g
        && (longitude_trace + 2.0).norm() > g
        && alexander_at_m2.norm() > g * coeff_scale
        && m_ok;
    Ok(RegularityReport {
        h1_dim,
        mu_injective,
        longitude_trace,
        alexander_at_m2,
        generic,
    })
}

/// A trace value from the rectangle `[-3, 3] x [0.25, 1.75]`, away from the
/// real segment where branch points and reducible characters accumulate.
pub fn sample_generic_trace<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-3.0..3.0), rng.gen_range(0.25..1.75))
}

/// `Δ(m²) Δ(m⁻²) / (m - m⁻¹)²`.
pub fn abelian_closed_form(pres: &Presentation, m: C64) -> Result<C64> {
    let d = alexander_polynomial(pres)?;
    let m2 = m * m;
    let s = m - m.inv();
    Ok(d.eval(m2) * d.eval(m2.inv()) / (s * s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eigenvalue_choice() {
        let tol = ToleranceContext::default();
        let m = meridian_eigenvalue(c(3.0, 0.0), &tol).unwrap();
        assert!((m - c((3.0 + 5f64.sqrt()) / 2.0, 0.0)).norm() < 1e-14);
        let m = meridian_eigenvalue(c(0.0, 0.0), &tol).unwrap();
        assert!((m - c(0.0, 1.0)).norm() < 1e-14);
        assert!(matches!(
            meridian_eigenvalue(c(2.0, 0.0), &tol),
            Err(Error::DegenerateTrace { .. })
        ));
        assert!(matches!(
            meridian_eigenvalue(c(-2.0, 0.0), &tol),
            Err(Error::DegenerateTrace { .. })
        ));
    }

    #[test]
    fn riley_degree() {
        let m = c(1.3, 0.4);
        for (p, q, d) in [(3, 1, 1), (5, 3, 2), (7, 3, 3), (9, 5, 4)] {
            let k = TwoBridgeKnot::new(p, q).unwrap();
            assert_eq!(riley_polynomial(&k, m).degree(), Some(d), "{k}");
        }
    }

    #[test]
    fn figure_eight_has_two_points() {
        let tol = ToleranceContext::default();
        let pts = solve_level_set(&TwoBridgeKnot::figure_eight(), c(3.1, 0.2), &tol).unwrap();
        assert_eq!(pts.len(), 2);
        for p in &pts {
            assert!(p.regularity.generic, "{:?}", p.regularity);
            assert!(p.rep.image(0).is_diagonal(1e-12));
        }
        let pts = solve_level_set(&TwoBridgeKnot::trefoil(), c(3.1, 0.2), &tol).unwrap();
        assert_eq!(pts.len(), 1);
    }
}
