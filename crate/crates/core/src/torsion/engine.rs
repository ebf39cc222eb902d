use std::collections::BTreeMap;

use serde::Serialize;

use super::complex::{BasedComplex, ComplexProfile, Direction, HomologyBasisSpec};
use crate::error::{Error, Result};
use crate::numeric::matrix::{det, rank_factorize, CMatrix, C64, ONE};
use crate::numeric::ToleranceContext;

/// Bookkeeping attached to every torsion value.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct TorsionDiagnostics {
    /// For each map, the columns of its source piece used as the `b` chains.
    /// Empty when the caller supplied its own chains.
    pub pivots: Vec<Vec<usize>>,
    pub homology_dims: Vec<usize>,
    pub cycle_residual: f64,
    pub composition_residual: f64,
    pub sign_exponent: Option<usize>,
    /// Further named consistency residuals filled in by higher layers.
    pub residuals: BTreeMap<String, f64>,
}

/// A torsion together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorsionValue {
    pub value: C64,
    pub sign_refined: bool,
    pub diagnostics: TorsionDiagnostics,
}

impl TorsionValue {
    pub fn scaled(mut self, s: C64) -> Self {
        self.value *= s;
        self
    }

    pub fn with_residual(mut self, name: &str, r: f64) -> Self {
        self.diagnostics.residuals.insert(name.to_string(), r);
        self
    }

    /// Worst of the recorded residuals, including cycle and composition checks.
    pub fn max_residual(&self) -> f64 {
        self.diagnostics.residuals.values().copied().fold(
            self.diagnostics
                .cycle_residual
                .max(self.diagnostics.composition_residual),
            f64::max,
        )
    }
}

/// Exponent applied to `det A_i` in degree `i`.
///
/// Chain complexes use `(-1)^(i+1)`. Cochain complexes use `(-1)^i`; this is
/// the choice that makes the torus equal 1 and reproduces the closed forms of
/// the composing space and of abelian knot representations.
pub fn degree_exponent(direction: Direction, i: usize) -> i32 {
    let even = i.is_multiple_of(2);
    match direction {
        Direction::Ascending => {
            if even {
                1
            } else {
                -1
            }
        }
        Direction::Descending => {
            if even {
                -1
            } else {
                1
            }
        }
    }
}

/// Index of the piece a map reads from.
fn source_piece(direction: Direction, k: usize) -> usize {
    match direction {
        Direction::Ascending => k,
        Direction::Descending => k + 1,
    }
}

fn target_piece(direction: Direction, k: usize) -> usize {
    match direction {
        Direction::Ascending => k + 1,
        Direction::Descending => k,
    }
}

fn invalid(degree: usize, reason: impl Into<String>) -> Error {
    Error::InvalidHomologyBasis {
        degree,
        reason: reason.into(),
    }
}

fn raw_torsion(
    c: &BasedComplex,
    h: &HomologyBasisSpec,
    chains: Option<&[CMatrix]>,
    tol: &ToleranceContext,
) -> Result<(C64, TorsionDiagnostics)> {
    c.validate(tol)?;
    let n = c.len();
    if (n..h.len()).any(|i| !h.degree(i).is_empty()) {
        return Err(invalid(n, "homology vectors supplied beyond the top degree"));
    }
    let dir = c.direction();
    let mut diag = TorsionDiagnostics {
        composition_residual: c.composition_residual(),
        ..Default::default()
    };

    // b chains and their images, one pair per map.
    let mut b_chains = Vec::with_capacity(c.maps().len());
    let mut images = Vec::with_capacity(c.maps().len());
    let mut ranks = Vec::with_capacity(c.maps().len());
    for (k, map) in c.maps().iter().enumerate() {
        let f = rank_factorize(map, tol);
        let b = match chains {
            None => {
                let src = c.dims()[source_piece(dir, k)];
                let b = CMatrix::from_fn(src, f.rank, |i, j| {
                    if i == f.pivot_columns[j] {
                        ONE
                    } else {
                        C64::new(0.0, 0.0)
                    }
                });
                diag.pivots.push(f.pivot_columns.clone());
                b
            }
            Some(list) => {
                let b = list
                    .get(k)
                    .cloned()
                    .ok_or_else(|| Error::Shape(format!("no chain matrix supplied for map {k}")))?;
                if b.rows() != map.cols() || b.cols() != f.rank {
                    return Err(Error::Shape(format!(
                        "chains for map {k} must be {}x{}, got {}x{}",
                        map.cols(),
                        f.rank,
                        b.rows(),
                        b.cols()
                    )));
                }
                b
            }
        };
        let image = map * &b;
        if chains.is_some() && rank_factorize(&image, tol).rank != f.rank {
            return Err(Error::Structural(format!(
                "supplied chains for map {k} do not map onto the image"
            )));
        }
        ranks.push(f.rank);
        b_chains.push(b);
        images.push(image);
    }

    let mut hdims = Vec::with_capacity(n);
    let mut value = ONE;
    for i in 0..n {
        let dim = c.dims()[i];
        let incoming = (0..c.maps().len()).find(|&k| target_piece(dir, k) == i);
        let outgoing = (0..c.maps().len()).find(|&k| source_piece(dir, k) == i);
        let r_in = incoming.map_or(0, |k| ranks[k]);
        let r_out = outgoing.map_or(0, |k| ranks[k]);
        let expected = dim
            .checked_sub(r_in + r_out)
            .ok_or_else(|| invalid(i, "ranks exceed the dimension"))?;
        hdims.push(expected);
        let hv = h.matrix(i, dim)?;
        if hv.cols() != expected {
            return Err(invalid(
                i,
                format!(
                    "homology has dimension {expected} but {} vectors were supplied",
                    hv.cols()
                ),
            ));
        }
        if let Some(k) = outgoing {
            if hv.cols() > 0 {
                let map = &c.maps()[k];
                let res = (map * &hv).max_abs();
                let scale = 1f64.max(map.max_abs() * hv.max_abs());
                if res > tol.residual_tol * scale {
                    return Err(invalid(i, format!("vector is not a cycle (residual {res:.3e})")));
                }
                diag.cycle_residual = diag.cycle_residual.max(res);
            }
        }
        let empty = CMatrix::zeros(dim, 0);
        let img = incoming.map_or(&empty, |k| &images[k]);
        let b = outgoing.map_or(&empty, |k| &b_chains[k]);
        let a = CMatrix::hstack(&[img, &hv, b])?;
        if rank_factorize(&unit_columns(&a), tol).rank != dim {
            return Err(invalid(i, "vectors do not project to a basis of homology"));
        }
        let d = det(&a)?;
        value *= if degree_exponent(dir, i) > 0 { d } else { d.inv() };
    }
    diag.homology_dims = hdims;
    Ok((value, diag))
}

/// Each column scaled to unit largest entry. The basis test must not depend
/// on how the homology vectors and chains happen to be scaled.
fn unit_columns(a: &CMatrix) -> CMatrix {
    let norms: Vec<f64> = (0..a.cols())
        .map(|j| (0..a.rows()).fold(0.0, |m: f64, i| m.max(a[(i, j)].norm())))
        .collect();
    CMatrix::from_fn(a.rows(), a.cols(), |i, j| {
        if norms[j] > 0.0 {
            a[(i, j)] / norms[j]
        } else {
            a[(i, j)]
        }
    })
}

/// Torsion `∏ det A_i^(±1)` of a based complex with the given homology basis.
pub fn torsion(c: &BasedComplex, h: &HomologyBasisSpec, tol: &ToleranceContext) -> Result<TorsionValue> {
    let (value, diagnostics) = raw_torsion(c, h, None, tol)?;
    Ok(TorsionValue {
        value,
        sign_refined: false,
        diagnostics,
    })
}

/// [`torsion`] with caller-chosen `b` chains: `chains[k]` has one column per
/// unit of rank of `maps[k]`, living in that map's source piece.
pub fn torsion_with_chains(
    c: &BasedComplex,
    h: &HomologyBasisSpec,
    chains: &[CMatrix],
    tol: &ToleranceContext,
) -> Result<TorsionValue> {
    let (value, diagnostics) = raw_torsion(c, h, Some(chains), tol)?;
    Ok(TorsionValue {
        value,
        sign_refined: false,
        diagnostics,
    })
}

/// Sign-refined torsion `(-1)^{|C|} tor`.
pub fn signed_torsion(c: &BasedComplex, h: &HomologyBasisSpec, tol: &ToleranceContext) -> Result<TorsionValue> {
    let mut t = torsion(c, h, tol)?;
    let profile = ComplexProfile::new(c.dims(), &t.diagnostics.homology_dims);
    t.value *= profile.sign();
    t.sign_refined = true;
    t.diagnostics.sign_exponent = Some(profile.sign_exponent);
    Ok(t)
}

/// Sign of the sign-refined torsion of a real complex.
pub fn epsilon_sign(
    real_complex: &BasedComplex,
    oriented_h: &HomologyBasisSpec,
    tol: &ToleranceContext,
) -> Result<i32> {
    if !real_complex.maps().iter().all(|m| m.is_real(0.0)) {
        return Err(Error::Domain("epsilon_sign needs a real complex".into()));
    }
    for i in 0..oriented_h.len() {
        if oriented_h.degree(i).iter().flatten().any(|z| z.im != 0.0) {
            return Err(Error::Domain("epsilon_sign needs real homology vectors".into()));
        }
    }
    let t = signed_torsion(real_complex, oriented_h, tol)?;
    if t.value.re == 0.0 {
        return Err(Error::Structural("real torsion vanished".into()));
    }
    Ok(if t.value.re > 0.0 { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn scalar(k: f64, dir: Direction) -> BasedComplex {
        BasedComplex::new(dir, vec![1, 1], vec![CMatrix::diagonal(&[c(k)])]).unwrap()
    }

    #[test]
    fn identity_two_term_is_one() {
        let tol = ToleranceContext::default();
        for dir in [Direction::Ascending, Direction::Descending] {
            let t = torsion(&scalar(1.0, dir), &HomologyBasisSpec::empty(2), &tol).unwrap();
            assert!((t.value - ONE).norm() < 1e-15);
        }
    }

    #[test]
    fn scalar_two_term_exponent() {
        let tol = ToleranceContext::default();
        // Ascending: A_0 = 1, A_1 = (k), exponent -1 in degree 1.
        let t = torsion(&scalar(4.0, Direction::Ascending), &HomologyBasisSpec::empty(2), &tol).unwrap();
        assert!((t.value - c(0.25)).norm() < 1e-15);
        // Descending: A_0 = (k) with exponent -1.
        let t = torsion(&scalar(4.0, Direction::Descending), &HomologyBasisSpec::empty(2), &tol).unwrap();
        assert!((t.value - c(0.25)).norm() < 1e-15);
    }

    #[test]
    fn empty_complex_is_one() {
        let tol = ToleranceContext::default();
        let cx = BasedComplex::new(
            Direction::Ascending,
            vec![0, 0, 0],
            vec![CMatrix::zeros(0, 0), CMatrix::zeros(0, 0)],
        )
        .unwrap();
        let t = signed_torsion(&cx, &HomologyBasisSpec::empty(3), &tol).unwrap();
        assert_eq!(t.value, ONE);
    }

    #[test]
    fn wrong_homology_count_rejected() {
        let tol = ToleranceContext::default();
        let cx = BasedComplex::new(Direction::Ascending, vec![1, 1], vec![CMatrix::zeros(1, 1)]).unwrap();
        let err = torsion(&cx, &HomologyBasisSpec::empty(2), &tol).unwrap_err();
        assert!(matches!(err, Error::InvalidHomologyBasis { degree: 0, .. }));
    }

    #[test]
    fn non_cycle_rejected() {
        let tol = ToleranceContext::default();
        let cx = BasedComplex::new(
            Direction::Ascending,
            vec![2, 1],
            vec![CMatrix::from_real_rows(&[&[1.0, 0.0]]).unwrap()],
        )
        .unwrap();
        let h = HomologyBasisSpec::new(vec![vec![vec![c(1.0), c(1.0)]], vec![]]);
        assert!(matches!(
            torsion(&cx, &h, &tol),
            Err(Error::InvalidHomologyBasis { degree: 0, .. })
        ));
        let h = HomologyBasisSpec::new(vec![vec![vec![c(0.0), c(2.0)]], vec![]]);
        let t = torsion(&cx, &h, &tol).unwrap();
        // A_0 = [h | e_0] = ((0,1),(2,0)), det -2; A_1 = (1).
        assert!((t.value - c(-2.0)).norm() < 1e-14);
    }

    #[test]
    fn swapping_h_flips_epsilon() {
        let tol = ToleranceContext::default();
        let cx = BasedComplex::new(Direction::Descending, vec![1, 2], vec![CMatrix::zeros(1, 2)]).unwrap();
        let e = |v: [f64; 2]| vec![c(v[0]), c(v[1])];
        let h1 = HomologyBasisSpec::new(vec![vec![vec![c(1.0)]], vec![e([1.0, 0.0]), e([0.0, 1.0])]]);
        let h2 = HomologyBasisSpec::new(vec![vec![vec![c(1.0)]], vec![e([0.0, 1.0]), e([1.0, 0.0])]]);
        let s1 = epsilon_sign(&cx, &h1, &tol).unwrap();
        let s2 = epsilon_sign(&cx, &h2, &tol).unwrap();
        assert_eq!(s1, -s2);
    }
}
