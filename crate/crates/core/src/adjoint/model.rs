use super::{invariant_vector, pairing_row, psi_preimages, psi_row_for_word, twisted_cochain_complex, TorsionOptions};
use crate::error::{Error, Result};
use crate::numeric::matrix::{CMatrix, C64, ONE};
use crate::numeric::ToleranceContext;
use crate::presentation::{FreeWord, Presentation};
use crate::representation::{RepKind, Representation};
use crate::sl2::SL2Value;
use crate::torsion::{epsilon_sign, signed_torsion, HomologyBasisSpec, TorsionValue};

use super::knot::real_presentation_complex;

/// `W × S¹` for a disc with `n` holes: meridian `μ` along the circle factor
/// and `λ_j` around the holes, with `ρ(μ) = diag(m, 1/m)` and
/// `ρ(λ_j) = diag(l_j, 1/l_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComposingSpaceSpec {
    pub m: C64,
    pub l: Vec<C64>,
}

impl ComposingSpaceSpec {
    pub fn new(m: C64, l: Vec<C64>) -> Result<Self> {
        let spec = Self { m, l };
        spec.validate(true)?;
        Ok(spec)
    }

    pub fn n(&self) -> usize {
        self.l.len()
    }

    fn validate(&self, need_regular_l: bool) -> Result<()> {
        let eps = 1e-12;
        let near_unit = |z: C64| (z - ONE).norm() <= eps || (z + ONE).norm() <= eps;
        if self.l.is_empty() {
            return Err(Error::Domain("composing space needs at least one hole".into()));
        }
        if near_unit(self.m) {
            return Err(Error::Domain("m must differ from ±1".into()));
        }
        if self.l.iter().any(|z| z.norm() == 0.0 || !z.is_finite()) || !self.m.is_finite() {
            return Err(Error::Domain("eigenvalues must be finite and nonzero".into()));
        }
        if need_regular_l && self.l.iter().all(|&z| near_unit(z)) {
            return Err(Error::Domain(
                "every l_j is ±1; the cohomology of the composing space jumps".into(),
            ));
        }
        Ok(())
    }
}

/// `<μ, λ_1, .., λ_n | [λ_j, μ]>` with meridian `μ`.
pub fn composing_space_presentation(n: usize) -> Presentation {
    let mut names = vec!["mu".to_string()];
    names.extend((1..=n).map(|j| format!("l{j}")));
    let mu = FreeWord::generator(0);
    let relators = (1..=n)
        .map(|j| FreeWord::commutator(&FreeWord::generator(j), &mu))
        .collect();
    Presentation::new(names, relators, mu, None).expect("generators in range")
}

fn composing_torsion(spec: &ComposingSpaceSpec, opts: &TorsionOptions, tol: &ToleranceContext) -> Result<TorsionValue> {
    let n = spec.n();
    let pres = composing_space_presentation(n);
    let mut images = vec![SL2Value::diagonal(spec.m)];
    images.extend(spec.l.iter().map(|&l| SL2Value::diagonal(l)));
    let rep = Representation::new(&pres, images, spec.m, RepKind::Abelian, tol)?;
    let tw = twisted_cochain_complex(&pres, &rep, tol)?;
    let p = invariant_vector(&rep, &pres, opts)?;
    let k = pairing_row(&p);

    let h0 = psi_preimages(tw.delta0(), &k, tol)?;
    let mut psi1 = CMatrix::zeros(n + 1, 3 * (n + 1));
    for g in 0..=n {
        let row = psi_row_for_word(&pres, &rep, &FreeWord::generator(g), &p)?;
        psi1.set_block(g, 0, &row);
    }
    let h1 = psi_preimages(tw.delta1(), &psi1, tol)?;
    let mut psi2 = CMatrix::zeros(n, 3 * n);
    for j in 0..n {
        psi2.set_block(j, 3 * j, &k);
    }
    let zero = CMatrix::zeros(0, 3 * n);
    let h2 = psi_preimages(&zero, &psi2, tol)?;
    let h = HomologyBasisSpec::new(vec![h0, h1, h2]);

    // h_Y = (p, μ, λ_1.., Σ_1..) with each Σ_j the 2-cell of [λ_j, μ].
    let real = real_presentation_complex(&pres)?;
    let unit = |len: usize, i: usize| {
        let mut v = vec![C64::new(0.0, 0.0); len];
        v[i] = ONE;
        v
    };
    let real_h = HomologyBasisSpec::new(vec![
        vec![vec![ONE]],
        (0..=n).map(|i| unit(n + 1, i)).collect(),
        (0..n).map(|j| unit(n, j)).collect(),
    ]);
    let eps = epsilon_sign(&real, &real_h, tol)?;
    let t = signed_torsion(tw.complex(), &h, tol)?;
    Ok(t.scaled(C64::new(f64::from(eps), 0.0)))
}

/// Adjoint torsion of the torus with `ρ(μ) = diag(m, 1/m)`, `ρ(λ) = diag(l, 1/l)`.
pub fn torsion_torus(m: C64, l: C64, opts: &TorsionOptions, tol: &ToleranceContext) -> Result<TorsionValue> {
    let spec = ComposingSpaceSpec { m, l: vec![l] };
    spec.validate(false)?;
    composing_torsion(&spec, opts, tol)
}

/// Adjoint torsion of the composing space with the bases given by the
/// classes `p`, `μ`, `λ_j` and the boundary tori `Σ_j`.
pub fn torsion_composing_space(
    spec: &ComposingSpaceSpec,
    opts: &TorsionOptions,
    tol: &ToleranceContext,
) -> Result<TorsionValue> {
    spec.validate(true)?;
    composing_torsion(spec, opts, tol)
}
