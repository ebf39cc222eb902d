use super::{
    boundary_class, invariant_vector, pairing_row, psi_preimages, psi_row_for_word, twisted_cochain_complex,
    TorsionOptions,
};
use crate::error::{Error, Result};
use crate::numeric::matrix::{CMatrix, C64, ONE};
use crate::numeric::ToleranceContext;
use crate::presentation::{alexander_polynomial, Presentation};
use crate::representation::{abelian_closed_form, abelian_representation, check_mu_regular, RepKind, Representation};
use crate::torsion::{epsilon_sign, signed_torsion, BasedComplex, Direction, HomologyBasisSpec, TorsionValue};

/// Real cellular chain complex `C2 -> C1 -> C0` of a presentation complex:
/// `∂1 = 0` and `∂2` holds relator exponent sums.
pub fn real_presentation_complex(pres: &Presentation) -> Result<BasedComplex> {
    let n = pres.num_generators();
    let r = pres.relators().len();
    let d2 = CMatrix::from_fn(n, r, |i, j| C64::new(pres.relators()[j].exponent_sum(i) as f64, 0.0));
    BasedComplex::new(Direction::Descending, vec![1, n, r], vec![CMatrix::zeros(1, n), d2])
}

/// `ε(o_M)` for the orientation given by `(pt, μ)`.
fn knot_epsilon(pres: &Presentation, tol: &ToleranceContext) -> Result<i32> {
    let c = real_presentation_complex(pres)?;
    let mu: Vec<C64> = (0..pres.num_generators())
        .map(|i| C64::new(pres.meridian().exponent_sum(i) as f64, 0.0))
        .collect();
    let h = HomologyBasisSpec::new(vec![vec![vec![ONE]], vec![mu], vec![]]);
    epsilon_sign(&c, &h, tol)
}

/// `τ_μ(M; ρ)` at an irreducible `μ`-regular representation.
///
/// `h¹` has `<z(μ̃), P> = 1` and `h²` has `ψ²`-value 1, where `ψ²` pairs
/// with `P` through the boundary class of the peripheral torus.
pub fn torsion_knot_irreducible(
    pres: &Presentation,
    rep: &Representation,
    opts: &TorsionOptions,
    tol: &ToleranceContext,
) -> Result<TorsionValue> {
    pres.check_knot()?;
    let rep = &rep.balanced(pres)?;
    let report = check_mu_regular(pres, rep, tol)?;
    if report.h1_dim != 1 || !report.mu_injective {
        return Err(Error::Regularity(format!(
            "representation is not μ-regular (dim H¹ = {}, injective on the meridian: {})",
            report.h1_dim, report.mu_injective
        )));
    }
    let tw = twisted_cochain_complex(pres, rep, tol)?;
    let p = invariant_vector(rep, pres, opts)?;
    let psi1 = psi_row_for_word(pres, rep, pres.meridian(), &p)?;
    let h1 = psi_preimages(tw.delta1(), &psi1, tol)?;
    let bc = boundary_class(pres, rep, tol)?;
    let psi2 = bc.psi_row(&p);
    let y = psi2.adjoint();
    let norm2: f64 = y.entries().iter().map(|z| z.norm_sqr()).sum();
    if norm2 == 0.0 {
        return Err(Error::Regularity("ψ² vanishes identically".into()));
    }
    let h2 = y.scale(C64::new(1.0 / norm2, 0.0)).column(0);
    let h = HomologyBasisSpec::new(vec![vec![], h1, vec![h2]]);
    let eps = knot_epsilon(pres, tol)?;
    let t = signed_torsion(tw.complex(), &h, tol)?;
    Ok(t.scaled(C64::new(f64::from(eps), 0.0))
        .with_residual("boundary_class", bc.residual)
        .with_residual("boundary_system", bc.system_residual))
}

/// `τ_μ(M; ρ)` at the abelian representation with meridian trace `c`.
///
/// The value is compared in absolute value with `Δ(m²)Δ(m⁻²)/(m - m⁻¹)²`;
/// the relative deviation is recorded as the `abelian_closed_form` residual.
pub fn torsion_knot_abelian(
    pres: &Presentation,
    c: C64,
    opts: &TorsionOptions,
    tol: &ToleranceContext,
) -> Result<TorsionValue> {
    pres.check_knot()?;
    let rep = abelian_representation(pres, c, tol)?;
    torsion_knot_abelian_at(pres, &rep, opts, tol)
}

/// [`torsion_knot_abelian`] at a given abelian representation, which may be
/// any conjugate of the diagonal one.
pub fn torsion_knot_abelian_at(
    pres: &Presentation,
    rep: &Representation,
    opts: &TorsionOptions,
    tol: &ToleranceContext,
) -> Result<TorsionValue> {
    if rep.kind() != RepKind::Abelian {
        return Err(Error::WrongKind("expected an abelian representation".into()));
    }
    let rep = &rep.balanced(pres)?;
    let m = rep.m();
    let delta = alexander_polynomial(pres)?;
    let g = tol.genericity_tol();
    let scale = delta
        .coeffs()
        .iter()
        .map(|c| c.unsigned_abs() as f64)
        .fold(1.0, f64::max);
    for z in [m * m, (m * m).inv()] {
        if delta.eval(z).norm() <= g * scale {
            return Err(Error::non_generic(m + m.inv(), "Δ(m²) vanishes"));
        }
    }
    let tw = twisted_cochain_complex(pres, rep, tol)?;
    let p = invariant_vector(rep, pres, opts)?;
    let psi0 = pairing_row(&p);
    let h0 = psi_preimages(tw.delta0(), &psi0, tol)?;
    let psi1 = psi_row_for_word(pres, rep, pres.meridian(), &p)?;
    let h1 = psi_preimages(tw.delta1(), &psi1, tol)?;
    let h = HomologyBasisSpec::new(vec![h0, h1, vec![]]);
    let eps = knot_epsilon(pres, tol)?;
    let t = signed_torsion(tw.complex(), &h, tol)?.scaled(C64::new(f64::from(eps), 0.0));
    let closed = abelian_closed_form(pres, m)?;
    let dev = (t.value.norm() - closed.norm()).abs() / closed.norm();
    Ok(t.with_residual("abelian_closed_form", dev))
}
