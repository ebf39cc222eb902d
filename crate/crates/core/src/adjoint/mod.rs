//! Twisted cochain complexes `C*(X; g_ρ)` of presentation complexes and the
//! adjoint torsions built from them.

mod knot;
mod model;

pub use knot::{real_presentation_complex, torsion_knot_abelian, torsion_knot_abelian_at, torsion_knot_irreducible};
pub use model::{composing_space_presentation, torsion_composing_space, torsion_torus, ComposingSpaceSpec};

use crate::error::{Error, Result};
use crate::numeric::matrix::{CMatrix, C64, ONE};
use crate::numeric::{solve_linear, ToleranceContext};
use crate::presentation::{fox_derivative, peripheral_certificate, FreeWord, Presentation};
use crate::representation::Representation;
use crate::sl2::{adjoint, evaluate_with, killing_matrix, LieVector};
use crate::torsion::{BasedComplex, Direction};

/// Knobs that do not change torsion values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorsionOptions {
    /// Multiplies the invariant vector `P`.
    pub p_scale: C64,
}

impl Default for TorsionOptions {
    fn default() -> Self {
        Self { p_scale: ONE }
    }
}

/// The cochain complex `g -> g^n -> g^(n-1)` of a presentation complex in the
/// geometric basis (cells in presentation order, `e1, e2, e3` within a cell).
#[derive(Debug, Clone)]
pub struct TwistedComplex {
    complex: BasedComplex,
    num_generators: usize,
    num_relators: usize,
    composition_residual: f64,
}

impl TwistedComplex {
    pub fn complex(&self) -> &BasedComplex {
        &self.complex
    }

    pub fn delta0(&self) -> &CMatrix {
        &self.complex.maps()[0]
    }

    pub fn delta1(&self) -> &CMatrix {
        &self.complex.maps()[1]
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn num_relators(&self) -> usize {
        self.num_relators
    }

    pub fn composition_residual(&self) -> f64 {
        self.composition_residual
    }
}

/// `δ⁰` stacks `Ad ρ(g_i) - I`; block `(j, i)` of `δ¹` is `Φ(∂r_j/∂g_i)`.
pub fn twisted_cochain_complex(
    pres: &Presentation,
    rep: &Representation,
    tol: &ToleranceContext,
) -> Result<TwistedComplex> {
    let n = pres.num_generators();
    let r = pres.relators().len();
    let images = rep.images();
    if images.len() != n {
        return Err(Error::Assembly(format!("{} images for {n} generators", images.len())));
    }
    let mut d0 = CMatrix::zeros(3 * n, 3);
    for (i, g) in images.iter().enumerate() {
        let block = adjoint(g).matrix() - &CMatrix::identity(3);
        d0.set_block(3 * i, 0, &block);
    }
    let mut d1 = CMatrix::zeros(3 * r, 3 * n);
    for (j, rel) in pres.relators().iter().enumerate() {
        for i in 0..n {
            let block = evaluate_with(&fox_derivative(rel, i), images)?;
            d1.set_block(3 * j, 3 * i, &block);
        }
    }
    let composition = (&d1 * &d0).max_abs();
    let scale = d1.max_abs().max(1.0) * d0.max_abs().max(1.0);
    if !(composition <= tol.residual_tol * scale) {
        return Err(Error::Assembly(format!(
            "δ¹δ⁰ has entries of size {composition:e}; the representation or presentation is inconsistent"
        )));
    }
    let complex = BasedComplex::new(Direction::Ascending, vec![3, 3 * n, 3 * r], vec![d0, d1])?;
    Ok(TwistedComplex {
        complex,
        num_generators: n,
        num_relators: r,
        composition_residual: composition,
    })
}

/// `P = s (g - g⁻¹) / (8 (m - m⁻¹))` for `g = ρ(μ)`; this is `s e2 / 8` when
/// `ρ(μ) = diag(m, 1/m)` and is fixed by `Ad ρ(μ)` in general.
pub fn invariant_vector(rep: &Representation, pres: &Presentation, opts: &TorsionOptions) -> Result<LieVector> {
    let m = rep.m();
    let s = m - m.inv();
    if s.norm() == 0.0 {
        return Err(Error::Domain("meridian eigenvalue is ±1".into()));
    }
    let g = rep.word_image(pres.meridian())?;
    let v = g.antisymmetric_part();
    let f = opts.p_scale / (s * 8.0);
    Ok([v[0] * f, v[1] * f, v[2] * f])
}

/// The row vector `Pᵀ K`, so that `<x, P> = (Pᵀ K) x`.
pub fn pairing_row(p: &LieVector) -> CMatrix {
    let pm = CMatrix::from_fn(1, 3, |_, j| p[j]);
    &pm * &killing_matrix()
}

/// Row of `ψ_γ(α) = <α(γ̃), P>` on 1-cochains, for a word `γ`.
pub fn psi_row_for_word(pres: &Presentation, rep: &Representation, word: &FreeWord, p: &LieVector) -> Result<CMatrix> {
    let n = pres.num_generators();
    let k = pairing_row(p);
    let mut row = CMatrix::zeros(1, 3 * n);
    for i in 0..n {
        let block = evaluate_with(&fox_derivative(word, i), rep.images())?;
        row.set_block(0, 3 * i, &(&k * &block));
    }
    Ok(row)
}

/// Solutions `z_k` of `δ z = 0`, `Ψ z = e_k`, one per row of `Ψ`, of
/// minimal norm. Fails if `Ψ` does not induce an isomorphism on cohomology
/// in the expected way.
pub(crate) fn psi_preimages(delta: &CMatrix, psi: &CMatrix, tol: &ToleranceContext) -> Result<Vec<Vec<C64>>> {
    let k = psi.rows();
    let a = CMatrix::vstack(&[delta, psi])?;
    let mut rhs = CMatrix::zeros(a.rows(), k);
    for j in 0..k {
        rhs[(delta.rows() + j, j)] = ONE;
    }
    let sol = solve_linear(&a, &rhs, tol)?;
    // Backward error: relative to the size of the system and its solution.
    let residual = sol.residual / (a.max_abs() * sol.solution.max_abs()).max(1.0);
    if !(residual <= tol.residual_tol) {
        return Err(Error::Regularity(format!(
            "ψ does not reach the standard basis on cocycles (residual {residual:e})"
        )));
    }
    Ok((0..k).map(|j| sol.solution.column(j)).collect())
}

/// `Ξ_j` per relator such that `Φ(∂[μ,λ]/∂g) = Σ_j Ξ_j Φ(∂r_j/∂g)`.
#[derive(Debug, Clone)]
pub struct BoundaryClass {
    pub xi: Vec<CMatrix>,
    /// Largest deviation in the defining identity, relative to its size.
    pub residual: f64,
    /// Residual of the least-squares form of the same system.
    pub system_residual: f64,
}

impl BoundaryClass {
    /// The row of `ψ²(α) = Σ_j <Ξ_j α(r̃_j), P>` on 2-cochains.
    pub fn psi_row(&self, p: &LieVector) -> CMatrix {
        let k = pairing_row(p);
        let mut row = CMatrix::zeros(1, 3 * self.xi.len());
        for (j, x) in self.xi.iter().enumerate() {
            row.set_block(0, 3 * j, &(&k * x));
        }
        row
    }
}

/// The 2-chain bounded by the peripheral commutator, read off an exact
/// free-group identity `[μ, λ] = ∏ c_k r^(e_k) c_k⁻¹`.
///
/// The linear system `X Φ(∂r/∂g) = Φ(∂[μ,λ]/∂g)` is also solved by least
/// squares and must be consistent; its solution is not used because the
/// system leaves `X` undetermined along the cokernel of `δ¹`.
pub fn boundary_class(pres: &Presentation, rep: &Representation, tol: &ToleranceContext) -> Result<BoundaryClass> {
    let longitude = pres
        .longitude()
        .ok_or_else(|| Error::BoundaryClass("presentation has no longitude".into()))?;
    let n = pres.num_generators();
    let r = pres.relators().len();
    let images = rep.images();
    let comm = FreeWord::commutator(pres.meridian(), longitude);
    let mut lhs = CMatrix::zeros(3, 3 * n);
    let mut fox = CMatrix::zeros(3 * r, 3 * n);
    for i in 0..n {
        lhs.set_block(0, 3 * i, &evaluate_with(&fox_derivative(&comm, i), images)?);
        for (j, rel) in pres.relators().iter().enumerate() {
            fox.set_block(3 * j, 3 * i, &evaluate_with(&fox_derivative(rel, i), images)?);
        }
    }
    let scale = lhs.max_abs().max(1.0);
    let ls = solve_linear(&fox.transpose(), &lhs.transpose(), tol)?;
    let system_residual = ls.residual / scale;
    if !(system_residual <= tol.residual_tol) {
        return Err(Error::BoundaryClass(format!(
            "[μ, λ] is not a consequence of the relators at this representation (residual {system_residual:e}); the longitude is likely wrong"
        )));
    }
    let cert = peripheral_certificate(pres).map_err(|e| Error::BoundaryClass(e.to_string()))?;
    let mut xi = vec![CMatrix::zeros(3, 3); r];
    for t in &cert.terms {
        let ad = adjoint(&rep.word_image(&t.conjugator_word())?).into_matrix();
        xi[t.relator] = &xi[t.relator] + &ad.scale(C64::new(f64::from(t.exponent), 0.0));
    }
    let xi_row = CMatrix::hstack(&xi.iter().collect::<Vec<_>>())?;
    let residual = (&(&xi_row * &fox) - &lhs).max_abs() / scale;
    if !(residual <= tol.residual_tol) {
        return Err(Error::BoundaryClass(format!(
            "certificate identity fails numerically ({residual:e})"
        )));
    }
    Ok(BoundaryClass {
        xi,
        residual,
        system_residual,
    })
}
