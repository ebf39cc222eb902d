//! Connected sums of two-bridge knots: components of the meridian level set,
//! the product formula for the torsion and the reciprocal-sum identity.

use std::fmt;

use serde::Serialize;

use crate::adjoint::{torsion_knot_abelian_at, torsion_knot_irreducible, TorsionOptions};
use crate::error::{Error, Result};
use crate::numeric::matrix::{C64, ONE};
use crate::numeric::ToleranceContext;
use crate::presentation::{two_bridge_presentation, Presentation, TwoBridgeKnot};
use crate::representation::{
    abelian_representation, meridian_eigenvalue, solve_level_set, LevelSetPoint, Representation,
};
use crate::sl2::SL2Value;
use crate::torsion::TorsionValue;

/// The knot `K_1 # ... # K_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectedSumSpec {
    factors: Vec<TwoBridgeKnot>,
}

impl ConnectedSumSpec {
    pub fn new(factors: Vec<TwoBridgeKnot>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Domain("a connected sum needs at least one factor".into()));
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[TwoBridgeKnot] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

/// Restriction of a component to one factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "index")]
pub enum FactorChoice {
    Abelian,
    /// Index into the factor's sorted level set.
    Irreducible(usize),
}

/// A component of the level set, labelled by its factor characters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ComponentDescriptor {
    pub choices: Vec<FactorChoice>,
    pub at_least_one_irreducible: bool,
}

impl fmt::Display for ComponentDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .choices
            .iter()
            .map(|c| match c {
                FactorChoice::Abelian => "ab".to_string(),
                FactorChoice::Irreducible(i) => format!("irr{i}"),
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Level-set data of one factor at a fixed trace.
#[derive(Debug, Clone)]
pub struct FactorLevelSet {
    pub knot: TwoBridgeKnot,
    pub presentation: Presentation,
    pub points: Vec<LevelSetPoint>,
    pub abelian: Representation,
}

/// Per-factor level sets at a trace `c` where every factor is generic.
#[derive(Debug, Clone)]
pub struct ConnectedSumLevelSet {
    pub c: C64,
    pub m: C64,
    pub factors: Vec<FactorLevelSet>,
}

/// Solves every factor's level set and checks genericity of each point.
pub fn factor_level_sets(spec: &ConnectedSumSpec, c: C64, tol: &ToleranceContext) -> Result<ConnectedSumLevelSet> {
    let m = meridian_eigenvalue(c, tol)?;
    let mut factors = Vec::with_capacity(spec.len());
    for &knot in spec.factors() {
        let presentation = two_bridge_presentation(&knot);
        let points = solve_level_set(&knot, c, tol)?;
        if let Some(bad) = points.iter().find(|p| !p.regularity.generic) {
            return Err(Error::non_generic(
                c,
                format!("factor {knot} has a non-generic point at u = {}", bad.u),
            ));
        }
        let abelian = abelian_representation(&presentation, c, tol)?;
        factors.push(FactorLevelSet {
            knot,
            presentation,
            points,
            abelian,
        });
    }
    Ok(ConnectedSumLevelSet { c, m, factors })
}

impl ConnectedSumLevelSet {
    /// All tuples of factor characters except the all-abelian one, in
    /// lexicographic order with `Abelian` first.
    pub fn components(&self) -> Vec<ComponentDescriptor> {
        let mut out = vec![Vec::new()];
        for f in &self.factors {
            let mut next = Vec::with_capacity(out.len() * (f.points.len() + 1));
            for prefix in &out {
                let options =
                    std::iter::once(FactorChoice::Abelian).chain((0..f.points.len()).map(FactorChoice::Irreducible));
                for choice in options {
                    let mut v: Vec<FactorChoice> = prefix.clone();
                    v.push(choice);
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter()
            .filter(|v| v.iter().any(|c| *c != FactorChoice::Abelian))
            .map(|choices| ComponentDescriptor {
                choices,
                at_least_one_irreducible: true,
            })
            .collect()
    }

    fn representative(&self, comp: &ComponentDescriptor) -> Result<Vec<Representation>> {
        if comp.choices.len() != self.factors.len() {
            return Err(Error::Domain(format!(
                "component has {} factor choices for {} factors",
                comp.choices.len(),
                self.factors.len()
            )));
        }
        let mut reps = Vec::with_capacity(self.factors.len());
        for (f, choice) in self.factors.iter().zip(&comp.choices) {
            reps.push(match *choice {
                FactorChoice::Abelian => f.abelian.clone(),
                FactorChoice::Irreducible(i) => f
                    .points
                    .get(i)
                    .ok_or_else(|| Error::Domain(format!("factor {} has no point {i}", f.knot)))?
                    .rep
                    .clone(),
            });
        }
        Ok(reps)
    }

    /// Torsion of a component, evaluated at the given factor representatives.
    pub fn torsion_at(
        &self,
        reps: &[Representation],
        opts: &TorsionOptions,
        tol: &ToleranceContext,
    ) -> Result<TorsionValue> {
        if reps.len() != self.factors.len() {
            return Err(Error::Domain("one representation per factor is required".into()));
        }
        let factors: Vec<(&Presentation, &Representation)> =
            self.factors.iter().map(|f| &f.presentation).zip(reps).collect();
        product_formula(self.m, &factors, opts, tol)
    }

    pub fn torsion(
        &self,
        comp: &ComponentDescriptor,
        opts: &TorsionOptions,
        tol: &ToleranceContext,
    ) -> Result<TorsionValue> {
        let reps = self.representative(comp)?;
        self.torsion_at(&reps, opts, tol)
    }
}

/// `(m - m⁻¹)^(2n-2) ∏ τ_μ(M_j; ρ_j)`.
pub fn product_formula(
    m: C64,
    factors: &[(&Presentation, &Representation)],
    opts: &TorsionOptions,
    tol: &ToleranceContext,
) -> Result<TorsionValue> {
    let n = factors.len();
    let s = m - m.inv();
    let mut value = s.powi(2 * n as i32 - 2);
    let mut worst: f64 = 0.0;
    let mut last = None;
    for (pres, rep) in factors {
        let t = match rep.kind() {
            crate::representation::RepKind::Abelian => torsion_knot_abelian_at(pres, rep, opts, tol)?,
            crate::representation::RepKind::Irreducible => torsion_knot_irreducible(pres, rep, opts, tol)?,
        };
        value *= t.value;
        worst = worst.max(t.max_residual());
        last = Some(t);
    }
    let mut out = last.expect("at least one factor");
    out.value = value;
    out.diagnostics.residuals.clear();
    Ok(out.with_residual("factor_max", worst))
}

pub fn enumerate_components(
    spec: &ConnectedSumSpec,
    c: C64,
    tol: &ToleranceContext,
) -> Result<Vec<ComponentDescriptor>> {
    Ok(factor_level_sets(spec, c, tol)?.components())
}

pub fn torsion_connected_sum(
    spec: &ConnectedSumSpec,
    c: C64,
    comp: &ComponentDescriptor,
    opts: &TorsionOptions,
    tol: &ToleranceContext,
) -> Result<TorsionValue> {
    factor_level_sets(spec, c, tol)?.torsion(comp, opts, tol)
}

/// Conjugation of a factor representation by `diag(s, 1/s)`, which
/// centralizes the diagonal peripheral images and so defines the same
/// representation of the connected sum up to bending.
pub fn bend(rep: &Representation, s: C64) -> Result<Representation> {
    if s.norm() == 0.0 || !s.is_finite() {
        return Err(Error::Domain("bending parameter must be nonzero".into()));
    }
    Ok(rep.conjugated(&SL2Value::diagonal(s)))
}

/// One term of the reciprocal sum.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentTerm {
    pub component: ComponentDescriptor,
    #[serde(serialize_with = "crate::representation::ser_complex")]
    pub torsion: C64,
    #[serde(serialize_with = "crate::representation::ser_complex")]
    pub reciprocal: C64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VanishingReport {
    #[serde(serialize_with = "crate::representation::ser_complex")]
    pub sum: C64,
    /// `Σ |1/τ|`, the natural scale for `sum`.
    pub abs_sum: f64,
    pub expansion_residual: f64,
    pub terms: Vec<ComponentTerm>,
}

impl VanishingReport {
    pub fn relative(&self) -> f64 {
        if self.abs_sum == 0.0 {
            0.0
        } else {
            self.sum.norm() / self.abs_sum
        }
    }
}

/// `Σ 1/τ` over the components at trace `c`, together with the deviation
/// from the factorized expansion
/// `(c² - 4)^(n-1) Σ 1/τ = ∏ (S_j + 1/τ_j^ab) - ∏ 1/τ_j^ab`, where `S_j`
/// sums `1/τ` over the irreducible points of factor `j`. The deviation is
/// relative to `(c² - 4)^(n-1) Σ |1/τ|`.
pub fn vanishing_sum(
    spec: &ConnectedSumSpec,
    c: C64,
    opts: &TorsionOptions,
    tol: &ToleranceContext,
) -> Result<VanishingReport> {
    let ls = factor_level_sets(spec, c, tol)?;
    // Factor torsions are computed once and reused in every component.
    let mut irr = Vec::with_capacity(ls.factors.len());
    let mut ab = Vec::with_capacity(ls.factors.len());
    for f in &ls.factors {
        let ts: Vec<C64> = f
            .points
            .iter()
            .map(|p| torsion_knot_irreducible(&f.presentation, &p.rep, opts, tol).map(|t| t.value))
            .collect::<Result<_>>()?;
        irr.push(ts);
        ab.push(torsion_knot_abelian_at(&f.presentation, &f.abelian, opts, tol)?.value);
    }
    let n = ls.factors.len();
    let s = ls.m - ls.m.inv();
    let front = s.powi(2 * n as i32 - 2);
    let mut sum = C64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut terms = Vec::new();
    for comp in ls.components() {
        let mut tau = front;
        for (j, choice) in comp.choices.iter().enumerate() {
            tau *= match *choice {
                FactorChoice::Abelian => ab[j],
                FactorChoice::Irreducible(i) => irr[j][i],
            };
        }
        let r = tau.inv();
        sum += r;
        abs_sum += r.norm();
        terms.push(ComponentTerm {
            component: comp,
            torsion: tau,
            reciprocal: r,
        });
    }
    let c2 = c * c - 4.0;
    let mut full = ONE;
    let mut abelian_only = ONE;
    for j in 0..n {
        let sj: C64 = irr[j].iter().map(|t| t.inv()).sum();
        full *= sj + ab[j].inv();
        abelian_only *= ab[j].inv();
    }
    let lift = c2.powi(n as i32 - 1);
    let scale = abs_sum * lift.norm();
    let expansion_residual = (sum * lift - (full - abelian_only)).norm() / if scale > 0.0 { scale } else { 1.0 };
    Ok(VanishingReport {
        sum,
        abs_sum,
        expansion_residual,
        terms,
    })
}
