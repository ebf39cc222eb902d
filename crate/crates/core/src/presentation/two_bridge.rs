use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::words::{FreeWord, Letter};
use super::Presentation;
use crate::error::{Error, Result};
use crate::numeric::ToleranceContext;
use crate::representation::{RepKind, Representation};
use crate::sl2::SL2Value;

/// The two-bridge knot `K(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TwoBridgeKnot {
    p: u32,
    q: u32,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl TwoBridgeKnot {
    /// Requires `p` odd, `p >= 3`, `0 < q < p` and `gcd(p, q) = 1`.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidKnot {
            p,
            q,
            reason: reason.to_string(),
        };
        if p < 3 || p % 2 == 0 {
            return Err(bad("p must be odd and at least 3"));
        }
        if q <= 0 || q >= p {
            return Err(bad("q must satisfy 0 < q < p"));
        }
        if gcd(p as u64, q as u64) != 1 {
            return Err(bad("p and q must be coprime"));
        }
        if p > u32::MAX as i64 {
            return Err(bad("p too large"));
        }
        Ok(Self {
            p: p as u32,
            q: q as u32,
        })
    }

    pub fn trefoil() -> Self {
        Self { p: 3, q: 1 }
    }

    pub fn figure_eight() -> Self {
        Self { p: 5, q: 3 }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Signs `ε_i = (-1)^floor(i q' / p)` for `i = 1..p-1`, where `q' = q`
    /// for odd `q` and `q' = q - p` otherwise. Both give the same knot; the
    /// odd representative makes the sequence palindromic.
    pub fn signs(&self) -> Vec<i8> {
        let p = i64::from(self.p);
        let q = i64::from(self.q);
        let qq = if q % 2 == 1 { q } else { q - p };
        (1..p)
            .map(|i| if (i * qq).div_euclid(p) % 2 == 0 { 1 } else { -1 })
            .collect()
    }

    /// `w = a^ε1 b^ε2 a^ε3 ... b^ε(p-1)`.
    pub fn word(&self) -> FreeWord {
        FreeWord::new(self.signs().into_iter().enumerate().map(|(i, e)| Letter::new(i % 2, e)))
    }
}

impl fmt::Display for TwoBridgeKnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for TwoBridgeKnot {
    type Err = Error;

    /// Parses `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let (p, q) = s
            .trim()
            .split_once('/')
            .ok_or_else(|| Error::Domain(format!("expected p/q, got `{s}`")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|e| Error::Domain(format!("bad integer `{t}` in knot spec: {e}")))
        };
        Self::new(parse(p)?, parse(q)?)
    }
}

/// Two meridional generators `a, b`, relator `w a w^-1 b^-1`, meridian `a`
/// and longitude `w* w a^(-2σ)` where `w*` is `w` read backwards and `σ` is
/// the exponent sum of `w`.
pub fn two_bridge_presentation(k: &TwoBridgeKnot) -> Presentation {
    let a = FreeWord::generator(0);
    let b = FreeWord::generator(1);
    let w = k.word();
    let relator = w.concat(&a).concat(&w.inverse()).concat(&b.inverse());
    let w_star = w.reversed();
    let sigma = w.total_exponent();
    let longitude = w_star.concat(&w).concat(&FreeWord::power_of(0, -2 * sigma));
    Presentation::new(vec!["a".into(), "b".into()], vec![relator], a, Some(longitude))
        .expect("two-bridge words only use a and b")
}

/// One factor `c r_j^e c^-1` of a product of conjugated relators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsequenceTerm {
    pub conjugator: Vec<(usize, i8)>,
    pub relator: usize,
    pub exponent: i8,
}

impl ConsequenceTerm {
    fn new(conjugator: &FreeWord, relator: usize, exponent: i8) -> Self {
        Self {
            conjugator: conjugator.letters().iter().map(|l| (l.gen, l.exp)).collect(),
            relator,
            exponent,
        }
    }

    pub fn conjugator_word(&self) -> FreeWord {
        FreeWord::new(self.conjugator.iter().map(|&(g, e)| Letter::new(g, e)))
    }
}

/// A free-group identity `[μ, λ] = ∏ c_k r_(j_k)^(e_k) c_k^-1`, checked by free
/// reduction, exhibiting the peripheral commutator as a relator consequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeripheralCertificate {
    pub terms: Vec<ConsequenceTerm>,
}

impl PeripheralCertificate {
    /// Expands the product of conjugated relators in the free group.
    pub fn expand(&self, pres: &Presentation) -> FreeWord {
        let mut out = FreeWord::identity();
        for t in &self.terms {
            let r = pres.relators()[t.relator].pow(i64::from(t.exponent));
            out = out.concat(&r.conjugate(&t.conjugator_word()));
        }
        out
    }

    pub fn verify(&self, pres: &Presentation) -> bool {
        let Some(l) = pres.longitude() else {
            return false;
        };
        let valid = self.terms.iter().all(|t| t.relator < pres.relators().len());
        valid && self.expand(pres) == FreeWord::commutator(pres.meridian(), l)
    }
}

/// Certificate for presentations of the shape produced by
/// [`two_bridge_presentation`]: generators `a, b`, relator `w a w^-1 b^-1`
/// with `w` palindromic up to swapping `a` and `b`, meridian `a`.
///
/// Errors with a longitude-invalid error when the presentation is of that
/// shape but the stored longitude does not satisfy the identity.
pub fn peripheral_certificate(pres: &Presentation) -> Result<PeripheralCertificate> {
    let shape = |detail: &str| Error::Domain(format!("no peripheral certificate: {detail}"));
    if pres.num_generators() != 2 || pres.relators().len() != 1 {
        return Err(shape("expected two generators and one relator"));
    }
    if pres.longitude().is_none() {
        return Err(Error::LongitudeInvalid {
            check: "present",
            detail: "presentation has no longitude".into(),
        });
    }
    let r = &pres.relators()[0];
    let n = r.len();
    if n < 4 || !n.is_multiple_of(2) {
        return Err(shape("relator length does not fit w a w^-1 b^-1"));
    }
    let half = (n - 2) / 2;
    let w = r.prefix(half);
    let a = FreeWord::generator(0);
    let b = FreeWord::generator(1);
    let rebuilt = w.concat(&a).concat(&w.inverse()).concat(&b.inverse());
    if &rebuilt != r || pres.meridian() != &a {
        return Err(shape("relator is not w a w^-1 b^-1 with meridian a"));
    }
    let w_star = w.reversed();
    let t = w_star.concat(&b);
    let target = r.reversed();
    let mut found = None;
    'search: for e in [1i8, -1] {
        let y = if e == 1 { r.clone() } else { r.inverse() };
        for k in 0..y.len() {
            if y.rotate(k) == target {
                found = Some((y.prefix(k).inverse(), e));
                break 'search;
            }
        }
    }
    let (v, e) = found.ok_or_else(|| shape("relator is not conjugate to its reverse"))?;
    let cert = PeripheralCertificate {
        terms: vec![
            ConsequenceTerm::new(&t.concat(&v), 0, e),
            ConsequenceTerm::new(&w_star, 0, -1),
        ],
    };
    if !cert.verify(pres) {
        return Err(Error::LongitudeInvalid {
            check: "peripheral",
            detail: "[meridian, longitude] is not the expected relator consequence".into(),
        });
    }
    Ok(cert)
}

/// Outcome of [`validate_longitude`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LongitudeReport {
    pub exponent_sum: i64,
    /// Largest `|ρ(λ)ρ(μ) - ρ(μ)ρ(λ)|` over irreducible samples.
    pub commutator_residual: f64,
    /// Largest `|ρ(λ) - I|` over abelian samples.
    pub abelian_residual: f64,
    pub irreducible_samples: usize,
    pub abelian_samples: usize,
}

/// Checks (i) the longitude has exponent sum 0, (ii) it commutes with the
/// meridian under every irreducible sample and (iii) it maps to the identity
/// under every abelian sample.
pub fn validate_longitude(
    pres: &Presentation,
    reps: &[Representation],
    tol: &ToleranceContext,
) -> Result<LongitudeReport> {
    let l = pres.longitude().ok_or_else(|| Error::LongitudeInvalid {
        check: "present",
        detail: "presentation has no longitude".into(),
    })?;
    let exponent_sum = l.total_exponent();
    if exponent_sum != 0 {
        return Err(Error::LongitudeInvalid {
            check: "exponent-sum",
            detail: format!("total exponent {exponent_sum}"),
        });
    }
    let mut report = LongitudeReport {
        exponent_sum,
        commutator_residual: 0.0,
        abelian_residual: 0.0,
        irreducible_samples: 0,
        abelian_samples: 0,
    };
    for rep in reps {
        let rl = rep.word_image(l)?;
        match rep.kind() {
            RepKind::Irreducible => {
                let rm = rep.word_image(pres.meridian())?;
                let scale = rl.max_abs().max(rm.max_abs()).max(1.0);
                let r = (rl * rm).max_diff(&(rm * rl)) / (scale * scale);
                report.commutator_residual = report.commutator_residual.max(r);
                report.irreducible_samples += 1;
            }
            RepKind::Abelian => {
                let r = rl.max_diff(&SL2Value::identity());
                report.abelian_residual = report.abelian_residual.max(r);
                report.abelian_samples += 1;
            }
        }
    }
    if report.commutator_residual > tol.residual_tol {
        return Err(Error::LongitudeInvalid {
            check: "commutes-with-meridian",
            detail: format!("relative residual {:e}", report.commutator_residual),
        });
    }
    if report.abelian_residual > tol.residual_tol {
        return Err(Error::LongitudeInvalid {
            check: "abelian-trivial",
            detail: format!("residual {:e}", report.abelian_residual),
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{alexander_polynomial, parse_presentation, serialize_presentation};

    #[test]
    fn rejects_bad_parameters() {
        for (p, q) in [(4, 1), (1, 0), (5, 5), (9, 3), (5, 0), (7, -1)] {
            assert!(
                matches!(TwoBridgeKnot::new(p, q), Err(Error::InvalidKnot { .. })),
                "{p}/{q}"
            );
        }
        assert!("5/3".parse::<TwoBridgeKnot>().is_ok());
        assert!("5-3".parse::<TwoBridgeKnot>().is_err());
        assert!("x/3".parse::<TwoBridgeKnot>().is_err());
    }

    #[test]
    fn trefoil_and_figure_eight_words() {
        assert_eq!(TwoBridgeKnot::trefoil().signs(), vec![1, 1]);
        assert_eq!(TwoBridgeKnot::figure_eight().signs(), vec![1, -1, -1, 1]);
        let p = two_bridge_presentation(&TwoBridgeKnot::figure_eight());
        let text = serialize_presentation(&p);
        assert_eq!(parse_presentation(&text).unwrap(), p);
    }

    #[test]
    fn alexander_of_small_knots() {
        let t = two_bridge_presentation(&TwoBridgeKnot::trefoil());
        assert_eq!(alexander_polynomial(&t).unwrap().coeffs(), &[1, -1, 1]);
        let f = two_bridge_presentation(&TwoBridgeKnot::figure_eight());
        assert_eq!(alexander_polynomial(&f).unwrap().coeffs(), &[1, -3, 1]);
    }

    #[test]
    fn certificates_exist() {
        for p in (3..25).step_by(2) {
            for q in 1..p {
                let Ok(k) = TwoBridgeKnot::new(p, q) else { continue };
                let pres = two_bridge_presentation(&k);
                let cert = peripheral_certificate(&pres).unwrap();
                assert!(cert.verify(&pres), "{k}");
                assert_eq!(pres.longitude().unwrap().total_exponent(), 0);
            }
        }
    }

    #[test]
    fn corrupted_longitude_has_no_certificate() {
        let pres = two_bridge_presentation(&TwoBridgeKnot::figure_eight());
        let mut letters = pres.longitude().unwrap().letters().to_vec();
        letters[1] = letters[1].inverse();
        let bad = pres.with_longitude(Some(FreeWord::new(letters))).unwrap();
        assert!(matches!(
            peripheral_certificate(&bad),
            Err(Error::LongitudeInvalid { .. })
        ));
    }
}
