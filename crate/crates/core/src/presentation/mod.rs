//! Group presentations, Fox calculus, two-bridge knots and Alexander polynomials.

pub mod alexander;
pub mod parser;
pub mod two_bridge;
pub mod words;

pub use alexander::{alexander_polynomial, alexander_polynomial_deleting, IntPoly};
pub use parser::{parse_presentation, serialize_presentation};
pub use two_bridge::{
    peripheral_certificate, two_bridge_presentation, validate_longitude, ConsequenceTerm, LongitudeReport,
    PeripheralCertificate, TwoBridgeKnot,
};
pub use words::{fox_derivative, FreeWord, GroupRingElement, Letter};

use crate::error::{Error, Result};

/// Generators, relators and the peripheral words of a knot group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<FreeWord>,
    meridian: FreeWord,
    longitude: Option<FreeWord>,
}

impl Presentation {
    /// Checks that every word only uses known generators.
    pub fn new(
        generators: Vec<String>,
        relators: Vec<FreeWord>,
        meridian: FreeWord,
        longitude: Option<FreeWord>,
    ) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Structural("a presentation needs at least one generator".into()));
        }
        let n = generators.len();
        let words = relators.iter().chain(Some(&meridian)).chain(longitude.as_ref());
        for w in words {
            if let Some(g) = w.max_generator() {
                if g >= n {
                    return Err(Error::Structural(format!(
                        "word refers to generator {g} but only {n} exist"
                    )));
                }
            }
        }
        Ok(Self {
            generators,
            relators: relators.into_iter().map(|r| r.reduced()).collect(),
            meridian: meridian.reduced(),
            longitude: longitude.map(|l| l.reduced()),
        })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[FreeWord] {
        &self.relators
    }

    pub fn meridian(&self) -> &FreeWord {
        &self.meridian
    }

    pub fn longitude(&self) -> Option<&FreeWord> {
        self.longitude.as_ref()
    }

    pub fn deficiency(&self) -> i64 {
        self.generators.len() as i64 - self.relators.len() as i64
    }

    pub fn with_longitude(&self, longitude: Option<FreeWord>) -> Result<Self> {
        Self::new(
            self.generators.clone(),
            self.relators.clone(),
            self.meridian.clone(),
            longitude,
        )
    }

    /// Checks the shape of a knot group presentation: deficiency one, every
    /// relator of total exponent zero and the meridian of total exponent one.
    pub fn check_knot(&self) -> Result<()> {
        if self.deficiency() != 1 {
            return Err(Error::Domain(format!(
                "knot presentations have deficiency 1, this one has {}",
                self.deficiency()
            )));
        }
        for (j, r) in self.relators.iter().enumerate() {
            if r.total_exponent() != 0 {
                return Err(Error::Domain(format!(
                    "relator {j} has total exponent {}, expected 0",
                    r.total_exponent()
                )));
            }
        }
        if self.meridian.total_exponent().abs() != 1 {
            return Err(Error::Domain("meridian must have total exponent +-1".into()));
        }
        Ok(())
    }
}
