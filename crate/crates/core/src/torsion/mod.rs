//! Reidemeister torsion of finite based complexes.

pub mod complex;
pub mod engine;
pub mod gluing;
pub mod random;

pub use complex::{homology_basis, kernel_basis, BasedComplex, ComplexProfile, Direction, HomologyBasisSpec};
pub use engine::{epsilon_sign, signed_torsion, torsion, torsion_with_chains, TorsionDiagnostics, TorsionValue};
pub use gluing::{gluing_signs, long_exact_sequence, verify_gluing, GluingReport};
