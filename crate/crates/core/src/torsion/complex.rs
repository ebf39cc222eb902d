use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::matrix::{rank_factorize, CMatrix, Svd, C64};
use crate::numeric::ToleranceContext;

/// Whether the differentials raise or lower the degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Cochain complex, `d_i : C^i -> C^{i+1}`.
    Ascending,
    /// Chain complex, `∂_i : C_i -> C_{i-1}`.
    Descending,
}

/// A finite complex of based vector spaces `C_0, ..., C_n`.
///
/// `maps[k]` always connects pieces `k` and `k + 1`: for ascending complexes
/// it is `d_k`, a `dims[k+1] x dims[k]` matrix; for descending complexes it is
/// `∂_{k+1}`, a `dims[k] x dims[k+1]` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BasedComplex {
    direction: Direction,
    dims: Vec<usize>,
    maps: Vec<CMatrix>,
}

impl BasedComplex {
    /// Checks shapes only; see [`BasedComplex::validate`] for the cochain condition.
    pub fn new(direction: Direction, dims: Vec<usize>, maps: Vec<CMatrix>) -> Result<Self> {
        if dims.is_empty() {
            if !maps.is_empty() {
                return Err(Error::Shape("maps supplied for an empty complex".into()));
            }
        } else if maps.len() != dims.len() - 1 {
            return Err(Error::Shape(format!(
                "{} pieces need {} maps, got {}",
                dims.len(),
                dims.len() - 1,
                maps.len()
            )));
        }
        for (k, m) in maps.iter().enumerate() {
            let want = match direction {
                Direction::Ascending => (dims[k + 1], dims[k]),
                Direction::Descending => (dims[k], dims[k + 1]),
            };
            if m.shape() != want {
                return Err(Error::Shape(format!(
                    "map between pieces {k} and {} is {}x{}, expected {}x{}",
                    k + 1,
                    m.rows(),
                    m.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        Ok(Self { direction, dims, maps })
    }

    /// Like [`BasedComplex::new`] but also checks that consecutive maps compose to zero.
    pub fn checked(direction: Direction, dims: Vec<usize>, maps: Vec<CMatrix>, tol: &ToleranceContext) -> Result<Self> {
        let c = Self::new(direction, dims, maps)?;
        c.validate(tol)?;
        Ok(c)
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[CMatrix] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// The differential leaving piece `i` (zero map off the ends).
    pub fn outgoing(&self, i: usize) -> CMatrix {
        match self.direction {
            Direction::Ascending if i + 1 < self.len() => self.maps[i].clone(),
            Direction::Descending if i > 0 => self.maps[i - 1].clone(),
            Direction::Ascending => CMatrix::zeros(0, self.dims[i]),
            Direction::Descending => CMatrix::zeros(0, self.dims[i]),
        }
    }

    /// The differential arriving at piece `i`.
    pub fn incoming(&self, i: usize) -> CMatrix {
        match self.direction {
            Direction::Ascending if i > 0 => self.maps[i - 1].clone(),
            Direction::Descending if i + 1 < self.len() => self.maps[i].clone(),
            Direction::Ascending | Direction::Descending => CMatrix::zeros(self.dims[i], 0),
        }
    }

    /// Largest entry of `d∘d` over consecutive pairs.
    pub fn composition_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..self.maps.len().saturating_sub(1) {
            let prod = match self.direction {
                Direction::Ascending => &self.maps[k + 1] * &self.maps[k],
                Direction::Descending => &self.maps[k] * &self.maps[k + 1],
            };
            worst = worst.max(prod.max_abs());
        }
        worst
    }

    pub fn validate(&self, tol: &ToleranceContext) -> Result<()> {
        for k in 0..self.maps.len().saturating_sub(1) {
            let (second, first) = match self.direction {
                Direction::Ascending => (&self.maps[k + 1], &self.maps[k]),
                Direction::Descending => (&self.maps[k], &self.maps[k + 1]),
            };
            let prod = second * first;
            let scale = 1f64.max(second.max_abs() * first.max_abs() * first.rows().max(1) as f64);
            if prod.max_abs() > tol.residual_tol * scale {
                return Err(Error::Structural(format!(
                    "consecutive differentials around piece {} compose to {:.3e}, not zero",
                    k + 1,
                    prod.max_abs()
                )));
            }
        }
        Ok(())
    }

    /// Rank of `maps[k]` under the tolerance policy.
    pub fn map_rank(&self, k: usize, tol: &ToleranceContext) -> usize {
        rank_factorize(&self.maps[k], tol).rank
    }

    /// Homology dimensions inferred from ranks.
    pub fn homology_dims(&self, tol: &ToleranceContext) -> Vec<usize> {
        let ranks: Vec<usize> = (0..self.maps.len()).map(|k| self.map_rank(k, tol)).collect();
        (0..self.len())
            .map(|i| {
                let left = if i > 0 { ranks[i - 1] } else { 0 };
                let right = ranks.get(i).copied().unwrap_or(0);
                self.dims[i].saturating_sub(left + right)
            })
            .collect()
    }

    /// Same spaces and maps read in the opposite direction: piece `i` becomes
    /// piece `n - i`.
    pub fn reversed(&self) -> Self {
        let direction = match self.direction {
            Direction::Ascending => Direction::Descending,
            Direction::Descending => Direction::Ascending,
        };
        Self {
            direction,
            dims: self.dims.iter().rev().copied().collect(),
            maps: self.maps.iter().rev().cloned().collect(),
        }
    }

    pub fn profile(&self, homology_dims: &[usize]) -> ComplexProfile {
        ComplexProfile::new(&self.dims, homology_dims)
    }
}

/// Chosen cycle representatives of a homology basis, per degree.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HomologyBasisSpec {
    vectors: Vec<Vec<Vec<C64>>>,
}

impl HomologyBasisSpec {
    pub fn new(vectors: Vec<Vec<Vec<C64>>>) -> Self {
        Self { vectors }
    }

    /// No homology classes in any of `len` degrees.
    pub fn empty(len: usize) -> Self {
        Self {
            vectors: vec![Vec::new(); len],
        }
    }

    /// Builds the spec from one matrix per degree whose columns are the cycles.
    pub fn from_matrices(mats: &[CMatrix]) -> Self {
        Self {
            vectors: mats
                .iter()
                .map(|m| (0..m.cols()).map(|j| m.column(j)).collect())
                .collect(),
        }
    }

    pub fn degree(&self, i: usize) -> &[Vec<C64>] {
        self.vectors.get(i).map_or(&[], Vec::as_slice)
    }

    pub fn degree_mut(&mut self, i: usize) -> &mut Vec<Vec<C64>> {
        if self.vectors.len() <= i {
            self.vectors.resize(i + 1, Vec::new());
        }
        &mut self.vectors[i]
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.iter().all(Vec::is_empty)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.vectors.iter().map(Vec::len).collect()
    }

    /// Degree `i` as a `dim x count` matrix.
    pub fn matrix(&self, i: usize, dim: usize) -> Result<CMatrix> {
        CMatrix::from_columns(dim, self.degree(i)).map_err(|_| Error::InvalidHomologyBasis {
            degree: i,
            reason: format!("every vector must have length {dim}"),
        })
    }
}

/// The counting data `α_i = Σ_{j≤i} dim C_j`, `β_i = Σ_{j≤i} dim H_j` and
/// the parity of `Σ α_i β_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexProfile {
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    pub sign_exponent: usize,
}

impl ComplexProfile {
    pub fn new(dims: &[usize], homology_dims: &[usize]) -> Self {
        let prefix = |v: &[usize]| -> Vec<usize> {
            v.iter()
                .scan(0, |acc, &d| {
                    *acc += d;
                    Some(*acc)
                })
                .collect()
        };
        let alpha = prefix(dims);
        let mut beta = prefix(homology_dims);
        beta.resize(alpha.len(), beta.last().copied().unwrap_or(0));
        let sign_exponent = alpha.iter().zip(&beta).map(|(a, b)| a * b).sum::<usize>() % 2;
        Self {
            alpha,
            beta,
            sign_exponent,
        }
    }

    pub fn sign(&self) -> f64 {
        if self.sign_exponent.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

/// Orthonormal basis of the kernel of `a`, as columns.
pub fn kernel_basis(a: &CMatrix, tol: &ToleranceContext) -> CMatrix {
    let n = a.cols();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let padded = if a.rows() < n {
        CMatrix::vstack(&[a, &CMatrix::zeros(n - a.rows(), n)]).expect("same width")
    } else {
        a.clone()
    };
    let svd = Svd::new(&padded);
    let smax = svd.singular.iter().copied().fold(0.0, f64::max);
    let cutoff = tol.rank_tol * smax.max(f64::MIN_POSITIVE);
    let cols: Vec<usize> = (0..n).filter(|&j| svd.singular[j] <= cutoff).collect();
    svd.v.select_columns(&cols)
}

/// Orthonormal basis of the column space of `a`.
pub fn range_basis(a: &CMatrix, tol: &ToleranceContext) -> CMatrix {
    if a.cols() == 0 || a.rows() == 0 {
        return CMatrix::zeros(a.rows(), 0);
    }
    let svd = Svd::new(a);
    let smax = svd.singular.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return CMatrix::zeros(a.rows(), 0);
    }
    let cols: Vec<usize> = (0..svd.singular.len())
        .filter(|&j| svd.singular[j] > tol.rank_tol * smax)
        .collect();
    svd.u.select_columns(&cols)
}

/// A homology basis of `c` whose representatives are orthonormal cycles
/// orthogonal to the incoming boundaries.
pub fn homology_basis(c: &BasedComplex, tol: &ToleranceContext) -> HomologyBasisSpec {
    let mut spec = HomologyBasisSpec::empty(c.len());
    for i in 0..c.len() {
        let kernel = kernel_basis(&c.outgoing(i), tol);
        let image = range_basis(&c.incoming(i), tol);
        let expected = kernel.cols().saturating_sub(image.cols());
        if expected == 0 {
            continue;
        }
        // Project the kernel off the image; what survives spans homology.
        let proj = &kernel - &(&image * &(&image.adjoint() * &kernel));
        let reps = range_basis(&proj, tol);
        for j in 0..reps.cols().min(expected) {
            spec.degree_mut(i).push(reps.column(j));
        }
    }
    spec
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_are_checked() {
        let ok = BasedComplex::new(Direction::Ascending, vec![1, 2], vec![CMatrix::zeros(2, 1)]);
        assert!(ok.is_ok());
        let bad = BasedComplex::new(Direction::Ascending, vec![1, 2], vec![CMatrix::zeros(1, 2)]);
        assert!(matches!(bad, Err(Error::Shape(_))));
        let desc = BasedComplex::new(Direction::Descending, vec![1, 2], vec![CMatrix::zeros(1, 2)]);
        assert!(desc.is_ok());
    }

    #[test]
    fn profile_counts() {
        let p = ComplexProfile::new(&[3, 6, 3], &[0, 1, 1]);
        assert_eq!(p.alpha, vec![3, 9, 12]);
        assert_eq!(p.beta, vec![0, 1, 2]);
        assert_eq!(p.sign_exponent, (9 + 24) % 2);
    }

    #[test]
    fn composition_failure_is_structural() {
        let one = CMatrix::identity(1);
        let c = BasedComplex::new(Direction::Ascending, vec![1, 1, 1], vec![one.clone(), one]).unwrap();
        assert!(matches!(
            c.validate(&ToleranceContext::default()),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn homology_of_zero_map() {
        let c = BasedComplex::new(Direction::Ascending, vec![2, 1], vec![CMatrix::zeros(1, 2)]).unwrap();
        let tol = ToleranceContext::default();
        assert_eq!(c.homology_dims(&tol), vec![2, 1]);
        assert_eq!(homology_basis(&c, &tol).counts(), vec![2, 1]);
    }
}
