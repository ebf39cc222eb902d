//! Random based complexes and short exact sequences for fuzzing the engine.

use rand::Rng;

use super::complex::{homology_basis, BasedComplex, Direction, HomologyBasisSpec};
use crate::numeric::matrix::{singular_values, solve_linear, CMatrix, C64, ONE};
use crate::numeric::ToleranceContext;

fn random_entry<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| random_entry(rng))
}

/// A random change of basis, kept well conditioned by a dominant diagonal.
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let m = random_matrix(rng, n, n).scale(C64::new(0.5, 0.0));
    &m + &CMatrix::identity(n).scale(C64::new(2.0, 0.0))
}

fn reverse_spec(h: &HomologyBasisSpec, len: usize) -> HomologyBasisSpec {
    HomologyBasisSpec::new((0..len).rev().map(|i| h.degree(i).to_vec()).collect())
}

/// A random complex with the given piece dimensions and a matching homology basis.
pub fn random_complex<R: Rng + ?Sized>(
    rng: &mut R,
    direction: Direction,
    dims: &[usize],
) -> (BasedComplex, HomologyBasisSpec) {
    let tol = ToleranceContext::default();
    // Build an ascending complex on the dims in reading order, then reverse if needed.
    let order: Vec<usize> = match direction {
        Direction::Ascending => dims.to_vec(),
        Direction::Descending => dims.iter().rev().copied().collect(),
    };
    let n = order.len();
    let mut ranks = Vec::with_capacity(n.saturating_sub(1));
    let mut prev = 0;
    for k in 0..n.saturating_sub(1) {
        let cap = (order[k] - prev).min(order[k + 1]);
        let r = rng.gen_range(0..=cap);
        ranks.push(r);
        prev = r;
    }
    let change: Vec<CMatrix> = order.iter().map(|&d| random_invertible(rng, d)).collect();
    let inverse: Vec<CMatrix> = change
        .iter()
        .map(|p| {
            solve_linear(p, &CMatrix::identity(p.rows()), &tol)
                .expect("square")
                .solution
        })
        .collect();
    let mut maps = Vec::with_capacity(ranks.len());
    for (k, &r) in ranks.iter().enumerate() {
        let mut canon = CMatrix::zeros(order[k + 1], order[k]);
        let first = order[k] - r;
        for j in 0..r {
            canon[(j, first + j)] = ONE;
        }
        maps.push(&(&change[k + 1] * &canon) * &inverse[k]);
    }
    let mut h = HomologyBasisSpec::empty(n);
    for i in 0..n {
        let r_in = if i > 0 { ranks[i - 1] } else { 0 };
        let r_out = ranks.get(i).copied().unwrap_or(0);
        for j in r_in..order[i] - r_out {
            h.degree_mut(i).push(change[i].column(j));
        }
    }
    let c = BasedComplex::new(Direction::Ascending, order, maps).expect("shapes by construction");
    match direction {
        Direction::Ascending => (c, h),
        Direction::Descending => (c.reversed(), reverse_spec(&h, n)),
    }
}

/// A compatible short exact sequence `0 -> sub -> total -> quotient -> 0`
/// with bases for all three homologies.
#[derive(Debug, Clone)]
pub struct RandomSes {
    pub sub: BasedComplex,
    pub total: BasedComplex,
    pub quotient: BasedComplex,
    pub h_sub: HomologyBasisSpec,
    pub h_total: HomologyBasisSpec,
    pub h_quotient: HomologyBasisSpec,
}

/// True when every map has a clear gap between zero and nonzero singular values.
fn well_conditioned(c: &BasedComplex) -> bool {
    c.maps().iter().all(|m| {
        let s = singular_values(m);
        let smax = s.iter().copied().fold(0.0, f64::max);
        s.iter().all(|&x| x <= 1e-12 * smax || x >= 1e-3 * smax)
    })
}

/// Random sequence with `pieces` degrees; the total has dimension at most
/// `max_dim` in each degree. The gluing block is a random solution of the
/// chain-map condition, so connecting maps are generally nonzero. Draws whose
/// total complex has nearly degenerate ranks are discarded and redrawn.
pub fn random_ses<R: Rng + ?Sized>(rng: &mut R, direction: Direction, pieces: usize, max_dim: usize) -> RandomSes {
    loop {
        let ses = draw_ses(rng, pieces, max_dim);
        if well_conditioned(&ses.total) {
            return match direction {
                Direction::Ascending => ses,
                Direction::Descending => RandomSes {
                    h_sub: reverse_spec(&ses.h_sub, pieces),
                    h_total: reverse_spec(&ses.h_total, pieces),
                    h_quotient: reverse_spec(&ses.h_quotient, pieces),
                    sub: ses.sub.reversed(),
                    total: ses.total.reversed(),
                    quotient: ses.quotient.reversed(),
                },
            };
        }
    }
}

fn draw_ses<R: Rng + ?Sized>(rng: &mut R, pieces: usize, max_dim: usize) -> RandomSes {
    let tol = ToleranceContext::default();
    let half = max_dim / 2;
    let sdims: Vec<usize> = (0..pieces).map(|_| rng.gen_range(0..=half)).collect();
    let qdims: Vec<usize> = (0..pieces)
        .zip(&sdims)
        .map(|(_, &s)| rng.gen_range(0..=(max_dim - s).min(half.max(1))))
        .collect();
    let (sub, h_sub) = random_complex(rng, Direction::Ascending, &sdims);
    let (quotient, h_quotient) = random_complex(rng, Direction::Ascending, &qdims);

    // Unknown X_k : Q^k -> S^{k+1}; constraint d'_{k+1} X_k + X_{k+1} d''_k = 0.
    let nmaps = pieces.saturating_sub(1);
    let offsets: Vec<usize> = (0..=nmaps)
        .scan(0, |acc, k| {
            let o = *acc;
            if k < nmaps {
                *acc += sdims[k + 1] * qdims[k];
            }
            Some(o)
        })
        .collect();
    let unknowns = offsets[nmaps];
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for k in 0..nmaps.saturating_sub(1) {
        let (ds, dq) = (&sub.maps()[k + 1], &quotient.maps()[k]);
        let (s2, s1, q0, q1) = (sdims[k + 2], sdims[k + 1], qdims[k], qdims[k + 1]);
        for a in 0..s2 {
            for b in 0..q0 {
                let mut row = vec![C64::new(0.0, 0.0); unknowns];
                for t in 0..s1 {
                    row[offsets[k] + t * q0 + b] += ds[(a, t)];
                }
                for t in 0..q1 {
                    row[offsets[k + 1] + a * q1 + t] += dq[(t, b)];
                }
                rows.push(row);
            }
        }
    }
    let x0: Vec<C64> = (0..unknowns).map(|_| random_entry(rng)).collect();
    let x = if rows.is_empty() || unknowns == 0 {
        x0
    } else {
        let a = CMatrix::from_rows(&rows).expect("uniform rows");
        let ax0 = CMatrix::from_columns(a.rows(), &[a.mul_vec(&x0).expect("shape")]).expect("shape");
        let y = solve_linear(&a, &ax0, &tol).expect("shape").solution;
        // Blocks forced to vanish come out at rounding level; snap them so
        // rank decisions see an exact zero.
        x0.iter()
            .enumerate()
            .map(|(i, v)| v - y[(i, 0)])
            .map(|z| if z.norm() < 1e-12 { C64::new(0.0, 0.0) } else { z })
            .collect()
    };

    let tdims: Vec<usize> = sdims.iter().zip(&qdims).map(|(s, q)| s + q).collect();
    let mut maps = Vec::with_capacity(nmaps);
    for k in 0..nmaps {
        let mut t = CMatrix::zeros(tdims[k + 1], tdims[k]);
        t.set_block(0, 0, &sub.maps()[k]);
        t.set_block(sdims[k + 1], sdims[k], &quotient.maps()[k]);
        let q0 = qdims[k];
        let block = CMatrix::from_fn(sdims[k + 1], q0, |a, b| x[offsets[k] + a * q0 + b]);
        t.set_block(0, sdims[k], &block);
        maps.push(t);
    }
    let total = BasedComplex::new(Direction::Ascending, tdims, maps).expect("shapes by construction");
    let h_total = homology_basis(&total, &tol);
    RandomSes {
        sub,
        total,
        quotient,
        h_sub,
        h_total,
        h_quotient,
    }
}
