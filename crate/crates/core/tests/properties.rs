use std::f64::consts::PI;

use knottorsion::adjoint::{
    boundary_class, invariant_vector, psi_row_for_word, torsion_knot_abelian_at, torsion_knot_irreducible,
    twisted_cochain_complex, TorsionOptions,
};
use knottorsion::connected_sum::{
    bend, enumerate_components, factor_level_sets, vanishing_sum, ConnectedSumSpec, FactorChoice,
};
use knottorsion::numeric::matrix::{CMatrix, C64, ONE};
use knottorsion::numeric::{det, poly_roots, rank_factorize, solve_linear, ToleranceContext};
use knottorsion::presentation::{
    alexander_polynomial_deleting, fox_derivative, parse_presentation, serialize_presentation, two_bridge_presentation,
    FreeWord, GroupRingElement, Letter, Presentation, TwoBridgeKnot,
};
use knottorsion::representation::{sample_generic_trace, solve_level_set, RepKind, Representation};
use knottorsion::sl2::{adjoint, killing, LieVector, SL2Value};
use knottorsion::torsion::engine::degree_exponent;
use knottorsion::torsion::random::{random_complex, random_invertible, random_matrix, random_ses};
use knottorsion::torsion::{kernel_basis, torsion, torsion_with_chains, verify_gluing, Direction, HomologyBasisSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn tol() -> ToleranceContext {
    ToleranceContext::default()
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

fn unit_disc(r: &mut ChaCha8Rng) -> C64 {
    C64::from_polar(r.gen_range(0.0..1.0f64).sqrt(), r.gen_range(-PI..PI))
}

fn random_sl2(r: &mut ChaCha8Rng) -> SL2Value {
    loop {
        let mut e = || C64::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
        let (a, b, c, d) = (e(), e(), e(), e());
        if (a * d - b * c).norm() > 0.2 {
            return SL2Value::normalized(a, b, c, d).unwrap();
        }
    }
}

fn random_lie(r: &mut ChaCha8Rng) -> LieVector {
    [unit_disc(r), unit_disc(r), unit_disc(r)]
}

fn direction(up: bool) -> Direction {
    if up {
        Direction::Ascending
    } else {
        Direction::Descending
    }
}

fn dims_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..=5, 2..=5)
}

fn word_strategy(gens: usize, max_len: usize) -> impl Strategy<Value = FreeWord> {
    prop::collection::vec((0..gens, prop::bool::ANY), 0..=max_len)
        .prop_map(|v| FreeWord::new(v.into_iter().map(|(g, pos)| Letter::new(g, if pos { 1 } else { -1 }))))
}

fn knot_strategy(max_p: u32) -> impl Strategy<Value = TwoBridgeKnot> {
    (1u32..=(max_p - 1) / 2)
        .prop_flat_map(|h| (Just(2 * h + 1), 1u32..(2 * h + 1)))
        .prop_filter_map("coprime", |(p, q)| TwoBridgeKnot::new(p.into(), q.into()).ok())
}

/// Irreducible torsion, or the abelian one for abelian representations.
fn tau(pres: &Presentation, rep: &Representation, opts: &TorsionOptions) -> C64 {
    match rep.kind() {
        RepKind::Abelian => torsion_knot_abelian_at(pres, rep, opts, &tol()),
        RepKind::Irreducible => torsion_knot_irreducible(pres, rep, opts, &tol()),
    }
    .unwrap()
    .value
}

// numeric core

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn det_is_multiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = CMatrix::from_fn(5, 5, |_, _| unit_disc(&mut r));
        let b = CMatrix::from_fn(5, 5, |_, _| unit_disc(&mut r));
        let lhs = det(&(&a * &b)).unwrap();
        let rhs = det(&a).unwrap() * det(&b).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm().max(1e-300));
    }

    #[test]
    fn rank_is_idempotent(seed in any::<u64>(), rows in 1usize..7, cols in 1usize..7, k in 0usize..7) {
        let mut r = rng(seed);
        let k = k.min(rows).min(cols);
        let a = &random_matrix(&mut r, rows, k) * &random_matrix(&mut r, k, cols);
        let f = rank_factorize(&a, &tol());
        prop_assert_eq!(f.rank, k);
        prop_assert_eq!(rank_factorize(&f.column_basis, &tol()).rank, f.rank);
        prop_assert!(f.pivot_columns.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn roots_are_roots(seed in any::<u64>(), degree in 1usize..12) {
        let mut r = rng(seed);
        let mut coeffs: Vec<C64> = (0..=degree).map(|_| unit_disc(&mut r)).collect();
        coeffs[degree] = C64::from_polar(r.gen_range(0.5..1.0), r.gen_range(-PI..PI));
        let roots = poly_roots(&coeffs, &tol()).unwrap();
        prop_assert_eq!(roots.len(), degree);
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        for z in roots {
            let v = coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c);
            prop_assert!(v.norm() <= 1e-8 * scale, "|p(z)| = {:e}", v.norm());
        }
    }

    #[test]
    fn consistent_systems_solve_exactly(seed in any::<u64>(), rows in 1usize..8, cols in 1usize..8) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, rows, cols);
        let x0 = random_matrix(&mut r, cols, 2);
        let b = &a * &x0;
        prop_assert!(solve_linear(&a, &b, &tol()).unwrap().residual <= 1e-12);
    }
}

// torsion engine

fn random_recombined_chains(c: &knottorsion::torsion::BasedComplex, r: &mut ChaCha8Rng) -> Vec<CMatrix> {
    c.maps()
        .iter()
        .map(|map| {
            let f = rank_factorize(map, &tol());
            let pivots = CMatrix::from_fn(map.cols(), f.rank, |i, j| {
                if i == f.pivot_columns[j] {
                    ONE
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            let k = kernel_basis(map, &tol());
            let mixed = &pivots * &random_invertible(r, f.rank);
            &mixed + &(&k * &random_matrix(r, k.cols(), f.rank))
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn torsion_is_independent_of_chains(seed in any::<u64>(), dims in dims_strategy(), up in any::<bool>()) {
        let mut r = rng(seed);
        let (c, h) = random_complex(&mut r, direction(up), &dims);
        let base = torsion(&c, &h, &tol()).unwrap().value;
        let chains = random_recombined_chains(&c, &mut r);
        let other = torsion_with_chains(&c, &h, &chains, &tol()).unwrap().value;
        prop_assert!(rel(other, base) <= 1e-9, "{other} vs {base}");
    }

    #[test]
    fn torsion_is_independent_of_lifts(seed in any::<u64>(), dims in dims_strategy(), up in any::<bool>()) {
        let mut r = rng(seed);
        let (c, h) = random_complex(&mut r, direction(up), &dims);
        let base = torsion(&c, &h, &tol()).unwrap().value;
        let moved: Vec<Vec<Vec<C64>>> = (0..c.len())
            .map(|i| {
                let into = c.incoming(i);
                h.degree(i)
                    .iter()
                    .map(|v| {
                        let x: Vec<C64> = (0..into.cols()).map(|_| unit_disc(&mut r)).collect();
                        let dx = into.mul_vec(&x).unwrap();
                        v.iter().zip(dx).map(|(a, b)| a + b).collect()
                    })
                    .collect()
            })
            .collect();
        let other = torsion(&c, &HomologyBasisSpec::new(moved), &tol()).unwrap().value;
        prop_assert!(rel(other, base) <= 1e-9);
    }

    #[test]
    fn scaling_a_homology_vector(seed in any::<u64>(), dims in dims_strategy(), up in any::<bool>()) {
        let mut r = rng(seed);
        let (c, mut h) = random_complex(&mut r, direction(up), &dims);
        let Some(i) = (0..c.len()).find(|&i| !h.degree(i).is_empty()) else { return Ok(()) };
        let base = torsion(&c, &h, &tol()).unwrap().value;
        let s = C64::from_polar(r.gen_range(0.5..2.0), r.gen_range(-PI..PI));
        for z in h.degree_mut(i)[0].iter_mut() {
            *z *= s;
        }
        let scaled = torsion(&c, &h, &tol()).unwrap().value;
        let factor = if degree_exponent(c.direction(), i) > 0 { s } else { s.inv() };
        prop_assert!(rel(scaled, base * factor) <= 1e-12);
    }

    #[test]
    fn reversal_inverts_odd_length_torsion(seed in any::<u64>(), dims in dims_strategy()) {
        let mut r = rng(seed);
        let (c, h) = random_complex(&mut r, Direction::Ascending, &dims);
        let n = c.len();
        let asc = torsion(&c, &h, &tol()).unwrap().value;
        let rev_h = HomologyBasisSpec::new((0..n).rev().map(|i| h.degree(i).to_vec()).collect());
        let desc = torsion(&c.reversed(), &rev_h, &tol()).unwrap().value;
        let expect = if n % 2 == 0 { asc } else { asc.inv() };
        prop_assert!(rel(desc, expect) <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gluing_formula(seed in any::<u64>(), pieces in 2usize..=4, up in any::<bool>()) {
        let mut r = rng(seed);
        let s = random_ses(&mut r, direction(up), pieces, 6);
        let rep = verify_gluing(&s.sub, &s.total, &s.quotient, &s.h_sub, &s.h_total, &s.h_quotient, &tol()).unwrap();
        prop_assert!(rep.residual <= 1e-8, "residual {:e}", rep.residual);
    }
}

// sl2

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_is_a_homomorphism(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (g, h) = (random_sl2(&mut r), random_sl2(&mut r));
        let lhs = adjoint(&(g * h)).into_matrix();
        let rhs = adjoint(&g).matrix() * adjoint(&h).matrix();
        prop_assert!(lhs.max_diff(&rhs) <= 1e-10 * rhs.max_abs().max(1.0));
    }

    #[test]
    fn killing_is_symmetric_and_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (v, w, g) = (random_lie(&mut r), random_lie(&mut r), random_sl2(&mut r));
        prop_assert!((killing(&v, &w) - killing(&w, &v)).norm() <= 1e-12);
        let ad = adjoint(&g);
        let scale = g.max_abs().powi(4).max(1.0);
        prop_assert!((killing(&ad.apply(&v), &ad.apply(&w)) - killing(&v, &w)).norm() <= 1e-10 * scale);
    }

    #[test]
    fn ad_fixes_p_exactly_for_diagonal(seed in any::<u64>(), diagonal in any::<bool>()) {
        let mut r = rng(seed);
        let p: LieVector = [C64::new(0.0, 0.0), C64::new(0.125, 0.0), C64::new(0.0, 0.0)];
        let g = if diagonal {
            SL2Value::diagonal(C64::from_polar(r.gen_range(0.3..3.0), r.gen_range(-PI..PI)))
        } else {
            let g = random_sl2(&mut r);
            prop_assume!(g.b.norm() > 1e-3 || g.c.norm() > 1e-3);
            g
        };
        let q = adjoint(&g).apply(&p);
        let moved = (0..3).map(|i| (q[i] - p[i]).norm()).fold(0.0, f64::max);
        if diagonal {
            prop_assert!(moved <= 1e-12);
        } else {
            prop_assert!(moved > 1e-6);
        }
    }
}

// presentations

fn generator_elements(n: usize) -> Vec<GroupRingElement> {
    (0..n)
        .map(|g| &GroupRingElement::from_word(FreeWord::generator(g)) - &GroupRingElement::one())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn fundamental_fox_identity(w in word_strategy(3, 30)) {
        let gens = generator_elements(3);
        let mut total = GroupRingElement::zero();
        for (g, x) in gens.iter().enumerate() {
            total = &total + &(&fox_derivative(&w, g) * x);
        }
        let expect = &GroupRingElement::from_word(w.clone()) - &GroupRingElement::one();
        prop_assert_eq!(total, expect);
    }

    #[test]
    fn presentations_round_trip(
        n in 1usize..=4,
        seed in any::<u64>(),
    ) {
        let mut r = rng(seed);
        let mut word = |len: usize| {
            FreeWord::new((0..len).map(|_| Letter::new(r.gen_range(0..n), if r.gen_bool(0.5) { 1 } else { -1 })))
        };
        let relators: Vec<FreeWord> = (0..n.saturating_sub(1).max(1)).map(|_| word(8)).collect();
        let meridian = word(3);
        let longitude = Some(word(6));
        let names = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        let p = Presentation::new(names, relators, meridian, longitude).unwrap();
        let back = parse_presentation(&serialize_presentation(&p)).unwrap();
        prop_assert_eq!(back, p);
    }
}

#[test]
fn alexander_polynomials_of_two_bridge_knots() {
    for p in (3..=15i64).step_by(2) {
        for q in 1..p {
            let Ok(k) = TwoBridgeKnot::new(p, q) else { continue };
            let pres = two_bridge_presentation(&k);
            let d0 = alexander_polynomial_deleting(&pres, 0).unwrap();
            let d1 = alexander_polynomial_deleting(&pres, 1).unwrap();
            assert_eq!(d0, d1, "{k}");
            assert_eq!(d0.eval_int(1).abs(), 1, "Δ(1) for {k}");
            // Determinant of K(p, q) is p.
            assert_eq!(d0.eval_int(-1).abs(), p as i128, "Δ(-1) for {k}");
        }
    }
}

// representations and knot torsions

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn level_sets_are_meridional_and_separated(k in knot_strategy(11), seed in any::<u64>()) {
        let c = sample_generic_trace(&mut rng(seed));
        let t = tol();
        let pts = solve_level_set(&k, c, &t).unwrap();
        prop_assert_eq!(pts.len(), (k.p() as usize - 1) / 2);
        let mut ab_traces: Vec<C64> = Vec::new();
        for pt in &pts {
            let (a, b) = (pt.rep.image(0), pt.rep.image(1));
            prop_assert!((a.trace() - c).norm() <= 1e-9 * c.norm().max(1.0));
            prop_assert!((b.trace() - c).norm() <= 1e-9 * c.norm().max(1.0));
            ab_traces.push((*a * *b).trace());
        }
        for i in 0..ab_traces.len() {
            for j in 0..i {
                prop_assert!((ab_traces[i] - ab_traces[j]).norm() > 1e-6, "characters coincide");
            }
        }
    }

    #[test]
    fn knot_torsion_invariances(k in knot_strategy(9), seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = sample_generic_trace(&mut r);
        let pres = two_bridge_presentation(&k);
        let opts = TorsionOptions::default();
        for pt in solve_level_set(&k, c, &tol()).unwrap() {
            let base = tau(&pres, &pt.rep, &opts);
            let conj = tau(&pres, &pt.rep.conjugated(&random_sl2(&mut r)), &opts);
            prop_assert!(rel(conj, base) <= 1e-8, "conjugation");
            let flipped = tau(&pres, &pt.rep.weyl_flipped(), &opts);
            prop_assert!(rel(flipped, base) <= 1e-8, "m <-> 1/m");
            let p_scale = C64::from_polar(r.gen_range(0.1..10.0), r.gen_range(-PI..PI));
            prop_assert!(rel(tau(&pres, &pt.rep, &TorsionOptions { p_scale }), base) <= 1e-8, "P scale");
            let loose = ToleranceContext { rank_tol: 1e-8, residual_tol: 1e-7, root_tol: 1e-11 };
            let again = solve_level_set(&k, c, &loose).unwrap();
            let near = again
                .iter()
                .map(|q| torsion_knot_irreducible(&pres, &q.rep, &opts, &loose).unwrap().value)
                .map(|v| rel(v, base))
                .fold(f64::INFINITY, f64::min);
            prop_assert!(near <= 1e-7, "perturbed tolerances");
        }
    }

    #[test]
    fn psi_maps_descend(k in knot_strategy(9), seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = sample_generic_trace(&mut r);
        let pres = two_bridge_presentation(&k);
        let t = tol();
        for pt in solve_level_set(&k, c, &t).unwrap() {
            let rep = pt.rep.balanced(&pres).unwrap();
            let tw = twisted_cochain_complex(&pres, &rep, &t).unwrap();
            let p = invariant_vector(&rep, &pres, &TorsionOptions::default()).unwrap();
            let psi1 = psi_row_for_word(&pres, &rep, pres.meridian(), &p).unwrap();
            let beta = random_matrix(&mut r, 3, 1);
            let d0b = tw.delta0() * &beta;
            let scale1 = psi1.max_abs() * tw.delta0().max_abs() * beta.max_abs() * 3.0;
            let v1 = (&psi1 * &d0b).max_abs() / scale1.max(1.0);
            prop_assert!(v1 <= 1e-10, "ψ¹ on coboundaries {v1:e}");
            let psi2 = boundary_class(&pres, &rep, &t).unwrap().psi_row(&p);
            let alpha = random_matrix(&mut r, 3 * pres.num_generators(), 1);
            let d1a = tw.delta1() * &alpha;
            let n = alpha.rows() as f64;
            let scale2 = psi2.max_abs() * tw.delta1().max_abs() * alpha.max_abs() * n;
            let v2 = (&psi2 * &d1a).max_abs() / scale2.max(1.0);
            prop_assert!(v2 <= 1e-10, "ψ² on coboundaries {v2:e}");
        }
    }
}

// connected sums

fn factors_strategy(max_p: u32, max_n: usize) -> impl Strategy<Value = Vec<TwoBridgeKnot>> {
    prop::collection::vec(knot_strategy(max_p), 1..=max_n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn component_count(factors in factors_strategy(9, 3), seed in any::<u64>()) {
        let c = sample_generic_trace(&mut rng(seed));
        let expect: usize = factors.iter().map(|k| (k.p() as usize - 1) / 2 + 1).product::<usize>() - 1;
        let spec = ConnectedSumSpec::new(factors).unwrap();
        let comps = enumerate_components(&spec, c, &tol()).unwrap();
        prop_assert_eq!(comps.len(), expect);
        prop_assert!(comps.iter().all(|d| d.choices.iter().any(|ch| *ch != FactorChoice::Abelian)));
    }

    #[test]
    fn expansion_identity_holds(factors in factors_strategy(9, 3), seed in any::<u64>()) {
        let c = sample_generic_trace(&mut rng(seed));
        let spec = ConnectedSumSpec::new(factors).unwrap();
        let rep = vanishing_sum(&spec, c, &TorsionOptions::default(), &tol()).unwrap();
        prop_assert!(rep.expansion_residual <= 1e-8, "{:e}", rep.expansion_residual);
    }

    #[test]
    fn vanishing_for_hyperbolic_two_bridge_factors(picks in prop::collection::vec(any::<bool>(), 1..=3), seed in any::<u64>()) {
        let factors: Vec<TwoBridgeKnot> = picks
            .iter()
            .map(|&f| if f { TwoBridgeKnot::figure_eight() } else { TwoBridgeKnot::new(7, 3).unwrap() })
            .collect();
        let c = sample_generic_trace(&mut rng(seed));
        let spec = ConnectedSumSpec::new(factors).unwrap();
        let rep = vanishing_sum(&spec, c, &TorsionOptions::default(), &tol()).unwrap();
        prop_assert!(rep.relative() <= 1e-6, "relative sum {:e}", rep.relative());
    }
}

#[test]
fn bending_leaves_connected_sum_torsion_unchanged() {
    let spec = ConnectedSumSpec::new(vec![TwoBridgeKnot::figure_eight(), TwoBridgeKnot::new(7, 3).unwrap()]).unwrap();
    let opts = TorsionOptions::default();
    let mut r = rng(11);
    let c = sample_generic_trace(&mut r);
    let ls = factor_level_sets(&spec, c, &tol()).unwrap();
    let comp = ls
        .components()
        .into_iter()
        .find(|d| d.choices.iter().all(|ch| *ch != FactorChoice::Abelian))
        .unwrap();
    let reps: Vec<Representation> = ls
        .factors
        .iter()
        .zip(&comp.choices)
        .map(|(f, ch)| match ch {
            FactorChoice::Irreducible(i) => f.points[*i].rep.clone(),
            FactorChoice::Abelian => unreachable!(),
        })
        .collect();
    let base = ls.torsion(&comp, &opts, &tol()).unwrap().value;
    for _ in 0..20 {
        let j = r.gen_range(0..reps.len());
        let s = C64::from_polar(r.gen_range(0.3..3.0), r.gen_range(-PI..PI));
        let mut bent = reps.clone();
        bent[j] = bend(&reps[j], s).unwrap();
        let t = ls.torsion_at(&bent, &opts, &tol()).unwrap().value;
        assert!(rel(t, base) <= 1e-8, "bending by {s}: {t} vs {base}");
    }
}
