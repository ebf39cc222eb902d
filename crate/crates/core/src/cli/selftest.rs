//! Calibration oracles with known closed-form answers.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::adjoint::{
    torsion_composing_space, torsion_knot_abelian, torsion_knot_irreducible, torsion_torus, twisted_cochain_complex,
    ComposingSpaceSpec, TorsionOptions,
};
use crate::numeric::{ToleranceContext, C64};
use crate::presentation::{two_bridge_presentation, TwoBridgeKnot};
use crate::representation::{
    abelian_closed_form, abelian_representation, meridian_eigenvalue, sample_generic_trace, solve_level_set,
};
use crate::torsion::random::random_ses;
use crate::torsion::{verify_gluing, Direction};
use crate::Result;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub samples: usize,
    pub worst: f64,
    pub threshold: f64,
    pub error: Option<String>,
}

impl Check {
    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "passed": self.passed,
            "samples": self.samples,
            "worst": self.worst,
            "threshold": self.threshold,
            "error": self.error,
        })
    }
}

/// Runs `body`, which returns the number of samples and the worst
/// deviation, and turns errors into failed checks.
fn check(name: &'static str, threshold: f64, body: impl FnOnce() -> Result<(usize, f64)>) -> Check {
    match body() {
        Ok((samples, worst)) => Check {
            name,
            passed: worst <= threshold,
            samples,
            worst,
            threshold,
            error: None,
        },
        Err(e) => Check {
            name,
            passed: false,
            samples: 0,
            worst: f64::INFINITY,
            threshold,
            error: Some(e.to_string()),
        },
    }
}

/// A point with modulus in `[0.3, 3]` at distance at least 0.1 from `±1`.
fn sample_eigenvalue(rng: &mut ChaCha8Rng) -> C64 {
    loop {
        let z = C64::from_polar(rng.gen_range(0.3..3.0), rng.gen_range(-PI..PI));
        if (z - 1.0).norm() >= 0.1 && (z + 1.0).norm() >= 0.1 {
            return z;
        }
    }
}

pub fn run_all(seed: u64, tol: &ToleranceContext) -> Vec<Check> {
    let opts = TorsionOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    out.push(check("torus", 1e-10, || {
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let (m, l) = (sample_eigenvalue(&mut rng), sample_eigenvalue(&mut rng));
            worst = worst.max((torsion_torus(m, l, &opts, tol)?.value - 1.0).norm());
        }
        Ok((20, worst))
    }));

    out.push(check("composing_space", 1e-9, || {
        let mut worst: f64 = 0.0;
        let mut samples = 0;
        for n in 1..=4usize {
            for _ in 0..5 {
                let m = sample_eigenvalue(&mut rng);
                let l = (0..n).map(|_| sample_eigenvalue(&mut rng)).collect();
                let t = torsion_composing_space(&ComposingSpaceSpec::new(m, l)?, &opts, tol)?;
                let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
                let expect = (m - m.inv()).powi(2 * n as i32 - 2) * sign;
                let mut dev = (t.value - expect).norm() / expect.norm();
                if t.diagnostics.homology_dims != [1, n + 1, n] {
                    dev = f64::INFINITY;
                }
                worst = worst.max(dev);
                samples += 1;
            }
        }
        Ok((samples, worst))
    }));

    out.push(check("gluing", 1e-8, || {
        let mut worst: f64 = 0.0;
        for i in 0..60 {
            let dir = if i % 2 == 0 {
                Direction::Ascending
            } else {
                Direction::Descending
            };
            let s = random_ses(&mut rng, dir, 4, 6);
            let r = verify_gluing(&s.sub, &s.total, &s.quotient, &s.h_sub, &s.h_total, &s.h_quotient, tol)?;
            worst = worst.max(r.residual);
        }
        Ok((60, worst))
    }));

    let knots = [TwoBridgeKnot::trefoil(), TwoBridgeKnot::figure_eight()];
    let traces: Vec<C64> = (0..5).map(|_| sample_generic_trace(&mut rng)).collect();

    out.push(check("abelian_dimensions", 0.0, || {
        let mut bad = 0;
        for k in &knots {
            let pres = two_bridge_presentation(k);
            for &c in &traces {
                let rep = abelian_representation(&pres, c, tol)?;
                let tw = twisted_cochain_complex(&pres, &rep, tol)?;
                if tw.complex().homology_dims(tol) != [1, 1, 0] {
                    bad += 1;
                }
            }
        }
        Ok((knots.len() * traces.len(), f64::from(bad)))
    }));

    out.push(check("abelian_closed_form", 1e-8, || {
        let mut worst: f64 = 0.0;
        for k in &knots {
            let pres = two_bridge_presentation(k);
            for &c in &traces {
                let t = torsion_knot_abelian(&pres, c, &opts, tol)?;
                let closed = abelian_closed_form(&pres, meridian_eigenvalue(c, tol)?)?;
                worst = worst.max((t.value.norm() - closed.norm()).abs() / closed.norm());
            }
        }
        Ok((knots.len() * traces.len(), worst))
    }));

    out.push(check("figure_eight_vanishing", 1e-6, || {
        let k = TwoBridgeKnot::figure_eight();
        let pres = two_bridge_presentation(&k);
        let mut worst: f64 = 0.0;
        for &c in &traces {
            let pts = solve_level_set(&k, c, tol)?;
            let mut sum = C64::new(0.0, 0.0);
            let mut abs = 0.0;
            for p in &pts {
                let r = torsion_knot_irreducible(&pres, &p.rep, &opts, tol)?.value.inv();
                sum += r;
                abs += r.norm();
            }
            worst = worst.max(if pts.len() == 2 {
                sum.norm() / abs
            } else {
                f64::INFINITY
            });
        }
        Ok((traces.len(), worst))
    }));

    out
}
