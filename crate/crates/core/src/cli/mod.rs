//! Command-line front end. [`run`] is the whole program minus process exit,
//! so it can be driven from tests.

mod output;
mod selftest;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::adjoint::{torsion_knot_irreducible, TorsionOptions};
use crate::connected_sum::{vanishing_sum, ConnectedSumSpec, FactorChoice};
use crate::error::Error;
use crate::numeric::{ToleranceContext, ToleranceProfile, C64};
use crate::presentation::{
    alexander_polynomial, parse_presentation, two_bridge_presentation, Presentation, TwoBridgeKnot,
};
use crate::representation::{sample_generic_trace, solve_level_set};

pub use output::{complex_json, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NON_GENERIC: i32 = 2;
pub const EXIT_IDENTITY: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "knottorsion",
    version,
    about = "Adjoint Reidemeister torsion of knots and connected sums"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Seed for sampled traces and self-test inputs.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Tolerance preset: default, strict or loose.
    #[arg(long, env = "KNOTTORSION_TOL_PROFILE", default_value = "default", global = true)]
    pub tol_profile: String,
    /// Sets rank, residual and root tolerances at once.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub rank_tol: Option<f64>,
    #[arg(long, global = true)]
    pub residual_tol: Option<f64>,
    #[arg(long, global = true)]
    pub root_tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Irreducible characters with a given meridian trace, with torsions.
    LevelSet {
        #[command(flatten)]
        knot: KnotArg,
        /// Meridian trace as `re,im`; sampled from the seed if omitted.
        #[arg(long, allow_hyphen_values = true)]
        trace: Option<String>,
    },
    /// Reciprocal torsion sum over the level set of a connected sum.
    Vanishing {
        /// Comma-separated two-bridge factors, e.g. `5/3,7/3`.
        #[arg(long)]
        factors: String,
        #[arg(long, allow_hyphen_values = true)]
        trace: Option<String>,
        /// Relative threshold for the identity `Σ 1/τ = 0`.
        #[arg(long, default_value_t = 1e-6)]
        identity_tol: f64,
    },
    /// Alexander polynomial of a knot.
    Alexander {
        #[command(flatten)]
        knot: KnotArg,
    },
    /// Runs the calibration oracles.
    Selftest,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct KnotArg {
    /// Two-bridge knot `p/q`.
    #[arg(long)]
    pub two_bridge: Option<String>,
    /// Presentation file.
    #[arg(long)]
    pub presentation: Option<PathBuf>,
}

/// Exit code and the text destined for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn failure(code: i32, message: String) -> Self {
        Self {
            code,
            stdout: String::new(),
            stderr: message,
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DegenerateTrace { .. } | Error::NonGeneric { .. } | Error::Regularity(_) => EXIT_NON_GENERIC,
        _ => EXIT_USAGE,
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome::failure(code, text)
            };
        }
    };
    match execute(&cli) {
        Ok((code, report)) => Outcome {
            code,
            stdout: report.render(cli.global.format),
            stderr: String::new(),
        },
        Err(e) => Outcome::failure(exit_code(&e), format!("error: {e}\n")),
    }
}

pub fn tolerance(g: &GlobalOpts) -> crate::Result<ToleranceContext> {
    let mut t = ToleranceProfile::parse(&g.tol_profile)?.context();
    if let Some(x) = g.tol {
        t.rank_tol = x;
        t.residual_tol = x;
        t.root_tol = x;
    }
    if let Some(x) = g.rank_tol {
        t.rank_tol = x;
    }
    if let Some(x) = g.residual_tol {
        t.residual_tol = x;
    }
    if let Some(x) = g.root_tol {
        t.root_tol = x;
    }
    t.validate()?;
    Ok(t)
}

/// Parses `re,im` (or a bare real number).
pub fn parse_trace(s: &str) -> crate::Result<C64> {
    let bad = |detail: String| Error::Domain(format!("trace must look like `re,im`: {detail}"));
    let mut parts = s.split(',');
    let re = parts.next().unwrap_or("").trim();
    let im = parts.next().map(str::trim).unwrap_or("0");
    if parts.next().is_some() {
        return Err(bad(format!("too many fields in `{s}`")));
    }
    let re: f64 = re.parse().map_err(|e| bad(format!("`{re}`: {e}")))?;
    let im: f64 = im.parse().map_err(|e| bad(format!("`{im}`: {e}")))?;
    let z = C64::new(re, im);
    if !z.is_finite() {
        return Err(bad(format!("`{s}` is not finite")));
    }
    Ok(z)
}

fn trace_or_sample(trace: &Option<String>, seed: u64) -> crate::Result<C64> {
    match trace {
        Some(s) => parse_trace(s),
        None => Ok(sample_generic_trace(&mut ChaCha8Rng::seed_from_u64(seed))),
    }
}

fn load_knot(k: &KnotArg) -> crate::Result<(Option<TwoBridgeKnot>, Presentation)> {
    if let Some(s) = &k.two_bridge {
        let knot: TwoBridgeKnot = s.parse()?;
        return Ok((Some(knot), two_bridge_presentation(&knot)));
    }
    let path = k.presentation.as_ref().expect("clap enforces one knot source");
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
    Ok((None, parse_presentation(&text)?))
}

fn execute(cli: &Cli) -> crate::Result<(i32, Report)> {
    let tol = tolerance(&cli.global)?;
    let seed = cli.global.seed;
    let opts = TorsionOptions::default();
    match &cli.command {
        Command::LevelSet { knot, trace } => {
            let (tb, pres) = load_knot(knot)?;
            let knot = tb.ok_or_else(|| {
                Error::Domain("level sets are computed for two-bridge knots; use --two-bridge".into())
            })?;
            let c = trace_or_sample(trace, seed)?;
            let points = solve_level_set(&knot, c, &tol)?;
            let mut records = Vec::with_capacity(points.len());
            for pt in &points {
                let mut rec = Map::new();
                rec.insert("u".into(), complex_json(pt.u));
                rec.insert("m".into(), complex_json(pt.rep.m()));
                rec.insert("trace_longitude".into(), complex_json(pt.regularity.longitude_trace));
                rec.insert("regular".into(), Value::Bool(pt.regularity.generic));
                let torsion = if pt.regularity.generic {
                    complex_json(torsion_knot_irreducible(&pres, &pt.rep, &opts, &tol)?.value)
                } else {
                    Value::Null
                };
                rec.insert("torsion".into(), torsion);
                records.push(Value::Object(rec));
            }
            let code = if points.iter().all(|p| p.regularity.generic) {
                EXIT_OK
            } else {
                EXIT_NON_GENERIC
            };
            let summary = json!({
                "command": "level-set",
                "knot": knot.to_string(),
                "trace": complex_json(c),
                "count": points.len(),
            });
            Ok((code, Report::new(seed, summary, records)))
        }
        Command::Vanishing {
            factors,
            trace,
            identity_tol,
        } => {
            let knots = factors
                .split(',')
                .map(|s| s.parse::<TwoBridgeKnot>())
                .collect::<crate::Result<Vec<_>>>()?;
            let spec = ConnectedSumSpec::new(knots)?;
            let c = trace_or_sample(trace, seed)?;
            let rep = vanishing_sum(&spec, c, &opts, &tol)?;
            let holds = rep.sum.norm() <= identity_tol * rep.abs_sum;
            let records = rep
                .terms
                .iter()
                .map(|t| {
                    let label: Vec<Value> = t
                        .component
                        .choices
                        .iter()
                        .map(|ch| match ch {
                            FactorChoice::Abelian => Value::from("ab"),
                            FactorChoice::Irreducible(i) => Value::from(format!("irr{i}")),
                        })
                        .collect();
                    json!({
                        "component": label,
                        "torsion": complex_json(t.torsion),
                        "reciprocal": complex_json(t.reciprocal),
                    })
                })
                .collect();
            let summary = json!({
                "command": "vanishing",
                "factors": spec.factors().iter().map(|k| k.to_string()).collect::<Vec<_>>(),
                "trace": complex_json(c),
                "components": rep.terms.len(),
                "sum": complex_json(rep.sum),
                "abs_sum": rep.abs_sum,
                "relative": rep.relative(),
                "expansion_residual": rep.expansion_residual,
                "identity_tol": identity_tol,
                "identity_holds": holds,
            });
            let code = if holds { EXIT_OK } else { EXIT_IDENTITY };
            Ok((code, Report::new(seed, summary, records)))
        }
        Command::Alexander { knot } => {
            let (tb, pres) = load_knot(knot)?;
            let d = alexander_polynomial(&pres)?;
            let summary = json!({
                "command": "alexander",
                "knot": tb.map(|k| k.to_string()),
                "polynomial": d.to_string(),
                "coefficients": d.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            });
            Ok((EXIT_OK, Report::new(seed, summary, Vec::new())))
        }
        Command::Selftest => {
            let checks = selftest::run_all(seed, &tol);
            let passed = checks.iter().all(|c| c.passed);
            let records = checks.iter().map(selftest::Check::to_json).collect();
            let summary = json!({
                "command": "selftest",
                "passed": passed,
                "checks": checks.len(),
            });
            Ok((
                if passed { EXIT_OK } else { EXIT_IDENTITY },
                Report::new(seed, summary, records),
            ))
        }
    }
}
