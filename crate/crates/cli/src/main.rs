//! `cdalg`: batch front end for arithmetic, exponential maps, structure probes and
//! root solvers on the Cayley-Dickson algebras.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 numerical non-convergence
//! (root search budget exhausted, ambiguous winding), 3 domain error (zero
//! element, no principal direction, element off its slice), 4 a property of the
//! `props` suite failed.
//!
//! JSON field names are stable:
//! - elements: `{"level", "coeffs"}`
//! - `props`: `{"profile": {"level", "trials", "seed", "laws": [{"law", "status", "max_residual"}]},
//!   "suite": {"level", "trials", "seed", "checks": [{"name", "asserted", "passed", "bound",
//!   "tolerance", "worst", "trials", "error"}]}, "passed"}`
//! - `zerodiv`: `{"level", "pair": null | {"u", "v", "u_terms", "v_terms", "product_norm"}}`
//! - `rootsearch`: `{"outcome": "found", "root", "residual", "start_index", "iterations"}` or
//!   `{"outcome": "not_found", "starts", "best_residual", "best_point", "min_sampled_residual"}`

mod input;
mod render;

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use cdalg::poly::{
    root_search, roots_complex_poly, CommutatorProbe, ComplexPolynomial, GeneralizedPolynomial,
    ResidualMap, SearchOptions, SearchOutcome,
};
use cdalg::structure::{basis_product, find_zero_divisor_pair, law_profile, LawStatus};
use cdalg::transcendental::{exp, k_root, k_root_literal, log_principal};
use cdalg::{suite, AlgebraError, Element, DEFAULT_MAX_LEVEL};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use render::Format;

const MAX_TABLE_LEVEL: u32 = 6;

#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        use AlgebraError::*;
        let code = match e {
            NoConvergence { .. } | AmbiguousWinding { .. } => 2,
            ZeroElement
            | NotPure { .. }
            | InvalidDirection
            | Overflow
            | NoPrincipalDirection
            | NotInSlice { .. }
            | OffSlice
            | OriginOnPath
            | OpenCurve => 3,
            LengthMismatch { .. }
            | NonFinite { .. }
            | LevelMismatch { .. }
            | LevelTooLarge { .. }
            | TooFewSamples { .. }
            | InvalidArgument(_)
            | InvalidFixture(_) => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "cdalg", version, about = "Cayley-Dickson algebra toolkit")]
#[command(
    after_help = "Tolerance overrides: --tol.<name> <value>; see `props` check names, and `root` for rootsearch."
)]
struct Cli {
    /// Algebra level n (dimension 2^n); defaults to the level of the input element.
    #[arg(long, global = true)]
    level: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1000)]
    trials: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Reading {
    /// `|x|^(1/k) exp(theta/k u)` from the polar form; inverts the k-th power.
    Polar,
    /// `|x|^(1/k) exp(a/k)` with `a` the imaginary part, taken literally.
    Literal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Op {
    Add,
    Sub,
    Mul,
    Conj,
    Inverse,
    Norm,
    Pow,
    Commutator,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Multiplication table of the basis (level at most 6).
    Table,
    /// Arithmetic on elements.
    Eval {
        #[arg(long, value_enum, default_value_t = Op::Mul)]
        op: Op,
        /// Element as JSON, or @file.
        #[arg(long)]
        elem: String,
        /// Second operand for add, sub, mul and commutator.
        #[arg(long)]
        other: Option<String>,
        /// Exponent for pow.
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i32>,
    },
    /// Exponential map.
    Exp {
        #[arg(long)]
        elem: String,
    },
    /// Principal logarithm.
    Log {
        #[arg(long)]
        elem: String,
        /// Unit pure direction (e<i> or JSON) used for negative reals.
        #[arg(long)]
        fallback: Option<String>,
    },
    /// k-th root.
    Root {
        #[arg(long)]
        elem: String,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = Reading::Polar)]
        reading: Reading,
        #[arg(long)]
        fallback: Option<String>,
    },
    /// Two-term zero-divisor pair, or null when none exists.
    Zerodiv,
    /// Law profile plus the invariant suite; exits 4 on any failure.
    Props,
    /// Winding number of x -> x^k around the unit circle of a slice.
    Winding {
        #[arg(long, allow_hyphen_values = true)]
        k: i32,
        /// Slice direction: e<i> or a JSON pure element.
        #[arg(long)]
        dir: String,
        #[arg(long, default_value_t = 1024)]
        samples: usize,
    },
    /// Roots of a slice polynomial, a generalized polynomial, or the commutator probe.
    Rootsearch {
        /// Complex polynomial fixture: all roots via the slice solver.
        #[arg(long, group = "target")]
        poly: Option<String>,
        /// Generalized polynomial fixture: multistart search.
        #[arg(long, group = "target")]
        generalized: Option<String>,
        /// Search for zeros of [a, x] + e0 (none exist).
        #[arg(long, group = "target")]
        commutator: Option<String>,
        /// Starts per radius; default 8 * 2^n.
        #[arg(long)]
        starts: Option<usize>,
        #[arg(long, default_value_t = 60)]
        max_iter: usize,
    },
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(out) => {
            // a closed pipe (e.g. `| head`) is not an error
            let _ = writeln!(std::io::stdout(), "{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Output is printed on success; on failure with a report (`props`, `rootsearch`),
/// the report goes to stdout before the error.
fn run(args: Vec<String>) -> Result<String, Failure> {
    let (args, tols) = input::split_tolerances(args)?;
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) {
                return Ok(e.to_string().trim_end().to_string());
            }
            return Err(Failure::usage(e.to_string().trim_end()));
        }
    };
    if cli.trials == 0 {
        return Err(Failure::usage("--trials must be positive"));
    }
    if let Some(l) = cli.level {
        if l > DEFAULT_MAX_LEVEL {
            return Err(AlgebraError::LevelTooLarge {
                level: l,
                max: DEFAULT_MAX_LEVEL,
            }
            .into());
        }
    }
    let allowed: Vec<&str> = match &cli.command {
        Command::Props => suite::check_names(cli.level.unwrap_or(3)),
        Command::Rootsearch { .. } => vec!["root"],
        _ => vec![],
    };
    if let Some(name) = tols.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Failure::usage(format!("unknown tolerance --tol.{name}")));
    }
    dispatch(&cli, &tols)
}

fn element_at(arg: &str, level: Option<u32>) -> Result<Element, Failure> {
    let e = input::element(arg)?;
    match level {
        Some(l) if l != e.level() => Err(Failure::usage(format!(
            "element has level {} but --level is {l}",
            e.level()
        ))),
        _ => Ok(e),
    }
}

fn elem_value(e: &Element) -> Value {
    serde_json::to_value(e).expect("elements serialize")
}

fn fallback(arg: &Option<String>, level: u32) -> Result<Option<Element>, Failure> {
    arg.as_deref()
        .map(|a| input::direction(a, level))
        .transpose()
}

fn basis_name(sign: f64, idx: usize) -> String {
    if sign < 0.0 {
        format!("-e{idx}")
    } else {
        format!("e{idx}")
    }
}

fn dispatch(cli: &Cli, tols: &BTreeMap<String, f64>) -> Result<String, Failure> {
    let fmt = cli.format;
    let out = |v: Value| Ok(render::render(&v, fmt));
    match &cli.command {
        Command::Table => {
            let level = cli.level.unwrap_or(2);
            if level > MAX_TABLE_LEVEL {
                return Err(Failure::usage(format!(
                    "table supports levels up to {MAX_TABLE_LEVEL}, got {level}"
                )));
            }
            let dim = 1usize << level;
            let header: Vec<String> = (0..dim).map(|i| format!("e{i}")).collect();
            let body: Vec<Vec<String>> = (0..dim)
                .map(|i| {
                    (0..dim)
                        .map(|j| {
                            let (s, k) = basis_product(level, i, j);
                            basis_name(s, k)
                        })
                        .collect()
                })
                .collect();
            match fmt {
                Format::Json => out(json!({ "level": level, "table": body })),
                _ => Ok(render::render_grid(&header, &body, fmt)),
            }
        }
        Command::Eval { op, elem, other, k } => {
            let x = element_at(elem, cli.level)?;
            let second = || -> Result<Element, Failure> {
                let o = other
                    .as_deref()
                    .ok_or_else(|| Failure::usage("this operation needs --other"))?;
                element_at(o, Some(x.level()))
            };
            let v = match op {
                Op::Add => elem_value(&x.try_add(&second()?)?),
                Op::Sub => elem_value(&x.try_sub(&second()?)?),
                Op::Mul => elem_value(&x.try_mul(&second()?)?),
                Op::Commutator => elem_value(&cdalg::structure::commutator(&x, &second()?)?),
                Op::Conj => elem_value(&x.conjugate()),
                Op::Inverse => elem_value(&x.inverse()?),
                Op::Norm => json!(x.norm()),
                Op::Pow => {
                    let k = k.ok_or_else(|| Failure::usage("pow needs --k"))?;
                    elem_value(&x.powi(k)?)
                }
            };
            out(v)
        }
        Command::Exp { elem } => out(elem_value(&exp(&element_at(elem, cli.level)?)?)),
        Command::Log { elem, fallback: fb } => {
            let x = element_at(elem, cli.level)?;
            let dir = fallback(fb, x.level())?;
            out(elem_value(&log_principal(&x, dir.as_ref())?))
        }
        Command::Root {
            elem,
            k,
            reading,
            fallback: fb,
        } => {
            let x = element_at(elem, cli.level)?;
            if *k == 0 {
                return Err(Failure::usage("--k must be positive"));
            }
            let r = match reading {
                Reading::Polar => k_root(&x, *k, fallback(fb, x.level())?.as_ref())?,
                Reading::Literal => {
                    if fb.is_some() {
                        return Err(Failure::usage(
                            "--fallback applies to the polar reading only",
                        ));
                    }
                    k_root_literal(&x, *k)?
                }
            };
            out(elem_value(&r))
        }
        Command::Zerodiv => {
            let level = cli.level.unwrap_or(4);
            let pair = find_zero_divisor_pair(level);
            out(json!({ "level": level, "pair": pair }))
        }
        Command::Props => {
            let level = cli.level.unwrap_or(3);
            let profile = law_profile(level, cli.trials, cli.seed)?;
            let report = suite::run_suite(level, cli.trials, cli.seed, tols)?;
            let profile_ok = profile.matches_classification()
                && profile
                    .laws
                    .iter()
                    .all(|l| l.status != LawStatus::Inconclusive);
            let passed = profile_ok && report.passed();
            let text = render::render(
                &json!({ "profile": profile, "suite": report, "passed": passed }),
                fmt,
            );
            if passed {
                Ok(text)
            } else {
                let _ = writeln!(std::io::stdout(), "{text}");
                let mut failed: Vec<String> = report.failures().map(|c| c.name.clone()).collect();
                if !profile_ok {
                    failed.insert(0, "law_profile".into());
                }
                Err(Failure {
                    code: 4,
                    message: format!("failed: {}", failed.join(", ")),
                })
            }
        }
        Command::Winding { k, dir, samples } => {
            let level = cli.level.unwrap_or(2);
            let s = input::slice(dir, level)?;
            let w = cdalg::poly::power_map_winding(*k, &s, *samples)?;
            out(json!(w))
        }
        Command::Rootsearch {
            poly,
            generalized,
            commutator,
            starts,
            max_iter,
        } => {
            if let Some(p) = poly {
                let p = ComplexPolynomial::from_fixture(&input::polynomial(p)?)?;
                check_level(cli.level, p.level())?;
                let roots = roots_complex_poly(&p)?;
                let v: Vec<Value> = roots.iter().map(elem_value).collect();
                return out(json!({ "outcome": "found", "roots": v }));
            }
            let map: Box<dyn ResidualMap> = if let Some(g) = generalized {
                Box::new(GeneralizedPolynomial::from_fixture(&input::generalized(
                    g,
                )?)?)
            } else if let Some(d) = commutator {
                let level = cli.level.unwrap_or(2);
                Box::new(CommutatorProbe::new(input::direction(d, level)?)?)
            } else {
                return Err(Failure::usage(
                    "rootsearch needs --poly, --generalized or --commutator",
                ));
            };
            check_level(cli.level, map.level())?;
            let opts = SearchOptions {
                seed: cli.seed,
                starts_per_radius: *starts,
                max_iterations: *max_iter,
                tolerance: tols.get("root").copied(),
                ..SearchOptions::default()
            };
            let outcome = root_search(map.as_ref(), &opts)?;
            let text = render::render(&serde_json::to_value(&outcome).expect("serializes"), fmt);
            match outcome {
                SearchOutcome::Found(_) => Ok(text),
                SearchOutcome::NotFound(d) => {
                    let _ = writeln!(std::io::stdout(), "{text}");
                    Err(AlgebraError::NoConvergence {
                        worst_residual: d.best_residual,
                    }
                    .into())
                }
            }
        }
    }
}

fn check_level(flag: Option<u32>, actual: u32) -> Result<(), Failure> {
    match flag {
        Some(l) if l != actual => Err(Failure::usage(format!(
            "input has level {actual} but --level is {l}"
        ))),
        _ => Ok(()),
    }
}
