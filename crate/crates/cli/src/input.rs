use std::collections::BTreeMap;
use std::fs;

use cdalg::poly::{ComplexSlice, GeneralizedFixture, PolynomialFixture};
use cdalg::Element;
use serde::de::DeserializeOwned;

use crate::Failure;

/// Pulls `--tol.<name> <value>` and `--tol.<name>=<value>` out of `args`; clap does
/// not accept dynamic flag names.
pub fn split_tolerances(
    args: Vec<String>,
) -> Result<(Vec<String>, BTreeMap<String, f64>), Failure> {
    let mut rest = Vec::with_capacity(args.len());
    let mut tols = BTreeMap::new();
    let mut it = args.into_iter();
    while let Some(arg) = it.next() {
        let Some(spec) = arg.strip_prefix("--tol.") else {
            rest.push(arg);
            continue;
        };
        let (name, value) = match spec.split_once('=') {
            Some((n, v)) => (n.to_string(), v.to_string()),
            None => {
                let v = it
                    .next()
                    .ok_or_else(|| Failure::usage(format!("--tol.{spec} needs a value")))?;
                (spec.to_string(), v)
            }
        };
        if name.is_empty() {
            return Err(Failure::usage("empty tolerance name"));
        }
        let v: f64 = value
            .parse()
            .map_err(|_| Failure::usage(format!("bad value for --tol.{name}: {value}")))?;
        if !v.is_finite() || v < 0.0 {
            return Err(Failure::usage(format!(
                "--tol.{name} must be finite and non-negative"
            )));
        }
        tols.insert(name, v);
    }
    Ok((rest, tols))
}

/// Inline JSON, or `@path` to read it from a file.
fn read_text(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => {
            fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {path}: {e}")))
        }
        None => Ok(arg.to_string()),
    }
}

fn parse_json<T: DeserializeOwned>(arg: &str, what: &str) -> Result<T, Failure> {
    let text = read_text(arg)?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("invalid {what}: {e}")))
}

pub fn element(arg: &str) -> Result<Element, Failure> {
    parse_json(arg, "element")
}

pub fn polynomial(arg: &str) -> Result<PolynomialFixture, Failure> {
    parse_json(arg, "polynomial fixture")
}

pub fn generalized(arg: &str) -> Result<GeneralizedFixture, Failure> {
    parse_json(arg, "generalized polynomial fixture")
}

/// `e<i>` or a JSON element, at `level`.
pub fn direction(arg: &str, level: u32) -> Result<Element, Failure> {
    if let Some(idx) = arg.strip_prefix('e') {
        let i: usize = idx
            .parse()
            .map_err(|_| Failure::usage(format!("bad basis index in {arg}")))?;
        if i >= 1usize << level {
            return Err(Failure::usage(format!(
                "{arg} is not a basis vector of A_{level}"
            )));
        }
        return Ok(Element::basis(level, i));
    }
    let e = element(arg)?;
    if e.level() != level {
        return Err(Failure::usage(format!(
            "direction has level {}, expected {level}",
            e.level()
        )));
    }
    Ok(e)
}

/// A slice direction; non-unit pure directions are normalized.
pub fn slice(arg: &str, level: u32) -> Result<ComplexSlice, Failure> {
    let d = direction(arg, level)?;
    if d.real_part() != 0.0 {
        return Err(cdalg::AlgebraError::InvalidDirection.into());
    }
    Ok(ComplexSlice::normalized(&d)?)
}
