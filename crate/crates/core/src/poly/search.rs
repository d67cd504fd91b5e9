//! Multistart damped Gauss-Newton search for zeros of maps `A_n -> A_n`.
//!
//! Starts are laid out on spheres of several radii along a shifted Kronecker
//! sequence. Each start runs Gauss-Newton with a forward-difference Jacobian, a
//! minimum-norm least-squares step and backtracking under an Armijo condition.
//! Starts run in parallel batches; the reported root always belongs to the
//! lowest-indexed successful start, so the outcome does not depend on scheduling.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::generalized::ResidualMap;
use crate::element::Element;
use crate::error::Result;
use crate::sampling::trial_rng;

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOptions {
    pub seed: u64,
    pub radii: Vec<f64>,
    /// Starts per radius; `None` means `8 * 2^n`.
    pub starts_per_radius: Option<usize>,
    pub max_iterations: usize,
    /// Absolute residual tolerance; `None` means `1e-8 * map.scale()`.
    pub tolerance: Option<f64>,
    /// Iterates closer than this to the origin abandon their start.
    pub exclusion_radius: f64,
    /// Forward-difference step is `jacobian_step * (1 + ||x||)`.
    pub jacobian_step: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            radii: vec![0.5, 1.0, 2.0, 4.0, 8.0],
            starts_per_radius: None,
            max_iterations: 60,
            tolerance: None,
            exclusion_radius: 1e-3,
            jacobian_step: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FoundRoot {
    pub root: Element,
    pub residual: f64,
    pub start_index: usize,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchDiagnostics {
    pub starts: usize,
    /// Smallest residual over accepted iterates.
    pub best_residual: f64,
    pub best_point: Option<Element>,
    /// Smallest residual over every point the search evaluated.
    pub min_sampled_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found(FoundRoot),
    NotFound(SearchDiagnostics),
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&FoundRoot> {
        match self {
            SearchOutcome::Found(r) => Some(r),
            SearchOutcome::NotFound(_) => None,
        }
    }
}

struct StartResult {
    found: Option<(Element, f64, usize)>,
    best: (f64, Option<Element>),
    min_sampled: f64,
}

/// Fractional parts of the golden-ratio generalization `phi_d` used by the
/// Kronecker sequence in `d` dimensions.
fn kronecker_alphas(d: usize) -> Vec<f64> {
    let mut phi = 2.0f64;
    for _ in 0..64 {
        phi = (1.0 + phi).powf(1.0 / (d as f64 + 1.0));
    }
    (1..=d)
        .map(|i| (1.0 / phi.powi(i as i32)).fract())
        .collect()
}

/// Unit directions for the start schedule.
fn start_directions(level: u32, count: usize, seed: u64) -> Vec<Element> {
    let d = 1usize << level;
    let alphas = kronecker_alphas(d);
    let mut rng = trial_rng(seed, u64::MAX);
    let shift: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
    let mut out = Vec::with_capacity(count);
    let mut j = 0u64;
    while out.len() < count {
        j += 1;
        let coeffs: Vec<f64> = (0..d)
            .map(|i| 2.0 * (shift[i] + j as f64 * alphas[i]).fract() - 1.0)
            .collect();
        let x = Element::from_vec(level, coeffs);
        let n = x.norm();
        if n > 1e-3 {
            out.push(x.scale(1.0 / n));
        }
    }
    out
}

fn residual_norm(
    map: &dyn ResidualMap,
    x: &Element,
    min_sampled: &mut f64,
) -> Option<(Element, f64)> {
    let r = map.residual(x).ok()?;
    let n = r.norm();
    if !n.is_finite() {
        return None;
    }
    *min_sampled = min_sampled.min(n);
    Some((r, n))
}

fn run_start(map: &dyn ResidualMap, start: Element, opts: &SearchOptions, tol: f64) -> StartResult {
    let mut min_sampled = f64::INFINITY;
    let mut x = start;
    let dim = x.dim();
    let mut best = (f64::INFINITY, None);
    let Some((mut f, mut fnorm)) = residual_norm(map, &x, &mut min_sampled) else {
        return StartResult {
            found: None,
            best,
            min_sampled,
        };
    };
    for iteration in 0..=opts.max_iterations {
        if fnorm < best.0 {
            best = (fnorm, Some(x.clone()));
        }
        if fnorm <= tol {
            return StartResult {
                found: Some((x, fnorm, iteration)),
                best,
                min_sampled,
            };
        }
        if iteration == opts.max_iterations {
            break;
        }
        let h = opts.jacobian_step * (1.0 + x.norm());
        let mut jac = DMatrix::<f64>::zeros(dim, dim);
        let mut ok = true;
        for j in 0..dim {
            let mut xp = x.clone();
            xp.coeffs_mut()[j] += h;
            match residual_norm(map, &xp, &mut min_sampled) {
                Some((fp, _)) => {
                    for i in 0..dim {
                        jac[(i, j)] = (fp.coeffs()[i] - f.coeffs()[i]) / h;
                    }
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            break;
        }
        let rhs = DVector::from_iterator(dim, f.coeffs().iter().map(|v| -v));
        let svd = jac.clone().svd(true, true);
        let cutoff = 1e-12 * svd.singular_values.max();
        let Ok(step) = svd.solve(&rhs, cutoff) else {
            break;
        };
        // directional derivative of ||F||^2 along the step
        let slope = 2.0 * (jac * &step).dot(&(-&rhs));
        if slope.is_nan() || slope >= 0.0 {
            break;
        }
        let f0 = fnorm * fnorm;
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let trial_coeffs: Vec<f64> = x
                .coeffs()
                .iter()
                .zip(step.iter())
                .map(|(xi, si)| xi + t * si)
                .collect();
            let trial = Element::from_vec(x.level(), trial_coeffs);
            if trial.norm() >= opts.exclusion_radius {
                if let Some((ft, n)) = residual_norm(map, &trial, &mut min_sampled) {
                    if n * n <= f0 + 1e-4 * t * slope {
                        accepted = Some((trial, ft, n));
                        break;
                    }
                }
            }
            t *= 0.5;
        }
        let Some((xn, fnew, nnew)) = accepted else {
            break;
        };
        x = xn;
        f = fnew;
        fnorm = nnew;
    }
    StartResult {
        found: None,
        best,
        min_sampled,
    }
}

/// Searches for `x` with `||map(x)|| <= tolerance`. `NotFound` means the budget ran
/// out; it carries the best residual seen.
pub fn root_search(map: &dyn ResidualMap, opts: &SearchOptions) -> Result<SearchOutcome> {
    let level = map.level();
    let per_radius = opts.starts_per_radius.unwrap_or(8 << level);
    let tol = opts.tolerance.unwrap_or(1e-8 * map.scale());
    let directions = start_directions(level, per_radius, opts.seed);
    let starts: Vec<Element> = opts
        .radii
        .iter()
        .flat_map(|&r| directions.iter().map(move |d| d.scale(r)))
        .collect();

    let batch = (2 * rayon::current_num_threads()).max(4);
    let mut best = (f64::INFINITY, None);
    let mut min_sampled = f64::INFINITY;
    for (b, chunk) in starts.chunks(batch).enumerate() {
        let results: Vec<StartResult> = chunk
            .par_iter()
            .map(|s| run_start(map, s.clone(), opts, tol))
            .collect();
        for (i, r) in results.into_iter().enumerate() {
            min_sampled = min_sampled.min(r.min_sampled);
            if r.best.0 < best.0 {
                best = r.best;
            }
            if let Some((root, residual, iterations)) = r.found {
                return Ok(SearchOutcome::Found(FoundRoot {
                    root,
                    residual,
                    start_index: b * batch + i,
                    iterations,
                }));
            }
        }
    }
    Ok(SearchOutcome::NotFound(SearchDiagnostics {
        starts: starts.len(),
        best_residual: best.0,
        best_point: best.1,
        min_sampled_residual: min_sampled,
    }))
}

/// [`root_search`] specialised to generalized polynomials.
pub fn root_search_generalized(
    p: &super::generalized::GeneralizedPolynomial,
    opts: &SearchOptions,
) -> Result<SearchOutcome> {
    root_search(p, opts)
}
