//! Randomized invariant suite over one level of the tower.
//!
//! Each check draws its trials from independent ChaCha streams, so a report is a
//! pure function of `(level, trials, seed)` and the tolerance overrides.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::element::Element;
use crate::error::{AlgebraError, Result};
use crate::poly::{
    eval_complex_poly, eval_generalized, power_map_winding, roots_complex_poly, to_generalized,
    ComplexPolynomial, ComplexSlice,
};
use crate::sampling::{
    bounded_element, nonzero_element, trial_rng, uniform_element, uniform_pure, unit_pure, TrialRng,
};
use crate::structure::{
    associator, centralizer_report, commutator, find_zero_divisor_pair, is_c_dependent,
    zero_divisor_pairs, DEFAULT_ANGULAR_TOL,
};
use crate::transcendental::{exp, exp_pure, k_root, log_principal, scale_map};

/// Whether the recorded value must stay below or above the tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// Informational checks are reported but never fail the suite.
    pub asserted: bool,
    pub passed: bool,
    pub bound: Bound,
    pub tolerance: f64,
    /// Largest value for `AtMost`, smallest for `AtLeast`.
    pub worst: f64,
    pub trials: usize,
    /// First error raised by a trial, if any.
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub level: u32,
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.asserted)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.asserted && !c.passed)
    }
}

type Trial<'a> = Box<dyn Fn(&mut TrialRng) -> Result<f64> + Sync + 'a>;

struct Check<'a> {
    name: &'static str,
    asserted: bool,
    bound: Bound,
    tolerance: f64,
    trials: usize,
    run: Trial<'a>,
}

fn rel(residual: f64, scale: f64) -> f64 {
    residual / scale.max(1.0)
}

/// Names of every check, usable as `--tol.<name>` keys.
pub fn check_names(level: u32) -> Vec<&'static str> {
    checks(level, 1).iter().map(|c| c.name).collect()
}

/// Runs all checks that apply at `level`. `overrides` replaces the tolerance of the
/// named checks; unknown names are rejected.
pub fn run_suite(
    level: u32,
    trials: usize,
    seed: u64,
    overrides: &BTreeMap<String, f64>,
) -> Result<SuiteReport> {
    if trials == 0 {
        return Err(AlgebraError::InvalidArgument(
            "trials must be positive".into(),
        ));
    }
    let list = checks(level, trials);
    for name in overrides.keys() {
        if !list.iter().any(|c| c.name == name) {
            return Err(AlgebraError::InvalidArgument(format!(
                "unknown tolerance '{name}'"
            )));
        }
    }
    let results = list
        .iter()
        .enumerate()
        .map(|(idx, c)| {
            let tolerance = overrides.get(c.name).copied().unwrap_or(c.tolerance);
            run_check(c, tolerance, seed, idx as u64)
        })
        .collect();
    Ok(SuiteReport {
        level,
        trials,
        seed,
        checks: results,
    })
}

fn run_check(c: &Check<'_>, tolerance: f64, seed: u64, idx: u64) -> CheckResult {
    let outcomes: Vec<Result<f64>> = (0..c.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, (idx << 32) | t);
            (c.run)(&mut rng)
        })
        .collect();
    let mut error = None;
    let mut worst = match c.bound {
        Bound::AtMost => 0.0f64,
        Bound::AtLeast => f64::INFINITY,
    };
    for o in outcomes {
        match o {
            Ok(v) => {
                worst = match c.bound {
                    Bound::AtMost => worst.max(v),
                    Bound::AtLeast => worst.min(v),
                }
            }
            Err(e) => {
                error.get_or_insert_with(|| e.to_string());
            }
        }
    }
    let within = match c.bound {
        Bound::AtMost => worst <= tolerance,
        Bound::AtLeast => worst >= tolerance,
    };
    CheckResult {
        name: c.name.to_string(),
        asserted: c.asserted,
        passed: error.is_none() && within && !worst.is_nan(),
        bound: c.bound,
        tolerance,
        worst,
        trials: c.trials,
        error,
    }
}

fn series_exp(x: &Element) -> Element {
    let mut term = Element::one(x.level());
    let mut sum = term.clone();
    for m in 1..=60 {
        term = (&term * x).scale(1.0 / m as f64);
        sum = &sum + &term;
    }
    sum
}

/// C-dependent pair sharing a random unit direction.
fn dependent_pair(rng: &mut TrialRng, level: u32) -> (Element, Element) {
    let a = unit_pure(rng, level);
    let part = |rng: &mut TrialRng| {
        let mut x = a.scale(rng.random_range(-2.0..2.0));
        x.coeffs_mut()[0] = rng.random_range(-1.0..1.0);
        x
    };
    let x = part(rng);
    let y = part(rng);
    (x, y)
}

fn random_slice(rng: &mut TrialRng, level: u32) -> Result<ComplexSlice> {
    ComplexSlice::new(unit_pure(rng, level))
}

fn random_complex_poly(rng: &mut TrialRng, level: u32) -> Result<ComplexPolynomial> {
    let slice = random_slice(rng, level)?;
    let degree = rng.random_range(1..=8);
    let coeffs = (0..degree)
        .map(|_| (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)))
        .collect();
    ComplexPolynomial::monic(slice, coeffs)
}

fn check<'a>(
    name: &'static str,
    tolerance: f64,
    trials: usize,
    run: impl Fn(&mut TrialRng) -> Result<f64> + Sync + 'a,
) -> Check<'a> {
    Check {
        name,
        asserted: true,
        bound: Bound::AtMost,
        tolerance,
        trials,
        run: Box::new(run),
    }
}

fn checks(n: u32, trials: usize) -> Vec<Check<'static>> {
    let mut list = vec![
        check("conjugate_involution", 0.0, trials, move |rng| {
            let x = uniform_element(rng, n);
            Ok(x.conjugate().conjugate().distance(&x))
        }),
        check("conjugate_antihomomorphism", 1e-9, trials, move |rng| {
            let x = uniform_element(rng, n);
            let y = uniform_element(rng, n);
            Ok((&x * &y)
                .conjugate()
                .distance(&(&y.conjugate() * &x.conjugate())))
        }),
        check("norm_identity", 1e-9, trials, move |rng| {
            let x = uniform_element(rng, n);
            let r = Element::real(n, x.norm_sq());
            Ok((&x * &x.conjugate())
                .distance(&r)
                .max((&x.conjugate() * &x).distance(&r)))
        }),
        check("inner_product_identity", 1e-9, trials, move |rng| {
            let x = uniform_element(rng, n);
            let y = uniform_element(rng, n);
            let lhs = Element::real(n, 2.0 * x.inner(&y));
            Ok(lhs.distance(&(&(&x * &y.conjugate()) + &(&y * &x.conjugate()))))
        }),
        check("flexibility", 1e-9, trials, move |rng| {
            let x = uniform_element(rng, n);
            let y = uniform_element(rng, n);
            let r = (&(&x * &y) * &x).distance(&(&x * &(&y * &x)));
            Ok(r / (1.0 + x.norm_sq() * y.norm()))
        }),
        check("power_associativity", 1e-9, trials, move |rng| {
            let x = uniform_element(rng, n);
            let mut worst = 0.0f64;
            for m in 1..8 {
                for k in 1..=(8 - m) {
                    let lhs = &x.powi(m)? * &x.powi(k)?;
                    let r = lhs.distance(&x.powi(m + k)?);
                    worst = worst.max(rel(r, x.norm().powi(m + k)));
                }
            }
            Ok(worst)
        }),
        check("power_conjugate", 1e-9, trials, move |rng| {
            let x = uniform_element(rng, n);
            let mut worst = 0.0f64;
            for k in 1..=8 {
                let r = x.powi(k)?.conjugate().distance(&x.conjugate().powi(k)?);
                worst = worst.max(rel(r, x.norm().powi(k)));
            }
            Ok(worst)
        }),
        check("power_norm", 1e-9, trials, move |rng| {
            let x = nonzero_element(rng, n);
            let mut worst = 0.0f64;
            for k in 1..=8 {
                let expected = x.norm().powi(k);
                worst = worst.max((x.powi(k)?.norm() - expected).abs() / expected);
            }
            Ok(worst)
        }),
        check("power_inverse", 1e-9, trials, move |rng| {
            let x = nonzero_element(rng, n);
            let inv = x.inverse()?;
            let mut worst = 0.0f64;
            for k in 1..=6 {
                let rhs = x.powi(k)?.inverse()?;
                worst = worst.max(inv.powi(k)?.distance(&rhs) / rhs.norm());
            }
            Ok(worst)
        }),
        check("embed_up_power_closure", 1e-10, trials, move |rng| {
            let x = uniform_element(rng, n);
            let y = x.embed_up(rng.random_range(-1.0..1.0))?;
            let half = 1usize << n;
            let mut worst = 0.0f64;
            for k in 1..=6 {
                let p = y.powi(k)?;
                let off = p.coeffs()[half + 1..]
                    .iter()
                    .fold(0.0f64, |m, c| m.max(c.abs()));
                worst = worst.max(off);
            }
            Ok(worst)
        }),
    ];

    if n <= 3 {
        list.push(check("alternativity", 1e-9, trials, move |rng| {
            let x = uniform_element(rng, n);
            let y = uniform_element(rng, n);
            let left = (&(&x * &x) * &y).distance(&(&x * &(&x * &y)));
            let right = (&x * &(&y * &y)).distance(&(&(&x * &y) * &y));
            Ok(left.max(right))
        }));
        list.push(check("norm_multiplicativity", 1e-9, trials, move |rng| {
            let x = uniform_element(rng, n);
            let y = uniform_element(rng, n);
            let s = x.norm() * y.norm();
            Ok(((&x * &y).norm() - s).abs() / s.max(1e-300))
        }));
        list.push(check("no_zero_divisor_pair", 0.0, 1, move |_| {
            Ok(if find_zero_divisor_pair(n).is_some() {
                1.0
            } else {
                0.0
            })
        }));
    } else {
        list.push(Check {
            bound: Bound::AtLeast,
            ..check("alternativity_witness", 0.1, 1, move |_| {
                // x = e_i + e_j, y = e_k inside the copy of A_4
                let mut best = 0.0f64;
                for i in 1..16 {
                    for j in i + 1..16 {
                        let x = &Element::basis(n, i) + &Element::basis(n, j);
                        for k in 1..16 {
                            let y = Element::basis(n, k);
                            best = best.max((&(&x * &x) * &y).distance(&(&x * &(&x * &y))));
                        }
                        if best > 0.1 {
                            return Ok(best);
                        }
                    }
                }
                Ok(best)
            })
        });
        list.push(check("zero_divisor_pair", 1e-12, 1, move |_| {
            let p = find_zero_divisor_pair(n).ok_or(AlgebraError::NoConvergence {
                worst_residual: f64::INFINITY,
            })?;
            let norms = (p.u.norm() - 2f64.sqrt()).abs() + (p.v.norm() - 2f64.sqrt()).abs();
            Ok(p.product_norm.max(p.u.inner(&p.v).abs()).max(norms))
        }));
    }

    if n >= 1 {
        list.extend([
            check("exp_series", 1e-12, trials, move |rng| {
                let x = bounded_element(rng, n, 3.0);
                let e = exp(&x)?;
                let s = series_exp(&x);
                Ok(e.coeffs()
                    .iter()
                    .zip(s.coeffs())
                    .fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
            }),
            check("exp_anchors", 1e-12, trials, move |rng| {
                let a = unit_pure(rng, n);
                let quarter = exp(&a.scale(PI / 2.0))?.distance(&a);
                let half = exp(&a.scale(PI))?.distance(&Element::real(n, -1.0));
                let zero = exp(&Element::zero(n))?.distance(&Element::one(n));
                Ok(quarter.max(half).max(zero))
            }),
            check("exp_norm", 1e-12, trials, move |rng| {
                let x = bounded_element(rng, n, 3.0);
                let expected = x.real_part().exp();
                Ok((exp(&x)?.norm() - expected).abs() / expected)
            }),
            check("exp_pure_scaling", 1e-12, trials, move |rng| {
                let a = uniform_pure(rng, n);
                let s: f64 = rng.random_range(-3.0..3.0);
                let t = s * a.norm();
                let expected = &Element::real(n, t.cos()) + &a.scale(t.sin() / a.norm());
                Ok(exp_pure(&a.scale(s))?.distance(&expected))
            }),
            check("exp_law_dependent", 1e-9, trials, move |rng| {
                let (x, y) = dependent_pair(rng, n);
                Ok(exp(&(&x + &y))?.distance(&(&exp(&x)? * &exp(&y)?)))
            }),
            check("exp_conjugate", 1e-12, trials, move |rng| {
                let x = bounded_element(rng, n, 3.0);
                Ok(rel(
                    exp(&x.conjugate())?.distance(&exp(&x)?.conjugate()),
                    exp(&x)?.norm(),
                ))
            }),
            check("exp_negation", 1e-9, trials, move |rng| {
                let x = bounded_element(rng, n, 3.0);
                let e = exp(&-&x)?;
                Ok(e.distance(&exp(&x)?.inverse()?) / e.norm())
            }),
            check("de_moivre", 1e-9, trials, move |rng| {
                let x = bounded_element(rng, n, 1.0);
                let e = exp(&x)?;
                let mut worst = 0.0f64;
                for k in -6..=6 {
                    let lhs = exp(&x.scale(f64::from(k)))?;
                    worst = worst.max(lhs.distance(&e.powi(k)?) / lhs.norm());
                    let via_map = exp(&scale_map(&x, k))?;
                    worst = worst.max(via_map.distance(&lhs) / lhs.norm());
                }
                Ok(worst)
            }),
            check("log_round_trip", 1e-9, trials, move |rng| {
                let y = nonzero_element(rng, n);
                if y.imag_part().norm() < 1e-6 {
                    return Ok(0.0);
                }
                Ok(exp(&log_principal(&y, None)?)?.distance(&y) / y.norm())
            }),
            check("log_unit_pure_is_pure", 1e-12, trials, move |rng| {
                let a = unit_pure(rng, n);
                Ok(log_principal(&a, None)?.real_part().abs())
            }),
            check("k_root_round_trip", 1e-9, trials, move |rng| {
                let x = nonzero_element(rng, n);
                let dir = unit_pure(rng, n);
                let neg = Element::real(n, -rng.random_range(0.1..2.0));
                let mut worst = 0.0f64;
                for k in 2..=6u32 {
                    let r = k_root(&x, k, None)?.powi(k as i32)?;
                    worst = worst.max(r.distance(&x) / x.norm());
                    let r = k_root(&neg, k, Some(&dir))?.powi(k as i32)?;
                    worst = worst.max(r.distance(&neg) / neg.norm());
                }
                Ok(worst)
            }),
            check("dependent_pairs_commute", 1e-9, trials, move |rng| {
                let (x, y) = dependent_pair(rng, n);
                Ok(commutator(&x, &y)?.norm())
            }),
            check("dependence_equivalence", 0.0, trials, move |rng| {
                let a = unit_pure(rng, n);
                let member = |rng: &mut TrialRng| {
                    let mut x = a.scale(
                        rng.random_range(0.5..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 },
                    );
                    x.coeffs_mut()[0] = rng.random_range(-1.0..1.0);
                    x
                };
                let (x, y, z) = (member(rng), member(rng), member(rng));
                let dep = |p: &Element, q: &Element| -> Result<bool> {
                    Ok(is_c_dependent(p, q, DEFAULT_ANGULAR_TOL)?.dependent)
                };
                let ok = dep(&x, &x)?
                    && dep(&x, &y)? == dep(&y, &x)?
                    && dep(&x, &y)?
                    && dep(&y, &z)?
                    && dep(&x, &z)?;
                Ok(if ok { 0.0 } else { 1.0 })
            }),
            check("commuting_pure_product_is_real", 1e-9, trials, move |rng| {
                let a = uniform_pure(rng, n);
                let b = a.scale(rng.random_range(-2.0..2.0));
                if commutator(&a, &b)?.norm() > 1e-9 {
                    return Ok(f64::INFINITY);
                }
                Ok((&(&a * &b) + &Element::real(n, a.inner(&b))).norm())
            }),
            check("commutator_real_part", 1e-12, trials, move |rng| {
                let a = uniform_pure(rng, n);
                let x = uniform_element(rng, n);
                Ok(commutator(&a, &x)?.real_part().abs())
            }),
            check("slice_closure", 1e-10, trials, move |rng| {
                let s = random_slice(rng, n)?;
                let pt = |rng: &mut TrialRng| {
                    s.embed(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                };
                let (x, y) = (pt(rng), pt(rng));
                let mut worst = 0.0f64;
                for z in [&x * &y, x.powi(5)?] {
                    let (u, v) = s.coordinates(&z)?;
                    worst = worst.max(z.distance(&s.embed(u, v)));
                }
                Ok(worst)
            }),
            check("slice_associativity", 1e-10, trials, move |rng| {
                let s = random_slice(rng, n)?;
                let pt = |rng: &mut TrialRng| {
                    s.embed(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                };
                let (x, y, z) = (pt(rng), pt(rng), pt(rng));
                Ok(associator(&x, &y, &z)?.norm())
            }),
            check(
                "complex_root_residuals",
                1e-8,
                trials.min(200),
                move |rng| {
                    let p = random_complex_poly(rng, n)?;
                    let roots = roots_complex_poly(&p)?;
                    if roots.len() != p.degree() {
                        return Ok(f64::INFINITY);
                    }
                    let mut worst = 0.0f64;
                    for r in &roots {
                        worst = worst.max(eval_complex_poly(&p, r)?.norm() / p.coeff_scale());
                    }
                    Ok(worst)
                },
            ),
            check("generalized_form", 1e-9, trials, move |rng| {
                let p = random_complex_poly(rng, n)?;
                let g = to_generalized(&p);
                let x = p
                    .slice()
                    .embed(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
                if x.norm() < 1e-3 {
                    return Ok(0.0);
                }
                let lhs = eval_generalized(&g, &x)?;
                let rhs = eval_complex_poly(&p, &x)?;
                Ok(lhs.distance(&rhs) / rhs.norm().max(1.0))
            }),
            check("winding_linearity", 0.0, trials.min(20), move |rng| {
                let s = random_slice(rng, n)?;
                let mut w = [0i64; 11];
                for k in -5..=5i32 {
                    if k != 0 {
                        w[(k + 5) as usize] = power_map_winding(k, &s, 256)?;
                    }
                }
                let mut bad = 0.0;
                for k in -5..=5i32 {
                    for l in -5..=5i32 {
                        let m = k + l;
                        if k == 0 || l == 0 || m == 0 || m.abs() > 5 {
                            continue;
                        }
                        let at = |i: i32| w[(i + 5) as usize];
                        if at(k) + at(l) != at(m) || at(k) != i64::from(k) {
                            bad += 1.0;
                        }
                    }
                }
                Ok(bad)
            }),
        ]);
    }

    if n == 2 || n == 3 {
        list.push(check(
            "centralizer_is_line",
            0.0,
            trials.min(100),
            move |rng| {
                let a = uniform_pure(rng, n);
                Ok((centralizer_report(&a)?.centralizer_dim as f64 - 1.0).abs())
            },
        ));
        list.push(Check {
            bound: Bound::AtLeast,
            ..check("exp_law_fails_independent", 1e-12, trials, move |rng| {
                let (x, y) = loop {
                    let x = uniform_element(rng, n);
                    let y = uniform_element(rng, n);
                    if crate::structure::principal_angle(&x.imag_part(), &y.imag_part()) > 0.1 {
                        break (x, y);
                    }
                };
                Ok(exp(&(&x + &y))?.distance(&(&exp(&x)? * &exp(&y)?)))
            })
        });
    }
    if n >= 2 {
        list.push(Check {
            bound: Bound::AtLeast,
            ..check("exp_law_witness", 0.05, 1, move |_| {
                let (x, y) = (Element::basis(n, 1), Element::basis(n, 2));
                Ok(exp(&(&x + &y))?.distance(&(&exp(&x)? * &exp(&y)?)))
            })
        });
    }
    if n >= 4 {
        // reported only: the decomposition is stated without proof or conditions
        let samples: Vec<Element> = zero_divisor_pairs(n)
            .take(trials.min(200))
            .flat_map(|p| [p.u, p.v])
            .collect();
        let count = samples.len();
        list.push(Check {
            asserted: false,
            ..check("centralizer_decomposition", 0.0, count.max(1), move |rng| {
                if samples.is_empty() {
                    return Ok(0.0);
                }
                let a = &samples[rng.random_range(0..samples.len())];
                let r = centralizer_report(a)?;
                Ok(if r.decomposition_ok { 0.0 } else { 1.0 })
            })
        });
    }
    list
}
