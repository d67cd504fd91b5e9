use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::complex::ComplexPolynomial;
use crate::element::Element;
use crate::error::{AlgebraError, Result};
use crate::sampling::{trial_rng, uniform_element, unit_pure};
use crate::structure::commutator;

/// A map `A_n -> A_n` whose zeros a root search looks for.
pub trait ResidualMap: Sync {
    fn level(&self) -> u32;

    fn residual(&self, x: &Element) -> Result<Element>;

    /// Magnitude used to scale the default acceptance tolerance.
    fn scale(&self) -> f64 {
        1.0
    }
}

/// One term `coeff * x^exponent` of a perturbation, the coefficient multiplying
/// from the left.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: Element,
    pub exponent: i32,
}

type PerturbationFn = Arc<dyn Fn(&Element) -> Element + Send + Sync>;

#[derive(Clone)]
enum Perturbation {
    Terms(Vec<Term>),
    Custom(PerturbationFn),
}

/// `p(x) = x^k (e0 + g(x))` with `||g(x)|| -> 0` as `||x|| -> infinity`.
#[derive(Clone)]
pub struct GeneralizedPolynomial {
    level: u32,
    degree: u32,
    perturbation: Perturbation,
    scale: f64,
}

impl fmt::Debug for GeneralizedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("GeneralizedPolynomial");
        d.field("level", &self.level).field("degree", &self.degree);
        match &self.perturbation {
            Perturbation::Terms(t) => d.field("terms", t),
            Perturbation::Custom(_) => d.field("g", &"<fn>"),
        };
        d.finish()
    }
}

/// JSON fixture: `{"level", "degree", "terms": [{"coeff": <element>, "exponent"}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneralizedFixture {
    pub level: u32,
    pub degree: u32,
    pub terms: Vec<Term>,
}

impl GeneralizedPolynomial {
    /// Perturbation given as a sum of terms; the caller is trusted on decay.
    pub fn from_terms(level: u32, degree: u32, terms: Vec<Term>) -> Result<Self> {
        if degree == 0 {
            return Err(AlgebraError::InvalidArgument(
                "degree must be positive".into(),
            ));
        }
        for t in &terms {
            if t.coeff.level() != level {
                return Err(AlgebraError::LevelMismatch {
                    left: level,
                    right: t.coeff.level(),
                });
            }
        }
        let scale = terms.iter().map(|t| t.coeff.norm()).fold(1.0, f64::max);
        Ok(Self {
            level,
            degree,
            perturbation: Perturbation::Terms(terms),
            scale,
        })
    }

    /// Perturbation given as an arbitrary function of nonzero `x`.
    pub fn from_fn<F>(level: u32, degree: u32, g: F) -> Result<Self>
    where
        F: Fn(&Element) -> Element + Send + Sync + 'static,
    {
        if degree == 0 {
            return Err(AlgebraError::InvalidArgument(
                "degree must be positive".into(),
            ));
        }
        Ok(Self {
            level,
            degree,
            perturbation: Perturbation::Custom(Arc::new(g)),
            scale: 1.0,
        })
    }

    /// Loads a fixture, rejecting constant or non-decaying perturbations.
    pub fn from_fixture(f: &GeneralizedFixture) -> Result<Self> {
        let live: Vec<&Term> = f.terms.iter().filter(|t| t.coeff.norm() > 0.0).collect();
        if live.is_empty() {
            return Err(AlgebraError::InvalidFixture("g is constant".into()));
        }
        if let Some(t) = live.iter().find(|t| t.exponent >= 0) {
            return Err(AlgebraError::InvalidFixture(format!(
                "term with exponent {} does not decay",
                t.exponent
            )));
        }
        Self::from_terms(f.level, f.degree, f.terms.clone())
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> Option<&[Term]> {
        match &self.perturbation {
            Perturbation::Terms(t) => Some(t),
            Perturbation::Custom(_) => None,
        }
    }

    /// `g(x)` for nonzero `x`.
    pub fn g(&self, x: &Element) -> Result<Element> {
        if x.level() != self.level {
            return Err(AlgebraError::LevelMismatch {
                left: self.level,
                right: x.level(),
            });
        }
        if x.is_zero() {
            return Err(AlgebraError::ZeroElement);
        }
        match &self.perturbation {
            Perturbation::Custom(g) => Ok(g(x)),
            Perturbation::Terms(terms) => eval_terms(terms, x),
        }
    }
}

/// Sum of `coeff * x^exponent`. Powers are built incrementally in the same
/// `y * y^(m-1)` order as [`Element::powi`], so values agree bit for bit.
fn eval_terms(terms: &[Term], x: &Element) -> Result<Element> {
    let max_pos = terms.iter().map(|t| t.exponent).max().unwrap_or(0).max(0) as usize;
    let max_neg = terms.iter().map(|t| -t.exponent).max().unwrap_or(0).max(0) as usize;
    let ladder = |base: &Element, n: usize| {
        let mut out = vec![Element::one(x.level()), base.clone()];
        for m in 2..=n {
            let next = base * &out[m - 1];
            out.push(next);
        }
        out
    };
    let pos = ladder(x, max_pos);
    let neg = if max_neg > 0 {
        ladder(&x.inverse()?, max_neg)
    } else {
        Vec::new()
    };
    let mut acc = Element::zero(x.level());
    for t in terms {
        let power = if t.exponent >= 0 {
            &pos[t.exponent as usize]
        } else {
            &neg[(-t.exponent) as usize]
        };
        acc = &acc + &(&t.coeff * power);
    }
    Ok(acc)
}

/// `x^k (e0 + g(x))`, bracketed exactly so.
pub fn eval_generalized(p: &GeneralizedPolynomial, x: &Element) -> Result<Element> {
    let g = p.g(x)?;
    let mut bracket = g;
    bracket.coeffs_mut()[0] += 1.0;
    Ok(&x.powi(p.degree as i32)? * &bracket)
}

impl ResidualMap for GeneralizedPolynomial {
    fn level(&self) -> u32 {
        self.level
    }

    fn residual(&self, x: &Element) -> Result<Element> {
        eval_generalized(self, x)
    }

    fn scale(&self) -> f64 {
        self.scale
    }
}

/// Rewrites a complex polynomial as `x^k (e0 + g(x))` with
/// `g(x) = xi_0 x^-k + xi_1 x^(1-k) + ... + xi_(k-1) x^-1`.
pub fn to_generalized(p: &ComplexPolynomial) -> GeneralizedPolynomial {
    let k = p.degree() as i32;
    let terms = (0..p.degree())
        .map(|i| Term {
            coeff: p.coeff_element(i),
            exponent: i as i32 - k,
        })
        .collect();
    GeneralizedPolynomial::from_terms(p.level(), p.degree() as u32, terms)
        .expect("complex polynomials have positive degree and consistent levels")
}

/// The map `x -> a x - x a + e0`, which has no zeros: commutators with a pure
/// `a` have zero real part. Not a generalized polynomial; used as a negative control.
#[derive(Clone, Debug)]
pub struct CommutatorProbe {
    a: Element,
}

impl CommutatorProbe {
    pub fn new(a: Element) -> Result<Self> {
        let real = a.real_part();
        if real.abs() > 1e-12 * a.norm().max(1.0) {
            return Err(AlgebraError::NotPure { real });
        }
        if a.is_zero() {
            return Err(AlgebraError::ZeroElement);
        }
        Ok(Self { a })
    }
}

impl ResidualMap for CommutatorProbe {
    fn level(&self) -> u32 {
        self.a.level()
    }

    fn residual(&self, x: &Element) -> Result<Element> {
        let mut c = commutator(&self.a, x)?;
        c.coeffs_mut()[0] += 1.0;
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayReport {
    pub radii: Vec<f64>,
    /// Largest sampled `||g(x)||` on each sphere.
    pub max_norm: Vec<f64>,
    /// Whether `max_norm` decreases strictly along increasing radii.
    pub monotone: bool,
}

/// Samples `||g||` on spheres of the given radii (`samples` points each, fixed seed).
pub fn check_decay(
    p: &GeneralizedPolynomial,
    radii: &[f64],
    samples: usize,
) -> Result<DecayReport> {
    let mut max_norm = Vec::with_capacity(radii.len());
    for (ri, &r) in radii.iter().enumerate() {
        let mut rng = trial_rng(0xdeca, ri as u64);
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let dir = if p.level == 0 {
                Element::one(0)
            } else {
                let u = uniform_element(&mut rng, p.level);
                if u.norm() > 1e-3 {
                    u.scale(1.0 / u.norm())
                } else {
                    unit_pure(&mut rng, p.level)
                }
            };
            worst = worst.max(p.g(&dir.scale(r))?.norm());
        }
        max_norm.push(worst);
    }
    let mut order: Vec<usize> = (0..radii.len()).collect();
    order.sort_by(|&a, &b| radii[a].total_cmp(&radii[b]));
    let monotone = order.windows(2).all(|w| max_norm[w[1]] < max_norm[w[0]]);
    Ok(DecayReport {
        radii: radii.to_vec(),
        max_norm,
        monotone,
    })
}
