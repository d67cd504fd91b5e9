use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::slice::ComplexSlice;
use crate::element::Element;
use crate::error::{AlgebraError, Result};
use crate::structure::{is_c_dependent, DEFAULT_ANGULAR_TOL};

/// Iteration budget for each simultaneous-iteration phase.
pub const ROOT_BUDGET: usize = 200;
/// Relative residual bound every returned root must meet.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-8;

/// Monic polynomial `xi_0 + xi_1 x + ... + xi_(k-1) x^(k-1) + x^k` whose
/// coefficients `xi_i = r_i e0 + s_i a` lie in one complex slice.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPolynomial {
    slice: ComplexSlice,
    coeffs: Vec<(f64, f64)>,
}

/// JSON fixture: `{"level", "direction", "coeffs": [[r, s], ...], "degree"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolynomialFixture {
    pub level: u32,
    pub direction: Vec<f64>,
    pub coeffs: Vec<[f64; 2]>,
    pub degree: usize,
}

impl ComplexPolynomial {
    /// Monic polynomial from its lower coefficients `xi_0 .. xi_(k-1)`.
    pub fn monic(slice: ComplexSlice, coeffs: Vec<(f64, f64)>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(AlgebraError::InvalidArgument(
                "degree must be at least 1".into(),
            ));
        }
        if coeffs.iter().any(|(r, s)| !r.is_finite() || !s.is_finite()) {
            return Err(AlgebraError::InvalidArgument(
                "non-finite coefficient".into(),
            ));
        }
        Ok(Self { slice, coeffs })
    }

    /// Normalizes a general polynomial (coefficients `c_0 .. c_k`, low to high) by
    /// dividing through by the leading coefficient.
    pub fn from_full(slice: ComplexSlice, coeffs: &[(f64, f64)]) -> Result<Self> {
        let (&lead, rest) = coeffs
            .split_last()
            .ok_or_else(|| AlgebraError::InvalidArgument("empty coefficient list".into()))?;
        let lead = Complex64::new(lead.0, lead.1);
        if lead.norm() == 0.0 {
            return Err(AlgebraError::ZeroElement);
        }
        let normalized = rest
            .iter()
            .map(|&(r, s)| {
                let c = Complex64::new(r, s) / lead;
                (c.re, c.im)
            })
            .collect();
        Self::monic(slice, normalized)
    }

    /// Builds `prod (x - root_i)` for complex roots given in slice coordinates.
    pub fn from_roots(slice: ComplexSlice, roots: &[(f64, f64)]) -> Result<Self> {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &(re, im) in roots {
            let z = Complex64::new(re, im);
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (i, &ci) in c.iter().enumerate() {
                next[i + 1] += ci;
                next[i] -= ci * z;
            }
            c = next;
        }
        let full: Vec<(f64, f64)> = c.iter().map(|z| (z.re, z.im)).collect();
        Self::from_full(slice, &full)
    }

    pub fn from_fixture(f: &PolynomialFixture) -> Result<Self> {
        let direction = Element::new(f.level, f.direction.clone())?;
        let slice = ComplexSlice::new(direction)?;
        if f.coeffs.len() != f.degree {
            return Err(AlgebraError::InvalidFixture(format!(
                "degree {} but {} coefficients",
                f.degree,
                f.coeffs.len()
            )));
        }
        Self::monic(slice, f.coeffs.iter().map(|c| (c[0], c[1])).collect())
    }

    pub fn to_fixture(&self) -> PolynomialFixture {
        PolynomialFixture {
            level: self.level(),
            direction: self.slice.direction().coeffs().to_vec(),
            coeffs: self.coeffs.iter().map(|&(r, s)| [r, s]).collect(),
            degree: self.degree(),
        }
    }

    pub fn slice(&self) -> &ComplexSlice {
        &self.slice
    }

    pub fn level(&self) -> u32 {
        self.slice.level()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[(f64, f64)] {
        &self.coeffs
    }

    /// Coefficient `xi_i` as an algebra element.
    pub fn coeff_element(&self, i: usize) -> Element {
        let (r, s) = self.coeffs[i];
        self.slice.embed(r, s)
    }

    /// `max(1, max_i ||xi_i||)`.
    pub fn coeff_scale(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|&(r, s)| r.hypot(s))
            .fold(1.0, f64::max)
    }

    /// Complex coefficients, low to high, including the leading 1.
    pub fn complex_coeffs(&self) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .map(|&(r, s)| Complex64::new(r, s))
            .chain(std::iter::once(Complex64::new(1.0, 0.0)))
            .collect()
    }

    /// Horner evaluation `((x + xi_(k-1)) x + xi_(k-2)) x + ...` with every product
    /// taken as `acc * x`. Defined on all of `A_n`; see [`eval_complex_poly`] for the
    /// checked version.
    pub fn eval_horner(&self, x: &Element) -> Result<Element> {
        let mut acc = Element::one(self.level());
        for i in (0..self.degree()).rev() {
            acc = acc.try_mul(x)?.try_add(&self.coeff_element(i))?;
        }
        Ok(acc)
    }
}

/// Evaluates `p` at `x`, which must be C-dependent with the slice direction.
pub fn eval_complex_poly(p: &ComplexPolynomial, x: &Element) -> Result<Element> {
    let report = is_c_dependent(x, p.slice.direction(), DEFAULT_ANGULAR_TOL)?;
    if !report.dependent {
        return Err(AlgebraError::OffSlice);
    }
    p.eval_horner(x)
}

/// Value and derivative of a complex polynomial (coefficients low to high).
fn horner_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &ci in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ci;
    }
    (p, dp)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Iteration {
    Aberth,
    DurandKerner,
}

/// Runs one simultaneous-iteration scheme in place; true when the largest update
/// drops to `1e-14 radius`.
fn iterate(c: &[Complex64], z: &mut [Complex64], radius: f64, scheme: Iteration) -> bool {
    let stop = 1e-14 * radius;
    for _ in 0..ROOT_BUDGET {
        let mut max_step = 0.0f64;
        for i in 0..z.len() {
            let zi = z[i];
            let step = match scheme {
                Iteration::Aberth => {
                    let (p, dp) = horner_with_derivative(c, zi);
                    if p.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        let ratio = p / dp;
                        let repulsion: Complex64 = z
                            .iter()
                            .enumerate()
                            .filter(|&(j, _)| j != i)
                            .map(|(_, &zj)| (zi - zj).inv())
                            .sum();
                        ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion)
                    }
                }
                Iteration::DurandKerner => {
                    let (p, _) = horner_with_derivative(c, zi);
                    let denom: Complex64 = z
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &zj)| zi - zj)
                        .product();
                    p / denom
                }
            };
            if step.is_finite() {
                z[i] = zi - step;
                max_step = max_step.max(step.norm());
            } else {
                // coincident estimates or a critical point: nudge and keep going
                z[i] = zi + Complex64::new(1e-8 * radius, 1e-8 * radius);
                max_step = f64::INFINITY;
            }
        }
        if max_step <= stop {
            return true;
        }
    }
    false
}

fn initial_guesses(degree: usize, radius: f64) -> Vec<Complex64> {
    (0..degree)
        .map(|j| {
            let theta = std::f64::consts::TAU * j as f64 / degree as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect()
}

/// All roots of a monic complex polynomial (coefficients low to high, leading 1),
/// by Aberth-Ehrlich iteration with a Durand-Kerner fallback.
pub fn complex_roots(c: &[Complex64]) -> Vec<Complex64> {
    let degree = c.len() - 1;
    let radius = 1.0 + c[..degree].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut z = initial_guesses(degree, radius);
    if !iterate(c, &mut z, radius, Iteration::Aberth) {
        iterate(c, &mut z, radius, Iteration::DurandKerner);
    }
    z
}

/// All `degree` roots of `p` (with multiplicity) as algebra elements in its slice.
/// Every root satisfies `||p(alpha)|| <= 1e-8 max(1, max ||xi_i||)`.
pub fn roots_complex_poly(p: &ComplexPolynomial) -> Result<Vec<Element>> {
    let c = p.complex_coeffs();
    let bound = ROOT_RESIDUAL_TOL * p.coeff_scale();
    let check = |z: &[Complex64]| -> Result<(Vec<Element>, f64)> {
        let roots: Vec<Element> = z.iter().map(|r| p.slice.embed(r.re, r.im)).collect();
        let mut worst = 0.0f64;
        for r in &roots {
            worst = worst.max(eval_complex_poly(p, r)?.norm());
        }
        Ok((roots, worst))
    };
    let z = complex_roots(&c);
    let (roots, worst) = check(&z)?;
    if worst <= bound {
        return Ok(roots);
    }
    // Retry from scratch with the other scheme before giving up.
    let degree = p.degree();
    let radius = 1.0 + c[..degree].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut z2 = initial_guesses(degree, radius);
    iterate(&c, &mut z2, radius, Iteration::DurandKerner);
    let (roots2, worst2) = check(&z2)?;
    if worst2 <= bound {
        Ok(roots2)
    } else {
        Err(AlgebraError::NoConvergence {
            worst_residual: worst.min(worst2),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slice(level: u32, i: usize) -> ComplexSlice {
        ComplexSlice::basis(level, i).unwrap()
    }

    #[test]
    fn eval_examples() {
        let s = slice(3, 3);
        let a = s.direction().clone();
        let p = ComplexPolynomial::monic(s, vec![(1.0, 0.0), (0.0, 0.0)]).unwrap();
        assert!(eval_complex_poly(&p, &a).unwrap().norm() < 1e-15);
        assert_eq!(
            eval_complex_poly(&p, &Element::real(3, 2.0)).unwrap(),
            Element::real(3, 5.0)
        );
        let q = ComplexPolynomial::monic(slice(2, 1), vec![(0.0, -1.0)]).unwrap();
        assert_eq!(
            eval_complex_poly(&q, &Element::basis(2, 1)).unwrap(),
            Element::zero(2)
        );
        assert_eq!(
            eval_complex_poly(&p, &Element::basis(3, 4)),
            Err(AlgebraError::OffSlice)
        );
        assert!(p.eval_horner(&Element::basis(3, 4)).is_ok());
    }

    #[test]
    fn roots_of_x_squared_plus_one() {
        let s = slice(3, 6);
        let a = s.direction().clone();
        let p = ComplexPolynomial::monic(s, vec![(1.0, 0.0), (0.0, 0.0)]).unwrap();
        let roots = roots_complex_poly(&p).unwrap();
        assert_eq!(roots.len(), 2);
        let near = |t: &Element| roots.iter().any(|r| r.distance(t) < 1e-10);
        assert!(near(&a) && near(&-&a));
    }

    #[test]
    fn double_root() {
        let p = ComplexPolynomial::monic(slice(2, 1), vec![(1.0, 0.0), (-2.0, 0.0)]).unwrap();
        let roots = roots_complex_poly(&p).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert!(r.distance(&Element::one(2)) < 1e-6);
            assert!(eval_complex_poly(&p, r).unwrap().norm() <= 1e-8);
        }
    }

    #[test]
    fn cube_roots_of_direction() {
        let s = slice(4, 9);
        let a = s.direction().clone();
        // x^3 - a
        let p = ComplexPolynomial::monic(s, vec![(0.0, -1.0), (0.0, 0.0), (0.0, 0.0)]).unwrap();
        let roots = roots_complex_poly(&p).unwrap();
        assert_eq!(roots.len(), 3);
        for r in &roots {
            assert!(r.powi(3).unwrap().distance(&a) <= 1e-8);
        }
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(roots[i].distance(&roots[j]) > 0.5);
            }
        }
    }

    #[test]
    fn normalization_and_fixture() {
        let s = slice(2, 2);
        let p = ComplexPolynomial::from_full(s.clone(), &[(2.0, 0.0), (0.0, 2.0)]).unwrap();
        assert_eq!(p.coeffs(), &[(0.0, -1.0)]);
        assert!(ComplexPolynomial::from_full(s.clone(), &[(1.0, 0.0), (0.0, 0.0)]).is_err());
        assert!(ComplexPolynomial::monic(s, vec![]).is_err());
        let json = r#"{"level":2,"direction":[0,1,0,0],"coeffs":[[1,0],[0,0]],"degree":2}"#;
        let f: PolynomialFixture = serde_json::from_str(json).unwrap();
        let p = ComplexPolynomial::from_fixture(&f).unwrap();
        assert_eq!(p.degree(), 2);
        let bad = r#"{"level":2,"direction":[0,1,0,0],"coeffs":[[1,0]],"degree":2}"#;
        let f: PolynomialFixture = serde_json::from_str(bad).unwrap();
        assert!(matches!(
            ComplexPolynomial::from_fixture(&f),
            Err(AlgebraError::InvalidFixture(_))
        ));
    }

    #[test]
    fn from_roots_round_trip() {
        let s = slice(3, 1);
        let want = [(1.0, 2.0), (-0.5, 0.0), (0.25, -1.5)];
        let p = ComplexPolynomial::from_roots(s, &want).unwrap();
        let got = roots_complex_poly(&p).unwrap();
        for &(re, im) in &want {
            let target = p.slice().embed(re, im);
            assert!(got.iter().any(|r| r.distance(&target) < 1e-10));
        }
    }
}
