//! Elements of the Cayley-Dickson algebras `A_n = R^(2^n)` and their ring arithmetic.
//!
//! Coefficient `i` holds the coordinate along the basis vector `e_i`; index 0 is the
//! real part. A level-`n` element splits into halves `[0, 2^(n-1))` and
//! `[2^(n-1), 2^n)`, which are the two `A_(n-1)` components of the doubling.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};

/// Highest level accepted by [`Element::new`].
pub const DEFAULT_MAX_LEVEL: u32 = 8;

/// Absolute zero threshold used by inversion and division.
pub const ZERO_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawElement")]
pub struct Element {
    level: u32,
    coeffs: Vec<f64>,
}

#[derive(Deserialize)]
struct RawElement {
    level: u32,
    coeffs: Vec<f64>,
}

impl TryFrom<RawElement> for Element {
    type Error = AlgebraError;

    fn try_from(raw: RawElement) -> Result<Self> {
        Element::new(raw.level, raw.coeffs)
    }
}

/// Second component accepted by [`Element::embed_up`].
#[derive(Clone, Debug)]
pub enum SecondBlock<'a> {
    Real(f64),
    Element(&'a Element),
}

impl From<f64> for SecondBlock<'_> {
    fn from(r: f64) -> Self {
        SecondBlock::Real(r)
    }
}

impl<'a> From<&'a Element> for SecondBlock<'a> {
    fn from(x: &'a Element) -> Self {
        SecondBlock::Element(x)
    }
}

impl Element {
    /// Builds an element at `level`, checking length and finiteness.
    pub fn new(level: u32, coeffs: Vec<f64>) -> Result<Self> {
        Self::with_max_level(level, coeffs, DEFAULT_MAX_LEVEL)
    }

    /// Same as [`Element::new`] with an explicit level cap.
    pub fn with_max_level(level: u32, coeffs: Vec<f64>, max_level: u32) -> Result<Self> {
        if level > max_level {
            return Err(AlgebraError::LevelTooLarge {
                level,
                max: max_level,
            });
        }
        let expected = 1usize << level;
        if coeffs.len() != expected {
            return Err(AlgebraError::LengthMismatch {
                expected,
                got: coeffs.len(),
            });
        }
        if let Some(index) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(AlgebraError::NonFinite { index });
        }
        Ok(Self { level, coeffs })
    }

    // Internal constructor; callers guarantee the length.
    pub(crate) fn from_vec(level: u32, coeffs: Vec<f64>) -> Self {
        debug_assert_eq!(coeffs.len(), 1usize << level);
        Self { level, coeffs }
    }

    pub fn zero(level: u32) -> Self {
        Self::from_vec(level, vec![0.0; 1 << level])
    }

    /// The unit `e0`.
    pub fn one(level: u32) -> Self {
        Self::real(level, 1.0)
    }

    pub fn real(level: u32, r: f64) -> Self {
        let mut x = Self::zero(level);
        x.coeffs[0] = r;
        x
    }

    /// Canonical basis vector `e_i`.
    ///
    /// # Panics
    /// If `i >= 2^level`.
    pub fn basis(level: u32, i: usize) -> Self {
        let mut x = Self::zero(level);
        x.coeffs[i] = 1.0;
        x
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Number of real coordinates, `2^level`.
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn real_part(&self) -> f64 {
        self.coeffs[0]
    }

    /// The element with its real coefficient zeroed.
    pub fn imag_part(&self) -> Element {
        let mut a = self.clone();
        a.coeffs[0] = 0.0;
        a
    }

    /// Canonical splitting `x = r e0 + a` with `a` pure imaginary.
    pub fn split(&self) -> (f64, Element) {
        (self.real_part(), self.imag_part())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// True when the norm is at or below the scale-aware zero threshold.
    pub fn is_zero(&self) -> bool {
        self.norm() <= ZERO_THRESHOLD * self.max_abs().max(1.0)
    }

    fn check_level(&self, other: &Element) -> Result<()> {
        if self.level != other.level {
            Err(AlgebraError::LevelMismatch {
                left: self.level,
                right: other.level,
            })
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Element) -> Result<Element> {
        self.check_level(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Element) -> Result<Element> {
        self.check_level(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn scale(&self, s: f64) -> Element {
        Self::from_vec(self.level, self.coeffs.iter().map(|c| c * s).collect())
    }

    fn zip_with(&self, other: &Element, f: impl Fn(f64, f64) -> f64) -> Element {
        Self::from_vec(
            self.level,
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    /// Doubling product `(a,b)(x,y) = (ax - conj(y) b, y a + b conj(x))`.
    pub fn try_mul(&self, other: &Element) -> Result<Element> {
        self.check_level(other)?;
        let mut out = vec![0.0; self.dim()];
        mul_into(&self.coeffs, &other.coeffs, &mut out);
        Ok(Self::from_vec(self.level, out))
    }

    /// Recursive conjugation `conj(x1, x2) = (conj(x1), -x2)`.
    pub fn conjugate(&self) -> Element {
        let mut out = self.coeffs.clone();
        conj_recursive(&mut out);
        Self::from_vec(self.level, out)
    }

    /// Euclidean inner product of coefficient vectors.
    pub fn try_inner(&self, other: &Element) -> Result<f64> {
        self.check_level(other)?;
        Ok(dot(&self.coeffs, &other.coeffs))
    }

    pub fn inner(&self, other: &Element) -> f64 {
        self.try_inner(other).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn norm_sq(&self) -> f64 {
        dot(&self.coeffs, &self.coeffs)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `||x||^-2 conj(x)`.
    pub fn inverse(&self) -> Result<Element> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroElement);
        }
        Ok(self.conjugate().scale(1.0 / self.norm_sq()))
    }

    /// Integer power in the reference order `x * x^(k-1)`; negative powers go through
    /// the inverse and `x^0 = e0` for nonzero `x`.
    pub fn powi(&self, k: i32) -> Result<Element> {
        match k {
            0 => {
                if self.is_zero() {
                    Err(AlgebraError::ZeroElement)
                } else {
                    Ok(Element::one(self.level))
                }
            }
            k if k < 0 => self.inverse()?.powi(-k),
            k => {
                let mut acc = self.clone();
                for _ in 1..k {
                    acc = self * &acc;
                }
                Ok(acc)
            }
        }
    }

    /// Pair constructor `A_(n+1) = A_n x A_n`; a real second block `r` means `r e0`.
    pub fn embed_up<'a>(&self, second: impl Into<SecondBlock<'a>>) -> Result<Element> {
        let mut coeffs = Vec::with_capacity(2 * self.dim());
        coeffs.extend_from_slice(&self.coeffs);
        match second.into() {
            SecondBlock::Real(r) => {
                coeffs.push(r);
                coeffs.extend(std::iter::repeat_n(0.0, self.dim() - 1));
            }
            SecondBlock::Element(y) => {
                self.check_level(y)?;
                coeffs.extend_from_slice(&y.coeffs);
            }
        }
        Ok(Self::from_vec(self.level + 1, coeffs))
    }

    /// Euclidean distance between two elements of the same level.
    pub fn distance(&self, other: &Element) -> f64 {
        (self - other).norm()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn conj_recursive(x: &mut [f64]) {
    if x.len() == 1 {
        return;
    }
    let half = x.len() / 2;
    let (lo, hi) = x.split_at_mut(half);
    conj_recursive(lo);
    hi.iter_mut().for_each(|c| *c = -*c);
}

fn conj_copy(x: &[f64]) -> Vec<f64> {
    let mut out = x.to_vec();
    conj_recursive(&mut out);
    out
}

/// `out = x * y` for coefficient slices of equal power-of-two length.
pub(crate) fn mul_into(x: &[f64], y: &[f64], out: &mut [f64]) {
    let len = x.len();
    if len == 1 {
        out[0] = x[0] * y[0];
        return;
    }
    let half = len / 2;
    let (a, b) = x.split_at(half);
    let (c, d) = y.split_at(half);
    let d_conj = conj_copy(d);
    let c_conj = conj_copy(c);
    let mut t1 = vec![0.0; half];
    let mut t2 = vec![0.0; half];
    let (lo, hi) = out.split_at_mut(half);

    // first = a c - conj(d) b
    mul_into(a, c, lo);
    mul_into(&d_conj, b, &mut t1);
    lo.iter_mut().zip(&t1).for_each(|(o, t)| *o -= t);

    // second = d a + b conj(c)
    mul_into(d, a, hi);
    mul_into(b, &c_conj, &mut t2);
    hi.iter_mut().zip(&t2).for_each(|(o, t)| *o += t);
}

fn level_panic(e: AlgebraError) -> ! {
    panic!("{e}")
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.try_add(rhs).unwrap_or_else(|e| level_panic(e))
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.try_sub(rhs).unwrap_or_else(|e| level_panic(e))
    }
}

/// Panics on a level mismatch; use [`Element::try_mul`] for a checked product.
impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        self.try_mul(rhs).unwrap_or_else(|e| level_panic(e))
    }
}

impl Mul<f64> for &Element {
    type Output = Element;
    fn mul(self, s: f64) -> Element {
        self.scale(s)
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(-1.0)
    }
}

impl Add for Element {
    type Output = Element;
    fn add(self, rhs: Element) -> Element {
        &self + &rhs
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl Mul for Element {
    type Output = Element;
    fn mul(self, rhs: Element) -> Element {
        &self * &rhs
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if first {
                write!(f, "{c}e{i}")?;
                first = false;
            } else if c < 0.0 {
                write!(f, " - {}e{i}", -c)?;
            } else {
                write!(f, " + {c}e{i}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(level: u32, c: &[f64]) -> Element {
        Element::new(level, c.to_vec()).unwrap()
    }

    #[test]
    fn make_element_checks() {
        assert_eq!(el(0, &[3.0]).coeffs(), &[3.0]);
        assert_eq!(el(2, &[0.0, 1.0, 0.0, 0.0]), Element::basis(2, 1));
        assert_eq!(
            Element::new(1, vec![1.0, 2.0, 3.0]),
            Err(AlgebraError::LengthMismatch {
                expected: 2,
                got: 3
            })
        );
        assert_eq!(
            Element::new(1, vec![1.0, f64::NAN]),
            Err(AlgebraError::NonFinite { index: 1 })
        );
        assert!(matches!(
            Element::new(9, vec![0.0; 512]),
            Err(AlgebraError::LevelTooLarge { .. })
        ));
        assert!(Element::with_max_level(9, vec![0.0; 512], 10).is_ok());
    }

    #[test]
    fn linear_ops() {
        let s = &Element::basis(2, 1) + &Element::basis(2, 2);
        assert_eq!(s.coeffs(), &[0.0, 1.0, 1.0, 0.0]);
        let z = &Element::real(2, 2.0) - &Element::real(2, 2.0);
        assert_eq!(z, Element::zero(2));
        assert_eq!(
            Element::basis(2, 1).scale(2.0).scale(0.5),
            Element::basis(2, 1)
        );
        assert!(matches!(
            Element::one(1).try_add(&Element::one(2)),
            Err(AlgebraError::LevelMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn doubling_product_anchors() {
        let e1 = Element::basis(2, 1);
        let e2 = Element::basis(2, 2);
        assert_eq!(&e1 * &e2, Element::basis(2, 3));
        for n in 1..=5 {
            let e = Element::basis(n, 1);
            assert_eq!(&e * &e, Element::real(n, -1.0));
        }
        let x = el(3, &[0.3, -1.0, 2.0, 0.5, -0.25, 0.0, 1.5, 4.0]);
        assert_eq!(&Element::one(3) * &x, x);
        assert_eq!(&x * &Element::one(3), x);
        assert!(Element::one(2).try_mul(&Element::one(3)).is_err());
    }

    #[test]
    fn quaternion_table_matches_hamilton() {
        // i j = k, j k = i, k i = j and anticommutation
        let q = |i| Element::basis(2, i);
        assert_eq!(&q(2) * &q(3), q(1));
        assert_eq!(&q(3) * &q(1), q(2));
        assert_eq!(&q(2) * &q(1), -&q(3));
    }

    #[test]
    fn conjugate_both_characterizations() {
        assert_eq!(Element::one(3).conjugate(), Element::one(3));
        assert_eq!(Element::basis(3, 5).conjugate(), -&Element::basis(3, 5));
        assert_eq!(el(1, &[2.0, 3.0]).conjugate(), el(1, &[2.0, -3.0]));
        let x = el(3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
        let closed: Vec<f64> = x
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, &c)| if i == 0 { c } else { -c })
            .collect();
        assert_eq!(x.conjugate().coeffs(), closed.as_slice());
    }

    #[test]
    fn inner_and_norm() {
        assert_eq!(Element::basis(2, 1).inner(&Element::basis(2, 2)), 0.0);
        assert_eq!(Element::basis(2, 1).inner(&Element::basis(2, 1)), 1.0);
        assert_eq!(
            el(2, &[2.0, 0.0, 0.0, 1.0]).inner(&Element::basis(2, 3)),
            1.0
        );
        assert_eq!(
            (&Element::basis(2, 1) + &Element::basis(2, 2)).norm_sq(),
            2.0
        );
        assert_eq!(Element::zero(3).norm_sq(), 0.0);
        assert_eq!(Element::real(1, 3.0).norm_sq(), 9.0);
    }

    #[test]
    fn split_examples() {
        assert_eq!(el(1, &[2.0, 3.0]).split(), (2.0, el(1, &[0.0, 3.0])));
        assert_eq!(Element::one(2).split(), (1.0, Element::zero(2)));
        assert_eq!(Element::basis(3, 7).split(), (0.0, Element::basis(3, 7)));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            Element::real(2, 2.0).inverse().unwrap(),
            Element::real(2, 0.5)
        );
        assert_eq!(
            Element::basis(2, 1).inverse().unwrap(),
            -&Element::basis(2, 1)
        );
        assert_eq!(Element::zero(2).inverse(), Err(AlgebraError::ZeroElement));
        assert_eq!(
            Element::real(2, 1e-13).inverse(),
            Err(AlgebraError::ZeroElement)
        );
    }

    #[test]
    fn power_examples() {
        assert_eq!(
            Element::basis(2, 1).powi(3).unwrap(),
            -&Element::basis(2, 1)
        );
        let x = el(2, &[0.5, 1.0, -2.0, 0.1]);
        assert_eq!(x.powi(0).unwrap(), Element::one(2));
        assert_eq!(
            Element::real(1, 2.0).powi(-2).unwrap(),
            Element::real(1, 0.25)
        );
        assert_eq!(Element::zero(1).powi(0), Err(AlgebraError::ZeroElement));
        assert_eq!(Element::zero(1).powi(-1), Err(AlgebraError::ZeroElement));
        assert_eq!(Element::zero(1).powi(2).unwrap(), Element::zero(1));
    }

    #[test]
    fn embed_up_examples() {
        let e1 = Element::basis(1, 1);
        assert_eq!(e1.embed_up(0.0).unwrap(), Element::basis(2, 1));
        assert_eq!(
            Element::zero(1).embed_up(1.0).unwrap(),
            Element::basis(2, 2)
        );
        assert!(matches!(
            Element::one(2).embed_up(&e1),
            Err(AlgebraError::LevelMismatch { .. })
        ));
        let pair = Element::one(1).embed_up(&e1).unwrap();
        assert_eq!(pair.coeffs(), &[1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn embedded_square_hand_check() {
        // (x, r e0)^2 = (x^2 - r^2 e0, r (x + conj x)) with x = e1, r = 1
        let alpha = Element::basis(1, 1).embed_up(1.0).unwrap();
        let expected = Element::real(1, -2.0).embed_up(0.0).unwrap();
        assert_eq!(alpha.powi(2).unwrap(), expected);
    }

    #[test]
    fn json_format() {
        let x: Element = serde_json::from_str(r#"{"level":1,"coeffs":[1.5,-2]}"#).unwrap();
        assert_eq!(x, el(1, &[1.5, -2.0]));
        assert!(serde_json::from_str::<Element>(r#"{"level":2,"coeffs":[1,2,3]}"#).is_err());
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"level":1,"coeffs":[1.5,-2.0]}"#);
    }
}
