//! The exponential map on `A_n`, its polar inverse, and principal k-roots.
//!
//! Every element `x = r e0 + a` lives in the complex plane `Span{e0, a}`, so `exp`
//! reduces to the real exponential times a rotation in that plane. The inverse maps
//! below follow the polar decomposition `x = ||x|| (cos t e0 + sin t u)` with
//! `t` in `[0, pi]` and `u` a unit pure imaginary direction.

use serde::Serialize;

use crate::element::Element;
use crate::error::{AlgebraError, Result};

/// Below this norm `sin(t)/t` is evaluated by its Taylor polynomial.
const SMALL_ANGLE: f64 = 1e-4;

/// Relative threshold under which the imaginary part of an element counts as absent.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// Polar decomposition of a nonzero element.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolarForm {
    pub magnitude: f64,
    /// Angle in `[0, pi]`.
    pub angle: f64,
    /// Unit pure direction, or zero when `degenerate`.
    pub direction: Element,
    /// Set for real inputs, where the angle is 0 or pi and no direction exists.
    pub degenerate: bool,
}

impl PolarForm {
    /// `magnitude (cos(angle) e0 + sin(angle) direction)`.
    pub fn reconstruct(&self) -> Element {
        let level = self.direction.level();
        let (s, c) = self.angle.sin_cos();
        &Element::real(level, self.magnitude * c) + &self.direction.scale(self.magnitude * s)
    }
}

/// `sin(t)/t`, stable near zero.
fn sinc(t: f64) -> f64 {
    if t < SMALL_ANGLE {
        let t2 = t * t;
        1.0 - t2 / 6.0 + t2 * t2 / 120.0
    } else {
        t.sin() / t
    }
}

fn check_pure(a: &Element) -> Result<()> {
    let real = a.real_part();
    if real.abs() > 1e-12 * a.norm().max(1.0) {
        Err(AlgebraError::NotPure { real })
    } else {
        Ok(())
    }
}

/// `exp(a) = cos(||a||) e0 + sin(||a||) a/||a||` for pure imaginary `a`.
pub fn exp_pure(a: &Element) -> Result<Element> {
    check_pure(a)?;
    Ok(exp_of_imag(&a.imag_part()))
}

fn exp_of_imag(a: &Element) -> Element {
    let t = a.norm();
    let mut out = a.scale(sinc(t));
    out.coeffs_mut()[0] = t.cos();
    out
}

/// `exp(r e0 + a) = e^r exp(a)`.
pub fn exp(x: &Element) -> Result<Element> {
    let (r, a) = x.split();
    let scale = r.exp();
    if !scale.is_finite() {
        return Err(AlgebraError::Overflow);
    }
    Ok(exp_of_imag(&a).scale(scale))
}

/// `sigma_k(x) = k x`.
pub fn scale_map(x: &Element, k: i32) -> Element {
    x.scale(f64::from(k))
}

pub fn to_polar(x: &Element) -> Result<PolarForm> {
    if x.is_zero() {
        return Err(AlgebraError::ZeroElement);
    }
    let magnitude = x.norm();
    let (s, b) = x.scale(1.0 / magnitude).split();
    let b_norm = b.norm();
    if b_norm <= DEGENERACY_THRESHOLD {
        return Ok(PolarForm {
            magnitude,
            angle: if s > 0.0 { 0.0 } else { std::f64::consts::PI },
            direction: Element::zero(x.level()),
            degenerate: true,
        });
    }
    Ok(PolarForm {
        magnitude,
        angle: b_norm.atan2(s),
        direction: b.scale(1.0 / b_norm),
        degenerate: false,
    })
}

fn check_fallback(dir: &Element, level: u32) -> Result<()> {
    if dir.level() != level {
        return Err(AlgebraError::LevelMismatch {
            left: level,
            right: dir.level(),
        });
    }
    if dir.real_part().abs() > 1e-12 || (dir.norm() - 1.0).abs() > 1e-9 {
        return Err(AlgebraError::InvalidDirection);
    }
    Ok(())
}

/// Polar form whose direction is filled in from `fallback_dir` for negative reals.
fn resolved_polar(x: &Element, fallback_dir: Option<&Element>) -> Result<(f64, f64, Element)> {
    let polar = to_polar(x)?;
    if !polar.degenerate || polar.angle == 0.0 {
        return Ok((polar.magnitude, polar.angle, polar.direction));
    }
    let dir = fallback_dir.ok_or(AlgebraError::NoPrincipalDirection)?;
    check_fallback(dir, x.level())?;
    Ok((polar.magnitude, polar.angle, dir.clone()))
}

/// Principal logarithm `ln||x|| e0 + angle direction`, inverting [`exp`].
///
/// Negative real inputs need `fallback_dir`, a unit pure element used as the
/// rotation axis for the angle pi.
pub fn log_principal(x: &Element, fallback_dir: Option<&Element>) -> Result<Element> {
    let (magnitude, angle, dir) = resolved_polar(x, fallback_dir)?;
    let mut out = dir.scale(angle);
    out.coeffs_mut()[0] = magnitude.ln();
    Ok(out)
}

/// Principal k-root `||x||^(1/k) exp((angle/k) direction)`.
pub fn k_root(x: &Element, k: u32, fallback_dir: Option<&Element>) -> Result<Element> {
    if k == 0 {
        return Err(AlgebraError::InvalidArgument("k must be positive".into()));
    }
    let (magnitude, angle, dir) = resolved_polar(x, fallback_dir)?;
    let k = f64::from(k);
    Ok(exp_of_imag(&dir.scale(angle / k)).scale(magnitude.powf(1.0 / k)))
}

/// The k-root read literally as `||x||^(1/k) exp(a/k)` with `a` the raw imaginary
/// part of `x`. Its k-th power recovers `x` only when `||a||` equals the polar
/// angle; kept for comparison with [`k_root`].
pub fn k_root_literal(x: &Element, k: u32) -> Result<Element> {
    if k == 0 {
        return Err(AlgebraError::InvalidArgument("k must be positive".into()));
    }
    if x.is_zero() {
        return Err(AlgebraError::ZeroElement);
    }
    let k = f64::from(k);
    Ok(exp_of_imag(&x.imag_part().scale(1.0 / k)).scale(x.norm().powf(1.0 / k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{trial_rng, unit_pure};
    use std::f64::consts::{FRAC_PI_2, LN_2, PI};

    fn close(a: &Element, b: &Element, tol: f64) -> bool {
        a.distance(b) <= tol
    }

    #[test]
    fn exp_pure_anchors() {
        let mut rng = trial_rng(3, 0);
        for level in 1..=5 {
            let a = unit_pure(&mut rng, level);
            assert!(close(&exp_pure(&a.scale(FRAC_PI_2)).unwrap(), &a, 1e-12));
            assert!(close(
                &exp_pure(&a.scale(PI)).unwrap(),
                &Element::real(level, -1.0),
                1e-12
            ));
            assert!((exp_pure(&a.scale(0.7)).unwrap().norm() - 1.0).abs() < 1e-12);
        }
        assert_eq!(exp_pure(&Element::zero(3)).unwrap(), Element::one(3));
        assert!(matches!(
            exp_pure(&Element::one(2)),
            Err(AlgebraError::NotPure { .. })
        ));
    }

    #[test]
    fn exp_pure_small_angle_branch() {
        let tiny = Element::basis(2, 1).scale(1e-12);
        let e = exp_pure(&tiny).unwrap();
        assert!((e.coeffs()[0] - 1.0).abs() <= 1e-20);
        assert!((e.coeffs()[1] - 1e-12).abs() <= 1e-20);
        // continuity across the branch switch
        let below = exp_pure(&Element::basis(1, 1).scale(SMALL_ANGLE * (1.0 - 1e-9))).unwrap();
        let above = exp_pure(&Element::basis(1, 1).scale(SMALL_ANGLE * (1.0 + 1e-9))).unwrap();
        assert!(close(&below, &above, 1e-12));
    }

    #[test]
    fn exp_anchors() {
        assert_eq!(exp(&Element::zero(3)).unwrap(), Element::one(3));
        let x = &Element::real(2, LN_2) + &Element::basis(2, 1).scale(FRAC_PI_2);
        assert!(close(
            &exp(&x).unwrap(),
            &Element::basis(2, 1).scale(2.0),
            1e-15
        ));
        for r in [-1.0f64, 0.0, 1.0] {
            assert!(close(
                &exp(&Element::real(3, r)).unwrap(),
                &Element::real(3, r.exp()),
                1e-15
            ));
        }
        assert_eq!(exp(&Element::real(1, 1000.0)), Err(AlgebraError::Overflow));
    }

    #[test]
    fn polar_examples() {
        let p = to_polar(&Element::real(2, 2.0)).unwrap();
        assert_eq!((p.magnitude, p.angle, p.degenerate), (2.0, 0.0, true));
        let p = to_polar(&Element::basis(2, 1)).unwrap();
        assert_eq!((p.magnitude, p.angle), (1.0, FRAC_PI_2));
        assert_eq!(p.direction, Element::basis(2, 1));
        let p = to_polar(&Element::real(2, -3.0)).unwrap();
        assert_eq!((p.magnitude, p.angle, p.degenerate), (3.0, PI, true));
        assert!(p.direction.norm() == 0.0);
        assert_eq!(to_polar(&Element::zero(1)), Err(AlgebraError::ZeroElement));
    }

    #[test]
    fn polar_reconstructs() {
        let x = Element::new(3, vec![0.4, -1.0, 0.2, 0.0, 2.0, -0.5, 0.3, 1.1]).unwrap();
        let p = to_polar(&x).unwrap();
        assert!(close(&p.reconstruct(), &x, 1e-12 * x.norm()));
        assert!(p.direction.real_part() == 0.0);
    }

    #[test]
    fn log_examples() {
        assert_eq!(
            log_principal(&Element::one(2), None).unwrap(),
            Element::zero(2)
        );
        let l = log_principal(&Element::basis(2, 1).scale(2.0), None).unwrap();
        let expect = &Element::real(2, LN_2) + &Element::basis(2, 1).scale(FRAC_PI_2);
        assert!(close(&l, &expect, 1e-15));
        assert_eq!(
            log_principal(&Element::real(2, -1.0), None),
            Err(AlgebraError::NoPrincipalDirection)
        );
        let l = log_principal(&Element::real(2, -1.0), Some(&Element::basis(2, 3))).unwrap();
        assert!(close(&l, &Element::basis(2, 3).scale(PI), 1e-15));
        assert_eq!(
            log_principal(&Element::real(2, -1.0), Some(&Element::one(2))),
            Err(AlgebraError::InvalidDirection)
        );
    }

    #[test]
    fn k_root_examples() {
        assert!(close(
            &k_root(&Element::real(2, 4.0), 2, None).unwrap(),
            &Element::real(2, 2.0),
            1e-15
        ));
        let e1 = Element::basis(3, 1);
        let r = k_root(&Element::real(3, -1.0), 2, Some(&e1)).unwrap();
        assert!(close(&r, &e1, 1e-15));
        assert!(close(&(&r * &r), &Element::real(3, -1.0), 1e-15));
        let mut rng = trial_rng(9, 0);
        for level in 1..=4 {
            let a = unit_pure(&mut rng, level);
            for k in 1..=6 {
                let root = k_root(&a, k, None).unwrap();
                assert!(close(&root.powi(k as i32).unwrap(), &a, 1e-9));
            }
        }
        assert!(k_root(&Element::one(1), 0, None).is_err());
    }

    #[test]
    fn literal_reading_differs_from_polar() {
        // x = 2 e1: polar angle pi/2 but ||a|| = 2
        let x = Element::basis(2, 1).scale(2.0);
        let literal = k_root_literal(&x, 2).unwrap();
        assert!((&literal * &literal).distance(&x) > 0.1);
        let polar = k_root(&x, 2, None).unwrap();
        assert!((&polar * &polar).distance(&x) < 1e-12);
    }

    #[test]
    fn scale_map_examples() {
        assert_eq!(
            scale_map(&Element::basis(2, 1), 3),
            Element::basis(2, 1).scale(3.0)
        );
        assert_eq!(scale_map(&Element::basis(2, 1), 0), Element::zero(2));
        let x = &Element::one(2) + &Element::basis(2, 2);
        assert_eq!(scale_map(&x, -1), -&x);
    }
}
