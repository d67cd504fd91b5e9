use serde::Serialize;

use crate::element::Element;
use crate::error::{AlgebraError, Result};

/// The plane `Span{e0, a}` for a unit pure imaginary `a`, identified with `C`
/// through `u + i v <-> u e0 + v a`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexSlice {
    direction: Element,
}

impl ComplexSlice {
    /// Accepts `direction` when it is pure and of norm 1 within `1e-12`.
    pub fn new(direction: Element) -> Result<Self> {
        if direction.level() == 0
            || direction.real_part().abs() > 1e-12
            || (direction.norm() - 1.0).abs() > 1e-12
        {
            return Err(AlgebraError::InvalidDirection);
        }
        Ok(Self { direction })
    }

    /// Normalizes the imaginary part of `direction` onto the unit sphere.
    pub fn normalized(direction: &Element) -> Result<Self> {
        let a = direction.imag_part();
        if a.is_zero() {
            return Err(AlgebraError::InvalidDirection);
        }
        Self::new(a.scale(1.0 / a.norm()))
    }

    /// Slice through the basis vector `e_index`, `index >= 1`.
    pub fn basis(level: u32, index: usize) -> Result<Self> {
        if index == 0 || index >= 1usize << level {
            return Err(AlgebraError::InvalidDirection);
        }
        Self::new(Element::basis(level, index))
    }

    pub fn level(&self) -> u32 {
        self.direction.level()
    }

    pub fn direction(&self) -> &Element {
        &self.direction
    }

    /// `u e0 + v a`.
    pub fn embed(&self, u: f64, v: f64) -> Element {
        let mut x = self.direction.scale(v);
        x.coeffs_mut()[0] += u;
        x
    }

    /// Coordinates `(<x, e0>, <x, a>)`; fails when `x` sits more than `1e-9 ||x||`
    /// off the plane.
    pub fn project(&self, x: &Element) -> Result<(f64, f64)> {
        let (u, v) = self.coordinates(x)?;
        let residual = x.distance(&self.embed(u, v));
        if residual > 1e-9 * x.norm() {
            return Err(AlgebraError::NotInSlice { residual });
        }
        Ok((u, v))
    }

    /// Orthogonal-projection coordinates without the membership check.
    pub fn coordinates(&self, x: &Element) -> Result<(f64, f64)> {
        Ok((x.real_part(), x.try_inner(&self.direction)?))
    }
}
