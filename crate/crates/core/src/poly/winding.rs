use std::f64::consts::{PI, TAU};

use super::slice::ComplexSlice;
use crate::error::{AlgebraError, Result};

const MIN_LOOP_SAMPLES: usize = 8;
const MIN_POWER_SAMPLES: usize = 64;
const SNAP_TOL: f64 = 0.05;

/// Signed turns of a closed sampled loop around the origin. The last sample must
/// repeat the first within `1e-9`.
pub fn winding_number(samples: &[(f64, f64)]) -> Result<i64> {
    Ok(winding_value(samples)?.round() as i64)
}

/// Unrounded winding (total signed angle over `2 pi`), after the same checks as
/// [`winding_number`].
pub fn winding_value(samples: &[(f64, f64)]) -> Result<f64> {
    if samples.len() < MIN_LOOP_SAMPLES {
        return Err(AlgebraError::TooFewSamples {
            needed: MIN_LOOP_SAMPLES,
            got: samples.len(),
        });
    }
    let (first, last) = (samples[0], samples[samples.len() - 1]);
    if (first.0 - last.0).hypot(first.1 - last.1) > 1e-9 {
        return Err(AlgebraError::OpenCurve);
    }
    if samples.iter().any(|&(u, v)| u.hypot(v) <= 1e-9) {
        return Err(AlgebraError::OriginOnPath);
    }
    let mut total = 0.0;
    for w in samples.windows(2) {
        let ((u0, v0), (u1, v1)) = (w[0], w[1]);
        let step = (u0 * v1 - v0 * u1).atan2(u0 * u1 + v0 * v1);
        if step.abs() >= PI - 1e-9 {
            // the step direction is undecidable: the loop is undersampled
            return Err(AlgebraError::AmbiguousWinding { value: total / TAU });
        }
        total += step;
    }
    let value = total / TAU;
    if (value - value.round()).abs() > SNAP_TOL {
        return Err(AlgebraError::AmbiguousWinding { value });
    }
    Ok(value)
}

/// Winding of `theta -> (e^(i theta))^k` computed with full algebra arithmetic on
/// the unit circle of `slice` and projected back into the slice.
pub fn power_map_winding(k: i32, slice: &ComplexSlice, samples: usize) -> Result<i64> {
    if samples < MIN_POWER_SAMPLES {
        return Err(AlgebraError::TooFewSamples {
            needed: MIN_POWER_SAMPLES,
            got: samples,
        });
    }
    let mut image = Vec::with_capacity(samples + 1);
    for j in 0..=samples {
        let theta = TAU * j as f64 / samples as f64;
        let x = slice.embed(theta.cos(), theta.sin());
        image.push(slice.project(&x.powi(k)?)?);
    }
    winding_number(&image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::Element;

    fn circle(n: usize, turns: f64) -> Vec<(f64, f64)> {
        (0..=n)
            .map(|j| {
                let t = turns * TAU * j as f64 / n as f64;
                (t.cos(), t.sin())
            })
            .collect()
    }

    #[test]
    fn loop_examples() {
        assert_eq!(winding_number(&circle(256, 1.0)).unwrap(), 1);
        assert_eq!(winding_number(&circle(256, -2.0)).unwrap(), -2);
        assert_eq!(winding_number(&vec![(1.0, 0.0); 16]).unwrap(), 0);
        let cubed: Vec<(f64, f64)> = circle(256, 1.0)
            .into_iter()
            .map(|(u, v)| {
                let z = num_complex::Complex64::new(u, v).powi(3);
                (z.re, z.im)
            })
            .collect();
        assert_eq!(winding_number(&cubed).unwrap(), 3);
    }

    #[test]
    fn loop_errors() {
        assert!(matches!(
            winding_number(&circle(4, 1.0)),
            Err(AlgebraError::TooFewSamples { .. })
        ));
        assert_eq!(
            winding_number(&circle(64, 0.5)),
            Err(AlgebraError::OpenCurve)
        );
        let mut through = circle(64, 1.0);
        through[10] = (0.0, 0.0);
        assert_eq!(winding_number(&through), Err(AlgebraError::OriginOnPath));
        // two samples per turn cannot resolve direction
        assert!(matches!(
            winding_number(&circle(8, 4.0)),
            Err(AlgebraError::AmbiguousWinding { .. })
        ));
    }

    #[test]
    fn power_map_examples() {
        let s2 = ComplexSlice::basis(2, 1).unwrap();
        assert_eq!(power_map_winding(3, &s2, 1024).unwrap(), 3);
        let s3 = ComplexSlice::basis(3, 5).unwrap();
        assert_eq!(power_map_winding(-2, &s3, 1024).unwrap(), -2);
        let d = Element::new(4, (0..16).map(|i| f64::from(i % 3)).collect()).unwrap();
        let s4 = ComplexSlice::normalized(&d).unwrap();
        assert_eq!(power_map_winding(1, &s4, 64).unwrap(), 1);
        assert_eq!(power_map_winding(0, &s4, 64).unwrap(), 0);
        assert!(power_map_winding(2, &s4, 32).is_err());
    }
}
