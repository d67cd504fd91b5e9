//! Structural probes: C-dependence, commutators and associators, centralizers,
//! zero divisors, and a randomized profile of which algebra laws hold at a level.

use rayon::prelude::*;
use serde::Serialize;

use crate::element::Element;
use crate::error::{AlgebraError, Result};
use crate::linalg::{left_mul_matrix, nullspace, right_mul_matrix, DEFAULT_RANK_TOL};
use crate::sampling::{trial_rng, uniform_element};

/// Default angular tolerance (radians) for C-dependence.
pub const DEFAULT_ANGULAR_TOL: f64 = 1e-8;

/// Relative residual at or below which a law counts as holding.
pub const LAW_PASS_TOL: f64 = 1e-9;
/// Relative residual above which a law counts as violated.
pub const LAW_FAIL_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DependenceReport {
    pub dependent: bool,
    /// Principal angle between the lines spanned by the imaginary parts, in `[0, pi/2]`.
    pub margin: f64,
}

/// Two elements are C-dependent when their imaginary parts are linearly dependent.
/// Elements with a vanishing imaginary part are dependent with everything.
pub fn is_c_dependent(x: &Element, y: &Element, angular_tol: f64) -> Result<DependenceReport> {
    x.try_inner(y)?;
    let a = x.imag_part();
    let b = y.imag_part();
    if a.is_zero() || b.is_zero() {
        return Ok(DependenceReport {
            dependent: true,
            margin: 0.0,
        });
    }
    let margin = principal_angle(&a, &b);
    Ok(DependenceReport {
        dependent: margin <= angular_tol,
        margin,
    })
}

/// Angle between the lines `R a` and `R b`.
pub fn principal_angle(a: &Element, b: &Element) -> f64 {
    let ua = a.scale(1.0 / a.norm());
    let ub = b.scale(1.0 / b.norm());
    let cos = ua.inner(&ub);
    let sin = (&ub - &ua.scale(cos)).norm();
    sin.atan2(cos.abs())
}

/// `[x, y] = xy - yx`.
pub fn commutator(x: &Element, y: &Element) -> Result<Element> {
    x.try_mul(y)?.try_sub(&y.try_mul(x)?)
}

/// `(x, y, z) = (xy)z - x(yz)`.
pub fn associator(x: &Element, y: &Element, z: &Element) -> Result<Element> {
    let left = x.try_mul(y)?.try_mul(z)?;
    let right = x.try_mul(&y.try_mul(z)?)?;
    left.try_sub(&right)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CentralizerReport {
    pub level: u32,
    pub element: Element,
    /// Dimension of `{b in Im(A_n) : ab = ba}`.
    pub centralizer_dim: usize,
    /// Dimension of the right annihilator `Ker L_a`.
    pub kernel_dim: usize,
    /// Whether `centralizer_dim = 1 + kernel_dim`.
    pub decomposition_ok: bool,
}

pub fn centralizer_report(a: &Element) -> Result<CentralizerReport> {
    let real = a.real_part();
    if real.abs() > 1e-12 * a.norm().max(1.0) {
        return Err(AlgebraError::NotPure { real });
    }
    if a.is_zero() || a.level() == 0 {
        return Err(AlgebraError::ZeroElement);
    }
    let left = left_mul_matrix(a);
    let commute = left.sub(&right_mul_matrix(a));
    let imaginary: Vec<usize> = (1..a.dim()).collect();
    let centralizer_dim = nullspace(&commute.select_columns(&imaginary), DEFAULT_RANK_TOL).len();
    let kernel_dim = nullspace(&left, DEFAULT_RANK_TOL).len();
    // a never lies in its own annihilator (a a = -||a||^2), so the sum is always direct.
    Ok(CentralizerReport {
        level: a.level(),
        element: a.clone(),
        centralizer_dim,
        kernel_dim,
        decomposition_ok: centralizer_dim == 1 + kernel_dim,
    })
}

/// `e_i e_j = sign * e_index` in `A_level`.
pub fn basis_product(level: u32, i: usize, j: usize) -> (f64, usize) {
    if level == 0 {
        return (1.0, 0);
    }
    let half = 1usize << (level - 1);
    let (p, q) = (i % half, j % half);
    let conj_sign = |idx: usize| if idx == 0 { 1.0 } else { -1.0 };
    match (i >= half, j >= half) {
        (false, false) => basis_product(level - 1, p, q),
        // (e_p, 0)(0, e_q) = (0, e_q e_p)
        (false, true) => {
            let (s, k) = basis_product(level - 1, q, p);
            (s, k + half)
        }
        // (0, e_p)(e_q, 0) = (0, e_p conj(e_q))
        (true, false) => {
            let (s, k) = basis_product(level - 1, p, q);
            (s * conj_sign(q), k + half)
        }
        // (0, e_p)(0, e_q) = (-conj(e_q) e_p, 0)
        (true, true) => {
            let (s, k) = basis_product(level - 1, q, p);
            (-s * conj_sign(q), k)
        }
    }
}

/// Two-term element `e_i + sign e_j` with `0 < i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TwoTerm {
    pub i: usize,
    pub j: usize,
    pub sign: i8,
}

impl TwoTerm {
    pub fn to_element(self, level: u32) -> Element {
        let mut x = Element::basis(level, self.i);
        x.coeffs_mut()[self.j] = f64::from(self.sign);
        x
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroDivisorPair {
    pub u: Element,
    pub v: Element,
    pub u_terms: TwoTerm,
    pub v_terms: TwoTerm,
    /// Norm of `u v`, computed with the full product.
    pub product_norm: f64,
}

fn two_terms(level: u32) -> impl Iterator<Item = TwoTerm> + Clone {
    let n = 1usize << level;
    (1..n).flat_map(move |i| {
        (i + 1..n).flat_map(move |j| {
            [1i8, -1]
                .into_iter()
                .map(move |sign| TwoTerm { i, j, sign })
        })
    })
}

fn products_cancel(level: u32, u: TwoTerm, v: TwoTerm) -> bool {
    let terms = [
        (1.0, u.i, v.i),
        (f64::from(v.sign), u.i, v.j),
        (f64::from(u.sign), u.j, v.i),
        (f64::from(u.sign * v.sign), u.j, v.j),
    ];
    let mut acc: Vec<(usize, f64)> = Vec::with_capacity(4);
    for (c, a, b) in terms {
        let (s, k) = basis_product(level, a, b);
        match acc.iter_mut().find(|(idx, _)| *idx == k) {
            Some(entry) => entry.1 += c * s,
            None => acc.push((k, c * s)),
        }
    }
    acc.iter().all(|(_, c)| *c == 0.0)
}

/// All zero-divisor pairs `(e_i + s e_j, e_k + t e_l)` over pure indices, in
/// lexicographic order of `(i, j, s, k, l, t)` with `+1` before `-1`.
pub fn zero_divisor_pairs(level: u32) -> impl Iterator<Item = ZeroDivisorPair> {
    let outer = two_terms(level);
    let inner = outer.clone();
    outer
        .flat_map(move |u| inner.clone().map(move |v| (u, v)))
        .filter(move |&(u, v)| products_cancel(level, u, v))
        .map(move |(u_terms, v_terms)| {
            let u = u_terms.to_element(level);
            let v = v_terms.to_element(level);
            let product_norm = (&u * &v).norm();
            ZeroDivisorPair {
                u,
                v,
                u_terms,
                v_terms,
                product_norm,
            }
        })
}

/// First two-term zero-divisor pair at `level`, or `None` (always for `level <= 3`).
pub fn find_zero_divisor_pair(level: u32) -> Option<ZeroDivisorPair> {
    zero_divisor_pairs(level).find(|p| p.product_norm <= 1e-12)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    Commutative,
    Associative,
    Alternative,
    Normed,
    Flexible,
    PowerAssociative,
}

impl Law {
    pub const ALL: [Law; 6] = [
        Law::Commutative,
        Law::Associative,
        Law::Alternative,
        Law::Normed,
        Law::Flexible,
        Law::PowerAssociative,
    ];

    /// Whether the law holds in `A_level` by the classical classification.
    pub fn holds_at(self, level: u32) -> bool {
        match self {
            Law::Commutative => level <= 1,
            Law::Associative => level <= 2,
            Law::Alternative | Law::Normed => level <= 3,
            Law::Flexible | Law::PowerAssociative => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Law::Commutative => "commutative",
            Law::Associative => "associative",
            Law::Alternative => "alternative",
            Law::Normed => "normed",
            Law::Flexible => "flexible",
            Law::PowerAssociative => "power_associative",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LawStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LawResult {
    pub law: Law,
    pub status: LawStatus,
    /// Largest relative residual over all trials.
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LawProfile {
    pub level: u32,
    pub trials: usize,
    pub seed: u64,
    pub laws: Vec<LawResult>,
}

impl LawProfile {
    pub fn get(&self, law: Law) -> &LawResult {
        self.laws
            .iter()
            .find(|r| r.law == law)
            .expect("all laws are profiled")
    }

    /// Whether every law's status agrees with [`Law::holds_at`].
    pub fn matches_classification(&self) -> bool {
        self.laws.iter().all(|r| {
            let expected = if r.law.holds_at(self.level) {
                LawStatus::Pass
            } else {
                LawStatus::Fail
            };
            r.status == expected
        })
    }
}

fn rel(residual: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        residual / scale
    } else {
        residual
    }
}

fn trial_residuals(x: &Element, y: &Element, z: &Element) -> [f64; 6] {
    let (nx, ny, nz) = (x.norm(), y.norm(), z.norm());
    let xy = x * y;
    let yx = y * x;
    let comm = rel((&xy - &yx).norm(), nx * ny);
    let assoc = rel((&(&xy * z) - &(x * &(y * z))).norm(), nx * ny * nz);
    let xx = x * x;
    let yy = y * y;
    let left_alt = (&(&xx * y) - &(x * &xy)).norm();
    let right_alt = (&(x * &yy) - &(&xy * y)).norm();
    let alt = rel(left_alt, nx * nx * ny).max(rel(right_alt, nx * ny * ny));
    let normed = rel((xy.norm() - nx * ny).abs(), nx * ny);
    let flex = rel((&(&xy * x) - &(x * &yx)).norm(), nx * nx * ny);
    let mut powers = vec![Element::one(x.level()), x.clone()];
    for k in 2..=8 {
        powers.push(x * &powers[k - 1]);
    }
    let mut power = 0.0f64;
    for m in 1..8 {
        for k in 1..=(8 - m) {
            let r = (&(&powers[m] * &powers[k]) - &powers[m + k]).norm();
            power = power.max(rel(r, nx.powi((m + k) as i32)));
        }
    }
    [comm, assoc, alt, normed, flex, power]
}

/// Randomized check of the six algebra laws at `level`. Deterministic in
/// `(level, trials, seed)`: trial `t` draws from its own stream.
pub fn law_profile(level: u32, trials: usize, seed: u64) -> Result<LawProfile> {
    if trials == 0 {
        return Err(AlgebraError::InvalidArgument(
            "trials must be positive".into(),
        ));
    }
    let maxima = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let x = uniform_element(&mut rng, level);
            let y = uniform_element(&mut rng, level);
            let z = uniform_element(&mut rng, level);
            trial_residuals(&x, &y, &z)
        })
        .reduce(|| [0.0; 6], |a, b| std::array::from_fn(|i| a[i].max(b[i])));
    let laws = Law::ALL
        .iter()
        .zip(maxima)
        .map(|(&law, max_residual)| LawResult {
            law,
            status: if max_residual <= LAW_PASS_TOL {
                LawStatus::Pass
            } else if max_residual > LAW_FAIL_TOL {
                LawStatus::Fail
            } else {
                LawStatus::Inconclusive
            },
            max_residual,
        })
        .collect();
    Ok(LawProfile {
        level,
        trials,
        seed,
        laws,
    })
}
