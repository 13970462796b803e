//! Per-segment polynomial coefficients for the four interpolator kinds.
//!
//! Every kind produces a polynomial `p(t)` on the segment `t ∈ [-1, 0]`,
//! where `t = 0` sits on `s[n-1]` and `t = -1` on `s[n-2]`. The outer taps
//! `s[n]` and `s[n-3]` sit at `t = 1` and `t = -2`.
//!
//! The closed forms below are the multiplier-minimized expressions used on
//! the hot path. [`solve_constraint_system`] builds the full constraint
//! matrix for a kind and solves it directly; it is slow but is the
//! reference the closed forms are checked against.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Interpolator family selected for a Farrow structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InterpolatorKind {
    /// Cubic Lagrange through four samples; no derivative inputs.
    Lp3,
    /// Cubic Hermite spline (two samples, two first derivatives).
    Hs3,
    /// Quintic Hermite spline (four samples, two first derivatives).
    Hs5,
    /// Septic Hermite spline (four samples, first and second derivatives).
    Hs7,
}

impl InterpolatorKind {
    pub const ALL: [InterpolatorKind; 4] = [Self::Lp3, Self::Hs3, Self::Hs5, Self::Hs7];

    /// Polynomial degree of one segment.
    pub fn order(self) -> usize {
        match self {
            Self::Lp3 | Self::Hs3 => 3,
            Self::Hs5 => 5,
            Self::Hs7 => 7,
        }
    }

    pub fn uses_first_derivative(self) -> bool {
        !matches!(self, Self::Lp3)
    }

    pub fn uses_second_derivative(self) -> bool {
        matches!(self, Self::Hs7)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Lp3 => "lp3",
            Self::Hs3 => "hs3",
            Self::Hs5 => "hs5",
            Self::Hs7 => "hs7",
        }
    }
}

impl fmt::Display for InterpolatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InterpolatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lp3" => Ok(Self::Lp3),
            "hs3" => Ok(Self::Hs3),
            "hs5" => Ok(Self::Hs5),
            "hs7" => Ok(Self::Hs7),
            _ => Err(Error::InvalidConfig(format!(
                "unknown interpolator kind `{s}`"
            ))),
        }
    }
}

/// Signal taps and derivative estimates feeding one polynomial segment.
///
/// Fields a kind does not use are ignored by it.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SampleWindow {
    pub s_n: f64,
    pub s_nm1: f64,
    pub s_nm2: f64,
    pub s_nm3: f64,
    pub d1_nm1: f64,
    pub d1_nm2: f64,
    pub d2_nm1: f64,
    pub d2_nm2: f64,
}

impl SampleWindow {
    /// Window with only signal taps, ordered `[s[n], s[n-1], s[n-2], s[n-3]]`.
    pub fn from_samples(s: [f64; 4]) -> Self {
        Self {
            s_n: s[0],
            s_nm1: s[1],
            s_nm2: s[2],
            s_nm3: s[3],
            ..Self::default()
        }
    }

    /// Fields in the order `s_n, s_nm1, s_nm2, s_nm3, d1_nm1, d1_nm2, d2_nm1, d2_nm2`.
    pub fn to_array(&self) -> [f64; 8] {
        [
            self.s_n,
            self.s_nm1,
            self.s_nm2,
            self.s_nm3,
            self.d1_nm1,
            self.d1_nm2,
            self.d2_nm1,
            self.d2_nm2,
        ]
    }

    pub fn from_array(v: [f64; 8]) -> Self {
        Self {
            s_n: v[0],
            s_nm1: v[1],
            s_nm2: v[2],
            s_nm3: v[3],
            d1_nm1: v[4],
            d1_nm2: v[5],
            d2_nm1: v[6],
            d2_nm2: v[7],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

/// Coefficients `a[0..=order]` of `p(t) = a0 + a1 t + ... + aN t^N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplineCoefficients {
    order: usize,
    a: [f64; 8],
}

impl SplineCoefficients {
    /// Builds coefficients from a slice of length 4, 6 or 8.
    pub fn new(a: &[f64]) -> Result<Self, Error> {
        let order = match a.len() {
            4 => 3,
            6 => 5,
            8 => 7,
            n => {
                return Err(Error::InvalidConfig(format!(
                    "coefficient count must be 4, 6 or 8, got {n}"
                )))
            }
        };
        let mut buf = [0.0; 8];
        buf[..a.len()].copy_from_slice(a);
        Ok(Self { order, a: buf })
    }

    fn from_fixed<const N: usize>(a: [f64; N]) -> Self {
        let mut buf = [0.0; 8];
        buf[..N].copy_from_slice(&a);
        Self {
            order: N - 1,
            a: buf,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.a[..=self.order]
    }

    /// Derivative polynomial, one degree lower. The result is not a
    /// valid segment order on its own, so only the raw values are returned.
    pub fn derivative(&self) -> Vec<f64> {
        self.as_slice()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| i as f64 * c)
            .collect()
    }
}

/// Evaluates `p(t)` with Horner's scheme: exactly `order` multiplications by `t`.
#[inline]
pub fn eval_horner(c: &SplineCoefficients, t: f64) -> f64 {
    horner(c.as_slice(), t)
}

#[inline]
pub(crate) fn horner(a: &[f64], t: f64) -> f64 {
    a.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

/// Closed-form coefficients for `kind`.
pub fn coefficients(kind: InterpolatorKind, w: &SampleWindow) -> SplineCoefficients {
    match kind {
        InterpolatorKind::Lp3 => lagrange3_coeffs(w),
        InterpolatorKind::Hs3 => hermite3_coeffs(w),
        InterpolatorKind::Hs5 => hermite5_coeffs(w),
        InterpolatorKind::Hs7 => hermite7_coeffs(w),
    }
}

/// Cubic through `s[n]`, `s[n-1]`, `s[n-2]`, `s[n-3]` at `t = 1, 0, -1, -2`.
pub fn lagrange3_coeffs(w: &SampleWindow) -> SplineCoefficients {
    let a0 = w.s_nm1;
    let a2 = 0.5 * (w.s_n + w.s_nm2) - a0;
    let a3 = (a0 + 4.0 * a2 + w.s_nm2 - w.s_n - w.s_nm3) / 6.0;
    let a1 = 0.5 * (w.s_n - w.s_nm2) - a3;
    SplineCoefficients::from_fixed([a0, a1, a2, a3])
}

pub fn hermite3_coeffs(w: &SampleWindow) -> SplineCoefficients {
    let diff = w.s_nm2 - w.s_nm1;
    let a0 = w.s_nm1;
    let a1 = w.d1_nm1;
    let a2 = 3.0 * diff + 2.0 * w.d1_nm1 + w.d1_nm2;
    let a3 = 2.0 * diff + w.d1_nm1 + w.d1_nm2;
    SplineCoefficients::from_fixed([a0, a1, a2, a3])
}

pub fn hermite5_coeffs(w: &SampleWindow) -> SplineCoefficients {
    const C12: f64 = 1.0 / 12.0;
    let a0 = w.s_nm1;
    let a1 = w.d1_nm1;
    let a2 = C12 * (2.0 * w.s_n + w.s_nm3) + 0.5 * (5.0 * w.s_nm2 + 3.0 * a1) - 11.0 * 0.25 * a0
        + w.d1_nm2;
    let a3 = C12 * (5.0 * w.s_n + w.s_nm3) - 0.25 * (3.0 * a0 - w.s_nm2) - 0.5 * (a1 - w.d1_nm2);
    let a4 = 0.5 * (w.s_n + w.s_nm2) - a0 - a2;
    let a5 = 0.5 * (w.s_n - w.s_nm2) - a1 - a3;
    SplineCoefficients::from_fixed([a0, a1, a2, a3, a4, a5])
}

pub fn hermite7_coeffs(w: &SampleWindow) -> SplineCoefficients {
    const C24: f64 = 1.0 / 24.0;
    const C8: f64 = 1.0 / 8.0;
    let (sn, s2, s3) = (w.s_n, w.s_nm2, w.s_nm3);
    let (dd1, dd2) = (w.d2_nm1, w.d2_nm2);
    let a0 = w.s_nm1;
    let a1 = w.d1_nm1;
    let a2 = 0.5 * dd1;
    let a3 = C24 * (207.0 * a0 + s3 + 2.0 * sn)
        - 0.25 * (35.0 * s2 + 21.0 * a1 + 14.0 * w.d1_nm2 - 5.0 * dd1 + 2.0 * dd2);
    let a5 =
        3.0 * C8 * (sn + 15.0 * s2) - 6.0 * a0 + 3.0 * a1 + 0.25 * (9.0 * w.d1_nm2 + dd2) - dd1;
    let a6 = C24 * (5.0 * sn + 219.0 * s2 - 2.0 * s3)
        + 0.25 * (-37.0 * a0 + 18.0 * a1 + 17.0 * w.d1_nm2 + 3.0 * dd2)
        - dd1;
    let a4 = 0.5 * (sn + s2) - a0 - a2 - a6;
    let a7 = C24 * (sn - s3) - 21.0 * C8 * (a0 - s2) + 0.25 * (5.0 * (a1 + w.d1_nm2) - dd1 + dd2);
    SplineCoefficients::from_fixed([a0, a1, a2, a3, a4, a5, a6, a7])
}

/// A constraint on `p`: the `deriv`-th derivative at `t` equals the window value.
#[derive(Debug, Clone, Copy)]
struct Constraint {
    t: f64,
    deriv: u32,
    value: f64,
}

fn constraints(kind: InterpolatorKind, w: &SampleWindow) -> Vec<Constraint> {
    let c = |t, deriv, value| Constraint { t, deriv, value };
    let samples = [
        c(1.0, 0, w.s_n),
        c(0.0, 0, w.s_nm1),
        c(-1.0, 0, w.s_nm2),
        c(-2.0, 0, w.s_nm3),
    ];
    let first = [c(0.0, 1, w.d1_nm1), c(-1.0, 1, w.d1_nm2)];
    let second = [c(0.0, 2, w.d2_nm1), c(-1.0, 2, w.d2_nm2)];
    match kind {
        InterpolatorKind::Lp3 => samples.to_vec(),
        InterpolatorKind::Hs3 => vec![samples[1], samples[2], first[0], first[1]],
        InterpolatorKind::Hs5 => samples.iter().chain(&first).copied().collect(),
        InterpolatorKind::Hs7 => samples
            .iter()
            .chain(&first)
            .chain(&second)
            .copied()
            .collect(),
    }
}

/// Row of the constraint matrix: d^k/dt^k of `t^j` for `j = 0..n`.
fn constraint_row(t: f64, deriv: u32, n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| {
            let j = j as u32;
            if j < deriv {
                return 0.0;
            }
            let falling: f64 = (0..deriv).map(|i| f64::from(j - i)).product();
            falling * t.powi((j - deriv) as i32)
        })
        .collect()
}

/// Solves the kind's full constraint system (values and derivatives at the
/// knots) by dense Gaussian elimination.
pub fn solve_constraint_system(kind: InterpolatorKind, w: &SampleWindow) -> SplineCoefficients {
    let cons = constraints(kind, w);
    let n = cons.len();
    let mut m: Vec<Vec<f64>> = cons
        .iter()
        .map(|c| constraint_row(c.t, c.deriv, n))
        .collect();
    let mut rhs: Vec<f64> = cons.iter().map(|c| c.value).collect();
    // all four systems are nonsingular
    let a = gauss_solve(&mut m, &mut rhs).expect("constraint matrix is nonsingular");
    SplineCoefficients::new(&a).expect("constraint count matches a segment order")
}

/// Residuals of every constraint of `kind` for the given coefficients.
pub fn constraint_residuals(
    kind: InterpolatorKind,
    w: &SampleWindow,
    c: &SplineCoefficients,
) -> Vec<f64> {
    let n = c.order() + 1;
    constraints(kind, w)
        .iter()
        .map(|con| {
            let row = constraint_row(con.t, con.deriv, n);
            let lhs: f64 = row.iter().zip(c.as_slice()).map(|(r, a)| r * a).sum();
            lhs - con.value
        })
        .collect()
}

/// Partial-pivot Gaussian elimination; `None` for a singular matrix.
pub(crate) fn gauss_solve(m: &mut [Vec<f64>], rhs: &mut [f64]) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[pivot][col] == 0.0 {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            if f == 0.0 {
                continue;
            }
            let (upper, lower) = m.split_at_mut(row);
            for (a, b) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *a -= f * b;
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| m[row][k] * x[k]).sum();
        x[row] = (rhs[row] - tail) / m[row][row];
    }
    Some(x)
}

/// Exact rational constant `num / den`, `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    pub const fn new(num: i64, den: i64) -> Self {
        Self { num, den }
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (i128::from(self.num) * i128::from(other.den))
            .cmp(&(i128::from(other.num) * i128::from(self.den)))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

const fn r(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

const HS3_CONSTANTS: [Rational; 2] = [r(2, 1), r(3, 1)];

const HS5_CONSTANTS: [Rational; 7] = [
    r(1, 12),
    r(1, 4),
    r(1, 2),
    r(2, 1),
    r(3, 1),
    r(5, 1),
    r(11, 1),
];

const HS7_CONSTANTS: [Rational; 18] = [
    r(1, 24),
    r(1, 8),
    r(1, 4),
    r(1, 2),
    r(2, 1),
    r(3, 1),
    r(5, 1),
    r(6, 1),
    r(9, 1),
    r(14, 1),
    r(15, 1),
    r(17, 1),
    r(18, 1),
    r(21, 1),
    r(35, 1),
    r(37, 1),
    r(207, 1),
    r(219, 1),
];

/// Distinct constant multipliers used by the closed form of `kind`, in
/// ascending order. Lp3 is not a multiplier-minimized form and returns the
/// constants of its closed form above.
pub fn constant_multiplier_set(kind: InterpolatorKind) -> Vec<Rational> {
    let mut v = match kind {
        InterpolatorKind::Lp3 => vec![r(1, 2), r(4, 1), r(1, 6)],
        InterpolatorKind::Hs3 => HS3_CONSTANTS.to_vec(),
        InterpolatorKind::Hs5 => HS5_CONSTANTS.to_vec(),
        InterpolatorKind::Hs7 => HS7_CONSTANTS.to_vec(),
    };
    v.sort();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(v: [f64; 8]) -> SampleWindow {
        SampleWindow::from_array(v)
    }

    fn assert_coeffs(c: &SplineCoefficients, expected: &[f64], tol: f64) {
        assert_eq!(c.as_slice().len(), expected.len());
        for (got, want) in c.as_slice().iter().zip(expected) {
            assert!(
                (got - want).abs() <= tol,
                "{:?} != {:?}",
                c.as_slice(),
                expected
            );
        }
    }

    #[test]
    fn solver_constant_and_ramp() {
        let c = solve_constraint_system(
            InterpolatorKind::Hs3,
            &window([2.0, 2.0, 2.0, 2.0, 0.0, 0.0, 0.0, 0.0]),
        );
        assert_coeffs(&c, &[2.0, 0.0, 0.0, 0.0], 1e-14);
        let c = solve_constraint_system(
            InterpolatorKind::Hs5,
            &window([1.0, 0.0, -1.0, -2.0, 1.0, 1.0, 0.0, 0.0]),
        );
        assert_coeffs(&c, &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0], 1e-14);
    }

    #[test]
    fn solver_unit_center_tap() {
        let unit = window([0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let c = solve_constraint_system(InterpolatorKind::Hs5, &unit);
        assert_coeffs(
            &c,
            &[1.0, 0.0, -11.0 / 4.0, -3.0 / 4.0, 7.0 / 4.0, 3.0 / 4.0],
            1e-13,
        );
        for r in constraint_residuals(InterpolatorKind::Hs5, &unit, &c) {
            assert!(r.abs() < 1e-12);
        }
    }

    #[test]
    fn hermite3_examples() {
        let c = hermite3_coeffs(&window([1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0]));
        assert_coeffs(&c, &[1.0, 0.0, 0.0, 0.0], 0.0);
        let c = hermite3_coeffs(&window([0.0, 0.0, -1.0, 0.0, 1.0, 1.0, 0.0, 0.0]));
        assert_coeffs(&c, &[0.0, 1.0, 0.0, 0.0], 0.0);
        let w = window([0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_coeffs(&hermite3_coeffs(&w), &[1.0, 0.0, -3.0, -2.0], 0.0);
        assert_coeffs(
            &solve_constraint_system(InterpolatorKind::Hs3, &w),
            &[1.0, 0.0, -3.0, -2.0],
            1e-14,
        );
    }

    #[test]
    fn hermite5_examples() {
        let c = 0.37;
        assert_coeffs(
            &hermite5_coeffs(&window([c, c, c, c, 0.0, 0.0, 0.0, 0.0])),
            &[c, 0.0, 0.0, 0.0, 0.0, 0.0],
            1e-15,
        );
        let ramp = window([1.0, 0.0, -1.0, -2.0, 1.0, 1.0, 0.0, 0.0]);
        assert_coeffs(
            &hermite5_coeffs(&ramp),
            &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
            1e-15,
        );
        let unit = window([0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_coeffs(
            &hermite5_coeffs(&unit),
            &[1.0, 0.0, -2.75, -0.75, 1.75, 0.75],
            1e-15,
        );
    }

    #[test]
    fn hermite7_examples() {
        let c = -1.5;
        assert_coeffs(
            &hermite7_coeffs(&window([c, c, c, c, 0.0, 0.0, 0.0, 0.0])),
            &[c, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            1e-13,
        );
        let ramp = window([1.0, 0.0, -1.0, -2.0, 1.0, 1.0, 0.0, 0.0]);
        assert_coeffs(
            &hermite7_coeffs(&ramp),
            &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            1e-13,
        );
        let unit = window([0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let expected = [
            1.0,
            0.0,
            0.0,
            69.0 / 8.0,
            33.0 / 4.0,
            -6.0,
            -37.0 / 4.0,
            -21.0 / 8.0,
        ];
        assert_coeffs(&hermite7_coeffs(&unit), &expected, 1e-13);
        let oracle = solve_constraint_system(InterpolatorKind::Hs7, &unit);
        assert_coeffs(&oracle, &expected, 1e-12);
        for r in constraint_residuals(InterpolatorKind::Hs7, &unit, &oracle) {
            assert!(r.abs() < 1e-12);
        }
    }

    #[test]
    fn lagrange3_examples() {
        assert_coeffs(
            &lagrange3_coeffs(&window([4.0, 4.0, 4.0, 4.0, 9.0, 9.0, 9.0, 9.0])),
            &[4.0, 0.0, 0.0, 0.0],
            1e-15,
        );
        assert_coeffs(
            &lagrange3_coeffs(&window([1.0, 0.0, -1.0, -2.0, 0.0, 0.0, 0.0, 0.0])),
            &[0.0, 1.0, 0.0, 0.0],
            1e-15,
        );
        // Vandermonde solve at nodes {1, 0, -1, -2}: p(t) = 1 + t/2 - t^2 - t^3/2
        let unit = window([0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let c = lagrange3_coeffs(&unit);
        assert_coeffs(&c, &[1.0, 0.5, -1.0, -0.5], 1e-15);
        for (t, want) in [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (-2.0, 0.0)] {
            assert!((eval_horner(&c, t) - want).abs() < 1e-15);
        }
    }

    #[test]
    fn unused_fields_are_ignored() {
        let base = window([0.3, -0.2, 0.7, 0.1, 0.5, -0.4, 0.9, -0.8]);
        let mut noisy = base;
        noisy.d1_nm1 = 17.0;
        noisy.d2_nm2 = -3.0;
        assert_eq!(lagrange3_coeffs(&base), lagrange3_coeffs(&noisy));
        let mut noisy = base;
        noisy.s_n = 11.0;
        noisy.s_nm3 = -5.0;
        noisy.d2_nm1 = 2.0;
        assert_eq!(hermite3_coeffs(&base), hermite3_coeffs(&noisy));
        let mut noisy = base;
        noisy.d2_nm1 = 2.0;
        assert_eq!(hermite5_coeffs(&base), hermite5_coeffs(&noisy));
    }

    #[test]
    fn horner_examples() {
        let c = SplineCoefficients::new(&[1.0, 0.0, -3.0, -2.0]).unwrap();
        assert_eq!(eval_horner(&c, 0.0), 1.0);
        assert_eq!(eval_horner(&c, -1.0), 0.0);
        let c = SplineCoefficients::new(&[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(eval_horner(&c, -0.5), -0.5);
    }

    #[test]
    fn coefficient_length_is_checked() {
        assert!(SplineCoefficients::new(&[1.0, 2.0]).is_err());
        assert_eq!(SplineCoefficients::new(&[0.0; 8]).unwrap().order(), 7);
    }

    #[test]
    fn multiplier_sets() {
        let show = |k| {
            constant_multiplier_set(k)
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(show(InterpolatorKind::Hs3), ["2", "3"]);
        assert_eq!(
            show(InterpolatorKind::Hs5),
            ["1/12", "1/4", "1/2", "2", "3", "5", "11"]
        );
        assert_eq!(constant_multiplier_set(InterpolatorKind::Hs7).len(), 18);
    }

    #[test]
    fn kind_parsing() {
        assert_eq!(
            "HS7".parse::<InterpolatorKind>().unwrap(),
            InterpolatorKind::Hs7
        );
        assert!("hs4".parse::<InterpolatorKind>().is_err());
        for k in InterpolatorKind::ALL {
            assert_eq!(k.name().parse::<InterpolatorKind>().unwrap(), k);
        }
    }
}
