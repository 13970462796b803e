//! Linear-phase FIR differentiators.
//!
//! First-derivative filters are antisymmetric (type III), second-derivative
//! filters symmetric (type I) with zero DC gain. Both have an even order `N`
//! and therefore an integer group delay `D = N / 2`.
//!
//! Taps are found by a weighted least-squares fit of the zero-phase
//! amplitude to the ideal `ω` (or `-ω²`) on a dense grid over
//! `[0, passband_edge·π]`. The region above the passband edge carries no
//! weight. Each grid point is weighted by `1 / |ideal|`, so the fit minimizes
//! relative rather than absolute error. The fit is further constrained to
//! match the ideal response's Taylor expansion at DC, which makes the
//! filters exact on polynomial inputs up to degree 7.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Passband edge (fraction of Nyquist) used when none is given.
pub const DEFAULT_PASSBAND_EDGE: f64 = 0.9;

/// Number of frequency points in the least-squares design grid.
const DESIGN_GRID: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivDegree {
    First,
    Second,
}

impl DerivDegree {
    pub fn from_u32(d: u32) -> Result<Self> {
        match d {
            1 => Ok(Self::First),
            2 => Ok(Self::Second),
            _ => Err(Error::InvalidConfig(format!(
                "derivative degree must be 1 or 2, got {d}"
            ))),
        }
    }

    pub fn as_u32(self) -> u32 {
        match self {
            Self::First => 1,
            Self::Second => 2,
        }
    }

    /// Ideal zero-phase amplitude at `omega` (rad/sample).
    pub fn ideal(self, omega: f64) -> f64 {
        match self {
            Self::First => omega,
            Self::Second => -omega * omega,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DifferentiatorSpec {
    order: usize,
    degree: DerivDegree,
    passband_edge: f64,
}

impl DifferentiatorSpec {
    pub fn new(order: usize, degree: DerivDegree, passband_edge: f64) -> Result<Self> {
        if order < 8 || !order.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!(
                "differentiator order must be even and >= 8, got {order}"
            )));
        }
        if !(passband_edge > 0.0 && passband_edge < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "passband edge must lie in (0, 1), got {passband_edge}"
            )));
        }
        Ok(Self {
            order,
            degree,
            passband_edge,
        })
    }

    /// Spec with the default passband edge.
    pub fn with_order(order: usize, degree: DerivDegree) -> Result<Self> {
        Self::new(order, degree, DEFAULT_PASSBAND_EDGE)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn degree(&self) -> DerivDegree {
        self.degree
    }

    pub fn passband_edge(&self) -> f64 {
        self.passband_edge
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DifferentiatorFilter {
    taps: Vec<f64>,
    degree: DerivDegree,
}

impl DifferentiatorFilter {
    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn degree(&self) -> DerivDegree {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.taps.len() - 1
    }

    pub fn group_delay(&self) -> usize {
        group_delay_of(self)
    }

    /// Zero-phase amplitude `A(ω)`, i.e. `H(ω)·e^{jωD}` with the `j` of the
    /// antisymmetric case removed. Approximates `ω` or `-ω²`.
    pub fn amplitude(&self, omega: f64) -> f64 {
        let d = self.group_delay();
        let half = (1..=d).map(|k| (k as f64, self.taps[d - k]));
        match self.degree {
            DerivDegree::First => 2.0 * half.map(|(k, b)| b * (k * omega).sin()).sum::<f64>(),
            DerivDegree::Second => {
                self.taps[d] + 2.0 * half.map(|(k, b)| b * (k * omega).cos()).sum::<f64>()
            }
        }
    }
}

/// Integer group delay `D = order / 2`.
pub fn group_delay_of(f: &DifferentiatorFilter) -> usize {
    f.order() / 2
}

pub fn design_differentiator(spec: &DifferentiatorSpec) -> DifferentiatorFilter {
    let d = spec.order / 2;
    let edge = spec.passband_edge * PI;
    // grid over (0, edge]; omega = 0 would carry infinite weight under 1/|ideal|
    let grid: Vec<f64> = (1..DESIGN_GRID)
        .map(|i| edge * i as f64 / (DESIGN_GRID - 1) as f64)
        .collect();

    let basis = |omega: f64, k: usize| -> f64 {
        let k = k as f64;
        match spec.degree {
            DerivDegree::First => 2.0 * (k * omega).sin(),
            // center tap tied to -2·Σb so the DC response is zero
            DerivDegree::Second => 2.0 * ((k * omega).cos() - 1.0),
        }
    };
    let a = DMatrix::from_fn(grid.len(), d, |i, j| {
        let w = 1.0 / spec.degree.ideal(grid[i]).abs();
        w * basis(grid[i], j + 1)
    });
    let y = DVector::from_iterator(
        grid.len(),
        grid.iter().map(|&om| spec.degree.ideal(om).signum()),
    );

    let (c, target) = flatness_constraints(spec.degree, d);
    let b = constrained_least_squares(&a, &y, &c, &target);

    let mut taps = vec![0.0; spec.order + 1];
    for k in 1..=d {
        let bk = b[k - 1];
        taps[d - k] = bk;
        taps[d + k] = match spec.degree {
            DerivDegree::First => -bk,
            DerivDegree::Second => bk,
        };
    }
    if spec.degree == DerivDegree::Second {
        taps[d] = -2.0 * b.iter().sum::<f64>();
    }
    DifferentiatorFilter {
        taps,
        degree: spec.degree,
    }
}

/// Number of Taylor terms of `A(ω)` pinned to the ideal at `ω = 0`.
const FLAT_TERMS: usize = 4;

/// Moment conditions making the filter exact on low-degree polynomials.
///
/// First derivative: `2Σ k·b = 1` and `Σ k^m·b = 0` for `m = 3, 5, 7`.
/// Second derivative: `Σ k²·b = 1` and `Σ k^m·b = 0` for `m = 4, 6, 8`.
/// Short filters keep at most half their free taps for the fit. Rows are
/// normalized to unit length.
fn flatness_constraints(degree: DerivDegree, d: usize) -> (DMatrix<f64>, DVector<f64>) {
    let terms = FLAT_TERMS.min(d / 2);
    let first_power = degree.as_u32() as i32;
    let mut c = DMatrix::zeros(terms, d);
    let mut target = DVector::zeros(terms);
    for row in 0..terms {
        let m = first_power + 2 * row as i32;
        let mut norm: f64 = 0.0;
        for k in 1..=d {
            let v = (k as f64).powi(m);
            c[(row, k - 1)] = v;
            norm += v * v;
        }
        let norm = norm.sqrt();
        for k in 0..d {
            c[(row, k)] /= norm;
        }
        if row == 0 {
            let rhs = match degree {
                DerivDegree::First => 0.5,
                DerivDegree::Second => 1.0,
            };
            target[row] = rhs / norm;
        }
    }
    (c, target)
}

/// Minimizes `|A·b - y|` subject to `C·b = t` by the null-space method.
fn constrained_least_squares(
    a: &DMatrix<f64>,
    y: &DVector<f64>,
    c: &DMatrix<f64>,
    t: &DVector<f64>,
) -> DVector<f64> {
    let n = a.ncols();
    let m = c.nrows();
    // square padding so the SVD yields a complete right basis
    let mut padded = DMatrix::zeros(n, n);
    padded.rows_mut(0, m).copy_from(c);
    let mut rhs = DVector::zeros(n);
    rhs.rows_mut(0, m).copy_from(t);
    let svd = padded.svd(true, true);
    let b0 = svd
        .solve(&rhs, 1e-12)
        .expect("SVD computed with both singular-vector sets");
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let null: Vec<usize> = order[m..].to_vec();
    let z = DMatrix::from_fn(n, null.len(), |i, j| v_t[(null[j], i)]);

    let reduced = a * &z;
    let resid = y - a * &b0;
    let coeffs = reduced
        .svd(true, true)
        .solve(&resid, 1e-14)
        .expect("SVD computed with both singular-vector sets");
    b0 + z * coeffs
}

/// Streaming direct-form FIR with zero initial state.
#[derive(Debug, Clone)]
pub struct FirState {
    taps: Vec<f64>,
    history: Vec<f64>,
    pos: usize,
}

impl FirState {
    pub fn new(filter: &DifferentiatorFilter) -> Self {
        Self::from_taps(filter.taps().to_vec())
    }

    pub fn from_taps(taps: Vec<f64>) -> Self {
        let n = taps.len();
        Self {
            taps,
            history: vec![0.0; n],
            pos: 0,
        }
    }

    /// Pushes one sample and returns `y[n] = Σ h[k] x[n-k]`.
    pub fn push(&mut self, x: f64) -> f64 {
        let n = self.taps.len();
        self.history[self.pos] = x;
        let mut acc = 0.0;
        let mut idx = self.pos;
        for &h in &self.taps {
            acc += h * self.history[idx];
            idx = if idx == 0 { n - 1 } else { idx - 1 };
        }
        self.pos = (self.pos + 1) % n;
        acc
    }

    pub fn reset(&mut self) {
        self.history.fill(0.0);
        self.pos = 0;
    }
}

/// Filters a whole stream from rest. Output `n` estimates the derivative
/// at input time `n - D`.
pub fn apply_fir(f: &DifferentiatorFilter, x: &[f64]) -> Vec<f64> {
    let mut st = FirState::new(f);
    x.iter().map(|&v| st.push(v)).collect()
}
