//! Measurements of a configured resampler: equivalent impulse response,
//! frequency response, group delay, sidelobe level and image suppression.
//!
//! Frequencies are expressed in units of the input rate `F_d`; delays in
//! input samples with the differentiator delay `D` removed.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::engine::{make_resampler, Output, Ratio, Resampler, ResamplerConfig};
use crate::error::{Error, Result};
use crate::spline::InterpolatorKind;

/// Reported when no image energy is measurable.
pub const SUPPRESSION_SENTINEL_DB: f64 = 300.0;

/// Floor applied to magnitudes so that exact zeros stay finite.
pub const MAGNITUDE_FLOOR_DB: f64 = -400.0;

/// Upper edge (in `F_d`) of the low band used as group-delay reference.
pub const FLAT_REFERENCE_BAND: f64 = 0.05;

/// Half-width (rad/sample) of the phase difference used for group delay.
const PHASE_STEP: f64 = 1e-5;

/// Level a response must fall below before the mainlobe null search starts.
const MAINLOBE_SEARCH_DB: f64 = -6.0;

/// Equivalent impulse response sampled `oversample` times per input sample.
///
/// Sample `j` sits at input time `j / oversample`; `origin` is the index of
/// input time `L`, where an impulse at time 0 lands after the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpulseResponse {
    pub samples: Vec<f64>,
    pub oversample: usize,
    pub origin: usize,
    pub kind: InterpolatorKind,
    pub diff_delay: usize,
}

impl ImpulseResponse {
    /// Time of sample `j` relative to `origin`, in input samples.
    pub fn time(&self, j: usize) -> f64 {
        (j as f64 - self.origin as f64) / self.oversample as f64
    }

    /// `Σ h / P`, the DC gain of the interpolator.
    pub fn dc_gain(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.oversample as f64
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumAnalysis {
    pub freq: Vec<f64>,
    pub magnitude_db: Vec<f64>,
    pub group_delay: Vec<f64>,
}

impl SpectrumAnalysis {
    pub fn new(freq: Vec<f64>, magnitude_db: Vec<f64>, group_delay: Vec<f64>) -> Result<Self> {
        if freq.len() != magnitude_db.len() || freq.len() != group_delay.len() {
            return Err(Error::InvalidConfig(
                "spectrum columns differ in length".into(),
            ));
        }
        if freq.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig(
                "frequency grid must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            freq,
            magnitude_db,
            group_delay,
        })
    }

    pub fn len(&self) -> usize {
        self.freq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freq.is_empty()
    }

    /// Magnitude at `f` by linear interpolation between grid points.
    pub fn magnitude_at(&self, f: f64) -> Option<f64> {
        let i = self.freq.partition_point(|&g| g < f);
        if i == self.freq.len() {
            return None;
        }
        if self.freq[i] == f || i == 0 {
            return (self.freq[i] == f).then_some(self.magnitude_db[i]);
        }
        let (f0, f1) = (self.freq[i - 1], self.freq[i]);
        let w = (f - f0) / (f1 - f0);
        Some(self.magnitude_db[i - 1] * (1.0 - w) + self.magnitude_db[i] * w)
    }
}

fn analysis_config(kind: InterpolatorKind, diff_order: usize) -> ResamplerConfig {
    ResamplerConfig::new(kind, diff_order).with_diff2_order(diff_order)
}

/// Number of input samples needed for an impulse to clear the pipeline.
fn probe_length(r: &Resampler) -> usize {
    2 * r.diff_delay() + 8
}

fn probe(r: &mut Resampler, len: usize) -> Vec<f64> {
    let mut out: Vec<Output> = Vec::new();
    for n in 0..len {
        r.push(if n == 0 { 1.0 } else { 0.0 }, &mut out);
    }
    out.into_iter().map(|o| o.value).collect()
}

/// Impulse response at interpolation ratio `P/1`. Hs7 uses `diff_order`
/// for both differentiators.
pub fn impulse_response(
    kind: InterpolatorKind,
    diff_order: usize,
    oversample: usize,
) -> Result<ImpulseResponse> {
    impulse_response_with(&analysis_config(kind, diff_order), oversample)
}

pub fn impulse_response_with(cfg: &ResamplerConfig, oversample: usize) -> Result<ImpulseResponse> {
    if oversample < 2 {
        return Err(Error::InvalidConfig(format!(
            "oversampling must be >= 2, got {oversample}"
        )));
    }
    let cfg = cfg.clone().with_ratio(Ratio::new(oversample as u64, 1)?);
    let mut r = make_resampler(&cfg)?;
    let len = probe_length(&r);
    let samples = probe(&mut r, len);
    Ok(ImpulseResponse {
        samples,
        oversample,
        origin: r.latency() * oversample,
        kind: cfg.kind,
        diff_delay: r.diff_delay(),
    })
}

/// Zero-padded FFT of `h`, normalized to 0 dB at DC, on bins `0..=nfft/2`.
/// The grid runs to `P/2` in units of `F_d`.
pub fn frequency_response(h: &ImpulseResponse, nfft: usize) -> Result<SpectrumAnalysis> {
    if !nfft.is_power_of_two() || nfft < h.samples.len() || nfft < 4 {
        return Err(Error::InvalidConfig(format!(
            "nfft must be a power of two >= {} (response length), got {nfft}",
            h.samples.len()
        )));
    }
    let mut buf: Vec<Complex64> = h.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    buf.resize(nfft, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(nfft).process(&mut buf);
    let bins = &buf[..=nfft / 2];

    let p = h.oversample as f64;
    let dc = bins[0].norm();
    let reference = if dc > 0.0 {
        dc
    } else {
        bins.iter().fold(0.0_f64, |m, c| m.max(c.norm()))
    };
    let freq: Vec<f64> = (0..bins.len())
        .map(|k| k as f64 * p / nfft as f64)
        .collect();
    let magnitude_db = bins.iter().map(|c| to_db(c.norm() / reference)).collect();

    let phase = unwrap(&bins.iter().map(|c| c.arg()).collect::<Vec<_>>());
    let step = 2.0 * PI / nfft as f64;
    let last = phase.len() - 1;
    let group_delay = (0..phase.len())
        .map(|k| {
            let (lo, hi) = (k.saturating_sub(1), (k + 1).min(last));
            let tau_out = -(phase[hi] - phase[lo]) / ((hi - lo) as f64 * step);
            tau_out / p - h.diff_delay as f64
        })
        .collect();
    SpectrumAnalysis::new(freq, magnitude_db, group_delay)
}

fn to_db(ratio: f64) -> f64 {
    (20.0 * ratio.log10()).max(MAGNITUDE_FLOOR_DB)
}

fn wrap(phi: f64) -> f64 {
    let w = (phi + PI).rem_euclid(2.0 * PI) - PI;
    if w == -PI {
        PI
    } else {
        w
    }
}

fn unwrap(phase: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(phase.len());
    let mut offset = 0.0;
    for (i, &p) in phase.iter().enumerate() {
        if i > 0 {
            let jump = p - phase[i - 1];
            offset -= jump - wrap(jump);
        }
        out.push(p + offset);
    }
    out
}

fn dtft(h: &[f64], omega: f64) -> Complex64 {
    h.iter()
        .enumerate()
        .map(|(n, &v)| v * Complex64::from_polar(1.0, -omega * n as f64))
        .sum()
}

/// Equivalent FIR of the fixed-delay system, one tap per input sample.
pub fn fractional_delay_response(cfg: &ResamplerConfig, mu: f64) -> Result<(Vec<f64>, usize)> {
    let cfg = cfg.clone().with_delay(mu);
    let mut r = make_resampler(&cfg)?;
    let len = probe_length(&r);
    Ok((probe(&mut r, len), r.diff_delay()))
}

/// Group delay of the fixed-delay system on `grid` (in `F_d`, strictly
/// inside `(0, 0.5)`), with the differentiator delay `D` subtracted.
pub fn group_delay(
    kind: InterpolatorKind,
    diff_order: usize,
    mu: f64,
    grid: &[f64],
) -> Result<SpectrumAnalysis> {
    group_delay_with(&analysis_config(kind, diff_order), mu, grid)
}

pub fn group_delay_with(cfg: &ResamplerConfig, mu: f64, grid: &[f64]) -> Result<SpectrumAnalysis> {
    if let Some(f) = grid.iter().find(|&&f| !(f > 0.0 && f < 0.5)) {
        return Err(Error::InvalidConfig(format!(
            "group-delay grid points must lie strictly inside (0, 0.5) F_d, got {f}"
        )));
    }
    let (h, d) = fractional_delay_response(cfg, mu)?;
    let dc = h.iter().sum::<f64>().abs();
    let mut mag = Vec::with_capacity(grid.len());
    let mut tau = Vec::with_capacity(grid.len());
    for &f in grid {
        let om = 2.0 * PI * f;
        let lo = dtft(&h, om - PHASE_STEP).arg();
        let hi = dtft(&h, om + PHASE_STEP).arg();
        tau.push(-wrap(hi - lo) / (2.0 * PHASE_STEP) - d as f64);
        mag.push(to_db(dtft(&h, om).norm() / dc));
    }
    SpectrumAnalysis::new(grid.to_vec(), mag, tau)
}

/// Uniform grid of `n` points strictly inside `(0, 0.5)` F_d.
pub fn default_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|i| 0.5 * i as f64 / (n + 1) as f64).collect()
}

/// First mainlobe null: the first local minimum after the response has
/// dropped below -6 dB.
pub fn mainlobe_edge(s: &SpectrumAnalysis) -> Option<f64> {
    let m = &s.magnitude_db;
    let start = m.iter().position(|&v| v < MAINLOBE_SEARCH_DB)?.max(1);
    (start..m.len().saturating_sub(1))
        .find(|&i| m[i] < m[i - 1] && m[i] <= m[i + 1])
        .map(|i| s.freq[i])
}

/// Peak magnitude (dB) at or beyond the mainlobe edge. `None` detects the
/// edge with [`mainlobe_edge`].
pub fn sidelobe_level(s: &SpectrumAnalysis, mainlobe_edge_fd: Option<f64>) -> Result<f64> {
    let edge = match mainlobe_edge_fd {
        Some(e) => e,
        None => mainlobe_edge(s)
            .ok_or_else(|| Error::InvalidConfig("no mainlobe null found in spectrum".into()))?,
    };
    s.freq
        .iter()
        .zip(&s.magnitude_db)
        .filter(|(&f, _)| f >= edge)
        .map(|(_, &m)| m)
        .reduce(f64::max)
        .ok_or_else(|| Error::InvalidConfig(format!("no spectrum beyond mainlobe edge {edge}")))
}

/// Minimum distance in dB between the passband and the worst spectral
/// image `k·F_d ± f`, `k = 1..P-1`, over `f ∈ [0, band/2]`.
///
/// `band` is the two-sided processing band as a fraction of `F_d`.
pub fn image_suppression(s: &SpectrumAnalysis, band: f64, oversample: usize) -> Result<f64> {
    if !(band > 0.0 && band <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "processing band must lie in (0, 1] F_d, got {band}"
        )));
    }
    if oversample < 2 {
        return Err(Error::InvalidConfig(format!(
            "oversampling must be >= 2, got {oversample}"
        )));
    }
    let p = oversample as f64;
    let fold = |f: f64| {
        let g = f.rem_euclid(p);
        if g > p / 2.0 {
            p - g
        } else {
            g
        }
    };
    let mut worst = f64::INFINITY;
    for (&f, &pass) in s.freq.iter().zip(&s.magnitude_db) {
        if f > band / 2.0 {
            break;
        }
        for k in 1..oversample {
            for image in [k as f64 - f, k as f64 + f] {
                let level = s.magnitude_at(fold(image)).ok_or_else(|| {
                    Error::InvalidConfig(format!("spectrum grid does not reach {}", fold(image)))
                })?;
                worst = worst.min(pass - level);
            }
        }
    }
    if worst == f64::INFINITY {
        return Err(Error::InvalidConfig(
            "processing band holds no grid points".into(),
        ));
    }
    Ok(worst.min(SUPPRESSION_SENTINEL_DB))
}

/// Largest `f` such that `|τ - median(τ over the reference band)| <= tol`
/// at every grid point up to `f`.
pub fn flat_band(tau: &SpectrumAnalysis, tol: f64) -> f64 {
    let Some(&first) = tau.freq.first() else {
        return 0.0;
    };
    let low: Vec<f64> = tau
        .freq
        .iter()
        .zip(&tau.group_delay)
        .filter(|(&f, _)| f <= FLAT_REFERENCE_BAND)
        .map(|(_, &t)| t)
        .collect();
    let reference = if low.is_empty() {
        tau.group_delay[0]
    } else {
        median(low)
    };
    match tau
        .group_delay
        .iter()
        .position(|t| (t - reference).abs() > tol)
    {
        None => *tau.freq.last().unwrap_or(&first),
        Some(0) => first,
        Some(i) => tau.freq[i - 1],
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Flat band of a kind across a set of fractional delays: the narrowest
/// per-delay flat band.
pub fn flat_band_over_delays(
    kind: InterpolatorKind,
    diff_order: usize,
    mus: &[f64],
    grid: &[f64],
    tol: f64,
) -> Result<f64> {
    mus.iter()
        .map(|&mu| group_delay(kind, diff_order, mu, grid).map(|s| flat_band(&s, tol)))
        .try_fold(f64::INFINITY, |acc, fb| fb.map(|fb| acc.min(fb)))
}

/// Largest jump of the `deriv`-th derivative of `h(t)` across the integer
/// knots, in units of amplitude per input-sample^deriv.
///
/// Each segment is fitted with a polynomial of the kind's degree by least
/// squares on its samples; the jump at a knot compares the left segment at
/// `t = 0` with the right segment at `t = -1`.
pub fn knot_discontinuity(h: &ImpulseResponse, deriv: usize) -> f64 {
    let p = h.oversample;
    let degree = h.kind.order();
    assert!(
        p > degree,
        "need more samples per segment than the polynomial degree"
    );
    // segment n holds samples (n-1)P+1 ..= nP
    let segments = h.samples.len() / p;
    let fits: Vec<Vec<f64>> = (1..segments)
        .map(|n| {
            let ts: Vec<f64> = (1..=p).map(|k| -1.0 + k as f64 / p as f64).collect();
            let ys = &h.samples[(n - 1) * p + 1..=n * p];
            fit_polynomial(&ts, ys, degree)
        })
        .collect();
    fits.windows(2)
        .map(|w| {
            let left = derivative_at(&w[0], deriv, 0.0);
            let right = derivative_at(&w[1], deriv, -1.0);
            (left - right).abs()
        })
        .fold(0.0, f64::max)
}

fn fit_polynomial(ts: &[f64], ys: &[f64], degree: usize) -> Vec<f64> {
    let a = DMatrix::from_fn(ts.len(), degree + 1, |i, j| ts[i].powi(j as i32));
    let b = DVector::from_column_slice(ys);
    a.svd(true, true)
        .solve(&b, 1e-13)
        .expect("SVD computed with both singular-vector sets")
        .iter()
        .copied()
        .collect()
}

fn derivative_at(a: &[f64], deriv: usize, t: f64) -> f64 {
    a.iter()
        .enumerate()
        .skip(deriv)
        .map(|(j, &c)| {
            let falling: f64 = (0..deriv).map(|i| (j - i) as f64).product();
            c * falling * t.powi((j - deriv) as i32)
        })
        .sum()
}

/// Largest change between consecutive first differences of `h`, split into
/// (at knots, inside segments).
pub fn difference_jumps(h: &ImpulseResponse) -> (f64, f64) {
    let d: Vec<f64> = h.samples.windows(2).map(|w| w[1] - w[0]).collect();
    let mut at_knots: f64 = 0.0;
    let mut inside: f64 = 0.0;
    for j in 1..d.len() {
        let jump = (d[j] - d[j - 1]).abs();
        // d[j-1] ends on sample j; knot samples have index ≡ 0 mod P
        if j % h.oversample == 0 {
            at_knots = at_knots.max(jump);
        } else {
            inside = inside.max(jump);
        }
    }
    (at_knots, inside)
}
