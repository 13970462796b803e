//! Streaming Farrow resampler.
//!
//! Each input sample advances a four-tap signal window together with the
//! derivative estimates from the differentiator FIRs. The signal path is
//! delayed by the differentiator group delay `D` so that every window field
//! refers to the same input instant. With the window loaded, the segment
//! polynomial spans input times `[n - L - 1, n - L]` (`t = -1` and `t = 0`),
//! where `L = D + 2` is the pipeline latency.
//!
//! Rate conversion by `P/Q` places output `j` at input time `j·Q/P`; the
//! position is tracked as an integer numerator modulo `P`, so there is no
//! floating-point drift however long the stream runs.

use std::fmt;
use std::str::FromStr;

use crate::diff::DEFAULT_PASSBAND_EDGE;
use crate::diff::{design_differentiator, DerivDegree, DifferentiatorSpec, FirState};
use crate::error::{Error, Result};
use crate::spline::{
    coefficients, eval_horner, InterpolatorKind, SampleWindow, SplineCoefficients,
};

/// Rational conversion factor `P/Q` in lowest terms: `P` outputs per `Q` inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    p: u64,
    q: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Ratio {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidConfig(format!(
                "ratio terms must be positive, got {p}/{q}"
            )));
        }
        let g = gcd(p, q);
        Ok(Self { p: p / g, q: q / g })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn as_f64(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Ratio {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("ratio must look like P/Q, got `{s}`"));
        let (p, q) = s.split_once('/').ok_or_else(bad)?;
        let p = p.trim().parse::<u64>().map_err(|_| bad())?;
        let q = q.trim().parse::<u64>().map_err(|_| bad())?;
        Self::new(p, q)
    }
}

/// Exact output-position tracker for `P/Q` conversion.
///
/// After `count` outputs the next output sits at input time
/// `origin + (count·Q) / P`, stored as integer part `whole` and numerator
/// `phase ∈ [0, P)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseAccumulator {
    ratio: Ratio,
    whole: u64,
    phase: u64,
    count: u64,
}

impl PhaseAccumulator {
    pub fn new(ratio: Ratio, origin: u64) -> Self {
        Self {
            ratio,
            whole: origin,
            phase: 0,
            count: 0,
        }
    }

    pub fn ratio(&self) -> Ratio {
        self.ratio
    }

    pub fn phase(&self) -> u64 {
        self.phase
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Integer input time at or before the next output.
    pub fn whole(&self) -> u64 {
        self.whole
    }

    /// Index of the segment `(n - 1, n]` holding the next output.
    fn segment(&self) -> u64 {
        self.whole + u64::from(self.phase > 0)
    }

    /// Segment coordinate of the next output: `0` on a knot, else `-1 + phase/P`.
    fn t(&self) -> f64 {
        if self.phase == 0 {
            0.0
        } else {
            -1.0 + self.phase as f64 / self.ratio.p as f64
        }
    }

    fn advance(&mut self) {
        let next = self.phase + self.ratio.q;
        self.whole += next / self.ratio.p;
        self.phase = next % self.ratio.p;
        self.count += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Conversion {
    Ratio(Ratio),
    /// Fixed fractional delay `mu ∈ [0, 1)` on top of the pipeline latency.
    Delay(f64),
}

fn check_mu(mu: f64) -> Result<f64> {
    if (0.0..1.0).contains(&mu) {
        Ok(mu)
    } else {
        Err(Error::InvalidConfig(format!(
            "fractional delay must lie in [0, 1), got {mu}"
        )))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResamplerConfig {
    pub kind: InterpolatorKind,
    /// First-derivative FIR order (ignored by Lp3).
    pub diff_order: usize,
    /// Second-derivative FIR order, required by Hs7 only.
    pub diff2_order: Option<usize>,
    pub passband_edge: f64,
    pub conversion: Conversion,
}

impl ResamplerConfig {
    /// Identity conversion (`1/1`) with the given first-derivative order.
    pub fn new(kind: InterpolatorKind, diff_order: usize) -> Self {
        Self {
            kind,
            diff_order,
            diff2_order: None,
            passband_edge: DEFAULT_PASSBAND_EDGE,
            conversion: Conversion::Ratio(Ratio { p: 1, q: 1 }),
        }
    }

    pub fn with_diff2_order(mut self, order: usize) -> Self {
        self.diff2_order = Some(order);
        self
    }

    pub fn with_ratio(mut self, ratio: Ratio) -> Self {
        self.conversion = Conversion::Ratio(ratio);
        self
    }

    pub fn with_delay(mut self, mu: f64) -> Self {
        self.conversion = Conversion::Delay(mu);
        self
    }

    pub fn with_passband_edge(mut self, edge: f64) -> Self {
        self.passband_edge = edge;
        self
    }
}

/// One output sample. `transient` marks outputs whose window still holds
/// zero-filled start-up state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Output {
    pub value: f64,
    pub transient: bool,
}

/// Fixed integer delay; length 0 passes samples straight through.
#[derive(Debug, Clone)]
struct DelayLine {
    buf: Vec<f64>,
    pos: usize,
}

impl DelayLine {
    fn new(len: usize) -> Self {
        Self {
            buf: vec![0.0; len],
            pos: 0,
        }
    }

    fn push(&mut self, x: f64) -> f64 {
        if self.buf.is_empty() {
            return x;
        }
        let out = std::mem::replace(&mut self.buf[self.pos], x);
        self.pos = (self.pos + 1) % self.buf.len();
        out
    }
}

/// Differentiator FIR followed by the extra delay that brings its group
/// delay up to the common pipeline delay.
#[derive(Debug, Clone)]
struct DerivPath {
    fir: FirState,
    align: DelayLine,
}

impl DerivPath {
    fn new(order: usize, degree: DerivDegree, edge: f64, common_delay: usize) -> Result<Self> {
        let spec = DifferentiatorSpec::new(order, degree, edge)?;
        let filter = design_differentiator(&spec);
        let align = DelayLine::new(common_delay - filter.group_delay());
        Ok(Self {
            fir: FirState::new(&filter),
            align,
        })
    }

    fn push(&mut self, x: f64) -> f64 {
        let d = self.fir.push(x);
        self.align.push(d)
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Tap {
    s: f64,
    d1: f64,
    d2: f64,
}

#[derive(Debug, Clone)]
enum Mode {
    Ratio(PhaseAccumulator),
    Delay(f64),
}

/// Number of aligned taps kept: the window spans four, plus one pipeline stage.
const HISTORY: usize = 5;

#[derive(Debug, Clone)]
pub struct Resampler {
    kind: InterpolatorKind,
    delay: usize,
    signal: DelayLine,
    d1: Option<DerivPath>,
    d2: Option<DerivPath>,
    exact_d1: DelayLine,
    exact_d2: DelayLine,
    history: [Tap; HISTORY],
    pushed: u64,
    mode: Mode,
    coeffs: SplineCoefficients,
}

impl Resampler {
    pub fn new(cfg: &ResamplerConfig) -> Result<Self> {
        let kind = cfg.kind;
        let diff2 = match (kind.uses_second_derivative(), cfg.diff2_order) {
            (true, None) => {
                return Err(Error::InvalidConfig(
                    "hs7 requires a second-derivative filter order".into(),
                ))
            }
            (true, Some(o)) => Some(o),
            (false, _) => None,
        };
        let d1_order = kind.uses_first_derivative().then_some(cfg.diff_order);
        for order in d1_order.iter().chain(diff2.iter()) {
            DifferentiatorSpec::new(*order, DerivDegree::First, cfg.passband_edge)?;
        }
        let delay = d1_order
            .into_iter()
            .chain(diff2)
            .map(|o| o / 2)
            .max()
            .unwrap_or(0);
        let d1 = d1_order
            .map(|o| DerivPath::new(o, DerivDegree::First, cfg.passband_edge, delay))
            .transpose()?;
        let d2 = diff2
            .map(|o| DerivPath::new(o, DerivDegree::Second, cfg.passband_edge, delay))
            .transpose()?;
        let mode = match cfg.conversion {
            Conversion::Ratio(r) => Mode::Ratio(PhaseAccumulator::new(r, 0)),
            Conversion::Delay(mu) => Mode::Delay(check_mu(mu)?),
        };
        Ok(Self {
            kind,
            delay,
            signal: DelayLine::new(delay),
            d1,
            d2,
            exact_d1: DelayLine::new(delay),
            exact_d2: DelayLine::new(delay),
            history: [Tap::default(); HISTORY],
            pushed: 0,
            mode,
            coeffs: SplineCoefficients::new(&vec![0.0; kind.order() + 1])?,
        })
    }

    pub fn kind(&self) -> InterpolatorKind {
        self.kind
    }

    /// Common differentiator group delay `D` (0 for Lp3).
    pub fn diff_delay(&self) -> usize {
        self.delay
    }

    /// Pipeline latency `L = D + 2` in input samples.
    pub fn latency(&self) -> usize {
        self.delay + 2
    }

    /// Number of input samples after which outputs stop being transient.
    pub fn warmup(&self) -> u64 {
        self.latency() as u64 + 3
    }

    pub fn samples_pushed(&self) -> u64 {
        self.pushed
    }

    pub fn ratio(&self) -> Option<Ratio> {
        match &self.mode {
            Mode::Ratio(acc) => Some(acc.ratio()),
            Mode::Delay(_) => None,
        }
    }

    pub fn accumulator(&self) -> Option<&PhaseAccumulator> {
        match &self.mode {
            Mode::Ratio(acc) => Some(acc),
            Mode::Delay(_) => None,
        }
    }

    /// Coefficients of the segment loaded by the latest push.
    pub fn coefficients(&self) -> &SplineCoefficients {
        &self.coeffs
    }

    /// Switches to `P/Q` conversion. The phase restarts on the next knot;
    /// delay lines keep their contents.
    pub fn set_ratio(&mut self, p: u64, q: u64) -> Result<Ratio> {
        let ratio = Ratio::new(p, q)?;
        self.mode = Mode::Ratio(PhaseAccumulator::new(ratio, self.pushed));
        Ok(ratio)
    }

    /// Switches to a fixed fractional delay: one output per input,
    /// approximating `x(n - L - mu)`.
    pub fn set_fractional_delay(&mut self, mu: f64) -> Result<()> {
        self.mode = Mode::Delay(check_mu(mu)?);
        Ok(())
    }

    /// Pushes one input sample and appends the outputs it releases.
    pub fn push(&mut self, x: f64, out: &mut Vec<Output>) {
        let s = self.signal.push(x);
        let d1 = self.d1.as_mut().map_or(0.0, |p| p.push(x));
        let d2 = self.d2.as_mut().map_or(0.0, |p| p.push(x));
        self.advance(Tap { s, d1, d2 }, out);
    }

    /// Pushes a sample together with exact derivative values at the same
    /// instant, bypassing the differentiator FIRs. Intended for checking the
    /// interpolation path in isolation; do not mix with [`Resampler::push`]
    /// on one stream.
    pub fn push_exact(&mut self, x: f64, d1: f64, d2: f64, out: &mut Vec<Output>) {
        let s = self.signal.push(x);
        let d1 = self.exact_d1.push(d1);
        let d2 = self.exact_d2.push(d2);
        self.advance(Tap { s, d1, d2 }, out);
    }

    pub fn process(&mut self, input: &[f64]) -> Vec<Output> {
        let mut out = Vec::with_capacity(input.len());
        for &x in input {
            self.push(x, &mut out);
        }
        out
    }

    fn window(&self) -> SampleWindow {
        let h = &self.history;
        SampleWindow {
            s_n: h[1].s,
            s_nm1: h[2].s,
            s_nm2: h[3].s,
            s_nm3: h[4].s,
            d1_nm1: h[2].d1,
            d1_nm2: h[3].d1,
            d2_nm1: h[2].d2,
            d2_nm2: h[3].d2,
        }
    }

    fn advance(&mut self, tap: Tap, out: &mut Vec<Output>) {
        self.history.rotate_right(1);
        self.history[0] = tap;
        let segment = self.pushed;
        self.pushed += 1;
        self.coeffs = coefficients(self.kind, &self.window());
        let transient = self.pushed < self.warmup();
        match &mut self.mode {
            Mode::Delay(mu) => out.push(Output {
                value: eval_horner(&self.coeffs, -*mu),
                transient,
            }),
            Mode::Ratio(acc) => {
                while acc.segment() == segment {
                    out.push(Output {
                        value: eval_horner(&self.coeffs, acc.t()),
                        transient,
                    });
                    acc.advance();
                }
            }
        }
    }
}

/// Builds a resampler from `cfg`.
pub fn make_resampler(cfg: &ResamplerConfig) -> Result<Resampler> {
    Resampler::new(cfg)
}
