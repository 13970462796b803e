//! Command-line front end.
//!
//! Every subcommand validates its whole configuration and reads its input
//! before any output file is created.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{
    default_grid, flat_band, frequency_response, group_delay, image_suppression, impulse_response,
    sidelobe_level, SpectrumAnalysis,
};
use crate::diff::{design_differentiator, DerivDegree, DifferentiatorSpec, DEFAULT_PASSBAND_EDGE};
use crate::engine::{make_resampler, Ratio, Resampler, ResamplerConfig};
use crate::error::Error;
use crate::signal_io::{read_signal, write_signal, Signal, SignalFormat};
use crate::spline::{coefficients, InterpolatorKind, SampleWindow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_FORMAT: i32 = 5;

/// Environment variable that overrides the `bench` output directory.
pub const OUT_DIR_ENV: &str = "FARROW_OUT_DIR";

const EXIT_CODES: &str = "\
Exit status:
  0  success
  2  usage error (unknown flag, missing argument)
  3  invalid configuration (bad ratio syntax, out-of-range value)
  4  I/O failure (unreadable input, unwritable output)
  5  malformed input (truncated file, bad header, format mismatch)";

#[derive(Debug, Parser)]
#[command(name = "farrow", version, about = "Farrow-structure resampling with Lagrange and Hermite-spline interpolators", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print per-segment polynomial coefficients as CSV rows `a0,...,aN`.
    Coeffs(CoeffsArgs),
    /// Design an FIR differentiator and print its taps, one per line.
    DesignDiff(DesignArgs),
    /// Apply a fixed fractional delay to a signal file.
    Delay(DelayArgs),
    /// Convert the sample rate of a signal file by P/Q.
    Resample(ResampleArgs),
    /// Frequency response, group delay or impulse response as CSV.
    Analyze(AnalyzeArgs),
    /// Compare all interpolators and write response, impulse, group-delay and summary CSVs.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct FilterArgs {
    /// Interpolator: lp3, hs3, hs5 or hs7.
    #[arg(long, default_value = "hs3")]
    kind: String,
    /// First-derivative FIR order (even).
    #[arg(long, default_value_t = 32)]
    diff_order: usize,
    /// Second-derivative FIR order for hs7 (defaults to --diff-order).
    #[arg(long)]
    diff2_order: Option<usize>,
    /// Differentiator passband edge as a fraction of Nyquist.
    #[arg(long, default_value_t = DEFAULT_PASSBAND_EDGE)]
    passband: f64,
}

impl FilterArgs {
    fn config(&self) -> Result<ResamplerConfig, Error> {
        let kind: InterpolatorKind = self.kind.parse()?;
        Ok(ResamplerConfig::new(kind, self.diff_order)
            .with_diff2_order(self.diff2_order.unwrap_or(self.diff_order))
            .with_passband_edge(self.passband))
    }
}

#[derive(Debug, Args)]
struct StreamArgs {
    input: PathBuf,
    output: PathBuf,
    /// Input format (raw-f64le, wav-pcm16, wav-float32, csv); guessed from the extension.
    #[arg(long)]
    format: Option<String>,
    /// Output format; defaults to the input format.
    #[arg(long)]
    out_format: Option<String>,
    /// Keep outputs produced while the pipeline fills.
    #[arg(long)]
    keep_transient: bool,
}

impl StreamArgs {
    fn formats(&self) -> Result<(SignalFormat, SignalFormat), Error> {
        let input = match &self.format {
            Some(f) => f.parse()?,
            None => SignalFormat::from_path(&self.input),
        };
        let output = match &self.out_format {
            Some(f) => f.parse()?,
            None => input,
        };
        Ok((input, output))
    }
}

#[derive(Debug, Args)]
struct CoeffsArgs {
    #[command(flatten)]
    filter: FilterArgs,
    /// Single window `s_n,s_nm1,s_nm2,s_nm3,d1_nm1,d1_nm2,d2_nm1,d2_nm2`.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// Signal file to stream through the engine (one row per input sample).
    input: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    /// Output CSV path (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DesignArgs {
    #[arg(long)]
    order: usize,
    #[arg(long, default_value_t = 1)]
    degree: u32,
    #[arg(long, default_value_t = DEFAULT_PASSBAND_EDGE)]
    passband: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DelayArgs {
    /// Fractional delay in [0, 1).
    #[arg(long, allow_hyphen_values = true)]
    mu: f64,
    #[command(flatten)]
    filter: FilterArgs,
    #[command(flatten)]
    stream: StreamArgs,
}

#[derive(Debug, Args)]
struct ResampleArgs {
    /// Conversion ratio P/Q (P outputs per Q inputs).
    #[arg(long)]
    ratio: String,
    #[command(flatten)]
    filter: FilterArgs,
    #[command(flatten)]
    stream: StreamArgs,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    filter: FilterArgs,
    /// Interpolation factor P used to sample the response.
    #[arg(long, default_value_t = 8)]
    oversample: usize,
    /// Emit `t,h` impulse-response rows instead of the spectrum.
    #[arg(long)]
    impulse: bool,
    /// Analyze the fixed fractional-delay system instead (group delay on a 4096-point grid).
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    /// FFT length (power of two).
    #[arg(long, default_value_t = 1 << 16)]
    nfft: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Output directory (overrides FARROW_OUT_DIR).
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Differentiator order for the response comparison.
    #[arg(long, default_value_t = 32)]
    response_order: usize,
    /// Differentiator order for the group-delay comparison.
    #[arg(long, default_value_t = 48)]
    delay_order: usize,
    #[arg(long, default_value_t = 8)]
    oversample: usize,
    /// Group-delay flatness tolerance in samples.
    #[arg(long, default_value_t = 0.05)]
    tol: f64,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidConfig(_) => EXIT_CONFIG,
            Error::Format(_) => EXIT_FORMAT,
            Error::Io(_) => EXIT_IO,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e).into()
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("farrow: error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Coeffs(a) => coeffs(a),
        Command::DesignDiff(a) => design(a),
        Command::Delay(a) => delay(a),
        Command::Resample(a) => resample(a),
        Command::Analyze(a) => analyze(a),
        Command::Bench(a) => bench(a),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn csv_row(values: &[f64]) -> String {
    let mut s = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{v}");
    }
    s.push('\n');
    s
}

fn coeffs(a: CoeffsArgs) -> Result<(), Failure> {
    let cfg = a.filter.config()?;
    let text = match (&a.window, &a.input) {
        (Some(w), None) => {
            let v: Vec<f64> = w
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| Error::InvalidConfig(format!("bad window `{w}`")))?;
            let arr: [f64; 8] = v.try_into().map_err(|_| {
                Error::InvalidConfig("window needs exactly 8 comma-separated values".into())
            })?;
            let window = SampleWindow::from_array(arr);
            if !window.is_finite() {
                return Err(Error::InvalidConfig("window values must be finite".into()).into());
            }
            csv_row(coefficients(cfg.kind, &window).as_slice())
        }
        (None, Some(input)) => {
            let mut r = make_resampler(&cfg)?;
            let format = match &a.format {
                Some(f) => f.parse()?,
                None => SignalFormat::from_path(input),
            };
            let signal = read_signal(input, format)?;
            let mut out = Vec::new();
            let mut text = String::new();
            for &x in &signal.samples {
                r.push(x, &mut out);
                text.push_str(&csv_row(r.coefficients().as_slice()));
            }
            text
        }
        _ => {
            return Err(Error::InvalidConfig(
                "give exactly one of --window or an input file".into(),
            )
            .into())
        }
    };
    emit(a.out.as_deref(), &text)
}

fn design(a: DesignArgs) -> Result<(), Failure> {
    let spec = DifferentiatorSpec::new(a.order, DerivDegree::from_u32(a.degree)?, a.passband)?;
    let f = design_differentiator(&spec);
    let mut text = String::new();
    for t in f.taps() {
        let _ = writeln!(text, "{t}");
    }
    emit(a.out.as_deref(), &text)
}

fn run_stream(mut r: Resampler, stream: &StreamArgs) -> Result<(), Failure> {
    let (in_fmt, out_fmt) = stream.formats()?;
    let signal = read_signal(&stream.input, in_fmt)?;
    let out = r.process(&signal.samples);
    let samples: Vec<f64> = out
        .into_iter()
        .filter(|o| stream.keep_transient || !o.transient)
        .map(|o| o.value)
        .collect();
    let rate = match r.ratio() {
        Some(ratio) => {
            (u64::from(signal.sample_rate) * ratio.p() / ratio.q()).min(u64::from(u32::MAX)) as u32
        }
        None => signal.sample_rate,
    };
    write_signal(&Signal::new(samples, rate), &stream.output, out_fmt)?;
    Ok(())
}

fn delay(a: DelayArgs) -> Result<(), Failure> {
    let cfg = a.filter.config()?.with_delay(a.mu);
    let r = make_resampler(&cfg)?;
    run_stream(r, &a.stream)
}

fn resample(a: ResampleArgs) -> Result<(), Failure> {
    let ratio: Ratio = a.ratio.parse()?;
    let cfg = a.filter.config()?.with_ratio(ratio);
    let r = make_resampler(&cfg)?;
    run_stream(r, &a.stream)
}

fn spectrum_csv(s: &SpectrumAnalysis) -> String {
    let mut text = String::from("freq_fd,mag_db,group_delay\n");
    for i in 0..s.len() {
        text.push_str(&csv_row(&[s.freq[i], s.magnitude_db[i], s.group_delay[i]]));
    }
    text
}

fn analyze(a: AnalyzeArgs) -> Result<(), Failure> {
    let cfg = a.filter.config()?;
    let text = if let Some(mu) = a.mu {
        spectrum_csv(&crate::analysis::group_delay_with(
            &cfg,
            mu,
            &default_grid(4096),
        )?)
    } else {
        let h = crate::analysis::impulse_response_with(&cfg, a.oversample)?;
        if a.impulse {
            let mut text = String::from("t,h\n");
            for (j, v) in h.samples.iter().enumerate() {
                text.push_str(&csv_row(&[h.time(j), *v]));
            }
            text
        } else {
            spectrum_csv(&frequency_response(&h, a.nfft)?)
        }
    };
    emit(a.out.as_deref(), &text)
}

/// Per-kind results of the comparison matrix.
struct KindReport {
    kind: InterpolatorKind,
    response: SpectrumAnalysis,
    impulse: Vec<(f64, f64)>,
    delays: Vec<(f64, SpectrumAnalysis)>,
    sidelobe: f64,
    suppression: f64,
    flat: f64,
}

const BENCH_DELAYS: [f64; 6] = [0.0, 0.1, 0.25, 0.5, 0.75, 0.9];

fn bench_kind(kind: InterpolatorKind, a: &BenchArgs) -> Result<KindReport, Error> {
    let h = impulse_response(kind, a.response_order, a.oversample)?;
    let nfft = (h.samples.len() * 64).next_power_of_two();
    let response = frequency_response(&h, nfft)?;
    let sidelobe = sidelobe_level(&response, None)?;
    let suppression = image_suppression(&response, 0.8, a.oversample)?;
    let grid = default_grid(4096);
    let delays = BENCH_DELAYS
        .iter()
        .map(|&mu| group_delay(kind, a.delay_order, mu, &grid).map(|s| (mu, s)))
        .collect::<Result<Vec<_>, _>>()?;
    let flat = delays
        .iter()
        .filter(|(mu, _)| *mu > 0.0)
        .map(|(_, s)| flat_band(s, a.tol))
        .fold(f64::INFINITY, f64::min);
    let impulse = h
        .samples
        .iter()
        .enumerate()
        .map(|(j, &v)| (h.time(j), v))
        .collect();
    Ok(KindReport {
        kind,
        response,
        impulse,
        delays,
        sidelobe,
        suppression,
        flat,
    })
}

fn bench(a: BenchArgs) -> Result<(), Failure> {
    let dir = a
        .out_dir
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    if a.oversample < 2 {
        return Err(Error::InvalidConfig("oversampling must be >= 2".into()).into());
    }
    if a.tol <= 0.0 {
        return Err(Error::InvalidConfig("tolerance must be positive".into()).into());
    }
    // each kind is an independent analysis
    let reports: Vec<Result<KindReport, Error>> = std::thread::scope(|s| {
        let handles: Vec<_> = InterpolatorKind::ALL
            .iter()
            .map(|&k| {
                let a = &a;
                s.spawn(move || bench_kind(k, a))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("analysis thread panicked"))
            .collect()
    });
    let reports = reports.into_iter().collect::<Result<Vec<_>, _>>()?;

    let mut response = String::from("kind,freq_fd,mag_db,group_delay\n");
    let mut impulse = String::from("kind,t,h\n");
    let mut delay = String::from("kind,mu,freq_fd,group_delay\n");
    let mut summary = String::from("kind,sidelobe_db,image_suppression_db,flat_band_fd\n");
    for r in &reports {
        let k = r.kind.name();
        for i in 0..r.response.len() {
            let row = csv_row(&[
                r.response.freq[i],
                r.response.magnitude_db[i],
                r.response.group_delay[i],
            ]);
            let _ = write!(response, "{k},{row}");
        }
        for (t, h) in &r.impulse {
            let _ = write!(impulse, "{k},{}", csv_row(&[*t, *h]));
        }
        for (mu, s) in &r.delays {
            for i in 0..s.len() {
                let _ = write!(
                    delay,
                    "{k},{}",
                    csv_row(&[*mu, s.freq[i], s.group_delay[i]])
                );
            }
        }
        let _ = write!(
            summary,
            "{k},{}",
            csv_row(&[r.sidelobe, r.suppression, r.flat])
        );
    }
    fs::create_dir_all(&dir)?;
    fs::write(dir.join("response.csv"), response)?;
    fs::write(dir.join("impulse.csv"), impulse)?;
    fs::write(dir.join("group_delay.csv"), delay)?;
    fs::write(dir.join("summary.csv"), &summary)?;
    print!("{summary}");
    Ok(())
}
