use std::fs;
use std::path::{Path, PathBuf};

use farrow::analysis::{image_suppression, SpectrumAnalysis};
use farrow::cli::{run, EXIT_CONFIG, EXIT_FORMAT, EXIT_IO, EXIT_OK, EXIT_USAGE};
use farrow::engine::{make_resampler, Ratio, ResamplerConfig};
use farrow::signal_io::{decode_raw, encode_raw, read_signal, write_signal, Signal, SignalFormat};
use farrow::spline::InterpolatorKind;
use tempfile::TempDir;

fn farrow(args: &[&str]) -> i32 {
    run(std::iter::once("farrow").chain(args.iter().copied()))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn signal(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| 0.6 * (k as f64 * 0.07).sin() + 0.2 * (k as f64 * 0.31).cos())
        .collect()
}

fn raw_input(dir: &TempDir, x: &[f64]) -> PathBuf {
    let p = dir.path().join("in.f64");
    fs::write(&p, encode_raw(x)).unwrap();
    p
}

fn read_raw(p: &Path) -> Vec<f64> {
    decode_raw(&fs::read(p).unwrap()).unwrap()
}

#[test]
fn resample_matches_library_engine() {
    let dir = TempDir::new().unwrap();
    let x = signal(300);
    let input = raw_input(&dir, &x);
    let out = dir.path().join("out.f64");
    assert_eq!(
        farrow(&[
            "resample",
            "--ratio",
            "2/1",
            "--kind",
            "hs3",
            s(&input),
            s(&out)
        ]),
        EXIT_OK
    );
    let y = read_raw(&out);

    let cfg = ResamplerConfig::new(InterpolatorKind::Hs3, 32).with_ratio(Ratio::new(2, 1).unwrap());
    let mut r = make_resampler(&cfg).unwrap();
    let want: Vec<f64> = r
        .process(&x)
        .into_iter()
        .filter(|o| !o.transient)
        .map(|o| o.value)
        .collect();
    assert_eq!(y, want);
    let l = r.latency();
    assert_eq!(y.len(), 2 * x.len() - 2 * (l + 2));
}

#[test]
fn keep_transient_retains_startup_outputs() {
    let dir = TempDir::new().unwrap();
    let x = signal(100);
    let input = raw_input(&dir, &x);
    let out = dir.path().join("out.f64");
    assert_eq!(
        farrow(&[
            "delay",
            "--mu",
            "0.3",
            "--keep-transient",
            s(&input),
            s(&out)
        ]),
        EXIT_OK
    );
    assert_eq!(read_raw(&out).len(), x.len());
}

#[test]
fn zero_delay_is_an_integer_shift() {
    let dir = TempDir::new().unwrap();
    let x = signal(200);
    let input = raw_input(&dir, &x);
    let out = dir.path().join("out.f64");
    assert_eq!(
        farrow(&["delay", "--mu", "0", "--kind", "lp3", s(&input), s(&out)]),
        EXIT_OK
    );
    let l = 2;
    assert_eq!(read_raw(&out), x[2..x.len() - l].to_vec());
}

#[test]
fn analyze_reports_hs7_image_rejection() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("response.csv");
    let code = farrow(&[
        "analyze",
        "--kind",
        "hs7",
        "--diff-order",
        "32",
        "--oversample",
        "8",
        "--out",
        s(&out),
    ]);
    assert_eq!(code, EXIT_OK);
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("freq_fd,mag_db,group_delay"));
    let (mut f, mut m, mut g) = (Vec::new(), Vec::new(), Vec::new());
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        f.push(v[0]);
        m.push(v[1]);
        g.push(v[2]);
    }
    let spectrum = SpectrumAnalysis::new(f, m, g).unwrap();
    assert!(image_suppression(&spectrum, 0.8, 8).unwrap() >= 60.0);
}

#[test]
fn analyze_impulse_and_delay_modes() {
    let dir = TempDir::new().unwrap();
    let imp = dir.path().join("imp.csv");
    assert_eq!(
        farrow(&["analyze", "--impulse", "--kind", "lp3", "--out", s(&imp)]),
        EXIT_OK
    );
    let text = fs::read_to_string(&imp).unwrap();
    assert!(text.starts_with("t,h\n"));
    assert!(text.lines().any(|l| l == "0,1"));

    let gd = dir.path().join("gd.csv");
    assert_eq!(
        farrow(&[
            "analyze",
            "--mu",
            "0.5",
            "--kind",
            "hs3",
            "--diff-order",
            "48",
            "--out",
            s(&gd)
        ]),
        EXIT_OK
    );
    let rows = fs::read_to_string(&gd).unwrap().lines().count();
    assert_eq!(rows, 4097);
}

#[test]
fn coeffs_for_a_single_window() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("c.csv");
    let code = farrow(&[
        "coeffs",
        "--kind",
        "hs3",
        "--window",
        "0,1,0,0,0,0,0,0",
        "--out",
        s(&out),
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(fs::read_to_string(&out).unwrap(), "1,0,-3,-2\n");
}

#[test]
fn design_diff_writes_taps() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("taps.txt");
    assert_eq!(
        farrow(&["design-diff", "--order", "16", "--out", s(&out)]),
        EXIT_OK
    );
    let taps: Vec<f64> = fs::read_to_string(&out)
        .unwrap()
        .lines()
        .map(|l| l.parse().unwrap())
        .collect();
    assert_eq!(taps.len(), 17);
    assert_eq!(taps[8], 0.0);
    assert!((0..17).all(|i| taps[i] == -taps[16 - i]));
}

#[test]
fn bench_writes_all_tables() {
    let dir = TempDir::new().unwrap();
    let code = farrow(&[
        "bench",
        "--out-dir",
        s(dir.path()),
        "--response-order",
        "16",
        "--delay-order",
        "16",
    ]);
    assert_eq!(code, EXIT_OK);
    for name in [
        "response.csv",
        "impulse.csv",
        "group_delay.csv",
        "summary.csv",
    ] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 5);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let input = raw_input(&dir, &signal(50));
    let out = dir.path().join("out.f64");
    let missing = dir.path().join("missing.f64");
    let truncated = dir.path().join("bad.f64");
    fs::write(&truncated, [0u8; 13]).unwrap();

    assert_eq!(
        farrow(&["delay", "--mu", "0.2", "--bogus", s(&input), s(&out)]),
        EXIT_USAGE
    );
    assert_eq!(farrow(&["resample", s(&input), s(&out)]), EXIT_USAGE);
    assert_eq!(
        farrow(&["resample", "--ratio", "3:2", s(&input), s(&out)]),
        EXIT_CONFIG
    );
    assert_eq!(
        farrow(&["resample", "--ratio", "0/2", s(&input), s(&out)]),
        EXIT_CONFIG
    );
    assert_eq!(
        farrow(&["delay", "--mu", "1.5", s(&input), s(&out)]),
        EXIT_CONFIG
    );
    assert_eq!(
        farrow(&["delay", "--mu", "0.2", "--kind", "hs9", s(&input), s(&out)]),
        EXIT_CONFIG
    );
    assert_eq!(
        farrow(&[
            "delay",
            "--mu",
            "0.2",
            "--diff-order",
            "31",
            s(&input),
            s(&out)
        ]),
        EXIT_CONFIG
    );
    assert_eq!(
        farrow(&["delay", "--mu", "0.2", s(&missing), s(&out)]),
        EXIT_IO
    );
    assert_eq!(
        farrow(&["delay", "--mu", "0.2", s(&truncated), s(&out)]),
        EXIT_FORMAT
    );
    assert!(!out.exists(), "no output may be written on failure");

    let unwritable = dir.path().join("no_such_dir").join("out.f64");
    assert_eq!(
        farrow(&["delay", "--mu", "0.2", s(&input), s(&unwritable)]),
        EXIT_IO
    );
}

#[test]
fn format_mismatch_is_a_format_error() {
    let dir = TempDir::new().unwrap();
    let wav = dir.path().join("in.wav");
    write_signal(
        &Signal::new(signal(64), 44_100),
        &wav,
        SignalFormat::WavFloat32,
    )
    .unwrap();
    let out = dir.path().join("out.wav");
    assert_eq!(
        farrow(&["delay", "--mu", "0.2", s(&wav), s(&out)]),
        EXIT_FORMAT
    );
    assert!(!out.exists());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let input = raw_input(&dir, &signal(1000));
    let outs: Vec<Vec<u8>> = ["a.f64", "b.f64"]
        .iter()
        .map(|name| {
            let out = dir.path().join(name);
            let code = farrow(&[
                "resample",
                "--ratio",
                "147/160",
                "--kind",
                "hs7",
                s(&input),
                s(&out),
            ]);
            assert_eq!(code, EXIT_OK);
            fs::read(out).unwrap()
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn wav_streams_round_trip() {
    let dir = TempDir::new().unwrap();
    let x = signal(300);
    for (format, tol) in [
        (SignalFormat::WavPcm16, 1.0 / 32768.0),
        (SignalFormat::WavFloat32, 1e-7),
    ] {
        let input = dir.path().join(format!("in-{format}.wav"));
        let out = dir.path().join(format!("out-{format}.wav"));
        write_signal(&Signal::new(x.clone(), 22_050), &input, format).unwrap();
        let code = farrow(&[
            "delay",
            "--mu",
            "0",
            "--kind",
            "lp3",
            "--format",
            format.name(),
            s(&input),
            s(&out),
        ]);
        assert_eq!(code, EXIT_OK);
        let y = read_signal(&out, format).unwrap();
        assert_eq!(y.sample_rate, 22_050);
        for (a, b) in y.samples.iter().zip(&x[2..]) {
            assert!((a - b).abs() <= tol, "{format}: {a} vs {b}");
        }
    }
}

#[test]
fn csv_output_format() {
    let dir = TempDir::new().unwrap();
    let x = signal(40);
    let input = raw_input(&dir, &x);
    let out = dir.path().join("out.csv");
    let code = farrow(&[
        "delay",
        "--mu",
        "0",
        "--kind",
        "lp3",
        "--out-format",
        "csv",
        s(&input),
        s(&out),
    ]);
    assert_eq!(code, EXIT_OK);
    let y = read_signal(&out, SignalFormat::Csv).unwrap().samples;
    assert_eq!(y, x[2..x.len() - 2].to_vec());
}
