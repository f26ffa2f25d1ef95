#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use geopower::circuit::SeriesRlc;
use geopower::ingest::{write_csv, Quantity, SampledWaveform};
use geopower::phasor::{HarmonicComponent, SpectralSignal};

/// ω = 1 rad/s.
pub const UNIT_OMEGA_HZ: f64 = 1.0 / (2.0 * std::f64::consts::PI);

pub const LOAD_FS: f64 = 15_625.0;
pub const LOAD_SAMPLES: usize = 3125;

pub fn rlc_load(c_farad: f64) -> SeriesRlc {
    SeriesRlc::new(1.0, 0.5, Some(c_farad))
}

/// `u = 100σ2 + 100σ6`: first and third harmonic, 100 V rms, zero phase.
pub fn twin_harmonic_source() -> SpectralSignal {
    SpectralSignal::new(
        UNIT_OMEGA_HZ,
        0.0,
        vec![
            HarmonicComponent::new(1.0, 100.0, 0.0),
            HarmonicComponent::new(3.0, 100.0, 0.0),
        ],
    )
}

fn odd_harmonics(pairs: [(f64, f64); 5]) -> SpectralSignal {
    let harmonics = [1.0, 3.0, 5.0, 7.0, 9.0]
        .iter()
        .zip(pairs)
        .map(|(&k, (rms, phase))| HarmonicComponent::new(k, rms, phase))
        .collect();
    SpectralSignal::new(50.0, 0.0, harmonics)
}

pub fn load_voltage() -> SpectralSignal {
    odd_harmonics([
        (233.92, -1.57),
        (0.46, -2.61),
        (4.74, 1.28),
        (4.02, -0.07),
        (0.42, -2.60),
    ])
}

pub fn load_current() -> SpectralSignal {
    odd_harmonics([
        (2.33, -0.72),
        (0.93, 1.85),
        (0.45, -1.69),
        (0.49, 1.70),
        (0.16, -1.44),
    ])
}

/// Ten fundamental periods of the load pair sampled at 15.625 kHz.
pub fn load_waveforms() -> (SampledWaveform, SampledWaveform) {
    let u = SampledWaveform::synthesize(
        &load_voltage(),
        LOAD_FS,
        LOAD_SAMPLES,
        0.0,
        Quantity::Voltage,
    )
    .unwrap();
    let i = SampledWaveform::synthesize(
        &load_current(),
        LOAD_FS,
        LOAD_SAMPLES,
        0.0,
        Quantity::Current,
    )
    .unwrap();
    (u, i)
}

pub fn write_load_csv(dir: &Path) -> PathBuf {
    let (u, i) = load_waveforms();
    let path = dir.join("load.csv");
    write_csv(&u, &i, std::fs::File::create(&path).unwrap()).unwrap();
    path
}

pub fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path
}

pub fn geopower<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_geopower"))
        .args(args)
        .output()
        .unwrap()
}

pub fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Parses a decomposition CSV into `(basis, [i_p, i_a, i_s, i_q, i_g, i_n, i])` rows.
pub fn decomposition_rows(csv_text: &str) -> Vec<(String, [f64; 7])> {
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["basis", "i_p", "i_a", "i_s", "i_q", "i_g", "i_n", "i"]
    );
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            let mut v = [0.0; 7];
            for (k, x) in v.iter_mut().enumerate() {
                *x = r[k + 1].parse().unwrap();
            }
            (r[0].to_string(), v)
        })
        .collect()
}
