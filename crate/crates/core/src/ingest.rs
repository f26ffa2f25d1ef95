//! Sampled-waveform front end: CSV loading, harmonic extraction and the
//! classical RMS / THD / active-power figures.
//!
//! Extraction is a rectangular-window DFT evaluated only at the bins of the
//! requested orders. The window must span an integer number of fundamental
//! periods; nothing is interpolated or windowed.

use std::f64::consts::{SQRT_2, TAU};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::phasor::{reconstruct, BasisLayout, HarmonicComponent, SpectralSignal};

/// How far the period count may sit from an integer before it is rejected.
const PERIOD_TOLERANCE: f64 = 1e-6;

/// Components below this fraction of the waveform RMS are treated as absent.
const RELATIVE_FLOOR: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Voltage,
    Current,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampledWaveform {
    pub samples: Vec<f64>,
    pub sample_rate_hz: f64,
    pub label: Quantity,
}

impl SampledWaveform {
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64, label: Quantity) -> Result<Self> {
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::InvalidWaveform(format!(
                "sample rate must be positive, got {sample_rate_hz}"
            )));
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidWaveform("non-finite sample".into()));
        }
        Ok(SampledWaveform {
            samples,
            sample_rate_hz,
            label,
        })
    }

    /// Samples `signal` at `t0 + n / fs` for `n` in `0..len`.
    pub fn synthesize(
        signal: &SpectralSignal,
        sample_rate_hz: f64,
        len: usize,
        t0: f64,
        label: Quantity,
    ) -> Result<Self> {
        let times: Vec<f64> = (0..len).map(|n| t0 + n as f64 / sample_rate_hz).collect();
        SampledWaveform::new(reconstruct(signal, &times), sample_rate_hz, label)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    /// Sample instants relative to the window start.
    pub fn times(&self) -> Vec<f64> {
        (0..self.samples.len())
            .map(|n| n as f64 / self.sample_rate_hz)
            .collect()
    }

    /// Number of fundamental periods covered by the window.
    pub fn periods(&self, fundamental_hz: f64) -> f64 {
        self.samples.len() as f64 * fundamental_hz / self.sample_rate_hz
    }
}

fn parse_header(line: &str) -> Result<f64> {
    let bad = || Error::Parse {
        line: 1,
        message: format!("expected header '# fs_hz=<rate>', found {line:?}"),
    };
    let rest = line.trim().strip_prefix('#').ok_or_else(bad)?;
    let value = rest
        .trim()
        .strip_prefix("fs_hz")
        .ok_or_else(bad)?
        .trim_start();
    let value = value.strip_prefix('=').ok_or_else(bad)?.trim();
    let fs: f64 = value.parse().map_err(|_| Error::Parse {
        line: 1,
        message: format!("invalid sample rate {value:?}"),
    })?;
    if !(fs.is_finite() && fs > 0.0) {
        return Err(Error::Parse {
            line: 1,
            message: format!("sample rate must be positive, got {fs}"),
        });
    }
    Ok(fs)
}

/// Reads a `# fs_hz=<rate>` header followed by `u,i` rows. An optional
/// literal `u,i` column-name row is accepted before the data.
pub fn load_csv<R: Read>(mut source: R) -> Result<(SampledWaveform, SampledWaveform)> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    let header = text
        .lines()
        .next()
        .filter(|l| !l.trim().is_empty())
        .ok_or(Error::Parse {
            line: 1,
            message: "empty input".into(),
        })?;
    let fs = parse_header(header)?;

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut u = Vec::new();
    let mut i = Vec::new();
    for (n, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 columns (u,i), found {}", record.len()),
            });
        }
        if n == 0 && record[0].eq_ignore_ascii_case("u") && record[1].eq_ignore_ascii_case("i") {
            continue;
        }
        let field = |k: usize| -> Result<f64> {
            record[k]
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Parse {
                    line,
                    message: format!("non-numeric field {:?}", &record[k]),
                })
        };
        u.push(field(0)?);
        i.push(field(1)?);
    }
    if u.is_empty() {
        return Err(Error::Parse {
            line: 2,
            message: "no samples".into(),
        });
    }
    Ok((
        SampledWaveform::new(u, fs, Quantity::Voltage)?,
        SampledWaveform::new(i, fs, Quantity::Current)?,
    ))
}

pub fn load_csv_path(path: impl AsRef<Path>) -> Result<(SampledWaveform, SampledWaveform)> {
    load_csv(File::open(path)?)
}

/// Writes a waveform pair in the format read by [`load_csv`].
pub fn write_csv<W: Write>(u: &SampledWaveform, i: &SampledWaveform, mut out: W) -> Result<()> {
    if u.len() != i.len() {
        return Err(Error::LengthMismatch(u.len(), i.len()));
    }
    writeln!(out, "# fs_hz={}", u.sample_rate_hz)?;
    for (a, b) in u.samples.iter().zip(&i.samples) {
        writeln!(out, "{a},{b}")?;
    }
    Ok(())
}

/// Extracts DC and harmonics `1..=max_order`.
pub fn dft_extract(
    w: &SampledWaveform,
    fundamental_hz: f64,
    max_order: usize,
) -> Result<SpectralSignal> {
    dft_extract_layout(w, fundamental_hz, &BasisLayout::harmonics(max_order)?)
}

/// Extracts DC and every slot of `layout`, inter-harmonics included (their
/// frequency must fall on a DFT bin).
pub fn dft_extract_layout(
    w: &SampledWaveform,
    fundamental_hz: f64,
    layout: &BasisLayout,
) -> Result<SpectralSignal> {
    if !(fundamental_hz.is_finite() && fundamental_hz > 0.0) {
        return Err(Error::InvalidWaveform(format!(
            "fundamental must be positive, got {fundamental_hz}"
        )));
    }
    let n = w.len();
    let periods = w.periods(fundamental_hz);
    let whole = periods.round();
    if (periods - whole).abs() > PERIOD_TOLERANCE {
        return Err(Error::NonIntegerPeriods(periods));
    }
    if whole < 2.0 {
        return Err(Error::InvalidWaveform(format!(
            "window spans {periods} periods; at least 2 are required"
        )));
    }

    let floor = RELATIVE_FLOOR * rms(w);
    let dc = w.samples.iter().sum::<f64>() / n as f64;
    let mut signal = SpectralSignal::new(
        fundamental_hz,
        if dc.abs() > floor { dc } else { 0.0 },
        Vec::new(),
    );

    for slot in layout.slots() {
        let bin_f = slot.order * whole;
        let bin = bin_f.round();
        if (bin_f - bin).abs() > PERIOD_TOLERANCE {
            return Err(Error::InvalidWaveform(format!(
                "order {} does not fall on a DFT bin",
                slot.order
            )));
        }
        let bin = bin as usize;
        if 2 * bin >= n {
            return Err(Error::InvalidWaveform(format!(
                "order {} is at or above Nyquist ({} samples per window)",
                slot.order, n
            )));
        }
        let (mut c, mut s) = (0.0, 0.0);
        for (m, x) in w.samples.iter().enumerate() {
            // reduce the phase index exactly before converting to an angle
            let angle = TAU * ((bin * m) % n) as f64 / n as f64;
            let (sin, cos) = angle.sin_cos();
            c += x * cos;
            s += x * sin;
        }
        let scale = SQRT_2 / n as f64;
        let h = HarmonicComponent::from_pair(slot.order, c * scale, s * scale);
        if h.rms <= floor {
            continue;
        }
        if slot.order.fract() == 0.0 {
            signal.harmonics.push(h);
        } else {
            signal.interharmonics.push(h);
        }
    }
    Ok(signal)
}

/// Root mean square of the samples (zero for an empty waveform).
pub fn rms(w: &SampledWaveform) -> f64 {
    if w.is_empty() {
        return 0.0;
    }
    (w.samples.iter().map(|x| x * x).sum::<f64>() / w.len() as f64).sqrt()
}

/// `sqrt(Σ_{k≥2} X_k²) / X_1` over integer harmonics.
pub fn thd(signal: &SpectralSignal) -> Result<f64> {
    let fundamental = signal
        .harmonic(1)
        .map(|h| h.rms)
        .filter(|r| *r > 0.0)
        .ok_or(Error::MissingFundamental)?;
    let distortion: f64 = signal
        .harmonics
        .iter()
        .filter(|h| h.order >= 2.0)
        .map(|h| h.rms * h.rms)
        .sum();
    Ok(distortion.sqrt() / fundamental)
}

/// Mean of the instantaneous power `u(t) i(t)`.
pub fn active_power(u: &SampledWaveform, i: &SampledWaveform) -> Result<f64> {
    if u.len() != i.len() {
        return Err(Error::LengthMismatch(u.len(), i.len()));
    }
    if u.is_empty() {
        return Err(Error::InvalidWaveform("no samples".into()));
    }
    Ok(u.samples
        .iter()
        .zip(&i.samples)
        .map(|(a, b)| a * b)
        .sum::<f64>()
        / u.len() as f64)
}
