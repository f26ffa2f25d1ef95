//! Command pipelines behind the `geopower` binary.
//!
//! Each command has a compute step returning plain values and a render step
//! producing JSON, CSV or aligned text. Rendering rounds every number to six
//! significant digits, so identical inputs give identical bytes.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use geopower::circuit::{admittances_for, solve_current, HarmonicAdmittance, SeriesRlc};
use geopower::decompose::{
    compensation_susceptances, decompose, decompose_with, CurrentComponents,
};
use geopower::ingest::{self, SampledWaveform};
use geopower::phasor::{
    from_phasor, reconstruct, to_phasor, BasisLayout, GeometricPhasor, SpectralSignal,
};
use geopower::power::{geometric_power, harmonic_pq, GeometricPower, HarmonicPq};
use geopower::report::{
    decomposition_table, fmt_num, harmonic_power_table, sig6, snap, spectrum_table,
    CurrentNormsReport, PowerReport, Table,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{context}{source}")]
    Compute {
        context: String,
        source: geopower::Error,
    },
}

impl CliError {
    /// 1 for computation errors, 2 for usage, IO and input-format errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute {
                source: geopower::Error::Parse { .. } | geopower::Error::Io(_),
                ..
            } => 2,
            CliError::Compute { .. } => 1,
            _ => 2,
        }
    }
}

impl From<geopower::Error> for CliError {
    fn from(source: geopower::Error) -> Self {
        CliError::Compute {
            context: String::new(),
            source,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Parser)]
#[command(
    name = "geopower",
    version,
    about = "Geometric-algebra power analysis of single-phase circuits"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
    /// Output file (a directory for `analyze --format csv`). Defaults to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a series RLC circuit fed by a non-sinusoidal source.
    Solve {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        source: PathBuf,
    },
    /// Analyze sampled voltage/current waveforms from a CSV file.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        fundamental: f64,
        /// Highest integer harmonic order to extract.
        #[arg(long)]
        orders: usize,
        /// Comma-separated non-integer orders to extract as well.
        #[arg(long, value_delimiter = ',')]
        interharmonics: Vec<f64>,
    },
    /// Decompose a current spectrum against a voltage spectrum.
    Decompose {
        #[arg(long)]
        voltage: PathBuf,
        #[arg(long)]
        current: PathBuf,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisConfig {
    pub fundamental_hz: f64,
    pub max_order: usize,
    pub interharmonic_orders: Vec<f64>,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.max_order < 1 {
            return Err(CliError::Usage("--orders must be at least 1".into()));
        }
        if !(self.fundamental_hz.is_finite() && self.fundamental_hz > 0.0) {
            return Err(CliError::Usage(
                "--fundamental must be a positive frequency".into(),
            ));
        }
        Ok(())
    }

    pub fn layout(&self) -> Result<BasisLayout, CliError> {
        let mut inter = self.interharmonic_orders.clone();
        inter.sort_by(f64::total_cmp);
        BasisLayout::new(self.max_order, inter).map_err(|e| CliError::Usage(e.to_string()))
    }
}

/// Everything computed for one voltage/current pair.
#[derive(Clone, Debug)]
pub struct PowerAnalysis {
    pub u: GeometricPhasor,
    pub i: GeometricPhasor,
    pub power: GeometricPower,
    pub pq: Vec<HarmonicPq>,
    pub components: CurrentComponents,
    pub admittances: Vec<HarmonicAdmittance>,
}

impl PowerAnalysis {
    fn new(
        u: GeometricPhasor,
        i: GeometricPhasor,
        admittances: Vec<HarmonicAdmittance>,
    ) -> geopower::Result<Self> {
        let power = geometric_power(&u, &i)?;
        let pq = harmonic_pq(&u, &i)?;
        let components = decompose_with(&u, &i, &admittances)?;
        Ok(PowerAnalysis {
            u,
            i,
            power,
            pq,
            components,
            admittances,
        })
    }

    /// Circuit route: current from the admittances of `net`.
    pub fn from_circuit(net: &SeriesRlc, source: &SpectralSignal) -> geopower::Result<Self> {
        let layout = BasisLayout::covering([source])?;
        let u = to_phasor(source, &layout)?;
        let i = solve_current(&u, net)?;
        let y = admittances_for(&u, net)?;
        PowerAnalysis::new(u, i, y)
    }

    /// Measurement route: admittances estimated per plane from the data.
    pub fn from_phasors(u: GeometricPhasor, i: GeometricPhasor) -> geopower::Result<Self> {
        let components = decompose(&u, &i)?;
        let admittances = geopower::decompose::estimate_admittances(&u, &i)?;
        let power = geometric_power(&u, &i)?;
        let pq = harmonic_pq(&u, &i)?;
        Ok(PowerAnalysis {
            u,
            i,
            power,
            pq,
            components,
            admittances,
        })
    }

    pub fn report(&self) -> PowerReport {
        PowerReport::new(&self.power, &self.pq)
    }
}

/// Waveform analysis: classical figures plus the geometric analysis.
#[derive(Clone, Debug)]
pub struct WaveformAnalysis {
    pub u_wave: SampledWaveform,
    pub i_wave: SampledWaveform,
    pub u_spectrum: SpectralSignal,
    pub i_spectrum: SpectralSignal,
    pub rms_u: f64,
    pub rms_i: f64,
    pub thd_u: Option<f64>,
    pub thd_i: Option<f64>,
    pub p_samples_w: f64,
    pub analysis: PowerAnalysis,
}

pub fn analyze_waveforms(
    u_wave: SampledWaveform,
    i_wave: SampledWaveform,
    cfg: &AnalysisConfig,
) -> Result<WaveformAnalysis, CliError> {
    cfg.validate()?;
    let layout = cfg.layout()?;
    let u_spectrum = ingest::dft_extract_layout(&u_wave, cfg.fundamental_hz, &layout)?;
    let i_spectrum = ingest::dft_extract_layout(&i_wave, cfg.fundamental_hz, &layout)?;
    let u = to_phasor(&u_spectrum, &layout)?;
    let i = to_phasor(&i_spectrum, &layout)?;
    Ok(WaveformAnalysis {
        rms_u: ingest::rms(&u_wave),
        rms_i: ingest::rms(&i_wave),
        thd_u: ingest::thd(&u_spectrum).ok(),
        thd_i: ingest::thd(&i_spectrum).ok(),
        p_samples_w: ingest::active_power(&u_wave, &i_wave)?,
        analysis: PowerAnalysis::from_phasors(u, i)?,
        u_wave,
        i_wave,
        u_spectrum,
        i_spectrum,
    })
}

pub fn decompose_spectra(
    voltage: &SpectralSignal,
    current: &SpectralSignal,
) -> Result<PowerAnalysis, CliError> {
    if (voltage.fundamental_hz - current.fundamental_hz).abs() > 1e-12 * voltage.fundamental_hz {
        return Err(geopower::Error::LayoutMismatch.into());
    }
    let layout = BasisLayout::covering([voltage, current])?;
    let u = to_phasor(voltage, &layout)?;
    let i = to_phasor(current, &layout)?;
    Ok(PowerAnalysis::from_phasors(u, i)?)
}

// ---- JSON documents ----

#[derive(Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientRow {
    pub index: usize,
    pub i_p: f64,
    pub i_a: f64,
    pub i_s: f64,
    pub i_q: f64,
    pub i_g: f64,
    pub i_n: f64,
    pub i: f64,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurrentsReport {
    pub norms: CurrentNormsReport,
    pub coefficients: Vec<CoefficientRow>,
}

impl From<&CurrentComponents> for CurrentsReport {
    fn from(c: &CurrentComponents) -> Self {
        let scale = c.i.norm();
        let r = |p: &GeometricPhasor, k: usize| sig6(snap(p.coeff(k), scale));
        let coefficients = (0..c.i.layout().dimension())
            .map(|k| CoefficientRow {
                index: k,
                i_p: r(&c.i_p, k),
                i_a: r(&c.i_a, k),
                i_s: r(&c.i_s, k),
                i_q: r(&c.i_q, k),
                i_g: r(&c.i_g, k),
                i_n: r(&c.i_n, k),
                i: r(&c.i, k),
            })
            .collect();
        CurrentsReport {
            norms: c.into(),
            coefficients,
        }
    }
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompensationRow {
    pub order: f64,
    pub susceptance_s: f64,
}

/// `‖u i_s‖` and `‖u i_q‖`, kept apart because they have no physical meaning.
#[derive(Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuxiliaryPowers {
    pub note: String,
    pub scattered_va: f64,
    pub quadrature_va: f64,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisDocument {
    pub voltage: SpectralSignal,
    pub current: SpectralSignal,
    pub power: PowerReport,
    pub currents: CurrentsReport,
    pub compensation: Vec<CompensationRow>,
    pub auxiliary: AuxiliaryPowers,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementSummary {
    pub rms_u: f64,
    pub rms_i: f64,
    pub thd_u: Option<f64>,
    pub thd_i: Option<f64>,
    pub p_samples_w: f64,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveformDocument {
    pub measurement: MeasurementSummary,
    pub analysis: AnalysisDocument,
}

fn rounded(s: &SpectralSignal) -> SpectralSignal {
    let round = |h: &geopower::HarmonicComponent| {
        geopower::HarmonicComponent::new(
            h.order,
            sig6(h.rms),
            sig6(snap(h.phase_rad, std::f64::consts::PI)),
        )
    };
    SpectralSignal {
        fundamental_hz: sig6(s.fundamental_hz),
        dc: sig6(s.dc),
        harmonics: s.harmonics.iter().map(round).collect(),
        interharmonics: s.interharmonics.iter().map(round).collect(),
    }
}

impl PowerAnalysis {
    pub fn document(&self) -> geopower::Result<AnalysisDocument> {
        let c = &self.components;
        let va = self.power.apparent();
        Ok(AnalysisDocument {
            voltage: rounded(&from_phasor(&self.u)),
            current: rounded(&from_phasor(&self.i)),
            power: self.report(),
            currents: c.into(),
            compensation: compensation_susceptances(&self.admittances)
                .into_iter()
                .map(|(order, b)| CompensationRow {
                    order,
                    susceptance_s: sig6(b),
                })
                .collect(),
            auxiliary: AuxiliaryPowers {
                note: "M_s = u i_s and M_q = u i_q have no physical meaning".into(),
                scattered_va: sig6(snap(c.scattered_power(&self.u)?.norm(), va)),
                quadrature_va: sig6(snap(c.quadrature_power(&self.u)?.norm(), va)),
            },
        })
    }

    fn summary_text(&self) -> String {
        let m = &self.power;
        let pf = m
            .power_factor()
            .map(fmt_num)
            .unwrap_or_else(|_| "n/a".into());
        let mut s = String::new();
        s.push_str(&format!("M   = {}\n", self.rounded_power()));
        s.push_str(&format!("P   = {} W\n", fmt_num(m.active())));
        s.push_str(&format!("|M| = {} VA\n", fmt_num(m.apparent())));
        s.push_str(&format!("pf  = {pf}\n"));
        s
    }

    fn rounded_power(&self) -> geopower::Multivector {
        let scale = self.power.apparent();
        let terms = self
            .power
            .mv()
            .terms()
            .map(|(b, c)| (b, sig6(snap(c, scale))));
        geopower::Multivector::from_terms(self.power.mv().dim(), terms).expect("same blades")
    }

    fn text(&self) -> Result<String, CliError> {
        let mut s = self.summary_text();
        s.push('\n');
        s.push_str(&harmonic_power_table(&self.pq).to_text());
        s.push('\n');
        s.push_str(&decomposition_table(&self.components).to_text());
        Ok(s)
    }
}

/// Time series for plotting: measured u, i, p and the reconstructed active and
/// non-active currents.
pub fn series_table(w: &WaveformAnalysis) -> Table {
    let times = w.u_wave.times();
    let i_a = reconstruct(&from_phasor(&w.analysis.components.i_a), &times);
    let i_n = reconstruct(&from_phasor(&w.analysis.components.i_n), &times);
    let mut t = Table::new(["t_s", "u", "i", "p", "i_a", "i_n"]);
    for (k, &time) in times.iter().enumerate() {
        let (u, i) = (w.u_wave.samples[k], w.i_wave.samples[k]);
        t.push(vec![
            fmt_num(time),
            fmt_num(u),
            fmt_num(i),
            fmt_num(u * i),
            fmt_num(i_a[k]),
            fmt_num(i_n[k]),
        ]);
    }
    t
}

impl WaveformAnalysis {
    pub fn document(&self) -> geopower::Result<WaveformDocument> {
        Ok(WaveformDocument {
            measurement: MeasurementSummary {
                rms_u: sig6(self.rms_u),
                rms_i: sig6(self.rms_i),
                thd_u: self.thd_u.map(sig6),
                thd_i: self.thd_i.map(sig6),
                p_samples_w: sig6(self.p_samples_w),
            },
            analysis: self.analysis.document()?,
        })
    }

    /// Named CSV sections: spectrum, power, currents, series.
    pub fn csv_sections(&self) -> geopower::Result<Vec<(&'static str, String)>> {
        Ok(vec![
            (
                "spectrum.csv",
                spectrum_table(&self.u_spectrum, &self.i_spectrum).to_csv()?,
            ),
            (
                "power.csv",
                harmonic_power_table(&self.analysis.pq).to_csv()?,
            ),
            (
                "currents.csv",
                decomposition_table(&self.analysis.components).to_csv()?,
            ),
            ("series.csv", series_table(self).to_csv()?),
        ])
    }

    fn text(&self) -> Result<String, CliError> {
        let opt = |x: Option<f64>| {
            x.map(|v| format!("{}%", fmt_num(100.0 * v)))
                .unwrap_or_else(|| "n/a".into())
        };
        let mut s = String::new();
        s.push_str(&format!(
            "RMS u = {} V, RMS i = {} A\n",
            fmt_num(self.rms_u),
            fmt_num(self.rms_i)
        ));
        s.push_str(&format!(
            "THD u = {}, THD i = {}\n",
            opt(self.thd_u),
            opt(self.thd_i)
        ));
        s.push_str(&format!(
            "P (samples) = {} W\n\n",
            fmt_num(self.p_samples_w)
        ));
        s.push_str(&spectrum_table(&self.u_spectrum, &self.i_spectrum).to_text());
        s.push('\n');
        s.push_str(&self.analysis.text()?);
        Ok(s)
    }
}

// ---- IO and dispatch ----

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.into(),
        source,
    })
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Output of one command: a single document or several named files.
#[derive(Debug, PartialEq)]
pub enum Rendered {
    Single(String),
    Files(Vec<(&'static str, String)>),
}

pub fn render_analysis(a: &PowerAnalysis, format: OutputFormat) -> Result<Rendered, CliError> {
    Ok(Rendered::Single(match format {
        OutputFormat::Json => json(&a.document()?),
        OutputFormat::Csv => decomposition_table(&a.components).to_csv()?,
        OutputFormat::Table => a.text()?,
    }))
}

pub fn render_waveforms(w: &WaveformAnalysis, format: OutputFormat) -> Result<Rendered, CliError> {
    Ok(match format {
        OutputFormat::Json => Rendered::Single(json(&w.document()?)),
        OutputFormat::Csv => Rendered::Files(w.csv_sections()?),
        OutputFormat::Table => Rendered::Single(w.text()?),
    })
}

pub fn solve_files(circuit: &Path, source: &Path) -> Result<PowerAnalysis, CliError> {
    let net: SeriesRlc = read_json(circuit)?;
    let signal: SpectralSignal = read_json(source)?;
    Ok(PowerAnalysis::from_circuit(&net, &signal)?)
}

pub fn analyze_file(input: &Path, cfg: &AnalysisConfig) -> Result<WaveformAnalysis, CliError> {
    cfg.validate()?;
    let (u, i) = ingest::load_csv_path(input).map_err(|source| CliError::Compute {
        context: format!("{}: ", input.display()),
        source,
    })?;
    analyze_waveforms(u, i, cfg)
}

pub fn decompose_files(voltage: &Path, current: &Path) -> Result<PowerAnalysis, CliError> {
    let v: SpectralSignal = read_json(voltage)?;
    let i: SpectralSignal = read_json(current)?;
    decompose_spectra(&v, &i)
}

fn write_out(out: Option<&Path>, rendered: Rendered) -> Result<Option<String>, CliError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    match (rendered, out) {
        (Rendered::Single(s), None) => Ok(Some(s)),
        (Rendered::Single(s), Some(path)) => {
            fs::write(path, s).map_err(io(path))?;
            Ok(None)
        }
        (Rendered::Files(files), None) => {
            let mut s = String::new();
            for (name, body) in files {
                s.push_str(&format!("# {name}\n{body}\n"));
            }
            Ok(Some(s))
        }
        (Rendered::Files(files), Some(dir)) => {
            fs::create_dir_all(dir).map_err(io(dir))?;
            for (name, body) in files {
                let path = dir.join(name);
                fs::write(&path, body).map_err(io(&path))?;
            }
            Ok(None)
        }
    }
}

/// Runs a parsed command line. Returns what should go to stdout.
pub fn run(cli: Cli) -> Result<Option<String>, CliError> {
    let rendered = match &cli.command {
        Command::Solve { circuit, source } => {
            render_analysis(&solve_files(circuit, source)?, cli.format)?
        }
        Command::Analyze {
            input,
            fundamental,
            orders,
            interharmonics,
        } => {
            let cfg = AnalysisConfig {
                fundamental_hz: *fundamental,
                max_order: *orders,
                interharmonic_orders: interharmonics.clone(),
                format: cli.format,
                out: cli.out.clone(),
            };
            render_waveforms(&analyze_file(input, &cfg)?, cfg.format)?
        }
        Command::Decompose { voltage, current } => {
            render_analysis(&decompose_files(voltage, current)?, cli.format)?
        }
    };
    write_out(cli.out.as_deref(), rendered)
}
