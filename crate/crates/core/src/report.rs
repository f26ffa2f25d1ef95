//! Serializable reports and plain tables. All numbers are rounded to six
//! significant digits so repeated runs produce identical bytes.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::decompose::CurrentComponents;
use crate::error::Result;
use crate::phasor::{GeometricPhasor, SpectralSignal};
use crate::power::{GeometricPower, HarmonicPq};

/// Rounds to six significant digits. Zero (of either sign) becomes `0.0`.
pub fn sig6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.5e}").parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Six significant digits; exponent notation below 1e-4 and from 1e15 up.
pub fn fmt_num(x: f64) -> String {
    let r = sig6(x);
    if r != 0.0 && (r.abs() < 1e-4 || r.abs() >= 1e15) {
        format!("{r:e}")
    } else {
        r.to_string()
    }
}

/// Values at or below `1e-9 · scale` are rounding residue and print as zero.
pub fn snap(x: f64, scale: f64) -> f64 {
    if x.abs() <= 1e-9 * scale.abs() {
        0.0
    } else {
        x
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicPowerRow {
    pub order: f64,
    pub p_w: f64,
    pub q_var: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossTerm {
    pub blade_indices: Vec<usize>,
    pub va: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerReport {
    pub p_w: f64,
    pub apparent_va: f64,
    /// `None` when the apparent power is zero.
    pub pf: Option<f64>,
    pub per_harmonic: Vec<HarmonicPowerRow>,
    pub cross_terms: Vec<CrossTerm>,
}

impl PowerReport {
    pub fn new(m: &GeometricPower, pq: &[HarmonicPq]) -> Self {
        let s = m.apparent();
        PowerReport {
            p_w: sig6(m.active()),
            apparent_va: sig6(m.apparent()),
            pf: m.power_factor().ok().map(sig6),
            per_harmonic: pq
                .iter()
                .map(|h| HarmonicPowerRow {
                    order: h.order,
                    p_w: sig6(snap(h.p, s)),
                    q_var: sig6(snap(h.q, s)),
                })
                .collect(),
            cross_terms: m
                .cross_terms()
                .into_iter()
                .filter(|&(_, c)| snap(c, s) != 0.0)
                .map(|(b, c)| CrossTerm {
                    blade_indices: b.indices().collect(),
                    va: sig6(c),
                })
                .collect(),
        }
    }
}

/// Norms of every current component, rounded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurrentNormsReport {
    pub i: f64,
    pub i_a: f64,
    pub i_n: f64,
    pub i_p: f64,
    pub i_q: f64,
    pub i_s: f64,
    pub i_g: f64,
}

impl From<&CurrentComponents> for CurrentNormsReport {
    fn from(c: &CurrentComponents) -> Self {
        let n = c.norms();
        CurrentNormsReport {
            i: sig6(n.i),
            i_a: sig6(n.i_a),
            i_n: sig6(n.i_n),
            i_p: sig6(n.i_p),
            i_q: sig6(n.i_q),
            i_s: sig6(n.i_s),
            i_g: sig6(n.i_g),
        }
    }
}

/// Header row plus string cells, rendered as CSV or an aligned text table.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).map_err(csv_io)?;
        for row in &self.rows {
            w.write_record(row).map_err(csv_io)?;
        }
        let bytes = w.into_inner().map_err(|e| csv_io(e.into_error().into()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_text(&self) -> String {
        let cols = self.headers.len();
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| -> String {
            let mut s = String::new();
            for (k, cell) in cells.iter().enumerate().take(cols) {
                if k > 0 {
                    s.push_str("  ");
                }
                let pad = widths[k] - cell.chars().count();
                if k == 0 {
                    s.push_str(cell);
                    s.extend(std::iter::repeat_n(' ', pad));
                } else {
                    s.extend(std::iter::repeat_n(' ', pad));
                    s.push_str(cell);
                }
            }
            s.trim_end().to_string()
        };
        let mut out = line(&self.headers);
        out.push('\n');
        out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * cols.saturating_sub(1)));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
            out.push('\n');
        }
        out
    }
}

fn csv_io(e: csv::Error) -> crate::error::Error {
    std::io::Error::other(e.to_string()).into()
}

/// One row per basis index with the component coefficients, then a row of
/// norms.
pub fn decomposition_table(c: &CurrentComponents) -> Table {
    let mut t = Table::new(["basis", "i_p", "i_a", "i_s", "i_q", "i_g", "i_n", "i"]);
    let cols: [&GeometricPhasor; 7] = [&c.i_p, &c.i_a, &c.i_s, &c.i_q, &c.i_g, &c.i_n, &c.i];
    let scale = c.i.norm();
    for index in 0..c.i.layout().dimension() {
        let mut row = vec![format!("σ{index}")];
        row.extend(cols.iter().map(|p| fmt_num(snap(p.coeff(index), scale))));
        t.push(row);
    }
    let mut norms = vec!["norm".to_string()];
    norms.extend(cols.iter().map(|p| fmt_num(snap(p.norm(), scale))));
    t.push(norms);
    t
}

/// Order, RMS and phase of voltage and current side by side.
pub fn spectrum_table(u: &SpectralSignal, i: &SpectralSignal) -> Table {
    let mut t = Table::new(["order", "u_rms", "u_phase_rad", "i_rms", "i_phase_rad"]);
    let mut orders: Vec<f64> = u
        .components()
        .chain(i.components())
        .map(|h| h.order)
        .collect();
    orders.sort_by(f64::total_cmp);
    orders.dedup();
    if u.dc != 0.0 || i.dc != 0.0 {
        t.push(vec![
            "0".into(),
            fmt_num(u.dc),
            "0".into(),
            fmt_num(i.dc),
            "0".into(),
        ]);
    }
    let find = |s: &SpectralSignal, o: f64| {
        s.components()
            .find(|h| h.order == o)
            .map(|h| (h.rms, h.phase_rad))
    };
    for o in orders {
        let (ur, up) = find(u, o).unwrap_or((0.0, 0.0));
        let (ir, ip) = find(i, o).unwrap_or((0.0, 0.0));
        t.push(vec![
            fmt_num(o),
            fmt_num(ur),
            fmt_num(snap(up, PI)),
            fmt_num(ir),
            fmt_num(snap(ip, PI)),
        ]);
    }
    t
}

pub fn harmonic_power_table(pq: &[HarmonicPq]) -> Table {
    let mut t = Table::new(["order", "p_w", "q_var"]);
    let scale = pq.iter().map(|h| h.p.hypot(h.q)).fold(0.0, f64::max);
    for h in pq {
        t.push(vec![
            fmt_num(h.order),
            fmt_num(snap(h.p, scale)),
            fmt_num(snap(h.q, scale)),
        ]);
    }
    t
}
