//! Per-harmonic impedance, admittance and Ohm's law in the geometric domain.
//!
//! At harmonic `k` an impedance is the spinor `Z_k = R + X_k σ_{(2k-1)(2k)}`
//! and the current is `i_k = Y_k u_k` with `Y_k = Z_k⁻¹`. Inductive reactance
//! is positive, capacitive negative. DC uses the scalar "plane": `Z_0 = R`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ga::{Blade, Multivector};
use crate::phasor::{GeometricPhasor, Slot};

/// Series R-L-C branch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesRlc {
    #[serde(default)]
    pub r_ohm: f64,
    #[serde(default)]
    pub l_henry: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_farad: Option<f64>,
}

impl SeriesRlc {
    pub fn new(r_ohm: f64, l_henry: f64, c_farad: Option<f64>) -> Self {
        SeriesRlc {
            r_ohm,
            l_henry,
            c_farad,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_ohm.is_finite() && self.r_ohm >= 0.0) {
            return Err(Error::InvalidCircuit(format!(
                "r_ohm must be non-negative, got {}",
                self.r_ohm
            )));
        }
        if !(self.l_henry.is_finite() && self.l_henry >= 0.0) {
            return Err(Error::InvalidCircuit(format!(
                "l_henry must be non-negative, got {}",
                self.l_henry
            )));
        }
        if let Some(c) = self.c_farad {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::InvalidCircuit(format!(
                    "c_farad must be positive, got {c}"
                )));
            }
        }
        if self.r_ohm == 0.0 && self.l_henry == 0.0 && self.c_farad.is_none() {
            return Err(Error::InvalidCircuit(
                "at least one of R, L, C is required".into(),
            ));
        }
        Ok(())
    }

    /// Impedance at harmonic `k` (`k = 0` is DC).
    pub fn impedance_at(&self, k: usize, omega: f64) -> Result<HarmonicImpedance> {
        if k == 0 {
            return self.dc_impedance();
        }
        let plane = Blade::plane(2 * k - 1, 2 * k)?;
        self.impedance_in_plane(k as f64, plane, omega)
    }

    /// Impedance for an arbitrary (possibly inter-harmonic) slot.
    pub fn impedance_for_slot(&self, slot: Slot, omega: f64) -> Result<HarmonicImpedance> {
        self.impedance_in_plane(slot.order, slot.plane(), omega)
    }

    fn impedance_in_plane(
        &self,
        order: f64,
        plane: Blade,
        omega: f64,
    ) -> Result<HarmonicImpedance> {
        self.validate()?;
        let w = order * omega;
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::InvalidCircuit(format!(
                "angular frequency {w} at order {order} must be positive"
            )));
        }
        let capacitive = self.c_farad.map_or(0.0, |c| 1.0 / (w * c));
        Ok(HarmonicImpedance {
            order,
            resistance: self.r_ohm,
            reactance: w * self.l_henry - capacitive,
            plane,
        })
    }

    fn dc_impedance(&self) -> Result<HarmonicImpedance> {
        self.validate()?;
        if self.c_farad.is_some() {
            return Err(Error::InvalidCircuit(
                "series capacitor has no DC impedance".into(),
            ));
        }
        Ok(HarmonicImpedance {
            order: 0.0,
            resistance: self.r_ohm,
            reactance: 0.0,
            plane: Blade::SCALAR,
        })
    }
}

/// `R + X·plane` at one harmonic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarmonicImpedance {
    pub order: f64,
    pub resistance: f64,
    pub reactance: f64,
    pub plane: Blade,
}

impl HarmonicImpedance {
    pub fn to_multivector(&self, dim: usize) -> Result<Multivector> {
        spinor(dim, self.resistance, self.reactance, self.plane)
    }
}

/// `G + B·plane` at one harmonic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarmonicAdmittance {
    pub order: f64,
    pub conductance: f64,
    pub susceptance: f64,
    pub plane: Blade,
}

impl HarmonicAdmittance {
    pub fn to_multivector(&self, dim: usize) -> Result<Multivector> {
        spinor(dim, self.conductance, self.susceptance, self.plane)
    }
}

fn spinor(dim: usize, scalar: f64, bivector: f64, plane: Blade) -> Result<Multivector> {
    if plane.is_scalar() {
        if bivector != 0.0 {
            return Err(Error::InvalidCircuit(
                "DC term cannot carry a reactive part".into(),
            ));
        }
        return Ok(Multivector::scalar(dim, scalar)?);
    }
    if plane.grade() != 2 {
        return Err(crate::ga::GaError::NotBivector(plane.grade()).into());
    }
    Ok(Multivector::from_terms(
        dim,
        [(Blade::SCALAR, scalar), (plane, bivector)],
    )?)
}

fn spinor_dim(plane: Blade) -> usize {
    plane.min_dimension().max(1)
}

/// `Y = Z† / ‖Z‖²`.
pub fn admittance_at(z: &HarmonicImpedance) -> Result<HarmonicAdmittance> {
    let zm = z.to_multivector(spinor_dim(z.plane))?;
    if zm.is_zero() {
        return Err(Error::ZeroImpedance(z.order));
    }
    let y = zm.inverse_spinor()?;
    Ok(HarmonicAdmittance {
        order: z.order,
        conductance: y.scalar_part(),
        susceptance: if z.plane.is_scalar() {
            0.0
        } else {
            y.get(z.plane)
        },
        plane: z.plane,
    })
}

/// Inverse of [`admittance_at`].
pub fn impedance_of(y: &HarmonicAdmittance) -> Result<HarmonicImpedance> {
    let ym = y.to_multivector(spinor_dim(y.plane))?;
    if ym.is_zero() {
        return Err(Error::InvalidCircuit(format!(
            "zero admittance at order {}",
            y.order
        )));
    }
    let z = ym.inverse_spinor()?;
    Ok(HarmonicImpedance {
        order: y.order,
        resistance: z.scalar_part(),
        reactance: if y.plane.is_scalar() {
            0.0
        } else {
            z.get(y.plane)
        },
        plane: y.plane,
    })
}

/// Admittances of `net` for DC (if present) and every slot occupied by `u`.
pub fn admittances_for(u: &GeometricPhasor, net: &SeriesRlc) -> Result<Vec<HarmonicAdmittance>> {
    net.validate()?;
    let mut out = Vec::new();
    if u.dc() != 0.0 {
        if net.c_farad.is_some() {
            return Err(Error::DcThroughCapacitor(u.dc()));
        }
        out.push(admittance_at(&net.impedance_at(0, u.omega())?)?);
    }
    for slot in u.layout().slots().filter(|s| u.occupies(*s)) {
        out.push(admittance_at(&net.impedance_for_slot(slot, u.omega())?)?);
    }
    Ok(out)
}

fn find_admittance(admittances: &[HarmonicAdmittance], order: f64) -> Result<&HarmonicAdmittance> {
    admittances
        .iter()
        .find(|y| (y.order - order).abs() < 1e-9)
        .ok_or(Error::MissingAdmittance(order))
}

/// Per-harmonic Ohm's law `i = Σ Y_k u_k` over DC and every occupied slot.
pub fn apply_admittances(
    u: &GeometricPhasor,
    admittances: &[HarmonicAdmittance],
) -> Result<GeometricPhasor> {
    let dim = u.layout().dimension();
    let mut current = Multivector::zero(dim)?;
    if u.dc() != 0.0 {
        let y0 = find_admittance(admittances, 0.0)?;
        current = current.try_add(&u.dc_part().scaled(y0.conductance))?;
    }
    for slot in u.layout().slots().filter(|s| u.occupies(*s)) {
        let y = find_admittance(admittances, slot.order)?;
        if y.plane != slot.plane() {
            return Err(Error::InvalidCircuit(format!(
                "admittance for order {} lies in {} instead of {}",
                slot.order,
                y.plane,
                slot.plane()
            )));
        }
        let ik = y
            .to_multivector(dim)?
            .geometric_product(&u.slot_part(slot))?;
        current = current.try_add(&ik)?;
    }
    u.with_mv(current)
}

/// Steady-state current drawn by `net` from the source `u`.
pub fn solve_current(u: &GeometricPhasor, net: &SeriesRlc) -> Result<GeometricPhasor> {
    let admittances = admittances_for(u, net)?;
    apply_admittances(u, &admittances)
}

/// Time derivative: each harmonic is left-multiplied by `kω σ_{(2k-1)(2k)}`.
/// DC vanishes.
pub fn derivative_phasor(p: &GeometricPhasor) -> Result<GeometricPhasor> {
    let dim = p.layout().dimension();
    let mut out = Multivector::zero(dim)?;
    for slot in p.layout().slots().filter(|s| p.occupies(*s)) {
        let w = slot.order * p.omega();
        let op = Multivector::from_terms(dim, [(slot.plane(), w)])?;
        out = out.try_add(&op.geometric_product(&p.slot_part(slot))?)?;
    }
    p.with_mv(out)
}

/// Time integral: each harmonic is left-multiplied by `-σ_{(2k-1)(2k)} / (kω)`.
pub fn integral_phasor(p: &GeometricPhasor) -> Result<GeometricPhasor> {
    if p.dc() != 0.0 {
        return Err(Error::IntegralOfDc);
    }
    let dim = p.layout().dimension();
    let mut out = Multivector::zero(dim)?;
    for slot in p.layout().slots().filter(|s| p.occupies(*s)) {
        let w = slot.order * p.omega();
        let op = Multivector::from_terms(dim, [(slot.plane(), -1.0 / w)])?;
        out = out.try_add(&op.geometric_product(&p.slot_part(slot))?)?;
    }
    p.with_mv(out)
}
