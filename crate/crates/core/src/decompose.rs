//! Current decomposition.
//!
//! ```text
//! i = i_a + i_N
//!   = i_p + i_q + i_G
//!   = i_a + i_s + i_q + i_G
//! ```
//!
//! `i_a = (M_a / ‖u‖²) u` is the active (Fryze) current, the smallest current
//! delivering the same active power. `i_p` and `i_q` come from per-harmonic
//! conductances and susceptances, `i_s = i_p − i_a` is the scattered current
//! and `i_G` holds current at frequencies the voltage does not contain.

use crate::circuit::{apply_admittances, HarmonicAdmittance};
use crate::error::{Error, Result};
use crate::ga::{Blade, Multivector};
use crate::phasor::GeometricPhasor;

#[derive(Clone, Debug, PartialEq)]
pub struct CurrentComponents {
    pub i: GeometricPhasor,
    pub i_a: GeometricPhasor,
    pub i_n: GeometricPhasor,
    pub i_p: GeometricPhasor,
    pub i_q: GeometricPhasor,
    pub i_s: GeometricPhasor,
    pub i_g: GeometricPhasor,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComponentNorms {
    pub i: f64,
    pub i_a: f64,
    pub i_n: f64,
    pub i_p: f64,
    pub i_q: f64,
    pub i_s: f64,
    pub i_g: f64,
}

impl CurrentComponents {
    pub fn norms(&self) -> ComponentNorms {
        ComponentNorms {
            i: self.i.norm(),
            i_a: self.i_a.norm(),
            i_n: self.i_n.norm(),
            i_p: self.i_p.norm(),
            i_q: self.i_q.norm(),
            i_s: self.i_s.norm(),
            i_g: self.i_g.norm(),
        }
    }

    /// `M_s = u i_s`. Reported for reference only; it has no physical meaning.
    pub fn scattered_power(&self, u: &GeometricPhasor) -> Result<Multivector> {
        u.check_compatible(&self.i_s)?;
        Ok(u.mv().geometric_product(self.i_s.mv())?)
    }

    /// `M_q = u i_q`. Reported for reference only; it has no physical meaning.
    pub fn quadrature_power(&self, u: &GeometricPhasor) -> Result<Multivector> {
        u.check_compatible(&self.i_q)?;
        Ok(u.mv().geometric_product(self.i_q.mv())?)
    }
}

/// `i = u⁻¹ M`, split into `i_a = u⁻¹ M_a` and `i_N = i − i_a`.
pub fn fryze_split(
    u: &GeometricPhasor,
    i: &GeometricPhasor,
) -> Result<(GeometricPhasor, GeometricPhasor)> {
    u.check_compatible(i)?;
    if u.norm() == 0.0 {
        return Err(Error::ZeroVoltage);
    }
    let active = u.mv().inner_vectors(i.mv())?;
    let i_a = u.with_mv(u.mv().inverse_vector()?.scaled(active))?;
    let i_n = i.try_sub(&i_a)?;
    Ok((i_a, i_n))
}

/// `i_p = Σ G_k u_k`, `i_q = Σ B_k σ_{(2k-1)(2k)} u_k`.
pub fn parallel_quadrature(
    u: &GeometricPhasor,
    admittances: &[HarmonicAdmittance],
) -> Result<(GeometricPhasor, GeometricPhasor)> {
    let conductances: Vec<HarmonicAdmittance> = admittances
        .iter()
        .map(|y| HarmonicAdmittance {
            susceptance: 0.0,
            ..*y
        })
        .collect();
    let i_p = apply_admittances(u, &conductances)?;
    let total = apply_admittances(u, admittances)?;
    let i_q = total.try_sub(&i_p)?;
    Ok((i_p, i_q))
}

/// `i_s = i_p − i_a`.
pub fn scattered(i_p: &GeometricPhasor, i_a: &GeometricPhasor) -> Result<GeometricPhasor> {
    i_p.try_sub(i_a)
}

/// Part of `i` in slots (and DC) where `u` has no component.
pub fn generated_current(u: &GeometricPhasor, i: &GeometricPhasor) -> Result<GeometricPhasor> {
    u.check_compatible(i)?;
    let mut terms = Vec::new();
    if u.dc() == 0.0 {
        terms.push((0, i.dc()));
    }
    for slot in u.layout().slots().filter(|s| !u.occupies(*s)) {
        let (c, s) = i.pair(slot);
        terms.push((slot.cos_index, c));
        terms.push((slot.sin_index, s));
    }
    i.with_mv(Multivector::vector(u.layout().dimension(), terms)?)
}

/// Susceptance a shunt compensator needs at each order to cancel `i_q`.
pub fn compensation_susceptances(admittances: &[HarmonicAdmittance]) -> Vec<(f64, f64)> {
    admittances
        .iter()
        .map(|y| (y.order, -y.susceptance))
        .collect()
}

/// Load admittances after adding the compensator: `Y'_k = G_k`.
pub fn compensated(admittances: &[HarmonicAdmittance]) -> Vec<HarmonicAdmittance> {
    admittances
        .iter()
        .zip(compensation_susceptances(admittances))
        .map(|(y, (_, b))| HarmonicAdmittance {
            susceptance: y.susceptance + b,
            ..*y
        })
        .collect()
}

/// Per-plane admittance `Y_k = i_k u_k⁻¹` for DC and every slot occupied by
/// the voltage. Used when the load is only known through measurements.
pub fn estimate_admittances(
    u: &GeometricPhasor,
    i: &GeometricPhasor,
) -> Result<Vec<HarmonicAdmittance>> {
    u.check_compatible(i)?;
    let mut out = Vec::new();
    if u.dc() != 0.0 {
        out.push(HarmonicAdmittance {
            order: 0.0,
            conductance: i.dc() / u.dc(),
            susceptance: 0.0,
            plane: Blade::SCALAR,
        });
    }
    for slot in u.layout().slots().filter(|s| u.occupies(*s)) {
        let y = i
            .slot_part(slot)
            .geometric_product(&u.slot_part(slot).inverse_vector()?)?;
        out.push(HarmonicAdmittance {
            order: slot.order,
            conductance: y.scalar_part(),
            susceptance: y.get(slot.plane()),
            plane: slot.plane(),
        });
    }
    Ok(out)
}

/// Full decomposition of a measured current, with admittances estimated
/// from the data.
pub fn decompose(u: &GeometricPhasor, i: &GeometricPhasor) -> Result<CurrentComponents> {
    let admittances = estimate_admittances(u, i)?;
    decompose_with(u, i, &admittances)
}

/// Full decomposition given the load admittances.
pub fn decompose_with(
    u: &GeometricPhasor,
    i: &GeometricPhasor,
    admittances: &[HarmonicAdmittance],
) -> Result<CurrentComponents> {
    let (i_a, i_n) = fryze_split(u, i)?;
    let (i_p, i_q) = parallel_quadrature(u, admittances)?;
    let i_s = scattered(&i_p, &i_a)?;
    let i_g = generated_current(u, i)?;
    Ok(CurrentComponents {
        i: i.clone(),
        i_a,
        i_n,
        i_p,
        i_q,
        i_s,
        i_g,
    })
}
