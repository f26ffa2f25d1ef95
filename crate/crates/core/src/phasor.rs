//! Frequency-domain signals and their geometric phasors.
//!
//! A periodic signal
//!
//! ```text
//! x(t) = X_0 + √2 Σ X_k sin(kωt + φ_k)
//! ```
//!
//! maps onto an orthonormal basis where `σ_0` carries DC and harmonic `k`
//! occupies the pair `σ_{2k-1} ↔ √2 cos kωt`, `σ_{2k} ↔ √2 sin kωt`.
//! Expanding the sine gives the coefficients `X_k sin φ_k` on `σ_{2k-1}` and
//! `X_k cos φ_k` on `σ_{2k}`. Sub- and inter-harmonics get extra pairs after
//! the highest integer harmonic.

use std::f64::consts::{PI, SQRT_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ga::{Blade, Multivector, MAX_DIMENSION};

/// Orders closer than this are considered equal.
const ORDER_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicComponent {
    /// Multiple of the fundamental frequency.
    pub order: f64,
    pub rms: f64,
    /// Phase of the sine term, radians in (-π, π].
    pub phase_rad: f64,
}

impl HarmonicComponent {
    pub fn new(order: f64, rms: f64, phase_rad: f64) -> Self {
        HarmonicComponent {
            order,
            rms,
            phase_rad,
        }
    }

    /// Builds a component from its basis coefficients on the cosine and sine
    /// slots of its plane.
    pub fn from_pair(order: f64, cos_coeff: f64, sin_coeff: f64) -> Self {
        HarmonicComponent {
            order,
            rms: cos_coeff.hypot(sin_coeff),
            phase_rad: normalize_phase(cos_coeff.atan2(sin_coeff)),
        }
    }

    /// `(cos-slot, sin-slot)` coefficients.
    pub fn pair(&self) -> (f64, f64) {
        let (s, c) = self.phase_rad.sin_cos();
        (self.rms * s, self.rms * c)
    }
}

/// DC value plus harmonic and inter-harmonic components of a periodic signal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralSignal {
    pub fundamental_hz: f64,
    #[serde(default)]
    pub dc: f64,
    #[serde(default)]
    pub harmonics: Vec<HarmonicComponent>,
    #[serde(default)]
    pub interharmonics: Vec<HarmonicComponent>,
}

impl SpectralSignal {
    pub fn new(fundamental_hz: f64, dc: f64, harmonics: Vec<HarmonicComponent>) -> Self {
        SpectralSignal {
            fundamental_hz,
            dc,
            harmonics,
            interharmonics: Vec::new(),
        }
    }

    pub fn omega(&self) -> f64 {
        TAU * self.fundamental_hz
    }

    pub fn max_order(&self) -> usize {
        self.harmonics
            .iter()
            .map(|h| h.order as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn harmonic(&self, order: usize) -> Option<&HarmonicComponent> {
        self.harmonics.iter().find(|h| h.order == order as f64)
    }

    /// All harmonic and inter-harmonic components.
    pub fn components(&self) -> impl Iterator<Item = &HarmonicComponent> {
        self.harmonics.iter().chain(&self.interharmonics)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fundamental_hz.is_finite() && self.fundamental_hz > 0.0) {
            return Err(Error::InvalidSignal(format!(
                "fundamental_hz must be positive, got {}",
                self.fundamental_hz
            )));
        }
        if !self.dc.is_finite() {
            return Err(Error::InvalidSignal("dc is not finite".into()));
        }
        for h in self.components() {
            if !(h.rms.is_finite() && h.rms >= 0.0) {
                return Err(Error::InvalidSignal(format!(
                    "order {}: rms must be finite and non-negative",
                    h.order
                )));
            }
            if !h.phase_rad.is_finite() {
                return Err(Error::InvalidSignal(format!(
                    "order {}: phase is not finite",
                    h.order
                )));
            }
        }
        for h in &self.harmonics {
            if !(h.order >= 1.0 && h.order.fract() == 0.0) {
                return Err(Error::InvalidSignal(format!(
                    "harmonic order {} is not a positive integer",
                    h.order
                )));
            }
        }
        for h in &self.interharmonics {
            if !(h.order.is_finite() && h.order > 0.0) || is_integer_order(h.order) {
                return Err(Error::InvalidSignal(format!(
                    "inter-harmonic order {} must be positive and non-integer",
                    h.order
                )));
            }
        }
        check_increasing(&self.harmonics)?;
        check_increasing(&self.interharmonics)
    }
}

fn check_increasing(list: &[HarmonicComponent]) -> Result<()> {
    for w in list.windows(2) {
        if (w[1].order - w[0].order).abs() < ORDER_TOLERANCE {
            return Err(Error::DuplicateOrder(w[1].order));
        }
        if w[1].order < w[0].order {
            return Err(Error::InvalidSignal(format!(
                "orders not increasing at {}",
                w[1].order
            )));
        }
    }
    Ok(())
}

fn is_integer_order(order: f64) -> bool {
    (order - order.round()).abs() < ORDER_TOLERANCE
}

/// Wraps an angle into (-π, π].
pub fn normalize_phase(phase: f64) -> f64 {
    let r = phase.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// The two basis slots of one harmonic or inter-harmonic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Slot {
    pub order: f64,
    /// Index of the `√2 cos` basis vector.
    pub cos_index: usize,
    /// Index of the `√2 sin` basis vector.
    pub sin_index: usize,
}

impl Slot {
    pub fn plane(&self) -> Blade {
        Blade::from_mask((1u64 << self.cos_index) | (1u64 << self.sin_index))
    }
}

/// Assignment of DC, harmonics `1..=n` and inter-harmonics to basis indices.
/// Dimension is `1 + 2n + 2|L|`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisLayout {
    max_order: usize,
    interharmonic_orders: Vec<f64>,
}

impl BasisLayout {
    pub fn new(max_order: usize, interharmonic_orders: Vec<f64>) -> Result<Self> {
        for w in interharmonic_orders.windows(2) {
            if w[1] - w[0] < ORDER_TOLERANCE {
                return Err(Error::InvalidSignal(
                    "inter-harmonic orders must be strictly increasing".into(),
                ));
            }
        }
        for &o in &interharmonic_orders {
            if !(o.is_finite() && o > 0.0) || is_integer_order(o) {
                return Err(Error::InvalidSignal(format!(
                    "inter-harmonic order {o} must be positive and non-integer"
                )));
            }
        }
        let layout = BasisLayout {
            max_order,
            interharmonic_orders,
        };
        if layout.dimension() > MAX_DIMENSION {
            return Err(crate::ga::GaError::DimensionTooLarge(layout.dimension()).into());
        }
        Ok(layout)
    }

    pub fn harmonics(max_order: usize) -> Result<Self> {
        BasisLayout::new(max_order, Vec::new())
    }

    /// Smallest layout with a slot for every component of every signal.
    pub fn covering<'a, I>(signals: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a SpectralSignal>,
    {
        let mut max_order = 0;
        let mut inter: Vec<f64> = Vec::new();
        for s in signals {
            s.validate()?;
            max_order = max_order.max(s.max_order());
            inter.extend(s.interharmonics.iter().map(|h| h.order));
        }
        inter.sort_by(f64::total_cmp);
        inter.dedup_by(|a, b| (*a - *b).abs() < ORDER_TOLERANCE);
        BasisLayout::new(max_order, inter)
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn interharmonic_orders(&self) -> &[f64] {
        &self.interharmonic_orders
    }

    pub fn dimension(&self) -> usize {
        1 + 2 * self.max_order + 2 * self.interharmonic_orders.len()
    }

    /// Slot of harmonic `k` (`1 ≤ k ≤ n`).
    pub fn harmonic_slot(&self, k: usize) -> Option<Slot> {
        (1..=self.max_order).contains(&k).then(|| Slot {
            order: k as f64,
            cos_index: 2 * k - 1,
            sin_index: 2 * k,
        })
    }

    /// Slot of any harmonic or inter-harmonic order.
    pub fn slot_for_order(&self, order: f64) -> Option<Slot> {
        if is_integer_order(order) && order >= 0.5 {
            return self.harmonic_slot(order.round() as usize);
        }
        let m = self
            .interharmonic_orders
            .iter()
            .position(|o| (o - order).abs() < ORDER_TOLERANCE)?;
        let base = 2 * self.max_order + 2 * m;
        Some(Slot {
            order: self.interharmonic_orders[m],
            cos_index: base + 1,
            sin_index: base + 2,
        })
    }

    /// Harmonic slots in increasing order, followed by inter-harmonic slots.
    pub fn slots(&self) -> impl Iterator<Item = Slot> + '_ {
        let harmonics = (1..=self.max_order).filter_map(|k| self.harmonic_slot(k));
        let inter = self
            .interharmonic_orders
            .iter()
            .filter_map(|o| self.slot_for_order(*o));
        harmonics.chain(inter)
    }

    /// Slot owning basis index `index`, or `None` for the DC index.
    pub fn slot_of_index(&self, index: usize) -> Option<Slot> {
        self.slots()
            .find(|s| s.cos_index == index || s.sin_index == index)
    }
}

/// Grade-1 multivector representing a signal in a [`BasisLayout`].
#[derive(Clone, Debug, PartialEq)]
pub struct GeometricPhasor {
    mv: Multivector,
    layout: BasisLayout,
    fundamental_hz: f64,
}

impl GeometricPhasor {
    pub fn new(mv: Multivector, layout: BasisLayout, fundamental_hz: f64) -> Result<Self> {
        if !mv.is_grade(1) {
            return Err(crate::ga::GaError::NotVector.into());
        }
        if mv.dim() != layout.dimension() {
            return Err(Error::LayoutMismatch);
        }
        if !(fundamental_hz.is_finite() && fundamental_hz > 0.0) {
            return Err(Error::InvalidSignal(format!(
                "fundamental_hz must be positive, got {fundamental_hz}"
            )));
        }
        Ok(GeometricPhasor {
            mv,
            layout,
            fundamental_hz,
        })
    }

    pub fn zero(layout: BasisLayout, fundamental_hz: f64) -> Result<Self> {
        let mv = Multivector::zero(layout.dimension())?;
        GeometricPhasor::new(mv, layout, fundamental_hz)
    }

    pub fn mv(&self) -> &Multivector {
        &self.mv
    }

    pub fn layout(&self) -> &BasisLayout {
        &self.layout
    }

    pub fn fundamental_hz(&self) -> f64 {
        self.fundamental_hz
    }

    pub fn omega(&self) -> f64 {
        TAU * self.fundamental_hz
    }

    pub fn dc(&self) -> f64 {
        self.mv.coeff(0)
    }

    pub fn coeff(&self, index: usize) -> f64 {
        self.mv.coeff(index)
    }

    pub fn pair(&self, slot: Slot) -> (f64, f64) {
        (self.mv.coeff(slot.cos_index), self.mv.coeff(slot.sin_index))
    }

    /// True when either coefficient of the slot is non-zero.
    pub fn occupies(&self, slot: Slot) -> bool {
        let (c, s) = self.pair(slot);
        c != 0.0 || s != 0.0
    }

    /// Just the terms of one slot, as a multivector in the full dimension.
    pub fn slot_part(&self, slot: Slot) -> Multivector {
        let (c, s) = self.pair(slot);
        Multivector::vector(self.mv.dim(), [(slot.cos_index, c), (slot.sin_index, s)])
            .expect("slot indices fit the layout")
    }

    pub fn dc_part(&self) -> Multivector {
        Multivector::vector(self.mv.dim(), [(0, self.dc())]).expect("index 0 fits")
    }

    pub fn norm(&self) -> f64 {
        self.mv.norm()
    }

    /// Same layout and fundamental as `other`.
    pub fn check_compatible(&self, other: &GeometricPhasor) -> Result<()> {
        let same_f =
            (self.fundamental_hz - other.fundamental_hz).abs() <= 1e-12 * self.fundamental_hz;
        if self.layout != other.layout || !same_f {
            return Err(Error::LayoutMismatch);
        }
        Ok(())
    }

    /// A phasor sharing this layout and fundamental.
    pub fn with_mv(&self, mv: Multivector) -> Result<GeometricPhasor> {
        GeometricPhasor::new(mv, self.layout.clone(), self.fundamental_hz)
    }

    pub fn try_add(&self, other: &GeometricPhasor) -> Result<GeometricPhasor> {
        self.check_compatible(other)?;
        self.with_mv(self.mv.try_add(&other.mv)?)
    }

    pub fn try_sub(&self, other: &GeometricPhasor) -> Result<GeometricPhasor> {
        self.check_compatible(other)?;
        self.with_mv(self.mv.try_sub(&other.mv)?)
    }

    pub fn inner(&self, other: &GeometricPhasor) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self.mv.inner_vectors(&other.mv)?)
    }
}

/// Maps a signal into the geometric domain.
pub fn to_phasor(signal: &SpectralSignal, layout: &BasisLayout) -> Result<GeometricPhasor> {
    signal.validate()?;
    let mut coeffs = vec![(0, signal.dc)];
    for h in signal.components() {
        let slot = layout
            .slot_for_order(h.order)
            .ok_or(Error::NoSlot(h.order))?;
        let (c, s) = h.pair();
        coeffs.push((slot.cos_index, c));
        coeffs.push((slot.sin_index, s));
    }
    let mv = Multivector::vector(layout.dimension(), coeffs)?;
    GeometricPhasor::new(mv, layout.clone(), signal.fundamental_hz)
}

/// Inverse of [`to_phasor`]. Empty slots produce no component.
pub fn from_phasor(phasor: &GeometricPhasor) -> SpectralSignal {
    let mut signal = SpectralSignal::new(phasor.fundamental_hz, phasor.dc(), Vec::new());
    for slot in phasor.layout.slots() {
        if !phasor.occupies(slot) {
            continue;
        }
        let (c, s) = phasor.pair(slot);
        let h = HarmonicComponent::from_pair(slot.order, c, s);
        if is_integer_order(slot.order) {
            signal.harmonics.push(h);
        } else {
            signal.interharmonics.push(h);
        }
    }
    signal
}

/// Evaluates `x(t) = X_0 + √2 Σ X_k sin(kωt + φ_k)` at each time.
pub fn reconstruct(signal: &SpectralSignal, times: &[f64]) -> Vec<f64> {
    let omega = signal.omega();
    times
        .iter()
        .map(|&t| {
            signal.dc
                + signal
                    .components()
                    .map(|h| SQRT_2 * h.rms * (h.order * omega * t + h.phase_rad).sin())
                    .sum::<f64>()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn example_voltage() -> SpectralSignal {
        SpectralSignal::new(
            1.0 / TAU,
            0.0,
            vec![
                HarmonicComponent::new(1.0, 100.0, 0.0),
                HarmonicComponent::new(3.0, 100.0, 0.0),
            ],
        )
    }

    #[test]
    fn example_voltage_maps_to_sine_slots() {
        let layout = BasisLayout::harmonics(3).unwrap();
        let u = to_phasor(&example_voltage(), &layout).unwrap();
        let expected = Multivector::vector(7, [(2, 100.0), (6, 100.0)]).unwrap();
        assert!(u.mv().approx_eq(&expected, 1e-12));
    }

    #[test]
    fn dc_uses_sigma_zero() {
        let s = SpectralSignal::new(50.0, 5.0, vec![]);
        let u = to_phasor(&s, &BasisLayout::harmonics(0).unwrap()).unwrap();
        assert_eq!(u.mv(), &Multivector::basis(1, 0, 5.0).unwrap());
    }

    #[test]
    fn cosine_lands_on_cos_slot() {
        let s = SpectralSignal::new(
            50.0,
            0.0,
            vec![HarmonicComponent::new(1.0, 10.0, FRAC_PI_2)],
        );
        let u = to_phasor(&s, &BasisLayout::harmonics(1).unwrap()).unwrap();
        assert!(u
            .mv()
            .approx_eq(&Multivector::basis(3, 1, 10.0).unwrap(), 1e-12));
        // and the waveforms agree: sin(ωt + π/2) = cos ωt
        let times: Vec<f64> = (0..16).map(|n| n as f64 / 800.0).collect();
        for (t, x) in times.iter().zip(reconstruct(&s, &times)) {
            let cosine = SQRT_2 * 10.0 * (TAU * 50.0 * t).cos();
            assert!((x - cosine).abs() < 1e-12);
        }
    }

    #[test]
    fn missing_slot_and_duplicates_rejected() {
        let s = example_voltage();
        assert!(
            matches!(to_phasor(&s, &BasisLayout::harmonics(2).unwrap()), Err(Error::NoSlot(o)) if o == 3.0)
        );
        let mut dup = example_voltage();
        dup.harmonics.push(HarmonicComponent::new(3.0, 1.0, 0.0));
        assert!(matches!(
            to_phasor(&dup, &BasisLayout::harmonics(3).unwrap()),
            Err(Error::DuplicateOrder(_))
        ));
    }

    #[test]
    fn from_phasor_inverts_example() {
        let layout = BasisLayout::harmonics(3).unwrap();
        let u = GeometricPhasor::new(
            Multivector::vector(7, [(2, 100.0), (6, 100.0)]).unwrap(),
            layout.clone(),
            50.0,
        )
        .unwrap();
        let s = from_phasor(&u);
        assert_eq!(
            s.harmonics,
            vec![
                HarmonicComponent::new(1.0, 100.0, 0.0),
                HarmonicComponent::new(3.0, 100.0, 0.0)
            ]
        );
        let empty = from_phasor(&GeometricPhasor::zero(layout, 50.0).unwrap());
        assert!(empty.harmonics.is_empty() && empty.interharmonics.is_empty() && empty.dc == 0.0);
    }

    #[test]
    fn interharmonic_slots_follow_harmonics() {
        let layout = BasisLayout::new(3, vec![0.5, 2.5]).unwrap();
        assert_eq!(layout.dimension(), 11);
        let slot = layout.slot_for_order(2.5).unwrap();
        assert_eq!((slot.cos_index, slot.sin_index), (9, 10));
        let slot = layout.slot_for_order(0.5).unwrap();
        assert_eq!((slot.cos_index, slot.sin_index), (7, 8));
        assert!(BasisLayout::new(3, vec![2.0]).is_err());
    }

    #[test]
    fn reconstruct_sine_values() {
        let s = SpectralSignal::new(1.0, 0.0, vec![HarmonicComponent::new(1.0, 1.0, 0.0)]);
        let x = reconstruct(&s, &[0.0, 0.25]);
        assert!(x[0].abs() < 1e-15);
        assert!((x[1] - SQRT_2).abs() < 1e-15);
        assert!(reconstruct(&example_voltage(), &[0.0])[0].abs() < 1e-12);
    }

    #[test]
    fn phase_normalization() {
        assert_eq!(normalize_phase(PI), PI);
        assert!((normalize_phase(-PI) - PI).abs() < 1e-15);
        assert!((normalize_phase(3.0 * PI / 2.0) + FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn signal_validation() {
        let mut s = example_voltage();
        s.fundamental_hz = 0.0;
        assert!(s.validate().is_err());
        let mut s = example_voltage();
        s.harmonics[0].rms = -1.0;
        assert!(s.validate().is_err());
        let mut s = example_voltage();
        s.harmonics.swap(0, 1);
        assert!(s.validate().is_err());
        let mut s = example_voltage();
        s.harmonics[0].order = 1.5;
        assert!(s.validate().is_err());
    }
}
