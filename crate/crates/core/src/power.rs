//! Geometric apparent power `M = u i = u·i + u∧i`.
//!
//! The scalar part is the active power. The bivector part splits into the
//! in-plane terms `σ_{(2k-1)(2k)}` (reactive power of harmonic `k`) and the
//! remaining cross-frequency terms between different harmonics.

use crate::error::{Error, Result};
use crate::ga::{Blade, Multivector};
use crate::phasor::{BasisLayout, GeometricPhasor};

#[derive(Clone, Debug, PartialEq)]
pub struct GeometricPower {
    mv: Multivector,
    layout: BasisLayout,
}

/// Active and reactive power of one harmonic (order 0 is DC).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarmonicPq {
    pub order: f64,
    pub p: f64,
    /// Signed coefficient of the harmonic's plane in `M`.
    pub q: f64,
}

impl GeometricPower {
    pub fn mv(&self) -> &Multivector {
        &self.mv
    }

    pub fn layout(&self) -> &BasisLayout {
        &self.layout
    }

    /// `M_a = ⟨M⟩_0`, the active power.
    pub fn active(&self) -> f64 {
        self.mv.scalar_part()
    }

    /// `M_N = ⟨M⟩_2`.
    pub fn non_active(&self) -> Multivector {
        self.mv.grade(2)
    }

    /// `‖M‖`.
    pub fn apparent(&self) -> f64 {
        self.mv.norm()
    }

    /// `⟨M⟩_0 / ‖M‖`.
    pub fn power_factor(&self) -> Result<f64> {
        let s = self.apparent();
        if s == 0.0 {
            return Err(Error::ZeroApparentPower);
        }
        Ok(self.active() / s)
    }

    /// Bivector terms outside every harmonic plane, in blade order.
    pub fn cross_terms(&self) -> Vec<(Blade, f64)> {
        let planes: Vec<Blade> = self.layout.slots().map(|s| s.plane()).collect();
        self.mv
            .terms()
            .filter(|(b, _)| b.grade() == 2 && !planes.contains(b))
            .collect()
    }
}

pub fn geometric_power(u: &GeometricPhasor, i: &GeometricPhasor) -> Result<GeometricPower> {
    u.check_compatible(i)?;
    Ok(GeometricPower {
        mv: u.mv().geometric_product(i.mv())?,
        layout: u.layout().clone(),
    })
}

/// Per-order active power `u_c i_c + u_s i_s` and in-plane reactive power
/// `u_c i_s − u_s i_c` for DC and every slot occupied by either phasor.
pub fn harmonic_pq(u: &GeometricPhasor, i: &GeometricPhasor) -> Result<Vec<HarmonicPq>> {
    u.check_compatible(i)?;
    let mut out = Vec::new();
    if u.dc() != 0.0 || i.dc() != 0.0 {
        out.push(HarmonicPq {
            order: 0.0,
            p: u.dc() * i.dc(),
            q: 0.0,
        });
    }
    for slot in u.layout().slots() {
        if !u.occupies(slot) && !i.occupies(slot) {
            continue;
        }
        let (uc, us) = u.pair(slot);
        let (ic, is) = i.pair(slot);
        out.push(HarmonicPq {
            order: slot.order,
            p: uc * ic + us * is,
            q: uc * is - us * ic,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phasor(n: usize, c: &[(usize, f64)]) -> GeometricPhasor {
        let layout = BasisLayout::harmonics(n).unwrap();
        let mv = Multivector::vector(layout.dimension(), c.iter().copied()).unwrap();
        GeometricPhasor::new(mv, layout, 50.0).unwrap()
    }

    fn bivector(dim: usize, terms: &[((usize, usize), f64)], scalar: f64) -> Multivector {
        let mut t: Vec<(Blade, f64)> = terms
            .iter()
            .map(|((a, b), c)| (Blade::plane(*a, *b).unwrap(), *c))
            .collect();
        t.push((Blade::SCALAR, scalar));
        Multivector::from_terms(dim, t).unwrap()
    }

    #[test]
    fn example_power_multivectors() {
        let u = phasor(3, &[(2, 100.0), (6, 100.0)]);
        let i = phasor(3, &[(1, 50.0), (2, 50.0), (5, -50.0), (6, 50.0)]);
        let m = geometric_power(&u, &i).unwrap();
        let expected = bivector(
            7,
            &[
                ((1, 2), -5000.0),
                ((5, 6), 5000.0),
                ((1, 6), -5000.0),
                ((2, 5), -5000.0),
            ],
            10000.0,
        );
        assert!(m.mv().approx_eq(&expected, 1e-9));
        assert!((m.apparent() - 10000.0 * std::f64::consts::SQRT_2).abs() < 1e-6);
        assert!((m.power_factor().unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert_eq!(
            m.cross_terms(),
            vec![
                (Blade::plane(1, 6).unwrap(), -5000.0),
                (Blade::plane(2, 5).unwrap(), -5000.0)
            ]
        );

        let i = phasor(3, &[(1, 30.0), (2, 10.0), (5, -30.0), (6, 90.0)]);
        let m = geometric_power(&u, &i).unwrap();
        let expected = bivector(
            7,
            &[
                ((1, 2), -3000.0),
                ((5, 6), 3000.0),
                ((1, 6), -3000.0),
                ((2, 5), -3000.0),
                ((2, 6), 8000.0),
            ],
            10000.0,
        );
        assert!(m.mv().approx_eq(&expected, 1e-9));
        assert!((m.apparent() - 10000.0 * std::f64::consts::SQRT_2).abs() < 1e-6);
    }

    #[test]
    fn unit_power() {
        let s1 = phasor(1, &[(1, 1.0)]);
        let m = geometric_power(&s1, &s1).unwrap();
        assert_eq!(m.mv(), &Multivector::scalar(3, 1.0).unwrap());
        assert_eq!(m.power_factor().unwrap(), 1.0);
    }

    #[test]
    fn zero_current() {
        let u = phasor(1, &[(2, 230.0)]);
        let m = geometric_power(&u, &phasor(1, &[])).unwrap();
        assert_eq!(m.apparent(), 0.0);
        assert!(matches!(m.power_factor(), Err(Error::ZeroApparentPower)));
    }

    #[test]
    fn reactive_load_has_zero_power_factor() {
        let m = geometric_power(&phasor(1, &[(2, 1.0)]), &phasor(1, &[(1, 1.0)])).unwrap();
        assert_eq!(m.power_factor().unwrap(), 0.0);
    }

    #[test]
    fn example_harmonic_reactive_signs() {
        let u = phasor(3, &[(2, 100.0), (6, 100.0)]);
        let i = phasor(3, &[(1, 50.0), (2, 50.0), (5, -50.0), (6, 50.0)]);
        let pq = harmonic_pq(&u, &i).unwrap();
        assert_eq!(pq.len(), 2);
        assert_eq!((pq[0].order, pq[0].p, pq[0].q), (1.0, 5000.0, -5000.0));
        assert_eq!((pq[1].order, pq[1].p, pq[1].q), (3.0, 5000.0, 5000.0));
        let same = phasor(2, &[(3, 2.0), (4, -1.0)]);
        assert_eq!(harmonic_pq(&same, &same).unwrap()[0].q, 0.0);
    }

    #[test]
    fn layout_mismatch() {
        assert!(matches!(
            geometric_power(&phasor(1, &[]), &phasor(2, &[])),
            Err(Error::LayoutMismatch)
        ));
    }
}
