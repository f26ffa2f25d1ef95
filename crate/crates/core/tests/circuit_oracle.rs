mod common;

use geopower::circuit::{
    admittance_at, derivative_phasor, impedance_of, integral_phasor, solve_current, SeriesRlc,
};
use geopower::phasor::{from_phasor, to_phasor, BasisLayout};
use num_complex::Complex64;
use proptest::prelude::*;

fn net() -> impl Strategy<Value = SeriesRlc> {
    (0.1f64..20.0, 0.0f64..0.1, prop::option::of(1e-5f64..1e-2))
        .prop_map(|(r, l, c)| SeriesRlc::new(r, l, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Per-harmonic `I = U / (R + jX)` with sine-referenced complex phasors.
    #[test]
    fn ga_solver_matches_complex_ohms_law(mut s in common::signal(9, 50.0), net in net()) {
        s.dc = 0.0;
        let layout = BasisLayout::harmonics(9).unwrap();
        let u = to_phasor(&s, &layout).unwrap();
        let i = from_phasor(&solve_current(&u, &net).unwrap());
        prop_assert_eq!(i.harmonics.len(), s.harmonics.len());
        for (h, ih) in s.harmonics.iter().zip(&i.harmonics) {
            let w = h.order * s.omega();
            let x = w * net.l_henry - net.c_farad.map_or(0.0, |c| 1.0 / (w * c));
            let current = Complex64::from_polar(h.rms, h.phase_rad) / Complex64::new(net.r_ohm, x);
            prop_assert!((ih.rms - current.norm()).abs() < 1e-9 * (1.0 + current.norm()));
            prop_assert!(common::phase_diff(ih.phase_rad, current.arg()).abs() < 1e-9);
        }
    }

    #[test]
    fn kvl_residual_vanishes(mut s in common::signal(7, 50.0), net in net()) {
        s.dc = 0.0;
        let u = to_phasor(&s, &BasisLayout::harmonics(7).unwrap()).unwrap();
        let i = solve_current(&u, &net).unwrap();
        let mut drop = i.mv().scaled(net.r_ohm);
        drop = drop.try_add(&derivative_phasor(&i).unwrap().mv().scaled(net.l_henry)).unwrap();
        if let Some(c) = net.c_farad {
            drop = drop.try_add(&integral_phasor(&i).unwrap().mv().scaled(1.0 / c)).unwrap();
        }
        prop_assert!(u.mv().approx_eq(&drop, 1e-9 * (1.0 + u.norm())), "residual {}", u.mv().max_abs_diff(&drop));
    }

    #[test]
    fn impedance_admittance_round_trip(net in net(), k in 1usize..20) {
        let z = net.impedance_at(k, 2.0 * std::f64::consts::PI * 50.0).unwrap();
        let back = impedance_of(&admittance_at(&z).unwrap()).unwrap();
        prop_assert!((back.resistance - z.resistance).abs() <= 1e-12 * (1.0 + z.resistance.abs()));
        prop_assert!((back.reactance - z.reactance).abs() <= 1e-12 * (1.0 + z.reactance.abs()));
    }

    #[test]
    fn integral_inverts_derivative(mut s in common::signal(6, 60.0)) {
        s.dc = 0.0;
        let p = to_phasor(&s, &BasisLayout::harmonics(6).unwrap()).unwrap();
        let back = integral_phasor(&derivative_phasor(&p).unwrap()).unwrap();
        prop_assert!(back.mv().approx_eq(p.mv(), 1e-9));
    }
}
