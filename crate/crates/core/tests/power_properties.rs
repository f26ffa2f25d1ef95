mod common;

use geopower::phasor::{from_phasor, reconstruct};
use geopower::power::{geometric_power, harmonic_pq};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn apparent_power_is_product_of_norms((u, i) in common::phasor_pair(6)) {
        let m = geometric_power(&u, &i).unwrap();
        prop_assert!((m.apparent() - u.norm() * i.norm()).abs() <= 1e-9 * (1.0 + u.norm() * i.norm()));
    }

    #[test]
    fn decomposition_is_complete((u, i) in common::phasor_pair(6)) {
        let m = geometric_power(&u, &i).unwrap();
        let bivectors: f64 = m.non_active().terms().map(|(_, c)| c * c).sum();
        let total = m.active().powi(2) + bivectors;
        prop_assert!((m.apparent().powi(2) - total).abs() <= 1e-9 * (1.0 + total));
        prop_assert!(m.mv().terms().all(|(b, _)| b.grade() == 0 || b.grade() == 2));
        prop_assert!((m.active() - u.inner(&i).unwrap()).abs() < 1e-9 * (1.0 + m.apparent()));
    }

    #[test]
    fn per_harmonic_pq_matches_complex_phasors((u, i) in common::phasor_pair(6)) {
        let su = from_phasor(&u);
        let si = from_phasor(&i);
        for row in harmonic_pq(&u, &i).unwrap().into_iter().filter(|r| r.order > 0.0) {
            let (uk, ik) = match (su.harmonic(row.order as usize), si.harmonic(row.order as usize)) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    prop_assert!(row.p.abs() < 1e-9 && row.q.abs() < 1e-9);
                    continue;
                }
            };
            let dphi = uk.phase_rad - ik.phase_rad;
            let s = uk.rms * ik.rms;
            prop_assert!((row.p - s * dphi.cos()).abs() < 1e-9 * (1.0 + s));
            prop_assert!((row.q.abs() - (s * dphi.sin()).abs()).abs() < 1e-9 * (1.0 + s));
        }
    }

    /// Mean of u(t)·i(t) over one period equals the scalar part of M.
    #[test]
    fn instantaneous_power_mean_equals_active_part((u, i) in common::phasor_pair(6)) {
        let samples = 64;
        let times: Vec<f64> = (0..samples).map(|n| n as f64 / (50.0 * samples as f64)).collect();
        let ut = reconstruct(&from_phasor(&u), &times);
        let it = reconstruct(&from_phasor(&i), &times);
        let mean = ut.iter().zip(&it).map(|(a, b)| a * b).sum::<f64>() / samples as f64;
        let m = geometric_power(&u, &i).unwrap();
        prop_assert!((mean - m.active()).abs() < 1e-6 * (1.0 + m.apparent()));
    }
}
