#![allow(dead_code)]

use std::f64::consts::PI;

use geopower::phasor::{
    to_phasor, BasisLayout, GeometricPhasor, HarmonicComponent, SpectralSignal,
};
use geopower::{Blade, Multivector};
use proptest::prelude::*;

/// Random sparse multivector with up to `max_terms` terms in dimension `dim`.
pub fn multivector(dim: usize, max_terms: usize) -> impl Strategy<Value = Multivector> {
    let full = if dim == 64 {
        u64::MAX
    } else {
        (1u64 << dim) - 1
    };
    prop::collection::vec((0..=full, -10.0f64..10.0), 0..=max_terms).prop_map(move |terms| {
        Multivector::from_terms(
            dim,
            terms.into_iter().map(|(m, c)| (Blade::from_mask(m), c)),
        )
        .unwrap()
    })
}

pub fn vector(dim: usize) -> impl Strategy<Value = Multivector> {
    prop::collection::vec(-10.0f64..10.0, dim)
        .prop_map(move |c| Multivector::vector(dim, c.into_iter().enumerate()).unwrap())
}

/// Signal on a random subset of harmonics `1..=max_order`, optional DC.
pub fn signal(max_order: usize, fundamental_hz: f64) -> impl Strategy<Value = SpectralSignal> {
    let comp = (0.1f64..100.0, -PI..PI);
    (
        prop::option::of(-50.0f64..50.0),
        prop::collection::vec(prop::option::of(comp), max_order),
    )
        .prop_map(move |(dc, comps)| {
            let harmonics = comps
                .into_iter()
                .enumerate()
                .filter_map(|(k, c)| {
                    c.map(|(rms, phase)| HarmonicComponent::new((k + 1) as f64, rms, phase))
                })
                .collect();
            SpectralSignal::new(fundamental_hz, dc.unwrap_or(0.0), harmonics)
        })
}

pub fn phasor_pair(max_order: usize) -> impl Strategy<Value = (GeometricPhasor, GeometricPhasor)> {
    (signal(max_order, 50.0), signal(max_order, 50.0)).prop_map(move |(u, i)| {
        let layout = BasisLayout::harmonics(max_order).unwrap();
        (
            to_phasor(&u, &layout).unwrap(),
            to_phasor(&i, &layout).unwrap(),
        )
    })
}

/// Phase difference wrapped to (-π, π].
pub fn phase_diff(a: f64, b: f64) -> f64 {
    geopower::phasor::normalize_phase(a - b)
}
