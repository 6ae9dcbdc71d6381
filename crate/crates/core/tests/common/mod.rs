#![allow(dead_code)]

use proptest::prelude::*;

use semireg::ring::{build_duplication, build_product, build_quotient, build_trivial_extension, build_zmod, Ring};
use semireg::module::cyclic;
use semireg::spec::parse_ring_spec;

/// Small rings from every constructor.
pub const CORPUS: &[&str] = &[
    "zmod:1",
    "zmod:2",
    "zmod:4",
    "zmod:6",
    "zmod:8",
    "zmod:9",
    "zmod:12",
    "prod:[zmod:2,zmod:2]",
    "prod:[zmod:2,zmod:4]",
    "prod:[zmod:3,zmod:4]",
    "quot:(prod:[zmod:4,zmod:4];8)",
    "trivext:(zmod:2;free:1)",
    "trivext:(zmod:2;free:2)",
    "trivext:(zmod:3;free:1)",
    "trivext:(zmod:4;cyclic:[2])",
    "dup:(zmod:4;2)",
    "dup:(zmod:6;2)",
];

pub fn corpus() -> Vec<Ring> {
    CORPUS.iter().map(|s| parse_ring_spec(s).unwrap()).collect()
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Random small rings built by composing constructors.
pub fn small_ring() -> impl Strategy<Value = Ring> {
    let base = (1usize..=12).prop_map(|n| build_zmod(n).unwrap());
    base.prop_recursive(2, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_filter_map("too large", |(a, b)| {
                (a.size() * b.size() <= 48).then(|| build_product(&[a, b]).unwrap())
            }),
            (inner.clone(), any::<prop::sample::Index>()).prop_map(|(a, i)| {
                let g = i.index(a.size());
                build_quotient(&a, &[g]).unwrap().0
            }),
            (inner.clone(), any::<prop::sample::Index>()).prop_filter_map("too large", |(a, i)| {
                let g = i.index(a.size());
                let e = cyclic(&a, &[g]).unwrap();
                (a.size() * e.size() <= 48).then(|| build_trivial_extension(&a, &e).unwrap())
            }),
            (inner, any::<prop::sample::Index>()).prop_filter_map("too large", |(a, i)| {
                let g = i.index(a.size());
                let size = a.size() * semireg::ideal::ideal_generated(&a, &[g]).len();
                (size <= 48).then(|| build_duplication(&a, &[g]).unwrap())
            }),
        ]
    })
}
