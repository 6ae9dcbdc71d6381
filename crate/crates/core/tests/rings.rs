mod common;

use proptest::prelude::*;

use semireg::classify::is_field;
use semireg::ring::{
    build_product, build_quotient, build_zmod, find_isomorphism, localize_at_maximal, product_projection,
    units_and_idempotents,
};
use semireg::spec::parse_ring_spec;

use common::{corpus, gcd, small_ring};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constructors_produce_valid_tables(r in small_ring()) {
        prop_assert!(r.validate().is_ok());
        // spec round-trips to an identical table
        let again = parse_ring_spec(r.spec()).unwrap();
        prop_assert!(find_isomorphism(&r, &again).is_some());
        prop_assert_eq!(again.size(), r.size());
    }

    #[test]
    fn localization_inverts_outside_elements(r in small_ring()) {
        for p in r.maximal_ideals().unwrap() {
            let loc = localize_at_maximal(&r, p).unwrap();
            let q = &loc.quotient_ring;
            for s in r.elements().filter(|&s| !p.contains(s)) {
                let image = loc.projection.apply(s);
                let mut hit = vec![false; q.size()];
                for y in q.elements() {
                    hit[q.mul(image, y)] = true;
                }
                prop_assert!(hit.iter().all(|&h| h));
            }
        }
    }

    #[test]
    fn maximal_quotients_are_fields(r in small_ring()) {
        for p in r.maximal_ideals().unwrap() {
            let (q, _) = build_quotient(&r, p.gens()).unwrap();
            prop_assert!(is_field(&q).unwrap().holds);
        }
    }

    #[test]
    fn zmod_units_and_idempotents(n in 1usize..=60) {
        let r = build_zmod(n).unwrap();
        let (units, idempotents) = units_and_idempotents(&r);
        let want_units: Vec<usize> = (0..n).filter(|&x| gcd(x, n) == 1 && n > 1).collect();
        let want_idem: Vec<usize> = (0..n).filter(|&x| (x * x) % n == x).collect();
        prop_assert_eq!(units, if n == 1 { vec![0] } else { want_units });
        prop_assert_eq!(idempotents, want_idem);
    }
}

#[test]
fn product_projections_recover_components() {
    let factors = vec![build_zmod(2).unwrap(), build_zmod(3).unwrap(), build_zmod(4).unwrap()];
    let p = build_product(&factors).unwrap();
    let projections: Vec<_> = (0..3).map(|i| product_projection(&p, &factors, i).unwrap()).collect();
    for a in 0..2 {
        for b in 0..3 {
            for c in 0..4 {
                let x = (a * 3 + b) * 4 + c;
                assert_eq!(
                    [projections[0].apply(x), projections[1].apply(x), projections[2].apply(x)],
                    [a, b, c]
                );
            }
        }
    }
    // projections respect the ring operations
    for x in p.elements() {
        for y in p.elements() {
            for h in &projections {
                assert_eq!(h.apply(p.mul(x, y)), h.target().mul(h.apply(x), h.apply(y)));
                assert_eq!(h.apply(p.add(x, y)), h.target().add(h.apply(x), h.apply(y)));
            }
        }
    }
}

#[test]
fn chinese_remainder_isomorphisms() {
    for (a, b) in [(2, 3), (3, 4), (4, 5)] {
        let p = build_product(&[build_zmod(a).unwrap(), build_zmod(b).unwrap()]).unwrap();
        assert!(find_isomorphism(&p, &build_zmod(a * b).unwrap()).is_some());
    }
    let p = build_product(&[build_zmod(2).unwrap(), build_zmod(2).unwrap()]).unwrap();
    assert!(find_isomorphism(&p, &build_zmod(4).unwrap()).is_none());
}

#[test]
fn corpus_quotient_and_localization_sizes() {
    let z12 = build_zmod(12).unwrap();
    let (q, _) = build_quotient(&z12, &[4]).unwrap();
    assert!(find_isomorphism(&q, &build_zmod(4).unwrap()).is_some());
    for r in corpus() {
        r.validate().unwrap();
        let total: usize = r.local_factors().unwrap().iter().map(|_| 1).sum();
        assert_eq!(total, r.maximal_ideals().unwrap().len(), "{}", r.spec());
    }
}

#[test]
fn zero_ring_is_handled() {
    let r = build_zmod(1).unwrap();
    assert!(r.is_zero_ring());
    assert!(r.maximal_ideals().unwrap().is_empty());
    let report = semireg::classify::classify_ring(&r).unwrap();
    assert!(report.flags.one_semiregular);
}
