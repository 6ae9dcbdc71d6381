mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use semireg::classify::is_arithmetical;
use semireg::ideal::{
    annihilator, annihilator_of_ideal, ideal_combine, ideal_generated, idempotent_generator, is_pure_ideal,
    IdealLattice, IdealOp,
};
use semireg::ring::{build_product, build_zmod, FiniteRing};

use common::{corpus, gcd, small_ring};

/// Closure of `gens` under addition and multiplication by ring elements,
/// computed by a plain fixed-point loop.
fn closure(r: &FiniteRing, gens: &[usize]) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = std::iter::once(0).chain(gens.iter().copied()).collect();
    loop {
        let mut next = set.clone();
        for &x in &set {
            for y in r.elements() {
                next.insert(r.mul(x, y));
            }
            for &y in &set {
                next.insert(r.add(x, y));
            }
        }
        if next == set {
            return set;
        }
        set = next;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_ideals_match_closure(r in small_ring(), picks in prop::collection::vec(any::<prop::sample::Index>(), 0..3)) {
        let gens: Vec<usize> = picks.iter().map(|i| i.index(r.size())).collect();
        let i = ideal_generated(&r, &gens);
        let want: Vec<usize> = closure(&r, &gens).into_iter().collect();
        prop_assert_eq!(i.elements(), &want[..]);
    }

    #[test]
    fn sum_and_intersection_match_sets(r in small_ring(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let i = ideal_generated(&r, &[a.index(r.size())]);
        let j = ideal_generated(&r, &[b.index(r.size())]);
        let meet = ideal_combine(&r, IdealOp::Intersection, &i, &j).unwrap();
        let want: Vec<usize> = i.elements().iter().copied().filter(|x| j.contains(*x)).collect();
        prop_assert_eq!(meet.elements(), &want[..]);
        let sum = ideal_combine(&r, IdealOp::Sum, &i, &j).unwrap();
        let both: Vec<usize> = i.elements().iter().chain(j.elements()).copied().collect();
        let want: Vec<usize> = closure(&r, &both).into_iter().collect();
        prop_assert_eq!(sum.elements(), &want[..]);
    }

    #[test]
    fn double_annihilator_contains_ideal(r in small_ring()) {
        for i in r.ideals().unwrap() {
            prop_assert!(i.is_subset(&annihilator_of_ideal(&r, &annihilator_of_ideal(&r, i))));
        }
    }

    #[test]
    fn pure_iff_idempotent_generated(r in small_ring()) {
        for i in r.ideals().unwrap() {
            let pure = is_pure_ideal(&r, i).unwrap().pure;
            let direct = r.idempotents().iter().any(|&e| ideal_generated(&r, &[e]) == *i);
            prop_assert_eq!(pure, direct);
            prop_assert_eq!(idempotent_generator(&r, i).is_some(), direct);
        }
    }

    #[test]
    fn distributivity_matches_arithmetical(r in small_ring()) {
        let lattice = IdealLattice::new(&r).unwrap();
        let mut violation = false;
        let ideals = r.ideals().unwrap();
        for a in 0..ideals.len() {
            for b in 0..ideals.len() {
                for c in 0..ideals.len() {
                    let lhs = lattice.meet(lattice.sum(a, b), c);
                    let rhs = lattice.sum(lattice.meet(a, c), lattice.meet(b, c));
                    violation |= lhs != rhs;
                }
            }
        }
        prop_assert_eq!(!violation, is_arithmetical(&r).unwrap().holds);
    }
}

#[test]
fn zmod_ideal_counts_are_divisor_counts() {
    for n in 1..=60 {
        let r = build_zmod(n).unwrap();
        let divisors = (1..=n).filter(|d| n % d == 0).count();
        assert_eq!(r.ideals().unwrap().len(), divisors, "zmod:{n}");
    }
}

#[test]
fn annihilators_in_zmod() {
    for n in [8, 12, 30] {
        let r = build_zmod(n).unwrap();
        for a in r.elements() {
            let step = n / gcd(a, n);
            let want: Vec<usize> = (0..n).filter(|x| x % step == 0).collect();
            assert_eq!(annihilator(&r, &[a]).elements(), &want[..]);
        }
    }
}

#[test]
fn product_maximal_ideal_counts() {
    for (a, b) in [(2, 3), (4, 6), (12, 5), (8, 9)] {
        let ra = build_zmod(a).unwrap();
        let rb = build_zmod(b).unwrap();
        let p = build_product(&[ra.clone(), rb.clone()]).unwrap();
        assert_eq!(
            p.maximal_ideals().unwrap().len(),
            ra.maximal_ideals().unwrap().len() + rb.maximal_ideals().unwrap().len()
        );
    }
    for r in corpus() {
        let lattice = IdealLattice::new(&r).unwrap();
        assert_eq!(lattice.len(), r.ideals().unwrap().len());
    }
}
