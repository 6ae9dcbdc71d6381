mod common;

use proptest::prelude::*;

use semireg::classify::{check_implications, classify_ring, is_field, is_local, is_valuation, is_vnr, Flags};
use semireg::ring::{build_zmod, FiniteRing};
use semireg::spec::parse_ring_spec;
use semireg::verify::{run_check, CheckCaps, Status};

use common::{corpus, small_ring};

fn units(r: &FiniteRing) -> Vec<usize> {
    r.elements().filter(|&a| r.elements().any(|b| r.mul(a, b) == r.one())).collect()
}

fn divides(r: &FiniteRing, a: usize, b: usize) -> bool {
    r.elements().any(|c| r.mul(a, c) == b)
}

fn field_oracle(r: &FiniteRing) -> bool {
    r.size() > 1 && units(r).len() == r.size() - 1
}

fn local_oracle(r: &FiniteRing) -> bool {
    let u = units(r);
    let non: Vec<usize> = r.elements().filter(|a| !u.contains(a)).collect();
    r.size() > 1 && non.iter().all(|&a| non.iter().all(|&b| non.contains(&r.add(a, b))))
}

fn vnr_oracle(r: &FiniteRing) -> bool {
    r.elements().all(|a| r.elements().any(|x| r.mul(r.mul(a, a), x) == a))
}

fn valuation_oracle(r: &FiniteRing) -> bool {
    r.elements().all(|a| r.elements().all(|b| divides(r, a, b) || divides(r, b, a)))
}

fn prime_factors(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

const CHEAP_CHECKS: &[&str] = &["lattice", "plocs", "pfact", "pprod", "ccycval", "pzerokrull"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn elementary_flags_match_oracles(r in small_ring()) {
        prop_assert_eq!(is_field(&r).unwrap().holds, field_oracle(&r));
        prop_assert_eq!(is_local(&r).unwrap().holds, local_oracle(&r));
        prop_assert_eq!(is_vnr(&r).unwrap().holds, vnr_oracle(&r));
        prop_assert_eq!(is_valuation(&r).unwrap().holds, valuation_oracle(&r));
    }

    #[test]
    fn reports_respect_the_lattice(r in small_ring()) {
        let rep = classify_ring(&r).unwrap();
        prop_assert!(check_implications(&rep.flags).is_empty());
        prop_assert_eq!(rep.size, r.size());
    }

    #[test]
    fn cheap_checks_never_fail(r in small_ring()) {
        let caps = CheckCaps::default();
        for id in CHEAP_CHECKS {
            let out = run_check(id, &r, &caps).unwrap();
            prop_assert!(out.status != Status::Fail && out.status != Status::Error, "{} on {}: {}", id, r.spec(), out.details);
        }
    }
}

#[test]
fn zmod_flags_by_factorization() {
    for n in 2..=60 {
        let r = build_zmod(n).unwrap();
        let f = classify_ring(&r).unwrap().flags;
        let pf = prime_factors(n);
        assert_eq!(f.field, pf.len() == 1 && pf[0].1 == 1, "zmod:{n}");
        assert_eq!(f.local, pf.len() == 1, "zmod:{n}");
        assert_eq!(f.valuation, pf.len() == 1, "zmod:{n}");
        assert_eq!(f.vnr, pf.iter().all(|&(_, e)| e == 1), "zmod:{n}");
        assert_eq!(f.one_semiregular, pf.iter().all(|&(_, e)| e <= 2), "zmod:{n}");
        // principal ideal rings
        assert!(f.bezout && f.arithmetical && f.semiregular && f.edr && f.two_semiregular, "zmod:{n}");
    }
}

#[test]
fn corpus_checks_pass() {
    let caps = CheckCaps::default();
    for r in corpus() {
        for id in CHEAP_CHECKS.iter().chain(["tgsr", "two_semiregular"].iter()) {
            let out = run_check(id, &r, &caps).unwrap();
            assert!(
                matches!(out.status, Status::Pass | Status::Skip | Status::CapExceeded),
                "{id} on {}: {}",
                r.spec(),
                out.details
            );
        }
    }
}

#[test]
fn reports_are_reproducible() {
    for r in corpus() {
        let a = classify_ring(&r).unwrap().to_json_without_timings();
        let b = classify_ring(&r).unwrap().to_json_without_timings();
        assert_eq!(a, b);
    }
}

#[test]
fn zero_ring_is_degenerate() {
    let r = build_zmod(1).unwrap();
    let f = classify_ring(&r).unwrap().flags;
    assert!(!f.field && !f.local);
    // its ideal lattice is a one-element chain
    assert!(f.valuation && f.vnr && f.one_semiregular && f.two_semiregular);
}

#[test]
fn implication_rules_fire() {
    let f = Flags {
        field: true,
        ..Flags::default()
    };
    assert_eq!(check_implications(&f), vec!["field => vnr".to_string()]);
    let f = Flags {
        semiregular: true,
        edr: true,
        ..Flags::default()
    };
    assert_eq!(check_implications(&f), vec!["semiregular & edr => two_semiregular".to_string()]);
}

#[test]
fn non_arithmetical_ring() {
    // F2[x,y]/(x,y)^2 has a two-generated maximal ideal
    let r = parse_ring_spec("trivext:(zmod:2;free:2)").unwrap();
    let f = classify_ring(&r).unwrap().flags;
    assert!(f.local && !f.arithmetical && !f.valuation && !f.two_semiregular);
}
