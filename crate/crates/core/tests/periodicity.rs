mod common;

use semireg::classify::is_2_semiregular;
use semireg::ideal::annihilator;
use semireg::module::{cyclic, direct_sum, free, is_isomorphic, is_projective, Module};
use semireg::periodicity::{
    build_lproj_module, check_summand_lemma, enumerate_projectives_up_to_size, find_uvst_witness,
    is_1_periodic_oracle, is_2_periodic_oracle, projective_cover, splice_2f, CertificateKind, OracleCaps,
    ShortExact, SpliceInput,
};
use semireg::ring::build_zmod;
use semireg::spec::parse_ring_spec;

use common::corpus;

fn caps() -> OracleCaps {
    OracleCaps::default()
}

fn cyclics(r: &semireg::Ring) -> Vec<Module> {
    r.ideals().unwrap().iter().map(|i| cyclic(r, i.gens()).unwrap()).collect()
}

#[test]
fn certificates_have_oracle_cardinalities() {
    for r in corpus().into_iter().filter(|r| r.size() <= 8) {
        for m in cyclics(&r) {
            let c = is_1_periodic_oracle(&m, &caps()).unwrap();
            if let Some(seq) = &c.sequence {
                assert!(c.all_joints_exact());
                assert_eq!(seq.modules[1].size(), m.size() * m.size());
                assert!(is_projective(&seq.modules[1]).unwrap());
            }
            let c = is_2_periodic_oracle(&m, &caps()).unwrap();
            if let Some(seq) = &c.sequence {
                assert!(c.all_joints_exact());
                let (cover, _) = projective_cover(&m).unwrap();
                let kernel = cover.size() / m.size();
                assert_eq!(seq.modules[1].size() * seq.modules[2].size(), m.size() * kernel * cover.size());
            }
        }
    }
}

#[test]
fn direct_sums_stay_periodic() {
    for spec in ["zmod:4", "zmod:6", "zmod:9", "prod:[zmod:2,zmod:2]"] {
        let r = parse_ring_spec(spec).unwrap();
        let pieces: Vec<Module> = cyclics(&r).into_iter().filter(|m| m.size() <= 3).collect();
        for a in &pieces {
            for b in &pieces {
                let sum = direct_sum(&[a.clone(), b.clone()]).unwrap().module;
                if sum.size() * sum.size() > caps().max_module_size {
                    continue;
                }
                let one = |m: &Module| is_1_periodic_oracle(m, &caps()).unwrap().is_positive();
                if one(a) && one(b) {
                    assert!(one(&sum), "{} ⊕ {} over {spec}", a.spec(), b.spec());
                }
                let two = |m: &Module| is_2_periodic_oracle(m, &caps()).unwrap().is_positive();
                if two(a) && two(b) {
                    assert!(two(&sum), "{} ⊕ {} over {spec}", a.spec(), b.spec());
                }
            }
        }
    }
}

#[test]
fn splice_on_corpus_certificates() {
    let mut spliced = 0;
    for r in corpus().into_iter().filter(|r| r.size() <= 9) {
        for m in cyclics(&r) {
            let cert = is_2_periodic_oracle(&m, &caps()).unwrap();
            if cert.kind != CertificateKind::TwoPeriodic {
                continue;
            }
            let out = splice_2f(&SpliceInput::from_certificate(&cert).unwrap()).unwrap();
            assert!(out.all_pass(), "{} over {}: {:?}", m.spec(), r.spec(), out.checks);
            assert!(is_projective(&out.g).unwrap());
            spliced += 1;
        }
    }
    assert!(spliced > 5, "only {spliced} certificates spliced");
}

#[test]
fn summand_lemma_on_one_periodic_sequences() {
    let r = build_zmod(9).unwrap();
    let m = cyclic(&r, &[3]).unwrap();
    let seq = is_1_periodic_oracle(&m, &caps()).unwrap().sequence.unwrap();
    let first = ShortExact {
        inclusion: seq.maps[0].clone(),
        surjection: seq.maps[1].clone(),
    };
    let z = free(&r, 0).unwrap();
    let (_, surj) = projective_cover(&z).unwrap();
    let trivial = ShortExact {
        inclusion: semireg::ModuleHom::zero(&z, surj.source()),
        surjection: surj,
    };
    assert!(check_summand_lemma(&first, &first).unwrap());
    assert!(check_summand_lemma(&first, &trivial).unwrap());
}

#[test]
fn rank_one_modules_on_two_semiregular_rings() {
    let mut built = 0;
    for r in corpus().into_iter().filter(|r| r.size() <= 16) {
        if !is_2_semiregular(&r).unwrap().holds {
            continue;
        }
        for x in r.elements() {
            let w = find_uvst_witness(&r, x).unwrap().unwrap_or_else(|| panic!("no witness for {x} in {}", r.spec()));
            let ann = annihilator(&r, &[x]);
            assert!(ann.contains(w.s) && ann.contains(w.t));
            let g = build_lproj_module(&r, x, w.a, w.b, w.u, w.v, w.s, w.t).unwrap();
            assert!(g.sequence.is_exact());
            assert_eq!(g.module.size(), r.size());
            built += 1;
        }
    }
    assert!(built > 20);
}

#[test]
fn projective_enumeration_matches_idempotent_count() {
    // over a ring with k local factors, projectives of size at most |R| are
    // the 2^k summands of R plus larger-rank ones that fit
    for spec in ["zmod:4", "zmod:6", "zmod:30", "prod:[zmod:2,zmod:2]"] {
        let r = parse_ring_spec(spec).unwrap();
        let ps = enumerate_projectives_up_to_size(&r, r.size()).unwrap();
        for (i, p) in ps.iter().enumerate() {
            assert!(is_projective(p).unwrap());
            for q in &ps[i + 1..] {
                assert!(is_isomorphic(p, q).unwrap().is_none());
            }
        }
        let summands = r.idempotents().len();
        assert!(ps.len() >= summands);
        if r.is_local().unwrap() {
            assert_eq!(ps.len(), 2);
        }
    }
}

#[test]
fn caps_are_reported() {
    let r = build_zmod(16).unwrap();
    let tiny = OracleCaps {
        max_module_size: 8,
        ..OracleCaps::default()
    };
    assert!(matches!(
        is_1_periodic_oracle(&free(&r, 1).unwrap(), &tiny),
        Err(semireg::Error::CapExceeded { .. })
    ));
}
