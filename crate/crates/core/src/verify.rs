//! Named consistency checks run against one ring at a time. Each check
//! compares independent routes to the same property and reports pass, fail
//! or skip together with the data it compared.

use serde::Serialize;
use serde_json::{json, Value};

use crate::classify::{
    check_implications, check_trivext, classify_ring, duplication_predicate, is_1_semiregular, is_2_semiregular,
    is_arithmetical, is_semiregular, is_vnr, local_chain_conditions, tgsr_condition4_witness, tgsr_condition5,
    zero_krull_decomposition,
};
use crate::error::{Error, Result};
use crate::module::{cyclic, for_each_hom, is_isomorphic, HomFilter, Module, ModuleHom, PairModule};
use crate::periodicity::{
    build_lproj_module, char2_f_periodic, enumerate_projectives_up_to_size, find_uvst_witness, is_1_periodic_oracle,
    is_2_periodic_oracle, pair_flatness, OracleCaps,
};
use crate::ring::{all_localizations, build_product, build_quotient, build_zmod, Ring};
use crate::spec::{build_module, build_ring, parse_ring_expr, ModuleExpr, RingExpr};

pub const CHECK_IDS: &[&str] = &[
    "tgsr",
    "tgsr_equivalence",
    "t2gsr",
    "one_semiregular",
    "two_semiregular",
    "ttriv",
    "tfp",
    "pfperiodic",
    "lattice",
    "plocs",
    "pfact",
    "pprod",
    "ccycval",
    "pzerokrull",
];

pub fn is_registered(id: &str) -> bool {
    CHECK_IDS.contains(&id)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CheckCaps {
    pub oracle: OracleCaps,
    /// Rings larger than this skip the oracle route.
    pub max_oracle_ring: usize,
    /// Largest carrier `U` enumerated for pair modules.
    pub max_pair_carrier: usize,
    /// Largest module `E` used for trivial-extension grids.
    pub max_trivext_module: usize,
    /// Largest duplication ring built when scanning all ideals.
    pub max_duplication: usize,
}

impl Default for CheckCaps {
    fn default() -> Self {
        CheckCaps {
            oracle: OracleCaps::default(),
            max_oracle_ring: 16,
            max_pair_carrier: 8,
            max_trivext_module: 8,
            max_duplication: 128,
        }
    }
}

impl CheckCaps {
    pub fn with_oracle_size(size: usize) -> CheckCaps {
        let mut caps = CheckCaps::default();
        caps.oracle.max_module_size = size;
        caps.max_oracle_ring = size;
        caps
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Skip,
    CapExceeded,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub check: String,
    pub ring: String,
    pub status: Status,
    pub details: Value,
}

impl CheckOutcome {
    fn new(check: &str, ring: &Ring, status: Status, details: Value) -> CheckOutcome {
        CheckOutcome {
            check: check.to_string(),
            ring: ring.spec().to_string(),
            status,
            details,
        }
    }
}

enum Verdict {
    Pass(Value),
    Fail(Value),
    Skip(String),
}

/// Runs one registered check. Errors inside the check become `Fail`
/// (invariant violations), `CapExceeded` or `Error` outcomes; only an
/// unknown id is returned as `Err`.
pub fn run_check(id: &str, r: &Ring, caps: &CheckCaps) -> Result<CheckOutcome> {
    let result = match id {
        "tgsr" | "tgsr_equivalence" => check_tgsr(r, caps),
        "t2gsr" => check_t2gsr(r, caps),
        "one_semiregular" => check_one_semiregular(r, caps),
        "two_semiregular" => check_two_semiregular(r, caps),
        "ttriv" => check_ttriv(r, caps),
        "tfp" => check_tfp(r, caps),
        "pfperiodic" => check_pfperiodic(r, caps),
        "lattice" => check_lattice(r),
        "plocs" => check_plocs(r),
        "pfact" => check_pfact(r),
        "pprod" => check_pprod(r),
        "ccycval" => check_ccycval(r),
        "pzerokrull" => check_pzerokrull(r),
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown check `{other}`; registered: {}",
                CHECK_IDS.join(", ")
            )))
        }
    };
    Ok(match result {
        Ok(Verdict::Pass(d)) => CheckOutcome::new(id, r, Status::Pass, d),
        Ok(Verdict::Fail(d)) => CheckOutcome::new(id, r, Status::Fail, d),
        Ok(Verdict::Skip(why)) => CheckOutcome::new(id, r, Status::Skip, json!({ "reason": why })),
        Err(e @ Error::Invariant(_)) => CheckOutcome::new(id, r, Status::Fail, json!({ "error": e.to_string() })),
        Err(e) if e.is_cap_exceeded() => {
            CheckOutcome::new(id, r, Status::CapExceeded, json!({ "error": e.to_string() }))
        }
        Err(e) => CheckOutcome::new(id, r, Status::Error, json!({ "error": e.to_string() })),
    })
}

fn verdict(agree: bool, details: Value) -> Verdict {
    if agree {
        Verdict::Pass(details)
    } else {
        Verdict::Fail(details)
    }
}

/// `R/I` for every ideal `I`, in ideal enumeration order.
pub fn cyclic_modules(r: &Ring) -> Result<Vec<Module>> {
    r.ideals()?.iter().map(|i| cyclic(r, i.gens())).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleSweep {
    pub all_positive: bool,
    pub modules: usize,
    /// First module with a negative certificate.
    pub failing_module: Option<String>,
}

fn oracle_sweep(r: &Ring, caps: &CheckCaps, two: bool) -> Result<Option<OracleSweep>> {
    if r.size() > caps.max_oracle_ring {
        return Ok(None);
    }
    let modules = cyclic_modules(r)?;
    for m in &modules {
        let cert = if two {
            is_2_periodic_oracle(m, &caps.oracle)?
        } else {
            is_1_periodic_oracle(m, &caps.oracle)?
        };
        if !cert.is_positive() {
            return Ok(Some(OracleSweep {
                all_positive: false,
                modules: modules.len(),
                failing_module: Some(m.spec().to_string()),
            }));
        }
    }
    Ok(Some(OracleSweep {
        all_positive: true,
        modules: modules.len(),
        failing_module: None,
    }))
}

/// All cyclic modules 1-periodic, or `None` when the ring exceeds the
/// oracle cap.
pub fn all_cyclic_one_periodic(r: &Ring, caps: &CheckCaps) -> Result<Option<OracleSweep>> {
    oracle_sweep(r, caps, false)
}

pub fn all_cyclic_two_periodic(r: &Ring, caps: &CheckCaps) -> Result<Option<OracleSweep>> {
    oracle_sweep(r, caps, true)
}

#[derive(Clone, Debug, Serialize)]
pub struct TgsrConditions {
    pub oracle: Option<bool>,
    pub local_simple: bool,
    pub idempotents: bool,
    pub pure_squares: bool,
}

impl TgsrConditions {
    pub fn agree(&self) -> bool {
        let c = self.local_simple;
        self.idempotents == c && self.pure_squares == c && self.oracle.is_none_or(|o| o == c)
    }
}

pub fn tgsr_conditions(r: &Ring, caps: &CheckCaps) -> Result<TgsrConditions> {
    Ok(TgsrConditions {
        oracle: all_cyclic_one_periodic(r, caps)?.map(|s| s.all_positive),
        local_simple: is_1_semiregular(r)?.holds,
        idempotents: tgsr_condition4_witness(r)?.holds(),
        pure_squares: tgsr_condition5(r)?.holds,
    })
}

fn check_tgsr(r: &Ring, caps: &CheckCaps) -> Result<Verdict> {
    let c = tgsr_conditions(r, caps)?;
    Ok(verdict(c.agree(), serde_json::to_value(&c).expect("serializes")))
}

fn check_one_semiregular(r: &Ring, caps: &CheckCaps) -> Result<Verdict> {
    let flag = is_1_semiregular(r)?;
    let oracle = all_cyclic_one_periodic(r, caps)?;
    let agree = oracle.as_ref().is_none_or(|o| o.all_positive == flag.holds);
    Ok(verdict(agree, json!({ "one_semiregular": flag.holds, "witness": flag.witness, "oracle": oracle })))
}

#[derive(Clone, Debug, Serialize)]
pub struct RankOneCheck {
    pub element: usize,
    pub witness: Option<[usize; 6]>,
    pub ok: bool,
}

/// For every element: a `(a, b, u, v, s, t)` witness exists and the
/// rank-one module built from it passes its assertions.
pub fn rank_one_checks(r: &Ring) -> Result<Vec<RankOneCheck>> {
    let mut out = Vec::new();
    for x in r.elements() {
        let w = find_uvst_witness(r, x)?;
        let ok = match &w {
            Some(w) => build_lproj_module(r, x, w.a, w.b, w.u, w.v, w.s, w.t).is_ok(),
            None => false,
        };
        out.push(RankOneCheck {
            element: x,
            witness: w.map(|w| [w.a, w.b, w.u, w.v, w.s, w.t]),
            ok,
        });
    }
    Ok(out)
}

fn check_t2gsr(r: &Ring, caps: &CheckCaps) -> Result<Verdict> {
    let semi = is_semiregular(r)?.holds;
    let arith = is_arithmetical(r)?.holds;
    let oracle = all_cyclic_two_periodic(r, caps)?;
    let mut agree = oracle.as_ref().is_none_or(|o| o.all_positive == (semi && arith));
    let mut failures = Vec::new();
    if semi && arith {
        for c in rank_one_checks(r)? {
            if !c.ok {
                agree = false;
                failures.push(c);
            }
        }
    }
    Ok(verdict(
        agree,
        json!({ "semiregular": semi, "arithmetical": arith, "oracle": oracle, "rank_one_failures": failures }),
    ))
}

fn check_two_semiregular(r: &Ring, caps: &CheckCaps) -> Result<Verdict> {
    let flag = is_2_semiregular(r)?;
    let oracle = all_cyclic_two_periodic(r, caps)?;
    let agree = oracle.as_ref().is_none_or(|o| o.all_positive == flag.holds);
    Ok(verdict(agree, json!({ "two_semiregular": flag.holds, "witness": flag.witness, "oracle": oracle })))
}

fn trivext_row(a: &Ring, e: &Module) -> Result<(bool, Value)> {
    let (breakdown, direct) = check_trivext(a, e)?;
    let agree = breakdown.holds == direct;
    Ok((
        agree,
        json!({ "module": e.spec(), "predicted": breakdown.holds, "direct": direct, "breakdown": breakdown }),
    ))
}

/// For a spec `trivext:(A;E)` checks that extension; otherwise uses the ring
/// as base and runs every nonzero cyclic module within the cap.
fn check_ttriv(r: &Ring, caps: &CheckCaps) -> Result<Verdict> {
    let mut rows = Vec::new();
    let mut agree = true;
    if let Ok(RingExpr::TrivialExtension(base, m)) = parse_ring_expr(r.spec()) {
        let a = build_ring(&base)?;
        let e = build_module(&a, &m)?;
        if e.is_zero() {
            return Ok(Verdict::Skip("zero module".into()));
        }
        let (ok, row) = trivext_row(&a, &e)?;
        agree &= ok;
        rows.push(row);
    } else {
        for e in cyclic_modules(r)? {
            if e.is_zero() || e.size() > caps.max_trivext_module {
                continue;
            }
            let (ok, row) = trivext_row(r, &e)?;
            agree &= ok;
            rows.push(row);
        }
    }
    Ok(verdict(agree, json!({ "extensions": rows })))
}

/// For a spec `dup:(R;gens)` checks that duplication; otherwise every ideal
/// whose duplication stays within the cap.
fn check_tfp(r: &Ring, caps: &CheckCaps) -> Result<Verdict> {
    let mut rows = Vec::new();
    if let Ok(RingExpr::Duplication(base, gens)) = parse_ring_expr(r.spec()) {
        let b = build_ring(&base)?;
        rows.push(duplication_predicate(&b, &gens)?);
    } else {
        for i in r.ideals()? {
            if r.size() * i.len() > caps.max_duplication {
                continue;
            }
            rows.push(duplication_predicate(r, i.gens())?);
        }
    }
    Ok(Verdict::Pass(json!({ "duplications": rows })))
}

/// Every pair module `(U, f)` over `A ∝ A` with `|U| ≤ cap`, one per
/// isomorphism class of the module over `A ∝ A`. `A` must be regular, so
/// every `A`-module is a sum of projective pieces.
pub fn enumerate_pair_modules(ext: &Ring, base: &Ring, cap: usize, hom_bound: u128) -> Result<Vec<PairModule>> {
    if !is_vnr(base)?.holds {
        return Err(Error::Precondition(format!("{} is not von Neumann regular", base.spec())));
    }
    let mut classes: Vec<(PairModule, Module)> = Vec::new();
    for u in enumerate_projectives_up_to_size(base, cap)? {
        let mut endos: Vec<ModuleHom> = Vec::new();
        let mut failure = None;
        for_each_hom(&u, &u, HomFilter::Any, hom_bound, |_, map| {
            if u.elements().all(|x| map[map[x]] == 0) {
                match ModuleHom::from_map(u.clone(), u.clone(), map.to_vec()) {
                    Ok(h) => endos.push(h),
                    Err(e) => {
                        failure = Some(e);
                        return std::ops::ControlFlow::Break(());
                    }
                }
            }
            std::ops::ControlFlow::Continue(())
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        for f in endos {
            let p = PairModule::new(ext, u.clone(), f)?;
            let m = p.induced()?;
            let mut seen = false;
            for (_, other) in classes.iter().filter(|(q, _)| q.carrier().size() == u.size()) {
                if is_isomorphic(&m, other)?.is_some() {
                    seen = true;
                    break;
                }
            }
            if !seen {
                classes.push((p, m));
            }
        }
    }
    Ok(classes.into_iter().map(|(p, _)| p).collect())
}

fn check_pfperiodic(r: &Ring, caps: &CheckCaps) -> Result<Verdict> {
    let Ok(RingExpr::TrivialExtension(base, ModuleExpr::Free(1))) = parse_ring_expr(r.spec()) else {
        return Ok(Verdict::Skip("not of the form trivext:(A;free:1)".into()));
    };
    let a = build_ring(&base)?;
    if a.add(a.one(), a.one()) != 0 || !is_vnr(&a)?.holds {
        return Ok(Verdict::Skip("base is not a regular ring of characteristic 2".into()));
    }
    let mut rows = Vec::new();
    let mut agree = true;
    for p in enumerate_pair_modules(r, &a, caps.max_pair_carrier, caps.oracle.hom_bound)? {
        let flat = pair_flatness(&p)?;
        let res = char2_f_periodic(&p)?;
        let ok = res.g_flat && res.certificate.all_joints_exact() && res.certificate.is_positive();
        agree &= ok;
        rows.push(json!({
            "carrier": p.carrier().spec(),
            "endo": p.endo().images(),
            "flat": flat,
            "resolution_ok": ok,
        }));
    }
    Ok(verdict(agree, json!({ "pair_modules": rows })))
}

fn check_lattice(r: &Ring) -> Result<Verdict> {
    let report = classify_ring(r)?;
    let violations = check_implications(&report.flags);
    Ok(verdict(violations.is_empty(), json!({ "flags": report.flags, "violations": violations })))
}

fn check_plocs(r: &Ring) -> Result<Verdict> {
    let one = is_1_semiregular(r)?.holds;
    let two = is_2_semiregular(r)?.holds;
    let mut rows = Vec::new();
    let mut agree = true;
    for loc in all_localizations(r)? {
        let q = &loc.quotient_ring;
        let (l1, l2) = (is_1_semiregular(q)?.holds, is_2_semiregular(q)?.holds);
        agree &= (!one || l1) && (!two || l2);
        rows.push(json!({ "prime": loc.prime.gens(), "one_semiregular": l1, "two_semiregular": l2 }));
    }
    Ok(verdict(
        agree,
        json!({ "one_semiregular": one, "two_semiregular": two, "localizations": rows }),
    ))
}

fn check_pfact(r: &Ring) -> Result<Verdict> {
    if !is_1_semiregular(r)?.holds {
        return Ok(Verdict::Pass(json!({ "one_semiregular": false })));
    }
    let mut failing = Vec::new();
    for i in r.ideals()? {
        let (q, _) = build_quotient(r, i.gens())?;
        if !is_1_semiregular(&q)?.holds {
            failing.push(q.spec().to_string());
        }
    }
    Ok(verdict(failing.is_empty(), json!({ "one_semiregular": true, "failing_quotients": failing })))
}

/// For a spec `prod:[…]` compares against the factors; otherwise against
/// the product with the two-element field.
fn check_pprod(r: &Ring) -> Result<Verdict> {
    let (product, factors) = match parse_ring_expr(r.spec()) {
        Ok(RingExpr::Product(parts)) => {
            let factors: Vec<Ring> = parts.iter().map(build_ring).collect::<Result<_>>()?;
            (r.clone(), factors)
        }
        _ => {
            let factors = vec![r.clone(), build_zmod(2)?];
            (build_product(&factors)?, factors)
        }
    };
    let mut one = true;
    let mut two = true;
    for f in &factors {
        one &= is_1_semiregular(f)?.holds;
        two &= is_2_semiregular(f)?.holds;
    }
    let p1 = is_1_semiregular(&product)?.holds;
    let p2 = is_2_semiregular(&product)?.holds;
    Ok(verdict(
        p1 == one && p2 == two,
        json!({
            "product": product.spec(),
            "one_semiregular": [p1, one],
            "two_semiregular": [p2, two],
        }),
    ))
}

fn check_ccycval(r: &Ring) -> Result<Verdict> {
    match local_chain_conditions(r)? {
        None => Ok(Verdict::Skip("not a local ring other than a field".into())),
        Some(c) => Ok(verdict(c.iter().all(|&x| x == c[0]), json!({ "conditions": c }))),
    }
}

fn check_pzerokrull(r: &Ring) -> Result<Verdict> {
    let d = zero_krull_decomposition(r)?;
    Ok(Verdict::Pass(json!({
        "maximal_ideals": d.x.iter().map(|p| p.gens().to_vec()).collect::<Vec<_>>(),
        "ideal": d.ideal.elements(),
    })))
}
