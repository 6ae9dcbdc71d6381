//! Exhaustive searches for periodic projective resolutions, and the
//! explicit constructions that produce them: the rank-one module attached to
//! an element with a two-generated annihilator, the splice of a 2-periodic
//! sequence with a free cover, and the flat resolution of modules over
//! `A ∝ A` in characteristic 2.
//!
//! Over a finite ring a finitely presented flat module is projective, so
//! flat and projective periodicity are the same notion here. Every
//! certificate carries that remark.

use std::collections::HashSet;
use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::classify::{is_arithmetical, is_vnr};
use crate::error::{Error, Result};
use crate::fitting::{fitting_ideals, FittingChain};
use crate::ideal::{annihilator, ideal_generated, principal_set, Ideal};
use crate::module::{
    cyclic, direct_sum, direct_sum_named, for_each_hom, free, from_ideal, is_flat, is_isomorphic, is_projective,
    local_ranks, present, quotient, submodule, HomFilter, HomRecord, Matrix, Module, ModuleHom, PairModule,
    DEFAULT_HOM_BOUND,
};
use crate::ring::{FiniteRing, Ring};

pub const COLLAPSE_NOTE: &str =
    "flat and projective periodicity coincide: finite modules over finite rings are finitely presented";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCaps {
    /// Largest module the oracles accept.
    pub max_module_size: usize,
    /// Largest number of generator-image tuples one hom search may visit.
    pub hom_bound: u128,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            max_module_size: 16,
            hom_bound: DEFAULT_HOM_BOUND,
        }
    }
}

fn diag_spec(r: &FiniteRing, idempotents: &[usize]) -> String {
    let n = idempotents.len();
    let mut m = Matrix::zeros(n, n);
    for (i, &e) in idempotents.iter().enumerate() {
        m.set(i, i, r.sub(r.one(), e));
    }
    m.spec()
}

/// `⊕ Re` over the listed idempotents (with repetition), each summand
/// presented as `R/(1−e)`.
fn projective_from_pieces(r: &Ring, idempotents: &[usize]) -> Result<Module> {
    if idempotents.iter().all(|&e| e == r.one()) {
        return free(r, idempotents.len());
    }
    let parts: Vec<Module> = idempotents
        .iter()
        .map(|&e| cyclic(r, &[r.sub(r.one(), e)]))
        .collect::<Result<_>>()?;
    Ok(direct_sum_named(&parts, Some(diag_spec(r, idempotents)))?.module)
}

/// Every finitely generated projective of cardinality at most `cap`, one
/// per isomorphism class. Finite rings are semiperfect, so these are the
/// sums `⊕ (Re_i)^{k_i}` over the primitive idempotents `e_i`. Sorted by
/// cardinality, then by exponent vector.
pub fn enumerate_projectives_up_to_size(r: &Ring, cap: usize) -> Result<Vec<Module>> {
    if cap == 0 {
        return Err(Error::InvalidArgument("projective size cap must be positive".into()));
    }
    let factors = r.local_factors()?;
    let sizes: Vec<usize> = factors
        .iter()
        .map(|f| principal_set(r, f.idempotent).len())
        .collect();
    let mut exps: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut cur = vec![0usize; factors.len()];
    fn go(i: usize, size: usize, cap: usize, sizes: &[usize], cur: &mut Vec<usize>, out: &mut Vec<(usize, Vec<usize>)>) {
        if i == sizes.len() {
            out.push((size, cur.clone()));
            return;
        }
        let mut s = size;
        let mut k = 0;
        loop {
            cur[i] = k;
            go(i + 1, s, cap, sizes, cur, out);
            match s.checked_mul(sizes[i]) {
                Some(next) if next <= cap && sizes[i] > 1 => {
                    s = next;
                    k += 1;
                }
                _ => break,
            }
        }
        cur[i] = 0;
    }
    go(0, 1, cap, &sizes, &mut cur, &mut exps);
    exps.sort();
    let mut out = Vec::with_capacity(exps.len());
    for (_, e) in exps {
        let uniform = !e.is_empty() && e.iter().all(|&k| k == e[0]);
        let m = if e.iter().all(|&k| k == 0) {
            free(r, 0)?
        } else if uniform {
            free(r, e[0])?
        } else {
            let idems: Vec<usize> = factors
                .iter()
                .zip(&e)
                .flat_map(|(f, &k)| std::iter::repeat(f.idempotent).take(k))
                .collect();
            projective_from_pieces(r, &idems)?
        };
        out.push(m);
    }
    Ok(out)
}

/// A complex `M_0 → M_1 → … → M_k`, read as `0 → M_0 → … → M_k → 0`.
#[derive(Clone, Debug)]
pub struct ExactSequence {
    pub modules: Vec<Module>,
    pub maps: Vec<ModuleHom>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JointCheck {
    pub position: usize,
    pub module: String,
    pub exact: bool,
}

impl ExactSequence {
    pub fn new(modules: Vec<Module>, maps: Vec<ModuleHom>) -> Result<ExactSequence> {
        if modules.len() != maps.len() + 1 {
            return Err(Error::InvalidArgument("sequence needs one more module than maps".into()));
        }
        for (i, h) in maps.iter().enumerate() {
            if !std::sync::Arc::ptr_eq(h.source(), &modules[i]) || !std::sync::Arc::ptr_eq(h.target(), &modules[i + 1])
            {
                return Err(Error::InvalidArgument(format!("map {i} does not connect its neighbours")));
            }
        }
        Ok(ExactSequence { modules, maps })
    }

    /// Exactness at every position, including injectivity of the first
    /// map and surjectivity of the last.
    pub fn joints(&self) -> Vec<JointCheck> {
        let n = self.modules.len();
        (0..n)
            .map(|i| {
                let m = &self.modules[i];
                let kernel = if i + 1 < n {
                    self.maps[i].kernel_set()
                } else {
                    let mut all = FixedBitSet::with_capacity(m.size());
                    all.insert_range(..);
                    all
                };
                let image = if i > 0 {
                    self.maps[i - 1].image_set()
                } else {
                    m.zero_set()
                };
                JointCheck {
                    position: i,
                    module: m.spec().to_string(),
                    exact: kernel == image,
                }
            })
            .collect()
    }

    pub fn is_exact(&self) -> bool {
        self.joints().iter().all(|j| j.exact)
            && self.maps.windows(2).all(|w| {
                w[0].source()
                    .elements()
                    .all(|x| w[1].apply(w[0].apply(x)) == 0)
            })
    }

    pub fn record(&self) -> SequenceRecord {
        SequenceRecord {
            modules: self.modules.iter().map(|m| m.spec().to_string()).collect(),
            sizes: self.modules.iter().map(|m| m.size()).collect(),
            maps: self.maps.iter().map(|h| h.record()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceRecord {
    pub modules: Vec<String>,
    pub sizes: Vec<usize>,
    pub maps: Vec<HomRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    OnePeriodic,
    TwoPeriodic,
    Negative,
}

/// What a search looked at. For negative certificates this is the full
/// space, so the verdict does not depend on visiting order.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SearchSummary {
    pub description: String,
    pub projectives: Vec<String>,
    pub injective_homs: u128,
    pub distinct_images: usize,
    pub exhaustive: bool,
}

#[derive(Clone, Debug)]
pub struct PeriodicityCertificate {
    pub kind: CertificateKind,
    pub ring: String,
    pub module: String,
    pub sequence: Option<ExactSequence>,
    pub joints: Vec<JointCheck>,
    /// For each middle term: projective, and free.
    pub projective_terms: Vec<bool>,
    pub free_terms: Vec<bool>,
    pub search: SearchSummary,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateRecord {
    pub kind: CertificateKind,
    pub ring: String,
    pub module: String,
    pub sequence: Option<SequenceRecord>,
    pub joints: Vec<JointCheck>,
    pub projective_terms: Vec<bool>,
    pub free_terms: Vec<bool>,
    pub search: SearchSummary,
    pub note: String,
}

impl PeriodicityCertificate {
    pub fn is_positive(&self) -> bool {
        self.kind != CertificateKind::Negative
    }

    pub fn all_joints_exact(&self) -> bool {
        self.joints.iter().all(|j| j.exact)
    }

    pub fn record(&self) -> CertificateRecord {
        CertificateRecord {
            kind: self.kind,
            ring: self.ring.clone(),
            module: self.module.clone(),
            sequence: self.sequence.as_ref().map(|s| s.record()),
            joints: self.joints.clone(),
            projective_terms: self.projective_terms.clone(),
            free_terms: self.free_terms.clone(),
            search: self.search.clone(),
            note: self.note.clone(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.record()).expect("certificate serializes")
    }
}

/// Projective with the same rank at every maximal ideal; over a finite
/// ring that is exactly being free.
pub fn is_free(m: &Module) -> Result<bool> {
    if m.is_zero() {
        return Ok(true);
    }
    let ranks = local_ranks(m)?;
    Ok(ranks.iter().all(|l| l.free) && ranks.windows(2).all(|w| w[0].generators == w[1].generators))
}

fn positive(kind: CertificateKind, m: &Module, seq: ExactSequence, search: SearchSummary) -> Result<PeriodicityCertificate> {
    let joints = seq.joints();
    if !seq.is_exact() {
        return Err(Error::Invariant(format!("constructed sequence for {} is not exact", m.spec())));
    }
    let middle = &seq.modules[1..seq.modules.len() - 1];
    let projective_terms = middle.iter().map(is_projective).collect::<Result<Vec<_>>>()?;
    if projective_terms.iter().any(|p| !p) {
        return Err(Error::Invariant(format!("non-projective middle term for {}", m.spec())));
    }
    let free_terms = middle.iter().map(is_free).collect::<Result<Vec<_>>>()?;
    Ok(PeriodicityCertificate {
        kind,
        ring: m.ring().spec().to_string(),
        module: m.spec().to_string(),
        sequence: Some(seq),
        joints,
        projective_terms,
        free_terms,
        search,
        note: COLLAPSE_NOTE.to_string(),
    })
}

fn negative(m: &Module, search: SearchSummary) -> PeriodicityCertificate {
    PeriodicityCertificate {
        kind: CertificateKind::Negative,
        ring: m.ring().spec().to_string(),
        module: m.spec().to_string(),
        sequence: None,
        joints: Vec::new(),
        projective_terms: Vec::new(),
        free_terms: Vec::new(),
        search,
        note: COLLAPSE_NOTE.to_string(),
    }
}

fn check_size(m: &Module, caps: &OracleCaps) -> Result<()> {
    if m.size() > caps.max_module_size {
        return Err(Error::cap("oracle module size", caps.max_module_size as u128, m.size() as u128));
    }
    Ok(())
}

struct Embedding {
    projective: Module,
    inclusion: ModuleHom,
    /// Cokernel map composed with the isomorphism onto the target.
    onto: ModuleHom,
}

/// Searches projectives `P` of cardinality `|M|·|target|` for an injective
/// `M → P` whose cokernel is isomorphic to `target`.
fn find_embedding(m: &Module, target: &Module, caps: &OracleCaps, summary: &mut SearchSummary) -> Result<Option<Embedding>> {
    let r = m.ring();
    let want = m.size() * target.size();
    let candidates: Vec<Module> = enumerate_projectives_up_to_size(r, want)?
        .into_iter()
        .filter(|p| p.size() == want)
        .collect();
    for p in candidates {
        summary.projectives.push(p.spec().to_string());
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut found: Option<Embedding> = None;
        let mut failure: Option<Error> = None;
        for_each_hom(m, &p, HomFilter::Injective, caps.hom_bound, |images, map| {
            summary.injective_homs += 1;
            let mut image: Vec<usize> = map.to_vec();
            image.sort_unstable();
            image.dedup();
            if !seen.insert(image.clone()) {
                return ControlFlow::Continue(());
            }
            summary.distinct_images += 1;
            let attempt = (|| -> Result<Option<Embedding>> {
                let mut set = FixedBitSet::with_capacity(p.size());
                image.iter().for_each(|&x| set.insert(x));
                let (coker, projection) = quotient(&p, &set)?;
                let Some(iso) = is_isomorphic(&coker, target)? else {
                    return Ok(None);
                };
                Ok(Some(Embedding {
                    projective: p.clone(),
                    inclusion: ModuleHom::new(m.clone(), p.clone(), images.to_vec())?,
                    onto: projection.then(&iso)?,
                }))
            })();
            match attempt {
                Ok(Some(e)) => {
                    found = Some(e);
                    ControlFlow::Break(())
                }
                Ok(None) => ControlFlow::Continue(()),
                Err(e) => {
                    failure = Some(e);
                    ControlFlow::Break(())
                }
            }
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

fn zero_certificate(m: &Module, kind: CertificateKind, terms: usize) -> Result<PeriodicityCertificate> {
    let zero = free(m.ring(), 0)?;
    let mut modules = vec![m.clone()];
    modules.extend(std::iter::repeat(zero.clone()).take(terms));
    modules.push(m.clone());
    let maps = modules
        .windows(2)
        .map(|w| ModuleHom::zero(&w[0], &w[1]))
        .collect();
    let seq = ExactSequence::new(modules, maps)?;
    positive(
        kind,
        m,
        seq,
        SearchSummary {
            description: "zero module".into(),
            exhaustive: true,
            ..Default::default()
        },
    )
}

/// Decides whether `0 → M → P → M → 0` exists with `P` projective. Such a
/// `P` has `|P| = |M|²`, so the search over projectives of that size (up to
/// isomorphism) and injective homs (up to image) is exhaustive.
pub fn is_1_periodic_oracle(m: &Module, caps: &OracleCaps) -> Result<PeriodicityCertificate> {
    check_size(m, caps)?;
    if m.is_zero() {
        return zero_certificate(m, CertificateKind::OnePeriodic, 1);
    }
    let mut summary = SearchSummary {
        description: format!(
            "projectives of cardinality {} up to isomorphism; injective homs from the module up to image",
            m.size() * m.size()
        ),
        ..Default::default()
    };
    match find_embedding(m, m, caps, &mut summary)? {
        Some(e) => {
            let seq = ExactSequence::new(vec![m.clone(), e.projective, m.clone()], vec![e.inclusion, e.onto])?;
            positive(CertificateKind::OnePeriodic, m, seq, summary)
        }
        None => {
            summary.exhaustive = true;
            Ok(negative(m, summary))
        }
    }
}

fn factor_part(m: &Module, e: usize) -> FixedBitSet {
    let mut part = FixedBitSet::with_capacity(m.size());
    for x in m.elements() {
        part.insert(m.act(e, x));
    }
    part
}

/// Least elements of `eM` whose classes form a basis of `eM / P·eM`, one
/// list per local factor.
fn local_minimal_generators(m: &Module) -> Result<Vec<Vec<usize>>> {
    let r = m.ring();
    let mut out = Vec::new();
    for factor in r.local_factors()? {
        let part = factor_part(m, factor.idempotent);
        let part_list: Vec<usize> = part.ones().collect();
        let prods: Vec<usize> = factor
            .maximal
            .gens()
            .iter()
            .flat_map(|&p| part_list.iter().map(move |&y| (p, y)))
            .map(|(p, y)| m.act(p, y))
            .collect();
        let mut chosen = Vec::new();
        let mut span = m.span(&prods);
        for &y in &part_list {
            if span.count_ones(..) == part_list.len() {
                break;
            }
            if !span.contains(y) {
                chosen.push(y);
                span = m.span_over(&span, &[y]);
            }
        }
        out.push(chosen);
    }
    Ok(out)
}

/// Projective cover `⊕ (Re_i)^{μ(e_iM)} ↠ M`.
pub fn projective_cover(m: &Module) -> Result<(Module, ModuleHom)> {
    let r = m.ring();
    let gens = local_minimal_generators(m)?;
    let mut idems = Vec::new();
    let mut images = Vec::new();
    for (factor, ys) in r.local_factors()?.iter().zip(&gens) {
        for &y in ys {
            idems.push(factor.idempotent);
            images.push(y);
        }
    }
    let p = projective_from_pieces(r, &idems)?;
    let cover = ModuleHom::new(p.clone(), m.clone(), images)?;
    if !cover.is_surjective() {
        return Err(Error::Invariant(format!("projective cover of {} is not surjective", m.spec())));
    }
    Ok((p, cover))
}

/// Free module of rank `μ(M)` with a surjection onto `M`. Over a product
/// the minimal number of generators is the largest local one.
pub fn free_cover(m: &Module) -> Result<(Module, ModuleHom)> {
    let r = m.ring();
    let gens = local_minimal_generators(m)?;
    let rank = gens.iter().map(|g| g.len()).max().unwrap_or(0);
    let images: Vec<usize> = (0..rank)
        .map(|j| {
            gens.iter()
                .filter_map(|g| g.get(j))
                .fold(0, |acc, &y| m.add(acc, y))
        })
        .collect();
    let f = free(r, rank)?;
    let cover = ModuleHom::new(f.clone(), m.clone(), images)?;
    if !cover.is_surjective() {
        return Err(Error::Invariant(format!("free cover of {} is not surjective", m.spec())));
    }
    Ok((f, cover))
}

/// Decides whether `0 → M → P₂ → P₁ → M → 0` exists with projective
/// terms. `P₁` is the projective cover with kernel `K`; any other choice of
/// `P₁` changes `K` only up to projective summands, and a pullback moves a
/// solution for one choice to the other, so it suffices to search
/// `0 → M → P₂ → K → 0` over projectives with `|P₂| = |M|·|K|`.
pub fn is_2_periodic_oracle(m: &Module, caps: &OracleCaps) -> Result<PeriodicityCertificate> {
    check_size(m, caps)?;
    if m.is_zero() {
        return zero_certificate(m, CertificateKind::TwoPeriodic, 2);
    }
    let (p1, cover) = projective_cover(m)?;
    let (k, k_incl) = submodule(&p1, &cover.kernel_set())?;
    let mut summary = SearchSummary {
        description: format!(
            "projective cover of cardinality {} with kernel of cardinality {}; projectives of cardinality {} up to isomorphism; injective homs up to image",
            p1.size(),
            k.size(),
            m.size() * k.size()
        ),
        ..Default::default()
    };
    match find_embedding(m, &k, caps, &mut summary)? {
        Some(e) => {
            let middle = e.onto.then(&k_incl)?;
            let seq = ExactSequence::new(
                vec![m.clone(), e.projective, p1, m.clone()],
                vec![e.inclusion, middle, cover],
            )?;
            positive(CertificateKind::TwoPeriodic, m, seq, summary)
        }
        None => {
            summary.exhaustive = true;
            Ok(negative(m, summary))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct UvstWitness {
    pub a: usize,
    pub b: usize,
    pub u: usize,
    pub v: usize,
    pub s: usize,
    pub t: usize,
}

/// Generators `(a, b)` of `(0:x)`: `(g, g)` with `g` the least generator
/// when the annihilator is principal, otherwise the least pair `a < b`.
pub fn annihilator_pair(r: &FiniteRing, x: usize) -> Option<(usize, usize)> {
    let ann = annihilator(r, &[x]);
    if let Some(g) = ann
        .elements()
        .iter()
        .copied()
        .find(|&g| principal_set(r, g).len() == ann.len())
    {
        return Some((g, g));
    }
    let elems = ann.elements();
    for (i, &a) in elems.iter().enumerate() {
        for &b in &elems[i + 1..] {
            if ideal_generated(r, &[a, b]) == ann {
                return Some((a, b));
            }
        }
    }
    None
}

/// Least `(u, v, s, t)` with `u, v ∈ R`, `s, t ∈ (0:x)` and
/// `bu = av`, `su = a(1+t)`, `sv = b(1+t)`, for the generators chosen by
/// [`annihilator_pair`]. `None` when `(0:x)` needs more than two
/// generators or no tuple exists.
pub fn find_uvst_witness(r: &FiniteRing, x: usize) -> Result<Option<UvstWitness>> {
    let Some((a, b)) = annihilator_pair(r, x) else {
        return Ok(None);
    };
    let ann = annihilator(r, &[x]);
    let one = r.one();
    for u in r.elements() {
        for v in r.elements() {
            if r.mul(b, u) != r.mul(a, v) {
                continue;
            }
            for &s in ann.elements() {
                for &t in ann.elements() {
                    let unit = r.add(one, t);
                    if r.mul(s, u) == r.mul(a, unit) && r.mul(s, v) == r.mul(b, unit) {
                        return Ok(Some(UvstWitness { a, b, u, v, s, t }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// The module `G` on generators `g, h` with relations `xg = 0`,
/// `ug + ah = 0`, `vg + bh = 0`, and the sequence `0 → R/Rx → G → Rx → 0`.
#[derive(Clone, Debug)]
pub struct RankOneModule {
    pub module: Module,
    pub fitting: FittingChain,
    pub sequence: ExactSequence,
}

#[allow(clippy::too_many_arguments)]
pub fn build_lproj_module(
    r: &Ring,
    x: usize,
    a: usize,
    b: usize,
    u: usize,
    v: usize,
    s: usize,
    t: usize,
) -> Result<RankOneModule> {
    if [x, a, b, u, v, s, t].iter().any(|&e| e >= r.size()) {
        return Err(Error::InvalidArgument("element index out of range".into()));
    }
    if !is_arithmetical(r)?.holds {
        return Err(Error::Precondition(format!("{} is not arithmetical", r.spec())));
    }
    let ann = annihilator(r, &[x]);
    if ideal_generated(r, &[a, b]) != ann {
        return Err(Error::Precondition(format!("(0:{x}) is not generated by {a} and {b}")));
    }
    if !ann.contains(s) || !ann.contains(t) {
        return Err(Error::Precondition(format!("s = {s} and t = {t} must lie in (0:{x})")));
    }
    let unit = r.add(r.one(), t);
    if r.mul(b, u) != r.mul(a, v) {
        return Err(Error::Precondition("bu = av fails".into()));
    }
    if r.mul(s, u) != r.mul(a, unit) {
        return Err(Error::Precondition("su = a(1+t) fails".into()));
    }
    if r.mul(s, v) != r.mul(b, unit) {
        return Err(Error::Precondition("sv = b(1+t) fails".into()));
    }
    let g_mod = present(r, &Matrix::from_rows(vec![vec![x, u, v], vec![0, a, b]]))?;
    let fitting = fitting_ideals(&g_mod)?;
    if !(fitting.get(0).is_zero() && fitting.get(1).is_whole(r)) {
        return Err(Error::Invariant(format!(
            "Fitting ideals show {} is not projective of rank one",
            g_mod.spec()
        )));
    }
    if !is_projective(&g_mod)? {
        return Err(Error::Invariant(format!(
            "{} has rank-one Fitting ideals but is not locally free",
            g_mod.spec()
        )));
    }
    let left = cyclic(r, &[x])?;
    let rx: Ideal = ideal_generated(r, &[x]);
    let right = from_ideal(r, &rx)?;
    let pos = rx
        .elements()
        .iter()
        .position(|&y| y == x)
        .expect("x lies in Rx");
    let g = g_mod.generators()[0];
    let alpha = ModuleHom::new(left.clone(), g_mod.clone(), vec![g])?;
    let pi = ModuleHom::new(g_mod.clone(), right.clone(), vec![0, pos])?;
    let sequence = ExactSequence::new(vec![left, g_mod.clone(), right], vec![alpha, pi])?;
    if !sequence.is_exact() {
        return Err(Error::Invariant(format!("0 → R/Rx → {} → Rx → 0 is not exact", g_mod.spec())));
    }
    Ok(RankOneModule {
        module: g_mod,
        fitting,
        sequence,
    })
}

/// A 2-periodic sequence `W → F₁ → F₀ → W` and a surjection `α: F → W`
/// from a free module.
#[derive(Clone, Debug)]
pub struct SpliceInput {
    pub sequence: ExactSequence,
    pub alpha: ModuleHom,
}

impl SpliceInput {
    /// Uses the sequence of a positive 2-periodic certificate together with
    /// the minimal free cover of `W`.
    pub fn from_certificate(cert: &PeriodicityCertificate) -> Result<SpliceInput> {
        let seq = cert
            .sequence
            .clone()
            .filter(|s| s.modules.len() == 4)
            .ok_or_else(|| Error::Precondition("certificate does not hold a four-term sequence".into()))?;
        let (_, alpha) = free_cover(&seq.modules[0])?;
        Ok(SpliceInput { sequence: seq, alpha })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedCheck {
    pub name: &'static str,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct SpliceResult {
    pub g: Module,
    /// `0 → W → G → F → W → 0`.
    pub sequence: ExactSequence,
    pub checks: Vec<NamedCheck>,
}

impl SpliceResult {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn maps_agree(a: &[usize], b: &[usize]) -> bool {
    a == b
}

/// Builds `G = ker(γ)` for `γ(x, y) = φ(x) + β(y)` on `F₁ ⊕ F`, where `β`
/// lifts `α` through `π`, and verifies the resulting diagram.
pub fn splice_2f(input: &SpliceInput) -> Result<SpliceResult> {
    let seq = &input.sequence;
    if seq.modules.len() != 4 || !seq.is_exact() {
        return Err(Error::Precondition("input must be an exact sequence W → F₁ → F₀ → W".into()));
    }
    let (w, f1, f0) = (&seq.modules[0], &seq.modules[1], &seq.modules[2]);
    let (iota, phi, pi) = (&seq.maps[0], &seq.maps[1], &seq.maps[2]);
    if !std::sync::Arc::ptr_eq(&seq.modules[3], w) {
        return Err(Error::Precondition("both ends of the sequence must be the same module".into()));
    }
    if !is_projective(f1)? || !is_projective(f0)? {
        return Err(Error::Precondition("middle terms must be projective".into()));
    }
    let alpha = &input.alpha;
    let f = alpha.source();
    if !std::sync::Arc::ptr_eq(alpha.target(), w) || !alpha.is_surjective() {
        return Err(Error::Precondition("α must be a surjection onto W".into()));
    }
    if !is_free(f)? {
        return Err(Error::Precondition("the source of α must be free".into()));
    }
    let lift_images: Vec<usize> = f
        .generators()
        .iter()
        .map(|&gen| {
            let target = alpha.apply(gen);
            f0.elements()
                .find(|&y| pi.apply(y) == target)
                .ok_or_else(|| Error::Invariant("π is not surjective".into()))
        })
        .collect::<Result<_>>()?;
    let beta = ModuleHom::new(f.clone(), f0.clone(), lift_images)
        .map_err(|e| Error::Invariant(format!("no lift of α through π: {e}")))?;
    let sum = direct_sum(&[f1.clone(), f.clone()])?;
    let s = &sum.module;
    let (p_first, p_second) = (&sum.projections[0], &sum.projections[1]);
    let i_first = &sum.injections[0];
    let gamma_map: Vec<usize> = s
        .elements()
        .map(|z| f0.add(phi.apply(p_first.apply(z)), beta.apply(p_second.apply(z))))
        .collect();
    let gamma = ModuleHom::from_map(s.clone(), f0.clone(), gamma_map)?;
    let (g, g_incl) = submodule(s, &gamma.kernel_set())?;
    let mut position = vec![usize::MAX; s.size()];
    for y in g.elements() {
        position[g_incl.apply(y)] = y;
    }
    let w_to_g: Vec<usize> = w.elements().map(|x| position[i_first.apply(iota.apply(x))]).collect();
    if w_to_g.contains(&usize::MAX) {
        return Err(Error::Invariant("W does not land in ker γ".into()));
    }
    let w_to_g = ModuleHom::from_map(w.clone(), g.clone(), w_to_g)?;
    let g_to_f = ModuleHom::from_map(g.clone(), f.clone(), g.elements().map(|y| p_second.apply(g_incl.apply(y))).collect())?;
    let out = ExactSequence::new(
        vec![w.clone(), g.clone(), f.clone(), w.clone()],
        vec![w_to_g.clone(), g_to_f.clone(), alpha.clone()],
    )?;

    let l = alpha.kernel_set();
    let k = pi.kernel_set();
    let mut checks = Vec::new();
    let mut check = |name: &'static str, passed: bool| checks.push(NamedCheck { name, passed });
    check("γ surjective", gamma.is_surjective());
    check("G projective", is_projective(&g)?);
    check("G and F have equal local ranks", {
        let rg: Vec<usize> = local_ranks(&g)?.iter().map(|x| x.generators).collect();
        let rf: Vec<usize> = local_ranks(f)?.iter().map(|x| x.generators).collect();
        rg == rf
    });
    // left column 0 → W → F₁ → K → 0
    check(
        "left column exact",
        iota.is_injective() && phi.image_set() == k && phi.kernel_set() == iota.image_set(),
    );
    // middle column 0 → G → F₁ ⊕ F → F₀ → 0
    check("middle column exact", gamma.is_surjective() && g_incl.image_set() == gamma.kernel_set());
    // right column 0 → L → F → W → 0
    check("right column exact", alpha.is_surjective());
    // top row 0 → W → G → L → 0
    check(
        "top row exact",
        w_to_g.is_injective() && g_to_f.image_set() == l && g_to_f.kernel_set() == w_to_g.image_set(),
    );
    // bottom row 0 → K → F₀ → W → 0
    check("bottom row exact", pi.is_surjective());
    let upper_left: Vec<usize> = w.elements().map(|x| g_incl.apply(w_to_g.apply(x))).collect();
    let upper_left_other: Vec<usize> = w.elements().map(|x| i_first.apply(iota.apply(x))).collect();
    check("upper left square commutes", maps_agree(&upper_left, &upper_left_other));
    let upper_right: Vec<usize> = g.elements().map(|y| p_second.apply(g_incl.apply(y))).collect();
    check("upper right square commutes", maps_agree(&upper_right, g_to_f.map()));
    let lower_left: Vec<usize> = f1.elements().map(|x| gamma.apply(i_first.apply(x))).collect();
    check("lower left square commutes", maps_agree(&lower_left, phi.map()));
    let lower_right: Vec<usize> = s.elements().map(|z| alpha.apply(p_second.apply(z))).collect();
    let lower_right_other: Vec<usize> = s.elements().map(|z| pi.apply(gamma.apply(z))).collect();
    check("lower right square commutes", maps_agree(&lower_right, &lower_right_other));
    let lift_ok = f.elements().all(|y| pi.apply(beta.apply(y)) == alpha.apply(y));
    check("β lifts α", lift_ok);
    check("spliced sequence exact", out.is_exact());
    Ok(SpliceResult { g, sequence: out, checks })
}

/// A short exact sequence `0 → U → H → U' → 0`.
#[derive(Clone, Debug)]
pub struct ShortExact {
    pub inclusion: ModuleHom,
    pub surjection: ModuleHom,
}

/// Forms `G = H ⊕ J` over two short exact sequences, takes the inverse
/// image `G'` of the first quotient under `G → U' ⊕ V'`, and returns whether
/// `G'/V ≅ H` as the summand argument predicts.
pub fn check_summand_lemma(first: &ShortExact, second: &ShortExact) -> Result<bool> {
    let h = first.inclusion.target();
    let j = second.inclusion.target();
    let g = direct_sum(&[h.clone(), j.clone()])?;
    let ends = direct_sum(&[first.surjection.target().clone(), second.surjection.target().clone()])?;
    let gm = &g.module;
    let alpha_map: Vec<usize> = gm
        .elements()
        .map(|z| {
            let a = first.surjection.apply(g.projections[0].apply(z));
            let b = second.surjection.apply(g.projections[1].apply(z));
            ends.module.add(ends.injections[0].apply(a), ends.injections[1].apply(b))
        })
        .collect();
    let alpha = ModuleHom::from_map(gm.clone(), ends.module.clone(), alpha_map)?;
    let first_end = ends.injections[0].image_set();
    let mut preimage = FixedBitSet::with_capacity(gm.size());
    for z in gm.elements() {
        if first_end.contains(alpha.apply(z)) {
            preimage.insert(z);
        }
    }
    let (g_prime, incl) = submodule(gm, &preimage)?;
    let mut v_set = FixedBitSet::with_capacity(g_prime.size());
    let mut position = vec![usize::MAX; gm.size()];
    for y in g_prime.elements() {
        position[incl.apply(y)] = y;
    }
    for x in second.inclusion.source().elements() {
        let z = g.injections[1].apply(second.inclusion.apply(x));
        if position[z] == usize::MAX {
            return Err(Error::Invariant("V is not inside the inverse image".into()));
        }
        v_set.insert(position[z]);
    }
    let (q, _) = quotient(&g_prime, &v_set)?;
    Ok(is_isomorphic(&q, h)?.is_some())
}

/// Flatness of `(U, f)` over `A ∝ A` for regular `A`: `ker f = im f`.
/// Cross-checked against the projectivity test on the induced module.
pub fn pair_flatness(p: &PairModule) -> Result<bool> {
    if !is_vnr(p.base())?.holds {
        return Err(Error::Precondition(format!("{} is not von Neumann regular", p.base().spec())));
    }
    let criterion = p.kernel_equals_image();
    let direct = is_flat(&p.induced()?)?;
    if criterion != direct {
        return Err(Error::Invariant(format!(
            "kernel/image criterion ({criterion}) and flatness ({direct}) disagree on a pair module over {}",
            p.base().spec()
        )));
    }
    Ok(criterion)
}

#[derive(Clone, Debug)]
pub struct FlatResolution {
    /// `(G, g)` with `G = U × U` and `g(u, v) = (v, 0)`.
    pub g: PairModule,
    pub certificate: PeriodicityCertificate,
    pub g_flat: bool,
}

/// `0 → (U,f) → (U×U, g) → (U,f) → 0` with `β(u) = (u, f(u))` and
/// `α(u, v) = f(u) + v`, over `A ∝ A` with `A` regular of characteristic 2.
pub fn char2_f_periodic(p: &PairModule) -> Result<FlatResolution> {
    let base = p.base();
    if base.add(base.one(), base.one()) != 0 {
        return Err(Error::Precondition(format!("{} does not have characteristic 2", base.spec())));
    }
    if !is_vnr(base)?.holds {
        return Err(Error::Precondition(format!("{} is not von Neumann regular", base.spec())));
    }
    let u = p.carrier();
    let f = p.endo();
    let sum = direct_sum(&[u.clone(), u.clone()])?;
    let gu = sum.module.clone();
    let (p0, p1) = (&sum.projections[0], &sum.projections[1]);
    let (i0, i1) = (&sum.injections[0], &sum.injections[1]);
    let shift: Vec<usize> = gu.elements().map(|z| i0.apply(p1.apply(z))).collect();
    let g_endo = ModuleHom::from_map(gu.clone(), gu.clone(), shift)?;
    let g = PairModule::new(p.ext(), gu.clone(), g_endo)?;
    let g_flat = pair_flatness(&g)?;
    let um = p.induced()?;
    let gm = g.induced()?;
    let beta: Vec<usize> = u.elements().map(|x| gu.add(i0.apply(x), i1.apply(f.apply(x)))).collect();
    let alpha: Vec<usize> = gu
        .elements()
        .map(|z| u.add(f.apply(p0.apply(z)), p1.apply(z)))
        .collect();
    let beta = ModuleHom::from_map(um.clone(), gm.clone(), beta)?;
    let alpha = ModuleHom::from_map(gm.clone(), um.clone(), alpha)?;
    let seq = ExactSequence::new(vec![um.clone(), gm, um.clone()], vec![beta, alpha])?;
    let certificate = positive(
        CertificateKind::OnePeriodic,
        &um,
        seq,
        SearchSummary {
            description: "explicit construction on U × U".into(),
            ..Default::default()
        },
    )?;
    Ok(FlatResolution { g, certificate, g_flat })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::pair_ring;
    use crate::ring::{build_product, build_zmod};

    fn caps() -> OracleCaps {
        OracleCaps::default()
    }

    #[test]
    fn projective_enumeration_examples() {
        let z4 = build_zmod(4).unwrap();
        let sizes: Vec<usize> = enumerate_projectives_up_to_size(&z4, 16)
            .unwrap()
            .iter()
            .map(|m| m.size())
            .collect();
        assert_eq!(sizes, vec![1, 4, 16]);
        let z6 = build_zmod(6).unwrap();
        let sizes: Vec<usize> = enumerate_projectives_up_to_size(&z6, 6)
            .unwrap()
            .iter()
            .map(|m| m.size())
            .collect();
        assert_eq!(sizes, vec![1, 2, 3, 4, 6]);
        let f2 = build_zmod(2).unwrap();
        assert_eq!(enumerate_projectives_up_to_size(&f2, 4).unwrap().len(), 3);
    }

    #[test]
    fn one_periodic_examples() {
        let z4 = build_zmod(4).unwrap();
        let c = is_1_periodic_oracle(&cyclic(&z4, &[2]).unwrap(), &caps()).unwrap();
        assert_eq!(c.kind, CertificateKind::OnePeriodic);
        assert_eq!(c.sequence.as_ref().unwrap().modules[1].size(), 4);
        assert_eq!(c.free_terms, vec![true]);
        let z8 = build_zmod(8).unwrap();
        let c = is_1_periodic_oracle(&cyclic(&z8, &[2]).unwrap(), &caps()).unwrap();
        assert_eq!(c.kind, CertificateKind::Negative);
        assert!(c.search.exhaustive && c.search.projectives.is_empty());
        let c = is_1_periodic_oracle(&free(&z8, 0).unwrap(), &caps()).unwrap();
        assert!(c.is_positive());
    }

    #[test]
    fn two_periodic_examples() {
        let z8 = build_zmod(8).unwrap();
        let c = is_2_periodic_oracle(&cyclic(&z8, &[2]).unwrap(), &caps()).unwrap();
        assert_eq!(c.kind, CertificateKind::TwoPeriodic);
        assert!(c.all_joints_exact());
        let z4 = build_zmod(4).unwrap();
        assert!(is_2_periodic_oracle(&cyclic(&z4, &[2]).unwrap(), &caps()).unwrap().is_positive());
        assert!(is_2_periodic_oracle(&free(&z4, 1).unwrap(), &caps()).unwrap().is_positive());
    }

    #[test]
    fn uvst_examples() {
        let z8 = build_zmod(8).unwrap();
        assert_eq!(
            find_uvst_witness(&z8, 2).unwrap(),
            Some(UvstWitness { a: 4, b: 4, u: 1, v: 1, s: 4, t: 0 })
        );
        let f5 = build_zmod(5).unwrap();
        assert_eq!(
            find_uvst_witness(&f5, 0).unwrap(),
            Some(UvstWitness { a: 1, b: 1, u: 0, v: 0, s: 0, t: 4 })
        );
        let z4 = build_zmod(4).unwrap();
        assert_eq!(
            find_uvst_witness(&z4, 1).unwrap(),
            Some(UvstWitness { a: 0, b: 0, u: 0, v: 0, s: 0, t: 0 })
        );
    }

    #[test]
    fn rank_one_examples() {
        let z4 = build_zmod(4).unwrap();
        let g = build_lproj_module(&z4, 2, 2, 2, 1, 1, 2, 0).unwrap();
        assert_eq!(g.module.size(), 4);
        assert!(is_isomorphic(&g.module, &free(&z4, 1).unwrap()).unwrap().is_some());
        let sizes: Vec<usize> = g.sequence.modules.iter().map(|m| m.size()).collect();
        assert_eq!(sizes, vec![2, 4, 2]);
        let z8 = build_zmod(8).unwrap();
        let g = build_lproj_module(&z8, 2, 4, 4, 1, 1, 4, 0).unwrap();
        assert!(is_free(&g.module).unwrap());
        let g = build_lproj_module(&z8, 3, 0, 0, 0, 0, 0, 0).unwrap();
        assert_eq!(g.sequence.modules[0].size(), 1);
        assert!(matches!(build_lproj_module(&z8, 2, 4, 4, 1, 1, 0, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn splice_examples() {
        let z8 = build_zmod(8).unwrap();
        let w = cyclic(&z8, &[2]).unwrap();
        let cert = is_2_periodic_oracle(&w, &caps()).unwrap();
        let input = SpliceInput::from_certificate(&cert).unwrap();
        let out = splice_2f(&input).unwrap();
        assert!(out.all_pass(), "{:?}", out.checks);
        assert_eq!(out.g.size(), 8);
        assert!(is_isomorphic(&out.g, &free(&z8, 1).unwrap()).unwrap().is_some());

        let zero = free(&z8, 0).unwrap();
        let cert = is_2_periodic_oracle(&zero, &caps()).unwrap();
        let out = splice_2f(&SpliceInput::from_certificate(&cert).unwrap()).unwrap();
        assert!(out.all_pass());
        assert!(out.g.is_zero());
    }

    #[test]
    fn summand_lemma_on_periodic_pieces() {
        let z4 = build_zmod(4).unwrap();
        let m = cyclic(&z4, &[2]).unwrap();
        let c = is_1_periodic_oracle(&m, &caps()).unwrap();
        let seq = c.sequence.unwrap();
        let s = ShortExact {
            inclusion: seq.maps[0].clone(),
            surjection: seq.maps[1].clone(),
        };
        assert!(check_summand_lemma(&s, &s).unwrap());
    }

    #[test]
    fn pair_examples() {
        let f2 = build_zmod(2).unwrap();
        let ext = pair_ring(&f2).unwrap();
        let u2 = direct_sum(&[free(&f2, 1).unwrap(), free(&f2, 1).unwrap()]).unwrap().module;
        let shift = ModuleHom::from_map(u2.clone(), u2.clone(), (0..4).map(|x| (x % 2) * 2).collect()).unwrap();
        assert!(pair_flatness(&PairModule::new(&ext, u2, shift).unwrap()).unwrap());
        let u1 = free(&f2, 1).unwrap();
        let p = PairModule::new(&ext, u1.clone(), ModuleHom::zero(&u1, &u1)).unwrap();
        assert!(!pair_flatness(&p).unwrap());
        let res = char2_f_periodic(&p).unwrap();
        assert!(res.g_flat && res.certificate.all_joints_exact());
        let gm = res.g.induced().unwrap();
        assert!(is_isomorphic(&gm, &free(&ext, 1).unwrap()).unwrap().is_some());
        let u0 = free(&f2, 0).unwrap();
        let p0 = PairModule::new(&ext, u0.clone(), ModuleHom::zero(&u0, &u0)).unwrap();
        assert!(pair_flatness(&p0).unwrap());
        assert!(char2_f_periodic(&p0).unwrap().certificate.is_positive());

        let f2sq = build_product(&[f2.clone(), f2.clone()]).unwrap();
        let ext2 = pair_ring(&f2sq).unwrap();
        let u = free(&f2sq, 1).unwrap();
        let p = PairModule::new(&ext2, u.clone(), ModuleHom::zero(&u, &u)).unwrap();
        let res = char2_f_periodic(&p).unwrap();
        assert!(res.g_flat && res.certificate.all_joints_exact());

        let f3 = build_zmod(3).unwrap();
        let ext3 = pair_ring(&f3).unwrap();
        let u = free(&f3, 1).unwrap();
        let p = PairModule::new(&ext3, u.clone(), ModuleHom::zero(&u, &u)).unwrap();
        assert!(matches!(char2_f_periodic(&p), Err(Error::Precondition(_))));
    }
}
