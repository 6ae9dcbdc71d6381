//! Ring-level predicates: semiregularity and its refinements, Bézout,
//! valuation, arithmetical and elementary divisor rings, plus the
//! constructions-level criteria for trivial extensions and duplications.
//!
//! Finite rings are Noetherian, hence coherent, and every prime ideal is
//! maximal. Clauses of the characterizations that ask for coherence or for
//! primes to be maximal are therefore satisfied automatically; reports list
//! them under `notes` instead of dropping them silently.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::{
    annihilator, annihilator_of_ideal, ideal_generated, intersection, is_pure_ideal, principal_set, product,
    unit_ideal, Ideal, IdealLattice,
};
use crate::module::{
    cyclic, direct_sum, free, from_ideal, is_fp_injective, is_isomorphic, is_simple, localize_module, Matrix,
    Module,
};
use crate::periodicity::{build_lproj_module, find_uvst_witness};
use crate::ring::{all_localizations, build_duplication, build_quotient, build_trivial_extension, FiniteRing, Ring};

pub const SCHEMA_VERSION: &str = "1";

/// Rings up to this size run the elementary-divisor scan directly; larger
/// ones are split into local factors first.
const EDR_DIRECT_SCAN: usize = 64;
const EDR_SCAN_CAP: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Element(usize),
    Elements(Vec<usize>),
    Ideal(Ideal),
    IdealPair(Ideal, Ideal),
    MaximalIdeal(Ideal),
    Note(String),
}

/// A boolean verdict with an optional witness: a counterexample when the
/// property fails, or supporting data when it holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn yes() -> Verdict {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    pub fn with(holds: bool, witness: Witness) -> Verdict {
        Verdict {
            holds,
            witness: Some(witness),
        }
    }

    pub fn no(witness: Witness) -> Verdict {
        Verdict::with(false, witness)
    }

    fn from_failure(failure: Option<Witness>) -> Verdict {
        match failure {
            Some(w) => Verdict::no(w),
            None => Verdict::yes(),
        }
    }
}

/// `(0:(0:I)) = I` for every ideal. Also asserts the universal inclusion
/// `I ⊆ (0:(0:I))`.
pub fn is_semiregular(r: &FiniteRing) -> Result<Verdict> {
    for i in r.ideals()? {
        let double = annihilator_of_ideal(r, &annihilator_of_ideal(r, i));
        if !i.is_subset(&double) {
            return Err(Error::Invariant(format!(
                "{:?} is not contained in its double annihilator in {}",
                i.elements(),
                r.spec()
            )));
        }
        if &double != i {
            return Ok(Verdict::no(Witness::Ideal(i.clone())));
        }
    }
    Ok(Verdict::yes())
}

/// Every two-generated ideal is principal; by induction every finitely
/// generated one then is.
pub fn is_bezout(r: &FiniteRing) -> Result<Verdict> {
    let principal = r.principal_ideals();
    let sets: Vec<Vec<usize>> = r.elements().map(|a| principal_set(r, a)).collect();
    let mut seen = vec![false; r.size()];
    for a in r.elements() {
        for b in a + 1..r.size() {
            let mut union = Vec::new();
            seen.iter_mut().for_each(|s| *s = false);
            for &x in &sets[a] {
                for &y in &sets[b] {
                    let z = r.add(x, y);
                    if !seen[z] {
                        seen[z] = true;
                        union.push(z);
                    }
                }
            }
            union.sort_unstable();
            if !principal.contains_key(&union) {
                return Ok(Verdict::no(Witness::Elements(vec![a, b])));
            }
        }
    }
    Ok(Verdict::yes())
}

/// Principal ideals are pairwise comparable, which makes the whole ideal
/// lattice a chain.
pub fn is_valuation(r: &FiniteRing) -> Result<Verdict> {
    let sets: Vec<HashSet<usize>> = r
        .elements()
        .map(|a| principal_set(r, a).into_iter().collect())
        .collect();
    for a in r.elements() {
        for b in a + 1..r.size() {
            if !sets[a].is_subset(&sets[b]) && !sets[b].is_subset(&sets[a]) {
                return Ok(Verdict::no(Witness::Elements(vec![a, b])));
            }
        }
    }
    Ok(Verdict::yes())
}

/// Locally a valuation ring. Evaluated at every localization and, separately,
/// through distributivity of the ideal lattice; the two must agree.
pub fn is_arithmetical(r: &Ring) -> Result<Verdict> {
    let mut local_failure = None;
    for loc in all_localizations(r)? {
        if !is_valuation(&loc.quotient_ring)?.holds {
            local_failure = Some(Witness::MaximalIdeal(loc.prime.clone()));
            break;
        }
    }
    let lattice = IdealLattice::new(r)?;
    let violation = lattice.distributivity_violation();
    if local_failure.is_some() != violation.is_some() {
        return Err(Error::Invariant(format!(
            "local valuation test and ideal distributivity disagree on {}",
            r.spec()
        )));
    }
    Ok(Verdict::from_failure(local_failure))
}

/// Every element satisfies `x ∈ x²R`.
pub fn is_vnr(r: &FiniteRing) -> Result<Verdict> {
    for x in r.elements() {
        let x2 = r.mul(x, x);
        if !r.elements().any(|y| r.mul(x2, y) == x) {
            return Ok(Verdict::no(Witness::Element(x)));
        }
    }
    Ok(Verdict::yes())
}

pub fn is_local(r: &FiniteRing) -> Result<Verdict> {
    let count = r.maximal_ideals()?.len();
    if count == 1 {
        Ok(Verdict::yes())
    } else {
        Ok(Verdict::no(Witness::Note(format!("{count} maximal ideals"))))
    }
}

pub fn is_field(r: &FiniteRing) -> Result<Verdict> {
    if r.is_zero_ring() {
        return Ok(Verdict::no(Witness::Note("zero ring".into())));
    }
    match r.elements().skip(1).find(|&x| !r.is_unit(x)) {
        Some(x) => Ok(Verdict::no(Witness::Element(x))),
        None => Ok(Verdict::yes()),
    }
}

/// For each maximal ideal `P`, the image of `P` in the localization is zero
/// or a simple module. The witness is the first failing maximal ideal.
pub fn is_1_semiregular(r: &Ring) -> Result<Verdict> {
    for loc in all_localizations(r)? {
        let q = &loc.quotient_ring;
        let image: HashSet<usize> = loc.prime.elements().iter().map(|&p| loc.projection.apply(p)).collect();
        let simple_or_zero = image
            .iter()
            .filter(|&&x| x != 0)
            .all(|&x| principal_set(q, x).len() == image.len());
        if !simple_or_zero {
            return Ok(Verdict::no(Witness::MaximalIdeal(loc.prime.clone())));
        }
    }
    Ok(Verdict::yes())
}

/// Idempotents `(e₁, e₂)` for one element `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdempotentPair {
    pub element: usize,
    pub e1: usize,
    pub e2: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Condition4 {
    pub bezout: Verdict,
    /// Lexicographically least pair for each element, in element order, up
    /// to the first element without one.
    pub table: Vec<IdempotentPair>,
    pub failing_element: Option<usize>,
}

impl Condition4 {
    pub fn holds(&self) -> bool {
        self.bezout.holds && self.failing_element.is_none()
    }
}

/// Least `(e₁, e₂)` with `Re₂ ∩ (0:a) = Rae₂` and
/// `R/aR ≅ Re₁ ⊕ Re₂/Rae₂`.
pub fn idempotent_pair_for(r: &Ring, a: usize) -> Result<Option<IdempotentPair>> {
    let one = r.one();
    let quotient = cyclic(r, &[a])?;
    let ann = annihilator(r, &[a]);
    let idempotents = r.idempotents();
    for &e1 in idempotents {
        let re1 = cyclic(r, &[r.sub(one, e1)])?;
        for &e2 in idempotents {
            let ae2 = r.mul(a, e2);
            let re2 = ideal_generated(r, &[e2]);
            if intersection(r, &re2, &ann) != ideal_generated(r, &[ae2]) {
                continue;
            }
            let tail = cyclic(r, &[r.sub(one, e2), ae2])?;
            if re1.size() * tail.size() != quotient.size() {
                continue;
            }
            let sum = direct_sum(&[re1.clone(), tail])?.module;
            if is_isomorphic(&quotient, &sum)?.is_some() {
                return Ok(Some(IdempotentPair { element: a, e1, e2 }));
            }
        }
    }
    Ok(None)
}

/// Bézout, and every element admits an idempotent pair.
pub fn tgsr_condition4_witness(r: &Ring) -> Result<Condition4> {
    let bezout = is_bezout(r)?;
    let mut table = Vec::with_capacity(r.size());
    let mut failing_element = None;
    for a in r.elements() {
        match idempotent_pair_for(r, a)? {
            Some(pair) => table.push(pair),
            None => {
                failing_element = Some(a);
                break;
            }
        }
    }
    Ok(Condition4 {
        bezout,
        table,
        failing_element,
    })
}

/// Arithmetical, and `I²` is pure for every ideal `I`.
pub fn tgsr_condition5(r: &Ring) -> Result<Verdict> {
    let arith = is_arithmetical(r)?;
    if !arith.holds {
        return Ok(arith);
    }
    for i in r.ideals()? {
        let square = product(r, i, i);
        if !is_pure_ideal(r, &square)?.pure {
            return Ok(Verdict::no(Witness::Ideal(i.clone())));
        }
    }
    Ok(Verdict::yes())
}

/// Semiregular and arithmetical, the decision procedure for semilocal (in
/// particular finite) rings. When it holds, every element is also checked
/// for a two-generated annihilator with a solution of the accompanying
/// equations, and the rank-one module built from it is verified.
pub fn is_2_semiregular(r: &Ring) -> Result<Verdict> {
    let semireg = is_semiregular(r)?;
    if !semireg.holds {
        return Ok(semireg);
    }
    let arith = is_arithmetical(r)?;
    if !arith.holds {
        return Ok(arith);
    }
    for x in r.elements() {
        let w = find_uvst_witness(r, x)?.ok_or_else(|| {
            Error::Invariant(format!(
                "{} is semiregular and arithmetical but element {x} has no annihilator witness",
                r.spec()
            ))
        })?;
        build_lproj_module(r, x, w.a, w.b, w.u, w.v, w.s, w.t)?;
    }
    Ok(Verdict::yes())
}

fn maximal_masks(r: &FiniteRing) -> Result<Vec<u64>> {
    let maximal = r.maximal_ideals()?;
    if maximal.len() > 64 {
        return Err(Error::cap("maximal ideals for the divisor scan", 64u32, maximal.len() as u128));
    }
    Ok(r.elements()
        .map(|x| {
            maximal
                .iter()
                .enumerate()
                .filter(|(_, p)| p.contains(x))
                .fold(0u64, |m, (k, _)| m | (1 << k))
        })
        .collect())
}

/// First `(a, b, c)` with `Ra + Rb + Rc = R` for which no `p, q` give
/// `R(pa) + R(pb + qc) = R`. Comaximality is read off which maximal ideals
/// contain each element.
fn divisor_scan(r: &FiniteRing) -> Result<Option<(usize, usize, usize)>> {
    let masks = maximal_masks(r)?;
    let n = r.size();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if masks[a] & masks[b] & masks[c] != 0 {
                    continue;
                }
                let found = (0..n).any(|p| {
                    let pa = masks[r.mul(p, a)];
                    let pb = r.mul(p, b);
                    (0..n).any(|q| pa & masks[r.add(pb, r.mul(q, c))] == 0)
                });
                if !found {
                    return Ok(Some((a, b, c)));
                }
            }
        }
    }
    Ok(None)
}

/// Elementary divisor ring via Bézout plus the comaximal-triple criterion.
/// Rings larger than a small threshold are checked factor by factor, which
/// is equivalent because both conditions split over finite products.
pub fn is_edr(r: &Ring) -> Result<Verdict> {
    let bezout = is_bezout(r)?;
    if !bezout.holds {
        return Ok(bezout);
    }
    if r.size() <= EDR_DIRECT_SCAN {
        return Ok(Verdict::from_failure(
            divisor_scan(r)?.map(|(a, b, c)| Witness::Elements(vec![a, b, c])),
        ));
    }
    for (factor, ring) in r.local_factors()?.iter().zip(local_factor_rings(r)?) {
        if ring.size() > EDR_SCAN_CAP {
            return Err(Error::cap("local factor size for the divisor scan", EDR_SCAN_CAP as u128, ring.size() as u128));
        }
        if divisor_scan(&ring)?.is_some() {
            return Ok(Verdict::no(Witness::MaximalIdeal(factor.maximal.clone())));
        }
    }
    Ok(Verdict::yes())
}

/// The local factors `R/(1−e)R`, one per primitive idempotent `e`, in the
/// order of [`FiniteRing::local_factors`].
pub fn local_factor_rings(r: &Ring) -> Result<Vec<Ring>> {
    r.local_factors()?
        .iter()
        .map(|f| Ok(build_quotient(r, &[r.sub(r.one(), f.idempotent)])?.0))
        .collect()
}

/// Each local factor has at most one nonzero proper ideal.
pub fn is_1_qf(r: &Ring) -> Result<Verdict> {
    for (factor, ring) in r.local_factors()?.iter().zip(local_factor_rings(r)?) {
        if ring.ideals()?.len() > 3 {
            return Ok(Verdict::no(Witness::MaximalIdeal(factor.maximal.clone())));
        }
    }
    Ok(Verdict::yes())
}

/// Each local factor is a valuation ring.
pub fn is_2_qf(r: &Ring) -> Result<Verdict> {
    for (factor, ring) in r.local_factors()?.iter().zip(local_factor_rings(r)?) {
        if !is_valuation(&ring)?.holds {
            return Ok(Verdict::no(Witness::MaximalIdeal(factor.maximal.clone())));
        }
    }
    Ok(Verdict::yes())
}

/// An elementary operation on a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MatrixOp {
    /// `row[to] += factor · row[from]`
    AddRow { from: usize, to: usize, factor: usize },
    AddCol { from: usize, to: usize, factor: usize },
    SwapRows(usize, usize),
    SwapCols(usize, usize),
    ScaleRow { row: usize, unit: usize },
    ScaleCol { col: usize, unit: usize },
}

fn apply_op(r: &FiniteRing, m: &Matrix, op: MatrixOp) -> Matrix {
    let mut out = m.clone();
    match op {
        MatrixOp::AddRow { from, to, factor } => {
            for j in 0..m.cols() {
                out.set(to, j, r.add(m.get(to, j), r.mul(factor, m.get(from, j))));
            }
        }
        MatrixOp::AddCol { from, to, factor } => {
            for i in 0..m.rows() {
                out.set(i, to, r.add(m.get(i, to), r.mul(factor, m.get(i, from))));
            }
        }
        MatrixOp::SwapRows(a, b) => {
            for j in 0..m.cols() {
                out.set(a, j, m.get(b, j));
                out.set(b, j, m.get(a, j));
            }
        }
        MatrixOp::SwapCols(a, b) => {
            for i in 0..m.rows() {
                out.set(i, a, m.get(i, b));
                out.set(i, b, m.get(i, a));
            }
        }
        MatrixOp::ScaleRow { row, unit } => {
            for j in 0..m.cols() {
                out.set(row, j, r.mul(unit, m.get(row, j)));
            }
        }
        MatrixOp::ScaleCol { col, unit } => {
            for i in 0..m.rows() {
                out.set(i, col, r.mul(unit, m.get(i, col)));
            }
        }
    }
    out
}

fn is_diagonal(m: &Matrix) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| i == j || m.get(i, j) == 0))
}

fn elementary_ops(r: &FiniteRing, rows: usize, cols: usize) -> Vec<MatrixOp> {
    let mut ops = Vec::new();
    for from in 0..rows {
        for to in 0..rows {
            if from != to {
                ops.extend(r.elements().skip(1).map(|factor| MatrixOp::AddRow { from, to, factor }));
                if from < to {
                    ops.push(MatrixOp::SwapRows(from, to));
                }
            }
        }
    }
    for from in 0..cols {
        for to in 0..cols {
            if from != to {
                ops.extend(r.elements().skip(1).map(|factor| MatrixOp::AddCol { from, to, factor }));
                if from < to {
                    ops.push(MatrixOp::SwapCols(from, to));
                }
            }
        }
    }
    for &unit in r.units().iter().filter(|&&u| u != r.one()) {
        ops.extend((0..rows).map(|row| MatrixOp::ScaleRow { row, unit }));
        ops.extend((0..cols).map(|col| MatrixOp::ScaleCol { col, unit }));
    }
    ops
}

/// Breadth-first search through elementary row and column operations for a
/// diagonal matrix equivalent to `m`. Returns the operation sequence, or
/// `None` if the explored orbit (at most `max_states` matrices, at most
/// `max_depth` operations deep) holds no diagonal matrix.
pub fn diagonal_reduction_search(
    r: &FiniteRing,
    m: &Matrix,
    max_depth: usize,
    max_states: usize,
) -> Result<Option<(Matrix, Vec<MatrixOp>)>> {
    if is_diagonal(m) {
        return Ok(Some((m.clone(), Vec::new())));
    }
    let ops = elementary_ops(r, m.rows(), m.cols());
    let mut parent: std::collections::HashMap<Vec<usize>, (Vec<usize>, MatrixOp)> = Default::default();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(m.entries().to_vec());
    let mut queue = VecDeque::from([(m.clone(), 0usize)]);
    while let Some((cur, depth)) = queue.pop_front() {
        if depth == max_depth {
            continue;
        }
        for &op in &ops {
            let next = apply_op(r, &cur, op);
            if !seen.insert(next.entries().to_vec()) {
                continue;
            }
            if seen.len() > max_states {
                return Err(Error::cap("matrix orbit states", max_states as u128, seen.len() as u128));
            }
            parent.insert(next.entries().to_vec(), (cur.entries().to_vec(), op));
            if is_diagonal(&next) {
                let mut path = Vec::new();
                let mut key = next.entries().to_vec();
                while let Some((prev, op)) = parent.get(&key) {
                    path.push(*op);
                    key = prev.clone();
                }
                path.reverse();
                return Ok(Some((next, path)));
            }
            queue.push_back((next, depth + 1));
        }
    }
    Ok(None)
}

/// Replays operations on a matrix.
pub fn apply_ops(r: &FiniteRing, m: &Matrix, ops: &[MatrixOp]) -> Matrix {
    ops.iter().fold(m.clone(), |acc, &op| apply_op(r, &acc, op))
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroKrull {
    /// Maximal ideals whose localization is a field.
    pub x: Vec<Ideal>,
    /// Kernel of the map into the product of those localizations.
    pub ideal: Ideal,
}

/// Splits off the part of the ring that is locally a field. Asserts that
/// the quotient by the kernel is von Neumann regular, that the kernel is
/// pure, and that `X` is exactly the set of maximal ideals containing it.
pub fn zero_krull_decomposition(r: &Ring) -> Result<ZeroKrull> {
    let mut x = Vec::new();
    let mut ideal = unit_ideal(r);
    for loc in all_localizations(r)? {
        let image_zero = loc.prime.elements().iter().all(|&p| loc.projection.apply(p) == 0);
        if image_zero {
            x.push(loc.prime.clone());
            ideal = intersection(r, &ideal, &loc.kernel);
        }
    }
    let (q, _) = build_quotient(r, ideal.gens())?;
    if !is_vnr(&q)?.holds {
        return Err(Error::Invariant(format!("{} modulo the field-locus kernel is not regular", r.spec())));
    }
    if !is_pure_ideal(r, &ideal)?.pure {
        return Err(Error::Invariant(format!("field-locus kernel of {} is not pure", r.spec())));
    }
    let vanishing: Vec<Ideal> = r
        .maximal_ideals()?
        .iter()
        .filter(|p| ideal.is_subset(p))
        .cloned()
        .collect();
    if vanishing != x {
        return Err(Error::Invariant(format!(
            "field locus of {} differs from the vanishing locus of its kernel",
            r.spec()
        )));
    }
    Ok(ZeroKrull { x, ideal })
}

/// Clause-by-clause evaluation of the 1-semiregularity criterion for a
/// trivial extension `A ∝ E`.
#[derive(Clone, Debug, Serialize)]
pub struct TrivextBreakdown {
    pub base_one_semiregular: bool,
    pub support: Vec<Ideal>,
    /// `A_P` is a field for every `P` in the support.
    pub support_fields: bool,
    /// `E_P` is simple for every `P` in the support.
    pub support_simple: bool,
    pub fp_injective: bool,
    pub holds: bool,
}

pub fn trivext_predicate(a: &Ring, e: &Module) -> Result<TrivextBreakdown> {
    if !e.ring().same_ring(a) {
        return Err(Error::RingMismatch(format!("module over {} used with {}", e.ring().spec(), a.spec())));
    }
    if e.is_zero() {
        return Err(Error::Precondition("the module must be nonzero".into()));
    }
    let base_one_semiregular = is_1_semiregular(a)?.holds;
    let mut support = Vec::new();
    let mut support_fields = true;
    let mut support_simple = true;
    for loc in all_localizations(a)? {
        let local = localize_module(e, &loc)?;
        if local.is_zero() {
            continue;
        }
        support.push(loc.prime.clone());
        support_fields &= is_field(&loc.quotient_ring)?.holds;
        support_simple &= is_simple(&local);
    }
    let fp_injective = is_fp_injective(e)?;
    Ok(TrivextBreakdown {
        base_one_semiregular,
        support,
        support_fields,
        support_simple,
        fp_injective,
        holds: base_one_semiregular && support_fields && support_simple && fp_injective,
    })
}

/// Evaluates [`trivext_predicate`] and asserts it against direct
/// evaluation on the extension ring.
pub fn check_trivext(a: &Ring, e: &Module) -> Result<(TrivextBreakdown, bool)> {
    let breakdown = trivext_predicate(a, e)?;
    let ext = build_trivial_extension(a, e)?;
    let direct = is_1_semiregular(&ext)?.holds;
    Ok((breakdown, direct))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DuplicationFlags {
    pub fp_injective: bool,
    pub semiregular: bool,
    pub one_semiregular: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DuplicationReport {
    pub ideal: Ideal,
    pub pure: bool,
    /// Purity of the ideal combined with the matching property of the base.
    pub predicted: DuplicationFlags,
    /// The properties evaluated on the duplication ring itself.
    pub direct: DuplicationFlags,
}

fn self_fp_injective(r: &Ring) -> Result<bool> {
    is_fp_injective(&free(r, 1)?)
}

/// Evaluates the duplication criteria and the direct properties of
/// `R ⋈ I`; an `Invariant` error is returned if they disagree.
pub fn duplication_predicate(r: &Ring, gens: &[usize]) -> Result<DuplicationReport> {
    let ideal = ideal_generated(r, gens);
    let pure = is_pure_ideal(r, &ideal)?.pure;
    let predicted = DuplicationFlags {
        fp_injective: pure && self_fp_injective(r)?,
        semiregular: pure && is_semiregular(r)?.holds,
        one_semiregular: pure && is_1_semiregular(r)?.holds,
    };
    let dup = build_duplication(r, gens)?;
    let direct = DuplicationFlags {
        fp_injective: self_fp_injective(&dup)?,
        semiregular: is_semiregular(&dup)?.holds,
        one_semiregular: is_1_semiregular(&dup)?.holds,
    };
    if predicted != direct {
        return Err(Error::Invariant(format!(
            "duplication criteria disagree on {}: predicted {:?}, direct {:?}",
            dup.spec(),
            predicted,
            direct
        )));
    }
    Ok(DuplicationReport {
        ideal,
        pure,
        predicted,
        direct,
    })
}

/// The equivalent conditions for a local ring that is not a field, in
/// order: 2-semiregular; valuation and semiregular; valuation with a
/// nonzero element of nonzero annihilator; Bézout with non-flat maximal
/// ideal. `None` when the ring is not local or is a field.
pub fn local_chain_conditions(r: &Ring) -> Result<Option<[bool; 4]>> {
    if !is_local(r)?.holds || is_field(r)?.holds {
        return Ok(None);
    }
    let valuation = is_valuation(r)?.holds;
    let zero_divisor = r.elements().skip(1).any(|a| !annihilator(r, &[a]).is_zero());
    let maximal = &r.maximal_ideals()?[0];
    let maximal_flat = crate::module::is_flat(&from_ideal(r, maximal)?)?;
    Ok(Some([
        is_2_semiregular(r)?.holds,
        valuation && is_semiregular(r)?.holds,
        valuation && zero_divisor,
        is_bezout(r)?.holds && !maximal_flat,
    ]))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub local: bool,
    pub field: bool,
    pub vnr: bool,
    pub valuation: bool,
    pub arithmetical: bool,
    pub bezout: bool,
    pub semiregular: bool,
    pub edr: bool,
    pub one_semiregular: bool,
    pub two_semiregular: bool,
    pub one_qf: bool,
    pub two_qf: bool,
}

/// Violated implications between flags, as human-readable strings.
pub fn check_implications(f: &Flags) -> Vec<String> {
    let rules: [(&str, bool, bool); 12] = [
        ("one_semiregular => two_semiregular", f.one_semiregular, f.two_semiregular),
        ("one_semiregular => edr", f.one_semiregular, f.edr),
        ("one_semiregular => semiregular", f.one_semiregular, f.semiregular),
        ("one_semiregular => bezout", f.one_semiregular, f.bezout),
        ("two_semiregular => semiregular", f.two_semiregular, f.semiregular),
        ("two_semiregular => arithmetical", f.two_semiregular, f.arithmetical),
        ("vnr => one_semiregular", f.vnr, f.one_semiregular),
        ("one_qf => one_semiregular", f.one_qf, f.one_semiregular),
        ("two_qf => two_semiregular", f.two_qf, f.two_semiregular),
        ("semiregular & edr => two_semiregular", f.semiregular && f.edr, f.two_semiregular),
        ("field => vnr", f.field, f.vnr),
        ("valuation => arithmetical", f.valuation, f.arithmetical),
    ];
    rules
        .iter()
        .filter(|(_, premise, conclusion)| *premise && !conclusion)
        .map(|(name, _, _)| name.to_string())
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Versions {
    pub lib: String,
    pub schema: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub spec: String,
    pub size: usize,
    pub flags: Flags,
    pub witnesses: BTreeMap<String, Witness>,
    pub timings_ms: BTreeMap<String, f64>,
    pub notes: Vec<String>,
    pub versions: Versions,
}

impl ClassificationReport {
    /// The report as JSON with the timing table removed, for comparisons.
    pub fn to_json_without_timings(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("timings_ms");
        }
        v
    }
}

/// Evaluates every flag, attaching witnesses, and refuses to emit a report
/// that violates the implication lattice.
pub fn classify_ring(r: &Ring) -> Result<ClassificationReport> {
    let mut witnesses = BTreeMap::new();
    let mut timings = BTreeMap::new();
    let mut run = |name: &str, f: &dyn Fn() -> Result<Verdict>| -> Result<bool> {
        let start = Instant::now();
        let v = f()?;
        timings.insert(name.to_string(), start.elapsed().as_secs_f64() * 1e3);
        if let Some(w) = v.witness {
            witnesses.insert(name.to_string(), w);
        }
        Ok(v.holds)
    };
    let flags = Flags {
        local: run("local", &|| is_local(r))?,
        field: run("field", &|| is_field(r))?,
        vnr: run("vnr", &|| is_vnr(r))?,
        valuation: run("valuation", &|| is_valuation(r))?,
        arithmetical: run("arithmetical", &|| is_arithmetical(r))?,
        bezout: run("bezout", &|| is_bezout(r))?,
        semiregular: run("semiregular", &|| is_semiregular(r))?,
        edr: run("edr", &|| is_edr(r))?,
        one_semiregular: run("one_semiregular", &|| is_1_semiregular(r))?,
        two_semiregular: run("two_semiregular", &|| is_2_semiregular(r))?,
        one_qf: run("one_qf", &|| is_1_qf(r))?,
        two_qf: run("two_qf", &|| is_2_qf(r))?,
    };
    let violations = check_implications(&flags);
    if !violations.is_empty() {
        return Err(Error::Invariant(format!(
            "implication lattice violated for {}: {}",
            r.spec(),
            violations.join(", ")
        )));
    }
    let notes = vec![
        "coherence holds automatically: finite rings are Noetherian".to_string(),
        "every prime ideal is maximal: finite domains are fields".to_string(),
    ];
    Ok(ClassificationReport {
        spec: r.spec().to_string(),
        size: r.size(),
        flags,
        witnesses,
        timings_ms: timings,
        notes,
        versions: Versions {
            lib: env!("CARGO_PKG_VERSION").to_string(),
            schema: SCHEMA_VERSION.to_string(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{build_product, build_zmod};

    fn f_times_f2() -> Ring {
        let f2 = build_zmod(2).unwrap();
        build_trivial_extension(&f2, &free(&f2, 2).unwrap()).unwrap()
    }

    #[test]
    fn semiregular_examples() {
        for n in 1..=20 {
            assert!(is_semiregular(&build_zmod(n).unwrap()).unwrap().holds, "zmod:{n}");
        }
        let r = f_times_f2();
        let v = is_semiregular(&r).unwrap();
        assert!(!v.holds);
        match v.witness {
            Some(Witness::Ideal(i)) => {
                assert_eq!(i.len(), 2);
                let x = i.gens()[0];
                assert_eq!(r.mul(x, x), 0);
            }
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn basic_predicates() {
        let z12 = build_zmod(12).unwrap();
        assert!(is_bezout(&z12).unwrap().holds);
        assert!(is_arithmetical(&z12).unwrap().holds);
        assert!(!is_valuation(&z12).unwrap().holds);
        assert!(!is_local(&z12).unwrap().holds);
        let z8 = build_zmod(8).unwrap();
        assert!(is_valuation(&z8).unwrap().holds);
        assert!(is_local(&z8).unwrap().holds);
        assert!(!is_arithmetical(&f_times_f2()).unwrap().holds);
    }

    #[test]
    fn one_semiregular_examples() {
        assert!(is_1_semiregular(&build_zmod(4).unwrap()).unwrap().holds);
        let z8 = build_zmod(8).unwrap();
        let v = is_1_semiregular(&z8).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness, Some(Witness::MaximalIdeal(ideal_generated(&z8, &[2]))));
    }

    #[test]
    fn condition4_examples() {
        let z6 = build_zmod(6).unwrap();
        let c = tgsr_condition4_witness(&z6).unwrap();
        assert!(c.holds());
        let z4 = build_zmod(4).unwrap();
        assert_eq!(
            idempotent_pair_for(&z4, 2).unwrap(),
            Some(IdempotentPair { element: 2, e1: 0, e2: 1 })
        );
        assert_eq!(
            idempotent_pair_for(&z4, 0).unwrap(),
            Some(IdempotentPair { element: 0, e1: 1, e2: 0 })
        );
        assert!(!tgsr_condition4_witness(&build_zmod(8).unwrap()).unwrap().holds());
    }

    #[test]
    fn condition5_examples() {
        assert!(tgsr_condition5(&build_zmod(4).unwrap()).unwrap().holds);
        assert!(!tgsr_condition5(&build_zmod(8).unwrap()).unwrap().holds);
        let f = build_product(&[build_zmod(2).unwrap(), build_zmod(3).unwrap()]).unwrap();
        assert!(tgsr_condition5(&f).unwrap().holds);
    }

    #[test]
    fn two_semiregular_examples() {
        for n in 1..=24 {
            assert!(is_2_semiregular(&build_zmod(n).unwrap()).unwrap().holds, "zmod:{n}");
        }
        assert!(!is_2_semiregular(&f_times_f2()).unwrap().holds);
    }

    #[test]
    fn qf_examples() {
        let z4 = build_zmod(4).unwrap();
        assert!(is_1_qf(&z4).unwrap().holds);
        let z8 = build_zmod(8).unwrap();
        assert!(!is_1_qf(&z8).unwrap().holds);
        assert!(is_2_qf(&z8).unwrap().holds);
        assert!(is_1_qf(&build_zmod(6).unwrap()).unwrap().holds);
    }

    #[test]
    fn edr_and_diagonal_search() {
        assert!(is_edr(&build_zmod(12).unwrap()).unwrap().holds);
        assert!(is_edr(&build_zmod(5).unwrap()).unwrap().holds);
        assert!(!is_edr(&f_times_f2()).unwrap().holds);
        let z6 = build_zmod(6).unwrap();
        let m = Matrix::from_rows(vec![vec![2, 3], vec![4, 1]]);
        let (d, ops) = diagonal_reduction_search(&z6, &m, 6, 100_000).unwrap().unwrap();
        assert!(is_diagonal(&d));
        assert_eq!(apply_ops(&z6, &m, &ops), d);
    }

    #[test]
    fn zero_krull_examples() {
        let z12 = build_zmod(12).unwrap();
        let zk = zero_krull_decomposition(&z12).unwrap();
        assert_eq!(zk.x, vec![ideal_generated(&z12, &[3])]);
        assert_eq!(zk.ideal, ideal_generated(&z12, &[3]));
        let z8 = build_zmod(8).unwrap();
        let zk = zero_krull_decomposition(&z8).unwrap();
        assert!(zk.x.is_empty());
        assert!(zk.ideal.is_whole(&z8));
        let z6 = build_zmod(6).unwrap();
        let zk = zero_krull_decomposition(&z6).unwrap();
        assert_eq!(zk.x.len(), 2);
        assert!(zk.ideal.is_zero());
    }

    #[test]
    fn trivext_examples() {
        let f2 = build_zmod(2).unwrap();
        let (b, direct) = check_trivext(&f2, &free(&f2, 1).unwrap()).unwrap();
        assert!(b.holds && direct);
        let z4 = build_zmod(4).unwrap();
        let (b, direct) = check_trivext(&z4, &cyclic(&z4, &[2]).unwrap()).unwrap();
        assert!(!b.holds && !direct);
        assert!(!b.support_fields);
        let z6 = build_zmod(6).unwrap();
        let e = from_ideal(&z6, &ideal_generated(&z6, &[3])).unwrap();
        let (b, direct) = check_trivext(&z6, &e).unwrap();
        assert!(b.holds && direct);
        assert!(matches!(
            trivext_predicate(&z6, &free(&z6, 0).unwrap()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn duplication_examples() {
        let z4 = build_zmod(4).unwrap();
        let d = duplication_predicate(&z4, &[2]).unwrap();
        assert!(!d.pure);
        assert_eq!(
            d.direct,
            DuplicationFlags { fp_injective: false, semiregular: false, one_semiregular: false }
        );
        let z6 = build_zmod(6).unwrap();
        let d = duplication_predicate(&z6, &[2]).unwrap();
        assert_eq!(
            d.direct,
            DuplicationFlags { fp_injective: true, semiregular: true, one_semiregular: true }
        );
        let d = duplication_predicate(&z6, &[]).unwrap();
        assert!(d.pure && d.direct.one_semiregular);
    }

    #[test]
    fn classify_examples() {
        let r = classify_ring(&build_zmod(4).unwrap()).unwrap();
        let f = &r.flags;
        assert!(f.local && f.valuation && f.bezout && f.arithmetical && f.semiregular && f.edr);
        assert!(f.one_semiregular && f.two_semiregular && f.one_qf && f.two_qf);
        assert!(!f.vnr && !f.field);
        let r = classify_ring(&build_zmod(8).unwrap()).unwrap();
        assert!(!r.flags.one_semiregular && !r.flags.one_qf && r.flags.two_semiregular);
        let r = classify_ring(&build_zmod(2).unwrap()).unwrap();
        assert!(r.flags.field && r.flags.vnr && r.flags.one_semiregular);
        let r = classify_ring(&build_zmod(1).unwrap()).unwrap();
        assert!(r.flags.one_semiregular && !r.flags.local);
    }

    #[test]
    fn local_chain_on_small_local_rings() {
        for n in [4, 8, 9, 16, 27] {
            let c = local_chain_conditions(&build_zmod(n).unwrap()).unwrap().unwrap();
            assert!(c.iter().all(|&b| b), "zmod:{n}");
        }
        let c = local_chain_conditions(&f_times_f2()).unwrap().unwrap();
        assert!(c.iter().all(|&b| !b));
        assert!(local_chain_conditions(&build_zmod(3).unwrap()).unwrap().is_none());
    }

    #[test]
    fn implications_flag_violations() {
        let f = Flags {
            one_semiregular: true,
            ..Flags::default()
        };
        assert!(!check_implications(&f).is_empty());
        assert!(check_implications(&Flags::default()).is_empty());
    }
}
