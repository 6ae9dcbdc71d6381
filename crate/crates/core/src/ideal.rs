//! Ideals of a finite ring stored as full element sets, with the lattice
//! operations, annihilators, purity and radicals.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ring::FiniteRing;

pub const DEFAULT_IDEAL_CAP: usize = 10_000;

#[derive(Clone, Debug)]
pub struct Ideal {
    ring_id: u64,
    elements: Vec<usize>,
    members: FixedBitSet,
    gens: Vec<usize>,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.ring_id == other.ring_id && self.elements == other.elements
    }
}

impl Eq for Ideal {}

impl Hash for Ideal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

impl PartialOrd for Ideal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by cardinality, then by element set.
impl Ord for Ideal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elements
            .len()
            .cmp(&other.elements.len())
            .then_with(|| self.elements.cmp(&other.elements))
    }
}

impl Serialize for Ideal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements.serialize(s)
    }
}

impl Ideal {
    /// Wraps a set already known to be an ideal.
    fn from_members(r: &FiniteRing, members: FixedBitSet) -> Ideal {
        let elements: Vec<usize> = members.ones().collect();
        let gens = choose_generators(r, &elements, &members);
        Ideal {
            ring_id: r.id(),
            elements,
            members,
            gens,
        }
    }

    /// Validates that `elements` is an ideal of `r` and wraps it.
    pub fn from_elements(r: &FiniteRing, elements: impl IntoIterator<Item = usize>) -> Result<Ideal> {
        let mut members = FixedBitSet::with_capacity(r.size());
        for x in elements {
            if x >= r.size() {
                return Err(Error::InvalidArgument(format!("element {x} out of range")));
            }
            members.insert(x);
        }
        if !members.contains(0) {
            return Err(Error::InvalidArgument("ideal must contain zero".into()));
        }
        let list: Vec<usize> = members.ones().collect();
        for &a in &list {
            for &b in &list {
                if !members.contains(r.add(a, b)) {
                    return Err(Error::InvalidArgument(format!("not closed under addition at ({a}, {b})")));
                }
            }
            for x in r.elements() {
                if !members.contains(r.mul(x, a)) {
                    return Err(Error::InvalidArgument(format!("not absorbing at ({x}, {a})")));
                }
            }
        }
        Ok(Ideal::from_members(r, members))
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_whole(&self, r: &FiniteRing) -> bool {
        self.elements.len() == r.size()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn is_subset(&self, other: &Ideal) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn ring_id(&self) -> u64 {
        self.ring_id
    }

    pub(crate) fn check_ring(&self, r: &FiniteRing) -> Result<()> {
        if self.ring_id != r.id() {
            return Err(Error::RingMismatch(format!("ideal does not belong to {}", r.spec())));
        }
        Ok(())
    }
}

/// Least generator when the set is principal, otherwise a greedy
/// least-index generating set.
fn choose_generators(r: &FiniteRing, elements: &[usize], members: &FixedBitSet) -> Vec<usize> {
    if elements.len() == 1 {
        return vec![0];
    }
    if let Some(&g) = r.principal_ideals().get(elements) {
        return vec![g];
    }
    let mut gens = Vec::new();
    let mut reached = FixedBitSet::with_capacity(r.size());
    reached.insert(0);
    for &x in elements {
        if !reached.contains(x) {
            gens.push(x);
            reached = absorb(r, &reached, &[x]);
        }
    }
    debug_assert_eq!(&reached, members);
    gens
}

/// The ideal `start + (gens)`, where `start` is already an ideal.
fn absorb(r: &FiniteRing, start: &FixedBitSet, gens: &[usize]) -> FixedBitSet {
    let mut additive: Vec<usize> = Vec::new();
    let mut seen = FixedBitSet::with_capacity(r.size());
    for &g in gens {
        for x in r.elements() {
            let y = r.mul(x, g);
            if !seen.contains(y) && !start.contains(y) {
                seen.insert(y);
                additive.push(y);
            }
        }
    }
    let mut members = start.clone();
    if additive.is_empty() {
        return members;
    }
    let mut list: Vec<usize> = members.ones().collect();
    let mut i = 0;
    while i < list.len() {
        let x = list[i];
        for &g in &additive {
            let y = r.add(x, g);
            if !members.contains(y) {
                members.insert(y);
                list.push(y);
            }
        }
        i += 1;
    }
    members
}

pub(crate) fn principal_set(r: &FiniteRing, a: usize) -> Vec<usize> {
    let mut members = FixedBitSet::with_capacity(r.size());
    for x in r.elements() {
        members.insert(r.mul(x, a));
    }
    members.ones().collect()
}

fn zero_set(r: &FiniteRing) -> FixedBitSet {
    let mut z = FixedBitSet::with_capacity(r.size());
    z.insert(0);
    z
}

/// Least ideal containing `gens`.
pub fn ideal_generated(r: &FiniteRing, gens: &[usize]) -> Ideal {
    let members = absorb(r, &zero_set(r), gens);
    Ideal::from_members(r, members)
}

pub fn zero_ideal(r: &FiniteRing) -> Ideal {
    Ideal::from_members(r, zero_set(r))
}

pub fn unit_ideal(r: &FiniteRing) -> Ideal {
    ideal_generated(r, &[r.one()])
}

/// `{ x | x·s = 0 for every s in set }`.
pub fn annihilator(r: &FiniteRing, set: &[usize]) -> Ideal {
    let mut members = FixedBitSet::with_capacity(r.size());
    for x in r.elements() {
        if set.iter().all(|&s| r.mul(x, s) == 0) {
            members.insert(x);
        }
    }
    Ideal::from_members(r, members)
}

pub fn annihilator_of_ideal(r: &FiniteRing, i: &Ideal) -> Ideal {
    annihilator(r, i.gens())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealOp {
    Sum,
    Product,
    Intersection,
    /// `(i : j) = { x | x·j ⊆ i }`.
    Colon,
}

pub fn ideal_combine(r: &FiniteRing, op: IdealOp, i: &Ideal, j: &Ideal) -> Result<Ideal> {
    i.check_ring(r)?;
    j.check_ring(r)?;
    Ok(match op {
        IdealOp::Sum => sum(r, i, j),
        IdealOp::Product => {
            let prods: Vec<usize> = i
                .gens()
                .iter()
                .flat_map(|&a| j.gens().iter().map(move |&b| r.mul(a, b)))
                .collect();
            ideal_generated(r, &prods)
        }
        IdealOp::Intersection => intersection(r, i, j),
        IdealOp::Colon => {
            let mut members = FixedBitSet::with_capacity(r.size());
            for x in r.elements() {
                if j.gens().iter().all(|&b| i.contains(r.mul(x, b))) {
                    members.insert(x);
                }
            }
            Ideal::from_members(r, members)
        }
    })
}

pub(crate) fn sum(r: &FiniteRing, i: &Ideal, j: &Ideal) -> Ideal {
    Ideal::from_members(r, absorb(r, &i.members, j.gens()))
}

pub(crate) fn intersection(r: &FiniteRing, i: &Ideal, j: &Ideal) -> Ideal {
    let mut members = i.members.clone();
    members.intersect_with(&j.members);
    Ideal::from_members(r, members)
}

pub(crate) fn product(r: &FiniteRing, i: &Ideal, j: &Ideal) -> Ideal {
    ideal_combine(r, IdealOp::Product, i, j).expect("same ring")
}

/// Closes the principal ideals under sums with principal ideals until no
/// new ideal appears. Every ideal of a finite ring is a finite sum of
/// principal ideals, so the fixed point is the full lattice.
pub(crate) fn compute_all_ideals(r: &FiniteRing, cap: usize) -> Result<Vec<Ideal>> {
    let mut principal: Vec<(usize, FixedBitSet)> = Vec::new();
    let mut seen_principal: HashSet<Vec<usize>> = HashSet::new();
    for a in r.elements() {
        let set = principal_set(r, a);
        if seen_principal.insert(set.clone()) {
            let mut bits = FixedBitSet::with_capacity(r.size());
            bits.extend(set.iter().copied());
            principal.push((a, bits));
        }
    }
    let mut found: Vec<FixedBitSet> = principal.iter().map(|(_, b)| b.clone()).collect();
    let mut index: HashSet<FixedBitSet> = found.iter().cloned().collect();
    if found.len() > cap {
        return Err(Error::cap("ideal count", cap as u128, found.len() as u128));
    }
    let mut i = 0;
    while i < found.len() {
        let current = found[i].clone();
        for (g, bits) in &principal {
            if bits.is_subset(&current) {
                continue;
            }
            let next = absorb(r, &current, &[*g]);
            if index.insert(next.clone()) {
                found.push(next);
                if found.len() > cap {
                    return Err(Error::cap("ideal count", cap as u128, found.len() as u128));
                }
            }
        }
        i += 1;
    }
    let mut ideals: Vec<Ideal> = found.into_iter().map(|m| Ideal::from_members(r, m)).collect();
    ideals.sort();
    Ok(ideals)
}

/// All ideals, sorted by (cardinality, element set).
pub fn enumerate_ideals(r: &FiniteRing) -> Result<Vec<Ideal>> {
    Ok(r.ideals()?.to_vec())
}

pub fn enumerate_ideals_capped(r: &FiniteRing, cap: usize) -> Result<Vec<Ideal>> {
    Ok(r.ideals_capped(cap)?.to_vec())
}

/// Maximal proper ideals; empty for the zero ring.
pub fn maximal_ideals(r: &FiniteRing) -> Result<Vec<Ideal>> {
    Ok(r.maximal_ideals()?.to_vec())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Purity {
    pub pure: bool,
    /// Least element `a` of the ideal with `a ∉ a·I`.
    pub witness: Option<usize>,
}

/// An ideal `I` is pure iff each `a ∈ I` satisfies `a = a·b` for some `b ∈ I`.
/// Cross-checked against the equivalent finite-ring criterion that `I` is
/// generated by a single idempotent.
pub fn is_pure_ideal(r: &FiniteRing, i: &Ideal) -> Result<Purity> {
    i.check_ring(r)?;
    let witness = i
        .elements()
        .iter()
        .copied()
        .find(|&a| !i.elements().iter().any(|&b| r.mul(a, b) == a));
    let pure = witness.is_none();
    if pure != idempotent_generator(r, i).is_some() {
        return Err(Error::Invariant(format!(
            "purity of {:?} in {} disagrees with the idempotent-generator criterion",
            i.elements(),
            r.spec()
        )));
    }
    Ok(Purity { pure, witness })
}

/// The idempotent generating `i`, if one exists (it is unique).
pub fn idempotent_generator(r: &FiniteRing, i: &Ideal) -> Option<usize> {
    r.idempotents()
        .iter()
        .copied()
        .find(|&e| i.contains(e) && i.elements().iter().all(|&x| r.mul(x, e) == x))
}

/// Jacobson radical (intersection of maximal ideals) and nilradical, which
/// must coincide for finite rings.
pub fn radicals(r: &FiniteRing) -> Result<(Ideal, Ideal)> {
    let mut jac = FixedBitSet::with_capacity(r.size());
    jac.insert_range(..);
    for p in r.maximal_ideals()? {
        jac.intersect_with(p.members());
    }
    let jacobson = Ideal::from_members(r, jac);
    let nil: Vec<usize> = r
        .elements()
        .filter(|&x| {
            let mut y = x;
            for _ in 0..r.size() {
                if y == 0 {
                    return true;
                }
                y = r.mul(y, x);
            }
            y == 0
        })
        .collect();
    let nil = Ideal::from_elements(r, nil)?;
    if nil != jacobson {
        return Err(Error::Invariant(format!(
            "Jacobson radical and nilradical differ for {}",
            r.spec()
        )));
    }
    Ok((jacobson, nil))
}

/// Precomputed sums and intersections between all ideals of a ring.
pub struct IdealLattice<'a> {
    pub ideals: &'a [Ideal],
    index: HashMap<Vec<usize>, usize>,
    sums: Vec<usize>,
    meets: Vec<usize>,
}

impl<'a> IdealLattice<'a> {
    pub fn new(r: &'a FiniteRing) -> Result<Self> {
        let ideals = r.ideals()?;
        let n = ideals.len();
        let index: HashMap<Vec<usize>, usize> = ideals
            .iter()
            .enumerate()
            .map(|(k, i)| (i.elements().to_vec(), k))
            .collect();
        let lookup = |set: &Ideal| -> Result<usize> {
            index
                .get(set.elements())
                .copied()
                .ok_or_else(|| Error::Invariant("ideal lattice is not closed".into()))
        };
        let mut sums = vec![0; n * n];
        let mut meets = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let s = lookup(&sum(r, &ideals[a], &ideals[b]))?;
                let m = lookup(&intersection(r, &ideals[a], &ideals[b]))?;
                sums[a * n + b] = s;
                sums[b * n + a] = s;
                meets[a * n + b] = m;
                meets[b * n + a] = m;
            }
        }
        Ok(IdealLattice {
            ideals,
            index,
            sums,
            meets,
        })
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn sum(&self, a: usize, b: usize) -> usize {
        self.sums[a * self.len() + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meets[a * self.len() + b]
    }

    pub fn position(&self, i: &Ideal) -> Option<usize> {
        self.index.get(i.elements()).copied()
    }

    /// First triple `(A, B, C)` violating `(A+B)∩C ⊆ (A∩C)+(B∩C)`.
    pub fn distributivity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                let ab = self.sum(a, b);
                for c in 0..n {
                    let lhs = self.meet(ab, c);
                    let rhs = self.sum(self.meet(a, c), self.meet(b, c));
                    if !self.ideals[lhs].is_subset(&self.ideals[rhs]) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{build_product, build_zmod};

    #[test]
    fn generated_examples() {
        let z12 = build_zmod(12).unwrap();
        assert_eq!(ideal_generated(&z12, &[4]).elements(), &[0, 4, 8]);
        assert_eq!(ideal_generated(&z12, &[]).elements(), &[0]);
        let z6 = build_zmod(6).unwrap();
        assert!(ideal_generated(&z6, &[2, 3]).is_whole(&z6));
    }

    #[test]
    fn annihilator_examples() {
        let z12 = build_zmod(12).unwrap();
        assert_eq!(annihilator(&z12, &[2]).elements(), &[0, 6]);
        assert_eq!(annihilator(&z12, &[6]).elements(), &[0, 2, 4, 6, 8, 10]);
        assert!(annihilator(&z12, &[0]).is_whole(&z12));
    }

    #[test]
    fn combine_examples() {
        let z12 = build_zmod(12).unwrap();
        let i4 = ideal_generated(&z12, &[4]);
        let i6 = ideal_generated(&z12, &[6]);
        let s = ideal_combine(&z12, IdealOp::Sum, &i4, &i6).unwrap();
        assert_eq!(s, ideal_generated(&z12, &[2]));
        let m = ideal_combine(&z12, IdealOp::Intersection, &i4, &i6).unwrap();
        assert!(m.is_zero());
        let z = zero_ideal(&z12);
        assert_eq!(ideal_combine(&z12, IdealOp::Sum, &i4, &z).unwrap(), i4);
        // (4) : (2) = (2) since 2x ∈ (4) iff x even.
        let i2 = ideal_generated(&z12, &[2]);
        assert_eq!(ideal_combine(&z12, IdealOp::Colon, &i4, &i2).unwrap(), i2);
        assert_eq!(ideal_combine(&z12, IdealOp::Product, &i2, &i6).unwrap(), zero_ideal(&z12));

        let other = build_zmod(12).unwrap();
        let foreign = ideal_generated(&other, &[3]);
        assert!(matches!(
            ideal_combine(&z12, IdealOp::Sum, &i4, &foreign),
            Err(Error::RingMismatch(_))
        ));
    }

    #[test]
    fn enumeration_examples() {
        let z4 = build_zmod(4).unwrap();
        let ideals = enumerate_ideals(&z4).unwrap();
        let sets: Vec<&[usize]> = ideals.iter().map(|i| i.elements()).collect();
        assert_eq!(sets, vec![&[0][..], &[0, 2], &[0, 1, 2, 3]]);
        assert_eq!(enumerate_ideals(&build_zmod(7).unwrap()).unwrap().len(), 2);
        assert_eq!(enumerate_ideals(&build_zmod(12).unwrap()).unwrap().len(), 6);
        let f2 = build_zmod(2).unwrap();
        let p = build_product(&[f2.clone(), f2.clone(), f2.clone()]).unwrap();
        assert!(matches!(enumerate_ideals_capped(&p, 4), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn maximal_examples() {
        let z12 = build_zmod(12).unwrap();
        let m = maximal_ideals(&z12).unwrap();
        assert_eq!(m.len(), 2);
        assert!(m.contains(&ideal_generated(&z12, &[2])));
        assert!(m.contains(&ideal_generated(&z12, &[3])));
        let z8 = build_zmod(8).unwrap();
        assert_eq!(maximal_ideals(&z8).unwrap(), vec![ideal_generated(&z8, &[2])]);
        let f3 = build_zmod(3).unwrap();
        assert_eq!(maximal_ideals(&f3).unwrap(), vec![zero_ideal(&f3)]);
        assert!(maximal_ideals(&build_zmod(1).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn purity_examples() {
        let z4 = build_zmod(4).unwrap();
        let p = is_pure_ideal(&z4, &ideal_generated(&z4, &[2])).unwrap();
        assert_eq!(p, Purity { pure: false, witness: Some(2) });
        let z6 = build_zmod(6).unwrap();
        let i2 = ideal_generated(&z6, &[2]);
        assert!(is_pure_ideal(&z6, &i2).unwrap().pure);
        assert_eq!(idempotent_generator(&z6, &i2), Some(4));
        assert!(is_pure_ideal(&z6, &zero_ideal(&z6)).unwrap().pure);
    }

    #[test]
    fn radical_examples() {
        let z12 = build_zmod(12).unwrap();
        let (j, n) = radicals(&z12).unwrap();
        assert_eq!(j.elements(), &[0, 6]);
        assert_eq!(j, n);
        let z8 = build_zmod(8).unwrap();
        assert_eq!(radicals(&z8).unwrap().0, ideal_generated(&z8, &[2]));
        let f = build_product(&[build_zmod(2).unwrap(), build_zmod(3).unwrap()]).unwrap();
        assert!(radicals(&f).unwrap().0.is_zero());
    }

    #[test]
    fn from_elements_validates() {
        let z6 = build_zmod(6).unwrap();
        assert!(Ideal::from_elements(&z6, [0, 2]).is_err());
        assert!(Ideal::from_elements(&z6, [1, 2]).is_err());
        assert!(Ideal::from_elements(&z6, [0, 3]).is_ok());
    }
}
