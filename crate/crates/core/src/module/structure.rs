use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::{count_homs, from_ideal, present, Module, ModuleHom};
use crate::classify;
use crate::error::{Error, Result};
use crate::ideal::{annihilator, idempotent_generator, ideal_generated, Ideal};
use crate::ring::{all_localizations, Localization};

/// `M ⊗ R_P`, presented by pushing the relation matrix through the
/// localization map.
pub fn localize_module(m: &Module, loc: &Localization) -> Result<Module> {
    if !m.ring().same_ring(&loc.base) {
        return Err(Error::RingMismatch(format!(
            "module over {} localized at a prime of {}",
            m.ring().spec(),
            loc.base.spec()
        )));
    }
    let mapped = m.relations().map_entries(|x| loc.projection.apply(x));
    present(&loc.quotient_ring, &mapped)
}

/// `μ(eM)` for each local factor `Re` of the ring, in factor order: the
/// dimension of `eM / P·eM` over the residue field.
pub(crate) fn local_generator_counts(m: &Module) -> Result<Vec<usize>> {
    let r = m.ring();
    let mut counts = Vec::new();
    for factor in r.local_factors()? {
        let mut part = FixedBitSet::with_capacity(m.size());
        for x in m.elements() {
            part.insert(m.act(factor.idempotent, x));
        }
        let part_list: Vec<usize> = part.ones().collect();
        let prods: Vec<usize> = factor
            .maximal
            .gens()
            .iter()
            .flat_map(|&p| part_list.iter().map(move |&y| (p, y)))
            .map(|(p, y)| m.act(p, y))
            .collect();
        let radical = m.span(&prods).count_ones(..);
        let residue = r.size() / factor.maximal.len();
        counts.push(exact_log(part_list.len() / radical, residue)?);
    }
    Ok(counts)
}

fn exact_log(value: usize, base: usize) -> Result<usize> {
    let mut k = 0;
    let mut acc = 1usize;
    while acc < value {
        acc *= base;
        k += 1;
    }
    if acc != value {
        return Err(Error::Invariant(format!("{value} is not a power of {base}")));
    }
    Ok(k)
}

fn require_local(m: &Module) -> Result<()> {
    if m.ring().maximal_ideals()?.len() != 1 {
        return Err(Error::Precondition(format!("{} is not a local ring", m.ring().spec())));
    }
    Ok(())
}

/// Minimal number of generators of a module over a local ring.
pub fn minimal_generators_local(m: &Module) -> Result<usize> {
    require_local(m)?;
    Ok(local_generator_counts(m)?[0])
}

/// A module over a local ring is free iff `|M| = |R|^μ(M)`: the surjection
/// from the free module of rank `μ(M)` then has trivial kernel.
pub fn is_free_local(m: &Module) -> Result<bool> {
    let k = minimal_generators_local(m)?;
    Ok(checked_pow(m.ring().size(), k) == Some(m.size()))
}

fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    (0..exp).try_fold(1usize, |acc, _| acc.checked_mul(base))
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalRank {
    pub prime: Ideal,
    /// Minimal number of generators of the localized module.
    pub generators: usize,
    pub free: bool,
}

pub fn local_ranks(m: &Module) -> Result<Vec<LocalRank>> {
    all_localizations(m.ring())?
        .iter()
        .map(|loc| {
            let lm = localize_module(m, loc)?;
            Ok(LocalRank {
                prime: loc.prime.clone(),
                generators: minimal_generators_local(&lm)?,
                free: is_free_local(&lm)?,
            })
        })
        .collect()
}

/// Finitely presented and locally free at every maximal ideal.
pub fn is_projective(m: &Module) -> Result<bool> {
    Ok(local_ranks(m)?.iter().all(|l| l.free))
}

/// Flatness equals projectivity for finite modules. Over a Bézout ring the
/// elementwise criterion (`r·u = 0` implies `u ∈ (0:r)M`) is evaluated as
/// well and must agree.
pub fn is_flat(m: &Module) -> Result<bool> {
    let projective = is_projective(m)?;
    let r = m.ring();
    if classify::is_bezout(r)?.holds {
        let elementwise = r.elements().all(|s| {
            let ann = annihilator(r, &[s]);
            let ann_m = m.ideal_times(&ann);
            m.elements().all(|u| m.act(s, u) != 0 || ann_m.contains(u))
        });
        if elementwise != projective {
            return Err(Error::Invariant(format!(
                "flatness criteria disagree for {} over {}",
                m.spec(),
                r.spec()
            )));
        }
    }
    Ok(projective)
}

/// The least ideal `I` with a hom `I → M` that is not multiplication by an
/// element of `M`, if any.
pub fn baer_failure(m: &Module) -> Result<Option<Ideal>> {
    let r = m.ring();
    for ideal in r.ideals()? {
        if ideal.is_zero() || ideal.is_whole(r) {
            continue;
        }
        let im = from_ideal(r, ideal)?;
        let gens: Vec<usize> = im.generators().iter().map(|&g| ideal.elements()[g]).collect();
        let restrictions: HashSet<Vec<usize>> = m
            .elements()
            .map(|e| gens.iter().map(|&a| m.act(a, e)).collect())
            .collect();
        if count_homs(&im, m)? != restrictions.len() as u128 {
            return Ok(Some(ideal.clone()));
        }
    }
    Ok(None)
}

/// Baer's criterion over every ideal. Finite rings are Noetherian, so
/// FP-injective and injective coincide.
pub fn is_fp_injective(m: &Module) -> Result<bool> {
    Ok(baer_failure(m)?.is_none())
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureFlags {
    pub simple: bool,
    pub uniserial: bool,
    pub distributive: bool,
    pub support: Vec<Ideal>,
}

fn cyclic_submodules(m: &Module) -> Vec<FixedBitSet> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for x in m.elements() {
        let s = m.span(&[x]);
        if seen.insert(s.clone()) {
            out.push(s);
        }
    }
    out
}

pub(crate) fn is_uniserial(m: &Module) -> bool {
    let subs = cyclic_submodules(m);
    subs.iter()
        .all(|a| subs.iter().all(|b| a.is_subset(b) || b.is_subset(a)))
}

pub(crate) fn is_simple(m: &Module) -> bool {
    !m.is_zero() && (1..m.size()).all(|x| m.span(&[x]).count_ones(..) == m.size())
}

pub fn structure_tests(m: &Module) -> Result<StructureFlags> {
    let mut distributive = true;
    let mut support = Vec::new();
    for loc in all_localizations(m.ring())? {
        let lm = localize_module(m, &loc)?;
        if !lm.is_zero() {
            support.push(loc.prime.clone());
        }
        distributive &= is_uniserial(&lm);
    }
    Ok(StructureFlags {
        simple: is_simple(m),
        uniserial: is_uniserial(m),
        distributive,
        support,
    })
}

#[derive(Clone, Debug)]
pub struct RealizedIdeal {
    pub ideal: Ideal,
    pub ideal_module: Module,
    /// Isomorphism from the input module onto the ideal.
    pub iso: ModuleHom,
}

/// Realizes a distributive module over a von Neumann regular ring as an
/// ideal: `I` is generated by the idempotents `e_x` with `Rx ≅ Re_x`, and
/// the isomorphism sends each primitive idempotent of `I` to the least
/// nonzero element of the matching component of `M`.
pub fn realize_as_ideal(m: &Module) -> Result<RealizedIdeal> {
    let r = m.ring();
    if !classify::is_vnr(r)?.holds {
        return Err(Error::Precondition(format!("{} is not von Neumann regular", r.spec())));
    }
    if !structure_tests(m)?.distributive {
        return Err(Error::Precondition(format!("{} is not distributive", m.spec())));
    }
    let one = r.one();
    let mut support_idempotents = Vec::new();
    for x in m.elements() {
        let ann = Ideal::from_elements(r, m.annihilator_of(x))?;
        let f = idempotent_generator(r, &ann)
            .ok_or_else(|| Error::Invariant("annihilator over a regular ring is not idempotent-generated".into()))?;
        support_idempotents.push(r.sub(one, f));
    }
    let ideal = ideal_generated(r, &support_idempotents);
    let ideal_module = from_ideal(r, &ideal)?;
    let mut anchors = Vec::new();
    for factor in r.local_factors()? {
        if ideal.contains(factor.idempotent) {
            let y = m
                .elements()
                .find(|&y| y != 0 && m.act(factor.idempotent, y) == y)
                .ok_or_else(|| Error::Invariant("supported factor has no nonzero component".into()))?;
            anchors.push(y);
        }
    }
    let map: Vec<usize> = ideal
        .elements()
        .iter()
        .map(|&z| anchors.iter().fold(0, |acc, &y| m.add(acc, m.act(z, y))))
        .collect();
    let forward = ModuleHom::from_map(ideal_module.clone(), m.clone(), map)?;
    if !forward.is_bijective() {
        return Err(Error::Invariant(format!("{} is not isomorphic to the constructed ideal", m.spec())));
    }
    Ok(RealizedIdeal {
        ideal,
        ideal_module,
        iso: forward.inverse()?,
    })
}
