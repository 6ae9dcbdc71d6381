use std::fmt;
use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::{combine_with, quotient, structure, submodule, Module};
use crate::error::{Error, Result};

/// Default bound on the number of generator-image tuples a hom search
/// may visit.
pub const DEFAULT_HOM_BOUND: u128 = 1 << 24;

/// A module homomorphism, recorded by generator images together with the
/// induced map on every source element.
#[derive(Clone)]
pub struct ModuleHom {
    source: Module,
    target: Module,
    images: Vec<usize>,
    map: Vec<usize>,
}

impl fmt::Debug for ModuleHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModuleHom")
            .field("source", &self.source.spec())
            .field("target", &self.target.spec())
            .field("images", &self.images)
            .finish()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HomRecord {
    pub source: String,
    pub target: String,
    pub generator_images: Vec<usize>,
    pub element_map: Vec<usize>,
}

fn check_same_ring(source: &Module, target: &Module) -> Result<()> {
    if !source.ring().same_ring(target.ring()) {
        return Err(Error::RingMismatch(format!(
            "modules over {} and {}",
            source.ring().spec(),
            target.ring().spec()
        )));
    }
    Ok(())
}

fn induced_map(source: &Module, target: &Module, images: &[usize]) -> Vec<usize> {
    source
        .elements()
        .map(|x| combine_with(target, source.coords(x), images))
        .collect()
}

fn relations_hold(source: &Module, target: &Module, images: &[usize]) -> bool {
    let rel = source.relations();
    (0..rel.cols()).all(|j| combine_with(target, &rel.column(j), images) == 0)
}

impl ModuleHom {
    /// The hom sending generator `j` of `source` to `images[j]`.
    pub fn new(source: Module, target: Module, images: Vec<usize>) -> Result<ModuleHom> {
        check_same_ring(&source, &target)?;
        if images.len() != source.num_generators() || images.iter().any(|&y| y >= target.size()) {
            return Err(Error::InvalidArgument("generator images have the wrong shape".into()));
        }
        if !relations_hold(&source, &target, &images) {
            return Err(Error::InvalidArgument(format!(
                "generator images violate a relation of {}",
                source.spec()
            )));
        }
        let map = induced_map(&source, &target, &images);
        Ok(ModuleHom {
            source,
            target,
            images,
            map,
        })
    }

    /// Wraps an element map after checking it is linear.
    pub fn from_map(source: Module, target: Module, map: Vec<usize>) -> Result<ModuleHom> {
        check_same_ring(&source, &target)?;
        if map.len() != source.size() || map.iter().any(|&y| y >= target.size()) {
            return Err(Error::InvalidArgument("element map has the wrong shape".into()));
        }
        let ring = source.ring().clone();
        let linear = map[0] == 0
            && source.elements().all(|a| {
                source
                    .elements()
                    .all(|b| map[source.add(a, b)] == target.add(map[a], map[b]))
                    && ring.elements().all(|r| map[source.act(r, a)] == target.act(r, map[a]))
            });
        if !linear {
            return Err(Error::InvalidArgument("element map is not module-linear".into()));
        }
        Ok(ModuleHom::from_map_unchecked(source, target, map))
    }

    pub(crate) fn from_map_unchecked(source: Module, target: Module, map: Vec<usize>) -> ModuleHom {
        let images = source.generators().iter().map(|&g| map[g]).collect();
        ModuleHom {
            source,
            target,
            images,
            map,
        }
    }

    pub fn identity(m: &Module) -> ModuleHom {
        ModuleHom::from_map_unchecked(m.clone(), m.clone(), m.elements().collect())
    }

    pub fn zero(source: &Module, target: &Module) -> ModuleHom {
        ModuleHom::from_map_unchecked(source.clone(), target.clone(), vec![0; source.size()])
    }

    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn kernel_set(&self) -> FixedBitSet {
        let mut k = FixedBitSet::with_capacity(self.source.size());
        for x in self.source.elements() {
            if self.map[x] == 0 {
                k.insert(x);
            }
        }
        k
    }

    pub fn image_set(&self) -> FixedBitSet {
        let mut i = FixedBitSet::with_capacity(self.target.size());
        for &y in &self.map {
            i.insert(y);
        }
        i
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_set().count_ones(..) == 1
    }

    pub fn is_surjective(&self) -> bool {
        self.image_set().count_ones(..) == self.target.size()
    }

    pub fn is_bijective(&self) -> bool {
        self.source.size() == self.target.size() && self.is_injective()
    }

    pub fn is_zero(&self) -> bool {
        self.map.iter().all(|&y| y == 0)
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &ModuleHom) -> Result<ModuleHom> {
        if !std::sync::Arc::ptr_eq(&self.target, &after.source) {
            return Err(Error::InvalidArgument(format!(
                "cannot compose: target {} is not source {}",
                self.target.spec(),
                after.source.spec()
            )));
        }
        let map = self.map.iter().map(|&y| after.map[y]).collect();
        Ok(ModuleHom::from_map_unchecked(self.source.clone(), after.target.clone(), map))
    }

    pub fn inverse(&self) -> Result<ModuleHom> {
        if !self.is_bijective() {
            return Err(Error::InvalidArgument("hom is not bijective".into()));
        }
        let mut inv = vec![0; self.target.size()];
        for x in self.source.elements() {
            inv[self.map[x]] = x;
        }
        Ok(ModuleHom::from_map_unchecked(self.target.clone(), self.source.clone(), inv))
    }

    pub fn same_map(&self, other: &ModuleHom) -> bool {
        self.map == other.map
    }

    pub fn record(&self) -> HomRecord {
        HomRecord {
            source: self.source.spec().to_string(),
            target: self.target.spec().to_string(),
            generator_images: self.images.clone(),
            element_map: self.map.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomFilter {
    Any,
    /// Only injective homs; generator images are pre-filtered by requiring
    /// equal annihilators.
    Injective,
}

/// Visits every hom `m → n` passing `filter`, in lexicographic order of
/// generator images. The callback receives generator images and the full
/// element map.
pub fn for_each_hom(
    m: &Module,
    n: &Module,
    filter: HomFilter,
    bound: u128,
    mut visit: impl FnMut(&[usize], &[usize]) -> ControlFlow<()>,
) -> Result<()> {
    check_same_ring(m, n)?;
    let k = m.num_generators();
    let anns: Vec<Vec<usize>> = m.generators().iter().map(|&g| m.annihilator_of(g)).collect();
    let candidates: Vec<Vec<usize>> = anns
        .iter()
        .map(|ann| {
            n.elements()
                .filter(|&y| match filter {
                    HomFilter::Any => ann.iter().all(|&r| n.act(r, y) == 0),
                    HomFilter::Injective => n.annihilator_of(y) == *ann,
                })
                .collect()
        })
        .collect();
    let space = candidates
        .iter()
        .try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128))
        .unwrap_or(u128::MAX);
    if space > bound {
        return Err(Error::cap("hom search space", bound, space));
    }
    if space == 0 {
        return Ok(());
    }
    // Columns checked as soon as their last nonzero row is assigned.
    let rel = m.relations();
    let mut due: Vec<Vec<Vec<usize>>> = vec![Vec::new(); k];
    for j in 0..rel.cols() {
        let col = rel.column(j);
        if let Some(last) = col.iter().rposition(|&x| x != 0) {
            due[last].push(col);
        }
    }
    let mut images = vec![0; k];
    let mut map = vec![0; m.size()];
    let mut stop = false;
    search(
        m,
        n,
        filter,
        &candidates,
        &due,
        0,
        &mut images,
        &mut map,
        &mut visit,
        &mut stop,
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn search(
    m: &Module,
    n: &Module,
    filter: HomFilter,
    candidates: &[Vec<usize>],
    due: &[Vec<Vec<usize>>],
    depth: usize,
    images: &mut Vec<usize>,
    map: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize], &[usize]) -> ControlFlow<()>,
    stop: &mut bool,
) {
    if depth == candidates.len() {
        for x in m.elements() {
            map[x] = combine_with(n, m.coords(x), images);
        }
        if filter == HomFilter::Injective && map.iter().skip(1).any(|&y| y == 0) {
            return;
        }
        if visit(images, map).is_break() {
            *stop = true;
        }
        return;
    }
    for &y in &candidates[depth] {
        images[depth] = y;
        if due[depth].iter().all(|col| combine_with(n, col, images) == 0) {
            search(m, n, filter, candidates, due, depth + 1, images, map, visit, stop);
            if *stop {
                return;
            }
        }
    }
}

pub fn hom_set(m: &Module, n: &Module) -> Result<Vec<ModuleHom>> {
    let mut out = Vec::new();
    for_each_hom(m, n, HomFilter::Any, DEFAULT_HOM_BOUND, |_, map| {
        out.push(ModuleHom::from_map_unchecked(m.clone(), n.clone(), map.to_vec()));
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

pub fn count_homs(m: &Module, n: &Module) -> Result<u128> {
    let mut count = 0u128;
    for_each_hom(m, n, HomFilter::Any, DEFAULT_HOM_BOUND, |_, _| {
        count += 1;
        ControlFlow::Continue(())
    })?;
    Ok(count)
}

#[derive(Clone, Debug)]
pub struct KernelImageCoker {
    pub kernel: Module,
    pub kernel_inclusion: ModuleHom,
    pub image: Module,
    pub image_inclusion: ModuleHom,
    pub cokernel: Module,
    pub projection: ModuleHom,
}

pub fn kernel_image_coker(h: &ModuleHom) -> Result<KernelImageCoker> {
    let (kernel, kernel_inclusion) = submodule(h.source(), &h.kernel_set())?;
    let image_set = h.image_set();
    let (image, image_inclusion) = submodule(h.target(), &image_set)?;
    let (cokernel, projection) = quotient(h.target(), &image_set)?;
    if kernel.size() * image.size() != h.source().size() || cokernel.size() * image.size() != h.target().size() {
        return Err(Error::Invariant("kernel/image/cokernel cardinalities disagree".into()));
    }
    Ok(KernelImageCoker {
        kernel,
        kernel_inclusion,
        image,
        image_inclusion,
        cokernel,
        projection,
    })
}

/// Decides `m ≅ n`, returning an isomorphism `m → n` when one exists.
/// Cheap invariants are compared first; the search then assigns images to
/// the generators of whichever side has fewer generators.
pub fn is_isomorphic(m: &Module, n: &Module) -> Result<Option<ModuleHom>> {
    check_same_ring(m, n)?;
    if m.size() != n.size() {
        return Ok(None);
    }
    let ring = m.ring();
    for r in ring.elements() {
        if m.scaled(r).count_ones(..) != n.scaled(r).count_ones(..) {
            return Ok(None);
        }
    }
    if structure::local_generator_counts(m)? != structure::local_generator_counts(n)? {
        return Ok(None);
    }
    let (from, to, flip) = if m.num_generators() <= n.num_generators() {
        (m, n, false)
    } else {
        (n, m, true)
    };
    let mut found = None;
    for_each_hom(from, to, HomFilter::Injective, DEFAULT_HOM_BOUND, |_, map| {
        found = Some(map.to_vec());
        ControlFlow::Break(())
    })?;
    let Some(map) = found else {
        return Ok(None);
    };
    let h = ModuleHom::from_map_unchecked(from.clone(), to.clone(), map);
    Ok(Some(if flip { h.inverse()? } else { h }))
}
