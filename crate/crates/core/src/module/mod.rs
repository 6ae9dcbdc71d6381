//! Finitely presented modules over finite rings, stored as explicit
//! addition and action tables over an enumerated element set.
//!
//! Relation matrices follow one convention everywhere: rows are
//! generators, columns are relations. The module is the cokernel of the
//! column map into the free module on the rows.

mod hom;
mod pair;
mod structure;

use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::ring::{join_indices, FiniteRing, Ring};

pub use hom::{
    count_homs, for_each_hom, hom_set, is_isomorphic, kernel_image_coker, HomFilter, HomRecord,
    KernelImageCoker, ModuleHom, DEFAULT_HOM_BOUND,
};
pub use pair::{pair_ring, PairModule};
pub use structure::{
    baer_failure, is_flat, is_fp_injective, is_free_local, is_projective, local_ranks, localize_module,
    minimal_generators_local, realize_as_ideal, structure_tests, LocalRank, RealizedIdeal, StructureFlags,
};
pub(crate) use structure::is_simple;

pub type Module = Arc<PresentedModule>;

pub const MAX_MODULE_SIZE: usize = 4096;
/// Bound on `|R|^m` when enumerating the free module behind a presentation.
pub const MAX_FREE_VECTORS: usize = 1 << 20;

/// Row-major matrix of ring element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    /// Panics on ragged input; use [`Matrix::try_from_rows`] for untrusted data.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Matrix {
        Matrix::try_from_rows(rows).expect("rows of equal length")
    }

    pub fn try_from_rows(rows: Vec<Vec<usize>>) -> Result<Matrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("matrix rows have different lengths".into()));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_columns(rows: usize, columns: &[Vec<usize>]) -> Matrix {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: usize) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<usize> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<usize>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map_entries(&self, f: impl Fn(usize) -> usize) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn with_zero_column(&self) -> Matrix {
        let mut cols: Vec<Vec<usize>> = (0..self.cols).map(|j| self.column(j)).collect();
        cols.push(vec![0; self.rows]);
        Matrix::from_columns(self.rows, &cols)
    }

    /// Spec string in the module grammar, e.g. `matrix:[[2,1],[0,2]]`.
    pub fn spec(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| format!("[{}]", join_indices(self.row(i))))
            .collect();
        format!("matrix:[{}]", rows.join(","))
    }
}

pub struct PresentedModule {
    ring: Ring,
    relations: Matrix,
    spec: String,
    size: usize,
    add: Vec<u16>,
    act: Vec<u16>,
    gens: Vec<usize>,
    coords: Vec<Vec<usize>>,
}

impl fmt::Debug for PresentedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PresentedModule")
            .field("ring", &self.ring.spec())
            .field("spec", &self.spec)
            .field("size", &self.size)
            .finish()
    }
}

impl PresentedModule {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn relations(&self) -> &Matrix {
        &self.relations
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    pub fn is_zero(&self) -> bool {
        self.size == 1
    }

    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    /// Element indices of the generators, in row order of the relations.
    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    /// Coefficients expressing `x` in terms of the generators.
    pub fn coords(&self, x: usize) -> &[usize] {
        &self.coords[x]
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b] as usize
    }

    #[inline]
    pub fn act(&self, r: usize, x: usize) -> usize {
        self.act[r * self.size + x] as usize
    }

    pub fn neg(&self, x: usize) -> usize {
        self.act(self.ring.neg(self.ring.one()), x)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `Σ coeffs[j] · generator[j]`.
    pub fn combine(&self, coeffs: &[usize]) -> usize {
        combine_with(self, coeffs, &self.gens)
    }

    /// Ring elements killing `x`.
    pub fn annihilator_of(&self, x: usize) -> Vec<usize> {
        self.ring.elements().filter(|&r| self.act(r, x) == 0).collect()
    }

    /// Ring elements killing every element.
    pub fn annihilator(&self) -> Vec<usize> {
        self.ring
            .elements()
            .filter(|&r| self.gens.iter().all(|&g| self.act(r, g) == 0))
            .collect()
    }

    pub fn zero_set(&self) -> FixedBitSet {
        let mut z = FixedBitSet::with_capacity(self.size);
        z.insert(0);
        z
    }

    /// Submodule generated by `gens`.
    pub fn span(&self, gens: &[usize]) -> FixedBitSet {
        self.span_over(&self.zero_set(), gens)
    }

    /// `base + span(gens)` where `base` is already a submodule.
    pub fn span_over(&self, base: &FixedBitSet, gens: &[usize]) -> FixedBitSet {
        let mut additive = Vec::new();
        let mut seen = FixedBitSet::with_capacity(self.size);
        for &g in gens {
            for r in self.ring.elements() {
                let y = self.act(r, g);
                if !base.contains(y) && !seen.contains(y) {
                    seen.insert(y);
                    additive.push(y);
                }
            }
        }
        let mut members = base.clone();
        if additive.is_empty() {
            return members;
        }
        let mut list: Vec<usize> = members.ones().collect();
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &g in &additive {
                let y = self.add(x, g);
                if !members.contains(y) {
                    members.insert(y);
                    list.push(y);
                }
            }
            i += 1;
        }
        members
    }

    /// `r·M` as an element set.
    pub fn scaled(&self, r: usize) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.size);
        for x in self.elements() {
            s.insert(self.act(r, x));
        }
        s
    }

    /// `I·M` for a set of ring elements forming an ideal.
    pub fn ideal_times(&self, ideal: &Ideal) -> FixedBitSet {
        let prods: Vec<usize> = ideal
            .gens()
            .iter()
            .flat_map(|&a| self.gens.iter().map(move |&g| (a, g)))
            .map(|(a, g)| self.act(a, g))
            .collect();
        self.span(&prods)
    }

    /// Checks the module axioms on the stored tables. O(|R|·|M|²).
    pub fn validate(&self) -> Result<()> {
        let r = &self.ring;
        let fail = |what: &str| Err(Error::Invariant(format!("{what} fails in module {}", self.spec)));
        for a in self.elements() {
            if self.add(a, 0) != a {
                return fail("additive identity");
            }
            if self.act(r.one(), a) != a {
                return fail("unital action");
            }
            for b in self.elements() {
                if self.add(a, b) != self.add(b, a) {
                    return fail("additive commutativity");
                }
                let ab = self.add(a, b);
                for c in self.elements() {
                    if self.add(ab, c) != self.add(a, self.add(b, c)) {
                        return fail("additive associativity");
                    }
                }
                for s in r.elements() {
                    if self.act(s, ab) != self.add(self.act(s, a), self.act(s, b)) {
                        return fail("action distributes over module addition");
                    }
                }
            }
            for s in r.elements() {
                for t in r.elements() {
                    if self.act(r.add(s, t), a) != self.add(self.act(s, a), self.act(t, a)) {
                        return fail("action distributes over ring addition");
                    }
                    if self.act(r.mul(s, t), a) != self.act(s, self.act(t, a)) {
                        return fail("action associativity");
                    }
                }
            }
        }
        if self.gens.len() != self.relations.rows() {
            return fail("generator count matches relation rows");
        }
        for j in 0..self.relations.cols() {
            if self.combine(&self.relations.column(j)) != 0 {
                return fail("relation column vanishes");
            }
        }
        for x in self.elements() {
            if self.combine(&self.coords[x]) != x {
                return fail("coordinates reproduce element");
            }
        }
        Ok(())
    }
}

fn combine_with(m: &PresentedModule, coeffs: &[usize], targets: &[usize]) -> usize {
    coeffs
        .iter()
        .zip(targets)
        .fold(0, |acc, (&c, &g)| m.add(acc, m.act(c, g)))
}

fn check_size(size: usize) -> Result<()> {
    if size > MAX_MODULE_SIZE {
        return Err(Error::cap("module size", MAX_MODULE_SIZE as u128, size as u128));
    }
    Ok(())
}

/// Cokernel of the column map of `relations`.
pub fn present(r: &Ring, relations: &Matrix) -> Result<Module> {
    present_named(r, relations, relations.spec())
}

pub fn present_named(r: &Ring, relations: &Matrix, spec: impl Into<String>) -> Result<Module> {
    if relations.entries().iter().any(|&x| x >= r.size()) {
        return Err(Error::InvalidArgument(format!(
            "relation entry out of range for {}",
            r.spec()
        )));
    }
    let n = r.size();
    let m = relations.rows();
    let total = (0..m)
        .try_fold(1usize, |acc, _| acc.checked_mul(n))
        .filter(|&t| t <= MAX_FREE_VECTORS)
        .ok_or_else(|| Error::cap("free module enumeration", MAX_FREE_VECTORS as u128, (n as u128).saturating_pow(m as u32)))?;
    let decode = |mut v: usize| -> Vec<usize> {
        let mut d = vec![0; m];
        for i in (0..m).rev() {
            d[i] = v % n;
            v /= n;
        }
        d
    };
    let encode = |d: &[usize]| -> usize { d.iter().fold(0, |acc, &x| acc * n + x) };
    let vadd = |a: &[usize], b: &[usize]| -> Vec<usize> { a.iter().zip(b).map(|(&x, &y)| r.add(x, y)).collect() };

    // Additive generators of the column span.
    let mut additive: Vec<Vec<usize>> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for j in 0..relations.cols() {
        let col = relations.column(j);
        for s in r.elements() {
            let v: Vec<usize> = col.iter().map(|&c| r.mul(s, c)).collect();
            if v.iter().any(|&x| x != 0) && seen.insert(v.clone()) {
                additive.push(v);
            }
        }
    }
    let mut span: Vec<Vec<usize>> = vec![vec![0; m]];
    let mut in_span = FixedBitSet::with_capacity(total);
    in_span.insert(0);
    let mut i = 0;
    while i < span.len() {
        for g in &additive {
            let y = vadd(&span[i], g);
            let code = encode(&y);
            if !in_span.contains(code) {
                in_span.insert(code);
                span.push(y);
            }
        }
        i += 1;
    }
    if total / span.len() > MAX_MODULE_SIZE {
        return Err(Error::cap("module size", MAX_MODULE_SIZE as u128, (total / span.len()) as u128));
    }

    let mut class = vec![u32::MAX; total];
    let mut reps: Vec<Vec<usize>> = Vec::new();
    for v in 0..total {
        if class[v] != u32::MAX {
            continue;
        }
        let c = reps.len() as u32;
        let d = decode(v);
        for s in &span {
            class[encode(&vadd(&d, s))] = c;
        }
        reps.push(d);
    }
    let size = reps.len();
    check_size(size)?;
    let mut add = vec![0u16; size * size];
    for a in 0..size {
        for b in a..size {
            let c = class[encode(&vadd(&reps[a], &reps[b]))] as u16;
            add[a * size + b] = c;
            add[b * size + a] = c;
        }
    }
    let mut act = vec![0u16; n * size];
    for s in r.elements() {
        for a in 0..size {
            let v: Vec<usize> = reps[a].iter().map(|&x| r.mul(s, x)).collect();
            act[s * size + a] = class[encode(&v)] as u16;
        }
    }
    let gens = (0..m)
        .map(|i| {
            let mut d = vec![0; m];
            d[i] = r.one();
            class[encode(&d)] as usize
        })
        .collect();
    Ok(Arc::new(PresentedModule {
        ring: r.clone(),
        relations: relations.clone(),
        spec: spec.into(),
        size,
        add,
        act,
        gens,
        coords: reps,
    }))
}

/// Free module of rank `n`; element index of `(x_1, …, x_n)` is its
/// base-`|R|` encoding, first coordinate most significant.
pub fn free(r: &Ring, n: usize) -> Result<Module> {
    present_named(r, &Matrix::zeros(n, 0), format!("free:{n}"))
}

/// `R / (gens)`, the cyclic module with the listed annihilator generators.
pub fn cyclic(r: &Ring, gens: &[usize]) -> Result<Module> {
    let matrix = Matrix::from_rows(vec![gens.to_vec()]);
    present_named(r, &matrix, format!("cyclic:[{}]", join_indices(gens)))
}

/// Builds a module from explicit tables, deriving a minimal generating set,
/// coordinates, and a relation matrix. Tables are validated.
pub fn from_table(r: &Ring, size: usize, add: Vec<u16>, act: Vec<u16>) -> Result<Module> {
    if size == 0 || add.len() != size * size || act.len() != r.size() * size {
        return Err(Error::InvalidArgument("module tables have the wrong shape".into()));
    }
    if add.iter().chain(act.iter()).any(|&x| x as usize >= size) {
        return Err(Error::InvalidArgument("module table entry out of range".into()));
    }
    let m = from_table_trusted(r, size, add, act, None)?;
    m.validate()?;
    Ok(m)
}

pub(crate) fn from_table_trusted(
    r: &Ring,
    size: usize,
    add: Vec<u16>,
    act: Vec<u16>,
    spec: Option<String>,
) -> Result<Module> {
    check_size(size)?;
    let mut module = PresentedModule {
        ring: r.clone(),
        relations: Matrix::zeros(0, 0),
        spec: String::new(),
        size,
        add,
        act,
        gens: Vec::new(),
        coords: Vec::new(),
    };
    let gens = minimal_generators(&module)?;
    let (coords, relations) = coordinates_and_relations(&module, &gens)?;
    module.spec = spec.unwrap_or_else(|| relations.spec());
    module.gens = gens;
    module.coords = coords;
    module.relations = relations;
    Ok(Arc::new(module))
}

/// A generating set of minimal size: for each local factor `Re`, a basis of
/// `eM / P·eM` lifted greedily; the per-factor lists are then summed
/// position by position.
fn minimal_generators(m: &PresentedModule) -> Result<Vec<usize>> {
    let r = &m.ring;
    if m.size == 1 {
        return Ok(Vec::new());
    }
    let mut per_factor: Vec<Vec<usize>> = Vec::new();
    for factor in r.local_factors()? {
        let mut part = FixedBitSet::with_capacity(m.size);
        for x in m.elements() {
            part.insert(m.act(factor.idempotent, x));
        }
        let part_list: Vec<usize> = part.ones().collect();
        let radical_part: Vec<usize> = factor
            .maximal
            .gens()
            .iter()
            .flat_map(|&p| part_list.iter().map(move |&y| (p, y)))
            .map(|(p, y)| m.act(p, y))
            .collect();
        let mut reached = m.span(&radical_part);
        let mut chosen = Vec::new();
        for &y in &part_list {
            if !reached.contains(y) {
                chosen.push(y);
                reached = m.span_over(&reached, &[y]);
            }
        }
        per_factor.push(chosen);
    }
    let count = per_factor.iter().map(Vec::len).max().unwrap_or(0);
    Ok((0..count)
        .map(|j| {
            per_factor
                .iter()
                .filter_map(|c| c.get(j))
                .fold(0, |acc, &y| m.add(acc, y))
        })
        .collect())
}

/// Coordinates of every element and generators of the relation module,
/// built one generator at a time: the relations introduced at step `i` come
/// from the generators of `{ t | t·g_i ∈ span(g_1, …, g_{i−1}) }`.
fn coordinates_and_relations(m: &PresentedModule, gens: &[usize]) -> Result<(Vec<Vec<usize>>, Matrix)> {
    let r = &m.ring;
    let k = gens.len();
    let mut coords: Vec<Option<Vec<usize>>> = vec![None; m.size];
    coords[0] = Some(vec![0; k]);
    let mut span: Vec<usize> = vec![0];
    let mut columns: Vec<Vec<usize>> = Vec::new();
    for (i, &g) in gens.iter().enumerate() {
        let colon: Vec<usize> = r.elements().filter(|&t| coords[m.act(t, g)].is_some()).collect();
        let colon = Ideal::from_elements(r, colon)?;
        for &t in colon.gens() {
            if t == 0 {
                continue;
            }
            let c = coords[m.act(t, g)].as_ref().expect("colon element lies in span");
            let mut col: Vec<usize> = c.iter().map(|&x| r.neg(x)).collect();
            col[i] = t;
            columns.push(col);
        }
        let previous = span.len();
        for idx in 0..previous {
            let x = span[idx];
            for s in r.elements() {
                let y = m.add(x, m.act(s, g));
                if coords[y].is_none() {
                    let mut c = coords[x].clone().expect("span element has coordinates");
                    c[i] = s;
                    coords[y] = Some(c);
                    span.push(y);
                }
            }
        }
    }
    let coords: Option<Vec<Vec<usize>>> = coords.into_iter().collect();
    let coords = coords.ok_or_else(|| Error::Invariant("chosen generators do not span the module".into()))?;
    Ok((coords, Matrix::from_columns(k, &columns)))
}

/// The ideal as a module; element `j` is the `j`-th smallest ideal element.
pub fn from_ideal(r: &Ring, ideal: &Ideal) -> Result<Module> {
    ideal.check_ring(r)?;
    let elems = ideal.elements();
    let size = elems.len();
    let mut pos = vec![usize::MAX; r.size()];
    for (j, &x) in elems.iter().enumerate() {
        pos[x] = j;
    }
    let mut add = vec![0u16; size * size];
    for a in 0..size {
        for b in 0..size {
            add[a * size + b] = pos[r.add(elems[a], elems[b])] as u16;
        }
    }
    let mut act = vec![0u16; r.size() * size];
    for s in r.elements() {
        for a in 0..size {
            act[s * size + a] = pos[r.mul(s, elems[a])] as u16;
        }
    }
    from_table_trusted(r, size, add, act, None)
}

/// Submodule on the given element set, with elements relabelled in
/// ascending order, and its inclusion.
pub fn submodule(m: &Module, set: &FixedBitSet) -> Result<(Module, ModuleHom)> {
    let elems: Vec<usize> = set.ones().collect();
    let size = elems.len();
    let mut pos = vec![usize::MAX; m.size];
    for (j, &x) in elems.iter().enumerate() {
        pos[x] = j;
    }
    let lookup = |x: usize| -> Result<u16> {
        match pos[x] {
            usize::MAX => Err(Error::InvalidArgument("element set is not a submodule".into())),
            p => Ok(p as u16),
        }
    };
    if elems.first() != Some(&0) {
        return Err(Error::InvalidArgument("submodule must contain zero".into()));
    }
    let mut add = vec![0u16; size * size];
    for a in 0..size {
        for b in 0..size {
            add[a * size + b] = lookup(m.add(elems[a], elems[b]))?;
        }
    }
    let mut act = vec![0u16; m.ring.size() * size];
    for s in m.ring.elements() {
        for a in 0..size {
            act[s * size + a] = lookup(m.act(s, elems[a]))?;
        }
    }
    let sub = from_table_trusted(&m.ring, size, add, act, None)?;
    let inclusion = ModuleHom::from_map_unchecked(sub.clone(), m.clone(), elems);
    Ok((sub, inclusion))
}

/// Quotient by a submodule, cosets ordered by least element, with the
/// projection.
pub fn quotient(m: &Module, sub: &FixedBitSet) -> Result<(Module, ModuleHom)> {
    if !sub.contains(0) {
        return Err(Error::InvalidArgument("submodule must contain zero".into()));
    }
    let sub_list: Vec<usize> = sub.ones().collect();
    let mut class = vec![usize::MAX; m.size];
    let mut reps = Vec::new();
    for x in m.elements() {
        if class[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &s in &sub_list {
            let y = m.add(x, s);
            if class[y] != usize::MAX && class[y] != c {
                return Err(Error::InvalidArgument("element set is not a submodule".into()));
            }
            class[y] = c;
        }
    }
    let size = reps.len();
    if size * sub_list.len() != m.size {
        return Err(Error::InvalidArgument("element set is not a submodule".into()));
    }
    let mut add = vec![0u16; size * size];
    for a in 0..size {
        for b in 0..size {
            add[a * size + b] = class[m.add(reps[a], reps[b])] as u16;
        }
    }
    let mut act = vec![0u16; m.ring.size() * size];
    for s in m.ring.elements() {
        for a in 0..size {
            act[s * size + a] = class[m.act(s, reps[a])] as u16;
        }
    }
    let q = from_table_trusted(&m.ring, size, add, act, None)?;
    let projection = ModuleHom::from_map_unchecked(m.clone(), q.clone(), class);
    Ok((q, projection))
}

pub struct DirectSum {
    pub module: Module,
    pub injections: Vec<ModuleHom>,
    pub projections: Vec<ModuleHom>,
}

/// Direct sum with lexicographic element order, first summand most
/// significant. Generators are the injected generators of each summand in
/// order and the relation matrix is block diagonal.
pub fn direct_sum(parts: &[Module]) -> Result<DirectSum> {
    direct_sum_named(parts, None)
}

pub fn direct_sum_named(parts: &[Module], spec: Option<String>) -> Result<DirectSum> {
    let ring = match parts.first() {
        Some(p) => p.ring.clone(),
        None => return Err(Error::InvalidArgument("direct sum of an empty list".into())),
    };
    if parts.iter().any(|p| !p.ring.same_ring(&ring)) {
        return Err(Error::RingMismatch("direct sum summands over different rings".into()));
    }
    let size = parts
        .iter()
        .try_fold(1usize, |acc, p| acc.checked_mul(p.size))
        .filter(|&s| s <= MAX_MODULE_SIZE)
        .ok_or_else(|| Error::cap("module size", MAX_MODULE_SIZE as u128, u128::MAX))?;
    let weights: Vec<usize> = (0..parts.len())
        .map(|i| parts[i + 1..].iter().map(|p| p.size).product())
        .collect();
    let digit = |x: usize, i: usize| (x / weights[i]) % parts[i].size;
    let mut add = vec![0u16; size * size];
    for a in 0..size {
        for b in 0..size {
            let s: usize = (0..parts.len())
                .map(|i| parts[i].add(digit(a, i), digit(b, i)) * weights[i])
                .sum();
            add[a * size + b] = s as u16;
        }
    }
    let mut act = vec![0u16; ring.size() * size];
    for r in ring.elements() {
        for a in 0..size {
            let s: usize = (0..parts.len()).map(|i| parts[i].act(r, digit(a, i)) * weights[i]).sum();
            act[r * size + a] = s as u16;
        }
    }
    let mut gens = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        gens.extend(p.gens.iter().map(|&g| g * weights[i]));
    }
    let coords: Vec<Vec<usize>> = (0..size)
        .map(|x| {
            (0..parts.len())
                .flat_map(|i| parts[i].coords(digit(x, i)).to_vec())
                .collect()
        })
        .collect();
    let total_rows: usize = parts.iter().map(|p| p.num_generators()).sum();
    let mut columns = Vec::new();
    let mut offset = 0;
    for p in parts {
        for j in 0..p.relations.cols() {
            let mut col = vec![0; total_rows];
            for i in 0..p.relations.rows() {
                col[offset + i] = p.relations.get(i, j);
            }
            columns.push(col);
        }
        offset += p.num_generators();
    }
    let relations = Matrix::from_columns(total_rows, &columns);
    let module = Arc::new(PresentedModule {
        ring: ring.clone(),
        spec: spec.unwrap_or_else(|| relations.spec()),
        relations,
        size,
        add,
        act,
        gens,
        coords,
    });
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        let inj = p.elements().map(|x| x * weights[i]).collect();
        injections.push(ModuleHom::from_map_unchecked(p.clone(), module.clone(), inj));
        let proj = (0..size).map(|x| digit(x, i)).collect();
        projections.push(ModuleHom::from_map_unchecked(module.clone(), p.clone(), proj));
    }
    Ok(DirectSum {
        module,
        injections,
        projections,
    })
}

/// The same module under a different spec string.
pub fn renamed(m: &Module, spec: impl Into<String>) -> Module {
    Arc::new(PresentedModule {
        ring: m.ring.clone(),
        relations: m.relations.clone(),
        spec: spec.into(),
        size: m.size,
        add: m.add.clone(),
        act: m.act.clone(),
        gens: m.gens.clone(),
        coords: m.coords.clone(),
    })
}

/// Whether `m` is a module over `r` (same ring instance).
pub fn is_over(m: &PresentedModule, r: &FiniteRing) -> bool {
    m.ring.same_ring(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::ideal_generated;
    use crate::ring::build_zmod;

    #[test]
    fn present_examples() {
        let z4 = build_zmod(4).unwrap();
        let m = present(&z4, &Matrix::from_rows(vec![vec![2]])).unwrap();
        assert_eq!(m.size(), 2);
        let f = present(&z4, &Matrix::zeros(1, 0)).unwrap();
        assert_eq!(f.size(), 4);
        let z6 = build_zmod(6).unwrap();
        assert_eq!(present(&z6, &Matrix::from_rows(vec![vec![0]])).unwrap().size(), 6);
        m.validate().unwrap();
    }

    #[test]
    fn free_module_indexing_matches_ring() {
        let z6 = build_zmod(6).unwrap();
        let f = free(&z6, 1).unwrap();
        for a in z6.elements() {
            for x in z6.elements() {
                assert_eq!(f.act(a, x), z6.mul(a, x));
            }
        }
    }

    #[test]
    fn table_modules_get_minimal_presentations() {
        let z12 = build_zmod(12).unwrap();
        let i = ideal_generated(&z12, &[2]);
        let m = from_ideal(&z12, &i).unwrap();
        m.validate().unwrap();
        assert_eq!(m.num_generators(), 1);
        assert_eq!(m.size(), 6);

        let z2 = build_zmod(2).unwrap();
        let sum = direct_sum(&[free(&z2, 1).unwrap(), free(&z2, 1).unwrap()]).unwrap();
        sum.module.validate().unwrap();
        let (q, p) = quotient(&sum.module, &sum.module.span(&[sum.module.generators()[0]])).unwrap();
        q.validate().unwrap();
        assert_eq!(q.size(), 2);
        assert!(p.is_surjective());
    }

    #[test]
    fn matrix_spec_round_trip_shape() {
        let m = Matrix::from_rows(vec![vec![2, 1, 1], vec![0, 2, 2]]);
        assert_eq!(m.spec(), "matrix:[[2,1,1],[0,2,2]]");
        assert_eq!(m.column(1), vec![1, 2]);
        assert_eq!(Matrix::zeros(2, 0).spec(), "matrix:[[],[]]");
    }
}
