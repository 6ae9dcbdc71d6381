//! Fully tabled finite commutative rings and the constructions that build
//! them: residues mod n, products, quotients, trivial extensions,
//! amalgamated duplications, and localizations at maximal ideals.
//!
//! Elements are plain indices `0..size`. The additive identity is always
//! index 0; every constructor here preserves that.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::ideal::{self, Ideal};
use crate::module::PresentedModule;

pub type Ring = Arc<FiniteRing>;

static NEXT_RING_ID: AtomicU64 = AtomicU64::new(1);

pub struct FiniteRing {
    id: u64,
    size: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    neg: Vec<usize>,
    one: usize,
    spec: String,
    cache: RingCache,
}

#[derive(Default)]
struct RingCache {
    ideals: OnceLock<Vec<Ideal>>,
    principal: OnceLock<HashMap<Vec<usize>, usize>>,
    maximal: OnceLock<Vec<Ideal>>,
    units: OnceLock<Vec<usize>>,
    idempotents: OnceLock<Vec<usize>>,
    factors: OnceLock<Vec<LocalFactor>>,
    localizations: OnceLock<Vec<LocalizationParts>>,
}

/// A primitive idempotent together with the unique maximal ideal that
/// does not contain it. `R·idempotent` is the corresponding local factor.
#[derive(Clone, Debug)]
pub struct LocalFactor {
    pub idempotent: usize,
    pub maximal: Ideal,
}

#[derive(Clone)]
struct LocalizationParts {
    kernel: Ideal,
    quotient: Ring,
    images: Vec<usize>,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing")
            .field("spec", &self.spec)
            .field("size", &self.size)
            .finish()
    }
}

impl FiniteRing {
    /// Builds a ring from explicit tables, validating every axiom.
    pub fn from_tables(
        size: usize,
        add: Vec<usize>,
        mul: Vec<usize>,
        zero: usize,
        one: usize,
        spec: impl Into<String>,
    ) -> Result<Ring> {
        if size == 0 {
            return Err(Error::InvalidArgument("ring must have at least one element".into()));
        }
        if add.len() != size * size || mul.len() != size * size {
            return Err(Error::InvalidArgument("table dimensions do not match size".into()));
        }
        if add.iter().chain(mul.iter()).any(|&x| x >= size) || one >= size {
            return Err(Error::InvalidArgument("table entry out of range".into()));
        }
        if zero != 0 {
            return Err(Error::InvalidArgument("additive identity must be element 0".into()));
        }
        let neg = negation_table(size, &add)
            .ok_or_else(|| Error::InvalidArgument("some element has no additive inverse".into()))?;
        let ring = FiniteRing::assemble(size, add, mul, neg, one, spec.into());
        ring.validate()?;
        Ok(Arc::new(ring))
    }

    fn assemble(size: usize, add: Vec<usize>, mul: Vec<usize>, neg: Vec<usize>, one: usize, spec: String) -> Self {
        FiniteRing {
            id: NEXT_RING_ID.fetch_add(1, Ordering::Relaxed),
            size,
            add,
            mul,
            neg,
            one,
            spec,
            cache: RingCache::default(),
        }
    }

    /// Trusted constructor used by the builders, which produce valid tables
    /// by construction.
    fn from_trusted(size: usize, add: Vec<usize>, mul: Vec<usize>, one: usize, spec: String) -> Ring {
        let neg = negation_table(size, &add).expect("constructed ring has additive inverses");
        Arc::new(FiniteRing::assemble(size, add, mul, neg, one, spec))
    }

    /// Checks commutativity, associativity, distributivity and identities on
    /// all pairs and triples. O(size³).
    pub fn validate(&self) -> Result<()> {
        let n = self.size;
        let fail = |what: &str, a: usize, b: usize, c: usize| {
            Err(Error::Invariant(format!("{} fails at ({a}, {b}, {c}) in {}", what, self.spec)))
        };
        if n > 1 && self.one == 0 {
            return fail("one != zero", 0, 0, 0);
        }
        for a in 0..n {
            if self.add(a, 0) != a {
                return fail("additive identity", a, 0, 0);
            }
            if self.mul(a, self.one) != a {
                return fail("multiplicative identity", a, 0, 0);
            }
            if self.add(a, self.neg(a)) != 0 {
                return fail("additive inverse", a, 0, 0);
            }
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) {
                    return fail("additive commutativity", a, b, 0);
                }
                if self.mul(a, b) != self.mul(b, a) {
                    return fail("multiplicative commutativity", a, b, 0);
                }
                let ab_sum = self.add(a, b);
                let ab_prod = self.mul(a, b);
                for c in 0..n {
                    if self.add(ab_sum, c) != self.add(a, self.add(b, c)) {
                        return fail("additive associativity", a, b, c);
                    }
                    if self.mul(ab_prod, c) != self.mul(a, self.mul(b, c)) {
                        return fail("multiplicative associativity", a, b, c);
                    }
                    if self.mul(a, self.add(b, c)) != self.add(ab_prod, self.mul(a, c)) {
                        return fail("distributivity", a, b, c);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size + b]
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.one, |acc, _| self.mul(acc, a))
    }

    /// The image of the integer `k` under the canonical map from the integers.
    pub fn from_int(&self, k: i64) -> usize {
        let mut acc = 0;
        for _ in 0..k.unsigned_abs() {
            acc = self.add(acc, self.one);
        }
        if k < 0 {
            self.neg(acc)
        } else {
            acc
        }
    }

    pub fn is_zero_ring(&self) -> bool {
        self.size == 1
    }

    pub fn add_table(&self) -> &[usize] {
        &self.add
    }

    pub fn mul_table(&self) -> &[usize] {
        &self.mul
    }

    pub fn same_ring(&self, other: &FiniteRing) -> bool {
        self.id == other.id
    }

    pub fn is_unit(&self, a: usize) -> bool {
        self.units().binary_search(&a).is_ok()
    }

    pub fn inverse(&self, a: usize) -> Option<usize> {
        self.elements().find(|&b| self.mul(a, b) == self.one)
    }

    pub fn units(&self) -> &[usize] {
        self.cache.units.get_or_init(|| {
            self.elements()
                .filter(|&a| self.elements().any(|b| self.mul(a, b) == self.one))
                .collect()
        })
    }

    pub fn idempotents(&self) -> &[usize] {
        self.cache
            .idempotents
            .get_or_init(|| self.elements().filter(|&a| self.mul(a, a) == a).collect())
    }

    /// All ideals under the default enumeration cap, cached.
    pub fn ideals(&self) -> Result<&[Ideal]> {
        self.ideals_capped(ideal::DEFAULT_IDEAL_CAP)
    }

    pub fn ideals_capped(&self, cap: usize) -> Result<&[Ideal]> {
        if let Some(cached) = self.cache.ideals.get() {
            if cached.len() > cap {
                return Err(Error::cap("ideal count", cap as u128, cached.len() as u128));
            }
            return Ok(cached);
        }
        let computed = ideal::compute_all_ideals(self, cap)?;
        Ok(self.cache.ideals.get_or_init(|| computed))
    }

    /// Map from the element set of each principal ideal to its least generator.
    pub(crate) fn principal_ideals(&self) -> &HashMap<Vec<usize>, usize> {
        self.cache.principal.get_or_init(|| {
            let mut map = HashMap::new();
            for a in self.elements() {
                let set = ideal::principal_set(self, a);
                map.entry(set).or_insert(a);
            }
            map
        })
    }

    pub fn maximal_ideals(&self) -> Result<&[Ideal]> {
        if let Some(m) = self.cache.maximal.get() {
            return Ok(m);
        }
        let all = self.ideals()?;
        let proper: Vec<&Ideal> = all.iter().filter(|i| i.len() < self.size).collect();
        let maximal = proper
            .iter()
            .filter(|i| !proper.iter().any(|j| j.len() > i.len() && i.is_subset(j)))
            .map(|i| (*i).clone())
            .collect();
        Ok(self.cache.maximal.get_or_init(|| maximal))
    }

    pub fn is_local(&self) -> Result<bool> {
        Ok(self.maximal_ideals()?.len() == 1)
    }

    /// The primitive idempotents, each paired with the maximal ideal of its
    /// local factor. Their sum is 1 and they are pairwise orthogonal.
    pub fn local_factors(&self) -> Result<&[LocalFactor]> {
        if let Some(f) = self.cache.factors.get() {
            return Ok(f);
        }
        let maximal = self.maximal_ideals()?;
        let nonzero: Vec<usize> = self.idempotents().iter().copied().filter(|&e| e != 0).collect();
        let primitive: Vec<usize> = nonzero
            .iter()
            .copied()
            .filter(|&e| !nonzero.iter().any(|&f| f != e && self.mul(e, f) == f))
            .collect();
        let mut factors = Vec::with_capacity(primitive.len());
        for &e in &primitive {
            let outside: Vec<&Ideal> = maximal.iter().filter(|p| !p.contains(e)).collect();
            if outside.len() != 1 {
                return Err(Error::Invariant(format!(
                    "primitive idempotent {e} lies outside {} maximal ideals of {}",
                    outside.len(),
                    self.spec
                )));
            }
            factors.push(LocalFactor {
                idempotent: e,
                maximal: outside[0].clone(),
            });
        }
        let total = primitive.iter().fold(0, |acc, &e| self.add(acc, e));
        if !self.is_zero_ring() && total != self.one {
            return Err(Error::Invariant(format!(
                "primitive idempotents of {} do not sum to one",
                self.spec
            )));
        }
        if factors.len() != maximal.len() {
            return Err(Error::Invariant(format!(
                "{} has {} primitive idempotents but {} maximal ideals",
                self.spec,
                factors.len(),
                maximal.len()
            )));
        }
        Ok(self.cache.factors.get_or_init(|| factors))
    }

    fn localization_parts(&self) -> Result<&[LocalizationParts]> {
        if let Some(parts) = self.cache.localizations.get() {
            return Ok(parts);
        }
        let mut parts = Vec::new();
        for p in self.maximal_ideals()? {
            let outside: Vec<usize> = self.elements().filter(|&s| !p.contains(s)).collect();
            let kernel_set: Vec<usize> = self
                .elements()
                .filter(|&r| outside.iter().any(|&s| self.mul(s, r) == 0))
                .collect();
            let kernel = Ideal::from_elements(self, kernel_set)?;
            let (quotient, images) = quotient_tables(self, &kernel, self.quotient_spec(&kernel));
            parts.push(LocalizationParts {
                kernel,
                quotient,
                images,
            });
        }
        Ok(self.cache.localizations.get_or_init(|| parts))
    }

    fn quotient_spec(&self, ideal: &Ideal) -> String {
        format!("quot:({};{})", self.spec, join_indices(ideal.gens()))
    }
}

fn negation_table(size: usize, add: &[usize]) -> Option<Vec<usize>> {
    (0..size)
        .map(|a| (0..size).find(|&b| add[a * size + b] == 0))
        .collect()
}

pub(crate) fn join_indices(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// A ring homomorphism recorded by the image of every source element.
#[derive(Clone, Debug)]
pub struct RingHom {
    source: Ring,
    target: Ring,
    images: Vec<usize>,
}

impl RingHom {
    pub fn new(source: Ring, target: Ring, images: Vec<usize>) -> Result<Self> {
        if images.len() != source.size() || images.iter().any(|&y| y >= target.size()) {
            return Err(Error::InvalidArgument("image table has wrong shape".into()));
        }
        let hom = RingHom {
            source,
            target,
            images,
        };
        hom.check()?;
        Ok(hom)
    }

    fn check(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        if self.images[0] != 0 || self.images[s.one()] != t.one() {
            return Err(Error::Invariant("ring hom does not preserve 0 and 1".into()));
        }
        for a in s.elements() {
            for b in s.elements() {
                if self.images[s.add(a, b)] != t.add(self.images[a], self.images[b])
                    || self.images[s.mul(a, b)] != t.mul(self.images[a], self.images[b])
                {
                    return Err(Error::Invariant(format!("ring hom not additive/multiplicative at ({a}, {b})")));
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// Least preimage of every target element, if the map is surjective.
    pub fn section(&self) -> Option<Vec<usize>> {
        let mut lift = vec![usize::MAX; self.target.size()];
        for x in self.source.elements().rev() {
            lift[self.images[x]] = x;
        }
        lift.iter().all(|&x| x != usize::MAX).then_some(lift)
    }

    pub fn compose(&self, after: &RingHom) -> Result<RingHom> {
        if !self.target.same_ring(&after.source) {
            return Err(Error::RingMismatch("composition of ring homs".into()));
        }
        let images = self.images.iter().map(|&y| after.images[y]).collect();
        Ok(RingHom {
            source: self.source.clone(),
            target: after.target.clone(),
            images,
        })
    }
}

/// Localization of a finite ring at a maximal ideal `P`, realized as the
/// quotient by `{ r | s·r = 0 for some s ∉ P }`. Multiplication by an element
/// outside `P` is injective on the quotient, hence bijective because the
/// quotient is finite, so every such element becomes a unit.
#[derive(Clone, Debug)]
pub struct Localization {
    pub base: Ring,
    pub prime: Ideal,
    pub kernel: Ideal,
    pub quotient_ring: Ring,
    pub projection: RingHom,
}

impl Localization {
    pub fn lift(&self) -> Vec<usize> {
        self.projection.section().expect("localization map is surjective")
    }
}

pub fn build_zmod(n: usize) -> Result<Ring> {
    if n == 0 {
        return Err(Error::InvalidArgument("zmod modulus must be positive".into()));
    }
    if n > MAX_RING_SIZE {
        return Err(Error::cap("ring size", MAX_RING_SIZE as u128, n as u128));
    }
    let mut add = vec![0; n * n];
    let mut mul = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            add[a * n + b] = (a + b) % n;
            mul[a * n + b] = (a * b) % n;
        }
    }
    Ok(FiniteRing::from_trusted(n, add, mul, 1 % n, format!("zmod:{n}")))
}

/// Componentwise product. Element order is lexicographic on the factor
/// indices, first factor most significant.
pub fn build_product(factors: &[Ring]) -> Result<Ring> {
    if factors.is_empty() {
        return Err(Error::InvalidArgument("product of an empty list".into()));
    }
    let size = factors
        .iter()
        .try_fold(1usize, |acc, f| acc.checked_mul(f.size()))
        .filter(|&s| s <= MAX_RING_SIZE)
        .ok_or_else(|| Error::cap("product ring size", MAX_RING_SIZE as u128, u128::MAX))?;
    let decode = |mut x: usize| -> Vec<usize> {
        let mut digits = vec![0; factors.len()];
        for (i, f) in factors.iter().enumerate().rev() {
            digits[i] = x % f.size();
            x /= f.size();
        }
        digits
    };
    let encode = |digits: &[usize]| -> usize {
        digits
            .iter()
            .zip(factors)
            .fold(0, |acc, (&d, f)| acc * f.size() + d)
    };
    let coords: Vec<Vec<usize>> = (0..size).map(decode).collect();
    let mut add = vec![0; size * size];
    let mut mul = vec![0; size * size];
    let mut buf = vec![0; factors.len()];
    for a in 0..size {
        for b in 0..size {
            for (i, f) in factors.iter().enumerate() {
                buf[i] = f.add(coords[a][i], coords[b][i]);
            }
            add[a * size + b] = encode(&buf);
            for (i, f) in factors.iter().enumerate() {
                buf[i] = f.mul(coords[a][i], coords[b][i]);
            }
            mul[a * size + b] = encode(&buf);
        }
    }
    let one = encode(&factors.iter().map(|f| f.one()).collect::<Vec<_>>());
    let spec = format!(
        "prod:[{}]",
        factors.iter().map(|f| f.spec().to_string()).collect::<Vec<_>>().join(",")
    );
    Ok(FiniteRing::from_trusted(size, add, mul, one, spec))
}

/// Projection of a product onto factor `index`.
pub fn product_projection(product: &Ring, factors: &[Ring], index: usize) -> Result<RingHom> {
    let later: usize = factors[index + 1..].iter().map(|f| f.size()).product();
    let images = product
        .elements()
        .map(|x| (x / later) % factors[index].size())
        .collect();
    RingHom::new(product.clone(), factors[index].clone(), images)
}

pub const MAX_RING_SIZE: usize = 4096;

fn quotient_tables(r: &FiniteRing, ideal: &Ideal, spec: String) -> (Ring, Vec<usize>) {
    let n = r.size();
    let mut class = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if class[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &i in ideal.elements() {
            class[r.add(x, i)] = c;
        }
    }
    let q = reps.len();
    let mut add = vec![0; q * q];
    let mut mul = vec![0; q * q];
    for a in 0..q {
        for b in 0..q {
            add[a * q + b] = class[r.add(reps[a], reps[b])];
            mul[a * q + b] = class[r.mul(reps[a], reps[b])];
        }
    }
    let ring = FiniteRing::from_trusted(q, add, mul, class[r.one()], spec);
    (ring, class)
}

/// Quotient by the ideal generated by `gens`. Cosets are ordered by their
/// least element.
pub fn build_quotient(r: &Ring, gens: &[usize]) -> Result<(Ring, RingHom)> {
    check_indices(r, gens)?;
    let ideal = ideal::ideal_generated(r, gens);
    let spec = format!("quot:({};{})", r.spec(), join_indices(gens));
    let (q, images) = quotient_tables(r, &ideal, spec);
    let hom = RingHom {
        source: r.clone(),
        target: q.clone(),
        images,
    };
    Ok((q, hom))
}

fn check_indices(r: &FiniteRing, xs: &[usize]) -> Result<()> {
    match xs.iter().find(|&&x| x >= r.size()) {
        Some(x) => Err(Error::InvalidArgument(format!(
            "element index {x} out of range for {} (size {})",
            r.spec(),
            r.size()
        ))),
        None => Ok(()),
    }
}

/// The trivial extension `A ∝ E` on `A × E` with
/// `(a, e)(a', e') = (aa', ae' + a'e)`. Element `(a, e)` has index `a·|E| + e`.
pub fn build_trivial_extension(a: &Ring, e: &PresentedModule) -> Result<Ring> {
    if !e.ring().same_ring(a) {
        return Err(Error::RingMismatch(format!(
            "module is over {} but the base ring is {}",
            e.ring().spec(),
            a.spec()
        )));
    }
    let (na, ne) = (a.size(), e.size());
    let size = na
        .checked_mul(ne)
        .filter(|&s| s <= MAX_RING_SIZE)
        .ok_or_else(|| Error::cap("trivial extension size", MAX_RING_SIZE as u128, (na * ne) as u128))?;
    let mut add = vec![0; size * size];
    let mut mul = vec![0; size * size];
    for x in 0..size {
        let (xa, xe) = (x / ne, x % ne);
        for y in 0..size {
            let (ya, ye) = (y / ne, y % ne);
            add[x * size + y] = a.add(xa, ya) * ne + e.add(xe, ye);
            let cross = e.add(e.act(xa, ye), e.act(ya, xe));
            mul[x * size + y] = a.mul(xa, ya) * ne + cross;
        }
    }
    let spec = format!("trivext:({};{})", a.spec(), e.spec());
    Ok(FiniteRing::from_trusted(size, add, mul, a.one() * ne, spec))
}

/// The amalgamated duplication `R ⋈ I = {(x, x + i)}` inside `R × R`.
/// Elements are ordered lexicographically by the pair.
pub fn build_duplication(r: &Ring, gens: &[usize]) -> Result<Ring> {
    check_indices(r, gens)?;
    let ideal = ideal::ideal_generated(r, gens);
    let n = r.size();
    let mut pairs = Vec::with_capacity(n * ideal.len());
    for x in 0..n {
        let mut ys: Vec<usize> = ideal.elements().iter().map(|&i| r.add(x, i)).collect();
        ys.sort_unstable();
        pairs.extend(ys.into_iter().map(|y| (x, y)));
    }
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let size = pairs.len();
    let mut add = vec![0; size * size];
    let mut mul = vec![0; size * size];
    for (p, &(x1, y1)) in pairs.iter().enumerate() {
        for (q, &(x2, y2)) in pairs.iter().enumerate() {
            add[p * size + q] = index[&(r.add(x1, x2), r.add(y1, y2))];
            mul[p * size + q] = index[&(r.mul(x1, x2), r.mul(y1, y2))];
        }
    }
    let one = index[&(r.one(), r.one())];
    let spec = format!("dup:({};{})", r.spec(), join_indices(gens));
    Ok(FiniteRing::from_trusted(size, add, mul, one, spec))
}

/// Units and idempotents by full scan, each sorted ascending.
pub fn units_and_idempotents(r: &FiniteRing) -> (Vec<usize>, Vec<usize>) {
    (r.units().to_vec(), r.idempotents().to_vec())
}

pub fn localize_at_maximal(r: &Ring, p: &Ideal) -> Result<Localization> {
    p.check_ring(r)?;
    let maximal = r.maximal_ideals()?;
    let idx = maximal
        .iter()
        .position(|m| m == p)
        .ok_or_else(|| Error::Precondition(format!("ideal {:?} is not maximal in {}", p.elements(), r.spec())))?;
    let parts = &r.localization_parts()?[idx];
    let projection = RingHom {
        source: r.clone(),
        target: parts.quotient.clone(),
        images: parts.images.clone(),
    };
    let q = &parts.quotient;
    for s in r.elements().filter(|&s| !p.contains(s)) {
        if !q.is_unit(projection.apply(s)) {
            return Err(Error::Invariant(format!(
                "element {s} outside the prime does not become a unit in the localization of {}",
                r.spec()
            )));
        }
    }
    Ok(Localization {
        base: r.clone(),
        prime: p.clone(),
        kernel: parts.kernel.clone(),
        quotient_ring: q.clone(),
        projection,
    })
}

/// Localizations at every maximal ideal, in canonical maximal-ideal order.
pub fn all_localizations(r: &Ring) -> Result<Vec<Localization>> {
    r.maximal_ideals()?
        .iter()
        .map(|p| localize_at_maximal(r, p))
        .collect()
}

/// Searches for a ring isomorphism by backtracking over images of
/// additive-and-multiplicative generators. Only used for small rings.
pub fn find_isomorphism(a: &Ring, b: &Ring) -> Option<Vec<usize>> {
    if a.size() != b.size() {
        return None;
    }
    // Every element of `a` is reached from 0 and 1 by the ring operations;
    // choose a small generating set greedily.
    let mut gens: Vec<usize> = Vec::new();
    let mut reached = closure_subring(a, &gens);
    for x in a.elements() {
        if !reached[x] {
            gens.push(x);
            reached = closure_subring(a, &gens);
        }
    }
    let mut images = vec![0; gens.len()];
    fn extend(a: &FiniteRing, b: &FiniteRing, gens: &[usize], images: &mut Vec<usize>, depth: usize) -> Option<Vec<usize>> {
        if depth == gens.len() {
            return map_from_generators(a, b, gens, images);
        }
        for y in b.elements() {
            images[depth] = y;
            if let Some(m) = extend(a, b, gens, images, depth + 1) {
                return Some(m);
            }
        }
        None
    }
    extend(a, b, &gens, &mut images, 0)
}

fn closure_subring(r: &FiniteRing, gens: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; r.size()];
    let mut list = vec![0, r.one()];
    list.extend_from_slice(gens);
    list.sort_unstable();
    list.dedup();
    for &x in &list {
        seen[x] = true;
    }
    let mut i = 0;
    while i < list.len() {
        let x = list[i];
        for j in 0..=i {
            let y = list[j];
            for z in [r.add(x, y), r.mul(x, y), r.neg(x)] {
                if !seen[z] {
                    seen[z] = true;
                    list.push(z);
                }
            }
        }
        i += 1;
    }
    seen
}

fn map_from_generators(a: &FiniteRing, b: &FiniteRing, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; a.size()];
    let mut list = vec![0usize];
    map[0] = 0;
    let assign = |map: &mut Vec<usize>, list: &mut Vec<usize>, x: usize, y: usize| -> bool {
        if map[x] == usize::MAX {
            map[x] = y;
            list.push(x);
            true
        } else {
            map[x] == y
        }
    };
    if !assign(&mut map, &mut list, a.one(), b.one()) {
        return None;
    }
    for (&g, &h) in gens.iter().zip(images) {
        if !assign(&mut map, &mut list, g, h) {
            return None;
        }
    }
    let mut i = 0;
    while i < list.len() {
        let x = list[i];
        for j in 0..=i {
            let y = list[j];
            let (fx, fy) = (map[x], map[y]);
            if !assign(&mut map, &mut list, a.add(x, y), b.add(fx, fy))
                || !assign(&mut map, &mut list, a.mul(x, y), b.mul(fx, fy))
            {
                return None;
            }
        }
        i += 1;
    }
    let mut hit = vec![false; b.size()];
    for &y in &map {
        if y == usize::MAX || hit[y] {
            return None;
        }
        hit[y] = true;
    }
    Some(map)
}
