use std::fmt;
use std::sync::Arc;

use super::{free, from_table_trusted, Module, ModuleHom};
use crate::error::{Error, Result};
use crate::ring::{build_trivial_extension, FiniteRing, Ring};

/// `A ∝ A`, with `(a, b)` at index `a·|A| + b`.
pub fn pair_ring(base: &Ring) -> Result<Ring> {
    build_trivial_extension(base, &*free(base, 1)?)
}

/// A module over `A ∝ A` given as an `A`-module `U` with an endomorphism
/// `f` satisfying `f² = 0`; `(a, b)` acts by `u ↦ a·u + b·f(u)`.
#[derive(Clone)]
pub struct PairModule {
    ext: Ring,
    carrier: Module,
    endo: ModuleHom,
}

impl fmt::Debug for PairModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PairModule")
            .field("carrier", &self.carrier.spec())
            .field("endo", &self.endo.images())
            .finish()
    }
}

fn check_pair_layout(ext: &FiniteRing, base: &FiniteRing) -> Result<()> {
    let n = base.size();
    if ext.size() != n * n {
        return Err(Error::InvalidArgument(format!("{} is not the pair ring of {}", ext.spec(), base.spec())));
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let expect = base.mul(a, c) * n + base.add(base.mul(a, d), base.mul(b, c));
                    if ext.mul(a * n + b, c * n + d) != expect {
                        return Err(Error::InvalidArgument(format!(
                            "{} is not the pair ring of {}",
                            ext.spec(),
                            base.spec()
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

impl PairModule {
    /// `ext` must be [`pair_ring`] of the carrier's ring (same instance
    /// whenever pair modules are to be compared).
    pub fn new(ext: &Ring, carrier: Module, endo: ModuleHom) -> Result<PairModule> {
        if !Arc::ptr_eq(endo.source(), &carrier) || !Arc::ptr_eq(endo.target(), &carrier) {
            return Err(Error::InvalidArgument("endomorphism must act on the carrier".into()));
        }
        if carrier.elements().any(|u| endo.apply(endo.apply(u)) != 0) {
            return Err(Error::InvalidArgument("endomorphism does not square to zero".into()));
        }
        check_pair_layout(ext, carrier.ring())?;
        Ok(PairModule {
            ext: ext.clone(),
            carrier,
            endo,
        })
    }

    /// Recovers `(U, f)` from a module over `A ∝ A`: `U` is the restriction
    /// to `A` and `f` is the action of `(0, 1)`.
    pub fn from_module(base: &Ring, m: &Module) -> Result<PairModule> {
        let ext = m.ring().clone();
        check_pair_layout(&ext, base)?;
        let n = base.size();
        let size = m.size();
        let mut add = vec![0u16; size * size];
        for a in 0..size {
            for b in 0..size {
                add[a * size + b] = m.add(a, b) as u16;
            }
        }
        let mut act = vec![0u16; n * size];
        for a in 0..n {
            for u in 0..size {
                act[a * size + u] = m.act(a * n, u) as u16;
            }
        }
        let carrier = from_table_trusted(base, size, add, act, None)?;
        let f: Vec<usize> = (0..size).map(|u| m.act(1 % n, u)).collect();
        let endo = ModuleHom::from_map(carrier.clone(), carrier.clone(), f)?;
        PairModule::new(&ext, carrier, endo)
    }

    pub fn ext(&self) -> &Ring {
        &self.ext
    }

    pub fn base(&self) -> &Ring {
        self.carrier.ring()
    }

    pub fn carrier(&self) -> &Module {
        &self.carrier
    }

    pub fn endo(&self) -> &ModuleHom {
        &self.endo
    }

    pub fn kernel_equals_image(&self) -> bool {
        self.endo.kernel_set() == self.endo.image_set()
    }

    /// The same elements viewed as a module over `A ∝ A`.
    pub fn induced(&self) -> Result<Module> {
        let u = &self.carrier;
        let n = self.base().size();
        let size = u.size();
        let mut add = vec![0u16; size * size];
        for a in 0..size {
            for b in 0..size {
                add[a * size + b] = u.add(a, b) as u16;
            }
        }
        let mut act = vec![0u16; n * n * size];
        for a in 0..n {
            for b in 0..n {
                for x in 0..size {
                    let y = u.add(u.act(a, x), u.act(b, self.endo.apply(x)));
                    act[(a * n + b) * size + x] = y as u16;
                }
            }
        }
        from_table_trusted(&self.ext, size, add, act, None)
    }
}
