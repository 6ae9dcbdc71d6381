//! Exact computations over finite commutative rings: ideals, finitely
//! presented modules, Fitting invariants, brute-force periodicity oracles,
//! and ring-level classification predicates.

pub mod classify;
pub mod error;
pub mod fitting;
pub mod ideal;
pub mod module;
pub mod periodicity;
pub mod ring;
pub mod spec;
pub mod verify;

pub use error::{Error, Result};
pub use ideal::Ideal;
pub use module::{Matrix, Module, ModuleHom, PresentedModule};
pub use ring::{FiniteRing, Ring, RingHom};
