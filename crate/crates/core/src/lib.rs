//! Exact-arithmetic library for vector-valued modular functions built from
//! families of modular functions, Borcherds-type infinite product
//! identities, equivariant Hecke-monicity checks, and the Cartan data of the
//! generalized Kac-Moody algebras whose denominator formulas these products
//! are, including twisted denominator identities for cyclic group actions.

pub mod error;
pub mod series_core;

pub mod catalog;
pub mod gkm;
pub mod lattice_theta;
pub mod modforms;
pub mod products;
pub mod report;
pub mod vvmf;

pub use error::{Error, Result};
