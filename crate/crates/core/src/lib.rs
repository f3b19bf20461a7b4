//! Finite multirings and hyperrings.
//!
//! A [`Multiring`] is stored as explicit tables over element indices
//! `0..n`, with a set-valued addition. On top of that the crate computes
//! prime and real spectra, quotients, localizations and Marshall quotients,
//! the real reduction `Q_T(A)`, von Neumann regular structure, the
//! structural presheaf, and the von Neumann hull `V(A)`.

pub mod budget;
pub mod builders;
pub mod constructions;
pub mod error;
pub mod hull;
pub mod morphism;
pub mod multiring;
pub mod presheaf;
pub mod realspec;
pub mod spectra;
pub mod subset;
pub mod vonneumann;

pub use budget::Budget;
pub use error::{Error, Result};
pub use morphism::Morphism;
pub use multiring::{Elem, Multiring, RawTables};
pub use subset::Subset;
