//! Strict and sloppy ellipsis resolution over typed lambda terms.
//!
//! Discourses are compiled into parallelism equations that are solved by
//! higher-order coloured unification ([`hocu`]). Equations that only hold up
//! to a logical relation are handed to a tableau prover ([`tableau`]).

pub mod colour;
pub mod error;
pub mod expect;
pub mod hocu;
pub mod parallelism;
pub mod subst;
pub mod syntax;
pub mod tableau;
pub mod term;
pub mod types;

pub use colour::{Colour, ColourStore};
pub use error::{Error, Result};
pub use subst::ColouredSubstitution;
pub use term::{Signature, Term};
pub use types::Ty;
