//! Quasi-valuations induced by ring filtrations.
//!
//! A descending filtration `R = R_0 ⊇ R_1 ⊇ ...` of a ring by ideals defines
//! `ν(α) = min{ i : α ∈ R_i ∖ R_{i+1} }`. This crate computes `ν` exactly
//! over a handful of carrier rings ([`ring`]), builds and validates
//! filtrations ([`filtration`]), evaluates the valuation axioms on element
//! pairs ([`valuation`]) and audits named claims about `ν` by deterministic
//! counterexample search ([`audit`]).

pub mod audit;
pub mod exec;
pub mod filtration;
pub mod ideal;
pub mod pairs;
pub mod ring;
pub mod valuation;
pub mod value;

pub use exec::Execution;
pub use filtration::{Filtration, FiltrationSpec};
pub use ideal::{Ideal, IdealPowerCache, Primality};
pub use ring::{format_element, parse_element, Element, RingDescriptor, RingError, RingKind};
pub use valuation::nu;
pub use value::ExtValue;
