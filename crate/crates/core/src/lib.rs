//! Finite partial semigroups and the combinatorics of largeness in them.
//!
//! The crate works with finite, enumerable partial semigroups (explicit
//! tables, finite-set unions, located words, products and identity
//! adjunctions) and offers:
//!
//! * [`psg`]: instances, the partial operation, `φ`/`σ`, adequacy defects;
//! * [`sequences`]: finite prefixes whose finite products are all defined;
//! * [`largeness`]: bounded checkers for thick, syndetic, piecewise syndetic,
//!   č-piecewise syndetic, `IP_r` and `IP_r*` sets;
//! * [`jcr`]: J/CR/k-CR witnesses, their search, and witness constructions;
//! * [`ramsey`]: finite-unions Ramsey numbers and coloring transfer;
//! * [`counterexample`]: the ordered-union instance that is not 1-CR;
//! * [`product`]: witness assembly for Cartesian products.
//!
//! Every statement about an infinite object is realized on a finite
//! truncation with explicit bounds, and every result carries those bounds.

pub mod bits;
pub mod counterexample;
pub mod jcr;
pub mod largeness;
pub mod literal;
pub mod outcome;
pub mod product;
pub mod psg;
pub mod ramsey;
pub mod sequences;
pub mod set;

pub use outcome::{Bounds, Proof, SearchOutcome};
pub use psg::{ElemId, Element, Family, PsgError, PsgInstance};
pub use sequences::SeqPrefix;
pub use set::ElemSet;
