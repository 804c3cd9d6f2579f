//! Fundamental groups of complements of quadric-line arrangements.
//!
//! The crate is organised in four layers:
//!
//! * [`algebra`]: free-group words, finite presentations, Tietze moves,
//!   abelianization and normal forms in `Z/2 * Z/3`.
//! * [`geometry`]: exact models of the arrangement families over
//!   `Q(sqrt d)` and the ordered schedule of singular fibers.
//! * [`sweep`]: the real van Kampen sweep producing presentations with
//!   meridian metadata, plus reference presentations and simplification
//!   scripts.
//! * [`verify`]: independent group-theoretic engines (coset enumeration,
//!   subgroup and homomorphism counting) and the verification suites.
//!
//! The [`cli`] module backs the `quadline` binary.

pub mod algebra;
pub mod cli;
pub mod geometry;
pub mod sweep;
pub mod verify;
