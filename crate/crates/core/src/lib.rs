//! orelab-core: a laboratory for skew polynomial rings `R[x; s, d]` over
//! small coefficient rings.
//!
//! Given a ring `R`, an endomorphism `s`, and an `s`-derivation `d`, the
//! skew polynomial ring multiplies by the rule `x a = s(a) x + d(a)`. This
//! crate provides:
//!
//! * validated construction of finite (table-backed) and structured-infinite
//!   coefficient rings, endomorphisms, and twisted derivations ([`ring`],
//!   [`morphism`], [`derivation`], [`spec`]);
//! * skew polynomial arithmetic with two independent multiplication routes
//!   that are cross-checked in tests ([`ore`]);
//! * deciders for zero-divisor symmetry conditions, compatibility and
//!   rigidity, bounded Armendariz-type conditions, annihilator lattices, and
//!   the Baer-type chain, each returning a replayable verdict ([`deciders`],
//!   [`verdict`]);
//! * a generated corpus of instances plus bundled example fixtures
//!   ([`corpus`]);
//! * a harness that replays the fixture expectations and a catalogue of
//!   theorem checks over the corpus ([`harness`]).

pub mod corpus;
pub mod deciders;
pub mod derivation;
pub mod elem;
pub mod error;
pub mod harness;
pub mod morphism;
pub mod ore;
pub mod ring;
pub mod spec;
pub mod verdict;

pub use elem::Elem;
pub use error::{BuildError, DecideError};
pub use ring::RingInstance;
