//! Error types shared across the crate.

use thiserror::Error;

/// Construction-time failures: malformed specs, axiom violations, maps that
/// are not homomorphisms or derivations.
#[derive(Debug, Error)]
pub enum BuildError {
    #[error("ring axiom violated: {law} (witness {witness})")]
    AxiomViolation { law: String, witness: String },

    #[error("unsupported construction spec: {0}")]
    UnsupportedSpec(String),

    #[error("carrier order {order} exceeds cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },

    #[error("not an additive map: {witness}")]
    NotAdditive { witness: String },

    #[error("not multiplicative: {witness}")]
    NotMultiplicative { witness: String },

    #[error("Leibniz law fails: {witness}")]
    NotADerivation { witness: String },

    #[error("cannot parse {text:?} as an element of {ring}")]
    BadElement { ring: String, text: String },

    #[error("spec does not apply to ring {ring}: {reason}")]
    SpecMismatch { ring: String, reason: String },

    #[error("malformed document: {0}")]
    BadDocument(String),

    #[error("no fixture named {0:?}")]
    UnknownFixture(String),
}

/// Decision-time failures.
#[derive(Debug, Error)]
pub enum DecideError {
    #[error("ring {ring} has a structured-infinite carrier and cannot be enumerated")]
    NotEnumerable { ring: String },

    #[error("search space of {space} items exceeds the work cap {cap} and sampling is disabled")]
    BoundTooLarge { space: u128, cap: u64 },

    #[error("annihilator lattice exceeded {cap} distinct sets before reaching a fixpoint")]
    LatticeCapExceeded { cap: usize },

    #[error("polynomial operands belong to different contexts")]
    ContextMismatch,

    #[error("property {property} does not apply here: {reason}")]
    NotApplicable { property: String, reason: String },

    #[error("malformed witness for {property}: {reason}")]
    BadWitness { property: String, reason: String },

    #[error(transparent)]
    Build(#[from] BuildError),
}
