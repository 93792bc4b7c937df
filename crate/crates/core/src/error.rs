//! Error types shared across the library.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("generator degree {found} does not match expected degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("group closure exceeded the element cap of {cap}")]
    ClosureExceedsCap { cap: usize },
    #[error("element is not a member of the group `{group}`")]
    NotAMember { group: String },
    #[error("`{0}` is not a subgroup: element outside the parent group")]
    NotSubgroup(String),
    #[error("not factorizable: {0}")]
    NotFactorizable(String),
    #[error("action axiom violated: {0}")]
    ActionAxiom(String),
    #[error("invalid cycle notation: {0}")]
    CycleParse(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("galois exponent {t} is not coprime to the conductor {m}")]
    GaloisNotCoprime { t: u64, m: u64 },
    #[error("conductor {small} does not divide {large}")]
    ConductorMismatch { small: u64, large: u64 },
    #[error("element does not lie in the cyclotomic field of conductor {0}")]
    NotInSubfield(u64),
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("order {m} is not coprime to the characteristic {p}")]
    OrderNotCoprime { m: u64, p: u64 },
    #[error("matrix is not of finite multiplicative order dividing {0}")]
    NotOfFiniteOrder(u64),
    #[error("value is not in the image of the lift: {0}")]
    NotARootOfUnity(u64),
    #[error("non-integral coefficient where an algebraic integer was required")]
    NotIntegral,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("no admissible character-table prime below the search bound for |G| = {0}")]
    NoTablePrime(usize),
    #[error("character table internal check failed: {0}")]
    TableCheck(String),
    #[error("module chop exceeded its retry budget (dim {0})")]
    ChopBudget(usize),
    #[error("modules are not both certified irreducible")]
    NotIrreducible,
    #[error("decomposition solve failed: {0}")]
    DecompositionSolve(String),
    #[error("hopf axiom `{axiom}` failed on {detail}")]
    HopfAxiom { axiom: String, detail: String },
    #[error("integral is not normalizable: characteristic {p} divides |F| = {order}")]
    IntegralNotNormalizable { p: u64, order: usize },
    #[error("invariant-form solution space has dimension {0}, expected 0 or 1")]
    FormSpaceDimension(usize),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}
