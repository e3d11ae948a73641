use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed fan: {0}")]
    MalformedFan(String),
    #[error("malformed morphism: {0}")]
    MalformedMorphism(String),
    #[error("multiplicity undefined: cone is not simplicial")]
    MultiplicityUndefined,
    #[error("vector {0:?} is not primitive")]
    NotPrimitive(Vec<i64>),
    #[error("vector {0:?} is not in the support of the fan")]
    NotInSupport(Vec<i64>),
    #[error("incompatible lattices: {0}")]
    IncompatibleLattices(String),
    #[error("malformed twists: {0}")]
    MalformedTwists(String),
    #[error("sequence not left-exact: rays do not span the lattice")]
    NotLeftExact,
    #[error("Jaczewski hypotheses violated: {0}")]
    JaczewskiHypotheses(String),
    #[error("surjectivity undecided: {0}")]
    SurjectivityUndecided(String),
    #[error("J undefined: {0}")]
    JUndefined(String),
    #[error("divisorial span check hypotheses unmet: {0}")]
    SpanCheckHypotheses(String),
    #[error("factorization unsupported: {0}")]
    FactorizationUnsupported(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("search too large: {0}")]
    SearchTooLarge(String),
    #[error("hypotheses violated: {}", .0.join("; "))]
    Hypotheses(Vec<String>),
    #[error("coordinate overflow")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
