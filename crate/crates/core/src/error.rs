use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported Lie type {0}")]
    UnsupportedType(String),
    #[error("weights belong to different Cartan data (rank {0} vs {1})")]
    MismatchedCartan(usize, usize),
    #[error("normal-form rewriting exceeded its step budget ({0} steps)")]
    NonTerminating(usize),
    #[error("element outside the implemented pairing domain: {0}")]
    OutOfSupportedDomain(String),
    #[error("weight {0} is not supported: {1}")]
    UnsupportedWeight(String, String),
    #[error("ad-orbit did not close within budget {0}")]
    ClosureBudgetExceeded(usize),
    #[error("degenerate pairing on tangent vector {0}")]
    DegeneratePairing(usize),
    #[error("no spin branching table for {0}")]
    BranchingTableMissing(String),
    #[error("no equivariant Clifford embedding exists")]
    NoEquivariantEmbedding,
    #[error("equivariant embedding is not unique (hom dimension {0})")]
    AmbiguousEmbedding(usize),
    #[error("cutoff {requested} too small, need at least {needed}")]
    CutoffTooSmall { requested: usize, needed: usize },
    #[error("operator leaves the Hom space for weight {0}")]
    WellDefinednessViolated(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}
