use thiserror::Error;

/// Errors raised by constructors and operations when a precondition fails.
///
/// Failed *verifications* (a tube that is not a G-homeomorphism, a pullback
/// square that does not commute) are reported as values in the corresponding
/// report types, not through this enum.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("not a topology: {0}")]
    NotATopology(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("group axiom violated: {0}")]
    GroupAxiom(GroupAxiomViolation),

    #[error("group of order {0} exceeds the supported maximum of 64")]
    GroupTooLarge(usize),

    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("subgroup is not normal: conjugating {element} by {by} leaves it")]
    NotNormal { element: usize, by: usize },

    #[error("family of subgroups is empty")]
    EmptyFamily,

    #[error("family members {first} and {second} are conjugate (by element {conjugator})")]
    ConjugateFamily {
        first: usize,
        second: usize,
        conjugator: usize,
    },

    #[error("{what} budget exceeded: limit {limit}, reached {reached}")]
    BudgetExceeded {
        what: &'static str,
        limit: u64,
        reached: u64,
    },

    #[error("group mismatch between domain and codomain")]
    GroupMismatch,

    #[error("filtration index preorders differ")]
    PreorderMismatch,

    #[error("isotropy group of point {point} is not conjugate to any member of the family")]
    IsotropyNotInFamily { point: usize },

    #[error("invalid G-action: {0}")]
    InvalidAction(String),

    #[error("map is not continuous: {lo} <= {hi} but images are incomparable")]
    NotContinuous { lo: usize, hi: usize },

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("invalid tube cover: {0}")]
    InvalidCover(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("invalid cell complex: {0}")]
    InvalidComplex(String),

    #[error("bundles live over different bases or groups")]
    BaseMismatch,

    #[error("invalid bundle: {0}")]
    InvalidBundle(String),

    #[error("not a partition of unity: {0}")]
    PartitionOfUnity(String),

    #[error("invalid piecewise-linear function: {0}")]
    InvalidPl(String),

    #[error("cone level {0} lies outside [0,1]")]
    ConeLevel(String),

    #[error("distance denominator vanishes")]
    DegenerateDistance,

    #[error("parse error: {0}")]
    Parse(String),
}

/// Witness for a failed group axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupAxiomViolation {
    NotSquare,
    EntryOutOfRange { row: usize, col: usize, value: usize },
    NoIdentity,
    NoInverse { element: usize },
    NotAssociative { a: usize, b: usize, c: usize },
}

impl std::fmt::Display for GroupAxiomViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::NotSquare => write!(f, "table is not square"),
            Self::EntryOutOfRange { row, col, value } => {
                write!(f, "entry ({row},{col}) = {value} out of range")
            }
            Self::NoIdentity => write!(f, "no two-sided identity"),
            Self::NoInverse { element } => write!(f, "element {element} has no inverse"),
            Self::NotAssociative { a, b, c } => {
                write!(f, "(a*b)*c != a*(b*c) for (a,b,c) = ({a},{b},{c})")
            }
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
