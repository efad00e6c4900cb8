use thiserror::Error;

use crate::poset::Label;

/// Errors raised by every layer of the crate.
///
/// The CLI reports [`Error::kind`] as the machine-readable error tag.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("label {0} is not a positive integer")]
    InvalidLabel(Label),
    #[error("label {0} occurs more than once")]
    DuplicateLabel(Label),
    #[error("label {0} is not an element of the poset")]
    UnknownLabel(Label),
    #[error("cover relation is cyclic (through element {0})")]
    CycleError(Label),
    #[error("natural labeling violated: {0} precedes {1} but {0} > {1}")]
    LabelingError(Label, Label),
    #[error("elements are not comparable")]
    NotComparable,
    #[error("{0} is not an upset")]
    NotAnUpset(String),
    #[error("label {0} occurs in both summands")]
    LabelClash(Label),
    #[error("component containing {0} is not an ordinal sum of a rooted forest and a ladder")]
    NotDecomposable(Label),

    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error("leaf-parent nodes lie at different depths ({0} at depth {1}, {2} at depth {3})")]
    UnequalDepth(String, usize, String, usize),
    #[error("inner node {0} has no inner children and no leaf poset")]
    MissingLeafPoset(String),
    #[error("leaf label {0} appears under more than one node")]
    DuplicateLeafLabel(Label),
    #[error("unknown inner node {0}")]
    UnknownNode(String),
    #[error("cannot parse state: {0}")]
    StateParse(String),

    #[error("position {0} out of range for a sequence of length {1}")]
    PositionOutOfRange(usize, usize),
    #[error("sequence is not a linear extension")]
    NotALinearExtension,
    #[error("ordered partition does not match the ground set")]
    GroundSetMismatch,
    #[error("invalid ordered set partition: {0}")]
    InvalidPartition(String),
    #[error("set {0} is not admissible")]
    InadmissibleSet(String),

    #[error("no weight given for x_{{{0}}}")]
    MissingWeight(String),
    #[error("weight for x_{{{0}}} is negative")]
    NegativeWeight(String),
    #[error("cannot parse rational {0:?}")]
    RationalParse(String),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix of dimension {0} exceeds the limit {1} for this operation")]
    TooLarge(usize, usize),
    #[error("pair ({0},{1}) cannot be broken in the poset at node {2}")]
    PairNotBreakable(Label, Label, String),

    #[error("leaf poset at node {0} is not a rooted forest")]
    NotAForest(String),
    #[error("eigenvalue {eigenvalue} violates the upset property for pair ({a},{b})")]
    UpsetPropertyViolation { eigenvalue: String, a: Label, b: Label },

    #[error("monoid exceeds the element cap {0}")]
    CapExceeded(usize),
    #[error("transformations act on sets of different sizes")]
    DegreeMismatch,
    #[error("maximal subgroup is not abelian")]
    NonAbelian,
    #[error("e_J x e_J lies outside the maximal subgroup for x_{{{0}}}")]
    CharacterDomainError(String),
    #[error("multiplicity {0} is not a nonnegative integer")]
    NonIntegerMultiplicity(String),
    #[error("character value {0} on x_{{{1}}} is not +1 or -1")]
    NonRealCharacter(String, String),

    #[error("spectrum has total multiplicity {0}, expected {1}")]
    DimensionMismatch(u64, usize),
    #[error("matrix is not row-stochastic")]
    NotStochastic,
    #[error("chain has no unique stationary distribution")]
    Reducible,

    #[error("invalid instance: {0}")]
    Instance(String),
}

impl Error {
    /// Stable tag naming the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidLabel(_) => "InvalidLabel",
            Error::DuplicateLabel(_) => "DuplicateLabel",
            Error::UnknownLabel(_) => "UnknownLabel",
            Error::CycleError(_) => "CycleError",
            Error::LabelingError(..) => "LabelingError",
            Error::NotComparable => "NotComparable",
            Error::NotAnUpset(_) => "NotAnUpset",
            Error::LabelClash(_) => "LabelClash",
            Error::NotDecomposable(_) => "NotDecomposable",
            Error::MalformedTree(_) => "MalformedTree",
            Error::UnequalDepth(..) => "UnequalDepth",
            Error::MissingLeafPoset(_) => "MissingLeafPoset",
            Error::DuplicateLeafLabel(_) => "DuplicateLeafLabel",
            Error::UnknownNode(_) => "UnknownNode",
            Error::StateParse(_) => "StateParse",
            Error::PositionOutOfRange(..) => "PositionOutOfRange",
            Error::NotALinearExtension => "NotALinearExtension",
            Error::GroundSetMismatch => "GroundSetMismatch",
            Error::InvalidPartition(_) => "InvalidPartition",
            Error::InadmissibleSet(_) => "InadmissibleSet",
            Error::MissingWeight(_) => "MissingWeight",
            Error::NegativeWeight(_) => "NegativeWeight",
            Error::RationalParse(_) => "RationalParse",
            Error::NotSquare(..) => "NotSquare",
            Error::TooLarge(..) => "TooLarge",
            Error::PairNotBreakable(..) => "PairNotBreakable",
            Error::NotAForest(_) => "NotAForest",
            Error::UpsetPropertyViolation { .. } => "UpsetPropertyViolation",
            Error::CapExceeded(_) => "CapExceeded",
            Error::DegreeMismatch => "DegreeMismatch",
            Error::NonAbelian => "NonAbelian",
            Error::CharacterDomainError(_) => "CharacterDomainError",
            Error::NonIntegerMultiplicity(_) => "NonIntegerMultiplicity",
            Error::NonRealCharacter(..) => "NonRealCharacter",
            Error::DimensionMismatch(..) => "DimensionMismatch",
            Error::NotStochastic => "NotStochastic",
            Error::Reducible => "Reducible",
            Error::Instance(_) => "Instance",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
