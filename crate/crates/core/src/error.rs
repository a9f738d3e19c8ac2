use thiserror::Error;

/// Errors raised by space construction, the measure algebra and morphisms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("DuplicatePoint: point `{0}` listed more than once")]
    DuplicatePoint(String),
    #[error("PartitionGap: point `{0}` is not covered by any atom")]
    PartitionGap(String),
    #[error("PartitionOverlap: point `{0}` lies in more than one atom")]
    PartitionOverlap(String),
    #[error("EmptyAtom: atom {0} has no points")]
    EmptyAtom(usize),
    #[error("NegativeWeight: atom {atom} has weight {weight}")]
    NegativeWeight { atom: usize, weight: String },
    #[error("ArityMismatch: expected {expected} {what}, found {found}")]
    ArityMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("UnknownPoint: `{0}`")]
    UnknownPoint(String),
    #[error("UnknownAtom: index {0}")]
    UnknownAtom(usize),
    #[error("SplitsAtom: point set splits atom {0}")]
    SplitsAtom(usize),
    #[error("IncompleteMap: point `{0}` has no image")]
    IncompleteMap(String),
    #[error("ForeignSet: set belongs to a different space")]
    ForeignSet,
    #[error("ForeignElement: element belongs to a different algebra")]
    ForeignElement,
    #[error("ForeignFunction: function lives on a different space")]
    ForeignFunction,
    #[error("NotInFinIdeal: element has infinite measure")]
    NotInFinIdeal,
    #[error("NotMeasurable: source atom {source_atom} is split across target atoms {target_atoms:?}")]
    NotMeasurable {
        source_atom: usize,
        target_atoms: Vec<usize>,
    },
    #[error("NotInverseNilPreserving: target atom {target_atom} is null but receives positive mass")]
    NotInverseNilPreserving { target_atom: usize },
    #[error("BudgetExceeded: {atoms} non-null target atoms exceed the enumeration budget {budget}")]
    BudgetExceeded { atoms: usize, budget: usize },
    #[error("SpaceMismatch: target of the first map differs from source of the second")]
    SpaceMismatch,
    #[error("NonPositiveFactor: rescaling factor {0} is not positive")]
    NonPositiveFactor(String),
    #[error("InvalidMetric: {0}")]
    InvalidMetric(String),
    #[error("ZeroDenominator: ratio with zero denominator")]
    ZeroDenominator,
    #[error("IndeterminateRatio: inf / inf")]
    IndeterminateRatio,
    #[error("InvalidNumber: `{0}`")]
    InvalidNumber(String),
}

impl Error {
    /// Stable variant name used in CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DuplicatePoint(_) => "DuplicatePoint",
            Error::PartitionGap(_) => "PartitionGap",
            Error::PartitionOverlap(_) => "PartitionOverlap",
            Error::EmptyAtom(_) => "EmptyAtom",
            Error::NegativeWeight { .. } => "NegativeWeight",
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::UnknownPoint(_) => "UnknownPoint",
            Error::UnknownAtom(_) => "UnknownAtom",
            Error::SplitsAtom(_) => "SplitsAtom",
            Error::IncompleteMap(_) => "IncompleteMap",
            Error::ForeignSet => "ForeignSet",
            Error::ForeignElement => "ForeignElement",
            Error::ForeignFunction => "ForeignFunction",
            Error::NotInFinIdeal => "NotInFinIdeal",
            Error::NotMeasurable { .. } => "NotMeasurable",
            Error::NotInverseNilPreserving { .. } => "NotInverseNilPreserving",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::SpaceMismatch => "SpaceMismatch",
            Error::NonPositiveFactor(_) => "NonPositiveFactor",
            Error::InvalidMetric(_) => "InvalidMetric",
            Error::ZeroDenominator => "ZeroDenominator",
            Error::IndeterminateRatio => "IndeterminateRatio",
            Error::InvalidNumber(_) => "InvalidNumber",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
