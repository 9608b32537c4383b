use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("surds over different radicands ({0} and {1}) cannot be combined exactly")]
    MixedRadicands(u64, u64),

    #[error("Möbius denominator vanishes on the input")]
    PoleInInterval,

    #[error("division by zero")]
    DivisionByZero,

    #[error("precision exhausted: the enclosure is too wide to decide the next step")]
    PrecisionExhausted,

    #[error("digit source exhausted after {0} digits")]
    SourceExhausted(usize),

    #[error("input is rational; an irrational tail is required")]
    RationalInput,

    #[error("input must lie strictly inside (0, 1)")]
    OutOfDomain,

    #[error("membership undecided after refinement budget was spent")]
    UndecidableAtBudget,

    #[error("orbit did not enter the region within {0} steps")]
    NeverHitsWithinCap(usize),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("generalised convergent has zero denominator at index {0}")]
    DivergentConvergent(usize),

    #[error("region has zero measure")]
    ZeroMeasureRegion,

    #[error("point is not inside the region")]
    NotInRegion,

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
