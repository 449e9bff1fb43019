use thiserror::Error;

/// Every failure the library can report. Variant names are part of the
/// public contract: the CLI prints them verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("InvalidCharge: {0}")]
    InvalidCharge(String),
    #[error("OutsideCone: {0}")]
    OutsideCone(String),
    #[error("VanishingCentralCharge: charge {0}")]
    VanishingCentralCharge(String),
    #[error("OnWall: {0}")]
    OnWall(String),
    #[error("InvalidMonodromy: {0}")]
    InvalidMonodromy(String),
    #[error("InvalidTwistorParameter: xi must be nonzero")]
    InvalidTwistorParameter,
    #[error("ContextMismatch: {0}")]
    ContextMismatch(String),
    #[error("NotInvertible: {0}")]
    NotInvertible(String),
    #[error("NotSmall: {0}")]
    NotSmall(String),
    #[error("NotUnit: {0}")]
    NotUnit(String),
    #[error("NegativeGrade: {0}")]
    NegativeGrade(String),
    #[error("PhaseTie: {0}")]
    PhaseTie(String),
    #[error("NonIntegralBPS: {0}")]
    NonIntegralBPS(String),
    #[error("NotFactorizable: {0}")]
    NotFactorizable(String),
    #[error("InvalidElement: {0}")]
    InvalidElement(String),
    #[error("LoopThroughSingularity: {0}")]
    LoopThroughSingularity(String),
    #[error("NonconvergentOrder: {0}")]
    NonconvergentOrder(String),
    #[error("RankMismatch: {0}")]
    RankMismatch(String),
    #[error("FrozenIndex: {0}")]
    FrozenIndex(usize),
    #[error("PairingMismatch: {0}")]
    PairingMismatch(String),
    #[error("ZeroDenominator: {0}")]
    ZeroDenominator(String),
    #[error("InconsistentPairings: {0}")]
    InconsistentPairings(String),
    #[error("OrderTooLow: {0}")]
    OrderTooLow(String),
    #[error("InconsistentStructure: {0}")]
    InconsistentStructure(String),
    #[error("RenamingNotBijective: {0}")]
    RenamingNotBijective(String),
    #[error("InvariantViolation({invariant}): {detail}")]
    InvariantViolation { invariant: String, detail: String },
}

impl Error {
    /// The bare variant name, e.g. `"PhaseTie"`.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidCharge(_) => "InvalidCharge",
            Error::OutsideCone(_) => "OutsideCone",
            Error::VanishingCentralCharge(_) => "VanishingCentralCharge",
            Error::OnWall(_) => "OnWall",
            Error::InvalidMonodromy(_) => "InvalidMonodromy",
            Error::InvalidTwistorParameter => "InvalidTwistorParameter",
            Error::ContextMismatch(_) => "ContextMismatch",
            Error::NotInvertible(_) => "NotInvertible",
            Error::NotSmall(_) => "NotSmall",
            Error::NotUnit(_) => "NotUnit",
            Error::NegativeGrade(_) => "NegativeGrade",
            Error::PhaseTie(_) => "PhaseTie",
            Error::NonIntegralBPS(_) => "NonIntegralBPS",
            Error::NotFactorizable(_) => "NotFactorizable",
            Error::InvalidElement(_) => "InvalidElement",
            Error::LoopThroughSingularity(_) => "LoopThroughSingularity",
            Error::NonconvergentOrder(_) => "NonconvergentOrder",
            Error::RankMismatch(_) => "RankMismatch",
            Error::FrozenIndex(_) => "FrozenIndex",
            Error::PairingMismatch(_) => "PairingMismatch",
            Error::ZeroDenominator(_) => "ZeroDenominator",
            Error::InconsistentPairings(_) => "InconsistentPairings",
            Error::OrderTooLow(_) => "OrderTooLow",
            Error::InconsistentStructure(_) => "InconsistentStructure",
            Error::RenamingNotBijective(_) => "RenamingNotBijective",
            Error::InvariantViolation { .. } => "InvariantViolation",
        }
    }
}

pub(crate) fn invariant(name: &str, detail: impl Into<String>) -> Error {
    Error::InvariantViolation {
        invariant: name.to_string(),
        detail: detail.into(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
