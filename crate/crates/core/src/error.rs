use thiserror::Error;

use crate::cluster::PointId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cluster has no points")]
    EmptyCluster,
    #[error("point {point} is proximate to {count} points, expected 1 or 2")]
    PointProximateToZeroOrThreePlus { point: PointId, count: usize },
    #[error("point {point} is proximate to {target}, which is not an earlier point")]
    ProximityToLaterPoint { point: PointId, target: PointId },
    #[error("point {point} lists proximity to {target} more than once")]
    DuplicateProximity { point: PointId, target: PointId },
    #[error("exceptional divisor is disconnected: E_{point} meets no earlier component")]
    DisconnectedCluster { point: PointId },
    #[error("satellite point {point}: E_{first} and E_{second} do not meet when it is blown up")]
    GeometricallyInfeasibleSatellite {
        point: PointId,
        first: PointId,
        second: PointId,
    },
    #[error("invalid coordinate for point {point}: {reason}")]
    InvalidCoordinate { point: PointId, reason: String },
    #[error("vector of length {found} does not match a cluster of {expected} points")]
    LengthMismatch { expected: usize, found: usize },
    #[error("point {0} is not in the cluster")]
    UnknownPoint(PointId),
    #[error("unloading did not reach an antinef divisor within {0} rounds")]
    IterationBudgetExceeded(usize),
    #[error("divisor is not antinef")]
    NotAntinef,
    #[error("inconsistent multiplicity sequence: {0}")]
    InconsistentSequence(String),
    #[error("B_O is the maximal ideal and has no adjacent divisor")]
    IsMaximalIdeal,
    #[error("no admissible maximal contact element for B_{point}: {reason}")]
    NoAdmissibleElement { point: PointId, reason: String },
    #[error("generator {0} is not a member of the ideal being pruned")]
    PreconditionViolated(String),
    #[error("no explicit polynomial attached to {0}")]
    MissingPolynomial(String),
    #[error("curvette at {point}: expected multiplicities {expected:?}, oracle found {found:?}")]
    OracleMismatch {
        point: PointId,
        expected: Vec<i64>,
        found: Vec<i64>,
    },
    #[error("free point {0} has no coordinate")]
    CoordinateMissing(PointId),
    #[error("polynomials share a common component through the origin")]
    CommonComponent,
    #[error("common tangent directions are not rational")]
    IrrationalTangent,
    #[error("polynomial exceeds {limit} terms")]
    TooManyTerms { limit: usize },
    #[error("the zero polynomial has no multiplicities")]
    ZeroPolynomial,
    #[error("filtration index {index} exceeds B_q^2 = {bound}")]
    IndexBeyondDomination { index: i64, bound: i64 },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable variant name, printed by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::EmptyCluster => "EmptyCluster",
            Error::PointProximateToZeroOrThreePlus { .. } => "PointProximateToZeroOrThreePlus",
            Error::ProximityToLaterPoint { .. } => "ProximityToLaterPoint",
            Error::DuplicateProximity { .. } => "DuplicateProximity",
            Error::DisconnectedCluster { .. } => "DisconnectedCluster",
            Error::GeometricallyInfeasibleSatellite { .. } => "GeometricallyInfeasibleSatellite",
            Error::InvalidCoordinate { .. } => "InvalidCoordinate",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::UnknownPoint(_) => "UnknownPoint",
            Error::IterationBudgetExceeded(_) => "IterationBudgetExceeded",
            Error::NotAntinef => "NotAntinef",
            Error::InconsistentSequence(_) => "InconsistentSequence",
            Error::IsMaximalIdeal => "IsMaximalIdeal",
            Error::NoAdmissibleElement { .. } => "NoAdmissibleElement",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::MissingPolynomial(_) => "MissingPolynomial",
            Error::OracleMismatch { .. } => "OracleMismatch",
            Error::CoordinateMissing(_) => "CoordinateMissing",
            Error::CommonComponent => "CommonComponent",
            Error::IrrationalTangent => "IrrationalTangent",
            Error::TooManyTerms { .. } => "TooManyTerms",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::IndexBeyondDomination { .. } => "IndexBeyondDomination",
            Error::Parse(_) => "Parse",
        }
    }
}
