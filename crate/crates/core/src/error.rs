use thiserror::Error;

/// Errors produced by the geometric layer, the piercing algorithms and the
/// instance I/O.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("bodies of different kinds cannot be compared: {0} vs {1}")]
    MixedKinds(&'static str, &'static str),
    #[error("affine map is singular")]
    SingularMap,
    #[error("disks are only closed under similarity maps with rational scale")]
    DisksNotClosedUnderAffine,
    #[error("axis boxes are only closed under diagonal maps")]
    BoxesNotClosedUnderAffine,
    #[error("polygon is not centrally symmetric")]
    NotCentrallySymmetric,
    #[error("expected a convex hexagon with six distinct vertices, got {0} vertices")]
    NotHexagon(usize),
    #[error("family base is not a centrally symmetric hexagon")]
    NotHexagonBase,
    #[error("sandwich search failed: {0}")]
    SearchFailed(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("unsupported base body for {method}: {base}")]
    UnsupportedBase { method: &'static str, base: String },
    #[error("lattice covering could not be verified")]
    CoverageNotVerified,
    #[error("lattice packing could not be verified")]
    PackingNotVerified,
    #[error("instance too large: {n} members, limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("epsilon {0} too large: shifted triangles no longer pairwise intersect")]
    EpsilonTooLarge(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("sign undecided after {0} bits of refinement")]
    PrecisionExhausted(u32),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
