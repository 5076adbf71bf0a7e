use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Schläfli symbol ({u},{v},{w}): every branch order must be at least 3")]
    InvalidSymbol { u: u32, v: u32, w: u32 },

    #[error("not a cobweb symbol (2p,2p,2p) with p >= 3: ({u},{v},{w})")]
    NotCobwebSymbol { u: u32, v: u32, w: u32 },

    #[error("Coxeter matrix is singular (|det| = {det:e})")]
    SingularMatrix { det: f64 },

    #[error("orthoscheme ({u},{v},{w}) is not a complete (doubly truncated) hyperbolic orthoscheme")]
    NotCompleteTruncated { u: u32, v: u32, w: u32 },

    #[error("vertex A{0} is not a proper point; distance is not real")]
    OuterVertex(usize),

    #[error("point is not interior to the hyperbolic model")]
    NonInterior,

    #[error("plane does not meet the hyperbolic model")]
    DegeneratePlane,

    #[error("line span does not meet the hyperbolic model")]
    DegenerateLine,

    #[error("volume formula radicand is negative ({0:e}); angles are not hyperbolic")]
    InvalidAngles(f64),

    #[error("symbol has u != w, so the half-turn symmetry does not exist")]
    NoHalfTurnSymmetry,

    #[error("group closure exceeded {limit} elements")]
    ClosureOverflow { limit: usize },

    #[error("face planes {0} and {1} are nearly but not exactly coplanar")]
    MergeAmbiguity(usize, usize),

    #[error("no isometry maps face {from} onto face {to} with the given correspondence")]
    NoIsometry { from: usize, to: usize },

    #[error("pairing of face {from} onto face {to} reverses orientation")]
    OrientationReversing { from: usize, to: usize },

    #[error("generator `{0}` is not bound")]
    UnboundGenerator(String),

    #[error("word parse error: {0}")]
    WordParse(String),

    #[error("eigenvalue separation below tolerance; classification is ambiguous")]
    NumericallyAmbiguous,

    #[error("scheme schema error: {0}")]
    Schema(String),

    #[error("pairing mismatch: {0}")]
    PairingMismatch(String),

    #[error("scheme does not match the constructed cell: {0}")]
    GeometryMismatch(String),

    #[error("edge cycle starting at edge {0} does not close")]
    NonClosingCycle(usize),

    #[error("no face pairing found: {0}")]
    NoPairing(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
