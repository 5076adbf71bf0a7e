//! Complete hyperbolic Coxeter orthoschemes and the cobweb manifolds built
//! from them: Gram matrices, metric data, volumes, the cobweb cell with its
//! face pairings, and manifold verification.

pub mod cell;
pub mod error;
pub mod gram;
pub mod isometry;
pub mod linalg;
pub mod manifold;
pub mod orthoscheme;
pub mod reconstruct;
pub mod relations;
pub mod scalar;
pub mod scheme;
pub mod snf;
pub mod svg;
pub mod volume;
pub mod verify;
pub mod word;

pub use cell::{CobwebCell, TilingReport};
pub use error::{Error, Result};
pub use gram::{classify, gram_pair, Geometry, GramPair, OrthoschemeClass, SchlafliTriple, Signature, VertexState};
pub use isometry::{Isometry, IsometryKind};
pub use linalg::{Mat4, Vec4};
pub use manifold::{edge_cycles, first_homology, presentation, vertex_classes, EdgeCycle, Presentation, PresentationForm};
pub use orthoscheme::{circumradius, inradius, realize, ProjectivePlane, ProjectivePoint, RadiusReport, TruncatedOrthoscheme};
pub use scalar::Real;
pub use scheme::{FacePairingScheme, SchemeTopology};
pub use verify::{verify_scheme, Tolerances, VerificationReport};
pub use snf::{smith_normal_form, AbelianGroup, Snf, SnfResult};
pub use volume::{ball_volume, densities, kellerhals_volume, lobachevsky, manifold_volume, VolumeReport};
pub use word::{GroupWord, Relation};

pub type Gram64 = GramPair<f64>;
pub type Gram32 = GramPair<f32>;
pub type Isometry64 = Isometry<f64>;
pub type Orthoscheme64 = TruncatedOrthoscheme<f64>;
pub type Cell64 = CobwebCell<f64>;
