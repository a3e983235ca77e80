//! Exact-arithmetic existence decisions for harmonic metrics compatible
//! with the canonical symmetric pairing on rank-3 Hitchin-section Higgs
//! bundles over the affine and punctured lines, in the one- and two-sheeted
//! spectral cases.
//!
//! Everything is symbolic: coefficients live in Q(i, 2^(1/3)), differential
//! coefficients are sparse Laurent polynomials, parabolic weights are
//! rationals, and every supporting identity (Jordan frame, pairing values,
//! isotropic frame, degree formulas, explicit punctured-line constructions)
//! is verified exactly rather than numerically.

pub mod error;
pub mod field;
pub mod filtered;
pub mod laurent;
pub mod parse;
pub mod report;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use field::{FieldElem, GaussianRational, Rational};
pub use filtered::{
    check_good, check_perfect, check_stable, decide_feasible, degrees, full_verdict,
    verify_special_construction, Existence, FeasibleRegion, FilteredSpec, ParabolicDegrees,
    PunctureSpec, PunctureWeights, Reason, Route, Verdict, WeightAssignment,
};
pub use laurent::{LaurentPoly, RatFunc};
pub use parse::parse_coeff;
pub use report::{run_job, selfcheck, JobDocument, JobOptions, JobSpec, Report};
pub use spectral::{
    build_theta_matrix, classify, discriminant, ord_omega_at_puncture, orthogonalize, pairing,
    sections_frame, verify_jordan_frame, FrameVector, HiggsInput, HiggsPayload, PuncturePoint,
    SpectralClassification, SurfaceKind,
};
pub use verify::{IdentityCheck, VerificationLog};
