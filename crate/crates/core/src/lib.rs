//! Superposition channels for qubit states.
//!
//! A superposition channel is a trace-nonincreasing completely positive map
//! that sends a product input `|psi><psi| (x) |phi0><phi0|` to a state
//! proportional to `|Psi><Psi|` with `|Psi> = alpha|psi> + beta e^{i theta}|phi0>`,
//! for fixed nonzero weights with `|alpha|^2 + |beta|^2 = 1`. Postselection is
//! allowed, so the output is obtained with probability equal to the squared
//! norm of the Kraus image.
//!
//! The crate provides:
//!
//! * [`linalg`] — dense complex vectors/matrices for dimensions 2..4,
//!   Hermitian eigensolves and numeric rank.
//! * [`bloch`] — qubit states, Bloch-sphere geometry, circles on the sphere,
//!   and seeded area-uniform sampling.
//! * [`superposition`] — Kraus operators, CP maps, and the phase/scale fit
//!   that decides whether an output is a valid superposition.
//! * [`extract`] — recovering the circle of superposable states from a
//!   channel, plus grid scans and plane fitting as numerical witnesses.
//! * [`synthesize`] — building the explicit channel that superposes every
//!   state on a given circle with `|0>`.
//! * [`qudit`] — the three-state linear-dependence analysis in a qutrit
//!   subspace and its violation circle.
//! * [`measure`] — Monte Carlo area-measure estimation on the sphere.

pub mod bloch;
pub mod error;
pub mod extract;
pub mod linalg;
pub mod measure;
pub mod qudit;
pub mod superposition;
pub mod synthesize;

pub use bloch::{sample_sphere, BlochPoint, PureQubit, SphereCircle};
pub use error::{Error, Result};
pub use extract::{extract_circle, fit_plane, scan_superposable, ExtractionTrace};
pub use linalg::{c64, kron, numeric_rank, CMatrix, CVector, Complex64};
pub use measure::{band_fraction, superposable_fraction, FractionEstimate};
pub use qudit::{
    dependence_matrix, is_dependent, violation_circle, violation_fraction, QuditProtocol,
};
pub use superposition::{
    apply_kraus, fit_phase, is_superposable, residual_h, target_vector, CPMap, FitReport,
    KrausOperator, SuperpositionSpec,
};
pub use synthesize::{
    alternate_channel_example, synthesize_channel, ChannelJson, SuperpositionChannel,
};

/// Default absolute tolerance for equality and rank decisions. All quantities
/// in this crate are O(1), so double precision leaves ample headroom.
pub const DEFAULT_TOL: f64 = 1e-9;
