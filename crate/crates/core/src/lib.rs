//! Products of random variables under the conditional extreme value model.
//!
//! The crate is organised bottom-up:
//!
//! - [`evt`]: GEV distribution, left-continuous inverses, domain-of-attraction
//!   scalings and the `psi` limit forms of the centering/scaling functions.
//! - [`classify`]: maps the indices `(rho, gamma)` and the endpoints of `X`
//!   and `Y` to the product case (I, II(a)-(d), III, IV) and its predicted
//!   regularly varying pivot.
//! - [`transforms`]: endpoint reciprocal transforms and the per-case
//!   reduction of a model to zero-centred coordinates.
//! - [`limits`]: closed-form and quadrature limit constants, spectral measures.
//! - [`zoo`]: reproducible samplers for every supported case.
//! - [`estimators`]: Hill, scaled tails, conditional distributions and the
//!   asymptotic independence / degeneracy diagnostics.

// `!(x > 0.0)` rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod dist;
pub mod error;
pub mod estimators;
pub mod evt;
pub mod limits;
pub mod quadrature;
pub mod region;
pub mod rng;
pub mod transforms;
pub mod zoo;

pub use classify::{
    classify, hypotheses_report, product_prediction, CaseId, Hypothesis, HypothesisStatus,
    ModelParams, Pivot, ProductLaw, ScalingCombo, UnsupportedReason,
};
pub use dist::BoundedDist;
pub use error::{CevmError, Result};
pub use estimators::{ScaledTailEstimate, TailEstimate};
pub use evt::{GevShape, PsiPair, RvIndex, ScalingFunction, Survival};
pub use limits::SpectralMeasure;
pub use region::Rect;
pub use transforms::{ReducedPair, Reduction};
pub use zoo::{CevmModel, ModelSpec, MomentDiagnosis};
