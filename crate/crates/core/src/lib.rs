//! Exact truncated arithmetic for generalized Witt vectors `W(O_L)_E`,
//! extended Robba rings, their Gauss-type seminorms and the classification
//! of points of the associated Berkovich and adic spectra, together with the
//! graded-lexicographic reduction machinery on weighted Tate algebras.
//!
//! The coefficient field `L` is modelled at desk scale by the completed
//! perfection of `F_{q^m}((t))`: elements are finite sums `sum c_e t^e` with
//! exponents in `Z[1/p]` and an explicit precision cutoff.

pub mod coeff;
pub mod error;
pub mod ffield;
pub mod rational;
pub mod robba;
pub mod tate;
pub mod valuations;
pub mod witt;

pub use coeff::{CoeffElem, Field, FieldConfig, NormExp};
pub use error::{Error, Result};
pub use ffield::{Fe, FiniteField};
pub use rational::Q;
pub use robba::{IntervalExp, RobbaElem, RobbaKind};
pub use valuations::{
    classify, covering_check, disc_relation, eval_beta5, eval_h, eval_h_with, factor_linear, persistence_interval,
    radius_retract, rational_subset_member, same_point, stable_presentation, stable_presentation_with, stable_reduce,
    stable_reduce_with, Beta5Value, CoveringReport, DiscRelation, Factorization, GammaValue, PointDescriptor,
    PointType, Radius, RationalSubset, ReduceStrategy, Sign, StablePresentation,
};
pub use witt::{Backend, Ring, RingConfig, WittElem};
