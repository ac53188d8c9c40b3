//! Structural stability, phase portraits and class counts for planar
//! (p,q)-quasihomogeneous polynomial vector fields.

pub mod counting;
pub mod decompose;
pub mod document;
pub mod error;
pub mod field;
pub mod geometry;
pub mod numerics;
pub mod plot;
pub mod poly;
pub mod report;
pub mod sequences;
pub mod stability;

pub use error::{Error, Result};
pub use field::{check_membership, compute_eta, is_radial, normalize_weights, validate, EtaData, QHField};
pub use poly::{BivarPoly, Rational, UnivarPoly, WeightSignature};
pub use stability::{classify, theta_membership, StabilityVerdict};
