//! Estimation of linear operators between separable Hilbert spaces from
//! paired functional observations, using truncated principal components of
//! the empirical covariance.
//!
//! Elements are represented by their coordinates in a fixed orthonormal basis
//! of dimension `d` ([`HilbertVec`]); operators are `d_out × d_in` matrices
//! ([`OperatorMat`]).

/// Serde through `Display`/`FromStr`.
macro_rules! string_serde {
    ($t:ty) => {
        impl serde::Serialize for $t {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> serde::Deserialize<'de> for $t {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

pub mod error;
pub mod estimator;
pub mod experiments;
pub mod hilbert;
pub mod io;
mod linalg;
pub mod par;
pub mod procgen;
pub mod spectral;

pub use error::{Error, Result};
pub use estimator::{fit, predict, FittedModel, ModelFile, TruncationRule};
pub use hilbert::{HilbertVec, OperatorMat};
pub use par::Execution;
pub use spectral::{EigenSystem, SampleView};
