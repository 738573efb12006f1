//! Log-determinant processes of the beta Laguerre, uniform Gram and Jacobi
//! ensembles.
//!
//! The crate is `no_std` (with `alloc`). Randomness is injected through
//! [`sampler::RngStream`]; everything else is a pure function of its inputs.

#![no_std]
// `num_traits::Float` supplies f64 math without std; once std is in the
// crate graph the inherent methods shadow it, hence the per-module allows.
#![cfg_attr(test, allow(unused_imports))]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod entropy;
pub mod error;
pub mod ldp;
pub mod moments;
pub mod params;
pub mod quad;
pub mod sampler;
pub mod specfun;
pub mod spectral;
pub mod stats;

pub use error::{Error, Result};
pub use params::{EnsembleKind, EnsembleParams};

/// Serde helper for extended reals: ±∞ and NaN travel as the strings
/// "inf", "-inf" and "nan"; finite values stay numbers.
#[cfg(feature = "serde")]
pub mod ext_real {
    use serde::{de, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    struct V;

    impl de::Visitor<'_> for V {
        type Value = f64;
        fn expecting(&self, f: &mut core::fmt::Formatter) -> core::fmt::Result {
            f.write_str("a number or one of \"inf\", \"-inf\", \"nan\"")
        }
        fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
            Ok(v)
        }
        fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
            Ok(v as f64)
        }
        fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
            Ok(v as f64)
        }
        fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
            match v {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
            }
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        d.deserialize_any(V)
    }
}
