//! Exact knot-concordance invariants and Casson–Gordon 4-genus certificates.

pub mod arith;
pub mod bigjson;
pub mod colored;
pub mod cover;
pub mod cyclotomic;
pub mod dataset;
pub mod error;
pub mod gilmer;
pub mod infection;
pub mod knot;
pub mod linalg;
pub mod poly;
pub mod selftest;

pub use error::{Error, Result};
