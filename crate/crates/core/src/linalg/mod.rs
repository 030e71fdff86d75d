//! Exact integer linear algebra.

mod det;
mod kernel;
mod matrix;
mod snf;

pub use det::det_linear_pencil;
pub use kernel::{kernel_mod_q, satisfies, KernelGenerator, ModKernel, DEFAULT_ENUMERATION_CAP};
pub use matrix::{is_unit, IntMatrix};
pub use snf::{invariant_factors, smith_normal_form, SnfResult};
