//! Finitely supported functions on `F_d`: the sparse group-ring
//! representation, the exact radial algebra and their JSON forms.

mod json;
mod radial;
mod sparse;

pub use json::{parse_function_json, FunctionDoc, LoadedFunction, RadialDoc, TermDoc};
pub use radial::{basis_shift, RadialFunction, RADIAL_TOLERANCE};
pub use sparse::{SparseFunction, STORAGE_EPSILON};

pub(crate) use sparse::same_group;

/// `to_radial`.
pub fn to_radial(f: &SparseFunction) -> crate::Result<RadialFunction> {
    RadialFunction::from_sparse(f)
}

/// `from_radial`.
pub fn from_radial(r: &RadialFunction) -> crate::Result<SparseFunction> {
    r.to_sparse()
}

/// Radial convolution `x ⊙ y`.
pub fn radial_convolve(x: &RadialFunction, y: &RadialFunction) -> crate::Result<RadialFunction> {
    x.convolve(y)
}
