//! Computational harmonic analysis on the free group `F_d`.
//!
//! The crate is organised bottom-up:
//!
//! - [`words`]: reduced words, sphere enumeration, conjugacy classes.
//! - [`funcspace`]: finitely supported functions, convolution, `ℓq` norms and
//!   the exact radial algebra spanned by the sphere indicators `χ_k`.
//! - [`estimator`]: convolution-power norm estimates and checkers for the
//!   sphere convolution inequality and the `(k+1)|f|_q` operator bound.
//! - [`posdef`]: Gram-matrix positivity tests, the summability conditions
//!   that characterise `ℓp`-extendable positive definite functions, the
//!   `(2d-1)^{-1/p}` threshold, conjugacy growth and Hölder triples.
//!
//! Norms of high convolution powers are carried in log space throughout,
//! since they routinely exceed double range.

pub mod error;
pub mod estimator;
pub mod funcspace;
pub mod numeric;
pub mod posdef;
pub mod words;

pub use error::{Error, Result};
pub use estimator::{InequalityReport, NormEstimateReport};
pub use funcspace::{RadialFunction, SparseFunction};
pub use numeric::ScaledReal;
pub use posdef::{ConditionReport, GramReport, RadialProfile, Tail, Verdict};
pub use words::{GroupContext, Limits, Word};
