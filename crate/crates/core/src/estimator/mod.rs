//! Norm estimation through convolution powers, and checkers for the
//! convolution inequalities on spheres.
//!
//! For `f` finitely supported, `h = f^* * f` and `u_n = |h^{*2n}|_q^{1/(4n)}`
//! bound `‖π(f)‖` from above (in the liminf) for every representation
//! whose diagonal coefficient lies in `ℓp`, `1/p + 1/q = 1`. When `f` is
//! supported on `W_k`, `u_n ≤ (k+1)|f|_q`.

mod battery;
mod lemmas;
mod power;

use std::io::{self, Write};

use serde::Serialize;

pub(crate) use battery::run_battery;
pub use battery::{
    case_rng, conv_battery, random_sphere_function, rep_battery, split_battery, BatteryOptions,
    BatterySummary,
};
pub use lemmas::{
    check_lemma_rep_bound, check_sphere_convolution_bound, coefficient_function,
    regular_coefficient, split_domination_defect, split_pair,
};
pub use power::{doubling_schedule, power_norm_sequence, power_norm_sequence_with};

use crate::error::{Error, Result};
use crate::funcspace::{RadialFunction, SparseFunction};

/// Relative slack allowed on every inequality check.
pub const INEQUALITY_TOLERANCE: f64 = 1e-9;

/// Input for the power-norm computations.
#[derive(Clone, Copy, Debug)]
pub enum NormInput<'a> {
    Sparse(&'a SparseFunction),
    Radial(&'a RadialFunction),
}

impl<'a> From<&'a SparseFunction> for NormInput<'a> {
    fn from(f: &'a SparseFunction) -> Self {
        NormInput::Sparse(f)
    }
}

impl<'a> From<&'a RadialFunction> for NormInput<'a> {
    fn from(f: &'a RadialFunction) -> Self {
        NormInput::Radial(f)
    }
}

/// Which representation carries the convolution powers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalPath {
    /// Radial whenever the input is sphere-constant, sparse otherwise.
    Auto,
    Sparse,
    Radial,
}

pub(crate) fn check_power_exponent(q: f64) -> Result<()> {
    if !(1.0..=2.0).contains(&q) {
        return Err(Error::domain(format!(
            "q = {q} outside [1, 2]; the convolution inequalities are only established there"
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormEstimateEntry {
    pub n: u64,
    pub u_n: f64,
    /// `ln |h^{*2n}|_q`, the log-space value the root is taken from.
    pub log_scale: f64,
}

/// The sequence `(n, u_n)` whose liminf bounds the representation norm.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormEstimateReport {
    pub entries: Vec<NormEstimateEntry>,
    pub q: f64,
    pub input: String,
    pub path: EvalPath,
    /// `u` is non-decreasing along the schedule (up to 1e-9).
    pub monotone: bool,
}

impl NormEstimateReport {
    /// The last computed `u_n`; no extrapolation is attempted.
    pub fn final_estimate(&self) -> f64 {
        self.entries.last().map_or(f64::NAN, |e| e.u_n)
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "n,u_n,log_scale")?;
        for e in &self.entries {
            writeln!(w, "{},{},{}", e.n, e.u_n, e.log_scale)?;
        }
        Ok(())
    }
}

/// Outcome of one inequality check `lhs ≤ rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub log_lhs: f64,
    pub log_rhs: f64,
    pub pass: bool,
    /// The parity/range condition forces the left side to vanish exactly.
    pub exact_zero_case: bool,
}

impl InequalityReport {
    /// Compare two quantities given by their natural logs.
    pub fn from_logs(log_lhs: f64, log_rhs: f64) -> Self {
        let pass = log_lhs == f64::NEG_INFINITY
            || log_rhs == f64::INFINITY
            || log_lhs <= log_rhs + INEQUALITY_TOLERANCE.ln_1p();
        let (lhs, rhs) = (log_lhs.exp(), log_rhs.exp());
        InequalityReport {
            lhs,
            rhs,
            slack: rhs - lhs,
            log_lhs,
            log_rhs,
            pass,
            exact_zero_case: false,
        }
    }

    pub fn from_values(lhs: f64, rhs: f64) -> Self {
        Self::from_logs(lhs.ln(), rhs.ln())
    }

    /// The left side must be identically zero; `is_zero` says whether it is.
    pub fn exact_zero(rhs: f64, is_zero: bool) -> Self {
        InequalityReport {
            lhs: if is_zero { 0.0 } else { f64::NAN },
            rhs,
            slack: rhs,
            log_lhs: f64::NEG_INFINITY,
            log_rhs: rhs.ln(),
            pass: is_zero,
            exact_zero_case: true,
        }
    }

    /// The same comparison with the right side multiplied by `factor`.
    pub fn with_rhs_scaled(&self, factor: f64) -> Self {
        if self.exact_zero_case {
            return *self;
        }
        Self::from_logs(self.log_lhs, self.log_rhs + factor.ln())
    }

    /// `lhs / rhs`, computed in log space.
    pub fn ratio(&self) -> f64 {
        (self.log_lhs - self.log_rhs).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inequality_report_tolerance() {
        assert!(InequalityReport::from_values(1.0, 1.0).pass);
        assert!(InequalityReport::from_values(1.0 + 5e-10, 1.0).pass);
        assert!(!InequalityReport::from_values(1.0 + 2e-9, 1.0).pass);
        assert!(InequalityReport::from_values(0.0, 0.0).pass);
        assert!(InequalityReport::from_logs(1e6, f64::INFINITY).pass);
        let r = InequalityReport::from_values(3.0, 4.0);
        assert_eq!(r.slack, r.rhs - r.lhs);
        assert!(!r.with_rhs_scaled(0.5).pass);
        assert!(!InequalityReport::exact_zero(4.0, false).pass);
    }
}
