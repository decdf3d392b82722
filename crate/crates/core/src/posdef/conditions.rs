//! Summability conditions on a radial profile `φ`, for `p ∈ [2, ∞)`:
//!
//! ```text
//! (2)  sup_k |φχ_k|_p / (k+1) < ∞
//! (3)  Σ_k |φχ_k|_p^p (1+k)^{-p-2} < ∞
//! (4)  φ·φ_α ∈ ℓp for every α < 1, i.e. limsup_k |φχ_k|_p^{1/k} ≤ 1
//! ```
//!
//! For positive definite `φ` each of these is equivalent to `φ` extending to
//! the `ℓp` completion. The checkers treat them as summability facts about
//! arbitrary profiles. Geometric tails are decided in closed form, all three
//! by the single comparison `ratio ≤ (2d-1)^{-1/p}`.

use std::io::{self, Write};

use serde::Serialize;

use super::profile::{RadialProfile, Tail};
use super::threshold::{at_most_threshold, check_p};
use crate::error::{Error, Result};
use crate::numeric::log_sum_exp;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConditionRow {
    pub k: usize,
    /// `|φχ_k|_p`.
    pub sphere_norm: f64,
    /// The per-sphere quantity the condition is about.
    pub normalized_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    pub condition: u8,
    pub p: f64,
    /// Sup for (2), sum (partial plus tail bound) for (3), limsup for (4).
    pub value: f64,
    pub divergence: bool,
    pub k_range: (usize, usize),
    pub verdict: Verdict,
    pub rows: Vec<ConditionRow>,
}

impl ConditionReport {
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "k,sphere_norm,normalized_value")?;
        for r in &self.rows {
            writeln!(w, "{},{},{}", r.k, r.sphere_norm, r.normalized_value)?;
        }
        Ok(())
    }
}

/// Range of explicit indices to tabulate, and the tail if it is usable.
fn prepare(phi: &RadialProfile, p: f64, k_max: usize) -> Result<usize> {
    check_p(p)?;
    if phi.tail() == Tail::Unknown && k_max > phi.explicit_radius() {
        return Err(Error::domain(format!(
            "K = {k_max} exceeds the explicit range {} of a profile without tail",
            phi.explicit_radius()
        )));
    }
    Ok(k_max.max(phi.explicit_radius()))
}

fn rows<F: Fn(usize, f64) -> f64>(
    phi: &RadialProfile,
    p: f64,
    k_eff: usize,
    normalize: F,
) -> Vec<(usize, f64, f64)> {
    (0..=k_eff)
        .map(|k| {
            let ln = phi
                .ln_sphere_norm(k, p)
                .expect("index within the covered range");
            (k, ln, normalize(k, ln))
        })
        .collect()
}

fn report(
    condition: u8,
    p: f64,
    value: f64,
    verdict: Verdict,
    k_eff: usize,
    rows: Vec<(usize, f64, f64)>,
) -> ConditionReport {
    ConditionReport {
        condition,
        p,
        value,
        divergence: verdict == Verdict::Fail,
        k_range: (0, k_eff),
        verdict,
        rows: rows
            .into_iter()
            .map(|(k, ln, v)| ConditionRow {
                k,
                sphere_norm: ln.exp(),
                normalized_value: v,
            })
            .collect(),
    }
}

/// Condition (2): `sup_k |φχ_k|_p / (k+1)`.
pub fn condition2_sup(phi: &RadialProfile, p: f64, k_max: usize) -> Result<ConditionReport> {
    let k_eff = prepare(phi, p, k_max)?;
    let table = rows(phi, p, k_eff, |k, ln| (ln - ((k + 1) as f64).ln()).exp());
    let partial = table.iter().map(|r| r.2).fold(0.0, f64::max);
    let (value, verdict) = match phi.tail() {
        Tail::Zero => (partial, Verdict::Pass),
        Tail::Unknown => (partial, Verdict::Inconclusive),
        Tail::Geometric { ratio, .. } => {
            if at_most_threshold(phi.ctx(), ratio, p) {
                // The tail terms decrease, so their sup is the first one.
                let k = k_eff + 1;
                let first = (phi.ln_sphere_norm(k, p).unwrap() - ((k + 1) as f64).ln()).exp();
                (partial.max(first), Verdict::Pass)
            } else {
                (f64::INFINITY, Verdict::Fail)
            }
        }
    };
    Ok(report(2, p, value, verdict, k_eff, table))
}

/// Condition (3): `Σ_k |W_k| |c_k|^p (1+k)^{-p-2}`, with an upper bound for
/// the geometric tail.
pub fn condition3_sum(phi: &RadialProfile, p: f64, k_max: usize) -> Result<ConditionReport> {
    let k_eff = prepare(phi, p, k_max)?;
    let ln_term = |k: usize, ln: f64| p * ln - (p + 2.0) * ((k + 1) as f64).ln();
    let table = rows(phi, p, k_eff, |k, ln| ln_term(k, ln).exp());
    let logs: Vec<f64> = table.iter().map(|&(k, ln, _)| ln_term(k, ln)).collect();
    let partial = log_sum_exp(&logs).exp();
    let (value, verdict) = match phi.tail() {
        Tail::Zero => (partial, Verdict::Pass),
        Tail::Unknown => (partial, Verdict::Inconclusive),
        Tail::Geometric { scale, ratio } => {
            if at_most_threshold(phi.ctx(), ratio, p) {
                (
                    partial + geometric_tail_bound(phi, scale, ratio, p, k_eff),
                    Verdict::Pass,
                )
            } else {
                (f64::INFINITY, Verdict::Fail)
            }
        }
    };
    Ok(report(3, p, value, verdict, k_eff, table))
}

/// Upper bound for `Σ_{k>K} (2d/(2d-1)) |C|^p r^k (1+k)^{-p-2}`, `r ≤ 1`.
fn geometric_tail_bound(phi: &RadialProfile, scale: f64, ratio: f64, p: f64, k: usize) -> f64 {
    let ctx = phi.ctx();
    let b = ctx.branching() as f64;
    let coef = 2.0 * ctx.rank() as f64 / b * scale.abs().powf(p);
    let k1 = (k + 1) as f64;
    let integral = k1.powf(-p - 1.0) / (p + 1.0);
    let ln_r = b.ln() + p * ratio.ln();
    let bound = if ln_r < 0.0 {
        let geometric = (k1 * ln_r - (p + 2.0) * (k1 + 1.0).ln() - (-ln_r.exp_m1()).ln()).exp();
        geometric.min(integral)
    } else {
        integral
    };
    coef * bound
}

/// Condition (4): `limsup_k |φχ_k|_p^{1/k} ≤ 1`.
pub fn condition4_limsup(phi: &RadialProfile, p: f64, k_max: usize) -> Result<ConditionReport> {
    let k_eff = prepare(phi, p, k_max)?;
    // The k-th root is undefined on the identity sphere.
    let mut table = rows(phi, p, k_eff, |k, ln| (ln / k as f64).exp());
    table.remove(0);
    let (value, verdict) = match phi.tail() {
        Tail::Zero => (0.0, Verdict::Pass),
        Tail::Unknown => (
            table.last().map_or(f64::NAN, |r| r.2),
            Verdict::Inconclusive,
        ),
        Tail::Geometric { ratio, .. } => {
            let value = (phi.ctx().branching() as f64).powf(1.0 / p) * ratio;
            let verdict = if at_most_threshold(phi.ctx(), ratio, p) {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            (value, verdict)
        }
    };
    Ok(report(4, p, value, verdict, k_eff, table))
}

/// Conditions (2), (3) and (4) in order.
pub fn condition_battery(
    phi: &RadialProfile,
    p: f64,
    k_max: usize,
) -> Result<[ConditionReport; 3]> {
    Ok([
        condition2_sup(phi, p, k_max)?,
        condition3_sum(phi, p, k_max)?,
        condition4_limsup(phi, p, k_max)?,
    ])
}

/// `(2) ⇒ (3) ⇒ (4)` holds for the given verdicts.
pub fn chain_holds(reports: &[ConditionReport; 3]) -> bool {
    let pass = |r: &ConditionReport| r.verdict == Verdict::Pass;
    (!pass(&reports[0]) || pass(&reports[1])) && (!pass(&reports[1]) || pass(&reports[2]))
}
