use serde::Serialize;

use super::conditions::{condition_battery, ConditionReport, Verdict};
use super::profile::RadialProfile;
use crate::error::{Error, Result};
use crate::words::{conjugacy_sphere_count, GroupContext, Word};

pub(crate) fn check_p(p: f64) -> Result<()> {
    if !(p >= 2.0 && p.is_finite()) {
        return Err(Error::domain(format!("p = {p} outside [2, ∞)")));
    }
    Ok(())
}

fn threshold_unchecked(ctx: &GroupContext, p: f64) -> f64 {
    (ctx.branching() as f64).powf(1.0 / p).recip()
}

/// `α < (2d-1)^{-1/p}`: `φ_α` lies in `ℓp`.
pub(crate) fn below_threshold(ctx: &GroupContext, alpha: f64, p: f64) -> bool {
    alpha < threshold_unchecked(ctx, p)
}

/// `α ≤ (2d-1)^{-1/p}`: `φ_α` satisfies the extension conditions.
pub(crate) fn at_most_threshold(ctx: &GroupContext, alpha: f64, p: f64) -> bool {
    alpha <= threshold_unchecked(ctx, p)
}

/// `(2d-1)^{-1/p}`.
///
/// `φ_α` is in `ℓp` exactly for `α` strictly below this value, and satisfies
/// the extension conditions for `α` up to and including it.
pub fn lp_threshold(ctx: &GroupContext, p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(threshold_unchecked(ctx, p))
}

/// Whether `φ_α ∈ ℓp`, i.e. `(2d-1) α^p < 1`.
pub fn phi_alpha_in_lp(ctx: &GroupContext, alpha: f64, p: f64) -> Result<bool> {
    check_p(p)?;
    Ok(below_threshold(ctx, alpha, p))
}

/// A decay rate `α` for which `φ_α` extends to the `ℓp` completion but not
/// to the `ℓq` one, `2 ≤ q < p`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationReport {
    pub d: usize,
    pub q: f64,
    pub p: f64,
    /// The open end `(2d-1)^{-1/q}` of the witness interval.
    pub lower: f64,
    /// The closed end `(2d-1)^{-1/p}`.
    pub upper: f64,
    pub alpha: f64,
    pub conditions_p: Vec<ConditionReport>,
    pub conditions_q: Vec<ConditionReport>,
    /// Every condition passes for `p` and fails for `q`.
    pub separates: bool,
}

pub fn separation_witness(
    ctx: &GroupContext,
    q: f64,
    p: f64,
    alpha: Option<f64>,
    k_max: usize,
) -> Result<SeparationReport> {
    check_p(q)?;
    check_p(p)?;
    if q >= p {
        return Err(Error::domain(format!("need q < p, got q = {q}, p = {p}")));
    }
    let lower = threshold_unchecked(ctx, q);
    let upper = threshold_unchecked(ctx, p);
    let alpha = alpha.unwrap_or(0.5 * (lower + upper));
    let phi = RadialProfile::phi_alpha(ctx, alpha)?;
    let conditions_p = condition_battery(&phi, p, k_max)?.to_vec();
    let conditions_q = condition_battery(&phi, q, k_max)?.to_vec();
    let separates = conditions_p.iter().all(|r| r.verdict == Verdict::Pass)
        && conditions_q.iter().all(|r| r.verdict == Verdict::Fail);
    Ok(SeparationReport {
        d: ctx.rank(),
        q,
        p,
        lower,
        upper,
        alpha,
        conditions_p,
        conditions_q,
        separates,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TraceGrowthRow {
    pub n: usize,
    /// Words of length `|w| + 2n` conjugate to `w`.
    pub count: u64,
    /// `(2d-1)^{n-1}`.
    pub lower_bound: u64,
    pub pass: bool,
}

/// Counts conjugates of `w` on the spheres `W_{|w|+2n}`, `n = 1..=n_max`,
/// against the lower bound `(2d-1)^{n-1}`.
pub fn trace_growth_check(
    ctx: &GroupContext,
    w: &Word,
    n_max: usize,
) -> Result<Vec<TraceGrowthRow>> {
    if w.is_identity() {
        return Err(Error::domain(
            "the identity has no nontrivial conjugacy growth",
        ));
    }
    if !w.is_cyclically_reduced() {
        return Err(Error::precondition(format!(
            "word {w} is not cyclically reduced"
        )));
    }
    let b = ctx.branching() as u64;
    (1..=n_max)
        .map(|n| {
            let count = conjugacy_sphere_count(ctx, w, n)?;
            let lower_bound = b.saturating_pow(n as u32 - 1);
            Ok(TraceGrowthRow {
                n,
                count,
                lower_bound,
                pass: count >= lower_bound,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        let c2 = GroupContext::new(2).unwrap();
        let c3 = GroupContext::new(3).unwrap();
        assert_eq!(lp_threshold(&c2, 2.0).unwrap(), 0.5773502691896258);
        assert!((lp_threshold(&c2, 4.0).unwrap() - 0.7598356856515925).abs() < 1e-15);
        assert!((lp_threshold(&c3, 2.0).unwrap() - 0.4472135954999579).abs() < 1e-15);
        assert!(lp_threshold(&c2, 1.5).is_err());
        assert!(lp_threshold(&c2, f64::INFINITY).is_err());
    }

    #[test]
    fn membership_is_strict() {
        let ctx = GroupContext::new(2).unwrap();
        let t = lp_threshold(&ctx, 2.0).unwrap();
        assert!(!phi_alpha_in_lp(&ctx, t, 2.0).unwrap());
        assert!(phi_alpha_in_lp(&ctx, t - 1e-12, 2.0).unwrap());
        assert!(at_most_threshold(&ctx, t, 2.0));
    }

    #[test]
    fn default_witness_separates() {
        let ctx = GroupContext::new(2).unwrap();
        let rep = separation_witness(&ctx, 2.0, 4.0, None, 10).unwrap();
        assert!(rep.separates);
        assert!(rep.lower < rep.alpha && rep.alpha <= rep.upper);
        assert!(separation_witness(&ctx, 4.0, 2.0, None, 10).is_err());
        let outside = separation_witness(&ctx, 2.0, 4.0, Some(0.5), 10).unwrap();
        assert!(!outside.separates);
    }

    #[test]
    fn trace_growth_small_cases() {
        let ctx = GroupContext::new(2).unwrap();
        let a = Word::parse(&ctx, "a").unwrap();
        let rows = trace_growth_check(&ctx, &a, 3).unwrap();
        assert_eq!(rows[0].count, 2);
        assert_eq!(rows[1].count, 6);
        assert!(rows.iter().all(|r| r.pass));
        assert!(trace_growth_check(&ctx, &Word::identity(), 2).is_err());
        let not_cr = Word::parse(&ctx, "abA").unwrap();
        assert!(trace_growth_check(&ctx, &not_cr, 2).is_err());
    }
}
