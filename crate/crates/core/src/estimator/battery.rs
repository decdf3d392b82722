//! Seeded randomized batteries for the convolution inequalities.
//!
//! Case `i` of a battery draws from a ChaCha8 stream selected by `(seed, i)`,
//! so results do not depend on thread scheduling.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::lemmas::{
    check_lemma_rep_bound, check_sphere_convolution_bound, split_domination_defect, split_pair,
};
use super::InequalityReport;
use crate::error::Result;
use crate::funcspace::{RadialFunction, SparseFunction};
use crate::numeric::rel_diff;
use crate::words::{enumerate_sphere, GroupContext};

/// Relative tolerance for the norm preservation and pointwise domination of
/// split pairs.
pub const SPLIT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BatteryOptions {
    pub seed: u64,
    pub cases: usize,
    /// Multiplies every right-hand side before comparison. Values below 1
    /// make the battery stricter; it exists to show that it can fail.
    pub rhs_scale: f64,
}

impl Default for BatteryOptions {
    fn default() -> Self {
        BatteryOptions {
            seed: 1,
            cases: 1000,
            rhs_scale: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatterySummary {
    pub name: String,
    pub seed: u64,
    pub cases: usize,
    pub checks: usize,
    pub passed: usize,
    pub exact_zero_checks: usize,
    pub exact_zero_failures: usize,
    /// Largest `lhs / rhs` seen on the non-trivial checks.
    pub worst_ratio: f64,
    /// First failing case index, if any.
    pub first_failure: Option<usize>,
}

impl BatterySummary {
    fn new(name: &str, opts: &BatteryOptions) -> Self {
        BatterySummary {
            name: name.to_string(),
            seed: opts.seed,
            cases: opts.cases,
            checks: 0,
            passed: 0,
            exact_zero_checks: 0,
            exact_zero_failures: 0,
            worst_ratio: 0.0,
            first_failure: None,
        }
    }

    pub fn failed(&self) -> usize {
        self.checks - self.passed
    }

    pub fn all_passed(&self) -> bool {
        self.checks == self.passed
    }

    fn record(&mut self, case: usize, report: &InequalityReport) {
        self.checks += 1;
        if report.pass {
            self.passed += 1;
        } else if self.first_failure.is_none() {
            self.first_failure = Some(case);
        }
        if report.exact_zero_case {
            self.exact_zero_checks += 1;
            if !report.pass {
                self.exact_zero_failures += 1;
            }
        } else if report.log_rhs.is_finite() {
            self.worst_ratio = self.worst_ratio.max(report.ratio());
        }
    }
}

/// The RNG for case `index` of a battery seeded with `seed`.
pub fn case_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn unit_disc<R: Rng>(rng: &mut R) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if z.norm_sqr() <= 1.0 && z.norm_sqr() > 1e-6 {
            return z;
        }
    }
}

/// A random function on `W_k`: each word is kept with a random density in
/// `[0.3, 1]` (at least one word survives), with coefficients uniform in the
/// unit disc. `max_terms` caps the support size.
pub fn random_sphere_function<R: Rng>(
    rng: &mut R,
    ctx: &GroupContext,
    k: usize,
    max_terms: Option<usize>,
) -> Result<SparseFunction> {
    let sphere = enumerate_sphere(ctx, k)?;
    let density = rng.gen_range(0.3..=1.0);
    let mut terms = Vec::new();
    for w in &sphere {
        if rng.gen_bool(density) {
            terms.push((w.clone(), unit_disc(rng)));
        }
    }
    if terms.is_empty() {
        let w = sphere[rng.gen_range(0..sphere.len())].clone();
        terms.push((w, unit_disc(rng)));
    }
    if let Some(cap) = max_terms {
        while terms.len() > cap {
            let i = rng.gen_range(0..terms.len());
            terms.swap_remove(i);
        }
    }
    Ok(SparseFunction::from_terms(ctx, terms))
}

fn merge(mut acc: BatterySummary, case: usize, reports: &[InequalityReport]) -> BatterySummary {
    for r in reports {
        acc.record(case, r);
    }
    acc
}

pub(crate) fn run_battery<F>(name: &str, opts: &BatteryOptions, case: F) -> Result<BatterySummary>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Vec<InequalityReport>> + Sync,
{
    let per_case: Vec<Vec<InequalityReport>> = (0..opts.cases)
        .into_par_iter()
        .map(|i| {
            let reports = case(&mut case_rng(opts.seed, i))?;
            Ok(reports
                .iter()
                .map(|r| r.with_rhs_scaled(opts.rhs_scale))
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_case
        .iter()
        .enumerate()
        .fold(BatterySummary::new(name, opts), |acc, (i, r)| {
            merge(acc, i, r)
        }))
}

/// Random `f ∈ ℂ[W_k]`, `g ∈ ℂ[W_l]` with `d ∈ {2, 3}`, `k, l ≤ 3`,
/// `q ∈ {1, 1.2, 1.5, 2}`, checked on every sphere `W_m`, `m ≤ k + l + 1`.
pub fn conv_battery(opts: &BatteryOptions) -> Result<BatterySummary> {
    run_battery("conv", opts, |rng| {
        let ctx = GroupContext::new(rng.gen_range(2..=3))?;
        let k = rng.gen_range(0..=3);
        let l = rng.gen_range(0..=3);
        let q = [1.0, 1.2, 1.5, 2.0][rng.gen_range(0..4)];
        let f = random_sphere_function(rng, &ctx, k, None)?;
        let g = random_sphere_function(rng, &ctx, l, None)?;
        (0..=k + l + 1)
            .map(|m| check_sphere_convolution_bound(&f, k, &g, l, q, m))
            .collect()
    })
}

fn split_report(defect: f64, norm_error: f64) -> InequalityReport {
    // Encodes both split properties as one comparison against the tolerance.
    let worst = defect.max(norm_error).max(0.0);
    InequalityReport::from_values(worst, SPLIT_TOLERANCE)
}

/// Random split pairs: `|f'|_q = |f|_q`, `|g'|_q = |g|_q` and pointwise
/// domination on `W_{k+l-2j}`, each within `1e-12` relative.
pub fn split_battery(opts: &BatteryOptions) -> Result<BatterySummary> {
    run_battery("split", opts, |rng| {
        let ctx = GroupContext::new(rng.gen_range(2..=3))?;
        let k = rng.gen_range(1..=3);
        let l = rng.gen_range(1..=3);
        let j = rng.gen_range(1..=k.min(l));
        let q = [1.2, 1.5, 1.8, 2.0][rng.gen_range(0..4)];
        let f = random_sphere_function(rng, &ctx, k, None)?;
        let g = random_sphere_function(rng, &ctx, l, None)?;
        let (fs, gs) = split_pair(&f, k, &g, l, j, q)?;
        let norm_error =
            rel_diff(fs.lq_norm(q)?, f.lq_norm(q)?).max(rel_diff(gs.lq_norm(q)?, g.lq_norm(q)?));
        let defect = split_domination_defect(&f, &g, &fs, &gs, k + l - 2 * j)?;
        Ok(vec![split_report(defect, norm_error)])
    })
}

/// The `(k+1)^{4n-1}` power bound: small sparse functions on `W_k` with
/// `n ∈ {1, 2}`, and radial `c·χ_k` with `n` up to 64.
pub fn rep_battery(opts: &BatteryOptions) -> Result<BatterySummary> {
    run_battery("rep", opts, |rng| {
        let d = rng.gen_range(2..=3);
        let ctx = GroupContext::new(d)?;
        let k = rng.gen_range(0..=3);
        let q = [1.0, 1.25, 1.5, 2.0][rng.gen_range(0..4)];
        let mut out = Vec::new();
        let max_terms = if d == 2 { 4 } else { 3 };
        let f = random_sphere_function(rng, &ctx, k, Some(max_terms))?;
        for n in [1, 2] {
            out.push(check_lemma_rep_bound(&f, k, q, n)?);
        }
        let c = unit_disc(rng) * rng.gen_range(0.1..10.0);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = c;
        let radial = RadialFunction::from_coeffs(&ctx, &coeffs, 0.0)?;
        for n in [1, 4, 16, 64] {
            out.push(check_lemma_rep_bound(&radial, k, q, n)?);
        }
        Ok(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batteries_are_deterministic() {
        let opts = BatteryOptions {
            seed: 7,
            cases: 40,
            rhs_scale: 1.0,
        };
        let a = conv_battery(&opts).unwrap();
        let b = conv_battery(&opts).unwrap();
        assert_eq!(a, b);
        assert!(a.all_passed());
        assert!(a.exact_zero_checks > 0);
    }

    #[test]
    fn shrinking_the_rhs_produces_failures() {
        let opts = BatteryOptions {
            seed: 3,
            cases: 40,
            rhs_scale: 1e-3,
        };
        let s = conv_battery(&opts).unwrap();
        assert!(s.failed() > 0);
        assert_eq!(s.exact_zero_failures, 0);
    }

    #[test]
    fn random_functions_live_on_the_sphere() {
        let ctx = GroupContext::new(3).unwrap();
        let mut rng = case_rng(11, 0);
        for k in 0..4 {
            let f = random_sphere_function(&mut rng, &ctx, k, Some(5)).unwrap();
            assert!(f.check_on_sphere(k).is_ok());
            assert!(!f.is_zero() && f.support_len() <= 5);
        }
    }
}
