use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;

use super::{check_power_exponent, InequalityReport, NormInput};
use crate::error::{Error, Result};
use crate::funcspace::same_group;
use crate::funcspace::{RadialFunction, SparseFunction};
use crate::numeric::pairwise_sum;
use crate::words::Word;

/// `|(f*g)·χ_m|_q ≤ |f|_q |g|_q` for `f` on `W_k`, `g` on `W_l`, `q ∈ [1, 2]`.
///
/// When `m` has the wrong parity or lies outside `[|k-l|, k+l]` the product
/// vanishes on `W_m`, and the report checks that it is exactly zero.
pub fn check_sphere_convolution_bound(
    f: &SparseFunction,
    k: usize,
    g: &SparseFunction,
    l: usize,
    q: f64,
    m: usize,
) -> Result<InequalityReport> {
    check_power_exponent(q)?;
    same_group(f.ctx(), g.ctx())?;
    f.check_on_sphere(k)?;
    g.check_on_sphere(l)?;
    let restricted = f.convolve(g)?.sphere_restrict(m);
    let rhs = f.lq_norm(q)? * g.lq_norm(q)?;
    let admissible = m >= k.abs_diff(l) && m <= k + l && (k + l - m) % 2 == 0;
    if !admissible {
        return Ok(InequalityReport::exact_zero(rhs, restricted.is_zero()));
    }
    Ok(InequalityReport::from_values(restricted.lq_norm(q)?, rhs))
}

fn aggregate(groups: BTreeMap<Word, Vec<f64>>, q: f64) -> Vec<(Word, Complex64)> {
    groups
        .into_iter()
        .map(|(w, mags)| {
            let max = mags.iter().copied().fold(0.0, f64::max);
            let scaled: Vec<f64> = mags.iter().map(|m| (m / max).powf(q)).collect();
            (
                w,
                Complex64::new(max * pairwise_sum(&scaled).powf(1.0 / q), 0.0),
            )
        })
        .collect()
}

/// The pair `(f', g')` on `W_{k-j}` and `W_{l-j}`:
///
/// ```text
/// f'(t) = (Σ_{v ∈ W_j, |tv| = k} |f(tv)|^q)^{1/q}
/// g'(u) = (Σ_{v ∈ W_j, |v^{-1}u| = l} |g(v^{-1}u)|^q)^{1/q}
/// ```
///
/// so that `|f'|_q = |f|_q`, `|g'|_q = |g|_q`, and
/// `|f*g| ≤ f'*g'` pointwise on `W_{k+l-2j}`.
pub fn split_pair(
    f: &SparseFunction,
    k: usize,
    g: &SparseFunction,
    l: usize,
    j: usize,
    q: f64,
) -> Result<(SparseFunction, SparseFunction)> {
    if !(q > 1.0 && q <= 2.0) {
        return Err(Error::domain(format!("q = {q} outside (1, 2]")));
    }
    if j < 1 || j > k.min(l) {
        return Err(Error::domain(format!(
            "split depth j = {j} outside [1, {}]",
            k.min(l)
        )));
    }
    same_group(f.ctx(), g.ctx())?;
    f.check_on_sphere(k)?;
    g.check_on_sphere(l)?;

    let mut by_prefix: BTreeMap<_, Vec<f64>> = BTreeMap::new();
    for (w, c) in f.terms() {
        by_prefix.entry(w.prefix(k - j)).or_default().push(c.norm());
    }
    let mut by_suffix: BTreeMap<_, Vec<f64>> = BTreeMap::new();
    for (w, c) in g.terms() {
        by_suffix
            .entry(w.suffix_after(j))
            .or_default()
            .push(c.norm());
    }
    Ok((
        SparseFunction::from_terms(f.ctx(), aggregate(by_prefix, q)),
        SparseFunction::from_terms(g.ctx(), aggregate(by_suffix, q)),
    ))
}

/// Largest violation of `|(f*g)(s)| ≤ (f'*g')(s)` over `s ∈ W_m`, relative
/// to the largest value of `f'*g'` there. Non-positive means dominated.
pub fn split_domination_defect(
    f: &SparseFunction,
    g: &SparseFunction,
    f_split: &SparseFunction,
    g_split: &SparseFunction,
    m: usize,
) -> Result<f64> {
    let exact = f.convolve(g)?.sphere_restrict(m);
    let bound = f_split.convolve(g_split)?.sphere_restrict(m);
    let scale = bound.sup_norm().max(exact.sup_norm());
    if scale == 0.0 {
        return Ok(0.0);
    }
    let worst = exact
        .terms()
        .map(|(s, c)| c.norm() - bound.get(s).re)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(worst / scale)
}

fn binary_power(h: &SparseFunction, mut e: u64) -> Result<SparseFunction> {
    let mut base = h.clone();
    let mut acc: Option<SparseFunction> = None;
    loop {
        if e & 1 == 1 {
            acc = Some(match acc {
                Some(a) => a.convolve(&base)?,
                None => base.clone(),
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = base.convolve(&base)?;
    }
    Ok(acc.expect("exponent is positive"))
}

fn radial_binary_power(h: &RadialFunction, mut e: u64) -> Result<RadialFunction> {
    let mut base = h.clone();
    let mut acc: Option<RadialFunction> = None;
    loop {
        if e & 1 == 1 {
            acc = Some(match acc {
                Some(a) => a.convolve(&base)?,
                None => base.clone(),
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = base.convolve(&base)?;
    }
    Ok(acc.expect("exponent is positive"))
}

/// `|(f^* * f)^{*2n}|_q ≤ (k+1)^{4n-1} |f|_q^{4n}` for `f` on `W_k`,
/// compared in log space.
pub fn check_lemma_rep_bound<'a>(
    input: impl Into<NormInput<'a>>,
    k: usize,
    q: f64,
    n: u64,
) -> Result<InequalityReport> {
    check_power_exponent(q)?;
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let (log_lhs, log_f) = match input.into() {
        NormInput::Sparse(f) => {
            f.check_on_sphere(k)?;
            let h = f.involution().convolve(f)?;
            let p = binary_power(&h, 2 * n)?;
            (p.lq_norm(q)?.ln(), f.lq_norm(q)?.ln())
        }
        NormInput::Radial(f) => {
            if let Some(bad) =
                (0..=f.radius()).find(|&i| i != k && f.coeff_ln_abs(i) > f64::NEG_INFINITY)
            {
                return Err(Error::precondition(format!(
                    "radial input has a nonzero coefficient on sphere {bad}, outside W_{k}"
                )));
            }
            let h = f.involution().convolve(f)?;
            let p = radial_binary_power(&h, 2 * n)?;
            (p.lq_norm(q)?.ln(), f.lq_norm(q)?.ln())
        }
    };
    let four_n = 4.0 * n as f64;
    let log_rhs = (four_n - 1.0) * ((k + 1) as f64).ln() + four_n * log_f;
    Ok(InequalityReport::from_logs(log_lhs, log_rhs))
}

/// `conj(g) * h * g^∨`: the coefficient `s ↦ ⟨π(s) ξ, ξ⟩` of the vector
/// `ξ = π(g)δ` when `h` is the diagonal coefficient of `π`.
pub fn coefficient_function(g: &SparseFunction, h: &SparseFunction) -> Result<SparseFunction> {
    g.conj().convolve(h)?.convolve(&g.check())
}

/// `s ↦ Σ_t g(s^{-1} t) conj(g(t))`, the coefficient of `g` in the left
/// regular representation, summed directly over pairs of the support.
pub fn regular_coefficient(g: &SparseFunction) -> SparseFunction {
    let mut acc: HashMap<Word, Complex64> = HashMap::new();
    for (t, gt) in g.terms() {
        for (u, gu) in g.terms() {
            *acc.entry(t.mul(&u.inverse())).or_default() += gu * gt.conj();
        }
    }
    SparseFunction::from_terms(g.ctx(), acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{GroupContext, Word};

    fn ctx2() -> GroupContext {
        GroupContext::new(2).unwrap()
    }

    fn w(ctx: &GroupContext, s: &str) -> Word {
        Word::parse(ctx, s).unwrap()
    }

    #[test]
    fn parity_cases_are_exact_zero() {
        let ctx = ctx2();
        let f = SparseFunction::chi(&ctx, 2).unwrap();
        let g = SparseFunction::chi(&ctx, 1).unwrap();
        for m in [0, 2, 4] {
            let r = check_sphere_convolution_bound(&f, 2, &g, 1, 2.0, m).unwrap();
            assert!(r.exact_zero_case && r.pass);
        }
        let r = check_sphere_convolution_bound(&f, 2, &g, 1, 2.0, 3).unwrap();
        assert!(!r.exact_zero_case && r.pass);
    }

    #[test]
    fn sphere_bound_rejects_bad_inputs() {
        let ctx = ctx2();
        let f = SparseFunction::chi(&ctx, 2).unwrap();
        assert!(matches!(
            check_sphere_convolution_bound(&f, 1, &f, 2, 2.0, 3),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            check_sphere_convolution_bound(&f, 2, &f, 2, 2.5, 3),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn split_of_chi_is_uniform() {
        let ctx = ctx2();
        let f = SparseFunction::chi(&ctx, 2).unwrap();
        let (fs, gs) = split_pair(&f, 2, &f, 2, 1, 2.0).unwrap();
        assert_eq!(fs.support_len(), 4);
        assert_eq!(gs.support_len(), 4);
        for (_, c) in fs.terms() {
            assert!((c.re - 3f64.sqrt()).abs() < 1e-15);
        }
        assert!(split_pair(&f, 2, &f, 2, 3, 2.0).is_err());
        assert!(split_pair(&f, 2, &f, 2, 1, 1.0).is_err());
    }

    #[test]
    fn coefficient_function_matches_direct_sum() {
        let ctx = ctx2();
        let g = SparseFunction::from_terms(
            &ctx,
            [
                (w(&ctx, "a"), Complex64::new(1.0, 0.5)),
                (w(&ctx, "Ab"), Complex64::new(-0.25, 2.0)),
                (Word::identity(), Complex64::new(0.5, 0.0)),
            ],
        );
        let delta = SparseFunction::delta(&ctx, Word::identity());
        let via_conv = coefficient_function(&g, &delta).unwrap();
        let direct = regular_coefficient(&g);
        assert_eq!(via_conv.support_len(), direct.support_len());
        for (s, c) in direct.terms() {
            assert!((via_conv.get(s) - c).norm() < 1e-14);
        }
    }

    #[test]
    fn rep_bound_with_equality_for_generators() {
        let ctx = ctx2();
        let a = SparseFunction::delta(&ctx, w(&ctx, "a"));
        let r = check_lemma_rep_bound(&a, 1, 2.0, 3).unwrap();
        assert!(r.pass);
        let chi = RadialFunction::chi(&ctx, 2);
        assert!(check_lemma_rep_bound(&chi, 2, 2.0, 8).unwrap().pass);
        assert!(matches!(
            check_lemma_rep_bound(&chi, 1, 2.0, 1),
            Err(Error::Precondition(_))
        ));
    }
}
