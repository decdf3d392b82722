use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;
use crate::words::{enumerate_sphere, GroupContext, Word};

/// Coefficients with magnitude below this are not stored.
pub const STORAGE_EPSILON: f64 = 1e-300;

/// A finitely supported complex function on `F_d`.
///
/// Terms are kept in word order (length first, then lexicographic), so
/// iteration and serialization are deterministic.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseFunction {
    ctx: GroupContext,
    terms: BTreeMap<Word, Complex64>,
}

pub(crate) fn check_exponent(q: f64) -> Result<()> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::domain(format!(
            "norm exponent q = {q} must satisfy q >= 1"
        )));
    }
    Ok(())
}

pub(crate) fn same_group(a: &GroupContext, b: &GroupContext) -> Result<()> {
    if a.rank() != b.rank() {
        return Err(Error::ContextMismatch {
            left: a.rank(),
            right: b.rank(),
        });
    }
    Ok(())
}

/// ℓq norm of a list of magnitudes, scaled by the maximum to avoid overflow.
pub(crate) fn lq_of_magnitudes(mags: &[f64], q: f64) -> f64 {
    let max = mags.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0.0;
    }
    if q.is_infinite() {
        return max;
    }
    let scaled: Vec<f64> = mags.iter().map(|m| (m / max).powf(q)).collect();
    max * pairwise_sum(&scaled).powf(1.0 / q)
}

impl SparseFunction {
    pub fn zero(ctx: &GroupContext) -> Self {
        SparseFunction {
            ctx: *ctx,
            terms: BTreeMap::new(),
        }
    }

    /// `δ_s`.
    pub fn delta(ctx: &GroupContext, s: Word) -> Self {
        Self::from_terms(ctx, [(s, Complex64::new(1.0, 0.0))])
    }

    /// `χ_k`, the indicator of the sphere `W_k`.
    pub fn chi(ctx: &GroupContext, k: usize) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        Ok(Self::from_terms(
            ctx,
            enumerate_sphere(ctx, k)?.into_iter().map(|w| (w, one)),
        ))
    }

    /// Builds a function from `(word, coefficient)` pairs; repeated words add.
    pub fn from_terms(
        ctx: &GroupContext,
        terms: impl IntoIterator<Item = (Word, Complex64)>,
    ) -> Self {
        let mut map: BTreeMap<Word, Complex64> = BTreeMap::new();
        for (w, c) in terms {
            *map.entry(w).or_default() += c;
        }
        map.retain(|_, c| c.norm() >= STORAGE_EPSILON);
        SparseFunction {
            ctx: *ctx,
            terms: map,
        }
    }

    pub fn ctx(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn terms(&self) -> impl ExactSizeIterator<Item = (&Word, &Complex64)> + Clone {
        self.terms.iter()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, s: &Word) -> Complex64 {
        self.terms.get(s).copied().unwrap_or_default()
    }

    /// Largest word length in the support, `None` for the zero function.
    pub fn radius(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn add(&self, other: &SparseFunction) -> Result<SparseFunction> {
        same_group(&self.ctx, &other.ctx)?;
        Ok(Self::from_terms(
            &self.ctx,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(w, c)| (w.clone(), *c)),
        ))
    }

    pub fn scale(&self, factor: Complex64) -> SparseFunction {
        Self::from_terms(
            &self.ctx,
            self.terms.iter().map(|(w, c)| (w.clone(), c * factor)),
        )
    }

    /// Group-ring adjoint `f*(s) = conj(f(s^{-1}))`.
    pub fn involution(&self) -> SparseFunction {
        Self::from_terms(
            &self.ctx,
            self.terms.iter().map(|(w, c)| (w.inverse(), c.conj())),
        )
    }

    /// Pointwise conjugate `s ↦ conj(f(s))`.
    pub fn conj(&self) -> SparseFunction {
        Self::from_terms(
            &self.ctx,
            self.terms.iter().map(|(w, c)| (w.clone(), c.conj())),
        )
    }

    /// `f^∨(s) = f(s^{-1})`.
    pub fn check(&self) -> SparseFunction {
        Self::from_terms(&self.ctx, self.terms.iter().map(|(w, c)| (w.inverse(), *c)))
    }

    fn convolution_estimate(&self, other: &SparseFunction) -> u128 {
        let products = (self.support_len() as u128) * (other.support_len() as u128);
        let radius = self.radius().unwrap_or(0) + other.radius().unwrap_or(0);
        products.min(self.ctx.ball_size(radius))
    }

    /// `(f*g)(s) = Σ_{tu=s} f(t) g(u)`, by a double loop over the supports.
    pub fn convolve(&self, other: &SparseFunction) -> Result<SparseFunction> {
        same_group(&self.ctx, &other.ctx)?;
        let estimate = self.convolution_estimate(other);
        let cap = self.ctx.limits().term_cap as u128;
        if estimate > cap {
            return Err(Error::resource(format!(
                "sparse convolution may produce {estimate} terms (cap {cap}); use the radial path or raise FREEHARM_CAP_MB"
            )));
        }
        let mut acc: HashMap<Word, Complex64> = HashMap::with_capacity(estimate as usize);
        if self.support_len() <= other.support_len() {
            for (t, a) in &self.terms {
                for (u, b) in &other.terms {
                    *acc.entry(t.mul(u)).or_default() += a * b;
                }
            }
        } else {
            for (u, b) in &other.terms {
                for (t, a) in &self.terms {
                    *acc.entry(t.mul(u)).or_default() += a * b;
                }
            }
        }
        Ok(Self::from_terms(&self.ctx, acc))
    }

    /// Pointwise product with `χ_m`.
    pub fn sphere_restrict(&self, m: usize) -> SparseFunction {
        SparseFunction {
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == m)
                .map(|(w, c)| (w.clone(), *c))
                .collect(),
        }
    }

    /// `|f|_q = (Σ |f(s)|^q)^{1/q}`; `q = ∞` gives the sup norm.
    pub fn lq_norm(&self, q: f64) -> Result<f64> {
        check_exponent(q)?;
        let mags: Vec<f64> = self.terms.values().map(|c| c.norm()).collect();
        Ok(lq_of_magnitudes(&mags, q))
    }

    /// Checks `supp(f) ⊆ W_k`, naming the first offending word.
    pub fn check_on_sphere(&self, k: usize) -> Result<()> {
        match self.terms.keys().find(|w| w.len() != k) {
            Some(w) => Err(Error::precondition(format!(
                "word {w} (length {}) lies outside the sphere W_{k}",
                w.len()
            ))),
            None => Ok(()),
        }
    }

    /// Largest coefficient magnitude.
    pub fn sup_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}
