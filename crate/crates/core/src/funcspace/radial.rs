//! Radial (sphere-constant) functions `Σ_k c_k χ_k` and their convolution
//! algebra.
//!
//! Coefficients are stored against the rescaled basis `ψ_k = 2^{-e·k} χ_k`,
//! where `2^e` is the power of two closest to `√(2d-1)`. In that basis the
//! chi-recurrence
//!
//! ```text
//! χ_1 ⊙ χ_0 = χ_1
//! χ_1 ⊙ χ_1 = χ_2 + 2d·χ_0
//! χ_1 ⊙ χ_k = χ_{k+1} + (2d-1)·χ_{k-1}        (k ≥ 2)
//! ```
//!
//! has bounded growth, so high convolution powers keep all coefficients
//! inside double range. The represented coefficient is
//! `c_k = m_k · 2^{exp2 - e·k} · e^{log_scale}`. All rescaling is by exact
//! powers of two; only `log_scale` carries a transcendental factor.

use num_complex::Complex64;

use super::sparse::{check_exponent, same_group, SparseFunction};
use crate::error::{Error, Result};
use crate::numeric::{binary_exponent, ldexp, log_sum_exp, pairwise_sum, ScaledReal};
use crate::words::{enumerate_sphere, GroupContext, Word};

/// Relative tolerance used when testing that a sparse function is radial.
pub const RADIAL_TOLERANCE: f64 = 1e-12;

const RENORM_WINDOW: i64 = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct RadialFunction {
    ctx: GroupContext,
    mantissas: Vec<Complex64>,
    exp2: i64,
    log_scale: f64,
}

/// The exponent `e` of the storage basis `ψ_k = 2^{-e k} χ_k`.
pub fn basis_shift(ctx: &GroupContext) -> i64 {
    ((ctx.branching() as f64).sqrt().log2().round() as i64).max(1)
}

fn max_exponent(values: &[Complex64]) -> Option<i64> {
    values
        .iter()
        .filter(|c| c.norm() > 0.0)
        .map(|c| binary_exponent(c.norm()))
        .max()
}

fn scale_c(c: Complex64, n: i64) -> Complex64 {
    Complex64::new(ldexp(c.re, n), ldexp(c.im, n))
}

impl RadialFunction {
    /// `e^{log_scale} · Σ_k coeffs[k] χ_k`.
    pub fn from_coeffs(ctx: &GroupContext, coeffs: &[Complex64], log_scale: f64) -> Result<Self> {
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
            || !log_scale.is_finite()
        {
            return Err(Error::domain(
                "radial coefficients and log_scale must be finite",
            ));
        }
        let shift = basis_shift(ctx);
        let top = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(k, c)| binary_exponent(c.norm()) + shift * k as i64)
            .max()
            .unwrap_or(0);
        let mantissas = coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| scale_c(c, shift * k as i64 - top))
            .collect();
        let mut out = RadialFunction {
            ctx: *ctx,
            mantissas,
            exp2: top,
            log_scale,
        };
        out.trim();
        Ok(out)
    }

    /// `δ_e = χ_0`.
    pub fn delta_e(ctx: &GroupContext) -> Self {
        RadialFunction {
            ctx: *ctx,
            mantissas: vec![Complex64::new(1.0, 0.0)],
            exp2: 0,
            log_scale: 0.0,
        }
    }

    /// `χ_k`.
    pub fn chi(ctx: &GroupContext, k: usize) -> Self {
        let mut coeffs = vec![Complex64::default(); k + 1];
        coeffs[k] = Complex64::new(1.0, 0.0);
        Self::from_coeffs(ctx, &coeffs, 0.0).expect("finite coefficients")
    }

    pub fn ctx(&self) -> &GroupContext {
        &self.ctx
    }

    /// Largest `k` with a stored coefficient.
    pub fn radius(&self) -> usize {
        self.mantissas.len() - 1
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    /// Natural log of the full scale factor applied to the mantissas.
    pub fn total_log_scale(&self) -> f64 {
        self.log_scale + self.exp2 as f64 * std::f64::consts::LN_2
    }

    pub fn is_zero(&self) -> bool {
        self.mantissas.iter().all(|c| c.norm() == 0.0)
    }

    /// `ln |c_k|`; `-inf` for a vanishing coefficient.
    pub fn coeff_ln_abs(&self, k: usize) -> f64 {
        match self.mantissas.get(k) {
            Some(m) if m.norm() > 0.0 => {
                m.norm().ln()
                    + (self.exp2 - basis_shift(&self.ctx) * k as i64) as f64
                        * std::f64::consts::LN_2
                    + self.log_scale
            }
            _ => f64::NEG_INFINITY,
        }
    }

    /// `c_k` as a plain double (may overflow or underflow).
    pub fn coeff(&self, k: usize) -> Complex64 {
        match self.mantissas.get(k) {
            Some(&m) => {
                scale_c(m, self.exp2 - basis_shift(&self.ctx) * k as i64) * self.log_scale.exp()
            }
            None => Complex64::default(),
        }
    }

    /// Chi-basis coefficients with a log-scale, as used by the JSON format.
    ///
    /// The stored `log_scale` is kept whenever every coefficient fits in a
    /// double; otherwise a power of two is folded into it.
    pub fn to_coeffs(&self) -> (Vec<Complex64>, f64) {
        let shift = basis_shift(&self.ctx);
        let top = self
            .mantissas
            .iter()
            .enumerate()
            .filter(|(_, m)| m.norm() > 0.0)
            .map(|(k, m)| binary_exponent(m.norm()) + self.exp2 - shift * k as i64)
            .max()
            .unwrap_or(0);
        let fold = if (-1000..=1000).contains(&top) {
            0
        } else {
            top
        };
        let coeffs = self
            .mantissas
            .iter()
            .enumerate()
            .map(|(k, &m)| scale_c(m, self.exp2 - shift * k as i64 - fold))
            .collect();
        (
            coeffs,
            self.log_scale + fold as f64 * std::f64::consts::LN_2,
        )
    }

    fn trim(&mut self) {
        while self.mantissas.len() > 1 && self.mantissas.last().is_some_and(|c| c.norm() == 0.0) {
            self.mantissas.pop();
        }
        if self.mantissas.is_empty() {
            self.mantissas.push(Complex64::default());
        }
    }

    fn renormalize(&mut self) {
        self.trim();
        if let Some(top) = max_exponent(&self.mantissas) {
            if top.abs() > RENORM_WINDOW {
                for m in &mut self.mantissas {
                    *m = scale_c(*m, -top);
                }
                self.exp2 += top;
            }
        } else {
            self.exp2 = 0;
        }
    }

    pub fn scale(&self, factor: Complex64) -> RadialFunction {
        let mut out = self.clone();
        for m in &mut out.mantissas {
            *m *= factor;
        }
        out.renormalize();
        out
    }

    /// Adjoint; radial functions are inversion-invariant, so this conjugates.
    pub fn involution(&self) -> RadialFunction {
        let mut out = self.clone();
        for m in &mut out.mantissas {
            *m = m.conj();
        }
        out
    }

    /// Multiplication by `ψ_1 = 2^{-e} χ_1` in the storage basis.
    fn apply_psi1(&self, y: &[Complex64], a: f64, b: f64) -> Vec<Complex64> {
        let mut z = vec![Complex64::default(); y.len() + 1];
        for (k, &v) in y.iter().enumerate() {
            z[k + 1] += v;
            match k {
                0 => {}
                1 => z[0] += v * a,
                _ => z[k - 1] += v * b,
            }
        }
        z
    }

    /// Exact radial product via the chi-basis recurrence, extended to
    /// `χ_j ⊙ y` by induction on `j`.
    pub fn convolve(&self, other: &RadialFunction) -> Result<RadialFunction> {
        same_group(&self.ctx, &other.ctx)?;
        let d = self.ctx.rank() as f64;
        let s2 = ldexp(1.0, 2 * basis_shift(&self.ctx));
        let a = 2.0 * d / s2;
        let b = (2.0 * d - 1.0) / s2;

        let (x, y) = if self.mantissas.len() <= other.mantissas.len() {
            (&self.mantissas, &other.mantissas)
        } else {
            (&other.mantissas, &self.mantissas)
        };
        let mut z = vec![Complex64::default(); x.len() + y.len() - 1];
        let mut prev: Vec<Complex64> = Vec::new();
        let mut cur: Vec<Complex64> = y.clone();
        for (j, &xj) in x.iter().enumerate() {
            if j > 0 {
                let mut next = self.apply_psi1(&cur, a, b);
                let back = if j == 1 {
                    0.0
                } else if j == 2 {
                    a
                } else {
                    b
                };
                if j >= 2 {
                    for (n, p) in next.iter_mut().zip(prev.iter()) {
                        *n -= p * back;
                    }
                }
                prev = std::mem::replace(&mut cur, next);
            }
            if xj.norm() != 0.0 {
                for (zk, ck) in z.iter_mut().zip(cur.iter()) {
                    *zk += xj * ck;
                }
            }
        }
        if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::domain("radial product left double range"));
        }
        let mut out = RadialFunction {
            ctx: self.ctx,
            mantissas: z,
            exp2: self.exp2 + other.exp2,
            log_scale: self.log_scale + other.log_scale,
        };
        out.renormalize();
        Ok(out)
    }

    /// `|x|_q` with `|x|_q^q = Σ_k |W_k| |c_k|^q`, returned in scaled form.
    pub fn lq_norm(&self, q: f64) -> Result<ScaledReal> {
        check_exponent(q)?;
        let logs: Vec<f64> = (0..self.mantissas.len())
            .map(|k| self.coeff_ln_abs(k))
            .collect();
        if q.is_infinite() {
            return Ok(ScaledReal::from_ln(
                logs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            ));
        }
        let terms: Vec<f64> = logs
            .iter()
            .enumerate()
            .map(|(k, &l)| {
                if l == f64::NEG_INFINITY {
                    l
                } else {
                    self.ctx.ln_sphere_size(k) + q * l
                }
            })
            .collect();
        Ok(ScaledReal::from_ln(log_sum_exp(&terms) / q))
    }

    /// Expands to an explicit sparse function (`from_radial`).
    pub fn to_sparse(&self) -> Result<SparseFunction> {
        let total: u128 = (0..self.mantissas.len())
            .filter(|&k| self.mantissas[k].norm() > 0.0)
            .map(|k| self.ctx.sphere_size(k))
            .sum();
        let cap = self.ctx.limits().term_cap as u128;
        if total > cap {
            return Err(Error::resource(format!(
                "expanding the radial function needs {total} terms (cap {cap})"
            )));
        }
        let mut terms = Vec::with_capacity(total as usize);
        for k in 0..self.mantissas.len() {
            if self.mantissas[k].norm() == 0.0 {
                continue;
            }
            let c = self.coeff(k);
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::domain(format!(
                    "coefficient {k} exceeds double range"
                )));
            }
            terms.extend(enumerate_sphere(&self.ctx, k)?.into_iter().map(|w| (w, c)));
        }
        Ok(SparseFunction::from_terms(&self.ctx, terms))
    }

    /// Collapses a sphere-constant sparse function (`to_radial`).
    pub fn from_sparse(f: &SparseFunction) -> Result<Self> {
        let ctx = f.ctx();
        let radius = f.radius().unwrap_or(0);
        let global = f.sup_norm();
        let mut by_sphere: Vec<Vec<Complex64>> = vec![Vec::new(); radius + 1];
        for (w, c) in f.terms() {
            by_sphere[w.len()].push(*c);
        }
        let mut coeffs = Vec::with_capacity(radius + 1);
        for (k, values) in by_sphere.iter().enumerate() {
            if values.is_empty() {
                coeffs.push(Complex64::default());
                continue;
            }
            if (values.len() as u128) < ctx.sphere_size(k) {
                if values.iter().any(|c| c.norm() > RADIAL_TOLERANCE * global) {
                    return Err(Error::NotRadial { sphere: k });
                }
                coeffs.push(Complex64::default());
                continue;
            }
            let n = values.len() as f64;
            let re: Vec<f64> = values.iter().map(|c| c.re).collect();
            let im: Vec<f64> = values.iter().map(|c| c.im).collect();
            let mean = Complex64::new(pairwise_sum(&re) / n, pairwise_sum(&im) / n);
            let spread = values.iter().map(|c| c.norm()).fold(mean.norm(), f64::max);
            if values
                .iter()
                .any(|c| (c - mean).norm() > RADIAL_TOLERANCE * spread)
            {
                return Err(Error::NotRadial { sphere: k });
            }
            coeffs.push(mean);
        }
        Self::from_coeffs(ctx, &coeffs, 0.0)
    }

    /// Convenience: value of the represented function at `s`.
    pub fn eval(&self, s: &Word) -> Complex64 {
        self.coeff(s.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rel_diff;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(d: usize) -> GroupContext {
        GroupContext::new(d).unwrap()
    }

    fn re(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    fn plain(x: &RadialFunction) -> Vec<Complex64> {
        (0..=x.radius()).map(|k| x.coeff(k)).collect()
    }

    fn assert_coeffs(x: &RadialFunction, expected: &[f64]) {
        let got = plain(x);
        assert_eq!(got.len(), expected.len(), "{got:?}");
        for (g, e) in got.iter().zip(expected) {
            assert!(
                (g - Complex64::new(*e, 0.0)).norm() <= 1e-12 * e.abs().max(1.0),
                "{got:?} vs {expected:?}"
            );
        }
    }

    #[test]
    fn chi_recurrence_examples() {
        let c = ctx(2);
        let chi1 = RadialFunction::chi(&c, 1);
        let chi2 = RadialFunction::chi(&c, 2);
        assert_coeffs(&chi1.convolve(&chi1).unwrap(), &[4.0, 0.0, 1.0]);
        assert_coeffs(&chi1.convolve(&chi2).unwrap(), &[0.0, 3.0, 0.0, 1.0]);
        let x = RadialFunction::from_coeffs(&c, &re(&[0.5, -2.0, 3.0]), 0.0).unwrap();
        assert_eq!(RadialFunction::delta_e(&c).convolve(&x).unwrap(), x);
    }

    /// Structure constants certified against brute-force sparse convolution.
    #[test]
    fn recurrence_matches_sparse_oracle_up_to_radius_five() {
        for d in 2..=3 {
            let c = ctx(d);
            for j in 0..=5usize {
                for k in 0..=5usize {
                    if d == 3 && j + k > 7 {
                        continue;
                    }
                    let fast = RadialFunction::chi(&c, j)
                        .convolve(&RadialFunction::chi(&c, k))
                        .unwrap();
                    let slow = SparseFunction::chi(&c, j)
                        .unwrap()
                        .convolve(&SparseFunction::chi(&c, k).unwrap())
                        .unwrap();
                    let slow = RadialFunction::from_sparse(&slow).unwrap();
                    let (a, b) = (plain(&fast), plain(&slow));
                    assert_eq!(a.len(), b.len(), "d={d} j={j} k={k}");
                    for (x, y) in a.iter().zip(&b) {
                        assert_eq!(x.im, 0.0);
                        assert!(
                            (x - y).norm() <= 1e-12 * y.norm().max(1.0),
                            "d={d} j={j} k={k}: {a:?} vs {b:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn random_radial_products_match_sparse() {
        let c = ctx(2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..4 {
            let gen = |rng: &mut ChaCha8Rng| -> Vec<Complex64> {
                let r = rng.gen_range(0..=3usize);
                (0..=r)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect()
            };
            let x = RadialFunction::from_coeffs(&c, &gen(&mut rng), 0.0).unwrap();
            let y = RadialFunction::from_coeffs(&c, &gen(&mut rng), 0.0).unwrap();
            let fast = x.convolve(&y).unwrap();
            let slow = x
                .to_sparse()
                .unwrap()
                .convolve(&y.to_sparse().unwrap())
                .unwrap();
            let slow = RadialFunction::from_sparse(&slow).unwrap();
            for k in 0..=fast.radius() {
                let (a, b) = (fast.coeff(k), slow.coeff(k));
                assert!(
                    (a - b).norm() <= 1e-12 * a.norm().max(b.norm()).max(1e-300),
                    "k={k} {a} {b}"
                );
            }
        }
    }

    #[test]
    fn norm_examples() {
        let c = ctx(2);
        let n = RadialFunction::chi(&c, 2).lq_norm(2.0).unwrap();
        assert!(rel_diff(n.to_f64(), 12f64.sqrt()) < 1e-15);
        let x = RadialFunction::from_coeffs(&c, &re(&[28.0, 0.0, 10.0, 0.0, 1.0]), 0.0).unwrap();
        assert!(rel_diff(x.lq_norm(2.0).unwrap().to_f64(), 2092f64.sqrt()) < 1e-14);
        assert!(
            rel_diff(
                x.lq_norm(2.0).unwrap().to_f64(),
                x.to_sparse().unwrap().lq_norm(2.0).unwrap()
            ) < 1e-14
        );
        for q in [1.0, 1.3, 2.0, f64::INFINITY] {
            assert_eq!(
                RadialFunction::delta_e(&c).lq_norm(q).unwrap().to_f64(),
                1.0
            );
            assert!(
                rel_diff(
                    x.lq_norm(q).unwrap().to_f64(),
                    x.to_sparse().unwrap().lq_norm(q).unwrap()
                ) < 1e-13
            );
        }
        assert!(x.lq_norm(0.9).is_err());
    }

    #[test]
    fn radial_round_trip_and_shape_errors() {
        let c = ctx(2);
        let f = SparseFunction::chi(&c, 1)
            .unwrap()
            .add(&SparseFunction::delta(&c, Word::identity()).scale(Complex64::new(4.0, 0.0)))
            .unwrap();
        let r = RadialFunction::from_sparse(&f).unwrap();
        assert_coeffs(&r, &[4.0, 1.0]);
        assert_eq!(r.to_sparse().unwrap(), f);
        let a = SparseFunction::delta(&c, Word::parse(&c, "a").unwrap());
        assert_eq!(
            RadialFunction::from_sparse(&a),
            Err(Error::NotRadial { sphere: 1 })
        );
        let e = RadialFunction::from_coeffs(&c, &re(&[1.0]), 0.0).unwrap();
        assert_eq!(
            e.to_sparse().unwrap(),
            SparseFunction::delta(&c, Word::identity())
        );
    }

    /// `ln` of the number of closed walks of length `len` at the root of the
    /// `2d`-regular tree, by dynamic programming over the distance.
    fn ln_closed_walks(d: usize, len: usize) -> f64 {
        let up = (2 * d - 1) as f64;
        let mut v = vec![1.0f64];
        let mut ln_scale = 0.0;
        for _ in 0..len {
            let mut next = vec![0.0; v.len() + 1];
            for (j, &x) in v.iter().enumerate() {
                if j == 0 {
                    next[1] += 2.0 * d as f64 * x;
                } else {
                    next[j - 1] += x;
                    next[j + 1] += up * x;
                }
            }
            let max = next.iter().copied().fold(0.0, f64::max);
            next.iter_mut().for_each(|x| *x /= max);
            ln_scale += max.ln();
            v = next;
        }
        v[0].ln() + ln_scale
    }

    #[test]
    fn high_powers_stay_in_range() {
        let c = ctx(2);
        let chi1 = RadialFunction::chi(&c, 1);
        let mut p = chi1.convolve(&chi1).unwrap();
        for _ in 0..10 {
            p = p.convolve(&p).unwrap();
        }
        // p = χ_1^{2048}. Coefficients near the edge sphere are ~2^{-2000}
        // times the bulk and are dropped, so the radius shrinks somewhat.
        assert!(p.radius() <= 2048 && p.radius() > 1024);
        // |χ_1^n|_2^2 = χ_1^{2n}(e) counts closed walks of length 2n.
        let n = p.lq_norm(2.0).unwrap();
        let expected = 0.5 * ln_closed_walks(2, 4096);
        assert!(
            (n.ln() - expected).abs() < 1e-9 * expected,
            "{} vs {expected}",
            n.ln()
        );
        assert!(n.ln() <= 2048.0 * (2.0 * 3f64.sqrt()).ln());
    }

    #[test]
    fn coefficients_round_trip_exactly() {
        let c = ctx(3);
        let coeffs = vec![
            Complex64::new(0.1, -0.3),
            Complex64::new(1e-200, 0.0),
            Complex64::new(3.5e100, 1.0),
            Complex64::default(),
            Complex64::new(-7.25, 2.0),
        ];
        let x = RadialFunction::from_coeffs(&c, &coeffs, 1.2345).unwrap();
        let (back, ls) = x.to_coeffs();
        assert_eq!(back, coeffs);
        assert_eq!(ls, 1.2345);
    }
}
