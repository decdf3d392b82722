use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::RadialFunction;
use crate::numeric::log_sum_exp;
use crate::words::GroupContext;

/// How a radial profile continues past its explicit coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Tail {
    /// All further coefficients vanish.
    Zero,
    /// `c_k = scale · ratio^k` for every `k` past the explicit range.
    Geometric { scale: f64, ratio: f64 },
    /// Nothing is known past the explicit range.
    Unknown,
}

/// Values `c_k` of a radial function on the spheres `W_k`, with a tail model.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialProfile {
    ctx: GroupContext,
    coeffs: Vec<Complex64>,
    tail: Tail,
}

impl RadialProfile {
    fn build(ctx: &GroupContext, coeffs: Vec<Complex64>, tail: Tail) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain("a radial profile needs at least c_0"));
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::domain("profile coefficients must be finite"));
        }
        let tail = match tail {
            Tail::Geometric { scale, ratio } => {
                if !scale.is_finite() {
                    return Err(Error::domain("geometric tail scale must be finite"));
                }
                if !(ratio > 0.0 && ratio <= 1.0) {
                    return Err(Error::domain(format!(
                        "geometric tail ratio {ratio} outside (0, 1]"
                    )));
                }
                if scale == 0.0 {
                    Tail::Zero
                } else {
                    tail
                }
            }
            other => other,
        };
        Ok(RadialProfile {
            ctx: *ctx,
            coeffs,
            tail,
        })
    }

    /// A finitely supported profile: zero past the given coefficients.
    pub fn finite(ctx: &GroupContext, coeffs: &[Complex64]) -> Result<Self> {
        Self::build(ctx, coeffs.to_vec(), Tail::Zero)
    }

    /// Explicit coefficients with nothing known beyond them.
    pub fn truncated(ctx: &GroupContext, coeffs: &[Complex64]) -> Result<Self> {
        Self::build(ctx, coeffs.to_vec(), Tail::Unknown)
    }

    /// Explicit `c_0..=c_K`, then `c_k = scale · ratio^k` for `k > K`.
    pub fn geometric(
        ctx: &GroupContext,
        coeffs: &[Complex64],
        scale: f64,
        ratio: f64,
    ) -> Result<Self> {
        Self::build(ctx, coeffs.to_vec(), Tail::Geometric { scale, ratio })
    }

    /// `φ_α(s) = α^{|s|}`, `α ∈ (0, 1]`.
    pub fn phi_alpha(ctx: &GroupContext, alpha: f64) -> Result<Self> {
        Self::build(
            ctx,
            vec![Complex64::new(1.0, 0.0)],
            Tail::Geometric {
                scale: 1.0,
                ratio: alpha,
            },
        )
    }

    /// The profile of a radial function, with a zero tail.
    pub fn from_radial(f: &RadialFunction) -> Result<Self> {
        let (coeffs, log_scale) = f.to_coeffs();
        let factor = log_scale.exp();
        let coeffs: Vec<Complex64> = coeffs.iter().map(|c| c * factor).collect();
        Self::finite(f.ctx(), &coeffs)
    }

    pub fn ctx(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// Explicit coefficients `c_0..=c_K`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `K`, the last explicit index.
    pub fn explicit_radius(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `c_k`, or `None` past the explicit range of an unknown tail.
    pub fn coeff(&self, k: usize) -> Option<Complex64> {
        if let Some(c) = self.coeffs.get(k) {
            return Some(*c);
        }
        match self.tail {
            Tail::Zero => Some(Complex64::new(0.0, 0.0)),
            Tail::Geometric { scale, ratio } => {
                Some(Complex64::new(scale * ratio.powf(k as f64), 0.0))
            }
            Tail::Unknown => None,
        }
    }

    /// `ln |c_k|`, exact in log space even where `c_k` underflows.
    pub fn ln_abs_coeff(&self, k: usize) -> Option<f64> {
        if let Some(c) = self.coeffs.get(k) {
            return Some(c.norm().ln());
        }
        match self.tail {
            Tail::Zero => Some(f64::NEG_INFINITY),
            Tail::Geometric { scale, ratio } => Some(scale.abs().ln() + k as f64 * ratio.ln()),
            Tail::Unknown => None,
        }
    }

    /// `ln |φχ_k|_p = ln|W_k|/p + ln|c_k|`.
    pub fn ln_sphere_norm(&self, k: usize, p: f64) -> Option<f64> {
        let c = self.ln_abs_coeff(k)?;
        if c == f64::NEG_INFINITY {
            return Some(c);
        }
        Some(self.ctx.ln_sphere_size(k) / p + c)
    }

    /// Pointwise product, e.g. `φ·φ_α`.
    pub fn product(&self, other: &RadialProfile) -> Result<RadialProfile> {
        crate::funcspace::same_group(&self.ctx, &other.ctx)?;
        let k_max = self.explicit_radius().max(other.explicit_radius());
        let mut coeffs = Vec::with_capacity(k_max + 1);
        for k in 0..=k_max {
            match (self.coeff(k), other.coeff(k)) {
                (Some(a), Some(b)) => coeffs.push(a * b),
                _ => break,
            }
        }
        let tail = match (self.tail, other.tail) {
            (Tail::Zero, _) | (_, Tail::Zero) => Tail::Zero,
            (Tail::Geometric { scale: a, ratio: r }, Tail::Geometric { scale: b, ratio: s }) => {
                Tail::Geometric {
                    scale: a * b,
                    ratio: r * s,
                }
            }
            _ => Tail::Unknown,
        };
        let tail = if coeffs.len() < k_max + 1 {
            Tail::Unknown
        } else {
            tail
        };
        Self::build(&self.ctx, coeffs, tail)
    }

    /// `ln |φ|_p`, with `|φ|_p^p = Σ_k |W_k| |c_k|^p` summed exactly,
    /// the geometric tail in closed form. `+∞` when the tail is not in `ℓp`.
    pub fn ln_lp_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::domain(format!(
                "p = {p} must be finite and at least 1"
            )));
        }
        let mut logs: Vec<f64> = (0..self.coeffs.len())
            .map(|k| {
                let c = self.coeffs[k].norm().ln();
                if c == f64::NEG_INFINITY {
                    c
                } else {
                    self.ctx.ln_sphere_size(k) + p * c
                }
            })
            .collect();
        match self.tail {
            Tail::Zero => {}
            Tail::Unknown => {
                return Err(Error::precondition(
                    "the profile has no tail model, so its ℓp norm is not determined",
                ))
            }
            Tail::Geometric { scale, ratio } => {
                let b = self.ctx.branching() as f64;
                // ln r with r = (2d-1) ratio^p; the tail is Σ_{k>K} (2d/(2d-1)) |C|^p r^k.
                let ln_r = b.ln() + p * ratio.ln();
                if !super::threshold::below_threshold(&self.ctx, ratio, p) || ln_r >= 0.0 {
                    return Ok(f64::INFINITY);
                }
                let k0 = self.coeffs.len() as f64;
                let ln_coef = (2.0 * self.ctx.rank() as f64 / b).ln() + p * scale.abs().ln();
                logs.push(ln_coef + k0 * ln_r - (-ln_r.exp_m1()).ln());
            }
        }
        Ok(log_sum_exp(&logs) / p)
    }
}
