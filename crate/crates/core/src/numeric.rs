//! Floating-point helpers shared by the sparse and radial paths: pairwise
//! summation, log-domain accumulation, exact power-of-two scaling and a
//! mantissa/log-scale number for magnitudes outside double range.

use serde::{Deserialize, Serialize};

const PAIRWISE_BLOCK: usize = 16;

/// Pairwise (tree) summation; error grows as O(log n) instead of O(n).
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= PAIRWISE_BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// `ln(Σ exp(l_i))`, evaluated without overflow. Empty input gives `-inf`.
pub fn log_sum_exp(logs: &[f64]) -> f64 {
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let shifted: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    max + pairwise_sum(&shifted).ln()
}

/// `x · 2^n`, exact whenever the result is a normal double.
pub fn ldexp(mut x: f64, mut n: i64) -> f64 {
    const STEP: i64 = 1000;
    while n > STEP {
        x *= 2f64.powi(STEP as i32);
        n -= STEP;
        if !x.is_finite() || x == 0.0 {
            return x;
        }
    }
    while n < -STEP {
        x *= 2f64.powi(-STEP as i32);
        n += STEP;
        if x == 0.0 || !x.is_finite() {
            return x;
        }
    }
    x * 2f64.powi(n as i32)
}

/// Binary exponent `e` with `2^(e-1) <= |x| < 2^e`; zero for `x == 0`.
pub fn binary_exponent(x: f64) -> i64 {
    if x == 0.0 || !x.is_finite() {
        return 0;
    }
    x.abs().log2().floor() as i64 + 1
}

/// A non-negative real stored as `mantissa · e^log_scale`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledReal {
    pub mantissa: f64,
    pub log_scale: f64,
}

impl ScaledReal {
    pub const ZERO: ScaledReal = ScaledReal {
        mantissa: 0.0,
        log_scale: 0.0,
    };

    pub const INFINITY: ScaledReal = ScaledReal {
        mantissa: f64::INFINITY,
        log_scale: 0.0,
    };

    /// Build from a natural logarithm; `-inf` maps to zero, `+inf` to infinity.
    pub fn from_ln(ln: f64) -> Self {
        if ln == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        if ln == f64::INFINITY {
            return Self::INFINITY;
        }
        let log_scale = ln.floor();
        ScaledReal {
            mantissa: (ln - log_scale).exp(),
            log_scale,
        }
    }

    pub fn ln(&self) -> f64 {
        if self.mantissa == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.mantissa.ln() + self.log_scale
        }
    }

    /// The value as a plain double; may overflow to `inf` or underflow to 0.
    pub fn to_f64(&self) -> f64 {
        self.mantissa * self.log_scale.exp()
    }

    pub fn is_infinite(&self) -> bool {
        self.mantissa.is_infinite()
    }
}

/// Relative difference `|a-b| / max(|a|,|b|)`, zero when both vanish.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
