use num_complex::Complex64;
use rand::Rng;

use super::profile::RadialProfile;
use crate::error::{Error, Result};
use crate::estimator::{BatteryOptions, BatterySummary, InequalityReport};
use crate::words::GroupContext;

/// Allowed error in `1/p = 1/q + 1/r`.
pub const EXPONENT_TOLERANCE: f64 = 1e-12;

/// `|φ φ_α φ_β|_p ≤ |φ φ_α|_q |φ_β|_r` with `1/p = 1/q + 1/r`.
///
/// All three norms are exact: explicit spheres are summed in log space and
/// geometric tails in closed form. A side outside its `ℓ` space is `+∞`.
pub fn holder_triple_check(
    phi: &RadialProfile,
    alpha: f64,
    beta: f64,
    p: f64,
    q: f64,
    r: f64,
) -> Result<InequalityReport> {
    for (name, e) in [("p", p), ("q", q), ("r", r)] {
        if !(e >= 1.0 && e.is_finite()) {
            return Err(Error::domain(format!(
                "{name} = {e} must be finite and at least 1"
            )));
        }
    }
    if (1.0 / p - 1.0 / q - 1.0 / r).abs() > EXPONENT_TOLERANCE {
        return Err(Error::domain(format!(
            "exponents violate 1/p = 1/q + 1/r: p = {p}, q = {q}, r = {r}"
        )));
    }
    for (name, a) in [("α", alpha), ("β", beta)] {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::domain(format!("{name} = {a} outside (0, 1)")));
        }
    }
    let ctx = phi.ctx();
    let phi_a = phi.product(&RadialProfile::phi_alpha(ctx, alpha)?)?;
    let phi_b = RadialProfile::phi_alpha(ctx, beta)?;
    let triple = phi_a.product(&phi_b)?;
    let log_lhs = triple.ln_lp_norm(p)?;
    let log_rhs = phi_a.ln_lp_norm(q)? + phi_b.ln_lp_norm(r)?;
    Ok(InequalityReport::from_logs(log_lhs, log_rhs))
}

/// `r = pq / (q - p)`, the exponent completing a Hölder triple.
pub fn holder_conjugate(p: f64, q: f64) -> Result<f64> {
    if !(q > p && p >= 1.0) {
        return Err(Error::domain(format!(
            "need 1 ≤ p < q, got p = {p}, q = {q}"
        )));
    }
    Ok(p * q / (q - p))
}

/// Random geometric profiles with random admissible `(α, β, p, q, r)`.
pub fn holder_battery(opts: &BatteryOptions) -> Result<BatterySummary> {
    crate::estimator::run_battery("holder", opts, |rng| {
        let ctx = GroupContext::new(rng.gen_range(2..=3))?;
        let k = rng.gen_range(0..=4);
        let coeffs: Vec<Complex64> = (0..=k)
            .map(|_| {
                Complex64::from_polar(
                    rng.gen_range(0.0..2.0),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                )
            })
            .collect();
        let scale = rng.gen_range(-2.0..2.0);
        let ratio = rng.gen_range(0.05..=1.0);
        let phi = RadialProfile::geometric(&ctx, &coeffs, scale, ratio)?;
        let alpha = rng.gen_range(0.01..0.99);
        let beta = rng.gen_range(0.01..0.99);
        let p = rng.gen_range(2.0..6.0);
        let q = p * rng.gen_range(1.05..3.0);
        let r = holder_conjugate(p, q)?;
        Ok(vec![holder_triple_check(&phi, alpha, beta, p, q, r)?])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_profile() {
        let ctx = GroupContext::new(2).unwrap();
        let delta = RadialProfile::finite(&ctx, &[Complex64::new(1.0, 0.0)]).unwrap();
        let beta: f64 = 0.6;
        let rep = holder_triple_check(&delta, 0.3, beta, 2.0, 4.0, 4.0).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.lhs, 1.0);
        // The right side is |φ_β|_4 alone.
        let direct: f64 = (0..200)
            .map(|k| ctx.sphere_size(k) as f64 * beta.powi(4 * k as i32))
            .sum::<f64>()
            .powf(0.25);
        assert!((rep.rhs - direct).abs() < 1e-13 * direct);
    }

    #[test]
    fn phi_half_example() {
        let ctx = GroupContext::new(2).unwrap();
        let phi = RadialProfile::phi_alpha(&ctx, 0.5).unwrap();
        let beta = 3f64.powf(-1.0 / 6.0) * 0.99;
        let rep = holder_triple_check(&phi, 0.9, beta, 2.0, 4.0, 4.0).unwrap();
        assert!(rep.pass);
        assert!(rep.lhs.is_finite());
    }

    #[test]
    fn exponent_relation_is_enforced() {
        let ctx = GroupContext::new(2).unwrap();
        let phi = RadialProfile::phi_alpha(&ctx, 0.5).unwrap();
        assert!(holder_triple_check(&phi, 0.5, 0.5, 2.0, 4.0, 5.0).is_err());
        assert!(holder_triple_check(&phi, 1.0, 0.5, 2.0, 4.0, 4.0).is_err());
        assert_eq!(holder_conjugate(2.0, 4.0).unwrap(), 4.0);
    }
}
