use super::{check_power_exponent, EvalPath, NormEstimateEntry, NormEstimateReport, NormInput};
use crate::error::{Error, Result};
use crate::funcspace::{RadialFunction, SparseFunction};

const MONOTONE_SLACK: f64 = 1e-9;

/// `[1, 2, 4, …, max_n]`.
pub fn doubling_schedule(max_n: u64) -> Result<Vec<u64>> {
    if max_n == 0 || !max_n.is_power_of_two() {
        return Err(Error::domain(format!(
            "max n = {max_n} must be a power of two"
        )));
    }
    Ok(std::iter::successors(Some(1u64), |n| Some(n * 2))
        .take_while(|&n| n <= max_n)
        .collect())
}

fn check_schedule(schedule: &[u64]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::domain("empty schedule"));
    }
    if schedule.iter().any(|n| !n.is_power_of_two()) {
        return Err(Error::domain(
            "schedule entries must be powers of two (repeated squaring)",
        ));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("schedule must be strictly increasing"));
    }
    Ok(())
}

/// The part of a convolution algebra the squaring loop needs.
trait PowerAlgebra: Sized {
    fn square(&self) -> Result<Self>;
    fn ln_norm(&self, q: f64) -> Result<f64>;
}

impl PowerAlgebra for SparseFunction {
    fn square(&self) -> Result<Self> {
        self.convolve(self)
    }

    fn ln_norm(&self, q: f64) -> Result<f64> {
        Ok(self.lq_norm(q)?.ln())
    }
}

impl PowerAlgebra for RadialFunction {
    fn square(&self) -> Result<Self> {
        self.convolve(self)
    }

    fn ln_norm(&self, q: f64) -> Result<f64> {
        Ok(self.lq_norm(q)?.ln())
    }
}

/// `ln |h^{*2n}|_q` for each `n` of the schedule, by repeated squaring.
fn squared_norms<A: PowerAlgebra>(h: &A, q: f64, schedule: &[u64]) -> Result<Vec<(u64, f64)>> {
    let last = *schedule.last().expect("non-empty schedule");
    let mut out = Vec::with_capacity(schedule.len());
    let mut power = h.square()?;
    let mut n = 1u64;
    loop {
        if schedule.contains(&n) {
            out.push((n, power.ln_norm(q)?));
        }
        if n == last {
            break;
        }
        power = power.square()?;
        n *= 2;
    }
    Ok(out)
}

/// `u_n = |(f^* * f)^{*2n}|_q^{1/(4n)}` with the path chosen automatically.
pub fn power_norm_sequence<'a>(
    input: impl Into<NormInput<'a>>,
    q: f64,
    schedule: &[u64],
) -> Result<NormEstimateReport> {
    power_norm_sequence_with(input, q, schedule, EvalPath::Auto)
}

pub fn power_norm_sequence_with<'a>(
    input: impl Into<NormInput<'a>>,
    q: f64,
    schedule: &[u64],
    path: EvalPath,
) -> Result<NormEstimateReport> {
    check_power_exponent(q)?;
    check_schedule(schedule)?;
    let input = input.into();

    let radial = match (input, path) {
        (NormInput::Radial(r), EvalPath::Auto | EvalPath::Radial) => Some(r.clone()),
        (NormInput::Sparse(f), EvalPath::Radial) => Some(RadialFunction::from_sparse(f)?),
        (NormInput::Sparse(f), EvalPath::Auto) => RadialFunction::from_sparse(f).ok(),
        (_, EvalPath::Sparse) => None,
    };

    let (logs, used, descriptor) = match radial {
        Some(r) => {
            let h = r.involution().convolve(&r)?;
            let desc = format!("radial(d={}, radius={})", r.ctx().rank(), r.radius());
            (squared_norms(&h, q, schedule)?, EvalPath::Radial, desc)
        }
        None => {
            let f = match input {
                NormInput::Sparse(f) => f.clone(),
                NormInput::Radial(r) => r.to_sparse()?,
            };
            let h = f.involution().convolve(&f)?;
            let desc = format!(
                "sparse(d={}, support={}, radius={})",
                f.ctx().rank(),
                f.support_len(),
                f.radius().unwrap_or(0)
            );
            (squared_norms(&h, q, schedule)?, EvalPath::Sparse, desc)
        }
    };

    let entries: Vec<NormEstimateEntry> = logs
        .into_iter()
        .map(|(n, ln)| NormEstimateEntry {
            n,
            u_n: (ln / (4.0 * n as f64)).exp(),
            log_scale: ln,
        })
        .collect();
    let monotone = entries
        .windows(2)
        .all(|w| w[1].u_n >= w[0].u_n - MONOTONE_SLACK);
    Ok(NormEstimateReport {
        entries,
        q,
        input: descriptor,
        path: used,
        monotone,
    })
}
