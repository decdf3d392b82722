use num_complex::Complex64;
use serde::Serialize;

use super::profile::RadialProfile;
use crate::error::{Error, Result};
use crate::funcspace::SparseFunction;
use crate::words::{enumerate_ball, GroupContext, Word};

/// Relative PSD tolerance, scaled by `max(1, ‖G‖_∞)`.
pub const PSD_TOLERANCE: f64 = 1e-9;
/// Largest ball radius accepted by [`pd_battery_phi_alpha`].
pub const MAX_BATTERY_RADIUS: usize = 3;

const JACOBI_TOLERANCE: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// A function that can be evaluated at any group element it is asked about.
pub trait GroupFunction {
    fn ctx(&self) -> &GroupContext;
    fn value_at(&self, s: &Word) -> Result<Complex64>;
}

impl GroupFunction for SparseFunction {
    fn ctx(&self) -> &GroupContext {
        SparseFunction::ctx(self)
    }

    fn value_at(&self, s: &Word) -> Result<Complex64> {
        Ok(self.get(s))
    }
}

impl GroupFunction for RadialProfile {
    fn ctx(&self) -> &GroupContext {
        RadialProfile::ctx(self)
    }

    fn value_at(&self, s: &Word) -> Result<Complex64> {
        self.coeff(s.len()).ok_or_else(|| {
            Error::domain(format!(
                "the profile does not cover radius {} (explicit up to {}, no tail)",
                s.len(),
                self.explicit_radius()
            ))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GramReport {
    pub base_set: Vec<Word>,
    /// `G[s][t] = φ(s^{-1} t)`, Hermitian by construction from the upper
    /// triangle.
    pub matrix: Vec<Vec<Complex64>>,
    /// Largest `|φ(t^{-1}s) - conj φ(s^{-1}t)|` over the base set; nonzero
    /// when `φ` itself is not Hermitian.
    pub hermitian_defect: f64,
    pub min_eigenvalue: f64,
    pub eigenvalues: Vec<f64>,
    pub tolerance: f64,
    pub psd: bool,
}

impl GramReport {
    /// `c^H G c`.
    pub fn quadratic_form(&self, c: &[Complex64]) -> Complex64 {
        self.matrix
            .iter()
            .zip(c)
            .map(|(row, ci)| ci.conj() * row.iter().zip(c).map(|(g, cj)| g * cj).sum::<Complex64>())
            .sum()
    }
}

fn max_row_sum(m: &[Vec<Complex64>]) -> f64 {
    m.iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations,
/// stopping once the off-diagonal Frobenius mass is below `tol · ‖A‖_F`.
#[allow(clippy::needless_range_loop)]
pub fn symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    let frob = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let off = |a: &Vec<Vec<f64>>| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i][j] * a[i][j];
                }
            }
        }
        s.sqrt()
    };
    for _ in 0..MAX_SWEEPS {
        if off(&a) <= JACOBI_TOLERANCE * frob {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Eigenvalues of a Hermitian matrix `A + iB`, via the real symmetric
/// embedding `[[A, -B], [B, A]]` whose spectrum is that of `A + iB` doubled.
pub fn hermitian_eigenvalues(m: &[Vec<Complex64>]) -> Vec<f64> {
    let n = m.len();
    let mut big = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let z = m[i][j];
            big[i][j] = z.re;
            big[i + n][j + n] = z.re;
            big[i][j + n] = -z.im;
            big[i + n][j] = z.im;
        }
    }
    symmetric_eigenvalues(big).into_iter().step_by(2).collect()
}

/// The Gram matrix `[φ(s^{-1}t)]_{s,t ∈ F}` and its smallest eigenvalue.
pub fn gram_matrix<F: GroupFunction + ?Sized>(phi: &F, base: &[Word]) -> Result<GramReport> {
    let n = base.len();
    let inverses: Vec<Word> = base.iter().map(Word::inverse).collect();
    let mut matrix = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let mut defect: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            let v = phi.value_at(&inverses[i].mul(&base[j]))?;
            if i == j {
                defect = defect.max(v.im.abs());
                matrix[i][i] = Complex64::new(v.re, 0.0);
            } else {
                let mirror = phi.value_at(&inverses[j].mul(&base[i]))?;
                defect = defect.max((mirror - v.conj()).norm());
                matrix[i][j] = v;
                matrix[j][i] = v.conj();
            }
        }
    }
    let eigenvalues = if n == 0 {
        Vec::new()
    } else {
        hermitian_eigenvalues(&matrix)
    };
    let min_eigenvalue = eigenvalues.first().copied().unwrap_or(0.0);
    let tolerance = PSD_TOLERANCE * max_row_sum(&matrix).max(1.0);
    Ok(GramReport {
        base_set: base.to_vec(),
        matrix,
        hermitian_defect: defect,
        min_eigenvalue,
        eigenvalues,
        tolerance,
        psd: min_eigenvalue >= -tolerance,
    })
}

/// Gram report of `φ_α` on the full ball of the given radius.
pub fn pd_battery_phi_alpha(ctx: &GroupContext, alpha: f64, radius: usize) -> Result<GramReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("α = {alpha} outside (0, 1)")));
    }
    if radius > MAX_BATTERY_RADIUS {
        return Err(Error::resource(format!(
            "ball radius {radius} exceeds {MAX_BATTERY_RADIUS} for the Gram battery"
        )));
    }
    let phi = RadialProfile::phi_alpha(ctx, alpha)?;
    gram_matrix(&phi, &enumerate_ball(ctx, radius)?)
}

/// `ω_φ(f^* * f) = Σ_s (f^* * f)(s) φ(s)`.
pub fn omega<F: GroupFunction + ?Sized>(phi: &F, f: &SparseFunction) -> Result<Complex64> {
    let h = f.involution().convolve(f)?;
    h.terms().map(|(s, c)| Ok(c * phi.value_at(s)?)).sum()
}
