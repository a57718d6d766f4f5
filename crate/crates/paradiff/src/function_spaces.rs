//! Sobolev and logarithmic Sobolev norms in direct and dyadic form, and
//! sampled seminorms of Zygmund, Hölder and log-Lipschitz type.

use crate::error::{invalid, Result};
use crate::spectral_core::{lam, lp_block, lp_block_count, LpMode, ScalarField};
use num_complex::Complex64;
use rayon::prelude::*;

/// `(Σ_k (1+|k|²)^s |û_k|²)^{1/2}`.
pub fn sobolev_norm(u: &ScalarField, s: f64) -> f64 {
    let grid = u.grid();
    u.spectrum()
        .iter()
        .enumerate()
        .filter(|(i, _)| !grid.is_nyquist(*i))
        .map(|(i, z)| (1.0 + grid.kabs(i).powi(2)).powf(s) * z.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `(Σ_j 2^{2js} ‖Δ_j u‖²)^{1/2}` over classical blocks.
pub fn sobolev_norm_dyadic(u: &ScalarField, s: f64) -> f64 {
    let grid = u.grid();
    let count = lp_block_count(&grid, LpMode::Classical);
    // Blocks are diagonal, so ‖Δ_j u‖² = Σ_k w_j(k)² |û_k|².
    let spec = u.spectrum();
    (0..count)
        .map(|j| {
            let e: f64 = spec
                .iter()
                .enumerate()
                .filter(|(i, _)| !grid.is_nyquist(*i))
                .map(|(i, z)| LpMode::Classical.block_weight(j, grid.kabs(i)).powi(2) * z.norm_sqr())
                .sum();
            4f64.powf(j as f64 * s) * e
        })
        .sum::<f64>()
        .sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormMode {
    Direct,
    Dyadic,
}

/// Index set of `H^{s + α log}_γ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormSpec {
    pub s: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub mode: NormMode,
}

impl NormSpec {
    pub fn new(s: f64, alpha: f64, gamma: f64, mode: NormMode) -> Result<Self> {
        if gamma.is_nan() || gamma < 1.0 {
            return invalid(format!("gamma = {gamma} < 1"));
        }
        Ok(Self { s, alpha, gamma, mode })
    }
}

/// Direct: `(Σ Λ^{2s} log^{2α}(1+γ+|k|) |û_k|²)^{1/2}`.
/// Dyadic: ℓ² norm of `2^{js}(1+j)^α ‖Δ^γ_j u‖`, the base piece counted at
/// `j = 0`.
pub fn log_sobolev_norm(u: &ScalarField, spec: &NormSpec) -> f64 {
    let grid = u.grid();
    let g = spec.gamma;
    let coeffs = u.spectrum();
    let modes = || coeffs.iter().enumerate().filter(|(i, _)| !grid.is_nyquist(*i));
    match spec.mode {
        NormMode::Direct => modes()
            .map(|(i, z)| {
                let k = grid.kabs(i);
                lam(k, g).powf(2.0 * spec.s) * (1.0 + g + k).ln().powf(2.0 * spec.alpha) * z.norm_sqr()
            })
            .sum::<f64>()
            .sqrt(),
        NormMode::Dyadic => {
            let mode = LpMode::Gamma(g);
            let count = lp_block_count(&grid, mode);
            modes()
                .map(|(i, z)| {
                    let k = grid.kabs(i);
                    let mut w = mode.base_weight(k).powi(2);
                    for j in 0..count {
                        let b = mode.block_weight(j, k);
                        if b != 0.0 {
                            let c = 2f64.powf(j as f64 * spec.s) * (1.0 + j as f64).powf(spec.alpha);
                            w += (c * b).powi(2);
                        }
                    }
                    w * z.norm_sqr()
                })
                .sum::<f64>()
                .sqrt()
        }
    }
}

/// A uniformly sampled function of one variable, either periodic (a space
/// slice) or on a closed interval (a time series).
#[derive(Clone, Debug)]
pub struct Sampled {
    values: Vec<Complex64>,
    step: f64,
    periodic: bool,
}

impl Sampled {
    pub fn new(values: Vec<Complex64>, step: f64, periodic: bool) -> Result<Self> {
        if values.len() < 4 {
            return invalid("need at least 4 samples");
        }
        if !(step > 0.0) {
            return invalid("sample step must be positive");
        }
        Ok(Self { values, step, periodic })
    }

    pub fn periodic_real(values: &[f64], step: f64) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect(), step, true)
    }

    pub fn interval_real(values: &[f64], step: f64) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect(), step, false)
    }

    /// A one-dimensional field viewed as a periodic sample.
    pub fn from_field(u: &ScalarField) -> Result<Self> {
        if u.grid().dim() != 1 {
            return invalid("sampled seminorms take one-dimensional fields");
        }
        Self::new(u.samples().to_vec(), u.grid().dx(), true)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of grid shifts with magnitude strictly below 1.
    fn max_shift(&self) -> usize {
        let m = ((1.0 / self.step).ceil() as usize).saturating_sub(1);
        let cap = if self.periodic { self.len() / 2 } else { self.len() - 1 };
        m.min(cap)
    }

    fn at(&self, i: isize) -> Option<Complex64> {
        let n = self.len() as isize;
        if self.periodic {
            Some(self.values[i.rem_euclid(n) as usize])
        } else if (0..n).contains(&i) {
            Some(self.values[i as usize])
        } else {
            None
        }
    }

    /// `sup_z |F(z, m)|` over admissible base points for shift `m` steps.
    fn sup_over_points(&self, m: usize, f: impl Fn(&Self, isize, isize) -> Option<f64> + Sync) -> f64 {
        (0..self.len() as isize).filter_map(|z| f(self, z, m as isize)).fold(0.0, f64::max)
    }

    fn sup_over_shifts(
        &self,
        weight: impl Fn(f64) -> f64 + Sync,
        diff: impl Fn(&Self, isize, isize) -> Option<f64> + Sync,
    ) -> f64 {
        (1..=self.max_shift())
            .into_par_iter()
            .map(|m| self.sup_over_points(m, &diff) / weight(m as f64 * self.step))
            .reduce(|| 0.0, f64::max)
    }
}

fn second_difference(f: &Sampled, z: isize, m: isize) -> Option<f64> {
    Some((f.at(z + m)? + f.at(z - m)? - 2.0 * f.at(z)?).norm())
}

fn first_difference(f: &Sampled, z: isize, m: isize) -> Option<f64> {
    Some((f.at(z + m)? - f.at(z)?).norm())
}

/// `sup_{0<|ζ|<1} sup_z |f(z+ζ) + f(z-ζ) - 2f(z)| / |ζ|` over grid shifts.
pub fn zygmund_seminorm(f: &Sampled) -> f64 {
    f.sup_over_shifts(|y| y, second_difference)
}

/// `sup_j 2^j ‖Δ_j f‖_∞` over classical blocks.
pub fn dyadic_zygmund_seminorm(f: &ScalarField) -> f64 {
    let count = lp_block_count(&f.grid(), LpMode::Classical);
    (0..count).map(|j| 2f64.powi(j as i32) * lp_block(f, j, LpMode::Classical).unwrap().norm_inf()).fold(0.0, f64::max)
}

/// Outcome of [`loglip_check`].
#[derive(Clone, Copy, Debug)]
pub struct LogLipReport {
    /// Smallest `C` with `|f(x+y) - f(x)| ≤ C|y| log(1+γ+1/|y|)` on samples.
    pub constant: f64,
    /// The shift at which the constant is attained.
    pub worst_shift: f64,
}

pub fn loglip_check(f: &Sampled, gamma: f64) -> Result<LogLipReport> {
    if gamma.is_nan() || gamma < 1.0 {
        return invalid(format!("gamma = {gamma} < 1"));
    }
    let (constant, worst_shift) = (1..=f.max_shift())
        .into_par_iter()
        .map(|m| {
            let y = m as f64 * f.step;
            (f.sup_over_points(m, first_difference) / (y * (1.0 + gamma + 1.0 / y).ln()), y)
        })
        .reduce(|| (0.0, 0.0), |a, b| if b.0 > a.0 { b } else { a });
    Ok(LogLipReport { constant, worst_shift })
}

/// `sup_{0<|y|<1} sup_x |f(x+y) - f(x)| / |y|^θ` over grid shifts.
pub fn holder_seminorm(f: &Sampled, theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return invalid(format!("theta = {theta} not in (0, 1)"));
    }
    Ok(f.sup_over_shifts(|y| y.powf(theta), first_difference))
}
