//! Method-of-lines solver for `∂²_t u - ∂_x(a ∂_x u) + b₀∂_t u + b₁∂_x u + c u = f`
//! on the periodic line, the operator-replacement remainders, and energy
//! traces along a trajectory.

use crate::coefficients::{CoefficientField, LowerOrderCoefficients, MollifierKernel};
use crate::energy::{gronwall_fit, tarama_state, trace_row, EnergyOperators, EnergyTrace};
use crate::error::{invalid, Error, Result};
use crate::fft;
use crate::paraops::{quantize_raw, weighted_norm, LinearOp};
use crate::parasymbols::{Linkage, Symbol};
use crate::spectral_core::{PeriodicGrid, ScalarField};
use num_complex::Complex64;
use rayon::prelude::*;
use std::fmt;
use std::sync::Arc;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Source term `f(t)`, returning samples on the grid.
pub type Source = Arc<dyn Fn(f64) -> Vec<Complex64> + Send + Sync>;

/// Largest number of stored samples along a trajectory.
pub const MAX_SAMPLES: usize = 512;

/// Data of the Cauchy problem.
#[derive(Clone)]
pub struct CauchyProblem {
    pub a: CoefficientField,
    pub lower: LowerOrderCoefficients,
    pub u0: ScalarField,
    pub u1: ScalarField,
    pub source: Option<Source>,
    pub final_time: f64,
    /// Requested step; `None` uses the CFL limit.
    pub dt: Option<f64>,
}

impl fmt::Debug for CauchyProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CauchyProblem")
            .field("n", &self.a.grid().n())
            .field("final_time", &self.final_time)
            .field("dt", &self.dt)
            .field("has_source", &self.source.is_some())
            .finish()
    }
}

impl CauchyProblem {
    pub fn new(a: CoefficientField, u0: ScalarField, u1: ScalarField, final_time: f64) -> Result<Self> {
        let grid = a.grid();
        if u0.grid() != grid || u1.grid() != grid {
            return Err(Error::GridMismatch);
        }
        if !(final_time > 0.0) {
            return invalid("final time must be positive");
        }
        if !(a.lambda0 > 0.0) {
            return invalid("principal coefficient must be bounded below by a positive constant");
        }
        let lower = LowerOrderCoefficients::zero(grid, a.final_time());
        Ok(Self { a, lower, u0, u1, source: None, final_time, dt: None })
    }

    pub fn with_lower(mut self, lower: LowerOrderCoefficients) -> Result<Self> {
        if lower.b.iter().chain([&lower.c]).any(|f| f.grid() != self.grid()) {
            return Err(Error::GridMismatch);
        }
        self.lower = lower;
        Ok(self)
    }

    pub fn with_source(mut self, f: Source) -> Self {
        self.source = Some(f);
        self
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = Some(dt);
        self
    }

    pub fn grid(&self) -> PeriodicGrid {
        self.a.grid()
    }

    /// `0.25 Δx / √Λ₀`.
    pub fn cfl_limit(&self) -> f64 {
        0.25 * self.grid().dx() / self.a.big_lambda0.sqrt()
    }

    /// Step count and the uniform step that divides `[0, T]`.
    pub fn steps(&self) -> Result<(usize, f64)> {
        let limit = self.cfl_limit();
        let dt = self.dt.unwrap_or(limit);
        if !(dt > 0.0) || dt > limit * (1.0 + 1e-12) {
            return Err(Error::Cfl { dt, limit });
        }
        let steps = (self.final_time / dt - 1e-9).ceil().max(1.0) as usize;
        Ok((steps, self.final_time / steps as f64))
    }

    fn source_at(&self, t: f64) -> Option<Vec<Complex64>> {
        self.source.as_ref().map(|f| spectrum_of(f(t)))
    }
}

fn spectrum_of(mut x: Vec<Complex64>) -> Vec<Complex64> {
    let n = x.len();
    fft::forward(&mut x);
    let s = 1.0 / n as f64;
    x.iter_mut().for_each(|z| *z *= s);
    x[n / 2] = ZERO;
    x
}

fn samples_of(mut x: Vec<Complex64>) -> Vec<Complex64> {
    fft::inverse(&mut x);
    x
}

/// Zeroes modes with `|k| > n/3` and the Nyquist line.
fn dealias(grid: &PeriodicGrid, x: &mut [Complex64]) {
    let cut = grid.n() as f64 / 3.0;
    for (i, z) in x.iter_mut().enumerate() {
        if grid.is_nyquist(i) || grid.kabs(i) > cut {
            *z = ZERO;
        }
    }
}

fn derivative(grid: &PeriodicGrid, x: &[Complex64]) -> Vec<Complex64> {
    x.iter()
        .enumerate()
        .map(|(i, z)| if grid.is_nyquist(i) { ZERO } else { z * Complex64::new(0.0, grid.freq(i) as f64) })
        .collect()
}

/// Spectrum of `f·w` for real samples `f` and spectrum `w`; with `filter`,
/// both factors and the product are truncated by the 2/3 rule.
fn product(grid: &PeriodicGrid, f: &[f64], w: &[Complex64], filter: bool) -> Vec<Complex64> {
    let mut fw: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut ww = w.to_vec();
    if filter {
        fw = spectrum_of(fw);
        dealias(grid, &mut fw);
        fw = samples_of(fw);
        dealias(grid, &mut ww);
    }
    let x = samples_of(ww);
    let mut out = spectrum_of(x.iter().zip(&fw).map(|(a, b)| a * b).collect());
    if filter {
        dealias(grid, &mut out);
    }
    out
}

/// Spectrum of the spatial part `-∂_x(a∂_x u) + b₀∂_t u + b₁∂_x u + c u`.
fn spatial(p: &CauchyProblem, u: &[Complex64], dtu: &[Complex64], t: f64, filter: bool) -> Vec<Complex64> {
    let grid = p.grid();
    let a = p.a.slice_at(t);
    let ux = derivative(&grid, u);
    let mut out: Vec<Complex64> = derivative(&grid, &product(&grid, &a, &ux, filter)).iter().map(|z| -z).collect();
    if !p.lower.is_zero() {
        let b0 = p.lower.b[0].slice_at(t);
        let b1 = p.lower.b[1].slice_at(t);
        let c = p.lower.c.slice_at(t);
        for term in [product(&grid, &b0, dtu, filter), product(&grid, &b1, &ux, filter), product(&grid, &c, u, filter)]
        {
            out.iter_mut().zip(term).for_each(|(o, z)| *o += z);
        }
    }
    out
}

/// The spatial part of `L` at time `t`, computed without filtering.
pub fn apply_l(p: &CauchyProblem, u: &ScalarField, dtu: &ScalarField, t: f64) -> Result<ScalarField> {
    let grid = p.grid();
    if u.grid() != grid || dtu.grid() != grid {
        return Err(Error::GridMismatch);
    }
    ScalarField::from_spectrum(grid, spatial(p, u.spectrum(), dtu.spectrum(), t, false))
}

/// `∫ a|∂_x u|² + |∂_t u|²` (normalized), with the dealiased coefficient.
pub fn classical_energy(p: &CauchyProblem, u: &ScalarField, dtu: &ScalarField, t: f64) -> f64 {
    let grid = p.grid();
    let ux = derivative(&grid, u.spectrum());
    let aux = product(&grid, &p.a.slice_at(t), &ux, true);
    let pot: f64 = aux.iter().zip(&ux).map(|(a, b)| (a * b.conj()).re).sum();
    pot + dtu.norm_l2().powi(2)
}

/// Sampled solution `(u, ∂_t u)`.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub u: Vec<ScalarField>,
    pub dtu: Vec<ScalarField>,
    pub dt: f64,
    pub steps: usize,
    /// `‖S u - S_h u‖_{H^{-1/2}}` per sample: the unfiltered spatial operator
    /// minus the one the integrator used.
    pub residuals: Vec<f64>,
}

impl Trajectory {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `sup_t (‖u‖_{H^{σ+1/2}} + ‖∂_t u‖_{H^{σ-1/2}})` over the initial value
    /// of the same pair.
    pub fn norm_ratio(&self, sigma: f64) -> f64 {
        let pair =
            |i: usize| weighted_norm(&self.u[i], 1.0, sigma + 0.5) + weighted_norm(&self.dtu[i], 1.0, sigma - 0.5);
        let first = pair(0);
        (0..self.len()).map(pair).fold(0.0, f64::max) / first
    }
}

/// Classical RK4 on `(u, ∂_t u)` with 2/3-rule filtering of products and of
/// the state after every step.
pub fn solve(p: &CauchyProblem) -> Result<Trajectory> {
    let grid = p.grid();
    let (steps, dt) = p.steps()?;
    let every = steps.div_ceil(MAX_SAMPLES);
    let mut u = p.u0.spectrum().to_vec();
    let mut v = p.u1.spectrum().to_vec();
    dealias(&grid, &mut u);
    dealias(&grid, &mut v);
    let rhs = |u: &[Complex64], v: &[Complex64], t: f64| -> (Vec<Complex64>, Vec<Complex64>) {
        let mut acc = spatial(p, u, v, t, true);
        acc.iter_mut().for_each(|z| *z = -*z);
        if let Some(f) = p.source_at(t) {
            acc.iter_mut().zip(f).for_each(|(a, b)| *a += b);
        }
        (v.to_vec(), acc)
    };
    let axpy = |x: &[Complex64], h: f64, d: &[Complex64]| -> Vec<Complex64> {
        x.iter().zip(d).map(|(a, b)| a + b * h).collect()
    };
    let mut traj = Trajectory { times: vec![], u: vec![], dtu: vec![], dt, steps, residuals: vec![] };
    let record = |t: f64, u: &[Complex64], v: &[Complex64], traj: &mut Trajectory| -> Result<()> {
        let uf = ScalarField::from_spectrum(grid, u.to_vec())?;
        let vf = ScalarField::from_spectrum(grid, v.to_vec())?;
        let full = spatial(p, u, v, t, false);
        let used = spatial(p, u, v, t, true);
        let diff = ScalarField::from_spectrum(grid, full.iter().zip(&used).map(|(a, b)| a - b).collect())?;
        traj.residuals.push(weighted_norm(&diff, 1.0, -0.5));
        traj.times.push(t);
        traj.u.push(uf);
        traj.dtu.push(vf);
        Ok(())
    };
    record(0.0, &u, &v, &mut traj)?;
    for s in 0..steps {
        let t = s as f64 * dt;
        let (k1u, k1v) = rhs(&u, &v, t);
        let (k2u, k2v) = rhs(&axpy(&u, dt / 2.0, &k1u), &axpy(&v, dt / 2.0, &k1v), t + dt / 2.0);
        let (k3u, k3v) = rhs(&axpy(&u, dt / 2.0, &k2u), &axpy(&v, dt / 2.0, &k2v), t + dt / 2.0);
        let (k4u, k4v) = rhs(&axpy(&u, dt, &k3u), &axpy(&v, dt, &k3v), t + dt);
        for i in 0..u.len() {
            u[i] += dt / 6.0 * (k1u[i] + 2.0 * k2u[i] + 2.0 * k3u[i] + k4u[i]);
            v[i] += dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
        }
        dealias(&grid, &mut u);
        dealias(&grid, &mut v);
        let t = (s + 1) as f64 * dt;
        if u.iter().chain(&v).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { t });
        }
        if (s + 1) % every == 0 || s + 1 == steps {
            record(t, &u, &v, &mut traj)?;
        }
    }
    Ok(traj)
}

/// `R u = ∂_x(a ∂_x u) - γ²u + Re T_{α̃} u` at time slice `ti` of `α̃`.
pub fn remainder_r(p: &CauchyProblem, alpha_tilde: &Symbol, ti: usize) -> Result<LinearOp> {
    let grid = p.grid();
    if alpha_tilde.grid() != grid {
        return Err(Error::GridMismatch);
    }
    let t = *alpha_tilde.times().get(ti).ok_or(Error::TimeIndex { index: ti, len: alpha_tilde.n_times() })?;
    let gamma = alpha_tilde.gamma;
    let a = p.a.slice_at(t);
    let d = LinearOp::derivative(&grid);
    let div = LinearOp::compose(vec![d.clone(), LinearOp::pointwise(&a), d]);
    let ta = Arc::new(quantize_raw(&alpha_tilde.at_time(ti)?)?).at(0)?;
    Ok(LinearOp::sum(vec![(1.0, div), (-gamma * gamma, LinearOp::Identity), (1.0, ta.re())]))
}

/// `B̃ v = b·v - T_b v` for a Hölder coefficient `b` with exponent `θ`.
pub fn remainder_b(grid: PeriodicGrid, b: &[f64], theta: f64, gamma: f64) -> Result<LinearOp> {
    if !(theta > 0.5 && theta < 1.0) {
        return invalid(format!("theta = {theta} not in (1/2, 1)"));
    }
    let tb = Arc::new(quantize_raw(&Symbol::function_of_x(grid, gamma, b)?)?).at(0)?;
    Ok(LinearOp::sub(LinearOp::pointwise(b), tb))
}

/// Parameters of an energy trace.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergySettings {
    pub gamma: f64,
    pub linkage: Linkage,
    pub kernel: MollifierKernel,
    /// Evaluate the energy at every `stride`-th stored sample (and the last).
    pub stride: usize,
}

impl Default for EnergySettings {
    fn default() -> Self {
        Self { gamma: 1.0, linkage: Linkage::Banded, kernel: MollifierKernel::default(), stride: 8 }
    }
}

/// Energy, norm pair and `‖Lu‖` bound along a trajectory, with the Gronwall fit.
pub fn energy_trace(p: &CauchyProblem, traj: &Trajectory, settings: &EnergySettings) -> Result<EnergyTrace> {
    shifted_trace(p, traj, 0.0, settings)
}

/// The σ-shifted energy built from `T_{Λ^σ α^{±1/4}}`, with the pair
/// `‖u‖_{H^{σ+1/2}} + ‖∂_t u‖_{H^{σ-1/2}}`.
pub fn sigma_shifted_trace(
    p: &CauchyProblem,
    traj: &Trajectory,
    sigma: f64,
    settings: &EnergySettings,
) -> Result<EnergyTrace> {
    if sigma <= -0.5 {
        return invalid(format!("sigma = {sigma} must exceed -1/2"));
    }
    shifted_trace(p, traj, sigma, settings)
}

fn shifted_trace(p: &CauchyProblem, traj: &Trajectory, sigma: f64, settings: &EnergySettings) -> Result<EnergyTrace> {
    if traj.is_empty() {
        return invalid("empty trajectory");
    }
    let stride = settings.stride.max(1);
    let mut idx: Vec<usize> = (0..traj.len()).step_by(stride).collect();
    if *idx.last().unwrap() != traj.len() - 1 {
        idx.push(traj.len() - 1);
    }
    let rows: Vec<_> = idx
        .par_iter()
        .map(|&i| -> Result<_> {
            let t = traj.times[i];
            let ops = EnergyOperators::build(&p.a, t, settings.gamma, settings.linkage, &settings.kernel, sigma)?;
            let st = tarama_state(&ops, &traj.u[i], &traj.dtu[i])?;
            let f_norm = match p.source.as_ref() {
                Some(f) => weighted_norm(&ScalarField::new(p.grid(), f(t))?, 1.0, -0.5),
                None => 0.0,
            };
            Ok(trace_row(&st, &traj.u[i], &traj.dtu[i], sigma, f_norm, traj.residuals[i]))
        })
        .collect::<Result<_>>()?;
    let mut trace = EnergyTrace::default();
    for r in rows {
        trace.push(r)?;
    }
    trace.fit = Some(gronwall_fit(&trace)?);
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_core::make_grid;

    #[test]
    fn laplacian_on_single_mode() {
        let g = make_grid(32, 1).unwrap();
        let a = CoefficientField::constant(g, 1.0, 1.0, 2).unwrap();
        let k = 5.0;
        let u = ScalarField::from_fn(g, |x| Complex64::new(0.0, k * x[0]).exp());
        let p = CauchyProblem::new(a, u.clone(), ScalarField::zeros(g), 1.0).unwrap();
        let lu = apply_l(&p, &u, &ScalarField::zeros(g), 0.0).unwrap();
        let want = u.scale(Complex64::new(k * k, 0.0));
        assert!(lu.sub(&want).unwrap().norm_inf() < 1e-11);
    }

    #[test]
    fn cfl_is_enforced() {
        let g = make_grid(32, 1).unwrap();
        let a = CoefficientField::constant(g, 1.0, 1.0, 2).unwrap();
        let p = CauchyProblem::new(a, ScalarField::zeros(g), ScalarField::zeros(g), 1.0).unwrap().with_dt(1.0);
        assert!(matches!(solve(&p), Err(Error::Cfl { .. })));
    }
}
