//! Paradifferential quantization on the lattice, composite linear maps,
//! order fits, calculus remainders and positivity searches.
//!
//! `T_a` acts on spectra: `(T_a u)^(k+η) = Σ_k σ̂_a(η, k) û(k)` where
//! `σ̂_a(·, k)` is the x-spectrum of the smoothed symbol's column at `k`.
//! Outputs that leave the lattice are dropped.

use crate::error::{invalid, Error, Result};
use crate::fft;
use crate::fit;
use crate::parasymbols::{build_cutoff, smooth_symbol, AdmissibleCutoff, Symbol};
use crate::random;
use crate::spectral_core::{lam, random_field, random_phase_field, PeriodicGrid, ScalarField};
use num_complex::Complex64;
use rayon::prelude::*;
use std::sync::Arc;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Sparse columns: for input index `c`, the pairs `(output index, weight)`.
#[derive(Clone, Debug)]
struct SparseCols {
    cols: Vec<Vec<(u32, Complex64)>>,
}

impl SparseCols {
    fn apply(&self, u: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; u.len()];
        for (c, col) in self.cols.iter().enumerate() {
            let x = u[c];
            if x == ZERO {
                continue;
            }
            for &(r, w) in col {
                out[r as usize] += w * x;
            }
        }
        out
    }

    fn transpose_conj(&self) -> SparseCols {
        let mut cols = vec![Vec::new(); self.cols.len()];
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, w) in col {
                cols[r as usize].push((c as u32, w.conj()));
            }
        }
        SparseCols { cols }
    }
}

/// `T_σ` for a smoothed symbol, one sparse matrix per time slice.
#[derive(Clone, Debug)]
pub struct ParaOp {
    grid: PeriodicGrid,
    pub gamma: f64,
    pub order: f64,
    pub log_order: f64,
    slices: Vec<SparseCols>,
}

/// Quantizes a smoothed symbol.
pub fn quantize(sigma: &Symbol) -> Result<ParaOp> {
    let cut = *sigma.cutoff().ok_or(Error::NotSmoothed)?;
    let grid = sigma.grid();
    let n = grid.n();
    let h = n as i64 / 2;
    let slices = (0..sigma.n_times())
        .map(|ti| {
            let cols = (0..n)
                .into_par_iter()
                .map(|kc| {
                    if kc == n / 2 {
                        return Vec::new();
                    }
                    let k = grid.freq(kc);
                    let spec = sigma.column_spectrum(ti, kc);
                    let reach = cut.support(k as f64);
                    let mut col = Vec::new();
                    for (e, &z) in spec.iter().enumerate() {
                        let eta = grid.freq(e);
                        if e == n / 2 || (eta as f64).abs() >= reach || cut.eval(eta as f64, k as f64) == 0.0 {
                            continue;
                        }
                        let out = k + eta;
                        if out.abs() < h {
                            col.push((grid.index_of(out).unwrap() as u32, z));
                        }
                    }
                    col
                })
                .collect();
            SparseCols { cols }
        })
        .collect();
    Ok(ParaOp { grid, gamma: sigma.gamma, order: sigma.order, log_order: sigma.log_order, slices })
}

/// Smooths with the default cutoff for the symbol's `γ`, then quantizes.
pub fn quantize_raw(a: &Symbol) -> Result<ParaOp> {
    let psi = build_cutoff(a.gamma, &a.grid())?;
    quantize(&smooth_symbol(a, &psi)?)
}

impl ParaOp {
    pub fn grid(&self) -> PeriodicGrid {
        self.grid
    }

    pub fn n_times(&self) -> usize {
        self.slices.len()
    }

    fn slice(&self, ti: usize) -> Result<&SparseCols> {
        self.slices.get(ti).ok_or(Error::TimeIndex { index: ti, len: self.slices.len() })
    }

    pub fn apply_spectrum(&self, u: &[Complex64], ti: usize) -> Result<Vec<Complex64>> {
        if u.len() != self.grid.n() {
            return Err(Error::GridMismatch);
        }
        Ok(self.slice(ti)?.apply(u))
    }

    pub fn apply(&self, u: &ScalarField, ti: usize) -> Result<ScalarField> {
        if u.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        ScalarField::from_spectrum(self.grid, self.apply_spectrum(u.spectrum(), ti)?)
    }

    /// Exact L² adjoint of the realized map.
    pub fn adjoint(&self) -> ParaOp {
        ParaOp { slices: self.slices.iter().map(SparseCols::transpose_conj).collect(), ..self.clone() }
    }

    /// The map at one time slice, as a [`LinearOp`].
    pub fn at(self: &Arc<Self>, ti: usize) -> Result<LinearOp> {
        self.slice(ti)?;
        Ok(LinearOp::Para(self.clone(), ti))
    }

    /// Dense matrix of one slice, row-major, for small cross-checks.
    pub fn dense(&self, ti: usize) -> Result<Vec<Complex64>> {
        let n = self.grid.n();
        let mut m = vec![ZERO; n * n];
        for (c, col) in self.slice(ti)?.cols.iter().enumerate() {
            for &(r, w) in col {
                m[r as usize * n + c] += w;
            }
        }
        Ok(m)
    }
}

/// Linear map on lattice spectra built from paradifferential operators,
/// Fourier multipliers and pointwise products.
#[derive(Clone, Debug)]
pub enum LinearOp {
    Identity,
    Para(Arc<ParaOp>, usize),
    /// Diagonal in frequency, indexed in FFT order.
    Multiplier(Arc<Vec<Complex64>>),
    /// Multiplication by a function sampled on the grid.
    Pointwise(Arc<Vec<Complex64>>),
    Sum(Vec<(Complex64, LinearOp)>),
    /// Applied right to left: `Compose([A, B]) u = A(B u)`.
    Compose(Vec<LinearOp>),
}

impl LinearOp {
    pub fn multiplier(grid: &PeriodicGrid, m: impl Fn(i64) -> Complex64) -> LinearOp {
        LinearOp::Multiplier(Arc::new(
            (0..grid.n()).map(|i| if grid.is_nyquist(i) { ZERO } else { m(grid.freq(i)) }).collect(),
        ))
    }

    pub fn real_multiplier(grid: &PeriodicGrid, m: impl Fn(i64) -> f64) -> LinearOp {
        Self::multiplier(grid, |k| Complex64::new(m(k), 0.0))
    }

    /// `∂_x` as a multiplier.
    pub fn derivative(grid: &PeriodicGrid) -> LinearOp {
        Self::multiplier(grid, |k| Complex64::new(0.0, k as f64))
    }

    pub fn pointwise(values: &[f64]) -> LinearOp {
        LinearOp::Pointwise(Arc::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect()))
    }

    pub fn sum(terms: Vec<(f64, LinearOp)>) -> LinearOp {
        LinearOp::Sum(terms.into_iter().map(|(c, op)| (Complex64::new(c, 0.0), op)).collect())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: LinearOp, b: LinearOp) -> LinearOp {
        Self::sum(vec![(1.0, a), (-1.0, b)])
    }

    pub fn then(self, outer: LinearOp) -> LinearOp {
        LinearOp::Compose(vec![outer, self])
    }

    pub fn compose(ops: Vec<LinearOp>) -> LinearOp {
        LinearOp::Compose(ops)
    }

    pub fn scaled(self, c: Complex64) -> LinearOp {
        LinearOp::Sum(vec![(c, self)])
    }

    pub fn apply_spectrum(&self, u: &[Complex64]) -> Vec<Complex64> {
        match self {
            LinearOp::Identity => u.to_vec(),
            LinearOp::Para(p, ti) => p.slices[*ti].apply(u),
            LinearOp::Multiplier(m) => u.iter().zip(m.iter()).map(|(a, b)| a * b).collect(),
            LinearOp::Pointwise(f) => {
                let n = u.len();
                let mut x = u.to_vec();
                fft::inverse(&mut x);
                for (a, b) in x.iter_mut().zip(f.iter()) {
                    *a *= b;
                }
                fft::forward(&mut x);
                let s = 1.0 / n as f64;
                x[n / 2] = ZERO;
                x.iter_mut().for_each(|z| *z *= s);
                x
            }
            LinearOp::Sum(terms) => {
                let mut acc = vec![ZERO; u.len()];
                for (c, op) in terms {
                    for (a, b) in acc.iter_mut().zip(op.apply_spectrum(u)) {
                        *a += c * b;
                    }
                }
                acc
            }
            LinearOp::Compose(ops) => ops.iter().rev().fold(u.to_vec(), |v, op| op.apply_spectrum(&v)),
        }
    }

    pub fn apply(&self, u: &ScalarField) -> Result<ScalarField> {
        ScalarField::from_spectrum(u.grid(), self.apply_spectrum(u.spectrum()))
    }

    /// Exact adjoint with respect to the normalized L² product.
    pub fn adjoint(&self) -> LinearOp {
        match self {
            LinearOp::Identity => LinearOp::Identity,
            LinearOp::Para(p, ti) => LinearOp::Para(Arc::new(p.adjoint()), *ti),
            LinearOp::Multiplier(m) => LinearOp::Multiplier(Arc::new(m.iter().map(|z| z.conj()).collect())),
            LinearOp::Pointwise(f) => LinearOp::Pointwise(Arc::new(f.iter().map(|z| z.conj()).collect())),
            LinearOp::Sum(terms) => LinearOp::Sum(terms.iter().map(|(c, op)| (c.conj(), op.adjoint())).collect()),
            LinearOp::Compose(ops) => LinearOp::Compose(ops.iter().rev().map(|op| op.adjoint()).collect()),
        }
    }

    /// `(A + A*)/2`.
    pub fn re(&self) -> LinearOp {
        LinearOp::sum(vec![(0.5, self.clone()), (0.5, self.adjoint())])
    }
}

/// Result of [`operator_order_fit`].
#[derive(Clone, Debug)]
pub struct OrderFit {
    pub bands: Vec<i32>,
    /// `sqrt(Σ‖P u‖² / Σ‖u‖²)` over the trials of each band.
    pub ratios: Vec<f64>,
    /// Slope of the power-law fit `log r ≈ m log Λ + c`.
    pub m: f64,
    /// Log exponent of the fit with the extra `δ log log` term.
    pub delta: f64,
    /// Slope of the fit with the log term. Over a handful of bands the two
    /// regressors are nearly collinear, so this is reported, not used.
    pub m_with_log: f64,
    /// RMS residual of the power-law fit.
    pub residual: f64,
}

/// Default bands `2 ..= log₂(n/2) - 2`.
pub fn default_bands(grid: &PeriodicGrid) -> Vec<i32> {
    let top = (grid.n() / 2).ilog2() as i32 - 2;
    (2..=top).collect()
}

/// Fits `log(‖P u_j‖/‖u_j‖) ≈ m log Λ_j + c` over random unit-modulus-phase
/// fields supported on the γ-bands `2^j ≤ Λ < 2^{j+1}`, where subscript `j`
/// means the mean over the band's lattice points. `δ` comes from a second
/// fit with an added `δ log log(1+γ+|k|)_j` column.
pub fn operator_order_fit(
    p: &LinearOp,
    grid: &PeriodicGrid,
    gamma: f64,
    bands: &[i32],
    trials: usize,
    seed: u64,
) -> Result<OrderFit> {
    if bands.len() < 4 {
        return invalid("an order fit needs at least four bands");
    }
    if trials == 0 {
        return invalid("an order fit needs at least one trial");
    }
    let top = grid.max_kabs();
    for &j in bands {
        if j < 0 || 2f64.powi(j) > lam(top, gamma) {
            return invalid(format!("band {j} lies outside the grid"));
        }
    }
    let ratios: Vec<f64> = bands
        .par_iter()
        .map(|&j| {
            let mut rng = random::substream(seed, "order-fit", j as u64);
            let (lo, hi) = (2f64.powi(j), 2f64.powi(j + 1));
            let (mut num, mut den) = (0.0, 0.0);
            for _ in 0..trials {
                let u = random_phase_field(*grid, &mut rng, |k| {
                    let l = lam(k, gamma);
                    l >= lo && l < hi
                });
                let pu = p.apply_spectrum(u.spectrum());
                num += pu.iter().map(|z| z.norm_sqr()).sum::<f64>();
                den += u.norm_l2().powi(2);
            }
            (num / den).sqrt()
        })
        .collect();
    if ratios.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return invalid("operator vanishes on a band; order is undefined");
    }
    // Regress on band averages of log Λ and log log(1 + γ + |k|) over the
    // lattice points of each band rather than on j, so lattice effects at
    // low bands are not absorbed into δ.
    let (mut x, mut l) = (vec![0.0; bands.len()], vec![0.0; bands.len()]);
    for (b, &j) in bands.iter().enumerate() {
        let (lo, hi) = (2f64.powi(j), 2f64.powi(j + 1));
        let mut count = 0usize;
        for i in (0..grid.len()).filter(|&i| !grid.is_nyquist(i)) {
            let kabs = grid.kabs(i);
            let lk = lam(kabs, gamma);
            if lk >= lo && lk < hi {
                x[b] += lk.ln();
                l[b] += (1.0 + gamma + kabs).ln().ln();
                count += 1;
            }
        }
        x[b] /= count as f64;
        l[b] /= count as f64;
    }
    let y: Vec<f64> = ratios.iter().map(|r| r.ln()).collect();
    let (beta, _) = fit::least_squares(&[x.clone(), l, vec![1.0; x.len()]], &y);
    let (pure, residual) = fit::least_squares(&[x, vec![1.0; y.len()]], &y);
    Ok(OrderFit { bands: bands.to_vec(), ratios, m: pure[0], delta: beta[1], m_with_log: beta[0], residual })
}

/// Largest `‖P u‖/‖u‖` over random fields, used to certify that a map is
/// zero up to rounding.
pub fn sampled_norm(p: &LinearOp, grid: &PeriodicGrid, trials: usize, seed: u64) -> f64 {
    (0..trials)
        .map(|i| {
            let mut rng = random::substream(seed, "sampled-norm", i as u64);
            let u = random_field(*grid, &mut rng, |_| 1.0);
            let pu = p.apply_spectrum(u.spectrum());
            pu.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() / u.norm_l2()
        })
        .fold(0.0, f64::max)
}

/// `R_∘ = T_a T_b - T_{ab} + i T_{∂_ξσ_a ∂_xσ_b}` at one time slice. `a` and
/// `b` are unsmoothed; the cutoff is applied to every symbol that is
/// quantized, including the product and the correction.
pub fn composition_remainder(a: &Symbol, b: &Symbol, psi: &AdmissibleCutoff, ti: usize) -> Result<LinearOp> {
    let (a, b) = (a.at_time(ti)?, b.at_time(ti)?);
    let sa = smooth_symbol(&a, psi)?;
    let sb = smooth_symbol(&b, psi)?;
    let ta = Arc::new(quantize(&sa)?);
    let tb = Arc::new(quantize(&sb)?);
    let tab = Arc::new(quantize(&smooth_symbol(&a.mul(&b)?, psi)?)?);
    let corr = sa.xi_derivative().mul(&sb.x_derivative())?.unsmoothed();
    let tc = Arc::new(quantize(&smooth_symbol(&corr, psi)?)?);
    Ok(LinearOp::Sum(vec![
        (Complex64::new(1.0, 0.0), LinearOp::compose(vec![ta.at(0)?, tb.at(0)?])),
        (Complex64::new(-1.0, 0.0), tab.at(0)?),
        (Complex64::new(0.0, 1.0), tc.at(0)?),
    ]))
}

/// `R_* = (T_a)* - T_{ā} + i T_{∂_ξ∂_x σ̄_a}` at one time slice.
pub fn adjoint_remainder(a: &Symbol, psi: &AdmissibleCutoff, ti: usize) -> Result<LinearOp> {
    let a = a.at_time(ti)?;
    let sa = smooth_symbol(&a, psi)?;
    let ta = quantize(&sa)?;
    let tbar = Arc::new(quantize(&smooth_symbol(&a.conj(), psi)?)?);
    let corr = sa.x_derivative().xi_derivative().conj().unsmoothed();
    let tc = Arc::new(quantize(&smooth_symbol(&corr, psi)?)?);
    Ok(LinearOp::Sum(vec![
        (Complex64::new(1.0, 0.0), Arc::new(ta.adjoint()).at(0)?),
        (Complex64::new(-1.0, 0.0), tbar.at(0)?),
        (Complex64::new(0.0, 1.0), tc.at(0)?),
    ]))
}

/// Rayleigh minimum of `Re⟨T_a u, u⟩ / ‖u‖²_{H^{m/2}_γ}` at one `γ`.
#[derive(Clone, Debug, PartialEq)]
pub struct RayleighEstimate {
    pub gamma: f64,
    /// Smallest quotient over the random fields.
    pub sampled_min: f64,
    /// Quotient after power iteration on the symmetrized operator.
    pub iterated_min: f64,
}

impl RayleighEstimate {
    pub fn min(&self) -> f64 {
        self.sampled_min.min(self.iterated_min)
    }
}

/// Result of [`positivity_gamma_search`].
#[derive(Clone, Debug)]
pub struct PositivityReport {
    pub gamma_star: Option<f64>,
    pub lambda1: f64,
    pub trace: Vec<RayleighEstimate>,
    /// Once the minimum clears the threshold it stays cleared.
    pub monotone: bool,
    pub threshold: f64,
}

/// Estimates the Rayleigh minimum of a real-symbol operator of order `m`.
pub fn rayleigh_minimum(
    t: &LinearOp,
    grid: &PeriodicGrid,
    gamma: f64,
    m: f64,
    trials: usize,
    seed: u64,
) -> RayleighEstimate {
    // S = Λ^{-m/2} Re T Λ^{-m/2}, so that quotients in w = Λ^{m/2}u are L² ones.
    let w = LinearOp::real_multiplier(grid, |k| lam(k as f64, gamma).powf(-m / 2.0));
    let s = LinearOp::compose(vec![w.clone(), t.re(), w]);
    let quotient = |v: &[Complex64]| {
        let sv = s.apply_spectrum(v);
        let num: f64 = sv.iter().zip(v).map(|(a, b)| (a * b.conj()).re).sum();
        let den: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        num / den
    };
    let bands: Vec<i32> = {
        let top = lam(grid.max_kabs(), gamma).log2().floor() as i32;
        (gamma.log2().floor() as i32..=top).collect()
    };
    let samples: Vec<(f64, Vec<Complex64>)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = random::substream(seed, "rayleigh", i as u64);
            // Alternate flat fields with fields confined to a single γ-band.
            let v = if i % 2 == 0 {
                random_field(*grid, &mut rng, |_| 1.0)
            } else {
                let j = bands[(i / 2) % bands.len()];
                let (lo, hi) = (2f64.powi(j), 2f64.powi(j + 1));
                random_field(*grid, &mut rng, move |k| {
                    let l = lam(k, gamma);
                    if l >= lo && l < hi {
                        1.0
                    } else {
                        0.0
                    }
                })
            };
            let v = v.spectrum().to_vec();
            (quotient(&v), v)
        })
        .collect();
    let (sampled_min, start) =
        samples.iter().min_by(|a, b| a.0.partial_cmp(&b.0).unwrap()).map(|(q, v)| (*q, v.clone())).unwrap();
    // Shifted power iteration on c - S drives toward the bottom of the spectrum.
    let shift = {
        let mut v = start.clone();
        let mut est = 0.0;
        for _ in 0..10 {
            let sv = s.apply_spectrum(&v);
            let nrm = sv.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            est = nrm / vn;
            if nrm == 0.0 {
                break;
            }
            v = sv.iter().map(|z| z / nrm).collect();
        }
        est
    };
    let mut v = start;
    let mut best = sampled_min;
    for _ in 0..10 {
        let sv = s.apply_spectrum(&v);
        let next: Vec<Complex64> = v.iter().zip(&sv).map(|(a, b)| a * shift - b).collect();
        let nrm = next.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nrm == 0.0 {
            break;
        }
        v = next.iter().map(|z| z / nrm).collect();
        best = best.min(quotient(&v));
    }
    RayleighEstimate { gamma, sampled_min, iterated_min: best }
}

/// Doubling search over `γ ∈ {1, 2, …, 2¹⁰}` for the first `γ` where the
/// Rayleigh minimum of `T_{a(γ)}` reaches `λ₀/4`. An exhausted search is
/// reported through `gamma_star = None`.
pub fn positivity_gamma_search(
    family: impl Fn(f64) -> Result<Symbol>,
    m: f64,
    lambda0: f64,
    trials: usize,
    seed: u64,
) -> Result<PositivityReport> {
    if trials < 100 {
        return invalid("the positivity search uses at least 100 random fields");
    }
    let threshold = lambda0 / 4.0;
    let mut trace = Vec::new();
    let mut gamma_star = None;
    let mut lambda1 = f64::NAN;
    for e in 0..=10 {
        let gamma = 2f64.powi(e);
        let a = family(gamma)?;
        let grid = a.grid();
        let op = Arc::new(quantize_raw(&a)?);
        let est = rayleigh_minimum(&op.at(0)?, &grid, gamma, m, trials, seed);
        if gamma_star.is_none() && est.min() >= threshold {
            gamma_star = Some(gamma);
            lambda1 = est.min();
        }
        trace.push(est);
        // Check the next two candidates for the monotonicity assertion.
        if let Some(g) = gamma_star {
            if gamma >= 4.0 * g {
                break;
            }
        }
    }
    let first = trace.iter().position(|r| r.min() >= threshold);
    let monotone = first.is_none_or(|i| trace[i..].iter().all(|r| r.min() >= threshold));
    Ok(PositivityReport { gamma_star, lambda1, trace, monotone, threshold })
}

/// Result of [`garding_equivalence_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct GardingReport {
    pub c1: f64,
    pub c2: f64,
}

impl GardingReport {
    pub fn spread(&self) -> f64 {
        self.c2 / self.c1
    }
}

/// Range of `‖T_a u‖ / ‖u‖_{H^m_γ}` over random fields.
pub fn garding_equivalence_check(
    t: &LinearOp,
    grid: &PeriodicGrid,
    gamma: f64,
    m: f64,
    trials: usize,
    seed: u64,
) -> Result<GardingReport> {
    if trials == 0 {
        return invalid("need at least one trial");
    }
    let top = lam(grid.max_kabs(), gamma).log2().floor() as i32;
    let ratios: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = random::substream(seed, "garding", i as u64);
            let u = if i % 2 == 0 {
                random_field(*grid, &mut rng, |k| lam(k, gamma).powf(-m - 0.5))
            } else {
                let j = (i / 2) as i32 % (top + 1);
                let (lo, hi) = (2f64.powi(j), 2f64.powi(j + 1));
                random_field(*grid, &mut rng, move |k| {
                    let l = lam(k, gamma);
                    if l >= lo && l < hi {
                        1.0
                    } else {
                        0.0
                    }
                })
            };
            let tu = t.apply_spectrum(u.spectrum());
            let num = tu.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let den = weighted_norm(&u, gamma, m);
            num / den
        })
        .collect();
    let c1 = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let c2 = ratios.iter().cloned().fold(0.0, f64::max);
    if !(c1 > 0.0) {
        return invalid("operator is not elliptic on the sampled fields");
    }
    Ok(GardingReport { c1, c2 })
}

/// `‖u‖_{H^s_γ} = (Σ Λ(k,γ)^{2s} |û_k|²)^{1/2}`.
pub fn weighted_norm(u: &ScalarField, gamma: f64, s: f64) -> f64 {
    let grid = u.grid();
    u.spectrum()
        .iter()
        .enumerate()
        .filter(|(i, _)| !grid.is_nyquist(*i))
        .map(|(i, z)| lam(grid.kabs(i), gamma).powf(2.0 * s) * z.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parasymbols::Symbol;
    use crate::spectral_core::make_grid;

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn constant_symbol_is_identity() {
        let g = make_grid(64, 1).unwrap();
        let one = Symbol::multiplier(g, 1.0, 0.0, |_| 1.0).unwrap();
        let t = quantize_raw(&one).unwrap();
        let mut rng = random::stream(3, "t");
        let u = random_field(g, &mut rng, |_| 1.0);
        let tu = t.apply(&u, 0).unwrap();
        assert!(close(tu.spectrum(), u.spectrum(), 1e-13));
        assert!(matches!(t.apply(&u, 1), Err(Error::TimeIndex { .. })));
        assert!(matches!(quantize(&one), Err(Error::NotSmoothed)));
    }

    #[test]
    fn multiplier_symbol_on_single_mode() {
        let g = make_grid(64, 1).unwrap();
        let t = quantize_raw(&Symbol::lambda_power(g, 2.0, 0.5).unwrap()).unwrap();
        for k in [-5i64, 0, 7, 30] {
            let u = ScalarField::from_fn(g, |x| Complex64::new(0.0, k as f64 * x[0]).exp());
            let tu = t.apply(&u, 0).unwrap();
            let want = u.scale(Complex64::new(lam(k as f64, 2.0).sqrt(), 0.0));
            assert!(close(tu.samples(), want.samples(), 1e-12));
        }
    }

    #[test]
    fn x_symbol_acts_as_product_above_plateau() {
        let g = make_grid(128, 1).unwrap();
        let gamma = 64.0;
        let b: Vec<f64> = g.points().iter().map(|x| 2.0 + x.cos()).collect();
        let a = Symbol::function_of_x(g, gamma, &b).unwrap();
        let psi = build_cutoff(gamma, &g).unwrap();
        assert!(psi.eps1 * gamma >= 1.0);
        let t = quantize(&smooth_symbol(&a, &psi).unwrap()).unwrap();
        let mut rng = random::stream(1, "t");
        let u = random_field(g, &mut rng, |k| if k < 40.0 { 1.0 } else { 0.0 });
        let tu = t.apply(&u, 0).unwrap();
        let want = u.pointwise_mul(&ScalarField::from_real(g, &b).unwrap()).unwrap();
        assert!(close(tu.samples(), want.samples(), 1e-12));
    }

    #[test]
    fn adjoint_matches_inner_products() {
        let g = make_grid(64, 1).unwrap();
        let b: Vec<f64> = g.points().iter().map(|x| 2.0 + (3.0 * x).sin()).collect();
        let a = Symbol::function_of_x(g, 1.0, &b).unwrap();
        let lam1 = Symbol::lambda_power(g, 1.0, 1.0).unwrap();
        let t = Arc::new(quantize_raw(&a.mul(&lam1).unwrap()).unwrap());
        let op = t.at(0).unwrap();
        let adj = op.adjoint();
        let mut rng = random::stream(2, "t");
        for _ in 0..5 {
            let u = random_field(g, &mut rng, |_| 1.0);
            let v = random_field(g, &mut rng, |_| 1.0);
            let lhs = op.apply(&u).unwrap().inner(&v);
            let rhs = u.inner(&adj.apply(&v).unwrap());
            assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0));
        }
        let back = adj.adjoint();
        let u = random_field(g, &mut rng, |_| 1.0);
        assert!(close(&back.apply_spectrum(u.spectrum()), &op.apply_spectrum(u.spectrum()), 1e-12));
    }

    #[test]
    fn identity_order_is_zero() {
        let g = make_grid(256, 1).unwrap();
        let f = operator_order_fit(&LinearOp::Identity, &g, 1.0, &default_bands(&g), 4, 0).unwrap();
        assert!(f.m.abs() < 1e-9 && f.delta.abs() < 1e-9);
        assert!(operator_order_fit(&LinearOp::Identity, &g, 1.0, &[2, 3, 4], 4, 0).is_err());
    }

    #[test]
    fn multiplier_rayleigh_is_one() {
        let g = make_grid(64, 1).unwrap();
        let r = positivity_gamma_search(|gm| Symbol::lambda_power(g, gm, 2.0), 2.0, 1.0, 100, 5).unwrap();
        assert_eq!(r.gamma_star, Some(1.0));
        assert!((r.lambda1 - 1.0).abs() < 1e-12);
        assert!(r.monotone);
    }
}
