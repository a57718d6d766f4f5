//! Admissible cutoffs `ψ_μ(η, ξ)`, smoothing of symbols in x, symbol-class
//! seminorms, and the second-order symbols `α` and `α̃` of a wave operator.
//!
//! Symbols are one-dimensional: a slice holds `a(x_i, ξ)` for every grid
//! point and every lattice frequency, stored column by column in ξ (FFT
//! order). The Nyquist column is identically zero.

use crate::coefficients::{mollify_at, CoefficientField, MollifierKernel};
use crate::error::{invalid, Error, Result};
use crate::fft;
use crate::fit;
use crate::spectral_core::{chi_bridge, lam, Bridge, PeriodicGrid};
use num_complex::Complex64;
use rayon::prelude::*;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `ψ_μ(η, ξ) = χ_μ(η)χ_{μ+2}(ξ) + Σ_{k≥μ+3} χ_{k-3}(η)φ_k(ξ)` with
/// `χ_ν(r) = χ(2^{-ν}r)` and `φ_k = χ_k - χ_{k-1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdmissibleCutoff {
    pub mu: i32,
    pub gamma: f64,
    pub bridge: Bridge,
    /// Plateau constant: `ψ = 1` for `|η| ≤ ε₁(γ+|ξ|)` on the lattice.
    pub eps1: f64,
    /// Support constant: `ψ = 0` for `|η| ≥ ε₂(γ+|ξ|)` on the lattice.
    pub eps2: f64,
}

fn chi_nu(nu: i32, r: f64, b: Bridge) -> f64 {
    chi_bridge(r * 2f64.powi(-nu), b)
}

impl AdmissibleCutoff {
    /// Cutoff with scale `μ = ⌊log₂ γ⌋ - 3`, so that the support radius at
    /// `ξ = 0` is `2^{μ+1} ≤ γ/4`. This gives `μ = -3` at `γ = 1`.
    pub fn new(gamma: f64, n: usize, bridge: Bridge) -> Result<Self> {
        if gamma.is_nan() || gamma < 1.0 {
            return invalid(format!("gamma = {gamma} < 1"));
        }
        let mu = gamma.log2().floor() as i32 - 3;
        let mut c = Self { mu, gamma, bridge, eps1: f64::INFINITY, eps2: 0.0 };
        for k in 0..(n / 2) as i64 {
            let xi = k as f64;
            let (p, s) = (c.plateau(xi), c.support(xi));
            c.eps1 = c.eps1.min(p / (gamma + xi));
            c.eps2 = c.eps2.max(s / (gamma + xi));
        }
        Ok(c)
    }

    /// Scales `ν` of the `χ_ν(η)` factors that carry weight at this `ξ`.
    fn active_scales(&self, xi: f64) -> Vec<i32> {
        let xi = xi.abs();
        let mut out = Vec::new();
        if chi_nu(self.mu + 2, xi, self.bridge) > 0.0 {
            out.push(self.mu);
        }
        let top = if xi > 0.0 { xi.log2().ceil() as i32 + 2 } else { self.mu + 3 };
        for k in (self.mu + 3)..=top.max(self.mu + 3) {
            if self.phi_k(k, xi) != 0.0 {
                out.push(k - 3);
            }
        }
        out
    }

    fn phi_k(&self, k: i32, xi: f64) -> f64 {
        chi_nu(k, xi, self.bridge) - chi_nu(k - 1, xi, self.bridge)
    }

    /// Largest `r` with `ψ(η, ξ) = 1` for all `|η| ≤ r`.
    pub fn plateau(&self, xi: f64) -> f64 {
        self.active_scales(xi).iter().map(|&nu| 2f64.powi(nu)).fold(f64::INFINITY, f64::min)
    }

    /// Smallest `r` with `ψ(η, ξ) = 0` for all `|η| ≥ r`.
    pub fn support(&self, xi: f64) -> f64 {
        self.active_scales(xi).iter().map(|&nu| 2f64.powi(nu + 1)).fold(0.0, f64::max)
    }

    pub fn eval(&self, eta: f64, xi: f64) -> f64 {
        let (eta, xi) = (eta.abs(), xi.abs());
        let b = self.bridge;
        let mut v = chi_nu(self.mu, eta, b) * chi_nu(self.mu + 2, xi, b);
        let top = if xi > 0.0 { xi.log2().ceil() as i32 + 2 } else { self.mu + 3 };
        for k in (self.mu + 3)..=top.max(self.mu + 3) {
            let p = self.phi_k(k, xi);
            if p != 0.0 {
                v += chi_nu(k - 3, eta, b) * p;
            }
        }
        v
    }
}

/// Admissible cutoff for parameter `γ` on a grid, with the default bridge.
pub fn build_cutoff(gamma: f64, grid: &PeriodicGrid) -> Result<AdmissibleCutoff> {
    AdmissibleCutoff::new(gamma, grid.n(), Bridge::Exp)
}

/// How the mollification radius is tied to frequency when building `α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Linkage {
    /// `ε = 2^{-j}` on the band `2^j ≤ Λ(ξ, γ) < 2^{j+1}`.
    Banded,
    /// One radius for every frequency.
    Fixed(f64),
}

impl Linkage {
    pub fn eps(&self, kabs: f64, gamma: f64) -> f64 {
        match *self {
            Linkage::Banded => 2f64.powi(-band_index(kabs, gamma)),
            Linkage::Fixed(e) => e,
        }
    }
}

/// Dyadic band index `j` with `2^j ≤ Λ(ξ, γ) < 2^{j+1}`.
pub fn band_index(kabs: f64, gamma: f64) -> i32 {
    lam(kabs, gamma).log2().floor() as i32
}

type Slice = Vec<Complex64>;

/// Sampled symbol `a(t, x, ξ; γ)` with class metadata. Optional first and
/// second time derivatives travel with the values.
#[derive(Clone, Debug)]
pub struct Symbol {
    grid: PeriodicGrid,
    pub gamma: f64,
    pub order: f64,
    pub log_order: f64,
    times: Vec<f64>,
    values: Vec<Slice>,
    d1: Option<Vec<Slice>>,
    d2: Option<Vec<Slice>>,
    cutoff: Option<AdmissibleCutoff>,
}

impl Symbol {
    /// Samples `f(time index, x index, ξ)` on every slice.
    pub fn from_fn(
        grid: PeriodicGrid,
        gamma: f64,
        order: f64,
        log_order: f64,
        times: &[f64],
        f: impl Fn(usize, usize, i64) -> Complex64 + Sync,
    ) -> Result<Self> {
        if grid.dim() != 1 {
            return invalid("symbols are one-dimensional");
        }
        if gamma.is_nan() || gamma < 1.0 {
            return invalid(format!("gamma = {gamma} < 1"));
        }
        if times.is_empty() {
            return invalid("a symbol needs at least one time slice");
        }
        let n = grid.n();
        let values = (0..times.len())
            .map(|ti| {
                let mut s = vec![ZERO; n * n];
                s.par_chunks_mut(n).enumerate().for_each(|(kc, col)| {
                    if kc != n / 2 {
                        let k = grid.freq(kc);
                        for (xi, v) in col.iter_mut().enumerate() {
                            *v = f(ti, xi, k);
                        }
                    }
                });
                s
            })
            .collect();
        Ok(Self { grid, gamma, order, log_order, times: times.to_vec(), values, d1: None, d2: None, cutoff: None })
    }

    /// x-independent symbol `m(ξ)`.
    pub fn multiplier(grid: PeriodicGrid, gamma: f64, order: f64, m: impl Fn(i64) -> f64 + Sync) -> Result<Self> {
        Self::from_fn(grid, gamma, order, 0.0, &[0.0], |_, _, k| Complex64::new(m(k), 0.0))
    }

    /// `Λ(ξ, γ)^s`.
    pub fn lambda_power(grid: PeriodicGrid, gamma: f64, s: f64) -> Result<Self> {
        Self::multiplier(grid, gamma, s, move |k| lam(k as f64, gamma).powf(s))
    }

    /// `b(x)` independent of ξ, order 0.
    pub fn function_of_x(grid: PeriodicGrid, gamma: f64, b: &[f64]) -> Result<Self> {
        if b.len() != grid.n() {
            return Err(Error::GridMismatch);
        }
        Self::from_fn(grid, gamma, 0.0, 0.0, &[0.0], |_, xi, _| Complex64::new(b[xi], 0.0))
    }

    pub fn grid(&self) -> PeriodicGrid {
        self.grid
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn n_times(&self) -> usize {
        self.times.len()
    }

    pub fn is_smoothed(&self) -> bool {
        self.cutoff.is_some()
    }

    pub fn cutoff(&self) -> Option<&AdmissibleCutoff> {
        self.cutoff.as_ref()
    }

    pub fn has_time_derivatives(&self) -> bool {
        self.d1.is_some() && self.d2.is_some()
    }

    /// Column `a(t_ti, ·, ξ)` at FFT index `kc`.
    pub fn column(&self, ti: usize, kc: usize) -> &[Complex64] {
        let n = self.grid.n();
        &self.values[ti][kc * n..(kc + 1) * n]
    }

    pub fn value(&self, ti: usize, xi: usize, k: i64) -> Complex64 {
        match self.grid.index_of(k) {
            Some(kc) => self.values[ti][kc * self.grid.n() + xi],
            None => ZERO,
        }
    }

    pub fn slice(&self, ti: usize) -> Result<&[Complex64]> {
        self.values.get(ti).map(|s| s.as_slice()).ok_or(Error::TimeIndex { index: ti, len: self.times.len() })
    }

    /// The slice at one time index, as a single-time symbol.
    pub fn at_time(&self, ti: usize) -> Result<Symbol> {
        self.slice(ti)?;
        let pick = |v: &Vec<Slice>| vec![v[ti].clone()];
        Ok(Symbol {
            times: vec![self.times[ti]],
            values: pick(&self.values),
            d1: self.d1.as_ref().map(pick),
            d2: self.d2.as_ref().map(pick),
            ..self.clone_meta()
        })
    }

    fn clone_meta(&self) -> Symbol {
        Symbol {
            grid: self.grid,
            gamma: self.gamma,
            order: self.order,
            log_order: self.log_order,
            times: self.times.clone(),
            values: vec![],
            d1: None,
            d2: None,
            cutoff: self.cutoff,
        }
    }

    fn with_values(&self, values: Vec<Slice>) -> Symbol {
        Symbol { values, ..self.clone_meta() }
    }

    fn map_all(&self, f: impl Fn(Complex64) -> Complex64 + Sync) -> Symbol {
        let map = |v: &Vec<Slice>| -> Vec<Slice> { v.iter().map(|s| s.par_iter().map(|&z| f(z)).collect()).collect() };
        Symbol {
            values: map(&self.values),
            d1: self.d1.as_ref().map(map),
            d2: self.d2.as_ref().map(map),
            ..self.clone_meta()
        }
    }

    pub fn scale(&self, c: Complex64) -> Symbol {
        self.map_all(|z| z * c)
    }

    /// Pointwise complex conjugate `ā`.
    pub fn conj(&self) -> Symbol {
        self.map_all(|z| z.conj())
    }

    fn zip(&self, other: &Symbol, f: impl Fn(Complex64, Complex64) -> Complex64 + Sync) -> Result<Vec<Slice>> {
        let (na, nb) = (self.values.len(), other.values.len());
        if self.grid != other.grid || (na != nb && nb != 1) {
            return Err(Error::GridMismatch);
        }
        // A single-slice right operand is broadcast over time.
        Ok(self
            .values
            .iter()
            .enumerate()
            .map(|(i, a)| {
                a.par_iter().zip(&other.values[if nb == 1 { 0 } else { i }]).map(|(&x, &y)| f(x, y)).collect()
            })
            .collect())
    }

    /// Pointwise product; orders add. Time derivatives are dropped.
    pub fn mul(&self, other: &Symbol) -> Result<Symbol> {
        let mut out = self.with_values(self.zip(other, |a, b| a * b)?);
        out.order = self.order + other.order;
        out.log_order = self.log_order + other.log_order;
        out.cutoff = None;
        Ok(out)
    }

    /// Pointwise sum; the order is the larger of the two.
    pub fn add(&self, other: &Symbol) -> Result<Symbol> {
        let mut out = self.with_values(self.zip(other, |a, b| a + b)?);
        out.order = self.order.max(other.order);
        out.log_order = self.log_order.max(other.log_order);
        out.cutoff = None;
        Ok(out)
    }

    pub fn sub(&self, other: &Symbol) -> Result<Symbol> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Drops the attached time derivatives.
    pub fn without_time_derivatives(&self) -> Symbol {
        Symbol { values: self.values.clone(), ..self.clone_meta() }
    }

    /// Drops the smoothed flag, e.g. before re-smoothing a derived symbol.
    pub fn unsmoothed(&self) -> Symbol {
        Symbol { cutoff: None, ..self.clone() }
    }

    /// `∂_x a`, computed spectrally per ξ-column. Order unchanged.
    pub fn x_derivative(&self) -> Symbol {
        let grid = self.grid;
        let n = grid.n();
        let deriv = |s: &Slice| -> Slice {
            let mut out = s.clone();
            out.par_chunks_mut(n).for_each(|col| {
                fft::forward(col);
                for (e, z) in col.iter_mut().enumerate() {
                    *z *= if e == n / 2 { ZERO } else { Complex64::new(0.0, grid.freq(e) as f64 / n as f64) };
                }
                fft::inverse(col);
            });
            out
        };
        let map = |v: &Vec<Slice>| v.iter().map(deriv).collect::<Vec<_>>();
        Symbol {
            values: map(&self.values),
            d1: self.d1.as_ref().map(map),
            d2: self.d2.as_ref().map(map),
            ..self.clone_meta()
        }
    }

    /// `∂_ξ a` by centered differences on the lattice (one-sided at the two
    /// edges). The order drops by one.
    pub fn xi_derivative(&self) -> Symbol {
        let grid = self.grid;
        let n = grid.n();
        let h = n as i64 / 2;
        let deriv = |s: &Slice| -> Slice {
            let mut out = vec![ZERO; n * n];
            out.par_chunks_mut(n).enumerate().for_each(|(kc, col)| {
                if kc == n / 2 {
                    return;
                }
                let k = grid.freq(kc);
                let at = |k: i64| &s[grid.index_of(k).unwrap() * n..][..n];
                let (lo, hi, w) = if k == -h + 1 {
                    (k, k + 1, 1.0)
                } else if k == h - 1 {
                    (k - 1, k, 1.0)
                } else {
                    (k - 1, k + 1, 0.5)
                };
                let (a, b) = (at(lo), at(hi));
                for x in 0..n {
                    col[x] = (b[x] - a[x]) * w;
                }
            });
            out
        };
        let map = |v: &Vec<Slice>| v.iter().map(deriv).collect::<Vec<_>>();
        let mut out = Symbol {
            values: map(&self.values),
            d1: self.d1.as_ref().map(map),
            d2: self.d2.as_ref().map(map),
            ..self.clone_meta()
        };
        out.order -= 1.0;
        out.cutoff = None;
        out
    }

    /// Largest `|a|` over x and ξ at one time.
    pub fn sup(&self, ti: usize) -> f64 {
        self.values[ti].iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `|a|` over x and the ξ of each γ-band `j`, for `j` in `js`.
    pub fn band_sups(&self, ti: usize, js: &[i32]) -> Vec<f64> {
        let n = self.grid.n();
        js.iter()
            .map(|&j| {
                (0..n)
                    .filter(|&kc| kc != n / 2 && band_index(self.grid.freq(kc).abs() as f64, self.gamma) == j)
                    .flat_map(|kc| self.column(ti, kc).iter().map(|z| z.norm()))
                    .fold(0.0, f64::max)
            })
            .collect()
    }

    /// Per-column x-spectrum at one time, normalized by `n`.
    pub fn column_spectrum(&self, ti: usize, kc: usize) -> Vec<Complex64> {
        let mut col = self.column(ti, kc).to_vec();
        fft::forward(&mut col);
        let s = 1.0 / self.grid.n() as f64;
        col.iter_mut().for_each(|z| *z *= s);
        col
    }
}

/// `σ^ψ_a`: the x-spectrum of each ξ-column multiplied by `ψ(η, ξ)`.
pub fn smooth_symbol(a: &Symbol, psi: &AdmissibleCutoff) -> Result<Symbol> {
    if a.is_smoothed() {
        return invalid("symbol is already smoothed");
    }
    if (psi.gamma - a.gamma).abs() > 0.0 {
        return invalid("cutoff and symbol use different gamma");
    }
    let grid = a.grid;
    let n = grid.n();
    let smooth = |s: &Slice| -> Slice {
        let mut out = s.clone();
        out.par_chunks_mut(n).enumerate().for_each(|(kc, col)| {
            if kc == n / 2 {
                return;
            }
            let xi = grid.freq(kc) as f64;
            fft::forward(col);
            for (e, z) in col.iter_mut().enumerate() {
                let w = if e == n / 2 { 0.0 } else { psi.eval(grid.freq(e) as f64, xi) };
                *z *= w / n as f64;
            }
            fft::inverse(col);
        });
        out
    };
    let map = |v: &Vec<Slice>| v.iter().map(smooth).collect::<Vec<_>>();
    Ok(Symbol {
        values: map(&a.values),
        d1: a.d1.as_ref().map(map),
        d2: a.d2.as_ref().map(map),
        cutoff: Some(*psi),
        ..a.clone_meta()
    })
}

fn weight(xi: f64, gamma: f64, m: f64, delta: f64) -> f64 {
    (gamma + xi).powf(m) * (1.0 + gamma + xi).ln().powf(delta)
}

/// `max_{|α|≤k} sup (γ+|ξ|)^{-m+|α|} log^{-δ}(1+γ+|ξ|) |∂_ξ^α a|` over all
/// slices and lattice points.
pub fn symbol_seminorm(a: &Symbol, m: f64, delta: f64, k: usize) -> Result<f64> {
    if k > 2 {
        return invalid("seminorms are provided up to k = 2");
    }
    let n = a.grid.n();
    let mut best: f64 = 0.0;
    let mut cur = a.unsmoothed();
    for order in 0..=k {
        for ti in 0..cur.n_times() {
            for kc in (0..n).filter(|&kc| kc != n / 2) {
                let xi = a.grid.freq(kc).abs() as f64;
                let w = weight(xi, a.gamma, m - order as f64, delta);
                let s = cur.column(ti, kc).iter().map(|z| z.norm()).fold(0.0, f64::max);
                best = best.max(s / w);
            }
        }
        if order < k {
            cur = cur.xi_derivative();
        }
    }
    Ok(best)
}

/// Smallest `K` such that `|a(t+τ, x+y) + a(t-τ, x-y) - 2a(t, x)| ≤
/// K (|τ| + |y|) (γ+|ξ|)^m log^δ(1+γ+|ξ|)` over sampled shifts with
/// `|τ| + |y| < 1`, maximized over ξ-columns. Time shifts use the symbol's
/// own (uniform) time samples; space shifts wrap around.
pub fn symbol_zygmund_constant(a: &Symbol, m: f64, delta: f64) -> Result<f64> {
    let n = a.grid.n();
    let nt = a.n_times();
    let dt = if nt > 1 { a.times[1] - a.times[0] } else { f64::INFINITY };
    let dx = a.grid.dx();
    let kcs: Vec<usize> = (0..n).filter(|&kc| kc != n / 2).collect();
    let best = kcs
        .par_iter()
        .map(|&kc| {
            let w = weight(a.grid.freq(kc).abs() as f64, a.gamma, m, delta);
            let mut best: f64 = 0.0;
            for p in 0..nt {
                let tau = p as f64 * dt;
                if p > 0 && tau >= 1.0 {
                    break;
                }
                for q in -(n as i64 / 2)..(n as i64 / 2) {
                    let y = q as f64 * dx;
                    let size = if p == 0 { 0.0 } else { tau } + y.abs();
                    if (p == 0 && q <= 0) || size >= 1.0 {
                        continue;
                    }
                    for t in p..nt - p {
                        let (c0, cp, cm) = (a.column(t, kc), a.column(t + p, kc), a.column(t - p, kc));
                        for x in 0..n as i64 {
                            let xp = (x + q).rem_euclid(n as i64) as usize;
                            let xm = (x - q).rem_euclid(n as i64) as usize;
                            let d = (cp[xp] + cm[xm] - 2.0 * c0[x as usize]).norm();
                            best = best.max(d / (size * w));
                        }
                    }
                }
            }
            best
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

/// `α_ε(t, x, ξ) = a_ε(t, x) ξ² + γ²` at the given times, with `ε` chosen by
/// the linkage and `a_ε` the time mollification of `a`. The first and second
/// time derivatives are attached. Declared order 2.
pub fn build_alpha(
    a: &CoefficientField,
    gamma: f64,
    linkage: Linkage,
    times: &[f64],
    kernel: &MollifierKernel,
) -> Result<Symbol> {
    let grid = a.grid();
    let n = grid.n();
    // Radii never exceed the time interval, so one reflection suffices.
    let cap = a.final_time().min(1.0);
    let eps_of = |k: f64| linkage.eps(k, gamma).min(cap);
    // One mollification per distinct radius and time.
    let radii: Vec<f64> = {
        let mut r: Vec<f64> = (0..n).filter(|&kc| kc != n / 2).map(|kc| eps_of(grid.freq(kc).abs() as f64)).collect();
        r.sort_by(|x, y| x.partial_cmp(y).unwrap());
        r.dedup();
        r
    };
    let mut tables = Vec::with_capacity(times.len());
    for &t in times {
        let mut per_eps = Vec::with_capacity(radii.len());
        for &e in &radii {
            per_eps.push(mollify_at(a, t, e, kernel)?);
        }
        tables.push(per_eps);
    }
    let pick = |ti: usize, k: i64| {
        let e = eps_of(k.abs() as f64);
        let idx = radii.iter().position(|&r| r == e).unwrap();
        &tables[ti][idx]
    };
    let g2 = gamma * gamma;
    let mut s = Symbol::from_fn(grid, gamma, 2.0, 0.0, times, |ti, x, k| {
        Complex64::new(pick(ti, k).value[x] * (k * k) as f64 + g2, 0.0)
    })?;
    let d1 = Symbol::from_fn(grid, gamma, 2.0, 1.0, times, |ti, x, k| {
        Complex64::new(pick(ti, k).d1[x] * (k * k) as f64, 0.0)
    })?;
    let d2 = Symbol::from_fn(grid, gamma, 3.0, 0.0, times, |ti, x, k| {
        Complex64::new(pick(ti, k).d2[x] * (k * k) as f64, 0.0)
    })?;
    s.d1 = Some(d1.values);
    s.d2 = Some(d2.values);
    Ok(s)
}

/// `α̃(t, x, ξ) = a(t, x) ξ² + γ²` without time regularization, at the
/// given times. No time derivatives are attached.
pub fn build_alpha_tilde(a: &CoefficientField, gamma: f64, times: &[f64]) -> Result<Symbol> {
    let slices: Vec<Vec<f64>> = times.iter().map(|&t| a.slice_at(t)).collect();
    let g2 = gamma * gamma;
    Symbol::from_fn(a.grid(), gamma, 2.0, 0.0, times, |ti, x, k| {
        Complex64::new(slices[ti][x] * (k * k) as f64 + g2, 0.0)
    })
}

/// Pointwise power `a^p` of a positive symbol; order `p·m`. Time derivatives
/// follow by the chain rule.
pub fn symbol_power(a: &Symbol, p: f64) -> Result<Symbol> {
    if a.is_smoothed() {
        return invalid("take powers before smoothing");
    }
    let n = a.grid.n();
    for s in &a.values {
        for (i, z) in s.iter().enumerate() {
            if i / n != n / 2 && !(z.re > 0.0 && z.im.abs() <= 1e-12 * z.re) {
                return Err(Error::NotPositive);
            }
        }
    }
    let pow = |z: Complex64, q: f64| if z.re > 0.0 { z.re.powf(q) } else { 0.0 };
    let values: Vec<Slice> =
        a.values.iter().map(|s| s.par_iter().map(|&z| Complex64::new(pow(z, p), 0.0)).collect()).collect();
    let d1 = a.d1.as_ref().map(|d1| {
        a.values
            .iter()
            .zip(d1)
            .map(|(s, d)| {
                s.par_iter().zip(d).map(|(&z, &dz)| Complex64::new(p * pow(z, p - 1.0) * dz.re, 0.0)).collect()
            })
            .collect::<Vec<Slice>>()
    });
    let d2 = match (&a.d1, &a.d2) {
        (Some(d1), Some(d2)) => Some(
            a.values
                .iter()
                .zip(d1.iter().zip(d2))
                .map(|(s, (u, v))| {
                    s.par_iter()
                        .zip(u.par_iter().zip(v))
                        .map(|(&z, (&dz, &ddz))| {
                            Complex64::new(
                                p * (p - 1.0) * pow(z, p - 2.0) * dz.re * dz.re + p * pow(z, p - 1.0) * ddz.re,
                                0.0,
                            )
                        })
                        .collect()
                })
                .collect::<Vec<Slice>>(),
        ),
        _ => None,
    };
    Ok(Symbol { values, d1, d2, order: p * a.order, log_order: p * a.log_order, ..a.clone_meta() })
}

/// `∂_t a` (order 1) or `∂²_t a` (order 2) from the attached derivative
/// tables. A symbol built without mollification has none and is rejected;
/// a symbol from time-independent data has zero derivatives.
pub fn symbol_time_derivative(a: &Symbol, order: usize) -> Result<Symbol> {
    let table = match order {
        1 => a.d1.as_ref(),
        2 => a.d2.as_ref(),
        _ => return invalid(format!("time derivative of order {order} is not supported")),
    };
    let values = table.ok_or_else(|| Error::InvalidParameter("symbol carries no time derivatives".into()))?.clone();
    let mut out = a.with_values(values);
    if order == 1 {
        out.log_order = a.log_order + 1.0;
    } else {
        out.order = a.order + 1.0;
    }
    Ok(out)
}

/// Attaches zero time derivatives, for symbols that do not depend on time.
pub fn with_static_time(a: &Symbol) -> Symbol {
    let zeros: Vec<Slice> = a.values.iter().map(|s| vec![ZERO; s.len()]).collect();
    Symbol { d1: Some(zeros.clone()), d2: Some(zeros), ..a.clone() }
}

/// Least-squares slope of `log sup` against `j log 2` over bands `js`.
pub fn band_growth(sups: &[f64], js: &[i32]) -> f64 {
    let x: Vec<f64> = js.iter().map(|&j| j as f64 * 2f64.ln()).collect();
    let y: Vec<f64> = sups.iter().map(|s| s.ln()).collect();
    fit::line(&x, &y).0
}
