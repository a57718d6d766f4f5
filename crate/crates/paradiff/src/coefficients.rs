//! Coefficient fields `a(t, x)`, Weierstrass generators of Zygmund type,
//! and mollification in time with a compactly supported even kernel.

use crate::error::{invalid, Error, Result};
use crate::fit;
use crate::random;
use crate::spectral_core::{PeriodicGrid, ScalarField};
use rand::Rng;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Declared regularity of a coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegularityClass {
    Lipschitz,
    Zygmund,
    LogLipschitz,
}

/// Which variables a Weierstrass generator oscillates in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// `Σ 2^{-j} cos(2^j t + θ_j)`.
    T,
    /// `Σ 2^{-j} cos(2^j x + φ_j)`.
    X,
    /// `Σ 2^{-j} cos(2^j x + φ_j) cos(2^j t + θ_j)`.
    TX,
    /// `cos(x + φ_0) Σ 2^{-j} cos(2^j t + θ_j)`: rough in t, one mode in x.
    TModulated,
}

/// Closed-form Weierstrass coefficient with random phases, scaled into
/// `[λ₀, Λ₀]`: `a = λ₀ + (Λ₀-λ₀)/2 · (1 + W/S)` with `S = Σ 2^{-j}`, the
/// exact sup of `|W|` over all phase choices.
#[derive(Clone, Debug, PartialEq)]
pub struct Weierstrass {
    pub depth: usize,
    pub axis: Axis,
    pub lambda0: f64,
    pub big_lambda0: f64,
    phase_x: Vec<f64>,
    phase_t: Vec<f64>,
    norm: f64,
}

impl Weierstrass {
    pub fn new(depth: usize, seed: u64, axis: Axis, lambda0: f64, big_lambda0: f64) -> Result<Self> {
        if depth < 1 {
            return invalid("Weierstrass depth must be >= 1");
        }
        if !(lambda0 > 0.0 && big_lambda0 >= lambda0) {
            return invalid(format!("bounds [{lambda0}, {big_lambda0}] are not 0 < λ₀ ≤ Λ₀"));
        }
        let mut rng = random::stream(seed, "weierstrass-phases");
        let mut draw = || (0..depth).map(|_| rng.random::<f64>() * 2.0 * PI).collect::<Vec<_>>();
        let phase_x = draw();
        let phase_t = draw();
        let norm = (0..depth).map(|j| 2f64.powi(-(j as i32))).sum();
        Ok(Self { depth, axis, lambda0, big_lambda0, phase_x, phase_t, norm })
    }

    /// Highest frequency `2^{J-1}` present in the sum.
    pub fn max_frequency(&self) -> f64 {
        2f64.powi(self.depth as i32 - 1)
    }

    /// The raw sum `W(t, x)`, bounded by `S` in absolute value.
    pub fn raw(&self, t: f64, x: f64) -> f64 {
        let mut w = 0.0;
        for j in 0..self.depth {
            let f = 2f64.powi(j as i32);
            let c = 1.0 / f;
            w += match self.axis {
                Axis::T | Axis::TModulated => c * (f * t + self.phase_t[j]).cos(),
                Axis::X => c * (f * x + self.phase_x[j]).cos(),
                Axis::TX => c * (f * x + self.phase_x[j]).cos() * (f * t + self.phase_t[j]).cos(),
            };
        }
        if self.axis == Axis::TModulated {
            w *= (x + self.phase_x[0]).cos();
        }
        w
    }

    pub fn eval(&self, t: f64, x: f64) -> f64 {
        self.lambda0 + 0.5 * (self.big_lambda0 - self.lambda0) * (1.0 + self.raw(t, x) / self.norm)
    }

    /// One x-slice at time `t`.
    pub fn slice(&self, grid: &PeriodicGrid, t: f64) -> Vec<f64> {
        grid.points().iter().map(|&x| self.eval(t, x)).collect()
    }
}

/// Real samples `a(t_i, x_k)` on a uniform time grid over `[0, T]` times a
/// one-dimensional space grid, with ellipticity bounds.
#[derive(Clone, Debug)]
pub struct CoefficientField {
    grid: PeriodicGrid,
    final_time: f64,
    nt: usize,
    values: Vec<f64>,
    pub class: RegularityClass,
    pub lambda0: f64,
    pub big_lambda0: f64,
    source: Option<Weierstrass>,
}

impl CoefficientField {
    /// Wraps a table of `nt` rows of `n` values each.
    pub fn from_table(
        grid: PeriodicGrid,
        final_time: f64,
        nt: usize,
        values: Vec<f64>,
        class: RegularityClass,
        lambda0: f64,
        big_lambda0: f64,
    ) -> Result<Self> {
        if grid.dim() != 1 {
            return invalid("coefficient fields are one-dimensional in space");
        }
        if nt < 2 || !(final_time > 0.0) {
            return invalid("need at least two time samples on a positive interval");
        }
        if values.len() != nt * grid.n() {
            return Err(Error::GridMismatch);
        }
        let field = Self { grid, final_time, nt, values, class, lambda0, big_lambda0, source: None };
        field.check_bounds()?;
        Ok(field)
    }

    /// Time-independent field from one x-slice.
    pub fn stationary(
        grid: PeriodicGrid,
        slice: &[f64],
        final_time: f64,
        nt: usize,
        class: RegularityClass,
    ) -> Result<Self> {
        let lo = slice.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = slice.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let values = (0..nt).flat_map(|_| slice.iter().cloned()).collect();
        Self::from_table(grid, final_time, nt, values, class, lo, hi)
    }

    /// Constant field `c`.
    pub fn constant(grid: PeriodicGrid, c: f64, final_time: f64, nt: usize) -> Result<Self> {
        Self::stationary(grid, &vec![c; grid.n()], final_time, nt, RegularityClass::Lipschitz)
    }

    fn check_bounds(&self) -> Result<()> {
        let tol = 1e-12 * self.big_lambda0.abs().max(1.0);
        if self.values.iter().any(|&v| !(v >= self.lambda0 - tol && v <= self.big_lambda0 + tol)) {
            return invalid("coefficient leaves its declared bounds [λ₀, Λ₀]");
        }
        Ok(())
    }

    pub fn grid(&self) -> PeriodicGrid {
        self.grid
    }

    pub fn final_time(&self) -> f64 {
        self.final_time
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn time_step(&self) -> f64 {
        self.final_time / (self.nt - 1) as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.time_step()
    }

    pub fn source(&self) -> Option<&Weierstrass> {
        self.source.as_ref()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Row at time index `i`.
    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.grid.n();
        &self.values[i * n..(i + 1) * n]
    }

    /// Time series at space index `k`.
    pub fn column(&self, k: usize) -> Vec<f64> {
        (0..self.nt).map(|i| self.values[i * self.grid.n() + k]).collect()
    }

    pub fn row_field(&self, i: usize) -> ScalarField {
        ScalarField::from_real(self.grid, self.row(i)).unwrap()
    }

    /// Values at an arbitrary time: exact for generated fields, linear
    /// interpolation in the table otherwise. Times outside `[0, T]` are
    /// reflected evenly.
    pub fn slice_at(&self, t: f64) -> Vec<f64> {
        let t = reflect(t, self.final_time);
        if let Some(w) = &self.source {
            return w.slice(&self.grid, t);
        }
        let pos = t / self.time_step();
        let i = (pos.floor() as usize).min(self.nt - 2);
        let f = pos - i as f64;
        self.row(i).iter().zip(self.row(i + 1)).map(|(a, b)| (1.0 - f) * a + f * b).collect()
    }

    /// Whether the field depends on time at all.
    pub fn is_time_independent(&self) -> bool {
        let first = self.row(0);
        (1..self.nt).all(|i| self.row(i) == first)
    }

    /// Reverses the time direction.
    pub fn time_reversed(&self) -> CoefficientField {
        let mut out = self.clone();
        out.source = None;
        out.values = (0..self.nt).rev().flat_map(|i| self.row(i).to_vec()).collect();
        out
    }
}

fn reflect(t: f64, final_time: f64) -> f64 {
    let period = 2.0 * final_time;
    let s = t.rem_euclid(period);
    if s > final_time {
        period - s
    } else {
        s
    }
}

/// Samples a Weierstrass coefficient on `nt` uniform times over `[0, T]`.
///
/// The highest frequency `2^{J-1}` must lie strictly below the Nyquist
/// frequency of the space grid and be resolved by the time step.
#[allow(clippy::too_many_arguments)]
pub fn weierstrass_zygmund(
    grid: PeriodicGrid,
    depth: usize,
    seed: u64,
    axis: Axis,
    final_time: f64,
    nt: usize,
    lambda0: f64,
    big_lambda0: f64,
) -> Result<CoefficientField> {
    let w = Weierstrass::new(depth, seed, axis, lambda0, big_lambda0)?;
    let top = w.max_frequency();
    if matches!(axis, Axis::X | Axis::TX) && top >= grid.n() as f64 / 2.0 {
        return Err(Error::Resolution(format!("depth {depth} needs frequency {top} on a grid of {} points", grid.n())));
    }
    if nt < 2 || !(final_time > 0.0) {
        return invalid("need at least two time samples on a positive interval");
    }
    let dt = final_time / (nt - 1) as f64;
    if matches!(axis, Axis::T | Axis::TX | Axis::TModulated) && top * dt >= PI {
        return Err(Error::Resolution(format!("time step {dt:.3e} does not resolve frequency {top}")));
    }
    let values = (0..nt).flat_map(|i| w.slice(&grid, i as f64 * dt)).collect();
    let mut field =
        CoefficientField::from_table(grid, final_time, nt, values, RegularityClass::Zygmund, lambda0, big_lambda0)?;
    field.source = Some(w);
    Ok(field)
}

/// Hölder-θ Weierstrass sum in x, `Σ 2^{-jθ} cos(2^j x + φ_j)`, normalized
/// to unit sup bound. Used for lower-order coefficients.
pub fn holder_weierstrass(grid: PeriodicGrid, theta: f64, depth: usize, seed: u64) -> Result<Vec<f64>> {
    if !(theta > 0.0 && theta < 1.0) {
        return invalid(format!("theta = {theta} not in (0, 1)"));
    }
    if 2f64.powi(depth as i32 - 1) >= grid.n() as f64 / 2.0 {
        return Err(Error::Resolution(format!("depth {depth} too large for {} points", grid.n())));
    }
    let mut rng = random::stream(seed, "holder-phases");
    let phases: Vec<f64> = (0..depth).map(|_| rng.random::<f64>() * 2.0 * PI).collect();
    let norm: f64 = (0..depth).map(|j| 2f64.powf(-(j as f64) * theta)).sum();
    Ok(grid
        .points()
        .iter()
        .map(|&x| {
            (0..depth)
                .map(|j| 2f64.powf(-(j as f64) * theta) * (2f64.powi(j as i32) * x + phases[j]).cos())
                .sum::<f64>()
                / norm
        })
        .collect())
}

/// Lower-order coefficients `b_0` (of `∂_t`), `b_1` (of `∂_x`) and `c`,
/// with the Hölder exponent recorded for the `b_j`.
#[derive(Clone, Debug)]
pub struct LowerOrderCoefficients {
    pub b: Vec<CoefficientField>,
    pub c: CoefficientField,
    pub theta: f64,
}

impl LowerOrderCoefficients {
    pub fn new(b: Vec<CoefficientField>, c: CoefficientField, theta: f64) -> Result<Self> {
        if !(theta > 0.5 && theta < 1.0) {
            return invalid(format!("theta = {theta} must lie in (1/2, 1)"));
        }
        if b.len() != 2 {
            return invalid("expected b_0 and b_1 in one space dimension");
        }
        Ok(Self { b, c, theta })
    }

    /// All-zero lower-order part on the given grid.
    pub fn zero(grid: PeriodicGrid, final_time: f64) -> Self {
        let z = CoefficientField::from_table(
            grid,
            final_time,
            2,
            vec![0.0; 2 * grid.n()],
            RegularityClass::Lipschitz,
            0.0,
            0.0,
        )
        .unwrap();
        Self { b: vec![z.clone(), z.clone()], c: z, theta: 0.75 }
    }

    pub fn is_zero(&self) -> bool {
        self.b.iter().chain(std::iter::once(&self.c)).all(|f| f.values().iter().all(|&v| v == 0.0))
    }
}

/// The profile `ρ(s) ∝ exp(-1/(1-s²))` on `(-1, 1)` with unit integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MollifierKernel {
    /// Quadrature nodes per kernel radius when the coefficient can be
    /// evaluated at arbitrary times.
    pub nodes_per_radius: usize,
}

impl Default for MollifierKernel {
    fn default() -> Self {
        Self { nodes_per_radius: 32 }
    }
}

/// Minimum number of time samples per kernel radius for table input.
pub const MIN_SAMPLES_PER_RADIUS: f64 = 8.0;

fn bump(s: f64) -> f64 {
    if s.abs() < 1.0 {
        (-1.0 / (1.0 - s * s)).exp()
    } else {
        0.0
    }
}

fn bump_mass() -> f64 {
    static MASS: OnceLock<f64> = OnceLock::new();
    // The bump vanishes to all orders at ±1, so the trapezoidal rule
    // converges faster than any power.
    *MASS.get_or_init(|| {
        let m = 20_000;
        (1..2 * m).map(|i| bump(i as f64 / m as f64 - 1.0)).sum::<f64>() / m as f64
    })
}

impl MollifierKernel {
    /// Unit-mass profile.
    pub fn rho(&self, s: f64) -> f64 {
        bump(s) / bump_mass()
    }

    /// First derivative of the unit-mass profile.
    pub fn rho_d1(&self, s: f64) -> f64 {
        if s.abs() >= 1.0 {
            return 0.0;
        }
        let q = 1.0 - s * s;
        self.rho(s) * (-2.0 * s / (q * q))
    }

    /// Second derivative of the unit-mass profile.
    pub fn rho_d2(&self, s: f64) -> f64 {
        if s.abs() >= 1.0 {
            return 0.0;
        }
        let q = 1.0 - s * s;
        let g = -2.0 * s / (q * q);
        let dg = (-2.0 * q * q - 8.0 * s * s * q) / q.powi(4);
        self.rho(s) * (g * g + dg)
    }

    /// `∫ρ(σ)|σ| dσ`, the first absolute moment.
    pub fn abs_moment(&self) -> f64 {
        let m = 20_000;
        (1..2 * m).map(|i| i as f64 / m as f64 - 1.0).map(|s| self.rho(s) * s.abs()).sum::<f64>() / m as f64
    }

    /// Discrete weights for radius `eps` and node spacing `h`. The value
    /// weights sum to one, so constants are reproduced exactly and, by
    /// symmetry, so are affine functions.
    pub fn weights(&self, eps: f64, h: f64) -> MollifierWeights {
        let m = (eps / h).ceil() as i64;
        let offsets: Vec<f64> = (-m..=m).map(|k| k as f64 * h).filter(|t| t.abs() < eps).collect();
        let z: f64 = offsets.iter().map(|&t| bump(t / eps)).sum();
        let w0 = offsets.iter().map(|&t| bump(t / eps) / z).collect();
        let scale = bump_mass() / z;
        let w1 = offsets.iter().map(|&t| self.rho_d1(t / eps) * scale / eps).collect();
        let w2 = offsets.iter().map(|&t| self.rho_d2(t / eps) * scale / (eps * eps)).collect();
        MollifierWeights { offsets, w0, w1, w2 }
    }
}

/// Quadrature weights for `ρ_ε`, `ρ'_ε`, `ρ''_ε` on offsets `τ_k`.
#[derive(Clone, Debug)]
pub struct MollifierWeights {
    pub offsets: Vec<f64>,
    pub w0: Vec<f64>,
    pub w1: Vec<f64>,
    pub w2: Vec<f64>,
}

impl MollifierWeights {
    /// `(a_ε, ∂_t a_ε, ∂²_t a_ε)` from samples `a(t - τ_k)` and `a(t)`.
    /// All sums use `a(t-τ) - a(t)`, so constants come out exactly.
    fn combine(&self, shifted: &[f64], center: f64) -> (f64, f64, f64) {
        let mut out = (0.0, 0.0, 0.0);
        for (k, &v) in shifted.iter().enumerate() {
            let d = v - center;
            out.0 += self.w0[k] * d;
            out.1 += self.w1[k] * d;
            out.2 += self.w2[k] * d;
        }
        (center + out.0, out.1, out.2)
    }
}

/// Tables of `a_ε`, `∂_t a_ε` and `∂²_t a_ε` on the field's grid.
#[derive(Clone, Debug)]
pub struct Mollified {
    pub value: CoefficientField,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
    pub eps: f64,
}

/// One x-slice of a mollified field and its time derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct MollifiedSlice {
    pub value: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
}

fn check_eps(eps: f64, final_time: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= 1.0) {
        return invalid(format!("eps = {eps} not in (0, 1]"));
    }
    if eps > final_time {
        return invalid(format!("eps = {eps} exceeds the time interval"));
    }
    Ok(())
}

/// `a_ε = ρ_ε * a` in time on the field's own time grid, with even
/// reflection beyond `[0, T]`.
pub fn mollify_time(a: &CoefficientField, eps: f64, kernel: &MollifierKernel) -> Result<Mollified> {
    check_eps(eps, a.final_time)?;
    let h = a.time_step();
    if eps / h < MIN_SAMPLES_PER_RADIUS {
        return Err(Error::Resolution(format!("eps = {eps} spans fewer than 8 time samples (dt = {h:.3e})")));
    }
    let w = kernel.weights(eps, h);
    let steps: Vec<i64> = w.offsets.iter().map(|t| (t / h).round() as i64).collect();
    let (nt, n) = (a.nt as i64, a.grid.n());
    let idx = |i: i64| -> usize {
        let i = i.abs();
        (if i > nt - 1 { 2 * (nt - 1) - i } else { i }) as usize
    };
    let mut value = vec![0.0; a.values.len()];
    let mut d1 = vec![0.0; a.values.len()];
    let mut d2 = vec![0.0; a.values.len()];
    let mut shifted = vec![0.0; steps.len()];
    for i in 0..a.nt {
        for k in 0..n {
            for (q, &s) in steps.iter().enumerate() {
                shifted[q] = a.values[idx(i as i64 - s) * n + k];
            }
            let (v, p, pp) = w.combine(&shifted, a.values[i * n + k]);
            value[i * n + k] = v;
            d1[i * n + k] = p;
            d2[i * n + k] = pp;
        }
    }
    let mut out = a.clone();
    out.values = value;
    out.source = None;
    Ok(Mollified { value: out, d1, d2, eps })
}

/// `(a_ε, ∂_t a_ε, ∂²_t a_ε)` at an arbitrary time `t`. Generated fields are
/// evaluated in closed form at `nodes_per_radius` nodes per radius; table
/// fields use their own time grid.
pub fn mollify_at(a: &CoefficientField, t: f64, eps: f64, kernel: &MollifierKernel) -> Result<MollifiedSlice> {
    check_eps(eps, a.final_time)?;
    if a.source.is_none() && a.is_time_independent() {
        let n = a.grid.n();
        return Ok(MollifiedSlice { value: a.row(0).to_vec(), d1: vec![0.0; n], d2: vec![0.0; n] });
    }
    let h = if a.source.is_some() {
        eps / kernel.nodes_per_radius as f64
    } else {
        let h = a.time_step();
        if eps / h < MIN_SAMPLES_PER_RADIUS {
            return Err(Error::Resolution(format!("eps = {eps} spans fewer than 8 time samples")));
        }
        h
    };
    let w = kernel.weights(eps, h);
    let center = a.slice_at(t);
    let rows: Vec<Vec<f64>> = w.offsets.iter().map(|tau| a.slice_at(t - tau)).collect();
    let n = a.grid.n();
    let mut out = MollifiedSlice { value: vec![0.0; n], d1: vec![0.0; n], d2: vec![0.0; n] };
    let mut shifted = vec![0.0; rows.len()];
    for k in 0..n {
        for (q, r) in rows.iter().enumerate() {
            shifted[q] = r[k];
        }
        let (v, p, pp) = w.combine(&shifted, center[k]);
        out.value[k] = v;
        out.d1[k] = p;
        out.d2[k] = pp;
    }
    Ok(out)
}

/// Fitted laws for a ladder of mollification radii.
#[derive(Clone, Debug)]
pub struct MollificationReport {
    pub eps: Vec<f64>,
    pub sup_diff: Vec<f64>,
    pub sup_d1: Vec<f64>,
    pub sup_d2: Vec<f64>,
    /// Slope of `log sup|a_ε - a|` against `log ε`.
    pub diff_slope: f64,
    /// Slope of `log sup|∂²_t a_ε|` against `log ε`.
    pub d2_slope: f64,
    /// Exponent `p` of the power fit `sup|∂_t a_ε| ≈ C ε^{-p}`.
    pub d1_power_exponent: f64,
    /// Slope `B` of the affine fit `sup|∂_t a_ε| ≈ A + B log(1/ε)`.
    pub d1_log_slope: f64,
    /// RMS relative residuals of the two `∂_t` fits.
    pub d1_power_residual: f64,
    pub d1_log_residual: f64,
    pub min_value: f64,
    pub max_value: f64,
}

/// Mollifies `a` at each radius of `ladder` and fits the three laws. Fits
/// are `NaN` when a family vanishes identically.
pub fn mollification_report(
    a: &CoefficientField,
    ladder: &[f64],
    kernel: &MollifierKernel,
) -> Result<MollificationReport> {
    if ladder.len() < 2 {
        return invalid("need at least two radii");
    }
    let mut r = MollificationReport {
        eps: ladder.to_vec(),
        sup_diff: vec![],
        sup_d1: vec![],
        sup_d2: vec![],
        diff_slope: f64::NAN,
        d2_slope: f64::NAN,
        d1_power_exponent: f64::NAN,
        d1_log_slope: f64::NAN,
        d1_power_residual: f64::NAN,
        d1_log_residual: f64::NAN,
        min_value: f64::INFINITY,
        max_value: f64::NEG_INFINITY,
    };
    let sup = |v: &[f64]| v.iter().map(|x| x.abs()).fold(0.0, f64::max);
    for &eps in ladder {
        let m = mollify_time(a, eps, kernel)?;
        let diff: Vec<f64> = m.value.values.iter().zip(&a.values).map(|(x, y)| x - y).collect();
        r.sup_diff.push(sup(&diff));
        r.sup_d1.push(sup(&m.d1));
        r.sup_d2.push(sup(&m.d2));
        for &v in &m.value.values {
            r.min_value = r.min_value.min(v);
            r.max_value = r.max_value.max(v);
        }
    }
    let log_eps: Vec<f64> = ladder.iter().map(|e| e.ln()).collect();
    let loglog = |ys: &[f64]| -> Option<f64> {
        if ys.iter().any(|&y| y <= 0.0) {
            return None;
        }
        let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
        Some(fit::line(&log_eps, &ly).0)
    };
    if let Some(s) = loglog(&r.sup_diff) {
        r.diff_slope = s;
    }
    if let Some(s) = loglog(&r.sup_d2) {
        r.d2_slope = s;
    }
    if r.sup_d1.iter().all(|&y| y > 0.0) {
        let x: Vec<f64> = ladder.iter().map(|e| (1.0 / e).ln()).collect();
        let ly: Vec<f64> = r.sup_d1.iter().map(|y| y.ln()).collect();
        let (p, c) = fit::line(&x, &ly);
        let (b, a0) = fit::line(&x, &r.sup_d1);
        let rel = |pred: &dyn Fn(f64) -> f64| -> f64 {
            let s: f64 = x.iter().zip(&r.sup_d1).map(|(&xi, &y)| (pred(xi) / y - 1.0).powi(2)).sum();
            (s / x.len() as f64).sqrt()
        };
        r.d1_power_exponent = p;
        r.d1_log_slope = b;
        r.d1_power_residual = rel(&|xi| (c + p * xi).exp());
        r.d1_log_residual = rel(&|xi| a0 + b * xi);
    }
    Ok(r)
}
