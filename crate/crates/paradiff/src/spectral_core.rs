//! Periodic grids, fields and their spectra, the radial cutoff χ, and
//! Littlewood-Paley blocks in both the classical and the γ-dependent form.

use crate::error::{invalid, Error, Result};
use crate::fft;
use crate::fit;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Uniform grid on the torus `[0, 2π)^dim` with `n` points per axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeriodicGrid {
    n: usize,
    dim: usize,
}

/// Builds a grid; `n` must be a power of two ≥ 16 and `dim` 1 or 2.
pub fn make_grid(n_points: usize, dim: usize) -> Result<PeriodicGrid> {
    PeriodicGrid::new(n_points, dim)
}

impl PeriodicGrid {
    pub fn new(n: usize, dim: usize) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("n = {n} is not a power of two >= 16")));
        }
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidGrid(format!("dim = {dim} not in {{1, 2}}")));
        }
        Ok(Self { n, dim })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Total number of samples, `n^dim`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn period(&self) -> f64 {
        2.0 * PI
    }

    pub fn dx(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// Largest retained frequency magnitude per axis (`n/2 - 1`).
    pub fn k_max(&self) -> i64 {
        self.n as i64 / 2 - 1
    }

    /// Signed frequency of FFT index `i` along one axis; index `n/2` is the
    /// Nyquist mode `-n/2`.
    pub fn freq(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// FFT index of a signed frequency, if it lies on the lattice.
    pub fn index_of(&self, k: i64) -> Option<usize> {
        let h = self.n as i64 / 2;
        if k < -h || k >= h {
            None
        } else {
            Some(k.rem_euclid(self.n as i64) as usize)
        }
    }

    /// Wave vector at a flat spectral index (second entry 0 in 1D).
    pub fn wavevector(&self, flat: usize) -> [i64; 2] {
        if self.dim == 1 {
            [self.freq(flat), 0]
        } else {
            [self.freq(flat / self.n), self.freq(flat % self.n)]
        }
    }

    /// Euclidean length of the wave vector at `flat`.
    pub fn kabs(&self, flat: usize) -> f64 {
        let [a, b] = self.wavevector(flat);
        ((a * a + b * b) as f64).sqrt()
    }

    pub fn is_nyquist(&self, flat: usize) -> bool {
        let h = -(self.n as i64) / 2;
        let [a, b] = self.wavevector(flat);
        a == h || (self.dim == 2 && b == h)
    }

    /// Coordinates along one axis.
    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| i as f64 * self.dx()).collect()
    }

    /// Largest |k| on the lattice with the Nyquist line removed.
    pub fn max_kabs(&self) -> f64 {
        self.k_max() as f64 * (self.dim as f64).sqrt()
    }
}

/// Complex samples on a grid, with a lazily computed spectrum.
#[derive(Clone, Debug)]
pub struct ScalarField {
    grid: PeriodicGrid,
    samples: Vec<Complex64>,
    spectrum: OnceLock<Vec<Complex64>>,
}

impl PartialEq for ScalarField {
    fn eq(&self, other: &Self) -> bool {
        self.grid == other.grid && self.samples == other.samples
    }
}

impl ScalarField {
    pub fn new(grid: PeriodicGrid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(Self { grid, samples, spectrum: OnceLock::new() })
    }

    pub fn zeros(grid: PeriodicGrid) -> Self {
        Self::new(grid, vec![Complex64::new(0.0, 0.0); grid.len()]).unwrap()
    }

    /// Samples `f` at grid points; `f` receives `[x]` or `[x, y]`.
    pub fn from_fn(grid: PeriodicGrid, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let dx = grid.dx();
        let n = grid.n();
        let samples = (0..grid.len())
            .map(|i| if grid.dim() == 1 { f(&[i as f64 * dx]) } else { f(&[(i / n) as f64 * dx, (i % n) as f64 * dx]) })
            .collect();
        Self::new(grid, samples).unwrap()
    }

    pub fn from_real_fn(grid: PeriodicGrid, f: impl Fn(&[f64]) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn from_real(grid: PeriodicGrid, values: &[f64]) -> Result<Self> {
        Self::new(grid, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Field whose spectrum (FFT order) is `spec`.
    pub fn from_spectrum(grid: PeriodicGrid, spec: Vec<Complex64>) -> Result<Self> {
        if spec.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        let mut buf = spec.clone();
        if grid.dim() == 1 {
            fft::inverse(&mut buf);
        } else {
            fft::transform_2d(&mut buf, grid.n(), true);
        }
        let out = Self::new(grid, buf)?;
        let _ = out.spectrum.set(spec);
        Ok(out)
    }

    pub fn grid(&self) -> PeriodicGrid {
        self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.re).collect()
    }

    /// Spectrum in FFT order, normalized by `n^dim`.
    pub fn spectrum(&self) -> &[Complex64] {
        self.spectrum.get_or_init(|| {
            let mut buf = self.samples.clone();
            if self.grid.dim() == 1 {
                fft::forward(&mut buf);
            } else {
                fft::transform_2d(&mut buf, self.grid.n(), false);
            }
            let s = 1.0 / self.grid.len() as f64;
            buf.iter_mut().for_each(|z| *z *= s);
            buf
        })
    }

    /// Normalized L² norm: `(mean |u|²)^{1/2}`.
    pub fn norm_l2(&self) -> f64 {
        (self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.samples.len() as f64).sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Normalized inner product `mean(u · conj(v))`.
    pub fn inner(&self, other: &ScalarField) -> Complex64 {
        let s: Complex64 = self.samples.iter().zip(&other.samples).map(|(a, b)| a * b.conj()).sum();
        s / self.samples.len() as f64
    }

    /// Applies a Fourier multiplier given as a function of the flat spectral
    /// index; the Nyquist line is always zeroed.
    pub fn apply_multiplier(&self, m: impl Fn(usize) -> Complex64) -> ScalarField {
        let grid = self.grid;
        let spec: Vec<Complex64> = self
            .spectrum()
            .iter()
            .enumerate()
            .map(|(i, &z)| if grid.is_nyquist(i) { Complex64::new(0.0, 0.0) } else { z * m(i) })
            .collect();
        ScalarField::from_spectrum(grid, spec).unwrap()
    }

    /// Same as [`apply_multiplier`](Self::apply_multiplier) for real symbols
    /// of the wave vector.
    pub fn apply_real_multiplier(&self, m: impl Fn([i64; 2]) -> f64) -> ScalarField {
        let grid = self.grid;
        self.apply_multiplier(|i| Complex64::new(m(grid.wavevector(i)), 0.0))
    }

    /// The field with its Nyquist line removed.
    pub fn without_nyquist(&self) -> ScalarField {
        self.apply_multiplier(|_| Complex64::new(1.0, 0.0))
    }

    /// Partial derivative along `axis`, computed spectrally.
    pub fn derivative(&self, axis: usize) -> ScalarField {
        let grid = self.grid;
        self.apply_multiplier(|i| Complex64::new(0.0, grid.wavevector(i)[axis] as f64))
    }

    pub fn pointwise_mul(&self, other: &ScalarField) -> Result<ScalarField> {
        self.zip(other, |a, b| a * b)
    }

    pub fn add(&self, other: &ScalarField) -> Result<ScalarField> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ScalarField) -> Result<ScalarField> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: Complex64) -> ScalarField {
        ScalarField::new(self.grid, self.samples.iter().map(|z| z * c).collect()).unwrap()
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> ScalarField {
        ScalarField::new(self.grid, self.samples.iter().map(|&z| f(z)).collect()).unwrap()
    }

    fn zip(&self, other: &ScalarField, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<ScalarField> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        ScalarField::new(self.grid, self.samples.iter().zip(&other.samples).map(|(&a, &b)| f(a, b)).collect())
    }

    /// Cyclic shift by `s` grid points along each axis.
    pub fn shift(&self, s: usize) -> ScalarField {
        let n = self.grid.n();
        let samples = (0..self.grid.len())
            .map(|i| {
                if self.grid.dim() == 1 {
                    self.samples[(i + s) % n]
                } else {
                    let (r, c) = (i / n, i % n);
                    self.samples[((r + s) % n) * n + (c + s) % n]
                }
            })
            .collect();
        ScalarField::new(self.grid, samples).unwrap()
    }
}

/// Transition bridge `h(s) = exp(-1/s)` for `s > 0`.
fn bridge(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// Alternative bridge `exp(-1/s²)`, used to compare admissible cutoffs.
fn bridge_squared(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / (s * s)).exp()
    } else {
        0.0
    }
}

/// Shape of the transition of χ on `(1, 2)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Bridge {
    /// `h(s) = exp(-1/s)`, the default everywhere.
    #[default]
    Exp,
    /// `h(s) = exp(-1/s²)`.
    ExpSquared,
}

/// χ built on the given bridge `h`: `h(2-r) / (h(2-r) + h(r-1))` on `(1, 2)`.
pub fn chi_bridge(r: f64, b: Bridge) -> f64 {
    let r = r.abs();
    if r <= 1.0 {
        1.0
    } else if r >= 2.0 {
        0.0
    } else {
        let h = match b {
            Bridge::Exp => bridge,
            Bridge::ExpSquared => bridge_squared,
        };
        let a = h(2.0 - r);
        a / (a + h(r - 1.0))
    }
}

/// Radial cutoff: 1 on `[0, 1]`, 0 on `[2, ∞)`, smooth and nonincreasing.
pub fn chi(r: f64) -> f64 {
    chi_bridge(r, Bridge::Exp)
}

/// `φ(r) = χ(r) - χ(2r)`, supported in `1/2 < r < 2`.
pub fn phi(r: f64) -> f64 {
    chi(r) - chi(2.0 * r)
}

/// Radial cutoff with plateau 1 and support 2.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RadialCutoff;

impl RadialCutoff {
    pub const PLATEAU_RADIUS: f64 = 1.0;
    pub const SUPPORT_RADIUS: f64 = 2.0;

    pub fn eval(&self, r: f64) -> f64 {
        chi(r)
    }

    pub fn annulus(&self, r: f64) -> f64 {
        phi(r)
    }
}

/// `Λ(k, γ) = (γ² + |k|²)^{1/2}`.
pub fn lambda_weight(k: &[f64], gamma: f64) -> Result<f64> {
    if gamma.is_nan() || gamma < 1.0 {
        return invalid(format!("gamma = {gamma} < 1"));
    }
    Ok((gamma * gamma + k.iter().map(|x| x * x).sum::<f64>()).sqrt())
}

/// Unchecked `Λ` for internal loops where γ has been validated.
pub(crate) fn lam(kabs: f64, gamma: f64) -> f64 {
    (gamma * gamma + kabs * kabs).sqrt()
}

/// Which family of dyadic blocks to use.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LpMode {
    /// `Δ₀ = χ(|D|)`, `Δ_j = φ(2^{-j}|D|)`.
    Classical,
    /// `Δ^γ_j = χ(2^{-(j+1)}Λ) - χ(2^{-j}Λ)` with `Λ = Λ(D, γ)`.
    Gamma(f64),
}

impl LpMode {
    fn check(&self) -> Result<()> {
        match *self {
            LpMode::Gamma(g) if g.is_nan() || g < 1.0 => invalid(format!("gamma = {g} < 1")),
            _ => Ok(()),
        }
    }

    fn radius(&self, kabs: f64) -> f64 {
        match *self {
            LpMode::Classical => kabs,
            LpMode::Gamma(g) => lam(kabs, g),
        }
    }

    /// Multiplier of the low-pass `S_j` at `|k|`: `χ(2^{-j}|k|)` or
    /// `χ(2^{-j}Λ)`.
    pub fn lowpass_weight(&self, j: i32, kabs: f64) -> f64 {
        chi(self.radius(kabs) * 2f64.powi(-j))
    }

    /// Multiplier of block `j` at `|k|`.
    pub fn block_weight(&self, j: usize, kabs: f64) -> f64 {
        let j = j as i32;
        match self {
            LpMode::Classical if j == 0 => chi(kabs),
            LpMode::Classical => self.lowpass_weight(j, kabs) - self.lowpass_weight(j - 1, kabs),
            LpMode::Gamma(_) => self.lowpass_weight(j + 1, kabs) - self.lowpass_weight(j, kabs),
        }
    }

    /// Weight of the γ-mode base piece `S^γ_0 = χ(Λ)`; zero in classical
    /// mode, where block 0 already is the low-frequency piece.
    pub fn base_weight(&self, kabs: f64) -> f64 {
        match self {
            LpMode::Classical => 0.0,
            LpMode::Gamma(_) => self.lowpass_weight(0, kabs),
        }
    }
}

/// Number of blocks needed for the sum (plus base piece in γ-mode) to be the
/// identity on the lattice without the Nyquist line. Scales above that are
/// identically zero on the grid and are not represented.
pub fn lp_block_count(grid: &PeriodicGrid, mode: LpMode) -> usize {
    let r = mode.radius(grid.max_kabs()).max(1.0);
    let top = r.log2().ceil().max(0.0) as usize;
    match mode {
        // S_J = identity once 2^J ≥ r; blocks 0..=J.
        LpMode::Classical => top + 1,
        // S^γ_J = identity once 2^J ≥ Λ_max; blocks 0..J.
        LpMode::Gamma(_) => top.max(1),
    }
}

/// Littlewood-Paley block `j` of `u`.
pub fn lp_block(u: &ScalarField, j: usize, mode: LpMode) -> Result<ScalarField> {
    mode.check()?;
    let grid = u.grid();
    Ok(u.apply_multiplier(|i| Complex64::new(mode.block_weight(j, grid.kabs(i)), 0.0)))
}

/// Low-pass `S_j u`: `χ(2^{-j}|D|)u` or `χ(2^{-j}Λ)u`. Classical mode
/// satisfies `S_j = Σ_{ν≤j} Δ_ν`; γ-mode satisfies
/// `S_j = S_0 + Σ_{ν<j} Δ^γ_ν` with the base piece `S_0`.
pub fn lp_lowpass(u: &ScalarField, j: i32, mode: LpMode) -> Result<ScalarField> {
    mode.check()?;
    let grid = u.grid();
    Ok(u.apply_multiplier(|i| Complex64::new(mode.lowpass_weight(j, grid.kabs(i)), 0.0)))
}

/// γ-mode base piece `χ(Λ(D, γ))u`; zero in classical mode.
pub fn lp_base(u: &ScalarField, mode: LpMode) -> Result<ScalarField> {
    mode.check()?;
    let grid = u.grid();
    Ok(u.apply_multiplier(|i| Complex64::new(mode.base_weight(grid.kabs(i)), 0.0)))
}

/// All blocks of `u`, in order.
pub fn lp_decompose(u: &ScalarField, mode: LpMode) -> Result<Vec<ScalarField>> {
    (0..lp_block_count(&u.grid(), mode)).map(|j| lp_block(u, j, mode)).collect()
}

/// Base piece plus the sum of all blocks.
pub fn lp_reconstruct(u: &ScalarField, mode: LpMode) -> Result<ScalarField> {
    let mut acc = lp_base(u, mode)?;
    for b in lp_decompose(u, mode)? {
        acc = acc.add(&b)?;
    }
    Ok(acc)
}

/// Complex Gaussian field with i.i.d. spectral coefficients weighted by
/// `profile(|k|)`; the Nyquist line is zero.
pub fn random_field(grid: PeriodicGrid, rng: &mut impl Rng, profile: impl Fn(f64) -> f64) -> ScalarField {
    let spec = (0..grid.len())
        .map(|i| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            if grid.is_nyquist(i) {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(re, im) * profile(grid.kabs(i))
            }
        })
        .collect();
    ScalarField::from_spectrum(grid, spec).unwrap()
}

/// Real field: the real part of a complex random field.
pub fn random_real_field(grid: PeriodicGrid, rng: &mut impl Rng, profile: impl Fn(f64) -> f64) -> ScalarField {
    random_field(grid, rng, profile).map(|z| Complex64::new(z.re, 0.0))
}

/// Field with unit-modulus random phases on the modes where `band(|k|)` is
/// true. Its L² norm is deterministic.
pub fn random_phase_field(grid: PeriodicGrid, rng: &mut impl Rng, band: impl Fn(f64) -> bool) -> ScalarField {
    let spec = (0..grid.len())
        .map(|i| {
            let theta: f64 = rng.random::<f64>() * 2.0 * PI;
            if !grid.is_nyquist(i) && band(grid.kabs(i)) {
                Complex64::from_polar(1.0, theta)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    ScalarField::from_spectrum(grid, spec).unwrap()
}

/// Gradient magnitude in L²: `(Σ |k|² |û_k|²)^{1/2}`.
pub fn grad_norm(u: &ScalarField) -> f64 {
    let grid = u.grid();
    u.spectrum()
        .iter()
        .enumerate()
        .map(|(i, z)| if grid.is_nyquist(i) { 0.0 } else { grid.kabs(i).powi(2) * z.norm_sqr() })
        .sum::<f64>()
        .sqrt()
}

/// Result of [`bernstein_check`].
#[derive(Clone, Debug)]
pub struct BernsteinReport {
    pub js: Vec<usize>,
    /// Mean over trials of `‖∇u‖/‖u‖` per block.
    pub ratios: Vec<f64>,
    /// Least-squares slope of `log ratio` against `j log 2`.
    pub slope: f64,
    /// Smallest `C` with `C⁻¹2^j ≤ ratio ≤ C·2^j` over all trials.
    pub constant: f64,
}

/// Fits the growth of `‖∇u‖/‖u‖` for random fields localized in classical
/// block `j`, over the given range of `j`.
pub fn bernstein_check(grid: PeriodicGrid, js: &[usize], trials: usize, rng: &mut impl Rng) -> Result<BernsteinReport> {
    if js.len() < 2 || trials == 0 {
        return invalid("need at least two blocks and one trial");
    }
    for &j in js {
        if 2f64.powi(j as i32 + 1) >= grid.n() as f64 / 2.0 {
            return Err(Error::Resolution(format!("block {j} does not fit a grid of {} points", grid.n())));
        }
    }
    let mut ratios = Vec::with_capacity(js.len());
    let mut constant: f64 = 1.0;
    for &j in js {
        let mut acc = 0.0;
        for _ in 0..trials {
            let u = lp_block(&random_field(grid, rng, |_| 1.0), j, LpMode::Classical)?;
            let r = grad_norm(&u) / u.norm_l2();
            let scale = 2f64.powi(j as i32);
            constant = constant.max(r / scale).max(scale / r);
            acc += r;
        }
        ratios.push(acc / trials as f64);
    }
    let x: Vec<f64> = js.iter().map(|&j| j as f64 * 2f64.ln()).collect();
    let y: Vec<f64> = ratios.iter().map(|r| r.ln()).collect();
    let (slope, _) = fit::line(&x, &y);
    Ok(BernsteinReport { js: js.to_vec(), ratios, slope, constant })
}
