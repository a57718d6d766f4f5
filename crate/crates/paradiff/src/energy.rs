//! The Tarama energy `E = ‖T_{α^{-1/4}}∂_t u - T_{∂_t α^{-1/4}}u‖² +
//! ‖T_{α^{1/4}}u‖²`, its comparison with the norm pair
//! `‖u‖_{H^{1/2}} + ‖∂_t u‖_{H^{-1/2}}`, the operator `Q` and Gronwall fits.

use crate::coefficients::{CoefficientField, MollifierKernel};
use crate::error::{invalid, Error, Result};
use crate::paraops::{quantize, quantize_raw, weighted_norm, LinearOp, ParaOp};
use crate::parasymbols::{
    build_alpha, build_cutoff, smooth_symbol, symbol_power, symbol_time_derivative, AdmissibleCutoff, Linkage, Symbol,
};
use crate::spectral_core::ScalarField;
use std::sync::Arc;

/// Paradifferential operators entering the energy at one time.
#[derive(Clone, Debug)]
pub struct EnergyOperators {
    pub t: f64,
    pub gamma: f64,
    pub sigma: f64,
    /// `T_{Λ^σ α^{1/4}}`.
    pub a_quarter: ParaOp,
    /// `T_{Λ^σ α^{-1/4}}`.
    pub a_neg_quarter: ParaOp,
    /// `T_{∂_t(Λ^σ α^{-1/4})}`.
    pub dt_a_neg_quarter: ParaOp,
    /// `T_{∂_t(Λ^σ α^{1/4})}`.
    pub dt_a_quarter: ParaOp,
    /// `T_{∂²_t(Λ^σ α^{-1/4})}`.
    pub dtt_a_neg_quarter: ParaOp,
}

fn quantize_with(a: &Symbol, psi: &AdmissibleCutoff) -> Result<ParaOp> {
    quantize(&smooth_symbol(&a.without_time_derivatives(), psi)?)
}

impl EnergyOperators {
    /// Operators from a positive symbol `α` that carries time derivatives
    /// (one time slice).
    pub fn from_alpha(alpha: &Symbol, t: f64, sigma: f64) -> Result<Self> {
        if !alpha.has_time_derivatives() {
            return invalid("alpha must carry time derivatives");
        }
        if alpha.n_times() != 1 {
            return invalid("energy operators are built one time slice at a time");
        }
        let grid = alpha.grid();
        let gamma = alpha.gamma;
        let psi = build_cutoff(gamma, &grid)?;
        let aq = symbol_power(alpha, 0.25)?;
        let anq = symbol_power(alpha, -0.25)?;
        let shift = Symbol::lambda_power(grid, gamma, sigma)?;
        let lift = |s: Symbol| -> Result<Symbol> {
            if sigma == 0.0 {
                Ok(s)
            } else {
                s.mul(&shift)
            }
        };
        Ok(Self {
            t,
            gamma,
            sigma,
            a_quarter: quantize_with(&lift(aq.without_time_derivatives())?, &psi)?,
            a_neg_quarter: quantize_with(&lift(anq.without_time_derivatives())?, &psi)?,
            dt_a_neg_quarter: quantize_with(&lift(symbol_time_derivative(&anq, 1)?)?, &psi)?,
            dt_a_quarter: quantize_with(&lift(symbol_time_derivative(&aq, 1)?)?, &psi)?,
            dtt_a_neg_quarter: quantize_with(&lift(symbol_time_derivative(&anq, 2)?)?, &psi)?,
        })
    }

    /// Builds `α` from `a` at time `t` and derives the operators.
    pub fn build(
        a: &CoefficientField,
        t: f64,
        gamma: f64,
        linkage: Linkage,
        kernel: &MollifierKernel,
        sigma: f64,
    ) -> Result<Self> {
        if sigma <= -0.5 {
            return invalid(format!("sigma = {sigma} must exceed -1/2"));
        }
        let alpha = build_alpha(a, gamma, linkage, &[t], kernel)?;
        Self::from_alpha(&alpha, t, sigma)
    }
}

/// `(v, w, E)` at one time.
#[derive(Clone, Debug)]
pub struct EnergyState {
    pub v: ScalarField,
    pub w: ScalarField,
    pub e: f64,
    pub t: f64,
}

pub fn tarama_state(ops: &EnergyOperators, u: &ScalarField, dtu: &ScalarField) -> Result<EnergyState> {
    let v = ops.a_neg_quarter.apply(dtu, 0)?.sub(&ops.dt_a_neg_quarter.apply(u, 0)?)?;
    let w = ops.a_quarter.apply(u, 0)?;
    let e = v.norm_l2().powi(2) + w.norm_l2().powi(2);
    Ok(EnergyState { v, w, e, t: ops.t })
}

/// `dE/dt` from the expansion after the cancellation of the `∂_t u` terms:
/// `2Re⟨v, T_{α^{-1/4}}∂²_t u - T_{∂²_t α^{-1/4}}u⟩ + 2Re⟨w, T_{∂_t α^{1/4}}u + T_{α^{1/4}}∂_t u⟩`.
pub fn energy_derivative(ops: &EnergyOperators, u: &ScalarField, dtu: &ScalarField, dttu: &ScalarField) -> Result<f64> {
    let st = tarama_state(ops, u, dtu)?;
    let dv = ops.a_neg_quarter.apply(dttu, 0)?.sub(&ops.dtt_a_neg_quarter.apply(u, 0)?)?;
    let dw = ops.dt_a_quarter.apply(u, 0)?.add(&ops.a_quarter.apply(dtu, 0)?)?;
    Ok(2.0 * st.v.inner(&dv).re + 2.0 * st.w.inner(&dw).re)
}

/// `‖u‖_{H^{σ+1/2}_γ} + ‖∂_t u‖_{H^{σ-1/2}_γ}`.
pub fn norm_pair(u: &ScalarField, dtu: &ScalarField, gamma: f64, sigma: f64) -> f64 {
    weighted_norm(u, gamma, sigma + 0.5) + weighted_norm(dtu, gamma, sigma - 0.5)
}

/// Result of [`energy_equivalence`].
#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    /// `E^{1/2}` over the norm pair.
    pub upper: f64,
    /// The norm pair over `E^{1/2}`.
    pub lower: f64,
}

/// Both ratios between `E^{1/2}` and the norm pair; `None` for zero data.
pub fn energy_equivalence(
    state: &EnergyState,
    u: &ScalarField,
    dtu: &ScalarField,
    gamma: f64,
) -> Option<EquivalenceReport> {
    let pair = norm_pair(u, dtu, gamma, 0.0);
    let e = state.e.sqrt();
    if pair == 0.0 || e == 0.0 {
        return None;
    }
    Some(EquivalenceReport { upper: e / pair, lower: pair / e })
}

/// Operators of the cancellation check at one time slice of `α`.
#[derive(Clone, Debug)]
pub struct QOperators {
    /// `T_{α^{1/4}}*T_{α^{1/4}} - T_{α^{-1/4}}*T_{α^{-1/4}} Re T_α`.
    pub q: LinearOp,
    /// `T_{α^{1/4}} - T_{α^{-1/4}}*T_{α^{-1/4}} Re T_α`: the first product
    /// with one factor deleted.
    pub q_bad: LinearOp,
    /// `T_{α^{1/4}}*T_{α^{1/4}} - Re T_{α^{1/2}}`.
    pub q_literal: LinearOp,
}

/// Builds `Q` and its miscancelled comparisons from an unsmoothed positive `α`.
pub fn q_operator(alpha: &Symbol, ti: usize) -> Result<QOperators> {
    let alpha = alpha.at_time(ti)?.without_time_derivatives();
    let op = |p: f64| -> Result<LinearOp> {
        let s = if p == 1.0 { alpha.clone() } else { symbol_power(&alpha, p)? };
        Arc::new(quantize_raw(&s)?).at(0)
    };
    let (aq, anq, a1, ah) = (op(0.25)?, op(-0.25)?, op(1.0)?, op(0.5)?);
    let gram = |t: &LinearOp| LinearOp::compose(vec![t.adjoint(), t.clone()]);
    let tail = LinearOp::compose(vec![gram(&anq), a1.re()]);
    Ok(QOperators {
        q: LinearOp::sub(gram(&aq), tail.clone()),
        q_bad: LinearOp::sub(aq.clone(), tail),
        q_literal: LinearOp::sub(gram(&aq), ah.re()),
    })
}

/// One row of an energy trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyRow {
    pub t: f64,
    pub e: f64,
    pub hhalf_u: f64,
    pub hneghalf_dtu: f64,
    /// `‖f‖ + residual`, the bound used for `‖Lu‖_{H^{-1/2}}`.
    pub hneghalf_lu: f64,
    pub hneghalf_f: f64,
    pub residual: f64,
}

/// Time series of energy rows with strictly increasing times.
#[derive(Clone, Debug, Default)]
pub struct EnergyTrace {
    pub rows: Vec<EnergyRow>,
    pub fit: Option<GronwallFit>,
}

impl EnergyTrace {
    pub fn push(&mut self, row: EnergyRow) -> Result<()> {
        if let Some(last) = self.rows.last() {
            if row.t <= last.t {
                return invalid("trace times must increase strictly");
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub const COLUMNS: [&'static str; 5] = ["t", "E", "Hhalf_u", "Hneghalf_dtu", "Hneghalf_Lu"];

    pub fn csv_rows(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| vec![r.t, r.e, r.hhalf_u, r.hneghalf_dtu, r.hneghalf_lu]).collect()
    }
}

/// `(C, λ)` of the Gronwall envelope.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GronwallFit {
    pub lambda: f64,
    pub c: f64,
    /// Whether some `λ ≤ 32` achieves `C ≤ 1`.
    pub closed: bool,
}

/// Scans `λ ∈ {0, 0.25, …, 32}` for the smallest rate with
/// `E(t)^{1/2} ≤ C e^{λt}(E(0)^{1/2} + ∫₀^t e^{-λτ}‖Lu‖ dτ)`, `C ≤ 1`.
/// `C(λ)` is the smallest constant making the bound hold on the trace.
pub fn gronwall_fit(trace: &EnergyTrace) -> Result<GronwallFit> {
    let rows = &trace.rows;
    if rows.is_empty() {
        return Err(Error::InvalidParameter("empty energy trace".into()));
    }
    let t0 = rows[0].t;
    let e0 = rows[0].e.sqrt();
    let c_of = |lambda: f64| -> f64 {
        let mut integral = 0.0;
        let mut c: f64 = 0.0;
        for (i, r) in rows.iter().enumerate() {
            if i > 0 {
                let p = &rows[i - 1];
                let f = |row: &EnergyRow| (-lambda * (row.t - t0)).exp() * row.hneghalf_lu;
                integral += 0.5 * (r.t - p.t) * (f(p) + f(r));
            }
            let bound = (lambda * (r.t - t0)).exp() * (e0 + integral);
            let lhs = r.e.sqrt();
            if bound > 0.0 {
                c = c.max(lhs / bound);
            } else if lhs > 0.0 {
                c = f64::INFINITY;
            }
        }
        if c == 0.0 {
            1.0
        } else {
            c
        }
    };
    let mut last = (32.0, c_of(32.0));
    for q in 0..=128 {
        let lambda = q as f64 * 0.25;
        let c = c_of(lambda);
        if c <= 1.0 + 1e-12 {
            return Ok(GronwallFit { lambda, c, closed: true });
        }
        last = (lambda, c);
    }
    Ok(GronwallFit { lambda: last.0, c: last.1, closed: false })
}

/// Energy trace helper: rows from precomputed states and norms.
pub fn trace_row(
    state: &EnergyState,
    u: &ScalarField,
    dtu: &ScalarField,
    sigma: f64,
    f_norm: f64,
    residual: f64,
) -> EnergyRow {
    EnergyRow {
        t: state.t,
        e: state.e,
        hhalf_u: weighted_norm(u, 1.0, sigma + 0.5),
        hneghalf_dtu: weighted_norm(dtu, 1.0, sigma - 0.5),
        hneghalf_lu: f_norm + residual,
        hneghalf_f: f_norm,
        residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::CoefficientField;
    use crate::paraops::sampled_norm;
    use crate::parasymbols::with_static_time;
    use crate::spectral_core::{lam, make_grid};
    use num_complex::Complex64;

    #[test]
    fn zero_data_has_zero_energy() {
        let g = make_grid(64, 1).unwrap();
        let a = CoefficientField::constant(g, 1.0, 1.0, 2).unwrap();
        let ops = EnergyOperators::build(&a, 0.5, 1.0, Linkage::Banded, &MollifierKernel::default(), 0.0).unwrap();
        let z = ScalarField::zeros(g);
        let st = tarama_state(&ops, &z, &z).unwrap();
        assert_eq!(st.e, 0.0);
        assert!(energy_equivalence(&st, &z, &z, 1.0).is_none());
    }

    #[test]
    fn constant_coefficients_give_lambda_weights() {
        let g = make_grid(64, 1).unwrap();
        let gamma = 2.0;
        let a = CoefficientField::constant(g, 1.0, 1.0, 2).unwrap();
        let ops = EnergyOperators::build(&a, 0.5, gamma, Linkage::Banded, &MollifierKernel::default(), 0.0).unwrap();
        let k = 5i64;
        let u = ScalarField::from_fn(g, |x| Complex64::new(0.0, k as f64 * x[0]).exp());
        let dtu = u.scale(Complex64::new(0.3, 0.0));
        let st = tarama_state(&ops, &u, &dtu).unwrap();
        let l = lam(k as f64, gamma);
        let want = 0.09 / l + l;
        assert!((st.e - want).abs() < 1e-12 * want);
    }

    #[test]
    fn q_vanishes_for_multipliers() {
        let g = make_grid(64, 1).unwrap();
        let alpha = with_static_time(&Symbol::lambda_power(g, 1.0, 2.0).unwrap());
        let q = q_operator(&alpha, 0).unwrap();
        assert!(sampled_norm(&q.q, &g, 4, 1) < 1e-12);
    }

    #[test]
    fn gronwall_examples() {
        let row = |t: f64, e: f64| EnergyRow {
            t,
            e,
            hhalf_u: 0.0,
            hneghalf_dtu: 0.0,
            hneghalf_lu: 0.0,
            hneghalf_f: 0.0,
            residual: 0.0,
        };
        let mut flat = EnergyTrace::default();
        let mut grow = EnergyTrace::default();
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            flat.push(row(t, 3.0)).unwrap();
            grow.push(row(t, 3.0 * (2.0 * t).exp())).unwrap();
        }
        let f = gronwall_fit(&flat).unwrap();
        assert_eq!((f.lambda, f.c), (0.0, 1.0));
        // E^{1/2} grows like e^{t}.
        let f = gronwall_fit(&grow).unwrap();
        assert_eq!(f.lambda, 1.0);
        assert!((f.c - 1.0).abs() < 1e-12);
        assert!(gronwall_fit(&EnergyTrace::default()).is_err());
        assert!(flat.push(row(0.5, 1.0)).is_err());
    }
}
