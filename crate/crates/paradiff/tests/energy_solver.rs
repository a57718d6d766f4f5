use paradiff::coefficients::*;
use paradiff::energy::*;
use paradiff::paraops::sampled_norm;
use paradiff::parasymbols::{build_alpha_tilde, Linkage, Symbol};
use paradiff::random;
use paradiff::solver::*;
use paradiff::spectral_core::*;
use paradiff::Complex64;
use std::sync::Arc;

fn mode(g: PeriodicGrid, k: f64) -> ScalarField {
    ScalarField::from_fn(g, move |x| Complex64::from_polar(1.0, k * x[0]))
}

fn time_table(g: PeriodicGrid, t_final: f64, nt: usize, f: impl Fn(f64) -> f64) -> CoefficientField {
    let v = (0..nt).flat_map(|i| vec![f(t_final * i as f64 / (nt - 1) as f64); g.n()]).collect();
    CoefficientField::from_table(g, t_final, nt, v, RegularityClass::Zygmund, 1.0, 2.0).unwrap()
}

fn kernel() -> MollifierKernel {
    MollifierKernel::default()
}

#[test]
fn zero_data_gives_zero_trace() {
    let g = make_grid(32, 1).unwrap();
    let a = weierstrass_zygmund(g, 3, 1, Axis::TX, 0.5, 64, 1.0, 2.0).unwrap();
    let p = CauchyProblem::new(a, ScalarField::zeros(g), ScalarField::zeros(g), 0.5).unwrap();
    let traj = solve(&p).unwrap();
    let tr = energy_trace(&p, &traj, &EnergySettings::default()).unwrap();
    assert!(tr.rows.iter().all(|r| r.e == 0.0 && r.hhalf_u == 0.0 && r.hneghalf_dtu == 0.0));
}

#[test]
fn plane_wave_energy_matches_closed_form() {
    // a = 1, u = e^{ikx} cos(kt): E = k² sin²(kt)/Λ + Λ cos²(kt), which is
    // k²/Λ plus the drift γ² cos²(kt)/Λ.
    let g = make_grid(64, 1).unwrap();
    let (k, gamma) = (5.0, 1.0);
    let a = CoefficientField::constant(g, 1.0, 1.0, 2).unwrap();
    let p = CauchyProblem::new(a.clone(), mode(g, k), ScalarField::zeros(g), 1.0).unwrap().with_dt(1e-3);
    let traj = solve(&p).unwrap();
    let lam = (gamma * gamma + k * k).sqrt();
    for i in (0..traj.len()).step_by(37) {
        let t = traj.times[i];
        let ops = EnergyOperators::build(&a, t, gamma, Linkage::Banded, &kernel(), 0.0).unwrap();
        let st = tarama_state(&ops, &traj.u[i], &traj.dtu[i]).unwrap();
        let want = k * k * (k * t).sin().powi(2) / lam + lam * (k * t).cos().powi(2);
        assert!((st.e - want).abs() < 1e-8, "t {t}: {} vs {want}", st.e);
        let drift = gamma * gamma * (k * t).cos().powi(2) / lam;
        assert!((st.e - drift - k * k / lam).abs() < 1e-8);
    }
}

#[test]
fn static_alpha_leaves_v_unchanged() {
    let g = make_grid(64, 1).unwrap();
    let a = weierstrass_zygmund(g, 4, 5, Axis::X, 1.0, 2, 1.0, 2.0).unwrap();
    let ops = EnergyOperators::build(&a, 0.3, 2.0, Linkage::Banded, &kernel(), 0.0).unwrap();
    let mut rng = random::stream(5, "static");
    let u = random_field(g, &mut rng, |k| 1.0 / (1.0 + k));
    let dtu = random_field(g, &mut rng, |_| 1.0);
    let st = tarama_state(&ops, &u, &dtu).unwrap();
    let v = ops.a_neg_quarter.apply(&dtu, 0).unwrap();
    assert!(st.v.sub(&v).unwrap().norm_inf() <= 1e-14 * v.norm_inf().max(1.0));
}

#[test]
fn energy_equivalence_on_rough_alpha() {
    let g = make_grid(128, 1).unwrap();
    let a = weierstrass_zygmund(g, 5, 8, Axis::TX, 1.0, 200, 1.0, 2.0).unwrap();
    let ops = EnergyOperators::build(&a, 0.5, 1.0, Linkage::Banded, &kernel(), 0.0).unwrap();
    let mut rng = random::stream(8, "equivalence");
    for i in 0..10 {
        let u = random_field(g, &mut rng, |k| (1.0 + k).powf(-0.5 - 0.1 * i as f64));
        let dtu = random_field(g, &mut rng, |k| (1.0 + k).powf(0.5 - 0.1 * i as f64));
        let st = tarama_state(&ops, &u, &dtu).unwrap();
        let r = energy_equivalence(&st, &u, &dtu, 1.0).unwrap();
        assert!(r.upper <= 20.0 && r.lower <= 20.0, "{r:?}");
    }
    let z = ScalarField::zeros(g);
    assert!(energy_equivalence(&tarama_state(&ops, &z, &z).unwrap(), &z, &z, 1.0).is_none());
}

#[test]
fn energy_is_translation_invariant() {
    let g = make_grid(64, 1).unwrap();
    let w = weierstrass_zygmund(g, 4, 2, Axis::X, 1.0, 2, 1.0, 2.0).unwrap();
    let row = w.row(0).to_vec();
    let s = 11;
    let shifted: Vec<f64> = (0..64).map(|i| row[(i + s) % 64]).collect();
    let a0 = CoefficientField::stationary(g, &row, 1.0, 2, RegularityClass::Zygmund).unwrap();
    let a1 = CoefficientField::stationary(g, &shifted, 1.0, 2, RegularityClass::Zygmund).unwrap();
    let mut rng = random::stream(2, "translate");
    let u = random_field(g, &mut rng, |k| 1.0 / (1.0 + k));
    let dtu = random_field(g, &mut rng, |_| 1.0);
    let e0 = tarama_state(&EnergyOperators::build(&a0, 0.0, 1.0, Linkage::Banded, &kernel(), 0.0).unwrap(), &u, &dtu)
        .unwrap()
        .e;
    let ops1 = EnergyOperators::build(&a1, 0.0, 1.0, Linkage::Banded, &kernel(), 0.0).unwrap();
    let e1 = tarama_state(&ops1, &u.shift(s), &dtu.shift(s)).unwrap().e;
    assert!((e0 - e1).abs() <= 1e-12 * e0, "{e0} {e1}");
}

#[test]
fn energy_derivative_matches_difference_quotient() {
    // x-independent α(t), so the expansion of dE/dt is exact.
    let g = make_grid(32, 1).unwrap();
    let a = time_table(g, 1.0, 2049, |t| 1.5 + 0.4 * (3.0 * t).sin());
    let mut rng = random::stream(4, "derivative");
    let u0 = random_field(g, &mut rng, |k| if k <= 8.0 { 1.0 / (1.0 + k) } else { 0.0 });
    let u1 = random_field(g, &mut rng, |k| if k <= 8.0 { 1.0 } else { 0.0 });
    let p = CauchyProblem::new(a.clone(), u0, u1, 1.0).unwrap().with_dt(1.0 / 512.0);
    let traj = solve(&p).unwrap();
    let energy = |i: usize| {
        let ops = EnergyOperators::build(&a, traj.times[i], 1.0, Linkage::Banded, &kernel(), 0.0).unwrap();
        tarama_state(&ops, &traj.u[i], &traj.dtu[i]).unwrap().e
    };
    for i in [100, 250, 400] {
        let (h0, h1) = (traj.times[i] - traj.times[i - 1], traj.times[i + 1] - traj.times[i]);
        assert!((h0 - h1).abs() < 1e-12);
        let fd = (energy(i + 1) - energy(i - 1)) / (2.0 * h0);
        let t = traj.times[i];
        let ops = EnergyOperators::build(&a, t, 1.0, Linkage::Banded, &kernel(), 0.0).unwrap();
        let dttu = apply_l(&p, &traj.u[i], &traj.dtu[i], t).unwrap().scale(Complex64::new(-1.0, 0.0));
        let de = energy_derivative(&ops, &traj.u[i], &traj.dtu[i], &dttu).unwrap();
        assert!((de - fd).abs() <= 1e-3 * de.abs().max(1e-3), "t {t}: {de} vs {fd}");
    }
}

#[test]
fn q_vanishes_for_x_independent_alpha() {
    let g = make_grid(128, 1).unwrap();
    let a = CoefficientField::constant(g, 1.7, 1.0, 2).unwrap();
    let alpha = build_alpha_tilde(&a, 2.0, &[0.0]).unwrap();
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
    // The envelope bounds E^{1/2}, which grows like e^{t}.
    let f = gronwall_fit(&grow).unwrap();
    assert_eq!(f.lambda, 1.0);
    assert!((f.c - 1.0).abs() < 1e-12);
    assert!(flat.push(row(0.5, 1.0)).is_err());
}

#[test]
fn gronwall_rate_is_stable_across_resolution() {
    let mut lambdas = vec![];
    for n in [128, 256] {
        let g = make_grid(n, 1).unwrap();
        let a = weierstrass_zygmund(g, 4, 7, Axis::TX, 0.5, 64, 1.0, 2.0).unwrap();
        let (u0, u1) = paradiff::harness::suites::initial_data(g, 16, 0.6, 7).unwrap();
        let p = CauchyProblem::new(a, u0, u1, 0.5).unwrap();
        let traj = solve(&p).unwrap();
        let settings = EnergySettings { stride: 16, ..Default::default() };
        let fit = energy_trace(&p, &traj, &settings).unwrap().fit.unwrap();
        assert!(fit.closed && fit.c.is_finite());
        lambdas.push(fit.lambda);
    }
    let (l0, l1) = (lambdas[0], lambdas[1]);
    assert!((l0 - l1).abs() <= 0.5 * l0.max(l1), "{lambdas:?}");
}

#[test]
fn sigma_below_range_is_rejected() {
    let g = make_grid(32, 1).unwrap();
    let a = CoefficientField::constant(g, 1.0, 1.0, 2).unwrap();
    let p = CauchyProblem::new(a, mode(g, 1.0), ScalarField::zeros(g), 0.1).unwrap();
    let traj = solve(&p).unwrap();
    assert!(sigma_shifted_trace(&p, &traj, -0.6, &EnergySettings::default()).is_err());
    assert!(sigma_shifted_trace(&p, &traj, 1.0, &EnergySettings::default()).is_ok());
}

#[test]
fn dalembert_mode() {
    let g = make_grid(256, 1).unwrap();
    let a = CoefficientField::constant(g, 1.0, 1.0, 2).unwrap();
    let p = CauchyProblem::new(a, mode(g, 1.0), ScalarField::zeros(g), 1.0).unwrap().with_dt(1e-3);
    let traj = solve(&p).unwrap();
    let want = mode(g, 1.0).scale(Complex64::new(1f64.cos(), 0.0));
    assert!(traj.u.last().unwrap().sub(&want).unwrap().norm_inf() <= 1e-6);
    assert_eq!(*traj.times.last().unwrap(), 1.0);
}

#[test]
fn manufactured_solution_converges_at_fourth_order() {
    let r = paradiff::harness::suites::solver_sanity(3).unwrap();
    let c = r.check("rk4_order_error").unwrap();
    assert!(c.passed(), "{}", r.text());
}

#[test]
fn time_reversal_returns_to_the_data() {
    let g = make_grid(64, 1).unwrap();
    let w = weierstrass_zygmund(g, 4, 6, Axis::X, 1.0, 2, 1.0, 2.0).unwrap();
    let a = CoefficientField::stationary(g, w.row(0), 1.0, 2, RegularityClass::Zygmund).unwrap();
    let (u0, u1) = paradiff::harness::suites::initial_data(g, 10, 0.6, 6).unwrap();
    let dt = 1.0 / 1024.0;
    let fwd = solve(&CauchyProblem::new(a.clone(), u0.clone(), u1.clone(), 1.0).unwrap().with_dt(dt)).unwrap();
    let back_v = fwd.dtu.last().unwrap().scale(Complex64::new(-1.0, 0.0));
    let rev = CauchyProblem::new(a.time_reversed(), fwd.u.last().unwrap().clone(), back_v, 1.0).unwrap();
    let back = solve(&rev.with_dt(dt)).unwrap();
    let err = back.u.last().unwrap().sub(&u0).unwrap().norm_l2() + back.dtu.last().unwrap().add(&u1).unwrap().norm_l2();
    assert!(err <= 1e-6, "{err}");
}

#[test]
fn solve_map_is_linear() {
    let g = make_grid(64, 1).unwrap();
    let a = weierstrass_zygmund(g, 4, 3, Axis::TX, 0.5, 64, 1.0, 2.0).unwrap();
    let mut rng = random::stream(3, "linear");
    let band = |k: f64| if k <= 16.0 { 1.0 } else { 0.0 };
    let fields: Vec<ScalarField> = (0..4).map(|_| random_field(g, &mut rng, band)).collect();
    let src = |c: f64| -> Source { Arc::new(move |t: f64| vec![Complex64::new(c * t.cos(), 0.0); 64]) };
    let run = |u0: &ScalarField, u1: &ScalarField, c: f64| {
        let p = CauchyProblem::new(a.clone(), u0.clone(), u1.clone(), 0.5).unwrap().with_source(src(c));
        solve(&p).unwrap().u.last().unwrap().clone()
    };
    let (s, t) = (Complex64::new(0.7, 0.0), Complex64::new(-1.3, 0.0));
    let x = run(&fields[0], &fields[1], 1.0);
    let y = run(&fields[2], &fields[3], 2.0);
    let z = run(
        &fields[0].scale(s).add(&fields[2].scale(t)).unwrap(),
        &fields[1].scale(s).add(&fields[3].scale(t)).unwrap(),
        0.7 - 2.6,
    );
    let combo = x.scale(s).add(&y.scale(t)).unwrap();
    assert!(z.sub(&combo).unwrap().norm_inf() <= 1e-10 * combo.norm_inf());
}

#[test]
fn classical_energy_is_conserved_for_static_coefficients() {
    let g = make_grid(64, 1).unwrap();
    let a = CoefficientField::constant(g, 1.3, 1.0, 2).unwrap();
    let (u0, u1) = paradiff::harness::suites::initial_data(g, 12, 0.6, 1).unwrap();
    let p = CauchyProblem::new(a, u0, u1, 1.0).unwrap();
    let traj = solve(&p).unwrap();
    let e0 = classical_energy(&p, &traj.u[0], &traj.dtu[0], 0.0);
    for i in 0..traj.len() {
        let e = classical_energy(&p, &traj.u[i], &traj.dtu[i], traj.times[i]);
        assert!((e - e0).abs() <= 1e-4 * e0);
    }
}

#[test]
fn multiplier_symbols_build_energy_weights() {
    let g = make_grid(32, 1).unwrap();
    let gamma = 2.0;
    let alpha = Symbol::lambda_power(g, gamma, 2.0).unwrap();
    assert!(EnergyOperators::from_alpha(&alpha, 0.0, 0.0).is_err());
}
