use paradiff::coefficients::*;
use paradiff::energy::*;
use paradiff::function_spaces::*;
use paradiff::paraops::*;
use paradiff::parasymbols::*;
use paradiff::random;
use paradiff::spectral_core::*;
use paradiff::Complex64;
use proptest::prelude::*;
use std::sync::Arc;

fn field(n: usize, seed: u64, decay: f64) -> ScalarField {
    let g = make_grid(n, 1).unwrap();
    random_field(g, &mut random::stream(seed, "prop"), move |k| (1.0 + k).powf(-decay))
}

fn rel(a: &ScalarField, b: &ScalarField) -> f64 {
    a.sub(b).unwrap().norm_inf() / b.norm_inf().max(1e-300)
}

fn table(n: usize, nt: usize, f: impl Fn(f64, f64) -> f64) -> CoefficientField {
    let g = make_grid(n, 1).unwrap();
    let xs = g.points();
    let v = (0..nt).flat_map(|i| xs.iter().map(|&x| f(i as f64 / (nt - 1) as f64, x)).collect::<Vec<_>>()).collect();
    CoefficientField::from_table(g, 1.0, nt, v, RegularityClass::Zygmund, 0.01, 100.0).unwrap()
}

fn sizes() -> impl Strategy<Value = usize> {
    prop_oneof![Just(32usize), Just(64), Just(128)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn lp_reconstruction_and_orthogonality(n in sizes(), seed in any::<u64>(), gamma in 1.0f64..8.0) {
        let u = field(n, seed, 0.0);
        for mode in [LpMode::Classical, LpMode::Gamma(gamma)] {
            prop_assert!(rel(&lp_reconstruct(&u, mode).unwrap(), &u) <= 1e-12);
        }
        let count = lp_block_count(&u.grid(), LpMode::Classical);
        for j in 0..count {
            let bj = lp_block(&u, j, LpMode::Classical).unwrap();
            for l in (j + 2)..count {
                prop_assert!(lp_block(&bj, l, LpMode::Classical).unwrap().norm_l2() <= 1e-12 * u.norm_l2());
            }
        }
    }

    #[test]
    fn blocks_commute_with_lowpass(n in sizes(), seed in any::<u64>(), j in 0usize..5, l in 0i32..6) {
        let u = field(n, seed, 0.5);
        let a = lp_lowpass(&lp_block(&u, j, LpMode::Classical).unwrap(), l, LpMode::Classical).unwrap();
        let b = lp_block(&lp_lowpass(&u, l, LpMode::Classical).unwrap(), j, LpMode::Classical).unwrap();
        prop_assert!(a.sub(&b).unwrap().norm_inf() <= 1e-12 * u.norm_inf());
    }

    #[test]
    fn sobolev_norm_grows_with_s(seed in any::<u64>(), s in -2.0f64..2.0, ds in 0.0f64..1.5) {
        let u = field(64, seed, 1.0);
        prop_assert!(sobolev_norm(&u, s) <= sobolev_norm(&u, s + ds) * (1.0 + 1e-12));
    }

    #[test]
    fn seminorms_are_homogeneous(seed in any::<u64>(), c in -5.0f64..5.0) {
        let u = field(128, seed, 1.0).real_parts();
        let g = make_grid(128, 1).unwrap();
        let cu: Vec<f64> = u.iter().map(|v| c * v).collect();
        let z = zygmund_seminorm(&Sampled::periodic_real(&u, g.dx()).unwrap());
        let zc = zygmund_seminorm(&Sampled::periodic_real(&cu, g.dx()).unwrap());
        prop_assert!((zc - c.abs() * z).abs() <= 1e-12 * z.max(1.0));
        let h = holder_seminorm(&Sampled::periodic_real(&u, g.dx()).unwrap(), 0.5).unwrap();
        let hc = holder_seminorm(&Sampled::periodic_real(&cu, g.dx()).unwrap(), 0.5).unwrap();
        prop_assert!((hc - c.abs() * h).abs() <= 1e-12 * h.max(1.0));
    }

    #[test]
    fn mollification_is_linear(p in 0.1f64..3.0, q in 0.1f64..3.0, w in 1.0f64..9.0) {
        let k = MollifierKernel::default();
        let a = table(16, 513, |t, x| 2.0 + (w * t + x).sin());
        let b = table(16, 513, |t, _| 1.5 + (t - 0.4).abs());
        let ab = table(16, 513, |t, x| p * (2.0 + (w * t + x).sin()) + q * (1.5 + (t - 0.4).abs()));
        let (ma, mb, mab) = (mollify_time(&a, 0.125, &k).unwrap(), mollify_time(&b, 0.125, &k).unwrap(), mollify_time(&ab, 0.125, &k).unwrap());
        for i in 0..ab.values().len() {
            let want = p * ma.value.values()[i] + q * mb.value.values()[i];
            prop_assert!((mab.value.values()[i] - want).abs() <= 1e-12 * want.abs());
            let d = p * ma.d1[i] + q * mb.d1[i];
            prop_assert!((mab.d1[i] - d).abs() <= 1e-10 * (1.0 + d.abs()));
        }
    }

    #[test]
    fn mollification_commutes_with_time_reversal(w in 1.0f64..9.0, phase in 0.0f64..6.0) {
        let k = MollifierKernel::default();
        let a = table(16, 513, |t, x| 2.0 + (w * t * t + x + phase).cos());
        let m = mollify_time(&a, 0.0625, &k).unwrap();
        let r = mollify_time(&a.time_reversed(), 0.0625, &k).unwrap();
        let (nt, n) = (a.nt(), 16);
        for i in 0..nt {
            for x in 0..n {
                let (f, b) = (i * n + x, (nt - 1 - i) * n + x);
                prop_assert!((r.value.values()[f] - m.value.values()[b]).abs() <= 1e-12);
                prop_assert!((r.d1[f] + m.d1[b]).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn mollification_commutes_with_x_multipliers(w in 1.0f64..9.0, c in 0.5f64..2.0) {
        let k = MollifierKernel::default();
        let mx = |x: f64| c + 0.3 * x.cos();
        let a = table(16, 513, |t, _| 2.0 + (w * t).sin());
        let am = table(16, 513, |t, x| (2.0 + (w * t).sin()) * mx(x));
        let (ma, mam) = (mollify_time(&a, 0.125, &k).unwrap(), mollify_time(&am, 0.125, &k).unwrap());
        let xs = a.grid().points();
        for i in 0..a.nt() {
            for (x, &xv) in xs.iter().enumerate() {
                let want = ma.value.row(i)[x] * mx(xv);
                prop_assert!((mam.value.row(i)[x] - want).abs() <= 1e-12 * want.abs());
            }
        }
    }

    #[test]
    fn constant_symbols_survive_smoothing_and_quantize_to_scalars(c in -4.0f64..4.0, gamma in 1.0f64..16.0, seed in any::<u64>()) {
        let g = make_grid(64, 1).unwrap();
        let a = Symbol::multiplier(g, gamma, 0.0, |_| c).unwrap();
        let s = smooth_symbol(&a, &build_cutoff(gamma, &g).unwrap()).unwrap();
        prop_assert!(s.sub(&a).unwrap().sup(0) <= 1e-12 * c.abs().max(1.0));
        let u = field(64, seed, 0.0).without_nyquist();
        let tu = quantize(&s).unwrap().apply(&u, 0).unwrap();
        prop_assert!(tu.sub(&u.scale(Complex64::new(c, 0.0))).unwrap().norm_inf() <= 1e-12 * u.norm_inf() * c.abs().max(1.0));
    }

    #[test]
    fn adjoint_satisfies_inner_product_identity(seed in any::<u64>(), amp in 0.0f64..0.9, m in -1.0f64..2.0) {
        let g = make_grid(64, 1).unwrap();
        let b: Vec<f64> = g.points().iter().map(|x| 1.0 + amp * (3.0 * x).sin()).collect();
        let a = Symbol::function_of_x(g, 2.0, &b).unwrap().mul(&Symbol::lambda_power(g, 2.0, m).unwrap()).unwrap();
        let t = Arc::new(quantize_raw(&a).unwrap());
        let ts = t.adjoint();
        let (u, v) = (field(64, seed, 1.0), field(64, seed ^ 0x5a5a, 1.0));
        let lhs = t.apply(&u, 0).unwrap().inner(&v);
        let rhs = u.inner(&ts.apply(&v, 0).unwrap());
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }

    #[test]
    fn energy_is_shift_invariant(shift in 0usize..64, seed in 0u64..1000) {
        let g = make_grid(64, 1).unwrap();
        let w = weierstrass_zygmund(g, 3, seed, Axis::X, 1.0, 2, 1.0, 2.0).unwrap();
        let row = w.row(0).to_vec();
        let moved: Vec<f64> = (0..64).map(|i| row[(i + shift) % 64]).collect();
        let k = MollifierKernel::default();
        let build = |s: &[f64]| {
            let a = CoefficientField::stationary(g, s, 1.0, 2, RegularityClass::Zygmund).unwrap();
            EnergyOperators::build(&a, 0.0, 1.0, Linkage::Banded, &k, 0.0).unwrap()
        };
        let (u, dtu) = (field(64, seed, 1.0), field(64, seed + 1, 0.0));
        let e0 = tarama_state(&build(&row), &u, &dtu).unwrap().e;
        let e1 = tarama_state(&build(&moved), &u.shift(shift), &dtu.shift(shift)).unwrap().e;
        prop_assert!((e0 - e1).abs() <= 1e-12 * e0);
    }

    #[test]
    fn generators_are_deterministic(seed in any::<u64>(), depth in 1usize..5) {
        prop_assert_eq!(field(32, seed, 0.5), field(32, seed, 0.5));
        let g = make_grid(32, 1).unwrap();
        let a = weierstrass_zygmund(g, depth, seed, Axis::TX, 1.0, 9, 1.0, 2.0).unwrap();
        let b = weierstrass_zygmund(g, depth, seed, Axis::TX, 1.0, 9, 1.0, 2.0).unwrap();
        prop_assert_eq!(a.values(), b.values());
    }
}
