use paradiff::coefficients::*;
use paradiff::spectral_core::make_grid;
use std::f64::consts::PI;

fn table(n: usize, t_final: f64, nt: usize, f: impl Fn(f64, f64) -> f64) -> CoefficientField {
    let g = make_grid(n, 1).unwrap();
    let xs = g.points();
    let mut v = Vec::with_capacity(nt * n);
    for i in 0..nt {
        let t = t_final * i as f64 / (nt - 1) as f64;
        v.extend(xs.iter().map(|&x| f(t, x)));
    }
    CoefficientField::from_table(g, t_final, nt, v, RegularityClass::Zygmund, 0.1, 10.0).unwrap()
}

#[test]
fn weierstrass_depth_one_is_affine_in_cosine() {
    let g = make_grid(64, 1).unwrap();
    let a = weierstrass_zygmund(g, 1, 4, Axis::TX, 1.0, 9, 1.0, 3.0).unwrap();
    let w = a.source().unwrap();
    for i in 0..a.nt() {
        let row = a.row(i);
        assert!(row.iter().all(|&v| (1.0..=3.0).contains(&v)));
        // One term: a = 2 + cos(x + φ) cos(t + θ), so a - 2 is a single x-mode.
        let t = a.time(i);
        for (k, &x) in g.points().iter().enumerate() {
            assert!((row[k] - w.eval(t, x)).abs() < 1e-14);
        }
        let r = a.row_field(i);
        let s = r.spectrum();
        let off: f64 = (0..64).filter(|&j| g.freq(j).abs() > 1).map(|j| s[j].norm()).sum();
        assert!(off < 1e-13);
    }
    assert!(weierstrass_zygmund(g, 7, 4, Axis::X, 1.0, 2, 1.0, 2.0).is_err());
}

#[test]
fn mollifier_reproduces_constants_and_affine() {
    let k = MollifierKernel::default();
    let c = table(16, 4.0, 4097, |_, _| 2.0);
    let m = mollify_time(&c, 0.25, &k).unwrap();
    assert!(m.value.values().iter().all(|&v| v == 2.0));
    assert!(m.d1.iter().chain(&m.d2).all(|&v| v.abs() < 1e-12));

    let lin = table(16, 4.0, 4097, |t, _| 1.0 + t);
    let m = mollify_time(&lin, 0.25, &k).unwrap();
    // Interior rows, away from the reflection.
    for i in 512..3584 {
        let t = lin.time(i);
        assert!(m.value.row(i).iter().all(|&v| (v - (1.0 + t)).abs() < 1e-12));
    }
}

/// `∫ρ(σ)|σ| dσ` for `ρ ∝ exp(-1/(1-σ²))`, by composite Simpson on an
/// independent node set.
fn abs_moment_oracle() -> f64 {
    let bump = |s: f64| if s.abs() < 1.0 { (-1.0 / (1.0 - s * s)).exp() } else { 0.0 };
    let simpson = |f: &dyn Fn(f64) -> f64| {
        let m = 40_000;
        let h = 2.0 / m as f64;
        let mut acc = f(-1.0) + f(1.0);
        for i in 1..m {
            let s = -1.0 + i as f64 * h;
            acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(s);
        }
        acc * h / 3.0
    };
    simpson(&|s| bump(s) * s.abs()) / simpson(&bump)
}

#[test]
fn kink_offset_is_first_absolute_moment() {
    let k = MollifierKernel::default();
    let oracle = abs_moment_oracle();
    assert!((k.abs_moment() - oracle).abs() < 1e-9);
    assert!((oracle - ABS_MOMENT).abs() < 1e-9);
    let t_final = 2.0;
    let nt = 8193;
    let a = table(16, t_final, nt, |t, _| 1.0 + (t - 1.0).abs());
    for eps in [0.25, 0.125] {
        let s = mollify_at(&a, 1.0, eps, &k).unwrap();
        // The table quadrature is exact up to the node spacing.
        assert!(s.value.iter().all(|&v| (v - 1.0 - eps * oracle).abs() < 1e-5 * eps), "{:?}", s.value[0] - 1.0);
    }
}

const ABS_MOMENT: f64 = 0.33445399770997414;

#[test]
fn mollification_report_examples() {
    let k = MollifierKernel::default();
    let ladder: Vec<f64> = (2..=6).map(|p| 2f64.powi(-p)).collect();
    let c = table(16, 2.0 * PI, 8193, |_, _| 1.5);
    let r = mollification_report(&c, &ladder, &k).unwrap();
    assert!(r.sup_diff.iter().chain(&r.sup_d1).chain(&r.sup_d2).all(|&v| v < 1e-12));
    assert_eq!((r.min_value, r.max_value), (1.5, 1.5));

    let s = table(16, 2.0 * PI, 8193, |t, _| 2.0 + t.sin());
    let r = mollification_report(&s, &ladder, &k).unwrap();
    assert!(r.sup_d1.iter().all(|&v| v <= 1.0 + 1e-9), "{:?}", r.sup_d1);
    assert!(r.min_value >= 1.0 && r.max_value <= 3.0);
}

#[test]
fn mollification_respects_bounds_on_rough_fields() {
    let g = make_grid(16, 1).unwrap();
    let a = weierstrass_zygmund(g, 3, 3, Axis::TX, 1.0, 2049, 0.5, 4.0).unwrap();
    let m = mollify_time(&a, 0.125, &MollifierKernel::default()).unwrap();
    assert!(m.value.values().iter().all(|&v| (0.5..=4.0).contains(&v)));
}

#[test]
fn under_resolved_ladders_are_rejected() {
    let k = MollifierKernel::default();
    let a = table(16, 1.0, 33, |t, _| 1.0 + t);
    assert!(mollify_time(&a, 0.05, &k).is_err());
    assert!(mollify_time(&a, 2.0, &k).is_err());
    assert!(mollify_time(&a, 0.0, &k).is_err());
}
