//! Thin wrappers over rustfft with a per-thread planner. Transforms are
//! unnormalized in both directions.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub(crate) fn forward(buf: &mut [Complex64]) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    plan.process(buf);
}

pub(crate) fn inverse(buf: &mut [Complex64]) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()));
    plan.process(buf);
}

/// Forward or inverse transform of an `n × n` row-major array.
pub(crate) fn transform_2d(buf: &mut [Complex64], n: usize, inv: bool) {
    let run = |row: &mut [Complex64]| if inv { inverse(row) } else { forward(row) };
    for row in buf.chunks_mut(n) {
        run(row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for c in 0..n {
        for r in 0..n {
            col[r] = buf[r * n + c];
        }
        run(&mut col);
        for r in 0..n {
            buf[r * n + c] = col[r];
        }
    }
}
