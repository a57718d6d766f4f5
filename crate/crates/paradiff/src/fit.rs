//! Small least-squares helpers shared by the fitting reports.

/// Ordinary least squares for `y ≈ X β` with X given column-wise.
/// Returns the coefficients and the root-mean-square residual.
pub fn least_squares(columns: &[Vec<f64>], y: &[f64]) -> (Vec<f64>, f64) {
    let p = columns.len();
    let m = y.len();
    // Normal equations; p ≤ 3 here so conditioning is acceptable once the
    // columns are centred-and-scaled by the caller's choice of regressors.
    let mut a = vec![vec![0.0; p + 1]; p];
    for i in 0..p {
        for j in 0..p {
            a[i][j] = (0..m).map(|r| columns[i][r] * columns[j][r]).sum();
        }
        a[i][p] = (0..m).map(|r| columns[i][r] * y[r]).sum();
    }
    for c in 0..p {
        let piv = (c..p).max_by(|&x, &z| a[x][c].abs().partial_cmp(&a[z][c].abs()).unwrap()).unwrap();
        a.swap(c, piv);
        let d = a[c][c];
        for r in 0..p {
            if r != c && d != 0.0 {
                let f = a[r][c] / d;
                let (src, dst) = if r < c {
                    let (lo, hi) = a.split_at_mut(c);
                    (&hi[0], &mut lo[r])
                } else {
                    let (lo, hi) = a.split_at_mut(r);
                    (&lo[c], &mut hi[0])
                };
                for (x, y) in dst[c..=p].iter_mut().zip(&src[c..=p]) {
                    *x -= f * y;
                }
            }
        }
    }
    let beta: Vec<f64> = (0..p).map(|i| if a[i][i] != 0.0 { a[i][p] / a[i][i] } else { 0.0 }).collect();
    let rss: f64 = (0..m)
        .map(|r| {
            let pred: f64 = (0..p).map(|i| beta[i] * columns[i][r]).sum();
            (y[r] - pred).powi(2)
        })
        .sum();
    (beta, (rss / m as f64).sqrt())
}

/// Slope and intercept of `y ≈ s x + c`.
pub fn line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let (b, _) = least_squares(&[x.to_vec(), vec![1.0; x.len()]], y);
    (b[0], b[1])
}
