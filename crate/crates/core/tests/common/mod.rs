//! Independent numeric oracles shared by the integration tests.
#![allow(dead_code)]

/// Composite Gauss–Legendre quadrature (5 points per panel).
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    const X: [f64; 5] = [0.0, 0.538_469_310_105_683_1, -0.538_469_310_105_683_1, 0.906_179_845_938_664, -0.906_179_845_938_664];
    const W: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let mid = a + (p as f64 + 0.5) * h;
            X.iter().zip(W).map(|(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h
        })
        .sum()
}

/// `ln Γ(n)` for a positive integer `n`.
pub fn ln_gamma_int(n: usize) -> f64 {
    (1..n).map(|k| (k as f64).ln()).sum()
}

/// Regularized incomplete beta `I_x(a, b)` by quadrature of the density.
pub fn beta_cdf(x: f64, a: usize, b: usize) -> f64 {
    let ln_c = ln_gamma_int(a + b) - ln_gamma_int(a) - ln_gamma_int(b);
    integrate(|t| (ln_c + (a - 1) as f64 * t.ln() + (b - 1) as f64 * (1.0 - t).ln()).exp(), 0.0, x, 200)
}

/// Kolmogorov–Smirnov distance between a sample and a continuous CDF.
pub fn ks_distance(mut samples: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic two-sided KS critical value at level 0.01.
pub fn ks_critical_01(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

/// Coefficient of determination of a least-squares fit `y ≈ Σ c_k f_k(x)`.
pub fn fit_r_squared(xs: &[f64], ys: &[f64], basis: &[fn(f64) -> f64]) -> (Vec<f64>, f64) {
    let k = basis.len();
    let a = nalgebra::DMatrix::from_fn(xs.len(), k, |i, j| basis[j](xs[i]));
    let y = nalgebra::DVector::from_column_slice(ys);
    let coef = a.clone().svd(true, true).solve(&y, 1e-14).expect("svd solve");
    let fitted = &a * &coef;
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_res: f64 = ys.iter().zip(fitted.iter()).map(|(y, f)| (y - f).powi(2)).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
    (coef.iter().copied().collect(), 1.0 - ss_res / ss_tot)
}
