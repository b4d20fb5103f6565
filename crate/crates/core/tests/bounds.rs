mod common;

use std::f64::consts::LN_2;

use common::{beta_cdf, integrate, ln_gamma_int};
use vandersparse::bounds::{
    asymptotic_bound, binary_entropy, cap_area_ratio, distortion_lower_bound, kappa_0, kappa_c, lambda_bound,
    log_binomial, rho_0, BoundInput, Branch,
};

fn grid() -> impl Iterator<Item = f64> {
    (1..=99).map(|k| k as f64 / 100.0)
}

/// Every `(N, L)` with `N ≤ 20` and `1 ≤ L ≤ N − 2`.
fn mid_pairs() -> impl Iterator<Item = (usize, usize)> {
    (3..=20).flat_map(|n| (1..=n - 2).map(move |l| (n, l)))
}

#[test]
fn beta_density_is_dominated_by_the_tilted_power() {
    for (n, l) in mid_pairs() {
        let slope = (l as f64 - 1.0) / (n - l - 1) as f64;
        let p = (n - l - 1) as i32;
        for rho in grid() {
            let lhs = integrate(|x| x.powi(p) * (1.0 - x).powi(l as i32 - 1), 0.0, rho, 40);
            let rhs = integrate(|x| (x / (1.0 + x * slope)).powi(p), 0.0, rho, 40);
            assert!(lhs <= rhs * (1.0 + 1e-12), "N={n} L={l} ρ={rho}: {lhs} > {rhs}");
        }
    }
}

#[test]
fn beta_normalizer_is_dominated_by_the_entropy_bound() {
    for (n, l) in mid_pairs() {
        let lhs = ln_gamma_int(n) - ln_gamma_int(n - l) - ln_gamma_int(l);
        let h = binary_entropy((l as f64 - 1.0) / (n as f64 - 2.0)).unwrap();
        let rhs = ((n - 1) as f64).ln() + (n as f64 - 2.0) * h * LN_2;
        assert!(lhs <= rhs + 1e-12, "N={n} L={l}: {lhs} > {rhs}");
    }
}

#[test]
fn union_term_is_dominated_by_lambda() {
    for (n, l) in mid_pairs() {
        for m in [n, 2 * n, 4 * n] {
            let input = BoundInput::new(n, m, l).unwrap();
            let t = input.log_t.exp();
            for rho in grid() {
                let union = t * cap_area_ratio(rho, n, l).unwrap();
                let lambda = lambda_bound(rho, &input).unwrap();
                assert!(union <= lambda * (1.0 + 1e-12), "N={n} M={m} L={l} ρ={rho}");
            }
        }
    }
}

#[test]
fn cap_area_matches_quadrature_oracle() {
    for n in 2..=12 {
        for l in 1..n {
            let mut prev = 0.0;
            for rho in grid() {
                let exact = cap_area_ratio(rho, n, l).unwrap();
                let oracle = beta_cdf(rho, n - l, l);
                assert!((exact - oracle).abs() <= 1e-10, "N={n} L={l} ρ={rho}: {exact} vs {oracle}");
                assert!(exact >= prev);
                prev = exact;
            }
            assert_eq!(cap_area_ratio(0.0, n, l).unwrap(), 0.0);
            assert_eq!(cap_area_ratio(1.0, n, l).unwrap(), 1.0);
        }
    }
    assert!((cap_area_ratio(0.5, 3, 2).unwrap() - 0.75).abs() < 1e-15);
    assert!((cap_area_ratio(0.3, 4, 2).unwrap() - 0.216).abs() < 1e-14);
}

#[test]
fn reports_are_valid_on_the_full_sweep() {
    for n in 1..=30 {
        for m in n..=4 * n {
            for l in 0..=n {
                let input = BoundInput::new(n, m, l).unwrap();
                let report = distortion_lower_bound(&input).unwrap();
                assert!((0.0..=1.0).contains(&report.lower_bound), "N={n} M={m} L={l}: {}", report.lower_bound);
                if let Some(rho) = report.rho_0 {
                    assert!((0.0..=1.0).contains(&rho), "N={n} M={m} L={l}: ρ₀ = {rho}");
                }
                if report.branch == Branch::Mid {
                    let k = report.kappa_c.unwrap();
                    assert!((l as f64 - 1.0) / (n - l - 1) as f64 * k < 1.0);
                    let at_root = lambda_bound(report.rho_0.unwrap(), &input).unwrap();
                    assert!((at_root - 1.0).abs() <= 1e-10, "N={n} M={m} L={l}: Λ(ρ₀) = {at_root}");
                }
            }
        }
    }
}

#[test]
fn last_branch_matches_direct_integration() {
    for n in 2..=30 {
        for m in [n, n + 1, 2 * n, 4 * n] {
            let input = BoundInput::new(n, m, n - 1).unwrap();
            let report = distortion_lower_bound(&input).unwrap();
            let rho = report.rho_0.unwrap();
            let t = input.log_t.exp();
            let oracle = integrate(|eta| 1.0 - t * (1.0 - (1.0 - eta).powi(n as i32 - 1)), 0.0, rho, 200);
            assert!((report.lower_bound - oracle).abs() <= 1e-8, "N={n} M={m}: {} vs {oracle}", report.lower_bound);
        }
    }
}

#[test]
fn worked_values_by_direct_arithmetic() {
    // N = 6, M = 12, L = 2: T = 66, H(1/4)
    let h = -(0.25f64 * 0.25f64.log2() + 0.75 * 0.75f64.log2());
    let k = (66.0 * 5.0 * 2f64.powf(4.0 * h)).powf(-1.0 / 3.0);
    let rho = k / (1.0 - k / 3.0);
    let lb = rho - rho * rho / (k * 4.0);
    let input = BoundInput::new(6, 12, 2).unwrap();
    assert!((kappa_c(&input).unwrap() - k).abs() < 1e-14);
    assert!((rho_0(&input).unwrap() - rho).abs() < 1e-14);
    assert!((distortion_lower_bound(&input).unwrap().lower_bound - lb).abs() < 1e-14);
    assert_eq!((k * 1e4).round(), 684.0);
    assert_eq!((rho * 1e4).round(), 700.0);
    assert_eq!((lb * 1e4).round(), 521.0);

    // N = 3, M = 6, L = 2: ρ₀ = 1 − (14/15)^{1/2}
    let rho = rho_0(&BoundInput::new(3, 6, 2).unwrap()).unwrap();
    assert!((rho - (1.0 - (14.0f64 / 15.0).sqrt())).abs() < 1e-15);

    // r = 2, ε = 1/2: κ₀ = 2^{−4 H(1/4)} / 2
    let k0 = 2f64.powf(-4.0 * h) * 0.5;
    assert!((kappa_0(2.0, 0.5).unwrap() - k0).abs() < 1e-15);
    assert!((asymptotic_bound(2.0, 0.5).unwrap() - k0 * 0.5 / (1.0 - 0.5 * k0)).abs() < 1e-15);
    // exactly 27/512 = 0.0527344…, within 1e-5 of the quoted 0.05274
    assert!((kappa_0(2.0, 0.5).unwrap() - 27.0 / 512.0).abs() < 1e-15);
    assert!((k0 - 0.05274).abs() < 1e-5);
    assert_eq!((asymptotic_bound(2.0, 0.5).unwrap() * 1e5).round(), 2708.0);
}

#[test]
fn log_binomial_is_exact_for_small_arguments() {
    for m in 0u64..=20 {
        let mut row = 1u64;
        for l in 0..=m {
            assert!((log_binomial(m, l).unwrap() - (row as f64).ln()).abs() < 1e-12, "C({m},{l})");
            row = row * (m - l) / (l + 1);
        }
    }
    assert_eq!(log_binomial(20, 10).unwrap().exp().round(), 184756.0);
}

#[test]
fn cap_area_is_monotone_up_to_one() {
    for n in 2..=30 {
        for l in 1..n {
            let mut prev = 0.0;
            for k in 0..=1000 {
                let cap = cap_area_ratio(k as f64 / 1000.0, n, l).unwrap();
                assert!(cap >= prev, "N={n} L={l} ρ={}", k as f64 / 1000.0);
                prev = cap;
            }
            assert_eq!(prev, 1.0);
        }
    }
}
