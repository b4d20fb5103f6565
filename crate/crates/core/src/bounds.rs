//! Lower bounds on the average sparse-approximation distortion of any frame.
//!
//! For a signal uniform on the complex unit sphere of ℂᴺ, approximated by
//! the best combination of at most `L` of the `M` frame vectors, the
//! expected squared error `D` is bounded below by a union bound over the
//! `T = C(M, L)` candidate subspaces. The probability that a uniform point
//! lies within squared distance `ρ` of a fixed `L`-plane is the
//! `β(N − L, L)` CDF at `ρ` ([`cap_area_ratio`]); bounding that CDF by
//! [`lambda_bound`] and integrating gives [`distortion_lower_bound`].
//!
//! Every product of very large and very small factors is formed in the
//! natural-log domain and exponentiated once.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `ln C(m, l)`, computed as a sum of `min(l, m − l)` logarithms.
pub fn log_binomial(m: u64, l: u64) -> Result<f64> {
    if l > m {
        return Err(Error::DomainError(format!("C({m}, {l}) requires l ≤ m")));
    }
    let k = l.min(m - l);
    Ok((1..=k).map(|i| (((m - k + i) as f64) / i as f64).ln()).fold(0.0, |a, b| a + b))
}

/// `H(p) = −p log₂ p − (1 − p) log₂(1 − p)`, with `H(0) = H(1) = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::DomainError(format!("entropy argument {p} outside [0, 1]")));
    }
    let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    Ok(term(p) + term(1.0 - p))
}

/// The normalized area of a generalized cap: the probability that a point
/// uniform on the unit sphere of ℂᴺ lies within squared distance `rho` of a
/// fixed `L`-dimensional subspace,
/// `∫₀^ρ Γ(N)/(Γ(N−L)Γ(L)) x^{N−L−1}(1−x)^{L−1} dx`.
///
/// For integer parameters this `β(N − L, L)` CDF is the binomial tail
/// `Σ_{j=N−L}^{N−1} C(N−1, j) ρ^j (1−ρ)^{N−1−j}`, summed in the log domain.
pub fn cap_area_ratio(rho: f64, n: usize, l: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::DomainError(format!("radius {rho} outside [0, 1]")));
    }
    if l == 0 || l >= n {
        return Err(Error::BranchError { n, l, lo: 1, hi: n.saturating_sub(1) });
    }
    if rho == 0.0 {
        return Ok(0.0);
    }
    if rho == 1.0 {
        return Ok(1.0);
    }
    let (lr, lq) = (rho.ln(), (-rho).ln_1p());
    let top = (n - 1) as u64;
    let tail = |range: std::ops::RangeInclusive<u64>| -> Result<f64> {
        let logs: Vec<f64> = range
            .map(|j| log_binomial(top, j).map(|lb| lb + j as f64 * lr + (top - j) as f64 * lq))
            .collect::<Result<_>>()?;
        let peak = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = logs.iter().map(|v| (v - peak).exp()).sum();
        Ok((peak + sum.ln()).exp())
    };
    // Past the median the complementary lower tail is summed instead, so
    // values close to one stay monotone in `rho` after rounding.
    let upper = tail((n - l) as u64..=top)?;
    if upper <= 0.5 {
        return Ok(upper);
    }
    let lower = tail(0..=(n - l - 1) as u64)?;
    Ok((1.0 - lower).clamp(0.0, 1.0))
}

/// Which formula of the bound applies to a given `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `L = 0`: nothing can be represented, `D = 1`.
    L0,
    /// `1 ≤ L ≤ N − 2`.
    Mid,
    /// `L = N − 1`.
    LNminus1,
    /// `L = N`: every signal is represented exactly, `D = 0`.
    LN,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::L0 => "L0",
            Branch::Mid => "mid",
            Branch::LNminus1 => "LNminus1",
            Branch::LN => "LN",
        }
    }
}

/// Dimension `N`, frame size `M`, sparsity `L`, with `ln T = ln C(M, L)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInput {
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub log_t: f64,
}

impl BoundInput {
    pub fn new(n: usize, m: usize, l: usize) -> Result<Self> {
        if n == 0 || m < n {
            return Err(Error::DomainError(format!("need M ≥ N ≥ 1, got N = {n}, M = {m}")));
        }
        if l > n {
            return Err(Error::DomainError(format!("need 0 ≤ L ≤ N, got L = {l}, N = {n}")));
        }
        Ok(Self { n, m, l, log_t: log_binomial(m as u64, l as u64)? })
    }

    pub fn log2_t(&self) -> f64 {
        self.log_t / LN_2
    }

    pub fn branch(&self) -> Branch {
        match self.l {
            0 => Branch::L0,
            l if l == self.n => Branch::LN,
            l if l + 1 == self.n => Branch::LNminus1,
            _ => Branch::Mid,
        }
    }

    fn require_mid(&self) -> Result<()> {
        if self.l >= 1 && self.l + 2 <= self.n {
            Ok(())
        } else {
            Err(Error::BranchError { n: self.n, l: self.l, lo: 1, hi: self.n.saturating_sub(2) })
        }
    }

    /// `(L − 1)/(N − L − 1)`
    fn slope(&self) -> f64 {
        (self.l as f64 - 1.0) / (self.n - self.l - 1) as f64
    }

    /// `ln[T (N−1) 2^{(N−2) H((L−1)/(N−2))}]`, the log of the union-bound
    /// prefactor shared by Λ and κ_c.
    fn log_prefactor(&self) -> Result<f64> {
        let h = binary_entropy((self.l as f64 - 1.0) / (self.n as f64 - 2.0))?;
        Ok(self.log_t + ((self.n - 1) as f64).ln() + (self.n as f64 - 2.0) * h * LN_2)
    }
}

/// `κ_c = [T (N−1) 2^{(N−2) H((L−1)/(N−2))}]^{−1/(N−L−1)}`, for `1 ≤ L ≤ N − 2`.
pub fn kappa_c(input: &BoundInput) -> Result<f64> {
    input.require_mid()?;
    Ok((-input.log_prefactor()? / (input.n - input.l - 1) as f64).exp())
}

/// The radius at which the union bound reaches one.
///
/// For `1 ≤ L ≤ N − 2` this is `κ_c / (1 − κ_c (L−1)/(N−L−1))`, where
/// [`lambda_bound`] equals one; for `L = N − 1` it is
/// `1 − (1 − 1/T)^{1/(N−1)}`, where `T·cap_area_ratio` equals one.
pub fn rho_0(input: &BoundInput) -> Result<f64> {
    match input.branch() {
        Branch::Mid => {
            let k = kappa_c(input)?;
            Ok(k / (1.0 - k * input.slope()))
        }
        Branch::LNminus1 => {
            let inv_t = (-input.log_t).exp();
            Ok(-((-inv_t).ln_1p() / (input.n - 1) as f64).exp_m1())
        }
        _ => Err(Error::BranchError { n: input.n, l: input.l, lo: 1, hi: input.n.saturating_sub(1) }),
    }
}

/// `Λ(ρ) = T (N−1) 2^{(N−2) H((L−1)/(N−2))} (ρ / (1 + ρ (L−1)/(N−L−1)))^{N−L−1}`,
/// an upper bound on `T · cap_area_ratio(ρ)`.
pub fn lambda_bound(rho: f64, input: &BoundInput) -> Result<f64> {
    input.require_mid()?;
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::DomainError(format!("radius {rho} outside [0, 1]")));
    }
    if rho == 0.0 {
        return Ok(0.0);
    }
    let base = rho / (1.0 + rho * input.slope());
    Ok((input.log_prefactor()? + (input.n - input.l - 1) as f64 * base.ln()).exp())
}

/// `ρ − (1 − (1 − ρ)^N)/N = ∫₀^ρ (1 − (1 − η)^{N−1}) dη`.
///
/// The closed form cancels to `≈ (N−1)ρ²/2` for small `ρ`, so the
/// alternating series `Σ_{k≥2} (−1)^k C(N, k) ρ^k / N` is used while `Nρ` is
/// small.
fn cap_integral_last_branch(rho: f64, n: usize) -> f64 {
    let nf = n as f64;
    if nf * rho < 0.5 {
        let mut sum = 0.0;
        let mut term = 1.0; // C(N, k) ρ^k for k = 0
        for k in 1..=n {
            term *= (nf - (k as f64 - 1.0)) / k as f64 * rho;
            if k >= 2 {
                let signed = if k % 2 == 0 { term } else { -term };
                sum += signed / nf;
                if term.abs() / nf <= f64::EPSILON * sum.abs() {
                    break;
                }
            }
        }
        sum
    } else {
        rho + (nf * (-rho).ln_1p()).exp_m1() / nf
    }
}

/// Evaluation of the distortion lower bound at one `(N, M, L)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub input: BoundInput,
    /// Defined on the `Mid` branch only.
    pub kappa_c: Option<f64>,
    /// Defined on the `Mid` and `LNminus1` branches.
    pub rho_0: Option<f64>,
    pub lower_bound: f64,
    pub branch: Branch,
}

/// The lower bound on `D` for any frame of size `M` in ℂᴺ at sparsity `L`:
///
/// * `L = 0`: `1`;
/// * `1 ≤ L ≤ N − 2`: `ρ₀ − ρ₀² / (κ_c (N − L))`;
/// * `L = N − 1`: `ρ₀ − T (ρ₀ − 1/N + (1 − ρ₀)^N / N)`;
/// * `L = N`: `0`.
pub fn distortion_lower_bound(input: &BoundInput) -> Result<BoundReport> {
    let branch = input.branch();
    let (kappa, rho, lower_bound) = match branch {
        Branch::L0 => (None, None, 1.0),
        Branch::LN => (None, None, 0.0),
        Branch::Mid => {
            let k = kappa_c(input)?;
            let rho = rho_0(input)?;
            (Some(k), Some(rho), rho - rho * rho / (k * (input.n - input.l) as f64))
        }
        Branch::LNminus1 => {
            let rho = rho_0(input)?;
            let t = input.log_t.exp();
            (None, Some(rho), rho - t * cap_integral_last_branch(rho, input.n))
        }
    };
    Ok(BoundReport { input: *input, kappa_c: kappa, rho_0: rho, lower_bound, branch })
}

/// `κ₀ = 2^{−(r/(1−ε)) H(ε/r)} ε^{ε/(1−ε)}`.
pub fn kappa_0(r: f64, eps: f64) -> Result<f64> {
    if !(r >= 1.0 && r.is_finite()) || !(eps > 0.0 && eps < 1.0) {
        return Err(Error::DomainError(format!("need r ≥ 1 and 0 < ε < 1, got r = {r}, ε = {eps}")));
    }
    let h = binary_entropy(eps / r)?;
    Ok((-(r / (1.0 - eps)) * h * LN_2 + eps / (1.0 - eps) * eps.ln()).exp())
}

/// Large-`N` limit of the bound at fixed redundancy `r = M/N` and sparsity
/// `ε = L/N`: `κ₀ (1 − ε) / (1 − ε κ₀)`.
pub fn asymptotic_bound(r: f64, eps: f64) -> Result<f64> {
    let k0 = kappa_0(r, eps)?;
    Ok(k0 * (1.0 - eps) / (1.0 - eps * k0))
}

/// `L = round(ε N)`, the sparsity realized on a finite grid.
pub fn sparsity_count(eps: f64, n: usize) -> usize {
    ((eps * n as f64).round() as usize).min(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(n: usize, m: usize, l: usize) -> BoundInput {
        BoundInput::new(n, m, l).unwrap()
    }

    #[test]
    fn entropy_values() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
        let h = binary_entropy(0.25).unwrap();
        // 0.75·log₂(4/3) + 0.25·2
        let direct = 0.75 * (4.0f64 / 3.0).log2() + 0.5;
        assert!((h - direct).abs() < 1e-15);
        assert!((h - 0.811_278).abs() < 1e-6);
        assert!(4.0 <= 2f64.powf(4.0 * h));
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.5).is_err());
    }

    #[test]
    fn log_binomial_matches_integers() {
        assert!((log_binomial(12, 2).unwrap().exp() - 66.0).abs() < 1e-9);
        assert_eq!(log_binomial(20, 10).unwrap().exp().round(), 184_756.0);
        let mut row = vec![1u64];
        for m in 1..=20u64 {
            let mut next = vec![1u64; (m + 1) as usize];
            for k in 1..m as usize {
                next[k] = row[k - 1] + row[k];
            }
            for (k, &want) in next.iter().enumerate() {
                let got = log_binomial(m, k as u64).unwrap().exp();
                assert!((got - want as f64).abs() <= 1e-9 * want as f64, "C({m},{k})");
            }
            row = next;
        }
        assert!(log_binomial(3, 4).is_err());
    }

    #[test]
    fn entropy_sandwich_on_grid() {
        for m in 2..60u64 {
            for l in 1..m {
                let lhs = log_binomial(m, l).unwrap() / LN_2;
                let rhs = m as f64 * binary_entropy(l as f64 / m as f64).unwrap();
                assert!(lhs <= rhs + 1e-9, "m={m} l={l}");
                assert!(lhs >= rhs - ((m + 1) as f64).log2() - 1e-9);
            }
        }
    }

    #[test]
    fn cap_area_examples() {
        assert_eq!(cap_area_ratio(1.0, 5, 2).unwrap(), 1.0);
        assert_eq!(cap_area_ratio(0.0, 5, 2).unwrap(), 0.0);
        assert!((cap_area_ratio(0.5, 3, 2).unwrap() - 0.75).abs() < 1e-14);
        // ∫₀^0.3 6x(1−x) dx = 3·0.09 − 2·0.027
        assert!((cap_area_ratio(0.3, 4, 2).unwrap() - 0.216).abs() < 1e-14);
        assert!(cap_area_ratio(1.1, 4, 2).is_err());
        assert!(cap_area_ratio(0.5, 4, 0).is_err());
        assert!(cap_area_ratio(0.5, 4, 4).is_err());
    }

    #[test]
    fn kappa_rho_bound_example() {
        let inp = input(6, 12, 2);
        let k = kappa_c(&inp).unwrap();
        let rho = rho_0(&inp).unwrap();
        let rep = distortion_lower_bound(&inp).unwrap();
        // Independent arithmetic: 66^(−1/3) · 5^(−1/3) · 2^(−(4/3)·H(1/4)).
        let h = 0.75 * (4.0f64 / 3.0).log2() + 0.5;
        let k_ref = 66f64.powf(-1.0 / 3.0) * 5f64.powf(-1.0 / 3.0) * 2f64.powf(-(4.0 / 3.0) * h);
        assert!((k - k_ref).abs() < 1e-14);
        assert!((k - 0.0684).abs() < 5e-5);
        assert!((rho - 0.0700).abs() < 5e-5);
        assert!((rep.lower_bound - 0.0521).abs() < 5e-5);
        assert_eq!(rep.branch, Branch::Mid);
        assert!((lambda_bound(rho, &inp).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kappa_l1_drops_entropy() {
        let inp = input(7, 14, 1);
        let want = (14f64).powf(-1.0 / 5.0) * 6f64.powf(-1.0 / 5.0);
        assert!((kappa_c(&inp).unwrap() - want).abs() < 1e-14);
        assert!(matches!(kappa_c(&input(7, 14, 6)), Err(Error::BranchError { .. })));
        assert!(matches!(kappa_c(&input(7, 14, 0)), Err(Error::BranchError { .. })));
    }

    #[test]
    fn last_branch_rho() {
        let inp = input(3, 6, 2);
        let want = 1.0 - (14.0f64 / 15.0).sqrt();
        assert!((rho_0(&inp).unwrap() - want).abs() < 1e-15);
        assert!((rho_0(&inp).unwrap() - 0.03391).abs() < 5e-6);
        // T·cap(ρ₀) = 1
        let cap = cap_area_ratio(rho_0(&inp).unwrap(), 3, 2).unwrap();
        assert!((15.0 * cap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn extreme_branches() {
        let r0 = distortion_lower_bound(&input(5, 9, 0)).unwrap();
        assert_eq!((r0.lower_bound, r0.branch), (1.0, Branch::L0));
        let rn = distortion_lower_bound(&input(5, 9, 5)).unwrap();
        assert_eq!((rn.lower_bound, rn.branch), (0.0, Branch::LN));
        assert!(r0.kappa_c.is_none() && r0.rho_0.is_none());
        assert!(BoundInput::new(5, 4, 1).is_err());
        assert!(BoundInput::new(5, 9, 6).is_err());
        let one = distortion_lower_bound(&input(1, 3, 1)).unwrap();
        assert_eq!(one.lower_bound, 0.0);
    }

    #[test]
    fn lambda_monotone_and_zero() {
        let inp = input(10, 30, 4);
        assert_eq!(lambda_bound(0.0, &inp).unwrap(), 0.0);
        let mut prev = 0.0;
        for i in 1..=100 {
            let v = lambda_bound(i as f64 / 100.0, &inp).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn last_branch_integral_series_agrees_with_closed_form() {
        for n in [2usize, 3, 7, 20] {
            for &rho in &[0.01f64, 0.05, 0.09] {
                let nf = n as f64;
                let closed = rho - (1.0 - (1.0 - rho).powi(n as i32)) / nf;
                assert!((cap_integral_last_branch(rho, n) - closed).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn asymptotic_example() {
        let h = 0.75 * (4.0f64 / 3.0).log2() + 0.5;
        let k0 = 2f64.powf(-4.0 * h) * 0.5;
        assert!((kappa_0(2.0, 0.5).unwrap() - k0).abs() < 1e-15);
        // 2^{−4H(1/4)} = 3³/2⁸ exactly, so κ₀ = 27/512 = 0.0527344 (quoted as ≈ 0.05274).
        assert!((kappa_0(2.0, 0.5).unwrap() - 27.0 / 512.0).abs() < 1e-15);
        assert!((kappa_0(2.0, 0.5).unwrap() - 0.05274).abs() < 1e-5);
        assert!((asymptotic_bound(2.0, 0.5).unwrap() - 0.02708).abs() < 5e-6);
        assert!((asymptotic_bound(3.0, 1e-9).unwrap() - 1.0).abs() < 1e-6);
        assert!(asymptotic_bound(0.5, 0.2).is_err());
        assert!(asymptotic_bound(2.0, 0.0).is_err());
        assert!(asymptotic_bound(2.0, 1.0).is_err());
    }

    #[test]
    fn sparsity_rounding() {
        assert_eq!(sparsity_count(0.25, 50), 13);
        assert_eq!(sparsity_count(0.25, 100), 25);
        assert_eq!(sparsity_count(2.0, 10), 10);
    }
}
