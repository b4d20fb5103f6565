//! Monte-Carlo estimation of the average sparse-approximation distortion.
//!
//! Signals are drawn uniformly from the complex unit sphere and each one is
//! approximated by its best `L`-term representation over the frame, found by
//! exhaustive search over supports. Working on the unit sphere absorbs the
//! `1/N` normalisation of a signal with `‖r‖² = N`: the per-sample distortion
//! is `min_k d²(x, P_k) / ‖x‖²`, which is exactly 1 for `L = 0`.
//!
//! Supports are enumerated in colexicographic order as a depth-first walk
//! that fixes the largest index first. Members of a common prefix share their
//! leading Gram–Schmidt directions, so the walk is orthonormalised once per
//! `(frame, L)` ([`SupportTree`]) and each signal then costs one inner
//! product per tree node.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{log_binomial, BoundReport};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::frame::{complex_gaussian, ComplexVector, Frame, DEFAULT_BUDGET, RANK_TOLERANCE};
use crate::rng;

/// Residuals within this distance count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Slack added to `δ‖x‖²` by [`bds_decode`] so that exact representations
/// with rounding-level residuals qualify.
pub const BDS_SLACK: f64 = 1e-12;

/// Uniform draw from the unit sphere of ℂᴺ: a standard complex Gaussian
/// vector, normalised.
pub fn sample_uniform_sphere<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexVector {
    assert!(n >= 1, "sphere dimension must be positive");
    loop {
        let z: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        let norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm >= 1e-300 {
            let w = z.into_iter().map(|c| c / norm).collect();
            return ComplexVector::new(w).expect("finite non-empty sample");
        }
    }
}

fn dot(q: &[Complex64], x: &[Complex64]) -> Complex64 {
    q.iter().zip(x).map(|(a, b)| a.conj() * b).sum()
}

/// Orthogonalises `v` against the orthonormal `basis` (two passes of
/// modified Gram–Schmidt) and normalises it. Returns `None` when less than
/// [`RANK_TOLERANCE`] of its norm survives.
fn orthonormal_direction(basis: &[&[Complex64]], v: &[Complex64]) -> Option<Vec<Complex64>> {
    let original = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if original == 0.0 {
        return None;
    }
    let mut w = v.to_vec();
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, &w);
            w.iter_mut().zip(q.iter()).for_each(|(wi, qi)| *wi -= c * qi);
        }
    }
    let norm = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm <= RANK_TOLERANCE * original {
        return None;
    }
    w.iter_mut().for_each(|c| *c /= norm);
    Some(w)
}

/// Squared distance from `x` to the span of `vectors`, clamped to
/// `[0, ‖x‖²]`. Rank-deficient sets project onto their actual span.
pub fn residual_to_span(vectors: &[&[Complex64]], x: &[Complex64]) -> f64 {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let refs: Vec<&[Complex64]> = basis.iter().map(Vec::as_slice).collect();
        if let Some(q) = orthonormal_direction(&refs, v) {
            basis.push(q);
        }
    }
    let total: f64 = x.iter().map(|c| c.norm_sqr()).sum();
    let captured: f64 = basis.iter().map(|q| dot(q, x).norm_sqr()).sum();
    (total - captured).clamp(0.0, total)
}

/// Squared distance from `x` to the span of the selected frame vectors.
pub fn projection_residual(frame: &Frame, rows: &[usize], x: &ComplexVector) -> Result<f64> {
    if x.len() != frame.n() {
        return Err(Error::LengthMismatch { expected: frame.n(), got: x.len() });
    }
    if let Some(&bad) = rows.iter().find(|&&j| j >= frame.m()) {
        return Err(Error::InvalidSparseRep(format!("row index {} out of range 1..={}", bad + 1, frame.m())));
    }
    let vectors: Vec<&[Complex64]> = rows.iter().map(|&j| frame.row(j)).collect();
    Ok(residual_to_span(&vectors, x.as_slice()))
}

/// Best size-`L` support for one signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmddResult {
    /// 0-based, increasing.
    pub support: Vec<usize>,
    /// `‖x − Π x‖²` for the projection onto the support's span.
    pub residual_sq: f64,
    /// Another support came within [`TIE_TOLERANCE`] of the minimum.
    pub ties_broken: bool,
}

/// Number of size-`l` supports of an `m`-vector frame.
pub fn support_count(m: usize, l: usize) -> Result<f64> {
    if l > m {
        return Ok(0.0);
    }
    Ok(log_binomial(m as u64, l as u64)?.exp().round())
}

fn check_budget(m: usize, l: usize, budget: u64) -> Result<()> {
    let count = support_count(m, l)?;
    if count > budget as f64 {
        return Err(Error::BudgetExceeded { count, budget });
    }
    Ok(())
}

/// Pre-orthonormalised depth-first walk over all size-`L` supports.
///
/// Nodes are stored in pre-order. A node at depth `d` adds frame vector
/// `index` to the support fixed by its ancestors, together with the unit
/// direction it contributes to their span (zero if it adds nothing).
#[derive(Debug, Clone)]
pub struct SupportTree {
    n: usize,
    l: usize,
    depth: Vec<u32>,
    index: Vec<u32>,
    directions: Vec<Complex64>,
}

impl SupportTree {
    pub fn new(frame: &Frame, l: usize, budget: u64) -> Result<Self> {
        let (n, m) = (frame.n(), frame.m());
        if l > m {
            return Err(Error::DomainError(format!("L = {l} exceeds M = {m}")));
        }
        check_budget(m, l, budget)?;
        let mut tree = SupportTree { n, l, depth: Vec::new(), index: Vec::new(), directions: Vec::new() };
        let mut basis: Vec<Vec<Complex64>> = Vec::new();
        tree.grow(frame, m, 0, &mut basis);
        Ok(tree)
    }

    /// Children of the current prefix take indices below `upper`, leaving
    /// room for the `L − depth − 1` smaller ones still to come.
    fn grow(&mut self, frame: &Frame, upper: usize, depth: usize, basis: &mut Vec<Vec<Complex64>>) {
        if depth == self.l {
            return;
        }
        let remaining = self.l - depth - 1;
        for j in remaining..upper {
            let refs: Vec<&[Complex64]> = basis.iter().map(Vec::as_slice).collect();
            let q = orthonormal_direction(&refs, frame.row(j));
            self.depth.push(depth as u32);
            self.index.push(j as u32);
            match &q {
                Some(q) => self.directions.extend_from_slice(q),
                None => self.directions.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), self.n)),
            }
            let added = q.is_some();
            if let Some(q) = q {
                basis.push(q);
            }
            self.grow(frame, j, depth + 1, basis);
            if added {
                basis.pop();
            }
        }
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn node_count(&self) -> usize {
        self.depth.len()
    }

    /// Exact minimum residual for `x`; ties go to the lexicographically
    /// smallest support.
    pub fn best(&self, x: &[Complex64]) -> SmddResult {
        let total: f64 = x.iter().map(|c| c.norm_sqr()).sum();
        if self.l == 0 {
            return SmddResult { support: Vec::new(), residual_sq: total, ties_broken: false };
        }
        let mut captured = vec![0.0f64; self.l + 1];
        let mut path = vec![0usize; self.l];
        let mut best: Option<(f64, Vec<usize>)> = None;
        let mut ties = false;
        for (k, (&d, &j)) in self.depth.iter().zip(&self.index).enumerate() {
            let d = d as usize;
            let q = &self.directions[k * self.n..(k + 1) * self.n];
            captured[d + 1] = captured[d] + dot(q, x).norm_sqr();
            path[d] = j as usize;
            if d + 1 < self.l {
                continue;
            }
            let residual = (total - captured[self.l]).clamp(0.0, total);
            match &mut best {
                None => {
                    let mut s = path.clone();
                    s.reverse();
                    best = Some((residual, s));
                }
                Some((b, support)) => {
                    if residual < *b - TIE_TOLERANCE {
                        *b = residual;
                        support.clear();
                        support.extend(path.iter().rev());
                    } else if (residual - *b).abs() <= TIE_TOLERANCE {
                        ties = true;
                        let mut s = path.clone();
                        s.reverse();
                        if s < *support {
                            *b = b.min(residual);
                            *support = s;
                        }
                    }
                }
            }
        }
        let (residual_sq, support) = best.expect("at least one support");
        SmddResult { support, residual_sq, ties_broken: ties }
    }
}

/// Exact sparsest-minimum-distortion search over all size-`L` supports.
pub fn smdd_exact(frame: &Frame, x: &ComplexVector, l: usize) -> Result<SmddResult> {
    smdd_exact_with_budget(frame, x, l, DEFAULT_BUDGET)
}

pub fn smdd_exact_with_budget(frame: &Frame, x: &ComplexVector, l: usize, budget: u64) -> Result<SmddResult> {
    if x.len() != frame.n() {
        return Err(Error::LengthMismatch { expected: frame.n(), got: x.len() });
    }
    Ok(SupportTree::new(frame, l, budget)?.best(x.as_slice()))
}

/// Orthogonal-matching-pursuit approximation to [`smdd_exact`]: `L` greedy
/// steps, each adding the frame vector most correlated with the current
/// residual. Its residual upper-bounds the exact minimum.
pub fn smdd_greedy(frame: &Frame, x: &ComplexVector, l: usize) -> Result<SmddResult> {
    if x.len() != frame.n() {
        return Err(Error::LengthMismatch { expected: frame.n(), got: x.len() });
    }
    let mut support: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut residual = x.as_slice().to_vec();
    for _ in 0..l.min(frame.m()) {
        let pick = (0..frame.m())
            .filter(|j| !support.contains(j))
            .map(|j| {
                let row = frame.row(j);
                let norm = row.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                (dot(row, &residual).norm() / norm, j)
            })
            .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
        let Some((_, j)) = pick else { break };
        support.push(j);
        let refs: Vec<&[Complex64]> = basis.iter().map(Vec::as_slice).collect();
        if let Some(q) = orthonormal_direction(&refs, frame.row(j)) {
            let c = dot(&q, &residual);
            residual.iter_mut().zip(&q).for_each(|(r, qi)| *r -= c * qi);
            basis.push(q);
        }
    }
    support.sort_unstable();
    let vectors: Vec<&[Complex64]> = support.iter().map(|&j| frame.row(j)).collect();
    let residual_sq = residual_to_span(&vectors, x.as_slice());
    Ok(SmddResult { support, residual_sq, ties_broken: false })
}

/// Bounded-distortion search: the smallest `L` whose best support leaves at
/// most `δ‖x‖²` (plus [`BDS_SLACK`]`·‖x‖²`), by binary search over
/// `L ∈ [0, N]` using that the minimum residual is non-increasing in `L`.
pub fn bds_decode(frame: &Frame, x: &ComplexVector, delta: f64) -> Result<(usize, SmddResult)> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::DomainError(format!("delta = {delta} outside [0, 1]")));
    }
    let threshold = (delta + BDS_SLACK) * x.norm_sqr();
    let (mut lo, mut hi) = (0usize, frame.n());
    let mut at_hi = smdd_exact(frame, x, hi)?;
    while lo < hi {
        let mid = (lo + hi) / 2;
        let r = smdd_exact(frame, x, mid)?;
        if r.residual_sq <= threshold {
            hi = mid;
            at_hi = r;
        } else {
            lo = mid + 1;
        }
    }
    Ok((hi, at_hi))
}

/// What an estimate was computed from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimateConfig {
    pub frame_id: String,
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√n_samples`.
    pub stderr: f64,
    pub n_samples: usize,
    /// Set when greedy search stood in for exhaustive search.
    pub approximate: bool,
    pub config: EstimateConfig,
}

/// One Monte-Carlo draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionSample {
    pub index: usize,
    /// `min_k d²(x, P_k) / ‖x‖²`
    pub distortion: f64,
    pub support: Vec<usize>,
    pub ties_broken: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateOptions {
    pub budget: u64,
    pub exec: Execution,
    /// Use [`smdd_greedy`] instead of failing when the budget is exceeded.
    pub greedy_fallback: bool,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, exec: Execution::default(), greedy_fallback: false }
    }
}

/// Per-sample distortions; sample `i` uses [`rng::stream`]`(seed, i)`.
/// Returns the samples and whether they are approximate.
pub fn distortion_samples(
    frame: &Frame,
    l: usize,
    n_samples: usize,
    seed: u64,
    opts: &EstimateOptions,
) -> Result<(Vec<DistortionSample>, bool)> {
    let tree = match SupportTree::new(frame, l, opts.budget) {
        Ok(tree) => Some(tree),
        Err(Error::BudgetExceeded { .. }) if opts.greedy_fallback => None,
        Err(e) => return Err(e),
    };
    let approximate = tree.is_none();
    let samples = opts
        .exec
        .map_indexed(n_samples, |i| {
            let mut rng = rng::stream(seed, i as u64);
            let x = sample_uniform_sphere(frame.n(), &mut rng);
            let best = match &tree {
                Some(tree) => tree.best(x.as_slice()),
                None => smdd_greedy(frame, &x, l)?,
            };
            Ok(DistortionSample {
                index: i,
                distortion: best.residual_sq / x.norm_sqr(),
                support: best.support,
                ties_broken: best.ties_broken,
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok((samples, approximate))
}

/// Mean and standard error of the per-sample distortions, summed in sample
/// order.
pub fn summarize(samples: &[DistortionSample], approximate: bool, config: EstimateConfig) -> DistortionEstimate {
    let n = samples.len();
    let mean = if n == 0 { 0.0 } else { samples.iter().map(|s| s.distortion).sum::<f64>() / n as f64 };
    let stderr = if n < 2 {
        0.0
    } else {
        let var = samples.iter().map(|s| (s.distortion - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        (var / n as f64).sqrt()
    };
    DistortionEstimate { mean, stderr, n_samples: n, approximate, config }
}

pub fn estimate_distortion_with(
    frame: &Frame,
    l: usize,
    n_samples: usize,
    seed: u64,
    opts: &EstimateOptions,
) -> Result<DistortionEstimate> {
    let (samples, approximate) = distortion_samples(frame, l, n_samples, seed, opts)?;
    let config = EstimateConfig { frame_id: frame.id(), n: frame.n(), m: frame.m(), l, seed };
    Ok(summarize(&samples, approximate, config))
}

/// Monte-Carlo estimate of the average best-`L`-term distortion with
/// exhaustive search under the default budget.
pub fn estimate_distortion(
    frame: &Frame,
    l: usize,
    n_samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<DistortionEstimate> {
    let opts = EstimateOptions { exec, ..EstimateOptions::default() };
    estimate_distortion_with(frame, l, n_samples, seed, &opts)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    /// `mean − lower_bound`
    pub margin: f64,
}

/// Passes when the estimate is no more than three standard errors below the
/// bound. Approximate estimates are refused.
pub fn compare_to_bound(est: &DistortionEstimate, report: &BoundReport) -> Result<Verdict> {
    let (c, b) = (&est.config, &report.input);
    if (c.n, c.m, c.l) != (b.n, b.m, b.l) {
        return Err(Error::ConfigMismatch(format!(
            "estimate is for (N, M, L) = ({}, {}, {}), bound for ({}, {}, {})",
            c.n, c.m, c.l, b.n, b.m, b.l
        )));
    }
    if est.approximate {
        return Err(Error::ConfigMismatch("approximate estimates are not compared against the bound".into()));
    }
    Ok(Verdict {
        pass: est.mean >= report.lower_bound - 3.0 * est.stderr,
        margin: est.mean - report.lower_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{distortion_lower_bound, BoundInput};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn four_roots() -> Frame {
        Frame::roots_of_unity(4, 2).unwrap()
    }

    #[test]
    fn sphere_samples_are_unit() {
        let mut rng = rng::stream(3, 0);
        for n in [1, 2, 7] {
            for _ in 0..50 {
                assert!((sample_uniform_sphere(n, &mut rng).norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn residual_extremes() {
        let f = four_roots();
        let x = ComplexVector::new(vec![c(2., 0.), c(-2., 0.)]).unwrap();
        assert!(projection_residual(&f, &[2], &x).unwrap() < 1e-10);
        // φ₁ = (1, 1) ⟂ (1, −1)/√2
        let unit = ComplexVector::new(vec![c(1., 0.), c(-1., 0.)]).unwrap().scale(c(0.5f64.sqrt(), 0.));
        assert!((projection_residual(&f, &[0], &unit).unwrap() - 1.0).abs() < 1e-10);
        assert!((projection_residual(&f, &[], &unit).unwrap() - 1.0).abs() < 1e-15);
        // a repeated vector adds nothing
        assert!((projection_residual(&f, &[0, 0], &unit).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn smdd_examples() {
        let f = four_roots();
        let x = ComplexVector::new(vec![c(2., 0.), c(-2., 0.)]).unwrap().scale(c(8f64.sqrt().recip(), 0.));
        let r = smdd_exact(&f, &x, 1).unwrap();
        assert_eq!(r.support, vec![2]);
        assert!(r.residual_sq < 1e-12);
        let r0 = smdd_exact(&f, &x, 0).unwrap();
        assert!(r0.support.is_empty());
        assert!((r0.residual_sq - 1.0).abs() < 1e-15);
        let r2 = smdd_exact(&f, &x, 2).unwrap();
        assert!(r2.residual_sq < 1e-12);
        assert_eq!(r2.support.len(), 2);
    }

    #[test]
    fn ties_go_to_lexicographically_smallest() {
        // x = (1, 0) is equidistant from all four lines at L = 1.
        let f = four_roots();
        let x = ComplexVector::new(vec![c(1., 0.), c(0., 0.)]).unwrap();
        let r = smdd_exact(&f, &x, 1).unwrap();
        assert_eq!(r.support, vec![0]);
        assert!(r.ties_broken);
        assert!((r.residual_sq - 0.5).abs() < 1e-12);
        // at L = 2 every pair spans ℂ²
        let r = smdd_exact(&f, &x, 2).unwrap();
        assert_eq!(r.support, vec![0, 1]);
    }

    #[test]
    fn tree_enumerates_every_support_once() {
        let f = Frame::roots_of_unity(6, 3).unwrap();
        for l in 0..=4 {
            let tree = SupportTree::new(&f, l, DEFAULT_BUDGET).unwrap();
            let leaves = (0..tree.node_count()).filter(|&k| tree.depth[k] as usize + 1 == l).count();
            assert_eq!(leaves as f64, if l == 0 { 0.0 } else { support_count(6, l).unwrap() });
        }
    }

    #[test]
    fn budget_guard() {
        let f = Frame::roots_of_unity(30, 4).unwrap();
        let x = ComplexVector::new(vec![c(1., 0.); 4]).unwrap();
        assert!(matches!(smdd_exact_with_budget(&f, &x, 3, 1000), Err(Error::BudgetExceeded { budget: 1000, .. })));
        // C(30, 3) = 4060
        assert!(smdd_exact_with_budget(&f, &x, 3, 4060).is_ok());
    }

    #[test]
    fn bds_examples() {
        let f = four_roots();
        let mut rng = rng::stream(11, 0);
        let x = sample_uniform_sphere(2, &mut rng);
        assert_eq!(bds_decode(&f, &x, 1.0).unwrap().0, 0);
        assert_eq!(bds_decode(&f, &x, 0.0).unwrap().0, 2);
        let phi3 = ComplexVector::new(f.row(2).to_vec()).unwrap();
        let phi3 = phi3.scale(c(phi3.norm().recip(), 0.));
        let (l, r) = bds_decode(&f, &phi3, 1e-9).unwrap();
        assert_eq!(l, 1);
        assert_eq!(r.support, vec![2]);
        assert!(bds_decode(&f, &x, 1.5).is_err());
    }

    #[test]
    fn estimate_edges() {
        let f = Frame::roots_of_unity(8, 4).unwrap();
        let e0 = estimate_distortion(&f, 0, 200, 5, Execution::Sequential).unwrap();
        assert_eq!(e0.mean, 1.0);
        assert_eq!(e0.stderr, 0.0);
        let en = estimate_distortion(&f, 4, 200, 5, Execution::Sequential).unwrap();
        assert!(en.mean < 1e-10);
        assert_eq!(en.config.l, 4);
        assert_eq!(en.n_samples, 200);
    }

    #[test]
    fn greedy_upper_bounds_exact() {
        let f = Frame::roots_of_unity(10, 4).unwrap();
        let mut rng = rng::stream(9, 0);
        for _ in 0..30 {
            let x = sample_uniform_sphere(4, &mut rng);
            for l in 0..=4 {
                let exact = smdd_exact(&f, &x, l).unwrap().residual_sq;
                let greedy = smdd_greedy(&f, &x, l).unwrap().residual_sq;
                assert!(greedy >= exact - 1e-12);
            }
        }
        let opts = EstimateOptions { budget: 10, greedy_fallback: true, ..EstimateOptions::default() };
        let est = estimate_distortion_with(&f, 2, 20, 1, &opts).unwrap();
        assert!(est.approximate);
        let report = distortion_lower_bound(&BoundInput::new(4, 10, 2).unwrap()).unwrap();
        assert!(matches!(compare_to_bound(&est, &report), Err(Error::ConfigMismatch(_))));
    }

    #[test]
    fn verdict_arithmetic() {
        let config = EstimateConfig { frame_id: "x".into(), n: 6, m: 12, l: 2, seed: 0 };
        let mut report = distortion_lower_bound(&BoundInput::new(6, 12, 2).unwrap()).unwrap();
        report.lower_bound = 0.052;
        let est = DistortionEstimate { mean: 0.08, stderr: 0.002, n_samples: 10, approximate: false, config };
        let v = compare_to_bound(&est, &report).unwrap();
        assert!(v.pass);
        assert!((v.margin - 0.028).abs() < 1e-12);
        let low = DistortionEstimate { mean: 0.04, ..est.clone() };
        assert!(!compare_to_bound(&low, &report).unwrap().pass);

        let f = Frame::roots_of_unity(12, 6).unwrap();
        let e0 = estimate_distortion(&f, 0, 50, 2, Execution::Sequential).unwrap();
        let r0 = distortion_lower_bound(&BoundInput::new(6, 12, 0).unwrap()).unwrap();
        let v0 = compare_to_bound(&e0, &r0).unwrap();
        assert!(v0.pass);
        assert_eq!(v0.margin, 0.0);

        let other = distortion_lower_bound(&BoundInput::new(6, 12, 3).unwrap()).unwrap();
        assert!(matches!(compare_to_bound(&e0, &other), Err(Error::ConfigMismatch(_))));
    }
}
