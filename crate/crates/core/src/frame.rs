//! Frames over ℂᴺ, sparse coefficient vectors and signal synthesis.
//!
//! A frame is stored as an `M × N` row-major matrix whose rows are the frame
//! vectors. The Vandermonde variant keeps its nodes `z_j` alongside the
//! tabulated powers `z_j^0, …, z_j^{N-1}` so that the decoder never has to
//! recompute them.
//!
//! Indices are 0-based in the API; everything serialized is 1-based.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative magnitude below which a coefficient counts as zero.
pub const ZERO_THRESHOLD: f64 = 1e-9;
/// Relative singular-value threshold for rank and singularity decisions.
pub const RANK_TOLERANCE: f64 = 1e-10;
/// Relative spacing below which two nodes are considered equal.
pub const NODE_SEPARATION: f64 = 1e-12;
/// Default cap on the number of subsets any exhaustive enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// A finite point of ℂᴺ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct ComplexVector(Vec<Complex64>);

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::LengthMismatch { expected: 1, got: 0 });
        }
        if let Some(i) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self(entries))
    }

    pub fn zeros(len: usize) -> Self {
        assert!(len >= 1, "vectors have at least one coordinate");
        Self(vec![Complex64::new(0.0, 0.0); len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Euclidean distance to `other`.
    pub fn distance(&self, other: &ComplexVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, factor: Complex64) -> ComplexVector {
        Self(self.0.iter().map(|z| z * factor).collect())
    }
}

impl TryFrom<Vec<Complex64>> for ComplexVector {
    type Error = Error;

    fn try_from(value: Vec<Complex64>) -> Result<Self> {
        Self::new(value)
    }
}

impl From<ComplexVector> for Vec<Complex64> {
    fn from(value: ComplexVector) -> Self {
        value.0
    }
}

impl std::ops::Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, index: usize) -> &Complex64 {
        &self.0[index]
    }
}

/// How a frame was built.
#[derive(Debug, Clone, PartialEq)]
pub enum FrameKind {
    Vandermonde { nodes: Vec<Complex64> },
    General,
}

/// `M` non-zero vectors spanning ℂᴺ, stored as the rows of an `M × N` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    n: usize,
    m: usize,
    rows: Vec<Complex64>,
    kind: FrameKind,
}

/// The M-th roots of unity `exp(2πi·j/M)`, `j = 0..M`.
///
/// Quarter-turn multiples are returned exactly so that `M = 4` yields
/// `{1, i, -1, -i}` without rounding noise.
pub fn default_nodes(m: usize) -> Vec<Complex64> {
    (0..m)
        .map(|j| {
            if (4 * j) % m == 0 {
                match (4 * j) / m {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, 1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, -1.0),
                }
            } else {
                Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64)
            }
        })
        .collect()
}

impl Frame {
    /// Builds the Vandermonde frame whose `j`-th row is `(1, z_j, …, z_j^{N-1})`.
    pub fn vandermonde(nodes: Vec<Complex64>, n: usize) -> Result<Self> {
        let m = nodes.len();
        if n == 0 {
            return Err(Error::InvalidFrame("dimension N must be at least 1".into()));
        }
        if let Some(i) = nodes.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        if let Some(i) = nodes.iter().position(|z| z.norm() == 0.0) {
            return Err(Error::ZeroNode(i + 1));
        }
        let scale = nodes.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for j in 0..m {
            for k in (j + 1)..m {
                if (nodes[j] - nodes[k]).norm() <= NODE_SEPARATION * scale {
                    return Err(Error::DuplicateNode(j + 1, k + 1));
                }
            }
        }
        if m < n {
            return Err(Error::TooFewNodes { m, n });
        }
        let mut rows = Vec::with_capacity(m * n);
        for z in &nodes {
            let mut p = Complex64::new(1.0, 0.0);
            for _ in 0..n {
                rows.push(p);
                p *= z;
            }
        }
        Ok(Self { n, m, rows, kind: FrameKind::Vandermonde { nodes } })
    }

    /// Vandermonde frame on the M-th roots of unity.
    pub fn roots_of_unity(m: usize, n: usize) -> Result<Self> {
        Self::vandermonde(default_nodes(m), n)
    }

    /// Builds a frame from explicit rows. Rows must be non-zero, of equal
    /// length `N`, at least `N` in number, and span ℂᴺ.
    pub fn general(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map(Vec::len).unwrap_or(0);
        if n == 0 {
            return Err(Error::InvalidFrame("rows must have at least one entry".into()));
        }
        if m < n {
            return Err(Error::TooFewNodes { m, n });
        }
        let mut flat = Vec::with_capacity(m * n);
        for (j, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: row.len() });
            }
            if let Some(k) = row.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite(j * n + k));
            }
            if row.iter().all(|z| z.norm() == 0.0) {
                return Err(Error::InvalidFrame(format!("row {} is zero", j + 1)));
            }
            flat.extend_from_slice(row);
        }
        let frame = Self { n, m, rows: flat, kind: FrameKind::General };
        let all: Vec<usize> = (0..m).collect();
        if frame.submatrix_rcond(&all) <= RANK_TOLERANCE {
            return Err(Error::InvalidFrame("rows do not span the signal space".into()));
        }
        Ok(frame)
    }

    /// Frame with i.i.d. standard complex Gaussian rows.
    pub fn gaussian<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Result<Self> {
        let rows = (0..m)
            .map(|_| (0..n).map(|_| complex_gaussian(rng)).collect())
            .collect();
        Self::general(rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> &FrameKind {
        &self.kind
    }

    pub fn is_vandermonde(&self) -> bool {
        matches!(self.kind, FrameKind::Vandermonde { .. })
    }

    pub fn nodes(&self) -> Option<&[Complex64]> {
        match &self.kind {
            FrameKind::Vandermonde { nodes } => Some(nodes),
            FrameKind::General => None,
        }
    }

    /// Row `j` (0-based), i.e. the frame vector φ_{j+1}.
    pub fn row(&self, j: usize) -> &[Complex64] {
        &self.rows[j * self.n..(j + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.rows.chunks_exact(self.n)
    }

    /// Short stable label, e.g. `vandermonde:n6:m12:5f0c…`.
    pub fn id(&self) -> String {
        // FNV-1a over the coefficient bits
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for z in &self.rows {
            for b in z.re.to_bits().to_le_bytes().into_iter().chain(z.im.to_bits().to_le_bytes()) {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
        let tag = if self.is_vandermonde() { "vandermonde" } else { "general" };
        format!("{tag}:n{}:m{}:{h:016x}", self.n, self.m)
    }

    /// Matrix whose rows are the selected frame vectors.
    pub fn submatrix(&self, rows: &[usize]) -> DMatrix<Complex64> {
        DMatrix::from_fn(rows.len(), self.n, |i, k| self.row(rows[i])[k])
    }

    /// Ratio of smallest to largest singular value of the selected rows,
    /// where the smallest is taken over `min(|rows|, N)` values.
    pub fn submatrix_rcond(&self, rows: &[usize]) -> f64 {
        let sv = self.submatrix(rows).singular_values();
        let max = sv.iter().cloned().fold(0.0, f64::max);
        let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        if max == 0.0 {
            0.0
        } else {
            min / max
        }
    }

    /// `Σ_j c_j φ_j` for a dense coefficient vector of length `M`.
    pub fn synthesize(&self, coeffs: &[Complex64]) -> Result<ComplexVector> {
        if coeffs.len() != self.m {
            return Err(Error::LengthMismatch { expected: self.m, got: coeffs.len() });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.n];
        for (c, row) in coeffs.iter().zip(self.rows()) {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            for (o, a) in out.iter_mut().zip(row) {
                *o += c * a;
            }
        }
        ComplexVector::new(out)
    }

    /// `Σ_{j ∈ support} c_j φ_j`.
    pub fn synthesize_sparse(&self, rep: &SparseRep) -> Result<ComplexVector> {
        if rep.ambient_len() != self.m {
            return Err(Error::LengthMismatch { expected: self.m, got: rep.ambient_len() });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.n];
        for (&j, c) in rep.support().iter().zip(rep.values()) {
            for (o, a) in out.iter_mut().zip(self.row(j)) {
                *o += c * a;
            }
        }
        ComplexVector::new(out)
    }

    /// Exhaustively checks that every set of `N` distinct rows is linearly
    /// independent, i.e. each `N × N` submatrix has
    /// `σ_min > tol · σ_max`. Subsets are visited in lexicographic order and
    /// the first violating one is reported.
    pub fn check_condition_i(&self, tol: f64, budget: u64) -> Result<ConditionReport> {
        let count = crate::bounds::log_binomial(self.m as u64, self.n as u64)?.exp();
        if count > budget as f64 * (1.0 + 1e-12) {
            return Err(Error::BudgetExceeded { count, budget });
        }
        let mut checked = 0u64;
        let mut subset: Vec<usize> = (0..self.n).collect();
        loop {
            checked += 1;
            if self.submatrix_rcond(&subset) <= tol {
                return Ok(ConditionReport { holds: false, witness: Some(subset), checked });
            }
            if !next_combination(&mut subset, self.m) {
                break;
            }
        }
        Ok(ConditionReport { holds: true, witness: None, checked })
    }

    /// A non-zero annihilating coefficient vector supported on exactly the
    /// given `N + 1` rows, scaled so its largest-magnitude entry is `1`.
    pub fn null_vector_on_support(&self, rows: &[usize]) -> Result<SparseRep> {
        let n = self.n;
        if self.m < n + 1 {
            return Err(Error::TooFewNodes { m: self.m, n: n + 1 });
        }
        if rows.len() != n + 1 {
            return Err(Error::LengthMismatch { expected: n + 1, got: rows.len() });
        }
        let mut support = rows.to_vec();
        support.sort_unstable();
        if support.windows(2).any(|w| w[0] == w[1]) || support[n] >= self.m {
            return Err(Error::InvalidSparseRep("rows must be distinct and in range".into()));
        }

        let values = match &self.kind {
            FrameKind::Vandermonde { nodes } => {
                // Barycentric weights 1/Π_{i≠k}(z_k − z_i) annihilate every
                // monomial of degree < N; accumulated in the log domain.
                let logs: Vec<Complex64> = support
                    .iter()
                    .map(|&k| {
                        -support
                            .iter()
                            .filter(|&&i| i != k)
                            .map(|&i| (nodes[k] - nodes[i]).ln())
                            .sum::<Complex64>()
                    })
                    .collect();
                let shift = logs.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
                logs.iter().map(|l| (l - shift).exp()).collect::<Vec<_>>()
            }
            FrameKind::General => {
                for skip in 0..=n {
                    let subset: Vec<usize> =
                        support.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &j)| j).collect();
                    if self.submatrix_rcond(&subset) <= RANK_TOLERANCE {
                        return Err(Error::DegenerateSupport);
                    }
                }
                // Fix the last coefficient to 1 and solve Σ_{k<N} v_k φ_k = −φ_last.
                let head = self.submatrix(&support[..n]).transpose();
                let rhs = nalgebra::DVector::from_iterator(n, self.row(support[n]).iter().map(|z| -z));
                let sol = head.lu().solve(&rhs).ok_or(Error::DegenerateSupport)?;
                let mut v: Vec<Complex64> = sol.iter().cloned().collect();
                v.push(Complex64::new(1.0, 0.0));
                v
            }
        };

        let pivot = values
            .iter()
            .cloned()
            .fold(Complex64::new(0.0, 0.0), |best, z| if z.norm() > best.norm() { z } else { best });
        if pivot.norm() == 0.0 || values.iter().any(|v| v.norm() <= ZERO_THRESHOLD * pivot.norm()) {
            return Err(Error::DegenerateSupport);
        }
        let values = values.iter().map(|v| v / pivot).collect();
        SparseRep::new(self.m, support, values)
    }

    /// The dense representation with `c_{N+1} = … = c_M = 0` whose leading
    /// block solves the `N × N` Vandermonde system of the first `N` rows.
    ///
    /// Solved by LU with full pivoting plus two steps of iterative
    /// refinement. The Björck–Pereyra recurrences are `O(N²)` but lose digits
    /// on unit-circle nodes even when the system is a DFT. With `M > N` the
    /// first `N` roots of unity lie on an arc. That block is exponentially
    /// ill-conditioned, with cond ≈ 1e12 already at `N = 16, M = 64`.
    pub fn baseline_representation(&self, r: &ComplexVector) -> Result<Vec<Complex64>> {
        if !self.is_vandermonde() {
            return Err(Error::NotVandermonde);
        }
        let n = self.n;
        if r.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: r.len() });
        }
        let leading: Vec<usize> = (0..n).collect();
        let a = self.submatrix(&leading).transpose();
        let lu = a.clone().full_piv_lu();
        let rhs = nalgebra::DVector::from_column_slice(r.as_slice());
        let mut x = lu.solve(&rhs).ok_or(Error::DegenerateSupport)?;
        for _ in 0..2 {
            let residual = &rhs - &a * &x;
            match lu.solve(&residual) {
                Some(dx) => x += dx,
                None => break,
            }
        }
        let mut c: Vec<Complex64> = x.iter().copied().collect();
        c.resize(self.m, Complex64::new(0.0, 0.0));
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&FrameFile::from(self)).expect("frame serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: FrameFile = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        Frame::try_from(file)
    }
}

/// Outcome of [`Frame::check_condition_i`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub holds: bool,
    /// First violating row subset (0-based) in lexicographic order.
    pub witness: Option<Vec<usize>>,
    pub checked: u64,
}

/// A standard complex Gaussian `N_c(0, 1)` sample.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Advances a strictly increasing index list to the next `k`-subset of
/// `0..n` in lexicographic order. Returns `false` after the last subset.
pub fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in (i + 1)..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Sparse coefficient vector over a frame of size `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseRep {
    ambient_len: usize,
    support: Vec<usize>,
    values: Vec<Complex64>,
}

impl SparseRep {
    /// `support` is 0-based and must be strictly increasing.
    pub fn new(ambient_len: usize, support: Vec<usize>, values: Vec<Complex64>) -> Result<Self> {
        if support.len() != values.len() {
            return Err(Error::InvalidSparseRep(format!(
                "{} indices but {} values",
                support.len(),
                values.len()
            )));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSparseRep("support must be strictly increasing".into()));
        }
        if support.last().is_some_and(|&j| j >= ambient_len) {
            return Err(Error::InvalidSparseRep("support index out of range".into()));
        }
        if let Some(i) = values.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { ambient_len, support, values })
    }

    pub fn empty(ambient_len: usize) -> Self {
        Self { ambient_len, support: Vec::new(), values: Vec::new() }
    }

    /// Keeps entries whose magnitude exceeds [`ZERO_THRESHOLD`] times the
    /// largest magnitude.
    pub fn from_dense(coeffs: &[Complex64]) -> Self {
        let max = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let (support, values) = coeffs
            .iter()
            .enumerate()
            .filter(|(_, z)| max > 0.0 && z.norm() > ZERO_THRESHOLD * max)
            .map(|(j, z)| (j, *z))
            .unzip();
        Self { ambient_len: coeffs.len(), support, values }
    }

    pub fn ambient_len(&self) -> usize {
        self.ambient_len
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// ‖·‖₀
    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.ambient_len];
        for (&j, v) in self.support.iter().zip(&self.values) {
            out[j] = *v;
        }
        out
    }

    /// 1-based support for serialization.
    pub fn support_one_based(&self) -> Vec<usize> {
        self.support.iter().map(|j| j + 1).collect()
    }

    /// Random representation with the given weight: uniform support, values
    /// with magnitude uniform in `[mag_lo, mag_hi]` and uniform phase.
    pub fn random<R: Rng + ?Sized>(
        ambient_len: usize,
        weight: usize,
        mag_lo: f64,
        mag_hi: f64,
        rng: &mut R,
    ) -> Self {
        assert!(weight <= ambient_len);
        let mut support = rand::seq::index::sample(rng, ambient_len, weight).into_vec();
        support.sort_unstable();
        let values = support
            .iter()
            .map(|_| {
                let mag = rng.random_range(mag_lo..=mag_hi);
                Complex64::from_polar(mag, rng.random_range(0.0..(2.0 * PI)))
            })
            .collect();
        Self { ambient_len, support, values }
    }
}

/// On-disk frame schema.
#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FrameFile {
    Vandermonde {
        n: usize,
        #[serde(default)]
        m: Option<usize>,
        nodes: Vec<Complex64>,
    },
    General {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<usize>,
        rows: Vec<Vec<Complex64>>,
    },
}

impl From<&Frame> for FrameFile {
    fn from(frame: &Frame) -> Self {
        match &frame.kind {
            FrameKind::Vandermonde { nodes } => {
                FrameFile::Vandermonde { n: frame.n, m: Some(frame.m), nodes: nodes.clone() }
            }
            FrameKind::General => FrameFile::General {
                n: Some(frame.n),
                m: Some(frame.m),
                rows: frame.rows().map(<[Complex64]>::to_vec).collect(),
            },
        }
    }
}

impl TryFrom<FrameFile> for Frame {
    type Error = Error;

    fn try_from(file: FrameFile) -> Result<Self> {
        let (frame, n, m) = match file {
            FrameFile::Vandermonde { n, m, nodes } => (Frame::vandermonde(nodes, n)?, Some(n), m),
            FrameFile::General { n, m, rows } => (Frame::general(rows)?, n, m),
        };
        if n.is_some_and(|n| n != frame.n) {
            return Err(Error::Json(format!("declared n does not match rows ({})", frame.n)));
        }
        if m.is_some_and(|m| m != frame.m) {
            return Err(Error::Json(format!("declared m does not match frame size ({})", frame.m)));
        }
        Ok(frame)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn four_roots() -> Frame {
        Frame::vandermonde(vec![c(1., 0.), c(0., 1.), c(-1., 0.), c(0., -1.)], 2).unwrap()
    }

    #[test]
    fn vandermonde_rows_expand_powers() {
        let f = four_roots();
        assert_eq!(f.row(0), &[c(1., 0.), c(1., 0.)]);
        assert_eq!(f.row(1), &[c(1., 0.), c(0., 1.)]);
        assert_eq!(f.row(2), &[c(1., 0.), c(-1., 0.)]);
        assert_eq!(f.row(3), &[c(1., 0.), c(0., -1.)]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Frame::vandermonde(vec![c(1., 0.), c(1., 0.)], 1), Err(Error::DuplicateNode(1, 2)));
        assert_eq!(Frame::vandermonde(vec![c(1., 0.), c(0., 0.)], 1), Err(Error::ZeroNode(2)));
        assert_eq!(Frame::vandermonde(vec![c(1., 0.)], 2), Err(Error::TooFewNodes { m: 1, n: 2 }));
        assert!(Frame::general(vec![vec![c(1., 0.), c(0., 0.)], vec![c(2., 0.), c(0., 0.)]]).is_err());
        assert!(Frame::general(vec![vec![c(0., 0.)], vec![c(1., 0.)]]).is_err());
    }

    #[test]
    fn default_nodes_are_roots_of_unity() {
        assert_eq!(default_nodes(1), vec![c(1., 0.)]);
        assert_eq!(default_nodes(4), vec![c(1., 0.), c(0., 1.), c(-1., 0.), c(0., -1.)]);
        let three = default_nodes(3);
        let h = 3f64.sqrt() / 2.0;
        for (z, want) in three.iter().zip([c(1., 0.), c(-0.5, h), c(-0.5, -h)]) {
            assert!((z - want).norm() < 1e-15);
        }
        for z in default_nodes(7) {
            assert!((z.powu(7) - 1.0).norm() < 1e-13);
        }
    }

    #[test]
    fn synthesize_examples() {
        let f = four_roots();
        assert_eq!(f.synthesize(&[c(0., 0.); 4]).unwrap().as_slice(), &[c(0., 0.); 2]);
        let rep = SparseRep::new(4, vec![2], vec![c(2., 0.)]).unwrap();
        assert_eq!(f.synthesize_sparse(&rep).unwrap().as_slice(), &[c(2., 0.), c(-2., 0.)]);
        for j in 0..4 {
            let mut e = vec![c(0., 0.); 4];
            e[j] = c(1., 0.);
            assert_eq!(f.synthesize(&e).unwrap().as_slice(), f.row(j));
        }
        assert_eq!(f.synthesize(&[c(0., 0.); 3]), Err(Error::LengthMismatch { expected: 4, got: 3 }));
    }

    #[test]
    fn condition_i_witnesses() {
        let rows = vec![
            vec![c(1., 0.), c(0., 0.)],
            vec![c(0., 0.), c(1., 0.)],
            vec![c(1., 0.), c(1., 0.)],
            vec![c(2., 0.), c(2., 0.)],
        ];
        let f = Frame::general(rows).unwrap();
        let rep = f.check_condition_i(RANK_TOLERANCE, DEFAULT_BUDGET).unwrap();
        assert!(!rep.holds);
        assert_eq!(rep.witness, Some(vec![2, 3]));

        let dup = Frame::general(vec![
            vec![c(1., 0.), c(0., 0.), c(0., 0.)],
            vec![c(0., 1.), c(2., 0.), c(1., 0.)],
            vec![c(3., 0.), c(1., -1.), c(0., 0.)],
            vec![c(0., 1.), c(2., 0.), c(1., 0.)],
        ])
        .unwrap();
        let rep = dup.check_condition_i(RANK_TOLERANCE, DEFAULT_BUDGET).unwrap();
        let w = rep.witness.unwrap();
        assert!(w.contains(&1) && w.contains(&3));

        let budget = Frame::roots_of_unity(24, 12).unwrap().check_condition_i(RANK_TOLERANCE, 1000);
        assert!(matches!(budget, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn null_vector_small_cases() {
        let f = Frame::vandermonde(vec![c(1., 0.), c(-1., 0.)], 1).unwrap();
        let v = f.null_vector_on_support(&[0, 1]).unwrap();
        assert_eq!(v.support(), &[0, 1]);
        assert!((v.values()[0] - c(1., 0.)).norm() < 1e-15);
        assert!((v.values()[1] - c(-1., 0.)).norm() < 1e-15);

        let f = Frame::vandermonde(vec![c(1., 0.), c(0., 1.), c(-1., 0.)], 2).unwrap();
        let v = f.null_vector_on_support(&[0, 1, 2]).unwrap();
        assert_eq!(v.weight(), 3);
        // Fix v_3 and solve the 2×2 system by hand: v_1 + v_2 = −v_3, v_1 + i v_2 = v_3.
        let v3 = v.values()[2];
        let v2 = -v3 * 2.0 / c(1., -1.);
        let v1 = -v3 - v2;
        assert!((v.values()[0] - v1).norm() < 1e-12);
        assert!((v.values()[1] - v2).norm() < 1e-12);
        assert!(f.synthesize_sparse(&v).unwrap().norm() < 1e-10);
    }

    #[test]
    fn null_vector_errors() {
        let f = four_roots();
        assert!(matches!(f.null_vector_on_support(&[0, 1]), Err(Error::LengthMismatch { .. })));
        assert!(f.null_vector_on_support(&[0, 0, 1]).is_err());
        let g = Frame::general(vec![
            vec![c(1., 0.), c(0., 0.)],
            vec![c(0., 0.), c(1., 0.)],
            vec![c(1., 0.), c(1., 0.)],
            vec![c(2., 0.), c(2., 0.)],
        ])
        .unwrap();
        assert_eq!(g.null_vector_on_support(&[1, 2, 3]), Err(Error::DegenerateSupport));
        let v = g.null_vector_on_support(&[0, 1, 2]).unwrap();
        assert!(g.synthesize_sparse(&v).unwrap().norm() < 1e-12);
    }

    #[test]
    fn baseline_examples() {
        let f = four_roots();
        let zero = ComplexVector::zeros(2);
        assert!(f.baseline_representation(&zero).unwrap().iter().all(|z| z.norm() == 0.0));
        let phi1 = ComplexVector::new(f.row(0).to_vec()).unwrap();
        let e1 = f.baseline_representation(&phi1).unwrap();
        assert!((e1[0] - c(1., 0.)).norm() < 1e-15 && e1[1..].iter().all(|z| z.norm() < 1e-15));
        let r = ComplexVector::new(vec![c(2., 0.), c(-2., 0.)]).unwrap();
        let cvec = f.baseline_representation(&r).unwrap();
        assert!((cvec[0] - c(0., -2.)).norm() < 1e-14);
        assert!((cvec[1] - c(2., 2.)).norm() < 1e-14);
        assert!(f.synthesize(&cvec).unwrap().distance(&r) < 1e-13);
        let g = Frame::gaussian(3, 2, &mut rand::rng()).unwrap();
        assert_eq!(g.baseline_representation(&r), Err(Error::NotVandermonde));
    }

    #[test]
    fn sparse_rep_thresholding() {
        let rep = SparseRep::from_dense(&[c(1., 0.), c(1e-10, 0.), c(0., -3.), c(0., 0.)]);
        assert_eq!(rep.support(), &[0, 2]);
        assert_eq!(rep.support_one_based(), vec![1, 3]);
        assert_eq!(SparseRep::from_dense(&[c(0., 0.); 3]).weight(), 0);
        assert!(SparseRep::new(3, vec![1, 1], vec![c(1., 0.), c(1., 0.)]).is_err());
        assert!(SparseRep::new(3, vec![3], vec![c(1., 0.)]).is_err());
    }

    #[test]
    fn json_schema() {
        let f = four_roots();
        let text = f.to_json();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["kind"], "vandermonde");
        assert_eq!(v["n"], 2);
        assert_eq!(v["m"], 4);
        assert_eq!(v["nodes"][1], serde_json::json!([0.0, 1.0]));
        assert_eq!(Frame::from_json(&text).unwrap(), f);

        let g = Frame::from_json(r#"{"kind":"general","rows":[[[1,0],[0,0]],[[0,0],[1,0]],[[1,1],[0.5,-2]]]}"#)
            .unwrap();
        assert_eq!((g.n(), g.m()), (2, 3));
        assert_eq!(Frame::from_json(&g.to_json()).unwrap(), g);
        assert!(Frame::from_json(r#"{"kind":"vandermonde","n":2,"m":3,"nodes":[[1,0],[0,1]]}"#).is_err());
        assert!(Frame::from_json(r#"{"kind":"bogus"}"#).is_err());
    }
}
