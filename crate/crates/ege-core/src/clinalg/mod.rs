//! Self-contained dense complex linear algebra.
//!
//! Matrices are square, row-major `Complex64`. The module provides
//! multiplication, LU with partial pivoting and a log-scaled determinant,
//! power traces, and eigenvalues via Hessenberg reduction plus shifted QR.

mod eigen;
mod lu;
mod scaled;

pub use eigen::{eigenvalues, eigenvalues_default, hessenberg, hessenberg_char_logdet, Spectrum};
pub use lu::{log_det, lu_factor, LUFactors, SINGULAR_PIVOT_THRESHOLD};
pub use scaled::ScaledComplex;

use crate::error::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { n, entries: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds an n-by-n matrix from a function of (row, column).
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        CMatrix { n, entries }
    }

    /// Wraps a row-major entry vector; the length must be a perfect square.
    pub fn from_entries(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: entries.len() });
        }
        Ok(CMatrix { n, entries })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.n + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn conj_transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.n, |i, j| self.get(j, i).conj())
    }
}

/// Matrix product. The two factors must have equal order.
///
/// Internally splits both factors into real and imaginary planes and runs
/// four real kernels; the complex recombination is exact in f64 up to the
/// usual rounding of sums.
pub fn mat_mul(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch { expected: a.n, got: b.n });
    }
    let n = a.n;
    let (ar, ai) = split_planes(a);
    let (br, bi) = split_planes(b);
    // cr = ar*br - ai*bi, ci = ar*bi + ai*br
    let mut cr = vec![0.0f64; n * n];
    let mut ci = vec![0.0f64; n * n];
    gemm_acc(n, &ar, &br, &mut cr, 1.0);
    gemm_acc(n, &ai, &bi, &mut cr, -1.0);
    gemm_acc(n, &ar, &bi, &mut ci, 1.0);
    gemm_acc(n, &ai, &br, &mut ci, 1.0);
    let entries = cr
        .iter()
        .zip(ci.iter())
        .map(|(&re, &im)| Complex64::new(re, im))
        .collect();
    Ok(CMatrix { n, entries })
}

fn split_planes(m: &CMatrix) -> (Vec<f64>, Vec<f64>) {
    let re = m.entries.iter().map(|z| z.re).collect();
    let im = m.entries.iter().map(|z| z.im).collect();
    (re, im)
}

/// c += sign * a*b for row-major n*n real matrices (ikj order).
fn gemm_acc(n: usize, a: &[f64], b: &[f64], c: &mut [f64], sign: f64) {
    for i in 0..n {
        let arow = &a[i * n..(i + 1) * n];
        let crow = &mut c[i * n..(i + 1) * n];
        for (k, &aik) in arow.iter().enumerate() {
            let s = sign * aik;
            if s == 0.0 {
                continue;
            }
            let brow = &b[k * n..(k + 1) * n];
            for (cv, &bv) in crow.iter_mut().zip(brow.iter()) {
                *cv += s * bv;
            }
        }
    }
}

/// Power traces (Tr A^1, ..., Tr A^kmax).
///
/// Builds explicit powers only up to ceil(kmax/2); higher traces come from
/// pairwise products Tr(A^i A^j) accumulated in O(n^2).
pub fn trace_powers(a: &CMatrix, kmax: usize) -> Result<Vec<Complex64>> {
    if kmax == 0 {
        return Err(Error::Domain("trace_powers requires kmax >= 1"));
    }
    let half = kmax.div_ceil(2);
    let mut powers: Vec<CMatrix> = Vec::with_capacity(half);
    powers.push(a.clone());
    for _ in 1..half {
        let next = mat_mul(powers.last().unwrap(), a)?;
        powers.push(next);
    }
    let mut traces = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        if k <= half {
            traces.push(powers[k - 1].trace());
        } else {
            traces.push(pairwise_trace(&powers[k - half - 1], &powers[half - 1]));
        }
    }
    Ok(traces)
}

/// Tr(X * Y) without forming the product.
fn pairwise_trace(x: &CMatrix, y: &CMatrix) -> Complex64 {
    let n = x.n;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += x.get(i, j) * y.get(j, i);
        }
    }
    acc
}
