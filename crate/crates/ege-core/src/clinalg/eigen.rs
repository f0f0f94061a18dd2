//! Eigenvalues by Hessenberg reduction and shifted QR with deflation.

use super::{CMatrix, ScaledComplex};
use crate::error::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

/// Eigenvalue multiset of a general complex matrix. No ordering is
/// guaranteed; consumers must treat the sequence as a multiset.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub converged: bool,
}

/// Unitary similarity reduction to upper Hessenberg form (Householder).
pub fn hessenberg(a: &CMatrix) -> CMatrix {
    let n = a.order();
    let mut h = a.clone();
    if n < 3 {
        return h;
    }
    for k in 0..n - 2 {
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h.get(i, k)).collect();
        let xnorm = Float::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
        if xnorm == 0.0 {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;
        v[0] = x0 - alpha;
        let vsq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vsq == 0.0 {
            continue;
        }
        let beta = 2.0 / vsq;

        // Left multiply by I - beta v v^*; column k's result is alpha e1.
        for j in k + 1..n {
            let mut s = Complex64::new(0.0, 0.0);
            for (off, vi) in v.iter().enumerate() {
                s += vi.conj() * h.get(k + 1 + off, j);
            }
            s *= beta;
            for (off, vi) in v.iter().enumerate() {
                let val = h.get(k + 1 + off, j) - vi * s;
                h.set(k + 1 + off, j, val);
            }
        }
        h.set(k + 1, k, alpha);
        for i in k + 2..n {
            h.set(i, k, Complex64::new(0.0, 0.0));
        }
        // Right multiply.
        for i in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for (off, vi) in v.iter().enumerate() {
                s += h.get(i, k + 1 + off) * vi;
            }
            s *= beta;
            for (off, vi) in v.iter().enumerate() {
                let val = h.get(i, k + 1 + off) - s * vi.conj();
                h.set(i, k + 1 + off, val);
            }
        }
    }
    h
}

/// Eigenvalues with the default tolerances (relative subdiagonal deflation
/// at 1e-12, at most 60*n QR sweeps).
pub fn eigenvalues_default(a: &CMatrix) -> Result<Spectrum> {
    eigenvalues(a, 1e-12, 60 * a.order())
}

pub fn eigenvalues(a: &CMatrix, tol: f64, max_sweeps: usize) -> Result<Spectrum> {
    if tol <= 0.0 {
        return Err(Error::Domain("eigenvalues requires tol > 0"));
    }
    let n = a.order();
    if n == 0 {
        return Err(Error::Domain("eigenvalues requires order >= 1"));
    }
    let mut h = hessenberg(a);
    let mut eig: Vec<Complex64> = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut sweeps = 0usize;
    let mut stagnation = 0usize;
    let mut converged = true;

    'outer: loop {
        // Deflate converged 1x1 blocks at the bottom of the window.
        loop {
            if hi == 0 {
                eig.push(h.get(0, 0));
                break 'outer;
            }
            if negligible(&h, hi, tol) {
                h.set(hi, hi - 1, Complex64::new(0.0, 0.0));
                eig.push(h.get(hi, hi));
                hi -= 1;
                stagnation = 0;
            } else {
                break;
            }
        }
        // Locate the irreducible block [lo..=hi].
        let mut lo = hi;
        while lo > 0 {
            if negligible(&h, lo, tol) {
                h.set(lo, lo - 1, Complex64::new(0.0, 0.0));
                break;
            }
            lo -= 1;
        }
        if hi - lo == 1 {
            let (l1, l2) = eig2(h.get(lo, lo), h.get(lo, hi), h.get(hi, lo), h.get(hi, hi));
            eig.push(l1);
            eig.push(l2);
            if lo == 0 {
                break 'outer;
            }
            hi = lo - 1;
            stagnation = 0;
            continue;
        }
        if sweeps >= max_sweeps {
            converged = false;
            for i in (0..=hi).rev() {
                eig.push(h.get(i, i));
            }
            break;
        }
        let shift = if stagnation % 12 == 10 {
            // Exceptional shift to break rare shift cycles.
            let mut nudge = h.get(hi, hi - 1).norm();
            if hi >= lo + 2 {
                nudge += h.get(hi - 1, hi - 2).norm();
            }
            h.get(hi, hi) + Complex64::new(0.75 * nudge, 0.0)
        } else {
            wilkinson_shift(&h, hi)
        };
        qr_step(&mut h, lo, hi, shift);
        sweeps += 1;
        stagnation += 1;
    }

    Ok(Spectrum { eigenvalues: eig, converged })
}

fn negligible(h: &CMatrix, i: usize, tol: f64) -> bool {
    let sub = h.get(i, i - 1).norm();
    let scale = h.get(i - 1, i - 1).norm() + h.get(i, i).norm();
    sub <= tol * scale
}

/// Eigenvalues of a 2x2 complex block, larger root first by modulus.
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let mean = (a + d) * 0.5;
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let cand1 = mean + disc;
    let cand2 = mean - disc;
    let big = if cand1.norm() >= cand2.norm() { cand1 } else { cand2 };
    if big.norm() == 0.0 {
        return (cand1, cand2);
    }
    // The smaller root from the product keeps accuracy when the roots
    // differ by orders of magnitude.
    let det = a * d - b * c;
    (big, det / big)
}

fn wilkinson_shift(h: &CMatrix, hi: usize) -> Complex64 {
    let (l1, l2) =
        eig2(h.get(hi - 1, hi - 1), h.get(hi - 1, hi), h.get(hi, hi - 1), h.get(hi, hi));
    let target = h.get(hi, hi);
    if (l1 - target).norm() <= (l2 - target).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Givens rotation [c, s; -conj(s), c] with real c annihilating b.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64, Complex64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0), a);
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb, Complex64::new(nb, 0.0));
    }
    let r = Float::sqrt(na * na + nb * nb);
    let c = na / r;
    let phase = a / na;
    let s = phase * b.conj() / r;
    (c, s, phase * r)
}

/// One explicit shifted QR step on the window [lo..=hi] of a Hessenberg
/// matrix: H <- R Q + sigma I where Q R = H - sigma I.
fn qr_step(h: &mut CMatrix, lo: usize, hi: usize, sigma: Complex64) {
    for d in lo..=hi {
        let v = h.get(d, d) - sigma;
        h.set(d, d, v);
    }
    let mut rots: Vec<(f64, Complex64)> = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s, r) = givens(h.get(k, k), h.get(k + 1, k));
        h.set(k, k, r);
        h.set(k + 1, k, Complex64::new(0.0, 0.0));
        for j in k + 1..=hi {
            let x = h.get(k, j);
            let y = h.get(k + 1, j);
            h.set(k, j, x * c + s * y);
            h.set(k + 1, j, -s.conj() * x + y * c);
        }
        rots.push((c, s));
    }
    for (k, &(c, s)) in (lo..hi).zip(rots.iter()) {
        let top = (k + 1).min(hi);
        for i in lo..=top {
            let x = h.get(i, k);
            let y = h.get(i, k + 1);
            h.set(i, k, x * c + s.conj() * y);
            h.set(i, k + 1, -s * x + y * c);
        }
    }
    for d in lo..=hi {
        let v = h.get(d, d) + sigma;
        h.set(d, d, v);
    }
}

/// det(diag_shift * I + scale * H) for an upper Hessenberg H, in O(n^2)
/// with adjacent-row pivoting. Used for repeated characteristic-polynomial
/// evaluations that share one matrix.
pub fn hessenberg_char_logdet(h: &CMatrix, diag_shift: Complex64, scale: Complex64) -> ScaledComplex {
    let n = h.order();
    let mut det = ScaledComplex::ONE;
    let mut cur: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n];
    let mut nxt: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        cur[j] = scale * h.get(0, j) + if j == 0 { diag_shift } else { Complex64::new(0.0, 0.0) };
    }
    for k in 0..n {
        if k + 1 < n {
            for j in 0..n {
                nxt[j] = if j + 1 >= k + 1 {
                    scale * h.get(k + 1, j)
                        + if j == k + 1 { diag_shift } else { Complex64::new(0.0, 0.0) }
                } else {
                    Complex64::new(0.0, 0.0)
                };
            }
            if nxt[k].norm() > cur[k].norm() {
                core::mem::swap(&mut cur, &mut nxt);
                det = det.neg();
            }
            let pivot = cur[k];
            if pivot.norm() < super::SINGULAR_PIVOT_THRESHOLD {
                return ScaledComplex::ZERO;
            }
            let mult = nxt[k] / pivot;
            if mult.re != 0.0 || mult.im != 0.0 {
                for j in k + 1..n {
                    nxt[j] -= mult * cur[j];
                }
            }
            det = det.mul_complex(pivot);
            core::mem::swap(&mut cur, &mut nxt);
        } else {
            if cur[k].norm() < super::SINGULAR_PIVOT_THRESHOLD {
                return ScaledComplex::ZERO;
            }
            det = det.mul_complex(cur[k]);
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn match_multisets(got: &[Complex64], want: &[Complex64], tol: f64) {
        assert_eq!(got.len(), want.len());
        let mut used = vec![false; want.len()];
        for g in got {
            let mut best = usize::MAX;
            let mut best_d = f64::INFINITY;
            for (i, w) in want.iter().enumerate() {
                if used[i] {
                    continue;
                }
                let d = (g - w).norm();
                if d < best_d {
                    best_d = d;
                    best = i;
                }
            }
            assert!(best_d < tol, "eigenvalue {g} missed target by {best_d}");
            used[best] = true;
        }
    }

    #[test]
    fn diagonal_spectrum() {
        let mut a = CMatrix::zeros(3);
        a.set(0, 0, c(1.0, 0.0));
        a.set(1, 1, c(0.0, 2.0));
        a.set(2, 2, c(-3.0, 0.0));
        let s = eigenvalues_default(&a).unwrap();
        assert!(s.converged);
        match_multisets(&s.eigenvalues, &[c(1.0, 0.0), c(0.0, 2.0), c(-3.0, 0.0)], 1e-12);
    }

    #[test]
    fn rotation_spectrum_is_plus_minus_i() {
        let mut a = CMatrix::zeros(2);
        a.set(0, 1, c(1.0, 0.0));
        a.set(1, 0, c(-1.0, 0.0));
        let s = eigenvalues_default(&a).unwrap();
        match_multisets(&s.eigenvalues, &[c(0.0, 1.0), c(0.0, -1.0)], 1e-12);
    }

    #[test]
    fn hessenberg_det_matches_direct_lu() {
        // Fixed 5x5 with deterministic pseudo-entries.
        let a = CMatrix::from_fn(5, |i, j| {
            c(((3 * i + 7 * j + 1) % 11) as f64 - 5.0, ((5 * i + 2 * j) % 7) as f64 - 3.0)
        });
        let h = hessenberg(&a);
        let alpha = c(1.3, -0.4);
        let beta = c(0.2, 0.9);
        let m = CMatrix::from_fn(5, |i, j| {
            beta * a.get(i, j) + if i == j { alpha } else { c(0.0, 0.0) }
        });
        let direct = super::super::log_det(&super::super::lu_factor(&m).unwrap());
        let fast = hessenberg_char_logdet(&h, alpha, beta);
        assert!((direct.log_modulus() - fast.log_modulus()).abs() < 1e-10);
        let mut dphase = direct.arg() - fast.arg();
        while dphase > core::f64::consts::PI {
            dphase -= 2.0 * core::f64::consts::PI;
        }
        while dphase < -core::f64::consts::PI {
            dphase += 2.0 * core::f64::consts::PI;
        }
        assert!(dphase.abs() < 1e-10);
    }
}
