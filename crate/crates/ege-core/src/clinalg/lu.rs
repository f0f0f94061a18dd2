//! LU factorization with partial pivoting and the log-scaled determinant.

use super::{CMatrix, ScaledComplex};
use crate::error::{Error, Result};
use alloc::vec::Vec;

/// Pivot moduli below this are treated as exact zeros: the determinant is
/// then a legal zero value, not an error.
pub const SINGULAR_PIVOT_THRESHOLD: f64 = 1e-300;

/// Packed partial-pivoting factorization P*A = L*U.
///
/// `combined` holds the strict unit-lower multipliers below the diagonal
/// and U on and above it. `pivots` is the row permutation: row i of P*A is
/// row pivots[i] of A. `swaps` counts the transpositions performed.
#[derive(Debug, Clone)]
pub struct LUFactors {
    pub combined: CMatrix,
    pub pivots: Vec<usize>,
    pub swaps: usize,
    pub singular: bool,
}

pub fn lu_factor(a: &CMatrix) -> Result<LUFactors> {
    let n = a.order();
    if n == 0 {
        return Err(Error::Domain("lu_factor requires order >= 1"));
    }
    if a.entries().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Domain("lu_factor requires finite entries"));
    }
    let mut m = a.clone();
    let mut pivots: Vec<usize> = (0..n).collect();
    let mut swaps = 0usize;
    let mut singular = false;

    for k in 0..n {
        let mut best = k;
        let mut best_abs = m.get(k, k).norm();
        for i in (k + 1)..n {
            let v = m.get(i, k).norm();
            if v > best_abs {
                best_abs = v;
                best = i;
            }
        }
        if best != k {
            for j in 0..n {
                let tmp = m.get(k, j);
                m.set(k, j, m.get(best, j));
                m.set(best, j, tmp);
            }
            pivots.swap(k, best);
            swaps += 1;
        }
        let pivot = m.get(k, k);
        if pivot.norm() < SINGULAR_PIVOT_THRESHOLD {
            // Entire remaining column is negligible; leave it untouched.
            singular = true;
            continue;
        }
        for i in (k + 1)..n {
            let mult = m.get(i, k) / pivot;
            m.set(i, k, mult);
            if mult.re == 0.0 && mult.im == 0.0 {
                continue;
            }
            for j in (k + 1)..n {
                let v = m.get(i, j) - mult * m.get(k, j);
                m.set(i, j, v);
            }
        }
    }

    Ok(LUFactors { combined: m, pivots, swaps, singular })
}

/// Determinant of the factored matrix as a scaled complex value.
///
/// det A = (-1)^swaps * prod of U's diagonal; singular factorizations give
/// the exact zero.
pub fn log_det(lu: &LUFactors) -> ScaledComplex {
    if lu.singular {
        return ScaledComplex::ZERO;
    }
    let n = lu.combined.order();
    let mut det = ScaledComplex::ONE;
    for k in 0..n {
        det = det.mul_complex(lu.combined.get(k, k));
    }
    if lu.swaps % 2 == 1 {
        det = det.neg();
    }
    det
}
