//! Modified Chebyshev polynomials: recurrence P_{k+1} = X P_k - t P_{k-1}
//! with P_0 = 2, P_1 = X, closed-form coefficients, and evaluation.

use crate::error::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

/// Real polynomial stored by coefficient, index = degree.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyReal {
    pub coeffs: Vec<f64>,
}

impl PolyReal {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

/// Exact binomial coefficient in u128 (small arguments only).
pub(crate) fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num: u128 = 1;
    for i in 0..k {
        num = num * (n - i) as u128 / (i + 1) as u128;
    }
    num
}

/// Coefficient vector of P_k^{(t)} from the recurrence.
pub fn cheb_poly(k: usize, t: f64) -> PolyReal {
    if k == 0 {
        return PolyReal { coeffs: vec![2.0] };
    }
    if k == 1 {
        return PolyReal { coeffs: vec![0.0, 1.0] };
    }
    let mut prev = vec![2.0]; // P_0
    let mut curr = vec![0.0, 1.0]; // P_1
    for _ in 2..=k {
        let mut next = vec![0.0; curr.len() + 1];
        for (d, &c) in curr.iter().enumerate() {
            next[d + 1] += c;
        }
        for (d, &c) in prev.iter().enumerate() {
            next[d] -= t * c;
        }
        prev = curr;
        curr = next;
    }
    PolyReal { coeffs: curr }
}

/// Closed-form coefficients: the X^{k-2j} coefficient of P_k^{(t)} is
/// (-t)^j * k/(k-j) * C(k-j, j); zero for k-2j < 0. Requires k >= 1.
pub fn cheb_coeffs_closed(k: usize, t: f64) -> Result<PolyReal> {
    if k == 0 {
        return Err(Error::Domain("closed-form coefficients require k >= 1"));
    }
    let mut coeffs = vec![0.0; k + 1];
    let mut j = 0usize;
    while 2 * j <= k {
        // k/(k-j) * C(k-j, j) is an integer; compute it exactly.
        let scaled = k as u128 * binomial_u128((k - j) as u64, j as u64);
        debug_assert_eq!(scaled % (k - j) as u128, 0);
        let count = (scaled / (k - j) as u128) as f64;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        coeffs[k - 2 * j] = sign * Float::powi(t, j as i32) * count;
        j += 1;
    }
    Ok(PolyReal { coeffs })
}

/// Horner evaluation at a complex point.
pub fn eval_poly(p: &PolyReal, w: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in p.coeffs.iter().rev() {
        acc = acc * w + c;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_cases() {
        assert_eq!(cheb_poly(0, 0.7).coeffs, vec![2.0]);
        assert_eq!(cheb_poly(1, 0.7).coeffs, vec![0.0, 1.0]);
    }

    #[test]
    fn degree_two_and_four() {
        let t = 0.5;
        assert_eq!(cheb_poly(2, t).coeffs, vec![-2.0 * t, 0.0, 1.0]);
        // P_4 = X^4 - 4 t X^2 + 2 t^2
        assert_eq!(cheb_poly(4, t).coeffs, vec![2.0 * t * t, 0.0, -4.0 * t, 0.0, 1.0]);
    }

    #[test]
    fn closed_form_small_cases() {
        let t = 0.5;
        let p2 = cheb_coeffs_closed(2, t).unwrap();
        assert_eq!(p2.coeffs, vec![-2.0 * t, 0.0, 1.0]);
        let p3 = cheb_coeffs_closed(3, t).unwrap();
        assert_eq!(p3.coeffs, vec![0.0, -3.0 * t, 0.0, 1.0]);
        let p1 = cheb_coeffs_closed(1, t).unwrap();
        assert_eq!(p1.coeffs, vec![0.0, 1.0]);
    }

    #[test]
    fn constant_poly_evaluates_to_constant() {
        let p = PolyReal { coeffs: vec![2.0] };
        assert_eq!(eval_poly(&p, Complex64::new(3.0, -4.0)), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn monomials_at_t_zero() {
        for k in 1..8 {
            let p = cheb_poly(k, 0.0);
            let mut expected = vec![0.0; k + 1];
            expected[k] = 1.0;
            assert_eq!(p.coeffs, expected);
        }
    }
}
