//! The limiting random analytic function: truncated sampling of the
//! Gaussian series, the deterministic prefactor assembled from the h
//! coefficients, and the closed-form second moment used for
//! cross-validation against the finite-n formula.

use crate::error::{Error, Result};
use crate::momentcomb::{h_coeff, H_COEFF_BUDGET};
use crate::sampling::{derive_stream, sample_gaf_coeff, SampleStream};
use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

/// Parameters of one limit-function experiment: series truncation K and
/// the master seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GafParams {
    pub t: f64,
    pub truncation: usize,
    pub seed: u64,
}

impl GafParams {
    pub fn new(t: f64, truncation: usize, seed: u64) -> Result<Self> {
        if truncation == 0 {
            return Err(Error::Domain("series truncation must be >= 1"));
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain("interpolation parameter t must lie in [0, 1]"));
        }
        Ok(GafParams { t, truncation, seed })
    }
}

/// Cached h coefficients h_1 .. h_kmax for one t; computing them walks the
/// exact Wick oracle once, so build this once and share it.
#[derive(Debug, Clone)]
pub struct HSeries {
    pub t: f64,
    values: Vec<f64>,
}

impl HSeries {
    /// kmax is capped by the oracle budget (k <= 6); the prefactor's
    /// accuracy beyond |z| ~ 0.6 is therefore not claimed.
    pub fn compute(t: f64, kmax: usize) -> Result<Self> {
        if kmax == 0 || kmax > H_COEFF_BUDGET {
            return Err(Error::Unsupported("h series is available for 1 <= kmax <= 6"));
        }
        let mut values = Vec::with_capacity(kmax);
        for k in 1..=kmax {
            values.push(h_coeff(k, t)?);
        }
        Ok(HSeries { t, values })
    }

    pub fn h(&self, k: usize) -> f64 {
        self.values[k - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The deterministic prefactor
    /// exp(-1/2 sum_k h_k z^{2k}/k) exp(t z^2 / (2 (1 - t z^2))).
    pub fn kappa(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() >= 1.0 {
            return Err(Error::Domain("kappa requires |z| < 1"));
        }
        let t = self.t;
        let zz = z * z;
        if (t * zz).norm() >= 1.0 {
            return Err(Error::Domain("kappa requires t |z|^2 < 1"));
        }
        let mut series = Complex64::new(0.0, 0.0);
        let mut z2k = Complex64::new(1.0, 0.0);
        for (i, &h) in self.values.iter().enumerate() {
            z2k *= zz;
            series += h / (i + 1) as f64 * z2k;
        }
        let second = t * zz / (2.0 * (Complex64::new(1.0, 0.0) - t * zz));
        Ok((-0.5 * series).exp() * second.exp())
    }

    /// |kappa(z)|^2 / (|1 - t z^2| (1 - |z|^2)): the second moment of the
    /// limit function, from the Gaussian moment identity
    /// E|e^{-F}|^2 = exp(Re E[F^2] + E|F|^2).
    pub fn limit_second_moment(&self, z: Complex64) -> Result<f64> {
        let kappa = self.kappa(z)?;
        let one = Complex64::new(1.0, 0.0);
        Ok(kappa.norm_sqr() / ((one - self.t * z * z).norm() * (1.0 - z.norm_sqr())))
    }
}

/// One-off convenience wrappers; loops should hold an HSeries instead.
pub fn kappa(t: f64, z: Complex64, h_terms: usize) -> Result<Complex64> {
    HSeries::compute(t, h_terms)?.kappa(z)
}

pub fn limit_second_moment(t: f64, z: Complex64) -> Result<f64> {
    HSeries::compute(t, H_COEFF_BUDGET)?.limit_second_moment(z)
}

/// The coefficient draw X_1 .. X_K of one sample path.
pub fn draw_coefficients(p: &GafParams, index: u64) -> Result<Vec<Complex64>> {
    let mut stream = derive_stream(p.seed, index);
    draw_coefficients_from(&mut stream, p.t, p.truncation)
}

pub fn draw_coefficients_from(
    stream: &mut SampleStream,
    t: f64,
    truncation: usize,
) -> Result<Vec<Complex64>> {
    (1..=truncation).map(|k| sample_gaf_coeff(stream, t, k)).collect()
}

fn check_points(zs: &[Complex64]) -> Result<()> {
    if zs.iter().any(|z| z.norm() >= 1.0) {
        return Err(Error::Domain("evaluation points must satisfy |z| < 1"));
    }
    Ok(())
}

/// One draw of the truncated Gaussian series sum_{k<=K} X_k z^k / sqrt(k),
/// evaluated at every point with the same coefficient draw.
pub fn sample_gaussian_series(p: &GafParams, index: u64, zs: &[Complex64]) -> Result<Vec<Complex64>> {
    check_points(zs)?;
    let coeffs = draw_coefficients(p, index)?;
    Ok(zs.iter().map(|&z| eval_series(&coeffs, z)).collect())
}

pub fn eval_series(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut zk = Complex64::new(1.0, 0.0);
    for (i, &x) in coeffs.iter().enumerate() {
        zk *= z;
        acc += x * zk / Float::sqrt((i + 1) as f64);
    }
    acc
}

/// One draw of the limit function kappa(z) exp(-F(z)) with a shared
/// coefficient draw across the evaluation points.
pub fn sample_limit_function(
    p: &GafParams,
    h: &HSeries,
    index: u64,
    zs: &[Complex64],
) -> Result<Vec<Complex64>> {
    check_points(zs)?;
    let coeffs = draw_coefficients(p, index)?;
    zs.iter()
        .map(|&z| {
            let f = eval_series(&coeffs, z);
            Ok(h.kappa(z)? * (-f).exp())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_vanishes_at_zero() {
        let p = GafParams::new(0.5, 16, 9).unwrap();
        let vals = sample_gaussian_series(&p, 0, &[Complex64::new(0.0, 0.0)]).unwrap();
        assert_eq!(vals[0].norm(), 0.0);
    }

    #[test]
    fn limit_function_is_one_at_zero() {
        let p = GafParams::new(0.5, 16, 9).unwrap();
        let h = HSeries::compute(0.5, 2).unwrap();
        let vals = sample_limit_function(&p, &h, 0, &[Complex64::new(0.0, 0.0)]).unwrap();
        assert!((vals[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn kappa_basics() {
        let h = HSeries::compute(0.0, 3).unwrap();
        // t = 0: h vanishes and the second factor is 1.
        for z in [Complex64::new(0.3, 0.1), Complex64::new(-0.5, 0.2)] {
            assert!((h.kappa(z).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
        let h = HSeries::compute(0.5, 2).unwrap();
        assert!((h.kappa(Complex64::new(0.0, 0.0)).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn limit_second_moment_closed_forms() {
        let h = HSeries::compute(0.0, 2).unwrap();
        assert!((h.limit_second_moment(Complex64::new(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-14);
        let v = h.limit_second_moment(Complex64::new(0.5, 0.0)).unwrap();
        assert!((v - 1.0 / 0.75).abs() < 1e-12);
    }

    #[test]
    fn domain_checks() {
        let p = GafParams::new(0.5, 8, 1).unwrap();
        assert!(sample_gaussian_series(&p, 0, &[Complex64::new(1.0, 0.0)]).is_err());
        assert!(HSeries::compute(0.5, 7).is_err());
    }
}
