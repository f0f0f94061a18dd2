//! Overflow-safe Hermite evaluation, the exact finite-n formula for the
//! second moment of the normalised characteristic polynomial, and the
//! large-n predictor of that moment.

use crate::charpoly::{g_inverse, g_map};
use crate::clinalg::ScaledComplex;
use crate::error::{Error, Result};
use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

/// Monic Hermite values He_0(w) .. He_k(w) in scaled arithmetic.
#[derive(Debug, Clone)]
pub struct HermiteSeq {
    pub values: Vec<ScaledComplex>,
    pub argument: Complex64,
}

/// Three-term monic recurrence He_{m+1}(w) = w He_m(w) - m He_{m-1}(w)
/// with per-step renormalization.
pub fn hermite_scaled(k: usize, w: Complex64) -> HermiteSeq {
    let mut values = Vec::with_capacity(k + 1);
    values.push(ScaledComplex::ONE);
    if k >= 1 {
        values.push(ScaledComplex::from_complex(w));
    }
    for m in 1..k {
        let next = values[m].mul_complex(w).sub(&values[m - 1].mul_real(m as f64));
        values.push(next);
    }
    HermiteSeq { values, argument: w }
}

fn check_z(z: Complex64) -> Result<()> {
    let r = z.norm();
    if r == 0.0 {
        return Err(Error::Domain("second moment formula requires z != 0"));
    }
    if r >= 1.0 {
        return Err(Error::Domain("second moment formula requires |z| < 1"));
    }
    Ok(())
}

/// log of E|f_{n,t}(z)|^2, exact at finite n.
///
/// For t > 0 this is the Hermite-kernel sum
/// (n! |z|^{2n} / n^n) |e^{-n t z^2}| sum_k t^k/k! |He_k(sqrt(n/t) g_t(z))|^2
/// accumulated by log-sum-exp; at t = 0 the degenerate limit of the
/// summand gives (n!/n^n) sum_k n^k |z|^{2(n-k)} / k!.
pub fn exact_second_moment(n: usize, t: f64, z: Complex64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("exact_second_moment requires n >= 1"));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain("exact_second_moment requires t in [0, 1]"));
    }
    check_z(z)?;
    let log_zsq = 2.0 * Float::ln(z.norm());
    let mut log_nfact = 0.0;
    for m in 1..=n {
        log_nfact += Float::ln(m as f64);
    }

    let mut terms: Vec<f64> = Vec::with_capacity(n + 1);
    if t == 0.0 {
        // log of n^k |z|^{2(n-k)} / k!
        let mut log_kfact = 0.0;
        let log_n = Float::ln(n as f64);
        for k in 0..=n {
            if k > 0 {
                log_kfact += Float::ln(k as f64);
            }
            terms.push(k as f64 * log_n + (n - k) as f64 * log_zsq - log_kfact);
        }
        let lse = log_sum_exp(&terms);
        return Ok(log_nfact - n as f64 * Float::ln(n as f64) + lse);
    }

    let w = Float::sqrt(n as f64 / t) * g_map(t, z)?;
    let seq = hermite_scaled(n, w);
    let log_t = Float::ln(t);
    let mut log_kfact = 0.0;
    for (k, he) in seq.values.iter().enumerate() {
        if k > 0 {
            log_kfact += Float::ln(k as f64);
        }
        let lm = he.log_modulus();
        if lm.is_finite() {
            terms.push(k as f64 * log_t - log_kfact + 2.0 * lm);
        }
    }
    if terms.is_empty() {
        return Err(Error::Domain("all Hermite terms vanished"));
    }
    let lse = log_sum_exp(&terms);
    Ok(log_nfact + n as f64 * log_zsq - n as f64 * Float::ln(n as f64)
        - n as f64 * t * (z * z).re
        + lse)
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = terms.iter().map(|&l| Float::exp(l - max)).sum();
    max + Float::ln(sum)
}

/// Saddle value of the kernel exponent at u = g_t(z):
/// 1 + t Re(z^2) - log|z|^2, expressed as a function of u.
fn saddle_value(t: f64, u: Complex64) -> Result<f64> {
    let z = g_inverse(t, u)?;
    Ok(1.0 + t * (z * z).re - 2.0 * Float::ln(z.norm()))
}

/// log of the n -> infinity limit of E|f_{n,t}(z)|^2 for t in (0, 1].
///
/// Assembled from the kernel's saddle-point form: a curvature and volume
/// prefactor 1/(sqrt(F''(t|z|^2)) sqrt(1 - t^2 |z|^4) t (1 - |z|^2)) with
/// F''(s) = (1/t)(-2 a^2/(1+s)^3 + 2 b^2/(1-s)^3) + 1/s^2 at u = a + ib,
/// times the shift correction exp(G(u) - <grad G(u), u>/2) where G is the
/// saddle value above; the gradient is taken by central differences.
pub fn asymptotic_second_moment(t: f64, z: Complex64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::Unsupported(
            "asymptotic_second_moment requires t in (0, 1]; use exact_second_moment at large n for t = 0",
        ));
    }
    check_z(z)?;
    let u = g_map(t, z)?;
    let a = u.re;
    let b = u.im;
    let zsq = z.norm_sqr();
    let s = t * zsq;
    let fpp = (1.0 / t) * (-2.0 * a * a / Float::powi(1.0 + s, 3) + 2.0 * b * b / Float::powi(1.0 - s, 3))
        + 1.0 / (s * s);
    if fpp <= 0.0 {
        return Err(Error::Domain("saddle curvature is not positive"));
    }
    let base = -0.5 * Float::ln(fpp) - 0.5 * Float::ln(1.0 - t * t * zsq * zsq) - Float::ln(t)
        - Float::ln(1.0 - zsq);

    let h = 1e-5;
    let ga = (saddle_value(t, u + Complex64::new(h, 0.0))?
        - saddle_value(t, u - Complex64::new(h, 0.0))?)
        / (2.0 * h);
    let gb = (saddle_value(t, u + Complex64::new(0.0, h))?
        - saddle_value(t, u - Complex64::new(0.0, h))?)
        / (2.0 * h);
    let correction = saddle_value(t, u)? - 0.5 * (ga * a + gb * b);
    Ok(base + correction)
}
