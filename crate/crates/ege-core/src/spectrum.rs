//! Ellipse geometry of the limiting support, outlier counting, and
//! scatter export of scaled eigenvalues.

use crate::clinalg::Spectrum;
use crate::error::{Error, Result};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;
use num_complex::Complex64;
use num_traits::Float;

/// The limiting ellipse with semi-axes (1+t) and (1-t), dilated by an
/// inflation factor >= 1 on both axes. At t = 1 the ellipse degenerates
/// to the segment [-2, 2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseSpec {
    pub t: f64,
    pub inflation: f64,
}

impl EllipseSpec {
    pub fn new(t: f64, inflation: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain("ellipse parameter t must lie in [0, 1]"));
        }
        if !(inflation >= 1.0) {
            return Err(Error::Domain("ellipse inflation must be >= 1"));
        }
        Ok(EllipseSpec { t, inflation })
    }
}

/// Membership test. The degenerate t = 1 case uses a thin horizontal band
/// of half-height 2(c-1) + 1e-9 so that a measure-zero segment still has
/// a floating-point interior and inflation enlarges it.
pub fn ellipse_contains(e: &EllipseSpec, u: Complex64) -> bool {
    let c = e.inflation;
    if e.t == 1.0 {
        let band = 2.0 * (c - 1.0) + 1e-9;
        return Float::abs(u.im) <= band && Float::abs(u.re) <= 2.0 * c;
    }
    let ax = (1.0 + e.t) * c;
    let ay = (1.0 - e.t) * c;
    let x = u.re / ax;
    let y = u.im / ay;
    x * x + y * y <= 1.0
}

/// Number of eigenvalues with lambda/sqrt(n) outside the inflated
/// ellipse. Requires a converged spectrum.
pub fn outlier_count(s: &Spectrum, n: usize, e: &EllipseSpec) -> Result<usize> {
    if !s.converged {
        return Err(Error::NotConverged);
    }
    let inv_sqrt_n = 1.0 / Float::sqrt(n as f64);
    Ok(s.eigenvalues.iter().filter(|&&l| !ellipse_contains(e, l * inv_sqrt_n)).count())
}

/// CSV rows of the scaled eigenvalues: header "re,im" then one row per
/// eigenvalue at 17 significant digits.
pub fn export_scatter(s: &Spectrum, n: usize) -> String {
    let inv_sqrt_n = 1.0 / Float::sqrt(n as f64);
    let mut out = String::from("re,im\n");
    for l in &s.eigenvalues {
        let v = l * inv_sqrt_n;
        let _ = writeln!(out, "{:.16e},{:.16e}", v.re, v.im);
    }
    out
}

/// Radius of the disk whose boundary maps onto the long-axis endpoint of
/// the inflated ellipse under z -> 1/z + t z: the smaller root of
/// t r^2 - c (1 + t) r + 1 = 0. Pairs the disk-grid zero detector with
/// the eigenvalue detector.
pub fn preimage_disk_radius(t: f64, inflation: f64) -> f64 {
    let c = inflation;
    let target = c * (1.0 + t);
    if t == 0.0 {
        return 1.0 / target;
    }
    let disc = Float::sqrt(target * target - 4.0 * t);
    (target - disc) / (2.0 * t)
}

/// Eigenvalue positions (as a spectrum) for planted-value tests.
pub fn synthetic_spectrum(values: Vec<Complex64>) -> Spectrum {
    Spectrum { eigenvalues: values, converged: true }
}
