//! Pointwise and grid evaluation of the normalised characteristic
//! polynomial f_{n,t}(z) = det(1 + t z^2 - z A/sqrt(n)) exp(-n t z^2 / 2),
//! the exterior conformal map, and phase-portrait rendering.

use crate::clinalg::{
    hessenberg, hessenberg_char_logdet, log_det, lu_factor, CMatrix, ScaledComplex,
};
use crate::error::{Error, Result};
use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

/// The map z -> 1/z + t z sending the punctured unit disk to the exterior
/// of the limiting ellipse.
pub fn g_map(t: f64, z: Complex64) -> Result<Complex64> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Domain("g_map is undefined at z = 0"));
    }
    Ok(z.inv() + t * z)
}

/// Inverse of the exterior map: the root of t z^2 - u z + 1 = 0 of
/// smaller modulus (the two roots have product 1/t >= 1).
pub fn g_inverse(t: f64, u: Complex64) -> Result<Complex64> {
    if u.re == 0.0 && u.im == 0.0 {
        if t == 0.0 {
            return Err(Error::Domain("g_inverse(0, .) is undefined at u = 0"));
        }
        // Roots +- i/sqrt(t); both have the same modulus, pick one.
        return Ok(Complex64::new(0.0, Float::sqrt(1.0 / t)));
    }
    if t == 0.0 {
        return Ok(u.inv());
    }
    let disc = (u * u - 4.0 * t).sqrt();
    // Combine u with the sign of disc that avoids cancellation; the small
    // root is then 2/q by the product of roots.
    let q = if (u.conj() * disc).re >= 0.0 { u + disc } else { u - disc };
    if q.norm() == 0.0 {
        return Ok(u / (2.0 * t));
    }
    let small = 2.0 / q;
    Ok(small)
}

/// Square evaluation window: pixel centers of a resolution^2 grid over
/// [center - half_width, center + half_width]^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub center: Complex64,
    pub half_width: f64,
    pub resolution: usize,
}

impl Grid {
    pub fn new(center: Complex64, half_width: f64, resolution: usize) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::Domain("grid resolution must be >= 2"));
        }
        if !(half_width > 0.0) {
            return Err(Error::Domain("grid half_width must be positive"));
        }
        Ok(Grid { center, half_width, resolution })
    }

    /// Pixel center at (row, col); row 0 carries the largest imaginary
    /// part.
    pub fn pixel(&self, row: usize, col: usize) -> Complex64 {
        let step = 2.0 * self.half_width / self.resolution as f64;
        let re = self.center.re - self.half_width + (col as f64 + 0.5) * step;
        let im = self.center.im + self.half_width - (row as f64 + 0.5) * step;
        Complex64::new(re, im)
    }
}

/// f_{n,t}(z) as a scaled complex value; the exact zero is a legal result
/// at points mapped from eigenvalues.
pub fn eval_f(a: &CMatrix, t: f64, z: Complex64) -> Result<ScaledComplex> {
    let n = a.order();
    if n == 0 {
        return Err(Error::Domain("eval_f requires order >= 1"));
    }
    let shift = Complex64::new(1.0, 0.0) + t * z * z;
    let scale = -z / Float::sqrt(n as f64);
    let m = CMatrix::from_fn(n, |i, j| {
        scale * a.get(i, j) + if i == j { shift } else { Complex64::new(0.0, 0.0) }
    });
    let det = log_det(&lu_factor(&m)?);
    let zz = z * z;
    let half_nt = 0.5 * n as f64 * t;
    Ok(det.shift_logscale(-half_nt * zz.re).rotate(-half_nt * zz.im))
}

/// eval_f at every pixel center, row-major.
pub fn eval_grid(a: &CMatrix, t: f64, grid: &Grid) -> Result<Vec<ScaledComplex>> {
    let res = grid.resolution;
    let mut out = Vec::with_capacity(res * res);
    for row in 0..res {
        for col in 0..res {
            out.push(eval_f(a, t, grid.pixel(row, col))?);
        }
    }
    Ok(out)
}

/// Raw RGB raster, row-major, top row first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortraitRaster {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl PortraitRaster {
    /// Binary PPM (P6) encoding; comment lines are embedded verbatim
    /// after the magic number. Bit-exact for fixed inputs.
    pub fn to_ppm_bytes(&self, comments: &[&str]) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.pixels.len() + 64);
        out.extend_from_slice(b"P6\n");
        for c in comments {
            out.extend_from_slice(b"# ");
            out.extend_from_slice(c.as_bytes());
            out.push(b'\n');
        }
        out.extend_from_slice(alloc::format!("{} {}\n255\n", self.width, self.height).as_bytes());
        out.extend_from_slice(&self.pixels);
        out
    }
}

/// Deterministic domain coloring: hue from the argument, value from the
/// fractional part of log2 of the modulus, black at exact zeros.
pub fn render_portrait(values: &[ScaledComplex], width: usize, height: usize) -> Result<PortraitRaster> {
    if values.len() != width * height {
        return Err(Error::DimensionMismatch { expected: width * height, got: values.len() });
    }
    let mut pixels = Vec::with_capacity(3 * values.len());
    for v in values {
        let (r, g, b) = color_of(v);
        pixels.push(r);
        pixels.push(g);
        pixels.push(b);
    }
    Ok(PortraitRaster { width, height, pixels })
}

fn color_of(v: &ScaledComplex) -> (u8, u8, u8) {
    if v.is_zero() {
        return (0, 0, 0);
    }
    let hue = (v.arg() + core::f64::consts::PI) / (2.0 * core::f64::consts::PI);
    let log2m = v.log2_modulus();
    let frac = log2m - Float::floor(log2m);
    let val = 0.55 + 0.45 * frac;
    hsv_to_rgb(hue, 0.9, val)
}

/// Standard sexagesimal-sector HSV -> RGB, channels rounded to bytes.
fn hsv_to_rgb(h: f64, s: f64, v: f64) -> (u8, u8, u8) {
    let mut hh = h * 6.0;
    if hh >= 6.0 {
        hh = 0.0;
    }
    let sector = Float::floor(hh) as i32;
    let f = hh - sector as f64;
    let p = v * (1.0 - s);
    let q = v * (1.0 - s * f);
    let t = v * (1.0 - s * (1.0 - f));
    let (r, g, b) = match sector {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    };
    (to_byte(r), to_byte(g), to_byte(b))
}

fn to_byte(x: f64) -> u8 {
    let v = Float::round(255.0 * x);
    if v <= 0.0 {
        0
    } else if v >= 255.0 {
        255
    } else {
        v as u8
    }
}

/// Minimum of log|f_{n,t}| over the grid points of the closed disk of
/// radius r (a deterministic, lower-bound-free proxy for the infimum).
///
/// The matrix is reduced to Hessenberg form once; each grid point then
/// costs one O(n^2) determinant sweep. This shares only the z-independent
/// similarity transform, never a z-dependent factorization.
pub fn min_modulus_on_disk(a: &CMatrix, t: f64, r: f64, resolution: usize) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain("min_modulus_on_disk requires 0 < r < 1"));
    }
    if resolution < 2 {
        return Err(Error::Domain("min_modulus_on_disk requires resolution >= 2"));
    }
    let n = a.order();
    if n == 0 {
        return Err(Error::Domain("min_modulus_on_disk requires order >= 1"));
    }
    let h = hessenberg(a);
    let inv_sqrt_n = 1.0 / Float::sqrt(n as f64);
    let step = 2.0 * r / (resolution as f64 - 1.0);
    let mut min_log = f64::INFINITY;
    for i in 0..resolution {
        let y = -r + step * i as f64;
        for j in 0..resolution {
            let x = -r + step * j as f64;
            if x * x + y * y > r * r {
                continue;
            }
            let z = Complex64::new(x, y);
            let shift = Complex64::new(1.0, 0.0) + t * z * z;
            let det = hessenberg_char_logdet(&h, shift, -z * inv_sqrt_n);
            let log_f = det.log_modulus() - 0.5 * n as f64 * t * (z * z).re;
            if log_f < min_log {
                min_log = log_f;
            }
        }
    }
    Ok(min_log)
}
