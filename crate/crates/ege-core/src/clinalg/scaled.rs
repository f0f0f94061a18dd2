//! Overflow-safe complex values: mantissa times exp(logscale).

use num_complex::Complex64;
use num_traits::Float;

/// Rescale whenever the mantissa modulus leaves [2^-128, 2^128).
const BAND_BITS: f64 = 128.0;
const LN_2: f64 = core::f64::consts::LN_2;

/// A complex value stored as `mantissa * exp(logscale)`.
///
/// Determinants and high-degree Hermite values overflow f64 by thousands of
/// orders of magnitude; this representation keeps the modulus in a fixed
/// band and pushes the excess into a natural-log scale. The exact zero is
/// represented as mantissa 0, logscale 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledComplex {
    mantissa: Complex64,
    logscale: f64,
}

impl ScaledComplex {
    pub const ZERO: ScaledComplex =
        ScaledComplex { mantissa: Complex64::new(0.0, 0.0), logscale: 0.0 };
    pub const ONE: ScaledComplex =
        ScaledComplex { mantissa: Complex64::new(1.0, 0.0), logscale: 0.0 };

    pub fn new(mantissa: Complex64, logscale: f64) -> Self {
        ScaledComplex { mantissa, logscale }.renormed()
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z, 0.0)
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.re == 0.0 && self.mantissa.im == 0.0
    }

    pub fn mantissa(&self) -> Complex64 {
        self.mantissa
    }

    pub fn logscale(&self) -> f64 {
        self.logscale
    }

    /// The represented value; overflows to infinity when the scale exceeds
    /// the f64 range.
    pub fn value(&self) -> Complex64 {
        self.mantissa * Float::exp(self.logscale)
    }

    /// ln of the modulus; -inf for the zero value.
    pub fn log_modulus(&self) -> f64 {
        if self.is_zero() {
            f64::neg_infinity()
        } else {
            Float::ln(self.mantissa.norm()) + self.logscale
        }
    }

    /// log2 of the modulus; -inf for the zero value.
    pub fn log2_modulus(&self) -> f64 {
        self.log_modulus() / LN_2
    }

    pub fn arg(&self) -> f64 {
        self.mantissa.arg()
    }

    fn renormed(mut self) -> Self {
        if self.mantissa.re == 0.0 && self.mantissa.im == 0.0 {
            self.logscale = 0.0;
            return self;
        }
        let bits = Float::log2(self.mantissa.norm());
        if !(-BAND_BITS..BAND_BITS).contains(&bits) {
            let shift = Float::floor(bits / BAND_BITS) * BAND_BITS;
            // Two half-shifts keep exp2 inside the finite f64 range even
            // for subnormal mantissas.
            let half = Float::exp2(-shift / 2.0);
            self.mantissa = self.mantissa * half * half;
            self.logscale += shift * LN_2;
        }
        self
    }

    pub fn mul(&self, other: &ScaledComplex) -> ScaledComplex {
        if self.is_zero() || other.is_zero() {
            return ScaledComplex::ZERO;
        }
        ScaledComplex {
            mantissa: self.mantissa * other.mantissa,
            logscale: self.logscale + other.logscale,
        }
        .renormed()
    }

    pub fn mul_complex(&self, z: Complex64) -> ScaledComplex {
        ScaledComplex { mantissa: self.mantissa * z, logscale: self.logscale }.renormed()
    }

    pub fn mul_real(&self, x: f64) -> ScaledComplex {
        self.mul_complex(Complex64::new(x, 0.0))
    }

    pub fn neg(&self) -> ScaledComplex {
        ScaledComplex { mantissa: -self.mantissa, logscale: self.logscale }
    }

    /// Sum with scale alignment; the smaller term underflows harmlessly
    /// when the scales are far apart.
    pub fn add(&self, other: &ScaledComplex) -> ScaledComplex {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let (hi, lo) = if self.logscale >= other.logscale { (self, other) } else { (other, self) };
        let mantissa = hi.mantissa + lo.mantissa * Float::exp(lo.logscale - hi.logscale);
        ScaledComplex { mantissa, logscale: hi.logscale }.renormed()
    }

    pub fn sub(&self, other: &ScaledComplex) -> ScaledComplex {
        self.add(&other.neg())
    }

    /// Shifts the value by exp(delta) without touching the mantissa.
    pub fn shift_logscale(&self, delta: f64) -> ScaledComplex {
        if self.is_zero() {
            return ScaledComplex::ZERO;
        }
        ScaledComplex { mantissa: self.mantissa, logscale: self.logscale + delta }
    }

    /// Rotates the phase by the given angle (radians).
    pub fn rotate(&self, angle: f64) -> ScaledComplex {
        self.mul_complex(Complex64::from_polar(1.0, angle))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_and_one() {
        assert!(ScaledComplex::ZERO.is_zero());
        assert_eq!(ScaledComplex::ONE.value(), Complex64::new(1.0, 0.0));
        assert_eq!(ScaledComplex::ZERO.log_modulus(), f64::NEG_INFINITY);
    }

    #[test]
    fn huge_products_do_not_overflow() {
        // (1e300)^10 = 1e3000, far past f64 range.
        let big = ScaledComplex::from_real(1e300);
        let mut acc = ScaledComplex::ONE;
        for _ in 0..10 {
            acc = acc.mul(&big);
        }
        let expected_log = 10.0 * 300.0 * core::f64::consts::LN_10;
        assert!((acc.log_modulus() - expected_log).abs() < 1e-9 * expected_log);
        assert!(acc.mantissa().norm() < 2f64.powi(128));
        assert!(acc.mantissa().norm() >= 2f64.powi(-128));
    }

    #[test]
    fn add_aligns_scales() {
        let a = ScaledComplex::new(Complex64::new(1.0, 0.0), 500.0);
        let b = ScaledComplex::new(Complex64::new(1.0, 0.0), 500.0 - core::f64::consts::LN_2);
        let s = a.add(&b);
        // 1*e^500 + 0.5*e^500 * 2 ... b = e^{500-ln2} = 0.5 e^500; sum = 1.5 e^500
        assert!((s.log_modulus() - (500.0 + 1.5f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn add_with_distant_scales_keeps_dominant_term() {
        let a = ScaledComplex::new(Complex64::new(2.0, 1.0), 0.0);
        let b = ScaledComplex::new(Complex64::new(5.0, -3.0), -2000.0);
        let s = a.add(&b);
        assert_eq!(s.value(), a.value());
    }

    #[test]
    fn tiny_mantissa_renormalizes() {
        // Subnormal input: representation precision is ~1e-4 relative.
        let v = ScaledComplex::new(Complex64::new(1e-320, 0.0), 0.0);
        assert!(v.mantissa().norm() >= 2f64.powi(-128));
        assert!((v.log_modulus() - 1e-320f64.ln()).abs() < 1e-3);
    }
}
