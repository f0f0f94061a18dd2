//! Closed-form combinatorics of the limiting fluctuations: Catalan
//! numbers, non-crossing annular pairing counts, the limiting covariance
//! functionals, the tree-contribution constant, and the h coefficients.
//!
//! Pure counting is exact integer arithmetic; only the final t-weighted
//! values are floating point.

use crate::chebmod::{binomial_u128, cheb_coeffs_closed, PolyReal};
use crate::error::{Error, Result};
use crate::wickoracle::trace_power_polynomial;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, One, ToPrimitive, Zero};

/// Largest k supported by the h-coefficient oracle (the 2k-edge partition
/// enumeration grows like the Bell numbers).
pub const H_COEFF_BUDGET: usize = 6;

/// m-th Catalan number, exact.
pub fn catalan(m: usize) -> u128 {
    binomial_u128(2 * m as u64, m as u64) / (m as u128 + 1)
}

/// Falling factorial n(n-1)...(n-m+1); zero when m > n.
pub fn falling(n: u64, m: u64) -> u128 {
    if m > n {
        return 0;
    }
    (0..m).map(|i| (n - i) as u128).product()
}

/// Number of non-crossing pairings of the (p, q) annulus with l through
/// strings: l * C(p, (p-l)/2) * C(q, (q-l)/2) when p-l and q-l are even
/// and nonnegative, zero otherwise. Requires l >= 1.
pub fn nc_pairings(l: usize, p: usize, q: usize) -> u128 {
    if l == 0 || l > p || l > q || (p - l) % 2 != 0 || (q - l) % 2 != 0 {
        return 0;
    }
    l as u128
        * binomial_u128(p as u64, ((p - l) / 2) as u64)
        * binomial_u128(q as u64, ((q - l) / 2) as u64)
}

/// Limiting covariance of unconjugated monomial traces. Zero for odd
/// p + q; otherwise every contributing pairing carries weight t^{(p+q)/2}.
pub fn phi_monomial(t: f64, p: usize, q: usize) -> f64 {
    if p == 0 || q == 0 || (p + q) % 2 == 1 {
        return 0.0;
    }
    let weight = Float::powi(t, ((p + q) / 2) as i32);
    let mut total = 0.0;
    let mut l = if p % 2 == 0 { 2 } else { 1 };
    while l <= p.min(q) {
        total += nc_pairings(l, p, q) as f64 * weight;
        l += 2;
    }
    total
}

/// Limiting covariance of a monomial trace against a conjugated one; a
/// pairing with j through strings carries weight t^{(p+q)/2 - j}.
pub fn phi_c_monomial(t: f64, p: usize, q: usize) -> f64 {
    if p == 0 || q == 0 || (p + q) % 2 == 1 {
        return 0.0;
    }
    let half = (p + q) / 2;
    let mut total = 0.0;
    let mut l = if p % 2 == 0 { 2 } else { 1 };
    while l <= p.min(q) {
        let count = nc_pairings(l, p, q);
        if count > 0 {
            total += count as f64 * Float::powi(t, (half - l) as i32);
        }
        l += 2;
    }
    total
}

/// Bilinear extension over monomials; constant terms contribute nothing
/// (traces of the identity are deterministic).
pub fn phi_poly(t: f64, p: &PolyReal, q: &PolyReal) -> f64 {
    bilinear(p, q, |dp, dq| phi_monomial(t, dp, dq))
}

pub fn phi_c_poly(t: f64, p: &PolyReal, q: &PolyReal) -> f64 {
    bilinear(p, q, |dp, dq| phi_c_monomial(t, dp, dq))
}

fn bilinear(p: &PolyReal, q: &PolyReal, kernel: impl Fn(usize, usize) -> f64) -> f64 {
    let mut total = 0.0;
    for (dp, &cp) in p.coeffs.iter().enumerate().skip(1) {
        if cp == 0.0 {
            continue;
        }
        for (dq, &cq) in q.coeffs.iter().enumerate().skip(1) {
            if cq == 0.0 {
                continue;
            }
            total += cp * cq * kernel(dp, dq);
        }
    }
    total
}

/// Tabulated covariance functionals for monomials up to a degree bound.
#[derive(Debug, Clone)]
pub struct CovTable {
    pub t: f64,
    pub max_degree: usize,
    phi: Vec<f64>,
    phi_c: Vec<f64>,
}

impl CovTable {
    pub fn build(t: f64, max_degree: usize) -> Self {
        let d = max_degree;
        let mut phi = vec![0.0; d * d];
        let mut phi_c = vec![0.0; d * d];
        for p in 1..=d {
            for q in 1..=d {
                phi[(p - 1) * d + (q - 1)] = phi_monomial(t, p, q);
                phi_c[(p - 1) * d + (q - 1)] = phi_c_monomial(t, p, q);
            }
        }
        CovTable { t, max_degree, phi, phi_c }
    }

    pub fn phi(&self, p: usize, q: usize) -> f64 {
        self.phi[(p - 1) * self.max_degree + (q - 1)]
    }

    pub fn phi_c(&self, p: usize, q: usize) -> f64 {
        self.phi_c[(p - 1) * self.max_degree + (q - 1)]
    }
}

/// Tree-level constant: -1/2 sum_q alpha^{(2m,t)}_{2m-2q} t^{m-q} C_{m-q}
/// (m-q+1)(m-q); equals -m t^m.
pub fn l_tree(m: usize, t: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("l_tree requires m >= 1"));
    }
    let alpha = cheb_coeffs_closed(2 * m, t)?;
    let mut total = 0.0;
    for q in 0..=m {
        let deg = 2 * m - 2 * q;
        let c = catalan(m - q) as f64;
        total += alpha.coeffs[deg]
            * Float::powi(t, (m - q) as i32)
            * c
            * ((m - q + 1) * (m - q)) as f64;
    }
    Ok(-0.5 * total)
}

/// The t-free integer core of the tree constant: l_tree(m, t) = t^m times
/// this rational, which must equal -m. Exact arithmetic throughout.
pub fn l_tree_bracket_exact(m: usize) -> BigRational {
    let mut total = BigRational::zero();
    for q in 0..=m {
        // alpha coefficient of X^{2m-2q} at t = 1 carries sign (-1)^q and
        // integer magnitude 2m/(2m-q) C(2m-q, q).
        let k = 2 * m;
        let mag = BigRational::new(
            BigInt::from(k as u128 * binomial_u128((k - q) as u64, q as u64)),
            BigInt::from((k - q) as u64),
        );
        let sign = if q % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        let weight = BigInt::from(catalan(m - q) * ((m - q + 1) * (m - q)) as u128);
        total += BigRational::from(sign * weight) * mag;
    }
    total * BigRational::new(BigInt::from(-1), BigInt::from(2))
}

/// Exact f64 -> rational conversion (f64 values are binary rationals).
fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or(Error::Domain("parameter is not finite"))
}

/// alpha^{(k,t)}_{k-2j} as an exact rational in an exact rational t.
fn alpha_rational(k: usize, j: usize, t: &BigRational) -> BigRational {
    let mag = BigRational::new(
        BigInt::from(k as u128 * binomial_u128((k - j) as u64, j as u64)),
        BigInt::from((k - j) as u64),
    );
    let mut tj = BigRational::one();
    for _ in 0..j {
        tj *= -t.clone();
    }
    tj * mag
}

/// E[U_{2k,t}] at finite n as an exact rational: the Chebyshev expansion
/// of the trace statistic evaluated through the Wick-oracle trace
/// polynomials, plus the constant term's Tr I = n and the nt correction
/// at k = 1.
fn expectation_u2k_exact(k: usize, t: &BigRational, n: u64) -> BigRational {
    let mut total = BigRational::zero();
    for q in 0..=k {
        let deg = 2 * k - 2 * q;
        let alpha = alpha_rational(2 * k, q, t);
        if deg == 0 {
            // Tr[alpha_0 I] = alpha_0 * n (the n^{q-k} scale is 1 here).
            total += alpha * BigRational::from(BigInt::from(n));
            continue;
        }
        let poly = trace_power_polynomial(deg);
        let mut etr = BigRational::zero();
        for (m, &c) in poly.iter().enumerate() {
            if c != 0 {
                etr += BigRational::from(BigInt::from(c) * BigInt::from(falling(n, m as u64)));
            }
        }
        let mut t_half = BigRational::one();
        for _ in 0..deg / 2 {
            t_half *= t.clone();
        }
        // n^{q-k} with q - k <= 0.
        let scale = BigRational::new(BigInt::one(), BigInt::from(n).pow((k - q) as u32));
        total += alpha * scale * t_half * etr;
    }
    if k == 1 {
        total += BigRational::from(BigInt::from(n)) * t.clone();
    }
    total
}

/// E[U_{2k,t}] at matrix order n, computed through the exact rational
/// path and returned as f64 (exact zeros stay exactly 0.0).
pub fn expectation_u_even(k: usize, t: f64, n: u64) -> Result<f64> {
    if k == 0 || n == 0 {
        return Err(Error::Domain("expectation_u_even requires k, n >= 1"));
    }
    if k > H_COEFF_BUDGET {
        return Err(Error::Unsupported("expectation_u_even enumeration budget is k <= 6"));
    }
    let t_rat = rational_from_f64(t)?;
    expectation_u2k_exact(k, &t_rat, n)
        .to_f64()
        .ok_or(Error::Domain("expectation overflowed f64"))
}

/// h coefficient of the limit: the constant term of E[U_{2k,t}] as a
/// Laurent polynomial in n, plus k t^k. Evaluated exactly at k+3 matrix
/// orders and interpolated; the two surplus orders verify the Laurent
/// degree structure.
pub fn h_coeff(k: usize, t: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("h_coeff requires k >= 1"));
    }
    if k > H_COEFF_BUDGET {
        return Err(Error::Unsupported("h_coeff enumeration budget is k <= 6"));
    }
    let t_rat = rational_from_f64(t)?;
    // P(n) = e(n) * n^{k-1} is a polynomial of degree <= k.
    let ns: Vec<u64> = (3..3 + (k as u64) + 3).collect();
    let xs: Vec<BigRational> =
        ns.iter().map(|&n| BigRational::from(BigInt::from(n))).collect();
    let ys: Vec<BigRational> = ns
        .iter()
        .map(|&n| {
            expectation_u2k_exact(k, &t_rat, n)
                * BigRational::from(BigInt::from(n).pow((k - 1) as u32))
        })
        .collect();
    // Newton divided differences.
    let mut coef = ys.clone();
    for j in 1..xs.len() {
        for i in (j..xs.len()).rev() {
            let num = coef[i].clone() - coef[i - 1].clone();
            let den = xs[i].clone() - xs[i - j].clone();
            coef[i] = num / den;
        }
    }
    // Orders above k must vanish: e(n) has no powers above n^1.
    for c in coef.iter().skip(k + 1) {
        if !c.is_zero() {
            return Err(Error::Domain("trace expectation violates its Laurent structure"));
        }
    }
    // Expand the Newton form; we need the coefficient of n^{k-1}.
    let mut poly = vec![BigRational::zero(); xs.len() + 1];
    let mut basis = vec![BigRational::one()];
    for i in 0..xs.len() {
        for (d, b) in basis.iter().enumerate() {
            poly[d] += coef[i].clone() * b.clone();
        }
        let mut next = vec![BigRational::zero(); basis.len() + 1];
        for (d, b) in basis.iter().enumerate() {
            next[d + 1] += b.clone();
            next[d] -= b.clone() * xs[i].clone();
        }
        basis = next;
    }
    let constant_of_e = poly[k - 1].clone();
    let mut tk = BigRational::one();
    for _ in 0..k {
        tk *= t_rat.clone();
    }
    let h = constant_of_e + BigRational::from(BigInt::from(k as u64)) * tk;
    h.to_f64().ok_or(Error::Domain("h coefficient overflowed f64"))
}

/// Finite sum from the even-index diagonalization: vanishes for
/// 1 <= l < k and equals 1/(2l) at l = k. Exact rationals.
pub fn binomial_sum_even(k: usize, l: usize) -> BigRational {
    let mut total = BigRational::zero();
    if l > k {
        return total;
    }
    for r in 0..=(k - l) {
        let b1 = binomial_u128(2 * (k - r) as u64, (k - r - l) as u64);
        let b2 = binomial_u128((2 * k - r) as u64, r as u64);
        let sign = if r % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        total += BigRational::new(
            sign * BigInt::from(b1) * BigInt::from(b2),
            BigInt::from((2 * k - r) as u64),
        );
    }
    total
}

/// Odd-index analogue: vanishes for 1 <= l <= k and equals 1/(2k+1) at
/// l = k+1 (where the through-string count matches the degree 2k+1).
pub fn binomial_sum_odd(k: usize, l: usize) -> BigRational {
    let mut total = BigRational::zero();
    if l > k + 1 {
        return total;
    }
    for r in 0..=(k + 1 - l) {
        let top = 2 * (k - r) + 1;
        let pick = k + 1 - r - l;
        let b1 = binomial_u128(top as u64, pick as u64);
        let b2 = binomial_u128((2 * k + 1 - r) as u64, r as u64);
        let sign = if r % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        total += BigRational::new(
            sign * BigInt::from(b1) * BigInt::from(b2),
            BigInt::from((2 * k + 1 - r) as u64),
        );
    }
    total
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = Float::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if Float::abs(dx) < 1e-15 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * d * d);
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 1..n {
        let p2 = ((2 * j + 1) as f64 * x * p1 - j as f64 * p0) / (j + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// (4/pi) * integral over [0, pi/2] of P_{2m}^{(t)}(2 sqrt(t) cos theta)
/// sin^2 theta; equals -t when m = 1 and 0 for larger m.
pub fn s_prime_quadrature(m: usize, t: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("s_prime_quadrature requires m >= 1"));
    }
    let poly = cheb_coeffs_closed(2 * m, t)?;
    let (nodes, weights) = gauss_legendre(64);
    let half_pi = core::f64::consts::FRAC_PI_2;
    let scale = Float::sqrt(t) * 2.0;
    let mut total = 0.0;
    for (&x, &w) in nodes.iter().zip(weights.iter()) {
        let theta = half_pi * 0.5 * (x + 1.0);
        let arg = scale * Float::cos(theta);
        let val = crate::chebmod::eval_poly(&poly, num_complex::Complex64::new(arg, 0.0)).re;
        let s = Float::sin(theta);
        total += w * val * s * s;
    }
    // Jacobian of theta = (pi/4)(x+1), then the 4/pi prefactor.
    Ok(total * (half_pi * 0.5) * 4.0 / core::f64::consts::PI)
}
