//! Oracles for the Hermite module: exact-coefficient evaluation, the
//! closed n = 1 form, Monte Carlo agreement, stabilization in n, the
//! saddle-point limit, and the orthogonality of the scaled polynomials.

use ege_core::charpoly::eval_f;
use ege_core::hermite::{asymptotic_second_moment, exact_second_moment, hermite_scaled};
use ege_core::momentcomb::gauss_legendre;
use ege_core::sampling::{derive_stream, sample_ege, EgeParams};
use num_complex::Complex64;

/// Monic Hermite coefficients from the recurrence in exact i128
/// arithmetic: He_{m+1} = x He_m - m He_{m-1}.
fn hermite_coeffs_exact(k: usize) -> Vec<i128> {
    let mut prev: Vec<i128> = vec![1];
    if k == 0 {
        return prev;
    }
    let mut curr: Vec<i128> = vec![0, 1];
    for m in 1..k {
        let mut next = vec![0i128; curr.len() + 1];
        for (d, &c) in curr.iter().enumerate() {
            next[d + 1] += c;
        }
        for (d, &c) in prev.iter().enumerate() {
            next[d] -= m as i128 * c;
        }
        prev = curr;
        curr = next;
    }
    curr
}

#[test]
fn hermite_at_fifty_matches_exact_coefficients() {
    let coeffs = hermite_coeffs_exact(10);
    let mut exact: i128 = 0;
    let mut pow: i128 = 1;
    for &c in &coeffs {
        exact += c * pow;
        pow *= 50;
    }
    let seq = hermite_scaled(10, Complex64::new(50.0, 0.0));
    let got = seq.values[10].value().re;
    assert!(
        (got - exact as f64).abs() < 1e-10 * (exact as f64).abs(),
        "{got} vs {exact}"
    );
}

/// Rearranged recurrence He_{m+1} + m He_{m-1} = w He_m, exercising the
/// scaled add/mul combination independently of the construction order.
#[test]
fn recurrence_holds_step_by_step_in_scaled_arithmetic() {
    let w = Complex64::new(7.0, -3.0);
    let seq = hermite_scaled(200, w);
    for m in 1..200usize {
        let lhs = seq.values[m + 1].add(&seq.values[m - 1].mul_real(m as f64));
        let rhs = seq.values[m].mul_complex(w);
        assert!(
            (lhs.log_modulus() - rhs.log_modulus()).abs() < 1e-10,
            "modulus drift at step m={m}"
        );
        let mut dphase = lhs.arg() - rhs.arg();
        while dphase > std::f64::consts::PI {
            dphase -= 2.0 * std::f64::consts::PI;
        }
        while dphase < -std::f64::consts::PI {
            dphase += 2.0 * std::f64::consts::PI;
        }
        assert!(dphase.abs() < 1e-10, "phase drift at step m={m}");
    }
}

/// The n=1 reduction: both the Hermite sum and the expanded closed form
/// agree to 1e-12.
#[test]
fn n_one_closed_form_over_a_grid() {
    for ti in 1..=10 {
        let t = ti as f64 / 10.0;
        for zi in 0..10 {
            let angle = zi as f64;
            let z = Complex64::from_polar(0.4, angle);
            let lhs = exact_second_moment(1, t, z).unwrap();
            let zz = z * z;
            let rhs = ((Complex64::new(1.0, 0.0) + t * zz).norm_sqr() + z.norm_sqr()).ln()
                - t * zz.re;
            assert!((lhs - rhs).abs() < 1e-12, "t={t} z={z}");
        }
    }
}

/// Monte Carlo oracle at moderate size: the exact formula must sit inside
/// three standard errors of the sampled mean of |f|^2.
#[test]
fn exact_formula_matches_monte_carlo() {
    let n = 50;
    let t = 0.5;
    let z = Complex64::new(0.3, 0.3);
    let p = EgeParams::new(n, t, 2024).unwrap();
    let reps = 4000usize;
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for i in 0..reps {
        let mut s = derive_stream(p.seed, i as u64);
        let a = sample_ege(&mut s, &p).unwrap();
        let v = eval_f(&a, t, z).unwrap();
        let m = (2.0 * v.log_modulus()).exp();
        sum += m;
        sumsq += m * m;
    }
    let mean = sum / reps as f64;
    let var = (sumsq / reps as f64 - mean * mean).max(0.0);
    let se = (var / reps as f64).sqrt();
    let exact = exact_second_moment(n, t, z).unwrap().exp();
    assert!(
        (mean - exact).abs() < 3.0 * se,
        "MC {mean} +- {se} vs exact {exact}"
    );
}

#[test]
fn second_moment_stabilizes_in_n() {
    let t = 0.5;
    let points = [
        Complex64::new(0.3, 0.0),
        Complex64::new(0.0, 0.45),
        Complex64::new(0.3, 0.3),
        Complex64::new(-0.5, 0.2),
        Complex64::new(0.6, 0.0),
    ];
    for z in points {
        let a = exact_second_moment(1000, t, z).unwrap().exp();
        let b = exact_second_moment(2000, t, z).unwrap().exp();
        assert!((a - b).abs() / b < 0.01, "z={z}: {a} vs {b}");
    }
}

#[test]
fn positivity_and_uniform_boundedness_on_compacts() {
    // sup over a 20x20 grid of the disk of radius 0.8, over a dyadic
    // range of n, stays below one pinned constant per t.
    for t in [0.25, 0.5, 1.0] {
        let mut overall: f64 = f64::NEG_INFINITY;
        let mut n = 10usize;
        while n <= 1280 {
            let mut sup: f64 = f64::NEG_INFINITY;
            for i in 0..20 {
                for j in 0..20 {
                    let x = -0.8 + 1.6 * (i as f64 + 0.5) / 20.0;
                    let y = -0.8 + 1.6 * (j as f64 + 0.5) / 20.0;
                    if x * x + y * y > 0.64 || (x == 0.0 && y == 0.0) {
                        continue;
                    }
                    let v = exact_second_moment(n, t, Complex64::new(x, y)).unwrap();
                    assert!(v.is_finite());
                    sup = sup.max(v);
                }
            }
            overall = overall.max(sup);
            n *= 2;
        }
        // log E|f|^2 on |z| <= 0.8 stays modest; 25 is generous headroom.
        assert!(overall < 25.0, "t={t}: sup log second moment = {overall}");
    }
}

/// The limit assembled from the saddle-point prefactor and shift
/// correction against the exact formula at n = 4000.
#[test]
fn asymptotic_matches_large_n_exact() {
    for (t, z) in [
        (0.5, Complex64::new(0.4, 0.0)),
        (0.5, Complex64::new(0.0, 0.4)),
        (1.0, Complex64::new(0.3, 0.0)),
        (0.5, Complex64::new(0.25, 0.25)),
    ] {
        let exact = exact_second_moment(4000, t, z).unwrap().exp();
        let asym = asymptotic_second_moment(t, z).unwrap().exp();
        assert!(
            (exact - asym).abs() / exact < 0.005,
            "t={t} z={z}: exact {exact} vs asym {asym}"
        );
    }
}

/// 2-D quadrature of P_j conj(P_k) w_t over a box reproduces the
/// Kronecker delta for the scaled Hermite orthogonal polynomials.
#[test]
fn scaled_hermite_orthogonality_spot_check() {
    let t = 0.5f64;
    let sqrt_t = t.sqrt();
    let coeffs: Vec<Vec<i128>> = (0..=4).map(hermite_coeffs_exact).collect();
    let eval_p = |j: usize, z: Complex64| -> Complex64 {
        // P_j(z) = sqrt(t^j / j!) He_j(z / sqrt(t))
        let arg = z / sqrt_t;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        for &c in &coeffs[j] {
            acc += c as f64 * pow;
            pow *= arg;
        }
        let fact: f64 = (1..=j).map(|m| m as f64).product();
        acc * (t.powi(j as i32) / fact).sqrt()
    };
    let weight = |z: Complex64| -> f64 {
        let norm = 1.0 / (std::f64::consts::PI * (1.0 - t * t).sqrt());
        norm * (-(z.re * z.re / (1.0 + t) + z.im * z.im / (1.0 - t))).exp()
    };
    let (nodes, weights) = gauss_legendre(96);
    let lx = 8.0 * ((1.0 + t) / 2.0f64).sqrt();
    let ly = 8.0 * ((1.0 - t) / 2.0f64).sqrt();
    for j in 0..=4usize {
        for k in 0..=4usize {
            let mut acc = Complex64::new(0.0, 0.0);
            for (&nx, &wx) in nodes.iter().zip(weights.iter()) {
                let x = lx * nx;
                for (&ny, &wy) in nodes.iter().zip(weights.iter()) {
                    let y = ly * ny;
                    let z = Complex64::new(x, y);
                    acc += wx * wy * eval_p(j, z) * eval_p(k, z).conj() * weight(z);
                }
            }
            acc *= lx * ly;
            let target = if j == k { 1.0 } else { 0.0 };
            assert!(
                (acc - Complex64::new(target, 0.0)).norm() < 1e-3,
                "j={j} k={k}: {acc}"
            );
        }
    }
}
