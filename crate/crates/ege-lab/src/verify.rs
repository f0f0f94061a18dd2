//! The verification suite: every acceptance criterion as a runnable
//! check with its tolerances pinned in code. `run_quick` covers the exact
//! identity checks; `run_full` runs everything, Monte Carlo included.

use ege_core::charpoly::{eval_f, min_modulus_on_disk};
use ege_core::chebmod::{cheb_coeffs_closed, cheb_poly};
use ege_core::clinalg::eigenvalues_default;
use ege_core::gaflimit::{sample_limit_function, GafParams, HSeries};
use ege_core::hermite::{asymptotic_second_moment, exact_second_moment};
use ege_core::momentcomb::{
    binomial_sum_even, binomial_sum_odd, catalan, expectation_u_even, falling, h_coeff,
    l_tree, l_tree_bracket_exact, phi_c_monomial, phi_c_poly, phi_monomial, phi_poly,
    s_prime_quadrature,
};
use ege_core::sampling::{derive_stream, sample_ege, EgeParams};
use ege_core::spectrum::{outlier_count, preimage_disk_radius, EllipseSpec};
use ege_core::tracestats::{aggregate_moments, compute_sample};
use ege_core::wickoracle::{
    count_class, exact_product_covariance, exact_trace_expectation, wick_pair_expectation,
    DirectedMultigraph, GraphKind,
};
use ege_core::Error;
use num_complex::Complex64;
use rayon::prelude::*;
use std::fmt::Write as _;
use std::time::Instant;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    /// Criterion 8 is statistically unattainable at its pinned constants
    /// (see the project notes); it runs faithfully and reports honestly,
    /// but a failure is the documented expectation.
    pub expected_fail: bool,
    pub details: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let status = if self.passed {
            "PASS"
        } else if self.expected_fail {
            "FAIL (expected; see notes)"
        } else {
            "FAIL"
        };
        format!(
            "criterion {:2} [{}] {} — {} ({:.1}s)",
            self.id, self.name, status, self.details, self.seconds
        )
    }
}

fn timed(
    id: usize,
    name: &'static str,
    expected_fail: bool,
    f: impl FnOnce() -> (bool, String),
) -> CriterionResult {
    let start = Instant::now();
    let (passed, details) = f();
    CriterionResult { id, name, passed, expected_fail, details, seconds: start.elapsed().as_secs_f64() }
}

/// The exact-identity tier: runs in seconds.
pub fn run_quick() -> Vec<CriterionResult> {
    vec![c2(), c5(), c6()]
}

/// Every criterion, Monte Carlo suites included.
pub fn run_full() -> Vec<CriterionResult> {
    vec![c1(), c2(), c3(), c4(), c5(), c6(), c7(), c8(), c9(), c10()]
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Exact-vs-MC second moment at (n, t, z) = (50, 0.5, 0.3+0.3i).
fn c1() -> CriterionResult {
    timed(1, "exact vs Monte Carlo second moment", false, || {
        let n = 50usize;
        let t = 0.5;
        let z = c64(0.3, 0.3);
        let p = EgeParams::new(n, t, 20_001).unwrap();
        let reps = 10_000usize;
        let values: Vec<f64> = (0..reps)
            .into_par_iter()
            .map(|i| {
                let mut s = derive_stream(p.seed, i as u64);
                let a = sample_ege(&mut s, &p).unwrap();
                (2.0 * eval_f(&a, t, z).unwrap().log_modulus()).exp()
            })
            .collect();
        let mean = values.iter().sum::<f64>() / reps as f64;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (reps as f64 - 1.0);
        let se = (var / reps as f64).sqrt();
        let exact = exact_second_moment(n, t, z).unwrap().exp();
        let ok = (mean - exact).abs() < 3.0 * se;
        (ok, format!("MC {mean:.5} +- {se:.5} vs exact {exact:.5}"))
    })
}

/// n = 1 closed form over a 100-point (t, z) grid at 1e-12.
fn c2() -> CriterionResult {
    timed(2, "n=1 closed form", false, || {
        let mut worst = 0.0f64;
        for ti in 0..10 {
            let t = ti as f64 / 9.0;
            for zi in 0..10 {
                let z = Complex64::from_polar(0.15 + 0.07 * zi as f64, 0.7 * zi as f64 + 0.1);
                let lhs = exact_second_moment(1, t, z).unwrap();
                let zz = z * z;
                let rhs = ((c64(1.0, 0.0) + t * zz).norm_sqr() + z.norm_sqr()).ln() - t * zz.re;
                worst = worst.max((lhs - rhs).abs());
            }
        }
        (worst < 1e-12, format!("max |difference| over 100 points = {worst:.2e}"))
    })
}

/// Second-moment limit triangle at n = 4000.
fn c3() -> CriterionResult {
    timed(3, "second-moment limit triangle", false, || {
        let t = 0.5;
        let h = HSeries::compute(t, 6).unwrap();
        let mut details = String::new();
        let mut ok = true;
        for z in [c64(0.3, 0.0), c64(0.4, 0.0), c64(0.0, 0.4), c64(0.25, 0.25)] {
            let exact = exact_second_moment(4000, t, z).unwrap().exp();
            let limit = h.limit_second_moment(z).unwrap();
            let asym = asymptotic_second_moment(t, z).unwrap().exp();
            let d1 = (exact - limit).abs() / exact;
            let d2 = (exact - asym).abs() / exact;
            ok &= d1 < 0.01 && d2 < 0.01;
            let _ = write!(details, "z={z}: dk={d1:.2e} da={d2:.2e}; ");
        }
        (ok, details)
    })
}

/// Trace CLT at n = 300 for t in {0, 0.5, 1}, reps = 2000, k <= 5.
fn c4() -> CriterionResult {
    timed(4, "trace CLT", false, || {
        let kmax = 5usize;
        let reps = 2000usize;
        let mut details = String::new();
        let mut ok = true;
        for t in [0.0, 0.5, 1.0] {
            let p = EgeParams::new(300, t, 30_000).unwrap();
            let samples: Vec<_> = (0..reps)
                .into_par_iter()
                .map(|i| compute_sample(&p, i as u64, kmax).unwrap())
                .collect();
            let est = aggregate_moments(&samples).unwrap();
            let mut worst_sigma = 0.0f64;
            for k in 1..=kmax {
                let target = k as f64 * t.powi(k as i32);
                let d = (est.cov_sq(k, k) - c64(target, 0.0)).norm();
                ok &= d <= 3.0 * est.cov_sq_se(k, k);
                worst_sigma = worst_sigma.max(d / est.cov_sq_se(k, k));
                let d = (est.cov_abs(k, k) - c64(k as f64, 0.0)).norm();
                ok &= d <= 3.0 * est.cov_abs_se(k, k);
                worst_sigma = worst_sigma.max(d / est.cov_abs_se(k, k));
                let d = est.cum4[k - 1].abs();
                ok &= d <= 4.0 * est.cum4_se[k - 1];
                for j in 1..=kmax {
                    if j == k {
                        continue;
                    }
                    let d = est.cov_sq(j, k).norm();
                    ok &= d <= 4.0 * est.cov_sq_se(j, k);
                    let d = est.cov_abs(j, k).norm();
                    ok &= d <= 4.0 * est.cov_abs_se(j, k);
                }
            }
            let _ = write!(details, "t={t}: worst diagonal deviation {worst_sigma:.2} sigma; ");
        }
        (ok, details)
    })
}

/// The exact-arithmetic identity block.
fn c5() -> CriterionResult {
    timed(5, "exact identities", false, || {
        let (ok, report) = exact_identities_report();
        (ok, report)
    })
}

/// Shared by criterion 5 and the `moments` subcommand's report.
pub fn exact_identities_report() -> (bool, String) {
    let mut ok = true;
    let mut out = String::new();

    // Chebyshev recurrence vs closed form, k <= 20.
    let mut worst = 0.0f64;
    for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
        for k in 1..=20usize {
            let rec = cheb_poly(k, t);
            let closed = cheb_coeffs_closed(k, t).unwrap();
            for (a, b) in rec.coeffs.iter().zip(closed.coeffs.iter()) {
                worst = worst.max((a - b).abs() / (1.0 + b.abs()));
            }
        }
    }
    ok &= worst < 1e-12;
    let _ = write!(out, "cheb recurrence=closed: {worst:.1e}; ");

    // Binomial sums, even and odd, k <= 12 in exact rationals.
    let mut sums_ok = true;
    for k in 1..=12usize {
        for l in 1..=k {
            let s = binomial_sum_even(k, l);
            let want = if l == k {
                num_rational_one_over(2 * l as u64)
            } else {
                num_rational_zero()
            };
            sums_ok &= s == want;
        }
        for l in 1..=(k + 1) {
            let s = binomial_sum_odd(k, l);
            let want = if l == k + 1 {
                num_rational_one_over(2 * k as u64 + 1)
            } else {
                num_rational_zero()
            };
            sums_ok &= s == want;
        }
    }
    ok &= sums_ok;
    let _ = write!(out, "binomial sums exact: {sums_ok}; ");

    // Tree constant, exact and floating.
    let mut tree_ok = true;
    for m in 1..=8usize {
        tree_ok &= l_tree_bracket_exact(m) == num_rational_int(-(m as i64));
        for t in [0.0, 0.25, 0.5, 1.0] {
            let v = l_tree(m, t).unwrap();
            tree_ok &= (v + m as f64 * t.powi(m as i32)).abs() < 1e-12;
        }
    }
    ok &= tree_ok;
    let _ = write!(out, "l_tree=-m t^m: {tree_ok}; ");

    // Quadrature of the tree-sum integrand.
    let mut quad_worst = 0.0f64;
    for t in [0.25, 0.5, 0.75, 1.0] {
        quad_worst = quad_worst.max((s_prime_quadrature(1, t).unwrap() + t).abs());
        for m in 2..=6usize {
            quad_worst = quad_worst.max(s_prime_quadrature(m, t).unwrap().abs());
        }
    }
    ok &= quad_worst < 1e-8;
    let _ = write!(out, "S' quadrature: {quad_worst:.1e}; ");

    // Covariance diagonalization by the Chebyshev family.
    let mut diag_worst = 0.0f64;
    for t in [0.0, 0.25, 0.5, 1.0] {
        let polys: Vec<_> = (1..=8).map(|k| cheb_poly(k, t)).collect();
        for k in 1..=8usize {
            for l in 1..=8usize {
                let v = phi_poly(t, &polys[k - 1], &polys[l - 1]);
                let vc = phi_c_poly(t, &polys[k - 1], &polys[l - 1]);
                let (want, want_c) = if k == l {
                    (k as f64 * t.powi(k as i32), k as f64)
                } else {
                    (0.0, 0.0)
                };
                diag_worst = diag_worst.max((v - want).abs()).max((vc - want_c).abs());
            }
        }
    }
    ok &= diag_worst < 1e-9;
    let _ = write!(out, "covariance diagonalization: {diag_worst:.1e}");

    (ok, out)
}

fn num_rational_zero() -> num_rational::BigRational {
    num_rational::BigRational::from_integer(0.into())
}

fn num_rational_int(v: i64) -> num_rational::BigRational {
    num_rational::BigRational::from_integer(v.into())
}

fn num_rational_one_over(d: u64) -> num_rational::BigRational {
    num_rational::BigRational::new(1.into(), d.into())
}

/// Graph oracle laws.
fn c6() -> CriterionResult {
    timed(6, "graph oracle laws", false, || {
        let mut ok = true;
        let mut out = String::new();

        // Double-tree count law.
        let mut counts_ok = true;
        for m in 1..=3usize {
            for n in 1..=5usize {
                let got = count_class(n, 2 * m, GraphKind::DoubleTree).unwrap();
                counts_ok &= got == falling(n as u64, m as u64 + 1) * catalan(m);
            }
        }
        ok &= counts_ok;
        let _ = write!(out, "double-tree counts: {counts_ok}; ");

        // Simple-edge tuples have zero Wick weight (k <= 5, exhaustive).
        let mut simple_ok = true;
        for k in 1..=5usize {
            for n in 1..=4usize {
                let mut tuple = vec![0usize; k];
                loop {
                    let g = DirectedMultigraph::from_tuple(&tuple);
                    let has_simple = g.edges.iter().any(|&(u, v)| {
                        g.edges.iter().filter(|&&e| e == (u, v) || e == (v, u)).count() == 1
                    });
                    if has_simple {
                        let edges: Vec<_> = g.edges.iter().map(|&e| (e, false)).collect();
                        simple_ok &= wick_pair_expectation(&edges, 0.7) == 0.0;
                    }
                    if !advance(&mut tuple, n) {
                        break;
                    }
                }
            }
        }
        ok &= simple_ok;
        let _ = write!(out, "simple edges vanish: {simple_ok}; ");

        // E Tr A^2 = n^2 t exactly.
        let mut tr2_ok = true;
        for n in 1..=4usize {
            for t in [0.0, 0.5, 1.0] {
                let v = exact_trace_expectation(n, 2, t).unwrap();
                tr2_ok &= (v - (n * n) as f64 * t).abs() < 1e-12;
            }
        }
        ok &= tr2_ok;
        let _ = write!(out, "E Tr A^2 = n^2 t: {tr2_ok}; ");

        // e_2^{(n)} vanishes identically (exact rational path).
        let mut e2_ok = true;
        for n in 1..=8u64 {
            for t in [0.0, 0.25, 0.5, 1.0] {
                e2_ok &= expectation_u_even(1, t, n).unwrap() == 0.0;
            }
        }
        ok &= e2_ok;
        let _ = write!(out, "e_2 = 0 exactly: {e2_ok}; ");

        // h_1 = t.
        let mut h1_ok = true;
        for t in [0.0, 0.25, 0.5, 1.0] {
            h1_ok &= (h_coeff(1, t).unwrap() - t).abs() < 1e-14;
        }
        ok &= h1_ok;
        let _ = write!(out, "h_1 = t: {h1_ok}");

        (ok, out)
    })
}

fn advance(tuple: &mut [usize], n: usize) -> bool {
    for slot in tuple.iter_mut() {
        *slot += 1;
        if *slot < n {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Scaled covariance convergence: quadratic-in-1/n extrapolation over
/// n in {4, 6, 8} against the limit table, within 5%.
fn c7() -> CriterionResult {
    timed(7, "scaled covariance convergence", false, || {
        let pairs = [(1usize, 1usize), (2, 2), (1, 3), (2, 4), (3, 3)];
        let mut ok = true;
        let mut worst = 0.0f64;
        for t in [0.0, 0.5, 1.0] {
            for &(k1, k2) in &pairs {
                for conj2 in [false, true] {
                    let ns = [4usize, 6, 8];
                    let mut vals = [0.0f64; 3];
                    for (i, &n) in ns.iter().enumerate() {
                        let cov = exact_product_covariance(n, k1, k2, conj2, t).unwrap();
                        vals[i] = cov / (n as f64).powf((k1 + k2) as f64 / 2.0);
                    }
                    let extrap = lagrange_at_zero(&ns, &vals);
                    let target = if conj2 {
                        phi_c_monomial(t, k1, k2)
                    } else {
                        phi_monomial(t, k1, k2)
                    };
                    let err = (extrap - target).abs();
                    let tol = if target == 0.0 { 1e-9 } else { 0.05 * target.abs() };
                    ok &= err <= tol;
                    if target != 0.0 {
                        worst = worst.max(err / target.abs());
                    }
                }
            }
        }
        (ok, format!("worst relative deviation {worst:.3}"))
    })
}

fn lagrange_at_zero(ns: &[usize; 3], vals: &[f64; 3]) -> f64 {
    let xs = [1.0 / ns[0] as f64, 1.0 / ns[1] as f64, 1.0 / ns[2] as f64];
    let mut total = 0.0;
    for i in 0..3 {
        let mut li = 1.0;
        for j in 0..3 {
            if i != j {
                li *= (0.0 - xs[j]) / (xs[i] - xs[j]);
            }
        }
        total += vals[i] * li;
    }
    total
}

/// Outlier statistics at n = 256, t = 0.5, inflation 1.1 over 100 runs.
///
/// Runs faithfully at the stated constants. The pinned inflation is too
/// tight at this n (short-axis margin 0.05 vs n^{-1/2} edge fluctuation),
/// so the expected outcome is an honest failure; the suite prints the
/// measured counts either way.
fn c8() -> CriterionResult {
    timed(8, "lack of outliers", true, || {
        let n = 256usize;
        let t = 0.5;
        let inflation = 1.1;
        let ellipse = EllipseSpec::new(t, inflation).unwrap();
        let radius = preimage_disk_radius(t, inflation);
        // Fires only below the observed clean-run floor of the min-log
        // distribution (about -3.3); a zero inside the disk dips deeper.
        let threshold = -6.0;
        let runs = 100u64;
        let results: Vec<(usize, f64)> = (0..runs)
            .into_par_iter()
            .map(|idx| {
                let p = EgeParams::new(n, t, 80_000).unwrap();
                let mut s = derive_stream(p.seed, idx);
                let a = sample_ege(&mut s, &p).unwrap();
                let spec = eigenvalues_default(&a).unwrap();
                let outliers = outlier_count(&spec, n, &ellipse).unwrap();
                let minlog = min_modulus_on_disk(&a, t, radius, 48).unwrap();
                (outliers, minlog)
            })
            .collect();
        let clean = results.iter().filter(|(o, _)| *o == 0).count();
        let agree = results
            .iter()
            .filter(|(o, m)| (*o == 0) == (*m > threshold))
            .count();
        let ok = clean >= 95 && agree >= 98;
        (
            ok,
            format!("zero-outlier runs {clean}/100 (need >= 95), detector agreement {agree}/100 (need >= 98)"),
        )
    })
}

/// Limit-law moment match: f_{n,t} at n = 800 vs the sampled limit
/// function, means and second absolute moments within 4 combined SE.
fn c9() -> CriterionResult {
    timed(9, "limit-law moment match", false, || {
        let zs = [c64(0.3, 0.0), c64(0.0, 0.4), c64(0.25, 0.25)];
        let n = 800usize;
        let reps_n = 200usize;
        let reps_gaf = 4000usize;
        let mut ok = true;
        let mut worst = 0.0f64;
        for t in [0.0, 0.5, 1.0] {
            let p = EgeParams::new(n, t, 90_000).unwrap();
            let finite: Vec<Vec<Complex64>> = (0..reps_n)
                .into_par_iter()
                .map(|i| {
                    let mut s = derive_stream(p.seed, i as u64);
                    let a = sample_ege(&mut s, &p).unwrap();
                    zs.iter().map(|&z| eval_f(&a, t, z).unwrap().value()).collect()
                })
                .collect();
            let h = HSeries::compute(t, 6).unwrap();
            let gp = GafParams::new(t, 40, 90_001).unwrap();
            let limit: Vec<Vec<Complex64>> = (0..reps_gaf)
                .into_par_iter()
                .map(|i| sample_limit_function(&gp, &h, i as u64, &zs).unwrap())
                .collect();
            for (zi, _z) in zs.iter().enumerate() {
                let fin: Vec<Complex64> = finite.iter().map(|row| row[zi]).collect();
                let lim: Vec<Complex64> = limit.iter().map(|row| row[zi]).collect();
                let (mf, sf) = mean_se_complex(&fin);
                let (ml, sl) = mean_se_complex(&lim);
                let d = (mf - ml).norm();
                let se = (sf * sf + sl * sl).sqrt();
                ok &= d <= 4.0 * se;
                worst = worst.max(d / se);
                let (qf, qsf) = mean_se_real(&fin.iter().map(|v| v.norm_sqr()).collect::<Vec<_>>());
                let (ql, qsl) = mean_se_real(&lim.iter().map(|v| v.norm_sqr()).collect::<Vec<_>>());
                let d = (qf - ql).abs();
                let se = (qsf * qsf + qsl * qsl).sqrt();
                ok &= d <= 4.0 * se;
                worst = worst.max(d / se);
            }
        }
        (ok, format!("worst deviation {worst:.2} combined sigma (limit 4)"))
    })
}

fn mean_se_complex(values: &[Complex64]) -> (Complex64, f64) {
    let r = values.len() as f64;
    let mean = values.iter().sum::<Complex64>() / r;
    let var = values.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / (r - 1.0);
    (mean, (var / r).sqrt())
}

fn mean_se_real(values: &[f64]) -> (f64, f64) {
    let r = values.len() as f64;
    let mean = values.iter().sum::<f64>() / r;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (r - 1.0);
    (mean, (var / r).sqrt())
}

/// Determinism: portrait bytes and CSV outputs are bitwise identical
/// across two runs with the same configuration.
fn c10() -> CriterionResult {
    timed(10, "bitwise determinism", false, || {
        let pc = crate::cli::PortraitConfig {
            n: 50,
            t: 0.5,
            seed: 1,
            resolution: 64,
            center: c64(0.0, 0.0),
            half_width: 0.9,
        };
        let a = crate::cli::portrait_bytes(&pc).unwrap();
        let b = crate::cli::portrait_bytes(&pc).unwrap();
        let portrait_ok = a == b;

        let tc = crate::cli::TracesConfig { n: 40, t: 0.5, seed: 2, reps: 120, kmax: 4 };
        let c1 = crate::cli::traces_csv(&tc).unwrap();
        let c2 = crate::cli::traces_csv(&tc).unwrap();
        let traces_ok = c1 == c2;

        let sc = crate::cli::SpectrumConfig { n: 64, t: 0.5, seed: 3, inflation: 1.1 };
        let (s1, o1) = crate::cli::spectrum_csv(&sc).unwrap();
        let (s2, o2) = crate::cli::spectrum_csv(&sc).unwrap();
        let spectrum_ok = s1 == s2 && o1 == o2;

        (
            portrait_ok && traces_ok && spectrum_ok,
            format!("portrait {portrait_ok}, traces CSV {traces_ok}, scatter CSV {spectrum_ok}"),
        )
    })
}

/// Maps an oracle error to the CLI exit code contract.
pub fn exit_code_for_error(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        _ => 1,
    }
}
