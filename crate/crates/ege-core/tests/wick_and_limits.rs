//! Graph-oracle laws and their match with the closed-form limit
//! combinatorics.

use ege_core::momentcomb::{
    catalan, falling, phi_c_monomial, phi_c_poly, phi_monomial, phi_poly, CovTable,
};
use ege_core::chebmod::cheb_poly;
use ege_core::sampling::{derive_stream, sample_ege, EgeParams};
use ege_core::wickoracle::{
    classify_tuple, count_class, exact_product_covariance, exact_trace_expectation,
    wick_pair_expectation, DirectedMultigraph, GraphKind,
};
use ege_core::clinalg::trace_powers;

/// Dyck-path enumeration: number of balanced +-1 sequences of length 2m
/// with nonnegative partial sums, counted by brute recursion.
fn dyck_count(m: usize) -> u128 {
    fn rec(remaining_up: usize, remaining_down: usize, height: usize) -> u128 {
        if remaining_up == 0 && remaining_down == 0 {
            return 1;
        }
        let mut total = 0;
        if remaining_up > 0 {
            total += rec(remaining_up - 1, remaining_down, height + 1);
        }
        if remaining_down > 0 && height > 0 {
            total += rec(remaining_up, remaining_down - 1, height - 1);
        }
        total
    }
    rec(m, m, 0)
}

#[test]
fn catalan_agrees_with_dyck_enumeration() {
    for m in 0..=10 {
        assert_eq!(catalan(m), dyck_count(m), "m={m}");
    }
}

#[test]
fn double_tree_count_law() {
    for m in 1..=3usize {
        for n in 1..=5usize {
            let got = count_class(n, 2 * m, GraphKind::DoubleTree).unwrap();
            let want = falling(n as u64, m as u64 + 1) * catalan(m);
            assert_eq!(got, want, "n={n} m={m}");
        }
    }
}

/// Double-tree tuples have every edge double opposite: for each support
/// pair the two directions appear exactly once each... checked literally
/// on the multigraph for all tuples with k <= 6, n <= 4.
#[test]
fn double_trees_have_opposite_branches() {
    for k in 1..=6usize {
        for n in 1..=4usize {
            let mut tuple = vec![0usize; k];
            loop {
                if classify_tuple(&tuple).kind == GraphKind::DoubleTree {
                    let g = DirectedMultigraph::from_tuple(&tuple);
                    for &(u, v) in &g.edges {
                        let same = g.edges.iter().filter(|&&e| e == (u, v)).count();
                        let opp = g.edges.iter().filter(|&&e| e == (v, u)).count();
                        assert_eq!(same, 1, "tuple {tuple:?} edge ({u},{v})");
                        assert_eq!(opp, 1, "tuple {tuple:?} edge ({u},{v})");
                    }
                }
                if !advance(&mut tuple, n) {
                    break;
                }
            }
        }
    }
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

/// Tuples whose graph has a simple edge carry zero Wick weight.
#[test]
fn simple_edges_kill_the_expectation() {
    let t = 0.6;
    for k in 1..=5usize {
        for n in 1..=4usize {
            let mut tuple = vec![0usize; k];
            loop {
                let g = DirectedMultigraph::from_tuple(&tuple);
                let has_simple = g.edges.iter().any(|&(u, v)| {
                    let twins = g
                        .edges
                        .iter()
                        .filter(|&&e| e == (u, v) || e == (v, u))
                        .count();
                    twins == 1
                });
                if has_simple {
                    let edges: Vec<_> = g.edges.iter().map(|&e| (e, false)).collect();
                    assert_eq!(
                        wick_pair_expectation(&edges, t),
                        0.0,
                        "tuple {tuple:?} should not contribute"
                    );
                }
                if !advance(&mut tuple, n) {
                    break;
                }
            }
        }
    }
}

#[test]
fn scaled_covariances_extrapolate_to_the_limit_table() {
    // Quadratic-in-1/n extrapolation through n = 4, 6, 8 against the
    // limiting covariance functionals, both conjugation kinds.
    let pairs = [(1usize, 1usize), (2, 2), (1, 3), (2, 4), (3, 3)];
    for &t in &[0.0, 0.5, 1.0] {
        for &(k1, k2) in &pairs {
            for conj2 in [false, true] {
                let ns = [4usize, 6, 8];
                let mut vals = [0.0; 3];
                for (i, &n) in ns.iter().enumerate() {
                    let cov = exact_product_covariance(n, k1, k2, conj2, t).unwrap();
                    vals[i] = cov / (n as f64).powf((k1 + k2) as f64 / 2.0);
                }
                let extrap = richardson_at_zero(&ns, &vals);
                let target = if conj2 {
                    phi_c_monomial(t, k1, k2)
                } else {
                    phi_monomial(t, k1, k2)
                };
                let tol = 0.05 * target.abs().max(0.02);
                assert!(
                    (extrap - target).abs() <= tol,
                    "t={t} (k1,k2)=({k1},{k2}) conj={conj2}: {extrap} vs {target}"
                );
            }
        }
    }
}

fn richardson_at_zero(ns: &[usize; 3], vals: &[f64; 3]) -> f64 {
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

/// The quadratic trace fluctuation at n = 40 sits within 0.005 of its
/// limit 2 t^2 (the k = 2 case has no 1/n term beyond the mean).
#[test]
fn quadratic_covariance_is_near_its_limit_at_n_forty() {
    let t = 0.5;
    let n = 40usize;
    let cov = exact_product_covariance(n, 2, 2, false, t).unwrap();
    let scaled = cov / (n as f64).powi(2);
    assert!((scaled - 2.0 * t * t).abs() < 0.005, "{scaled}");
}

/// The sampler and the Wick oracle must agree: exact E Tr A^4 at n=3
/// against a 1e5-sample Monte Carlo mean.
#[test]
fn oracle_agrees_with_sampler() {
    let n = 3usize;
    let t = 0.5;
    let exact = exact_trace_expectation(n, 4, t).unwrap();
    let p = EgeParams::new(n, t, 31).unwrap();
    let reps = 100_000usize;
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for i in 0..reps {
        let mut s = derive_stream(p.seed, i as u64);
        let a = sample_ege(&mut s, &p).unwrap();
        let tr = trace_powers(&a, 4).unwrap()[3].re;
        sum += tr;
        sumsq += tr * tr;
    }
    let mean = sum / reps as f64;
    let se = ((sumsq / reps as f64 - mean * mean).max(0.0) / reps as f64).sqrt();
    assert!(
        (mean - exact).abs() < 4.0 * se,
        "MC {mean} +- {se} vs exact {exact}"
    );
}

#[test]
fn chebyshev_polynomials_diagonalize_the_covariance() {
    for &t in &[0.0, 0.25, 0.5, 1.0] {
        let polys: Vec<_> = (1..=8).map(|k| cheb_poly(k, t)).collect();
        for k in 1..=8usize {
            for l in 1..=8usize {
                let v = phi_poly(t, &polys[k - 1], &polys[l - 1]);
                let vc = phi_c_poly(t, &polys[k - 1], &polys[l - 1]);
                if k == l {
                    let target = k as f64 * t.powi(k as i32);
                    assert!((v - target).abs() < 1e-9, "phi k={k} t={t}: {v}");
                    assert!((vc - k as f64).abs() < 1e-9, "phi_c k={k} t={t}: {vc}");
                } else {
                    assert!(v.abs() < 1e-9, "phi k={k} l={l} t={t}: {v}");
                    assert!(vc.abs() < 1e-9, "phi_c k={k} l={l} t={t}: {vc}");
                }
            }
        }
    }
}

#[test]
fn monomial_diagonalization_at_t_zero() {
    for p in 1..=6usize {
        for q in 1..=6usize {
            let v = phi_c_monomial(0.0, p, q);
            let want = if p == q { p as f64 } else { 0.0 };
            assert!((v - want).abs() < 1e-12, "p={p} q={q}: {v}");
        }
    }
}

#[test]
fn cov_table_is_symmetric_and_parity_zero() {
    let table = CovTable::build(0.5, 8);
    for p in 1..=8usize {
        for q in 1..=8usize {
            assert_eq!(table.phi(p, q), table.phi(q, p));
            assert_eq!(table.phi_c(p, q), table.phi_c(q, p));
            if (p + q) % 2 == 1 {
                assert_eq!(table.phi(p, q), 0.0);
                assert_eq!(table.phi_c(p, q), 0.0);
            }
        }
    }
}
