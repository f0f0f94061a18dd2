//! Exact brute-force ground truth at small size: graph classification of
//! trace tuples and Gaussian expectations of trace products via Wick's
//! formula over perfect matchings.
//!
//! The module deliberately avoids every asymptotic argument it is used to
//! test against; everything here is finite enumeration with the entry
//! pair-moments of the elliptic ensemble as the only input.

use crate::error::{Error, Result};
use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

/// Elementary-step budget for the enumeration oracles. Exceeding it is a
/// loud error, never a silent truncation.
pub const ENUM_BUDGET: u128 = 100_000_000;

/// Edge multiset over a vertex set, as induced by a trace tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedMultigraph {
    pub vertices: BTreeSet<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl DirectedMultigraph {
    /// The cyclic edge list (i1,i2), ..., (ik,i1) of a tuple.
    pub fn from_tuple(tuple: &[usize]) -> Self {
        let k = tuple.len();
        let vertices: BTreeSet<usize> = tuple.iter().copied().collect();
        let edges = (0..k).map(|r| (tuple[r], tuple[(r + 1) % k])).collect();
        DirectedMultigraph { vertices, edges }
    }

    /// Undirected support edges; a loop counts as one support edge.
    pub fn support_edges(&self) -> BTreeSet<(usize, usize)> {
        self.edges
            .iter()
            .map(|&(u, v)| if u <= v { (u, v) } else { (v, u) })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    DoubleTree,
    DoubleUnicyclic,
    TwoFourTree,
    Other,
}

/// Invariants of a tuple graph: q1 = |support| - |edges|/2 (stored doubled
/// to stay integral), q2 = |vertices| - |support|.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphClass {
    pub kind: GraphKind,
    pub q1_doubled: i64,
    pub q2: i64,
}

pub fn classify_tuple(tuple: &[usize]) -> GraphClass {
    let g = DirectedMultigraph::from_tuple(tuple);
    let support = g.support_edges();
    let q1_doubled = 2 * support.len() as i64 - g.edges.len() as i64;
    let q2 = g.vertices.len() as i64 - support.len() as i64;
    let kind = match (q1_doubled, q2) {
        (0, 1) => GraphKind::DoubleTree,
        (0, 0) => GraphKind::DoubleUnicyclic,
        (-2, 1) => GraphKind::TwoFourTree,
        _ => GraphKind::Other,
    };
    GraphClass { kind, q1_doubled, q2 }
}

/// Exact count of tuples [k] -> [n] in the given class.
pub fn count_class(n: usize, k: usize, kind: GraphKind) -> Result<u128> {
    if k == 0 {
        return Err(Error::Domain("count_class requires k >= 1"));
    }
    let steps = (n as u128).checked_pow(k as u32).ok_or(Error::BudgetExceeded {
        steps: u128::MAX,
        budget: ENUM_BUDGET,
    })?;
    if steps > ENUM_BUDGET {
        return Err(Error::BudgetExceeded { steps, budget: ENUM_BUDGET });
    }
    let mut count = 0u128;
    let mut tuple = vec![0usize; k];
    loop {
        if classify_tuple(&tuple).kind == kind {
            count += 1;
        }
        if !advance(&mut tuple, n) {
            break;
        }
    }
    Ok(count)
}

/// Odometer increment over [0, n)^k; false when the tuple wraps to zero.
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

/// Pair kernel of the elliptic entries: with c marking conjugation,
/// E[a_uv a_xy] = t when (x,y) = (v,u), E[a_uv conj(a_xy)] = 1 when
/// (x,y) = (u,v), zero otherwise. Jointly Gaussian entries make Wick sums
/// over these kernels exact.
fn pair_kernel(e1: (usize, usize), c1: bool, e2: (usize, usize), c2: bool, t: f64) -> f64 {
    if c1 == c2 {
        if e2 == (e1.1, e1.0) {
            t
        } else {
            0.0
        }
    } else if e2 == e1 {
        1.0
    } else {
        0.0
    }
}

/// Wick sum over perfect matchings of the (possibly conjugated) edge list.
/// Odd lists have no matching and give 0.
pub fn wick_pair_expectation(edges: &[((usize, usize), bool)], t: f64) -> f64 {
    if edges.len() % 2 == 1 {
        return 0.0;
    }
    let mut used = vec![false; edges.len()];
    wick_recurse(edges, &mut used, t)
}

fn wick_recurse(edges: &[((usize, usize), bool)], used: &mut [bool], t: f64) -> f64 {
    let first = match used.iter().position(|u| !u) {
        None => return 1.0,
        Some(i) => i,
    };
    used[first] = true;
    let mut acc = 0.0;
    for j in first + 1..edges.len() {
        if used[j] {
            continue;
        }
        let k = pair_kernel(edges[first].0, edges[first].1, edges[j].0, edges[j].1, t);
        if k != 0.0 {
            used[j] = true;
            acc += k * wick_recurse(edges, used, t);
            used[j] = false;
        }
    }
    used[first] = false;
    acc
}

fn double_factorial(n: usize) -> u128 {
    let mut r = 1u128;
    let mut m = n;
    while m > 1 {
        r *= m as u128;
        m -= 2;
    }
    r
}

/// E Tr A^k at finite n by full tuple enumeration.
pub fn exact_trace_expectation(n: usize, k: usize, t: f64) -> Result<f64> {
    if n == 0 || k == 0 {
        return Err(Error::Domain("exact_trace_expectation requires n, k >= 1"));
    }
    let tuples = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    let steps = tuples.saturating_mul(double_factorial(k.saturating_sub(1)));
    if steps > ENUM_BUDGET {
        return Err(Error::BudgetExceeded { steps, budget: ENUM_BUDGET });
    }
    let mut tuple = vec![0usize; k];
    let mut edges: Vec<((usize, usize), bool)> = vec![((0, 0), false); k];
    let mut total = 0.0;
    loop {
        for r in 0..k {
            edges[r] = ((tuple[r], tuple[(r + 1) % k]), false);
        }
        total += wick_pair_expectation(&edges, t);
        if !advance(&mut tuple, n) {
            break;
        }
    }
    Ok(total)
}

/// Exact covariance E[(Tr A^k1 - E)(Tr A^k2 - E)^(conj2)] by enumeration
/// over pairs of tuples.
pub fn exact_product_covariance(
    n: usize,
    k1: usize,
    k2: usize,
    conj2: bool,
    t: f64,
) -> Result<f64> {
    if n == 0 || k1 == 0 || k2 == 0 {
        return Err(Error::Domain("exact_product_covariance requires n, k1, k2 >= 1"));
    }
    let k = k1 + k2;
    let tuples = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    let steps = tuples.saturating_mul(double_factorial(k.saturating_sub(1)));
    if steps > ENUM_BUDGET {
        return Err(Error::BudgetExceeded { steps, budget: ENUM_BUDGET });
    }
    let mean1 = exact_trace_expectation(n, k1, t)?;
    let mean2 = exact_trace_expectation(n, k2, t)?;

    let mut tuple = vec![0usize; k];
    let mut edges: Vec<((usize, usize), bool)> = vec![((0, 0), false); k];
    let mut cross = 0.0;
    loop {
        let (first, second) = tuple.split_at(k1);
        for r in 0..k1 {
            edges[r] = ((first[r], first[(r + 1) % k1]), false);
        }
        for r in 0..k2 {
            edges[k1 + r] = ((second[r], second[(r + 1) % k2]), conj2);
        }
        cross += wick_pair_expectation(&edges, t);
        if !advance(&mut tuple, n) {
            break;
        }
    }
    Ok(cross - mean1 * mean2)
}

/// E Tr A^k as an exact polynomial in n: the return value `coeffs` means
/// E Tr A^k = t^{k/2} * sum_m coeffs[m] * n(n-1)...(n-m+1). Odd k gives
/// all zeros. Obtained by grouping tuples by their kernel partition; each
/// partition's Wick count is a product of per-support-pair factorials.
pub fn trace_power_polynomial(k: usize) -> Vec<i128> {
    let mut coeffs = vec![0i128; k + 2];
    if k == 0 || k % 2 == 1 {
        return coeffs;
    }
    // Restricted-growth-string enumeration of set partitions of [k].
    let mut rgs = [0u8; 16];
    enumerate_partitions(&mut rgs, 1, 1, k, &mut |rgs, blocks| {
        let mut counts = [[0u8; 14]; 14];
        for r in 0..k {
            let u = rgs[r] as usize;
            let v = rgs[(r + 1) % k] as usize;
            counts[u][v] += 1;
        }
        let mut weight = 1u128;
        'check: for u in 0..blocks {
            for v in u..blocks {
                if u == v {
                    let c = counts[u][u] as usize;
                    if c % 2 == 1 {
                        weight = 0;
                        break 'check;
                    }
                    weight *= double_factorial(c.saturating_sub(1));
                } else {
                    let c1 = counts[u][v] as usize;
                    let c2 = counts[v][u] as usize;
                    if c1 != c2 {
                        weight = 0;
                        break 'check;
                    }
                    weight *= factorial(c1);
                }
            }
        }
        if weight > 0 {
            coeffs[blocks] += weight as i128;
        }
    });
    coeffs
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn enumerate_partitions(
    rgs: &mut [u8; 16],
    pos: usize,
    max: u8,
    k: usize,
    f: &mut impl FnMut(&[u8; 16], usize),
) {
    if pos == k {
        f(rgs, max as usize);
        return;
    }
    for v in 0..=max {
        rgs[pos] = v;
        let new_max = if v == max { max + 1 } else { max };
        enumerate_partitions(rgs, pos + 1, new_max, k, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_small_tuples() {
        // (1,2): edges (1,2),(2,1): smallest double tree.
        let c = classify_tuple(&[1, 2]);
        assert_eq!(c.kind, GraphKind::DoubleTree);
        assert_eq!((c.q1_doubled, c.q2), (0, 1));
        // (1,2,1,2): |V|=2, |support|=1, |E|=4 -> (q1, q2) = (-1, 1).
        let c = classify_tuple(&[1, 2, 1, 2]);
        assert_eq!(c.kind, GraphKind::TwoFourTree);
        assert_eq!((c.q1_doubled, c.q2), (-2, 1));
        // Directed 3-cycle: (q1, q2) = (3/2, 0) -> Other.
        let c = classify_tuple(&[1, 2, 3]);
        assert_eq!(c.kind, GraphKind::Other);
        assert_eq!((c.q1_doubled, c.q2), (3, 0));
    }

    #[test]
    fn double_tree_counts_match_formula() {
        // k=2, n=3: (3)_2 * C_1 = 6.
        assert_eq!(count_class(3, 2, GraphKind::DoubleTree).unwrap(), 6);
        // k=4, n=4: (4)_3 * C_2 = 24 * 2 = 48.
        assert_eq!(count_class(4, 4, GraphKind::DoubleTree).unwrap(), 48);
        // Odd k: empty.
        assert_eq!(count_class(2, 3, GraphKind::DoubleTree).unwrap(), 0);
    }

    #[test]
    fn wick_base_cases() {
        let t = 0.37;
        assert_eq!(wick_pair_expectation(&[((1, 2), false), ((2, 1), false)], t), t);
        assert_eq!(wick_pair_expectation(&[((1, 2), false), ((1, 2), true)], t), 1.0);
        let quad = wick_pair_expectation(
            &[((1, 2), false), ((1, 2), false), ((2, 1), false), ((2, 1), false)],
            t,
        );
        assert!((quad - 2.0 * t * t).abs() < 1e-15);
    }

    #[test]
    fn trace_expectation_small() {
        // k=2: every ordered pair contributes t -> n^2 t.
        for n in 1..4 {
            let v = exact_trace_expectation(n, 2, 0.5).unwrap();
            assert!((v - (n * n) as f64 * 0.5).abs() < 1e-12);
        }
        // k=1: centered entries.
        assert_eq!(exact_trace_expectation(3, 1, 0.7).unwrap(), 0.0);
        // k=3: odd, vanishes.
        for n in 1..4 {
            assert_eq!(exact_trace_expectation(n, 3, 0.5).unwrap(), 0.0);
        }
    }

    #[test]
    fn covariance_base_cases() {
        // E|Tr A|^2 = n.
        for n in 1..5 {
            let v = exact_product_covariance(n, 1, 1, true, 0.5).unwrap();
            assert!((v - n as f64).abs() < 1e-12);
        }
        // Parity: (1,2) vanishes.
        for t in [0.0, 0.5] {
            let v = exact_product_covariance(3, 1, 2, false, t).unwrap();
            assert!(v.abs() < 1e-12);
            let v = exact_product_covariance(3, 1, 2, true, t).unwrap();
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn budget_guard_fires() {
        assert!(matches!(
            exact_trace_expectation(50, 8, 0.5),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn trace_polynomial_matches_enumeration() {
        // t^{k/2} sum_m coeffs[m] (n)_m == exact_trace_expectation(n, k, t)
        let t = 0.5f64;
        for k in [2usize, 4, 6] {
            let poly = trace_power_polynomial(k);
            for n in 1..4usize {
                let mut val = 0.0;
                for (m, &c) in poly.iter().enumerate() {
                    let mut falling = 1.0;
                    for i in 0..m {
                        falling *= (n as f64) - i as f64;
                    }
                    val += c as f64 * falling;
                }
                let tk = t.powi((k / 2) as i32);
                let direct = exact_trace_expectation(n, k, t).unwrap();
                assert!(
                    (val * tk - direct).abs() < 1e-9 * (1.0 + direct.abs()),
                    "k={k} n={n}: {} vs {}",
                    val * tk,
                    direct
                );
            }
        }
    }
}
