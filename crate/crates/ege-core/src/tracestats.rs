//! Trace statistics of the scaled ensemble: the centered observables
//! U_k = Tr P_k^{(t)}(A/sqrt(n)) + n t [k=2], Monte Carlo moment
//! estimation with jackknife standard errors, and reconstruction of the
//! series coefficients of the normalised characteristic polynomial.

use crate::chebmod::cheb_coeffs_closed;
use crate::clinalg::{trace_powers, CMatrix};
use crate::error::{Error, Result};
use crate::sampling::{derive_stream, sample_ege, EgeParams};
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

/// The trace observables of one matrix draw.
#[derive(Debug, Clone)]
pub struct TraceSample {
    pub u: Vec<Complex64>,
    pub n: usize,
    pub t: f64,
    pub sample_index: u64,
}

/// U_1 .. U_kmax for one matrix.
///
/// The degree-0 coefficient of each Chebyshev polynomial contributes
/// coefficient * n through the trace of the identity; that bookkeeping is
/// exactly the source of the -2tn cancelled by the +nt correction at k=2.
pub fn compute_u(a: &CMatrix, t: f64, kmax: usize) -> Result<Vec<Complex64>> {
    if kmax == 0 {
        return Err(Error::Domain("compute_u requires kmax >= 1"));
    }
    let n = a.order();
    let inv_sqrt_n = 1.0 / Float::sqrt(n as f64);
    let scaled = CMatrix::from_fn(n, |i, j| a.get(i, j) * inv_sqrt_n);
    let traces = trace_powers(&scaled, kmax)?;
    let mut out = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        let poly = cheb_coeffs_closed(k, t)?;
        let mut u = Complex64::new(poly.coeffs[0] * n as f64, 0.0);
        for (deg, &c) in poly.coeffs.iter().enumerate().skip(1) {
            if c != 0.0 {
                u += c * traces[deg - 1];
            }
        }
        if k == 2 {
            u += Complex64::new(n as f64 * t, 0.0);
        }
        out.push(u);
    }
    Ok(out)
}

/// Draws sample `index` of the run and computes its trace observables.
pub fn compute_sample(p: &EgeParams, index: u64, kmax: usize) -> Result<TraceSample> {
    let mut stream = derive_stream(p.seed, index);
    let a = sample_ege(&mut stream, p)?;
    let u = compute_u(&a, p.t, kmax)?;
    Ok(TraceSample { u, n: p.n, t: p.t, sample_index: index })
}

/// Monte Carlo means and covariances of the centered statistics, with
/// jackknife standard errors and fourth cumulants of the real parts as
/// Gaussianity diagnostics.
#[derive(Debug, Clone)]
pub struct MomentEstimate {
    pub reps: usize,
    pub kmax: usize,
    pub mean: Vec<Complex64>,
    pub mean_se: Vec<f64>,
    cov_sq: Vec<Complex64>,
    cov_sq_se: Vec<f64>,
    cov_abs: Vec<Complex64>,
    cov_abs_se: Vec<f64>,
    pub cum4: Vec<f64>,
    pub cum4_se: Vec<f64>,
}

impl MomentEstimate {
    #[inline]
    fn idx(&self, j: usize, k: usize) -> usize {
        (j - 1) * self.kmax + (k - 1)
    }

    /// Estimate of E[V_j V_k].
    pub fn cov_sq(&self, j: usize, k: usize) -> Complex64 {
        self.cov_sq[self.idx(j, k)]
    }

    pub fn cov_sq_se(&self, j: usize, k: usize) -> f64 {
        self.cov_sq_se[self.idx(j, k)]
    }

    /// Estimate of E[V_j conj(V_k)].
    pub fn cov_abs(&self, j: usize, k: usize) -> Complex64 {
        self.cov_abs[self.idx(j, k)]
    }

    pub fn cov_abs_se(&self, j: usize, k: usize) -> f64 {
        self.cov_abs_se[self.idx(j, k)]
    }
}

/// Sequential Monte Carlo with one derived stream per sample index.
pub fn mc_moments(p: &EgeParams, reps: usize, kmax: usize) -> Result<MomentEstimate> {
    if reps < 100 {
        return Err(Error::Domain("mc_moments requires reps >= 100"));
    }
    let mut samples = Vec::with_capacity(reps);
    for i in 0..reps {
        samples.push(compute_sample(p, i as u64, kmax)?);
    }
    aggregate_moments(&samples)
}

/// Deterministic reduction of per-sample observables into moment
/// estimates; the summation order is fixed by the sample order.
pub fn aggregate_moments(samples: &[TraceSample]) -> Result<MomentEstimate> {
    let reps = samples.len();
    if reps < 3 {
        return Err(Error::Domain("moment aggregation requires at least 3 samples"));
    }
    let kmax = samples[0].u.len();
    if samples.iter().any(|s| s.u.len() != kmax) {
        return Err(Error::Domain("inconsistent kmax across samples"));
    }
    let r = reps as f64;

    let mut sums = vec![Complex64::new(0.0, 0.0); kmax];
    for s in samples {
        for (acc, &v) in sums.iter_mut().zip(s.u.iter()) {
            *acc += v;
        }
    }
    let mean: Vec<Complex64> = sums.iter().map(|&s| s / r).collect();
    let mut mean_se = vec![0.0; kmax];
    for k in 0..kmax {
        let var: f64 = samples.iter().map(|s| (s.u[k] - mean[k]).norm_sqr()).sum::<f64>();
        mean_se[k] = Float::sqrt(var / (r * (r - 1.0)));
    }

    // Pair sums for both covariance kinds.
    let mut p_sq = vec![Complex64::new(0.0, 0.0); kmax * kmax];
    let mut p_abs = vec![Complex64::new(0.0, 0.0); kmax * kmax];
    for s in samples {
        for j in 0..kmax {
            for k in 0..kmax {
                p_sq[j * kmax + k] += s.u[j] * s.u[k];
                p_abs[j * kmax + k] += s.u[j] * s.u[k].conj();
            }
        }
    }

    let mut cov_sq = vec![Complex64::new(0.0, 0.0); kmax * kmax];
    let mut cov_sq_se = vec![0.0; kmax * kmax];
    let mut cov_abs = vec![Complex64::new(0.0, 0.0); kmax * kmax];
    let mut cov_abs_se = vec![0.0; kmax * kmax];
    for j in 0..kmax {
        for k in 0..kmax {
            let (c, se) = jackknife_cov(samples, j, k, false, &sums, &p_sq[j * kmax + k]);
            cov_sq[j * kmax + k] = c;
            cov_sq_se[j * kmax + k] = se;
            let (c, se) = jackknife_cov(samples, j, k, true, &sums, &p_abs[j * kmax + k]);
            cov_abs[j * kmax + k] = c;
            cov_abs_se[j * kmax + k] = se;
        }
    }

    // Fourth cumulant of Re V_k.
    let mut cum4 = vec![0.0; kmax];
    let mut cum4_se = vec![0.0; kmax];
    for k in 0..kmax {
        let xs: Vec<f64> = samples.iter().map(|s| s.u[k].re).collect();
        let (c, se) = jackknife_cum4(&xs);
        cum4[k] = c;
        cum4_se[k] = se;
    }

    Ok(MomentEstimate {
        reps,
        kmax,
        mean,
        mean_se,
        cov_sq,
        cov_sq_se,
        cov_abs,
        cov_abs_se,
        cum4,
        cum4_se,
    })
}

/// Unbiased covariance with leave-one-out jackknife standard error,
/// linear in the number of samples given the precomputed sums.
fn jackknife_cov(
    samples: &[TraceSample],
    j: usize,
    k: usize,
    conj_k: bool,
    sums: &[Complex64],
    pair_sum: &Complex64,
) -> (Complex64, f64) {
    let r = samples.len() as f64;
    let sj = sums[j];
    let sk = if conj_k { sums[k].conj() } else { sums[k] };
    let full = (pair_sum - sj * sk / r) / (r - 1.0);

    let mut loo = Vec::with_capacity(samples.len());
    for s in samples {
        let xj = s.u[j];
        let xk = if conj_k { s.u[k].conj() } else { s.u[k] };
        let p_i = pair_sum - xj * xk;
        let sj_i = sj - xj;
        let sk_i = sk - xk;
        let c_i = (p_i - sj_i * sk_i / (r - 1.0)) / (r - 2.0);
        loo.push(c_i);
    }
    let mean_loo = loo.iter().sum::<Complex64>() / r;
    let var: f64 = loo.iter().map(|c| (c - mean_loo).norm_sqr()).sum();
    let se = Float::sqrt((r - 1.0) / r * var);
    (full, se)
}

/// Plug-in fourth cumulant m4 - 3 m2^2 with jackknife standard error.
fn jackknife_cum4(xs: &[f64]) -> (f64, f64) {
    let r = xs.len() as f64;
    let s1: f64 = xs.iter().sum();
    let s2: f64 = xs.iter().map(|x| x * x).sum();
    let s3: f64 = xs.iter().map(|x| x * x * x).sum();
    let s4: f64 = xs.iter().map(|x| x * x * x * x).sum();

    let cum4_of = |s1: f64, s2: f64, s3: f64, s4: f64, n: f64| -> f64 {
        let m = s1 / n;
        let m2 = s2 / n - m * m;
        let m4 = s4 / n - 4.0 * m * s3 / n + 6.0 * m * m * s2 / n - 3.0 * m * m * m * m;
        m4 - 3.0 * m2 * m2
    };

    let full = cum4_of(s1, s2, s3, s4, r);
    let mut loo = Vec::with_capacity(xs.len());
    for &x in xs {
        loo.push(cum4_of(s1 - x, s2 - x * x, s3 - x * x * x, s4 - x * x * x * x, r - 1.0));
    }
    let mean_loo: f64 = loo.iter().sum::<f64>() / r;
    let var: f64 = loo.iter().map(|c| (c - mean_loo) * (c - mean_loo)).sum();
    (full, Float::sqrt((r - 1.0) / r * var))
}

/// First m+1 Taylor coefficients of exp(-sum_k U_k z^k / k) by the
/// Newton-identity recursion xi_0 = 1, j xi_j = -sum_r U_r xi_{j-r}.
pub fn coeff_from_traces(u: &[Complex64], m: usize) -> Result<Vec<Complex64>> {
    if m > u.len() {
        return Err(Error::Domain("coeff_from_traces requires m <= kmax"));
    }
    let mut xi = vec![Complex64::new(0.0, 0.0); m + 1];
    xi[0] = Complex64::new(1.0, 0.0);
    for j in 1..=m {
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 1..=j {
            acc += u[r - 1] * xi[j - r];
        }
        xi[j] = -acc / j as f64;
    }
    Ok(xi)
}
