//! File formats. Every artifact embeds its full run configuration (as a
//! header comment or JSON field) so a run can be reproduced from the file
//! alone; all writers are deterministic functions of their inputs.

use ege_core::momentcomb::CovTable;
use ege_core::tracestats::MomentEstimate;
use num_complex::Complex64;
use serde_json::Value;
use std::fmt::Write as _;

/// One-line JSON used in `# config: ...` comments. serde_json maps are
/// ordered, so the line is stable across runs.
pub fn config_line(config: &Value) -> String {
    format!("config: {config}")
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// MomentEstimate as CSV: one row per entry with columns
/// j,k,re,im,stderr,kind for kind in mean, cov_sq, cov_abs, cum4.
pub fn moments_csv(est: &MomentEstimate, config: &Value) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {}", config_line(config));
    let _ = writeln!(out, "j,k,re,im,stderr,kind");
    for k in 1..=est.kmax {
        let m = est.mean[k - 1];
        let _ = writeln!(
            out,
            "{k},{k},{},{},{},mean",
            fmt_f64(m.re),
            fmt_f64(m.im),
            fmt_f64(est.mean_se[k - 1])
        );
    }
    for j in 1..=est.kmax {
        for k in 1..=est.kmax {
            let c = est.cov_sq(j, k);
            let _ = writeln!(
                out,
                "{j},{k},{},{},{},cov_sq",
                fmt_f64(c.re),
                fmt_f64(c.im),
                fmt_f64(est.cov_sq_se(j, k))
            );
        }
    }
    for j in 1..=est.kmax {
        for k in 1..=est.kmax {
            let c = est.cov_abs(j, k);
            let _ = writeln!(
                out,
                "{j},{k},{},{},{},cov_abs",
                fmt_f64(c.re),
                fmt_f64(c.im),
                fmt_f64(est.cov_abs_se(j, k))
            );
        }
    }
    for k in 1..=est.kmax {
        let _ = writeln!(
            out,
            "{k},{k},{},{},{},cum4",
            fmt_f64(est.cum4[k - 1]),
            fmt_f64(0.0),
            fmt_f64(est.cum4_se[k - 1])
        );
    }
    out
}

pub fn moments_json(est: &MomentEstimate, config: &Value) -> Value {
    let mean: Vec<Value> = (1..=est.kmax)
        .map(|k| {
            serde_json::json!({
                "k": k,
                "re": est.mean[k - 1].re,
                "im": est.mean[k - 1].im,
                "stderr": est.mean_se[k - 1],
            })
        })
        .collect();
    let cov = |kind: &str| -> Vec<Value> {
        let mut rows = Vec::new();
        for j in 1..=est.kmax {
            for k in 1..=est.kmax {
                let (c, se) = match kind {
                    "cov_sq" => (est.cov_sq(j, k), est.cov_sq_se(j, k)),
                    _ => (est.cov_abs(j, k), est.cov_abs_se(j, k)),
                };
                rows.push(serde_json::json!([j, k, c.re, c.im, se]));
            }
        }
        rows
    };
    let cum4: Vec<Value> = (1..=est.kmax)
        .map(|k| serde_json::json!([k, est.cum4[k - 1], est.cum4_se[k - 1]]))
        .collect();
    serde_json::json!({
        "config": config,
        "reps": est.reps,
        "kmax": est.kmax,
        "mean": mean,
        "cov_sq": cov("cov_sq"),
        "cov_abs": cov("cov_abs"),
        "cum4": cum4,
    })
}

/// CovTable as JSON rows [[p, q, value], ...].
pub fn covtable_json(table: &CovTable, config: &Value) -> Value {
    let mut phi = Vec::new();
    let mut phi_c = Vec::new();
    for p in 1..=table.max_degree {
        for q in 1..=table.max_degree {
            phi.push(serde_json::json!([p, q, table.phi(p, q)]));
            phi_c.push(serde_json::json!([p, q, table.phi_c(p, q)]));
        }
    }
    serde_json::json!({
        "t": table.t,
        "max_degree": table.max_degree,
        "phi": phi,
        "phi_c": phi_c,
        "config": config,
    })
}

/// Limit-function draws as CSV rows (draw_index, z_re, z_im, f_re, f_im).
pub fn gaf_csv(rows: &[(usize, Complex64, Complex64)], config: &Value) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {}", config_line(config));
    let _ = writeln!(out, "draw_index,z_re,z_im,f_re,f_im");
    for (idx, z, f) in rows {
        let _ = writeln!(
            out,
            "{idx},{},{},{},{}",
            fmt_f64(z.re),
            fmt_f64(z.im),
            fmt_f64(f.re),
            fmt_f64(f.im)
        );
    }
    out
}

/// Scatter CSV with the config comment above the spec's "re,im" header.
pub fn scatter_csv(body: &str, config: &Value) -> String {
    format!("# {}\n{body}", config_line(config))
}
