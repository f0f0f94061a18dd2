//! Spectral statistics of sampled matrices against the limiting ellipse
//! law.

use ege_core::clinalg::eigenvalues_default;
use ege_core::sampling::{derive_stream, sample_ege, EgeParams};
use ege_core::spectrum::{ellipse_contains, export_scatter, EllipseSpec};

/// At n = 500 at least 95% of the scaled eigenvalues fall inside the
/// (uninflated) limiting ellipse.
#[test]
fn most_eigenvalues_land_inside_the_ellipse() {
    let n = 500usize;
    let t = 0.5;
    let p = EgeParams::new(n, t, 77).unwrap();
    let mut s = derive_stream(p.seed, 0);
    let a = sample_ege(&mut s, &p).unwrap();
    let spec = eigenvalues_default(&a).unwrap();
    assert!(spec.converged);
    let e = EllipseSpec::new(t, 1.0).unwrap();
    let inv_sqrt_n = 1.0 / (n as f64).sqrt();
    let inside = spec
        .eigenvalues
        .iter()
        .filter(|&&l| ellipse_contains(&e, l * inv_sqrt_n))
        .count();
    assert!(
        inside as f64 >= 0.95 * n as f64,
        "only {inside}/{n} eigenvalues inside the ellipse"
    );
    // The scatter rows parse back to the same count.
    let csv = export_scatter(&spec, n);
    assert_eq!(csv.lines().count(), n + 1);
}
