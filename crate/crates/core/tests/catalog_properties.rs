use std::time::Instant;

use skewlab_core::catalog;
use skewlab_core::numerics::{integrate_pieces, Interval, QuadSpec};

#[test]
fn catalog_laws_are_normalized() {
    let started = Instant::now();
    let laws = catalog::univariate::<f64>();
    assert_eq!(laws.len(), 12);
    for (name, d) in &laws {
        let mut breaks = d.base().non_differentiable_points();
        breaks.extend(d.perturbation().non_differentiable_points());
        breaks.push(0.0);
        let spec = QuadSpec::default();
        let total = integrate_pieces(|x| d.pdf(x), Interval::real_line(), &breaks, &spec).unwrap();
        assert!((total - 1.0).abs() <= 1e-7, "{name}: {total}");
    }
    assert!(started.elapsed().as_secs_f64() < 5.0);
}

#[test]
fn survival_identity_on_catalog() {
    for (name, d) in catalog::univariate::<f64>().iter().take(5) {
        for x in Interval::new(-5.0, 5.0).unwrap().grid(100) {
            let lhs = 1.0 - d.cdf_by_quadrature(-x).unwrap();
            let rhs = 2.0 * d.base().cdf(x) - d.cdf_by_quadrature(x).unwrap();
            assert!((lhs - rhs).abs() <= 1e-7, "{name} at {x}: {lhs} vs {rhs}");
        }
    }
}
