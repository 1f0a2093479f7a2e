//! Wick rule for products of fields, and where Wick and normal ordering part.

use num_complex::Complex64;
use qfock::field::{wick_rule_expand, wick_vs_normal_report, FieldConfig};
use qfock::kernel::{build_anyonic_kernel, SiteGrid};
use qfock::tensor::FockTensor;

fn main() -> qfock::Result<()> {
    let grid = || SiteGrid::uniform(3, 1.0, 1.0);
    let cfg = FieldConfig::new(
        build_anyonic_kernel(grid()?, Complex64::from_polar(1.0, 0.6))?,
        0.5,
        5,
    )?;
    let fs = [
        FockTensor::real_vector(&[1.0, 0.0, 0.5]),
        FockTensor::real_vector(&[0.0, 1.0, 1.0]),
        FockTensor::real_vector(&[0.3, -0.2, 1.0]),
        FockTensor::real_vector(&[1.0, 1.0, 1.0]),
    ];
    let e = wick_rule_expand(&cfg, &fs)?;
    println!(
        "{} terms, expansion vs operator product {:.3e}",
        e.terms, e.residual
    );

    for (label, q, lambda) in [
        ("fermion, λ = 0", Complex64::new(-1.0, 0.0), 0.0),
        ("q = i, λ = 0", Complex64::i(), 0.0),
        ("fermion, λ = 1", Complex64::new(-1.0, 0.0), 1.0),
    ] {
        let cfg = FieldConfig::new(build_anyonic_kernel(grid()?, q)?, lambda, 4)?;
        let r = wick_vs_normal_report(&cfg, 3)?;
        println!(
            "{label}: Wick − normal = {:.3e} at {:?} (equal expected: {})",
            r.residual, r.worst, r.expect_equal
        );
    }
    Ok(())
}
