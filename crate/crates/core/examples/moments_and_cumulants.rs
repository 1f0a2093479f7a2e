//! Vacuum moments by operators and by the partition formula, then cumulants.

use num_complex::Complex64;
use qfock::field::{cell_fields, moment_tensors, vacuum_state, FieldConfig};
use qfock::kernel::{build_anyonic_kernel, SiteGrid};
use qfock::partitions::{cumulants_from_moments, moment_formula};
use qfock::tensor::FockTensor;

fn main() -> qfock::Result<()> {
    let lambda = 0.7;
    let k = build_anyonic_kernel(
        SiteGrid::uniform(3, 1.0, 0.5)?,
        Complex64::from_polar(1.0, 2.0),
    )?;
    let cfg = FieldConfig::new(k.clone(), lambda, 6)?;

    let f = FockTensor::real_vector(&[1.0, -0.5, 0.25]);
    let g = FockTensor::real_vector(&[0.0, 1.0, 2.0]);
    let word = [f.clone(), g.clone(), f.clone(), g.clone(), f];
    println!("⟨Ω, ω(f)ω(g)ω(f)ω(g)ω(f) Ω⟩");
    println!("  operators  {:.10}", vacuum_state(&word, &cfg)?);
    println!("  partitions {:.10}", moment_formula(&k, lambda, &word)?);

    let cumulants = cumulants_from_moments(&k, &moment_tensors(&cell_fields(&cfg), 5)?)?;
    for (d, c) in cumulants.iter().enumerate() {
        let diag: Vec<f64> = (0..3).map(|i| c.get(&vec![i; d + 1]).re).collect();
        println!("c_{} diagonal {diag:.4?}", d + 1);
    }
    Ok(())
}
