//! The vacuum state is tracial for real kernels at λ = 0 and not for anyons.

use num_complex::Complex64;
use qfock::field::{traciality_defect, FieldConfig};
use qfock::kernel::{build_anyonic_kernel, random_sign_kernel, SiteGrid};
use qfock::tensor::FockTensor;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qfock::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let grid = || SiteGrid::uniform(2, 1.0, 1.0);
    let (a, b) = (FockTensor::unit(2, 0), FockTensor::unit(2, 1));
    let w1 = [a.clone()];
    let w2 = [b.clone(), a, b];

    let sign = FieldConfig::new(random_sign_kernel(grid()?, &mut rng), 0.0, 4)?;
    println!(
        "sign kernel, λ = 0: τ(w1 w2) − τ(w2 w1) = {:.3e}",
        traciality_defect(&sign, &w1, &w2)?
    );
    for lambda in [0.0, 0.7] {
        let cfg = FieldConfig::new(build_anyonic_kernel(grid()?, Complex64::i())?, lambda, 5)?;
        println!(
            "q = i, λ = {lambda}: {:.3e}",
            traciality_defect(&cfg, &w1, &w2)?
        );
    }
    Ok(())
}
