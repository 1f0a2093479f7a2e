//! At a primitive N-th root of unity the N-fold Q-power of any one-particle
//! function vanishes on increasing tuples.

use std::f64::consts::PI;

use num_complex::Complex64;
use qfock::kernel::{build_anyonic_kernel, SiteGrid};
use qfock::symmetrize::check_exclusion;
use qfock::tensor::FockTensor;

fn main() -> qfock::Result<()> {
    for order in 2..=5 {
        let q = Complex64::from_polar(1.0, 2.0 * PI / order as f64);
        let k = build_anyonic_kernel(SiteGrid::uniform(order + 1, 1.0, 1.0)?, q)?;
        let f = FockTensor::real_vector(
            &(0..=order)
                .map(|i| 1.0 + 0.3 * i as f64)
                .collect::<Vec<_>>(),
        );
        let r = check_exclusion(&k, &f, order)?;
        println!(
            "N = {order}: |f^N| on {} increasing tuples ≤ {:.2e}, closed form residual {:.2e}",
            r.tuples, r.vanishing_residual, r.closed_form_residual
        );
    }
    Ok(())
}
