//! Norm of the smeared creator restricted to the span of χ^{⊛n}.

use num_complex::Complex64;
use qfock::fock::{chi_power_gram, restricted_creation_norm};

fn main() -> qfock::Result<()> {
    let mass = 1.0;
    for theta in [0.2, 1.0, 2.0, std::f64::consts::PI] {
        let q = Complex64::from_polar(1.0, theta);
        let r = restricted_creation_norm(q, mass, 12)?;
        println!(
            "θ = {theta:.3}: closed form {:.6}, power iteration {:.6}, bound {:.6}, attained at n = {}",
            r.closed_form, r.power_iteration, r.bound, r.argmax
        );
    }
    let gram = chi_power_gram(Complex64::i(), mass, 6);
    println!("‖χ^n‖² for q = i: {gram:.4?}");
    Ok(())
}
