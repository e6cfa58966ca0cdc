//! One- and two-parameter Mittag-Leffler values with closed-form checks.
//!
//! `cargo run --example mittag_leffler`

use phi_hilfer::special::{erfc, mittag_leffler, mittag_leffler_two};

fn main() -> phi_hilfer::Result<()> {
    println!("{:>6} {:>18} {:>18} {:>18}", "z", "E_0.5(z)", "E_0.8(z)", "E_1(z) - exp(z)");
    for z in [-10.0, -3.0, -1.0, -0.1, 0.0, 0.5, 1.0, 2.0, 5.0] {
        println!(
            "{z:6} {:18.12e} {:18.12e} {:18.3e}",
            mittag_leffler(0.5, z)?,
            mittag_leffler(0.8, z)?,
            mittag_leffler(1.0, z)? - f64::exp(z)
        );
    }
    let z: f64 = 1.3;
    println!("E_0.5({z}) - exp(z^2) erfc(-z) = {:.2e}", mittag_leffler(0.5, z)? - (z * z).exp() * erfc(-z));
    println!("E_(1,2)({z}) - (e^z - 1)/z = {:.2e}", mittag_leffler_two(1.0, 2.0, z)? - (z.exp() - 1.0) / z);
    println!("E_2(-z^2) - cos(z) = {:.2e}", mittag_leffler(2.0, -z * z)? - z.cos());
    Ok(())
}
