//! Fractional integrals with respect to three kernels against the power rule
//! I^rho (phi - phi(a))^(mu-1) = Gamma(mu)/Gamma(mu+rho) (phi - phi(a))^(mu+rho-1),
//! then the derivative of a weighted power.
//!
//! `cargo run --example frac_calc`

use phi_hilfer::frac_calc::{frac_integral, hilfer_derivative, Integrand, WeightedGridFunction};
use phi_hilfer::phi::PhiFunction;
use phi_hilfer::special::gamma;

fn main() -> phi_hilfer::Result<()> {
    let (rho, mu) = (0.6, 1.5);
    for (name, phi, a, t) in [
        ("identity", PhiFunction::Identity, 0.0, 1.0),
        ("log", PhiFunction::Log, 1.0, 3.0),
        ("t^2", PhiFunction::power(2.0)?, 0.0, 1.2),
    ] {
        let pa = phi.eval(a)?;
        let y = phi.eval(t)? - pa;
        let kernel = phi.clone();
        let f = move |s: f64| Ok((kernel.eval(s)? - pa).powf(mu - 1.0));
        let exact = gamma(mu)? / gamma(mu + rho)? * y.powf(mu + rho - 1.0);
        let singular = frac_integral(&phi, rho, Integrand::Singular { f: &f, exponent: mu - 1.0 }, a, t, 256)?;
        let sampled = frac_integral(&phi, rho, Integrand::Callable(&f), a, t, 256)?;
        println!(
            "{name:>8}: exact {exact:.12}  singular rule {:.1e}  sampled rule {:.1e}",
            (singular - exact).abs(),
            (sampled - exact).abs()
        );
    }

    // u = y^(sigma-1) has Hilfer derivative zero for every type nu.
    let (rho, nu) = (0.5, 0.4);
    let sigma = rho + nu - rho * nu;
    let grid: Vec<f64> = (0..=400).map(|i| i as f64 / 400.0).collect();
    let u = WeightedGridFunction::new(grid.clone(), vec![1.0; grid.len()], sigma, PhiFunction::Identity, 0.0)?;
    for t in [0.25, 0.5, 0.9] {
        println!("D u({t}) = {:.2e}", hilfer_derivative(&PhiFunction::Identity, rho, nu, &u, t)?);
    }
    Ok(())
}
