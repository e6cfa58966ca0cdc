//! Ulam-Hyers-Rassias certificates with a growing weight theta.
//!
//! `cargo run --example rassias`

use phi_hilfer::bounds::fit_lambda_theta;
use phi_hilfer::phi::PhiFunction;
use phi_hilfer::solver::{FractionalOrder, ImpulseMap, ImpulsiveProblem, Rhs, SolverConfig, TimeFunction};
use phi_hilfer::stability::{check_uhr, PerturbationSpec, Waveform};

fn main() -> phi_hilfer::Result<()> {
    let order = FractionalOrder::new(0.7, 0.5)?;
    let rhs = Rhs::parse("phi(t)^0.15/(1+abs(u)) + 3*sin(phi(t))^2")?;
    let problem = ImpulsiveProblem::new(order, PhiFunction::Identity, 0.0, 1.0, 1.0, rhs)?
        .with_impulse(0.5, ImpulseMap::parse("0.5^0.15*abs(u)/(1+abs(u))")?)?;
    let config = SolverConfig::new(128, 1e-12, 500);

    for text in ["1", "1 + phi(t)", "exp(2*t)"] {
        let theta = TimeFunction::parse(text)?;
        let lambda = fit_lambda_theta(&theta, order.rho, &problem.phi, 0.0, 1.0, 400)?;
        let scaled = PerturbationSpec::uhr_scaled(0.05, 0.3, theta.clone(), Waveform::Sine { omega: 4.0 });
        let pair = PerturbationSpec::uhr_pair(0.3, theta, Waveform::Constant);
        for (label, spec) in [("scaled", scaled), ("pair", pair)] {
            let r = check_uhr(&problem, &spec, &config)?;
            println!(
                "theta = {text:<10} lambda {lambda:.4} {label:<6} margin {:.3e} {}",
                r.margin,
                if r.pass { "PASS" } else { "FAIL" }
            );
        }
    }
    Ok(())
}
