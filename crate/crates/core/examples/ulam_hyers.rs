//! Ulam-Hyers certificates: the problem is perturbed by eps times a waveform
//! and the weighted distance between the solutions is compared with C_uh eps.
//!
//! `cargo run --example ulam_hyers`

use phi_hilfer::phi::PhiFunction;
use phi_hilfer::solver::{FractionalOrder, ImpulseMap, ImpulsiveProblem, Rhs, SolverConfig};
use phi_hilfer::stability::{check_uh, PerturbationSpec, Waveform};

fn main() -> phi_hilfer::Result<()> {
    let order = FractionalOrder::new(0.7, 0.5)?;
    let rhs = Rhs::parse("phi(t)^0.15/(1+abs(u)) + 3*sin(phi(t))^2")?;
    let problem = ImpulsiveProblem::new(order, PhiFunction::Identity, 0.0, 1.0, 1.0, rhs)?
        .with_impulse(0.5, ImpulseMap::parse("0.5^0.15*abs(u)/(1+abs(u))")?)?;
    let config = SolverConfig::new(128, 1e-12, 500);

    for wave in [Waveform::Constant, Waveform::Sine { omega: 6.0 }, Waveform::Random { pieces: 16, seed: Some(7) }] {
        for eps in [0.1, 0.01, 0.001] {
            let spec = PerturbationSpec::uh(eps, wave.clone()).with_impulse_signs(vec![-1.0]);
            let r = check_uh(&problem, &spec, &config)?;
            println!(
                "{:<40} eps={eps:<6} distance {:.3e} <= {:.3e}  {}",
                format!("{wave:?}"),
                r.empirical_quantity,
                r.theoretical_bound,
                if r.pass { "PASS" } else { "FAIL" }
            );
        }
    }
    Ok(())
}
