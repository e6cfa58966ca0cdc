//! Continuous dependence on the initial value, on the data and on the order.
//!
//! `cargo run --example dependence`

use phi_hilfer::phi::PhiFunction;
use phi_hilfer::solver::{FractionalOrder, ImpulseMap, ImpulsiveProblem, Rhs, SolverConfig};
use phi_hilfer::stability::{
    check_data_dependence, check_ic_dependence, check_order_dependence, perturb_problem, BoundReport,
    PerturbationSpec, Waveform,
};

fn show(label: &str, r: &BoundReport) {
    println!(
        "{label:<22} distance {:.3e}  bound {:.3e}  margin {:+.3e}  {}",
        r.empirical_quantity,
        r.theoretical_bound,
        r.margin,
        if r.pass { "PASS" } else { "FAIL" }
    );
}

fn main() -> phi_hilfer::Result<()> {
    let order = FractionalOrder::new(0.7, 0.5)?;
    let rhs = Rhs::parse("phi(t)^0.15/(1+abs(u)) + 3*sin(phi(t))^2")?;
    let problem = ImpulsiveProblem::new(order, PhiFunction::Identity, 0.0, 1.0, 1.0, rhs)?
        .with_impulse(0.5, ImpulseMap::parse("0.5^0.15*abs(u)/(1+abs(u))")?)?;
    let config = SolverConfig::new(128, 1e-12, 500);

    for dv in [0.1, 1.0] {
        show(&format!("initial value +{dv}"), &check_ic_dependence(&problem, problem.u_a + dv, &config)?);
    }

    let shifted = perturb_problem(&problem, &PerturbationSpec::data_shift(0.1, 0.05, 0.02, Waveform::Sine { omega: 3.0 }))?;
    let r = check_data_dependence(&problem, &shifted, &config)?;
    show("data", &r);
    println!("  measured inputs: {:?}", r.parameters);

    for delta in [0.1, 0.05, 0.01, 1e-6] {
        show(&format!("order rho-{delta}"), &check_order_dependence(&problem, delta, &config)?);
    }
    Ok(())
}
