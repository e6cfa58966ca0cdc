//! Sampled problem constants, the stability constants built from them and the
//! a-priori bound compared with the computed solution.
//!
//! `cargo run --example bounds`

use phi_hilfer::bounds::{
    apriori_solution_bound, estimate_impulse_bounds, estimate_sup_constants, fit_lambda_theta, StabilityConstants,
};
use phi_hilfer::phi::PhiFunction;
use phi_hilfer::solver::{solve_picard, FractionalOrder, ImpulseMap, ImpulsiveProblem, Rhs, TimeFunction};

fn main() -> phi_hilfer::Result<()> {
    let order = FractionalOrder::new(0.7, 0.5)?;
    let rhs = Rhs::parse("phi(t)^0.15/(1+abs(u)) + 3*sin(phi(t))^2")?;
    let problem = ImpulsiveProblem::new(order, PhiFunction::Identity, 0.0, 1.0, 1.0, rhs)?
        .with_impulse(0.5, ImpulseMap::parse("0.5^0.15*abs(u)/(1+abs(u))")?)?;

    let sup = estimate_sup_constants(&problem, 200)?;
    if let Some(warning) = sup.advisory() {
        println!("warning: {warning}");
    }
    let zeta: f64 = estimate_impulse_bounds(&problem)?.iter().sum();
    let theta = TimeFunction::parse("1 + phi(t)")?;
    let lambda = fit_lambda_theta(&theta, order.rho, &problem.phi, problem.a, problem.t_end, 400)?;
    let c = StabilityConstants::compute(&problem, &sup, zeta, Some(lambda))?;
    println!("{c:#?}");

    let bound = apriori_solution_bound(&problem, sup.m_star, sup.n_star)?;
    let sol = solve_picard(&problem, 128, 1e-12, 200)?;
    println!("weighted norm {:.6} <= a-priori bound {bound:.6}", sol.weighted_norm());
    Ok(())
}
