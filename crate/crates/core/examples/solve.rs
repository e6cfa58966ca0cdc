//! Solves a nonlinear impulsive problem and prints the solution with its
//! impulse sizes read back from the grid.
//!
//! `cargo run --example solve`

use phi_hilfer::solver::{solve_picard, FractionalOrder, ImpulseMap, ImpulsiveProblem, PointValue, Rhs};
use phi_hilfer::phi::PhiFunction;

fn main() -> phi_hilfer::Result<()> {
    let order = FractionalOrder::new(0.7, 0.5)?;
    let rhs = Rhs::parse("phi(t)^0.15/(1+abs(u)) + 3*sin(phi(t))^2")?;
    let problem = ImpulsiveProblem::new(order, PhiFunction::Identity, 0.0, 1.0, 1.0, rhs)?
        .with_impulse(0.5, ImpulseMap::parse("0.5^0.15*abs(u)/(1+abs(u))")?)?;

    let sol = solve_picard(&problem, 128, 1e-12, 200)?;
    println!(
        "sigma = {:.3}, {} Picard iterations, last update {:.2e}",
        order.sigma, sol.iteration_count, sol.final_picard_residual
    );
    println!("{:>6}  {:>14}  {:>14}", "t", "u(t)", "weighted");
    for i in 0..=10 {
        let t = i as f64 / 10.0;
        let shown = match sol.evaluate(t)? {
            PointValue::Raw(v) => format!("{v:14.8}"),
            PointValue::Weighted(_) => format!("{:>14}", "singular"),
        };
        println!("{t:6.2}  {shown}  {:14.8}", sol.weighted_at(t)?);
    }
    for jump in sol.measured_jumps()? {
        println!("jump at t={}: applied {:.10}, read back {:.10}", jump.time, jump.applied, jump.measured);
    }
    Ok(())
}
