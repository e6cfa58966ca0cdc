#![allow(dead_code)]

use phi_hilfer::phi::PhiFunction;
use phi_hilfer::solver::{FractionalOrder, ImpulseMap, ImpulsiveProblem, Rhs};

pub const RHS_TEXT: &str = "(phi(t)-0)^(1-0.85)/(1+abs(u)) + 3*sin(phi(t)-0)^2";
pub const MAP_TEXT: &str = "(phi(0.5)-phi(0))^(0.15)*abs(u)/(1+abs(u))";

/// Identity kernel, rho = 0.7, nu = 0.5 on [0, 1], u_a = 1, one impulse at 1/2.
pub fn reference_problem() -> ImpulsiveProblem {
    let order = FractionalOrder::new(0.7, 0.5).unwrap();
    ImpulsiveProblem::new(order, PhiFunction::Identity, 0.0, 1.0, 1.0, Rhs::parse(RHS_TEXT).unwrap())
        .unwrap()
        .with_impulse(0.5, ImpulseMap::parse(MAP_TEXT).unwrap())
        .unwrap()
}

/// Hand-coded right-hand side of the reference problem.
pub fn reference_rhs(t: f64, u: f64) -> f64 {
    t.powf(0.15) / (1.0 + u.abs()) + 3.0 * t.sin().powi(2)
}

pub fn linear_problem(rho: f64) -> ImpulsiveProblem {
    let order = FractionalOrder::new(rho, 1.0).unwrap();
    ImpulsiveProblem::new(order, PhiFunction::Identity, 0.0, 1.0, 1.0, Rhs::parse("-u").unwrap()).unwrap()
}
