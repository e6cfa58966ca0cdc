//! Kernel handling: validation, a user-defined kernel, and the change of
//! variables that maps a log-kernel problem onto an identity-kernel one.
//!
//! `cargo run --example kernels`

use phi_hilfer::phi::{validate_phi, PhiFunction};
use phi_hilfer::solver::{solve_picard, FractionalOrder, ImpulseMap, ImpulsiveProblem, Rhs};

fn main() -> phi_hilfer::Result<()> {
    let sine = PhiFunction::expression("sin(t)", Some("cos(t)"))?;
    let check = validate_phi(&sine, 0.0, 3.0, 200);
    println!("sin on [0, 3]: passed={} {:?}", check.passed, check.first_violation.map(|v| v.to_string()));
    let custom = PhiFunction::expression("t + t^3", None)?;
    println!("t + t^3 on [0, 2]: passed={}", validate_phi(&custom, 0.0, 2.0, 200).passed);

    let order = FractionalOrder::new(0.65, 0.35)?;
    let log = ImpulsiveProblem::new(order, PhiFunction::Log, 1.0, 3.0, 0.8, Rhs::parse("sin(phi(t)) - 0.5*u")?)?
        .with_impulse(1.7, ImpulseMap::parse("0.3*u")?)?;
    let id = ImpulsiveProblem::new(order, PhiFunction::Identity, 0.0, 3f64.ln(), 0.8, Rhs::parse("sin(t) - 0.5*u")?)?
        .with_impulse(1.7f64.ln(), ImpulseMap::parse("0.3*u")?)?;
    let (a, b) = (solve_picard(&log, 128, 1e-13, 100)?, solve_picard(&id, 128, 1e-13, 100)?);
    for t in [1.2, 1.7, 2.0, 3.0] {
        println!("t={t}: log kernel {:.12}  identity at ln t {:.12}", a.weighted_at(t)?, b.weighted_at(t.ln())?);
    }
    Ok(())
}
