//! Grid refinement on the linear Caputo problem u' = -u (fractional), whose
//! solution is E_rho(-t^rho).
//!
//! `cargo run --example convergence`

use phi_hilfer::phi::PhiFunction;
use phi_hilfer::solver::{solve_picard, FractionalOrder, ImpulsiveProblem, Rhs};
use phi_hilfer::special::mittag_leffler;

fn main() -> phi_hilfer::Result<()> {
    for rho in [0.4, 0.6, 0.8] {
        let order = FractionalOrder::new(rho, 1.0)?;
        let problem = ImpulsiveProblem::new(order, PhiFunction::Identity, 0.0, 1.0, 1.0, Rhs::parse("-u")?)?;
        let mut previous: Option<f64> = None;
        println!("rho = {rho}");
        for n in [64, 128, 256, 512, 1024] {
            let sol = solve_picard(&problem, n, 1e-13, 300)?;
            let seg = &sol.segments[0];
            let mut err = 0.0f64;
            for (&t, &w) in seg.grid.iter().zip(&seg.weighted_values) {
                err = err.max((w - mittag_leffler(rho, -t.powf(rho))?).abs());
            }
            let observed = previous.map(|p| format!("{:.2}", (p / err).log2())).unwrap_or_default();
            println!("  N={n:<5} error {err:.3e}  order {observed}");
            previous = Some(err);
        }
    }
    Ok(())
}
