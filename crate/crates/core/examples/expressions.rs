//! Parsing, printing and evaluating user expressions, with error positions.
//!
//! `cargo run --example expressions`

use phi_hilfer::expr::{self, Bindings, Expression, Scope};
use phi_hilfer::phi::PhiFunction;
use std::collections::HashMap;

fn main() {
    let phi = PhiFunction::Log;
    for text in ["-2^2", "2^3^2", "(phi(t) - phi(1))^0.3 * u / (1 + abs(u))", "max(sin(t), cos(t)) + pi"] {
        match Expression::parse(text, Scope::RHS) {
            Ok(e) => println!("{text:<45} -> {e:<50} = {:?}", e.eval(&Bindings::tu(2.0, 0.5, &phi))),
            Err(err) => println!("{text:<45} !! {err}"),
        }
    }

    let e = expr::parse("t*u + 1", &["t", "u"]).expect("valid");
    let vars = HashMap::from([("t", 2.0), ("u", 3.0)]);
    println!("t*u + 1 at (2, 3) = {:?}", expr::eval(&e, &vars));

    for bad in ["sin(t", "2 +* u", "w + 1", "atan2(1)", "1.2.3", "ln(u)"] {
        match Expression::parse(bad, Scope::RHS) {
            Ok(e) => println!("{bad:<12} evaluates to {:?}", e.eval(&Bindings::tu(1.0, -1.0, &phi))),
            Err(err) => println!("{bad:<12} {err}"),
        }
    }
}
