use phi_hilfer::frac_calc::{
    frac_integral, frac_integral_grid, hilfer_derivative, weighted_norm, Integrand, WeightedGridFunction,
};
use phi_hilfer::phi::PhiFunction;
use phi_hilfer::special::gamma;
use phi_hilfer::{Error, Result};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn uniform_in_phi(phi: &PhiFunction, a: f64, t: f64, n: usize) -> Vec<f64> {
    let (xa, xt) = (phi.eval(a).unwrap(), phi.eval(t).unwrap());
    (0..=n)
        .map(|i| match i {
            0 => a,
            i if i == n => t,
            i => phi.inverse(xa + (xt - xa) * i as f64 / n as f64, a, t).unwrap(),
        })
        .collect()
}

#[test]
fn constant_at_half_order() {
    let one = |_: f64| -> Result<f64> { Ok(1.0) };
    let v = frac_integral(&PhiFunction::Identity, 0.5, Integrand::Callable(&one), 0.0, 1.0, 64).unwrap();
    assert!(rel(v, std::f64::consts::FRAC_2_SQRT_PI) < 1e-13, "{v}");
}

#[test]
fn first_order_is_the_ordinary_integral() {
    let f = |s: f64| -> Result<f64> { Ok(2.0 * s) };
    for &t in &[0.3, 1.0, 2.5] {
        let v = frac_integral(&PhiFunction::Identity, 1.0, Integrand::Callable(&f), 0.0, t, 17).unwrap();
        assert!(rel(v, t * t) < 1e-13, "t={t}: {v}");
    }
}

fn kernels() -> Vec<(PhiFunction, f64, f64)> {
    vec![(PhiFunction::Identity, 0.0, 1.0), (PhiFunction::Log, 1.0, 3.0), (PhiFunction::Power(2.0), 0.0, 1.2)]
}

#[test]
fn power_rule_with_declared_endpoint_behaviour() {
    for (phi, a, t) in kernels() {
        let xa = phi.eval(a).unwrap();
        let y = phi.eval(t).unwrap() - xa;
        for &mu in &[0.5, 1.0, 2.0] {
            for &rho in &[0.3, 0.7] {
                let p = phi.clone();
                let f = move |s: f64| -> Result<f64> { Ok((p.eval(s)? - xa).powf(mu - 1.0)) };
                let exact = gamma(mu).unwrap() / gamma(mu + rho).unwrap() * y.powf(mu + rho - 1.0);
                let got =
                    frac_integral(&phi, rho, Integrand::Singular { f: &f, exponent: mu - 1.0 }, a, t, 1024).unwrap();
                assert!(rel(got, exact) <= 1e-3, "{phi:?} mu={mu} rho={rho}: {got} vs {exact}");
            }
        }
    }
}

#[test]
fn power_rule_converges_without_declared_behaviour() {
    // f = y^0.5 sampled plainly: the error falls at least linearly.
    let (mu, rho) = (1.5, 0.6);
    let f = |s: f64| -> Result<f64> { Ok(s.powf(mu - 1.0)) };
    let exact = gamma(mu).unwrap() / gamma(mu + rho).unwrap();
    let errs: Vec<f64> = [64, 128, 256, 512, 1024]
        .iter()
        .map(|&n| {
            let v = frac_integral(&PhiFunction::Identity, rho, Integrand::Callable(&f), 0.0, 1.0, n + 1).unwrap();
            rel(v, exact)
        })
        .collect();
    assert!(errs[4] <= 1e-3);
    for w in errs.windows(2) {
        assert!((w[0] / w[1]).log2() >= 1.0, "{errs:?}");
    }
}

#[test]
fn weighted_grid_power_rule() {
    // u = y^(sigma-1): weighted values are all one.
    let phi = PhiFunction::Log;
    let (a, t, sigma, rho) = (1.0, 2.0, 0.65, 0.4);
    let grid = uniform_in_phi(&phi, a, t, 256);
    let u = WeightedGridFunction::new(grid.clone(), vec![1.0; grid.len()], sigma, phi.clone(), a).unwrap();
    let y = 2f64.ln();
    let exact = gamma(sigma).unwrap() / gamma(sigma + rho).unwrap() * y.powf(sigma + rho - 1.0);
    let v = frac_integral(&phi, rho, &u, a, t, 0).unwrap();
    assert!(rel(v, exact) < 1e-12, "{v} {exact}");
    let all = frac_integral_grid(rho, &u).unwrap();
    assert!(rel(all[256], exact) < 1e-12);
    // Off-node target uses a partial cell.
    let mid = 1.37f64;
    let ym = mid.ln();
    let v = frac_integral(&phi, rho, &u, a, mid, 0).unwrap();
    assert!(rel(v, gamma(sigma).unwrap() / gamma(sigma + rho).unwrap() * ym.powf(sigma + rho - 1.0)) < 1e-12);
}

#[test]
fn reparameterization_through_phi() {
    let phi = PhiFunction::Power(2.0);
    let (a, t, rho) = (0.5, 1.5, 0.45);
    let g = |x: f64| x.sin() + x;
    let p = phi.clone();
    let f = move |s: f64| -> Result<f64> { Ok(g(p.eval(s)?)) };
    let gi = |x: f64| -> Result<f64> { Ok(g(x)) };
    let (xa, xt) = (phi.eval(a).unwrap(), phi.eval(t).unwrap());
    let lhs = frac_integral(&phi, rho, Integrand::Callable(&f), a, t, 300).unwrap();
    let rhs = frac_integral(&PhiFunction::Identity, rho, Integrand::Callable(&gi), xa, xt, 300).unwrap();
    assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs(), "{lhs} {rhs}");
}

#[test]
fn semigroup_on_a_linear_function() {
    let phi = PhiFunction::Identity;
    let (r1, r2) = (0.35, 0.5);
    let grid = uniform_in_phi(&phi, 0.0, 1.0, 511);
    let f = WeightedGridFunction::new(grid.clone(), grid.clone(), 1.0, phi.clone(), 0.0).unwrap();
    let inner = frac_integral_grid(r2, &f).unwrap();
    let inner = WeightedGridFunction::new(grid, inner, 1.0, phi.clone(), 0.0).unwrap();
    let composed = frac_integral(&phi, r1, &inner, 0.0, 1.0, 0).unwrap();
    let id = |s: f64| -> Result<f64> { Ok(s) };
    let direct = frac_integral(&phi, r1 + r2, Integrand::Callable(&id), 0.0, 1.0, 512).unwrap();
    assert!(rel(composed, direct) <= 1e-2, "{composed} {direct}");
    assert!(rel(direct, 1.0 / gamma(2.0 + r1 + r2).unwrap()) < 1e-12);
}

#[test]
fn parameter_errors() {
    let one = |_: f64| -> Result<f64> { Ok(1.0) };
    let phi = PhiFunction::Identity;
    assert!(matches!(frac_integral(&phi, 0.0, Integrand::Callable(&one), 0.0, 1.0, 8), Err(Error::Parameter(_))));
    assert!(matches!(frac_integral(&phi, 0.5, Integrand::Callable(&one), 1.0, 1.0, 8), Err(Error::Parameter(_))));
    assert!(matches!(frac_integral(&phi, 0.5, Integrand::Callable(&one), 0.0, 1.0, 1), Err(Error::Parameter(_))));
    let bad = |_: f64| -> Result<f64> { Err(Error::Domain("nope".into())) };
    assert!(matches!(frac_integral(&phi, 0.5, Integrand::Callable(&bad), 0.0, 1.0, 8), Err(Error::Evaluation(_))));
}

#[test]
fn derivative_of_the_homogeneous_solution_vanishes() {
    let phi = PhiFunction::Power(1.5);
    for &(rho, nu) in &[(0.5, 0.0), (0.5, 0.5), (0.7, 0.3), (0.3, 0.9)] {
        let sigma = rho + nu - rho * nu;
        let grid = uniform_in_phi(&phi, 0.0, 1.0, 128);
        let u = WeightedGridFunction::new(grid, vec![2.5; 129], sigma, phi.clone(), 0.0).unwrap();
        for &t in &[0.2, 0.5, 0.9] {
            let d = hilfer_derivative(&phi, rho, nu, &u, t).unwrap();
            assert!(d.abs() < 1e-10, "rho={rho} nu={nu} t={t}: {d}");
        }
    }
}

#[test]
fn near_first_order_recovers_the_classical_derivative() {
    let phi = PhiFunction::Identity;
    let grid = uniform_in_phi(&phi, 0.0, 1.0, 512);
    let u = WeightedGridFunction::from_raw(grid, 1.0, phi.clone(), 0.0, 0.0, |t| t * t).unwrap();
    for &t in &[0.25, 0.5, 0.8] {
        let d = hilfer_derivative(&phi, 0.999, 1.0, &u, t).unwrap();
        assert!((d - 2.0 * t).abs() < 1e-2, "t={t}: {d}");
    }
}

#[test]
fn caputo_type_kills_constants() {
    let phi = PhiFunction::Log;
    let grid = uniform_in_phi(&phi, 1.0, 2.0, 64);
    let u = WeightedGridFunction::new(grid, vec![-3.0; 65], 1.0, phi.clone(), 1.0).unwrap();
    let d = hilfer_derivative(&phi, 0.4, 1.0, &u, 1.5).unwrap();
    assert!(d.abs() < 1e-12, "{d}");
}

#[test]
fn caputo_derivative_of_a_power() {
    // D^rho y^2 (Caputo type) = Gamma(3)/Gamma(3-rho) y^(2-rho).
    let phi = PhiFunction::Identity;
    let rho = 0.6;
    let grid = uniform_in_phi(&phi, 0.0, 1.0, 1024);
    let u = WeightedGridFunction::from_raw(grid, 1.0, phi.clone(), 0.0, 0.0, |t| t * t).unwrap();
    let d = hilfer_derivative(&phi, rho, 1.0, &u, 0.75).unwrap();
    let exact = 2.0 / gamma(3.0 - rho).unwrap() * 0.75f64.powf(2.0 - rho);
    assert!(rel(d, exact) < 1e-3, "{d} {exact}");
}

#[test]
fn derivative_preconditions() {
    let phi = PhiFunction::Identity;
    let grid = uniform_in_phi(&phi, 0.0, 1.0, 16);
    let u = WeightedGridFunction::new(grid, vec![1.0; 17], 1.0, phi.clone(), 0.0).unwrap();
    assert!(matches!(hilfer_derivative(&phi, 0.5, 1.0, &u, 0.5), Err(Error::InsufficientGrid(_))));
    let grid = uniform_in_phi(&phi, 0.0, 1.0, 40);
    let u = WeightedGridFunction::new(grid, vec![1.0; 41], 1.0, phi.clone(), 0.0).unwrap();
    assert!(matches!(hilfer_derivative(&phi, 0.5, 1.0, &u, 1.0), Err(Error::OutOfRange(_))));
    assert!(matches!(hilfer_derivative(&phi, 1.0, 1.0, &u, 0.5), Err(Error::Parameter(_))));
}

#[test]
fn norm_examples() {
    let phi = PhiFunction::Identity;
    let w = |v: Vec<f64>| WeightedGridFunction::new(vec![0.0, 0.5, 1.0], v, 1.0, phi.clone(), 0.0).unwrap();
    assert_eq!(weighted_norm(&w(vec![0.0; 3])), 0.0);
    assert_eq!(weighted_norm(&w(vec![1.0, -3.0, 2.0])), 3.0);
    // Homogeneous solution u_a y^(sigma-1) / Gamma(sigma).
    let (sigma, ua) = (0.75, -1.7);
    let g = gamma(sigma).unwrap();
    let u = WeightedGridFunction::from_raw(vec![0.0, 0.3, 1.0], sigma, phi, 0.0, ua / g, |t: f64| {
        ua * t.powf(sigma - 1.0) / g
    })
    .unwrap();
    assert!(rel(weighted_norm(&u), ua.abs() / g) < 1e-15);
    assert_eq!(u.raw_value(0).unwrap(), None);
}

fn grid_fn(v: Vec<f64>) -> WeightedGridFunction {
    let n = v.len();
    let grid = (0..n).map(|i| i as f64).collect();
    WeightedGridFunction::new(grid, v, 0.5, PhiFunction::Identity, 0.0).unwrap()
}

proptest! {
    #[test]
    fn norm_is_absolutely_homogeneous(v in prop::collection::vec(-1e3f64..1e3, 1..40), c in -8.0f64..8.0) {
        // Powers of two keep the scaling exact.
        let c = c.round().exp2();
        let scaled: Vec<f64> = v.iter().map(|x| c * x).collect();
        prop_assert_eq!(weighted_norm(&grid_fn(scaled)), c.abs() * weighted_norm(&grid_fn(v)));
    }

    #[test]
    fn norm_triangle_inequality(pairs in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 1..40)) {
        let (a, b): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let s: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let lhs = weighted_norm(&grid_fn(s));
        prop_assert!(lhs <= weighted_norm(&grid_fn(a)) + weighted_norm(&grid_fn(b)));
    }
}
