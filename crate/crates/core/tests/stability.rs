mod common;

use approx::assert_relative_eq;
use phi_hilfer::bounds::{apriori_factor, ic_dependence_bound};
use phi_hilfer::phi::PhiFunction;
use phi_hilfer::solver::{FractionalOrder, ImpulseMap, ImpulsiveProblem, Rhs, SolverConfig, TimeFunction};
use phi_hilfer::special::gamma;
use phi_hilfer::stability::*;

fn config() -> SolverConfig {
    SolverConfig::new(128, 1e-12, 500)
}

fn waveforms() -> [Waveform; 3] {
    [Waveform::Constant, Waveform::Sine { omega: 6.0 }, Waveform::Random { pieces: 16, seed: Some(7) }]
}

fn show(label: &str, r: &BoundReport) {
    println!(
        "{label}: empirical {:.3e} bound {:.3e} margin {:.3e} slack {:.1e}",
        r.empirical_quantity, r.theoretical_bound, r.margin, r.numerical_slack
    );
}

#[test]
fn perturbation_is_pure_and_constructive() {
    let problem = common::reference_problem();
    let before = serde_json::to_string(&problem).unwrap();
    let spec = PerturbationSpec::uh(0.1, Waveform::Constant).with_impulse_signs(vec![-1.0]);
    let p = perturb_problem(&problem, &spec).unwrap();
    assert_eq!(serde_json::to_string(&problem).unwrap(), before);
    let phi = &problem.phi;
    for (t, u) in [(0.1, 0.0), (0.4, -2.0), (0.9, 5.0)] {
        assert_relative_eq!(p.rhs.eval(t, u, phi).unwrap() - problem.rhs.eval(t, u, phi).unwrap(), 0.1, max_relative = 1e-12);
    }
    let dj = p.impulse_maps[0].eval(0.7, phi).unwrap() - problem.impulse_maps[0].eval(0.7, phi).unwrap();
    assert_relative_eq!(dj, -0.1, max_relative = 1e-12);

    let theta = TimeFunction::parse("phi(t) - phi(0) + 1").unwrap();
    let spec = PerturbationSpec::uhr_scaled(0.01, 0.5, theta, Waveform::Constant);
    let p = perturb_problem(&problem, &spec).unwrap();
    for t in [0.0, 0.3, 1.0] {
        let d = p.rhs.eval(t, 0.2, phi).unwrap() - problem.rhs.eval(t, 0.2, phi).unwrap();
        assert_relative_eq!(d.abs(), 0.01 * (t + 1.0), max_relative = 1e-12);
    }
}

#[test]
fn perturbation_spec_errors() {
    let problem = common::reference_problem();
    let bad_signs = PerturbationSpec::uh(0.1, Waveform::Constant).with_impulse_signs(vec![1.0, 1.0]);
    assert!(perturb_problem(&problem, &bad_signs).is_err());
    let mut no_theta = PerturbationSpec::uh(0.1, Waveform::Constant);
    no_theta.mode = PerturbationMode::UhrScaled;
    assert!(perturb_problem(&problem, &no_theta).is_err());
    let loud = PerturbationSpec::uh(0.1, Waveform::Expr("2*sin(t)+1".into()));
    assert!(perturb_problem(&problem, &loud).is_err());
    assert!(check_uh(&problem, &PerturbationSpec::ic_shift(1.0), &config()).is_err());
    assert!(check_order_dependence(&problem, 0.7, &config()).is_err());
}

#[test]
fn random_waveform_is_reproducible() {
    let w = Waveform::Random { pieces: 8, seed: Some(3) };
    let phi = PhiFunction::Identity;
    let (f, g) = (w.build(&phi, 0.0, 1.0).unwrap(), w.build(&phi, 0.0, 1.0).unwrap());
    let other = Waveform::Random { pieces: 8, seed: Some(4) }.build(&phi, 0.0, 1.0).unwrap();
    let mut differs = false;
    for i in 0..=50 {
        let t = i as f64 / 50.0;
        let v = f.eval(t, &phi).unwrap();
        assert!(v.abs() <= 1.0);
        assert_eq!(v, g.eval(t, &phi).unwrap());
        differs |= v != other.eval(t, &phi).unwrap();
    }
    assert!(differs);
}

#[test]
fn zero_perturbation_reproduces_solution() {
    let problem = common::reference_problem();
    let r = check_uh(&problem, &PerturbationSpec::uh(0.0, Waveform::Constant), &config()).unwrap();
    assert_eq!(r.empirical_quantity, 0.0);
    assert!(r.pass);
}

#[test]
fn ulam_hyers_certificates() {
    let problem = common::reference_problem();
    for wave in waveforms() {
        let mut last = None;
        for eps in [1e-2, 1e-1] {
            let r = check_uh(&problem, &PerturbationSpec::uh(eps, wave.clone()), &config()).unwrap();
            show(&format!("uh {wave:?} {eps}"), &r);
            assert!(r.pass && r.margin > 0.0);
            if let Some(prev) = last {
                let ratio = r.empirical_quantity / prev;
                assert!((5.0..=20.0).contains(&ratio), "ratio {ratio}");
            }
            last = Some(r.empirical_quantity);
        }
    }
}

#[test]
fn envelope_scaling_band() {
    let problem = common::reference_problem();
    let e1 = check_uh(&problem, &PerturbationSpec::uh(0.01, Waveform::Constant), &config()).unwrap();
    let e2 = check_uh(&problem, &PerturbationSpec::uh(0.02, Waveform::Constant), &config()).unwrap();
    let ratio = e2.empirical_quantity / e1.empirical_quantity;
    assert!((0.5..=4.0).contains(&ratio), "{ratio}");
}

#[test]
fn rassias_certificates() {
    let problem = common::reference_problem();
    let spec = PerturbationSpec::uhr_scaled(0.05, 1.0, TimeFunction::constant(1.0), Waveform::Sine { omega: 4.0 });
    let r = check_uhr(&problem, &spec, &config()).unwrap();
    show("uhr const", &r);
    assert!(r.pass && r.margin > 0.0 && r.per_node);

    let theta = TimeFunction::parse("1 + phi(t)").unwrap();
    let spec = PerturbationSpec::uhr_scaled(0.05, 0.2, theta.clone(), Waveform::Constant);
    let r = check_uhr(&problem, &spec, &config()).unwrap();
    show("uhr growing", &r);
    assert!(r.pass && r.margin > 0.0);

    let r = check_uhr(&problem, &PerturbationSpec::uhr_pair(0.2, theta.clone(), Waveform::Constant), &config()).unwrap();
    show("uhr pair", &r);
    assert!(r.pass && r.parameters["epsilon"] == 1.0);

    let zero = PerturbationSpec::uhr_scaled(0.0, 0.2, theta, Waveform::Constant);
    assert!(check_uhr(&problem, &zero, &config()).unwrap().pass);

    let falling = PerturbationSpec::uhr_scaled(0.1, 0.2, TimeFunction::parse("2 - t").unwrap(), Waveform::Constant);
    assert!(check_uhr(&problem, &falling, &config()).is_err());
}

#[test]
fn initial_condition_certificates() {
    let problem = common::reference_problem();
    for dv in [0.0, 0.1, 0.5, 1.0] {
        let r = check_ic_dependence(&problem, problem.u_a + dv, &config()).unwrap();
        show(&format!("ic {dv}"), &r);
        assert!(r.pass);
    }
    // Homogeneous problem: the difference is exactly |u_a - v_a| / Gamma(sigma).
    let order = FractionalOrder::new(0.6, 0.4).unwrap();
    let homog = ImpulsiveProblem::new(order, PhiFunction::Identity, 0.0, 1.0, 1.0, Rhs::zero())
        .unwrap()
        .with_impulse(0.5, ImpulseMap::constant(0.3))
        .unwrap();
    let r = check_ic_dependence(&homog, 1.7, &config()).unwrap();
    let exact = 0.7 / gamma(order.sigma).unwrap();
    assert_relative_eq!(r.empirical_quantity, exact, max_relative = 1e-12);
    let factor = apriori_factor(1, 0.6, order.sigma, &PhiFunction::Identity, 0.0, 1.0).unwrap();
    assert_relative_eq!(r.theoretical_bound / r.empirical_quantity, factor, max_relative = 1e-6);
    assert_eq!(r.theoretical_bound, ic_dependence_bound(0.7, 1, 0.6, order.sigma, &PhiFunction::Identity, 0.0, 1.0).unwrap());
}

#[test]
fn data_certificates() {
    let problem = common::reference_problem();
    let same = check_data_dependence(&problem, &problem.clone(), &config()).unwrap();
    assert_eq!(same.empirical_quantity, 0.0);
    assert!(same.pass);

    let spec = PerturbationSpec::data_shift(0.0, 0.05, 0.02, Waveform::Constant);
    let shifted = perturb_problem(&problem, &spec).unwrap();
    let r = check_data_dependence(&problem, &shifted, &config()).unwrap();
    show("data", &r);
    assert!(r.pass && r.margin > 0.0);
    assert_relative_eq!(r.parameters["eps_f"], 0.05, max_relative = 1e-2);
    assert_relative_eq!(r.parameters["eps_J"], 0.02, max_relative = 1e-2);

    let spec = PerturbationSpec::data_shift(0.3, 0.05, 0.0, Waveform::Sine { omega: 3.0 });
    let r = check_data_dependence(&problem, &perturb_problem(&problem, &spec).unwrap(), &config()).unwrap();
    assert!(r.pass);
    assert_relative_eq!(r.parameters["delta_a"], 0.3, max_relative = 1e-12);
}

#[test]
fn order_certificates() {
    let problem = common::reference_problem();
    for delta in [0.05, 0.1] {
        let r = check_order_dependence(&problem, delta, &config()).unwrap();
        show(&format!("order {delta}"), &r);
        assert!(r.pass && r.per_node);
    }
    let r = check_order_dependence(&problem, 1e-6, &config()).unwrap();
    show("order tiny", &r);
    assert!(r.pass);
    assert!(r.empirical_quantity < 1e-3);
    assert!(r.curve.iter().all(|n| n.theoretical < 1e-3));

    // Caputo type with f = 0: both solutions are the same constant.
    let order = FractionalOrder::new(0.7, 1.0).unwrap();
    let flat = ImpulsiveProblem::new(order, PhiFunction::Identity, 0.0, 1.0, 1.0, Rhs::zero()).unwrap();
    let r = check_order_dependence(&flat, 0.1, &config()).unwrap();
    assert!(r.empirical_quantity < 1e-14 && r.pass);
}

#[test]
fn scaled_report_fails() {
    let problem = common::reference_problem();
    let r = check_uh(&problem, &PerturbationSpec::uh(0.1, Waveform::Constant), &config()).unwrap();
    let broken = r.clone().scaled(1e-6);
    assert!(r.pass && !broken.pass);
}
