//! Gamma and Mittag-Leffler values against frozen high-precision references.

use phi_hilfer::special::{erfc, gamma, mittag_leffler, mittag_leffler_two};
use phi_hilfer::Error;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

// Reference values computed with 30-digit arithmetic.
const GAMMA_TABLE: &[(f64, f64)] = &[
    (0.001, 999.4237724845954453),
    (0.1, 9.5135076986687312858),
    (0.35, 2.5461469772122881955),
    (0.85, 1.1124837369484652673),
    (1.3, 0.89747069630627718175),
    (1.5, 0.88622692545275801365),
    (2.3, 1.1667119051981602207),
    (3.7, 4.1706517837966040301),
    (4.75, 16.586206539225939611),
    (7.5, 1871.2543057977883465),
    (9.99, 354802.01701983109757),
    (12.2, 65173808.940559836581),
    (19.9, 90406140079547518.549),
    (25.5, 3.0867705405286967828e+24),
    (30.0, 8.8417619937397019545e+30),
    (44.4, 2.7374262605708471049e+53),
    (60.7, 2.4320377443305219115e+81),
    (99.5, 9.3678021146559965913e+154),
    (141.3, 5.9367964565472388482e+241),
    (170.6, 9.2959959535009177129e+305),
];

#[test]
fn gamma_matches_reference_table() {
    for &(x, g) in GAMMA_TABLE {
        let got = gamma(x).unwrap();
        assert!(rel(got, g) <= 1e-14, "gamma({x}) = {got}, rel {:e}", rel(got, g));
    }
    assert_eq!(gamma(1.0).unwrap(), 1.0);
    assert_eq!(gamma(6.0).unwrap(), 120.0);
    assert!(rel(gamma(0.5).unwrap(), 1.7724538509055160273) < 1e-14);
}

#[test]
fn gamma_at_2_3_matches_integral_oracle() {
    // Adaptive quadrature of the Euler integral of t^1.3 e^-t.
    assert!(rel(gamma(2.3).unwrap(), 1.1667119051981603761) < 1e-13);
}

#[test]
fn gamma_domain() {
    assert!(matches!(gamma(0.0), Err(Error::Domain(_))));
    assert!(matches!(gamma(-2.5), Err(Error::Domain(_))));
}

#[test]
fn exponential_reduction() {
    for i in 0..41 {
        let z = -3.0 + 0.15 * i as f64;
        assert!(rel(mittag_leffler(1.0, z).unwrap(), z.exp()) <= 1e-10);
        assert!(rel(mittag_leffler_two(1.0, 1.0, z).unwrap(), z.exp()) <= 1e-10);
    }
}

#[test]
fn half_order_closed_form() {
    let v = mittag_leffler(0.5, 1.0).unwrap();
    assert!(rel(v, 5.0089800807622834663) <= 1e-12);
    for &z in &[-4.0f64, -1.5, -0.3, 0.2, 1.0, 2.5] {
        let oracle = (z * z).exp() * erfc(-z);
        assert!(rel(mittag_leffler(0.5, z).unwrap(), oracle) <= 1e-8, "z={z}");
    }
    // Large negative argument: e^{2500} erfc(50) evaluated in 40 digits.
    assert!(rel(mittag_leffler(0.5, -50.0).unwrap(), 0.0112815362653237725) <= 1e-10);
}

#[test]
fn zero_argument() {
    for &r in &[0.1, 0.5, 0.9, 1.0, 1.7, 2.0] {
        assert_eq!(mittag_leffler(r, 0.0).unwrap(), 1.0);
    }
    for &b in &[0.5, 2.0, 3.3] {
        assert!(rel(mittag_leffler_two(0.7, b, 0.0).unwrap(), 1.0 / gamma(b).unwrap()) < 1e-15);
    }
}

#[test]
fn two_parameter_closed_form() {
    assert!(rel(mittag_leffler_two(1.0, 2.0, 1.0).unwrap(), 1.7182818284590452354) <= 1e-12);
    for &z in &[-2.0f64, -0.5, 0.5, 3.0] {
        let exact = (z.exp() - 1.0) / z;
        assert!(rel(mittag_leffler_two(1.0, 2.0, z).unwrap(), exact) <= 1e-12);
    }
}

// Series sums in 200-digit arithmetic.
const ML_TABLE: &[(f64, f64, f64, f64)] = &[
    (0.7, 1.0, 1.0, 3.7041461454375862416),
    (0.7, 1.0, 0.85, 2.9616718807523645279),
    (0.5, 1.0, 10.0, 5.3762342836322708968e+43),
    (0.4, 1.0, -10.0, 0.0648271692110446595),
    (0.4, 1.0, -1.0, 0.442063359685223502),
    (0.6, 1.0, -1.0, 0.41332734094310630052),
    (0.6, 1.0, -5.0, 0.0951178464387546203),
    (0.8, 1.0, -30.0, 0.00757586079921920865),
    (0.3, 1.0, -2.0, 0.290232226167875355),
    (0.35, 1.0, -3.0, 0.204229083488180129),
    (0.9, 1.0, -20.0, 0.00574950781610911258),
    (0.7, 1.0, -40.0, 0.00852617023091074438),
    (0.6, 0.6, -3.0, 0.0316939265615570265),
    (0.7, 1.2, -8.0, 0.0728990010072976085),
    (1.5, 1.0, 5.0, 12.457289126443951234),
];

#[test]
fn reference_table() {
    for &(r, b, z, v) in ML_TABLE {
        let got = mittag_leffler_two(r, b, z).unwrap();
        assert!(rel(got, v) <= 1e-10, "E_{{{r},{b}}}({z}) = {got}, expected {v}");
    }
}

#[test]
fn order_above_one_negative_axis() {
    let got = mittag_leffler(1.5, -10.0).unwrap();
    assert!(rel(got, -0.109713054252740147) <= 1e-9, "{got}");
}

#[test]
fn monotone_on_nonnegative_axis() {
    for &r in &[0.3, 0.5, 0.8, 1.0] {
        let mut prev = mittag_leffler(r, 0.0).unwrap();
        for i in 1..=400 {
            let z = 20.0 * i as f64 / 400.0;
            // Past z^(1/rho) ~ 709 the value itself is beyond f64.
            let v = match mittag_leffler(r, z) {
                Err(Error::Overflow(_)) if z.powf(1.0 / r) > 700.0 => break,
                other => other.unwrap(),
            };
            assert!(v > prev, "rho={r} z={z}");
            prev = v;
        }
    }
}

#[test]
fn series_asymptotic_switch_is_continuous() {
    for &r in &[0.3, 0.5, 0.75, 1.2, 2.0] {
        let zs = 40f64.powf(r);
        let below = mittag_leffler(r, zs * (1.0 - 1e-12)).unwrap();
        let above = mittag_leffler(r, zs * (1.0 + 1e-12)).unwrap();
        assert!(((below - above) / above).abs() <= 1e-8, "rho={r}: {below} {above}");
    }
}

#[test]
fn one_and_two_parameter_forms_agree() {
    for i in 0..100 {
        let z = -8.0 + 0.16 * i as f64;
        for &r in &[0.4, 0.75] {
            let a = mittag_leffler(r, z).unwrap();
            let b = mittag_leffler_two(r, 1.0, z).unwrap();
            assert!(((a - b) / b).abs() <= 1e-12);
        }
    }
}

#[test]
fn overflow_and_parameter_errors() {
    assert!(matches!(mittag_leffler(0.5, 1e3), Err(Error::Overflow(_))));
    assert!(matches!(mittag_leffler(1.0, 1e3), Err(Error::Overflow(_))));
    assert!(matches!(mittag_leffler(0.0, 1.0), Err(Error::Parameter(_))));
    assert!(matches!(mittag_leffler(2.5, 1.0), Err(Error::Parameter(_))));
    assert!(matches!(mittag_leffler_two(0.5, 0.0, 1.0), Err(Error::Parameter(_))));
}
