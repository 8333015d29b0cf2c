//! Property tests for the numerical fluxes and the viscous coefficient `R`.

use nwave_core::flux::{homogeneity_degree, sumcons_hypotheses, viscous_r};
use nwave_core::{FluxFn, NumericalFlux, Rule};
use proptest::prelude::*;

const DX: f64 = 0.1;
const DT: f64 = 0.05;
const LAMBDA: f64 = DT / DX;

fn burgers(rule: Rule) -> NumericalFlux {
    NumericalFlux::burgers(rule, LAMBDA).unwrap()
}

fn rule() -> impl Strategy<Value = Rule> {
    prop_oneof![Just(Rule::LaxFriedrichs), Just(Rule::EngquistOsher), Just(Rule::Godunov)]
}

fn flux_fn() -> impl Strategy<Value = FluxFn> {
    prop_oneof![Just(FluxFn::Burgers), Just(FluxFn::OddBurgers)]
}

/// `R` written out per scheme, independently of any flux evaluation.
fn r_closed_form(rule: Rule, u: f64, v: f64) -> f64 {
    let eo = (v * v.abs() - u * u.abs()) / (4.0 * DX);
    match rule {
        Rule::LaxFriedrichs => (v - u) / (2.0 * DT),
        Rule::EngquistOsher => eo,
        Rule::Godunov => {
            if v <= 0.0 && 0.0 <= u {
                let d = u.abs() - v.abs();
                let sign = if d > 0.0 { 1.0 } else if d < 0.0 { -1.0 } else { 0.0 };
                sign * (v * v - u * u) / (4.0 * DX)
            } else {
                eo
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn consistency(rule in rule(), f in flux_fn(), s in -1.0f64..=1.0) {
        let u = s / LAMBDA;
        let g = NumericalFlux::new(rule, f, LAMBDA).unwrap();
        let fu = f.f(u);
        prop_assert!((g.eval(u, u) - fu).abs() <= 1e-14 * fu.abs().max(1.0));
    }

    #[test]
    fn monotone_on_cfl_box(rule in rule(), f in flux_fn(), a in -1.0f64..=1.0, b in -1.0f64..=1.0) {
        let g = NumericalFlux::new(rule, f, LAMBDA).unwrap();
        let (u, v) = (a / LAMBDA, b / LAMBDA);
        let h = 1e-6 / LAMBDA;
        let du = (g.eval((u + h).min(1.0 / LAMBDA), v) - g.eval(u, v)) / h;
        let dv = (g.eval(u, (v + h).min(1.0 / LAMBDA)) - g.eval(u, v)) / h;
        prop_assert!(du >= -1e-12, "dg/du = {du}");
        prop_assert!(dv <= 1e-12, "dg/dv = {dv}");
    }

    #[test]
    fn viscous_r_matches_closed_forms(rule in rule(), a in -1.0f64..=1.0, b in -1.0f64..=1.0) {
        let (u, v) = (a / LAMBDA, b / LAMBDA);
        let r = viscous_r(u, v, &burgers(rule), DX);
        let expected = r_closed_form(rule, u, v);
        prop_assert!((r - expected).abs() <= 1e-14 * expected.abs().max(1.0), "{r} vs {expected}");
    }

    #[test]
    fn viscous_r_is_homogeneous(rule in rule(), a in -0.1f64..=0.1, b in -0.1f64..=0.1) {
        let g = burgers(rule);
        let alpha = homogeneity_degree(&g).unwrap().round();
        let base = viscous_r(a, b, &g, DX);
        for mu in [0.5, 2.0, 10.0] {
            let scaled = viscous_r(mu * a, mu * b, &g, DX);
            let expected = mu.powf(alpha) * base;
            prop_assert!((scaled - expected).abs() <= 1e-12 * expected.abs().max(1e-300) + 1e-15,
                "mu = {mu}: {scaled} vs {expected}");
        }
    }

    #[test]
    fn viscous_r_is_nonnegative_across_increasing_jumps(rule in rule(), a in -1.0f64..=1.0, b in -1.0f64..=1.0) {
        // monotone fluxes dissipate: R(u, v)(v - u) >= 0
        let (u, v) = (a / LAMBDA, b / LAMBDA);
        let r = viscous_r(u, v, &burgers(rule), DX);
        prop_assert!(r * (v - u) >= -1e-12);
    }
}

#[test]
fn homogeneity_degrees_are_exact() {
    assert_eq!(homogeneity_degree(&burgers(Rule::LaxFriedrichs)).unwrap().round(), 1.0);
    assert_eq!(homogeneity_degree(&burgers(Rule::EngquistOsher)).unwrap().round(), 2.0);
    assert_eq!(homogeneity_degree(&burgers(Rule::Godunov)).unwrap().round(), 2.0);
    for rule in Rule::ALL {
        let a = homogeneity_degree(&burgers(rule)).unwrap();
        assert!((a - a.round()).abs() < 1e-10, "{rule}: {a}");
    }
}

#[test]
fn mass_invariant_hypotheses_hold_for_upwind_schemes_only() {
    for rule in Rule::ALL {
        let rep = sumcons_hypotheses(&burgers(rule), LAMBDA, 201).unwrap();
        match rule {
            Rule::LaxFriedrichs => {
                assert!(!rep.zero_flux_holds);
                // only (0, 0) satisfies g = 0
                assert_eq!(rep.zero_flux_satisfied, 1);
            }
            _ => assert!(rep.all_hold(), "{rule}: {rep:?}"),
        }
    }
}
