//! Property tests for the similarity-variable map and stepper.

use nwave_core::similarity::{
    discrete_steady_slope, from_similarity, reconstruct_physical, sim_flux_eo, sim_flux_godunov_rate, sim_flux_lf,
    sim_run, sim_step_with, to_similarity, GodunovForm, SimilarityState,
};
use nwave_core::{Grid1D, GridFunction, Rule};
use proptest::prelude::*;

const DXI: f64 = 0.05;
const DS: f64 = 0.0025;

fn rule() -> impl Strategy<Value = Rule> {
    prop_oneof![Just(Rule::LaxFriedrichs), Just(Rule::EngquistOsher), Just(Rule::Godunov)]
}

/// Block of values in the middle of a ξ-grid on [-10, 10].
fn state(block: &[f64], s: f64) -> SimilarityState {
    let n = (20.0 / DXI) as usize;
    let mut w = vec![0.0; n];
    let start = n / 2 - block.len() / 2;
    w[start..start + block.len()].copy_from_slice(block);
    let g = Grid1D::new(-10.0, DXI, n).unwrap();
    SimilarityState::new(GridFunction::new(g, w).unwrap(), s, DS).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn map_round_trip(t in 0.0f64..1e6, x in -1e3f64..1e3, u in -10.0f64..10.0) {
        let (s, xi, w) = to_similarity(t, x, u);
        let (t2, x2, u2) = from_similarity(s, xi, w);
        prop_assert!((t2 - t).abs() <= 1e-14 * t.max(1.0) * 4.0);
        prop_assert!((x2 - x).abs() <= 1e-14 * x.abs().max(1.0));
        prop_assert!((u2 - u).abs() <= 1e-14 * u.abs().max(1.0));
    }

    #[test]
    fn fluxes_vanish_on_the_zero_state(xi in -10.0f64..10.0, ds in 1e-4f64..0.1) {
        prop_assert_eq!(sim_flux_eo(0.0, 0.0, xi), 0.0);
        prop_assert_eq!(sim_flux_godunov_rate(0.0, 0.0, xi, ds), 0.0);
        prop_assert_eq!(sim_flux_lf(0.0, 0.0, xi, ds, DXI), 0.0);
    }

    #[test]
    fn godunov_rate_flux_tends_to_eo(wl in -2.0f64..2.0, wr in -2.0f64..2.0, xi in -5.0f64..5.0) {
        // as Δs → 0 the rate form approaches the flux of w²/2 - ξw/2, and the
        // Godunov and EO fluxes of that flux agree whenever wl <= wr
        let g = sim_flux_godunov_rate(wl, wr, xi, 1e-7);
        let h = |w: f64| 0.5 * w * w - 0.5 * xi * w;
        let exact = if wl <= wr {
            let sonic = 0.5 * xi;
            if wl <= sonic && sonic <= wr { h(sonic) } else { h(wl).min(h(wr)) }
        } else {
            h(wl).max(h(wr))
        };
        prop_assert!((g - exact).abs() <= 1e-5 * (1.0 + exact.abs()), "{g} vs {exact}");
    }

    #[test]
    fn mass_is_conserved_in_xi(rule in rule(), block in prop::collection::vec(-1.0f64..1.0, 1..30)) {
        let mut st = state(&block, 0.0);
        let m0 = st.mass();
        let scale = st.w.values().iter().map(|v| v.abs()).sum::<f64>() * DXI;
        for _ in 0..100 {
            st = sim_step_with(&st, rule, GodunovForm::Rate).unwrap();
            prop_assert!((st.mass() - m0).abs() <= 1e-12 * scale.max(1e-300));
        }
    }

    #[test]
    fn reconstruction_preserves_mass(block in prop::collection::vec(-1.0f64..1.0, 1..30), s in 0.0f64..8.0) {
        // ∫u dx = ∫w dξ for every s
        let st = state(&block, s);
        let (t, u) = reconstruct_physical(&st);
        prop_assert!((t - s.exp_m1()).abs() <= 1e-12 * t.max(1.0));
        prop_assert!((u.integral() - st.mass()).abs() <= 1e-12 * st.mass().abs().max(1.0));
    }
}

fn fitted_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Least-squares slopes of the two branches `-1 < ξ < -0.1` and `0.1 < ξ < 1`
/// of a relaxed single N-wave. The sonic point at `ξ = 0` opens a half-cell
/// gap between the branches, so they are fitted separately.
fn relaxed_branch_slopes(rule: Rule, dxi: f64, ds: f64) -> (f64, f64) {
    let n = (5.0 / dxi).round() as usize;
    let g = Grid1D::new(-2.5, dxi, n).unwrap();
    let w0 = GridFunction::from_fn(g, |xi| if xi > -1.5 && xi < 1.5 { xi } else { 0.0 }).unwrap();
    let st = SimilarityState::new(w0, 0.0, ds).unwrap();
    let end = sim_run(st, rule, GodunovForm::Rate, 12.0, |_| {}).unwrap();
    let pts: Vec<(f64, f64)> = g.centers().zip(end.w.values().iter().copied()).collect();
    let branch = |lo: f64, hi: f64| -> Vec<(f64, f64)> { pts.iter().copied().filter(|p| p.0 > lo && p.0 < hi).collect() };
    (fitted_slope(&branch(-1.0, -0.1)), fitted_slope(&branch(0.1, 1.0)))
}

#[test]
fn godunov_settles_on_the_discrete_steady_slope() {
    for &(dxi, ds) in &[(0.02, 0.01), (0.01, 0.005)] {
        let target = discrete_steady_slope(ds);
        let (left, right) = relaxed_branch_slopes(Rule::Godunov, dxi, ds);
        for slope in [left, right] {
            assert!((slope - target).abs() <= 1e-4, "Δξ = {dxi}: {slope} vs {target}");
        }
    }
}

#[test]
fn eo_settles_on_slope_one() {
    let (left, right) = relaxed_branch_slopes(Rule::EngquistOsher, 0.02, 0.01);
    assert!((left - 1.0).abs() <= 1e-4 && (right - 1.0).abs() <= 1e-4, "{left}, {right}");
}
