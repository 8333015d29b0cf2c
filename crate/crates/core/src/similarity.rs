//! Burgers' equation in similarity variables
//!
//!   s = ln(t+1),  ξ = x/√(t+1),  w = √(t+1) u,
//!
//! which turns it into `w_s + (w²/2 - ξw/2)_ξ = 0`. Self-similar profiles
//! become steady states and supports stay bounded, so a fixed ξ-grid covers
//! arbitrarily long physical times.

use crate::error::{Error, Result};
use crate::flux::Rule;
use crate::grid::{Grid1D, GridFunction, Piece, PiecewiseFn};

/// `(t, x, u) -> (s, ξ, w)`.
pub fn to_similarity(t: f64, x: f64, u: f64) -> (f64, f64, f64) {
    let r = (t + 1.0).sqrt();
    (t.ln_1p(), x / r, r * u)
}

/// `(s, ξ, w) -> (t, x, u)`.
pub fn from_similarity(s: f64, xi: f64, w: f64) -> (f64, f64, f64) {
    let r = (0.5 * s).exp();
    (s.exp_m1(), xi * r, w / r)
}

/// Wave speed of the similarity flux `w²/2 - ξw/2`.
#[inline]
pub fn wave_speed(w: f64, xi: f64) -> f64 {
    w - 0.5 * xi
}

/// Time-integrated flux `I(w, ξ) = ½w²(e^{Δs} - 1) - ξw(e^{Δs/2} - 1)`.
#[inline]
pub fn integrated_flux(w: f64, xi: f64, ds: f64) -> f64 {
    0.5 * w * w * ds.exp_m1() - xi * w * (0.5 * ds).exp_m1()
}

/// Godunov flux in the published case form: upwind `I` selected by the
/// signs of `h = w - ξ̄/2`, and `-3ξ̄²/8` in the transonic case. Ties
/// `h = 0` fall into the one-sided cases.
pub fn sim_flux_godunov(wl: f64, wr: f64, xi_bar: f64, ds: f64) -> f64 {
    let (hl, hr) = (wave_speed(wl, xi_bar), wave_speed(wr, xi_bar));
    if hl < 0.0 && hr > 0.0 {
        -3.0 * xi_bar * xi_bar / 8.0
    } else if hl + hr > 0.0 && hl > 0.0 {
        integrated_flux(wl, xi_bar, ds)
    } else if hl + hr <= 0.0 && hr <= 0.0 {
        integrated_flux(wr, xi_bar, ds)
    } else if hl + hr > 0.0 {
        // hl = 0 < hr, or hl <= 0 with a stronger right state
        integrated_flux(wl, xi_bar, ds)
    } else {
        integrated_flux(wr, xi_bar, ds)
    }
}

/// Exact Godunov flux of the rate `I(·, ξ̄)/Δs`: minimum over `[wl, wr]`
/// when `wl <= wr`, maximum over `[wr, wl]` otherwise. Its sonic value is
/// `min_w I/Δs`, and it reduces to the Engquist-Osher rate as `Δs -> 0`.
pub fn sim_flux_godunov_rate(wl: f64, wr: f64, xi_bar: f64, ds: f64) -> f64 {
    RateCoefficients::new(ds).flux(wl, wr, xi_bar)
}

/// `Δs`-dependent constants of the rate-form Godunov flux.
#[derive(Debug, Clone, Copy)]
struct RateCoefficients {
    /// `(e^{Δs} - 1)/(2Δs)`
    quad: f64,
    /// `(e^{Δs/2} - 1)/Δs`
    lin: f64,
    /// `1/(e^{Δs/2} + 1)`, the sonic point as a fraction of `ξ̄`
    sonic: f64,
}

impl RateCoefficients {
    fn new(ds: f64) -> Self {
        Self { quad: 0.5 * ds.exp_m1() / ds, lin: (0.5 * ds).exp_m1() / ds, sonic: 1.0 / ((0.5 * ds).exp() + 1.0) }
    }

    #[inline]
    fn flux(&self, wl: f64, wr: f64, xi_bar: f64) -> f64 {
        let f = |w: f64| self.quad * w * w - self.lin * xi_bar * w;
        if wl <= wr {
            let sonic = self.sonic * xi_bar;
            if sonic > wl && sonic < wr {
                f(sonic)
            } else {
                f(wl).min(f(wr))
            }
        } else {
            f(wl).max(f(wr))
        }
    }
}

/// Lax-Friedrichs flux in similarity variables.
pub fn sim_flux_lf(wl: f64, wr: f64, xi_bar: f64, ds: f64, dxi: f64) -> f64 {
    (wl * wl - xi_bar * wl + wr * wr - xi_bar * wr) / 4.0 - dxi / ds * (wr - wl) / 2.0
}

/// Engquist-Osher flux in similarity variables.
pub fn sim_flux_eo(wl: f64, wr: f64, xi_bar: f64) -> f64 {
    let a = wave_speed(wl, xi_bar);
    let b = wave_speed(wr, xi_bar);
    a * (a + a.abs()) / 4.0 + b * (b - b.abs()) / 4.0 - xi_bar * xi_bar / 8.0
}

/// How the Godunov update uses the integrated flux `I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GodunovForm {
    /// Exact Godunov flux of `I/Δs` inside `w -= (Δs/Δξ)(g₊ - g₋)`.
    #[default]
    Rate,
    /// [`sim_flux_godunov`] inside `w -= (Δs/Δξ)(g₊ - g₋)`. The extra `Δs`
    /// slows the dynamics by a factor of about `Δs`.
    Literal,
}

/// Discrete solution on a fixed ξ-grid at similarity time `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityState {
    pub n: u64,
    pub s: f64,
    pub ds: f64,
    pub w: GridFunction,
}

impl SimilarityState {
    pub fn new(w: GridFunction, s: f64, ds: f64) -> Result<Self> {
        if !(ds > 0.0) || !ds.is_finite() {
            return Err(Error::InvalidArgument(format!("ds must be positive, got {ds}")));
        }
        if !(s >= 0.0) || !s.is_finite() {
            return Err(Error::InvalidArgument(format!("s must be nonnegative, got {s}")));
        }
        Ok(Self { n: 0, s, ds, w })
    }

    pub fn xi_grid(&self) -> &Grid1D {
        self.w.grid()
    }

    /// Physical time `e^s - 1`.
    pub fn t(&self) -> f64 {
        self.s.exp_m1()
    }

    /// `Δξ Σ w_j`, equal to the physical mass.
    pub fn mass(&self) -> f64 {
        self.w.dx() * self.w.values().iter().sum::<f64>()
    }

    /// `(Δs/Δξ) max_j |w_j - ξ_j/2|`; must not exceed 1.
    pub fn cfl_margin(&self) -> f64 {
        let g = self.xi_grid();
        let vmax = self
            .w
            .values()
            .iter()
            .enumerate()
            .map(|(j, &w)| wave_speed(w, g.center(j)).abs())
            .fold(0.0, f64::max);
        self.ds / g.dx() * vmax
    }
}

fn interface_flux(
    rule: Rule,
    form: GodunovForm,
    rate: &RateCoefficients,
    wl: f64,
    wr: f64,
    xi_bar: f64,
    ds: f64,
    dxi: f64,
) -> f64 {
    match rule {
        Rule::LaxFriedrichs => sim_flux_lf(wl, wr, xi_bar, ds, dxi),
        Rule::EngquistOsher => sim_flux_eo(wl, wr, xi_bar),
        Rule::Godunov => match form {
            GodunovForm::Rate => rate.flux(wl, wr, xi_bar),
            GodunovForm::Literal => sim_flux_godunov(wl, wr, xi_bar, ds),
        },
    }
}

/// One step of `w_j -= (Δs/Δξ)(g_{j+1/2} - g_{j-1/2})` with zero ghost cells.
pub fn sim_step_with(state: &SimilarityState, rule: Rule, form: GodunovForm) -> Result<SimilarityState> {
    let margin = state.cfl_margin();
    if !(margin <= 1.0 + 1e-12) {
        return Err(Error::CflViolation { step: state.n, margin });
    }
    let g = state.xi_grid();
    let (ds, dxi) = (state.ds, g.dx());
    let ratio = ds / dxi;
    let w = state.w.values();
    let n = w.len();
    let mut out = Vec::with_capacity(n);
    let rate = RateCoefficients::new(ds);
    let mut g_left = interface_flux(rule, form, &rate, 0.0, w[0], g.edge(0), ds, dxi);
    for j in 0..n {
        let right = if j + 1 < n { w[j + 1] } else { 0.0 };
        let g_right = interface_flux(rule, form, &rate, w[j], right, g.edge(j + 1), ds, dxi);
        let v = w[j] - ratio * (g_right - g_left);
        if !v.is_finite() {
            return Err(Error::NonFinite { step: state.n + 1, cell: j });
        }
        out.push(v);
        g_left = g_right;
    }
    Ok(SimilarityState {
        n: state.n + 1,
        s: state.s + ds,
        ds,
        w: GridFunction::from_parts(*g, out),
    })
}

pub fn sim_step(state: &SimilarityState, rule: Rule) -> Result<SimilarityState> {
    sim_step_with(state, rule, GodunovForm::default())
}

/// Number of steps and the adjusted step that land exactly on `s_end`.
pub fn sim_schedule(s_start: f64, s_end: f64, ds: f64) -> Result<(u64, f64)> {
    if !(ds > 0.0) || !(s_end >= s_start) {
        return Err(Error::InvalidArgument(format!("bad schedule: s in [{s_start}, {s_end}], ds = {ds}")));
    }
    let span = s_end - s_start;
    if span == 0.0 {
        return Ok((0, ds));
    }
    let ratio = span / ds;
    let n = if (ratio - ratio.round()).abs() <= 1e-9 * ratio { ratio.round() } else { ratio.ceil() };
    let n = n.max(1.0);
    Ok((n as u64, span / n))
}

/// Advance `state` to `s_end`, calling `observe` after every step.
pub fn sim_run(
    state: SimilarityState,
    rule: Rule,
    form: GodunovForm,
    s_end: f64,
    mut observe: impl FnMut(&SimilarityState),
) -> Result<SimilarityState> {
    let (steps, ds) = sim_schedule(state.s, s_end, state.ds)?;
    let mut cur = SimilarityState { ds, ..state };
    let s0 = cur.s;
    let n0 = cur.n;
    for k in 1..=steps {
        cur = sim_step_with(&cur, rule, form)?;
        // avoid accumulating rounding in s
        cur.s = s0 + k as f64 * ds;
        debug_assert_eq!(cur.n, n0 + k);
        observe(&cur);
    }
    Ok(cur)
}

/// Slope of the linear part of a Godunov steady state, `2/(e^{Δs/2} + 1)`.
pub fn discrete_steady_slope(ds: f64) -> f64 {
    2.0 / ((0.5 * ds).exp() + 1.0)
}

/// Physical time and piecewise-constant physical solution: cell edges
/// `ξ_k √(t+1)` and values `w_j / √(t+1)`.
pub fn reconstruct_physical(state: &SimilarityState) -> (f64, PiecewiseFn) {
    let t = state.t();
    let r = (0.5 * state.s).exp();
    let g = state.xi_grid();
    let breakpoints = (0..=g.n_cells()).map(|k| g.edge(k) * r).collect();
    let pieces = state.w.values().iter().map(|&w| Piece::Constant(w / r)).collect();
    let f = PiecewiseFn::new(breakpoints, pieces).expect("mapped grid edges stay increasing");
    (t, f)
}

/// Steady N-wave `N_{p,q}(ξ) = ξ` on `(-√(2p), √(2q))`, zero elsewhere.
pub fn steady_nwave(p: f64, q: f64, xi: f64) -> f64 {
    if xi > -(2.0 * p).sqrt() && xi < (2.0 * q).sqrt() {
        xi
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(w: Vec<f64>, x_min: f64, dxi: f64, ds: f64) -> SimilarityState {
        let g = Grid1D::new(x_min, dxi, w.len()).unwrap();
        SimilarityState::new(GridFunction::new(g, w).unwrap(), 0.0, ds).unwrap()
    }

    #[test]
    fn map_round_trip() {
        for &(t, x, u) in &[(0.0, 1.0, 2.0), (3.5, -7.25, 0.1), (1e5, 400.0, -1e-3)] {
            let (s, xi, w) = to_similarity(t, x, u);
            let (t2, x2, u2) = from_similarity(s, xi, w);
            assert!((t2 - t).abs() <= 1e-14 * t.max(1.0));
            assert!((x2 - x).abs() <= 1e-14 * x.abs().max(1.0));
            assert!((u2 - u).abs() <= 1e-14 * u.abs().max(1.0));
        }
    }

    #[test]
    fn godunov_case_examples() {
        assert_eq!(sim_flux_godunov(0.0, 0.0, 0.0, 0.1), 0.0);
        // h(wl) > 0 and h(wl) + h(wr) > 0
        let (wl, wr, xb, ds) = (1.0, 0.8, 0.2, 0.01);
        assert_eq!(sim_flux_godunov(wl, wr, xb, ds), integrated_flux(wl, xb, ds));
        // transonic
        let xb = 0.4;
        assert_eq!(sim_flux_godunov(0.0, 1.0, xb, 0.01), -3.0 * xb * xb / 8.0);
        assert_eq!(sim_flux_godunov(-5.0, 9.0, xb, 0.3), -3.0 * xb * xb / 8.0);
        // h <= 0 on both sides picks the right state
        assert_eq!(sim_flux_godunov(-1.0, -0.5, 0.0, 0.01), integrated_flux(-0.5, 0.0, 0.01));
    }

    #[test]
    fn rate_godunov_matches_sampled_extremum() {
        let ds = 0.02;
        for &(wl, wr, xb) in &[(-0.5, 0.7, 0.3), (0.9, -0.4, -0.2), (0.1, 0.2, 1.0), (-1.0, -0.2, -0.6)] {
            let n = 100_000;
            let (lo, hi) = (f64::min(wl, wr), f64::max(wl, wr));
            let vals = (0..=n).map(|k| integrated_flux(lo + (hi - lo) * k as f64 / n as f64, xb, ds) / ds);
            let expected =
                if wl <= wr { vals.fold(f64::INFINITY, f64::min) } else { vals.fold(f64::NEG_INFINITY, f64::max) };
            let g = sim_flux_godunov_rate(wl, wr, xb, ds);
            assert!((g - expected).abs() < 1e-9, "{wl} {wr} {xb}: {g} vs {expected}");
        }
    }

    #[test]
    fn rate_godunov_tends_to_eo() {
        for &(wl, wr, xb) in &[(-0.5, 0.7, 0.3), (0.9, -0.4, -0.2), (0.3, 0.3, 0.6)] {
            let eo = sim_flux_eo(wl, wr, xb);
            let g = sim_flux_godunov_rate(wl, wr, xb, 1e-7);
            // Godunov and EO only differ across transonic shocks
            if !(wl > wr && wave_speed(wl, xb) > 0.0 && wave_speed(wr, xb) < 0.0) {
                assert!((g - eo).abs() < 1e-6, "{wl} {wr} {xb}: {g} vs {eo}");
            }
        }
    }

    #[test]
    fn lf_examples() {
        assert_eq!(sim_flux_lf(0.0, 0.0, 0.7, 0.01, 0.1), 0.0);
        assert_eq!(sim_flux_lf(0.5, 0.5, 0.5, 0.01, 0.1), 0.0);
        // Δξ/Δs = 20
        assert!((sim_flux_lf(0.0, 1.0, 0.0, 0.0005, 0.01) + 9.75).abs() < 1e-12);
        let a = sim_flux_lf(0.0, 1.0, 0.0, 0.0005, 0.01) - sim_flux_lf(1.0, 1.0, 0.0, 0.0005, 0.01);
        let b = sim_flux_lf(0.0, 1.0, 0.0, 0.00025, 0.01) - sim_flux_lf(1.0, 1.0, 0.0, 0.00025, 0.01);
        assert!((b.abs() - 2.0 * a.abs()).abs() < 0.25 + 1e-12);
    }

    #[test]
    fn eo_examples() {
        let xb = 0.6;
        assert!((sim_flux_eo(xb / 2.0, xb / 2.0, xb) + xb * xb / 8.0).abs() < 1e-16);
        for &w in &[0.3, 0.5, 2.0] {
            let expected = 0.5 * (w * w - xb * w);
            assert!((sim_flux_eo(w, w, xb) - expected).abs() < 1e-15);
        }
        for &w in &[-1.0, 0.0, 0.29] {
            let expected = 0.5 * (w * w - xb * w);
            assert!((sim_flux_eo(w, w, xb) - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_is_steady() {
        for rule in Rule::ALL {
            let s0 = state(vec![0.0; 40], -2.0, 0.1, 0.005);
            let s1 = sim_step(&s0, rule).unwrap();
            assert!(s1.w.values().iter().all(|&v| v == 0.0));
            let s1 = sim_step_with(&s0, rule, GodunovForm::Literal).unwrap();
            assert!(s1.w.values().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn mass_is_conserved() {
        let g = Grid1D::new(-10.0, 0.05, 400).unwrap();
        let w0 = GridFunction::from_fn(g, |x| steady_nwave(0.5, 1.0, x) + 0.3 * (-(x * x) * 4.0).exp()).unwrap();
        for rule in Rule::ALL {
            let st = SimilarityState::new(w0.clone(), 0.0, 0.0025).unwrap();
            let m0 = st.mass();
            let end = sim_run(st, rule, GodunovForm::Rate, 1.0, |_| {}).unwrap();
            assert!((end.mass() - m0).abs() <= 1e-12 * m0.abs().max(1.0), "{rule}");
            assert!((end.s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn cfl_violation_detected() {
        let st = state(vec![0.0, 30.0, 0.0], 0.0, 0.1, 0.01);
        assert!(matches!(sim_step(&st, Rule::EngquistOsher), Err(Error::CflViolation { .. })));
    }

    #[test]
    fn steady_slope_examples() {
        assert!((discrete_steady_slope(1e-12) - 1.0).abs() < 1e-12);
        assert!((discrete_steady_slope(0.0005) - 0.999_875).abs() < 1e-8);
        assert!((discrete_steady_slope(2.0) - 0.537_882_842).abs() < 1e-8);
        // zero of the integrated flux away from the origin
        let xb = 0.7;
        let ds = 0.3;
        assert!(integrated_flux(discrete_steady_slope(ds) * xb, xb, ds).abs() < 1e-15);
    }

    #[test]
    fn reconstruction_preserves_mass_and_maps_nwave() {
        let g = Grid1D::new(-3.0, 0.01, 700).unwrap();
        let (p, q) = (0.5, 2.0);
        let w = GridFunction::from_fn(g, |x| steady_nwave(p, q, x)).unwrap();
        let mut st = SimilarityState::new(w, 0.0, 0.001).unwrap();
        st.s = 3.0;
        let (t, u) = reconstruct_physical(&st);
        assert!((t - (3f64.exp() - 1.0)).abs() < 1e-12);
        assert!((u.integral() - st.mass()).abs() < 1e-12);
        // w_{p,q}(x, t + 1) at the mapped cell centres
        let tt = t + 1.0;
        let r = tt.sqrt();
        for j in (0..700).step_by(37) {
            let x = g.center(j) * r;
            let nw = {
                let (lo, hi) = (-(2.0 * p * tt).sqrt(), (2.0 * q * tt).sqrt());
                if x > lo && x < hi { x / tt } else { 0.0 }
            };
            assert!((u.eval(x) - nw).abs() < 1e-12, "{x}");
        }
        st.s = 0.0;
        let (t0, u0) = reconstruct_physical(&st);
        assert_eq!(t0, 0.0);
        assert_eq!(u0.eval(0.505), st.w.eval(0.505));
    }

    #[test]
    fn steady_nwave_examples() {
        assert_eq!(steady_nwave(1.0, 2.0, 5.0), 0.0);
        assert_eq!(steady_nwave(1.0, 2.0, -1.0), -1.0);
        let (p, q) = (1.0, 3.0);
        let (lo, hi) = (-(2.0 * p as f64).sqrt(), (2.0 * q as f64).sqrt());
        assert!(((hi * hi - lo * lo) / 2.0 - (q - p)).abs() < 1e-14);
        assert_eq!(steady_nwave(p, q, lo), 0.0);
    }

    #[test]
    fn schedule_lands_on_end() {
        let (n, ds) = sim_schedule(0.0, 101f64.ln(), 0.0035).unwrap();
        assert_eq!(n, 1319);
        assert!((n as f64 * ds - 101f64.ln()).abs() < 1e-12);
        assert_eq!(sim_schedule(0.0, 1.0, 0.25).unwrap(), (4, 0.25));
    }

    #[test]
    fn literal_godunov_runs_slow_by_a_factor_ds() {
        // a box with h > 0 everywhere, so no transonic interface: the rate
        // form moves with EO while the literal form barely moves
        let g = Grid1D::new(-4.0, 0.02, 400).unwrap();
        let w0 = GridFunction::from_fn(g, |x| if x > -2.0 && x < -1.0 { 1.0 } else { 0.0 }).unwrap();
        let ds = 0.002;
        let run = |rule, form| {
            let st = SimilarityState::new(w0.clone(), 0.0, ds).unwrap();
            sim_run(st, rule, form, 0.5, |_| {}).unwrap().w
        };
        let eo = run(Rule::EngquistOsher, GodunovForm::Rate);
        let rate = run(Rule::Godunov, GodunovForm::Rate);
        let literal = run(Rule::Godunov, GodunovForm::Literal);
        let dist = |a: &GridFunction, b: &GridFunction| {
            a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).sum::<f64>() * a.dx()
        };
        let moved_eo = dist(&eo, &w0);
        assert!(moved_eo > 0.1);
        assert!(dist(&rate, &eo) < 0.05 * moved_eo);
        assert!(dist(&literal, &w0) < 10.0 * ds * moved_eo);
    }
}
