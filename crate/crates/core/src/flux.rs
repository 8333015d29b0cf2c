//! Continuous fluxes, the three three-point numerical fluxes, the numerical
//! viscosity coefficient `R` and the diagnostics built on it.

use crate::error::{Error, Result};

/// How a flux bends, which is what the Godunov and Engquist-Osher
/// constructions need to know.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convexity {
    /// `f'' >= γ > 0`, single minimum at the sonic point.
    UniformlyConvex,
    /// Concave on one side of zero, convex on the other (`f(u) = u|u|/2`).
    OddConvexConcave,
}

/// A continuous flux `f` with derivative `f'`.
#[derive(Debug, Clone, Copy)]
pub enum FluxFn {
    /// `f(u) = u²/2`
    Burgers,
    /// `f(u) = u|u|/2`
    OddBurgers,
    /// User supplied uniformly convex flux whose minimum sits at `sonic`.
    Convex { f: fn(f64) -> f64, df: fn(f64) -> f64, sonic: f64 },
}

impl FluxFn {
    #[inline]
    pub fn f(&self, u: f64) -> f64 {
        match self {
            FluxFn::Burgers => 0.5 * u * u,
            FluxFn::OddBurgers => 0.5 * u * u.abs(),
            FluxFn::Convex { f, .. } => f(u),
        }
    }

    #[inline]
    pub fn df(&self, u: f64) -> f64 {
        match self {
            FluxFn::Burgers => u,
            FluxFn::OddBurgers => u.abs(),
            FluxFn::Convex { df, .. } => df(u),
        }
    }

    pub fn convexity(&self) -> Convexity {
        match self {
            FluxFn::Burgers | FluxFn::Convex { .. } => Convexity::UniformlyConvex,
            FluxFn::OddBurgers => Convexity::OddConvexConcave,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FluxFn::Burgers => "burgers",
            FluxFn::OddBurgers => "odd_burgers",
            FluxFn::Convex { .. } => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    LaxFriedrichs,
    EngquistOsher,
    Godunov,
}

impl Rule {
    pub const ALL: [Rule; 3] = [Rule::LaxFriedrichs, Rule::EngquistOsher, Rule::Godunov];

    pub fn short_name(&self) -> &'static str {
        match self {
            Rule::LaxFriedrichs => "lf",
            Rule::EngquistOsher => "eo",
            Rule::Godunov => "godunov",
        }
    }
}

impl std::str::FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lf" | "lax_friedrichs" | "lax-friedrichs" => Ok(Rule::LaxFriedrichs),
            "eo" | "engquist_osher" | "engquist-osher" => Ok(Rule::EngquistOsher),
            "godunov" | "g" => Ok(Rule::Godunov),
            other => Err(Error::InvalidArgument(format!("unknown scheme '{other}'"))),
        }
    }
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.short_name())
    }
}

/// Lax-Friedrichs flux for Burgers: `(u² + v²)/4 - (v - u)/(2λ)`.
#[inline]
pub fn flux_lf(u: f64, v: f64, lambda: f64) -> f64 {
    0.25 * (u * u + v * v) - 0.5 * (v - u) / lambda
}

/// Lax-Friedrichs flux for a general `f`.
#[inline]
pub fn flux_lf_general(u: f64, v: f64, lambda: f64, flux: &FluxFn) -> f64 {
    0.5 * (flux.f(u) + flux.f(v)) - 0.5 * (v - u) / lambda
}

/// Engquist-Osher flux `f⁺(u) + f⁻(v)`.
#[inline]
pub fn flux_eo(u: f64, v: f64, flux: &FluxFn) -> f64 {
    match flux {
        FluxFn::Burgers => 0.25 * u * (u + u.abs()) + 0.25 * v * (v - v.abs()),
        // f' = |u| >= 0, everything flows right
        FluxFn::OddBurgers => flux.f(u),
        FluxFn::Convex { f, sonic, .. } => f(u.max(*sonic)) + f(v.min(*sonic)) - f(*sonic),
    }
}

/// Godunov flux: `min f` over `[u, v]` when `u <= v`, `max f` over `[v, u]`
/// otherwise. The extremum is taken over the endpoints and the sonic point.
#[inline]
pub fn flux_godunov(u: f64, v: f64, flux: &FluxFn) -> f64 {
    match flux {
        FluxFn::OddBurgers => flux.f(u),
        FluxFn::Burgers => {
            if u <= v {
                if u <= 0.0 && 0.0 <= v {
                    0.0
                } else {
                    0.5 * (u * u).min(v * v)
                }
            } else {
                0.5 * (u * u).max(v * v)
            }
        }
        FluxFn::Convex { f, sonic, .. } => {
            if u <= v {
                if u <= *sonic && *sonic <= v {
                    f(*sonic)
                } else {
                    f(u).min(f(v))
                }
            } else {
                f(u).max(f(v))
            }
        }
    }
}

/// A numerical flux `g(u, v)`: rule, continuous flux and `λ = Δt/Δx`.
#[derive(Debug, Clone, Copy)]
pub struct NumericalFlux {
    pub rule: Rule,
    pub flux: FluxFn,
    pub lambda: f64,
}

impl NumericalFlux {
    pub fn new(rule: Rule, flux: FluxFn, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
        }
        Ok(Self { rule, flux, lambda })
    }

    pub fn burgers(rule: Rule, lambda: f64) -> Result<Self> {
        Self::new(rule, FluxFn::Burgers, lambda)
    }

    #[inline]
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        match self.rule {
            Rule::LaxFriedrichs => match self.flux {
                FluxFn::Burgers => flux_lf(u, v, self.lambda),
                _ => flux_lf_general(u, v, self.lambda, &self.flux),
            },
            Rule::EngquistOsher => flux_eo(u, v, &self.flux),
            Rule::Godunov => flux_godunov(u, v, &self.flux),
        }
    }
}

/// Numerical viscosity coefficient of the scheme's viscous form,
/// `R(u, v) = (f(u) + f(v) - 2 g(u, v)) / (2 Δx)`.
pub fn viscous_r(u: f64, v: f64, g: &NumericalFlux, dx: f64) -> f64 {
    (g.flux.f(u) + g.flux.f(v) - 2.0 * g.eval(u, v)) / (2.0 * dx)
}

/// Estimates `α` in `R(μu, μv) = μ^α R(u, v)` from log-ratios over a fixed
/// sample set, and fails when the estimates disagree by more than `1e-8`.
///
/// Samples avoid `u = ±v` and `uv = 0`, where the Godunov coefficient
/// switches formula.
pub fn homogeneity_degree(g: &NumericalFlux) -> Result<f64> {
    let dx = 1.0;
    let bound = 0.9 / g.lambda;
    let pairs = [
        (0.31, 0.77),
        (0.77, 0.31),
        (-0.43, 0.19),
        (0.58, -0.21),
        (-0.66, -0.27),
        (-0.12, -0.71),
        (0.23, -0.64),
        (-0.83, 0.37),
    ];
    let mus = [0.5, 2.0, 10.0];
    let mut estimates = Vec::new();
    for &(a, b) in &pairs {
        // keep μu, μv inside the CFL box for every μ
        let scale = bound / 10.0;
        let (u, v) = (a * scale, b * scale);
        let base = viscous_r(u, v, g, dx);
        if base == 0.0 {
            continue;
        }
        for &mu in &mus {
            let scaled = viscous_r(mu * u, mu * v, g, dx);
            let ratio = scaled / base;
            if !(ratio > 0.0) {
                return Err(Error::NotHomogeneous { spread: f64::INFINITY });
            }
            estimates.push(ratio.ln() / mu.ln());
        }
    }
    if estimates.is_empty() {
        return Err(Error::NotHomogeneous { spread: f64::INFINITY });
    }
    let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
    let (lo, hi) = estimates
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| (lo.min(e), hi.max(e)));
    let spread = (hi - lo) / mean.abs().max(f64::MIN_POSITIVE);
    if spread > 1e-8 {
        return Err(Error::NotHomogeneous { spread });
    }
    Ok(mean)
}

/// Outcome of sampling the two sufficient conditions for conservation of
/// the discrete negative/positive masses:
///
/// * (a) `g(η, ξ) = 0` for `-1/λ <= η <= 0 <= ξ <= 1/λ`
/// * (b) `ξ - λ g(ξ, -ξ) >= 0` for `0 <= ξ <= 1/λ`
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub zero_flux_holds: bool,
    /// Sample point with the largest `|g(η, ξ)|` and that value.
    pub zero_flux_worst: (f64, f64, f64),
    /// Number of `(η, ξ)` samples where `g` vanishes.
    pub zero_flux_satisfied: usize,
    pub zero_flux_samples: usize,
    pub positivity_holds: bool,
    /// Sample with the smallest `ξ - λ g(ξ, -ξ)` and that value.
    pub positivity_worst: (f64, f64),
}

impl HypothesisReport {
    pub fn all_hold(&self) -> bool {
        self.zero_flux_holds && self.positivity_holds
    }
}

/// Samples both hypotheses on a uniform `samples × samples` grid of the
/// box (and `samples` points of the segment).
pub fn sumcons_hypotheses(g: &NumericalFlux, lambda: f64, samples: usize) -> Result<HypothesisReport> {
    if !(lambda > 0.0) || samples < 2 {
        return Err(Error::InvalidArgument("need lambda > 0 and at least 2 samples".into()));
    }
    let g = NumericalFlux { lambda, ..*g };
    let cap = 1.0 / lambda;
    let node = |k: usize| k as f64 / (samples - 1) as f64 * cap;
    let tol = 1e-14 * cap.max(1.0).powi(2);

    let mut worst: (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut satisfied = 0;
    for i in 0..samples {
        let eta = -node(i);
        for k in 0..samples {
            let xi = node(k);
            let val = g.eval(eta, xi);
            if val.abs() <= tol {
                satisfied += 1;
            }
            if val.abs() > worst.2.abs() {
                worst = (eta, xi, val);
            }
        }
    }

    let mut pos_worst = (0.0, f64::INFINITY);
    for k in 0..samples {
        let xi = node(k);
        let val = xi - lambda * g.eval(xi, -xi);
        if val < pos_worst.1 {
            pos_worst = (xi, val);
        }
    }

    Ok(HypothesisReport {
        zero_flux_holds: satisfied == samples * samples,
        zero_flux_worst: worst,
        zero_flux_satisfied: satisfied,
        zero_flux_samples: samples * samples,
        positivity_holds: pos_worst.1 >= -tol,
        positivity_worst: pos_worst,
    })
}
