//! Self-similar asymptotic profiles of the Burgers equation and the
//! distances used to decide which one a discrete solution approaches.
//!
//! * [`NWaveProfile`]: the inviscid two-parameter N-wave, `x/t` on
//!   `(-√(2pt), √(2qt))`.
//! * [`DiffusiveWaveProfile`]: the viscous self-similar solution of mass
//!   `M` for viscosity `ν`.
//! * [`exact_burgers`]: entropy solution for piecewise-constant data.

mod lax_oleinik;

pub use lax_oleinik::{exact_burgers, lax_oleinik_value, ExactSolution};

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{GridFunction, Piece, PiecewiseFn};

/// A profile `w(x, t)` that can be compared against a discrete solution.
pub trait AsymptoticProfile: Sync {
    fn eval(&self, t: f64, x: f64) -> f64;

    /// Points where `w(·, t)` is not smooth.
    fn kinks(&self, t: f64) -> Vec<f64>;

    /// Interval outside which `w(·, t)` is zero or negligible.
    fn extent(&self, t: f64) -> (f64, f64);

    /// True when `w(·, t)` is linear between consecutive kinks.
    fn is_piecewise_linear(&self) -> bool {
        false
    }
}

/// N-wave with negative mass `p` and positive mass `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NWaveProfile {
    pub p: f64,
    pub q: f64,
}

impl NWaveProfile {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p >= 0.0 && q >= 0.0) || !p.is_finite() || !q.is_finite() {
            return Err(Error::InvalidArgument(format!("N-wave needs p, q >= 0, got ({p}, {q})")));
        }
        Ok(Self { p, q })
    }

    pub fn mass(&self) -> f64 {
        self.q - self.p
    }

    /// Open support `(-√(2pt), √(2qt))`.
    pub fn support(&self, t: f64) -> (f64, f64) {
        (-(2.0 * self.p * t).sqrt(), (2.0 * self.q * t).sqrt())
    }

    /// The profile at time `t` as a piecewise-linear function.
    pub fn at(&self, t: f64) -> PiecewiseFn {
        let (lo, hi) = self.support(t);
        if hi > lo {
            PiecewiseFn::new(vec![lo, hi], vec![Piece::Linear { intercept: 0.0, slope: 1.0 / t }])
                .expect("valid N-wave breakpoints")
        } else {
            PiecewiseFn::zero()
        }
    }
}

/// `w_{p,q}(x, t)`: `x/t` strictly inside the support, zero elsewhere.
pub fn nwave_eval(prof: &NWaveProfile, t: f64, x: f64) -> f64 {
    let (lo, hi) = prof.support(t);
    if x > lo && x < hi {
        x / t
    } else {
        0.0
    }
}

impl AsymptoticProfile for NWaveProfile {
    fn eval(&self, t: f64, x: f64) -> f64 {
        nwave_eval(self, t, x)
    }

    fn kinks(&self, t: f64) -> Vec<f64> {
        let (lo, hi) = self.support(t);
        vec![lo, hi]
    }

    fn extent(&self, t: f64) -> (f64, f64) {
        self.support(t)
    }

    fn is_piecewise_linear(&self) -> bool {
        true
    }
}

/// Largest `|M|/(2ν)` for which the profile is evaluated.
const MAX_REYNOLDS: f64 = 700.0;

/// Normalisation constant `C_M` making the diffusive wave carry mass `M`:
/// `C_M = 2√π / (exp(-M/(2ν)) - 1)`.
pub fn solve_c_m(m: f64, nu: f64) -> Result<f64> {
    if m == 0.0 || !m.is_finite() {
        return Err(Error::InvalidArgument(format!("diffusive wave needs M != 0, got {m}")));
    }
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::InvalidArgument(format!("viscosity must be positive, got {nu}")));
    }
    let r = m / (2.0 * nu);
    if r.abs() > MAX_REYNOLDS {
        return Err(Error::DegenerateProfile(r.abs()));
    }
    Ok(2.0 * PI.sqrt() / (-r).exp_m1())
}

/// Self-similar solution of `w_t + (w²/2)_x = ν w_xx` with `w(0) = M δ₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusiveWaveProfile {
    pub m: f64,
    pub nu: f64,
    pub c_m: f64,
}

impl DiffusiveWaveProfile {
    pub fn new(m: f64, nu: f64) -> Result<Self> {
        Ok(Self { m, nu, c_m: solve_c_m(m, nu)? })
    }

    /// Profile matched to a scheme's numerical viscosity `ν = Δx²/(2Δt)`.
    pub fn for_mesh(m: f64, dx: f64, dt: f64) -> Result<Self> {
        Self::new(m, dx * dx / (2.0 * dt))
    }
}

/// `w_M(x, t) = -(2√ν/√t) exp(-x²/(4νt)) / (C_M + ∫_{-∞}^{x/√(νt)} exp(-s²/4) ds)`.
///
/// The inner integral is `√π erfc(-y/2)`. For `M > 0` the denominator is
/// rewritten as `-√π (erfc(y/2) + 2/expm1(M/2ν))`, which avoids the
/// cancellation between `C_M` and the integral.
pub fn diffusive_eval(prof: &DiffusiveWaveProfile, t: f64, x: f64) -> f64 {
    let scale = (prof.nu * t).sqrt();
    let y = x / scale;
    let gauss = (-0.25 * y * y).exp();
    if gauss == 0.0 {
        return 0.0;
    }
    let amp = 2.0 * prof.nu.sqrt() / t.sqrt();
    let sqrt_pi = PI.sqrt();
    if prof.m > 0.0 {
        let r = prof.m / (2.0 * prof.nu);
        let denom = sqrt_pi * (libm::erfc(0.5 * y) + 2.0 / r.exp_m1());
        amp * gauss / denom
    } else {
        let denom = prof.c_m + sqrt_pi * libm::erfc(-0.5 * y);
        -amp * gauss / denom
    }
}

impl AsymptoticProfile for DiffusiveWaveProfile {
    fn eval(&self, t: f64, x: f64) -> f64 {
        diffusive_eval(self, t, x)
    }

    fn kinks(&self, _t: f64) -> Vec<f64> {
        Vec::new()
    }

    fn extent(&self, t: f64) -> (f64, f64) {
        // inviscid support plus a wide Gaussian margin
        let reach = (2.0 * self.m.abs() * t).sqrt();
        let margin = 40.0 * (self.nu * t).sqrt();
        if self.m > 0.0 {
            (-margin, reach + margin)
        } else {
            (-reach - margin, margin)
        }
    }
}

/// 8-point Gauss-Legendre nodes and weights on `[-1, 1]`.
const GL8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329, 0.313_706_645_877_887_27),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_361_96),
    (0.183_434_642_495_649_8, 0.362_683_783_378_361_96),
    (0.525_532_409_916_329, 0.313_706_645_877_887_27),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
];

fn gauss_legendre(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    half * GL8.iter().map(|&(x, w)| w * f(mid + half * x)).sum::<f64>()
}

/// `∫_a^b |c - w(x, t)|^p dx`, split at kinks and, for piecewise-linear
/// profiles, at the crossing with `c`, so that it is exact for `p = 1, 2`.
fn cell_lp(prof: &dyn AsymptoticProfile, kinks: &[f64], t: f64, c: f64, a: f64, b: f64, p: f64) -> f64 {
    let mut cuts = vec![a];
    cuts.extend(kinks.iter().copied().filter(|&k| k > a && k < b));
    cuts.push(b);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mut sub = vec![lo];
        if prof.is_piecewise_linear() {
            let mid = 0.5 * (lo + hi);
            let slope = (prof.eval(t, hi.min(mid + 0.25 * (hi - lo))) - prof.eval(t, mid)) / (0.25 * (hi - lo));
            if slope != 0.0 {
                let root = mid + (c - prof.eval(t, mid)) / slope;
                if root > lo && root < hi {
                    sub.push(root);
                }
            }
        }
        sub.push(hi);
        for s in sub.windows(2) {
            total += gauss_legendre(s[0], s[1], |x| (c - prof.eval(t, x)).abs().powf(p));
        }
    }
    total
}

/// `t^{(1-1/p)/2} ‖u_Δ(t) - w(t)‖_{L^p(ℝ)}` for the piecewise-constant
/// interpolant of `u`; `p` must lie in `[1, ∞)`.
pub fn scaled_profile_distance(u: &GridFunction, t: f64, prof: &dyn AsymptoticProfile, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!("p must lie in [1, inf), got {p}")));
    }
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("t must be positive, got {t}")));
    }
    let grid = u.grid();
    let kinks = prof.kinks(t);
    let mut total = 0.0;
    for (j, &c) in u.values().iter().enumerate() {
        total += cell_lp(prof, &kinks, t, c, grid.edge(j), grid.edge(j + 1), p);
    }
    // profile mass that falls outside the grid
    let (lo, hi) = prof.extent(t);
    let outside = [(lo, grid.x_min()), (grid.x_max(), hi)];
    for (a, b) in outside {
        if b > a {
            let panels = 256;
            let h = (b - a) / panels as f64;
            for k in 0..panels {
                let (x0, x1) = (a + k as f64 * h, a + (k + 1) as f64 * h);
                total += cell_lp(prof, &kinks, t, 0.0, x0, x1, p);
            }
        }
    }
    Ok(t.powf(0.5 * (1.0 - 1.0 / p)) * total.powf(1.0 / p))
}
