//! Explicit conservative time stepping in physical variables:
//! `u_j^{n+1} = u_j^n - λ (g_{j+1/2} - g_{j-1/2})` with zero ghost cells.

use crate::error::{Error, Result, Side};
use crate::flux::{flux_eo, flux_godunov, flux_lf, FluxFn, NumericalFlux, Rule};
use crate::grid::{discrete_norm, GridFunction, Grid1D, Snapshot};
use crate::invariants::InvariantRecord;

/// Values with magnitude above this count as "support" for the boundary guard.
pub const SUPPORT_THRESHOLD: f64 = 1e-14;
/// Nonzero values inside this many cells of either end abort a run.
pub const SUPPORT_MARGIN_CELLS: usize = 2;
/// Slack allowed on the CFL number before a step is refused.
const CFL_SLACK: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SimulationConfig {
    grid: Grid1D,
    dt: f64,
    flux: NumericalFlux,
    t_end: f64,
    snapshot_times: Vec<f64>,
    diagnostics_every: u64,
}

impl SimulationConfig {
    /// `λ = dt/dx` is fixed here and handed to the numerical flux.
    pub fn new(grid: Grid1D, dt: f64, rule: Rule, flux: FluxFn, t_end: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
        }
        if !(t_end >= 0.0) || !t_end.is_finite() {
            return Err(Error::InvalidArgument(format!("t_end must be >= 0, got {t_end}")));
        }
        let flux = NumericalFlux::new(rule, flux, dt / grid.dx())?;
        Ok(Self { grid, dt, flux, t_end, snapshot_times: Vec::new(), diagnostics_every: 1 })
    }

    pub fn with_snapshots(mut self, mut times: Vec<f64>) -> Result<Self> {
        if let Some(&t) = times.iter().find(|&&t| !(t >= 0.0 && t <= self.t_end)) {
            return Err(Error::InvalidArgument(format!(
                "snapshot time {t} outside [0, {}]",
                self.t_end
            )));
        }
        times.sort_by(f64::total_cmp);
        times.dedup();
        self.snapshot_times = times;
        Ok(self)
    }

    pub fn with_diagnostics_every(mut self, every: u64) -> Result<Self> {
        if every == 0 {
            return Err(Error::InvalidArgument("diagnostics_every must be >= 1".into()));
        }
        self.diagnostics_every = every;
        Ok(self)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn lambda(&self) -> f64 {
        self.flux.lambda
    }

    pub fn flux(&self) -> &NumericalFlux {
        &self.flux
    }

    pub fn rule(&self) -> Rule {
        self.flux.rule
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn snapshot_times(&self) -> &[f64] {
        &self.snapshot_times
    }

    pub fn diagnostics_every(&self) -> u64 {
        self.diagnostics_every
    }

    /// Number of steps to reach `t_end`: the first `n` with `n dt >= t_end`.
    pub fn total_steps(&self) -> u64 {
        steps_to_reach(self.t_end, self.dt)
    }
}

fn steps_to_reach(t: f64, dt: f64) -> u64 {
    // tolerate representation error in t/dt, e.g. 100/0.05
    let r = t / dt;
    let n = r.round();
    if (r - n).abs() <= 1e-9 * n.max(1.0) {
        n as u64
    } else {
        r.ceil() as u64
    }
}

/// The discrete state `u^n` at `t = n dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationState {
    pub n: u64,
    pub t: f64,
    pub u: GridFunction,
}

impl SimulationState {
    pub fn initial(u0: GridFunction) -> Self {
        Self { n: 0, t: 0.0, u: u0 }
    }
}

/// `λ ‖u^n‖_∞`.
pub fn cfl_margin(state: &SimulationState, cfg: &SimulationConfig) -> f64 {
    cfg.lambda() * discrete_norm(&state.u, f64::INFINITY).expect("p = inf is valid")
}

#[inline]
fn advance(u: &[f64], out: &mut [f64], lambda: f64, g: impl Fn(f64, f64) -> f64) {
    let n = u.len();
    let mut g_left = g(0.0, u[0]);
    for j in 0..n {
        let right = if j + 1 < n { u[j + 1] } else { 0.0 };
        let g_right = g(u[j], right);
        out[j] = u[j] - lambda * (g_right - g_left);
        g_left = g_right;
    }
}

/// One conservative update from `u` into `out`, dispatching the flux once.
fn advance_with(flux: &NumericalFlux, u: &[f64], out: &mut [f64]) {
    let lambda = flux.lambda;
    match (flux.rule, flux.flux) {
        (Rule::LaxFriedrichs, FluxFn::Burgers) => advance(u, out, lambda, |a, b| flux_lf(a, b, lambda)),
        (Rule::EngquistOsher, FluxFn::Burgers) => {
            advance(u, out, lambda, |a, b| flux_eo(a, b, &FluxFn::Burgers))
        }
        (Rule::Godunov, FluxFn::Burgers) => {
            advance(u, out, lambda, |a, b| flux_godunov(a, b, &FluxFn::Burgers))
        }
        _ => advance(u, out, lambda, |a, b| flux.eval(a, b)),
    }
}

fn check_finite(values: &[f64], step: u64) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(cell) => Err(Error::NonFinite { step, cell }),
        None => Ok(()),
    }
}

fn check_support(values: &[f64], step: u64) -> Result<()> {
    let m = SUPPORT_MARGIN_CELLS.min(values.len());
    if values[..m].iter().any(|v| v.abs() > SUPPORT_THRESHOLD) {
        return Err(Error::DomainTooSmall { step, side: Side::Left });
    }
    if values[values.len() - m..].iter().any(|v| v.abs() > SUPPORT_THRESHOLD) {
        return Err(Error::DomainTooSmall { step, side: Side::Right });
    }
    Ok(())
}

/// Advances `state` by one step of the scheme configured in `cfg`.
pub fn step(state: &SimulationState, cfg: &SimulationConfig) -> Result<SimulationState> {
    if state.u.grid() != cfg.grid() {
        return Err(Error::InvalidArgument("state grid differs from the configured grid".into()));
    }
    let margin = cfl_margin(state, cfg);
    if margin > 1.0 + CFL_SLACK {
        return Err(Error::CflViolation { step: state.n, margin });
    }
    let mut out = vec![0.0; state.u.values().len()];
    advance_with(cfg.flux(), state.u.values(), &mut out);
    let n = state.n + 1;
    check_finite(&out, n)?;
    Ok(SimulationState { n, t: n as f64 * cfg.dt(), u: GridFunction::from_parts(*cfg.grid(), out) })
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct RunOutput {
    /// States at the requested times, plus the final state.
    pub snapshots: Vec<Snapshot>,
    /// Diagnostics at step 0, every `diagnostics_every` steps and at the end.
    pub log: Vec<InvariantRecord>,
    pub final_state: SimulationState,
}

/// Drives the scheme from `u0` to `t_end`.
pub fn run(cfg: &SimulationConfig, u0: GridFunction) -> Result<RunOutput> {
    run_with(cfg, u0, |_, _| Ok(()))
}

/// Like [`run`], calling `observe` with the live state and its diagnostics
/// at every logged step. An error from `observe` aborts the run.
pub fn run_with(
    cfg: &SimulationConfig,
    u0: GridFunction,
    mut observe: impl FnMut(&SimulationState, &InvariantRecord) -> Result<()>,
) -> Result<RunOutput> {
    if u0.grid() != cfg.grid() {
        return Err(Error::InvalidArgument("initial data lives on a different grid".into()));
    }
    let total = cfg.total_steps();
    let dt = cfg.dt();
    let mut snap_steps: Vec<u64> = cfg.snapshot_times.iter().map(|&t| steps_to_reach(t, dt)).collect();
    snap_steps.push(total);
    snap_steps.dedup();

    let grid = *cfg.grid();
    let mut cur = u0.into_values();
    let mut next = vec![0.0; cur.len()];
    let mut snapshots = Vec::with_capacity(snap_steps.len());
    let mut log = Vec::new();
    let mut snap_iter = snap_steps.iter().peekable();

    check_support(&cur, 0)?;
    let mut n = 0u64;
    loop {
        let t = n as f64 * dt;
        let is_last = n == total;
        let wants_snapshot = snap_iter.peek().is_some_and(|&&s| s == n);
        let wants_log = n % cfg.diagnostics_every == 0 || is_last;
        if wants_snapshot || wants_log {
            let u = GridFunction::from_parts(grid, cur.clone());
            if wants_log {
                let rec = InvariantRecord::measure(n, t, &u);
                if cfg.lambda() * rec.sup_norm > 1.0 + CFL_SLACK {
                    return Err(Error::CflViolation { step: n, margin: cfg.lambda() * rec.sup_norm });
                }
                let state = SimulationState { n, t, u: u.clone() };
                observe(&state, &rec)?;
                log.push(rec);
            }
            if wants_snapshot {
                snap_iter.next();
                snapshots.push(Snapshot { n, t, u });
            }
        }
        if is_last {
            break;
        }
        if n == 0 {
            let margin = cfg.lambda() * cur.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if margin > 1.0 + CFL_SLACK {
                return Err(Error::CflViolation { step: 0, margin });
            }
        }
        advance_with(cfg.flux(), &cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
        n += 1;
        check_support(&cur, n)?;
        if n % cfg.diagnostics_every == 0 || n == total {
            check_finite(&cur, n)?;
        }
    }
    let final_state = SimulationState { n: total, t: total as f64 * dt, u: GridFunction::from_parts(grid, cur) };
    Ok(RunOutput { snapshots, log, final_state })
}
