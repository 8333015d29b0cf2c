//! Discrete conserved and monotone quantities of a grid function, plus
//! audits of a logged run against the known discrete estimates.

use crate::error::{Error, Result};
use crate::flux::Rule;
use crate::grid::{discrete_norm, total_variation, GridFunction};

/// Neumaier compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    #[inline]
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `Δx Σ_j v_j`, summed left to right.
pub fn mass(v: &GridFunction) -> f64 {
    v.dx() * v.values().iter().sum::<f64>()
}

/// `-Δx min_k Σ_{j<=k} v_j`, with the empty prefix included so the result
/// is never negative.
pub fn p_delta(v: &GridFunction) -> f64 {
    let mut acc = CompensatedSum::default();
    let mut min = 0.0f64;
    for &x in v.values() {
        acc.add(x);
        min = min.min(acc.value());
    }
    -v.dx() * min
}

/// `Δx max_k Σ_{j>=k} v_j`, with the empty suffix included.
pub fn q_delta(v: &GridFunction) -> f64 {
    let mut acc = CompensatedSum::default();
    let mut max = 0.0f64;
    for &x in v.values().iter().rev() {
        acc.add(x);
        max = max.max(acc.value());
    }
    v.dx() * max
}

pub fn pos_mass(v: &GridFunction) -> f64 {
    v.dx() * v.values().iter().map(|x| x.max(0.0)).sum::<f64>()
}

/// Mass of the negative part, reported as a nonnegative number.
pub fn neg_mass(v: &GridFunction) -> f64 {
    v.dx() * v.values().iter().map(|x| (-x).max(0.0)).sum::<f64>()
}

/// `D = max_j ((v_{j+1} - v_j)/Δx)⁺` over neighbouring cells of the grid.
/// Runs keep the boundary cells at zero, so the tails add no jumps there.
pub fn oslc_d(v: &GridFunction, dx: f64) -> f64 {
    v.values().windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max) / dx
}

/// One row of the diagnostics log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantRecord {
    pub n: u64,
    pub t: f64,
    pub mass: f64,
    pub p_delta: f64,
    pub q_delta: f64,
    pub pos_mass: f64,
    pub neg_mass: f64,
    pub d_oslc: f64,
    pub sup_norm: f64,
    pub l1_norm: f64,
    pub tv: f64,
}

impl InvariantRecord {
    pub fn measure(n: u64, t: f64, u: &GridFunction) -> Self {
        let sup_norm = discrete_norm(u, f64::INFINITY).expect("p = inf is valid");
        let l1_norm = discrete_norm(u, 1.0).expect("p = 1 is valid");
        Self {
            n,
            t,
            mass: mass(u),
            p_delta: p_delta(u),
            q_delta: q_delta(u),
            pos_mass: pos_mass(u),
            neg_mass: neg_mass(u),
            d_oslc: oslc_d(u, u.dx()),
            sup_norm,
            l1_norm,
            tv: total_variation(u),
        }
    }
}

/// Least-squares slope of `ln(value)` against `ln(t)` over the samples with
/// `t` in `[window.0, window.1]`.
pub fn fit_decay_rate(series: &[(f64, f64)], window: (f64, f64)) -> Result<f64> {
    let pts: Vec<(f64, f64)> =
        series.iter().copied().filter(|&(t, _)| t >= window.0 && t <= window.1).collect();
    if pts.len() < 8 {
        return Err(Error::TooFewPoints(pts.len()));
    }
    if let Some(&(t, value)) = pts.iter().find(|&&(t, v)| !(v > 0.0) || !(t > 0.0)) {
        return Err(Error::NonPositiveValue { t, value });
    }
    let n = pts.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.iter().map(|&(t, v)| (t.ln(), v.ln())).unzip();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all samples share the same time".into()));
    }
    Ok(sxy / sxx)
}

/// A single audited property: did it hold, and the worst observed value of
/// the quantity that had to stay below its bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub worst: f64,
    pub bound: f64,
    /// Step index of the worst value.
    pub at_step: u64,
}

impl Check {
    fn new(name: &'static str, bound: f64) -> Self {
        Self { name, passed: true, worst: f64::NEG_INFINITY, bound, at_step: 0 }
    }

    fn observe(&mut self, value: f64, n: u64) {
        if value > self.worst || value.is_nan() {
            self.worst = value;
            self.at_step = n;
        }
        if !(value <= self.bound) {
            self.passed = false;
        }
    }
}

/// Audit of a diagnostics log against mass conservation, the OSLC bound,
/// the `L^∞` decay estimate and, for the upwind schemes, conservation of
/// `p_Δ` and `q_Δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub checks: Vec<Check>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Tolerances used by [`audit_log`].
#[derive(Debug, Clone, Copy)]
pub struct AuditTolerances {
    /// Relative mass drift.
    pub mass: f64,
    /// Absolute drift of `p_Δ`, `q_Δ`.
    pub pq: f64,
    /// Relative slack in the OSLC inequality.
    pub oslc: f64,
}

impl Default for AuditTolerances {
    fn default() -> Self {
        Self { mass: 1e-12, pq: 1e-10, oslc: 1e-12 }
    }
}

pub fn audit_log(log: &[InvariantRecord], rule: Rule, dt: f64, tol: AuditTolerances) -> AuditReport {
    let mut checks = Vec::new();
    let Some(first) = log.first() else {
        return AuditReport { checks };
    };

    let mut mass = Check::new("mass_drift", tol.mass);
    let scale = first.mass.abs().max(first.l1_norm).max(f64::MIN_POSITIVE);
    for r in log {
        mass.observe((r.mass - first.mass).abs() / scale, r.n);
    }
    checks.push(mass);

    if rule != Rule::LaxFriedrichs {
        let mut p = Check::new("p_delta_drift", tol.pq);
        let mut q = Check::new("q_delta_drift", tol.pq);
        for r in log {
            p.observe((r.p_delta - first.p_delta).abs(), r.n);
            q.observe((r.q_delta - first.q_delta).abs(), r.n);
        }
        checks.push(p);
        checks.push(q);
    }

    // D^n (1 + nΔt D⁰) <= D⁰ (1 + ε), written as a ratio minus one
    let mut oslc = Check::new("oslc", tol.oslc);
    let d0 = first.d_oslc;
    for r in log.iter().filter(|r| r.n > 0) {
        let lhs = r.d_oslc * (1.0 + r.n as f64 * dt * d0);
        let excess = if d0 > 0.0 { lhs / d0 - 1.0 } else { lhs };
        oslc.observe(excess, r.n);
    }
    checks.push(oslc);

    // ‖u^n‖_∞ <= √8 ‖u⁰‖_1^{1/2} (nΔt)^{-1/2}, as a ratio minus one
    let mut decay = Check::new("linf_decay", 0.0);
    let l1_0 = first.l1_norm;
    for r in log.iter().filter(|r| r.n > 0) {
        let bound = 8f64.sqrt() * l1_0.sqrt() / (r.n as f64 * dt).sqrt();
        decay.observe(r.sup_norm / bound - 1.0, r.n);
    }
    checks.push(decay);

    AuditReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{project_cell_averages, Grid1D, PiecewiseFn};

    fn section4() -> GridFunction {
        let u0 = PiecewiseFn::from_constants(&[(-1.0, 0.0, -0.05), (0.0, 2.0, 0.15)]).unwrap();
        project_cell_averages(&u0, &Grid1D::new(-350.0, 0.1, 11500).unwrap()).unwrap()
    }

    #[test]
    fn zero_function_has_zero_invariants() {
        let z = GridFunction::zeros(Grid1D::new(0.0, 0.1, 10).unwrap());
        assert_eq!(mass(&z), 0.0);
        assert_eq!(p_delta(&z), 0.0);
        assert_eq!(q_delta(&z), 0.0);
        assert_eq!(oslc_d(&z, 0.1), 0.0);
    }

    #[test]
    fn section4_invariants() {
        let u = section4();
        assert!((mass(&u) - 0.25).abs() < 1e-13);
        assert!((p_delta(&u) - 0.05).abs() < 1e-13);
        assert!((q_delta(&u) - 0.30).abs() < 1e-13);
        assert!((pos_mass(&u) - 0.30).abs() < 1e-13);
        assert!((neg_mass(&u) - 0.05).abs() < 1e-13);
        // jump -0.05 -> 0.15 over one cell
        assert!((oslc_d(&u, 0.1) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn single_cell_mass() {
        let g = Grid1D::new(0.0, 0.1, 1).unwrap();
        let v = GridFunction::new(g, vec![3.0]).unwrap();
        assert!((mass(&v) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn nonnegative_data_has_zero_p() {
        let g = Grid1D::new(0.0, 0.5, 4).unwrap();
        let v = GridFunction::new(g, vec![0.0, 1.0, 3.0, 0.5]).unwrap();
        assert_eq!(p_delta(&v), 0.0);
        assert!((q_delta(&v) - mass(&v)).abs() < 1e-15);
    }

    #[test]
    fn nonincreasing_data_has_zero_oslc() {
        let g = Grid1D::new(0.0, 0.5, 4).unwrap();
        let v = GridFunction::new(g, vec![-0.0, -1.0, -1.0, -3.0]).unwrap();
        assert_eq!(oslc_d(&v, 0.5), 0.0);
    }

    #[test]
    fn rate_fit_examples() {
        let series: Vec<(f64, f64)> =
            (0..20).map(|k| 10f64.powf(1.0 + 0.2 * k as f64)).map(|t| (t, 3.0 / t.sqrt())).collect();
        let slope = fit_decay_rate(&series, (1.0, 1e6)).unwrap();
        assert!((slope + 0.5).abs() < 1e-10);
        let flat: Vec<(f64, f64)> = (1..20).map(|k| (k as f64, 2.0)).collect();
        assert!(fit_decay_rate(&flat, (0.0, 100.0)).unwrap().abs() < 1e-12);
        assert!(matches!(fit_decay_rate(&series[..5], (1.0, 1e6)), Err(Error::TooFewPoints(5))));
        let mut bad = flat.clone();
        bad[3].1 = 0.0;
        assert!(matches!(fit_decay_rate(&bad, (0.0, 100.0)), Err(Error::NonPositiveValue { .. })));
    }
}
