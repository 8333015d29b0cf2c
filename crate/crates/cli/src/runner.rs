//! Executes presets: one sequential run per scheme, schemes in parallel,
//! per-run output files and a plain-text report.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use nwave_core::invariants::{audit_log, fit_decay_rate, AuditReport, AuditTolerances};
use nwave_core::profiles::{exact_burgers, scaled_profile_distance, DiffusiveWaveProfile, NWaveProfile};
use nwave_core::similarity::{reconstruct_physical, sim_run, sim_schedule, steady_nwave, GodunovForm, SimilarityState};
use nwave_core::{run_with, FluxFn, Grid1D, GridFunction, InvariantRecord, Rule, SimulationConfig, Snapshot};

use crate::compare::{compare_to_exact, ErrorRow};
use crate::config::{RunSpec, Variables};
use crate::csv::{emit_csv, fmt_f64, Series};
use crate::error::{CliError, Result};
use crate::presets::ExperimentPreset;

/// Window over which the `L^∞` decay exponent is fitted.
pub const DECAY_WINDOW: (f64, f64) = (1e3, 1e5);

/// Samples per decade of the scaled-distance series.
const SERIES_PER_DECADE: u32 = 10;

/// Scaled distances `t^{(1-1/p)/2} ‖u_Δ(t) - w(t)‖_p` to the two profiles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileDistances {
    pub t: f64,
    pub nwave_l1: f64,
    pub nwave_l2: f64,
    pub diffusive_l1: Option<f64>,
    pub diffusive_l2: Option<f64>,
}

/// Distance of a similarity solution to `N_{p,q}` and the slopes of the two
/// branches of its linear core.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyFit {
    pub l1: f64,
    pub sonic_xi: f64,
    pub slope_left: f64,
    pub slope_right: f64,
}

/// Profiles a physical run is measured against.
#[derive(Debug, Clone)]
pub struct Profiles {
    pub p: f64,
    pub q: f64,
    pub mass: f64,
    pub nwave: Option<NWaveProfile>,
    pub diffusive: Option<DiffusiveWaveProfile>,
}

impl Profiles {
    fn new(spec: &RunSpec, first: &InvariantRecord) -> Self {
        let (p, q, mass) = (first.p_delta, first.q_delta, first.mass);
        let nwave = NWaveProfile::new(p, q).ok().filter(|_| p + q > 0.0);
        let diffusive = match spec.variables {
            Variables::Physical { dx, dt, .. } if mass != 0.0 => DiffusiveWaveProfile::for_mesh(mass, dx, dt).ok(),
            _ => None,
        };
        Self { p, q, mass, nwave, diffusive }
    }

    fn distances(&self, u: &GridFunction, t: f64) -> nwave_core::Result<Option<ProfileDistances>> {
        let Some(nw) = &self.nwave else { return Ok(None) };
        let (diffusive_l1, diffusive_l2) = match &self.diffusive {
            Some(d) => (Some(scaled_profile_distance(u, t, d, 1.0)?), Some(scaled_profile_distance(u, t, d, 2.0)?)),
            None => (None, None),
        };
        Ok(Some(ProfileDistances {
            t,
            nwave_l1: scaled_profile_distance(u, t, nw, 1.0)?,
            nwave_l2: scaled_profile_distance(u, t, nw, 2.0)?,
            diffusive_l1,
            diffusive_l2,
        }))
    }
}

/// One scheme's run.
#[derive(Debug, Clone)]
pub struct SchemeRun {
    pub scheme: Rule,
    pub steps: u64,
    pub wall_seconds: f64,
    /// Final physical time.
    pub t_final: f64,
    /// Final similarity time, for similarity runs.
    pub s_final: Option<f64>,
    /// Invariant log; similarity runs store `s` in the time column.
    pub log: Vec<InvariantRecord>,
    /// Requested states plus the final one; similarity runs store `s` and `w`.
    pub snapshots: Vec<Snapshot>,
    /// Final state on the physical grid (mapped from `ξ` for similarity runs).
    pub physical_final: GridFunction,
    pub errors: Option<ErrorRow>,
    pub snapshot_distances: Vec<ProfileDistances>,
    pub distance_series: Vec<ProfileDistances>,
    pub steady: Option<SteadyFit>,
    pub audit: AuditReport,
    pub decay_exponent: Option<f64>,
    pub files: Vec<PathBuf>,
}

/// All scheme runs of one [`RunSpec`].
#[derive(Debug, Clone)]
pub struct SpecRun {
    pub spec: RunSpec,
    pub profiles: Profiles,
    pub runs: Vec<SchemeRun>,
    pub files: Vec<PathBuf>,
}

impl SpecRun {
    pub fn scheme(&self, rule: Rule) -> Option<&SchemeRun> {
        self.runs.iter().find(|r| r.scheme == rule)
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub preset: String,
    pub description: String,
    pub notes: Vec<String>,
    pub specs: Vec<SpecRun>,
    pub report_path: Option<PathBuf>,
}

impl RunReport {
    pub fn spec(&self, label: &str) -> Option<&SpecRun> {
        self.specs.iter().find(|s| s.spec.label == label)
    }

    pub fn audits_pass(&self) -> bool {
        self.specs.iter().flat_map(|s| &s.runs).all(|r| r.audit.passed())
    }

    /// Plain-text summary; every number except wall time is recomputable
    /// from the written CSV files.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "preset = {}", self.preset);
        let _ = writeln!(s, "description = {}", self.description);
        for n in &self.notes {
            let _ = writeln!(s, "note = {n}");
        }
        for sr in &self.specs {
            let _ = writeln!(s, "\n[{}]", sr.spec.label);
            s.push_str(&sr.spec.echo_text());
            let pr = &sr.profiles;
            let _ = writeln!(s, "initial_mass = {}\ninitial_p = {}\ninitial_q = {}", fmt_f64(pr.mass), fmt_f64(pr.p), fmt_f64(pr.q));
            if let Some(d) = &pr.diffusive {
                let _ = writeln!(s, "diffusive_nu = {}", fmt_f64(d.nu));
            }
            for f in &sr.files {
                let _ = writeln!(s, "file = {}", f.display());
            }
            for r in &sr.runs {
                render_scheme(&mut s, &sr.spec.label, r);
            }
        }
        s
    }
}

fn render_scheme(s: &mut String, label: &str, r: &SchemeRun) {
    let _ = writeln!(s, "\n[{label}/{}]", r.scheme);
    let _ = writeln!(s, "steps = {}", r.steps);
    let _ = writeln!(s, "wall_seconds = {:.3}", r.wall_seconds);
    let _ = writeln!(s, "t_final = {}", fmt_f64(r.t_final));
    if let Some(sf) = r.s_final {
        let _ = writeln!(s, "s_final = {}", fmt_f64(sf));
    }
    if let Some(last) = r.log.last() {
        let _ = writeln!(s, "final_mass = {}", fmt_f64(last.mass));
        let _ = writeln!(s, "final_p = {}", fmt_f64(last.p_delta));
        let _ = writeln!(s, "final_q = {}", fmt_f64(last.q_delta));
        let _ = writeln!(s, "final_pos_mass = {}", fmt_f64(last.pos_mass));
        let _ = writeln!(s, "final_neg_mass = {}", fmt_f64(last.neg_mass));
    }
    if let Some(e) = r.errors {
        let _ = writeln!(s, "error_l1 = {}\nerror_l2 = {}\nerror_linf = {}", fmt_f64(e.l1), fmt_f64(e.l2), fmt_f64(e.linf));
    }
    for d in &r.snapshot_distances {
        let _ = writeln!(s, "nwave_distance_l1@{} = {}", d.t, fmt_f64(d.nwave_l1));
        if let Some(v) = d.diffusive_l1 {
            let _ = writeln!(s, "diffusive_distance_l1@{} = {}", d.t, fmt_f64(v));
        }
    }
    if let Some(f) = r.steady {
        let _ = writeln!(s, "steady_l1 = {}", fmt_f64(f.l1));
        let _ = writeln!(s, "sonic_xi = {}", fmt_f64(f.sonic_xi));
        let _ = writeln!(s, "slope_left = {}\nslope_right = {}", fmt_f64(f.slope_left), fmt_f64(f.slope_right));
    }
    if let Some(k) = r.decay_exponent {
        let _ = writeln!(s, "linf_decay_exponent = {}", fmt_f64(k));
    }
    for c in &r.audit.checks {
        let verdict = if c.passed { "pass" } else { "FAIL" };
        let _ = writeln!(s, "audit.{} = {verdict} (worst {} at step {}, bound {})", c.name, fmt_f64(c.worst), c.at_step, c.bound);
    }
    for f in &r.files {
        let _ = writeln!(s, "file = {}", f.display());
    }
}

/// Runs every spec of `preset`, writing CSV files and the report into
/// `out_dir` when given.
pub fn execute(preset: &ExperimentPreset, out_dir: Option<&Path>) -> Result<RunReport> {
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let mut specs = Vec::new();
    for spec in &preset.runs {
        let stem = format!("{}_{}", preset.name, spec.label);
        specs.push(execute_spec(spec, &stem, out_dir)?);
    }
    let mut report = RunReport {
        preset: preset.name.clone(),
        description: preset.description.clone(),
        notes: preset.notes.clone(),
        specs,
        report_path: None,
    };
    if let Some(dir) = out_dir {
        let path = dir.join(format!("{}_report.txt", preset.name));
        fs::write(&path, report.render()).map_err(|e| CliError::io(&path, e))?;
        report.report_path = Some(path);
    }
    Ok(report)
}

/// Runs one spec for each of its schemes, in parallel.
pub fn execute_spec(spec: &RunSpec, stem: &str, out_dir: Option<&Path>) -> Result<SpecRun> {
    let u0 = spec.initial_values()?;
    let profiles = Profiles::new(spec, &InvariantRecord::measure(0, 0.0, &u0));
    let results: Vec<Result<SchemeRun>> = std::thread::scope(|scope| {
        let handles: Vec<_> = spec
            .schemes
            .iter()
            .map(|&rule| {
                let (u0, profiles) = (&u0, &profiles);
                scope.spawn(move || -> Result<SchemeRun> {
                    let mut run = match spec.variables {
                        Variables::Physical { .. } => run_physical(spec, rule, u0, profiles)?,
                        Variables::Similarity { .. } => run_similarity(spec, rule, u0, profiles)?,
                    };
                    if let Some(dir) = out_dir {
                        run.files = write_scheme_files(spec, &run, dir, stem)?;
                    }
                    Ok(run)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("scheme thread panicked")).collect()
    });
    let runs = results.into_iter().collect::<Result<Vec<_>>>()?;
    let files = match out_dir {
        Some(dir) => write_reference_files(spec, &profiles, &runs, dir, stem)?,
        None => Vec::new(),
    };
    Ok(SpecRun { spec: spec.clone(), profiles, runs, files })
}

/// Logged steps closest to `SERIES_PER_DECADE` log-spaced times per decade
/// from `t = 1` on.
fn series_steps(dt: f64, total: u64, every: u64) -> BTreeSet<u64> {
    let t_end = total as f64 * dt;
    let mut out = BTreeSet::new();
    let mut k = 0;
    loop {
        let t = 10f64.powf(k as f64 / SERIES_PER_DECADE as f64);
        if t > t_end * (1.0 + 1e-12) {
            break;
        }
        let n = ((t / dt / every as f64).round() as u64 * every).min(total);
        if n > 0 {
            out.insert(n);
        }
        k += 1;
    }
    out.insert(total);
    out
}

fn run_physical(spec: &RunSpec, rule: Rule, u0: &GridFunction, profiles: &Profiles) -> Result<SchemeRun> {
    let Variables::Physical { dt, t_end, ref snapshots, .. } = spec.variables else { unreachable!() };
    let cfg = SimulationConfig::new(*u0.grid(), dt, rule, FluxFn::Burgers, t_end)?
        .with_snapshots(snapshots.clone())?
        .with_diagnostics_every(spec.diagnostics_every)?;
    let wanted = if spec.profile_series {
        series_steps(dt, cfg.total_steps(), spec.diagnostics_every)
    } else {
        BTreeSet::new()
    };
    let mut series = Vec::new();
    let start = Instant::now();
    let out = run_with(&cfg, u0.clone(), |st, _| {
        if wanted.contains(&st.n) {
            series.extend(profiles.distances(&st.u, st.t)?);
        }
        Ok(())
    })?;
    let wall_seconds = start.elapsed().as_secs_f64();

    let fin = &out.final_state;
    let errors = if spec.compare_exact {
        let exact = exact_burgers(&spec.initial.to_piecewise(), fin.t)?;
        Some(compare_to_exact(&fin.u, fin.t, &exact, fin.t)?)
    } else {
        None
    };
    let snapshot_distances = out
        .snapshots
        .iter()
        .filter(|s| s.n > 0)
        .map(|s| profiles.distances(&s.u, s.t))
        .collect::<nwave_core::Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let audit = audit_log(&out.log, rule, dt, AuditTolerances::default());
    let decay_exponent = if fin.t >= DECAY_WINDOW.1 {
        let pts: Vec<(f64, f64)> = out.log.iter().map(|r| (r.t, r.sup_norm)).collect();
        fit_decay_rate(&pts, DECAY_WINDOW).ok()
    } else {
        None
    };
    Ok(SchemeRun {
        scheme: rule,
        steps: fin.n,
        wall_seconds,
        t_final: fin.t,
        s_final: None,
        physical_final: fin.u.clone(),
        log: out.log,
        snapshots: out.snapshots,
        errors,
        snapshot_distances,
        distance_series: series,
        steady: None,
        audit,
        decay_exponent,
        files: Vec::new(),
    })
}

fn run_similarity(spec: &RunSpec, rule: Rule, w0: &GridFunction, profiles: &Profiles) -> Result<SchemeRun> {
    let Variables::Similarity { ds, s_end, ref snapshots, .. } = spec.variables else { unreachable!() };
    let (total, ds_run) = sim_schedule(0.0, s_end, ds)?;
    let snap_steps: BTreeSet<u64> = snapshots.iter().map(|s| ((s / ds_run).round() as u64).min(total)).collect();
    let every = spec.diagnostics_every;
    let mut log = vec![InvariantRecord::measure(0, 0.0, w0)];
    let mut snaps = Vec::new();
    if snap_steps.contains(&0) {
        snaps.push(Snapshot { n: 0, t: 0.0, u: w0.clone() });
    }
    let start = Instant::now();
    let state = SimilarityState::new(w0.clone(), 0.0, ds)?;
    let fin = sim_run(state, rule, GodunovForm::Rate, s_end, |st| {
        if st.n % every == 0 || st.n == total {
            log.push(InvariantRecord::measure(st.n, st.s, &st.w));
        }
        if snap_steps.contains(&st.n) && st.n != total {
            snaps.push(Snapshot { n: st.n, t: st.s, u: st.w.clone() });
        }
    })?;
    let wall_seconds = start.elapsed().as_secs_f64();
    snaps.push(Snapshot { n: fin.n, t: fin.s, u: fin.w.clone() });

    let (t_final, _) = reconstruct_physical(&fin);
    let r = (0.5 * fin.s).exp();
    let g = fin.w.grid();
    let mapped = Grid1D::new(g.x_min() * r, g.dx() * r, g.n_cells())?;
    let physical_final = GridFunction::new(mapped, fin.w.values().iter().map(|w| w / r).collect())?;
    let errors = if spec.compare_exact {
        let exact = exact_burgers(&spec.initial.to_piecewise(), t_final)?;
        Some(compare_to_exact(&physical_final, t_final, &exact, t_final)?)
    } else {
        None
    };
    let steady = steady_fit(&fin.w, profiles)?;
    let mut audit = audit_log(&log, rule, ds_run, AuditTolerances::default());
    // only mass is conserved in ξ; the decay and slope bounds are physical-time statements
    audit.checks.retain(|c| c.name == "mass_drift");
    Ok(SchemeRun {
        scheme: rule,
        steps: fin.n,
        wall_seconds,
        t_final,
        s_final: Some(fin.s),
        log,
        snapshots: snaps,
        physical_final,
        errors,
        snapshot_distances: Vec::new(),
        distance_series: Vec::new(),
        steady,
        audit,
        decay_exponent: None,
        files: Vec::new(),
    })
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Fits the two branches of the linear core of `w` on either side of its
/// sign change, keeping the inner 80% of each branch so that neither the
/// shocks nor the sonic cell enter the fit.
pub fn steady_fit(w: &GridFunction, profiles: &Profiles) -> Result<Option<SteadyFit>> {
    let Some(nw) = &profiles.nwave else { return Ok(None) };
    let (lo, hi) = (-(2.0 * profiles.p).sqrt(), (2.0 * profiles.q).sqrt());
    let pts: Vec<(f64, f64)> = w.grid().centers().zip(w.values().iter().copied()).collect();
    let Some(sonic) = pts.iter().find(|&&(x, v)| x > lo && x < hi && v >= 0.0).map(|p| p.0) else {
        return Ok(None);
    };
    let branch = |a: f64, b: f64| -> Vec<(f64, f64)> {
        let m = 0.1 * (b - a);
        pts.iter().copied().filter(|p| p.0 > a + m && p.0 < b - m).collect()
    };
    let (left, right) = (branch(lo, sonic), branch(sonic, hi));
    if left.len() < 2 || right.len() < 2 {
        return Ok(None);
    }
    Ok(Some(SteadyFit {
        l1: scaled_profile_distance(w, 1.0, nw, 1.0)?,
        sonic_xi: sonic,
        slope_left: fit_slope(&left),
        slope_right: fit_slope(&right),
    }))
}

fn curve(u: &GridFunction) -> Vec<(f64, f64)> {
    u.grid().centers().zip(u.values().iter().copied()).collect()
}

fn write_scheme_files(spec: &RunSpec, run: &SchemeRun, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
    let base = format!("{stem}_{}", run.scheme);
    let mut files = Vec::new();
    let mut put = |name: String, series: Series<'_>| -> Result<()> {
        let path = dir.join(name);
        emit_csv(series, &path)?;
        files.push(path);
        Ok(())
    };
    put(format!("{base}_log.csv"), Series::Invariants(&run.log))?;
    let clock = if spec.is_similarity() { "s" } else { "t" };
    for snap in &run.snapshots {
        put(format!("{base}_{clock}{}.csv", snap.t), Series::Curve(&curve(&snap.u)))?;
    }
    if spec.is_similarity() && spec.compare_exact {
        put(format!("{base}_physical_t{}.csv", run.t_final), Series::Curve(&curve(&run.physical_final)))?;
    }
    if !run.distance_series.is_empty() {
        let pick = |f: &dyn Fn(&ProfileDistances) -> Option<f64>| -> Vec<(f64, f64)> {
            run.distance_series.iter().filter_map(|d| f(d).map(|v| (d.t, v))).collect()
        };
        put(format!("{base}_nwave_l1.csv"), Series::Curve(&pick(&|d| Some(d.nwave_l1))))?;
        put(format!("{base}_nwave_l2.csv"), Series::Curve(&pick(&|d| Some(d.nwave_l2))))?;
        let dl1 = pick(&|d| d.diffusive_l1);
        if !dl1.is_empty() {
            put(format!("{base}_diffusive_l1.csv"), Series::Curve(&dl1))?;
            put(format!("{base}_diffusive_l2.csv"), Series::Curve(&pick(&|d| d.diffusive_l2)))?;
        }
    }
    Ok(files)
}

/// Exact solution, asymptotic profiles or steady state, sampled on the
/// grid of the first scheme's final state.
fn write_reference_files(spec: &RunSpec, profiles: &Profiles, runs: &[SchemeRun], dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
    let Some(first) = runs.first() else { return Ok(Vec::new()) };
    let mut files = Vec::new();
    let mut put = |name: String, pts: Vec<(f64, f64)>| -> Result<()> {
        let path = dir.join(name);
        emit_csv(Series::Curve(&pts), &path)?;
        files.push(path);
        Ok(())
    };
    let t = first.t_final;
    let xs: Vec<f64> = first.physical_final.grid().centers().collect();
    if spec.compare_exact {
        let exact = exact_burgers(&spec.initial.to_piecewise(), t)?;
        put(format!("{stem}_exact_t{t}.csv"), xs.iter().map(|&x| (x, exact.eval(x))).collect())?;
    }
    if spec.is_similarity() {
        if profiles.nwave.is_some() {
            let xis: Vec<f64> = first.snapshots.last().expect("final state").u.grid().centers().collect();
            put(format!("{stem}_steady.csv"), xis.iter().map(|&x| (x, steady_nwave(profiles.p, profiles.q, x))).collect())?;
        }
    } else {
        use nwave_core::profiles::AsymptoticProfile;
        if let Some(nw) = &profiles.nwave {
            put(format!("{stem}_nwave_t{t}.csv"), xs.iter().map(|&x| (x, nw.eval(t, x))).collect())?;
        }
        if let Some(d) = &profiles.diffusive {
            put(format!("{stem}_diffusive_t{t}.csv"), xs.iter().map(|&x| (x, d.eval(t, x))).collect())?;
        }
    }
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunSpec;

    fn small(domain: &str, mode_keys: &str) -> ExperimentPreset {
        let text = format!("label = small\ndomain = {domain}\ninitial = [-1,0]:-0.5; (0,2]:1\nschemes = lf,eo,godunov\n{mode_keys}");
        ExperimentPreset::custom(RunSpec::parse(&text).unwrap())
    }

    #[test]
    fn series_steps_are_logged_and_log_spaced() {
        let steps = series_steps(0.5, 200, 10);
        assert!(steps.iter().all(|n| n % 10 == 0 || *n == 200));
        assert_eq!(steps.first(), Some(&10));
        assert_eq!(steps.last(), Some(&200));
        // t = 1 .. 100: ten per decade, collapsing on the coarse early steps
        assert!(steps.len() >= 10 && steps.len() <= 21, "{steps:?}");
    }

    #[test]
    fn physical_run_reports_recomputable_numbers() {
        let p = small("-30,30", "dx = 0.05\ndt = 0.025\nt_end = 1\nsnapshots = 0.5\ncompare_exact = true\n");
        let rep = execute(&p, None).unwrap();
        let sr = &rep.specs[0];
        assert_eq!(sr.runs.len(), 3);
        let lf = sr.scheme(Rule::LaxFriedrichs).unwrap().errors.unwrap().l1;
        for r in &sr.runs {
            assert_eq!(r.steps, 40);
            assert_eq!(r.snapshots.len(), 2);
            let e = r.errors.unwrap();
            // LF carries the most numerical viscosity
            assert!(e.l1 > 0.0 && e.l1 <= lf, "{}: {e:?}", r.scheme);
            let last = r.log.last().unwrap();
            assert!((last.mass - sr.profiles.mass).abs() < 1e-13);
            assert!(r.audit.get("mass_drift").unwrap().passed);
        }
        let text = rep.render();
        assert!(text.contains("preset = custom"));
        assert!(text.contains("[small/godunov]"));
        assert!(text.contains("error_l1 = "));
    }

    #[test]
    fn similarity_run_maps_back_to_physical_time() {
        let p = small("-4,6", "mode = similarity\ndxi = 0.05\nds = 0.01\nt_end = 1\ncompare_exact = true\n");
        let rep = execute(&p, None).unwrap();
        for r in &rep.specs[0].runs {
            assert!((r.t_final - 1.0).abs() < 1e-12);
            assert_eq!(r.s_final, Some(2f64.ln()));
            assert_eq!(r.steps, 70);
            if r.scheme != Rule::LaxFriedrichs {
                assert!(r.errors.unwrap().l1 < 0.3, "{}: {:?}", r.scheme, r.errors);
            }
            assert_eq!(r.audit.checks.len(), 1);
            assert!(r.audit.passed());
            // mass carries over unchanged from ξ to x
            let m: f64 = r.physical_final.values().iter().sum::<f64>() * r.physical_final.dx();
            assert!((m - rep.specs[0].profiles.mass).abs() < 1e-12);
        }
    }

    #[test]
    fn outputs_are_written_and_byte_identical_across_runs() {
        let p = small("-30,30", "dx = 0.1\ndt = 0.05\nt_end = 2\nsnapshots = 1\ncompare_exact = true\nprofile_series = true\n");
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let ra = execute(&p, Some(a.path())).unwrap();
        execute(&p, Some(b.path())).unwrap();
        let files: Vec<&PathBuf> = ra.specs[0].files.iter().chain(ra.specs[0].runs.iter().flat_map(|r| &r.files)).collect();
        assert!(files.len() >= 3 * 6 + 3);
        for f in files {
            let name = f.file_name().unwrap();
            assert_eq!(fs::read(f).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name:?}");
        }
        assert!(a.path().join("custom_small_eo_log.csv").exists());
        assert!(a.path().join("custom_small_lf_t1.csv").exists());
        assert!(a.path().join("custom_small_exact_t2.csv").exists());
        assert!(a.path().join("custom_report.txt").exists());
    }

    #[test]
    fn domain_errors_surface_from_the_run() {
        let p = small("-30,30", "dx = 0.1\ndt = 0.05\nt_end = 400\n");
        let err = execute(&p, None).unwrap_err();
        assert_eq!(err.exit_code(), crate::error::EXIT_NUMERICAL, "{err}");
    }

    #[test]
    fn branch_fit_recovers_a_kinked_profile() {
        let g = Grid1D::new(-3.0, 0.01, 600).unwrap();
        // slope 0.9 on both sides of a sonic gap at 0.2
        let w = GridFunction::from_fn(g, |x| if x > -2.0 && x < 2.5 { 0.9 * (x - 0.2) } else { 0.0 }).unwrap();
        let prof = Profiles { p: 2.0, q: 3.125, mass: 0.0, nwave: Some(NWaveProfile::new(2.0, 3.125).unwrap()), diffusive: None };
        let fit = steady_fit(&w, &prof).unwrap().unwrap();
        assert!((fit.slope_left - 0.9).abs() < 1e-9 && (fit.slope_right - 0.9).abs() < 1e-9, "{fit:?}");
        assert!((fit.sonic_xi - 0.205).abs() < 1e-9);
    }
}
