//! Flat `key = value` run configuration.
//!
//! One key per line, `#` starts a comment. Keys:
//!
//! | key | meaning | default |
//! |-----|---------|---------|
//! | `label` | file stem of the run's outputs | `custom` |
//! | `mode` | `physical` or `similarity` | `physical` |
//! | `schemes` | comma list of `lf`, `eo`, `godunov` | all three |
//! | `domain` | `lo,hi` in `x` (physical) or `ξ` (similarity) | required |
//! | `layout` | `cells` tiles the domain; `nodes` centres cells on `lo + j h` | `cells` |
//! | `sampling` | `average` (cell averages) or `point` (values at centres) | `average` |
//! | `initial` | pieces `I:v` joined by `;`, see [`InitialData`] | required |
//! | `dx`, `dt`, `t_end` | physical mesh, step and final time | required in physical mode |
//! | `snapshots` | comma list of output times `t` | none |
//! | `dxi` or `nodes`, `ds` | similarity mesh and step | required in similarity mode |
//! | `s_end` or `t_end` | final similarity time, or its physical equivalent | required in similarity mode |
//! | `snapshots_s` | comma list of output times `s` | none |
//! | `diagnostics_every` | steps between invariant records | `1` |
//! | `compare_exact` | compare the final state with the exact solution | `false` |
//! | `profile_series` | log scaled distances to the asymptotic profiles | `false` |
//!
//! Numbers accept `sqrt(v)` and `-sqrt(v)` besides decimal literals.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nwave_core::{project_cell_averages, Grid1D, GridFunction, Piece, PiecewiseFn, Rule};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Cells,
    Nodes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    Average,
    Point,
}

/// One interval of the initial data with its closure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub piece: Piece,
}

impl Interval {
    fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }
}

/// Initial data as disjoint intervals, zero elsewhere. Written as
/// `[-1,0]:-1; (0,2]:2` or `(-12,-8):linear(10,1)` for `10 + x`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    intervals: Vec<Interval>,
}

impl InitialData {
    pub fn new(mut intervals: Vec<Interval>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(CliError::Config("initial data needs at least one interval".into()));
        }
        intervals.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        for iv in &intervals {
            if !(iv.hi > iv.lo) || !iv.lo.is_finite() || !iv.hi.is_finite() {
                return Err(CliError::Config(format!("empty or unbounded interval ({}, {})", iv.lo, iv.hi)));
            }
        }
        for w in intervals.windows(2) {
            if w[1].lo < w[0].hi || (w[1].lo == w[0].hi && w[0].hi_closed && w[1].lo_closed) {
                return Err(CliError::Config(format!("intervals overlap at {}", w[1].lo)));
            }
        }
        Ok(Self { intervals })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let intervals = text.split(';').map(str::trim).filter(|s| !s.is_empty()).map(parse_interval).collect::<Result<Vec<_>>>()?;
        Self::new(intervals)
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    /// Value at `x`, honouring the closure of each interval.
    pub fn value_at(&self, x: f64) -> f64 {
        self.intervals.iter().find(|iv| iv.contains(x)).map_or(0.0, |iv| iv.piece.eval(x))
    }

    /// The data as a function on the line; endpoint closures are dropped.
    pub fn to_piecewise(&self) -> PiecewiseFn {
        let mut bps = vec![self.intervals[0].lo];
        let mut pieces = Vec::new();
        for iv in &self.intervals {
            if iv.lo > *bps.last().expect("nonempty") {
                bps.push(iv.lo);
                pieces.push(Piece::Constant(0.0));
            }
            bps.push(iv.hi);
            pieces.push(iv.piece);
        }
        PiecewiseFn::new(bps, pieces).expect("validated intervals are increasing")
    }

    pub fn is_piecewise_constant(&self) -> bool {
        self.intervals.iter().all(|iv| matches!(iv.piece, Piece::Constant(_)))
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .intervals
            .iter()
            .map(|iv| {
                let value = match iv.piece {
                    Piece::Constant(c) => format!("{c}"),
                    Piece::Linear { intercept, slope } => format!("linear({intercept},{slope})"),
                };
                format!(
                    "{}{},{}{}:{value}",
                    if iv.lo_closed { '[' } else { '(' },
                    iv.lo,
                    iv.hi,
                    if iv.hi_closed { ']' } else { ')' }
                )
            })
            .collect();
        parts.join("; ")
    }
}

fn parse_interval(text: &str) -> Result<Interval> {
    let bad = |why: &str| CliError::Config(format!("initial piece '{text}': {why}"));
    let lo_closed = match text.chars().next() {
        Some('[') => true,
        Some('(') => false,
        _ => return Err(bad("expected '[' or '('")),
    };
    // closing bracket at depth zero; sqrt(..) nests parentheses
    let mut depth = 0i32;
    let mut close = None;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth -= 1;
                if depth == 0 {
                    close = Some(i);
                    break;
                }
            }
            _ => {}
        }
    }
    let close = close.ok_or_else(|| bad("unbalanced brackets"))?;
    let hi_closed = text[close..].starts_with(']');
    let (lo, hi) = text[1..close].split_once(',').ok_or_else(|| bad("expected 'lo,hi'"))?;
    let value = text[close + 1..].trim().strip_prefix(':').ok_or_else(|| bad("expected ':' after the interval"))?.trim();
    let piece = if let Some(args) = value.strip_prefix("linear(").and_then(|v| v.strip_suffix(')')) {
        let (a, b) = args.split_once(',').ok_or_else(|| bad("linear needs two coefficients"))?;
        Piece::Linear { intercept: parse_number(a)?, slope: parse_number(b)? }
    } else {
        Piece::Constant(parse_number(value)?)
    };
    Ok(Interval { lo: parse_number(lo)?, hi: parse_number(hi)?, lo_closed, hi_closed, piece })
}

/// Decimal literal, `sqrt(v)` or `-sqrt(v)`.
pub fn parse_number(text: &str) -> Result<f64> {
    let t = text.trim();
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) if rest.trim_start().starts_with("sqrt(") => (-1.0, rest.trim_start()),
        _ => (1.0, t),
    };
    let value = if let Some(arg) = body.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        parse_number(arg)?.sqrt()
    } else {
        body.parse::<f64>().map_err(|_| CliError::Config(format!("not a number: '{t}'")))?
    };
    if !value.is_finite() {
        return Err(CliError::Config(format!("not a finite number: '{t}'")));
    }
    Ok(sign * value)
}

fn parse_list(text: &str) -> Result<Vec<f64>> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(parse_number).collect()
}

fn parse_bool(text: &str) -> Result<bool> {
    match text.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(CliError::Config(format!("not a boolean: '{other}'"))),
    }
}

pub fn parse_schemes(text: &str) -> Result<Vec<Rule>> {
    let mut out = Vec::new();
    for s in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let rule: Rule = s.parse().map_err(|_| CliError::Config(format!("unknown scheme '{s}' (lf, eo, godunov)")))?;
        if !out.contains(&rule) {
            out.push(rule);
        }
    }
    if out.is_empty() {
        return Err(CliError::Config("no scheme given".into()));
    }
    Ok(out)
}

/// Mesh, step and stopping time in the variables the run is integrated in.
#[derive(Debug, Clone, PartialEq)]
pub enum Variables {
    Physical { dx: f64, dt: f64, t_end: f64, snapshots: Vec<f64> },
    /// Stops at `s_end`; snapshot times are in `s`.
    Similarity { dxi: f64, ds: f64, s_end: f64, snapshots: Vec<f64> },
}

/// Everything needed for one run per scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub label: String,
    pub schemes: Vec<Rule>,
    pub domain: (f64, f64),
    pub layout: Layout,
    pub sampling: Sampling,
    pub initial: InitialData,
    pub variables: Variables,
    pub diagnostics_every: u64,
    pub compare_exact: bool,
    pub profile_series: bool,
}

impl RunSpec {
    pub fn is_similarity(&self) -> bool {
        matches!(self.variables, Variables::Similarity { .. })
    }

    /// Mesh width in the integration variable.
    pub fn h(&self) -> f64 {
        match self.variables {
            Variables::Physical { dx, .. } => dx,
            Variables::Similarity { dxi, .. } => dxi,
        }
    }

    /// Final physical time.
    pub fn t_end(&self) -> f64 {
        match self.variables {
            Variables::Physical { t_end, .. } => t_end,
            Variables::Similarity { s_end, .. } => s_end.exp_m1(),
        }
    }

    pub fn grid(&self) -> Result<Grid1D> {
        let (lo, hi) = self.domain;
        let h = self.h();
        Ok(match self.layout {
            Layout::Cells => Grid1D::from_domain(lo, hi, h)?,
            Layout::Nodes => {
                let gaps = (hi - lo) / h;
                if (gaps - gaps.round()).abs() > 1e-6 * gaps.max(1.0) {
                    return Err(CliError::Config(format!("domain length {} is not a multiple of {h}", hi - lo)));
                }
                Grid1D::new(lo - 0.5 * h, h, gaps.round() as usize + 1)?
            }
        })
    }

    /// Initial grid values under the configured sampling.
    pub fn initial_values(&self) -> Result<GridFunction> {
        let grid = self.grid()?;
        Ok(match self.sampling {
            Sampling::Average => project_cell_averages(&self.initial.to_piecewise(), &grid)?,
            Sampling::Point => GridFunction::from_fn(grid, |x| self.initial.value_at(x))?,
        })
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(CliError::Config(format!("{name} must be positive, got {v}")))
            }
        };
        if !(self.domain.1 > self.domain.0) {
            return Err(CliError::Config(format!("empty domain [{}, {}]", self.domain.0, self.domain.1)));
        }
        match &self.variables {
            Variables::Physical { dx, dt, t_end, snapshots } => {
                positive("dx", *dx)?;
                positive("dt", *dt)?;
                positive("t_end", *t_end)?;
                check_times("snapshots", snapshots, *t_end)?;
            }
            Variables::Similarity { dxi, ds, s_end, snapshots } => {
                positive("dxi", *dxi)?;
                positive("ds", *ds)?;
                positive("s_end", *s_end)?;
                check_times("snapshots_s", snapshots, *s_end)?;
            }
        }
        if self.diagnostics_every == 0 {
            return Err(CliError::Config("diagnostics_every must be at least 1".into()));
        }
        if self.label.is_empty() || !self.label.chars().all(|c| c.is_ascii_alphanumeric() || "._-".contains(c)) {
            return Err(CliError::Config(format!("label '{}' must be nonempty [A-Za-z0-9._-]", self.label)));
        }
        if self.compare_exact && !self.initial.is_piecewise_constant() {
            return Err(CliError::Config("compare_exact needs piecewise-constant initial data".into()));
        }
        self.grid().map(|_| ())
    }

    /// The spec as `key = value` lines that parse back to the same spec.
    pub fn echo(&self) -> Vec<(String, String)> {
        let list = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",");
        let mut out = vec![
            ("label".to_string(), self.label.clone()),
            ("mode".into(), if self.is_similarity() { "similarity" } else { "physical" }.into()),
            ("schemes".into(), self.schemes.iter().map(|r| r.short_name()).collect::<Vec<_>>().join(",")),
            ("domain".into(), format!("{},{}", self.domain.0, self.domain.1)),
            ("layout".into(), match self.layout { Layout::Cells => "cells", Layout::Nodes => "nodes" }.into()),
            ("sampling".into(), match self.sampling { Sampling::Average => "average", Sampling::Point => "point" }.into()),
            ("initial".into(), self.initial.render()),
        ];
        match &self.variables {
            Variables::Physical { dx, dt, t_end, snapshots } => {
                out.push(("dx".into(), format!("{dx}")));
                out.push(("dt".into(), format!("{dt}")));
                out.push(("t_end".into(), format!("{t_end}")));
                out.push(("snapshots".into(), list(snapshots)));
            }
            Variables::Similarity { dxi, ds, s_end, snapshots } => {
                out.push(("dxi".into(), format!("{dxi}")));
                out.push(("ds".into(), format!("{ds}")));
                out.push(("s_end".into(), format!("{s_end}")));
                out.push(("snapshots_s".into(), list(snapshots)));
            }
        }
        out.push(("diagnostics_every".into(), self.diagnostics_every.to_string()));
        out.push(("compare_exact".into(), self.compare_exact.to_string()));
        out.push(("profile_series".into(), self.profile_series.to_string()));
        out
    }

    pub fn echo_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.echo() {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }
}

fn check_times(name: &str, times: &[f64], end: f64) -> Result<()> {
    for &t in times {
        if !(t >= 0.0) || t > end {
            return Err(CliError::Config(format!("{name}: {t} lies outside [0, {end}]")));
        }
    }
    Ok(())
}

const KEYS: [&str; 19] = [
    "label",
    "mode",
    "schemes",
    "domain",
    "layout",
    "sampling",
    "initial",
    "dx",
    "dt",
    "t_end",
    "snapshots",
    "dxi",
    "nodes",
    "ds",
    "s_end",
    "snapshots_s",
    "diagnostics_every",
    "compare_exact",
    "profile_series",
];

/// Parsed but not yet validated `key = value` pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    values: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw = Self::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| CliError::ConfigLine { line: i + 1, message };
            let (k, v) = line.split_once('=').ok_or_else(|| err("expected 'key = value'".into()))?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(err(format!("unknown key '{k}'")));
            }
            if raw.values.insert(k.to_string(), v.trim().to_string()).is_some() {
                return Err(err(format!("duplicate key '{k}'")));
            }
        }
        Ok(raw)
    }

    /// Sets or replaces one key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(CliError::Config(format!("unknown key '{key}'")));
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn remove(&mut self, key: &str) {
        self.values.remove(key);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn build(&self) -> Result<RunSpec> {
        let need = |k: &str| self.get(k).ok_or_else(|| CliError::Config(format!("missing key '{k}'")));
        let num = |k: &str| need(k).and_then(parse_number);
        let similarity = match self.get("mode").unwrap_or("physical") {
            "physical" => false,
            "similarity" => true,
            other => return Err(CliError::Config(format!("mode must be physical or similarity, got '{other}'"))),
        };
        let domain = parse_list(need("domain")?)?;
        let [lo, hi] = domain[..] else {
            return Err(CliError::Config("domain must be 'lo,hi'".into()));
        };
        let layout = match self.get("layout").unwrap_or("cells") {
            "cells" => Layout::Cells,
            "nodes" => Layout::Nodes,
            other => return Err(CliError::Config(format!("layout must be cells or nodes, got '{other}'"))),
        };
        let sampling = match self.get("sampling").unwrap_or("average") {
            "average" => Sampling::Average,
            "point" => Sampling::Point,
            other => return Err(CliError::Config(format!("sampling must be average or point, got '{other}'"))),
        };
        let variables = if similarity {
            for k in ["dx", "dt"] {
                if self.get(k).is_some() {
                    return Err(CliError::Config(format!("'{k}' is a physical-mode key")));
                }
            }
            if self.get("snapshots").is_some() && self.get("snapshots_s").is_some() {
                return Err(CliError::Config("give either snapshots or snapshots_s".into()));
            }
            let dxi = match (self.get("dxi"), self.get("nodes")) {
                (Some(_), Some(_)) => return Err(CliError::Config("give either dxi or nodes".into())),
                (Some(v), None) => parse_number(v)?,
                (None, Some(v)) => {
                    let n: usize = v.trim().parse().map_err(|_| CliError::Config(format!("nodes must be an integer, got '{v}'")))?;
                    if n < 2 {
                        return Err(CliError::Config("nodes must be at least 2".into()));
                    }
                    (hi - lo) / (n - 1) as f64
                }
                (None, None) => return Err(CliError::Config("missing key 'dxi' (or 'nodes')".into())),
            };
            let s_end = match (self.get("s_end"), self.get("t_end")) {
                (Some(_), Some(_)) => return Err(CliError::Config("give either s_end or t_end".into())),
                (Some(v), None) => parse_number(v)?,
                (None, Some(v)) => parse_number(v)?.ln_1p(),
                (None, None) => return Err(CliError::Config("missing key 's_end' (or 't_end')".into())),
            };
            let snapshots = match (self.get("snapshots_s"), self.get("snapshots")) {
                (Some(v), _) => parse_list(v)?,
                (None, Some(v)) => parse_list(v)?.into_iter().map(f64::ln_1p).collect(),
                (None, None) => Vec::new(),
            };
            Variables::Similarity { dxi, ds: num("ds")?, s_end, snapshots }
        } else {
            for k in ["dxi", "nodes", "ds", "s_end", "snapshots_s"] {
                if self.get(k).is_some() {
                    return Err(CliError::Config(format!("'{k}' is a similarity-mode key")));
                }
            }
            Variables::Physical {
                dx: num("dx")?,
                dt: num("dt")?,
                t_end: num("t_end")?,
                snapshots: self.get("snapshots").map(parse_list).transpose()?.unwrap_or_default(),
            }
        };
        let diagnostics_every = match self.get("diagnostics_every") {
            Some(v) => v.trim().parse().map_err(|_| CliError::Config(format!("diagnostics_every must be an integer, got '{v}'")))?,
            None => 1,
        };
        let spec = RunSpec {
            label: self.get("label").unwrap_or("custom").to_string(),
            schemes: parse_schemes(self.get("schemes").unwrap_or("lf,eo,godunov"))?,
            domain: (lo, hi),
            layout,
            sampling,
            initial: InitialData::parse(need("initial")?)?,
            variables,
            diagnostics_every,
            compare_exact: self.get("compare_exact").map(parse_bool).transpose()?.unwrap_or(false),
            profile_series: self.get("profile_series").map(parse_bool).transpose()?.unwrap_or(false),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl RunSpec {
    pub fn parse(text: &str) -> Result<Self> {
        RawConfig::parse(text)?.build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE: &str = "\
# table row
label = phys
domain = -20, 30
layout = nodes
sampling = point
initial = [-1,0]:-1; (0,2]:2
dx = 0.1
dt = 0.05
t_end = 100
schemes = eo
";

    #[test]
    fn numbers_accept_square_roots() {
        assert_eq!(parse_number("sqrt(2)").unwrap(), 2f64.sqrt());
        assert_eq!(parse_number("-sqrt(6)").unwrap(), -(6f64.sqrt()));
        assert_eq!(parse_number(" -0.05 ").unwrap(), -0.05);
        assert!(parse_number("abc").is_err());
        assert!(parse_number("inf").is_err());
    }

    #[test]
    fn closures_decide_point_values() {
        let d = InitialData::parse("[-1,0]:-1; (0,2]:2").unwrap();
        assert_eq!(d.value_at(0.0), -1.0);
        assert_eq!(d.value_at(2.0), 2.0);
        assert_eq!(d.value_at(-1.0), -1.0);
        assert_eq!(d.value_at(2.0000001), 0.0);
        assert_eq!(d.value_at(-1.0000001), 0.0);
    }

    #[test]
    fn linear_pieces_and_gaps() {
        let d = InitialData::parse("(-12,-8):linear(10,1); (-sqrt(2),sqrt(6)):linear(0,1)").unwrap();
        assert_eq!(d.value_at(-10.0), 0.0);
        assert_eq!(d.value_at(-9.0), 1.0);
        assert_eq!(d.value_at(-5.0), 0.0);
        let f = d.to_piecewise();
        // the first N-wave carries no mass, the second (6 - 2)/2
        assert!((f.integral() - 2.0).abs() < 1e-12);
        assert_eq!(f.pieces().len(), 3);
    }

    #[test]
    fn overlapping_or_doubly_closed_intervals_are_rejected() {
        assert!(InitialData::parse("[0,2]:1; [1,3]:2").is_err());
        assert!(InitialData::parse("[0,1]:1; [1,3]:2").is_err());
        assert!(InitialData::parse("[0,1):1; [1,3]:2").is_ok());
        assert!(InitialData::parse("[2,1]:1").is_err());
        assert!(InitialData::parse("").is_err());
    }

    #[test]
    fn node_layout_centres_cells_on_nodes() {
        let spec = RunSpec::parse(TABLE).unwrap();
        let g = spec.grid().unwrap();
        assert_eq!(g.n_cells(), 501);
        assert!((g.center(0) + 20.0).abs() < 1e-12);
        assert!((g.center(500) - 30.0).abs() < 1e-9);
        let u = spec.initial_values().unwrap();
        assert_eq!(u.values()[200], -1.0);
        assert_eq!(u.values()[201], 2.0);
    }

    #[test]
    fn echo_parses_back_to_the_same_spec() {
        let spec = RunSpec::parse(TABLE).unwrap();
        assert_eq!(RunSpec::parse(&spec.echo_text()).unwrap(), spec);
        let sim = "mode = similarity\ndomain = -3,4\nlayout = nodes\nnodes = 100\nds = 0.0035\nt_end = 100\n\
                   initial = [-1,0]:-1; (0,2]:2\nsnapshots = 10\n";
        let spec = RunSpec::parse(sim).unwrap();
        let Variables::Similarity { dxi, s_end, ref snapshots, .. } = spec.variables else { panic!() };
        assert_eq!(dxi, 7.0 / 99.0);
        assert_eq!(s_end, 101f64.ln());
        assert_eq!(snapshots, &[11f64.ln()]);
        assert_eq!(RunSpec::parse(&spec.echo_text()).unwrap(), spec);
    }

    #[test]
    fn bad_configs_are_reported() {
        assert!(matches!(RawConfig::parse("dx 0.1"), Err(CliError::ConfigLine { line: 1, .. })));
        assert!(matches!(RawConfig::parse("foo = 1"), Err(CliError::ConfigLine { .. })));
        assert!(matches!(RawConfig::parse("dx = 1\ndx = 2"), Err(CliError::ConfigLine { line: 2, .. })));
        let missing = TABLE.replace("dt = 0.05\n", "");
        assert!(RunSpec::parse(&missing).is_err());
        let off_grid = TABLE.replace("dx = 0.1", "dx = 0.3");
        assert!(RunSpec::parse(&off_grid).is_err());
        let late = format!("{TABLE}snapshots = 200\n");
        assert!(RunSpec::parse(&late).is_err());
        let mixed = format!("{TABLE}ds = 0.1\n");
        assert!(RunSpec::parse(&mixed).is_err());
    }
}
