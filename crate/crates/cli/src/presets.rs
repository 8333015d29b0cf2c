//! Named experiments with the published parameters.

use nwave_core::Rule;

use crate::config::{parse_number, parse_schemes, InitialData, Layout, RawConfig, RunSpec, Sampling, Variables};
use crate::error::{CliError, Result};

pub const PRESET_NAMES: [&str; 7] =
    ["fig_nwaves", "fig_masses", "fig_norms", "sim_two_nwaves", "table_t100", "table_t1000", "custom"];

/// Keys a preset override may touch.
pub const OVERRIDABLE: [&str; 4] = ["dx", "dt", "t_end", "scheme"];

/// Output selections that do not change the computation.
pub const OUTPUT_KEYS: [&str; 1] = ["snapshots"];

/// Keys a table preset refuses to change.
pub const TABLE_LOCKED: [&str; 4] = ["initial", "domain", "layout", "sampling"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Figure,
    Similarity,
    Table,
    Custom,
}

/// A named group of runs.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPreset {
    pub name: String,
    pub description: String,
    pub runs: Vec<RunSpec>,
    /// Derivations that are not read off the published parameters directly.
    pub notes: Vec<String>,
    kind: Kind,
}

/// Data of the long-time runs: `p = 0.05`, `q = 0.3`, `M = 0.25`.
pub const SECTION4_INITIAL: &str = "[-1,0]:-0.05; (0,2]:0.15";
/// Data of the error tables: `2` on `(0, 2]`, `-1` on `[-1, 0]`.
pub const TABLE_INITIAL: &str = "[-1,0]:-1; (0,2]:2";
/// Two N-waves in similarity variables, merging into `N_{2,4}`.
pub const TWO_NWAVES_INITIAL: &str = "(-12,-8):linear(10,1); (-sqrt(2),sqrt(6)):linear(0,1)";

/// Similarity table rows live on `[-3, 4]`.
const SIM_TABLE_DOMAIN: (f64, f64) = (-3.0, 4.0);

fn initial(text: &str) -> InitialData {
    InitialData::parse(text).expect("preset data parse")
}

fn figure_run() -> RunSpec {
    RunSpec {
        label: "dx0.1".into(),
        schemes: Rule::ALL.to_vec(),
        domain: (-350.0, 800.0),
        layout: Layout::Cells,
        sampling: Sampling::Average,
        initial: initial(SECTION4_INITIAL),
        variables: Variables::Physical { dx: 0.1, dt: 0.5, t_end: 1e5, snapshots: vec![1e2, 1e3, 1e4, 1e5] },
        diagnostics_every: 10,
        compare_exact: false,
        profile_series: true,
    }
}

fn table_physical(domain: (f64, f64), dx: f64, t_end: f64) -> RunSpec {
    RunSpec {
        label: format!("phys_dx{dx}"),
        schemes: vec![Rule::EngquistOsher],
        domain,
        layout: Layout::Nodes,
        sampling: Sampling::Point,
        initial: initial(TABLE_INITIAL),
        variables: Variables::Physical { dx, dt: 0.5 * dx, t_end, snapshots: Vec::new() },
        diagnostics_every: 10,
        compare_exact: true,
        profile_series: false,
    }
}

/// `nodes` points on `[-3, 4]`, so `Δξ = 7/(nodes - 1)` and `Δs = Δξ/20`.
fn table_similarity(nodes: usize, t_end: f64) -> RunSpec {
    let dxi = (SIM_TABLE_DOMAIN.1 - SIM_TABLE_DOMAIN.0) / (nodes - 1) as f64;
    RunSpec {
        label: format!("sim_n{nodes}"),
        schemes: vec![Rule::EngquistOsher],
        domain: SIM_TABLE_DOMAIN,
        layout: Layout::Nodes,
        sampling: Sampling::Point,
        initial: initial(TABLE_INITIAL),
        variables: Variables::Similarity { dxi, ds: dxi / 20.0, s_end: t_end.ln_1p(), snapshots: Vec::new() },
        diagnostics_every: 10,
        compare_exact: true,
        profile_series: false,
    }
}

const SIM_TABLE_NOTE: &str = "similarity rows: N nodes on [-3,4] give dxi = 7/(N-1) and ds = dxi/20; \
with s_end = ln(1 + t_end) this reproduces the published step counts (1306, 9877, 4225, 39459)";

impl ExperimentPreset {
    pub fn named(name: &str) -> Result<Self> {
        let figure = |description: &str| Self {
            name: name.to_string(),
            description: description.to_string(),
            runs: vec![figure_run()],
            notes: Vec::new(),
            kind: Kind::Figure,
        };
        let table = |t_end: f64, domain: (f64, f64), nodes: [usize; 2], description: &str| Self {
            name: name.to_string(),
            description: description.to_string(),
            runs: vec![
                table_physical(domain, 0.1, t_end),
                table_similarity(nodes[0], t_end),
                table_physical(domain, 0.01, t_end),
                table_similarity(nodes[1], t_end),
            ],
            notes: vec![SIM_TABLE_NOTE.to_string()],
            kind: Kind::Table,
        };
        Ok(match name {
            "fig_nwaves" => figure("solutions of all three schemes at t = 1e5 next to the N-wave and the diffusive wave"),
            "fig_masses" => figure("total, positive and negative mass against time for all three schemes"),
            "fig_norms" => figure("scaled L1 and L2 distance to the N-wave against time for all three schemes"),
            "sim_two_nwaves" => Self {
                name: name.to_string(),
                description: "two N-waves in similarity variables merging into N_{2,4}, run to s = 10".to_string(),
                runs: vec![RunSpec {
                    label: "dxi0.01".into(),
                    schemes: Rule::ALL.to_vec(),
                    domain: (-14.0, 5.0),
                    layout: Layout::Cells,
                    sampling: Sampling::Average,
                    initial: initial(TWO_NWAVES_INITIAL),
                    variables: Variables::Similarity { dxi: 0.01, ds: 0.0005, s_end: 10.0, snapshots: vec![0.5, 1.0, 2.0, 5.0] },
                    diagnostics_every: 20,
                    compare_exact: false,
                    profile_series: false,
                }],
                notes: Vec::new(),
                kind: Kind::Similarity,
            },
            "table_t100" => table(100.0, (-20.0, 30.0), [100, 750], "EO errors against the exact solution at t = 100, physical and similarity variables"),
            "table_t1000" => table(1000.0, (-50.0, 100.0), [215, 2000], "EO errors against the exact solution at t = 1000, physical and similarity variables"),
            "custom" => {
                return Err(CliError::Config("the custom preset takes its parameters from a config file (nwave run --config FILE)".into()))
            }
            other => return Err(CliError::UnknownPreset(other.to_string())),
        })
    }

    /// A single run read from a config file.
    pub fn custom(spec: RunSpec) -> Self {
        Self {
            name: "custom".into(),
            description: "runs described by a config file".into(),
            runs: vec![spec],
            notes: Vec::new(),
            kind: Kind::Custom,
        }
    }

    /// Parses a config file into the custom preset, applying `overrides` as
    /// plain config keys first.
    pub fn from_config(text: &str, overrides: &[(String, String)]) -> Result<Self> {
        let mut raw = RawConfig::parse(text)?;
        for (k, v) in overrides {
            let key = if k == "scheme" { "schemes" } else { k.as_str() };
            raw.set(key, v)?;
        }
        Ok(Self::custom(raw.build()?))
    }

    /// Applies whitelisted overrides; `snapshots` is accepted as an output
    /// selection.
    pub fn with_overrides(mut self, overrides: &[(String, String)]) -> Result<Self> {
        let get = |key: &str| overrides.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        for (k, _) in overrides {
            if OVERRIDABLE.contains(&k.as_str()) || OUTPUT_KEYS.contains(&k.as_str()) {
                continue;
            }
            if self.kind == Kind::Table && TABLE_LOCKED.contains(&k.as_str()) {
                return Err(CliError::Locked { preset: self.name.clone(), key: k.clone() });
            }
            return Err(CliError::NotOverridable { preset: self.name.clone(), key: k.clone() });
        }
        let not_here = |key: &str| CliError::NotOverridable { preset: self.name.clone(), key: key.to_string() };
        if self.kind == Kind::Similarity {
            if let Some(key) = ["dx", "dt"].into_iter().find(|k| get(k).is_some()) {
                return Err(not_here(key));
            }
        }
        if let Some(v) = get("scheme") {
            let schemes = parse_schemes(v)?;
            for r in &mut self.runs {
                r.schemes = schemes.clone();
            }
        }
        let dt = get("dt").map(parse_number).transpose()?;
        if let Some(dx) = get("dx").map(parse_number).transpose()? {
            if self.kind == Kind::Table {
                // one physical row at the requested mesh, dt = dx/2 unless given
                let first = self.runs.iter().position(|r| !r.is_similarity()).expect("tables have physical rows");
                let old = &self.runs[first];
                let row = RunSpec { schemes: old.schemes.clone(), ..table_physical(old.domain, dx, old.t_end()) };
                self.runs.retain(|r| r.is_similarity());
                self.runs.insert(0, row);
            } else {
                for r in &mut self.runs {
                    if let Variables::Physical { dx: d, .. } = &mut r.variables {
                        *d = dx;
                        r.label = format!("dx{dx}");
                    }
                }
            }
        }
        if let Some(dt) = dt {
            for r in &mut self.runs {
                if let Variables::Physical { dt: d, .. } = &mut r.variables {
                    *d = dt;
                }
            }
        }
        if let Some(t) = get("t_end").map(parse_number).transpose()? {
            for r in &mut self.runs {
                match &mut r.variables {
                    Variables::Physical { t_end, snapshots, .. } => {
                        *t_end = t;
                        snapshots.retain(|&s| s <= t);
                    }
                    Variables::Similarity { s_end, snapshots, .. } => {
                        *s_end = t.ln_1p();
                        let end = *s_end;
                        snapshots.retain(|&s| s <= end);
                    }
                }
            }
        }
        if let Some(v) = get("snapshots") {
            let times: Vec<f64> = v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(parse_number).collect::<Result<_>>()?;
            for r in &mut self.runs {
                match &mut r.variables {
                    Variables::Physical { snapshots, .. } => *snapshots = times.clone(),
                    Variables::Similarity { snapshots, .. } => *snapshots = times.iter().map(|t| t.ln_1p()).collect(),
                }
            }
        }
        for r in &self.runs {
            // round trip through the parser validates the edited spec
            RunSpec::parse(&r.echo_text())?;
        }
        Ok(self)
    }
}
