//! CSV output: comma separated, LF line ends, floats with 17 significant
//! digits in scientific notation, no locale formatting.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use nwave_core::InvariantRecord;

use crate::error::{CliError, Result};

pub const INVARIANT_HEADER: &str = "n,t,mass,p_delta,q_delta,pos_mass,neg_mass,D_oslc,sup_norm,l1_norm,tv";
pub const CURVE_HEADER: &str = "x,value";

/// A series that [`emit_csv`] can write.
#[derive(Debug, Clone, Copy)]
pub enum Series<'a> {
    Invariants(&'a [InvariantRecord]),
    Curve(&'a [(f64, f64)]),
}

/// Formats `v` with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn invariant_row(r: &InvariantRecord) -> String {
    let fields = [r.t, r.mass, r.p_delta, r.q_delta, r.pos_mass, r.neg_mass, r.d_oslc, r.sup_norm, r.l1_norm, r.tv];
    let mut row = r.n.to_string();
    for v in fields {
        row.push(',');
        row.push_str(&fmt_f64(v));
    }
    row
}

pub fn write_series(series: Series<'_>, out: &mut impl Write) -> std::io::Result<()> {
    match series {
        Series::Invariants(log) => {
            writeln!(out, "{INVARIANT_HEADER}")?;
            for r in log {
                writeln!(out, "{}", invariant_row(r))?;
            }
        }
        Series::Curve(points) => {
            writeln!(out, "{CURVE_HEADER}")?;
            for &(x, v) in points {
                writeln!(out, "{},{}", fmt_f64(x), fmt_f64(v))?;
            }
        }
    }
    Ok(())
}

/// Writes a header row, then one row per element of `series`.
pub fn emit_csv(series: Series<'_>, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_series(series, &mut out).and_then(|_| out.flush()).map_err(|e| CliError::io(path, e))
}

/// Reads an invariant log written by [`emit_csv`].
pub fn read_invariant_log(path: &Path) -> Result<Vec<InvariantRecord>> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut lines = BufReader::new(file).lines();
    let bad = |line: usize, why: String| CliError::Config(format!("{}:{line}: {why}", path.display()));
    match lines.next() {
        Some(Ok(h)) if h == INVARIANT_HEADER => {}
        Some(Err(e)) => return Err(CliError::io(path, e)),
        _ => return Err(bad(1, format!("expected header '{INVARIANT_HEADER}'"))),
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| CliError::io(path, e))?;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return Err(bad(i + 2, format!("expected 11 fields, got {}", fields.len())));
        }
        let n = fields[0].parse().map_err(|_| bad(i + 2, format!("bad step index '{}'", fields[0])))?;
        let mut v = [0.0; 10];
        for (slot, f) in v.iter_mut().zip(&fields[1..]) {
            *slot = f.parse().map_err(|_| bad(i + 2, format!("bad number '{f}'")))?;
        }
        out.push(InvariantRecord {
            n,
            t: v[0],
            mass: v[1],
            p_delta: v[2],
            q_delta: v[3],
            pos_mass: v[4],
            neg_mass: v[5],
            d_oslc: v[6],
            sup_norm: v[7],
            l1_norm: v[8],
            tv: v[9],
        });
    }
    Ok(out)
}
