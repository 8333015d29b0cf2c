//! Uniform 1-D grids, cell-valued grid functions and piecewise polynomial
//! functions of `x`.
//!
//! Cells are left-closed and right-open: cell `j` covers
//! `[x_min + j dx, x_min + (j + 1) dx)`. Everything outside the grid is an
//! implicit zero, which is what the compactly supported problems here need.

use crate::error::{Error, Result, Side};

/// Relative tolerance (in units of `dx`) under which a cell edge and a
/// breakpoint of the initial data are treated as the same point.
const EDGE_SNAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x_min: f64,
    dx: f64,
    n_cells: usize,
}

impl Grid1D {
    pub fn new(x_min: f64, dx: f64, n_cells: usize) -> Result<Self> {
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(Error::InvalidGrid(format!("dx must be positive, got {dx}")));
        }
        if n_cells == 0 {
            return Err(Error::InvalidGrid("n_cells must be at least 1".into()));
        }
        if !x_min.is_finite() {
            return Err(Error::InvalidGrid(format!("x_min must be finite, got {x_min}")));
        }
        Ok(Self { x_min, dx, n_cells })
    }

    /// Grid whose cells tile `[a, b]`; `(b - a) / dx` must be (nearly) an integer.
    pub fn from_domain(a: f64, b: f64, dx: f64) -> Result<Self> {
        if !(b > a) {
            return Err(Error::InvalidGrid(format!("empty domain [{a}, {b}]")));
        }
        let cells = (b - a) / dx;
        let n = cells.round();
        if (cells - n).abs() > 1e-6 * cells.max(1.0) {
            return Err(Error::InvalidGrid(format!(
                "domain length {} is not a multiple of dx = {dx}",
                b - a
            )));
        }
        Self::new(a, dx, n as usize)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.edge(self.n_cells)
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    /// Position of edge `k` (edge `j` is the left edge of cell `j`).
    pub fn edge(&self, k: usize) -> f64 {
        self.x_min + k as f64 * self.dx
    }

    pub fn center(&self, j: usize) -> f64 {
        self.x_min + (j as f64 + 0.5) * self.dx
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_cells).map(|j| self.center(j))
    }

    /// Index of the cell containing `x`, or `None` outside `[x_min, x_max)`.
    pub fn cell_of(&self, x: f64) -> Option<usize> {
        let s = (x - self.x_min) / self.dx;
        if !(s >= 0.0) {
            return None;
        }
        let mut j = s.floor() as usize;
        // floor of the scaled coordinate can be off by one next to an edge
        if j < self.n_cells && x < self.edge(j) {
            j = j.checked_sub(1)?;
        } else if j + 1 <= self.n_cells && x >= self.edge(j + 1) {
            j += 1;
        }
        (j < self.n_cells).then_some(j)
    }
}

/// Cell values `u_j` on a [`Grid1D`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid1D,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_cells() {
            return Err(Error::InvalidArgument(format!(
                "{} values for a grid of {} cells",
                values.len(),
                grid.n_cells()
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite value in cell {j}")));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self { values: vec![0.0; grid.n_cells()], grid }
    }

    /// Samples `f` at the cell centers.
    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.centers().map(f).collect();
        Self::new(grid, values)
    }

    /// Crate-internal constructor for values already known to be finite.
    pub(crate) fn from_parts(grid: Grid1D, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.n_cells());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn dx(&self) -> f64 {
        self.grid.dx
    }

    /// Value of the piecewise-constant interpolant at `x` (zero off the grid).
    pub fn eval(&self, x: f64) -> f64 {
        self.grid.cell_of(x).map_or(0.0, |j| self.values[j])
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|v| c * v).collect())
    }

    /// Cellwise difference; both functions must live on the same grid.
    pub fn sub(&self, other: &GridFunction) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::InvalidArgument("grid functions on different grids".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Self::new(self.grid, values)
    }

    /// The same data as a piecewise-constant [`PiecewiseFn`].
    pub fn to_piecewise(&self) -> PiecewiseFn {
        let breakpoints = (0..=self.grid.n_cells).map(|k| self.grid.edge(k)).collect();
        let pieces = self.values.iter().map(|&c| Piece::Constant(c)).collect();
        PiecewiseFn { breakpoints, pieces }
    }
}

/// One interval of a [`PiecewiseFn`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Piece {
    Constant(f64),
    /// `intercept + slope * x`
    Linear { intercept: f64, slope: f64 },
}

impl Piece {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Piece::Constant(c) => c,
            Piece::Linear { intercept, slope } => intercept + slope * x,
        }
    }

    fn coefficients(&self) -> (f64, f64) {
        match *self {
            Piece::Constant(c) => (c, 0.0),
            Piece::Linear { intercept, slope } => (intercept, slope),
        }
    }

    /// Exact integral over `[a, b]`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        match *self {
            Piece::Constant(c) => c * (b - a),
            Piece::Linear { intercept, slope } => {
                (b - a) * (intercept + slope * 0.5 * (a + b))
            }
        }
    }
}

/// Piecewise constant or linear function with compact support.
///
/// Piece `i` lives on `[breakpoints[i], breakpoints[i + 1])`; the function is
/// identically zero outside `[breakpoints[0], breakpoints[last])`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseFn {
    breakpoints: Vec<f64>,
    pieces: Vec<Piece>,
}

impl PiecewiseFn {
    pub fn new(breakpoints: Vec<f64>, pieces: Vec<Piece>) -> Result<Self> {
        if breakpoints.len() != pieces.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "{} breakpoints for {} pieces",
                breakpoints.len(),
                pieces.len()
            )));
        }
        if breakpoints.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidArgument("breakpoints must be finite".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("breakpoints must be strictly increasing".into()));
        }
        let finite = pieces.iter().all(|p| {
            let (a, b) = p.coefficients();
            a.is_finite() && b.is_finite()
        });
        if !finite {
            return Err(Error::InvalidArgument("piece coefficients must be finite".into()));
        }
        Ok(Self { breakpoints, pieces })
    }

    /// The zero function.
    pub fn zero() -> Self {
        Self { breakpoints: vec![0.0, 1.0], pieces: vec![Piece::Constant(0.0)] }
    }

    /// Piecewise constant function from `(a, b, value)` intervals, which
    /// must be ordered and non-overlapping; gaps between them are zero.
    pub fn from_constants(intervals: &[(f64, f64, f64)]) -> Result<Self> {
        if intervals.is_empty() {
            return Ok(Self::zero());
        }
        let mut breakpoints = vec![intervals[0].0];
        let mut pieces = Vec::with_capacity(intervals.len());
        for &(a, b, c) in intervals {
            let last = *breakpoints.last().unwrap();
            if a > last {
                pieces.push(Piece::Constant(0.0));
                breakpoints.push(a);
            } else if a < last {
                return Err(Error::InvalidArgument(format!("interval starting at {a} overlaps")));
            }
            pieces.push(Piece::Constant(c));
            breakpoints.push(b);
        }
        Self::new(breakpoints, pieces)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// `(first, last)` breakpoint; the function vanishes outside.
    pub fn span(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().unwrap())
    }

    pub fn is_piecewise_constant(&self) -> bool {
        self.pieces.iter().all(|p| match p {
            Piece::Constant(_) => true,
            Piece::Linear { slope, .. } => *slope == 0.0,
        })
    }

    fn piece_index(&self, x: f64) -> Option<usize> {
        let (lo, hi) = self.span();
        if !(x >= lo && x < hi) {
            return None;
        }
        Some(self.breakpoints.partition_point(|&b| b <= x) - 1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.piece_index(x).map_or(0.0, |i| self.pieces[i].eval(x))
    }

    /// Limit from the left at `x`.
    pub fn eval_left(&self, x: f64) -> f64 {
        let (lo, hi) = self.span();
        if !(x > lo && x <= hi) {
            return 0.0;
        }
        let i = self.breakpoints.partition_point(|&b| b < x) - 1;
        self.pieces[i].eval(x)
    }

    /// Exact integral over the whole line.
    pub fn integral(&self) -> f64 {
        self.pieces
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(p, w)| p.integral(w[0], w[1]))
            .sum()
    }

    /// Exact integral over `[a, b]`.
    pub fn integral_over(&self, a: f64, b: f64) -> f64 {
        let mut total = 0.0;
        self.for_each_overlap(a, b, |p, lo, hi| total += p.integral(lo, hi));
        total
    }

    fn for_each_overlap(&self, a: f64, b: f64, mut f: impl FnMut(&Piece, f64, f64)) {
        if !(b > a) {
            return;
        }
        let start = self.breakpoints.partition_point(|&x| x <= a).saturating_sub(1);
        for i in start..self.pieces.len() {
            let (lo, hi) = (self.breakpoints[i], self.breakpoints[i + 1]);
            if lo >= b {
                break;
            }
            let (lo, hi) = (lo.max(a), hi.min(b));
            if hi > lo {
                f(&self.pieces[i], lo, hi);
            }
        }
    }

    /// Exact `∫ |self - other| dx` over the whole line.
    pub fn l1_distance(&self, other: &PiecewiseFn) -> f64 {
        let mut cuts: Vec<f64> = self.breakpoints.iter().chain(&other.breakpoints).copied().collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mid = 0.5 * (a + b);
            let (pa, pb) = (self.linear_at(mid), other.linear_at(mid));
            total += abs_linear_integral(pa.0 - pb.0, pa.1 - pb.1, a, b);
        }
        total
    }

    /// `(intercept, slope)` of the piece active at `x`, zero outside.
    fn linear_at(&self, x: f64) -> (f64, f64) {
        self.piece_index(x).map_or((0.0, 0.0), |i| self.pieces[i].coefficients())
    }

    /// Cell averages over a fine uniform grid covering the support; used to
    /// turn a piecewise-linear function back into piecewise-constant data.
    pub fn resample_constant(&self, dx: f64) -> Result<PiecewiseFn> {
        let (lo, hi) = self.span();
        let n = ((hi - lo) / dx).ceil().max(1.0) as usize;
        let grid = Grid1D::new(lo, dx, n)?;
        Ok(project_cell_averages(self, &grid)?.to_piecewise())
    }
}

/// `∫_a^b |c0 + c1 x| dx`, splitting at the root.
pub(crate) fn abs_linear_integral(c0: f64, c1: f64, a: f64, b: f64) -> f64 {
    let f = |x: f64| c0 + c1 * x;
    let piece = |lo: f64, hi: f64| ((hi - lo) * f(0.5 * (lo + hi))).abs();
    if c1 != 0.0 {
        let root = -c0 / c1;
        if root > a && root < b {
            return piece(a, root) + piece(root, b);
        }
    }
    piece(a, b)
}

/// Exact cell averages of `u0` over every cell of `grid`.
///
/// Cell edges within `1e-9 dx` of a breakpoint of `u0` are snapped onto it,
/// so data aligned with the grid projects without round-off leakage.
pub fn project_cell_averages(u0: &PiecewiseFn, grid: &Grid1D) -> Result<GridFunction> {
    let (lo, hi) = u0.span();
    let tol = EDGE_SNAP * grid.dx();
    let support = support_of(u0);
    if let Some((s_lo, s_hi)) = support {
        if s_lo < grid.x_min() - tol {
            return Err(Error::SupportOutsideGrid { side: Side::Left, edge: s_lo, limit: grid.x_min() });
        }
        if s_hi > grid.x_max() + tol {
            return Err(Error::SupportOutsideGrid { side: Side::Right, edge: s_hi, limit: grid.x_max() });
        }
    }
    let snap = |x: f64| -> f64 {
        let i = u0.breakpoints.partition_point(|&b| b < x);
        for k in [i.wrapping_sub(1), i] {
            if let Some(&b) = u0.breakpoints.get(k) {
                if (b - x).abs() <= tol {
                    return b;
                }
            }
        }
        x
    };
    let mut values = vec![0.0; grid.n_cells()];
    let mut left = snap(grid.edge(0));
    for (j, v) in values.iter_mut().enumerate() {
        let right = snap(grid.edge(j + 1));
        if right > lo && left < hi {
            let width = right - left;
            let mut avg = 0.0;
            u0.for_each_overlap(left, right, |p, a, b| {
                avg += if a == left && b == right {
                    // piece covers the whole cell
                    match *p {
                        Piece::Constant(c) => c,
                        Piece::Linear { .. } => p.eval(0.5 * (a + b)),
                    }
                } else {
                    p.integral(a, b) / width
                };
            });
            *v = avg;
        }
        left = right;
    }
    GridFunction::new(*grid, values)
}

/// Smallest interval outside which `f` vanishes identically, if any.
fn support_of(f: &PiecewiseFn) -> Option<(f64, f64)> {
    let nonzero = |p: &Piece| {
        let (a, b) = p.coefficients();
        a != 0.0 || b != 0.0
    };
    let first = f.pieces.iter().position(nonzero)?;
    let last = f.pieces.iter().rposition(nonzero)?;
    Some((f.breakpoints[first], f.breakpoints[last + 1]))
}

/// Discrete norm `‖v‖_{p,Δ}`: `(Δx Σ|v_j|^p)^{1/p}` for finite `p`,
/// `max |v_j|` for `p = ∞`.
pub fn discrete_norm(v: &GridFunction, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidArgument(format!("norm exponent must be >= 1, got {p}")));
    }
    let vals = v.values();
    if p == f64::INFINITY {
        return Ok(vals.iter().fold(0.0, |m: f64, x| m.max(x.abs())));
    }
    let dx = v.dx();
    if p == 1.0 {
        return Ok(dx * vals.iter().map(|x| x.abs()).sum::<f64>());
    }
    if p == 2.0 {
        return Ok((dx * vals.iter().map(|x| x * x).sum::<f64>()).sqrt());
    }
    // scale by the max to keep |v|^p away from under/overflow
    let scale = vals.iter().fold(0.0, |m: f64, x| m.max(x.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    let s: f64 = vals.iter().map(|x| (x.abs() / scale).powf(p)).sum();
    Ok(scale * (dx * s).powf(1.0 / p))
}

/// `Σ_j |v_{j+1} - v_j|`, counting the jumps to the zero tails at both ends.
pub fn total_variation(v: &GridFunction) -> f64 {
    let vals = v.values();
    let inner: f64 = vals.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    inner + vals[0].abs() + vals[vals.len() - 1].abs()
}

/// A stored state `u^n` at time `t_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub n: u64,
    pub t: f64,
    pub u: GridFunction,
}

/// Value of the space-time piecewise-constant interpolant of a recorded
/// trajectory: `u_j^n` for `x` in cell `j` and `t_n <= t < t_{n+1}`.
///
/// `history` must be sorted by time. The final snapshot covers its own
/// time instant only.
pub fn interpolate_trajectory(history: &[Snapshot], t: f64, x: f64) -> Result<f64> {
    let (first, last) = match (history.first(), history.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::InvalidArgument("empty history".into())),
    };
    if !(t >= first.t && t <= last.t) {
        return Err(Error::TimeOutOfRange { t, t_min: first.t, t_max: last.t });
    }
    let k = history.partition_point(|s| s.t <= t) - 1;
    Ok(history[k].u.eval(x))
}
