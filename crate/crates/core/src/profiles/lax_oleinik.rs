//! Entropy solution of the inviscid Burgers equation for piecewise-constant
//! compactly supported data, through the Lax-Oleinik formula
//!
//!   u(x, t) = (x - y*)/t,   y* = argmin_y { U0(y) + (x - y)²/(2t) },
//!
//! with `U0(y) = ∫_{-∞}^y u0`. Minimisers are read off the lower convex hull
//! of `ψ(y) = U0(y) + y²/(2t)`, which is a chain of parabolic arcs, so the
//! result is exact up to rounding.

use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::grid::{Piece, PiecewiseFn};

/// `ψ(y) = y²/(2t) + c y + α` on `[lo, hi]`.
#[derive(Debug, Clone, Copy)]
struct Arc {
    c: f64,
    alpha: f64,
    lo: f64,
    hi: f64,
}

impl Arc {
    fn psi(&self, t: f64, y: f64) -> f64 {
        y * y / (2.0 * t) + self.c * y + self.alpha
    }

    fn dpsi(&self, t: f64, y: f64) -> f64 {
        y / t + self.c
    }
}

/// Part `[a, b]` of arc `k` lying on the hull, reached from the previous
/// element by a tangent of slope `sigma`.
#[derive(Debug, Clone, Copy)]
struct Elem {
    k: usize,
    a: f64,
    b: f64,
    sigma: f64,
}

fn constants_of(u0: &PiecewiseFn) -> Result<Vec<f64>> {
    u0.pieces()
        .iter()
        .map(|p| match *p {
            Piece::Constant(c) => Ok(c),
            Piece::Linear { intercept, slope } if slope == 0.0 => Ok(intercept),
            _ => Err(Error::NotPiecewiseConstant),
        })
        .collect()
}

/// Arcs of `ψ`, including the two tails; adjacent pieces with equal values
/// are merged since `U0` is continuous.
fn build_arcs(u0: &PiecewiseFn) -> Result<Vec<Arc>> {
    let values = constants_of(u0)?;
    let bps = u0.breakpoints();
    let mut arcs = vec![Arc { c: 0.0, alpha: 0.0, lo: f64::NEG_INFINITY, hi: bps[0] }];
    let mut big_u = 0.0;
    for (i, &c) in values.iter().enumerate() {
        let (lo, hi) = (bps[i], bps[i + 1]);
        let last = arcs.last_mut().unwrap();
        if last.c == c {
            last.hi = hi;
        } else {
            arcs.push(Arc { c, alpha: big_u - c * lo, lo, hi });
        }
        big_u += c * (hi - lo);
    }
    let last = arcs.last_mut().unwrap();
    if last.c == 0.0 {
        last.hi = f64::INFINITY;
    } else {
        let lo = last.hi;
        arcs.push(Arc { c: 0.0, alpha: big_u, lo, hi: f64::INFINITY });
    }
    Ok(arcs)
}

/// Support function `h(σ) = max_y (σ y - ψ(y))` over `[a, b]` and its maximiser.
fn support(arc: &Arc, a: f64, b: f64, t: f64, sigma: f64) -> (f64, f64) {
    let y = (t * (sigma - arc.c)).clamp(a, b);
    (sigma * y - arc.psi(t, y), y)
}

/// Common lower tangent of `ψ` on two hull pieces, the first lying to the
/// left of the second. Returns `(σ, y1, y2)`.
fn common_tangent(arcs: &[Arc], e: Elem, q: Elem, t: f64) -> (f64, f64, f64) {
    let (ae, aq) = (&arcs[e.k], &arcs[q.k]);
    // a convex kink joining the two pieces: h_Q - h_E vanishes on a whole
    // interval, so take the slope leaving the kink directly
    if e.b == q.a && ae.c <= aq.c {
        return (aq.dpsi(t, q.a), q.a, q.a);
    }
    // h_Q - h_E is nondecreasing in σ
    let diff = |s: f64| support(aq, q.a, q.b, t, s).0 - support(ae, e.a, e.b, t, s).0;
    let marks: Vec<f64> = [(ae.c, e.a), (ae.c, e.b), (aq.c, q.a), (aq.c, q.b)]
        .iter()
        .filter(|(_, y)| y.is_finite())
        .map(|&(c, y)| c + y / t)
        .collect();
    let lo0 = marks.iter().copied().fold(f64::INFINITY, f64::min);
    let hi0 = marks.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut lo, mut hi) = (lo0 - 1.0, hi0 + 1.0);
    let mut width = 1.0 + (hi - lo);
    for _ in 0..200 {
        if diff(lo) <= 0.0 {
            break;
        }
        lo -= width;
        width *= 2.0;
    }
    width = 1.0 + (hi - lo);
    for _ in 0..200 {
        if diff(hi) >= 0.0 {
            break;
        }
        hi += width;
        width *= 2.0;
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if diff(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let sigma = if diff(lo).abs() <= diff(hi).abs() { lo } else { hi };
    let y1 = support(ae, e.a, e.b, t, sigma).1;
    let y2 = support(aq, q.a, q.b, t, sigma).1;
    (sigma, y1, y2)
}

/// Slope with which the hull enters the left end of `hull[i]`. A
/// single-point element passes on the slope entering it.
fn incoming_slope(arcs: &[Arc], hull: &[Elem], i: usize, t: f64) -> f64 {
    if i == 0 {
        return f64::NEG_INFINITY;
    }
    let (p, e) = (hull[i - 1], hull[i]);
    let (ap, ae) = (&arcs[p.k], &arcs[e.k]);
    if p.b < e.a {
        (ae.psi(t, e.a) - ap.psi(t, p.b)) / (e.a - p.b)
    } else if p.a < p.b {
        ap.dpsi(t, p.b)
    } else {
        incoming_slope(arcs, hull, i - 1, t)
    }
}

fn lower_hull(arcs: &[Arc], t: f64) -> Vec<Elem> {
    let mut hull: Vec<Elem> = Vec::with_capacity(arcs.len());
    for (k, arc) in arcs.iter().enumerate() {
        let mut q = Elem { k, a: arc.lo, b: arc.hi, sigma: f64::NEG_INFINITY };
        loop {
            let Some(&e) = hull.last() else {
                hull.push(q);
                break;
            };
            let (sigma, y1, y2) = common_tangent(arcs, e, q, t);
            let s_in = incoming_slope(arcs, &hull, hull.len() - 1, t);
            let tol = 1e-13 * (1.0 + s_in.abs());
            if y1 <= e.a && sigma < s_in - tol {
                hull.pop();
                continue;
            }
            let last = hull.last_mut().unwrap();
            last.b = y1.max(e.a);
            q.a = y2;
            q.sigma = sigma;
            hull.push(q);
            break;
        }
    }
    hull
}

struct Emitter {
    x: f64,
    eps: f64,
    breakpoints: Vec<f64>,
    pieces: Vec<Piece>,
}

impl Emitter {
    fn push(&mut self, x_end: f64, piece: Piece) {
        if x_end > self.x + self.eps {
            if self.breakpoints.is_empty() {
                self.breakpoints.push(self.x);
            }
            self.pieces.push(piece);
            self.breakpoints.push(x_end);
            self.x = x_end;
        }
    }
}

fn fan(y0: f64, t: f64) -> Piece {
    Piece::Linear { intercept: -y0 / t, slope: 1.0 / t }
}

/// Stretch of the hull: an arc segment or a bridge, with the slopes at
/// its ends and the `y` at which it ends.
#[derive(Debug, Clone, Copy)]
struct Event {
    s_start: f64,
    s_end: f64,
    y_end: f64,
    value: Option<f64>,
}

fn hull_events(arcs: &[Arc], hull: &[Elem], t: f64) -> Vec<Event> {
    let mut events = Vec::with_capacity(2 * hull.len());
    for (i, e) in hull.iter().enumerate() {
        if i > 0 && hull[i - 1].b < e.a {
            events.push(Event { s_start: e.sigma, s_end: e.sigma, y_end: e.a, value: None });
        }
        if e.a < e.b {
            let arc = &arcs[e.k];
            let s_start = if e.a.is_finite() { arc.dpsi(t, e.a) } else { f64::NEG_INFINITY };
            let s_end = if e.b.is_finite() { arc.dpsi(t, e.b) } else { f64::INFINITY };
            events.push(Event { s_start, s_end, y_end: e.b, value: Some(arc.c) });
        }
    }
    events
}

/// Exact entropy solution at time `t` of Burgers' equation with
/// piecewise-constant initial data `u0`. Shocks are stored as jumps; the
/// returned function is left-closed at each of them.
pub fn exact_burgers(u0: &PiecewiseFn, t: f64) -> Result<PiecewiseFn> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("t must be positive, got {t}")));
    }
    let arcs = build_arcs(u0)?;
    if arcs.len() == 1 {
        return Ok(PiecewiseFn::zero());
    }
    let hull = lower_hull(&arcs, t);
    let events = hull_events(&arcs, &hull, t);
    let (lo, hi) = u0.span();
    let umax = arcs.iter().map(|a| a.c.abs()).fold(0.0, f64::max);
    let scale = lo.abs().max(hi.abs()) + t * umax + 1.0;
    // slopes map to positions x = t s; the tails are left out
    let mut out = Emitter { x: t * events[0].s_end, eps: 1e-13 * scale, breakpoints: Vec::new(), pieces: Vec::new() };
    for (i, pair) in events.windows(2).enumerate() {
        let (ev, next) = (pair[0], pair[1]);
        if i > 0 {
            if let Some(c) = ev.value {
                out.push(t * ev.s_end, Piece::Constant(c));
            }
        }
        out.push(t * next.s_start, fan(ev.y_end, t));
    }
    if out.pieces.is_empty() {
        return Ok(PiecewiseFn::zero());
    }
    PiecewiseFn::new(out.breakpoints, out.pieces)
}

/// Direct evaluation of the Lax-Oleinik formula at a single point, taking
/// the leftmost minimiser. Costs one pass over the pieces of `u0`.
pub fn lax_oleinik_value(u0: &PiecewiseFn, t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("t must be positive, got {t}")));
    }
    let arcs = build_arcs(u0)?;
    let mut best = (f64::INFINITY, f64::INFINITY);
    for arc in &arcs {
        let y = (x - t * arc.c).clamp(arc.lo, arc.hi);
        let value = arc.c * y + arc.alpha + (x - y) * (x - y) / (2.0 * t);
        if value < best.0 || (value == best.0 && y < best.1) {
            best = (value, y);
        }
    }
    Ok((x - best.1) / t)
}

/// Exact solution operator for fixed piecewise-constant data, caching the
/// profiles already computed.
#[derive(Debug)]
pub struct ExactSolution {
    u0: PiecewiseFn,
    cache: Mutex<Vec<(f64, PiecewiseFn)>>,
}

impl ExactSolution {
    pub fn new(u0: PiecewiseFn) -> Result<Self> {
        constants_of(&u0)?;
        Ok(Self { u0, cache: Mutex::new(Vec::new()) })
    }

    pub fn initial(&self) -> &PiecewiseFn {
        &self.u0
    }

    pub fn at(&self, t: f64) -> Result<PiecewiseFn> {
        let mut cache = self.cache.lock().unwrap_or_else(|e| e.into_inner());
        if let Some((_, f)) = cache.iter().find(|(s, _)| *s == t) {
            return Ok(f.clone());
        }
        let f = exact_burgers(&self.u0, t)?;
        cache.push((t, f.clone()));
        Ok(f)
    }

    pub fn eval(&self, t: f64, x: f64) -> Result<f64> {
        Ok(self.at(t)?.eval(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boxed(c: f64) -> PiecewiseFn {
        PiecewiseFn::from_constants(&[(0.0, 1.0, c)]).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn positive_box_before_and_after_interaction() {
        let u0 = boxed(1.0);
        // t = 1: fan on (0, 1), plateau 1 on (1, 1.5), shock at 1 + t/2
        let s = exact_burgers(&u0, 1.0).unwrap();
        for &(x, v) in &[(0.25, 0.25), (0.75, 0.75), (1.2, 1.0), (1.49, 1.0), (1.51, 0.0), (-0.1, 0.0)] {
            assert!(close(s.eval(x), v, 1e-13), "x={x}: {} vs {v}", s.eval(x));
        }
        assert!(close(s.integral(), 1.0, 1e-13));
        // t = 8: N-wave x/t on (0, √(2t))
        let s = exact_burgers(&u0, 8.0).unwrap();
        let (lo, hi) = s.span();
        assert!(close(lo, 0.0, 1e-13) && close(hi, 4.0, 1e-12), "{lo} {hi}");
        assert!(close(s.eval(3.0), 3.0 / 8.0, 1e-13));
    }

    #[test]
    fn negative_box() {
        let u0 = boxed(-1.0);
        let s = exact_burgers(&u0, 1.0).unwrap();
        // shock at -t/2, plateau -1 on (-1/2, 0), fan (x - 1)/t on (0, 1)
        for &(x, v) in &[(-0.6, 0.0), (-0.4, -1.0), (-0.01, -1.0), (0.5, -0.5), (1.1, 0.0)] {
            assert!(close(s.eval(x), v, 1e-13), "x={x}: {} vs {v}", s.eval(x));
        }
        assert!(close(s.integral(), -1.0, 1e-13));
    }

    #[test]
    fn shock_left_limit_and_jump() {
        let s = exact_burgers(&boxed(1.0), 1.0).unwrap();
        assert!(close(s.eval_left(1.5), 1.0, 1e-12));
        assert_eq!(s.eval(1.5), 0.0);
    }

    #[test]
    fn zero_data_and_errors() {
        let z = exact_burgers(&PiecewiseFn::zero(), 3.0).unwrap();
        assert_eq!(z.integral(), 0.0);
        assert!(exact_burgers(&boxed(1.0), 0.0).is_err());
        let lin = PiecewiseFn::new(vec![0.0, 1.0], vec![Piece::Linear { intercept: 0.0, slope: 1.0 }]).unwrap();
        assert!(matches!(exact_burgers(&lin, 1.0), Err(Error::NotPiecewiseConstant)));
    }

    /// Brute-force minimisation of the Lax-Oleinik functional over a fine
    /// grid of `y` plus the data breakpoints.
    fn brute_force(u0: &PiecewiseFn, t: f64, x: f64) -> f64 {
        let (lo, hi) = u0.span();
        let big_u = |y: f64| u0.integral_over(lo.min(y) - 1.0, y);
        let mut ys: Vec<f64> = u0.breakpoints().to_vec();
        let (a, b) = (lo.min(x) - 1.0, hi.max(x) + 1.0);
        let n = 200_000;
        ys.extend((0..=n).map(|k| a + (b - a) * k as f64 / n as f64));
        ys.push(x);
        for &bp in u0.breakpoints() {
            ys.push(x - t * u0.eval(bp));
        }
        let mut best = (f64::INFINITY, 0.0);
        for y in ys {
            let v = big_u(y) + (x - y) * (x - y) / (2.0 * t);
            if v < best.0 {
                best = (v, y);
            }
        }
        (x - best.1) / t
    }

    #[test]
    fn matches_brute_force_on_mixed_data() {
        let u0 = PiecewiseFn::from_constants(&[
            (-2.0, -1.0, 0.7),
            (-1.0, -0.5, -1.3),
            (0.0, 1.0, 2.0),
            (1.0, 1.5, -0.4),
            (2.0, 3.0, 1.1),
        ])
        .unwrap();
        for &t in &[0.1, 0.7, 2.0, 9.0] {
            let s = exact_burgers(&u0, t).unwrap();
            assert!(close(s.integral(), u0.integral(), 1e-12), "mass at t={t}");
            for k in 0..120 {
                let x = -6.0 + 0.1003 * k as f64;
                let exact = s.eval(x);
                let direct = lax_oleinik_value(&u0, t, x).unwrap();
                let brute = brute_force(&u0, t, x);
                // the brute-force minimiser is only located to the y-grid
                let tol = 2.0 * (3.0 + 6.0 + 6.0) / 200_000.0 / t + 1e-12;
                assert!(close(exact, direct, 1e-11), "t={t} x={x}: {exact} vs {direct}");
                assert!(close(exact, brute, tol), "t={t} x={x}: {exact} vs {brute}");
            }
        }
    }

    #[test]
    fn oleinik_condition_holds() {
        let u0 = PiecewiseFn::from_constants(&[(-1.0, 0.0, -0.05), (0.0, 2.0, 0.15)]).unwrap();
        for &t in &[0.5, 10.0, 1000.0] {
            let s = exact_burgers(&u0, t).unwrap();
            for p in s.pieces() {
                if let Piece::Linear { slope, .. } = p {
                    assert!(*slope <= 1.0 / t * (1.0 + 1e-14));
                }
            }
            // upward jumps are forbidden
            for &b in &s.breakpoints()[1..s.breakpoints().len() - 1] {
                assert!(s.eval(b) <= s.eval_left(b) + 1e-12, "t={t} b={b}");
            }
        }
    }

    #[test]
    fn cache_returns_same_profile() {
        let sol = ExactSolution::new(boxed(1.0)).unwrap();
        let a = sol.at(2.5).unwrap();
        let b = sol.at(2.5).unwrap();
        assert_eq!(a, b);
        assert!(close(sol.eval(2.5, 1.0).unwrap(), 0.4, 1e-13));
    }
}
