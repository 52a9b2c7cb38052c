//! Self-intersection numbers of closed geodesics from holonomy.
//!
//! For a cyclic word `w` of length `n` with holonomy `g`, let `g_j` be the
//! holonomy of the rotation starting at letter `j` and `P_j` the prefix of
//! length `j`, so that `g_j = P_j⁻¹ g P_j`. Every lift of the geodesic is
//! `h·axis(g)`; candidates are `h = P_j u P_k⁻¹` with `u` in a word ball of
//! the given radius. In the frame of `g_j` the test is whether `axis(g_j)` and
//! `u·axis(g_k)` cross, and the crossing point is located on `axis(g)`
//! through accumulated frame offsets (single-letter maps only, so no long
//! products enter the coordinates). Distinct crossing points modulo the
//! period, each seen once per branch, give twice the self-intersection number.

use crate::error::{Error, Result};
use crate::hypgeo::{BoundaryPoint, Isometry};
use crate::surface::HolonomyRep;
use crate::word::{Letter, Word};

/// Events closer than this (in position along the axis and in the angle key)
/// are the same crossing.
pub const EVENT_TOL: f64 = 1e-7;

/// A candidate whose chart values differ in magnitude by more than this
/// factor meets the axis at an angle below the resolution of the endpoint
/// arithmetic; it is neither counted nor ruled out, only reported.
pub const UNRESOLVED_RATIO: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntersectionCount {
    pub count: usize,
    /// Ball radius used for the reported count.
    pub radius: usize,
    /// The count did not change when the radius grew by 2.
    pub certified: bool,
}

/// Precomputed frames for one cyclic word.
struct Frames {
    n: usize,
    glide: bool,
    period: f64,
    /// Endpoints `(repelling, attracting)` of each rotation.
    ends: Vec<(BoundaryPoint, BoundaryPoint)>,
    /// Orientation-preserving chart sending `axis(g_j)` to the imaginary axis.
    charts: Vec<Isometry>,
    /// Offset of frame `j` along `axis(g)`.
    offset: Vec<f64>,
    /// Parity of orientation-reversing letters in the prefix of length `j`.
    flip: Vec<bool>,
    letters: Vec<Letter>,
}

fn chart(ends: (BoundaryPoint, BoundaryPoint)) -> Result<Isometry> {
    use BoundaryPoint::*;
    match ends {
        (Finite(r), Finite(a)) => {
            let s = if r > a { 1.0 } else { -1.0 };
            Isometry::new(s, -s * r, 1.0, -a)
        }
        (Finite(r), Infinity) => Isometry::new(1.0, -r, 0.0, 1.0),
        (Infinity, Finite(a)) => Isometry::new(0.0, 1.0, -1.0, a),
        _ => Err(Error::NoAxis("degenerate")),
    }
}

fn letter_iso(rep: &HolonomyRep, l: Letter) -> Result<Isometry> {
    let g = rep.generator(l.label)?;
    Ok(if l.inverse { g.inverse() } else { g })
}

impl Frames {
    fn new(rep: &HolonomyRep, w: &Word) -> Result<Self> {
        let n = w.len();
        let letters = w.letters().to_vec();
        let mut ends = Vec::with_capacity(n);
        let mut charts = Vec::with_capacity(n);
        let mut glide = false;
        for j in 0..n {
            let g = rep.holonomy(&w.rotated(j))?;
            glide = g.reverses_orientation();
            let e = g.axis_endpoints()?;
            ends.push(e);
            charts.push(chart(e)?);
        }
        let mut offset = vec![0.0; n + 1];
        let mut flip = vec![false; n + 1];
        for j in 0..n {
            let wl = letter_iso(rep, letters[j])?;
            // chart_j · w_j · chart_{j+1}⁻¹ fixes 0 and ∞
            let m = charts[j].compose(&wl).compose(&charts[(j + 1) % n].inverse()).entries();
            offset[j + 1] = offset[j] + (m[0] / m[3]).abs().ln();
            flip[j + 1] = flip[j] ^ wl.reverses_orientation();
        }
        Ok(Self {
            n,
            glide,
            period: offset[n],
            ends,
            charts,
            offset,
            flip,
            letters,
        })
    }
}

/// Reduced words of length ≤ `radius` with their holonomy.
fn word_ball(rep: &HolonomyRep, radius: usize) -> Result<Vec<(Vec<Letter>, Isometry)>> {
    let mut alphabet = Vec::new();
    for c in rep.labels() {
        for inv in [false, true] {
            let l = Letter::new(c, inv);
            alphabet.push((l, letter_iso(rep, l)?));
        }
    }
    let mut out = vec![(Vec::new(), Isometry::identity())];
    let mut shell = out.clone();
    for _ in 0..radius {
        let mut next = Vec::new();
        for (w, m) in &shell {
            for (l, lm) in &alphabet {
                if w.last() == Some(&l.inv()) {
                    continue;
                }
                let mut w2 = w.clone();
                w2.push(*l);
                next.push((w2, m.compose(lm)));
            }
        }
        out.extend(next.iter().cloned());
        shell = next;
    }
    Ok(out)
}

/// True when `P_j u P_k⁻¹` is a power of the word (as a reduced word).
fn in_cyclic_subgroup(f: &Frames, j: usize, u: &[Letter], k: usize) -> bool {
    let mut h: Vec<Letter> = Vec::with_capacity(j + u.len() + k);
    let push = |h: &mut Vec<Letter>, l: Letter| {
        if h.last() == Some(&l.inv()) {
            h.pop();
        } else {
            h.push(l);
        }
    };
    for &l in &f.letters[..j] {
        push(&mut h, l);
    }
    for &l in u {
        push(&mut h, l);
    }
    for &l in f.letters[..k].iter().rev() {
        push(&mut h, l.inv());
    }
    let n = f.n;
    if !h.len().is_multiple_of(n) {
        return false;
    }
    if h.is_empty() {
        return true;
    }
    let fwd = h.iter().enumerate().all(|(i, l)| *l == f.letters[i % n]);
    let bwd = h
        .iter()
        .enumerate()
        .all(|(i, l)| *l == f.letters[n - 1 - (i % n)].inv());
    fwd || bwd
}

fn near_same(a: BoundaryPoint, b: BoundaryPoint) -> bool {
    match (a, b) {
        (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => true,
        (BoundaryPoint::Finite(x), BoundaryPoint::Finite(y)) => (x - y).abs() <= 1e-9 * (1.0 + x.abs().max(y.abs())),
        (BoundaryPoint::Finite(x), BoundaryPoint::Infinity) | (BoundaryPoint::Infinity, BoundaryPoint::Finite(x)) => {
            x.abs() > 1e9
        }
    }
}

fn chart_value(c: &Isometry, p: BoundaryPoint) -> f64 {
    c.apply_boundary(p).to_f64()
}

struct Events {
    /// `(position mod period, angle key)`, deduplicated.
    found: Vec<(f64, f64)>,
    unresolved: usize,
}

/// Crossing events of the lifts in `ball`. With `stop_at_first`, returns
/// after the first genuine crossing.
fn crossing_events(rep: &HolonomyRep, f: &Frames, ball: &[(Vec<Letter>, Isometry)], stop_at_first: bool) -> Events {
    let mut events: Vec<(f64, f64)> = Vec::new();
    let mut unresolved = 0;
    for (u, um) in ball {
        for k in 0..f.n {
            let (rk, ak) = f.ends[k];
            let p1 = um.apply_boundary(rk);
            let p2 = um.apply_boundary(ak);
            for j in 0..f.n {
                let v1 = chart_value(&f.charts[j], p1);
                let v2 = chart_value(&f.charts[j], p2);
                if !(v1 * v2 < 0.0) || !v1.is_finite() || !v2.is_finite() {
                    continue;
                }
                let stab = if rep.free {
                    in_cyclic_subgroup(f, j, u, k)
                } else {
                    let (rj, aj) = f.ends[j];
                    (near_same(p1, rj) || near_same(p1, aj)) && (near_same(p2, rj) || near_same(p2, aj))
                };
                if stab {
                    continue;
                }
                if v1.abs().min(v2.abs()) < UNRESOLVED_RATIO * v1.abs().max(v2.abs()) {
                    unresolved += 1;
                    continue;
                }
                let t = 0.5 * (v1 * v2).abs().ln() + f.offset[j];
                let mut kappa = (v1 + v2) / (v1 - v2).abs();
                if f.flip[j] {
                    kappa = -kappa;
                }
                let m = (t / f.period).floor();
                let t = t - m * f.period;
                if f.glide && (m as i64).rem_euclid(2) == 1 {
                    kappa = -kappa;
                }
                let sign = if f.glide { -1.0 } else { 1.0 };
                let dup = events.iter().any(|&(s, q)| {
                    [(t, kappa), (t + f.period, sign * kappa), (t - f.period, sign * kappa)]
                        .iter()
                        .any(|&(t2, k2)| (s - t2).abs() < EVENT_TOL && (q - k2).abs() < EVENT_TOL)
                });
                if !dup {
                    events.push((t, kappa));
                    if stop_at_first {
                        return Events {
                            found: events,
                            unresolved,
                        };
                    }
                }
            }
        }
    }
    Events {
        found: events,
        unresolved,
    }
}

fn count_from(small: &Events, big: &Events, radius: usize) -> IntersectionCount {
    let n = small.found.len();
    IntersectionCount {
        count: n / 2,
        radius,
        certified: n == big.found.len() && n.is_multiple_of(2) && big.unresolved == 0,
    }
}

fn simple_from(rep: &HolonomyRep, f: &Frames, ball: &[(Vec<Letter>, Isometry)], small_len: usize) -> (bool, bool) {
    let small = crossing_events(rep, f, &ball[..small_len], true);
    if !small.found.is_empty() {
        // a crossing found at a smaller radius persists at larger ones
        return (false, true);
    }
    let more = crossing_events(rep, f, &ball[small_len..], true);
    (
        true,
        more.found.is_empty() && small.unresolved == 0 && more.unresolved == 0,
    )
}

fn prepare(rep: &HolonomyRep, w: &Word) -> Result<Frames> {
    let w = w.cyclically_reduced();
    if !w.is_primitive() {
        return Err(Error::NonPrimitive);
    }
    Frames::new(rep, &w)
}

/// Number of transverse self-intersections of the closed geodesic of `w`.
///
/// `search_budget` is the radius of the word ball; the count is certified
/// when radius `search_budget + 2` gives the same value.
pub fn self_intersection_number(rep: &HolonomyRep, w: &Word, search_budget: usize) -> Result<IntersectionCount> {
    let f = prepare(rep, w)?;
    let big = word_ball(rep, search_budget + 2)?;
    let small_len = big.iter().take_while(|(u, _)| u.len() <= search_budget).count();
    let e_small = crossing_events(rep, &f, &big[..small_len], false);
    let e_big = crossing_events(rep, &f, &big, false);
    Ok(count_from(&e_small, &e_big, search_budget))
}

/// Simplicity test with early exit. Returns `(simple, certified)`: the
/// geodesic is reported simple when no crossing is found at the given radius,
/// and certified when radius + 2 agrees.
pub fn is_simple(rep: &HolonomyRep, w: &Word, search_budget: usize) -> Result<(bool, bool)> {
    let f = prepare(rep, w)?;
    let big = word_ball(rep, search_budget + 2)?;
    let small_len = big.iter().take_while(|(u, _)| u.len() <= search_budget).count();
    Ok(simple_from(rep, &f, &big, small_len))
}

/// Word ball shared across many simplicity tests on the same representation.
pub struct SimplicityTester<'a> {
    rep: &'a HolonomyRep,
    ball: Vec<(Vec<Letter>, Isometry)>,
    small_len: usize,
    pub radius: usize,
}

impl<'a> SimplicityTester<'a> {
    pub fn new(rep: &'a HolonomyRep, radius: usize) -> Result<Self> {
        let ball = word_ball(rep, radius + 2)?;
        let small_len = ball.iter().take_while(|(u, _)| u.len() <= radius).count();
        Ok(Self {
            rep,
            ball,
            small_len,
            radius,
        })
    }

    /// `(simple, certified)` as in [`is_simple`].
    pub fn test(&self, w: &Word) -> Result<(bool, bool)> {
        let f = prepare(self.rep, w)?;
        Ok(simple_from(self.rep, &f, &self.ball, self.small_len))
    }

    /// Full count at the tester's radius, certified against radius + 2.
    pub fn count(&self, w: &Word) -> Result<IntersectionCount> {
        let f = prepare(self.rep, w)?;
        let a = crossing_events(self.rep, &f, &self.ball[..self.small_len], false);
        let b = crossing_events(self.rep, &f, &self.ball, false);
        Ok(count_from(&a, &b, self.radius))
    }
}
