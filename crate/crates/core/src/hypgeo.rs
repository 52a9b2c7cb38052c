//! Hyperbolic plane primitives in the upper half-plane model.
//!
//! An [`Isometry`] is a real 2×2 matrix with `|det| = 1`. Matrices with
//! positive determinant act by Möbius transformations; matrices with negative
//! determinant act on the conjugate, `z ↦ (a·z̄ + b)/(c·z̄ + d)`, and are the
//! glide reflections that carry one-sided curves. Matrices are only defined up
//! to sign (the group is PGL(2, R)), and every comparison here respects that.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

/// `|tr|` within this distance of 2 is classified as parabolic.
pub const PARABOLIC_TOL: f64 = 1e-9;

/// Orientation predicates with absolute value below this count as degenerate.
pub const ORIENT_TOL: f64 = 1e-10;

/// A point of the ideal boundary `R ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryPoint {
    Finite(f64),
    Infinity,
}

impl BoundaryPoint {
    pub fn is_infinite(self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }

    /// Finite value, or `f64::INFINITY` for the point at infinity.
    pub fn to_f64(self) -> f64 {
        match self {
            BoundaryPoint::Finite(x) => x,
            BoundaryPoint::Infinity => f64::INFINITY,
        }
    }

    /// True when both points agree up to a relative tolerance.
    pub fn approx_eq(self, other: BoundaryPoint, rel: f64) -> bool {
        match (self, other) {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => true,
            (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) => (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs())),
            _ => false,
        }
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Finite(x) => write!(f, "{x}"),
            BoundaryPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// Point of the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidPoint(y));
        }
        Ok(Self { x, y })
    }

    /// The point `i`.
    pub fn i() -> Self {
        Self { x: 0.0, y: 1.0 }
    }

    /// Hyperbolic distance, `cosh d = 1 + |p − q|² / (2·Im p·Im q)`.
    pub fn dist(&self, other: &HPoint) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        // 2·asinh(|p−q| / (2·sqrt(y1·y2))) is the same quantity without the
        // cancellation acosh suffers near zero.
        let chord = (dx * dx + dy * dy).sqrt();
        2.0 * (chord / (2.0 * (self.y * other.y).sqrt())).asinh()
    }
}

/// Free function form of [`HPoint::dist`].
pub fn dist(p: &HPoint, q: &HPoint) -> f64 {
    p.dist(q)
}

/// Isometry type read off the trace and determinant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Translation {
    Identity,
    /// Orientation preserving with `|tr| > 2`; translation length.
    Hyperbolic(f64),
    /// Orientation reversing with hyperbolic square; translation length.
    Glide(f64),
    Parabolic,
    Elliptic,
}

impl Translation {
    /// Translation length for hyperbolic elements and glides.
    pub fn length(self) -> Option<f64> {
        match self {
            Translation::Hyperbolic(l) | Translation::Glide(l) => Some(l),
            _ => None,
        }
    }
}

/// Element of PGL(2, R) stored as a normalized matrix `[a, b, c, d]`.
///
/// The orientation character is tracked as a flag rather than re-read from
/// the computed determinant, which cancels catastrophically once the entries
/// of a long product are large.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Isometry {
    m: [f64; 4],
    rev: bool,
}

/// Products whose determinant terms exceed this are not renormalized: the
/// computed determinant would carry more error than it removes.
const RENORM_LIMIT: f64 = 1e4;

impl Isometry {
    /// Builds `[[a, b], [c, d]]`, rescaled so that `|det| = 1`.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || det == 0.0 {
            return Err(Error::NoAxis("singular"));
        }
        let s = det.abs().sqrt().recip();
        Ok(Self {
            m: [a * s, b * s, c * s, d * s],
            rev: det < 0.0,
        })
    }

    pub fn identity() -> Self {
        Self {
            m: [1.0, 0.0, 0.0, 1.0],
            rev: false,
        }
    }

    /// `diag(l, r)` normalized.
    pub fn diag(l: f64, r: f64) -> Result<Self> {
        Self::new(l, 0.0, 0.0, r)
    }

    /// Translation by `length` along the imaginary axis, upwards.
    pub fn axial_translation(length: f64) -> Self {
        let h = (0.5 * length).exp();
        Self {
            m: [h, 0.0, 0.0, h.recip()],
            rev: false,
        }
    }

    /// Glide along the imaginary axis, `z ↦ −e^ℓ·z̄`.
    pub fn axial_glide(length: f64) -> Self {
        let h = (0.5 * length).exp();
        Self {
            m: [-h, 0.0, 0.0, h.recip()],
            rev: true,
        }
    }

    /// `z ↦ z + t`.
    pub fn horizontal(t: f64) -> Self {
        Self {
            m: [1.0, t, 0.0, 1.0],
            rev: false,
        }
    }

    pub fn entries(&self) -> [f64; 4] {
        self.m
    }

    /// Determinant, `±1` by construction.
    pub fn det(&self) -> f64 {
        if self.rev {
            -1.0
        } else {
            1.0
        }
    }

    /// Determinant evaluated from the entries (for diagnostics).
    pub fn computed_det(&self) -> f64 {
        let [a, b, c, d] = self.m;
        a * d - b * c
    }

    /// True for orientation-reversing elements (negative determinant).
    pub fn reverses_orientation(&self) -> bool {
        self.rev
    }

    pub fn trace(&self) -> f64 {
        self.m[0] + self.m[3]
    }

    /// Matrix product `self · other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = other.m;
        let mut m = [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h];
        let ad = (m[0] * m[3]).abs();
        let bc = (m[1] * m[2]).abs();
        if ad + bc < RENORM_LIMIT {
            let det = (m[0] * m[3] - m[1] * m[2]).abs();
            if det > 0.0 {
                let s = det.sqrt().recip();
                for x in &mut m {
                    *x *= s;
                }
            }
        }
        Isometry {
            m,
            rev: self.rev ^ other.rev,
        }
    }

    pub fn inverse(&self) -> Isometry {
        let [a, b, c, d] = self.m;
        let det = self.det();
        Isometry {
            m: [d / det, -b / det, -c / det, a / det],
            rev: self.rev,
        }
    }

    pub fn square(&self) -> Isometry {
        self.compose(self)
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, k: i64) -> Isometry {
        let base = if k < 0 { self.inverse() } else { *self };
        let mut acc = Isometry::identity();
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq);
            }
            sq = sq.compose(&sq);
            e >>= 1;
        }
        acc
    }

    /// `self · other · self⁻¹`.
    pub fn conjugate(&self, other: &Isometry) -> Isometry {
        self.compose(other).compose(&self.inverse())
    }

    /// Distance to `±identity` in the max-entry norm.
    pub fn identity_residual(&self) -> f64 {
        let [a, b, c, d] = self.m;
        let plus = (a - 1.0).abs().max(b.abs()).max(c.abs()).max((d - 1.0).abs());
        let minus = (a + 1.0).abs().max(b.abs()).max(c.abs()).max((d + 1.0).abs());
        plus.min(minus)
    }

    /// Entrywise distance up to the overall sign.
    pub fn projective_distance(&self, other: &Isometry) -> f64 {
        let mut plus = 0.0f64;
        let mut minus = 0.0f64;
        for i in 0..4 {
            plus = plus.max((self.m[i] - other.m[i]).abs());
            minus = minus.max((self.m[i] + other.m[i]).abs());
        }
        plus.min(minus)
    }

    /// Action on the upper half-plane.
    pub fn apply(&self, p: HPoint) -> Result<HPoint> {
        let [a, b, c, d] = self.m;
        let (x, y) = if self.rev { (p.x, -p.y) } else { (p.x, p.y) };
        // (a z + b) / (c z + d) with z = x + i y
        let nr = a * x + b;
        let ni = a * y;
        let dr = c * x + d;
        let di = c * y;
        let den = dr * dr + di * di;
        if den == 0.0 || !den.is_finite() {
            return Err(Error::DegenerateImage);
        }
        let re = (nr * dr + ni * di) / den;
        let im = (ni * dr - nr * di) / den;
        if !(im > 0.0) || !re.is_finite() || !im.is_finite() {
            return Err(Error::DegenerateImage);
        }
        Ok(HPoint { x: re, y: im })
    }

    /// Action on the ideal boundary (conjugation is trivial there).
    pub fn apply_boundary(&self, p: BoundaryPoint) -> BoundaryPoint {
        let [a, b, c, d] = self.m;
        match p {
            BoundaryPoint::Infinity => {
                if c == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(a / c)
                }
            }
            BoundaryPoint::Finite(x) => {
                let den = c * x + d;
                if den == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    let v = (a * x + b) / den;
                    if v.is_finite() {
                        BoundaryPoint::Finite(v)
                    } else {
                        BoundaryPoint::Infinity
                    }
                }
            }
        }
    }

    /// Classifies the element and returns its translation length when it has one.
    ///
    /// A glide's length is half that of its square. The square's trace is
    /// taken from `tr(g²) = tr(g)² − 2·det(g)` rather than by multiplying
    /// matrices, which keeps long words accurate.
    pub fn translation_length(&self) -> Result<Translation> {
        let t = self.trace();
        if self.rev {
            let sq_tr = t * t + 2.0;
            if sq_tr - 2.0 <= PARABOLIC_TOL {
                return Err(Error::NotAGlide);
            }
            return Ok(Translation::Glide((0.5 * sq_tr).acosh()));
        }
        let t = t.abs();
        if (t - 2.0).abs() <= PARABOLIC_TOL {
            let [a, b, c, d] = self.m;
            if b.abs() <= PARABOLIC_TOL && c.abs() <= PARABOLIC_TOL && (a - d).abs() <= PARABOLIC_TOL {
                return Ok(Translation::Identity);
            }
            return Ok(Translation::Parabolic);
        }
        if t < 2.0 {
            return Ok(Translation::Elliptic);
        }
        Ok(Translation::Hyperbolic(2.0 * (0.5 * t).acosh()))
    }

    /// Translation length, or an error for anything without an axis.
    pub fn length(&self) -> Result<f64> {
        match self.translation_length()? {
            Translation::Hyperbolic(l) | Translation::Glide(l) => Ok(l),
            Translation::Parabolic => Err(Error::NotClosedGeodesic("parabolic")),
            Translation::Elliptic => Err(Error::NotClosedGeodesic("elliptic")),
            Translation::Identity => Err(Error::NotClosedGeodesic("identity")),
        }
    }

    /// Boundary fixed points `(repelling, attracting)` of a hyperbolic element
    /// or a glide (a glide fixes the same boundary points as its square).
    pub fn axis_endpoints(&self) -> Result<(BoundaryPoint, BoundaryPoint)> {
        match self.translation_length() {
            Ok(Translation::Hyperbolic(_)) | Ok(Translation::Glide(_)) => {}
            Ok(Translation::Parabolic) => return Err(Error::NoAxis("parabolic")),
            Ok(Translation::Elliptic) => return Err(Error::NoAxis("elliptic")),
            Ok(Translation::Identity) => return Err(Error::NoAxis("the identity")),
            Err(_) => return Err(Error::NoAxis("not a glide")),
        }
        let [a, b, c, d] = self.m;
        let tr = a + d;
        let det = self.det();
        // eigenvalues λ± = (tr ± s)/2; the boundary map has derivative
        // det/(c z + d)² at a fixed point, so the eigenvalue of larger modulus
        // belongs to the attracting point.
        let s = (tr * tr - 4.0 * det).sqrt();
        let plus_attracts = tr >= 0.0;
        if c == 0.0 {
            let finite = BoundaryPoint::Finite(b / (d - a));
            // z ↦ (a z + b)/d: infinity attracts when |a| > |d|
            return Ok(if a.abs() > d.abs() {
                (finite, BoundaryPoint::Infinity)
            } else {
                (BoundaryPoint::Infinity, finite)
            });
        }
        // Fixed points z = q/c with q = λ − d = (a − d ± s)/2; the two q
        // multiply to −bc, so the cancelling one comes from the other.
        let (z_plus, z_minus) = if a - d >= 0.0 {
            let q = 0.5 * (a - d + s);
            (q / c, -b / q)
        } else {
            let q = 0.5 * (a - d - s);
            (-b / q, q / c)
        };
        let (att, rep) = if plus_attracts {
            (z_plus, z_minus)
        } else {
            (z_minus, z_plus)
        };
        let fin = |x: f64| {
            if x.is_finite() {
                BoundaryPoint::Finite(x)
            } else {
                BoundaryPoint::Infinity
            }
        };
        Ok((fin(rep), fin(att)))
    }
}

impl Mul for Isometry {
    type Output = Isometry;
    fn mul(self, rhs: Isometry) -> Isometry {
        self.compose(&rhs)
    }
}

impl Mul for &Isometry {
    type Output = Isometry;
    fn mul(self, rhs: &Isometry) -> Isometry {
        self.compose(rhs)
    }
}

/// Free function form of [`Isometry::compose`].
pub fn compose(a: &Isometry, b: &Isometry) -> Isometry {
    a.compose(b)
}

/// Open-interval membership on the circle `R ∪ {∞}` for the arc from `lo` to
/// `hi` that does not contain infinity (both finite) or the ray when one end
/// is infinite.
fn strictly_between(x: BoundaryPoint, p: BoundaryPoint, q: BoundaryPoint) -> bool {
    use BoundaryPoint::*;
    match (x, p, q) {
        (Infinity, _, _) => false,
        (Finite(x), Finite(p), Finite(q)) => {
            let (lo, hi) = if p < q { (p, q) } else { (q, p) };
            lo < x && x < hi
        }
        // arc between a finite point and infinity: pick the side not
        // containing the other axis endpoint is ambiguous, so callers always
        // use the finite-interval arc (the one avoiding infinity is empty).
        (Finite(_), _, _) => false,
    }
}

/// True when the complete geodesics with the given endpoints cross
/// transversally. Shared endpoints count as non-crossing.
pub fn axes_cross(a: (BoundaryPoint, BoundaryPoint), b: (BoundaryPoint, BoundaryPoint)) -> bool {
    let pts = [a.0, a.1, b.0, b.1];
    for i in 0..2 {
        for j in 2..4 {
            if pts[i] == pts[j] {
                return false;
            }
        }
    }
    // Interleaving of four points on a circle. If `a` has an infinite end,
    // swap roles so the reference pair is finite when possible.
    let (r, o) = if a.0.is_infinite() || a.1.is_infinite() {
        (b, a)
    } else {
        (a, b)
    };
    if r.0.is_infinite() || r.1.is_infinite() {
        // both geodesics end at infinity and share it
        return false;
    }
    strictly_between(o.0, r.0, r.1) != strictly_between(o.1, r.0, r.1)
}

/// Geodesic segment between two points of the upper half-plane, with the
/// Klein-disk images of its endpoints (disk centred at `i`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicSegment {
    pub p: HPoint,
    pub q: HPoint,
    pub klein: [[f64; 2]; 2],
}

impl GeodesicSegment {
    pub fn new(p: HPoint, q: HPoint) -> Result<Self> {
        if p == q {
            return Err(Error::DegenerateSegment);
        }
        Ok(Self {
            p,
            q,
            klein: [to_klein(p), to_klein(q)],
        })
    }

    pub fn length(&self) -> f64 {
        self.p.dist(&self.q)
    }

    /// Hyperbolic midpoint.
    pub fn midpoint(&self) -> HPoint {
        midpoint(self.p, self.q)
    }
}

/// Klein-disk image of `z` with `i` at the origin.
pub fn to_klein(z: HPoint) -> [f64; 2] {
    // Cayley transform p = (z − i)/(z + i), then k = 2p/(1 + |p|²).
    let (x, y) = (z.x, z.y);
    let den = x * x + (y + 1.0) * (y + 1.0);
    let pr = (x * x + y * y - 1.0) / den;
    let pi = -2.0 * x / den;
    let n = 1.0 + pr * pr + pi * pi;
    [2.0 * pr / n, 2.0 * pi / n]
}

/// Hyperbolic midpoint of two points, stable for far-apart points.
pub fn midpoint(p: HPoint, q: HPoint) -> HPoint {
    // Move p to i, find the midpoint along the geodesic from i in the
    // Poincaré disk, then move back.
    let qx = (q.x - p.x) / p.y;
    let qy = q.y / p.y;
    let d = HPoint::i().dist(&HPoint { x: qx, y: qy });
    if d == 0.0 {
        return p;
    }
    // direction of q' seen from the disk centre
    let den = qx * qx + (qy + 1.0) * (qy + 1.0);
    let wr = (qx * qx + qy * qy - 1.0) / den;
    let wi = -2.0 * qx / den;
    let wn = (wr * wr + wi * wi).sqrt();
    let (c, s) = (wr / wn, wi / wn);
    let t = (0.25 * d).tanh();
    let one_minus_t = 2.0 / ((0.5 * d).exp() + 1.0);
    // m = t·e^{iθ}; z = i(1 + m)/(1 − m)
    let half = 0.5 * s.atan2(c);
    let one_minus_cos = 2.0 * half.sin().powi(2);
    let ar = one_minus_cos + one_minus_t * c;
    let ai = -t * s;
    let br = 1.0 + t * c;
    let bi = t * s;
    // (br + i bi)/(ar + i ai), then multiply by i
    let den2 = ar * ar + ai * ai;
    let qr = (br * ar + bi * ai) / den2;
    let qi = (bi * ar - br * ai) / den2;
    let (zx, zy) = (-qi, qr);
    HPoint {
        x: p.x + p.y * zx,
        y: p.y * zy,
    }
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn recentered_klein(z: HPoint, centre: HPoint) -> [f64; 2] {
    to_klein(HPoint {
        x: (z.x - centre.x) / centre.y,
        y: z.y / centre.y,
    })
}

/// True when the open segments cross transversally.
///
/// The test runs on straight chords in the Klein model, recentred at the
/// midpoint between the two segment midpoints so that long segments keep
/// their angular resolution. Segments sharing an endpoint never cross.
pub fn segments_cross(s1: &GeodesicSegment, s2: &GeodesicSegment) -> bool {
    if s1.p == s2.p || s1.p == s2.q || s1.q == s2.p || s1.q == s2.q {
        return false;
    }
    let centre = midpoint(s1.midpoint(), s2.midpoint());
    let a = recentered_klein(s1.p, centre);
    let b = recentered_klein(s1.q, centre);
    let c = recentered_klein(s2.p, centre);
    let d = recentered_klein(s2.q, centre);
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if [o1, o2, o3, o4].iter().any(|o| o.abs() <= ORIENT_TOL) {
        return false;
    }
    (o1 > 0.0) != (o2 > 0.0) && (o3 > 0.0) != (o4 > 0.0)
}
