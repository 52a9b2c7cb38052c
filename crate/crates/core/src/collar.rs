//! Arcs in the collar of a one-sided geodesic.
//!
//! The core lifts to the imaginary axis with deck glide `G(z) = −e^{ℓ}·z̄`.
//! The collar of width `w` lifts to the wedge `|x| ≤ sinh(w)·y`; its boundary
//! lifts are the two rays `x = ±sinh(w)·y`, swapped by `G`. The arc `α_k`
//! lifts to the segment from `p̃` on the right ray to `G^k(q̃)`, with `q̃` on
//! the left ray.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypgeo::{segments_cross, GeodesicSegment, HPoint};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CollarParams {
    pub core: f64,
    pub width: f64,
    /// `log` of the height of `p̃` on the right boundary ray.
    pub p_offset: f64,
    /// `log` of the height of `q̃` on the left boundary ray.
    pub q_offset: f64,
}

impl CollarParams {
    /// Endpoints at equal heights.
    pub fn new(core: f64, width: f64) -> Result<Self> {
        Self::with_offsets(core, width, 0.0, 0.0)
    }

    pub fn with_offsets(core: f64, width: f64, p_offset: f64, q_offset: f64) -> Result<Self> {
        if !(core > 0.0 && core.is_finite()) {
            return Err(Error::InvalidCollar(format!("core length {core}")));
        }
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidCollar(format!("width {width}")));
        }
        if !(p_offset.is_finite() && q_offset.is_finite()) {
            return Err(Error::InvalidCollar("offsets must be finite".into()));
        }
        Ok(Self {
            core,
            width,
            p_offset,
            q_offset,
        })
    }

    /// `ℓ(∂C) = 2ℓγ·cosh(w)`.
    pub fn boundary_length(&self) -> f64 {
        2.0 * self.core * self.width.cosh()
    }

    fn p_lift(&self) -> HPoint {
        let h = self.p_offset.exp();
        HPoint {
            x: self.width.sinh() * h,
            y: h,
        }
    }

    fn q_lift(&self) -> HPoint {
        let h = self.q_offset.exp();
        HPoint {
            x: -self.width.sinh() * h,
            y: h,
        }
    }
}

/// `G^k(z)` for `G(z) = −e^{ℓ}·z̄`.
fn glide_pow(core: f64, k: i64, z: HPoint) -> HPoint {
    let s = (k as f64 * core).exp();
    let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    HPoint {
        x: sign * s * z.x,
        y: s * z.y,
    }
}

/// Closed-form self-intersection number of `α_k`.
pub fn self_intersections_closed_form(k: i64) -> u64 {
    let a = k.unsigned_abs();
    match (k >= 0, k % 2 == 0) {
        (true, true) => a / 2,
        (false, true) => a / 2 - 1,
        (true, false) => a.div_ceil(2),
        (false, false) => (a - 1) / 2,
    }
}

fn arc_lift(params: &CollarParams, k: i64) -> Result<GeodesicSegment> {
    let p = params.p_lift();
    let q = glide_pow(params.core, k, params.q_lift());
    if (p.x - q.x).abs() <= 1e-15 * p.y.max(q.y) && (p.y - q.y).abs() <= 1e-15 * p.y.max(q.y) {
        return Err(Error::DegenerateArc);
    }
    GeodesicSegment::new(p, q).map_err(|_| Error::DegenerateArc)
}

/// `dist(p̃, G^k(q̃))`.
pub fn arc_length(params: &CollarParams, k: i64) -> Result<f64> {
    Ok(arc_lift(params, k)?.length())
}

/// Half the number of deck translates `G^j(α̃_k)`, `0 < |j| ≤ j_window`,
/// crossing `α̃_k`.
pub fn self_intersections_geometric(params: &CollarParams, k: i64, j_window: u64) -> Result<u64> {
    let base = arc_lift(params, k)?;
    let window = j_window as i64;
    let mut crossings = 0u64;
    for j in -window..=window {
        if j == 0 {
            continue;
        }
        let t = GeodesicSegment::new(glide_pow(params.core, j, base.p), glide_pow(params.core, j, base.q))?;
        if segments_cross(&base, &t) {
            crossings += 1;
        }
    }
    Ok(crossings / 2)
}

/// Smallest window the geometric count needs.
pub fn default_window(k: i64) -> u64 {
    k.unsigned_abs() + 2
}

/// Index map `k ↦ sign·k + offset` taking closed-form labels to geometric
/// ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Calibration {
    pub offset: i64,
    pub sign: i64,
}

impl Calibration {
    pub const IDENTITY: Calibration = Calibration { offset: 0, sign: 1 };

    pub fn apply(&self, k: i64) -> i64 {
        self.sign * k + self.offset
    }
}

/// Finds the first `(offset, sign)` with offsets in `−2..=2` under which the
/// geometric count equals the closed form for every `|k| ≤ kmax`. `None` if
/// there is none.
pub fn calibrate(params: &CollarParams, kmax: i64) -> Result<Option<Calibration>> {
    let ks: Vec<i64> = (-kmax..=kmax).collect();
    for offset in [0, 1, -1, 2, -2] {
        for sign in [1, -1] {
            let c = Calibration { offset, sign };
            let ok =
                ks.par_iter()
                    .map(|&k| {
                        let g = c.apply(k);
                        Ok(self_intersections_geometric(params, g, default_window(g))?
                            == self_intersections_closed_form(k))
                    })
                    .collect::<Result<Vec<bool>>>()?;
            if ok.into_iter().all(|b| b) {
                return Ok(Some(c));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollarRow {
    pub k: i64,
    pub i_closed: u64,
    pub i_geom: u64,
    pub length: f64,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollarReport {
    pub params: CollarParams,
    pub calibration: Calibration,
    pub rows: Vec<CollarRow>,
    pub min_margin: f64,
    pub all_match: bool,
}

/// Margins `(ℓ(∂C)+2w)/(2ℓγ) + 1 − |i(α_k) − ℓ(α_k)/(2ℓγ)|` over
/// `k ∈ [−kmax, kmax]`, with `α_k` read through the calibration.
pub fn verify_collar_inequality(params: &CollarParams, kmax: i64, calibration: Calibration) -> Result<CollarReport> {
    let slack = (params.boundary_length() + 2.0 * params.width) / (2.0 * params.core) + 1.0;
    let rows = (-kmax..=kmax)
        .into_par_iter()
        .map(|k| {
            let g = calibration.apply(k);
            let length = arc_length(params, g)?;
            let i_closed = self_intersections_closed_form(k);
            let i_geom = self_intersections_geometric(params, g, default_window(g))?;
            let margin = slack - (i_closed as f64 - length / (2.0 * params.core)).abs();
            Ok(CollarRow {
                k,
                i_closed,
                i_geom,
                length,
                margin,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let min_margin = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let all_match = rows.iter().all(|r| r.i_closed == r.i_geom);
    Ok(CollarReport {
        params: *params,
        calibration,
        rows,
        min_margin,
        all_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_table() {
        assert_eq!(self_intersections_closed_form(0), 0);
        assert_eq!(self_intersections_closed_form(3), 2);
        assert_eq!(self_intersections_closed_form(-4), 1);
        assert_eq!(self_intersections_closed_form(-3), 1);
        assert_eq!(self_intersections_closed_form(-2), 0);
        assert_eq!(self_intersections_closed_form(6), 3);
    }

    #[test]
    fn geometric_count_is_calibrated_closed_form() {
        for (l, w) in [(0.5, 0.3), (1.0, 0.5), (2.0, 1.0)] {
            let p = CollarParams::new(l, w).unwrap();
            let c = calibrate(&p, 12).unwrap().expect("calibration exists");
            assert_eq!(c, Calibration { offset: 1, sign: 1 });
            for k in -12..=12 {
                let g = c.apply(k);
                let a = self_intersections_geometric(&p, g, default_window(g)).unwrap();
                let b = self_intersections_geometric(&p, g, 2 * default_window(g)).unwrap();
                assert_eq!(a, b, "window stability at k = {k}");
                assert_eq!(a, self_intersections_closed_form(k));
            }
        }
        let p = CollarParams::new(1.0, 0.5).unwrap();
        assert_eq!(self_intersections_geometric(&p, 0, 2).unwrap(), 0);
    }

    #[test]
    fn arc_length_bounds() {
        let p = CollarParams::new(1.0, 0.5).unwrap();
        let slack = p.boundary_length() + 2.0 * p.width;
        for k in -30i64..=30 {
            let l = arc_length(&p, k).unwrap();
            assert!((l - k.abs() as f64 * p.core).abs() <= slack, "k = {k}");
        }
        for k in 2i64..30 {
            assert!(arc_length(&p, k + 1).unwrap() > arc_length(&p, k).unwrap());
            assert!(arc_length(&p, -k - 1).unwrap() > arc_length(&p, -k).unwrap());
        }
        for k in [100, -100] {
            let r = arc_length(&p, k).unwrap() / (100.0 * p.core);
            assert!((r - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn degenerate_and_invalid() {
        // G(q̃) lands on p̃ when the heights line up
        let p = CollarParams::with_offsets(1.0, 0.5, 1.0, 0.0).unwrap();
        assert_eq!(arc_length(&p, 1).unwrap_err(), Error::DegenerateArc);
        assert!(CollarParams::new(0.0, 1.0).is_err());
        assert!(CollarParams::new(1.0, -1.0).is_err());
    }

    #[test]
    fn margins_nonnegative() {
        for (l, w) in [(1.0, 0.5), (0.5, 0.3)] {
            let p = CollarParams::new(l, w).unwrap();
            let c = calibrate(&p, 10).unwrap().unwrap();
            let r = verify_collar_inequality(&p, 30, c).unwrap();
            assert_eq!(r.rows.len(), 61);
            assert!(r.min_margin >= 0.0, "{l} {w}: {}", r.min_margin);
        }
    }
}
