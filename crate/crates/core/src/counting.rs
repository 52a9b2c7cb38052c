//! Counting functions on length spectra: `N(L)`, normalized ball counts,
//! log–log exponent fits, the simplex moment and the `b_X(1)` identity on
//! the twice-holed projective plane.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Sorted multiset of positive lengths.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountSeries {
    lengths: Vec<f64>,
    pub label: String,
    pub certified: bool,
}

impl CountSeries {
    pub fn new(mut lengths: Vec<f64>, label: impl Into<String>, certified: bool) -> Result<Self> {
        if lengths.iter().any(|l| !(*l > 0.0) || !l.is_finite()) {
            return Err(Error::InvalidLengths);
        }
        lengths.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        Ok(Self {
            lengths,
            label: label.into(),
            certified,
        })
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn max(&self) -> Option<f64> {
        self.lengths.last().copied()
    }

    pub fn min(&self) -> Option<f64> {
        self.lengths.first().copied()
    }

    /// Number of entries `≤ l`.
    pub fn count_upto(&self, l: f64) -> usize {
        count_upto(self, l)
    }
}

/// Number of entries `≤ l` (inclusive).
pub fn count_upto(s: &CountSeries, l: f64) -> usize {
    s.lengths.partition_point(|&x| x <= l)
}

/// `N(L) / L^d`.
pub fn nu_l(s: &CountSeries, l: f64, d: i32) -> f64 {
    count_upto(s, l) as f64 / l.powi(d)
}

/// Geometric grid `lo, lo·r, lo·r², … ≤ hi` (the end point `hi` included up
/// to rounding).
pub fn geometric_grid(lo: f64, hi: f64, ratio: f64) -> Vec<f64> {
    assert!(lo > 0.0 && ratio > 1.0);
    let steps = ((hi / lo).ln() / ratio.ln() + 1e-9).floor() as usize;
    (0..=steps).map(|k| lo * ratio.powi(k as i32)).collect()
}

/// Default grid ratio, `2^{1/4}`.
pub fn default_ratio() -> f64 {
    2f64.powf(0.25)
}

/// Grid covering the top `decades` decades below `hi`.
pub fn top_decades_grid(hi: f64, decades: f64) -> Vec<f64> {
    let lo = hi / 10f64.powf(decades);
    let ratio = default_ratio();
    // anchor at the top so the window ends exactly at `hi`
    let steps = ((hi / lo).ln() / ratio.ln() + 1e-9).floor() as i32;
    (0..=steps).rev().map(|k| hi / ratio.powi(k)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BallCount {
    pub grid: Vec<f64>,
    pub counts: Vec<usize>,
    pub nu: Vec<f64>,
    pub d: i32,
}

impl BallCount {
    pub fn new(s: &CountSeries, grid: &[f64], d: i32) -> Self {
        let counts: Vec<usize> = grid.iter().map(|&l| count_upto(s, l)).collect();
        let nu = grid.iter().zip(&counts).map(|(&l, &n)| n as f64 / l.powi(d)).collect();
        Self {
            grid: grid.to_vec(),
            counts,
            nu,
            d,
        }
    }

    /// Sampled ν values never increase.
    pub fn nonincreasing(&self) -> bool {
        self.nu.windows(2).all(|w| w[1] <= w[0])
    }

    /// Last sampled ν value over the first.
    pub fn decay_ratio(&self) -> f64 {
        match (self.nu.first(), self.nu.last()) {
            (Some(&a), Some(&b)) if a > 0.0 => b / a,
            _ => f64::NAN,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub window: (f64, f64),
    pub points: usize,
}

/// Minimum number of grid points for a fit.
pub const MIN_FIT_POINTS: usize = 5;

/// Least-squares line through `(x, y)`; returns `(slope, intercept, r²)`.
pub fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
        syy += (b - my) * (b - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (slope, intercept, r2)
}

/// Slope of `log N(L)` against `log L` over the grid points with `N > 0`.
pub fn fit_exponent(s: &CountSeries, grid: &[f64]) -> Result<ExponentFit> {
    let pts: Vec<(f64, f64)> = grid
        .iter()
        .map(|&l| (l, count_upto(s, l)))
        .filter(|&(l, n)| l > 0.0 && n > 0)
        .map(|(l, n)| (l.ln(), (n as f64).ln()))
        .collect();
    fit_points(&pts, grid)
}

/// Fit through explicit `(L, N(L))` samples.
pub fn fit_counts(samples: &[(f64, f64)]) -> Result<ExponentFit> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|&&(l, n)| l > 0.0 && n > 0.0)
        .map(|&(l, n)| (l.ln(), n.ln()))
        .collect();
    let grid: Vec<f64> = samples.iter().map(|s| s.0).collect();
    fit_points(&pts, &grid)
}

fn fit_points(pts: &[(f64, f64)], grid: &[f64]) -> Result<ExponentFit> {
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::FitWindowTooSmall(pts.len()));
    }
    let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let (slope, intercept, r2) = least_squares(&x, &y);
    let lo = grid.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = grid.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(ExponentFit {
        slope,
        intercept,
        r2,
        window: (lo, hi),
        points: pts.len(),
    })
}

/// Default fit: top two decades below the largest length.
pub fn fit_exponent_default(s: &CountSeries) -> Result<ExponentFit> {
    let hi = s.max().ok_or(Error::FitWindowTooSmall(0))?;
    fit_exponent(s, &top_decades_grid(hi, 2.0))
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `∫_{x ≥ 0, Σ xᵢℓᵢ ≤ L} (L − Σ xᵢℓᵢ)^{d−n} dx = (d−n)!/d! · L^d / ∏ℓᵢ`.
pub fn simplex_moment(lengths: &[f64], d: usize, l: f64) -> Result<f64> {
    let n = lengths.len();
    if n > d {
        return Err(Error::OverdeterminedSimplex { n, d });
    }
    if lengths.iter().any(|x| !(*x > 0.0)) || !(l >= 0.0) {
        return Err(Error::InvalidLengths);
    }
    let prod: f64 = lengths.iter().product();
    Ok(factorial(d - n) / factorial(d) * l.powi(d as i32) / prod)
}

/// Monte Carlo estimate of the simplex moment integral: uniform samples in
/// the box `∏[0, L/ℓᵢ]`. Returns `(estimate, standard error)`.
pub fn simplex_moment_mc(lengths: &[f64], d: usize, l: f64, samples: usize, seed: u64) -> Result<(f64, f64)> {
    let n = lengths.len();
    if n > d {
        return Err(Error::OverdeterminedSimplex { n, d });
    }
    if lengths.iter().any(|x| !(*x > 0.0)) || samples < 2 {
        return Err(Error::InvalidLengths);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let box_vol: f64 = lengths.iter().map(|li| l / li).product();
    let p = (d - n) as i32;
    let mut sum = 0.0;
    let mut sum2 = 0.0;
    for _ in 0..samples {
        // yᵢ = ℓᵢxᵢ uniform on [0, L]; Jacobian folded into box_vol
        let s: f64 = (0..n).map(|_| rng.random::<f64>() * l).sum();
        let v = if s <= l { (l - s).powi(p) } else { 0.0 };
        sum += v;
        sum2 += v * v;
    }
    let m = samples as f64;
    let mean = sum / m;
    let var = (sum2 / m - mean * mean).max(0.0) * m / (m - 1.0);
    Ok((mean * box_vol, (var / m).sqrt() * box_vol))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BxCheck {
    pub direct: f64,
    pub predicted: f64,
    pub rel_error: f64,
    pub count: u64,
}

/// Integral simple multicurves on the twice-holed projective plane are the
/// multiples of its two one-sided geodesics, so the count up to `L` is
/// `⌊L/ℓ1⌋ + ⌊L/ℓ2⌋`. The identity predicts `N(L)/L → 1/ℓ1 + 1/ℓ2`.
pub fn bx_identity_check_n12(l1: f64, l2: f64, l: f64) -> Result<BxCheck> {
    if !(l1 > 0.0 && l2 > 0.0 && l > 0.0) || !(l1.is_finite() && l2.is_finite() && l.is_finite()) {
        return Err(Error::InvalidLengths);
    }
    let count = (l / l1).floor() as u64 + (l / l2).floor() as u64;
    let direct = count as f64 / l;
    // d = n = 1 and the complement contributes b = 1
    let predicted = simplex_moment(&[l1], 1, 1.0)? + simplex_moment(&[l2], 1, 1.0)?;
    Ok(BxCheck {
        direct,
        predicted,
        rel_error: (direct - predicted).abs() / predicted,
        count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(v: &[f64]) -> CountSeries {
        CountSeries::new(v.to_vec(), "t", true).unwrap()
    }

    #[test]
    fn count_examples() {
        let s = series(&[1.0, 2.0, 3.0]);
        assert_eq!(count_upto(&s, 2.5), 2);
        assert_eq!(count_upto(&s, 0.5), 0);
        assert_eq!(count_upto(&series(&[1.0, 2.0]), 2.0), 2);
        assert!(CountSeries::new(vec![1.0, -1.0], "bad", true).is_err());
    }

    #[test]
    fn nu_examples() {
        let s = series(&(1..=1000).map(|k| k as f64).collect::<Vec<_>>());
        for l in [10.0, 100.0, 1000.0] {
            assert!((nu_l(&s, l, 2) - 1.0 / l).abs() < 1e-12);
            assert!((nu_l(&s, l, 1) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fit_planted_powers() {
        // N(L) = 7 L² and N(L) = 3 L sampled exactly
        let grid = geometric_grid(10.0, 1000.0, default_ratio());
        let sq: Vec<(f64, f64)> = grid.iter().map(|&l| (l, 7.0 * l * l)).collect();
        let f = fit_counts(&sq).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-6);
        assert!((f.intercept - 7f64.ln()).abs() < 1e-6);
        let lin: Vec<(f64, f64)> = grid.iter().map(|&l| (l, 3.0 * l)).collect();
        assert!((fit_counts(&lin).unwrap().slope - 1.0).abs() < 1e-6);
        assert_eq!(fit_counts(&sq[..3]).unwrap_err(), Error::FitWindowTooSmall(3));
    }

    #[test]
    fn grids() {
        let g = top_decades_grid(30.0, 1.0);
        assert!((g.last().unwrap() - 30.0).abs() < 1e-12);
        assert!(*g.first().unwrap() >= 3.0 - 1e-9);
        assert_eq!(g.len(), 14);
        let g = geometric_grid(1.0, 16.0, 2.0);
        assert_eq!(g, vec![1.0, 2.0, 4.0, 8.0, 16.0]);
    }

    #[test]
    fn simplex_examples() {
        assert!((simplex_moment(&[2.0], 1, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((simplex_moment(&[1.0, 1.0], 2, 1.0).unwrap() - 0.5).abs() < 1e-15);
        let a = simplex_moment(&[0.7, 1.3], 4, 1.0).unwrap();
        let b = simplex_moment(&[0.7, 1.3], 4, 2.0).unwrap();
        assert!((b / a - 16.0).abs() < 1e-12);
        assert_eq!(
            simplex_moment(&[1.0, 1.0, 1.0], 2, 1.0).unwrap_err(),
            Error::OverdeterminedSimplex { n: 3, d: 2 }
        );
    }

    #[test]
    fn simplex_monte_carlo_oracle() {
        let (m, se) = simplex_moment_mc(&[2.0], 1, 1.0, 200_000, 7).unwrap();
        assert!((m - 0.5).abs() < 4.0 * se.max(1e-12));
        let (m, se) = simplex_moment_mc(&[1.0, 1.0], 2, 1.0, 200_000, 7).unwrap();
        assert!((m - 0.5).abs() < 4.0 * se);
    }

    #[test]
    fn bx_examples() {
        let c = bx_identity_check_n12(1.0, 2.0, 10.0).unwrap();
        assert_eq!(c.count, 15);
        assert!((c.direct - 1.5).abs() < 1e-15 && (c.predicted - 1.5).abs() < 1e-15);
        assert!(c.rel_error <= 0.1);
        let c = bx_identity_check_n12(1.0, 1.0, 1e4).unwrap();
        assert!(c.rel_error <= 2e-4);
        assert_eq!(bx_identity_check_n12(1.0, 0.0, 1.0).unwrap_err(), Error::InvalidLengths);
    }

    #[test]
    fn ball_count_monotone() {
        let s = series(&(1..=200).map(|k| (k as f64).sqrt()).collect::<Vec<_>>());
        let b = BallCount::new(&s, &top_decades_grid(14.0, 1.0), 3);
        assert!(b.counts.windows(2).all(|w| w[0] <= w[1]));
        assert!(b.nonincreasing());
        assert!(b.decay_ratio() < 0.5);
    }
}
