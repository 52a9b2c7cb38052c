//! Norbury's volume form `ν_N = ∏ coth(ℓᵢ) dℓᵢ ∧ ∏ dτⱼ ∧ dℓⱼ` on
//! Fenchel–Nielsen charts: box integrals, the logarithmic divergence at
//! short one-sided curves, and the volume of `{sys⁻ ≥ ε}`.
//!
//! One-sided coordinates are integrated in `s = log ℓ` (quadrature and Monte
//! Carlo) or `u = log sinh ℓ` (region volumes), where the density is bounded
//! or constant.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::counting::least_squares;
use crate::error::{Error, Result};
use crate::surface::{builtin_model, sys_minus, ModelName};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum TwistRange {
    /// `[0, ℓ]`, one full turn.
    FullTurn,
    Fixed(f64, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OneSidedCoord {
    pub label: String,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoSidedCoord {
    pub label: String,
    pub lo: f64,
    pub hi: f64,
    pub twist: TwistRange,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct FnChart {
    pub one_sided: Vec<OneSidedCoord>,
    pub two_sided: Vec<TwoSidedCoord>,
}

impl FnChart {
    pub fn one_sided(mut self, label: &str, lo: f64, hi: f64) -> Self {
        self.one_sided.push(OneSidedCoord {
            label: label.into(),
            lo,
            hi,
        });
        self
    }

    pub fn two_sided(mut self, label: &str, lo: f64, hi: f64, twist: TwistRange) -> Self {
        self.two_sided.push(TwoSidedCoord {
            label: label.into(),
            lo,
            hi,
            twist,
        });
        self
    }

    /// Every one-sided lower bound replaced by `delta`.
    pub fn with_cutoff(&self, delta: f64) -> Self {
        let mut c = self.clone();
        for o in &mut c.one_sided {
            o.lo = delta;
        }
        c
    }

    fn validate(&self) -> Result<()> {
        let ranges = self
            .one_sided
            .iter()
            .map(|o| (o.lo, o.hi))
            .chain(self.two_sided.iter().map(|t| (t.lo, t.hi)))
            .chain(self.two_sided.iter().filter_map(|t| match t.twist {
                TwistRange::Fixed(a, b) => Some((a, b)),
                TwistRange::FullTurn => None,
            }));
        for (a, b) in ranges {
            if a.is_infinite() || b.is_infinite() {
                return Err(Error::UnboundedChart);
            }
            if !(a <= b) {
                return Err(Error::InvalidChart(format!("range [{a}, {b}]")));
            }
        }
        for o in &self.one_sided {
            if !(o.lo > 0.0) {
                return Err(Error::OutsideChart(o.lo));
            }
        }
        for t in &self.two_sided {
            if t.lo < 0.0 {
                return Err(Error::InvalidChart(format!("two-sided length {}", t.lo)));
            }
        }
        Ok(())
    }
}

/// `∏ coth(ℓᵢ)` over the one-sided lengths; twists and two-sided lengths do
/// not enter.
pub fn norbury_density(one_sided_lengths: &[f64]) -> Result<f64> {
    let mut d = 1.0;
    for &l in one_sided_lengths {
        if !(l > 0.0) {
            return Err(Error::OutsideChart(l));
        }
        d /= l.tanh();
    }
    Ok(d)
}

/// `∫_a^b coth = log sinh b − log sinh a`.
pub fn coth_integral(a: f64, b: f64) -> f64 {
    log_sinh(b) - log_sinh(a)
}

/// `log sinh x`, accurate for small and large `x`.
pub fn log_sinh(x: f64) -> f64 {
    if x > 20.0 {
        x - std::f64::consts::LN_2 + (-(-2.0 * x).exp()).ln_1p()
    } else {
        x.sinh().ln()
    }
}

/// Inverse of [`log_sinh`].
pub fn asinh_exp(u: f64) -> f64 {
    if u > 0.0 {
        u + (1.0 + (1.0 + (-2.0 * u).exp()).sqrt()).ln()
    } else {
        u.exp().asinh()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Quadrature,
    MonteCarlo,
}

impl Method {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "quadrature" | "quad" => Ok(Method::Quadrature),
            "monte_carlo" | "monte-carlo" | "mc" => Ok(Method::MonteCarlo),
            _ => Err(Error::InvalidChart(format!("unknown method '{s}'"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub value: f64,
    /// Quadrature: Richardson error estimate. Monte Carlo: standard error.
    pub error: f64,
    pub method: Method,
    /// Panels per axis (quadrature) or sample count (Monte Carlo).
    pub budget: usize,
    pub seed: Option<u64>,
    pub certified: bool,
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels.max(2) & !1;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

/// Composite Simpson with the Richardson estimate `|S_n − S_{n/2}|/15`.
fn simpson_with_error(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> (f64, f64) {
    let fine = simpson(f, a, b, panels);
    let coarse = simpson(f, a, b, panels / 2);
    (fine, (fine - coarse).abs() / 15.0)
}

/// `ν_N` volume of a box chart.
pub fn integrate_chart(chart: &FnChart, method: Method, budget: usize, seed: u64) -> Result<VolumeEstimate> {
    chart.validate()?;
    if budget < 4 {
        return Err(Error::ZeroBudget);
    }
    match method {
        Method::Quadrature => {
            // separable: product of one-dimensional integrals
            let mut value = 1.0;
            let mut rel_err = 0.0;
            for o in &chart.one_sided {
                // ∫ coth ℓ dℓ = ∫ ℓ·coth ℓ ds with ℓ = e^s
                let f = |s: f64| {
                    let l = s.exp();
                    l / l.tanh()
                };
                let (v, e) = simpson_with_error(&f, o.lo.ln(), o.hi.ln(), budget);
                value *= v;
                rel_err += if v > 0.0 { e / v } else { 0.0 };
            }
            for t in &chart.two_sided {
                let v = match t.twist {
                    TwistRange::FullTurn => simpson(&|l| l, t.lo, t.hi, budget),
                    TwistRange::Fixed(a, b) => (t.hi - t.lo) * (b - a),
                };
                value *= v;
            }
            Ok(VolumeEstimate {
                value,
                error: value.abs() * rel_err,
                method,
                budget,
                seed: None,
                certified: true,
            })
        }
        Method::MonteCarlo => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut sum = 0.0;
            let mut sum2 = 0.0;
            for _ in 0..budget {
                let mut v = 1.0;
                for o in &chart.one_sided {
                    let (a, b) = (o.lo.ln(), o.hi.ln());
                    let s = a + (b - a) * rng.random::<f64>();
                    let l = s.exp();
                    v *= (b - a) * l / l.tanh();
                }
                for t in &chart.two_sided {
                    let l = t.lo + (t.hi - t.lo) * rng.random::<f64>();
                    let twist = match t.twist {
                        TwistRange::FullTurn => l,
                        TwistRange::Fixed(a, b) => b - a,
                    };
                    v *= (t.hi - t.lo) * twist;
                }
                sum += v;
                sum2 += v * v;
            }
            let n = budget as f64;
            let mean = sum / n;
            let var = (sum2 / n - mean * mean).max(0.0) * n / (n - 1.0);
            Ok(VolumeEstimate {
                value: mean,
                error: (var / n).sqrt(),
                method,
                budget,
                seed: Some(seed),
                certified: true,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivergenceProfile {
    /// `(δ, volume)`.
    pub points: Vec<(f64, f64)>,
    /// Least-squares slope of volume against `log(1/δ)`.
    pub slope: f64,
    /// Least-squares slope of `log volume` against `log log(1/δ)`.
    pub log_slope: f64,
}

/// Volumes of the chart with every one-sided lower bound set to `δ`.
pub fn divergence_profile(deltas: &[f64], chart: &FnChart, panels: usize) -> Result<DivergenceProfile> {
    let mut points = Vec::with_capacity(deltas.len());
    for &d in deltas {
        let v = integrate_chart(&chart.with_cutoff(d), Method::Quadrature, panels, 0)?;
        points.push((d, v.value));
    }
    let x: Vec<f64> = points.iter().map(|p| (1.0 / p.0).ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1).collect();
    let (slope, log_slope) = if points.len() >= 2 && x.iter().any(|&v| (v - x[0]).abs() > 0.0) {
        let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
        let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
        (least_squares(&x, &y).0, least_squares(&lx, &ly).0)
    } else {
        (0.0, 0.0)
    };
    Ok(DivergenceProfile {
        points,
        slope,
        log_slope,
    })
}

/// One-sided and two-sided coordinate labels of a model's chart, with the
/// boundary lengths that stay fixed.
pub fn model_chart_layout(model: ModelName) -> (Vec<usize>, Vec<(usize, usize)>) {
    // (parameter index of each one-sided length), (length index, twist index)
    match model {
        ModelName::N12 => (vec![2], vec![]),
        ModelName::N21 => (vec![0, 1], vec![]),
        ModelName::N3 => (vec![0, 1, 2], vec![]),
        ModelName::N13 => (vec![5], vec![(3, 4)]),
    }
}

/// Default chart cap `4·(largest boundary length + 1)`.
pub fn default_cap(model: ModelName, params: &[f64]) -> f64 {
    let boundary = match model {
        ModelName::N12 => params[0].max(params[1]),
        ModelName::N21 => params[2],
        ModelName::N3 => 0.0,
        ModelName::N13 => params[0].max(params[1]).max(params[2]),
    };
    4.0 * (boundary + 1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SysRegionVolume {
    pub estimate: VolumeEstimate,
    pub eps: f64,
    pub cap: f64,
    pub word_budget: usize,
    /// Chart points where raising the word budget by 2 flips `sys⁻ ≥ ε`;
    /// they are counted with the value the budget produced.
    pub uncertified_points: usize,
    pub points: usize,
    /// `∫_ε^B coth`, the volume of one unconstrained one-sided factor.
    pub one_sided_factor: f64,
}

/// `ν_N` volume of `{sys⁻ ≥ ε}` in the chart of `model` with lengths capped
/// at `cap`. Fixed parameters (boundary lengths) are read from
/// `base_params`.
///
/// Every one-sided coordinate is at least `sys⁻`, so the region lies in
/// `[ε, B]` along one-sided axes; there `u = log sinh ℓ` turns the density
/// into 1. Two-sided coordinates use `(ℓ, τ/ℓ) ∈ [0, B] × [0, 1]` with
/// weight `ℓ`. `budget` is points per axis (quadrature, midpoint rule) or
/// samples (Monte Carlo).
#[allow(clippy::too_many_arguments)]
pub fn sys_region_volume(
    model: ModelName,
    base_params: &[f64],
    eps: f64,
    cap: Option<f64>,
    method: Method,
    budget: usize,
    seed: u64,
    word_budget: usize,
) -> Result<SysRegionVolume> {
    if base_params.len() != model.arity() {
        return Err(Error::ParameterMismatch {
            model: model.as_str(),
            expected: model.arity(),
            got: base_params.len(),
        });
    }
    if !(eps > 0.0) {
        return Err(Error::OutsideChart(eps));
    }
    let cap = cap.unwrap_or_else(|| default_cap(model, base_params));
    if !(cap >= eps) || !cap.is_finite() {
        return Err(Error::InvalidChart(format!("cap {cap} below eps {eps}")));
    }
    if budget < 2 {
        return Err(Error::ZeroBudget);
    }
    let (one, two) = model_chart_layout(model);
    let (u0, u1) = (log_sinh(eps), log_sinh(cap));
    let dim = one.len() + two.len() * 2;
    let box_measure = (u1 - u0).powi(one.len() as i32) * cap.powi(two.len() as i32);

    // unit-cube coordinates → (weight, sys⁻ ≥ ε, certified)
    let eval = |x: &[f64]| -> Result<(f64, bool, bool)> {
        let mut p = base_params.to_vec();
        let mut w = 1.0;
        for (k, &i) in one.iter().enumerate() {
            p[i] = asinh_exp(u0 + (u1 - u0) * x[k]);
        }
        for (k, &(li, ti)) in two.iter().enumerate() {
            let l = (cap * x[one.len() + 2 * k]).max(1e-9);
            p[li] = l;
            p[ti] = l * x[one.len() + 2 * k + 1];
            w *= l;
        }
        let rep = builtin_model(model, &p)?;
        let s = sys_minus(&rep, word_budget)?;
        Ok((w, s.length >= eps, (s.refined_length >= eps) == (s.length >= eps)))
    };

    let points: Vec<Vec<f64>> = match method {
        Method::Quadrature => {
            let total = budget.checked_pow(dim as u32).ok_or(Error::ZeroBudget)?;
            (0..total)
                .map(|mut idx| {
                    (0..dim)
                        .map(|_| {
                            let i = idx % budget;
                            idx /= budget;
                            (i as f64 + 0.5) / budget as f64
                        })
                        .collect()
                })
                .collect()
        }
        Method::MonteCarlo => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..budget)
                .map(|_| (0..dim).map(|_| rng.random::<f64>()).collect())
                .collect()
        }
    };
    let results = points.par_iter().map(|x| eval(x)).collect::<Result<Vec<_>>>()?;
    let n = results.len() as f64;
    let vals: Vec<f64> = results
        .iter()
        .map(|&(w, inside, _)| if inside { w } else { 0.0 })
        .collect();
    let uncertified = results.iter().filter(|r| !r.2).count();
    let mean = vals.iter().sum::<f64>() / n;
    let value = mean * box_measure;
    let error = match method {
        Method::MonteCarlo => {
            let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0).max(1.0);
            (var / n).sqrt() * box_measure
        }
        Method::Quadrature => {
            // cells cut by the region boundary: bound by the excluded mass
            // resolution of one cell layer along each axis
            let excluded = results.iter().filter(|r| !r.1).count() as f64;
            let cell = box_measure / n;
            if excluded == 0.0 {
                0.0
            } else {
                cell * excluded.powf((dim as f64 - 1.0) / dim as f64).max(1.0) * dim as f64
            }
        }
    };
    Ok(SysRegionVolume {
        estimate: VolumeEstimate {
            value,
            error,
            method,
            budget,
            seed: matches!(method, Method::MonteCarlo).then_some(seed),
            certified: uncertified == 0,
        },
        eps,
        cap,
        word_budget,
        uncertified_points: uncertified,
        points: results.len(),
        one_sided_factor: u1 - u0,
    })
}
