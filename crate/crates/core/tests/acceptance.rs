//! Acceptance suite: one PASS/FAIL line per criterion, then a single
//! assertion over all of them. Tolerances and runtime limits are pinned
//! below.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crosscap::collar::{
    calibrate, default_window, self_intersections_closed_form, self_intersections_geometric, verify_collar_inequality,
    CollarParams,
};
use crosscap::counting::{
    bx_identity_check_n12, fit_exponent, simplex_moment, simplex_moment_mc, top_decades_grid, BallCount, CountSeries,
};
use crosscap::enumerate::markoff::ordered_tuple_lengths;
use crosscap::enumerate::{enumerate_simple, markoff_bruteforce, markoff_orbit, MarkoffConfig, SidedFilter};
use crosscap::hypgeo::Isometry;
use crosscap::pml::{
    ball_intersect, n21_act, n21_label, w_minus, Ball, N13Orbit, N21Generator, N21Oracle, PmlN21Point,
    SymbolicLamination,
};
use crosscap::surface::{builtin_model, ModelName};
use crosscap::volume::{coth_integral, divergence_profile, sys_region_volume, FnChart, Method};

const COLLAR_GRID: [(f64, f64); 9] = [
    (0.5, 0.3),
    (0.5, 0.5),
    (0.5, 1.0),
    (1.0, 0.3),
    (1.0, 0.5),
    (1.0, 1.0),
    (2.0, 0.3),
    (2.0, 0.5),
    (2.0, 1.0),
];
const COLLAR_KMAX_COUNT: i64 = 20;
const COLLAR_KMAX_MARGIN: i64 = 30;
const MARKOFF_BOUND: u64 = 1_000;
const QUADRUPLE_BOUND: u64 = 10_000_000_000;
const QUADRUPLE_EXPONENT: (f64, f64) = (2.0, 3.0);
const GROWTH_LMAX: f64 = 30.0;
const N21_PARAMS: [f64; 3] = [2.0, 2.0, 1.0];
const N21_BUDGET: usize = 6;
const N21_EXPONENT: (f64, f64) = (1.0, 0.1);
const N3_PARAMS: [f64; 3] = [2.0, 3.0, 4.0];
const N3_BUDGET: usize = 4;
const N3_EXPONENT: (f64, f64) = (2.0, 0.2);
const NU_DECAY: f64 = 0.5;
const BX_REL_TOL: f64 = 1e-3;
const BX_PAIRS: [(f64, f64); 3] = [(1.0, 1.0), (1.0, 2.0), (0.7, 2.3)];
const SIMPLEX_CONFIGS: usize = 20;
const SIMPLEX_SAMPLES: usize = 1_000_000;
const SIMPLEX_SIGMAS: f64 = 3.0;
const DIVERGENCE_SLOPE_TOL: f64 = 0.02;
const DIVERGENCE_CLOSED_TOL: f64 = 1e-6;
const DIVERGENCE_MIN_DELTA: f64 = 1e-6;
const DIVERGENCE_PANELS: usize = 1024;
const SYS_EPS_FINITE: [f64; 3] = [0.05, 0.1, 0.2];
const SYS_EPS_LIMIT: [f64; 3] = [0.1, 0.01, 0.001];
const SYS_POINTS_PER_AXIS: usize = 24;
const SYS_WORD_BUDGET: usize = 3;
const SYS_ORDER_TOL: f64 = 0.10;
const RESIDUAL_TOL: f64 = 1e-8;
const FUZZ_TOL: f64 = 1e-9;
const FUZZ_CASES: usize = 1_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn collar_counts() -> Outcome {
    let mut bad = Vec::new();
    for (l, w) in COLLAR_GRID {
        let p = CollarParams::new(l, w).unwrap();
        let Some(cal) = calibrate(&p, COLLAR_KMAX_COUNT).unwrap() else {
            bad.push(format!("({l},{w}): no calibration"));
            continue;
        };
        for k in -COLLAR_KMAX_COUNT..=COLLAR_KMAX_COUNT {
            let g = cal.apply(k);
            if self_intersections_geometric(&p, g, default_window(g)).unwrap() != self_intersections_closed_form(k) {
                bad.push(format!("({l},{w}) k={k}"));
            }
        }
    }
    ok(
        bad.is_empty(),
        format!("9 collars x 41 arcs, calibration k -> k+1, mismatches {bad:?}"),
    )
}

fn collar_margins() -> Outcome {
    let mut worst = f64::INFINITY;
    for (l, w) in COLLAR_GRID {
        let p = CollarParams::new(l, w).unwrap();
        let cal = calibrate(&p, COLLAR_KMAX_COUNT).unwrap().unwrap();
        worst = worst.min(
            verify_collar_inequality(&p, COLLAR_KMAX_MARGIN, cal)
                .unwrap()
                .min_margin,
        );
    }
    ok(worst >= 0.0, format!("min margin over |k| <= 30: {worst:.4}"))
}

fn markoff_equivalence() -> Outcome {
    let mut detail = Vec::new();
    let mut pass = true;
    for cfg in [MarkoffConfig::triples(), MarkoffConfig::quadruples()] {
        let a = markoff_orbit(&cfg, MARKOFF_BOUND).unwrap();
        let b = markoff_bruteforce(&cfg, MARKOFF_BOUND).unwrap();
        pass &= a == b;
        detail.push(format!("arity {}: {} tuples", cfg.arity, a.len()));
    }
    ok(pass, detail.join(", "))
}

fn quadruple_growth() -> Outcome {
    let orbit = markoff_orbit(&MarkoffConfig::quadruples(), QUADRUPLE_BOUND).unwrap();
    // ordered solutions; the seed has length 0
    let lengths: Vec<f64> = ordered_tuple_lengths(&orbit).into_iter().filter(|&l| l > 0.0).collect();
    let lmax = 2.0 * (QUADRUPLE_BOUND as f64 / 2.0).acosh();
    let series = CountSeries::new(lengths, "quadruples", true).unwrap();
    let fit = fit_exponent(&series, &top_decades_grid(lmax, 1.0)).unwrap();
    ok(
        fit.slope > QUADRUPLE_EXPONENT.0 && fit.slope < QUADRUPLE_EXPONENT.1,
        format!(
            "{} ordered quadruples, exponent {:.4} over L in [{:.2}, {:.2}], r2 {:.4}",
            series.len(),
            fit.slope,
            fit.window.0,
            fit.window.1,
            fit.r2
        ),
    )
}

struct Growth {
    n21: Outcome,
    n3: Outcome,
    nu: Outcome,
}

fn growth() -> Growth {
    let rep = builtin_model(ModelName::N21, &N21_PARAMS).unwrap();
    let c = enumerate_simple(&rep, SidedFilter::OneSided, GROWTH_LMAX, N21_BUDGET).unwrap();
    let grid = top_decades_grid(GROWTH_LMAX, 1.0);
    let fit = fit_exponent(&c.series("n21").unwrap(), &grid).unwrap();
    let n21 = ok(
        c.certified() && (fit.slope - N21_EXPONENT.0).abs() <= N21_EXPONENT.1,
        format!(
            "N21{N21_PARAMS:?} one-sided: {} curves, certified {}, exponent {:.4}",
            c.records.len(),
            c.certified(),
            fit.slope
        ),
    );

    let rep = builtin_model(ModelName::N3, &N3_PARAMS).unwrap();
    let c = enumerate_simple(&rep, SidedFilter::TwoSided, GROWTH_LMAX, N3_BUDGET).unwrap();
    let series = c.series("n3").unwrap();
    let fit = fit_exponent(&series, &grid).unwrap();
    let n3 = ok(
        c.certified() && (fit.slope - N3_EXPONENT.0).abs() <= N3_EXPONENT.1,
        format!(
            "N3{N3_PARAMS:?} two-sided: {} curves, certified {}, exponent {:.4}",
            c.records.len(),
            c.certified(),
            fit.slope
        ),
    );
    let dim = rep.surface.dim_ml() as i32;
    let balls = BallCount::new(&series, &grid, dim);
    let nu = ok(
        c.certified() && dim == 3 && balls.nonincreasing() && balls.decay_ratio() < NU_DECAY,
        format!(
            "N/L^{dim} over {} grid points: nonincreasing {}, final/initial {:.4}",
            grid.len(),
            balls.nonincreasing(),
            balls.decay_ratio()
        ),
    );
    Growth { n21, n3, nu }
}

fn bx_identity() -> Outcome {
    let mut worst = 0.0f64;
    for (l1, l2) in BX_PAIRS {
        let c = bx_identity_check_n12(l1, l2, 1e4 * l1.max(l2)).unwrap();
        worst = worst.max(c.rel_error);
    }
    ok(worst <= BX_REL_TOL, format!("worst relative error {worst:.3e}"))
}

fn simplex() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut worst = 0.0f64;
    for i in 0..SIMPLEX_CONFIGS {
        let d = rng.random_range(1..=6usize);
        let n = rng.random_range(1..=d);
        let lengths: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..3.0)).collect();
        let l = rng.random_range(1.0..5.0);
        let exact = simplex_moment(&lengths, d, l).unwrap();
        let (mean, se) = simplex_moment_mc(&lengths, d, l, SIMPLEX_SAMPLES, i as u64).unwrap();
        worst = worst.max((mean - exact).abs() / se);
    }
    ok(
        worst <= SIMPLEX_SIGMAS,
        format!("{SIMPLEX_CONFIGS} configs, worst deviation {worst:.2} standard errors"),
    )
}

fn divergence() -> Outcome {
    let deltas: Vec<f64> = (0..)
        .map(|k| 0.1 * 0.5f64.powi(k))
        .take_while(|&d| d >= DIVERGENCE_MIN_DELTA)
        .collect();
    let chart = FnChart::default().one_sided("l", 1.0, 1.0);
    let p = divergence_profile(&deltas, &chart, DIVERGENCE_PANELS).unwrap();
    let closed = p
        .points
        .iter()
        .map(|&(d, v)| (v - coth_integral(d, 1.0)).abs())
        .fold(0.0, f64::max);
    ok(
        (p.slope - 1.0).abs() <= DIVERGENCE_SLOPE_TOL && closed <= DIVERGENCE_CLOSED_TOL,
        format!(
            "{} cutoffs, slope {:.5}, closed-form error {closed:.2e}",
            deltas.len(),
            p.slope
        ),
    )
}

fn sys_region() -> Outcome {
    let vol = |eps: f64| {
        sys_region_volume(
            ModelName::N21,
            &N21_PARAMS,
            eps,
            None,
            Method::Quadrature,
            SYS_POINTS_PER_AXIS,
            0,
            SYS_WORD_BUDGET,
        )
        .unwrap()
    };
    let finite: Vec<_> = SYS_EPS_FINITE.iter().map(|&e| vol(e)).collect();
    let fin_ok = finite
        .iter()
        .all(|v| v.estimate.value.is_finite() && v.estimate.certified)
        && finite.windows(2).all(|w| w[0].estimate.value >= w[1].estimate.value);
    let limit: Vec<_> = SYS_EPS_LIMIT.iter().map(|&e| vol(e)).collect();
    let increasing = limit.windows(2).all(|w| w[1].estimate.value > w[0].estimate.value);
    let x: Vec<f64> = limit.iter().map(|v| v.one_sided_factor.ln()).collect();
    let y: Vec<f64> = limit.iter().map(|v| v.estimate.value.ln()).collect();
    let order = crosscap::counting::least_squares(&x, &y).0;
    let coords = crosscap::volume::model_chart_layout(ModelName::N21).0.len() as f64;
    let order_ok = ((order - coords) / coords).abs() <= SYS_ORDER_TOL;
    ok(
        fin_ok && increasing && order_ok,
        format!(
            "V(0.05, 0.1, 0.2) = {:.2}, {:.2}, {:.2}; V(0.1, 0.01, 0.001) = {:.2}, {:.2}, {:.2}; divergence order {order:.3} vs {coords}",
            finite[0].estimate.value,
            finite[1].estimate.value,
            finite[2].estimate.value,
            limit[0].estimate.value,
            limit[1].estimate.value,
            limit[2].estimate.value
        ),
    )
}

fn pml() -> Outcome {
    use N21Generator::*;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = Vec::new();
    for _ in 0..FUZZ_CASES {
        let p = match rng.random_range(0..3) {
            0 => PmlN21Point::GammaInf,
            1 => PmlN21Point::gamma(rng.random_range(-100..100)),
            _ => PmlN21Point::arc(rng.random_range(-100..100), rng.random::<f64>()).unwrap(),
        };
        if n21_act(Reflect, n21_act(Twist, n21_act(Reflect, n21_act(Twist, p)))) != p {
            failures.push("dihedral");
        }
    }
    for g in [Twist, Reflect] {
        if n21_act(g, PmlN21Point::GammaInf) != PmlN21Point::GammaInf {
            failures.push("ginf fixed");
        }
    }
    let relabel = |g: N21Generator, c: &str| -> String {
        let n: i64 = c[1..].parse().unwrap();
        n21_label(n21_act(g, PmlN21Point::gamma(n)).curve_index().unwrap())
    };
    for n in -10..10 {
        let atoms: BTreeMap<String, f64> = [(n21_label(n), 1.5), (n21_label(n + 1), 0.25)].into_iter().collect();
        let l = SymbolicLamination::new(atoms, Some(("ginf".into(), 1.0))).unwrap();
        for g in [Twist, Reflect] {
            if w_minus(&l.relabel(&|c| relabel(g, c)), 2).unwrap() != w_minus(&l, 2).unwrap() {
                failures.push("w_minus");
            }
        }
    }
    let balls: Vec<Ball> = (-3..3)
        .flat_map(|n| {
            [
                Ball {
                    support: [n21_label(n)].into_iter().collect(),
                },
                Ball {
                    support: [n21_label(n), n21_label(n + 1)].into_iter().collect(),
                },
            ]
        })
        .collect();
    let o = N21Oracle;
    for a in &balls {
        for b in &balls {
            if ball_intersect(a, b, &o).unwrap() != ball_intersect(b, a, &o).unwrap() {
                failures.push("commutative");
            }
            for c in &balls {
                let left = ball_intersect(a, b, &o)
                    .unwrap()
                    .and_then(|ab| ball_intersect(&ab, c, &o).unwrap());
                let right = ball_intersect(b, c, &o)
                    .unwrap()
                    .and_then(|bc| ball_intersect(a, &bc, &o).unwrap());
                if left != right {
                    failures.push("associative");
                }
            }
        }
    }
    let orbit = N13Orbit::build(&MarkoffConfig::quadruples(), 6).unwrap();
    if !orbit.tangency_graph_connected() {
        failures.push("tangency");
    }
    failures.dedup();
    ok(
        failures.is_empty(),
        format!(
            "dihedral x{FUZZ_CASES}, w- x40, balls {}^3, tangency over {} curves; failures {failures:?}",
            balls.len(),
            orbit.curve_count()
        ),
    )
}

fn holonomy() -> Outcome {
    let mut worst_residual = 0.0f64;
    for m in ModelName::ALL {
        let rep = builtin_model(m, &m.default_parameters()).unwrap();
        worst_residual = worst_residual
            .max(rep.relation_residual().unwrap())
            .max(rep.peripheral_residual().unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut random_iso = |want_rev: Option<bool>| loop {
        let e: Vec<f64> = (0..4).map(|_| rng.random_range(-3.0..3.0)).collect();
        let det = e[0] * e[3] - e[1] * e[2];
        if det.abs() < 0.2 || want_rev.is_some_and(|r| r != (det < 0.0)) {
            continue;
        }
        return Isometry::new(e[0], e[1], e[2], e[3]).unwrap();
    };
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1.0);
    let mut conj_err = 0.0f64;
    let mut done = 0;
    while done < FUZZ_CASES {
        let g = random_iso(None);
        let h = random_iso(None);
        let (Ok(a), Ok(b)) = (g.length(), h.conjugate(&g).length()) else {
            continue;
        };
        conj_err = conj_err.max(rel(a, b));
        done += 1;
    }
    let mut glide_err = 0.0f64;
    for _ in 0..FUZZ_CASES {
        let g = random_iso(Some(true));
        glide_err = glide_err.max(rel(g.square().length().unwrap(), 2.0 * g.length().unwrap()));
    }
    ok(
        worst_residual < RESIDUAL_TOL && conj_err <= FUZZ_TOL && glide_err <= FUZZ_TOL,
        format!("residual {worst_residual:.2e}, conjugation {conj_err:.2e}, glide square {glide_err:.2e}"),
    )
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

#[test]
fn acceptance() {
    let secs = Duration::from_secs;
    let mut rows: Vec<(u8, &str, Outcome, Duration, Duration)> = Vec::new();
    let mut run = |id: u8, name: &'static str, limit: Duration, f: &dyn Fn() -> Outcome| {
        let (o, t) = timed(f);
        rows.push((id, name, o, t, limit));
    };
    run(1, "collar closed form = geometry", secs(10), &collar_counts);
    run(2, "collar inequality margins", secs(10), &collar_margins);
    run(3, "Markoff orbit = brute force", secs(30), &markoff_equivalence);
    run(4, "quadruple growth exponent", secs(120), &quadruple_growth);
    let (g, t) = timed(growth);
    rows.push((5, "genus-one growth: N21 one-sided", g.n21, t, secs(300)));
    rows.push((5, "genus-one growth: N3 two-sided", g.n3, t, secs(300)));
    rows.push((6, "deficiency witness nu = N/L^3", g.nu, t, secs(300)));
    let mut run = |id: u8, name: &'static str, limit: Duration, f: &dyn Fn() -> Outcome| {
        let (o, t) = timed(f);
        rows.push((id, name, o, t, limit));
    };
    run(7, "b_X(1) identity on N12", secs(1), &bx_identity);
    run(8, "simplex factor vs Monte Carlo", secs(60), &simplex);
    run(9, "Norbury divergence profile", secs(10), &divergence);
    run(10, "finite {sys- >= eps} volume", secs(300), &sys_region);
    run(11, "PML model invariants", secs(10), &pml);
    run(12, "holonomy integrity and fuzz", secs(10), &holonomy);

    let mut all = true;
    for (id, name, o, t, limit) in &rows {
        let pass = o.pass && t <= limit;
        all &= pass;
        println!(
            "criterion {id:>2} {} {name}: {} ({:.2} s, limit {} s)",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            t.as_secs_f64(),
            limit.as_secs()
        );
    }
    assert!(all, "acceptance criteria failed");
}
