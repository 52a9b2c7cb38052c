//! One function per subcommand: read options, validate the config, run,
//! and build the report plus its CSV table.

use std::path::PathBuf;

use serde_json::json;

use crosscap::collar::{calibrate, verify_collar_inequality, CollarParams};
use crosscap::counting::{
    bx_identity_check_n12, default_ratio, fit_exponent, geometric_grid, top_decades_grid, BallCount, CountSeries,
};
use crosscap::enumerate::markoff::{ordered_tuple_lengths, BRUTEFORCE_LIMIT};
use crosscap::enumerate::{enumerate_simple, markoff_bruteforce, markoff_orbit, MarkoffConfig, SidedFilter};
use crosscap::pml::{n21_orbit_closure, PmlN21Point};
use crosscap::surface::{builtin_model, ModelName};
use crosscap::volume::{sys_region_volume, Method};

use crate::report::{Report, Table};
use crate::settings::Settings;
use crate::{BxArgs, CliError, CollarArgs, CountArgs, FitArgs, MarkoffArgs, ModelArgs, PmlArgs, VolumeArgs};

type Out = Result<(Report, Table), CliError>;

fn module(name: &'static str) -> impl Fn(crosscap::Error) -> CliError {
    move |source| CliError::Module { module: name, source }
}

fn num(x: f64) -> String {
    format!("{x}")
}

pub fn collar(a: CollarArgs, s: &mut Settings) -> Out {
    let core = s.get("core", a.core, 1.0)?;
    let width = s.get("width", a.width, 0.5)?;
    let kmax = s.get("kmax", a.kmax, 30)?;
    let p_off = s.get("p_offset", a.p_offset, 0.0)?;
    let q_off = s.get("q_offset", a.q_offset, 0.0)?;
    s.finish()?;
    if kmax < 0 {
        return Err(CliError::Usage("kmax must be nonnegative".into()));
    }
    let m = module("collar");
    let params = CollarParams::with_offsets(core, width, p_off, q_off).map_err(&m)?;
    let cal = calibrate(&params, kmax.min(12)).map_err(&m)?;
    let inputs = json!({"core": core, "width": width, "kmax": kmax, "p_offset": p_off, "q_offset": q_off});
    let mut table = Table::new(&["k", "i_closed", "i_geom", "length", "margin"]);
    let Some(cal) = cal else {
        let r = Report::new("collar", "collar-lemma", inputs)
            .outputs(json!({"calibration": null}))
            .check("calibration_found", false);
        return Ok((r, table));
    };
    let rep = verify_collar_inequality(&params, kmax, cal).map_err(&m)?;
    for row in &rep.rows {
        table.push(vec![
            row.k.to_string(),
            row.i_closed.to_string(),
            row.i_geom.to_string(),
            num(row.length),
            num(row.margin),
        ]);
    }
    let r = Report::new("collar", "collar-lemma", inputs)
        .outputs(json!({
            "calibration": cal,
            "boundary_length": params.boundary_length(),
            "min_margin": rep.min_margin,
            "rows": rep.rows.len(),
        }))
        .check("calibration_found", true)
        .check("counts_match_closed_form", rep.all_match)
        .check("margins_nonnegative", rep.min_margin >= 0.0);
    Ok((r, table))
}

pub fn markoff(a: MarkoffArgs, s: &mut Settings) -> Out {
    let arity = s.get("arity", a.arity, 3)?;
    let bound = s.get("bound", a.bound, 1000)?;
    let brute = s.get("bruteforce", a.bruteforce, bound <= BRUTEFORCE_LIMIT)?;
    s.finish()?;
    let m = module("markoff");
    let cfg = MarkoffConfig::for_arity(arity).map_err(&m)?;
    let orbit = markoff_orbit(&cfg, bound).map_err(&m)?;
    let header: &[&'static str] = if arity == 3 {
        &["x1", "x2", "x3", "length"]
    } else {
        &["x1", "x2", "x3", "x4", "length"]
    };
    let mut table = Table::new(header);
    for t in &orbit {
        let mut row: Vec<String> = t.coords().iter().map(|c| c.to_string()).collect();
        row.push(num(t.length()));
        table.push(row);
    }
    // growth of ordered solutions (Vieta tree nodes)
    let lengths = ordered_tuple_lengths(&orbit);
    let ordered = lengths.len();
    let fit = CountSeries::new(lengths.into_iter().filter(|&l| l > 0.0).collect(), "markoff", true)
        .ok()
        .and_then(|series| {
            let hi = series.max()?;
            fit_exponent(&series, &top_decades_grid(hi, 1.0)).ok()
        });
    let mut r = Report::new(
        "markoff",
        "markoff-vieta-orbit",
        json!({"arity": arity, "bound": bound, "bruteforce": brute}),
    );
    let mut out = json!({"tuples": orbit.len(), "ordered_tuples": ordered, "fit": fit});
    if brute {
        let bf = markoff_bruteforce(&cfg, bound).map_err(&m)?;
        out["bruteforce_tuples"] = json!(bf.len());
        r = r.check("orbit_equals_bruteforce", bf == orbit);
    }
    Ok((r.outputs(out), table))
}

struct ModelSel {
    model: ModelName,
    params: Vec<f64>,
    sided: SidedFilter,
    lmax: f64,
    budget: usize,
}

fn model_selection(a: ModelArgs, s: &mut Settings, default_sided: &str) -> Result<ModelSel, CliError> {
    let (model, params) = s.model(a.model, a.params, ModelName::N21)?;
    let sided = s.get("sided", a.sided, default_sided.to_string())?;
    let sided = SidedFilter::parse(&sided).map_err(|_| CliError::Usage(format!("sided: unknown filter '{sided}'")))?;
    let lmax = s.get("lmax", a.lmax, 20.0)?;
    let budget = s.get("budget", a.budget, 6)?;
    Ok(ModelSel {
        model,
        params,
        sided,
        lmax,
        budget,
    })
}

fn model_inputs(m: &ModelSel) -> serde_json::Value {
    json!({
        "model": m.model.as_str(),
        "params": m.params,
        "parameter_names": m.model.parameter_names(),
        "sided": m.sided.as_str(),
        "lmax": m.lmax,
        "budget": m.budget,
    })
}

pub fn enumerate(a: ModelArgs, s: &mut Settings) -> Out {
    let sel = model_selection(a, s, "all")?;
    s.finish()?;
    let rep = builtin_model(sel.model, &sel.params).map_err(module("surface"))?;
    let curves = enumerate_simple(&rep, sel.sided, sel.lmax, sel.budget).map_err(module("enumerate"))?;
    let mut table = Table::new(&["word", "sidedness", "length", "self_intersections", "certified"]);
    for c in &curves.records {
        table.push(vec![
            c.word.to_string(),
            if c.one_sided { "one" } else { "two" }.into(),
            num(c.length),
            c.self_intersections.to_string(),
            c.certified.to_string(),
        ]);
    }
    let mut r = Report::new("enumerate", "simple-geodesics", model_inputs(&sel)).outputs(json!({
        "curves": curves.records.len(),
        "saturated": curves.saturated,
        "uncertified_tests": curves.uncertified_tests,
        "method": curves.method,
        "shortest": curves.records.first().map(|c| c.length),
    }));
    r.certified = curves.certified();
    Ok((r, table))
}

fn ball_table(b: &BallCount) -> Table {
    let mut t = Table::new(&["L", "N", "nu"]);
    for ((l, n), nu) in b.grid.iter().zip(&b.counts).zip(&b.nu) {
        t.push(vec![num(*l), n.to_string(), num(*nu)]);
    }
    t
}

pub fn count(a: CountArgs, s: &mut Settings) -> Out {
    let sel = model_selection(a.model, s, "all")?;
    let d_flag = s.opt("d", a.d)?;
    let decades = s.get("decades", a.decades, 1.0)?;
    let expect = s.opt("expect_slope", a.expect_slope)?;
    let tol = s.get("tol", a.tol, 0.1)?;
    s.finish()?;
    let rep = builtin_model(sel.model, &sel.params).map_err(module("surface"))?;
    let d = d_flag.unwrap_or(rep.surface.dim_ml() as i32);
    let curves = enumerate_simple(&rep, sel.sided, sel.lmax, sel.budget).map_err(module("enumerate"))?;
    let series = curves.series(sel.sided.as_str()).map_err(module("counting"))?;
    let grid = top_decades_grid(sel.lmax, decades);
    let balls = BallCount::new(&series, &grid, d);
    let fit = fit_exponent(&series, &grid).map_err(module("counting"))?;
    let mut inputs = model_inputs(&sel);
    inputs["d"] = json!(d);
    inputs["decades"] = json!(decades);
    let mut r = Report::new("count", "thm1-deficiency", inputs).outputs(json!({
        "curves": series.len(),
        "fit": fit,
        "nu_nonincreasing": balls.nonincreasing(),
        "nu_decay_ratio": balls.decay_ratio(),
        "saturated": curves.saturated,
        "uncertified_tests": curves.uncertified_tests,
    }));
    r.certified = curves.certified();
    if let Some(e) = expect {
        r = r.check("slope_within_tol", (fit.slope - e).abs() <= tol);
    }
    Ok((r, ball_table(&balls)))
}

fn read_lengths(path: &PathBuf) -> Result<Vec<f64>, CliError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let headers = rdr.headers().map_err(|e| CliError::Io(e.to_string()))?.clone();
    let col = headers
        .iter()
        .position(|h| h.trim().eq_ignore_ascii_case("length"))
        .unwrap_or(0);
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Io(e.to_string()))?;
        let v = rec.get(col).unwrap_or("").trim();
        out.push(
            v.parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{} row {}: not a number '{v}'", path.display(), i + 2)))?,
        );
    }
    Ok(out)
}

pub fn fit(a: FitArgs, s: &mut Settings) -> Out {
    let input: Option<PathBuf> = s
        .opt("input", a.input.map(|p| p.display().to_string()))?
        .map(PathBuf::from);
    let d = s.get("d", a.d, 1)?;
    let decades = s.get("decades", a.decades, 1.0)?;
    s.finish()?;
    let input = input.ok_or_else(|| CliError::Usage("fit needs --input".into()))?;
    let lengths = read_lengths(&input)?;
    let series = CountSeries::new(lengths, input.display().to_string(), true).map_err(module("counting"))?;
    let hi = series
        .max()
        .ok_or_else(|| CliError::Usage("no lengths in input".into()))?;
    let grid = top_decades_grid(hi, decades);
    let balls = BallCount::new(&series, &grid, d);
    let fit = fit_exponent(&series, &grid).map_err(module("counting"))?;
    let r = Report::new(
        "fit",
        "thm1-deficiency",
        json!({"input": input.display().to_string(), "d": d, "decades": decades}),
    )
    .outputs(json!({
        "lengths": series.len(),
        "fit": fit,
        "nu_nonincreasing": balls.nonincreasing(),
        "nu_decay_ratio": balls.decay_ratio(),
    }));
    Ok((r, ball_table(&balls)))
}

pub fn bx_identity(a: BxArgs, s: &mut Settings) -> Out {
    let l1 = s.get("l1", a.l1, 1.0)?;
    let l2 = s.get("l2", a.l2, 1.0)?;
    let lmax = s.get("lmax", a.lmax, 1e4 * l1.max(l2))?;
    let tol = s.get("tol", a.tol, 1e-3)?;
    s.finish()?;
    let m = module("counting");
    let check = bx_identity_check_n12(l1, l2, lmax).map_err(&m)?;
    let mut table = Table::new(&["L", "N", "nu"]);
    for l in geometric_grid(l1.max(l2), lmax, default_ratio()) {
        let c = bx_identity_check_n12(l1, l2, l).map_err(&m)?;
        table.push(vec![num(l), c.count.to_string(), num(c.direct)]);
    }
    let r = Report::new(
        "bx-identity",
        "bx-identity",
        json!({"l1": l1, "l2": l2, "lmax": lmax, "tol": tol}),
    )
    .outputs(&check)
    .check("relative_error_within_tol", check.rel_error <= tol);
    Ok((r, table))
}

pub fn pml_orbit(a: PmlArgs, s: &mut Settings) -> Out {
    let point = s.get("point", a.point, "0:0.5".to_string())?;
    let depth = s.get("depth", a.depth, 5)?;
    s.finish()?;
    let m = module("pml");
    let p = PmlN21Point::parse(&point).map_err(&m)?;
    let closure = n21_orbit_closure(p, depth).map_err(&m)?;
    let mut table = Table::new(&["point", "n", "t"]);
    for q in &closure.orbit {
        let (n, t) = match q {
            PmlN21Point::GammaInf => (String::new(), String::new()),
            PmlN21Point::Arc { n, .. } => (n.to_string(), q.t().map(num).unwrap_or_default()),
        };
        table.push(vec![q.to_string(), n, t]);
    }
    let r = Report::new(
        "pml-orbit",
        "pml-n21-orbit-closure",
        json!({"point": point, "depth": depth}),
    )
    .outputs(json!({
        "kind": closure.kind,
        "orbit_size": closure.orbit.len(),
        "accumulation": closure.accumulation.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
    }));
    Ok((r, table))
}

pub fn volume(a: VolumeArgs, s: &mut Settings) -> Out {
    let (model, params) = s.model(a.model, a.params, ModelName::N21)?;
    let mut eps = s.list("eps", a.eps, &[0.2, 0.1, 0.05])?;
    let cap = s.opt("cap", a.cap)?;
    let method = s.get("method", a.method, "quadrature".to_string())?;
    let method = Method::parse(&method).map_err(|e| CliError::Usage(e.to_string()))?;
    let default_budget = match method {
        Method::Quadrature => 24,
        Method::MonteCarlo => 4096,
    };
    let budget = s.get("budget", a.budget, default_budget)?;
    let seed = s.get("seed", a.seed, 0)?;
    let word_budget = s.get("word_budget", a.word_budget, 3)?;
    s.finish()?;
    if eps.is_empty() {
        return Err(CliError::Usage("eps: empty list".into()));
    }
    eps.sort_by(|x, y| y.total_cmp(x));
    let m = module("volume");
    let mut rows = Vec::new();
    for &e in &eps {
        rows.push(sys_region_volume(model, &params, e, cap, method, budget, seed, word_budget).map_err(&m)?);
    }
    let mut table = Table::new(&[
        "eps",
        "value",
        "error",
        "certified",
        "uncertified_points",
        "one_sided_factor",
    ]);
    for v in &rows {
        table.push(vec![
            num(v.eps),
            num(v.estimate.value),
            num(v.estimate.error),
            v.estimate.certified.to_string(),
            v.uncertified_points.to_string(),
            num(v.one_sided_factor),
        ]);
    }
    let order = (rows.len() >= 2).then(|| {
        let x: Vec<f64> = rows.iter().map(|v| v.one_sided_factor.ln()).collect();
        let y: Vec<f64> = rows.iter().map(|v| v.estimate.value.ln()).collect();
        crosscap::counting::least_squares(&x, &y).0
    });
    let estimates: Vec<_> = rows
        .iter()
        .map(|v| {
            json!({
                "eps": v.eps,
                "value": v.estimate.value,
                "error": v.estimate.error,
                "method": v.estimate.method,
                "seed": v.estimate.seed,
                "certified": v.estimate.certified,
            })
        })
        .collect();
    let finite = rows.iter().all(|v| v.estimate.value.is_finite());
    let monotone = rows.windows(2).all(|w| w[1].estimate.value >= w[0].estimate.value);
    let mut r = Report::new(
        "volume",
        "norbury-divergence",
        json!({
            "model": model.as_str(),
            "params": params,
            "eps": eps,
            "cap": rows[0].cap,
            "method": method.as_str(),
            "budget": budget,
            "word_budget": word_budget,
        }),
    )
    .outputs(json!({
        "estimates": estimates,
        "divergence_order": order,
        "one_sided_coordinates": crosscap::volume::model_chart_layout(model).0.len(),
    }))
    .check("finite", finite)
    .check("monotone_in_eps", monotone);
    r.certified = rows.iter().all(|v| v.estimate.certified);
    if method == Method::MonteCarlo {
        r.seed = Some(seed);
    }
    Ok((r, table))
}
