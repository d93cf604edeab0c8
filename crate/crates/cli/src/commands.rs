use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use kdist::body::Direction;
use kdist::distset::{growth_scan, polygonality_probe, write_growth_csv};
use kdist::fourier::{
    average_envelope, decay_fit, lemma11_check, lemma12_check, ray_envelope, ray_samples, write_scan_csv,
    FitSummary, Kind, Lemma12Grid, ScanRow,
};
use kdist::fractal::{
    box_dim, cantor_build, delta_cover, difference_cover, dio_build, energy_ladder, levels_for_depth,
    natural_product_measure, write_intervals_csv, CantorSpec, DioSpec, IntervalSummary, Product,
};
use kdist::scalar::rational_string;
use kdist::stats::fit_power_law;
use kdist::{Body, Rational};
use serde_json::{json, Value};

use crate::config::{Lemma, Measure, ScanConfig, Trend};
use crate::report::{OutDir, Report, Verdict};
use crate::svg::{emit_plot, PlotFit};

/// Everything a subcommand needs: the parsed config, its JSON echo, the
/// effective seed and the output directory.
pub struct RunContext {
    pub config: ScanConfig,
    pub echo: Value,
    pub seed: u64,
    pub out: PathBuf,
}

impl RunContext {
    fn report(&self, command: &str) -> Report {
        Report::new(command, self.seed, self.echo.clone(), self.config.timestamp)
    }

    fn body(&self) -> Result<Body> {
        let spec = self.config.section("body", &self.config.body)?;
        spec.build::<f64>().context("field `body`")
    }

    fn plot(&self, out: &mut OutDir, title: &str, samples: &[(f64, f64)], fit: &PlotFit) -> Result<()> {
        if self.config.plot {
            let svg = emit_plot(title, samples, fit)?;
            out.write("plot.svg", svg.as_bytes())?;
        }
        Ok(())
    }
}

fn csv(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for r in rows {
        s.push_str(&r);
        s.push('\n');
    }
    s
}

fn growth_fit(points: &[(f64, f64)]) -> Result<PlotFit> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
    let f = fit_power_law(&xs, &ys).context("need two positive points for a power-law fit")?;
    Ok(PlotFit::growth(f.slope, f.intercept.exp(), f.residual))
}

pub fn body_inspect(ctx: &RunContext) -> Result<Report> {
    let body = ctx.body()?;
    let mut report = ctx.report("body inspect");
    let mut results = json!({
        "dim": body.dim(),
        "inradius": body.inradius(),
        "circumradius": body.circumradius(),
        "diameter": body.diameter(),
        "volume": body.volume().ok(),
        "rotation_invariant": body.is_rotation_invariant(),
        "exact_polygon": body.exact_polygon().is_some(),
    });
    if body.dim() == 2 {
        let width = body.min_width(kdist::body::DEFAULT_DIRECTIONS);
        let eps: Vec<f64> = (2..22).map(|k| width * 2f64.powi(-k)).collect();
        let c = kdist::body::curvature_condition(&body, &eps, kdist::body::DEFAULT_DIRECTIONS)?;
        results["perimeter"] = json!(body.perimeter().ok());
        results["min_width"] = json!(width);
        results["curvature"] = json!({
            "depths": eps,
            "c_sup": c.c_sup,
            "worst_theta": c.worst_theta,
            "satisfied": c.satisfied,
            "flat_directions": c.flat_directions.len(),
        });
    }
    report.results = results;
    OutDir::create(&ctx.out)?.finish(report)
}

pub fn decay_scan(ctx: &RunContext) -> Result<Report> {
    let body = ctx.body()?;
    let d = ctx.config.section("decay", &ctx.config.decay)?;
    let kind = match d.measure {
        Measure::Surface => Kind::Surface,
        Measure::Body => Kind::Body,
    };
    let mut out = OutDir::create(&ctx.out)?;
    let (samples, title) = match d.average {
        Some(p) => {
            let env = average_envelope(&body, kind, p, d.r_min, d.r_max, d.windows_per_octave)?;
            (env, format!("L^{p} spherical average, {:?} measure", d.measure).to_lowercase())
        }
        None => {
            let dir = Direction::from_angle(d.angle);
            let raw = ray_samples(&body, kind, &dir, d.r_min, d.r_max)?;
            let rows: Vec<ScanRow> = raw
                .iter()
                .map(|(r, v)| ScanRow { r: *r, theta: d.angle, value_re: *v, value_im: 0.0 })
                .collect();
            let mut buf = Vec::new();
            write_scan_csv(&rows, &mut buf)?;
            out.write("scan.csv", &buf)?;
            let env = ray_envelope(&raw, d.r_min, d.r_max, d.windows_per_octave);
            (env, format!("{:?} measure along theta = {}", d.measure, d.angle).to_lowercase())
        }
    };
    out.write("envelope.csv", csv("R,value", samples.iter().map(|(r, v)| format!("{r},{v}"))).as_bytes())?;
    let fit = decay_fit(&samples, d.log_power)?;
    let mut report = ctx.report("decay scan");
    if let Some(g) = d.expected_gamma {
        report.verdict(Verdict::within("gamma", fit.gamma, g - d.tolerance, g + d.tolerance));
    }
    if let Some(lo) = d.gamma_min {
        report.verdict(Verdict::at_least("gamma_min", fit.gamma, lo));
    }
    if let Some(hi) = d.gamma_max {
        report.verdict(Verdict::at_most("gamma_max", fit.gamma, hi));
    }
    report.results = json!({
        "fit": FitSummary::from(&fit),
        "log_power": fit.log_power,
        "dropped": fit.dropped,
    });
    ctx.plot(&mut out, &title, &samples, &PlotFit::decay(fit.gamma, fit.c, fit.log_power, fit.residual))?;
    out.finish(report)
}

pub fn distset_scan(ctx: &RunContext) -> Result<Report> {
    let body = ctx.body()?;
    let d = ctx.config.section("distset", &ctx.config.distset)?;
    let family = d.family.family(ctx.seed);
    let growth = growth_scan(&family, &body, &d.q_list, d.mode, d.alpha, d.slack)?;
    let mut out = OutDir::create(&ctx.out)?;
    let mut buf = Vec::new();
    write_growth_csv(&growth, &mut buf)?;
    out.write("growth.csv", &buf)?;

    let mut report = ctx.report("distset scan");
    report.verdict(Verdict::at_least("beta_vs_bound", growth.beta, growth.bound - growth.slack));
    if d.beta_min.is_some() || d.beta_max.is_some() {
        let lo = d.beta_min.unwrap_or(f64::NEG_INFINITY);
        let hi = d.beta_max.unwrap_or(f64::INFINITY);
        report.verdict(Verdict::within("beta", growth.beta, lo, hi));
    }
    let class = if growth.dim == 2 { Some(polygonality_probe(&growth)?) } else { None };
    if let Some(expected) = d.expect_class {
        let found = class.context("field `distset.expect_class`: classification is planar")?;
        report.verdict(Verdict::expect("class", found, expected));
    }
    let gaps: Vec<f64> = growth.points.iter().filter_map(|p| p.min_gap).collect();
    if d.gaps_strictly_decreasing {
        let ok = gaps.len() == growth.points.len() && gaps.windows(2).all(|w| w[1] < w[0]);
        report.verdict(Verdict::expect("gaps_strictly_decreasing", ok, true));
    }
    if let Some(hi) = d.max_final_gap {
        let last = growth.points.last().and_then(|p| p.min_gap).unwrap_or(f64::INFINITY);
        report.verdict(Verdict::below("final_gap", last, hi));
    }
    report.results = json!({ "growth": growth, "class": class });
    let pts: Vec<(f64, f64)> = growth
        .points
        .iter()
        .filter(|p| p.q >= growth.fit_from)
        .map(|p| (p.q as f64, p.count as f64))
        .collect();
    let all: Vec<(f64, f64)> = growth.points.iter().map(|p| (p.q as f64, p.count as f64)).collect();
    ctx.plot(&mut out, "distinct distances", &all, &growth_fit(&pts)?)?;
    out.finish(report)
}

pub fn fractal_build(ctx: &RunContext) -> Result<Report> {
    let f = ctx.config.section("fractal", &ctx.config.fractal)?;
    let spec = CantorSpec::new(f.m, f.depth).context("fields `fractal.m`/`fractal.depth`")?;
    let set = cantor_build(&spec)?;
    let cover = difference_cover(&spec)?;
    let mut out = OutDir::create(&ctx.out)?;
    let mut buf = Vec::new();
    write_intervals_csv(&set, &mut buf)?;
    out.write("cantor.csv", &buf)?;
    buf.clear();
    write_intervals_csv(&cover.union, &mut buf)?;
    out.write("difference_cover.csv", &buf)?;

    let mut report = ctx.report("fractal build");
    let base = i128::from(2 * f.m);
    let ratio = Rational::new(base - 1, base);
    let identity = (0..f.depth).fold(Rational::from_integer(2), |acc, _| acc * ratio);
    report.verdict(Verdict::expect(
        "pre_merge_length",
        rational_string(&cover.pre_merge_length),
        rational_string(&identity),
    ));
    let cover_summary = IntervalSummary::from(&cover.union);
    if let Some(hi) = f.max_cover_length {
        report.verdict(Verdict::below("cover_length", cover_summary.total_length_f64, hi));
    }

    let box_depth = f.box_depth.unwrap_or(f.depth);
    let box_spec = CantorSpec::new(f.m, box_depth).context("field `fractal.box_depth`")?;
    let factor = cantor_build(&box_spec)?;
    let product = Product(vec![factor; f.product_dim]);
    let levels = f.box_levels.clone().unwrap_or_else(|| levels_for_depth(f.m, box_depth));
    let bd = box_dim(&product, &levels)?;
    if f.box_dim_min.is_some() || f.box_dim_max.is_some() {
        let lo = f.box_dim_min.unwrap_or(f64::NEG_INFINITY);
        let hi = f.box_dim_max.unwrap_or(f64::INFINITY);
        report.verdict(Verdict::within("box_dim", bd.estimate, lo, hi));
    }

    let mut ladders = Vec::new();
    for (i, e) in f.energy.iter().enumerate() {
        let mu = natural_product_measure(&CantorSpec::new(f.m, e.depth)?, f.product_dim)
            .with_context(|| format!("field `fractal.energy[{i}].depth`"))?;
        let ladder = energy_ladder(&mu, e.gamma, &e.cutoffs).with_context(|| format!("fractal.energy[{i}]"))?;
        if let Some(t) = e.expect {
            let name = format!("energy_increments_gamma_{}", e.gamma);
            let found = match t {
                Trend::Grow => ladder.increments_grow(),
                Trend::Decay => ladder.increments_decay(),
            };
            let mut v = Verdict::expect(&name, found, true);
            v.threshold = format!("increments {}", if t == Trend::Grow { "grow" } else { "decay" });
            report.verdict(v);
        }
        ladders.push(json!({ "depth": e.depth, "ladder": ladder }));
    }

    report.results = json!({
        "cantor": IntervalSummary::from(&set),
        "difference_cover": {
            "merged": cover_summary,
            "pre_merge_count": cover.pre_merge_count,
            "pre_merge_length": rational_string(&cover.pre_merge_length),
        },
        "box_dim": { "product_dim": f.product_dim, "depth": box_depth, "result": bd },
        "energy": ladders,
    });
    let pts: Vec<(f64, f64)> = bd.counts.iter().map(|(l, n)| (2f64.powi(*l as i32), *n as f64)).collect();
    ctx.plot(&mut out, "box counting", &pts, &growth_fit(&pts)?)?;
    out.finish(report)
}

pub fn convert_demo(ctx: &RunContext) -> Result<Report> {
    let body = ctx.body()?;
    let c = ctx.config.section("convert", &ctx.config.convert)?;
    let family = c.source.family(ctx.seed);
    let mut rows = Vec::new();
    let mut counts = Vec::new();
    let mut table = String::from("q,cubes,half_side,disjoint,count,half_width,pre_merge_length,merged_length\n");
    for &q in &c.q_list {
        let spec = DioSpec::new(family.build::<f64>(q)?, q, c.s).context("field `convert.s`")?;
        let set = dio_build(&spec)?;
        let cover = delta_cover(&spec, &body, c.mode)?;
        let merged = cover.union.total_length();
        let _ = writeln!(
            table,
            "{q},{},{},{},{},{},{},{merged}",
            set.cube_count(),
            set.half_side,
            set.disjoint,
            cover.count,
            cover.half_width,
            cover.pre_merge_length
        );
        counts.push((q as f64, cover.count as f64));
        rows.push(json!({
            "q": q,
            "cubes": set.cube_count(),
            "half_side": set.half_side,
            "disjoint": set.disjoint,
            "count": cover.count,
            "half_width": cover.half_width,
            "pre_merge_length": cover.pre_merge_length,
            "merged_length": merged,
        }));
    }
    let mut out = OutDir::create(&ctx.out)?;
    out.write("convert.csv", table.as_bytes())?;
    let mut report = ctx.report("convert demo");
    let dim = family.dim() as f64;
    let (beta, fit) = if counts.len() >= 2 {
        let fit = growth_fit(&counts)?;
        (Some(fit.value), Some(fit))
    } else {
        (None, None)
    };
    let bound = beta.map(|b| c.s * b / dim);
    if let Some(hi) = c.max_dim_bound {
        let b = bound.context("field `convert.max_dim_bound` needs at least two q values")?;
        report.verdict(Verdict::at_most("dim_bound", b, hi));
    }
    report.results = json!({ "rows": rows, "beta": beta, "dim_bound": bound });
    if let Some(fit) = fit {
        ctx.plot(&mut out, "delta cover counts", &counts, &fit)?;
    }
    out.finish(report)
}

pub fn lemma_check(ctx: &RunContext) -> Result<Report> {
    let body = ctx.body()?;
    let l = ctx.config.section("lemma", &ctx.config.lemma)?;
    let mut out = OutDir::create(&ctx.out)?;
    let mut report = ctx.report("lemma check");
    match l.which {
        Lemma::ChordRatio => {
            if !(l.t_min > 0.0 && l.t_max > l.t_min) || l.t_per_octave == 0 {
                bail!("fields `lemma.t_min`/`lemma.t_max`/`lemma.t_per_octave`: need 0 < t_min < t_max and a positive step");
            }
            let steps = ((l.t_max / l.t_min).log2() * l.t_per_octave as f64).round() as i32;
            let ts: Vec<f64> = (0..=steps)
                .map(|k| l.t_min * 2f64.powf(k as f64 / l.t_per_octave as f64))
                .map(|t| t.min(l.t_max))
                .collect();
            let angles = l.angles.max(1);
            let th: Vec<f64> = (0..angles).map(|k| k as f64 * std::f64::consts::PI / angles as f64).collect();
            let r = lemma11_check(&body, &ts, &th)?;
            out.write(
                "octaves.csv",
                csv("lo,hi,max", r.octaves.iter().map(|o| format!("{},{},{}", o.lo, o.hi, o.max))).as_bytes(),
            )?;
            report.verdict(Verdict::at_most("spread", r.spread, l.max_spread));
            report.results = json!({
                "max_ratio": r.max_ratio,
                "argmax": { "t": r.argmax.0, "theta": r.argmax.1 },
                "spread": r.spread,
                "skipped": r.skipped,
            });
        }
        Lemma::Annulus => {
            let grid = Lemma12Grid::<f64>::dyadic(l.angles);
            let coarse = lemma12_check(&body, &grid)?;
            let fine = lemma12_check(&body, &grid.refined())?;
            let ratio = (fine.max_c / coarse.max_c).max(coarse.max_c / fine.max_c);
            let rows = coarse.per_freq.iter().map(|(xi, v)| {
                let refined = fine.per_freq.iter().find(|(x, _)| x == xi).map_or(String::new(), |(_, w)| w.to_string());
                format!("{xi},{v},{refined}")
            });
            out.write("per_freq.csv", csv("xi,coarse,refined", rows).as_bytes())?;
            if coarse.hypothesis {
                report.verdict(Verdict::below("refinement_ratio", ratio, l.max_refinement_ratio));
            }
            if let Some(b) = l.expect_bounded {
                report.verdict(Verdict::expect("bounded", fine.bounded, b));
            }
            let summary = |r: &kdist::fourier::Lemma12Report| {
                json!({
                    "max_c": r.max_c,
                    "argmax": { "R": r.argmax.0, "delta": r.argmax.1, "xi": r.argmax.2, "theta": r.argmax.3 },
                    "growth_exponent": r.growth_exponent,
                    "hypothesis": r.hypothesis,
                    "bounded": r.bounded,
                })
            };
            report.results = json!({
                "coarse": summary(&coarse),
                "refined": summary(&fine),
                "refinement_ratio": ratio,
            });
        }
    }
    out.finish(report)
}
