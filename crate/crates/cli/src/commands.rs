use std::fs;
use std::time::Instant;

use anyhow::{anyhow, bail, Context as _, Result};
use serde_json::{json, Value};
use tentspace::carleson::{blasco_constant, carleson_constant, log_carleson_constant, vanishing_profile};
use tentspace::disk::build_r_lattice;
use tentspace::norms::{bloch_norm, dirichlet_norm, fps_seminorm, log_f_seminorm, tent_norm};
use tentspace::operators::{embedding_ratio, operator_boundedness_report, standard_battery, Operator, RatioReport};
use tentspace::verify::{run_suite, Bracket, SuiteReport, VerifyOptions, SUITE_IDS};
use tentspace::{
    AnalyticFunction, ConstantReport, DiskPoint, MeasureSpec, QuadratureSpec, SearchParams, SpaceParams,
};

use crate::output::{emit, num, render, Report, Table};
use crate::{CarlesonKind, Command, Global, NormKind, OpKind, ParamArgs};

/// Exit status when a suite fails.
const SUITE_FAILURE: u8 = 2;

/// Values taken from `--spec-file`.
#[derive(Default)]
struct SpecFile {
    f: Option<String>,
    g: Option<String>,
    mu: Option<String>,
    battery: Vec<String>,
}

impl SpecFile {
    fn load(global: &Global) -> Result<Self> {
        let Some(path) = &global.spec_file else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let table: toml::Table = text.parse().with_context(|| format!("parsing {}", path.display()))?;
        let mut out = Self::default();
        for (key, value) in table {
            let as_str = |v: &toml::Value| {
                v.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| anyhow!("spec file key '{key}' must be a string"))
            };
            match key.as_str() {
                "f" => out.f = Some(as_str(&value)?),
                "g" => out.g = Some(as_str(&value)?),
                "mu" => out.mu = Some(as_str(&value)?),
                "battery" => {
                    let items = value
                        .as_array()
                        .ok_or_else(|| anyhow!("spec file key 'battery' must be an array of strings"))?;
                    out.battery = items.iter().map(as_str).collect::<Result<_>>()?;
                }
                other => bail!("unknown spec file key '{other}', expected one of: f, g, mu, battery"),
            }
        }
        Ok(out)
    }
}

struct Ctx {
    depth: u32,
    spec: QuadratureSpec,
    search: SearchParams,
    seed: u64,
    file: SpecFile,
}

impl Ctx {
    fn function(&self, flag: &Option<String>, name: &str) -> Result<AnalyticFunction> {
        let text = match name {
            "g" => flag.as_ref().or(self.file.g.as_ref()),
            _ => flag.as_ref().or(self.file.f.as_ref()),
        };
        let text = text.ok_or_else(|| anyhow!("missing --{name} (or '{name}' in --spec-file)"))?;
        Ok(text.parse()?)
    }

    fn measure(&self, flag: &Option<String>) -> Result<MeasureSpec> {
        let text = flag
            .as_ref()
            .or(self.file.mu.as_ref())
            .ok_or_else(|| anyhow!("missing --mu (or 'mu' in --spec-file)"))?;
        Ok(text.parse()?)
    }

    fn battery(&self, flags: &[String], alpha: f64) -> Result<Vec<AnalyticFunction>> {
        let items = if flags.is_empty() { &self.file.battery } else { flags };
        if items.is_empty() {
            return Ok(standard_battery(alpha));
        }
        items.iter().map(|s| Ok(s.parse()?)).collect()
    }
}

fn parse_nodes(text: &str) -> Result<(usize, usize)> {
    let bad = || anyhow!("bad --nodes '{text}', expected R or RxA");
    match text.split_once('x') {
        Some((r, a)) => Ok((r.trim().parse().map_err(|_| bad())?, a.trim().parse().map_err(|_| bad())?)),
        None => {
            let r: usize = text.trim().parse().map_err(|_| bad())?;
            Ok((r, 2 * r))
        }
    }
}

fn params(a: &ParamArgs) -> Result<SpaceParams> {
    Ok(SpaceParams::new(a.p, a.alpha, a.s)?)
}

fn params_json(p: &SpaceParams) -> Value {
    json!({ "p": p.p, "alpha": p.alpha, "s": p.s })
}

fn constant_table(report: &ConstantReport, value: f64) -> Table {
    let mut t = Table::new(&["quantity", "parameter", "value"]);
    t.push(vec!["value".into(), String::new(), num(value)]);
    for (x, v) in &report.profile {
        t.push(vec!["profile".into(), num(*x), num(*v)]);
    }
    t
}

fn ratio_table(r: &RatioReport) -> Table {
    let mut t = Table::new(&["function", "numerator", "denominator", "ratio"]);
    for row in &r.rows {
        t.push(vec![row.function.clone(), num(row.numerator), num(row.denominator), num(row.ratio)]);
    }
    t
}

pub fn run(command: Command, global: &Global) -> Result<u8> {
    if let Some(n) = global.threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let mut spec = QuadratureSpec::default();
    if let Some(nodes) = &global.nodes {
        let (r, a) = parse_nodes(nodes)?;
        spec = spec.with_nodes(r, a);
    }
    if let Some(tol) = global.rel_tol {
        spec.rel_tol = tol;
    }
    spec.validate()?;
    let ctx = Ctx {
        depth: global.depth,
        spec,
        search: SearchParams::default(),
        seed: global.seed,
        file: SpecFile::load(global)?,
    };
    let (report, status) = match command {
        Command::Norm { kind, args, mu, gamma } => (norm(&ctx, kind, &args.f, &args.params, &mu, gamma)?, 0),
        Command::Carleson { kind, mu, p, s, t } => (carleson(&ctx, kind, &mu, p, s, t)?, 0),
        Command::Embed { mu, params: pa, battery } => (embed(&ctx, &mu, &pa, &battery)?, 0),
        Command::Op { which, g, params: pa, battery } => (op(&ctx, which, &g, &pa, &battery)?, 0),
        Command::Verify { suite } => verify(&ctx, &suite)?,
        Command::Lattice { r, cap } => (lattice(r, cap)?, 0),
    };
    emit(&render(report, global.format)?, global.out.as_deref())?;
    Ok(status)
}

fn norm(
    ctx: &Ctx,
    kind: NormKind,
    f: &Option<String>,
    pa: &ParamArgs,
    mu: &Option<String>,
    gamma: f64,
) -> Result<Report> {
    let f = ctx.function(f, "f")?;
    let at_zero = f.eval(DiskPoint::ORIGIN).norm();
    let (name, inputs, value, report) = match kind {
        NormKind::Fps | NormKind::Logf => {
            let params = params(pa)?;
            let (name, r) = if matches!(kind, NormKind::Fps) {
                ("norm fps", fps_seminorm(&f.deriv(), &params, &ctx.search, &ctx.spec)?)
            } else {
                ("norm logf", log_f_seminorm(&f.deriv(), &params, &ctx.search, &ctx.spec)?)
            };
            let value = if matches!(kind, NormKind::Fps) { at_zero + r.value } else { r.value };
            (name, params_json(&params), value, Some(r))
        }
        NormKind::Bloch => {
            let r = bloch_norm(&f.deriv(), pa.alpha)?;
            ("norm bloch", json!({ "alpha": pa.alpha }), at_zero + r.value, Some(r))
        }
        NormKind::Dirichlet => {
            let v = dirichlet_norm(&f, pa.p, gamma, &ctx.spec)?;
            ("norm dirichlet", json!({ "p": pa.p, "gamma": gamma }), v, None)
        }
        NormKind::Tent => {
            let mu = ctx.measure(mu)?;
            let r = tent_norm(&f, &mu, pa.p, pa.s, ctx.depth, &ctx.spec)?;
            let inputs = json!({ "measure": mu.to_string(), "p": pa.p, "s": pa.s, "depth": ctx.depth });
            ("norm tent", inputs, r.value, Some(r))
        }
    };
    let table = match &report {
        Some(r) => constant_table(r, value),
        None => constant_table(&empty_report(value), value),
    };
    Ok(Report {
        json: json!({
            "command": name,
            "function": f.to_string(),
            "inputs": inputs,
            "value": value,
            "report": report,
        }),
        table,
    })
}

fn empty_report(value: f64) -> ConstantReport {
    ConstantReport {
        value,
        maximizer: tentspace::Maximizer::None,
        samples_evaluated: 0,
        converged: true,
        profile: Vec::new(),
        note: None,
    }
}

fn carleson(ctx: &Ctx, kind: CarlesonKind, mu: &Option<String>, p: f64, s: f64, t: f64) -> Result<Report> {
    let mu = ctx.measure(mu)?;
    let measure = mu.to_string();
    let depth = ctx.depth;
    if let CarlesonKind::Vanishing = kind {
        let profile = vanishing_profile(&mu, p, s, depth, &ctx.spec)?;
        let mut table = Table::new(&["depth", "value"]);
        for (k, v) in &profile {
            table.push(vec![k.to_string(), num(*v)]);
        }
        let rows: Vec<Value> = profile.iter().map(|(k, v)| json!({ "depth": k, "value": v })).collect();
        return Ok(Report {
            json: json!({
                "command": "carleson vanishing",
                "inputs": { "measure": measure, "p": p, "s": s, "depth": depth },
                "value": profile.last().map_or(0.0, |x| x.1),
                "profile": rows,
            }),
            table,
        });
    }
    let (name, inputs, r) = match kind {
        CarlesonKind::Box => (
            "carleson box",
            json!({ "measure": measure, "s": s, "depth": depth }),
            carleson_constant(&mu, s, depth, &ctx.spec)?,
        ),
        CarlesonKind::Log => (
            "carleson log",
            json!({ "measure": measure, "p": p, "s": s, "depth": depth }),
            log_carleson_constant(&mu, p, s, depth, &ctx.spec)?,
        ),
        CarlesonKind::Blasco => (
            "carleson blasco",
            json!({ "measure": measure, "p": p, "s": s, "t": t }),
            blasco_constant(&mu, p, s, t, &ctx.search, &ctx.spec)?,
        ),
        CarlesonKind::Vanishing => unreachable!(),
    };
    Ok(Report {
        table: constant_table(&r, r.value),
        json: json!({ "command": name, "inputs": inputs, "value": r.value, "report": r }),
    })
}

fn embed(ctx: &Ctx, mu: &Option<String>, pa: &ParamArgs, battery: &[String]) -> Result<Report> {
    let mu = ctx.measure(mu)?;
    let params = params(pa)?;
    let battery = ctx.battery(battery, params.alpha)?;
    let r = embedding_ratio(&battery, &mu, &params, ctx.depth, &ctx.search, &ctx.spec)?;
    Ok(Report {
        table: ratio_table(&r),
        json: json!({
            "command": "embed",
            "inputs": { "measure": mu.to_string(), "params": params_json(&params), "depth": ctx.depth },
            "value": r.max_ratio,
            "median_ratio": r.median_ratio(),
            "report": r,
        }),
    })
}

fn op(ctx: &Ctx, which: OpKind, g: &Option<String>, pa: &ParamArgs, battery: &[String]) -> Result<Report> {
    let g = ctx.function(g, "g")?;
    let params = params(pa)?;
    let battery = ctx.battery(battery, params.alpha)?;
    let op = match which {
        OpKind::Jg => Operator::Jg,
        OpKind::Ig => Operator::Ig,
        OpKind::Mg => Operator::Mg,
    };
    let r = operator_boundedness_report(&g, &params, op, &battery, ctx.depth, &ctx.search, &ctx.spec)?;
    let mut table = ratio_table(&r.ratios);
    table.push(vec![r.membership_label.clone(), String::new(), String::new(), num(r.membership.value)]);
    table.push(vec![r.induced_label.clone(), String::new(), String::new(), num(r.induced.value)]);
    Ok(Report {
        table,
        json: json!({
            "command": format!("op {op}"),
            "inputs": { "params": params_json(&params), "depth": ctx.depth },
            "value": r.ratios.max_ratio,
            "report": r,
        }),
    })
}

fn verify(ctx: &Ctx, suite: &str) -> Result<(Report, u8)> {
    let ids: Vec<&str> = if suite == "all" {
        SUITE_IDS.to_vec()
    } else {
        vec![suite]
    };
    let opts = VerifyOptions {
        seed: ctx.seed,
        spec: ctx.spec,
        search: ctx.search,
    };
    let start = Instant::now();
    let mut reports: Vec<SuiteReport> = Vec::new();
    for id in ids {
        let r = run_suite(id, &opts)?;
        let verdict = if r.pass() { "PASS" } else { "FAIL" };
        eprintln!("{verdict} {id} ({:.1} s)", r.wall_time);
        reports.push(r);
    }
    eprintln!("total {:.1} s", start.elapsed().as_secs_f64());
    let pass = reports.iter().all(SuiteReport::pass);
    let mut table = Table::new(&["suite_id", "description", "measured", "bracket", "pass", "diagnostics"]);
    for r in &reports {
        for c in &r.cases {
            let bracket = match &c.bracket {
                Bracket::Range { lo, hi } => format!("[{}, {}]", num(*lo), num(*hi)),
                Bracket::Trend { trend } => trend.clone(),
            };
            table.push(vec![
                r.suite_id.clone(),
                c.description.clone(),
                num(c.measured),
                bracket,
                c.pass.to_string(),
                c.diagnostics.clone().unwrap_or_default(),
            ]);
        }
    }
    let report = Report {
        json: json!({ "pass": pass, "seed": ctx.seed, "suites": reports }),
        table,
    };
    Ok((report, if pass { 0 } else { SUITE_FAILURE }))
}

fn lattice(r: f64, cap: f64) -> Result<Report> {
    let points = build_r_lattice(r, cap)?;
    let mut table = Table::new(&["re", "im"]);
    for z in &points {
        table.push(vec![num(z.re), num(z.im)]);
    }
    let coords: Vec<[f64; 2]> = points.iter().map(|z| [z.re, z.im]).collect();
    Ok(Report {
        table,
        json: json!({
            "command": "lattice",
            "inputs": { "r": r, "cap": cap },
            "count": points.len(),
            "points": coords,
        }),
    })
}
