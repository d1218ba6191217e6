use serde::{Deserialize, Serialize};

use super::metric_check::{check_metric_axioms, read_points, Violation};
use super::render::{self, exact, num, opt};
use super::{
    Backend, Cli, Command, DiffMethod, FunctionSpec, Mode, OutputFormat, Rendered, Variant,
};
use crate::error::{Error, Result};
use crate::fractal_number::{FractalNumber, FractalOrder, FractalPoint};
use crate::fractal_series::{taylor_remainder, FractalPowerSeries, RemainderBound};
use crate::numerics::{
    holder_fit, lf_integral, lfd_limit_estimate, HolderFit, QuadratureBackend, QuadratureSpec,
    RealFunction, StepSchedule,
};
use crate::solver::{
    fixed_point_solve, newton_solve, ConvergenceReport, IterationSettings, NewtonVariant,
    SolveStatus,
};
use crate::testlib::{self, CatalogEntry};

pub const LITERAL_WARNING: &str = "the literal (dt)^alpha sum is evaluated at the given N only; \
for alpha < 1 it grows like N^(1-alpha) under uniform refinement and has no refinement limit";

const TAYLOR_GRID: usize = 33;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrailRow {
    pub h: f64,
    pub quotient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum DiffDocument {
    Limit {
        function: String,
        x0: f64,
        alpha: f64,
        estimate: f64,
        converged: bool,
        vanishing: bool,
        trail: Vec<TrailRow>,
    },
    Series {
        function: String,
        x0: f64,
        alpha: f64,
        value: f64,
    },
    Holder {
        function: String,
        x0: f64,
        exponent: f64,
        log_coefficient: f64,
        r_squared: f64,
        samples: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrateDocument {
    pub function: String,
    pub backend: QuadratureBackend,
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub partitions: usize,
    pub value: f64,
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaylorRow {
    pub n: usize,
    pub partial_sum: f64,
    pub remainder: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaylorDocument {
    pub function: String,
    pub x: f64,
    pub alpha: f64,
    pub terms: usize,
    pub value: f64,
    pub remainder: f64,
    pub rows: Vec<TaylorRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolderDocument {
    pub function: String,
    pub x0: f64,
    pub exponent: f64,
    pub log_coefficient: f64,
    pub r_squared: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricDocument {
    pub alpha: f64,
    pub dim: usize,
    pub points: usize,
    pub triples_checked: usize,
    pub violations: Vec<Violation>,
}

pub(crate) fn dispatch(cli: &Cli, prec: usize) -> Result<Rendered> {
    let order = FractalOrder::new(cli.alpha)?;
    let fmt = cli.format;
    match &cli.command {
        Command::Diff {
            function,
            x0,
            method,
            schedule,
        } => diff(
            &function.parse()?,
            *x0,
            order,
            *method,
            *schedule,
            fmt,
            prec,
        ),
        Command::Integrate {
            function,
            a,
            b,
            backend,
            partitions,
        } => integrate(
            &function.parse()?,
            *a,
            *b,
            order,
            *backend,
            *partitions,
            fmt,
            prec,
        ),
        Command::Solve {
            function,
            x0,
            mode,
            variant,
            tol,
            max_iter,
            window,
        } => {
            if !(*tol > 0.0) {
                return Err(Error::Configuration(format!(
                    "--tol must be > 0, got {tol}"
                )));
            }
            let settings = IterationSettings::new(order)
                .with_tol(IterationSettings::tol_from_base(*tol, order))
                .with_max_iter(*max_iter)
                .with_window(*window);
            solve(
                &function.parse()?,
                *x0,
                settings,
                *mode,
                *variant,
                fmt,
                prec,
            )
        }
        Command::Taylor {
            function,
            x,
            terms,
            derivative_bound,
        } => taylor(
            &function.parse()?,
            *x,
            order,
            *terms,
            *derivative_bound,
            fmt,
            prec,
        ),
        Command::Holder {
            function,
            x0,
            schedule,
        } => holder(
            &function.parse()?,
            *x0,
            schedule.unwrap_or_else(testlib::holder_schedule),
            fmt,
            prec,
        ),
        Command::CheckMetric { dim, points } => check_metric(order, *dim, points, fmt),
        Command::Catalog => catalog(order, fmt, prec),
    }
}

fn ok(body: String) -> Result<Rendered> {
    Ok(Rendered {
        body,
        warning: None,
        code: 0,
    })
}

fn diff(
    spec: &FunctionSpec,
    x0: f64,
    order: FractalOrder,
    method: DiffMethod,
    schedule: Option<StepSchedule>,
    fmt: OutputFormat,
    prec: usize,
) -> Result<Rendered> {
    let name = spec.to_string();
    let alpha = order.alpha();
    let doc = match method {
        DiffMethod::Limit => {
            let f = spec.resolve(order)?.function;
            let est = lfd_limit_estimate(&f, x0, order, &schedule.unwrap_or_default())?;
            DiffDocument::Limit {
                function: name,
                x0,
                alpha,
                estimate: est.estimate,
                converged: est.converged,
                vanishing: est.vanishing,
                trail: est
                    .steps
                    .iter()
                    .zip(&est.trail)
                    .map(|(&h, &quotient)| TrailRow { h, quotient })
                    .collect(),
            }
        }
        DiffMethod::Series => {
            let s = spec.series(order, None)?;
            DiffDocument::Series {
                function: name,
                x0,
                alpha,
                value: s.lfd().eval(x0)?,
            }
        }
        DiffMethod::Holder => {
            let f = spec.resolve(order)?.function;
            let fit = holder_fit(&f, x0, &schedule.unwrap_or_else(testlib::holder_schedule))?;
            DiffDocument::Holder {
                function: name,
                x0,
                exponent: fit.exponent,
                log_coefficient: fit.log_coefficient,
                r_squared: fit.r_squared,
                samples: fit.samples,
            }
        }
    };
    let body = match fmt {
        OutputFormat::Json => render::json(&doc),
        OutputFormat::Table => match &doc {
            DiffDocument::Limit {
                function,
                x0,
                alpha,
                estimate,
                converged,
                vanishing,
                trail,
            } => {
                let mut s = render::summary(&[
                    ("function", function.clone()),
                    ("x0", num(*x0, prec)),
                    ("alpha", alpha.to_string()),
                    ("estimate", num(*estimate, prec)),
                    ("converged", converged.to_string()),
                    ("vanishing", vanishing.to_string()),
                ]);
                s.push('\n');
                let rows: Vec<_> = trail
                    .iter()
                    .map(|r| vec![num(r.h, prec), num(r.quotient, prec)])
                    .collect();
                s.push_str(&render::table(&["h", "quotient"], &rows));
                s
            }
            DiffDocument::Series {
                function,
                x0,
                alpha,
                value,
            } => render::summary(&[
                ("function", function.clone()),
                ("x0", num(*x0, prec)),
                ("alpha", alpha.to_string()),
                ("value", num(*value, prec)),
            ]),
            DiffDocument::Holder {
                function,
                x0,
                exponent,
                log_coefficient,
                r_squared,
                samples,
            } => render::summary(&[
                ("function", function.clone()),
                ("x0", num(*x0, prec)),
                ("exponent", num(*exponent, prec)),
                ("log_coefficient", num(*log_coefficient, prec)),
                ("r_squared", num(*r_squared, prec)),
                ("samples", samples.to_string()),
            ]),
        },
        OutputFormat::Csv => match &doc {
            DiffDocument::Limit { trail, .. } => render::csv(
                &["h", "quotient"],
                &trail
                    .iter()
                    .map(|r| vec![exact(Some(r.h)), exact(Some(r.quotient))])
                    .collect::<Vec<_>>(),
            ),
            DiffDocument::Series { x0, value, .. } => render::csv(
                &["x0", "value"],
                &[vec![exact(Some(*x0)), exact(Some(*value))]],
            ),
            DiffDocument::Holder {
                exponent,
                log_coefficient,
                r_squared,
                samples,
                ..
            } => render::csv(
                &["exponent", "log_coefficient", "r_squared", "samples"],
                &[vec![
                    exact(Some(*exponent)),
                    exact(Some(*log_coefficient)),
                    exact(Some(*r_squared)),
                    samples.to_string(),
                ]],
            ),
        },
    };
    ok(body)
}

#[allow(clippy::too_many_arguments)]
fn integrate(
    spec: &FunctionSpec,
    a: f64,
    b: f64,
    order: FractalOrder,
    backend: Backend,
    partitions: usize,
    fmt: OutputFormat,
    prec: usize,
) -> Result<Rendered> {
    let backend = match backend {
        Backend::Literal => QuadratureBackend::LiteralEq3,
        Backend::Measure => QuadratureBackend::Measure,
        Backend::Series => QuadratureBackend::Series,
    };
    let f = match spec {
        // a constant expands around any point; anchor it at the lower limit
        FunctionSpec::Const(v) => {
            let v = *v;
            RealFunction::new(move |_| v).with_series(FractalPowerSeries::new(
                order,
                a.min(b),
                vec![v],
            )?)
        }
        _ => spec.resolve(order)?.function,
    };
    let qs = QuadratureSpec::new(backend, partitions)?;
    let value = lf_integral(&f, a, b, order, &qs)?;
    let warning = (backend == QuadratureBackend::LiteralEq3).then(|| LITERAL_WARNING.to_string());
    let doc = IntegrateDocument {
        function: spec.to_string(),
        backend,
        a,
        b,
        alpha: order.alpha(),
        partitions,
        value,
        warning: warning.clone(),
    };
    let body = match fmt {
        OutputFormat::Json => render::json(&doc),
        OutputFormat::Table => render::summary(&[
            ("function", doc.function.clone()),
            (
                "backend",
                serde_json::to_value(backend)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default(),
            ),
            ("interval", format!("[{}, {}]", num(a, prec), num(b, prec))),
            ("alpha", order.alpha().to_string()),
            ("partitions", partitions.to_string()),
            ("value", num(value, prec)),
        ]),
        OutputFormat::Csv => render::csv(
            &["a", "b", "value"],
            &[vec![exact(Some(a)), exact(Some(b)), exact(Some(value))]],
        ),
    };
    Ok(Rendered {
        body,
        warning,
        code: 0,
    })
}

fn solve(
    spec: &FunctionSpec,
    x0: f64,
    settings: IterationSettings,
    mode: Mode,
    variant: Variant,
    fmt: OutputFormat,
    prec: usize,
) -> Result<Rendered> {
    let f = spec.resolve(settings.order)?.function;
    let report = match mode {
        Mode::Fixed => fixed_point_solve(&f, x0, &settings)?,
        Mode::Newton => {
            let variant = match variant {
                Variant::Base => NewtonVariant::BaseCoordinate,
                Variant::Fractal => NewtonVariant::FractalCoordinate,
            };
            newton_solve(&f, x0, &settings, variant)?
        }
    };
    let code = if report.status == SolveStatus::Converged {
        0
    } else {
        1
    };
    let body = match fmt {
        OutputFormat::Json => render::json(&report.to_document()),
        OutputFormat::Table => solve_table(&report, prec),
        OutputFormat::Csv => render::csv(&["k", "x", "step", "ratio"], &trace_rows(&report, exact)),
    };
    Ok(Rendered {
        body,
        warning: None,
        code,
    })
}

fn trace_rows(
    report: &ConvergenceReport,
    cell: impl Fn(Option<f64>) -> String,
) -> Vec<Vec<String>> {
    let t = &report.trace;
    t.iterates
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let step = k.checked_sub(1).map(|i| t.fractal_steps[i]);
            let ratio = k
                .checked_sub(2)
                .and_then(|i| t.ratio_sequence.get(i).copied());
            vec![k.to_string(), cell(Some(x)), cell(step), cell(ratio)]
        })
        .collect()
}

fn solve_table(report: &ConvergenceReport, prec: usize) -> String {
    let mut s = render::summary(&[
        ("status", report.status.as_str().to_string()),
        ("root", num(report.root, prec)),
        ("residual", num(report.residual, prec)),
        ("iterations", report.iterations().to_string()),
        ("L_hat", num(report.contraction.l_hat, prec)),
        ("a_posteriori", num(report.a_posteriori, prec)),
    ]);
    s.push('\n');
    s.push_str(&render::table(
        &["k", "x_k", "step", "ratio"],
        &trace_rows(report, |v| opt(v, prec)),
    ));
    s
}

fn taylor(
    spec: &FunctionSpec,
    x: f64,
    order: FractalOrder,
    terms: Option<usize>,
    derivative_bound: Option<f64>,
    fmt: OutputFormat,
    prec: usize,
) -> Result<Rendered> {
    if let Some(m) = derivative_bound {
        if !(m >= 0.0 && m.is_finite()) {
            return Err(Error::Configuration(format!(
                "--derivative-bound must be >= 0, got {m}"
            )));
        }
    }
    let s = spec.series(order, terms)?;
    let k_max = s.truncation();
    let radius = (x - s.center()).abs();
    let sups = derivative_sups(&s, x)?;
    let mut rows = Vec::with_capacity(k_max + 1);
    for n in 0..=k_max {
        let partial_sum = s.truncated(n).eval(x)?;
        let m = derivative_bound.unwrap_or_else(|| {
            sups[(n + 1).min(k_max)..]
                .iter()
                .copied()
                .fold(0.0, f64::max)
        });
        let remainder = taylor_remainder(&RemainderBound {
            derivative_bound: m,
            order_index: n + 1,
            radius,
            order,
        });
        rows.push(TaylorRow {
            n,
            partial_sum,
            remainder,
        });
    }
    let last = rows.last().expect("at least one term");
    let doc = TaylorDocument {
        function: spec.to_string(),
        x,
        alpha: order.alpha(),
        terms: k_max,
        value: last.partial_sum,
        remainder: last.remainder,
        rows,
    };
    let body = match fmt {
        OutputFormat::Json => render::json(&doc),
        OutputFormat::Table => {
            let mut out = render::summary(&[
                ("function", doc.function.clone()),
                ("x", num(x, prec)),
                ("alpha", order.alpha().to_string()),
                ("terms", k_max.to_string()),
                ("value", num(doc.value, prec)),
                ("remainder", num(doc.remainder, prec)),
            ]);
            out.push('\n');
            let rows: Vec<_> = doc
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        num(r.partial_sum, prec),
                        num(r.remainder, prec),
                    ]
                })
                .collect();
            out.push_str(&render::table(&["n", "partial_sum", "remainder"], &rows));
            out
        }
        OutputFormat::Csv => render::csv(
            &["n", "partial_sum", "remainder"],
            &doc.rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        exact(Some(r.partial_sum)),
                        exact(Some(r.remainder)),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    };
    ok(body)
}

/// `sup |D^{jα} s|` over a uniform grid on the segment from the center to
/// `x`, for every `j` the series knows.
fn derivative_sups(s: &FractalPowerSeries, x: f64) -> Result<Vec<f64>> {
    let c = s.center();
    let mut d = s.clone();
    let mut out = Vec::with_capacity(s.truncation() + 1);
    for _ in 0..=s.truncation() {
        let mut sup = 0.0f64;
        for i in 0..TAYLOR_GRID {
            let t = c + (x - c) * i as f64 / (TAYLOR_GRID - 1) as f64;
            sup = sup.max(d.eval(t)?.abs());
        }
        out.push(sup);
        d = d.lfd();
    }
    Ok(out)
}

fn holder(
    spec: &FunctionSpec,
    x0: f64,
    sched: StepSchedule,
    fmt: OutputFormat,
    prec: usize,
) -> Result<Rendered> {
    // the fitted exponent does not depend on the order; resolve at α = 1
    let f = spec.resolve(FractalOrder::one())?.function;
    let fit: HolderFit = holder_fit(&f, x0, &sched)?;
    let doc = HolderDocument {
        function: spec.to_string(),
        x0,
        exponent: fit.exponent,
        log_coefficient: fit.log_coefficient,
        r_squared: fit.r_squared,
        samples: fit.samples,
    };
    let body = match fmt {
        OutputFormat::Json => render::json(&doc),
        OutputFormat::Table => render::summary(&[
            ("function", doc.function.clone()),
            ("x0", num(x0, prec)),
            ("exponent", num(fit.exponent, prec)),
            ("log_coefficient", num(fit.log_coefficient, prec)),
            ("r_squared", num(fit.r_squared, prec)),
            ("samples", fit.samples.to_string()),
        ]),
        OutputFormat::Csv => render::csv(
            &["exponent", "log_coefficient", "r_squared", "samples"],
            &[vec![
                exact(Some(fit.exponent)),
                exact(Some(fit.log_coefficient)),
                exact(Some(fit.r_squared)),
                fit.samples.to_string(),
            ]],
        ),
    };
    ok(body)
}

fn check_metric(
    order: FractalOrder,
    dim: usize,
    path: &std::path::Path,
    fmt: OutputFormat,
) -> Result<Rendered> {
    if dim == 0 {
        return Err(Error::Configuration("--dim must be >= 1".into()));
    }
    let file = std::fs::File::open(path)
        .map_err(|e| Error::Configuration(format!("cannot read {}: {e}", path.display())))?;
    let raw = read_points(file, dim)?;
    let points = raw.len();
    let violations = if dim == 1 {
        let pts: Vec<FractalNumber> = raw
            .iter()
            .map(|p| FractalNumber::new(p[0], order))
            .collect();
        check_metric_axioms(&pts, |a, b| a.distance(b))?
    } else {
        let pts = raw
            .into_iter()
            .map(|p| FractalPoint::new(p, order))
            .collect::<Result<Vec<_>>>()?;
        check_metric_axioms(&pts, |a, b| a.distance(b))?
    };
    let doc = MetricDocument {
        alpha: order.alpha(),
        dim,
        points,
        triples_checked: points.pow(3),
        violations,
    };
    let code = if doc.violations.is_empty() { 0 } else { 1 };
    let body = match fmt {
        OutputFormat::Json => render::json(&doc),
        OutputFormat::Table => {
            let mut s = render::summary(&[
                ("alpha", doc.alpha.to_string()),
                ("dim", dim.to_string()),
                ("points", points.to_string()),
                ("triples_checked", doc.triples_checked.to_string()),
                ("violations", doc.violations.len().to_string()),
            ]);
            if !doc.violations.is_empty() {
                s.push('\n');
                let rows: Vec<_> = doc
                    .violations
                    .iter()
                    .map(|v| {
                        vec![
                            v.axiom.to_string(),
                            format!("{:?}", v.points),
                            v.detail.clone(),
                        ]
                    })
                    .collect();
                s.push_str(&render::table(&["axiom", "points", "detail"], &rows));
            }
            s
        }
        OutputFormat::Csv => render::csv(
            &["axiom", "points", "detail"],
            &doc.violations
                .iter()
                .map(|v| {
                    let pts: Vec<String> = v.points.iter().map(|p| p.to_string()).collect();
                    vec![v.axiom.to_string(), pts.join(" "), v.detail.clone()]
                })
                .collect::<Vec<_>>(),
        ),
    };
    Ok(Rendered {
        body,
        warning: None,
        code,
    })
}

fn catalog(order: FractalOrder, fmt: OutputFormat, prec: usize) -> Result<Rendered> {
    let entries: Vec<CatalogEntry> = testlib::catalog(order)?
        .iter()
        .map(CatalogEntry::from)
        .collect();
    let body = match fmt {
        OutputFormat::Json => render::json(&entries),
        OutputFormat::Table | OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = entries
                .iter()
                .map(|e| {
                    let cell = |v: Option<f64>| {
                        if fmt == OutputFormat::Csv {
                            exact(v)
                        } else {
                            opt(v, prec)
                        }
                    };
                    vec![
                        e.name.clone(),
                        cell(e.known_root),
                        cell(e.known_fixed_point),
                        cell(e.known_holder_exponent),
                        e.series.is_some().to_string(),
                    ]
                })
                .collect();
            let headers = ["name", "root", "fixed_point", "holder_exponent", "series"];
            if fmt == OutputFormat::Csv {
                render::csv(&headers, &rows)
            } else {
                render::table(&headers, &rows)
            }
        }
    };
    ok(body)
}
