use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde_json::{json, Value};

use foilspace::activesubspace::{
    c_matrix, eigendecompose, fit_quadratic, Convention, ConvergenceOptions,
};
use foilspace::qoi::{
    load_dataset, panel_surrogate, random_quadratic, ridge, DatasetQoi, Noisy, Parameterization,
    QoiEvaluator,
};
use foilspace::sampling::{builtin_box, sample, ParameterBox};
use foilspace::seeding::child_seed;

use crate::args::*;
use crate::context::{display, RunContext};
use crate::error::{CliError, CliResult};
use crate::steps::{self, Evaluated};

pub fn resolve_box(spec: &str) -> CliResult<ParameterBox> {
    if let Some(b) = builtin_box(spec) {
        return Ok(b);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(CliError::usage(
            format!("unknown box {spec:?}"),
            "use parsec-table2, cst-table3, unit:M, or a path to a JSON box file",
        ));
    }
    ParameterBox::load(path).map_err(at_path(path))
}

fn parameterization(args: &BoxArgs, parameter_box: &ParameterBox) -> Option<Parameterization> {
    if let Some(p) = args.parameterization {
        return Some(p.into());
    }
    match args.box_spec.as_str() {
        "parsec-table2" => Some(Parameterization::Parsec),
        "cst-table3" => Some(Parameterization::Cst),
        _ if parameter_box.dim() == 11 => Some(Parameterization::Parsec),
        _ if parameter_box.dim().is_multiple_of(2) => Some(Parameterization::Cst),
        _ => None,
    }
}

fn require_parameterization(
    args: &BoxArgs,
    parameter_box: &ParameterBox,
) -> CliResult<Parameterization> {
    parameterization(args, parameter_box).ok_or_else(|| {
        CliError::usage(
            "cannot infer the shape parameterization from this box",
            "pass --parameterization parsec|cst",
        )
    })
}

/// Builds the evaluator named by `spec` (`--qoi` or one half of `panel`).
fn build_qoi(
    spec: &str,
    args: &QoiArgs,
    boxed: &BoxArgs,
    parameter_box: &ParameterBox,
    seed: u64,
) -> CliResult<Box<dyn QoiEvaluator>> {
    let m = parameter_box.dim();
    let base: Box<dyn QoiEvaluator> = match spec {
        "quadratic" => Box::new(random_quadratic(m, child_seed(seed, "qoi/quadratic"))?),
        "ridge" => {
            let w = match &args.ridge_weights {
                Some(w) if w.len() == m => w.clone(),
                Some(w) => {
                    return Err(CliError::usage(
                        format!(
                            "--ridge-weights has {} entries but the box has {m}",
                            w.len()
                        ),
                        "give one weight per parameter",
                    ))
                }
                None => (1..=m).map(|i| 1.0 / i as f64).collect(),
            };
            Box::new(ridge(&w, args.ridge_profile.into())?)
        }
        "panel-lift" | "panel-drag" => {
            let p = require_parameterization(boxed, parameter_box)?;
            let (lift, drag) = panel_surrogate(p, parameter_box)?;
            if spec == "panel-lift" {
                Box::new(lift)
            } else {
                Box::new(drag)
            }
        }
        other => match other.strip_prefix("dataset:") {
            Some(path) => {
                let q = DatasetQoi::load(Path::new(path), args.tolerance)
                    .map_err(at_path(Path::new(path)))?;
                if q.dim() != m {
                    return Err(foilspace::Error::DimensionMismatch {
                        expected: m,
                        found: q.dim(),
                    }
                    .into());
                }
                Box::new(q)
            }
            None => {
                return Err(CliError::usage(
                    format!("unknown QoI {other:?}"),
                    "use quadratic, ridge, panel-lift, panel-drag or dataset:PATH",
                ))
            }
        },
    };
    if args.noise > 0.0 {
        Ok(Box::new(Noisy::new(
            base,
            args.noise,
            child_seed(seed, "qoi/noise"),
        )?))
    } else {
        Ok(base)
    }
}

/// Prefixes I/O failures with the file they concern.
fn at_path(path: &Path) -> impl FnOnce(foilspace::Error) -> CliError + '_ {
    move |err| {
        let mut err = CliError::from(err);
        if err.kind == "io" {
            err.message = format!("{}: {}", display(path), err.message);
        }
        err
    }
}

fn load_x(path: &Path) -> CliResult<DMatrix<f64>> {
    Ok(load_dataset(path).map_err(at_path(path))?.x)
}

fn load_xf(path: &Path) -> CliResult<(DMatrix<f64>, DVector<f64>)> {
    let ds = load_dataset(path).map_err(at_path(path))?;
    match ds.f {
        Some(f) => Ok((ds.x, f)),
        None => Err(CliError::usage(
            format!("{} has no f column", display(path)),
            "run `foilspace evaluate` first to produce x1..xm,f",
        )),
    }
}

fn sample_seed(ctx: &RunContext) -> u64 {
    child_seed(ctx.seed, "sample")
}

pub fn run(ctx: &RunContext, command: &Command) -> CliResult<Value> {
    match command {
        Command::Sample(a) => {
            let b = resolve_box(&a.boxed.box_spec)?;
            let s = sample(&b, a.n, sample_seed(ctx))?;
            steps::write_samples(ctx, "samples.csv", &a.boxed.box_spec, &s)?;
            Ok(json!({ "samples": s.len(), "dim": b.dim() }))
        }
        Command::Shapes(a) => {
            let b = resolve_box(&a.boxed.box_spec)?;
            let p = require_parameterization(&a.boxed, &b)?;
            let x = load_x(&a.input)?;
            let feasible = steps::write_shapes(ctx, "shapes", &x, p, &b, a.grid)?;
            Ok(json!({ "designs": x.nrows(), "feasible": feasible }))
        }
        Command::Evaluate(a) => {
            let b = resolve_box(&a.boxed.box_spec)?;
            let q = build_qoi(&a.qoi.qoi, &a.qoi, &a.boxed, &b, ctx.seed)?;
            let x = load_x(&a.input)?;
            let (_, f) = steps::evaluate(ctx, "evaluated.csv", q.as_ref(), &x)?;
            Ok(json!({ "evaluated": f.len(), "failed": x.nrows() - f.len() }))
        }
        Command::Fit(a) => {
            let (x, f) = load_xf(&a.input)?;
            let model = steps::fit(ctx, "model.json", &x, &f)?;
            Ok(json!({ "residual_rms": model.residual_rms, "undersampled": model.undersampled }))
        }
        Command::Eigs(a) => {
            let (x, f) = load_xf(&a.input)?;
            let model = fit_quadratic(&x, &f)?;
            let (eig, n) = steps::eigs(
                ctx,
                "",
                &model,
                a.estimator.convention.into(),
                a.estimator.dim,
            )?;
            Ok(json!({ "active_dim": n, "eigenvalues": eig.values.iter().collect::<Vec<_>>() }))
        }
        Command::Bootstrap(a) => {
            let (x, f) = load_xf(&a.input)?;
            let convention: Convention = a.estimator.convention.into();
            let eig = eigendecompose(&c_matrix(&fit_quadratic(&x, &f)?, convention))?;
            let (n, _) = steps::pick_dimension(&eig, a.estimator.dim)?;
            let body = steps::bootstrap_step(ctx, "", &x, &f, a.nboot, n, convention)?;
            Ok(json!({ "active_subspace_error": body["active_subspace_error"] }))
        }
        Command::Shadow(a) => {
            let (x, f) = load_xf(&a.input)?;
            let (bx, bf) = match &a.basis_from {
                Some(p) => load_xf(p)?,
                None => (x.clone(), f.clone()),
            };
            if !(1..=2).contains(&a.dim) || a.dim >= x.ncols() {
                return Err(CliError::usage(
                    format!("--dim {} is not a plottable shadow dimension", a.dim),
                    "use --dim 1 or --dim 2 (and fewer than the number of parameters)",
                ));
            }
            let eig = eigendecompose(&c_matrix(&fit_quadratic(&bx, &bf)?, a.convention.into()))?;
            let w1 = eig.partition(a.dim)?.w1;
            let surface = steps::shadow(ctx, "", &x, &f, &w1, a.degree)?;
            Ok(json!({ "r_squared": surface.r_squared, "residual_rms": surface.residual_rms }))
        }
        Command::Pareto(a) => {
            let (xl, fl) = load_xf(&a.lift)?;
            let (xd, fd) = load_xf(&a.drag)?;
            let body = steps::pareto(
                ctx,
                Evaluated { x: &xl, f: &fl },
                Evaluated { x: &xd, f: &fd },
                a.convention.into(),
                &a.tradeoff,
            )?;
            Ok(
                json!({ "y1_min": body["y1_min"], "y2_min": body["y2_min"], "feasible_points": body["feasible_points"] }),
            )
        }
        Command::Convergence(a) => {
            let b = resolve_box(&a.boxed.box_spec)?;
            let q = build_qoi(&a.qoi.qoi, &a.qoi, &a.boxed, &b, ctx.seed)?;
            let options = ConvergenceOptions {
                n_boot: a.nboot,
                active_dim: a.dim,
                convention: a.convention.into(),
                skip_failed_evaluations: !a.fail_fast,
            };
            let slope = steps::convergence(ctx, &b, q.as_ref(), &a.schedule, &options)?;
            Ok(json!({ "loglog_slope": slope }))
        }
        Command::Validate(a) => validate(ctx, a),
        Command::RunAll(a) => run_all(ctx, a),
    }
}

fn validate(ctx: &RunContext, a: &ValidateArgs) -> CliResult<Value> {
    let b = resolve_box(&a.boxed.box_spec)?;
    let p = require_parameterization(&a.boxed, &b)?;
    let physical = match (&a.params, a.normalized) {
        (Some(v), true) => b.denormalize(v)?,
        (Some(v), false) => v.clone(),
        (None, _) => b.center(),
    };
    let (pair, report) = p.validate(&physical)?;
    let body = json!({
        "parameterization": p.name(),
        "params": physical,
        "feasible": report.feasible,
        "report": report,
        "upper_coefficients": pair.upper.coefficients().values,
        "lower_coefficients": pair.lower.coefficients().values,
    });
    ctx.write_json("validity.json", body.clone())?;
    Ok(body)
}

struct Study {
    eig_dim: usize,
    summary: Value,
}

/// fit, eigs, bootstrap and shadow for one evaluated output.
fn study(
    ctx: &RunContext,
    prefix: &str,
    x: &DMatrix<f64>,
    f: &DVector<f64>,
    a: &RunAllArgs,
    degree: u32,
) -> CliResult<Study> {
    let convention: Convention = a.estimator.convention.into();
    let model = steps::fit(ctx, &format!("{prefix}model.json"), x, f)?;
    let (eig, n) = steps::eigs(ctx, prefix, &model, convention, a.estimator.dim)?;
    let boot = steps::bootstrap_step(ctx, prefix, x, f, a.nboot, n, convention)?;
    let shadow_dim = n.min(2);
    let surface = steps::shadow(ctx, prefix, x, f, &eig.partition(shadow_dim)?.w1, degree)?;
    Ok(Study {
        eig_dim: n,
        summary: json!({
            "active_dim": n,
            "eigenvalues": eig.values.iter().collect::<Vec<_>>(),
            "active_subspace_error": boot["active_subspace_error"],
            "shadow_dim": shadow_dim,
            "link_r_squared": surface.r_squared,
        }),
    })
}

fn run_all(ctx: &RunContext, a: &RunAllArgs) -> CliResult<Value> {
    let b = resolve_box(&a.boxed.box_spec)?;
    let samples = sample(&b, a.n, sample_seed(ctx))?;
    steps::write_samples(ctx, "samples.csv", &a.boxed.box_spec, &samples)?;
    let mut summary = serde_json::Map::new();
    if a.shapes {
        let p = require_parameterization(&a.boxed, &b)?;
        let feasible = steps::write_shapes(ctx, "shapes", &samples.x, p, &b, 201)?;
        summary.insert("feasible_designs".into(), json!(feasible));
    }

    let outputs: Vec<&str> = if a.qoi.qoi == "panel" {
        vec!["panel-lift", "panel-drag"]
    } else {
        vec![a.qoi.qoi.as_str()]
    };
    let mut evaluated = Vec::new();
    for spec in &outputs {
        let prefix = match *spec {
            "panel-lift" => "lift_",
            "panel-drag" => "drag_",
            _ => "",
        };
        let q = build_qoi(spec, &a.qoi, &a.boxed, &b, ctx.seed)?;
        let (x, f) = steps::evaluate(
            ctx,
            &format!("{prefix}evaluated.csv"),
            q.as_ref(),
            &samples.x,
        )?;
        let degree = if prefix == "lift_" {
            a.tradeoff.lift_degree
        } else {
            a.tradeoff.drag_degree
        };
        let s = study(ctx, prefix, &x, &f, a, degree)?;
        log::info!("{spec}: active dimension {}", s.eig_dim);
        summary.insert(spec.to_string(), s.summary);
        evaluated.push((x, f, q));
    }

    if let [(xl, fl, _), (xd, fd, _)] = evaluated.as_slice() {
        let body = steps::pareto(
            ctx,
            Evaluated { x: xl, f: fl },
            Evaluated { x: xd, f: fd },
            a.estimator.convention.into(),
            &a.tradeoff,
        )?;
        summary.insert(
            "pareto".into(),
            json!({ "y1_min": body["y1_min"], "y2_min": body["y2_min"], "feasible_points": body["feasible_points"] }),
        );
    }

    if let Some(schedule) = &a.schedule {
        let (_, _, q) = evaluated.last().expect("at least one output");
        let options = ConvergenceOptions {
            n_boot: a.nboot,
            active_dim: a.estimator.dim.unwrap_or(1),
            convention: a.estimator.convention.into(),
            skip_failed_evaluations: true,
        };
        let slope = steps::convergence(ctx, &b, q.as_ref(), schedule, &options)?;
        summary.insert("convergence_loglog_slope".into(), json!(slope));
    }

    let mut artifacts = ctx.written();
    artifacts.push("run.json".into());
    artifacts.sort();
    summary.insert("artifacts".into(), json!(artifacts));
    let body = Value::Object(summary);
    ctx.write_json("run.json", body.clone())?;
    Ok(body)
}
