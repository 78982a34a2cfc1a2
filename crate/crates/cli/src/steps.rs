//! Pipeline steps shared by the single commands and `run-all`. Each step
//! writes its artifacts under a name prefix and returns what later steps need.

use nalgebra::{DMatrix, DVector};
use serde_json::{json, Value};

use foilspace::activesubspace::{
    bootstrap, c_matrix, choose_dimension, convergence_study, eigendecompose, fit_quadratic,
    loglog_slope, Convention, ConvergenceOptions, Eigenpairs, QuadraticModel,
};
use foilspace::analysis::{
    contour_grid, fit_link_function, overlay_gnuplot, pareto_front, pareto_gnuplot, pareto_segment,
    shadow_gnuplot, shadow_project, write_contour_csv, write_pareto_csv, write_segment_designs,
    ResponseSurface, CONTOUR_GRID,
};
use foilspace::io::{fmt_f64, write_csv};
use foilspace::qoi::{
    evaluate_batch, export_designs, write_dataset, Parameterization, QoiEvaluator,
};
use foilspace::sampling::{ParameterBox, SampleSet};
use foilspace::seeding::{child_seed, GENERATOR};

use crate::args::TradeoffArgs;
use crate::context::RunContext;
use crate::error::{CliError, CliResult};

fn columns_of(a: &DMatrix<f64>) -> Vec<Vec<f64>> {
    a.column_iter()
        .map(|c| c.iter().copied().collect())
        .collect()
}

pub fn write_samples(
    ctx: &RunContext,
    name: &str,
    box_name: &str,
    samples: &SampleSet,
) -> CliResult<()> {
    let extra = vec![
        format!("box={box_name}"),
        format!("generator={GENERATOR}"),
        format!("sample_seed={}", samples.seed),
        "coordinates=normalized to [-1, 1]".to_string(),
    ];
    write_dataset(&ctx.path(name), &samples.x, None, &ctx.comments(&extra))?;
    ctx.write_json(
        &name.replace(".csv", "_box.json"),
        json!({ "box_name": box_name, "box": samples.parameter_box }),
    )?;
    Ok(())
}

pub fn write_shapes(
    ctx: &RunContext,
    dir: &str,
    x: &DMatrix<f64>,
    parameterization: Parameterization,
    parameter_box: &ParameterBox,
    grid: usize,
) -> CliResult<usize> {
    let path = ctx.path(dir);
    let rows = export_designs(
        x,
        parameterization,
        parameter_box,
        &path,
        grid,
        &ctx.comments(&[]),
    )?;
    Ok(rows.iter().filter(|r| r.feasible).count())
}

/// Evaluates, drops failed rows, and writes `x1..xm,f`.
pub fn evaluate(
    ctx: &RunContext,
    name: &str,
    qoi: &dyn QoiEvaluator,
    x: &DMatrix<f64>,
) -> CliResult<(DMatrix<f64>, DVector<f64>)> {
    if qoi.dim() != x.ncols() {
        return Err(foilspace::Error::DimensionMismatch {
            expected: qoi.dim(),
            found: x.ncols(),
        }
        .into());
    }
    let batch = evaluate_batch(qoi, x);
    let (xs, f) = batch.successful(x);
    if f.is_empty() {
        return Err(CliError {
            kind: "evaluation".into(),
            message: format!("all {} evaluations failed", x.nrows()),
            hint: "check that the box produces valid shapes for this QoI".into(),
        });
    }
    let failed: Vec<String> = batch.failures.iter().map(|(i, _)| i.to_string()).collect();
    if !failed.is_empty() {
        log::warn!(
            "{}: {} of {} evaluations failed and were dropped",
            name,
            failed.len(),
            x.nrows()
        );
    }
    let extra = vec![
        format!("qoi={}", qoi.name()),
        format!("qoi_description={}", qoi.description()),
        format!("evaluated={}", f.len()),
        format!("failed={}", failed.len()),
        format!("failed_rows={}", failed.join(" ")),
    ];
    write_dataset(&ctx.path(name), &xs, Some(&f), &ctx.comments(&extra))?;
    Ok((xs, f))
}

pub fn fit(
    ctx: &RunContext,
    name: &str,
    x: &DMatrix<f64>,
    f: &DVector<f64>,
) -> CliResult<QuadraticModel> {
    let model = fit_quadratic(x, f)?;
    ctx.write_json(
        name,
        json!({
            "model": model.to_record(),
            "undersampled": model.undersampled,
        }),
    )?;
    Ok(model)
}

pub fn pick_dimension(
    eig: &Eigenpairs,
    requested: Option<usize>,
) -> CliResult<(usize, &'static str)> {
    let m = eig.dim();
    match requested {
        Some(n) if n >= 1 && n < m.max(2) => Ok((n, "flag")),
        Some(n) => Err(CliError::usage(
            format!("--dim {n} is outside 1..{}", m.max(2) - 1),
            "the active dimension must be smaller than the number of parameters",
        )),
        None => {
            let values: Vec<f64> = eig.values.iter().copied().collect();
            Ok((choose_dimension(&values, m - 1)?, "largest eigenvalue gap"))
        }
    }
}

pub fn eigs(
    ctx: &RunContext,
    prefix: &str,
    model: &QuadraticModel,
    convention: Convention,
    requested: Option<usize>,
) -> CliResult<(Eigenpairs, usize)> {
    let eig = eigendecompose(&c_matrix(model, convention))?;
    let (n, source) = pick_dimension(&eig, requested)?;
    let values: Vec<f64> = eig.values.iter().copied().collect();
    ctx.write_json(
        &format!("{prefix}eigs.json"),
        json!({
            "convention": convention.name(),
            "eigenvalues": values,
            "eigenvectors": columns_of(&eig.vectors),
            "active_dim": n,
            "active_dim_source": source,
            "model_residual_rms": model.residual_rms,
            "samples": model.samples,
        }),
    )?;
    let rows: Vec<Vec<String>> = values
        .iter()
        .enumerate()
        .map(|(i, v)| vec![(i + 1).to_string(), fmt_f64(*v)])
        .collect();
    let csv = format!("{prefix}eigenvalues.csv");
    write_csv(
        &ctx.path(&csv),
        &ctx.comments(&[format!("convention={}", convention.name())]),
        &["index".into(), "eigenvalue".into()],
        &rows,
    )?;
    ctx.write_text(
        &format!("{prefix}eigenvalues.gp"),
        &format!(
            "set datafile separator ','\nset key off\nset logscale y\nset xlabel 'index'\n\
             set ylabel 'eigenvalue'\nplot '{csv}' skip 1 using 1:2 with linespoints pt 7\n"
        ),
    )?;
    Ok((eig, n))
}

pub fn bootstrap_step(
    ctx: &RunContext,
    prefix: &str,
    x: &DMatrix<f64>,
    f: &DVector<f64>,
    nboot: usize,
    n: usize,
    convention: Convention,
) -> CliResult<Value> {
    let seed = child_seed(ctx.seed, "bootstrap");
    let summary = bootstrap(x, f, nboot, seed, n, convention)?;
    let eig_rows: Vec<Vec<String>> = summary
        .eigenvalue_ranges
        .iter()
        .enumerate()
        .map(|(i, s)| {
            vec![
                (i + 1).to_string(),
                fmt_f64(summary.point_eigenvalues[i]),
                fmt_f64(s.min),
                fmt_f64(s.mean),
                fmt_f64(s.max),
            ]
        })
        .collect();
    let err_rows: Vec<Vec<String>> = summary
        .subspace_error
        .iter()
        .enumerate()
        .map(|(d, s)| {
            vec![
                (d + 1).to_string(),
                fmt_f64(s.min),
                fmt_f64(s.mean),
                fmt_f64(s.max),
            ]
        })
        .collect();
    let comments = ctx.comments(&[
        format!("convention={}", convention.name()),
        format!("n_boot={nboot}"),
        format!("bootstrap_seed={seed}"),
        format!("skipped={}", summary.skipped),
    ]);
    let eig_csv = format!("{prefix}bootstrap_eigenvalues.csv");
    let err_csv = format!("{prefix}bootstrap_subspace.csv");
    write_csv(
        &ctx.path(&eig_csv),
        &comments,
        &["index", "point", "min", "mean", "max"].map(String::from),
        &eig_rows,
    )?;
    write_csv(
        &ctx.path(&err_csv),
        &comments,
        &["dim", "min", "mean", "max"].map(String::from),
        &err_rows,
    )?;
    ctx.write_text(
        &format!("{prefix}bootstrap.gp"),
        &format!(
            "set datafile separator ','\nset key off\nset logscale y\nset multiplot layout 1,2\n\
             set title 'eigenvalues'\nplot '{eig_csv}' skip 1 using 1:2 with linespoints pt 7, \
             '' skip 1 using 1:4:3:5 with yerrorbars\n\
             set title 'subspace error'\nplot '{err_csv}' skip 1 using 1:3:2:4 with yerrorlines\n\
             unset multiplot\n"
        ),
    )?;
    let active = summary.active_error();
    let body = json!({
        "convention": convention.name(),
        "n_boot": nboot,
        "bootstrap_seed": seed,
        "active_dim": n,
        "skipped": summary.skipped,
        "point_eigenvalues": summary.point_eigenvalues,
        "eigenvalue_ranges": summary.eigenvalue_ranges,
        "subspace_error": summary.subspace_error,
        "active_subspace_error": active,
    });
    ctx.write_json(&format!("{prefix}bootstrap.json"), body.clone())?;
    Ok(body)
}

pub fn shadow(
    ctx: &RunContext,
    prefix: &str,
    x: &DMatrix<f64>,
    f: &DVector<f64>,
    w1: &DMatrix<f64>,
    degree: u32,
) -> CliResult<ResponseSurface> {
    let data = shadow_project(x, f, w1)?;
    let csv = format!("{prefix}shadow.csv");
    data.write_csv(&ctx.path(&csv), &ctx.comments(&[]))?;
    ctx.write_text(
        &format!("{prefix}shadow.gp"),
        &shadow_gnuplot(
            &csv,
            data.dim(),
            &format!("{}shadow", prefix.replace('_', " ")),
        ),
    )?;
    let surface = fit_link_function(&data, degree)?;
    ctx.write_json(&format!("{prefix}link.json"), json!({ "surface": surface }))?;
    Ok(surface)
}

pub struct Evaluated<'a> {
    pub x: &'a DMatrix<f64>,
    pub f: &'a DVector<f64>,
}

/// Lift is fit on its own leading direction, drag on its two leading
/// directions; the trade-off segment lives in drag's coordinates.
pub fn pareto(
    ctx: &RunContext,
    lift: Evaluated,
    drag: Evaluated,
    convention: Convention,
    options: &TradeoffArgs,
) -> CliResult<Value> {
    if lift.x.ncols() != drag.x.ncols() {
        return Err(foilspace::Error::DimensionMismatch {
            expected: drag.x.ncols(),
            found: lift.x.ncols(),
        }
        .into());
    }
    if drag.x.ncols() < 3 {
        return Err(CliError::usage(
            "the trade-off needs at least 3 parameters",
            "use a box with m >= 3",
        ));
    }
    let lift_eig = eigendecompose(&c_matrix(&fit_quadratic(lift.x, lift.f)?, convention))?;
    let drag_eig = eigendecompose(&c_matrix(&fit_quadratic(drag.x, drag.f)?, convention))?;
    let lift_w = lift_eig.partition(1)?.w1;
    let partition = drag_eig.partition(2)?;
    let lift_surface = fit_link_function(
        &shadow_project(lift.x, lift.f, &lift_w)?,
        options.lift_degree,
    )?;
    let drag_shadow = shadow_project(drag.x, drag.f, &partition.w1)?;
    let drag_surface = fit_link_function(&drag_shadow, options.drag_degree)?;

    let segment = pareto_segment(
        &partition,
        options.gamma_count,
        options.z_policy.into(),
        child_seed(ctx.seed, "pareto"),
    )?;
    let front = pareto_front(&segment, &lift_surface, &drag_surface, options.strict)?;
    let comments = ctx.comments(&[
        format!("convention={}", convention.name()),
        format!("y1_min={}", fmt_f64(segment.y1_min)),
        format!("y2_min={}", fmt_f64(segment.y2_min)),
    ]);
    write_pareto_csv(&ctx.path("pareto.csv"), &front, &comments)?;
    write_segment_designs(&ctx.path("pareto_designs.csv"), &segment, &comments)?;

    // lift scattered over drag's active coordinates, with drag contours
    let lift_on_drag = shadow_project(lift.x, lift.f, &partition.w1)?;
    lift_on_drag.write_csv(&ctx.path("lift_on_drag_shadow.csv"), &comments)?;
    let bounds = drag_shadow.bounds();
    let grid = contour_grid(&drag_surface, [bounds[0], bounds[1]], CONTOUR_GRID)?;
    write_contour_csv(
        &ctx.path("drag_contour.csv"),
        &grid,
        CONTOUR_GRID,
        &comments,
    )?;
    ctx.write_text(
        "overlay.gp",
        &overlay_gnuplot(
            "lift_on_drag_shadow.csv",
            "drag_contour.csv",
            "lift over drag active coordinates",
        ),
    )?;
    ctx.write_text("pareto.gp", &pareto_gnuplot("pareto.csv"))?;

    let feasible = segment.feasible.iter().filter(|f| **f).count();
    let body = json!({
        "convention": convention.name(),
        "gamma_count": options.gamma_count,
        "z_policy": options.z_policy,
        "strict": options.strict,
        "y1_min": segment.y1_min,
        "y2_min": segment.y2_min,
        "feasible_points": feasible,
        "drag_active_basis": columns_of(&partition.w1),
        "lift_active_basis": columns_of(&lift_w),
        "lift_drag_second_direction_alignment": lift_w.column(0).dot(&partition.w1.column(1)).abs(),
        "lift_surface": lift_surface,
        "drag_surface": drag_surface,
    });
    ctx.write_json("pareto.json", body.clone())?;
    Ok(body)
}

pub fn convergence(
    ctx: &RunContext,
    parameter_box: &ParameterBox,
    qoi: &dyn QoiEvaluator,
    schedule: &[usize],
    options: &ConvergenceOptions,
) -> CliResult<f64> {
    let rows = convergence_study(
        parameter_box,
        qoi,
        schedule,
        child_seed(ctx.seed, "convergence"),
        options,
    )?;
    let slope = loglog_slope(&rows)?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                fmt_f64(r.mean),
                fmt_f64(r.min),
                fmt_f64(r.max),
                r.skipped_replicates.to_string(),
                r.failed_evaluations.to_string(),
            ]
        })
        .collect();
    let comments = ctx.comments(&[
        format!("qoi={}", qoi.name()),
        format!("convention={}", options.convention.name()),
        format!("n_boot={}", options.n_boot),
        format!("active_dim={}", options.active_dim),
        format!("loglog_slope={}", fmt_f64(slope)),
    ]);
    write_csv(
        &ctx.path("convergence.csv"),
        &comments,
        &[
            "n",
            "mean",
            "min",
            "max",
            "skipped_replicates",
            "failed_evaluations",
        ]
        .map(String::from),
        &table,
    )?;
    ctx.write_text(
        "convergence.gp",
        "set datafile separator ','\nset key top right\nset logscale xy\nset xlabel 'N'\n\
         set ylabel 'subspace error'\n\
         plot 'convergence.csv' skip 1 using 1:2:3:4 with yerrorlines title 'bootstrap'\n",
    )?;
    Ok(slope)
}
