//! CSV and JSON rendering of scan grids, ensembles, tables and reports.
//!
//! CSV numbers are printed with 17 significant digits so downstream
//! comparisons are not quantized; JSON uses serde_json's shortest
//! round-trip rendering, which parses back to the identical f64.

use serde_json::{json, Value};

use crate::bellman::{BellmanReport, CompareRow, Verdict};
use crate::conditions::ConditionGrid;
use crate::sde::{CostEstimate, TrajectoryEnsemble};

/// Full-precision decimal rendering (17 significant digits).
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{x:.16e}")
    }
}

/// JSON value for an f64; non-finite values are encoded as strings
/// since JSON has no literal for them.
pub fn json_f64(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::String(fmt_f64(x))
    }
}

/// Fixed-header CSV of a condition scan. Singular cells carry `nan`
/// margins and false flags.
pub fn condition_grid_csv(grid: &ConditionGrid) -> String {
    let mut out = String::from("alpha,L,local_opt_bracket,convexity_margin,local_opt_ok,convex_ok\n");
    for (i, &alpha) in grid.alpha_axis.iter().enumerate() {
        for (j, &l) in grid.l_axis.iter().enumerate() {
            match grid.cell(i, j) {
                Some(m) => out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt_f64(alpha),
                    fmt_f64(l),
                    fmt_f64(m.local_opt_bracket),
                    fmt_f64(m.convexity_margin),
                    m.local_opt_ok(),
                    m.convex_ok()
                )),
                None => out.push_str(&format!(
                    "{},{},nan,nan,false,false\n",
                    fmt_f64(alpha),
                    fmt_f64(l)
                )),
            }
        }
    }
    out
}

pub fn condition_grid_json(grid: &ConditionGrid) -> Value {
    let cells: Vec<Value> = grid
        .alpha_axis
        .iter()
        .enumerate()
        .flat_map(|(i, &alpha)| {
            grid.l_axis.iter().enumerate().map(move |(j, &l)| (i, alpha, j, l))
        })
        .map(|(i, alpha, j, l)| match grid.cell(i, j) {
            Some(m) => json!({
                "alpha": alpha,
                "L": l,
                "local_opt_bracket": json_f64(m.local_opt_bracket),
                "convexity_margin": json_f64(m.convexity_margin),
                "local_opt_ok": m.local_opt_ok(),
                "convex_ok": m.convex_ok(),
            }),
            None => json!({ "alpha": alpha, "L": l, "singular": true }),
        })
        .collect();
    let summaries: Vec<Value> = grid
        .summaries()
        .iter()
        .map(|s| {
            json!({
                "alpha": s.alpha,
                "local_opt_all_l": s.local_opt_all_l,
                "convex_all_l": s.convex_all_l,
                "both_all_l": s.both_all_l,
                "singular_cells": s.singular_cells,
            })
        })
        .collect();
    json!({
        "alpha_axis": grid.alpha_axis,
        "l_axis": grid.l_axis,
        "cells": cells,
        "summaries": summaries,
    })
}

/// Large trajectory CSV (path_id, step, t, L); gated behind a CLI flag.
pub fn ensemble_paths_csv(ensemble: &TrajectoryEnsemble) -> Option<String> {
    let paths = ensemble.paths.as_ref()?;
    let times = ensemble.times();
    let mut out = String::from("path_id,step,t,L\n");
    for (id, path) in paths.iter().enumerate() {
        for (step, (&t, &l)) in times.iter().zip(path.iter()).enumerate() {
            out.push_str(&format!("{id},{step},{},{}\n", fmt_f64(t), fmt_f64(l)));
        }
    }
    Some(out)
}

/// Always-on ensemble summary with terminal-cost statistics.
pub fn ensemble_summary_json(
    ensemble: &TrajectoryEnsemble,
    costs: &[(f64, CostEstimate)],
) -> Value {
    json!({
        "protocol": ensemble.protocol,
        "scheme": ensemble.scheme.label(),
        "L0": ensemble.l0,
        "t0": ensemble.t0,
        "t_final": ensemble.t_final,
        "dt": ensemble.dt,
        "n_steps": ensemble.n_steps,
        "paths": ensemble.terminal.len(),
        "seed": ensemble.seed,
        "terminal_costs": costs
            .iter()
            .map(|(alpha, c)| {
                json!({
                    "alpha": json_f64(*alpha),
                    "mean": json_f64(c.mean),
                    "std_error": json_f64(c.std_error),
                })
            })
            .collect::<Vec<_>>(),
    })
}

/// CSV table of WR expected entropies.
pub fn wr_table_csv(rows: &[(f64, f64, f64, f64)]) -> String {
    let mut out = String::from("alpha,L0,tau,expected_entropy\n");
    for &(alpha, l0, tau, v) in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(alpha),
            fmt_f64(l0),
            fmt_f64(tau),
            fmt_f64(v)
        ));
    }
    out
}

pub fn verdict_label(v: Verdict) -> &'static str {
    match v {
        Verdict::Satisfied => "satisfied",
        Verdict::Violated => "violated",
    }
}

pub fn bellman_report_json(report: &BellmanReport) -> Value {
    json!({
        "source": report.source.label(),
        "alpha": json_f64(report.alpha),
        "verdict": verdict_label(report.verdict),
        "noise_floor": json_f64(report.noise_floor),
        "noise_floor_ito": json_f64(report.noise_floor_ito),
        "max_residual": json_f64(report.max_residual),
        "max_residual_ito": json_f64(report.max_residual_ito),
        "argmax": { "L": json_f64(report.argmax.0), "tau": json_f64(report.argmax.1) },
        "interior_nodes": {
            "l": report.l_interior.len(),
            "tau": report.tau_interior.len(),
        },
    })
}

/// Heat-map matrices of the report (one row per interior node).
pub fn bellman_matrices_csv(report: &BellmanReport) -> String {
    let mut out = String::from("L,tau,residual,residual_ito,dtilde_sign\n");
    let nt = report.tau_interior.len();
    for (i, &l) in report.l_interior.iter().enumerate() {
        for (j, &tau) in report.tau_interior.iter().enumerate() {
            let k = i * nt + j;
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_f64(l),
                fmt_f64(tau),
                fmt_f64(report.residual[k]),
                fmt_f64(report.residual_ito[k]),
                report.dtilde_sign[k]
            ));
        }
    }
    out
}

pub fn compare_table_csv(rows: &[CompareRow]) -> String {
    let mut header = String::from("alpha,jacobs_cost,wr_cost");
    if let Some(first) = rows.first() {
        for (label, _) in &first.monte_carlo {
            header.push_str(&format!(",{label}_mean,{label}_stderr"));
        }
    }
    header.push('\n');
    let mut out = header;
    for row in rows {
        out.push_str(&format!(
            "{},{},{}",
            fmt_f64(row.alpha),
            fmt_f64(row.jacobs_cost),
            fmt_f64(row.wr_cost)
        ));
        for (_, est) in &row.monte_carlo {
            out.push_str(&format!(",{},{}", fmt_f64(est.mean), fmt_f64(est.std_error)));
        }
        out.push('\n');
    }
    out
}

pub fn compare_table_json(rows: &[CompareRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|row| {
                json!({
                    "alpha": json_f64(row.alpha),
                    "jacobs_cost": json_f64(row.jacobs_cost),
                    "wr_cost": json_f64(row.wr_cost),
                    "monte_carlo": row.monte_carlo.iter().map(|(label, est)| {
                        json!({
                            "protocol": label,
                            "mean": json_f64(est.mean),
                            "std_error": json_f64(est.std_error),
                        })
                    }).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}
