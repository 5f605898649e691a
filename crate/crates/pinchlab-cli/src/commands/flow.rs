//! `pinchlab flow`: reduced flow scenarios with the estimate monitors, one
//! CSV row per stored step.
//!
//! Columns are fixed across families; cells that do not apply to a scenario
//! stay empty. Monitor failures (pinching lost, mean convexity lost) and
//! estimate flags become violation records, and the run exits 2.

use crate::config::{FlowArgs, RunContext};
use crate::output::{fmt_f, fmt_opt, Artifacts};
use anyhow::{bail, Context};
use pinchlab::constants::{convexity_constants, planarity_constants};
use pinchlab::flow::profile::{drive_profile_flow, drive_sphere_patch};
use pinchlab::flow::{
    monitor_convexity, monitor_planarity, product_flow_solve, CurvatureSlice, DiagnosticRow,
    FlowError, ProfileFlowState,
};
use pinchlab::gaussian::{weighted_area, GaussianWeight, QuadratureSet};
use serde_json::{json, Value};

struct Resolved {
    family: String,
    n: usize,
    k: usize,
    p: usize,
    q: usize,
    r0: f64,
    b0: f64,
    amp: f64,
    length: f64,
    grid_m: usize,
    dt: f64,
    t0: f64,
    t1: f64,
    snapshots: usize,
    eps0: f64,
    eps: f64,
    big_l: f64,
    lambda: f64,
}

fn resolve(args: &FlowArgs, ctx: &RunContext) -> anyhow::Result<Resolved> {
    let family = args
        .family
        .clone()
        .or_else(|| ctx.file.family.clone())
        .unwrap_or_else(|| "cylinder".into());
    let n = args.n.or(ctx.file.n).unwrap_or(5);
    let is_product = family == "product";
    let r = Resolved {
        n,
        k: args.k.or(ctx.file.k).unwrap_or(1),
        p: args.p.or(ctx.file.p).unwrap_or(2),
        q: args.q.or(ctx.file.q).unwrap_or(n.saturating_sub(2).max(1)),
        r0: args.r0.or(ctx.file.r0).unwrap_or(1.0),
        b0: args.b0.or(ctx.file.b0).unwrap_or(1.0),
        amp: args.amp.or(ctx.file.amp).unwrap_or(0.01),
        length: args.length.or(ctx.file.length).unwrap_or(4.0),
        grid_m: args.grid_m.or(ctx.file.grid_m).unwrap_or(128),
        dt: args.dt.or(ctx.file.dt).unwrap_or(1e-5),
        t0: args
            .t0
            .or(ctx.file.t0)
            .unwrap_or(if is_product { -0.5 } else { 0.0 }),
        t1: args
            .t1
            .or(ctx.file.t1)
            .unwrap_or(if is_product { -0.05 } else { 0.04 }),
        snapshots: args.snapshots.or(ctx.file.snapshots).unwrap_or(16),
        eps0: args.eps0.or(ctx.file.eps0).unwrap_or(0.005),
        eps: args.eps.or(ctx.file.eps).unwrap_or(0.005),
        big_l: args.big_l.or(ctx.file.big_l).unwrap_or(1.0),
        lambda: args.lambda.or(ctx.file.lambda).unwrap_or(50.0),
        family,
    };
    if r.t1 <= r.t0 {
        bail!("need t1 > t0, got t0 = {}, t1 = {}", r.t0, r.t1);
    }
    if r.n < 2 {
        bail!("need n >= 2");
    }
    if r.r0 <= 0.0 || r.b0 <= 0.0 {
        bail!("radii must be positive");
    }
    Ok(r)
}

pub fn run(args: &FlowArgs, ctx: &RunContext) -> anyhow::Result<Artifacts> {
    let r = resolve(args, ctx)?;
    let mut violations: Vec<Value> = Vec::new();

    // Build the trajectory as curvature slices plus quadrature sets;
    // product scenarios also keep their ODE states for the closed-form
    // density column.
    let mut product_states = Vec::new();
    let (slices, quad_sets, codim_one): (Vec<CurvatureSlice>, Vec<QuadratureSet>, bool) =
        match r.family.as_str() {
            "cylinder" => {
                if r.k != 1 {
                    bail!("profile cylinders have cross-section S^(n-1); use --k 1");
                }
                let initial = ProfileFlowState::cylinder(r.n, r.r0, r.length, r.grid_m)
                    .map_err(flow_cfg_err)?;
                let (states, _) =
                    drive_profile_flow(initial, r.t1, r.dt, r.snapshots).map_err(flow_cfg_err)?;
                (
                    states.iter().map(CurvatureSlice::from_profile).collect(),
                    states
                        .iter()
                        .map(|s| QuadratureSet::from_profile(&s.geometry()))
                        .collect(),
                    true,
                )
            }
            "perturbed-cylinder" => {
                let initial =
                    ProfileFlowState::perturbed_cylinder(r.n, r.r0, r.amp, r.length, r.grid_m)
                        .map_err(flow_cfg_err)?;
                let (states, _) =
                    drive_profile_flow(initial, r.t1, r.dt, r.snapshots).map_err(flow_cfg_err)?;
                (
                    states.iter().map(CurvatureSlice::from_profile).collect(),
                    states
                        .iter()
                        .map(|s| QuadratureSet::from_profile(&s.geometry()))
                        .collect(),
                    true,
                )
            }
            "sphere" => {
                let x_max = 0.5 * r.r0;
                let states =
                    drive_sphere_patch(r.n, r.r0, x_max, r.grid_m, r.t1, r.dt, r.snapshots)
                        .map_err(flow_cfg_err)?;
                (
                    states
                        .iter()
                        .map(|s| CurvatureSlice::from_profile_interior(s, 1))
                        .collect(),
                    states
                        .iter()
                        .map(|s| QuadratureSet::from_profile(&s.geometry()))
                        .collect(),
                    true,
                )
            }
            "product" => {
                if r.t1 >= 0.0 {
                    bail!("product scenarios run at negative times (self-similar window)");
                }
                let (states, _) =
                    product_flow_solve(r.p, r.q, r.r0, r.b0, r.t0, r.t1, r.dt.max(1e-6))
                        .map_err(flow_cfg_err)?;
                let slices: Vec<CurvatureSlice> = states
                    .iter()
                    .map(|s| CurvatureSlice::from_product(s).map_err(flow_cfg_err))
                    .collect::<Result<_, _>>()?;
                product_states = states;
                (slices, Vec::new(), false)
            }
            other => bail!("unknown family '{other}' (cylinder, perturbed-cylinder, sphere, product)"),
        };

    let n_for_constants = if codim_one { r.n } else { r.p + r.q };
    let planarity = planarity_constants(n_for_constants, r.eps0)
        .with_context(|| format!("planarity constants at n = {n_for_constants}, eps0 = {}", r.eps0))?;

    let mut rows: Vec<DiagnosticRow> = slices
        .iter()
        .map(|s| DiagnosticRow {
            t: s.t,
            ..Default::default()
        })
        .collect();

    // Ratio columns are monitor-independent.
    for (row, slice) in rows.iter_mut().zip(&slices) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for pt in &slice.points {
            let h2 = pt.h * pt.h;
            if h2 > 0.0 {
                let ratio = pt.norm_a2 / h2;
                lo = lo.min(ratio);
                hi = hi.max(ratio);
            }
        }
        row.ratio_min = Some(lo);
        row.ratio_max = Some(hi);
    }

    match monitor_planarity(&slices, &planarity) {
        Ok(series) => {
            for (row, mon) in rows.iter_mut().zip(series.rows()) {
                row.min_f = mon.min_f;
                row.max_u = mon.max_u;
                row.max_utilde = mon.max_utilde;
            }
            for flag in &series.flags {
                violations.push(json!({
                    "operation": "monitor_planarity",
                    "what": flag.what,
                    "step": flag.step,
                    "value": flag.value,
                    "bound": flag.bound,
                    "inputs": scenario_inputs(&r),
                }));
            }
        }
        Err(e) => violations.push(monitor_violation("monitor_planarity", &e, &r)),
    }

    if codim_one {
        let convexity = convexity_constants(r.n, r.big_l, r.eps, 0.25, r.lambda, Some(0.25))
            .with_context(|| "convexity constants")?;
        match monitor_convexity(&slices, &convexity, r.eps) {
            Ok(series) => {
                for (row, mon) in rows.iter_mut().zip(series.rows()) {
                    row.max_geps = mon.max_geps;
                    row.max_g = mon.max_g;
                    row.min_lambda1_over_h = mon.min_lambda1_over_h;
                }
            }
            Err(e) => violations.push(monitor_violation("monitor_convexity", &e, &r)),
        }
    }

    // Weighted area: forward-centered for the [0, T] window of profile
    // scenarios, backward for the negative-time product window.
    if codim_one {
        let horizon = r.t1 + 0.5 * (r.t1 - r.t0);
        for (row, set) in rows.iter_mut().zip(&quad_sets) {
            let w = GaussianWeight::ForwardCentered { horizon, t: row.t };
            if let Ok(area) = weighted_area(set, w) {
                row.weighted_area = Some(area);
                if area > r.lambda {
                    violations.push(json!({
                        "operation": "entropy_bound",
                        "what": "weighted_area_exceeds_lambda",
                        "value": area,
                        "bound": r.lambda,
                        "t": row.t,
                        "inputs": scenario_inputs(&r),
                    }));
                }
                // F = ∫ ũ Φ_T / (C0 Λ); ũ ≡ 0 in codimension one.
                row.f_functional = Some(0.0);
            }
        }
    } else {
        // Closed-form backward density per stored product state.
        for (row, state) in rows.iter_mut().zip(&product_states) {
            if row.t < 0.0 {
                if let Ok(d) = state.solution().gaussian_density(row.t) {
                    row.weighted_area = Some(d);
                }
            }
        }
    }

    let csv_rows = rows
        .iter()
        .map(|row| {
            vec![
                fmt_f(row.t),
                fmt_opt(row.min_f),
                fmt_opt(row.max_u),
                fmt_opt(row.max_utilde),
                fmt_opt(row.max_geps),
                fmt_opt(row.max_g),
                fmt_opt(row.min_lambda1_over_h),
                fmt_opt(row.ratio_min),
                fmt_opt(row.ratio_max),
                fmt_opt(row.weighted_area),
                fmt_opt(row.f_functional),
                fmt_opt(row.j_functional),
            ]
        })
        .collect();

    Ok(Artifacts {
        header: vec![
            "t",
            "min_f",
            "max_u",
            "max_utilde",
            "max_Geps",
            "max_G",
            "min_lambda1_over_H",
            "ratio_min",
            "ratio_max",
            "weighted_area",
            "F",
            "J",
        ],
        rows: csv_rows,
        summary: json!({
            "family": r.family,
            "n": r.n,
            "steps": rows.len(),
            "window": [r.t0, r.t1],
            "eps0": r.eps0,
            "c0": planarity.c0,
        }),
        violations,
    })
}

fn flow_cfg_err(e: FlowError) -> anyhow::Error {
    anyhow::anyhow!("{e}")
}

fn monitor_violation(op: &str, e: &FlowError, r: &Resolved) -> Value {
    json!({
        "operation": op,
        "what": e.to_string(),
        "inputs": scenario_inputs(r),
    })
}

fn scenario_inputs(r: &Resolved) -> Value {
    json!({
        "family": r.family,
        "n": r.n,
        "k": r.k,
        "p": r.p,
        "q": r.q,
        "r0": r.r0,
        "b0": r.b0,
        "amp": r.amp,
        "length": r.length,
        "grid_m": r.grid_m,
        "dt": r.dt,
        "t0": r.t0,
        "t1": r.t1,
        "eps0": r.eps0,
        "eps": r.eps,
        "L": r.big_l,
        "Lambda": r.lambda,
    })
}
