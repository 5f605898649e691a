//! `pinchlab ode`: the two scalar comparison problems.
//!
//! `--kind rigidity` integrates `J' = -C1 (-t)^{1/2} J^5` backward from
//! `(t0, J0)` and reports the earliest admissible time `t_min`;
//! `--kind logistic` integrates `F' = (F/t)(1 - F)` forward and checks the
//! `F <= 1` barrier.

use crate::config::{OdeArgs, RunContext};
use crate::output::{fmt_f, Artifacts};
use anyhow::bail;
use pinchlab::gaussian::{ancient_ode_rigidity, logistic_comparison};
use serde_json::json;

pub fn run(args: &OdeArgs, ctx: &RunContext) -> anyhow::Result<Artifacts> {
    let kind = args
        .kind
        .clone()
        .or_else(|| ctx.file.kind.clone())
        .unwrap_or_else(|| "rigidity".into());
    match kind.as_str() {
        "rigidity" => rigidity(args, ctx),
        "logistic" => logistic(args, ctx),
        other => bail!("unknown ode kind '{other}' (rigidity, logistic)"),
    }
}

fn rigidity(args: &OdeArgs, ctx: &RunContext) -> anyhow::Result<Artifacts> {
    let c1 = args.c1.or(ctx.file.c1).unwrap_or(1.0);
    let t0 = args.t0.or(ctx.file.t0).unwrap_or(-1.0);
    let j0 = args.j0.or(ctx.file.j0).unwrap_or(1.0);
    let report = ancient_ode_rigidity(c1, t0, j0).map_err(|e| anyhow::anyhow!("{e}"))?;

    // Closed-form solution curve of the equality ODE between t0 and the
    // blow-up time: J(t)^{-4} = J0^{-4} - (8 C1/3)((-t)^{3/2} - (-t0)^{3/2}).
    let mut rows = Vec::new();
    let samples = 200;
    let t_stop = report.t_blowup_analytic;
    for i in 0..samples {
        let frac = i as f64 / samples as f64;
        let t = t0 + (t_stop - t0) * frac * 0.999;
        let k = j0.powi(-4) - 8.0 * c1 / 3.0 * ((-t).powf(1.5) - (-t0).powf(1.5));
        if k <= 0.0 {
            break;
        }
        rows.push(vec![fmt_f(t), fmt_f(k.powf(-0.25))]);
    }
    rows.reverse(); // ascending time

    let mut violations = Vec::new();
    if report.t_blowup_numeric < report.t_min - 1e-9 {
        violations.push(json!({
            "operation": "ancient_ode_rigidity",
            "what": "numeric blow-up before t_min",
            "inputs": { "c1": c1, "t0": t0, "j0": j0 },
            "residual": report.t_min - report.t_blowup_numeric,
        }));
    }
    Ok(Artifacts {
        header: vec!["t", "J"],
        rows,
        summary: json!({
            "kind": "rigidity",
            "c1": c1,
            "t0": t0,
            "j0": j0,
            "t_min": report.t_min,
            "t_blowup_numeric": report.t_blowup_numeric,
            "t_blowup_analytic": report.t_blowup_analytic,
        }),
        violations,
    })
}

fn logistic(args: &OdeArgs, ctx: &RunContext) -> anyhow::Result<Artifacts> {
    let t0 = args.t0.or(ctx.file.t0).unwrap_or(0.1);
    let t1 = args.t1.or(ctx.file.t1).unwrap_or(5.0);
    let f0 = args.f0.or(ctx.file.f0).unwrap_or(0.5);
    let dt = args.dt.or(ctx.file.dt).unwrap_or(1e-3);
    let traj = logistic_comparison(t0, f0, t1, dt).map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut violations = Vec::new();
    let max_f = traj.max_value();
    if max_f > 1.0 + 1e-9 && f0 <= 1.0 {
        violations.push(json!({
            "operation": "logistic_comparison",
            "what": "F exceeded the barrier",
            "inputs": { "t0": t0, "f0": f0 },
            "residual": max_f - 1.0,
        }));
    }
    let rows = traj
        .samples()
        .iter()
        .map(|&(t, f)| vec![fmt_f(t), fmt_f(f)])
        .collect();
    Ok(Artifacts {
        header: vec!["t", "F"],
        rows,
        summary: json!({
            "kind": "logistic",
            "t0": t0,
            "t1": t1,
            "f0": f0,
            "max_F": max_f,
        }),
        violations,
    })
}
