//! `pinchlab exact`: invariants of the closed-form families over a sweep.

use crate::config::{ExactArgs, RunContext};
use crate::output::{fmt_f, Artifacts};
use anyhow::bail;
use pinchlab::constants::compute_cn;
use pinchlab::exact::{balanced_sphere_product, HomogeneousSolution, PinchingClass};
use serde_json::json;

fn class_name(c: PinchingClass) -> &'static str {
    match c {
        PinchingClass::Pinched => "pinched",
        PinchingClass::Boundary => "boundary",
        PinchingClass::Unpinched => "unpinched",
    }
}

pub fn run(args: &ExactArgs, ctx: &RunContext) -> anyhow::Result<Artifacts> {
    let family = args
        .family
        .clone()
        .or_else(|| ctx.file.family.clone())
        .unwrap_or_else(|| "cylinder".into());
    let n_range = args
        .n_range
        .or_else(|| ctx.file.n_range.as_deref().and_then(|s| crate::config::parse_range(s).ok()))
        .unwrap_or((2, 10));
    let k_range = args
        .k_range
        .or_else(|| ctx.file.k_range.as_deref().and_then(|s| crate::config::parse_range(s).ok()))
        .unwrap_or((0, 3));
    let t = args.t.or(ctx.file.t).unwrap_or(-1.0);
    if t >= 0.0 {
        bail!("exact sweeps evaluate on the self-similar trajectory; need t < 0");
    }

    // Family members at their self-similar radii for weight time t, plus an
    // off-trajectory copy at twice the radius.
    let mut members: Vec<HomogeneousSolution> = Vec::new();
    match family.as_str() {
        "cylinder" => {
            for n in n_range.0.max(2)..=n_range.1 {
                for k in k_range.0..=k_range.1.min(n - 1) {
                    members.push(HomogeneousSolution::Cylinder { n, k, radius: 1.0 });
                }
            }
        }
        "sphere" => {
            for n in n_range.0.max(2)..=n_range.1 {
                members.push(HomogeneousSolution::Sphere { n, radius: 1.0 });
            }
        }
        "product" => {
            for n in n_range.0.max(2)..=n_range.1 {
                for p in 1..n {
                    members.push(balanced_sphere_product(p, n - p, 1.0));
                }
            }
        }
        other => bail!("unknown family '{other}' (cylinder, sphere, product)"),
    }

    let mut rows = Vec::new();
    for base in members {
        let on = base.at_time(t)?;
        let n = on.dims()?.n();
        let c0 = args.c0.or(ctx.file.c0).unwrap_or(compute_cn(n)?);
        let inv = on.invariants(c0)?;
        let report = on.pinching_classification()?;
        let res_on = on.shrinker_residual(t)?;
        let off = scale_radii(&on, 2.0);
        let res_off = off.shrinker_residual(t)?;
        let (k, p, q, a, b) = describe(&on);
        rows.push(vec![
            family.clone(),
            n.to_string(),
            k.map(|v| v.to_string()).unwrap_or_default(),
            p.map(|v| v.to_string()).unwrap_or_default(),
            q.map(|v| v.to_string()).unwrap_or_default(),
            fmt_f(a),
            b.map(fmt_f).unwrap_or_default(),
            fmt_f(inv.ratio),
            fmt_f(inv.ahat_ratio),
            fmt_f(inv.lambda1),
            fmt_f(inv.f),
            fmt_f(report.cn),
            class_name(report.class).to_string(),
            fmt_f(res_on),
            fmt_f(res_off),
        ]);
    }

    Ok(Artifacts {
        header: vec![
            "family",
            "n",
            "k",
            "p",
            "q",
            "radius_a",
            "radius_b",
            "ratio",
            "ahat_ratio",
            "lambda1",
            "f",
            "c_n",
            "pinching_class",
            "shrinker_residual_on",
            "shrinker_residual_2x",
        ],
        rows,
        summary: json!({
            "family": family,
            "t": t,
            "n_range": [n_range.0, n_range.1],
        }),
        violations: Vec::new(),
    })
}

fn scale_radii(sol: &HomogeneousSolution, factor: f64) -> HomogeneousSolution {
    match *sol {
        HomogeneousSolution::Sphere { n, radius } => HomogeneousSolution::Sphere {
            n,
            radius: factor * radius,
        },
        HomogeneousSolution::Cylinder { n, k, radius } => HomogeneousSolution::Cylinder {
            n,
            k,
            radius: factor * radius,
        },
        HomogeneousSolution::SphereProduct { p, q, a, b } => HomogeneousSolution::SphereProduct {
            p,
            q,
            a: factor * a,
            b: factor * b,
        },
    }
}

fn describe(
    sol: &HomogeneousSolution,
) -> (Option<usize>, Option<usize>, Option<usize>, f64, Option<f64>) {
    match *sol {
        HomogeneousSolution::Sphere { radius, .. } => (None, None, None, radius, None),
        HomogeneousSolution::Cylinder { k, radius, .. } => (Some(k), None, None, radius, None),
        HomogeneousSolution::SphereProduct { p, q, a, b } => {
            (None, Some(p), Some(q), a, Some(b))
        }
    }
}
