//! `pinchlab constants`: the dimensional constants table as CSV.

use crate::config::{ConstantsArgs, RunContext};
use crate::output::{fmt_f, Artifacts};
use anyhow::Context;
use pinchlab::constants::{max_admissible_c0, planarity_constants};
use serde_json::json;

pub fn run(args: &ConstantsArgs, ctx: &RunContext) -> anyhow::Result<Artifacts> {
    let n_range = args
        .n_range
        .or_else(|| ctx.file.n_range.as_deref().and_then(|s| crate::config::parse_range(s).ok()))
        .unwrap_or((2, 30));
    let eps0 = args.eps0.or(ctx.file.eps0).unwrap_or(0.01);

    let mut rows = Vec::new();
    for n in n_range.0..=n_range.1 {
        let k = planarity_constants(n, eps0)
            .with_context(|| format!("constants at n = {n}, eps0 = {eps0}"))?;
        let bisected = max_admissible_c0(n)?;
        rows.push(vec![
            n.to_string(),
            fmt_f(k.cn),
            fmt_f(k.c0),
            fmt_f(k.delta),
            fmt_f(k.sigma),
            fmt_f(k.c_big0),
            fmt_f(bisected),
            (k.extended_regime as u8).to_string(),
        ]);
    }
    Ok(Artifacts {
        header: vec![
            "n",
            "c_n",
            "c0",
            "delta",
            "sigma",
            "C0",
            "max_admissible_c0",
            "extended_regime",
        ],
        rows,
        summary: json!({
            "n_range": [n_range.0, n_range.1],
            "eps0": eps0,
        }),
        violations: Vec::new(),
    })
}
