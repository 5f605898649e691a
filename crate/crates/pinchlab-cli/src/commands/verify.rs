//! `pinchlab verify`: seeded randomized suites, one CSV row per suite and
//! dimension pair, violations replayable from the recorded case seeds.

use crate::config::{RunContext, VerifyArgs};
use crate::output::{fmt_f, Artifacts};
use anyhow::bail;
use pinchlab::parallel::ExecMode;
use pinchlab::suites::{run_suites, SuiteConfig, SuiteId};
use serde_json::json;

fn parse_suites(name: &str) -> anyhow::Result<Vec<SuiteId>> {
    let normalized: String = name
        .chars()
        .filter(|c| c.is_ascii_alphanumeric())
        .collect::<String>()
        .to_ascii_lowercase();
    Ok(match normalized.as_str() {
        "all" => SuiteId::all().to_vec(),
        "appendixa" | "a" => vec![SuiteId::AppendixA],
        "appendixb1" | "b1" | "reaction" => vec![SuiteId::AppendixB1],
        "appendixb2" | "b2" | "planarity" => vec![SuiteId::AppendixB2],
        "appendixb" => vec![SuiteId::AppendixB1, SuiteId::AppendixB2],
        "simons" => vec![SuiteId::Simons],
        other => bail!("unknown suite '{other}' (all, appendixA, appendixB1, appendixB2, simons)"),
    })
}

pub fn run(args: &VerifyArgs, ctx: &RunContext) -> anyhow::Result<Artifacts> {
    let suite = args
        .suite
        .clone()
        .or_else(|| ctx.file.suite.clone())
        .unwrap_or_else(|| "all".into());
    let ids = parse_suites(&suite)?;
    let samples = args.samples.or(ctx.file.samples).unwrap_or(10_000);
    let cfg = SuiteConfig {
        samples,
        seed: ctx.seed,
        mode: ExecMode::auto(),
    };
    let reports = run_suites(&ids, &cfg);

    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut total_samples = 0usize;
    let mut worst_rel: f64 = 0.0;
    for r in &reports {
        total_samples += r.samples;
        worst_rel = worst_rel.max(r.max_rel_residual);
        rows.push(vec![
            r.suite.to_string(),
            r.n.to_string(),
            r.m.to_string(),
            r.samples.to_string(),
            fmt_f(r.max_rel_residual),
            fmt_f(r.min_margin_over_tol),
            r.violations.len().to_string(),
        ]);
        for v in &r.violations {
            violations.push(json!({
                "operation": v.check,
                "suite": v.suite,
                "n": v.n,
                "m": v.m,
                "sample_index": v.index,
                "case_seed": v.case_seed,
                "value": v.value,
                "threshold": v.threshold,
            }));
        }
    }
    Ok(Artifacts {
        header: vec![
            "suite",
            "n",
            "m",
            "samples",
            "max_rel_residual",
            "min_margin_over_tol",
            "violations",
        ],
        rows,
        summary: json!({
            "suites": ids.iter().map(|s| s.name()).collect::<Vec<_>>(),
            "samples_per_pair": samples,
            "total_samples": total_samples,
            "max_rel_residual": worst_rel,
        }),
        violations,
    })
}
