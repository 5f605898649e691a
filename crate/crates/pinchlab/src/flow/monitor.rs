//! Per-step estimate monitors over flow trajectories.

use super::profile::ProfileFlowState;
use super::{DiagnosticRow, DiagnosticSeries, FlowError, MonitorFlag, ProductFlowState};
use crate::constants::{ConvexityConstants, PlanarityConstants};
use crate::exact::HomogeneousSolution;

/// Curvature data of one point of a time slice; everything the monitors
/// need, independent of which reduced flow produced it.
#[derive(Debug, Clone, Copy)]
pub struct PointCurvature {
    /// Scalar mean curvature for codimension-one slices (signed), `|H|`
    /// otherwise.
    pub h: f64,
    pub norm_a2: f64,
    /// `|Â|²`; zero for codimension-one slices.
    pub ahat2: f64,
    /// Smallest principal curvature (codimension one), or the smallest
    /// eigenvalue of `⟨A, ν₁⟩`.
    pub lambda1: f64,
}

/// One time slice of a trajectory.
#[derive(Debug, Clone)]
pub struct CurvatureSlice {
    pub t: f64,
    pub points: Vec<PointCurvature>,
}

impl CurvatureSlice {
    pub fn from_profile(state: &ProfileFlowState) -> Self {
        let geo = state.geometry();
        let points = (0..state.len())
            .map(|i| PointCurvature {
                h: geo.h[i],
                norm_a2: geo.norm_a2[i],
                ahat2: 0.0,
                lambda1: geo.lambda_ax[i].min(geo.lambda_sph[i]),
            })
            .collect();
        Self {
            t: state.t,
            points,
        }
    }

    /// Like [`Self::from_profile`] but dropping `skip` cells at each end.
    /// Boundary cells of a Neumann patch see mirror ghosts instead of the
    /// real continuation, so their curvature is chart noise; validation
    /// drivers that pin boundary data exclude them.
    pub fn from_profile_interior(state: &ProfileFlowState, skip: usize) -> Self {
        let geo = state.geometry();
        let m = state.len();
        let points = (skip..m.saturating_sub(skip))
            .map(|i| PointCurvature {
                h: geo.h[i],
                norm_a2: geo.norm_a2[i],
                ahat2: 0.0,
                lambda1: geo.lambda_ax[i].min(geo.lambda_sph[i]),
            })
            .collect();
        Self {
            t: state.t,
            points,
        }
    }

    /// Homogeneous slice of a product-flow state (one representative point).
    pub fn from_product(state: &ProductFlowState) -> Result<Self, FlowError> {
        let inv = state
            .solution()
            .invariants(1.0)
            .map_err(|e| FlowError::InvalidParameter(e.to_string()))?;
        Ok(Self {
            t: state.t,
            points: vec![PointCurvature {
                h: inv.decomposition.norm_h,
                norm_a2: inv.decomposition.norm_a2,
                ahat2: inv.decomposition.norm_ahat2,
                lambda1: inv.lambda1,
            }],
        })
    }
}

/// Planarity monitor: per step, `min f`, `max u = |Â|²/f^{1-σ}`, and the
/// scale-invariant `ũ = t u^{1/σ}` (time re-indexed to start at zero).
/// Fails with [`FlowError::PinchingLost`] the moment `f <= 0` somewhere;
/// flags (but does not fail on) `ũ > C₀`, which must never fire on pinched
/// data.
pub fn monitor_planarity(
    slices: &[CurvatureSlice],
    constants: &PlanarityConstants,
) -> Result<DiagnosticSeries, FlowError> {
    let mut series = DiagnosticSeries::new();
    if slices.is_empty() {
        return Ok(series);
    }
    let t0 = slices[0].t;
    for (step, slice) in slices.iter().enumerate() {
        let t_rel = slice.t - t0;
        let mut min_f = f64::INFINITY;
        let mut max_u: f64 = 0.0;
        let mut ratio_min = f64::INFINITY;
        let mut ratio_max = f64::NEG_INFINITY;
        for pt in &slice.points {
            // Exactly flat points (A = 0) take the static branch: every
            // diagnostic vanishes there and f = 0 is not a pinching failure.
            if pt.norm_a2 == 0.0 && pt.h == 0.0 {
                min_f = min_f.min(0.0);
                continue;
            }
            let h2 = pt.h * pt.h;
            let f = constants.c0 * h2 - pt.norm_a2;
            min_f = min_f.min(f);
            if f <= 0.0 {
                return Err(FlowError::PinchingLost { step, min_f: f });
            }
            max_u = max_u.max(pt.ahat2 / f.powf(1.0 - constants.sigma));
            if h2 > 0.0 {
                let ratio = pt.norm_a2 / h2;
                ratio_min = ratio_min.min(ratio);
                ratio_max = ratio_max.max(ratio);
            }
        }
        if !min_f.is_finite() {
            min_f = 0.0;
        }
        let max_utilde = t_rel * max_u.powf(1.0 / constants.sigma);
        if max_utilde > constants.c_big0 * (1.0 + 1e-9) {
            series.flags.push(MonitorFlag {
                step,
                what: "utilde_exceeds_C0".into(),
                value: max_utilde,
                bound: constants.c_big0,
            });
        }
        series.push(DiagnosticRow {
            t: slice.t,
            min_f: Some(min_f),
            max_u: Some(max_u),
            max_utilde: Some(max_utilde),
            ratio_min: ratio_min.is_finite().then_some(ratio_min),
            ratio_max: ratio_max.is_finite().then_some(ratio_max),
            ..Default::default()
        })?;
    }
    Ok(series)
}

/// Convexity monitor: per step, `max G_ε`, `max G = G_ε/H^{1-σ}`, and
/// `min λ₁/H`. Fails with [`FlowError::MeanConvexityLost`] if `H <= 0`
/// anywhere. On convex slices `G_ε` is identically zero.
pub fn monitor_convexity(
    slices: &[CurvatureSlice],
    constants: &ConvexityConstants,
    eps: f64,
) -> Result<DiagnosticSeries, FlowError> {
    if !(eps > 0.0 && eps < 1.0 / constants.big_l) {
        return Err(FlowError::InvalidParameter(format!(
            "eps = {eps} must lie in (0, 1/L)"
        )));
    }
    let mut series = DiagnosticSeries::new();
    for (step, slice) in slices.iter().enumerate() {
        let mut max_geps: f64 = 0.0;
        let mut max_g: f64 = 0.0;
        let mut min_ratio = f64::INFINITY;
        for pt in &slice.points {
            // Static flat points: G_eps = 0 and no ratio; H <= 0 anywhere
            // else is a genuine loss of mean convexity.
            if pt.norm_a2 == 0.0 && pt.h == 0.0 {
                continue;
            }
            if pt.h <= 0.0 {
                return Err(FlowError::MeanConvexityLost { step, h: pt.h });
            }
            let geps =
                (-pt.lambda1 - eps * (2.0 * constants.big_l * pt.h - pt.norm_a2.sqrt())).max(0.0);
            max_geps = max_geps.max(geps);
            max_g = max_g.max(geps / pt.h.powf(1.0 - constants.sigma));
            min_ratio = min_ratio.min(pt.lambda1 / pt.h);
        }
        series.push(DiagnosticRow {
            t: slice.t,
            max_geps: Some(max_geps),
            max_g: Some(max_g),
            min_lambda1_over_h: min_ratio.is_finite().then_some(min_ratio),
            ..Default::default()
        })?;
    }
    Ok(series)
}

/// Closed-form evolution residual of `f = c0|H|² - |A|²` on a self-similar
/// family: spatial terms vanish on homogeneous data, so
/// `∂_t f = 2 (c0|⟨A,H⟩|² - |⟨A,A⟩|² - |R⊥|²)` exactly. Returns
/// `(df_dt, 2 * reaction)` at time `t < 0`.
pub fn evolution_residual_f(
    base: &HomogeneousSolution,
    c0: f64,
    t: f64,
) -> Result<(f64, f64), FlowError> {
    let map_err = |e: crate::frame::FrameError| FlowError::InvalidParameter(e.to_string());
    let sol = base.at_time(t).map_err(map_err)?;
    let a = sol.sff().map_err(map_err)?;
    let reaction =
        c0 * a.inner_ah_norm2() - a.inner_aa_norm2() - a.normal_curvature_norm2_raw();
    // On the trajectory f(t) = K_f/(-2t), so ∂_t f = K_f/(2t²).
    let k_f = match *base {
        HomogeneousSolution::Sphere { n, .. } => c0 * n as f64 - 1.0,
        HomogeneousSolution::Cylinder { n, k, .. } => c0 * (n - k) as f64 - 1.0,
        HomogeneousSolution::SphereProduct { p, q, .. } => c0 * (p + q) as f64 - 2.0,
    };
    let df_dt = k_f / (2.0 * t * t);
    Ok((df_dt, 2.0 * reaction))
}
