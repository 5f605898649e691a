//! Reduced mean curvature flows with per-step curvature diagnostics.
//!
//! Two reductions are implemented: the sphere-product ODE
//! (`a' = -p/a`, `b' = -q/b`) in [`product`], and the rotationally symmetric
//! hypersurface profile PDE (`r_t = r_xx/(1+r_x²) - (n-1)/r`) in
//! [`profile`]. Monitors in [`monitor`] evaluate the estimate quantities
//! (`f`, `u`, `ũ`, `G_ε`, `G`, `λ₁/H`) on each step.

pub mod monitor;
pub mod product;
pub mod profile;

pub use monitor::{
    evolution_residual_f, monitor_convexity, monitor_planarity, CurvatureSlice, PointCurvature,
};
pub use product::{product_flow_solve, ProductFlowState, ProductTermination};
pub use profile::{
    profile_flow_step, BoundaryCondition, ProfileFlowState, ProfileGeometry, ProfileTermination,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("CFL violated: dt = {dt:.3e} exceeds 0.25 dx^2 (1 + max r_x^2) = {bound:.3e}")]
    CflViolation { dt: f64, bound: f64 },
    #[error("profile pinch-off: min r = {min_r:.3e} at t = {t:.6}")]
    ProfilePinchoff { min_r: f64, t: f64 },
    #[error("step size underflow at t = {t:.6}")]
    StepSizeUnderflow { t: f64 },
    #[error("pinching lost at step {step}: min f = {min_f:.6e}")]
    PinchingLost { step: usize, min_f: f64 },
    #[error("mean convexity lost at step {step}: H = {h:.6e}")]
    MeanConvexityLost { step: usize, h: f64 },
    #[error("diagnostic timestamps must be strictly increasing (t = {t})")]
    NonMonotoneTime { t: f64 },
    #[error("invalid flow parameter: {0}")]
    InvalidParameter(String),
}

/// Per-step record of the monitored quantities. Fields that do not apply to
/// a scenario stay `None` and serialize as empty CSV cells.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiagnosticRow {
    pub t: f64,
    pub min_f: Option<f64>,
    pub max_u: Option<f64>,
    pub max_utilde: Option<f64>,
    pub max_geps: Option<f64>,
    pub max_g: Option<f64>,
    pub min_lambda1_over_h: Option<f64>,
    pub ratio_min: Option<f64>,
    pub ratio_max: Option<f64>,
    pub weighted_area: Option<f64>,
    pub f_functional: Option<f64>,
    pub j_functional: Option<f64>,
}

/// A monitor flag: some estimate quantity crossed its bound at a step.
#[derive(Debug, Clone, PartialEq)]
pub struct MonitorFlag {
    pub step: usize,
    pub what: String,
    pub value: f64,
    pub bound: f64,
}

/// Time-indexed monitor records with strictly increasing timestamps.
#[derive(Debug, Clone, Default)]
pub struct DiagnosticSeries {
    rows: Vec<DiagnosticRow>,
    pub flags: Vec<MonitorFlag>,
}

impl DiagnosticSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, row: DiagnosticRow) -> Result<(), FlowError> {
        if let Some(last) = self.rows.last() {
            if row.t <= last.t {
                return Err(FlowError::NonMonotoneTime { t: row.t });
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn rows(&self) -> &[DiagnosticRow] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Merges per-step extra columns computed separately; lengths must match.
    pub fn set_weighted_area(&mut self, values: &[f64]) {
        assert_eq!(values.len(), self.rows.len());
        for (row, v) in self.rows.iter_mut().zip(values) {
            row.weighted_area = Some(*v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_rejects_non_monotone_time() {
        let mut s = DiagnosticSeries::new();
        s.push(DiagnosticRow {
            t: 0.0,
            ..Default::default()
        })
        .unwrap();
        let err = s.push(DiagnosticRow {
            t: 0.0,
            ..Default::default()
        });
        assert!(matches!(err, Err(FlowError::NonMonotoneTime { .. })));
    }
}
