//! The scalar comparison functionals: `F(t)` for the integral planarity
//! estimate, `J(t)` for the convexity estimate, and the backward rigidity
//! bound for the `J`-ODE.

use super::{weighted_area, weighted_integral, GaussianError, GaussianWeight, QuadratureSet};
use crate::constants::{ConvexityConstants, PlanarityConstants};
use crate::flow::MonitorFlag;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryKind {
    PlanarityF,
    ConvexityJ,
}

/// Nonnegative samples over strictly increasing timestamps.
#[derive(Debug, Clone)]
pub struct OdeTrajectory {
    pub kind: TrajectoryKind,
    samples: Vec<(f64, f64)>,
}

impl OdeTrajectory {
    pub fn new(kind: TrajectoryKind) -> Self {
        Self {
            kind,
            samples: Vec::new(),
        }
    }

    pub fn push(&mut self, t: f64, value: f64) -> Result<(), GaussianError> {
        if value < 0.0 {
            return Err(GaussianError::InvalidInput(format!(
                "trajectory values must be nonnegative, got {value} at t = {t}"
            )));
        }
        if let Some(&(last_t, _)) = self.samples.last() {
            if t <= last_t {
                return Err(GaussianError::InvalidInput(format!(
                    "trajectory timestamps must increase, got {t} after {last_t}"
                )));
            }
        }
        self.samples.push((t, value));
        Ok(())
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn max_value(&self) -> f64 {
        self.samples.iter().map(|s| s.1).fold(0.0, f64::max)
    }
}

/// One time slice of a scalar field over a quadrature set.
#[derive(Debug, Clone)]
pub struct WeightedField {
    pub t: f64,
    pub set: QuadratureSet,
    pub values: Vec<f64>,
}

/// Outcome of the `F`-functional scan.
#[derive(Debug, Clone)]
pub struct FFunctionalReport {
    pub trajectory: OdeTrajectory,
    /// `∫ Φ_T dV` per step (must stay below `Λ`).
    pub weighted_areas: Vec<f64>,
    /// Steps where `F > 1 + 1e-6` (must stay empty on pinched data).
    pub flags: Vec<MonitorFlag>,
    /// Per step, the pair `(∫ u^{1/σ} Φ_T dV, C₀ Λ / t)` for `t > 0`; the
    /// first component may never exceed the second once `F <= 1`.
    pub integral_bound_pairs: Vec<(f64, f64)>,
}

/// `F(t) = (1/(C₀ Λ)) ∫ ũ Φ_T dV_t` over the supplied `ũ` fields. Time is
/// re-indexed so the first slice sits at `t = 0`. Errors out the moment the
/// entropy bound `∫ Φ_T dV <= Λ` fails.
///
/// The "entropy" enforced here is the Gaussian density at the flow's own
/// center and scale, a lower bound for the full supremum over centers and
/// scales — calibrate `Λ` accordingly.
pub fn f_functional(
    fields: &[WeightedField],
    constants: &PlanarityConstants,
    lambda: f64,
    horizon: f64,
) -> Result<FFunctionalReport, GaussianError> {
    if lambda <= 0.0 {
        return Err(GaussianError::InvalidInput("Lambda must be positive".into()));
    }
    let mut report = FFunctionalReport {
        trajectory: OdeTrajectory::new(TrajectoryKind::PlanarityF),
        weighted_areas: Vec::new(),
        flags: Vec::new(),
        integral_bound_pairs: Vec::new(),
    };
    if fields.is_empty() {
        return Ok(report);
    }
    let t0 = fields[0].t;
    for (step, field) in fields.iter().enumerate() {
        let t = field.t - t0;
        let weight = GaussianWeight::ForwardCentered {
            horizon: horizon - t0,
            t,
        };
        let area = weighted_area(&field.set, weight)?;
        if area > lambda * (1.0 + 1e-9) {
            return Err(GaussianError::EntropyBoundViolated {
                area,
                bound: lambda,
            });
        }
        report.weighted_areas.push(area);
        let integral = weighted_integral(&field.set, &field.values, weight)?;
        let f_value = integral / (constants.c_big0 * lambda);
        if f_value > 1.0 + 1e-6 {
            report.flags.push(MonitorFlag {
                step,
                what: "F_exceeds_one".into(),
                value: f_value,
                bound: 1.0,
            });
        }
        report
            .trajectory
            .push(field.t, f_value.max(0.0))
            .map_err(|e| GaussianError::InvalidInput(e.to_string()))?;
        if t > 0.0 {
            // ũ = t u^{1/σ}, so ∫ u^{1/σ} Φ_T dV = (C₀ Λ / t) F.
            report
                .integral_bound_pairs
                .push((integral / t, constants.c_big0 * lambda / t));
        }
    }
    Ok(report)
}

/// Integrates the comparison ODE `F' = (F/t)(1 - F)` with RK4 from
/// `(t0, f0)`, `0 < t0 <= t_end`. Solutions starting in `[0, 1]` stay there.
pub fn logistic_comparison(
    t0: f64,
    f0: f64,
    t_end: f64,
    dt: f64,
) -> Result<OdeTrajectory, GaussianError> {
    if !(t0 > 0.0 && t_end > t0 && dt > 0.0) {
        return Err(GaussianError::InvalidInput(
            "need 0 < t0 < t_end and dt > 0".into(),
        ));
    }
    let rhs = |t: f64, f: f64| f / t * (1.0 - f);
    let mut traj = OdeTrajectory::new(TrajectoryKind::PlanarityF);
    let mut t = t0;
    let mut f = f0;
    traj.push(t, f)?;
    while t < t_end {
        let h = dt.min(t_end - t);
        let k1 = rhs(t, f);
        let k2 = rhs(t + 0.5 * h, f + 0.5 * h * k1);
        let k3 = rhs(t + 0.5 * h, f + 0.5 * h * k2);
        let k4 = rhs(t + h, f + h * k3);
        f += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
        traj.push(t, f)?;
    }
    Ok(traj)
}

/// `J(t)` samples in both linear and log form; the linear value underflows
/// to zero when `G^p` is out of range, the log form never does.
#[derive(Debug, Clone)]
pub struct JTrajectory {
    pub trajectory: OdeTrajectory,
    /// `(t, ln ∫ G^p Φ dV - (1/8) ln(-t))`; `-inf` where `G ≡ 0`.
    pub ln_samples: Vec<(f64, f64)>,
}

/// `J(t) = (-t)^{-1/8} ∫ G^p Φ dV_t` over per-point `G` fields at `t < 0`.
/// The power is taken in log space so that the large exponents demanded by
/// the constants do not overflow.
pub fn j_functional(
    fields: &[WeightedField],
    constants: &ConvexityConstants,
) -> Result<JTrajectory, GaussianError> {
    let p = constants.p;
    let mut out = JTrajectory {
        trajectory: OdeTrajectory::new(TrajectoryKind::ConvexityJ),
        ln_samples: Vec::new(),
    };
    for field in fields {
        if field.t >= 0.0 {
            return Err(GaussianError::InvalidInput(format!(
                "J functional needs t < 0, got {}",
                field.t
            )));
        }
        let weight = GaussianWeight::Backward { t: field.t };
        if field.values.len() != field.set.len() {
            return Err(GaussianError::InvalidInput(
                "G field length mismatch".into(),
            ));
        }
        // log-sum-exp of p ln G_i + ln(Φ_i w_i) over points with G_i > 0.
        let mut terms = Vec::with_capacity(field.set.len());
        for i in 0..field.set.len() {
            let g = field.values[i];
            if !g.is_finite() || g < 0.0 {
                return Err(GaussianError::NonFiniteQuantity { index: i });
            }
            if g > 0.0 {
                let ln_phi_w = weight.value(field.set.intrinsic_dim, field.set.pos2[i]).ln()
                    + field.set.weights[i].ln();
                terms.push(p * g.ln() + ln_phi_w);
            }
        }
        let ln_integral = if terms.is_empty() {
            f64::NEG_INFINITY
        } else {
            let peak = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            peak + terms.iter().map(|v| (v - peak).exp()).sum::<f64>().ln()
        };
        let ln_j = ln_integral - 0.125 * (-field.t).ln();
        out.ln_samples.push((field.t, ln_j));
        let j = if ln_j == f64::NEG_INFINITY {
            0.0
        } else {
            ln_j.exp()
        };
        if !j.is_finite() {
            return Err(GaussianError::InvalidInput(format!(
                "J overflows at t = {} (ln J = {ln_j:.3})",
                field.t
            )));
        }
        out.trajectory.push(field.t, j)?;
    }
    Ok(out)
}

/// Ancient-rigidity bound for `J' <= -C₁ (-t)^{1/2} J⁵`.
#[derive(Debug, Clone, Copy)]
pub struct RigidityReport {
    /// `t0 - J0^{-4} / (4 C₁ |t0|^{1/2})`: no solution with `J(t0) = J0 > 0`
    /// extends below this time.
    pub t_min: f64,
    /// Blow-up time of the equality ODE integrated backward numerically.
    pub t_blowup_numeric: f64,
    /// Blow-up time of the equality ODE in closed form:
    /// `(-t*)^{3/2} = (-t0)^{3/2} + 3/(8 C₁ J0⁴)`.
    pub t_blowup_analytic: f64,
}

/// `t_min = t0 - J0^{-4} / (4 C₁ |t0|^{1/2})`.
pub fn rigidity_t_min(c1: f64, t0: f64, j0: f64) -> Result<f64, GaussianError> {
    if c1 <= 0.0 || j0 <= 0.0 || t0 >= 0.0 {
        return Err(GaussianError::InvalidInput(format!(
            "need C1 > 0, J0 > 0, t0 < 0; got ({c1}, {t0}, {j0})"
        )));
    }
    Ok(t0 - j0.powi(-4) / (4.0 * c1 * (-t0).sqrt()))
}

/// Integrates `J' = -C₁ (-t)^{1/2} J⁵` backward from `(t0, J0)` until `J`
/// blows past `1e12 J0`, and reports the blow-up time along with the
/// analytic one and the frozen-coefficient bound `t_min`. The numeric
/// blow-up can never happen before `t_min`.
pub fn ancient_ode_rigidity(c1: f64, t0: f64, j0: f64) -> Result<RigidityReport, GaussianError> {
    let t_min = rigidity_t_min(c1, t0, j0)?;
    let t_blowup_analytic =
        -((-t0).powf(1.5) + 3.0 / (8.0 * c1 * j0.powi(4))).powf(2.0 / 3.0);

    // Backward march: t decreases, J grows. Adaptive step keeps the relative
    // growth per step small; near blow-up dt shrinks to the detection floor.
    let rhs = |t: f64, j: f64| -c1 * (-t).sqrt() * j.powi(5);
    let mut t = t0;
    let mut j = j0;
    let cap = 1e12 * j0;
    let min_dt = 1e-14 * t0.abs().max(1.0);
    loop {
        let slope = rhs(t, j).abs().max(1e-300);
        let dt = (0.01 * j / slope).min(0.01 * t0.abs()).max(min_dt);
        // RK4 going backward in time.
        let h = -dt;
        let k1 = rhs(t, j);
        let k2 = rhs(t + 0.5 * h, j + 0.5 * h * k1);
        let k3 = rhs(t + 0.5 * h, j + 0.5 * h * k2);
        let k4 = rhs(t + h, j + h * k3);
        let j_next = j + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
        j = j_next;
        if !j.is_finite() || j >= cap {
            break;
        }
        if dt <= min_dt && j > 1e6 * j0 {
            break;
        }
    }
    Ok(RigidityReport {
        t_min,
        t_blowup_numeric: t,
        t_blowup_analytic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{convexity_constants, planarity_constants};

    #[test]
    fn logistic_stays_below_one() {
        let traj = logistic_comparison(0.1, 0.5, 5.0, 1e-3).unwrap();
        for &(_, f) in traj.samples() {
            assert!(f <= 1.0 + 1e-9);
        }
        // Separable closed form: F/(1-F) = K t with K = (F0/(1-F0))/t0,
        // so F(5) = 50/51 here.
        let (t_end, f_end) = *traj.samples().last().unwrap();
        assert_eq!(t_end, 5.0);
        assert!((f_end - 50.0 / 51.0).abs() < 1e-9, "F(5) = {f_end}");
    }

    #[test]
    fn f_functional_zero_on_planar_fields() {
        let constants = planarity_constants(5, 0.01).unwrap();
        let fields: Vec<WeightedField> = (0..5)
            .map(|i| {
                let set = QuadratureSet::plane_grid(2, 10.0, 32);
                let values = vec![0.0; set.len()];
                WeightedField {
                    t: i as f64 * 0.1,
                    set,
                    values,
                }
            })
            .collect();
        let report = f_functional(&fields, &constants, 2.0, 1.0).unwrap();
        assert!(report.flags.is_empty());
        for &(_, f) in report.trajectory.samples() {
            assert_eq!(f, 0.0);
        }
    }

    #[test]
    fn entropy_bound_enforced() {
        let constants = planarity_constants(5, 0.01).unwrap();
        let set = QuadratureSet::plane_grid(2, 10.0, 64);
        let values = vec![0.0; set.len()];
        let fields = vec![WeightedField {
            t: 0.0,
            set,
            values,
        }];
        // Plane mass is 1; Lambda below that must trip the bound.
        assert!(matches!(
            f_functional(&fields, &constants, 0.5, 1.0),
            Err(GaussianError::EntropyBoundViolated { .. })
        ));
    }

    #[test]
    fn j_functional_zero_on_convex_fields() {
        let constants = convexity_constants(2, 1.0, 0.9, 0.25, 2.0, Some(0.25)).unwrap();
        let set = QuadratureSet::sphere_surface(2, 2.0, 16).unwrap();
        let values = vec![0.0; set.len()];
        let fields = vec![WeightedField {
            t: -1.0,
            set,
            values,
        }];
        let out = j_functional(&fields, &constants).unwrap();
        assert_eq!(out.trajectory.samples()[0].1, 0.0);
        assert_eq!(out.ln_samples[0].1, f64::NEG_INFINITY);
    }

    #[test]
    fn j_functional_scales_linearly_in_gp() {
        // Multiplying G^p pointwise by c scales J by c; realized by scaling
        // G by c^{1/p}.
        let constants = convexity_constants(2, 1.0, 0.9, 0.25, 2.0, Some(0.25)).unwrap();
        let set = QuadratureSet::sphere_surface(2, 1.0, 16).unwrap();
        let g = 0.7;
        let c = 3.0f64;
        let base = vec![g; set.len()];
        let scaled = vec![g * c.powf(1.0 / constants.p); set.len()];
        let out1 = j_functional(
            &[WeightedField {
                t: -1.0,
                set: set.clone(),
                values: base,
            }],
            &constants,
        )
        .unwrap();
        let out2 = j_functional(
            &[WeightedField {
                t: -1.0,
                set,
                values: scaled,
            }],
            &constants,
        )
        .unwrap();
        let ratio = (out2.ln_samples[0].1 - out1.ln_samples[0].1).exp();
        assert!((ratio - c).abs() < 1e-9 * c);
    }

    #[test]
    fn rigidity_frozen_example() {
        // C1 = 1, t0 = -1, J0 = 1: t_min = -1.25.
        let report = ancient_ode_rigidity(1.0, -1.0, 1.0).unwrap();
        assert!((report.t_min + 1.25).abs() < 1e-12);
        assert!(report.t_blowup_numeric >= report.t_min);
        assert!(
            (report.t_blowup_numeric - report.t_blowup_analytic).abs() < 2e-3,
            "numeric {} vs analytic {}",
            report.t_blowup_numeric,
            report.t_blowup_analytic
        );
        // Doubling C1 halves the backward extent of the bound.
        let r2 = ancient_ode_rigidity(2.0, -1.0, 1.0).unwrap();
        let extent1 = -1.0 - report.t_min;
        let extent2 = -1.0 - r2.t_min;
        assert!((extent1 - 2.0 * extent2).abs() < 1e-12);
    }

    #[test]
    fn rigidity_invalid_inputs() {
        assert!(ancient_ode_rigidity(0.0, -1.0, 1.0).is_err());
        assert!(ancient_ode_rigidity(1.0, 0.5, 1.0).is_err());
        assert!(ancient_ode_rigidity(1.0, -1.0, 0.0).is_err());
    }

    #[test]
    fn rigidity_no_backward_room_for_large_j0() {
        let report = ancient_ode_rigidity(1.0, -1.0, 100.0).unwrap();
        assert!((-1.0 - report.t_min).abs() < 1e-6);
    }
}
