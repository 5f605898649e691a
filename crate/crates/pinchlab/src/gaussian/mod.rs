//! Gaussian-weighted integral machinery: the backward and forward-centered
//! heat-kernel weights, quadrature sets over the supported geometries,
//! discrete monotonicity checks, and the comparison functionals that close
//! the two main estimates.

mod divergence;
mod functionals;

pub use divergence::divergence_identity_check;
pub use functionals::{
    ancient_ode_rigidity, f_functional, j_functional, logistic_comparison, rigidity_t_min,
    FFunctionalReport, JTrajectory, OdeTrajectory, RigidityReport, TrajectoryKind, WeightedField,
};

use crate::exact::unit_sphere_area;
use crate::flow::ProfileGeometry;
use crate::linalg::gauss_legendre;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaussianError {
    #[error("quantity is not finite at sample {index}")]
    NonFiniteQuantity { index: usize },
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("entropy bound violated: weighted area {area:.6e} exceeds Lambda = {bound:.6e}")]
    EntropyBoundViolated { area: f64, bound: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported geometry: {0}")]
    Unsupported(String),
}

/// Backward or forward-centered Gaussian weight on an `n`-dimensional
/// submanifold. Normalized so a flat `R^n` through the origin has total
/// weight one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaussianWeight {
    /// `Φ(x, t) = (-4πt)^{-n/2} exp(|x|²/(4t))`, `t < 0`.
    Backward { t: f64 },
    /// `Φ_T(x, t) = (4π(T-t))^{-n/2} exp(-|x|²/(4(T-t)))`, `t < T`.
    ForwardCentered { horizon: f64, t: f64 },
}

impl GaussianWeight {
    pub fn validate(&self) -> Result<(), GaussianError> {
        match *self {
            GaussianWeight::Backward { t } if t >= 0.0 => Err(GaussianError::InvalidWeight(
                format!("backward weight needs t < 0, got {t}"),
            )),
            GaussianWeight::ForwardCentered { horizon, t } if t >= horizon => {
                Err(GaussianError::InvalidWeight(format!(
                    "forward weight needs t < T, got t = {t}, T = {horizon}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// Weight value at squared distance `pos2` from the center, on an
    /// `n`-dimensional submanifold.
    pub fn value(&self, n: usize, pos2: f64) -> f64 {
        let tau = match *self {
            GaussianWeight::Backward { t } => -t,
            GaussianWeight::ForwardCentered { horizon, t } => horizon - t,
        };
        (4.0 * std::f64::consts::PI * tau).powf(-(n as f64) / 2.0) * (-pos2 / (4.0 * tau)).exp()
    }
}

/// A quadrature set over an `n`-dimensional surface: per sample, the squared
/// distance from the origin and a positive area weight. (The Gaussian weight
/// only sees `|x|²`, so full coordinates are never stored.)
#[derive(Debug, Clone)]
pub struct QuadratureSet {
    pub intrinsic_dim: usize,
    pub pos2: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureSet {
    pub fn len(&self) -> usize {
        self.pos2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pos2.is_empty()
    }

    /// Midpoint tensor grid over `[-half_width, half_width]^n` of a flat
    /// `R^n` through the origin. The Gaussian tail beyond radius
    /// `sqrt(4 tau ln(1/eps))` is below `eps`, so a half-width of
    /// `sqrt(30 * 4 tau)` keeps the truncation error near 1e-13.
    pub fn plane_grid(n: usize, half_width: f64, points_per_axis: usize) -> Self {
        assert!(n >= 1 && n <= 3, "plane grids implemented for n <= 3");
        let m = points_per_axis;
        let dx = 2.0 * half_width / m as f64;
        let axis: Vec<f64> = (0..m)
            .map(|i| -half_width + (i as f64 + 0.5) * dx)
            .collect();
        let mut pos2 = Vec::new();
        match n {
            1 => {
                for &x in &axis {
                    pos2.push(x * x);
                }
            }
            2 => {
                for &x in &axis {
                    for &y in &axis {
                        pos2.push(x * x + y * y);
                    }
                }
            }
            _ => {
                for &x in &axis {
                    for &y in &axis {
                        for &z in &axis {
                            pos2.push(x * x + y * y + z * z);
                        }
                    }
                }
            }
        }
        let w = dx.powi(n as i32);
        let weights = vec![w; pos2.len()];
        Self {
            intrinsic_dim: n,
            pos2,
            weights,
        }
    }

    /// Quadrature over the round sphere `S^d(radius)`: uniform points on the
    /// circle for `d = 1`, Gauss–Legendre in the polar cosine times a uniform
    /// azimuth for `d = 2`. All samples sit at `|x|² = radius²`; the weights
    /// sum to the sphere area up to quadrature error, which is what a
    /// resolution study exercises.
    pub fn sphere_surface(d: usize, radius: f64, resolution: usize) -> Result<Self, GaussianError> {
        let r2 = radius * radius;
        match d {
            1 => {
                let m = resolution.max(4);
                let w = 2.0 * std::f64::consts::PI * radius / m as f64;
                Ok(Self {
                    intrinsic_dim: 1,
                    pos2: vec![r2; m],
                    weights: vec![w; m],
                })
            }
            2 => {
                let k = resolution.max(4);
                let (nodes, wu) = gauss_legendre(k);
                let m_phi = 2 * k;
                let dphi = 2.0 * std::f64::consts::PI / m_phi as f64;
                let mut pos2 = Vec::with_capacity(k * m_phi);
                let mut weights = Vec::with_capacity(k * m_phi);
                for (_, &w) in nodes.iter().zip(&wu) {
                    for _ in 0..m_phi {
                        pos2.push(r2);
                        weights.push(radius * radius * w * dphi);
                    }
                }
                Ok(Self {
                    intrinsic_dim: 2,
                    pos2,
                    weights,
                })
            }
            _ => Err(GaussianError::Unsupported(format!(
                "sphere quadrature implemented for d in {{1, 2}}, got {d}"
            ))),
        }
    }

    /// Quadrature set of a rotationally symmetric profile surface; the
    /// cross-section `S^{n-1}` is integrated exactly into the weights.
    pub fn from_profile(geo: &ProfileGeometry) -> Self {
        Self {
            intrinsic_dim: geo.n,
            pos2: geo.pos2.clone(),
            weights: geo.area_weight.clone(),
        }
    }

    /// Closed-form set for a generalized cylinder `S^{d}(r) x R^k`: the flat
    /// directions integrate against the Gaussian to `(4πτ)^{k/2}`, leaving a
    /// single sample at `|x|² = r²` with the sphere area as weight and the
    /// intrinsic dimension reduced to `d`.
    pub fn cylinder_closed_form(d: usize, radius: f64) -> Self {
        Self {
            intrinsic_dim: d,
            pos2: vec![radius * radius],
            weights: vec![unit_sphere_area(d) * radius.powi(d as i32)],
        }
    }
}

/// `Σ quantity · Φ · weight` over the set. Deterministic left-to-right sum.
pub fn weighted_integral(
    set: &QuadratureSet,
    quantity: &[f64],
    weight: GaussianWeight,
) -> Result<f64, GaussianError> {
    weight.validate()?;
    if quantity.len() != set.len() {
        return Err(GaussianError::InvalidInput(format!(
            "quantity field has {} entries for {} samples",
            quantity.len(),
            set.len()
        )));
    }
    let mut total = 0.0;
    for i in 0..set.len() {
        let q = quantity[i];
        if !q.is_finite() {
            return Err(GaussianError::NonFiniteQuantity { index: i });
        }
        total += q * weight.value(set.intrinsic_dim, set.pos2[i]) * set.weights[i];
    }
    Ok(total)
}

/// Weighted area `∫ Φ dV` of a set.
pub fn weighted_area(set: &QuadratureSet, weight: GaussianWeight) -> Result<f64, GaussianError> {
    let ones = vec![1.0; set.len()];
    weighted_integral(set, &ones, weight)
}

/// Discrete monotonicity check: the finite-difference time derivative of
/// the backward-weighted area over a trajectory of quadrature sets at
/// negative times. Along a mean curvature flow the derivative is
/// nonpositive, and zero exactly on self-similar trajectories.
pub fn monotonicity_check(
    trajectory: &[(f64, QuadratureSet)],
) -> Result<Vec<(f64, f64)>, GaussianError> {
    let mut series = Vec::with_capacity(trajectory.len());
    for (t, set) in trajectory {
        series.push((*t, weighted_area(set, GaussianWeight::Backward { t: *t })?));
    }
    Ok(finite_difference_series(&series))
}

/// Centered finite-difference derivative of a `(t, value)` series; one-sided
/// at the ends.
pub fn finite_difference_series(series: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let n = series.len();
    if n < 2 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let d = if i == 0 {
            (series[1].1 - series[0].1) / (series[1].0 - series[0].0)
        } else if i == n - 1 {
            (series[n - 1].1 - series[n - 2].1) / (series[n - 1].0 - series[n - 2].0)
        } else {
            (series[i + 1].1 - series[i - 1].1) / (series[i + 1].0 - series[i - 1].0)
        };
        out.push((series[i].0, d));
    }
    out
}
