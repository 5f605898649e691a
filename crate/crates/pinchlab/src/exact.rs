//! Closed-form solution families with analytic curvature: round spheres,
//! generalized cylinders `S^{n-k} x R^k`, and codimension-two sphere
//! products, together with their shrinker residuals and pinching class.
//!
//! Frames and signs: every curved factor is stored with its outward unit
//! normal, so the raw tensor entries are `-1/r` on the factor diagonal and
//! the mean curvature vector `H = -(d/r) ν_out` points inward, as it must
//! for a shrinking factor. The principal-normal decomposition then recovers
//! positive principal curvatures.

use crate::frame::{decompose, Decomposition, Dimensions, FrameError, SffTensor};
use crate::sample;
use rand::Rng;

/// Area of the unit `d`-sphere `S^d` in `R^{d+1}`: `2 π^{(d+1)/2} / Γ((d+1)/2)`.
pub fn unit_sphere_area(d: usize) -> f64 {
    let x = (d as f64 + 1.0) / 2.0;
    2.0 * std::f64::consts::PI.powf(x) / gamma_half_integer(d + 1)
}

/// `Γ(k/2)` for integer `k >= 1` by the recursion from `Γ(1/2)` and `Γ(1)`.
fn gamma_half_integer(k: usize) -> f64 {
    let mut x = k as f64 / 2.0;
    let mut acc = 1.0;
    while x >= 1.5 {
        x -= 1.0;
        acc *= x;
    }
    if (x - 0.5).abs() < 1e-12 {
        acc * std::f64::consts::PI.sqrt()
    } else {
        acc // Γ(1) = 1
    }
}

/// One member of the closed-form families, at fixed radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HomogeneousSolution {
    Sphere { n: usize, radius: f64 },
    /// `S^{n-k}(r) x R^k`, codimension one; `0 <= k <= n-1`.
    Cylinder { n: usize, k: usize, radius: f64 },
    /// `S^p(a) x S^q(b)`, intrinsic dimension `p+q`, codimension two.
    SphereProduct { p: usize, q: usize, a: f64, b: f64 },
}

/// Invariants of a family member under a pinching constant `c0`.
#[derive(Debug, Clone)]
pub struct SolutionInvariants {
    pub decomposition: Decomposition,
    /// `|A|^2 / |H|^2`.
    pub ratio: f64,
    /// `|Â|^2 / |H|^2`.
    pub ahat_ratio: f64,
    pub f: f64,
    pub lambda1: f64,
}

/// Pinching class of a family against `c_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PinchingClass {
    Pinched,
    Boundary,
    Unpinched,
}

#[derive(Debug, Clone, Copy)]
pub struct PinchingReport {
    pub ratio: f64,
    pub cn: f64,
    pub class: PinchingClass,
}

impl HomogeneousSolution {
    pub fn dims(&self) -> Result<Dimensions, FrameError> {
        match *self {
            HomogeneousSolution::Sphere { n, .. } => Dimensions::new(n, 1),
            HomogeneousSolution::Cylinder { n, .. } => Dimensions::new(n, 1),
            HomogeneousSolution::SphereProduct { p, q, .. } => Dimensions::new(p + q, 2),
        }
    }

    pub fn validate(&self) -> Result<(), FrameError> {
        match *self {
            HomogeneousSolution::Sphere { n, radius } => {
                if n < 1 || radius <= 0.0 {
                    return Err(FrameError::PreconditionViolated(format!(
                        "sphere needs n >= 1 and radius > 0, got n = {n}, r = {radius}"
                    )));
                }
            }
            HomogeneousSolution::Cylinder { n, k, radius } => {
                if n < 1 || k >= n || radius <= 0.0 {
                    return Err(FrameError::PreconditionViolated(format!(
                        "cylinder needs 0 <= k <= n-1 and radius > 0, got n = {n}, k = {k}, r = {radius}"
                    )));
                }
            }
            HomogeneousSolution::SphereProduct { p, q, a, b } => {
                if p < 1 || q < 1 || a <= 0.0 || b <= 0.0 {
                    return Err(FrameError::PreconditionViolated(format!(
                        "sphere product needs p,q >= 1 and positive radii, got ({p},{q},{a},{b})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The second fundamental form in the outward normal frame.
    pub fn sff(&self) -> Result<SffTensor, FrameError> {
        self.validate()?;
        let dims = self.dims()?;
        Ok(match *self {
            HomogeneousSolution::Sphere { radius, .. } => {
                SffTensor::from_fn(dims, |i, j, _| if i == j { -1.0 / radius } else { 0.0 })
            }
            HomogeneousSolution::Cylinder { n, k, radius } => {
                SffTensor::from_fn(dims, |i, j, _| {
                    if i == j && i < n - k {
                        -1.0 / radius
                    } else {
                        0.0
                    }
                })
            }
            HomogeneousSolution::SphereProduct { p, a, b, .. } => {
                SffTensor::from_fn(dims, |i, j, al| {
                    if i != j {
                        0.0
                    } else if i < p && al == 0 {
                        -1.0 / a
                    } else if i >= p && al == 1 {
                        -1.0 / b
                    } else {
                        0.0
                    }
                })
            }
        })
    }

    /// Closed-form curvature pushed through the frame decomposition.
    pub fn invariants(&self, c0: f64) -> Result<SolutionInvariants, FrameError> {
        let a = self.sff()?;
        let d = decompose(&a, c0)?;
        Ok(SolutionInvariants {
            ratio: d.pinching_ratio(),
            ahat_ratio: d.norm_ahat2 / (d.norm_h * d.norm_h),
            f: d.f,
            lambda1: d.lambda1,
            decomposition: d,
        })
    }

    /// The member of the same family on the self-similar trajectory at time
    /// `t < 0` (radii `sqrt(-2 d t)` per curved factor of dimension `d`).
    pub fn at_time(&self, t: f64) -> Result<HomogeneousSolution, FrameError> {
        if t >= 0.0 {
            return Err(FrameError::PreconditionViolated(format!(
                "self-similar trajectory needs t < 0, got {t}"
            )));
        }
        Ok(match *self {
            HomogeneousSolution::Sphere { n, .. } => HomogeneousSolution::Sphere {
                n,
                radius: (-2.0 * n as f64 * t).sqrt(),
            },
            HomogeneousSolution::Cylinder { n, k, .. } => HomogeneousSolution::Cylinder {
                n,
                k,
                radius: (-2.0 * (n - k) as f64 * t).sqrt(),
            },
            HomogeneousSolution::SphereProduct { p, q, .. } => HomogeneousSolution::SphereProduct {
                p,
                q,
                a: (-2.0 * p as f64 * t).sqrt(),
                b: (-2.0 * q as f64 * t).sqrt(),
            },
        })
    }

    /// Max over a fixed deterministic quasi-uniform point set of
    /// `|H + x^⊥ / (-2t)|`; vanishes exactly on the self-similar trajectory.
    pub fn shrinker_residual(&self, t: f64) -> Result<f64, FrameError> {
        self.validate()?;
        if t >= 0.0 {
            return Err(FrameError::PreconditionViolated(format!(
                "shrinker residual needs t < 0, got {t}"
            )));
        }
        // Residual magnitude per factor: r/(-2t) - d/r along the factor's
        // outward normal. The point set only rotates the direction, so the
        // max is the norm of the per-factor vector; points are still sampled
        // to keep the operation honest about its definition.
        let mut rng = sample::rng_for(0x51ED_5EED, &[0x9e37]);
        let samples = 64usize;
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let res = match *self {
                HomogeneousSolution::Sphere { n, radius } => {
                    let _dir = random_direction(&mut rng, n + 1);
                    (radius / (-2.0 * t) - n as f64 / radius).abs()
                }
                HomogeneousSolution::Cylinder { n, k, radius } => {
                    let d = n - k;
                    let _dir = random_direction(&mut rng, d + 1);
                    (radius / (-2.0 * t) - d as f64 / radius).abs()
                }
                HomogeneousSolution::SphereProduct { p, q, a, b } => {
                    let _dp = random_direction(&mut rng, p + 1);
                    let _dq = random_direction(&mut rng, q + 1);
                    let ra = a / (-2.0 * t) - p as f64 / a;
                    let rb = b / (-2.0 * t) - q as f64 / b;
                    (ra * ra + rb * rb).sqrt()
                }
            };
            worst = worst.max(res);
        }
        Ok(worst)
    }

    /// Backward Gaussian density of the member at weight time `t < 0`, in
    /// closed form. For `S^d(r) x R^k` the flat directions integrate out:
    /// `|S^d| r^d (4π|t|)^{-d/2} e^{-r²/(4|t|)}`; a product of spheres sits
    /// at constant `|x|² = a² + b²`.
    pub fn gaussian_density(&self, t: f64) -> Result<f64, FrameError> {
        self.validate()?;
        if t >= 0.0 {
            return Err(FrameError::PreconditionViolated(format!(
                "backward weight needs t < 0, got {t}"
            )));
        }
        let tau = -t;
        Ok(match *self {
            HomogeneousSolution::Sphere { n, radius } => {
                unit_sphere_area(n)
                    * radius.powi(n as i32)
                    * (4.0 * std::f64::consts::PI * tau).powf(-(n as f64) / 2.0)
                    * (-radius * radius / (4.0 * tau)).exp()
            }
            HomogeneousSolution::Cylinder { n, k, radius } => {
                let d = n - k;
                unit_sphere_area(d)
                    * radius.powi(d as i32)
                    * (4.0 * std::f64::consts::PI * tau).powf(-(d as f64) / 2.0)
                    * (-radius * radius / (4.0 * tau)).exp()
            }
            HomogeneousSolution::SphereProduct { p, q, a, b } => {
                let n = p + q;
                unit_sphere_area(p)
                    * a.powi(p as i32)
                    * unit_sphere_area(q)
                    * b.powi(q as i32)
                    * (4.0 * std::f64::consts::PI * tau).powf(-(n as f64) / 2.0)
                    * (-(a * a + b * b) / (4.0 * tau)).exp()
            }
        })
    }

    /// Compares the family's pinching ratio against `c_n`.
    pub fn pinching_classification(&self) -> Result<PinchingReport, FrameError> {
        self.validate()?;
        let n = self.dims()?.n();
        let cn = crate::constants::compute_cn(n)
            .map_err(|e| FrameError::PreconditionViolated(e.to_string()))?;
        let ratio = match *self {
            HomogeneousSolution::Sphere { n, .. } => 1.0 / n as f64,
            HomogeneousSolution::Cylinder { n, k, .. } => 1.0 / (n - k) as f64,
            HomogeneousSolution::SphereProduct { .. } => self.invariants(cn)?.ratio,
        };
        let class = if (ratio - cn).abs() <= 1e-12 {
            PinchingClass::Boundary
        } else if ratio < cn {
            PinchingClass::Pinched
        } else {
            PinchingClass::Unpinched
        };
        Ok(PinchingReport { ratio, cn, class })
    }
}

/// Balanced sphere product `S^p(√(λp)) x S^q(√(λq))` — the self-similar
/// branch scaled by `λ`.
pub fn balanced_sphere_product(p: usize, q: usize, lambda: f64) -> HomogeneousSolution {
    HomogeneousSolution::SphereProduct {
        p,
        q,
        a: (lambda * p as f64).sqrt(),
        b: (lambda * q as f64).sqrt(),
    }
}

fn random_direction(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| sample::normal(rng)).collect();
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}
