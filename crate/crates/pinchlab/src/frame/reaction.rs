//! Reaction-term identity and the basic quadratic inequalities.
//!
//! The reaction quantity driving the evolution of `f = c0 |H|^2 - |A|^2` is
//! `c0 |⟨A,H⟩|^2 - |⟨A,A⟩|^2 - |R⊥|^2`. With a principal normal present it
//! expands exactly into pinching-weighted nonnegative blocks; both routes are
//! computed here so the residual can be driven to round-off in tests.

use super::{decompose, normal_curvature, Decomposition, FrameError, GradSffTensor, SffTensor};

/// Both sides of the reaction expansion.
#[derive(Debug, Clone, Copy)]
pub struct ReactionIdentity {
    /// `c0 |⟨A,H⟩|^2 - |⟨A,A⟩|^2 - |R⊥|^2` from raw contractions of `A`.
    pub lhs: f64,
    /// The expanded right-hand side assembled from the decomposition.
    pub rhs: f64,
    /// The three leading pinching terms
    /// `2/(n c0 - 1) |Â|^2 f + n c0/(n c0 - 1) |m̊|^2 f + f^2/(n c0 - 1)`.
    pub pinching_part: f64,
    /// `rhs - pinching_part`; nonnegative whenever `f >= 0` and
    /// `c0 <= 4/(3n)`.
    pub remainder: f64,
}

fn check_nc0(n: usize, c0: f64) -> Result<f64, FrameError> {
    let nc0 = n as f64 * c0;
    if nc0 <= 1.0 {
        return Err(FrameError::InvalidPinchingConstant { nc0 });
    }
    Ok(nc0)
}

/// Expanded reaction terms from a decomposition (shared by the plain and the
/// `u`-weighted identities).
pub(crate) struct ReactionBlocks {
    pub f: f64,
    pub ahat2: f64,
    pub mring2: f64,
    /// `|m̊_{ij} Â_{ij}|^2`.
    pub p_cross: f64,
    /// `|⟨Â,Â⟩|^2`.
    pub s_inner: f64,
    /// `|R⊥(ν₁)|^2` (single count).
    pub r1: f64,
    /// `|R̂⊥|^2`.
    pub r2: f64,
    /// Andrews–Baker block `2|m̊|^2|Â|^2 - |m̊Â|^2 - |R⊥(ν₁)|^2`.
    pub ab_mixed: f64,
    /// Andrews–Baker block `(3/2)|Â|^4 - |⟨Â,Â⟩|^2 - |R̂⊥|^2`.
    pub ab_hat: f64,
}

impl ReactionBlocks {
    pub fn new(d: &Decomposition) -> Self {
        let nc = normal_curvature(d);
        let p_cross = d.mring_ahat_contraction_norm2();
        let s_inner = d.inner_ahat_ahat_norm2();
        let ab_mixed = 2.0 * d.norm_mring2 * d.norm_ahat2 - p_cross - nc.norm2_rperp_nu1;
        let ab_hat = 1.5 * d.norm_ahat2 * d.norm_ahat2 - s_inner - nc.norm2_rhat;
        Self {
            f: d.f,
            ahat2: d.norm_ahat2,
            mring2: d.norm_mring2,
            p_cross,
            s_inner,
            r1: nc.norm2_rperp_nu1,
            r2: nc.norm2_rhat,
            ab_mixed,
            ab_hat,
        }
    }
}

/// Evaluates both routes of the reaction identity.
///
/// `lhs` uses nothing but raw contractions of `A`; `rhs` uses the
/// decomposition-based expansion. They agree to round-off for every symmetric
/// `A` with `|H| > 0` and `n c0 > 1`.
pub fn reaction_identity(a: &SffTensor, c0: f64) -> Result<ReactionIdentity, FrameError> {
    let n = a.dims().n();
    let nc0 = check_nc0(n, c0)?;
    let d = decompose(a, c0)?;
    let lhs = c0 * a.inner_ah_norm2() - a.inner_aa_norm2() - a.normal_curvature_norm2_raw();

    let b = ReactionBlocks::new(&d);
    let den = nc0 - 1.0;
    let pinching_part =
        (2.0 * b.ahat2 * b.f + nc0 * b.mring2 * b.f + b.f * b.f) / den;
    let remainder = 2.0 * b.ab_mixed
        + b.ab_hat
        + (1.0 / den - 1.5) * b.ahat2 * b.ahat2
        + (nc0 / den - 4.0) * b.mring2 * b.ahat2;
    Ok(ReactionIdentity {
        lhs,
        rhs: pinching_part + remainder,
        pinching_part,
        remainder,
    })
}

/// Checks the sign structure of the reaction terms: under `f >= 0` and
/// `c0 <= 4/(3n)` the identity's left side dominates the pinching part, i.e.
/// the remainder is nonnegative up to the homogeneity-correct slack.
pub fn reaction_nonnegativity(a: &SffTensor, c0: f64) -> Result<bool, FrameError> {
    let n = a.dims().n();
    check_nc0(n, c0)?;
    if c0 > 4.0 / (3.0 * n as f64) + 1e-15 {
        return Err(FrameError::PreconditionViolated(format!(
            "c0 = {c0} exceeds 4/(3n) = {}",
            4.0 / (3.0 * n as f64)
        )));
    }
    let id = reaction_identity(a, c0)?;
    let d = decompose(a, c0)?;
    if d.f < 0.0 {
        return Err(FrameError::PreconditionViolated(format!(
            "f = {} is negative",
            d.f
        )));
    }
    let scale = a.norm();
    let tol = super::inequality_tolerance(scale, 4);
    Ok(id.lhs >= id.pinching_part - tol)
}

/// The three basic residuals, all nonnegative for Codazzi data:
/// `r1 = (n+2)/3 |∇⊥A|^2 - |∇⊥H|^2`,
/// `r2 = 2|m̊|^2|Â|^2 - |m̊Â|^2 - |R⊥(ν₁)|^2`,
/// `r3 = (3/2)|Â|^4 - |⟨Â,Â⟩|^2 - |R̂⊥|^2`.
#[derive(Debug, Clone, Copy)]
pub struct BasicInequalities {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

/// Computes the Andrews–Baker/Huisken residuals from `(A, ∇⊥A)`.
pub fn basic_inequalities(
    a: &SffTensor,
    g: &GradSffTensor,
) -> Result<BasicInequalities, FrameError> {
    g.require_codazzi()?;
    let n = a.dims().n() as f64;
    let r1 = (n + 2.0) / 3.0 * g.norm2() - g.grad_mean_curvature_norm2();
    let d = decompose(a, 0.5)?; // c0 irrelevant for r2, r3
    let b = ReactionBlocks::new(&d);
    Ok(BasicInequalities {
        r1,
        r2: b.ab_mixed,
        r3: b.ab_hat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{relative_residual, Dimensions};

    fn cylinder_sff(n: usize, k: usize, r: f64) -> SffTensor {
        let dims = Dimensions::new(n, 1).unwrap();
        SffTensor::from_fn(dims, |i, j, _| {
            if i == j && i < n - k {
                -1.0 / r
            } else {
                0.0
            }
        })
    }

    #[test]
    fn cylinder_reaction_closed_form() {
        // S^4(1) x R, c0 = 9/35: lhs = |A|^2 f = 4 * (4/35) = 16/35.
        let a = cylinder_sff(5, 1, 1.0);
        let id = reaction_identity(&a, 9.0 / 35.0).unwrap();
        let expect = 16.0 / 35.0;
        assert!((id.lhs - expect).abs() < 1e-13, "lhs = {}", id.lhs);
        assert!(relative_residual(id.lhs, id.rhs, 1e-30) < 1e-13);
    }

    #[test]
    fn codim_one_identity_reduces_to_hypersurface_case() {
        let dims = Dimensions::new(4, 1).unwrap();
        let a = SffTensor::from_fn(dims, |i, j, _| 0.3 * (1 + i + j) as f64 + if i == j { 1.0 } else { 0.0 });
        let id = reaction_identity(&a, 0.3).unwrap();
        assert!(relative_residual(id.lhs, id.rhs, 1e-30) < 1e-12);
    }

    #[test]
    fn invalid_pinching_constant_rejected() {
        let a = cylinder_sff(3, 1, 1.0);
        assert!(matches!(
            reaction_identity(&a, 0.2),
            Err(FrameError::InvalidPinchingConstant { .. })
        ));
    }

    #[test]
    fn sphere_nonnegativity_holds() {
        let dims = Dimensions::new(3, 1).unwrap();
        let a = SffTensor::from_fn(dims, |i, j, _| if i == j { -1.0 } else { 0.0 });
        assert!(reaction_nonnegativity(&a, 4.0 / 9.0).unwrap());
    }

    #[test]
    fn zero_gradient_r1_is_zero() {
        let dims = Dimensions::new(3, 2).unwrap();
        let a = SffTensor::from_fn(dims, |i, j, al| if i == j && al == 0 { 1.0 } else { 0.0 });
        let g = GradSffTensor::zeros(dims);
        let b = basic_inequalities(&a, &g).unwrap();
        assert_eq!(b.r1, 0.0);
        assert!(b.r2.abs() < 1e-26 && b.r3.abs() < 1e-26);
    }

    #[test]
    fn ab_sharp_configuration_r2() {
        // m̊ = diag(1,-1), Â in one extra normal direction with off-diagonal
        // pattern: r2 degenerates to zero (the extremal case).
        let dims = Dimensions::new(2, 2).unwrap();
        let a = SffTensor::from_fn(dims, |i, j, al| match (i, j, al) {
            (0, 0, 0) => 3.0,
            (1, 1, 0) => 1.0,
            (0, 1, 1) | (1, 0, 1) => 1.0,
            _ => 0.0,
        });
        let g = GradSffTensor::zeros(dims);
        let b = basic_inequalities(&a, &g).unwrap();
        assert!(b.r2.abs() < 1e-13, "r2 = {}", b.r2);
        assert!(b.r3 >= -1e-13);
    }
}
