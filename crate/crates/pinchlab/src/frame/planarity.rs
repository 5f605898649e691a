//! Planarity machinery: the `u`-weighted reaction identity, the two gradient
//! identities, and the Young-weighted lower bound with its coefficient table.
//!
//! Throughout, `u = |Â|^2 / f` (the unweighted ratio; the flow monitors use
//! the `f^{1-σ}` normalization instead, see [`crate::flow`]).

use super::reaction::ReactionBlocks;
use super::{
    decompose, reaction_identity, Decomposition, FrameError, GradDerived, GradSffTensor, SffTensor,
};

/// Both sides of the `u`-weighted reaction identity.
#[derive(Debug, Clone, Copy)]
pub struct PlanarityReaction {
    /// `u (c0|⟨A,H⟩|^2 - |⟨A,A⟩|^2 - |R⊥|^2) - |⟨Â,Â⟩|^2 - |R̂⊥|^2 - |R⊥(ν₁)|^2`.
    pub lhs: f64,
    /// The grouped expansion of the same quantity.
    pub rhs: f64,
    pub u: f64,
}

/// Evaluates the planarity reaction identity. Requires `|H| > 0`, `f > 0`,
/// `n c0 > 1`.
pub fn planarity_reaction_identity(
    a: &SffTensor,
    c0: f64,
) -> Result<PlanarityReaction, FrameError> {
    let n = a.dims().n() as f64;
    let nc0 = n * c0;
    if nc0 <= 1.0 {
        return Err(FrameError::InvalidPinchingConstant { nc0 });
    }
    let d = decompose(a, c0)?;
    let u = d.u_ratio()?;
    let raw = reaction_identity(a, c0)?.lhs;
    let b = ReactionBlocks::new(&d);
    let lhs = u * raw - b.s_inner - b.r2 - b.r1;

    let den = nc0 - 1.0;
    let rhs = b.f * b.ahat2 / den
        + b.p_cross
        + 1.5 * b.ahat2 * b.ahat2
        + 2.0 * b.mring2 * b.ahat2
        + (2.0 * u + 1.0) * b.ab_mixed
        + (u + 1.0) * b.ab_hat
        + (u + 2.0) * (1.0 / den - 1.5) * b.ahat2 * b.ahat2
        + (u + 1.0) * (nc0 / den - 4.0) * b.mring2 * b.ahat2;
    Ok(PlanarityReaction { lhs, rhs, u })
}

/// Both displayed gradient identities plus the Kato-type residual.
#[derive(Debug, Clone, Copy)]
pub struct GradientIdentities {
    /// `|∇⊥Â|^2`.
    pub id1_lhs: f64,
    /// Its five-group expansion.
    pub id1_rhs: f64,
    /// `u (|∇⊥A|^2 - c0 |∇⊥H|^2)`.
    pub id2_lhs: f64,
    /// Its four-group expansion.
    pub id2_rhs: f64,
    /// `n(n+2)/(2(n-1)) |⟨∇⊥Å, ν₁⟩|^2 - |∇|H||^2 >= 0` for Codazzi data.
    pub kato_residual: f64,
    pub u: f64,
}

struct GradientTerms<'a> {
    d: &'a Decomposition,
    gd: &'a GradDerived,
}

impl GradientTerms<'_> {
    /// `|X + c Y|^2` where `X = ∇̂⊥Â` and `Y_{kij}^a = y_{ij} (∇⊥_k ν₁)^a`
    /// for a scalar symmetric matrix `y` (either `m̊` or `h`).
    fn hat_plus_matrix_grad_nu1_norm2(&self, y: &[f64]) -> f64 {
        let n = self.d.n();
        let m = self.d.m();
        let mut s = 0.0;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for al in 0..m {
                        let v = self.gd.hat_grad_ahat[((k * n + i) * n + j) * m + al]
                            + y[i * n + j] * self.gd.grad_nu1[k * m + al];
                        s += v * v;
                    }
                }
            }
        }
        s
    }
}

/// Evaluates both gradient identities of the planarity estimate.
pub fn planarity_gradient_identities(
    a: &SffTensor,
    g: &GradSffTensor,
    c0: f64,
) -> Result<GradientIdentities, FrameError> {
    let n = a.dims().n();
    let nf = n as f64;
    let nc0 = nf * c0;
    if nc0 <= 1.0 {
        return Err(FrameError::InvalidPinchingConstant { nc0 });
    }
    let d = decompose(a, c0)?;
    let u = d.u_ratio()?;
    let gd = GradDerived::new(&d, g)?;
    let terms = GradientTerms { d: &d, gd: &gd };

    let grad_nu1_2 = gd.grad_nu1_norm2();
    let h2 = d.norm_h * d.norm_h;
    let den = nc0 - 1.0;
    let cnp = (nf - 1.0) / ((nf + 2.0) * den);

    // First identity: |∇⊥Â|^2 expanded against the m̊-shifted hat gradient.
    let id1_lhs = gd.grad_ahat_norm2();
    let mixed_mring = terms.hat_plus_matrix_grad_nu1_norm2(&d.mring);
    let id1_rhs = (gd.hat_grad_ahat_norm2() + d.norm_mring2 * grad_nu1_2 - 0.5 * mixed_mring)
        + (0.5 * mixed_mring - (nf - 1.0) / (nf * (nf + 2.0)) * h2 * grad_nu1_2)
        + gd.grad_ahat_nu1_norm2()
        + cnp * (d.f + d.norm_ahat2) * grad_nu1_2
        + (cnp - 1.0) * d.norm_mring2 * grad_nu1_2;

    // Second identity: u (|∇⊥A|^2 - c0 |∇⊥H|^2) against the h-shifted one.
    let id2_lhs = u * (g.norm2() - c0 * g.grad_mean_curvature_norm2());
    let ring2 = gd.grad_ring_a_nu1_norm2();
    let grad_normh2 = gd.grad_norm_h_norm2();
    let mixed_h = terms.hat_plus_matrix_grad_nu1_norm2(&d.h);
    let kato_coeff = nf * (nf + 2.0) / (2.0 * (nf - 1.0));
    let id2_rhs = u * (c0 - 1.0 / nf) * (kato_coeff * ring2 - grad_normh2)
        + u * (mixed_h - 3.0 / (nf + 2.0) * h2 * grad_nu1_2)
        + nf / den
            * (3.0 / (nf + 2.0) - c0)
            * (u * d.norm_ahat2 + u * d.norm_mring2 + d.norm_ahat2)
            * grad_nu1_2
        + (1.0 - (nf + 2.0) * den / (2.0 * (nf - 1.0))) * u * ring2;

    let kato_residual = kato_coeff * ring2 - grad_normh2;

    Ok(GradientIdentities {
        id1_lhs,
        id1_rhs,
        id2_lhs,
        id2_rhs,
        kato_residual,
        u,
    })
}

/// The six bracketed coefficients of the final gradient lower bound, in
/// display order. All must be nonnegative for the estimate to close.
#[derive(Debug, Clone, Copy)]
pub struct GradientBoundCoefficients {
    /// On `|⟨∇⊥Â, ν₁⟩|^2`: `1 - a1`.
    pub c_hat_nu1: f64,
    /// On `|Â|^2 |∇⊥ν₁|^2`: `(4n-1)/((n+2)(nc0-1)) - nc0/(nc0-1) - 1/a1`.
    pub c_ahat: f64,
    /// On `f |∇⊥ν₁|^2`: `(n-1)/((n+2)(nc0-1)) - 1/a2`.
    pub c_f: f64,
    /// On `|m̊|^2 |∇⊥ν₁|^2`: `(n-1)/((n+2)(nc0-1)) - 1 - 1/a3`.
    pub c_mring: f64,
    /// On `u |⟨∇⊥Å, ν₁⟩|^2`: `1 - (1+a3)(n+2)(nc0-1)/(2(n-1)) - a2`.
    pub c_ring: f64,
    /// On `(u|Â|^2 + u|m̊|^2) |∇⊥ν₁|^2`: `n/(nc0-1) (3/(n+2) - c0)`.
    pub c_tail: f64,
}

impl GradientBoundCoefficients {
    pub fn new(n: usize, c0: f64, a1: f64, a2: f64, a3: f64) -> Self {
        let nf = n as f64;
        let den = nf * c0 - 1.0;
        Self {
            c_hat_nu1: 1.0 - a1,
            c_ahat: (4.0 * nf - 1.0) / ((nf + 2.0) * den) - nf * c0 / den - 1.0 / a1,
            c_f: (nf - 1.0) / ((nf + 2.0) * den) - 1.0 / a2,
            c_mring: (nf - 1.0) / ((nf + 2.0) * den) - 1.0 - 1.0 / a3,
            c_ring: 1.0 - (1.0 + a3) * (nf + 2.0) * den / (2.0 * (nf - 1.0)) - a2,
            c_tail: nf / den * (3.0 / (nf + 2.0) - c0),
        }
    }

    pub fn as_array(&self) -> [f64; 6] {
        [
            self.c_hat_nu1,
            self.c_ahat,
            self.c_f,
            self.c_mring,
            self.c_ring,
            self.c_tail,
        ]
    }

    pub fn min(&self) -> f64 {
        self.as_array().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Name of the most negative coefficient, if any is negative.
    pub fn negativity_witness(&self) -> Option<(&'static str, f64)> {
        let names = [
            "hat_nu1", "ahat", "f", "mring", "ring", "tail",
        ];
        let vals = self.as_array();
        let (idx, &val) = vals
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())?;
        if val < 0.0 {
            Some((names[idx], val))
        } else {
            None
        }
    }
}

/// Left side, right side, and residual of the final gradient lower bound.
#[derive(Debug, Clone, Copy)]
pub struct GradientBound {
    /// `|∇⊥Â|^2 + u(|∇⊥A|^2 - c0|∇⊥H|^2) - 2 Q_{ijk} ⟨Â_{ij}, ∇⊥_k ν₁⟩`.
    pub lhs: f64,
    /// The coefficient-weighted lower bound.
    pub rhs: f64,
    /// `lhs - rhs`; nonnegative for all Codazzi inputs with `f > 0`.
    pub residual: f64,
    pub coefficients: GradientBoundCoefficients,
}

/// Evaluates the closing gradient bound with Young constants
/// `(a1, a2, a3)`; the sharp choice is `(1, 1/2, 1)`.
pub fn planarity_gradient_bound(
    a: &SffTensor,
    g: &GradSffTensor,
    c0: f64,
    a1: f64,
    a2: f64,
    a3: f64,
) -> Result<GradientBound, FrameError> {
    if a1 <= 0.0 || a2 <= 0.0 || a3 <= 0.0 {
        return Err(FrameError::PreconditionViolated(format!(
            "Young constants must be positive, got ({a1}, {a2}, {a3})"
        )));
    }
    let n = a.dims().n();
    let nf = n as f64;
    let nc0 = nf * c0;
    if nc0 <= 1.0 {
        return Err(FrameError::InvalidPinchingConstant { nc0 });
    }
    let d = decompose(a, c0)?;
    let u = d.u_ratio()?;
    let gd = GradDerived::new(&d, g)?;

    let lhs = gd.grad_ahat_norm2() + u * (g.norm2() - c0 * g.grad_mean_curvature_norm2())
        - gd.q_cross_term(&d);

    let coefficients = GradientBoundCoefficients::new(n, c0, a1, a2, a3);
    let grad_nu1_2 = gd.grad_nu1_norm2();
    let rhs = coefficients.c_hat_nu1 * gd.grad_ahat_nu1_norm2()
        + coefficients.c_ahat * d.norm_ahat2 * grad_nu1_2
        + coefficients.c_f * d.f * grad_nu1_2
        + coefficients.c_mring * d.norm_mring2 * grad_nu1_2
        + coefficients.c_ring * u * gd.grad_ring_a_nu1_norm2()
        + coefficients.c_tail * (u * d.norm_ahat2 + u * d.norm_mring2) * grad_nu1_2;

    Ok(GradientBound {
        lhs,
        rhs,
        residual: lhs - rhs,
        coefficients,
    })
}

/// The Young-inequality split of the cross term: returns
/// `(2 Q·X, bound)` where the bound is the displayed six-term majorant; the
/// first component never exceeds the second for admissible data.
pub fn young_split_check(
    a: &SffTensor,
    g: &GradSffTensor,
    c0: f64,
    a1: f64,
    a2: f64,
    a3: f64,
) -> Result<(f64, f64), FrameError> {
    let d = decompose(a, c0)?;
    let u = d.u_ratio()?;
    let gd = GradDerived::new(&d, g)?;
    let cross = gd.q_cross_term(&d);
    let grad_nu1_2 = gd.grad_nu1_norm2();
    let h2 = d.norm_h * d.norm_h;
    let bound = a2 * u * gd.grad_ring_a_nu1_norm2()
        + d.f / a2 * grad_nu1_2
        + a1 * gd.grad_ahat_nu1_norm2()
        + d.norm_ahat2 / a1 * grad_nu1_2
        + a3 * d.norm_ahat2 / h2 * gd.grad_norm_h_norm2()
        + d.norm_mring2 / a3 * grad_nu1_2;
    Ok((cross, bound))
}
