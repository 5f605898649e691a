//! Codimension-one machinery: the commutator identity and its lower bound in
//! non-convex regions, and the Simons commutator `C = A ⊗ A² - A² ⊗ A`.
//!
//! Scalar convention: a [`ShapeOperator`] `W` has the principal curvatures as
//! eigenvalues and `H = tr W`, nonnegative on mean-convex data. Converting
//! from the vector-valued storage happens only in
//! [`ShapeOperator::from_sff`]: `W = ⟨A, ν₁⟩`, which flips the arbitrary
//! normal-frame sign so that `tr W = |H| > 0`.

use super::{decompose, FrameError, GradSffTensor, SffTensor};
use crate::linalg;

/// Symmetric shape matrix of a hypersurface point, `H = tr W >= 0` for
/// mean-convex data.
#[derive(Debug, Clone)]
pub struct ShapeOperator {
    n: usize,
    w: Vec<f64>,
}

impl ShapeOperator {
    /// Wraps a row-major symmetric `n x n` matrix whose eigenvalues are the
    /// principal curvatures.
    pub fn new(n: usize, w: Vec<f64>) -> Self {
        assert_eq!(w.len(), n * n);
        Self { n, w }
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut w = vec![0.0; n * n];
        for i in 0..n {
            w[i * n + i] = diag[i];
        }
        Self { n, w }
    }

    /// Shape matrix of a codimension-one second fundamental form with
    /// `|H| > 0`: `W = ⟨A, ν₁⟩`.
    pub fn from_sff(a: &SffTensor) -> Result<Self, FrameError> {
        let dims = a.dims();
        if dims.m() != 1 {
            return Err(FrameError::PreconditionViolated(format!(
                "shape operator requires codimension one, got m = {}",
                dims.m()
            )));
        }
        let d = decompose(a, 0.5)?; // c0 irrelevant here
        Ok(Self {
            n: dims.n(),
            w: d.h,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.n + j]
    }

    /// Scalar mean curvature `H = tr W`.
    pub fn mean_curvature(&self) -> f64 {
        (0..self.n).map(|i| self.at(i, i)).sum()
    }

    pub fn norm2(&self) -> f64 {
        linalg::frob2(&self.w)
    }

    /// Principal curvatures, ascending, with the diagonalizing rotation.
    pub fn eigen(&self) -> linalg::SymEigen {
        linalg::sym_eigen(&self.w, self.n)
    }
}

fn require_codim_one(a: &SffTensor, g: &GradSffTensor) -> Result<usize, FrameError> {
    let dims = a.dims();
    if dims.m() != 1 || g.dims().m() != 1 {
        return Err(FrameError::PreconditionViolated(
            "commutator operations require codimension one".into(),
        ));
    }
    if g.dims().n() != dims.n() {
        return Err(FrameError::PreconditionViolated(
            "tensor dimensions disagree".into(),
        ));
    }
    g.require_codazzi()?;
    Ok(dims.n())
}

/// `|A ⊗ ∇A - ∇A ⊗ A|^2` with `(A ⊗ ∇A)_{ijkpq} = A_{ij} ∇_k A_{pq}`,
/// contracted over all five indices. Sign-invariant, frame-invariant.
fn commutator_tensor_norm2(n: usize, a: impl Fn(usize, usize) -> f64, g: impl Fn(usize, usize, usize) -> f64) -> f64 {
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for p in 0..n {
                    for q in 0..n {
                        let t = a(i, j) * g(k, p, q) - g(i, j, k) * a(p, q);
                        total += t * t;
                    }
                }
            }
        }
    }
    total
}

/// Both sides of the exact commutator identity
/// `|∇A|^2 - |∇|A||^2 = |A ⊗ ∇A - ∇A ⊗ A|^2 / (2|A|^2)`,
/// valid for every symmetric Codazzi pair in codimension one with `|A| > 0`.
pub fn commutator_identity(
    a: &SffTensor,
    g: &GradSffTensor,
) -> Result<(f64, f64), FrameError> {
    let n = require_codim_one(a, g)?;
    let norm_a2 = a.norm2();
    if norm_a2 <= f64::MIN_POSITIVE.sqrt() {
        return Err(FrameError::ZeroSff {
            norm_a: norm_a2.sqrt(),
        });
    }
    // ∇_k |A| = ⟨A, ∇_k A⟩ / |A|, componentwise in k.
    let mut grad_norm_a2 = 0.0;
    for k in 0..n {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += a.get(i, j, 0) * g.get(k, i, j, 0);
            }
        }
        grad_norm_a2 += s * s / norm_a2;
    }
    let lhs = g.norm2() - grad_norm_a2;
    let comm = commutator_tensor_norm2(n, |i, j| a.get(i, j, 0), |k, p, q| g.get(k, p, q, 0));
    let rhs = comm / (2.0 * norm_a2);
    Ok((lhs, rhs))
}

/// Outcome of the non-convex commutator lower bound.
#[derive(Debug, Clone, Copy)]
pub struct CommutatorBound {
    /// `|∇A|^2 - |∇|A||^2`.
    pub lhs: f64,
    /// `(ε₀²/(8n²)) |∇A|^2 H^2 / |A|^2`.
    pub rhs: f64,
    /// `|A ⊗ ∇A - ∇A ⊗ A|^2`.
    pub claim_lhs: f64,
    /// `(1/4) Σ_i λ_i² (|∇A|^2 - |∇_i A_{ii}|^2)` in the principal frame.
    pub claim_rhs: f64,
    /// `λ_n - H/n >= 0`.
    pub lambda_n_residual: f64,
    pub lambda1: f64,
    pub mean_curvature: f64,
}

/// Gradient lower bound in the non-convex regime `λ₁ <= -ε₀ H < 0`.
///
/// Diagonalizes the shape matrix, rotates the gradient along, and evaluates
/// the chain `lhs >= claim/(8|A|^2·...) >= rhs` together with the
/// intermediate claim residual.
pub fn commutator_lower_bound(
    a: &SffTensor,
    g: &GradSffTensor,
    eps0: f64,
) -> Result<CommutatorBound, FrameError> {
    let n = require_codim_one(a, g)?;
    if !(0.0..1.0).contains(&eps0) || eps0 == 0.0 {
        return Err(FrameError::PreconditionViolated(format!(
            "eps0 must lie in (0, 1), got {eps0}"
        )));
    }
    // Shape-matrix convention: flip the arbitrary frame sign so tr W > 0.
    let raw_trace: f64 = (0..n).map(|i| a.get(i, i, 0)).sum();
    if raw_trace == 0.0 {
        return Err(FrameError::PreconditionViolated(
            "mean curvature vanishes; the non-convex bound needs H > 0".into(),
        ));
    }
    let sign = raw_trace.signum();
    let w: Vec<f64> = (0..n * n)
        .map(|idx| sign * a.get(idx / n, idx % n, 0))
        .collect();
    let gw = |k: usize, i: usize, j: usize| sign * g.get(k, i, j, 0);

    let h = sign * raw_trace;
    let eig = linalg::sym_eigen(&w, n);
    let lambda1 = eig.values[0];
    let lambda_n = eig.values[n - 1];
    if lambda1 > -eps0 * h {
        return Err(FrameError::ConvexPoint {
            lambda1,
            bound: -eps0 * h,
        });
    }

    let norm_a2 = linalg::frob2(&w);
    let grad2 = g.norm2();
    let mut grad_norm_a2 = 0.0;
    for k in 0..n {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += w[i * n + j] * gw(k, i, j);
            }
        }
        grad_norm_a2 += s * s / norm_a2;
    }
    let lhs = grad2 - grad_norm_a2;
    let rhs = eps0 * eps0 / (8.0 * (n * n) as f64) * grad2 * h * h / norm_a2;

    // Rotate the gradient into the principal frame for the claim.
    let o = &eig.vectors;
    let mut rotated_diag = vec![0.0; n]; // ∇'_i W'_{ii}
    for i in 0..n {
        let mut s = 0.0;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    s += o[x * n + i] * o[y * n + i] * o[z * n + i] * gw(x, y, z);
                }
            }
        }
        rotated_diag[i] = s;
    }
    let claim_lhs = commutator_tensor_norm2(n, |i, j| w[i * n + j], gw);
    let mut claim_rhs = 0.0;
    for i in 0..n {
        claim_rhs += eig.values[i] * eig.values[i] * (grad2 - rotated_diag[i] * rotated_diag[i]);
    }
    claim_rhs *= 0.25;

    Ok(CommutatorBound {
        lhs,
        rhs,
        claim_lhs,
        claim_rhs,
        lambda_n_residual: lambda_n - h / n as f64,
        lambda1,
        mean_curvature: h,
    })
}

/// Simons commutator `C_{ijkl} = A_{ij} (A²)_{kl} - (A²)_{ij} A_{kl}` of a
/// codimension-one second fundamental form, with `|C|^2` both by direct
/// contraction and through the eigenvalue formula
/// `Σ_{ij} λ_i² λ_j² (λ_j - λ_i)²`.
#[derive(Debug, Clone)]
pub struct SimonsCommutator {
    pub n: usize,
    /// Row-major `(i, j, k, l)`.
    pub c: Vec<f64>,
    pub norm2: f64,
    pub norm2_eigen: f64,
}

pub fn simons_commutator(a: &SffTensor) -> Result<SimonsCommutator, FrameError> {
    let dims = a.dims();
    if dims.m() != 1 {
        return Err(FrameError::PreconditionViolated(format!(
            "Simons commutator requires codimension one, got m = {}",
            dims.m()
        )));
    }
    let n = dims.n();
    let mut sq = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for k in 0..n {
                s += a.get(i, k, 0) * a.get(k, j, 0);
            }
            sq[i * n + j] = s;
        }
    }
    let mut c = vec![0.0; n * n * n * n];
    let mut norm2 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = a.get(i, j, 0) * sq[k * n + l] - sq[i * n + j] * a.get(k, l, 0);
                    c[((i * n + j) * n + k) * n + l] = v;
                    norm2 += v * v;
                }
            }
        }
    }
    let w: Vec<f64> = (0..n * n).map(|idx| a.get(idx / n, idx % n, 0)).collect();
    let eig = linalg::sym_eigen(&w, n);
    let mut norm2_eigen = 0.0;
    for i in 0..n {
        for j in 0..n {
            let li = eig.values[i];
            let lj = eig.values[j];
            norm2_eigen += li * li * lj * lj * (lj - li) * (lj - li);
        }
    }
    Ok(SimonsCommutator {
        n,
        c,
        norm2,
        norm2_eigen,
    })
}

/// Weighted Poincaré ingredient: on `{λ₁ <= -ε̄ H}` with `|A| <= L H`,
/// `|C|^2 >= α |A|^2 H^4` for `α = ε̄²/(L² n⁴)`. Returns
/// `(|C|^2, α |A|^2 H^4)` after validating the hypotheses.
pub fn simons_lower_bound(
    shape: &ShapeOperator,
    eps_bar: f64,
    big_l: f64,
) -> Result<(f64, f64), FrameError> {
    let n = shape.n();
    let h = shape.mean_curvature();
    if h <= 0.0 {
        return Err(FrameError::PreconditionViolated(
            "Simons lower bound needs H > 0".into(),
        ));
    }
    let eig = shape.eigen();
    let lambda1 = eig.values[0];
    if lambda1 > -eps_bar * h {
        return Err(FrameError::ConvexPoint {
            lambda1,
            bound: -eps_bar * h,
        });
    }
    let norm2 = shape.norm2();
    if norm2.sqrt() > big_l * h * (1.0 + 1e-12) {
        return Err(FrameError::PreconditionViolated(format!(
            "pinching |A| <= L H violated: |A| = {}, L H = {}",
            norm2.sqrt(),
            big_l * h
        )));
    }
    let mut c2 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let li = eig.values[i];
            let lj = eig.values[j];
            c2 += li * li * lj * lj * (lj - li) * (lj - li);
        }
    }
    let alpha = eps_bar * eps_bar / (big_l * big_l * (n * n * n * n) as f64);
    Ok((c2, alpha * norm2 * h.powi(4)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::Dimensions;

    fn scalar_sff(n: usize, w: &[f64]) -> SffTensor {
        SffTensor::from_scalar_matrix(n, w).unwrap()
    }

    #[test]
    fn identity_zero_gradient() {
        let a = scalar_sff(3, &[1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 3.0]);
        let g = GradSffTensor::zeros(Dimensions::new(3, 1).unwrap());
        let (lhs, rhs) = commutator_identity(&a, &g).unwrap();
        assert_eq!(lhs, 0.0);
        assert_eq!(rhs, 0.0);
    }

    #[test]
    fn identity_sphere_like() {
        // A = Id with a generic Codazzi gradient.
        let n = 3;
        let a = scalar_sff(n, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        let g = GradSffTensor::from_scalar_fn(n, |k, i, j| {
            ((k + 1) * 13 + (i + 1) * 7 + (j + 1) * 3) as f64 * 0.01
        })
        .unwrap();
        let (lhs, rhs) = commutator_identity(&a, &g).unwrap();
        let rel = (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1e-30);
        assert!(rel < 1e-13, "lhs {lhs} rhs {rhs}");
    }

    #[test]
    fn zero_sff_rejected() {
        let dims = Dimensions::new(2, 1).unwrap();
        let a = SffTensor::zeros(dims);
        let g = GradSffTensor::zeros(dims);
        assert!(matches!(
            commutator_identity(&a, &g),
            Err(FrameError::ZeroSff { .. })
        ));
    }

    #[test]
    fn lower_bound_with_concentrated_gradient() {
        // λ₁ = -ε₀ H exactly, gradient concentrated on ∇_n A_{nn}.
        let n = 3;
        let eps0 = 0.2;
        // Choose diag(λ1, 2, 2) with λ1 = -eps0 * (λ1 + 4): λ1 = -0.8/1.2.
        let l1 = -eps0 * 4.0 / (1.0 + eps0);
        let a = scalar_sff(n, &[l1, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 2.0]);
        let g = GradSffTensor::from_scalar_fn(n, |k, i, j| {
            if k == n - 1 && i == n - 1 && j == n - 1 {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        let b = commutator_lower_bound(&a, &g, eps0).unwrap();
        assert!(b.lhs >= b.rhs, "lhs {} rhs {}", b.lhs, b.rhs);
        assert!(b.claim_lhs >= b.claim_rhs - 1e-12);
        assert!(b.lambda_n_residual >= -1e-13);
    }

    #[test]
    fn convex_point_rejected() {
        let a = scalar_sff(2, &[1.0, 0.0, 0.0, 2.0]);
        let g = GradSffTensor::zeros(Dimensions::new(2, 1).unwrap());
        assert!(matches!(
            commutator_lower_bound(&a, &g, 0.1),
            Err(FrameError::ConvexPoint { .. })
        ));
    }

    #[test]
    fn umbilic_commutes() {
        let a = scalar_sff(3, &[2.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 2.0]);
        let s = simons_commutator(&a).unwrap();
        assert_eq!(s.norm2, 0.0);
        assert!(s.norm2_eigen.abs() < 1e-26);
    }

    #[test]
    fn simons_frozen_example() {
        // diag(-1, 2, 2): |C|^2 = 144; with ε̄ = 1/3, L = 1 the lower bound
        // α |A|^2 H^4 evaluates to exactly 1.
        let a = scalar_sff(3, &[-1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 2.0]);
        let s = simons_commutator(&a).unwrap();
        assert!((s.norm2 - 144.0).abs() < 1e-10);
        assert!((s.norm2_eigen - 144.0).abs() < 1e-10);
        let shape = ShapeOperator::from_diag(&[-1.0, 2.0, 2.0]);
        let (c2, bound) = simons_lower_bound(&shape, 1.0 / 3.0, 1.0).unwrap();
        assert!((c2 - 144.0).abs() < 1e-10);
        assert!((bound - 1.0).abs() < 1e-12);
        assert!(c2 >= bound);
    }
}
