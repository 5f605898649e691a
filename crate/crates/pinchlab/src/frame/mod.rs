//! Pointwise curvature algebra in an orthonormal tangent/normal frame.
//!
//! All tensors live at a single point of an `n`-dimensional submanifold of
//! `R^{n+m}`. The metric on tangent indices is the identity, the normal frame
//! is orthonormal, so contractions are plain index sums.
//!
//! Two sign conventions coexist in the estimates this crate checks. The
//! vector-valued convention stores `A_{ij}^alpha` with mean curvature vector
//! `H^alpha = sum_i A_{ii}^alpha`; principal-normal quantities (`h`, `m̊`,
//! `Â`) come out of [`decompose`](decomp::decompose). The codimension-one
//! scalar convention works with a shape matrix `W` whose eigenvalues are the
//! principal curvatures and whose trace is the (nonnegative, for mean-convex
//! data) scalar mean curvature; see [`hypersurface`]. The conversion is
//! `W = h` once a principal normal exists, and it is performed in exactly one
//! place ([`hypersurface::ShapeOperator::from_sff`]).

mod decomp;
mod grad;
pub mod hypersurface;
mod planarity;
mod reaction;

pub use decomp::{decompose, normal_curvature, Decomposition, NormalCurvature};
pub use grad::GradDerived;
pub use planarity::{
    planarity_gradient_bound, planarity_gradient_identities, planarity_reaction_identity,
    young_split_check, GradientBound, GradientBoundCoefficients, GradientIdentities,
    PlanarityReaction,
};
pub use reaction::{
    basic_inequalities, reaction_identity, reaction_nonnegativity, BasicInequalities,
    ReactionIdentity,
};

use thiserror::Error;

/// Errors raised by pointwise frame-algebra operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("mean curvature vanishes (|H| = {norm_h:.3e} <= {threshold:.3e}); decomposition undefined")]
    MeanCurvatureVanishes { norm_h: f64, threshold: f64 },
    #[error("invalid pinching constant: n*c0 = {nc0} must exceed 1")]
    InvalidPinchingConstant { nc0: f64 },
    #[error("pinching violated: f = {f:.6e} <= 0")]
    PinchingViolated { f: f64 },
    #[error("Codazzi symmetry violated: max asymmetry {max_asym:.3e} exceeds {tol:.3e}")]
    CodazziViolation { max_asym: f64, tol: f64 },
    #[error("second fundamental form vanishes (|A| = {norm_a:.3e})")]
    ZeroSff { norm_a: f64 },
    #[error("point is not in the non-convex regime: lambda_1 = {lambda1:.6e} > {bound:.6e}")]
    ConvexPoint { lambda1: f64, bound: f64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("invalid dimensions: n = {n}, m = {m}")]
    InvalidDimensions { n: usize, m: usize },
}

/// Intrinsic dimension `n` and codimension `m` of the ambient picture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dimensions {
    n: usize,
    m: usize,
}

impl Dimensions {
    pub fn new(n: usize, m: usize) -> Result<Self, FrameError> {
        if n < 1 || m < 1 {
            return Err(FrameError::InvalidDimensions { n, m });
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Ambient dimension `N = n + m`.
    pub fn ambient(&self) -> usize {
        self.n + self.m
    }
}

/// Vector-valued second fundamental form `A_{ij}^alpha` at one point.
///
/// Stored row-major over `(i, j, alpha)`; symmetric in `(i, j)` by
/// construction. Units are 1/length.
#[derive(Debug, Clone, PartialEq)]
pub struct SffTensor {
    dims: Dimensions,
    a: Vec<f64>,
}

impl SffTensor {
    pub fn zeros(dims: Dimensions) -> Self {
        let len = dims.n * dims.n * dims.m;
        Self {
            dims,
            a: vec![0.0; len],
        }
    }

    /// Builds from a generator on `(i, j, alpha)`, symmetrizing in `(i, j)`.
    pub fn from_fn(dims: Dimensions, f: impl Fn(usize, usize, usize) -> f64) -> Self {
        let mut t = Self::zeros(dims);
        for i in 0..dims.n {
            for j in i..dims.n {
                for al in 0..dims.m {
                    let v = 0.5 * (f(i, j, al) + f(j, i, al));
                    t.set(i, j, al, v);
                }
            }
        }
        t
    }

    /// Builds a codimension-one tensor from a scalar symmetric matrix
    /// (row-major `n x n`), symmetrizing.
    pub fn from_scalar_matrix(n: usize, w: &[f64]) -> Result<Self, FrameError> {
        let dims = Dimensions::new(n, 1)?;
        assert_eq!(w.len(), n * n);
        Ok(Self::from_fn(dims, |i, j, _| w[i * n + j]))
    }

    pub fn dims(&self) -> Dimensions {
        self.dims
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, alpha: usize) -> f64 {
        self.a[(i * self.dims.n + j) * self.dims.m + alpha]
    }

    /// Sets `A_{ij}^alpha` and `A_{ji}^alpha` together.
    pub fn set(&mut self, i: usize, j: usize, alpha: usize, v: f64) {
        let n = self.dims.n;
        let m = self.dims.m;
        self.a[(i * n + j) * m + alpha] = v;
        self.a[(j * n + i) * m + alpha] = v;
    }

    /// Mean curvature vector `H^alpha = sum_i A_{ii}^alpha`.
    pub fn mean_curvature(&self) -> Vec<f64> {
        let mut h = vec![0.0; self.dims.m];
        for al in 0..self.dims.m {
            for i in 0..self.dims.n {
                h[al] += self.get(i, i, al);
            }
        }
        h
    }

    /// `|A|^2` by full contraction.
    pub fn norm2(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm2().sqrt()
    }

    /// Raw `|R^perp|^2`, the full-sum norm of the normal curvature
    /// `R^perp_{ij,ab} = A_{ik}^a A_{jk}^b - A_{jk}^a A_{ik}^b`, contracted
    /// directly from this tensor (both tangent orders and both normal orders
    /// counted). This is the quantity appearing in the reaction identities.
    pub fn normal_curvature_norm2_raw(&self) -> f64 {
        let n = self.dims.n;
        let m = self.dims.m;
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                for a in 0..m {
                    for b in 0..m {
                        let mut r = 0.0;
                        for k in 0..n {
                            r += self.get(i, k, a) * self.get(j, k, b)
                                - self.get(j, k, a) * self.get(i, k, b);
                        }
                        total += r * r;
                    }
                }
            }
        }
        total
    }

    /// `|<A, A>|^2 = sum_{ijpq} (sum_a A_{ij}^a A_{pq}^a)^2`.
    pub fn inner_aa_norm2(&self) -> f64 {
        let n = self.dims.n;
        let m = self.dims.m;
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                for p in 0..n {
                    for q in 0..n {
                        let mut s = 0.0;
                        for a in 0..m {
                            s += self.get(i, j, a) * self.get(p, q, a);
                        }
                        total += s * s;
                    }
                }
            }
        }
        total
    }

    /// `|<A, H>|^2 = sum_{ij} (sum_a A_{ij}^a H^a)^2` with `H` the mean
    /// curvature vector of this tensor.
    pub fn inner_ah_norm2(&self) -> f64 {
        let n = self.dims.n;
        let m = self.dims.m;
        let h = self.mean_curvature();
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for a in 0..m {
                    s += self.get(i, j, a) * h[a];
                }
                total += s * s;
            }
        }
        total
    }
}

/// Covariant derivative `∇⊥_k A_{ij}^alpha` at one point, fully symmetric in
/// the tangent slots `(k, i, j)` (Codazzi, flat ambient space). Units are
/// 1/length^2.
#[derive(Debug, Clone, PartialEq)]
pub struct GradSffTensor {
    dims: Dimensions,
    g: Vec<f64>,
}

impl GradSffTensor {
    pub fn zeros(dims: Dimensions) -> Self {
        let len = dims.n * dims.n * dims.n * dims.m;
        Self {
            dims,
            g: vec![0.0; len],
        }
    }

    /// Builds from a generator on `(k, i, j, alpha)` by symmetrizing over all
    /// six permutations of `(k, i, j)`. The average is computed once per
    /// orbit so the stored tensor is exactly symmetric.
    pub fn from_fn_symmetrized(dims: Dimensions, f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let n = dims.n;
        let mut t = Self::zeros(dims);
        for k in 0..n {
            for i in k..n {
                for j in i..n {
                    for al in 0..dims.m {
                        let v = (f(k, i, j, al)
                            + f(k, j, i, al)
                            + f(i, k, j, al)
                            + f(i, j, k, al)
                            + f(j, k, i, al)
                            + f(j, i, k, al))
                            / 6.0;
                        t.set_orbit(k, i, j, al, v);
                    }
                }
            }
        }
        t
    }

    /// Codimension-one constructor from a fully symmetric scalar 3-tensor
    /// generator; symmetrizes like [`Self::from_fn_symmetrized`].
    pub fn from_scalar_fn(n: usize, f: impl Fn(usize, usize, usize) -> f64) -> Result<Self, FrameError> {
        let dims = Dimensions::new(n, 1)?;
        Ok(Self::from_fn_symmetrized(dims, |k, i, j, _| f(k, i, j)))
    }

    pub fn dims(&self) -> Dimensions {
        self.dims
    }

    #[inline]
    pub fn get(&self, k: usize, i: usize, j: usize, alpha: usize) -> f64 {
        let n = self.dims.n;
        self.g[((k * n + i) * n + j) * self.dims.m + alpha]
    }

    /// Writes the same value to all six permutations of `(k, i, j)`.
    pub fn set_orbit(&mut self, k: usize, i: usize, j: usize, alpha: usize, v: f64) {
        let n = self.dims.n;
        let m = self.dims.m;
        for (a, b, c) in [(k, i, j), (k, j, i), (i, k, j), (i, j, k), (j, k, i), (j, i, k)] {
            self.g[((a * n + b) * n + c) * m + alpha] = v;
        }
    }

    /// `|∇⊥A|^2`.
    pub fn norm2(&self) -> f64 {
        self.g.iter().map(|x| x * x).sum()
    }

    /// `∇⊥_k H^alpha = sum_i ∇⊥_k A_{ii}^alpha`, row-major `(k, alpha)`.
    pub fn grad_mean_curvature(&self) -> Vec<f64> {
        let n = self.dims.n;
        let m = self.dims.m;
        let mut out = vec![0.0; n * m];
        for k in 0..n {
            for al in 0..m {
                let mut s = 0.0;
                for i in 0..n {
                    s += self.get(k, i, i, al);
                }
                out[k * m + al] = s;
            }
        }
        out
    }

    /// `|∇⊥H|^2`.
    pub fn grad_mean_curvature_norm2(&self) -> f64 {
        self.grad_mean_curvature().iter().map(|x| x * x).sum()
    }

    /// Largest deviation from full `(k, i, j)` symmetry, relative check for
    /// callers that accept external data.
    pub fn max_asymmetry(&self) -> f64 {
        let n = self.dims.n;
        let mut worst: f64 = 0.0;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for al in 0..self.dims.m {
                        let v = self.get(k, i, j, al);
                        for (a, b, c) in [(k, j, i), (i, k, j), (i, j, k), (j, k, i), (j, i, k)] {
                            worst = worst.max((v - self.get(a, b, c, al)).abs());
                        }
                    }
                }
            }
        }
        worst
    }

    /// Errors with [`FrameError::CodazziViolation`] when the tensor is not
    /// fully symmetric to `1e-9` relative.
    pub fn require_codazzi(&self) -> Result<(), FrameError> {
        let scale = self.norm2().sqrt().max(1e-300);
        let tol = 1e-9 * scale;
        let asym = self.max_asymmetry();
        if asym > tol {
            return Err(FrameError::CodazziViolation {
                max_asym: asym,
                tol,
            });
        }
        Ok(())
    }
}

/// Homogeneity-correct slack for inequality checks: `1e-9 * scale^degree`
/// with `scale = |A| + |G|^{1/2}` (units 1/length).
pub fn inequality_tolerance(scale: f64, degree: i32) -> f64 {
    1e-9 * scale.powi(degree)
}

/// Relative residual `|lhs - rhs| / max(|lhs|, |rhs|, floor)`.
pub fn relative_residual(lhs: f64, rhs: f64, floor: f64) -> f64 {
    (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(floor)
}
