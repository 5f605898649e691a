//! Principal-normal decomposition `A = h ⊗ ν₁ + Â` and normal curvature.

use super::{Dimensions, FrameError, SffTensor};
use crate::linalg;

/// Derived pointwise quantities of a second fundamental form with `|H| > 0`.
///
/// `h` is the principal scalar component `⟨A, ν₁⟩` (an `n x n` symmetric
/// matrix), `mring` its traceless part, and `ahat` the vector-valued
/// complement of `h ⊗ ν₁` in `A`. The pinching scalar is
/// `f = c0 |H|^2 - |A|^2`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub dims: Dimensions,
    pub c0: f64,
    /// Mean curvature vector `H^alpha`.
    pub h_vec: Vec<f64>,
    /// `|H|`.
    pub norm_h: f64,
    /// Principal unit normal `ν₁ = H / |H|`.
    pub nu1: Vec<f64>,
    /// `h_{ij} = ⟨A_{ij}, ν₁⟩`, row-major `n x n`.
    pub h: Vec<f64>,
    /// Traceless part `m̊ = h - (|H|/n) Id`.
    pub mring: Vec<f64>,
    /// `Â_{ij}^alpha = A_{ij}^alpha - h_{ij} ν₁^alpha`, row-major `(i, j, alpha)`.
    pub ahat: Vec<f64>,
    /// Smallest eigenvalue of the shape matrix `h`.
    pub lambda1: f64,
    /// `f = c0 |H|^2 - |A|^2`.
    pub f: f64,
    /// `|A|^2`.
    pub norm_a2: f64,
    /// `|h|^2`.
    pub norm_h_mat2: f64,
    /// `|m̊|^2`.
    pub norm_mring2: f64,
    /// `|Â|^2`.
    pub norm_ahat2: f64,
}

impl Decomposition {
    pub fn n(&self) -> usize {
        self.dims.n()
    }

    pub fn m(&self) -> usize {
        self.dims.m()
    }

    #[inline]
    pub fn h_at(&self, i: usize, j: usize) -> f64 {
        self.h[i * self.dims.n() + j]
    }

    #[inline]
    pub fn mring_at(&self, i: usize, j: usize) -> f64 {
        self.mring[i * self.dims.n() + j]
    }

    #[inline]
    pub fn ahat_at(&self, i: usize, j: usize, alpha: usize) -> f64 {
        self.ahat[(i * self.dims.n() + j) * self.dims.m() + alpha]
    }

    /// Pinching ratio `|A|^2 / |H|^2`.
    pub fn pinching_ratio(&self) -> f64 {
        self.norm_a2 / (self.norm_h * self.norm_h)
    }

    /// `u = |Â|^2 / f`; requires `f > 0`.
    pub fn u_ratio(&self) -> Result<f64, FrameError> {
        if self.f <= 0.0 {
            return Err(FrameError::PinchingViolated { f: self.f });
        }
        Ok(self.norm_ahat2 / self.f)
    }

    /// `|m̊_{ij} Â_{ij}|^2` — the squared norm of the vector obtained by
    /// contracting `m̊` against `Â` in the tangent slots.
    pub fn mring_ahat_contraction_norm2(&self) -> f64 {
        let n = self.n();
        let m = self.m();
        let mut total = 0.0;
        for al in 0..m {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += self.mring_at(i, j) * self.ahat_at(i, j, al);
                }
            }
            total += s * s;
        }
        total
    }

    /// `|⟨Â, Â⟩|^2 = sum_{ijpq} (sum_a Â_{ij}^a Â_{pq}^a)^2`.
    pub fn inner_ahat_ahat_norm2(&self) -> f64 {
        let n = self.n();
        let m = self.m();
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                for p in 0..n {
                    for q in 0..n {
                        let mut s = 0.0;
                        for a in 0..m {
                            s += self.ahat_at(i, j, a) * self.ahat_at(p, q, a);
                        }
                        total += s * s;
                    }
                }
            }
        }
        total
    }

    /// Maximum entry of `A - (h ⊗ ν₁ + Â)`; zero up to round-off by
    /// construction, exposed so tests can assert the reconstruction.
    pub fn reconstruction_residual(&self, a: &SffTensor) -> f64 {
        let n = self.n();
        let m = self.m();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for al in 0..m {
                    let rebuilt = self.h_at(i, j) * self.nu1[al] + self.ahat_at(i, j, al);
                    worst = worst.max((a.get(i, j, al) - rebuilt).abs());
                }
            }
        }
        worst
    }
}

/// Decomposes `A` along its principal normal.
///
/// Fails with [`FrameError::MeanCurvatureVanishes`] when `|H| <= 1e-12 |A|`
/// (the flat/static branch is the caller's business).
pub fn decompose(a: &SffTensor, c0: f64) -> Result<Decomposition, FrameError> {
    let dims = a.dims();
    let n = dims.n();
    let m = dims.m();
    let h_vec = a.mean_curvature();
    let norm_h2: f64 = h_vec.iter().map(|x| x * x).sum();
    let norm_h = norm_h2.sqrt();
    let norm_a2 = a.norm2();
    let threshold = 1e-12 * norm_a2.sqrt();
    if norm_h <= threshold {
        return Err(FrameError::MeanCurvatureVanishes {
            norm_h,
            threshold,
        });
    }

    let nu1: Vec<f64> = h_vec.iter().map(|x| x / norm_h).collect();

    let mut h = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for al in 0..m {
                s += a.get(i, j, al) * nu1[al];
            }
            h[i * n + j] = s;
        }
    }

    let mean = norm_h / n as f64;
    let mut mring = h.clone();
    for i in 0..n {
        mring[i * n + i] -= mean;
    }

    let mut ahat = vec![0.0; n * n * m];
    for i in 0..n {
        for j in 0..n {
            for al in 0..m {
                ahat[(i * n + j) * m + al] = a.get(i, j, al) - h[i * n + j] * nu1[al];
            }
        }
    }

    let lambda1 = linalg::min_eigenvalue(&h, n);
    let norm_h_mat2 = linalg::frob2(&h);
    let norm_mring2 = linalg::frob2(&mring);
    let norm_ahat2 = linalg::frob2(&ahat);
    let f = c0 * norm_h2 - norm_a2;

    Ok(Decomposition {
        dims,
        c0,
        h_vec,
        norm_h,
        nu1,
        h,
        mring,
        ahat,
        lambda1,
        f,
        norm_a2,
        norm_h_mat2,
        norm_mring2,
        norm_ahat2,
    })
}

/// Normal curvature assembled from a decomposition.
///
/// `rperp_nu1` holds the vector-valued principal part
/// `R⊥(ν₁)_{ij} = m̊_{ik} Â_{jk} - m̊_{jk} Â_{ik}` and `rhat` the purely
/// non-principal part `R̂⊥_{ij,ab} = Â_{ik}^a Â_{jk}^b - Â_{jk}^a Â_{ik}^b`.
/// In the full normal-index sum each `(ν₁, β)` slot appears twice, so
/// `|R⊥|^2 = 2 |R⊥(ν₁)|^2 + |R̂⊥|^2`; `norm2_total` stores that full-sum
/// value and agrees with [`SffTensor::normal_curvature_norm2_raw`].
#[derive(Debug, Clone)]
pub struct NormalCurvature {
    pub dims: Dimensions,
    /// Row-major `(i, j, alpha)`, antisymmetric in `(i, j)`.
    pub rperp_nu1: Vec<f64>,
    /// Row-major `(i, j, alpha, beta)`, antisymmetric in `(i, j)` and `(alpha, beta)`.
    pub rhat: Vec<f64>,
    /// `|R⊥(ν₁)|^2` (single count over normal slots).
    pub norm2_rperp_nu1: f64,
    /// `|R̂⊥|^2`.
    pub norm2_rhat: f64,
    /// Full-sum `|R⊥|^2 = 2 |R⊥(ν₁)|^2 + |R̂⊥|^2`.
    pub norm2_total: f64,
}

impl NormalCurvature {
    #[inline]
    pub fn rperp_nu1_at(&self, i: usize, j: usize, alpha: usize) -> f64 {
        self.rperp_nu1[(i * self.dims.n() + j) * self.dims.m() + alpha]
    }

    #[inline]
    pub fn rhat_at(&self, i: usize, j: usize, alpha: usize, beta: usize) -> f64 {
        let n = self.dims.n();
        let m = self.dims.m();
        self.rhat[((i * n + j) * m + alpha) * m + beta]
    }
}

/// Contracts the normal curvature parts from a decomposition.
pub fn normal_curvature(d: &Decomposition) -> NormalCurvature {
    let n = d.n();
    let m = d.m();
    let mut rperp_nu1 = vec![0.0; n * n * m];
    for i in 0..n {
        for j in 0..n {
            for al in 0..m {
                let mut s = 0.0;
                for k in 0..n {
                    s += d.mring_at(i, k) * d.ahat_at(j, k, al)
                        - d.mring_at(j, k) * d.ahat_at(i, k, al);
                }
                rperp_nu1[(i * n + j) * m + al] = s;
            }
        }
    }
    let mut rhat = vec![0.0; n * n * m * m];
    for i in 0..n {
        for j in 0..n {
            for a in 0..m {
                for b in 0..m {
                    let mut s = 0.0;
                    for k in 0..n {
                        s += d.ahat_at(i, k, a) * d.ahat_at(j, k, b)
                            - d.ahat_at(j, k, a) * d.ahat_at(i, k, b);
                    }
                    rhat[((i * n + j) * m + a) * m + b] = s;
                }
            }
        }
    }
    let norm2_rperp_nu1 = linalg::frob2(&rperp_nu1);
    let norm2_rhat = linalg::frob2(&rhat);
    NormalCurvature {
        dims: d.dims,
        rperp_nu1,
        rhat,
        norm2_rperp_nu1,
        norm2_rhat,
        norm2_total: 2.0 * norm2_rperp_nu1 + norm2_rhat,
    }
}
