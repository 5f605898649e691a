//! First-order quantities derived from `(A, ∇⊥A)` at a point with `|H| > 0`.

use super::{Decomposition, FrameError, GradSffTensor};

/// Everything first-order the gradient identities need.
///
/// Index layouts: tangent-gradient index `k` first, so `grad_h[(k,i,j)]` is
/// `∇_k h_{ij}` and `grad_ahat[(k,i,j,alpha)]` is `∇⊥_k Â_{ij}^alpha`.
#[derive(Debug, Clone)]
pub struct GradDerived {
    n: usize,
    m: usize,
    /// `∇⊥_k H^alpha`, row-major `(k, alpha)`.
    pub grad_h_vec: Vec<f64>,
    /// `∇_k |H| = ⟨∇⊥_k H, ν₁⟩`.
    pub grad_norm_h: Vec<f64>,
    /// `∇⊥_k ν₁ = (∇⊥_k H - ∇_k|H| ν₁) / |H|`, row-major `(k, alpha)`.
    pub grad_nu1: Vec<f64>,
    /// `∇_k h_{ij} = ⟨∇⊥_k A_{ij}, ν₁⟩ + ⟨Â_{ij}, ∇⊥_k ν₁⟩`.
    pub grad_h: Vec<f64>,
    /// `∇⊥_k Â_{ij}^alpha` by the product rule on `Â = A - h ν₁`.
    pub grad_ahat: Vec<f64>,
    /// Component of `∇⊥Â` orthogonal to `ν₁`.
    pub hat_grad_ahat: Vec<f64>,
    /// `T_{kij} = ⟨∇⊥_k A_{ij}, ν₁⟩` (ν₁-component of the full gradient).
    pub grad_a_nu1: Vec<f64>,
    /// `⟨∇⊥_k Å_{ij}, ν₁⟩ = T_{kij} - δ_{ij} ∇_k|H| / n` (Å the traceless
    /// vector-valued part of `A`). This is the tensor entering the Kato-type
    /// bound and the Young estimate; `⟨∇⊥Â, ν₁⟩` below plays a different
    /// role and the two are kept strictly apart.
    pub grad_ring_a_nu1: Vec<f64>,
    /// `⟨∇⊥_k Â_{ij}, ν₁⟩ = -⟨Â_{ij}, ∇⊥_k ν₁⟩`, row-major `(k, i, j)`.
    pub grad_ahat_nu1: Vec<f64>,
    /// `Q_{ijk} = ⟨∇⊥_k Å_{ij}, ν₁⟩ - ⟨∇⊥_k Â_{ij}, ν₁⟩ - |H|^{-1} m̊_{ij} ∇_k|H|`,
    /// row-major `(k, i, j)` like the other scalar 3-tensors here.
    pub q: Vec<f64>,
}

impl GradDerived {
    /// Assembles all derived gradients. Requires Codazzi symmetry on `g`.
    pub fn new(d: &Decomposition, g: &GradSffTensor) -> Result<Self, FrameError> {
        g.require_codazzi()?;
        if g.dims() != d.dims {
            return Err(FrameError::PreconditionViolated(format!(
                "gradient dims {:?} do not match decomposition dims {:?}",
                g.dims(),
                d.dims
            )));
        }
        let n = d.n();
        let m = d.m();

        let grad_h_vec = g.grad_mean_curvature();
        let mut grad_norm_h = vec![0.0; n];
        for k in 0..n {
            let mut s = 0.0;
            for al in 0..m {
                s += grad_h_vec[k * m + al] * d.nu1[al];
            }
            grad_norm_h[k] = s;
        }
        let mut grad_nu1 = vec![0.0; n * m];
        for k in 0..n {
            for al in 0..m {
                grad_nu1[k * m + al] =
                    (grad_h_vec[k * m + al] - grad_norm_h[k] * d.nu1[al]) / d.norm_h;
            }
        }

        let mut grad_a_nu1 = vec![0.0; n * n * n];
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut s = 0.0;
                    for al in 0..m {
                        s += g.get(k, i, j, al) * d.nu1[al];
                    }
                    grad_a_nu1[(k * n + i) * n + j] = s;
                }
            }
        }

        // ⟨Â_{ij}, ∇⊥_k ν₁⟩ and from it ∇h and ⟨∇⊥Â, ν₁⟩.
        let mut ahat_dot_grad_nu1 = vec![0.0; n * n * n];
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut s = 0.0;
                    for al in 0..m {
                        s += d.ahat_at(i, j, al) * grad_nu1[k * m + al];
                    }
                    ahat_dot_grad_nu1[(k * n + i) * n + j] = s;
                }
            }
        }
        let mut grad_h = vec![0.0; n * n * n];
        let mut grad_ahat_nu1 = vec![0.0; n * n * n];
        for idx in 0..n * n * n {
            grad_h[idx] = grad_a_nu1[idx] + ahat_dot_grad_nu1[idx];
            grad_ahat_nu1[idx] = -ahat_dot_grad_nu1[idx];
        }

        let mut grad_ahat = vec![0.0; n * n * n * m];
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for al in 0..m {
                        grad_ahat[((k * n + i) * n + j) * m + al] = g.get(k, i, j, al)
                            - grad_h[(k * n + i) * n + j] * d.nu1[al]
                            - d.h_at(i, j) * grad_nu1[k * m + al];
                    }
                }
            }
        }
        let mut hat_grad_ahat = grad_ahat.clone();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let dot = grad_ahat_nu1[(k * n + i) * n + j];
                    for al in 0..m {
                        hat_grad_ahat[((k * n + i) * n + j) * m + al] -= dot * d.nu1[al];
                    }
                }
            }
        }

        let mut grad_ring_a_nu1 = grad_a_nu1.clone();
        for k in 0..n {
            for i in 0..n {
                grad_ring_a_nu1[(k * n + i) * n + i] -= grad_norm_h[k] / n as f64;
            }
        }

        let mut q = vec![0.0; n * n * n];
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let idx = (k * n + i) * n + j;
                    q[idx] = grad_ring_a_nu1[idx] - grad_ahat_nu1[idx]
                        - d.mring_at(i, j) * grad_norm_h[k] / d.norm_h;
                }
            }
        }

        Ok(Self {
            n,
            m,
            grad_h_vec,
            grad_norm_h,
            grad_nu1,
            grad_h,
            grad_ahat,
            hat_grad_ahat,
            grad_a_nu1,
            grad_ring_a_nu1,
            grad_ahat_nu1,
            q,
        })
    }

    pub fn grad_norm_h_norm2(&self) -> f64 {
        self.grad_norm_h.iter().map(|x| x * x).sum()
    }

    pub fn grad_nu1_norm2(&self) -> f64 {
        self.grad_nu1.iter().map(|x| x * x).sum()
    }

    pub fn grad_ahat_norm2(&self) -> f64 {
        self.grad_ahat.iter().map(|x| x * x).sum()
    }

    pub fn hat_grad_ahat_norm2(&self) -> f64 {
        self.hat_grad_ahat.iter().map(|x| x * x).sum()
    }

    pub fn grad_ring_a_nu1_norm2(&self) -> f64 {
        self.grad_ring_a_nu1.iter().map(|x| x * x).sum()
    }

    pub fn grad_ahat_nu1_norm2(&self) -> f64 {
        self.grad_ahat_nu1.iter().map(|x| x * x).sum()
    }

    /// `⟨∇⊥_k ν₁, ν₁⟩` for each k; all zero up to round-off.
    pub fn grad_nu1_dot_nu1_max(&self, nu1: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..self.n {
            let mut s = 0.0;
            for al in 0..self.m {
                s += self.grad_nu1[k * self.m + al] * nu1[al];
            }
            worst = worst.max(s.abs());
        }
        worst
    }

    /// Max entry of `∇⊥A - ((∇h) ⊗ ν₁ + h ⊗ ∇⊥ν₁ + ∇⊥Â)`.
    pub fn reconstruction_residual(&self, d: &Decomposition, g: &GradSffTensor) -> f64 {
        let n = self.n;
        let m = self.m;
        let mut worst: f64 = 0.0;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for al in 0..m {
                        let rebuilt = self.grad_h[(k * n + i) * n + j] * d.nu1[al]
                            + d.h_at(i, j) * self.grad_nu1[k * m + al]
                            + self.grad_ahat[((k * n + i) * n + j) * m + al];
                        worst = worst.max((g.get(k, i, j, al) - rebuilt).abs());
                    }
                }
            }
        }
        worst
    }

    /// `2 Q_{ijk} ⟨Â_{ij}, ∇⊥_k ν₁⟩` with the contraction over all `(i,j,k)`.
    pub fn q_cross_term(&self, d: &Decomposition) -> f64 {
        let n = self.n;
        let m = self.m;
        let mut s = 0.0;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut x = 0.0;
                    for al in 0..m {
                        x += d.ahat_at(i, j, al) * self.grad_nu1[k * m + al];
                    }
                    s += self.q[(k * n + i) * n + j] * x;
                }
            }
        }
        2.0 * s
    }
}
