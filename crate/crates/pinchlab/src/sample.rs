//! Seeded random tensor generators for the verification suites.
//!
//! Plain entries are i.i.d. standard normal (then symmetrized). Hypotheses
//! like `λ₁ <= -ε₀ H` are enforced by rejection. The pinched set
//! `f = c0|H|^2 - |A|^2 >= 0` is far too thin for rejection once `n` grows,
//! so [`pinched_sff`] instead scales the traceless parts of an i.i.d. draw to
//! land at a prescribed pinching margin; the margin parameter sweeps an open
//! neighborhood of the constraint boundary.

use crate::frame::{Dimensions, GradSffTensor, SffTensor};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Splitmix64 step; used to derive independent stream seeds.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Deterministic per-case seed from a base seed and case tags.
pub fn case_seed(base: u64, tags: &[u64]) -> u64 {
    let mut state = base ^ 0x51ed2701_8c9f3a4b;
    let mut out = splitmix64(&mut state);
    for &t in tags {
        state ^= t;
        out ^= splitmix64(&mut state);
    }
    out
}

/// ChaCha stream for one case.
pub fn rng_for(base: u64, tags: &[u64]) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(case_seed(base, tags))
}

pub fn normal(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Symmetric vector-valued tensor with i.i.d. standard normal entries.
pub fn symmetric_sff(rng: &mut impl Rng, dims: Dimensions) -> SffTensor {
    let n = dims.n();
    let m = dims.m();
    let raw: Vec<f64> = (0..n * n * m).map(|_| normal(rng)).collect();
    SffTensor::from_fn(dims, |i, j, al| raw[(i * n + j) * m + al])
}

/// Fully symmetrized i.i.d. normal gradient tensor (Codazzi by construction).
pub fn codazzi_grad(rng: &mut impl Rng, dims: Dimensions) -> GradSffTensor {
    let n = dims.n();
    let m = dims.m();
    let raw: Vec<f64> = (0..n * n * n * m).map(|_| normal(rng)).collect();
    GradSffTensor::from_fn_symmetrized(dims, |k, i, j, al| raw[((k * n + i) * n + j) * m + al])
}

/// Random unit vector in `R^m`.
fn unit_vector(rng: &mut impl Rng, m: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..m).map(|_| normal(rng)).collect();
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Strictly pinched sample: returns `A` with
/// `f = (1 - u) (c0 - 1/n) |H|^2` for a margin `u` drawn uniformly from
/// `[0, u_max)`. Requires `c0 > 1/n`; `u_max < 1` keeps `f > 0`.
///
/// The draw fixes `|H|`, picks a random principal normal, and fills the
/// traceless directions (`m̊` and `Â`) with normalized i.i.d. normal shapes
/// scaled to the prescribed margin.
pub fn pinched_sff(rng: &mut impl Rng, dims: Dimensions, c0: f64, u_max: f64) -> SffTensor {
    let n = dims.n();
    let m = dims.m();
    let nf = n as f64;
    assert!(c0 > 1.0 / nf, "pinched sampler needs c0 > 1/n");
    assert!((0.0..1.0).contains(&u_max));

    let norm_h = nf * (0.5 + rng.random::<f64>());
    let nu1 = unit_vector(rng, m);

    // Traceless scalar direction.
    let mut mring = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = normal(rng);
            mring[i * n + j] = v;
            mring[j * n + i] = v;
        }
    }
    let tr: f64 = (0..n).map(|i| mring[i * n + i]).sum::<f64>() / nf;
    for i in 0..n {
        mring[i * n + i] -= tr;
    }

    // Vector-valued direction orthogonal to nu1 and trace-free.
    let mut ahat = vec![0.0; n * n * m];
    if m > 1 {
        for i in 0..n {
            for j in i..n {
                let raw: Vec<f64> = (0..m).map(|_| normal(rng)).collect();
                let dot: f64 = raw.iter().zip(&nu1).map(|(x, y)| x * y).sum();
                for al in 0..m {
                    let v = raw[al] - dot * nu1[al];
                    ahat[(i * n + j) * m + al] = v;
                    ahat[(j * n + i) * m + al] = v;
                }
            }
        }
        for al in 0..m {
            let tr: f64 = (0..n).map(|i| ahat[(i * n + i) * m + al]).sum::<f64>() / nf;
            for i in 0..n {
                ahat[(i * n + i) * m + al] -= tr;
            }
        }
    }

    let norm_mring2: f64 = mring.iter().map(|x| x * x).sum();
    let norm_ahat2: f64 = ahat.iter().map(|x| x * x).sum();

    let u = u_max * rng.random::<f64>();
    let budget = u * (c0 - 1.0 / nf) * norm_h * norm_h;
    // Random split of the traceless budget between m̊ and Â.
    let theta = if m > 1 && norm_ahat2 > 0.0 {
        rng.random::<f64>() * std::f64::consts::FRAC_PI_2
    } else {
        0.0
    };
    let s_mring = if norm_mring2 > 0.0 {
        (budget.sqrt() * theta.cos()) / norm_mring2.sqrt()
    } else {
        0.0
    };
    let s_ahat = if norm_ahat2 > 0.0 {
        (budget.sqrt() * theta.sin()) / norm_ahat2.sqrt()
    } else {
        0.0
    };

    SffTensor::from_fn(dims, |i, j, al| {
        let principal = if i == j { norm_h / nf } else { 0.0 } + s_mring * mring[i * n + j];
        principal * nu1[al] + s_ahat * ahat[(i * n + j) * m + al]
    })
}

/// Codimension-one sample in the non-convex regime: symmetric shape matrix
/// with `H = tr W > 0` and `λ₁ <= -ε₀ H`, by rejection. Returns the matrix
/// row-major. Panics if the regime is not hit within 100k draws (it is hit
/// within a handful for every `n <= 8`, `ε₀ <= 0.3`).
pub fn nonconvex_shape(rng: &mut impl Rng, n: usize, eps0: f64) -> Vec<f64> {
    for _ in 0..100_000 {
        let mut w = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = normal(rng);
                w[i * n + j] = v;
                w[j * n + i] = v;
            }
        }
        let tr: f64 = (0..n).map(|i| w[i * n + i]).sum();
        if tr == 0.0 {
            continue;
        }
        if tr < 0.0 {
            for v in w.iter_mut() {
                *v = -*v;
            }
        }
        let h = tr.abs();
        let lambda1 = crate::linalg::min_eigenvalue(&w, n);
        if lambda1 <= -eps0 * h {
            return w;
        }
    }
    panic!("rejection sampling failed to reach the non-convex regime");
}
