//! Every explicit constant of the pinching estimates, computed from
//! `(n, ε₀, ε, L, Λ)` with the exact formulas, plus the constraint system
//! that pins the admissible pinching ratio and the Young-constant optimizer.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstantsError {
    #[error("invalid dimension n = {0}; need n >= 2")]
    InvalidDimension(usize),
    #[error("pinching too weak: eps0 = {eps0} must lie in (0, c_n = {cn})")]
    PinchingTooWeak { eps0: f64, cn: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("constant overflow/underflow: {0}")]
    NotRepresentable(String),
}

/// `c_n = min{4/(3n), 3(n+1)/(2n(n+2))}`; the second branch wins for
/// `n <= 7`, the first for `n >= 8` (they tie at `n = 7`).
pub fn compute_cn(n: usize) -> Result<f64, ConstantsError> {
    if n < 2 {
        return Err(ConstantsError::InvalidDimension(n));
    }
    let nf = n as f64;
    let a = 4.0 / (3.0 * nf);
    let b = 3.0 * (nf + 1.0) / (2.0 * nf * (nf + 2.0));
    Ok(a.min(b))
}

/// Constants of the planarity estimate for dimension `n` and pinching gap
/// `ε₀`.
#[derive(Debug, Clone, Copy)]
pub struct PlanarityConstants {
    pub n: usize,
    pub eps0: f64,
    pub cn: f64,
    /// Working pinching constant: `c_n - ε₀/2` for `n <= 7`, `c_n` for `n >= 8`.
    pub c0: f64,
    /// `min{1/2, n(n+2) ε₀ / (3(n-1))}` for `n <= 7`; `1/(5n-8)` for `n >= 8`.
    pub delta: f64,
    /// `δ/2`.
    pub sigma: f64,
    /// `σ^{-1} ((n c0 - 1)/2) (ε₀/(2 c0))^{1 - 1/σ}`; can be astronomically
    /// large — `ln_c_big0` always carries the exact logarithm.
    pub c_big0: f64,
    pub ln_c_big0: f64,
    /// True for `n in {2, 3, 4}`, where the `δ` formula of the `n in {5,6,7}`
    /// regime is extended downward (the inequalities it rests on hold for all
    /// `n >= 2`).
    pub extended_regime: bool,
}

/// Computes the planarity constants. `ε₀` must lie in `(0, c_n)`.
pub fn planarity_constants(n: usize, eps0: f64) -> Result<PlanarityConstants, ConstantsError> {
    let cn = compute_cn(n)?;
    if !(eps0 > 0.0 && eps0 < cn) {
        return Err(ConstantsError::PinchingTooWeak { eps0, cn });
    }
    let nf = n as f64;
    let (c0, delta, extended_regime) = if n >= 8 {
        (cn, 1.0 / (5.0 * nf - 8.0), false)
    } else {
        let delta = (nf * (nf + 2.0) / (3.0 * (nf - 1.0)) * eps0).min(0.5);
        (cn - 0.5 * eps0, delta, n < 5)
    };
    // Every denominator downstream carries n c0 - 1.
    if nf * c0 <= 1.0 {
        return Err(ConstantsError::InvalidParameter(format!(
            "eps0 = {eps0} pushes c0 = {c0} to or below 1/n; need eps0 < 2(c_n - 1/n) = {}",
            2.0 * (cn - 1.0 / nf)
        )));
    }
    let sigma = delta / 2.0;
    let nc0 = nf * c0;
    let ln_c_big0 =
        -sigma.ln() + ((nc0 - 1.0) / 2.0).ln() + (1.0 - 1.0 / sigma) * (eps0 / (2.0 * c0)).ln();
    let c_big0 = ln_c_big0.exp();
    Ok(PlanarityConstants {
        n,
        eps0,
        cn,
        c0,
        delta,
        sigma,
        c_big0,
        ln_c_big0,
        extended_regime,
    })
}

/// Constants of the convexity estimate.
#[derive(Debug, Clone, Copy)]
pub struct ConvexityConstants {
    pub n: usize,
    pub big_l: f64,
    pub eps: f64,
    pub eps_bar: f64,
    pub lambda: f64,
    /// `γ₀ = ε³ / (8 n² L²)`.
    pub gamma0: f64,
    /// `γ = γ₀ / 2`.
    pub gamma: f64,
    /// `2 + 2n/γ`.
    pub p_min: f64,
    /// Chosen exponent: the smallest power of two exceeding both `p_min` and
    /// `P_δ/γ` (a power of two keeps `σ p = 1/2` exact in floating point).
    pub p: f64,
    /// `1/(2p)`.
    pub sigma: f64,
    /// `C₁ = 1 / (2 n Λ⁴ L^{4p})`.
    pub c1: f64,
    pub ln_c1: f64,
    /// `α = ε̄² / (L² n⁴)`.
    pub alpha: f64,
    /// Poincaré constant actually used (tunable; see [`poincare_p_delta`]).
    pub p_delta: f64,
}

/// Crude but explicit Poincaré constant from the proof chain: with
/// `|C| <= 4nL³ H³` and `|∇C| <= 6nL² H² |∇A|`, the integration-by-parts
/// constant is `K = 2 max(4nL³, 6nL²)/α`, and optimizing the Young weights at
/// `a = b = min(δ/(2K), 4δ/(Kn))` gives `P_δ = K (1 + 1/(2a))`.
pub fn poincare_p_delta(n: usize, big_l: f64, eps_bar: f64, delta: f64) -> f64 {
    let nf = n as f64;
    let alpha = eps_bar * eps_bar / (big_l * big_l * nf.powi(4));
    let c_int = (4.0 * nf * big_l.powi(3)).max(6.0 * nf * big_l * big_l);
    let k = 2.0 * c_int / alpha;
    let a = (delta / (2.0 * k)).min(4.0 * delta / (k * nf));
    k * (1.0 + 1.0 / (2.0 * a))
}

/// Computes the convexity constants. `p_delta = None` takes the explicit
/// proof-chain value at `δ = 1/8`; passing a smaller tuned value keeps the
/// exponent `p` at desk scale.
pub fn convexity_constants(
    n: usize,
    big_l: f64,
    eps: f64,
    eps_bar: f64,
    lambda: f64,
    p_delta: Option<f64>,
) -> Result<ConvexityConstants, ConstantsError> {
    if n < 2 {
        return Err(ConstantsError::InvalidDimension(n));
    }
    if big_l < 1.0 {
        return Err(ConstantsError::InvalidParameter(format!(
            "L = {big_l} must be >= 1"
        )));
    }
    if !(eps > 0.0 && eps < 1.0 / big_l) {
        return Err(ConstantsError::InvalidParameter(format!(
            "eps = {eps} must lie in (0, 1/L)"
        )));
    }
    if eps_bar <= 0.0 || lambda <= 0.0 {
        return Err(ConstantsError::InvalidParameter(
            "eps_bar and Lambda must be positive".into(),
        ));
    }
    let nf = n as f64;
    let gamma0 = eps.powi(3) / (8.0 * nf * nf * big_l * big_l);
    let gamma = 0.5 * gamma0;
    let p_delta = p_delta.unwrap_or_else(|| poincare_p_delta(n, big_l, eps_bar, 0.125));
    if p_delta <= 0.0 {
        return Err(ConstantsError::InvalidParameter(
            "P_delta must be positive".into(),
        ));
    }
    let p_min = 2.0 + 2.0 * nf / gamma;
    let target = p_min.max(p_delta / gamma);
    let mut p = 2.0;
    while p <= target {
        p *= 2.0;
        if !p.is_finite() {
            return Err(ConstantsError::NotRepresentable(
                "exponent p overflows f64".into(),
            ));
        }
    }
    let sigma = 0.5 / p;
    let ln_c1 = -(2.0 * nf).ln() - 4.0 * lambda.ln() - 4.0 * p * big_l.ln();
    let c1 = ln_c1.exp();
    if c1 == 0.0 {
        return Err(ConstantsError::NotRepresentable(format!(
            "C1 underflows (ln C1 = {ln_c1:.3}); reduce L or P_delta"
        )));
    }
    Ok(ConvexityConstants {
        n,
        big_l,
        eps,
        eps_bar,
        lambda,
        gamma0,
        gamma,
        p_min,
        p,
        sigma,
        c1,
        ln_c1,
        alpha: eps_bar * eps_bar / (big_l * big_l * nf.powi(4)),
        p_delta,
    })
}

/// `F(a2, a3) = min{a2, 2(1-a2)/(1+a3), a3/(1+a3)}`.
pub fn young_f(a2: f64, a3: f64) -> f64 {
    a2.min(2.0 * (1.0 - a2) / (1.0 + a3)).min(a3 / (1.0 + a3))
}

/// Maximizes `F` over `(0,1) x (0,4)` by grid search with box refinement;
/// the maximum is `F(1/2, 1) = 1/2`.
pub fn young_optimizer() -> (f64, f64, f64) {
    let mut lo2 = 0.0;
    let mut hi2 = 1.0;
    let mut lo3 = 0.0;
    let mut hi3 = 4.0;
    let mut best = (0.5, 1.0, f64::NEG_INFINITY);
    for _round in 0..10 {
        let steps = 80usize;
        let d2 = (hi2 - lo2) / steps as f64;
        let d3 = (hi3 - lo3) / steps as f64;
        let mut round_best = (lo2, lo3, f64::NEG_INFINITY);
        for i in 1..steps {
            for j in 1..steps {
                let a2 = lo2 + i as f64 * d2;
                let a3 = lo3 + j as f64 * d3;
                let v = young_f(a2, a3);
                if v > round_best.2 {
                    round_best = (a2, a3, v);
                }
            }
        }
        if round_best.2 > best.2 {
            best = round_best;
        }
        lo2 = (round_best.0 - 1.5 * d2).max(0.0);
        hi2 = (round_best.0 + 1.5 * d2).min(1.0);
        lo3 = (round_best.1 - 1.5 * d3).max(0.0);
        hi3 = (round_best.1 + 1.5 * d3).min(4.0);
    }
    best
}

/// The full constraint list on `c0` behind the pinching constant: reaction
/// constraints, gradient-coefficient constraints, and the three Young
/// constraints evaluated at the optimizer `(a2, a3) = (1/2, 1)`. Every value
/// is nonnegative exactly when `c0` is admissible.
pub fn appendix_constraints(n: usize, c0: f64) -> Vec<(&'static str, f64)> {
    let nf = n as f64;
    let ratio = (c0 - 1.0 / nf) / ((nf - 1.0) / (nf * (nf + 2.0)));
    let (a2, a3) = (0.5, 1.0);
    vec![
        ("reaction: c0 <= 3/(n+2)", 3.0 / (nf + 2.0) - c0),
        ("reaction: c0 <= 4/(3n)", 4.0 / (3.0 * nf) - c0),
        ("reaction: c0 <= 5/(3n)", 5.0 / (3.0 * nf) - c0),
        (
            "gradient: c0 <= (5n+1)/(2n(n+2))",
            (5.0 * nf + 1.0) / (2.0 * nf * (nf + 2.0)) - c0,
        ),
        ("gradient: c0 <= 3/(n+2)", 3.0 / (nf + 2.0) - c0),
        ("young: a2 >= (c0 - 1/n)/Cn", a2 - ratio),
        (
            "young: 2(1-a2)/(1+a3) >= (c0 - 1/n)/Cn",
            2.0 * (1.0 - a2) / (1.0 + a3) - ratio,
        ),
        (
            "young: a3/(1+a3) >= (c0 - 1/n)/Cn",
            a3 / (1.0 + a3) - ratio,
        ),
    ]
}

/// Name and value of the most violated constraint, if any.
pub fn constraint_violation_witness(n: usize, c0: f64) -> Option<(&'static str, f64)> {
    appendix_constraints(n, c0)
        .into_iter()
        .filter(|(_, v)| *v < 0.0)
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
}

/// Bisects the largest `c0` satisfying every constraint in
/// [`appendix_constraints`]; agrees with [`compute_cn`] to better than 1e-9.
pub fn max_admissible_c0(n: usize) -> Result<f64, ConstantsError> {
    if n < 2 {
        return Err(ConstantsError::InvalidDimension(n));
    }
    let nf = n as f64;
    let admissible = |c0: f64| {
        appendix_constraints(n, c0)
            .into_iter()
            .all(|(_, v)| v >= 0.0)
    };
    let mut lo = 1.0 / nf;
    let mut hi = 1.0;
    debug_assert!(admissible(lo) && !admissible(hi));
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if admissible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
