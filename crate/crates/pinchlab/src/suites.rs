//! Seeded randomized verification suites over the pointwise algebra.
//!
//! Each suite draws a deterministic stream of samples per dimension pair and
//! checks the exact identities to a relative threshold and the inequalities
//! to the homogeneity-correct slack. Shards run independently (one RNG per
//! sample index), so the reports are identical in sequential and parallel
//! mode.

use crate::constants::compute_cn;
use crate::frame::hypersurface::{
    commutator_identity, commutator_lower_bound, simons_commutator, simons_lower_bound,
    ShapeOperator,
};
use crate::frame::{
    basic_inequalities, inequality_tolerance, planarity_gradient_bound,
    planarity_gradient_identities, planarity_reaction_identity, reaction_identity,
    reaction_nonnegativity, relative_residual, young_split_check, Dimensions, SffTensor,
};
use crate::parallel::{map_reduce, ExecMode};
use crate::sample;

/// Relative threshold for exact identities.
pub const IDENTITY_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteId {
    /// Codimension-one commutator identity and the non-convex lower bound.
    AppendixA,
    /// Reaction identity, its nonnegativity, and the three basic inequalities.
    AppendixB1,
    /// Planarity reaction/gradient identities, Kato residual, Young split,
    /// and the closing gradient bound.
    AppendixB2,
    /// Simons commutator: eigenvalue formula and the weighted Poincaré
    /// ingredient.
    Simons,
}

impl SuiteId {
    pub fn name(&self) -> &'static str {
        match self {
            SuiteId::AppendixA => "appendix_a",
            SuiteId::AppendixB1 => "appendix_b1",
            SuiteId::AppendixB2 => "appendix_b2",
            SuiteId::Simons => "simons",
        }
    }

    pub fn all() -> [SuiteId; 4] {
        [
            SuiteId::AppendixA,
            SuiteId::AppendixB1,
            SuiteId::AppendixB2,
            SuiteId::Simons,
        ]
    }

    /// Stream tag mixed into per-sample seeds.
    fn tag(&self) -> u64 {
        match self {
            SuiteId::AppendixA => 0xA,
            SuiteId::AppendixB1 => 0xB1,
            SuiteId::AppendixB2 => 0xB2,
            SuiteId::Simons => 0x51,
        }
    }

    /// Dimension pairs this suite runs over.
    pub fn dims(&self) -> Vec<(usize, usize)> {
        match self {
            SuiteId::AppendixA | SuiteId::Simons => (2..=8).map(|n| (n, 1)).collect(),
            SuiteId::AppendixB1 | SuiteId::AppendixB2 => {
                let mut v = Vec::new();
                for n in 2..=8 {
                    for m in 1..=3 {
                        v.push((n, m));
                    }
                }
                v
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub samples: usize,
    pub seed: u64,
    pub mode: ExecMode,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            samples: 10_000,
            seed: 0,
            mode: ExecMode::auto(),
        }
    }
}

/// A failed check with enough data to replay the single sample.
#[derive(Debug, Clone)]
pub struct Violation {
    pub suite: &'static str,
    pub check: String,
    pub n: usize,
    pub m: usize,
    pub index: usize,
    pub case_seed: u64,
    pub value: f64,
    pub threshold: f64,
}

/// Outcome of one suite over one dimension pair.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub n: usize,
    pub m: usize,
    pub samples: usize,
    /// Worst relative residual among the exact identities.
    pub max_rel_residual: f64,
    /// Most negative inequality slack normalized by its tolerance
    /// (values above `-1` pass).
    pub min_margin_over_tol: f64,
    pub violations: Vec<Violation>,
}

#[derive(Clone)]
struct Shard {
    max_rel: f64,
    min_margin: f64,
    violations: Vec<Violation>,
}

impl Shard {
    fn empty() -> Self {
        Self {
            max_rel: 0.0,
            min_margin: f64::INFINITY,
            violations: Vec::new(),
        }
    }

    fn merge(mut self, other: Shard) -> Shard {
        self.max_rel = self.max_rel.max(other.max_rel);
        self.min_margin = self.min_margin.min(other.min_margin);
        self.violations.extend(other.violations);
        self
    }
}

struct CheckCtx<'a> {
    suite: &'static str,
    n: usize,
    m: usize,
    index: usize,
    case_seed: u64,
    shard: &'a mut Shard,
}

impl CheckCtx<'_> {
    fn identity(&mut self, check: &str, lhs: f64, rhs: f64) {
        let rel = relative_residual(lhs, rhs, 1e-30);
        self.shard.max_rel = self.shard.max_rel.max(rel);
        if rel > IDENTITY_REL_TOL {
            self.shard.violations.push(Violation {
                suite: self.suite,
                check: check.into(),
                n: self.n,
                m: self.m,
                index: self.index,
                case_seed: self.case_seed,
                value: rel,
                threshold: IDENTITY_REL_TOL,
            });
        }
    }

    /// Inequality `value >= -tol`; margins are tracked relative to `tol`.
    fn nonnegative(&mut self, check: &str, value: f64, tol: f64) {
        let tol = tol.max(1e-300);
        self.shard.min_margin = self.shard.min_margin.min(value / tol);
        if value < -tol {
            self.shard.violations.push(Violation {
                suite: self.suite,
                check: check.into(),
                n: self.n,
                m: self.m,
                index: self.index,
                case_seed: self.case_seed,
                value,
                threshold: -tol,
            });
        }
    }

    fn flag(&mut self, check: &str, value: f64) {
        self.shard.violations.push(Violation {
            suite: self.suite,
            check: check.into(),
            n: self.n,
            m: self.m,
            index: self.index,
            case_seed: self.case_seed,
            value,
            threshold: 0.0,
        });
    }
}

fn run_pair(id: SuiteId, n: usize, m: usize, cfg: &SuiteConfig) -> SuiteReport {
    let sample_one = |index: usize| -> Shard {
        let mut shard = Shard::empty();
        let tags = [id.tag(), n as u64, m as u64, index as u64];
        let case_seed = sample::case_seed(cfg.seed, &tags);
        let mut ctx = CheckCtx {
            suite: id.name(),
            n,
            m,
            index,
            case_seed,
            shard: &mut shard,
        };
        let mut rng = sample::rng_for(cfg.seed, &tags);
        let dims = Dimensions::new(n, m).expect("suite dims are valid");
        match id {
            SuiteId::AppendixA => {
                let a = sample::symmetric_sff(&mut rng, dims);
                let g = sample::codazzi_grad(&mut rng, dims);
                match commutator_identity(&a, &g) {
                    Ok((lhs, rhs)) => ctx.identity("commutator_identity", lhs, rhs),
                    Err(e) => ctx.flag(&format!("commutator_identity_error: {e}"), f64::NAN),
                }
                // Non-convex regime for the lower bound.
                let eps0 = 0.15;
                let w = sample::nonconvex_shape(&mut rng, n, eps0);
                let a2 = SffTensor::from_scalar_matrix(n, &w).expect("square matrix");
                let g2 = sample::codazzi_grad(&mut rng, dims);
                match commutator_lower_bound(&a2, &g2, eps0) {
                    Ok(bound) => {
                        let scale = a2.norm() + g2.norm2().sqrt().sqrt();
                        ctx.nonnegative(
                            "commutator_lower_bound",
                            bound.lhs - bound.rhs,
                            inequality_tolerance(scale, 4),
                        );
                        ctx.nonnegative(
                            "claim_intermediate",
                            bound.claim_lhs - bound.claim_rhs,
                            inequality_tolerance(scale, 6),
                        );
                        ctx.nonnegative(
                            "lambda_n_ge_h_over_n",
                            bound.lambda_n_residual,
                            1e-12 * scale,
                        );
                    }
                    Err(e) => ctx.flag(&format!("commutator_bound_error: {e}"), f64::NAN),
                }
            }
            SuiteId::AppendixB1 => {
                let c0 = compute_cn(n).expect("n >= 2");
                let a = sample::pinched_sff(&mut rng, dims, c0, 0.95);
                let scale = a.norm();
                match reaction_identity(&a, c0) {
                    Ok(idy) => {
                        ctx.identity("reaction_identity", idy.lhs, idy.rhs);
                        ctx.nonnegative(
                            "reaction_remainder",
                            idy.remainder,
                            inequality_tolerance(scale, 4),
                        );
                    }
                    Err(e) => ctx.flag(&format!("reaction_identity_error: {e}"), f64::NAN),
                }
                match reaction_nonnegativity(&a, c0) {
                    Ok(ok) => {
                        if !ok {
                            ctx.flag("reaction_nonnegativity", -1.0);
                        }
                    }
                    Err(e) => ctx.flag(&format!("reaction_nonnegativity_error: {e}"), f64::NAN),
                }
                let g = sample::codazzi_grad(&mut rng, dims);
                match basic_inequalities(&a, &g) {
                    Ok(b) => {
                        let scale_g = a.norm() + g.norm2().sqrt().sqrt();
                        let tol = inequality_tolerance(scale_g, 4);
                        ctx.nonnegative("andrews_baker_r1", b.r1, tol);
                        ctx.nonnegative("andrews_baker_r2", b.r2, tol);
                        ctx.nonnegative("andrews_baker_r3", b.r3, tol);
                    }
                    Err(e) => ctx.flag(&format!("basic_inequalities_error: {e}"), f64::NAN),
                }
            }
            SuiteId::AppendixB2 => {
                let c0 = compute_cn(n).expect("n >= 2");
                let a = sample::pinched_sff(&mut rng, dims, c0, 0.9);
                let g = sample::codazzi_grad(&mut rng, dims);
                let scale = a.norm() + g.norm2().sqrt().sqrt();
                let tol4 = inequality_tolerance(scale, 4);
                match planarity_reaction_identity(&a, c0) {
                    Ok(r) => {
                        ctx.identity("planarity_reaction_identity", r.lhs, r.rhs);
                        ctx.nonnegative(
                            "planarity_reaction_nonnegative",
                            r.rhs,
                            inequality_tolerance(a.norm(), 4),
                        );
                    }
                    Err(e) => ctx.flag(&format!("planarity_reaction_error: {e}"), f64::NAN),
                }
                match planarity_gradient_identities(&a, &g, c0) {
                    Ok(ids) => {
                        ctx.identity("gradient_identity_ahat", ids.id1_lhs, ids.id1_rhs);
                        ctx.identity("gradient_identity_u", ids.id2_lhs, ids.id2_rhs);
                        ctx.nonnegative("kato_type", ids.kato_residual, tol4);
                    }
                    Err(e) => ctx.flag(&format!("gradient_identities_error: {e}"), f64::NAN),
                }
                match planarity_gradient_bound(&a, &g, c0, 1.0, 0.5, 1.0) {
                    Ok(b) => {
                        ctx.nonnegative("gradient_bound", b.residual, tol4);
                        ctx.nonnegative(
                            "gradient_bound_coefficients",
                            b.coefficients.min(),
                            1e-12,
                        );
                    }
                    Err(e) => ctx.flag(&format!("gradient_bound_error: {e}"), f64::NAN),
                }
                match young_split_check(&a, &g, c0, 1.0, 0.5, 1.0) {
                    Ok((cross, bound)) => ctx.nonnegative("young_split", bound - cross, tol4),
                    Err(e) => ctx.flag(&format!("young_split_error: {e}"), f64::NAN),
                }
            }
            SuiteId::Simons => {
                let a = sample::symmetric_sff(&mut rng, dims);
                match simons_commutator(&a) {
                    Ok(s) => ctx.identity("simons_norm_eigen_formula", s.norm2, s.norm2_eigen),
                    Err(e) => ctx.flag(&format!("simons_error: {e}"), f64::NAN),
                }
                let w = sample::nonconvex_shape(&mut rng, n, 0.1);
                let shape = ShapeOperator::new(n, w);
                let h = shape.mean_curvature();
                let lambda1 = shape.eigen().values[0];
                let eps_bar = (0.999 * (-lambda1) / h).min(0.5);
                let big_l = (shape.norm2().sqrt() / h).max(1.0);
                match simons_lower_bound(&shape, eps_bar, big_l) {
                    Ok((c2, bound)) => {
                        let scale = shape.norm2().sqrt();
                        ctx.nonnegative(
                            "simons_lower_bound",
                            c2 - bound,
                            inequality_tolerance(scale, 6),
                        );
                    }
                    Err(e) => ctx.flag(&format!("simons_bound_error: {e}"), f64::NAN),
                }
            }
        }
        shard
    };

    let mut merged = map_reduce(cfg.mode, cfg.samples, Shard::empty(), sample_one, Shard::merge);
    merged.violations.sort_by_key(|v| v.index);
    SuiteReport {
        suite: id.name(),
        n,
        m,
        samples: cfg.samples,
        max_rel_residual: merged.max_rel,
        min_margin_over_tol: if merged.min_margin.is_finite() {
            merged.min_margin
        } else {
            0.0
        },
        violations: merged.violations,
    }
}

/// Runs one suite over all its dimension pairs.
pub fn run_suite(id: SuiteId, cfg: &SuiteConfig) -> Vec<SuiteReport> {
    id.dims()
        .into_iter()
        .map(|(n, m)| run_pair(id, n, m, cfg))
        .collect()
}

/// Runs several suites and concatenates the reports.
pub fn run_suites(ids: &[SuiteId], cfg: &SuiteConfig) -> Vec<SuiteReport> {
    ids.iter().flat_map(|&id| run_suite(id, cfg)).collect()
}

/// Adversarial search documenting the sharpness of `c0 <= 4/(3n)`: with
/// `c0 = factor * 4/(3n)` for `factor > 1`, minimizing the reaction
/// remainder over random pinched samples finds a genuine negative witness.
/// Returns `(min remainder, case seed of the minimizer)`.
pub fn reaction_sharpness_search(
    n: usize,
    m: usize,
    factor: f64,
    samples: usize,
    seed: u64,
) -> (f64, u64) {
    let dims = Dimensions::new(n, m).expect("valid dims");
    let c0 = factor * 4.0 / (3.0 * n as f64);
    let mut best = (f64::INFINITY, 0u64);
    for index in 0..samples {
        let tags = [0xADu64, n as u64, m as u64, index as u64];
        let mut rng = sample::rng_for(seed, &tags);
        let a = sample::pinched_sff(&mut rng, dims, c0, 0.95);
        if let Ok(id) = reaction_identity(&a, c0) {
            if id.remainder < best.0 {
                best = (id.remainder, sample::case_seed(seed, &tags));
            }
        }
    }
    best
}
