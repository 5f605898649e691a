//! Rotationally symmetric hypersurface profile flow in `R^{n+1}`.
//!
//! The surface is `{(x, r(x) ω) : ω in S^{n-1}}` with graph radius `r > 0`
//! over a uniform axis grid. Mean curvature flow reduces to
//! `r_t = r_xx/(1 + r_x²) - (n-1)/r`, stepped explicitly; the principal
//! curvatures are `λ_ax = -r_xx/(1+r_x²)^{3/2}` and
//! `λ_sph = 1/(r sqrt(1+r_x²))` with multiplicity `n-1` (shape-operator
//! convention: positive on convex-toward-the-axis surfaces).

use super::FlowError;
use crate::exact::unit_sphere_area;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    /// The axis coordinate wraps with period `m * dx`.
    Periodic,
    /// Mirror ghost cells: `r_x = 0` at both ends.
    Neumann,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileFlowState {
    /// Intrinsic dimension of the hypersurface (cross-section `S^{n-1}`).
    pub n: usize,
    /// Left end of the axis grid.
    pub x0: f64,
    /// Uniform grid spacing.
    pub dx: f64,
    /// Profile radii at the grid points; all positive.
    pub r: Vec<f64>,
    pub t: f64,
    pub bc: BoundaryCondition,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileTermination {
    ReachedFinalTime,
    /// The neck reached the pinch-off radius at the recorded time.
    PinchedOff { t: f64 },
}

pub const PINCH_RADIUS: f64 = 1e-6;

/// Per-point differential geometry of one profile state.
#[derive(Debug, Clone)]
pub struct ProfileGeometry {
    pub n: usize,
    pub xs: Vec<f64>,
    pub r: Vec<f64>,
    pub rx: Vec<f64>,
    pub rxx: Vec<f64>,
    /// Axial principal curvature.
    pub lambda_ax: Vec<f64>,
    /// Spherical principal curvature (multiplicity `n-1`).
    pub lambda_sph: Vec<f64>,
    /// Scalar mean curvature `λ_ax + (n-1) λ_sph`.
    pub h: Vec<f64>,
    /// `|A|² = λ_ax² + (n-1) λ_sph²`.
    pub norm_a2: Vec<f64>,
    /// Quadrature weight `|S^{n-1}| r^{n-1} sqrt(1+r_x²) dx` per point.
    pub area_weight: Vec<f64>,
    /// `|x|² = x² + r²` of the embedded point.
    pub pos2: Vec<f64>,
    /// Tangential component of the position along the profile direction:
    /// `(x + r r_x)/sqrt(1+r_x²)`.
    pub x_tangent: Vec<f64>,
    /// Normal component of the position: `(r - x r_x)/sqrt(1+r_x²)` along
    /// the outward normal.
    pub x_normal: Vec<f64>,
}

impl ProfileFlowState {
    pub fn new(
        n: usize,
        x0: f64,
        dx: f64,
        r: Vec<f64>,
        t: f64,
        bc: BoundaryCondition,
    ) -> Result<Self, FlowError> {
        if n < 2 {
            return Err(FlowError::InvalidParameter(
                "profile flow needs n >= 2".into(),
            ));
        }
        if dx <= 0.0 || r.len() < 4 {
            return Err(FlowError::InvalidParameter(
                "need dx > 0 and at least 4 grid points".into(),
            ));
        }
        if r.iter().any(|&v| v <= 0.0) {
            return Err(FlowError::InvalidParameter(
                "profile radii must be positive".into(),
            ));
        }
        Ok(Self {
            n,
            x0,
            dx,
            r,
            t,
            bc,
        })
    }

    /// Constant profile: an exact round cylinder `S^{n-1}(r0) x R`.
    pub fn cylinder(n: usize, r0: f64, length: f64, m: usize) -> Result<Self, FlowError> {
        Self::new(
            n,
            -0.5 * length,
            length / m as f64,
            vec![r0; m],
            0.0,
            BoundaryCondition::Periodic,
        )
    }

    /// Cosine-perturbed cylinder `r = r0 (1 + amp cos(2πx/length))`.
    pub fn perturbed_cylinder(
        n: usize,
        r0: f64,
        amp: f64,
        length: f64,
        m: usize,
    ) -> Result<Self, FlowError> {
        let dx = length / m as f64;
        let x0 = -0.5 * length;
        let r = (0..m)
            .map(|i| {
                let x = x0 + i as f64 * dx;
                r0 * (1.0 + amp * (2.0 * std::f64::consts::PI * x / length).cos())
            })
            .collect();
        Self::new(n, x0, dx, r, 0.0, BoundaryCondition::Periodic)
    }

    /// Patch of the round sphere `r(x) = sqrt(R² - x²)` over `|x| <= x_max`.
    pub fn sphere_patch(n: usize, radius: f64, x_max: f64, m: usize) -> Result<Self, FlowError> {
        if x_max >= radius {
            return Err(FlowError::InvalidParameter(
                "sphere patch needs x_max < radius".into(),
            ));
        }
        let dx = 2.0 * x_max / (m - 1) as f64;
        let x0 = -x_max;
        let r = (0..m)
            .map(|i| {
                let x = x0 + i as f64 * dx;
                (radius * radius - x * x).sqrt()
            })
            .collect();
        Self::new(n, x0, dx, r, 0.0, BoundaryCondition::Neumann)
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.r.len())
            .map(|i| self.x0 + i as f64 * self.dx)
            .collect()
    }

    fn neighbor_values(&self, i: usize) -> (f64, f64) {
        let m = self.r.len();
        match self.bc {
            BoundaryCondition::Periodic => {
                let im = if i == 0 { m - 1 } else { i - 1 };
                let ip = if i == m - 1 { 0 } else { i + 1 };
                (self.r[im], self.r[ip])
            }
            BoundaryCondition::Neumann => {
                let im = if i == 0 { 1 } else { i - 1 };
                let ip = if i == m - 1 { m - 2 } else { i + 1 };
                (self.r[im], self.r[ip])
            }
        }
    }

    pub fn max_slope2(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.r.len() {
            let (rm, rp) = self.neighbor_values(i);
            let rx = (rp - rm) / (2.0 * self.dx);
            worst = worst.max(rx * rx);
        }
        worst
    }

    /// Full geometric snapshot of the state.
    pub fn geometry(&self) -> ProfileGeometry {
        let m = self.r.len();
        let nf = self.n as f64;
        let sphere_area = unit_sphere_area(self.n - 1);
        let mut geo = ProfileGeometry {
            n: self.n,
            xs: self.xs(),
            r: self.r.clone(),
            rx: vec![0.0; m],
            rxx: vec![0.0; m],
            lambda_ax: vec![0.0; m],
            lambda_sph: vec![0.0; m],
            h: vec![0.0; m],
            norm_a2: vec![0.0; m],
            area_weight: vec![0.0; m],
            pos2: vec![0.0; m],
            x_tangent: vec![0.0; m],
            x_normal: vec![0.0; m],
        };
        for i in 0..m {
            let (rm, rp) = self.neighbor_values(i);
            let r = self.r[i];
            let x = geo.xs[i];
            let rx = (rp - rm) / (2.0 * self.dx);
            let rxx = (rp - 2.0 * r + rm) / (self.dx * self.dx);
            let w = 1.0 + rx * rx;
            let lam_ax = -rxx / w.powf(1.5);
            let lam_sph = 1.0 / (r * w.sqrt());
            geo.rx[i] = rx;
            geo.rxx[i] = rxx;
            geo.lambda_ax[i] = lam_ax;
            geo.lambda_sph[i] = lam_sph;
            geo.h[i] = lam_ax + (nf - 1.0) * lam_sph;
            geo.norm_a2[i] = lam_ax * lam_ax + (nf - 1.0) * lam_sph * lam_sph;
            geo.area_weight[i] = sphere_area * r.powi(self.n as i32 - 1) * w.sqrt() * self.dx;
            geo.pos2[i] = x * x + r * r;
            geo.x_tangent[i] = (x + r * rx) / w.sqrt();
            geo.x_normal[i] = (r - x * rx) / w.sqrt();
        }
        geo
    }
}

/// One explicit Euler step of the profile flow.
///
/// The step must satisfy the declared CFL precondition
/// `dt <= 0.25 dx² (1 + max r_x²)`; drivers in this crate stay well inside
/// the uniform diffusion bound `dt <= 0.25 dx²` on top of it.
pub fn profile_flow_step(state: &ProfileFlowState, dt: f64) -> Result<ProfileFlowState, FlowError> {
    let min_r = state.r.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_r < PINCH_RADIUS {
        return Err(FlowError::ProfilePinchoff {
            min_r,
            t: state.t,
        });
    }
    let bound = 0.25 * state.dx * state.dx * (1.0 + state.max_slope2());
    if dt > bound {
        return Err(FlowError::CflViolation { dt, bound });
    }
    let nf = state.n as f64;
    let m = state.r.len();
    let mut out = state.r.clone();
    for i in 0..m {
        let (rm, rp) = state.neighbor_values(i);
        let r = state.r[i];
        let rx = (rp - rm) / (2.0 * state.dx);
        let rxx = (rp - 2.0 * r + rm) / (state.dx * state.dx);
        out[i] = r + dt * (rxx / (1.0 + rx * rx) - (nf - 1.0) / r);
    }
    let min_new = out.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_new < PINCH_RADIUS {
        return Err(FlowError::ProfilePinchoff {
            min_r: min_new,
            t: state.t + dt,
        });
    }
    Ok(ProfileFlowState {
        n: state.n,
        x0: state.x0,
        dx: state.dx,
        r: out,
        t: state.t + dt,
        bc: state.bc,
    })
}

/// Drives the profile flow to `t_end`, storing roughly `snapshots` states
/// (always including the first and last). The step size stays below
/// `dt_cap`, the diffusion bound `0.2 dx²`, and a reaction guard.
pub fn drive_profile_flow(
    initial: ProfileFlowState,
    t_end: f64,
    dt_cap: f64,
    snapshots: usize,
) -> Result<(Vec<ProfileFlowState>, ProfileTermination), FlowError> {
    if t_end <= initial.t || dt_cap <= 0.0 || snapshots < 2 {
        return Err(FlowError::InvalidParameter(
            "need t_end > t0, dt_cap > 0, snapshots >= 2".into(),
        ));
    }
    let snap_interval = (t_end - initial.t) / (snapshots - 1) as f64;
    let mut states = vec![initial.clone()];
    let mut current = initial;
    let mut next_snap = current.t + snap_interval;
    loop {
        let nf = current.n as f64;
        let min_r = current.r.iter().cloned().fold(f64::INFINITY, f64::min);
        let reaction_guard = 0.05 * min_r * min_r / (nf - 1.0);
        let dt = dt_cap
            .min(0.2 * current.dx * current.dx)
            .min(reaction_guard)
            .min(t_end - current.t);
        match profile_flow_step(&current, dt) {
            Ok(next) => current = next,
            Err(FlowError::ProfilePinchoff { t, .. }) => {
                states.push(current);
                return Ok((states, ProfileTermination::PinchedOff { t }));
            }
            Err(e) => return Err(e),
        }
        if current.t >= next_snap - 1e-15 {
            states.push(current.clone());
            next_snap += snap_interval;
        }
        if current.t >= t_end - 1e-15 {
            if states.last().map(|s| s.t) != Some(current.t) {
                states.push(current);
            }
            return Ok((states, ProfileTermination::ReachedFinalTime));
        }
    }
}

/// Validation driver for the sphere family: evolves a sphere patch with the
/// interior scheme while pinning the two boundary cells to the exact
/// shrinking sphere `R(t)² = R0² - 2nt` after every step (the graph chart
/// degenerates at the poles, so the exact solution supplies the boundary
/// data; the interior is genuinely computed).
pub fn drive_sphere_patch(
    n: usize,
    radius0: f64,
    x_max: f64,
    m: usize,
    t_end: f64,
    dt_cap: f64,
    snapshots: usize,
) -> Result<Vec<ProfileFlowState>, FlowError> {
    let mut current = ProfileFlowState::sphere_patch(n, radius0, x_max, m)?;
    let nf = n as f64;
    let final_r2 = radius0 * radius0 - 2.0 * nf * t_end;
    if final_r2 <= x_max * x_max {
        return Err(FlowError::InvalidParameter(
            "sphere collapses into the patch before t_end".into(),
        ));
    }
    if t_end <= 0.0 || snapshots < 2 {
        return Err(FlowError::InvalidParameter(
            "need t_end > 0 and snapshots >= 2".into(),
        ));
    }
    let pin = |state: &mut ProfileFlowState| {
        let r2 = radius0 * radius0 - 2.0 * nf * state.t;
        let xs = state.xs();
        let last = state.r.len() - 1;
        state.r[0] = (r2 - xs[0] * xs[0]).sqrt();
        state.r[last] = (r2 - xs[last] * xs[last]).sqrt();
    };
    let snap_interval = t_end / (snapshots - 1) as f64;
    let mut states = vec![current.clone()];
    let mut next_snap = snap_interval;
    while current.t < t_end - 1e-15 {
        let dt = dt_cap
            .min(0.2 * current.dx * current.dx)
            .min(t_end - current.t);
        let mut next = profile_flow_step(&current, dt)?;
        pin(&mut next);
        current = next;
        if current.t >= next_snap - 1e-15 {
            states.push(current.clone());
            next_snap += snap_interval;
        }
    }
    if states.last().map(|s| s.t) != Some(current.t) {
        states.push(current);
    }
    Ok(states)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cfl_violation_detected() {
        let s = ProfileFlowState::cylinder(5, 1.0, 4.0, 32).unwrap();
        let bound = 0.25 * s.dx * s.dx;
        assert!(matches!(
            profile_flow_step(&s, 2.0 * bound),
            Err(FlowError::CflViolation { .. })
        ));
    }

    #[test]
    fn cylinder_stays_exactly_uniform() {
        let s = ProfileFlowState::cylinder(5, 1.0, 4.0, 32).unwrap();
        let next = profile_flow_step(&s, 1e-5).unwrap();
        let first = next.r[0];
        assert!(next.r.iter().all(|&v| v == first));
    }

    #[test]
    fn cylinder_radius_tracks_closed_form() {
        let s = ProfileFlowState::cylinder(5, 1.0, 4.0, 16).unwrap();
        let t_end = 0.05;
        let (states, term) = drive_profile_flow(s, t_end, 1e-6, 6).unwrap();
        assert_eq!(term, ProfileTermination::ReachedFinalTime);
        for st in &states {
            let exact = (1.0 - 2.0 * 4.0 * st.t).sqrt();
            assert!(
                (st.r[0] - exact).abs() < 1e-6,
                "t = {}: r = {} vs {}",
                st.t,
                st.r[0],
                exact
            );
        }
    }

    #[test]
    fn pinchoff_reported() {
        // Thin cylinder collapses at t* = r0²/(2(n-1)) = 0.00125.
        let s = ProfileFlowState::cylinder(5, 0.1, 1.0, 16).unwrap();
        let (states, term) = drive_profile_flow(s, 1.0, 1e-5, 4).unwrap();
        match term {
            ProfileTermination::PinchedOff { t } => {
                assert!((t - 0.00125).abs() < 2e-4, "t = {t}");
            }
            other => panic!("expected pinch-off, got {other:?}"),
        }
        assert!(!states.is_empty());
    }

    #[test]
    fn sphere_patch_tracks_closed_form() {
        let n = 3;
        let t_end = 0.02;
        let states = drive_sphere_patch(n, 1.0, 0.5, 201, t_end, 1e-5, 3).unwrap();
        let last = states.last().unwrap();
        let r2 = 1.0 - 2.0 * n as f64 * last.t;
        let xs = last.xs();
        let mut worst: f64 = 0.0;
        for (i, &x) in xs.iter().enumerate() {
            let exact = (r2 - x * x).sqrt();
            worst = worst.max((last.r[i] - exact).abs());
        }
        assert!(worst < 1e-6, "max radius error {worst}");
    }

    #[test]
    fn geometry_of_cylinder() {
        let s = ProfileFlowState::cylinder(5, 2.0, 4.0, 32).unwrap();
        let g = s.geometry();
        for i in 0..s.len() {
            assert!(g.lambda_ax[i].abs() < 1e-14);
            assert!((g.lambda_sph[i] - 0.5).abs() < 1e-14);
            assert!((g.h[i] - 2.0).abs() < 1e-13);
        }
        // Total area of one period: |S^4| r^4 * length.
        let total: f64 = g.area_weight.iter().sum();
        let expect = unit_sphere_area(4) * 16.0 * 4.0;
        assert!((total - expect).abs() < 1e-9 * expect);
    }
}
