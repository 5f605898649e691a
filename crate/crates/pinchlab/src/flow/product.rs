//! Mean curvature flow of `S^p(a) x S^q(b)`, reduced to the radii ODE
//! `a' = -p/a`, `b' = -q/b` with first integrals
//! `a(t)² = a0² - 2p (t - t0)` and likewise for `b`.

use super::FlowError;
use crate::exact::HomogeneousSolution;

pub const COLLAPSE_RADIUS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductFlowState {
    pub p: usize,
    pub q: usize,
    pub a: f64,
    pub b: f64,
    pub t: f64,
}

impl ProductFlowState {
    pub fn solution(&self) -> HomogeneousSolution {
        HomogeneousSolution::SphereProduct {
            p: self.p,
            q: self.q,
            a: self.a,
            b: self.b,
        }
    }

    /// Deviation from the conserved quantity `a² - a0² + 2p(t - t0)`.
    pub fn first_integral_residual(&self, initial: &ProductFlowState) -> (f64, f64) {
        let dt = self.t - initial.t;
        (
            self.a * self.a - initial.a * initial.a + 2.0 * self.p as f64 * dt,
            self.b * self.b - initial.b * initial.b + 2.0 * self.q as f64 * dt,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductTermination {
    ReachedFinalTime,
    /// A factor shrank below [`COLLAPSE_RADIUS`].
    Collapsed,
}

fn rk4_step(p: f64, q: f64, a: f64, b: f64, dt: f64) -> Option<(f64, f64)> {
    let fa = |a: f64| -p / a;
    let fb = |b: f64| -q / b;
    let pos = |x: f64| x > 0.25 * COLLAPSE_RADIUS;

    let k1a = fa(a);
    let k1b = fb(b);
    let (a2, b2) = (a + 0.5 * dt * k1a, b + 0.5 * dt * k1b);
    if !pos(a2) || !pos(b2) {
        return None;
    }
    let k2a = fa(a2);
    let k2b = fb(b2);
    let (a3, b3) = (a + 0.5 * dt * k2a, b + 0.5 * dt * k2b);
    if !pos(a3) || !pos(b3) {
        return None;
    }
    let k3a = fa(a3);
    let k3b = fb(b3);
    let (a4, b4) = (a + dt * k3a, b + dt * k3b);
    if !pos(a4) || !pos(b4) {
        return None;
    }
    let k4a = fa(a4);
    let k4b = fb(b4);
    let an = a + dt / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
    let bn = b + dt / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
    if pos(an) && pos(bn) {
        Some((an, bn))
    } else {
        None
    }
}

/// Integrates the product flow from `(a0, b0)` at `t0` to `t1` with base
/// step `dt`, halving the step near collapse. The trajectory includes the
/// initial state; integration stops early once a factor reaches the collapse
/// radius.
pub fn product_flow_solve(
    p: usize,
    q: usize,
    a0: f64,
    b0: f64,
    t0: f64,
    t1: f64,
    dt: f64,
) -> Result<(Vec<ProductFlowState>, ProductTermination), FlowError> {
    if p < 1 || q < 1 {
        return Err(FlowError::InvalidParameter(
            "sphere product needs p, q >= 1".into(),
        ));
    }
    if !(a0 > 0.0 && b0 > 0.0) {
        return Err(FlowError::InvalidParameter(
            "initial radii must be positive".into(),
        ));
    }
    if !(dt > 0.0 && t1 > t0) {
        return Err(FlowError::InvalidParameter(
            "need dt > 0 and t1 > t0".into(),
        ));
    }
    let pf = p as f64;
    let qf = q as f64;
    let mut states = vec![ProductFlowState {
        p,
        q,
        a: a0,
        b: b0,
        t: t0,
    }];
    let mut a = a0;
    let mut b = b0;
    let mut t = t0;
    while t < t1 {
        if a.min(b) < COLLAPSE_RADIUS {
            return Ok((states, ProductTermination::Collapsed));
        }
        let mut h = dt.min(t1 - t);
        loop {
            match rk4_step(pf, qf, a, b, h) {
                Some((an, bn)) => {
                    a = an;
                    b = bn;
                    t += h;
                    break;
                }
                None => {
                    h *= 0.5;
                    if h < dt * 1e-12 {
                        return Err(FlowError::StepSizeUnderflow { t });
                    }
                }
            }
        }
        states.push(ProductFlowState { p, q, a, b, t });
        if a.min(b) < COLLAPSE_RADIUS {
            return Ok((states, ProductTermination::Collapsed));
        }
    }
    Ok((states, ProductTermination::ReachedFinalTime))
}
