//! The differential Harnack expression and its ODE comparison scalar.
//!
//! For strictly convex states the quadratic form A(V,V) + 2 D_V H over
//! tangent vectors V is minimized at V* = −b∇H with minimum −b^{ij}∇_iH∇_jH,
//! so the full expression ∂_tH + H/(2(t−t₀)) + 2D_VH + A(V,V) − nH is
//! bounded below by Θ − nH + H/(2(t−t₀)) with Θ = ∂_tH − b^{ij}∇_iH∇_jH.
//! The check evaluates the minimized form everywhere and spot-checks the
//! minimality of V* against seeded sample directions.

use crate::flow::{dt_h_identity, dt_h_material, FlowState, Trajectory};
use crate::rng::SplitMix64;
use crate::verify::{default_tolerance, VerifyError};
use serde::{Deserialize, Serialize};

/// Which route supplies ∂_t H.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DtHRoute {
    /// Central time differences of recorded states plus the tangential
    /// drift correction.
    Material,
    /// The evolution identity ΔH + H|A|² + nλH (spatial only).
    Identity,
}

/// Θ = ∂_tH − b^{ij}∇_iH∇_jH nodewise; requires strict convexity.
pub fn theta(state: &FlowState, dt_h: &[f64]) -> Result<Vec<f64>, VerifyError> {
    let ng = state.shape.norm_grad_h_b()?;
    Ok(dt_h.iter().zip(ng).map(|(d, w)| d - w).collect())
}

/// Q = (Θ − nλH)/H with λ = 1; requires H > 0 at every node.
pub fn q_quantity(state: &FlowState, theta: &[f64]) -> Result<Vec<f64>, VerifyError> {
    let n = state.shape.n as f64;
    let mut out = Vec::with_capacity(theta.len());
    for (k, (&th, &h)) in theta.iter().zip(&state.shape.h).enumerate() {
        if h <= 1e-14 {
            return Err(VerifyError::ZeroMeanCurvature { node: k, value: h });
        }
        out.push((th - n * h) / h);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct HarnackOptions {
    /// Flow origin t₀ of the H/(2(t−t₀)) term.
    pub t_origin: f64,
    /// Pass tolerance; None picks the trajectory default.
    pub tol: Option<f64>,
    pub route: DtHRoute,
    /// Seed for the sampled minimality directions.
    pub seed: u64,
    /// Sampled directions per node.
    pub directions: usize,
    /// Test fixture: flips the sign of the nλH term inside the
    /// evolution-identity ∂_tH, which corrupts the check.
    pub negative_control: bool,
}

impl Default for HarnackOptions {
    fn default() -> Self {
        Self {
            t_origin: 0.0,
            tol: None,
            route: DtHRoute::Material,
            seed: 0,
            directions: 8,
            negative_control: false,
        }
    }
}

/// Per-recorded-time slice of the Harnack evaluation.
#[derive(Debug, Clone)]
pub struct HarnackSlice {
    pub t: f64,
    pub theta: Vec<f64>,
    pub q: Vec<f64>,
    /// Θ − nH + H/(2(t−t₀)), the minimized expression.
    pub expr: Vec<f64>,
    /// Orthonormal components (profile, angular) of V* = −b∇H.
    pub minimizer: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct HarnackReport {
    pub slices: Vec<HarnackSlice>,
    pub global_min: f64,
    pub worst_node: usize,
    pub worst_time: f64,
    pub tolerance_used: f64,
    /// min over nodes and sampled V of full(V) − full(V*).
    pub minimality_slack_min: f64,
    pub route: DtHRoute,
    /// States skipped because they were not strictly convex.
    pub skipped_states: usize,
    pub pass: bool,
}

fn dt_h_for(
    traj: &Trajectory,
    index: usize,
    opts: &HarnackOptions,
) -> Result<Vec<f64>, VerifyError> {
    let state = traj.state(index);
    if opts.negative_control {
        let shape = &state.shape;
        let n = shape.n as f64;
        return Ok((0..shape.node_count())
            .map(|k| shape.lap_h[k] + shape.h[k] * shape.a_sq[k] - n * shape.h[k])
            .collect());
    }
    Ok(match opts.route {
        DtHRoute::Material => dt_h_material(traj, index)?,
        DtHRoute::Identity => dt_h_identity(state),
    })
}

/// Evaluates the minimized Harnack expression at every strictly convex
/// recorded state with t > t₀ and spot-checks minimality of V* = −b∇H.
pub fn harnack_check(
    traj: &Trajectory,
    opts: &HarnackOptions,
) -> Result<HarnackReport, VerifyError> {
    let tol = opts.tol.unwrap_or_else(|| default_tolerance(traj));
    let mut rng = SplitMix64::new(opts.seed);
    let range = match opts.route {
        DtHRoute::Material => 1..traj.len().saturating_sub(1),
        DtHRoute::Identity => 0..traj.len(),
    };
    let mut slices = Vec::new();
    let mut global_min = f64::INFINITY;
    let mut worst_node = 0;
    let mut worst_time = f64::NAN;
    let mut min_slack = f64::INFINITY;
    let mut skipped = 0usize;

    for i in range {
        let state = traj.state(i);
        let t = state.t;
        if t <= opts.t_origin {
            continue;
        }
        if !state.shape.is_strictly_convex() {
            skipped += 1;
            continue;
        }
        let dt_h = dt_h_for(traj, i, opts)?;
        let th = theta(state, &dt_h)?;
        let q = q_quantity(state, &th)?;
        let shape = &state.shape;
        let n = shape.n as f64;
        let halftime = 1.0 / (2.0 * (t - opts.t_origin));
        let mut expr = Vec::with_capacity(th.len());
        let mut minimizer = Vec::with_capacity(th.len());
        for k in 0..th.len() {
            let e = th[k] - n * shape.h[k] + shape.h[k] * halftime;
            if e < global_min {
                global_min = e;
                worst_node = k;
                worst_time = t;
            }
            expr.push(e);

            let grad_unit = shape.grad_h_u[k] / shape.w[k];
            let v1_star = -grad_unit / shape.kappa1[k];
            minimizer.push((v1_star, 0.0));
            // full(V) − full(V*) = κ₁(V₁ − V₁*)² + κ₂ V_ang²; sampled V
            // overdetermine the 2-dimensional quadratic form.
            let scale = v1_star.abs().max(0.1);
            for j in 0..opts.directions {
                let angle =
                    (j as f64 + rng.next_f64()) * std::f64::consts::TAU / opts.directions as f64;
                let mag = scale * rng.range(0.5, 2.0);
                let v1 = mag * angle.cos();
                let vang = mag * angle.sin();
                let full_v = dt_h[k]
                    + shape.h[k] * halftime
                    + 2.0 * v1 * grad_unit
                    + shape.kappa1[k] * v1 * v1
                    + shape.kappa2[k] * vang * vang
                    - n * shape.h[k];
                min_slack = min_slack.min(full_v - e);
            }
        }
        slices.push(HarnackSlice {
            t,
            theta: th,
            q,
            expr,
            minimizer,
        });
    }
    // an empty evaluation (no strictly convex states past t₀) proves nothing
    let pass = !slices.is_empty() && global_min >= -tol && min_slack >= -1e-10;
    Ok(HarnackReport {
        slices,
        global_min,
        worst_node,
        worst_time,
        tolerance_used: tol,
        minimality_slack_min: min_slack,
        route: opts.route,
        skipped_states: skipped,
        pass,
    })
}

#[derive(Debug, Clone)]
pub struct QOdeReport {
    /// min over nodes and recorded times of Q − q(t), q(t) = −1/(2(t−t₀−ε)).
    pub min_margin: f64,
    pub worst_node: usize,
    pub worst_time: f64,
    pub tolerance_used: f64,
    pub skipped_states: usize,
    pub pass: bool,
}

/// ODE comparison: Q(·, t) ≥ −1/(2(t − t₀ − ε)) for t − t₀ > ε.
pub fn q_ode_check(
    traj: &Trajectory,
    epsilon: f64,
    t_origin: f64,
    tol: Option<f64>,
) -> Result<QOdeReport, VerifyError> {
    let tol = tol.unwrap_or_else(|| default_tolerance(traj));
    let mut min_margin = f64::INFINITY;
    let mut worst_node = 0;
    let mut worst_time = f64::NAN;
    let mut skipped = 0usize;
    for i in 0..traj.len() {
        let state = traj.state(i);
        let tau = state.t - t_origin;
        if tau <= epsilon {
            continue;
        }
        if !state.shape.is_strictly_convex() {
            skipped += 1;
            continue;
        }
        let dt_h = dt_h_identity(state);
        let th = theta(state, &dt_h)?;
        let q = q_quantity(state, &th)?;
        let bound = -1.0 / (2.0 * (tau - epsilon));
        for (k, &qk) in q.iter().enumerate() {
            let margin = qk - bound;
            if margin < min_margin {
                min_margin = margin;
                worst_node = k;
                worst_time = state.t;
            }
        }
    }
    let evaluated = min_margin.is_finite();
    Ok(QOdeReport {
        min_margin,
        worst_node,
        worst_time,
        tolerance_used: tol,
        skipped_states: skipped,
        pass: evaluated && min_margin >= -tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ShrinkingSphere;
    use crate::sphere::EquatorFrame;
    use std::f64::consts::PI;

    fn family_traj(kappa0: f64, t_mid: f64, dt: f64, segs: usize) -> (ShrinkingSphere, Trajectory) {
        let frame = EquatorFrame::standard(2);
        let s = ShrinkingSphere::centered(2, &frame, kappa0).unwrap();
        let times = [t_mid - dt, t_mid, t_mid + dt];
        let traj = Trajectory::from_family(&s, &frame, &times, segs).unwrap();
        (s, traj)
    }

    #[test]
    fn theta_and_q_sphere_closed_forms() {
        let (_, traj) = family_traj(0.5, 0.0, 1e-4, 64);
        let state = traj.state(1);
        let th = theta(state, &dt_h_identity(state)).unwrap();
        let want_theta = 16.0 / (3.0 * 3.0f64.sqrt());
        let q = q_quantity(state, &th).unwrap();
        let cot2 = 1.0 / (PI / 3.0).tan().powi(2);
        for k in 0..th.len() {
            assert!((th[k] - want_theta).abs() < 1e-10);
            // Q = n cot² r = H²/n
            assert!((q[k] - 2.0 * cot2).abs() < 1e-10);
        }
    }

    #[test]
    fn theta_requires_strict_convexity() {
        let frame = EquatorFrame::standard(2);
        let grid = crate::grid::ProfileGrid::equator(2, 32, frame).unwrap();
        let state = crate::flow::FlowState::new(0.0, grid);
        let dt_h = dt_h_identity(&state);
        assert!(theta(&state, &dt_h).is_err());
    }

    #[test]
    fn harnack_matches_closed_form_on_family() {
        let (s, traj) = family_traj(0.5, 0.1, 1e-4, 64);
        let opts = HarnackOptions {
            t_origin: 0.0,
            ..Default::default()
        };
        let report = harnack_check(&traj, &opts).unwrap();
        assert!(report.pass);
        let want = s.harnack_closed_form(0.1, 0.0).unwrap();
        let slice = &report.slices[0];
        for &e in &slice.expr {
            assert!(
                (e - want).abs() < 1e-6,
                "pipeline {e} vs closed form {want}"
            );
        }
        assert!(report.minimality_slack_min >= -1e-10);
    }

    #[test]
    fn negative_control_fails_on_family() {
        // flipped nλH sign inside ∂_tH makes Θ − nH ≈ H³/n − 2nH < 0 once the
        // H/(2(t−t₀)) term is small, so the check must go negative
        let (_, traj) = family_traj(0.5, 0.0, 1e-4, 48);
        let opts = HarnackOptions {
            t_origin: -1.0,
            negative_control: true,
            ..Default::default()
        };
        let report = harnack_check(&traj, &opts).unwrap();
        assert!(!report.pass, "corrupted sign must fail");
        assert!(report.global_min < 0.0);
    }

    #[test]
    fn q_ode_on_family() {
        let (_, traj) = family_traj(0.5, 0.1, 1e-4, 48);
        let report = q_ode_check(&traj, 0.01, 0.0, None).unwrap();
        assert!(report.pass);
        // Q = n cot²r > 0 > q(t)
        assert!(report.min_margin > 0.0);
    }
}
