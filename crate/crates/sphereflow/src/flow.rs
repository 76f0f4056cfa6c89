//! Time integration of the graph form of the flow, ∂_t ρ = −H v.
//!
//! The radial speed is the normal speed −H divided by the radial component
//! of the unit normal; v = 1/⟨ν, ∂̂_ρ⟩ ≥ 1 is the graph factor. The system
//! is quasilinear parabolic with effective diffusion coefficient g^{uu}, so
//! explicit stepping obeys a CFL bound dt ≲ Δu²·cfl_safety/max(v g^{uu} + 1);
//! `run` caps every step at that bound and shortens the last step to land
//! exactly on t_end.
//!
//! Two independent routes to the paper-side time derivative of H are
//! provided: the evolution identity ΔH + H|A|² + nλH (spatial only), and a
//! material estimate from recorded states. The graph parametrization drags
//! nodes tangentially, so the material route adds the drift correction
//! ξ ∂_u H with ξ = H ρ'/(W sin ρ); [`dt_h_material`] without that term
//! would silently disagree with every normal-parametrization identity.

use crate::exact::{ExactError, ShrinkingSphere};
use crate::grid::ProfileGrid;
use crate::shape::{
    convexity_status, default_tol_convex, shape_data, ConvexityKind, ConvexityStatus, ShapeData,
};
use crate::sphere::EquatorFrame;
use crate::stencil::{central_dt, d1, Parity};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Radial normal component below which the graph chart is unusable.
pub const CHART_BREAKDOWN_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum FlowError {
    #[error("graph chart breakdown: <nu, rho_hat> = {value:.3e} at node {node}")]
    ChartBreakdown { node: usize, value: f64 },
    #[error("step rejected: {0}")]
    StepRejected(String),
    #[error("trajectory index {index} needs both neighbors (len {len})")]
    BoundaryIndex { index: usize, len: usize },
    #[error("invalid flow config: {0}")]
    BadConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Rk4,
    Euler,
}

/// Integration parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    /// Requested base step; every step is additionally capped by the CFL bound.
    pub dt: f64,
    pub t_end: f64,
    pub method: Method,
    #[serde(default = "default_cfl")]
    pub cfl_safety: f64,
    #[serde(default = "default_stop_min_radius")]
    pub stop_min_radius: f64,
    #[serde(default = "default_stop_max_a")]
    pub stop_max_a: f64,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
}

fn default_cfl() -> f64 {
    0.2
}
fn default_stop_min_radius() -> f64 {
    0.05
}
fn default_stop_max_a() -> f64 {
    1e4
}
fn default_record_every() -> usize {
    10
}

impl FlowConfig {
    fn validate(&self) -> Result<(), FlowError> {
        if self.dt.is_nan() || self.dt <= 0.0 {
            return Err(FlowError::BadConfig(format!(
                "dt = {} must be > 0",
                self.dt
            )));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(FlowError::BadConfig(format!(
                "cfl_safety = {} must lie in (0, 1]",
                self.cfl_safety
            )));
        }
        if !(self.stop_min_radius > 0.0 && self.stop_min_radius < std::f64::consts::FRAC_PI_2) {
            return Err(FlowError::BadConfig(format!(
                "stop_min_radius = {} must lie in (0, pi/2)",
                self.stop_min_radius
            )));
        }
        if self.record_every == 0 {
            return Err(FlowError::BadConfig("record_every must be >= 1".into()));
        }
        Ok(())
    }
}

/// One instant of the flow; the ledger is recomputed at construction and
/// never cached stale.
#[derive(Debug, Clone)]
pub struct FlowState {
    pub t: f64,
    pub grid: ProfileGrid,
    pub shape: ShapeData,
    pub convexity: ConvexityStatus,
}

impl FlowState {
    pub fn new(t: f64, grid: ProfileGrid) -> Self {
        let shape = shape_data(&grid);
        let convexity = convexity_status(&shape, default_tol_convex(&shape));
        Self {
            t,
            grid,
            shape,
            convexity,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StepLogEntry {
    pub t: f64,
    pub dt: f64,
    pub max_a: f64,
    pub convexity_margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    ReachedTEnd,
    MinRadius,
    ConvexityLost,
    Blowup,
    StepFailure,
    ChartBreakdown,
}

/// Time-ordered recorded states plus step metadata.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub states: Vec<FlowState>,
    pub step_log: Vec<StepLogEntry>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, i: usize) -> &FlowState {
        &self.states[i]
    }

    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.t).collect()
    }

    /// Builds a trajectory from sampled closed-form states of the shrinking
    /// sphere family (no integration); useful as a machine-precision oracle.
    pub fn from_family(
        family: &ShrinkingSphere,
        frame: &EquatorFrame,
        times: &[f64],
        segments: usize,
    ) -> Result<Self, ExactError> {
        let mut states = Vec::with_capacity(times.len());
        for &t in times {
            states.push(FlowState::new(
                t,
                family.sample_as_grid(t, segments, frame)?,
            ));
        }
        Ok(Self {
            states,
            step_log: Vec::new(),
            termination: Termination::ReachedTEnd,
        })
    }
}

/// Radial velocity dρ/dt = −H·v at every node.
pub fn rhs(state: &FlowState) -> Result<Vec<f64>, FlowError> {
    let shape = &state.shape;
    for k in 0..shape.node_count() {
        let radial = 1.0 / shape.graph_factor[k];
        if radial <= CHART_BREAKDOWN_TOL {
            return Err(FlowError::ChartBreakdown {
                node: k,
                value: radial,
            });
        }
    }
    Ok((0..shape.node_count())
        .map(|k| -shape.h[k] * shape.graph_factor[k])
        .collect())
}

/// Largest stable step, cfl_safety · Δu² / max(v·g^{uu} + 1).
pub fn cfl_dt(state: &FlowState, cfl_safety: f64) -> f64 {
    let shape = &state.shape;
    let scale = (0..shape.node_count())
        .map(|k| shape.graph_factor[k] / shape.g_uu[k] + 1.0)
        .fold(0.0f64, f64::max);
    let du = state.grid.du();
    cfl_safety * du * du / scale
}

/// One explicit step; the shape of the returned state is recomputed.
/// Rejects steps whose result violates the grid invariants.
pub fn step(state: &FlowState, dt: f64, method: Method) -> Result<FlowState, FlowError> {
    let rho0 = state.grid.rho();
    let advance = |slope: &[f64], c: f64| -> Result<FlowState, FlowError> {
        let rho: Vec<f64> = rho0
            .iter()
            .zip(slope)
            .map(|(r, s)| r + c * dt * s)
            .collect();
        let grid = state
            .grid
            .with_rho(rho)
            .map_err(|e| FlowError::StepRejected(e.to_string()))?;
        Ok(FlowState::new(state.t + c * dt, grid))
    };
    match method {
        Method::Euler => {
            let k1 = rhs(state)?;
            advance(&k1, 1.0)
        }
        Method::Rk4 => {
            let k1 = rhs(state)?;
            let s2 = advance(&k1, 0.5)?;
            let k2 = rhs(&s2)?;
            let s3 = advance(&k2, 0.5)?;
            let k3 = rhs(&s3)?;
            let s4 = advance(&k3, 1.0)?;
            let k4 = rhs(&s4)?;
            let slope: Vec<f64> = (0..k1.len())
                .map(|i| (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0)
                .collect();
            advance(&slope, 1.0)
        }
    }
}

/// Integrates from the initial state until t_end or a stop condition,
/// recording every `record_every`-th accepted state plus the final one.
pub fn run(initial: FlowState, config: &FlowConfig) -> Result<Trajectory, FlowError> {
    config.validate()?;
    let initially_convex = initial.convexity.kind != ConvexityKind::Nonconvex;
    let t_start = initial.t;
    let mut states = vec![initial.clone()];
    let mut step_log = Vec::new();
    let mut current = initial;
    let mut accepted: usize = 0;

    let termination = loop {
        let remaining = config.t_end - current.t;
        if remaining <= 1e-15 * (1.0 + config.t_end.abs() + t_start.abs()) {
            break Termination::ReachedTEnd;
        }
        let mut dt = config
            .dt
            .min(remaining)
            .min(cfl_dt(&current, config.cfl_safety));
        let mut outcome = step(&current, dt, config.method);
        let mut rejections = 0;
        while let Err(FlowError::StepRejected(_)) = outcome {
            rejections += 1;
            if rejections >= 5 {
                break;
            }
            dt *= 0.5;
            outcome = step(&current, dt, config.method);
        }
        match outcome {
            Ok(next) => {
                current = next;
                accepted += 1;
                step_log.push(StepLogEntry {
                    t: current.t,
                    dt,
                    max_a: current.shape.max_abs_a(),
                    convexity_margin: current.shape.margin,
                });
                if accepted.is_multiple_of(config.record_every) {
                    states.push(current.clone());
                }
                let min_rho = current
                    .grid
                    .rho()
                    .iter()
                    .cloned()
                    .fold(f64::INFINITY, f64::min);
                if min_rho < config.stop_min_radius {
                    break Termination::MinRadius;
                }
                if current.shape.max_abs_a() > config.stop_max_a {
                    break Termination::Blowup;
                }
                if initially_convex && current.convexity.kind == ConvexityKind::Nonconvex {
                    break Termination::ConvexityLost;
                }
            }
            Err(FlowError::ChartBreakdown { .. }) => break Termination::ChartBreakdown,
            Err(FlowError::StepRejected(_)) => break Termination::StepFailure,
            Err(e) => return Err(e),
        }
    };
    if states
        .last()
        .map(|s| (s.t - current.t).abs() > 1e-15)
        .unwrap_or(true)
    {
        states.push(current);
    }
    Ok(Trajectory {
        states,
        step_log,
        termination,
    })
}

/// Evolution-identity route: ∂_t H = ΔH + H|A|² + nλH, nodewise.
pub fn dt_h_identity(state: &FlowState) -> Vec<f64> {
    let shape = &state.shape;
    let n = shape.n as f64;
    (0..shape.node_count())
        .map(|k| shape.lap_h[k] + shape.h[k] * shape.a_sq[k] + n * shape.h[k])
        .collect()
}

/// Drift speed ξ = H ρ'/(W sin ρ) of the graph parametrization relative to
/// the normal parametrization (u̇ of a normally-moving particle).
pub fn drift_speed(state: &FlowState) -> Vec<f64> {
    let shape = &state.shape;
    let rp = state.grid.rho_prime();
    (0..shape.node_count())
        .map(|k| shape.h[k] * rp[k] / (shape.w[k] * shape.sin_rho[k]))
        .collect()
}

/// Material (normal-parametrization) estimate of ∂_t H at a recorded index:
/// the fixed-u central time difference plus the tangential correction ξ ∂_u H.
pub fn dt_h_material(traj: &Trajectory, index: usize) -> Result<Vec<f64>, FlowError> {
    if index == 0 || index + 1 >= traj.len() {
        return Err(FlowError::BoundaryIndex {
            index,
            len: traj.len(),
        });
    }
    let prev = traj.state(index - 1);
    let mid = traj.state(index);
    let next = traj.state(index + 1);
    let hm = mid.t - prev.t;
    let hp = next.t - mid.t;
    let xi = drift_speed(mid);
    Ok((0..mid.shape.node_count())
        .map(|k| {
            central_dt(prev.shape.h[k], mid.shape.h[k], next.shape.h[k], hm, hp)
                + xi[k] * mid.shape.grad_h_u[k]
        })
        .collect())
}

/// Fixed-u central time difference of an arbitrary per-state field.
pub(crate) fn graph_dt(
    traj: &Trajectory,
    index: usize,
    field: impl Fn(&FlowState) -> Vec<f64>,
) -> Result<Vec<f64>, FlowError> {
    if index == 0 || index + 1 >= traj.len() {
        return Err(FlowError::BoundaryIndex {
            index,
            len: traj.len(),
        });
    }
    let prev = field(traj.state(index - 1));
    let mid = field(traj.state(index));
    let next = field(traj.state(index + 1));
    let hm = traj.state(index).t - traj.state(index - 1).t;
    let hp = traj.state(index + 1).t - traj.state(index).t;
    Ok((0..mid.len())
        .map(|k| central_dt(prev[k], mid[k], next[k], hm, hp))
        .collect())
}

/// Material derivative of an even scalar field along the normal flow:
/// graph time difference plus ξ ∂_u f.
pub fn material_dt(
    traj: &Trajectory,
    index: usize,
    field: impl Fn(&FlowState) -> Vec<f64>,
) -> Result<Vec<f64>, FlowError> {
    let mid = traj.state(index);
    let f_mid = field(mid);
    let df = d1(&f_mid, mid.grid.du(), Parity::Even);
    let xi = drift_speed(mid);
    let gdt = graph_dt(traj, index, field)?;
    Ok((0..gdt.len()).map(|k| gdt[k] + xi[k] * df[k]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ShrinkingSphere;
    use crate::sphere::EquatorFrame;
    use std::f64::consts::PI;

    fn sphere_state(n: usize, segs: usize, kappa0: f64, t: f64) -> (ShrinkingSphere, FlowState) {
        let frame = EquatorFrame::standard(n);
        let s = ShrinkingSphere::centered(n, &frame, kappa0).unwrap();
        let grid = s.sample_as_grid(t, segs, &frame).unwrap();
        (s, FlowState::new(t, grid))
    }

    #[test]
    fn equator_is_a_fixed_point() {
        let frame = EquatorFrame::standard(2);
        let grid = ProfileGrid::equator(2, 32, frame).unwrap();
        let state = FlowState::new(0.0, grid);
        let next = step(&state, 1e-3, Method::Rk4).unwrap();
        for (a, b) in next.grid.rho().iter().zip(state.grid.rho()) {
            assert!((a - b).abs() < 1e-14, "equator drifted");
        }
    }

    #[test]
    fn sphere_rhs_is_uniform_minus_n_cot() {
        let (_, state) = sphere_state(2, 64, 0.5, 0.0);
        let v = rhs(&state).unwrap();
        let want = -2.0 / (PI / 3.0).tan();
        for x in v {
            assert!((x - want).abs() < 1e-12);
        }
    }

    #[test]
    fn single_rk4_step_matches_radius_law_to_local_order() {
        let (s, state) = sphere_state(2, 32, 0.5, 0.0);
        let dt = 1e-3;
        let next = step(&state, dt, Method::Rk4).unwrap();
        let want = s.radius_at(dt).unwrap();
        for r in next.grid.rho() {
            assert!((r - want).abs() < 1e-12, "local error too large");
        }
    }

    #[test]
    fn run_tracks_the_radius_law() {
        let (s, state) = sphere_state(2, 64, 0.5, 0.0);
        let config = FlowConfig {
            dt: 1e-4,
            t_end: 0.1,
            method: Method::Rk4,
            cfl_safety: 0.2,
            stop_min_radius: 0.05,
            stop_max_a: 1e4,
            record_every: 50,
        };
        let traj = run(state, &config).unwrap();
        assert_eq!(traj.termination, Termination::ReachedTEnd);
        let last = traj.states.last().unwrap();
        assert!((last.t - 0.1).abs() < 1e-12);
        let want = s.cos_radius_at(0.1).unwrap();
        for r in last.grid.rho() {
            assert!(
                (r.cos() - want).abs() / want < 1e-7,
                "cos r = {}, want {want}",
                r.cos()
            );
        }
    }

    #[test]
    fn run_stops_before_collapse() {
        let (s, state) = sphere_state(2, 32, 0.5, 0.0);
        let config = FlowConfig {
            dt: 1e-3,
            t_end: 1.0, // beyond t* ≈ 0.3466
            method: Method::Rk4,
            cfl_safety: 0.2,
            stop_min_radius: 0.3,
            stop_max_a: 1e4,
            record_every: 100,
        };
        let traj = run(state, &config).unwrap();
        assert_eq!(traj.termination, Termination::MinRadius);
        let last = traj.states.last().unwrap();
        assert!(last.t < s.collapse_time());
    }

    #[test]
    fn euler_and_rk4_global_orders() {
        // spatially exact on centered spheres, so the global error is purely
        // temporal; fit the order from three step sizes
        let frame = EquatorFrame::standard(2);
        let s = ShrinkingSphere::centered(2, &frame, 0.5).unwrap();
        let t_end = 0.2;
        let exact = s.radius_at(t_end).unwrap();
        let mut orders = Vec::new();
        for method in [Method::Euler, Method::Rk4] {
            let mut errs = Vec::new();
            for &dt in &[1e-3, 2e-3, 4e-3] {
                let grid = s.sample_as_grid(0.0, 16, &frame).unwrap();
                let config = FlowConfig {
                    dt,
                    t_end,
                    method,
                    cfl_safety: 1.0,
                    stop_min_radius: 0.05,
                    stop_max_a: 1e4,
                    record_every: 1_000_000,
                };
                let traj = run(FlowState::new(0.0, grid), &config).unwrap();
                let r = traj.states.last().unwrap().grid.rho()[0];
                errs.push((r - exact).abs());
            }
            let order = ((errs[2] / errs[1]).ln() / 2.0f64.ln()
                + (errs[1] / errs[0]).ln() / 2.0f64.ln())
                / 2.0;
            orders.push(order);
        }
        assert!((orders[0] - 1.0).abs() < 0.15, "euler order {}", orders[0]);
        assert!(orders[1] > 3.5, "rk4 order {}", orders[1]);
    }

    #[test]
    fn dt_h_identity_sphere_closed_form() {
        let (_, state) = sphere_state(2, 64, 0.5, 0.0);
        let want = 16.0 / (3.0 * 3.0f64.sqrt());
        for v in dt_h_identity(&state) {
            assert!((v - want).abs() < 1e-12, "got {v}, want {want}");
        }
        let frame = EquatorFrame::standard(2);
        let eq = FlowState::new(0.0, ProfileGrid::equator(2, 32, frame).unwrap());
        for v in dt_h_identity(&eq) {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn dt_h_material_matches_identity_on_family() {
        let frame = EquatorFrame::standard(2);
        let s = ShrinkingSphere::centered(2, &frame, 0.5).unwrap();
        let dt = 2e-5;
        let times = [-dt, 0.0, dt];
        let traj = Trajectory::from_family(&s, &frame, &times, 64).unwrap();
        let material = dt_h_material(&traj, 1).unwrap();
        let identity = dt_h_identity(traj.state(1));
        for k in 0..material.len() {
            assert!(
                (material[k] - identity[k]).abs() < 1e-7,
                "node {k}: {} vs {}",
                material[k],
                identity[k]
            );
        }
        assert!(matches!(
            dt_h_material(&traj, 0),
            Err(FlowError::BoundaryIndex { .. })
        ));
    }

    #[test]
    fn off_center_rhs_matches_family_time_derivative() {
        // the graph velocity of the off-axis family: closed-form central
        // difference of ρ(u, t) at fixed u vs −H v from the ledger
        let frame = EquatorFrame::standard(2);
        let s = ShrinkingSphere::on_axis(2, &frame, 0.5, 0.2).unwrap();
        let segs = 256;
        let state = FlowState::new(0.0, s.sample_as_grid(0.0, segs, &frame).unwrap());
        let v = rhs(&state).unwrap();
        let dt = 1e-5;
        let before = s.sample_as_grid(-dt, segs, &frame).unwrap();
        let after = s.sample_as_grid(dt, segs, &frame).unwrap();
        for (k, v_k) in v.iter().enumerate() {
            let fd = (after.rho()[k] - before.rho()[k]) / (2.0 * dt);
            assert!(
                (v_k - fd).abs() < 5e-4,
                "node {k}: rhs {v_k} vs family {fd}"
            );
        }
    }

    #[test]
    fn overshooting_step_is_rejected() {
        // a step large enough to push ρ through 0 violates the grid
        // invariants and must be rejected, not produce a broken state
        let (_, state) = sphere_state(2, 32, (0.35f64).cos(), 0.0);
        assert!(matches!(
            step(&state, 1.0, Method::Euler),
            Err(FlowError::StepRejected(_))
        ));
    }

    #[test]
    fn near_vertical_chart_breaks_down() {
        // a mid-grid ramp from ρ ~ 1e-7 with slope ~ O(1/Δu) makes the
        // radial component of the normal collapse below the chart threshold
        let frame = EquatorFrame::standard(2);
        let segs = 64usize;
        let rho: Vec<f64> = (0..=segs)
            .map(|k| {
                let ramp = (k as f64 - 20.0).clamp(0.0, 8.0) / 8.0;
                1e-7 + ramp * 0.8
            })
            .collect();
        let grid = crate::grid::ProfileGrid::new(2, rho, frame).unwrap();
        let state = FlowState::new(0.0, grid);
        assert!(matches!(rhs(&state), Err(FlowError::ChartBreakdown { .. })));
    }

    #[test]
    fn cfl_cap_is_enforced() {
        let (_, state) = sphere_state(2, 64, 0.5, 0.0);
        let cap = cfl_dt(&state, 0.2);
        let config = FlowConfig {
            dt: 1e-2, // far above the cap
            t_end: 0.01,
            method: Method::Rk4,
            cfl_safety: 0.2,
            stop_min_radius: 0.05,
            stop_max_a: 1e4,
            record_every: 1,
        };
        let traj = run(state, &config).unwrap();
        assert_eq!(traj.termination, Termination::ReachedTEnd);
        for entry in &traj.step_log {
            assert!(entry.dt <= cap * (1.0 + 1e-12));
        }
    }

    #[test]
    fn near_equator_profile_flows_without_losing_graph() {
        let frame = EquatorFrame::standard(2);
        let grid = ProfileGrid::from_cosine_coefficients(2, 64, frame, &[0.3, 0.0, 0.05]).unwrap();
        let state = FlowState::new(0.0, grid);
        assert_eq!(state.convexity.kind, ConvexityKind::Strict);
        let config = FlowConfig {
            dt: 5e-4,
            t_end: 0.05,
            method: Method::Rk4,
            cfl_safety: 0.2,
            stop_min_radius: 0.05,
            stop_max_a: 1e4,
            record_every: 10,
        };
        let traj = run(state, &config).unwrap();
        assert_eq!(traj.termination, Termination::ReachedTEnd);
        for s in &traj.states {
            assert!(s.shape.is_graph());
            assert!(s.convexity.margin > 0.0, "H stays positive, margin > 0");
        }
    }
}
