//! Verification suites: every identity, inequality and bound measured
//! along trajectories or on the closed-form family, reported with
//! worst-case locations, tolerances and convergence orders.

pub mod decay;
pub mod equator_fit;
pub mod fields;
pub mod harnack;
pub mod identities;
pub mod inequalities;
pub mod reflection;

use crate::exact::ExactError;
use crate::flow::{FlowError, Trajectory};
use crate::shape::ShapeError;
use thiserror::Error;

pub use decay::{decay_check, DecayReport};
pub use equator_fit::{fit_limit_equator, EquatorFit};
pub use fields::DerivedFields;
pub use harnack::{
    harnack_check, q_ode_check, q_quantity, theta, DtHRoute, HarnackOptions, HarnackReport,
    QOdeReport,
};
pub use identities::{identity_residuals, identity_suite, IdentityReport, IdentityRow};
pub use inequalities::{inequality_suite, InequalityRow, InequalityStatus};
pub use reflection::{reflection_check, CosineSeries, ReflectionReport};

pub fn dt_route_name(route: DtHRoute) -> &'static str {
    match route {
        DtHRoute::Material => "material",
        DtHRoute::Identity => "identity",
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("mean curvature vanishes at node {node} (H = {value:.3e}); Q undefined")]
    ZeroMeanCurvature { node: usize, value: f64 },
    #[error("equator fit is degenerate: smallest eigenvalue gap {gap:.3e} < 1e-10")]
    DegenerateFit { gap: f64 },
    #[error("need at least {need} refinement levels, got {got}")]
    TooFewLevels { got: usize, need: usize },
    #[error("need at least {need} recorded states, got {got}")]
    TooFewStates { got: usize, need: usize },
    #[error("need at least {need} sample points, got {got}")]
    TooFewPoints { got: usize, need: usize },
}

/// Default check tolerance 10 (Δu² + Δt)(1 + max|A|³): the discretization
/// residual scale applied to third-order curvature expressions. Δt is the
/// largest recorded interval of the trajectory.
pub fn default_tolerance(traj: &Trajectory) -> f64 {
    let du = traj.state(0).grid.du();
    let mut dt_max = 0.0f64;
    for i in 1..traj.len() {
        dt_max = dt_max.max(traj.state(i).t - traj.state(i - 1).t);
    }
    let max_a = traj
        .states
        .iter()
        .map(|s| s.shape.max_abs_a())
        .fold(0.0f64, f64::max);
    10.0 * (du * du + dt_max) * (1.0 + max_a.powi(3))
}
