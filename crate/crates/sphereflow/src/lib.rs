//! Mean curvature flow of convex hypersurfaces in the unit sphere S^{n+1}.
//!
//! The flow moves an embedded hypersurface in the direction of its unit
//! normal with speed equal to the mean curvature, ∂_t F = −H ν. This crate
//! simulates the flow for axisymmetric radial graphs over a reference
//! equator and measures, along the computed trajectories, the quantities
//! that control the flow's behaviour: the full curvature ledger, the
//! evolution identities of the metric and second fundamental form, a
//! differential Harnack expression with its minimizing tangent direction,
//! exponential backward-decay bounds on the ancient shrinking-sphere family,
//! and the Aleksandrov reflection ordering.
//!
//! Everything is cross-checked against the closed-form family of shrinking
//! geodesic spheres, cos r(t) = κ₀ e^{nt}, which is exact at every node of a
//! centered sample and therefore serves as a machine-precision oracle.
//!
//! Module map:
//!
//! - [`sphere`] — exact spherical geometry: heights, radial projection,
//!   geodesic polar coordinates, hyperplane reflections.
//! - [`grid`] — the discrete axisymmetric profile ρ(u) over the equator.
//! - [`shape`] — curvature ledger by finite differences of the ambient
//!   embedding, with an independent rotational closed-form oracle.
//! - [`operators`] — covariant operators (Laplacians, Hessians, ∇A) on the
//!   warped-product surface metric.
//! - [`exact`] — the shrinking geodesic sphere and equator solutions.
//! - [`flow`] — explicit time integration of the graph flow with CFL step
//!   control and trajectory recording.
//! - [`verify`] — evaluation of every identity, inequality and bound along
//!   trajectories, producing structured reports.
//! - [`scenario`] — JSON scenario configs, CSV/JSON outputs, and the
//!   drivers behind the `sphereflow` command-line tool.

pub mod exact;
pub mod flow;
pub mod grid;
pub mod linalg;
pub mod operators;
pub mod rng;
pub mod scenario;
pub mod shape;
pub mod sphere;
pub mod stencil;
pub mod verify;

pub use exact::{EquatorSolution, ShrinkingSphere};
pub use flow::{FlowConfig, FlowState, Method, Termination, Trajectory};
pub use grid::ProfileGrid;
pub use shape::{ConvexityKind, ConvexityStatus, ShapeData};
pub use sphere::{EquatorFrame, ReflectionSpec, SpherePoint};
