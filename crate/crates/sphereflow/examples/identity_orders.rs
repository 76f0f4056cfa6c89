//! Convergence study of the evolution-identity residuals.
//!
//! Every identity of the curvature ledger under the flow (metric, inverse
//! metric, Weingarten map, second fundamental form, mean curvature, the
//! time/space commutators, and the |A|² law) is evaluated along runs at
//! three grid refinements; plain identities must converge at second order,
//! nested time differences at first.
//!
//! Run with: cargo run --release --example identity_orders

use sphereflow::flow::{run, FlowConfig, FlowState, Method, Trajectory};
use sphereflow::grid::ProfileGrid;
use sphereflow::sphere::EquatorFrame;
use sphereflow::verify::identity_suite;

fn level(segments: usize) -> Trajectory {
    let du = std::f64::consts::PI / segments as f64;
    let grid = ProfileGrid::from_cosine_coefficients(
        2,
        segments,
        EquatorFrame::standard(2),
        &[0.3, 0.0, 0.05],
    )
    .unwrap();
    let dt = 0.04 * du * du;
    let config = FlowConfig {
        dt,
        t_end: 0.02,
        method: Method::Rk4,
        cfl_safety: 0.2,
        stop_min_radius: 0.05,
        stop_max_a: 1e4,
        record_every: ((0.02 * du / dt).round() as usize).max(1),
    };
    run(FlowState::new(0.0, grid), &config).unwrap()
}

fn main() {
    let resolutions = [64usize, 128, 256];
    println!("running refinement ladder N = {resolutions:?} ...");
    let ladder: Vec<Trajectory> = resolutions.iter().map(|&s| level(s)).collect();
    let refs: Vec<&Trajectory> = ladder.iter().collect();
    let report = identity_suite(&refs).unwrap();

    println!();
    println!(
        "{:<34} {:>11} {:>11} {:>11} {:>8} {:>6}",
        "identity", "res 64", "res 128", "res 256", "order", "pass"
    );
    for row in &report.rows {
        let order = if row.exact {
            "exact".to_string()
        } else {
            format!("{:.2}", row.order.unwrap())
        };
        let kind = if row.nested { " (nested)" } else { "" };
        println!(
            "{:<34} {:>11.3e} {:>11.3e} {:>11.3e} {:>8} {:>6}",
            format!("{}{}", row.id, kind),
            row.residuals[0],
            row.residuals[1],
            row.residuals[2],
            order,
            row.pass
        );
    }
}
