//! The Aleksandrov reflection ordering R(M⁺) ≥ M⁻ as a measurable defect.
//!
//! Three cases: a sphere whose center lies on the reflection plane (exact
//! symmetry, defect 0), a near-equator sphere (strict ordering, positive
//! defect), and a constructed asymmetric bump that violates the ordering.
//!
//! Run with: cargo run --example reflection_ordering

use sphereflow::exact::ShrinkingSphere;
use sphereflow::flow::FlowState;
use sphereflow::grid::ProfileGrid;
use sphereflow::sphere::{EquatorFrame, ReflectionSpec};
use sphereflow::verify::reflection_check;
use std::f64::consts::FRAC_PI_2;

fn show(label: &str, report: &sphereflow::verify::ReflectionReport) {
    println!("{label}:");
    println!("  graph: {}", report.is_graph);
    match report.defect {
        Some(d) => println!("  defect (min reflected height - graph height) = {d:+.6e}"),
        None => println!("  no matched samples"),
    }
    match report.violating_region {
        Some((lo, hi)) => println!("  violating angles: [{lo:.3}, {hi:.3}]"),
        None => println!("  violating region: empty"),
    }
    println!("  matched samples: {}", report.matched_samples);
    println!();
}

fn main() {
    let frame = EquatorFrame::standard(2);

    // plane through the sphere's center: exact reflection symmetry
    let delta = 0.15;
    let family = ShrinkingSphere::on_axis(2, &frame, 0.5, delta).unwrap();
    let state = FlowState::new(0.0, family.sample_as_grid(0.0, 256, &frame).unwrap());
    let spec = ReflectionSpec::tilted(&frame, delta).unwrap();
    show(
        "sphere, reflection plane through center",
        &reflection_check(&state, &spec),
    );

    // near-equator sphere: the backward regime, strict ordering
    let near = ShrinkingSphere::centered(2, &frame, (FRAC_PI_2 - 0.01).cos()).unwrap();
    let state = FlowState::new(0.0, near.sample_as_grid(0.0, 200, &frame).unwrap());
    let spec = ReflectionSpec::tilted(&frame, 0.1).unwrap();
    show(
        "near-equator sphere (r = pi/2 - 0.01, delta = 0.1)",
        &reflection_check(&state, &spec),
    );

    // asymmetric bump on the far side: the ordering fails
    let grid = ProfileGrid::from_profile(2, 256, frame.clone(), |u| {
        FRAC_PI_2 - 0.02 - 0.12 * (-((u - 1.8) / 0.25).powi(2)).exp()
    })
    .unwrap();
    let state = FlowState::new(0.0, grid);
    show("asymmetric bump profile", &reflection_check(&state, &spec));
}
