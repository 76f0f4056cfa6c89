//! Backward decay of the ancient family: exponential bounds on H and |A|,
//! the logarithmic derivative bound ∂_t log H ≥ n, and the exponential
//! convergence of the surface to its limiting equator as t → −∞.
//!
//! Run with: cargo run --example backward_decay

use sphereflow::exact::ShrinkingSphere;
use sphereflow::sphere::EquatorFrame;
use sphereflow::verify::decay_check;

fn main() {
    let n = 2;
    let frame = EquatorFrame::standard(n);
    let family = ShrinkingSphere::centered(n, &frame, 0.5).unwrap();

    let report = decay_check(&family, &frame, -5.0, 0.0, 11, 64).unwrap();
    println!(
        "backward window t in [{}, {}]",
        report.window.0, report.window.1
    );
    println!();
    println!("bound margins (nonnegative means the bound holds):");
    println!(
        "  H(t)  <= H(0) e^(nt):   min margin {:.3e}",
        report.margin_h
    );
    println!(
        "  |A|(t)<= |A|(0) e^(nt): min margin {:.3e}",
        report.margin_a
    );
    println!(
        "  dt log H - n >= 0:      min margin {:.3e}",
        report.margin_dt_log_h
    );
    println!();
    println!("fitted exponential rates (n = {n}):");
    println!("  sup H:        {:.6}", report.rate_h);
    println!("  sup |A|:      {:.6}", report.rate_a);
    println!("  sup height:   {:.6}", report.rate_height);
    match report.rate_grad_a {
        Some(r) => println!("  sup |grad A|^2: {r:.6}"),
        None => println!("  sup |grad A|^2: at rounding floor (centered family has grad A = 0)"),
    }
    println!();
    println!(
        "realized constants: c0 = {:.6}, c1 = {:.3e}",
        report.c0_realized, report.c1_realized
    );
    println!(
        "limiting equator fit at t = -5: rms height {:.3e} (cos r(-5) = {:.3e})",
        report.fit_residual,
        family.cos_radius_at(-5.0).unwrap()
    );
    println!("pass: {}", report.pass);

    println!();
    println!("spot values at t = -1:");
    let h = family.mean_curvature_at(-1.0).unwrap();
    let bound = family.mean_curvature_at(0.0).unwrap() * (-2.0f64).exp();
    println!("  H(-1) = {h:.6} <= H(0) e^(-2) = {bound:.6}");
}
