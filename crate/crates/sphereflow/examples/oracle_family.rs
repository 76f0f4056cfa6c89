//! The closed-form oracle: ancient shrinking geodesic spheres.
//!
//! cos r(t) = κ₀ e^{nt}, H = n cot r, collapsing at t* = −ln(κ₀)/n and
//! emanating from an equator as t → −∞.
//!
//! Run with: cargo run --example oracle_family

use sphereflow::exact::ShrinkingSphere;
use sphereflow::sphere::EquatorFrame;

fn main() {
    let n = 2;
    let kappa0 = 0.5;
    let frame = EquatorFrame::standard(n);
    let family = ShrinkingSphere::centered(n, &frame, kappa0).unwrap();

    println!("shrinking geodesic sphere, n = {n}, kappa0 = cos r(0) = {kappa0}");
    println!("collapse time t* = {:.6}", family.collapse_time());
    println!();
    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>12} {:>12}",
        "t", "r", "H", "|A|^2", "dtH", "theta-nH"
    );
    for i in 0..12 {
        let t = -5.0 + 0.5 * i as f64;
        if t >= family.collapse_time() {
            break;
        }
        let r = family.radius_at(t).unwrap();
        let h = family.mean_curvature_at(t).unwrap();
        let asq = family.a_sq_at(t).unwrap();
        let dth = family.dt_h_at(t).unwrap();
        // on spheres ∇H = 0, so Θ − nH = H³/n > 0: no Harnack equality
        let harnack = h * h * h / n as f64;
        println!("{t:>6.2} {r:>10.6} {h:>10.6} {asq:>10.6} {dth:>12.6} {harnack:>12.6}");
    }

    println!();
    println!("radius law is exactly exponential: cos r(t2)/cos r(t1) = e^(n(t2-t1))");
    let (t1, t2) = (-3.0, 0.2);
    let ratio = family.cos_radius_at(t2).unwrap() / family.cos_radius_at(t1).unwrap();
    let expect = (n as f64 * (t2 - t1)).exp();
    println!("  t1 = {t1}, t2 = {t2}: ratio {ratio:.12}, e^(n dt) = {expect:.12}");

    println!();
    println!("backward bound H(t) <= H(0) e^(nt):");
    let h0 = family.mean_curvature_at(0.0).unwrap();
    for t in [-5.0, -2.0, -1.0] {
        let h = family.mean_curvature_at(t).unwrap();
        let bound = h0 * (n as f64 * t).exp();
        println!("  t = {t:>5.1}: H = {h:.6} <= bound {bound:.6}");
    }
}
