//! Backward-decay bounds on the ancient shrinking-sphere family.
//!
//! Forward simulation cannot produce ancient data (backward flow is
//! ill-posed), so the exponential bounds are measured on the closed-form
//! family: H(t) ≤ H(0)e^{nt}, |A|(t) ≤ |A|(0)e^{nt}, ∂_t log H ≥ n, and the
//! heights above the fitted limiting equator decay at rate n.

use crate::exact::ShrinkingSphere;
use crate::flow::FlowState;
use crate::shape::surface_sample_points;
use crate::sphere::EquatorFrame;
use crate::verify::equator_fit::fit_limit_equator;
use crate::verify::VerifyError;

/// Least-squares slope of ln(y) against t, the fitted exponential rate.
pub fn exp_rate(t: &[f64], y: &[f64]) -> f64 {
    let ly: Vec<f64> = y.iter().map(|v| v.max(1e-300).ln()).collect();
    let n = t.len() as f64;
    let mt = t.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = t.iter().zip(&ly).map(|(a, b)| (a - mt) * (b - my)).sum();
    let den: f64 = t.iter().map(|a| (a - mt) * (a - mt)).sum();
    num / den
}

#[derive(Debug, Clone)]
pub struct DecayReport {
    pub window: (f64, f64),
    /// min over the window of H(0)e^{nt} − H(t).
    pub margin_h: f64,
    /// min over the window of |A|(0)e^{nt} − |A|(t).
    pub margin_a: f64,
    /// min over the window of ∂_t log H − n (= |A|² on the family).
    pub margin_dt_log_h: f64,
    /// sup over the window of |A|(t) e^{−nt}.
    pub c0_realized: f64,
    /// sup over the window of |∇A|²(t) e^{−2nt} (sampled grids).
    pub c1_realized: f64,
    pub rate_h: f64,
    pub rate_a: f64,
    pub rate_height: f64,
    /// None when |∇A|² sits at the rounding floor (centered family).
    pub rate_grad_a: Option<f64>,
    pub fit_axis: Vec<f64>,
    pub fit_residual: f64,
    pub pass: bool,
}

/// Evaluates the backward bounds over `samples` times in [t_lo, t_hi] with
/// surface grids of `segments` segments for the height/∇A measurements.
pub fn decay_check(
    family: &ShrinkingSphere,
    frame: &EquatorFrame,
    t_lo: f64,
    t_hi: f64,
    samples: usize,
    segments: usize,
) -> Result<DecayReport, VerifyError> {
    assert!(t_lo < t_hi && t_hi <= 0.0, "backward window required");
    assert!(samples >= 3);
    let n = family.n() as f64;
    let h0 = family.mean_curvature_at(0.0)?;
    let a0 = family.a_sq_at(0.0)?.sqrt();

    let times: Vec<f64> = (0..samples)
        .map(|i| t_lo + (t_hi - t_lo) * i as f64 / (samples - 1) as f64)
        .collect();

    let mut margin_h = f64::INFINITY;
    let mut margin_a = f64::INFINITY;
    let mut margin_dt_log_h = f64::INFINITY;
    let mut c0 = 0.0f64;
    let mut c1 = 0.0f64;
    let mut hs = Vec::with_capacity(samples);
    let mut aa = Vec::with_capacity(samples);
    let mut heights = Vec::with_capacity(samples);
    let mut grad_a = Vec::with_capacity(samples);

    // the limiting equator is fitted at the earliest (most backward) time
    let first_state = FlowState::new(times[0], family.sample_as_grid(times[0], segments, frame)?);
    let pts = surface_sample_points(&first_state.shape, frame);
    let fit = fit_limit_equator(&pts)?;

    for &t in &times {
        let h = family.mean_curvature_at(t)?;
        let a = family.a_sq_at(t)?.sqrt();
        let growth = (n * t).exp();
        margin_h = margin_h.min(h0 * growth - h);
        margin_a = margin_a.min(a0 * growth - a);
        // ∂_t log H = |A|² + n on the family (ΔH = 0)
        margin_dt_log_h = margin_dt_log_h.min(family.a_sq_at(t)?);
        c0 = c0.max(a / growth);
        hs.push(h);
        aa.push(a);

        let state = FlowState::new(t, family.sample_as_grid(t, segments, frame)?);
        let sup_height = state
            .shape
            .position
            .iter()
            .map(|p| {
                let x = p.to_ambient(frame);
                x.iter()
                    .zip(&fit.axis)
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
                    .abs()
            })
            .fold(0.0f64, f64::max);
        heights.push(sup_height);
        let ops = state.shape.ops();
        let nga = ops
            .norm_grad_a_sq(&state.shape.kappa1, &state.shape.kappa2)
            .iter()
            .fold(0.0f64, |m, &v| m.max(v));
        grad_a.push(nga);
        c1 = c1.max(nga / (2.0 * n * t).exp());
    }

    let rate_h = exp_rate(&times, &hs);
    let rate_a = exp_rate(&times, &aa);
    let rate_height = exp_rate(&times, &heights);
    let grad_floor = 1e-20;
    let rate_grad_a = if grad_a.iter().all(|&v| v < grad_floor) {
        None
    } else {
        Some(exp_rate(&times, &grad_a))
    };

    let pass = margin_h >= -1e-12
        && margin_a >= -1e-12
        && margin_dt_log_h >= -1e-12
        && (rate_height - n).abs() <= 0.01 * n;

    Ok(DecayReport {
        window: (t_lo, t_hi),
        margin_h,
        margin_a,
        margin_dt_log_h,
        c0_realized: c0,
        c1_realized: c1,
        rate_h,
        rate_a,
        rate_height,
        rate_grad_a,
        fit_axis: fit.axis,
        fit_residual: fit.rms_height,
        pass,
    })
}
