//! Parity-aware finite-difference stencils on the uniform polar grid.
//!
//! Axisymmetric fields extend smoothly across the poles u = 0 and u = π
//! either evenly (ρ, H, |A|², …) or oddly (∂_u H, the drift speed ξ, …).
//! The stencils apply the matching ghost values so that the central
//! differences stay second-order accurate at the pole nodes.

/// How a field continues across u = 0 and u = π.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Parity {
    /// f(−u) = f(u); first derivative vanishes at the poles.
    Even,
    /// f(−u) = −f(u); the field itself vanishes at the poles.
    Odd,
}

/// Central first derivative with parity ghosts at the poles.
pub fn d1(f: &[f64], du: f64, parity: Parity) -> Vec<f64> {
    let n = f.len() - 1;
    let mut out = vec![0.0; n + 1];
    for k in 1..n {
        out[k] = (f[k + 1] - f[k - 1]) / (2.0 * du);
    }
    match parity {
        Parity::Even => {
            out[0] = 0.0;
            out[n] = 0.0;
        }
        Parity::Odd => {
            out[0] = f[1] / du;
            out[n] = -f[n - 1] / du;
        }
    }
    out
}

/// Central second derivative with parity ghosts at the poles.
pub fn d2(f: &[f64], du: f64, parity: Parity) -> Vec<f64> {
    let n = f.len() - 1;
    let du2 = du * du;
    let mut out = vec![0.0; n + 1];
    for k in 1..n {
        out[k] = (f[k + 1] - 2.0 * f[k] + f[k - 1]) / du2;
    }
    match parity {
        Parity::Even => {
            out[0] = 2.0 * (f[1] - f[0]) / du2;
            out[n] = 2.0 * (f[n - 1] - f[n]) / du2;
        }
        Parity::Odd => {
            // ghost = -f[1]; for a genuinely odd field f[0] = 0 and this is 0
            out[0] = -2.0 * f[0] / du2;
            out[n] = -2.0 * f[n] / du2;
        }
    }
    out
}

/// Nonuniform central difference in time: second-order estimate of f'(t)
/// from values at t − h_minus, t, t + h_plus.
pub fn central_dt(f_prev: f64, f_mid: f64, f_next: f64, h_minus: f64, h_plus: f64) -> f64 {
    let hm = h_minus;
    let hp = h_plus;
    (hm * hm * f_next + (hp * hp - hm * hm) * f_mid - hp * hp * f_prev) / (hp * hm * (hp + hm))
}
