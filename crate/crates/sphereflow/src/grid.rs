//! Discrete axisymmetric radial graphs over the equator.
//!
//! The hypersurface is the rotational graph u ↦ (ρ(u), σ(u)) in geodesic
//! polar coordinates, sampled at the uniform polar angles u_k = kπ/N of the
//! axisymmetry axis. Smoothness across the rotation axis requires the even
//! (Neumann) extension ρ(−u) = ρ(u) at both poles.

use crate::sphere::EquatorFrame;
use crate::stencil::{d1, Parity};
use std::f64::consts::{FRAC_PI_2, PI};
use thiserror::Error;

/// Minimum number of grid segments.
pub const MIN_SEGMENTS: usize = 16;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("need at least {MIN_SEGMENTS} segments, got {0}")]
    TooCoarse(usize),
    #[error("rho[{k}] = {value} is outside the open interval (0, pi)")]
    RhoOutOfRange { k: usize, value: f64 },
    #[error("node count {got} does not match segments + 1 = {want}")]
    NodeCount { got: usize, want: usize },
    #[error("profile is not smooth at the pole u = {pole}: one-sided slope {slope:.3e} exceeds {tol:.3e}")]
    PoleSlope { pole: f64, slope: f64, tol: f64 },
    #[error("hypersurface dimension must be >= 2, got {0}")]
    BadDimension(usize),
}

/// Axisymmetric radial graph ρ(u) over the equator, the discrete flow state.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileGrid {
    n: usize,
    rho: Vec<f64>,
    frame: EquatorFrame,
}

impl ProfileGrid {
    /// Validates the grid invariants: N ≥ 16 segments, ρ strictly inside
    /// (0, π), and a discrete Neumann condition at both poles.
    pub fn new(n: usize, rho: Vec<f64>, frame: EquatorFrame) -> Result<Self, GridError> {
        if n < 2 {
            return Err(GridError::BadDimension(n));
        }
        let segs = rho.len().saturating_sub(1);
        if segs < MIN_SEGMENTS {
            return Err(GridError::TooCoarse(segs));
        }
        for (k, &r) in rho.iter().enumerate() {
            if !(r > 0.0 && r < PI) || !r.is_finite() {
                return Err(GridError::RhoOutOfRange { k, value: r });
            }
        }
        let du = PI / segs as f64;
        // curvature scale of the profile for the pole-slope tolerance
        let mut max_rho2 = 0.0f64;
        for k in 1..segs {
            max_rho2 = max_rho2.max((rho[k + 1] - 2.0 * rho[k] + rho[k - 1]).abs() / (du * du));
        }
        let tol = 5.0 * du * du * (1.0 + max_rho2);
        let left = (-3.0 * rho[0] + 4.0 * rho[1] - rho[2]) / (2.0 * du);
        if left.abs() > tol {
            return Err(GridError::PoleSlope {
                pole: 0.0,
                slope: left,
                tol,
            });
        }
        let m = segs;
        let right = (3.0 * rho[m] - 4.0 * rho[m - 1] + rho[m - 2]) / (2.0 * du);
        if right.abs() > tol {
            return Err(GridError::PoleSlope {
                pole: PI,
                slope: right,
                tol,
            });
        }
        Ok(Self { n, rho, frame })
    }

    /// Samples a profile function at the grid nodes.
    pub fn from_profile(
        n: usize,
        segments: usize,
        frame: EquatorFrame,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self, GridError> {
        let du = PI / segments as f64;
        let rho = (0..=segments).map(|k| f(k as f64 * du)).collect();
        Self::new(n, rho, frame)
    }

    /// Cosine-polynomial profile ρ(u) = π/2 − a₀ − Σ_{m≥1} a_m cos(m u);
    /// every truncation satisfies the pole Neumann condition exactly.
    pub fn from_cosine_coefficients(
        n: usize,
        segments: usize,
        frame: EquatorFrame,
        coeffs: &[f64],
    ) -> Result<Self, GridError> {
        Self::from_profile(n, segments, frame, |u| {
            let mut r = FRAC_PI_2;
            for (m, &a) in coeffs.iter().enumerate() {
                if m == 0 {
                    r -= a;
                } else {
                    r -= a * (m as f64 * u).cos();
                }
            }
            r
        })
    }

    /// The static equator graph ρ ≡ π/2.
    pub fn equator(n: usize, segments: usize, frame: EquatorFrame) -> Result<Self, GridError> {
        Self::from_profile(n, segments, frame, |_| FRAC_PI_2)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of segments N; there are N + 1 nodes.
    pub fn segments(&self) -> usize {
        self.rho.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.rho.len()
    }

    pub fn du(&self) -> f64 {
        PI / self.segments() as f64
    }

    pub fn u(&self, k: usize) -> f64 {
        k as f64 * self.du()
    }

    pub fn u_nodes(&self) -> Vec<f64> {
        (0..self.node_count()).map(|k| self.u(k)).collect()
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn frame(&self) -> &EquatorFrame {
        &self.frame
    }

    /// Discrete ∂_u ρ (even extension at the poles).
    pub fn rho_prime(&self) -> Vec<f64> {
        d1(&self.rho, self.du(), Parity::Even)
    }

    /// Replaces the radial values, revalidating the invariants.
    pub fn with_rho(&self, rho: Vec<f64>) -> Result<Self, GridError> {
        if rho.len() != self.rho.len() {
            return Err(GridError::NodeCount {
                got: rho.len(),
                want: self.rho.len(),
            });
        }
        Self::new(self.n, rho, self.frame.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_cosine_profiles_validate() {
        let f = EquatorFrame::standard(2);
        assert!(ProfileGrid::from_profile(2, 64, f.clone(), |_| 1.0).is_ok());
        assert!(ProfileGrid::from_cosine_coefficients(2, 64, f, &[0.3, 0.0, 0.05]).is_ok());
    }

    #[test]
    fn rejects_out_of_range_and_coarse() {
        let f = EquatorFrame::standard(2);
        assert!(matches!(
            ProfileGrid::from_profile(2, 64, f.clone(), |u| if u < 1.0 { -0.1 } else { 1.0 }),
            Err(GridError::RhoOutOfRange { .. })
        ));
        assert!(matches!(
            ProfileGrid::from_profile(2, 8, f.clone(), |_| 1.0),
            Err(GridError::TooCoarse(8))
        ));
        assert!(matches!(
            ProfileGrid::from_profile(1, 64, f, |_| 1.0),
            Err(GridError::BadDimension(1))
        ));
    }

    #[test]
    fn rejects_pole_slope_violation() {
        let f = EquatorFrame::standard(2);
        // linear-in-u profile has nonzero one-sided slope at the poles
        assert!(matches!(
            ProfileGrid::from_profile(2, 64, f, |u| 1.2 - 0.1 * u),
            Err(GridError::PoleSlope { .. })
        ));
    }
}
