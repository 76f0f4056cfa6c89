//! Closed-form solutions: static equators and ancient shrinking geodesic
//! spheres.
//!
//! A geodesic sphere of radius r has all principal curvatures cot r, so the
//! flow reduces to dr/dt = −n cot r, i.e. cos r(t) = cos r(0) · e^{nt}. The
//! family exists for all t < t* = −ln(κ₀)/n, emanates from an equator as
//! t → −∞, and collapses to its center at t*. It provides machine-precision
//! ground truth for the integrator, the Harnack expression and every decay
//! bound.

use crate::grid::{GridError, ProfileGrid};
use crate::sphere::{dot, EquatorFrame, SpherePoint};
use std::f64::consts::FRAC_PI_2;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExactError {
    #[error("kappa0 must lie in (0, 1), got {0}")]
    BadKappa0(f64),
    #[error("the sphere has collapsed: t = {t} >= collapse time {collapse}")]
    Collapsed { t: f64, collapse: f64 },
    #[error("sphere center is off the axisymmetry axis by {0:.3e}")]
    OffAxisCenter(f64),
    #[error("sampled sphere is not a graph over the equator: {0}")]
    NotAGraph(String),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// The ancient shrinking geodesic sphere, parametrized by κ₀ = cos r(0).
#[derive(Debug, Clone)]
pub struct ShrinkingSphere {
    n: usize,
    center: SpherePoint,
    kappa0: f64,
}

impl ShrinkingSphere {
    pub fn new(n: usize, center: SpherePoint, kappa0: f64) -> Result<Self, ExactError> {
        if !(kappa0 > 0.0 && kappa0 < 1.0) {
            return Err(ExactError::BadKappa0(kappa0));
        }
        Ok(Self { n, center, kappa0 })
    }

    /// Sphere centered at the basepoint e of the frame.
    pub fn centered(n: usize, frame: &EquatorFrame, kappa0: f64) -> Result<Self, ExactError> {
        Self::new(n, SpherePoint::new(frame.e().to_vec()).unwrap(), kappa0)
    }

    /// Sphere centered on the axisymmetry axis at angular offset a from e.
    pub fn on_axis(
        n: usize,
        frame: &EquatorFrame,
        kappa0: f64,
        offset: f64,
    ) -> Result<Self, ExactError> {
        let (s, c) = offset.sin_cos();
        let coords = frame
            .e()
            .iter()
            .zip(frame.axis_a())
            .map(|(ei, ai)| c * ei + s * ai)
            .collect();
        Self::new(n, SpherePoint::new(coords).unwrap(), kappa0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn center(&self) -> &SpherePoint {
        &self.center
    }

    pub fn kappa0(&self) -> f64 {
        self.kappa0
    }

    /// t* = −ln(κ₀)/n, when cos r reaches 1.
    pub fn collapse_time(&self) -> f64 {
        -self.kappa0.ln() / self.n as f64
    }

    /// cos r(t) = κ₀ e^{nt}.
    pub fn cos_radius_at(&self, t: f64) -> Result<f64, ExactError> {
        let c = self.kappa0 * (self.n as f64 * t).exp();
        if c >= 1.0 {
            return Err(ExactError::Collapsed {
                t,
                collapse: self.collapse_time(),
            });
        }
        Ok(c)
    }

    /// r(t) = arccos(κ₀ e^{nt}) ∈ (0, π/2).
    pub fn radius_at(&self, t: f64) -> Result<f64, ExactError> {
        Ok(self.cos_radius_at(t)?.acos())
    }

    /// H(t) = n cot r(t).
    pub fn mean_curvature_at(&self, t: f64) -> Result<f64, ExactError> {
        let c = self.cos_radius_at(t)?;
        Ok(self.n as f64 * c / (1.0 - c * c).sqrt())
    }

    /// |A|²(t) = n cot² r(t).
    pub fn a_sq_at(&self, t: f64) -> Result<f64, ExactError> {
        let c = self.cos_radius_at(t)?;
        Ok(self.n as f64 * c * c / (1.0 - c * c))
    }

    /// C(t) = n cot³ r(t).
    pub fn c_at(&self, t: f64) -> Result<f64, ExactError> {
        let c = self.cos_radius_at(t)?;
        Ok(self.n as f64 * (c / (1.0 - c * c).sqrt()).powi(3))
    }

    /// ∂_t H along the flow: H |A|² + n H = n² cot(r)/sin²(r), also H³/n + nH.
    pub fn dt_h_at(&self, t: f64) -> Result<f64, ExactError> {
        let h = self.mean_curvature_at(t)?;
        let asq = self.a_sq_at(t)?;
        Ok(h * asq + self.n as f64 * h)
    }

    /// The minimized Harnack expression on the sphere family,
    /// Θ − nH + H/(2(t − t₀)) = H³/n + H/(2(t − t₀)) > 0 for t > t₀.
    ///
    /// ∇H vanishes on spheres, so Θ = ∂_t H and Θ − nH = H³/n.
    pub fn harnack_closed_form(&self, t: f64, t_origin: f64) -> Result<f64, ExactError> {
        assert!(t > t_origin, "harnack expression needs t > t_origin");
        let h = self.mean_curvature_at(t)?;
        Ok(h * h * h / self.n as f64 + h / (2.0 * (t - t_origin)))
    }

    /// Samples the sphere at time t as a radial graph over the frame's
    /// equator. Exact node-wise for centered spheres; off-axis centers use
    /// the spherical law of cosines ⟨x, c⟩ = cos r solved for ρ(u).
    pub fn sample_as_grid(
        &self,
        t: f64,
        segments: usize,
        frame: &EquatorFrame,
    ) -> Result<ProfileGrid, ExactError> {
        let r = self.radius_at(t)?;
        let ce = dot(self.center.coords(), frame.e());
        let ca = dot(self.center.coords(), frame.axis_a());
        let planar = (ce * ce + ca * ca).sqrt();
        if (planar - 1.0).abs() > 1e-10 {
            return Err(ExactError::OffAxisCenter((planar - 1.0).abs()));
        }
        let offset = ca.atan2(ce);
        let a = offset.abs();
        if a + r >= FRAC_PI_2 - 1e-9 {
            return Err(ExactError::NotAGraph(format!(
                "offset {a:.6} + radius {r:.6} reaches the chart equator"
            )));
        }
        if r <= a + 1e-9 {
            return Err(ExactError::NotAGraph(format!(
                "basepoint outside the sphere: radius {r:.6} <= offset {a:.6}"
            )));
        }
        let cos_r = r.cos();
        let (sa, caos) = offset.sin_cos();
        let grid = ProfileGrid::from_profile(self.n, segments, frame.clone(), |u| {
            let b = sa * u.cos();
            let amp = (caos * caos + b * b).sqrt();
            let phi0 = b.atan2(caos);
            phi0 + (cos_r / amp).clamp(-1.0, 1.0).acos()
        })?;
        Ok(grid)
    }
}

/// The static equator solution: H ≡ 0 for all time.
#[derive(Debug, Clone)]
pub struct EquatorSolution {
    frame: EquatorFrame,
}

impl EquatorSolution {
    pub fn new(frame: EquatorFrame) -> Self {
        Self { frame }
    }

    pub fn frame(&self) -> &EquatorFrame {
        &self.frame
    }

    pub fn as_grid(&self, segments: usize) -> Result<ProfileGrid, GridError> {
        ProfileGrid::equator(self.frame.n(), segments, self.frame.clone())
    }
}
