//! Curvature ledger of the axisymmetric hypersurface.
//!
//! The graph u ↦ cos(ρ)e + sin(ρ)(cos(u)a + sin(u)w) never leaves the
//! totally geodesic 3-space spanned by {e, a, w}, so positions, tangents and
//! normals are stored as components in that section. The second fundamental
//! form is taken against the sphere's connection through flat ambient second
//! derivatives (⟨ν, x⟩ = 0 on S^{n+1}, which is totally umbilic in R^{n+2}):
//! the radial factors cos ρ_k, sin ρ_k are differenced on the grid while the
//! parallel-circle factors of σ(u) are differentiated exactly, which keeps
//! centered geodesic spheres exact at every node. An independent closed-form
//! rotational oracle ([`analytic_axisym_curvatures`]) guards the conventions.

use crate::grid::ProfileGrid;
use crate::operators::Ops;
use crate::sphere::EquatorFrame;
use crate::stencil::{d1, d2, Parity};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ShapeError {
    #[error("state is not strictly convex (margin {margin:.3e}); inverse second fundamental form unavailable")]
    NotStrictlyConvex { margin: f64 },
}

/// Components of an ambient vector in the section basis {e, axis_a, w}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Section3 {
    pub e: f64,
    pub a: f64,
    pub w: f64,
}

impl Section3 {
    pub fn dot(self, other: Section3) -> f64 {
        self.e * other.e + self.a * other.a + self.w * other.w
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, c: f64) -> Section3 {
        Section3 {
            e: c * self.e,
            a: c * self.a,
            w: c * self.w,
        }
    }

    pub fn minus(self, other: Section3) -> Section3 {
        Section3 {
            e: self.e - other.e,
            a: self.a - other.a,
            w: self.w - other.w,
        }
    }

    /// Expands the section components into full ambient coordinates.
    pub fn to_ambient(self, frame: &EquatorFrame) -> Vec<f64> {
        let w = frame.section_w();
        frame
            .e()
            .iter()
            .zip(frame.axis_a())
            .zip(&w)
            .map(|((ei, ai), wi)| self.e * ei + self.a * ai + self.w * wi)
            .collect()
    }
}

/// Per-node embedding data: position, unit profile tangent, outward unit
/// normal, and the raw second u-derivative of the embedding.
pub struct Embedding {
    pub position: Vec<Section3>,
    pub tangent_u: Vec<Section3>,
    pub nu: Vec<Section3>,
    /// ⟨ν, ∂̂_ρ⟩, the radial component of the normal (reciprocal graph factor).
    pub nu_dot_rho_hat: Vec<f64>,
    pub g_uu: Vec<f64>,
    pub f_uu: Vec<Section3>,
}

/// Realizes the graph in ambient coordinates. The normal is oriented away
/// from the basepoint cap, so geodesic spheres of radius r < π/2 about the
/// basepoint get H = n cot r > 0 and the equator graph gets ν = −e.
pub fn embed(grid: &ProfileGrid) -> Embedding {
    let nodes = grid.node_count();
    let du = grid.du();
    let rho = grid.rho();
    let cos_rho: Vec<f64> = rho.iter().map(|r| r.cos()).collect();
    let sin_rho: Vec<f64> = rho.iter().map(|r| r.sin()).collect();
    let cp = d1(&cos_rho, du, Parity::Even);
    let sp = d1(&sin_rho, du, Parity::Even);
    let cpp = d2(&cos_rho, du, Parity::Even);
    let spp = d2(&sin_rho, du, Parity::Even);

    let mut position = Vec::with_capacity(nodes);
    let mut tangent_u = Vec::with_capacity(nodes);
    let mut nu = Vec::with_capacity(nodes);
    let mut nu_dot_rho_hat = Vec::with_capacity(nodes);
    let mut g_uu = Vec::with_capacity(nodes);
    let mut f_uu = Vec::with_capacity(nodes);

    for k in 0..nodes {
        let (su, cu) = grid.u(k).sin_cos();
        let (c, s) = (cos_rho[k], sin_rho[k]);
        let p = Section3 {
            e: c,
            a: s * cu,
            w: s * su,
        };
        // F_u = (cos ρ)' e + (sin ρ)' σ + sin ρ σ', with σ' exact
        let fu = Section3 {
            e: cp[k],
            a: sp[k] * cu - s * su,
            w: sp[k] * su + s * cu,
        };
        // F_uu, using σ'' = −σ
        let fuu = Section3 {
            e: cpp[k],
            a: spp[k] * cu - 2.0 * sp[k] * su - s * cu,
            w: spp[k] * su + 2.0 * sp[k] * cu - s * su,
        };
        let guu = fu.dot(fu);
        // unit radial coordinate direction at the node
        let rho_hat = Section3 {
            e: -s,
            a: c * cu,
            w: c * su,
        };
        // Gram-Schmidt: tangent orthogonal to the position, then the normal
        // orthogonal to both, oriented along +∂̂_ρ.
        let t = fu.minus(p.scale(fu.dot(p)));
        let t_hat = t.scale(1.0 / t.norm());
        let mut q = rho_hat.minus(p.scale(rho_hat.dot(p)));
        q = q.minus(t_hat.scale(q.dot(t_hat)));
        let qn = q.norm();
        let nu_k = q.scale(1.0 / qn);

        position.push(p);
        tangent_u.push(t_hat);
        nu.push(nu_k);
        nu_dot_rho_hat.push(qn);
        g_uu.push(guu);
        f_uu.push(fuu);
    }

    Embedding {
        position,
        tangent_u,
        nu,
        nu_dot_rho_hat,
        g_uu,
        f_uu,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvexityKind {
    Strict,
    Weak,
    Nonconvex,
}

/// Classification of the sign of the second fundamental form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexityStatus {
    pub kind: ConvexityKind,
    /// min over nodes and principal directions of κ.
    pub margin: f64,
}

/// Classifies weak/strict convexity of a computed ledger at tolerance
/// `tol_convex`.
pub fn convexity_status(shape: &ShapeData, tol_convex: f64) -> ConvexityStatus {
    let margin = shape.margin;
    let kind = if margin > tol_convex {
        ConvexityKind::Strict
    } else if margin < -tol_convex {
        ConvexityKind::Nonconvex
    } else {
        ConvexityKind::Weak
    };
    ConvexityStatus { kind, margin }
}

/// Default convexity tolerance, 1e−8 scaled by the curvature magnitude.
pub fn default_tol_convex(shape: &ShapeData) -> f64 {
    1e-8 * shape.max_abs_a().max(1.0)
}

/// The per-node curvature ledger.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeData {
    pub n: usize,
    pub du: f64,
    pub u: Vec<f64>,
    pub rho: Vec<f64>,
    pub sin_rho: Vec<f64>,
    pub position: Vec<Section3>,
    pub nu: Vec<Section3>,
    /// W = √(g_uu).
    pub w: Vec<f64>,
    pub g_uu: Vec<f64>,
    /// R², angular metric per unit orbit direction.
    pub g_ang: Vec<f64>,
    /// R = sin ρ sin u.
    pub radius_ang: Vec<f64>,
    pub kappa1: Vec<f64>,
    pub kappa2: Vec<f64>,
    /// H = κ₁ + (n−1)κ₂.
    pub h: Vec<f64>,
    /// |A|² = κ₁² + (n−1)κ₂².
    pub a_sq: Vec<f64>,
    /// C = κ₁³ + (n−1)κ₂³.
    pub c_cubic: Vec<f64>,
    /// ∂_u H (coordinate component of ∇H).
    pub grad_h_u: Vec<f64>,
    /// ΔH.
    pub lap_h: Vec<f64>,
    /// v = 1/⟨ν, ∂̂_ρ⟩ ≥ 1.
    pub graph_factor: Vec<f64>,
    /// min over nodes of min(κ₁, κ₂).
    pub margin: f64,
    b_uu: Option<Vec<f64>>,
    b_ang: Option<Vec<f64>>,
    norm_grad_h_sq: Option<Vec<f64>>,
}

impl ShapeData {
    pub fn node_count(&self) -> usize {
        self.u.len()
    }

    pub fn max_abs_a(&self) -> f64 {
        self.a_sq.iter().fold(0.0f64, |m, &v| m.max(v)).sqrt()
    }

    pub fn is_strictly_convex(&self) -> bool {
        self.b_uu.is_some()
    }

    /// Orthonormal profile component of b = A⁻¹, i.e. 1/κ₁.
    pub fn b_uu(&self) -> Result<&[f64], ShapeError> {
        self.b_uu.as_deref().ok_or(ShapeError::NotStrictlyConvex {
            margin: self.margin,
        })
    }

    /// Orthonormal angular component of b = A⁻¹, i.e. 1/κ₂.
    pub fn b_ang(&self) -> Result<&[f64], ShapeError> {
        self.b_ang.as_deref().ok_or(ShapeError::NotStrictlyConvex {
            margin: self.margin,
        })
    }

    /// b^{ij} ∇_i H ∇_j H = (∂_u H)² / (κ₁ g_uu).
    pub fn norm_grad_h_b(&self) -> Result<&[f64], ShapeError> {
        self.norm_grad_h_sq
            .as_deref()
            .ok_or(ShapeError::NotStrictlyConvex {
                margin: self.margin,
            })
    }

    /// Operator context for this state.
    pub fn ops(&self) -> Ops<'_> {
        Ops::new(self.n, self.du, &self.u, &self.w, &self.sin_rho)
    }

    /// Heights ⟨x, e⟩ of the nodes.
    pub fn heights(&self) -> Vec<f64> {
        self.position.iter().map(|p| p.e).collect()
    }

    /// True when every node satisfies the graph criterion ⟨ν, e⟩ < 0.
    pub fn is_graph(&self) -> bool {
        self.nu.iter().all(|nu| nu.e < 0.0)
    }
}

/// Computes the full curvature ledger of a grid.
pub fn shape_data(grid: &ProfileGrid) -> ShapeData {
    let nodes = grid.node_count();
    let n = grid.n();
    let du = grid.du();
    let emb = embed(grid);
    let u = grid.u_nodes();
    let rho = grid.rho().to_vec();
    let sin_rho: Vec<f64> = rho.iter().map(|r| r.sin()).collect();

    let w: Vec<f64> = emb.g_uu.iter().map(|g| g.sqrt()).collect();
    let mut kappa1 = Vec::with_capacity(nodes);
    for k in 0..nodes {
        let h_uu = -emb.nu[k].dot(emb.f_uu[k]);
        kappa1.push(h_uu / emb.g_uu[k]);
    }
    let mut kappa2 = vec![0.0; nodes];
    let mut radius_ang = vec![0.0; nodes];
    for k in 1..nodes - 1 {
        radius_ang[k] = emb.position[k].w;
        kappa2[k] = emb.nu[k].w / emb.position[k].w;
    }
    // Pole values by even-quadratic extrapolation from the interior branch:
    // the 0/0 limit equals κ₁ there, but an independent pole formula would
    // sit O(Δu²) off the interior error function, and the pole Laplacian
    // stencils amplify such a jump by 1/Δu².
    kappa2[0] = (15.0 * kappa2[1] - 6.0 * kappa2[2] + kappa2[3]) / 10.0;
    kappa2[nodes - 1] =
        (15.0 * kappa2[nodes - 2] - 6.0 * kappa2[nodes - 3] + kappa2[nodes - 4]) / 10.0;
    let nm1 = n as f64 - 1.0;
    let h: Vec<f64> = kappa1
        .iter()
        .zip(&kappa2)
        .map(|(k1, k2)| k1 + nm1 * k2)
        .collect();
    let a_sq: Vec<f64> = kappa1
        .iter()
        .zip(&kappa2)
        .map(|(k1, k2)| k1 * k1 + nm1 * k2 * k2)
        .collect();
    let c_cubic: Vec<f64> = kappa1
        .iter()
        .zip(&kappa2)
        .map(|(k1, k2)| k1.powi(3) + nm1 * k2.powi(3))
        .collect();
    let g_ang: Vec<f64> = radius_ang.iter().map(|r| r * r).collect();
    let graph_factor: Vec<f64> = emb.nu_dot_rho_hat.iter().map(|d| 1.0 / d).collect();
    let grad_h_u = d1(&h, du, Parity::Even);
    let lap_h = Ops::new(n, du, &u, &w, &sin_rho).lap_scalar(&h);

    let margin = kappa1
        .iter()
        .chain(&kappa2)
        .fold(f64::INFINITY, |m, &v| m.min(v));
    let max_a = a_sq.iter().fold(0.0f64, |m, &v| m.max(v)).sqrt();
    let strict = margin > 1e-8 * max_a.max(1.0);
    let (b_uu, b_ang, norm_grad_h_sq) = if strict {
        let b1: Vec<f64> = kappa1.iter().map(|k| 1.0 / k).collect();
        let b2: Vec<f64> = kappa2.iter().map(|k| 1.0 / k).collect();
        let ng: Vec<f64> = (0..nodes)
            .map(|k| grad_h_u[k] * grad_h_u[k] / (kappa1[k] * emb.g_uu[k]))
            .collect();
        (Some(b1), Some(b2), Some(ng))
    } else {
        (None, None, None)
    };

    ShapeData {
        n,
        du,
        u,
        rho,
        sin_rho,
        position: emb.position,
        nu: emb.nu,
        w,
        g_uu: emb.g_uu,
        g_ang,
        radius_ang,
        kappa1,
        kappa2,
        h,
        a_sq,
        c_cubic,
        grad_h_u,
        lap_h,
        graph_factor,
        margin,
        b_uu,
        b_ang,
        norm_grad_h_sq,
    }
}

/// Independent rotational-surface oracle: closed-form principal curvatures
/// of the profile curve (ρ(u), u) in the section metric dρ² + sin²ρ du²,
/// with ρ', ρ'' estimated directly from the radial values. Exact on
/// constant profiles; differs from [`shape_data`] at O(Δu²) otherwise.
pub fn analytic_axisym_curvatures(grid: &ProfileGrid) -> (Vec<f64>, Vec<f64>) {
    let nodes = grid.node_count();
    let du = grid.du();
    let rho = grid.rho();
    let rp = d1(rho, du, Parity::Even);
    let rpp = d2(rho, du, Parity::Even);
    let mut k1 = Vec::with_capacity(nodes);
    let mut k2 = Vec::with_capacity(nodes);
    for k in 0..nodes {
        let (s, c) = rho[k].sin_cos();
        let w2 = rp[k] * rp[k] + s * s;
        let w = w2.sqrt();
        let kap1 = (c * (s * s + 2.0 * rp[k] * rp[k]) - rpp[k] * s) / (w2 * w);
        k1.push(kap1);
        let (su, cu) = grid.u(k).sin_cos();
        if k == 0 || k == nodes - 1 {
            k2.push(kap1);
        } else {
            k2.push((s * c * su - rp[k] * cu) / (w * s * su));
        }
    }
    (k1, k2)
}

/// Residual of the Codazzi relation, reduced on axisymmetric states to
/// ∂_u κ₂ = (R'/R)(κ₁ − κ₂) and scaled by sin(u) to stay pole-regular:
/// sin(u) ∂_u κ₂ − (s' sin(u)/s + cos(u))(κ₁ − κ₂). Second-order small on
/// smooth profiles, identically zero at the poles.
pub fn codazzi_residual(grid: &ProfileGrid) -> Vec<f64> {
    let shape = shape_data(grid);
    let du = shape.du;
    let dk2 = d1(&shape.kappa2, du, Parity::Even);
    let sp = d1(&shape.sin_rho, du, Parity::Even);
    (0..shape.node_count())
        .map(|k| {
            let (si, co) = shape.u[k].sin_cos();
            si * dk2[k] - (sp[k] * si / shape.sin_rho[k] + co) * (shape.kappa1[k] - shape.kappa2[k])
        })
        .collect()
}

/// Residual of the Gauss equation for the (profile, angular) 2-plane:
/// intrinsic sectional curvature from the metric minus (1 + κ₁κ₂).
pub fn gauss_residual(grid: &ProfileGrid) -> Vec<f64> {
    let shape = shape_data(grid);
    let nodes = shape.node_count();
    let du = shape.du;
    let sp = d1(&shape.sin_rho, du, Parity::Even);
    // R' = s' sin u + s cos u; q = R'/W
    let q: Vec<f64> = (0..nodes)
        .map(|k| {
            let (su, cu) = shape.u[k].sin_cos();
            (sp[k] * su + shape.sin_rho[k] * cu) / shape.w[k]
        })
        .collect();
    let qp = d1(&q, du, Parity::Even);
    (0..nodes)
        .map(|k| {
            let sect = if k == 0 {
                -qp[1] / (du * shape.w[0] * shape.w[0])
            } else if k == nodes - 1 {
                -qp[nodes - 2] / (du * shape.w[k] * shape.w[k])
            } else {
                -qp[k] / (shape.radius_ang[k] * shape.w[k])
            };
            sect - (1.0 + shape.kappa1[k] * shape.kappa2[k])
        })
        .collect()
}

/// Discrete Laplace–Beltrami of an even axisymmetric scalar field on the
/// surface, (1/√g) ∂_u(√g g^{uu} ∂_u f) with poles regularized by parity.
pub fn laplace_beltrami(grid: &ProfileGrid, field: &[f64]) -> Vec<f64> {
    let shape = shape_data(grid);
    shape.ops().lap_scalar(field)
}

/// Ambient sample points covering the full surface of revolution: each
/// profile node is swept through ±w over an orthonormal basis of the
/// rotation directions (exact second moments for the equator fit).
pub fn surface_sample_points(shape: &ShapeData, frame: &EquatorFrame) -> Vec<Vec<f64>> {
    let wb = frame.w_basis();
    let mut pts = Vec::with_capacity(shape.node_count() * 2 * wb.len());
    for k in 0..shape.node_count() {
        let p = shape.position[k];
        for wv in &wb {
            for sign in [1.0, -1.0] {
                let pt: Vec<f64> = frame
                    .e()
                    .iter()
                    .zip(frame.axis_a())
                    .zip(wv)
                    .map(|((ei, ai), wi)| p.e * ei + p.a * ai + sign * p.w * wi)
                    .collect();
                pts.push(pt);
            }
        }
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn sphere_grid(n: usize, segs: usize, r: f64) -> ProfileGrid {
        ProfileGrid::from_profile(n, segs, EquatorFrame::standard(n), |_| r).unwrap()
    }

    fn perturbed_grid(n: usize, segs: usize) -> ProfileGrid {
        ProfileGrid::from_cosine_coefficients(n, segs, EquatorFrame::standard(n), &[0.3, 0.0, 0.05])
            .unwrap()
    }

    #[test]
    fn centered_sphere_ledger_is_exact() {
        let r = PI / 3.0;
        let shape = shape_data(&sphere_grid(2, 64, r));
        let cot = r.cos() / r.sin();
        for k in 0..shape.node_count() {
            assert!((shape.kappa1[k] - cot).abs() < 1e-13, "kappa1 node {k}");
            assert!((shape.kappa2[k] - cot).abs() < 1e-13, "kappa2 node {k}");
            assert!((shape.h[k] - 2.0 * cot).abs() < 1e-13);
            assert!((shape.a_sq[k] - 2.0 / 3.0).abs() < 1e-13);
            assert!((shape.c_cubic[k] - 2.0 * cot.powi(3)).abs() < 1e-13);
            assert!((shape.graph_factor[k] - 1.0).abs() < 1e-12);
            assert!(shape.lap_h[k].abs() < 1e-10, "H constant so ΔH = 0");
        }
        assert!(shape.is_strictly_convex());
        let b = shape.b_uu().unwrap();
        for (bk, kap) in b.iter().zip(&shape.kappa1) {
            assert!((bk * kap - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn equator_is_minimal_and_weak() {
        let shape = shape_data(&sphere_grid(2, 64, FRAC_PI_2));
        for k in 0..shape.node_count() {
            assert!(shape.h[k].abs() < 1e-13);
            assert!(shape.a_sq[k].abs() < 1e-13);
            // ν = −e on the equator graph
            assert!((shape.nu[k].e + 1.0).abs() < 1e-12);
            assert!(shape.nu[k].a.abs() < 1e-12);
            assert!(shape.nu[k].w.abs() < 1e-12);
        }
        let status = convexity_status(&shape, default_tol_convex(&shape));
        assert_eq!(status.kind, ConvexityKind::Weak);
        assert!(shape.b_uu().is_err());
    }

    #[test]
    fn perturbed_profile_is_a_graph() {
        let shape = shape_data(&perturbed_grid(2, 512));
        assert!(shape.is_graph());
        for k in 0..shape.node_count() {
            assert!(shape.nu[k].e < 0.0, "graph criterion at node {k}");
            assert!(shape.graph_factor[k] >= 1.0 - 1e-10);
        }
    }

    #[test]
    fn cauchy_schwarz_and_umbilicity() {
        for grid in [sphere_grid(2, 64, 1.0), perturbed_grid(3, 64)] {
            let shape = shape_data(&grid);
            let n = shape.n as f64;
            for k in 0..shape.node_count() {
                assert!(shape.a_sq[k] >= shape.h[k] * shape.h[k] / n - 1e-10);
            }
        }
        // equality iff κ₁ = κ₂ (sphere)
        let shape = shape_data(&sphere_grid(2, 64, 1.0));
        for k in 0..shape.node_count() {
            assert!((shape.a_sq[k] - shape.h[k] * shape.h[k] / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn analytic_oracle_exact_on_spheres() {
        let r = PI / 3.0;
        let (k1, k2) = analytic_axisym_curvatures(&sphere_grid(2, 64, r));
        let cot = 1.0 / r.tan();
        for k in 0..k1.len() {
            assert!((k1[k] - cot).abs() < 1e-13);
            assert!((k2[k] - cot).abs() < 1e-13);
        }
        let (k1, k2) = analytic_axisym_curvatures(&sphere_grid(2, 64, FRAC_PI_2));
        for k in 0..k1.len() {
            assert!(k1[k].abs() < 1e-13);
            assert!(k2[k].abs() < 1e-13);
        }
    }

    /// Exact-derivative closed forms for the cosine test profile: the
    /// independent oracle for both discrete curvature routes.
    fn exact_curvatures(_n: usize, segs: usize) -> (Vec<f64>, Vec<f64>) {
        let du = PI / segs as f64;
        let mut k1 = Vec::new();
        let mut k2 = Vec::new();
        for k in 0..=segs {
            let u = k as f64 * du;
            let rho = FRAC_PI_2 - 0.3 - 0.05 * (2.0 * u).cos();
            let rp = 0.1 * (2.0 * u).sin();
            let rpp = 0.2 * (2.0 * u).cos();
            let (s, c) = rho.sin_cos();
            let w2 = rp * rp + s * s;
            let w = w2.sqrt();
            let kap1 = (c * (s * s + 2.0 * rp * rp) - rpp * s) / (w2 * w);
            k1.push(kap1);
            let (su, cu) = u.sin_cos();
            if k == 0 || k == segs {
                k2.push((s * c - rpp) / (s * s));
            } else {
                k2.push((s * c * su - rp * cu) / (w * s * su));
            }
        }
        (k1, k2)
    }

    fn max_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn dual_route_agreement_under_refinement() {
        // |κ(finite-difference shape_data) − κ(analytic oracle)| → 0 at O(Δu²)
        let mut prev = f64::NAN;
        for &segs in &[64usize, 128, 256] {
            let grid = perturbed_grid(2, segs);
            let shape = shape_data(&grid);
            let (a1, a2) = analytic_axisym_curvatures(&grid);
            let err = max_diff(&shape.kappa1, &a1).max(max_diff(&shape.kappa2, &a2));
            if !prev.is_nan() {
                assert!(
                    err < prev / 3.4,
                    "dual-route order below 2: {prev} -> {err}"
                );
            }
            prev = err;
        }
    }

    #[test]
    fn both_routes_converge_to_exact_profile_curvatures() {
        for route in 0..2 {
            let mut prev = f64::NAN;
            for &segs in &[64usize, 128, 256] {
                let grid = perturbed_grid(2, segs);
                let (e1, e2) = exact_curvatures(2, segs);
                let (g1, g2) = if route == 0 {
                    let s = shape_data(&grid);
                    (s.kappa1.clone(), s.kappa2.clone())
                } else {
                    analytic_axisym_curvatures(&grid)
                };
                let err = max_diff(&g1, &e1).max(max_diff(&g2, &e2));
                if !prev.is_nan() {
                    assert!(err < prev / 3.4, "route {route}: {prev} -> {err}");
                }
                prev = err;
            }
        }
    }

    #[test]
    fn convexity_classification() {
        let shape = shape_data(&sphere_grid(2, 64, PI / 3.0));
        let st = convexity_status(&shape, default_tol_convex(&shape));
        assert_eq!(st.kind, ConvexityKind::Strict);
        assert!((st.margin - 1.0 / (PI / 3.0).tan()).abs() < 1e-12);

        // deep dimple at the poles turns κ₁ negative
        let grid = ProfileGrid::from_cosine_coefficients(
            2,
            64,
            EquatorFrame::standard(2),
            &[0.3, 0.0, 0.2],
        )
        .unwrap();
        let shape = shape_data(&grid);
        let st = convexity_status(&shape, default_tol_convex(&shape));
        assert_eq!(st.kind, ConvexityKind::Nonconvex);
        assert!(st.margin < 0.0);
    }

    #[test]
    fn codazzi_residual_convergence() {
        let r = codazzi_residual(&sphere_grid(2, 64, 1.0));
        assert!(r.iter().all(|v| v.abs() < 1e-12), "constant curvature");
        let r = codazzi_residual(&sphere_grid(2, 64, FRAC_PI_2));
        assert!(r.iter().all(|v| v.abs() < 1e-13), "equator");

        let mut prev = f64::NAN;
        for &segs in &[64usize, 128, 256] {
            let r = codazzi_residual(&perturbed_grid(2, segs));
            let err = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if !prev.is_nan() {
                assert!(err < prev / 3.4, "{prev} -> {err}");
            }
            prev = err;
        }
    }

    #[test]
    fn gauss_residual_convergence() {
        // centered sphere: intrinsic curvature 1/sin²r = 1 + cot²r, matched
        // to the trig-stencil discretization error
        for (grid, label) in [
            (sphere_grid(2, 64, 1.0), "sphere"),
            (sphere_grid(2, 64, FRAC_PI_2), "equator"),
        ] {
            let r = gauss_residual(&grid);
            let worst = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(worst < 2e-3, "{label} residual {worst}");
        }

        for profile in [0usize, 1] {
            let mut prev = f64::NAN;
            for &segs in &[64usize, 128, 256] {
                let grid = if profile == 0 {
                    sphere_grid(2, segs, 1.0)
                } else {
                    perturbed_grid(2, segs)
                };
                let r = gauss_residual(&grid);
                let err = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                if !prev.is_nan() {
                    assert!(err < prev / 3.4, "profile {profile}: {prev} -> {err}");
                }
                prev = err;
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn ledger_invariants_on_random_profiles(
            a0 in 0.05f64..0.45,
            a1 in -0.05f64..0.05,
            a2 in -0.04f64..0.04,
            n in 2usize..4,
        ) {
            let grid = ProfileGrid::from_cosine_coefficients(
                n, 64, EquatorFrame::standard(n), &[a0, a1, a2],
            ).unwrap();
            let shape = shape_data(&grid);
            let nf = n as f64;
            for k in 0..shape.node_count() {
                // Cauchy-Schwarz: |A|² ≥ H²/n
                prop_assert!(shape.a_sq[k] >= shape.h[k] * shape.h[k] / nf - 1e-10);
                prop_assert!(shape.graph_factor[k] >= 1.0 - 1e-10);
                prop_assert!((shape.nu[k].norm() - 1.0).abs() < 1e-12);
            }
            // b h = 1 in the orthonormal frame wherever strictly convex
            if shape.is_strictly_convex() {
                let b1 = shape.b_uu().unwrap();
                let b2 = shape.b_ang().unwrap();
                for k in 0..shape.node_count() {
                    prop_assert!((b1[k] * shape.kappa1[k] - 1.0).abs() < 1e-10);
                    prop_assert!((b2[k] * shape.kappa2[k] - 1.0).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn laplace_beltrami_examples() {
        let grid = sphere_grid(2, 128, PI / 3.0);
        let shape = shape_data(&grid);
        let constant = vec![2.5; shape.node_count()];
        assert!(laplace_beltrami(&grid, &constant).iter().all(|&v| v == 0.0));
        // H of a centered sphere is constant
        assert!(laplace_beltrami(&grid, &shape.h)
            .iter()
            .all(|v| v.abs() < 1e-10));

        // eigenfield cos(u): Δ cos u = −n cos u / sin²r
        let mut prev = f64::NAN;
        for &segs in &[64usize, 128, 256] {
            let grid = sphere_grid(3, segs, PI / 3.0);
            let f: Vec<f64> = grid.u_nodes().iter().map(|x| x.cos()).collect();
            let lap = laplace_beltrami(&grid, &f);
            let s2 = (PI / 3.0).sin().powi(2);
            let err = grid
                .u_nodes()
                .iter()
                .zip(&lap)
                .map(|(x, l)| (l + 3.0 * x.cos() / s2).abs())
                .fold(0.0, f64::max);
            if !prev.is_nan() {
                assert!(err < prev / 3.4);
            }
            prev = err;
        }
    }

    #[test]
    fn normal_is_unit_and_tangent_to_the_sphere() {
        for grid in [sphere_grid(3, 64, 1.1), perturbed_grid(2, 96)] {
            let shape = shape_data(&grid);
            for k in 0..shape.node_count() {
                assert!((shape.nu[k].norm() - 1.0).abs() < 1e-12);
                assert!(
                    shape.nu[k].dot(shape.position[k]).abs() < 1e-10,
                    "nu not tangent at node {k}"
                );
            }
        }
    }

    #[test]
    fn ledger_is_mirror_covariant() {
        // reflecting the axis (an ambient hyperplane isometry) mirrors the
        // chart u ↦ π − u; the measured curvature ledger must follow suit
        use crate::exact::ShrinkingSphere;
        let frame = EquatorFrame::standard(2);
        let plus = ShrinkingSphere::on_axis(2, &frame, 0.5, 0.2).unwrap();
        let minus = ShrinkingSphere::on_axis(2, &frame, 0.5, -0.2).unwrap();
        let gp = plus.sample_as_grid(0.0, 128, &frame).unwrap();
        let gm = minus.sample_as_grid(0.0, 128, &frame).unwrap();
        let sp = shape_data(&gp);
        let sm = shape_data(&gm);
        let last = sp.node_count() - 1;
        for k in 0..sp.node_count() {
            assert!((sp.kappa1[k] - sm.kappa1[last - k]).abs() < 1e-12);
            assert!((sp.kappa2[k] - sm.kappa2[last - k]).abs() < 1e-12);
            assert!((sp.h[k] - sm.h[last - k]).abs() < 1e-12);
        }
        // the reflected positions land exactly on the mirrored sphere
        let cm = minus.center().coords().to_vec();
        let r = plus.radius_at(0.0).unwrap();
        for k in 0..sp.node_count() {
            let x = sp.position[k].to_ambient(&frame);
            // reflect across axis_a^⊥ (flip the a-component)
            let ca: f64 = x.iter().zip(frame.axis_a()).map(|(a, b)| a * b).sum();
            let rx: Vec<f64> = x
                .iter()
                .zip(frame.axis_a())
                .map(|(xi, ai)| xi - 2.0 * ca * ai)
                .collect();
            let d: f64 = rx.iter().zip(&cm).map(|(a, b)| a * b).sum();
            assert!(
                (d - r.cos()).abs() < 1e-12,
                "node {k} off the mirrored sphere"
            );
        }
    }

    #[test]
    fn simons_identity_residual_converges() {
        // Δh = ∇²H + H h² − |A|² h + n h − H δ (orthonormal blocks); a purely
        // spatial consistency check of the covariant operator stack.
        let mut prev = f64::NAN;
        for &segs in &[64usize, 128, 256] {
            let grid = perturbed_grid(2, segs);
            let shape = shape_data(&grid);
            let ops = shape.ops();
            let (l1, l2) = ops.lap_second_form(&shape.kappa1, &shape.kappa2);
            let hp = ops.hess_profile(&shape.h);
            let ha = ops.hess_angular(&shape.h);
            let mut err = 0.0f64;
            for k in 0..shape.node_count() {
                let r1 = l1[k]
                    - (hp[k] + shape.h[k] * shape.kappa1[k] * shape.kappa1[k]
                        - shape.a_sq[k] * shape.kappa1[k]
                        + shape.n as f64 * shape.kappa1[k]
                        - shape.h[k]);
                let r2 = l2[k]
                    - (ha[k] + shape.h[k] * shape.kappa2[k] * shape.kappa2[k]
                        - shape.a_sq[k] * shape.kappa2[k]
                        + shape.n as f64 * shape.kappa2[k]
                        - shape.h[k]);
                err = err.max(r1.abs()).max(r2.abs());
            }
            if !prev.is_nan() {
                assert!(err < prev / 3.0, "Simons residual: {prev} -> {err}");
            }
            prev = err;
        }
    }
}
