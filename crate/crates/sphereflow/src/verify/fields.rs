//! Per-state derived fields used by the identity and inequality suites.
//!
//! Everything is expressed through the two orthonormal eigen-directions of
//! the axisymmetric reduction (profile, angular); coordinate u-components
//! are kept where the checked statements are coordinate statements.

use crate::flow::{drift_speed, dt_h_identity, FlowState};
use crate::stencil::{d1, Parity};

/// Strictly-convex extras (quantities contracted with b = A⁻¹).
pub struct ConvexFields {
    /// b^{ij} ∇_i H ∇_j H.
    pub norm_grad_h_b: Vec<f64>,
    /// η₁₁ = ∇̂₁∇̂₁H + Hκ₁² − b^{rs}∇_rH ∇_s κ₁-block.
    pub eta11: Vec<f64>,
    pub etaang: Vec<f64>,
    /// Θ through the evolution-identity route, ∂_tH − b∇H∇H.
    pub theta_identity: Vec<f64>,
}

pub struct DerivedFields {
    /// ∂_u H (coordinate).
    pub grad_h: Vec<f64>,
    pub lap_h: Vec<f64>,
    /// Orthonormal Hessian blocks of H.
    pub hess1_h: Vec<f64>,
    pub hessa_h: Vec<f64>,
    /// Coordinate u-component of Δ(dH).
    pub lap_dh_u: Vec<f64>,
    /// ∂_u κ (coordinate).
    pub grad_k1: Vec<f64>,
    pub grad_k2: Vec<f64>,
    /// Mixed component of ∇A in the orthonormal frame (= ∇̂κ₂ by Codazzi).
    pub mu: Vec<f64>,
    /// Orthonormal blocks of the rough Laplacian of A.
    pub lap_h11: Vec<f64>,
    pub lap_hang: Vec<f64>,
    pub grad_a_sq: Vec<f64>,
    pub lap_a_sq: Vec<f64>,
    pub norm_grad_a_sq: Vec<f64>,
    /// Reparametrization drift ξ and its u-derivative.
    pub xi: Vec<f64>,
    pub dxi: Vec<f64>,
    pub convex: Option<ConvexFields>,
}

impl DerivedFields {
    pub fn new(state: &FlowState) -> Self {
        let shape = &state.shape;
        let ops = shape.ops();
        let du = shape.du;
        let grad_h = shape.grad_h_u.clone();
        let lap_h = shape.lap_h.clone();
        let hess1_h = ops.hess_profile(&shape.h);
        let hessa_h = ops.hess_angular(&shape.h);
        let lap_dh_u = ops.lap_grad_oneform(&grad_h);
        let grad_k1 = d1(&shape.kappa1, du, Parity::Even);
        let grad_k2 = d1(&shape.kappa2, du, Parity::Even);
        // the mixed ∇A component equals ∇̂κ₂ by Codazzi (pole-regular form)
        let mu: Vec<f64> = grad_k2.iter().zip(&shape.w).map(|(g, w)| g / w).collect();
        let (lap_h11, lap_hang) = ops.lap_second_form(&shape.kappa1, &shape.kappa2);
        let grad_a_sq = d1(&shape.a_sq, du, Parity::Even);
        let lap_a_sq = ops.lap_scalar(&shape.a_sq);
        let norm_grad_a_sq = ops.norm_grad_a_sq(&shape.kappa1, &shape.kappa2);
        let xi = drift_speed(state);
        let dxi = d1(&xi, du, Parity::Odd);

        let convex = if shape.is_strictly_convex() {
            let ng = shape.norm_grad_h_b().unwrap().to_vec();
            let nodes = shape.node_count();
            let mut eta11 = Vec::with_capacity(nodes);
            let mut etaang = Vec::with_capacity(nodes);
            for k in 0..nodes {
                let w2 = shape.w[k] * shape.w[k];
                let bgrad = grad_h[k] / (w2 * shape.kappa1[k]);
                eta11.push(
                    hess1_h[k] + shape.h[k] * shape.kappa1[k] * shape.kappa1[k]
                        - bgrad * grad_k1[k],
                );
                etaang.push(
                    hessa_h[k] + shape.h[k] * shape.kappa2[k] * shape.kappa2[k]
                        - bgrad * grad_k2[k],
                );
            }
            let dt_h = dt_h_identity(state);
            let theta_identity = dt_h.iter().zip(&ng).map(|(d, w)| d - w).collect();
            Some(ConvexFields {
                norm_grad_h_b: ng,
                eta11,
                etaang,
                theta_identity,
            })
        } else {
            None
        };

        Self {
            grad_h,
            lap_h,
            hess1_h,
            hessa_h,
            lap_dh_u,
            grad_k1,
            grad_k2,
            mu,
            lap_h11,
            lap_hang,
            grad_a_sq,
            lap_a_sq,
            norm_grad_a_sq,
            xi,
            dxi,
            convex,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ShrinkingSphere;
    use crate::sphere::EquatorFrame;
    use std::f64::consts::PI;

    #[test]
    fn sphere_fields_vanish_or_close() {
        let frame = EquatorFrame::standard(2);
        let s = ShrinkingSphere::centered(2, &frame, 0.5).unwrap();
        let state = FlowState::new(0.0, s.sample_as_grid(0.0, 64, &frame).unwrap());
        let f = DerivedFields::new(&state);
        let cot = 1.0 / (PI / 3.0).tan();
        let h = 2.0 * cot;
        for k in 0..state.shape.node_count() {
            assert!(f.grad_h[k].abs() < 1e-12);
            assert!(f.mu[k].abs() < 1e-12);
            assert!(f.norm_grad_a_sq[k].abs() < 1e-12);
            assert!(f.xi[k].abs() < 1e-12);
            let cf = f.convex.as_ref().unwrap();
            // η = H h² on centered spheres
            assert!((cf.eta11[k] - h * cot * cot).abs() < 1e-10);
            assert!((cf.etaang[k] - h * cot * cot).abs() < 1e-10);
            // Θ = ∂_t H
            assert!((cf.theta_identity[k] - 16.0 / (3.0 * 3.0f64.sqrt())).abs() < 1e-10);
        }
    }
}
