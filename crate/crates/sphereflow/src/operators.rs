//! Covariant operators on the axisymmetric warped-product metric
//! g = W(u)² du² + R(u)² ĝ, with R = sin(ρ) sin(u) and ĝ the round metric
//! of the (n−1)-dimensional rotation orbit.
//!
//! All tensors of interest are diagonal in the orthonormal frame
//! {ê₁ = ∂_u/W, ê_α} with a single profile value and a single angular value
//! of multiplicity n−1, so every operator reduces to one-dimensional
//! stencils in u plus explicit warping terms. The angular log-derivative
//! splits as R'/R = s'/s + cot(u), which isolates the pole singularity in
//! cot(u); pole nodes use the L'Hôpital limits of each operator.

use crate::stencil::{d1, d2, Parity};

/// Differential-operator context for one surface state.
pub struct Ops<'a> {
    pub n: usize,
    pub du: f64,
    pub u: &'a [f64],
    /// W = √(g_uu), the profile line element.
    pub w: &'a [f64],
    /// s = sin(ρ).
    pub s: &'a [f64],
    wp: Vec<f64>,
    wpp: Vec<f64>,
    sp: Vec<f64>,
}

impl<'a> Ops<'a> {
    pub fn new(n: usize, du: f64, u: &'a [f64], w: &'a [f64], s: &'a [f64]) -> Self {
        let wp = d1(w, du, Parity::Even);
        let wpp = d2(w, du, Parity::Even);
        let sp = d1(s, du, Parity::Even);
        Self {
            n,
            du,
            u,
            w,
            s,
            wp,
            wpp,
            sp,
        }
    }

    fn last(&self) -> usize {
        self.u.len() - 1
    }

    /// R'/R = s'/s + cot(u); interior nodes only.
    fn rr(&self, k: usize) -> f64 {
        self.sp[k] / self.s[k] + 1.0 / self.u[k].tan()
    }

    /// Scalar Laplace–Beltrami Δf = (1/√g) ∂_u(√g g^{uu} ∂_u f) for an even
    /// axisymmetric field.
    ///
    /// The pole limit is n f''/W², but evaluating it through its own stencil
    /// would sit O(Δu²) off the interior error function and poison any later
    /// ∂_u of the result at the pole-adjacent nodes; the pole values are
    /// instead extrapolated from the interior branch (even-quadratic,
    /// O(Δu⁴)-consistent).
    pub fn lap_scalar(&self, f: &[f64]) -> Vec<f64> {
        let m = self.last();
        let f1 = d1(f, self.du, Parity::Even);
        let f2 = d2(f, self.du, Parity::Even);
        let mut out = vec![0.0; m + 1];
        for k in 1..m {
            let w = self.w[k];
            out[k] = f2[k] / (w * w) - self.wp[k] * f1[k] / (w * w * w)
                + (self.n as f64 - 1.0) * self.rr(k) * f1[k] / (w * w);
        }
        out[0] = (15.0 * out[1] - 6.0 * out[2] + out[3]) / 10.0;
        out[m] = (15.0 * out[m - 1] - 6.0 * out[m - 2] + out[m - 3]) / 10.0;
        out
    }

    /// Orthonormal profile Hessian component (∇²f)(ê₁, ê₁).
    pub fn hess_profile(&self, f: &[f64]) -> Vec<f64> {
        let f1 = d1(f, self.du, Parity::Even);
        let f2 = d2(f, self.du, Parity::Even);
        f2.iter()
            .zip(&f1)
            .zip(self.w.iter().zip(&self.wp))
            .map(|((f2k, f1k), (wk, wpk))| (f2k - wpk / wk * f1k) / (wk * wk))
            .collect()
    }

    /// Orthonormal angular Hessian component (∇²f)(ê_α, ê_α); the pole limit
    /// coincides with the profile component.
    pub fn hess_angular(&self, f: &[f64]) -> Vec<f64> {
        let m = self.last();
        let f1 = d1(f, self.du, Parity::Even);
        let hp = self.hess_profile(f);
        let mut out = vec![0.0; m + 1];
        for k in 1..m {
            out[k] = self.rr(k) * f1[k] / (self.w[k] * self.w[k]);
        }
        out[0] = hp[0];
        out[m] = hp[m];
        out
    }

    /// Coordinate u-component of the rough Laplacian of the one-form df,
    /// given the coordinate gradient g = ∂_u f (odd field). Vanishes at the
    /// poles by parity.
    ///
    /// Written through the regular even field φ = g/sin(u): the raw form
    /// carries (R'/R) g' and (R'/R)² g terms whose stencil noise blows up
    /// like 1/u at the poles, while every coefficient of the φ form stays
    /// bounded, keeping the operator second-order up to the pole collar.
    pub fn lap_grad_oneform(&self, g: &[f64]) -> Vec<f64> {
        let m = self.last();
        let nm1 = self.n as f64 - 1.0;
        let mut phi = vec![0.0; m + 1];
        for k in 1..m {
            phi[k] = g[k] / self.u[k].sin();
        }
        // pole limits of g/sin(u) to O(Δu⁴): the pole values feed the
        // neighbors' stencils divided by Δu, so a plain O(Δu²) estimate
        // would degrade the whole operator to first order
        phi[0] = (45.0 * g[1] - 9.0 * g[2] + g[3]) / (30.0 * self.du);
        phi[m] = (45.0 * g[m - 1] - 9.0 * g[m - 2] + g[m - 3]) / (30.0 * self.du);
        let p1 = d1(&phi, self.du, Parity::Even);
        let p2 = d2(&phi, self.du, Parity::Even);
        let mut out = vec![0.0; m + 1];
        for k in 1..m {
            let w = self.w[k];
            let a = self.wp[k] / w;
            let ss = self.sp[k] / self.s[k];
            let (si, co) = self.u[k].sin_cos();
            let t1 = -si * phi[k] + 2.0 * co * p1[k] + si * p2[k]
                - 3.0 * a * (co * phi[k] + si * p1[k])
                - self.wpp[k] / w * si * phi[k]
                + 3.0 * a * a * si * phi[k];
            let t2 = nm1
                * (ss * si * p1[k] + co * p1[k]
                    - ss * co * phi[k]
                    - ss * ss * si * phi[k]
                    - a * (ss * si + co) * phi[k]);
            out[k] = (t1 + t2) / (w * w);
        }
        out
    }

    /// Rough Laplacian of a diagonal symmetric 2-tensor with orthonormal
    /// eigenvalue functions (s₁ profile, s₂ angular): returns the two
    /// orthonormal diagonal blocks. The warping couples the blocks through
    /// 2 (R'/R)² (s₂ − s₁)/W² terms; at the poles the coupling limit is
    /// estimated from the adjacent node, where s₂ − s₁ = O(u²).
    pub fn lap_diag_tensor(&self, s1: &[f64], s2: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let m = self.last();
        let nm1 = self.n as f64 - 1.0;
        let mut l1 = self.lap_scalar(s1);
        let mut l2 = self.lap_scalar(s2);
        for k in 1..m {
            let c = {
                let rr = self.rr(k);
                rr * rr / (self.w[k] * self.w[k])
            };
            l1[k] += 2.0 * nm1 * c * (s2[k] - s1[k]);
            l2[k] += 2.0 * c * (s1[k] - s2[k]);
        }
        for (k, adj) in [(0usize, 1usize), (m, m - 1)] {
            let c = (s2[adj] - s1[adj]) / (self.du * self.du) / (self.w[k] * self.w[k]);
            l1[k] += 2.0 * nm1 * c;
            l2[k] -= 2.0 * c;
        }
        (l1, l2)
    }

    /// Rough Laplacian blocks of the second fundamental form. Same operator
    /// as [`Ops::lap_diag_tensor`], but the coupling (R'/R)²(κ₂ − κ₁) is
    /// rewritten through the Codazzi relation (R'/R)(κ₁ − κ₂) = ∂_u κ₂ as
    /// −(R'/R) ∂_u κ₂, whose stencil noise stays O(Δu²) at the poles (the
    /// raw form amplifies the κ₁ − κ₂ noise by 1/sin²u).
    pub fn lap_second_form(&self, k1: &[f64], k2: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let m = self.last();
        let nm1 = self.n as f64 - 1.0;
        let mut l1 = self.lap_scalar(k1);
        let mut l2 = self.lap_scalar(k2);
        let core = self.codazzi_coupling_core(k2);
        for k in 0..=m {
            l1[k] -= 2.0 * nm1 * core[k];
            l2[k] += 2.0 * core[k];
        }
        (l1, l2)
    }

    /// The pole-regular coupling core (R'/R)(∂_u κ₂)/W², equal by Codazzi to
    /// (R'/R)²(κ₁ − κ₂)/W²; pole nodes take the limit (∂²_u κ₂)/W².
    pub fn codazzi_coupling_core(&self, k2: &[f64]) -> Vec<f64> {
        let m = self.last();
        let dk2 = d1(k2, self.du, Parity::Even);
        let ddk2 = d2(k2, self.du, Parity::Even);
        let mut out = vec![0.0; m + 1];
        for k in 1..m {
            out[k] = self.rr(k) * dk2[k] / (self.w[k] * self.w[k]);
        }
        out[0] = ddk2[0] / (self.w[0] * self.w[0]);
        out[m] = ddk2[m] / (self.w[m] * self.w[m]);
        out
    }

    /// The Codazzi component of ∇A in the orthonormal frame,
    /// μ = (R'/R)(κ₁ − κ₂)/W; zero at the poles where κ₁ = κ₂.
    pub fn codazzi_component(&self, k1: &[f64], k2: &[f64]) -> Vec<f64> {
        let m = self.last();
        let mut out = vec![0.0; m + 1];
        for k in 1..m {
            out[k] = self.rr(k) * (k1[k] - k2[k]) / self.w[k];
        }
        out
    }

    /// Full squared norm of ∇A: |∇A|² = (∇̂κ₁)² + (n−1)(∇̂κ₂)² + 2(n−1)μ².
    /// The mixed component μ equals ∇̂κ₂ by Codazzi (verified separately by
    /// the Codazzi residual), which is the pole-regular way to compute it.
    pub fn norm_grad_a_sq(&self, k1: &[f64], k2: &[f64]) -> Vec<f64> {
        let g1 = d1(k1, self.du, Parity::Even);
        let g2 = d1(k2, self.du, Parity::Even);
        let nm1 = self.n as f64 - 1.0;
        (0..self.u.len())
            .map(|k| {
                let a = g1[k] / self.w[k];
                let b = g2[k] / self.w[k];
                a * a + 3.0 * nm1 * b * b
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Operators on the centered geodesic sphere ρ ≡ r: W = sin r,
    /// R = sin r sin u, so closed forms are available for every operator.
    fn sphere_ops(_n: usize, segments: usize, r: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>, f64) {
        let du = PI / segments as f64;
        let u: Vec<f64> = (0..=segments).map(|k| k as f64 * du).collect();
        let w = vec![r.sin(); segments + 1];
        let s = vec![r.sin(); segments + 1];
        (u, w, s, du)
    }

    #[test]
    fn laplacian_of_constant_vanishes() {
        let (u, w, s, du) = sphere_ops(2, 64, PI / 3.0);
        let ops = Ops::new(2, du, &u, &w, &s);
        let f = vec![3.7; u.len()];
        assert!(ops.lap_scalar(&f).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn laplacian_eigenfunction_on_round_sphere() {
        // Δ cos(u) = −n cos(u)/sin²r on the orbit sphere of radius sin r
        for &n in &[2usize, 3] {
            let r = PI / 3.0;
            let mut prev = f64::NAN;
            for &segs in &[32usize, 64, 128] {
                let (u, w, s, du) = sphere_ops(n, segs, r);
                let ops = Ops::new(n, du, &u, &w, &s);
                let f: Vec<f64> = u.iter().map(|x| x.cos()).collect();
                let lap = ops.lap_scalar(&f);
                let err = u
                    .iter()
                    .zip(&lap)
                    .map(|(x, l)| (l + n as f64 * x.cos() / (r.sin() * r.sin())).abs())
                    .fold(0.0, f64::max);
                if !prev.is_nan() {
                    assert!(err < prev / 3.0, "n={n}: {prev} -> {err}");
                }
                prev = err;
            }
        }
    }

    #[test]
    fn hessian_trace_matches_laplacian() {
        // tr ∇²f = Δf holds exactly as implemented at interior nodes
        let (u, w, s, du) = sphere_ops(3, 64, 1.1);
        let ops = Ops::new(3, du, &u, &w, &s);
        let f: Vec<f64> = u.iter().map(|x| (2.0 * x).cos() + 0.3 * x.cos()).collect();
        let lap = ops.lap_scalar(&f);
        let hp = ops.hess_profile(&f);
        let ha = ops.hess_angular(&f);
        for k in 1..u.len() - 1 {
            let tr = hp[k] + 2.0 * ha[k];
            assert!((tr - lap[k]).abs() < 1e-10, "node {k}: {tr} vs {}", lap[k]);
        }
    }

    #[test]
    fn oneform_laplacian_round_sphere_closed_form() {
        // For ω = d(cos u) on the sphere of radius sin r: (Δω)_u = sin(u)/sin²r,
        // independent of n (the Weitzenböck curvature term cancels the
        // warping). The regularized form reproduces this exactly: the field
        // φ = g/sin(u) is the constant −1.
        for &n in &[2usize, 3] {
            let r = 0.9;
            let (u, w, s, du) = sphere_ops(n, 64, r);
            let ops = Ops::new(n, du, &u, &w, &s);
            let g: Vec<f64> = u.iter().map(|x| -x.sin()).collect();
            let lap = ops.lap_grad_oneform(&g);
            for (k, (x, l)) in u.iter().zip(&lap).enumerate().take(63).skip(2) {
                let want = x.sin() / (r.sin() * r.sin());
                assert!((l - want).abs() < 1e-13, "n={n}, node {k}: {l} vs {want}");
            }
            // pole-adjacent nodes use the O(Δu⁴) pole limit of g/sin(u)
            for k in [1usize, 63] {
                let want = u[k].sin() / (r.sin() * r.sin());
                assert!((lap[k] - want).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn oneform_laplacian_converges_on_higher_mode() {
        // ω = d(cos 2u) on the unit 2-sphere (W = 1, R = sin u): the closed
        // form follows from Δ(df) = d(Δf) + Ric(∇f) with Ric = (n−1) g:
        // (Δω)_u = d/du(Δ cos 2u) + (n−1)(−2 sin 2u).
        let n = 2usize;
        let mut prev = f64::NAN;
        for &segs in &[32usize, 64, 128] {
            let du = PI / segs as f64;
            let u: Vec<f64> = (0..=segs).map(|k| k as f64 * du).collect();
            let w = vec![1.0; segs + 1];
            let s = vec![1.0; segs + 1];
            let ops = Ops::new(n, du, &u, &w, &s);
            let g: Vec<f64> = u.iter().map(|x| -2.0 * (2.0 * x).sin()).collect();
            let lap = ops.lap_grad_oneform(&g);
            // Δ cos 2u = −4 cos 2u + cot(u)(−2 sin 2u); differentiate in u
            let want = |x: f64| {
                let d_lap = 8.0 * (2.0 * x).sin() + 2.0 * (2.0 * x).sin() / (x.sin() * x.sin())
                    - 4.0 * (2.0 * x).cos() / x.tan();
                d_lap - 2.0 * (2.0 * x).sin()
            };
            let err = u
                .iter()
                .zip(&lap)
                .skip(1)
                .take(segs - 1)
                .map(|(x, l)| (l - want(*x)).abs())
                .fold(0.0, f64::max);
            if !prev.is_nan() {
                assert!(err < prev / 3.0, "{prev} -> {err}");
            }
            prev = err;
        }
    }

    #[test]
    fn tensor_laplacian_trace_identity() {
        // tr Δ(h) = Δ(tr h) for (1,1)-tensors; with multiplicity n−1 on the
        // angular block this is s₁-block + (n−1)·s₂-block = Δ(s₁ + (n−1)s₂).
        let n = 3usize;
        let (u, w, s, du) = sphere_ops(n, 64, 1.2);
        let ops = Ops::new(n, du, &u, &w, &s);
        let s1: Vec<f64> = u.iter().map(|x| 1.0 + 0.2 * (2.0 * x).cos()).collect();
        let s2: Vec<f64> = u.iter().map(|x| 1.0 + 0.1 * (2.0 * x).cos()).collect();
        let (l1, l2) = ops.lap_diag_tensor(&s1, &s2);
        let tr: Vec<f64> = s1
            .iter()
            .zip(&s2)
            .map(|(a, b)| a + (n as f64 - 1.0) * b)
            .collect();
        let ltr = ops.lap_scalar(&tr);
        for k in 0..u.len() {
            let got = l1[k] + (n as f64 - 1.0) * l2[k];
            assert!((got - ltr[k]).abs() < 1e-9, "node {k}: {got} vs {}", ltr[k]);
        }
    }
}
