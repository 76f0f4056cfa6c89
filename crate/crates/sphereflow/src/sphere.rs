//! Exact spherical geometry relative to a reference equator.
//!
//! Points live on the unit sphere S^{n+1} ⊂ R^{n+2} and every spherical
//! quantity reduces to Euclidean inner products: the height of x above the
//! equator E = e^⊥ ∩ S^{n+1} is ⟨x, e⟩, the radial distance from the pole is
//! arccos⟨x, e⟩, and the Aleksandrov reflection across a hyperplane V^⊥ is
//! x ↦ x − 2⟨x, V⟩V. There are no chart singularities away from ±e; the two
//! poles are explicit error cases of the radial projection.

use thiserror::Error;

/// Unit-norm tolerance for points and frame vectors on the sphere.
pub const ON_SPHERE_TOL: f64 = 1e-12;

/// Below this norm of x − ⟨x,e⟩e the radial projection is degenerate.
pub const POLE_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("point is not on the unit sphere: | |x| - 1 | = {0:.3e}")]
    OffSphere(f64),
    #[error("radial projection degenerates near the poles: |x - <x,e>e| = {0:.3e}")]
    DegeneratePole(f64),
    #[error("invalid equator frame: {0}")]
    BadFrame(String),
    #[error("reflection tilt must lie in (0, pi/4), got {0}")]
    BadDelta(f64),
    #[error("reflection vector tilt mismatch: <v,e> = {got:.6e}, want -sin(delta) = {want:.6e}")]
    BadReflectionVector { got: f64, want: f64 },
    #[error("dimension mismatch: expected ambient dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// A point of the unit sphere S^{n+1}, stored in ambient coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    coords: Vec<f64>,
}

impl SpherePoint {
    /// Accepts coordinates whose norm is 1 within [`ON_SPHERE_TOL`].
    pub fn new(coords: Vec<f64>) -> Result<Self, GeometryError> {
        let r = norm(&coords);
        if (r - 1.0).abs() > ON_SPHERE_TOL {
            return Err(GeometryError::OffSphere((r - 1.0).abs()));
        }
        Ok(Self { coords })
    }

    /// Rescales arbitrary nonzero coordinates onto the sphere.
    pub fn normalized(coords: Vec<f64>) -> Self {
        let r = norm(&coords);
        Self {
            coords: coords.into_iter().map(|c| c / r).collect(),
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Ambient dimension n+2.
    pub fn ambient_dim(&self) -> usize {
        self.coords.len()
    }

    pub fn dot(&self, other: &SpherePoint) -> f64 {
        dot(&self.coords, &other.coords)
    }
}

/// The reference equator geometry: the pole direction e, the axisymmetry
/// axis a inside the equator, and the ambient curvature constant λ = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct EquatorFrame {
    n: usize,
    e: Vec<f64>,
    axis_a: Vec<f64>,
    lambda: f64,
}

impl EquatorFrame {
    /// Standard frame in R^{n+2}: e along the first axis, a along the second.
    pub fn standard(n: usize) -> Self {
        let dim = n + 2;
        let mut e = vec![0.0; dim];
        e[0] = 1.0;
        let mut a = vec![0.0; dim];
        a[1] = 1.0;
        Self {
            n,
            e,
            axis_a: a,
            lambda: 1.0,
        }
    }

    /// General frame; e and axis_a must be orthonormal within [`ON_SPHERE_TOL`].
    pub fn new(n: usize, e: Vec<f64>, axis_a: Vec<f64>) -> Result<Self, GeometryError> {
        let dim = n + 2;
        if e.len() != dim || axis_a.len() != dim {
            return Err(GeometryError::BadFrame(format!(
                "frame vectors must have length {dim}"
            )));
        }
        if (norm(&e) - 1.0).abs() > ON_SPHERE_TOL {
            return Err(GeometryError::BadFrame("|e| != 1".into()));
        }
        if (norm(&axis_a) - 1.0).abs() > ON_SPHERE_TOL {
            return Err(GeometryError::BadFrame("|axis_a| != 1".into()));
        }
        if dot(&e, &axis_a).abs() > ON_SPHERE_TOL {
            return Err(GeometryError::BadFrame("<e, axis_a> != 0".into()));
        }
        Ok(Self {
            n,
            e,
            axis_a,
            lambda: 1.0,
        })
    }

    /// Hypersurface dimension n.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ambient_dim(&self) -> usize {
        self.n + 2
    }

    pub fn e(&self) -> &[f64] {
        &self.e
    }

    pub fn axis_a(&self) -> &[f64] {
        &self.axis_a
    }

    /// Ambient sectional curvature constant, fixed to 1.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Orthonormal basis of {e, a}^⊥ (the rotation directions), built
    /// deterministically by Gram-Schmidt over the standard basis.
    pub fn w_basis(&self) -> Vec<Vec<f64>> {
        let dim = self.ambient_dim();
        let mut basis: Vec<Vec<f64>> = vec![self.e.clone(), self.axis_a.clone()];
        for i in 0..dim {
            if basis.len() == dim {
                break;
            }
            let mut v = vec![0.0; dim];
            v[i] = 1.0;
            for b in &basis {
                let c = dot(&v, b);
                for (vj, bj) in v.iter_mut().zip(b) {
                    *vj -= c * bj;
                }
            }
            let r = norm(&v);
            if r > 1e-8 {
                basis.push(v.into_iter().map(|c| c / r).collect());
            }
        }
        basis.split_off(2)
    }

    /// First rotation direction; the profile great circle lives in span{e, a, w}.
    pub fn section_w(&self) -> Vec<f64> {
        self.w_basis().into_iter().next().expect("n >= 1")
    }
}

/// Spherical distance ρ(x) = d(p, x) = arccos⟨x, e⟩ from the pole p.
pub fn radial_distance(x: &SpherePoint, frame: &EquatorFrame) -> f64 {
    height(x, frame).clamp(-1.0, 1.0).acos()
}

/// Height above the equator, ⟨x, e⟩ = cos(radial distance).
pub fn height(x: &SpherePoint, frame: &EquatorFrame) -> f64 {
    dot(x.coords(), frame.e())
}

/// Nearest point of the equator, π(x) = x' / |x'| with x' = x − ⟨x,e⟩e.
///
/// At the poles x = ±e every point of E is nearest; that case is reported
/// as [`GeometryError::DegeneratePole`].
pub fn radial_projection(
    x: &SpherePoint,
    frame: &EquatorFrame,
) -> Result<SpherePoint, GeometryError> {
    let h = height(x, frame);
    let mut xp: Vec<f64> = x
        .coords()
        .iter()
        .zip(frame.e())
        .map(|(xi, ei)| xi - h * ei)
        .collect();
    let r = norm(&xp);
    if r < POLE_TOL {
        return Err(GeometryError::DegeneratePole(r));
    }
    for c in &mut xp {
        *c /= r;
    }
    Ok(SpherePoint { coords: xp })
}

/// Geodesic polar coordinates back to ambient: (ρ, σ) ↦ cos(ρ)e + sin(ρ)σ.
///
/// σ must lie on the equator E; for ρ ∈ (0, π) the pair
/// (radial_distance, radial_projection) inverts this map.
pub fn polar_to_ambient(rho: f64, sigma: &SpherePoint, frame: &EquatorFrame) -> SpherePoint {
    debug_assert!((0.0..=std::f64::consts::PI).contains(&rho));
    debug_assert!(height(sigma, frame).abs() < 1e-9, "sigma must lie on E");
    let (s, c) = rho.sin_cos();
    let coords = frame
        .e()
        .iter()
        .zip(sigma.coords())
        .map(|(ei, si)| c * ei + s * si)
        .collect();
    SpherePoint { coords }
}

/// The Aleksandrov reflection data: a unit normal V tilted below the equator
/// by the angle δ ∈ (0, π/4), so that sin δ = ⟨V, −e⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionSpec {
    v: Vec<f64>,
    delta: f64,
}

impl ReflectionSpec {
    /// The canonical axis-aligned spec, V = −sin(δ) e + cos(δ) a.
    pub fn tilted(frame: &EquatorFrame, delta: f64) -> Result<Self, GeometryError> {
        if !(delta > 0.0 && delta < std::f64::consts::FRAC_PI_4) {
            return Err(GeometryError::BadDelta(delta));
        }
        let (s, c) = delta.sin_cos();
        let v = frame
            .e()
            .iter()
            .zip(frame.axis_a())
            .map(|(ei, ai)| -s * ei + c * ai)
            .collect();
        Ok(Self { v, delta })
    }

    /// Builds a spec from an explicit unit vector, recovering δ = asin(−⟨v,e⟩).
    pub fn from_vector(frame: &EquatorFrame, v: Vec<f64>) -> Result<Self, GeometryError> {
        if v.len() != frame.ambient_dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: frame.ambient_dim(),
                got: v.len(),
            });
        }
        let r = norm(&v);
        if (r - 1.0).abs() > ON_SPHERE_TOL {
            return Err(GeometryError::OffSphere((r - 1.0).abs()));
        }
        let ve = dot(&v, frame.e());
        let delta = (-ve).asin();
        if !(delta > 0.0 && delta < std::f64::consts::FRAC_PI_4) {
            return Err(GeometryError::BadDelta(delta));
        }
        if (ve + delta.sin()).abs() > ON_SPHERE_TOL {
            return Err(GeometryError::BadReflectionVector {
                got: ve,
                want: -delta.sin(),
            });
        }
        Ok(Self { v, delta })
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// Reflection of raw ambient coordinates, x − 2⟨x, v⟩v.
pub(crate) fn reflect_coords(x: &[f64], v: &[f64]) -> Vec<f64> {
    let c = 2.0 * dot(x, v);
    x.iter().zip(v).map(|(xi, vi)| xi - c * vi).collect()
}

/// The Aleksandrov reflection R(x) = x − 2⟨x, V⟩V.
///
/// R fixes the hyperplane V^⊥ pointwise and restricts to an isometry of the
/// sphere; it is an involution.
pub fn reflect(x: &SpherePoint, spec: &ReflectionSpec) -> SpherePoint {
    SpherePoint {
        coords: reflect_coords(x.coords(), &spec.v),
    }
}
