//! Least-squares fit of the limiting equator: the unit vector e minimizing
//! Σ ⟨x_i, e⟩² is the smallest-eigenvalue direction of the second-moment
//! form of the samples.

use crate::linalg::jacobi_eigen;
use crate::verify::VerifyError;

#[derive(Debug, Clone)]
pub struct EquatorFit {
    pub axis: Vec<f64>,
    /// RMS height of the samples above the fitted equator, √λ_min.
    pub rms_height: f64,
    /// λ₁ − λ₀ of the normalized moment form (simplicity margin).
    pub eigen_gap: f64,
}

/// Fits the equator to ambient sample points. Needs at least n+2 points;
/// fails with [`VerifyError::DegenerateFit`] when the smallest eigenvalue
/// of the moment form is not simple within 1e−10.
pub fn fit_limit_equator(points: &[Vec<f64>]) -> Result<EquatorFit, VerifyError> {
    let dim = points.first().map(|p| p.len()).unwrap_or(0);
    if points.len() < dim {
        return Err(VerifyError::TooFewPoints {
            got: points.len(),
            need: dim,
        });
    }
    let m = points.len() as f64;
    let mut moment = vec![vec![0.0; dim]; dim];
    for p in points {
        for i in 0..dim {
            for j in 0..dim {
                moment[i][j] += p[i] * p[j] / m;
            }
        }
    }
    let (vals, vecs) = jacobi_eigen(&moment);
    let gap = vals[1] - vals[0];
    if gap < 1e-10 {
        return Err(VerifyError::DegenerateFit { gap });
    }
    Ok(EquatorFit {
        axis: vecs[0].clone(),
        rms_height: vals[0].max(0.0).sqrt(),
        eigen_gap: gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ShrinkingSphere;
    use crate::shape::{shape_data, surface_sample_points};
    use crate::sphere::EquatorFrame;

    #[test]
    fn recovers_exact_equator() {
        let frame = EquatorFrame::standard(2);
        let grid = crate::grid::ProfileGrid::equator(2, 32, frame.clone()).unwrap();
        let shape = shape_data(&grid);
        let pts = surface_sample_points(&shape, &frame);
        let fit = fit_limit_equator(&pts).unwrap();
        assert!(fit.rms_height < 1e-12);
        let align: f64 = fit
            .axis
            .iter()
            .zip(frame.e())
            .map(|(a, b)| a * b)
            .sum::<f64>()
            .abs();
        assert!((align - 1.0).abs() < 1e-10, "axis recovered up to sign");
    }

    #[test]
    fn sphere_family_heights_match_radius_law() {
        let frame = EquatorFrame::standard(2);
        let s = ShrinkingSphere::centered(2, &frame, 0.5).unwrap();
        let t = -5.0;
        let grid = s.sample_as_grid(t, 64, &frame).unwrap();
        let shape = shape_data(&grid);
        let pts = surface_sample_points(&shape, &frame);
        let fit = fit_limit_equator(&pts).unwrap();
        let expect = 0.5 * (2.0 * t).exp();
        assert!(
            (fit.rms_height - expect).abs() < 1e-12,
            "rms {} vs cos r {}",
            fit.rms_height,
            expect
        );
    }

    #[test]
    fn too_few_points_rejected() {
        let pts = vec![vec![1.0, 0.0, 0.0, 0.0]];
        assert!(matches!(
            fit_limit_equator(&pts),
            Err(VerifyError::TooFewPoints { .. })
        ));
    }

    #[test]
    fn higher_dimension_fit() {
        // n = 3: ambient R^5, 5×5 moment form
        let frame = EquatorFrame::standard(3);
        let s = ShrinkingSphere::centered(3, &frame, 0.5).unwrap();
        let t = -4.0;
        let grid = s.sample_as_grid(t, 48, &frame).unwrap();
        let shape = shape_data(&grid);
        let fit = fit_limit_equator(&surface_sample_points(&shape, &frame)).unwrap();
        let expect = 0.5 * (3.0 * t).exp();
        assert!((fit.rms_height - expect).abs() < 1e-12);
        let align: f64 = fit
            .axis
            .iter()
            .zip(frame.e())
            .map(|(a, b)| a * b)
            .sum::<f64>()
            .abs();
        assert!((align - 1.0).abs() < 1e-9);
    }
}
