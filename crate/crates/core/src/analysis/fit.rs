//! Best timelike axis for a field of unit normals.

use nalgebra::{Matrix2, Matrix3, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::lorentz::{hyperbolic_angle, AmbientVector};
use crate::surface::{sample_normals, ParamPoint, ParametricSurface};

/// Minimum number of normals accepted by the fit.
pub const MIN_SAMPLES: usize = 9;
/// Largest covariance entry below which the normal field counts as constant.
const DEGENERATE_COVARIANCE: f64 = 1e-24;
/// Relative singular value threshold for eigenvector extraction.
const NULL_SPACE_TOL: f64 = 1e-8;
/// Relative tie window on the objective.
const OBJECTIVE_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisFit {
    /// Unit timelike, future-directed.
    pub axis: AmbientVector,
    /// Mean hyperbolic angle between the normals and the axis.
    pub theta: f64,
    /// `max |⟨ξᵢ, U⟩ − mean|`.
    pub residual: f64,
    pub sample_size: usize,
}

fn to_na(v: AmbientVector) -> Vector3<f64> {
    Vector3::new(v.x1, v.x2, v.x3)
}

fn from_na(v: &Vector3<f64>) -> AmbientVector {
    AmbientVector::new(v[0], v[1], v[2])
}

/// Mean and maximal deviation of `⟨ξᵢ, U⟩`.
pub fn angle_spread(normals: &[AmbientVector], axis: AmbientVector) -> (f64, f64) {
    let dots: Vec<f64> = normals.iter().map(|xi| xi.dot(axis)).collect();
    let mean = dots.iter().sum::<f64>() / dots.len() as f64;
    let residual = dots.iter().map(|d| (d - mean).abs()).fold(0.0, f64::max);
    (mean, residual)
}

fn variance(normals: &[AmbientVector], axis: AmbientVector) -> f64 {
    let dots: Vec<f64> = normals.iter().map(|xi| xi.dot(axis)).collect();
    let mean = dots.iter().sum::<f64>() / dots.len() as f64;
    dots.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / dots.len() as f64
}

/// Unit future-directed version of `w` if it is timelike.
fn as_axis(w: AmbientVector) -> Option<AmbientVector> {
    let sq = w.square();
    if sq < -1e-12 * w.euclidean_norm_squared() && w.is_finite() {
        Some((w / (-sq).sqrt()).future_directed())
    } else {
        None
    }
}

/// Lorentz-orthogonal projection of `target` onto `span(basis)`.
fn project_onto(basis: &[AmbientVector], target: AmbientVector) -> Option<AmbientVector> {
    match basis.len() {
        0 => None,
        1 => Some(basis[0]),
        2 => {
            let gram = Matrix2::new(
                basis[0].square(),
                basis[0].dot(basis[1]),
                basis[1].dot(basis[0]),
                basis[1].square(),
            );
            let rhs = nalgebra::Vector2::new(basis[0].dot(target), basis[1].dot(target));
            let c = gram.try_inverse()? * rhs;
            Some(basis[0] * c[0] + basis[1] * c[1])
        }
        _ => Some(target),
    }
}

/// Fits the unit timelike `U` minimizing the variance of `i ↦ ⟨ξᵢ, U⟩`.
///
/// With `S` the covariance of the normals and `G = diag(1, 1, −1)`, the
/// stationary points on `⟨U, U⟩ = −1` solve `(GSG) U = μ G U`, i.e. `U` is an
/// eigenvector of `SG`, with objective `−μ`. Timelike eigenvectors are
/// ranked by the objective; ties go to the one closest to the mean normal.
/// A numerically constant normal field returns its mean.
pub fn fit_axis_to_normals(normals: &[AmbientVector]) -> Result<AxisFit> {
    if normals.len() < MIN_SAMPLES {
        return Err(GeometryError::InvalidInput(format!(
            "axis fit needs at least {MIN_SAMPLES} normals, got {}",
            normals.len()
        )));
    }
    let n = normals.len() as f64;
    let mean = normals.iter().fold(AmbientVector::ZERO, |acc, &x| acc + x) / n;
    let mut cov = Matrix3::zeros();
    for &xi in normals {
        let d = to_na(xi - mean);
        cov += d * d.transpose();
    }
    cov /= n;
    let scale = cov.amax();
    let mean_axis = as_axis(mean).ok_or(GeometryError::NoTimelikeEigenvector)?;

    let axis = if scale <= DEGENERATE_COVARIANCE {
        mean_axis
    } else {
        let g = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0));
        let m = cov * g;
        let norm = m.norm();
        let mut candidates: Vec<AmbientVector> = Vec::new();
        for mu in m.complex_eigenvalues().iter().map(|z| z.re) {
            let shifted = m - Matrix3::identity() * mu;
            let svd = shifted.svd(false, true);
            let Some(v_t) = svd.v_t else { continue };
            let mut order: Vec<usize> = (0..3).collect();
            order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
            let thr = NULL_SPACE_TOL * (norm + mu.abs());
            let basis: Vec<AmbientVector> = order
                .iter()
                .enumerate()
                .filter(|&(rank, &i)| rank == 0 || svd.singular_values[i] <= thr)
                .map(|(_, &i)| from_na(&v_t.row(i).transpose()))
                .collect();
            if let Some(u) = project_onto(&basis, mean).and_then(as_axis) {
                candidates.push(u);
            }
        }
        let scored: Vec<(f64, f64, AmbientVector)> = candidates
            .into_iter()
            .map(|u| (variance(normals, u), -u.dot(mean_axis), u))
            .collect();
        let best = scored.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
        if !best.is_finite() {
            return Err(GeometryError::NoTimelikeEigenvector);
        }
        let window = OBJECTIVE_TIE * scale;
        scored
            .iter()
            .filter(|c| c.0 <= best + window)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|c| c.2)
            .ok_or(GeometryError::NoTimelikeEigenvector)?
    };

    let (_, residual) = angle_spread(normals, axis);
    let theta = normals
        .iter()
        .map(|&xi| hyperbolic_angle(xi, axis))
        .collect::<Result<Vec<f64>>>()?
        .iter()
        .sum::<f64>()
        / n;
    Ok(AxisFit {
        axis,
        theta,
        residual,
        sample_size: normals.len(),
    })
}

/// Axis fit over the unit normals of `surf` on `grid`.
pub fn fit_constant_axis(surf: &ParametricSurface, grid: &[ParamPoint]) -> Result<AxisFit> {
    if grid.len() < MIN_SAMPLES {
        return Err(GeometryError::InvalidInput(format!(
            "axis fit needs at least {MIN_SAMPLES} grid points, got {}",
            grid.len()
        )));
    }
    fit_axis_to_normals(&sample_normals(surf, grid)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub ok: bool,
    pub fit: AxisFit,
    /// Hyperbolic angle between the fitted axis and the reference axis.
    pub reference_deviation: Option<f64>,
}

/// Constant angle test: `ok` iff the fitted residual is at most `tol`.
pub fn verify_constant_angle(
    surf: &ParametricSurface,
    grid: &[ParamPoint],
    tol: f64,
    reference: Option<AmbientVector>,
) -> Result<Verification> {
    let fit = fit_constant_axis(surf, grid)?;
    let reference_deviation = match reference {
        Some(r) => {
            let r = as_axis(r).ok_or(GeometryError::NotTimelike)?;
            Some(hyperbolic_angle(fit.axis, r)?)
        }
        None => None,
    };
    Ok(Verification {
        ok: fit.residual <= tol,
        fit,
        reference_deviation,
    })
}

/// Smallest residual over a `(rapidity, azimuth)` grid of candidate axes
/// `(sinh r cos φ, sinh r sin φ, cosh r)`; an exhaustive check that no axis
/// makes the normals' angle constant.
pub fn brute_force_min_residual(
    normals: &[AmbientVector],
    n_rapidity: usize,
    n_azimuth: usize,
    max_rapidity: f64,
) -> (f64, AmbientVector) {
    (0..n_rapidity)
        .into_par_iter()
        .map(|i| {
            let r = max_rapidity * i as f64 / (n_rapidity - 1).max(1) as f64;
            let mut best = (f64::INFINITY, AmbientVector::ZERO);
            for j in 0..n_azimuth {
                let phi = std::f64::consts::TAU * j as f64 / n_azimuth as f64;
                let u = AmbientVector::new(r.sinh() * phi.cos(), r.sinh() * phi.sin(), r.cosh());
                let (_, res) = angle_spread(normals, u);
                if res < best.0 {
                    best = (res, u);
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((f64::INFINITY, AmbientVector::ZERO), |a, b| {
            if b.0 < a.0 {
                b
            } else {
                a
            }
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::{Isometry, E3};
    use approx::assert_abs_diff_eq;

    fn ring(theta: f64, axis_iso: Isometry, count: usize) -> Vec<AmbientVector> {
        (0..count)
            .map(|k| {
                let v = 0.37 * k as f64;
                axis_iso.apply(AmbientVector::new(
                    -theta.sinh() * v.cos(),
                    -theta.sinh() * v.sin(),
                    theta.cosh(),
                ))
            })
            .collect()
    }

    #[test]
    fn recovers_axis_of_a_normal_ring() {
        let iso = Isometry::new(0.8, 1.9);
        let fit = fit_axis_to_normals(&ring(1.3, iso, 40)).unwrap();
        assert!(fit.axis.max_abs_diff(iso.apply(E3)) < 1e-10);
        assert_abs_diff_eq!(fit.theta, 1.3, epsilon = 1e-10);
        assert!(fit.residual < 1e-12);
        assert_abs_diff_eq!(fit.axis.square(), -1.0, epsilon = 1e-12);
        assert!(fit.axis.is_future_directed());
    }

    #[test]
    fn constant_field_returns_itself() {
        let xi = Isometry::new(0.4, 0.2).apply(E3);
        let fit = fit_axis_to_normals(&vec![xi; 12]).unwrap();
        assert!(fit.axis.max_abs_diff(xi) < 1e-15);
        assert_eq!(fit.residual, 0.0);
        assert!(fit.theta < 1e-7);
    }

    #[test]
    fn too_few_samples_is_invalid() {
        assert!(matches!(
            fit_axis_to_normals(&[E3; 4]),
            Err(GeometryError::InvalidInput(_))
        ));
    }

    #[test]
    fn brute_force_agrees_on_a_ring() {
        let normals = ring(0.9, Isometry::new(0.0, 0.0), 30);
        let (res, u) = brute_force_min_residual(&normals, 31, 36, 3.0);
        assert!(res < 1e-12);
        assert!(u.max_abs_diff(E3) < 1e-12);
    }

    #[test]
    fn spread_of_a_curved_family_is_large() {
        // normals of a cylinder over a hyperbola, ⟨ξ, E₃⟩ = −cosh s
        let normals: Vec<AmbientVector> = (0..21)
            .map(|k| {
                let s = -1.0 + 0.1 * k as f64;
                AmbientVector::new(0.0, s.sinh(), s.cosh())
            })
            .collect();
        let fit = fit_axis_to_normals(&normals).unwrap();
        assert!(fit.residual > 1e-2);
        let (res, _) = brute_force_min_residual(&normals, 200, 200, 3.0);
        assert!(res > 1e-2);
    }
}
