use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Gauss–Bonnet test for a closed Euclidean cone surface.
///
/// A closed orientable surface of genus `genus` with cone points of the given
/// angles carries a flat cone metric only if `Σ(2π − θᵢ) = 2π·χ` with
/// `χ = 2 − 2·genus`. Angles must lie in `(0, π]`.
pub fn euclidean_cone_surface_check(genus: u32, angles: &[f64]) -> Result<bool> {
    if let Some(&bad) = angles.iter().find(|&&a| !(a > 0.0 && a <= PI)) {
        return Err(Error::AngleOutOfRange { angle: bad });
    }
    let defect: f64 = angles.iter().map(|a| 2.0 * PI - a).sum();
    let euler = 2.0 - 2.0 * genus as f64;
    Ok((defect - 2.0 * PI * euler).abs() <= 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_torus() {
        assert!(euclidean_cone_surface_check(1, &[]).unwrap());
    }

    #[test]
    fn double_of_acute_triangle() {
        let (a, b) = (0.9, 1.2);
        let c = PI - a - b;
        assert!(euclidean_cone_surface_check(0, &[2.0 * a, 2.0 * b, 2.0 * c]).unwrap());
    }

    #[test]
    fn pillowcase() {
        assert!(euclidean_cone_surface_check(0, &[PI; 4]).unwrap());
    }

    #[test]
    fn spherical_rejected() {
        assert!(!euclidean_cone_surface_check(0, &[PI / 2.0; 3]).unwrap());
    }

    #[test]
    fn angles_out_of_range() {
        assert_eq!(
            euclidean_cone_surface_check(0, &[PI, 3.5]),
            Err(Error::AngleOutOfRange { angle: 3.5 })
        );
        assert!(euclidean_cone_surface_check(0, &[0.0]).is_err());
    }
}
