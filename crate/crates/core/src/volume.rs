//! Lobachevsky function, ideal tetrahedron volumes and the volume bound
//! `vol ≤ ν·n₃` for a triangulation with `n₃` tetrahedra.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::tanh_sinh;
use crate::triangulation::{GluingSystem, ShapeAssignment, DEGENERATE_SHAPE_TOL};

const SERIES_TERMS: usize = 40;

/// `ζ(2n)` for `n = 1..=SERIES_TERMS`, by direct summation with an
/// Euler–Maclaurin tail.
fn zeta_even() -> &'static [f64; SERIES_TERMS] {
    static TABLE: OnceLock<[f64; SERIES_TERMS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = [0.0; SERIES_TERMS];
        const N: usize = 64;
        for (i, slot) in out.iter_mut().enumerate() {
            let s = 2.0 * (i + 1) as f64;
            // Sum small terms first.
            let head: f64 = (1..N).rev().map(|k| (k as f64).powf(-s)).sum();
            let n = N as f64;
            let tail = n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s) + s / 12.0 * n.powf(-s - 1.0)
                - s * (s + 1.0) * (s + 2.0) / 720.0 * n.powf(-s - 3.0)
                + s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) / 30240.0 * n.powf(-s - 5.0);
            *slot = head + tail;
        }
        out
    })
}

/// Lobachevsky function `Λ(θ) = −∫₀^θ log|2 sin u| du`.
///
/// Odd and π-periodic. Evaluated by reducing to `[−π/2, π/2]` and summing
/// `Λ(θ) = θ(1 − log|2θ|) + Σ ζ(2n)/(n(2n+1)) · θ^{2n+1}/π^{2n}`.
pub fn lobachevsky(theta: f64) -> f64 {
    if !theta.is_finite() {
        return f64::NAN;
    }
    let mut x = theta.rem_euclid(PI);
    if x > FRAC_PI_2 {
        x -= PI;
    }
    if x == 0.0 {
        return 0.0;
    }
    let zeta = zeta_even();
    let ratio = (x / PI) * (x / PI);
    let mut power = 1.0;
    let mut sum = 0.0;
    for (i, z) in zeta.iter().enumerate() {
        let n = (i + 1) as f64;
        power *= ratio;
        let term = z / (n * (2.0 * n + 1.0)) * power;
        sum += term;
        if term < 1e-18 {
            break;
        }
    }
    x * (1.0 - (2.0 * x.abs()).ln() + sum)
}

/// `ν = −3∫₀^{π/3} log|2 sin u| du`, the volume of the regular ideal
/// tetrahedron, by quadrature.
pub fn nu() -> f64 {
    static NU: OnceLock<f64> = OnceLock::new();
    *NU.get_or_init(|| {
        let q = tanh_sinh(|u| (2.0 * u.sin()).abs().ln(), 0.0, PI / 3.0, 1e-15);
        -3.0 * q.value
    })
}

/// Volume of the ideal tetrahedron with shape `z`: the sum of `Λ` over the
/// three dihedral angles. Negative for negatively oriented shapes.
pub fn tetra_volume(z: Complex64) -> Result<f64> {
    let one = Complex64::new(1.0, 0.0);
    if !z.is_finite() || z.norm() <= DEGENERATE_SHAPE_TOL || (z - one).norm() <= DEGENERATE_SHAPE_TOL {
        return Err(Error::DegenerateShape { tet: 0, z: z.to_string() });
    }
    let zp = (one - z).inv();
    let zpp = (z - one) / z;
    Ok(lobachevsky(z.arg()) + lobachevsky(zp.arg()) + lobachevsky(zpp.arg()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeReport {
    pub per_tet: Vec<f64>,
    pub total: f64,
    /// `ν·n₃`.
    pub bound: f64,
    pub bound_satisfied: bool,
    /// Tetrahedra with `Im z ≤ 0`; they contribute negatively to `total`.
    pub negatively_oriented: Vec<usize>,
}

pub fn volume_report(system: &GluingSystem, shapes: &ShapeAssignment) -> Result<VolumeReport> {
    if shapes.len() != system.n_tet() {
        return Err(Error::InvalidArgument(format!(
            "expected {} shapes, got {}",
            system.n_tet(),
            shapes.len()
        )));
    }
    shapes.check_nondegenerate()?;
    let per_tet = shapes
        .z
        .iter()
        .enumerate()
        .map(|(tet, &z)| {
            tetra_volume(z).map_err(|_| Error::DegenerateShape { tet, z: z.to_string() })
        })
        .collect::<Result<Vec<_>>>()?;
    let total: f64 = per_tet.iter().sum();
    let bound = nu() * system.n_tet() as f64;
    Ok(VolumeReport {
        per_tet,
        total,
        bound,
        bound_satisfied: total <= bound + 1e-9,
        negatively_oriented: shapes.negatively_oriented(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::load;

    #[test]
    fn zero_and_symmetries() {
        assert_eq!(lobachevsky(0.0), 0.0);
        assert!(lobachevsky(PI).abs() < 1e-15);
        for &t in &[0.1, 0.7, 1.3, 2.9] {
            assert!((lobachevsky(t + PI) - lobachevsky(t)).abs() < 1e-13);
            assert!((lobachevsky(-t) + lobachevsky(t)).abs() < 1e-15);
        }
    }

    #[test]
    fn half_pi_vanishes() {
        assert!(lobachevsky(FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn zeta_two_and_four() {
        let z = zeta_even();
        assert!((z[0] - PI * PI / 6.0).abs() < 1e-15);
        assert!((z[1] - PI.powi(4) / 90.0).abs() < 1e-15);
    }

    #[test]
    fn regular_tetrahedron_is_nu() {
        let v = tetra_volume(Complex64::from_polar(1.0, PI / 3.0)).unwrap();
        assert!((v - nu()).abs() < 1e-10);
    }

    #[test]
    fn flat_and_square_shapes() {
        assert_eq!(tetra_volume(Complex64::new(2.0, 0.0)).unwrap(), 0.0);
        let v = tetra_volume(Complex64::i()).unwrap();
        assert!((v - 2.0 * lobachevsky(PI / 4.0)).abs() < 1e-14);
        assert!(tetra_volume(Complex64::new(0.0, 0.0)).is_err());
        assert!(tetra_volume(Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn figure8_report_saturates_bound() {
        let sys = load("figure8").unwrap().assemble();
        let shapes = ShapeAssignment::uniform(2, Complex64::from_polar(1.0, PI / 3.0));
        let rep = volume_report(&sys, &shapes).unwrap();
        assert!((rep.total - 2.0 * nu()).abs() < 1e-12);
        assert!((rep.total - 2.029883212819307).abs() < 1e-12);
        assert!(rep.bound_satisfied);
        assert!((rep.total - rep.per_tet.iter().sum::<f64>()).abs() < 2e-12);
        assert!(rep.negatively_oriented.is_empty());
    }
}
