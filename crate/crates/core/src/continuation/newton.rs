use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::triangulation::{GluingSystem, ShapeAssignment};

/// Residual max-norm accepted as a solution of the complete-structure system.
const COMPLETE_TOL: f64 = 1e-12;
const COMPLETE_MAX_ITERS: usize = 200;
const MIN_DAMPING: f64 = 1e-4;

pub(crate) fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Minimum-norm least-squares solution of `J x = b`.
pub(crate) fn least_squares(jac: DMatrix<Complex64>, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let rhs = DVector::from_column_slice(b);
    let svd = jac.svd(true, true);
    let scale = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let x = svd
        .solve(&rhs, scale * 1e-13)
        .map_err(|e| Error::InvalidArgument(format!("least squares failed: {e}")))?;
    Ok(x.iter().copied().collect())
}

/// Newton corrector for `edges = 2πi, u = targets` starting from `guess`,
/// with log branches continued from `reference`.
pub(crate) fn correct(
    system: &GluingSystem,
    reference: &ShapeAssignment,
    guess: Vec<Complex64>,
    targets: &[Complex64],
    tol: f64,
    max_iters: usize,
) -> Result<(ShapeAssignment, f64)> {
    let mut cur = reference.continued_to(guess);
    let mut best = f64::INFINITY;
    for _ in 0..=max_iters {
        let r = system.residual(&cur, targets)?;
        let res = max_norm(&r);
        if !res.is_finite() {
            break;
        }
        best = best.min(res);
        if res < tol {
            return Ok((cur, res));
        }
        let neg: Vec<Complex64> = r.iter().map(|v| -v).collect();
        let dz = least_squares(system.jacobian(&cur)?, &neg)?;
        let next: Vec<Complex64> = cur.z.iter().zip(&dz).map(|(z, d)| z + d).collect();
        if next.iter().any(|z| !z.is_finite()) {
            break;
        }
        cur = cur.continued_to(next);
        cur.check_nondegenerate()?;
    }
    Err(Error::NoConvergence { best_residual: best })
}

/// Solves the edge equations with all meridian log-holonomies zero (the
/// complete structure) by damped Newton from `seed`, or from the regular
/// shape `e^{iπ/3}` on every tetrahedron.
///
/// Fails with `NoConvergence` if the residual does not drop below `1e-12`,
/// and with `NonGeometric` if the solution found has a shape with
/// `Im z ≤ 0`.
pub fn solve_complete(system: &GluingSystem, seed: Option<&ShapeAssignment>) -> Result<ShapeAssignment> {
    let n = system.n_tet();
    let z0 = match seed {
        Some(s) if s.len() != n => {
            return Err(Error::InvalidArgument(format!("seed has {} shapes, expected {n}", s.len())))
        }
        Some(s) => s.z.clone(),
        None => vec![Complex64::from_polar(1.0, PI / 3.0); n],
    };
    let targets = vec![Complex64::new(0.0, 0.0); system.num_cusps()];
    let mut cur = ShapeAssignment::new(z0);
    let residual_of = |s: &ShapeAssignment| system.residual(s, &targets).map(|r| max_norm(&r));
    let mut res = residual_of(&cur)?;
    let mut best = res;
    for _ in 0..COMPLETE_MAX_ITERS {
        if res < COMPLETE_TOL * 0.1 {
            break;
        }
        let r = system.residual(&cur, &targets)?;
        let neg: Vec<Complex64> = r.iter().map(|v| -v).collect();
        let dz = least_squares(system.jacobian(&cur)?, &neg)?;
        let upper = cur.z.iter().all(|z| z.im > 0.0);
        let mut lambda = 1.0;
        let (next, next_res) = loop {
            let cand = ShapeAssignment::new(cur.z.iter().zip(&dz).map(|(z, d)| z + d * lambda).collect());
            let cand_res = residual_of(&cand).unwrap_or(f64::INFINITY);
            let stays_upper = !upper || cand.z.iter().all(|z| z.im > 0.0);
            if (stays_upper && cand_res < res) || lambda < MIN_DAMPING {
                break (cand, cand_res);
            }
            lambda *= 0.5;
        };
        if !next_res.is_finite() {
            break;
        }
        cur = next;
        res = next_res;
        best = best.min(res);
    }
    if !(res < COMPLETE_TOL) {
        return Err(Error::NoConvergence { best_residual: best });
    }
    if let Some((tet, z)) = cur.z.iter().enumerate().find(|(_, z)| z.im <= 0.0) {
        return Err(Error::NonGeometric { tet, im: z.im });
    }
    Ok(cur)
}

/// [`solve_complete`] from the regular seed, then from up to `attempts`
/// random upper-half-plane seeds drawn from a ChaCha stream seeded with
/// `rng_seed`. Returns the first geometric solution, or the last error.
pub fn solve_complete_multistart(system: &GluingSystem, rng_seed: u64, attempts: usize) -> Result<ShapeAssignment> {
    let mut last = match solve_complete(system, None) {
        Ok(s) => return Ok(s),
        Err(e) => e,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    for _ in 0..attempts {
        let z = (0..system.n_tet())
            .map(|_| Complex64::new(rng.random_range(-0.5..1.5), rng.random_range(0.1..1.5)))
            .collect();
        match solve_complete(system, Some(&ShapeAssignment::new(z))) {
            Ok(s) => return Ok(s),
            Err(e) => last = e,
        }
    }
    Err(last)
}
