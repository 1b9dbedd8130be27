use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::IdealTriangulation;
use crate::error::{Error, Result};

const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * PI);

/// Closeness to 0 or 1 below which a shape counts as degenerate.
pub const DEGENERATE_SHAPE_TOL: f64 = 1e-14;

/// One shape per tetrahedron plus the log-branch bookkeeping.
///
/// `branch[j][k]` shifts the principal logarithm of parameter `k`
/// (`z`, `1/(1−z)`, `(z−1)/z`) of tetrahedron `j` by `2πi·branch[j][k]`.
/// Positively oriented shapes use branch zero throughout; continuation bumps
/// a branch when a parameter crosses the negative real axis so that logs stay
/// continuous along a path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeAssignment {
    pub z: Vec<Complex64>,
    pub branch: Vec<[i32; 3]>,
}

fn parameters(z: Complex64) -> [Complex64; 3] {
    [z, (Complex64::new(1.0, 0.0) - z).inv(), (z - 1.0) / z]
}

impl ShapeAssignment {
    pub fn new(z: Vec<Complex64>) -> Self {
        let branch = vec![[0; 3]; z.len()];
        Self { z, branch }
    }

    pub fn uniform(n_tet: usize, z: Complex64) -> Self {
        Self::new(vec![z; n_tet])
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn check_nondegenerate(&self) -> Result<()> {
        for (tet, &z) in self.z.iter().enumerate() {
            if !z.is_finite() || z.norm() <= DEGENERATE_SHAPE_TOL || (z - 1.0).norm() <= DEGENERATE_SHAPE_TOL {
                return Err(Error::DegenerateShape { tet, z: z.to_string() });
            }
        }
        Ok(())
    }

    /// `3·n` logarithms `log z, log 1/(1−z), log (z−1)/z` on the recorded
    /// branches.
    pub fn log_parameters(&self) -> Result<Vec<Complex64>> {
        self.check_nondegenerate()?;
        let mut out = Vec::with_capacity(3 * self.z.len());
        for (&z, br) in self.z.iter().zip(&self.branch) {
            for (p, &b) in parameters(z).iter().zip(br) {
                out.push(p.ln() + TWO_PI_I * b as f64);
            }
        }
        Ok(out)
    }

    /// Smallest imaginary part over all tetrahedra (signed).
    pub fn min_imag(&self) -> f64 {
        self.z.iter().map(|z| z.im).fold(f64::INFINITY, f64::min)
    }

    pub fn negatively_oriented(&self) -> Vec<usize> {
        self.z.iter().enumerate().filter(|(_, z)| z.im <= 0.0).map(|(j, _)| j).collect()
    }

    /// Shapes `z` with branches chosen so every log parameter is the one
    /// closest to the corresponding log of `self`.
    pub fn continued_to(&self, z: Vec<Complex64>) -> Self {
        let branch = self
            .z
            .iter()
            .zip(&self.branch)
            .zip(&z)
            .map(|((&old, old_br), &new)| {
                let (po, pn) = (parameters(old), parameters(new));
                let mut br = [0; 3];
                for k in 0..3 {
                    let reference = po[k].arg() + 2.0 * PI * old_br[k] as f64;
                    br[k] = ((reference - pn[k].arg()) / (2.0 * PI)).round() as i32;
                }
                br
            })
            .collect();
        Self { z, branch }
    }

    pub fn max_distance(&self, other: &Self) -> f64 {
        self.z.iter().zip(&other.z).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// An integer combination of log parameters plus `pi_i·πi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogForm {
    pub coeffs: Vec<i64>,
    pub pi_i: i64,
}

impl LogForm {
    pub fn eval(&self, logs: &[Complex64]) -> Complex64 {
        let sum: Complex64 = self.coeffs.iter().zip(logs).map(|(&c, &l)| l * c as f64).sum();
        sum + Complex64::new(0.0, PI * self.pi_i as f64)
    }

    /// Derivative with respect to each shape `z_j`.
    fn gradient(&self, z: &[Complex64]) -> Vec<Complex64> {
        z.iter()
            .enumerate()
            .map(|(j, &w)| {
                let one = Complex64::new(1.0, 0.0);
                let d = [w.inv(), (one - w).inv(), (w * (w - one)).inv()];
                (0..3).map(|k| d[k] * self.coeffs[3 * j + k] as f64).sum()
            })
            .collect()
    }
}

/// Singular-value view of the edge-equation Jacobian.
#[derive(Clone, Debug, PartialEq)]
pub struct CorankReport {
    /// Descending.
    pub singular_values: Vec<f64>,
    pub corank: usize,
    /// Ratio across the largest gap between consecutive singular values.
    pub gap_ratio: f64,
}

/// Log-form gluing equations: each edge form must equal `2πi`, and the
/// meridian forms give the cusp log-holonomies `u_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct GluingSystem {
    n_tet: usize,
    edges: Vec<LogForm>,
    meridians: Vec<LogForm>,
    longitudes: Vec<LogForm>,
}

impl GluingSystem {
    pub(crate) fn from_triangulation(t: &IdealTriangulation) -> Self {
        let n = t.n_tet();
        Self {
            n_tet: n,
            edges: t.edge_classes().iter().map(|c| LogForm { coeffs: c.coefficients(n), pi_i: 0 }).collect(),
            meridians: t
                .cusps()
                .iter()
                .map(|c| LogForm { coeffs: c.meridian.clone(), pi_i: c.pi_i_coeff_m })
                .collect(),
            longitudes: t
                .cusps()
                .iter()
                .map(|c| LogForm { coeffs: c.longitude.clone(), pi_i: c.pi_i_coeff_l })
                .collect(),
        }
    }

    /// Builds a system from explicit forms (no combinatorial validation).
    pub fn from_forms(n_tet: usize, edges: Vec<LogForm>, meridians: Vec<LogForm>, longitudes: Vec<LogForm>) -> Self {
        Self { n_tet, edges, meridians, longitudes }
    }

    pub fn n_tet(&self) -> usize {
        self.n_tet
    }

    pub fn num_cusps(&self) -> usize {
        self.meridians.len()
    }

    pub fn edges(&self) -> &[LogForm] {
        &self.edges
    }

    pub fn meridians(&self) -> &[LogForm] {
        &self.meridians
    }

    pub fn longitudes(&self) -> &[LogForm] {
        &self.longitudes
    }

    fn check_len(&self, shapes: &ShapeAssignment) -> Result<()> {
        if shapes.len() != self.n_tet || shapes.branch.len() != self.n_tet {
            return Err(Error::InvalidArgument(format!(
                "expected {} shapes, got {}",
                self.n_tet,
                shapes.len()
            )));
        }
        Ok(())
    }

    /// `Σ coeffs·log − 2πi` for every edge.
    pub fn edge_residuals(&self, shapes: &ShapeAssignment) -> Result<Vec<Complex64>> {
        self.check_len(shapes)?;
        let logs = shapes.log_parameters()?;
        Ok(self.edges.iter().map(|e| e.eval(&logs) - TWO_PI_I).collect())
    }

    /// Meridian log-holonomy `u_j`; zero at the complete structure and `iθ`
    /// at a cone structure of angle `θ`.
    pub fn meridian_log_holonomy(&self, shapes: &ShapeAssignment, cusp: usize) -> Result<Complex64> {
        self.check_len(shapes)?;
        let form = self
            .meridians
            .get(cusp)
            .ok_or_else(|| Error::InvalidArgument(format!("no cusp {cusp}")))?;
        Ok(form.eval(&shapes.log_parameters()?))
    }

    pub fn meridian_log_holonomies(&self, shapes: &ShapeAssignment) -> Result<Vec<Complex64>> {
        self.check_len(shapes)?;
        let logs = shapes.log_parameters()?;
        Ok(self.meridians.iter().map(|m| m.eval(&logs)).collect())
    }

    pub fn longitude_log_holonomies(&self, shapes: &ShapeAssignment) -> Result<Vec<Complex64>> {
        self.check_len(shapes)?;
        let logs = shapes.log_parameters()?;
        Ok(self.longitudes.iter().map(|m| m.eval(&logs)).collect())
    }

    /// Stacked residual: edges, then `u_j − targets_j`.
    pub fn residual(&self, shapes: &ShapeAssignment, targets: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut r = self.edge_residuals(shapes)?;
        let u = self.meridian_log_holonomies(shapes)?;
        r.extend(u.iter().zip(targets).map(|(u, t)| u - t));
        Ok(r)
    }

    /// Analytic `∂(edge residuals, u)/∂z`, edges first.
    pub fn jacobian(&self, shapes: &ShapeAssignment) -> Result<DMatrix<Complex64>> {
        self.check_len(shapes)?;
        shapes.check_nondegenerate()?;
        let rows: Vec<&LogForm> = self.edges.iter().chain(&self.meridians).collect();
        let mut m = DMatrix::zeros(rows.len(), self.n_tet);
        for (i, form) in rows.iter().enumerate() {
            for (j, g) in form.gradient(&shapes.z).into_iter().enumerate() {
                m[(i, j)] = g;
            }
        }
        Ok(m)
    }

    /// Jacobian of the edge equations alone.
    pub fn edge_jacobian(&self, shapes: &ShapeAssignment) -> Result<DMatrix<Complex64>> {
        let full = self.jacobian(shapes)?;
        Ok(full.rows(0, self.edges.len()).into_owned())
    }

    /// Corank of the edge-equation Jacobian, read off the largest gap in its
    /// singular values. Gaps with ratio below `min_gap` count as full rank.
    pub fn edge_corank(&self, shapes: &ShapeAssignment, min_gap: f64) -> Result<CorankReport> {
        let jac = self.edge_jacobian(shapes)?;
        let mut sv: Vec<f64> = jac.svd(false, false).singular_values.iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        // Values below this are roundoff; floor them so exact zeros do not
        // produce a spurious infinite gap among themselves.
        let floor = sv.first().copied().unwrap_or(0.0) * f64::EPSILON;
        let mut best = (0usize, 1.0f64);
        for i in 0..sv.len().saturating_sub(1) {
            let ratio = sv[i].max(floor) / sv[i + 1].max(floor);
            if ratio > best.1 {
                best = (i + 1, ratio);
            }
        }
        let (corank, gap_ratio) = if best.1 > min_gap { (sv.len() - best.0, best.1) } else { (0, best.1) };
        Ok(CorankReport { singular_values: sv, corank, gap_ratio })
    }
}
