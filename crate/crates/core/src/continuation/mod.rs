//! Complete structures, the meridian trace map, and ray-lifting continuation
//! to cone structures.
//!
//! A cone target is turned into a straight segment in meridian-trace space,
//! `l(t) = f(start) + t·(f(target) − f(start))`. Each point of the segment is
//! converted to meridian log-holonomies (`trace = ε·2cosh(u/2)`, branch chosen
//! by continuity) and the gluing equations are corrected in those
//! coordinates, which stay well conditioned at the complete structure where
//! the trace map is critical.

mod newton;
mod path;
mod sweep;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::triangulation::{GluingSystem, ShapeAssignment};

pub use newton::{solve_complete, solve_complete_multistart};
pub use path::{continue_to_angles, continue_to_traces};
pub use sweep::{sweep, RowStatus, SweepMode, SweepRow};

/// Largest cone angle accepted in standard mode: the Euclidean wall `2π/3`
/// plus a small allowance for decimal renderings such as `2.0944`. Targets
/// past the wall run into it and are reported as degenerated.
pub const STANDARD_MAX_ANGLE: f64 = 2.0 * PI / 3.0 + 1e-4;

/// Hypotheses a caller vouches for when requesting cone angles in
/// `[2π/3, π)`; they are not checked algorithmically.
pub const EXTENDED_MODE_NOTICE: &str = "extended mode: cone angles up to pi are accepted on the caller's \
responsibility that the underlying space contains no embedded 2-sphere meeting the singular locus in three \
points (and no other obstruction to hyperbolic cone structures in this range); this is not checked";

/// Proof that the caller acknowledged [`EXTENDED_MODE_NOTICE`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtendedAck(());

impl ExtendedAck {
    pub fn acknowledge() -> Self {
        ExtendedAck(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AngleMode {
    /// Angles in `(0, 2π/3]`.
    #[default]
    Standard,
    /// Angles in `(0, π)`.
    Extended(ExtendedAck),
}

impl AngleMode {
    pub fn max_angle(&self) -> f64 {
        match self {
            AngleMode::Standard => STANDARD_MAX_ANGLE,
            AngleMode::Extended(_) => PI,
        }
    }
}

/// Per-cusp cone angles with trace signs `ε` and meridian orientations.
///
/// The target log-holonomy of cusp `j` is `orientation_j · iθ_j`, and the
/// target trace is `ε_j · 2cos(θ_j/2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeTarget {
    theta: Vec<f64>,
    signs: Vec<f64>,
    orientation: Vec<f64>,
    mode: AngleMode,
}

impl ConeTarget {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        Self::with_mode(theta, AngleMode::Standard)
    }

    pub fn extended(theta: Vec<f64>, ack: ExtendedAck) -> Result<Self> {
        Self::with_mode(theta, AngleMode::Extended(ack))
    }

    pub fn with_mode(theta: Vec<f64>, mode: AngleMode) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::InvalidArgument("cone target needs at least one angle".into()));
        }
        let max = mode.max_angle();
        for &t in &theta {
            let ok = t > 0.0 && if matches!(mode, AngleMode::Standard) { t <= max } else { t < max };
            if !ok {
                return Err(Error::InvalidArgument(format!(
                    "cone angle {t} outside {} (use extended mode for angles up to pi)",
                    match mode {
                        AngleMode::Standard => "(0, 2pi/3]",
                        AngleMode::Extended(_) => "(0, pi)",
                    }
                )));
            }
        }
        let m = theta.len();
        Ok(Self { theta, signs: vec![1.0; m], orientation: vec![1.0; m], mode })
    }

    pub fn with_signs(mut self, signs: Vec<f64>) -> Result<Self> {
        check_unit_signs(&signs, self.theta.len(), "trace sign")?;
        self.signs = signs;
        Ok(self)
    }

    pub fn with_orientation(mut self, orientation: Vec<f64>) -> Result<Self> {
        check_unit_signs(&orientation, self.theta.len(), "meridian orientation")?;
        self.orientation = orientation;
        Ok(self)
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    pub fn orientation(&self) -> &[f64] {
        &self.orientation
    }

    pub fn mode(&self) -> AngleMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn target_traces(&self) -> Vec<Complex64> {
        self.theta
            .iter()
            .zip(&self.signs)
            .map(|(t, s)| Complex64::new(s * 2.0 * (t / 2.0).cos(), 0.0))
            .collect()
    }

    pub fn target_log_holonomies(&self) -> Vec<Complex64> {
        self.theta.iter().zip(&self.orientation).map(|(t, o)| Complex64::new(0.0, o * t)).collect()
    }
}

fn check_unit_signs(v: &[f64], m: usize, what: &str) -> Result<()> {
    if v.len() != m {
        return Err(Error::InvalidArgument(format!("expected {m} {what}s, got {}", v.len())));
    }
    if v.iter().any(|&s| s != 1.0 && s != -1.0) {
        return Err(Error::InvalidArgument(format!("{what}s must be +1 or -1")));
    }
    Ok(())
}

/// How continuation treats tetrahedra that turn negatively oriented.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OrientationPolicy {
    /// Tetrahedra may pass through flat shapes (away from 0, 1, ∞) and come
    /// out negatively oriented; log branches are tracked and such samples
    /// are flagged. Degeneration means collapse of the whole structure.
    AllowFlips,
    /// Stop with `Degenerated` as soon as some `Im z_j` drops below `floor`.
    Strict { floor: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuationOptions {
    /// Convergence threshold on the max-norm of the corrector residual.
    pub corrector_tol: f64,
    pub max_corrector_iters: usize,
    /// Trust radius on `‖Δz‖∞` between consecutive samples.
    pub max_step: f64,
    pub initial_dt: f64,
    /// Largest increment of the ray parameter `t`.
    pub max_dt: f64,
    /// Halving floor for the `t` increment.
    pub min_dt: f64,
    pub max_steps: usize,
    /// Total volume at or below this counts as collapse.
    pub volume_floor: f64,
    /// Distance of a shape to `0`, `1` or `∞` (chordal-style) that counts as
    /// a degenerate tetrahedron.
    pub shape_floor: f64,
    pub orientation: OrientationPolicy,
}

impl Default for ContinuationOptions {
    fn default() -> Self {
        Self {
            corrector_tol: 1e-12,
            max_corrector_iters: 12,
            max_step: 0.1,
            initial_dt: 0.05,
            max_dt: 0.05,
            min_dt: 1e-8,
            max_steps: 20_000,
            volume_floor: 1e-6,
            shape_floor: 1e-6,
            orientation: OrientationPolicy::AllowFlips,
        }
    }
}

impl ContinuationOptions {
    /// Same options on a grid twice as fine.
    pub fn refined(&self) -> Self {
        Self {
            max_step: self.max_step / 2.0,
            initial_dt: self.initial_dt / 2.0,
            max_dt: self.max_dt / 2.0,
            ..self.clone()
        }
    }

    pub fn strict(floor: f64) -> Self {
        Self { orientation: OrientationPolicy::Strict { floor }, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuationSample {
    pub t: f64,
    pub shapes: ShapeAssignment,
    pub traces: Vec<Complex64>,
    pub log_holonomies: Vec<Complex64>,
    pub volume: f64,
    /// `min_j Im z_j` (negative when some tetrahedron is flipped).
    pub degeneracy_margin: f64,
    pub negatively_oriented: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DegenerationCause {
    /// Total volume fell to the volume floor.
    VolumeCollapse,
    /// Some shape approached 0, 1 or ∞.
    ShapeCollapse,
    /// Some `Im z_j` fell below the strict orientation floor.
    OrientationFloor,
}

/// Two tetrahedra that have become mirror images (`z_k ≈ conj z_j`): their
/// vertex-link triangles double to a cone sphere with angles twice the
/// dihedral angles, checked against Gauss–Bonnet.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossSection {
    pub tetrahedra: (usize, usize),
    pub cone_angles: [f64; 3],
    pub euclidean: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Degeneration {
    pub t_star: f64,
    pub cause: DegenerationCause,
    /// `Im z_j` per tetrahedron at `t_star`.
    pub margins: Vec<f64>,
    pub volume: f64,
    pub cross_section: Option<CrossSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum PathStatus {
    Completed,
    Degenerated(Degeneration),
    StepLimit { t: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuationPath {
    pub samples: Vec<ContinuationSample>,
    pub status: PathStatus,
}

impl ContinuationPath {
    pub fn last(&self) -> &ContinuationSample {
        self.samples.last().expect("a path always holds its start sample")
    }

    pub fn is_completed(&self) -> bool {
        self.status == PathStatus::Completed
    }

    /// Number of samples containing a negatively oriented tetrahedron.
    pub fn flipped_samples(&self) -> usize {
        self.samples.iter().filter(|s| !s.negatively_oriented.is_empty()).count()
    }
}

/// Meridian traces `ε_j · 2cosh(u_j/2)`, i.e. `ε_j · 2cos(u_j/(2i))`.
pub fn trace_map(system: &GluingSystem, shapes: &ShapeAssignment, signs: &[f64]) -> Result<Vec<Complex64>> {
    if signs.len() != system.num_cusps() {
        return Err(Error::InvalidArgument(format!(
            "expected {} signs, got {}",
            system.num_cusps(),
            signs.len()
        )));
    }
    let u = system.meridian_log_holonomies(shapes)?;
    Ok(traces_from_log_holonomies(&u, signs))
}

pub(crate) fn traces_from_log_holonomies(u: &[Complex64], signs: &[f64]) -> Vec<Complex64> {
    u.iter().zip(signs).map(|(u, s)| (u / 2.0).cosh() * (2.0 * s)).collect()
}

/// Flatness margin `min_j Im z_j·|z_j|/(1 + |z_j|²)`; tends to zero as a
/// tetrahedron flattens. A cheap stand-in for thin-part monitoring, not an
/// injectivity radius.
pub fn injectivity_proxy(shapes: &ShapeAssignment) -> f64 {
    shapes
        .z
        .iter()
        .map(|z| z.im * z.norm() / (1.0 + z.norm_sqr()))
        .fold(f64::INFINITY, f64::min)
}
