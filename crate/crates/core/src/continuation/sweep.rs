use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{continue_to_angles, AngleMode, ConeTarget, ContinuationOptions, ContinuationPath, PathStatus};
use crate::error::{Error, Result};
use crate::triangulation::{GluingSystem, ShapeAssignment};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMode {
    /// Each grid point starts from the previous completed one.
    WarmStart,
    /// Every grid point is continued from the complete structure, on up to
    /// `jobs` threads. Rows come back in grid order.
    Independent { jobs: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RowStatus {
    Completed,
    Degenerated,
    StepLimit,
    NoConvergence,
    InvalidTarget,
    Failed,
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Completed => "completed",
            RowStatus::Degenerated => "degenerated",
            RowStatus::StepLimit => "step-limit",
            RowStatus::NoConvergence => "no-convergence",
            RowStatus::InvalidTarget => "invalid-target",
            RowStatus::Failed => "failed",
        }
    }
}

/// One grid point of a sweep. For degenerated rows the values are those at
/// `t_star`; for failed rows they are NaN.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub step: usize,
    pub angles: Vec<f64>,
    pub volume: f64,
    pub min_im_z: f64,
    pub traces: Vec<Complex64>,
    pub status: RowStatus,
    pub t_star: Option<f64>,
    pub shapes: Option<ShapeAssignment>,
    pub message: Option<String>,
}

impl SweepRow {
    fn failed(step: usize, angles: Vec<f64>, m: usize, status: RowStatus, message: String) -> Self {
        Self {
            step,
            angles,
            volume: f64::NAN,
            min_im_z: f64::NAN,
            traces: vec![Complex64::new(f64::NAN, f64::NAN); m],
            status,
            t_star: None,
            shapes: None,
            message: Some(message),
        }
    }

    fn from_path(step: usize, angles: Vec<f64>, path: &ContinuationPath) -> Self {
        let last = path.last();
        let (status, t_star, message) = match &path.status {
            PathStatus::Completed => (RowStatus::Completed, None, None),
            PathStatus::Degenerated(d) => (RowStatus::Degenerated, Some(d.t_star), Some(format!("{:?}", d.cause))),
            PathStatus::StepLimit { t } => (RowStatus::StepLimit, Some(*t), None),
        };
        Self {
            step,
            angles,
            volume: last.volume,
            min_im_z: last.degeneracy_margin,
            traces: last.traces.clone(),
            status,
            t_star,
            shapes: Some(last.shapes.clone()),
            message,
        }
    }
}

/// Cone structures along the ray `θ = s·direction` for each `s` in the
/// strictly increasing `grid`. Per-point failures are recorded in the row
/// and do not stop the sweep.
#[allow(clippy::too_many_arguments)]
pub fn sweep(
    system: &GluingSystem,
    complete: &ShapeAssignment,
    grid: &[f64],
    direction: &[f64],
    signs: &[f64],
    mode: AngleMode,
    opts: &ContinuationOptions,
    sweep_mode: SweepMode,
) -> Result<Vec<SweepRow>> {
    let m = system.num_cusps();
    if direction.len() != m {
        return Err(Error::InvalidArgument(format!("direction needs {m} entries, got {}", direction.len())));
    }
    if grid.is_empty() || grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidArgument("sweep grid must be non-empty, finite and strictly increasing".into()));
    }
    let target_at = |s: f64| -> Result<ConeTarget> {
        ConeTarget::with_mode(direction.iter().map(|a| a * s).collect(), mode)?.with_signs(signs.to_vec())
    };
    let run = |step: usize, s: f64, from: &ShapeAssignment| -> SweepRow {
        let angles: Vec<f64> = direction.iter().map(|a| a * s).collect();
        let target = match target_at(s) {
            Ok(t) => t,
            Err(e) => return SweepRow::failed(step, angles, m, RowStatus::InvalidTarget, e.to_string()),
        };
        match continue_to_angles(system, from, &target, opts) {
            Ok(path) => SweepRow::from_path(step, angles, &path),
            Err(e @ Error::NoConvergence { .. }) => {
                SweepRow::failed(step, angles, m, RowStatus::NoConvergence, e.to_string())
            }
            Err(e) => SweepRow::failed(step, angles, m, RowStatus::Failed, e.to_string()),
        }
    };
    match sweep_mode {
        SweepMode::WarmStart => {
            let mut from = complete.clone();
            let mut rows = Vec::with_capacity(grid.len());
            for (i, &s) in grid.iter().enumerate() {
                let row = run(i + 1, s, &from);
                if row.status == RowStatus::Completed {
                    from = row.shapes.clone().expect("completed rows carry shapes");
                }
                rows.push(row);
            }
            Ok(rows)
        }
        SweepMode::Independent { jobs } => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            Ok(pool.install(|| grid.par_iter().enumerate().map(|(i, &s)| run(i + 1, s, complete)).collect()))
        }
    }
}
