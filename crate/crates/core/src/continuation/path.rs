use std::f64::consts::PI;

use num_complex::Complex64;

use super::newton::{correct, least_squares, max_norm};
use super::{
    traces_from_log_holonomies, ConeTarget, ContinuationOptions, ContinuationPath, ContinuationSample, CrossSection,
    Degeneration, DegenerationCause, OrientationPolicy, PathStatus,
};
use crate::error::{Error, Result};
use crate::triangulation::{euclidean_cone_surface_check, GluingSystem, ShapeAssignment};
use crate::volume::volume_report;

/// Two shapes closer than this to being complex conjugates form a mirror pair.
const MIRROR_TOL: f64 = 5e-2;
/// Width in `t` to which the onset of degeneration is located.
const LOCATE_TOL: f64 = 1e-7;

/// Lifts the straight segment from the traces of `start` to `target`'s
/// traces `ε_j·2cos(θ_j/2)`. The final sample carries log-holonomies
/// `orientation_j·iθ_j` exactly.
pub fn continue_to_angles(
    system: &GluingSystem,
    start: &ShapeAssignment,
    target: &ConeTarget,
    opts: &ContinuationOptions,
) -> Result<ContinuationPath> {
    if target.len() != system.num_cusps() {
        return Err(Error::InvalidArgument(format!(
            "target has {} angles, triangulation has {} cusps",
            target.len(),
            system.num_cusps()
        )));
    }
    let end_u = target.target_log_holonomies();
    lift(system, start, &target.target_traces(), target.signs(), target.orientation(), Some(&end_u), opts)
}

/// Lifts the straight segment from the traces of `start` (under `signs`) to
/// `end_traces`. `orientation` picks the root `±u` when leaving the complete
/// structure, where both are equally close.
pub fn continue_to_traces(
    system: &GluingSystem,
    start: &ShapeAssignment,
    end_traces: &[Complex64],
    signs: &[f64],
    orientation: &[f64],
    opts: &ContinuationOptions,
) -> Result<ContinuationPath> {
    let m = system.num_cusps();
    if end_traces.len() != m || signs.len() != m || orientation.len() != m {
        return Err(Error::InvalidArgument(format!("expected {m} traces, signs and orientations")));
    }
    lift(system, start, end_traces, signs, orientation, None, opts)
}

/// Root of `sign·2cosh(u/2) = trace` nearest `previous`; from `u = 0` the
/// root with `orientation·Im u ≥ 0`.
fn log_holonomy_for_trace(trace: Complex64, sign: f64, previous: Complex64, orientation: f64) -> Complex64 {
    let base = (trace / (2.0 * sign)).acosh() * 2.0;
    if previous.norm() < 1e-12 {
        let flip = orientation * base.im < 0.0 || (base.im == 0.0 && base.re < 0.0);
        return if flip { -base } else { base };
    }
    let mut best = base;
    for s in [1.0, -1.0] {
        for k in -1..=1 {
            let c = base * s + Complex64::new(0.0, 4.0 * PI * k as f64);
            if (c - previous).norm() < (best - previous).norm() {
                best = c;
            }
        }
    }
    best
}

fn sample(system: &GluingSystem, t: f64, shapes: ShapeAssignment, signs: &[f64]) -> Result<ContinuationSample> {
    let u = system.meridian_log_holonomies(&shapes)?;
    let volume = volume_report(system, &shapes)?.total;
    Ok(ContinuationSample {
        t,
        traces: traces_from_log_holonomies(&u, signs),
        log_holonomies: u,
        volume,
        degeneracy_margin: shapes.min_imag(),
        negatively_oriented: shapes.negatively_oriented(),
        shapes,
    })
}

fn degeneration_cause(s: &ContinuationSample, opts: &ContinuationOptions) -> Option<DegenerationCause> {
    let collapsed = s.shapes.z.iter().any(|z| {
        let d = z.norm().min((z - 1.0).norm()).min(1.0 / z.norm());
        d < opts.shape_floor
    });
    if collapsed {
        return Some(DegenerationCause::ShapeCollapse);
    }
    if let OrientationPolicy::Strict { floor } = opts.orientation {
        if s.degeneracy_margin < floor {
            return Some(DegenerationCause::OrientationFloor);
        }
    }
    if s.volume <= opts.volume_floor {
        return Some(DegenerationCause::VolumeCollapse);
    }
    None
}

/// Mirror pair `z_k ≈ conj z_j` and the doubled link triangle of its
/// upper-half-plane member.
fn cross_section(shapes: &ShapeAssignment) -> Option<CrossSection> {
    let mut best: Option<(f64, usize, usize)> = None;
    for j in 0..shapes.len() {
        for k in j + 1..shapes.len() {
            let d = (shapes.z[j] - shapes.z[k].conj()).norm();
            if d < MIRROR_TOL && best.is_none_or(|b| d < b.0) {
                best = Some((d, j, k));
            }
        }
    }
    let (_, j, k) = best?;
    let (a, b) = (shapes.z[j], shapes.z[k]);
    let w = if a.im >= 0.0 { (a + b.conj()) / 2.0 } else { (b + a.conj()) / 2.0 };
    let one = Complex64::new(1.0, 0.0);
    let cone_angles = [2.0 * w.arg(), 2.0 * (one - w).inv().arg(), 2.0 * ((w - one) / w).arg()];
    let euclidean = euclidean_cone_surface_check(0, &cone_angles).unwrap_or(false);
    Some(CrossSection { tetrahedra: (j, k), cone_angles, euclidean })
}

fn lift(
    system: &GluingSystem,
    start: &ShapeAssignment,
    end_traces: &[Complex64],
    signs: &[f64],
    orientation: &[f64],
    end_u: Option<&[Complex64]>,
    opts: &ContinuationOptions,
) -> Result<ContinuationPath> {
    if signs.iter().chain(orientation).any(|&s| s != 1.0 && s != -1.0) {
        return Err(Error::InvalidArgument("signs and orientations must be +1 or -1".into()));
    }
    let m = system.num_cusps();
    let start_u = system.meridian_log_holonomies(start)?;
    let edge_res = max_norm(&system.edge_residuals(start)?);
    if edge_res > 1e-9 {
        return Err(Error::InvalidArgument(format!("start shapes do not solve the edge equations (residual {edge_res:e})")));
    }
    let start_traces = traces_from_log_holonomies(&start_u, signs);
    let first = sample(system, 0.0, start.clone(), signs)?;
    let mut samples = vec![first];
    let mut t = 0.0;
    let mut dt = opts.initial_dt.min(opts.max_dt);
    let mut u_cur = start_u;
    let mut bracketing = false;
    let mut best_residual = f64::INFINITY;

    while t < 1.0 {
        if samples.len() > opts.max_steps {
            return Ok(ContinuationPath { samples, status: PathStatus::StepLimit { t } });
        }
        if dt < opts.min_dt {
            return Err(Error::NoConvergence { best_residual });
        }
        let mut t_new = t + dt.min(opts.max_dt);
        if t_new >= 1.0 - 1e-14 {
            t_new = 1.0;
        }
        let u_target: Vec<Complex64> = (0..m)
            .map(|j| {
                if t_new == 1.0 {
                    if let Some(end) = end_u {
                        return end[j];
                    }
                }
                let tr = start_traces[j] + (end_traces[j] - start_traces[j]) * t_new;
                log_holonomy_for_trace(tr, signs[j], u_cur[j], orientation[j])
            })
            .collect();
        let cur = &samples.last().expect("nonempty").shapes;

        let r = system.residual(cur, &u_target)?;
        let neg: Vec<Complex64> = r.iter().map(|v| -v).collect();
        let dz = least_squares(system.jacobian(cur)?, &neg)?;
        if max_norm(&dz) > opts.max_step {
            dt = (t_new - t) / 2.0;
            continue;
        }
        let guess = cur.z.iter().zip(&dz).map(|(z, d)| z + d).collect();
        let corrected = correct(system, cur, guess, &u_target, opts.corrector_tol, opts.max_corrector_iters);
        let shapes = match corrected {
            Ok((s, _)) if s.max_distance(cur) <= opts.max_step * 1.5 => s,
            Ok(_) => {
                dt = (t_new - t) / 2.0;
                continue;
            }
            Err(Error::NoConvergence { best_residual: b }) => {
                best_residual = best_residual.min(b);
                dt = (t_new - t) / 2.0;
                continue;
            }
            Err(Error::DegenerateShape { .. }) => {
                dt = (t_new - t) / 2.0;
                continue;
            }
            Err(e) => return Err(e),
        };
        let candidate = match sample(system, t_new, shapes, signs) {
            Ok(s) => s,
            Err(Error::DegenerateShape { .. }) => {
                dt = (t_new - t) / 2.0;
                continue;
            }
            Err(e) => return Err(e),
        };
        if let Some(cause) = degeneration_cause(&candidate, opts) {
            let step = t_new - t;
            if step > LOCATE_TOL {
                bracketing = true;
                dt = step / 2.0;
                continue;
            }
            let deg = Degeneration {
                t_star: t_new,
                cause,
                margins: candidate.shapes.z.iter().map(|z| z.im).collect(),
                volume: candidate.volume,
                cross_section: cross_section(&candidate.shapes),
            };
            samples.push(candidate);
            return Ok(ContinuationPath { samples, status: PathStatus::Degenerated(deg) });
        }
        t = t_new;
        u_cur = u_target;
        samples.push(candidate);
        if !bracketing {
            dt = (dt * 1.5).min(opts.max_dt);
        }
    }
    Ok(ContinuationPath { samples, status: PathStatus::Completed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuation::{solve_complete, ExtendedAck};
    use crate::triangulation::load;

    fn figure8() -> (GluingSystem, ShapeAssignment) {
        let sys = load("figure8").unwrap().assemble();
        let s = solve_complete(&sys, None).unwrap();
        (sys, s)
    }

    #[test]
    fn root_selection() {
        let u = log_holonomy_for_trace(Complex64::new(2.0 * 0.5f64.cos(), 0.0), 1.0, Complex64::new(0.0, 0.0), 1.0);
        assert!((u - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        let u = log_holonomy_for_trace(Complex64::new(2.0 * 0.5f64.cos(), 0.0), 1.0, Complex64::new(0.0, 0.0), -1.0);
        assert!((u - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        let u = log_holonomy_for_trace(Complex64::new(2.0 * 0.5f64.cos(), 0.0), 1.0, Complex64::new(0.0, -0.9), 1.0);
        assert!((u - Complex64::new(0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn figure8_to_one_radian_matches_reference() {
        let (sys, s) = figure8();
        let target = ConeTarget::new(vec![1.0]).unwrap();
        let path = continue_to_angles(&sys, &s, &target, &ContinuationOptions::default()).unwrap();
        assert!(path.is_completed());
        let last = path.last();
        assert_eq!(last.t, 1.0);
        assert!((last.volume - 1.2828575202585513).abs() < 1e-9, "{}", last.volume);
        assert!((last.log_holonomies[0] - Complex64::new(0.0, 1.0)).norm() < 1e-11);
        for w in path.samples.windows(2) {
            assert!(w[1].t > w[0].t);
        }
    }

    #[test]
    fn figure8_hits_wall() {
        let (sys, s) = figure8();
        let target = ConeTarget::new(vec![2.0 * PI / 3.0]).unwrap();
        let path = continue_to_angles(&sys, &s, &target, &ContinuationOptions::default()).unwrap();
        match &path.status {
            PathStatus::Degenerated(d) => {
                assert!(d.t_star > 0.99);
                assert_eq!(d.cause, DegenerationCause::VolumeCollapse);
                let cs = d.cross_section.as_ref().unwrap_or_else(|| panic!("{:?} {:?}", d, path.last()));
                assert!(cs.euclidean);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn strict_policy_stops_at_flat_tetrahedron() {
        let (sys, s) = figure8();
        let target = ConeTarget::new(vec![2.0]).unwrap();
        let path = continue_to_angles(&sys, &s, &target, &ContinuationOptions::strict(1e-6)).unwrap();
        match &path.status {
            PathStatus::Degenerated(d) => {
                assert_eq!(d.cause, DegenerationCause::OrientationFloor);
                let theta = path.last().log_holonomies[0].im;
                assert!((theta - 1.318).abs() < 0.01, "{theta}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn extended_target_beyond_wall_degenerates() {
        let (sys, s) = figure8();
        let target = ConeTarget::extended(vec![2.5], ExtendedAck::acknowledge()).unwrap();
        let path = continue_to_angles(&sys, &s, &target, &ContinuationOptions::default()).unwrap();
        assert!(matches!(path.status, PathStatus::Degenerated(_)));
    }

    #[test]
    fn non_solution_start_rejected() {
        let sys = load("figure8").unwrap().assemble();
        let bad = ShapeAssignment::uniform(2, Complex64::i());
        let target = ConeTarget::new(vec![1.0]).unwrap();
        assert!(continue_to_angles(&sys, &bad, &target, &ContinuationOptions::default()).is_err());
    }
}
