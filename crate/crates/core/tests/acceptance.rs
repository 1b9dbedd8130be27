//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails or overruns its time budget.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use cone_moduli::continuation::{
    continue_to_angles, continue_to_traces, solve_complete, sweep, AngleMode, ConeTarget, ContinuationOptions,
    PathStatus, RowStatus, SweepMode,
};
use cone_moduli::metriclab::{
    build_cone_smoothing, build_cusp_flattening, fermi_euclidean, fermi_hyperbolic, horospherical_cusp,
    verify_profile, CurvatureOperatorDiag, SignRequirement,
};
use cone_moduli::quadrature::tanh_sinh;
use cone_moduli::{euclidean_cone_surface_check, lobachevsky, load, nu, volume_report, ShapeAssignment};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn regular() -> Complex64 {
    Complex64::from_polar(1.0, PI / 3.0)
}

fn c1_nu() -> Outcome {
    let q = tanh_sinh(|u| (2.0 * u.sin()).abs().ln(), 0.0, PI / 3.0, 1e-15);
    let quad = -3.0 * q.value;
    let series = 3.0 * lobachevsky(PI / 3.0);
    let delta = (quad - series).abs();
    ensure(delta < 1e-9, format!("quadrature {quad} vs series {series}"))?;
    ensure((nu() - quad).abs() < 1e-15, "nu() differs from the quadrature")?;
    ensure((quad - 1.0149416064).abs() < 1e-10, format!("value {quad}"))?;
    let literal = -3.0 * tanh_sinh(|u| (2.0 * u).sin().abs().ln(), 0.0, PI / 3.0, 1e-15).value;
    Ok(format!(
        "nu = {quad:.15}, |nu - 3L(pi/3)| = {delta:.1e}; integrand log|2 sin u| (log|sin 2u| gives {literal:.12})"
    ))
}

fn c2_figure8_complete() -> Outcome {
    let sys = load("figure8").map_err(|e| e.to_string())?.assemble();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let seed = ShapeAssignment::new(
            (0..2).map(|_| Complex64::new(rng.random_range(-0.5..1.5), rng.random_range(0.05..2.0))).collect(),
        );
        let s = solve_complete(&sys, Some(&seed)).map_err(|e| format!("seed {i}: {e}"))?;
        let res = sys.residual(&s, &[Complex64::new(0.0, 0.0)]).map_err(|e| e.to_string())?;
        ensure(res.iter().all(|r| r.norm() < 1e-12), format!("seed {i}: residual too large"))?;
        for z in &s.z {
            worst = worst.max((z - regular()).norm());
        }
    }
    ensure(worst < 1e-10, format!("max |z - e^(i pi/3)| = {worst:e}"))?;
    let rep = volume_report(&sys, &ShapeAssignment::uniform(2, regular())).map_err(|e| e.to_string())?;
    ensure((rep.total - 2.0 * nu()).abs() < 1e-10, format!("volume {}", rep.total))?;
    ensure(rep.bound_satisfied && (rep.bound - rep.total).abs() < 1e-10, "bound not saturated")?;
    Ok(format!("100/100 seeds -> e^(i pi/3) (max dev {worst:.1e}); vol = {:.12} = 2 nu = bound", rep.total))
}

fn c3_euclidean_wall() -> Outcome {
    let sys = load("figure8").map_err(|e| e.to_string())?.assemble();
    let complete = solve_complete(&sys, None).map_err(|e| e.to_string())?;
    let wall = 2.0 * PI / 3.0;
    let grid: Vec<f64> = (0..64).map(|i| 0.1 + (wall - 0.1) * i as f64 / 63.0).collect();
    let opts = ContinuationOptions::default();
    let rows = sweep(&sys, &complete, &grid, &[1.0], &[1.0], AngleMode::Standard, &opts, SweepMode::WarmStart)
        .map_err(|e| e.to_string())?;
    for r in &rows {
        if r.angles[0] <= wall - 1e-3 {
            ensure(r.status == RowStatus::Completed, format!("theta {} ended {:?}", r.angles[0], r.status))?;
        }
    }
    for w in rows.windows(2) {
        ensure(w[1].volume < w[0].volume, format!("volume not decreasing at theta {}", w[1].angles[0]))?;
    }
    let last = rows.last().expect("64 rows");
    ensure(last.min_im_z < 1e-2, format!("final min Im z = {}", last.min_im_z))?;
    let before = &rows[rows.len() - 2];
    let path = continue_to_angles(&sys, &complete, &ConeTarget::new(vec![wall]).map_err(|e| e.to_string())?, &opts)
        .map_err(|e| e.to_string())?;
    let PathStatus::Degenerated(d) = &path.status else {
        return Err(format!("theta = 2pi/3 ended {:?}", path.status));
    };
    ensure(d.t_star > 0.99, format!("t* = {}", d.t_star))?;
    let flipped = rows.iter().filter(|r| r.min_im_z < 0.0).count();
    Ok(format!(
        "{} rows, volume {:.6} -> {:.3e} (theta {:.6}: {:.3e}); final min Im z = {:.4} (signed; {flipped} rows carry a \
         negatively oriented tetrahedron); 2pi/3 target: {:?} at t* = {:.7}, vol {:.2e}, mirror cross-section \
         Euclidean = {}",
        rows.len(),
        rows[0].volume,
        last.volume,
        before.angles[0],
        before.volume,
        last.min_im_z,
        d.cause,
        d.t_star,
        d.volume,
        d.cross_section.as_ref().is_some_and(|c| c.euclidean)
    ))
}

fn c4_corank() -> Outcome {
    let mut notes = Vec::new();
    for (name, m) in [("figure8", 1usize), ("whitehead", 2)] {
        let sys = load(name).map_err(|e| e.to_string())?.assemble();
        let s = solve_complete(&sys, None).map_err(|e| e.to_string())?;
        let rep = sys.edge_corank(&s, 1e6).map_err(|e| e.to_string())?;
        ensure(rep.corank == m && rep.gap_ratio > 1e6, format!("{name}: {rep:?}"))?;
        notes.push(format!("{name} corank {} (gap {:.1e})", rep.corank, rep.gap_ratio));
    }
    Ok(notes.join(", "))
}

fn c5_path_lifting() -> Outcome {
    let sys = load("figure8").map_err(|e| e.to_string())?.assemble();
    let complete = solve_complete(&sys, None).map_err(|e| e.to_string())?;
    let opts = ContinuationOptions::default();
    let fine = opts.refined();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst_grid, mut worst_ray) = (0.0f64, 0.0f64);
    for _ in 0..5 {
        let theta = rng.random_range(0.05..(2.0 * PI / 3.0 - 0.1));
        let target = ConeTarget::new(vec![theta]).map_err(|e| e.to_string())?;
        let a = continue_to_angles(&sys, &complete, &target, &opts).map_err(|e| e.to_string())?;
        let b = continue_to_angles(&sys, &complete, &target, &fine).map_err(|e| e.to_string())?;
        ensure(a.is_completed() && b.is_completed(), format!("theta {theta}: not completed"))?;
        worst_grid = worst_grid.max(a.last().shapes.max_distance(&b.last().shapes));

        // Second ray: detour through a non-real trace, then on to the target.
        let end = target.target_traces()[0];
        let mid = (end + 2.0) / 2.0 + Complex64::new(0.0, 0.3);
        let leg = continue_to_traces(&sys, &complete, &[mid], &[1.0], &[1.0], &opts).map_err(|e| e.to_string())?;
        ensure(leg.is_completed(), "detour leg not completed")?;
        let c = continue_to_angles(&sys, &leg.last().shapes, &target, &opts).map_err(|e| e.to_string())?;
        ensure(c.is_completed(), "detour not completed")?;
        worst_ray = worst_ray.max(a.last().shapes.max_distance(&c.last().shapes));
    }
    ensure(worst_grid < 1e-8, format!("grid refinement moved endpoints by {worst_grid:e}"))?;
    ensure(worst_ray < 1e-7, format!("rays disagree by {worst_ray:e}"))?;
    Ok(format!("5 targets: refinement {worst_grid:.1e}, detour ray {worst_ray:.1e}"))
}

fn c6_closed_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut eh, mut ee, mut ec) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let alpha = rng.random_range(0.01..(2.0 * PI - 0.01));
        let r = rng.random_range(0.01..5.0);
        let h = fermi_hyperbolic(alpha, 0.0, 6.0).and_then(|p| p.curvature_at(r)).map_err(|e| e.to_string())?;
        let e = fermi_euclidean(alpha, 0.0, 6.0).and_then(|p| p.curvature_at(r)).map_err(|e| e.to_string())?;
        let z = rng.random_range(0.1..10.0);
        let c = horospherical_cusp(0.05, 20.0).and_then(|p| p.curvature_at(z)).map_err(|e| e.to_string())?;
        for x in h.as_array() {
            eh = eh.max((x + 1.0).abs());
        }
        for x in e.as_array() {
            ee = ee.max(x.abs());
        }
        for x in c.as_array() {
            ec = ec.max((x + 1.0).abs());
        }
    }
    ensure(eh < 1e-8 && ee < 1e-8 && ec < 1e-8, format!("deviations {eh:e} {ee:e} {ec:e}"))?;
    Ok(format!("1000 points: hyperbolic {eh:.1e}, Euclidean {ee:.1e}, cusp {ec:.1e}"))
}

fn c7_constructions() -> Outcome {
    let mut worst: f64 = f64::INFINITY;
    let mut count = 0;
    for &alpha in &[0.3, 1.0, PI / 2.0, 3.0, 5.5] {
        for &eps in &[0.05, 0.3, 1.0, 3.0] {
            let p = build_cone_smoothing(alpha, eps).map_err(|e| format!("alpha {alpha}, eps {eps}: {e}"))?;
            let rep = verify_profile(&p, SignRequirement::NonNegative, 10_000).map_err(|e| e.to_string())?;
            ensure(rep.passed, format!("alpha {alpha}, eps {eps}: min {}", rep.min_entry))?;
            worst = worst.min(rep.min_entry);
            count += 1;
        }
    }
    let mut tail_max = 0.0f64;
    for &z0 in &[0.5, 1.0, 3.0] {
        let p = build_cusp_flattening(z0, 20.0 * z0).map_err(|e| e.to_string())?;
        let rep = verify_profile(&p, SignRequirement::NonPositive, 10_000).map_err(|e| e.to_string())?;
        ensure(rep.passed, format!("cusp z0 {z0}: max {}", rep.max_entry))?;
        for i in 1..100 {
            let z = 4.0 * z0 + (16.0 * z0) * i as f64 / 100.0;
            let k = p.curvature_at(z).map_err(|e| e.to_string())?;
            tail_max = tail_max.max(k.as_array().iter().fold(0.0, |m, x| m.max(x.abs())));
        }
    }
    ensure(tail_max == 0.0, format!("tail curvature {tail_max:e}"))?;
    Ok(format!("{count} smoothings NonNegative (min entry {worst:.2e}); 3 cusp flattenings NonPositive, flat tail"))
}

fn c8_rank_two() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let draw = |rng: &mut ChaCha8Rng| {
        let v: f64 = rng.random_range(0.1..10.0);
        if rng.random_bool(0.5) {
            v
        } else {
            -v
        }
    };
    for _ in 0..100 {
        let k = CurvatureOperatorDiag::new(0.0, draw(&mut rng), draw(&mut rng));
        ensure(k.rank_two_obstructed(1e-12), format!("{k:?} not obstructed"))?;
        let q = k.rank_obstruction();
        ensure(q.lambda != 0.0, "null vector of K killed")?;
    }
    ensure(!CurvatureOperatorDiag::new(0.0, 0.0, 0.0).rank_two_obstructed(1e-12), "rank 0 obstructed")?;
    for _ in 0..100 {
        let k = CurvatureOperatorDiag::new(draw(&mut rng), draw(&mut rng), draw(&mut rng));
        ensure(!k.rank_two_obstructed(1e-12), format!("rank 3 {k:?} obstructed"))?;
    }
    Ok("100 rank-2 diagonals obstructed; rank 0 and 100 rank-3 diagonals clear".into())
}

/// Angle sum at a vertex of the tetrahedron whose opposite edges have
/// lengths `a, b, c` (every face is the triangle `a, b, c`).
fn disphenoid_vertex_angle(a: f64, b: f64, c: f64) -> f64 {
    let angle = |opp: f64, x: f64, y: f64| ((x * x + y * y - opp * opp) / (2.0 * x * y)).acos();
    angle(a, b, c) + angle(b, a, c) + angle(c, a, b)
}

fn c9_gauss_bonnet() -> Outcome {
    let check = |g: u32, a: &[f64]| euclidean_cone_surface_check(g, a).map_err(|e| e.to_string());
    ensure(check(1, &[])?, "flat torus")?;
    let (a, b) = (1.0, 1.2);
    ensure(check(0, &[2.0 * a, 2.0 * b, 2.0 * (PI - a - b)])?, "double of acute triangle")?;
    ensure(check(0, &[2.0 * (PI / 2.0); 4])?, "double of rectangle")?;
    let v = disphenoid_vertex_angle(1.0, 1.1, 1.3);
    ensure(check(0, &[v; 4])?, "boundary of a disphenoid")?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let genus = rng.random_range(0..3u32);
        let n = rng.random_range(1..7usize);
        let angles: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..PI)).collect();
        ensure(!check(genus, &angles)?, format!("genus {genus} angles {angles:?} passed"))?;
    }
    Ok("4 Euclidean families pass; 100 random angle sets fail".into())
}

fn c10_whitehead() -> Outcome {
    let sys = load("whitehead").map_err(|e| e.to_string())?.assemble();
    let complete = solve_complete(&sys, None).map_err(|e| e.to_string())?;
    let vol = volume_report(&sys, &complete).map_err(|e| e.to_string())?.total;
    let expect = 8.0 * lobachevsky(PI / 4.0);
    ensure((vol - expect).abs() < 1e-9, format!("volume {vol} vs {expect}"))?;
    let target = ConeTarget::new(vec![PI / 2.0, PI / 2.0]).map_err(|e| e.to_string())?;
    let path = continue_to_angles(&sys, &complete, &target, &ContinuationOptions::default())
        .map_err(|e| e.to_string())?;
    ensure(path.is_completed(), format!("ended {:?}", path.status))?;
    let last = path.last();
    let diff = (last.traces[0] - last.traces[1]).norm();
    ensure(diff < 1e-9, format!("traces differ by {diff:e}"))?;
    Ok(format!(
        "complete vol {vol:.12} = 8L(pi/4); (pi/2, pi/2) reached, vol {:.11}, |tr1 - tr2| = {diff:.1e}, {} of {} \
         samples with a flipped tetrahedron",
        last.volume,
        path.flipped_samples(),
        path.samples.len()
    ))
}

type Criterion = (u32, &'static str, f64, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "nu constant", 1.0, c1_nu),
        (2, "figure-eight complete structure", 1.0, c2_figure8_complete),
        (3, "Euclidean wall", 30.0, c3_euclidean_wall),
        (4, "character variety dimension", 1.0, c4_corank),
        (5, "path-lifting determinism", 30.0, c5_path_lifting),
        (6, "metric lab closed forms", 1.0, c6_closed_forms),
        (7, "smoothing and cusp flattening", 5.0, c7_constructions),
        (8, "rank-2 obstruction", 1.0, c8_rank_two),
        (9, "Gauss-Bonnet cone surfaces", 1.0, c9_gauss_bonnet),
        (10, "Whitehead link", 10.0, c10_whitehead),
    ];
    let mut failures = 0;
    for (n, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > Duration::from_secs_f64(limit) => Err(format!("over time budget; {msg}")),
            other => other,
        };
        let secs = elapsed.as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS  criterion {n:>2} {name} ({secs:.2} s, limit {limit} s): {msg}"),
            Err(msg) => {
                failures += 1;
                println!("FAIL  criterion {n:>2} {name} ({secs:.2} s, limit {limit} s): {msg}");
            }
        }
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
