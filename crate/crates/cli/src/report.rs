use cone_moduli::continuation::{ConeTarget, ContinuationPath, PathStatus, SweepRow};
use cone_moduli::triangulation::CorankReport;
use cone_moduli::{ShapeAssignment, VolumeReport};
use num_complex::Complex64;
use serde::Serialize;

pub fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.14e} {} {:.14e}i", z.re, if z.im < 0.0 { '-' } else { '+' }, z.im.abs())
}

#[derive(Serialize)]
pub struct CompleteReport {
    input: String,
    shapes: Vec<Complex64>,
    max_residual: f64,
    volume: f64,
    per_tet_volume: Vec<f64>,
    bound: f64,
    bound_satisfied: bool,
    corank: usize,
    expected_corank: usize,
    singular_values: Vec<f64>,
}

impl CompleteReport {
    pub fn new(
        input: &str,
        shapes: &ShapeAssignment,
        residuals: &[Complex64],
        volume: &VolumeReport,
        corank: &CorankReport,
        m: usize,
    ) -> Self {
        Self {
            input: input.to_string(),
            shapes: shapes.z.clone(),
            max_residual: residuals.iter().map(|r| r.norm()).fold(0.0, f64::max),
            volume: volume.total,
            per_tet_volume: volume.per_tet.clone(),
            bound: volume.bound,
            bound_satisfied: volume.bound_satisfied,
            corank: corank.corank,
            expected_corank: m,
            singular_values: corank.singular_values.clone(),
        }
    }

    pub fn print_text(&self) {
        println!("input: {}", self.input);
        for (j, z) in self.shapes.iter().enumerate() {
            println!("z[{j}] = {}", fmt_c(*z));
        }
        println!("max residual: {:.3e}", self.max_residual);
        println!("volume: {:.15}", self.volume);
        println!(
            "bound nu*n3 = {:.15}: {}",
            self.bound,
            if self.bound_satisfied { "satisfied" } else { "VIOLATED" }
        );
        println!(
            "edge Jacobian corank: {} (cusps: {}){}",
            self.corank,
            self.expected_corank,
            if self.corank == self.expected_corank { "" } else { " MISMATCH" }
        );
    }
}

#[derive(Serialize)]
pub struct ConeReport {
    input: String,
    angles: Vec<f64>,
    signs: Vec<f64>,
    status: PathStatus,
    samples: usize,
    samples_with_flipped_tetrahedra: usize,
    t: f64,
    shapes: Vec<Complex64>,
    traces: Vec<Complex64>,
    log_holonomies: Vec<Complex64>,
    volume: f64,
    min_im_z: f64,
}

impl ConeReport {
    pub fn new(input: &str, target: &ConeTarget, path: &ContinuationPath) -> Self {
        let last = path.last();
        Self {
            input: input.to_string(),
            angles: target.theta().to_vec(),
            signs: target.signs().to_vec(),
            status: path.status.clone(),
            samples: path.samples.len(),
            samples_with_flipped_tetrahedra: path.flipped_samples(),
            t: last.t,
            shapes: last.shapes.z.clone(),
            traces: last.traces.clone(),
            log_holonomies: last.log_holonomies.clone(),
            volume: last.volume,
            min_im_z: last.degeneracy_margin,
        }
    }

    pub fn print_text(&self) {
        println!("input: {}", self.input);
        println!("target angles: {:?}", self.angles);
        match &self.status {
            PathStatus::Completed => println!("status: completed"),
            PathStatus::Degenerated(d) => {
                println!("status: degenerated at t* = {:.10} ({:?})", d.t_star, d.cause);
                println!("volume at t*: {:.6e}", d.volume);
                println!("Im z per tetrahedron at t*: {:?}", d.margins);
                if let Some(cs) = &d.cross_section {
                    println!(
                        "mirror pair {:?}: doubled link triangle with cone angles {:?}, Euclidean: {}",
                        cs.tetrahedra, cs.cone_angles, cs.euclidean
                    );
                }
            }
            PathStatus::StepLimit { t } => println!("status: step limit reached at t = {t}"),
        }
        println!(
            "path: {} samples, {} with a negatively oriented tetrahedron",
            self.samples, self.samples_with_flipped_tetrahedra
        );
        println!("final t: {}", self.t);
        for (j, z) in self.shapes.iter().enumerate() {
            println!("z[{j}] = {}", fmt_c(*z));
        }
        for (j, (tr, u)) in self.traces.iter().zip(&self.log_holonomies).enumerate() {
            println!("cusp {j}: trace = {}, u = {}", fmt_c(*tr), fmt_c(*u));
        }
        println!("volume: {:.15}", self.volume);
        println!("min Im z: {:.6e}", self.min_im_z);
    }
}

pub fn sweep_json(rows: &[SweepRow]) -> serde_json::Value {
    serde_json::json!({ "version": 1, "rows": rows })
}
