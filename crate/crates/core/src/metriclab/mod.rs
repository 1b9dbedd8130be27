//! Warped-product metrics used to smooth a cone singularity and to flatten
//! a cusp, with their diagonal curvature operators.
//!
//! Cylindrical profiles describe `ds² = g(r)²dt² + dr² + f(r)²dθ²`, whose
//! curvature operator is `diag(−g″/g, −g′f′/(fg), −f″/f)`. Cusp profiles
//! describe `ds² = (dx² + dy² + dz²)` rescaled by `f(z)`, whose operator is
//! `diag(−f′², f″f − f′², f″f − f′²)`; `f(z) = z` is the horospherical
//! metric of curvature −1.

mod profile;

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

pub use profile::{Jet, Piece, Profile, Side, KNOT_TOL};

/// Default finite-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-3;
/// Sign tolerance used by [`verify_profile`].
pub const SIGN_TOL: f64 = 1e-9;

/// Diagonal curvature operator on the coordinate 2-planes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvatureOperatorDiag {
    pub lambda: f64,
    pub mu: f64,
    pub nu: f64,
}

impl CurvatureOperatorDiag {
    pub fn new(lambda: f64, mu: f64, nu: f64) -> Self {
        Self { lambda, mu, nu }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.lambda, self.mu, self.nu]
    }

    /// `(μν, νλ, λμ)`.
    pub fn adjugate(&self) -> Self {
        Self::new(self.mu * self.nu, self.nu * self.lambda, self.lambda * self.mu)
    }

    pub fn square(&self) -> Self {
        Self::new(self.lambda * self.lambda, self.mu * self.mu, self.nu * self.nu)
    }

    pub fn determinant(&self) -> f64 {
        self.lambda * self.mu * self.nu
    }

    /// `K² + 2·Adj(K)`. When `K` has rank two the kernel direction of `K` is
    /// not in the kernel of this operator.
    pub fn rank_obstruction(&self) -> Self {
        let (s, a) = (self.square(), self.adjugate());
        Self::new(s.lambda + 2.0 * a.lambda, s.mu + 2.0 * a.mu, s.nu + 2.0 * a.nu)
    }

    /// Whether some kernel direction of `K` (entries within `tol` of zero)
    /// is moved by `K² + 2·Adj(K)`. This happens exactly for rank two.
    pub fn rank_two_obstructed(&self, tol: f64) -> bool {
        let k = self.as_array();
        let q = self.rank_obstruction().as_array();
        (0..3).any(|i| k[i].abs() <= tol && q[i].abs() > tol)
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.as_array().iter().filter(|x| x.abs() > tol).count()
    }

    pub fn min(&self) -> f64 {
        self.lambda.min(self.mu).min(self.nu)
    }

    pub fn max(&self) -> f64 {
        self.lambda.max(self.mu).max(self.nu)
    }
}

/// Free function form of [`CurvatureOperatorDiag::adjugate`].
pub fn adjugate_diag(k: CurvatureOperatorDiag) -> CurvatureOperatorDiag {
    k.adjugate()
}

#[derive(Clone, Debug)]
pub enum WarpedKind {
    Cylindrical { f: Profile, g: Profile },
    Cusp { f: Profile },
}

#[derive(Clone, Debug)]
pub struct WarpedMetricProfile {
    pub kind: WarpedKind,
    pub domain: (f64, f64),
    /// Finite-difference step for closure profiles.
    pub h: f64,
}

impl WarpedMetricProfile {
    pub fn cylindrical(f: Profile, g: Profile, domain: (f64, f64)) -> Result<Self> {
        Self::with_kind(WarpedKind::Cylindrical { f, g }, domain)
    }

    pub fn cusp(f: Profile, domain: (f64, f64)) -> Result<Self> {
        Self::with_kind(WarpedKind::Cusp { f }, domain)
    }

    fn with_kind(kind: WarpedKind, domain: (f64, f64)) -> Result<Self> {
        if !(domain.0 < domain.1) || !domain.0.is_finite() || !domain.1.is_finite() {
            return Err(Error::InvalidArgument(format!("bad domain [{}, {}]", domain.0, domain.1)));
        }
        Ok(Self { kind, domain, h: DEFAULT_FD_STEP })
    }

    pub fn with_step(mut self, h: f64) -> Self {
        self.h = h;
        self
    }

    /// Knots of all component profiles strictly inside the domain, sorted.
    pub fn knots(&self) -> Vec<f64> {
        let mut k: Vec<f64> = match &self.kind {
            WarpedKind::Cylindrical { f, g } => f.knots().iter().chain(g.knots()).copied().collect(),
            WarpedKind::Cusp { f } => f.knots().to_vec(),
        };
        k.retain(|&x| x > self.domain.0 && x < self.domain.1);
        k.sort_by(f64::total_cmp);
        k.dedup_by(|a, b| (*a - *b).abs() <= KNOT_TOL);
        k
    }

    fn check_interior(&self, x: f64) -> Result<()> {
        if !(x > self.domain.0 && x < self.domain.1) {
            return Err(Error::InvalidArgument(format!(
                "{x} is not inside ({}, {})",
                self.domain.0, self.domain.1
            )));
        }
        Ok(())
    }

    fn curvature_from_jets(&self, f: Jet, g: Option<Jet>, x: f64) -> Result<CurvatureOperatorDiag> {
        if f.v <= 0.0 || g.is_some_and(|g| g.v <= 0.0) {
            return Err(Error::InvalidArgument(format!("warping function not positive at {x}")));
        }
        Ok(match g {
            Some(g) => CurvatureOperatorDiag::new(-g.d2 / g.v, -g.d1 * f.d1 / (f.v * g.v), -f.d2 / f.v),
            None => {
                let mixed = f.d2 * f.v - f.d1 * f.d1;
                CurvatureOperatorDiag::new(-f.d1 * f.d1, mixed, mixed)
            }
        })
    }

    /// Curvature at an interior non-knot point.
    pub fn curvature_at(&self, x: f64) -> Result<CurvatureOperatorDiag> {
        self.check_interior(x)?;
        match &self.kind {
            WarpedKind::Cylindrical { f, g } => self.curvature_from_jets(f.jet(x, self.h)?, Some(g.jet(x, self.h)?), x),
            WarpedKind::Cusp { f } => self.curvature_from_jets(f.jet(x, self.h)?, None, x),
        }
    }

    /// Curvature from the pieces on `side` of `x`; valid at knots.
    pub fn curvature_one_sided(&self, x: f64, side: Side) -> Result<CurvatureOperatorDiag> {
        self.check_interior(x)?;
        match &self.kind {
            WarpedKind::Cylindrical { f, g } => {
                self.curvature_from_jets(f.jet_one_sided(x, side, self.h), Some(g.jet_one_sided(x, side, self.h)), x)
            }
            WarpedKind::Cusp { f } => self.curvature_from_jets(f.jet_one_sided(x, side, self.h), None, x),
        }
    }

    /// Curvature with every derivative taken by five-point differences.
    pub fn curvature_fd(&self, x: f64) -> Result<CurvatureOperatorDiag> {
        self.check_interior(x)?;
        match &self.kind {
            WarpedKind::Cylindrical { f, g } => self.curvature_from_jets(f.jet_fd(x, self.h), Some(g.jet_fd(x, self.h)), x),
            WarpedKind::Cusp { f } => self.curvature_from_jets(f.jet_fd(x, self.h), None, x),
        }
    }
}

/// Hyperbolic model near a cone axis: `f = sinh(r)·α/2π`, `g = cosh r`.
pub fn fermi_hyperbolic(alpha: f64, r0: f64, r1: f64) -> Result<WarpedMetricProfile> {
    check_alpha(alpha)?;
    WarpedMetricProfile::cylindrical(
        Profile::closed(Piece::Sinh { scale: alpha / (2.0 * PI) }),
        Profile::closed(Piece::Cosh { scale: 1.0 }),
        (r0.max(0.0), r1),
    )
}

/// Flat model near a cone axis: `f = r·α/2π`, `g = 1`.
pub fn fermi_euclidean(alpha: f64, r0: f64, r1: f64) -> Result<WarpedMetricProfile> {
    check_alpha(alpha)?;
    WarpedMetricProfile::cylindrical(
        Profile::closed(Piece::Linear { slope: alpha / (2.0 * PI), intercept: 0.0 }),
        Profile::closed(Piece::Constant(1.0)),
        (r0.max(0.0), r1),
    )
}

/// Horospherical cusp metric `(dx² + dy² + dz²)/z²`, i.e. `f(z) = z`.
pub fn horospherical_cusp(z0: f64, z1: f64) -> Result<WarpedMetricProfile> {
    if !(z0 > 0.0) {
        return Err(Error::InvalidArgument("cusp height must be positive".into()));
    }
    WarpedMetricProfile::cusp(Profile::closed(Piece::Linear { slope: 1.0, intercept: 0.0 }), (z0, z1))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 2.0 * PI) {
        return Err(Error::InvalidArgument(format!("cone angle {alpha} outside (0, 2pi)")));
    }
    Ok(())
}

/// A smoothed cone profile and the slack left in its concavity constraints.
#[derive(Clone, Debug)]
pub struct ConeSmoothing {
    pub profile: WarpedMetricProfile,
    /// End of the round part `f = sin r`.
    pub delta: f64,
    /// Smallest of the two endpoint margins of the Hermite cubic's `f″ ≤ 0`.
    pub concavity_margin: f64,
}

/// Smooths the flat cone of angle `α` inside radius `ε`: `f = sin r` on
/// `[0, δ]`, a concave cubic Hermite bridge on `[δ, ε]`, and
/// `f = (r + (2π − α)ε/2α)·α/2π` beyond, with `g ≡ 1`. The domain is
/// `[0, 2(ε + 1)]`.
pub fn cone_smoothing(alpha: f64, eps: f64) -> Result<ConeSmoothing> {
    check_alpha(alpha)?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument("smoothing radius must be positive".into()));
    }
    let slope = alpha / (2.0 * PI);
    let linear = Piece::Linear { slope, intercept: (2.0 * PI - alpha) * eps / (2.0 * alpha) * slope };
    let end = linear.jet(eps);
    // Candidate round radii δ = ε/2^k. The margin improves as δ shrinks but
    // the bridge gets sharper, so take the largest δ within half of the best
    // margin.
    let candidates: Vec<(f64, f64)> = (1..=40)
        .map(|k| eps * 0.5f64.powi(k))
        .filter(|&delta| delta < PI / 2.0)
        .map(|delta| {
            let (s0, s1) = (delta.cos(), end.d1);
            let chord = (end.v - delta.sin()) / (eps - delta);
            // f″ of the Hermite cubic is linear; these are its endpoint signs.
            let margin = ((2.0 * s0 + s1) / 3.0 - chord).min(chord - (s0 + 2.0 * s1) / 3.0);
            (delta, margin)
        })
        .collect();
    let best = candidates.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    if !(best >= 0.0) {
        return Err(Error::InfeasibleSmoothing { alpha, eps, feasible_eps: None });
    }
    let &(delta, margin) = candidates.iter().find(|c| c.1 >= 0.5 * best).expect("best is a candidate");
    let w = eps - delta;
    let (y0, y1, s0, s1) = (delta.sin(), end.v, delta.cos(), end.d1);
    let c2 = (3.0 * (y1 - y0) / w - 2.0 * s0 - s1) / w;
    let c3 = (s0 + s1 - 2.0 * (y1 - y0) / w) / (w * w);
    let cubic = Piece::Cubic { x0: delta, c: [y0, s0, c2, c3] };
    let f = Profile::piecewise(vec![delta, eps], vec![Piece::Sin { scale: 1.0 }, cubic, linear])?;
    let profile = WarpedMetricProfile::cylindrical(f, Profile::closed(Piece::Constant(1.0)), (0.0, 2.0 * (eps + 1.0)))?;
    Ok(ConeSmoothing { profile, delta, concavity_margin: margin })
}

pub fn build_cone_smoothing(alpha: f64, eps: f64) -> Result<WarpedMetricProfile> {
    Ok(cone_smoothing(alpha, eps)?.profile)
}

/// Flattens the cusp `f(z) = z` above `z0`: `f′/f = g` with `g = 1/z` on
/// `[z0, 2z0]`, `g = (1 − S)/z` tapering to zero on `[2z0, 4z0]` (`S` the
/// smootherstep), and `f` constant beyond. Domain `[z0, zfar]`.
pub fn build_cusp_flattening(z0: f64, zfar: f64) -> Result<WarpedMetricProfile> {
    if !(z0 > 0.0 && z0.is_finite()) {
        return Err(Error::InvalidArgument("cusp height must be positive".into()));
    }
    if !(zfar >= 10.0 * z0) {
        return Err(Error::InvalidArgument(format!("zfar must be at least 10·z0 = {}", 10.0 * z0)));
    }
    let taper = Piece::CuspTaper { z0 };
    let top = taper.jet(4.0 * z0).v;
    let f = Profile::piecewise(
        vec![2.0 * z0, 4.0 * z0],
        vec![Piece::Linear { slope: 1.0, intercept: 0.0 }, taper, Piece::Constant(top)],
    )?;
    WarpedMetricProfile::cusp(f, (z0, zfar))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SignRequirement {
    NonNegative,
    NonPositive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub sign: SignRequirement,
    pub points: usize,
    pub min_entry: f64,
    pub min_at: f64,
    pub max_entry: f64,
    pub max_at: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Evaluates the curvature on `grid_n` evenly spaced interior points plus
/// both sides of every knot and checks the requested sign within
/// [`SIGN_TOL`].
pub fn verify_profile(p: &WarpedMetricProfile, sign: SignRequirement, grid_n: usize) -> Result<VerifyReport> {
    if grid_n < 100 {
        return Err(Error::InvalidArgument("grid_n must be at least 100".into()));
    }
    let (a, b) = p.domain;
    let knots = p.knots();
    let mut evals: Vec<(f64, CurvatureOperatorDiag)> = Vec::with_capacity(grid_n + 2 * knots.len());
    for i in 1..=grid_n {
        let x = a + (b - a) * i as f64 / (grid_n + 1) as f64;
        if knots.iter().any(|k| (k - x).abs() <= KNOT_TOL) {
            continue;
        }
        evals.push((x, p.curvature_at(x)?));
    }
    for &k in &knots {
        evals.push((k, p.curvature_one_sided(k, Side::Left)?));
        evals.push((k, p.curvature_one_sided(k, Side::Right)?));
    }
    let (mut min_entry, mut min_at, mut max_entry, mut max_at) = (f64::INFINITY, a, f64::NEG_INFINITY, a);
    for (x, k) in &evals {
        if k.min() < min_entry {
            (min_entry, min_at) = (k.min(), *x);
        }
        if k.max() > max_entry {
            (max_entry, max_at) = (k.max(), *x);
        }
    }
    let passed = match sign {
        SignRequirement::NonNegative => min_entry >= -SIGN_TOL,
        SignRequirement::NonPositive => max_entry <= SIGN_TOL,
    };
    Ok(VerifyReport { sign, points: evals.len(), min_entry, min_at, max_entry, max_at, tol: SIGN_TOL, passed })
}
