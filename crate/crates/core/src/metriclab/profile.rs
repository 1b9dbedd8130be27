use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Value and first two derivatives at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Closed-form segments.
#[derive(Clone, Debug, PartialEq)]
pub enum Piece {
    Constant(f64),
    /// `slope·r + intercept`
    Linear { slope: f64, intercept: f64 },
    /// `scale·sin r`
    Sin { scale: f64 },
    /// `scale·sinh r`
    Sinh { scale: f64 },
    /// `scale·cosh r`
    Cosh { scale: f64 },
    /// `Σ c[k]·(r − x0)^k`
    Cubic { x0: f64, c: [f64; 4] },
    /// Cusp taper on `[2z0, 4z0]`: `f = 2z0·exp(I(s))`, `s = (z − 2z0)/(2z0)`,
    /// with `f′/f = (1 − S(s))/z` and `S` the smootherstep.
    CuspTaper { z0: f64 },
}

fn smootherstep(s: f64) -> (f64, f64) {
    let v = s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
    let d = 30.0 * s * s * (1.0 - s) * (1.0 - s);
    (v, d)
}

/// `∫₀^s (1 − S(σ))/(1 + σ) dσ`. Dividing `1 − S` by `1 + σ` leaves
/// quotient `−6σ⁴ + 21σ³ − 31σ² + 31σ − 31` and remainder 32.
pub(crate) fn taper_integral(s: f64) -> f64 {
    let poly = s * (-31.0 + s * (31.0 / 2.0 + s * (-31.0 / 3.0 + s * (21.0 / 4.0 - s * 6.0 / 5.0))));
    poly + 32.0 * s.ln_1p()
}

impl Piece {
    pub fn jet(&self, r: f64) -> Jet {
        match *self {
            Piece::Constant(c) => Jet { v: c, d1: 0.0, d2: 0.0 },
            Piece::Linear { slope, intercept } => Jet { v: slope * r + intercept, d1: slope, d2: 0.0 },
            Piece::Sin { scale } => Jet { v: scale * r.sin(), d1: scale * r.cos(), d2: -scale * r.sin() },
            Piece::Sinh { scale } => Jet { v: scale * r.sinh(), d1: scale * r.cosh(), d2: scale * r.sinh() },
            Piece::Cosh { scale } => Jet { v: scale * r.cosh(), d1: scale * r.sinh(), d2: scale * r.cosh() },
            Piece::Cubic { x0, c } => {
                let x = r - x0;
                Jet {
                    v: c[0] + x * (c[1] + x * (c[2] + x * c[3])),
                    d1: c[1] + x * (2.0 * c[2] + 3.0 * x * c[3]),
                    d2: 2.0 * c[2] + 6.0 * x * c[3],
                }
            }
            Piece::CuspTaper { z0 } => {
                let s = (r - 2.0 * z0) / (2.0 * z0);
                let (sv, sd) = smootherstep(s);
                let f = 2.0 * z0 * taper_integral(s).exp();
                let g = (1.0 - sv) / r;
                let dg = -sd / (2.0 * z0) / r - (1.0 - sv) / (r * r);
                Jet { v: f, d1: f * g, d2: f * (g * g + dg) }
            }
        }
    }
}

/// A real profile `r ↦ f(r)`: closed-form pieces separated by knots, or an
/// arbitrary closure differentiated numerically.
#[derive(Clone)]
pub enum Profile {
    Piecewise { knots: Vec<f64>, pieces: Vec<Piece> },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Piecewise { knots, pieces } => {
                f.debug_struct("Piecewise").field("knots", knots).field("pieces", pieces).finish()
            }
            Profile::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Knot proximity treated as "at the knot".
pub const KNOT_TOL: f64 = 1e-12;

impl Profile {
    pub fn closed(piece: Piece) -> Self {
        Profile::Piecewise { knots: Vec::new(), pieces: vec![piece] }
    }

    pub fn piecewise(knots: Vec<f64>, pieces: Vec<Piece>) -> Result<Self> {
        if pieces.len() != knots.len() + 1 {
            return Err(Error::InvalidArgument("need exactly one more piece than knots".into()));
        }
        if knots.windows(2).any(|w| !(w[1] > w[0])) || knots.iter().any(|k| !k.is_finite()) {
            return Err(Error::InvalidArgument("knots must be finite and strictly increasing".into()));
        }
        Ok(Profile::Piecewise { knots, pieces })
    }

    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Profile::Custom(Arc::new(f))
    }

    pub fn knots(&self) -> &[f64] {
        match self {
            Profile::Piecewise { knots, .. } => knots,
            Profile::Custom(_) => &[],
        }
    }

    pub fn is_closed_form(&self) -> bool {
        matches!(self, Profile::Piecewise { .. })
    }

    fn piece_index(knots: &[f64], r: f64, side: Side) -> usize {
        match side {
            Side::Left => knots.iter().filter(|&&k| k < r - KNOT_TOL).count(),
            Side::Right => knots.iter().filter(|&&k| k <= r + KNOT_TOL).count(),
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        match self {
            Profile::Piecewise { knots, pieces } => pieces[Self::piece_index(knots, r, Side::Right)].jet(r).v,
            Profile::Custom(f) => f(r),
        }
    }

    /// Analytic jet for closed forms, five-point differences with step `h`
    /// for closures. Fails with `KnotPoint` at a knot.
    pub fn jet(&self, r: f64, h: f64) -> Result<Jet> {
        if self.knots().iter().any(|k| (k - r).abs() <= KNOT_TOL) {
            return Err(Error::KnotPoint { x: r });
        }
        Ok(self.jet_one_sided(r, Side::Right, h))
    }

    /// Jet of the piece on `side` of `r`; equal to [`Profile::jet`] away from
    /// knots.
    pub fn jet_one_sided(&self, r: f64, side: Side, h: f64) -> Jet {
        match self {
            Profile::Piecewise { knots, pieces } => pieces[Self::piece_index(knots, r, side)].jet(r),
            Profile::Custom(f) => five_point(|x| f(x), r, h),
        }
    }

    /// Five-point finite-difference jet of the value function.
    pub fn jet_fd(&self, r: f64, h: f64) -> Jet {
        five_point(|x| self.value(x), r, h)
    }
}

pub(crate) fn five_point(f: impl Fn(f64) -> f64, x: f64, h: f64) -> Jet {
    let (fm2, fm1, f0, fp1, fp2) = (f(x - 2.0 * h), f(x - h), f(x), f(x + h), f(x + 2.0 * h));
    Jet {
        v: f0,
        d1: (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h),
        d2: (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h),
    }
}
