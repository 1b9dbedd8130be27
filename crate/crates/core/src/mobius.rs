//! SL2(C) arithmetic and the elliptic / parabolic / loxodromic trichotomy.
//!
//! Matrices are always stored as normalized representatives: determinant one,
//! and the sign fixed so that `Re(trace) >= 0` (ties broken by `Im(trace) >= 0`).
//! Because of that normalization `A` and `-A` are the same value, which is the
//! right notion for isometries of hyperbolic 3-space.
//!
//! Rotation angles follow the convention `trace = ±2 cos(θ/2)` for an elliptic
//! element of rotation angle `θ`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default tolerance for [`MobiusTransform::classify`].
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A normalized element of SL2(C), `z ↦ (az + b)/(cz + d)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MobiusTransform {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

/// Isometry type of a Möbius transformation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IsometryClass {
    Identity,
    /// Rotation about a geodesic axis, angle in `(0, π]` for normalized input.
    Elliptic { rotation_angle: f64 },
    Parabolic,
    Loxodromic { translation_length: f64, twist: f64 },
}

impl IsometryClass {
    pub fn is_elliptic_or_identity(&self) -> bool {
        matches!(self, IsometryClass::Identity | IsometryClass::Elliptic { .. })
    }
}

/// A point of the Riemann sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryPoint {
    Finite(Complex64),
    Infinity,
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Finite(z) => write!(f, "{z}"),
            BoundaryPoint::Infinity => write!(f, "∞"),
        }
    }
}

impl BoundaryPoint {
    /// Chordal distance on the Riemann sphere (diameter 2 normalization).
    pub fn chordal_distance(&self, other: &BoundaryPoint) -> f64 {
        match (self, other) {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => 0.0,
            (BoundaryPoint::Finite(z), BoundaryPoint::Infinity)
            | (BoundaryPoint::Infinity, BoundaryPoint::Finite(z)) => 2.0 / (1.0 + z.norm_sqr()).sqrt(),
            (BoundaryPoint::Finite(z), BoundaryPoint::Finite(w)) => {
                2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt())
            }
        }
    }
}

impl MobiusTransform {
    /// Builds the normalized representative of `[[a, b], [c, d]]`.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det.norm() > 0.0) || !det.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "matrix is singular or non-finite (det = {det})"
            )));
        }
        Ok(Self { a, b, c, d }.normalized(det))
    }

    pub fn identity() -> Self {
        Self { a: ONE, b: ZERO, c: ZERO, d: ONE }
    }

    /// `diag(λ, 1/λ)`.
    pub fn diagonal(lambda: Complex64) -> Result<Self> {
        Self::new(lambda, ZERO, ZERO, lambda.inv())
    }

    /// Elliptic element rotating by `angle` about the geodesic `0 → ∞`.
    pub fn rotation(angle: f64) -> Self {
        let half = Complex64::from_polar(1.0, angle / 2.0);
        Self::diagonal(half).expect("unit diagonal is invertible")
    }

    fn normalized(self, det: Complex64) -> Self {
        let k = det.sqrt().inv();
        let mut m = Self { a: self.a * k, b: self.b * k, c: self.c * k, d: self.d * k };
        let tr = m.a + m.d;
        if tr.re < 0.0 || (tr.re == 0.0 && tr.im < 0.0) {
            m = Self { a: -m.a, b: -m.b, c: -m.c, d: -m.d };
        }
        m
    }

    fn renormalize(self) -> Self {
        let det = self.a * self.d - self.b * self.c;
        self.normalized(det)
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }.renormalize()
    }

    /// Matrix product `self · other`, renormalized.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
        .renormalize()
    }

    /// `P · self · P⁻¹`.
    pub fn conjugate_by(&self, p: &Self) -> Self {
        p.compose(self).compose(&p.inverse())
    }

    /// Action on the Riemann sphere.
    pub fn apply(&self, z: BoundaryPoint) -> BoundaryPoint {
        match z {
            BoundaryPoint::Infinity => {
                if self.c == ZERO {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(self.a / self.c)
                }
            }
            BoundaryPoint::Finite(z) => {
                let den = self.c * z + self.d;
                if den == ZERO {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }

    /// True when the matrix is `±I` within `tol` entrywise.
    pub fn is_identity(&self, tol: f64) -> bool {
        // Normalization already picked the sign with Re(trace) >= 0.
        (self.a - ONE).norm() <= tol
            && (self.d - ONE).norm() <= tol
            && self.b.norm() <= tol
            && self.c.norm() <= tol
    }

    /// Classifies the isometry. Near-boundary traces resolve toward
    /// `Parabolic`.
    pub fn classify(&self, tol: f64) -> IsometryClass {
        if self.is_identity(tol) {
            return IsometryClass::Identity;
        }
        let tr = self.trace();
        let real = tr.im.abs() <= tol;
        if real && (tr.norm() - 2.0).abs() <= tol {
            return IsometryClass::Parabolic;
        }
        if real && tr.re.abs() < 2.0 {
            // Re(tr) >= 0 after normalization, so the angle lands in (0, π].
            let half = (tr.re / 2.0).clamp(-1.0, 1.0).acos();
            return IsometryClass::Elliptic { rotation_angle: 2.0 * half };
        }
        let w = (tr / 2.0).acosh();
        let w = if w.re < 0.0 { -w } else { w };
        let mut twist = 2.0 * w.im;
        if twist > PI {
            twist -= 2.0 * PI;
        } else if twist <= -PI {
            twist += 2.0 * PI;
        }
        IsometryClass::Loxodromic { translation_length: 2.0 * w.re, twist }
    }

    /// Fixed points on the sphere at infinity: one for parabolics, two
    /// otherwise.
    pub fn fixed_points_boundary(&self) -> Result<Vec<BoundaryPoint>> {
        let tol = DEFAULT_CLASSIFY_TOL;
        if self.is_identity(tol) {
            return Err(Error::IdentityInput);
        }
        let parabolic = self.classify(tol) == IsometryClass::Parabolic;
        let scale = self.a.norm().max(self.b.norm()).max(self.d.norm()).max(1.0);
        if self.c.norm() <= 1e-14 * scale {
            // z ↦ (az + b)/d fixes ∞ and, unless a = d, one finite point.
            let diff = self.d - self.a;
            if parabolic || diff.norm() <= 1e-14 * scale {
                return Ok(vec![BoundaryPoint::Infinity]);
            }
            return Ok(vec![BoundaryPoint::Finite(self.b / diff), BoundaryPoint::Infinity]);
        }
        // c z² + (d − a) z − b = 0, discriminant tr² − 4.
        let tr = self.trace();
        let two_c = self.c * 2.0;
        if parabolic {
            return Ok(vec![BoundaryPoint::Finite((self.a - self.d) / two_c)]);
        }
        let disc = (tr * tr - 4.0).sqrt();
        Ok(vec![
            BoundaryPoint::Finite((self.a - self.d + disc) / two_c),
            BoundaryPoint::Finite((self.a - self.d - disc) / two_c),
        ])
    }
}

impl Mul for MobiusTransform {
    type Output = MobiusTransform;

    fn mul(self, rhs: Self) -> Self::Output {
        self.compose(&rhs)
    }
}

impl fmt::Display for MobiusTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// A letter of a word in the generators: `(index, inverted)`.
pub type Letter = (usize, bool);

/// Outcome of [`all_elliptic_probe`].
#[derive(Clone, Debug, PartialEq)]
pub struct EllipticProbe {
    pub all_elliptic: bool,
    /// First reduced word (in enumeration order) that is not elliptic.
    pub witness: Option<Vec<Letter>>,
    pub witness_class: Option<IsometryClass>,
    pub words_checked: usize,
}

/// Checks that every reduced word of length `1..=word_length` in the
/// generators and their inverses is elliptic or the identity.
///
/// This is a finite probe: a positive answer is evidence that the group
/// fixes a point of hyperbolic space, not a proof.
pub fn all_elliptic_probe(generators: &[MobiusTransform], word_length: usize) -> EllipticProbe {
    let letters: Vec<(Letter, MobiusTransform)> = generators
        .iter()
        .enumerate()
        .flat_map(|(i, g)| [((i, false), *g), ((i, true), g.inverse())])
        .collect();

    let mut checked = 0;
    // Breadth-first over word length keeps the witness as short as possible.
    let mut frontier: Vec<(Vec<Letter>, MobiusTransform)> = vec![(Vec::new(), MobiusTransform::identity())];
    for _ in 0..word_length {
        let mut next = Vec::with_capacity(frontier.len() * letters.len());
        for (word, value) in &frontier {
            for (letter, m) in &letters {
                if let Some(last) = word.last() {
                    if last.0 == letter.0 && last.1 != letter.1 {
                        continue;
                    }
                }
                let product = value.compose(m);
                let class = product.classify(DEFAULT_CLASSIFY_TOL);
                checked += 1;
                let mut w = word.clone();
                w.push(*letter);
                if !class.is_elliptic_or_identity() {
                    return EllipticProbe {
                        all_elliptic: false,
                        witness: Some(w),
                        witness_class: Some(class),
                        words_checked: checked,
                    };
                }
                next.push((w, product));
            }
        }
        frontier = next;
    }
    EllipticProbe { all_elliptic: true, witness: None, witness_class: None, words_checked: checked }
}
