//! On-disk JSON layout of a triangulation file.
//!
//! ```text
//! { "name": string, "n_tet": int,
//!   "gluings": [[tet, face, to_tet, to_face, [p0, p1, p2, p3]], ...],
//!   "edges":   [[[tet, corner_pair], ...], ...],
//!   "cusps":   [{ "meridian": [int...], "longitude": [int...],
//!                 "pi_i_coeff_m": int, "pi_i_coeff_l": int }, ...] }
//! ```
//!
//! Every number is an integer. `corner_pair` indexes the six edges of a
//! tetrahedron in the order 01, 02, 03, 12, 13, 23. Peripheral vectors have
//! three entries per tetrahedron, the coefficients of
//! `log z`, `log 1/(1−z)` and `log (z−1)/z`.

use serde::{Deserialize, Serialize};

pub type GluingRow = (i64, i64, i64, i64, [i64; 4]);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangulationFile {
    pub name: String,
    pub n_tet: i64,
    pub gluings: Vec<GluingRow>,
    pub edges: Vec<Vec<[i64; 2]>>,
    pub cusps: Vec<CuspFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CuspFile {
    pub meridian: Vec<i64>,
    pub longitude: Vec<i64>,
    pub pi_i_coeff_m: i64,
    pub pi_i_coeff_l: i64,
}
