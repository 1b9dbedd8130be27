//! Ideal triangulations of cusped 3-manifolds and their gluing equations.
//!
//! Shapes live on the preferred edge pair 01/23 of each tetrahedron. The
//! other two parameters are `z' = 1/(1−z)` (edges 02/13) and
//! `z'' = (z−1)/z` (edges 03/12). Face gluings use the vertex-permutation
//! convention in which a consistently oriented triangulation of an
//! orientable manifold has only odd gluing permutations.

mod census;
mod cone_surface;
mod gluing;
pub mod schema;

use std::collections::HashMap;
use std::path::Path;

pub use census::{bundled_census, load, load_with_census_dir, BUNDLED_NAMES, CENSUS_DIR_ENV};
pub use cone_surface::euclidean_cone_surface_check;
pub use gluing::{CorankReport, GluingSystem, LogForm, ShapeAssignment, DEGENERATE_SHAPE_TOL};

use crate::error::{Error, Result};
use schema::TriangulationFile;

/// The vertex pair of each tetrahedron edge, indexed by `corner_pair`.
pub const EDGE_VERTICES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Which shape parameter (0: z, 1: z', 2: z'') sits on each edge.
pub const EDGE_SHAPE_TYPE: [usize; 6] = [0, 1, 2, 2, 1, 0];

/// A face identification `(tet, face) → (to_tet, to_face)` with vertex map
/// `perm`; `face` is the index of the opposite vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaceGluing {
    pub to_tet: usize,
    pub to_face: usize,
    pub perm: [usize; 4],
}

/// A tetrahedron edge, `(tet, corner_pair)`.
pub type Corner = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeClass {
    pub corners: Vec<Corner>,
}

impl EdgeClass {
    /// Exponent triple `(a, b, c)` per tetrahedron, flattened to `3·n_tet`
    /// integers.
    pub fn coefficients(&self, n_tet: usize) -> Vec<i64> {
        let mut row = vec![0; 3 * n_tet];
        for &(tet, pair) in &self.corners {
            row[3 * tet + EDGE_SHAPE_TYPE[pair]] += 1;
        }
        row
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cusp {
    pub meridian: Vec<i64>,
    pub longitude: Vec<i64>,
    pub pi_i_coeff_m: i64,
    pub pi_i_coeff_l: i64,
}

/// A validated ideal triangulation with peripheral curve data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealTriangulation {
    name: String,
    gluings: Vec<[FaceGluing; 4]>,
    edge_classes: Vec<EdgeClass>,
    cusps: Vec<Cusp>,
}

impl IdealTriangulation {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_tet(&self) -> usize {
        self.gluings.len()
    }

    pub fn num_cusps(&self) -> usize {
        self.cusps.len()
    }

    pub fn gluings(&self) -> &[[FaceGluing; 4]] {
        &self.gluings
    }

    pub fn edge_classes(&self) -> &[EdgeClass] {
        &self.edge_classes
    }

    pub fn cusps(&self) -> &[Cusp] {
        &self.cusps
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: TriangulationFile =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_file(file)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    /// Validates a parsed file.
    pub fn from_file(file: TriangulationFile) -> Result<Self> {
        if file.n_tet < 1 {
            return Err(Error::Format(format!("n_tet must be positive, got {}", file.n_tet)));
        }
        let n = file.n_tet as usize;
        let index = |v: i64, bound: usize, what: &str| -> Result<usize> {
            if v < 0 || v as usize >= bound {
                Err(Error::Format(format!("{what} {v} out of range 0..{bound}")))
            } else {
                Ok(v as usize)
            }
        };

        let mut slots: Vec<[Option<FaceGluing>; 4]> = vec![[None; 4]; n];
        for &(tet, face, to_tet, to_face, perm) in &file.gluings {
            let tet = index(tet, n, "tetrahedron")?;
            let face = index(face, 4, "face")?;
            let to_tet = index(to_tet, n, "tetrahedron")?;
            let to_face = index(to_face, 4, "face")?;
            let mut p = [0usize; 4];
            for (slot, &v) in p.iter_mut().zip(perm.iter()) {
                *slot = index(v, 4, "permutation entry")?;
            }
            if !is_permutation(&p) {
                return Err(Error::Combinatorics(format!("{perm:?} is not a permutation of 0..4")));
            }
            if p[face] != to_face {
                return Err(Error::Combinatorics(format!(
                    "gluing of face ({tet}, {face}) sends the opposite vertex to {}, not to face {to_face}",
                    p[face]
                )));
            }
            if slots[tet][face].is_some() {
                return Err(Error::Combinatorics(format!("face ({tet}, {face}) is glued twice")));
            }
            slots[tet][face] = Some(FaceGluing { to_tet, to_face, perm: p });
        }

        let mut gluings = Vec::with_capacity(n);
        for (tet, faces) in slots.iter().enumerate() {
            let mut row = [FaceGluing { to_tet: 0, to_face: 0, perm: [0, 1, 2, 3] }; 4];
            for (face, slot) in faces.iter().enumerate() {
                row[face] = slot.ok_or_else(|| {
                    Error::Combinatorics(format!("face ({tet}, {face}) is not glued"))
                })?;
            }
            gluings.push(row);
        }

        for (tet, faces) in gluings.iter().enumerate() {
            for (face, g) in faces.iter().enumerate() {
                if (g.to_tet, g.to_face) == (tet, face) {
                    return Err(Error::Combinatorics(format!("face ({tet}, {face}) is glued to itself")));
                }
                let back = gluings[g.to_tet][g.to_face];
                let inverse = invert(&g.perm);
                if (back.to_tet, back.to_face) != (tet, face) || back.perm != inverse {
                    return Err(Error::Combinatorics(format!(
                        "gluing ({tet}, {face}) → ({}, {}) is not matched by its reverse",
                        g.to_tet, g.to_face
                    )));
                }
                if is_even(&g.perm) {
                    return Err(Error::Combinatorics(format!(
                        "gluing of face ({tet}, {face}) has an even permutation (orientation mismatch)"
                    )));
                }
            }
        }

        let mut edge_classes = Vec::with_capacity(file.edges.len());
        let mut seen = vec![false; 6 * n];
        let mut total = 0usize;
        for class in &file.edges {
            if class.is_empty() {
                return Err(Error::Combinatorics("empty edge class".into()));
            }
            let mut corners = Vec::with_capacity(class.len());
            for &[tet, pair] in class {
                let tet = index(tet, n, "tetrahedron")?;
                let pair = index(pair, 6, "corner pair")?;
                if std::mem::replace(&mut seen[6 * tet + pair], true) {
                    return Err(Error::Combinatorics(format!(
                        "tetrahedron edge ({tet}, {pair}) appears in two edge classes"
                    )));
                }
                corners.push((tet, pair));
            }
            total += corners.len();
            edge_classes.push(EdgeClass { corners });
        }
        if total != 6 * n {
            return Err(Error::Combinatorics(format!(
                "edge classes cover {total} tetrahedron edges, expected {}",
                6 * n
            )));
        }
        if edge_classes.len() != n {
            return Err(Error::Combinatorics(format!(
                "{} edge classes for {n} tetrahedra; a triangulation with torus cusps has as many edges as tetrahedra",
                edge_classes.len()
            )));
        }
        check_edge_partition(&gluings, &edge_classes)?;

        if file.cusps.is_empty() {
            return Err(Error::Combinatorics("at least one cusp is required".into()));
        }
        let mut cusps = Vec::with_capacity(file.cusps.len());
        for (j, c) in file.cusps.into_iter().enumerate() {
            if c.meridian.len() != 3 * n || c.longitude.len() != 3 * n {
                return Err(Error::Format(format!(
                    "cusp {j}: peripheral vectors must have {} entries",
                    3 * n
                )));
            }
            if c.meridian.iter().all(|&v| v == 0) {
                return Err(Error::Combinatorics(format!("cusp {j}: meridian vector is zero")));
            }
            cusps.push(Cusp {
                meridian: c.meridian,
                longitude: c.longitude,
                pi_i_coeff_m: c.pi_i_coeff_m,
                pi_i_coeff_l: c.pi_i_coeff_l,
            });
        }

        Ok(Self { name: file.name, gluings, edge_classes, cusps })
    }

    /// Serializes back to the file layout.
    pub fn to_file(&self) -> TriangulationFile {
        let gluings = self
            .gluings
            .iter()
            .enumerate()
            .flat_map(|(tet, faces)| {
                faces.iter().enumerate().map(move |(face, g)| {
                    let p = g.perm.map(|v| v as i64);
                    (tet as i64, face as i64, g.to_tet as i64, g.to_face as i64, p)
                })
            })
            .collect();
        TriangulationFile {
            name: self.name.clone(),
            n_tet: self.n_tet() as i64,
            gluings,
            edges: self
                .edge_classes
                .iter()
                .map(|c| c.corners.iter().map(|&(t, p)| [t as i64, p as i64]).collect())
                .collect(),
            cusps: self
                .cusps
                .iter()
                .map(|c| schema::CuspFile {
                    meridian: c.meridian.clone(),
                    longitude: c.longitude.clone(),
                    pi_i_coeff_m: c.pi_i_coeff_m,
                    pi_i_coeff_l: c.pi_i_coeff_l,
                })
                .collect(),
        }
    }

    /// Builds the log-form gluing system.
    pub fn assemble(&self) -> GluingSystem {
        GluingSystem::from_triangulation(self)
    }
}

fn is_permutation(p: &[usize; 4]) -> bool {
    let mut seen = [false; 4];
    p.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
}

fn invert(p: &[usize; 4]) -> [usize; 4] {
    let mut inv = [0; 4];
    for (i, &v) in p.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

fn is_even(p: &[usize; 4]) -> bool {
    let mut inversions = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

fn edge_index(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    EDGE_VERTICES.iter().position(|&e| e == (a, b)).expect("distinct vertices")
}

/// Recomputes edge classes from the face gluings and compares them with the
/// declared partition.
fn check_edge_partition(gluings: &[[FaceGluing; 4]], declared: &[EdgeClass]) -> Result<()> {
    let n = gluings.len();
    let mut parent: Vec<usize> = (0..6 * n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (tet, faces) in gluings.iter().enumerate() {
        for (face, g) in faces.iter().enumerate() {
            for (pair, &(a, b)) in EDGE_VERTICES.iter().enumerate() {
                if a == face || b == face {
                    continue;
                }
                let here = 6 * tet + pair;
                let there = 6 * g.to_tet + edge_index(g.perm[a], g.perm[b]);
                let (ra, rb) = (find(&mut parent, here), find(&mut parent, there));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
    }
    let mut label_of_root: HashMap<usize, usize> = HashMap::new();
    for (k, class) in declared.iter().enumerate() {
        for &(tet, pair) in &class.corners {
            let root = find(&mut parent, 6 * tet + pair);
            match label_of_root.get(&root) {
                Some(&other) if other != k => {
                    return Err(Error::Combinatorics(format!(
                        "declared edge classes {other} and {k} are the same edge of the gluing"
                    )))
                }
                _ => {
                    label_of_root.insert(root, k);
                }
            }
        }
    }
    let roots: std::collections::HashSet<usize> = (0..6 * n).map(|x| find(&mut parent, x)).collect();
    if roots.len() != declared.len() {
        return Err(Error::Combinatorics(format!(
            "face gluings produce {} edges but {} edge classes are declared",
            roots.len(),
            declared.len()
        )));
    }
    Ok(())
}
