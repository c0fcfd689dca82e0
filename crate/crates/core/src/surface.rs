//! Level surfaces of the closed-form discord over the coefficient cube.
//!
//! The field is sampled on an odd grid over `[−1, 1]³` so the origin is a
//! sample. Surfaces come from marching tetrahedra: each grid cell is split
//! into six tetrahedra along its main diagonal and the level set is linearly
//! interpolated on tetrahedron edges. That split maps onto itself under
//! `v ↦ −v` and under axis permutations, so symmetries of the field carry
//! over to the mesh. Tetrahedra touching an unphysical sample are skipped.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::discord::closed_form_discord;
use crate::error::{invalid, Error, Result};
use crate::family::{is_physical, FamilyCoefficients};
use crate::numfmt::sci17;

pub const DEFAULT_RESOLUTION: usize = 61;

/// Discord samples on a `resolution³` grid; NaN marks unphysical points.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    num_qubits: usize,
    resolution: usize,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn spacing(&self) -> f64 {
        2.0 / (self.resolution - 1) as f64
    }

    /// Grid coordinate `(i − h)/h` with `h = (resolution − 1)/2`.
    pub fn coordinate(&self, i: usize) -> f64 {
        grid_coordinate(i, self.resolution)
    }

    pub fn point(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        [self.coordinate(i), self.coordinate(j), self.coordinate(k)]
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.resolution + j) * self.resolution + k
    }

    /// `None` at unphysical points.
    pub fn value(&self, i: usize, j: usize, k: usize) -> Option<f64> {
        let v = self.values[self.index(i, j, k)];
        (!v.is_nan()).then_some(v)
    }

    pub fn max_value(&self) -> Option<f64> {
        self.values
            .iter()
            .copied()
            .filter(|v| !v.is_nan())
            .max_by(f64::total_cmp)
    }

    /// Largest `|ΔD| / spacing` between neighbouring physical samples.
    pub fn lipschitz_estimate(&self) -> f64 {
        let r = self.resolution;
        let mut best = 0.0f64;
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let Some(v) = self.value(i, j, k) else {
                        continue;
                    };
                    for (a, b, c) in [(i + 1, j, k), (i, j + 1, k), (i, j, k + 1)] {
                        if a < r && b < r && c < r {
                            if let Some(w) = self.value(a, b, c) {
                                best = best.max((w - v).abs());
                            }
                        }
                    }
                }
            }
        }
        best / self.spacing()
    }

    pub fn physical_count(&self) -> usize {
        self.values.iter().filter(|v| !v.is_nan()).count()
    }
}

fn grid_coordinate(i: usize, resolution: usize) -> f64 {
    let h = ((resolution - 1) / 2) as f64;
    (i as f64 - h) / h
}

pub fn sample_field(num_qubits: usize, resolution: usize) -> Result<ScalarField> {
    if resolution < 3 || resolution.is_multiple_of(2) {
        return invalid(format!(
            "resolution must be odd and at least 3, got {resolution}"
        ));
    }
    FamilyCoefficients::new(num_qubits, 0.0, 0.0, 0.0)?;
    let r = resolution;
    let values = (0..r * r * r)
        .into_par_iter()
        .map(|idx| {
            let (i, j, k) = (idx / (r * r), (idx / r) % r, idx % r);
            let fc = FamilyCoefficients::new(
                num_qubits,
                grid_coordinate(i, r),
                grid_coordinate(j, r),
                grid_coordinate(k, r),
            )
            .expect("grid lies in the cube");
            if is_physical(&fc) {
                closed_form_discord(&fc).map_or(f64::NAN, |rep| rep.value_bits)
            } else {
                f64::NAN
            }
        })
        .collect();
    Ok(ScalarField {
        num_qubits,
        resolution,
        values,
    })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TriangleMesh {
    pub vertices: Vec<[f64; 3]>,
    /// Counter-clockwise when seen from the higher-discord side.
    pub triangles: Vec<[usize; 3]>,
}

impl TriangleMesh {
    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| 0.5 * norm(cross_at(&self.vertices, t)))
            .sum()
    }

    /// Number of edge-connected triangle groups.
    pub fn connected_components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for t in &self.triangles {
            for e in [(t[0], t[1]), (t[1], t[2])] {
                let (a, b) = (find(&mut parent, e.0), find(&mut parent, e.1));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut roots: Vec<usize> = self
            .triangles
            .iter()
            .map(|t| find(&mut parent, t[0]))
            .collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }

    /// Largest max-norm distance from `−v` to the nearest vertex, over all
    /// vertices `v`; zero for a centrally symmetric vertex set.
    pub fn central_symmetry_defect(&self) -> f64 {
        const BUCKET: f64 = 1e-6;
        let key = |v: &[f64; 3]| v.map(|x| (x / BUCKET).round() as i64);
        let mut buckets: HashMap<[i64; 3], Vec<[f64; 3]>> = HashMap::new();
        for v in &self.vertices {
            buckets.entry(key(v)).or_default().push(*v);
        }
        let nearest = |m: [f64; 3]| {
            let base = key(&m);
            let mut best = f64::INFINITY;
            for d in 0..27 {
                let k = [
                    base[0] + d % 3 - 1,
                    base[1] + (d / 3) % 3 - 1,
                    base[2] + d / 9 - 1,
                ];
                for w in buckets.get(&k).into_iter().flatten() {
                    best = best.min(max_norm_diff(w, &m));
                }
            }
            if best.is_finite() {
                best
            } else {
                // Nothing within a bucket: fall back to a full scan.
                self.vertices
                    .iter()
                    .map(|w| max_norm_diff(w, &m))
                    .fold(f64::INFINITY, f64::min)
            }
        };
        self.vertices
            .iter()
            .map(|v| nearest(v.map(|x| -x)))
            .fold(0.0, f64::max)
    }

    /// `v x y z` and 1-based `f i j k` lines; empty for an empty mesh.
    pub fn to_obj(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            let _ = writeln!(out, "v {} {} {}", sci17(v[0]), sci17(v[1]), sci17(v[2]));
        }
        for t in &self.triangles {
            let _ = writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
        }
        out
    }

    pub fn from_obj(text: &str) -> Result<Self> {
        let mut mesh = TriangleMesh::default();
        for (lineno, line) in text.lines().enumerate() {
            let mut parts = line.split_whitespace();
            let bad = || Error::Parse(format!("OBJ line {}: {line:?}", lineno + 1));
            match parts.next() {
                Some("v") => {
                    let mut v = [0.0; 3];
                    for x in &mut v {
                        *x = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
                    }
                    mesh.vertices.push(v);
                }
                Some("f") => {
                    let mut t = [0usize; 3];
                    for x in &mut t {
                        let i: usize = parts
                            .next()
                            .and_then(|s| s.split('/').next()?.parse().ok())
                            .ok_or_else(bad)?;
                        if i == 0 {
                            return Err(bad());
                        }
                        *x = i - 1;
                    }
                    mesh.triangles.push(t);
                }
                None => {}
                Some(s) if s.starts_with('#') => {}
                Some(_) => return Err(bad()),
            }
        }
        if mesh
            .triangles
            .iter()
            .flatten()
            .any(|&i| i >= mesh.vertices.len())
        {
            return Err(Error::Parse("face index past the vertex list".into()));
        }
        Ok(mesh)
    }

    /// Header `x,y,z,triangle_id`, then three rows per triangle.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,z,triangle_id\n");
        for (id, t) in self.triangles.iter().enumerate() {
            for &i in t {
                let v = self.vertices[i];
                let _ = writeln!(out, "{},{},{},{id}", sci17(v[0]), sci17(v[1]), sci17(v[2]));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Csv,
}

impl std::str::FromStr for MeshFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "obj" => Ok(Self::Obj),
            "csv" => Ok(Self::Csv),
            _ => Err(Error::Parse(format!("unknown mesh format {s:?} (obj|csv)"))),
        }
    }
}

pub fn export_mesh(mesh: &TriangleMesh, format: MeshFormat, path: &Path) -> Result<()> {
    let text = match format {
        MeshFormat::Obj => mesh.to_obj(),
        MeshFormat::Csv => mesh.to_csv(),
    };
    fs::write(path, text)?;
    Ok(())
}

/// Corner offsets of a cell by bit: bit 0 → first axis, bit 1 → second, bit 2 → third.
const KUHN_TETS: [[usize; 4]; 6] = [
    [0, 1, 3, 7],
    [0, 1, 5, 7],
    [0, 2, 3, 7],
    [0, 2, 6, 7],
    [0, 4, 5, 7],
    [0, 4, 6, 7],
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum VertexKey {
    Sample(usize),
    Edge(usize, usize),
}

struct Corner {
    id: usize,
    pos: [f64; 3],
    value: f64,
}

struct Builder {
    level: f64,
    mesh: TriangleMesh,
    index: HashMap<VertexKey, usize>,
}

impl Builder {
    fn vertex(&mut self, a: &Corner, b: &Corner) -> usize {
        let (a, b) = if a.id < b.id { (a, b) } else { (b, a) };
        let t = (self.level - a.value) / (b.value - a.value);
        let key = if t <= 0.0 {
            VertexKey::Sample(a.id)
        } else if t >= 1.0 {
            VertexKey::Sample(b.id)
        } else {
            VertexKey::Edge(a.id, b.id)
        };
        let pos = match key {
            VertexKey::Sample(id) if id == a.id => a.pos,
            VertexKey::Sample(_) => b.pos,
            VertexKey::Edge(..) => std::array::from_fn(|d| a.pos[d] + t * (b.pos[d] - a.pos[d])),
        };
        let mesh = &mut self.mesh;
        *self.index.entry(key).or_insert_with(|| {
            mesh.vertices.push(pos);
            mesh.vertices.len() - 1
        })
    }

    fn triangle(&mut self, tri: [usize; 3], above: [f64; 3]) {
        if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
            return;
        }
        let n = cross_at(&self.mesh.vertices, &tri);
        let a = self.mesh.vertices[tri[0]];
        let side: f64 = (0..3).map(|d| n[d] * (above[d] - a[d])).sum();
        let tri = if side < 0.0 {
            [tri[0], tri[2], tri[1]]
        } else {
            tri
        };
        self.mesh.triangles.push(tri);
    }

    fn tetrahedron(&mut self, c: [&Corner; 4]) {
        let (hi, lo): (Vec<&Corner>, Vec<&Corner>) = c.iter().partition(|k| k.value > self.level);
        let above = match hi.first() {
            Some(k) => k.pos,
            None => return,
        };
        match (hi.len(), lo.len()) {
            (1, 3) => {
                let t = [
                    self.vertex(hi[0], lo[0]),
                    self.vertex(hi[0], lo[1]),
                    self.vertex(hi[0], lo[2]),
                ];
                self.triangle(t, above);
            }
            (3, 1) => {
                let t = [
                    self.vertex(lo[0], hi[0]),
                    self.vertex(lo[0], hi[1]),
                    self.vertex(lo[0], hi[2]),
                ];
                self.triangle(t, above);
            }
            (2, 2) => {
                let q = [
                    self.vertex(hi[0], lo[0]),
                    self.vertex(hi[0], lo[1]),
                    self.vertex(hi[1], lo[1]),
                    self.vertex(hi[1], lo[0]),
                ];
                self.triangle([q[0], q[1], q[2]], above);
                self.triangle([q[0], q[2], q[3]], above);
            }
            _ => {}
        }
    }
}

/// Which grid pieces are dropped when a sample is unphysical.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Clipping {
    /// Skip every cell with an unphysical corner.
    Cell,
    /// Skip only the tetrahedra with an unphysical corner. The physical
    /// region is convex, so kept tetrahedra still lie inside it, and far
    /// less surface is lost along slanted boundary faces.
    #[default]
    Tetrahedron,
}

/// Triangulated `{D = level}` with the default clipping rule.
pub fn extract_isosurface(field: &ScalarField, level: f64) -> Result<TriangleMesh> {
    extract_isosurface_with(field, level, Clipping::default())
}

/// Vertices are emitted in cell order, so the output is a pure function of
/// the field, level and clipping rule.
pub fn extract_isosurface_with(
    field: &ScalarField,
    level: f64,
    clipping: Clipping,
) -> Result<TriangleMesh> {
    if level.is_nan() || level <= 0.0 {
        return invalid(format!("level must be positive, got {level}"));
    }
    let r = field.resolution;
    let mut b = Builder {
        level,
        mesh: TriangleMesh::default(),
        index: HashMap::new(),
    };
    for i in 0..r - 1 {
        for j in 0..r - 1 {
            for k in 0..r - 1 {
                let corners: [Option<Corner>; 8] = std::array::from_fn(|bits| {
                    let (ci, cj, ck) = (i + (bits & 1), j + ((bits >> 1) & 1), k + (bits >> 2));
                    field.value(ci, cj, ck).map(|value| Corner {
                        id: field.index(ci, cj, ck),
                        pos: field.point(ci, cj, ck),
                        value,
                    })
                });
                if clipping == Clipping::Cell && corners.iter().any(Option::is_none) {
                    continue;
                }
                for tet in KUHN_TETS {
                    if let [Some(a), Some(b2), Some(c), Some(d)] = tet.map(|c| corners[c].as_ref())
                    {
                        b.tetrahedron([a, b2, c, d]);
                    }
                }
            }
        }
    }
    Ok(b.mesh)
}

fn cross_at(v: &[[f64; 3]], t: &[usize; 3]) -> [f64; 3] {
    let (a, b, c) = (v[t[0]], v[t[1]], v[t[2]]);
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let w = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    [
        u[1] * w[2] - u[2] * w[1],
        u[2] * w[0] - u[0] * w[2],
        u[0] * w[1] - u[1] * w[0],
    ]
}

fn max_norm_diff(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (0..3).map(|d| (a[d] - b[d]).abs()).fold(0.0, f64::max)
}

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}
