//! Triangle meshes isometrically immersed in R^m and the discrete operators
//! built from them.
//!
//! The stiffness matrix uses piecewise-linear (cotangent) weights computed
//! from edge lengths only, so any ambient dimension works. The mass matrix
//! is lumped barycentrically (one third of each incident triangle's area per
//! vertex). The discrete mean curvature vector is the mass-normalized image
//! of the coordinate functions under the operator, with the sign convention
//! that makes |h|^2 = n^2 on the unit sphere.
//!
//! Sup-norm curvature statistics are taken over *regular interior* vertices
//! (valence 6, off the boundary): the pointwise discrete curvature does not
//! converge at irregular or boundary vertices.

mod generators;
mod io;

pub use generators::{
    make_clifford_torus, make_disk, make_ellipsoid, make_flat_torus, make_icosphere,
    make_spherical_cap,
};
pub use io::{read_mesh, read_mesh_str, write_mesh, write_mesh_string};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::sparse::{CooMatrix, CsrMatrix};

/// A triangle mesh with vertex coordinates in R^m.
#[derive(Debug, Clone)]
pub struct ImmersedMesh {
    ambient_dim: usize,
    coords: Vec<f64>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<bool>,
    valence: Vec<u32>,
}

impl ImmersedMesh {
    /// Build and validate a mesh. `coords` is row-major, `ambient_dim`
    /// numbers per vertex. Boundary vertices are derived from edge
    /// incidence (edges belonging to exactly one triangle).
    pub fn new(ambient_dim: usize, coords: Vec<f64>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if ambient_dim < 2 {
            return Err(Error::domain("ambient dimension must be >= 2"));
        }
        if coords.is_empty() || coords.len() % ambient_dim != 0 {
            return Err(Error::domain(format!(
                "coordinate count {} is not a multiple of ambient dimension {ambient_dim}",
                coords.len()
            )));
        }
        let nv = coords.len() / ambient_dim;
        if triangles.is_empty() {
            return Err(Error::domain("mesh has no triangles"));
        }
        let mut valence = vec![0u32; nv];
        let mut edge_count: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        let mut directed: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            let [a, b, c] = *tri;
            if a >= nv || b >= nv || c >= nv {
                return Err(Error::domain(format!("triangle {t} references a missing vertex")));
            }
            if a == b || b == c || a == c {
                return Err(Error::domain(format!("triangle {t} repeats a vertex")));
            }
            valence[a] += 1;
            valence[b] += 1;
            valence[c] += 1;
            for (x, y) in [(a, b), (b, c), (c, a)] {
                *edge_count.entry((x.min(y), x.max(y))).or_insert(0) += 1;
                *directed.entry((x, y)).or_insert(0) += 1;
            }
        }
        for (&(x, y), &count) in &edge_count {
            if count > 2 {
                return Err(Error::domain(format!(
                    "edge ({x}, {y}) belongs to {count} triangles; mesh is not a manifold"
                )));
            }
        }
        if directed.values().any(|&c| c > 1) {
            return Err(Error::domain(
                "a directed edge repeats: triangle orientations are inconsistent",
            ));
        }
        let mut boundary = vec![false; nv];
        for (&(x, y), &count) in &edge_count {
            if count == 1 {
                boundary[x] = true;
                boundary[y] = true;
            }
        }
        let mesh = ImmersedMesh {
            ambient_dim,
            coords,
            triangles,
            boundary,
            valence,
        };
        // nondegeneracy up front; assembly re-checks and names the triangle
        for t in 0..mesh.triangles.len() {
            mesh.triangle_cotans(t)?;
        }
        Ok(mesh)
    }

    /// Intrinsic dimension of a triangle mesh.
    pub fn intrinsic_dim(&self) -> u32 {
        2
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn num_vertices(&self) -> usize {
        self.coords.len() / self.ambient_dim
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.coords[i * self.ambient_dim..(i + 1) * self.ambient_dim]
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn is_boundary_vertex(&self, i: usize) -> bool {
        self.boundary[i]
    }

    pub fn is_closed(&self) -> bool {
        !self.boundary.iter().any(|&b| b)
    }

    pub fn boundary_vertices(&self) -> Vec<usize> {
        (0..self.num_vertices()).filter(|&i| self.boundary[i]).collect()
    }

    pub fn interior_vertices(&self) -> Vec<usize> {
        (0..self.num_vertices()).filter(|&i| !self.boundary[i]).collect()
    }

    /// Interior vertices of regular valence (6), the ones where pointwise
    /// discrete curvature is trustworthy.
    pub fn regular_interior_vertices(&self) -> Vec<usize> {
        (0..self.num_vertices())
            .filter(|&i| !self.boundary[i] && self.valence[i] == 6)
            .collect()
    }

    /// Cotangents at the three corners (each opposite the respective edge)
    /// and the triangle area, from Gram quantities so any ambient dimension
    /// works.
    fn triangle_cotans(&self, t: usize) -> Result<([f64; 3], f64)> {
        let [a, b, c] = self.triangles[t];
        let pa = self.vertex(a);
        let pb = self.vertex(b);
        let pc = self.vertex(c);
        let m = self.ambient_dim;
        let mut dot_ab_ac = 0.0;
        let mut dot_ba_bc = 0.0;
        let mut dot_ca_cb = 0.0;
        let mut len_ab = 0.0;
        let mut len_ac = 0.0;
        for d in 0..m {
            let ab = pb[d] - pa[d];
            let ac = pc[d] - pa[d];
            let bc = pc[d] - pb[d];
            dot_ab_ac += ab * ac;
            dot_ba_bc += -ab * bc;
            dot_ca_cb += ac * bc;
            len_ab += ab * ab;
            len_ac += ac * ac;
        }
        let cross_sq = len_ab * len_ac - dot_ab_ac * dot_ab_ac;
        if cross_sq <= 0.0 || !cross_sq.is_finite() {
            return Err(Error::assembly(format!(
                "triangle {t} (vertices {a}, {b}, {c}) is degenerate"
            )));
        }
        let double_area = cross_sq.sqrt();
        Ok((
            [
                dot_ab_ac / double_area,
                dot_ba_bc / double_area,
                dot_ca_cb / double_area,
            ],
            0.5 * double_area,
        ))
    }
}

/// Stiffness/mass pair, optionally restricted to interior vertices.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    /// Symmetric positive semidefinite cotangent stiffness matrix.
    pub stiffness: CsrMatrix,
    /// Lumped (diagonal) mass matrix entries, all positive.
    pub mass: Vec<f64>,
    /// For a Dirichlet-restricted operator, `interior_map[row]` is the
    /// original vertex index of that row. `None` means unrestricted.
    pub interior_map: Option<Vec<usize>>,
}

impl DiscreteOperator {
    pub fn dim(&self) -> usize {
        self.stiffness.dim()
    }
}

/// Assemble the cotangent stiffness matrix and lumped mass matrix.
pub fn assemble_laplacian(mesh: &ImmersedMesh) -> Result<DiscreteOperator> {
    let nv = mesh.num_vertices();
    let mut coo = CooMatrix::with_capacity(nv, mesh.num_triangles() * 12);
    let mut mass = vec![0.0; nv];
    for t in 0..mesh.num_triangles() {
        let ([cot_a, cot_b, cot_c], area) = mesh.triangle_cotans(t)?;
        let [a, b, c] = mesh.triangles[t];
        for (i, j, w) in [(b, c, cot_a), (c, a, cot_b), (a, b, cot_c)] {
            let half = 0.5 * w;
            coo.push(i, j, -half);
            coo.push(j, i, -half);
            coo.push(i, i, half);
            coo.push(j, j, half);
        }
        let third = area / 3.0;
        mass[a] += third;
        mass[b] += third;
        mass[c] += third;
    }
    Ok(DiscreteOperator {
        stiffness: coo.to_csr(),
        mass,
        interior_map: None,
    })
}

/// Discrete mean curvature data derived from a mesh and its operator.
#[derive(Debug, Clone)]
pub struct MeanCurvatureField {
    /// Per-vertex curvature vectors, row-major in R^m.
    pub vectors: Vec<f64>,
    /// Per-vertex |h|^2.
    pub norm_sq: Vec<f64>,
    /// sup |h|^2 over regular interior vertices (all interior vertices when
    /// none are regular).
    pub sup_sq: f64,
    /// Mass-weighted mean of |h|^2, i.e. (1/V) int |h|^2.
    pub mean_sq: f64,
}

/// Compute the discrete mean curvature vector, the Laplacian image of the
/// coordinate functions: h_v = -(S X)_v / M_v per ambient coordinate.
pub fn mean_curvature(mesh: &ImmersedMesh, op: &DiscreteOperator) -> Result<MeanCurvatureField> {
    if op.interior_map.is_some() || op.dim() != mesh.num_vertices() {
        return Err(Error::precondition(
            "mean curvature needs the unrestricted operator of this mesh",
        ));
    }
    let nv = mesh.num_vertices();
    let m = mesh.ambient_dim();
    let mut vectors = vec![0.0; nv * m];
    let mut column = vec![0.0; nv];
    let mut image = vec![0.0; nv];
    for alpha in 0..m {
        for v in 0..nv {
            column[v] = mesh.vertex(v)[alpha];
        }
        op.stiffness.matvec(&column, &mut image);
        for v in 0..nv {
            vectors[v * m + alpha] = -image[v] / op.mass[v];
        }
    }
    let norm_sq: Vec<f64> = (0..nv)
        .map(|v| vectors[v * m..(v + 1) * m].iter().map(|x| x * x).sum())
        .collect();
    let trusted = {
        let reg = mesh.regular_interior_vertices();
        if reg.is_empty() {
            mesh.interior_vertices()
        } else {
            reg
        }
    };
    let sup_sq = trusted.iter().map(|&v| norm_sq[v]).fold(0.0f64, f64::max);
    let total_mass: f64 = op.mass.iter().sum();
    let mean_sq = norm_sq
        .iter()
        .zip(&op.mass)
        .map(|(h2, m)| h2 * m)
        .sum::<f64>()
        / total_mass;
    Ok(MeanCurvatureField {
        vectors,
        norm_sq,
        sup_sq,
        mean_sq,
    })
}

/// Bounded per-vertex potential.
#[derive(Debug, Clone)]
pub struct PotentialField {
    pub values: Vec<f64>,
}

impl PotentialField {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("potential values must be finite"));
        }
        Ok(PotentialField { values })
    }

    pub fn zero(nv: usize) -> Self {
        PotentialField {
            values: vec![0.0; nv],
        }
    }

    pub fn constant(nv: usize, c: f64) -> Result<Self> {
        Self::new(vec![c; nv])
    }

    /// q = g |h|^2, the geometric potential family.
    pub fn geometric(g: f64, curvature: &MeanCurvatureField) -> Result<Self> {
        Self::new(curvature.norm_sq.iter().map(|h2| g * h2).collect())
    }
}

/// H = S + M diag(q), the discrete Schrodinger operator.
pub fn assemble_schrodinger(op: &DiscreteOperator, q: &PotentialField) -> Result<CsrMatrix> {
    if q.values.len() != op.dim() {
        return Err(Error::precondition(format!(
            "potential has {} values for a dimension-{} operator",
            q.values.len(),
            op.dim()
        )));
    }
    let weighted: Vec<f64> = q.values.iter().zip(&op.mass).map(|(q, m)| q * m).collect();
    Ok(op.stiffness.add_diagonal(&weighted))
}

/// The curvature-vs-potential moments delta_i = sum_v (|h_v|^2/4 - q_v)
/// u_i(v)^2 M_v for M-orthonormal eigenvectors u_i (columns).
pub fn delta_integrals(
    eigvecs: &nalgebra::DMatrix<f64>,
    h_norm_sq: &[f64],
    q: &PotentialField,
    mass: &[f64],
) -> Result<Vec<f64>> {
    let nv = mass.len();
    if eigvecs.nrows() != nv || h_norm_sq.len() != nv || q.values.len() != nv {
        return Err(Error::precondition("delta integral inputs disagree on dimension"));
    }
    let mut out = Vec::with_capacity(eigvecs.ncols());
    for j in 0..eigvecs.ncols() {
        let mut norm = 0.0;
        let mut moment = 0.0;
        for v in 0..nv {
            let u2m = eigvecs[(v, j)] * eigvecs[(v, j)] * mass[v];
            norm += u2m;
            moment += (0.25 * h_norm_sq[v] - q.values[v]) * u2m;
        }
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::precondition(format!(
                "eigenvector {j} is not M-normalized: |u|_M^2 = {norm}"
            )));
        }
        out.push(moment);
    }
    Ok(out)
}

/// Remove boundary rows/columns, recording the interior index map.
/// A closed mesh passes through with the identity map.
pub fn apply_dirichlet(mesh: &ImmersedMesh, op: &DiscreteOperator) -> Result<DiscreteOperator> {
    if op.interior_map.is_some() {
        return Err(Error::precondition("operator is already restricted"));
    }
    if op.dim() != mesh.num_vertices() {
        return Err(Error::precondition("operator does not match mesh"));
    }
    let interior = mesh.interior_vertices();
    if interior.is_empty() {
        return Err(Error::domain("Dirichlet restriction leaves no interior vertices"));
    }
    if interior.len() == mesh.num_vertices() {
        return Ok(DiscreteOperator {
            stiffness: op.stiffness.clone(),
            mass: op.mass.clone(),
            interior_map: Some(interior),
        });
    }
    let stiffness = op.stiffness.restrict(&interior)?;
    let mass = interior.iter().map(|&v| op.mass[v]).collect();
    Ok(DiscreteOperator {
        stiffness,
        mass,
        interior_map: Some(interior),
    })
}

/// Candidate eigenmap: component functions into the unit sphere plus the
/// eigenvalue they claim to share.
#[derive(Debug, Clone)]
pub struct EigenmapData {
    /// One per-vertex scalar field per component.
    pub components: Vec<Vec<f64>>,
    pub lambda_map: f64,
}

/// Deviations of an eigenmap candidate from the defining identities.
#[derive(Debug, Clone)]
pub struct EigenmapValidation {
    /// max_v |sum_a phi_a(v)^2 - 1|
    pub max_norm_deviation: f64,
    /// max_T |sum_a |grad phi_a|^2 - lambda_map|
    pub max_energy_deviation: f64,
    pub norm_tolerance: f64,
    pub energy_tolerance: f64,
    pub pass: bool,
}

/// Check that the component fields square-sum to 1 at every vertex and that
/// the per-triangle energy density matches the claimed eigenvalue.
pub fn validate_eigenmap(
    mesh: &ImmersedMesh,
    data: &EigenmapData,
    norm_tolerance: f64,
    energy_tolerance: f64,
) -> Result<EigenmapValidation> {
    if data.components.len() < 2 {
        return Err(Error::domain("an eigenmap needs at least two components"));
    }
    let nv = mesh.num_vertices();
    for (a, comp) in data.components.iter().enumerate() {
        if comp.len() != nv {
            return Err(Error::precondition(format!(
                "component {a} has {} values for {nv} vertices",
                comp.len()
            )));
        }
    }
    let mut max_norm_deviation = 0.0f64;
    for v in 0..nv {
        let sq: f64 = data.components.iter().map(|c| c[v] * c[v]).sum();
        max_norm_deviation = max_norm_deviation.max((sq - 1.0).abs());
    }
    // energy density on a triangle: sum over corners of
    // cot * (opposite edge difference)^2 / (2 area)
    let mut max_energy_deviation = 0.0f64;
    for t in 0..mesh.num_triangles() {
        let ([cot_a, cot_b, cot_c], area) = mesh.triangle_cotans(t)?;
        let [a, b, c] = mesh.triangles()[t];
        let mut density = 0.0;
        for comp in &data.components {
            let quad = cot_a * (comp[b] - comp[c]).powi(2)
                + cot_b * (comp[c] - comp[a]).powi(2)
                + cot_c * (comp[a] - comp[b]).powi(2);
            density += 0.5 * quad / area;
        }
        max_energy_deviation = max_energy_deviation.max((density - data.lambda_map).abs());
    }
    Ok(EigenmapValidation {
        max_norm_deviation,
        max_energy_deviation,
        norm_tolerance,
        energy_tolerance,
        pass: max_norm_deviation <= norm_tolerance && max_energy_deviation <= energy_tolerance,
    })
}

#[cfg(test)]
mod tests;
