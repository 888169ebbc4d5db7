//! Test-geometry factory: spheres, ellipsoids, tori, disks and caps.

use std::collections::HashMap;
use std::f64::consts::PI;

use super::ImmersedMesh;
use crate::error::{Error, Result};

/// Icosahedron subdivided `subdivisions` times with vertices projected onto
/// the sphere of the given radius. 12 vertices and 20 triangles at level 0;
/// each level quadruples the triangle count.
pub fn make_icosphere(subdivisions: u32, radius: f64) -> Result<ImmersedMesh> {
    if !(radius > 0.0) {
        return Err(Error::domain("icosphere radius must be positive"));
    }
    if subdivisions > 8 {
        return Err(Error::domain("icosphere subdivision level above 8 is unsupported"));
    }
    let (coords, triangles) = unit_icosphere(subdivisions);
    let coords = coords.iter().map(|x| x * radius).collect();
    ImmersedMesh::new(3, coords, triangles)
}

/// Icosphere vertices scaled per axis: an ellipsoid with semi-axes a, b, c.
pub fn make_ellipsoid(a: f64, b: f64, c: f64, subdivisions: u32) -> Result<ImmersedMesh> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return Err(Error::domain("ellipsoid semi-axes must be positive"));
    }
    if subdivisions > 8 {
        return Err(Error::domain("ellipsoid subdivision level above 8 is unsupported"));
    }
    let (coords, triangles) = unit_icosphere(subdivisions);
    let scaled = coords
        .chunks(3)
        .flat_map(|p| [p[0] * a, p[1] * b, p[2] * c])
        .collect();
    ImmersedMesh::new(3, scaled, triangles)
}

fn unit_icosphere(subdivisions: u32) -> (Vec<f64>, Vec<[usize; 3]>) {
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let raw: [[f64; 3]; 12] = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    let mut verts: Vec<[f64; 3]> = raw.iter().map(|p| normalize(*p)).collect();
    let mut tris: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(tris.len() * 4);
        for [a, b, c] in tris {
            let ab = edge_midpoint(&mut verts, &mut midpoint, a, b);
            let bc = edge_midpoint(&mut verts, &mut midpoint, b, c);
            let ca = edge_midpoint(&mut verts, &mut midpoint, c, a);
            next.push([a, ab, ca]);
            next.push([b, bc, ab]);
            next.push([c, ca, bc]);
            next.push([ab, bc, ca]);
        }
        tris = next;
    }
    (verts.into_iter().flatten().collect(), tris)
}

fn normalize(p: [f64; 3]) -> [f64; 3] {
    let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    [p[0] / norm, p[1] / norm, p[2] / norm]
}

fn edge_midpoint(
    verts: &mut Vec<[f64; 3]>,
    cache: &mut HashMap<(usize, usize), usize>,
    a: usize,
    b: usize,
) -> usize {
    let key = (a.min(b), a.max(b));
    if let Some(&idx) = cache.get(&key) {
        return idx;
    }
    let pa = verts[a];
    let pb = verts[b];
    let mid = normalize([pa[0] + pb[0], pa[1] + pb[1], pa[2] + pb[2]]);
    verts.push(mid);
    let idx = verts.len() - 1;
    cache.insert(key, idx);
    idx
}

/// Flat rectangular torus of circumferences lx, ly, embedded in R^4 as the
/// product of two circles of radii lx/2pi and ly/2pi. The embedding is
/// isometric, so the induced metric is the flat one.
pub fn make_flat_torus(lx: f64, ly: f64, resolution: usize) -> Result<ImmersedMesh> {
    if !(lx > 0.0 && ly > 0.0) {
        return Err(Error::domain("torus circumferences must be positive"));
    }
    if resolution < 3 {
        return Err(Error::domain("torus resolution must be at least 3"));
    }
    let r1 = lx / (2.0 * PI);
    let r2 = ly / (2.0 * PI);
    let n = resolution;
    let mut coords = Vec::with_capacity(n * n * 4);
    for i in 0..n {
        let u = 2.0 * PI * i as f64 / n as f64;
        for j in 0..n {
            let v = 2.0 * PI * j as f64 / n as f64;
            coords.extend_from_slice(&[
                r1 * u.cos(),
                r1 * u.sin(),
                r2 * v.cos(),
                r2 * v.sin(),
            ]);
        }
    }
    let idx = |i: usize, j: usize| (i % n) * n + (j % n);
    let mut triangles = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            let p00 = idx(i, j);
            let p10 = idx(i + 1, j);
            let p11 = idx(i + 1, j + 1);
            let p01 = idx(i, j + 1);
            triangles.push([p00, p10, p11]);
            triangles.push([p00, p11, p01]);
        }
    }
    ImmersedMesh::new(4, coords, triangles)
}

/// The minimal torus in the unit 3-sphere: product of two circles of radius
/// 1/sqrt(2) in R^4. Every vertex lies on the unit sphere of R^4.
pub fn make_clifford_torus(resolution: usize) -> Result<ImmersedMesh> {
    let side = PI * 2.0f64.sqrt(); // 2 pi / sqrt(2)
    make_flat_torus(side, side, resolution)
}

/// Hexagonal-pattern triangulation of the disk of the given radius in R^2:
/// ring j of `rings` carries 6j vertices. The outer ring is the boundary.
pub fn make_disk(rings: usize, radius: f64) -> Result<ImmersedMesh> {
    if rings < 1 {
        return Err(Error::domain("disk needs at least one ring"));
    }
    if !(radius > 0.0) {
        return Err(Error::domain("disk radius must be positive"));
    }
    let (param, triangles) = hex_disk_parametrization(rings);
    let coords = param
        .iter()
        .flat_map(|&(r, angle)| {
            let rr = radius * r;
            [rr * angle.cos(), rr * angle.sin()]
        })
        .collect();
    ImmersedMesh::new(2, coords, triangles)
}

/// Geodesic cap of the unit sphere around the north pole with the given
/// opening angle (radians, in (0, pi)); the disk pattern is mapped by
/// polar angle proportional to parameter radius.
pub fn make_spherical_cap(angle: f64, rings: usize) -> Result<ImmersedMesh> {
    if !(angle > 0.0 && angle < PI) {
        return Err(Error::domain("cap opening angle must lie in (0, pi)"));
    }
    if rings < 1 {
        return Err(Error::domain("cap needs at least one ring"));
    }
    let (param, triangles) = hex_disk_parametrization(rings);
    let coords = param
        .iter()
        .flat_map(|&(r, phi)| {
            let theta = angle * r;
            [
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
            ]
        })
        .collect();
    ImmersedMesh::new(3, coords, triangles)
}

/// Shared hexagonal disk layout: per-vertex (radius in [0,1], angle) plus
/// the triangulation. Ring j (1-based) starts at index 1 + 3j(j-1) and has
/// 6j vertices.
fn hex_disk_parametrization(rings: usize) -> (Vec<(f64, f64)>, Vec<[usize; 3]>) {
    let offset = |j: usize| 1 + 3 * j * (j - 1);
    let mut param = vec![(0.0, 0.0)];
    for j in 1..=rings {
        let count = 6 * j;
        for t in 0..count {
            param.push((j as f64 / rings as f64, 2.0 * PI * t as f64 / count as f64));
        }
    }
    let mut triangles = Vec::with_capacity(6 * rings * rings);
    for t in 0..6 {
        triangles.push([0, 1 + t, 1 + (t + 1) % 6]);
    }
    for j in 2..=rings {
        let (oj, oi) = (offset(j), offset(j - 1));
        let (nj, ni) = (6 * j, 6 * (j - 1));
        for s in 0..6 {
            for t in 0..j {
                let o1 = oj + (s * j + t) % nj;
                let o2 = oj + (s * j + t + 1) % nj;
                let i1 = oi + (s * (j - 1) + t) % ni;
                triangles.push([o1, o2, i1]);
            }
            for t in 0..j - 1 {
                let i1 = oi + (s * (j - 1) + t) % ni;
                let i2 = oi + (s * (j - 1) + t + 1) % ni;
                let o2 = oj + (s * j + t + 1) % nj;
                triangles.push([i1, o2, i2]);
            }
        }
    }
    (param, triangles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn icosahedron_combinatorics() {
        let m = make_icosphere(0, 1.0).unwrap();
        assert_eq!(m.num_vertices(), 12);
        assert_eq!(m.num_triangles(), 20);
        assert!(m.is_closed());
    }

    #[test]
    fn icosphere_counts_and_radius() {
        let m = make_icosphere(3, 2.0).unwrap();
        assert_eq!(m.num_vertices(), 642);
        assert_eq!(m.num_triangles(), 1280);
        for v in 0..m.num_vertices() {
            let p = m.vertex(v);
            let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            assert!((r - 2.0).abs() < 1e-12);
        }
        // exactly the 12 original vertices are irregular
        assert_eq!(m.regular_interior_vertices().len(), 642 - 12);
    }

    #[test]
    fn disk_has_boundary() {
        let m = make_disk(5, 1.0).unwrap();
        assert!(!m.is_closed());
        assert_eq!(m.boundary_vertices().len(), 30);
        assert_eq!(m.num_vertices(), 1 + 3 * 5 * 6);
        assert_eq!(m.num_triangles(), 6 * 25);
        // Euler characteristic of the disk
        let v = m.num_vertices() as i64;
        let f = m.num_triangles() as i64;
        let e = (3 * f + m.boundary_vertices().len() as i64) / 2;
        assert_eq!(v - e + f, 1);
    }

    #[test]
    fn clifford_torus_on_unit_sphere() {
        let m = make_clifford_torus(16).unwrap();
        assert!(m.is_closed());
        assert_eq!(m.num_vertices(), 256);
        for v in 0..m.num_vertices() {
            let p = m.vertex(v);
            let norm_sq: f64 = p.iter().map(|x| x * x).sum();
            assert!((norm_sq - 1.0).abs() < 1e-12, "vertex {v} off the 3-sphere");
        }
        // grid torus is fully regular
        assert_eq!(m.regular_interior_vertices().len(), 256);
    }

    #[test]
    fn cap_is_on_sphere_with_boundary() {
        let m = make_spherical_cap(PI / 2.0, 6).unwrap();
        assert!(!m.is_closed());
        for v in 0..m.num_vertices() {
            let p = m.vertex(v);
            let norm: f64 = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn generator_domain_errors() {
        assert!(make_icosphere(0, 0.0).is_err());
        assert!(make_disk(0, 1.0).is_err());
        assert!(make_flat_torus(1.0, 1.0, 2).is_err());
        assert!(make_spherical_cap(0.0, 4).is_err());
        assert!(make_spherical_cap(PI, 4).is_err());
        assert!(make_ellipsoid(1.0, -1.0, 1.0, 2).is_err());
    }
}
