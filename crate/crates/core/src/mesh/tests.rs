use std::f64::consts::PI;

use super::*;
use crate::mesh::{
    make_clifford_torus, make_disk, make_flat_torus, make_icosphere, make_spherical_cap,
};
use crate::solver::{solve_smallest, SolveConfig};

fn smallest(op: &DiscreteOperator, count: usize) -> Vec<f64> {
    solve_smallest(&op.stiffness, &op.mass, &SolveConfig::with_count(count))
        .unwrap()
        .eigenvalues
}

#[test]
fn stiffness_is_exactly_symmetric_and_annihilates_constants() {
    for mesh in [
        make_icosphere(2, 1.0).unwrap(),
        make_clifford_torus(12).unwrap(),
    ] {
        let op = assemble_laplacian(&mesh).unwrap();
        assert_eq!(op.stiffness.symmetry_defect(), 0.0);
        assert!(op.mass.iter().all(|&m| m > 0.0));
        let ones = vec![1.0; op.dim()];
        let mut image = vec![0.0; op.dim()];
        op.stiffness.matvec(&ones, &mut image);
        let scale = op.stiffness.max_abs();
        for v in image {
            assert!(v.abs() <= 1e-12 * scale);
        }
    }
}

#[test]
fn degenerate_triangle_rejected_by_name() {
    // three collinear points
    let coords = vec![0.0, 0.0, 1.0, 0.0, 2.0, 0.0];
    let err = ImmersedMesh::new(2, coords, vec![[0, 1, 2]]).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("triangle 0"), "{msg}");
}

#[test]
fn icosphere_spectrum_matches_round_sphere() {
    let mesh = make_icosphere(3, 1.0).unwrap();
    let op = assemble_laplacian(&mesh).unwrap();
    let lams = smallest(&op, 10);
    assert!(lams[0].abs() < 1e-10, "closed mesh lambda_1 = {}", lams[0]);
    for &l in &lams[1..4] {
        assert!((l - 2.0).abs() / 2.0 < 0.01, "level-1 eigenvalue {l}");
    }
    for &l in &lams[4..9] {
        assert!((l - 6.0).abs() / 6.0 < 0.02, "level-2 eigenvalue {l}");
    }
}

#[test]
fn flat_torus_spectrum() {
    let mesh = make_flat_torus(2.0 * PI, 2.0 * PI, 32).unwrap();
    let op = assemble_laplacian(&mesh).unwrap();
    let lams = smallest(&op, 6);
    assert!(lams[0].abs() < 1e-10);
    for &l in &lams[1..5] {
        assert!((l - 1.0).abs() < 0.01, "first torus level {l}");
    }
}

#[test]
fn mean_curvature_sphere_and_torus() {
    let mesh = make_icosphere(3, 1.0).unwrap();
    let op = assemble_laplacian(&mesh).unwrap();
    let h = mean_curvature(&mesh, &op).unwrap();
    for &v in &mesh.regular_interior_vertices() {
        assert!((h.norm_sq[v] - 4.0).abs() / 4.0 < 0.02, "vertex {v}: {}", h.norm_sq[v]);
    }
    assert!((h.sup_sq - 4.0).abs() / 4.0 < 0.02);
    assert!((h.mean_sq - 4.0).abs() / 4.0 < 0.02);
    assert!(h.sup_sq >= h.mean_sq * 0.999);

    let torus = make_clifford_torus(24).unwrap();
    let op = assemble_laplacian(&torus).unwrap();
    let h = mean_curvature(&torus, &op).unwrap();
    for v in 0..torus.num_vertices() {
        assert!((h.norm_sq[v] - 4.0).abs() / 4.0 < 0.02, "vertex {v}: {}", h.norm_sq[v]);
    }
}

#[test]
fn mean_curvature_flat_patch_vanishes_inside() {
    // planar disk: the cotangent operator annihilates linear coordinates at
    // interior vertices
    let mesh = make_disk(8, 1.0).unwrap();
    let op = assemble_laplacian(&mesh).unwrap();
    let h = mean_curvature(&mesh, &op).unwrap();
    for &v in &mesh.interior_vertices() {
        assert!(h.norm_sq[v] < 1e-18, "interior vertex {v}: {}", h.norm_sq[v]);
    }
}

#[test]
fn schrodinger_zero_potential_is_stiffness() {
    let mesh = make_icosphere(1, 1.0).unwrap();
    let op = assemble_laplacian(&mesh).unwrap();
    let h = assemble_schrodinger(&op, &PotentialField::zero(op.dim())).unwrap();
    assert_eq!(h, op.stiffness);
}

#[test]
fn constant_potential_shifts_spectrum_exactly() {
    let mesh = make_icosphere(2, 1.0).unwrap();
    let op = assemble_laplacian(&mesh).unwrap();
    let c = 0.8125;
    let h = assemble_schrodinger(&op, &PotentialField::constant(op.dim(), c).unwrap()).unwrap();
    let base = smallest(&op, 6);
    let shifted = solve_smallest(&h, &op.mass, &SolveConfig::with_count(6))
        .unwrap()
        .eigenvalues;
    for (a, b) in base.iter().zip(&shifted) {
        assert!((a + c - b).abs() < 1e-10 * (1.0 + b.abs()), "{a} + c vs {b}");
    }
}

#[test]
fn quarter_curvature_potential_lifts_ground_state() {
    // q = |h|^2/4 on the sphere shifts lambda_1 from 0 to n^2/4 = 1
    let mesh = make_icosphere(3, 1.0).unwrap();
    let op = assemble_laplacian(&mesh).unwrap();
    let curv = mean_curvature(&mesh, &op).unwrap();
    let q = PotentialField::geometric(0.25, &curv).unwrap();
    let h = assemble_schrodinger(&op, &q).unwrap();
    let lams = solve_smallest(&h, &op.mass, &SolveConfig::with_count(1))
        .unwrap()
        .eigenvalues;
    assert!((lams[0] - 1.0).abs() < 0.02, "lambda_1 = {}", lams[0]);
}

#[test]
fn delta_integrals_sphere() {
    let mesh = make_icosphere(3, 1.0).unwrap();
    let op = assemble_laplacian(&mesh).unwrap();
    let curv = mean_curvature(&mesh, &op).unwrap();
    let sol = solve_smallest(&op.stiffness, &op.mass, &SolveConfig::with_count(5)).unwrap();

    // q = 0: delta_i ~ |h|^2/4 = 1
    let q0 = PotentialField::zero(op.dim());
    let deltas = delta_integrals(&sol.eigenvectors, &curv.norm_sq, &q0, &op.mass).unwrap();
    for d in &deltas {
        assert!((d - 1.0).abs() < 0.02, "delta = {d}");
    }
}

#[test]
fn delta_integrals_quarter_exactly_zero() {
    let mesh = make_icosphere(2, 1.0).unwrap();
    let op = assemble_laplacian(&mesh).unwrap();
    let curv = mean_curvature(&mesh, &op).unwrap();
    let sol = solve_smallest(&op.stiffness, &op.mass, &SolveConfig::with_count(4)).unwrap();
    let q = PotentialField::geometric(0.25, &curv).unwrap();
    let deltas = delta_integrals(&sol.eigenvectors, &curv.norm_sq, &q, &op.mass).unwrap();
    for d in deltas {
        assert_eq!(d, 0.0);
    }
}

#[test]
fn delta_integrals_sandwich() {
    // inf(|h|^2/4 - q) <= delta_i <= sup(|h|^2/4 - q) for an uneven q
    let mesh = make_icosphere(2, 1.0).unwrap();
    let op = assemble_laplacian(&mesh).unwrap();
    let curv = mean_curvature(&mesh, &op).unwrap();
    let q_vals: Vec<f64> = (0..op.dim()).map(|v| mesh.vertex(v)[2]).collect();
    let q = PotentialField::new(q_vals.clone()).unwrap();
    let h = assemble_schrodinger(&op, &q).unwrap();
    let sol = solve_smallest(&h, &op.mass, &SolveConfig::with_count(6)).unwrap();
    let deltas = delta_integrals(&sol.eigenvectors, &curv.norm_sq, &q, &op.mass).unwrap();
    let integrand: Vec<f64> = curv
        .norm_sq
        .iter()
        .zip(&q_vals)
        .map(|(h2, q)| 0.25 * h2 - q)
        .collect();
    let lo = integrand.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = integrand.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for d in deltas {
        assert!(d >= lo - 1e-12 && d <= hi + 1e-12, "{lo} <= {d} <= {hi}");
    }
}

#[test]
fn delta_integrals_reject_unnormalized() {
    let mesh = make_icosphere(1, 1.0).unwrap();
    let op = assemble_laplacian(&mesh).unwrap();
    let curv = mean_curvature(&mesh, &op).unwrap();
    let bad = nalgebra::DMatrix::from_element(op.dim(), 1, 1.0);
    let q = PotentialField::zero(op.dim());
    assert!(matches!(
        delta_integrals(&bad, &curv.norm_sq, &q, &op.mass),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn dirichlet_disk_hits_bessel_eigenvalue() {
    let mesh = make_disk(16, 1.0).unwrap();
    let op = assemble_laplacian(&mesh).unwrap();
    let restricted = apply_dirichlet(&mesh, &op).unwrap();
    assert!(restricted.dim() < op.dim());
    let map = restricted.interior_map.as_ref().unwrap();
    assert!(map.iter().all(|&v| !mesh.is_boundary_vertex(v)));
    let lams = smallest(&restricted, 2);
    let bessel = 5.783185962946785; // first zero of J_0, squared
    assert!(
        (lams[0] - bessel).abs() / bessel < 0.01,
        "disk lambda_1 = {}",
        lams[0]
    );
}

#[test]
fn dirichlet_cap_positive_and_hemisphere_value() {
    let cap = make_spherical_cap(PI / 2.0, 16).unwrap();
    let op = assemble_laplacian(&cap).unwrap();
    let restricted = apply_dirichlet(&cap, &op).unwrap();
    let lams = smallest(&restricted, 3);
    assert!(lams[0] > 0.0);
    // Dirichlet hemisphere: lambda_1 = 2 (restriction of the degree-1 harmonic)
    assert!((lams[0] - 2.0).abs() / 2.0 < 0.01, "cap lambda_1 = {}", lams[0]);
}

#[test]
fn dirichlet_on_closed_mesh_is_identity() {
    let mesh = make_icosphere(1, 1.0).unwrap();
    let op = assemble_laplacian(&mesh).unwrap();
    let restricted = apply_dirichlet(&mesh, &op).unwrap();
    assert_eq!(restricted.dim(), op.dim());
    assert_eq!(
        restricted.interior_map.as_deref().unwrap(),
        (0..op.dim()).collect::<Vec<_>>()
    );
}

#[test]
fn eigenmap_flat_torus_validates_and_refines() {
    let lambda_map = 1.0;
    for res in [16usize, 32] {
        let mesh = make_flat_torus(2.0 * PI, 2.0 * PI, res).unwrap();
        // the 2pi x 2pi embedding has unit radii, so the vertex coordinates
        // are exactly (cos x, sin x, cos y, sin y)
        let scale = 0.5f64.sqrt();
        let components: Vec<Vec<f64>> = (0..4)
            .map(|d| {
                (0..mesh.num_vertices())
                    .map(|v| mesh.vertex(v)[d] * scale)
                    .collect()
            })
            .collect();
        let data = EigenmapData {
            components,
            lambda_map,
        };
        let report = validate_eigenmap(&mesh, &data, 1e-9, 0.1).unwrap();
        assert!(report.pass, "res {res}: {report:?}");
        assert!(report.max_norm_deviation < 1e-12);
        // the components are linear in the embedding coordinates, so the
        // interpolated energy density is the tangential projection trace:
        // exactly the intrinsic dimension over 2, at every resolution
        assert!(
            report.max_energy_deviation < 1e-12,
            "res {res}: energy deviation {}",
            report.max_energy_deviation
        );
    }
}

#[test]
fn eigenmap_identity_map_of_icosphere() {
    let mesh = make_icosphere(2, 1.0).unwrap();
    let components: Vec<Vec<f64>> = (0..3)
        .map(|d| (0..mesh.num_vertices()).map(|v| mesh.vertex(v)[d]).collect())
        .collect();
    let data = EigenmapData {
        components,
        lambda_map: 2.0,
    };
    // the tangential gradient of the identity map has energy density exactly
    // the intrinsic dimension on every simplicial immersion
    let report = validate_eigenmap(&mesh, &data, 1e-12, 1e-9).unwrap();
    assert!(report.pass, "{report:?}");
}

#[test]
fn eigenmap_constant_map_fails_energy() {
    let mesh = make_icosphere(1, 1.0).unwrap();
    let ones = vec![1.0 / 2f64.sqrt(); mesh.num_vertices()];
    let data = EigenmapData {
        components: vec![ones.clone(), ones],
        lambda_map: 1.0,
    };
    let report = validate_eigenmap(&mesh, &data, 1e-9, 1e-3).unwrap();
    assert!(!report.pass);
    assert!(report.max_energy_deviation > 0.9);
}
