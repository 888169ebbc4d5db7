fn main() {
    let t = std::time::Instant::now();
    let grid = eigenineq::heisenberg::HeisenbergGrid::box_uniform(1, 0.0, 1.0, 32).unwrap();
    let lams = eigenineq::heisenberg::solve_kohn(&grid, 11, &eigenineq::solver::SolveConfig::default()).unwrap();
    println!("32^3 kohn k=11 in {:.1}s: {:?}", t.elapsed().as_secs_f64(), &lams[..6]);
    let t = std::time::Instant::now();
    let mesh = eigenineq::mesh::make_icosphere(4, 1.0).unwrap();
    let op = eigenineq::mesh::assemble_laplacian(&mesh).unwrap();
    let sol = eigenineq::solver::solve_smallest(&op.stiffness, &op.mass, &eigenineq::solver::SolveConfig::with_count(21)).unwrap();
    println!("icosphere4 k=21 in {:.1}s: iters {} lam2={:.6} lam21={:.4}", t.elapsed().as_secs_f64(), sol.iterations, sol.eigenvalues[1], sol.eigenvalues[20]);
}
