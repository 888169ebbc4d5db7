//! Kohn sublaplacian on box domains of the Heisenberg group, discretized by
//! centered differences on a uniform grid with Dirichlet zero extension.
//!
//! Coordinates are (x_1..x_n, y_1..y_n, t). The left-invariant fields are
//! X_i = d/dx_i + (y_i/2) d/dt and Y_i = d/dy_i - (x_i/2) d/dt; the operator
//! is assembled as the Gram sum of the per-field difference matrices,
//! L = sum_i (A_{X_i}^T A_{X_i} + A_{Y_i}^T A_{Y_i}), scaled by the cell
//! volume. Symmetry and positive semidefiniteness hold by construction,
//! independent of the variable coefficients.

use crate::error::{Error, Result};
use crate::inequality::{build_report, InequalityReport, ReportInputs, Theorem};
use crate::solver::{solve_smallest, SolveConfig};
use crate::sparse::{CooMatrix, CsrMatrix};

/// Uniform grid over a box in R^{2n+1}; every lattice node is interior and
/// the exterior is treated as zero (Dirichlet).
#[derive(Debug, Clone)]
pub struct HeisenbergGrid {
    n: u32,
    lo: Vec<f64>,
    hi: Vec<f64>,
    /// Interior nodes per axis.
    counts: Vec<usize>,
    spacings: Vec<f64>,
}

impl HeisenbergGrid {
    /// Axes are ordered x_1..x_n, y_1..y_n, t.
    pub fn new(n: u32, lo: Vec<f64>, hi: Vec<f64>, counts: Vec<usize>) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("Heisenberg parameter n must be >= 1"));
        }
        let dims = 2 * n as usize + 1;
        if lo.len() != dims || hi.len() != dims || counts.len() != dims {
            return Err(Error::domain(format!(
                "expected {dims} axes (x, y, t) for n = {n}"
            )));
        }
        // odd interior counts admit an exact checkerboard kernel of the
        // centered-difference Gram (the alternating 1,0,1,..,1 vector is
        // annihilated per axis), so only even counts give lambda_1 > 0
        if counts.iter().any(|&c| c < 2 || c % 2 != 0) {
            return Err(Error::domain(
                "each axis needs an even interior node count >= 2 \
                 (odd counts make the centered-difference operator singular)",
            ));
        }
        let mut spacings = Vec::with_capacity(dims);
        for a in 0..dims {
            let len = hi[a] - lo[a];
            if !(len > 0.0) {
                return Err(Error::domain(format!("axis {a} has nonpositive extent")));
            }
            spacings.push(len / (counts[a] as f64 + 1.0));
        }
        Ok(HeisenbergGrid {
            n,
            lo,
            hi,
            counts,
            spacings,
        })
    }

    /// Cube [lo, hi]^{2n+1} with the same interior node count per axis.
    pub fn box_uniform(n: u32, lo: f64, hi: f64, count: usize) -> Result<Self> {
        let dims = 2 * n as usize + 1;
        HeisenbergGrid::new(n, vec![lo; dims], vec![hi; dims], vec![count; dims])
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn spacings(&self) -> &[f64] {
        &self.spacings
    }

    pub fn extents(&self) -> (&[f64], &[f64]) {
        (&self.lo, &self.hi)
    }

    pub fn num_nodes(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacings.iter().product()
    }

    /// Coordinate of interior node index i along an axis.
    pub fn coordinate(&self, axis: usize, i: usize) -> f64 {
        self.lo[axis] + (i as f64 + 1.0) * self.spacings[axis]
    }

    fn strides(&self) -> Vec<usize> {
        let dims = self.counts.len();
        let mut strides = vec![1usize; dims];
        for a in (0..dims.saturating_sub(1)).rev() {
            strides[a] = strides[a + 1] * self.counts[a + 1];
        }
        strides
    }
}

/// Assembled Kohn operator over the grid's interior nodes.
#[derive(Debug, Clone)]
pub struct KohnOperator {
    /// Volume-weighted Gram matrix; pair with `mass()` in the generalized
    /// eigenproblem.
    pub matrix: CsrMatrix,
    pub cell_volume: f64,
}

impl KohnOperator {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Diagonal mass: cell volume at every node.
    pub fn mass(&self) -> Vec<f64> {
        vec![self.cell_volume; self.dim()]
    }
}

/// Assemble L = sum_i (A_{X_i}^T A_{X_i} + A_{Y_i}^T A_{Y_i}) with centered
/// differences; variable coefficients are evaluated at the stencil center.
///
/// `freeze_coefficients` replaces the y_i/2 and -x_i/2 coefficients by zero
/// (used by the separable-oracle tests); production callers pass `false`.
pub fn assemble_kohn_with(grid: &HeisenbergGrid, freeze_coefficients: bool) -> Result<KohnOperator> {
    let n = grid.n as usize;
    let dims = 2 * n + 1;
    let t_axis = dims - 1;
    let total = grid.num_nodes();
    let strides = grid.strides();
    let vol = grid.cell_volume();

    let mut coo = CooMatrix::with_capacity(total, total * 16 * n);
    let mut index = vec![0usize; dims];
    // row entries of one difference operator at one node, reused per field
    let mut entries: Vec<(usize, f64)> = Vec::with_capacity(4);

    for node in 0..total {
        let mut rem = node;
        for a in 0..dims {
            index[a] = rem / strides[a];
            rem %= strides[a];
        }
        for i in 0..n {
            let x_axis = i;
            let y_axis = n + i;
            let xi = grid.coordinate(x_axis, index[x_axis]);
            let yi = grid.coordinate(y_axis, index[y_axis]);
            // (derivative axis, d/dt coefficient) of X_i and Y_i
            let fields = [
                (x_axis, if freeze_coefficients { 0.0 } else { yi / 2.0 }),
                (y_axis, if freeze_coefficients { 0.0 } else { -xi / 2.0 }),
            ];
            for &(axis, t_coeff) in &fields {
                entries.clear();
                for (ax, coeff) in [(axis, 1.0), (t_axis, t_coeff)] {
                    if coeff == 0.0 {
                        continue;
                    }
                    let weight = coeff / (2.0 * grid.spacings[ax]);
                    if index[ax] + 1 < grid.counts[ax] {
                        entries.push((node + strides[ax], weight));
                    }
                    if index[ax] >= 1 {
                        entries.push((node - strides[ax], -weight));
                    }
                }
                // Gram contribution of this row: vol * v_a v_b at (c_a, c_b)
                for &(ca, va) in &entries {
                    for &(cb, vb) in &entries {
                        coo.push(ca, cb, vol * va * vb);
                    }
                }
            }
        }
    }
    Ok(KohnOperator {
        matrix: coo.to_csr(),
        cell_volume: vol,
    })
}

/// Assemble the Kohn operator with the true Heisenberg coefficients.
pub fn assemble_kohn(grid: &HeisenbergGrid) -> Result<KohnOperator> {
    assemble_kohn_with(grid, false)
}

/// Solve the Dirichlet eigenproblem for the k smallest eigenvalues.
pub fn solve_kohn(grid: &HeisenbergGrid, k: usize, config: &SolveConfig) -> Result<Vec<f64>> {
    if k >= grid.num_nodes() {
        return Err(Error::domain(format!(
            "requested {k} eigenvalues of a {}-node grid",
            grid.num_nodes()
        )));
    }
    let op = assemble_kohn(grid)?;
    let cfg = SolveConfig {
        count: k,
        ..config.clone()
    };
    let sol = solve_smallest(&op.matrix, &op.mass(), &cfg)?;
    Ok(sol.eigenvalues)
}

/// Evaluate the Kohn gap inequality, the root bracket, and the averaged
/// upper bound on a computed spectrum.
pub fn check_theorem5(
    n: u32,
    eigenvalues: &[f64],
    k_range: (usize, usize),
    tolerance: f64,
    source: &str,
) -> Result<Vec<InequalityReport>> {
    let inputs = ReportInputs::Kohn { n, eigenvalues };
    Ok(vec![
        build_report(Theorem::KohnGap, &inputs, k_range, tolerance, source)?,
        build_report(Theorem::KohnBracket, &inputs, k_range, tolerance, source)?,
        build_report(Theorem::KohnSimple, &inputs, k_range, tolerance, source)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn grid_validation() {
        assert!(HeisenbergGrid::box_uniform(0, 0.0, 1.0, 4).is_err());
        assert!(HeisenbergGrid::box_uniform(1, 0.0, 1.0, 1).is_err());
        // odd counts are singular (checkerboard kernel) and rejected
        assert!(HeisenbergGrid::box_uniform(1, 0.0, 1.0, 7).is_err());
        assert!(HeisenbergGrid::new(1, vec![0.0; 3], vec![0.0; 3], vec![4; 3]).is_err());
        assert!(HeisenbergGrid::new(1, vec![0.0; 2], vec![1.0; 2], vec![4; 2]).is_err());
        let g = HeisenbergGrid::box_uniform(1, 0.0, 1.0, 4).unwrap();
        assert_eq!(g.num_nodes(), 64);
        assert!((g.spacings()[0] - 0.2).abs() < 1e-15);
        assert!((g.coordinate(0, 0) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn operator_is_exactly_symmetric_psd() {
        let g = HeisenbergGrid::box_uniform(1, 0.0, 1.0, 6).unwrap();
        let op = assemble_kohn(&g).unwrap();
        assert_eq!(op.matrix.symmetry_defect(), 0.0);
        let dense = op.matrix.to_dense();
        let eig = dense.symmetric_eigen();
        let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(min >= -1e-12 * op.matrix.max_abs());
    }

    #[test]
    fn frozen_coefficients_match_separable_oracle() {
        // with the t-coupling coefficients frozen to zero the operator is
        // (G_x (+) G_y) (x) I_t for the 1D centered-difference Gram G; its
        // spectrum is exactly the pairwise sums of 1D Gram eigenvalues
        let counts = 6usize;
        let nt = 4usize;
        let g = HeisenbergGrid::new(
            1,
            vec![0.0, 0.0, 0.0],
            vec![1.0, 1.0, 1.0],
            vec![counts, counts, nt],
        )
        .unwrap();
        let op = assemble_kohn_with(&g, true).unwrap();
        let vol = g.cell_volume();
        let h = g.spacings()[0];

        let mut a = DMatrix::zeros(counts, counts);
        for r in 0..counts {
            if r + 1 < counts {
                a[(r, r + 1)] = 1.0 / (2.0 * h);
            }
            if r >= 1 {
                a[(r, r - 1)] = -1.0 / (2.0 * h);
            }
        }
        let gram = a.transpose() * &a;
        let mut one_d: Vec<f64> = gram.symmetric_eigen().eigenvalues.iter().copied().collect();
        one_d.sort_by(f64::total_cmp);

        let mut expected: Vec<f64> = one_d
            .iter()
            .flat_map(|&ex| one_d.iter().map(move |&ey| ex + ey))
            .collect();
        expected.sort_by(f64::total_cmp);

        let dense = op.matrix.to_dense() / vol;
        let mut got: Vec<f64> = dense.symmetric_eigen().eigenvalues.iter().copied().collect();
        got.sort_by(f64::total_cmp);

        // every 2D eigenvalue appears nt times (trivial t factor)
        assert_eq!(got.len(), expected.len() * nt);
        for (i, &ex) in expected.iter().enumerate() {
            for j in 0..nt {
                let k = i * nt + j;
                assert!(
                    (got[k] - ex).abs() <= 1e-9 * ex.abs().max(1.0),
                    "eigenvalue {k}: {} vs {ex}",
                    got[k]
                );
            }
        }
    }

    #[test]
    fn dirichlet_positivity_and_ordering() {
        let g = HeisenbergGrid::box_uniform(1, 0.0, 1.0, 8).unwrap();
        let lams = solve_kohn(&g, 6, &SolveConfig::default()).unwrap();
        assert!(lams[0] > 0.0);
        for w in lams.windows(2) {
            assert!(w[0] <= w[1] + 1e-12);
        }
    }

    #[test]
    fn translation_in_t_leaves_spectrum() {
        // the coefficients do not involve t, so shifting the t-extent leaves
        // the assembled matrix identical
        let a =
            HeisenbergGrid::new(1, vec![0.0, 0.0, 0.0], vec![1.0, 1.0, 1.0], vec![6; 3]).unwrap();
        let b =
            HeisenbergGrid::new(1, vec![0.0, 0.0, 17.5], vec![1.0, 1.0, 18.5], vec![6; 3]).unwrap();
        let opa = assemble_kohn(&a).unwrap();
        let opb = assemble_kohn(&b).unwrap();
        let la = solve_smallest(&opa.matrix, &opa.mass(), &SolveConfig::with_count(5)).unwrap();
        let lb = solve_smallest(&opb.matrix, &opb.mass(), &SolveConfig::with_count(5)).unwrap();
        for (x, y) in la.eigenvalues.iter().zip(&lb.eigenvalues) {
            assert!((x - y).abs() <= 1e-8 * x.abs().max(1.0));
        }
    }

    #[test]
    fn domain_monotonicity_under_enlargement() {
        let small = HeisenbergGrid::box_uniform(1, 0.0, 1.0, 10).unwrap();
        let mid = HeisenbergGrid::box_uniform(1, 0.0, 1.25, 10).unwrap();
        let large = HeisenbergGrid::box_uniform(1, 0.0, 1.5, 10).unwrap();
        let cfg = SolveConfig::with_count(1);
        let l_small = solve_kohn(&small, 1, &cfg).unwrap()[0];
        let l_mid = solve_kohn(&mid, 1, &cfg).unwrap()[0];
        let l_large = solve_kohn(&large, 1, &cfg).unwrap()[0];
        assert!(
            l_small > l_mid && l_mid > l_large,
            "{l_small} {l_mid} {l_large}"
        );
    }

    #[test]
    fn grid_self_convergence() {
        let cfg = SolveConfig::with_count(1);
        let coarse =
            solve_kohn(&HeisenbergGrid::box_uniform(1, 0.0, 1.0, 12).unwrap(), 1, &cfg).unwrap()[0];
        let fine =
            solve_kohn(&HeisenbergGrid::box_uniform(1, 0.0, 1.0, 20).unwrap(), 1, &cfg).unwrap()[0];
        assert!((coarse - fine).abs() / fine < 0.05, "{coarse} vs {fine}");
    }

    #[test]
    fn theorem5_reports_on_box_spectrum() {
        let g = HeisenbergGrid::box_uniform(1, 0.0, 1.0, 10).unwrap();
        let lams = solve_kohn(&g, 8, &SolveConfig::with_count(8)).unwrap();
        let reports = check_theorem5(1, &lams, (1, 7), 1e-3, "unit box 10^3").unwrap();
        for rep in &reports {
            assert!(rep.all_satisfied(), "{:?}: {:#?}", rep.theorem, rep.rows);
        }
    }
}
