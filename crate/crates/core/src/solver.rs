//! Smallest-k eigenpair computation for sparse symmetric generalized
//! problems H u = lambda M u with diagonal positive M, plus a dense
//! matrix-level verifier of the abstract commutator gap lemma.
//!
//! The generalized problem is reduced to a standard symmetric one through
//! M^{-1/2} scaling. Small problems go through a dense eigendecomposition;
//! larger ones use a block preconditioned iteration (LOBPCG with Jacobi
//! preconditioning and full basis orthonormalization). Both paths are
//! deterministic for a fixed seed.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// Problems at or below this dimension are solved densely.
pub const DENSE_CUTOFF: usize = 700;

/// Relative symmetry defect above which a matrix is rejected.
const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SolveConfig {
    /// Number of smallest eigenpairs requested.
    pub count: usize,
    /// Residual tolerance: each pair satisfies
    /// ||H u - lambda M u|| <= tol * max(1, |lambda|) with ||u||_M = 1.
    pub tol: f64,
    pub max_iter: usize,
    /// Seed for the starting block of the iterative path.
    pub seed: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            count: 6,
            tol: 1e-8,
            max_iter: 800,
            seed: 7,
        }
    }
}

impl SolveConfig {
    pub fn with_count(count: usize) -> Self {
        SolveConfig {
            count,
            ..SolveConfig::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct EigenSolution {
    /// Ascending eigenvalues, length = requested count.
    pub eigenvalues: Vec<f64>,
    /// M-orthonormal eigenvectors, one column per eigenvalue.
    pub eigenvectors: DMatrix<f64>,
    /// Generalized residual norms ||H u - lambda M u||.
    pub residual_norms: Vec<f64>,
    pub iterations: usize,
}

/// Recomputed residuals and orthonormality defects for a solution.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub residual_norms: Vec<f64>,
    /// max |u_i^T M u_j - delta_ij|
    pub ortho_defect: f64,
}

fn validate_inputs(h: &CsrMatrix, mass: &[f64], cfg: &SolveConfig) -> Result<()> {
    if h.dim() != mass.len() {
        return Err(Error::precondition(format!(
            "matrix dim {} does not match mass length {}",
            h.dim(),
            mass.len()
        )));
    }
    if mass.iter().any(|&m| !(m > 0.0)) {
        return Err(Error::precondition("mass matrix entries must be positive"));
    }
    if cfg.count < 1 || cfg.count > h.dim() {
        return Err(Error::domain(format!(
            "requested {} eigenpairs of a dimension-{} problem",
            cfg.count,
            h.dim()
        )));
    }
    if !(cfg.tol > 0.0) {
        return Err(Error::domain("solver tolerance must be positive"));
    }
    let defect = h.symmetry_defect();
    if defect > SYMMETRY_TOL * h.max_abs().max(1.0) {
        return Err(Error::precondition(format!(
            "matrix is not symmetric: defect {defect:.3e}"
        )));
    }
    Ok(())
}

/// Compute the `count` smallest generalized eigenpairs of (H, diag(mass)).
pub fn solve_smallest(h: &CsrMatrix, mass: &[f64], cfg: &SolveConfig) -> Result<EigenSolution> {
    validate_inputs(h, mass, cfg)?;
    let dim = h.dim();
    let inv_sqrt_m: Vec<f64> = mass.iter().map(|&m| 1.0 / m.sqrt()).collect();
    let scaled = h.scale_sym(&inv_sqrt_m);
    // residuals transform through D^{1/2} when unscaling
    let unscale_growth = mass.iter().copied().fold(0.0f64, f64::max).sqrt().max(1.0);

    let block = (cfg.count + (cfg.count / 2).max(6)).min(dim);
    let (theta, x, iterations) = if dim <= DENSE_CUTOFF || 3 * block + 2 >= dim {
        let (t, v) = dense_smallest(&scaled.to_dense(), cfg.count)?;
        (t, v, 0)
    } else {
        lobpcg(&scaled, cfg, block, unscale_growth)?
    };

    // unscale: u = M^{-1/2} x keeps M-orthonormality exactly
    let mut vectors = DMatrix::zeros(dim, cfg.count);
    for j in 0..cfg.count {
        for i in 0..dim {
            vectors[(i, j)] = x[(i, j)] * inv_sqrt_m[i];
        }
    }
    let eigenvalues = theta[..cfg.count].to_vec();
    let residual_norms = generalized_residuals(h, mass, &eigenvalues, &vectors);
    for (j, &r) in residual_norms.iter().enumerate() {
        let allowed = cfg.tol * eigenvalues[j].abs().max(1.0);
        if r > allowed {
            return Err(Error::NonConvergence {
                iterations,
                worst_residual: r,
                best_eigenvalues: eigenvalues,
            });
        }
    }
    Ok(EigenSolution {
        eigenvalues,
        eigenvectors: vectors,
        residual_norms,
        iterations,
    })
}

fn generalized_residuals(
    h: &CsrMatrix,
    mass: &[f64],
    eigenvalues: &[f64],
    vectors: &DMatrix<f64>,
) -> Vec<f64> {
    let dim = h.dim();
    let mut hu = vec![0.0; dim];
    let mut out = Vec::with_capacity(eigenvalues.len());
    for (j, &lambda) in eigenvalues.iter().enumerate() {
        let col: Vec<f64> = (0..dim).map(|i| vectors[(i, j)]).collect();
        h.matvec(&col, &mut hu);
        let mut norm_sq = 0.0;
        for i in 0..dim {
            let r = hu[i] - lambda * mass[i] * col[i];
            norm_sq += r * r;
        }
        out.push(norm_sq.sqrt());
    }
    out
}

/// Recompute residual norms and the M-orthonormality defect of a solution.
pub fn residual_report(h: &CsrMatrix, mass: &[f64], sol: &EigenSolution) -> ResidualReport {
    let residual_norms = generalized_residuals(h, mass, &sol.eigenvalues, &sol.eigenvectors);
    let k = sol.eigenvalues.len();
    let mut defect: f64 = 0.0;
    for a in 0..k {
        for b in a..k {
            let mut dot = 0.0;
            for i in 0..h.dim() {
                dot += sol.eigenvectors[(i, a)] * mass[i] * sol.eigenvectors[(i, b)];
            }
            let target = if a == b { 1.0 } else { 0.0 };
            defect = defect.max((dot - target).abs());
        }
    }
    ResidualReport {
        residual_norms,
        ortho_defect: defect,
    }
}

fn dense_smallest(a: &DMatrix<f64>, count: usize) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let eig = a.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..a.nrows()).collect();
    order.sort_by(|&p, &q| eig.eigenvalues[p].total_cmp(&eig.eigenvalues[q]));
    let mut theta = Vec::with_capacity(count);
    let mut vectors = DMatrix::zeros(a.nrows(), count);
    for (j, &idx) in order.iter().take(count).enumerate() {
        theta.push(eig.eigenvalues[idx]);
        vectors.set_column(j, &eig.eigenvectors.column(idx));
    }
    Ok((theta, vectors))
}

/// Multiply the sparse matrix into every column of a block.
fn matmul_block(a: &CsrMatrix, x: &DMatrix<f64>) -> DMatrix<f64> {
    let dim = a.dim();
    let cols = x.ncols();
    let mut out = DMatrix::zeros(dim, cols);
    let mut xin = vec![0.0; dim];
    let mut yout = vec![0.0; dim];
    for j in 0..cols {
        for i in 0..dim {
            xin[i] = x[(i, j)];
        }
        a.matvec(&xin, &mut yout);
        for i in 0..dim {
            out[(i, j)] = yout[i];
        }
    }
    out
}

/// Twice-iterated modified Gram-Schmidt of `block` against `basis` columns.
fn orthogonalize_against(block: &mut DMatrix<f64>, basis: &DMatrix<f64>) {
    for _ in 0..2 {
        for j in 0..block.ncols() {
            for b in 0..basis.ncols() {
                let proj = basis.column(b).dot(&block.column(j));
                let col = block.column(j) - basis.column(b) * proj;
                block.set_column(j, &col);
            }
        }
    }
}

/// Orthonormalize the columns of a block in place, dropping columns that
/// become numerically dependent. Returns the retained column count.
fn orthonormalize(block: &mut DMatrix<f64>, drop_tol: f64) -> usize {
    let mut kept = 0;
    for j in 0..block.ncols() {
        let mut col = block.column(j).clone_owned();
        for _ in 0..2 {
            for b in 0..kept {
                let proj = block.column(b).dot(&col);
                col -= block.column(b) * proj;
            }
        }
        let norm = col.norm();
        if norm > drop_tol {
            col /= norm;
            block.set_column(kept, &col);
            kept += 1;
        }
    }
    kept
}

fn lobpcg(
    a: &CsrMatrix,
    cfg: &SolveConfig,
    block: usize,
    unscale_growth: f64,
) -> Result<(Vec<f64>, DMatrix<f64>, usize)> {
    let dim = a.dim();
    let diag = a.diagonal();
    let diag_max = diag.iter().copied().fold(0.0f64, f64::max);
    let precond_floor = (1e-3 * diag_max).max(1e-300);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut x = DMatrix::from_fn(dim, block, |_, _| rng.random::<f64>() - 0.5);
    orthonormalize(&mut x, 1e-12);
    let mut ax = matmul_block(a, &x);
    let mut p: Option<DMatrix<f64>> = None;

    let mut theta = vec![0.0; block];
    for iter in 0..cfg.max_iter {
        // Rayleigh-Ritz on the current X
        let t = x.transpose() * &ax;
        let t = (&t + t.transpose()) * 0.5;
        let eig = t.symmetric_eigen();
        let mut order: Vec<usize> = (0..block).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let mut c = DMatrix::zeros(block, block);
        for (jj, &idx) in order.iter().enumerate() {
            c.set_column(jj, &eig.eigenvectors.column(idx));
            theta[jj] = eig.eigenvalues[idx];
        }
        x = &x * &c;
        ax = &ax * &c;
        if let Some(prev) = p.take() {
            p = Some(prev); // direction block survives the rotation unrotated
        }

        // residuals R = AX - X diag(theta)
        let mut r = ax.clone();
        for j in 0..block {
            let col = r.column(j) - x.column(j) * theta[j];
            r.set_column(j, &col);
        }
        let converged = (0..cfg.count).all(|j| {
            let allowed = 0.5 * cfg.tol * theta[j].abs().max(1.0) / unscale_growth;
            r.column(j).norm() <= allowed
        });
        if converged {
            return Ok((theta[..cfg.count].to_vec(), x.columns(0, cfg.count).into(), iter));
        }

        // Jacobi-preconditioned residuals, normalized per column so the
        // rank-deficiency drop below is scale-free
        let mut w = DMatrix::zeros(dim, block);
        for j in 0..block {
            for i in 0..dim {
                let denom = (diag[i] - theta[j]).max(precond_floor);
                w[(i, j)] = r[(i, j)] / denom;
            }
            let norm = w.column(j).norm();
            if norm > 0.0 {
                let col = w.column(j) / norm;
                w.set_column(j, &col);
            }
        }
        orthogonalize_against(&mut w, &x);
        let wk = orthonormalize(&mut w, 1e-8);
        let w = if wk > 0 {
            w.columns(0, wk).into_owned()
        } else {
            // stagnated: restart the search directions with seeded noise
            let mut fresh = DMatrix::from_fn(dim, block.min(4), |_, _| rng.random::<f64>() - 0.5);
            orthogonalize_against(&mut fresh, &x);
            let fk = orthonormalize(&mut fresh, 1e-12);
            fresh.columns(0, fk.max(1)).into_owned()
        };

        let p_block = match &p {
            Some(prev) => {
                let mut pb = prev.clone();
                orthogonalize_against(&mut pb, &x);
                orthogonalize_against(&mut pb, &w);
                let pk = orthonormalize(&mut pb, 1e-8);
                if pk > 0 {
                    Some(pb.columns(0, pk).into_owned())
                } else {
                    None
                }
            }
            None => None,
        };

        // joint Rayleigh-Ritz over [X | W | P]
        let total = block + w.ncols() + p_block.as_ref().map_or(0, |b| b.ncols());
        let mut s = DMatrix::zeros(dim, total);
        s.columns_mut(0, block).copy_from(&x);
        s.columns_mut(block, w.ncols()).copy_from(&w);
        if let Some(pb) = &p_block {
            s.columns_mut(block + w.ncols(), pb.ncols()).copy_from(pb);
        }
        let a_s = {
            let aw = matmul_block(a, &w);
            let mut tmp = DMatrix::zeros(dim, total);
            tmp.columns_mut(0, block).copy_from(&ax);
            tmp.columns_mut(block, w.ncols()).copy_from(&aw);
            if let Some(pb) = &p_block {
                tmp.columns_mut(block + w.ncols(), pb.ncols())
                    .copy_from(&matmul_block(a, pb));
            }
            tmp
        };
        let ts = s.transpose() * &a_s;
        let ts = (&ts + ts.transpose()) * 0.5;
        let eig = ts.symmetric_eigen();
        let mut order: Vec<usize> = (0..total).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let mut coeff = DMatrix::zeros(total, block);
        for (jj, &idx) in order.iter().take(block).enumerate() {
            coeff.set_column(jj, &eig.eigenvectors.column(idx));
        }
        let x_new = &s * &coeff;
        let ax_new = &a_s * &coeff;
        // next direction block: the W/P contribution to the new X
        let mut coeff_tail = coeff.clone();
        for j in 0..block {
            for i in 0..block {
                coeff_tail[(i, j)] = 0.0;
            }
        }
        let mut p_new = &s * &coeff_tail;
        for j in 0..p_new.ncols() {
            let norm = p_new.column(j).norm();
            if norm > 1e-300 {
                let col = p_new.column(j) / norm;
                p_new.set_column(j, &col);
            }
        }
        let pk = orthonormalize(&mut p_new, 1e-8);
        p = (pk > 0).then(|| p_new.columns(0, pk).into_owned());

        x = x_new;
        ax = ax_new;
        // re-orthonormalize X (and refresh AX) only when round-off drift shows
        let mut gram = x.transpose() * &x;
        for i in 0..block {
            gram[(i, i)] -= 1.0;
        }
        if gram.amax() > 1e-8 {
            let xk = orthonormalize(&mut x, 1e-12);
            if xk < block {
                let mut fresh =
                    DMatrix::from_fn(dim, block - xk, |_, _| rng.random::<f64>() - 0.5);
                orthogonalize_against(&mut fresh, &x.columns(0, xk).into_owned());
                orthonormalize(&mut fresh, 1e-12);
                x.columns_mut(xk, block - xk).copy_from(&fresh);
            }
            ax = matmul_block(a, &x);
        }
    }

    // one final Rayleigh-Ritz so the reported failure carries the best data
    let t = x.transpose() * &ax;
    let t = (&t + t.transpose()) * 0.5;
    let eig = t.symmetric_eigen();
    let mut order: Vec<usize> = (0..block).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let best: Vec<f64> = order.iter().take(cfg.count).map(|&i| eig.eigenvalues[i]).collect();
    let mut worst = 0.0f64;
    for j in 0..cfg.count {
        let col = x.column(order[j]);
        let acol = ax.column(order[j]);
        worst = worst.max((acol - col * best[j]).norm());
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_iter,
        worst_residual: worst,
        best_eigenvalues: best,
    })
}

/// Verify the commutator gap lemma
/// sum_{i<=k} (l_{k+1} - l_i)^2 <[H,G]u_i, G u_i> <= sum_{i<=k} (l_{k+1} - l_i) ||[H,G]u_i||^2
/// for a dense symmetric H and diagonal G, from the full eigendecomposition.
/// Returns rhs - lhs.
pub fn commutator_lemma_check(h: &DMatrix<f64>, g_diag: &[f64], k: usize) -> Result<f64> {
    let dim = h.nrows();
    if h.ncols() != dim {
        return Err(Error::precondition("H must be square"));
    }
    if g_diag.len() != dim {
        return Err(Error::precondition("G diagonal length must match H"));
    }
    if k >= dim {
        return Err(Error::domain(format!("k = {k} must be below dim = {dim}")));
    }
    if k < 1 {
        return Err(Error::domain("k must be >= 1"));
    }
    let defect = (h - h.transpose()).amax();
    if defect > SYMMETRY_TOL * h.amax().max(1.0) {
        return Err(Error::precondition(format!(
            "H is not symmetric: defect {defect:.3e}"
        )));
    }

    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let lambdas: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();

    // [H, G]_ij = H_ij (g_j - g_i) for diagonal G
    let mut comm = h.clone();
    for i in 0..dim {
        for j in 0..dim {
            comm[(i, j)] *= g_diag[j] - g_diag[i];
        }
    }

    let top = lambdas[k];
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for (i, &idx) in order.iter().enumerate().take(k) {
        let u = eig.eigenvectors.column(idx);
        let cu = &comm * u;
        let gu = DVector::from_fn(dim, |r, _| g_diag[r] * u[r]);
        let diff = top - lambdas[i];
        lhs += diff * diff * cu.dot(&gu);
        rhs += diff * cu.norm_squared();
    }
    Ok(rhs - lhs)
}
