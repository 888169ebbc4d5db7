//! Minimal sparse symmetric matrix support: triplet accumulation and CSR
//! storage with the handful of operations the solvers need.

use crate::error::{Error, Result};

/// Triplet (COO) accumulator. Duplicate entries are summed on conversion.
#[derive(Debug, Clone)]
pub struct CooMatrix {
    dim: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl CooMatrix {
    pub fn new(dim: usize) -> Self {
        CooMatrix {
            dim,
            entries: Vec::new(),
        }
    }

    pub fn with_capacity(dim: usize, cap: usize) -> Self {
        CooMatrix {
            dim,
            entries: Vec::with_capacity(cap),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn push(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.dim && col < self.dim);
        if value != 0.0 {
            self.entries.push((row, col, value));
        }
    }

    pub fn to_csr(&self) -> CsrMatrix {
        let mut sorted = self.entries.clone();
        sorted.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        let mut row_ptr = vec![0usize; self.dim + 1];
        let mut col_idx = Vec::with_capacity(sorted.len());
        let mut values: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in sorted {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..self.dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        CsrMatrix {
            dim: self.dim,
            row_ptr,
            col_idx,
            values,
        }
    }
}

/// Compressed sparse row matrix, square.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn identity(dim: usize) -> Self {
        let mut coo = CooMatrix::new(dim);
        for i in 0..dim {
            coo.push(i, i, 1.0);
        }
        coo.to_csr()
    }

    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let lo = self.row_ptr[r];
        let hi = self.row_ptr[r + 1];
        (&self.col_idx[lo..hi], &self.values[lo..hi])
    }

    /// y = A x
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        for r in 0..self.dim {
            let lo = self.row_ptr[r];
            let hi = self.row_ptr[r + 1];
            let mut acc = 0.0;
            for k in lo..hi {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            y[r] = acc;
        }
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (cols, vals) = self.row(r);
        match cols.binary_search(&c) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// max_{ij} |a_ij - a_ji|
    pub fn symmetry_defect(&self) -> f64 {
        let mut defect: f64 = 0.0;
        for r in 0..self.dim {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                if c >= r {
                    defect = defect.max((v - self.get(c, r)).abs());
                }
            }
        }
        defect
    }

    /// D A D for a diagonal scaling d.
    pub fn scale_sym(&self, d: &[f64]) -> CsrMatrix {
        assert_eq!(d.len(), self.dim);
        let mut out = self.clone();
        for r in 0..self.dim {
            let lo = out.row_ptr[r];
            let hi = out.row_ptr[r + 1];
            for k in lo..hi {
                out.values[k] *= d[r] * d[out.col_idx[k]];
            }
        }
        out
    }

    /// A + diag(d)
    pub fn add_diagonal(&self, d: &[f64]) -> CsrMatrix {
        assert_eq!(d.len(), self.dim);
        let mut coo = CooMatrix::with_capacity(self.dim, self.nnz() + self.dim);
        for r in 0..self.dim {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                coo.push(r, c, v);
            }
            coo.push(r, r, d[r]);
        }
        coo.to_csr()
    }

    /// Restriction to the principal submatrix indexed by `keep` (ascending,
    /// unique). Used for Dirichlet elimination.
    pub fn restrict(&self, keep: &[usize]) -> Result<CsrMatrix> {
        let mut inv = vec![usize::MAX; self.dim];
        for (new, &old) in keep.iter().enumerate() {
            if old >= self.dim {
                return Err(Error::domain(format!(
                    "restriction index {old} out of range for dim {}",
                    self.dim
                )));
            }
            inv[old] = new;
        }
        let mut coo = CooMatrix::new(keep.len());
        for (new_r, &old_r) in keep.iter().enumerate() {
            let (cols, vals) = self.row(old_r);
            for (&c, &v) in cols.iter().zip(vals) {
                if inv[c] != usize::MAX {
                    coo.push(new_r, inv[c], v);
                }
            }
        }
        Ok(coo.to_csr())
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                m[(r, c)] += v;
            }
        }
        m
    }
}
