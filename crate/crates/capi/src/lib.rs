//! C ABI over the eigenineq toolkit: opaque mesh handles, status codes, and
//! flat-array entry points for the inequality evaluations, exact sphere
//! identities, and the Kohn box spectra.
//!
//! Conventions:
//! - every fallible call returns [`EigenineqStatus`]; `EIGENINEQ_STATUS_OK`
//!   is zero;
//! - on failure a thread-local message is set, readable through
//!   [`eigenineq_last_error`] (valid until the next failing call on the
//!   same thread);
//! - handle constructors return null on failure;
//! - output buffers are caller-allocated, lengths passed explicitly.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_traits::ToPrimitive;

use eigenineq::error::Error;
use eigenineq::exact;
use eigenineq::heisenberg::{solve_kohn, HeisenbergGrid};
use eigenineq::inequality::{
    kohn_bounds, kohn_margin, quadratic_bounds, reilly_chain, reilly_lambda2, yang_margin,
    SpectrumSample,
};
use eigenineq::mesh::{
    apply_dirichlet, assemble_laplacian, assemble_schrodinger, make_clifford_torus, make_disk,
    make_ellipsoid, make_flat_torus, make_icosphere, mean_curvature, read_mesh, ImmersedMesh,
    PotentialField,
};
use eigenineq::solver::{solve_smallest, SolveConfig};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenineqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DomainError = 3,
    ConfigError = 4,
    PreconditionError = 5,
    NonConvergence = 6,
    IoError = 7,
    InternalError = 8,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> EigenineqStatus {
    match err {
        Error::Domain(_) => EigenineqStatus::DomainError,
        Error::Config(_) => EigenineqStatus::ConfigError,
        Error::Precondition(_) => EigenineqStatus::PreconditionError,
        Error::NonConvergence { .. } => EigenineqStatus::NonConvergence,
        Error::Parse { .. } => EigenineqStatus::ConfigError,
        Error::Io(_) => EigenineqStatus::IoError,
        Error::Stage { source, .. } => status_of(source),
    }
}

fn fail(err: &Error) -> EigenineqStatus {
    set_error(&err.to_string());
    status_of(err)
}

fn run_guarded(f: impl FnOnce() -> EigenineqStatus) -> EigenineqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            EigenineqStatus::InternalError
        }
    }
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn eigenineq_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Toolkit version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn eigenineq_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

unsafe fn slice_arg<'a>(ptr: *const f64, len: usize) -> Option<&'a [f64]> {
    if ptr.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(ptr, len))
    }
}

macro_rules! out_param {
    ($ptr:expr) => {
        match unsafe { $ptr.as_mut() } {
            Some(r) => r,
            None => {
                set_error("null output pointer");
                return EigenineqStatus::NullPointer;
            }
        }
    };
}

// ---------------------------------------------------------------------------
// exact sphere identities
// ---------------------------------------------------------------------------

/// Sphere eigenvalue l(l + n - 1) as a double (exact for the usual ranges).
#[no_mangle]
pub extern "C" fn eigenineq_sphere_eigenvalue(
    n: u32,
    level: u64,
    out: *mut f64,
) -> EigenineqStatus {
    let out = out_param!(out);
    run_guarded(|| match exact::sphere_eigenvalue(n, level) {
        Ok(v) => {
            *out = v.to_f64().unwrap_or(f64::NAN);
            EigenineqStatus::Ok
        }
        Err(e) => fail(&e),
    })
}

/// Sphere level multiplicity; fails if it does not fit into u64.
#[no_mangle]
pub extern "C" fn eigenineq_sphere_multiplicity(
    n: u32,
    level: u64,
    out: *mut u64,
) -> EigenineqStatus {
    let out = out_param!(out);
    run_guarded(|| match exact::sphere_multiplicity(n, level) {
        Ok(v) => match v.to_u64() {
            Some(v) => {
                *out = v;
                EigenineqStatus::Ok
            }
            None => {
                set_error("multiplicity exceeds u64");
                EigenineqStatus::InvalidArgument
            }
        },
        Err(e) => fail(&e),
    })
}

/// Cumulative multiplicity through level m (the gap index k).
#[no_mangle]
pub extern "C" fn eigenineq_gap_index(n: u32, m: u64, out: *mut u64) -> EigenineqStatus {
    let out = out_param!(out);
    run_guarded(|| match exact::gap_index(n, m) {
        Ok(v) => match v.to_u64() {
            Some(v) => {
                *out = v;
                EigenineqStatus::Ok
            }
            None => {
                set_error("gap index exceeds u64");
                EigenineqStatus::InvalidArgument
            }
        },
        Err(e) => fail(&e),
    })
}

/// Exact sphere saturation check for potential coefficient g = g_num/g_den.
/// `out_is_zero` receives true exactly when the rational residual vanishes.
#[no_mangle]
pub extern "C" fn eigenineq_verify_sphere_saturation(
    n: u32,
    m: u64,
    g_num: i64,
    g_den: i64,
    out_is_zero: *mut bool,
) -> EigenineqStatus {
    let out = out_param!(out_is_zero);
    run_guarded(|| {
        if g_den == 0 {
            set_error("g denominator must be nonzero");
            return EigenineqStatus::InvalidArgument;
        }
        match exact::verify_sphere_saturation(n, m, &exact::ratio(g_num, g_den)) {
            Ok(residual) => {
                *out = num_traits::Zero::is_zero(&residual);
                EigenineqStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

// ---------------------------------------------------------------------------
// inequality evaluations on flat arrays
// ---------------------------------------------------------------------------

fn sample_from_arrays(
    n: u32,
    lambdas: &[f64],
    deltas: &[f64],
) -> Result<SpectrumSample, Error> {
    SpectrumSample::new(n, lambdas.to_vec())?.with_delta_terms(deltas.to_vec())
}

/// rhs - lhs of the gap-quadratic inequality at index k; `deltas` holds the
/// curvature-vs-potential moments, at least k entries.
#[no_mangle]
pub extern "C" fn eigenineq_yang_margin(
    n: u32,
    lambdas: *const f64,
    len: usize,
    deltas: *const f64,
    deltas_len: usize,
    k: usize,
    out: *mut f64,
) -> EigenineqStatus {
    let out = out_param!(out);
    run_guarded(|| {
        let (Some(l), Some(d)) = (unsafe { slice_arg(lambdas, len) }, unsafe {
            slice_arg(deltas, deltas_len)
        }) else {
            set_error("null array pointer");
            return EigenineqStatus::NullPointer;
        };
        match sample_from_arrays(n, l, d).and_then(|s| yang_margin(&s, k)) {
            Ok(v) => {
                *out = v;
                EigenineqStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Two-sided root bracket for lambda_{k+1} from the gap inequality.
#[no_mangle]
pub extern "C" fn eigenineq_quadratic_bounds(
    n: u32,
    lambdas: *const f64,
    len: usize,
    deltas: *const f64,
    deltas_len: usize,
    k: usize,
    tol: f64,
    out_lower: *mut f64,
    out_upper: *mut f64,
    out_discriminant: *mut f64,
    out_valid: *mut bool,
) -> EigenineqStatus {
    let lower = out_param!(out_lower);
    let upper = out_param!(out_upper);
    let disc = out_param!(out_discriminant);
    let valid = out_param!(out_valid);
    run_guarded(|| {
        let (Some(l), Some(d)) = (unsafe { slice_arg(lambdas, len) }, unsafe {
            slice_arg(deltas, deltas_len)
        }) else {
            set_error("null array pointer");
            return EigenineqStatus::NullPointer;
        };
        match sample_from_arrays(n, l, d).and_then(|s| quadratic_bounds(&s, k, tol)) {
            Ok(b) => {
                *lower = b.lower;
                *upper = b.upper;
                *disc = b.discriminant;
                *valid = b.valid;
                EigenineqStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// rhs - lhs of the Kohn gap inequality (requires lambda_1 > 0).
#[no_mangle]
pub extern "C" fn eigenineq_kohn_margin(
    n: u32,
    lambdas: *const f64,
    len: usize,
    k: usize,
    out: *mut f64,
) -> EigenineqStatus {
    let out = out_param!(out);
    run_guarded(|| {
        let Some(l) = (unsafe { slice_arg(lambdas, len) }) else {
            set_error("null array pointer");
            return EigenineqStatus::NullPointer;
        };
        match kohn_margin(n, l, k) {
            Ok(v) => {
                *out = v;
                EigenineqStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Kohn bracket upper root and the averaged (Cauchy-Schwarz) upper bound.
#[no_mangle]
pub extern "C" fn eigenineq_kohn_upper_bounds(
    n: u32,
    lambdas: *const f64,
    len: usize,
    k: usize,
    out_upper: *mut f64,
    out_simple: *mut f64,
) -> EigenineqStatus {
    let upper = out_param!(out_upper);
    let simple = out_param!(out_simple);
    run_guarded(|| {
        let Some(l) = (unsafe { slice_arg(lambdas, len) }) else {
            set_error("null array pointer");
            return EigenineqStatus::NullPointer;
        };
        match kohn_bounds(n, l, k, 1e-12) {
            Ok(kb) => {
                *upper = kb.bound.upper;
                *simple = kb.simple;
                EigenineqStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Reilly bound on lambda_2 from the volume-averaged |h|^2.
#[no_mangle]
pub extern "C" fn eigenineq_reilly_lambda2(
    n: u32,
    mean_h_sq: f64,
    out: *mut f64,
) -> EigenineqStatus {
    let out = out_param!(out);
    if n < 1 {
        set_error("dimension must be >= 1");
        return EigenineqStatus::DomainError;
    }
    *out = reilly_lambda2(n, mean_h_sq);
    EigenineqStatus::Ok
}

/// Chained Reilly bound on lambda_k (k >= 2).
#[no_mangle]
pub extern "C" fn eigenineq_reilly_chain(
    n: u32,
    k: usize,
    lambda_1: f64,
    h_sup_sq: f64,
    out: *mut f64,
) -> EigenineqStatus {
    let out = out_param!(out);
    run_guarded(|| match reilly_chain(n, k, lambda_1, h_sup_sq) {
        Ok(v) => {
            *out = v;
            EigenineqStatus::Ok
        }
        Err(e) => fail(&e),
    })
}

// ---------------------------------------------------------------------------
// mesh handles
// ---------------------------------------------------------------------------

/// Opaque immersed triangle mesh.
pub struct EigenineqMesh {
    inner: ImmersedMesh,
}

fn mesh_handle(result: Result<ImmersedMesh, Error>) -> *mut EigenineqMesh {
    match result {
        Ok(inner) => Box::into_raw(Box::new(EigenineqMesh { inner })),
        Err(e) => {
            set_error(&e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// Icosphere mesh handle; null on failure (see eigenineq_last_error).
#[no_mangle]
pub extern "C" fn eigenineq_mesh_icosphere(subdivisions: u32, radius: f64) -> *mut EigenineqMesh {
    mesh_handle(make_icosphere(subdivisions, radius))
}

#[no_mangle]
pub extern "C" fn eigenineq_mesh_ellipsoid(
    a: f64,
    b: f64,
    c: f64,
    subdivisions: u32,
) -> *mut EigenineqMesh {
    mesh_handle(make_ellipsoid(a, b, c, subdivisions))
}

#[no_mangle]
pub extern "C" fn eigenineq_mesh_clifford_torus(resolution: usize) -> *mut EigenineqMesh {
    mesh_handle(make_clifford_torus(resolution))
}

#[no_mangle]
pub extern "C" fn eigenineq_mesh_flat_torus(
    lx: f64,
    ly: f64,
    resolution: usize,
) -> *mut EigenineqMesh {
    mesh_handle(make_flat_torus(lx, ly, resolution))
}

#[no_mangle]
pub extern "C" fn eigenineq_mesh_disk(rings: usize, radius: f64) -> *mut EigenineqMesh {
    mesh_handle(make_disk(rings, radius))
}

/// Load a mesh from the ASCII mesh format.
#[no_mangle]
pub extern "C" fn eigenineq_mesh_load(path: *const c_char) -> *mut EigenineqMesh {
    if path.is_null() {
        set_error("null path");
        return std::ptr::null_mut();
    }
    let path = match unsafe { CStr::from_ptr(path) }.to_str() {
        Ok(p) => p,
        Err(_) => {
            set_error("path is not valid UTF-8");
            return std::ptr::null_mut();
        }
    };
    mesh_handle(read_mesh(path))
}

/// Release a mesh handle. Passing null is a no-op.
#[no_mangle]
pub extern "C" fn eigenineq_mesh_free(mesh: *mut EigenineqMesh) {
    if !mesh.is_null() {
        drop(unsafe { Box::from_raw(mesh) });
    }
}

#[no_mangle]
pub extern "C" fn eigenineq_mesh_vertex_count(mesh: *const EigenineqMesh) -> usize {
    unsafe { mesh.as_ref() }.map_or(0, |m| m.inner.num_vertices())
}

#[no_mangle]
pub extern "C" fn eigenineq_mesh_triangle_count(mesh: *const EigenineqMesh) -> usize {
    unsafe { mesh.as_ref() }.map_or(0, |m| m.inner.num_triangles())
}

#[no_mangle]
pub extern "C" fn eigenineq_mesh_is_closed(mesh: *const EigenineqMesh) -> bool {
    unsafe { mesh.as_ref() }.is_some_and(|m| m.inner.is_closed())
}

/// sup and volume-averaged |h|^2 of the discrete mean curvature field.
#[no_mangle]
pub extern "C" fn eigenineq_mesh_curvature_stats(
    mesh: *const EigenineqMesh,
    out_sup_sq: *mut f64,
    out_mean_sq: *mut f64,
) -> EigenineqStatus {
    let sup = out_param!(out_sup_sq);
    let mean = out_param!(out_mean_sq);
    let Some(mesh) = (unsafe { mesh.as_ref() }) else {
        set_error("null mesh handle");
        return EigenineqStatus::NullPointer;
    };
    run_guarded(|| {
        let compute = || -> Result<(f64, f64), Error> {
            let op = assemble_laplacian(&mesh.inner)?;
            let curv = mean_curvature(&mesh.inner, &op)?;
            Ok((curv.sup_sq, curv.mean_sq))
        };
        match compute() {
            Ok((s, m)) => {
                *sup = s;
                *mean = m;
                EigenineqStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Smallest `count` eigenvalues of -Laplacian + g |h|^2 on the mesh, with
/// Dirichlet conditions on any boundary. `out_lambdas` must hold `count`
/// doubles.
#[no_mangle]
pub extern "C" fn eigenineq_mesh_solve_smallest(
    mesh: *const EigenineqMesh,
    g_potential: f64,
    count: usize,
    tol: f64,
    seed: u64,
    out_lambdas: *mut f64,
) -> EigenineqStatus {
    if out_lambdas.is_null() {
        set_error("null output pointer");
        return EigenineqStatus::NullPointer;
    }
    let Some(mesh) = (unsafe { mesh.as_ref() }) else {
        set_error("null mesh handle");
        return EigenineqStatus::NullPointer;
    };
    run_guarded(|| {
        let compute = || -> Result<Vec<f64>, Error> {
            let op = assemble_laplacian(&mesh.inner)?;
            let curv = mean_curvature(&mesh.inner, &op)?;
            let q = PotentialField::geometric(g_potential, &curv)?;
            let h_full = assemble_schrodinger(&op, &q)?;
            let restricted = apply_dirichlet(&mesh.inner, &op)?;
            let map = restricted.interior_map.as_ref().expect("restriction map");
            let h = h_full.restrict(map)?;
            let cfg = SolveConfig {
                count,
                tol,
                seed,
                ..SolveConfig::default()
            };
            Ok(solve_smallest(&h, &restricted.mass, &cfg)?.eigenvalues)
        };
        match compute() {
            Ok(lams) => {
                let out = unsafe { std::slice::from_raw_parts_mut(out_lambdas, count) };
                out.copy_from_slice(&lams);
                EigenineqStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

// ---------------------------------------------------------------------------
// Kohn sublaplacian
// ---------------------------------------------------------------------------

/// Smallest `count` Dirichlet eigenvalues of the Kohn sublaplacian on the
/// box [lo, hi]^{2n+1} with `resolution` interior nodes per axis (even).
/// `out_lambdas` must hold `count` doubles.
#[no_mangle]
pub extern "C" fn eigenineq_kohn_box_spectrum(
    n: u32,
    lo: f64,
    hi: f64,
    resolution: usize,
    count: usize,
    tol: f64,
    seed: u64,
    out_lambdas: *mut f64,
) -> EigenineqStatus {
    if out_lambdas.is_null() {
        set_error("null output pointer");
        return EigenineqStatus::NullPointer;
    }
    run_guarded(|| {
        let compute = || -> Result<Vec<f64>, Error> {
            let grid = HeisenbergGrid::box_uniform(n, lo, hi, resolution)?;
            let cfg = SolveConfig {
                count,
                tol,
                seed,
                ..SolveConfig::default()
            };
            solve_kohn(&grid, count, &cfg)
        };
        match compute() {
            Ok(lams) => {
                let out = unsafe { std::slice::from_raw_parts_mut(out_lambdas, count) };
                out.copy_from_slice(&lams);
                EigenineqStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn version_and_errors() {
        let v = unsafe { CStr::from_ptr(eigenineq_version()) };
        assert!(!v.to_str().unwrap().is_empty());
        let mut out = 0f64;
        let status = eigenineq_sphere_eigenvalue(0, 1, &mut out);
        assert_eq!(status, EigenineqStatus::DomainError);
        let msg = unsafe { CStr::from_ptr(eigenineq_last_error()) };
        assert!(msg.to_str().unwrap().contains("dimension"));
    }

    #[test]
    fn exact_entry_points() {
        let mut eig = 0f64;
        assert_eq!(
            eigenineq_sphere_eigenvalue(2, 1, &mut eig),
            EigenineqStatus::Ok
        );
        assert_eq!(eig, 2.0);
        let mut mult = 0u64;
        assert_eq!(
            eigenineq_sphere_multiplicity(3, 1, &mut mult),
            EigenineqStatus::Ok
        );
        assert_eq!(mult, 4);
        let mut k = 0u64;
        assert_eq!(eigenineq_gap_index(2, 2, &mut k), EigenineqStatus::Ok);
        assert_eq!(k, 9);
        let mut zero = false;
        assert_eq!(
            eigenineq_verify_sphere_saturation(3, 4, 17, 5, &mut zero),
            EigenineqStatus::Ok
        );
        assert!(zero);
        assert_eq!(
            eigenineq_verify_sphere_saturation(3, 4, 1, 0, &mut zero),
            EigenineqStatus::InvalidArgument
        );
    }

    #[test]
    fn array_margins() {
        let lambdas = [0.0, 2.0, 2.0, 2.0, 6.0];
        let deltas = [1.0; 5];
        let mut margin = f64::NAN;
        let status = eigenineq_yang_margin(
            2,
            lambdas.as_ptr(),
            lambdas.len(),
            deltas.as_ptr(),
            deltas.len(),
            4,
            &mut margin,
        );
        assert_eq!(status, EigenineqStatus::Ok);
        assert_eq!(margin, 0.0);

        let (mut lower, mut upper, mut disc, mut valid) = (0.0, 0.0, 0.0, false);
        let status = eigenineq_quadratic_bounds(
            2,
            lambdas.as_ptr(),
            lambdas.len(),
            deltas.as_ptr(),
            deltas.len(),
            1,
            0.0,
            &mut lower,
            &mut upper,
            &mut disc,
            &mut valid,
        );
        assert_eq!(status, EigenineqStatus::Ok);
        assert!(valid);
        assert!((upper - 2.0).abs() < 1e-12);

        let kohn = [1.0, 2.0, 3.0];
        let mut out = f64::NAN;
        assert_eq!(
            eigenineq_kohn_margin(1, kohn.as_ptr(), 3, 1, &mut out),
            EigenineqStatus::Ok
        );
        assert_eq!(
            eigenineq_kohn_margin(1, std::ptr::null(), 3, 1, &mut out),
            EigenineqStatus::NullPointer
        );
    }

    #[test]
    fn mesh_handle_lifecycle() {
        let mesh = eigenineq_mesh_icosphere(2, 1.0);
        assert!(!mesh.is_null());
        assert_eq!(eigenineq_mesh_vertex_count(mesh), 162);
        assert_eq!(eigenineq_mesh_triangle_count(mesh), 320);
        assert!(eigenineq_mesh_is_closed(mesh));

        let (mut sup, mut mean) = (0.0, 0.0);
        assert_eq!(
            eigenineq_mesh_curvature_stats(mesh, &mut sup, &mut mean),
            EigenineqStatus::Ok
        );
        assert!((mean - 4.0).abs() < 0.1, "mean {mean}");

        let mut lams = [0f64; 4];
        assert_eq!(
            eigenineq_mesh_solve_smallest(mesh, 0.0, 4, 1e-8, 7, lams.as_mut_ptr()),
            EigenineqStatus::Ok
        );
        assert!(lams[0].abs() < 1e-9);
        assert!((lams[1] - 2.0).abs() < 0.05);
        eigenineq_mesh_free(mesh);
        eigenineq_mesh_free(std::ptr::null_mut());

        // invalid construction yields null and an error message
        let bad = eigenineq_mesh_disk(0, 1.0);
        assert!(bad.is_null());
    }

    #[test]
    fn kohn_box_entry_point() {
        let mut lams = [0f64; 3];
        let status =
            eigenineq_kohn_box_spectrum(1, 0.0, 1.0, 8, 3, 1e-8, 7, lams.as_mut_ptr());
        assert_eq!(status, EigenineqStatus::Ok);
        assert!(lams[0] > 0.0);
        assert!(lams[0] <= lams[1] && lams[1] <= lams[2]);
        // odd resolution is rejected (singular discretization)
        let status =
            eigenineq_kohn_box_spectrum(1, 0.0, 1.0, 7, 3, 1e-8, 7, lams.as_mut_ptr());
        assert_eq!(status, EigenineqStatus::DomainError);
    }
}
