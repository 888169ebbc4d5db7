//! Scenario execution: geometry -> assembly -> solve -> evaluate -> emit.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{GeometrySpec, PotentialSpec, Scenario};
use crate::error::{Error, Result};
use crate::exact::{self, ModelSpectrum};
use crate::heisenberg::{assemble_kohn, HeisenbergGrid};
use crate::inequality::{
    build_report, InequalityReport, ReportInputs, ReportRow, SpectrumSample, Theorem,
};
use crate::mesh::{
    self, apply_dirichlet, assemble_laplacian, assemble_schrodinger, delta_integrals,
    mean_curvature, DiscreteOperator, EigenmapData, ImmersedMesh, MeanCurvatureField,
    PotentialField,
};
use crate::solver::{solve_smallest, SolveConfig};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

/// Execution record emitted alongside the reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub scenario: Scenario,
    pub toolkit_version: String,
    pub seed: u64,
    pub wall_clock_seconds: f64,
    pub stages: Vec<StageTiming>,
    pub files: Vec<FileDigest>,
    pub all_satisfied: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub manifest: RunManifest,
    pub reports: Vec<InequalityReport>,
}

fn timed<T>(
    stages: &mut Vec<StageTiming>,
    scenario: &str,
    stage: &str,
    f: impl FnOnce() -> Result<T>,
) -> Result<T> {
    let start = Instant::now();
    let out = f().map_err(|e| e.in_stage(scenario, stage))?;
    stages.push(StageTiming {
        stage: stage.to_string(),
        seconds: start.elapsed().as_secs_f64(),
    });
    Ok(out)
}

/// Run one scenario, writing `<name>.report.json`, `<name>.csv`,
/// `<name>.plot.dat` and `<name>.manifest.json` into `out_dir`.
/// Deterministic for a fixed config and seed; partial outputs are removed
/// when a stage fails.
pub fn run_scenario(scenario: &Scenario, out_dir: &Path) -> Result<RunOutput> {
    scenario.validate()?;
    let wall = Instant::now();
    let mut stages = Vec::new();
    let reports = compute_reports(scenario, &mut stages)?;
    let all_satisfied = reports.iter().all(|r| r.all_satisfied());

    let emit_start = Instant::now();
    let files = emit_outputs(scenario, &reports, out_dir, all_satisfied)
        .map_err(|e| e.in_stage(&scenario.name, "emit"))?;
    stages.push(StageTiming {
        stage: "emit".to_string(),
        seconds: emit_start.elapsed().as_secs_f64(),
    });

    let mut manifest = RunManifest {
        scenario: scenario.clone(),
        toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: scenario.solver.seed,
        wall_clock_seconds: wall.elapsed().as_secs_f64(),
        stages,
        files,
        all_satisfied,
    };
    let manifest_path = out_dir.join(format!("{}.manifest.json", scenario.name));
    let manifest_text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::config(format!("manifest serialization failed: {e}")))?;
    if let Err(e) = std::fs::write(&manifest_path, &manifest_text) {
        remove_outputs(out_dir, scenario, &manifest.files);
        return Err(Error::Io(e).in_stage(&scenario.name, "emit"));
    }
    manifest.files.push(FileDigest {
        path: manifest_path.to_string_lossy().into_owned(),
        sha256: hex_digest(manifest_text.as_bytes()),
    });
    Ok(RunOutput {
        manifest,
        reports,
    })
}

fn compute_reports(
    scenario: &Scenario,
    stages: &mut Vec<StageTiming>,
) -> Result<Vec<InequalityReport>> {
    match &scenario.geometry {
        GeometrySpec::SphereExact { dims } => exact_sphere_reports(scenario, dims, stages),
        GeometrySpec::FlatTorusExact { sides, clifford } => {
            exact_torus_reports(scenario, sides, *clifford, stages)
        }
        GeometrySpec::SphereSaturation {
            dims,
            m_max,
            g_values,
        } => saturation_reports(scenario, dims, *m_max, g_values, stages),
        GeometrySpec::FlatTorusEigenmap { resolution } => {
            eigenmap_reports(scenario, *resolution, stages)
        }
        GeometrySpec::HeisenbergBox {
            n,
            lo,
            hi,
            resolution,
        } => kohn_reports(scenario, *n, *lo, *hi, *resolution, stages),
        _ => mesh_reports(scenario, stages),
    }
}

fn require_zero_potential(scenario: &Scenario) -> Result<()> {
    if scenario
        .potentials
        .iter()
        .any(|p| !matches!(p, PotentialSpec::Zero))
    {
        return Err(Error::config(
            "this geometry supports only the zero potential",
        ));
    }
    Ok(())
}

fn rational_prefix_to_f64(spectrum: &ModelSpectrum, count: usize) -> Result<Vec<f64>> {
    Ok(spectrum
        .prefix(count)?
        .iter()
        .map(|r| r.to_f64().unwrap_or(f64::NAN))
        .collect())
}

fn exact_sphere_reports(
    scenario: &Scenario,
    dims: &[u32],
    stages: &mut Vec<StageTiming>,
) -> Result<Vec<InequalityReport>> {
    require_zero_potential(scenario)?;
    let samples = timed(stages, &scenario.name, "geometry", || {
        let mut out = Vec::new();
        for &n in dims {
            let spectrum = ModelSpectrum::sphere(n)?;
            let eigenvalues = rational_prefix_to_f64(&spectrum, scenario.k_max + 1)?;
            let count = eigenvalues.len();
            let delta = f64::from(n) * f64::from(n) / 4.0;
            let sample = SpectrumSample::new(n, eigenvalues)?
                .with_delta_terms(vec![delta; count])?
                .with_delta_sup(delta);
            out.push((format!("exact S^{n} spectrum"), n, sample));
        }
        Ok(out)
    })?;
    timed(stages, &scenario.name, "evaluate", || {
        let mut reports = Vec::new();
        for &theorem in &scenario.theorems {
            for (source, n, sample) in &samples {
                let h_sup_sq = f64::from(*n) * f64::from(*n);
                reports.push(exact_sample_report(
                    theorem, sample, *n, h_sup_sq, h_sup_sq, scenario, source,
                )?);
            }
        }
        Ok(reports)
    })
}

fn exact_torus_reports(
    scenario: &Scenario,
    sides: &[String],
    clifford: bool,
    stages: &mut Vec<StageTiming>,
) -> Result<Vec<InequalityReport>> {
    require_zero_potential(scenario)?;
    let (source, n, sample, h_sq) = timed(stages, &scenario.name, "geometry", || {
        let (spectrum, h_sq, source) = if clifford {
            (
                ModelSpectrum::clifford_torus(),
                4.0,
                "exact Clifford torus spectrum".to_string(),
            )
        } else {
            let parsed: Vec<exact::Rational> = sides
                .iter()
                .map(|s| exact::parse_rational(s))
                .collect::<Result<_>>()?;
            // product-of-circles embedding: |h|^2 = sum 1/s_j^2
            let h_sq: f64 = parsed
                .iter()
                .map(|s| 1.0 / s.to_f64().unwrap_or(f64::NAN).powi(2))
                .sum();
            (
                ModelSpectrum::flat_torus(&parsed)?,
                h_sq,
                format!("exact flat torus spectrum, sides {} (2pi units)", sides.join(" x ")),
            )
        };
        let n = if clifford { 2 } else { sides.len() as u32 };
        let eigenvalues = rational_prefix_to_f64(&spectrum, scenario.k_max + 1)?;
        let count = eigenvalues.len();
        let sample = SpectrumSample::new(n, eigenvalues)?
            .with_delta_terms(vec![h_sq / 4.0; count])?
            .with_delta_sup(h_sq / 4.0);
        Ok((source, n, sample, h_sq))
    })?;
    timed(stages, &scenario.name, "evaluate", || {
        let mut reports = Vec::new();
        for &theorem in &scenario.theorems {
            reports.push(exact_sample_report(
                theorem, &sample, n, h_sq, h_sq, scenario, &source,
            )?);
        }
        Ok(reports)
    })
}

fn exact_sample_report(
    theorem: Theorem,
    sample: &SpectrumSample,
    n: u32,
    h_sup_sq: f64,
    mean_h_sq: f64,
    scenario: &Scenario,
    source: &str,
) -> Result<InequalityReport> {
    let k_range = (1, scenario.k_max);
    match theorem {
        Theorem::YangGap | Theorem::Bracket | Theorem::AveragedUpper => build_report(
            theorem,
            &ReportInputs::Spectrum(sample),
            k_range,
            scenario.tolerance,
            source,
        ),
        Theorem::Immersibility => build_report(
            theorem,
            &ReportInputs::Immersion { sample, h_sup_sq },
            k_range,
            scenario.tolerance,
            source,
        ),
        Theorem::ReillySecond | Theorem::ReillyChain => build_report(
            theorem,
            &ReportInputs::Reilly {
                n,
                eigenvalues: &sample.eigenvalues,
                mean_h_sq,
                h_sup_sq,
            },
            k_range,
            scenario.tolerance,
            source,
        ),
        other => Err(Error::config(format!(
            "theorem '{}' does not apply to exact model spectra",
            other.tag()
        ))),
    }
}

fn saturation_reports(
    scenario: &Scenario,
    dims: &[u32],
    m_max: u64,
    g_values: &[String],
    stages: &mut Vec<StageTiming>,
) -> Result<Vec<InequalityReport>> {
    require_zero_potential(scenario)?;
    if scenario.theorems.iter().any(|t| *t != Theorem::Saturation) {
        return Err(Error::config(
            "the saturation audit evaluates only the 'saturation' theorem",
        ));
    }
    timed(stages, &scenario.name, "evaluate", || {
        let mut rows = Vec::new();
        for &n in dims {
            for m in 1..=m_max {
                for g_text in g_values {
                    let g = exact::parse_rational(g_text)?;
                    let (lhs, rhs) = exact::sphere_saturation_sides(n, m, &g)?;
                    let residual = &rhs - &lhs;
                    let k = exact::gap_index(n, m)?
                        .to_u64()
                        .ok_or_else(|| Error::domain("gap index exceeds u64"))?;
                    rows.push(ReportRow {
                        k: k as usize,
                        lhs: lhs.to_f64().unwrap_or(f64::NAN),
                        rhs: rhs.to_f64().unwrap_or(f64::NAN),
                        margin: residual.to_f64().unwrap_or(f64::NAN),
                        lower: None,
                        upper: None,
                        discriminant: None,
                        satisfied: num_traits::Zero::is_zero(&residual),
                    });
                }
            }
        }
        Ok(vec![InequalityReport {
            theorem: Theorem::Saturation,
            tolerance: scenario.tolerance,
            source: format!(
                "exact saturation audit: n in {dims:?}, m <= {m_max}, g in {g_values:?}"
            ),
            rows,
        }])
    })
}

fn eigenmap_reports(
    scenario: &Scenario,
    resolution: usize,
    stages: &mut Vec<StageTiming>,
) -> Result<Vec<InequalityReport>> {
    require_zero_potential(scenario)?;
    let lambda_map = 1.0;
    timed(stages, &scenario.name, "eigenmap-validation", || {
        let mesh = mesh::make_flat_torus(2.0 * std::f64::consts::PI, 2.0 * std::f64::consts::PI, resolution)?;
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
        let validation = mesh::validate_eigenmap(&mesh, &data, 1e-9, 0.05)?;
        if !validation.pass {
            return Err(Error::config(format!(
                "eigenmap validation failed: norm dev {:.3e}, energy dev {:.3e}",
                validation.max_norm_deviation, validation.max_energy_deviation
            )));
        }
        Ok(())
    })?;
    let sample = timed(stages, &scenario.name, "geometry", || {
        let spectrum = ModelSpectrum::flat_torus(&[exact::rat(1), exact::rat(1)])?;
        let eigenvalues = rational_prefix_to_f64(&spectrum, scenario.k_max + 1)?;
        let count = eigenvalues.len();
        SpectrumSample::new(2, eigenvalues)?.with_q_integrals(vec![0.0; count])
    })?;
    timed(stages, &scenario.name, "evaluate", || {
        let mut reports = Vec::new();
        let source = format!(
            "flat 2pi x 2pi torus: validated eigenmap (lambda = 1, mesh resolution {resolution}), exact lattice spectrum"
        );
        for &theorem in &scenario.theorems {
            match theorem {
                Theorem::EigenmapGap | Theorem::EigenmapBracket => {
                    reports.push(build_report(
                        theorem,
                        &ReportInputs::Eigenmap {
                            lambda_map,
                            sample: &sample,
                        },
                        (1, scenario.k_max),
                        scenario.tolerance,
                        &source,
                    )?);
                }
                other => {
                    return Err(Error::config(format!(
                        "theorem '{}' does not apply to the eigenmap scenario",
                        other.tag()
                    )))
                }
            }
        }
        Ok(reports)
    })
}

fn kohn_reports(
    scenario: &Scenario,
    n: u32,
    lo: f64,
    hi: f64,
    resolution: usize,
    stages: &mut Vec<StageTiming>,
) -> Result<Vec<InequalityReport>> {
    require_zero_potential(scenario)?;
    let grid = timed(stages, &scenario.name, "geometry", || {
        HeisenbergGrid::box_uniform(n, lo, hi, resolution)
    })?;
    let op = timed(stages, &scenario.name, "assembly", || assemble_kohn(&grid))?;
    let eigenvalues = timed(stages, &scenario.name, "solve", || {
        let cfg = SolveConfig {
            count: scenario.k_max + 1,
            tol: scenario.solver.tol,
            max_iter: scenario.solver.max_iter,
            seed: scenario.solver.seed,
        };
        Ok(solve_smallest(&op.matrix, &op.mass(), &cfg)?.eigenvalues)
    })?;
    timed(stages, &scenario.name, "evaluate", || {
        let source = format!(
            "Kohn sublaplacian, H^{n} box [{lo}, {hi}]^{} at {resolution} nodes per axis",
            2 * n + 1
        );
        let inputs = ReportInputs::Kohn {
            n,
            eigenvalues: &eigenvalues,
        };
        let mut reports = Vec::new();
        for &theorem in &scenario.theorems {
            match theorem {
                Theorem::KohnGap | Theorem::KohnBracket | Theorem::KohnSimple => {
                    reports.push(build_report(
                        theorem,
                        &inputs,
                        (1, scenario.k_max),
                        scenario.tolerance,
                        &source,
                    )?);
                }
                other => {
                    return Err(Error::config(format!(
                        "theorem '{}' does not apply to the Kohn scenario",
                        other.tag()
                    )))
                }
            }
        }
        Ok(reports)
    })
}

struct MeshBundle {
    mesh: ImmersedMesh,
    full: DiscreteOperator,
    restricted: DiscreteOperator,
    curvature: MeanCurvatureField,
    description: String,
}

fn build_mesh(spec: &GeometrySpec) -> Result<(ImmersedMesh, String)> {
    Ok(match spec {
        GeometrySpec::Icosphere {
            subdivisions,
            radius,
        } => (
            mesh::make_icosphere(*subdivisions, *radius)?,
            format!("icosphere (subdiv {subdivisions}, radius {radius})"),
        ),
        GeometrySpec::Ellipsoid {
            a,
            b,
            c,
            subdivisions,
        } => (
            mesh::make_ellipsoid(*a, *b, *c, *subdivisions)?,
            format!("ellipsoid ({a}, {b}, {c}), subdiv {subdivisions}"),
        ),
        GeometrySpec::CliffordTorus { resolution } => (
            mesh::make_clifford_torus(*resolution)?,
            format!("Clifford torus mesh (resolution {resolution})"),
        ),
        GeometrySpec::FlatTorusMesh { lx, ly, resolution } => (
            mesh::make_flat_torus(*lx, *ly, *resolution)?,
            format!("flat torus mesh {lx} x {ly} (resolution {resolution})"),
        ),
        GeometrySpec::Disk { rings, radius } => (
            mesh::make_disk(*rings, *radius)?,
            format!("unit disk mesh ({rings} rings, radius {radius})"),
        ),
        GeometrySpec::SphericalCap { angle, rings } => (
            mesh::make_spherical_cap(*angle, *rings)?,
            format!("spherical cap (angle {angle}, {rings} rings)"),
        ),
        GeometrySpec::MeshFile { path } => (
            mesh::read_mesh(path)?,
            format!("mesh file {path}"),
        ),
        _ => return Err(Error::config("not a mesh geometry")),
    })
}

fn build_potential(
    spec: &PotentialSpec,
    nv: usize,
    curvature: &MeanCurvatureField,
) -> Result<PotentialField> {
    match spec {
        PotentialSpec::Zero => Ok(PotentialField::zero(nv)),
        PotentialSpec::Constant { value } => PotentialField::constant(nv, *value),
        PotentialSpec::Geometric { g } => PotentialField::geometric(*g, curvature),
        PotentialSpec::Tabulated { path } => {
            let text = std::fs::read_to_string(path)?;
            let values: Vec<f64> = text
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| Error::config(format!("bad potential value '{t}' in {path}")))
                })
                .collect::<Result<_>>()?;
            if values.len() != nv {
                return Err(Error::config(format!(
                    "potential file {path} has {} values for {nv} vertices",
                    values.len()
                )));
            }
            PotentialField::new(values)
        }
    }
}

fn mesh_reports(
    scenario: &Scenario,
    stages: &mut Vec<StageTiming>,
) -> Result<Vec<InequalityReport>> {
    let bundle = {
        let (mesh, description) = timed(stages, &scenario.name, "geometry", || {
            build_mesh(&scenario.geometry)
        })?;
        timed(stages, &scenario.name, "assembly", || {
            let full = assemble_laplacian(&mesh)?;
            let curvature = mean_curvature(&mesh, &full)?;
            let restricted = apply_dirichlet(&mesh, &full)?;
            Ok(MeshBundle {
                mesh,
                full,
                restricted,
                curvature,
                description,
            })
        })?
    };
    let interior = bundle
        .restricted
        .interior_map
        .clone()
        .expect("restricted operator carries its map");
    let trusted: Vec<usize> = {
        let reg = bundle.mesh.regular_interior_vertices();
        if reg.is_empty() {
            bundle.mesh.interior_vertices()
        } else {
            reg
        }
    };

    let mut reports = Vec::new();
    for potential_spec in &scenario.potentials {
        let label = potential_spec.label();
        let (eigenvalues, sample) = timed(stages, &scenario.name, "solve", || {
            let q = build_potential(potential_spec, bundle.mesh.num_vertices(), &bundle.curvature)?;
            let h_full = assemble_schrodinger(&bundle.full, &q)?;
            let h = h_full.restrict(&interior)?;
            let cfg = SolveConfig {
                count: scenario.k_max + 1,
                tol: scenario.solver.tol,
                max_iter: scenario.solver.max_iter,
                seed: scenario.solver.seed,
            };
            let sol = solve_smallest(&h, &bundle.restricted.mass, &cfg)?;
            let h_sq_interior: Vec<f64> =
                interior.iter().map(|&v| bundle.curvature.norm_sq[v]).collect();
            let q_interior =
                PotentialField::new(interior.iter().map(|&v| q.values[v]).collect())?;
            let deltas = delta_integrals(
                &sol.eigenvectors,
                &h_sq_interior,
                &q_interior,
                &bundle.restricted.mass,
            )?;
            // sup of the integrand over trusted vertices (discrete curvature
            // is unreliable at boundary and irregular vertices)
            let delta_sup = trusted
                .iter()
                .map(|&v| 0.25 * bundle.curvature.norm_sq[v] - q.values[v])
                .fold(f64::NEG_INFINITY, f64::max);
            let sample = SpectrumSample::new(bundle.mesh.intrinsic_dim(), sol.eigenvalues.clone())?
                .with_delta_terms(deltas)?
                .with_delta_sup(delta_sup);
            Ok((sol.eigenvalues, sample))
        })?;

        let evaluated = timed(stages, &scenario.name, "evaluate", || {
            let source = format!("{}; {label}", bundle.description);
            let mut out = Vec::new();
            for &theorem in &scenario.theorems {
                let k_range = (1, scenario.k_max);
                let report = match theorem {
                    Theorem::YangGap | Theorem::Bracket | Theorem::AveragedUpper => build_report(
                        theorem,
                        &ReportInputs::Spectrum(&sample),
                        k_range,
                        scenario.tolerance,
                        &source,
                    )?,
                    Theorem::Immersibility => build_report(
                        theorem,
                        &ReportInputs::Immersion {
                            sample: &sample,
                            h_sup_sq: bundle.curvature.sup_sq,
                        },
                        k_range,
                        scenario.tolerance,
                        &source,
                    )?,
                    Theorem::ReillySecond | Theorem::ReillyChain => build_report(
                        theorem,
                        &ReportInputs::Reilly {
                            n: bundle.mesh.intrinsic_dim(),
                            eigenvalues: &eigenvalues,
                            mean_h_sq: bundle.curvature.mean_sq,
                            h_sup_sq: bundle.curvature.sup_sq,
                        },
                        k_range,
                        scenario.tolerance,
                        &source,
                    )?,
                    other => {
                        return Err(Error::config(format!(
                            "theorem '{}' does not apply to mesh geometries",
                            other.tag()
                        )))
                    }
                };
                out.push(report);
            }
            Ok(out)
        })?;
        reports.extend(evaluated);
    }
    Ok(reports)
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        let _ = write!(out, "{b:02x}");
    }
    out
}

fn format_cell(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v}")
    }
}

/// Flat CSV table across all reports.
pub fn reports_to_csv(reports: &[InequalityReport]) -> String {
    let mut out = String::from("theorem,k,lhs,rhs,margin,lower,upper,discriminant,satisfied\n");
    for report in reports {
        for row in &report.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                report.theorem.tag(),
                row.k,
                format_cell(row.lhs),
                format_cell(row.rhs),
                format_cell(row.margin),
                row.lower.map(format_cell).unwrap_or_default(),
                row.upper.map(format_cell).unwrap_or_default(),
                row.discriminant.map(format_cell).unwrap_or_default(),
                row.satisfied
            );
        }
    }
    out
}

/// Plot-data text: per report a `k margin` block, plus a
/// `k lambda_top lower upper` block when the report carries brackets.
pub fn reports_to_plot_data(reports: &[InequalityReport]) -> String {
    let mut out = String::new();
    for report in reports {
        let _ = writeln!(out, "# {} margins: {}", report.theorem.tag(), report.source);
        let _ = writeln!(out, "# k margin");
        for row in &report.rows {
            let _ = writeln!(out, "{} {}", row.k, format_cell(row.margin));
        }
        let _ = writeln!(out);
        if report.rows.iter().any(|r| r.lower.is_some()) {
            let _ = writeln!(out, "# {} brackets: {}", report.theorem.tag(), report.source);
            let _ = writeln!(out, "# k lambda_top lower upper");
            for row in &report.rows {
                if let (Some(lo), Some(hi)) = (row.lower, row.upper) {
                    let _ = writeln!(
                        out,
                        "{} {} {} {}",
                        row.k,
                        format_cell(row.lhs),
                        format_cell(lo),
                        format_cell(hi)
                    );
                }
            }
            let _ = writeln!(out);
        }
    }
    out
}

#[derive(Debug, Serialize)]
struct ReportDocument<'a> {
    name: &'a str,
    toolkit_version: &'a str,
    seed: u64,
    all_satisfied: bool,
    reports: &'a [InequalityReport],
}

fn emit_outputs(
    scenario: &Scenario,
    reports: &[InequalityReport],
    out_dir: &Path,
    all_satisfied: bool,
) -> Result<Vec<FileDigest>> {
    std::fs::create_dir_all(out_dir)?;
    let doc = ReportDocument {
        name: &scenario.name,
        toolkit_version: env!("CARGO_PKG_VERSION"),
        seed: scenario.solver.seed,
        all_satisfied,
        reports,
    };
    let json = serde_json::to_string_pretty(&doc)
        .map_err(|e| Error::config(format!("report serialization failed: {e}")))?;
    let csv = reports_to_csv(reports);
    let plot = reports_to_plot_data(reports);

    let entries: [(PathBuf, &str); 3] = [
        (out_dir.join(format!("{}.report.json", scenario.name)), &json),
        (out_dir.join(format!("{}.csv", scenario.name)), &csv),
        (out_dir.join(format!("{}.plot.dat", scenario.name)), &plot),
    ];
    let mut files = Vec::new();
    for (path, contents) in &entries {
        if let Err(e) = std::fs::write(path, contents) {
            remove_outputs(out_dir, scenario, &files);
            return Err(Error::Io(e));
        }
        files.push(FileDigest {
            path: path.to_string_lossy().into_owned(),
            sha256: hex_digest(contents.as_bytes()),
        });
    }
    Ok(files)
}

fn remove_outputs(out_dir: &Path, scenario: &Scenario, written: &[FileDigest]) {
    for f in written {
        let _ = std::fs::remove_file(&f.path);
    }
    for suffix in ["report.json", "csv", "plot.dat", "manifest.json"] {
        let _ = std::fs::remove_file(out_dir.join(format!("{}.{suffix}", scenario.name)));
    }
}
