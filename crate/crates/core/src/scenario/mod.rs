//! Reproducible batch scenarios: geometry + potential + theorem list in,
//! serialized inequality reports out.
//!
//! Scenarios are described by a TOML config (see the repository README for
//! the grammar) or picked from the built-in catalog. A run emits, per
//! scenario, a JSON report document, a flat CSV table, a plot-data text
//! file, and a manifest with timings and file digests. Runs are
//! deterministic for a fixed seed; re-running a scenario reproduces the CSV
//! byte for byte.

mod builtin;
mod run;

pub use builtin::builtin_scenarios;
pub use run::{run_scenario, FileDigest, RunOutput, RunManifest, StageTiming};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequality::Theorem;

/// One reproducible batch run: geometry, potentials, theorem list, solver
/// settings and verdict tolerance.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub geometry: GeometrySpec,
    /// Potentials to run; each produces its own reports. Defaults to zero.
    #[serde(default = "default_potentials")]
    pub potentials: Vec<PotentialSpec>,
    pub theorems: Vec<Theorem>,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    #[serde(default)]
    pub solver: SolverSpec,
    /// Relative verdict tolerance (0 for exact data).
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_potentials() -> Vec<PotentialSpec> {
    vec![PotentialSpec::Zero]
}

fn default_k_max() -> usize {
    10
}

fn default_tolerance() -> f64 {
    crate::inequality::TOL_DISCRETE
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeometrySpec {
    /// Exact unit-sphere spectra for a list of dimensions.
    SphereExact { dims: Vec<u32> },
    /// Exact flat-torus spectrum; sides are rationals in units of 2*pi
    /// ("1", "1/2", ...). `clifford = true` selects the minimal torus in
    /// the 3-sphere instead.
    FlatTorusExact {
        #[serde(default)]
        sides: Vec<String>,
        #[serde(default)]
        clifford: bool,
    },
    /// Exact-arithmetic saturation audit over a parameter grid.
    SphereSaturation {
        dims: Vec<u32>,
        m_max: u64,
        g_values: Vec<String>,
    },
    Icosphere {
        subdivisions: u32,
        #[serde(default = "default_radius")]
        radius: f64,
    },
    Ellipsoid {
        a: f64,
        b: f64,
        c: f64,
        subdivisions: u32,
    },
    CliffordTorus { resolution: usize },
    FlatTorusMesh {
        lx: f64,
        ly: f64,
        resolution: usize,
    },
    /// Flat 2pi x 2pi torus: validates the canonical eigenmap on the mesh,
    /// then evaluates the eigenmap inequalities on the exact lattice
    /// spectrum.
    FlatTorusEigenmap { resolution: usize },
    Disk {
        rings: usize,
        #[serde(default = "default_radius")]
        radius: f64,
    },
    SphericalCap { angle: f64, rings: usize },
    HeisenbergBox {
        n: u32,
        lo: f64,
        hi: f64,
        resolution: usize,
    },
    MeshFile { path: String },
}

fn default_radius() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialSpec {
    Zero,
    Constant { value: f64 },
    /// q = g |h|^2
    Geometric { g: f64 },
    /// Per-vertex values, one number per line.
    Tabulated { path: String },
}

impl PotentialSpec {
    pub fn label(&self) -> String {
        match self {
            PotentialSpec::Zero => "q=0".to_string(),
            PotentialSpec::Constant { value } => format!("q={value}"),
            PotentialSpec::Geometric { g } => format!("q={g}|h|^2"),
            PotentialSpec::Tabulated { path } => format!("q=file:{path}"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    #[serde(default = "default_solver_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_solver_tol() -> f64 {
    1e-8
}

fn default_max_iter() -> usize {
    800
}

fn default_seed() -> u64 {
    7
}

impl Default for SolverSpec {
    fn default() -> Self {
        SolverSpec {
            tol: default_solver_tol(),
            max_iter: default_max_iter(),
            seed: default_seed(),
        }
    }
}

/// CLI-level overrides applied on top of a parsed or built-in scenario.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub k_max: Option<usize>,
    pub tolerance: Option<f64>,
    pub seed: Option<u64>,
    pub resolution: Option<usize>,
}

impl Scenario {
    /// Parse a scenario from TOML text, rejecting unknown fields, then run
    /// the static validity checks.
    pub fn from_toml(text: &str) -> Result<Scenario> {
        let scenario: Scenario = toml::from_str(text)
            .map_err(|e| Error::config(format!("config parse failure: {e}")))?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("scenario serializes")
    }

    /// Static checks that never execute a solve.
    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::config("scenario name must be nonempty"));
        }
        if self.theorems.is_empty() {
            return Err(Error::config("theorem list must be nonempty"));
        }
        if self.k_max < 1 {
            return Err(Error::config("k_max must be >= 1"));
        }
        if self.potentials.is_empty() {
            return Err(Error::config("potential list must be nonempty"));
        }
        if !(self.tolerance >= 0.0) {
            return Err(Error::config("tolerance must be >= 0"));
        }
        match &self.geometry {
            GeometrySpec::SphereExact { dims } => {
                if dims.is_empty() || dims.iter().any(|&d| d < 1) {
                    return Err(Error::config("sphere dims must be a nonempty list of d >= 1"));
                }
            }
            GeometrySpec::FlatTorusExact { sides, clifford } => {
                if !clifford {
                    if sides.is_empty() {
                        return Err(Error::config("torus sides must be nonempty (or clifford)"));
                    }
                    for s in sides {
                        crate::exact::parse_rational(s)?;
                    }
                }
            }
            GeometrySpec::SphereSaturation {
                dims,
                m_max,
                g_values,
            } => {
                if dims.is_empty() || *m_max < 1 || g_values.is_empty() {
                    return Err(Error::config("saturation audit needs dims, m_max >= 1, g values"));
                }
                for g in g_values {
                    crate::exact::parse_rational(g)?;
                }
            }
            GeometrySpec::Icosphere { subdivisions, radius } => {
                if *subdivisions > 8 || !(*radius > 0.0) {
                    return Err(Error::config("bad icosphere parameters"));
                }
            }
            GeometrySpec::Ellipsoid { a, b, c, subdivisions } => {
                if !(*a > 0.0 && *b > 0.0 && *c > 0.0) || *subdivisions > 8 {
                    return Err(Error::config("bad ellipsoid parameters"));
                }
            }
            GeometrySpec::CliffordTorus { resolution }
            | GeometrySpec::FlatTorusEigenmap { resolution } => {
                if *resolution < 3 {
                    return Err(Error::config("torus resolution must be >= 3"));
                }
            }
            GeometrySpec::FlatTorusMesh { lx, ly, resolution } => {
                if !(*lx > 0.0 && *ly > 0.0) || *resolution < 3 {
                    return Err(Error::config("bad flat torus parameters"));
                }
            }
            GeometrySpec::Disk { rings, radius } => {
                if *rings < 1 || !(*radius > 0.0) {
                    return Err(Error::config("bad disk parameters"));
                }
            }
            GeometrySpec::SphericalCap { angle, rings } => {
                if !(*angle > 0.0 && *angle < std::f64::consts::PI) || *rings < 1 {
                    return Err(Error::config("bad cap parameters"));
                }
            }
            GeometrySpec::HeisenbergBox { n, lo, hi, resolution } => {
                if *n < 1 || !(hi > lo) || *resolution < 2 {
                    return Err(Error::config("bad Heisenberg box parameters"));
                }
            }
            GeometrySpec::MeshFile { path } => {
                if path.is_empty() {
                    return Err(Error::config("mesh path must be nonempty"));
                }
            }
        }
        Ok(())
    }

    /// Apply CLI overrides; `resolution` retargets whichever refinement knob
    /// the geometry has.
    pub fn with_overrides(mut self, ov: &Overrides) -> Scenario {
        if let Some(k) = ov.k_max {
            self.k_max = k;
        }
        if let Some(t) = ov.tolerance {
            self.tolerance = t;
        }
        if let Some(s) = ov.seed {
            self.solver.seed = s;
        }
        if let Some(r) = ov.resolution {
            match &mut self.geometry {
                GeometrySpec::Icosphere { subdivisions, .. }
                | GeometrySpec::Ellipsoid { subdivisions, .. } => *subdivisions = r as u32,
                GeometrySpec::CliffordTorus { resolution }
                | GeometrySpec::FlatTorusMesh { resolution, .. }
                | GeometrySpec::FlatTorusEigenmap { resolution }
                | GeometrySpec::HeisenbergBox { resolution, .. } => *resolution = r,
                GeometrySpec::Disk { rings, .. } | GeometrySpec::SphericalCap { rings, .. } => {
                    *rings = r
                }
                GeometrySpec::SphereExact { .. }
                | GeometrySpec::FlatTorusExact { .. }
                | GeometrySpec::SphereSaturation { .. }
                | GeometrySpec::MeshFile { .. } => {}
            }
        }
        self
    }
}

/// Names of the built-in scenarios, for `list` and name lookup.
pub fn list_scenarios() -> Vec<String> {
    builtin_scenarios().into_iter().map(|s| s.name).collect()
}

/// Find a built-in scenario by name.
pub fn find_scenario(name: &str) -> Option<Scenario> {
    builtin_scenarios().into_iter().find(|s| s.name == name)
}

/// Parse and statically validate a config file, returning the normalized
/// scenario (what `validate` prints back).
pub fn validate_config(path: &std::path::Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    Scenario::from_toml(&text)
}
