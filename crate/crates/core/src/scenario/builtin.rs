//! Built-in scenario catalog.

use super::{GeometrySpec, PotentialSpec, Scenario, SolverSpec};
use crate::inequality::{Theorem, TOL_ALGEBRAIC, TOL_DISCRETE};

fn base(
    name: &str,
    geometry: GeometrySpec,
    theorems: Vec<Theorem>,
    k_max: usize,
    tolerance: f64,
) -> Scenario {
    Scenario {
        name: name.to_string(),
        geometry,
        potentials: vec![PotentialSpec::Zero],
        theorems,
        k_max,
        solver: SolverSpec::default(),
        tolerance,
    }
}

pub fn builtin_scenarios() -> Vec<Scenario> {
    let mut out = Vec::new();

    out.push(base(
        "sphere-exact",
        GeometrySpec::SphereExact {
            dims: vec![2, 3, 4, 5, 6],
        },
        vec![Theorem::YangGap, Theorem::Bracket, Theorem::AveragedUpper],
        20,
        TOL_ALGEBRAIC,
    ));

    out.push(base(
        "sphere-saturation",
        GeometrySpec::SphereSaturation {
            dims: vec![1, 2, 3, 4, 5, 6],
            m_max: 8,
            g_values: vec![
                "0".to_string(),
                "1/4".to_string(),
                "-3".to_string(),
                "17/5".to_string(),
            ],
        },
        vec![Theorem::Saturation],
        1,
        0.0,
    ));

    out.push(base(
        "icosphere-yang",
        GeometrySpec::Icosphere {
            subdivisions: 4,
            radius: 1.0,
        },
        vec![Theorem::YangGap, Theorem::Bracket, Theorem::AveragedUpper],
        20,
        TOL_DISCRETE,
    ));

    let mut geom_pot = base(
        "icosphere-geometric-potential",
        GeometrySpec::Icosphere {
            subdivisions: 4,
            radius: 1.0,
        },
        vec![Theorem::YangGap, Theorem::Bracket],
        20,
        TOL_DISCRETE,
    );
    geom_pot.potentials = vec![
        PotentialSpec::Geometric { g: 0.0 },
        PotentialSpec::Geometric { g: 0.25 },
        PotentialSpec::Geometric { g: 1.0 },
    ];
    out.push(geom_pot);

    out.push(base(
        "ellipsoid-yang",
        GeometrySpec::Ellipsoid {
            a: 1.0,
            b: 1.0,
            c: 1.5,
            subdivisions: 4,
        },
        vec![Theorem::YangGap, Theorem::Bracket, Theorem::AveragedUpper],
        20,
        TOL_DISCRETE,
    ));

    out.push(base(
        "clifford-torus-reilly",
        GeometrySpec::CliffordTorus { resolution: 48 },
        vec![Theorem::ReillySecond, Theorem::ReillyChain, Theorem::YangGap],
        10,
        TOL_DISCRETE,
    ));

    out.push(base(
        "flat-torus-eigenmap",
        GeometrySpec::FlatTorusEigenmap { resolution: 64 },
        vec![Theorem::EigenmapGap, Theorem::EigenmapBracket],
        20,
        TOL_ALGEBRAIC,
    ));

    out.push(base(
        "disk-dirichlet",
        GeometrySpec::Disk {
            rings: 24,
            radius: 1.0,
        },
        vec![Theorem::YangGap, Theorem::Bracket, Theorem::AveragedUpper],
        15,
        TOL_DISCRETE,
    ));

    out.push(base(
        "heisenberg-box",
        GeometrySpec::HeisenbergBox {
            n: 1,
            lo: 0.0,
            hi: 1.0,
            resolution: 16,
        },
        vec![Theorem::KohnGap, Theorem::KohnBracket, Theorem::KohnSimple],
        10,
        TOL_DISCRETE,
    ));

    out.push(base(
        "immersibility-audit",
        GeometrySpec::Icosphere {
            subdivisions: 3,
            radius: 1.0,
        },
        vec![Theorem::Immersibility],
        12,
        TOL_DISCRETE,
    ));

    out.push(base(
        "reilly-chain",
        GeometrySpec::Icosphere {
            subdivisions: 4,
            radius: 1.0,
        },
        vec![Theorem::ReillySecond, Theorem::ReillyChain],
        10,
        TOL_DISCRETE,
    ));

    out
}
