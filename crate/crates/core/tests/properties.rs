//! Cross-module property tests: scale covariance, root containment,
//! exact-vs-engine agreement, prefix monotonicity, solver invariances.

use nalgebra::DMatrix;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use eigenineq::exact::{self, rat, ratio, ModelSpectrum};
use eigenineq::inequality::{
    eigenmap_margin, eigenmap_quadratic_bounds, kohn_bounds, quadratic_bounds, simple_upper_bound,
    yang_margin, yang_sides, SpectrumSample,
};
use eigenineq::solver::{solve_smallest, SolveConfig};
use eigenineq::sparse::CooMatrix;

fn sample_strategy() -> impl Strategy<Value = (SpectrumSample, usize)> {
    // nondecreasing eigenvalues from positive gaps; bounded deltas
    (2..=30usize)
        .prop_flat_map(|len| {
            (
                prop::collection::vec(0.0f64..3.0, len),
                prop::collection::vec(-2.0f64..4.0, len),
                0.0f64..5.0,
                1u32..=5,
                1..len,
            )
        })
        .prop_map(|(gaps, deltas, base, n, k)| {
            let mut acc = base;
            let eigenvalues: Vec<f64> = gaps
                .iter()
                .map(|g| {
                    acc += g;
                    acc
                })
                .collect();
            let sample = SpectrumSample::new(n, eigenvalues)
                .unwrap()
                .with_delta_terms(deltas)
                .unwrap();
            (sample, k)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Scaling (lambda, delta) by a power of two scales gap margins by t^2
    /// and bracket roots by t, exactly in IEEE arithmetic; verdict signs are
    /// scale-invariant.
    #[test]
    fn scale_covariance((sample, k) in sample_strategy(), exp in -3i32..=6) {
        let t = (2.0f64).powi(exp);
        let scaled = SpectrumSample::new(
            sample.n,
            sample.eigenvalues.iter().map(|l| l * t).collect(),
        )
        .unwrap()
        .with_delta_terms(
            sample
                .delta_terms
                .clone()
                .unwrap()
                .iter()
                .map(|d| d * t)
                .collect(),
        )
        .unwrap();
        let margin = yang_margin(&sample, k).unwrap();
        let scaled_margin = yang_margin(&scaled, k).unwrap();
        prop_assert_eq!(scaled_margin, margin * t * t);

        let b = quadratic_bounds(&sample, k, 1e-12).unwrap();
        let bs = quadratic_bounds(&scaled, k, 1e-12).unwrap();
        if b.valid && bs.valid {
            // the discriminant scales by t^2 under the radical
            prop_assert!((bs.upper - b.upper * t).abs() <= 1e-12 * (1.0 + b.upper.abs() * t.abs()));
            prop_assert!((bs.lower - b.lower * t).abs() <= 1e-12 * (1.0 + b.lower.abs() * t.abs()));
        }
    }

    /// Whenever the gap margin is nonnegative, lambda_{k+1} lies inside the
    /// quadratic root bracket.
    #[test]
    fn root_containment((sample, k) in sample_strategy()) {
        if yang_margin(&sample, k).unwrap() >= 0.0 {
            let b = quadratic_bounds(&sample, k, 1e-12).unwrap();
            let top = sample.eigenvalues[k];
            let slack = 1e-9 * (1.0 + top.abs());
            prop_assert!(b.valid);
            prop_assert!(top >= b.lower - slack && top <= b.upper + slack,
                "top {} not in [{}, {}]", top, b.lower, b.upper);
        }
    }

    /// The averaged upper bound dominates the bracket upper root when every
    /// delta is replaced by the supremum.
    #[test]
    fn averaged_bound_dominates((sample, k) in sample_strategy()) {
        let sup = sample
            .delta_terms
            .clone()
            .unwrap()
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let constant = SpectrumSample::new(sample.n, sample.eigenvalues.clone())
            .unwrap()
            .with_delta_terms(vec![sup; sample.eigenvalues.len()])
            .unwrap()
            .with_delta_sup(sup);
        let b = quadratic_bounds(&constant, k, 1e-12).unwrap();
        let simple = simple_upper_bound(&constant, k).unwrap();
        if b.valid {
            prop_assert!(simple >= b.upper - 1e-9 * (1.0 + simple.abs()),
                "simple {} below upper root {}", simple, b.upper);
        }
    }

    /// Kohn bracket upper root never exceeds the averaged bound.
    #[test]
    fn kohn_upper_below_simple(
        gaps in prop::collection::vec(0.0f64..2.0, 2..20),
        first in 0.01f64..3.0,
        n in 1u32..=4,
    ) {
        let mut acc = first;
        let lambdas: Vec<f64> = gaps
            .iter()
            .map(|g| {
                acc += g;
                acc
            })
            .collect();
        for k in 1..lambdas.len() {
            let kb = kohn_bounds(n, &lambdas, k, 1e-12).unwrap();
            prop_assert!(kb.bound.upper <= kb.simple + 1e-9 * (1.0 + kb.simple.abs()));
        }
    }

    /// Eigenmap bracket contains lambda_{k+1} whenever the gap margin is
    /// nonnegative.
    #[test]
    fn eigenmap_containment(
        gaps in prop::collection::vec(0.0f64..2.0, 2..16),
        lambda_map in 0.05f64..4.0,
        qs in prop::collection::vec(-1.0f64..1.0, 16),
    ) {
        let mut acc = 0.0;
        let lambdas: Vec<f64> = std::iter::once(0.0)
            .chain(gaps.iter().map(|g| {
                acc += g;
                acc
            }))
            .collect();
        let len = lambdas.len();
        let sample = SpectrumSample::new(2, lambdas)
            .unwrap()
            .with_q_integrals(qs[..len].to_vec())
            .unwrap();
        for k in 1..len {
            if eigenmap_margin(lambda_map, &sample, k).unwrap() >= 0.0 {
                let b = eigenmap_quadratic_bounds(lambda_map, &sample, k, 1e-12).unwrap();
                let top = sample.eigenvalues[k];
                prop_assert!(b.valid);
                prop_assert!(
                    top >= b.lower - 1e-9 * (1.0 + top.abs())
                        && top <= b.upper + 1e-9 * (1.0 + top.abs())
                );
            }
        }
    }

    /// Model-spectrum prefixes are nondecreasing, and a shorter prefix is a
    /// prefix of a longer one.
    #[test]
    fn prefix_monotone_and_nested(
        n in 1u32..=5,
        short in 1usize..20,
        extra in 1usize..15,
        torus_num in 1i64..5,
        torus_den in 1i64..4,
    ) {
        let spectra = [
            ModelSpectrum::sphere(n).unwrap(),
            ModelSpectrum::flat_torus(&[ratio(torus_num, torus_den), rat(1)]).unwrap(),
        ];
        for spectrum in &spectra {
            let a = spectrum.prefix(short).unwrap();
            let b = spectrum.prefix(short + extra).unwrap();
            prop_assert_eq!(&b[..short], &a[..]);
            for w in b.windows(2) {
                prop_assert!(w[0] <= w[1]);
            }
        }
    }

    /// The exact saturation sides agree with the floating-point engine on
    /// the same (small-integer) data: a dual-route check of both modules.
    #[test]
    fn exact_sides_match_engine(n in 1u32..=4, m in 1u64..=4) {
        let (lhs, rhs) = exact::sphere_saturation_sides(n, m, &rat(0)).unwrap();
        let k = exact::gap_index(n, m).unwrap().to_u64().unwrap() as usize;
        let spectrum = ModelSpectrum::sphere(n).unwrap();
        let lambdas: Vec<f64> = spectrum
            .prefix(k + 1)
            .unwrap()
            .iter()
            .map(|r| r.to_f64().unwrap())
            .collect();
        let delta = f64::from(n) * f64::from(n) / 4.0;
        let sample = SpectrumSample::new(n, lambdas)
            .unwrap()
            .with_delta_terms(vec![delta; k + 1])
            .unwrap();
        let (lhs_f, rhs_f) = yang_sides(&sample, k).unwrap();
        prop_assert_eq!(lhs_f, lhs.to_f64().unwrap());
        prop_assert_eq!(rhs_f, rhs.to_f64().unwrap());
        prop_assert_eq!(lhs_f, rhs_f);
    }
}

/// Gap margins vanish at every gap index and repeat the previous gap's
/// sides at non-gap k, for exact sphere prefixes across dimensions.
#[test]
fn sphere_prefix_gap_structure() {
    for n in 1u32..=5 {
        let spectrum = ModelSpectrum::sphere(n).unwrap();
        let count = 40;
        let lambdas: Vec<f64> = spectrum
            .prefix(count)
            .unwrap()
            .iter()
            .map(|r| r.to_f64().unwrap())
            .collect();
        let delta = f64::from(n) * f64::from(n) / 4.0;
        let sample = SpectrumSample::new(n, lambdas.clone())
            .unwrap()
            .with_delta_terms(vec![delta; count])
            .unwrap();
        let mut last_gap_sides = None;
        for k in 1..count {
            let sides = yang_sides(&sample, k).unwrap();
            if lambdas[k] > lambdas[k - 1] {
                let margin = sides.1 - sides.0;
                assert_eq!(margin, 0.0, "n={n}, gap k={k}");
                last_gap_sides = Some(sides);
            } else if let Some(prev) = last_gap_sides {
                assert_eq!(sides, prev, "n={n}, non-gap k={k}");
            }
        }
    }
}

/// Computed eigenvalues are invariant (to 1e-8 relative) under a symmetric
/// permutation of H and M.
#[test]
fn solver_permutation_invariance() {
    let dim = 40;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let raw = DMatrix::<f64>::from_fn(dim, dim, |_, _| rng.random::<f64>() - 0.5);
    let sym = (&raw + raw.transpose()) * 0.5;
    let mass: Vec<f64> = (0..dim).map(|_| 0.5 + rng.random::<f64>()).collect();

    let mut perm: Vec<usize> = (0..dim).collect();
    // deterministic shuffle
    for i in (1..dim).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }

    let mut coo_a = CooMatrix::new(dim);
    let mut coo_b = CooMatrix::new(dim);
    let mut mass_b = vec![0.0; dim];
    for i in 0..dim {
        mass_b[perm[i]] = mass[i];
        for j in 0..dim {
            coo_a.push(i, j, sym[(i, j)]);
            coo_b.push(perm[i], perm[j], sym[(i, j)]);
        }
    }
    let cfg = SolveConfig::with_count(6);
    let a = solve_smallest(&coo_a.to_csr(), &mass, &cfg).unwrap();
    let b = solve_smallest(&coo_b.to_csr(), &mass_b, &cfg).unwrap();
    for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
        assert!((x - y).abs() <= 1e-8 * x.abs().max(1.0), "{x} vs {y}");
    }
}

/// Saturation invariant on the spec grid plus the non-gap equality seen
/// through the exact route.
#[test]
fn saturation_invariant_grid() {
    for n in 1u32..=6 {
        for m in 1u64..=8 {
            for g in [rat(0), ratio(1, 4), rat(-3), ratio(17, 5)] {
                assert!(
                    num_traits::Zero::is_zero(&exact::verify_sphere_saturation(n, m, &g).unwrap()),
                    "n={n} m={m}"
                );
            }
        }
    }
}
