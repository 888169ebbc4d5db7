//! Exact model spectra and the exact-arithmetic saturation check for the
//! round sphere.
//!
//! Everything in this module is big-rational arithmetic: the saturation
//! identity must come out *identically* zero, which floating point cannot
//! certify. Sphere spectra use the classical level structure (eigenvalue
//! `l(l+n-1)` with the binomial-difference multiplicity); flat-torus spectra
//! are enumerated over the dual lattice.
//!
//! Flat-torus side lengths are given in units of 2*pi: a side `s` stands for
//! the circumference `2*pi*s`, so the eigenvalues `(k/s)^2` stay rational.
//! Constructors taking *squared* sides admit tori whose sides are irrational
//! but whose squared sides are rational (the minimal torus in the 3-sphere
//! has squared sides 1/2).

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar, always in canonical reduced form.
pub type Rational = BigRational;

/// Rational from an integer.
pub fn rat(v: i64) -> Rational {
    BigRational::from_integer(BigInt::from(v))
}

/// Rational from a numerator/denominator pair.
pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse a rational from "p", "-p/q" or a plain integer string.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parts: Vec<&str> = s.split('/').collect();
    let bad = || Error::domain(format!("cannot parse rational from '{s}'"));
    match parts.as_slice() {
        [p] => Ok(BigRational::from_integer(p.parse::<BigInt>().map_err(|_| bad())?)),
        [p, q] => {
            let den: BigInt = q.parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(Error::domain(format!("zero denominator in '{s}'")));
            }
            Ok(BigRational::new(p.parse().map_err(|_| bad())?, den))
        }
        _ => Err(bad()),
    }
}

/// Binomial coefficient C(n, k); zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= BigUint::from(i);
    }
    acc
}

fn check_dim(n: u32) -> Result<u64> {
    if n < 1 {
        return Err(Error::domain(format!("sphere dimension must be >= 1, got {n}")));
    }
    Ok(u64::from(n))
}

/// Eigenvalue of the Laplacian on the unit n-sphere at level `l`: l(l+n-1).
pub fn sphere_eigenvalue(n: u32, level: u64) -> Result<Rational> {
    let n = check_dim(n)?;
    let l = BigInt::from(level);
    Ok(BigRational::from_integer(&l * (&l + BigInt::from(n - 1))))
}

/// Multiplicity of sphere level `l`: C(n+l, n) - C(n+l-2, n).
///
/// Gives 1 at l = 0 and n+1 at l = 1.
pub fn sphere_multiplicity(n: u32, level: u64) -> Result<BigUint> {
    let n = check_dim(n)?;
    let first = binomial(n + level, n);
    let second = if level >= 2 {
        binomial(n + level - 2, n)
    } else {
        BigUint::zero()
    };
    Ok(first - second)
}

/// Cumulative multiplicity through level `m`, i.e. the index k at which the
/// sphere spectrum has a gap (lambda_{k+1} > lambda_k). Computed from the
/// closed form ((n+2m)/n) C(n+m-1, m); the division is exact.
pub fn gap_index(n: u32, m: u64) -> Result<BigUint> {
    let n = check_dim(n)?;
    let prod = BigUint::from(n + 2 * m) * binomial(n + m - 1, m);
    let n_big = BigUint::from(n);
    if (&prod % &n_big) != BigUint::zero() {
        return Err(Error::domain(format!(
            "gap index closed form not divisible by n for n={n}, m={m}"
        )));
    }
    Ok(prod / n_big)
}

/// Kind of model space with an exactly known spectrum.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceKind {
    /// Unit round sphere of dimension n.
    Sphere { dim: u32 },
    /// Rectangular flat torus; `side_sq[j]` is the squared side length of
    /// axis j in units of (2*pi)^2.
    FlatTorus { side_sq: Vec<Rational> },
}

/// A model space together with lazily generated spectrum levels.
#[derive(Debug, Clone)]
pub struct ModelSpectrum {
    kind: SpaceKind,
}

impl ModelSpectrum {
    pub fn sphere(dim: u32) -> Result<Self> {
        check_dim(dim)?;
        Ok(ModelSpectrum {
            kind: SpaceKind::Sphere { dim },
        })
    }

    /// Flat torus with the given side lengths in units of 2*pi.
    pub fn flat_torus(sides: &[Rational]) -> Result<Self> {
        Self::flat_torus_sq(
            &sides
                .iter()
                .map(|s| s * s)
                .collect::<Vec<_>>(),
        )
    }

    /// Flat torus specified by squared side lengths in units of (2*pi)^2.
    pub fn flat_torus_sq(side_sq: &[Rational]) -> Result<Self> {
        if side_sq.is_empty() {
            return Err(Error::domain("flat torus needs at least one side"));
        }
        if side_sq.iter().any(|s| !s.is_positive()) {
            return Err(Error::domain("flat torus sides must be positive"));
        }
        Ok(ModelSpectrum {
            kind: SpaceKind::FlatTorus {
                side_sq: side_sq.to_vec(),
            },
        })
    }

    /// The minimal (Clifford) torus in the unit 3-sphere: squared sides 1/2.
    pub fn clifford_torus() -> Self {
        ModelSpectrum {
            kind: SpaceKind::FlatTorus {
                side_sq: vec![ratio(1, 2), ratio(1, 2)],
            },
        }
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    /// Distinct eigenvalue levels (value, multiplicity), strictly increasing,
    /// covering at least `min_count` eigenvalues counted with multiplicity.
    pub fn levels(&self, min_count: usize) -> Result<Vec<(Rational, u64)>> {
        match &self.kind {
            SpaceKind::Sphere { dim } => {
                let mut out = Vec::new();
                let mut total: u64 = 0;
                let mut level = 0u64;
                while (total as usize) < min_count {
                    let mult = sphere_multiplicity(*dim, level)?
                        .to_u64()
                        .ok_or_else(|| Error::domain("sphere multiplicity overflows u64"))?;
                    out.push((sphere_eigenvalue(*dim, level)?, mult));
                    total += mult;
                    level += 1;
                }
                Ok(out)
            }
            SpaceKind::FlatTorus { side_sq } => {
                let values = torus_values(side_sq, min_count);
                let mut out: Vec<(Rational, u64)> = Vec::new();
                for v in values {
                    match out.last_mut() {
                        Some((last, mult)) if *last == v => *mult += 1,
                        _ => out.push((v, 1)),
                    }
                }
                Ok(out)
            }
        }
    }

    /// First `count` eigenvalues with multiplicity expanded, nondecreasing.
    pub fn prefix(&self, count: usize) -> Result<Vec<Rational>> {
        if count == 0 {
            return Err(Error::domain("spectrum prefix length must be >= 1"));
        }
        let levels = self.levels(count)?;
        let mut out = Vec::with_capacity(count);
        'outer: for (value, mult) in levels {
            for _ in 0..mult {
                out.push(value.clone());
                if out.len() == count {
                    break 'outer;
                }
            }
        }
        Ok(out)
    }
}

/// All torus eigenvalues below a radius large enough to certify the first
/// `count`, sorted. The radius doubles until at least `count` values lie
/// below half of it, which guarantees no eigenvalue <= the count-th one was
/// outside the enumerated ball.
fn torus_values(side_sq: &[Rational], count: usize) -> Vec<Rational> {
    let inv: Vec<Rational> = side_sq.iter().map(|s| s.recip()).collect();
    let mut radius = inv
        .iter()
        .fold(rat(1), |m, v| if *v > m { v.clone() } else { m })
        * rat(4);
    loop {
        let mut values = Vec::new();
        enumerate_lattice(&inv, &radius, &mut vec![0i64; inv.len()], 0, &rat(0), &mut values);
        let half = &radius / rat(2);
        if values.iter().filter(|v| **v <= half).count() >= count {
            values.sort();
            return values;
        }
        radius *= rat(2);
    }
}

fn enumerate_lattice(
    inv: &[Rational],
    radius: &Rational,
    point: &mut Vec<i64>,
    axis: usize,
    partial: &Rational,
    out: &mut Vec<Rational>,
) {
    if axis == inv.len() {
        out.push(partial.clone());
        return;
    }
    let budget = radius - partial;
    // integer bound: largest |k| with k^2 * inv[axis] <= budget
    let mut bound = (budget.to_f64().unwrap_or(0.0).max(0.0) / inv[axis].to_f64().unwrap())
        .sqrt()
        .floor() as i64;
    // exact adjustment against float error
    let val = |k: i64| rat(k) * rat(k) * &inv[axis];
    while val(bound + 1) <= budget {
        bound += 1;
    }
    while bound > 0 && val(bound) > budget {
        bound -= 1;
    }
    for k in -bound..=bound {
        let next = partial + val(k);
        if next <= *radius {
            point[axis] = k;
            enumerate_lattice(inv, radius, point, axis + 1, &next, out);
        }
    }
}

/// Both sides of the gap-quadratic inequality for the unit n-sphere spectrum
/// shifted by g*n^2 (the Schrodinger operator with potential g*|h|^2, where
/// |h|^2 = n^2), evaluated at the gap index k = gap_index(n, m).
///
/// Returns (lhs, rhs) where the inequality is lhs <= rhs and the shifted
/// delta terms are n^2/4 - g*n^2.
pub fn sphere_saturation_sides(n: u32, m: u64, g: &Rational) -> Result<(Rational, Rational)> {
    check_dim(n)?;
    if m < 1 {
        return Err(Error::domain(format!("saturation check needs m >= 1, got {m}")));
    }
    let n_rat = rat(i64::from(n));
    let shift = g * &n_rat * &n_rat;
    let delta = &n_rat * &n_rat / rat(4) - &shift;
    let top = sphere_eigenvalue(n, m + 1)? + &shift;
    let mut lhs = rat(0);
    let mut rhs = rat(0);
    for level in 0..=m {
        let mult = BigRational::from_integer(BigInt::from(sphere_multiplicity(n, level)?));
        let lam = sphere_eigenvalue(n, level)? + &shift;
        let diff = &top - &lam;
        lhs += &mult * &n_rat * &diff * &diff;
        rhs += &mult * rat(4) * &diff * (&lam + &delta);
    }
    Ok((lhs, rhs))
}

/// Residual rhs - lhs of the saturation identity; must be exactly zero for
/// every n >= 1, m >= 1 and every rational g.
pub fn verify_sphere_saturation(n: u32, m: u64, g: &Rational) -> Result<Rational> {
    let (lhs, rhs) = sphere_saturation_sides(n, m, g)?;
    Ok(rhs - lhs)
}

/// One level's term of the polynomial identity behind the saturation proof:
///
/// (n-1)! * mu_{n,l} * (L - e_l) * ((n+4) e_l + n^2 - n L)
///
/// with e_l = l(l+n-1) and L = e_{m+1}. For l >= 1 this equals the product
/// form (m-l+1)(n+m+l)(2l+n-1)(4l(l-1) - n^2(m-l) - n(m^2+m-l(l+3)))
/// (n+l-2)!/l!; the multiplicity-weighted form extends it to l = 0, where
/// the factorial form is undefined at n = 1. The sum over l = 0..=m is
/// identically zero and equals (n-1)! times the saturation residual at g = 0.
pub fn saturation_summand(n: u32, m: u64, level: u64) -> Result<Rational> {
    check_dim(n)?;
    if m < 1 {
        return Err(Error::domain(format!("summand needs m >= 1, got {m}")));
    }
    if level > m {
        return Err(Error::domain(format!("summand level {level} exceeds m = {m}")));
    }
    let n_i = BigInt::from(n);
    let e = sphere_eigenvalue(n, level)?;
    let top = sphere_eigenvalue(n, m + 1)?;
    let mu = BigRational::from_integer(BigInt::from(sphere_multiplicity(n, level)?));
    let fact = BigRational::from_integer(BigInt::from(factorial(u64::from(n) - 1)));
    let n_rat = BigRational::from_integer(n_i);
    let bracket = (&n_rat + rat(4)) * &e + &n_rat * &n_rat - &n_rat * &top;
    Ok(fact * mu * (&top - &e) * bracket)
}

/// Sum of `saturation_summand` over levels 0..=m; identically zero.
pub fn saturation_summand_sum(n: u32, m: u64) -> Result<Rational> {
    let mut acc = rat(0);
    for level in 0..=m {
        acc += saturation_summand(n, m, level)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_eigenvalue_examples() {
        assert_eq!(sphere_eigenvalue(2, 1).unwrap(), rat(2));
        assert_eq!(sphere_eigenvalue(5, 0).unwrap(), rat(0));
        assert_eq!(sphere_eigenvalue(3, 2).unwrap(), rat(8));
        assert!(sphere_eigenvalue(0, 1).is_err());
    }

    #[test]
    fn sphere_multiplicity_examples() {
        assert_eq!(sphere_multiplicity(3, 1).unwrap(), BigUint::from(4u32));
        assert_eq!(sphere_multiplicity(2, 0).unwrap(), BigUint::from(1u32));
        assert_eq!(sphere_multiplicity(2, 2).unwrap(), BigUint::from(5u32));
        // closed form from the multiplicity product: (n+2l-1) n..(n+l-2) / l!
        assert_eq!(sphere_multiplicity(1, 5).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn gap_index_examples() {
        assert_eq!(gap_index(2, 1).unwrap(), BigUint::from(4u32));
        assert_eq!(gap_index(2, 2).unwrap(), BigUint::from(9u32));
        assert_eq!(gap_index(1, 0).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn gap_index_matches_cumulative_sum() {
        for n in 1..=8u32 {
            for m in 0..=12u64 {
                let mut cum = BigUint::zero();
                for l in 0..=m {
                    cum += sphere_multiplicity(n, l).unwrap();
                }
                assert_eq!(gap_index(n, m).unwrap(), cum, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn sphere_prefix_example() {
        let s = ModelSpectrum::sphere(2).unwrap();
        let p = s.prefix(5).unwrap();
        assert_eq!(p, vec![rat(0), rat(2), rat(2), rat(2), rat(6)]);
        assert_eq!(s.prefix(1).unwrap(), vec![rat(0)]);
    }

    #[test]
    fn torus_prefix_example() {
        // 2*pi x 2*pi torus: sides (1, 1) in 2*pi units, eigenvalues |k|^2
        let t = ModelSpectrum::flat_torus(&[rat(1), rat(1)]).unwrap();
        let p = t.prefix(6).unwrap();
        assert_eq!(p, vec![rat(0), rat(1), rat(1), rat(1), rat(1), rat(2)]);
    }

    #[test]
    fn clifford_torus_prefix() {
        let t = ModelSpectrum::clifford_torus();
        let p = t.prefix(9).unwrap();
        let expect: Vec<Rational> = [0, 2, 2, 2, 2, 4, 4, 4, 4].iter().map(|&v| rat(v)).collect();
        assert_eq!(p, expect);
    }

    #[test]
    fn torus_levels_group_multiplicities() {
        let t = ModelSpectrum::flat_torus(&[rat(1), rat(1)]).unwrap();
        let levels = t.levels(6).unwrap();
        assert_eq!(levels[0], (rat(0), 1));
        assert_eq!(levels[1], (rat(1), 4));
        for w in levels.windows(2) {
            assert!(w[0].0 < w[1].0);
        }
    }

    #[test]
    fn saturation_hand_check() {
        // S^2, m=1 (k=4): lhs = 2(36+3*16) = 168, rhs = 4(6*1+3*4*3) = 168
        let (lhs, rhs) = sphere_saturation_sides(2, 1, &rat(0)).unwrap();
        assert_eq!(lhs, rat(168));
        assert_eq!(rhs, rat(168));
        assert_eq!(verify_sphere_saturation(2, 1, &rat(0)).unwrap(), rat(0));
        assert_eq!(verify_sphere_saturation(3, 2, &rat(0)).unwrap(), rat(0));
        assert_eq!(verify_sphere_saturation(2, 1, &ratio(1, 4)).unwrap(), rat(0));
    }

    #[test]
    fn saturation_residual_zero_on_grid() {
        for n in 1..=6u32 {
            for m in 1..=8u64 {
                for g in [rat(0), ratio(1, 4), rat(-3), ratio(17, 5)] {
                    assert_eq!(
                        verify_sphere_saturation(n, m, &g).unwrap(),
                        rat(0),
                        "n={n} m={m} g={g}"
                    );
                }
            }
        }
    }

    #[test]
    fn summand_factorial_form_matches_for_positive_levels() {
        // product form (m-l+1)(n+m+l)(2l+n-1)(...)(n+l-2)!/l!
        let product_form = |n: u64, m: u64, l: u64| -> Rational {
            let n_i = n as i64;
            let m_i = m as i64;
            let l_i = l as i64;
            let inner = 4 * l_i * (l_i - 1)
                - n_i * n_i * (m_i - l_i)
                - n_i * (m_i * m_i + m_i - l_i * (l_i + 3));
            let num = rat(m_i - l_i + 1)
                * rat(n_i + m_i + l_i)
                * rat(2 * l_i + n_i - 1)
                * rat(inner)
                * BigRational::from_integer(BigInt::from(factorial(n + l - 2)));
            num / BigRational::from_integer(BigInt::from(factorial(l)))
        };
        for n in 1..=5u32 {
            for m in 1..=6u64 {
                for l in 1..=m {
                    assert_eq!(
                        saturation_summand(n, m, l).unwrap(),
                        product_form(u64::from(n), m, l),
                        "n={n} m={m} l={l}"
                    );
                }
            }
        }
    }

    #[test]
    fn summand_sums_to_zero_with_level_zero_included() {
        for (n, m) in [(2u32, 3u64), (4, 5), (1, 1), (3, 2), (6, 8)] {
            assert_eq!(saturation_summand_sum(n, m).unwrap(), rat(0), "n={n} m={m}");
        }
    }

    #[test]
    fn summand_sum_equals_scaled_residual() {
        // sum_{l=0..m} summand = (n-1)! * (rhs - lhs) at g = 0 (both zero,
        // but the partial sums match level by level too).
        for (n, m) in [(2u32, 1u64), (3, 4), (5, 2)] {
            let fact = BigRational::from_integer(BigInt::from(factorial(u64::from(n) - 1)));
            let residual = verify_sphere_saturation(n, m, &rat(0)).unwrap();
            assert_eq!(saturation_summand_sum(n, m).unwrap(), fact * residual);
        }
    }

    #[test]
    fn single_term_at_m1_is_not_zero_but_full_sum_is() {
        // The level-1 term alone is 2n(n+1)(n+2)(n-1)!; only together with
        // the level-0 term does the sum vanish.
        for n in 1..=5u32 {
            let t1 = saturation_summand(n, 1, 1).unwrap();
            let n_i = i64::from(n);
            let expect = rat(2 * n_i)
                * rat(n_i + 1)
                * rat(n_i + 2)
                * BigRational::from_integer(BigInt::from(factorial(u64::from(n) - 1)));
            assert_eq!(t1, expect);
            let t0 = saturation_summand(n, 1, 0).unwrap();
            assert_eq!(t0 + t1, rat(0));
        }
    }

    #[test]
    fn domain_errors() {
        assert!(sphere_multiplicity(0, 1).is_err());
        assert!(gap_index(0, 1).is_err());
        assert!(verify_sphere_saturation(2, 0, &rat(0)).is_err());
        assert!(saturation_summand(2, 3, 4).is_err());
        assert!(ModelSpectrum::flat_torus(&[rat(0)]).is_err());
        assert!(ModelSpectrum::sphere(2).unwrap().prefix(0).is_err());
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("17/5").unwrap(), ratio(17, 5));
        assert_eq!(parse_rational("-3").unwrap(), rat(-3));
        assert_eq!(parse_rational(" 1/4 ").unwrap(), ratio(1, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
