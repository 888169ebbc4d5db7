//! Universal eigenvalue inequality evaluation on finite spectra.
//!
//! Each operation takes a [`SpectrumSample`] (a nondecreasing eigenvalue
//! prefix plus the geometric moments it needs) and returns margins, root
//! brackets or bound values for one inequality family. Margins are always
//! rhs - lhs of the cited inequality, so "satisfied" means margin >= 0 up
//! to the caller's tolerance.
//!
//! Tolerances are relative: a row passes when
//! `margin >= -tol * max(1, |lhs|, |rhs|)`. Exact inputs should use tol = 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative tolerance for algebraically exact floating-point data.
pub const TOL_ALGEBRAIC: f64 = 1e-9;
/// Default relative tolerance for spectra of discretized operators.
pub const TOL_DISCRETE: f64 = 1e-3;

/// Ambient space the immersion maps into; fixes the curvature constant c(n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum AmbientContext {
    #[default]
    Euclidean,
    Sphere,
    ProjectiveReal,
    ProjectiveComplex,
    ProjectiveQuaternionic,
    /// Complex projective ambient, odd-dimensional submanifold (sharper constant).
    ProjectiveComplexOddDim,
    /// Complex projective ambient, totally real submanifold (sharper constant).
    ProjectiveComplexTotallyReal,
}

impl AmbientContext {
    /// The additive curvature constant c(n): 0 in Euclidean space, n^2 for
    /// spheres, 2n(n+d) for projective spaces over a field with real
    /// dimension d, and the sharper complex-projective variants.
    pub fn curvature_constant(self, n: u32) -> f64 {
        let nf = f64::from(n);
        match self {
            AmbientContext::Euclidean => 0.0,
            AmbientContext::Sphere => nf * nf,
            AmbientContext::ProjectiveReal => 2.0 * nf * (nf + 1.0),
            AmbientContext::ProjectiveComplex => 2.0 * nf * (nf + 2.0),
            AmbientContext::ProjectiveQuaternionic => 2.0 * nf * (nf + 4.0),
            AmbientContext::ProjectiveComplexOddDim => 2.0 * nf * (nf + 2.0 - 1.0 / nf),
            AmbientContext::ProjectiveComplexTotallyReal => 2.0 * nf * (nf + 1.0),
        }
    }
}

/// A finite eigenvalue prefix with the geometric data attached to it.
///
/// `delta_terms[i]` holds the moment of (|h|^2/4 - q) against u_i^2 computed
/// with the *ambient-free* curvature; for non-Euclidean ambients the engine
/// adds c(n)/4 internally. `q_integrals[i]` holds the plain potential moment
/// used by the eigenmap inequality.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumSample {
    pub n: u32,
    pub eigenvalues: Vec<f64>,
    pub delta_terms: Option<Vec<f64>>,
    pub delta_sup: Option<f64>,
    pub q_integrals: Option<Vec<f64>>,
    pub ambient: AmbientContext,
}

impl SpectrumSample {
    pub fn new(n: u32, eigenvalues: Vec<f64>) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("intrinsic dimension must be >= 1"));
        }
        if eigenvalues.len() < 2 {
            return Err(Error::domain("a spectrum sample needs at least two eigenvalues"));
        }
        if eigenvalues.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::domain("eigenvalues must be nondecreasing"));
        }
        Ok(SpectrumSample {
            n,
            eigenvalues,
            delta_terms: None,
            delta_sup: None,
            q_integrals: None,
            ambient: AmbientContext::Euclidean,
        })
    }

    pub fn with_delta_terms(mut self, delta: Vec<f64>) -> Result<Self> {
        if delta.len() < self.eigenvalues.len() - 1 {
            return Err(Error::config(
                "delta_terms must cover every index below the largest usable k",
            ));
        }
        self.delta_terms = Some(delta);
        Ok(self)
    }

    pub fn with_delta_sup(mut self, sup: f64) -> Self {
        self.delta_sup = Some(sup);
        self
    }

    pub fn with_q_integrals(mut self, q: Vec<f64>) -> Result<Self> {
        if q.len() < self.eigenvalues.len() - 1 {
            return Err(Error::config("q_integrals must cover every usable index"));
        }
        self.q_integrals = Some(q);
        Ok(self)
    }

    pub fn with_ambient(mut self, ambient: AmbientContext) -> Self {
        self.ambient = ambient;
        self
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k < 1 || k + 1 > self.eigenvalues.len() {
            return Err(Error::domain(format!(
                "k = {k} needs eigenvalues through index {} but only {} are present",
                k + 1,
                self.eigenvalues.len()
            )));
        }
        Ok(())
    }

    /// delta_i adjusted for the ambient context (adds c(n)/4).
    fn effective_delta(&self, i: usize) -> Result<f64> {
        let base = self
            .delta_terms
            .as_ref()
            .ok_or_else(|| Error::config("delta terms are required but missing"))?
            .get(i)
            .copied()
            .ok_or_else(|| Error::config(format!("delta term {i} missing")))?;
        Ok(base + self.ambient.curvature_constant(self.n) / 4.0)
    }

    /// sup delta adjusted for the ambient context.
    fn effective_delta_sup(&self) -> Result<f64> {
        let base = match (self.delta_sup, &self.delta_terms) {
            (Some(s), _) => s,
            (None, Some(terms)) => terms.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            (None, None) => {
                return Err(Error::config("neither delta_sup nor delta_terms available"))
            }
        };
        Ok(base + self.ambient.curvature_constant(self.n) / 4.0)
    }
}

/// Root bracket of a quadratic eigenvalue bound.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoundResult {
    pub k: usize,
    pub lower: f64,
    pub upper: f64,
    pub discriminant: f64,
    /// Discriminant >= -tol; a negative discriminant on trustworthy data
    /// falsifies an input assumption and is reported, never clamped.
    pub valid: bool,
}

/// Passing scale for relative tolerances.
pub fn margin_scale(lhs: f64, rhs: f64) -> f64 {
    1f64.max(lhs.abs()).max(rhs.abs())
}

/// Both sides of the gap-quadratic inequality
/// n sum (l_{k+1} - l_i)^2 <= 4 sum (l_{k+1} - l_i)(l_i + delta_i).
pub fn yang_sides(s: &SpectrumSample, k: usize) -> Result<(f64, f64)> {
    s.check_k(k)?;
    let top = s.eigenvalues[k];
    let n = f64::from(s.n);
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for i in 0..k {
        let diff = top - s.eigenvalues[i];
        lhs += n * diff * diff;
        rhs += 4.0 * diff * (s.eigenvalues[i] + s.effective_delta(i)?);
    }
    Ok((lhs, rhs))
}

/// rhs - lhs of the gap-quadratic inequality; nonnegative when it holds.
pub fn yang_margin(s: &SpectrumSample, k: usize) -> Result<f64> {
    let (lhs, rhs) = yang_sides(s, k)?;
    Ok(rhs - lhs)
}

/// Two-sided root bracket for lambda_{k+1} from the quadratic form of the
/// gap inequality. Containment of lambda_{k+1} in [lower, upper] is
/// algebraically equivalent to a nonnegative gap margin.
pub fn quadratic_bounds(s: &SpectrumSample, k: usize, tol: f64) -> Result<BoundResult> {
    s.check_k(k)?;
    let n = f64::from(s.n);
    let kf = k as f64;
    let mut sum_l = 0.0;
    let mut sum_l2 = 0.0;
    let mut sum_d = 0.0;
    let mut sum_ld = 0.0;
    for i in 0..k {
        let l = s.eigenvalues[i];
        let d = s.effective_delta(i)?;
        sum_l += l;
        sum_l2 += l * l;
        sum_d += d;
        sum_ld += l * d;
    }
    let center = (1.0 + 2.0 / n) * sum_l / kf + (2.0 / n) * sum_d / kf;
    let discriminant =
        center * center - (1.0 + 4.0 / n) * sum_l2 / kf - (4.0 / n) * sum_ld / kf;
    let scale = margin_scale(center * center, discriminant);
    let valid = discriminant >= -tol * scale;
    let root = discriminant.max(0.0).sqrt();
    let (lower, upper) = if valid {
        (center - root, center + root)
    } else {
        (f64::NAN, f64::NAN)
    };
    Ok(BoundResult {
        k,
        lower,
        upper,
        discriminant,
        valid,
    })
}

/// The averaged upper bound l_{k+1} <= (1 + 4/n)(1/k) sum l_i + 4 delta / n,
/// using the supremum moment delta.
pub fn simple_upper_bound(s: &SpectrumSample, k: usize) -> Result<f64> {
    s.check_k(k)?;
    let n = f64::from(s.n);
    let sum_l: f64 = s.eigenvalues[..k].iter().sum();
    Ok((1.0 + 4.0 / n) * sum_l / k as f64 + 4.0 * s.effective_delta_sup()? / n)
}

/// The immersion obstruction at one k: any isometric immersion into
/// Euclidean space must have sup |h|^2 at least this value.
pub fn immersibility_row(s: &SpectrumSample, k: usize) -> Result<f64> {
    s.check_k(k)?;
    let n = f64::from(s.n);
    let sum_l: f64 = s.eigenvalues[..k].iter().sum();
    Ok(n * s.eigenvalues[k] - (n + 4.0) * sum_l / k as f64)
}

/// Strongest immersion obstruction over 1 <= k <= k_max.
pub fn immersibility_bound(s: &SpectrumSample, k_max: usize) -> Result<f64> {
    if k_max < 1 {
        return Err(Error::domain("k_max must be >= 1"));
    }
    let mut best = f64::NEG_INFINITY;
    for k in 1..=k_max {
        best = best.max(immersibility_row(s, k)?);
    }
    Ok(best)
}

/// Reilly bound on the second eigenvalue of a closed submanifold:
/// lambda_2 <= (1/(nV)) int |h|^2, given the volume-averaged |h|^2.
pub fn reilly_lambda2(n: u32, mean_h_sq: f64) -> f64 {
    mean_h_sq / f64::from(n)
}

/// Chained Reilly-type bound
/// lambda_k <= (4/n + 1)^{k-1} lambda_1 + (1/4)((4/n + 1)^{k-1} - 1) sup|h|^2.
pub fn reilly_chain(n: u32, k: usize, lambda_1: f64, h_sup_sq: f64) -> Result<f64> {
    if k < 2 {
        return Err(Error::domain("chained Reilly bound needs k >= 2"));
    }
    let growth = (4.0 / f64::from(n) + 1.0).powi(k as i32 - 1);
    Ok(growth * lambda_1 + 0.25 * (growth - 1.0) * h_sup_sq)
}

/// The generalized Reilly constant C_R(n, k) = (1/4)((4/n + 1)^{k-1} - 1).
pub fn reilly_constant(n: u32, k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::domain("Reilly constant defined for k >= 2"));
    }
    Ok(0.25 * ((4.0 / f64::from(n) + 1.0).powi(k as i32 - 1) - 1.0))
}

/// Both sides of the eigenmap gap inequality
/// sum (l_{k+1} - l_i)^2 <= sum (l_{k+1} - l_i)(lambda + 4(l_i - int q u_i^2)).
pub fn eigenmap_sides(lambda_map: f64, s: &SpectrumSample, k: usize) -> Result<(f64, f64)> {
    s.check_k(k)?;
    if !(lambda_map > 0.0) {
        return Err(Error::domain("eigenmap eigenvalue must be positive"));
    }
    let q = s
        .q_integrals
        .as_ref()
        .ok_or_else(|| Error::config("eigenmap inequality needs q_integrals (zeros when q = 0)"))?;
    let top = s.eigenvalues[k];
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for i in 0..k {
        let diff = top - s.eigenvalues[i];
        lhs += diff * diff;
        rhs += diff * (lambda_map + 4.0 * (s.eigenvalues[i] - q[i]));
    }
    Ok((lhs, rhs))
}

/// rhs - lhs of the eigenmap gap inequality.
pub fn eigenmap_margin(lambda_map: f64, s: &SpectrumSample, k: usize) -> Result<f64> {
    let (lhs, rhs) = eigenmap_sides(lambda_map, s, k)?;
    Ok(rhs - lhs)
}

/// Root bracket for lambda_{k+1} derived from the eigenmap gap inequality
/// (the quadratic in lambda_{k+1} obtained by expanding it).
pub fn eigenmap_quadratic_bounds(
    lambda_map: f64,
    s: &SpectrumSample,
    k: usize,
    tol: f64,
) -> Result<BoundResult> {
    s.check_k(k)?;
    if !(lambda_map > 0.0) {
        return Err(Error::domain("eigenmap eigenvalue must be positive"));
    }
    let q = s
        .q_integrals
        .as_ref()
        .ok_or_else(|| Error::config("eigenmap inequality needs q_integrals (zeros when q = 0)"))?;
    let kf = k as f64;
    let mut sum_l = 0.0;
    let mut sum_l2 = 0.0;
    let mut sum_q = 0.0;
    let mut sum_lq = 0.0;
    for i in 0..k {
        let l = s.eigenvalues[i];
        sum_l += l;
        sum_l2 += l * l;
        sum_q += q[i];
        sum_lq += l * q[i];
    }
    // k w^2 - w (6 sum l + k lambda - 4 sum q)
    //       + 5 sum l^2 + lambda sum l - 4 sum l q <= 0
    let center = (6.0 * sum_l + kf * lambda_map - 4.0 * sum_q) / (2.0 * kf);
    let constant = (5.0 * sum_l2 + lambda_map * sum_l - 4.0 * sum_lq) / kf;
    let discriminant = center * center - constant;
    let scale = margin_scale(center * center, discriminant);
    let valid = discriminant >= -tol * scale;
    let root = discriminant.max(0.0).sqrt();
    let (lower, upper) = if valid {
        (center - root, center + root)
    } else {
        (f64::NAN, f64::NAN)
    };
    Ok(BoundResult {
        k,
        lower,
        upper,
        discriminant,
        valid,
    })
}

fn check_kohn(lambdas: &[f64], k: usize) -> Result<()> {
    if lambdas.len() < k + 1 {
        return Err(Error::domain(format!(
            "k = {k} needs {} eigenvalues, got {}",
            k + 1,
            lambdas.len()
        )));
    }
    if !(lambdas[0] > 0.0) {
        return Err(Error::domain(
            "Kohn inequalities assume a Dirichlet spectrum with lambda_1 > 0",
        ));
    }
    if lambdas.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::domain("eigenvalues must be nondecreasing"));
    }
    Ok(())
}

/// Both sides of the Kohn gap inequality
/// n sum (l_{k+1} - l_i)^2 <= 2 sum (l_{k+1} - l_i) l_i.
pub fn kohn_sides(n: u32, lambdas: &[f64], k: usize) -> Result<(f64, f64)> {
    check_kohn(lambdas, k)?;
    let nf = f64::from(n);
    let top = lambdas[k];
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for &l in &lambdas[..k] {
        let diff = top - l;
        lhs += nf * diff * diff;
        rhs += 2.0 * diff * l;
    }
    Ok((lhs, rhs))
}

/// rhs - lhs of the Kohn gap inequality.
pub fn kohn_margin(n: u32, lambdas: &[f64], k: usize) -> Result<f64> {
    let (lhs, rhs) = kohn_sides(n, lambdas, k)?;
    Ok(rhs - lhs)
}

/// Root bracket plus the averaged (Cauchy-Schwarz) upper bound for the Kohn
/// spectrum. `upper <= simple` holds for all valid inputs.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct KohnBounds {
    pub bound: BoundResult,
    /// (1/k + 2/(nk)) sum l_i
    pub simple: f64,
}

pub fn kohn_bounds(n: u32, lambdas: &[f64], k: usize, tol: f64) -> Result<KohnBounds> {
    check_kohn(lambdas, k)?;
    let nf = f64::from(n);
    let kf = k as f64;
    let sum_l: f64 = lambdas[..k].iter().sum();
    let sum_l2: f64 = lambdas[..k].iter().map(|l| l * l).sum();
    let center = (nf + 1.0) / (nf * kf) * sum_l;
    let discriminant = {
        let a = (1.0 + 1.0 / nf) * sum_l / kf;
        a * a - (1.0 + 2.0 / nf) * sum_l2 / kf
    };
    let scale = margin_scale(center * center, discriminant);
    let valid = discriminant >= -tol * scale;
    let root = discriminant.max(0.0).sqrt();
    let (lower, upper) = if valid {
        (center - root, center + root)
    } else {
        (f64::NAN, f64::NAN)
    };
    Ok(KohnBounds {
        bound: BoundResult {
            k,
            lower,
            upper,
            discriminant,
            valid,
        },
        simple: (1.0 / kf + 2.0 / (nf * kf)) * sum_l,
    })
}

/// Inequality families the report builder understands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    /// Gap-quadratic inequality with curvature moments.
    YangGap,
    /// Two-sided root bracket for lambda_{k+1}.
    Bracket,
    /// Averaged upper bound from the supremum moment.
    AveragedUpper,
    /// Immersion obstruction rows against a measured sup |h|^2.
    Immersibility,
    /// Reilly bound for lambda_2 on closed submanifolds.
    ReillySecond,
    /// Chained Reilly bound for lambda_k.
    ReillyChain,
    /// Eigenmap gap inequality.
    EigenmapGap,
    /// Root bracket derived from the eigenmap gap inequality.
    EigenmapBracket,
    /// Kohn-Laplacian gap inequality.
    KohnGap,
    /// Kohn root bracket.
    KohnBracket,
    /// Kohn averaged upper bound.
    KohnSimple,
    /// Exact sphere saturation identity rows.
    Saturation,
}

impl Theorem {
    pub fn tag(self) -> &'static str {
        match self {
            Theorem::YangGap => "yang-gap",
            Theorem::Bracket => "bracket",
            Theorem::AveragedUpper => "averaged-upper",
            Theorem::Immersibility => "immersibility",
            Theorem::ReillySecond => "reilly-second",
            Theorem::ReillyChain => "reilly-chain",
            Theorem::EigenmapGap => "eigenmap-gap",
            Theorem::EigenmapBracket => "eigenmap-bracket",
            Theorem::KohnGap => "kohn-gap",
            Theorem::KohnBracket => "kohn-bracket",
            Theorem::KohnSimple => "kohn-simple",
            Theorem::Saturation => "saturation",
        }
    }
}

/// One evaluated k of an inequality report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportRow {
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
    /// rhs - lhs; nonnegative (within tolerance) when the inequality holds.
    pub margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discriminant: Option<f64>,
    pub satisfied: bool,
}

impl ReportRow {
    fn plain(k: usize, lhs: f64, rhs: f64, tol: f64) -> Self {
        let margin = rhs - lhs;
        ReportRow {
            k,
            lhs,
            rhs,
            margin,
            lower: None,
            upper: None,
            discriminant: None,
            satisfied: margin >= -tol * margin_scale(lhs, rhs),
        }
    }

    fn with_bounds(mut self, b: &BoundResult, contains_top: bool) -> Self {
        self.lower = Some(b.lower);
        self.upper = Some(b.upper);
        self.discriminant = Some(b.discriminant);
        self.satisfied = self.satisfied && b.valid && contains_top;
        self
    }
}

/// Result of evaluating one inequality family over a k range.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InequalityReport {
    pub theorem: Theorem,
    /// Relative tolerance used for the verdicts.
    pub tolerance: f64,
    /// Human-readable description of where the spectrum came from.
    pub source: String,
    pub rows: Vec<ReportRow>,
}

impl InequalityReport {
    pub fn all_satisfied(&self) -> bool {
        self.rows.iter().all(|r| r.satisfied)
    }

    pub fn worst_margin(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.margin / margin_scale(r.lhs, r.rhs))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Inputs for [`build_report`]; each theorem family consumes the variant it
/// documents.
#[derive(Debug, Clone)]
pub enum ReportInputs<'a> {
    /// Spectrum with curvature moments (gap, bracket, averaged-upper).
    Spectrum(&'a SpectrumSample),
    /// Spectrum plus the measured sup |h|^2 of the immersion it came from.
    Immersion {
        sample: &'a SpectrumSample,
        h_sup_sq: f64,
    },
    /// Reilly data for a closed submanifold.
    Reilly {
        n: u32,
        eigenvalues: &'a [f64],
        mean_h_sq: f64,
        h_sup_sq: f64,
    },
    /// Spectrum plus a validated eigenmap eigenvalue.
    Eigenmap {
        lambda_map: f64,
        sample: &'a SpectrumSample,
    },
    /// Dirichlet Kohn spectrum.
    Kohn { n: u32, eigenvalues: &'a [f64] },
}

/// Evaluate one inequality family for every k in `k_range` (inclusive ends,
/// clamped to the data), producing deterministic ascending-k rows.
pub fn build_report(
    theorem: Theorem,
    inputs: &ReportInputs,
    k_range: (usize, usize),
    tolerance: f64,
    source: &str,
) -> Result<InequalityReport> {
    let (k_lo, k_hi) = k_range;
    if k_lo < 1 || k_hi < k_lo {
        return Err(Error::config(format!("bad k range [{k_lo}, {k_hi}]")));
    }
    let mut rows = Vec::new();
    match (theorem, inputs) {
        (Theorem::YangGap, ReportInputs::Spectrum(s)) => {
            for k in k_lo..=k_hi.min(s.eigenvalues.len() - 1) {
                let (lhs, rhs) = yang_sides(s, k)?;
                rows.push(ReportRow::plain(k, lhs, rhs, tolerance));
            }
        }
        (Theorem::Bracket, ReportInputs::Spectrum(s)) => {
            for k in k_lo..=k_hi.min(s.eigenvalues.len() - 1) {
                let b = quadratic_bounds(s, k, tolerance)?;
                let top = s.eigenvalues[k];
                let scale = margin_scale(top, b.upper);
                let contains = b.valid
                    && top <= b.upper + tolerance * scale
                    && top >= b.lower - tolerance * scale;
                rows.push(ReportRow::plain(k, top, b.upper, tolerance).with_bounds(&b, contains));
            }
        }
        (Theorem::AveragedUpper, ReportInputs::Spectrum(s)) => {
            for k in k_lo..=k_hi.min(s.eigenvalues.len() - 1) {
                let bound = simple_upper_bound(s, k)?;
                rows.push(ReportRow::plain(k, s.eigenvalues[k], bound, tolerance));
            }
        }
        (Theorem::Immersibility, ReportInputs::Immersion { sample, h_sup_sq }) => {
            for k in k_lo..=k_hi.min(sample.eigenvalues.len() - 1) {
                let required = immersibility_row(sample, k)?;
                rows.push(ReportRow::plain(k, required, *h_sup_sq, tolerance));
            }
        }
        (
            Theorem::ReillySecond,
            ReportInputs::Reilly {
                n,
                eigenvalues,
                mean_h_sq,
                ..
            },
        ) => {
            if eigenvalues.len() < 2 {
                return Err(Error::config("Reilly check needs lambda_2"));
            }
            let bound = reilly_lambda2(*n, *mean_h_sq);
            rows.push(ReportRow::plain(1, eigenvalues[1], bound, tolerance));
        }
        (
            Theorem::ReillyChain,
            ReportInputs::Reilly {
                n,
                eigenvalues,
                h_sup_sq,
                ..
            },
        ) => {
            for k in k_lo.max(2)..=k_hi.min(eigenvalues.len()) {
                let bound = reilly_chain(*n, k, eigenvalues[0], *h_sup_sq)?;
                rows.push(ReportRow::plain(k, eigenvalues[k - 1], bound, tolerance));
            }
        }
        (Theorem::EigenmapGap, ReportInputs::Eigenmap { lambda_map, sample }) => {
            for k in k_lo..=k_hi.min(sample.eigenvalues.len() - 1) {
                let (lhs, rhs) = eigenmap_sides(*lambda_map, sample, k)?;
                rows.push(ReportRow::plain(k, lhs, rhs, tolerance));
            }
        }
        (Theorem::EigenmapBracket, ReportInputs::Eigenmap { lambda_map, sample }) => {
            for k in k_lo..=k_hi.min(sample.eigenvalues.len() - 1) {
                let b = eigenmap_quadratic_bounds(*lambda_map, sample, k, tolerance)?;
                let top = sample.eigenvalues[k];
                let scale = margin_scale(top, b.upper);
                let contains = b.valid
                    && top <= b.upper + tolerance * scale
                    && top >= b.lower - tolerance * scale;
                rows.push(ReportRow::plain(k, top, b.upper, tolerance).with_bounds(&b, contains));
            }
        }
        (Theorem::KohnGap, ReportInputs::Kohn { n, eigenvalues }) => {
            for k in k_lo..=k_hi.min(eigenvalues.len().saturating_sub(1)) {
                let (lhs, rhs) = kohn_sides(*n, eigenvalues, k)?;
                rows.push(ReportRow::plain(k, lhs, rhs, tolerance));
            }
        }
        (Theorem::KohnBracket, ReportInputs::Kohn { n, eigenvalues }) => {
            for k in k_lo..=k_hi.min(eigenvalues.len().saturating_sub(1)) {
                let kb = kohn_bounds(*n, eigenvalues, k, tolerance)?;
                let top = eigenvalues[k];
                let scale = margin_scale(top, kb.bound.upper);
                let contains = kb.bound.valid
                    && top <= kb.bound.upper + tolerance * scale
                    && top >= kb.bound.lower - tolerance * scale
                    && kb.bound.upper <= kb.simple + tolerance * margin_scale(kb.simple, kb.bound.upper);
                rows.push(
                    ReportRow::plain(k, top, kb.bound.upper, tolerance)
                        .with_bounds(&kb.bound, contains),
                );
            }
        }
        (Theorem::KohnSimple, ReportInputs::Kohn { n, eigenvalues }) => {
            for k in k_lo..=k_hi.min(eigenvalues.len().saturating_sub(1)) {
                let kb = kohn_bounds(*n, eigenvalues, k, tolerance)?;
                rows.push(ReportRow::plain(k, eigenvalues[k], kb.simple, tolerance));
            }
        }
        (theorem, _) => {
            return Err(Error::config(format!(
                "inputs do not match theorem '{}'",
                theorem.tag()
            )))
        }
    }
    Ok(InequalityReport {
        theorem,
        tolerance,
        source: source.to_string(),
        rows,
    })
}
