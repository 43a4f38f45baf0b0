//! Growth of `M_1(r, f⁺)` and the degree trichotomy for polyharmonic
//! polynomials.
//!
//! For `Δ_h^p f = 0` and `s >= 2(p-1)`, `f` has degree at most `s` exactly
//! when `liminf M_1(r, f⁺) / r^{s+n-1+2γ}` is finite; for `s > 2(p-1)` the
//! liminf is zero when the degree is below `s` and positive when it equals
//! `s`. [`classify`] estimates that limit on a geometric radius grid and
//! compares the verdict with the symbolic degree.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::almansi::{reconstruct, AlmansiDecomposition};
use crate::corpus;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Scalar;
use crate::sphereint::quadrature::StratifiedSamples;
use crate::sphereint::{CompiledPoly, Estimate, Method, SphericalIntegrator};

/// Window for a "positive finite" limit ratio after normalization.
pub const RATIO_WINDOW: (f64, f64) = (1e-3, 1e3);
/// `|slope - (s + n - 1 + 2γ)|` below this counts as the same exponent.
pub const EXPONENT_BAND: f64 = 0.5;

/// Strictly increasing positive radii.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    radii: Vec<f64>,
}

impl Default for Grid {
    /// `r = 2^k`, `k = 4..=12`.
    fn default() -> Self {
        Grid::powers_of_two(4, 12)
    }
}

impl Grid {
    pub fn new(radii: Vec<f64>) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::Input("radius grid is empty".into()));
        }
        if let Some(r) = radii.iter().find(|r| !(**r > 0.0) || !r.is_finite()) {
            return Err(Error::InvalidRadius(*r));
        }
        if radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Input("radius grid must be strictly increasing".into()));
        }
        Ok(Grid { radii })
    }

    pub fn powers_of_two(lo: i32, hi: i32) -> Self {
        Grid {
            radii: (lo..=hi).map(|k| 2f64.powi(k)).collect(),
        }
    }

    /// `count` radii from `r_min` to `r_max`, evenly spaced in `log r`.
    pub fn geometric(r_min: f64, r_max: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::Input("a geometric grid needs at least 2 radii".into()));
        }
        let (a, b) = (r_min.ln(), r_max.ln());
        Grid::new(
            (0..count)
                .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
                .collect(),
        )
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn r_min(&self) -> f64 {
        self.radii[0]
    }

    pub fn r_max(&self) -> f64 {
        *self.radii.last().expect("nonempty")
    }

    /// Index of the first radius in the top half.
    fn top_half(&self) -> usize {
        self.radii.len() / 2
    }

    fn check_fit(&self) -> Result<()> {
        if self.radii.len() < 4 {
            return Err(Error::Input("slope fit needs at least 4 radii".into()));
        }
        if self.r_max() / self.r_min() < 100.0 {
            return Err(Error::Input("slope fit needs a grid spanning 2 decades".into()));
        }
        Ok(())
    }
}

/// `M_1(r, f⁺)`, `M_1(r, f)` and `∫_{|y|=r} f h_κ^2 dσ` along a grid,
/// computed once per polynomial with `f` scaled so that its top-degree part
/// has maximum modulus 1 on the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthProfile {
    pub grid: Grid,
    /// The factor applied to `f`.
    pub normalization: f64,
    pub measure_exponent: f64,
    pub positive: Vec<Estimate>,
    pub abs: Vec<Estimate>,
    pub signed: Vec<Estimate>,
    pub max_identity_residual: f64,
    pub method: Method,
    pub degree: Option<u32>,
}

/// `max |f_top(u)|` over a fixed deterministic point set on the sphere.
pub fn top_part_max<S: Scalar>(f: &Polynomial<S>) -> f64 {
    let compiled = CompiledPoly::new(f);
    let n = f.dim();
    let mut best: f64 = 0.0;
    if n == 1 {
        for u in [1.0, -1.0] {
            best = best.max(compiled.eval_top(&[u]).abs());
        }
        return best;
    }
    let pts = StratifiedSamples::generate(n, 20_000, 7);
    for i in 0..2 * pts.pairs() {
        best = best.max(compiled.eval_top(pts.point(i)).abs());
    }
    best
}

impl GrowthProfile {
    pub fn compute<S: Scalar>(
        intg: &SphericalIntegrator<S>,
        f: &Polynomial<S>,
        grid: &Grid,
    ) -> Result<Self> {
        let top = top_part_max(f);
        let normalization = if top > 0.0 { 1.0 / top } else { 1.0 };
        let moments = intg.radial_moments(f, normalization, grid.radii(), true)?;
        let e = intg.measure_exponent();
        let mut out = GrowthProfile {
            grid: grid.clone(),
            normalization,
            measure_exponent: e,
            positive: Vec::new(),
            abs: Vec::new(),
            signed: Vec::new(),
            max_identity_residual: 0.0,
            method: moments.first().map_or(Method::Exact, |m| m.method),
            degree: f.degree().finite(),
        };
        for (m, r) in moments.iter().zip(grid.radii()) {
            let k = r.powf(e) / normalization;
            let scale = |x: Estimate| Estimate {
                value: x.value * k,
                error: x.error * k,
            };
            out.positive.push(scale(m.positive));
            out.abs.push(scale(m.abs));
            out.signed.push(scale(m.signed));
            let rel = m.identity_residual() / m.abs.value.max(f64::MIN_POSITIVE);
            out.max_identity_residual = out.max_identity_residual.max(rel);
            if m.method != Method::Exact {
                out.method = m.method;
            }
        }
        Ok(out)
    }

    /// `M_1(r, f⁺)` counts as zero at this index.
    fn positive_vanishes(&self, i: usize) -> bool {
        let p = self.positive[i];
        p.value <= 1e-12 * self.abs[i].value || p.value <= 0.0
    }

    /// Least-squares slope and RMS residual of `log M_1(r, f⁺)` against
    /// `log r` over the top half of the grid.
    pub fn positive_slope(&self) -> Result<(f64, f64)> {
        let lo = self.grid.top_half();
        if (lo..self.positive.len()).any(|i| self.positive_vanishes(i)) {
            return Err(Error::AllZero);
        }
        Ok(fit(&self.grid.radii[lo..], &self.positive[lo..]))
    }

    /// The same fit for `M_1(r, f)`.
    pub fn abs_slope(&self) -> Option<(f64, f64)> {
        let lo = self.grid.top_half();
        if self.abs[lo..].iter().any(|a| a.value <= 0.0) {
            return None;
        }
        Some(fit(&self.grid.radii[lo..], &self.abs[lo..]))
    }
}

fn fit(radii: &[f64], values: &[Estimate]) -> (f64, f64) {
    let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.value.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (my + slope * (x - mx));
            e * e
        })
        .sum();
    (slope, (rss / k).sqrt())
}

/// Slope of `log M_1(r, f⁺)` on the grid, tending to
/// `deg f + n - 1 + 2γ` for nonzero `f` whose top part takes positive values.
pub fn growth_exponent<S: Scalar>(
    intg: &SphericalIntegrator<S>,
    f: &Polynomial<S>,
    grid: &Grid,
) -> Result<(f64, f64)> {
    grid.check_fit()?;
    GrowthProfile::compute(intg, f, grid)?.positive_slope()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Limit {
    Zero,
    PositiveFinite,
    Divergent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Finite liminf (`s = 2(p-1)`, where zero and positive are not
    /// distinguished).
    DegLeS,
    DegLtS,
    DegEqS,
    DegGtS,
}

impl Verdict {
    fn from_limit(limit: Limit, s: u32, p: u32) -> Self {
        let split = s > 2 * (p - 1);
        match limit {
            Limit::Divergent => Verdict::DegGtS,
            _ if !split => Verdict::DegLeS,
            Limit::Zero => Verdict::DegLtS,
            Limit::PositiveFinite => Verdict::DegEqS,
        }
    }

    /// What the degree alone predicts (`None` is the zero polynomial).
    pub fn from_degree(degree: Option<u32>, s: u32, p: u32) -> Self {
        let split = s > 2 * (p - 1);
        match degree {
            Some(d) if d > s => Verdict::DegGtS,
            _ if !split => Verdict::DegLeS,
            Some(d) if d == s => Verdict::DegEqS,
            _ => Verdict::DegLtS,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::DegLeS => "deg_le_s",
            Verdict::DegLtS => "deg_lt_s",
            Verdict::DegEqS => "deg_eq_s",
            Verdict::DegGtS => "deg_gt_s",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub p: u32,
    pub s: u32,
    pub dim: usize,
    pub gamma: f64,
    /// `s + n - 1 + 2γ`.
    pub target_exponent: f64,
    pub radii: Vec<f64>,
    pub m1_positive: Vec<Estimate>,
    pub m1_abs: Vec<Estimate>,
    pub normalization: f64,
    /// `None` when `f⁺` vanishes on the top half of the grid.
    pub slope: Option<f64>,
    pub fit_residual: Option<f64>,
    pub abs_slope: Option<f64>,
    pub all_zero: bool,
    /// `M_1(r_max, f⁺) / r_max^{s+n-1+2γ}`.
    pub ratio_at_rmax: f64,
    /// The same ratio for the normalized `f`.
    pub normalized_ratio_at_rmax: f64,
    /// Minimum of the ratio over the top half of the grid.
    pub liminf_estimate: f64,
    pub ratio_in_window: bool,
    pub limit: Limit,
    pub verdict: Verdict,
    pub symbolic_degree: Option<u32>,
    pub expected_verdict: Verdict,
    pub agrees: bool,
    pub max_identity_residual: f64,
    pub method: Method,
}

/// Limit class from the fitted exponent first (the degree is an integer,
/// so the excess over the target is near an integer), then from the
/// normalized ratio.
fn limit_class(slope: Option<f64>, target: f64, normalized_ratio: f64) -> Limit {
    let Some(slope) = slope else {
        return Limit::Zero;
    };
    let excess = slope - target;
    if excess > EXPONENT_BAND {
        Limit::Divergent
    } else if excess < -EXPONENT_BAND || normalized_ratio <= 0.0 {
        Limit::Zero
    } else {
        Limit::PositiveFinite
    }
}

/// Applies the trichotomy to a precomputed profile. Hypotheses are not
/// rechecked here.
pub fn classify_profile(profile: &GrowthProfile, gamma: f64, dim: usize, p: u32, s: u32) -> GrowthReport {
    let target = s as f64 + profile.measure_exponent;
    let radii = profile.grid.radii();
    let lo = profile.grid.top_half();
    let ratio = |i: usize| profile.positive[i].value / radii[i].powf(target);
    let last = radii.len() - 1;
    let ratio_at_rmax = ratio(last);
    let normalized_ratio_at_rmax = ratio_at_rmax * profile.normalization;
    let liminf_estimate = (lo..radii.len()).map(ratio).fold(f64::INFINITY, f64::min);
    let fitted = profile.positive_slope().ok();
    let limit = limit_class(fitted.map(|f| f.0), target, normalized_ratio_at_rmax);
    let verdict = Verdict::from_limit(limit, s, p);
    let expected_verdict = Verdict::from_degree(profile.degree, s, p);
    GrowthReport {
        p,
        s,
        dim,
        gamma,
        target_exponent: target,
        radii: radii.to_vec(),
        m1_positive: profile.positive.clone(),
        m1_abs: profile.abs.clone(),
        normalization: profile.normalization,
        slope: fitted.map(|f| f.0),
        fit_residual: fitted.map(|f| f.1),
        abs_slope: profile.abs_slope().map(|f| f.0),
        all_zero: fitted.is_none(),
        ratio_at_rmax,
        normalized_ratio_at_rmax,
        liminf_estimate,
        ratio_in_window: (RATIO_WINDOW.0..=RATIO_WINDOW.1).contains(&normalized_ratio_at_rmax),
        limit,
        verdict,
        symbolic_degree: profile.degree,
        expected_verdict,
        agrees: verdict == expected_verdict,
        max_identity_residual: profile.max_identity_residual,
        method: profile.method,
    }
}

fn check_hypotheses<S: Scalar>(
    intg: &SphericalIntegrator<S>,
    f: &Polynomial<S>,
    p: u32,
    s: u32,
) -> Result<()> {
    if p == 0 {
        return Err(Error::Input("polyharmonic order p must be >= 1".into()));
    }
    if s < 2 * (p - 1) {
        return Err(Error::HypothesisViolated {
            s,
            bound: 2 * (p - 1),
        });
    }
    if intg.context().polyharmonic_order(f, Some(p))?.is_none() {
        return Err(Error::NotPolyharmonic { order: p });
    }
    Ok(())
}

/// Growth report and verdict for `Δ_h^p f = 0`, `s >= 2(p-1)`.
pub fn classify<S: Scalar>(
    intg: &SphericalIntegrator<S>,
    f: &Polynomial<S>,
    p: u32,
    s: u32,
    grid: &Grid,
) -> Result<GrowthReport> {
    check_hypotheses(intg, f, p, s)?;
    grid.check_fit()?;
    let profile = GrowthProfile::compute(intg, f, grid)?;
    Ok(classify_profile(
        &profile,
        intg.context().gamma().to_f64(),
        intg.dim(),
        p,
        s,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusParams {
    pub count: usize,
    pub max_degree: u32,
    pub max_p: u32,
    pub max_s: u32,
    /// Integer coefficient bound for the random h-harmonic parts.
    pub coeff_bound: i64,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams {
            count: 50,
            max_degree: 6,
            max_p: 3,
            max_s: 8,
            coeff_bound: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteRow {
    pub index: usize,
    pub polynomial: String,
    pub degree: Option<u32>,
    /// Exact polyharmonic order of the generated polynomial.
    pub order: u32,
    pub p: u32,
    pub s: u32,
    pub verdict: Verdict,
    pub expected: Verdict,
    pub agrees: bool,
    pub slope: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub seed: u64,
    pub params: CorpusParams,
    pub rows: Vec<SuiteRow>,
    pub agreed: usize,
    /// `None` for an empty table.
    pub agreement_rate: Option<f64>,
    pub orthogonality_checks: usize,
    pub orthogonality_failures: usize,
    pub max_identity_residual: f64,
}

/// Classifies a seeded corpus of polyharmonic polynomials for every
/// admissible `(p, s)` and reports agreement with the symbolic degree.
///
/// Each polynomial is `Σ_m |x|^{2m} φ_m` over random h-harmonic parts. The
/// suite also checks that pairing `f` with an h-harmonic `g` of degree `j0`
/// only sees the degree-`j0` pieces of each `φ_m`: every other homogeneous
/// piece must integrate to zero against `g`.
pub fn theorem_consistency_suite<S: Scalar>(
    intg: &SphericalIntegrator<S>,
    params: &CorpusParams,
    seed: u64,
    grid: &Grid,
) -> Result<SuiteSummary> {
    grid.check_fit()?;
    let ctx = intg.context();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut ortho_checks = 0;
    let mut ortho_failures = 0;
    let mut max_residual: f64 = 0.0;
    let gamma = ctx.gamma().to_f64();
    for index in 0..params.count {
        let order = 1 + rng.random_range(0..params.max_p.max(1));
        let parts = corpus::random_almansi_parts(ctx, order, params.max_degree, params.coeff_bound, &mut rng)?;
        let dec = AlmansiDecomposition::from_parts(parts)?;
        let f = reconstruct(&dec);

        let j0 = rng.random_range(0..=params.max_degree.min(4));
        let g = corpus::random_h_harmonic(ctx, j0, params.coeff_bound, &mut rng)?;
        if !g.is_zero() {
            for phi in dec.parts() {
                for (j, piece) in phi.homogeneous_components() {
                    if j == j0 {
                        continue;
                    }
                    ortho_checks += 1;
                    let i = intg.integrate_sphere(&(&piece * &g), false)?;
                    let ok = match &i.c_multiple {
                        Some(m) => m.is_negligible(1e-12),
                        None => {
                            let scale = intg.integrate_sphere(&(&piece * &piece), false)?.value.sqrt()
                                * intg.integrate_sphere(&(&g * &g), false)?.value.sqrt();
                            i.value.abs() <= 4.0 * i.error + 1e-8 * scale
                        }
                    };
                    if !ok {
                        ortho_failures += 1;
                    }
                }
            }
        }

        let profile = GrowthProfile::compute(intg, &f, grid)?;
        max_residual = max_residual.max(profile.max_identity_residual);
        let text = f.to_string();
        for p in order..=params.max_p.max(order) {
            for s in 2 * (p - 1)..=params.max_s {
                let rep = classify_profile(&profile, gamma, ctx.dim(), p, s);
                rows.push(SuiteRow {
                    index,
                    polynomial: text.clone(),
                    degree: rep.symbolic_degree,
                    order,
                    p,
                    s,
                    verdict: rep.verdict,
                    expected: rep.expected_verdict,
                    agrees: rep.agrees,
                    slope: rep.slope,
                });
            }
        }
    }
    let agreed = rows.iter().filter(|r| r.agrees).count();
    let agreement_rate = (!rows.is_empty()).then(|| agreed as f64 / rows.len() as f64);
    Ok(SuiteSummary {
        seed,
        params: params.clone(),
        rows,
        agreed,
        agreement_rate,
        orthogonality_checks: ortho_checks,
        orthogonality_failures: ortho_failures,
        max_identity_residual: max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{Family, WeightedRootSystem};
    use crate::dunkl::DunklContext;
    use crate::sphereint::NumericSettings;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    fn z2(k: &[Q]) -> SphericalIntegrator<Q> {
        let ctx = DunklContext::new(WeightedRootSystem::build_named(Family::Z2(k.len()), k, false).unwrap());
        SphericalIntegrator::auto(&ctx, NumericSettings::default())
    }

    fn poly(dim: usize, terms: &[(&[u32], i64)]) -> Polynomial<Q> {
        Polynomial::from_terms(dim, terms.iter().map(|(e, c)| (e.to_vec(), q(*c, 1)))).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert_eq!(Grid::default().radii().len(), 9);
        assert!(Grid::new(vec![1.0, 1.0]).is_err());
        assert!(Grid::new(vec![0.0, 1.0]).is_err());
        let g = Grid::geometric(1.0, 1000.0, 4).unwrap();
        assert!((g.radii()[1] - 10.0).abs() < 1e-9);
        assert!(Grid::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap().check_fit().is_err());
    }

    #[test]
    fn slopes() {
        let intg = z2(&[q(1, 2), q(1, 2)]);
        let grid = Grid::default();
        let (s, _) = growth_exponent(&intg, &poly(2, &[(&[2, 0], 1)]), &grid).unwrap();
        assert!((s - 5.0).abs() < 1e-9);
        let (s, _) = growth_exponent(&intg, &Polynomial::one(2), &grid).unwrap();
        assert!((s - 3.0).abs() < 1e-9);
        let (s, _) = growth_exponent(&intg, &poly(2, &[(&[1, 1], 1), (&[1, 0], 3)]), &grid).unwrap();
        assert!((s - 5.0).abs() < 0.02, "{s}");
        assert_eq!(
            growth_exponent(&intg, &poly(2, &[(&[2, 0], -1)]), &grid).unwrap_err(),
            Error::AllZero
        );
    }

    #[test]
    fn trichotomy_examples() {
        let intg = z2(&[q(1, 2), q(1, 2)]);
        let grid = Grid::default();
        let xy = poly(2, &[(&[1, 1], 1)]);
        let rep = classify(&intg, &xy, 1, 2, &grid).unwrap();
        assert_eq!(rep.verdict, Verdict::DegEqS);
        assert!(rep.agrees && rep.ratio_in_window);
        assert_eq!(classify(&intg, &xy, 1, 3, &grid).unwrap().verdict, Verdict::DegLtS);
        assert_eq!(classify(&intg, &xy, 1, 0, &grid).unwrap().verdict, Verdict::DegGtS);

        let one = Polynomial::<Q>::one(2);
        let rep = classify(&intg, &one, 1, 0, &grid).unwrap();
        assert_eq!(rep.verdict, Verdict::DegLeS);
        assert!((rep.ratio_at_rmax - 2.0).abs() < 1e-12);

        // f⁺ ≡ 0 is compatible only with "deg < s".
        let neg = poly(2, &[(&[2, 0], -1), (&[0, 2], -1)]);
        let rep = classify(&intg, &neg, 2, 3, &grid).unwrap();
        assert!(rep.all_zero);
        assert_eq!(rep.verdict, Verdict::DegLtS);
    }

    #[test]
    fn hypothesis_errors() {
        let intg = z2(&[q(1, 2), q(1, 2)]);
        let grid = Grid::default();
        let r2 = poly(2, &[(&[2, 0], 1), (&[0, 2], 1)]);
        assert_eq!(
            classify(&intg, &r2, 2, 1, &grid).unwrap_err(),
            Error::HypothesisViolated { s: 1, bound: 2 }
        );
        assert_eq!(
            classify(&intg, &r2, 1, 2, &grid).unwrap_err(),
            Error::NotPolyharmonic { order: 1 }
        );
    }

    #[test]
    fn verdict_invariant_under_scaling_and_group() {
        let k = [q(1, 2), q(1, 3)];
        let intg = z2(&k);
        let grid = Grid::default();
        let f = poly(2, &[(&[1, 1], 2), (&[1, 0], 1), (&[0, 0], 5)]);
        let base = classify(&intg, &f, 1, 2, &grid).unwrap();
        let scaled = classify(&intg, &f.scale(&q(7, 3)), 1, 2, &grid).unwrap();
        assert_eq!(base.verdict, scaled.verdict);
        let group = intg.context().system().group_elements(100).unwrap();
        for g in group {
            let images: Vec<Polynomial<Q>> = g
                .rows()
                .iter()
                .map(|row| {
                    Polynomial::from_terms(
                        2,
                        row.iter().enumerate().map(|(i, c)| {
                            let mut e = vec![0; 2];
                            e[i] = 1;
                            (e, c.clone())
                        }),
                    )
                    .unwrap()
                })
                .collect();
            let fg = f.substitute(&images).unwrap();
            let rep = classify(&intg, &fg, 1, 2, &grid).unwrap();
            assert_eq!(rep.verdict, base.verdict);
            assert!((rep.ratio_at_rmax - base.ratio_at_rmax).abs() < 1e-6 * base.ratio_at_rmax);
        }
    }

    #[test]
    fn small_suite() {
        let intg = z2(&[q(1, 2), q(1, 2)]);
        let params = CorpusParams { count: 6, max_degree: 5, max_p: 2, max_s: 6, coeff_bound: 3 };
        let sum = theorem_consistency_suite(&intg, &params, 11, &Grid::default()).unwrap();
        assert!(!sum.rows.is_empty());
        assert_eq!(sum.agreement_rate, Some(1.0), "{:?}", sum.rows.iter().find(|r| !r.agrees));
        assert_eq!(sum.orthogonality_failures, 0);

        let empty = CorpusParams { count: 0, ..params };
        let sum = theorem_consistency_suite(&intg, &empty, 11, &Grid::default()).unwrap();
        assert!(sum.rows.is_empty());
        assert_eq!(sum.agreement_rate, None);
    }
}
