//! Integration over the unit sphere against `h_κ^2 dσ`.
//!
//! Two modes. For `Z2^n` (roots `±e_i`) the weight is `Π|x_i|^{2κ_i}` and
//! every even monomial integrates to a rational multiple of
//! `c = ∫ h_κ^2 dσ`:
//!
//! `∫ x^e h_κ^2 dσ = c · Π_i (κ_i + 1/2)_{e_i/2} / (n/2 + γ)_{|e|/2}`
//!
//! so results stay exact in the scalar field. Every other system goes
//! through numeric quadrature: a two-point sum on `S^0`, Gauss–Legendre on
//! arcs of the circle split at the zeros of the weight (and of the
//! integrand when `|·|` is taken), a product rule for smooth integrands in
//! higher dimensions, and stratified Monte Carlo for the rest.

mod gamma;
pub mod quadrature;

use std::sync::OnceLock;

use rayon::prelude::*;

pub use gamma::{
    exact_monomial_integral, exact_monomial_integral_closed, gamma_half_integer, sphere_area,
    ClosedForm,
};

use crate::dunkl::DunklContext;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{pochhammer, Scalar};
use quadrature::{circle_arcs, product_rule, zero_sphere, NodeSet, StratifiedSamples};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;
pub const DEFAULT_SAMPLES: usize = 1_000_000;
/// Gauss–Legendre points per arc (the error estimate uses twice as many).
pub const DEFAULT_ORDER: usize = 48;
/// Product rules larger than this fall back to Monte Carlo.
const MAX_PRODUCT_NODES: usize = 4_000_000;
const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Closed-form integrals for sign-change groups `Z2^n`.
    ExactSignChange,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericSettings {
    /// Monte Carlo sample count (rounded up to an even number).
    pub samples: usize,
    pub seed: u64,
    /// Base quadrature order.
    pub order: usize,
}

impl Default for NumericSettings {
    fn default() -> Self {
        NumericSettings {
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            order: DEFAULT_ORDER,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    PointSum,
    Quadrature,
    MonteCarlo,
}

/// A value with an absolute error estimate (a standard error for Monte
/// Carlo, the difference between two rule orders for quadrature).
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, error: 0.0 }
    }

    fn scale(self, k: f64) -> Self {
        Estimate {
            value: self.value * k,
            error: self.error * k.abs(),
        }
    }
}

/// `∫ g h_κ^2 dσ`, `∫ |g| h_κ^2 dσ` and `∫ g⁺ h_κ^2 dσ` from one set of
/// integrand evaluations.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SphereMoments {
    pub signed: Estimate,
    pub abs: Estimate,
    pub positive: Estimate,
    pub method: Method,
}

impl SphereMoments {
    /// `|2∫g⁺ - ∫|g| - ∫g|`.
    pub fn identity_residual(&self) -> f64 {
        (2.0 * self.positive.value - self.abs.value - self.signed.value).abs()
    }

    fn scale(self, k: f64) -> Self {
        SphereMoments {
            signed: self.signed.scale(k),
            abs: self.abs.scale(k),
            positive: self.positive.scale(k),
            method: self.method,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Integral<S> {
    pub value: f64,
    pub error: f64,
    /// The value as an exact multiple of `c = ∫ h_κ^2 dσ`, when known.
    pub c_multiple: Option<S>,
    pub method: Method,
}

impl<S: Scalar> Integral<S> {
    /// `c_multiple · c` as `q·π^k`, when both factors are exact.
    pub fn exact_value(&self, c: &MeanValueConstant) -> Option<ClosedForm> {
        let q = self.c_multiple.as_ref()?.to_rational()?;
        Some(c.closed_form.as_ref()?.scale(&q))
    }
}

/// `c = ∫_{S^{n-1}} h_κ^2 dσ`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanValueConstant {
    pub value: f64,
    pub error: f64,
    /// Available in exact mode when every `2κ_i` is an integer.
    pub closed_form: Option<ClosedForm>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositivePart {
    /// `M_1(r, f⁺)`.
    pub value: f64,
    pub error: f64,
    /// `M_1(r, f)`.
    pub abs: Estimate,
    /// `∫_{|y|=r} f h_κ^2 dσ`.
    pub signed: Estimate,
    pub identity_residual: f64,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanValueReport<S> {
    pub lhs: Integral<S>,
    pub rhs: f64,
    pub rhs_error: f64,
    /// `f(0)`: the exact multiple of `c` on the right-hand side.
    pub f_at_origin: S,
    pub pass: bool,
    pub exact: bool,
}

/// A polynomial prepared for fast `f64` evaluation, grouped by degree so
/// that `f(r u) = Σ_d r^d f_d(u)` costs one pass over the terms for any
/// number of radii.
#[derive(Debug, Clone)]
pub struct CompiledPoly {
    dim: usize,
    max_exp: usize,
    components: Vec<(u32, Vec<(f64, Vec<u32>)>)>,
}

impl CompiledPoly {
    pub fn new<S: Scalar>(f: &Polynomial<S>) -> Self {
        let mut max_exp = 0;
        let components = f
            .homogeneous_components()
            .into_iter()
            .map(|(d, comp)| {
                let terms = comp
                    .terms()
                    .map(|(m, c)| {
                        max_exp = max_exp.max(*m.exponents().iter().max().unwrap_or(&0) as usize);
                        (c.to_f64(), m.exponents().to_vec())
                    })
                    .collect();
                (d, terms)
            })
            .collect();
        CompiledPoly {
            dim: f.dim(),
            max_exp,
            components,
        }
    }

    pub fn scaled(mut self, k: f64) -> Self {
        for (_, terms) in &mut self.components {
            for (c, _) in terms.iter_mut() {
                *c *= k;
            }
        }
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> Option<u32> {
        self.components.last().map(|(d, _)| *d)
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    fn components_at(&self, u: &[f64], pows: &mut Vec<f64>, out: &mut Vec<f64>) {
        let stride = self.max_exp + 1;
        pows.clear();
        for &x in u {
            let mut p = 1.0;
            for _ in 0..stride {
                pows.push(p);
                p *= x;
            }
        }
        out.clear();
        for (_, terms) in &self.components {
            let mut s = 0.0;
            for (c, e) in terms {
                let mut t = *c;
                for (i, &k) in e.iter().enumerate() {
                    t *= pows[i * stride + k as usize];
                }
                s += t;
            }
            out.push(s);
        }
    }

    /// Value at `x`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let (mut pows, mut comps) = (Vec::new(), Vec::new());
        self.components_at(x, &mut pows, &mut comps);
        comps.iter().sum()
    }

    /// Value of the top-degree homogeneous part at `x`.
    pub fn eval_top(&self, x: &[f64]) -> f64 {
        let (mut pows, mut comps) = (Vec::new(), Vec::new());
        self.components_at(x, &mut pows, &mut comps);
        comps.last().copied().unwrap_or(0.0)
    }
}

enum Integrand<'a> {
    Poly {
        poly: &'a CompiledPoly,
        /// `r^d` for each radius and component.
        rpow: Vec<Vec<f64>>,
    },
    Func(&'a (dyn Fn(&[f64]) -> f64 + Sync)),
}

#[derive(Default)]
struct Scratch {
    pows: Vec<f64>,
    comps: Vec<f64>,
}

impl<'a> Integrand<'a> {
    fn poly(poly: &'a CompiledPoly, radii: &[f64]) -> Self {
        let rpow = radii
            .iter()
            .map(|r| poly.components.iter().map(|(d, _)| r.powi(*d as i32)).collect())
            .collect();
        Integrand::Poly { poly, rpow }
    }

    fn outputs(&self) -> usize {
        match self {
            Integrand::Poly { rpow, .. } => rpow.len(),
            Integrand::Func(_) => 1,
        }
    }

    fn eval(&self, u: &[f64], scratch: &mut Scratch, out: &mut [f64]) {
        match self {
            Integrand::Poly { poly, rpow } => {
                poly.components_at(u, &mut scratch.pows, &mut scratch.comps);
                for (o, rp) in out.iter_mut().zip(rpow) {
                    *o = rp.iter().zip(&scratch.comps).map(|(a, b)| a * b).sum();
                }
            }
            Integrand::Func(g) => out[0] = g(u),
        }
    }

    fn eval_one(&self, u: &[f64], scratch: &mut Scratch) -> f64 {
        let mut out = [0.0];
        self.eval(u, scratch, &mut out);
        out[0]
    }
}

struct SampleSet {
    samples: StratifiedSamples,
    weights: Vec<f64>,
}

/// Integrates against `h_κ^2 dσ` on `S^{n-1}` for one weighted root system.
#[derive(Debug)]
pub struct SphericalIntegrator<S> {
    ctx: DunklContext<S>,
    mode: Mode,
    settings: NumericSettings,
    /// Per-coordinate κ in exact mode.
    coord_kappa: Option<Vec<S>>,
    /// `(root, 2κ)` for every positive root with `κ ≠ 0`.
    weight_terms: Vec<(Vec<f64>, f64)>,
    /// Weight is a polynomial (every `2κ` an even non-negative integer).
    smooth_weight: bool,
    weight_degree: u32,
    exponent: f64,
    c: OnceLock<MeanValueConstant>,
    samples: OnceLock<SampleSet>,
}

impl std::fmt::Debug for SampleSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SampleSet({} pairs)", self.samples.pairs())
    }
}

impl<S: Scalar> SphericalIntegrator<S> {
    /// Closed-form mode; fails unless the system is `Z2^n` with every
    /// `κ_i > -1/2`.
    pub fn exact(ctx: &DunklContext<S>) -> Result<Self> {
        let kappas = ctx.system().coordinate_kappas().ok_or_else(|| {
            Error::ExactModeUnavailable("exact sphere integrals need roots ±e_i (Z2^n)".into())
        })?;
        let half = S::from_ratio(1, 2);
        if let Some(k) = kappas.iter().find(|k| **k <= -half.clone()) {
            return Err(Error::Domain(format!("∫ h_κ^2 dσ diverges for κ = {k}")));
        }
        let mut out = Self::numeric(ctx, NumericSettings::default());
        out.mode = Mode::ExactSignChange;
        out.coord_kappa = Some(kappas);
        Ok(out)
    }

    pub fn numeric(ctx: &DunklContext<S>, settings: NumericSettings) -> Self {
        let two = S::from_int(2);
        let mut smooth = true;
        let mut weight_degree = 0;
        let mut weight_terms = Vec::new();
        for (v, k) in ctx.system().positive_with_kappa() {
            if k.is_zero() {
                continue;
            }
            let twice = two.clone() * k.clone();
            match twice.as_integer() {
                Some(e) if e >= 0 && e % 2 == 0 => weight_degree += e as u32,
                _ => smooth = false,
            }
            weight_terms.push((v.iter().map(|x| x.to_f64()).collect(), twice.to_f64()));
        }
        let exponent = (ctx.dim() as f64 - 1.0) + 2.0 * ctx.gamma().to_f64();
        SphericalIntegrator {
            ctx: ctx.clone(),
            mode: Mode::Numeric,
            settings,
            coord_kappa: None,
            weight_terms,
            smooth_weight: smooth,
            weight_degree,
            exponent,
            c: OnceLock::new(),
            samples: OnceLock::new(),
        }
    }

    /// Exact mode where available, numeric otherwise.
    pub fn auto(ctx: &DunklContext<S>, settings: NumericSettings) -> Self {
        match Self::exact(ctx) {
            Ok(mut i) => {
                i.settings = settings;
                i
            }
            Err(_) => Self::numeric(ctx, settings),
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn settings(&self) -> &NumericSettings {
        &self.settings
    }

    pub fn context(&self) -> &DunklContext<S> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.ctx.dim()
    }

    /// `n - 1 + 2γ`, the homogeneity exponent of the weighted surface measure.
    pub fn measure_exponent(&self) -> f64 {
        self.exponent
    }

    pub fn mean_value_constant(&self) -> &MeanValueConstant {
        self.c.get_or_init(|| self.compute_c())
    }

    fn compute_c(&self) -> MeanValueConstant {
        if let Some(kappas) = &self.coord_kappa {
            let n = kappas.len();
            let twice: Vec<f64> = kappas.iter().map(|k| 2.0 * k.to_f64()).collect();
            let value = exact_monomial_integral(&twice).expect("κ_i > -1/2 checked");
            let two = S::from_int(2);
            let numer: Option<Vec<u32>> = kappas
                .iter()
                .map(|k| {
                    (two.clone() * k.clone())
                        .as_integer()
                        .and_then(|t| u32::try_from(t + 1).ok())
                })
                .collect();
            let closed_form = numer.and_then(|numer| {
                let denom = (S::from_int(n as i64) + two * self.ctx.gamma().clone()).as_integer()?;
                gamma::gamma_ratio_closed(&numer, u32::try_from(denom).ok().filter(|d| *d > 0)?)
            });
            return MeanValueConstant {
                value,
                error: 0.0,
                closed_form,
            };
        }
        let one = CompiledPoly::new(&Polynomial::<S>::one(self.dim()));
        let m = self.moments(&one, &[1.0], false)[0];
        MeanValueConstant {
            value: m.signed.value,
            error: m.signed.error,
            closed_form: None,
        }
    }

    /// `h_κ(u)^2`.
    pub fn weight(&self, u: &[f64]) -> f64 {
        let mut w = 1.0;
        for (v, e) in &self.weight_terms {
            let s: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            w *= s.abs().powf(*e);
        }
        w
    }

    fn check_dim(&self, f: &Polynomial<S>) -> Result<()> {
        if f.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: f.dim(),
            });
        }
        Ok(())
    }

    /// `∫ x^e h_κ^2 dσ / c` in exact mode (zero for any odd exponent).
    fn monomial_ratio(&self, e: &[u32]) -> S {
        let kappas = self.coord_kappa.as_ref().expect("exact mode");
        if e.iter().any(|k| k % 2 == 1) {
            return S::zero();
        }
        let half = S::from_ratio(1, 2);
        let mut num = S::one();
        for (k, &ei) in kappas.iter().zip(e) {
            num = num * pochhammer(&(k.clone() + half.clone()), ei / 2);
        }
        let base = S::from_ratio(self.dim() as i64, 2) + self.ctx.gamma().clone();
        let total: u32 = e.iter().sum();
        num / pochhammer(&base, total / 2)
    }

    /// `∫ g(r u) h_κ^2(u) dσ(u) / c` in exact mode.
    fn exact_multiple(&self, g: &Polynomial<S>, r: &S) -> S {
        let mut acc = S::zero();
        for (m, c) in g.terms() {
            if !m.is_even() {
                continue;
            }
            let rp = pow(r, m.total_degree());
            acc = acc + c.clone() * rp * self.monomial_ratio(m.exponents());
        }
        acc
    }

    /// `Some(±1)` when every monomial is even and all coefficients share a
    /// sign, so `g` itself is sign-definite; `Some(0)` for zero.
    fn even_sign(g: &Polynomial<S>) -> Option<i8> {
        if g.is_zero() {
            return Some(0);
        }
        let mut sign = 0i8;
        for (m, c) in g.terms() {
            if !m.is_even() {
                return None;
            }
            let s = if c.is_positive() { 1 } else { -1 };
            if sign != 0 && s != sign {
                return None;
            }
            sign = s;
        }
        Some(sign)
    }

    /// `∫_{S^{n-1}} g h_κ^2 dσ`, or of `|g|` when `use_abs`.
    pub fn integrate_sphere(&self, g: &Polynomial<S>, use_abs: bool) -> Result<Integral<S>> {
        self.check_dim(g)?;
        if self.mode == Mode::ExactSignChange {
            let sign = if use_abs { Self::even_sign(g) } else { Some(1) };
            if let Some(sign) = sign {
                let mut mult = self.exact_multiple(g, &S::one());
                if sign < 0 {
                    mult = -mult;
                }
                let c = self.mean_value_constant().value;
                return Ok(Integral {
                    value: mult.to_f64() * c,
                    error: 0.0,
                    c_multiple: Some(mult),
                    method: Method::Exact,
                });
            }
        }
        let m = self.moments(&CompiledPoly::new(g), &[1.0], use_abs)[0];
        let e = if use_abs { m.abs } else { m.signed };
        Ok(Integral {
            value: e.value,
            error: e.error,
            c_multiple: None,
            method: m.method,
        })
    }

    /// `∫_{S^{n-1}} g h_κ^2 dσ` for an arbitrary function. `smooth` allows
    /// high-order rules in dimension three and up; otherwise Monte Carlo.
    pub fn integrate_fn(&self, g: &(dyn Fn(&[f64]) -> f64 + Sync), smooth: bool) -> SphereMoments {
        self.numeric_moments(&Integrand::Func(g), None, !smooth)[0]
    }

    /// Spherical moments of `u ↦ scale · f(r u)` for every radius. Exact
    /// where possible (exact mode and `f` an even, sign-definite
    /// polynomial, or `use_abs` false); the measure factor `r^{n-1+2γ}` is
    /// not applied.
    pub fn radial_moments(
        &self,
        f: &Polynomial<S>,
        scale: f64,
        radii: &[f64],
        use_abs: bool,
    ) -> Result<Vec<SphereMoments>> {
        self.check_dim(f)?;
        if let Some(r) = radii.iter().find(|r| !(**r > 0.0) || !r.is_finite()) {
            return Err(Error::InvalidRadius(*r));
        }
        if self.mode == Mode::ExactSignChange {
            if let Some(sign) = Self::even_sign(f) {
                let c = self.mean_value_constant().value;
                let comps = f.homogeneous_components();
                let mults: Vec<(u32, f64)> = comps
                    .iter()
                    .map(|(d, p)| (*d, self.exact_multiple(p, &S::one()).to_f64()))
                    .collect();
                return Ok(radii
                    .iter()
                    .map(|r| {
                        let v: f64 = mults.iter().map(|(d, m)| m * r.powi(*d as i32)).sum();
                        let signed = Estimate::exact(scale * c * v);
                        let abs = Estimate::exact(signed.value.abs());
                        let positive = Estimate::exact(if sign * scale.signum() as i8 > 0 {
                            abs.value
                        } else {
                            0.0
                        });
                        SphereMoments {
                            signed,
                            abs,
                            positive,
                            method: Method::Exact,
                        }
                    })
                    .collect());
            }
        }
        let poly = CompiledPoly::new(f).scaled(scale);
        Ok(self.moments(&poly, radii, use_abs))
    }

    /// `M_1(r, f) = ∫_{|y|=r} |f| h_κ^2 dσ = r^{n-1+2γ} ∫_{S^{n-1}} |f(r u)| h_κ^2 dσ`.
    pub fn m1(&self, r: &S, f: &Polynomial<S>) -> Result<Integral<S>> {
        self.check_dim(f)?;
        let rf = r.to_f64();
        if !r.is_positive() || !rf.is_finite() {
            return Err(Error::InvalidRadius(rf));
        }
        let factor = rf.powf(self.exponent);
        if self.mode == Mode::ExactSignChange {
            if let Some(sign) = Self::even_sign(f) {
                let mut mult = self.exact_multiple(f, r);
                if sign < 0 {
                    mult = -mult;
                }
                let value = mult.to_f64() * self.mean_value_constant().value * factor;
                let two_gamma = S::from_int(2) * self.ctx.gamma().clone();
                let c_multiple = (S::from_int(self.dim() as i64 - 1) + two_gamma)
                    .as_integer()
                    .filter(|e| *e >= 0)
                    .map(|e| mult * pow(r, e as u32));
                return Ok(Integral {
                    value,
                    error: 0.0,
                    c_multiple,
                    method: Method::Exact,
                });
            }
        }
        let m = self.moments(&CompiledPoly::new(f), &[rf], true)[0];
        Ok(Integral {
            value: m.abs.value * factor,
            error: m.abs.error * factor,
            c_multiple: None,
            method: m.method,
        })
    }

    /// `M_1(r, f⁺)` with `f⁺ = (|f| + f)/2`, along with `M_1(r, f)` and the
    /// signed integral from the same evaluations.
    pub fn positive_part_m1(&self, r: &S, f: &Polynomial<S>) -> Result<PositivePart> {
        let rf = r.to_f64();
        if !r.is_positive() || !rf.is_finite() {
            return Err(Error::InvalidRadius(rf));
        }
        let m = self.radial_moments(f, 1.0, &[rf], true)?[0].scale(rf.powf(self.exponent));
        Ok(PositivePart {
            value: m.positive.value,
            error: m.positive.error,
            abs: m.abs,
            signed: m.signed,
            identity_residual: m.identity_residual(),
            method: m.method,
        })
    }

    /// `∫ f h_κ^2 dσ = c · f(0)` for h-harmonic `f`.
    pub fn mean_value_check(&self, f: &Polynomial<S>) -> Result<MeanValueReport<S>> {
        self.check_dim(f)?;
        if !self.ctx.is_h_harmonic(f)? {
            return Err(Error::NotHarmonic);
        }
        let lhs = self.integrate_sphere(f, false)?;
        let f0 = f.constant_term();
        let c = self.mean_value_constant();
        let rhs = f0.to_f64() * c.value;
        let rhs_error = f0.to_f64().abs() * c.error;
        let (pass, exact) = match &lhs.c_multiple {
            Some(m) => (m.close_to(&f0), S::EXACT),
            None => {
                let scale = c.value * f.max_abs_coeff();
                let tol = 4.0 * (lhs.error + rhs_error) + 1e-9 * scale;
                ((lhs.value - rhs).abs() <= tol, false)
            }
        };
        Ok(MeanValueReport {
            lhs,
            rhs,
            rhs_error,
            f_at_origin: f0,
            pass,
            exact,
        })
    }

    fn moments(&self, poly: &CompiledPoly, radii: &[f64], use_abs: bool) -> Vec<SphereMoments> {
        if self.dim() == 2 && use_abs {
            // Zeros move with the radius, so each radius gets its own arcs.
            return radii
                .iter()
                .map(|r| {
                    let ig = Integrand::poly(poly, &[*r]);
                    self.numeric_moments(&ig, poly.degree(), true)[0]
                })
                .collect();
        }
        self.numeric_moments(&Integrand::poly(poly, radii), poly.degree(), use_abs)
    }

    fn numeric_moments(
        &self,
        ig: &Integrand<'_>,
        degree: Option<u32>,
        non_smooth: bool,
    ) -> Vec<SphereMoments> {
        let n = self.dim();
        if n == 1 {
            return self
                .node_sums(&zero_sphere(), ig)
                .into_iter()
                .map(|s| SphereMoments {
                    signed: Estimate::exact(s[0]),
                    abs: Estimate::exact(s[1]),
                    positive: Estimate::exact(s[2]),
                    method: Method::PointSum,
                })
                .collect();
        }
        if n == 2 {
            let mut breaks = self.weight_breaks();
            if non_smooth {
                breaks.extend(circle_zeros(ig, degree.unwrap_or(8)));
            }
            let order = self.settings.order.max(8);
            return self.compare_rules(ig, &circle_arcs(&breaks, order), &circle_arcs(&breaks, 2 * order));
        }
        if !non_smooth && self.smooth_weight {
            let d = degree.unwrap_or(8) + self.weight_degree;
            let lo = (d as usize + 16).max(self.settings.order / 2);
            let hi = lo + 8;
            if 2 * hi.pow(n as u32 - 1) <= MAX_PRODUCT_NODES {
                return self.compare_rules(ig, &product_rule(n, lo), &product_rule(n, hi));
            }
        }
        self.monte_carlo(ig)
    }

    fn weight_breaks(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (v, _) in &self.weight_terms {
            let t = v[1].atan2(v[0]) + std::f64::consts::FRAC_PI_2;
            out.push(t);
            out.push(t + std::f64::consts::PI);
        }
        out
    }

    fn compare_rules(&self, ig: &Integrand<'_>, coarse: &NodeSet, fine: &NodeSet) -> Vec<SphereMoments> {
        let a = self.node_sums(coarse, ig);
        let b = self.node_sums(fine, ig);
        a.into_iter()
            .zip(b)
            .map(|(a, b)| {
                let est = |k: usize| Estimate {
                    value: b[k],
                    error: (a[k] - b[k]).abs() + 1e-15 * b[1].abs(),
                };
                SphereMoments {
                    signed: est(0),
                    abs: est(1),
                    positive: est(2),
                    method: Method::Quadrature,
                }
            })
            .collect()
    }

    /// `[Σ w g h², Σ w |g| h², Σ w g⁺ h²]` per integrand output.
    fn node_sums(&self, nodes: &NodeSet, ig: &Integrand<'_>) -> Vec<[f64; 3]> {
        let k = ig.outputs();
        let chunks = nodes.len().div_ceil(CHUNK);
        let partials: Vec<Vec<[f64; 3]>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut acc = vec![[0.0; 3]; k];
                let mut scratch = Scratch::default();
                let mut out = vec![0.0; k];
                for i in c * CHUNK..((c + 1) * CHUNK).min(nodes.len()) {
                    let u = nodes.point(i);
                    let w = nodes.weights[i] * self.weight(u);
                    ig.eval(u, &mut scratch, &mut out);
                    for (a, g) in acc.iter_mut().zip(&out) {
                        a[0] += w * g;
                        a[1] += w * g.abs();
                        a[2] += w * g.max(0.0);
                    }
                }
                acc
            })
            .collect();
        sum_partials(partials, k)
    }

    fn sample_set(&self) -> &SampleSet {
        self.samples.get_or_init(|| {
            let samples =
                StratifiedSamples::generate(self.dim(), self.settings.samples, self.settings.seed);
            let count = samples.pairs() * 2;
            let weights = (0..count)
                .into_par_iter()
                .map(|i| self.weight(samples.point(i)))
                .collect();
            SampleSet { samples, weights }
        })
    }

    fn monte_carlo(&self, ig: &Integrand<'_>) -> Vec<SphereMoments> {
        let set = self.sample_set();
        let k = ig.outputs();
        let pairs = set.samples.pairs();
        let chunks = pairs.div_ceil(CHUNK);
        // Per output: Σ(t_a + t_b) and Σ(t_a - t_b)^2 for g, |g|, g⁺.
        let partials: Vec<Vec<[f64; 6]>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut acc = vec![[0.0; 6]; k];
                let mut scratch = Scratch::default();
                let (mut ga, mut gb) = (vec![0.0; k], vec![0.0; k]);
                for p in c * CHUNK..((c + 1) * CHUNK).min(pairs) {
                    let (ia, ib) = (2 * p, 2 * p + 1);
                    ig.eval(set.samples.point(ia), &mut scratch, &mut ga);
                    ig.eval(set.samples.point(ib), &mut scratch, &mut gb);
                    let (wa, wb) = (set.weights[ia], set.weights[ib]);
                    for j in 0..k {
                        let ta = [ga[j], ga[j].abs(), ga[j].max(0.0)];
                        let tb = [gb[j], gb[j].abs(), gb[j].max(0.0)];
                        for q in 0..3 {
                            let (x, y) = (wa * ta[q], wb * tb[q]);
                            acc[j][q] += x + y;
                            acc[j][q + 3] += (x - y) * (x - y);
                        }
                    }
                }
                acc
            })
            .collect();
        let m = set.samples.pair_measure / 2.0;
        sum_partials(partials, k)
            .into_iter()
            .map(|s| {
                let est = |q: usize| Estimate {
                    value: m * s[q],
                    error: m * s[q + 3].sqrt(),
                };
                SphereMoments {
                    signed: est(0),
                    abs: est(1),
                    positive: est(2),
                    method: Method::MonteCarlo,
                }
            })
            .collect()
    }
}

fn sum_partials<const W: usize>(partials: Vec<Vec<[f64; W]>>, k: usize) -> Vec<[f64; W]> {
    let mut total = vec![[0.0; W]; k];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            for q in 0..W {
                t[q] += p[q];
            }
        }
    }
    total
}

fn pow<S: Scalar>(r: &S, k: u32) -> S {
    (0..k).fold(S::one(), |acc, _| acc * r.clone())
}

/// Angles in `[0, 2π)` where a single-output integrand changes sign on the
/// unit circle: a scan fine enough for the degree, then bisection.
fn circle_zeros(ig: &Integrand<'_>, degree: u32) -> Vec<f64> {
    let m = (64 * (degree as usize + 1)).max(1024);
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut scratch = Scratch::default();
    let mut g = |t: f64| ig.eval_one(&[t.cos(), t.sin()], &mut scratch);
    let vals: Vec<f64> = (0..=m).map(|i| g(two_pi * i as f64 / m as f64)).collect();
    let mut out = Vec::new();
    for i in 0..m {
        let (a, b) = (two_pi * i as f64 / m as f64, two_pi * (i + 1) as f64 / m as f64);
        let (fa, fb) = (vals[i], vals[i + 1]);
        if fa == 0.0 {
            out.push(a);
        } else if fa * fb < 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let fm = g(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{Family, WeightedRootSystem};
    use num_rational::BigRational;
    use std::f64::consts::PI;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    fn ctx(f: Family, k: &[Q]) -> DunklContext<Q> {
        DunklContext::new(WeightedRootSystem::build_named(f, k, false).unwrap())
    }

    fn poly(dim: usize, terms: &[(&[u32], i64)]) -> Polynomial<Q> {
        Polynomial::from_terms(dim, terms.iter().map(|(e, c)| (e.to_vec(), q(*c, 1)))).unwrap()
    }

    fn numeric(c: &DunklContext<Q>) -> SphericalIntegrator<Q> {
        SphericalIntegrator::numeric(c, NumericSettings::default())
    }

    #[test]
    fn constant_for_z2_half() {
        let z = ctx(Family::Z2(2), &[q(1, 2), q(1, 2)]);
        let intg = SphericalIntegrator::exact(&z).unwrap();
        let c = intg.mean_value_constant();
        assert!((c.value - 2.0).abs() < 1e-14);
        assert_eq!(c.closed_form.as_ref().unwrap().to_string(), "2");

        let one = Polynomial::<Q>::one(2);
        let i = intg.integrate_sphere(&one, false).unwrap();
        assert_eq!(i.c_multiple, Some(q(1, 1)));

        let x1sq = poly(2, &[(&[2, 0], 1)]);
        let i = intg.integrate_sphere(&x1sq, false).unwrap();
        assert_eq!(i.exact_value(c).unwrap().to_string(), "1");

        let xy = poly(2, &[(&[1, 1], 1)]);
        assert_eq!(intg.integrate_sphere(&xy, false).unwrap().value, 0.0);
    }

    #[test]
    fn constant_closed_forms() {
        let z = ctx(Family::Z2(3), &vec![q(0, 1); 3]);
        let c = SphericalIntegrator::exact(&z).unwrap().mean_value_constant().clone();
        assert_eq!(c.closed_form.unwrap().to_string(), "4*pi");
        // κ = (1, 1/2, 0): 2 Γ(3/2) Γ(1) Γ(1/2) / Γ(3) = π/2
        let z = ctx(Family::Z2(3), &[q(1, 1), q(1, 2), q(0, 1)]);
        let c = SphericalIntegrator::exact(&z).unwrap().mean_value_constant().clone();
        assert_eq!(c.closed_form.unwrap().to_string(), "1/2*pi");
        assert!((c.value - PI / 2.0).abs() < 1e-13);
        // κ = 1/3: no closed form, float value still available
        let z = ctx(Family::Z2(2), &[q(1, 3), q(1, 3)]);
        let c = SphericalIntegrator::exact(&z).unwrap().mean_value_constant().clone();
        assert!(c.closed_form.is_none());
        let expect = exact_monomial_integral(&[2.0 / 3.0, 2.0 / 3.0]).unwrap();
        assert!((c.value - expect).abs() < 1e-13);
    }

    #[test]
    fn exact_mode_rejects_other_systems() {
        let a = ctx(Family::A(2), &[q(1, 2)]);
        assert!(matches!(
            SphericalIntegrator::exact(&a),
            Err(Error::ExactModeUnavailable(_))
        ));
        assert_eq!(SphericalIntegrator::auto(&a, NumericSettings::default()).mode(), Mode::Numeric);
    }

    #[test]
    fn monomial_ratio_matches_dirichlet() {
        let (k1, k2, k3) = (q(1, 2), q(3, 2), q(1, 1));
        let z = ctx(Family::Z2(3), &[k1, k2, k3]);
        let intg = SphericalIntegrator::exact(&z).unwrap();
        let c = intg.mean_value_constant().value;
        for e in [[2u32, 0, 0], [2, 4, 2], [0, 0, 6], [4, 2, 0]] {
            let mono = poly(3, &[(&e, 1)]);
            let got = intg.integrate_sphere(&mono, false).unwrap();
            let alpha = [e[0] as f64 + 1.0, e[1] as f64 + 3.0, e[2] as f64 + 2.0];
            let want = exact_monomial_integral(&alpha).unwrap();
            assert!((got.value - want).abs() < 1e-12 * want, "{e:?}");
            assert!((got.c_multiple.unwrap().to_f64() * c - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn m1_examples() {
        let z = ctx(Family::Z2(2), &[q(1, 2), q(1, 2)]);
        let intg = SphericalIntegrator::exact(&z).unwrap();
        let c = intg.mean_value_constant().clone();
        let x1sq = poly(2, &[(&[2, 0], 1)]);
        for r in [1i64, 2, 4, 8] {
            let m = intg.m1(&q(r, 1), &x1sq).unwrap();
            assert_eq!(m.exact_value(&c).unwrap().rational, q(r.pow(5), 1));
            assert!((m.value - (r as f64).powi(5)).abs() < 1e-9 * (r as f64).powi(5));
        }
        let zero = Polynomial::<Q>::zero(2);
        assert_eq!(intg.m1(&q(3, 1), &zero).unwrap().value, 0.0);
        let one = Polynomial::<Q>::one(2);
        let m = intg.m1(&q(3, 1), &one).unwrap();
        assert!((m.value - 2.0 * 27.0).abs() < 1e-12);
        assert!(matches!(intg.m1(&q(0, 1), &one), Err(Error::InvalidRadius(_))));
        assert!(matches!(intg.m1(&q(-1, 1), &one), Err(Error::InvalidRadius(_))));
    }

    #[test]
    fn m1_numeric_matches_exact() {
        let z = ctx(Family::Z2(2), &[q(1, 2), q(1, 2)]);
        let ex = SphericalIntegrator::exact(&z).unwrap();
        let nu = numeric(&z);
        let x1sq = poly(2, &[(&[2, 0], 1)]);
        for r in [1i64, 2, 4, 8] {
            let a = ex.m1(&q(r, 1), &x1sq).unwrap().value;
            let b = nu.m1(&q(r, 1), &x1sq).unwrap();
            assert!((a - b.value).abs() < 1e-9 * a, "r={r}: {a} vs {}", b.value);
        }
    }

    #[test]
    fn m1_scaling_law() {
        let z = ctx(Family::Z2(2), &[q(1, 2), q(1, 3)]);
        let intg = numeric(&z);
        let f = poly(2, &[(&[3, 0], 1), (&[1, 2], -2), (&[2, 1], 1)]);
        let base = intg.m1(&q(1, 1), &f).unwrap().value;
        let e = 3.0 + 1.0 + 2.0 * (5.0 / 6.0);
        for r in [2i64, 5, 16] {
            let m = intg.m1(&q(r, 1), &f).unwrap().value;
            let want = base * (r as f64).powf(e);
            assert!((m - want).abs() < 1e-8 * want, "r={r}");
        }
    }

    #[test]
    fn positive_part_examples() {
        let z = ctx(Family::Z2(2), &[q(1, 2), q(1, 2)]);
        let intg = SphericalIntegrator::exact(&z).unwrap();
        let r = q(2, 1);
        let x1sq = poly(2, &[(&[2, 0], 1)]);
        let p = intg.positive_part_m1(&r, &x1sq).unwrap();
        assert!((p.value - intg.m1(&r, &x1sq).unwrap().value).abs() < 1e-12);
        let neg = poly(2, &[(&[2, 0], -1)]);
        assert_eq!(intg.positive_part_m1(&r, &neg).unwrap().value, 0.0);

        let x1 = poly(2, &[(&[1, 0], 1)]);
        let p = intg.positive_part_m1(&r, &x1).unwrap();
        assert!(p.identity_residual < 1e-10 * p.abs.value);
        assert!((2.0 * p.value - p.abs.value).abs() < 1e-9 * p.abs.value);
        assert!(p.signed.value.abs() < 1e-9);
    }

    #[test]
    fn mean_value_examples() {
        let z = ctx(Family::Z2(2), &[q(1, 2), q(1, 2)]);
        let intg = SphericalIntegrator::exact(&z).unwrap();
        let one = Polynomial::<Q>::one(2);
        let rep = intg.mean_value_check(&one).unwrap();
        assert!(rep.pass && rep.exact);
        assert!((rep.lhs.value - 2.0).abs() < 1e-14);

        let xy = poly(2, &[(&[1, 1], 1)]);
        assert!(intg.mean_value_check(&xy).unwrap().pass);

        // x1^2 - (1+2κ1)/(2+2κ1+2κ2) |x|^2 = (x1^2 - x2^2)/2 when κ1 = κ2
        let h = Polynomial::from_terms(2, vec![(vec![2, 0], q(1, 2)), (vec![0, 2], q(-1, 2))]).unwrap();
        let rep = intg.mean_value_check(&h).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.lhs.c_multiple, Some(q(0, 1)));

        let x1sq = poly(2, &[(&[2, 0], 1)]);
        assert_eq!(intg.mean_value_check(&x1sq).unwrap_err(), Error::NotHarmonic);
    }

    #[test]
    fn mean_value_numeric_dihedral() {
        let ws = WeightedRootSystem::<f64>::build_named(Family::Dihedral(3), &[0.5], false).unwrap();
        let d = DunklContext::new(ws);
        let intg = SphericalIntegrator::numeric(&d, NumericSettings::default());
        let p: Polynomial<f64> =
            Polynomial::from_terms(2, vec![(vec![2, 0], 1.0), (vec![0, 0], 3.0)]).unwrap();
        let h = &crate::almansi::harmonic_projection(&d, &p.homogeneous_part(2)).unwrap()
            + &Polynomial::constant(2, 3.0);
        let rep = intg.mean_value_check(&h).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!((rep.lhs.value - rep.rhs).abs() < 1e-8 * rep.rhs.abs());
    }

    #[test]
    fn orthogonality_of_distinct_degrees() {
        let z = ctx(Family::Z2(2), &[q(1, 2), q(2, 3)]);
        let intg = SphericalIntegrator::exact(&z).unwrap();
        let x1 = poly(2, &[(&[1, 0], 1)]);
        let p3 = poly(2, &[(&[3, 0], 1), (&[1, 2], 2)]);
        let h3 = crate::almansi::harmonic_projection(&z, &p3).unwrap();
        let i = intg.integrate_sphere(&(&x1 * &h3), false).unwrap();
        // same parity, different degree: still orthogonal
        assert_eq!(i.c_multiple, Some(q(0, 1)));
        let p2 = poly(2, &[(&[2, 0], 1)]);
        let h2 = crate::almansi::harmonic_projection(&z, &p2).unwrap();
        let one = Polynomial::<Q>::one(2);
        assert_eq!(intg.integrate_sphere(&(&one * &h2), false).unwrap().c_multiple, Some(q(0, 1)));
    }

    #[test]
    fn numeric_self_calibration() {
        // n = 2: arcs; n = 3: Monte Carlo (κ = 1/2 is not smooth) and
        // product rule (κ = 1).
        let cases: Vec<(DunklContext<Q>, Polynomial<Q>)> = vec![
            (ctx(Family::Z2(2), &[q(1, 2), q(1, 3)]), poly(2, &[(&[4, 0], 1), (&[2, 2], -3), (&[0, 0], 2)])),
            (ctx(Family::Z2(3), &[q(1, 2), q(1, 2), q(0, 1)]), poly(3, &[(&[2, 0, 0], 1), (&[0, 2, 2], 5)])),
            (ctx(Family::Z2(3), &[q(1, 1), q(0, 1), q(1, 1)]), poly(3, &[(&[2, 2, 0], 1), (&[0, 0, 4], -1)])),
        ];
        for (z, g) in &cases {
            let ex = SphericalIntegrator::exact(z).unwrap().integrate_sphere(g, false).unwrap();
            let settings = NumericSettings { samples: 200_000, ..Default::default() };
            let nu = SphericalIntegrator::numeric(z, settings).integrate_sphere(g, false).unwrap();
            let tol = 4.0 * nu.error + 1e-12 * ex.value.abs();
            assert!((ex.value - nu.value).abs() <= tol, "{} vs {} ± {}", ex.value, nu.value, nu.error);
        }
    }

    #[test]
    fn unweighted_area_matches_numeric() {
        for n in 2..=4 {
            let z = ctx(Family::Z2(n), &vec![q(0, 1); n]);
            let c = numeric(&z).mean_value_constant().clone();
            let a = exact_monomial_integral(&vec![0.0; n]).unwrap();
            assert!((c.value - a).abs() <= 4.0 * c.error + 1e-10, "n={n}");
        }
    }

    #[test]
    fn rank_one_point_sum() {
        let z = ctx(Family::Z2(1), &[q(3, 2)]);
        let x3 = poly(1, &[(&[3], 1), (&[0], 2)]);
        let nu = numeric(&z).integrate_sphere(&x3, false).unwrap();
        assert_eq!(nu.value, 4.0);
        let ex = SphericalIntegrator::exact(&z).unwrap().integrate_sphere(&x3, false).unwrap();
        assert!((ex.value - 4.0).abs() < 1e-14);
    }

    #[test]
    fn callable_integrand() {
        let z = ctx(Family::Z2(2), &[q(1, 2), q(1, 2)]);
        let intg = numeric(&z);
        let m = intg.integrate_fn(&|u: &[f64]| u[0] * u[0], true);
        assert!((m.signed.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let z = ctx(Family::Z2(3), &[q(1, 2), q(1, 2), q(1, 2)]);
        let settings = NumericSettings { samples: 50_000, ..Default::default() };
        let f = poly(3, &[(&[1, 1, 0], 1), (&[0, 0, 2], -1)]);
        let a = SphericalIntegrator::numeric(&z, settings.clone()).m1(&q(1, 1), &f).unwrap();
        let b = SphericalIntegrator::numeric(&z, settings).m1(&q(1, 1), &f).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.method, Method::MonteCarlo);
    }
}
