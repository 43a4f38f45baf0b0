//! Dunkl operators and the Dunkl Laplacian on polynomials.
//!
//! For a positive root `v` with multiplicity `κ_v` the operator
//!
//! ```text
//! D_j f = ∂_j f + Σ_{v ∈ R+} κ_v (f - f∘σ_v) / <x, v> · v_j
//! ```
//!
//! is evaluated exactly: the difference `f - f∘σ_v` vanishes on the
//! hyperplane `<x, v> = 0`, so the quotient is a polynomial.

use crate::coxeter::WeightedRootSystem;
use crate::error::{Error, Result};
use crate::poly::{LinearForm, Polynomial, Reflection};
use crate::scalar::Scalar;

/// Relative threshold under which float-mode coefficients are treated as
/// round-off.
const FLOAT_CHOP: f64 = 1e-11;

/// Relative threshold for float-mode harmonicity.
pub const FLOAT_HARMONIC_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
struct RootTerm<S> {
    kappa: S,
    root: Vec<S>,
    reflection: Reflection<S>,
    form: LinearForm<S>,
}

/// Precomputed reflection data for one weighted root system.
#[derive(Debug, Clone)]
pub struct DunklContext<S> {
    ws: WeightedRootSystem<S>,
    terms: Vec<RootTerm<S>>,
}

impl<S: Scalar> DunklContext<S> {
    pub fn new(ws: WeightedRootSystem<S>) -> Self {
        let terms = ws
            .positive_with_kappa()
            .filter(|(_, k)| !k.is_zero())
            .map(|(v, k)| RootTerm {
                kappa: k.clone(),
                root: v.to_vec(),
                reflection: Reflection::new(v).expect("roots are nonzero"),
                form: LinearForm::new(v.to_vec()),
            })
            .collect();
        DunklContext { ws, terms }
    }

    pub fn system(&self) -> &WeightedRootSystem<S> {
        &self.ws
    }

    pub fn dim(&self) -> usize {
        self.ws.dim()
    }

    pub fn gamma(&self) -> &S {
        self.ws.gamma()
    }

    fn check(&self, f: &Polynomial<S>) -> Result<()> {
        if f.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: f.dim(),
            });
        }
        Ok(())
    }

    fn chop(&self, p: Polynomial<S>, reference: &Polynomial<S>) -> Polynomial<S> {
        if S::EXACT {
            p
        } else {
            p.chop(FLOAT_CHOP * reference.max_abs_coeff())
        }
    }

    /// `(f - f∘σ_v) / <x, v>` for each root term.
    fn difference_quotients(&self, f: &Polynomial<S>) -> Result<Vec<Polynomial<S>>> {
        self.terms
            .iter()
            .map(|t| {
                let diff = f.checked_sub(&f.compose_reflection(&t.reflection)?)?;
                let diff = self.chop(diff, f);
                diff.divide_by_linear_form(&t.form)
            })
            .collect()
    }

    /// `D_j f` with a zero-based coordinate index `j`.
    pub fn apply(&self, j: usize, f: &Polynomial<S>) -> Result<Polynomial<S>> {
        self.check(f)?;
        if j >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index: j,
                dim: self.dim(),
            });
        }
        let quotients = self.difference_quotients(f)?;
        self.combine(j, f, &quotients)
    }

    fn combine(
        &self,
        j: usize,
        f: &Polynomial<S>,
        quotients: &[Polynomial<S>],
    ) -> Result<Polynomial<S>> {
        let mut out = f.partial_derivative(j)?;
        for (t, q) in self.terms.iter().zip(quotients) {
            let c = t.kappa.clone() * t.root[j].clone();
            if !c.is_zero() {
                out = out.checked_add(&q.scale(&c))?;
            }
        }
        Ok(self.chop(out, f))
    }

    /// `[D_1 f, ..., D_n f]`, sharing the difference quotients.
    pub fn gradient(&self, f: &Polynomial<S>) -> Result<Vec<Polynomial<S>>> {
        self.check(f)?;
        let quotients = self.difference_quotients(f)?;
        (0..self.dim())
            .map(|j| self.combine(j, f, &quotients))
            .collect()
    }

    /// `Δ_h f = Σ_j D_j (D_j f)`.
    pub fn laplacian(&self, f: &Polynomial<S>) -> Result<Polynomial<S>> {
        let grad = self.gradient(f)?;
        let mut out = Polynomial::zero(self.dim());
        for (j, g) in grad.iter().enumerate() {
            out = out.checked_add(&self.apply(j, g)?)?;
        }
        Ok(self.chop(out, f))
    }

    /// `Δ_h^k f`.
    pub fn laplacian_power(&self, f: &Polynomial<S>, k: u32) -> Result<Polynomial<S>> {
        let mut g = f.clone();
        for _ in 0..k {
            if g.is_zero() {
                break;
            }
            g = self.laplacian(&g)?;
        }
        Ok(g)
    }

    fn vanishes(&self, g: &Polynomial<S>, reference: &Polynomial<S>) -> bool {
        if S::EXACT {
            g.is_zero()
        } else {
            g.max_abs_coeff() < FLOAT_HARMONIC_TOL * reference.max_abs_coeff()
        }
    }

    /// Exact `Δ_h f = 0`, or a relative coefficient-norm test in float mode.
    pub fn is_h_harmonic(&self, f: &Polynomial<S>) -> Result<bool> {
        let lap = self.laplacian(f)?;
        Ok(self.vanishes(&lap, f))
    }

    /// Smallest `p <= max_p` with `Δ_h^p f = 0`. `max_p` defaults to
    /// `⌊deg f / 2⌋ + 1`, which always suffices for polynomials.
    pub fn polyharmonic_order(&self, f: &Polynomial<S>, max_p: Option<u32>) -> Result<Option<u32>> {
        self.check(f)?;
        let max_p = max_p.unwrap_or_else(|| f.degree().finite().map_or(1, |d| d / 2 + 1));
        let mut g = f.clone();
        for p in 1..=max_p {
            g = self.laplacian(&g)?;
            if self.vanishes(&g, f) {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }
}
