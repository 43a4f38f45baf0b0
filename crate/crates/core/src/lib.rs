//! Dunkl operators over finite reflection groups, acting on multivariate
//! polynomials with exact rational or floating-point coefficients.
//!
//! The algebra (operators, Laplacian, h-harmonic and Almansi
//! decompositions) is generic over [`Scalar`]; the aliases below fix the
//! two usual choices.
//!
//! ```
//! use dunkl::{Family, RatContext, RatPolynomial, Rational, WeightedRootSystem};
//! use dunkl::scalar::Scalar;
//!
//! let half = Rational::from_ratio(1, 2);
//! let ws = WeightedRootSystem::build_named(Family::Z2(2), &[half.clone(), half], false).unwrap();
//! let ctx = RatContext::new(ws);
//! let r2 = RatPolynomial::norm_squared(2);
//! // Δ_h |x|^2 = 2(n + 2γ) = 8
//! assert_eq!(ctx.laplacian(&r2).unwrap(), RatPolynomial::constant(2, Rational::from_int(8)));
//! ```

pub mod almansi;
pub mod cli;
pub mod corpus;
pub mod coxeter;
pub mod dunkl;
pub mod error;
pub mod liouville;
pub mod poly;
pub mod scalar;
pub mod sphereint;

pub use almansi::{
    almansi_decompose, h_harmonic_decompose, laplacian_shift, AlmansiDecomposition,
    HarmonicDecomposition,
};
pub use coxeter::{Family, RootSystem, ValidationReport, WeightedRootSystem};
pub use dunkl::DunklContext;
pub use error::{Error, Result};
pub use liouville::{classify, growth_exponent, theorem_consistency_suite, Grid, GrowthReport, Verdict};
pub use poly::{Monomial, Polynomial};
pub use scalar::Scalar;
pub use sphereint::{exact_monomial_integral, MeanValueConstant, NumericSettings, SphericalIntegrator};

pub type Rational = num_rational::BigRational;

pub type RatPolynomial = Polynomial<Rational>;
pub type FloatPolynomial = Polynomial<f64>;

pub type RatRootSystem = WeightedRootSystem<Rational>;
pub type FloatRootSystem = WeightedRootSystem<f64>;

pub type RatContext = DunklContext<Rational>;
pub type FloatContext = DunklContext<f64>;

pub type RatIntegrator = SphericalIntegrator<Rational>;
pub type FloatIntegrator = SphericalIntegrator<f64>;
