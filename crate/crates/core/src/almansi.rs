//! h-harmonic and Almansi decompositions of polynomials.
//!
//! Every homogeneous `p` of degree `m` splits uniquely as
//! `p = Σ_j |x|^{2j} h_{m-2j}` with `Δ_h h_{m-2j} = 0`. The parts are found
//! top-down: applying `Δ_h^k` kills every term with `j < k` and maps
//! `|x|^{2k} h_{m-2k}` to a known nonzero multiple of `h_{m-2k}`, so the
//! system is triangular.

use crate::dunkl::DunklContext;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// `p = Σ_j |x|^{2j} h_{m-2j}` for a homogeneous `p` of degree `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicDecomposition<S> {
    degree: u32,
    /// `(j, h_{m-2j})` for `j = 0..=⌊m/2⌋`.
    parts: Vec<(u32, Polynomial<S>)>,
}

impl<S: Scalar> HarmonicDecomposition<S> {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn parts(&self) -> &[(u32, Polynomial<S>)] {
        &self.parts
    }

    /// `h_{m-2j}`.
    pub fn part(&self, j: u32) -> Option<&Polynomial<S>> {
        self.parts.iter().find(|(k, _)| *k == j).map(|(_, h)| h)
    }

    /// The h-harmonic projection `h_m`.
    pub fn harmonic_top(&self) -> &Polynomial<S> {
        &self.parts[0].1
    }

    pub fn reconstruct(&self) -> Polynomial<S> {
        let dim = self.parts[0].1.dim();
        self.parts.iter().fold(Polynomial::zero(dim), |acc, (j, h)| {
            &acc + &(&Polynomial::norm_power(dim, *j) * h)
        })
    }
}

/// `f = Σ_{m<p} |x|^{2m} φ_m` with every `φ_m` h-harmonic.
#[derive(Debug, Clone, PartialEq)]
pub struct AlmansiDecomposition<S> {
    parts: Vec<Polynomial<S>>,
}

impl<S: Scalar> AlmansiDecomposition<S> {
    /// Wraps a list `φ_0, ..., φ_{p-1}` (not checked for harmonicity).
    pub fn from_parts(parts: Vec<Polynomial<S>>) -> Result<Self> {
        let Some(first) = parts.first() else {
            return Err(Error::Input("an Almansi decomposition needs p >= 1".into()));
        };
        let dim = first.dim();
        if let Some(bad) = parts.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(AlmansiDecomposition { parts })
    }

    pub fn order(&self) -> u32 {
        self.parts.len() as u32
    }

    pub fn parts(&self) -> &[Polynomial<S>] {
        &self.parts
    }

    pub fn reconstruct(&self) -> Polynomial<S> {
        reconstruct(self)
    }
}

/// `Σ_m |x|^{2m} φ_m`.
pub fn reconstruct<S: Scalar>(dec: &AlmansiDecomposition<S>) -> Polynomial<S> {
    let dim = dec.parts[0].dim();
    dec.parts
        .iter()
        .enumerate()
        .fold(Polynomial::zero(dim), |acc, (m, phi)| {
            &acc + &(&Polynomial::norm_power(dim, m as u32) * phi)
        })
}

/// `2a (2a + 2d + n + 2γ - 2)`: the factor with
/// `Δ_h(|x|^{2a} h) = factor · |x|^{2a-2} h` for h-harmonic `h` of degree `d`.
pub fn shift_factor<S: Scalar>(ctx: &DunklContext<S>, a: u32, d: u32) -> S {
    let two_a = S::from_int(2 * a as i64);
    let inner = S::from_int(2 * a as i64 + 2 * d as i64 + ctx.dim() as i64 - 2)
        + S::from_int(2) * ctx.gamma().clone();
    two_a * inner
}

/// `Δ_h(|x|^{2a} q)` for homogeneous `q` of degree `d`, via
/// `|x|^{2a} Δ_h q + 2a(2a + 2d + n + 2γ - 2) |x|^{2a-2} q`.
pub fn laplacian_shift<S: Scalar>(
    ctx: &DunklContext<S>,
    a: u32,
    q: &Polynomial<S>,
) -> Result<Polynomial<S>> {
    if a == 0 {
        return Err(Error::Input("laplacian_shift needs a >= 1".into()));
    }
    let d = q.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    let n = ctx.dim();
    let first = &Polynomial::norm_power(n, a) * &ctx.laplacian(q)?;
    let second = (&Polynomial::norm_power(n, a - 1) * q).scale(&shift_factor(ctx, a, d));
    first.checked_add(&second)
}

fn is_singular<S: Scalar>(c: &S) -> bool {
    c.is_negligible(1e-12)
}

/// Splits a homogeneous polynomial into `|x|^{2j}`-weighted h-harmonics.
pub fn h_harmonic_decompose<S: Scalar>(
    ctx: &DunklContext<S>,
    p: &Polynomial<S>,
) -> Result<HarmonicDecomposition<S>> {
    if p.dim() != ctx.dim() {
        return Err(Error::DimensionMismatch {
            expected: ctx.dim(),
            found: p.dim(),
        });
    }
    let m = p.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    let n = ctx.dim();
    let top = m / 2;
    let mut found: Vec<(u32, Polynomial<S>)> = Vec::with_capacity(top as usize + 1);
    // residual = p - Σ_{j > k} |x|^{2j} h_{m-2j}
    let mut residual = p.clone();
    for k in (0..=top).rev() {
        let d = m - 2 * k;
        let mut scale = S::one();
        for a in 1..=k {
            let f = shift_factor(ctx, a, d);
            if is_singular(&f) {
                return Err(Error::SingularSystem { step: k });
            }
            scale = scale * f;
        }
        let h = ctx
            .laplacian_power(&residual, k)?
            .scale(&(S::one() / scale));
        if k > 0 {
            residual = residual.checked_sub(&(&Polynomial::norm_power(n, k) * &h))?;
            if !S::EXACT {
                residual = residual.chop(1e-12 * p.max_abs_coeff());
            }
        }
        found.push((k, h));
    }
    found.reverse();
    Ok(HarmonicDecomposition {
        degree: m,
        parts: found,
    })
}

/// The h-harmonic projection of a homogeneous polynomial.
pub fn harmonic_projection<S: Scalar>(
    ctx: &DunklContext<S>,
    p: &Polynomial<S>,
) -> Result<Polynomial<S>> {
    Ok(h_harmonic_decompose(ctx, p)?.harmonic_top().clone())
}

/// Almansi decomposition of a polynomial with `Δ_h^p f = 0`. Parts beyond
/// what `f` needs come back as zero polynomials.
pub fn almansi_decompose<S: Scalar>(
    ctx: &DunklContext<S>,
    f: &Polynomial<S>,
    p: u32,
) -> Result<AlmansiDecomposition<S>> {
    if p == 0 {
        return Err(Error::Input("Almansi order p must be >= 1".into()));
    }
    if f.dim() != ctx.dim() {
        return Err(Error::DimensionMismatch {
            expected: ctx.dim(),
            found: f.dim(),
        });
    }
    let residue = ctx.laplacian_power(f, p)?;
    let vanishes = if S::EXACT {
        residue.is_zero()
    } else {
        residue.max_abs_coeff() < crate::dunkl::FLOAT_HARMONIC_TOL * f.max_abs_coeff()
    };
    if !vanishes {
        return Err(Error::NotPolyharmonic { order: p });
    }
    let mut parts = vec![Polynomial::zero(ctx.dim()); p as usize];
    for (_, component) in f.homogeneous_components() {
        let dec = h_harmonic_decompose(ctx, &component)?;
        for (j, h) in dec.parts() {
            if h.is_zero() {
                continue;
            }
            let slot = parts
                .get_mut(*j as usize)
                .ok_or(Error::NotPolyharmonic { order: p })?;
            *slot = slot.checked_add(h)?;
        }
    }
    Ok(AlmansiDecomposition { parts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{Family, WeightedRootSystem};
    use crate::corpus;
    use num_rational::BigRational;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    fn ctx(f: Family, k: &[Q]) -> DunklContext<Q> {
        DunklContext::new(WeightedRootSystem::build_named(f, k, false).unwrap())
    }

    fn c(dim: usize, v: Q) -> Polynomial<Q> {
        Polynomial::constant(dim, v)
    }

    #[test]
    fn laplacian_shift_examples() {
        let z = ctx(Family::Z2(2), &[q(1, 2), q(1, 2)]);
        let one = c(2, q(1, 1));
        assert_eq!(laplacian_shift(&z, 1, &one).unwrap(), c(2, q(8, 1)));
        let r4 = Polynomial::<Q>::norm_power(2, 2);
        assert_eq!(laplacian_shift(&z, 2, &one).unwrap(), z.laplacian(&r4).unwrap());

        let z0 = ctx(Family::Z2(2), &[q(0, 1), q(0, 1)]);
        let h = &Polynomial::var(2, 0) * &Polynomial::var(2, 1);
        assert_eq!(laplacian_shift(&z0, 1, &h).unwrap(), h.scale(&q(12, 1)));

        let mixed = &one + &Polynomial::var(2, 0);
        assert_eq!(laplacian_shift(&z, 1, &mixed).unwrap_err(), Error::NotHomogeneous);
    }

    #[test]
    fn decompose_x1_squared() {
        let (k1, k2) = (q(1, 3), q(5, 2));
        let z = ctx(Family::Z2(2), &[k1.clone(), k2.clone()]);
        let x1sq = Polynomial::var(2, 0).pow(2);
        let cst = (q(1, 1) + q(2, 1) * &k1) / (q(2, 1) + q(2, 1) * &k1 + q(2, 1) * &k2);
        let dec = h_harmonic_decompose(&z, &x1sq).unwrap();
        let r2 = Polynomial::<Q>::norm_squared(2);
        assert_eq!(dec.part(0).unwrap(), &(&x1sq - &r2.scale(&cst)));
        assert_eq!(dec.part(1).unwrap(), &c(2, cst.clone()));
        assert_eq!(dec.reconstruct(), x1sq);

        let dec = almansi_decompose(&z, &x1sq, 2).unwrap();
        assert_eq!(dec.parts()[0], &x1sq - &r2.scale(&cst));
        assert_eq!(dec.parts()[1], c(2, cst));
    }

    #[test]
    fn decompose_trivial_cases() {
        let z = ctx(Family::Z2(2), &[q(1, 2), q(1, 2)]);
        let r2 = Polynomial::<Q>::norm_squared(2);
        let dec = h_harmonic_decompose(&z, &r2).unwrap();
        assert!(dec.part(0).unwrap().is_zero());
        assert_eq!(dec.part(1).unwrap(), &c(2, q(1, 1)));

        let xy = &Polynomial::var(2, 0) * &Polynomial::var(2, 1);
        let dec = h_harmonic_decompose(&z, &xy).unwrap();
        assert_eq!(dec.harmonic_top(), &xy);
        assert!(dec.part(1).unwrap().is_zero());

        let al = almansi_decompose(&z, &r2, 2).unwrap();
        assert!(al.parts()[0].is_zero());
        assert_eq!(al.parts()[1], c(2, q(1, 1)));

        let al = almansi_decompose(&z, &xy, 1).unwrap();
        assert_eq!(al.parts(), std::slice::from_ref(&xy));

        let al = almansi_decompose(&z, &xy, 3).unwrap();
        assert_eq!(al.order(), 3);
        assert!(al.parts()[1].is_zero() && al.parts()[2].is_zero());
    }

    #[test]
    fn reconstruct_examples() {
        let parts = vec![Polynomial::<Q>::zero(2), c(2, q(1, 1))];
        let dec = AlmansiDecomposition::from_parts(parts).unwrap();
        assert_eq!(dec.reconstruct(), Polynomial::norm_squared(2));
        assert!(AlmansiDecomposition::<Q>::from_parts(vec![]).is_err());
    }

    #[test]
    fn not_polyharmonic() {
        let z = ctx(Family::Z2(2), &[q(1, 2), q(1, 2)]);
        let r4 = Polynomial::<Q>::norm_power(2, 2);
        assert_eq!(
            almansi_decompose(&z, &r4, 2).unwrap_err(),
            Error::NotPolyharmonic { order: 2 }
        );
    }

    #[test]
    fn singular_with_negative_kappa() {
        // n = 1, γ = -1/2: the factor 2a(2a + 2d + 1 - 1 - 2) vanishes at a = 1, d = 0.
        let ws = WeightedRootSystem::build_named(Family::Z2(1), &[q(-1, 2)], true).unwrap();
        let z = DunklContext::new(ws);
        let x2 = Polynomial::var(1, 0).pow(2);
        assert!(matches!(
            h_harmonic_decompose(&z, &x2),
            Err(Error::SingularSystem { .. })
        ));
    }

    #[test]
    fn float_mode_decomposition() {
        let ws = WeightedRootSystem::<f64>::build_named(Family::Dihedral(3), &[0.5], false).unwrap();
        let d = DunklContext::new(ws);
        let p: Polynomial<f64> =
            Polynomial::from_terms(2, vec![(vec![4, 0], 1.0), (vec![1, 3], -2.0), (vec![2, 2], 0.5)])
                .unwrap();
        let dec = h_harmonic_decompose(&d, &p).unwrap();
        for (_, h) in dec.parts() {
            assert!(d.is_h_harmonic(h).unwrap());
        }
        let back = dec.reconstruct();
        assert!((&back - &p).max_abs_coeff() < 1e-10);
    }

    fn families() -> Vec<DunklContext<Q>> {
        vec![
            ctx(Family::Z2(2), &[q(1, 2), q(2, 3)]),
            ctx(Family::A(2), &[q(1, 3)]),
            ctx(Family::B(2), &[q(1, 2), q(1, 1)]),
            ctx(Family::D(3), &[q(3, 4)]),
            ctx(Family::Dihedral(4), &[q(1, 1), q(1, 5)]),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn shift_identity_matches_brute_force(seed in any::<u64>(), fam in 0usize..5, a in 1u32..=3, d in 0u32..=4) {
            let z = &families()[fam];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let qp = corpus::random_homogeneous::<Q, _>(z.dim(), d, 4, &mut rng);
            let brute = z.laplacian(&(&Polynomial::norm_power(z.dim(), a) * &qp)).unwrap();
            prop_assert_eq!(laplacian_shift(z, a, &qp).unwrap(), brute);
        }

        #[test]
        fn parts_are_harmonic_and_reconstruct(seed in any::<u64>(), fam in 0usize..5, m in 0u32..=6) {
            let z = &families()[fam];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = corpus::random_homogeneous::<Q, _>(z.dim(), m, 4, &mut rng);
            let dec = h_harmonic_decompose(z, &p).unwrap();
            for (j, h) in dec.parts() {
                prop_assert!(z.is_h_harmonic(h).unwrap());
                if !h.is_zero() {
                    prop_assert_eq!(h.homogeneous_degree(), Some(m - 2 * j));
                }
            }
            prop_assert_eq!(dec.reconstruct(), p);
        }

        #[test]
        fn decomposition_is_unique(seed in any::<u64>(), fam in 0usize..3, m in 2u32..=5) {
            let z = &families()[fam];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = corpus::random_homogeneous::<Q, _>(z.dim(), m, 4, &mut rng);
            let dec = h_harmonic_decompose(z, &p).unwrap();
            // perturb h_{m-2}
            let bump = corpus::random_h_harmonic(z, m - 2, 3, &mut rng).unwrap();
            prop_assume!(!bump.is_zero());
            let mut parts: Vec<Polynomial<Q>> = dec.parts().iter().map(|(_, h)| h.clone()).collect();
            parts[1] = &parts[1] + &bump;
            let n = z.dim();
            let rebuilt = parts.iter().enumerate().fold(Polynomial::zero(n), |acc, (j, h)| {
                &acc + &(&Polynomial::norm_power(n, j as u32) * h)
            });
            let again = h_harmonic_decompose(z, &rebuilt).unwrap();
            let got: Vec<Polynomial<Q>> = again.parts().iter().map(|(_, h)| h.clone()).collect();
            prop_assert_eq!(got, parts);
        }

        #[test]
        fn almansi_round_trip(seed in any::<u64>(), fam in 0usize..5, p in 1u32..=3) {
            let z = &families()[fam];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let parts = corpus::random_almansi_parts(z, p, 6, 3, &mut rng).unwrap();
            let dec = AlmansiDecomposition::from_parts(parts.clone()).unwrap();
            let f = dec.reconstruct();
            let again = almansi_decompose(z, &f, p).unwrap();
            prop_assert_eq!(again.parts(), parts.as_slice());
            prop_assert_eq!(again.reconstruct(), f);
        }
    }
}
