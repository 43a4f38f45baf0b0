//! Seeded generators for random test polynomials.

use rand::{Rng, RngExt};

use crate::almansi::harmonic_projection;
use crate::dunkl::DunklContext;
use crate::error::Result;
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// All exponent vectors of length `dim` and total degree `deg`, in
/// lexicographic order.
pub fn monomials_of_degree(dim: usize, deg: u32) -> Vec<Vec<u32>> {
    fn rec(dim: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == dim {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in 0..=left {
            prefix.push(e);
            rec(dim, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if dim > 0 {
        rec(dim, deg, &mut Vec::with_capacity(dim), &mut out);
    }
    out
}

/// Homogeneous polynomial of degree `deg` with integer coefficients in
/// `[-bound, bound]`; not identically zero.
pub fn random_homogeneous<S: Scalar, R: Rng + ?Sized>(
    dim: usize,
    deg: u32,
    bound: i64,
    rng: &mut R,
) -> Polynomial<S> {
    let monos = monomials_of_degree(dim, deg);
    let bound = bound.max(1);
    loop {
        let terms = monos.iter().filter_map(|e| {
            if rng.random_bool(0.6) {
                Some((e.clone(), S::from_int(rng.random_range(-bound..=bound))))
            } else {
                None
            }
        });
        let p = Polynomial::from_terms(dim, terms.collect::<Vec<_>>()).expect("consistent dims");
        if !p.is_zero() {
            return p;
        }
    }
}

/// A nonzero h-harmonic homogeneous polynomial of degree `deg`, obtained
/// by projecting a random homogeneous one. Returns zero only when the
/// h-harmonic space of that degree is trivial.
pub fn random_h_harmonic<S: Scalar, R: Rng + ?Sized>(
    ctx: &DunklContext<S>,
    deg: u32,
    bound: i64,
    rng: &mut R,
) -> Result<Polynomial<S>> {
    let mut last = Polynomial::zero(ctx.dim());
    for _ in 0..8 {
        let p = random_homogeneous(ctx.dim(), deg, bound, rng);
        last = harmonic_projection(ctx, &p)?;
        if !last.is_zero() {
            break;
        }
    }
    Ok(last)
}

/// Parts `φ_0, ..., φ_{p-1}` of a random polyharmonic polynomial of degree
/// at most `max_degree`. Each `φ_m` is a random sum of homogeneous
/// h-harmonics of degrees `j <= max_degree - 2m`; the last part is nonzero
/// whenever `2(p-1) <= max_degree`, so the result has order exactly `p`.
pub fn random_almansi_parts<S: Scalar, R: Rng + ?Sized>(
    ctx: &DunklContext<S>,
    p: u32,
    max_degree: u32,
    bound: i64,
    rng: &mut R,
) -> Result<Vec<Polynomial<S>>> {
    let mut parts = Vec::with_capacity(p as usize);
    for m in 0..p {
        let mut phi = Polynomial::zero(ctx.dim());
        if 2 * m <= max_degree {
            let top = max_degree - 2 * m;
            for j in 0..=top {
                if rng.random_bool(0.5) {
                    phi = &phi + &random_h_harmonic(ctx, j, bound, rng)?;
                }
            }
            if phi.is_zero() && m + 1 == p {
                let j = rng.random_range(0..=top);
                phi = random_h_harmonic(ctx, j, bound, rng)?;
            }
        }
        parts.push(phi);
    }
    Ok(parts)
}
