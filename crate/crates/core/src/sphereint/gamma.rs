//! Gamma values, closed forms `q·π^k`, and the Dirichlet sphere integral.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// `2 π^{n/2} / Γ(n/2)`, the area of `S^{n-1}` (2 for `n = 1`).
pub fn sphere_area(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    2.0 * (h * std::f64::consts::PI.ln() - ln_gamma(h)).exp()
}

/// `q · π^k` with rational `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedForm {
    pub rational: BigRational,
    pub pi_power: u32,
}

impl ClosedForm {
    pub fn to_f64(&self) -> f64 {
        let q = self.rational.to_f64().unwrap_or(f64::NAN);
        q * std::f64::consts::PI.powi(self.pi_power as i32)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        ClosedForm {
            rational: &self.rational * q,
            pi_power: self.pi_power,
        }
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_power {
            _ if self.rational.is_zero() => write!(f, "0"),
            0 => write!(f, "{}", self.rational),
            1 => write!(f, "{}*pi", self.rational),
            k => write!(f, "{}*pi^{}", self.rational, k),
        }
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `Γ(t/2)` for a positive integer `t`, as `(q, has_sqrt_pi)` with value
/// `q` or `q·√π`.
pub fn gamma_half_integer(twice: u32) -> (BigRational, bool) {
    assert!(twice > 0, "Γ has a pole at 0");
    if twice.is_multiple_of(2) {
        (BigRational::from_integer(factorial(twice / 2 - 1)), false)
    } else {
        // Γ(m + 1/2) = (2m)! / (4^m m!) √π
        let m = twice / 2;
        let num = factorial(2 * m);
        let den = BigInt::from(4).pow(m) * factorial(m);
        (BigRational::new(num, den), true)
    }
}

/// `2 Π Γ(a_i / 2) / Γ(b / 2)` for positive integers, in closed form. The
/// number of `√π` factors left over must be even; returns `None` otherwise.
pub fn gamma_ratio_closed(numer_twice: &[u32], denom_twice: u32) -> Option<ClosedForm> {
    let mut q = BigRational::from_integer(BigInt::from(2));
    let mut roots: i64 = 0;
    for &a in numer_twice {
        let (g, r) = gamma_half_integer(a);
        q *= g;
        roots += r as i64;
    }
    let (g, r) = gamma_half_integer(denom_twice);
    q /= g;
    roots -= r as i64;
    if roots < 0 || roots % 2 != 0 {
        return None;
    }
    Some(ClosedForm {
        rational: q,
        pi_power: (roots / 2) as u32,
    })
}

/// `∫_{S^{n-1}} Π |y_i|^{α_i} dσ(y) = 2 Π Γ((α_i+1)/2) / Γ((n + Σα_i)/2)`.
pub fn exact_monomial_integral(alpha: &[f64]) -> Result<f64> {
    if alpha.is_empty() {
        return Err(Error::Domain("exponent vector is empty".into()));
    }
    if let Some(a) = alpha.iter().find(|a| !(**a > -1.0) || !a.is_finite()) {
        return Err(Error::Domain(format!("exponent {a} must be > -1")));
    }
    let n = alpha.len() as f64;
    let total: f64 = alpha.iter().sum();
    let log = alpha.iter().map(|a| ln_gamma((a + 1.0) / 2.0)).sum::<f64>()
        - ln_gamma((n + total) / 2.0);
    Ok(2.0 * log.exp())
}

/// The same integral in closed form for integer exponents.
pub fn exact_monomial_integral_closed(alpha: &[u32]) -> Result<ClosedForm> {
    if alpha.is_empty() {
        return Err(Error::Domain("exponent vector is empty".into()));
    }
    let numer: Vec<u32> = alpha.iter().map(|a| a + 1).collect();
    let denom = alpha.len() as u32 + alpha.iter().sum::<u32>();
    Ok(gamma_ratio_closed(&numer, denom).expect("parity of √π factors is always even"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn gamma_half_values() {
        assert_eq!(gamma_half_integer(2), (q(1, 1), false));
        assert_eq!(gamma_half_integer(8), (q(6, 1), false));
        assert_eq!(gamma_half_integer(1), (q(1, 1), true));
        assert_eq!(gamma_half_integer(5), (q(3, 4), true));
    }

    #[test]
    fn areas() {
        assert!((sphere_area(1) - 2.0).abs() < 1e-14);
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-13);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn dirichlet_examples() {
        assert!((exact_monomial_integral(&[0.0, 0.0]).unwrap() - 2.0 * PI).abs() < 1e-13);
        assert!((exact_monomial_integral(&[1.0, 1.0]).unwrap() - 2.0).abs() < 1e-13);
        assert!((exact_monomial_integral(&[3.0, 1.0]).unwrap() - 1.0).abs() < 1e-13);
        assert!(exact_monomial_integral(&[-1.0, 0.0]).is_err());

        let c = exact_monomial_integral_closed(&[0, 0]).unwrap();
        assert_eq!(c, ClosedForm { rational: q(2, 1), pi_power: 1 });
        assert_eq!(c.to_string(), "2*pi");
        let c = exact_monomial_integral_closed(&[3, 1]).unwrap();
        assert_eq!(c, ClosedForm { rational: q(1, 1), pi_power: 0 });
        // ∫_{S^2} x^2 = 4π/3
        let c = exact_monomial_integral_closed(&[2, 0, 0]).unwrap();
        assert_eq!(c, ClosedForm { rational: q(4, 3), pi_power: 1 });
    }

    #[test]
    fn closed_form_matches_float() {
        for alpha in [[0u32, 0, 0, 0], [1, 2, 3, 4], [2, 2, 0, 6], [5, 1, 1, 1]] {
            let f: Vec<f64> = alpha.iter().map(|a| *a as f64).collect();
            let x = exact_monomial_integral(&f).unwrap();
            let c = exact_monomial_integral_closed(&alpha).unwrap();
            assert!((c.to_f64() - x).abs() < 1e-12 * x.abs(), "{alpha:?}");
        }
    }

    #[test]
    fn quadrature_oracle_circle() {
        // ∫_0^{2π} |cos θ|^a |sin θ|^b dθ by a fine midpoint rule.
        let m = 200_000;
        for (a, b) in [(1.0, 1.0), (3.0, 1.0), (0.5, 2.5)] {
            let s: f64 = (0..m)
                .map(|k| {
                    let t = 2.0 * PI * (k as f64 + 0.5) / m as f64;
                    t.cos().abs().powf(a) * t.sin().abs().powf(b)
                })
                .sum::<f64>()
                * 2.0
                * PI
                / m as f64;
            let x = exact_monomial_integral(&[a, b]).unwrap();
            assert!((s - x).abs() < 1e-6, "{a} {b}: {s} vs {x}");
        }
    }
}
