//! Recursive-descent parser for polynomial text such as
//! `"3*x1^2*x2 - 1/2*x3"`.
//!
//! ```text
//! poly    := [sign] term (sign term)*
//! term    := coeff [['*'] factors] | factors
//! coeff   := int ['/' int]
//! factors := var ('*' var)*
//! var     := 'x' int ['^' int]
//! ```
//!
//! Whitespace is allowed between any two tokens.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Scalar;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: usize,
}

const TERM_START: &[&str] = &["integer", "variable"];

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T> {
        Err(Error::Syntax {
            offset: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn digits(&mut self, what: &str) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail(&[what]);
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    fn small(&mut self, what: &str) -> Result<u32> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let text = self.digits(what)?;
        text.parse().or_else(|_| {
            self.pos = start;
            self.fail(&[what])
        })
    }

    fn coefficient(&mut self) -> Result<BigRational> {
        let num: BigInt = self.digits("integer")?.parse().expect("digits");
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let den: BigInt = self.digits("integer")?.parse().expect("digits");
            if den.is_zero() {
                self.pos = at;
                return self.fail(&["nonzero denominator"]);
            }
            return Ok(BigRational::new(num, den));
        }
        Ok(BigRational::from_integer(num))
    }

    fn variable(&mut self, exps: &mut [u32]) -> Result<()> {
        if self.peek() != Some(b'x') {
            return self.fail(&["variable"]);
        }
        self.pos += 1;
        let index = self.small("variable index")? as usize;
        if index == 0 || index > self.dim {
            return Err(Error::UnknownVariable {
                index,
                dim: self.dim,
            });
        }
        let mut e = 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            e = self.small("exponent")?;
        }
        exps[index - 1] = exps[index - 1].checked_add(e).ok_or(Error::Syntax {
            offset: self.pos,
            expected: vec!["smaller exponent".into()],
        })?;
        Ok(())
    }

    fn factors(&mut self, exps: &mut [u32]) -> Result<()> {
        self.variable(exps)?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            self.variable(exps)?;
        }
        Ok(())
    }

    fn term(&mut self) -> Result<(Vec<u32>, BigRational)> {
        let mut exps = vec![0; self.dim];
        match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                let c = self.coefficient()?;
                match self.peek() {
                    Some(b'*') => {
                        self.pos += 1;
                        self.factors(&mut exps)?;
                    }
                    Some(b'x') => self.factors(&mut exps)?,
                    _ => {}
                }
                Ok((exps, c))
            }
            Some(b'x') => {
                self.factors(&mut exps)?;
                Ok((exps, BigRational::one()))
            }
            _ => self.fail(TERM_START),
        }
    }

    fn polynomial(&mut self) -> Result<BTreeMap<Vec<u32>, BigRational>> {
        let mut acc: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        let mut negative = false;
        match self.peek() {
            Some(b'-') => {
                negative = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let (e, mut c) = self.term()?;
            if negative {
                c = -c;
            }
            *acc.entry(e).or_insert_with(BigRational::zero) += c;
            match self.peek() {
                None => return Ok(acc),
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                Some(_) => return self.fail(&["'+'", "'-'", "'*'", "end of input"]),
            }
            self.pos += 1;
        }
    }
}

/// Parses polynomial text in `dim` variables `x1, ..., x{dim}`.
pub fn parse_polynomial<S: Scalar>(text: &str, dim: usize) -> Result<Polynomial<S>> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        dim,
    };
    let terms = p.polynomial()?;
    Polynomial::from_terms(
        dim,
        terms
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e, S::from_rational(&c))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn examples() {
        let p: Polynomial<Q> = parse_polynomial("x1^2*x2 - 1/2*x3", 3).unwrap();
        let want =
            Polynomial::from_terms(3, vec![(vec![2, 1, 0], q(1, 1)), (vec![0, 0, 1], q(-1, 2))]).unwrap();
        assert_eq!(p, want);
        assert_eq!(p.num_terms(), 2);

        let c: Polynomial<Q> = parse_polynomial("3", 2).unwrap();
        assert_eq!(c, Polynomial::constant(2, q(3, 1)));

        assert_eq!(
            parse_polynomial::<Q>("x1 +", 2).unwrap_err(),
            Error::Syntax {
                offset: 4,
                expected: vec!["integer".into(), "variable".into()]
            }
        );
    }

    #[test]
    fn forms() {
        let a: Polynomial<Q> = parse_polynomial(" - 2x1*x2", 2).unwrap();
        assert_eq!(a, Polynomial::from_terms(2, vec![(vec![1, 1], q(-2, 1))]).unwrap());
        let b: Polynomial<Q> = parse_polynomial("+x2^3", 2).unwrap();
        assert_eq!(b, Polynomial::var(2, 1).pow(3));
    }

    #[test]
    fn errors() {
        assert_eq!(
            parse_polynomial::<Q>("x4", 3).unwrap_err(),
            Error::UnknownVariable { index: 4, dim: 3 }
        );
        assert_eq!(
            parse_polynomial::<Q>("x0", 3).unwrap_err(),
            Error::UnknownVariable { index: 0, dim: 3 }
        );
        assert!(matches!(
            parse_polynomial::<Q>("1/0*x1", 1).unwrap_err(),
            Error::Syntax { offset: 2, .. }
        ));
        assert!(matches!(
            parse_polynomial::<Q>("x1^", 1).unwrap_err(),
            Error::Syntax { offset: 3, .. }
        ));
        assert!(matches!(
            parse_polynomial::<Q>("", 1).unwrap_err(),
            Error::Syntax { offset: 0, .. }
        ));
        assert!(matches!(
            parse_polynomial::<Q>("x1 x2", 2).unwrap_err(),
            Error::Syntax { offset: 3, .. }
        ));
    }

    #[test]
    fn whitespace_and_merging() {
        let a: Polynomial<Q> = parse_polynomial(" 2 * x1 ^ 2 + x1*x1 - 3/6 ", 1).unwrap();
        let b: Polynomial<Q> = parse_polynomial("3*x1^2-1/2", 1).unwrap();
        assert_eq!(a, b);
        let z: Polynomial<Q> = parse_polynomial("x1 - x1", 1).unwrap();
        assert!(z.is_zero());
        let f: Polynomial<f64> = parse_polynomial("1/4*x2 + 2x1", 2).unwrap();
        assert_eq!(f.coeff(&crate::poly::Monomial::new(vec![0, 1])), 0.25);
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial<Q>> {
        prop::collection::vec((prop::collection::vec(0u32..4, 3), -20i64..20, 1i64..6), 0..6).prop_map(
            |terms| {
                Polynomial::from_terms(3, terms.into_iter().map(|(e, n, d)| (e, q(n, d)))).unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn display_round_trip(p in arb_poly()) {
            let text = p.to_string();
            let back: Polynomial<Q> = parse_polynomial(&text, 3).unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
