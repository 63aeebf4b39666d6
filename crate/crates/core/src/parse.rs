//! Text grammar for perfect polynomials.
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := coeff? ('*'? factor)*
//! factor   := var ('^' exponent)?
//! exponent := integer | '(' integer '/' integer ')'
//! ```

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exponent::PExponent;
use crate::field::PrimeChar;
use crate::perfpoly::{PerfMonomial, PerfPoly, Vars};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    char: PrimeChar,
    vars: &'a Vars,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{}`", b as char))
        }
    }

    fn integer(&mut self) -> Result<BigUint> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digits parse"))
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        if !matches!(self.src.get(self.pos), Some(c) if c.is_ascii_alphabetic()) {
            return self.err("expected variable");
        }
        while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_alphanumeric() || *c == b'_') {
            self.pos += 1;
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn exponent(&mut self) -> Result<PExponent> {
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let num = self.integer()?;
            self.expect(b'/')?;
            let den = self.integer()?;
            self.expect(b')')?;
            PExponent::from_fraction(&num, &den, self.char)
        } else {
            Ok(PExponent::new(self.integer()?, 0, self.char))
        }
    }

    fn coeff_mod_p(&self, n: &BigUint) -> u64 {
        (n % BigUint::from(self.char.get())).to_u64().expect("reduced")
    }

    fn term(&mut self) -> Result<(PerfMonomial, u64)> {
        let mut coeff = 1u64;
        let mut exps: Vec<(usize, PExponent)> = Vec::new();
        let mut any = false;
        loop {
            let c = match self.peek() {
                Some(c) => c,
                None => break,
            };
            if any && c == b'*' {
                self.pos += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let n = self.integer()?;
                coeff = self.char.mul(coeff, self.coeff_mod_p(&n));
            } else if c.is_ascii_alphabetic() {
                let at = self.pos;
                let name = self.ident()?;
                let idx = match self.vars.iter().position(|v| *v == name) {
                    Some(i) => i,
                    None => {
                        self.pos = at;
                        return Err(Error::UnknownVariable(name));
                    }
                };
                let e = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.exponent()?
                } else {
                    PExponent::from_int(1)
                };
                exps.push((idx, e));
            } else {
                break;
            }
            any = true;
        }
        if !any {
            return self.err("expected term");
        }
        Ok((PerfMonomial::from_exponents(exps, self.char), coeff))
    }

    fn expr(&mut self) -> Result<PerfPoly> {
        let mut terms = Vec::new();
        let mut sign_neg = false;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                sign_neg = true;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let (m, c) = self.term()?;
            let c = if sign_neg { self.char.neg(c) } else { c };
            terms.push((m, c));
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign_neg = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign_neg = true;
                }
                None => break,
                Some(c) => return self.err(format!("unexpected `{}`", c as char)),
            }
        }
        Ok(PerfPoly::from_terms(terms, self.char, self.vars))
    }
}

impl PerfPoly {
    /// Parse an expression in the polynomial grammar.
    pub fn parse(text: &str, char: PrimeChar, vars: &Vars) -> Result<PerfPoly> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
            char,
            vars,
        };
        let f = p.expr()?;
        Ok(f)
    }
}

/// Split a comma-separated list of expressions and parse each one.
pub fn parse_list(text: &str, char: PrimeChar, vars: &Vars) -> Result<Vec<PerfPoly>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| PerfPoly::parse(s, char, vars))
        .collect()
}

/// Parse a nonnegative rational in `a` or `a/b` form, as used for exponents.
pub fn parse_exponent(text: &str, char: PrimeChar) -> Result<PExponent> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text, "1"),
    };
    let num: BigUint = num.parse().map_err(|_| Error::Syntax {
        pos: 0,
        msg: format!("bad numerator `{num}`"),
    })?;
    let den: BigUint = den.parse().map_err(|_| Error::Syntax {
        pos: 0,
        msg: format!("bad denominator `{den}`"),
    })?;
    if den.is_zero() {
        return Err(Error::NonPPowerDenominator("0".into()));
    }
    PExponent::from_fraction(&num, &den, char)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perfpoly::vars_from;

    fn c(p: u64) -> PrimeChar {
        PrimeChar::new(p).unwrap()
    }

    #[test]
    fn two_term_level_one() {
        let v = vars_from(&["x", "y"]);
        let f = PerfPoly::parse("x^(1/2) + y", c(2), &v).unwrap();
        assert_eq!(f.terms().len(), 2);
        assert_eq!(f.level_of(), 1);
    }

    #[test]
    fn non_p_power_denominator() {
        let v = vars_from(&["x"]);
        assert!(matches!(
            PerfPoly::parse("x^(1/3)", c(2), &v),
            Err(Error::NonPPowerDenominator(_))
        ));
    }

    #[test]
    fn coefficients_reduce() {
        let v = vars_from(&["x", "y"]);
        let f = PerfPoly::parse("2*x^2*y + 3*x", c(5), &v).unwrap();
        let coeffs: Vec<u64> = f.terms().iter().map(|t| t.1).collect();
        assert_eq!(coeffs, vec![2, 3]);
        assert_eq!(f.level_of(), 0);
        let g = PerfPoly::parse("7*x", c(5), &v).unwrap();
        assert_eq!(g.to_string(), "2*x");
    }

    #[test]
    fn errors_carry_positions() {
        let v = vars_from(&["x", "y"]);
        assert!(matches!(
            PerfPoly::parse("x + z", c(2), &v),
            Err(Error::UnknownVariable(ref z)) if z == "z"
        ));
        match PerfPoly::parse("x + ", c(2), &v) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(PerfPoly::parse("x^(1/0)", c(2), &v), Err(Error::NonPPowerDenominator(_))));
        assert!(matches!(PerfPoly::parse("x ^ (1/", c(2), &v), Err(Error::Syntax { .. })));
    }

    #[test]
    fn implicit_products_and_whitespace() {
        let v = vars_from(&["x", "y"]);
        let a = PerfPoly::parse("3 x y^2", c(5), &v).unwrap();
        let b = PerfPoly::parse("3*x*y^2", c(5), &v).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            PerfPoly::parse("x*x^(1/2)", c(2), &v).unwrap(),
            PerfPoly::parse("x^(3/2)", c(2), &v).unwrap()
        );
    }

    #[test]
    fn lists() {
        let v = vars_from(&["x", "y"]);
        assert_eq!(parse_list("x, y, x*y", c(2), &v).unwrap().len(), 3);
        assert!(parse_list("  ", c(2), &v).unwrap().is_empty());
        assert_eq!(parse_exponent("3/4", c(2)).unwrap().to_text(c(2)), "(3/4)");
    }
}
