//! The normalized `ℤ[1/p]`-valued valuation on one-variable perfect closures
//! and kernel recovery along the chain `a_k = x^{(p−1)/p^k} a_{k+1}`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponent::{p_pow, PExponent};
use crate::field::PrimeChar;
use crate::perfpoly::PerfPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValuationValue {
    Finite(PExponent),
    /// Every term sits at or past the truncation order.
    AtLeast(PExponent),
    Infinity,
}

impl ValuationValue {
    pub fn to_rational(&self, p: PrimeChar) -> Option<BigRational> {
        match self {
            ValuationValue::Finite(e) | ValuationValue::AtLeast(e) => Some(e.to_rational(p)),
            ValuationValue::Infinity => None,
        }
    }

    /// `self ≥ r`, with `AtLeast` counted at its bound.
    pub fn at_least(&self, r: &BigRational, p: PrimeChar) -> bool {
        self.to_rational(p).is_none_or(|v| &v >= r)
    }

    pub fn text(&self, p: PrimeChar) -> String {
        match self {
            ValuationValue::Finite(e) => plain(e, p),
            ValuationValue::AtLeast(e) => format!(">={}", plain(e, p)),
            ValuationValue::Infinity => "inf".into(),
        }
    }
}

fn plain(e: &PExponent, p: PrimeChar) -> String {
    crate::serde_text::rational_text(&e.to_rational(p))
}

fn single_variable(f: &PerfPoly) -> Result<()> {
    if f.support().len() > 1 {
        return Err(Error::MultiVariable);
    }
    Ok(())
}

/// Minimum exponent among the terms of `f`, saturating at `truncation`.
pub fn perfect_valuation(f: &PerfPoly, truncation: Option<&PExponent>) -> Result<ValuationValue> {
    single_variable(f)?;
    let p = f.char();
    let min = f
        .terms()
        .iter()
        .map(|(m, _)| m.degree().clone())
        .min_by(|a, b| a.cmp_value(b, p));
    Ok(match (min, truncation) {
        (None, _) => ValuationValue::Infinity,
        (Some(v), Some(t)) if v.cmp_value(t, p) != Ordering::Less => ValuationValue::AtLeast(t.clone()),
        (Some(v), _) => ValuationValue::Finite(v),
    })
}

/// `1 − p^{−m}`.
pub fn chain_bound(p: PrimeChar, m: u32) -> BigRational {
    BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(p_pow(p, m)))
}

/// `x^{(p−1)/p^k}`.
fn step(x: &PerfPoly, k: u32) -> PerfPoly {
    x.pow_u64(x.char().get() - 1).pth_root(k)
}

/// `(a_1, …, a_N)` from `a_N` by `a_k = x^{(p−1)/p^k} a_{k+1}`.
pub fn build_chain(a_n: &PerfPoly, x: &PerfPoly, n: usize) -> Vec<PerfPoly> {
    let mut out = vec![a_n.clone(); n];
    for k in (1..n).rev() {
        out[k - 1] = &step(x, k as u32) * &out[k];
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ext1Report {
    pub p: u64,
    pub length: usize,
    pub v_a1: String,
    pub bound: String,
    pub bound_holds: bool,
    pub tight: bool,
    /// `a_1 / x` when `v(a_1) ≥ 1` and `x` divides `a_1`.
    pub recovered: Option<String>,
    /// `a · x^{1/p^{k−1}} = a_k` for every `k`.
    pub recovery_verified: bool,
}

fn divide_by(f: &PerfPoly, x: &PerfPoly) -> Option<PerfPoly> {
    let (mx, cx) = match x.terms() {
        [(m, c)] => (m, *c),
        _ => return None,
    };
    let p = f.char();
    let inv = p.inv(cx);
    let mut terms = Vec::with_capacity(f.terms().len());
    for (m, c) in f.terms() {
        terms.push((m.checked_div(mx, p)?, p.mul(*c, inv)));
    }
    Some(PerfPoly::from_terms(terms, p, f.vars()))
}

/// Check the chain relations, the bound `v(a_1) ≥ 1 − p^{−(N−1)}`, and
/// recover `a = a_1/x` when possible.
pub fn ext1_chain_recovery(a: &[PerfPoly], x: &PerfPoly) -> Result<Ext1Report> {
    if a.is_empty() {
        return Err(Error::Invalid("empty chain".into()));
    }
    let p = x.char();
    single_variable(x)?;
    for f in a {
        f.check_compatible(x)?;
    }
    for k in 1..a.len() {
        if a[k - 1] != &step(x, k as u32) * &a[k] {
            return Err(Error::RelationViolated(k));
        }
    }
    let n = a.len();
    let v = perfect_valuation(&a[0], None)?;
    let bound = chain_bound(p, n as u32 - 1);
    let bound_holds = v.at_least(&bound, p);
    let tight = v.to_rational(p).is_some_and(|r| r == bound);
    let mut recovered = None;
    let mut recovery_verified = false;
    if v.at_least(&BigRational::one(), p) {
        if let Some(q) = divide_by(&a[0], x) {
            recovery_verified = (0..n).all(|k| &q * &x.pth_root(k as u32) == a[k]);
            recovered = Some(q.to_string());
        }
    }
    Ok(Ext1Report {
        p: p.get(),
        length: n,
        v_a1: v.text(p),
        bound: crate::serde_text::rational_text(&bound),
        bound_holds,
        tight,
        recovered,
        recovery_verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perfpoly::vars_from;

    fn el(p: u64, s: &str) -> PerfPoly {
        PerfPoly::parse(s, PrimeChar::new(p).unwrap(), &vars_from(&["x"])).unwrap()
    }

    #[test]
    fn valuation_examples() {
        let p = PrimeChar::new(2).unwrap();
        let v = perfect_valuation(&el(2, "x^(3/4) + x"), None).unwrap();
        assert_eq!(v.text(p), "3/4");
        assert_eq!(perfect_valuation(&el(2, "0"), None).unwrap(), ValuationValue::Infinity);
        let t = PExponent::from_int(1);
        assert_eq!(
            perfect_valuation(&el(2, "x^2"), Some(&t)).unwrap(),
            ValuationValue::AtLeast(t.clone())
        );
        let two = PerfPoly::parse("x*y", p, &vars_from(&["x", "y"])).unwrap();
        assert!(matches!(perfect_valuation(&two, None), Err(Error::MultiVariable)));
    }

    #[test]
    fn chain_examples() {
        let x = el(2, "x");
        let tight = ext1_chain_recovery(&build_chain(&el(2, "1"), &x, 4), &x).unwrap();
        assert_eq!(tight.v_a1, "7/8");
        assert!(tight.bound_holds && tight.tight);
        assert!(tight.recovered.is_none());

        let chain = build_chain(&el(2, "x^(1/8)"), &x, 4);
        assert_eq!(chain[0].to_string(), "x");
        let rep = ext1_chain_recovery(&chain, &x).unwrap();
        assert_eq!(rep.recovered.as_deref(), Some("1"));
        assert!(rep.recovery_verified);

        let mut bad = build_chain(&el(2, "1"), &x, 4);
        bad[2] = el(2, "x");
        assert!(matches!(ext1_chain_recovery(&bad, &x), Err(Error::RelationViolated(2))));
    }
}
