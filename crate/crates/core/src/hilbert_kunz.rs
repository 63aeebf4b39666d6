//! Frobenius bracket powers, colength sequences, and Hilbert–Kunz fitting.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Pow, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponent::p_pow;
use crate::field::PrimeChar;
use crate::homology::tor;
use crate::ideal::{colength, krull_dimension, Colength};
use crate::linalg::solve;
use crate::ring::{IdealHandle, RingPresentation};
use crate::serde_text;

/// `I^{[q]} = (g^q : g ∈ gens(I))`.
pub fn bracket_power(ideal: &IdealHandle, q: u64) -> Result<IdealHandle> {
    let p = ideal.ring().char();
    let k = p.log_p(q).ok_or(Error::NotPPower(q))?;
    ideal
        .ring()
        .ideal(ideal.generators().iter().map(|g| g.frobenius(k)).collect())
}

/// `F^n(ring/I) = ring/I^{[p^n]}`, returned as its annihilator.
pub fn peskine_szpiro(module: &IdealHandle, n: u32) -> Result<IdealHandle> {
    module
        .ring()
        .ideal(module.generators().iter().map(|g| g.frobenius(n)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HKRow {
    pub n: u32,
    #[serde(serialize_with = "serde_text::biguint")]
    pub q: BigUint,
    #[serde(serialize_with = "serde_text::biguint")]
    pub colength: BigUint,
    /// `ℓ_n / q^d`.
    #[serde(serialize_with = "serde_text::rational")]
    pub ratio: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HKRecord {
    #[serde(skip)]
    pub ring: RingPresentation,
    pub generators: Vec<String>,
    pub d: usize,
    pub rows: Vec<HKRow>,
}

/// Rows `n = 0 … n_max` of `ℓ(ring/I^{[p^n]})`; `d` defaults to the Krull
/// dimension of the ring.
pub fn hk_sequence(ideal: &IdealHandle, n_max: u32, d_override: Option<usize>) -> Result<HKRecord> {
    let ring = ideal.ring();
    let p = ring.char();
    let d = match d_override {
        Some(d) => d,
        None => krull_dimension(&ring.ideal(Vec::new())?)?
            .ok_or_else(|| Error::Invalid("the zero ring has no dimension".into()))?,
    };
    let mut rows = Vec::new();
    for n in 0..=n_max {
        let q = p_pow(p, n);
        let len = match colength(&peskine_szpiro(ideal, n)?)? {
            Colength::Finite(l) => BigUint::from(l),
            Colength::Infinite => return Err(Error::InfiniteColength),
        };
        let ratio = BigRational::new(len.clone().into(), Pow::pow(&q, d as u32).into());
        rows.push(HKRow {
            n,
            q,
            colength: len,
            ratio,
        });
    }
    Ok(HKRecord {
        ring: ring.base().clone(),
        generators: ideal.generators().iter().map(|g| g.to_string()).collect(),
        d,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum EHKEstimate {
    Exact {
        #[serde(serialize_with = "serde_text::rational")]
        e_hk: BigRational,
        /// `c_0 … c_d` with `ℓ_n = Σ c_i q^i` on the fit window.
        #[serde(serialize_with = "serde_text::rationals")]
        coefficients: Vec<BigRational>,
        fit_rows: Vec<u32>,
        verified_rows: Vec<u32>,
        /// `ℓ_n − prediction` on rows before the window.
        #[serde(serialize_with = "serde_text::rationals")]
        early_residuals: Vec<BigRational>,
    },
    Inconclusive {
        reason: String,
        #[serde(serialize_with = "serde_text::rationals")]
        residuals: Vec<BigRational>,
    },
}

impl EHKEstimate {
    pub fn e_hk(&self) -> Option<&BigRational> {
        match self {
            EHKEstimate::Exact { e_hk, .. } => Some(e_hk),
            EHKEstimate::Inconclusive { .. } => None,
        }
    }
}

fn q_int(q: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(q.clone()))
}

fn poly_in_q(coeffs: &[BigRational], q: &BigUint) -> BigRational {
    let qr = q_int(q);
    coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * &qr + c)
}

/// Fit `ℓ_n = Σ_{i≤d} c_i q^i` exactly on the last `d+1` rows of a window of
/// `max(⌈rows/2⌉, d+2)` rows and verify on the rest of the window.
pub fn e_hk_estimate(rec: &HKRecord) -> Result<EHKEstimate> {
    let rows = &rec.rows;
    if rows.len() < 3 {
        return Err(Error::InsufficientRows {
            need: 3,
            got: rows.len(),
        });
    }
    let d = rec.d;
    let window = rows.len().div_ceil(2).max(d + 2);
    if window > rows.len() {
        return Ok(EHKEstimate::Inconclusive {
            reason: format!("dimension {d} needs {} rows, have {}", d + 2, rows.len()),
            residuals: Vec::new(),
        });
    }
    let solve_rows = &rows[rows.len() - (d + 1)..];
    let m = solve_rows
        .iter()
        .map(|r| (0..=d).map(|i| q_int(&Pow::pow(&r.q, i as u32))).collect())
        .collect();
    let rhs = solve_rows
        .iter()
        .map(|r| BigRational::from_integer(BigInt::from(r.colength.clone())))
        .collect();
    let coeffs = solve(m, rhs)?;
    let residual = |r: &HKRow| BigRational::from_integer(BigInt::from(r.colength.clone())) - poly_in_q(&coeffs, &r.q);
    let start = rows.len() - window;
    let verify = &rows[start..rows.len() - (d + 1)];
    let residuals: Vec<BigRational> = verify.iter().map(residual).collect();
    if residuals.iter().any(|r| !r.is_zero()) {
        return Ok(EHKEstimate::Inconclusive {
            reason: "nonzero residual on verification rows".into(),
            residuals,
        });
    }
    Ok(EHKEstimate::Exact {
        e_hk: coeffs[d].clone(),
        fit_rows: solve_rows.iter().map(|r| r.n).collect(),
        verified_rows: verify.iter().map(|r| r.n).collect(),
        early_residuals: rows[..start].iter().map(residual).collect(),
        coefficients: coeffs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeibertFit {
    /// `b_0 … b_D` with value `Σ b_i p^{in}`.
    #[serde(serialize_with = "serde_text::rationals")]
    pub coefficients: Vec<BigRational>,
    pub fit_points: Vec<u32>,
    pub held_out: Vec<u32>,
    #[serde(serialize_with = "serde_text::rationals")]
    pub residuals: Vec<BigRational>,
    /// Prediction for the row after the last data point.
    #[serde(serialize_with = "serde_text::rational")]
    pub next_prediction: BigRational,
}

impl SeibertFit {
    pub fn exact(&self) -> bool {
        self.residuals.iter().all(|r| r.is_zero())
    }
}

fn seibert_eval(coeffs: &[BigRational], p: PrimeChar, n: u32) -> BigRational {
    let pn = q_int(&p_pow(p, n));
    coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * &pn + c)
}

/// Solve for `b_i` with `value_n = Σ_{i≤D} b_i p^{in}` on the first `D+1`
/// points and check the rest.
pub fn seibert_fit(points: &[(u32, BigInt)], p: PrimeChar, dim: usize) -> Result<SeibertFit> {
    if points.len() < dim + 2 {
        return Err(Error::InsufficientRows {
            need: dim + 2,
            got: points.len(),
        });
    }
    let (fit, rest) = points.split_at(dim + 1);
    let m = fit
        .iter()
        .map(|(n, _)| {
            let pn = p_pow(p, *n);
            (0..=dim).map(|i| q_int(&Pow::pow(&pn, i as u32))).collect()
        })
        .collect();
    let rhs = fit.iter().map(|(_, v)| BigRational::from_integer(v.clone())).collect();
    let coefficients = solve(m, rhs)?;
    let residuals = rest
        .iter()
        .map(|(n, v)| BigRational::from_integer(v.clone()) - seibert_eval(&coefficients, p, *n))
        .collect();
    let last = points.iter().map(|(n, _)| *n).max().unwrap_or(0);
    Ok(SeibertFit {
        next_prediction: seibert_eval(&coefficients, p, last + 1),
        fit_points: fit.iter().map(|(n, _)| *n).collect(),
        held_out: rest.iter().map(|(n, _)| *n).collect(),
        residuals,
        coefficients,
    })
}

/// `χ_n = Σ_i (−1)^i ℓ(Tor_i(F^n(ring/I), ring/J))` for `i ≤ max_index`.
pub fn euler_characteristic(m: &IdealHandle, n_mod: &IdealHandle, n: u32, max_index: usize) -> Result<BigInt> {
    let fm = peskine_szpiro(m, n)?;
    let mut chi = BigInt::zero();
    for i in 0..=max_index {
        let t = tor(&fm, n_mod, i)?;
        let dim = t.dim.ok_or(Error::InfiniteColength)?;
        if i % 2 == 0 {
            chi += BigInt::from(dim);
        } else {
            chi -= BigInt::from(dim);
        }
    }
    Ok(chi)
}
