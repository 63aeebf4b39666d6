//! Truncated p-typical Witt vectors over perfect 𝔽_p-algebras and
//! truncated tilts.

mod polys;
mod tilt;

pub use polys::{cache_dir, ghost_int, ghost_poly, witt_polys, witt_polys_in, IntPoly, WittPolynomialCache};
pub use tilt::{fp_tilt_table, FontaineElement, TiltRing, TiltTable};

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::PrimeChar;
use crate::perfpoly::PerfPoly;
use crate::ring::{RelationMode, RingPresentation};

/// A perfect coefficient ring: the perfection of a presentation, with `𝔽_p`
/// as the presentation without variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectRing {
    base: RingPresentation,
}

impl PerfectRing {
    pub fn new(base: RingPresentation, mode: RelationMode) -> Result<Self> {
        if mode == RelationMode::Literal && !base.relations().is_empty() {
            return Err(Error::ImperfectRing(format!(
                "relations {:?} are imposed on the perfection, leaving nilpotents",
                base.relations().iter().map(|r| r.to_string()).collect::<Vec<_>>()
            )));
        }
        Ok(PerfectRing { base })
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        Self::new(RingPresentation::polynomial_ring(p, &[])?, RelationMode::Perfection)
    }

    pub fn base(&self) -> &RingPresentation {
        &self.base
    }

    pub fn char(&self) -> PrimeChar {
        self.base.char()
    }

    pub fn reduce(&self, f: &PerfPoly) -> Result<PerfPoly> {
        if self.base.relations().is_empty() {
            return Ok(f.clone());
        }
        self.base.level(f.level_of()).reduce(f)
    }

    pub fn parse(&self, text: &str) -> Result<PerfPoly> {
        self.reduce(&self.base.parse_element(text)?)
    }

    pub fn zero(&self) -> PerfPoly {
        self.base.zero()
    }

    pub fn one(&self) -> PerfPoly {
        self.base.one()
    }

    /// A random element: uniform in `𝔽_p` without variables, otherwise a
    /// short sum of monomials with exponents in `(1/p²)ℤ`.
    pub fn random(&self, rng: &mut ChaCha8Rng) -> Result<PerfPoly> {
        let p = self.char().get();
        if self.base.vars().is_empty() {
            return Ok(PerfPoly::constant(rng.gen_range(0..p) as i128, self.char(), self.base.vars()));
        }
        let terms = rng.gen_range(0..=2);
        let f = crate::homology::random_element(rng, &self.base, 2, terms);
        self.reduce(&f)
    }
}

/// `(a_0, …, a_{n−1}) ∈ W_n(R)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittVector {
    ring: Arc<PerfectRing>,
    coords: Vec<PerfPoly>,
}

impl WittVector {
    pub fn new(ring: Arc<PerfectRing>, coords: Vec<PerfPoly>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Invalid("Witt vectors need length at least 1".into()));
        }
        let coords = coords
            .iter()
            .map(|c| {
                c.check_compatible(&ring.zero())?;
                ring.reduce(c)
            })
            .collect::<Result<_>>()?;
        Ok(WittVector { ring, coords })
    }

    pub fn parse(ring: Arc<PerfectRing>, text: &str) -> Result<Self> {
        let coords = ring.base().parse_elements(text)?;
        Self::new(ring, coords)
    }

    pub fn zero(ring: Arc<PerfectRing>, n: usize) -> Self {
        let z = ring.zero();
        WittVector { coords: vec![z; n], ring }
    }

    pub fn one(ring: Arc<PerfectRing>, n: usize) -> Self {
        teichmuller(ring.one(), ring, n)
    }

    pub fn random(ring: Arc<PerfectRing>, n: usize, rng: &mut ChaCha8Rng) -> Result<Self> {
        let coords = (0..n).map(|_| ring.random(rng)).collect::<Result<_>>()?;
        Ok(WittVector { ring, coords })
    }

    pub fn coords(&self) -> &[PerfPoly] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn ring(&self) -> &Arc<PerfectRing> {
        &self.ring
    }

    fn check(&self, other: &WittVector) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::Mismatch("Witt vectors over different rings".into()));
        }
        if self.len() != other.len() {
            return Err(Error::Mismatch(format!("lengths {} and {}", self.len(), other.len())));
        }
        Ok(())
    }

    fn apply(&self, other: &WittVector, polys: &[IntPoly]) -> Result<WittVector> {
        self.check(other)?;
        let n = self.len();
        let p = self.ring.char();
        let point: Vec<&PerfPoly> = self.coords.iter().chain(&other.coords).collect();
        let mut powers: HashMap<(usize, u32), PerfPoly> = HashMap::new();
        let mut coords = Vec::with_capacity(n);
        for f in polys.iter().take(n) {
            let mut acc = self.ring.zero();
            for (e, c) in f.terms() {
                let c = c.mod_floor(&BigInt::from(p.get())).to_u64().unwrap_or(0);
                if c == 0 {
                    continue;
                }
                let mut term = PerfPoly::constant(c as i128, p, self.ring.base().vars());
                for (v, &k) in e.iter().enumerate() {
                    if k == 0 {
                        continue;
                    }
                    let pw = powers
                        .entry((v, k))
                        .or_insert_with(|| point[v].pow_u64(k as u64))
                        .clone();
                    term = &term * &pw;
                    if term.is_zero() {
                        break;
                    }
                }
                acc = &acc + &term;
            }
            coords.push(self.ring.reduce(&acc)?);
        }
        Ok(WittVector {
            ring: self.ring.clone(),
            coords,
        })
    }
}

pub fn witt_add(a: &WittVector, b: &WittVector) -> Result<WittVector> {
    let polys = witt_polys(a.ring.char(), a.len());
    a.apply(b, &polys.sum)
}

pub fn witt_mul(a: &WittVector, b: &WittVector) -> Result<WittVector> {
    let polys = witt_polys(a.ring.char(), a.len());
    a.apply(b, &polys.prod)
}

/// `k·a` by repeated addition.
pub fn witt_scalar(a: &WittVector, k: u64) -> Result<WittVector> {
    let mut acc = WittVector::zero(a.ring.clone(), a.len());
    for _ in 0..k {
        acc = witt_add(&acc, a)?;
    }
    Ok(acc)
}

/// `[r] = (r, 0, …, 0)`.
pub fn teichmuller(r: PerfPoly, ring: Arc<PerfectRing>, n: usize) -> WittVector {
    let mut coords = vec![ring.zero(); n];
    if n > 0 {
        coords[0] = r;
    }
    WittVector { ring, coords }
}

/// `V(a) = (0, a_0, …, a_{n−2})`.
pub fn verschiebung(a: &WittVector) -> WittVector {
    let mut coords = vec![a.ring.zero()];
    coords.extend(a.coords.iter().take(a.len() - 1).cloned());
    WittVector {
        ring: a.ring.clone(),
        coords,
    }
}

/// `F(a) = (a_0^p, …, a_{n−1}^p)`.
pub fn witt_frobenius(a: &WittVector) -> Result<WittVector> {
    let coords = a
        .coords
        .iter()
        .map(|c| a.ring.reduce(&c.frobenius(1)))
        .collect::<Result<_>>()?;
    Ok(WittVector {
        ring: a.ring.clone(),
        coords,
    })
}

/// `F^{-1}(a)`, defined since the coefficient ring is perfect.
pub fn witt_frobenius_inverse(a: &WittVector) -> Result<WittVector> {
    let coords = a
        .coords
        .iter()
        .map(|c| a.ring.reduce(&c.pth_root(1)))
        .collect::<Result<_>>()?;
    Ok(WittVector {
        ring: a.ring.clone(),
        coords,
    })
}

/// Integer Witt addition and multiplication, for ghost-map oracles.
pub fn witt_add_int(a: &[BigInt], b: &[BigInt], p: PrimeChar) -> Vec<BigInt> {
    eval_int(&witt_polys(p, a.len()).sum, a, b)
}

pub fn witt_mul_int(a: &[BigInt], b: &[BigInt], p: PrimeChar) -> Vec<BigInt> {
    eval_int(&witt_polys(p, a.len()).prod, a, b)
}

fn eval_int(polys: &[IntPoly], a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let point: Vec<BigInt> = a.iter().chain(b).cloned().collect();
    polys.iter().take(a.len()).map(|f| f.eval_int(&point)).collect()
}

/// Ghost components of a Witt vector with integer coordinates.
pub fn ghost(a: &[BigInt], p: PrimeChar) -> Vec<BigInt> {
    ghost_int(a, p.get())
}

/// `W_n(𝔽_p) → ℤ/p^n`, `a ↦ w_{n−1}(lift a) mod p^n`.
pub fn integer_image(a: &[u64], p: PrimeChar) -> BigUint {
    let lift: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
    let modulus = BigInt::from(p.get()).pow(a.len() as u32);
    let w = ghost(&lift, p).pop().unwrap_or_default();
    w.mod_floor(&modulus).to_biguint().expect("nonnegative")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegerTableCheck {
    pub p: u64,
    pub n: usize,
    pub elements: usize,
    pub bijective: bool,
    pub additive: bool,
    pub multiplicative: bool,
}

impl IntegerTableCheck {
    pub fn passed(&self) -> bool {
        self.bijective && self.additive && self.multiplicative
    }
}

fn all_vectors(p: u64, n: usize) -> Vec<Vec<u64>> {
    let total = p.pow(n as u32);
    (0..total)
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let d = k % p;
                    k /= p;
                    d
                })
                .collect()
        })
        .collect()
}

/// Exhaustive check that `W_n(𝔽_p) ≅ ℤ/p^n` through [`integer_image`].
pub fn integer_table_check(p: u64, n: usize) -> Result<IntegerTableCheck> {
    let ring = Arc::new(PerfectRing::prime_field(p)?);
    let pc = ring.char();
    let modulus = BigUint::from(p).pow(n as u32);
    let vecs = all_vectors(p, n);
    let as_witt = |v: &[u64]| -> WittVector {
        WittVector {
            ring: ring.clone(),
            coords: v
                .iter()
                .map(|&c| PerfPoly::constant(c as i128, pc, ring.base().vars()))
                .collect(),
        }
    };
    let back = |w: &WittVector| -> Vec<u64> { w.coords.iter().map(|c| c.constant_term()).collect() };
    let images: Vec<BigUint> = vecs.iter().map(|v| integer_image(v, pc)).collect();
    let mut seen = images.clone();
    seen.sort();
    seen.dedup();
    let bijective = seen.len() == vecs.len() && images.iter().all(|x| x < &modulus);
    let mut additive = true;
    let mut multiplicative = true;
    for (i, a) in vecs.iter().enumerate() {
        let wa = as_witt(a);
        for (j, b) in vecs.iter().enumerate() {
            let wb = as_witt(b);
            let s = back(&witt_add(&wa, &wb)?);
            let m = back(&witt_mul(&wa, &wb)?);
            additive &= integer_image(&s, pc) == (&images[i] + &images[j]) % &modulus;
            multiplicative &= integer_image(&m, pc) == (&images[i] * &images[j]) % &modulus;
        }
    }
    Ok(IntegerTableCheck {
        p,
        n,
        elements: vecs.len(),
        bijective,
        additive,
        multiplicative,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModPReport {
    pub length: usize,
    pub samples: usize,
    pub additive: bool,
    pub multiplicative: bool,
    /// Every sampled `p·c` has vanishing coordinate 0.
    pub image_in_kernel: bool,
    /// Every sampled `a` with `a_0 = 0` equals `p·c` for the reconstructed `c`.
    pub kernel_in_image: bool,
    /// `p·a = V(F(a))` on all samples.
    pub p_equals_vf: bool,
}

impl ModPReport {
    pub fn passed(&self) -> bool {
        self.additive && self.multiplicative && self.image_in_kernel && self.kernel_in_image && self.p_equals_vf
    }
}

/// Sampled check that `a ↦ a_0` induces `W_n(R)/pW_n(R) ≅ R`.
pub fn witt_mod_p_check(ring: Arc<PerfectRing>, n: usize, samples: usize, seed: u64) -> Result<ModPReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = ring.char().get();
    let mut rep = ModPReport {
        length: n,
        samples,
        additive: true,
        multiplicative: true,
        image_in_kernel: true,
        kernel_in_image: true,
        p_equals_vf: true,
    };
    for _ in 0..samples {
        let a = WittVector::random(ring.clone(), n, &mut rng)?;
        let b = WittVector::random(ring.clone(), n, &mut rng)?;
        let s = witt_add(&a, &b)?;
        let m = witt_mul(&a, &b)?;
        rep.additive &= s.coords[0] == ring.reduce(&(&a.coords[0] + &b.coords[0]))?;
        rep.multiplicative &= m.coords[0] == ring.reduce(&(&a.coords[0] * &b.coords[0]))?;
        let pa = witt_scalar(&a, p)?;
        rep.image_in_kernel &= pa.coords[0].is_zero();
        rep.p_equals_vf &= pa == verschiebung(&witt_frobenius(&a)?);
        // kernel element: shift b, then recover c with p·c = V(F(c))
        let mut k = b.clone();
        k.coords[0] = ring.zero();
        let mut shifted = k.coords[1..].to_vec();
        shifted.push(ring.zero());
        let c = witt_frobenius_inverse(&WittVector {
            ring: ring.clone(),
            coords: shifted,
        })?;
        rep.kernel_in_image &= witt_scalar(&c, p)? == k;
    }
    Ok(rep)
}
