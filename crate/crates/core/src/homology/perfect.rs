use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{complex_check, mat_mul, FreeComplex, Matrix};
use crate::error::{Error, Result};
use crate::exponent::PExponent;
use crate::ideal::{colimit_membership, intersection, ColimitIdeal};
use crate::perfpoly::{PerfMonomial, PerfPoly};
use crate::ring::{LevelRing, RingPresentation};

/// Truncation of the two-step resolution of `R^∞/(x^∞)`:
/// `Y = (x, x^{1/p}, …, x^{1/p^{N−1}})` and the bidiagonal `X` whose column
/// `k` is `e_k − x^{(p−1)/p^{k+1}} e_{k+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionTruncation {
    pub x: PerfPoly,
    pub n: usize,
    /// `N × (N−1)`.
    pub x_mat: Matrix,
    /// `1 × N`.
    pub y_mat: Matrix,
}

/// `x^{(p−1)/p^k}`.
fn shift(x: &PerfPoly, k: u32) -> PerfPoly {
    x.pow_u64(x.char().get() - 1).pth_root(k)
}

pub fn resolution_truncation(x: &PerfPoly, n: usize) -> ResolutionTruncation {
    let zero = x.clone() - x.clone();
    let y_mat = vec![(0..n).map(|k| x.pth_root(k as u32)).collect()];
    let cols = n.saturating_sub(1);
    let mut x_mat: Matrix = vec![vec![zero.clone(); cols]; n];
    for k in 0..cols {
        x_mat[k][k] = PerfPoly::one(x.char(), x.vars());
        x_mat[k + 1][k] = -&shift(x, k as u32 + 1);
    }
    ResolutionTruncation { x: x.clone(), n, x_mat, y_mat }
}

impl ResolutionTruncation {
    /// `Y ∘ X = 0` by exact arithmetic.
    pub fn composite_vanishes(&self) -> bool {
        let zero = PerfPoly::zero(self.x.char(), self.x.vars());
        mat_mul(&self.y_mat, &self.x_mat, self.n.saturating_sub(1), &zero)
            .iter()
            .flatten()
            .all(|f| f.is_zero())
    }

    /// Ring level needed to hold every entry.
    pub fn level(&self) -> u32 {
        self.x.level_of() + self.n.saturating_sub(1) as u32
    }

    /// `F_2 → F_1 → F_0` over the given ring.
    pub fn complex(&self, ring: &LevelRing) -> Result<FreeComplex> {
        let ring = if ring.level() < self.level() {
            ring.at_level(self.level())
        } else {
            ring.clone()
        };
        FreeComplex::new(
            ring,
            vec![1, self.n, self.n.saturating_sub(1)],
            vec![self.y_mat.clone(), self.x_mat.clone()],
        )
    }

    /// `X·b`.
    pub fn apply_x(&self, b: &[PerfPoly]) -> Vec<PerfPoly> {
        let zero = PerfPoly::zero(self.x.char(), self.x.vars());
        self.x_mat
            .iter()
            .map(|row| row.iter().zip(b).fold(zero.clone(), |acc, (m, v)| &acc + &(m * v)))
            .collect()
    }

    /// `Y·a`.
    pub fn apply_y(&self, a: &[PerfPoly]) -> PerfPoly {
        let zero = PerfPoly::zero(self.x.char(), self.x.vars());
        self.y_mat[0]
            .iter()
            .zip(a)
            .fold(zero, |acc, (m, v)| &acc + &(m * v))
    }
}

/// Outcome of back-substitution through `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Preimage(Vec<PerfPoly>),
    /// The recursion leaves the window at this row.
    Failure { index: usize },
    /// `Y·a ≠ 0`.
    NotInKernel,
}

/// Solve `X·b = a` by `b_0 = a_0`, `b_k = a_k + x^{(p−1)/p^k} b_{k−1}`.
pub fn resolution_exactness_witness(a: &[PerfPoly], t: &ResolutionTruncation) -> Result<Witness> {
    if a.len() != t.n {
        return Err(Error::Mismatch(format!("tuple of length {} for N = {}", a.len(), t.n)));
    }
    if !t.apply_y(a).is_zero() {
        return Ok(Witness::NotInKernel);
    }
    if t.n < 2 {
        return Ok(if a.iter().all(|f| f.is_zero()) {
            Witness::Preimage(Vec::new())
        } else {
            Witness::Failure { index: 0 }
        });
    }
    let mut b: Vec<PerfPoly> = Vec::with_capacity(t.n - 1);
    b.push(a[0].clone());
    for k in 1..t.n - 1 {
        let next = &a[k] + &(&shift(&t.x, k as u32) * &b[k - 1]);
        b.push(next);
    }
    if t.apply_x(&b) != a {
        return Ok(Witness::Failure { index: t.n - 1 });
    }
    Ok(Witness::Preimage(b))
}

/// Total complex of `C ⊗ D` with `d(a⊗b) = da⊗b + (−1)^i a⊗db`, basis
/// ordered by descending `i`, then
/// index in `C_i`, then index in `D_j`.
fn tensor_pair(c: &FreeComplex, d: &FreeComplex) -> Result<FreeComplex> {
    if c.ring().base() != d.ring().base() || c.ring().mode() != d.ring().mode() {
        return Err(Error::Mismatch("complexes over different rings".into()));
    }
    let ring = c.ring().at_level(c.ring().level().max(d.ring().level()));
    let zero = ring.base().zero();
    let (lc, ld) = (c.length(), d.length());
    let len = lc + ld;
    // offsets[n][i] = start of C_i ⊗ D_{n−i} inside T_n
    let mut offsets = vec![Vec::new(); len + 1];
    let mut ranks = vec![0; len + 1];
    for (n, offs) in offsets.iter_mut().enumerate() {
        offs.resize(n + 1, 0);
        for i in (0..=n).rev() {
            offs[i] = ranks[n];
            if i <= lc && n - i <= ld {
                ranks[n] += c.ranks()[i] * d.ranks()[n - i];
            }
        }
    }
    let mut diffs = Vec::with_capacity(len);
    for n in 1..=len {
        let mut m: Matrix = vec![vec![zero.clone(); ranks[n]]; ranks[n - 1]];
        for i in 0..=n {
            let j = n - i;
            if i > lc || j > ld {
                continue;
            }
            let (rc, rd) = (c.ranks()[i], d.ranks()[j]);
            for a in 0..rc {
                for b in 0..rd {
                    let col = offsets[n][i] + a * rd + b;
                    if i >= 1 {
                        let dc = c.differential(i);
                        let rd_same = d.ranks()[j];
                        for a2 in 0..c.ranks()[i - 1] {
                            let e = &dc[a2][a];
                            if !e.is_zero() {
                                let row = offsets[n - 1][i - 1] + a2 * rd_same + b;
                                m[row][col] = &m[row][col] + e;
                            }
                        }
                    }
                    if j >= 1 {
                        let dd = d.differential(j);
                        let rd_low = d.ranks()[j - 1];
                        for b2 in 0..rd_low {
                            let e = &dd[b2][b];
                            if !e.is_zero() {
                                let row = offsets[n - 1][i] + a * rd_low + b2;
                                let signed = if i % 2 == 0 { e.clone() } else { -e };
                                m[row][col] = &m[row][col] + &signed;
                            }
                        }
                    }
                }
            }
        }
        diffs.push(m);
    }
    FreeComplex::new(ring, ranks, diffs)
}

/// Iterated total tensor complex; the empty product is `R` in degree 0.
pub fn tensor_total_complex(complexes: &[FreeComplex], ring: &LevelRing) -> Result<FreeComplex> {
    let mut acc = FreeComplex::new(ring.clone(), vec![1], Vec::new())?;
    let mut first = true;
    for c in complexes {
        acc = if first { c.clone() } else { tensor_pair(&acc, c)? };
        first = false;
    }
    Ok(acc)
}

/// A random element at level `level` with `terms` monomials of small degree.
pub(crate) fn random_element(
    rng: &mut ChaCha8Rng,
    base: &RingPresentation,
    level: u32,
    terms: usize,
) -> PerfPoly {
    let p = base.char();
    let n = base.vars().len();
    let scale = crate::exponent::p_pow(p, level);
    let mut out = base.zero();
    for _ in 0..terms {
        let exps = (0..n)
            .filter_map(|i| {
                let num: u64 = rng.gen_range(0..=2 * scale_u64(&scale));
                (num > 0).then(|| (i, PExponent::new(BigUint::from(num), level, p)))
            })
            .collect();
        let c = rng.gen_range(1..p.get());
        out = &out + &PerfPoly::monomial(PerfMonomial::from_exponents(exps, p), c, p, base.vars());
    }
    out
}

fn scale_u64(b: &BigUint) -> u64 {
    b.try_into().unwrap_or(u64::MAX / 4)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VanishSample {
    pub element: String,
    pub level: u32,
    /// Stage at which the element was found in the product.
    pub found_at: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VanishReport {
    pub samples: usize,
    pub found: usize,
    pub found_rate: f64,
    /// Largest `m − n` over found samples.
    pub max_slack: u32,
    /// Levels searched above each sample's level.
    pub slack_window: u32,
    pub entries: Vec<VanishSample>,
}

impl VanishReport {
    pub fn all_found(&self) -> bool {
        self.found == self.samples
    }
}

/// Levels used for intersection samples.
const SAMPLE_LEVELS: u32 = 3;

/// Sample elements of `I_n ∩ J_n` and search for them in the product of the
/// colimit ideals within `slack_window` further levels.
pub fn vanish_check(
    i: &ColimitIdeal,
    j: &ColimitIdeal,
    samples: usize,
    slack_window: u32,
    seed: u64,
) -> Result<VanishReport> {
    if i.ring() != j.ring() {
        return Err(Error::Mismatch("colimit ideals over different rings".into()));
    }
    let base = i.ring();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let root_level = i
        .roots()
        .iter()
        .chain(j.roots())
        .map(|r| r.level_of())
        .max()
        .unwrap_or(0);
    let mut entries = Vec::with_capacity(samples);
    let mut cache: Vec<Option<Vec<PerfPoly>>> = vec![None; SAMPLE_LEVELS as usize];
    for s in 0..samples {
        let n = s as u32 % SAMPLE_LEVELS;
        if cache[n as usize].is_none() {
            let ring = base.level(n + root_level);
            let a = ring.ideal(i.stage_generators(n))?;
            let b = ring.ideal(j.stage_generators(n))?;
            cache[n as usize] = Some(intersection(&a, &b)?.generators().to_vec());
        }
        let gens = cache[n as usize].as_ref().unwrap();
        let mut f = base.zero();
        if !gens.is_empty() {
            while f.is_zero() {
                for g in gens {
                    let coeff = random_element(&mut rng, base, n, 2);
                    f = &f + &(&coeff * g);
                }
                if f.is_zero() {
                    f = gens[rng.gen_range(0..gens.len())].clone();
                }
            }
        }
        let found_at = if f.is_zero() {
            Some(0)
        } else {
            colimit_membership(&f, i, Some(j), Some(n + root_level + slack_window))?.level()
        };
        entries.push(VanishSample {
            element: f.to_string(),
            level: n,
            found_at,
        });
    }
    let found = entries.iter().filter(|e| e.found_at.is_some()).count();
    let max_slack = entries
        .iter()
        .filter_map(|e| e.found_at.map(|m| m.saturating_sub(e.level)))
        .max()
        .unwrap_or(0);
    Ok(VanishReport {
        samples,
        found,
        found_rate: if samples == 0 { 1.0 } else { found as f64 / samples as f64 },
        max_slack,
        slack_window,
        entries,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PdimReport {
    pub relations: Vec<String>,
    pub bound: usize,
    pub length: usize,
    pub ranks: Vec<usize>,
    pub d_squared_zero: bool,
    pub truncation: usize,
    pub witness_samples: usize,
    pub witness_recovered: usize,
    pub tor1_samples: usize,
    pub tor1_found: usize,
    pub passed: bool,
}

/// Build the truncated resolutions of `R/(f_i^∞)`, tensor them, and sample
/// exactness evidence.
pub fn perfection_pdim_bound(
    base: &RingPresentation,
    relations: &[PerfPoly],
    truncation: usize,
    samples: usize,
    seed: u64,
) -> Result<PdimReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let truncs: Vec<ResolutionTruncation> = relations.iter().map(|f| resolution_truncation(f, truncation)).collect();
    let level = truncs.iter().map(|t| t.level()).max().unwrap_or(0);
    let ring = base.level(level);
    let complexes = truncs
        .iter()
        .map(|t| t.complex(&ring))
        .collect::<Result<Vec<_>>>()?;
    let total = tensor_total_complex(&complexes, &ring)?;
    let d_squared_zero = complex_check(&total)?.is_none();

    let mut witness_samples = 0;
    let mut witness_recovered = 0;
    for t in &truncs {
        if t.n < 3 {
            continue;
        }
        for _ in 0..samples {
            let b: Vec<PerfPoly> = (0..t.n - 1)
                .map(|k| {
                    if k < t.n - 2 {
                        random_element(&mut rng, base, 2, 2)
                    } else {
                        base.zero()
                    }
                })
                .collect();
            let a = t.apply_x(&b);
            witness_samples += 1;
            if let Witness::Preimage(b2) = resolution_exactness_witness(&a, t)? {
                if t.apply_x(&b2) == a {
                    witness_recovered += 1;
                }
            }
        }
    }

    let mut tor1_samples = 0;
    let mut tor1_found = 0;
    for a in 0..relations.len() {
        for b in a + 1..relations.len() {
            let ci = ColimitIdeal::new(base.clone(), vec![relations[a].clone()])?;
            let cj = ColimitIdeal::new(base.clone(), vec![relations[b].clone()])?;
            let rep = vanish_check(&ci, &cj, samples, 4, rng.gen())?;
            tor1_samples += rep.samples;
            tor1_found += rep.found;
        }
    }
    let bound = 2 * relations.len();
    let length = total.length();
    Ok(PdimReport {
        relations: relations.iter().map(|f| f.to_string()).collect(),
        bound,
        length,
        ranks: total.ranks().to_vec(),
        d_squared_zero,
        truncation,
        witness_samples,
        witness_recovered,
        tor1_samples,
        tor1_found,
        passed: d_squared_zero
            && length <= bound
            && witness_recovered == witness_samples
            && tor1_found == tor1_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::koszul_complex;

    fn xy(p: u64) -> RingPresentation {
        RingPresentation::polynomial_ring(p, &["x", "y"]).unwrap()
    }

    #[test]
    fn resolution_matrix_entries() {
        let b = xy(2);
        let t = resolution_truncation(&b.var("x").unwrap(), 4);
        let diag: Vec<String> = (0..3).map(|k| t.x_mat[k + 1][k].to_string()).collect();
        assert_eq!(diag, vec!["x^(1/2)", "x^(1/4)", "x^(1/8)"]);
        assert!((0..3).all(|k| t.x_mat[k][k].to_string() == "1"));
        let row: Vec<String> = t.y_mat[0].iter().map(|f| f.to_string()).collect();
        assert_eq!(row, vec!["x", "x^(1/2)", "x^(1/4)", "x^(1/8)"]);
        for p in [2, 3, 5] {
            let t = resolution_truncation(&xy(p).var("x").unwrap(), 64);
            assert!(t.composite_vanishes());
        }
        let c = t.complex(&b.level(0)).unwrap();
        assert_eq!(complex_check(&c).unwrap(), None);
    }

    #[test]
    fn witness_examples() {
        let b = xy(2);
        let t = resolution_truncation(&b.var("x").unwrap(), 4);
        let z = b.zero();
        let e = |s: &str| b.parse_element(s).unwrap();
        let a = vec![e("1"), e("x^(1/2)"), z.clone(), z.clone()];
        assert_eq!(
            resolution_exactness_witness(&a, &t).unwrap(),
            Witness::Preimage(vec![e("1"), z.clone(), z.clone()])
        );
        let a = vec![e("x^(1/2)"), e("x"), z.clone(), z.clone()];
        assert_eq!(
            resolution_exactness_witness(&a, &t).unwrap(),
            Witness::Preimage(vec![e("x^(1/2)"), z.clone(), z.clone()])
        );
        let a = vec![z.clone(), z.clone(), z.clone(), e("1")];
        assert_eq!(resolution_exactness_witness(&a, &t).unwrap(), Witness::NotInKernel);
    }

    #[test]
    fn tensor_examples() {
        let b = xy(2);
        let r = b.level(0);
        let kx = koszul_complex(&b.parse_elements("x").unwrap(), &r).unwrap();
        let ky = koszul_complex(&b.parse_elements("y").unwrap(), &r).unwrap();
        let kxy = koszul_complex(&b.parse_elements("x, y").unwrap(), &r).unwrap();
        assert_eq!(tensor_total_complex(&[kx.clone(), ky], &r).unwrap(), kxy);
        assert_eq!(tensor_total_complex(std::slice::from_ref(&kx), &r).unwrap(), kx);
        assert_eq!(tensor_total_complex(&[], &r).unwrap().ranks(), &[1]);
        let b3 = xy(3);
        let r3 = b3.level(0);
        let k = koszul_complex(&b3.parse_elements("x, y").unwrap(), &r3).unwrap();
        let t = tensor_total_complex(&[k.clone(), k], &r3).unwrap();
        assert_eq!(t.ranks(), &[1, 4, 6, 4, 1]);
        assert_eq!(complex_check(&t).unwrap(), None);
    }

    #[test]
    fn vanish_examples() {
        let b = xy(2);
        let m = ColimitIdeal::parse(&b, "x, y").unwrap();
        let rep = vanish_check(&m, &m, 6, 4, 1).unwrap();
        assert!(rep.all_found());
        let cx = ColimitIdeal::parse(&b, "x").unwrap();
        let cy = ColimitIdeal::parse(&b, "y").unwrap();
        let rep = vanish_check(&cx, &cy, 6, 4, 2).unwrap();
        assert!(rep.all_found());
        assert_eq!(rep.max_slack, 0);
        let b3 = xy(3);
        let s = ColimitIdeal::parse(&b3, "x + y").unwrap();
        let x = ColimitIdeal::parse(&b3, "x").unwrap();
        assert!(vanish_check(&s, &x, 4, 4, 3).unwrap().all_found());
    }

    #[test]
    fn pdim_examples() {
        let b = xy(2);
        let rep = perfection_pdim_bound(&b, &b.parse_elements("x").unwrap(), 5, 5, 7).unwrap();
        assert_eq!(rep.length, 2);
        assert!(rep.passed);
        let rep = perfection_pdim_bound(&b, &[], 5, 5, 7).unwrap();
        assert_eq!(rep.length, 0);
        assert!(rep.passed);
    }
}
