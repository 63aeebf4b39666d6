//! Ideal arithmetic over level rings: membership with certificates,
//! intersection, product, colon, syzygies, colength, dimension, subalgebra
//! membership, radical tests, regular sequences, and colimit ideals of the
//! perfection.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gb::{self, divide, normal_form, staircase, Mat, Poly, TermOrder};
use crate::perfpoly::{PerfPoly, Vars};
use crate::ring::{IdealHandle, LevelRing, RingPresentation};

/// A reduced Gröbner basis of `I + relations` in root variables.
#[derive(Debug, Clone)]
pub struct GBResult {
    pub order: TermOrder,
    pub basis: Vec<Poly>,
    pub ring: LevelRing,
}

impl GBResult {
    pub fn ctx(&self) -> gb::Ctx {
        self.ring.ctx(self.order, 0)
    }

    /// Basis elements as perfect polynomials of the level ring.
    pub fn basis_elements(&self) -> Vec<PerfPoly> {
        self.basis.iter().map(|g| self.ring.from_internal(g)).collect()
    }

    pub fn normal_form(&self, f: &PerfPoly) -> Result<PerfPoly> {
        let ctx = self.ctx();
        let g = self.ring.to_internal(f, &ctx)?;
        Ok(self.ring.from_internal(&normal_form(&g, &self.basis, &ctx)))
    }

    pub fn contains(&self, f: &PerfPoly) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        self.basis
            .iter()
            .any(|g| g.lead().is_some_and(|m| m.degree() == 0))
    }

    pub fn leading_exponents(&self) -> Vec<Vec<u32>> {
        self.basis
            .iter()
            .filter_map(|g| g.lead())
            .map(|m| m.exps.to_vec())
            .collect()
    }
}

pub fn groebner(ideal: &IdealHandle, order: TermOrder) -> Result<GBResult> {
    let ring = ideal.ring();
    let ctx = ring.ctx(order, 0);
    let mut gens = ring.internal_relations(&ctx, 0)?;
    gens.extend(ideal.internal_generators(&ctx, 0)?);
    let basis = gb::groebner(&gens, &ctx, ring.budget())?;
    Ok(GBResult {
        order,
        basis,
        ring: ring.clone(),
    })
}

/// Outcome of an ideal-membership test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// `f = Σ c_i g_i` in the level ring when `member` holds.
    pub certificate: Option<Vec<PerfPoly>>,
}

/// Check `f = Σ c_i g_i` modulo the relations by direct arithmetic.
pub fn verify_certificate(
    f: &PerfPoly,
    gens: &[PerfPoly],
    coeffs: &[PerfPoly],
    ring: &LevelRing,
) -> Result<bool> {
    if gens.len() != coeffs.len() {
        return Ok(false);
    }
    let mut acc = f.clone();
    for (g, c) in gens.iter().zip(coeffs) {
        acc = &acc - &(g * c);
    }
    ring.is_zero(&acc)
}

pub fn membership(f: &PerfPoly, ideal: &IdealHandle) -> Result<Membership> {
    let ring = ideal.ring();
    let have = f.level_of();
    if have > ring.level() {
        return Err(Error::LevelTooLow {
            have,
            ring: ring.level(),
        });
    }
    if !groebner(ideal, TermOrder::Grevlex)?.contains(f)? {
        return Ok(Membership {
            member: false,
            certificate: None,
        });
    }
    let m = ideal.generators().len();
    let q = ring.quotient()?;
    let ctx = q.ctx.clone();
    let one = gb::Poly::constant(1, &ctx);
    let gens: Vec<Poly> = ideal
        .internal_generators(&ctx, 0)?
        .into_iter()
        .enumerate()
        .map(|(i, g)| g.add(&one.with_comp(1 + i as u32), &ctx))
        .collect();
    let mgb = q.module_gb(&gens, 1 + m)?;
    let target = ring.to_internal(f, &ctx)?;
    let rem = normal_form(&target, &mgb, &ctx);
    if rem.terms.iter().any(|(mono, _)| mono.comp == 0) {
        return Err(Error::Invalid("certificate extraction failed".into()));
    }
    let coeffs: Vec<PerfPoly> = (0..m)
        .map(|i| {
            let c = q.reduce(&rem.component(1 + i as u32, &ctx).scale(ctx.p.get() - 1, &ctx));
            ring.from_internal(&c)
        })
        .collect();
    if !verify_certificate(f, ideal.generators(), &coeffs, ring)? {
        return Err(Error::Invalid("membership certificate failed verification".into()));
    }
    Ok(Membership {
        member: true,
        certificate: Some(coeffs),
    })
}

/// Drop generators that vanish in the ring and duplicates.
fn tidy(ring: &LevelRing, gens: Vec<PerfPoly>) -> Result<Vec<PerfPoly>> {
    let mut out: Vec<PerfPoly> = Vec::new();
    for g in gens {
        let r = ring.reduce(&g)?;
        if !r.is_zero() && !out.contains(&r) {
            out.push(r);
        }
    }
    Ok(out)
}

fn check_same_ring(a: &IdealHandle, b: &IdealHandle) -> Result<()> {
    if a.ring() != b.ring() {
        return Err(Error::Mismatch("ideals live in different rings".into()));
    }
    Ok(())
}

/// `(gens_a) ∩ (gens_b)` in the free polynomial ring via a tag variable.
fn free_intersection(a: &[Poly], b: &[Poly], nvars: usize, ring: &LevelRing) -> Result<Vec<Poly>> {
    let ctx = ring.ctx(TermOrder::Elim(1), 0);
    let ctx = gb::Ctx {
        nvars: nvars + 1,
        ..ctx
    };
    let lift = |f: &Poly| -> Poly {
        Poly::from_terms(
            f.terms
                .iter()
                .map(|(m, c)| {
                    let mut exps = Vec::with_capacity(nvars + 1);
                    exps.push(0);
                    exps.extend_from_slice(&m.exps);
                    (
                        gb::Mono {
                            comp: 0,
                            exps: exps.into_boxed_slice(),
                        },
                        *c,
                    )
                })
                .collect(),
            &ctx,
        )
    };
    let t = Poly::var(0, &ctx);
    let one_minus_t = Poly::constant(1, &ctx).sub(&t, &ctx);
    let mut gens = Vec::new();
    for f in a {
        gens.push(lift(f).mul(&t, &ctx));
    }
    for g in b {
        gens.push(lift(g).mul(&one_minus_t, &ctx));
    }
    let basis = gb::groebner(&gens, &ctx, ring.budget())?;
    let base_ctx = ring.ctx(TermOrder::Grevlex, 0);
    Ok(basis
        .into_iter()
        .filter(|g| g.terms.iter().all(|(m, _)| m.exps[0] == 0))
        .map(|g| {
            Poly::from_terms(
                g.terms
                    .iter()
                    .map(|(m, c)| {
                        (
                            gb::Mono {
                                comp: 0,
                                exps: m.exps[1..].to_vec().into_boxed_slice(),
                            },
                            *c,
                        )
                    })
                    .collect(),
                &base_ctx,
            )
        })
        .collect())
}

pub fn intersection(i: &IdealHandle, j: &IdealHandle) -> Result<IdealHandle> {
    check_same_ring(i, j)?;
    let ring = i.ring();
    let ctx = ring.ctx(TermOrder::Grevlex, 0);
    let rels = ring.internal_relations(&ctx, 0)?;
    let mut a = i.internal_generators(&ctx, 0)?;
    a.extend(rels.iter().cloned());
    let mut b = j.internal_generators(&ctx, 0)?;
    b.extend(rels);
    let gens = free_intersection(&a, &b, ring.nvars(), ring)?;
    let gens = tidy(ring, gens.iter().map(|g| ring.from_internal(g)).collect())?;
    ring.ideal(gens)
}

pub fn product(i: &IdealHandle, j: &IdealHandle) -> Result<IdealHandle> {
    check_same_ring(i, j)?;
    let mut gens = Vec::new();
    for a in i.generators() {
        for b in j.generators() {
            gens.push(a * b);
        }
    }
    let ring = i.ring();
    ring.ideal(tidy(ring, gens)?)
}

pub fn sum(i: &IdealHandle, j: &IdealHandle) -> Result<IdealHandle> {
    check_same_ring(i, j)?;
    let mut gens = i.generators().to_vec();
    gens.extend(j.generators().iter().cloned());
    i.ring().ideal(gens)
}

/// `I : f = {g : g f ∈ I}`.
pub fn colon(ideal: &IdealHandle, f: &PerfPoly) -> Result<IdealHandle> {
    let ring = ideal.ring();
    let ctx = ring.ctx(TermOrder::Grevlex, 0);
    let fi = ring.to_internal(f, &ctx)?;
    let q = ring.quotient()?;
    if q.is_zero(&fi) {
        return ring.ideal(vec![ring.base().one()]);
    }
    let mut a = ideal.internal_generators(&ctx, 0)?;
    a.extend(ring.internal_relations(&ctx, 0)?);
    let meet = free_intersection(&a, std::slice::from_ref(&fi), ring.nvars(), ring)?;
    let mut gens = Vec::new();
    for h in meet {
        let (quot, rem) = divide(&h, std::slice::from_ref(&fi), &ctx);
        debug_assert!(rem.is_zero(), "intersection element not divisible");
        gens.push(ring.from_internal(&quot[0]));
    }
    let gens = tidy(ring, gens)?;
    ring.ideal(gens)
}

/// Whether every generator of `a` lies in `b`.
pub fn is_subset(a: &IdealHandle, b: &IdealHandle) -> Result<bool> {
    let gb = groebner(b, TermOrder::Grevlex)?;
    for g in a.generators() {
        if !gb.contains(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Generators of the syzygy module of `gens`, as coefficient vectors.
pub fn syzygies(gens: &[PerfPoly], ring: &LevelRing) -> Result<Vec<Vec<PerfPoly>>> {
    let mut m = vec![gens.to_vec()];
    if gens.is_empty() {
        m = vec![Vec::new()];
    }
    kernel(&m, 1, gens.len(), ring)
}

/// Kernel of a `rows × cols` matrix (row-major) over the level ring.
pub fn kernel(
    matrix: &[Vec<PerfPoly>],
    rows: usize,
    cols: usize,
    ring: &LevelRing,
) -> Result<Vec<Vec<PerfPoly>>> {
    let q = ring.quotient()?;
    let ctx = q.ctx.clone();
    let mut a = Mat::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            a.set(i, j, ring.to_internal(&matrix[i][j], &ctx)?);
        }
    }
    let ker = q.kernel(&a)?;
    let ker = q.prune(ker, cols)?;
    Ok(ker
        .iter()
        .map(|v| {
            (0..cols)
                .map(|j| ring.from_internal(&v.component(j as u32, &ctx)))
                .collect()
        })
        .collect())
}

/// Vector-space dimension of a quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Colength {
    Finite(u128),
    Infinite,
}

impl Colength {
    pub fn finite(self) -> Option<u128> {
        match self {
            Colength::Finite(n) => Some(n),
            Colength::Infinite => None,
        }
    }
}

pub fn colength(ideal: &IdealHandle) -> Result<Colength> {
    let gb = groebner(ideal, TermOrder::Grevlex)?;
    Ok(
        match staircase::count_standard(&gb.leading_exponents(), ideal.ring().nvars()) {
            Some(n) => Colength::Finite(n),
            None => Colength::Infinite,
        },
    )
}

/// Krull dimension of `ring/I`; `None` when `I` is the unit ideal.
pub fn krull_dimension(ideal: &IdealHandle) -> Result<Option<usize>> {
    let gb = groebner(ideal, TermOrder::Grevlex)?;
    Ok(staircase::monomial_dimension(
        &gb.leading_exponents(),
        ideal.ring().nvars(),
    ))
}

/// Result of a subalgebra membership test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubalgebraMembership {
    pub member: bool,
    /// Normal form in the ring variables and tags `T_i ↦ gens[i]`.
    pub normal_form: PerfPoly,
}

/// Whether `f` lies in the 𝔽_p-subalgebra generated by `gens`.
pub fn subalgebra_membership(
    f: &PerfPoly,
    gens: &[PerfPoly],
    ambient: &LevelRing,
) -> Result<SubalgebraMembership> {
    let n = ambient.nvars();
    let k = gens.len();
    let ctx = ambient.ctx(TermOrder::Elim(n), k);
    let mut all = ambient.internal_relations(&ctx, 0)?;
    for (i, g) in gens.iter().enumerate() {
        let gi = ambient.to_internal_at(g, &ctx, 0)?;
        all.push(Poly::var(n + i, &ctx).sub(&gi, &ctx));
    }
    let basis = gb::groebner(&all, &ctx, ambient.budget())?;
    let nf = normal_form(&ambient.to_internal_at(f, &ctx, 0)?, &basis, &ctx);
    let member = nf
        .terms
        .iter()
        .all(|(m, _)| m.exps[..n].iter().all(|&e| e == 0));
    let mut names: Vec<String> = ambient.vars().to_vec();
    names.extend((0..k).map(|i| format!("T{}", i + 1)));
    let vars: Vars = names.into();
    let p = ambient.char();
    let terms = nf
        .terms
        .iter()
        .map(|(m, c)| {
            let exps = m
                .exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (i, crate::exponent::PExponent::from_int(e as u64)))
                .collect();
            (crate::perfpoly::PerfMonomial::from_exponents(exps, p), *c)
        })
        .collect();
    Ok(SubalgebraMembership {
        member,
        normal_form: PerfPoly::from_terms(terms, p, &vars),
    })
}

/// Radical-membership outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RadicalMembership {
    /// Exact answer from the extra-variable test.
    pub member: bool,
    /// Least `m ≤ max_power` with `f^{p^m} ∈ I`, if found.
    pub frobenius_power: Option<u32>,
}

pub fn radical_membership(f: &PerfPoly, ideal: &IdealHandle, max_power: u32) -> Result<RadicalMembership> {
    let ring = ideal.ring();
    let n = ring.nvars();
    // 1 ∈ I + (1 - t f) in one extra variable
    let ctx = ring.ctx(TermOrder::Grevlex, 1);
    let mut gens = ring.internal_relations(&ctx, 0)?;
    gens.extend(ideal.internal_generators(&ctx, 0)?);
    let fi = ring.to_internal_at(f, &ctx, 0)?;
    gens.push(Poly::constant(1, &ctx).sub(&Poly::var(n, &ctx).mul(&fi, &ctx), &ctx));
    let basis = gb::groebner(&gens, &ctx, ring.budget())?;
    let member = basis.iter().any(|g| g.lead().is_some_and(|m| m.degree() == 0));
    let gb = groebner(ideal, TermOrder::Grevlex)?;
    let mut frobenius_power = None;
    for m in 0..=max_power {
        if gb.contains(&f.frobenius(m))? {
            frobenius_power = Some(m);
            break;
        }
    }
    Ok(RadicalMembership {
        member,
        frobenius_power,
    })
}

/// Regular-sequence outcome; `failing_index` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularSequence {
    pub regular: bool,
    pub failing_index: Option<usize>,
}

pub fn is_regular_sequence(seq: &[PerfPoly], ring: &LevelRing) -> Result<RegularSequence> {
    for i in 0..seq.len() {
        let prefix = ring.ideal(seq[..i].to_vec())?;
        let col = colon(&prefix, &seq[i])?;
        if !is_subset(&col, &prefix)? {
            return Ok(RegularSequence {
                regular: false,
                failing_index: Some(i + 1),
            });
        }
    }
    let all = ring.ideal(seq.to_vec())?;
    if groebner(&all, TermOrder::Grevlex)?.is_unit() {
        return Ok(RegularSequence {
            regular: false,
            failing_index: Some(seq.len()),
        });
    }
    Ok(RegularSequence {
        regular: true,
        failing_index: None,
    })
}

/// The ideal `Σ (α_i^∞) = (α_i^{1/p^n} : n ≥ 0)` of the perfection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColimitIdeal {
    ring: RingPresentation,
    roots: Vec<PerfPoly>,
}

impl ColimitIdeal {
    pub fn new(ring: RingPresentation, roots: Vec<PerfPoly>) -> Result<Self> {
        for r in &roots {
            if r.char() != ring.char() {
                return Err(Error::CharMismatch(r.char().get(), ring.char().get()));
            }
            if r.vars() != ring.vars() {
                return Err(Error::VariableMismatch);
            }
        }
        Ok(ColimitIdeal { ring, roots })
    }

    pub fn parse(ring: &RingPresentation, text: &str) -> Result<Self> {
        Self::new(ring.clone(), ring.parse_elements(text)?)
    }

    pub fn ring(&self) -> &RingPresentation {
        &self.ring
    }

    pub fn roots(&self) -> &[PerfPoly] {
        &self.roots
    }

    fn root_level(&self) -> u32 {
        self.roots.iter().map(|r| r.level_of()).max().unwrap_or(0)
    }

    /// Generators `α_i^{1/p^m}` of the stage-`m` ideal.
    pub fn stage_generators(&self, m: u32) -> Vec<PerfPoly> {
        self.roots.iter().map(|a| a.pth_root(m)).collect()
    }

    /// The stage-`m` ideal inside the level ring where it lives.
    pub fn stage(&self, m: u32) -> Result<IdealHandle> {
        let level = m + self.root_level();
        self.ring.level(level).ideal(self.stage_generators(m))
    }
}

/// Result of a colimit membership search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColimitSearch {
    Found {
        /// Root stage `m`: the ideal generated by `α^{1/p^m}` (or products).
        level: u32,
        generators: Vec<PerfPoly>,
        certificate: Vec<PerfPoly>,
    },
    Inconclusive {
        max_level: u32,
    },
}

impl ColimitSearch {
    pub fn is_found(&self) -> bool {
        matches!(self, ColimitSearch::Found { .. })
    }

    pub fn level(&self) -> Option<u32> {
        match self {
            ColimitSearch::Found { level, .. } => Some(*level),
            _ => None,
        }
    }
}

/// Default search ceiling above `level_of(f)`.
pub const COLIMIT_SLACK: u32 = 6;

/// Search levels `level_of(f) ..= max_level` for membership of `f` in `C` or,
/// when `other` is given, in the product `C · other`.
pub fn colimit_membership(
    f: &PerfPoly,
    c: &ColimitIdeal,
    other: Option<&ColimitIdeal>,
    max_level: Option<u32>,
) -> Result<ColimitSearch> {
    if let Some(o) = other {
        if o.ring != c.ring {
            return Err(Error::Mismatch("colimit ideals over different rings".into()));
        }
    }
    let start = f.level_of();
    let max_level = max_level.unwrap_or(start + COLIMIT_SLACK);
    for m in start..=max_level {
        let mut gens = c.stage_generators(m);
        if let Some(o) = other {
            let right = o.stage_generators(m);
            gens = gens
                .iter()
                .flat_map(|a| right.iter().map(move |b| a * b))
                .collect();
        }
        let level = gens
            .iter()
            .map(|g| g.level_of())
            .max()
            .unwrap_or(0)
            .max(start);
        let ring = c.ring.level(level);
        let ideal = ring.ideal(gens.clone())?;
        let mem = membership(f, &ideal)?;
        if mem.member {
            let certificate = mem.certificate.expect("member has certificate");
            return Ok(ColimitSearch::Found {
                level: m,
                generators: gens,
                certificate,
            });
        }
    }
    Ok(ColimitSearch::Inconclusive { max_level })
}
