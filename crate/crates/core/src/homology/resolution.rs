use serde::Serialize;

use super::{subquotient, transpose, vector_from_internal, FreeComplex, Matrix};
use crate::error::Result;
use crate::gb::Subquotient;
use crate::perfpoly::PerfPoly;
use crate::ring::{IdealHandle, LevelRing};

/// Resolution of the cyclic module `ring/I` by iterated syzygies, stopping
/// at length `cap` or when a kernel vanishes.
pub fn free_resolution(module: &IdealHandle, cap: usize) -> Result<FreeComplex> {
    let ring = module.ring();
    let q = ring.quotient()?;
    let ctx = q.ctx.clone();
    let mut gens = Vec::new();
    for g in module.internal_generators(&ctx, 0)? {
        let r = q.reduce(&g);
        if !r.is_zero() && !gens.contains(&r) {
            gens.push(r);
        }
    }
    let gens = q.prune(gens, 1)?;
    let mut ranks = vec![1];
    let mut diffs: Vec<Matrix> = Vec::new();
    if gens.is_empty() || cap == 0 {
        return FreeComplex::new(ring.clone(), ranks, diffs);
    }
    ranks.push(gens.len());
    diffs.push(vec![gens.iter().map(|g| ring.from_internal(g)).collect()]);
    let mut current = crate::gb::Mat::from_columns(&gens, 1, &ctx);
    while diffs.len() < cap {
        let ker = q.kernel(&current)?;
        let cols = current.cols;
        let ker = q.prune(ker, cols)?;
        if ker.is_empty() {
            break;
        }
        let vecs: Vec<Vec<PerfPoly>> = ker
            .iter()
            .map(|v| vector_from_internal(v, cols, ring, &ctx))
            .collect();
        ranks.push(ker.len());
        diffs.push(transpose(&vecs, ker.len(), cols));
        current = crate::gb::Mat::from_columns(&ker, cols, &ctx);
    }
    FreeComplex::new(ring.clone(), ranks, diffs)
}

/// A (co)homology module presented as generators modulo relations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorResult {
    pub index: usize,
    pub level: u32,
    /// `𝔽_p`-dimension when finite.
    pub dim: Option<u128>,
    /// Cycle generators in `F_i ⊗ N`.
    pub generators: Vec<Vec<String>>,
    /// Relations among the generators.
    pub relations: Vec<Vec<String>>,
}

impl TorResult {
    pub fn is_zero(&self) -> bool {
        self.dim == Some(0)
    }
}

pub type ExtResult = TorResult;

fn describe(sq: &Subquotient, index: usize, rank: usize, ring: &LevelRing) -> Result<TorResult> {
    let ctx = ring.ctx(crate::gb::TermOrder::Grevlex, 0);
    let show = |v: &crate::gb::Poly, n: usize| -> Vec<String> {
        vector_from_internal(v, n, ring, &ctx)
            .iter()
            .map(|f| f.to_string())
            .collect()
    };
    Ok(TorResult {
        index,
        level: ring.level(),
        dim: sq.dim,
        generators: sq.cycles.iter().map(|v| show(v, rank)).collect(),
        relations: sq.relations.iter().map(|v| show(v, sq.cycles.len())).collect(),
    })
}

fn zero_result(index: usize, ring: &LevelRing) -> TorResult {
    TorResult {
        index,
        level: ring.level(),
        dim: Some(0),
        generators: Vec::new(),
        relations: Vec::new(),
    }
}

fn check_pair(m: &IdealHandle, n: &IdealHandle) -> Result<()> {
    if m.ring() != n.ring() {
        return Err(crate::error::Error::Mismatch("modules over different level rings".into()));
    }
    Ok(())
}

/// `Tor_i(ring/I, ring/J)` as the homology of `F ⊗ ring/J`.
pub fn tor(m: &IdealHandle, n: &IdealHandle, i: usize) -> Result<TorResult> {
    check_pair(m, n)?;
    let ring = m.ring();
    let f = free_resolution(m, i + 1)?;
    if i > f.length() {
        return Ok(zero_result(i, ring));
    }
    let q = ring.quotient_over(n.generators())?;
    let ranks = f.ranks();
    let c = ranks[i];
    let (a, a_rows) = if i == 0 {
        (Vec::new(), 0)
    } else {
        (f.differential(i).clone(), ranks[i - 1])
    };
    let (b, b_cols) = if i < f.length() {
        (f.differential(i + 1).clone(), ranks[i + 1])
    } else {
        (vec![Vec::new(); c], 0)
    };
    let sq = subquotient(&q, &a, a_rows, &b, b_cols, c, ring)?;
    describe(&sq, i, c, ring)
}

/// `Ext^i(ring/I, ring/J)` as the cohomology of `Hom(F, ring/J)`.
pub fn ext(m: &IdealHandle, n: &IdealHandle, i: usize) -> Result<ExtResult> {
    check_pair(m, n)?;
    let ring = m.ring();
    let f = free_resolution(m, i + 1)?;
    if i > f.length() {
        return Ok(zero_result(i, ring));
    }
    let q = ring.quotient_over(n.generators())?;
    cohomology(&f, &q, i)
}

/// `H^i(Hom(F, S/K))` for a complex `F` over the ring of `q`.
pub(crate) fn cohomology(f: &FreeComplex, q: &crate::gb::Quotient, i: usize) -> Result<ExtResult> {
    let ring = f.ring();
    let ranks = f.ranks();
    let c = ranks[i];
    let (a, a_rows) = if i < f.length() {
        (transpose(f.differential(i + 1), ranks[i], ranks[i + 1]), ranks[i + 1])
    } else {
        (Vec::new(), 0)
    };
    let (b, b_cols) = if i == 0 {
        (vec![Vec::new(); c], 0)
    } else {
        (transpose(f.differential(i), ranks[i - 1], ranks[i]), ranks[i - 1])
    };
    let sq = subquotient(q, &a, a_rows, &b, b_cols, c, ring)?;
    describe(&sq, i, c, ring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingPresentation;

    #[test]
    fn resolution_examples() {
        let r = RingPresentation::polynomial_ring(2, &["x", "y"]).unwrap().level(0);
        let f = free_resolution(&r.parse_ideal("x, y").unwrap(), 5).unwrap();
        assert_eq!(f.ranks(), &[1, 2, 1]);
        assert_eq!(super::super::complex_check(&f).unwrap(), None);

        let a = RingPresentation::parse(2, &["u", "v"], &["u*v"]).unwrap().level(0);
        let f = free_resolution(&a.parse_ideal("u").unwrap(), 5).unwrap();
        assert_eq!(f.ranks(), &[1, 1, 1, 1, 1, 1]);
        let entries: Vec<String> = f.differentials().iter().map(|d| d[0][0].to_string()).collect();
        assert_eq!(entries, vec!["u", "v", "u", "v", "u"]);

        let r1 = RingPresentation::polynomial_ring(2, &["x"]).unwrap().level(0);
        let f = free_resolution(&r1.parse_ideal("x^2").unwrap(), 5).unwrap();
        assert_eq!(f.length(), 1);
    }

    #[test]
    fn tor_examples() {
        let a = RingPresentation::parse(2, &["u", "v"], &["u*v"]).unwrap().level(0);
        let t = tor(&a.parse_ideal("u^2").unwrap(), &a.parse_ideal("v^2").unwrap(), 2).unwrap();
        assert_eq!(t.dim, Some(1));
        let r = RingPresentation::polynomial_ring(2, &["x", "y"]).unwrap().level(0);
        let t = tor(&r.parse_ideal("x").unwrap(), &r.parse_ideal("y").unwrap(), 1).unwrap();
        assert!(t.is_zero());
        let t0 = tor(&r.parse_ideal("x").unwrap(), &r.parse_ideal("y").unwrap(), 0).unwrap();
        assert_eq!(t0.dim, Some(1));
        let k = RingPresentation::polynomial_ring(3, &[]).unwrap().level(0);
        let z = k.ideal(vec![]).unwrap();
        assert!(tor(&z, &z, 1).unwrap().is_zero());
    }

    #[test]
    fn ext_examples() {
        let r = RingPresentation::polynomial_ring(2, &["x", "y"]).unwrap().level(0);
        let m = r.parse_ideal("x, y").unwrap();
        let n = r.parse_ideal("x, y").unwrap();
        // Ext^i(k, k) has dimension binom(2, i)
        let dims: Vec<_> = (0..3).map(|i| ext(&m, &n, i).unwrap().dim).collect();
        assert_eq!(dims, vec![Some(1), Some(2), Some(1)]);
        let zero = r.ideal(vec![]).unwrap();
        assert!(ext(&m, &zero, 1).unwrap().is_zero());
        assert_eq!(ext(&m, &zero, 2).unwrap().dim, Some(1));
    }
}
