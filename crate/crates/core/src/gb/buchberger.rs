//! Buchberger's algorithm with the sugar strategy for ideals and submodules
//! of free modules (position-over-term).

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use super::poly::{Ctx, Mono, Poly};
use crate::error::{Error, Result};

/// Default cap on processed critical pairs.
pub const DEFAULT_PAIR_BUDGET: u64 = 1_000_000;

fn find_reducer<'a>(basis: &'a [Poly], m: &Mono) -> Option<&'a Poly> {
    basis.iter().find(|g| g.lead().is_some_and(|l| l.divides(m)))
}

/// Reduce only the leading term until it is irreducible.
pub fn top_reduce(f: &Poly, basis: &[Poly], ctx: &Ctx) -> Poly {
    let mut f = f.clone();
    while let Some((m, c)) = f.terms.first().cloned() {
        match find_reducer(basis, &m) {
            Some(g) => {
                let q = m.div(g.lead().unwrap());
                let coef = ctx.p.neg(ctx.p.mul(c, ctx.p.inv(g.lead_coeff())));
                f = f.add_scaled(g, coef, &q.with_comp(0), ctx);
            }
            None => break,
        }
    }
    f
}

/// Full normal form: every term is irreducible with respect to `basis`.
pub fn normal_form(f: &Poly, basis: &[Poly], ctx: &Ctx) -> Poly {
    let mut rest = f.clone();
    let mut done: Vec<(Mono, u64)> = Vec::new();
    while let Some((m, c)) = rest.terms.first().cloned() {
        match find_reducer(basis, &m) {
            Some(g) => {
                let q = m.div(g.lead().unwrap());
                let coef = ctx.p.neg(ctx.p.mul(c, ctx.p.inv(g.lead_coeff())));
                rest = rest.add_scaled(g, coef, &q.with_comp(0), ctx);
            }
            None => {
                done.push((m, c));
                rest.terms.remove(0);
            }
        }
    }
    Poly { terms: done }
}

/// Normal form together with the quotients: `f = Σ q_i basis_i + r`.
pub fn divide(f: &Poly, basis: &[Poly], ctx: &Ctx) -> (Vec<Poly>, Poly) {
    let mut rest = f.clone();
    let mut done: Vec<(Mono, u64)> = Vec::new();
    let mut quots = vec![Poly::zero(); basis.len()];
    while let Some((m, c)) = rest.terms.first().cloned() {
        match basis
            .iter()
            .position(|g| g.lead().is_some_and(|l| l.divides(&m)))
        {
            Some(i) => {
                let g = &basis[i];
                let q = m.div(g.lead().unwrap()).with_comp(0);
                let coef = ctx.p.mul(c, ctx.p.inv(g.lead_coeff()));
                quots[i] = quots[i].add(&Poly { terms: vec![(q.clone(), coef)] }, ctx);
                rest = rest.add_scaled(g, ctx.p.neg(coef), &q, ctx);
            }
            None => {
                done.push((m, c));
                rest.terms.remove(0);
            }
        }
    }
    (quots, Poly { terms: done })
}

fn s_poly(f: &Poly, g: &Poly, ctx: &Ctx) -> Poly {
    let lf = f.lead().unwrap();
    let lg = g.lead().unwrap();
    let l = lf.lcm(lg);
    let mf = l.div(lf).with_comp(0);
    let mg = l.div(lg).with_comp(0);
    let a = ctx.p.inv(f.lead_coeff());
    let b = ctx.p.inv(g.lead_coeff());
    f.mul_term(&mf, a, ctx)
        .add_scaled(g, ctx.p.neg(b), &mg, ctx)
}

fn single_comp(f: &Poly) -> bool {
    let c = f.lead().map(|m| m.comp);
    f.terms.iter().all(|(m, _)| Some(m.comp) == c)
}

struct Element {
    poly: Poly,
    sugar: u64,
}

/// Compute a reduced Gröbner basis of the submodule generated by `gens`.
///
/// Output is deterministic: pairs are processed by (sugar, lcm degree, indices)
/// and the final basis is sorted by ascending leading monomial.
pub fn groebner(gens: &[Poly], ctx: &Ctx, budget: u64) -> Result<Vec<Poly>> {
    let mut elems: Vec<Element> = Vec::new();
    let mut heap: BinaryHeap<Reverse<(u64, u64, usize, usize)>> = BinaryHeap::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let mut processed = 0u64;

    let add = |elems: &mut Vec<Element>,
               heap: &mut BinaryHeap<Reverse<(u64, u64, usize, usize)>>,
               pending: &mut HashSet<(usize, usize)>,
               f: Poly,
               sugar: u64| {
        let j = elems.len();
        let lj = f.lead().unwrap().clone();
        for (i, e) in elems.iter().enumerate() {
            let li = e.poly.lead().unwrap();
            if li.comp != lj.comp {
                continue;
            }
            let l = li.lcm(&lj);
            let s = (e.sugar + l.degree() - li.degree()).max(sugar + l.degree() - lj.degree());
            heap.push(Reverse((s, l.degree(), j, i)));
            pending.insert((i, j));
        }
        elems.push(Element { poly: f, sugar });
    };

    for g in gens {
        let basis: Vec<Poly> = elems.iter().map(|e| e.poly.clone()).collect();
        let r = normal_form(g, &basis, ctx);
        if !r.is_zero() {
            let s = g.degree();
            let r = r.monic(ctx);
            add(&mut elems, &mut heap, &mut pending, r, s);
        }
    }

    while let Some(Reverse((sugar, _, j, i))) = heap.pop() {
        pending.remove(&(i, j));
        processed += 1;
        if processed > budget {
            return Err(Error::ResourceExceeded(format!(
                "Groebner basis exceeded {budget} critical pairs"
            )));
        }
        let li = elems[i].poly.lead().unwrap().clone();
        let lj = elems[j].poly.lead().unwrap().clone();
        // the product criterion only holds for elements living in one component
        if li.coprime(&lj) && single_comp(&elems[i].poly) && single_comp(&elems[j].poly) {
            continue;
        }
        let l = li.lcm(&lj);
        let chain = (0..elems.len()).any(|k| {
            k != i
                && k != j
                && elems[k].poly.lead().unwrap().divides(&l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_poly(&elems[i].poly, &elems[j].poly, ctx);
        let basis: Vec<Poly> = elems.iter().map(|e| e.poly.clone()).collect();
        let r = normal_form(&s, &basis, ctx);
        if !r.is_zero() {
            let r = r.monic(ctx);
            add(&mut elems, &mut heap, &mut pending, r, sugar);
        }
    }

    Ok(reduce_basis(elems.into_iter().map(|e| e.poly).collect(), ctx))
}

/// Minimalize and interreduce a Gröbner basis.
pub fn reduce_basis(mut basis: Vec<Poly>, ctx: &Ctx) -> Vec<Poly> {
    basis.retain(|g| !g.is_zero());
    basis.sort_by(|a, b| ctx.order.cmp(a.lead().unwrap(), b.lead().unwrap()));
    let mut minimal: Vec<Poly> = Vec::new();
    for g in basis {
        let lg = g.lead().unwrap();
        if !minimal.iter().any(|h| h.lead().unwrap().divides(lg)) {
            minimal.push(g);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Poly> = minimal
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, g)| g.clone())
            .collect();
        let g = &minimal[i];
        let head = Poly {
            terms: vec![g.terms[0].clone()],
        };
        let tail = Poly {
            terms: g.terms[1..].to_vec(),
        };
        let r = head.add(&normal_form(&tail, &others, ctx), ctx);
        out.push(r.monic(ctx));
    }
    out
}
