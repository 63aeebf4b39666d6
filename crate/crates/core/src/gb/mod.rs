//! Gröbner machinery over quotients `𝔽_p[u]/K` of integer-exponent polynomial
//! rings: reduced bases, normal forms, module kernels, and finite-dimensional
//! subquotients.

pub mod buchberger;
pub mod poly;
pub mod staircase;

pub use buchberger::{divide, groebner, normal_form, DEFAULT_PAIR_BUDGET};
pub use poly::{Ctx, Mat, Mono, Poly, TermOrder};

use crate::error::Result;

/// A quotient ring `𝔽_p[u]/K` with `K` held as a reduced Gröbner basis.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub ctx: Ctx,
    pub relations: Vec<Poly>,
    pub budget: u64,
}

/// `ker(A) / im(B)` presented as `S^k / W`.
#[derive(Debug, Clone)]
pub struct Subquotient {
    /// Generators of `ker(A)` as vectors of rank `cols(A)`.
    pub cycles: Vec<Poly>,
    /// Relation module `W ⊂ S^k` on those generators.
    pub relations: Vec<Poly>,
    /// `𝔽_p`-dimension, `None` when infinite.
    pub dim: Option<u128>,
}

impl Subquotient {
    pub fn is_zero(&self) -> bool {
        self.dim == Some(0)
    }
}

impl Quotient {
    pub fn new(ctx: Ctx, relations: &[Poly], budget: u64) -> Result<Self> {
        let relations = groebner(relations, &ctx, budget)?;
        Ok(Quotient {
            ctx,
            relations,
            budget,
        })
    }

    /// `K` placed in every component `0..rank`.
    pub fn relations_in_rank(&self, rank: usize) -> Vec<Poly> {
        (0..rank as u32)
            .flat_map(|c| self.relations.iter().map(move |r| r.with_comp(c)))
            .collect()
    }

    /// Normal form modulo `K` (componentwise for vectors).
    pub fn reduce(&self, f: &Poly) -> Poly {
        let rank = f.max_comp().map(|c| c as usize + 1).unwrap_or(1);
        normal_form(f, &self.relations_in_rank(rank), &self.ctx)
    }

    pub fn is_zero(&self, f: &Poly) -> bool {
        self.reduce(f).is_zero()
    }

    /// Reduced Gröbner basis of `⟨gens⟩ + K·S^rank`.
    pub fn module_gb(&self, gens: &[Poly], rank: usize) -> Result<Vec<Poly>> {
        let mut all = self.relations_in_rank(rank);
        all.extend(gens.iter().cloned());
        groebner(&all, &self.ctx, self.budget)
    }

    /// Kernel of `A : S^cols → S^rows` as vectors of rank `cols`, reduced mod `K`.
    pub fn kernel(&self, a: &Mat) -> Result<Vec<Poly>> {
        let (r, c) = (a.rows, a.cols);
        if c == 0 {
            return Ok(Vec::new());
        }
        if r == 0 {
            return Ok((0..c as u32).map(|j| Poly::constant(1, &self.ctx).with_comp(j)).collect());
        }
        let mut gens = Vec::with_capacity(c);
        for j in 0..c {
            let top = a.column_vector(j, 0, &self.ctx);
            let unit = Poly::constant(1, &self.ctx).with_comp((r + j) as u32);
            gens.push(top.add(&unit, &self.ctx));
        }
        let gb = self.module_gb(&gens, r + c)?;
        let mut out: Vec<Poly> = Vec::new();
        for g in gb {
            if (g.lead().unwrap().comp as usize) < r {
                continue;
            }
            let shifted = Poly {
                terms: g
                    .terms
                    .iter()
                    .map(|(m, k)| (m.with_comp(m.comp - r as u32), *k))
                    .collect(),
            };
            let v = self.reduce(&shifted);
            if !v.is_zero() && !out.contains(&v) {
                out.push(v);
            }
        }
        Ok(out)
    }

    /// `𝔽_p`-dimension of `S^rank / ⟨sub⟩`, `None` if infinite.
    pub fn quotient_dim(&self, sub: &[Poly], rank: usize) -> Result<Option<u128>> {
        if rank == 0 {
            return Ok(Some(0));
        }
        let gb = self.module_gb(sub, rank)?;
        let mut total: u128 = 0;
        for comp in 0..rank as u32 {
            let leads: Vec<Vec<u32>> = gb
                .iter()
                .filter_map(|g| g.lead())
                .filter(|m| m.comp == comp)
                .map(|m| m.exps.to_vec())
                .collect();
            match staircase::count_standard(&leads, self.ctx.nvars) {
                Some(n) => total += n,
                None => return Ok(None),
            }
        }
        Ok(Some(total))
    }

    /// Whether `v` lies in `⟨sub⟩ + K·S^rank`.
    pub fn module_contains(&self, sub: &[Poly], v: &Poly, rank: usize) -> Result<bool> {
        let gb = self.module_gb(sub, rank)?;
        Ok(normal_form(v, &gb, &self.ctx).is_zero())
    }

    /// Drop generators lying in the submodule generated by the remaining ones.
    pub fn prune(&self, gens: Vec<Poly>, rank: usize) -> Result<Vec<Poly>> {
        let mut keep = gens;
        let mut i = keep.len();
        while i > 0 {
            i -= 1;
            let others: Vec<Poly> = keep
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, g)| g.clone())
                .collect();
            if self.module_contains(&others, &keep[i], rank)? {
                keep.remove(i);
            }
        }
        Ok(keep)
    }

    /// Homology `ker(A)/im(B)` at the middle of `S^{cols B} → S^{c} → S^{rows A}`.
    pub fn homology(&self, a: &Mat, b: &Mat) -> Result<Subquotient> {
        let c = a.cols;
        debug_assert!(b.cols == 0 || b.rows == c);
        let cycles = self.kernel(a)?;
        let k = cycles.len();
        if k == 0 {
            return Ok(Subquotient {
                cycles,
                relations: Vec::new(),
                dim: Some(0),
            });
        }
        // relations among cycles modulo boundaries: kernel of [Z | B]
        let mut m = Mat::zeros(c, k + b.cols);
        for (j, z) in cycles.iter().enumerate() {
            for i in 0..c {
                m.set(i, j, z.component(i as u32, &self.ctx));
            }
        }
        for j in 0..b.cols {
            for i in 0..c {
                m.set(i, k + j, b.get(i, j).clone());
            }
        }
        let syz = self.kernel(&m)?;
        let relations: Vec<Poly> = syz
            .iter()
            .map(|v| Poly {
                terms: v
                    .terms
                    .iter()
                    .filter(|(mono, _)| (mono.comp as usize) < k)
                    .cloned()
                    .collect(),
            })
            .filter(|v| !v.is_zero())
            .collect();
        let dim = self.quotient_dim(&relations, k)?;
        Ok(Subquotient {
            cycles,
            relations,
            dim,
        })
    }
}
