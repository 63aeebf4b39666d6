//! Integer-exponent sparse polynomials and module vectors over 𝔽_p, the
//! working representation of the Gröbner engine.

use std::cmp::Ordering;

use crate::field::PrimeChar;

/// Term orders on exponent vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum TermOrder {
    /// Degree reverse lexicographic.
    Grevlex,
    /// Pure lexicographic.
    Lex,
    /// Block order: the first `k` variables (grevlex) dominate the rest (grevlex).
    Elim(usize),
}

/// A monomial `u^a · e_comp`. Component 0 is used for ideals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mono {
    pub comp: u32,
    pub exps: Box<[u32]>,
}

impl Mono {
    pub fn one(nvars: usize) -> Self {
        Mono {
            comp: 0,
            exps: vec![0; nvars].into_boxed_slice(),
        }
    }

    pub fn degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.comp == other.comp && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Mono) -> Mono {
        Mono {
            comp: self.comp,
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// `self * other`, keeping the component of `self` unless it is 0.
    pub fn mul(&self, other: &Mono) -> Mono {
        Mono {
            comp: self.comp.max(other.comp),
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        Mono {
            comp: self.comp,
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    pub fn coprime(&self, other: &Mono) -> bool {
        self.exps
            .iter()
            .zip(other.exps.iter())
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn with_comp(&self, comp: u32) -> Mono {
        Mono {
            comp,
            exps: self.exps.clone(),
        }
    }
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        match x.cmp(y) {
            Ordering::Equal => {}
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

impl TermOrder {
    pub fn cmp_exps(&self, a: &[u32], b: &[u32]) -> Ordering {
        match *self {
            TermOrder::Grevlex => grevlex(a, b),
            TermOrder::Lex => a.cmp(b),
            TermOrder::Elim(k) => match grevlex(&a[..k], &b[..k]) {
                Ordering::Equal => grevlex(&a[k..], &b[k..]),
                o => o,
            },
        }
    }

    /// Position-over-term: a lower component index is larger.
    pub fn cmp(&self, a: &Mono, b: &Mono) -> Ordering {
        match b.comp.cmp(&a.comp) {
            Ordering::Equal => self.cmp_exps(&a.exps, &b.exps),
            o => o,
        }
    }
}

/// Arithmetic context: characteristic, number of variables, and term order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ctx {
    pub p: PrimeChar,
    pub nvars: usize,
    pub order: TermOrder,
}

/// Sparse polynomial (or module vector) with terms in strictly descending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    pub terms: Vec<(Mono, u64)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant(c: u64, ctx: &Ctx) -> Self {
        let c = c % ctx.p.get();
        if c == 0 {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Mono::one(ctx.nvars), c)],
            }
        }
    }

    pub fn var(i: usize, ctx: &Ctx) -> Self {
        let mut m = Mono::one(ctx.nvars);
        m.exps[i] = 1;
        Poly {
            terms: vec![(m, 1)],
        }
    }

    pub fn lead(&self) -> Option<&Mono> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn lead_coeff(&self) -> u64 {
        self.terms.first().map(|t| t.1).unwrap_or(0)
    }

    pub fn from_terms(mut terms: Vec<(Mono, u64)>, ctx: &Ctx) -> Self {
        terms.sort_by(|a, b| ctx.order.cmp(&b.0, &a.0));
        let mut out: Vec<(Mono, u64)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            let c = c % ctx.p.get();
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = ctx.p.add(*lc, c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        Poly { terms: out }
    }

    /// Re-sort under a different order.
    pub fn resort(&self, ctx: &Ctx) -> Self {
        Poly::from_terms(self.terms.clone(), ctx)
    }

    /// `self + c * m * g`.
    pub fn add_scaled(&self, g: &Poly, c: u64, m: &Mono, ctx: &Ctx) -> Poly {
        let p = ctx.p;
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = 0;
        let mut gi = g.terms.iter().map(|(n, d)| (n.mul(m), p.mul(*d, c))).peekable();
        loop {
            match (self.terms.get(a), gi.peek()) {
                (None, None) => break,
                (Some(x), None) => {
                    out.push(x.clone());
                    a += 1;
                }
                (None, Some(_)) => out.push(gi.next().unwrap()),
                (Some(x), Some(y)) => match ctx.order.cmp(&x.0, &y.0) {
                    Ordering::Greater => {
                        out.push(x.clone());
                        a += 1;
                    }
                    Ordering::Less => out.push(gi.next().unwrap()),
                    Ordering::Equal => {
                        let (n, d) = gi.next().unwrap();
                        let s = p.add(x.1, d);
                        if s != 0 {
                            out.push((n, s));
                        }
                        a += 1;
                    }
                },
            }
        }
        Poly { terms: out }
    }

    pub fn add(&self, g: &Poly, ctx: &Ctx) -> Poly {
        self.add_scaled(g, 1, &Mono::one(ctx.nvars), ctx)
    }

    pub fn sub(&self, g: &Poly, ctx: &Ctx) -> Poly {
        self.add_scaled(g, ctx.p.get() - 1, &Mono::one(ctx.nvars), ctx)
    }

    pub fn scale(&self, c: u64, ctx: &Ctx) -> Poly {
        let c = c % ctx.p.get();
        if c == 0 {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), ctx.p.mul(*d, c))).collect(),
        }
    }

    pub fn mul_term(&self, m: &Mono, c: u64, ctx: &Ctx) -> Poly {
        let c = c % ctx.p.get();
        if c == 0 {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(n, d)| (n.mul(m), ctx.p.mul(*d, c)))
                .collect(),
        }
    }

    /// Product of a scalar polynomial (component 0) with `self`.
    pub fn mul(&self, g: &Poly, ctx: &Ctx) -> Poly {
        let (small, big) = if self.terms.len() <= g.terms.len() {
            (self, g)
        } else {
            (g, self)
        };
        let mut acc = Poly::zero();
        for (m, c) in &small.terms {
            acc = acc.add_scaled(big, *c, m, ctx);
        }
        acc
    }

    pub fn monic(&self, ctx: &Ctx) -> Poly {
        match self.terms.first() {
            None => Poly::zero(),
            Some((_, c)) if *c == 1 => self.clone(),
            Some((_, c)) => self.scale(ctx.p.inv(*c), ctx),
        }
    }

    pub fn degree(&self) -> u64 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    /// Move every term to component `comp`.
    pub fn with_comp(&self, comp: u32) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.with_comp(comp), *c)).collect(),
        }
    }

    /// Terms of component `comp`, moved to component 0.
    pub fn component(&self, comp: u32, ctx: &Ctx) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.comp == comp)
            .map(|(m, c)| (m.with_comp(0), *c))
            .collect();
        Poly::from_terms(terms, ctx)
    }

    pub fn max_comp(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.comp).max()
    }

    /// Substitute integer-exponent images for each variable (component 0 only).
    pub fn pow(&self, mut e: u64, ctx: &Ctx) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::constant(1, ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ctx);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, ctx);
            }
        }
        acc
    }

    /// Exact division by a monomial (each term must be divisible).
    pub fn div_mono(&self, m: &Mono) -> Option<Poly> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (n, c) in &self.terms {
            if !m.exps.iter().zip(n.exps.iter()).all(|(a, b)| a <= b) {
                return None;
            }
            out.push((
                Mono {
                    comp: n.comp,
                    exps: n.exps.iter().zip(m.exps.iter()).map(|(a, b)| a - b).collect(),
                },
                *c,
            ));
        }
        Some(Poly { terms: out })
    }
}

/// Dense-row matrix of component-0 polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Poly>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            entries: vec![Poly::zero(); rows * cols],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Poly) {
        self.entries[i * self.cols + j] = v;
    }

    /// Column `j` as a module vector with components `offset..offset+rows`.
    pub fn column_vector(&self, j: usize, offset: u32, ctx: &Ctx) -> Poly {
        let mut terms = Vec::new();
        for i in 0..self.rows {
            for (m, c) in &self.get(i, j).terms {
                terms.push((m.with_comp(offset + i as u32), *c));
            }
        }
        Poly::from_terms(terms, ctx)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat, ctx: &Ctx) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b, ctx), ctx);
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Build from module vectors (as columns) of rank `rows`.
    pub fn from_columns(cols: &[Poly], rows: usize, ctx: &Ctx) -> Mat {
        let mut m = Mat::zeros(rows, cols.len());
        for (j, v) in cols.iter().enumerate() {
            for i in 0..rows {
                m.set(i, j, v.component(i as u32, ctx));
            }
        }
        m
    }
}
