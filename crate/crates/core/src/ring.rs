//! Ring presentations, their level truncations, and ideals in them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeChar;
use crate::gb::{Ctx, Mono, Poly, Quotient, TermOrder, DEFAULT_PAIR_BUDGET};
use crate::parse::parse_list;
use crate::perfpoly::{vars_from, PerfMonomial, PerfPoly, Vars};
use crate::exponent::PExponent;

/// `𝔽_p[vars]/(relations)` with integer-exponent relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingPresentation {
    char: PrimeChar,
    vars: Vars,
    relations: Vec<PerfPoly>,
}

/// On-disk form: `{ "char": p, "vars": [...], "relations": [...] }`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RingFile {
    pub char: u64,
    pub vars: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
}

impl RingPresentation {
    pub fn new(char: PrimeChar, vars: Vars, relations: Vec<PerfPoly>) -> Result<Self> {
        for r in &relations {
            if r.char() != char {
                return Err(Error::CharMismatch(r.char().get(), char.get()));
            }
            if r.vars() != &vars {
                return Err(Error::VariableMismatch);
            }
            if r.level_of() != 0 {
                return Err(Error::Invalid(format!("relation `{r}` must have integer exponents")));
            }
        }
        Ok(RingPresentation {
            char,
            vars,
            relations,
        })
    }

    /// Parse from the text fields of a ring file.
    pub fn parse(p: u64, vars: &[&str], relations: &[&str]) -> Result<Self> {
        let char = PrimeChar::new(p)?;
        let vars = vars_from(vars);
        let rels = relations
            .iter()
            .map(|r| PerfPoly::parse(r, char, &vars))
            .collect::<Result<Vec<_>>>()?;
        Self::new(char, vars, rels)
    }

    pub fn polynomial_ring(p: u64, vars: &[&str]) -> Result<Self> {
        Self::parse(p, vars, &[])
    }

    pub fn from_file(file: &RingFile) -> Result<Self> {
        let vars: Vec<&str> = file.vars.iter().map(String::as_str).collect();
        let rels: Vec<&str> = file.relations.iter().map(String::as_str).collect();
        Self::parse(file.char, &vars, &rels)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: RingFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    pub fn to_file(&self) -> RingFile {
        RingFile {
            char: self.char.get(),
            vars: self.vars.to_vec(),
            relations: self.relations.iter().map(|r| r.to_string()).collect(),
        }
    }

    pub fn char(&self) -> PrimeChar {
        self.char
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn relations(&self) -> &[PerfPoly] {
        &self.relations
    }

    pub fn parse_element(&self, text: &str) -> Result<PerfPoly> {
        PerfPoly::parse(text, self.char, &self.vars)
    }

    pub fn parse_elements(&self, text: &str) -> Result<Vec<PerfPoly>> {
        parse_list(text, self.char, &self.vars)
    }

    pub fn var(&self, name: &str) -> Result<PerfPoly> {
        PerfPoly::variable(name, self.char, &self.vars)
    }

    pub fn zero(&self) -> PerfPoly {
        PerfPoly::zero(self.char, &self.vars)
    }

    pub fn one(&self) -> PerfPoly {
        PerfPoly::one(self.char, &self.vars)
    }

    pub fn level(&self, n: u32) -> LevelRing {
        LevelRing::new(self.clone(), n)
    }
}

impl fmt::Display for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[{}]", self.char, self.vars.join(","))?;
        if !self.relations.is_empty() {
            let rels: Vec<String> = self.relations.iter().map(|r| r.to_string()).collect();
            write!(f, "/({})", rels.join(", "))?;
        }
        Ok(())
    }
}

/// How level-0 relations are read at level `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelationMode {
    /// Truncation of the perfection `R^∞`: `R_n = R^{1/p^n}`, so a relation
    /// `f(x)` becomes `f(u)` in the root variables `u_i = x_i^{1/p^n}`.
    Perfection,
    /// Quotient of the perfect polynomial ring by the ideal the relations
    /// generate: `f(x)` becomes `f(u^{p^n})`.
    Literal,
}

/// The noetherian truncation at level `n`: elements of level at most `n`,
/// computed in the root variables `u_i = x_i^{1/p^n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelRing {
    base: RingPresentation,
    level: u32,
    mode: RelationMode,
    budget: u64,
}

impl LevelRing {
    pub fn new(base: RingPresentation, level: u32) -> Self {
        LevelRing {
            base,
            level,
            mode: RelationMode::Perfection,
            budget: DEFAULT_PAIR_BUDGET,
        }
    }

    pub fn with_mode(mut self, mode: RelationMode) -> Self {
        self.mode = mode;
        self
    }

    /// Critical-pair budget for every Gröbner computation in this ring.
    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn base(&self) -> &RingPresentation {
        &self.base
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn mode(&self) -> RelationMode {
        self.mode
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn char(&self) -> PrimeChar {
        self.base.char
    }

    pub fn vars(&self) -> &Vars {
        &self.base.vars
    }

    pub fn nvars(&self) -> usize {
        self.base.vars.len()
    }

    pub fn at_level(&self, n: u32) -> LevelRing {
        LevelRing {
            level: n,
            ..self.clone()
        }
    }

    /// Relations written in the root variables, as level-0 polynomials.
    pub fn rescaled_relations(&self) -> Vec<PerfPoly> {
        self.base
            .relations
            .iter()
            .map(|r| match self.mode {
                RelationMode::Perfection => r.clone(),
                RelationMode::Literal => r.frobenius(self.level),
            })
            .collect()
    }

    pub fn ctx(&self, order: TermOrder, extra_vars: usize) -> Ctx {
        Ctx {
            p: self.char(),
            nvars: self.nvars() + extra_vars,
            order,
        }
    }

    /// Convert an element to the internal root-variable representation;
    /// ring variable `i` lands at index `offset + i` of `ctx`.
    pub fn to_internal_at(&self, f: &PerfPoly, ctx: &Ctx, offset: usize) -> Result<Poly> {
        if f.char() != self.char() {
            return Err(Error::CharMismatch(f.char().get(), self.char().get()));
        }
        if f.vars() != self.vars() {
            return Err(Error::VariableMismatch);
        }
        let g = f.rescale(self.level)?;
        level0_to_internal(&g, ctx, offset)
    }

    pub fn to_internal(&self, f: &PerfPoly, ctx: &Ctx) -> Result<Poly> {
        self.to_internal_at(f, ctx, 0)
    }

    /// Inverse of [`LevelRing::to_internal_at`]; terms outside component 0 are ignored.
    pub fn from_internal_at(&self, g: &Poly, offset: usize) -> PerfPoly {
        let p = self.char();
        let terms = g
            .terms
            .iter()
            .filter(|(m, _)| m.comp == 0)
            .map(|(m, c)| {
                let exps = (0..self.nvars())
                    .filter(|&i| m.exps[offset + i] > 0)
                    .map(|i| (i, PExponent::from_int(m.exps[offset + i] as u64)))
                    .collect();
                (PerfMonomial::from_exponents(exps, p), *c)
            })
            .collect();
        PerfPoly::from_terms(terms, p, self.vars()).unrescale(self.level)
    }

    pub fn from_internal(&self, g: &Poly) -> PerfPoly {
        self.from_internal_at(g, 0)
    }

    /// Relations in the internal representation for `ctx`.
    pub fn internal_relations(&self, ctx: &Ctx, offset: usize) -> Result<Vec<Poly>> {
        self.rescaled_relations()
            .iter()
            .map(|r| level0_to_internal(r, ctx, offset))
            .collect()
    }

    /// The quotient ring in grevlex, ready for module computations.
    pub fn quotient(&self) -> Result<Quotient> {
        self.quotient_over(&[])
    }

    /// The quotient by relations plus additional elements (e.g. `R/J`).
    pub fn quotient_over(&self, extra: &[PerfPoly]) -> Result<Quotient> {
        let ctx = self.ctx(TermOrder::Grevlex, 0);
        let mut rels = self.internal_relations(&ctx, 0)?;
        for f in extra {
            rels.push(self.to_internal(f, &ctx)?);
        }
        Quotient::new(ctx, &rels, self.budget)
    }

    /// Normal form of an element modulo the relations.
    pub fn reduce(&self, f: &PerfPoly) -> Result<PerfPoly> {
        let q = self.quotient()?;
        let g = self.to_internal(f, &q.ctx)?;
        Ok(self.from_internal(&q.reduce(&g)))
    }

    pub fn is_zero(&self, f: &PerfPoly) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }

    pub fn ideal(&self, generators: Vec<PerfPoly>) -> Result<IdealHandle> {
        IdealHandle::new(self.clone(), generators)
    }

    pub fn parse_ideal(&self, text: &str) -> Result<IdealHandle> {
        self.ideal(self.base.parse_elements(text)?)
    }
}

pub(crate) fn level0_to_internal(g: &PerfPoly, ctx: &Ctx, offset: usize) -> Result<Poly> {
    let mut terms = Vec::with_capacity(g.terms().len());
    for (m, c) in g.terms() {
        let mut mono = Mono::one(ctx.nvars);
        for (i, e) in m.exponents() {
            mono.exps[offset + i] = e.to_u32().ok_or_else(|| {
                Error::ResourceExceeded(format!("exponent {} does not fit the engine", e.to_text(g.char())))
            })?;
        }
        terms.push((mono, *c));
    }
    Ok(Poly::from_terms(terms, ctx))
}

/// A finitely generated ideal of a level ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealHandle {
    ring: LevelRing,
    generators: Vec<PerfPoly>,
}

impl IdealHandle {
    pub fn new(ring: LevelRing, generators: Vec<PerfPoly>) -> Result<Self> {
        for g in &generators {
            if g.char() != ring.char() {
                return Err(Error::CharMismatch(g.char().get(), ring.char().get()));
            }
            if g.vars() != ring.vars() {
                return Err(Error::VariableMismatch);
            }
            let have = g.level_of();
            if have > ring.level() {
                return Err(Error::LevelTooLow {
                    have,
                    ring: ring.level(),
                });
            }
        }
        Ok(IdealHandle { ring, generators })
    }

    pub fn ring(&self) -> &LevelRing {
        &self.ring
    }

    pub fn generators(&self) -> &[PerfPoly] {
        &self.generators
    }

    /// Same generators, read in another level ring over the same presentation.
    pub fn at_level(&self, n: u32) -> Result<IdealHandle> {
        IdealHandle::new(self.ring.at_level(n), self.generators.clone())
    }

    pub fn internal_generators(&self, ctx: &Ctx, offset: usize) -> Result<Vec<Poly>> {
        self.generators
            .iter()
            .map(|g| self.ring.to_internal_at(g, ctx, offset))
            .collect()
    }
}

impl fmt::Display for IdealHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", gens.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let r = RingPresentation::from_json(r#"{"char": 2, "vars": ["x","y"], "relations": ["x*y"]}"#).unwrap();
        assert_eq!(r.relations().len(), 1);
        let back = RingPresentation::from_file(&r.to_file()).unwrap();
        assert_eq!(back, r);
        assert!(RingPresentation::from_json(r#"{"char": 4, "vars": ["x"]}"#).is_err());
        assert!(RingPresentation::parse(2, &["x"], &["x^(1/2)"]).is_err());
    }

    #[test]
    fn rescaled_relations_by_mode() {
        let r = RingPresentation::parse(2, &["x", "y"], &["x*y"]).unwrap();
        let l = r.level(2);
        assert_eq!(l.rescaled_relations()[0].to_string(), "x*y");
        let lit = l.clone().with_mode(RelationMode::Literal);
        assert_eq!(lit.rescaled_relations()[0].to_string(), "x^4*y^4");
    }

    #[test]
    fn internal_round_trip() {
        let r = RingPresentation::parse(3, &["x", "y"], &[]).unwrap();
        let l = r.level(2);
        let f = r.parse_element("x^(1/9)*y + 2*x^(4/3)").unwrap();
        let ctx = l.ctx(TermOrder::Grevlex, 1);
        let g = l.to_internal_at(&f, &ctx, 1).unwrap();
        assert_eq!(l.from_internal_at(&g, 1), f);
        let too_deep = r.parse_element("x^(1/27)").unwrap();
        assert!(matches!(l.to_internal(&too_deep, &ctx), Err(Error::LevelTooLow { .. })));
    }

    #[test]
    fn level_embedding_is_a_homomorphism() {
        // in u-coordinates, level n sits in level n+1 via u -> v^p
        let r = RingPresentation::parse(2, &["x", "y"], &["x*y"]).unwrap();
        let f = r.parse_element("x^(1/2) + y").unwrap();
        let g = r.parse_element("x^(1/2)*y^(1/2) + x").unwrap();
        for n in 1..3 {
            let lo = r.level(n);
            let hi = r.level(n + 1);
            let prod_lo = lo.reduce(&(&f * &g)).unwrap();
            let prod_hi = hi.reduce(&(&f * &g)).unwrap();
            assert_eq!(prod_lo, prod_hi);
        }
    }
}
