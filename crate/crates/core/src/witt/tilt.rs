use serde::Serialize;

use crate::error::{Error, Result};
use crate::perfpoly::PerfPoly;
use crate::ring::{RelationMode, RingPresentation};

/// `E_L(A)`: length-`L` sequences in `A/pA` with `r_{i+1}^p = r_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TiltRing {
    residue: RingPresentation,
    mode: RelationMode,
    length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FontaineElement {
    coords: Vec<PerfPoly>,
}

impl FontaineElement {
    pub fn coords(&self) -> &[PerfPoly] {
        &self.coords
    }
}

impl TiltRing {
    /// `residue` presents `A/pA`; `mode` says how its relations sit in the
    /// perfection.
    pub fn new(residue: RingPresentation, mode: RelationMode, length: usize) -> Result<Self> {
        if length == 0 {
            return Err(Error::Invalid("tilt length must be positive".into()));
        }
        Ok(TiltRing { residue, mode, length })
    }

    /// `A = ℤ/p^e`, whose reduction is `𝔽_p`.
    pub fn integers_mod(p: u64, length: usize) -> Result<Self> {
        Self::new(RingPresentation::polynomial_ring(p, &[])?, RelationMode::Perfection, length)
    }

    pub fn residue(&self) -> &RingPresentation {
        &self.residue
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn is_perfect(&self) -> bool {
        self.mode == RelationMode::Perfection || self.residue.relations().is_empty()
    }

    pub fn reduce(&self, f: &PerfPoly) -> Result<PerfPoly> {
        if self.residue.relations().is_empty() {
            return Ok(f.clone());
        }
        self.residue.level(f.level_of()).with_mode(self.mode).reduce(f)
    }

    pub fn equal(&self, a: &PerfPoly, b: &PerfPoly) -> Result<bool> {
        Ok(self.reduce(&(a - b))?.is_zero())
    }

    /// Validate a full coordinate tuple.
    pub fn element(&self, coords: Vec<PerfPoly>) -> Result<FontaineElement> {
        if coords.len() != self.length {
            return Err(Error::Mismatch(format!("expected {} coordinates, got {}", self.length, coords.len())));
        }
        for c in &coords {
            c.check_compatible(&self.residue.zero())?;
        }
        for i in 0..self.length - 1 {
            if !self.equal(&coords[i + 1].frobenius(1), &coords[i])? {
                return Err(Error::ConstraintViolation(format!(
                    "coordinate {} to the p is not coordinate {}",
                    i + 1,
                    i
                )));
            }
        }
        let coords = coords.iter().map(|c| self.reduce(c)).collect::<Result<_>>()?;
        Ok(FontaineElement { coords })
    }

    pub fn parse(&self, text: &str) -> Result<FontaineElement> {
        self.element(self.residue.parse_elements(text)?)
    }

    /// `r_i = r_0^{1/p^i}`; needs a perfect residue ring.
    pub fn lift(&self, r0: &PerfPoly) -> Result<FontaineElement> {
        if !self.is_perfect() {
            return Err(Error::ImperfectRing("p-th roots are not unique in this ring".into()));
        }
        self.element((0..self.length).map(|i| r0.pth_root(i as u32)).collect())
    }

    pub fn project(&self, e: &FontaineElement) -> PerfPoly {
        e.coords[0].clone()
    }

    pub fn add(&self, a: &FontaineElement, b: &FontaineElement) -> Result<FontaineElement> {
        self.combine(a, b, |x, y| x + y)
    }

    pub fn mul(&self, a: &FontaineElement, b: &FontaineElement) -> Result<FontaineElement> {
        self.combine(a, b, |x, y| x * y)
    }

    fn combine(
        &self,
        a: &FontaineElement,
        b: &FontaineElement,
        op: impl Fn(&PerfPoly, &PerfPoly) -> PerfPoly,
    ) -> Result<FontaineElement> {
        if a.coords.len() != self.length || b.coords.len() != self.length {
            return Err(Error::Mismatch("element of a different tilt".into()));
        }
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| self.reduce(&op(x, y)))
            .collect::<Result<_>>()?;
        Ok(FontaineElement { coords })
    }

    /// Every coordinate nonzero in the ring.
    pub fn all_coords_nonzero(&self, e: &FontaineElement) -> Result<bool> {
        for c in &e.coords {
            if self.reduce(c)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TiltTable {
    pub p: u64,
    pub length: usize,
    pub tuples_checked: u64,
    pub elements: usize,
    pub all_constant: bool,
    pub projection_bijective: bool,
    pub ring_laws: bool,
}

impl TiltTable {
    pub fn passed(&self) -> bool {
        self.elements as u64 == self.p && self.all_constant && self.projection_bijective && self.ring_laws
    }
}

/// Enumerate all of `𝔽_p^L`, keep the compatible sequences, and compare with `𝔽_p`.
pub fn fp_tilt_table(p: u64, length: usize) -> Result<TiltTable> {
    let t = TiltRing::integers_mod(p, length)?;
    let total = p.pow(length as u32);
    let pc = t.residue.char();
    let mut elems = Vec::new();
    for mut k in 0..total {
        let coords: Vec<PerfPoly> = (0..length)
            .map(|_| {
                let d = k % p;
                k /= p;
                PerfPoly::constant(d as i128, pc, t.residue.vars())
            })
            .collect();
        if let Ok(e) = t.element(coords) {
            elems.push(e);
        }
    }
    let all_constant = elems.iter().all(|e| e.coords.iter().all(|c| *c == e.coords[0]));
    let mut proj: Vec<u64> = elems.iter().map(|e| t.project(e).constant_term()).collect();
    proj.sort();
    proj.dedup();
    let projection_bijective = proj.len() == elems.len() && proj.len() as u64 == p;
    let mut ring_laws = true;
    for a in &elems {
        for b in &elems {
            let (x, y) = (t.project(a).constant_term(), t.project(b).constant_term());
            ring_laws &= t.project(&t.add(a, b)?).constant_term() == (x + y) % p;
            ring_laws &= t.project(&t.mul(a, b)?).constant_term() == (x * y) % p;
        }
    }
    Ok(TiltTable {
        p,
        length,
        tuples_checked: total,
        elements: elems.len(),
        all_constant,
        projection_bijective,
        ring_laws,
    })
}
