use serde::Serialize;

use super::{Cited, Provenance};
use crate::error::{Error, Result};
use crate::ideal::{krull_dimension, subalgebra_membership};
use crate::perfpoly::PerfPoly;
use crate::ring::RingPresentation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Coherence {
    /// Every normalization generator has `s^{p^n}` in the ring.
    Coherent { level: u32 },
    NotCoherent { witness: String, certified_levels: u32, certificate: String },
    Inconclusive { max_level: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub ring: String,
    pub coherence: Coherence,
    pub coherent: Option<bool>,
    pub dim: Cited,
    pub gl_dim: Option<Cited>,
    pub w_dim: Option<Cited>,
    pub gl_dim_bound: Cited,
    pub classification: Option<Cited>,
    pub footnote: String,
}

/// A ring map given by images of the source variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub images: Vec<(String, PerfPoly)>,
}

impl Embedding {
    /// Parse `{"images": {"t": "t", "ts": "t*s"}}` against the target ring.
    pub fn from_json(text: &str, source: &RingPresentation, target: &RingPresentation) -> Result<Self> {
        #[derive(serde::Deserialize)]
        struct File {
            images: std::collections::BTreeMap<String, String>,
        }
        let file: File = serde_json::from_str(text)?;
        let mut images = Vec::new();
        for v in source.vars().iter() {
            let img = file
                .images
                .get(v)
                .ok_or_else(|| Error::Invalid(format!("no image for variable {v}")))?;
            images.push((v.clone(), target.parse_element(img)?));
        }
        for k in file.images.keys() {
            if !source.vars().contains(k) {
                return Err(Error::UnknownVariable(k.clone()));
            }
        }
        Ok(Embedding { images })
    }

    pub fn new(source: &RingPresentation, target: &RingPresentation, images: &[&str]) -> Result<Self> {
        if images.len() != source.vars().len() {
            return Err(Error::Mismatch("one image per source variable".into()));
        }
        Ok(Embedding {
            images: source
                .vars()
                .iter()
                .zip(images)
                .map(|(v, s)| Ok((v.clone(), target.parse_element(s)?)))
                .collect::<Result<_>>()?,
        })
    }

    fn generators(&self) -> Vec<PerfPoly> {
        self.images.iter().map(|(_, g)| g.clone()).collect()
    }
}

/// The curve family `𝔽_p[t, ts]` with `s² = t + 1`.
fn registered_family(normalization: &RingPresentation, emb: &Embedding) -> Option<(PerfPoly, PerfPoly)> {
    let vars = normalization.vars();
    if vars.len() != 2 || normalization.relations().len() != 1 {
        return None;
    }
    for (tn, sn) in [(0, 1), (1, 0)] {
        let t = normalization.var(&vars[tn]).ok()?;
        let s = normalization.var(&vars[sn]).ok()?;
        let rel = &(&s * &s) - &(&t + &normalization.one());
        let given = &normalization.relations()[0];
        if *given != rel && *given != -&rel {
            continue;
        }
        let mut imgs = emb.generators();
        imgs.sort_by_key(|g| g.to_string());
        let mut want = vec![t.clone(), &t * &s];
        want.sort_by_key(|g| g.to_string());
        if imgs == want {
            return Some((t, s));
        }
    }
    None
}

/// For odd `p`, `s^{p^n} = s (t+1)^{(p^n−1)/2}` and the ring is
/// `𝔽_p[t] ⊕ ts𝔽_p[t]`, so `s^{p^n}` lies in it iff `t` divides
/// `(t+1)^{(p^n−1)/2}`, which fails since its constant term is 1.
fn family_certificate(
    normalization: &RingPresentation,
    t: &PerfPoly,
    s: &PerfPoly,
    max_level: u32,
) -> Result<bool> {
    let p = normalization.char().get();
    if p == 2 {
        return Ok(false);
    }
    let ring = normalization.level(0);
    let tp1 = t + &normalization.one();
    for n in 0..=max_level {
        let q = p.pow(n);
        let lhs = ring.reduce(&s.pow_u64(q))?;
        let h = tp1.pow_u64((q - 1) / 2);
        if lhs != ring.reduce(&(s * &h))? || h.constant_term() == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn classify_curve(
    ring: &RingPresentation,
    normalization: &RingPresentation,
    embedding: &Embedding,
    max_level: u32,
) -> Result<ClassificationReport> {
    if ring.char() != normalization.char() {
        return Err(Error::CharMismatch(ring.char().get(), normalization.char().get()));
    }
    // the embedding must respect the relations of the ring
    let images = embedding.generators();
    let target = normalization.level(0);
    for (k, rel) in ring.relations().iter().enumerate() {
        let img = rel.substitute_integer(&images, normalization.vars())?;
        if !target.is_zero(&img)? {
            return Err(Error::RelationViolated(k + 1));
        }
    }
    let d = krull_dimension(&ring.level(0).ideal(Vec::new())?)?
        .ok_or_else(|| Error::Invalid("the zero ring is not a curve".into()))?;
    let mut witness_level = 0;
    let mut missing = None;
    for v in normalization.vars().iter() {
        let s = normalization.var(v)?;
        let mut found = None;
        for n in 0..=max_level {
            let sq = s.frobenius(n);
            if subalgebra_membership(&sq, &images, &target)?.member {
                found = Some(n);
                break;
            }
        }
        match found {
            Some(n) => witness_level = witness_level.max(n),
            None => {
                missing = Some(v.clone());
                break;
            }
        }
    }
    let coherence = match missing {
        None => Coherence::Coherent { level: witness_level },
        Some(v) => match registered_family(normalization, embedding) {
            Some((t, s)) if normalization.var(&v)? == s && family_certificate(normalization, &t, &s, max_level)? => {
                Coherence::NotCoherent {
                    witness: v,
                    certified_levels: max_level,
                    certificate: "s^(p^n) = s*(t+1)^((p^n-1)/2), the ring is F_p[t] + t*s*F_p[t], and (t+1)^k has constant term 1".into(),
                }
            }
            _ => Coherence::Inconclusive { max_level },
        },
    };
    let dim = Cited::computed(d);
    let gl_dim_bound = Cited::cited(2 * d + 1, "gldim-upper-bound");
    let (coherent, gl_dim, w_dim, classification) = match (&coherence, d) {
        (Coherence::Coherent { .. }, 0) => (
            Some(true),
            Some(Cited::cited(0, "zero-dim-coherent")),
            Some(Cited::cited(0, "zero-dim-coherent")),
            None,
        ),
        (Coherence::Coherent { .. }, _) => (
            Some(true),
            Some(Cited::cited(d + 1, "gldim-coherent")),
            Some(Cited::cited(d, "wdim-coherent")),
            (d == 1).then(|| Cited::text("valuation ring", "curve-valuation-ring")),
        ),
        (Coherence::NotCoherent { .. }, 1) => (
            Some(false),
            Some(Cited::cited(3, "curve-noncoherent-gldim")),
            Some(Cited::cited(2, "curve-noncoherent-wdim")),
            None,
        ),
        (Coherence::NotCoherent { .. }, _) => (Some(false), None, None, None),
        (Coherence::Inconclusive { .. }, _) => (None, None, None, None),
    };
    Ok(ClassificationReport {
        ring: ring.to_string(),
        coherence,
        coherent,
        dim,
        gl_dim,
        w_dim,
        gl_dim_bound,
        classification,
        footnote: "cited dimensions are stated for complete local domains and are applied here to the affine curve as given".into(),
    })
}

impl Cited {
    pub fn is_cited(&self) -> bool {
        self.source == Provenance::Cited
    }
}
