//! Complexes of free modules over level rings and their (co)homology.

mod grade;
mod perfect;
mod resolution;

pub use grade::{cech_grade, ext_grade, koszul_complex, koszul_grade, GradeMethod, GradeResult, CECH_WINDOW};
pub use perfect::{
    perfection_pdim_bound, resolution_truncation, resolution_exactness_witness, tensor_total_complex,
    vanish_check, PdimReport, ResolutionTruncation, VanishReport, Witness,
};
pub use resolution::{ext, free_resolution, tor, ExtResult, TorResult};
pub(crate) use perfect::random_element;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gb::{Ctx, Mat, Poly, Quotient};
use crate::perfpoly::PerfPoly;
use crate::ring::{LevelRing, RelationMode, RingFile, RingPresentation};

/// Row-major matrix of ring elements.
pub type Matrix = Vec<Vec<PerfPoly>>;

/// `F_N → … → F_1 → F_0` with `d_i : F_i → F_{i−1}` of shape `r_{i−1} × r_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeComplex {
    ring: LevelRing,
    ranks: Vec<usize>,
    differentials: Vec<Matrix>,
}

impl FreeComplex {
    /// `differentials[i]` is `d_{i+1}`.
    pub fn new(ring: LevelRing, ranks: Vec<usize>, differentials: Vec<Matrix>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::Mismatch("a complex needs at least one module".into()));
        }
        if differentials.len() + 1 != ranks.len() {
            return Err(Error::Mismatch(format!(
                "{} ranks need {} differentials, got {}",
                ranks.len(),
                ranks.len() - 1,
                differentials.len()
            )));
        }
        for (i, d) in differentials.iter().enumerate() {
            let (rows, cols) = (ranks[i], ranks[i + 1]);
            if d.len() != rows || d.iter().any(|row| row.len() != cols) {
                return Err(Error::Mismatch(format!("d_{} is not {}x{}", i + 1, rows, cols)));
            }
            for f in d.iter().flatten() {
                if f.char() != ring.char() {
                    return Err(Error::CharMismatch(f.char().get(), ring.char().get()));
                }
                if f.vars() != ring.vars() {
                    return Err(Error::VariableMismatch);
                }
                if f.level_of() > ring.level() {
                    return Err(Error::LevelTooLow {
                        have: f.level_of(),
                        ring: ring.level(),
                    });
                }
            }
        }
        Ok(FreeComplex {
            ring,
            ranks,
            differentials,
        })
    }

    pub fn ring(&self) -> &LevelRing {
        &self.ring
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn length(&self) -> usize {
        self.ranks.len() - 1
    }

    /// `d_i`, for `1 ≤ i ≤ length`.
    pub fn differential(&self, i: usize) -> &Matrix {
        &self.differentials[i - 1]
    }

    pub fn differentials(&self) -> &[Matrix] {
        &self.differentials
    }

    /// Same differentials viewed over another level (or mode) of the ring.
    pub fn with_ring(&self, ring: LevelRing) -> Result<Self> {
        FreeComplex::new(ring, self.ranks.clone(), self.differentials.clone())
    }

    pub fn to_json(&self) -> Result<String> {
        let file = ComplexFile {
            ring: self.ring.base().to_file(),
            level: self.ring.level(),
            literal: self.ring.mode() == RelationMode::Literal,
            ranks: self.ranks.clone(),
            differentials: self
                .differentials
                .iter()
                .map(|d| d.iter().flatten().map(|f| f.to_string()).collect())
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ComplexFile = serde_json::from_str(text)?;
        let base = RingPresentation::from_file(&file.ring)?;
        let mut ring = base.level(file.level);
        if file.literal {
            ring = ring.with_mode(RelationMode::Literal);
        }
        if file.differentials.len() + 1 != file.ranks.len() {
            return Err(Error::Mismatch("differential count does not match ranks".into()));
        }
        let mut diffs = Vec::new();
        for (i, entries) in file.differentials.iter().enumerate() {
            let (rows, cols) = (file.ranks[i], file.ranks[i + 1]);
            if entries.len() != rows * cols {
                return Err(Error::Mismatch(format!("d_{} has {} entries", i + 1, entries.len())));
            }
            let parsed = entries
                .iter()
                .map(|e| base.parse_element(e))
                .collect::<Result<Vec<_>>>()?;
            diffs.push(parsed.chunks(cols.max(1)).take(rows).map(|r| r[..cols].to_vec()).collect());
        }
        FreeComplex::new(ring, file.ranks, diffs)
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexFile {
    ring: RingFile,
    level: u32,
    #[serde(default)]
    literal: bool,
    ranks: Vec<usize>,
    differentials: Vec<Vec<String>>,
}

/// Product of two matrices with exact perfect-closure arithmetic.
pub fn mat_mul(a: &Matrix, b: &Matrix, cols_b: usize, zero: &PerfPoly) -> Matrix {
    a.iter()
        .map(|row| {
            (0..cols_b)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(zero.clone(), |acc, (x, brow)| &acc + &(x * &brow[j]))
                })
                .collect()
        })
        .collect()
}

/// First `i` with `d_{i−1} ∘ d_i ≠ 0` in the ring, or `None` when the
/// sequence is a complex.
pub fn complex_check(c: &FreeComplex) -> Result<Option<usize>> {
    let zero = c.ring.base().zero();
    for i in 2..=c.length() {
        let prod = mat_mul(c.differential(i - 1), c.differential(i), c.ranks[i], &zero);
        for f in prod.iter().flatten() {
            if !f.is_zero() && !c.ring.is_zero(f)? {
                return Ok(Some(i));
            }
        }
    }
    Ok(None)
}

pub(crate) fn to_mat(m: &Matrix, rows: usize, cols: usize, ring: &LevelRing, ctx: &Ctx) -> Result<Mat> {
    let mut out = Mat::zeros(rows, cols);
    for (i, row) in m.iter().enumerate() {
        for (j, f) in row.iter().enumerate() {
            out.set(i, j, ring.to_internal(f, ctx)?);
        }
    }
    Ok(out)
}

pub(crate) fn vector_from_internal(v: &Poly, rank: usize, ring: &LevelRing, ctx: &Ctx) -> Vec<PerfPoly> {
    (0..rank)
        .map(|j| ring.from_internal(&v.component(j as u32, ctx)))
        .collect()
}

/// `ker(a)/im(b)` over `q`, with `a : S^c → S^r` and `b : S^k → S^c`.
pub(crate) fn subquotient(
    q: &Quotient,
    a: &Matrix,
    a_rows: usize,
    b: &Matrix,
    b_cols: usize,
    c: usize,
    ring: &LevelRing,
) -> Result<crate::gb::Subquotient> {
    let am = to_mat(a, a_rows, c, ring, &q.ctx)?;
    let bm = to_mat(b, c, b_cols, ring, &q.ctx)?;
    let am = if a_rows == 0 { Mat::zeros(0, c) } else { am };
    q.homology(&am, &bm)
}

pub(crate) fn transpose(m: &Matrix, rows: usize, cols: usize) -> Matrix {
    (0..cols)
        .map(|j| (0..rows).map(|i| m[i][j].clone()).collect())
        .collect()
}
