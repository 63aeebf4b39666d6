use serde::Serialize;

use super::resolution::{cohomology, free_resolution};
use super::{subquotient, to_mat, transpose, FreeComplex, Matrix};
use crate::error::Result;
use crate::gb::{normal_form, Mat, Poly};
use crate::perfpoly::PerfPoly;
use crate::ring::{IdealHandle, LevelRing};

/// Default power window for Čech cohomology classes.
pub const CECH_WINDOW: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GradeMethod {
    Koszul,
    Cech,
    Ext,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradeResult {
    /// `None` encodes `+∞` (all checked cohomology vanishes).
    pub value: Option<usize>,
    pub window: usize,
    pub method: GradeMethod,
    /// The value is only a lower bound established inside the window.
    pub lower_bound: bool,
}

impl GradeResult {
    pub fn display_value(&self) -> String {
        match (self.value, self.lower_bound) {
            (Some(v), false) => v.to_string(),
            (Some(v), true) => format!(">={v}"),
            (None, _) => "inf".into(),
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Koszul complex with basis the lexicographically ordered subsets and
/// `d(e_σ) = Σ_k (−1)^k x_{σ_k} e_{σ∖σ_k}`.
pub fn koszul_complex(seq: &[PerfPoly], ring: &LevelRing) -> Result<FreeComplex> {
    let n = seq.len();
    let bases: Vec<Vec<Vec<usize>>> = (0..=n).map(|k| subsets(n, k)).collect();
    let zero = ring.base().zero();
    let mut diffs = Vec::new();
    for k in 1..=n {
        let rows = &bases[k - 1];
        let cols = &bases[k];
        let mut d: Matrix = vec![vec![zero.clone(); cols.len()]; rows.len()];
        for (j, sigma) in cols.iter().enumerate() {
            for (pos, &v) in sigma.iter().enumerate() {
                let mut tau = sigma.clone();
                tau.remove(pos);
                let i = rows.binary_search(&tau).expect("face present");
                d[i][j] = if pos % 2 == 0 { seq[v].clone() } else { -&seq[v] };
            }
        }
        diffs.push(d);
    }
    FreeComplex::new(ring.clone(), bases.iter().map(|b| b.len()).collect(), diffs)
}

fn check_ring(seq: &[PerfPoly], module: &IdealHandle) -> Result<()> {
    // constructing the ideal validates characteristic, variables and level
    module.ring().ideal(seq.to_vec()).map(|_| ())
}

fn unit_sum(seq: &[PerfPoly], module: &IdealHandle) -> Result<bool> {
    let mut gens = seq.to_vec();
    gens.extend(module.generators().iter().cloned());
    let ideal = module.ring().ideal(gens)?;
    Ok(crate::ideal::groebner(&ideal, crate::gb::TermOrder::Grevlex)?.is_unit())
}

/// Least `i` with `H^i(Hom(K(seq), ring/J)) ≠ 0`.
pub fn koszul_grade(seq: &[PerfPoly], module: &IdealHandle) -> Result<GradeResult> {
    check_ring(seq, module)?;
    let n = seq.len();
    let result = |value| GradeResult {
        value,
        window: n,
        method: GradeMethod::Koszul,
        lower_bound: false,
    };
    if unit_sum(seq, module)? {
        return Ok(result(None));
    }
    let k = koszul_complex(seq, module.ring())?;
    let q = module.ring().quotient_over(module.generators())?;
    for i in 0..=n {
        if !cohomology(&k, &q, i)?.is_zero() {
            return Ok(result(Some(i)));
        }
    }
    // unreachable when the sum is proper: H^n = M/(seq)M
    Ok(result(None))
}

/// Least `i` whose Čech cohomology carries a class seen at power 1 that
/// survives to power `window` in the direct system `H^i(x^t; M)`.
pub fn cech_grade(seq: &[PerfPoly], module: &IdealHandle, window: u32) -> Result<GradeResult> {
    check_ring(seq, module)?;
    let n = seq.len();
    let window = window.max(1);
    let mut result = GradeResult {
        value: None,
        window: window as usize,
        method: GradeMethod::Cech,
        lower_bound: false,
    };
    if unit_sum(seq, module)? {
        return Ok(result);
    }
    let ring = module.ring();
    let q = ring.quotient_over(module.generators())?;
    let ctx = q.ctx.clone();
    let k1 = koszul_complex(seq, ring)?;
    let powered: Vec<PerfPoly> = seq.iter().map(|f| f.pow_u64(window as u64)).collect();
    let kt = koszul_complex(&powered, ring)?;
    let shifts: Vec<Poly> = seq
        .iter()
        .map(|f| ring.to_internal(&f.pow_u64(window as u64 - 1), &ctx))
        .collect::<Result<_>>()?;
    for i in 0..=n {
        let sq = cochain_subquotient(&k1, &q, i)?;
        if sq.is_zero() {
            continue;
        }
        let basis = subsets(n, i);
        let c = basis.len();
        let boundaries_t = cochain_boundaries(&kt, i, &ctx)?;
        let boundaries_1 = cochain_boundaries(&k1, i, &ctx)?;
        let gb_t = q.module_gb(&boundaries_t, c)?;
        let gb_1 = q.module_gb(&boundaries_1, c)?;
        for z in &sq.cycles {
            if normal_form(z, &gb_1, &ctx).is_zero() {
                continue;
            }
            let mut image = Poly::zero();
            for (s, sigma) in basis.iter().enumerate() {
                let mut comp = z.component(s as u32, &ctx);
                for &v in sigma {
                    comp = comp.mul(&shifts[v], &ctx);
                }
                image = image.add(&comp.with_comp(s as u32), &ctx);
            }
            if !normal_form(&image, &gb_t, &ctx).is_zero() {
                result.value = Some(i);
                return Ok(result);
            }
        }
    }
    result.lower_bound = true;
    result.value = Some(n + 1);
    Ok(result)
}

fn cochain_subquotient(k: &FreeComplex, q: &crate::gb::Quotient, i: usize) -> Result<crate::gb::Subquotient> {
    let ring = k.ring();
    let ranks = k.ranks();
    let c = ranks[i];
    let (a, a_rows) = if i < k.length() {
        (transpose(k.differential(i + 1), ranks[i], ranks[i + 1]), ranks[i + 1])
    } else {
        (Vec::new(), 0)
    };
    let (b, b_cols) = if i == 0 {
        (vec![Vec::new(); c], 0)
    } else {
        (transpose(k.differential(i), ranks[i - 1], ranks[i]), ranks[i - 1])
    };
    subquotient(q, &a, a_rows, &b, b_cols, c, ring)
}

/// Columns of `d^{i−1} = d_i^T` as vectors in `K^i`.
fn cochain_boundaries(k: &FreeComplex, i: usize, ctx: &crate::gb::Ctx) -> Result<Vec<Poly>> {
    if i == 0 {
        return Ok(Vec::new());
    }
    let ranks = k.ranks();
    let t = transpose(k.differential(i), ranks[i - 1], ranks[i]);
    let m: Mat = to_mat(&t, ranks[i], ranks[i - 1], k.ring(), ctx)?;
    Ok((0..m.cols).map(|j| m.column_vector(j, 0, ctx)).collect())
}

/// Least `i` with `Ext^i(ring/I, ring/J) ≠ 0`, checked up to the number of
/// generators of `I`.
pub fn ext_grade(ideal: &IdealHandle, module: &IdealHandle) -> Result<GradeResult> {
    if ideal.ring() != module.ring() {
        return Err(crate::error::Error::Mismatch("ideal and module over different rings".into()));
    }
    let window = ideal.generators().len();
    let mut result = GradeResult {
        value: None,
        window,
        method: GradeMethod::Ext,
        lower_bound: false,
    };
    if unit_sum(ideal.generators(), module)? {
        return Ok(result);
    }
    let f = free_resolution(ideal, window + 1)?;
    let q = ideal.ring().quotient_over(module.generators())?;
    for i in 0..=window.min(f.length()) {
        if !cohomology(&f, &q, i)?.is_zero() {
            result.value = Some(i);
            return Ok(result);
        }
    }
    result.value = Some(window.min(f.length()) + 1);
    result.lower_bound = true;
    Ok(result)
}
