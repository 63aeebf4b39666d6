//! Universal Witt addition and multiplication polynomials over ℤ.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::field::PrimeChar;

/// Sparse integer polynomial; exponent vectors index `X_0…X_{n−1}, Y_0…Y_{n−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPoly {
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn constant(c: BigInt, nvars: usize) -> Self {
        let mut p = IntPoly::zero();
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = IntPoly::zero();
        p.terms.insert(e, BigInt::one());
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        if k.is_zero() {
            return IntPoly::zero();
        }
        IntPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_default() += ca * cb;
            }
        }
        IntPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, mut e: u64, nvars: usize) -> IntPoly {
        let mut base = self.clone();
        let mut out = IntPoly::constant(BigInt::one(), nvars);
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Exact division by `k`, or `None` if some coefficient is not divisible.
    pub fn exact_div(&self, k: &BigInt) -> Option<IntPoly> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            terms.insert(e.clone(), q);
        }
        Some(IntPoly { terms })
    }

    pub fn eval_int(&self, point: &[BigInt]) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .sum()
    }
}

/// `w_i(Z) = Σ_{j≤i} p^j Z_j^{p^{i−j}}` for `Z_j` given as polynomials.
pub fn ghost_poly(z: &[IntPoly], i: usize, p: u64, nvars: usize) -> IntPoly {
    let mut out = IntPoly::zero();
    for (j, zj) in z.iter().enumerate().take(i + 1) {
        let pj = BigInt::from(p).pow(j as u32);
        out = out.add(&zj.pow(p.pow((i - j) as u32), nvars).scale(&pj));
    }
    out
}

/// `w_i` on integer coordinates.
pub fn ghost_int(a: &[BigInt], p: u64) -> Vec<BigInt> {
    (0..a.len())
        .map(|i| {
            (0..=i)
                .map(|j| BigInt::from(p).pow(j as u32) * num_traits::pow(a[j].clone(), p.pow((i - j) as u32) as usize))
                .sum()
        })
        .collect()
}

/// The sum and product polynomials `S_i, P_i` for `W_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittPolynomialCache {
    pub p: u64,
    pub n: usize,
    pub sum: Vec<IntPoly>,
    pub prod: Vec<IntPoly>,
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Mul,
}

fn solve_ghost(p: u64, n: usize, op: Op) -> Vec<IntPoly> {
    let nv = 2 * n;
    let xs: Vec<IntPoly> = (0..n).map(|i| IntPoly::var(i, nv)).collect();
    let ys: Vec<IntPoly> = (0..n).map(|i| IntPoly::var(n + i, nv)).collect();
    let mut out: Vec<IntPoly> = Vec::with_capacity(n);
    for i in 0..n {
        let wx = ghost_poly(&xs, i, p, nv);
        let wy = ghost_poly(&ys, i, p, nv);
        let mut target = match op {
            Op::Add => wx.add(&wy),
            Op::Mul => wx.mul(&wy),
        };
        for (j, sj) in out.iter().enumerate() {
            let pj = BigInt::from(p).pow(j as u32);
            target = target.sub(&sj.pow(p.pow((i - j) as u32), nv).scale(&pj));
        }
        let pi = BigInt::from(p).pow(i as u32);
        let next = target
            .exact_div(&pi)
            .unwrap_or_else(|| panic!("Witt polynomial {i} for p={p} is not integral"));
        out.push(next);
    }
    out
}

impl WittPolynomialCache {
    pub fn build(p: PrimeChar, n: usize) -> Self {
        let p = p.get();
        WittPolynomialCache {
            p,
            n,
            sum: solve_ghost(p, n, Op::Add),
            prod: solve_ghost(p, n, Op::Mul),
        }
    }

    /// `w_i(S) = w_i(X) + w_i(Y)` and `w_i(P) = w_i(X) w_i(Y)` for all `i`.
    pub fn verify_ghost_identities(&self) -> bool {
        let nv = 2 * self.n;
        let xs: Vec<IntPoly> = (0..self.n).map(|i| IntPoly::var(i, nv)).collect();
        let ys: Vec<IntPoly> = (0..self.n).map(|i| IntPoly::var(self.n + i, nv)).collect();
        (0..self.n).all(|i| {
            let wx = ghost_poly(&xs, i, self.p, nv);
            let wy = ghost_poly(&ys, i, self.p, nv);
            ghost_poly(&self.sum, i, self.p, nv) == wx.add(&wy)
                && ghost_poly(&self.prod, i, self.p, nv) == wx.mul(&wy)
        })
    }

    fn to_text(&self) -> String {
        let mut s = format!("perfchar-witt 1\np {}\nn {}\n", self.p, self.n);
        for (tag, polys) in [("S", &self.sum), ("P", &self.prod)] {
            for (i, f) in polys.iter().enumerate() {
                let _ = writeln!(s, "{tag} {i} {}", f.len());
                for (e, c) in f.terms() {
                    let _ = write!(s, "{c}");
                    for k in e {
                        let _ = write!(s, " {k}");
                    }
                    s.push('\n');
                }
            }
        }
        s
    }

    fn from_text(text: &str, p: u64, n: usize) -> Option<Self> {
        let mut lines = text.lines();
        if lines.next()? != "perfchar-witt 1" {
            return None;
        }
        if lines.next()? != format!("p {p}") || lines.next()? != format!("n {n}") {
            return None;
        }
        let mut read = |tag: &str| -> Option<Vec<IntPoly>> {
            let mut out = Vec::with_capacity(n);
            for i in 0..n {
                let head: Vec<&str> = lines.next()?.split(' ').collect();
                if head.len() != 3 || head[0] != tag || head[1].parse::<usize>().ok()? != i {
                    return None;
                }
                let count: usize = head[2].parse().ok()?;
                let mut f = IntPoly::zero();
                for _ in 0..count {
                    let mut parts = lines.next()?.split(' ');
                    let c: BigInt = parts.next()?.parse().ok()?;
                    let e: Vec<u32> = parts.map(|t| t.parse().ok()).collect::<Option<_>>()?;
                    if e.len() != 2 * n || c.is_zero() {
                        return None;
                    }
                    f.terms.insert(e, c);
                }
                out.push(f);
            }
            Some(out)
        };
        let sum = read("S")?;
        let prod = read("P")?;
        Some(WittPolynomialCache { p, n, sum, prod })
    }

    /// Sum of the absolute values of all coefficients, a cheap fingerprint.
    pub fn weight(&self) -> BigInt {
        self.sum
            .iter()
            .chain(&self.prod)
            .flat_map(|f| f.terms().map(|(_, c)| c.abs()))
            .sum()
    }
}

/// Directory for persisted polynomial tables.
pub fn cache_dir() -> Option<PathBuf> {
    match std::env::var_os("PERFCHAR_CACHE_DIR") {
        Some(d) if !d.is_empty() => Some(PathBuf::from(d)),
        _ => dirs::cache_dir().map(|d| d.join("perfchar")),
    }
}

fn cache_file(dir: &Path, p: u64, n: usize) -> PathBuf {
    dir.join(format!("witt-p{p}-n{n}.txt"))
}

type Registry = Mutex<HashMap<(u64, usize), Arc<WittPolynomialCache>>>;

fn registry() -> &'static Registry {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `S_i, P_i` for `(p, n)`, from memory, the disk cache in `dir`, or built.
pub fn witt_polys_in(p: PrimeChar, n: usize, dir: Option<&Path>) -> Arc<WittPolynomialCache> {
    let key = (p.get(), n);
    let mut reg = registry().lock().unwrap_or_else(|e| e.into_inner());
    if let Some(c) = reg.get(&key) {
        return c.clone();
    }
    let loaded = dir.and_then(|d| {
        let text = std::fs::read_to_string(cache_file(d, key.0, n)).ok()?;
        WittPolynomialCache::from_text(&text, key.0, n)
    });
    let cache = match loaded {
        Some(c) => c,
        None => {
            let c = WittPolynomialCache::build(p, n);
            if let Some(d) = dir {
                let _ = persist(&c, d);
            }
            c
        }
    };
    let cache = Arc::new(cache);
    reg.insert(key, cache.clone());
    cache
}

fn persist(c: &WittPolynomialCache, dir: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let target = cache_file(dir, c.p, c.n);
    let tmp = target.with_extension(format!("tmp{}", std::process::id()));
    std::fs::write(&tmp, c.to_text())?;
    std::fs::rename(tmp, target)
}

pub fn witt_polys(p: PrimeChar, n: usize) -> Arc<WittPolynomialCache> {
    witt_polys_in(p, n, cache_dir().as_deref())
}
