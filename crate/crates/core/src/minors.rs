//! Exact evaluation of minor families at representations and symbolic
//! expansion of small minors in the arrow variables `x[a][i][j]`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Scalar;
use crate::rep::Representation;
use crate::typea::{BlockMatrixSpec, MinorFamily};

/// Largest number of minors a single family check will enumerate.
pub const DEFAULT_MINOR_CAP: u128 = 200_000;

/// Largest minor size expanded symbolically.
pub const MAX_EXPANDED_SIZE: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinorCheck {
    Vanishes,
    Nonzero { rows: Vec<usize>, cols: Vec<usize>, value: Scalar },
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of minors in a family at dimension vector `alpha`.
pub fn family_minor_count(f: &MinorFamily, alpha: &[usize]) -> u128 {
    let cols = f.sources.iter().zip(&f.column_counts).map(|(&x, &c)| binomial(alpha[x - 1], c));
    let rows = f.sinks.iter().zip(&f.row_counts).map(|(&y, &r)| binomial(alpha[y - 1], r));
    cols.chain(rows).product()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All index selections picking `counts[i]` indices from block `i`, as
/// absolute positions given the block offsets.
fn selections(offsets: &[usize], counts: &[usize]) -> Vec<Vec<usize>> {
    let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
    for (i, &c) in counts.iter().enumerate() {
        let width = offsets[i + 1] - offsets[i];
        let choices = combinations(width, c);
        let mut next = Vec::with_capacity(acc.len() * choices.len());
        for a in &acc {
            for ch in &choices {
                let mut v = a.clone();
                v.extend(ch.iter().map(|j| offsets[i] + j));
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

/// Decides whether every minor of the family vanishes at `x`; a nonzero
/// minor is returned as a witness.
pub fn check_family(spec: &BlockMatrixSpec, f: &MinorFamily, x: &Representation, cap: u128) -> Result<MinorCheck> {
    let dim = x.dim();
    if !f.fits(dim) {
        return Ok(MinorCheck::Vanishes);
    }
    let m = spec.evaluate(x);
    if m.rank() < f.size {
        return Ok(MinorCheck::Vanishes);
    }
    let count = family_minor_count(f, dim);
    if count > cap {
        return Err(Error::DeskScale(format!("family at {} has {count} minors, cap {cap}", f.root)));
    }
    let rows = selections(&spec.row_offsets(dim), &f.row_counts);
    let cols = selections(&spec.col_offsets(dim), &f.column_counts);
    for r in &rows {
        for c in &cols {
            let d = m.submatrix(r, c).determinant();
            if !d.is_zero() {
                return Ok(MinorCheck::Nonzero { rows: r.clone(), cols: c.clone(), value: d });
            }
        }
    }
    Ok(MinorCheck::Vanishes)
}

/// Variable `x[arrow][row][col]`, all indices from 1 when printed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub arrow: u16,
    pub row: u16,
    pub col: u16,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x[{}][{}][{}]", self.arrow + 1, self.row + 1, self.col + 1)
    }
}

/// Integer polynomial; monomials are sorted variable lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    pub terms: BTreeMap<Vec<Var>, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: i64) -> Self {
        let mut p = Polynomial::zero();
        if c != 0 {
            p.terms.insert(Vec::new(), BigInt::from(c));
        }
        p
    }

    pub fn var(v: Var) -> Self {
        let mut p = Polynomial::zero();
        p.terms.insert(vec![v], BigInt::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.len()).max()
    }

    fn add_term(&mut self, mono: Vec<Var>, c: BigInt) {
        let e = self.terms.entry(mono).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut m: Vec<Var> = m1.iter().chain(m2).copied().collect();
                m.sort_unstable();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    /// Evaluates at a representation's matrices.
    pub fn evaluate(&self, x: &Representation) -> Scalar {
        let mut total = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = Scalar::from_integer(c.clone());
            for v in m {
                t *= x.map(v.arrow as usize).get(v.row as usize, v.col as usize);
            }
            total += t;
        }
        total
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let vars: Vec<String> = m.iter().map(|v| v.to_string()).collect();
            if m.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{a}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

type PolyMatrix = Vec<Vec<Polynomial>>;

fn symbolic_arrow(a: usize, rows: usize, cols: usize) -> PolyMatrix {
    (0..rows)
        .map(|i| (0..cols).map(|j| Polynomial::var(Var { arrow: a as u16, row: i as u16, col: j as u16 })).collect())
        .collect()
}

fn poly_mul(a: &PolyMatrix, b: &PolyMatrix, inner: usize) -> PolyMatrix {
    let rows = a.len();
    let cols = b.first().map_or(0, |r| r.len());
    (0..rows)
        .map(|i| {
            (0..cols).map(|j| (0..inner).fold(Polynomial::zero(), |acc, k| acc.add(&a[i][k].mul(&b[k][j])))).collect()
        })
        .collect()
}

/// `X_{p,q}` with symbolic entries; composite blocks are expanded products.
pub fn symbolic_block_matrix(spec: &BlockMatrixSpec, q: &crate::quiver::Quiver, alpha: &[usize]) -> PolyMatrix {
    let ro = spec.row_offsets(alpha);
    let co = spec.col_offsets(alpha);
    let mut m = vec![vec![Polynomial::zero(); *co.last().unwrap()]; *ro.last().unwrap()];
    for b in &spec.blocks {
        let src = spec.sources[b.col];
        let mut acc: PolyMatrix = (0..alpha[src - 1])
            .map(|i| (0..alpha[src - 1]).map(|j| Polynomial::constant(i64::from(i == j))).collect())
            .collect();
        let mut width = alpha[src - 1];
        for &a in &b.arrows {
            let (t, h) = q.arrows()[a];
            let xa = symbolic_arrow(a, alpha[h - 1], alpha[t - 1]);
            acc = poly_mul(&xa, &acc, width);
            width = alpha[h - 1];
        }
        for (i, row) in acc.into_iter().enumerate() {
            for (j, p) in row.into_iter().enumerate() {
                m[ro[b.row] + i][co[b.col] + j] = p;
            }
        }
    }
    m
}

/// Determinant by expansion over column subsets.
pub fn symbolic_determinant(m: &PolyMatrix) -> Polynomial {
    let n = m.len();
    let mut memo: BTreeMap<(usize, u64), Polynomial> = BTreeMap::new();
    fn rec(k: usize, used: u64, m: &PolyMatrix, memo: &mut BTreeMap<(usize, u64), Polynomial>) -> Polynomial {
        let n = m.len();
        if k == n {
            return Polynomial::constant(1);
        }
        if let Some(p) = memo.get(&(k, used)) {
            return p.clone();
        }
        let mut total = Polynomial::zero();
        let mut sign_pos = true;
        for j in 0..n {
            if used >> j & 1 == 1 {
                continue;
            }
            if !m[k][j].is_zero() {
                let sub = rec(k + 1, used | 1 << j, m, memo);
                let t = m[k][j].mul(&sub);
                total = total.add(&if sign_pos { t } else { t.neg() });
            }
            sign_pos = !sign_pos;
        }
        memo.insert((k, used), total.clone());
        total
    }
    if n == 0 {
        return Polynomial::constant(1);
    }
    rec(0, 0, m, &mut memo)
}

/// Every minor of the family as an expanded polynomial.
pub fn expand_family(
    spec: &BlockMatrixSpec,
    f: &MinorFamily,
    q: &crate::quiver::Quiver,
    alpha: &[usize],
    cap: u128,
) -> Result<Vec<Polynomial>> {
    if f.size > MAX_EXPANDED_SIZE {
        return Err(Error::DeskScale(format!(
            "minors of size {} exceed the expansion limit {MAX_EXPANDED_SIZE}",
            f.size
        )));
    }
    if !f.fits(alpha) {
        return Ok(Vec::new());
    }
    let count = family_minor_count(f, alpha);
    if count > cap {
        return Err(Error::DeskScale(format!("family at {} has {count} minors, cap {cap}", f.root)));
    }
    let m = symbolic_block_matrix(spec, q, alpha);
    let rows = selections(&spec.row_offsets(alpha), &f.row_counts);
    let cols = selections(&spec.col_offsets(alpha), &f.column_counts);
    let mut out = Vec::with_capacity(rows.len() * cols.len());
    for r in &rows {
        for c in &cols {
            let sub: PolyMatrix = r.iter().map(|&i| c.iter().map(|&j| m[i][j].clone()).collect()).collect();
            out.push(symbolic_determinant(&sub));
        }
    }
    Ok(out)
}
