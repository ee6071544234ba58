//! Partitions, weights, Bott's exchange rule, Littlewood–Richardson products
//! and Weyl dimensions.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

type Parts = SmallVec<[u16; 8]>;

/// A partition with trailing zeros removed.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", try_from = "Vec<usize>")]
pub struct Partition {
    parts: Parts,
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Graded order: by size, then lexicographically on the parts.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size().cmp(&other.size()).then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.to_vec()
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(&v)
    }
}

impl Partition {
    pub fn empty() -> Self {
        Partition::default()
    }

    /// Fails unless `parts` is non-increasing.
    pub fn new(parts: &[usize]) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::input(format!("{parts:?} is not non-increasing")));
        }
        if parts.iter().any(|&p| p > u16::MAX as usize) {
            return Err(Error::input("partition part too large"));
        }
        Ok(Self::from_sorted(parts.iter().map(|&p| p as u16)))
    }

    fn from_sorted(parts: impl IntoIterator<Item = u16>) -> Self {
        let mut parts: Parts = parts.into_iter().collect();
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition { parts }
    }

    /// The single-row partition `(k)`, or empty for `k = 0`.
    pub fn row(k: usize) -> Self {
        Self::from_sorted([k as u16])
    }

    /// The rectangle with `rows` rows of length `cols`.
    pub fn rectangle(rows: usize, cols: usize) -> Self {
        Self::from_sorted(std::iter::repeat_n(cols as u16, rows))
    }

    pub fn parts(&self) -> &[u16] {
        &self.parts
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.parts.iter().map(|&p| p as usize).collect()
    }

    /// Part `i` (0-indexed), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).map_or(0, |&p| p as usize)
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.part(0);
        let mut out = Parts::with_capacity(first);
        for c in 0..first {
            out.push(self.parts.iter().take_while(|&&p| p as usize > c).count() as u16);
        }
        Partition { parts: out }
    }

    /// Side of the largest square inside the diagram.
    pub fn durfee(&self) -> usize {
        self.parts.iter().enumerate().take_while(|&(i, &p)| p as usize > i).count()
    }

    /// `(λ⁺, λ⁻)`: the part right of the Durfee square and the part below it.
    pub fn split_plus_minus(&self) -> (Partition, Partition) {
        let u = self.durfee();
        let plus = Self::from_sorted(self.parts[..u].iter().map(|&p| p - u as u16));
        let minus = Self::from_sorted(self.parts[u..].iter().copied());
        (plus, minus)
    }

    pub fn fits(&self, rows: usize, cols: usize) -> bool {
        self.len() <= rows && self.part(0) <= cols
    }

    /// Entrywise containment of diagrams.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.parts.iter().zip(&self.parts).all(|(a, b)| a <= b)
    }

    /// The weight `(λ_1, …, λ_n)` padded with zeros to `n` entries.
    pub fn padded(&self, n: usize) -> Vec<i64> {
        assert!(self.len() <= n, "partition {self} has more than {n} parts");
        (0..n).map(|i| self.part(i) as i64).collect()
    }

    /// All partitions inside the `rows × cols` box, in graded order.
    pub fn in_box(rows: usize, cols: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(rows);
        fn rec(rows: usize, max: usize, cur: &mut Vec<u16>, out: &mut Vec<Partition>) {
            out.push(Partition::from_sorted(cur.iter().copied()));
            if cur.len() == rows {
                return;
            }
            for p in 1..=max {
                cur.push(p as u16);
                rec(rows, p, cur, out);
                cur.pop();
            }
        }
        rec(rows, cols, &mut cur, &mut out);
        out.sort();
        out
    }

    /// Partitions of `n` with at most `rows` parts, each at most `cols`.
    pub fn of_size_in_box(n: usize, rows: usize, cols: usize) -> Vec<Partition> {
        Partition::in_box(rows, cols).into_iter().filter(|p| p.size() == n).collect()
    }
}

/// Applies exchanges `σ_i·δ = (…, δ_{i+1} − 1, δ_i + 1, …)` until `δ` is
/// non-increasing. Returns `None` when some exchange is a fixed point.
pub fn normalize_weight_exchange(d: &[i64]) -> Option<(usize, Vec<i64>)> {
    let mut w = d.to_vec();
    let mut count = 0;
    loop {
        let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| w[i] < w[i + 1]) else {
            return Some((count, w));
        };
        if w[i + 1] == w[i] + 1 {
            return None;
        }
        let (a, b) = (w[i], w[i + 1]);
        w[i] = b - 1;
        w[i + 1] = a + 1;
        count += 1;
    }
}

/// Same result as [`normalize_weight_exchange`], via the shift `δ + ρ`: the
/// weight is singular iff the shifted entries repeat, `N` counts inversions.
pub fn normalize_weight(d: &[i64]) -> Option<(usize, Vec<i64>)> {
    let n = d.len();
    let mut shifted: SmallVec<[i64; 12]> = d.iter().enumerate().map(|(i, &v)| v + (n - 1 - i) as i64).collect();
    let mut inversions = 0;
    for i in 0..n {
        for j in i + 1..n {
            match shifted[i].cmp(&shifted[j]) {
                Ordering::Less => inversions += 1,
                Ordering::Equal => return None,
                Ordering::Greater => {}
            }
        }
    }
    shifted.sort_unstable_by(|a, b| b.cmp(a));
    let tau = shifted.iter().enumerate().map(|(i, &v)| v - (n - 1 - i) as i64).collect();
    Some((inversions, tau))
}

/// `Π_{i<j} (d_i − d_j + j − i)/(j − i)` as an exact signed integer. On a
/// non-increasing weight this is the dimension of `S_d k^n`; on an arbitrary
/// weight it is the signed Euler characteristic from Bott's theorem.
pub fn weyl_poly(d: &[i64]) -> BigInt {
    let n = d.len();
    let (mut num, mut den) = (1i128, 1i128);
    let mut overflow = false;
    'outer: for i in 0..n {
        for j in i + 1..n {
            let f = (d[i] - d[j]) as i128 + (j - i) as i128;
            if f == 0 {
                return BigInt::from(0);
            }
            match num.checked_mul(f) {
                Some(v) => num = v,
                None => {
                    overflow = true;
                    break 'outer;
                }
            }
            den *= (j - i) as i128;
            let g = num.gcd(&den);
            num /= g;
            den /= g;
        }
    }
    if !overflow {
        debug_assert_eq!(den, 1);
        return BigInt::from(num / den);
    }
    let (mut num, mut den) = (BigInt::one(), BigInt::one());
    for i in 0..n {
        for j in i + 1..n {
            num *= BigInt::from(d[i] - d[j] + (j - i) as i64);
            den *= BigInt::from((j - i) as i64);
        }
    }
    num / den
}

/// Dimension of the irreducible `GL_n`-module of highest weight `tau`.
pub fn weyl_dim(tau: &[i64], n: usize) -> Result<BigInt> {
    if tau.len() != n {
        return Err(Error::input(format!("weight has {} entries, expected {n}", tau.len())));
    }
    if tau.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::input(format!("weight {tau:?} is not non-increasing")));
    }
    Ok(weyl_poly(tau))
}

/// [`weyl_dim`] as a machine integer, for callers that tally many terms.
pub fn weyl_dim_u128(tau: &[i64]) -> Option<u128> {
    let v = weyl_poly(tau);
    if v.is_negative() {
        return None;
    }
    v.to_u128()
}

type LrKey = (Partition, Partition, usize);
type LrTable = FxHashMap<LrKey, Vec<(Partition, u64)>>;

fn lr_cache() -> &'static Mutex<LrTable> {
    static CACHE: OnceLock<Mutex<LrTable>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(FxHashMap::default()))
}

const LR_CACHE_LIMIT: usize = 1 << 20;

/// Littlewood–Richardson product `s_λ · s_μ` restricted to at most
/// `row_bound` rows, in graded order.
pub fn lr_product(lambda: &Partition, mu: &Partition, row_bound: usize) -> Vec<(Partition, u64)> {
    if mu.is_empty() {
        return if lambda.len() <= row_bound { vec![(lambda.clone(), 1)] } else { Vec::new() };
    }
    if lambda.is_empty() {
        return if mu.len() <= row_bound { vec![(mu.clone(), 1)] } else { Vec::new() };
    }
    // the product is commutative, so cache on the ordered pair
    let (a, b) = if lambda <= mu { (lambda, mu) } else { (mu, lambda) };
    let key = (a.clone(), b.clone(), row_bound);
    if let Some(v) = lr_cache().lock().expect("lr cache poisoned").get(&key) {
        return v.clone();
    }
    // adding the longer partition's boxes tends to branch less
    let (base, added) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let result = lr_product_uncached(base, added, row_bound);
    let mut cache = lr_cache().lock().expect("lr cache poisoned");
    if cache.len() >= LR_CACHE_LIMIT {
        cache.clear();
    }
    cache.insert(key, result.clone());
    result
}

fn lr_product_uncached(lambda: &Partition, mu: &Partition, row_bound: usize) -> Vec<(Partition, u64)> {
    if lambda.len() > row_bound || mu.len() > row_bound {
        return Vec::new();
    }
    let mut acc: FxHashMap<Partition, u64> = FxHashMap::default();
    let shape: Vec<u16> = (0..row_bound).map(|i| lambda.part(i) as u16).collect();
    let prev_counts = vec![0u16; row_bound];
    let mut st = LrState { mu: mu.parts(), row_bound, acc: &mut acc };
    st.add_label(0, &shape, &prev_counts);
    let mut out: Vec<(Partition, u64)> = acc.into_iter().collect();
    out.sort();
    out
}

struct LrState<'a> {
    mu: &'a [u16],
    row_bound: usize,
    acc: &'a mut FxHashMap<Partition, u64>,
}

impl LrState<'_> {
    /// Places `mu[k]` boxes labelled `k` as a horizontal strip on `shape`,
    /// keeping the reading word a lattice word against `prev` (row counts of label `k - 1`).
    fn add_label(&mut self, k: usize, shape: &[u16], prev: &[u16]) {
        if k == self.mu.len() {
            *self.acc.entry(Partition::from_sorted(shape.iter().copied())).or_insert(0) += 1;
            return;
        }
        let mut new_shape = shape.to_vec();
        let mut counts = vec![0u16; self.row_bound];
        self.place_row(k, 0, self.mu[k], 0, 0, shape, prev, &mut new_shape, &mut counts);
    }

    #[allow(clippy::too_many_arguments)]
    fn place_row(
        &mut self,
        k: usize,
        r: usize,
        remaining: u16,
        placed_before: u16,
        prev_before: u16,
        shape: &[u16],
        prev: &[u16],
        new_shape: &mut Vec<u16>,
        counts: &mut Vec<u16>,
    ) {
        if remaining == 0 {
            for c in counts[r..].iter_mut() {
                *c = 0;
            }
            new_shape[r..].copy_from_slice(&shape[r..]);
            let next_shape = new_shape.clone();
            let next_prev = counts.clone();
            self.add_label(k + 1, &next_shape, &next_prev);
            return;
        }
        if r == self.row_bound {
            return;
        }
        // horizontal strip: the new row may not exceed the old row above it
        let cap_strip = if r == 0 { remaining } else { (shape[r - 1] - shape[r]).min(remaining) };
        let cap_lattice = if k == 0 {
            remaining
        } else {
            // Σ_{s≤r} a_{s,k} ≤ Σ_{s<r} a_{s,k-1}
            (prev_before.saturating_sub(placed_before)).min(remaining)
        };
        let cap = cap_strip.min(cap_lattice);
        for c in (0..=cap).rev() {
            new_shape[r] = shape[r] + c;
            counts[r] = c;
            self.place_row(
                k,
                r + 1,
                remaining - c,
                placed_before + c,
                prev_before + prev[r],
                shape,
                prev,
                new_shape,
                counts,
            );
        }
    }
}

/// Iterated product of all `ps`, keeping only partitions with at most `row_bound` rows.
pub fn lr_expand(ps: &[Partition], row_bound: usize) -> Vec<(Partition, u64)> {
    let mut acc: Vec<(Partition, u64)> = vec![(Partition::empty(), 1)];
    for p in ps {
        if p.is_empty() {
            continue;
        }
        let mut next: FxHashMap<Partition, u64> = FxHashMap::default();
        for (q, m) in &acc {
            for (r, c) in lr_product(q, p, row_bound) {
                *next.entry(r).or_insert(0) += m * c;
            }
        }
        acc = next.into_iter().collect();
        if acc.is_empty() {
            break;
        }
    }
    acc.sort();
    acc
}
