//! Terms of the complex `F_•` resolving a one-step orbit closure.
//!
//! `∧^t ξ` with `ξ = ⊕_a R_ta ⊗ Q*_ha` decomposes by Cauchy's formula into
//! summands indexed by partition collections; Bott's theorem on each
//! Grassmannian factor places every summand in a single homological degree.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::bott::bott_weight;
use crate::error::{Error, Result};
use crate::partitions::{lr_expand, normalize_weight, weyl_poly, Partition};
use crate::quiver::{DimensionVector, Quiver, QuiverClass};

/// Default cap on the number of enumerated collections.
pub const DEFAULT_MAX_COLLECTIONS: usize = 10_000_000;

/// Box size above which the partial pruning table is not built.
const PRUNE_TABLE_LIMIT: usize = 1_000_000;

/// The bundle `ξ` over `Gr(β, α)` for `α = β + γ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BundleSpec {
    pub quiver: Quiver,
    pub beta: DimensionVector,
    pub gamma: DimensionVector,
}

impl BundleSpec {
    pub fn new(quiver: Quiver, beta: DimensionVector, gamma: DimensionVector) -> Result<Self> {
        quiver.check_dim(&beta)?;
        quiver.check_dim(&gamma)?;
        Ok(BundleSpec { quiver, beta, gamma })
    }

    /// Builds a bundle spec from `α` and a sub-dimension vector `β ≤ α`.
    pub fn from_alpha_beta(quiver: Quiver, alpha: &[usize], beta: &[usize]) -> Result<Self> {
        quiver.check_dim(alpha)?;
        quiver.check_dim(beta)?;
        if beta.iter().zip(alpha).any(|(b, a)| b > a) {
            return Err(Error::input(format!("beta {beta:?} is not below alpha {alpha:?}")));
        }
        let gamma = alpha.iter().zip(beta).map(|(a, b)| a - b).collect();
        Ok(BundleSpec { quiver, beta: beta.to_vec(), gamma })
    }

    pub fn alpha(&self) -> DimensionVector {
        self.beta.iter().zip(&self.gamma).map(|(b, g)| b + g).collect()
    }

    /// `dim ξ = Σ_a β_ta γ_ha`.
    pub fn rank(&self) -> usize {
        self.quiver.arrows().iter().map(|&(t, h)| self.beta[t - 1] * self.gamma[h - 1]).sum()
    }
}

/// A collection `λ̄`: one partition per arrow, and a choice of
/// Littlewood–Richardson constituents `μ(x)`, `ν(x)` per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartitionCollection {
    pub lambda: Vec<Partition>,
    pub mu: Vec<Partition>,
    pub nu: Vec<Partition>,
    pub multiplicity: u64,
}

impl PartitionCollection {
    pub fn degree(&self) -> usize {
        self.lambda.iter().map(Partition::size).sum()
    }

    /// `u_x = max(u_μ(x), u_ν(x))`.
    pub fn u_vector(&self) -> DimensionVector {
        self.mu.iter().zip(&self.nu).map(|(m, n)| m.durfee().max(n.durfee())).collect()
    }
}

/// `D(λ̄) = Σ_a |λ(a)| − Σ_x N(δ(x))`, or `None` when some `δ(x)` is singular.
pub fn d_value(spec: &BundleSpec, c: &PartitionCollection) -> Option<i64> {
    let mut d = c.degree() as i64;
    for x in 0..spec.quiver.vertex_count() {
        let w = bott_weight(&c.mu[x], &c.nu[x], spec.beta[x], spec.gamma[x]);
        d -= normalize_weight(&w)?.0 as i64;
    }
    Some(d)
}

/// One summand `A(−t) ⊗ ⊗_x S_τ(x) V_x` of `F_i`, with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResolutionTerm {
    pub i: i64,
    pub t: usize,
    pub weights: Vec<Vec<i64>>,
    pub multiplicity: u64,
    pub numeric_rank: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    /// Total rank at `(i, t)`.
    #[serde(with = "entry_list")]
    pub entries: BTreeMap<(i64, usize), u128>,
    pub terms: Vec<ResolutionTerm>,
    /// Largest `i` for which the table is complete; `None` when nothing was pruned.
    pub complete_up_to: Option<i64>,
}

mod entry_list {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        i: i64,
        t: usize,
        rank: u128,
    }

    pub fn serialize<S: Serializer>(m: &BTreeMap<(i64, usize), u128>, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Entry> = m.iter().map(|(&(i, t), &rank)| Entry { i, t, rank }).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(i64, usize), u128>, D::Error> {
        let v = Vec::<Entry>::deserialize(d)?;
        Ok(v.into_iter().map(|e| ((e.i, e.t), e.rank)).collect())
    }
}

impl BettiTable {
    pub fn get(&self, i: i64, t: usize) -> u128 {
        self.entries.get(&(i, t)).copied().unwrap_or(0)
    }

    /// Rank of `F_i` summed over all degrees.
    pub fn total(&self, i: i64) -> u128 {
        self.entries.iter().filter(|((j, _), _)| *j == i).map(|(_, v)| v).sum()
    }

    pub fn totals(&self) -> Vec<(i64, u128)> {
        let mut out: BTreeMap<i64, u128> = BTreeMap::new();
        for (&(i, _), &v) in &self.entries {
            *out.entry(i).or_insert(0) += v;
        }
        out.into_iter().collect()
    }

    pub fn terms_at(&self, i: i64) -> impl Iterator<Item = &ResolutionTerm> {
        self.terms.iter().filter(move |t| t.i == i)
    }

    pub fn has_negative_terms(&self) -> bool {
        self.entries.keys().any(|&(i, _)| i < 0)
    }

    /// Grid with rows `t − i` and columns `i`, as printed by Macaulay2.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.entries.is_empty() {
            out.push_str("(empty)\n");
            return out;
        }
        let imin = self.entries.keys().map(|k| k.0).min().unwrap_or(0);
        let imax = self.entries.keys().map(|k| k.0).max().unwrap_or(0);
        let rows: Vec<i64> = {
            let mut r: Vec<i64> = self.entries.keys().map(|&(i, t)| t as i64 - i).collect();
            r.sort_unstable();
            r.dedup();
            r
        };
        let rmin = *rows.first().unwrap_or(&0);
        let rmax = *rows.last().unwrap_or(&0);
        let cell = |v: u128| {
            if v == 0 {
                ".".to_string()
            } else {
                v.to_string()
            }
        };
        let totals: Vec<String> = (imin..=imax).map(|i| self.total(i).to_string()).collect();
        let mut grid: Vec<Vec<String>> = Vec::new();
        for r in rmin..=rmax {
            grid.push(
                (imin..=imax).map(|i| cell(self.get(i, (r + i).max(0) as usize) * u128::from(r + i >= 0))).collect(),
            );
        }
        let width = totals
            .iter()
            .chain(grid.iter().flatten())
            .map(String::len)
            .chain((imin..=imax).map(|i| i.to_string().len()))
            .max()
            .unwrap_or(1);
        let label_w = (rmax.to_string().len()).max(rmin.to_string().len()).max(6);
        let _ = write!(out, "{:>label_w$} ", "");
        for i in imin..=imax {
            let _ = write!(out, " {:>width$}", i);
        }
        out.push('\n');
        let _ = write!(out, "{:>label_w$} ", "total:");
        for t in &totals {
            let _ = write!(out, " {:>width$}", t);
        }
        out.push('\n');
        for (k, r) in (rmin..=rmax).enumerate() {
            let _ = write!(out, "{:>label_w$} ", format!("{r}:"));
            for c in &grid[k] {
                let _ = write!(out, " {:>width$}", c);
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug)]
struct VertexOption {
    mu: Partition,
    nu: Partition,
    mult: u64,
    u: usize,
    /// `(N, interned τ, dim S_τ)`, or `None` for a singular weight.
    bott: Option<(usize, u32, u128)>,
    /// Signed Euler characteristic of the factor.
    euler: i128,
}

/// `β_x, γ_x`, then the outgoing and incoming partitions, separated by a marker.
type VertexKey = SmallVec<[u16; 24]>;

const KEY_SEPARATOR: u16 = u16::MAX;

type TableKey = (Vec<(usize, usize)>, Vec<usize>, i64);

/// Enumeration engine with memo tables, reusable across specs.
#[derive(Default)]
pub struct Engine {
    vertex_cache: FxHashMap<VertexKey, Arc<Vec<VertexOption>>>,
    box_cache: FxHashMap<(usize, usize), Arc<Vec<Partition>>>,
    table_cache: FxHashMap<TableKey, Arc<Vec<Vec<usize>>>>,
    tau_ids: FxHashMap<Vec<i64>, u32>,
    taus: Vec<Vec<i64>>,
}

/// Options controlling enumeration.
#[derive(Clone, Copy, Debug)]
pub struct EnumOptions {
    pub prune_at: Option<i64>,
    pub max_collections: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { prune_at: None, max_collections: DEFAULT_MAX_COLLECTIONS }
    }
}

struct Plan<'s> {
    spec: &'s BundleSpec,
    n: usize,
    outgoing: Vec<SmallVec<[usize; 4]>>,
    incoming: Vec<SmallVec<[usize; 4]>>,
    /// Vertices all of whose arrows are chosen once arrow `k` is fixed.
    finished_after: Vec<SmallVec<[usize; 4]>>,
    /// Admissible `u` vectors when pruning, `None` when the table would be too large.
    table: Option<Arc<Vec<Vec<usize>>>>,
    prune_at: Option<i64>,
    ubox: Vec<usize>,
}

impl<'s> Plan<'s> {
    fn admissible(&self, lo: &[usize], hi: &[usize]) -> bool {
        match &self.table {
            None => true,
            Some(t) => t.iter().any(|u| u.iter().zip(lo).zip(hi).all(|((&v, &l), &h)| l <= v && v <= h)),
        }
    }
}

fn admissible_u_table(q: &Quiver, ubox: &[usize], i: i64) -> Option<Vec<Vec<usize>>> {
    let n = ubox.len();
    let points = ubox.iter().try_fold(1usize, |acc, &b| acc.checked_mul(b + 1))?;
    if points > PRUNE_TABLE_LIMIT {
        return None;
    }
    let mut out = Vec::new();
    let mut u = vec![0; n];
    loop {
        if q.euler_product_unchecked(&u, &u) <= i {
            out.push(u.clone());
        }
        let mut k = 0;
        while k < n && u[k] == ubox[k] {
            u[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
        u[k] += 1;
    }
    Some(out)
}

/// Per-leaf data handed to consumers: the chosen partitions and vertex options.
struct Leaf<'a> {
    lambda: &'a [Partition],
    options: &'a [&'a VertexOption],
}

struct WalkState<'a> {
    plan: &'a Plan<'a>,
    lambda: Vec<Partition>,
    lo: Vec<usize>,
    hi: Vec<usize>,
    count: usize,
    cap: usize,
}

impl Engine {
    pub fn new() -> Self {
        Engine::default()
    }

    fn plan<'s>(&mut self, spec: &'s BundleSpec, prune_at: Option<i64>) -> Plan<'s> {
        let q = &spec.quiver;
        let n = q.vertex_count();
        let mut outgoing = vec![SmallVec::new(); n];
        let mut incoming = vec![SmallVec::new(); n];
        let mut last = vec![None; n];
        for (k, &(t, h)) in q.arrows().iter().enumerate() {
            outgoing[t - 1].push(k);
            incoming[h - 1].push(k);
            last[t - 1] = Some(k);
            last[h - 1] = Some(k);
        }
        let mut finished_after = vec![SmallVec::new(); q.arrows().len()];
        for (x, l) in last.iter().enumerate() {
            if let Some(k) = l {
                finished_after[*k].push(x);
            }
        }
        // u_x ≤ min(β_x, Σ_out γ_ha) ∨ min(γ_x, Σ_in β_tb)
        let ubox: Vec<usize> = (0..n)
            .map(|x| {
                let out_cols: usize = outgoing[x].iter().map(|&a| spec.gamma[q.head(a) - 1]).sum();
                let in_rows: usize = incoming[x].iter().map(|&a| spec.beta[q.tail(a) - 1]).sum();
                spec.beta[x].min(out_cols).max(spec.gamma[x].min(in_rows))
            })
            .collect();
        let table = prune_at.and_then(|i| {
            let key = (q.arrows().to_vec(), ubox.clone(), i);
            if let Some(t) = self.table_cache.get(&key) {
                return Some(t.clone());
            }
            let t = Arc::new(admissible_u_table(q, &ubox, i)?);
            if self.table_cache.len() > 1 << 16 {
                self.table_cache.clear();
            }
            self.table_cache.insert(key, t.clone());
            Some(t)
        });
        Plan { spec, n, outgoing, incoming, finished_after, table, prune_at, ubox }
    }

    fn partitions_in_box(&mut self, rows: usize, cols: usize) -> Arc<Vec<Partition>> {
        self.box_cache.entry((rows, cols)).or_insert_with(|| Arc::new(Partition::in_box(rows, cols))).clone()
    }

    fn intern_tau(&mut self, tau: Vec<i64>) -> u32 {
        if let Some(&id) = self.tau_ids.get(&tau) {
            return id;
        }
        let id = self.taus.len() as u32;
        self.taus.push(tau.clone());
        self.tau_ids.insert(tau, id);
        id
    }

    fn vertex_options(&mut self, key: VertexKey) -> Arc<Vec<VertexOption>> {
        if let Some(v) = self.vertex_cache.get(&key) {
            return v.clone();
        }
        let (beta, gamma) = (key[0] as usize, key[1] as usize);
        let mut outgoing = Vec::new();
        let mut incoming = Vec::new();
        let mut side = 0;
        let mut cur: Vec<usize> = Vec::new();
        for &k in &key[2..] {
            if k == KEY_SEPARATOR {
                let p = Partition::new(&cur).expect("key holds partitions");
                if side == 0 {
                    outgoing.push(p);
                } else {
                    incoming.push(p.conjugate());
                }
                cur.clear();
            } else if k == KEY_SEPARATOR - 1 {
                side = 1;
            } else {
                cur.push(k as usize);
            }
        }
        let mus = lr_expand(&outgoing, beta);
        let nus = lr_expand(&incoming, gamma);
        let mut opts = Vec::with_capacity(mus.len() * nus.len());
        for (mu, m1) in &mus {
            for (nu, m2) in &nus {
                let w = bott_weight(mu, nu, beta, gamma);
                let bott = normalize_weight(&w).map(|(n, tau)| {
                    let dim = weyl_poly(&tau);
                    let dim = u128::try_from(dim).expect("Schur module dimension exceeds u128");
                    (n, self.intern_tau(tau), dim)
                });
                let euler = i128::try_from(weyl_poly(&w)).expect("Euler characteristic exceeds i128");
                opts.push(VertexOption {
                    mu: mu.clone(),
                    nu: nu.clone(),
                    mult: m1 * m2,
                    u: mu.durfee().max(nu.durfee()),
                    bott,
                    euler,
                });
            }
        }
        let v = Arc::new(opts);
        if self.vertex_cache.len() > 1 << 18 {
            self.vertex_cache.clear();
        }
        self.vertex_cache.insert(key, v.clone());
        v
    }

    fn walk(&mut self, spec: &BundleSpec, opts: EnumOptions, f: &mut dyn FnMut(&Leaf<'_>)) -> Result<usize> {
        let plan = self.plan(spec, opts.prune_at);
        let n = plan.n;
        let mut hi = plan.ubox.clone();
        for (x, h) in hi.iter_mut().enumerate() {
            if plan.outgoing[x].is_empty() && plan.incoming[x].is_empty() {
                *h = 0;
            }
        }
        let mut st = WalkState {
            plan: &plan,
            lambda: vec![Partition::empty(); spec.quiver.arrows().len()],
            lo: vec![0; n],
            hi,
            count: 0,
            cap: opts.max_collections,
        };
        if plan.admissible(&st.lo, &st.hi) {
            self.choose_arrow(&mut st, 0, f)?;
        }
        Ok(st.count)
    }

    fn choose_arrow(&mut self, st: &mut WalkState<'_>, k: usize, f: &mut dyn FnMut(&Leaf<'_>)) -> Result<()> {
        let plan = st.plan;
        let spec = plan.spec;
        if k == st.lambda.len() {
            return self.finish(st, f);
        }
        let (t, h) = (spec.quiver.tail(k) - 1, spec.quiver.head(k) - 1);
        let choices = self.partitions_in_box(spec.beta[t], spec.gamma[h]);
        for lam in choices.iter() {
            st.lambda[k] = lam.clone();
            let saved_lo = (st.lo[t], st.lo[h]);
            let d = lam.durfee();
            st.lo[t] = st.lo[t].max(d);
            st.lo[h] = st.lo[h].max(d);
            let mut saved_hi: SmallVec<[(usize, usize); 4]> = SmallVec::new();
            for &x in &plan.finished_after[k] {
                saved_hi.push((x, st.hi[x]));
                st.hi[x] = st.hi[x].min(vertex_upper_bound(plan, &st.lambda, x));
            }
            if plan.admissible(&st.lo, &st.hi) {
                self.choose_arrow(st, k + 1, f)?;
            }
            for (x, v) in saved_hi {
                st.hi[x] = v;
            }
            st.lo[t] = saved_lo.0;
            st.lo[h] = saved_lo.1;
        }
        st.lambda[k] = Partition::empty();
        Ok(())
    }

    fn finish(&mut self, st: &mut WalkState<'_>, f: &mut dyn FnMut(&Leaf<'_>)) -> Result<()> {
        let plan = st.plan;
        let spec = plan.spec;
        let n = plan.n;
        let mut per_vertex: SmallVec<[Arc<Vec<VertexOption>>; 8]> = SmallVec::new();
        let mut parts: SmallVec<[&Partition; 4]> = SmallVec::new();
        for x in 0..n {
            let mut key = VertexKey::new();
            key.push(spec.beta[x] as u16);
            key.push(spec.gamma[x] as u16);
            for (side, arrows) in [&plan.outgoing[x], &plan.incoming[x]].into_iter().enumerate() {
                if side == 1 {
                    key.push(KEY_SEPARATOR - 1);
                }
                parts.clear();
                parts.extend(arrows.iter().map(|&a| &st.lambda[a]).filter(|p| !p.is_empty()));
                parts.sort();
                for p in &parts {
                    key.extend_from_slice(p.parts());
                    key.push(KEY_SEPARATOR);
                }
            }
            let opts = self.vertex_options(key);
            if opts.is_empty() {
                return Ok(());
            }
            per_vertex.push(opts);
        }
        drop(parts);
        let mut chosen: SmallVec<[&VertexOption; 8]> = SmallVec::new();
        combine(st, &per_vertex, 0, &mut chosen, f)
    }

    /// Visits every valid collection, in deterministic order.
    pub fn for_each_collection(
        &mut self,
        spec: &BundleSpec,
        opts: EnumOptions,
        mut f: impl FnMut(&PartitionCollection),
    ) -> Result<usize> {
        self.walk(spec, opts, &mut |leaf: &Leaf<'_>| {
            let c = PartitionCollection {
                lambda: leaf.lambda.to_vec(),
                mu: leaf.options.iter().map(|o| o.mu.clone()).collect(),
                nu: leaf.options.iter().map(|o| o.nu.clone()).collect(),
                multiplicity: leaf.options.iter().map(|o| o.mult).product(),
            };
            f(&c);
        })
    }

    /// Aggregated terms of `F_•`, plus the per-degree Euler balance data.
    fn tally(&mut self, spec: &BundleSpec, opts: EnumOptions) -> Result<Tally> {
        let mut tally = Tally::default();
        self.walk(spec, opts, &mut |leaf: &Leaf<'_>| {
            let t: usize = leaf.lambda.iter().map(Partition::size).sum();
            let mult: u64 = leaf.options.iter().map(|o| o.mult).product();
            let euler: i128 = leaf.options.iter().map(|o| o.euler).product();
            *tally.euler.entry(t).or_insert(0) += mult as i128 * euler;
            let mut d = t as i64;
            let mut ids: SmallVec<[u32; 8]> = SmallVec::new();
            let mut dim: u128 = mult as u128;
            for o in leaf.options {
                let Some((n, id, w)) = o.bott else { return };
                d -= n as i64;
                ids.push(id);
                dim *= w;
            }
            let e = tally.terms.entry((d, t, ids)).or_insert((0, 0));
            e.0 += mult;
            e.1 += dim;
        })?;
        Ok(tally)
    }

    /// Terms of `F_•` aggregated by `(i, t, weights)`. With `prune_at = Some(i)`
    /// only collections that can reach `F_j`, `j ≤ i`, are visited.
    pub fn assemble(&mut self, spec: &BundleSpec, opts: EnumOptions) -> Result<BettiTable> {
        let tally = self.tally(spec, opts)?;
        let mut entries: BTreeMap<(i64, usize), u128> = BTreeMap::new();
        let mut terms = Vec::with_capacity(tally.terms.len());
        for ((i, t, ids), (multiplicity, numeric_rank)) in tally.terms {
            if opts.prune_at.is_some_and(|p| i > p) {
                continue;
            }
            *entries.entry((i, t)).or_insert(0) += numeric_rank;
            let weights = ids.iter().map(|&id| self.taus[id as usize].clone()).collect();
            terms.push(ResolutionTerm { i, t, weights, multiplicity, numeric_rank });
        }
        terms.sort_by(|a, b| (a.i, a.t, &a.weights).cmp(&(b.i, b.t, &b.weights)));
        let table = BettiTable { entries, terms, complete_up_to: opts.prune_at };
        if opts.prune_at.is_none() {
            check_euler_balance(&table, &tally.euler)?;
        }
        Ok(table)
    }
}

type TermKey = (i64, usize, SmallVec<[u32; 8]>);

#[derive(Default)]
struct Tally {
    /// `(i, t, Schur weight ids)` to `(multiplicity, numeric rank)`.
    terms: FxHashMap<TermKey, (u64, u128)>,
    euler: BTreeMap<usize, i128>,
}

/// Upper bound for `u_x` once every arrow at `x` is fixed.
fn vertex_upper_bound(plan: &Plan<'_>, lambda: &[Partition], x: usize) -> usize {
    let spec = plan.spec;
    let (mut out_len, mut out_first, mut in_len, mut in_first) = (0, 0, 0, 0);
    for &a in &plan.outgoing[x] {
        out_len += lambda[a].len();
        out_first += lambda[a].part(0);
    }
    for &a in &plan.incoming[x] {
        in_len += lambda[a].len();
        in_first += lambda[a].part(0);
    }
    let mu = spec.beta[x].min(out_len).min(out_first);
    let nu = spec.gamma[x].min(in_first).min(in_len);
    mu.max(nu)
}

fn combine<'o>(
    st: &mut WalkState<'_>,
    per_vertex: &'o [Arc<Vec<VertexOption>>],
    x: usize,
    chosen: &mut SmallVec<[&'o VertexOption; 8]>,
    f: &mut dyn FnMut(&Leaf<'_>),
) -> Result<()> {
    let plan = st.plan;
    if x == per_vertex.len() {
        if let Some(i) = plan.prune_at {
            if plan.spec.quiver.euler_product_unchecked(&st.lo, &st.lo) > i {
                return Ok(());
            }
        }
        st.count += 1;
        if st.count > st.cap {
            return Err(Error::DeskScale(format!("more than {} partition collections", st.cap)));
        }
        f(&Leaf { lambda: &st.lambda, options: chosen });
        return Ok(());
    }
    let saved = (st.lo[x], st.hi[x]);
    for o in per_vertex[x].iter() {
        // lo/hi are pinned to the exact u at decided vertices
        st.lo[x] = o.u;
        st.hi[x] = o.u;
        if plan.prune_at.is_some() && (o.u < saved.0 || o.u > saved.1 || !plan.admissible(&st.lo, &st.hi)) {
            continue;
        }
        chosen.push(o);
        combine(st, per_vertex, x + 1, chosen, f)?;
        chosen.pop();
    }
    st.lo[x] = saved.0;
    st.hi[x] = saved.1;
    Ok(())
}

/// `Σ_i (−1)^i rank(F_i)_t = (−1)^t χ(∧^t ξ)` for every degree `t`.
fn check_euler_balance(table: &BettiTable, euler: &BTreeMap<usize, i128>) -> Result<()> {
    let mut lhs: BTreeMap<usize, i128> = BTreeMap::new();
    for (&(i, t), &v) in &table.entries {
        let s = if i.rem_euclid(2) == 0 { 1 } else { -1 };
        *lhs.entry(t).or_insert(0) += s * v as i128;
    }
    for (&t, &chi) in euler {
        let expected = if t % 2 == 0 { chi } else { -chi };
        let got = lhs.get(&t).copied().unwrap_or(0);
        if got != expected {
            return Err(Error::consistency(format!(
                "Euler balance fails in degree {t}: alternating rank sum {got}, cohomology {expected}"
            )));
        }
    }
    Ok(())
}

pub fn enumerate_collections(spec: &BundleSpec, prune_at: Option<i64>) -> Result<Vec<PartitionCollection>> {
    let mut out = Vec::new();
    Engine::new().for_each_collection(
        spec,
        EnumOptions { prune_at, max_collections: DEFAULT_MAX_COLLECTIONS },
        |c| out.push(c.clone()),
    )?;
    Ok(out)
}

/// Full table of `F_•`. For Dynkin quivers it must have no terms with `i < 0`
/// and `F_0` of rank one; a violation is reported as a consistency error.
pub fn assemble_resolution(spec: &BundleSpec) -> Result<BettiTable> {
    assemble_resolution_with(spec, DEFAULT_MAX_COLLECTIONS)
}

pub fn assemble_resolution_with(spec: &BundleSpec, max_collections: usize) -> Result<BettiTable> {
    let table = Engine::new().assemble(spec, EnumOptions { prune_at: None, max_collections })?;
    if let QuiverClass::Dynkin(_) = spec.quiver.class() {
        check_dynkin_shape(&table)?;
    }
    Ok(table)
}

pub(crate) fn check_dynkin_shape(table: &BettiTable) -> Result<()> {
    if table.has_negative_terms() {
        return Err(Error::consistency("terms with negative homological index for a Dynkin quiver"));
    }
    if table.total(0) != 1 || table.get(0, 0) != 1 {
        return Err(Error::consistency(format!("F_0 has rank {} for a Dynkin quiver", table.total(0))));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinResolutionReport {
    pub class: QuiverClass,
    pub no_negative_terms: bool,
    pub f0_rank: u128,
    pub f0_is_rank_one: bool,
    /// Summands of `F_0`; beyond the trivial one they describe the normalization.
    pub f0_terms: Vec<ResolutionTerm>,
    pub negative_terms: Vec<ResolutionTerm>,
    pub note: String,
}

/// Structural report on `F_•` for Dynkin and extended Dynkin quivers.
pub fn min_resolution_check(spec: &BundleSpec) -> Result<MinResolutionReport> {
    min_resolution_check_with(spec, DEFAULT_MAX_COLLECTIONS)
}

pub fn min_resolution_check_with(spec: &BundleSpec, max_collections: usize) -> Result<MinResolutionReport> {
    let class = spec.quiver.class();
    if class == QuiverClass::Wild {
        return Err(Error::input("the quiver is neither Dynkin nor extended Dynkin"));
    }
    let table = Engine::new().assemble(spec, EnumOptions { prune_at: None, max_collections })?;
    let f0_rank = table.total(0);
    let note = match class {
        QuiverClass::Dynkin(_) if f0_rank == 1 && !table.has_negative_terms() => {
            "F0 rank 1, no negative terms: minimal free resolution of a normal orbit closure".to_string()
        }
        QuiverClass::Dynkin(_) => "structure violated for a Dynkin quiver".to_string(),
        _ => "terms of F (normalization under the connected-fiber hypothesis)".to_string(),
    };
    Ok(MinResolutionReport {
        class,
        no_negative_terms: !table.has_negative_terms(),
        f0_rank,
        f0_is_rank_one: f0_rank == 1,
        f0_terms: table.terms_at(0).cloned().collect(),
        negative_terms: table.terms.iter().filter(|t| t.i < 0).cloned().collect(),
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2(alpha: &[usize], beta: &[usize]) -> BundleSpec {
        BundleSpec::from_alpha_beta(Quiver::equioriented_a(2), alpha, beta).unwrap()
    }

    fn p(v: &[usize]) -> Partition {
        Partition::new(v).unwrap()
    }

    #[test]
    fn a2_point_collections() {
        let spec = a2(&[1, 1], &[1, 0]);
        let cs = enumerate_collections(&spec, None).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[0].lambda, vec![Partition::empty()]);
        assert_eq!(d_value(&spec, &cs[0]), Some(0));
        assert_eq!(cs[1].lambda, vec![p(&[1])]);
        assert_eq!(cs[1].mu[0], p(&[1]));
        assert_eq!(cs[1].nu[1], p(&[1]));
        assert_eq!(d_value(&spec, &cs[1]), Some(1));
        let t = assemble_resolution(&spec).unwrap();
        assert_eq!(t.entries, BTreeMap::from([((0, 0), 1), ((1, 1), 1)]));
    }

    #[test]
    fn singular_collection_contributes_nothing() {
        let spec = a2(&[2, 2], &[1, 1]);
        let cs = enumerate_collections(&spec, None).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(d_value(&spec, &cs[1]), None);
        let t = assemble_resolution(&spec).unwrap();
        assert_eq!(t.entries, BTreeMap::from([((0, 0), 1)]));
    }

    #[test]
    fn zero_bundle_has_only_the_empty_collection() {
        let spec = a2(&[2, 2], &[0, 2]);
        assert_eq!(spec.rank(), 0);
        assert_eq!(enumerate_collections(&spec, None).unwrap().len(), 1);
    }

    #[test]
    fn hypersurface_and_minors() {
        let det = assemble_resolution(&a2(&[3, 3], &[2, 1])).unwrap();
        assert_eq!(det.entries, BTreeMap::from([((0, 0), 1), ((1, 3), 1)]));
        let f1: Vec<_> = det.terms_at(1).collect();
        assert_eq!(f1[0].weights, vec![vec![1, 1, 1], vec![-1, -1, -1]]);
        let minors = assemble_resolution(&a2(&[3, 3], &[2, 0])).unwrap();
        let totals: Vec<u128> = minors.totals().into_iter().map(|(_, v)| v).collect();
        assert_eq!(totals, vec![1, 9, 16, 9, 1]);
    }

    #[test]
    fn pruning_keeps_low_terms() {
        let spec = a2(&[3, 3], &[2, 0]);
        let full = assemble_resolution(&spec).unwrap();
        let pruned = Engine::new().assemble(&spec, EnumOptions { prune_at: Some(1), ..Default::default() }).unwrap();
        let low: Vec<_> = full.terms.iter().filter(|t| t.i <= 1).cloned().collect();
        assert_eq!(pruned.terms, low);
    }

    #[test]
    fn cap_is_enforced() {
        let spec = a2(&[3, 3], &[2, 0]);
        assert!(matches!(assemble_resolution_with(&spec, 3), Err(Error::DeskScale(_))));
    }

    #[test]
    fn kronecker_report() {
        let q = Quiver::new(2, vec![(1, 2), (1, 2)]).unwrap();
        let spec = BundleSpec::from_alpha_beta(q, &[2, 1], &[1, 0]).unwrap();
        let r = min_resolution_check(&spec).unwrap();
        assert_eq!(r.class, QuiverClass::ExtendedDynkin);
        assert!(r.no_negative_terms);
    }

    #[test]
    fn text_grid() {
        let t = assemble_resolution(&a2(&[1, 1], &[1, 0])).unwrap();
        let s = t.to_text();
        assert!(s.contains("total:"));
        assert!(s.lines().count() >= 3);
    }
}
