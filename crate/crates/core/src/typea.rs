//! Type-A quivers: zigzag structure, interval roots, the block matrices
//! `X_{p,q}`, relevance, the sets `B_{p,q}`, minimal generating minors and
//! rank conditions.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quiver::Quiver;
use crate::rep::{ext_dim, hom_dim, Representation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Turn {
    Source,
    Sink,
}

/// Sources and sinks of a type-A quiver in vertex order, endpoints included.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZigzagStructure {
    pub turns: Vec<(usize, Turn)>,
    /// `right[i]` holds when the arrow joining `i + 1` and `i + 2` points right.
    right: Vec<bool>,
    /// Input index of the arrow joining `i + 1` and `i + 2`.
    edge_arrow: Vec<usize>,
}

/// The interval root `r^{p,q}` with `1 ≤ p ≤ q ≤ n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root {
    pub p: usize,
    pub q: usize,
}

impl Root {
    pub fn new(p: usize, q: usize) -> Self {
        Root { p, q }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.p <= x && x <= self.q
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

impl ZigzagStructure {
    pub fn vertex_count(&self) -> usize {
        self.right.len() + 1
    }

    /// Whether the arrow between `x` and `x + 1` points from `x` to `x + 1`.
    pub fn points_right(&self, x: usize) -> bool {
        self.right[x - 1]
    }

    /// Input index of the arrow between `x` and `x + 1`.
    pub fn arrow_between(&self, x: usize) -> usize {
        self.edge_arrow[x - 1]
    }

    fn check_root(&self, root: Root) -> Result<()> {
        let n = self.vertex_count();
        if root.p == 0 || root.p > root.q || root.q > n {
            return Err(Error::input(format!("{root} is not a root of A{n}")));
        }
        Ok(())
    }

    /// Turning points `p = t_0 < t_1 < … < t_e = q` of the support of a
    /// non-simple root, each typed by its arrows inside the support.
    pub fn shape(&self, root: Root) -> Result<RootShape> {
        self.check_root(root)?;
        if root.p == root.q {
            return Err(Error::input(format!("{root} is a simple root")));
        }
        let p_turn = if self.points_right(root.p) { Turn::Source } else { Turn::Sink };
        let q_turn = if self.points_right(root.q - 1) { Turn::Sink } else { Turn::Source };
        let mut points = vec![(root.p, p_turn)];
        points.extend(self.turns.iter().copied().filter(|&(x, _)| root.p < x && x < root.q));
        points.push((root.q, q_turn));
        let runs = points.windows(2).map(|w| w[1].0 - w[0].0).collect();
        Ok(RootShape { root, points, runs })
    }

    /// Arrows from `from` to the adjacent turning point `to`, in the order a
    /// path starting at `from` traverses them.
    fn run_arrows(&self, from: usize, to: usize) -> Vec<usize> {
        if from < to {
            (from..to).map(|x| self.arrow_between(x)).collect()
        } else {
            (to..from).rev().map(|x| self.arrow_between(x)).collect()
        }
    }
}

/// Builds the zigzag of a quiver whose underlying graph is the path
/// `1 - 2 - … - n`.
pub fn zigzag(q: &Quiver) -> Result<ZigzagStructure> {
    let n = q.vertex_count();
    if q.arrows().len() + 1 != n {
        return Err(Error::input(format!("{} arrows on {n} vertices is not a path", q.arrows().len())));
    }
    let mut right = vec![false; n - 1];
    let mut edge_arrow = vec![usize::MAX; n - 1];
    for (a, &(t, h)) in q.arrows().iter().enumerate() {
        let lo = t.min(h);
        if t.abs_diff(h) != 1 || edge_arrow[lo - 1] != usize::MAX {
            return Err(Error::input("the underlying graph is not the path 1 - 2 - ... - n"));
        }
        edge_arrow[lo - 1] = a;
        right[lo - 1] = t < h;
    }
    let mut turns = Vec::new();
    for x in 1..=n {
        let left_in = x > 1 && right[x - 2];
        let left_out = x > 1 && !right[x - 2];
        let right_out = x < n && right[x - 1];
        let right_in = x < n && !right[x - 1];
        if !left_in && !right_in {
            turns.push((x, Turn::Source));
        } else if !left_out && !right_out {
            turns.push((x, Turn::Sink));
        }
    }
    Ok(ZigzagStructure { turns, right, edge_arrow })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootShape {
    pub root: Root,
    pub points: Vec<(usize, Turn)>,
    /// Arrow count `N_k` of each equioriented run.
    pub runs: Vec<usize>,
}

impl RootShape {
    pub fn run_count(&self) -> usize {
        self.runs.len()
    }

    pub fn sources(&self) -> Vec<usize> {
        self.points.iter().filter(|p| p.1 == Turn::Source).map(|p| p.0).collect()
    }

    pub fn sinks(&self) -> Vec<usize> {
        self.points.iter().filter(|p| p.1 == Turn::Sink).map(|p| p.0).collect()
    }

    /// Cokernel root of the projective presentation: a sink-type endpoint
    /// moves one step inwards, a source-type endpoint extends outwards as far
    /// as the arrows keep pointing away from the support.
    pub fn cokernel_root(&self, z: &ZigzagStructure) -> Root {
        let (p, pt) = self.points[0];
        let (q, qt) = *self.points.last().unwrap();
        let mut lo = p;
        if pt == Turn::Source {
            while lo > 1 && !z.points_right(lo - 1) {
                lo -= 1;
            }
        } else {
            lo = p + 1;
        }
        let mut hi = q;
        if qt == Turn::Source {
            while hi < z.vertex_count() && z.points_right(hi) {
                hi += 1;
            }
        } else {
            hi = q - 1;
        }
        Root { p: lo, q: hi }
    }

    /// Cokernel root of the presentation over the support alone: sink-type
    /// endpoints move one step inwards.
    pub fn support_cokernel(&self) -> Root {
        let (p, pt) = self.points[0];
        let (q, qt) = *self.points.last().unwrap();
        Root { p: if pt == Turn::Sink { p + 1 } else { p }, q: if qt == Turn::Sink { q - 1 } else { q } }
    }

    fn rank_bound(&self, beta: &[usize], gamma: &[usize]) -> usize {
        self.points
            .iter()
            .map(|&(x, t)| match t {
                Turn::Source => gamma[x - 1],
                Turn::Sink => beta[x - 1],
            })
            .sum()
    }
}

/// Per-run minima: `gamma[k]` and `beta[k]` belong to the run between turning
/// points `k` and `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chains {
    pub gamma: Vec<i64>,
    pub beta: Vec<i64>,
}

/// A run leaving a turning point of type `plain` takes the minimum over its
/// far half-open interval; a run leaving the other type takes the interior
/// minimum together with the carried correction two runs back.
fn chain(values: &[usize], points: &[(usize, Turn)], plain: Turn) -> Vec<i64> {
    let v = |x: usize| values[x - 1] as i64;
    let mut out: Vec<i64> = Vec::with_capacity(points.len() - 1);
    for k in 0..points.len() - 1 {
        let (start, turn) = points[k];
        let end = points[k + 1].0;
        let m = if turn == plain {
            (start + 1..=end).map(v).min().unwrap()
        } else {
            let back = if k >= 1 { v(points[k - 1].0) } else { 0 };
            let carried = if k >= 2 { out[k - 2] } else { 0 };
            let correction = v(start) - back + carried;
            (start + 1..end).map(v).chain(std::iter::once(correction)).min().unwrap()
        };
        out.push(m);
    }
    out
}

fn check_pair(q: &Quiver, beta: &[usize], gamma: &[usize]) -> Result<()> {
    q.check_dim(beta)?;
    q.check_dim(gamma)
}

pub fn chains(q: &Quiver, beta: &[usize], gamma: &[usize], root: Root) -> Result<Chains> {
    check_pair(q, beta, gamma)?;
    let shape = zigzag(q)?.shape(root)?;
    Ok(chains_for(&shape, beta, gamma))
}

fn chains_for(shape: &RootShape, beta: &[usize], gamma: &[usize]) -> Chains {
    Chains { gamma: chain(gamma, &shape.points, Turn::Source), beta: chain(beta, &shape.points, Turn::Sink) }
}

/// The inequality system on chain minima, generalized to all endpoint types.
fn inequalities_hold(shape: &RootShape, ch: &Chains, beta: &[usize], gamma: &[usize]) -> bool {
    let e = shape.run_count();
    shape.points.iter().enumerate().all(|(k, &(x, t))| {
        let (own, chain) = match t {
            Turn::Source => (gamma[x - 1] as i64, &ch.gamma),
            Turn::Sink => (beta[x - 1] as i64, &ch.beta),
        };
        let left = if k > 0 { chain[k - 1] } else { 0 };
        let right = if k < e { chain[k] } else { 0 };
        own < left + right
    })
}

/// Relevance means `B_{p,q}` is non-empty; the inequality system alone
/// admits roots whose system has no solution.
fn relevant_for(shape: &RootShape, ch: &Chains, beta: &[usize], gamma: &[usize]) -> bool {
    !enumerate_b_for(shape, ch, beta, gamma).is_empty()
}

pub fn is_relevant_combinatorial(q: &Quiver, beta: &[usize], gamma: &[usize], root: Root) -> Result<bool> {
    check_pair(q, beta, gamma)?;
    let shape = zigzag(q)?.shape(root)?;
    let ch = chains_for(&shape, beta, gamma);
    Ok(relevant_for(&shape, &ch, beta, gamma))
}

fn shift(r: Root, p: usize) -> Root {
    Root::new(r.p + 1 - p, r.q + 1 - p)
}

fn unshift(r: Root, p: usize) -> Root {
    Root::new(r.p + p - 1, r.q + p - 1)
}

/// The indecomposable `E` of the support presentation of `root`, together
/// with `x` restricted to the support; `hom(E, x|supp)` equals the corank
/// defect of `X_{p,q}` at `x`.
pub fn support_pair(x: &Representation, root: Root) -> Result<(Representation, Representation)> {
    let shape = zigzag(x.quiver())?.shape(root)?;
    let local = restrict(x, root)?;
    let e = indecomposable_rep(local.quiver(), shift(shape.support_cokernel(), root.p))?;
    Ok((e, local))
}

/// Restriction of `x` to the full subquiver on the support of `root`.
pub fn restrict(x: &Representation, root: Root) -> Result<Representation> {
    let z = zigzag(x.quiver())?;
    z.check_root(root)?;
    let right: Vec<bool> = (root.p..root.q).map(|v| z.points_right(v)).collect();
    let sub = Quiver::type_a(&right);
    let maps = (root.p..root.q).map(|v| x.map(z.arrow_between(v)).clone()).collect();
    Representation::new(sub, x.dim()[root.p - 1..root.q].to_vec(), maps)
}

/// Both relevance computations for one root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelevanceCertificate {
    pub root: Root,
    pub cokernel: Root,
    pub combinatorial: bool,
    /// Whether the chain inequalities hold; necessary for relevance.
    pub inequalities: bool,
    pub representation_theoretic: bool,
    pub hom_e_t_gamma: usize,
    pub ext_e_t_beta: usize,
    /// A quotient `E'` with `Ext(E', T_γ) = 0`, if any.
    pub quotient_witness: Option<Root>,
    /// A submodule `E''` with `Hom(E'', T_β) = 0`, if any.
    pub sub_witness: Option<Root>,
}

/// Indecomposable quotients of `E_root`: sub-intervals whose complement in
/// the support is closed under the arrows.
fn quotients(z: &ZigzagStructure, root: Root) -> Vec<Root> {
    intervals(root)
        .filter(|r| (r.p == root.p || !z.points_right(r.p - 1)) && (r.q == root.q || z.points_right(r.q)))
        .collect()
}

fn submodules(z: &ZigzagStructure, root: Root) -> Vec<Root> {
    intervals(root)
        .filter(|r| (r.p == root.p || z.points_right(r.p - 1)) && (r.q == root.q || !z.points_right(r.q)))
        .collect()
}

fn intervals(root: Root) -> impl Iterator<Item = Root> {
    (root.p..=root.q).flat_map(move |p| (p..=root.q).map(move |q| Root { p, q }))
}

/// Both relevance computations against the given generic representations
/// `T_β`, `T_γ`, without any agreement check. The Hom/Ext conditions are
/// evaluated on the support of the root.
pub fn relevance_unchecked(
    t_beta: &Representation,
    t_gamma: &Representation,
    root: Root,
) -> Result<RelevanceCertificate> {
    let q = t_beta.quiver();
    let beta = t_beta.dim();
    let gamma = t_gamma.dim();
    let shape = zigzag(q)?.shape(root)?;
    let ch = chains_for(&shape, beta, gamma);
    let combinatorial = relevant_for(&shape, &ch, beta, gamma);
    let inequalities = inequalities_hold(&shape, &ch, beta, gamma);
    let cokernel = shape.support_cokernel();
    let t_beta = &restrict(t_beta, root)?;
    let t_gamma = &restrict(t_gamma, root)?;
    let q = t_beta.quiver();
    let z = zigzag(q)?;
    let local = shift(cokernel, root.p);
    let e = indecomposable_rep(q, local)?;
    let hom_e_t_gamma = hom_dim(&e, t_gamma)?;
    let ext_e_t_beta = ext_dim(&e, t_beta)?;
    let mut quotient_witness = None;
    for r in quotients(&z, local) {
        if ext_dim(&indecomposable_rep(q, r)?, t_gamma)? == 0 {
            quotient_witness = Some(unshift(r, root.p));
            break;
        }
    }
    let mut sub_witness = None;
    for r in submodules(&z, local) {
        if hom_dim(&indecomposable_rep(q, r)?, t_beta)? == 0 {
            sub_witness = Some(unshift(r, root.p));
            break;
        }
    }
    let representation_theoretic =
        hom_e_t_gamma == 0 && ext_e_t_beta == 0 && quotient_witness.is_none() && sub_witness.is_none();
    let cert = RelevanceCertificate {
        root,
        cokernel,
        combinatorial,
        inequalities,
        representation_theoretic,
        hom_e_t_gamma,
        ext_e_t_beta,
        quotient_witness,
        sub_witness,
    };
    Ok(cert)
}

/// Checks relevance both combinatorially and by the Hom/Ext conditions
/// against the given generic representations `T_β`, `T_γ`. A relevant root
/// failing the Hom/Ext conditions or the inequalities is an error. Roots whose
/// rank condition follows from smaller roots can pass the Hom/Ext test without
/// being relevant.
pub fn relevance_certificate(
    t_beta: &Representation,
    t_gamma: &Representation,
    root: Root,
) -> Result<RelevanceCertificate> {
    let cert = relevance_unchecked(t_beta, t_gamma, root)?;
    if cert.combinatorial && !(cert.representation_theoretic && cert.inequalities) {
        return Err(Error::consistency(format!(
            "relevant root {root} fails the Hom/Ext conditions ({}) or the inequalities ({})",
            cert.representation_theoretic, cert.inequalities
        )));
    }
    Ok(cert)
}

/// Relevance with certificate; samples certified generic `T_β`, `T_γ` from `seed`.
pub fn is_relevant(q: &Quiver, beta: &[usize], gamma: &[usize], root: Root, seed: u64) -> Result<RelevanceCertificate> {
    check_pair(q, beta, gamma)?;
    let t_beta = crate::orbit::generic_representation(q, beta, seed)?;
    let t_gamma = crate::orbit::generic_representation(q, gamma, seed.wrapping_add(1))?;
    relevance_certificate(&t_beta.representative, &t_gamma.representative, root)
}

/// Certificates for every non-simple root, sharing one pair of generic representations.
pub fn relevance_certificates(
    q: &Quiver,
    beta: &[usize],
    gamma: &[usize],
    seed: u64,
) -> Result<Vec<RelevanceCertificate>> {
    check_pair(q, beta, gamma)?;
    let t_beta = crate::orbit::generic_representation(q, beta, seed)?;
    let t_gamma = crate::orbit::generic_representation(q, gamma, seed.wrapping_add(1))?;
    non_simple_roots(q.vertex_count())
        .map(|r| relevance_certificate(&t_beta.representative, &t_gamma.representative, r))
        .collect()
}

pub fn non_simple_roots(n: usize) -> impl Iterator<Item = Root> {
    (1..=n).flat_map(move |p| (p + 1..=n).map(move |q| Root { p, q }))
}

/// One sequence `((R_1, C_1), …, (R_e, C_e))`.
pub type RcSequence = Vec<(usize, usize)>;

fn enumerate_b_for(shape: &RootShape, ch: &Chains, beta: &[usize], gamma: &[usize]) -> Vec<RcSequence> {
    let e = shape.run_count();
    let mut out = Vec::new();
    let mut cur: RcSequence = Vec::with_capacity(e);
    fn rec(
        k: usize,
        shape: &RootShape,
        ch: &Chains,
        beta: &[usize],
        gamma: &[usize],
        cur: &mut RcSequence,
        out: &mut Vec<RcSequence>,
    ) {
        let e = shape.run_count();
        if k == e {
            let (x, t) = shape.points[e];
            let &(r, c) = cur.last().unwrap();
            let ok = match t {
                Turn::Source => r == gamma[x - 1],
                Turn::Sink => c == beta[x - 1],
            };
            if ok {
                out.push(cur.clone());
            }
            return;
        }
        let (x, t) = shape.points[k];
        for r in 0..ch.gamma[k].max(0) as usize {
            for c in 0..ch.beta[k].max(0) as usize {
                let ok = if k == 0 {
                    match t {
                        Turn::Source => r == gamma[x - 1],
                        Turn::Sink => c == beta[x - 1],
                    }
                } else {
                    let (pr, pc) = cur[k - 1];
                    match t {
                        Turn::Source => pr + r + 1 == gamma[x - 1] && pc + c < beta[x - 1],
                        Turn::Sink => pc + c + 1 == beta[x - 1] && pr + r < gamma[x - 1],
                    }
                };
                if ok {
                    cur.push((r, c));
                    rec(k + 1, shape, ch, beta, gamma, cur, out);
                    cur.pop();
                }
            }
        }
    }
    rec(0, shape, ch, beta, gamma, &mut cur, &mut out);
    out
}

/// All sequences in `B_{p,q}`, in lexicographic order.
pub fn enumerate_b(q: &Quiver, beta: &[usize], gamma: &[usize], root: Root) -> Result<Vec<RcSequence>> {
    check_pair(q, beta, gamma)?;
    let shape = zigzag(q)?.shape(root)?;
    let ch = chains_for(&shape, beta, gamma);
    Ok(enumerate_b_for(&shape, &ch, beta, gamma))
}

/// Minors of `X_{p,q}` choosing `column_counts[i]` columns from the block of
/// `sources[i]` and `row_counts[j]` rows from the block of `sinks[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MinorFamily {
    pub root: Root,
    pub rc: RcSequence,
    pub sources: Vec<usize>,
    pub column_counts: Vec<usize>,
    pub sinks: Vec<usize>,
    pub row_counts: Vec<usize>,
    pub size: usize,
    pub degree: usize,
}

impl MinorFamily {
    /// Dominant weights of `⊗ ∧^c V_x ⊗ ⊗ ∧^r V_y^*`, one per vertex.
    pub fn exterior_weights(&self, alpha: &[usize]) -> Vec<Vec<i64>> {
        let mut w: Vec<Vec<i64>> = alpha.iter().map(|&a| vec![0; a]).collect();
        for (&x, &c) in self.sources.iter().zip(&self.column_counts) {
            for e in w[x - 1].iter_mut().take(c) {
                *e = 1;
            }
        }
        for (&y, &r) in self.sinks.iter().zip(&self.row_counts) {
            let a = alpha[y - 1];
            for e in w[y - 1].iter_mut().skip(a.saturating_sub(r)) {
                *e = -1;
            }
        }
        w
    }

    /// Whether every chosen block count fits in its vertex dimension.
    pub fn fits(&self, alpha: &[usize]) -> bool {
        self.sources.iter().zip(&self.column_counts).all(|(&x, &c)| c <= alpha[x - 1])
            && self.sinks.iter().zip(&self.row_counts).all(|(&y, &r)| r <= alpha[y - 1])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RankCondition {
    pub root: Root,
    pub bound: usize,
}

fn family(shape: &RootShape, rc: &RcSequence, beta: &[usize], gamma: &[usize]) -> Result<MinorFamily> {
    let e = shape.run_count();
    let mut sources = Vec::new();
    let mut column_counts = Vec::new();
    let mut sinks = Vec::new();
    let mut row_counts = Vec::new();
    for (k, &(x, t)) in shape.points.iter().enumerate() {
        let adj = |f: fn(&(usize, usize)) -> usize| {
            (if k > 0 { f(&rc[k - 1]) } else { 0 }) + (if k < e { f(&rc[k]) } else { 0 })
        };
        match t {
            Turn::Source => {
                sources.push(x);
                column_counts.push(gamma[x - 1] + adj(|p| p.1) + 1);
            }
            Turn::Sink => {
                sinks.push(x);
                row_counts.push(beta[x - 1] + adj(|p| p.0) + 1);
            }
        }
    }
    let size: usize = column_counts.iter().sum();
    let rows: usize = row_counts.iter().sum();
    let bound = shape.rank_bound(beta, gamma);
    if size != rows || size != bound + 1 {
        return Err(Error::consistency(format!(
            "minor family at {} has {size} columns, {rows} rows and rank bound {bound}",
            shape.root
        )));
    }
    let degree = shape.runs.iter().zip(rc).map(|(&n, &(r, c))| n * (r + c + 1)).sum();
    Ok(MinorFamily { root: shape.root, rc: rc.clone(), sources, column_counts, sinks, row_counts, size, degree })
}

fn for_each_relevant(
    q: &Quiver,
    beta: &[usize],
    gamma: &[usize],
    mut f: impl FnMut(&RootShape, &Chains) -> Result<()>,
) -> Result<()> {
    check_pair(q, beta, gamma)?;
    let z = zigzag(q)?;
    for root in non_simple_roots(q.vertex_count()) {
        let shape = z.shape(root)?;
        let ch = chains_for(&shape, beta, gamma);
        if relevant_for(&shape, &ch, beta, gamma) {
            f(&shape, &ch)?;
        }
    }
    Ok(())
}

/// One family per relevant root and sequence in `B_{p,q}`.
pub fn minor_generators(q: &Quiver, beta: &[usize], gamma: &[usize]) -> Result<Vec<MinorFamily>> {
    let mut out = Vec::new();
    for_each_relevant(q, beta, gamma, |shape, ch| {
        let b = enumerate_b_for(shape, ch, beta, gamma);
        if b.is_empty() {
            return Err(Error::consistency(format!("relevant root {} has empty B", shape.root)));
        }
        for rc in &b {
            out.push(family(shape, rc, beta, gamma)?);
        }
        Ok(())
    })?;
    Ok(out)
}

pub fn rank_conditions(q: &Quiver, beta: &[usize], gamma: &[usize]) -> Result<Vec<RankCondition>> {
    let mut out = Vec::new();
    for_each_relevant(q, beta, gamma, |shape, _| {
        out.push(RankCondition { root: shape.root, bound: shape.rank_bound(beta, gamma) });
        Ok(())
    })?;
    Ok(out)
}

/// Multiset of `(degree, per-vertex weights)`.
pub type F1Factors = BTreeMap<(usize, Vec<Vec<i64>>), u64>;

/// The exterior-power factors of all emitted families.
pub fn f1_factors(q: &Quiver, beta: &[usize], gamma: &[usize]) -> Result<F1Factors> {
    let alpha: Vec<usize> = beta.iter().zip(gamma).map(|(b, c)| b + c).collect();
    let mut out = BTreeMap::new();
    for f in minor_generators(q, beta, gamma)? {
        *out.entry((f.degree, f.exterior_weights(&alpha))).or_insert(0) += 1;
    }
    Ok(out)
}

/// The representation `E_root`: one-dimensional on the support, identity maps inside.
pub fn indecomposable_rep(q: &Quiver, root: Root) -> Result<Representation> {
    let z = zigzag(q)?;
    z.check_root(root)?;
    let dim: Vec<usize> = (1..=q.vertex_count()).map(|x| usize::from(root.contains(x))).collect();
    let maps = q
        .arrows()
        .iter()
        .map(|&(t, h)| {
            if root.contains(t) && root.contains(h) {
                Matrix::identity(1)
            } else {
                Matrix::zeros(dim[h - 1], dim[t - 1])
            }
        })
        .collect();
    Representation::new(q.clone(), dim, maps)
}

/// Blocks of the projective presentation of the non-projective indecomposable
/// attached to `X_{p,q}`, and its cokernel root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
    pub cokernel: Root,
}

pub fn projective_presentation(q: &Quiver, root: Root) -> Result<Presentation> {
    let z = zigzag(q)?;
    let shape = z.shape(root)?;
    Ok(Presentation { sources: shape.sources(), sinks: shape.sinks(), cokernel: shape.cokernel_root(&z) })
}

/// Block `(sink index, source index)` holding the composite of `arrows`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub row: usize,
    pub col: usize,
    /// Input arrow indices from the source towards the sink.
    pub arrows: Vec<usize>,
}

/// Layout of `X_{p,q}`: rows by sinks, columns by sources, both increasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockMatrixSpec {
    pub root: Root,
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
    pub blocks: Vec<Block>,
    pub runs: Vec<usize>,
}

pub fn block_matrix(q: &Quiver, root: Root) -> Result<BlockMatrixSpec> {
    let z = zigzag(q)?;
    block_matrix_in(&z, root)
}

pub(crate) fn block_matrix_in(z: &ZigzagStructure, root: Root) -> Result<BlockMatrixSpec> {
    let shape = z.shape(root)?;
    let sources = shape.sources();
    let sinks = shape.sinks();
    let mut blocks = Vec::new();
    for w in shape.points.windows(2) {
        let ((a, ta), (b, _)) = (w[0], w[1]);
        let (src, snk) = if ta == Turn::Source { (a, b) } else { (b, a) };
        blocks.push(Block {
            row: sinks.iter().position(|&y| y == snk).unwrap(),
            col: sources.iter().position(|&x| x == src).unwrap(),
            arrows: z.run_arrows(src, snk),
        });
    }
    Ok(BlockMatrixSpec { root, sources, sinks, blocks, runs: shape.runs })
}

impl BlockMatrixSpec {
    fn offsets(verts: &[usize], dim: &[usize]) -> Vec<usize> {
        let mut off = vec![0];
        for &v in verts {
            off.push(off.last().unwrap() + dim[v - 1]);
        }
        off
    }

    pub fn row_offsets(&self, dim: &[usize]) -> Vec<usize> {
        Self::offsets(&self.sinks, dim)
    }

    pub fn col_offsets(&self, dim: &[usize]) -> Vec<usize> {
        Self::offsets(&self.sources, dim)
    }

    /// `X_{p,q}` evaluated at a representation.
    pub fn evaluate(&self, x: &Representation) -> Matrix {
        let dim = x.dim();
        let ro = self.row_offsets(dim);
        let co = self.col_offsets(dim);
        let mut m = Matrix::zeros(*ro.last().unwrap(), *co.last().unwrap());
        for b in &self.blocks {
            let src = self.sources[b.col];
            let mut acc = Matrix::identity(dim[src - 1]);
            for &a in &b.arrows {
                acc = x.map(a).mul(&acc);
            }
            m.paste(ro[b.row], co[b.col], &acc);
        }
        m
    }

    /// Plain-text layout with named composite blocks, arrows numbered from 1.
    pub fn render(&self) -> String {
        let name = |b: &Block| {
            let parts: Vec<String> = b.arrows.iter().rev().map(|a| format!("a{}", a + 1)).collect();
            format!("X[{}]", parts.join("*"))
        };
        let mut cells = vec![vec!["0".to_string(); self.sources.len()]; self.sinks.len()];
        for b in &self.blocks {
            cells[b.row][b.col] = name(b);
        }
        let mut header = vec![String::new()];
        header.extend(self.sources.iter().map(|x| format!("V{x}")));
        let mut rows = vec![header];
        for (j, &y) in self.sinks.iter().enumerate() {
            let mut r = vec![format!("V{y}")];
            r.extend(cells[j].iter().cloned());
            rows.push(r);
        }
        let width: Vec<usize> =
            (0..rows[0].len()).map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap()).collect();
        let mut out = String::new();
        for r in rows {
            let line: Vec<String> = r.iter().zip(&width).map(|(s, &w)| format!("{s:<w$}")).collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

/// `rank X_{p,q}` at a representation.
pub fn block_rank(q: &Quiver, root: Root, x: &Representation) -> Result<usize> {
    Ok(block_matrix(q, root)?.evaluate(x).rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::random_representation;

    pub(crate) fn a7() -> Quiver {
        Quiver::new(7, vec![(1, 2), (2, 3), (4, 3), (5, 4), (5, 6), (7, 6)]).unwrap()
    }

    const G7: [usize; 7] = [2, 4, 3, 2, 1, 1, 0];
    const B7: [usize; 7] = [1, 1, 1, 1, 1, 2, 2];

    #[test]
    fn zigzags() {
        let z = zigzag(&Quiver::equioriented_a(3)).unwrap();
        assert_eq!(z.turns, vec![(1, Turn::Source), (3, Turn::Sink)]);
        let z = zigzag(&a7()).unwrap();
        let expect = [(1, Turn::Source), (3, Turn::Sink), (5, Turn::Source), (6, Turn::Sink), (7, Turn::Source)];
        assert_eq!(z.turns, expect);
        assert!(zigzag(&Quiver::new(3, vec![(1, 3), (2, 3)]).unwrap()).is_err());
    }

    #[test]
    fn a7_example() {
        let q = a7();
        let root = Root::new(1, 7);
        let ch = chains(&q, &B7, &G7, root).unwrap();
        assert_eq!(ch.gamma, vec![3, 1, 1, 1]);
        assert_eq!(ch.beta, vec![1, 1, 1, 2]);
        assert!(is_relevant_combinatorial(&q, &B7, &G7, root).unwrap());
        assert_eq!(enumerate_b(&q, &B7, &G7, root).unwrap(), vec![vec![(2, 0), (0, 0), (0, 0), (0, 1)]]);
        let fams = minor_generators(&q, &B7, &G7).unwrap();
        assert_eq!(fams.len(), 1);
        let f = &fams[0];
        assert_eq!(f.root, root);
        assert_eq!(f.sources, vec![1, 5, 7]);
        assert_eq!(f.column_counts, vec![3, 2, 2]);
        assert_eq!(f.sinks, vec![3, 6]);
        assert_eq!(f.row_counts, vec![4, 3]);
        assert_eq!((f.size, f.degree), (7, 11));
        assert_eq!(rank_conditions(&q, &B7, &G7).unwrap(), vec![RankCondition { root, bound: 6 }]);
        let bm = block_matrix(&q, root).unwrap();
        assert_eq!(bm.runs, vec![2, 2, 1, 1]);
        let alpha: Vec<usize> = B7.iter().zip(&G7).map(|(a, b)| a + b).collect();
        assert_eq!((bm.row_offsets(&alpha)[2], bm.col_offsets(&alpha)[3]), (7, 7));
    }

    #[test]
    fn a2_cases() {
        let q = Quiver::equioriented_a(2);
        let root = Root::new(1, 2);
        let ch = chains(&q, &[2, 0], &[1, 3], root).unwrap();
        assert_eq!((ch.gamma, ch.beta), (vec![3], vec![2]));
        assert!(is_relevant_combinatorial(&q, &[2, 0], &[1, 3], root).unwrap());
        assert_eq!(enumerate_b(&q, &[2, 0], &[1, 3], root).unwrap(), vec![vec![(1, 0)]]);
        let f = &minor_generators(&q, &[2, 0], &[1, 3]).unwrap()[0];
        assert_eq!((f.size, f.degree, f.column_counts[0], f.row_counts[0]), (2, 2, 2, 2));
        assert_eq!(rank_conditions(&q, &[2, 0], &[1, 3]).unwrap()[0].bound, 1);
        assert!(!is_relevant_combinatorial(&q, &[3, 3], &[0, 0], root).unwrap());
        assert!(minor_generators(&q, &[3, 3], &[0, 0]).unwrap().is_empty());
        let f = &minor_generators(&q, &[2, 1], &[1, 2]).unwrap()[0];
        assert_eq!(f.exterior_weights(&[3, 3]), vec![vec![1, 1, 1], vec![-1, -1, -1]]);
    }

    #[test]
    fn inequalities_without_solutions() {
        let q = Quiver::new(4, vec![(1, 2), (3, 2), (3, 4)]).unwrap();
        let (b, g) = ([2, 1, 1, 1], [0, 1, 1, 1]);
        let root = Root::new(1, 4);
        assert!(enumerate_b(&q, &b, &g, root).unwrap().is_empty());
        let c = is_relevant(&q, &b, &g, root, 3).unwrap();
        assert!(c.inequalities && !c.combinatorial && !c.representation_theoretic);
        let roots: Vec<Root> = rank_conditions(&q, &b, &g).unwrap().iter().map(|c| c.root).collect();
        assert_eq!(roots, vec![Root::new(1, 2)]);
    }

    #[test]
    fn redundant_root_passes_hom_ext_only() {
        let q = Quiver::new(3, vec![(2, 1), (2, 3)]).unwrap();
        let (b, g) = ([0, 2, 0], [2, 0, 2]);
        let c = is_relevant(&q, &b, &g, Root::new(1, 3), 5).unwrap();
        assert!(!c.combinatorial && c.representation_theoretic);
        assert_eq!(c.cokernel, Root::new(2, 2));
        let roots: Vec<Root> = rank_conditions(&q, &b, &g).unwrap().iter().map(|c| c.root).collect();
        assert_eq!(roots, vec![Root::new(1, 2), Root::new(2, 3)]);
    }

    #[test]
    fn endomorphisms_of_indecomposables() {
        for mask in 0..16u32 {
            let right: Vec<bool> = (0..4).map(|i| mask >> i & 1 == 1).collect();
            let q = Quiver::type_a(&right);
            for p in 1..=5 {
                for r in p..=5 {
                    let e = indecomposable_rep(&q, Root::new(p, r)).unwrap();
                    assert_eq!(hom_dim(&e, &e).unwrap(), 1);
                }
            }
        }
    }

    #[test]
    fn rank_of_block_matrix_through_hom() {
        let mut seed = 0;
        for mask in 0..8u32 {
            let right: Vec<bool> = (0..3).map(|i| mask >> i & 1 == 1).collect();
            let q = Quiver::type_a(&right);
            for root in non_simple_roots(4) {
                let pres = projective_presentation(&q, root).unwrap();
                let e = indecomposable_rep(&q, pres.cokernel).unwrap();
                for _ in 0..3 {
                    seed += 1;
                    let dim: Vec<usize> = (0..4).map(|i| ((seed as usize) * 7 + i * 3) % 3).collect();
                    let x = random_representation(&q, &dim, seed).unwrap();
                    let src: usize = pres.sources.iter().map(|&v| dim[v - 1]).sum();
                    assert_eq!(block_rank(&q, root, &x).unwrap() + hom_dim(&e, &x).unwrap(), src);
                }
            }
        }
    }

    #[test]
    fn render_names_composites() {
        let text = block_matrix(&a7(), Root::new(1, 7)).unwrap().render();
        assert!(text.contains("X[a2*a1]"));
        assert!(text.lines().count() == 3);
    }
}
