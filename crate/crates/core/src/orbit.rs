//! Generic representations and extensions with certificates, rank invariants
//! and orbit-closure membership for type A, one-step detection, the
//! subrepresentations `Z^p`, and generators of arbitrary type-A orbit closures
//! as intersections of one-step closures.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{image, int, preimage, Matrix};
use crate::minors::{check_family, MinorCheck, DEFAULT_MINOR_CAP};
use crate::quiver::{DimensionVector, Quiver};
use crate::rep::{
    ext_dim, hom_dim, orbit_codim, random_representation_with, rng, GroupElement, Representation, DEFAULT_SAMPLE_BOUND,
};
use crate::typea::{
    block_matrix_in, indecomposable_rep, minor_generators, non_simple_roots, rank_conditions, support_pair, zigzag,
    MinorFamily, RankCondition, Root,
};

/// Attempts per certificate before giving up.
pub const MAX_ATTEMPTS: u64 = 8;

/// Splitmix-style derivation of independent seeds from one user seed.
pub fn derive_seed(seed: u64, stream: u64, attempt: u64) -> u64 {
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(attempt.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericRep {
    pub representative: Representation,
    pub dim: DimensionVector,
    pub certified: bool,
    /// Seed that produced the certified sample.
    pub seed: u64,
}

/// Random representation certified by `hom(T, T) = E_Q(d)`.
pub fn generic_representation(q: &Quiver, d: &[usize], seed: u64) -> Result<GenericRep> {
    q.check_dim(d)?;
    let target = q.euler_form(d)?;
    for attempt in 0..MAX_ATTEMPTS {
        let s = derive_seed(seed, 0, attempt);
        let t = random_representation_with(q, d, &mut rng(s), DEFAULT_SAMPLE_BOUND);
        if hom_dim(&t, &t)? as i64 == target {
            return Ok(GenericRep { representative: t, dim: d.to_vec(), certified: true, seed: s });
        }
    }
    Err(Error::Certification(format!("no sample of dimension {d:?} reached hom = {target} in {MAX_ATTEMPTS} attempts")))
}

/// A representative of `T_γ * T_β` with its sampled factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneStepWitness {
    pub beta: DimensionVector,
    pub gamma: DimensionVector,
    pub t_beta: Representation,
    pub t_gamma: Representation,
    /// At each vertex the first `β_x` coordinates span the subrepresentation.
    pub generic_extension_rep: Representation,
    pub codim: usize,
}

fn glue(t_beta: &Representation, t_gamma: &Representation, gluing: &[Matrix]) -> Representation {
    let q = t_beta.quiver().clone();
    let beta = t_beta.dim();
    let gamma = t_gamma.dim();
    let alpha: Vec<usize> = beta.iter().zip(gamma).map(|(a, b)| a + b).collect();
    let maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, &(t, h))| {
            let (bt, bh) = (beta[t - 1], beta[h - 1]);
            let mut m = Matrix::zeros(alpha[h - 1], alpha[t - 1]);
            m.paste(0, 0, t_beta.map(a));
            m.paste(0, bt, &gluing[a]);
            m.paste(bh, bt, t_gamma.map(a));
            m
        })
        .collect();
    Representation::new(q, alpha, maps).expect("block shapes agree")
}

fn random_gluing(q: &Quiver, beta: &[usize], gamma: &[usize], r: &mut impl Rng, bound: i64) -> Vec<Matrix> {
    q.arrows()
        .iter()
        .map(|&(t, h)| Matrix::from_fn(beta[h - 1], gamma[t - 1], |_, _| int(r.gen_range(-bound..=bound))))
        .collect()
}

/// Random point of the bundle over the open stratum, certified by
/// `codim O_W = ext(T_β, T_γ)`.
pub fn generic_extension(q: &Quiver, beta: &[usize], gamma: &[usize], seed: u64) -> Result<OneStepWitness> {
    q.check_dim(beta)?;
    q.check_dim(gamma)?;
    let mut last = None;
    for attempt in 0..MAX_ATTEMPTS {
        let t_beta = generic_representation(q, beta, derive_seed(seed, 1, attempt))?.representative;
        let t_gamma = generic_representation(q, gamma, derive_seed(seed, 2, attempt))?.representative;
        let mut r = rng(derive_seed(seed, 3, attempt));
        let gluing = random_gluing(q, beta, gamma, &mut r, DEFAULT_SAMPLE_BOUND);
        let w = glue(&t_beta, &t_gamma, &gluing);
        let expected = ext_dim(&t_beta, &t_gamma)?;
        let codim = orbit_codim(&w)?;
        if codim == expected {
            return Ok(OneStepWitness {
                beta: beta.to_vec(),
                gamma: gamma.to_vec(),
                t_beta,
                t_gamma,
                generic_extension_rep: w,
                codim,
            });
        }
        last = Some((codim, expected));
    }
    let (c, e) = last.unwrap();
    Err(Error::Certification(format!("generic extension has codimension {c}, expected {e}")))
}

/// Ranks of all `X_{p,q}`, `p < q`, at a type-A representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankInvariant {
    pub dim: DimensionVector,
    pub ranks: Vec<(Root, usize)>,
}

impl RankInvariant {
    pub fn of(x: &Representation) -> Result<Self> {
        let z = zigzag(x.quiver())?;
        let mut ranks = Vec::new();
        for root in non_simple_roots(x.quiver().vertex_count()) {
            ranks.push((root, block_matrix_in(&z, root)?.evaluate(x).rank()));
        }
        Ok(RankInvariant { dim: x.dim().clone(), ranks })
    }

    pub fn get(&self, root: Root) -> Option<usize> {
        self.ranks.iter().find(|r| r.0 == root).map(|r| r.1)
    }
}

/// `X ∈ closure(O_Y)` iff every rank at `X` is at most the rank at `Y`.
pub fn membership(x: &RankInvariant, y: &RankInvariant) -> Result<bool> {
    if x.dim != y.dim || x.ranks.len() != y.ranks.len() {
        return Err(Error::input("rank invariants of different dimension vectors"));
    }
    Ok(x.ranks.iter().zip(&y.ranks).all(|(a, b)| a.1 <= b.1))
}

fn check_sub(beta: &[usize], alpha: &[usize]) -> Result<Vec<usize>> {
    if beta.len() != alpha.len() || beta.iter().zip(alpha).any(|(b, a)| b > a) {
        return Err(Error::input(format!("{beta:?} is not below {alpha:?}")));
    }
    Ok(alpha.iter().zip(beta).map(|(a, b)| a - b).collect())
}

/// Whether the representation with rank invariant `v` is `T_{α−β} * T_β`.
pub fn is_one_step(q: &Quiver, v: &RankInvariant, beta: &[usize], seed: u64) -> Result<bool> {
    let gamma = check_sub(beta, &v.dim)?;
    Ok(generic_extension_ranks(q, beta, &gamma, seed)? == *v)
}

/// Rank invariant of `T_γ * T_β`, required to agree across two independent seeds.
pub fn generic_extension_ranks(q: &Quiver, beta: &[usize], gamma: &[usize], seed: u64) -> Result<RankInvariant> {
    let a = RankInvariant::of(&generic_extension(q, beta, gamma, derive_seed(seed, 4, 0))?.generic_extension_rep)?;
    let b = RankInvariant::of(&generic_extension(q, beta, gamma, derive_seed(seed, 4, 1))?.generic_extension_rep)?;
    if a != b {
        return Err(Error::Certification(format!(
            "generic extensions for beta {beta:?} disagree between independent seeds"
        )));
    }
    Ok(a)
}

/// First `β` in lexicographic order for which `v` is one-step.
pub fn one_step_search(q: &Quiver, v: &RankInvariant, seed: u64) -> Result<Option<DimensionVector>> {
    let alpha = &v.dim;
    let mut beta = vec![0; alpha.len()];
    loop {
        if is_one_step(q, v, &beta, seed)? {
            return Ok(Some(beta));
        }
        let mut i = alpha.len();
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if beta[i] < alpha[i] {
                beta[i] += 1;
                break;
            }
            beta[i] = 0;
        }
    }
}

/// Direct sum of interval modules `E_root^{⊕ mult}`.
pub fn from_summands(q: &Quiver, summands: &[(Root, usize)]) -> Result<Representation> {
    let mut v = Representation::zero(q, &vec![0; q.vertex_count()]);
    for &(root, mult) in summands {
        let e = indecomposable_rep(q, root)?;
        for _ in 0..mult {
            v = v.direct_sum(&e)?;
        }
    }
    Ok(v)
}

/// Searches `V = M ⊕ N` over sub-multisets `N` of the summands with `M`, `N`
/// generic and `Ext(M, N) = 0`; returns `dim N` of the first hit.
pub fn split_sufficient(q: &Quiver, summands: &[(Root, usize)]) -> Result<Option<DimensionVector>> {
    let mut take = vec![0usize; summands.len()];
    loop {
        let n_part: Vec<(Root, usize)> = summands.iter().zip(&take).map(|(s, &k)| (s.0, k)).collect();
        let m_part: Vec<(Root, usize)> = summands.iter().zip(&take).map(|(s, &k)| (s.0, s.1 - k)).collect();
        let n = from_summands(q, &n_part)?;
        let m = from_summands(q, &m_part)?;
        if ext_dim(&m, &m)? == 0 && ext_dim(&n, &n)? == 0 && ext_dim(&m, &n)? == 0 {
            return Ok(Some(n.dim().clone()));
        }
        let mut i = take.len();
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if take[i] < summands[i].1 {
                take[i] += 1;
                break;
            }
            take[i] = 0;
        }
    }
}

/// The subrepresentation `Z^p ⊆ Y` with its dimension vector, plus the
/// chosen bases (as columns) of each `Z^p_x ⊆ Y_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZSubrep {
    pub rep: Representation,
    pub beta: DimensionVector,
    pub bases: Vec<Matrix>,
}

/// Left of `p` everything when the arrow at `p` points right and nothing
/// otherwise; rightwards images along arrows and preimages against them.
pub fn z_p_subrep(y: &Representation, p: usize) -> Result<ZSubrep> {
    let q = y.quiver();
    let n = q.vertex_count();
    if p == 0 || p >= n {
        return Err(Error::input(format!("vertex {p} is outside 1..{n}")));
    }
    let z = zigzag(q)?;
    let dim = y.dim();
    let full = z.points_right(p);
    let mut bases: Vec<Matrix> =
        (1..=p).map(|x| if full { Matrix::identity(dim[x - 1]) } else { Matrix::zeros(dim[x - 1], 0) }).collect();
    for x in p..n {
        let a = z.arrow_between(x);
        let prev = &bases[x - 1];
        let next = if z.points_right(x) { image(y.map(a), prev) } else { preimage(y.map(a), prev) };
        bases.push(next);
    }
    let beta: Vec<usize> = bases.iter().map(|b| b.cols()).collect();
    let mut maps = Vec::with_capacity(q.arrows().len());
    for (a, &(t, h)) in q.arrows().iter().enumerate() {
        let moved = y.map(a).mul(&bases[t - 1]);
        let m = bases[h - 1]
            .solve_in_column_space(&moved)
            .map_err(|_| Error::consistency(format!("Z^{p} is not closed under arrow {}", a + 1)))?;
        maps.push(m);
    }
    let rep = Representation::new(q.clone(), beta.clone(), maps)?;
    Ok(ZSubrep { rep, beta, bases })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepData {
    pub p: usize,
    pub beta: DimensionVector,
    pub rank_conditions: Vec<RankCondition>,
    pub families: Vec<MinorFamily>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeIntersectionResult {
    pub steps: Vec<StepData>,
    pub rank_conditions: Vec<RankCondition>,
    pub families: Vec<MinorFamily>,
}

/// For each `p < n`, the one-step closure through `Z^p`; rank agreement with
/// `Y` on all `X_{p,q}` is asserted on a sampled `W^p`. The combined list keeps,
/// for every root, the families of the smallest rank bound.
pub fn scheme_intersection_generators(y: &Representation, seed: u64) -> Result<SchemeIntersectionResult> {
    let q = y.quiver();
    let n = q.vertex_count();
    let alpha = y.dim().clone();
    let y_ranks = RankInvariant::of(y)?;
    let mut steps = Vec::new();
    for p in 1..n {
        let zp = z_p_subrep(y, p)?;
        let gamma: Vec<usize> = alpha.iter().zip(&zp.beta).map(|(a, b)| a - b).collect();
        let w = generic_extension(q, &zp.beta, &gamma, derive_seed(seed, 10, p as u64))?;
        let w_ranks = RankInvariant::of(&w.generic_extension_rep)?;
        for r in p + 1..=n {
            let root = Root::new(p, r);
            if w_ranks.get(root) != y_ranks.get(root) {
                return Err(Error::consistency(format!(
                    "rank of X{root} is {:?} on W^{p} but {:?} on Y",
                    w_ranks.get(root),
                    y_ranks.get(root)
                )));
            }
        }
        steps.push(StepData {
            p,
            rank_conditions: rank_conditions(q, &zp.beta, &gamma)?,
            families: minor_generators(q, &zp.beta, &gamma)?,
            beta: zp.beta,
        });
    }
    let mut best: BTreeMap<Root, usize> = BTreeMap::new();
    for c in steps.iter().flat_map(|s| &s.rank_conditions) {
        let e = best.entry(c.root).or_insert(c.bound);
        *e = (*e).min(c.bound);
    }
    let mut families = BTreeSet::new();
    for s in &steps {
        for f in &s.families {
            if s.rank_conditions.iter().any(|c| c.root == f.root && best[&c.root] == c.bound) {
                families.insert(f.clone());
            }
        }
    }
    let rank_conditions = best.into_iter().map(|(root, bound)| RankCondition { root, bound }).collect();
    Ok(SchemeIntersectionResult { steps, rank_conditions, families: families.into_iter().collect() })
}

/// Conjugate by a random unimodular group element.
pub fn orbit_sample(v: &Representation, r: &mut impl Rng) -> Representation {
    GroupElement::random_unimodular(v.dim(), r).act(v).expect("shapes agree")
}

/// Scale each arrow by a random integer in `[-2, 2]` (zero included), then conjugate.
pub fn degeneration_sample(v: &Representation, r: &mut impl Rng) -> Representation {
    let scaled = v.map_arrows(|_, m| m.scale(&int(r.gen_range(-2..=2))));
    orbit_sample(&scaled, r)
}

/// A random point of the image of the bundle: arbitrary `A`, `B`, gluing, then conjugated.
pub fn bundle_point(w: &OneStepWitness, r: &mut impl Rng) -> Representation {
    let q = w.t_beta.quiver();
    let a = random_representation_with(q, &w.beta, r, 5);
    let b = random_representation_with(q, &w.gamma, r, 5);
    let a = if r.gen_bool(0.5) { degeneration_sample(&a, r) } else { a };
    let b = if r.gen_bool(0.5) { degeneration_sample(&b, r) } else { b };
    let g = random_gluing(q, &w.beta, &w.gamma, r, 5);
    orbit_sample(&glue(&a, &b, &g), r)
}

/// Random multiset of intervals filling `alpha` exactly.
pub fn random_interval_decomposition(q: &Quiver, alpha: &[usize], r: &mut impl Rng) -> Vec<(Root, usize)> {
    let n = q.vertex_count();
    let mut left = alpha.to_vec();
    let mut counts: BTreeMap<Root, usize> = BTreeMap::new();
    while left.iter().any(|&d| d > 0) {
        let p = r.gen_range(1..=n);
        let qq = r.gen_range(p..=n);
        if (p..=qq).all(|x| left[x - 1] > 0) {
            for x in p..=qq {
                left[x - 1] -= 1;
            }
            *counts.entry(Root::new(p, qq)).or_insert(0) += 1;
        }
    }
    counts.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingReport {
    pub samples: usize,
    pub evaluations: usize,
    pub violations: usize,
    /// Largest absolute value among the nonzero minors found on samples.
    pub max_violation: String,
    /// Per family, whether some minor is nonzero at a random ambient point.
    pub ambient_nonzero: Vec<bool>,
    pub pass: bool,
}

/// Evaluates every family on `trials` orbit samples, as many degenerations,
/// and bundle points when a one-step witness is given.
pub fn verify_vanishing(
    families: &[MinorFamily],
    target: &Representation,
    witness: Option<&OneStepWitness>,
    trials: usize,
    seed: u64,
) -> Result<VanishingReport> {
    let q = target.quiver();
    let z = zigzag(q)?;
    let specs = families.iter().map(|f| block_matrix_in(&z, f.root)).collect::<Result<Vec<_>>>()?;
    let mut r = rng(seed);
    let mut samples = Vec::new();
    for _ in 0..trials {
        samples.push(orbit_sample(target, &mut r));
        samples.push(degeneration_sample(target, &mut r));
        if let Some(w) = witness {
            samples.push(bundle_point(w, &mut r));
        }
    }
    let mut evaluations = 0;
    let mut violations = 0;
    let mut worst = num_rational::BigRational::from_integer(0.into());
    for x in &samples {
        for (f, s) in families.iter().zip(&specs) {
            evaluations += 1;
            if let MinorCheck::Nonzero { value, .. } = check_family(s, f, x, DEFAULT_MINOR_CAP)? {
                violations += 1;
                let v = num_traits::Signed::abs(&value);
                if v > worst {
                    worst = v;
                }
            }
        }
    }
    let ambient = random_representation_with(q, target.dim(), &mut r, DEFAULT_SAMPLE_BOUND);
    let ambient_nonzero = families
        .iter()
        .zip(&specs)
        .map(|(f, s)| Ok(matches!(check_family(s, f, &ambient, DEFAULT_MINOR_CAP)?, MinorCheck::Nonzero { .. })))
        .collect::<Result<Vec<_>>>()?;
    let pass = violations == 0 && ambient_nonzero.iter().all(|&b| b);
    Ok(VanishingReport {
        samples: samples.len(),
        evaluations,
        violations,
        max_violation: worst.to_string(),
        ambient_nonzero,
        pass,
    })
}

/// `hom(E, X) ≥ ⟨dim E, β⟩` for every relevant root, with `E` the support
/// cokernel and both sides computed on the support.
pub fn hom_criterion(x: &Representation, beta: &[usize], gamma: &[usize]) -> Result<bool> {
    for c in rank_conditions(x.quiver(), beta, gamma)? {
        let (e, local) = support_pair(x, c.root)?;
        let b = &beta[c.root.p - 1..c.root.q];
        if (hom_dim(&e, &local)? as i64) < local.quiver().euler_product(e.dim(), b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq_a(n: usize) -> Quiver {
        Quiver::equioriented_a(n)
    }

    #[test]
    fn generic_a2_certificate() {
        let q = eq_a(2);
        let t = generic_representation(&q, &[2, 3], 7).unwrap();
        assert!(t.certified);
        assert_eq!(hom_dim(&t.representative, &t.representative).unwrap(), 7);
        assert_eq!(t, generic_representation(&q, &[2, 3], 7).unwrap());
        let z = generic_representation(&q, &[0, 0], 1).unwrap();
        assert_eq!(z.representative.total_dim(), 0);
    }

    #[test]
    fn a4_generic_extension_decomposes() {
        let q = eq_a(4);
        let w = generic_extension(&q, &[1, 0, 1, 0], &[0, 1, 0, 1], 3).unwrap();
        let ranks = RankInvariant::of(&w.generic_extension_rep).unwrap();
        for &(root, r) in &ranks.ranks {
            assert_eq!(r, usize::from(root == Root::new(2, 3)), "{root}");
        }
        let summands = [(Root::new(1, 1), 1), (Root::new(2, 3), 1), (Root::new(4, 4), 1)];
        let v = from_summands(&q, &summands).unwrap();
        assert_eq!(RankInvariant::of(&v).unwrap(), ranks);
        assert_eq!(split_sufficient(&q, &summands).unwrap(), None);
    }

    #[test]
    fn sum_of_simples_is_not_one_step() {
        let q = eq_a(3);
        let v = from_summands(&q, &[(Root::new(1, 1), 1), (Root::new(2, 2), 1), (Root::new(3, 3), 1)]).unwrap();
        let ranks = RankInvariant::of(&v).unwrap();
        assert_eq!(one_step_search(&q, &ranks, 5).unwrap(), None);
    }

    #[test]
    fn generic_is_split() {
        let q = eq_a(3);
        let summands = [(Root::new(1, 3), 2)];
        assert_eq!(split_sufficient(&q, &summands).unwrap(), Some(vec![0, 0, 0]));
        let ranks = RankInvariant::of(&from_summands(&q, &summands).unwrap()).unwrap();
        assert!(is_one_step(&q, &ranks, &[0, 0, 0], 1).unwrap());
    }

    #[test]
    fn z_p_of_simples() {
        let q = eq_a(3);
        let y = from_summands(&q, &[(Root::new(1, 1), 1), (Root::new(2, 2), 1), (Root::new(3, 3), 1)]).unwrap();
        assert_eq!(z_p_subrep(&y, 1).unwrap().beta, vec![1, 0, 0]);
        assert_eq!(z_p_subrep(&y, 2).unwrap().beta, vec![1, 1, 0]);
    }

    #[test]
    fn intersection_for_simples_is_entrywise() {
        let q = eq_a(3);
        let y = from_summands(&q, &[(Root::new(1, 1), 1), (Root::new(2, 2), 1), (Root::new(3, 3), 1)]).unwrap();
        let res = scheme_intersection_generators(&y, 9).unwrap();
        let roots: Vec<Root> = res.families.iter().map(|f| f.root).collect();
        assert!(roots.contains(&Root::new(1, 2)) && roots.contains(&Root::new(2, 3)));
        assert!(res.families.iter().all(|f| f.size == 1));
        let gen = from_summands(&q, &[(Root::new(1, 3), 1)]).unwrap();
        assert!(scheme_intersection_generators(&gen, 9).unwrap().families.is_empty());
    }

    #[test]
    fn membership_basics() {
        let q = eq_a(3);
        let y = from_summands(&q, &[(Root::new(1, 2), 1), (Root::new(3, 3), 1)]).unwrap();
        let zero = Representation::zero(&q, y.dim());
        let (yr, zr) = (RankInvariant::of(&y).unwrap(), RankInvariant::of(&zero).unwrap());
        assert!(membership(&yr, &yr).unwrap());
        assert!(membership(&zr, &yr).unwrap());
        assert!(!membership(&yr, &zr).unwrap());
    }
}
