#![allow(dead_code)]

use orbitres::partitions::{lr_expand, Partition};
use orbitres::resolution::{BundleSpec, Engine, EnumOptions, PartitionCollection};
use orbitres::Quiver;
use rand::seq::SliceRandom;
use rand::Rng;

pub type F1 = orbitres::typea::F1Factors;

pub fn random_type_a(r: &mut impl Rng, max_n: usize) -> Quiver {
    let n = r.gen_range(2..=max_n);
    let right: Vec<bool> = (0..n - 1).map(|_| r.gen_bool(0.5)).collect();
    Quiver::type_a(&right)
}

/// A random oriented tree, with occasional parallel copies of its arrows.
pub fn random_tree_quiver(r: &mut impl Rng, max_n: usize) -> Quiver {
    let n = r.gen_range(2..=max_n);
    let mut arrows: Vec<(usize, usize)> = (2..=n)
        .map(|j| {
            let i = r.gen_range(1..j);
            if r.gen_bool(0.5) {
                (i, j)
            } else {
                (j, i)
            }
        })
        .collect();
    for _ in 0..r.gen_range(0..=1) {
        let a = arrows[r.gen_range(0..arrows.len())];
        arrows.push(a);
    }
    Quiver::new(n, arrows).unwrap()
}

pub fn random_vector(r: &mut impl Rng, n: usize, max: usize) -> Vec<usize> {
    (0..n).map(|_| r.gen_range(0..=max)).collect()
}

pub fn random_partition_in_box(r: &mut impl Rng, rows: usize, cols: usize) -> Partition {
    let mut v: Vec<usize> = (0..rows).map(|_| r.gen_range(0..=cols)).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    Partition::new(&v).unwrap()
}

/// A random valid collection: `λ(a)` in the `β_ta × γ_ha` box and, at each
/// vertex, one constituent `μ(x)` of the outgoing product and one `ν(x)` of
/// the conjugated incoming product.
pub fn random_collection(r: &mut impl Rng, spec: &BundleSpec) -> Option<PartitionCollection> {
    let q = &spec.quiver;
    let lambda: Vec<Partition> =
        q.arrows().iter().map(|&(t, h)| random_partition_in_box(r, spec.beta[t - 1], spec.gamma[h - 1])).collect();
    let (mut mu, mut nu, mut multiplicity) = (Vec::new(), Vec::new(), 1);
    for x in 1..=q.vertex_count() {
        let out: Vec<Partition> =
            q.arrows().iter().zip(&lambda).filter(|((t, _), _)| *t == x).map(|(_, l)| l.clone()).collect();
        let inc: Vec<Partition> =
            q.arrows().iter().zip(&lambda).filter(|((_, h), _)| *h == x).map(|(_, l)| l.conjugate()).collect();
        let (m, c1) = lr_expand(&out, spec.beta[x - 1]).choose(r)?.clone();
        let (v, c2) = lr_expand(&inc, spec.gamma[x - 1]).choose(r)?.clone();
        mu.push(m);
        nu.push(v);
        multiplicity *= c1 * c2;
    }
    Some(PartitionCollection { lambda, mu, nu, multiplicity })
}

/// `F_1` of the resolution, aggregated by degree and weights.
pub fn resolution_f1(engine: &mut Engine, q: &Quiver, beta: &[usize], gamma: &[usize]) -> F1 {
    let spec = BundleSpec::new(q.clone(), beta.to_vec(), gamma.to_vec()).unwrap();
    let table = engine.assemble(&spec, EnumOptions { prune_at: Some(1), ..Default::default() }).unwrap();
    let mut out = F1::new();
    for term in table.terms_at(1) {
        *out.entry((term.t, term.weights.clone())).or_insert(0) += term.multiplicity;
    }
    out
}

/// Every orientation of `A_n` and every `(β, γ)` with `β_x + γ_x ≤ max_alpha`.
pub fn for_each_type_a_spec(n: usize, max_alpha: usize, mut f: impl FnMut(&Quiver, &[usize], &[usize])) {
    let pairs: Vec<(usize, usize)> = (0..=max_alpha).flat_map(|a| (0..=a).map(move |b| (b, a - b))).collect();
    let total = pairs.len().pow(n as u32);
    let (mut beta, mut gamma) = (vec![0; n], vec![0; n]);
    for o in 0..1usize << (n - 1) {
        let right: Vec<bool> = (0..n - 1).map(|i| o >> i & 1 == 1).collect();
        let q = Quiver::type_a(&right);
        for code in 0..total {
            let mut c = code;
            for x in 0..n {
                (beta[x], gamma[x]) = pairs[c % pairs.len()];
                c /= pairs.len();
            }
            f(&q, &beta, &gamma);
        }
    }
}
