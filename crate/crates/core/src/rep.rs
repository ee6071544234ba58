//! Representations over exact arithmetic, the group action, and Hom/Ext dimensions.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{int, Matrix};
use crate::quiver::{DimensionVector, Quiver};

/// Default bound `B` for uniformly sampled integer entries in `[-B, B]`.
pub const DEFAULT_SAMPLE_BOUND: i64 = 100;

/// Mersenne prime `2^61 - 1`, the default modulus for modular ranks.
pub const DEFAULT_PRIME: u64 = (1 << 61) - 1;

/// Field in which ranks are computed. Inputs always carry rational entries;
/// a prime field reduces them modulo `p` before elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Field {
    #[default]
    Rational,
    Prime(u64),
}

impl Field {
    pub fn rank(&self, m: &Matrix) -> Result<usize> {
        match *self {
            Field::Rational => Ok(m.rank()),
            Field::Prime(p) => {
                if p <= 1 << 30 {
                    return Err(Error::input(format!("prime {p} is below 2^30")));
                }
                m.rank_mod_prime(p)
            }
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A representation: one `α_ha × α_ta` matrix per arrow.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Representation {
    quiver: Quiver,
    dim: DimensionVector,
    maps: Vec<Matrix>,
}

impl Representation {
    pub fn new(quiver: Quiver, dim: DimensionVector, maps: Vec<Matrix>) -> Result<Self> {
        quiver.check_dim(&dim)?;
        if maps.len() != quiver.arrows().len() {
            return Err(Error::input(format!("{} matrices given for {} arrows", maps.len(), quiver.arrows().len())));
        }
        for (i, (m, &(t, h))) in maps.iter().zip(quiver.arrows()).enumerate() {
            if m.shape() != (dim[h - 1], dim[t - 1]) {
                return Err(Error::input(format!(
                    "matrix of arrow {} has shape {:?}, expected {:?}",
                    i + 1,
                    m.shape(),
                    (dim[h - 1], dim[t - 1])
                )));
            }
        }
        Ok(Representation { quiver, dim, maps })
    }

    pub fn zero(quiver: &Quiver, dim: &[usize]) -> Self {
        let maps = quiver.arrows().iter().map(|&(t, h)| Matrix::zeros(dim[h - 1], dim[t - 1])).collect();
        Representation { quiver: quiver.clone(), dim: dim.to_vec(), maps }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn dim(&self) -> &DimensionVector {
        &self.dim
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn map(&self, a: usize) -> &Matrix {
        &self.maps[a]
    }

    pub fn total_dim(&self) -> usize {
        self.dim.iter().sum()
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &Representation) -> Result<Representation> {
        if self.quiver != other.quiver {
            return Err(Error::input("direct sum of representations of different quivers"));
        }
        let dim: Vec<usize> = self.dim.iter().zip(&other.dim).map(|(a, b)| a + b).collect();
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| {
                let mut m = Matrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
                m.paste(0, 0, a);
                m.paste(a.rows(), a.cols(), b);
                m
            })
            .collect();
        Ok(Representation { quiver: self.quiver.clone(), dim, maps })
    }

    /// Replaces each arrow matrix by `f(arrow, matrix)`; shapes must be preserved.
    pub fn map_arrows(&self, mut f: impl FnMut(usize, &Matrix) -> Matrix) -> Representation {
        let maps: Vec<Matrix> = self
            .maps
            .iter()
            .enumerate()
            .map(|(a, m)| {
                let out = f(a, m);
                assert_eq!(out.shape(), m.shape());
                out
            })
            .collect();
        Representation { quiver: self.quiver.clone(), dim: self.dim.clone(), maps }
    }
}

fn same_quiver(v: &Representation, w: &Representation) -> Result<()> {
    if v.quiver != w.quiver {
        return Err(Error::input("representations live on different quivers"));
    }
    Ok(())
}

/// The matrix of `d^V_W : ⊕_x Hom(V_x, W_x) → ⊕_a Hom(V_ta, W_ha)`,
/// `φ ↦ (φ_ha V(a) − W(a) φ_ta)_a`, with entries of each `φ_x` as columns.
pub fn hom_map(v: &Representation, w: &Representation) -> Result<Matrix> {
    same_quiver(v, w)?;
    let q = &v.quiver;
    let n = q.vertex_count();
    let mut col_offset = vec![0usize; n + 1];
    for x in 0..n {
        col_offset[x + 1] = col_offset[x] + w.dim[x] * v.dim[x];
    }
    let rows: usize = q.arrows().iter().map(|&(t, h)| w.dim[h - 1] * v.dim[t - 1]).sum();
    let mut m = Matrix::zeros(rows, col_offset[n]);
    let mut row0 = 0;
    for (a, &(t, h)) in q.arrows().iter().enumerate() {
        let (t, h) = (t - 1, h - 1);
        let (vt, vh, wt, wh) = (v.dim[t], v.dim[h], w.dim[t], w.dim[h]);
        let va = &v.maps[a];
        let wa = &w.maps[a];
        // column index of φ_x[i, j]
        let col = |x: usize, i: usize, j: usize, vx: usize| col_offset[x] + i * vx + j;
        for r in 0..wh {
            for c in 0..vt {
                let row = row0 + r * vt + c;
                for k in 0..vh {
                    let e = va.get(k, c);
                    if !e.is_zero() {
                        let idx = col(h, r, k, vh);
                        let cur = m.get(row, idx) + e;
                        m.set(row, idx, cur);
                    }
                }
                for k in 0..wt {
                    let e = wa.get(r, k);
                    if !e.is_zero() {
                        let idx = col(t, k, c, vt);
                        let cur = m.get(row, idx) - e;
                        m.set(row, idx, cur);
                    }
                }
            }
        }
        row0 += wh * vt;
    }
    Ok(m)
}

pub fn hom_dim_in(v: &Representation, w: &Representation, field: Field) -> Result<usize> {
    let m = hom_map(v, w)?;
    Ok(m.cols() - field.rank(&m)?)
}

pub fn hom_dim(v: &Representation, w: &Representation) -> Result<usize> {
    hom_dim_in(v, w, Field::Rational)
}

/// Dimension of the cokernel of `d^V_W`, which is `Ext^1(V, W)`.
pub fn coker_dim_in(v: &Representation, w: &Representation, field: Field) -> Result<usize> {
    let m = hom_map(v, w)?;
    Ok(m.rows() - field.rank(&m)?)
}

pub fn ext_dim_in(v: &Representation, w: &Representation, field: Field) -> Result<usize> {
    let hom = hom_dim_in(v, w, field)? as i64;
    let e = hom - v.quiver.euler_product(&v.dim, &w.dim)?;
    if e < 0 {
        return Err(Error::consistency(format!("negative ext dimension {e}")));
    }
    Ok(e as usize)
}

pub fn ext_dim(v: &Representation, w: &Representation) -> Result<usize> {
    ext_dim_in(v, w, Field::Rational)
}

/// Codimension of the orbit closure of `v` in its representation space.
pub fn orbit_codim(v: &Representation) -> Result<usize> {
    ext_dim(v, v)
}

pub fn orbit_codim_in(v: &Representation, field: Field) -> Result<usize> {
    ext_dim_in(v, v, field)
}

fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| int(rng.gen_range(-bound..=bound)))
}

/// Uniform integer entries in `[-bound, bound]`, deterministic in the seed.
pub fn random_representation_bounded(q: &Quiver, dim: &[usize], seed: u64, bound: i64) -> Result<Representation> {
    q.check_dim(dim)?;
    let mut r = rng(seed);
    Ok(random_representation_with(q, dim, &mut r, bound))
}

pub fn random_representation(q: &Quiver, dim: &[usize], seed: u64) -> Result<Representation> {
    random_representation_bounded(q, dim, seed, DEFAULT_SAMPLE_BOUND)
}

pub(crate) fn random_representation_with(q: &Quiver, dim: &[usize], rng: &mut impl Rng, bound: i64) -> Representation {
    let maps = q.arrows().iter().map(|&(t, h)| random_matrix(rng, dim[h - 1], dim[t - 1], bound)).collect();
    Representation { quiver: q.clone(), dim: dim.to_vec(), maps }
}

/// One invertible matrix per vertex, stored with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    mats: Vec<Matrix>,
    inverses: Vec<Matrix>,
}

impl GroupElement {
    pub fn new(mats: Vec<Matrix>) -> Result<Self> {
        let inverses = mats
            .iter()
            .enumerate()
            .map(|(x, m)| {
                m.inverse().map_err(|_| Error::input(format!("group element is not invertible at vertex {}", x + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupElement { mats, inverses })
    }

    pub fn identity(dim: &[usize]) -> Self {
        let mats: Vec<Matrix> = dim.iter().map(|&d| Matrix::identity(d)).collect();
        GroupElement { inverses: mats.clone(), mats }
    }

    /// Random element with integer entries in `[-bound, bound]`, resampled until invertible.
    pub fn random(dim: &[usize], rng: &mut impl Rng, bound: i64) -> Self {
        let mut mats = Vec::with_capacity(dim.len());
        let mut inverses = Vec::with_capacity(dim.len());
        for &d in dim {
            loop {
                let m = random_matrix(rng, d, d, bound);
                if let Ok(inv) = m.inverse() {
                    mats.push(m);
                    inverses.push(inv);
                    break;
                }
            }
        }
        GroupElement { mats, inverses }
    }

    /// Random element of determinant ±1 with integer inverse: a product of
    /// elementary row operations, a permutation and signs.
    pub fn random_unimodular(dim: &[usize], rng: &mut impl Rng) -> Self {
        let mut mats = Vec::with_capacity(dim.len());
        for &d in dim {
            let mut m = Matrix::identity(d);
            if d > 1 {
                for _ in 0..3 * d {
                    let i = rng.gen_range(0..d);
                    let mut j = rng.gen_range(0..d - 1);
                    if j >= i {
                        j += 1;
                    }
                    let f = int(rng.gen_range(-3..=3));
                    for c in 0..d {
                        let v = m.get(i, c) + &f * m.get(j, c);
                        m.set(i, c, v);
                    }
                }
            }
            for i in 0..d {
                if rng.gen_bool(0.5) {
                    for c in 0..d {
                        let v = -m.get(i, c).clone();
                        m.set(i, c, v);
                    }
                }
            }
            mats.push(m);
        }
        let inverses = mats.iter().map(|m| m.inverse().expect("unimodular")).collect();
        GroupElement { mats, inverses }
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            mats: self.mats.iter().zip(&other.mats).map(|(a, b)| a.mul(b)).collect(),
            inverses: self.inverses.iter().zip(&other.inverses).map(|(a, b)| b.mul(a)).collect(),
        }
    }

    /// `V(a) ↦ g_ha · V(a) · g_ta^{-1}`.
    pub fn act(&self, v: &Representation) -> Result<Representation> {
        if self.mats.len() != v.dim.len() || self.mats.iter().zip(&v.dim).any(|(m, &d)| m.rows() != d) {
            return Err(Error::input("group element does not match the dimension vector"));
        }
        Ok(v.map_arrows(|a, m| {
            let (t, h) = v.quiver.arrows()[a];
            self.mats[h - 1].mul(m).mul(&self.inverses[t - 1])
        }))
    }
}

pub fn act(g: &GroupElement, v: &Representation) -> Result<Representation> {
    g.act(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn a2() -> Quiver {
        Quiver::equioriented_a(2)
    }

    fn rep(q: &Quiver, dim: &[usize], maps: Vec<Matrix>) -> Representation {
        Representation::new(q.clone(), dim.to_vec(), maps).unwrap()
    }

    #[test]
    fn hom_and_ext_on_a2() {
        let q = a2();
        let s1 = Representation::zero(&q, &[1, 0]);
        let s2 = Representation::zero(&q, &[0, 1]);
        let e12 = rep(&q, &[1, 1], vec![Matrix::identity(1)]);
        assert_eq!(hom_dim(&s1, &s1).unwrap(), 1);
        assert_eq!(hom_dim(&e12, &s2).unwrap(), 0);
        assert_eq!(hom_dim(&s2, &e12).unwrap(), 1);
        assert_eq!(ext_dim(&s1, &s2).unwrap(), 1);
        assert_eq!(ext_dim(&e12, &e12).unwrap(), 0);
        assert_eq!(ext_dim(&e12, &Representation::zero(&q, &[0, 0])).unwrap(), 0);
        assert_eq!(orbit_codim(&Representation::zero(&q, &[1, 1])).unwrap(), 1);
        let a3 = Quiver::equioriented_a(3);
        assert_eq!(orbit_codim(&Representation::zero(&a3, &[1, 1, 1])).unwrap(), 2);
    }

    #[test]
    fn random_representation_shape_and_determinism() {
        let q = a2();
        let v = random_representation(&q, &[2, 3], 7).unwrap();
        assert_eq!(v.map(0).shape(), (3, 2));
        assert!(v.map(0).entries().iter().all(|e| e.abs() <= int(100)));
        assert_eq!(v, random_representation(&q, &[2, 3], 7).unwrap());
        let z = random_representation(&q, &[0, 0], 1).unwrap();
        assert_eq!(z.map(0).shape(), (0, 0));
    }

    #[test]
    fn action_laws() {
        let q = Quiver::new(3, vec![(1, 2), (3, 2)]).unwrap();
        let dim = [2, 2, 1];
        let v = random_representation_bounded(&q, &dim, 3, 5).unwrap();
        let mut r = rng(11);
        let g = GroupElement::random(&dim, &mut r, 5);
        let h = GroupElement::random_unimodular(&dim, &mut r);
        assert_eq!(GroupElement::identity(&dim).act(&v).unwrap(), v);
        assert_eq!(g.act(&h.act(&v).unwrap()).unwrap(), g.compose(&h).act(&v).unwrap());
        let gv = g.act(&v).unwrap();
        assert_eq!(hom_dim(&gv, &gv).unwrap(), hom_dim(&v, &v).unwrap());
        assert!(h.act(&v).unwrap().maps().iter().all(Matrix::is_integral));
        assert!(GroupElement::new(vec![Matrix::zeros(1, 1)]).is_err());
    }

    #[test]
    fn prime_field_agrees_on_small_examples() {
        let q = Quiver::new(3, vec![(1, 2), (3, 2)]).unwrap();
        let v = random_representation(&q, &[2, 3, 1], 5).unwrap();
        let w = random_representation(&q, &[1, 2, 2], 6).unwrap();
        assert_eq!(hom_dim_in(&v, &w, Field::Prime(DEFAULT_PRIME)).unwrap(), hom_dim(&v, &w).unwrap());
        assert!(hom_dim_in(&v, &w, Field::Prime(7)).is_err());
    }
}
