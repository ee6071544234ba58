//! Quivers, dimension vectors and the Euler form.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{int, Matrix};

/// Per-vertex dimensions; index `x - 1` holds the entry of vertex `x`.
pub type DimensionVector = Vec<usize>;

/// A connected quiver without loops on vertices `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quiver {
    n: usize,
    arrows: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DynkinType {
    A(usize),
    D(usize),
    E(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuiverClass {
    Dynkin(DynkinType),
    ExtendedDynkin,
    Wild,
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A{n}"),
            DynkinType::D(n) => write!(f, "D{n}"),
            DynkinType::E(n) => write!(f, "E{n}"),
        }
    }
}

impl Quiver {
    /// Validates and builds a quiver; arrows are `(tail, head)` pairs, 1-indexed.
    pub fn new(n: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("a quiver needs at least one vertex"));
        }
        for (i, &(t, h)) in arrows.iter().enumerate() {
            if t == 0 || h == 0 || t > n || h > n {
                return Err(Error::input(format!("arrow {i} ({t},{h}) has an endpoint outside 1..={n}")));
            }
            if t == h {
                return Err(Error::input(format!("arrow {i} is a loop at vertex {t}")));
            }
        }
        let q = Quiver { n, arrows };
        if !q.is_connected() {
            return Err(Error::input("the underlying graph is not connected"));
        }
        Ok(q)
    }

    /// The path `1 - 2 - ... - n` with arrow `i` joining `i` and `i + 1`,
    /// pointing right when `right[i]` holds.
    pub fn type_a(right: &[bool]) -> Self {
        let arrows = right.iter().enumerate().map(|(i, &r)| if r { (i + 1, i + 2) } else { (i + 2, i + 1) }).collect();
        Quiver { n: right.len() + 1, arrows }
    }

    pub fn equioriented_a(n: usize) -> Self {
        Quiver::type_a(&vec![true; n.saturating_sub(1)])
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn tail(&self, a: usize) -> usize {
        self.arrows[a].0
    }

    pub fn head(&self, a: usize) -> usize {
        self.arrows[a].1
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n + 1];
        let mut stack = vec![1];
        seen[1] = true;
        while let Some(v) = stack.pop() {
            for &(t, h) in &self.arrows {
                let w = if t == v {
                    h
                } else if h == v {
                    t
                } else {
                    continue;
                };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen[1..].iter().all(|&s| s)
    }

    pub fn check_dim(&self, a: &[usize]) -> Result<()> {
        if a.len() != self.n {
            return Err(Error::input(format!(
                "dimension vector has length {} but the quiver has {} vertices",
                a.len(),
                self.n
            )));
        }
        Ok(())
    }

    /// `Σ a_x b_x − Σ_arrows a_ta b_ha`.
    pub fn euler_product(&self, a: &[usize], b: &[usize]) -> Result<i64> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        Ok(self.euler_product_unchecked(a, b))
    }

    pub(crate) fn euler_product_unchecked(&self, a: &[usize], b: &[usize]) -> i64 {
        let diag: i64 = a.iter().zip(b).map(|(&x, &y)| (x * y) as i64).sum();
        let off: i64 = self.arrows.iter().map(|&(t, h)| (a[t - 1] * b[h - 1]) as i64).sum();
        diag - off
    }

    pub fn euler_form(&self, a: &[usize]) -> Result<i64> {
        self.euler_product(a, a)
    }

    fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n + 1];
        for &(t, h) in &self.arrows {
            deg[t] += 1;
            deg[h] += 1;
        }
        deg
    }

    fn has_multi_edge(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.arrows.iter().any(|&(t, h)| !seen.insert((t.min(h), t.max(h))))
    }

    fn neighbours(&self, v: usize) -> Vec<usize> {
        self.arrows
            .iter()
            .filter_map(|&(t, h)| {
                if t == v {
                    Some(h)
                } else if h == v {
                    Some(t)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Length of the leg starting at `start` and moving away from `from`, on a tree
    /// whose vertices other than the branch point have degree at most two.
    fn leg_length(&self, from: usize, start: usize, deg: &[usize]) -> Option<usize> {
        let (mut prev, mut cur, mut len) = (from, start, 1);
        loop {
            if deg[cur] > 2 {
                return None;
            }
            let next: Vec<usize> = self.neighbours(cur).into_iter().filter(|&w| w != prev).collect();
            match next.as_slice() {
                [] => return Some(len),
                [w] => {
                    prev = cur;
                    cur = *w;
                    len += 1;
                }
                _ => return None,
            }
        }
    }

    /// Dynkin type of the underlying graph, if any.
    pub fn dynkin_type(&self) -> Option<DynkinType> {
        if self.arrows.len() + 1 != self.n || self.has_multi_edge() {
            return None;
        }
        let deg = self.degrees();
        let branch: Vec<usize> = (1..=self.n).filter(|&v| deg[v] > 2).collect();
        match branch.as_slice() {
            [] => Some(DynkinType::A(self.n)),
            [b] if deg[*b] == 3 => {
                let mut legs = self
                    .neighbours(*b)
                    .into_iter()
                    .map(|w| self.leg_length(*b, w, &deg))
                    .collect::<Option<Vec<_>>>()?;
                legs.sort_unstable();
                match legs.as_slice() {
                    [1, 1, _] => Some(DynkinType::D(self.n)),
                    [1, 2, 2] | [1, 2, 3] | [1, 2, 4] => Some(DynkinType::E(self.n)),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    pub fn is_type_a(&self) -> bool {
        matches!(self.dynkin_type(), Some(DynkinType::A(_)))
    }

    /// True when the underlying graph is an extended Dynkin diagram.
    pub fn is_extended_dynkin(&self) -> bool {
        let deg = self.degrees();
        if self.arrows.len() == self.n {
            // the only connected graphs with as many edges as vertices and all degrees 2 are cycles
            return self.n >= 2 && (1..=self.n).all(|v| deg[v] == 2);
        }
        if self.arrows.len() + 1 != self.n || self.has_multi_edge() {
            return false;
        }
        let branch: Vec<usize> = (1..=self.n).filter(|&v| deg[v] > 2).collect();
        match branch.as_slice() {
            [b] if deg[*b] == 4 => self.n == 5,
            [b] if deg[*b] == 3 => {
                let legs: Option<Vec<usize>> =
                    self.neighbours(*b).into_iter().map(|w| self.leg_length(*b, w, &deg)).collect();
                let Some(mut legs) = legs else { return false };
                legs.sort_unstable();
                matches!(legs.as_slice(), [2, 2, 2] | [1, 3, 3] | [1, 2, 5])
            }
            [b1, b2] if deg[*b1] == 3 && deg[*b2] == 3 => {
                // both branch points carry two legs of length one
                [*b1, *b2].iter().all(|&b| self.neighbours(b).into_iter().filter(|&w| deg[w] == 1).count() == 2)
            }
            _ => false,
        }
    }

    pub fn class(&self) -> QuiverClass {
        match self.dynkin_type() {
            Some(t) => QuiverClass::Dynkin(t),
            None if self.is_extended_dynkin() => QuiverClass::ExtendedDynkin,
            None => QuiverClass::Wild,
        }
    }

    /// Symmetrized Euler form `2I − adjacency`, twice the Tits form's Gram matrix.
    pub fn symmetric_form(&self) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n);
        for v in 0..self.n {
            m.set(v, v, int(2));
        }
        for &(t, h) in &self.arrows {
            let (i, j) = (t - 1, h - 1);
            let v = m.get(i, j) - int(1);
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
        m
    }

    /// Positive definiteness of the Euler form, by leading principal minors.
    pub fn form_is_positive_definite(&self) -> bool {
        let m = self.symmetric_form();
        (1..=self.n).all(|k| {
            let idx: Vec<usize> = (0..k).collect();
            m.submatrix(&idx, &idx).determinant() > int(0)
        })
    }

    pub fn sources(&self) -> Vec<usize> {
        (1..=self.n).filter(|&v| self.arrows.iter().all(|&(_, h)| h != v)).collect()
    }

    pub fn sinks(&self) -> Vec<usize> {
        (1..=self.n).filter(|&v| self.arrows.iter().all(|&(t, _)| t != v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_product_examples() {
        let a2 = Quiver::equioriented_a(2);
        assert_eq!(a2.euler_product(&[1, 1], &[1, 1]).unwrap(), 1);
        assert_eq!(a2.euler_product(&[0, 0], &[3, 5]).unwrap(), 0);
        let a7 = Quiver::new(7, vec![(1, 2), (2, 3), (4, 3), (5, 4), (5, 6), (7, 6)]).unwrap();
        assert_eq!(a7.euler_form(&[1; 7]).unwrap(), 1);
        assert!(a2.euler_product(&[1], &[1, 1]).is_err());
    }

    #[test]
    fn rejects_malformed_quivers() {
        assert!(Quiver::new(2, vec![(1, 1)]).is_err());
        assert!(Quiver::new(3, vec![(1, 2)]).is_err());
        assert!(Quiver::new(2, vec![(1, 3)]).is_err());
    }

    #[test]
    fn classification() {
        let d4 = Quiver::new(4, vec![(1, 2), (3, 2), (2, 4)]).unwrap();
        assert_eq!(d4.dynkin_type(), Some(DynkinType::D(4)));
        let e6 = Quiver::new(6, vec![(1, 2), (2, 3), (3, 4), (4, 5), (3, 6)]).unwrap();
        assert_eq!(e6.dynkin_type(), Some(DynkinType::E(6)));
        let kronecker = Quiver::new(2, vec![(1, 2), (1, 2)]).unwrap();
        assert_eq!(kronecker.class(), QuiverClass::ExtendedDynkin);
        let d4_tilde = Quiver::new(5, vec![(1, 3), (2, 3), (3, 4), (3, 5)]).unwrap();
        assert_eq!(d4_tilde.class(), QuiverClass::ExtendedDynkin);
        let triangle = Quiver::new(3, vec![(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(triangle.class(), QuiverClass::ExtendedDynkin);
        let three_arrows = Quiver::new(2, vec![(1, 2), (1, 2), (2, 1)]).unwrap();
        assert_eq!(three_arrows.class(), QuiverClass::Wild);
    }

    #[test]
    fn sylvester_agrees_with_classification() {
        // every tree on up to 7 vertices given by a Prufer-free parent array
        fn trees(n: usize, parents: &mut Vec<usize>, out: &mut Vec<Quiver>) {
            if parents.len() + 1 == n {
                let arrows = parents.iter().enumerate().map(|(i, &p)| (p, i + 2)).collect();
                out.push(Quiver::new(n, arrows).unwrap());
                return;
            }
            let k = parents.len() + 2;
            for p in 1..k {
                parents.push(p);
                trees(n, parents, out);
                parents.pop();
            }
        }
        for n in 1..=7 {
            let mut out = Vec::new();
            trees(n, &mut Vec::new(), &mut out);
            for q in out {
                assert_eq!(q.dynkin_type().is_some(), q.form_is_positive_definite(), "{q:?}");
            }
        }
    }
}
