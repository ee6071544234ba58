//! Bott's theorem for `S_μ R ⊗ S_ν Q*` on the Grassmannian of `β`-dimensional
//! subspaces `R` of an `α = β + γ`-dimensional space, with quotient `Q`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{normalize_weight, weyl_poly, Partition};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BottInput {
    pub mu: Partition,
    pub nu: Partition,
    pub beta: usize,
    pub gamma: usize,
}

/// Non-vanishing cohomology `H^degree = S_tau k^α`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BottOutput {
    pub degree: usize,
    pub tau: Vec<i64>,
}

impl BottInput {
    pub fn new(mu: Partition, nu: Partition, beta: usize, gamma: usize) -> Result<Self> {
        if mu.len() > beta {
            return Err(Error::input(format!("{mu} has more than {beta} parts")));
        }
        if nu.len() > gamma {
            return Err(Error::input(format!("{nu} has more than {gamma} parts")));
        }
        Ok(BottInput { mu, nu, beta, gamma })
    }

    /// `δ = (−ν_γ, …, −ν_1, μ_1, …, μ_β)`.
    pub fn weight(&self) -> Vec<i64> {
        bott_weight(&self.mu, &self.nu, self.beta, self.gamma)
    }
}

pub(crate) fn bott_weight(mu: &Partition, nu: &Partition, beta: usize, gamma: usize) -> Vec<i64> {
    let mut d = Vec::with_capacity(beta + gamma);
    d.extend((0..gamma).rev().map(|i| -(nu.part(i) as i64)));
    d.extend((0..beta).map(|i| mu.part(i) as i64));
    d
}

/// `None` when all cohomology vanishes.
pub fn bott_cohomology(input: &BottInput) -> Option<BottOutput> {
    normalize_weight(&input.weight()).map(|(degree, tau)| BottOutput { degree, tau })
}

/// `Σ_j (−1)^j dim H^j(S_μ R ⊗ S_ν Q*)`.
pub fn euler_characteristic(input: &BottInput) -> num_bigint::BigInt {
    weyl_poly(&input.weight())
}
