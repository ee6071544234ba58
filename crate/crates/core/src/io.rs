//! JSON input files and the report types written by the command-line tool.
//!
//! An input file names the quiver and dimension vectors, optionally with a
//! representation given either as integer matrices or as a multiset of
//! interval modules:
//!
//! ```json
//! {"vertices": 3, "arrows": [[1, 2], [2, 3]], "alpha": [1, 2, 1], "beta": [1, 1, 0]}
//! {"vertices": 2, "arrows": [[1, 2]], "alpha": [2, 2], "matrices": [[[1, 0], [0, 0]]]}
//! {"vertices": 3, "arrows": [[1, 2], [2, 3]], "summands": [[1, 2, 1], [3, 3, 2]]}
//! ```
//!
//! Matrix `a` is listed row by row with shape `alpha[head] × alpha[tail]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{int, Matrix};
use crate::orbit::{RankInvariant, SchemeIntersectionResult, VanishingReport};
use crate::quiver::{DimensionVector, Quiver};
use crate::rep::Representation;
use crate::resolution::{BettiTable, BundleSpec};
use crate::typea::{MinorFamily, RankCondition, RelevanceCertificate, Root};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Input {
    pub vertices: usize,
    pub arrows: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<DimensionVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<DimensionVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<Vec<Vec<i64>>>>,
    /// Interval modules `(p, q, multiplicity)` of a type-A quiver.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summands: Option<Vec<(usize, usize, usize)>>,
}

impl Input {
    pub fn from_json(text: &str) -> Result<Self> {
        let input: Input = serde_json::from_str(text).map_err(|e| Error::input(format!("malformed input: {e}")))?;
        if input.matrices.is_some() && input.summands.is_some() {
            return Err(Error::input("give either matrices or summands, not both"));
        }
        Ok(input)
    }

    pub fn quiver(&self) -> Result<Quiver> {
        Quiver::new(self.vertices, self.arrows.clone())
    }

    pub fn summand_roots(&self) -> Option<Vec<(Root, usize)>> {
        self.summands.as_ref().map(|s| s.iter().map(|&(p, q, m)| (Root::new(p, q), m)).collect())
    }

    /// `alpha` as given, or the dimension vector of the summands.
    pub fn alpha(&self) -> Result<DimensionVector> {
        let from_summands = match &self.summands {
            None => None,
            Some(s) => {
                let mut d = vec![0; self.vertices];
                for &(p, q, m) in s {
                    if p == 0 || p > q || q > self.vertices {
                        return Err(Error::input(format!("({p},{q}) is not an interval of 1..{}", self.vertices)));
                    }
                    for x in p..=q {
                        d[x - 1] += m;
                    }
                }
                Some(d)
            }
        };
        match (&self.alpha, from_summands) {
            (Some(a), Some(d)) if *a != d => {
                Err(Error::input(format!("alpha {a:?} differs from the summands' dimension vector {d:?}")))
            }
            (Some(a), _) => {
                self.quiver()?.check_dim(a)?;
                Ok(a.clone())
            }
            (None, Some(d)) => Ok(d),
            (None, None) => Err(Error::input("alpha is required")),
        }
    }

    pub fn beta(&self) -> Result<DimensionVector> {
        self.beta.clone().ok_or_else(|| Error::input("beta is required"))
    }

    pub fn bundle_spec(&self) -> Result<BundleSpec> {
        BundleSpec::from_alpha_beta(self.quiver()?, &self.alpha()?, &self.beta()?)
    }

    /// The representation described by `matrices` or `summands`, if any.
    pub fn representation(&self) -> Result<Option<Representation>> {
        let q = self.quiver()?;
        if let Some(s) = self.summand_roots() {
            self.alpha()?;
            return crate::orbit::from_summands(&q, &s).map(Some);
        }
        let Some(ms) = &self.matrices else {
            return Ok(None);
        };
        let alpha = self.alpha()?;
        if ms.len() != q.arrows().len() {
            return Err(Error::input(format!("{} matrices given for {} arrows", ms.len(), q.arrows().len())));
        }
        let mut maps = Vec::with_capacity(ms.len());
        for (a, (m, &(t, h))) in ms.iter().zip(q.arrows()).enumerate() {
            let (rows, cols) = (alpha[h - 1], alpha[t - 1]);
            if m.len() != rows || m.iter().any(|r| r.len() != cols) {
                return Err(Error::input(format!("matrix of arrow {} must be {rows} × {cols}", a + 1)));
            }
            maps.push(Matrix::from_fn(rows, cols, |i, j| int(m[i][j])));
        }
        Representation::new(q, alpha, maps).map(Some)
    }
}

/// Rows of exact entries, printed as integers or fractions.
pub type MatrixOut = Vec<Vec<String>>;

pub fn matrix_out(m: &Matrix) -> MatrixOut {
    (0..m.rows()).map(|r| m.row(r).iter().map(|v| v.to_string()).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationOut {
    pub dim: DimensionVector,
    pub matrices: Vec<MatrixOut>,
}

impl RepresentationOut {
    pub fn of(x: &Representation) -> Self {
        RepresentationOut { dim: x.dim().clone(), matrices: x.maps().iter().map(matrix_out).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerReport {
    pub class: String,
    pub alpha: DimensionVector,
    pub euler_form: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<DimensionVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<DimensionVector>,
    /// `⟨β, γ⟩` and `⟨γ, β⟩`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_gamma: Option<(i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolveReport {
    pub class: String,
    pub alpha: DimensionVector,
    pub beta: DimensionVector,
    pub gamma: DimensionVector,
    /// Rank of the bundle `ξ`.
    pub xi_rank: usize,
    pub note: String,
    pub table: BettiTable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub family: MinorFamily,
    pub bound: usize,
    pub minor_count: u128,
    pub block_matrix: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomials: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationsReport {
    pub seed: u64,
    pub alpha: DimensionVector,
    pub beta: DimensionVector,
    pub gamma: DimensionVector,
    pub relevance: Vec<RelevanceCertificate>,
    pub rank_conditions: Vec<RankCondition>,
    pub families: Vec<FamilyReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneStepReport {
    pub seed: u64,
    pub alpha: DimensionVector,
    pub ranks: RankInvariant,
    /// First `β` in lexicographic order realizing the representation as `T_{α−β} * T_β`.
    pub one_step_beta: Option<DimensionVector>,
    /// Whether the split test ran; it needs the input as summands.
    pub split_checked: bool,
    /// `dim N` of a split `V = M ⊕ N` with `Ext(M, N) = 0`.
    pub split_sufficient: Option<DimensionVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectReport {
    pub seed: u64,
    pub alpha: DimensionVector,
    pub result: SchemeIntersectionResult,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub alpha: DimensionVector,
    /// `generic-extension` for `(alpha, beta)` input, `representation` otherwise.
    pub target: String,
    pub family_count: usize,
    pub report: VanishingReport,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summands_give_alpha() {
        let i = Input::from_json(r#"{"vertices": 3, "arrows": [[1, 2], [2, 3]], "summands": [[1, 2, 1], [3, 3, 2]]}"#)
            .unwrap();
        assert_eq!(i.alpha().unwrap(), vec![1, 1, 2]);
        let x = i.representation().unwrap().unwrap();
        assert_eq!(x.dim(), &vec![1, 1, 2]);
    }

    #[test]
    fn matrices_are_checked() {
        let ok = r#"{"vertices": 2, "arrows": [[1, 2]], "alpha": [2, 1], "matrices": [[[1, -3]]]}"#;
        let x = Input::from_json(ok).unwrap().representation().unwrap().unwrap();
        assert_eq!(matrix_out(x.map(0)), vec![vec!["1".to_string(), "-3".to_string()]]);
        let bad = r#"{"vertices": 2, "arrows": [[1, 2]], "alpha": [2, 1], "matrices": [[[1], [2]]]}"#;
        assert!(matches!(Input::from_json(bad).unwrap().representation(), Err(Error::Input(_))));
    }

    #[test]
    fn unknown_fields_and_mixed_representations_are_rejected() {
        assert!(Input::from_json(r#"{"vertices": 1, "arrows": [], "colour": 3}"#).is_err());
        let both = r#"{"vertices": 1, "arrows": [], "alpha": [1], "matrices": [], "summands": [[1, 1, 1]]}"#;
        assert!(Input::from_json(both).is_err());
        let clash = r#"{"vertices": 1, "arrows": [], "alpha": [2], "summands": [[1, 1, 1]]}"#;
        assert!(Input::from_json(clash).unwrap().alpha().is_err());
    }

    #[test]
    fn betti_table_round_trips() {
        let spec = BundleSpec::from_alpha_beta(Quiver::equioriented_a(2), &[2, 2], &[1, 0]).unwrap();
        let t = crate::resolution::assemble_resolution(&spec).unwrap();
        let text = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<BettiTable>(&text).unwrap(), t);
    }
}
