//! The five hypotheses a family must satisfy to be recognized:
//!
//! 1. `0 ∉ S`
//! 2. `x ∈ S ⇒ -x ∈ S`
//! 3. `S` has rank `n`
//! 4. `|S| ≥ n(n+1)`
//! 5. any `n` independent elements of `S` generate the module, i.e. every
//!    `n`-subset with nonzero determinant has determinant `±1`.
//!
//! Condition 5 is exhaustive over `n`-subsets of sign classes (flipping signs
//! does not change `|det|`), so it is guarded by a subset budget.

use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::linalg::{self, IntVector, LinalgError};
use crate::vectorset::VectorSet;

/// Default cap on the number of `n`-subsets scanned for condition 5.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypothesisError {
    #[error("set has dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("generation check needs {needed} subsets, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hypothesis {
    NonZero,
    Symmetric,
    FullRank,
    Cardinality,
    Generation,
}

impl Hypothesis {
    pub const ALL: [Hypothesis; 5] = [
        Hypothesis::NonZero,
        Hypothesis::Symmetric,
        Hypothesis::FullRank,
        Hypothesis::Cardinality,
        Hypothesis::Generation,
    ];

    /// 1-based position in the list above.
    pub fn number(self) -> usize {
        self as usize + 1
    }
}

/// An `n`-subset whose determinant is neither 0 nor ±1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationWitness {
    pub vectors: Vec<IntVector>,
    pub det: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    ZeroVector(IntVector),
    /// `x ∈ S` with `-x ∉ S`.
    Unpaired(IntVector),
    Rank {
        achieved: usize,
        required: usize,
    },
    Cardinality {
        achieved: usize,
        required: usize,
    },
    Subset(GenerationWitness),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::ZeroVector(v) => write!(f, "zero=[{v}]"),
            Witness::Unpaired(v) => write!(f, "unpaired=[{v}]"),
            Witness::Rank { achieved, required } => write!(f, "rank={achieved} required={required}"),
            Witness::Cardinality { achieved, required } => {
                write!(f, "count={achieved} required={required}")
            }
            Witness::Subset(w) => {
                write!(f, "det={} subset=", w.det)?;
                for (k, v) in w.vectors.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "[{v}]")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisResult {
    pub hypothesis: Hypothesis,
    /// `None` when the hypothesis holds.
    pub witness: Option<Witness>,
}

impl HypothesisResult {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    results: Vec<HypothesisResult>,
}

impl HypothesisReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(HypothesisResult::passed)
    }

    pub fn get(&self, h: Hypothesis) -> &HypothesisResult {
        &self.results[h as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = &HypothesisResult> {
        self.results.iter()
    }

    /// The pass/fail pattern, ignoring witnesses.
    pub fn pattern(&self) -> [bool; 5] {
        Hypothesis::ALL.map(|h| self.get(h).passed())
    }
}

fn binomial(m: usize, k: usize) -> u128 {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((m - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Number of subsets the generation check would scan for `set`.
pub fn generation_workload(set: &VectorSet) -> u128 {
    binomial(set.sign_classes().len(), set.dim())
}

/// First `n`-subset (in lexicographic order of indices into the descending
/// list of sign classes) with determinant outside `{0, ±1}`.
pub fn check_generation(set: &VectorSet, budget: u64) -> Result<Option<GenerationWitness>, HypothesisError> {
    let classes = set.sign_classes();
    let n = set.dim();
    let needed = binomial(classes.len(), n);
    if needed > u128::from(budget) {
        return Err(HypothesisError::BudgetExceeded { needed, budget });
    }
    let mut cols = Vec::with_capacity(n);
    for subset in (0..classes.len()).combinations(n) {
        cols.clear();
        cols.extend(subset.iter().map(|&i| classes[i].clone()));
        let det = linalg::det_of(&cols)?;
        if det.abs() > 1 {
            return Ok(Some(GenerationWitness { vectors: cols, det }));
        }
    }
    Ok(None)
}

/// Evaluate all five hypotheses; nothing short-circuits.
pub fn check_all(set: &VectorSet, n: usize, budget: u64) -> Result<HypothesisReport, HypothesisError> {
    if set.dim() != n {
        return Err(HypothesisError::DimensionMismatch { expected: n, found: set.dim() });
    }
    let vectors = set.to_vec();
    let zero = set.iter().find(|v| v.is_zero()).cloned().map(Witness::ZeroVector);
    let unpaired = set.first_unpaired().cloned().map(Witness::Unpaired);
    let rank = linalg::rank(&vectors)?;
    let rank_w = (rank != n).then_some(Witness::Rank { achieved: rank, required: n });
    let required = n * (n + 1);
    let card_w = (set.len() < required).then_some(Witness::Cardinality { achieved: set.len(), required });
    let gen_w = check_generation(set, budget)?.map(Witness::Subset);

    let results = Hypothesis::ALL
        .into_iter()
        .zip([zero, unpaired, rank_w, card_w, gen_w])
        .map(|(hypothesis, witness)| HypothesisResult { hypothesis, witness })
        .collect();
    Ok(HypothesisReport { results })
}
