//! Finite families of integer vectors with their antipodal-pair structure.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::linalg::{BasisChange, IntVector, LinalgError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VectorSetError {
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("vector {vector} has dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize, vector: IntVector },
    #[error("set is not symmetric: {0} is present but its negative is not")]
    NotSymmetric(IntVector),
    #[error("set contains the zero vector")]
    ContainsZero,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A deduplicated set of integer vectors of a common dimension.
///
/// Both `x` and `-x` are stored explicitly; symmetry is a property to check,
/// not an assumption. Iteration is in ascending lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorSet {
    dim: usize,
    vectors: BTreeSet<IntVector>,
}

impl VectorSet {
    pub fn empty(dim: usize) -> Result<Self, VectorSetError> {
        if dim == 0 {
            return Err(VectorSetError::ZeroDimension);
        }
        Ok(VectorSet { dim, vectors: BTreeSet::new() })
    }

    pub fn from_vectors<I>(dim: usize, vectors: I) -> Result<Self, VectorSetError>
    where
        I: IntoIterator<Item = IntVector>,
    {
        let mut set = VectorSet::empty(dim)?;
        for v in vectors {
            set.check_dim(&v)?;
            set.vectors.insert(v);
        }
        Ok(set)
    }

    fn check_dim(&self, v: &IntVector) -> Result<(), VectorSetError> {
        if v.dim() != self.dim {
            return Err(VectorSetError::DimensionMismatch {
                expected: self.dim,
                found: v.dim(),
                vector: v.clone(),
            });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn contains(&self, v: &IntVector) -> bool {
        self.vectors.contains(v)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &IntVector> + ExactSizeIterator {
        self.vectors.iter()
    }

    pub fn to_vec(&self) -> Vec<IntVector> {
        self.vectors.iter().cloned().collect()
    }

    /// A new set with `extra` added.
    pub fn with<I>(&self, extra: I) -> Result<VectorSet, VectorSetError>
    where
        I: IntoIterator<Item = IntVector>,
    {
        let mut out = self.clone();
        for v in extra {
            out.check_dim(&v)?;
            out.vectors.insert(v);
        }
        Ok(out)
    }

    /// A new set with `removed` taken out (absent vectors are ignored).
    pub fn without<'a, I>(&self, removed: I) -> VectorSet
    where
        I: IntoIterator<Item = &'a IntVector>,
    {
        let mut out = self.clone();
        for v in removed {
            out.vectors.remove(v);
        }
        out
    }

    pub fn contains_zero(&self) -> bool {
        self.vectors.iter().any(IntVector::is_zero)
    }

    /// The lexicographically smallest `x` whose negative is missing.
    pub fn first_unpaired(&self) -> Option<&IntVector> {
        self.vectors.iter().find(|v| match v.checked_neg() {
            Ok(neg) => !self.vectors.contains(&neg),
            Err(_) => true,
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_unpaired().is_none()
    }

    /// One representative per antipodal class `{x, -x}`, ignoring zero and
    /// without requiring symmetry: the lexicographically greater of `x` and
    /// `-x`. Listed in descending lexicographic order.
    pub fn sign_classes(&self) -> Vec<IntVector> {
        let reps: BTreeSet<IntVector> = self
            .vectors
            .iter()
            .filter(|v| !v.is_zero())
            .map(|v| match v.checked_neg() {
                Ok(neg) if neg > *v => neg,
                _ => v.clone(),
            })
            .collect();
        reps.into_iter().rev().collect()
    }

    /// Deterministic half-system: from each pair `{x, -x}` the lexicographically
    /// greater vector, listed in descending lexicographic order.
    pub fn half_system(&self) -> Result<HalfSystem, VectorSetError> {
        if self.contains_zero() {
            return Err(VectorSetError::ContainsZero);
        }
        if let Some(x) = self.first_unpaired() {
            return Err(VectorSetError::NotSymmetric(x.clone()));
        }
        let representatives: Vec<IntVector> = self
            .vectors
            .iter()
            .rev()
            .filter(|v| v.checked_neg().map(|n| **v > n).unwrap_or(true))
            .cloned()
            .collect();
        Ok(HalfSystem { representatives })
    }

    /// Re-express every vector in the basis `b`.
    pub fn transform(&self, b: &BasisChange) -> Result<VectorSet, VectorSetError> {
        if b.dim() != self.dim {
            return Err(LinalgError::DimensionMismatch { expected: self.dim, found: b.dim() }.into());
        }
        let vectors = self.vectors.iter().map(|v| b.express(v)).collect::<Result<BTreeSet<_>, _>>()?;
        Ok(VectorSet { dim: self.dim, vectors })
    }
}

/// One vector from each antipodal pair of a symmetric set without zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSystem {
    representatives: Vec<IntVector>,
}

impl HalfSystem {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&IntVector> {
        self.representatives.get(i)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, IntVector> {
        self.representatives.iter()
    }

    pub fn as_slice(&self) -> &[IntVector] {
        &self.representatives
    }
}

impl<'a> IntoIterator for &'a HalfSystem {
    type Item = &'a IntVector;
    type IntoIter = std::slice::Iter<'a, IntVector>;
    fn into_iter(self) -> Self::IntoIter {
        self.representatives.iter()
    }
}
