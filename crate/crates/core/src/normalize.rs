//! Find a basis in which a family `S` becomes exactly the canonical `S(A_n)`.
//!
//! The construction is direct rather than inductive:
//!
//! 1. pick `e_1 ∈ S`;
//! 2. the twin systems `{x, e_1 + x}` relative to `e_1` number exactly `n - 1`;
//!    setting `e_{i+1} = -x_i` gives a basis containing every `e_1 - e_i`;
//! 3. in that basis every other element is `±(e_i - e_j)` or
//!    `±(e_1 - e_i - e_j)`, one per pair `i < j`;
//! 4. for each `j < n` whose `(j, n)` entry is `e_1 - e_j - e_n`, replace
//!    `e_j` by `e_1 - e_j`;
//! 5. afterwards every entry is `e_i - e_j`, so `S` is canonical.

use rayon::prelude::*;
use thiserror::Error;

use crate::audit::{self, AuditError, Cell, Classification, TwinSystem};
use crate::generate::canonical_an;
use crate::linalg::{self, BasisChange, IntMatrix, IntVector, LinalgError};
use crate::vectorset::{VectorSet, VectorSetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("invalid input: {0}")]
    InvalidInput(VectorSetError),
    #[error("set has {found} vectors, at least {required} are needed")]
    TooFewVectors { found: usize, required: usize },
    #[error("e1 position {} out of range ({pairs} antipodal pairs)", .index + 1)]
    E1IndexOutOfRange { index: usize, pairs: usize },
    #[error("chosen e1 [{0}] is not in the set")]
    E1NotInSet(IntVector),
    #[error("set has rank {rank}, expected {dim}")]
    RankDeficient { rank: usize, dim: usize },
    #[error("independent elements have determinant {0}, so they do not generate the module")]
    NotUnimodular(i64),
    #[error("found {found} twin systems, expected {expected}")]
    TwinCountMismatch { found: usize, expected: usize },
    #[error("twin-derived basis has determinant {det}")]
    DependentTwinBasis { det: i64 },
    #[error("{vector}")]
    Unclassifiable { vector: IntVector },
    #[error("entry ({row}, {col}) is not a difference after the sweep")]
    SweepIncomplete { row: usize, col: usize },
    #[error("entry ({row}, {col}) is still a triple after the sweep")]
    ResidualTriple { row: usize, col: usize },
    #[error("normalized set differs from the canonical set")]
    FinalMismatch { expected: VectorSet, found: VectorSet },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl NormalizeError {
    /// Stable type name, used in CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            NormalizeError::InvalidInput(_) => "InvalidInput",
            NormalizeError::TooFewVectors { .. } => "TooFewVectors",
            NormalizeError::E1IndexOutOfRange { .. } => "E1IndexOutOfRange",
            NormalizeError::E1NotInSet(_) => "E1NotInSet",
            NormalizeError::RankDeficient { .. } => "RankDeficient",
            NormalizeError::NotUnimodular(_) => "NotUnimodular",
            NormalizeError::TwinCountMismatch { .. } => "TwinCountMismatch",
            NormalizeError::DependentTwinBasis { .. } => "DependentTwinBasis",
            NormalizeError::Unclassifiable { .. } => "Unclassifiable",
            NormalizeError::SweepIncomplete { .. } => "SweepIncomplete",
            NormalizeError::ResidualTriple { .. } => "ResidualTriple",
            NormalizeError::FinalMismatch { .. } => "FinalMismatch",
            NormalizeError::Linalg(_) => "Arithmetic",
        }
    }

    /// True for failures that can only come from a bug, not from the input.
    pub fn is_internal(&self) -> bool {
        matches!(self, NormalizeError::FinalMismatch { .. })
    }
}

impl From<AuditError> for NormalizeError {
    fn from(e: AuditError) -> Self {
        match e {
            AuditError::Set(e) => NormalizeError::InvalidInput(e),
            AuditError::Linalg(e) => NormalizeError::Linalg(e),
            AuditError::NotInSet(v) => NormalizeError::E1NotInSet(v),
            // the audit calls made here only fail through the variants above
            other => unreachable!("unexpected audit failure: {other}"),
        }
    }
}

impl From<VectorSetError> for NormalizeError {
    fn from(e: VectorSetError) -> Self {
        match e {
            VectorSetError::Linalg(e) => NormalizeError::Linalg(e),
            e => NormalizeError::InvalidInput(e),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceStep {
    /// `index` is the half-system position, absent when `e_1` was given directly.
    ChoseE1 { index: Option<usize>, vector: IntVector },
    /// In input coordinates.
    TwinClasses(Vec<TwinSystem>),
    /// Classification in the twin-derived basis, before the sweep.
    Table(Classification),
    /// `e_j` (0-based `j`) replaced by `e_1 - e_j`; `new` in input coordinates.
    Substitution { j: usize, new: IntVector },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationResult {
    /// Columns are the found `e_1, ..., e_n` in input coordinates.
    pub basis: BasisChange,
    /// The input re-expressed in `basis`; equal to the canonical set.
    pub normalized: VectorSet,
    pub trace: Vec<TraceStep>,
}

impl NormalizationResult {
    pub fn substitutions(&self) -> impl Iterator<Item = usize> + '_ {
        self.trace.iter().filter_map(|s| match s {
            TraceStep::Substitution { j, .. } => Some(*j),
            _ => None,
        })
    }
}

/// Greedy basis: scan the set in ascending lexicographic order and keep each
/// vector that raises the rank. Errors unless the result is unimodular.
pub fn extract_basis(set: &VectorSet) -> Result<BasisChange, NormalizeError> {
    let n = set.dim();
    let mut chosen: Vec<IntVector> = Vec::with_capacity(n);
    for v in set.iter() {
        chosen.push(v.clone());
        if linalg::rank(&chosen)? < chosen.len() {
            chosen.pop();
        }
        if chosen.len() == n {
            break;
        }
    }
    if chosen.len() < n {
        return Err(NormalizeError::RankDeficient { rank: chosen.len(), dim: n });
    }
    let m = IntMatrix::from_columns(n, &chosen)?;
    match BasisChange::new(m) {
        Ok(b) => Ok(b),
        Err(LinalgError::NotUnimodular(d)) => Err(NormalizeError::NotUnimodular(d)),
        Err(e) => Err(e.into()),
    }
}

fn precheck(set: &VectorSet) -> Result<(), NormalizeError> {
    let n = set.dim();
    set.half_system()?;
    let required = n * (n + 1);
    if set.len() < required {
        return Err(NormalizeError::TooFewVectors { found: set.len(), required });
    }
    Ok(())
}

fn first_leftover(c: &Classification, basis: &BasisChange) -> Result<Option<NormalizeError>, NormalizeError> {
    match c.leftovers.first() {
        Some(v) => Ok(Some(NormalizeError::Unclassifiable { vector: basis.apply(v)? })),
        None => Ok(None),
    }
}

/// Normalize `set`, choosing `e_1` as the `e1_index`-th element of its
/// half-system (default 0).
pub fn normalize(set: &VectorSet, e1_index: Option<usize>) -> Result<NormalizationResult, NormalizeError> {
    precheck(set)?;
    let half = set.half_system()?;
    let index = e1_index.unwrap_or(0);
    let e1 = half.get(index).ok_or(NormalizeError::E1IndexOutOfRange { index, pairs: half.len() })?.clone();
    run(set, e1, Some(index))
}

/// Normalize `set` with an explicit `e_1`, which may be either member of its pair.
pub fn normalize_with_e1(set: &VectorSet, e1: &IntVector) -> Result<NormalizationResult, NormalizeError> {
    precheck(set)?;
    if !set.contains(e1) {
        return Err(NormalizeError::E1NotInSet(e1.clone()));
    }
    run(set, e1.clone(), None)
}

/// The basis `(e_1, -x_1, ..., -x_{n-1})` read off the twin systems
/// `{x_i, e_1 + x_i}`, together with those systems.
pub fn twin_basis(set: &VectorSet, e1: &IntVector) -> Result<(Vec<TwinSystem>, BasisChange), NormalizeError> {
    let n = set.dim();
    let twins = audit::twin_systems(set, e1)?;
    if twins.len() != n - 1 {
        return Err(NormalizeError::TwinCountMismatch { found: twins.len(), expected: n - 1 });
    }
    let mut columns = vec![e1.clone()];
    for t in &twins {
        columns.push(t.x.checked_neg()?);
    }
    let m = IntMatrix::from_columns(n, &columns)?;
    let det = m.det()?;
    if det.abs() != 1 {
        return Err(NormalizeError::DependentTwinBasis { det });
    }
    Ok((twins, BasisChange::new(m)?))
}

fn run(set: &VectorSet, e1: IntVector, index: Option<usize>) -> Result<NormalizationResult, NormalizeError> {
    let n = set.dim();
    let mut trace = vec![TraceStep::ChoseE1 { index, vector: e1.clone() }];

    let (twins, mut basis) = twin_basis(set, &e1)?;
    trace.push(TraceStep::TwinClasses(twins));

    let table = audit::classify(set, &basis)?;
    if let Some(e) = first_leftover(&table, &basis)? {
        return Err(e);
    }
    if !table.accepted() {
        return Err(conflict_error(set, &table, &basis));
    }
    let last = n - 1;
    let to_flip: Vec<usize> = (1..last).filter(|&j| table.cell(j, last) == Cell::Triple).collect();
    trace.push(TraceStep::Table(table));

    for j in to_flip {
        let mut step = IntMatrix::identity(n);
        step.set(0, j, 1);
        step.set(j, j, -1);
        basis = basis.then(&BasisChange::new(step)?)?;
        trace.push(TraceStep::Substitution { j, new: basis.basis_vector(j) });
    }

    let swept = audit::classify(set, &basis)?;
    if let Some(e) = first_leftover(&swept, &basis)? {
        return Err(e);
    }
    if let Some(j) = (1..last).find(|&j| swept.cell(j, last) != Cell::Diff) {
        return Err(NormalizeError::SweepIncomplete { row: j + 1, col: n });
    }
    if let Some((i, j)) = swept.triples().first() {
        return Err(NormalizeError::ResidualTriple { row: i + 1, col: j + 1 });
    }
    if !swept.accepted() {
        return Err(conflict_error(set, &swept, &basis));
    }

    let normalized = set.transform(&basis)?;
    let canonical = canonical_an(n).expect("dimension is positive");
    if normalized != canonical || set.len() != n * (n + 1) {
        return Err(NormalizeError::FinalMismatch { expected: canonical, found: normalized });
    }
    Ok(NormalizationResult { basis, normalized, trace })
}

// Units and first-row entries exist by construction and the cardinality check
// leaves no room for empty cells, so a rejected table without leftovers holds
// both forms for some pair. The triple form is the element that cannot be placed.
fn conflict_error(set: &VectorSet, c: &Classification, basis: &BasisChange) -> NormalizeError {
    let n = c.dim;
    if let Some((&(i, j), _)) = c.table.iter().find(|(_, cell)| **cell == Cell::Conflict) {
        let mut coords = vec![0; n];
        coords[0] = 1;
        coords[i] = -1;
        coords[j] = -1;
        if let Ok(vector) = basis.apply(&IntVector::new(coords)) {
            return NormalizeError::Unclassifiable { vector };
        }
    }
    let found = set.transform(basis).unwrap_or_else(|_| set.clone());
    NormalizeError::FinalMismatch { expected: canonical_an(n).expect("dimension is positive"), found }
}

/// Run [`normalize`] once for every choice of `e_1` in the half-system.
pub fn normalize_all_choices(set: &VectorSet) -> Vec<Result<NormalizationResult, NormalizeError>> {
    let pairs = match set.half_system() {
        Ok(h) => h.len(),
        Err(e) => return vec![Err(e.into())],
    };
    (0..pairs).into_par_iter().map(|k| normalize(set, Some(k))).collect()
}
