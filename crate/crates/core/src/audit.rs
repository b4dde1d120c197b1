//! Executable checks of the structural lemmas behind the normalizer, plus
//! demonstrators for two ways the naive inductive argument goes wrong.
//!
//! Unless stated otherwise, coordinate indices are 0-based: index 0 is the
//! distinguished vector `e_1` and indices `1..n` are `e_2..e_n`. Reports meant
//! for people (see [`symbolic`]) use 1-based names.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::generate::{canonical_an, gap_basis, GenerateError};
use crate::linalg::{self, BasisChange, IntMatrix, IntVector, LinalgError};
use crate::vectorset::{VectorSet, VectorSetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("basis vector [{0}] is not an element of the set")]
    BasisNotInSet(IntVector),
    #[error("[{0}] is not an element of the set")]
    NotInSet(IntVector),
    #[error("set has rank {rank}, expected {dim}")]
    RankDeficient { rank: usize, dim: usize },
    #[error("basis has dimension {found}, set has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operation needs dimension at least 2")]
    DimensionTooSmall,
    #[error("invalid index pair ({i}, {j}) for dimension {dim}")]
    BadIndices { i: usize, j: usize, dim: usize },
    #[error("split index r = {r} must satisfy 2 <= r <= n - 1 (n = {n})")]
    SplitOutOfRange { n: usize, r: usize },
    #[error("enumeration needs {needed} determinants, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error(transparent)]
    Set(#[from] VectorSetError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
}

pub type Result<T> = std::result::Result<T, AuditError>;

/// Render basis coordinates as a signed combination such as `e1-e2-e3`.
pub fn symbolic(v: &IntVector) -> String {
    let mut out = String::new();
    for (i, &c) in v.coords().iter().enumerate() {
        if c == 0 {
            continue;
        }
        let sign = if c < 0 {
            "-"
        } else if out.is_empty() {
            ""
        } else {
            "+"
        };
        let mag = c.unsigned_abs();
        if mag == 1 {
            out.push_str(&format!("{sign}e{}", i + 1));
        } else {
            out.push_str(&format!("{sign}{mag}e{}", i + 1));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn check_dims(set: &VectorSet, basis: &BasisChange) -> Result<()> {
    if set.dim() != basis.dim() {
        return Err(AuditError::DimensionMismatch { expected: set.dim(), found: basis.dim() });
    }
    Ok(())
}

fn require_basis_in_set(set: &VectorSet, basis: &BasisChange) -> Result<()> {
    check_dims(set, basis)?;
    match basis.basis_vectors().into_iter().find(|b| !set.contains(b)) {
        Some(b) => Err(AuditError::BasisNotInSet(b)),
        None => Ok(()),
    }
}

/// Sign classes of `set` written in `basis`, descending lexicographic.
fn classes_in_basis(set: &VectorSet, basis: &BasisChange) -> Result<Vec<IntVector>> {
    check_dims(set, basis)?;
    Ok(set.transform(basis)?.sign_classes())
}

fn binomial(m: usize, k: usize) -> u128 {
    if k > m {
        return 0;
    }
    (0..k.min(m - k)).fold(1u128, |acc, i| acc.saturating_mul((m - i) as u128) / (i as u128 + 1))
}

/// `K`: the largest `|det|` of `n` elements of `set`, in `basis`.
pub fn max_basis_determinant(set: &VectorSet, basis: &BasisChange, budget: u64) -> Result<i64> {
    let classes = classes_in_basis(set, basis)?;
    let n = set.dim();
    let needed = binomial(classes.len(), n);
    if needed > u128::from(budget) {
        return Err(AuditError::BudgetExceeded { needed, budget });
    }
    let mut best = 0i64;
    for subset in (0..classes.len()).combinations(n) {
        let cols: Vec<IntVector> = subset.iter().map(|&i| classes[i].clone()).collect();
        best = best.max(linalg::det_of(&cols)?.abs());
    }
    if best == 0 {
        let rank = linalg::rank(&set.to_vec())?;
        return Err(AuditError::RankDeficient { rank, dim: n });
    }
    Ok(best)
}

/// A characteristic determinant: an `r×r` minor of the component matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorWitness {
    /// Coordinate indices (rows of the component matrix).
    pub rows: Vec<usize>,
    /// The vectors used, in basis coordinates.
    pub vectors: Vec<IntVector>,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorBoundReport {
    pub k: i64,
    pub max_minor: i64,
    pub minors_checked: u64,
    /// First characteristic determinant outside `{-1, 0, 1}`, the range
    /// forced when the set satisfies the generation hypothesis (`K = 1`).
    pub violation: Option<MinorWitness>,
    /// First characteristic determinant with `|d| > K`; the bound itself
    /// guarantees this stays `None` whenever the basis is drawn from the set.
    pub exceeds_k: Option<MinorWitness>,
}

impl MinorBoundReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none() && self.exceeds_k.is_none()
    }
}

/// Scan every `r×r` minor (`1 ≤ r ≤ n`) of the component matrix of `set` in
/// `basis` and compare against `K`.
pub fn check_minor_bound(set: &VectorSet, basis: &BasisChange, budget: u64) -> Result<MinorBoundReport> {
    require_basis_in_set(set, basis)?;
    let k = max_basis_determinant(set, basis, budget)?;
    let classes = classes_in_basis(set, basis)?;
    let n = set.dim();
    let needed: u128 = (1..=n).map(|r| binomial(n, r) * binomial(classes.len(), r)).sum();
    if needed > u128::from(budget) {
        return Err(AuditError::BudgetExceeded { needed, budget });
    }
    let comp = IntMatrix::from_columns(n, &classes)?;
    let mut report =
        MinorBoundReport { k, max_minor: 0, minors_checked: 0, violation: None, exceeds_k: None };
    for r in 1..=n {
        for rows in (0..n).combinations(r) {
            for cols in (0..classes.len()).combinations(r) {
                let value = comp.minor(&rows, &cols)?;
                report.minors_checked += 1;
                report.max_minor = report.max_minor.max(value.abs());
                let witness = || MinorWitness {
                    rows: rows.clone(),
                    vectors: cols.iter().map(|&c| classes[c].clone()).collect(),
                    value,
                };
                if value.abs() > 1 && report.violation.is_none() {
                    report.violation = Some(witness());
                }
                if value.abs() > k && report.exceeds_k.is_none() {
                    report.exceeds_k = Some(witness());
                }
            }
        }
    }
    Ok(report)
}

/// Two elements whose components on two basis vectors are both nonzero but
/// neither equal nor opposite: their 2×2 minor on those coordinates is ±2
/// (or larger in magnitude).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenPair {
    pub x: IntVector,
    pub y: IntVector,
    pub coords: (usize, usize),
    pub minor: i64,
}

pub fn find_forbidden_pairs(set: &VectorSet, basis: &BasisChange) -> Result<Vec<ForbiddenPair>> {
    let classes = classes_in_basis(set, basis)?;
    let n = set.dim();
    let mut hits = Vec::new();
    for (a, x) in classes.iter().enumerate() {
        for y in &classes[a + 1..] {
            for i in 0..n {
                for j in i + 1..n {
                    let minor = i128::from(x[i]) * i128::from(y[j]) - i128::from(x[j]) * i128::from(y[i]);
                    if minor.abs() >= 2 {
                        let minor = i64::try_from(minor).map_err(|_| LinalgError::Overflow)?;
                        hits.push(ForbiddenPair { x: x.clone(), y: y.clone(), coords: (i, j), minor });
                    }
                }
            }
        }
    }
    Ok(hits)
}

/// Three elements `±(e_a ± e_b)`, `±(e_a ± e_c)`, `±(e_b ± e_c)` whose 3×3
/// determinant on `(e_a, e_b, e_c)` is ±2, such as `(e_i - e_j, e_i - e_k, e_j + e_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenTriple {
    /// `a < b < c`.
    pub coords: (usize, usize, usize),
    /// Supported on `{a,b}`, `{a,c}`, `{b,c}` respectively, in basis coordinates.
    pub vectors: [IntVector; 3],
    pub det: i64,
}

pub fn find_forbidden_triples(set: &VectorSet, basis: &BasisChange) -> Result<Vec<ForbiddenTriple>> {
    let classes = classes_in_basis(set, basis)?;
    let n = set.dim();
    // unit-entry vectors supported on exactly two coordinates, keyed by that pair
    let mut by_pair: BTreeMap<(usize, usize), Vec<&IntVector>> = BTreeMap::new();
    for v in &classes {
        let support: Vec<usize> = (0..n).filter(|&i| v[i] != 0).collect();
        if support.len() == 2 && support.iter().all(|&i| v[i].abs() == 1) {
            by_pair.entry((support[0], support[1])).or_default().push(v);
        }
    }
    let empty = Vec::new();
    let mut hits = Vec::new();
    for (a, b, c) in (0..n).tuple_combinations() {
        let ab = by_pair.get(&(a, b)).unwrap_or(&empty);
        let ac = by_pair.get(&(a, c)).unwrap_or(&empty);
        let bc = by_pair.get(&(b, c)).unwrap_or(&empty);
        for ((&u, &v), &w) in ab.iter().cartesian_product(ac).cartesian_product(bc) {
            let m = IntMatrix::from_rows(&[
                vec![u[a], v[a], w[a]],
                vec![u[b], v[b], w[b]],
                vec![u[c], v[c], w[c]],
            ])?;
            let det = m.det()?;
            if det != 0 {
                hits.push(ForbiddenTriple {
                    coords: (a, b, c),
                    vectors: [u.clone(), v.clone(), w.clone()],
                    det,
                });
            }
        }
    }
    Ok(hits)
}

/// A twin system `{x, e_1 + x}` with both members in the set.
///
/// The classes `{x, e_1 + x}` and `{-e_1 - x, -x}` are the same system; the
/// stored `x` is the lexicographically smaller of `x` and `-e_1 - x`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TwinSystem {
    pub x: IntVector,
    pub partner: IntVector,
}

impl TwinSystem {
    /// The other presentation of the same class: `{-e_1 - x, -x}`.
    pub fn mirrored(&self) -> Result<TwinSystem> {
        Ok(TwinSystem { x: self.partner.checked_neg()?, partner: self.x.checked_neg()? })
    }
}

/// All twin systems relative to `e1`, one representative per class, sorted.
pub fn twin_systems(set: &VectorSet, e1: &IntVector) -> Result<Vec<TwinSystem>> {
    if !set.contains(e1) {
        return Err(AuditError::NotInSet(e1.clone()));
    }
    if let Some(x) = set.first_unpaired() {
        return Err(VectorSetError::NotSymmetric(x.clone()).into());
    }
    let neg_e1 = e1.checked_neg()?;
    let mut classes = BTreeSet::new();
    for x in set.iter() {
        if x.is_zero() || x == e1 || *x == neg_e1 {
            continue;
        }
        let partner = x.checked_add(e1)?;
        if partner.is_zero() || !set.contains(&partner) {
            continue;
        }
        let other = partner.checked_neg()?;
        let x = if other < *x { other } else { x.clone() };
        let partner = x.checked_add(e1)?;
        classes.insert(TwinSystem { x, partner });
    }
    Ok(classes.into_iter().collect())
}

/// The compressed set `S'` split by how each pair arises.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SprimeSplit {
    /// `S'` in coordinates `(e_2, ..., e_n)`.
    pub sprime: VectorSet,
    /// Antipodal pairs of `S'` that already lie in `S`.
    pub kept_pairs: usize,
    /// Antipodal pairs of `S'` whose preimage in `S` is `x ± e_1`, not `x`.
    pub modified_pairs: usize,
}

/// Build `S' = {x ∈ M' \ {0} : x ∈ S or x ± e_1 ∈ S}` with `M' = span(e_2..e_n)`,
/// before any half-system is chosen.
pub fn sprime_split(set: &VectorSet, basis: &BasisChange) -> Result<SprimeSplit> {
    if set.dim() < 2 {
        return Err(AuditError::DimensionTooSmall);
    }
    require_basis_in_set(set, basis)?;
    let local = set.transform(basis)?;
    let mut full: BTreeSet<IntVector> = BTreeSet::new();
    for v in local.iter() {
        let lead = v[0];
        if lead.abs() > 1 {
            continue;
        }
        let mut x = v.clone();
        let mut coords = x.clone().into_coords();
        coords[0] = 0;
        x = IntVector::new(coords);
        if !x.is_zero() {
            full.insert(x);
        }
    }
    let mut kept = 0;
    let mut modified = 0;
    for x in &full {
        if x.checked_neg()? < *x {
            if local.contains(x) {
                kept += 1;
            } else {
                modified += 1;
            }
        }
    }
    let sprime = VectorSet::from_vectors(set.dim() - 1, full.iter().map(|x| x.without_coord(0)))?;
    Ok(SprimeSplit { sprime, kept_pairs: kept, modified_pairs: modified })
}

pub fn build_sprime(set: &VectorSet, basis: &BasisChange) -> Result<VectorSet> {
    Ok(sprime_split(set, basis)?.sprime)
}

pub fn sprime_modified_pairs(set: &VectorSet, basis: &BasisChange) -> Result<usize> {
    Ok(sprime_split(set, basis)?.modified_pairs)
}

/// Compose `basis` with `p_{i,j}`: `e_j ↦ e_i - e_j`, every other basis
/// vector fixed. Both indices must avoid slot 0 (`e_1`). An involution.
pub fn apply_pij(basis: &BasisChange, i: usize, j: usize) -> Result<BasisChange> {
    let n = basis.dim();
    if i == j || i == 0 || j == 0 || i >= n || j >= n {
        return Err(AuditError::BadIndices { i, j, dim: n });
    }
    let mut p = IntMatrix::identity(n);
    p.set(i, j, 1);
    p.set(j, j, -1);
    Ok(basis.then(&BasisChange::new(p)?)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cell {
    Empty,
    /// `±(e_i - e_j)`.
    Diff,
    /// `±(e_1 - e_i - e_j)`.
    Triple,
    /// Both forms present.
    Conflict,
}

/// Pattern match of a set against the rows of the table
///
/// ```text
/// ±e1  ±(e1-e2)  ±(e1-e3) ... ±(e1-en)
///      ±e2       y_23     ... y_2n
///                ±e3      ... y_3n
///                              ...
///                              ±en
/// ```
///
/// where each `y_ij` is `±(e_i - e_j)` or `±(e_1 - e_i - e_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub dim: usize,
    /// Indices `i` with `±e_i` present.
    pub units: BTreeSet<usize>,
    /// Indices `i ≥ 1` with `±(e_1 - e_i)` present.
    pub first_row: BTreeSet<usize>,
    /// Keyed by `(i, j)` with `1 ≤ i < j < n`.
    pub table: BTreeMap<(usize, usize), Cell>,
    /// Half-system representatives (basis coordinates) matching no form.
    pub leftovers: Vec<IntVector>,
}

impl Classification {
    pub fn accepted(&self) -> bool {
        self.leftovers.is_empty()
            && self.units.len() == self.dim
            && self.first_row.len() == self.dim - 1
            && self.table.values().all(|c| matches!(c, Cell::Diff | Cell::Triple))
    }

    pub fn cell(&self, i: usize, j: usize) -> Cell {
        self.table.get(&(i.min(j), i.max(j))).copied().unwrap_or(Cell::Empty)
    }

    pub fn triples(&self) -> Vec<(usize, usize)> {
        self.table.iter().filter(|(_, c)| **c == Cell::Triple).map(|(&k, _)| k).collect()
    }
}

enum Form {
    Unit(usize),
    FirstRow(usize),
    Diff(usize, usize),
    Triple(usize, usize),
}

fn match_form(v: &IntVector) -> Option<Form> {
    let support: Vec<usize> = (0..v.dim()).filter(|&i| v[i] != 0).collect();
    match *support.as_slice() {
        [i] if v[i].abs() == 1 => Some(Form::Unit(i)),
        [0, i] if v[0] == -v[i] && v[0].abs() == 1 => Some(Form::FirstRow(i)),
        [i, j] if v[i] == -v[j] && v[i].abs() == 1 => Some(Form::Diff(i, j)),
        [0, i, j] if v[0].abs() == 1 && v[i] == -v[0] && v[j] == -v[0] => Some(Form::Triple(i, j)),
        _ => None,
    }
}

pub fn classify(set: &VectorSet, basis: &BasisChange) -> Result<Classification> {
    let classes = classes_in_basis(set, basis)?;
    let n = set.dim();
    let mut out = Classification {
        dim: n,
        units: BTreeSet::new(),
        first_row: BTreeSet::new(),
        table: (1..n).tuple_combinations().map(|(i, j)| ((i, j), Cell::Empty)).collect(),
        leftovers: Vec::new(),
    };
    for v in classes {
        let tag = match match_form(&v) {
            Some(Form::Unit(i)) => {
                out.units.insert(i);
                continue;
            }
            Some(Form::FirstRow(i)) => {
                out.first_row.insert(i);
                continue;
            }
            Some(Form::Diff(i, j)) => ((i, j), Cell::Diff),
            Some(Form::Triple(i, j)) => ((i, j), Cell::Triple),
            None => {
                out.leftovers.push(v);
                continue;
            }
        };
        let cell = out.table.get_mut(&tag.0).expect("table covers every pair");
        *cell = match *cell {
            Cell::Empty => tag.1,
            _ => Cell::Conflict,
        };
    }
    Ok(out)
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim;
        let name = |i: usize, j: usize| -> String {
            match (i, j) {
                (i, j) if i == j => {
                    if self.units.contains(&i) {
                        format!("e{}", i + 1)
                    } else {
                        "-".into()
                    }
                }
                (0, j) => {
                    if self.first_row.contains(&j) {
                        format!("e1-e{}", j + 1)
                    } else {
                        "-".into()
                    }
                }
                (i, j) => match self.cell(i, j) {
                    Cell::Diff => format!("e{}-e{}", i + 1, j + 1),
                    Cell::Triple => format!("e1-e{}-e{}", i + 1, j + 1),
                    Cell::Conflict => "conflict".into(),
                    Cell::Empty => "-".into(),
                },
            }
        };
        let cells: Vec<Vec<String>> = (0..n)
            .map(|i| (0..n).map(|j| if j < i { String::new() } else { name(i, j) }).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in &cells {
            let line = row.iter().map(|c| format!("{c:>width$}")).join(" ");
            writeln!(f, "{}", line.trim_end())?;
        }
        for v in &self.leftovers {
            writeln!(f, "leftover {}", symbolic(v))?;
        }
        Ok(())
    }
}

/// Classify before and after composing with `p_{i,j}` and return the
/// leftovers that the transformation introduced (new coordinates).
pub fn pij_new_leftovers(set: &VectorSet, basis: &BasisChange, i: usize, j: usize) -> Result<Vec<IntVector>> {
    let before = classify(set, basis)?;
    let after_basis = apply_pij(basis, i, j)?;
    let after = classify(set, &after_basis)?;
    let old: BTreeSet<IntVector> = before
        .leftovers
        .iter()
        .map(|v| after_basis.express(&basis.apply(v)?))
        .collect::<std::result::Result<_, _>>()?;
    Ok(after.leftovers.into_iter().filter(|v| !old.contains(v)).collect())
}

/// The split-frame example in which forgetting `e_1` turns `(r-1)(n-r)` pairs
/// of `S(A_n)` into vectors of `S'` that are not in `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterexampleReport {
    pub n: usize,
    pub r: usize,
    /// Split-frame basis in canonical coordinates.
    pub basis: BasisChange,
    /// `|S_1| / 2`: pairs of `S'` already in `S`.
    pub kept_pairs: usize,
    /// `|S_2| / 2`: pairs of `S'` that must be shifted by `±e_1`.
    pub modified_pairs: usize,
    pub expected_modified: usize,
    /// Twin systems in split-frame coordinates, each presented as `{-e_i, e_1 - e_i}` when possible.
    pub twins: Vec<TwinSystem>,
    /// Whether the twin systems are exactly `{-e_i, e_1 - e_i}`, `2 ≤ i ≤ n`.
    pub twins_match: bool,
}

impl CounterexampleReport {
    pub fn reproduced(&self) -> bool {
        self.modified_pairs == self.expected_modified && self.twins_match
    }
}

pub fn counterexample(n: usize, r: usize) -> Result<CounterexampleReport> {
    if r < 2 || r + 1 > n {
        return Err(AuditError::SplitOutOfRange { n, r });
    }
    let canonical = canonical_an(n)?;
    let basis = gap_basis(n, r)?;
    let local = canonical.transform(&basis)?;
    let split = sprime_split(&local, &BasisChange::identity(n))?;
    let e1 = IntVector::unit(n, 0);
    let found = twin_systems(&local, &e1)?;

    let expected: BTreeSet<TwinSystem> = (1..n)
        .map(|i| {
            let x = IntVector::unit(n, i).checked_neg()?;
            let partner = x.checked_add(&e1)?;
            Ok(TwinSystem { x, partner })
        })
        .collect::<Result<_>>()?;
    let mut presented: Vec<TwinSystem> = found
        .iter()
        .map(|t| if expected.contains(t) { Ok(t.clone()) } else { t.mirrored() })
        .collect::<Result<_>>()?;
    // by the index i of the first nonzero coordinate after e_1
    presented.sort_by_key(|t| t.x.coords().iter().skip(1).position(|&c| c != 0));
    let twins_match = presented.len() == expected.len() && presented.iter().all(|t| expected.contains(t));

    Ok(CounterexampleReport {
        n,
        r,
        basis,
        kept_pairs: split.kept_pairs,
        modified_pairs: split.modified_pairs,
        expected_modified: (r - 1) * (n - r),
        twins: presented,
        twins_match,
    })
}
