//! Test-corpus factory: canonical `S(A_n)`, deterministic unimodular
//! scrambles, the split-frame basis that breaks the naive induction, and
//! mutants that violate one hypothesis each.
//!
//! Scrambles are driven by `ChaCha8Rng::seed_from_u64` (crate `rand_chacha`
//! 0.3) with `rand` 0.8's `gen_range`/`gen_bool`, so a `seed:steps` recipe
//! reproduces the same matrix wherever those crate versions are used.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{BasisChange, IntMatrix, IntVector, LinalgError};
use crate::vectorset::{VectorSet, VectorSetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("split index r = {r} out of range 1..={n}")]
    SplitOutOfRange { n: usize, r: usize },
    #[error("pair index {index} out of range ({pairs} antipodal pairs)")]
    PairIndexOutOfRange { index: usize, pairs: usize },
    #[error("coordinate indices must be distinct and below {dim}, got ({i}, {j})")]
    BadIndices { i: usize, j: usize, dim: usize },
    #[error(transparent)]
    Set(#[from] VectorSetError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The minimal vectors of `A_n` in the basis `e_i = ε_0 - ε_i`:
/// `{±e_i} ∪ {±(e_i - e_j)}`, `n(n+1)` vectors.
///
/// Built from the ambient description: every `ε_a - ε_b` (`a ≠ b`) of
/// `Z^{n+1}` is rewritten in that basis. A coordinate-sum-zero vector
/// `Σ a_k ε_k` equals `Σ_{i≥1} (-a_i) e_i`.
pub fn canonical_an(n: usize) -> Result<VectorSet, GenerateError> {
    if n == 0 {
        return Err(GenerateError::ZeroDimension);
    }
    let mut vectors = Vec::with_capacity(n * (n + 1));
    for a in 0..=n {
        for b in 0..=n {
            if a == b {
                continue;
            }
            let mut ambient = vec![0i64; n + 1];
            ambient[a] = 1;
            ambient[b] = -1;
            vectors.push(IntVector::new(ambient[1..].iter().map(|&x| -x).collect()));
        }
    }
    Ok(VectorSet::from_vectors(n, vectors)?)
}

/// A deterministic scramble: PRNG seed and number of elementary operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ScrambleRecipe {
    pub seed: u64,
    pub steps: u32,
}

impl ScrambleRecipe {
    pub fn new(seed: u64, steps: u32) -> Self {
        ScrambleRecipe { seed, steps }
    }
}

impl fmt::Display for ScrambleRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.seed, self.steps)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid scramble recipe {0:?}: expected \"seed:steps\" with unsigned decimal integers")]
pub struct RecipeParseError(pub String);

impl FromStr for ScrambleRecipe {
    type Err = RecipeParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RecipeParseError(s.to_string());
        let (seed, steps) = s.split_once(':').ok_or_else(bad)?;
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if !digits(seed) || !digits(steps) {
            return Err(bad());
        }
        Ok(ScrambleRecipe {
            seed: seed.parse().map_err(|_| bad())?,
            steps: steps.parse().map_err(|_| bad())?,
        })
    }
}

/// Product of `recipe.steps` random elementary column operations on the
/// identity: add ±1 times one column to another, swap two columns, or negate
/// a column. With `n = 1` only negation is available.
pub fn random_unimodular(n: usize, recipe: ScrambleRecipe) -> Result<BasisChange, GenerateError> {
    if n == 0 {
        return Err(GenerateError::ZeroDimension);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(recipe.seed);
    let mut m = IntMatrix::identity(n);
    for _ in 0..recipe.steps {
        let op = if n == 1 { 2 } else { rng.gen_range(0..3) };
        match op {
            0 => {
                let (src, dst) = distinct_pair(&mut rng, n);
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                for r in 0..n {
                    let v = m.get(r, dst).checked_add(sign * m.get(r, src)).ok_or(LinalgError::Overflow)?;
                    m.set(r, dst, v);
                }
            }
            1 => {
                let (a, b) = distinct_pair(&mut rng, n);
                for r in 0..n {
                    let (x, y) = (m.get(r, a), m.get(r, b));
                    m.set(r, a, y);
                    m.set(r, b, x);
                }
            }
            _ => {
                let k = rng.gen_range(0..n);
                for r in 0..n {
                    m.set(r, k, -m.get(r, k));
                }
            }
        }
    }
    Ok(BasisChange::new(m)?)
}

fn distinct_pair(rng: &mut ChaCha8Rng, n: usize) -> (usize, usize) {
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

/// Returns the set re-expressed in a random basis together with that basis.
pub fn scramble(set: &VectorSet, recipe: ScrambleRecipe) -> Result<(VectorSet, BasisChange), GenerateError> {
    let u = random_unimodular(set.dim(), recipe)?;
    Ok((set.transform(&u)?, u))
}

/// The basis `e_k = f_k` for `k ≤ r`, `e_k = f_1 - f_k` for `k > r` (1-based),
/// written in the canonical frame `f`. With `r = n` this is the identity.
///
/// In this frame the compressed set obtained by forgetting `e_1` differs from
/// the original set on `(r-1)(n-r)` antipodal pairs.
pub fn gap_basis(n: usize, r: usize) -> Result<BasisChange, GenerateError> {
    if r == 0 || r > n {
        return Err(GenerateError::SplitOutOfRange { n, r });
    }
    let mut m = IntMatrix::identity(n);
    for k in r..n {
        m.set(0, k, 1);
        m.set(k, k, -1);
    }
    Ok(BasisChange::new(m)?)
}

/// Remove the antipodal pair whose half-system representative has index
/// `pair_index` (see [`VectorSet::half_system`]).
pub fn mutate_drop_pair(set: &VectorSet, pair_index: usize) -> Result<VectorSet, GenerateError> {
    let hs = set.half_system()?;
    let x = hs
        .get(pair_index)
        .ok_or(GenerateError::PairIndexOutOfRange { index: pair_index, pairs: hs.len() })?;
    let neg = x.checked_neg()?;
    Ok(set.without([x, &neg]))
}

/// Add `±(e_i + e_j)` (0-based coordinates).
pub fn mutate_inject_sum(set: &VectorSet, i: usize, j: usize) -> Result<VectorSet, GenerateError> {
    let dim = set.dim();
    if i == j || i >= dim || j >= dim {
        return Err(GenerateError::BadIndices { i, j, dim });
    }
    let sum = IntVector::unit(dim, i).checked_add(&IntVector::unit(dim, j))?;
    let neg = sum.checked_neg()?;
    Ok(set.with([sum, neg])?)
}
