//! Weights, weight diagrams, partitions, box moves, quasisymmetric
//! partitions, Littlewood-Richardson coefficients and the socle
//! multiplicity formula.
//!
//! A weight is a finite nondecreasing integer sequence; for the infinite
//! rank convention the stored list carries no trailing zeros. The weight
//! diagram places a ball at position `lambda_i + (i-1)` for every i.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::RwLock;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeightError {
    #[error("entries must be nondecreasing")]
    NotNondecreasing,
    #[error("rank {rank} weight must have exactly {rank} entries, got {got}")]
    WrongLength { rank: usize, got: usize },
    #[error("infinite-rank weight must not have trailing zeros")]
    TrailingZeros,
    #[error("operation requires all entries <= 0")]
    PositiveEntry,
    #[error("operation requires an infinite-rank weight")]
    NotInfiniteRank,
    #[error("diagram is not a valid weight diagram: {0}")]
    BadDiagram(String),
    #[error("partition rows must be positive and nonincreasing")]
    BadPartition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rank {
    Finite(usize),
    Inf,
}

impl Serialize for Rank {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Rank::Finite(n) => s.serialize_u64(*n as u64),
            Rank::Inf => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Rank {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(|n| Rank::Finite(n as usize))
                .ok_or_else(|| D::Error::custom("rank must be a nonnegative integer or \"inf\"")),
            serde_json::Value::String(s) if s == "inf" => Ok(Rank::Inf),
            _ => Err(D::Error::custom("rank must be a nonnegative integer or \"inf\"")),
        }
    }
}

/// A dominant integral weight, nondecreasing entries.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Weight {
    pub rank: Rank,
    pub entries: Vec<i64>,
}

impl Weight {
    pub fn finite(entries: Vec<i64>) -> Result<Self, WeightError> {
        let w = Weight {
            rank: Rank::Finite(entries.len()),
            entries,
        };
        w.validate()?;
        Ok(w)
    }

    /// Builds an infinite-rank weight, stripping trailing zeros.
    pub fn infinite(mut entries: Vec<i64>) -> Result<Self, WeightError> {
        while entries.last() == Some(&0) {
            entries.pop();
        }
        let w = Weight {
            rank: Rank::Inf,
            entries,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<(), WeightError> {
        if self.entries.windows(2).any(|w| w[0] > w[1]) {
            return Err(WeightError::NotNondecreasing);
        }
        match self.rank {
            Rank::Finite(n) => {
                if self.entries.len() != n {
                    return Err(WeightError::WrongLength {
                        rank: n,
                        got: self.entries.len(),
                    });
                }
            }
            Rank::Inf => {
                if self.entries.last() == Some(&0) {
                    return Err(WeightError::TrailingZeros);
                }
                // nondecreasing with implied zero tail forces entries <= 0
                if self.entries.iter().any(|&e| e > 0) {
                    return Err(WeightError::NotNondecreasing);
                }
            }
        }
        Ok(())
    }

    /// The i-th entry (1-based), with the implied zero tail for rank `inf`.
    pub fn entry(&self, i: usize) -> i64 {
        self.entries.get(i - 1).copied().unwrap_or(0)
    }

    pub fn as_infinite(&self) -> Result<Weight, WeightError> {
        if self.entries.iter().any(|&e| e > 0) {
            return Err(WeightError::PositiveEntry);
        }
        Weight::infinite(self.entries.clone())
    }
}

/// |lambda| = -sum of entries.
pub fn weight_size(lambda: &Weight) -> i64 {
    -lambda.entries.iter().sum::<i64>()
}

/// k-admissible: all entries <= 0 and |lambda| <= k.
pub fn is_k_admissible(lambda: &Weight, k: i64) -> bool {
    lambda.entries.iter().all(|&e| e <= 0) && weight_size(lambda) <= k
}

/// Ball positions of the weight diagram d_lambda.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDiagram {
    /// strictly increasing exceptional ball positions (rank n: all n balls)
    pub balls: Vec<i64>,
    /// for the infinite case, every position >= tail carries a ball
    pub tail: Option<i64>,
}

pub fn weight_to_diagram(lambda: &Weight) -> WeightDiagram {
    let balls: Vec<i64> = lambda
        .entries
        .iter()
        .enumerate()
        .map(|(i, &e)| e + i as i64)
        .collect();
    match lambda.rank {
        Rank::Finite(_) => WeightDiagram { balls, tail: None },
        Rank::Inf => WeightDiagram {
            balls,
            tail: Some(lambda.entries.len() as i64),
        },
    }
}

pub fn diagram_to_weight(d: &WeightDiagram) -> Result<Weight, WeightError> {
    if d.balls.windows(2).any(|w| w[0] >= w[1]) {
        return Err(WeightError::BadDiagram(
            "ball positions must be strictly increasing".into(),
        ));
    }
    match d.tail {
        None => {
            let entries: Vec<i64> = d
                .balls
                .iter()
                .enumerate()
                .map(|(i, &b)| b - i as i64)
                .collect();
            Weight::finite(entries)
        }
        Some(tail) => {
            if d.balls.last().is_some_and(|&b| b >= tail) {
                return Err(WeightError::BadDiagram(
                    "exceptional balls must lie below the tail threshold".into(),
                ));
            }
            if d.balls.len() as i64 != tail {
                return Err(WeightError::BadDiagram(format!(
                    "a canonical infinite diagram needs as many exceptional balls ({}) as its tail threshold ({})",
                    d.balls.len(),
                    tail
                )));
            }
            let entries: Vec<i64> = d
                .balls
                .iter()
                .enumerate()
                .map(|(i, &b)| b - i as i64)
                .collect();
            Weight::infinite(entries)
        }
    }
}

/// Young diagram, nonincreasing positive row lengths.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Partition {
    pub rows: Vec<u32>,
}

impl Partition {
    pub fn new(rows: Vec<u32>) -> Result<Self, WeightError> {
        if rows.contains(&0) || rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(WeightError::BadPartition);
        }
        Ok(Partition { rows })
    }

    pub fn empty() -> Self {
        Partition { rows: vec![] }
    }

    pub fn size(&self) -> u32 {
        self.rows.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, i: usize) -> u32 {
        self.rows.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.row(0) as usize;
        let rows = (1..=cols)
            .map(|j| self.rows.iter().filter(|&&r| r as usize >= j).count() as u32)
            .collect();
        Partition { rows }
    }

    pub fn contains(&self, other: &Partition) -> bool {
        (0..other.len()).all(|i| self.row(i) >= other.row(i))
    }

    /// All partitions of n, in lexicographically decreasing order.
    pub fn all_of(n: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur: Vec<u32> = Vec::new();
        fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition { rows: cur.clone() });
                return;
            }
            let hi = rem.min(max);
            for part in (1..=hi).rev() {
                cur.push(part);
                rec(rem - part, part, cur, out);
                cur.pop();
            }
        }
        rec(n, n, &mut cur, &mut out);
        out
    }
}

/// The Young diagram of a weight with entries <= 0: column j has length
/// -lambda_j.
pub fn young_from_weight(lambda: &Weight) -> Result<Partition, WeightError> {
    if lambda.entries.iter().any(|&e| e > 0) {
        return Err(WeightError::PositiveEntry);
    }
    let col_lengths: Vec<u32> = lambda.entries.iter().map(|&e| (-e) as u32).collect();
    // rows of the diagram = conjugate of the column profile
    let max_len = col_lengths.first().copied().unwrap_or(0) as usize;
    let rows = (1..=max_len)
        .map(|i| col_lengths.iter().filter(|&&c| c as usize >= i).count() as u32)
        .collect();
    Ok(Partition { rows })
}

/// Inverse of `young_from_weight`, as an infinite-rank weight.
pub fn weight_from_young(p: &Partition) -> Weight {
    let conj = p.conjugate();
    let entries: Vec<i64> = conj.rows.iter().map(|&c| -(c as i64)).collect();
    Weight::infinite(entries).expect("conjugate rows are nonincreasing")
}

/// lambda-dual: Young transpose, cross-checked against the diagram
/// reflection x -> -1-x with colors reversed. The result is an
/// infinite-rank weight.
pub fn dual_weight(lambda: &Weight) -> Result<Weight, WeightError> {
    let lam = lambda.as_infinite()?;
    // route (a): transpose of the Young diagram
    let young = young_from_weight(&lam)?;
    let transposed = weight_from_young(&young.conjugate());
    // route (b): reflect the diagram at -1/2 and swap colors
    let d = weight_to_diagram(&lam);
    let tail = d.tail.expect("infinite weight has a tail");
    let low = d.balls.first().copied().unwrap_or(0).min(0);
    let mut holes: Vec<i64> = (low..tail).filter(|p| !d.balls.contains(p)).collect();
    // reflected positions -1-h for each hole h; holes below `low` map to the
    // new tail (all positions >= -low carry balls)
    for h in holes.iter_mut() {
        *h = -1 - *h;
    }
    holes.sort_unstable();
    let reflected = diagram_to_weight(&WeightDiagram {
        balls: holes,
        tail: Some(-low),
    })?;
    assert_eq!(
        transposed, reflected,
        "transpose and diagram-reflection duals disagree for {:?}",
        lambda
    );
    Ok(transposed)
}

/// First n entries of an infinite weight, with the implied zero tail.
pub fn truncate(lambda: &Weight, n: usize) -> Result<Weight, WeightError> {
    if lambda.rank != Rank::Inf {
        return Err(WeightError::NotInfiniteRank);
    }
    let entries: Vec<i64> = (1..=n).map(|i| lambda.entry(i)).collect();
    Weight::finite(entries)
}

/// One-box moves. `minus` holds the weights lambda - eps_i (a box added,
/// |mu| = |lambda|+1), `plus` the weights lambda + eps_i (a box removed).
/// With `k` given, both lists are filtered to k-admissible weights.
pub fn box_moves(lambda: &Weight, k: Option<i64>) -> (Vec<Weight>, Vec<Weight>) {
    let mut minus = Vec::new();
    let mut plus = Vec::new();
    let positions = match lambda.rank {
        Rank::Finite(n) => n,
        Rank::Inf => lambda.entries.len() + 1,
    };
    for i in 1..=positions {
        for delta in [-1i64, 1] {
            let mut entries: Vec<i64> = (1..=positions.max(lambda.entries.len()))
                .map(|j| lambda.entry(j))
                .collect();
            entries[i - 1] += delta;
            let candidate = match lambda.rank {
                Rank::Finite(n) => {
                    debug_assert_eq!(entries.len(), n);
                    Weight::finite(entries)
                }
                Rank::Inf => Weight::infinite(entries),
            };
            if let Ok(mu) = candidate {
                if let Some(kk) = k {
                    if !is_k_admissible(&mu, kk) {
                        continue;
                    }
                }
                if delta == -1 {
                    minus.push(mu);
                } else {
                    plus.push(mu);
                }
            }
        }
    }
    minus.sort();
    minus.dedup();
    plus.sort();
    plus.dedup();
    (minus, plus)
}

/// Durfee length: number of diagonal boxes.
fn diagonal_length(p: &Partition) -> usize {
    (0..p.len()).filter(|&i| p.row(i) as usize > i).count()
}

/// Quasisymmetric: conj(p)_i = p_i - 1 along every diagonal index,
/// i.e. all Frobenius hooks have arm = leg + 1.
pub fn is_quasisymmetric(p: &Partition) -> bool {
    let conj = p.conjugate();
    let d = diagonal_length(p);
    (0..d).all(|i| conj.row(i) as i64 == p.row(i) as i64 - 1)
}

type LrKey = (Vec<u32>, Vec<u32>, Vec<u32>);

/// One memoized coefficient as stored in the on-disk cache.
pub type LrCacheEntry = (Vec<u32>, Vec<u32>, Vec<u32>, u64);
static LR_CACHE: RwLock<Option<HashMap<LrKey, u64>>> = RwLock::new(None);

/// Littlewood-Richardson coefficient N^zeta_{gamma,beta}, by enumerating
/// LR skew tableaux of shape zeta/gamma and content beta.
pub fn lr_coeff(gamma: &Partition, beta: &Partition, zeta: &Partition) -> u64 {
    if gamma.size() + beta.size() != zeta.size() || !zeta.contains(gamma) {
        return 0;
    }
    let key = (gamma.rows.clone(), beta.rows.clone(), zeta.rows.clone());
    if let Some(cache) = LR_CACHE.read().unwrap().as_ref() {
        if let Some(&v) = cache.get(&key) {
            return v;
        }
    }
    let v = count_lr_tableaux(gamma, beta, zeta);
    let mut guard = LR_CACHE.write().unwrap();
    guard.get_or_insert_with(HashMap::new).insert(key, v);
    v
}

/// Snapshot of the memo cache, used by the CLI to persist LR tables.
pub fn lr_cache_snapshot() -> Vec<LrCacheEntry> {
    let guard = LR_CACHE.read().unwrap();
    let mut out: Vec<_> = guard
        .as_ref()
        .map(|m| {
            m.iter()
                .map(|((g, b, z), &v)| (g.clone(), b.clone(), z.clone(), v))
                .collect()
        })
        .unwrap_or_default();
    out.sort();
    out
}

pub fn lr_cache_seed(entries: &[LrCacheEntry]) {
    let mut guard = LR_CACHE.write().unwrap();
    let map = guard.get_or_insert_with(HashMap::new);
    for (g, b, z, v) in entries {
        map.insert((g.clone(), b.clone(), z.clone()), *v);
    }
}

fn count_lr_tableaux(gamma: &Partition, beta: &Partition, zeta: &Partition) -> u64 {
    // cells of zeta/gamma in reading order: top row to bottom row, and within
    // a row right to left, so that prefixes of the filling sequence are
    // exactly prefixes of the reverse reading word.
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for r in 0..zeta.len() {
        let lo = gamma.row(r) as usize;
        let hi = zeta.row(r) as usize;
        for c in (lo..hi).rev() {
            cells.push((r, c));
        }
    }
    let nrows = zeta.len();
    let ncols = zeta.row(0) as usize;
    let mut grid = vec![vec![0u32; ncols]; nrows]; // 0 = empty, else entry
    let mut remaining: Vec<u32> = beta.rows.clone();
    let mut counts = vec![0u32; beta.len() + 1]; // counts[e] for lattice check
    let mut total = 0u64;

    fn rec(
        idx: usize,
        cells: &[(usize, usize)],
        grid: &mut Vec<Vec<u32>>,
        remaining: &mut Vec<u32>,
        counts: &mut Vec<u32>,
        gamma: &Partition,
        total: &mut u64,
    ) {
        if idx == cells.len() {
            *total += 1;
            return;
        }
        let (r, c) = cells[idx];
        for e in 1..=remaining.len() as u32 {
            if remaining[e as usize - 1] == 0 {
                continue;
            }
            // lattice word: placing e needs counts[e-1] > counts[e] for e > 1
            if e > 1 && counts[e as usize - 1] <= counts[e as usize] {
                continue;
            }
            // weakly increasing along rows (left neighbor, which is filled
            // later in our order, so compare against the right neighbor
            // already placed): right neighbor must be >= e
            if c + 1 < grid[r].len() && grid[r][c + 1] != 0 && grid[r][c + 1] < e {
                continue;
            }
            // strictly increasing down columns: the cell above must be < e
            if r > 0 && (c as u32) >= gamma.row(r - 1) {
                let above = grid[r - 1][c];
                if above == 0 || above >= e {
                    continue;
                }
            }
            grid[r][c] = e;
            remaining[e as usize - 1] -= 1;
            counts[e as usize] += 1;
            rec(idx + 1, cells, grid, remaining, counts, gamma, total);
            grid[r][c] = 0;
            remaining[e as usize - 1] += 1;
            counts[e as usize] -= 1;
        }
    }

    rec(
        0,
        &cells,
        &mut grid,
        &mut remaining,
        &mut counts,
        gamma,
        &mut total,
    );
    total
}

/// [soc^k Y(zeta) : L(beta)] = sum over quasisymmetric gamma of size k of
/// N^zeta_{gamma,beta}.
pub fn socle_multiplicity(zeta: &Partition, beta: &Partition, k: u32) -> u64 {
    Partition::all_of(k)
        .iter()
        .filter(|g| is_quasisymmetric(g))
        .map(|g| lr_coeff(g, beta, zeta))
        .sum()
}

/// The witness (zeta, k) with zeta = delta + beta for delta the
/// |beta| x (|beta|+1) rectangle, k = |delta|.
pub fn cosocle_witness(beta: &Partition) -> (Partition, u32) {
    let b = beta.size();
    if b == 0 {
        return (Partition::empty(), 0);
    }
    let width = b + 1;
    let rows: Vec<u32> = (0..b as usize).map(|i| width + beta.row(i)).collect();
    let zeta = Partition::new(rows).expect("rectangle plus partition is a partition");
    (zeta, b * width)
}
