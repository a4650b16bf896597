//! Exact rational linear algebra used by every other module.
//!
//! Everything here works over `BigRational`; there is no floating point
//! anywhere in the crate. Nullspaces go through a fraction-free integer
//! elimination after clearing denominators, so the answers are exact and
//! the echelon forms are deterministic.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::collections::BTreeMap;

pub type Q = BigRational;

pub fn qz(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Sparse matrix with deterministic (sorted) entry order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat {
    pub nrows: usize,
    pub ncols: usize,
    entries: BTreeMap<(usize, usize), Q>,
}

impl SparseMat {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMat {
            nrows,
            ncols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        debug_assert!(r < self.nrows && c < self.ncols);
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Q) {
        if v.is_zero() {
            return;
        }
        let cur = self.entries.entry((r, c)).or_insert_with(Q::zero);
        *cur += v;
        if cur.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Q)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&self, s: &Q) -> SparseMat {
        let mut out = SparseMat::zero(self.nrows, self.ncols);
        if s.is_zero() {
            return out;
        }
        for (r, c, v) in self.iter() {
            out.set(r, c, v * s);
        }
        out
    }

    pub fn add(&self, other: &SparseMat) -> SparseMat {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut out = self.clone();
        for (r, c, v) in other.iter() {
            out.add_to(r, c, v);
        }
        out
    }

    pub fn sub(&self, other: &SparseMat) -> SparseMat {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn mul(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.ncols, other.nrows, "shape mismatch in matrix product");
        // index rhs rows
        let mut rhs_rows: BTreeMap<usize, Vec<(usize, &Q)>> = BTreeMap::new();
        for (r, c, v) in other.iter() {
            rhs_rows.entry(r).or_default().push((c, v));
        }
        let mut out = SparseMat::zero(self.nrows, other.ncols);
        for (r, k, v) in self.iter() {
            if let Some(row) = rhs_rows.get(&k) {
                for (c, w) in row {
                    out.add_to(r, *c, &(v * *w));
                }
            }
        }
        out
    }

    /// Plain transpose (no sign rules; super-aware duals live in `superalg`).
    pub fn transpose(&self) -> SparseMat {
        let mut out = SparseMat::zero(self.ncols, self.nrows);
        for (r, c, v) in self.iter() {
            out.set(c, r, v.clone());
        }
        out
    }

    pub fn apply(&self, v: &BTreeMap<usize, Q>) -> BTreeMap<usize, Q> {
        let mut out: BTreeMap<usize, Q> = BTreeMap::new();
        for (r, c, m) in self.iter() {
            if let Some(x) = v.get(&c) {
                let cur = out.entry(r).or_insert_with(Q::zero);
                *cur += m * x;
            }
        }
        out.retain(|_, x| !x.is_zero());
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        let mut d = vec![vec![Q::zero(); self.ncols]; self.nrows];
        for (r, c, v) in self.iter() {
            d[r][c] = v.clone();
        }
        d
    }

    pub fn from_dense(d: &[Vec<Q>]) -> SparseMat {
        let nrows = d.len();
        let ncols = if nrows == 0 { 0 } else { d[0].len() };
        let mut m = SparseMat::zero(nrows, ncols);
        for (r, row) in d.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.set(r, c, v.clone());
                }
            }
        }
        m
    }
}

/// Clears denominators of a rational row and divides by the content, flipping
/// the sign so the first nonzero entry is positive.
pub fn primitive_integer_row(row: &[Q]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for v in row {
        if !v.is_zero() {
            lcm = num::integer::lcm(lcm, v.denom().clone());
        }
    }
    let mut out: Vec<BigInt> = row.iter().map(|v| (v * &lcm).to_integer()).collect();
    let mut g = BigInt::zero();
    for v in &out {
        g = num::integer::gcd(g, v.clone());
    }
    if !g.is_zero() && !g.is_one() {
        for v in &mut out {
            *v /= &g;
        }
    }
    if let Some(first) = out.iter().find(|v| !v.is_zero()) {
        if first.is_negative() {
            for v in &mut out {
                *v = -v.clone();
            }
        }
    }
    out
}

/// Fraction-free (Bareiss) row echelon over the integers.
/// Returns the echelon rows and their pivot columns.
fn bareiss_echelon(mut rows: Vec<Vec<BigInt>>) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    rows.retain(|r| r.iter().any(|v| !v.is_zero()));
    if rows.is_empty() {
        return (rows, vec![]);
    }
    let ncols = rows[0].len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut prev = BigInt::one();
    let mut rank = 0usize;
    for col in 0..ncols {
        let piv = (rank..rows.len()).find(|&r| !rows[r][col].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => continue,
        };
        rows.swap(rank, piv);
        let lead = rows[rank][col].clone();
        for r in rank + 1..rows.len() {
            let factor = rows[r][col].clone();
            for c in 0..ncols {
                let val = &rows[r][c] * &lead - &factor * &rows[rank][c];
                rows[r][c] = &val / &prev;
            }
        }
        prev = lead;
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    (rows, pivots)
}

/// Rank of a rational matrix given as rows.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let int_rows: Vec<Vec<BigInt>> = rows.iter().map(|r| primitive_integer_row(r)).collect();
    bareiss_echelon(int_rows).0.len()
}

/// Exact nullspace of the linear map given by `rows` (each row is one
/// constraint). The basis is deterministic: one vector per free column, in
/// increasing column order, normalized to a primitive integer vector.
pub fn nullspace(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let int_rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), ncols);
            primitive_integer_row(r)
        })
        .collect();
    let (ech, pivots) = bareiss_echelon(int_rows);
    let pivot_set: Vec<usize> = pivots.clone();
    let is_pivot = |c: usize| pivot_set.contains(&c);
    let mut basis = Vec::new();
    for free in 0..ncols {
        if is_pivot(free) {
            continue;
        }
        // back-substitute with the free variable set to 1
        let mut v = vec![Q::zero(); ncols];
        v[free] = Q::one();
        for (i, &pc) in pivots.iter().enumerate().rev() {
            if pc > free {
                continue;
            }
            let mut s = Q::zero();
            for c in pc + 1..ncols {
                if !ech[i][c].is_zero() && !v[c].is_zero() {
                    s += Q::from_integer(ech[i][c].clone()) * &v[c];
                }
            }
            v[pc] = -s / Q::from_integer(ech[i][pc].clone());
        }
        let prim = primitive_integer_row(&v);
        basis.push(prim.into_iter().map(Q::from_integer).collect());
    }
    basis
}

/// Incremental row-space tracker. Vectors are reduced against a maintained
/// reduced echelon; each echelon row remembers its expansion in terms of the
/// inserted basis vectors, so member vectors can be re-expressed in that
/// basis later (used for module action matrices).
#[derive(Clone, Debug, Default)]
pub struct Span {
    dim: usize,
    /// (reduced row, pivot column, combination over inserted basis)
    rows: Vec<(Vec<Q>, usize, Vec<Q>)>,
    n_inserted: usize,
}

impl Span {
    pub fn new(dim: usize) -> Self {
        Span {
            dim,
            rows: Vec::new(),
            n_inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_tracking(&self, v: &[Q]) -> (Vec<Q>, Vec<Q>) {
        let mut w = v.to_vec();
        let mut combo = vec![Q::zero(); self.n_inserted];
        for (row, piv, rc) in &self.rows {
            if w[*piv].is_zero() {
                continue;
            }
            let f = w[*piv].clone() / row[*piv].clone();
            for c in 0..self.dim {
                if !row[c].is_zero() {
                    let t = &f * &row[c];
                    w[c] -= t;
                }
            }
            for (k, x) in rc.iter().enumerate() {
                if !x.is_zero() {
                    let t = &f * x;
                    combo[k] += t;
                }
            }
        }
        (w, combo)
    }

    /// Inserts `v` as a new basis vector if independent; returns true if the
    /// span grew.
    pub fn insert(&mut self, v: &[Q]) -> bool {
        assert_eq!(v.len(), self.dim);
        let (w, mut combo) = self.reduce_tracking(v);
        let piv = match w.iter().position(|x| !x.is_zero()) {
            Some(p) => p,
            None => return false,
        };
        // this reduced row equals v - sum(combo): as a combination of the
        // inserted vectors (v becomes basis vector number n_inserted)
        for x in combo.iter_mut() {
            *x = -x.clone();
        }
        combo.push(Q::one());
        self.n_inserted += 1;
        for (_, _, rc) in &mut self.rows {
            rc.push(Q::zero());
        }
        self.rows.push((w, piv, combo));
        true
    }

    /// Expresses `v` in terms of the inserted basis vectors, if it lies in
    /// the span.
    pub fn coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        let (w, combo) = self.reduce_tracking(v);
        if w.iter().all(|x| x.is_zero()) {
            Some(combo)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let (w, _) = self.reduce_tracking(v);
        w.iter().all(|x| x.is_zero())
    }
}

/// Characteristic polynomial of a square rational matrix, monic, returned
/// with coefficients from the constant term up: p(x) = sum c\[i\] x^i.
/// Uses a Hessenberg reduction followed by the leading-minor recurrence.
pub fn char_poly(a: &[Vec<Q>]) -> Vec<Q> {
    let n = a.len();
    if n == 0 {
        return vec![Q::one()];
    }
    let mut h: Vec<Vec<Q>> = a.to_vec();
    // similarity reduction to upper Hessenberg form
    for j in 0..n.saturating_sub(2) {
        let piv = (j + 1..n).find(|&r| !h[r][j].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => continue,
        };
        if piv != j + 1 {
            h.swap(piv, j + 1);
            for row in h.iter_mut() {
                row.swap(piv, j + 1);
            }
        }
        let lead = h[j + 1][j].clone();
        for r in j + 2..n {
            if h[r][j].is_zero() {
                continue;
            }
            let t = h[r][j].clone() / lead.clone();
            for c in 0..n {
                let sub = &t * &h[j + 1][c];
                h[r][c] -= sub;
            }
            for row in h.iter_mut() {
                let add = &t * &row[r];
                row[j + 1] += add;
            }
        }
    }
    // p_0 = 1, p_k = char poly of leading k x k block
    let mut polys: Vec<Vec<Q>> = Vec::with_capacity(n + 1);
    polys.push(vec![Q::one()]);
    for k in 1..=n {
        // p_k = (x - h[k-1][k-1]) p_{k-1}
        //       - sum_{m=1}^{k-1} h[k-1-m][k-1] (prod_{i=k-m}^{k-1} h[i][i-1]) p_{k-1-m}
        let mut p = poly_shift_mul(&polys[k - 1], &h[k - 1][k - 1]);
        let mut beta = Q::one();
        for m in 1..k {
            beta *= h[k - m][k - m - 1].clone();
            if beta.is_zero() {
                break;
            }
            let coef = &h[k - 1 - m][k - 1] * &beta;
            if coef.is_zero() {
                continue;
            }
            for (i, c) in polys[k - 1 - m].iter().enumerate() {
                let sub = &coef * c;
                p[i] -= sub;
            }
        }
        polys.push(p);
    }
    polys.pop().unwrap()
}

/// (x - r) * p
fn poly_shift_mul(p: &[Q], r: &Q) -> Vec<Q> {
    let mut out = vec![Q::zero(); p.len() + 1];
    for (i, c) in p.iter().enumerate() {
        out[i + 1] += c;
        let t = r * c;
        out[i] -= t;
    }
    out
}

pub fn poly_eval(p: &[Q], x: &Q) -> Q {
    let mut acc = Q::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Divides p by (x - r), assuming r is a root. Returns the quotient.
fn poly_deflate(p: &[Q], r: &Q) -> Vec<Q> {
    let n = p.len();
    let mut out = vec![Q::zero(); n - 1];
    let mut carry = Q::zero();
    for i in (0..n - 1).rev() {
        carry = p[i + 1].clone() + carry * r;
        out[i] = carry.clone();
    }
    debug_assert!((p[0].clone() + carry * r).is_zero());
    out
}

/// Integer roots with multiplicities of a monic rational polynomial within
/// the stated bound, plus the degree of the unsplit remainder. When `bound`
/// dominates the location of every root (e.g. a Gershgorin bound for a
/// characteristic polynomial), a nonzero remainder certifies non-integer
/// roots.
pub fn integer_roots(p: &[Q], bound: i64) -> (BTreeMap<i64, usize>, usize) {
    let mut roots: BTreeMap<i64, usize> = BTreeMap::new();
    let mut cur = p.to_vec();
    loop {
        let deg = cur.len() - 1;
        if deg == 0 {
            return (roots, 0);
        }
        let mut found = None;
        for j in -bound..=bound {
            if poly_eval(&cur, &qz(j)).is_zero() {
                found = Some(j);
                break;
            }
        }
        match found {
            Some(j) => {
                *roots.entry(j).or_insert(0) += 1;
                cur = poly_deflate(&cur, &qz(j));
            }
            None => return (roots, deg),
        }
    }
}

/// Smallest integer at least max_r sum_c |a\[r\]\[c\]|; every eigenvalue lies
/// within this bound.
pub fn gershgorin_bound(a: &[Vec<Q>]) -> i64 {
    let mut best = Q::zero();
    for row in a {
        let mut s = Q::zero();
        for v in row {
            s += v.abs();
        }
        if s > best {
            best = s;
        }
    }
    let int = best.ceil().to_integer();
    i64::try_from(&int).unwrap_or(i64::MAX / 4) + 1
}

/// dim ker M^m for growing m until it stabilizes; returns the stable value.
pub fn stable_kernel_dim(m: &[Vec<Q>]) -> usize {
    let n = m.len();
    if n == 0 {
        return 0;
    }
    let sm = SparseMat::from_dense(m);
    let mut pw = sm.clone();
    let mut last = n - rank(&pw.to_dense());
    loop {
        pw = pw.mul(&sm);
        let k = n - rank(&pw.to_dense());
        if k == last {
            return k;
        }
        last = k;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        qz(n) / qz(d)
    }

    #[test]
    fn nullspace_of_singular_matrix() {
        // x + y + z = 0, x - z = 0  ->  kernel spanned by (1, -2, 1)
        let rows = vec![
            vec![qz(1), qz(1), qz(1)],
            vec![qz(1), qz(0), qz(-1)],
        ];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0], vec![qz(1), qz(-2), qz(1)]);
    }

    #[test]
    fn nullspace_with_fractions() {
        let rows = vec![vec![q(1, 2), q(1, 3)]];
        let ns = nullspace(&rows, 2);
        assert_eq!(ns.len(), 1);
        // (1/2)x + (1/3)y = 0 -> (2, -3)
        assert_eq!(ns[0], vec![qz(2), qz(-3)]);
    }

    #[test]
    fn span_coordinates() {
        let mut sp = Span::new(3);
        assert!(sp.insert(&[qz(1), qz(1), qz(0)]));
        assert!(sp.insert(&[qz(0), qz(1), qz(1)]));
        assert!(!sp.insert(&[qz(1), qz(2), qz(1)]));
        let c = sp.coords(&[qz(1), qz(2), qz(1)]).unwrap();
        assert_eq!(c, vec![qz(1), qz(1)]);
        assert!(sp.coords(&[qz(0), qz(0), qz(1)]).is_none());
    }

    #[test]
    fn char_poly_known_cases() {
        // [[2,1],[0,3]] -> (x-2)(x-3) = x^2 -5x + 6
        let a = vec![vec![qz(2), qz(1)], vec![qz(0), qz(3)]];
        assert_eq!(char_poly(&a), vec![qz(6), qz(-5), qz(1)]);
        // nilpotent [[0,1],[0,0]] -> x^2
        let n = vec![vec![qz(0), qz(1)], vec![qz(0), qz(0)]];
        assert_eq!(char_poly(&n), vec![qz(0), qz(0), qz(1)]);
    }

    #[test]
    fn char_poly_matches_kernel_dims() {
        // companion-ish 3x3 with eigenvalues 1, 1, -2
        let a = vec![
            vec![qz(1), qz(1), qz(0)],
            vec![qz(0), qz(1), qz(0)],
            vec![qz(0), qz(0), qz(-2)],
        ];
        let p = char_poly(&a);
        let (roots, rem) = integer_roots(&p, gershgorin_bound(&a));
        assert_eq!(rem, 0);
        assert_eq!(roots.get(&1), Some(&2));
        assert_eq!(roots.get(&-2), Some(&1));
        // generalized eigenspace of 1 has dim 2
        let shifted: Vec<Vec<Q>> = (0..3)
            .map(|r| {
                (0..3)
                    .map(|c| a[r][c].clone() - if r == c { qz(1) } else { qz(0) })
                    .collect()
            })
            .collect();
        assert_eq!(stable_kernel_dim(&shifted), 2);
    }

    #[test]
    fn char_poly_on_scrambled_triangular_matrices() {
        // random integer upper-triangular matrices conjugated by unimodular
        // shears keep their diagonal as the spectrum
        let mut state = 0x2545f4914f6cdd1du64;
        let mut rng = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..25 {
            let d = (rng() % 4 + 2) as usize;
            let mut a = vec![vec![Q::zero(); d]; d];
            let mut expected: BTreeMap<i64, usize> = BTreeMap::new();
            for i in 0..d {
                let eig = (rng() % 7) as i64 - 3;
                *expected.entry(eig).or_insert(0) += 1;
                a[i][i] = qz(eig);
                for j in i + 1..d {
                    a[i][j] = qz((rng() % 5) as i64 - 2);
                }
            }
            // conjugate by a few integer shears E_{ij}(c): A -> E A E^{-1}
            for _ in 0..6 {
                let i = (rng() % d as u64) as usize;
                let j = (rng() % d as u64) as usize;
                if i == j {
                    continue;
                }
                let c = qz((rng() % 3) as i64 - 1);
                // row_i += c * row_j, then col_j -= c * col_i
                for k in 0..d {
                    let t = &c * &a[j][k];
                    a[i][k] += t;
                }
                for row in a.iter_mut() {
                    let t = &c * &row[i];
                    row[j] -= t;
                }
            }
            let p = char_poly(&a);
            let (roots, rem) = integer_roots(&p, gershgorin_bound(&a));
            assert_eq!(rem, 0);
            assert_eq!(roots, expected);
        }
    }

    #[test]
    fn integer_roots_reports_non_split_part() {
        // x^2 + 1 has no integer roots
        let p = vec![qz(1), qz(0), qz(1)];
        let (roots, rem) = integer_roots(&p, 10);
        assert!(roots.is_empty());
        assert_eq!(rem, 2);
    }
}
