//! Exact rational super linear algebra for the family p(n).
//!
//! p(n) is realized as 2n x 2n matrices (A B; C -A^t) with B symmetric and
//! C antisymmetric, acting on V = C^{n|n} with basis e_1..e_n (even),
//! f_1..f_n (odd) and the odd symmetric pairing beta(e_i, f_j) = delta_ij.
//! Tensor powers carry the standard Koszul-sign action; everything is over
//! BigRational and every decomposition is exact.

use crate::linalg::{char_poly, gershgorin_bound, integer_roots, nullspace, qz, stable_kernel_dim, SparseMat, Span, Q};
use crate::partitions::{weight_size, young_from_weight, Weight};
use num::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SuperError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("weight is not admissible: entries must be <= 0")]
    NotAdmissible,
    #[error("ds requires n >= 3, got {0}")]
    DsRankTooSmall(usize),
    #[error("the embedded subalgebra does not preserve Ker/Im of x ({0})")]
    DsEmbeddingBroken(String),
    #[error("non-integer eigenvalue: a factor of degree {degree} of the characteristic polynomial has no integer root (block {block})")]
    NonIntegerEigenvalue { degree: usize, block: String },
    #[error("matrix is not in the span of the p(n) basis")]
    NotInAlgebra,
}

/// Z/2-graded space with labeled basis parities and, when known, the
/// gl(n)-weights of the basis vectors (used to block-diagonalize solvers).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    pub parities: Vec<u8>,
    pub weights: Option<Vec<Vec<i64>>>,
}

impl GradedSpace {
    pub fn dim(&self) -> usize {
        self.parities.len()
    }
    pub fn even_dim(&self) -> usize {
        self.parities.iter().filter(|&&p| p == 0).count()
    }
    pub fn odd_dim(&self) -> usize {
        self.parities.iter().filter(|&&p| p == 1).count()
    }
    pub fn sdim(&self) -> i64 {
        self.even_dim() as i64 - self.odd_dim() as i64
    }
    pub fn trivial() -> Self {
        GradedSpace {
            parities: vec![0],
            weights: None,
        }
    }
}

/// Matrix with exact rational entries and a declared parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperMatrix {
    pub mat: SparseMat,
    pub parity: u8,
}

impl SuperMatrix {
    pub fn zero(nrows: usize, ncols: usize, parity: u8) -> Self {
        SuperMatrix {
            mat: SparseMat::zero(nrows, ncols),
            parity,
        }
    }

    /// Entries must vanish outside the blocks allowed by the parity.
    pub fn respects_grading(&self, target: &[u8], source: &[u8]) -> bool {
        self.mat
            .iter()
            .all(|(r, c, _)| (target[r] + source[c]) % 2 == self.parity % 2)
    }
}

/// XY - (-1)^{p(X)p(Y)} YX.
pub fn super_bracket(x: &SuperMatrix, y: &SuperMatrix) -> SuperMatrix {
    assert_eq!(x.mat.nrows, x.mat.ncols, "bracket needs square matrices");
    assert_eq!(x.mat.nrows, y.mat.nrows, "bracket needs a common space");
    let xy = x.mat.mul(&y.mat);
    let yx = y.mat.mul(&x.mat);
    let sign = if x.parity == 1 && y.parity == 1 {
        Q::one()
    } else {
        -Q::one()
    };
    SuperMatrix {
        mat: xy.add(&yx.scale(&sign)),
        parity: (x.parity + y.parity) % 2,
    }
}

/// supertrace of a product, str(XY).
pub fn supertrace_product(x: &SparseMat, y: &SparseMat, parities: &[u8]) -> Q {
    let mut acc = Q::zero();
    for (i, k, v) in x.iter() {
        let w = y.get(k, i);
        if w.is_zero() {
            continue;
        }
        let term = v * &w;
        if parities[i] == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PnKind {
    A,
    B,
    C,
}

/// Basis labels of p(n): `a[i,j]` spans gl(n) (grade 0), `b[i,j]` the symmetric
/// odd part (grade +1), `c[i,j]` the antisymmetric odd part (grade -1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PnLabel {
    pub kind: PnKind,
    pub i: usize,
    pub j: usize,
}

impl PnLabel {
    pub fn parity(&self) -> u8 {
        match self.kind {
            PnKind::A => 0,
            _ => 1,
        }
    }
    pub fn grade(&self) -> i8 {
        match self.kind {
            PnKind::A => 0,
            PnKind::B => 1,
            PnKind::C => -1,
        }
    }
    pub fn name(&self) -> String {
        let k = match self.kind {
            PnKind::A => "a",
            PnKind::B => "b",
            PnKind::C => "c",
        };
        format!("{}[{},{}]", k, self.i, self.j)
    }
    /// gl(n)-weight of the basis element.
    pub fn weight(&self, n: usize) -> Vec<i64> {
        let mut w = vec![0i64; n];
        match self.kind {
            PnKind::A => {
                w[self.i - 1] += 1;
                w[self.j - 1] -= 1;
            }
            PnKind::B => {
                w[self.i - 1] += 1;
                w[self.j - 1] += 1;
            }
            PnKind::C => {
                w[self.i - 1] -= 1;
                w[self.j - 1] -= 1;
            }
        }
        w
    }
}

/// The graded space V_n = C^{n|n}: indices 0..n are e_1..e_n (even),
/// n..2n are f_1..f_n (odd).
pub fn v_space(n: usize) -> GradedSpace {
    let parities = (0..2 * n).map(|i| u8::from(i >= n)).collect();
    let weights = (0..2 * n)
        .map(|i| {
            let mut w = vec![0i64; n];
            if i < n {
                w[i] = 1;
            } else {
                w[i - n] = -1;
            }
            w
        })
        .collect();
    GradedSpace {
        parities,
        weights: Some(weights),
    }
}

/// The 2n^2 labeled basis elements of p(n) as matrices on V_n.
pub fn pn_basis(n: usize) -> Vec<(PnLabel, SuperMatrix)> {
    let mut out = Vec::with_capacity(2 * n * n);
    let dim = 2 * n;
    // A-type: E_ij in the even block, -E_ji in the odd block
    for i in 1..=n {
        for j in 1..=n {
            let mut m = SparseMat::zero(dim, dim);
            m.set(i - 1, j - 1, Q::one());
            m.set(n + j - 1, n + i - 1, -Q::one());
            out.push((
                PnLabel {
                    kind: PnKind::A,
                    i,
                    j,
                },
                SuperMatrix { mat: m, parity: 0 },
            ));
        }
    }
    // B-type: symmetric upper-right block
    for i in 1..=n {
        for j in i..=n {
            let mut m = SparseMat::zero(dim, dim);
            m.set(i - 1, n + j - 1, Q::one());
            if i != j {
                m.set(j - 1, n + i - 1, Q::one());
            }
            out.push((
                PnLabel {
                    kind: PnKind::B,
                    i,
                    j,
                },
                SuperMatrix { mat: m, parity: 1 },
            ));
        }
    }
    // C-type: antisymmetric lower-left block
    for i in 1..=n {
        for j in i + 1..=n {
            let mut m = SparseMat::zero(dim, dim);
            m.set(n + i - 1, j - 1, Q::one());
            m.set(n + j - 1, i - 1, -Q::one());
            out.push((
                PnLabel {
                    kind: PnKind::C,
                    i,
                    j,
                },
                SuperMatrix { mat: m, parity: 1 },
            ));
        }
    }
    out
}

/// A graded complement of p(n) inside gl(n|n), stable under the adjoint
/// action: matrices (A B; C A^t) with B antisymmetric and C symmetric.
fn complement_basis(n: usize) -> Vec<SuperMatrix> {
    let mut out = Vec::with_capacity(2 * n * n);
    let dim = 2 * n;
    for i in 1..=n {
        for j in 1..=n {
            let mut m = SparseMat::zero(dim, dim);
            m.set(i - 1, j - 1, Q::one());
            m.set(n + j - 1, n + i - 1, Q::one());
            out.push(SuperMatrix { mat: m, parity: 0 });
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            let mut m = SparseMat::zero(dim, dim);
            m.set(i - 1, n + j - 1, Q::one());
            m.set(j - 1, n + i - 1, -Q::one());
            out.push(SuperMatrix { mat: m, parity: 1 });
        }
    }
    for i in 1..=n {
        for j in i..=n {
            let mut m = SparseMat::zero(dim, dim);
            m.set(n + i - 1, j - 1, Q::one());
            if i != j {
                m.set(n + j - 1, i - 1, Q::one());
            }
            out.push(SuperMatrix { mat: m, parity: 1 });
        }
    }
    out
}

/// Dual family {y^alpha} in the complement, normalized against pn_basis by
/// str(y^alpha x_beta) = 2 delta_{alpha,beta}. The scale 2 makes the tensor
/// Casimir spectrum land on the integers.
pub fn dual_basis(n: usize) -> Vec<SuperMatrix> {
    let pn = pn_basis(n);
    let comp = complement_basis(n);
    let parities = v_space(n).parities;
    let dim = pn.len();
    // gram[a][b] = str(comp_a * pn_b)
    let gram: Vec<Vec<Q>> = comp
        .iter()
        .map(|m| {
            pn.iter()
                .map(|(_, p)| supertrace_product(&m.mat, &p.mat, &parities))
                .collect()
        })
        .collect();
    // solve X * gram = 2I, i.e. for each alpha a row vector x with
    // sum_a x[a] gram[a][beta] = 2 delta_{alpha,beta}
    let mut dense: Vec<Vec<Q>> = (0..dim)
        .map(|b| (0..dim).map(|a| gram[a][b].clone()).collect())
        .collect();
    // augment with 2I and invert by Gauss-Jordan
    for (r, row) in dense.iter_mut().enumerate() {
        for c in 0..dim {
            row.push(if r == c { qz(2) } else { Q::zero() });
        }
    }
    gauss_jordan(&mut dense, dim);
    let mut out = Vec::with_capacity(dim);
    for alpha in 0..dim {
        let mut m = SparseMat::zero(2 * n, 2 * n);
        for (a, comp_m) in comp.iter().enumerate() {
            let coef = dense[a][dim + alpha].clone();
            if coef.is_zero() {
                continue;
            }
            m = m.add(&comp_m.mat.scale(&coef));
        }
        out.push(SuperMatrix {
            mat: m,
            parity: pn[alpha].1.parity,
        });
    }
    out
}

fn gauss_jordan(aug: &mut [Vec<Q>], dim: usize) {
    for col in 0..dim {
        let piv = (col..dim)
            .find(|&r| !aug[r][col].is_zero())
            .expect("pairing matrix must be invertible");
        aug.swap(col, piv);
        let lead = aug[col][col].clone();
        for v in aug[col].iter_mut() {
            *v /= lead.clone();
        }
        for r in 0..dim {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let f = aug[r][col].clone();
            let (head, tail) = aug.split_at_mut(r.max(col));
            let (src, dst) = if r > col {
                (&head[col], &mut tail[0])
            } else {
                (&tail[0], &mut head[r])
            };
            for c in 0..src.len() {
                if !src[c].is_zero() {
                    let t = &f * &src[c];
                    dst[c] -= t;
                }
            }
        }
    }
}

/// Expands a matrix in the labeled p(n) basis, or fails if it is not in
/// the span.
pub fn pn_coords(x: &SuperMatrix, n: usize) -> Result<Vec<(PnLabel, Q)>, SuperError> {
    let mut out = Vec::new();
    let mut residue = x.mat.clone();
    for (label, elem) in pn_basis(n) {
        // read off the coefficient from the defining entry of each element
        let coef = match label.kind {
            PnKind::A => residue.get(label.i - 1, label.j - 1),
            PnKind::B => residue.get(label.i - 1, n + label.j - 1),
            PnKind::C => residue.get(n + label.i - 1, label.j - 1),
        };
        if !coef.is_zero() {
            residue = residue.sub(&elem.mat.scale(&coef));
            out.push((label, coef));
        }
    }
    if residue.is_zero() {
        Ok(out)
    } else {
        Err(SuperError::NotInAlgebra)
    }
}

/// A representation: a graded space plus one action matrix per basis label.
#[derive(Clone, Debug)]
pub struct SuperRep {
    pub n: usize,
    pub space: GradedSpace,
    pub actions: BTreeMap<PnLabel, SuperMatrix>,
}

impl SuperRep {
    pub fn action(&self, label: &PnLabel) -> &SuperMatrix {
        &self.actions[label]
    }

    /// rho(\[X,Y\]) = rho(X)rho(Y) - (-1)^{p(X)p(Y)} rho(Y)rho(X) over all
    /// basis pairs.
    pub fn check_bracket_compatibility(&self) -> Result<(), String> {
        let basis = pn_basis(self.n);
        for (lx, x) in &basis {
            for (ly, y) in &basis {
                let bracket = super_bracket(x, y);
                let coords = pn_coords(&bracket, self.n)
                    .map_err(|_| format!("[{}, {}] left the algebra", lx.name(), ly.name()))?;
                let mut lhs = SparseMat::zero(self.space.dim(), self.space.dim());
                for (label, coef) in coords {
                    lhs = lhs.add(&self.actions[&label].mat.scale(&coef));
                }
                let rhs = super_bracket(self.action(lx), self.action(ly));
                if lhs != rhs.mat {
                    return Err(format!(
                        "bracket compatibility fails at [{}, {}]",
                        lx.name(),
                        ly.name()
                    ));
                }
            }
        }
        Ok(())
    }
}

/// The one-dimensional trivial representation.
pub fn trivial_rep(n: usize) -> SuperRep {
    let actions = pn_basis(n)
        .into_iter()
        .map(|(l, _)| (l, SuperMatrix::zero(1, 1, l.parity())))
        .collect();
    SuperRep {
        n,
        space: GradedSpace {
            parities: vec![0],
            weights: Some(vec![vec![0; n]]),
        },
        actions,
    }
}

// ---------------------------------------------------------------------------
// tensor powers

/// Digits of a tensor word index, most significant leg first.
pub fn word_digits(idx: usize, n: usize, k: usize) -> Vec<usize> {
    let base = 2 * n;
    let mut digits = vec![0usize; k];
    let mut rest = idx;
    for t in (0..k).rev() {
        digits[t] = rest % base;
        rest /= base;
    }
    digits
}

pub fn word_index(digits: &[usize], n: usize) -> usize {
    let base = 2 * n;
    digits.iter().fold(0, |acc, &d| acc * base + d)
}

pub fn tensor_space(n: usize, k: usize) -> GradedSpace {
    let v = v_space(n);
    let dim = (2 * n).pow(k as u32);
    let mut parities = Vec::with_capacity(dim);
    let mut weights = Vec::with_capacity(dim);
    for idx in 0..dim {
        let digits = word_digits(idx, n, k);
        let parity = digits.iter().map(|&d| v.parities[d] as usize).sum::<usize>() % 2;
        let mut w = vec![0i64; n];
        for &d in &digits {
            for (a, b) in w.iter_mut().zip(&v.weights.as_ref().unwrap()[d]) {
                *a += b;
            }
        }
        parities.push(parity as u8);
        weights.push(w);
    }
    GradedSpace {
        parities,
        weights: Some(weights),
    }
}

/// Applies an operator on V to one sparse vector in V^{otimes k} by the
/// super Leibniz rule: sign (-1)^{p(X) (p(v_1)+...+p(v_{t-1}))} on leg t.
pub fn leg_apply(
    x: &SuperMatrix,
    n: usize,
    k: usize,
    vec: &BTreeMap<usize, Q>,
) -> BTreeMap<usize, Q> {
    let v = v_space(n);
    // column-indexed view of x
    let mut cols: HashMap<usize, Vec<(usize, Q)>> = HashMap::new();
    for (r, c, val) in x.mat.iter() {
        cols.entry(c).or_default().push((r, val.clone()));
    }
    let mut out: BTreeMap<usize, Q> = BTreeMap::new();
    for (&idx, coef) in vec {
        let digits = word_digits(idx, n, k);
        let mut parity_prefix = 0u8;
        for t in 0..k {
            let d = digits[t];
            if let Some(hits) = cols.get(&d) {
                let sign = if x.parity == 1 && parity_prefix == 1 {
                    -Q::one()
                } else {
                    Q::one()
                };
                for (r, val) in hits {
                    let mut nd = digits.clone();
                    nd[t] = *r;
                    let nidx = word_index(&nd, n);
                    let entry = out.entry(nidx).or_insert_with(Q::zero);
                    *entry += coef * val * &sign;
                }
            }
            parity_prefix = (parity_prefix + v.parities[d]) % 2;
        }
    }
    out.retain(|_, q| !q.is_zero());
    out
}

/// The action of p(n) on V^{otimes k}.
pub fn tensor_power_rep(n: usize, k: usize) -> SuperRep {
    if k == 0 {
        return trivial_rep(n);
    }
    let space = tensor_space(n, k);
    let dim = space.dim();
    let mut actions = BTreeMap::new();
    for (label, x) in pn_basis(n) {
        let mut m = SparseMat::zero(dim, dim);
        for col in 0..dim {
            let mut unit = BTreeMap::new();
            unit.insert(col, Q::one());
            for (row, val) in leg_apply(&x, n, k, &unit) {
                m.set(row, col, val);
            }
        }
        actions.insert(
            label,
            SuperMatrix {
                mat: m,
                parity: label.parity(),
            },
        );
    }
    SuperRep { n, space, actions }
}

/// Dual representation: rho*(x) f = -(-1)^{p(x)p(f)} f o rho(x).
pub fn dual_rep(rep: &SuperRep) -> SuperRep {
    let dim = rep.space.dim();
    let mut actions = BTreeMap::new();
    for (label, m) in &rep.actions {
        let mut d = SparseMat::zero(dim, dim);
        for (r, c, v) in m.mat.iter() {
            // entry [c][r] of the dual from entry [r][c]
            let sign = if m.parity == 1 && rep.space.parities[c] == 1 {
                Q::one()
            } else {
                -Q::one()
            };
            d.set(c, r, v * &sign);
        }
        actions.insert(
            *label,
            SuperMatrix {
                mat: d,
                parity: m.parity,
            },
        );
    }
    let weights = rep
        .space
        .weights
        .as_ref()
        .map(|ws| ws.iter().map(|w| w.iter().map(|x| -x).collect()).collect());
    SuperRep {
        n: rep.n,
        space: GradedSpace {
            parities: rep.space.parities.clone(),
            weights,
        },
        actions,
    }
}

/// Exact basis of the joint kernel of all action matrices, split by parity
/// (even invariants, odd invariants), as vectors in the rep's coordinates.
pub fn invariant_space(rep: &SuperRep) -> (Vec<Vec<Q>>, Vec<Vec<Q>>) {
    let dim = rep.space.dim();
    let candidates: Vec<usize> = match &rep.space.weights {
        // invariants are killed by the Cartan, so they live in weight zero
        Some(ws) => (0..dim).filter(|&i| ws[i].iter().all(|&x| x == 0)).collect(),
        None => (0..dim).collect(),
    };
    let mut result: Vec<Vec<Vec<Q>>> = Vec::new();
    for parity in [0u8, 1u8] {
        let cols: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|&i| rep.space.parities[i] == parity)
            .collect();
        if cols.is_empty() {
            result.push(vec![]);
            continue;
        }
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for m in rep.actions.values() {
            // restrict columns; collect the nonzero rows of the restriction
            let mut by_row: BTreeMap<usize, Vec<Q>> = BTreeMap::new();
            for (ci, &c) in cols.iter().enumerate() {
                for (r, cc, v) in m.mat.iter() {
                    if cc == c {
                        by_row
                            .entry(r)
                            .or_insert_with(|| vec![Q::zero(); cols.len()])[ci] = v.clone();
                    }
                }
            }
            rows.extend(by_row.into_values());
        }
        let kernel = nullspace(&rows, cols.len());
        let embedded: Vec<Vec<Q>> = kernel
            .into_iter()
            .map(|k| {
                let mut full = vec![Q::zero(); dim];
                for (ci, &c) in cols.iter().enumerate() {
                    full[c] = k[ci].clone();
                }
                full
            })
            .collect();
        result.push(embedded);
    }
    let odd = result.pop().unwrap();
    let even = result.pop().unwrap();
    (even, odd)
}

/// dim sHom_{p(n)}(V^{otimes k}, 1): total invariant dimension of the dual
/// tensor power, both parities.
pub fn hom_dim(n: usize, k: usize) -> usize {
    let rep = tensor_power_rep(n, k);
    let dual = dual_rep(&rep);
    let (even, odd) = invariant_space(&dual);
    even.len() + odd.len()
}

// ---------------------------------------------------------------------------
// Duflo-Serganova

/// The odd square-zero element of rank 2: B = E_{n-1,n} + E_{n,n-1}.
pub fn make_ds_x(n: usize) -> Result<SuperMatrix, SuperError> {
    if n < 3 {
        return Err(SuperError::DsRankTooSmall(n));
    }
    let mut m = SparseMat::zero(2 * n, 2 * n);
    m.set(n - 2, 2 * n - 1, Q::one());
    m.set(n - 1, 2 * n - 2, Q::one());
    Ok(SuperMatrix { mat: m, parity: 1 })
}

/// M -> Ker x / Im x with the p(n-2) action through the upper-left block
/// embedding. Fails if the embedded subalgebra does not preserve Ker and Im.
pub fn ds_apply(x: &SuperMatrix, rep: &SuperRep) -> Result<SuperRep, SuperError> {
    let n = rep.n;
    if n < 3 {
        return Err(SuperError::DsRankTooSmall(n));
    }
    // rho(x)
    let coords = pn_coords(x, n)?;
    let dim = rep.space.dim();
    let mut xm = SparseMat::zero(dim, dim);
    for (label, coef) in &coords {
        xm = xm.add(&rep.actions[label].mat.scale(coef));
    }
    // square-zero sanity
    if !xm.mul(&xm).is_zero() {
        return Err(SuperError::DsEmbeddingBroken(
            "rho(x)^2 is nonzero".to_string(),
        ));
    }
    // kernel and image bases
    let dense_rows: Vec<Vec<Q>> = xm.to_dense();
    let kernel = nullspace(&dense_rows, dim);
    let mut image: Vec<Vec<Q>> = Vec::new();
    let mut img_span = Span::new(dim);
    for c in 0..dim {
        let col: Vec<Q> = (0..dim).map(|r| xm.get(r, c)).collect();
        if col.iter().any(|v| !v.is_zero()) && img_span.insert(&col) {
            image.push(col);
        }
    }
    // quotient representatives: kernel vectors independent modulo the image
    let mut mod_span = Span::new(dim);
    for v in &image {
        mod_span.insert(v);
    }
    let mut reps: Vec<Vec<Q>> = Vec::new();
    for v in &kernel {
        if mod_span.insert(v) {
            reps.push(v.clone());
        }
    }
    // full span of Ker for closure checks
    let mut ker_span = Span::new(dim);
    for v in &image {
        ker_span.insert(v);
    }
    for v in &reps {
        ker_span.insert(v);
    }
    // coordinates solver: express w in (image | reps), keep only rep coords
    let quotient_coords = |w: &Vec<Q>| -> Option<Vec<Q>> {
        mod_span.coords(w).map(|c| c[image.len()..].to_vec())
    };

    // parities and weights of the representatives
    let parities: Vec<u8> = reps
        .iter()
        .map(|v| {
            let mut par: Option<u8> = None;
            for (i, q) in v.iter().enumerate() {
                if !q.is_zero() {
                    let p = rep.space.parities[i];
                    match par {
                        None => par = Some(p),
                        Some(prev) => assert_eq!(prev, p, "non-homogeneous quotient vector"),
                    }
                }
            }
            par.unwrap_or(0)
        })
        .collect();
    let weights: Option<Vec<Vec<i64>>> = rep.space.weights.as_ref().map(|ws| {
        reps.iter()
            .map(|v| {
                let i = v.iter().position(|q| !q.is_zero()).unwrap();
                debug_assert!(
                    v.iter()
                        .enumerate()
                        .all(|(j, q)| q.is_zero() || ws[j] == ws[i]),
                    "quotient representatives must be weight-homogeneous"
                );
                // the p(n-2) weight keeps the first n-2 coordinates
                ws[i][..n - 2].to_vec()
            })
            .collect()
    });

    let mut actions = BTreeMap::new();
    for (label, big) in pn_basis(n - 2) {
        let embedded = PnLabel {
            kind: label.kind,
            i: label.i,
            j: label.j,
        };
        let ym = &rep.actions[&embedded].mat;
        // closure checks
        for v in &image {
            let w: Vec<Q> = mat_apply(ym, v);
            if !img_span.contains(&w) {
                return Err(SuperError::DsEmbeddingBroken(format!(
                    "{} does not preserve Im x",
                    label.name()
                )));
            }
        }
        let mut m = SparseMat::zero(reps.len(), reps.len());
        for (j, v) in reps.iter().enumerate() {
            let w: Vec<Q> = mat_apply(ym, v);
            if !ker_span.contains(&w) {
                return Err(SuperError::DsEmbeddingBroken(format!(
                    "{} does not preserve Ker x",
                    label.name()
                )));
            }
            let qc = quotient_coords(&w).ok_or_else(|| {
                SuperError::DsEmbeddingBroken(format!(
                    "action of {} left Ker + Im",
                    label.name()
                ))
            })?;
            for (i, val) in qc.into_iter().enumerate() {
                if !val.is_zero() {
                    m.set(i, j, val);
                }
            }
        }
        actions.insert(
            label,
            SuperMatrix {
                mat: m,
                parity: big.parity,
            },
        );
    }
    Ok(SuperRep {
        n: n - 2,
        space: GradedSpace { parities, weights },
        actions,
    })
}

fn mat_apply(m: &SparseMat, v: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); m.nrows];
    for (r, c, val) in m.iter() {
        if !v[c].is_zero() {
            let t = val * &v[c];
            out[r] += t;
        }
    }
    out
}

/// The adjoint representation of p(n) on itself.
pub fn adjoint_rep(n: usize) -> SuperRep {
    let basis = pn_basis(n);
    let dim = basis.len();
    let parities: Vec<u8> = basis.iter().map(|(l, _)| l.parity()).collect();
    let weights: Vec<Vec<i64>> = basis.iter().map(|(l, _)| l.weight(n)).collect();
    let order: Vec<PnLabel> = basis.iter().map(|(l, _)| *l).collect();
    let index: HashMap<PnLabel, usize> = order.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let mut actions = BTreeMap::new();
    for (lx, x) in &basis {
        let mut m = SparseMat::zero(dim, dim);
        for (ly, y) in &basis {
            let br = super_bracket(x, y);
            if br.mat.is_zero() {
                continue;
            }
            let coords = pn_coords(&br, n).expect("bracket closes in p(n)");
            let col = index[ly];
            for (lz, coef) in coords {
                m.set(index[&lz], col, coef);
            }
        }
        actions.insert(
            *lx,
            SuperMatrix {
                mat: m,
                parity: lx.parity(),
            },
        );
    }
    SuperRep {
        n,
        space: GradedSpace {
            parities,
            weights: Some(weights),
        },
        actions,
    }
}

// ---------------------------------------------------------------------------
// truncated standard objects

/// Koszul sign of permuting tensor legs with the given parities by pi
/// (pi[i] = target slot of leg i): -1 for every inverted odd-odd pair.
fn koszul_perm_sign(pi: &[usize], parities: &[u8]) -> i32 {
    let mut sign = 1;
    for i in 0..pi.len() {
        for j in i + 1..pi.len() {
            if pi[i] > pi[j] && parities[i] == 1 && parities[j] == 1 {
                sign = -sign;
            }
        }
    }
    sign
}

fn apply_perm_to_word(pi: &[usize], digits: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize; digits.len()];
    for (i, &d) in digits.iter().enumerate() {
        out[pi[i]] = d;
    }
    out
}

/// Super permutation action on V^{otimes k} as a sparse matrix.
pub fn super_perm_matrix(n: usize, k: usize, pi: &[usize]) -> SuperMatrix {
    let v = v_space(n);
    let dim = (2 * n).pow(k as u32);
    let mut m = SparseMat::zero(dim, dim);
    for idx in 0..dim {
        let digits = word_digits(idx, n, k);
        let pars: Vec<u8> = digits.iter().map(|&d| v.parities[d]).collect();
        let sign = koszul_perm_sign(pi, &pars);
        let target = word_index(&apply_perm_to_word(pi, &digits), n);
        m.set(target, idx, qz(sign as i64));
    }
    SuperMatrix { mat: m, parity: 0 }
}

fn permutations_of(groups: &[Vec<usize>], k: usize) -> Vec<Vec<usize>> {
    // all permutations of 0..k fixing everything outside `groups` and
    // permuting within each group
    let mut perms: Vec<Vec<usize>> = vec![(0..k).collect()];
    for group in groups {
        let mut next = Vec::new();
        let arrangements = heap_permutations(group.len());
        for base in &perms {
            for arr in &arrangements {
                let mut p = base.clone();
                for (slot, &take) in arr.iter().enumerate() {
                    p[group[slot]] = base[group[take]];
                }
                next.push(p);
            }
        }
        perms = next;
    }
    perms
}

fn heap_permutations(m: usize) -> Vec<Vec<usize>> {
    let mut items: Vec<usize> = (0..m).collect();
    let mut out = Vec::new();
    fn rec(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            rec(k - 1, items, out);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    rec(m, &mut items, &mut out);
    out
}

fn perm_sign(p: &[usize]) -> i64 {
    let mut sign = 1i64;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// The p(n)-subrepresentation of V^{otimes k} (k = |lambda|) generated by
/// the Young-symmetrized component of the odd tensor power: the seed is
/// c_lambda applied to V_1bar^{otimes k} with the super permutation action,
/// closed under the action of all basis elements.
pub fn build_truncated_standard(n: usize, lambda: &Weight) -> Result<SuperRep, SuperError> {
    if lambda.entries.iter().any(|&e| e > 0) {
        return Err(SuperError::NotAdmissible);
    }
    let k = weight_size(lambda) as usize;
    if k == 0 {
        return Ok(trivial_rep(n));
    }
    let young = young_from_weight(lambda).map_err(|_| SuperError::NotAdmissible)?;
    // canonical tableau: fill the rows consecutively
    let mut row_groups: Vec<Vec<usize>> = Vec::new();
    let mut col_groups: Vec<Vec<usize>> = vec![Vec::new(); young.row(0) as usize];
    let mut counter = 0usize;
    for &r in &young.rows {
        let mut row = Vec::new();
        for c in 0..r as usize {
            row.push(counter);
            col_groups[c].push(counter);
            counter += 1;
        }
        row_groups.push(row);
    }
    debug_assert_eq!(counter, k);
    let row_perms = permutations_of(&row_groups, k);
    let col_perms = permutations_of(&col_groups, k);

    let space = tensor_space(n, k);
    let dim = space.dim();
    let v = v_space(n);

    // per-(weight, parity) span with the global indices of its members
    type Groups = HashMap<(Vec<i64>, u8), (Span, Vec<usize>)>;
    // seeds: c_lambda(w) for every odd word w, with the super sign rule
    let mut grouped: Groups = HashMap::new();
    let mut basis_vectors: Vec<BTreeMap<usize, Q>> = Vec::new();
    let mut basis_keys: Vec<(Vec<i64>, u8)> = Vec::new();
    let mut queue: Vec<usize> = Vec::new();

    let try_insert =
        |vecmap: BTreeMap<usize, Q>,
         grouped: &mut Groups,
         basis_vectors: &mut Vec<BTreeMap<usize, Q>>,
         basis_keys: &mut Vec<(Vec<i64>, u8)>|
         -> Option<usize> {
            let first = *vecmap.keys().next()?;
            let key = (
                space.weights.as_ref().unwrap()[first].clone(),
                space.parities[first],
            );
            debug_assert!(
                vecmap.keys().all(|&i| {
                    space.parities[i] == key.1 && space.weights.as_ref().unwrap()[i] == key.0
                }),
                "vectors in the closure must be weight- and parity-homogeneous"
            );
            // dense local coordinates over the ambient indices of this block
            let block: Vec<usize> = (0..dim)
                .filter(|&i| {
                    space.parities[i] == key.1 && space.weights.as_ref().unwrap()[i] == key.0
                })
                .collect();
            let mut local = vec![Q::zero(); block.len()];
            for (i, &amb) in block.iter().enumerate() {
                if let Some(val) = vecmap.get(&amb) {
                    local[i] = val.clone();
                }
            }
            let entry = grouped
                .entry(key.clone())
                .or_insert_with(|| (Span::new(block.len()), Vec::new()));
            if entry.0.insert(&local) {
                let gidx = basis_vectors.len();
                entry.1.push(gidx);
                basis_vectors.push(vecmap);
                basis_keys.push(key);
                Some(gidx)
            } else {
                None
            }
        };

    // enumerate the odd words: digits n..2n in every slot
    let words: Vec<Vec<usize>> = (0..n.pow(k as u32))
        .map(|mut x| {
            let mut w = vec![0usize; k];
            for t in (0..k).rev() {
                w[t] = n + (x % n);
                x /= n;
            }
            w
        })
        .collect();

    for w in &words {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for p in &row_perms {
            for qperm in &col_perms {
                let sgn_q = perm_sign(qperm);
                // compose: first q, then p
                let pq: Vec<usize> = (0..k).map(|i| p[qperm[i]]).collect();
                let pars: Vec<u8> = w.iter().map(|&d| v.parities[d]).collect();
                let koszul = koszul_perm_sign(&pq, &pars);
                let target = word_index(&apply_perm_to_word(&pq, w), n);
                let entry = acc.entry(target).or_insert_with(Q::zero);
                *entry += qz(sgn_q * koszul as i64);
            }
        }
        acc.retain(|_, q| !q.is_zero());
        if acc.is_empty() {
            continue;
        }
        if let Some(gidx) = try_insert(acc, &mut grouped, &mut basis_vectors, &mut basis_keys) {
            queue.push(gidx);
        }
    }

    // close under the p(n)-action
    let basis = pn_basis(n);
    let mut head = 0usize;
    while head < queue.len() {
        let gidx = queue[head];
        head += 1;
        let current = basis_vectors[gidx].clone();
        for (_, x) in &basis {
            let image = leg_apply(x, n, k, &current);
            if image.is_empty() {
                continue;
            }
            if let Some(new_idx) =
                try_insert(image, &mut grouped, &mut basis_vectors, &mut basis_keys)
            {
                queue.push(new_idx);
            }
        }
    }

    // action matrices in the closed basis
    let module_dim = basis_vectors.len();
    let mut actions = BTreeMap::new();
    for (label, x) in &basis {
        let mut m = SparseMat::zero(module_dim, module_dim);
        for (j, bv) in basis_vectors.iter().enumerate() {
            let image = leg_apply(x, n, k, bv);
            if image.is_empty() {
                continue;
            }
            let first = *image.keys().next().unwrap();
            let key = (
                space.weights.as_ref().unwrap()[first].clone(),
                space.parities[first],
            );
            debug_assert!(
                image.keys().all(|&i| {
                    space.parities[i] == key.1 && space.weights.as_ref().unwrap()[i] == key.0
                }),
                "images of homogeneous vectors stay homogeneous"
            );
            let (span, members) = grouped
                .get(&key)
                .expect("closure must already contain every image block");
            let block: Vec<usize> = (0..dim)
                .filter(|&i| {
                    space.parities[i] == key.1 && space.weights.as_ref().unwrap()[i] == key.0
                })
                .collect();
            let mut local = vec![Q::zero(); block.len()];
            for (i, &amb) in block.iter().enumerate() {
                if let Some(val) = image.get(&amb) {
                    local[i] = val.clone();
                }
            }
            let coords = span
                .coords(&local)
                .expect("closure must already contain every image vector");
            for (loc, val) in coords.into_iter().enumerate() {
                if !val.is_zero() {
                    m.set(members[loc], j, val);
                }
            }
        }
        actions.insert(
            *label,
            SuperMatrix {
                mat: m,
                parity: label.parity(),
            },
        );
    }
    let parities: Vec<u8> = basis_keys.iter().map(|(_, p)| *p).collect();
    let weights: Vec<Vec<i64>> = basis_keys.iter().map(|(w, _)| w.clone()).collect();
    Ok(SuperRep {
        n,
        space: GradedSpace {
            parities,
            weights: Some(weights),
        },
        actions,
    })
}

// ---------------------------------------------------------------------------
// tensor Casimir

/// The graded space of V_n tensor M, index (v, m) -> v * dim(M) + m.
pub fn casimir_space(n: usize, rep: &SuperRep) -> GradedSpace {
    let v = v_space(n);
    let dm = rep.space.dim();
    let mut parities = Vec::with_capacity(2 * n * dm);
    let mut weights = rep.space.weights.as_ref().map(|_| Vec::with_capacity(2 * n * dm));
    for a in 0..2 * n {
        for m in 0..dm {
            parities.push((v.parities[a] + rep.space.parities[m]) % 2);
            if let (Some(ws), Some(mw)) = (&mut weights, &rep.space.weights) {
                let mut w = v.weights.as_ref().unwrap()[a].clone();
                // pad or trim the module weight to length n
                for (i, x) in mw[m].iter().enumerate() {
                    if i < w.len() {
                        w[i] += x;
                    }
                }
                ws.push(w);
            }
        }
    }
    GradedSpace { parities, weights }
}

/// The tensor Casimir Omega = sum_alpha y^alpha (x) x_alpha on V_n tensor M,
/// with y^alpha the str-dual family in the complement of p(n) in gl(n|n)
/// and the Koszul sign (-1)^{p(alpha) p(v)} when x_alpha passes the V leg.
pub fn casimir_matrix(n: usize, rep: &SuperRep) -> SuperMatrix {
    let v = v_space(n);
    let duals = dual_basis(n);
    let pn = pn_basis(n);
    let dm = rep.space.dim();
    let dim = 2 * n * dm;
    let mut omega = SparseMat::zero(dim, dim);
    for (alpha, (label, _)) in pn.iter().enumerate() {
        let yv = &duals[alpha].mat;
        let xm = &rep.actions[label].mat;
        if xm.is_zero() {
            continue;
        }
        let odd = label.parity() == 1;
        for (a, b, va) in yv.iter() {
            // coevaluation supersign (-1)^{p(alpha)} together with the
            // Koszul sign (-1)^{p(alpha) p(v)} for passing the V leg
            let flip = odd && v.parities[b] == 0;
            for (c, d, vd) in xm.iter() {
                let mut val = va * vd;
                if flip {
                    val = -val;
                }
                omega.add_to(a * dm + c, b * dm + d, &val);
            }
        }
    }
    SuperMatrix {
        mat: omega,
        parity: 0,
    }
}

/// Generalized eigenspace dimensions of the tensor Casimir on V_n tensor M,
/// keyed by integer eigenvalue. Non-integer spectrum is a hard failure.
pub fn theta_eigen_decomp(n: usize, rep: &SuperRep) -> Result<BTreeMap<i64, usize>, SuperError> {
    let fine = theta_eigen_decomp_by_weight(n, rep)?;
    Ok(fine
        .into_iter()
        .map(|(j, ws)| (j, ws.values().sum()))
        .collect())
}

/// As `theta_eigen_decomp`, but each eigenvalue's dimension is refined into
/// a gl(n)-weight multiset (the per-weight dimension vector of the
/// generalized eigenspace). The matrix decomposes over the connected
/// components of its sparsity graph (these refine the (weight, parity)
/// blocks, which the Casimir preserves); per component the integer roots of
/// the characteristic polynomial give the multiplicities, and kernels of
/// powers confirm them on small components.
pub fn theta_eigen_decomp_by_weight(
    n: usize,
    rep: &SuperRep,
) -> Result<BTreeMap<i64, BTreeMap<Vec<i64>, usize>>, SuperError> {
    let omega = casimir_matrix(n, rep);
    let space = casimir_space(n, rep);
    let dim = space.dim();
    let weight_of = |i: usize| -> Vec<i64> {
        match &space.weights {
            Some(ws) => ws[i].clone(),
            None => vec![],
        }
    };
    if let Some(ws) = &space.weights {
        debug_assert!(
            omega
                .mat
                .iter()
                .all(|(r, c, _)| ws[r] == ws[c] && space.parities[r] == space.parities[c]),
            "Casimir must preserve weight blocks"
        );
    }
    // connected components of the nonzero pattern
    let mut uf: Vec<usize> = (0..dim).collect();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    for (r, c, _) in omega.mat.iter() {
        let (a, b) = (find(&mut uf, r), find(&mut uf, c));
        if a != b {
            uf[a] = b;
        }
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..dim {
        let root = find(&mut uf, i);
        comps.entry(root).or_default().push(i);
    }
    let mut by_row: HashMap<usize, Vec<(usize, Q)>> = HashMap::new();
    for (r, c, v) in omega.mat.iter() {
        by_row.entry(r).or_default().push((c, v.clone()));
    }
    let mut result: BTreeMap<i64, BTreeMap<Vec<i64>, usize>> = BTreeMap::new();
    let mut total = 0usize;
    for idxs in comps.into_values() {
        let pos: HashMap<usize, usize> = idxs.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let d = idxs.len();
        // a component sits inside a single weight block
        let weight = weight_of(idxs[0]);
        let mut dense = vec![vec![Q::zero(); d]; d];
        for (&g, &l) in &pos {
            if let Some(row) = by_row.get(&g) {
                for (c, v) in row {
                    if let Some(&lc) = pos.get(c) {
                        dense[l][lc] = v.clone();
                    }
                }
            }
        }
        let p = char_poly(&dense);
        let (roots, nonsplit) = integer_roots(&p, gershgorin_bound(&dense));
        if nonsplit > 0 {
            return Err(SuperError::NonIntegerEigenvalue {
                degree: nonsplit,
                block: format!("component of index {}", idxs[0]),
            });
        }
        for (j, mult) in roots {
            if d <= 14 {
                // cross-check the algebraic multiplicity against kernels of
                // powers on small components
                let shifted: Vec<Vec<Q>> = (0..d)
                    .map(|r| {
                        (0..d)
                            .map(|c| {
                                dense[r][c].clone() - if r == c { qz(j) } else { Q::zero() }
                            })
                            .collect()
                    })
                    .collect();
                debug_assert_eq!(stable_kernel_dim(&shifted), mult);
            }
            *result
                .entry(j)
                .or_default()
                .entry(weight.clone())
                .or_insert(0) += mult;
            total += mult;
        }
    }
    assert_eq!(total, dim, "generalized eigenspaces must fill the space");
    Ok(result)
}

/// The gl(n)-weight multiset of a representation's underlying space.
pub fn weight_multiset(rep: &SuperRep) -> Option<BTreeMap<Vec<i64>, usize>> {
    rep.space.weights.as_ref().map(|ws| {
        let mut out: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
        for w in ws {
            *out.entry(w.clone()).or_insert(0) += 1;
        }
        out
    })
}

/// Graded Kronecker product: (A (x) B)(v (x) w) =
/// (-1)^{p(B) p(v)} Av (x) Bw, for v running over `a_src_parities`.
pub fn graded_kron(a: &SuperMatrix, a_src_parities: &[u8], b: &SuperMatrix) -> SuperMatrix {
    let mut m = SparseMat::zero(a.mat.nrows * b.mat.nrows, a.mat.ncols * b.mat.ncols);
    for (ra, ca, va) in a.mat.iter() {
        let flip = b.parity == 1 && a_src_parities[ca] == 1;
        for (rb, cb, vb) in b.mat.iter() {
            let mut val = va * vb;
            if flip {
                val = -val;
            }
            m.set(ra * b.mat.nrows + rb, ca * b.mat.ncols + cb, val);
        }
    }
    SuperMatrix {
        mat: m,
        parity: (a.parity + b.parity) % 2,
    }
}

/// The action of x on V (x) M: x (x) 1 + (Koszul) 1 (x) x.
pub fn tensor_action(
    n: usize,
    xv: &SuperMatrix,
    xm: &SuperMatrix,
    m_dim: usize,
) -> SuperMatrix {
    let v = v_space(n);
    let dm = m_dim;
    let dim = 2 * n * dm;
    let mut m = SparseMat::zero(dim, dim);
    for (a, b, val) in xv.mat.iter() {
        for c in 0..dm {
            m.add_to(a * dm + c, b * dm + c, val);
        }
    }
    for (c, d, val) in xm.mat.iter() {
        for a in 0..2 * n {
            let mut v2 = val.clone();
            if xv.parity == 1 && v.parities[a] == 1 {
                v2 = -v2;
            }
            m.add_to(a * dm + c, a * dm + d, &v2);
        }
    }
    SuperMatrix {
        mat: m,
        parity: xv.parity,
    }
}
