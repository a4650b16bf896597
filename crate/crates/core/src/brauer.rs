//! The signed diagram category generated by an object with an odd
//! symmetric form: basis diagrams are signed perfect matchings of r bottom
//! and s top points, composition kills closed loops (the loop value is
//! zero), and `realize` sends a diagram to its matrix on tensor powers of
//! V_n, which is the single source of truth for every sign convention.

use crate::linalg::{SparseMat, Q};
use crate::superalg::{graded_kron, super_perm_matrix, v_space, SuperMatrix};
use num::One;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BrauerError {
    #[error("shape mismatch: cannot compose ({gr},{gs}) after ({fr},{fs}), middle counts {fs} != {gr}")]
    ShapeMismatch {
        fr: usize,
        fs: usize,
        gr: usize,
        gs: usize,
    },
}

/// An endpoint of a diagram: bottom row position or top row position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pt {
    Bot(usize),
    Top(usize),
}

/// A perfect matching of r bottom and s top points. Pairs are sorted; each
/// pair is classified as a cap (bottom-bottom), cup (top-top) or through
/// strand.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BrauerMatching {
    pub r: usize,
    pub s: usize,
    pub pairs: Vec<(Pt, Pt)>,
}

impl BrauerMatching {
    pub fn new(r: usize, s: usize, mut pairs: Vec<(Pt, Pt)>) -> Self {
        for p in pairs.iter_mut() {
            if p.0 > p.1 {
                *p = (p.1, p.0);
            }
        }
        pairs.sort();
        let m = BrauerMatching { r, s, pairs };
        debug_assert!(m.is_perfect());
        m
    }

    fn is_perfect(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        for &(a, b) in &self.pairs {
            for p in [a, b] {
                let ok = match p {
                    Pt::Bot(i) => i < self.r,
                    Pt::Top(i) => i < self.s,
                };
                if !ok || !seen.insert(p) {
                    return false;
                }
            }
        }
        seen.len() == self.r + self.s
    }

    pub fn identity(k: usize) -> Self {
        BrauerMatching::new(k, k, (0..k).map(|i| (Pt::Bot(i), Pt::Top(i))).collect())
    }

    pub fn caps(&self) -> Vec<(usize, usize)> {
        self.pairs
            .iter()
            .filter_map(|&(a, b)| match (a, b) {
                (Pt::Bot(x), Pt::Bot(y)) => Some((x.min(y), x.max(y))),
                _ => None,
            })
            .collect()
    }

    pub fn cups(&self) -> Vec<(usize, usize)> {
        self.pairs
            .iter()
            .filter_map(|&(a, b)| match (a, b) {
                (Pt::Top(x), Pt::Top(y)) => Some((x.min(y), x.max(y))),
                _ => None,
            })
            .collect()
    }

    pub fn throughs(&self) -> Vec<(usize, usize)> {
        let mut t: Vec<(usize, usize)> = self
            .pairs
            .iter()
            .filter_map(|&(a, b)| match (a, b) {
                (Pt::Bot(x), Pt::Top(y)) => Some((x, y)),
                (Pt::Top(y), Pt::Bot(x)) => Some((x, y)),
                _ => None,
            })
            .collect();
        t.sort();
        t
    }

    /// parity = (#caps + #cups) mod 2
    pub fn parity(&self) -> u8 {
        ((self.caps().len() + self.cups().len()) % 2) as u8
    }

    fn partner(&self, p: Pt) -> Pt {
        for &(a, b) in &self.pairs {
            if a == p {
                return b;
            }
            if b == p {
                return a;
            }
        }
        unreachable!("perfect matching")
    }
}

/// A basis morphism: a matching with a sign. The canonical diagram carries
/// coefficient +1; the sign is relative to the normal ordering fixed by
/// `realize` (caps and cups ordered by left endpoint).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedDiagram {
    pub matching: BrauerMatching,
    pub coeff: i64,
}

impl MarkedDiagram {
    pub fn new(matching: BrauerMatching) -> Self {
        MarkedDiagram {
            matching,
            coeff: 1,
        }
    }
    pub fn parity(&self) -> u8 {
        self.matching.parity()
    }
}

/// An integer combination of matchings with common (r, s, parity). The zero
/// combination is allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerHom {
    pub r: usize,
    pub s: usize,
    pub parity: u8,
    pub terms: BTreeMap<BrauerMatching, i64>,
}

impl BrauerHom {
    pub fn zero(r: usize, s: usize, parity: u8) -> Self {
        BrauerHom {
            r,
            s,
            parity,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_diagram(d: &MarkedDiagram) -> Self {
        let mut terms = BTreeMap::new();
        if d.coeff != 0 {
            terms.insert(d.matching.clone(), d.coeff);
        }
        BrauerHom {
            r: d.matching.r,
            s: d.matching.s,
            parity: d.matching.parity(),
            terms,
        }
    }

    pub fn identity(k: usize) -> Self {
        BrauerHom::from_diagram(&MarkedDiagram::new(BrauerMatching::identity(k)))
    }

    fn add_term(&mut self, m: BrauerMatching, c: i64) {
        if c == 0 {
            return;
        }
        debug_assert_eq!(m.parity(), self.parity);
        let entry = self.terms.entry(m).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// All (r+s-1)!! perfect matchings of r bottom and s top points, each as a
/// canonical diagram with coefficient +1; empty when r+s is odd.
pub fn brauer_basis(r: usize, s: usize) -> Vec<MarkedDiagram> {
    if (r + s) % 2 != 0 {
        return vec![];
    }
    let points: Vec<Pt> = (0..r)
        .map(Pt::Bot)
        .chain((0..s).map(Pt::Top))
        .collect();
    let mut out = Vec::new();
    let mut pairs = Vec::new();
    fn rec(
        rest: &[Pt],
        pairs: &mut Vec<(Pt, Pt)>,
        r: usize,
        s: usize,
        out: &mut Vec<MarkedDiagram>,
    ) {
        if rest.is_empty() {
            out.push(MarkedDiagram::new(BrauerMatching::new(
                r,
                s,
                pairs.clone(),
            )));
            return;
        }
        let first = rest[0];
        for i in 1..rest.len() {
            let mut remaining: Vec<Pt> = Vec::with_capacity(rest.len() - 2);
            remaining.extend_from_slice(&rest[1..i]);
            remaining.extend_from_slice(&rest[i + 1..]);
            pairs.push((first, rest[i]));
            rec(&remaining, pairs, r, s, out);
            pairs.pop();
        }
    }
    rec(&points, &mut pairs, r, s, &mut out);
    out.sort_by(|a, b| a.matching.cmp(&b.matching));
    out
}

// ---------------------------------------------------------------------------
// realization

/// beta as a map V (x) V -> C: nonzero exactly on opposite-parity pairs.
fn beta_matrix(n: usize) -> SuperMatrix {
    let dim = 2 * n;
    let mut m = SparseMat::zero(1, dim * dim);
    for i in 0..n {
        m.set(0, i * dim + (n + i), Q::one());
        m.set(0, (n + i) * dim + i, Q::one());
    }
    SuperMatrix { mat: m, parity: 1 }
}

/// The invariant element of V (x) V (the inverse form as a coevaluation):
/// sum_i e_i (x) f_i - f_i (x) e_i.
fn gamma_matrix(n: usize) -> SuperMatrix {
    let dim = 2 * n;
    let mut m = SparseMat::zero(dim * dim, 1);
    for i in 0..n {
        m.set(i * dim + (n + i), 0, Q::one());
        m.set((n + i) * dim + i, 0, -Q::one());
    }
    SuperMatrix { mat: m, parity: 1 }
}

fn pow_dim(n: usize, k: usize) -> usize {
    (2 * n).pow(k as u32)
}

/// Canonical matrix of a single matching on V_n tensor powers. Caps and
/// cups are processed by left endpoint; the +1 diagram is by definition the
/// diagram realized by this factorization.
fn realize_matching(m: &BrauerMatching, n: usize) -> SuperMatrix {
    let caps = m.caps();
    let cups = m.cups();
    let throughs = m.throughs();
    let r = m.r;
    let s = m.s;
    let t = throughs.len();
    let vpar = v_space(n).parities;

    // bottom permutation: cap legs first (in cap order), then through
    // bottoms in increasing order
    let mut perm_bot = vec![0usize; r];
    {
        let mut slot = 0usize;
        for &(a, b) in &caps {
            perm_bot[a] = slot;
            perm_bot[b] = slot + 1;
            slot += 2;
        }
        for &(b, _) in &throughs {
            perm_bot[b] = slot;
            slot += 1;
        }
        debug_assert_eq!(slot, r);
    }
    let sigma_bot = super_perm_matrix(n, r, &perm_bot);

    // cap layer: beta on the first 2#caps legs, identity on the rest
    let mut cap_layer = SuperMatrix {
        mat: SparseMat::identity(1),
        parity: 0,
    };
    // parities of the accumulated source basis (starts at the empty word)
    let mut src_parities: Vec<u8> = vec![0];
    let pair_par: Vec<u8> = (0..2 * n * 2 * n)
        .map(|idx| (vpar[idx / (2 * n)] + vpar[idx % (2 * n)]) % 2)
        .collect();
    for _ in 0..caps.len() {
        cap_layer = graded_kron(&cap_layer, &src_parities, &beta_matrix(n));
        let mut np = Vec::with_capacity(src_parities.len() * pair_par.len());
        for &a in &src_parities {
            for &b in &pair_par {
                np.push((a + b) % 2);
            }
        }
        src_parities = np;
    }
    // extend by identity on the through legs
    if t > 0 {
        let id = SuperMatrix {
            mat: SparseMat::identity(pow_dim(n, t)),
            parity: 0,
        };
        cap_layer = graded_kron(&cap_layer, &src_parities, &id);
    }

    // cup layer: gamma for each cup, then identity on through legs; every
    // gamma source is the even one-dimensional space
    let mut cup_layer = SuperMatrix {
        mat: SparseMat::identity(1),
        parity: 0,
    };
    let cup_src: Vec<u8> = vec![0];
    for _ in 0..cups.len() {
        cup_layer = graded_kron(&cup_layer, &cup_src, &gamma_matrix(n));
    }
    if t > 0 {
        let id = SuperMatrix {
            mat: SparseMat::identity(pow_dim(n, t)),
            parity: 0,
        };
        cup_layer = graded_kron(&cup_layer, &cup_src, &id);
    }

    // top permutation: from [cup legs..., through legs...] to top positions
    let mut perm_top = vec![0usize; s];
    {
        let mut slot = 0usize;
        for &(a, b) in &cups {
            perm_top[slot] = a;
            perm_top[slot + 1] = b;
            slot += 2;
        }
        for &(_, tt) in &throughs {
            perm_top[slot] = tt;
            slot += 1;
        }
        debug_assert_eq!(slot, s);
    }
    let sigma_top = super_perm_matrix(n, s, &perm_top);

    let mut acc = sigma_bot;
    acc = SuperMatrix {
        mat: cap_layer.mat.mul(&acc.mat),
        parity: (cap_layer.parity + acc.parity) % 2,
    };
    acc = SuperMatrix {
        mat: cup_layer.mat.mul(&acc.mat),
        parity: (cup_layer.parity + acc.parity) % 2,
    };
    SuperMatrix {
        mat: sigma_top.mat.mul(&acc.mat),
        parity: (sigma_top.parity + acc.parity) % 2,
    }
}

/// Matrix of a hom on V_n^{otimes r} -> V_n^{otimes s}.
pub fn realize(hom: &BrauerHom, n: usize) -> SuperMatrix {
    let mut acc = SparseMat::zero(pow_dim(n, hom.s), pow_dim(n, hom.r));
    for (m, &c) in &hom.terms {
        let rm = realize_matching(m, n);
        acc = acc.add(&rm.mat.scale(&Q::from_integer(c.into())));
    }
    SuperMatrix {
        mat: acc,
        parity: hom.parity,
    }
}

// ---------------------------------------------------------------------------
// composition and tensor product

/// Stacks g on top of f combinatorially; returns the composite matching and
/// the number of closed loops.
fn stack(g: &BrauerMatching, f: &BrauerMatching) -> (BrauerMatching, usize) {
    debug_assert_eq!(f.s, g.r);
    #[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
    enum Node {
        Bot(usize),
        Mid(usize),
        Top(usize),
    }
    let f_node = |p: Pt| match p {
        Pt::Bot(i) => Node::Bot(i),
        Pt::Top(i) => Node::Mid(i),
    };
    let g_node = |p: Pt| match p {
        Pt::Bot(i) => Node::Mid(i),
        Pt::Top(i) => Node::Top(i),
    };
    // trace strands
    let mut pairs = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let mut visited_mid = std::collections::BTreeSet::new();
    let boundary: Vec<Pt> = (0..f.r)
        .map(Pt::Bot)
        .chain((0..g.s).map(Pt::Top))
        .collect();
    for &start in &boundary {
        if seen.contains(&start) {
            continue;
        }
        let (mut node, mut in_f) = match start {
            Pt::Bot(i) => (Node::Bot(i), true),
            Pt::Top(i) => (Node::Top(i), false),
        };
        loop {
            let next = if in_f {
                let pt = match node {
                    Node::Bot(i) => Pt::Bot(i),
                    Node::Mid(i) => Pt::Top(i),
                    Node::Top(_) => unreachable!(),
                };
                f_node(f.partner(pt))
            } else {
                let pt = match node {
                    Node::Mid(i) => Pt::Bot(i),
                    Node::Top(i) => Pt::Top(i),
                    Node::Bot(_) => unreachable!(),
                };
                g_node(g.partner(pt))
            };
            match next {
                Node::Mid(i) => {
                    visited_mid.insert(i);
                    node = next;
                    in_f = !in_f;
                }
                Node::Bot(i) => {
                    seen.insert(start);
                    seen.insert(Pt::Bot(i));
                    pairs.push((start, Pt::Bot(i)));
                    break;
                }
                Node::Top(i) => {
                    seen.insert(start);
                    seen.insert(Pt::Top(i));
                    pairs.push((start, Pt::Top(i)));
                    break;
                }
            }
        }
    }
    let loops = f.s - visited_mid.len();
    (BrauerMatching::new(f.r, g.s, pairs), loops)
}

/// Sign of the composite relative to the canonical realization, computed on
/// the faithful n = 1 model: realize(g) realize(f) = sign * realize(g o f).
fn compose_sign(g: &BrauerMatching, f: &BrauerMatching, composite: &BrauerMatching) -> i64 {
    let rf = realize_matching(f, 1);
    let rg = realize_matching(g, 1);
    let prod = rg.mat.mul(&rf.mat);
    let rc = realize_matching(composite, 1);
    scalar_ratio(&prod, &rc.mat).expect("composite realization must be proportional")
}

fn scalar_ratio(num: &SparseMat, den: &SparseMat) -> Option<i64> {
    // den is nonzero; find its first entry and compare
    let (r, c, v) = den.iter().next()?;
    let ratio = num.get(r, c) / v;
    // verify exact proportionality
    if num != &den.scale(&ratio) {
        return None;
    }
    let int = ratio.to_integer();
    if Q::from_integer(int.clone()) != ratio {
        return None;
    }
    i64::try_from(&int).ok()
}

/// Bilinear composition g after f; closed loops kill a term (loop value 0).
pub fn brauer_compose(g: &BrauerHom, f: &BrauerHom) -> Result<BrauerHom, BrauerError> {
    if f.s != g.r {
        return Err(BrauerError::ShapeMismatch {
            fr: f.r,
            fs: f.s,
            gr: g.r,
            gs: g.s,
        });
    }
    let mut out = BrauerHom::zero(f.r, g.s, (f.parity + g.parity) % 2);
    for (mf, &cf) in &f.terms {
        for (mg, &cg) in &g.terms {
            let (composite, loops) = stack(mg, mf);
            if loops > 0 {
                continue;
            }
            let sign = compose_sign(mg, mf, &composite);
            out.add_term(composite, sign * cf * cg);
        }
    }
    Ok(out)
}

/// Horizontal juxtaposition: f placed left of g.
pub fn brauer_tensor(f: &BrauerHom, g: &BrauerHom) -> BrauerHom {
    let mut out = BrauerHom::zero(f.r + g.r, f.s + g.s, (f.parity + g.parity) % 2);
    for (mf, &cf) in &f.terms {
        for (mg, &cg) in &g.terms {
            let shifted: Vec<(Pt, Pt)> = mg
                .pairs
                .iter()
                .map(|&(a, b)| {
                    let sh = |p: Pt| match p {
                        Pt::Bot(i) => Pt::Bot(i + mf.r),
                        Pt::Top(i) => Pt::Top(i + mf.s),
                    };
                    (sh(a), sh(b))
                })
                .collect();
            let mut pairs = mf.pairs.clone();
            pairs.extend(shifted);
            let juxt = BrauerMatching::new(mf.r + mg.r, mf.s + mg.s, pairs);
            let sign = tensor_sign(mf, mg, &juxt);
            out.add_term(juxt, sign * cf * cg);
        }
    }
    out
}

fn tensor_sign(f: &BrauerMatching, g: &BrauerMatching, juxt: &BrauerMatching) -> i64 {
    let rf = realize_matching(f, 1);
    let rg = realize_matching(g, 1);
    let src_par: Vec<u8> = {
        let vpar = v_space(1).parities;
        (0..pow_dim(1, f.r))
            .map(|idx| {
                let mut p = 0u8;
                let mut rest = idx;
                for _ in 0..f.r {
                    p = (p + vpar[rest % 2]) % 2;
                    rest /= 2;
                }
                p
            })
            .collect()
    };
    let kron = graded_kron(&rf, &src_par, &rg);
    let rj = realize_matching(juxt, 1);
    scalar_ratio(&kron.mat, &rj.mat).expect("juxtaposition realization must be proportional")
}

// ---------------------------------------------------------------------------
// JSON encoding

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MarkedDiagramJson {
    pub r: usize,
    pub s: usize,
    pub pairs: Vec<[(String, usize); 2]>,
    pub coeff: i64,
    pub parity: u8,
}

impl From<&MarkedDiagram> for MarkedDiagramJson {
    fn from(d: &MarkedDiagram) -> Self {
        let enc = |p: &Pt| match p {
            Pt::Bot(i) => ("b".to_string(), *i),
            Pt::Top(i) => ("t".to_string(), *i),
        };
        MarkedDiagramJson {
            r: d.matching.r,
            s: d.matching.s,
            pairs: d.matching.pairs.iter().map(|(a, b)| [enc(a), enc(b)]).collect(),
            coeff: d.coeff,
            parity: d.parity(),
        }
    }
}

impl MarkedDiagramJson {
    pub fn decode(&self) -> Result<MarkedDiagram, String> {
        let dec = |(row, i): &(String, usize)| -> Result<Pt, String> {
            match row.as_str() {
                "b" => Ok(Pt::Bot(*i)),
                "t" => Ok(Pt::Top(*i)),
                other => Err(format!("unknown row tag {other:?}")),
            }
        };
        let pairs = self
            .pairs
            .iter()
            .map(|[a, b]| Ok((dec(a)?, dec(b)?)))
            .collect::<Result<Vec<_>, String>>()?;
        let matching = BrauerMatching {
            r: self.r,
            s: self.s,
            pairs,
        };
        if !matching.is_perfect() {
            return Err("pairs are not a perfect matching of the declared points".into());
        }
        let canonical = BrauerMatching::new(self.r, self.s, matching.pairs.clone());
        Ok(MarkedDiagram {
            matching: canonical,
            coeff: self.coeff,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BrauerHomJson {
    pub r: usize,
    pub s: usize,
    pub parity: u8,
    pub terms: Vec<MarkedDiagramJson>,
}

impl From<&BrauerHom> for BrauerHomJson {
    fn from(h: &BrauerHom) -> Self {
        BrauerHomJson {
            r: h.r,
            s: h.s,
            parity: h.parity,
            terms: h
                .terms
                .iter()
                .map(|(m, &c)| {
                    MarkedDiagramJson::from(&MarkedDiagram {
                        matching: m.clone(),
                        coeff: c,
                    })
                })
                .collect(),
        }
    }
}

impl BrauerHomJson {
    pub fn decode(&self) -> Result<BrauerHom, String> {
        let mut hom = BrauerHom::zero(self.r, self.s, self.parity);
        for t in &self.terms {
            let d = t.decode()?;
            if d.matching.r != self.r || d.matching.s != self.s {
                return Err("term shape differs from hom shape".into());
            }
            if d.matching.parity() != self.parity {
                return Err("term parity differs from hom parity".into());
            }
            hom.add_term(d.matching, d.coeff);
        }
        Ok(hom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalg::{pn_basis, tensor_power_rep, tensor_action};

    fn single(m: BrauerMatching) -> BrauerHom {
        BrauerHom::from_diagram(&MarkedDiagram::new(m))
    }

    fn cap() -> BrauerHom {
        single(BrauerMatching::new(
            2,
            0,
            vec![(Pt::Bot(0), Pt::Bot(1))],
        ))
    }

    fn cup() -> BrauerHom {
        single(BrauerMatching::new(
            0,
            2,
            vec![(Pt::Top(0), Pt::Top(1))],
        ))
    }

    #[test]
    fn basis_counts_and_parities() {
        let b20 = brauer_basis(2, 0);
        assert_eq!(b20.len(), 1);
        assert_eq!(b20[0].parity(), 1);
        let b11 = brauer_basis(1, 1);
        assert_eq!(b11.len(), 1);
        assert_eq!(b11[0].parity(), 0);
        assert_eq!(brauer_basis(2, 2).len(), 3);
        assert_eq!(brauer_basis(2, 1).len(), 0);
        assert_eq!(brauer_basis(4, 0).len(), 3);
        assert_eq!(brauer_basis(3, 3).len(), 15);
    }

    #[test]
    fn loop_composition_is_zero() {
        let loop_hom = brauer_compose(&cap(), &cup()).unwrap();
        assert!(loop_hom.is_zero());
    }

    #[test]
    fn zigzag_is_plus_minus_identity() {
        // (id (x) cap) o (cup (x) id): V -> V
        let id1 = BrauerHom::identity(1);
        let id_cap = brauer_tensor(&id1, &cap());
        let cup_id = brauer_tensor(&cup(), &id1);
        let zig = brauer_compose(&id_cap, &cup_id).unwrap();
        assert_eq!(zig.terms.len(), 1);
        let (m, c) = zig.terms.iter().next().unwrap();
        assert_eq!(*m, BrauerMatching::identity(1));
        assert!(*c == 1 || *c == -1);
        // and the other zigzag
        let cap_id = brauer_tensor(&cap(), &id1);
        let id_cup = brauer_tensor(&id1, &cup());
        let zag = brauer_compose(&cap_id, &id_cup).unwrap();
        assert_eq!(zag.terms.len(), 1);
    }

    #[test]
    fn cap_after_crossing_is_plus_cap() {
        let crossing = single(BrauerMatching::new(
            2,
            2,
            vec![(Pt::Bot(0), Pt::Top(1)), (Pt::Bot(1), Pt::Top(0))],
        ));
        let composed = brauer_compose(&cap(), &crossing).unwrap();
        assert_eq!(composed, cap());
    }

    #[test]
    fn shape_mismatch_rejected() {
        assert!(brauer_compose(&cap(), &cap()).is_err());
    }

    #[test]
    fn tensor_of_identities() {
        let id1 = BrauerHom::identity(1);
        let id2 = BrauerHom::identity(2);
        assert_eq!(brauer_tensor(&id1, &id1), id2);
        // cap (x) cap has parity 0 and shape 4 -> 0
        let cc = brauer_tensor(&cap(), &cap());
        assert_eq!((cc.r, cc.s, cc.parity), (4, 0, 0));
    }

    #[test]
    fn realize_identity_and_cap() {
        let id1 = BrauerHom::identity(1);
        let m = realize(&id1, 2);
        assert_eq!(m.mat, SparseMat::identity(4));
        let c = realize(&cap(), 2);
        assert_eq!((c.mat.nrows, c.mat.ncols), (1, 16));
        assert_eq!(c.parity, 1);
        // nonzero exactly on opposite-parity pairs
        let vpar = v_space(2).parities;
        for (_, col, _) in c.mat.iter() {
            let (a, b) = (col / 4, col % 4);
            assert_ne!(vpar[a], vpar[b]);
        }
    }

    #[test]
    fn realize_is_functorial_on_samples() {
        // composable pairs across shapes with r, s, t <= 4, checked at both
        // n = 2 and n = 3: realize(g o f) = realize(g) realize(f)
        for n in [2usize, 3] {
            let shapes: &[(usize, usize, usize)] = if n == 2 {
                &[(2, 2, 2), (1, 3, 1), (2, 0, 0), (0, 2, 2), (3, 1, 1), (4, 2, 0)]
            } else {
                &[(2, 2, 2), (2, 0, 0), (1, 1, 3)]
            };
            for &(r, s, t) in shapes {
                for f in brauer_basis(r, s) {
                    for g in brauer_basis(s, t) {
                        let hf = BrauerHom::from_diagram(&f);
                        let hg = BrauerHom::from_diagram(&g);
                        let comp = brauer_compose(&hg, &hf).unwrap();
                        let lhs = realize(&comp, n);
                        let rhs = realize(&hg, n).mat.mul(&realize(&hf, n).mat);
                        assert_eq!(lhs.mat, rhs, "functoriality at ({r},{s},{t}) n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn realize_respects_tensor() {
        let n = 2;
        for (f, g) in [
            (cap(), cap()),
            (cap(), BrauerHom::identity(1)),
            (BrauerHom::identity(1), cup()),
        ] {
            let juxt = brauer_tensor(&f, &g);
            let lhs = realize(&juxt, n);
            let rf = realize(&f, n);
            let rg = realize(&g, n);
            let src_par = crate::superalg::tensor_space(n, f.r).parities;
            let rhs = graded_kron(&rf, &src_par, &rg);
            assert_eq!(lhs.mat, rhs.mat);
        }
    }

    #[test]
    fn realized_diagrams_are_equivariant() {
        // every realized basis diagram super-commutes with the p(n) action
        let n = 2;
        for (r, s) in [(2, 0), (0, 2), (1, 1), (2, 2)] {
            let rep_r = tensor_power_rep(n, r);
            let rep_s = tensor_power_rep(n, s);
            for d in brauer_basis(r, s) {
                let hom = BrauerHom::from_diagram(&d);
                let f = realize(&hom, n);
                for (label, _) in pn_basis(n) {
                    let xr = &rep_r.actions[&label];
                    let xs = &rep_s.actions[&label];
                    let lhs = f.mat.mul(&xr.mat);
                    let mut rhs = xs.mat.mul(&f.mat);
                    if f.parity == 1 && label.parity() == 1 {
                        rhs = rhs.scale(&-Q::one());
                    }
                    assert_eq!(
                        lhs,
                        rhs,
                        "equivariance fails for ({r},{s}) diagram {:?} at {}",
                        d.matching,
                        label.name()
                    );
                }
            }
        }
    }

    #[test]
    fn gamma_is_invariant() {
        // the coevaluation vector is killed by every basis element
        for n in 1..=3 {
            let rep = tensor_power_rep(n, 2);
            let g = gamma_matrix(n);
            for (label, _) in pn_basis(n) {
                let image = rep.actions[&label].mat.mul(&g.mat);
                assert!(image.is_zero(), "gamma not invariant under {}", label.name());
            }
        }
    }

    #[test]
    fn interchange_holds_via_realize() {
        // (f (x) id) o (id (x) g) against the matrix side at n = 2
        let n = 2;
        let f = cap();
        let g = cup();
        let lhs_hom = brauer_compose(
            &brauer_tensor(&f, &BrauerHom::identity(2)),
            &brauer_tensor(&BrauerHom::identity(2), &g),
        )
        .unwrap();
        let lhs = realize(&lhs_hom, n);
        let rf = realize(&f, n);
        let rg = realize(&g, n);
        let src2 = crate::superalg::tensor_space(n, 2).parities;
        let a = graded_kron(&rf, &src2, &{
            SuperMatrix {
                mat: SparseMat::identity(16),
                parity: 0,
            }
        });
        let b = graded_kron(
            &SuperMatrix {
                mat: SparseMat::identity(16),
                parity: 0,
            },
            &src2,
            &rg,
        );
        assert_eq!(lhs.mat, a.mat.mul(&b.mat));
    }

    #[test]
    fn realized_matchings_independent_in_stable_range() {
        // for n >= k the (k-1)!! closed matchings realize to independent
        // functionals
        for k in [2usize, 4] {
            let n = k;
            let rows: Vec<Vec<Q>> = brauer_basis(k, 0)
                .iter()
                .map(|d| {
                    let m = realize(&BrauerHom::from_diagram(d), n);
                    (0..m.mat.ncols).map(|c| m.mat.get(0, c)).collect()
                })
                .collect();
            assert_eq!(crate::linalg::rank(&rows), rows.len());
        }
    }

    #[test]
    fn equivariance_at_rank_three() {
        // every basis diagram with r+s <= 4 super-commutes with the p(3)
        // action on both sides
        let n = 3;
        for (r, s) in [(2, 0), (0, 2), (1, 1), (2, 2), (3, 1), (1, 3), (4, 0), (0, 4)] {
            let rep_r = tensor_power_rep(n, r);
            let rep_s = tensor_power_rep(n, s);
            for d in brauer_basis(r, s) {
                let f = realize(&BrauerHom::from_diagram(&d), n);
                for (label, _) in pn_basis(n) {
                    let xr = &rep_r.actions[&label];
                    let xs = &rep_s.actions[&label];
                    let lhs = f.mat.mul(&xr.mat);
                    let mut rhs = xs.mat.mul(&f.mat);
                    if f.parity == 1 && label.parity() == 1 {
                        rhs = rhs.scale(&-Q::one());
                    }
                    assert_eq!(lhs, rhs, "({r},{s}) at {}", label.name());
                }
            }
        }
    }

    #[test]
    fn unused_import_guard() {
        // keep tensor_action linked into the test build
        let n = 2;
        let rep = tensor_power_rep(n, 0);
        let x = &pn_basis(n)[0];
        let _ = tensor_action(n, &x.1, &rep.actions[&x.0], rep.space.dim());
    }
}
