//! The Temperley-Lieb monoid-with-zero TL_inf(q = i).
//!
//! Words multiply like operator products: the word `[a, b, c]` stands for
//! theta_a theta_b theta_c, with theta_c applied first. The monoid relations
//! are theta_k^2 = 0, theta_k theta_{k+-1} theta_k = theta_k, and distant
//! commutation; equality of words is decided on planar-matching normal forms,
//! never by rewriting. The generator theta_k occupies columns (k-1, k).

use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TlError {
    #[error("no square-root pair found within the search bound for s={0}")]
    NoSquareRoot(usize),
}

/// A word in the generators, stored in product order (rightmost index is the
/// first factor applied).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TLWord {
    pub indices: Vec<i64>,
}

impl TLWord {
    pub fn new(indices: Vec<i64>) -> Self {
        TLWord { indices }
    }
}

/// An endpoint of a strand: bottom or top row, integer column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    Bottom(i64),
    Top(i64),
}

/// Normal form of a TL word: zero, or a planar matching equal to the
/// identity outside a finite window. `pairs` is the full perfect matching of
/// the window's endpoints, sorted; the window is minimal for the
/// non-identity pairs. The identity element has an empty window.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TLElement {
    Zero,
    Diagram(Matching),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Matching {
    /// sorted pairs, each pair sorted internally
    pub pairs: Vec<(End, End)>,
    /// inclusive column window; None for the identity
    pub window: Option<(i64, i64)>,
}

impl TLElement {
    pub fn identity() -> Self {
        TLElement::Diagram(Matching::default())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, TLElement::Zero)
    }
}

impl Matching {
    /// Canonicalizes a raw pair list: the window is the minimal column range
    /// around the non-identity pairs, and the stored matching is the full
    /// perfect matching of the window's endpoints (identity strands inside
    /// the window included, everything outside dropped).
    fn canonical(raw: Vec<(End, End)>) -> Matching {
        let is_identity = |a: &End, b: &End| {
            matches!((a, b), (End::Bottom(x), End::Top(y)) if x == y)
                || matches!((a, b), (End::Top(x), End::Bottom(y)) if x == y)
        };
        let nonid: Vec<(End, End)> = raw
            .into_iter()
            .filter(|(a, b)| !is_identity(a, b))
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        if nonid.is_empty() {
            return Matching::default();
        }
        let mut cols: BTreeSet<i64> = BTreeSet::new();
        for (a, b) in &nonid {
            for e in [a, b] {
                let c = match e {
                    End::Bottom(c) | End::Top(c) => *c,
                };
                cols.insert(c);
            }
        }
        let lo = *cols.iter().next().unwrap();
        let hi = *cols.iter().last().unwrap();
        let covered: BTreeSet<End> = nonid.iter().flat_map(|&(a, b)| [a, b]).collect();
        let mut pairs = nonid;
        for c in lo..=hi {
            if !covered.contains(&End::Bottom(c)) {
                debug_assert!(!covered.contains(&End::Top(c)));
                pairs.push((End::Bottom(c), End::Top(c)));
            }
        }
        pairs.sort();
        Matching {
            pairs,
            window: Some((lo, hi)),
        }
    }

    /// The partner of an endpoint, treating columns outside the window as
    /// identity strands.
    pub fn partner(&self, e: End) -> End {
        for &(a, b) in &self.pairs {
            if a == e {
                return b;
            }
            if b == e {
                return a;
            }
        }
        match e {
            End::Bottom(c) => End::Top(c),
            End::Top(c) => End::Bottom(c),
        }
    }

    /// Planarity: no two strands cross when bottom and top rows are drawn on
    /// two horizontal lines.
    pub fn is_planar(&self) -> bool {
        let (lo, hi) = match self.window {
            None => return true,
            Some(w) => w,
        };
        // walk the boundary: bottom row left to right, then top row right to
        // left; a matching is planar iff it is non-crossing in this cyclic
        // order
        let mut order: Vec<End> = (lo..=hi).map(End::Bottom).collect();
        order.extend((lo..=hi).rev().map(End::Top));
        let pos: HashMap<End, usize> = order.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut spans: Vec<(usize, usize)> = Vec::new();
        for &(a, b) in &self.pairs {
            let (pa, pb) = match (pos.get(&a), pos.get(&b)) {
                (Some(&x), Some(&y)) => (x.min(y), x.max(y)),
                _ => return false, // pair leaves the window: malformed
            };
            spans.push((pa, pb));
        }
        for i in 0..spans.len() {
            for j in i + 1..spans.len() {
                let (a1, b1) = spans[i];
                let (a2, b2) = spans[j];
                let crossed = (a1 < a2 && a2 < b1 && b1 < b2) || (a2 < a1 && a1 < b2 && b2 < b1);
                if crossed {
                    return false;
                }
            }
        }
        true
    }
}

/// The generator theta_k: bottom cap and top cup on columns (k-1, k).
pub fn tl_generator(k: i64) -> TLElement {
    TLElement::Diagram(Matching::canonical(vec![
        (End::Bottom(k - 1), End::Bottom(k)),
        (End::Top(k - 1), End::Top(k)),
    ]))
}

/// a after b: stacks b below a and traces strands; a closed loop gives Zero.
pub fn tl_compose(a: &TLElement, b: &TLElement) -> TLElement {
    let (ma, mb) = match (a, b) {
        (TLElement::Zero, _) | (_, TLElement::Zero) => return TLElement::Zero,
        (TLElement::Diagram(ma), TLElement::Diagram(mb)) => (ma, mb),
    };
    let mut cols: BTreeSet<i64> = BTreeSet::new();
    for m in [ma, mb] {
        if let Some((lo, hi)) = m.window {
            cols.extend(lo..=hi);
        }
    }
    if cols.is_empty() {
        return TLElement::identity();
    }

    // layered endpoints: the composite's bottom row is b's bottom, the
    // middle row glues b's top to a's bottom, the composite's top is a's top
    #[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
    enum Node {
        Bot(i64),
        Mid(i64),
        Top(i64),
    }

    let to_node_b = |e: End| match e {
        End::Bottom(c) => Node::Bot(c),
        End::Top(c) => Node::Mid(c),
    };
    let to_node_a = |e: End| match e {
        End::Bottom(c) => Node::Mid(c),
        End::Top(c) => Node::Top(c),
    };

    // adjacency: every node has exactly one edge from its own layer's
    // matching (identity strands included over the common column set)
    let mut link_b: HashMap<Node, Node> = HashMap::new();
    let mut link_a: HashMap<Node, Node> = HashMap::new();
    for &c in &cols {
        let pb = mb.partner(End::Bottom(c));
        link_b.insert(Node::Bot(c), to_node_b(pb));
        let pt = mb.partner(End::Top(c));
        link_b.insert(Node::Mid(c), to_node_b(pt));
        let pa = ma.partner(End::Bottom(c));
        link_a.insert(Node::Mid(c), to_node_a(pa));
        let pat = ma.partner(End::Top(c));
        link_a.insert(Node::Top(c), to_node_a(pat));
    }

    let next = |n: Node, via_a: bool| -> Node {
        if via_a {
            link_a[&n]
        } else {
            link_b[&n]
        }
    };

    // trace open strands from every boundary endpoint
    let mut pairs: Vec<(End, End)> = Vec::new();
    let mut seen_boundary: BTreeSet<End> = BTreeSet::new();
    let boundary: Vec<End> = cols
        .iter()
        .map(|&c| End::Bottom(c))
        .chain(cols.iter().map(|&c| End::Top(c)))
        .collect();
    let mut visited_mid: BTreeSet<i64> = BTreeSet::new();
    for &start in &boundary {
        if seen_boundary.contains(&start) {
            continue;
        }
        let (mut node, mut via_a) = match start {
            End::Bottom(c) => (Node::Bot(c), false),
            End::Top(c) => (Node::Top(c), true),
        };
        loop {
            let nxt = next(node, via_a);
            match nxt {
                Node::Mid(c) => {
                    visited_mid.insert(c);
                    node = nxt;
                    via_a = !via_a;
                }
                Node::Bot(c) => {
                    let end = End::Bottom(c);
                    seen_boundary.insert(start);
                    seen_boundary.insert(end);
                    pairs.push((start, end));
                    break;
                }
                Node::Top(c) => {
                    let end = End::Top(c);
                    seen_boundary.insert(start);
                    seen_boundary.insert(end);
                    pairs.push((start, end));
                    break;
                }
            }
        }
    }
    // a loop exists iff some middle node was never visited by an open strand
    for &c in &cols {
        if !visited_mid.contains(&c) {
            return TLElement::Zero;
        }
    }
    TLElement::Diagram(Matching::canonical(pairs))
}

/// Right-to-left fold: the last index of the word is applied first. The
/// empty word is the identity (the zero element is a separate value).
pub fn tl_eval_word(word: &TLWord) -> TLElement {
    let mut acc = TLElement::identity();
    for &k in word.indices.iter().rev() {
        acc = tl_compose(&tl_generator(k), &acc);
    }
    acc
}

pub fn tl_equal(left: &TLWord, right: &TLWord) -> bool {
    tl_eval_word(left) == tl_eval_word(right)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedReport {
    pub reduced: bool,
    pub zero_valued: bool,
}

/// A word is reduced if it is nonzero and no strictly shorter word has the
/// same normal form. Zero-valued words are reported separately. The search
/// is a breadth-first walk of the monoid over the generators whose
/// footprints meet the normal form's window.
pub fn tl_is_reduced(word: &TLWord) -> ReducedReport {
    let target = tl_eval_word(word);
    if target.is_zero() {
        return ReducedReport {
            reduced: false,
            zero_valued: true,
        };
    }
    if word.indices.is_empty() {
        return ReducedReport {
            reduced: true,
            zero_valued: false,
        };
    }
    let alphabet = window_alphabet(&target);
    let dist = monoid_distances(&alphabet, word.indices.len());
    let reduced = dist.get(&target) == Some(&word.indices.len());
    ReducedReport {
        reduced,
        zero_valued: false,
    }
}

/// Generator indices whose footprint (k-1, k) touches the window of the
/// normal form.
fn window_alphabet(e: &TLElement) -> Vec<i64> {
    match e {
        TLElement::Zero => vec![],
        TLElement::Diagram(m) => match m.window {
            None => vec![],
            Some((lo, hi)) => (lo + 1..=hi).collect(),
        },
    }
}

/// Shortest word length for every element reachable with at most
/// `max_len` generators from the given alphabet.
pub fn monoid_distances(alphabet: &[i64], max_len: usize) -> HashMap<TLElement, usize> {
    let mut dist: HashMap<TLElement, usize> = HashMap::new();
    dist.insert(TLElement::identity(), 0);
    let mut frontier: VecDeque<TLElement> = VecDeque::new();
    frontier.push_back(TLElement::identity());
    while let Some(e) = frontier.pop_front() {
        let d = dist[&e];
        if d == max_len {
            continue;
        }
        for &k in alphabet {
            let next = tl_compose(&tl_generator(k), &e);
            if next.is_zero() {
                continue;
            }
            if !dist.contains_key(&next) {
                dist.insert(next.clone(), d + 1);
                frontier.push_back(next);
            }
        }
    }
    dist
}

/// All reduced words over `alphabet` of length at most `max_len`, i.e.
/// geodesic words in the monoid Cayley graph.
pub fn reduced_words(alphabet: &[i64], max_len: usize) -> Vec<TLWord> {
    let dist = monoid_distances(alphabet, max_len);
    let mut out: Vec<TLWord> = vec![TLWord::new(vec![])];
    // grow words on the left, keeping only geodesics
    let mut layer: Vec<(Vec<i64>, TLElement)> = vec![(vec![], TLElement::identity())];
    for len in 1..=max_len {
        let mut next_layer = Vec::new();
        for (w, e) in &layer {
            for &k in alphabet {
                let ne = tl_compose(&tl_generator(k), e);
                if ne.is_zero() {
                    continue;
                }
                if dist.get(&ne) == Some(&len) {
                    let mut nw = Vec::with_capacity(len);
                    nw.push(k);
                    nw.extend_from_slice(w);
                    out.push(TLWord::new(nw.clone()));
                    next_layer.push((nw, ne));
                }
            }
        }
        layer = next_layer;
        if layer.is_empty() {
            break;
        }
    }
    out
}

/// The staircase word of Prop-style length s(s+1): s descending runs, the
/// j-th running from j down to j-s.
pub fn staircase(s: usize) -> TLWord {
    let s = s as i64;
    let mut indices = Vec::with_capacity((s * (s + 1)) as usize);
    for j in 1..=s {
        for k in (j - s..=j).rev() {
            indices.push(k);
        }
    }
    TLWord::new(indices)
}

/// The square-root pair (J, J') for the staircase I = staircase(s):
/// theta_J theta_I = theta_J and theta_{J'} theta_J = theta_I as diagrams.
/// The closed-form words are tried first and verified; if verification
/// fails, a bounded search finds a shortest valid pair.
pub fn square_root_pair(s: usize) -> Result<(TLWord, TLWord), TlError> {
    let i_word = staircase(s);
    let si = s as i64;
    // J: for r = 1..s an increasing run from s-2r+1 to s-r
    let mut j_idx = Vec::new();
    for r in 1..=si {
        for k in si - 2 * r + 1..=si - r {
            j_idx.push(k);
        }
    }
    // J': for r = 1..s a decreasing run from r down to 2r-s
    let mut jp_idx = Vec::new();
    for r in 1..=si {
        for k in (2 * r - si..=r).rev() {
            jp_idx.push(k);
        }
    }
    let j = TLWord::new(j_idx);
    let jp = TLWord::new(jp_idx);
    if verify_square_root(&j, &jp, &i_word) {
        return Ok((j, jp));
    }
    // fallback: bounded search on the staircase window, shortest first;
    // only words passing the first identity are paired against candidates
    // for the second
    let alphabet = window_alphabet(&tl_eval_word(&i_word));
    let max_len = s * (s + 1) / 2 + 1;
    let candidates = reduced_words(&alphabet, max_len);
    let firsts: Vec<&TLWord> = candidates
        .iter()
        .filter(|j| {
            let e = tl_eval_word(j);
            if e.is_zero() {
                return false;
            }
            let mut ji = j.indices.clone();
            ji.extend_from_slice(&i_word.indices);
            tl_eval_word(&TLWord::new(ji)) == e
        })
        .collect();
    for j in firsts {
        for jp in &candidates {
            let mut jpj = jp.indices.clone();
            jpj.extend_from_slice(&j.indices);
            if tl_equal(&TLWord::new(jpj), &i_word) {
                return Ok((j.clone(), jp.clone()));
            }
        }
    }
    Err(TlError::NoSquareRoot(s))
}

fn verify_square_root(j: &TLWord, jp: &TLWord, i_word: &TLWord) -> bool {
    let concat = |a: &TLWord, b: &TLWord| {
        let mut v = a.indices.clone();
        v.extend_from_slice(&b.indices);
        TLWord::new(v)
    };
    !tl_eval_word(j).is_zero()
        && tl_equal(&concat(j, i_word), j)
        && tl_equal(&concat(jp, j), i_word)
}

/// JSON form of a TLElement per the external interface:
/// `{"zero":true}` or `{"pairs":[[["b",i],["t",j]],...],"window":[lo,hi]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum TlElementJson {
    Zero {
        zero: bool,
    },
    Diagram {
        pairs: Vec<[(String, i64); 2]>,
        window: Option<(i64, i64)>,
    },
}

impl From<&TLElement> for TlElementJson {
    fn from(e: &TLElement) -> Self {
        match e {
            TLElement::Zero => TlElementJson::Zero { zero: true },
            TLElement::Diagram(m) => {
                let enc = |e: &End| match e {
                    End::Bottom(c) => ("b".to_string(), *c),
                    End::Top(c) => ("t".to_string(), *c),
                };
                TlElementJson::Diagram {
                    pairs: m.pairs.iter().map(|(a, b)| [enc(a), enc(b)]).collect(),
                    window: m.window,
                }
            }
        }
    }
}
