//! Bipartite multigraphs with a perfect matching, and their translation to
//! and from digraphs.
//!
//! A digraph on `n` vertices corresponds to the bipartite graph with left
//! vertices `v-`, right vertices `v+`, matching edges `v- v+`, and one edge
//! `v- w+` per arc `(v, w)`. Left index `i` is `v_i-`, right index `i` is
//! `v_i+`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::digraph::{parse_count, parse_one_based, strip_comment, Digraph};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BVertex {
    pub side: Side,
    pub index: usize,
}

impl BVertex {
    pub fn left(index: usize) -> Self {
        BVertex { side: Side::Left, index }
    }

    pub fn right(index: usize) -> Self {
        BVertex { side: Side::Right, index }
    }
}

/// Old-to-new maps for both sides; `None` marks a removed vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideRelabel {
    pub left: Vec<Option<usize>>,
    pub right: Vec<Option<usize>>,
}

impl SideRelabel {
    fn get(&self, v: BVertex) -> Option<usize> {
        match v.side {
            Side::Left => self.left[v.index],
            Side::Right => self.right[v.index],
        }
    }
}

/// Edges are `(left, right)` pairs with a multiplicity of at least one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteMultigraph {
    n_left: usize,
    n_right: usize,
    edges: BTreeMap<(usize, usize), u32>,
}

impl BipartiteMultigraph {
    pub fn new(n_left: usize, n_right: usize) -> Self {
        BipartiteMultigraph {
            n_left,
            n_right,
            edges: BTreeMap::new(),
        }
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn add_edge(&mut self, l: usize, r: usize, mult: u32) -> Result<()> {
        if l >= self.n_left || r >= self.n_right {
            return Err(Error::input(format!("edge ({l}, {r}) out of range")));
        }
        if mult > 0 {
            *self.edges.entry((l, r)).or_insert(0) += mult;
        }
        Ok(())
    }

    pub fn multiplicity(&self, l: usize, r: usize) -> u32 {
        self.edges.get(&(l, r)).copied().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.edges.iter().map(|(&(l, r), &m)| (l, r, m))
    }

    pub fn edge_count(&self) -> u32 {
        self.edges.values().sum()
    }

    fn contains(&self, v: BVertex) -> bool {
        match v.side {
            Side::Left => v.index < self.n_left,
            Side::Right => v.index < self.n_right,
        }
    }

    /// Distinct neighbours of `v` with edge multiplicities.
    pub fn neighbors(&self, v: BVertex) -> Vec<(BVertex, u32)> {
        match v.side {
            Side::Left => self
                .edges()
                .filter(|&(l, _, _)| l == v.index)
                .map(|(_, r, m)| (BVertex::right(r), m))
                .collect(),
            Side::Right => self
                .edges()
                .filter(|&(_, r, _)| r == v.index)
                .map(|(l, _, m)| (BVertex::left(l), m))
                .collect(),
        }
    }

    /// Degree counting multiplicity.
    pub fn degree(&self, v: BVertex) -> u32 {
        self.neighbors(v).iter().map(|&(_, m)| m).sum()
    }

    fn remap(&self, relabel: &SideRelabel, n_left: usize, n_right: usize) -> BipartiteMultigraph {
        let mut g = BipartiteMultigraph::new(n_left, n_right);
        for (l, r, m) in self.edges() {
            if let (Some(a), Some(b)) = (relabel.left[l], relabel.right[r]) {
                g.add_edge(a, b, m).expect("remapped into range");
            }
        }
        g
    }

    /// Removes the listed vertices with all their edges.
    pub fn remove_vertices(&self, gone: &[BVertex]) -> (BipartiteMultigraph, SideRelabel) {
        let squeeze = |n: usize, side: Side| {
            let mut next = 0;
            (0..n)
                .map(|i| {
                    if gone.contains(&BVertex { side, index: i }) {
                        None
                    } else {
                        next += 1;
                        Some(next - 1)
                    }
                })
                .collect::<Vec<_>>()
        };
        let relabel = SideRelabel {
            left: squeeze(self.n_left, Side::Left),
            right: squeeze(self.n_right, Side::Right),
        };
        let nl = relabel.left.iter().flatten().count();
        let nr = relabel.right.iter().flatten().count();
        (self.remap(&relabel, nl, nr), relabel)
    }

    /// Merges each `(drop, keep)` pair (same side) and drops listed vertices.
    fn merge(&self, merges: &[(BVertex, BVertex)], deleted: &[BVertex]) -> (BipartiteMultigraph, SideRelabel) {
        let gone: Vec<BVertex> = merges.iter().map(|&(d, _)| d).chain(deleted.iter().copied()).collect();
        let (_, mut relabel) = self.remove_vertices(&gone);
        for &(drop, keep) in merges {
            let target = relabel.get(keep);
            match drop.side {
                Side::Left => relabel.left[drop.index] = target,
                Side::Right => relabel.right[drop.index] = target,
            }
        }
        let nl = self.n_left - gone.iter().filter(|v| v.side == Side::Left).count();
        let nr = self.n_right - gone.iter().filter(|v| v.side == Side::Right).count();
        (self.remap(&relabel, nl, nr), relabel)
    }

    /// Text form: `bigraph <nL> <nR>` and one `i j mult` line per edge, 1-based.
    /// A matching, when given, follows a `matching` line as `i j` pairs.
    pub fn to_text(&self, matching: Option<&PerfectMatching>) -> String {
        let mut s = format!("bigraph {} {}\n", self.n_left, self.n_right);
        for (l, r, m) in self.edges() {
            let _ = writeln!(s, "{} {} {}", l + 1, r + 1, m);
        }
        if let Some(mm) = matching {
            s.push_str("matching\n");
            for &(l, r) in mm.pairs() {
                let _ = writeln!(s, "{} {}", l + 1, r + 1);
            }
        }
        s
    }

    pub fn parse_text(src: &str) -> Result<(BipartiteMultigraph, Option<PerfectMatching>)> {
        let mut lines = src
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, strip_comment(l).trim()))
            .filter(|(_, l)| !l.is_empty());
        let (lineno, header) = lines.next().ok_or_else(|| Error::input("empty bigraph file"))?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some("bigraph") {
            return Err(Error::input(format!("line {lineno}: expected `bigraph <nL> <nR>`")));
        }
        let nl = parse_count(parts.next(), lineno)?;
        let nr = parse_count(parts.next(), lineno)?;
        let mut g = BipartiteMultigraph::new(nl, nr);
        let mut matching: Option<Vec<(usize, usize)>> = None;
        for (lineno, line) in lines {
            if line == "matching" {
                if matching.is_some() {
                    return Err(Error::input(format!("line {lineno}: second matching section")));
                }
                matching = Some(Vec::new());
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match &mut matching {
                None => {
                    if toks.len() != 3 {
                        return Err(Error::input(format!("line {lineno}: expected `i j mult`")));
                    }
                    let l = parse_one_based(toks[0], nl, lineno)?;
                    let r = parse_one_based(toks[1], nr, lineno)?;
                    let m: u32 = toks[2]
                        .parse()
                        .ok()
                        .filter(|&m| m > 0)
                        .ok_or_else(|| Error::input(format!("line {lineno}: multiplicity must be positive")))?;
                    if g.multiplicity(l, r) > 0 {
                        return Err(Error::input(format!("line {lineno}: edge listed twice")));
                    }
                    g.add_edge(l, r, m)?;
                }
                Some(pairs) => {
                    if toks.len() != 2 {
                        return Err(Error::input(format!("line {lineno}: expected `i j`")));
                    }
                    pairs.push((parse_one_based(toks[0], nl, lineno)?, parse_one_based(toks[1], nr, lineno)?));
                }
            }
        }
        let matching = matching.map(|pairs| PerfectMatching::new(&g, pairs)).transpose()?;
        Ok((g, matching))
    }
}

/// A perfect matching, stored as `(left, right)` pairs sorted by left index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectMatching {
    pairs: Vec<(usize, usize)>,
}

impl PerfectMatching {
    /// Validates that `pairs` are edges of `g` covering every vertex once.
    pub fn new(g: &BipartiteMultigraph, mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        if g.n_left != g.n_right || pairs.len() != g.n_left {
            return Err(Error::input("matching is not perfect: sizes differ"));
        }
        let mut left = vec![false; g.n_left];
        let mut right = vec![false; g.n_right];
        for &(l, r) in &pairs {
            if l >= g.n_left || r >= g.n_right || g.multiplicity(l, r) == 0 {
                return Err(Error::input(format!("matching pair ({l}, {r}) is not an edge")));
            }
            if std::mem::replace(&mut left[l], true) || std::mem::replace(&mut right[r], true) {
                return Err(Error::input("matching pairs share a vertex"));
            }
        }
        pairs.sort_unstable();
        Ok(PerfectMatching { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    fn partner_of(&self, v: BVertex) -> Option<BVertex> {
        self.pairs.iter().find_map(|&(l, r)| match v.side {
            Side::Left if l == v.index => Some(BVertex::right(r)),
            Side::Right if r == v.index => Some(BVertex::left(l)),
            _ => None,
        })
    }

    /// Carries the matching through a relabeling, dropping pairs that touch `removed`.
    fn carry(&self, relabel: &SideRelabel, removed: &[(usize, usize)]) -> Vec<(usize, usize)> {
        self.pairs
            .iter()
            .filter(|p| !removed.contains(p))
            .filter_map(|&(l, r)| Some((relabel.left[l]?, relabel.right[r]?)))
            .collect()
    }
}

pub fn to_bipartite(d: &Digraph) -> (BipartiteMultigraph, PerfectMatching) {
    let n = d.n();
    let mut g = BipartiteMultigraph::new(n, n);
    for v in 0..n {
        g.add_edge(v, v, 1).expect("in range");
    }
    for (v, w) in d.arcs() {
        g.add_edge(v, w, 1).expect("in range");
    }
    let m = PerfectMatching::new(&g, (0..n).map(|v| (v, v)).collect()).expect("diagonal matching");
    (g, m)
}

/// The digraph `D(G, M)`: vertex `i` is the `i`-th matching pair (by left
/// index); arc `(i, j)` iff `l_i r_j` is an edge outside the matching.
/// A matching edge of multiplicity above one is rejected.
pub fn from_bipartite(g: &BipartiteMultigraph, m: &PerfectMatching) -> Result<Digraph> {
    let m = PerfectMatching::new(g, m.pairs.clone())?;
    if let Some(&(l, r)) = m.pairs.iter().find(|&&(l, r)| g.multiplicity(l, r) > 1) {
        return Err(Error::input(format!(
            "matching edge ({}, {}) has a parallel copy outside the matching",
            l + 1,
            r + 1
        )));
    }
    let vertex_of_right: BTreeMap<usize, usize> = m.pairs.iter().enumerate().map(|(i, &(_, r))| (r, i)).collect();
    let vertex_of_left: BTreeMap<usize, usize> = m.pairs.iter().enumerate().map(|(i, &(l, _))| (l, i)).collect();
    let arcs = g
        .edges()
        .filter(|&(l, r, _)| !m.pairs.contains(&(l, r)))
        .map(|(l, r, _)| (vertex_of_left[&l], vertex_of_right[&r]));
    Ok(Digraph::from_arcs_merged(m.pairs.len(), arcs))
}

/// Deletes `v`, which must have exactly two distinct neighbours joined by
/// single edges, and identifies those neighbours. Multiplicities add up.
pub fn bicontract(g: &BipartiteMultigraph, v: BVertex) -> Result<(BipartiteMultigraph, SideRelabel)> {
    if !g.contains(v) {
        return Err(Error::contract("vertex out of range"));
    }
    let nb = g.neighbors(v);
    if nb.len() != 2 || nb.iter().any(|&(_, m)| m != 1) {
        return Err(Error::contract(format!("{v:?} does not have degree two with distinct neighbours")));
    }
    let (a, b) = (nb[0].0, nb[1].0);
    if a.side != b.side {
        return Err(Error::input("neighbours on opposite sides cannot be identified"));
    }
    let (keep, drop) = if a.index < b.index { (a, b) } else { (b, a) };
    Ok(g.merge(&[(drop, keep)], &[v]))
}

/// Bicontraction together with the induced perfect matching of the result.
pub fn bicontract_matched(
    g: &BipartiteMultigraph,
    m: &PerfectMatching,
    v: BVertex,
) -> Result<(BipartiteMultigraph, PerfectMatching)> {
    let (out, relabel) = bicontract(g, v)?;
    let partner = m.partner_of(v).ok_or_else(|| Error::input("vertex is unmatched"))?;
    let gone = match v.side {
        Side::Left => (v.index, partner.index),
        Side::Right => (partner.index, v.index),
    };
    let pairs = m.carry(&relabel, &[gone]);
    let matching = PerfectMatching::new(&out, pairs)?;
    Ok((out, matching))
}

/// Contracts the central 4-cycle `v1 v2 v3 v4`: removes the edges `v1 v2`
/// and `v3 v4`, identifies `v3` into `v1` and `v4` into `v2`.
pub fn c4_contract(g: &BipartiteMultigraph, cycle: [BVertex; 4]) -> Result<(BipartiteMultigraph, SideRelabel)> {
    let [v1, v2, v3, v4] = cycle;
    if cycle.iter().any(|&v| !g.contains(v))
        || v1.side != v3.side
        || v2.side != v4.side
        || v1.side == v2.side
        || v1 == v3
        || v2 == v4
    {
        return Err(Error::contract("not a 4-cycle"));
    }
    let mult = |a: BVertex, b: BVertex| match a.side {
        Side::Left => g.multiplicity(a.index, b.index),
        Side::Right => g.multiplicity(b.index, a.index),
    };
    if [(v1, v2), (v2, v3), (v3, v4), (v4, v1)].iter().any(|&(a, b)| mult(a, b) == 0) {
        return Err(Error::contract("not a 4-cycle"));
    }
    if !is_central(g, &cycle) {
        return Err(Error::contract("4-cycle is not central"));
    }
    let mut stripped = g.clone();
    for (a, b) in [(v1, v2), (v3, v4)] {
        let key = match a.side {
            Side::Left => (a.index, b.index),
            Side::Right => (b.index, a.index),
        };
        stripped.edges.remove(&key);
    }
    Ok(stripped.merge(&[(v3, v1), (v4, v2)], &[]))
}

/// Digraph-side bi-directed contraction of `u` and `w` translated to the
/// bipartite side: C4-contraction of `u- w+ w- u+`, one of the two parallel
/// matching edges deleted, and the induced matching.
pub fn c4_contract_bidirected_pair(
    g: &BipartiteMultigraph,
    m: &PerfectMatching,
    u: usize,
    w: usize,
) -> Result<(BipartiteMultigraph, PerfectMatching)> {
    let pu = m.partner_of(BVertex::left(u)).ok_or_else(|| Error::input("unmatched"))?;
    let pw = m.partner_of(BVertex::left(w)).ok_or_else(|| Error::input("unmatched"))?;
    let cycle = [BVertex::left(u), pw, BVertex::left(w), pu];
    let (mut out, relabel) = c4_contract(g, cycle)?;
    let merged = (
        relabel.left[u].expect("kept"),
        relabel.right[pw.index].expect("kept"),
    );
    let e = out.edges.get_mut(&merged).expect("merged edge");
    *e -= 1;
    let mut pairs = m.carry(&relabel, &[(u, pu.index), (w, pw.index)]);
    pairs.push(merged);
    let matching = PerfectMatching::new(&out, pairs)?;
    Ok((out, matching))
}

/// Lowers every matching edge to multiplicity one. A parallel copy of a
/// matching edge plays the role of a self-arc, which digraphs do not keep.
pub fn drop_matching_parallels(g: &BipartiteMultigraph, m: &PerfectMatching) -> BipartiteMultigraph {
    let mut out = g.clone();
    for p in m.pairs() {
        if let Some(e) = out.edges.get_mut(p) {
            *e = 1;
        }
    }
    out
}

/// Maximum matching by augmenting paths; `Some` only if it is perfect.
pub fn find_perfect_matching(g: &BipartiteMultigraph) -> Option<PerfectMatching> {
    if g.n_left != g.n_right {
        return None;
    }
    let adj: Vec<Vec<usize>> = (0..g.n_left)
        .map(|l| g.edges().filter(|&(a, _, _)| a == l).map(|(_, r, _)| r).collect())
        .collect();
    let mut match_right: Vec<Option<usize>> = vec![None; g.n_right];

    fn augment(l: usize, adj: &[Vec<usize>], seen: &mut [bool], match_right: &mut [Option<usize>]) -> bool {
        for &r in &adj[l] {
            if std::mem::replace(&mut seen[r], true) {
                continue;
            }
            if match_right[r].is_none_or(|other| augment(other, adj, seen, match_right)) {
                match_right[r] = Some(l);
                return true;
            }
        }
        false
    }

    for l in 0..g.n_left {
        let mut seen = vec![false; g.n_right];
        if !augment(l, &adj, &mut seen, &mut match_right) {
            return None;
        }
    }
    let pairs = match_right
        .iter()
        .enumerate()
        .map(|(r, l)| (l.expect("perfect"), r))
        .collect();
    Some(PerfectMatching::new(g, pairs).expect("augmenting paths give a matching"))
}

/// `H` is central when removing its vertices leaves a graph with a perfect matching.
pub fn is_central(g: &BipartiteMultigraph, h: &[BVertex]) -> bool {
    find_perfect_matching(&g.remove_vertices(h).0).is_some()
}
