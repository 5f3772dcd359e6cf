use std::collections::HashSet;

use crate::canon::{find_isomorphism, find_monomorphism, CanonKey, SmallDigraph, MAX_SMALL};
use crate::digraph::Digraph;
use crate::error::{Error, Result};

use super::{MinorStep, MinorWitness, Pattern, FORBIDDEN};

pub const DEFAULT_MINOR_CAP: usize = 8;
/// Environment variable overriding [`DEFAULT_MINOR_CAP`].
pub const MINOR_CAP_ENV: &str = "NULLITY_MINOR_CAP";

pub fn default_minor_cap() -> usize {
    std::env::var(MINOR_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MINOR_CAP)
}

/// How the space of minors is explored. All three are exhaustive; they
/// differ in which move sequences they generate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SearchRegime {
    /// Contractions only, each preceded by exactly the arc deletions that
    /// make it legal; leftover vertices and arcs are deleted at the end.
    #[default]
    Guided,
    /// Every single deletion or contraction is a move, in any order.
    Interleaved,
    /// All subdigraphs first, then contractions only.
    SubdigraphFirst,
}

#[derive(Clone, Copy, Debug)]
pub struct MinorSearch {
    /// Largest host order accepted.
    pub cap: usize,
    pub regime: SearchRegime,
}

impl Default for MinorSearch {
    fn default() -> Self {
        MinorSearch {
            cap: default_minor_cap(),
            regime: SearchRegime::Guided,
        }
    }
}

pub fn has_directed_minor(d: &Digraph, pattern: &Digraph) -> Result<Option<MinorWitness>> {
    has_directed_minor_with(d, pattern, &MinorSearch::default())
}

/// Searches for `pattern` as a directed minor of `d`. `None` means the
/// search space was exhausted.
pub fn has_directed_minor_with(
    d: &Digraph,
    pattern: &Digraph,
    opts: &MinorSearch,
) -> Result<Option<MinorWitness>> {
    let limit = opts.cap.min(MAX_SMALL);
    if d.n() > limit {
        return Err(Error::Capacity {
            what: "minor search host",
            size: d.n(),
            limit,
        });
    }
    if pattern.n() > d.n() || pattern.arc_count() > d.arc_count() {
        return Ok(None);
    }
    let host = SmallDigraph::from_digraph(d);
    let pat = SmallDigraph::from_digraph(pattern);
    let found = match opts.regime {
        SearchRegime::Guided => Guided::new(&pat).run(host),
        SearchRegime::Interleaved => breadth_first(host, &pat, false),
        SearchRegime::SubdigraphFirst => breadth_first(host, &pat, true),
    };
    match found {
        Some(w) => {
            w.verify(d, pattern)?;
            Ok(Some(w))
        }
        None => Ok(None),
    }
}

/// Per-pattern outcome of scanning for the five obstructions.
#[derive(Clone, Debug)]
pub struct ForbiddenReport {
    pub entries: Vec<(Pattern, Option<MinorWitness>)>,
}

impl ForbiddenReport {
    pub fn is_clean(&self) -> bool {
        self.entries.iter().all(|(_, w)| w.is_none())
    }

    pub fn first_found(&self) -> Option<(Pattern, &MinorWitness)> {
        self.entries
            .iter()
            .find_map(|(p, w)| w.as_ref().map(|w| (*p, w)))
    }

    pub fn get(&self, pattern: Pattern) -> Option<&MinorWitness> {
        self.entries
            .iter()
            .find(|(p, _)| *p == pattern)
            .and_then(|(_, w)| w.as_ref())
    }
}

pub fn forbidden_scan(d: &Digraph) -> Result<ForbiddenReport> {
    forbidden_scan_with(d, &MinorSearch::default())
}

pub fn forbidden_scan_with(d: &Digraph, opts: &MinorSearch) -> Result<ForbiddenReport> {
    let entries = FORBIDDEN
        .iter()
        .map(|&p| Ok((p, has_directed_minor_with(d, &p.digraph(), opts)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ForbiddenReport { entries })
}

fn prune(s: &SmallDigraph, pattern: &SmallDigraph) -> bool {
    s.n() < pattern.n() || s.arc_count() < pattern.arc_count()
}

struct Guided<'a> {
    pattern: &'a SmallDigraph,
    visited: HashSet<CanonKey>,
}

impl<'a> Guided<'a> {
    fn new(pattern: &'a SmallDigraph) -> Self {
        Guided {
            pattern,
            visited: HashSet::new(),
        }
    }

    fn run(mut self, host: SmallDigraph) -> Option<MinorWitness> {
        self.visited.insert(host.canonical_key());
        let mut path = Vec::new();
        self.dfs(host, &mut path)
    }

    fn dfs(&mut self, s: SmallDigraph, path: &mut Vec<MinorStep>) -> Option<MinorWitness> {
        if let Some(phi) = find_monomorphism(self.pattern, &s) {
            return Some(finish(&s, self.pattern, &phi, path.clone()));
        }
        for steps in guided_moves(&s) {
            let next = steps.iter().fold(s, |t, step| step.apply_small(&t));
            if prune(&next, self.pattern) || !self.visited.insert(next.canonical_key()) {
                continue;
            }
            let mark = path.len();
            path.extend_from_slice(&steps);
            if let Some(w) = self.dfs(next, path) {
                return Some(w);
            }
            path.truncate(mark);
        }
        None
    }
}

/// Each move is a short step list ending in one contraction.
fn guided_moves(s: &SmallDigraph) -> Vec<Vec<MinorStep>> {
    let mut moves = Vec::new();
    for (u, w) in s.arcs() {
        if s.outdegree(u) == 1 || s.indegree(w) == 1 {
            moves.push(vec![MinorStep::ButterflyContract { u, w }]);
        } else {
            // Deleting more than the minimum only yields subdigraphs of these.
            let mut out_side: Vec<MinorStep> = (0..s.n())
                .filter(|&x| x != w && s.has_arc(u, x))
                .map(|x| MinorStep::DeleteArc { u, w: x })
                .collect();
            out_side.push(MinorStep::ButterflyContract { u, w });
            moves.push(out_side);
            let mut in_side: Vec<MinorStep> = (0..s.n())
                .filter(|&x| x != u && s.has_arc(x, w))
                .map(|x| MinorStep::DeleteArc { u: x, w })
                .collect();
            in_side.push(MinorStep::ButterflyContract { u, w });
            moves.push(in_side);
        }
        if u < w && s.has_arc(w, u) {
            moves.push(vec![MinorStep::BidirectedContract { u, w }]);
        }
    }
    moves
}

/// Appends the deletions that cut `s` down to the image of `phi`.
fn finish(s: &SmallDigraph, pattern: &SmallDigraph, phi: &[usize], mut steps: Vec<MinorStep>) -> MinorWitness {
    let mut preimage = vec![None; s.n()];
    for (i, &t) in phi.iter().enumerate() {
        preimage[t] = Some(i);
    }
    for (a, b) in s.arcs() {
        if let (Some(i), Some(j)) = (preimage[a], preimage[b]) {
            if !pattern.has_arc(i, j) {
                steps.push(MinorStep::DeleteArc { u: a, w: b });
            }
        }
    }
    for v in (0..s.n()).rev() {
        if preimage[v].is_none() {
            steps.push(MinorStep::DeleteVertex { v });
        }
    }
    let map = phi
        .iter()
        .map(|&t| t - preimage[..t].iter().filter(|p| p.is_none()).count())
        .collect();
    MinorWitness { steps, map }
}

fn deletion_moves(s: &SmallDigraph) -> Vec<MinorStep> {
    let mut moves: Vec<MinorStep> = (0..s.n()).map(|v| MinorStep::DeleteVertex { v }).collect();
    moves.extend(s.arcs().map(|(u, w)| MinorStep::DeleteArc { u, w }));
    moves
}

fn contraction_moves(s: &SmallDigraph) -> Vec<MinorStep> {
    let mut moves = Vec::new();
    for (u, w) in s.arcs() {
        if s.outdegree(u) == 1 || s.indegree(w) == 1 {
            moves.push(MinorStep::ButterflyContract { u, w });
        }
        if u < w && s.has_arc(w, u) {
            moves.push(MinorStep::BidirectedContract { u, w });
        }
    }
    moves
}

struct Node {
    graph: SmallDigraph,
    parent: Option<(usize, MinorStep)>,
}

fn path_to(nodes: &[Node], mut idx: usize) -> Vec<MinorStep> {
    let mut steps = Vec::new();
    while let Some((parent, step)) = nodes[idx].parent {
        steps.push(step);
        idx = parent;
    }
    steps.reverse();
    steps
}

/// Breadth-first closure with an exact isomorphism test as the goal. With
/// `deletions_first`, deletions are exhausted before any contraction.
fn breadth_first(host: SmallDigraph, pattern: &SmallDigraph, deletions_first: bool) -> Option<MinorWitness> {
    let goal = |nodes: &[Node], idx: usize| {
        find_isomorphism(pattern, &nodes[idx].graph).map(|map| MinorWitness {
            steps: path_to(nodes, idx),
            map,
        })
    };
    let mut nodes = vec![Node {
        graph: host,
        parent: None,
    }];
    let mut visited: HashSet<CanonKey> = HashSet::from([host.canonical_key()]);

    let expand = |nodes: &mut Vec<Node>,
                  visited: &mut HashSet<CanonKey>,
                  idx: usize,
                  moves: Vec<MinorStep>| {
        let g = nodes[idx].graph;
        for step in moves {
            let next = step.apply_small(&g);
            if prune(&next, pattern) || !visited.insert(next.canonical_key()) {
                continue;
            }
            nodes.push(Node {
                graph: next,
                parent: Some((idx, step)),
            });
        }
    };

    if !deletions_first {
        let mut head = 0;
        while head < nodes.len() {
            if let Some(w) = goal(&nodes, head) {
                return Some(w);
            }
            let g = nodes[head].graph;
            let mut moves = deletion_moves(&g);
            moves.extend(contraction_moves(&g));
            expand(&mut nodes, &mut visited, head, moves);
            head += 1;
        }
        return None;
    }

    let mut head = 0;
    while head < nodes.len() {
        let g = nodes[head].graph;
        expand(&mut nodes, &mut visited, head, deletion_moves(&g));
        head += 1;
    }
    let subdigraphs = nodes.len();
    let mut contracted: HashSet<CanonKey> = HashSet::new();
    for root in 0..subdigraphs {
        if !contracted.insert(nodes[root].graph.canonical_key()) {
            continue;
        }
        let mut frontier = vec![root];
        while let Some(idx) = frontier.pop() {
            if let Some(w) = goal(&nodes, idx) {
                return Some(w);
            }
            let before = nodes.len();
            let g = nodes[idx].graph;
            expand(&mut nodes, &mut contracted, idx, contraction_moves(&g));
            frontier.extend(before..nodes.len());
        }
    }
    None
}
