//! Bitmask digraphs on at most eleven vertices, canonical forms and
//! embedding search.
//!
//! The canonical form is the minimum row-major adjacency code over all
//! labelings produced by colour refinement with individualization. Twin
//! vertices inside a cell are interchangeable, so only one of them is
//! individualized.

use crate::digraph::{Digraph, VertexId};

/// Largest order handled by [`SmallDigraph`].
pub const MAX_SMALL: usize = 11;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SmallDigraph {
    n: usize,
    out: [u16; MAX_SMALL],
    inn: [u16; MAX_SMALL],
}

/// Isomorphism-class key: order plus canonical adjacency code.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonKey {
    pub n: u8,
    pub code: u128,
}

impl SmallDigraph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_SMALL);
        SmallDigraph {
            n,
            out: [0; MAX_SMALL],
            inn: [0; MAX_SMALL],
        }
    }

    pub fn from_digraph(d: &Digraph) -> Self {
        assert!(d.n() <= MAX_SMALL, "digraph too large for bitmask form");
        let mut s = SmallDigraph::empty(d.n());
        for (u, w) in d.arcs() {
            s.add_arc(u, w);
        }
        s
    }

    pub fn to_digraph(&self) -> Digraph {
        Digraph::from_arcs_merged(self.n, self.arcs())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn out_mask(&self, v: usize) -> u16 {
        self.out[v]
    }

    #[inline]
    pub fn in_mask(&self, v: usize) -> u16 {
        self.inn[v]
    }

    #[inline]
    pub fn has_arc(&self, u: usize, w: usize) -> bool {
        self.out[u] >> w & 1 == 1
    }

    #[inline]
    pub fn add_arc(&mut self, u: usize, w: usize) {
        debug_assert!(u != w);
        self.out[u] |= 1 << w;
        self.inn[w] |= 1 << u;
    }

    #[inline]
    pub fn remove_arc(&mut self, u: usize, w: usize) {
        self.out[u] &= !(1 << w);
        self.inn[w] &= !(1 << u);
    }

    #[inline]
    pub fn outdegree(&self, v: usize) -> usize {
        self.out[v].count_ones() as usize
    }

    #[inline]
    pub fn indegree(&self, v: usize) -> usize {
        self.inn[v].count_ones() as usize
    }

    pub fn arc_count(&self) -> usize {
        self.out[..self.n].iter().map(|m| m.count_ones() as usize).sum()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| (0..self.n).filter(move |&w| self.has_arc(u, w)).map(move |w| (u, w)))
    }

    /// Applies `relabel` (old -> new, `None` deletes) to build a digraph on `new_n` vertices.
    fn remap(&self, relabel: &[Option<VertexId>], new_n: usize) -> SmallDigraph {
        let mut s = SmallDigraph::empty(new_n);
        for (u, w) in self.arcs() {
            if let (Some(a), Some(b)) = (relabel[u], relabel[w]) {
                if a != b {
                    s.add_arc(a, b);
                }
            }
        }
        s
    }

    pub fn delete_vertex(&self, v: usize) -> SmallDigraph {
        let relabel: Vec<Option<usize>> = (0..self.n)
            .map(|i| match i.cmp(&v) {
                std::cmp::Ordering::Less => Some(i),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(i - 1),
            })
            .collect();
        self.remap(&relabel, self.n - 1)
    }

    /// Same convention as `Digraph::identify`: `drop` is merged into `keep`.
    pub fn identify(&self, keep: usize, drop: usize) -> SmallDigraph {
        let shift = |i: usize| if i > drop { i - 1 } else { i };
        let relabel: Vec<Option<usize>> = (0..self.n)
            .map(|i| Some(if i == drop { shift(keep) } else { shift(i) }))
            .collect();
        self.remap(&relabel, self.n - 1)
    }

    pub fn reverse(&self) -> SmallDigraph {
        SmallDigraph {
            n: self.n,
            out: self.inn,
            inn: self.out,
        }
    }

    /// Adjacency code of the labeling that puts vertex `order[i]` at position `i`.
    fn code_for(&self, order: &[usize]) -> u128 {
        let n = self.n;
        let mut code = 0u128;
        for (i, &a) in order.iter().enumerate() {
            for (j, &b) in order.iter().enumerate() {
                if self.has_arc(a, b) {
                    code |= 1u128 << (127 - (i * n + j));
                }
            }
        }
        code
    }

    pub fn canonical_key(&self) -> CanonKey {
        self.canonical().0
    }

    /// Canonical key together with a canonical ordering: vertex `order[i]`
    /// takes position `i` in the canonical digraph.
    pub fn canonical(&self) -> (CanonKey, Vec<usize>) {
        let n = self.n;
        let mut best: Option<(u128, Vec<usize>)> = None;
        if n == 0 {
            return (CanonKey { n: 0, code: 0 }, Vec::new());
        }
        let colors = self.refine(self.initial_colors());
        self.search_leaves(colors, &mut best);
        let (code, order) = best.expect("at least one leaf");
        (CanonKey { n: n as u8, code }, order)
    }

    fn initial_colors(&self) -> Vec<u32> {
        let keys: Vec<(u32, u32, u32)> = (0..self.n)
            .map(|v| {
                (
                    self.outdegree(v) as u32,
                    self.indegree(v) as u32,
                    (self.out[v] & self.inn[v]).count_ones(),
                )
            })
            .collect();
        rank(&keys)
    }

    /// Equitable refinement; colours are dense ranks and never merge.
    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let n = self.n;
        loop {
            let classes = distinct(&colors);
            let sigs: Vec<(u32, Vec<u32>, Vec<u32>)> = (0..n)
                .map(|v| {
                    let mut outs: Vec<u32> =
                        (0..n).filter(|&w| self.has_arc(v, w)).map(|w| colors[w]).collect();
                    let mut ins: Vec<u32> =
                        (0..n).filter(|&w| self.has_arc(w, v)).map(|w| colors[w]).collect();
                    outs.sort_unstable();
                    ins.sort_unstable();
                    (colors[v], outs, ins)
                })
                .collect();
            let next = rank(&sigs);
            if distinct(&next) == classes {
                return next;
            }
            colors = next;
        }
    }

    fn are_twins(&self, u: usize, v: usize) -> bool {
        let mu = !(1u16 << v);
        let mv = !(1u16 << u);
        (self.out[u] & mu) == (self.out[v] & mv)
            && (self.inn[u] & mu) == (self.inn[v] & mv)
            && self.has_arc(u, v) == self.has_arc(v, u)
    }

    fn search_leaves(&self, colors: Vec<u32>, best: &mut Option<(u128, Vec<usize>)>) {
        let n = self.n;
        if distinct(&colors) == n {
            let mut order = vec![0usize; n];
            for v in 0..n {
                order[colors[v] as usize] = v;
            }
            let code = self.code_for(&order);
            if best.as_ref().is_none_or(|(c, _)| code < *c) {
                *best = Some((code, order));
            }
            return;
        }
        // first non-singleton cell in colour order
        let mut sizes = vec![0usize; n];
        for &c in &colors {
            sizes[c as usize] += 1;
        }
        let target = sizes.iter().position(|&s| s > 1).expect("non-discrete") as u32;
        let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cell {
            if tried.iter().any(|&t| self.are_twins(t, v)) {
                continue;
            }
            tried.push(v);
            let keys: Vec<(u32, u32)> = (0..n)
                .map(|w| (colors[w], u32::from(colors[w] == target && w != v)))
                .collect();
            let next = self.refine(rank(&keys));
            self.search_leaves(next, best);
        }
    }
}

fn rank<T: Ord + Clone>(keys: &[T]) -> Vec<u32> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("present") as u32)
        .collect()
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

pub fn canonical_key(d: &Digraph) -> CanonKey {
    SmallDigraph::from_digraph(d).canonical_key()
}

/// Injective map `phi` from the vertices of `pattern` into `host` such that
/// every arc `(a, b)` of the pattern has `(phi[a], phi[b])` in the host.
pub fn find_monomorphism(pattern: &SmallDigraph, host: &SmallDigraph) -> Option<Vec<usize>> {
    if pattern.n() > host.n() || pattern.arc_count() > host.arc_count() {
        return None;
    }
    // most constrained pattern vertices first
    let mut order: Vec<usize> = (0..pattern.n()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(pattern.outdegree(v) + pattern.indegree(v)));
    let mut phi = vec![usize::MAX; pattern.n()];
    let mut used = 0u16;
    if extend(pattern, host, &order, 0, &mut phi, &mut used) {
        Some(phi)
    } else {
        None
    }
}

fn extend(
    p: &SmallDigraph,
    h: &SmallDigraph,
    order: &[usize],
    depth: usize,
    phi: &mut [usize],
    used: &mut u16,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let a = order[depth];
    for t in 0..h.n() {
        if *used >> t & 1 == 1 || h.outdegree(t) < p.outdegree(a) || h.indegree(t) < p.indegree(a) {
            continue;
        }
        let consistent = order[..depth].iter().all(|&b| {
            (!p.has_arc(a, b) || h.has_arc(t, phi[b])) && (!p.has_arc(b, a) || h.has_arc(phi[b], t))
        });
        if !consistent {
            continue;
        }
        phi[a] = t;
        *used |= 1 << t;
        if extend(p, h, order, depth + 1, phi, used) {
            return true;
        }
        *used &= !(1 << t);
    }
    phi[a] = usize::MAX;
    false
}

/// Bijection `phi` with `(a, b)` an arc of `a_graph` iff `(phi[a], phi[b])` is an arc of `b_graph`.
pub fn find_isomorphism(a_graph: &SmallDigraph, b_graph: &SmallDigraph) -> Option<Vec<usize>> {
    if a_graph.n() != b_graph.n() || a_graph.arc_count() != b_graph.arc_count() {
        return None;
    }
    find_monomorphism(a_graph, b_graph)
}
