//! Directed elimination orderings and Kelly-width.
//!
//! Eliminating a vertex `v` deletes it and adds an arc `u -> w` for every
//! in-neighbour `u` and out-neighbour `w` of `v` with `u != w`. The width of
//! an ordering is the largest outdegree a vertex has at the moment it is
//! eliminated, and the Kelly-width of a digraph is one more than the
//! smallest width over all orderings.
//!
//! The digraph left after eliminating a set `S` does not depend on the order
//! in which `S` was eliminated: `u -> w` survives iff some path from `u` to
//! `w` has all its inner vertices in `S`. The exact solver runs a dynamic
//! program over these sets.

use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, Relabel, VertexId};
use crate::error::{Error, Result};

/// Largest order accepted by [`kelly_width_exact`].
pub const KELLY_DP_LIMIT: usize = 20;

/// A permutation of the vertex set, in elimination order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct EliminationOrdering(Vec<VertexId>);

impl EliminationOrdering {
    pub fn new(n: usize, order: Vec<VertexId>) -> Result<Self> {
        let mut seen = vec![false; n];
        if order.len() != n {
            return Err(Error::input(format!("ordering has {} entries for {n} vertices", order.len())));
        }
        for &v in &order {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::input("ordering is not a permutation of the vertices"));
            }
        }
        Ok(EliminationOrdering(order))
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|v| v + 1).collect()
    }
}

pub fn eliminate(d: &Digraph, v: VertexId) -> Result<(Digraph, Relabel)> {
    d.check_vertex(v)?;
    let ins = d.in_neighbors(v);
    let outs = d.out_neighbors(v);
    let shortcuts = ins
        .iter()
        .flat_map(|&u| outs.iter().map(move |&w| (u, w)))
        .filter(|(u, w)| u != w);
    let filled = Digraph::from_arcs_merged(d.n(), d.arcs().chain(shortcuts));
    filled.delete_vertex(v)
}

/// Width of `order`, replaying one elimination at a time.
pub fn ordering_width(d: &Digraph, order: &[VertexId]) -> Result<usize> {
    EliminationOrdering::new(d.n(), order.to_vec())?;
    let mut current = d.clone();
    // position of each original vertex in `current`
    let mut label: Vec<Option<VertexId>> = (0..d.n()).map(Some).collect();
    let mut width = 0;
    for &v in order {
        let cv = label[v].expect("not yet eliminated");
        width = width.max(current.outdegree(cv));
        let (next, relabel) = eliminate(&current, cv)?;
        for l in label.iter_mut() {
            *l = l.and_then(|c| relabel[c]);
        }
        current = next;
    }
    Ok(width)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WidthMethod {
    Exact,
    Greedy,
}

/// Kelly-width (or an upper bound, for the greedy method) with the
/// elimination ordering that attains it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WidthReport {
    pub kelly_width: usize,
    pub ordering: EliminationOrdering,
    pub method: WidthMethod,
}

impl WidthReport {
    pub fn ordering_width(&self) -> usize {
        self.kelly_width.saturating_sub(1)
    }

    /// Re-derives the width from the stored ordering.
    pub fn revalidate(&self, d: &Digraph) -> Result<()> {
        let w = ordering_width(d, self.ordering.as_slice())?;
        let expected = if d.n() == 0 { 0 } else { w + 1 };
        if expected != self.kelly_width {
            return Err(Error::internal(format!(
                "ordering has width {w}, report claims Kelly-width {}",
                self.kelly_width
            )));
        }
        Ok(())
    }
}

/// Outdegree of `v` after eliminating the vertices in `gone`.
#[inline]
fn residual_outdegree(out: &[u32], gone: u32, v: usize) -> u32 {
    let mut seen = out[v];
    let mut stack = seen & gone;
    while stack != 0 {
        let x = stack.trailing_zeros() as usize;
        stack &= stack - 1;
        let fresh = out[x] & !seen;
        seen |= fresh;
        stack |= fresh & gone;
    }
    (seen & !gone & !(1 << v)).count_ones()
}

/// Exact Kelly-width by dynamic programming over eliminated sets.
pub fn kelly_width_exact(d: &Digraph) -> Result<WidthReport> {
    let n = d.n();
    if n > KELLY_DP_LIMIT {
        return Err(Error::Capacity {
            what: "Kelly-width dynamic program",
            size: n,
            limit: KELLY_DP_LIMIT,
        });
    }
    let out: Vec<u32> = d.out_masks().into_iter().map(|m| m as u32).collect();
    let full = (1usize << n) - 1;
    let mut best = vec![u8::MAX; full + 1];
    let mut choice = vec![u8::MAX; full + 1];
    best[0] = 0;
    for set in 0..full {
        let here = best[set];
        if here == u8::MAX {
            continue;
        }
        let gone = set as u32;
        for v in 0..n {
            if set >> v & 1 == 1 {
                continue;
            }
            let w = here.max(residual_outdegree(&out, gone, v) as u8);
            let next = set | 1 << v;
            if w < best[next] {
                best[next] = w;
                choice[next] = v as u8;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut set = full;
    while set != 0 {
        let v = choice[set] as usize;
        order.push(v);
        set &= !(1 << v);
    }
    order.reverse();
    let kelly_width = if n == 0 { 0 } else { best[full] as usize + 1 };
    Ok(WidthReport {
        kelly_width,
        ordering: EliminationOrdering(order),
        method: WidthMethod::Exact,
    })
}

/// Smallest ordering width by trying every permutation. Exponential; for
/// cross-checking the dynamic program on small digraphs.
pub fn min_ordering_width_brute_force(d: &Digraph) -> Result<usize> {
    fn permute(d: &Digraph, prefix: &mut Vec<VertexId>, used: &mut [bool], best: &mut usize) -> Result<()> {
        if prefix.len() == used.len() {
            *best = (*best).min(ordering_width(d, prefix)?);
            return Ok(());
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                permute(d, prefix, used, best)?;
                prefix.pop();
                used[v] = false;
            }
        }
        Ok(())
    }
    if d.n() > 8 {
        return Err(Error::Capacity {
            what: "permutation enumeration",
            size: d.n(),
            limit: 8,
        });
    }
    let mut best = usize::MAX;
    permute(d, &mut Vec::new(), &mut vec![false; d.n()], &mut best)?;
    Ok(if d.n() == 0 { 0 } else { best })
}

/// Greedy width-1 recognition: repeatedly eliminate the lowest-numbered
/// vertex whose current outdegree is at most one. A returned ordering
/// always has width at most one; `None` is inconclusive.
pub fn recognize_width1(d: &Digraph) -> Option<EliminationOrdering> {
    let mut current = d.clone();
    let mut original: Vec<VertexId> = (0..d.n()).collect();
    let mut order = Vec::with_capacity(d.n());
    while current.n() > 0 {
        let v = (0..current.n()).find(|&v| current.outdegree(v) <= 1)?;
        order.push(original[v]);
        original.remove(v);
        current = eliminate(&current, v).expect("vertex in range").0;
    }
    Some(EliminationOrdering(order))
}

/// Upper bound on the Kelly-width: repeatedly eliminate a vertex of least
/// current outdegree, lowest index first.
pub fn greedy_width(d: &Digraph) -> WidthReport {
    let mut current = d.clone();
    let mut original: Vec<VertexId> = (0..d.n()).collect();
    let mut order = Vec::with_capacity(d.n());
    let mut width = 0;
    while current.n() > 0 {
        let v = (0..current.n()).min_by_key(|&v| current.outdegree(v)).expect("nonempty");
        width = width.max(current.outdegree(v));
        order.push(original.remove(v));
        current = eliminate(&current, v).expect("vertex in range").0;
    }
    WidthReport {
        kelly_width: if d.n() == 0 { 0 } else { width + 1 },
        ordering: EliminationOrdering(order),
        method: WidthMethod::Greedy,
    }
}

/// Builds a k-DAG from the complete digraph on `k` vertices. Each script
/// entry adds a vertex `v` with arcs to the listed existing vertices `X`
/// (at most `k`), plus an arc `u -> v` from every existing `u` that has an
/// arc to every vertex of `X` other than itself.
pub fn build_kdag(k: usize, script: &[Vec<VertexId>]) -> Result<Digraph> {
    let n = k + script.len();
    let mut arcs: Vec<(VertexId, VertexId)> = Digraph::complete(k).arcs().collect();
    let mut current = Digraph::complete(k);
    for (step, targets) in script.iter().enumerate() {
        let v = k + step;
        if targets.len() > k {
            return Err(Error::input(format!(
                "vertex {v} has {} out-neighbours, more than k = {k}",
                targets.len()
            )));
        }
        let mut sorted = targets.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != targets.len() || sorted.iter().any(|&x| x >= v) {
            return Err(Error::input(format!(
                "out-neighbours of vertex {v} must be distinct existing vertices"
            )));
        }
        for &x in &sorted {
            arcs.push((v, x));
        }
        for u in 0..v {
            if sorted.iter().all(|&x| x == u || current.has_arc(u, x)) {
                arcs.push((u, v));
            }
        }
        current = Digraph::from_arcs_merged(v + 1, arcs.iter().copied());
    }
    debug_assert_eq!(current.n(), n);
    Ok(current)
}

/// Spanning subdigraph of a k-DAG, decided as Kelly-width at most `k + 1`.
pub fn is_partial_kdag(d: &Digraph, k: usize) -> Result<bool> {
    Ok(kelly_width_exact(d)?.kelly_width <= k + 1)
}

/// `X` guards `W` when they are disjoint and every arc leaving `W` ends in `W ∪ X`.
pub fn guards(d: &Digraph, x: &[VertexId], w: &[VertexId]) -> bool {
    if w.iter().any(|v| x.contains(v)) {
        return false;
    }
    w.iter()
        .filter(|&&u| u < d.n())
        .all(|&u| d.out_neighbors(u).iter().all(|t| w.contains(t) || x.contains(t)))
}

/// How the ordering of the roots is checked.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RootCheck {
    /// `X_{r_q}` is contained in the union of `W_{⪯ r_p}` over `p < q`.
    #[default]
    GuardSets,
    /// `W_{r_q}` is contained in the union of `W_{⪯ r_p}` over `p < q`.
    /// Forces the first root to have an empty `W`.
    Literal,
    Skip,
}

/// A candidate Kelly-decomposition. Node and vertex numbers are 1-based
/// in the JSON form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KellyDecomposition {
    pub nodes: usize,
    #[serde(rename = "dag-arcs")]
    pub dag_arcs: Vec<[usize; 2]>,
    #[serde(rename = "W")]
    pub w: Vec<Vec<VertexId>>,
    #[serde(rename = "X")]
    pub x: Vec<Vec<VertexId>>,
    /// For every node, its children in enumeration order.
    #[serde(rename = "child-order")]
    pub child_order: Vec<Vec<usize>>,
    #[serde(rename = "root-order")]
    pub root_order: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionCheck {
    pub valid: bool,
    pub width: usize,
    pub violations: Vec<String>,
}

impl KellyDecomposition {
    pub fn parse_json(src: &str) -> Result<Self> {
        let one_based: KellyDecomposition =
            serde_json::from_str(src).map_err(|e| Error::input(format!("decomposition JSON: {e}")))?;
        one_based.shifted_down()
    }

    fn shifted_down(self) -> Result<Self> {
        let dec = |v: usize| {
            v.checked_sub(1)
                .ok_or_else(|| Error::input("decomposition indices are 1-based"))
        };
        let dec_all = |vs: Vec<usize>| vs.into_iter().map(dec).collect::<Result<Vec<_>>>();
        Ok(KellyDecomposition {
            nodes: self.nodes,
            dag_arcs: self
                .dag_arcs
                .into_iter()
                .map(|[a, b]| Ok([dec(a)?, dec(b)?]))
                .collect::<Result<_>>()?,
            w: self.w.into_iter().map(dec_all).collect::<Result<_>>()?,
            x: self.x.into_iter().map(dec_all).collect::<Result<_>>()?,
            child_order: self.child_order.into_iter().map(dec_all).collect::<Result<_>>()?,
            root_order: dec_all(self.root_order)?,
        })
    }

    fn check_indexing(&self, d: &Digraph) -> Result<(Vec<Vec<usize>>, Vec<usize>)> {
        let m = self.nodes;
        if self.w.len() != m || self.x.len() != m || self.child_order.len() != m {
            return Err(Error::input("W, X and child-order must have one entry per node"));
        }
        if self.dag_arcs.iter().flatten().any(|&i| i >= m) {
            return Err(Error::input("dag arc refers to a missing node"));
        }
        if self.w.iter().chain(&self.x).flatten().any(|&v| v >= d.n()) {
            return Err(Error::input("vertex set refers to a missing vertex"));
        }
        let mut children = vec![Vec::new(); m];
        let mut has_parent = vec![false; m];
        for &[a, b] in &self.dag_arcs {
            children[a].push(b);
            has_parent[b] = true;
        }
        for (i, listed) in self.child_order.iter().enumerate() {
            let mut a = listed.clone();
            let mut b = children[i].clone();
            a.sort_unstable();
            b.sort_unstable();
            b.dedup();
            if a != b {
                return Err(Error::input(format!("child-order of node {} does not list its children", i + 1)));
            }
        }
        let mut roots: Vec<usize> = (0..m).filter(|&i| !has_parent[i]).collect();
        let mut listed = self.root_order.clone();
        listed.sort_unstable();
        roots.sort_unstable();
        if listed != roots {
            return Err(Error::input("root-order does not list the roots"));
        }
        Ok((children, roots))
    }

    /// Checks every defining condition and reports all violations found.
    pub fn validate(&self, d: &Digraph, root_check: RootCheck) -> Result<DecompositionCheck> {
        let (children, _) = self.check_indexing(d)?;
        let m = self.nodes;
        let mut violations = Vec::new();

        let dag = Digraph::from_arcs_merged(m, self.dag_arcs.iter().map(|&[a, b]| (a, b)));
        if dag.is_acyclic().is_none() || self.dag_arcs.iter().any(|[a, b]| a == b) {
            violations.push("acyclic: T has a directed cycle".to_string());
        }

        let mut owner = vec![0usize; d.n()];
        for part in &self.w {
            for &v in part {
                owner[v] += 1;
            }
        }
        if owner.iter().any(|&c| c != 1) {
            violations.push("partition: W does not partition the vertex set".to_string());
        }

        // W below node i: union over all nodes reachable from i, including i
        let below: Vec<Vec<VertexId>> = (0..m)
            .map(|i| {
                let mut reach = vec![false; m];
                let mut stack = vec![i];
                reach[i] = true;
                while let Some(j) = stack.pop() {
                    for &c in &children[j] {
                        if !std::mem::replace(&mut reach[c], true) {
                            stack.push(c);
                        }
                    }
                }
                let mut set: Vec<VertexId> = (0..m)
                    .filter(|&j| reach[j])
                    .flat_map(|j| self.w[j].iter().copied())
                    .collect();
                set.sort_unstable();
                set.dedup();
                set
            })
            .collect();

        for i in 0..m {
            if !guards(d, &self.x[i], &below[i]) {
                violations.push(format!("guard: X of node {} does not guard W below it", i + 1));
            }
        }

        for i in 0..m {
            let mut allowed: Vec<VertexId> = self.w[i].iter().chain(&self.x[i]).copied().collect();
            for &j in &self.child_order[i] {
                if self.x[j].iter().any(|v| !allowed.contains(v)) {
                    violations.push(format!(
                        "child-order: X of node {} is not covered at its position under node {}",
                        j + 1,
                        i + 1
                    ));
                }
                allowed.extend(below[j].iter().copied());
            }
        }

        if root_check != RootCheck::Skip {
            let mut covered: Vec<VertexId> = Vec::new();
            for &r in &self.root_order {
                let checked = match root_check {
                    RootCheck::GuardSets => &self.x[r],
                    _ => &self.w[r],
                };
                if checked.iter().any(|v| !covered.contains(v)) {
                    violations.push(format!("root-order: root {} is not covered by earlier roots", r + 1));
                }
                covered.extend(below[r].iter().copied());
            }
        }

        let width = (0..m)
            .map(|i| {
                let mut s: Vec<VertexId> = self.w[i].iter().chain(&self.x[i]).copied().collect();
                s.sort_unstable();
                s.dedup();
                s.len()
            })
            .max()
            .unwrap_or(0);
        Ok(DecompositionCheck {
            valid: violations.is_empty(),
            width,
            violations,
        })
    }
}
