//! Simple digraphs on dense vertex indices `0..n`.
//!
//! Arcs are ordered pairs `(u, w)` with `u != w`, stored once each. Every
//! successor list is kept sorted, so two digraphs with the same arc set
//! compare equal and [`Digraph::arcs`] yields arcs in lexicographic order.
//! A bi-directed edge is simply the pair of arcs `(u, w)` and `(w, u)`.
//!
//! Operations never mutate in place; deletions and contractions return a new
//! digraph together with an old-to-new [`Relabel`] map.

use std::collections::BinaryHeap;
use std::cmp::Reverse;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a vertex, `0 <= v < n` of the owning digraph.
pub type VertexId = usize;

/// Old-to-new vertex map produced by deletions and contractions.
/// `None` marks a vertex that no longer exists.
pub type Relabel = Vec<Option<VertexId>>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digraph {
    succ: Vec<Vec<VertexId>>,
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Digraph({}; ", self.n())?;
        f.debug_list().entries(self.arcs()).finish()?;
        write!(f, ")")
    }
}

impl Digraph {
    /// Digraph with `n` vertices and no arcs.
    pub fn empty(n: usize) -> Self {
        Digraph {
            succ: vec![Vec::new(); n],
        }
    }

    /// Builds a digraph, rejecting self-arcs, duplicates and out-of-range endpoints.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut d = Digraph::empty(n);
        for (u, w) in arcs {
            if u >= n || w >= n {
                return Err(Error::input(format!(
                    "arc ({u}, {w}) has an endpoint outside 0..{n}"
                )));
            }
            if u == w {
                return Err(Error::input(format!("self-arc at vertex {u}")));
            }
            if !d.insert_arc(u, w) {
                return Err(Error::input(format!("duplicate arc ({u}, {w})")));
            }
        }
        Ok(d)
    }

    /// Builds a digraph, silently dropping self-arcs and merging duplicates.
    /// Endpoints must still be in range.
    pub(crate) fn from_arcs_merged<I>(n: usize, arcs: I) -> Self
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut d = Digraph::empty(n);
        for (u, w) in arcs {
            debug_assert!(u < n && w < n);
            if u != w {
                d.insert_arc(u, w);
            }
        }
        d
    }

    pub fn complete(n: usize) -> Self {
        Digraph::from_arcs_merged(
            n,
            (0..n).flat_map(|u| (0..n).map(move |w| (u, w))),
        )
    }

    /// Directed path `0 -> 1 -> ... -> n-1`.
    pub fn path(n: usize) -> Self {
        Digraph::from_arcs_merged(n, (1..n).map(|i| (i - 1, i)))
    }

    /// Directed cycle `0 -> 1 -> ... -> n-1 -> 0`, for `n >= 2`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 2, "a directed cycle needs at least two vertices");
        Digraph::from_arcs_merged(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    fn insert_arc(&mut self, u: VertexId, w: VertexId) -> bool {
        match self.succ[u].binary_search(&w) {
            Ok(_) => false,
            Err(pos) => {
                self.succ[u].insert(pos, w);
                true
            }
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.succ.len()
    }

    pub fn arc_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, ws)| ws.iter().map(move |&w| (u, w)))
    }

    #[inline]
    pub fn has_arc(&self, u: VertexId, w: VertexId) -> bool {
        u < self.n() && self.succ[u].binary_search(&w).is_ok()
    }

    pub fn out_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.succ[v]
    }

    pub fn in_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        (0..self.n()).filter(|&u| self.has_arc(u, v)).collect()
    }

    #[inline]
    pub fn outdegree(&self, v: VertexId) -> usize {
        self.succ[v].len()
    }

    pub fn indegree(&self, v: VertexId) -> usize {
        self.succ.iter().filter(|ws| ws.binary_search(&v).is_ok()).count()
    }

    /// `(outdegree, indegree)` of `v`.
    pub fn degrees(&self, v: VertexId) -> Result<(usize, usize)> {
        self.check_vertex(v)?;
        Ok((self.outdegree(v), self.indegree(v)))
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::input(format!(
                "vertex {v} out of range for a digraph on {} vertices",
                self.n()
            )))
        }
    }

    pub fn reverse(&self) -> Digraph {
        Digraph::from_arcs_merged(self.n(), self.arcs().map(|(u, w)| (w, u)))
    }

    /// Returns a topological order when the digraph has no directed cycle.
    /// Ties are broken by smallest index, so the order is deterministic.
    pub fn is_acyclic(&self) -> Option<Vec<VertexId>> {
        let n = self.n();
        let mut indeg = vec![0usize; n];
        for (_, w) in self.arcs() {
            indeg[w] += 1;
        }
        let mut ready: BinaryHeap<Reverse<VertexId>> =
            (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(v)) = ready.pop() {
            order.push(v);
            for &w in &self.succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.push(Reverse(w));
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// `R` and `S` (in this order) touch if they intersect or some arc goes
    /// from a vertex of `R` to a vertex of `S`.
    pub fn touches(&self, r: &[VertexId], s: &[VertexId]) -> bool {
        r.iter()
            .any(|&a| s.contains(&a) || s.iter().any(|&b| self.has_arc(a, b)))
    }

    pub fn delete_vertex(&self, v: VertexId) -> Result<(Digraph, Relabel)> {
        self.check_vertex(v)?;
        let relabel: Relabel = (0..self.n())
            .map(|i| match i.cmp(&v) {
                std::cmp::Ordering::Less => Some(i),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(i - 1),
            })
            .collect();
        Ok((self.apply_relabel(&relabel, self.n() - 1), relabel))
    }

    pub fn delete_arc(&self, u: VertexId, w: VertexId) -> Result<Digraph> {
        if !self.has_arc(u, w) {
            return Err(Error::input(format!("arc ({u}, {w}) is not present")));
        }
        let mut out = self.clone();
        out.succ[u].retain(|&x| x != w);
        Ok(out)
    }

    /// Removes `drop` and redirects its arcs to `keep`. Self-arcs created by
    /// the merge are removed and parallel arcs merged.
    pub(crate) fn identify(&self, keep: VertexId, drop: VertexId) -> (Digraph, Relabel) {
        debug_assert!(keep != drop && keep < self.n() && drop < self.n());
        let shift = |i: VertexId| if i > drop { i - 1 } else { i };
        let relabel: Relabel = (0..self.n())
            .map(|i| Some(if i == drop { shift(keep) } else { shift(i) }))
            .collect();
        (self.apply_relabel(&relabel, self.n() - 1), relabel)
    }

    fn apply_relabel(&self, relabel: &Relabel, new_n: usize) -> Digraph {
        Digraph::from_arcs_merged(
            new_n,
            self.arcs()
                .filter_map(|(u, w)| Some((relabel[u]?, relabel[w]?))),
        )
    }

    /// Is `h` a subdigraph of `d`? With `injection`, arc `(a, b)` of `h` must
    /// map to arc `(inj[a], inj[b])` of `d`. Without it, an injection is
    /// searched for exhaustively, which is limited to hosts of at most 8
    /// vertices.
    pub fn is_subdigraph(h: &Digraph, d: &Digraph, injection: Option<&[VertexId]>) -> Result<bool> {
        match injection {
            Some(inj) => {
                if inj.len() != h.n() {
                    return Err(Error::input("injection length differs from subdigraph order"));
                }
                let mut seen = vec![false; d.n()];
                for &t in inj {
                    if t >= d.n() || std::mem::replace(&mut seen[t], true) {
                        return Err(Error::input("injection is not an injective map into the host"));
                    }
                }
                Ok(h.arcs().all(|(a, b)| d.has_arc(inj[a], inj[b])))
            }
            None => {
                if d.n() > crate::canon::MAX_SMALL {
                    return Err(Error::Capacity {
                        what: "subdigraph search host",
                        size: d.n(),
                        limit: crate::canon::MAX_SMALL,
                    });
                }
                if h.n() > d.n() {
                    return Ok(false);
                }
                let hs = crate::canon::SmallDigraph::from_digraph(h);
                let ds = crate::canon::SmallDigraph::from_digraph(d);
                Ok(crate::canon::find_monomorphism(&hs, &ds).is_some())
            }
        }
    }

    /// Out-neighbourhoods as bitmasks. Requires `n <= 64`.
    pub(crate) fn out_masks(&self) -> Vec<u64> {
        assert!(self.n() <= 64);
        self.succ
            .iter()
            .map(|ws| ws.iter().fold(0u64, |m, &w| m | (1 << w)))
            .collect()
    }

    /// Text form: `digraph <n>` followed by one `u w` line per arc, 1-based.
    pub fn to_text(&self) -> String {
        let mut s = format!("digraph {}\n", self.n());
        for (u, w) in self.arcs() {
            let _ = writeln!(s, "{} {}", u + 1, w + 1);
        }
        s
    }

    pub fn parse_text(src: &str) -> Result<Digraph> {
        let mut lines = src
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, strip_comment(l).trim()))
            .filter(|(_, l)| !l.is_empty());
        let (lineno, header) = lines
            .next()
            .ok_or_else(|| Error::input("empty digraph file"))?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some("digraph") {
            return Err(Error::input(format!("line {lineno}: expected `digraph <n>`")));
        }
        let n = parse_count(parts.next(), lineno)?;
        if parts.next().is_some() {
            return Err(Error::input(format!("line {lineno}: trailing tokens in header")));
        }
        let mut arcs = Vec::new();
        for (lineno, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(Error::input(format!("line {lineno}: expected `u w`")));
            }
            let u = parse_one_based(toks[0], n, lineno)?;
            let w = parse_one_based(toks[1], n, lineno)?;
            arcs.push((u, w));
        }
        Digraph::from_arcs(n, arcs)
    }

    pub fn to_json(&self) -> String {
        let doc = DigraphJson {
            n: self.n(),
            arcs: self.arcs().map(|(u, w)| [u + 1, w + 1]).collect(),
        };
        serde_json::to_string(&doc).expect("digraph serializes")
    }

    pub fn parse_json(src: &str) -> Result<Digraph> {
        let doc: DigraphJson =
            serde_json::from_str(src).map_err(|e| Error::input(format!("digraph JSON: {e}")))?;
        let n = doc.n;
        let arcs = doc
            .arcs
            .iter()
            .map(|&[u, w]| {
                if u == 0 || w == 0 || u > n || w > n {
                    Err(Error::input(format!("arc [{u}, {w}] out of range 1..={n}")))
                } else {
                    Ok((u - 1, w - 1))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Digraph::from_arcs(n, arcs)
    }

    /// Accepts either the text or the JSON form.
    pub fn parse_any(src: &str) -> Result<Digraph> {
        if src.trim_start().starts_with('{') {
            Digraph::parse_json(src)
        } else {
            Digraph::parse_text(src)
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DigraphJson {
    n: usize,
    arcs: Vec<[usize; 2]>,
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

pub(crate) fn parse_count(tok: Option<&str>, lineno: usize) -> Result<usize> {
    tok.ok_or_else(|| Error::input(format!("line {lineno}: missing count")))?
        .parse()
        .map_err(|_| Error::input(format!("line {lineno}: count is not a natural number")))
}

pub(crate) fn parse_one_based(tok: &str, n: usize, lineno: usize) -> Result<usize> {
    let v: usize = tok
        .parse()
        .map_err(|_| Error::input(format!("line {lineno}: `{tok}` is not a vertex number")))?;
    if v == 0 || v > n {
        return Err(Error::input(format!("line {lineno}: vertex {v} out of range 1..={n}")));
    }
    Ok(v - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2() -> Digraph {
        Digraph::complete(2)
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(k2().reverse(), k2());
        assert_eq!(Digraph::path(3).reverse(), Digraph::from_arcs(3, [(2, 1), (1, 0)]).unwrap());
    }

    #[test]
    fn acyclicity() {
        assert_eq!(Digraph::path(3).is_acyclic(), Some(vec![0, 1, 2]));
        assert!(k2().is_acyclic().is_none());
        let d = Digraph::from_arcs(3, [(2, 0), (0, 1)]).unwrap();
        let order = d.is_acyclic().unwrap();
        let pos = |v: usize| order.iter().position(|&x| x == v).unwrap();
        assert!(d.arcs().all(|(u, w)| pos(u) < pos(w)));
    }

    #[test]
    fn degree_queries() {
        assert_eq!(k2().degrees(0).unwrap(), (1, 1));
        assert_eq!(Digraph::empty(1).degrees(0).unwrap(), (0, 0));
        assert!(matches!(k2().degrees(2), Err(Error::Input(_))));
    }

    #[test]
    fn touching_is_directional() {
        let d = Digraph::from_arcs(3, [(0, 1)]).unwrap();
        assert!(d.touches(&[0], &[1]));
        assert!(!d.touches(&[1], &[0]));
        assert!(d.touches(&[2], &[2]));
        assert!(!d.touches(&[], &[0, 1, 2]));
    }

    #[test]
    fn deletions() {
        let (d, map) = k2().delete_vertex(1).unwrap();
        assert_eq!(d, Digraph::empty(1));
        assert_eq!(map, vec![Some(0), None]);
        assert_eq!(k2().delete_arc(0, 1).unwrap(), Digraph::from_arcs(2, [(1, 0)]).unwrap());
        assert!(matches!(Digraph::path(2).delete_arc(1, 0), Err(Error::Input(_))));
        assert!(Digraph::is_subdigraph(&Digraph::path(2), &k2(), None).unwrap());
        assert!(Digraph::is_subdigraph(&Digraph::path(2), &k2(), Some(&[1, 0])).unwrap());
        assert!(!Digraph::is_subdigraph(&k2(), &Digraph::path(3), None).unwrap());
    }

    #[test]
    fn identify_merges_and_drops_loops() {
        // 0 -> 1 -> 2 -> 0, merge 0 into 1
        let (d, map) = Digraph::cycle(3).identify(1, 0);
        assert_eq!(map, vec![Some(0), Some(0), Some(1)]);
        assert_eq!(d, k2());
    }

    #[test]
    fn construction_rejects_bad_arcs() {
        assert!(Digraph::from_arcs(2, [(0, 0)]).is_err());
        assert!(Digraph::from_arcs(2, [(0, 1), (0, 1)]).is_err());
        assert!(Digraph::from_arcs(2, [(0, 2)]).is_err());
    }

    #[test]
    fn text_and_json_forms() {
        let src = "# a comment\ndigraph 3\n1 2  # trailing\n\n3 1\n";
        let d = Digraph::parse_text(src).unwrap();
        assert_eq!(d, Digraph::from_arcs(3, [(0, 1), (2, 0)]).unwrap());
        let text = d.to_text();
        assert_eq!(text, "digraph 3\n1 2\n3 1\n");
        assert_eq!(Digraph::parse_text(&text).unwrap().to_text(), text);
        let json = d.to_json();
        assert_eq!(json, r#"{"n":3,"arcs":[[1,2],[3,1]]}"#);
        assert_eq!(Digraph::parse_any(&json).unwrap(), d);
        assert!(Digraph::parse_text("digraph 2\n1 3\n").is_err());
        assert!(Digraph::parse_text("graph 2\n").is_err());
        assert!(Digraph::parse_json(r#"{"n":2,"arcs":[[0,1]]}"#).is_err());
    }
}
