use crate::digraph::{Digraph, VertexId};

use super::{butterfly_contract, MinorStep};

/// Outcome of [`find_low_degree_pair`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowDegreePair {
    /// Butterfly contractions applied to the input, in order.
    pub trace: Vec<MinorStep>,
    /// The digraph after the contractions in `trace`.
    pub digraph: Digraph,
    /// `(v, w)` in `digraph`: `v` has outdegree at most one, `w` indegree at
    /// most one, `v != w`, and there is no arc between them in either direction.
    pub pair: Option<(VertexId, VertexId)>,
}

fn valid_pair(d: &Digraph, v: VertexId, w: VertexId) -> bool {
    v != w && !d.has_arc(v, w) && !d.has_arc(w, v)
}

/// Looks for a low-outdegree vertex and a low-indegree vertex that are
/// distinct and non-adjacent, contracting arcs when the best candidates
/// coincide or are adjacent. Returns no pair when a side has no candidate
/// or the digraph shrinks to a single vertex.
pub fn find_low_degree_pair(d: &Digraph) -> LowDegreePair {
    let mut current = d.clone();
    let mut trace = Vec::new();
    loop {
        let mut low_out: Vec<VertexId> = (0..current.n()).filter(|&v| current.outdegree(v) <= 1).collect();
        let mut low_in: Vec<VertexId> = (0..current.n()).filter(|&v| current.indegree(v) <= 1).collect();
        low_out.sort_by_key(|&v| (current.outdegree(v), v));
        low_in.sort_by_key(|&v| (current.indegree(v), v));

        let found = low_out
            .iter()
            .flat_map(|&v| low_in.iter().map(move |&w| (v, w)))
            .find(|&(v, w)| valid_pair(&current, v, w));
        if found.is_some() || low_out.is_empty() || low_in.is_empty() || current.n() <= 1 {
            return LowDegreePair {
                trace,
                digraph: current,
                pair: found,
            };
        }

        let (v, w) = (low_out[0], low_in[0]);
        let arc = if v == w {
            // separate the two roles by contracting an arc at v
            if current.outdegree(v) == 1 {
                Some((v, current.out_neighbors(v)[0]))
            } else if current.indegree(v) == 1 {
                Some((current.in_neighbors(v)[0], v))
            } else {
                None
            }
        } else if current.has_arc(v, w) {
            Some((v, w))
        } else {
            // only w -> v is present
            let contractible = |a: VertexId, b: VertexId| current.outdegree(a) == 1 || current.indegree(b) == 1;
            if contractible(w, v) {
                Some((w, v))
            } else if current.outdegree(v) == 1 {
                Some((v, current.out_neighbors(v)[0]))
            } else if current.indegree(w) == 1 {
                Some((current.in_neighbors(w)[0], w))
            } else {
                None
            }
        };
        let Some((a, b)) = arc else {
            return LowDegreePair {
                trace,
                digraph: current,
                pair: None,
            };
        };
        let (next, _) = butterfly_contract(&current, a, b).expect("arc chosen to be contractible");
        trace.push(MinorStep::ButterflyContract { u: a, w: b });
        current = next;
    }
}
