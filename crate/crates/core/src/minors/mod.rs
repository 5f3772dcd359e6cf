//! Directed minors: butterfly contraction, bi-directed edge contraction,
//! the `D * uv` operation, and exhaustive containment search.
//!
//! A directed minor of `D` is anything reachable from `D` by deleting
//! vertices or arcs, contracting butterfly-contractible arcs, and
//! contracting bi-directed edges.

mod catalog;
mod lowdeg;
mod search;

pub use catalog::{Pattern, FORBIDDEN};
pub use lowdeg::{find_low_degree_pair, LowDegreePair};
pub use search::{
    default_minor_cap, forbidden_scan, forbidden_scan_with, has_directed_minor, has_directed_minor_with, ForbiddenReport,
    MinorSearch, SearchRegime, DEFAULT_MINOR_CAP, MINOR_CAP_ENV,
};

use serde::{Deserialize, Serialize};

use crate::canon::SmallDigraph;
use crate::digraph::{Digraph, Relabel, VertexId};
use crate::error::{Error, Result};

/// True iff `(u, w)` is the only arc leaving `u` or the only arc entering `w`.
pub fn is_butterfly_contractible(d: &Digraph, u: VertexId, w: VertexId) -> Result<bool> {
    if !d.has_arc(u, w) {
        return Err(Error::input(format!("arc ({u}, {w}) is not present")));
    }
    Ok(d.outdegree(u) == 1 || d.indegree(w) == 1)
}

/// Contracts the butterfly-contractible arc `(u, w)`. The merged vertex
/// takes `w`'s place; `u` disappears.
pub fn butterfly_contract(d: &Digraph, u: VertexId, w: VertexId) -> Result<(Digraph, Relabel)> {
    if !is_butterfly_contractible(d, u, w).map_err(|e| Error::contract(e.to_string()))? {
        return Err(Error::contract(format!(
            "arc ({u}, {w}) is neither the only arc out of {u} nor the only arc into {w}"
        )));
    }
    Ok(d.identify(w, u))
}

/// Contracts the bi-directed edge between `u` and `w`. The merged vertex
/// takes `u`'s place; `w` disappears.
pub fn contract_bidirected(d: &Digraph, u: VertexId, w: VertexId) -> Result<(Digraph, Relabel)> {
    if u == w || !d.has_arc(u, w) || !d.has_arc(w, u) {
        return Err(Error::contract(format!("no bi-directed edge between {u} and {w}")));
    }
    let stripped = d.delete_arc(u, w)?.delete_arc(w, u)?;
    Ok(stripped.identify(u, w))
}

/// `D * uv`: drop every arc into `v` except `(u, v)`, then contract `(u, v)`.
/// Requires `(u, v)` to be the only arc leaving `u`.
pub fn star_contract(d: &Digraph, u: VertexId, v: VertexId) -> Result<(Digraph, Relabel)> {
    if u >= d.n() || v >= d.n() || d.out_neighbors(u) != [v] {
        return Err(Error::contract(format!("({u}, {v}) is not the unique arc leaving {u}")));
    }
    let mut stripped = d.clone();
    for w in d.in_neighbors(v) {
        if w != u {
            stripped = stripped.delete_arc(w, v)?;
        }
    }
    Ok(stripped.identify(v, u))
}

/// One operation of a minor witness, indexed against the digraph as it is
/// at the moment the step is applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum MinorStep {
    DeleteVertex { v: VertexId },
    DeleteArc { u: VertexId, w: VertexId },
    ButterflyContract { u: VertexId, w: VertexId },
    BidirectedContract { u: VertexId, w: VertexId },
}

impl MinorStep {
    pub fn apply(&self, d: &Digraph) -> Result<(Digraph, Relabel)> {
        match *self {
            MinorStep::DeleteVertex { v } => d.delete_vertex(v),
            MinorStep::DeleteArc { u, w } => {
                let out = d.delete_arc(u, w)?;
                Ok((out, (0..d.n()).map(Some).collect()))
            }
            MinorStep::ButterflyContract { u, w } => butterfly_contract(d, u, w),
            MinorStep::BidirectedContract { u, w } => contract_bidirected(d, u, w),
        }
    }

    fn one_based(&self) -> MinorStep {
        match *self {
            MinorStep::DeleteVertex { v } => MinorStep::DeleteVertex { v: v + 1 },
            MinorStep::DeleteArc { u, w } => MinorStep::DeleteArc { u: u + 1, w: w + 1 },
            MinorStep::ButterflyContract { u, w } => MinorStep::ButterflyContract { u: u + 1, w: w + 1 },
            MinorStep::BidirectedContract { u, w } => MinorStep::BidirectedContract { u: u + 1, w: w + 1 },
        }
    }

    /// Applies the step to a bitmask digraph. Preconditions are the caller's
    /// responsibility; `MinorWitness::verify` re-checks them on replay.
    pub(crate) fn apply_small(&self, s: &SmallDigraph) -> SmallDigraph {
        match *self {
            MinorStep::DeleteVertex { v } => s.delete_vertex(v),
            MinorStep::DeleteArc { u, w } => {
                let mut t = *s;
                t.remove_arc(u, w);
                t
            }
            MinorStep::ButterflyContract { u, w } => s.identify(w, u),
            MinorStep::BidirectedContract { u, w } => {
                let mut t = *s;
                t.remove_arc(u, w);
                t.remove_arc(w, u);
                t.identify(u, w)
            }
        }
    }
}

/// Replayable evidence that a pattern is a directed minor of a host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorWitness {
    pub steps: Vec<MinorStep>,
    /// `map[i]` is the vertex of the replayed digraph playing pattern vertex `i`.
    pub map: Vec<VertexId>,
}

#[derive(Serialize)]
struct WitnessJson {
    steps: Vec<MinorStep>,
    map: Vec<VertexId>,
}

impl MinorWitness {
    /// Applies all steps to `host`, checking every precondition on the way.
    pub fn replay(&self, host: &Digraph) -> Result<Digraph> {
        self.steps
            .iter()
            .try_fold(host.clone(), |d, step| step.apply(&d).map(|(next, _)| next))
    }

    /// Replays on `host` and checks that `map` is an isomorphism from
    /// `pattern` onto the result.
    pub fn verify(&self, host: &Digraph, pattern: &Digraph) -> Result<()> {
        let result = self.replay(host)?;
        if result.n() != pattern.n() || self.map.len() != pattern.n() {
            return Err(Error::internal("witness result has the wrong order"));
        }
        let mut seen = vec![false; result.n()];
        for &t in &self.map {
            if t >= result.n() || std::mem::replace(&mut seen[t], true) {
                return Err(Error::internal("witness map is not a bijection"));
            }
        }
        if result.arc_count() != pattern.arc_count()
            || pattern.arcs().any(|(a, b)| !result.has_arc(self.map[a], self.map[b]))
        {
            return Err(Error::internal("witness map is not an isomorphism"));
        }
        Ok(())
    }

    /// JSON with 1-based vertex numbers, like every other file format here.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(WitnessJson {
            steps: self.steps.iter().map(MinorStep::one_based).collect(),
            map: self.map.iter().map(|v| v + 1).collect(),
        })
        .expect("witness serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: usize, arcs: &[(usize, usize)]) -> Digraph {
        Digraph::from_arcs(n, arcs.iter().copied()).unwrap()
    }

    #[test]
    fn contractibility() {
        assert!(is_butterfly_contractible(&Digraph::cycle(3), 0, 1).unwrap());
        assert!(!is_butterfly_contractible(&Digraph::complete(3), 0, 1).unwrap());
        assert!(!is_butterfly_contractible(&d(3, &[(0, 1), (0, 2), (2, 1)]), 0, 1).unwrap());
        assert!(is_butterfly_contractible(&Digraph::path(2), 1, 0).is_err());
    }

    #[test]
    fn butterfly_examples() {
        assert_eq!(butterfly_contract(&Digraph::cycle(3), 0, 1).unwrap().0, Digraph::complete(2));
        assert_eq!(butterfly_contract(&Digraph::complete(2), 0, 1).unwrap().0, Digraph::empty(1));
        assert_eq!(butterfly_contract(&Digraph::path(2), 0, 1).unwrap().0, Digraph::empty(1));
        assert!(matches!(
            butterfly_contract(&Digraph::complete(3), 0, 1),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn bidirected_examples() {
        assert_eq!(contract_bidirected(&Digraph::complete(2), 0, 1).unwrap().0, Digraph::empty(1));
        assert_eq!(contract_bidirected(&Digraph::complete(3), 0, 1).unwrap().0, Digraph::complete(2));
        // N4 with c=2, d=3 merged: a=0, b=1, c'=2
        let (out, map) = contract_bidirected(&Pattern::N4.digraph(), 2, 3).unwrap();
        assert_eq!(out, d(3, &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 2)]));
        assert_eq!(map, vec![Some(0), Some(1), Some(2), Some(2)]);
        assert!(contract_bidirected(&Digraph::path(2), 0, 1).is_err());
    }

    #[test]
    fn star_examples() {
        // u=0, v=1, z=2
        let (out, _) = star_contract(&d(3, &[(0, 1), (2, 1), (1, 2)]), 0, 1).unwrap();
        assert_eq!(out, Digraph::path(2));
        assert_eq!(star_contract(&Digraph::path(2), 0, 1).unwrap().0, Digraph::empty(1));
        assert_eq!(star_contract(&Digraph::complete(2), 0, 1).unwrap().0, Digraph::empty(1));
        assert!(star_contract(&d(3, &[(0, 1), (0, 2)]), 0, 1).is_err());
    }

    #[test]
    fn witness_json_is_one_based() {
        let w = MinorWitness {
            steps: vec![MinorStep::ButterflyContract { u: 0, w: 1 }],
            map: vec![1, 0],
        };
        let v = w.to_json_value();
        assert_eq!(v["steps"][0]["op"], "butterfly_contract");
        assert_eq!(v["steps"][0]["u"], 1);
        assert_eq!(v["map"][0], 2);
        w.verify(&Digraph::cycle(3), &Digraph::complete(2)).unwrap();
    }
}
