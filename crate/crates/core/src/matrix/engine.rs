//! Recursive check that a matrix in `Q0(D)` either has nullity at most one
//! or fails the support property, for digraphs free of the forbidden minors.

use num::Zero;
use serde::Serialize;

use super::props::{sp_check, SpVerdict, SpWitness};
use super::reduce::{lift_sp_witness, reduce_contract, reduce_delete, reduce_semicontract, ReductionContext, ReductionKind};
use super::{in_q0, RationalMatrix};
use crate::digraph::{Digraph, VertexId};
use crate::error::{Error, Result};
use crate::minors::forbidden_scan;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixVerdict {
    NullityAtMostOne,
    SpViolation(SpWitness),
}

/// One event of the recursion. Vertex numbers refer to the instance at
/// that depth; `transposed` marks work on `(reverse(D), A^T)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum TraceStep {
    Reduce {
        kind: ReductionKind,
        u: VertexId,
        v: Option<VertexId>,
        transposed: bool,
        order: usize,
    },
    /// Row `u` and column `v` vanish and there is no arc `u -> v`.
    ZeroPair { u: VertexId, v: VertexId, order: usize },
    NullityAtMostOne { nullity: usize, order: usize },
    /// A lifted witness failed validation at this depth.
    LiftRejected { kind: ReductionKind, order: usize },
    /// Exhaustive support-property check at this depth.
    Exhaustive { violated: bool, order: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub verdict: MatrixVerdict,
    pub trace: Vec<TraceStep>,
}

/// Runs the reduction engine on `(d, a)`.
///
/// At each depth: stop if the nullity is at most one; return the unit
/// witness for a zero row `u` and zero column `v` with no arc `u -> v`;
/// otherwise reduce at the first vertex of outdegree at most one that
/// admits a reduction, falling back to the in-degree side through the
/// transpose. Witnesses are lifted back and validated. Where no reduction
/// applies, or a lift fails, the support property is decided exhaustively.
///
/// Errors: a forbidden minor in `d` is an input error. A matrix of nullity
/// two or more that still has the support property is reported as an
/// internal error.
pub fn check_matrix(d: &Digraph, a: &RationalMatrix) -> Result<CheckReport> {
    if !in_q0(d, a)? {
        return Err(Error::input("matrix is not in Q0 of the digraph"));
    }
    let scan = forbidden_scan(d)?;
    if let Some((p, _)) = scan.first_found() {
        return Err(Error::input(format!("digraph contains the forbidden minor {p}")));
    }
    let mut trace = Vec::new();
    let verdict = match run(d, a, &mut trace)? {
        None => MatrixVerdict::NullityAtMostOne,
        Some(w) => {
            w.validate(d, a)?;
            MatrixVerdict::SpViolation(w)
        }
    };
    Ok(CheckReport { verdict, trace })
}

fn run(d: &Digraph, a: &RationalMatrix, trace: &mut Vec<TraceStep>) -> Result<Option<SpWitness>> {
    let n = d.n();
    let nullity = a.nullity();
    if nullity <= 1 {
        trace.push(TraceStep::NullityAtMostOne { nullity, order: n });
        return Ok(None);
    }
    if let Some((u, v)) = zero_pair(d, a) {
        trace.push(TraceStep::ZeroPair { u, v, order: n });
        return Ok(Some(SpWitness::unit(n, u, v)));
    }
    let reversed = d.reverse();
    let transposed = a.transpose();
    let pick = pick_reduction(d, a)
        .map(|c| (c, false))
        .or_else(|| pick_reduction(&reversed, &transposed).map(|c| (c, true)));
    let Some((ctx, flipped)) = pick else {
        return exhaustive(d, a, nullity, trace);
    };
    let (dd, aa) = if flipped { (&reversed, &transposed) } else { (d, a) };
    let reduced = match ctx.kind {
        ReductionKind::Contract => reduce_contract(dd, aa, ctx.u)?,
        ReductionKind::Delete => reduce_delete(dd, aa, ctx.u)?,
        ReductionKind::Semicontract => reduce_semicontract(dd, aa, ctx.u)?,
    };
    if reduced.matrix.nullity() != nullity {
        return Err(Error::internal(format!("{:?} changed the nullity", ctx.kind)));
    }
    trace.push(TraceStep::Reduce {
        kind: ctx.kind,
        u: ctx.u,
        v: ctx.v,
        transposed: flipped,
        order: n,
    });
    let Some(inner) = run(&reduced.digraph, &reduced.matrix, trace)? else {
        return Ok(None);
    };
    match lift_sp_witness(dd, aa, &ctx, &inner) {
        Ok(w) => Ok(Some(if flipped { w.transposed() } else { w })),
        Err(Error::Internal(_)) => {
            trace.push(TraceStep::LiftRejected { kind: ctx.kind, order: n });
            exhaustive(d, a, nullity, trace)
        }
        Err(e) => Err(e),
    }
}

fn exhaustive(d: &Digraph, a: &RationalMatrix, nullity: usize, trace: &mut Vec<TraceStep>) -> Result<Option<SpWitness>> {
    match sp_check(a, d)? {
        SpVerdict::Violated(w) => {
            trace.push(TraceStep::Exhaustive { violated: true, order: d.n() });
            Ok(Some(w))
        }
        SpVerdict::Holds => {
            trace.push(TraceStep::Exhaustive { violated: false, order: d.n() });
            Err(Error::internal(format!(
                "matrix of nullity {nullity} on {} vertices has the support property:\n{}{}",
                d.n(),
                d.to_text(),
                a.to_text()
            )))
        }
    }
}

fn zero_pair(d: &Digraph, a: &RationalMatrix) -> Option<(VertexId, VertexId)> {
    let n = d.n();
    let zero_rows: Vec<usize> = (0..n).filter(|&u| a.row(u).iter().all(Zero::is_zero)).collect();
    let zero_cols: Vec<usize> = (0..n).filter(|&v| (0..n).all(|i| a.is_zero_at(i, v))).collect();
    zero_rows
        .iter()
        .flat_map(|&u| zero_cols.iter().map(move |&v| (u, v)))
        .find(|&(u, v)| u != v && !d.has_arc(u, v))
}

fn pick_reduction(d: &Digraph, a: &RationalMatrix) -> Option<ReductionContext> {
    (0..d.n()).find_map(|u| {
        let diag = !a.is_zero_at(u, u);
        match *d.out_neighbors(u) {
            [] if diag => Some(ReductionContext {
                kind: ReductionKind::Delete,
                u,
                v: None,
            }),
            [v] => {
                let kind = match (diag, !a.is_zero_at(u, v)) {
                    (true, true) => ReductionKind::Contract,
                    (true, false) => ReductionKind::Delete,
                    (false, true) => ReductionKind::Semicontract,
                    (false, false) => return None,
                };
                Some(ReductionContext { kind, u, v: Some(v) })
            }
            _ => None,
        }
    })
}
