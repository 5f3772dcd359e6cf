//! The three vertex reductions at a vertex `u` of outdegree at most one,
//! and the lifting of support-property witnesses back through them.

use num::Zero;
use serde::Serialize;

use super::props::{schur_complement, SpWitness};
use super::{in_q0, Rational, RationalMatrix};
use crate::digraph::{Digraph, VertexId};
use crate::error::{Error, Result};
use crate::minors::{butterfly_contract, star_contract};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionKind {
    /// `a_uu != 0`, `a_uv != 0`: Schur complement on `u`, digraph `D / uv`.
    Contract,
    /// `a_uu != 0`, `a_uv = 0` (or no out-arc): drop row and column `u`, digraph `D - u`.
    Delete,
    /// `a_uu = 0`, `a_uv != 0`: drop row `u` and column `v`, digraph `D * uv`.
    Semicontract,
}

/// Which reduction was applied where, against the unreduced instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ReductionContext {
    pub kind: ReductionKind,
    pub u: VertexId,
    /// The out-neighbour of `u`, if it has one.
    pub v: Option<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduced {
    pub context: ReductionContext,
    pub digraph: Digraph,
    pub matrix: RationalMatrix,
}

/// Index of vertex `i != u` once `u` is gone.
fn shift(i: usize, u: usize) -> usize {
    i - usize::from(i > u)
}

fn setup(d: &Digraph, a: &RationalMatrix, u: VertexId) -> Result<Option<VertexId>> {
    if a.n() != d.n() {
        return Err(Error::input(format!(
            "matrix order {} differs from digraph order {}",
            a.n(),
            d.n()
        )));
    }
    d.check_vertex(u)?;
    if !in_q0(d, a)? {
        return Err(Error::reduce("matrix is not in Q0 of the digraph"));
    }
    match d.out_neighbors(u) {
        [] => Ok(None),
        [v] => Ok(Some(*v)),
        _ => Err(Error::reduce(format!("vertex {u} has outdegree {}", d.outdegree(u)))),
    }
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::reduce(what.to_string()))
    }
}

pub fn reduce_contract(d: &Digraph, a: &RationalMatrix, u: VertexId) -> Result<Reduced> {
    let v = setup(d, a, u)?.ok_or_else(|| Error::reduce(format!("vertex {u} has outdegree 0")))?;
    require(!a.is_zero_at(u, u), "contract needs a_uu != 0")?;
    require(!a.is_zero_at(u, v), "contract needs a_uv != 0")?;
    let (digraph, _) = butterfly_contract(d, u, v)?;
    let matrix = schur_complement(a, &[u])?;
    Ok(Reduced {
        context: ReductionContext {
            kind: ReductionKind::Contract,
            u,
            v: Some(v),
        },
        digraph,
        matrix,
    })
}

pub fn reduce_delete(d: &Digraph, a: &RationalMatrix, u: VertexId) -> Result<Reduced> {
    let v = setup(d, a, u)?;
    require(!a.is_zero_at(u, u), "delete needs a_uu != 0")?;
    if let Some(v) = v {
        require(a.is_zero_at(u, v), "delete needs a_uv = 0")?;
    }
    let (digraph, _) = d.delete_vertex(u)?;
    let keep: Vec<usize> = (0..d.n()).filter(|&i| i != u).collect();
    Ok(Reduced {
        context: ReductionContext {
            kind: ReductionKind::Delete,
            u,
            v,
        },
        digraph,
        matrix: a.principal(&keep),
    })
}

/// The merged vertex of `D * uv` sits at `v`'s new index; its row is row
/// `v` of `A` and its column is column `u`.
pub fn reduce_semicontract(d: &Digraph, a: &RationalMatrix, u: VertexId) -> Result<Reduced> {
    let v = setup(d, a, u)?.ok_or_else(|| Error::reduce(format!("vertex {u} has outdegree 0")))?;
    require(a.is_zero_at(u, u), "semicontract needs a_uu = 0")?;
    require(!a.is_zero_at(u, v), "semicontract needs a_uv != 0")?;
    let (digraph, _) = star_contract(d, u, v)?;
    let mut matrix = RationalMatrix::zeros(d.n() - 1);
    for i in (0..d.n()).filter(|&i| i != u) {
        for j in (0..d.n()).filter(|&j| j != v) {
            let col = if j == u { shift(v, u) } else { shift(j, u) };
            matrix.set(shift(i, u), col, a.get(i, j).clone());
        }
    }
    Ok(Reduced {
        context: ReductionContext {
            kind: ReductionKind::Semicontract,
            u,
            v: Some(v),
        },
        digraph,
        matrix,
    })
}

/// Lifts a witness for the reduced instance to one for `(d, a)`.
///
/// Off `u`, entries are copied through the index shift. At `u`, `x_u` is
/// chosen so that `x^T A` vanishes in the column that row `u` meets:
/// `x_u = -x'^T A[rest, u] / a_uu` for contract and delete,
/// `x_u = -x'^T A[rest, v] / a_uv` for semicontract. For contract
/// `y_u = -(a_uv / a_uu) y'_v`; delete sets `y_u = 0`; semicontract reads
/// `y_u` from the merged vertex and sets `y_v = 0`.
///
/// The result is validated; a failure is an internal error.
pub fn lift_sp_witness(
    d: &Digraph,
    a: &RationalMatrix,
    ctx: &ReductionContext,
    reduced: &SpWitness,
) -> Result<SpWitness> {
    let n = d.n();
    if a.n() != n || n == 0 || reduced.x.len() != n - 1 || reduced.y.len() != n - 1 {
        return Err(Error::input("witness does not match the reduced order"));
    }
    let u = ctx.u;
    let mut x = vec![Rational::zero(); n];
    let mut y = vec![Rational::zero(); n];
    for i in (0..n).filter(|&i| i != u) {
        x[i] = reduced.x[shift(i, u)].clone();
    }
    let dot_col = |x: &[Rational], col: usize| {
        (0..n)
            .filter(|&i| i != u)
            .fold(Rational::zero(), |acc, i| acc + &x[i] * a.get(i, col))
    };
    let need_v = || ctx.v.ok_or_else(|| Error::input("reduction context has no out-neighbour"));
    match ctx.kind {
        ReductionKind::Contract | ReductionKind::Delete => {
            x[u] = -dot_col(&x, u) / a.get(u, u);
            for i in (0..n).filter(|&i| i != u) {
                y[i] = reduced.y[shift(i, u)].clone();
            }
            if ctx.kind == ReductionKind::Contract {
                let v = need_v()?;
                y[u] = -(a.get(u, v) / a.get(u, u)) * &reduced.y[shift(v, u)];
            }
        }
        ReductionKind::Semicontract => {
            let v = need_v()?;
            x[u] = -dot_col(&x, v) / a.get(u, v);
            for j in (0..n).filter(|&j| j != v) {
                let at = if j == u { shift(v, u) } else { shift(j, u) };
                y[j] = reduced.y[at].clone();
            }
        }
    }
    let lifted = SpWitness { x, y };
    lifted.validate(d, a)?;
    Ok(lifted)
}
