//! Schur complements, the ASAP and the support property.

use num::Zero;

use super::{support, Dense, Rational, RationalMatrix};
use crate::digraph::Digraph;
use crate::error::{Error, Result};

/// Largest order accepted by [`sp_check`], which enumerates vertex subsets.
pub const SP_LIMIT: usize = 14;

/// `B / B[S]` with rows and columns indexed by the complement of `S` in
/// increasing order.
pub fn schur_complement(b: &RationalMatrix, s: &[usize]) -> Result<RationalMatrix> {
    let n = b.n();
    let mut in_s = vec![false; n];
    for &i in s {
        if i >= n || std::mem::replace(&mut in_s[i], true) {
            return Err(Error::input(format!("index set must hold distinct indices below {n}")));
        }
    }
    let mut s_sorted = s.to_vec();
    s_sorted.sort_unstable();
    let rest: Vec<usize> = (0..n).filter(|&i| !in_s[i]).collect();
    let block = Dense::from_fn(s.len(), s.len(), |i, j| b.get(s_sorted[i], s_sorted[j]).clone());
    let inv = block.inverse().ok_or(Error::SingularPivot)?;
    // inv * B[S, rest]
    let right = Dense::from_fn(s.len(), rest.len(), |i, j| {
        (0..s.len()).fold(Rational::zero(), |acc, k| acc + inv.get(i, k) * b.get(s_sorted[k], rest[j]))
    });
    Ok(RationalMatrix::from_fn(rest.len(), |i, j| {
        let correction = (0..s.len()).fold(Rational::zero(), |acc, k| acc + b.get(rest[i], s_sorted[k]) * right.get(k, j));
        b.get(rest[i], rest[j]) - correction
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsapReport {
    pub holds: bool,
    /// Dimension of the space of violating `X`.
    pub dimension: usize,
    pub basis: Vec<RationalMatrix>,
}

/// Solves for all `X` vanishing wherever `B` is nonzero with `X^T B = 0`
/// and `B X^T = 0`. The ASAP holds iff only `X = 0` qualifies.
pub fn asap_check(b: &RationalMatrix) -> AsapReport {
    let n = b.n();
    let unknowns: Vec<(usize, usize)> = (0..n)
        .flat_map(|k| (0..n).map(move |l| (k, l)))
        .filter(|&(k, l)| b.is_zero_at(k, l))
        .collect();
    let mut col_of = vec![None; n * n];
    for (c, &(k, l)) in unknowns.iter().enumerate() {
        col_of[k * n + l] = Some(c);
    }
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            // (X^T B)_{ij} = sum_k X_{k,i} B_{k,j}
            let mut row = vec![Rational::zero(); unknowns.len()];
            for k in 0..n {
                if let Some(c) = col_of[k * n + i] {
                    row[c] += b.get(k, j);
                }
            }
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
            // (B X^T)_{ij} = sum_k B_{i,k} X_{j,k}
            let mut row = vec![Rational::zero(); unknowns.len()];
            for k in 0..n {
                if let Some(c) = col_of[j * n + k] {
                    row[c] += b.get(i, k);
                }
            }
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    let system = Dense::from_fn(rows.len(), unknowns.len(), |i, j| rows[i][j].clone());
    let basis: Vec<RationalMatrix> = system
        .null_space()
        .into_iter()
        .map(|v| {
            let mut x = RationalMatrix::zeros(n);
            for (c, &(k, l)) in unknowns.iter().enumerate() {
                x.set(k, l, v[c].clone());
            }
            x
        })
        .collect();
    AsapReport {
        holds: basis.is_empty(),
        dimension: basis.len(),
        basis,
    }
}

/// A left-null `x` and a right-null `y` whose supports do not touch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpWitness {
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
}

impl SpWitness {
    pub fn unit(n: usize, u: usize, v: usize) -> Self {
        let e = |i: usize| {
            let mut x = vec![Rational::zero(); n];
            x[i] = super::rat(1);
            x
        };
        SpWitness { x: e(u), y: e(v) }
    }

    /// Swaps the roles of `x` and `y`, turning a witness for `(reverse(D), B^T)`
    /// into one for `(D, B)`.
    pub fn transposed(self) -> Self {
        SpWitness { x: self.y, y: self.x }
    }

    /// Checks every defining condition; failures are internal errors.
    pub fn validate(&self, d: &Digraph, b: &RationalMatrix) -> Result<()> {
        let n = b.n();
        if d.n() != n || self.x.len() != n || self.y.len() != n {
            return Err(Error::internal("witness has the wrong length"));
        }
        let (sx, sy) = (support(&self.x), support(&self.y));
        if sx.is_empty() || sy.is_empty() {
            return Err(Error::internal("witness vector is zero"));
        }
        if b.apply_left(&self.x).iter().any(|v| !v.is_zero()) {
            return Err(Error::internal("x is not in the left null space"));
        }
        if b.apply(&self.y).iter().any(|v| !v.is_zero()) {
            return Err(Error::internal("y is not in the right null space"));
        }
        if d.touches(&sx, &sy) {
            return Err(Error::internal("witness supports touch"));
        }
        Ok(())
    }

    /// JSON with string entries and 1-based supports.
    pub fn to_json(&self) -> serde_json::Value {
        let strs = |v: &[Rational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let supp = |v: &[Rational]| support(v).into_iter().map(|i| i + 1).collect::<Vec<_>>();
        serde_json::json!({
            "x": strs(&self.x),
            "y": strs(&self.y),
            "supp_x": supp(&self.x),
            "supp_y": supp(&self.y),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpVerdict {
    Holds,
    Violated(SpWitness),
}

impl SpVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, SpVerdict::Holds)
    }
}

/// Decides the support property exactly. For each vertex set `R` whose rows
/// are dependent, the best partner is every vertex outside `R` and its
/// out-neighbourhood; the property fails iff those columns are dependent too.
pub fn sp_check(b: &RationalMatrix, d: &Digraph) -> Result<SpVerdict> {
    let n = b.n();
    if d.n() != n {
        return Err(Error::input(format!("matrix order {n} differs from digraph order {}", d.n())));
    }
    if n > SP_LIMIT {
        return Err(Error::Capacity {
            what: "support property check",
            size: n,
            limit: SP_LIMIT,
        });
    }
    if b.nullity() == 0 {
        return Ok(SpVerdict::Holds);
    }
    let out = d.out_masks();
    for r_mask in 1u32..(1 << n) {
        let r: Vec<usize> = (0..n).filter(|&i| r_mask >> i & 1 == 1).collect();
        let blocked = r.iter().fold(r_mask as u64, |acc, &i| acc | out[i]);
        let s: Vec<usize> = (0..n).filter(|&j| blocked >> j & 1 == 0).collect();
        if s.is_empty() {
            continue;
        }
        // left null vectors of B[R, .] live in the null space of its transpose
        let rows_t = Dense::from_fn(n, r.len(), |j, i| b.get(r[i], j).clone());
        let Some(xr) = rows_t.null_space().into_iter().next() else {
            continue;
        };
        let cols = Dense::from_fn(n, s.len(), |i, j| b.get(i, s[j]).clone());
        let Some(ys) = cols.null_space().into_iter().next() else {
            continue;
        };
        let mut x = vec![Rational::zero(); n];
        for (k, &i) in r.iter().enumerate() {
            x[i] = xr[k].clone();
        }
        let mut y = vec![Rational::zero(); n];
        for (k, &j) in s.iter().enumerate() {
            y[j] = ys[k].clone();
        }
        let w = SpWitness { x, y };
        w.validate(d, b)?;
        return Ok(SpVerdict::Violated(w));
    }
    Ok(SpVerdict::Holds)
}
