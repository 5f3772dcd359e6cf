//! Exact rational matrices over digraph patterns.
//!
//! Entry `(u, w)` of a matrix attached to a digraph belongs to the arc
//! `u -> w`; diagonal entries belong to the vertices. `Q(D)` asks for
//! nonzero diagonal and arc entries and zeros elsewhere; `Q0(D)` only asks
//! for the zeros.

mod engine;
mod linalg;
mod pattern;
mod props;
mod reduce;
mod sample;

pub use engine::{check_matrix, CheckReport, MatrixVerdict, TraceStep};
pub use pattern::{in_q, in_q0, membership, PatternKind, PatternMembership};
pub use props::{asap_check, schur_complement, sp_check, AsapReport, SpVerdict, SpWitness, SP_LIMIT};
pub use reduce::{
    lift_sp_witness, reduce_contract, reduce_delete, reduce_semicontract, Reduced, ReductionContext, ReductionKind,
};
pub use sample::{nu_lower_bound_search, random_q0_matrix, random_q_matrix, seeded_q0_matrix, seeded_q_matrix, sample_entry, NuCertificate};

pub(crate) use linalg::Dense;

use std::fmt::Write as _;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::digraph::{parse_count, strip_comment};
use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Square matrix of rationals, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl std::fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.n)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect())
            .collect();
        write!(f, "RationalMatrix{rows:?}")
    }
}

impl RationalMatrix {
    pub fn zeros(n: usize) -> Self {
        RationalMatrix {
            n,
            entries: vec![Rational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn ones(n: usize) -> Self {
        Self::from_fn(n, |_, _| Rational::one())
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        RationalMatrix { n, entries }
    }

    /// Rows of integers; every row must have the same length as the list.
    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::input("matrix is not square"));
        }
        Ok(Self::from_fn(n, |i, j| rat(rows[i][j])))
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::input("matrix is not square"));
        }
        Ok(RationalMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.n + j] = value;
    }

    pub fn is_zero_at(&self, i: usize, j: usize) -> bool {
        self.get(i, j).is_zero()
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.n != other.n {
            return Err(Error::input("dimension mismatch in product"));
        }
        Ok(Self::from_fn(self.n, |i, j| {
            (0..self.n).fold(Rational::zero(), |acc, k| acc + self.get(i, k) * other.get(k, j))
        }))
    }

    /// `B y` for a column vector `y`.
    pub fn apply(&self, y: &[Rational]) -> Vec<Rational> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(y).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    /// `x^T B` for a row vector `x`.
    pub fn apply_left(&self, x: &[Rational]) -> Vec<Rational> {
        (0..self.n)
            .map(|j| (0..self.n).fold(Rational::zero(), |acc, i| acc + &x[i] * self.get(i, j)))
            .collect()
    }

    /// Principal submatrix on `keep`, in the given order.
    pub fn principal(&self, keep: &[usize]) -> RationalMatrix {
        Self::from_fn(keep.len(), |i, j| self.get(keep[i], keep[j]).clone())
    }

    pub(crate) fn dense(&self) -> Dense {
        Dense::from_fn(self.n, self.n, |i, j| self.get(i, j).clone())
    }

    pub fn rank(&self) -> usize {
        self.dense().rank()
    }

    pub fn nullity(&self) -> usize {
        self.n - self.rank()
    }

    /// Basis of `{y : B y = 0}`, each vector scaled to coprime integers.
    pub fn right_nullspace(&self) -> Vec<Vec<Rational>> {
        self.dense().null_space()
    }

    /// Basis of `{x : x^T B = 0}`.
    pub fn left_nullspace(&self) -> Vec<Vec<Rational>> {
        self.transpose().right_nullspace()
    }

    /// Text form: `matrix <n>` then `n` rows of entries written as
    /// integers or `p/q`.
    pub fn to_text(&self) -> String {
        let mut s = format!("matrix {}\n", self.n);
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }

    pub fn parse_text(src: &str) -> Result<Self> {
        let mut lines = src
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, strip_comment(l).trim()))
            .filter(|(_, l)| !l.is_empty());
        let (lineno, header) = lines.next().ok_or_else(|| Error::input("empty matrix file"))?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some("matrix") {
            return Err(Error::input(format!("line {lineno}: expected `matrix <n>`")));
        }
        let n = parse_count(parts.next(), lineno)?;
        let mut rows = Vec::with_capacity(n);
        for (lineno, line) in lines {
            let row = line
                .split_whitespace()
                .map(|tok| parse_rational(tok).map_err(|e| Error::input(format!("line {lineno}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            if row.len() != n {
                return Err(Error::input(format!("line {lineno}: expected {n} entries, found {}", row.len())));
            }
            rows.push(row);
        }
        if rows.len() != n {
            return Err(Error::input(format!("expected {n} rows, found {}", rows.len())));
        }
        Self::from_rows(rows)
    }

    /// JSON form: `{"n": 2, "entries": [["1", "1/2"], ["0", "-3"]]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(MatrixJson {
            n: self.n,
            entries: (0..self.n)
                .map(|i| self.row(i).iter().map(|x| x.to_string()).collect())
                .collect(),
        })
        .expect("matrix serializes")
    }

    pub fn parse_json(src: &str) -> Result<Self> {
        let raw: MatrixJson = serde_json::from_str(src).map_err(|e| Error::input(format!("matrix JSON: {e}")))?;
        if raw.entries.len() != raw.n {
            return Err(Error::input("matrix JSON: row count does not match n"));
        }
        let rows = raw
            .entries
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    /// Picks JSON or text by the first non-blank character.
    pub fn parse_any(src: &str) -> Result<Self> {
        if src.trim_start().starts_with('{') {
            Self::parse_json(src)
        } else {
            Self::parse_text(src)
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    n: usize,
    entries: Vec<Vec<String>>,
}

pub fn parse_rational(tok: &str) -> Result<Rational> {
    let bad = || Error::input(format!("`{tok}` is not a rational number"));
    match tok.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| bad())?;
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::input(format!("`{tok}` has a zero denominator")));
            }
            Ok(Rational::new(p, q))
        }
        None => tok.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad()),
    }
}

/// Support of a vector: indices of its nonzero entries.
pub fn support(v: &[Rational]) -> Vec<usize> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, _)| i).collect()
}

/// Scales a nonzero vector to coprime integers with a positive leading entry.
pub(crate) fn primitive(v: Vec<Rational>) -> Vec<Rational> {
    use num::Integer;
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v;
    }
    let lead_negative = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    let g = if lead_negative { -g } else { g };
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}
