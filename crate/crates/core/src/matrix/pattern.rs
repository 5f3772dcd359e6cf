use num::Zero;
use serde::Serialize;

use super::RationalMatrix;
use crate::digraph::Digraph;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PatternKind {
    Q,
    Q0,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PatternMembership {
    ForcedNonzero,
    ForcedZero,
    Free,
}

impl PatternMembership {
    pub fn admits(self, zero: bool) -> bool {
        match self {
            PatternMembership::ForcedNonzero => !zero,
            PatternMembership::ForcedZero => zero,
            PatternMembership::Free => true,
        }
    }
}

/// Per-entry constraints, row-major.
pub fn membership(d: &Digraph, kind: PatternKind) -> Vec<Vec<PatternMembership>> {
    let on_pattern = match kind {
        PatternKind::Q => PatternMembership::ForcedNonzero,
        PatternKind::Q0 => PatternMembership::Free,
    };
    (0..d.n())
        .map(|u| {
            (0..d.n())
                .map(|w| {
                    if u == w || d.has_arc(u, w) {
                        on_pattern
                    } else {
                        PatternMembership::ForcedZero
                    }
                })
                .collect()
        })
        .collect()
}

fn fits(d: &Digraph, b: &RationalMatrix, kind: PatternKind) -> Result<bool> {
    if b.n() != d.n() {
        return Err(Error::input(format!(
            "matrix is {0}x{0} but the digraph has {1} vertices",
            b.n(),
            d.n()
        )));
    }
    Ok(membership(d, kind)
        .iter()
        .enumerate()
        .all(|(u, row)| row.iter().enumerate().all(|(w, m)| m.admits(b.get(u, w).is_zero()))))
}

pub fn in_q(d: &Digraph, b: &RationalMatrix) -> Result<bool> {
    fits(d, b, PatternKind::Q)
}

pub fn in_q0(d: &Digraph, b: &RationalMatrix) -> Result<bool> {
    fits(d, b, PatternKind::Q0)
}
