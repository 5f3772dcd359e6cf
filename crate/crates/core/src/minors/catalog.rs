use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};

/// Named digraphs used as minor patterns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pattern {
    K2,
    K3,
    N4,
    M5,
    N4r,
    M5r,
}

/// The five obstructions for stable maximum nullity at most one.
pub const FORBIDDEN: [Pattern; 5] = [Pattern::K3, Pattern::N4, Pattern::M5, Pattern::N4r, Pattern::M5r];

// a=0, b=1, c=2, d=3, e=4
const N4_ARCS: [(usize, usize); 8] = [(0, 1), (1, 0), (1, 2), (2, 1), (2, 3), (3, 2), (0, 2), (3, 1)];
const M5_ARCS: [(usize, usize); 10] = [
    (0, 1),
    (1, 0),
    (1, 2),
    (2, 1),
    (2, 3),
    (3, 2),
    (3, 4),
    (4, 3),
    (0, 2),
    (4, 2),
];

impl Pattern {
    pub fn digraph(self) -> Digraph {
        match self {
            Pattern::K2 => Digraph::complete(2),
            Pattern::K3 => Digraph::complete(3),
            Pattern::N4 => Digraph::from_arcs(4, N4_ARCS).expect("valid pattern"),
            Pattern::M5 => Digraph::from_arcs(5, M5_ARCS).expect("valid pattern"),
            Pattern::N4r => Pattern::N4.digraph().reverse(),
            Pattern::M5r => Pattern::M5.digraph().reverse(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Pattern::K2 => "k2",
            Pattern::K3 => "k3",
            Pattern::N4 => "n4",
            Pattern::M5 => "m5",
            Pattern::N4r => "n4r",
            Pattern::M5r => "m5r",
        }
    }

    pub fn reversed(self) -> Pattern {
        match self {
            Pattern::N4 => Pattern::N4r,
            Pattern::N4r => Pattern::N4,
            Pattern::M5 => Pattern::M5r,
            Pattern::M5r => Pattern::M5,
            p => p,
        }
    }
}

impl std::str::FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "k2" => Pattern::K2,
            "k3" => Pattern::K3,
            "n4" => Pattern::N4,
            "m5" => Pattern::M5,
            "n4r" => Pattern::N4r,
            "m5r" => Pattern::M5r,
            other => return Err(Error::input(format!("unknown pattern `{other}`"))),
        })
    }
}

impl std::fmt::Display for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
