//! Exhaustive and random generation of digraphs.

use rand::Rng;

use crate::digraph::Digraph;

/// Ordered pairs `(u, w)`, `u != w`, in lexicographic order.
pub fn ordered_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|u| (0..n).filter(move |&w| w != u).map(move |w| (u, w)))
        .collect()
}

/// The digraph whose arcs are the pairs selected by the bits of `mask`.
pub fn digraph_from_mask(n: usize, mask: u64) -> Digraph {
    let pairs = ordered_pairs(n);
    Digraph::from_arcs(
        n,
        pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p),
    )
    .expect("pairs are valid arcs")
}

/// All `2^(n(n-1))` labeled digraphs on `n` vertices, `n <= 5`.
pub fn all_digraphs(n: usize) -> impl Iterator<Item = Digraph> {
    assert!(n <= 5, "exhaustive enumeration is limited to five vertices");
    let m = n * n.saturating_sub(1);
    (0..1u64 << m).map(move |mask| digraph_from_mask(n, mask))
}

/// Each ordered pair becomes an arc independently with probability `p`.
pub fn random_digraph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Digraph {
    let arcs: Vec<_> = ordered_pairs(n).into_iter().filter(|_| rng.gen_bool(p)).collect();
    Digraph::from_arcs(n, arcs).expect("pairs are valid arcs")
}

/// A uniformly chosen labeled digraph on `n` vertices.
pub fn uniform_digraph<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Digraph {
    random_digraph(n, 0.5, rng)
}

/// Random acyclic digraph: arcs only go forward along a random vertex order.
pub fn random_acyclic<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Digraph {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                arcs.push((order[i], order[j]));
            }
        }
    }
    Digraph::from_arcs(n, arcs).expect("pairs are valid arcs")
}
