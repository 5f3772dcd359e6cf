//! Random matrices over digraph patterns and the randomized search for
//! ASAP matrices of large nullity.

use num::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::props::asap_check;
use super::{rat, Dense, Rational, RationalMatrix};
use crate::digraph::Digraph;

const NONZERO: [i64; 6] = [-3, -2, -1, 1, 2, 3];

/// Nonzero entries are uniform on `{±1, ±2, ±3}`; free entries are zero
/// with probability one half and otherwise drawn the same way.
pub fn sample_entry<R: Rng + ?Sized>(rng: &mut R, forced_nonzero: bool) -> i64 {
    if !forced_nonzero && rng.gen_bool(0.5) {
        0
    } else {
        *NONZERO.choose(rng).expect("nonempty")
    }
}

fn on_pattern(d: &Digraph, i: usize, j: usize) -> bool {
    i == j || d.has_arc(i, j)
}

pub fn random_q_matrix<R: Rng + ?Sized>(d: &Digraph, rng: &mut R) -> RationalMatrix {
    RationalMatrix::from_fn(d.n(), |i, j| {
        if on_pattern(d, i, j) {
            rat(sample_entry(rng, true))
        } else {
            rat(0)
        }
    })
}

pub fn random_q0_matrix<R: Rng + ?Sized>(d: &Digraph, rng: &mut R) -> RationalMatrix {
    RationalMatrix::from_fn(d.n(), |i, j| {
        if on_pattern(d, i, j) {
            rat(sample_entry(rng, false))
        } else {
            rat(0)
        }
    })
}

/// Row `i` restricted to `pattern` drawn from the vectors orthogonal to
/// every column of `y`. `None` if `forced` and some entry came out zero.
fn solve_row<R: Rng + ?Sized>(y: &[Vec<i64>], pattern: &[usize], forced: bool, rng: &mut R) -> Option<Vec<Rational>> {
    let k = y.first().map_or(0, Vec::len);
    let system = Dense::from_fn(k, pattern.len(), |t, c| rat(y[pattern[c]][t]));
    let basis = system.null_space();
    let mut row = vec![Rational::zero(); pattern.len()];
    for b in &basis {
        let coef = rat(sample_entry(rng, false));
        for (r, v) in row.iter_mut().zip(b) {
            *r += &coef * v;
        }
    }
    if forced && row.iter().any(Zero::is_zero) {
        return None;
    }
    Some(row)
}

fn sample_null_vectors<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<Vec<i64>> {
    (0..n).map(|_| (0..k).map(|_| sample_entry(rng, false)).collect()).collect()
}

/// A matrix built so that `k` random vectors lie in its right null space.
/// `forced` selects `Q(D)` (rejecting zeros on the pattern) over `Q0(D)`.
fn matrix_with_kernel<R: Rng + ?Sized>(d: &Digraph, k: usize, forced: bool, rng: &mut R) -> Option<RationalMatrix> {
    let n = d.n();
    let y = sample_null_vectors(n, k, rng);
    let mut a = RationalMatrix::zeros(n);
    for i in 0..n {
        let mut pattern: Vec<usize> = d.out_neighbors(i).to_vec();
        pattern.push(i);
        pattern.sort_unstable();
        let row = solve_row(&y, &pattern, forced, rng)?;
        for (c, v) in pattern.iter().zip(row) {
            a.set(i, *c, v);
        }
    }
    Some(a)
}

/// A matrix in `Q0(D)` with nullity at least `k`, or `None` when the draw
/// fell short.
pub fn seeded_q0_matrix<R: Rng + ?Sized>(d: &Digraph, k: usize, rng: &mut R) -> Option<RationalMatrix> {
    matrix_with_kernel(d, k, false, rng).filter(|a| a.nullity() >= k)
}

/// A matrix in `Q(D)` with nullity at least `k`, or `None` when the draw
/// fell short or hit a zero on the pattern.
pub fn seeded_q_matrix<R: Rng + ?Sized>(d: &Digraph, k: usize, rng: &mut R) -> Option<RationalMatrix> {
    matrix_with_kernel(d, k, true, rng).filter(|a| a.nullity() >= k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuCertificate {
    pub matrix: RationalMatrix,
    pub nullity: usize,
    /// Index of the trial that produced the matrix.
    pub trial: u64,
}

/// Looks for `A` in `Q(D)` with the ASAP and nullity at least `target`.
///
/// Each trial draws `target` candidate null vectors, solves every row
/// within its pattern, and keeps the matrix only if all pattern entries are
/// nonzero, the nullity reaches `target`, and the ASAP holds. Trial `t`
/// uses ChaCha8 stream `t` of `seed`; the lowest successful trial wins, so
/// the result does not depend on scheduling. `None` proves nothing.
pub fn nu_lower_bound_search(d: &Digraph, target: usize, trials: u64, seed: u64) -> Option<NuCertificate> {
    (0..trials).into_par_iter().find_map_first(|trial| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let a = matrix_with_kernel(d, target, true, &mut rng)?;
        let nullity = a.nullity();
        if nullity < target || !asap_check(&a).holds {
            return None;
        }
        Some(NuCertificate { matrix: a, nullity, trial })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{in_q, in_q0};
    use crate::minors::Pattern;

    #[test]
    fn sampled_matrices_fit_their_patterns() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let d = Pattern::M5.digraph();
        for _ in 0..20 {
            assert!(in_q(&d, &random_q_matrix(&d, &mut rng)).unwrap());
            assert!(in_q0(&d, &random_q0_matrix(&d, &mut rng)).unwrap());
        }
        let a = (0..50).find_map(|_| seeded_q0_matrix(&d, 2, &mut rng)).unwrap();
        assert!(in_q0(&d, &a).unwrap());
        assert!(a.nullity() >= 2);
    }

    #[test]
    fn search_finds_k2_and_k3_certificates() {
        let c = nu_lower_bound_search(&Digraph::complete(2), 1, 200, 1).unwrap();
        assert!(c.nullity >= 1 && asap_check(&c.matrix).holds);
        assert!(in_q(&Digraph::complete(2), &c.matrix).unwrap());
        let c = nu_lower_bound_search(&Digraph::complete(3), 2, 200, 1).unwrap();
        assert_eq!(c.nullity, 2);
    }

    #[test]
    fn search_is_deterministic() {
        let a = nu_lower_bound_search(&Digraph::complete(3), 2, 100, 9);
        let b = nu_lower_bound_search(&Digraph::complete(3), 2, 100, 9);
        assert_eq!(a, b);
    }

    #[test]
    fn acyclic_digraphs_get_nothing() {
        assert!(nu_lower_bound_search(&Digraph::path(3), 1, 500, 3).is_none());
    }
}
