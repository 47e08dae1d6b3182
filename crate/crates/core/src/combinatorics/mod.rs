//! Set and pair partitions, kernels of index tuples, crossings and the
//! graph-relative noncrossing predicate.

mod enumerate;
mod partition;
mod word;

pub use enumerate::{
    enumerate_partitions, pair_partitions, pairings_within, refinements_below, PartitionFilter,
    Partitions, RefinementsBelow,
};
pub use partition::{blocks_cross, kernel, pairs_cross, PairPartition, SetPartition};
pub use word::{Exponent, WordSpec};

use crate::error::{Error, Result};
use crate::graphs::Adjacency;

/// Membership in `NC(g, i)`: `pi <= ker(i)`, and whenever two distinct blocks
/// cross, the vertices they carry are adjacent in `g`.
///
/// Two crossing blocks carrying the same vertex are never admissible, since
/// `g` has no loops.
pub fn is_gn_noncrossing<G: Adjacency + ?Sized>(
    pi: &SetPartition,
    i: &[usize],
    g: &G,
) -> Result<bool> {
    if pi.size() != i.len() {
        return Err(Error::domain(format!(
            "partition of {} positions paired with a tuple of length {}",
            pi.size(),
            i.len()
        )));
    }
    if let Some(&bad) = i.iter().find(|&&v| v >= g.order()) {
        return Err(Error::domain(format!(
            "index {} is not a vertex of a graph with {} vertices",
            bad + 1,
            g.order()
        )));
    }
    let blocks = pi.blocks();
    if !blocks.iter().all(|b| b.iter().all(|&x| i[x] == i[b[0]])) {
        return Ok(false);
    }
    for (a, ba) in blocks.iter().enumerate() {
        for bb in &blocks[a + 1..] {
            if blocks_cross(ba, bb) && !g.is_edge(i[ba[0]], i[bb[0]]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::SimpleGraph;

    #[test]
    fn gn_noncrossing_examples() {
        let cross = SetPartition::from_labels(&[0, 1, 0, 1]);
        let i = [0, 1, 0, 1];
        assert!(!is_gn_noncrossing(&cross, &i, &SimpleGraph::edgeless(2)).unwrap());
        assert!(is_gn_noncrossing(&cross, &i, &SimpleGraph::complete(2)).unwrap());

        let nested = SetPartition::from_labels(&[0, 0, 1, 1]);
        for g in [SimpleGraph::edgeless(2), SimpleGraph::complete(2)] {
            assert!(is_gn_noncrossing(&nested, &[0, 0, 1, 1], &g).unwrap());
        }
    }

    #[test]
    fn gn_noncrossing_requires_refinement_of_kernel() {
        let pi = SetPartition::from_labels(&[0, 0]);
        assert!(!is_gn_noncrossing(&pi, &[0, 1], &SimpleGraph::complete(2)).unwrap());
    }

    #[test]
    fn gn_noncrossing_errors() {
        let pi = SetPartition::from_labels(&[0, 0]);
        assert!(is_gn_noncrossing(&pi, &[0, 0, 0], &SimpleGraph::complete(2)).is_err());
        assert!(is_gn_noncrossing(&pi, &[5, 5], &SimpleGraph::complete(2)).is_err());
    }

    #[test]
    fn crossing_blocks_on_same_vertex_rejected() {
        let pi = SetPartition::from_labels(&[0, 1, 0, 1]);
        assert!(!is_gn_noncrossing(&pi, &[0, 0, 0, 0], &SimpleGraph::complete(1)).unwrap());
    }
}
