use std::fmt;

use crate::error::{Error, Result};
use crate::graphs::SimpleGraph;

/// A partition of the positions `0..size`.
///
/// Blocks are kept in canonical order: each block ascending, blocks sorted by
/// their smallest element. Equality is therefore structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    size: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Validates and canonicalizes a family of blocks covering `0..size`.
    pub fn from_blocks(size: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if size == 0 {
            return Err(Error::domain("partitions need at least one position"));
        }
        let mut seen = vec![false; size];
        let mut blocks = blocks;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::domain("empty block"));
            }
            block.sort_unstable();
            for &x in block.iter() {
                if x >= size {
                    return Err(Error::domain(format!(
                        "position {} outside 1..={size}",
                        x + 1
                    )));
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::domain(format!("position {} in two blocks", x + 1)));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::domain(format!(
                "position {} not covered",
                missing + 1
            )));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { size, blocks })
    }

    /// Groups positions carrying equal labels.
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> Self {
        let mut reps: Vec<&T> = Vec::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (pos, lab) in labels.iter().enumerate() {
            match reps.iter().position(|&r| r == lab) {
                Some(b) => blocks[b].push(pos),
                None => {
                    reps.push(lab);
                    blocks.push(vec![pos]);
                }
            }
        }
        SetPartition {
            size: labels.len(),
            blocks,
        }
    }

    pub(crate) fn from_canonical(size: usize, blocks: Vec<Vec<usize>>) -> Self {
        debug_assert!(blocks.windows(2).all(|w| w[0][0] < w[1][0]));
        SetPartition { size, blocks }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Block index of every position (a restricted growth string).
    pub fn labels(&self) -> Vec<usize> {
        let mut out = vec![0; self.size];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                out[x] = b;
            }
        }
        out
    }

    pub fn same_block(&self, r: usize, s: usize) -> bool {
        self.blocks.iter().any(|b| b.contains(&r) && b.contains(&s))
    }

    /// `self <= other`: every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &SetPartition) -> bool {
        if self.size != other.size {
            return false;
        }
        let lab = other.labels();
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&x| lab[x] == lab[b[0]]))
    }

    pub fn min_block_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_pair_partition(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2)
    }

    pub fn is_noncrossing(&self) -> bool {
        let n = self.blocks.len();
        (0..n).all(|a| (a + 1..n).all(|b| !blocks_cross(&self.blocks[a], &self.blocks[b])))
    }
}

/// Two disjoint sorted blocks cross when their elements interleave as
/// `a < b < a' < b'` with `a, a'` in one block and `b, b'` in the other.
pub fn blocks_cross(a: &[usize], b: &[usize]) -> bool {
    // Walk the merged order and look for the pattern xyxy.
    let mut merged: Vec<(usize, bool)> = a
        .iter()
        .map(|&x| (x, true))
        .chain(b.iter().map(|&x| (x, false)))
        .collect();
    merged.sort_unstable();
    let has_pattern = |first: bool| {
        let want = [first, !first, first, !first];
        let mut idx = 0;
        for &(_, side) in &merged {
            if side == want[idx] {
                idx += 1;
                if idx == 4 {
                    return true;
                }
            }
        }
        false
    };
    has_pattern(true) || has_pattern(false)
}

fn fmt_positions(f: &mut fmt::Formatter<'_>, size: usize, blocks: &[Vec<usize>]) -> fmt::Result {
    let compact = size < 10;
    for (idx, block) in blocks.iter().enumerate() {
        if idx > 0 {
            write!(f, "|")?;
        }
        for (j, x) in block.iter().enumerate() {
            if j > 0 && !compact {
                write!(f, ",")?;
            }
            write!(f, "{}", x + 1)?;
        }
    }
    Ok(())
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_positions(f, self.size, &self.blocks)
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetPartition(")?;
        fmt_positions(f, self.size, &self.blocks)?;
        write!(f, ")")
    }
}

/// A set partition whose blocks all have two elements.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairPartition(SetPartition);

impl PairPartition {
    /// Builds a pair partition from 0-based pairs.
    pub fn from_pairs(size: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let blocks = pairs.iter().map(|&(r, s)| vec![r, s]).collect();
        SetPartition::from_blocks(size, blocks)?.try_into()
    }

    pub fn as_partition(&self) -> &SetPartition {
        &self.0
    }

    pub fn into_partition(self) -> SetPartition {
        self.0
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn num_pairs(&self) -> usize {
        self.0.blocks.len()
    }

    /// Blocks as `(r, s)` with `r < s`, in canonical order.
    pub fn pairs(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.0.blocks.iter().map(|b| (b[0], b[1]))
    }

    /// `partner[r]` is the other element of `r`'s block.
    pub fn partners(&self) -> Vec<usize> {
        let mut out = vec![0; self.size()];
        for (r, s) in self.pairs() {
            out[r] = s;
            out[s] = r;
        }
        out
    }

    /// Intersection graph: one vertex per block (canonical order), an edge
    /// between two blocks when they cross.
    pub fn intersection_graph(&self) -> SimpleGraph {
        let pairs: Vec<_> = self.pairs().collect();
        let mut g = SimpleGraph::edgeless(pairs.len());
        for (a, &(r1, s1)) in pairs.iter().enumerate() {
            for (b, &(r2, s2)) in pairs.iter().enumerate().skip(a + 1) {
                if pairs_cross((r1, s1), (r2, s2)) {
                    g.add_edge(a, b).expect("distinct blocks");
                }
            }
        }
        g
    }

    pub fn crossings(&self) -> usize {
        self.intersection_graph().edge_count()
    }
}

/// Crossing of two pairs given with `r < s`.
pub fn pairs_cross((r1, s1): (usize, usize), (r2, s2): (usize, usize)) -> bool {
    (r1 < r2 && r2 < s1 && s1 < s2) || (r2 < r1 && r1 < s2 && s2 < s1)
}

impl TryFrom<SetPartition> for PairPartition {
    type Error = Error;

    fn try_from(p: SetPartition) -> Result<Self> {
        if p.is_pair_partition() {
            Ok(PairPartition(p))
        } else {
            Err(Error::domain(format!("{p} is not a pair partition")))
        }
    }
}

impl fmt::Display for PairPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for PairPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PairPartition({})", self.0)
    }
}

/// `ker(i)`: positions share a block iff their entries are equal.
pub fn kernel<T: PartialEq>(i: &[T]) -> Result<SetPartition> {
    if i.is_empty() {
        return Err(Error::domain("kernel of an empty tuple"));
    }
    Ok(SetPartition::from_labels(i))
}
