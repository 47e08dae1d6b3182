//! Restricted-growth enumeration of set partitions with filters applied while
//! the string is built.

use crate::error::{Error, Result};

use super::partition::{PairPartition, SetPartition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PartitionFilter {
    All,
    Pair,
    NonCrossing,
    NonCrossingPair,
    MinBlock2,
}

impl PartitionFilter {
    fn pairs_only(self) -> bool {
        matches!(
            self,
            PartitionFilter::Pair | PartitionFilter::NonCrossingPair
        )
    }

    fn noncrossing(self) -> bool {
        matches!(
            self,
            PartitionFilter::NonCrossing | PartitionFilter::NonCrossingPair
        )
    }

    fn min_block(self) -> usize {
        match self {
            PartitionFilter::All | PartitionFilter::NonCrossing => 1,
            _ => 2,
        }
    }
}

/// Depth-first iterator over the partitions of `0..k` passing a filter, in
/// lexicographic order of their restricted growth strings.
pub struct Partitions {
    k: usize,
    filter: PartitionFilter,
    labels: Vec<usize>,
    sizes: Vec<usize>,
    first: Vec<usize>,
    last: Vec<usize>,
    saved_last: Vec<usize>,
    cursor: Vec<usize>,
    singles: usize,
    done: bool,
}

impl Partitions {
    pub fn new(k: usize, filter: PartitionFilter) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("cannot enumerate partitions of an empty set"));
        }
        Ok(Partitions {
            k,
            filter,
            labels: Vec::with_capacity(k),
            sizes: Vec::new(),
            first: Vec::new(),
            last: Vec::new(),
            saved_last: Vec::with_capacity(k),
            cursor: vec![0; k + 1],
            singles: 0,
            done: false,
        })
    }

    fn allowed(&self, pos: usize, choice: usize) -> bool {
        let remaining = self.k - pos - 1;
        let min_block = self.filter.min_block();
        if choice == self.sizes.len() {
            // open a new block
            if min_block == 2 && self.singles + 1 > remaining {
                return false;
            }
            return true;
        }
        let size = self.sizes[choice];
        if self.filter.pairs_only() && size >= 2 {
            return false;
        }
        if self.filter.noncrossing() {
            let anchor = self.last[choice];
            for x in anchor + 1..pos {
                if self.first[self.labels[x]] < anchor {
                    return false;
                }
            }
        }
        true
    }

    fn push(&mut self, pos: usize, choice: usize) {
        if choice == self.sizes.len() {
            self.sizes.push(1);
            self.first.push(pos);
            self.last.push(pos);
            self.saved_last.push(usize::MAX);
            self.singles += 1;
        } else {
            if self.sizes[choice] == 1 {
                self.singles -= 1;
            }
            self.sizes[choice] += 1;
            self.saved_last.push(self.last[choice]);
            self.last[choice] = pos;
        }
        self.labels.push(choice);
    }

    fn pop(&mut self) {
        let b = self.labels.pop().expect("nonempty prefix");
        let prev = self.saved_last.pop().expect("saved state");
        self.sizes[b] -= 1;
        if self.sizes[b] == 0 {
            self.sizes.pop();
            self.first.pop();
            self.last.pop();
            self.singles -= 1;
        } else {
            if self.sizes[b] == 1 {
                self.singles += 1;
            }
            self.last[b] = prev;
        }
    }

    fn accept_leaf(&self) -> bool {
        let min = self.filter.min_block();
        self.sizes
            .iter()
            .all(|&s| s >= min && (!self.filter.pairs_only() || s == 2))
    }

    fn build(&self) -> SetPartition {
        let mut blocks = vec![Vec::new(); self.sizes.len()];
        for (pos, &b) in self.labels.iter().enumerate() {
            blocks[b].push(pos);
        }
        SetPartition::from_canonical(self.k, blocks)
    }
}

impl Iterator for Partitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        loop {
            if self.done {
                return None;
            }
            let depth = self.labels.len();
            if depth == self.k {
                let out = self.accept_leaf().then(|| self.build());
                self.pop();
                if out.is_some() {
                    return out;
                }
                continue;
            }
            let choice = self.cursor[depth];
            if choice > self.sizes.len() {
                self.cursor[depth] = 0;
                if depth == 0 {
                    self.done = true;
                    return None;
                }
                self.pop();
                continue;
            }
            self.cursor[depth] += 1;
            if self.allowed(depth, choice) {
                self.push(depth, choice);
            }
        }
    }
}

/// All partitions of `0..k` passing `filter`, in canonical order.
pub fn enumerate_partitions(k: usize, filter: PartitionFilter) -> Result<Vec<SetPartition>> {
    Ok(Partitions::new(k, filter)?.collect())
}

/// Every pair partition of `0..k` (empty for odd `k`).
pub fn pair_partitions(k: usize) -> Result<Vec<PairPartition>> {
    Ok(Partitions::new(k, PartitionFilter::Pair)?
        .map(|p| PairPartition::try_from(p).expect("pair filter"))
        .collect())
}

/// Pair partitions `pi <= ker(labels)`: every block joins two equal labels.
pub fn pairings_within<T: PartialEq>(labels: &[T]) -> Vec<PairPartition> {
    fn recurse<T: PartialEq>(
        labels: &[T],
        partner: &mut [Option<usize>],
        pairs: &mut Vec<(usize, usize)>,
        out: &mut Vec<PairPartition>,
    ) {
        let Some(r) = partner.iter().position(Option::is_none) else {
            let blocks = pairs.iter().map(|&(a, b)| vec![a, b]).collect();
            let p = SetPartition::from_blocks(labels.len(), blocks).expect("perfect matching");
            out.push(PairPartition::try_from(p).expect("pairs"));
            return;
        };
        for s in r + 1..labels.len() {
            if partner[s].is_none() && labels[s] == labels[r] {
                partner[r] = Some(s);
                partner[s] = Some(r);
                pairs.push((r, s));
                recurse(labels, partner, pairs, out);
                pairs.pop();
                partner[r] = None;
                partner[s] = None;
            }
        }
    }

    let mut out = Vec::new();
    if labels.is_empty() || labels.len() % 2 == 1 {
        return out;
    }
    // every label class must have even size
    for (idx, lab) in labels.iter().enumerate() {
        if labels[..idx].contains(lab) {
            continue;
        }
        if labels.iter().filter(|&x| x == lab).count() % 2 == 1 {
            return out;
        }
    }
    let mut partner = vec![None; labels.len()];
    recurse(labels, &mut partner, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Partitions `pi <= rho` whose blocks all have at least `min_block`
/// elements. Yields in odometer order over the blocks of `rho`.
pub struct RefinementsBelow {
    size: usize,
    per_block: Vec<Vec<Vec<Vec<usize>>>>,
    odometer: Vec<usize>,
    done: bool,
}

pub fn refinements_below(rho: &SetPartition, min_block: usize) -> Result<RefinementsBelow> {
    let filter = match min_block {
        1 => PartitionFilter::All,
        2 => PartitionFilter::MinBlock2,
        other => {
            return Err(Error::domain(format!(
                "min_block must be 1 or 2, got {other}"
            )))
        }
    };
    let mut per_block = Vec::with_capacity(rho.num_blocks());
    let mut done = false;
    for block in rho.blocks() {
        let options: Vec<Vec<Vec<usize>>> = Partitions::new(block.len(), filter)?
            .map(|p| {
                p.blocks()
                    .iter()
                    .map(|b| b.iter().map(|&x| block[x]).collect())
                    .collect()
            })
            .collect();
        if options.is_empty() {
            done = true;
        }
        per_block.push(options);
    }
    Ok(RefinementsBelow {
        size: rho.size(),
        odometer: vec![0; per_block.len()],
        per_block,
        done,
    })
}

impl Iterator for RefinementsBelow {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let mut blocks: Vec<Vec<usize>> = self
            .odometer
            .iter()
            .zip(&self.per_block)
            .flat_map(|(&choice, options)| options[choice].iter().cloned())
            .collect();
        blocks.sort_unstable_by_key(|b| b[0]);
        let out = SetPartition::from_canonical(self.size, blocks);

        let mut idx = self.odometer.len();
        loop {
            if idx == 0 {
                self.done = true;
                break;
            }
            idx -= 1;
            self.odometer[idx] += 1;
            if self.odometer[idx] < self.per_block[idx].len() {
                break;
            }
            self.odometer[idx] = 0;
        }
        Some(out)
    }
}
