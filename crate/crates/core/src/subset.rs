//! Subsets of the layer set `[L]`, stored as bitmasks.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported number of layers.
pub const MAX_LAYERS: usize = 6;

/// A subset of `{0, .., L-1}`; bit `l` set means layer `l` is present.
///
/// Display is 1-based: `{1,3}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subset(u8);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_mask(mask: u8) -> Self {
        Subset(mask)
    }

    /// Builds a subset from 0-based layer indices.
    pub fn from_layers<I: IntoIterator<Item = usize>>(layers: I) -> Result<Self> {
        let mut mask = 0u8;
        for l in layers {
            if l >= MAX_LAYERS {
                return Err(Error::domain(format!(
                    "layer index {l} exceeds the supported maximum of {MAX_LAYERS} layers"
                )));
            }
            mask |= 1 << l;
        }
        Ok(Subset(mask))
    }

    /// The full set `[L]`.
    pub fn full(layers: usize) -> Self {
        debug_assert!(layers <= MAX_LAYERS);
        Subset(((1u16 << layers) - 1) as u8)
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, l: usize) -> bool {
        l < 8 && self.0 & (1 << l) != 0
    }

    pub fn intersects(self, other: Subset) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_within(self, layers: usize) -> bool {
        (self.0 as u16) < (1u16 << layers)
    }

    /// Complement inside `[L]`.
    pub fn complement(self, layers: usize) -> Subset {
        Subset(!self.0 & Subset::full(layers).0)
    }

    /// Layers in increasing order.
    pub fn layers(self) -> impl DoubleEndedIterator<Item = usize> + Clone {
        (0..8usize).filter(move |&l| self.0 & (1 << l) != 0)
    }

    /// All nonempty subsets of `[L]`, ordered by size and then
    /// lexicographically on the sorted element lists.
    pub fn nonempty(layers: usize) -> Vec<Subset> {
        let mut all: Vec<Subset> = (1..(1u16 << layers)).map(|m| Subset(m as u8)).collect();
        all.sort_by(Subset::canonical_cmp);
        all
    }

    /// All subsets of `[L]` including the empty set, in mask order.
    pub fn all(layers: usize) -> impl Iterator<Item = Subset> {
        (0..(1u16 << layers)).map(|m| Subset(m as u8))
    }

    pub fn canonical_cmp(a: &Subset, b: &Subset) -> Ordering {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.layers().cmp(b.layers()))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (idx, l) in self.layers().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", l + 1)?;
        }
        write!(f, "}}")
    }
}
