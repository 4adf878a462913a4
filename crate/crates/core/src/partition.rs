use std::collections::BTreeSet;
use std::fmt;

/// A set of state or point indices.
pub type StateSet = BTreeSet<usize>;

/// Blocks of a finite ground set.
///
/// Stored canonically: each block sorted, blocks ordered by their smallest
/// element, no empty blocks. Two partitions of the same ground set compare
/// equal iff they have the same blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Canonicalizes `blocks`. Panics if two blocks overlap.
    pub fn from_blocks(blocks: Vec<Vec<usize>>) -> Self {
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .filter(|b| !b.is_empty())
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        blocks.sort_by_key(|b| b[0]);
        let total: usize = blocks.iter().map(Vec::len).sum();
        let distinct: BTreeSet<usize> = blocks.iter().flatten().copied().collect();
        assert_eq!(total, distinct.len(), "partition blocks overlap");
        Partition { blocks }
    }

    pub fn singletons(ground: &[usize]) -> Self {
        Self::from_blocks(ground.iter().map(|&v| vec![v]).collect())
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// At most one block.
    pub fn is_trivial(&self) -> bool {
        self.blocks.len() <= 1
    }

    pub fn ground(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.blocks.iter().flatten().copied().collect();
        g.sort_unstable();
        g
    }

    pub fn block_of(&self, v: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(&v).is_ok())
    }

    /// Every union of blocks, the empty set included, ordered by the bitmask
    /// of chosen blocks. Panics for more than 63 blocks.
    pub fn union_closure(&self) -> Vec<StateSet> {
        let k = self.blocks.len();
        assert!(k < 64, "union closure of {k} blocks is not enumerable");
        (0u64..(1u64 << k))
            .map(|mask| {
                self.blocks
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .flat_map(|(_, b)| b.iter().copied())
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str("{")?;
            for (j, v) in block.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}
