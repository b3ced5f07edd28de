//! Bitmask encoding of variable subsets.
//!
//! Variable `i` (1-based) lives at bit `i - 1`. Masks order subsets
//! lexicographically by integer value, which is also the serialization order.

use std::fmt;

use crate::error::{Error, Result};

/// Largest system size the bitmask layer accepts.
pub const MAX_VARIABLES: usize = 20;

/// A subset of `{1..n}` stored as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetIndex(u32);

impl SubsetIndex {
    pub const EMPTY: SubsetIndex = SubsetIndex(0);

    pub const fn from_mask(mask: u32) -> Self {
        SubsetIndex(mask)
    }

    /// The full set `{1..n}`.
    pub fn full(n: usize) -> Self {
        SubsetIndex(full_mask(n))
    }

    /// Builds a subset from 1-based variable indices, checking them against `n`.
    pub fn from_members(members: &[usize], n: usize) -> Result<Self> {
        let mut mask = 0u32;
        for &i in members {
            if i == 0 || i > n {
                return Err(Error::invalid(format!(
                    "variable index {i} outside 1..={n}"
                )));
            }
            mask |= 1 << (i - 1);
        }
        Ok(SubsetIndex(mask))
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i >= 1);
        SubsetIndex(1 << (i - 1))
    }

    pub const fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i >= 1 && self.0 & (1 << (i - 1)) != 0
    }

    pub fn is_subset_of(self, other: SubsetIndex) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: SubsetIndex) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: SubsetIndex) -> Self {
        SubsetIndex(self.0 | other.0)
    }

    pub fn complement(self, n: usize) -> Self {
        SubsetIndex(!self.0 & full_mask(n))
    }

    /// Whether every member lies in `{1..n}`.
    pub fn fits(self, n: usize) -> bool {
        self.0 & !full_mask(n) == 0
    }

    /// Members in ascending order, 1-based.
    pub fn members(self) -> Vec<usize> {
        (0..32)
            .filter(|b| self.0 & (1 << b) != 0)
            .map(|b| b + 1)
            .collect()
    }
}

impl fmt::Display for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members().iter().map(|m| m.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// All masks of `{1..n}` with exactly `k` members, ascending.
pub fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = SubsetIndex> {
    (0..=full_mask(n))
        .filter(move |m| m.count_ones() as usize == k)
        .map(SubsetIndex)
}

/// All subsets of `within` with exactly `k` members.
pub fn subsets_of_size_within(within: SubsetIndex, k: usize) -> Vec<SubsetIndex> {
    let mut out = Vec::new();
    // Standard submask walk: s = (s - 1) & within.
    let w = within.mask();
    let mut s = w;
    loop {
        if s.count_ones() as usize == k {
            out.push(SubsetIndex(s));
        }
        if s == 0 {
            break;
        }
        s = (s - 1) & w;
    }
    out.reverse();
    out
}
