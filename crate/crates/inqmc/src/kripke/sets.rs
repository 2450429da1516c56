use std::fmt;

use serde::{Deserialize, Serialize};

macro_rules! small_bit_set {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(
            Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord,
            Serialize, Deserialize,
        )]
        #[serde(transparent)]
        pub struct $name(pub u64);

        impl $name {
            pub const EMPTY: $name = $name(0);

            pub fn singleton(index: u32) -> Self {
                debug_assert!(index < 64);
                $name(1 << index)
            }

            pub fn from_indices(indices: impl IntoIterator<Item = u32>) -> Self {
                let mut set = $name(0);
                for i in indices {
                    set.insert(i);
                }
                set
            }

            pub fn is_empty(self) -> bool {
                self.0 == 0
            }

            pub fn len(self) -> u32 {
                self.0.count_ones()
            }

            pub fn contains(self, index: u32) -> bool {
                index < 64 && self.0 & (1 << index) != 0
            }

            pub fn insert(&mut self, index: u32) {
                debug_assert!(index < 64);
                self.0 |= 1 << index;
            }

            pub fn union(self, other: Self) -> Self {
                $name(self.0 | other.0)
            }

            pub fn intersect(self, other: Self) -> Self {
                $name(self.0 & other.0)
            }

            pub fn is_subset_of(self, other: Self) -> bool {
                self.0 & !other.0 == 0
            }

            pub fn iter(self) -> impl Iterator<Item = u32> {
                let mut bits = self.0;
                std::iter::from_fn(move || {
                    if bits == 0 {
                        None
                    } else {
                        let i = bits.trailing_zeros();
                        bits &= bits - 1;
                        Some(i)
                    }
                })
            }

            /// All subsets of this set, the empty set first and `self` last.
            pub fn subsets(self) -> impl Iterator<Item = Self> {
                let full = self.0;
                let mut next: Option<u64> = Some(0);
                std::iter::from_fn(move || {
                    let cur = next?;
                    next = if cur == full { None } else { Some((cur.wrapping_sub(full)) & full) };
                    Some($name(cur))
                })
            }
        }
    };
}

small_bit_set! {
    /// A macro-state: a set of Kripke-structure states, as a bit set keyed
    /// by the structure's state ordering. Doubles as the letter type of the
    /// macro-path automata alphabet.
    MacroState
}

small_bit_set! {
    /// A set of atomic propositions (one trace letter), as a bit set keyed
    /// by the declared alphabet ordering.
    PropSet
}

impl fmt::Display for MacroState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_enumeration_covers_the_powerset() {
        let s = MacroState(0b1011);
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert_eq!(subs[0], MacroState::EMPTY);
        assert_eq!(*subs.last().unwrap(), s);
        assert!(subs.iter().all(|t| t.is_subset_of(s)));
    }

    #[test]
    fn iter_yields_set_bits_in_order() {
        let s = PropSet::from_indices([5, 1, 3]);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 3, 5]);
        assert_eq!(s.len(), 3);
    }
}
