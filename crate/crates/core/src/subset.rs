use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Hard cap on the ground-set size: every subset fits in one machine word.
pub const MAX_GROUND: usize = 16;

/// A subset of the ground set `{0, .., n-1}` stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Subset {
        debug_assert!(n <= MAX_GROUND);
        Subset(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(i: usize) -> Subset {
        Subset(1 << i)
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Subset {
        elements.into_iter().fold(Subset::EMPTY, |s, i| s.with(i))
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn with(self, i: usize) -> Subset {
        Subset(self.0 | 1 << i)
    }

    #[inline]
    pub fn without(self, i: usize) -> Subset {
        Subset(self.0 & !(1 << i))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_proper_subset_of(self, other: Subset) -> bool {
        self.is_subset_of(other) && self != other
    }

    /// Smallest element, if any.
    pub fn min_element(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Elements in increasing order.
    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `self`, including `self` and the empty set.
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            current: 0,
            done: false,
        }
    }

    /// Image under an element relabeling `map[i]`.
    pub fn map(self, map: &[usize]) -> Subset {
        Subset::from_elements(self.iter().map(|i| map[i]))
    }

    /// Compare by sorted element list, which is how flats are ordered
    /// when ties in rank have to be broken deterministically.
    pub fn lex_cmp(self, other: Subset) -> std::cmp::Ordering {
        self.to_vec().cmp(&other.to_vec())
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
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let elements = Vec::<usize>::deserialize(deserializer)?;
        if let Some(&bad) = elements.iter().find(|&&i| i >= MAX_GROUND) {
            return Err(serde::de::Error::custom(format!(
                "element {bad} exceeds the ground-set cap {MAX_GROUND}"
            )));
        }
        Ok(Subset::from_elements(elements))
    }
}

pub struct Elements(u32);

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(i as usize)
    }
}

/// Enumerates submasks in increasing numeric order.
pub struct Subsets {
    mask: u32,
    current: u32,
    done: bool,
}

impl Iterator for Subsets {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        if self.done {
            return None;
        }
        let out = Subset(self.current);
        if self.current == self.mask {
            self.done = true;
        } else {
            self.current = (self.current.wrapping_sub(self.mask)) & self.mask;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn submask_enumeration_is_complete() {
        let s = Subset::from_elements([1, 3, 4]);
        let all: Vec<_> = s.subsets().collect();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|t| t.is_subset_of(s)));
        assert_eq!(all[0], Subset::EMPTY);
        assert_eq!(*all.last().unwrap(), s);
    }

    #[test]
    fn display_and_order() {
        let s = Subset::from_elements([2, 0]);
        assert_eq!(s.to_string(), "{0,2}");
        assert_eq!(s.min_element(), Some(0));
        assert_eq!(Subset::EMPTY.min_element(), None);
        assert_eq!(Subset::full(16).len(), 16);
    }
}
